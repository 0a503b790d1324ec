use num_traits::Zero;

use super::{PuiseuxExpansion, TruncatedSeries};
use crate::rational::Q;

/// Eigenvalue expansions with their pairwise difference valuations.
#[derive(Clone, Debug)]
pub struct PairwiseValuations {
    /// The `n` individual roots, each `sigma`-orbit stored contiguously.
    pub eigenvalues: Vec<TruncatedSeries>,
    /// Index sets of the `sigma`-orbits, in the order `sigma` visits them.
    pub cycles: Vec<Vec<usize>>,
    /// `q[i][j] = val(a_i - a_j)`; a lower bound where the difference vanishes to precision.
    pub q: Vec<Vec<Q>>,
    pub certified: bool,
}

/// Unfolds every branch into individual roots `sigma^j phi^i y`
/// (`i < residual_degree`, `j < ramification`), repeated by multiplicity.
pub fn unfold(exp: &PuiseuxExpansion) -> (Vec<TruncatedSeries>, Vec<Vec<usize>>) {
    let mut roots = Vec::with_capacity(exp.degree);
    let mut cycles = Vec::new();
    for b in &exp.branches {
        let mut y = b.expansion.regrid(exp.grid);
        for _ in 0..b.residual_degree {
            let mut z = y.clone();
            for _ in 0..b.multiplicity {
                let mut cycle = Vec::with_capacity(b.ramification as usize);
                for _ in 0..b.ramification {
                    cycle.push(roots.len());
                    roots.push(z.clone());
                    z = exp.sigma(&z);
                }
                cycles.push(cycle);
            }
            y = exp.frobenius(&y);
        }
    }
    (roots, cycles)
}

/// `val(a_i - a_j)` for all pairs of unfolded roots.
///
/// Certified when every off-diagonal difference shows a nonzero coefficient
/// strictly below half the target precision.
pub fn pairwise_valuations(exp: &PuiseuxExpansion) -> PairwiseValuations {
    let (eigenvalues, cycles) = unfold(exp);
    let n = eigenvalues.len();
    let half = exp.target / Q::from_integer(2);
    let mut q = vec![vec![Q::zero(); n]; n];
    let mut certified = true;
    for i in 0..n {
        for j in i + 1..n {
            let d = eigenvalues[i].sub(&eigenvalues[j], &exp.field);
            let v = match d.valuation_q() {
                Some(v) => {
                    certified &= v < half;
                    v
                }
                None => {
                    certified = false;
                    d.valuation_lower_q().unwrap_or(exp.target)
                }
            };
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    PairwiseValuations { eigenvalues, cycles, q, certified }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::puiseux::{product_of_linear_factors, puiseux_expand, SeriesPolynomial};

    fn field() -> Field {
        Field::new(10007, 1).unwrap()
    }

    fn expand(lower: Vec<TruncatedSeries>, f: &Field) -> PairwiseValuations {
        let p = SeriesPolynomial::new(lower, f).unwrap();
        pairwise_valuations(&puiseux_expand(&p, f, &Q::from_integer(40), 5).unwrap())
    }

    #[test]
    fn sqrt_t() {
        let f = field();
        let lower = vec![TruncatedSeries::from_coeffs(1, 1, vec![f.from_i64(-1)], 40), TruncatedSeries::zero(1, 40), TruncatedSeries::constant(f.one())];
        let pv = expand(lower, &f);
        assert!(pv.certified);
        assert_eq!(pv.q[0][1], Q::new(1, 2));
        assert_eq!(pv.cycles, vec![vec![0, 1]]);
    }

    #[test]
    fn split() {
        let f = field();
        let roots = [TruncatedSeries::monomial(f.one(), 1, 1), TruncatedSeries::monomial(f.from_u64(2), 1, 1)];
        let pv = expand(product_of_linear_factors(&roots, &f), &f);
        assert_eq!(pv.q[0][1], Q::from_integer(1));
        assert_eq!(pv.cycles.len(), 2);
    }

    #[test]
    fn close_roots() {
        let f = field();
        let roots = [
            TruncatedSeries::from_coeffs(1, 1, vec![f.one(), f.one()], 100),
            TruncatedSeries::from_coeffs(1, 1, vec![f.one(), f.zero(), f.one()], 100),
        ];
        let pv = expand(product_of_linear_factors(&roots, &f), &f);
        assert!(pv.certified);
        assert_eq!(pv.q[0][1], Q::from_integer(2));
    }
}
