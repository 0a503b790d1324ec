use num_integer::Integer;
use num_traits::Zero;

use super::newton::lower_hull;
use super::{binomial, eval_coeffs, fq_pow, newton_polygon, PuiseuxError, SeriesPolynomial, TruncatedSeries};
use crate::field::{roots_with_extension, Field, Fq, MAX_DEGREE};
use crate::rational::{ceil_on_grid, Q};

const MAX_DEPTH: usize = 40;
const MAX_NEWTON_STEPS: usize = 64;

/// One Galois orbit of roots, represented by a single expansion.
///
/// Over the algebraic closure the orbit breaks into `residual_degree`
/// orbits of `t^{1/e} -> zeta t^{1/e}`, each of size `ramification`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxBranch {
    pub expansion: TruncatedSeries,
    pub ramification: u32,
    pub residual_degree: usize,
    pub multiplicity: usize,
}

/// All roots of a monic series polynomial, grouped into branches.
#[derive(Clone, Debug)]
pub struct PuiseuxExpansion {
    /// Field holding every coefficient of every expansion.
    pub field: Field,
    pub branches: Vec<PuiseuxBranch>,
    pub target: Q,
    pub degree: usize,
    /// Common grid `t^{1/grid}` of all roots.
    pub grid: u32,
    /// Grid of the polynomial's coefficients; ramification is measured relative to it.
    pub base_grid: u32,
    /// Primitive `(grid / base_grid)`-th root of unity defining `sigma`.
    pub zeta: Fq,
    /// `c -> c^{p^frobenius_step}` generates the Galois group of the coefficient field.
    pub frobenius_step: usize,
}

impl PuiseuxExpansion {
    /// `t^{1/grid} -> zeta t^{1/grid}`.
    pub fn sigma(&self, y: &TruncatedSeries) -> TruncatedSeries {
        y.regrid(self.grid).sigma(self.zeta, &self.field)
    }

    pub fn frobenius(&self, y: &TruncatedSeries) -> TruncatedSeries {
        y.regrid(self.grid).frobenius(self.frobenius_step, &self.field)
    }
}

enum SolveError {
    /// The current field is too small; the total degree needed.
    Extend(usize),
    Fail(PuiseuxError),
}

impl From<PuiseuxError> for SolveError {
    fn from(e: PuiseuxError) -> Self {
        SolveError::Fail(e)
    }
}

/// Newton-Puiseux expansion of every root of `f` to precision `target` (in `t` units).
///
/// `field` is the field of `f`'s coefficients. The result may live in an
/// extension, large enough to split every edge polynomial and to hold the
/// roots of unity needed for `sigma`. `seed` only drives randomized root
/// splitting; the output does not depend on it.
pub fn puiseux_expand(f: &SeriesPolynomial, field: &Field, target: &Q, seed: u64) -> Result<PuiseuxExpansion, PuiseuxError> {
    let n = f.degree();
    let c = f.coeffs();
    if is_unknown(&c[0]) && is_unknown(&c[1]) {
        return Err(PuiseuxError::NotSquarefreeToPrecision);
    }
    newton_polygon(f)?;
    let base_grid = c.iter().fold(1u64, |g, s| g.lcm(&(s.ramification() as u64))) as u32;

    let mut work = field.clone();
    loop {
        let emb = field.embedding_into(&work)?;
        let g: Vec<TruncatedSeries> = c.iter().map(|s| s.map_coeffs(|_, a| emb.apply(&work, a))).collect();
        let solver = Solver { field: &work, seed };
        let roots = match solver.roots_positive(&g, *target, 0) {
            Ok(r) => r,
            Err(SolveError::Extend(needed)) => {
                work = extend(&work, needed)?;
                continue;
            }
            Err(SolveError::Fail(e)) => return Err(e),
        };
        if roots.len() != n {
            return Err(PuiseuxError::NotTopologicallyNilpotent);
        }
        let roots: Vec<TruncatedSeries> = roots.into_iter().map(|y| on_minimal_grid(&y, base_grid)).collect();
        let grid = roots.iter().fold(base_grid as u64, |g, y| g.lcm(&(y.ramification() as u64))) as u32;
        let order = (grid / base_grid) as u64;
        let Some(zeta) = work.root_of_unity(order) else {
            let needed = work.degree() * work.roots_of_unity_degree(order);
            work = extend(&work, needed)?;
            continue;
        };
        let mut exp = PuiseuxExpansion {
            field: work.clone(),
            branches: Vec::new(),
            target: *target,
            degree: n,
            grid,
            base_grid,
            zeta,
            frobenius_step: field.degree(),
        };
        exp.branches = group(&exp, roots)?;
        return Ok(exp);
    }
}

fn is_unknown(s: &TruncatedSeries) -> bool {
    s.is_zero_to_precision() && !s.is_exact()
}

fn extend(work: &Field, needed: usize) -> Result<Field, PuiseuxError> {
    let m = work.degree().lcm(&needed);
    if m > MAX_DEGREE {
        return Err(PuiseuxError::ExtensionBudgetExceeded { needed: m });
    }
    Ok(Field::new(work.p() as u64, m)?)
}

/// The root rewritten on `lcm(base, minimal ramification)`.
fn on_minimal_grid(y: &TruncatedSeries, base: u32) -> TruncatedSeries {
    let fine = (y.ramification() as u64).lcm(&(base as u64)) as u32;
    let y = y.regrid(fine);
    let e = (y.minimal_ramification() as u64).lcm(&(base as u64)) as u32;
    y.coarsen(e)
}

struct Solver<'a> {
    field: &'a Field,
    seed: u64,
}

impl Solver<'_> {
    /// Every root of positive valuation of `g` (coefficients low degree first),
    /// each to precision at most `cap`.
    fn roots_positive(&self, g: &[TruncatedSeries], cap: Q, depth: usize) -> Result<Vec<TruncatedSeries>, SolveError> {
        let fail = |e| Err(SolveError::Fail(e));
        if depth > MAX_DEPTH {
            return fail(PuiseuxError::NotSquarefreeToPrecision);
        }
        let zeros = g.iter().take_while(|s| s.is_exact() && s.is_zero_to_precision()).count();
        let mut roots = vec![TruncatedSeries::exact_zero(); zeros];
        let g = &g[zeros..];
        if g.len() < 2 {
            return Ok(roots);
        }
        if is_unknown(&g[0]) && is_unknown(&g[1]) {
            return fail(PuiseuxError::NotSquarefreeToPrecision);
        }
        let hull = match lower_hull(g) {
            Ok(h) => h,
            Err(PuiseuxError::IndeterminateValuation) if depth > 0 => return fail(PuiseuxError::NotSquarefreeToPrecision),
            Err(e) => return fail(e),
        };
        for seg in hull.segments.iter().filter(|s| s.slope > Q::zero()) {
            let mu = seg.slope;
            let height = seg.height(&hull.left_valuation(seg));
            let edge = seg.edge_polynomial();
            let rs = roots_with_extension(self.field, &edge, MAX_DEGREE, self.seed ^ depth as u64)
                .map_err(|e| SolveError::Fail(e.into()))?;
            if rs.field.degree() > self.field.degree() {
                return Err(SolveError::Extend(rs.field.degree()));
            }
            for (c, r) in rs.roots {
                if r == 1 {
                    roots.push(self.newton_lift(g, c, mu, height, cap)?);
                } else {
                    roots.extend(self.cluster(g, c, r, mu, height, cap, depth)?);
                }
            }
        }
        Ok(roots)
    }

    /// Lifts the simple edge root `c` to a root `c t^mu + ...` by Newton iteration.
    fn newton_lift(&self, g: &[TruncatedSeries], c: Fq, mu: Q, height: Q, cap: Q) -> Result<TruncatedSeries, SolveError> {
        let f = self.field;
        let dg: Vec<TruncatedSeries> = g.iter().enumerate().skip(1).map(|(k, s)| s.scale(f.from_u64(k as u64), f)).collect();
        let w = height - mu;
        let mut y = TruncatedSeries::monomial_q(c, mu);
        // working precision doubles once the current one is reached
        let mut cur = (mu + mu + w).min(cap);
        for _ in 0..MAX_NEWTON_STEPS {
            let cap_f = cur + w;
            let gy = eval_coeffs(g, &y, f, &cap_f);
            if gy.is_zero_to_precision() {
                match gy.precision_q() {
                    Some(p) if p >= cap_f && cur < cap => {
                        cur = (cur + cur).min(cap);
                        continue;
                    }
                    p => {
                        let p = p.map_or(cap, |p| (p - w).min(cap));
                        return Ok(y.with_precision(ceil_on_grid(&p, y.ramification())));
                    }
                }
            }
            let dy = eval_coeffs(&dg, &y, f, &cap_f);
            if dy.valuation_q() != Some(w) {
                return Err(PuiseuxError::NotSquarefreeToPrecision.into());
            }
            let delta = gy.div_capped(&dy, f, &cur).ok_or(PuiseuxError::NotSquarefreeToPrecision)?;
            y = y.sub(&delta, f).truncate_exact(&cur);
        }
        Err(PuiseuxError::NotSquarefreeToPrecision.into())
    }

    /// The `r` roots with leading term `c t^mu`, via `y = t^mu (c + z)`.
    #[allow(clippy::too_many_arguments)]
    fn cluster(
        &self,
        g: &[TruncatedSeries],
        c: Fq,
        r: usize,
        mu: Q,
        height: Q,
        cap: Q,
        depth: usize,
    ) -> Result<Vec<TruncatedSeries>, SolveError> {
        let f = self.field;
        let h: Vec<TruncatedSeries> = (0..g.len())
            .map(|j| {
                let mut acc = TruncatedSeries::exact_zero();
                for (k, gk) in g.iter().enumerate().skip(j) {
                    let coef = f.mul_u64(fq_pow(f, c, k - j), binomial(k, j) % f.p() as u64);
                    if coef.is_zero() {
                        continue;
                    }
                    let shift = mu * Q::from_integer(k as i64) - height;
                    acc = acc.add(&gk.mul_monomial(coef, &shift, f), f);
                }
                acc
            })
            .collect();
        let zs = self.roots_positive(&h, cap - mu, depth + 1)?;
        if zs.len() != r {
            return Err(PuiseuxError::NotSquarefreeToPrecision.into());
        }
        let lead = TruncatedSeries::constant(c);
        Ok(zs.iter().map(|z| lead.add(z, f).mul_monomial(f.one(), &mu, f)).collect())
    }
}

/// Sorts the roots, merges exact repeats and splits them into Galois orbits.
fn group(exp: &PuiseuxExpansion, roots: Vec<TruncatedSeries>) -> Result<Vec<PuiseuxBranch>, PuiseuxError> {
    let f = &exp.field;
    let mut roots: Vec<TruncatedSeries> = roots.into_iter().map(|y| y.regrid(exp.grid)).collect();
    roots.sort_by_key(root_key);
    let mut distinct: Vec<(TruncatedSeries, usize)> = Vec::new();
    for y in roots {
        match distinct.last_mut() {
            Some((z, m)) if y.is_exact() && z.is_exact() && *z == y => *m += 1,
            _ => distinct.push((y, 1)),
        }
    }
    let find = |y: &TruncatedSeries| -> Result<usize, PuiseuxError> {
        let hits: Vec<usize> = distinct.iter().enumerate().filter(|(_, (z, _))| z.agrees_with(y, f)).map(|(i, _)| i).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(PuiseuxError::NotSquarefreeToPrecision),
        }
    };
    let sigma: Vec<usize> = distinct.iter().map(|(y, _)| find(&exp.sigma(y))).collect::<Result<_, _>>()?;
    let frob: Vec<usize> = distinct.iter().map(|(y, _)| find(&exp.frobenius(y))).collect::<Result<_, _>>()?;

    let mut seen = vec![false; distinct.len()];
    let mut branches = Vec::new();
    for start in 0..distinct.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for next in [sigma[orbit[i]], frob[orbit[i]]] {
                if !seen[next] {
                    seen[next] = true;
                    orbit.push(next);
                }
            }
            i += 1;
        }
        let (rep, mult) = &distinct[start];
        let rep = on_minimal_grid(rep, exp.base_grid);
        let e = rep.ramification() / exp.base_grid;
        let mut sigma_len = 1;
        let mut j = sigma[start];
        while j != start {
            j = sigma[j];
            sigma_len += 1;
        }
        if sigma_len != e as usize || orbit.len() % sigma_len != 0 {
            return Err(PuiseuxError::NotSquarefreeToPrecision);
        }
        if orbit.iter().any(|&k| distinct[k].1 != *mult) {
            return Err(PuiseuxError::NotSquarefreeToPrecision);
        }
        branches.push(PuiseuxBranch { expansion: rep, ramification: e, residual_degree: orbit.len() / sigma_len, multiplicity: *mult });
    }
    Ok(branches)
}

/// Deterministic order on roots: by valuation, then by coefficients.
fn root_key(y: &TruncatedSeries) -> (i64, Vec<(i64, Fq)>) {
    (y.valuation().unwrap_or(i64::MAX), y.terms().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> Field {
        Field::new(10007, 1).unwrap()
    }

    fn mono(f: &Field, c: i64, s: i64, prec: i64) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(1, s, vec![f.from_i64(c)], prec)
    }

    #[test]
    fn sqrt_t() {
        let f = field();
        let p = SeriesPolynomial::monic(vec![mono(&f, -1, 1, 40), TruncatedSeries::zero(1, 40)], &f);
        let exp = puiseux_expand(&p, &f, &Q::from_integer(40), 1).unwrap();
        assert_eq!(exp.branches.len(), 1);
        let b = &exp.branches[0];
        assert_eq!((b.ramification, b.residual_degree, b.multiplicity), (2, 1, 1));
        assert_eq!(b.expansion.valuation_q(), Some(Q::new(1, 2)));
        assert_eq!(exp.field.degree(), 1);
    }

    #[test]
    fn split_unramified() {
        let f = field();
        let p = SeriesPolynomial::monic(vec![mono(&f, 2, 2, 40), mono(&f, -3, 1, 40)], &f);
        let exp = puiseux_expand(&p, &f, &Q::from_integer(40), 1).unwrap();
        assert_eq!(exp.branches.len(), 2);
        for b in &exp.branches {
            assert_eq!((b.ramification, b.residual_degree), (1, 1));
            assert_eq!(b.expansion.terms().count(), 1);
        }
    }

    #[test]
    fn nonresidue_stays_one_sigma_orbit() {
        let f = field();
        let c = (2..).find(|&c| f.pow_u64(f.from_u64(c), (10007 - 1) / 2) != f.one()).unwrap();
        let p = SeriesPolynomial::monic(vec![mono(&f, -(c as i64), 1, 40), TruncatedSeries::zero(1, 40)], &f);
        let exp = puiseux_expand(&p, &f, &Q::from_integer(40), 7).unwrap();
        assert_eq!(exp.field.degree(), 2);
        assert_eq!(exp.branches.len(), 1);
        let b = &exp.branches[0];
        assert_eq!((b.ramification, b.residual_degree), (2, 1));
        // substituting back
        let y = &b.expansion;
        let cap = Q::from_integer(40);
        let emb = f.embedding_into(&exp.field).unwrap();
        let pe = p.map_coeffs(|s| s.map_coeffs(|_, a| emb.apply(&exp.field, a)));
        assert!(pe.eval(y, &exp.field, &cap).is_zero_to_precision());
    }

    #[test]
    fn unramified_conjugate_pair() {
        // lambda^2 - c t^2 with c a non-residue: e = 1, two sigma-orbits swapped by Frobenius
        let f = field();
        let c = (2..).find(|&c| f.pow_u64(f.from_u64(c), (10007 - 1) / 2) != f.one()).unwrap();
        let p = SeriesPolynomial::monic(vec![mono(&f, -(c as i64), 2, 40), TruncatedSeries::zero(1, 40)], &f);
        let exp = puiseux_expand(&p, &f, &Q::from_integer(40), 7).unwrap();
        assert_eq!(exp.branches.len(), 1);
        assert_eq!((exp.branches[0].ramification, exp.branches[0].residual_degree), (1, 2));
    }

    #[test]
    fn cluster_recursion() {
        // (lambda - t - t^2)(lambda - t - 2 t^2): edge polynomial has a double root
        let f = field();
        let a = TruncatedSeries::from_coeffs(1, 1, vec![f.one(), f.one()], 60);
        let b = TruncatedSeries::from_coeffs(1, 1, vec![f.one(), f.from_u64(2)], 60);
        let lower = super::super::product_of_linear_factors(&[a.clone(), b.clone()], &f);
        let p = SeriesPolynomial::new(lower, &f).unwrap();
        let exp = puiseux_expand(&p, &f, &Q::from_integer(30), 3).unwrap();
        assert_eq!(exp.branches.len(), 2);
        let mut got: Vec<_> = exp.branches.iter().map(|br| br.expansion.clone()).collect();
        got.sort_by_key(root_key);
        assert!(got[0].agrees_with(&a, &f));
        assert!(got[1].agrees_with(&b, &f));
    }

    #[test]
    fn nilpotent_matrix_is_not_squarefree() {
        let f = field();
        let p = SeriesPolynomial::monic(vec![TruncatedSeries::zero(1, 40), TruncatedSeries::zero(1, 40)], &f);
        assert_eq!(puiseux_expand(&p, &f, &Q::from_integer(40), 0).unwrap_err(), PuiseuxError::NotSquarefreeToPrecision);
    }

    #[test]
    fn exact_double_root() {
        let f = field();
        let t = TruncatedSeries::monomial(f.one(), 1, 1);
        let lower = super::super::product_of_linear_factors(&[t.clone(), t], &f);
        let p = SeriesPolynomial::new(lower, &f).unwrap();
        let exp = puiseux_expand(&p, &f, &Q::from_integer(10), 0).unwrap();
        assert_eq!(exp.branches.len(), 1);
        assert_eq!(exp.branches[0].multiplicity, 2);
    }
}
