use std::collections::HashMap;

use super::{PuiseuxError, SeriesPolynomial, TruncatedSeries};
use crate::field::Field;

/// A polynomial in `lambda` with series coefficients, low degree first.
type LambdaPoly = Vec<TruncatedSeries>;

/// `det(lambda Id - M)`, by Laplace expansion along rows with memoized minors.
///
/// Division-free, so the result is exact to the precision the entries carry.
pub fn char_poly(m: &[Vec<TruncatedSeries>], field: &Field) -> Result<SeriesPolynomial, PuiseuxError> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(PuiseuxError::NotSquare);
    }
    if m.iter().flatten().any(|x| x.precision() <= 0) {
        return Err(PuiseuxError::PrecisionZero);
    }
    let mut memo: HashMap<u32, LambdaPoly> = HashMap::new();
    let full = (1u32 << n) - 1;
    let det = minor(m, field, full, &mut memo);
    SeriesPolynomial::new(det, field)
}

/// Determinant of `lambda Id - M` restricted to the last `|cols|` rows and the
/// column set `cols`.
fn minor(m: &[Vec<TruncatedSeries>], field: &Field, cols: u32, memo: &mut HashMap<u32, LambdaPoly>) -> LambdaPoly {
    if cols == 0 {
        return vec![TruncatedSeries::constant(field.one())];
    }
    if let Some(v) = memo.get(&cols) {
        return v.clone();
    }
    let n = m.len();
    let row = n - cols.count_ones() as usize;
    let mut acc: LambdaPoly = Vec::new();
    let mut sign_positive = true;
    for col in 0..n {
        if cols & (1 << col) == 0 {
            continue;
        }
        let sub = minor(m, field, cols & !(1 << col), memo);
        // entry of lambda Id - M: constant part -M[row][col], plus lambda on the diagonal
        let constant = m[row][col].neg(field);
        let mut term: LambdaPoly = sub.iter().map(|c| c.mul(&constant, field)).collect();
        if row == col {
            term.push(TruncatedSeries::exact_zero());
            for k in (0..sub.len()).rev() {
                term[k + 1] = term[k + 1].add(&sub[k], field);
            }
        }
        if !sign_positive {
            term = term.iter().map(|c| c.neg(field)).collect();
        }
        acc = add_lambda(&acc, &term, field);
        sign_positive = !sign_positive;
    }
    memo.insert(cols, acc.clone());
    acc
}

fn add_lambda(a: &LambdaPoly, b: &LambdaPoly, field: &Field) -> LambdaPoly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x.add(y, field),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}
