//! Exact rationals and their `"num/den"` text form.

use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// Always `"num/den"`, including integers (`"1/1"`).
pub fn format_q(q: &Q) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_q(s: &str) -> Option<Q> {
    let (n, d) = s.split_once('/')?;
    let n: i64 = n.trim().parse().ok()?;
    let d: i64 = d.trim().parse().ok()?;
    if d == 0 {
        return None;
    }
    Some(Q::new(n, d))
}

/// Smallest integer `s` with `s / e >= q`.
pub(crate) fn ceil_on_grid(q: &Q, e: u32) -> i64 {
    (q * Q::from_integer(e as i64)).ceil().to_integer()
}
