use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketedRoot {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
    pub residual: f64,
}

/// Bisection of `f` on `[lo, hi]` until the bracket is narrower than `tol`.
pub fn bracket_and_refine<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<BracketedRoot>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let fa0 = f(a);
    let fb0 = f(b);
    if !(fa0.signum() * fb0.signum() < 0.0) || fa0 == 0.0 || fb0 == 0.0 {
        if fa0 == 0.0 {
            return Ok(BracketedRoot { lo: a, hi: a, value: a, residual: 0.0 });
        }
        if fb0 == 0.0 {
            return Ok(BracketedRoot { lo: b, hi: b, value: b, residual: 0.0 });
        }
        return Err(Error::NoSignChange { op: "bracket_and_refine", lo: a, hi: b });
    }
    let mut fa = fa0;
    for _ in 0..MAX_BISECTIONS {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(BracketedRoot { lo: mid, hi: mid, value: mid, residual: 0.0 });
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let value = 0.5 * (a + b);
    Ok(BracketedRoot { lo: a, hi: b, value, residual: f(value) })
}
