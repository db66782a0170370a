//! Sign bookkeeping shared by the ratio-form secular functions.
//!
//! A ratio-form ζ is the full determinant divided by a tail determinant, so
//! it changes sign at zeros of the determinant (spectrum) and at zeros of the
//! tail (poles). The backward recursion sees every tail pivot, so the parity
//! of negative pivots is available for free and `zeta.signum() * tail_sign`
//! is the sign of the pole-free determinant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Guard below which a backward pivot is treated as a pole crossing.
pub const PIVOT_GUARD: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularValue {
    pub zeta: f64,
    /// ±1: parity of negative pivots in the tail recursion.
    pub tail_sign: f64,
    /// A pivot fell below the guard during the recursion.
    pub pole_crossed: bool,
}

impl SecularValue {
    /// Sign of the underlying determinant, up to a fixed overall sign.
    pub fn det_sign(&self) -> f64 {
        if self.zeta == 0.0 {
            0.0
        } else {
            self.zeta.signum() * self.tail_sign
        }
    }
}

/// Divides by a pivot, counting negative pivots and guarding tiny ones.
#[inline]
pub(crate) fn guarded_pivot(p: f64, negatives: &mut u32, pole: &mut bool) -> f64 {
    if p < 0.0 {
        *negatives += 1;
    }
    if p.abs() < PIVOT_GUARD {
        *pole = true;
        if p < 0.0 {
            -PIVOT_GUARD
        } else {
            PIVOT_GUARD
        }
    } else {
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    /// The determinant changes sign: a zero.
    Zero,
    /// ζ changes sign but the determinant does not: a pole.
    Pole,
    /// Both a zero and a pole inside one cell.
    ZeroAndPole,
    None,
}

pub fn classify_cell(a: &SecularValue, b: &SecularValue) -> CellKind {
    let det_flip = a.det_sign() * b.det_sign() < 0.0;
    let zeta_flip = a.zeta.signum() * b.zeta.signum() < 0.0;
    match (det_flip, zeta_flip) {
        (true, true) => CellKind::Zero,
        (true, false) => CellKind::ZeroAndPole,
        (false, true) => CellKind::Pole,
        (false, false) => CellKind::None,
    }
}

/// Result of scanning a one-parameter secular function for zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ZeroScan {
    pub roots: Vec<f64>,
    /// Cells whose sign change was traced to a pole.
    pub poles_rejected: usize,
    /// Refined candidates that failed the magnitude test.
    pub magnitude_rejected: usize,
}

/// Bisects the determinant sign on `[lo, hi]` and applies the magnitude test:
/// the refined point must have |ζ| below both endpoint magnitudes.
pub fn refine_zero<F>(f: &F, lo: f64, hi: f64, vlo: SecularValue, vhi: SecularValue, tol: f64) -> Option<f64>
where
    F: Fn(f64) -> SecularValue,
{
    let (mut a, mut b) = (lo, hi);
    let sa = vlo.det_sign();
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let s = f(mid).det_sign();
        if s == 0.0 {
            return Some(mid);
        }
        if s == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let root = 0.5 * (a + b);
    let v = f(root);
    if v.zeta.abs() < vlo.zeta.abs().min(vhi.zeta.abs()) {
        Some(root)
    } else {
        None
    }
}

/// Zeros of a sampled secular function. `samples` are (x, value) sorted by x;
/// candidates are refined with `f`.
pub fn zeros_from_samples<F>(samples: &[(f64, SecularValue)], f: &F, tol: f64) -> ZeroScan
where
    F: Fn(f64) -> SecularValue + Sync,
{
    let mut scan = ZeroScan::default();
    let mut cells = Vec::new();
    for w in samples.windows(2) {
        let (x0, v0) = w[0];
        let (x1, v1) = w[1];
        if v0.zeta == 0.0 && v0.det_sign() == 0.0 {
            scan.roots.push(x0);
            continue;
        }
        match classify_cell(&v0, &v1) {
            CellKind::Zero | CellKind::ZeroAndPole => cells.push((x0, x1, v0, v1)),
            CellKind::Pole => scan.poles_rejected += 1,
            CellKind::None => {}
        }
    }
    let refined: Vec<Option<f64>> = cells
        .par_iter()
        .map(|&(x0, x1, v0, v1)| refine_zero(f, x0, x1, v0, v1, tol))
        .collect();
    for r in refined {
        match r {
            Some(x) => scan.roots.push(x),
            None => scan.magnitude_rejected += 1,
        }
    }
    scan.roots.sort_by(f64::total_cmp);
    scan
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plain(z: f64) -> SecularValue {
        SecularValue { zeta: z, tail_sign: 1.0, pole_crossed: false }
    }

    fn sample<F: Fn(f64) -> SecularValue>(f: &F, n: usize) -> Vec<(f64, SecularValue)> {
        (0..n).map(|i| {
            let x = i as f64 / (n - 1) as f64 * 0.5;
            (x, f(x))
        }).collect()
    }

    #[test]
    fn linear_root() {
        let f = |x: f64| plain(x - 0.2);
        let s = zeros_from_samples(&sample(&f, 37), &f, 1e-12);
        assert_eq!(s.roots.len(), 1);
        assert!((s.roots[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn bare_pole_rejected_by_magnitude() {
        let f = |x: f64| plain(1.0 / (x - 0.2));
        let s = zeros_from_samples(&sample(&f, 37), &f, 1e-12);
        assert!(s.roots.is_empty());
        assert_eq!(s.magnitude_rejected, 1);
    }

    #[test]
    fn pole_with_parity_rejected_outright() {
        // ζ = 1/(x − 0.2) arising from a tail pivot that changes sign at 0.2
        let f = |x: f64| SecularValue { zeta: 1.0 / (x - 0.2), tail_sign: (x - 0.2).signum(), pole_crossed: false };
        let s = zeros_from_samples(&sample(&f, 37), &f, 1e-12);
        assert!(s.roots.is_empty());
        assert_eq!(s.poles_rejected, 1);
    }

    #[test]
    fn zero_and_pole_in_one_cell() {
        // det ∝ (x − 0.2001), tail ∝ (x − 0.2002): ζ keeps its sign across the cell
        let f = |x: f64| SecularValue {
            zeta: (x - 0.2001) / (x - 0.2002),
            tail_sign: (x - 0.2002).signum(),
            pole_crossed: false,
        };
        let samples = sample(&f, 11);
        let s = zeros_from_samples(&samples, &f, 1e-13);
        assert_eq!(s.roots.len(), 1);
        assert!((s.roots[0] - 0.2001).abs() < 1e-12);
    }
}
