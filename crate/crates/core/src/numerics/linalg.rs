use num_complex::Complex64;

use super::scaled::Scaled;
use crate::error::{Error, Result};

const MAX_DIM: usize = 64;

/// Determinant of a square matrix by LU with partial pivoting, returned in
/// scaled form. The sign is exact up to pivoting round-off.
pub fn dense_determinant(a: &[Vec<f64>]) -> Result<Scaled> {
    let n = a.len();
    if n > MAX_DIM {
        return Err(Error::domain("dense_determinant", format!("dimension {n} exceeds {MAX_DIM}")));
    }
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::domain("dense_determinant", "matrix is not square"));
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut det = Scaled::ONE;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs()))
            .unwrap_or(k);
        if m[p][k] == 0.0 {
            return Ok(Scaled::ZERO);
        }
        if p != k {
            m.swap(p, k);
            det = det.neg();
        }
        let piv = m[k][k];
        det = det.mul_f64(piv);
        for i in k + 1..n {
            let l = m[i][k] / piv;
            if l != 0.0 {
                for j in k + 1..n {
                    m[i][j] -= l * m[k][j];
                }
            }
        }
    }
    Ok(det)
}

fn norm1(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    (0..n).map(|j| (0..n).map(|i| a[i][j].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Inverse of a complex square matrix by Gauss-Jordan elimination with
/// partial pivoting. Fails when the 1-norm condition estimate exceeds 1e14.
pub fn invert_complex(a: &[Vec<Complex64>]) -> Result<(Vec<Vec<Complex64>>, f64)> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::domain("invert_complex", "matrix is not square"));
    }
    let mut m: Vec<Vec<Complex64>> = a.to_vec();
    let mut inv: Vec<Vec<Complex64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| m[i][k].norm().total_cmp(&m[j][k].norm())).unwrap_or(k);
        if m[p][k].norm() == 0.0 {
            return Err(Error::IllConditioned { op: "invert_complex", cond: f64::INFINITY });
        }
        m.swap(p, k);
        inv.swap(p, k);
        let piv = m[k][k];
        for j in 0..n {
            m[k][j] /= piv;
            inv[k][j] /= piv;
        }
        for i in 0..n {
            if i != k {
                let l = m[i][k];
                if l.norm() != 0.0 {
                    for j in 0..n {
                        let mk = m[k][j];
                        let ik = inv[k][j];
                        m[i][j] -= l * mk;
                        inv[i][j] -= l * ik;
                    }
                }
            }
        }
    }
    let cond = norm1(a) * norm1(&inv);
    if !cond.is_finite() || cond > 1e14 {
        return Err(Error::IllConditioned { op: "invert_complex", cond });
    }
    Ok((inv, cond))
}
