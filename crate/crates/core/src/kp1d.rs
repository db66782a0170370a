//! The one-dimensional Kronig-Penney comb of δ scatterers.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::bracket_and_refine;
use crate::params::ModelParams;

const KAPPA_GRID_POINTS: usize = 2000;
const KAPPA_GRID_MIN: f64 = 1e-6;

/// 2×2 S-matrix mapping incoming (a⁺, b⁻) to outgoing (a⁻, b⁺).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortScattering {
    pub entries: [[Complex64; 2]; 2],
}

impl TwoPortScattering {
    pub fn det(&self) -> Complex64 {
        let e = &self.entries;
        e[0][0] * e[1][1] - e[0][1] * e[1][0]
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let e = &self.entries;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }

    /// Max-entry norm of S†S − I.
    pub fn unitarity_defect(&self) -> f64 {
        let e = &self.entries;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s: Complex64 = (0..2).map(|k| e[k][i].conj() * e[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }
}

/// S(k) = −I + (all-ones)/(1 + iλ/2k) for a single δ of strength λ.
/// `k` is real (propagating) or `iκ` (evanescent).
pub fn s_matrix_1d(k: Complex64, lambda: f64) -> Result<TwoPortScattering> {
    let denom = transmission_denominator(k, lambda, "s_matrix_1d")?;
    let s = denom.inv();
    let one = Complex64::new(1.0, 0.0);
    Ok(TwoPortScattering { entries: [[s - one, s], [s, s - one]] })
}

fn transmission_denominator(k: Complex64, lambda: f64, op: &'static str) -> Result<Complex64> {
    if k.norm() == 0.0 {
        return Err(Error::singular(op, "k = 0"));
    }
    let denom = Complex64::new(1.0, 0.0) + Complex64::new(0.0, lambda / 2.0) / k;
    if denom.norm() < 1e-14 {
        return Err(Error::singular(op, format!("pole of S at k = {k}")));
    }
    Ok(denom)
}

/// ζ_kp(k; ω) = det[I − e^{ikL} P S(k)], P the antidiagonal phase matrix
/// with entries e^{±iω}.
pub fn zeta_kp(k: Complex64, omega: f64, params: &ModelParams) -> Result<Complex64> {
    if omega.abs() > std::f64::consts::PI + 1e-12 {
        return Err(Error::domain("zeta_kp", format!("|omega| must be <= pi, got {omega}")));
    }
    let s = transmission_denominator(k, params.lambda_raw, "zeta_kp")?.inv();
    let z = (Complex64::new(0.0, 1.0) * k * params.period).exp();
    // 1 − z tr(PS) + z² det(PS), with tr(PS) = 2s cos ω and det(PS) = 2s − 1
    Ok(1.0 - 2.0 * z * s * omega.cos() + z * z * (2.0 * s - 1.0))
}

fn check_attractive(lambda: f64, op: &'static str) -> Result<()> {
    if lambda < 0.0 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("needs an attractive coupling (λ < 0), got {lambda}")))
    }
}

/// Pole-free part of ζ_kp(iκ): 2e^{−κL}(cosh κL − a sinh κL − cos ω), a = |λ|/2κ.
fn zeta_kappa_numerator(kappa: f64, omega: f64, lambda_abs: f64, l: f64) -> f64 {
    let a = lambda_abs / (2.0 * kappa);
    let e = (-kappa * l).exp();
    // 2e^{-κL}cosh κL = 1 + e^{-2κL}, 2e^{-κL}sinh κL = 1 − e^{-2κL}
    (1.0 + e * e) - a * (1.0 - e * e) - 2.0 * e * omega.cos()
}

/// ζ_kp on the imaginary axis in closed form:
/// 2e^{−κL}/(1 − a) · (cosh κL − a sinh κL − cos ω), a = |λ|/2κ.
pub fn zeta_kappa(kappa: f64, omega: f64, params: &ModelParams) -> Result<f64> {
    check_attractive(params.lambda_raw, "zeta_kappa")?;
    if !(kappa > 0.0) {
        return Err(Error::domain("zeta_kappa", format!("kappa must be positive, got {kappa}")));
    }
    let lambda_abs = params.lambda_raw.abs();
    let one_minus_a = 1.0 - lambda_abs / (2.0 * kappa);
    if one_minus_a.abs() < 1e-14 {
        return Err(Error::singular("zeta_kappa", "pole at kappa = |lambda|/2"));
    }
    Ok(zeta_kappa_numerator(kappa, omega, lambda_abs, params.period) / one_minus_a)
}

/// κ roots of ζ_kappa at one Floquet phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaRoots {
    pub omega: f64,
    /// Increasing κ; energies are −κ².
    pub kappas: Vec<f64>,
}

/// All negative-energy Floquet points for each ω. Roots are bracketed on a
/// 2000-point logarithmic κ grid and bisected to `tol`. Brackets are taken on
/// the pole-free numerator, so the sign flip of the 1/(1 − a) prefactor at
/// κ = |λ|/2 never registers as a root.
pub fn negative_bands_1d(params: &ModelParams, omega_grid: &[f64], tol: f64) -> Result<Vec<KappaRoots>> {
    check_attractive(params.lambda_raw, "negative_bands_1d")?;
    if let Some(w) = omega_grid.iter().find(|w| !(0.0..=std::f64::consts::PI).contains(*w)) {
        return Err(Error::domain("negative_bands_1d", format!("omega {w} outside [0, pi]")));
    }
    let lambda_abs = params.lambda_raw.abs();
    let l = params.period;
    let hi = lambda_abs.max(5.0);
    let ratio = (hi / KAPPA_GRID_MIN).ln() / (KAPPA_GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..KAPPA_GRID_POINTS).map(|i| KAPPA_GRID_MIN * (ratio * i as f64).exp()).collect();
    omega_grid
        .par_iter()
        .map(|&omega| {
            let f = |k: f64| zeta_kappa_numerator(k, omega, lambda_abs, l);
            let vals: Vec<f64> = grid.iter().map(|&k| f(k)).collect();
            let mut kappas = Vec::new();
            for i in 0..grid.len() - 1 {
                if vals[i] == 0.0 {
                    kappas.push(grid[i]);
                } else if vals[i] * vals[i + 1] < 0.0 {
                    kappas.push(bracket_and_refine(f, grid[i], grid[i + 1], tol)?.value);
                }
            }
            Ok(KappaRoots { omega, kappas })
        })
        .collect()
}

/// Energy intervals [−κ_max², −κ_min²] of each root family, families being
/// ranked by κ from the top down at each ω.
pub fn energy_bands_1d(roots: &[KappaRoots]) -> Vec<(f64, f64)> {
    let mut bands: Vec<(f64, f64)> = Vec::new();
    for r in roots {
        for (j, k) in r.kappas.iter().rev().enumerate() {
            let e = -k * k;
            match bands.get_mut(j) {
                Some(b) => {
                    b.0 = b.0.min(e);
                    b.1 = b.1.max(e);
                }
                None => bands.push((e, e)),
            }
        }
    }
    bands
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn free_particle_is_transparent() {
        let s = s_matrix_1d(c(1.0, 0.0), 0.0).unwrap();
        assert_eq!(s.entries[0][0], c(0.0, 0.0));
        assert_eq!(s.entries[0][1], c(1.0, 0.0));
        assert_eq!(s.entries[1][1], c(0.0, 0.0));
    }

    #[test]
    fn determinant_formula() {
        let k = c(2.0, 0.0);
        let s = s_matrix_1d(k, 1.0).unwrap();
        let x = c(0.0, 1.0 / (2.0 * 2.0));
        let want = -(1.0 - x) / (1.0 + x);
        assert!((s.det() - want).norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported() {
        assert!(matches!(s_matrix_1d(c(0.0, 0.5), -1.0), Err(Error::Singular { .. })));
        assert!(s_matrix_1d(c(0.0, 0.0), -1.0).is_err());
        assert!(s_matrix_1d(c(0.0, 0.5), 1.0).is_ok());
    }

    #[test]
    fn free_floquet_condition() {
        let p = ModelParams::from_raw(0.0, 2.0).unwrap();
        let k = 1.3;
        let omega = k * 2.0;
        assert!(zeta_kp(c(k, 0.0), omega, &p).unwrap().norm() < 1e-14);
        assert!(zeta_kp(c(k + 2.0 * PI / 2.0, 0.0), omega, &p).unwrap().norm() < 1e-13);
    }

    #[test]
    fn imaginary_axis_matches_closed_form() {
        let p = ModelParams::from_raw(-1.0, 2.0).unwrap();
        let z = zeta_kp(c(0.0, 0.3), PI / 2.0, &p).unwrap();
        let want = zeta_kappa(0.3, PI / 2.0, &p).unwrap();
        assert!(z.im.abs() < 1e-14);
        assert!(((z.re - want) / want).abs() < 1e-12);
    }

    #[test]
    fn small_kappa_slope() {
        let p = ModelParams::from_raw(-1.0, 0.8).unwrap();
        let omega: f64 = 0.3;
        let k = 1e-5;
        let slope = -k * 4.0 * (1.0 - 0.4 - omega.cos());
        let got = zeta_kappa(k, omega, &p).unwrap();
        assert!(((got - slope) / slope).abs() < 1e-3);
    }

    #[test]
    fn second_family_center() {
        // arccos(e^{-|λ|L/2}) at |λ| = 1, L = 2
        let w = (-1.0f64).exp().acos();
        assert!((w - 1.194_068_818_736_321_5).abs() < 1e-15);
    }

    #[test]
    fn bound_state_limit() {
        let p = ModelParams::from_raw(-1.0, 10.0).unwrap();
        let r = negative_bands_1d(&p, &[PI / 2.0], 1e-13).unwrap();
        let top = *r[0].kappas.last().unwrap();
        // 30-digit root of cosh κL − sinh κL/(2κ) = 0 at L = 10
        assert!((top - 0.499_954_560_857_616_3).abs() < 1e-11);
    }

    #[test]
    fn roots_at_l2() {
        let p = ModelParams::from_raw(-1.0, 2.0).unwrap();
        let r = negative_bands_1d(&p, &[0.0, PI], 1e-13).unwrap();
        assert_eq!(r[0].kappas.len(), 1);
        assert!((r[0].kappas[0] - 0.771_702_319_209_104_2).abs() < 1e-11);
        assert!(r[1].kappas.is_empty());
    }

    #[test]
    fn repulsive_rejected() {
        let p = ModelParams::from_raw(1.0, 2.0).unwrap();
        assert!(negative_bands_1d(&p, &[0.0], 1e-10).is_err());
        assert!(zeta_kappa(0.3, 0.0, &p).is_err());
    }

    #[test]
    fn bands_narrow_with_period() {
        let omegas: Vec<f64> = (0..=40).map(|i| PI * i as f64 / 40.0).collect();
        let mut last = f64::INFINITY;
        for l in [2.0, 5.0, 8.0, 10.0] {
            let p = ModelParams::from_raw(-1.0, l).unwrap();
            let roots = negative_bands_1d(&p, &omegas, 1e-12).unwrap();
            let b = energy_bands_1d(&roots);
            let w = b[0].1 - b[0].0;
            assert!(w < last, "L={l}: width {w} not below {last}");
            last = w;
        }
    }
}
