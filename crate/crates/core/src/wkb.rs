//! Semiclassical layer: effective potentials, turning points, the action
//! integral, the uniform Airy approximation and the WKB secular function.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::channel::minor_determinants;
use crate::error::{Error, Result};
use crate::numerics::{airy, quadrature_sqrt_endpoint};
use crate::params::{subcritical, ModelParams};
use crate::secular::{zeros_from_samples, SecularValue};

/// Default matching index for ζ_II.
pub const DEFAULT_M0: usize = 3;
const ACTION_TOL: f64 = 1e-12;
const WKB_SCAN_POINTS: usize = 800;

/// V(m) = (2/Λ)√((m+1+η)/(m+3/2)).
pub fn potential_single(m: f64, eta: f64, lambda: f64) -> f64 {
    2.0 / lambda * ((m + 1.0 + eta) / (m + 1.5)).sqrt()
}

/// p²(m) = 2 − V(m).
pub fn p_squared(m: f64, eta: f64, lambda: f64) -> f64 {
    2.0 - potential_single(m, eta, lambda)
}

/// dV/dm for the single-δ potential.
pub fn potential_single_slope(m: f64, eta: f64, lambda: f64) -> f64 {
    (0.5 - eta) / (lambda * (m + 1.5).powf(1.5) * (m + 1.0 + eta).sqrt())
}

/// m_t = (Λ²/2 − η)/(1 − Λ²) − 1; negative when there is no well.
pub fn turning_point(eta: f64, lambda: f64) -> f64 {
    (0.5 * lambda * lambda - eta) / (1.0 - lambda * lambda) - 1.0
}

/// η_max = 3Λ²/2 − 1, the largest η with m_t > 0.
pub fn eta_max(lambda: f64) -> f64 {
    1.5 * lambda * lambda - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningData {
    pub m_t: f64,
    pub eta_max: f64,
}

pub fn turning_data(eta: f64, lambda: f64) -> TurningData {
    TurningData { m_t: turning_point(eta, lambda), eta_max: eta_max(lambda) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PotentialKind {
    Single,
    Periodic { omega: f64, period: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectivePotential {
    pub kind: PotentialKind,
    pub eta: f64,
    pub lambda: f64,
}

impl EffectivePotential {
    pub fn value(&self, m: f64) -> f64 {
        match self.kind {
            PotentialKind::Single => potential_single(m, self.eta, self.lambda),
            PotentialKind::Periodic { omega, period } => {
                periodic_bracket(m, self.eta, omega, period) * potential_single(m, self.eta, self.lambda)
            }
        }
    }

    /// (V − 2)/(V(∞) − 2).
    pub fn scaled(&self, m: f64) -> f64 {
        (self.value(m) - 2.0) / (2.0 / self.lambda - 2.0)
    }
}

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 0.5 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("need 0 < eta < 1/2, got {eta}")))
    }
}

/// s(m, η) = ∫_{m_t}^{m} √|p²(n, η)| dn by adaptive quadrature (signed: negative
/// for m < m_t).
pub fn action(m: f64, eta: f64, lambda: f64) -> Result<f64> {
    subcritical("action", lambda)?;
    let mt = turning_point(eta, lambda);
    let f = |n: f64| p_squared(n, eta, lambda).abs().sqrt();
    // √|p²| ~ |n − m_t|^{1/2} at the turning point
    quadrature_sqrt_endpoint(f, mt, m, ACTION_TOL)
}

/// Closed form of the action. With x = m + 3/2, a = ½ − η and P = |p|:
/// allowed side  s = P x − a/√(2Λ) [atan(u₋)/√(1−Λ) + atanh(u₊)/√(1+Λ)],
/// forbidden side s = P x − a/√(2Λ) [atanh(u₋)/√(1−Λ) + atan(u₊)/√(1+Λ)],
/// u∓ = √Λ P/√(2(1∓Λ)). Signed like `action`.
pub fn action_closed_form(m: f64, eta: f64, lambda: f64) -> Result<f64> {
    subcritical("action_closed_form", lambda)?;
    let p2 = p_squared(m, eta, lambda);
    let p = p2.abs().sqrt();
    let a = 0.5 - eta;
    let x = m + 1.5;
    let sl = lambda.sqrt();
    let um = sl * p / (2.0 * (1.0 - lambda)).sqrt();
    let up = sl * p / (2.0 * (1.0 + lambda)).sqrt();
    let (tm, tp) = if p2 >= 0.0 { (um.atan(), up.atanh()) } else { (um.atanh(), up.atan()) };
    let bracket = tm / (1.0 - lambda).sqrt() + tp / (1.0 + lambda).sqrt();
    Ok(p * x - a / (2.0 * lambda).sqrt() * bracket)
}

/// The closed form exactly as it is usually quoted: 1/(1±Λ) prefactors and the
/// atanh/atan pairing of the allowed side used everywhere. Kept to document
/// how far it sits from the integral.
pub fn action_closed_form_as_quoted(m: f64, eta: f64, lambda: f64) -> Result<f64> {
    subcritical("action_closed_form_as_quoted", lambda)?;
    let p = p_squared(m, eta, lambda).abs().sqrt();
    let sl = lambda.sqrt();
    let up = sl * p / (2.0 * (1.0 + lambda)).sqrt();
    let um = sl * p / (2.0 * (1.0 - lambda)).sqrt();
    let bracket = up.atanh() / (1.0 + lambda) + um.atan() / (1.0 - lambda);
    Ok(p * (m + 1.5) - (0.5 - eta) / (2.0 * lambda).sqrt() * bracket)
}

/// σ = Sign(m − m_t)·(3|s|/2)^{2/3}.
pub fn sigma(m: f64, eta: f64, lambda: f64) -> Result<f64> {
    let s = action(m, eta, lambda)?;
    let mt = turning_point(eta, lambda);
    Ok((m - mt).signum() * (1.5 * s.abs()).powf(2.0 / 3.0))
}

/// Which Airy solution carries the uniform approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AiryBranch {
    /// Bi: grows beyond the turning point.
    Growing,
    /// Ai: decays beyond the turning point.
    Recessive,
}

/// q(m) = |σ/p²|^{1/4}·F(σ) with F = Bi or Ai, normalisation c = 1.
pub fn q_uniform_branch(m: f64, eta: f64, lambda: f64, branch: AiryBranch) -> Result<f64> {
    subcritical("q_uniform", lambda)?;
    let mt = turning_point(eta, lambda);
    let (amp, s) = if (m - mt).abs() < 1e-9 * mt.abs().max(1.0) {
        // σ ≈ V'(m_t)^{1/3}(m − m_t), p² ≈ −V'(m_t)(m − m_t)
        (potential_single_slope(mt, eta, lambda).powf(-1.0 / 6.0), 0.0)
    } else {
        let s = sigma(m, eta, lambda)?;
        ((s / p_squared(m, eta, lambda)).abs().powf(0.25), s)
    };
    let v = airy(s)?;
    Ok(amp * match branch {
        AiryBranch::Growing => v.bi,
        AiryBranch::Recessive => v.ai,
    })
}

/// Uniform approximation on the growing (Bi) branch.
pub fn q_uniform(m: f64, eta: f64, lambda: f64) -> Result<f64> {
    q_uniform_branch(m, eta, lambda, AiryBranch::Growing)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WkbSecular {
    pub zeta: f64,
    /// False when m_t ≤ m0 + 2; `zeta` is NaN then.
    pub valid: bool,
}

/// Largest η for which m_t(η) > m0 + 2.
pub fn wkb_eta_limit(lambda: f64, m0: usize) -> f64 {
    0.5 * lambda * lambda - (m0 as f64 + 3.0) * (1.0 - lambda * lambda)
}

/// ζ_II = q(m0+1)/q(m0) − (D_{m0+1}/D_{m0})(1/Λ)√((m0+1+η)/(m0+3/2)).
pub fn zeta_wkb_branch(eta: f64, lambda: f64, m0: usize, branch: AiryBranch) -> Result<WkbSecular> {
    check_eta("zeta_wkb", eta)?;
    subcritical("zeta_wkb", lambda)?;
    if turning_point(eta, lambda) <= m0 as f64 + 2.0 {
        return Ok(WkbSecular { zeta: f64::NAN, valid: false });
    }
    let d = minor_determinants(eta, lambda, m0 + 1)?;
    let ratio = d.ratio(m0 as isize + 1);
    let m = m0 as f64;
    let q0 = q_uniform_branch(m, eta, lambda, branch)?;
    let q1 = q_uniform_branch(m + 1.0, eta, lambda, branch)?;
    let zeta = q1 / q0 - ratio / lambda * ((m + 1.0 + eta) / (m + 1.5)).sqrt();
    Ok(WkbSecular { zeta, valid: true })
}

/// ζ_II matched to the solution that decays beyond the turning point, which
/// is the one an eigenvector must follow.
pub fn zeta_wkb(eta: f64, lambda: f64, m0: usize) -> Result<WkbSecular> {
    zeta_wkb_branch(eta, lambda, m0, AiryBranch::Recessive)
}

/// Roots of ζ_II on its validity window.
pub fn wkb_spectrum(lambda: f64, m0: usize, branch: AiryBranch, eta_min: f64, tol: f64) -> Result<Vec<f64>> {
    subcritical("wkb_spectrum", lambda)?;
    let hi = wkb_eta_limit(lambda, m0).min(0.5 - eta_min);
    if hi <= eta_min {
        return Ok(Vec::new());
    }
    let f = |eta: f64| {
        let z = zeta_wkb_branch(eta, lambda, m0, branch).map(|w| w.zeta).unwrap_or(f64::NAN);
        SecularValue { zeta: z, tail_sign: 1.0, pole_crossed: false }
    };
    // stay strictly inside the window so every sample is valid
    let hi = hi - 1e-9;
    let n = WKB_SCAN_POINTS;
    let samples: Vec<(f64, SecularValue)> = (0..n)
        .map(|i| {
            let eta = eta_min + (hi - eta_min) * i as f64 / (n - 1) as f64;
            (eta, f(eta))
        })
        .collect();
    Ok(zeros_from_samples(&samples, &f, tol).roots)
}

/// N(Λ) = ⌊1/((1−Λ)·2√(2Λ))⌋.
pub fn count_estimate(lambda: f64) -> Result<usize> {
    if !(lambda > (2.0f64 / 3.0).sqrt() && lambda < 1.0) {
        return Err(Error::domain("count_estimate", format!("need sqrt(2/3) < Λ < 1, got {lambda}")));
    }
    Ok((1.0 / ((1.0 - lambda) * 2.0 * (2.0 * lambda).sqrt())).floor() as usize)
}

/// tanh(x/2) + 2 sin²(ω/2)/sinh x with x = L√(m+1+η).
fn periodic_bracket(m: f64, eta: f64, omega: f64, l: f64) -> f64 {
    let x = l * (m + 1.0 + eta).sqrt();
    let s = (0.5 * omega).sin();
    let tail = if x > 700.0 { 0.0 } else { 2.0 * s * s / x.sinh() };
    (0.5 * x).tanh() + tail
}

/// Effective potential of the periodic channel.
pub fn potential_periodic(m: f64, eta: f64, omega: f64, params: &ModelParams) -> f64 {
    periodic_bracket(m, eta, omega, params.period) * potential_single(m, eta, params.lambda_scaled)
}

/// The same potential written as (1 − cos ω/cosh x)/tanh x times the
/// single-δ factor.
pub fn potential_periodic_direct(m: f64, eta: f64, omega: f64, params: &ModelParams) -> f64 {
    let x = params.period * (m + 1.0 + eta).sqrt();
    (1.0 - omega.cos() / x.cosh()) / x.tanh() * potential_single(m, eta, params.lambda_scaled)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmallLPotential {
    /// (2/(LΛ))·2 sin²(ω/2)/√(m+3/2).
    pub value: f64,
    /// Where the leading term equals 2.
    pub turning_point: f64,
    /// L√(m+3/2) < 1, which covers every η in (0, ½).
    pub expansion_valid: bool,
}

/// Leading small-L form of the periodic potential.
pub fn potential_small_l(m: f64, omega: f64, params: &ModelParams) -> SmallLPotential {
    let (l, lam) = (params.period, params.lambda_scaled);
    let s2 = (0.5 * omega).sin().powi(2);
    let value = 2.0 / (l * lam) * 2.0 * s2 / (m + 1.5).sqrt();
    let r = 2.0 * s2 / (lam * l);
    SmallLPotential {
        value,
        turning_point: r * r - 1.5,
        expansion_valid: l * (m + 1.5).sqrt() < 1.0,
    }
}

/// The small-L turning point as usually quoted, 2 sin²(ω/2)/(ΛL) − 3/2. It
/// drops the square of the exact root of the leading term.
pub fn small_l_turning_point_as_quoted(omega: f64, params: &ModelParams) -> f64 {
    2.0 * (0.5 * omega).sin().powi(2) / (params.lambda_scaled * params.period) - 1.5
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningShift {
    /// (2/3)((Λ²/2−η)/(1−Λ²))² e^{−L√(1+m_t)} (1 − 2 sin²(ω/2)).
    pub bound: f64,
    /// First-order shift 4 e^{−L√(m_t+1+η)} (1 − 2 sin²(ω/2)) (m_t+3/2)²/(½−η).
    pub first_order: f64,
    pub m_t: f64,
}

/// Shift of the single-δ turning point produced by the periodic images.
pub fn turning_shift_bound(eta: f64, omega: f64, params: &ModelParams) -> Result<TurningShift> {
    let lam = params.require_subcritical("turning_shift_bound")?;
    let l = params.period;
    if !(l > 1.0) {
        return Err(Error::domain("turning_shift_bound", format!("needs L > 1, got {l}")));
    }
    if !(omega.abs() < PI / 2.0) {
        return Err(Error::domain("turning_shift_bound", format!("needs |omega| < pi/2, got {omega}")));
    }
    if !(eta > 0.0 && eta < eta_max(lam)) {
        return Err(Error::domain("turning_shift_bound", format!("needs 0 < eta < eta_max, got {eta}")));
    }
    let mt = turning_point(eta, lam);
    let c = 1.0 - 2.0 * (0.5 * omega).sin().powi(2);
    let k = (0.5 * lam * lam - eta) / (1.0 - lam * lam);
    let bound = 2.0 / 3.0 * k * k * (-l * (1.0 + mt).sqrt()).exp() * c;
    let first_order = 4.0 * (-l * (mt + 1.0 + eta).sqrt()).exp() * c * (mt + 1.5).powi(2) / (0.5 - eta);
    Ok(TurningShift { bound, first_order, m_t: mt })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bracket_and_refine;

    #[test]
    fn potential_limits() {
        assert!((potential_single(1e12, 0.1, 0.97) - 2.0 / 0.97).abs() < 1e-10);
        for m in [0.0, 1.0, 17.5] {
            assert!((potential_single(m, 0.5, 0.97) - 2.0 / 0.97).abs() < 1e-15);
        }
        let mut last = 0.0;
        for i in 0..100 {
            let v = potential_single(i as f64 * 0.7, 0.01, 0.97);
            assert!(v > last);
            last = v;
        }
        // p²(0) at η = 0.01, Λ = 0.97
        let want = 2.0 - 2.0 / 0.97 * (1.01f64 / 1.5).sqrt();
        assert!((p_squared(0.0, 0.01, 0.97) - want).abs() < 1e-15);
        assert!((want - 0.308_105_343_630_079_6).abs() < 1e-12);
    }

    #[test]
    fn turning_point_values() {
        let mt = turning_point(0.01, 0.97);
        assert!((mt - 6.791_032_148_900_169).abs() < 1e-12);
        assert!(p_squared(mt, 0.01, 0.97).abs() < 1e-10);
        let r = bracket_and_refine(|m| p_squared(m, 0.01, 0.97), 0.0, 50.0, 1e-12).unwrap();
        assert!((r.value - mt).abs() < 1e-6);
        assert!((turning_point(0.97f64.powi(2) / 2.0, 0.97) + 1.0).abs() < 1e-12);
        let em = eta_max(0.97);
        assert!(turning_point(em - 1e-6, 0.97) > 0.0);
        assert!(turning_point(em + 1e-6, 0.97) < 0.0);
    }

    #[test]
    fn action_at_turning_point() {
        let mt = turning_point(0.01, 0.97);
        assert_eq!(action(mt, 0.01, 0.97).unwrap(), 0.0);
        assert!(action_closed_form(mt, 0.01, 0.97).unwrap().abs() < 1e-7);
    }

    #[test]
    fn action_oracle_at_origin() {
        let q = action(0.0, 0.01, 0.97).unwrap();
        let c = action_closed_form(0.0, 0.01, 0.97).unwrap();
        assert!((q - c).abs() < 1e-9, "{q} vs {c}");
        assert!(q < 0.0);
        let quoted = action_closed_form_as_quoted(0.0, 0.01, 0.97).unwrap();
        assert!((quoted - q).abs() > 1e-3);
    }

    #[test]
    fn action_tolerance_halving() {
        let mt = turning_point(0.01, 0.97);
        let f = |n: f64| p_squared(n, 0.01, 0.97).abs().sqrt();
        let a = quadrature_sqrt_endpoint(f, mt, 0.0, 1e-10).unwrap();
        let b = quadrature_sqrt_endpoint(f, mt, 0.0, 5e-11).unwrap();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn dominant_term_scaling() {
        // the atan(u₋)/√(1−Λ) piece dominates as Λ → 1
        let (eta, lam) = (0.01, 0.999);
        let s0 = action(0.0, eta, lam).unwrap();
        let p = p_squared(0.0, eta, lam).sqrt();
        let mu = lam.sqrt() * p / (2.0 * (1.0 - lam)).sqrt();
        let dom = (0.5 - eta) / ((1.0 - lam).sqrt() * (2.0 * lam).sqrt()) * mu.atan();
        assert!(((-s0 - dom) / dom).abs() < 0.1);
    }

    #[test]
    fn sigma_continuous_at_turning_point() {
        let (eta, lam) = (0.05, 0.97);
        let mt = turning_point(eta, lam);
        let slope = potential_single_slope(mt, eta, lam).powf(1.0 / 3.0);
        for d in [1e-3, -1e-3] {
            let s = sigma(mt + d, eta, lam).unwrap();
            assert!((s - slope * d).abs() < 1e-2 * d.abs());
        }
        let q0 = q_uniform(mt, eta, lam).unwrap();
        let q1 = q_uniform(mt + 1e-6, eta, lam).unwrap();
        assert!(q0.is_finite() && ((q0 - q1) / q0).abs() < 1e-4);
    }

    #[test]
    fn allowed_region_cosine_form() {
        let (eta, lam) = (0.01, 0.999);
        let mt = turning_point(eta, lam);
        for m in [20.0, 60.0, 120.0] {
            let q = q_uniform(m, eta, lam).unwrap();
            let s = action(m, eta, lam).unwrap().abs();
            let p = p_squared(m, eta, lam).sqrt();
            let want = (s + PI / 4.0).cos() / (PI.sqrt() * p.sqrt());
            let scale = 1.0 / (PI.sqrt() * p.sqrt());
            assert!((q - want).abs() < 2e-2 * scale, "m={m} mt={mt}");
        }
    }

    #[test]
    fn forbidden_region_growth() {
        let (eta, lam) = (0.01, 0.97);
        let mt = turning_point(eta, lam);
        let m = 10.0 * mt;
        let h = 1e-3;
        let d = (q_uniform(m + h, eta, lam).unwrap().ln() - q_uniform(m - h, eta, lam).unwrap().ln()) / (2.0 * h);
        let p = (-p_squared(m, eta, lam)).sqrt();
        assert!(((d - p) / p).abs() < 0.01);
    }

    #[test]
    fn ode_residual() {
        let (eta, lam) = (0.01, 0.999);
        let mt = turning_point(eta, lam);
        let h = 0.05;
        let q = |m: f64| q_uniform(m, eta, lam).unwrap();
        // the uniform form is poor at small m and in a neighbourhood of m_t
        let mut m = 50.0;
        while m < 2.0 * mt {
            if (m - mt).abs() > 0.2 * mt {
                let d2 = (-q(m + 2.0 * h) + 16.0 * q(m + h) - 30.0 * q(m) + 16.0 * q(m - h) - q(m - 2.0 * h)) / (12.0 * h * h);
                let p2 = p_squared(m, eta, lam);
                let env = (0..=8).map(|k| q(m - 1.0 + 0.25 * k as f64).abs()).fold(0.0, f64::max);
                let r = (d2 + p2 * q(m)).abs() / (p2.abs() * env);
                assert!(r < 1e-2, "m={m} residual {r}");
            }
            m += 7.3;
        }
    }

    #[test]
    fn invalid_regime_flagged() {
        let lam = 0.97;
        let w = zeta_wkb(eta_max(lam) + 0.01, lam, DEFAULT_M0).unwrap();
        assert!(!w.valid && w.zeta.is_nan());
        let w = zeta_wkb(0.05, lam, DEFAULT_M0).unwrap();
        assert!(w.valid && w.zeta.is_finite());
    }

    #[test]
    fn count_estimate_values() {
        assert_eq!(count_estimate(0.97).unwrap(), 11);
        assert_eq!(count_estimate(0.999).unwrap(), 353);
        assert!(count_estimate(0.82).unwrap() <= 3);
        assert!(count_estimate(0.5).is_err());
        assert!(count_estimate(1.0).is_err());
    }

    #[test]
    fn periodic_forms_agree() {
        let p = ModelParams::from_scaled(0.97, 1.3).unwrap();
        for &(m, eta, w) in &[(0.0, 0.1, 0.3), (4.5, 0.45, 2.9), (30.0, 0.01, 1.4), (2.0, 0.25, 0.0)] {
            let a = potential_periodic(m, eta, w, &p);
            let b = potential_periodic_direct(m, eta, w, &p);
            assert!(((a - b) / a).abs() < 1e-12);
        }
    }

    #[test]
    fn periodic_limits() {
        let p = ModelParams::from_scaled(0.97, 60.0).unwrap();
        for m in [0.0, 3.0, 50.0] {
            let gap = (potential_periodic(m, 0.1, 1.0, &p) - potential_single(m, 0.1, 0.97)).abs();
            assert!(gap <= 10.0 * (-(m + 1.1f64).sqrt() * 60.0).exp());
        }
        let q = ModelParams::from_scaled(0.97, 2.0).unwrap();
        let m = 400.0;
        let bracket = potential_periodic(m, 0.1, 0.0, &q) / potential_single(m, 0.1, 0.97);
        assert!((bracket - 1.0).abs() < 3.0 * (-(m.sqrt()) * 2.0).exp());
    }

    #[test]
    fn small_l_form() {
        let p = ModelParams::from_scaled(0.999, 0.5).unwrap();
        assert_eq!(potential_small_l(3.0, 0.0, &p).value, 0.0);
        let s = potential_small_l(0.0, PI / 2.0, &p);
        let v = potential_small_l(s.turning_point, PI / 2.0, &p).value;
        assert!((v - 2.0).abs() < 1e-12);
        assert!((s.turning_point - 2.508_012_016_020_024).abs() < 1e-10);
        assert!((small_l_turning_point_as_quoted(PI / 2.0, &p) - 0.502_002_002_002_002).abs() < 1e-12);
        assert!(!potential_small_l(10.0, 1.0, &p).expansion_valid);
        assert!(potential_small_l(1.0, 1.0, &p).expansion_valid);
    }

    #[test]
    fn shift_bound_properties() {
        let p = ModelParams::from_scaled(0.999, 2.0).unwrap();
        let t = turning_shift_bound(0.01, PI / 2.0 - 1e-15, &p).unwrap();
        assert!(t.bound.abs() < 1e-20);
        let far = ModelParams::from_scaled(0.999, 20.0).unwrap();
        assert!(turning_shift_bound(0.01, 0.3, &far).unwrap().bound < 1e-100);
        assert!(turning_shift_bound(0.01, 2.0, &p).is_err());
        assert!(turning_shift_bound(0.01, 0.3, &ModelParams::from_scaled(0.999, 0.5).unwrap()).is_err());
    }

    #[test]
    fn numeric_shift_follows_first_order_estimate() {
        let p = ModelParams::from_scaled(0.999, 2.0).unwrap();
        let eta = 0.01;
        for w in [0.0, 0.3, 1.0] {
            let t = turning_shift_bound(eta, w, &p).unwrap();
            let r = bracket_and_refine(|m| potential_periodic(m, eta, w, &p) - 2.0, t.m_t - 1.0, t.m_t + 1.0, 1e-13)
                .unwrap();
            let shift = r.value - t.m_t;
            assert!(shift >= 0.0);
            assert!(((shift - t.first_order) / t.first_order).abs() < 0.05, "w={w}: {shift} vs {}", t.first_order);
            // the quoted bound undershoots by about 6/(1/2 − η)
            assert!(shift > t.bound);
        }
    }

    #[test]
    fn figure_six_crossings() {
        let lam = 0.999;
        let crosses = |eta: f64, w: f64| {
            let pot = EffectivePotential { kind: PotentialKind::Periodic { omega: w, period: 0.5 }, eta, lambda: lam };
            (0..20000).any(|i| pot.scaled(i as f64 * 0.01) < 0.0)
        };
        for k in 0..7 {
            let eta = k as f64 / 12.0;
            assert!(crosses(eta, PI / 4.0));
            assert_eq!(crosses(eta, PI / 2.0), eta < 1.0 / 3.0 - 1e-12, "eta={eta}");
            assert!(!crosses(eta, 3.0 * PI / 4.0));
        }
    }
}
