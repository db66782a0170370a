//! Model parameters, energy bookkeeping and transverse-mode momenta.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower clamp on η used by every low-energy solver.
pub const ETA_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Λ = λ/√2.
    pub lambda_scaled: f64,
    /// λ.
    pub lambda_raw: f64,
    /// Period L.
    pub period: f64,
}

impl ModelParams {
    pub fn from_scaled(lambda_scaled: f64, period: f64) -> Result<Self> {
        Self::check(lambda_scaled, period)?;
        Ok(Self {
            lambda_scaled,
            lambda_raw: lambda_scaled * std::f64::consts::SQRT_2,
            period,
        })
    }

    pub fn from_raw(lambda_raw: f64, period: f64) -> Result<Self> {
        Self::check(lambda_raw, period)?;
        Ok(Self {
            lambda_scaled: lambda_raw / std::f64::consts::SQRT_2,
            lambda_raw,
            period,
        })
    }

    fn check(lambda: f64, period: f64) -> Result<()> {
        if !lambda.is_finite() {
            return Err(Error::domain("ModelParams", "coupling must be finite"));
        }
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::domain("ModelParams", format!("period must be positive, got {period}")));
        }
        Ok(())
    }

    /// Rejects anything outside 0 < Λ < 1.
    pub fn require_subcritical(&self, op: &'static str) -> Result<f64> {
        subcritical(op, self.lambda_scaled)
    }
}

pub(crate) fn subcritical(op: &'static str, lambda_scaled: f64) -> Result<f64> {
    if lambda_scaled > 0.0 && lambda_scaled < 1.0 {
        Ok(lambda_scaled)
    } else {
        Err(Error::domain(op, format!("need 0 < Λ < 1, got {lambda_scaled}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub eta: f64,
    pub energy: f64,
}

impl EnergyPoint {
    pub fn from_eta(eta: f64) -> Self {
        Self { eta, energy: 0.5 - eta }
    }

    pub fn from_energy(energy: f64) -> Self {
        Self { eta: 0.5 - energy, energy }
    }

    /// Decay rate of mode `n` at this energy.
    pub fn kappa(&self, n: usize) -> Result<f64> {
        kappa_n(n, self.eta)
    }
}

/// The scan window `[eta_min, 1/2 - eta_min]`.
pub fn eta_window(eta_min: f64) -> Result<(f64, f64)> {
    if !(eta_min > 0.0 && eta_min < 0.25) {
        return Err(Error::domain("eta_window", format!("eta_min must lie in (0, 1/4), got {eta_min}")));
    }
    Ok((eta_min, 0.5 - eta_min))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// Real longitudinal wave number k_n.
    Conducting,
    /// Decay rate κ_n, k_n = iκ_n.
    Evanescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMomentum {
    pub mode: usize,
    pub value: f64,
    pub branch: Branch,
}

/// κ_n = √(n + η).
pub fn kappa_n(n: usize, eta: f64) -> Result<f64> {
    let a = n as f64 + eta;
    if !(a > 0.0) {
        return Err(Error::domain("kappa_n", format!("n + eta must be positive (n={n}, eta={eta})")));
    }
    Ok(a.sqrt())
}

/// Longitudinal momentum of mode `n` at total energy `energy`.
/// The threshold `E = n + 1/2` is classed as conducting with k = 0.
pub fn mode_momentum(n: usize, energy: f64) -> ModeMomentum {
    let gap = energy - (n as f64 + 0.5);
    if gap >= 0.0 {
        ModeMomentum { mode: n, value: gap.sqrt(), branch: Branch::Conducting }
    } else {
        ModeMomentum { mode: n, value: (-gap).sqrt(), branch: Branch::Evanescent }
    }
}

/// Matrix element <f_{n±1}| q |f_n> of the oscillator modes.
pub fn coupling_element(n: usize, direction: i32) -> Result<f64> {
    match direction {
        1 => Ok(((n as f64 + 1.0) / 2.0).sqrt()),
        -1 if n >= 1 => Ok((n as f64 / 2.0).sqrt()),
        -1 => Err(Error::domain("coupling_element", "mode 0 has no lower neighbour")),
        d => Err(Error::domain("coupling_element", format!("direction must be +1 or -1, got {d}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_n(0, 0.25).unwrap(), 0.5);
        assert!((kappa_n(3, 0.0).unwrap() - 1.7320508075688772).abs() < 1e-15);
        assert!((kappa_n(1, 0.01).unwrap() - 1.004987562112089).abs() < 1e-15);
        assert!(kappa_n(0, 0.0).is_err());
        assert!(kappa_n(0, -0.1).is_err());
    }

    #[test]
    fn mode_momentum_branches() {
        let m = mode_momentum(0, 1.5);
        assert_eq!(m.branch, Branch::Conducting);
        assert_eq!(m.value, 1.0);
        let m = mode_momentum(2, 0.3);
        assert_eq!(m.branch, Branch::Evanescent);
        assert!((m.value - 2.2f64.sqrt()).abs() < 1e-15);
        let m = mode_momentum(0, 0.5);
        assert_eq!(m.branch, Branch::Conducting);
        assert_eq!(m.value, 0.0);
    }

    #[test]
    fn coupling_examples() {
        let h = 0.5f64.sqrt();
        assert!((coupling_element(0, 1).unwrap() - h).abs() < 1e-15);
        assert!((coupling_element(1, -1).unwrap() - h).abs() < 1e-15);
        assert!((coupling_element(3, 1).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(coupling_element(0, -1).is_err());
        assert!(coupling_element(2, 0).is_err());
    }

    #[test]
    fn params_constructors() {
        let p = ModelParams::from_scaled(0.5, 2.0).unwrap();
        assert!((p.lambda_raw - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        let q = ModelParams::from_raw(-1.0, 2.0).unwrap();
        assert!((q.lambda_scaled + 0.5f64.sqrt()).abs() < 1e-15);
        assert!(ModelParams::from_scaled(0.5, 0.0).is_err());
        assert!(p.require_subcritical("t").is_ok());
        assert!(q.require_subcritical("t").is_err());
    }

    #[test]
    fn energy_point_sum() {
        let e = EnergyPoint::from_eta(0.123);
        assert_eq!(e.eta + e.energy, 0.5);
        assert_eq!(eta_window(1e-6).unwrap(), (1e-6, 0.5 - 1e-6));
    }
}
