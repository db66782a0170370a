//! A single δ vertex in the quadratic channel: Jacobi coefficients, minor
//! determinants, the backward-ratio secular function and the point spectrum.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{chebyshev_u, invert_complex, Scaled};
use crate::params::{kappa_n, mode_momentum, subcritical, Branch};
use crate::secular::{guarded_pivot, zeros_from_samples, SecularValue, ZeroScan};
use crate::wkb::turning_point;

/// Number of η samples used to bracket the point spectrum.
pub const SPECTRUM_SCAN_POINTS: usize = 2000;
const MAX_START_DEPTH: usize = 100_000;

/// c_m² = Λ²(m+1)/(κ_m κ_{m+1}).
#[inline]
pub fn coupling_sq(m: usize, eta: f64, lambda: f64) -> f64 {
    let mf = m as f64;
    lambda * lambda * (mf + 1.0) / ((mf + eta) * (mf + 1.0 + eta)).sqrt()
}

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 0.5 {
        Ok(())
    } else {
        Err(Error::domain(op, format!("need 0 < eta < 1/2, got {eta}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiCoefficients {
    /// c_0 … c_{n_max-1}.
    pub off_diag: Vec<f64>,
    pub diag: f64,
}

impl JacobiCoefficients {
    /// The (n+1)×(n+1) leading block of 2I + J₀.
    pub fn dense(&self, n: usize) -> Vec<Vec<f64>> {
        let dim = n + 1;
        let mut a = vec![vec![0.0; dim]; dim];
        for i in 0..dim {
            a[i][i] = self.diag;
            if i + 1 < dim {
                a[i][i + 1] = self.off_diag[i];
                a[i + 1][i] = self.off_diag[i];
            }
        }
        a
    }
}

pub fn jacobi_coefficients(eta: f64, lambda: f64, n_max: usize) -> Result<JacobiCoefficients> {
    check_eta("jacobi_coefficients", eta)?;
    if n_max < 1 {
        return Err(Error::domain("jacobi_coefficients", "n_max must be at least 1"));
    }
    let off_diag = (0..n_max)
        .map(|m| Ok(lambda * ((m + 1) as f64 / (kappa_n(m + 1, eta)? * kappa_n(m, eta)?)).sqrt()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(JacobiCoefficients { off_diag, diag: 2.0 })
}

/// D₋₁, D₀, …, D_n in scaled form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinorSequence {
    values: Vec<Scaled>,
}

impl MinorSequence {
    /// D_m for m ≥ −1.
    pub fn get(&self, m: isize) -> Scaled {
        self.values[(m + 1) as usize]
    }

    /// Largest index n held.
    pub fn n(&self) -> usize {
        self.values.len() - 2
    }

    /// D_m / D_{m−1}.
    pub fn ratio(&self, m: isize) -> f64 {
        self.get(m).ratio(self.get(m - 1))
    }
}

/// Runs a three-term recursion x_{m+1} = a_m x_m − b_m x_{m−1} with a shared
/// exponent for the pair, returning every term in scaled form.
pub(crate) fn scaled_three_term<A, B>(x_prev: f64, x_cur: f64, steps: usize, a: A, b: B) -> Vec<Scaled>
where
    A: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    let mut out = Vec::with_capacity(steps + 2);
    let (mut p, mut c, mut e) = (x_prev, x_cur, 0i64);
    out.push(Scaled::new(p));
    out.push(Scaled::new(c));
    for m in 0..steps {
        let next = a(m) * c - b(m) * p;
        p = c;
        c = next;
        let big = c.abs().max(p.abs());
        if big > 1e150 || (big < 1e-150 && big > 0.0) {
            let (_, k) = crate::numerics::scaled::frexp(big);
            p = crate::numerics::scaled::ldexp(p, -k);
            c = crate::numerics::scaled::ldexp(c, -k);
            e += k;
        }
        out.push(Scaled::from_parts(c, e));
    }
    out
}

pub fn minor_determinants(eta: f64, lambda: f64, n_max: usize) -> Result<MinorSequence> {
    check_eta("minor_determinants", eta)?;
    let values = scaled_three_term(1.0, 2.0, n_max, |_| 2.0, |m| coupling_sq(m, eta, lambda));
    Ok(MinorSequence { values })
}

/// ξ± = 1 ± √(1 − Λ²).
pub fn xi_roots(lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::domain("xi_roots", format!("need 0 < Λ <= 1, got {lambda}")));
    }
    let r = (1.0 - lambda * lambda).sqrt();
    Ok((1.0 + r, 1.0 - r))
}

/// Λ^d U_d(1/Λ): the d-dimensional determinant of the constant-coefficient
/// matrix with 2 on the diagonal and Λ off it.
pub fn chebyshev_reference(lambda: f64, dim: usize) -> Result<Scaled> {
    subcritical("chebyshev_reference", lambda)?;
    if dim < 1 {
        return Err(Error::domain("chebyshev_reference", "dimension must be at least 1"));
    }
    let u = chebyshev_u(dim, 1.0 / lambda);
    if !u.is_finite() {
        return Err(Error::Overflow { op: "chebyshev_reference", x: dim as f64 });
    }
    Ok(Scaled::new(u).mul(Scaled::new(lambda).pow(dim)))
}

/// Backward recursion start depth: max(200, 10 m_t, ⌈20/(1−Λ)⌉), capped.
pub fn default_start_depth(eta: f64, lambda: f64) -> usize {
    let mt = turning_point(eta, lambda);
    let a = (10.0 * mt).ceil().max(0.0);
    let b = (20.0 / (1.0 - lambda)).ceil();
    (a.max(b).max(200.0) as usize).min(MAX_START_DEPTH)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackwardRatio {
    pub g1: f64,
    /// ±1: parity of negative pivots 2 − g_{m+1} met on the way down.
    pub tail_sign: f64,
    pub pole_crossed: bool,
}

/// g_m = c_m²/(2 − g_{m+1}) from g_{m_start} = `seed` down to m = 1.
pub fn g_backward_seeded(eta: f64, lambda: f64, m_start: usize, seed: f64) -> BackwardRatio {
    let mut g = seed;
    let mut neg = 0u32;
    let mut pole = false;
    for m in (1..m_start.max(1)).rev() {
        let p = guarded_pivot(2.0 - g, &mut neg, &mut pole);
        g = coupling_sq(m, eta, lambda) / p;
    }
    BackwardRatio { g1: g, tail_sign: if neg % 2 == 0 { 1.0 } else { -1.0 }, pole_crossed: pole }
}

/// Backward ratio seeded with g_∞ = ξ₊.
pub fn g_backward(eta: f64, lambda: f64, m_start: usize) -> Result<BackwardRatio> {
    check_eta("g_backward", eta)?;
    subcritical("g_backward", lambda)?;
    let (xi_p, _) = xi_roots(lambda)?;
    Ok(g_backward_seeded(eta, lambda, m_start, xi_p))
}

/// ζ_I with its tail sign, at an explicit start depth.
pub fn zeta_single_at_depth(eta: f64, lambda: f64, m_start: usize) -> Result<SecularValue> {
    let b = g_backward(eta, lambda, m_start)?;
    let d1_over_d0 = 0.5 * (4.0 - coupling_sq(0, eta, lambda));
    Ok(SecularValue { zeta: b.g1 - d1_over_d0, tail_sign: b.tail_sign, pole_crossed: b.pole_crossed })
}

pub fn zeta_single_value(eta: f64, lambda: f64) -> Result<SecularValue> {
    zeta_single_at_depth(eta, lambda, default_start_depth(eta, lambda))
}

/// ζ_I(η) = g₁(η) − ½(4 − Λ²/(κ₀κ₁)).
pub fn zeta_single(eta: f64, lambda: f64) -> Result<f64> {
    zeta_single_value(eta, lambda).map(|v| v.zeta)
}

/// Zeros of ζ_I in `[eta_min, eta_max]` with the rejection bookkeeping.
pub fn point_spectrum_scan(lambda: f64, eta_min: f64, eta_max: f64, tol: f64) -> Result<ZeroScan> {
    point_spectrum_scan_at_depth(lambda, eta_min, eta_max, tol, None)
}

/// As `point_spectrum_scan` with an optional fixed backward start depth.
pub fn point_spectrum_scan_at_depth(
    lambda: f64,
    eta_min: f64,
    eta_max: f64,
    tol: f64,
    m_start: Option<usize>,
) -> Result<ZeroScan> {
    subcritical("point_spectrum", lambda)?;
    if !(eta_min > 0.0 && eta_max < 0.5 && eta_min < eta_max) {
        return Err(Error::domain("point_spectrum", format!("bad window [{eta_min}, {eta_max}]")));
    }
    let n = SPECTRUM_SCAN_POINTS;
    let f = |eta: f64| {
        let depth = m_start.unwrap_or_else(|| default_start_depth(eta, lambda));
        zeta_single_at_depth(eta, lambda, depth).unwrap_or(SecularValue { zeta: f64::NAN, tail_sign: 1.0, pole_crossed: true })
    };
    let samples: Vec<(f64, SecularValue)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let eta = eta_min + (eta_max - eta_min) * i as f64 / (n - 1) as f64;
            (eta, f(eta))
        })
        .collect();
    Ok(zeros_from_samples(&samples, &f, tol))
}

/// Sorted η roots of ζ_I; poles are excluded.
pub fn point_spectrum(lambda: f64, eta_min: f64, eta_max: f64, tol: f64) -> Result<Vec<f64>> {
    point_spectrum_scan(lambda, eta_min, eta_max, tol).map(|s| s.roots)
}

/// Number of negative eigenvalues of the (n+1)×(n+1) truncation of 2I + J₀,
/// from the signs of successive minors.
pub fn negative_eigenvalue_count(eta: f64, lambda: f64, n: usize) -> Result<usize> {
    let d = minor_determinants(eta, lambda, n)?;
    Ok((0..=n as isize).filter(|&m| d.ratio(m) < 0.0).count())
}

/// Truncated channel S-matrix on 2M components (a⁺ then b⁻ in, a⁻ then b⁺ out).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelScattering {
    pub modes: usize,
    /// Modes 0..open are conducting.
    pub open: usize,
    pub entries: Vec<Vec<Complex64>>,
    pub condition: f64,
}

impl ChannelScattering {
    /// Max-entry norm of S_oo†S_oo − I over the conducting block.
    pub fn flux_defect(&self) -> f64 {
        let m = self.modes;
        let idx: Vec<usize> = (0..self.open).chain(m..m + self.open).collect();
        let mut worst: f64 = 0.0;
        for &i in &idx {
            for &j in &idx {
                let s: Complex64 = idx.iter().map(|&k| self.entries[k][i].conj() * self.entries[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - want).norm());
            }
        }
        worst
    }
}

/// S = −I + [I + J₀(k)/2]⁻¹ ⊗ [[I, I], [I, I]] on `modes` transverse modes.
pub fn s_matrix_channel(energy: f64, lambda: f64, modes: usize) -> Result<ChannelScattering> {
    if !(energy > 0.5) {
        return Err(Error::domain("s_matrix_channel", format!("need E > 1/2, got {energy}")));
    }
    let momenta: Vec<_> = (0..modes).map(|n| mode_momentum(n, energy)).collect();
    let open = momenta.iter().filter(|k| k.branch == Branch::Conducting).count();
    if modes < open + 2 {
        return Err(Error::domain("s_matrix_channel", format!("{modes} modes leave no evanescent buffer above {open} open ones")));
    }
    if momenta.iter().any(|k| k.value == 0.0) {
        return Err(Error::singular("s_matrix_channel", "energy sits on a mode threshold"));
    }
    // i|k_n|/k_n is i on conducting modes and 1 on evanescent ones
    let phase = |n: usize| match momenta[n].branch {
        Branch::Conducting => Complex64::new(0.0, 1.0),
        Branch::Evanescent => Complex64::new(1.0, 0.0),
    };
    let mut a = vec![vec![Complex64::new(0.0, 0.0); modes]; modes];
    for n in 0..modes {
        a[n][n] = Complex64::new(1.0, 0.0);
        let kn = momenta[n].value;
        if n + 1 < modes {
            let v = lambda * ((n + 1) as f64 / (kn * momenta[n + 1].value)).sqrt();
            a[n][n + 1] = 0.5 * phase(n) * v;
        }
        if n >= 1 {
            let v = lambda * (n as f64 / (kn * momenta[n - 1].value)).sqrt();
            a[n][n - 1] = 0.5 * phase(n) * v;
        }
    }
    let (inv, condition) = invert_complex(&a).map_err(|e| match e {
        Error::IllConditioned { cond, .. } => Error::IllConditioned { op: "s_matrix_channel", cond },
        other => other,
    })?;
    let dim = 2 * modes;
    let mut entries = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            entries[i][j] = inv[i % modes][j % modes];
        }
        entries[i][i] -= 1.0;
    }
    Ok(ChannelScattering { modes, open, entries, condition })
}
