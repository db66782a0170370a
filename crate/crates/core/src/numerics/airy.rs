//! Airy functions Ai, Bi and their derivatives for real arguments.
//!
//! Regions:
//! * `x < -8`: oscillatory asymptotic expansions;
//! * `-8 <= x < 0`: Taylor stepping of `y'' = x y` outward from the origin;
//! * `0 <= x <= 8`: Maclaurin series for Bi (no cancellation on this side);
//! * `0 <= x <= 1`: Maclaurin series for Ai;
//! * `x > 1`: Ai from the Macdonald-function integral;
//! * `x > 8`: Bi from its exponential asymptotic expansion.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Ai(0).
const C1: f64 = 0.355_028_053_887_817_239;
/// -Ai'(0).
const C2: f64 = 0.258_819_403_792_806_798;
const SQRT3: f64 = 1.732_050_807_568_877_2;

const SERIES_SPLIT: f64 = 8.0;
const OVERFLOW_X: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: f64,
    pub aip: f64,
    pub bi: f64,
    pub bip: f64,
}

/// All four Airy values at `x`. Fails with `Overflow` above x = 100, where Bi
/// leaves the double range.
pub fn airy(x: f64) -> Result<AiryValues> {
    if x.is_nan() {
        return Err(Error::domain("airy", "NaN argument"));
    }
    if x > OVERFLOW_X {
        return Err(Error::Overflow { op: "airy", x });
    }
    if x < -SERIES_SPLIT {
        return Ok(asymptotic_negative(-x));
    }
    if x < 0.0 {
        return Ok(taylor_from_origin(x));
    }
    let (ai, aip) = if x <= 1.0 {
        let (f, fp, g, gp) = maclaurin(x);
        (C1 * f - C2 * g, C1 * fp - C2 * gp)
    } else {
        ai_macdonald(x)
    };
    let (bi, bip) = if x <= SERIES_SPLIT {
        let (f, fp, g, gp) = maclaurin(x);
        (SQRT3 * (C1 * f + C2 * g), SQRT3 * (C1 * fp + C2 * gp))
    } else {
        bi_asymptotic_positive(x)
    };
    Ok(AiryValues { ai, aip, bi, bip })
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy(x).map(|v| v.ai)
}

pub fn airy_bi(x: f64) -> Result<f64> {
    airy(x).map(|v| v.bi)
}

/// The two power series f, g of the Airy equation and their derivatives.
fn maclaurin(x: f64) -> (f64, f64, f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut t) = (1.0, 1.0);
    let (mut g, mut s) = (x, x);
    let (mut fp, mut d) = (0.0, 0.0);
    let (mut gp, mut e) = (1.0, 1.0);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        t *= x3 / ((k3 - 1.0) * k3);
        s *= x3 / (k3 * (k3 + 1.0));
        d = if k == 1 { x * x / 2.0 } else { d * x3 / ((k3 - 3.0) * (k3 - 1.0)) };
        e *= x3 / (k3 * (k3 - 2.0));
        f += t;
        g += s;
        fp += d;
        gp += e;
        let tiny = 1e-17 * (f.abs() + g.abs() + fp.abs() + gp.abs());
        if t.abs() + s.abs() + d.abs() + e.abs() < tiny {
            break;
        }
    }
    (f, fp, g, gp)
}

/// Integrates `y'' = x y` by Taylor steps from the origin to `x < 0`, carrying
/// both Ai and Bi. Both solutions oscillate there, so stepping is stable.
fn taylor_from_origin(x: f64) -> AiryValues {
    let mut a = (C1, -C2);
    let mut b = (SQRT3 * C1, SQRT3 * C2);
    let mut x0 = 0.0;
    let n_steps = (x.abs() / 0.5).ceil().max(1.0) as usize;
    let h = x / n_steps as f64;
    for _ in 0..n_steps {
        a = taylor_step(x0, a, h);
        b = taylor_step(x0, b, h);
        x0 += h;
    }
    AiryValues { ai: a.0, aip: a.1, bi: b.0, bip: b.1 }
}

fn taylor_step(x0: f64, (y, yp): (f64, f64), h: f64) -> (f64, f64) {
    // a_{n+2} (n+2)(n+1) = x0 a_n + a_{n-1}
    let mut a_prev2 = 0.0; // a_{n-1}
    let mut a_prev = y; // a_n, n = 0
    let mut a_cur = yp; // a_{n+1}
    let mut val = y + yp * h;
    let mut der = yp;
    let mut hp = h; // h^{n+1}
    let scale = y.abs() + yp.abs();
    let mut quiet = 0;
    for n in 0..200usize {
        let next = (x0 * a_prev + a_prev2) / ((n + 2) as f64 * (n + 1) as f64);
        der += (n + 2) as f64 * next * hp;
        hp *= h;
        val += next * hp;
        if (next * hp).abs() < 1e-18 * scale {
            quiet += 1;
            if quiet >= 3 {
                break;
            }
        } else {
            quiet = 0;
        }
        a_prev2 = a_prev;
        a_prev = a_cur;
        a_cur = next;
    }
    (val, der)
}

/// ∫_0^∞ exp(-z (cosh t - 1)) cosh(ν t) dt by the trapezoidal rule; the
/// integrand is entire and decays doubly exponentially.
fn macdonald_scaled(nu: f64, z: f64) -> f64 {
    // the peak at t = 0 has width ~ 1/√z
    let h = (0.5 / z.sqrt()).min(0.1);
    let mut sum = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let sh = (0.5 * t).sinh();
        let term = (-2.0 * z * sh * sh).exp() * (nu * t).cosh();
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        k += 1;
    }
    sum * h
}

fn ai_macdonald(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let e = (-zeta).exp();
    let k13 = macdonald_scaled(1.0 / 3.0, zeta) * e;
    let k23 = macdonald_scaled(2.0 / 3.0, zeta) * e;
    let ai = (x / 3.0).sqrt() * k13 / PI;
    let aip = -x / (PI * SQRT3) * k23;
    (ai, aip)
}

/// Coefficients u_k, v_k of the large-argument expansions, summed as
/// Σ c_k ζ^{-k}. With `parity = Some(p)` only k ≡ p (mod 2) is kept and the
/// kept terms alternate in sign. Truncated at the smallest term.
fn asymptotic_sums(zeta: f64, parity: Option<usize>) -> (f64, f64) {
    let mut u = 1.0;
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut zp = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..200usize {
        if k > 0 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
            zp /= zeta;
        }
        let v = if k == 0 { 1.0 } else { -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u };
        let mag = (u * zp).abs().max((v * zp).abs());
        if mag > last {
            break;
        }
        last = mag;
        let include = match parity {
            None => true,
            Some(p) => k % 2 == p,
        };
        if include {
            let alt = match parity {
                Some(_) if (k / 2) % 2 == 1 => -1.0,
                _ => 1.0,
            };
            su += alt * u * zp;
            sv += alt * v * zp;
        }
        if mag < 1e-17 {
            break;
        }
    }
    (su, sv)
}

fn bi_asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x * x.sqrt();
    let (su, sv) = asymptotic_sums(zeta, None);
    let q = x.powf(0.25);
    let e = zeta.exp();
    (e / (PI.sqrt() * q) * su, q * e / PI.sqrt() * sv)
}

fn asymptotic_negative(z: f64) -> AiryValues {
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let (pu, pv) = asymptotic_sums(zeta, Some(0));
    let (qu, qv) = asymptotic_sums(zeta, Some(1));
    let theta = zeta - PI / 4.0;
    let (s, c) = theta.sin_cos();
    let q = z.powf(0.25);
    let rp = PI.sqrt();
    AiryValues {
        ai: (c * pu + s * qu) / (rp * q),
        bi: (-s * pu + c * qu) / (rp * q),
        aip: q / rp * (s * pv - c * qv),
        bip: q / rp * (c * pv + s * qv),
    }
}
