use serde::{Deserialize, Serialize};

/// A real number stored as `mantissa * 2^exponent` with `0.5 <= |mantissa| < 1`
/// (or mantissa 0). Used for determinants that overflow `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: i64,
}

/// Splits a finite `x` into `(m, e)` with `x = m * 2^e`, `0.5 <= |m| < 1`.
pub fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    if raw_exp == 0 {
        // subnormal: lift into the normal range first
        let (m, e) = frexp(x * f64::powi(2.0, 64));
        return (m, e - 64);
    }
    let e = raw_exp - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

/// `m * 2^e`, saturating to 0 or infinity.
pub fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let mut x = m;
    let mut e = e;
    while e > 1000 {
        x *= f64::powi(2.0, 1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= f64::powi(2.0, -1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * f64::powi(2.0, e as i32)
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mantissa: 0.0, exponent: 0 };
    pub const ONE: Scaled = Scaled { mantissa: 0.5, exponent: 1 };

    pub fn new(x: f64) -> Self {
        let (mantissa, exponent) = frexp(x);
        Scaled { mantissa, exponent }
    }

    pub fn from_parts(mantissa: f64, exponent: i64) -> Self {
        let (m, e) = frexp(mantissa);
        Scaled { mantissa: m, exponent: if m == 0.0 { 0 } else { e + exponent } }
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.mantissa, self.exponent)
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn signum(self) -> f64 {
        if self.mantissa == 0.0 {
            0.0
        } else {
            self.mantissa.signum()
        }
    }

    /// Natural log of the absolute value.
    pub fn ln_abs(self) -> f64 {
        self.mantissa.abs().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    pub fn mul_f64(self, x: f64) -> Self {
        Scaled::from_parts(self.mantissa * x, self.exponent)
    }

    pub fn mul(self, other: Scaled) -> Self {
        Scaled::from_parts(self.mantissa * other.mantissa, self.exponent + other.exponent)
    }

    pub fn add(self, other: Scaled) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= other.exponent { (self, other) } else { (other, self) };
        let shift = small.exponent - big.exponent;
        Scaled::from_parts(big.mantissa + ldexp(small.mantissa, shift), big.exponent)
    }

    pub fn neg(self) -> Self {
        Scaled { mantissa: -self.mantissa, exponent: self.exponent }
    }

    pub fn sub(self, other: Scaled) -> Self {
        self.add(other.neg())
    }

    pub fn pow(self, n: usize) -> Self {
        let mut out = Scaled::ONE;
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `self / other` as a plain `f64`.
    pub fn ratio(self, other: Scaled) -> f64 {
        ldexp(self.mantissa / other.mantissa, self.exponent - other.exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frexp_roundtrip() {
        for &x in &[1.0, -3.5, 1e300, 1e-300, 5e-324, 0.75, -0.5] {
            let (m, e) = frexp(x);
            assert!((0.5..1.0).contains(&m.abs()), "{x}: {m}");
            assert_eq!(ldexp(m, e), x);
        }
        assert_eq!(frexp(0.0), (0.0, 0));
    }

    #[test]
    fn arithmetic() {
        let a = Scaled::new(3.0);
        let b = Scaled::new(-0.25);
        assert_eq!(a.mul(b).to_f64(), -0.75);
        assert_eq!(a.add(b).to_f64(), 2.75);
        assert_eq!(a.sub(b).to_f64(), 3.25);
        assert_eq!(a.ratio(b), -12.0);
        assert_eq!(Scaled::ONE.to_f64(), 1.0);
        let mut big = Scaled::ONE;
        for _ in 0..2000 {
            big = big.mul_f64(10.0);
        }
        assert!((big.ln_abs() - 2000.0 * 10f64.ln()).abs() < 1e-9);
        assert!(big.to_f64().is_infinite());
    }
}
