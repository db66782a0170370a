use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639,
    0.949_107_912_342_758_525,
    0.864_864_423_359_769_073,
    0.741_531_185_599_394_440,
    0.586_087_235_467_691_130,
    0.405_845_151_377_397_167,
    0.207_784_955_007_898_468,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_553,
    0.104_790_010_322_250_184,
    0.140_653_259_715_525_919,
    0.169_004_726_639_267_903,
    0.190_350_578_064_785_410,
    0.204_432_940_075_298_892,
    0.209_482_141_084_727_828,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693,
    0.279_705_391_489_276_668,
    0.381_830_050_505_118_945,
    0.417_959_183_673_469_388,
];

const MAX_DEPTH: usize = 60;

/// One 7/15-point Gauss-Kronrod panel: (Kronrod estimate, |K - G|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss-Kronrod integration of `f` over `[a, b]` to absolute
/// error `tol`.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (whole, err) = gk15(&f, a, b);
    let mut total = 0.0;
    recurse(&f, a, b, whole, err, tol, 0, &mut total)?;
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    est: f64,
    err: f64,
    tol: f64,
    depth: usize,
    total: &mut f64,
) -> Result<()> {
    if err <= tol || (err <= 1e-15 * est.abs()) {
        *total += est;
        return Ok(());
    }
    if depth >= MAX_DEPTH || !est.is_finite() {
        return Err(Error::NoConvergence {
            op: "adaptive_quadrature",
            msg: format!("depth limit on [{a}, {b}] with error estimate {err:e}"),
        });
    }
    let m = 0.5 * (a + b);
    let (l, el) = gk15(f, a, m);
    let (r, er) = gk15(f, m, b);
    recurse(f, a, m, l, el, 0.5 * tol, depth + 1, total)?;
    recurse(f, m, b, r, er, 0.5 * tol, depth + 1, total)
}

/// ∫_a^b f for integrands behaving like |x - a|^{1/2} near `a`: substitutes
/// x = a + (b - a) t², which makes the integrand smooth in t.
pub fn quadrature_sqrt_endpoint<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    let w = b - a;
    adaptive_quadrature(|t| f(a + w * t * t) * 2.0 * w * t, 0.0, 1.0, tol)
}
