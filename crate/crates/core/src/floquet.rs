//! The periodic channel: a δ vertex every L along the channel, Floquet phase
//! ω. Modified minor recursion, the ratio-form secular function ζ(η, ω), grid
//! scanning, zero location, curve tracing and band extraction.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{coupling_sq, default_start_depth, scaled_three_term, xi_roots};
use crate::error::{Error, Result};
use crate::numerics::Scaled;
use crate::params::{subcritical, ModelParams, ETA_MIN};
use crate::secular::{classify_cell, guarded_pivot, zeros_from_samples, CellKind, SecularValue};

/// √(m+η)·L beyond which tanh = 1 and sech = 0 to double precision.
const SATURATION: f64 = 40.0;
/// Sub-cells per flagged cell in the refinement pass.
pub const REFINE_FACTOR: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloquetParams {
    pub model: ModelParams,
    pub omega: f64,
}

impl FloquetParams {
    pub fn new(model: ModelParams, omega: f64) -> Result<Self> {
        if !(omega.abs() <= PI) {
            return Err(Error::domain("FloquetParams", format!("need |omega| <= pi, got {omega}")));
        }
        Ok(FloquetParams { model, omega })
    }
}

fn check_eta(op: &'static str, eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("need eta > 0, got {eta}")))
    }
}

/// (v_m, u_m) = (2(1 − cos ω / cosh(√(m+η)L)), tanh(√(m+η)L)).
pub fn uv_coeffs(m: usize, eta: f64, fp: &FloquetParams) -> (f64, f64) {
    let x = (m as f64 + eta).sqrt() * fp.model.period;
    let sech = if x > 710.0 { 0.0 } else { 1.0 / x.cosh() };
    (2.0 * (1.0 - fp.omega.cos() * sech), x.tanh())
}

/// D₋₁ = 1, D₀, …, D_n of the periodic problem, scaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetMinorSequence {
    values: Vec<Scaled>,
}

impl FloquetMinorSequence {
    pub fn get(&self, m: isize) -> Scaled {
        self.values[(m + 1) as usize]
    }

    pub fn n(&self) -> usize {
        self.values.len() - 2
    }
}

/// D_{m+1} = v_{m+1} D_m − c_m² u_m u_{m+1} D_{m−1}, D₋₁ = 1, D₀ = v₀.
pub fn floquet_minors(eta: f64, fp: &FloquetParams, n_max: usize) -> Result<FloquetMinorSequence> {
    check_eta("floquet_minors", eta)?;
    let lambda = fp.model.lambda_scaled;
    let uv: Vec<(f64, f64)> = (0..=n_max + 1).map(|m| uv_coeffs(m, eta, fp)).collect();
    let values = scaled_three_term(
        1.0,
        uv[0].0,
        n_max,
        |m| uv[m + 1].0,
        |m| coupling_sq(m, eta, lambda) * uv[m].1 * uv[m + 1].1,
    );
    Ok(FloquetMinorSequence { values })
}

/// The (n+1)×(n+1) tridiagonal matrix whose leading minors are `floquet_minors`.
pub fn floquet_dense(eta: f64, fp: &FloquetParams, n: usize) -> Vec<Vec<f64>> {
    let lambda = fp.model.lambda_scaled;
    let uv: Vec<(f64, f64)> = (0..=n).map(|m| uv_coeffs(m, eta, fp)).collect();
    let mut a = vec![vec![0.0; n + 1]; n + 1];
    for i in 0..=n {
        a[i][i] = uv[i].0;
        if i < n {
            let off = (coupling_sq(i, eta, lambda) * uv[i].1 * uv[i + 1].1).sqrt();
            a[i][i + 1] = off;
            a[i + 1][i] = off;
        }
    }
    a
}

/// Everything about ζ(η, ·) that does not depend on ω: sech/tanh tables up to
/// the saturation index m_c and the backward ratio from m_start down to m_c,
/// where the coefficients are ω-independent.
#[derive(Debug, Clone)]
pub struct EtaProfile {
    pub eta: f64,
    sech: Vec<f64>,
    tanh: Vec<f64>,
    coupling: Vec<f64>,
    tail_g: f64,
    tail_negatives: u32,
    tail_pole: bool,
}

impl EtaProfile {
    pub fn new(eta: f64, params: &ModelParams, m_start: Option<usize>) -> Result<Self> {
        check_eta("zeta_floquet", eta)?;
        let lambda = params.require_subcritical("zeta_floquet")?;
        let (xi_p, _) = xi_roots(lambda)?;
        let m_start = m_start.unwrap_or_else(|| default_start_depth(eta, lambda)).max(2);
        let l = params.period;
        let sat = ((SATURATION / l).powi(2) + 2.0).min(m_start as f64) as usize;
        let mc = sat.max(2);

        let mut g = xi_p;
        let mut neg = 0;
        let mut pole = false;
        for m in (mc..m_start).rev() {
            let p = guarded_pivot(2.0 - g, &mut neg, &mut pole);
            g = coupling_sq(m, eta, lambda) / p;
        }

        let mut sech = Vec::with_capacity(mc + 1);
        let mut tanh = Vec::with_capacity(mc + 1);
        for m in 0..=mc {
            let x = (m as f64 + eta).sqrt() * l;
            sech.push(if x > 710.0 { 0.0 } else { 1.0 / x.cosh() });
            tanh.push(x.tanh());
        }
        let coupling = (0..mc).map(|m| coupling_sq(m, eta, lambda)).collect();
        Ok(EtaProfile { eta, sech, tanh, coupling, tail_g: g, tail_negatives: neg, tail_pole: pole })
    }

    /// ζ(η, ω) = g₁ − D₁/D₀ with the tail sign of the full backward recursion.
    pub fn zeta(&self, omega: f64) -> SecularValue {
        let cw = omega.cos();
        let v = |m: usize| 2.0 * (1.0 - cw * self.sech[m]);
        let e = |m: usize| self.coupling[m] * self.tanh[m] * self.tanh[m + 1];
        let mc = self.sech.len() - 1;
        let mut g = self.tail_g;
        let mut neg = self.tail_negatives;
        let mut pole = self.tail_pole;
        for m in (1..mc).rev() {
            let p = guarded_pivot(v(m + 1) - g, &mut neg, &mut pole);
            g = e(m) / p;
        }
        let (v0, v1) = (v(0), v(1));
        let zeta = g - (v0 * v1 - e(0)) / v0;
        SecularValue { zeta, tail_sign: if neg % 2 == 0 { 1.0 } else { -1.0 }, pole_crossed: pole }
    }
}

/// ζ(η, ω) with its tail sign.
pub fn zeta_floquet_value(eta: f64, fp: &FloquetParams, m_start: Option<usize>) -> Result<SecularValue> {
    Ok(EtaProfile::new(eta, &fp.model, m_start)?.zeta(fp.omega))
}

/// Regularized secular function of the periodic channel.
pub fn zeta_floquet(eta: f64, fp: &FloquetParams) -> Result<f64> {
    zeta_floquet_value(eta, fp, None).map(|v| v.zeta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecularSample {
    pub eta: f64,
    pub omega: f64,
    pub zeta: f64,
    pub tail_sign: f64,
}

impl SecularSample {
    fn value(&self) -> SecularValue {
        SecularValue { zeta: self.zeta, tail_sign: self.tail_sign, pole_crossed: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_omega: usize,
    pub n_eta: usize,
    pub eta_min: f64,
    pub eta_max: f64,
    pub m_start: Option<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_omega: 500, n_eta: 200, eta_min: ETA_MIN, eta_max: 0.5, m_start: None }
    }
}

impl GridSpec {
    fn validate(&self) -> Result<()> {
        if self.n_omega < 2 || self.n_eta < 2 {
            return Err(Error::domain("grid_scan", "grid sizes must be at least 2"));
        }
        if !(self.eta_min > 0.0 && self.eta_max > self.eta_min && self.eta_max.is_finite()) {
            return Err(Error::domain(
                "grid_scan",
                format!("bad eta window [{}, {}]", self.eta_min, self.eta_max),
            ));
        }
        Ok(())
    }

    /// ω_i on [0, π], endpoints included.
    pub fn omegas(&self) -> Vec<f64> {
        linspace(0.0, PI, self.n_omega)
    }

    pub fn etas(&self) -> Vec<f64> {
        linspace(self.eta_min, self.eta_max, self.n_eta)
    }

    pub fn d_omega(&self) -> f64 {
        PI / (self.n_omega - 1) as f64
    }

    pub fn d_eta(&self) -> f64 {
        (self.eta_max - self.eta_min) / (self.n_eta - 1) as f64
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// ζ sampled on an ω × η grid, stored ω-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetScan {
    pub params: ModelParams,
    pub grid: GridSpec,
    pub omegas: Vec<f64>,
    pub etas: Vec<f64>,
    pub samples: Vec<SecularSample>,
}

impl FloquetScan {
    pub fn column(&self, i_omega: usize) -> &[SecularSample] {
        let n = self.etas.len();
        &self.samples[i_omega * n..(i_omega + 1) * n]
    }
}

/// Samples ζ on the grid. Rows of fixed η are independent and run in parallel;
/// each row shares its ω-independent tail.
pub fn grid_scan(params: &ModelParams, grid: &GridSpec) -> Result<FloquetScan> {
    params.require_subcritical("grid_scan")?;
    grid.validate()?;
    let omegas = grid.omegas();
    let etas = grid.etas();
    let rows: Vec<Vec<SecularValue>> = etas
        .par_iter()
        .map(|&eta| {
            let prof = EtaProfile::new(eta, params, grid.m_start)?;
            Ok(omegas.iter().map(|&w| prof.zeta(w)).collect())
        })
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(omegas.len() * etas.len());
    for (i, &omega) in omegas.iter().enumerate() {
        for (j, &eta) in etas.iter().enumerate() {
            let v = rows[j][i];
            samples.push(SecularSample { eta, omega, zeta: v.zeta, tail_sign: v.tail_sign });
        }
    }
    Ok(FloquetScan { params: *params, grid: *grid, omegas, etas, samples })
}

/// Zeros of one ω column: sign changes of the pole-free determinant, refined
/// by bisection with `f` and filtered by the midpoint magnitude test.
pub fn locate_zeros<F>(column: &[SecularSample], f: &F, tol: f64) -> Vec<f64>
where
    F: Fn(f64) -> SecularValue + Sync,
{
    let samples: Vec<(f64, SecularValue)> = column.iter().map(|s| (s.eta, s.value())).collect();
    zeros_from_samples(&samples, f, tol).roots
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnZeros {
    pub omega: f64,
    /// Sorted ascending.
    pub roots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetZeros {
    pub columns: Vec<ColumnZeros>,
    pub poles_rejected: usize,
    pub magnitude_rejected: usize,
}

impl FloquetZeros {
    pub fn total(&self) -> usize {
        self.columns.iter().map(|c| c.roots.len()).sum()
    }
}

/// Locates the zeros of every column of `scan`. With `refine`, every cell that
/// shows a sign change of ζ or of the determinant, and its two neighbours, is
/// resampled on a 10× finer η step before bisection.
pub fn scan_zeros(scan: &FloquetScan, tol: f64, refine: bool) -> Result<FloquetZeros> {
    let n_eta = scan.etas.len();
    let params = scan.params;
    let m_start = scan.grid.m_start;

    // cell index -> columns needing it
    let mut flagged: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    if refine {
        for i in 0..scan.omegas.len() {
            let col = scan.column(i);
            for j in 0..n_eta - 1 {
                if classify_cell(&col[j].value(), &col[j + 1].value()) != CellKind::None {
                    for k in j.saturating_sub(1)..=(j + 1).min(n_eta - 2) {
                        let cols = flagged.entry(k).or_default();
                        if cols.last() != Some(&i) {
                            cols.push(i);
                        }
                    }
                }
            }
        }
    }

    // sub-samples of flagged cells, keyed by (cell, column)
    let sub: Vec<(usize, Vec<(usize, Vec<(f64, SecularValue)>)>)> = flagged
        .par_iter()
        .map(|(&j, cols)| {
            let (a, b) = (scan.etas[j], scan.etas[j + 1]);
            let profiles = (1..REFINE_FACTOR)
                .map(|k| EtaProfile::new(a + (b - a) * k as f64 / REFINE_FACTOR as f64, &params, m_start))
                .collect::<Result<Vec<_>>>()?;
            let per_col = cols
                .iter()
                .map(|&i| {
                    let w = scan.omegas[i];
                    (i, profiles.iter().map(|p| (p.eta, p.zeta(w))).collect())
                })
                .collect();
            Ok((j, per_col))
        })
        .collect::<Result<_>>()?;
    let mut inserts: Vec<BTreeMap<usize, Vec<(f64, SecularValue)>>> = vec![BTreeMap::new(); scan.omegas.len()];
    for (j, per_col) in sub {
        for (i, pts) in per_col {
            inserts[i].insert(j, pts);
        }
    }

    let results: Vec<(ColumnZeros, usize, usize)> = (0..scan.omegas.len())
        .into_par_iter()
        .map(|i| {
            let w = scan.omegas[i];
            let col = scan.column(i);
            let mut samples = Vec::with_capacity(n_eta);
            for j in 0..n_eta {
                samples.push((col[j].eta, col[j].value()));
                if let Some(extra) = inserts[i].get(&j) {
                    samples.extend_from_slice(extra);
                }
            }
            let f = |eta: f64| {
                EtaProfile::new(eta, &params, m_start)
                    .map(|p| p.zeta(w))
                    .unwrap_or(SecularValue { zeta: f64::NAN, tail_sign: 1.0, pole_crossed: true })
            };
            let z = zeros_from_samples(&samples, &f, tol);
            (ColumnZeros { omega: w, roots: z.roots }, z.poles_rejected, z.magnitude_rejected)
        })
        .collect();

    let mut out = FloquetZeros { columns: Vec::new(), poles_rejected: 0, magnitude_rejected: 0 };
    for (c, p, m) in results {
        out.columns.push(c);
        out.poles_rejected += p;
        out.magnitude_rejected += m;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    /// Largest η drop accepted between matched points; also the cost of
    /// leaving a point unmatched.
    pub jump_threshold: f64,
    /// Columns a curve may skip before it is closed.
    pub max_gap: usize,
    pub min_length: usize,
    /// Allowed η increase between matched points (noise).
    pub rise_tolerance: f64,
}

impl TraceOptions {
    /// Defaults for a grid with steps (Δω, Δη).
    pub fn for_grid(d_omega: f64, d_eta: f64) -> Self {
        TraceOptions { jump_threshold: 5.0 * d_omega.max(d_eta), max_gap: 5, min_length: 5, rise_tolerance: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetCurve {
    /// (ω, η), ω increasing.
    pub points: Vec<(f64, f64)>,
    pub start: (f64, f64),
    pub end: (f64, f64),
    /// Shorter than `min_length`.
    pub fragment: bool,
}

impl FloquetCurve {
    fn from_points(points: Vec<(f64, f64)>, min_length: usize) -> Self {
        let start = points[0];
        let end = *points.last().unwrap();
        let fragment = points.len() < min_length;
        FloquetCurve { points, start, end, fragment }
    }

    /// Largest η increase between consecutive points.
    pub fn max_rise(&self) -> f64 {
        self.points.windows(2).map(|w| w[1].1 - w[0].1).fold(0.0, f64::max)
    }
}

struct Active {
    curve: usize,
    eta: f64,
    column: usize,
}

/// Chains roots across ω columns. Each column is matched to the open curves by
/// an order-preserving assignment that minimises total |Δη| plus
/// `jump_threshold` per unmatched point; a match must satisfy
/// −rise_tolerance ≤ η_prev − η_new ≤ jump_threshold.
pub fn trace_curves(zeros: &[ColumnZeros], opts: &TraceOptions) -> Vec<FloquetCurve> {
    let j = opts.jump_threshold;
    let mut curves: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut active: Vec<Active> = Vec::new();
    for (ci, col) in zeros.iter().enumerate() {
        active.retain(|a| ci - a.column <= opts.max_gap + 1);
        active.sort_by(|a, b| b.eta.total_cmp(&a.eta));
        let mut pts = col.roots.clone();
        pts.sort_by(|a, b| b.total_cmp(a));
        let (n, m) = (active.len(), pts.len());

        let mut cost = vec![vec![0.0; m + 1]; n + 1];
        let mut back = vec![vec![0u8; m + 1]; n + 1];
        for k in 0..=m {
            cost[0][k] = k as f64 * j;
            back[0][k] = 2;
        }
        for i in 0..=n {
            cost[i][0] = i as f64 * j;
            back[i][0] = 1;
        }
        for i in 1..=n {
            for k in 1..=m {
                let mut best = (cost[i - 1][k] + j, 1u8);
                if cost[i][k - 1] + j < best.0 {
                    best = (cost[i][k - 1] + j, 2);
                }
                let d = active[i - 1].eta - pts[k - 1];
                if d >= -opts.rise_tolerance && d <= j && cost[i - 1][k - 1] + d.abs() < best.0 {
                    best = (cost[i - 1][k - 1] + d.abs(), 3);
                }
                cost[i][k] = best.0;
                back[i][k] = best.1;
            }
        }
        let mut matched: Vec<Option<usize>> = vec![None; m];
        let (mut i, mut k) = (n, m);
        while i > 0 && k > 0 {
            match back[i][k] {
                3 => {
                    matched[k - 1] = Some(i - 1);
                    i -= 1;
                    k -= 1;
                }
                1 => i -= 1,
                _ => k -= 1,
            }
        }
        let mut taken = vec![false; n];
        let mut next = Vec::with_capacity(n + m);
        for (k, &eta) in pts.iter().enumerate() {
            let c = match matched[k] {
                Some(a) => {
                    taken[a] = true;
                    active[a].curve
                }
                None => {
                    curves.push(Vec::new());
                    curves.len() - 1
                }
            };
            curves[c].push((col.omega, eta));
            next.push(Active { curve: c, eta, column: ci });
        }
        for (a, t) in active.into_iter().zip(taken) {
            if !t {
                next.push(a);
            }
        }
        active = next;
    }
    curves.into_iter().map(|p| FloquetCurve::from_points(p, opts.min_length)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Rectangle of the scan, used to decide which curves run edge to edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanDomain {
    pub omega_lo: f64,
    pub omega_hi: f64,
    pub eta_lo: f64,
    pub eta_hi: f64,
    /// Distance from an edge that still counts as on it.
    pub tolerance: f64,
}

impl ScanDomain {
    pub fn of_grid(grid: &GridSpec, opts: &TraceOptions) -> Self {
        ScanDomain { omega_lo: 0.0, omega_hi: PI, eta_lo: grid.eta_min, eta_hi: grid.eta_max, tolerance: opts.jump_threshold }
    }

    pub fn on_boundary(&self, (w, eta): (f64, f64)) -> bool {
        let t = self.tolerance;
        w <= self.omega_lo + t || w >= self.omega_hi - t || eta <= self.eta_lo + t || eta >= self.eta_hi - t
    }
}

/// Bands [min η, max η] of every complete curve, sorted by lower edge, and B,
/// the number of complete curves. A curve is complete when it is not a
/// fragment and both ends lie on the boundary of the scan domain.
pub fn extract_bands(curves: &[FloquetCurve], domain: &ScanDomain) -> (Vec<Band>, usize) {
    let mut bands: Vec<Band> = curves
        .iter()
        .filter(|c| !c.fragment && domain.on_boundary(c.start) && domain.on_boundary(c.end))
        .map(|c| {
            let (lo, hi) = c.points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
            Band { index: 0, lo, hi }
        })
        .collect();
    bands.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    for (i, b) in bands.iter_mut().enumerate() {
        b.index = i;
    }
    let count = bands.len();
    (bands, count)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloquetBands {
    pub zeros: FloquetZeros,
    pub curves: Vec<FloquetCurve>,
    pub bands: Vec<Band>,
    pub count: usize,
}

/// Scan, zero location (with one refinement pass when `refine`), tracing and
/// band extraction with default tracing options.
pub fn floquet_bands(params: &ModelParams, grid: &GridSpec, tol: f64, refine: bool) -> Result<FloquetBands> {
    subcritical("floquet_bands", params.lambda_scaled)?;
    let scan = grid_scan(params, grid)?;
    let zeros = scan_zeros(&scan, tol, refine)?;
    let opts = TraceOptions::for_grid(grid.d_omega(), grid.d_eta());
    let curves = trace_curves(&zeros.columns, &opts);
    let (bands, count) = extract_bands(&curves, &ScanDomain::of_grid(grid, &opts));
    Ok(FloquetBands { zeros, curves, bands, count })
}
