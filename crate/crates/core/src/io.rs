//! Result files: CSV tables written with 17 significant digits and a
//! versioned JSON document. Readers check headers and the schema version.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{Band, FloquetCurve, SecularSample};
use crate::kp1d::KappaRoots;

pub const SCHEMA_VERSION: u32 = 1;

pub const GRID_HEADER: [&str; 3] = ["omega", "eta", "zeta"];
pub const CURVES_HEADER: [&str; 3] = ["curve_id", "omega", "eta"];
pub const BANDS_HEADER: [&str; 3] = ["band_id", "eta_lo", "eta_hi"];
pub const ROOTS_HEADER: [&str; 2] = ["root_id", "eta"];
pub const KAPPA_HEADER: [&str; 2] = ["omega", "kappa"];
pub const POTENTIAL_HEADER: [&str; 4] = ["omega", "eta", "m", "potential"];

/// Scientific notation with 17 significant digits; round-trips every f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub omega: f64,
    pub eta: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub curve_id: usize,
    pub omega: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub band_id: usize,
    pub eta_lo: f64,
    pub eta_hi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootRow {
    pub root_id: usize,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub omega: f64,
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialRow {
    pub omega: f64,
    pub eta: f64,
    pub m: f64,
    /// (V − 2)/(V(∞) − 2).
    pub potential: f64,
}

fn write_table<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

fn read_table<T: DeserializeOwned>(text: &str, header: &[&str]) -> Result<Vec<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let got = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(Error::Parse(format!("expected header {}, got {}", header.join(","), got.iter().collect::<Vec<_>>().join(","))));
    }
    rdr.deserialize().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}

/// Grid rows in ω-major order.
pub fn write_grid_csv(samples: &[SecularSample]) -> String {
    write_table(GRID_HEADER, samples.iter().map(|s| [fmt17(s.omega), fmt17(s.eta), fmt17(s.zeta)]))
}

pub fn read_grid_csv(text: &str) -> Result<Vec<GridRow>> {
    read_table(text, &GRID_HEADER)
}

pub fn write_curves_csv(curves: &[FloquetCurve]) -> String {
    let rows = curves
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.points.iter().map(move |&(w, eta)| [i.to_string(), fmt17(w), fmt17(eta)]));
    write_table(CURVES_HEADER, rows)
}

pub fn read_curves_csv(text: &str) -> Result<Vec<CurveRow>> {
    read_table(text, &CURVES_HEADER)
}

pub fn write_bands_csv(bands: &[Band]) -> String {
    write_table(BANDS_HEADER, bands.iter().map(|b| [b.index.to_string(), fmt17(b.lo), fmt17(b.hi)]))
}

pub fn read_bands_csv(text: &str) -> Result<Vec<BandRow>> {
    let rows: Vec<BandRow> = read_table(text, &BANDS_HEADER)?;
    if let Some(r) = rows.iter().find(|r| !(r.eta_lo <= r.eta_hi)) {
        return Err(Error::Parse(format!("band {} has eta_lo > eta_hi", r.band_id)));
    }
    Ok(rows)
}

pub fn write_roots_csv(roots: &[f64]) -> String {
    write_table(ROOTS_HEADER, roots.iter().enumerate().map(|(i, &r)| [i.to_string(), fmt17(r)]))
}

pub fn read_roots_csv(text: &str) -> Result<Vec<RootRow>> {
    read_table(text, &ROOTS_HEADER)
}

pub fn write_kappa_csv(roots: &[KappaRoots]) -> String {
    let rows = roots.iter().flat_map(|r| r.kappas.iter().map(move |&k| [fmt17(r.omega), fmt17(k)]));
    write_table(KAPPA_HEADER, rows)
}

pub fn read_kappa_csv(text: &str) -> Result<Vec<KappaRow>> {
    read_table(text, &KAPPA_HEADER)
}

pub fn write_potential_csv(rows: &[PotentialRow]) -> String {
    write_table(
        POTENTIAL_HEADER,
        rows.iter().map(|r| [fmt17(r.omega), fmt17(r.eta), fmt17(r.m), fmt17(r.potential)]),
    )
}

pub fn read_potential_csv(text: &str) -> Result<Vec<PotentialRow>> {
    read_table(text, &POTENTIAL_HEADER)
}

/// Payload of a results document, tagged by command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunResults {
    Kp1dBands {
        roots: Vec<KappaRoots>,
        /// Energy intervals [lo, hi], lo ≤ hi < 0.
        bands: Vec<(f64, f64)>,
    },
    SingleSpectrum {
        roots: Vec<f64>,
        count: usize,
        /// ⌊1/((1−Λ)2√(2Λ))⌋ when Λ is in its range.
        estimate: Option<usize>,
        poles_rejected: usize,
        magnitude_rejected: usize,
    },
    WkbSpectrum {
        roots: Vec<f64>,
        m0: usize,
        /// Upper end of the η window where the matching is valid.
        eta_limit: f64,
    },
    FloquetScan {
        samples: Vec<SecularSample>,
    },
    FloquetBands {
        curves: Vec<FloquetCurve>,
        bands: Vec<Band>,
        count: usize,
    },
    PotentialTable {
        rows: Vec<PotentialRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsDocument<C = serde_json::Value> {
    pub schema_version: u32,
    pub config: C,
    pub results: RunResults,
}

impl<C> ResultsDocument<C> {
    pub fn new(config: C, results: RunResults) -> Self {
        ResultsDocument { schema_version: SCHEMA_VERSION, config, results }
    }
}

pub fn write_results_json<C: Serialize>(doc: &ResultsDocument<C>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn read_results_json<C: DeserializeOwned>(text: &str) -> Result<ResultsDocument<C>> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    match v.get("schema_version").and_then(|s| s.as_u64()) {
        Some(x) if x == SCHEMA_VERSION as u64 => {}
        Some(x) => return Err(Error::Parse(format!("unsupported schema_version {x}"))),
        None => return Err(Error::Parse("missing schema_version".into())),
    }
    serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE, 0.49999999999999994] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let digits = s.split('e').next().unwrap().chars().filter(|c| c.is_ascii_digit()).count();
            assert_eq!(digits, 17);
        }
    }

    #[test]
    fn grid_round_trip() {
        let samples = vec![
            SecularSample { omega: 0.0, eta: 1e-6, zeta: -3.25, tail_sign: 1.0 },
            SecularSample { omega: 0.0, eta: 0.5, zeta: 1.0 / 7.0, tail_sign: -1.0 },
        ];
        let text = write_grid_csv(&samples);
        assert!(text.starts_with("omega,eta,zeta\n"));
        let rows = read_grid_csv(&text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].zeta, 1.0 / 7.0);
        assert_eq!(rows[0].eta, 1e-6);
    }

    #[test]
    fn curves_and_bands_round_trip() {
        let c = FloquetCurve { points: vec![(0.0, 0.4), (0.1, 0.39)], start: (0.0, 0.4), end: (0.1, 0.39), fragment: false };
        let rows = read_curves_csv(&write_curves_csv(&[c.clone(), c])).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3], CurveRow { curve_id: 1, omega: 0.1, eta: 0.39 });
        let b = [Band { index: 0, lo: 0.1, hi: 0.2 }];
        assert_eq!(read_bands_csv(&write_bands_csv(&b)).unwrap(), vec![BandRow { band_id: 0, eta_lo: 0.1, eta_hi: 0.2 }]);
        assert!(read_bands_csv("band_id,eta_lo,eta_hi\n0,0.3,0.2\n").is_err());
    }

    #[test]
    fn header_mismatch_rejected() {
        assert!(read_grid_csv("eta,omega,zeta\n0,0,0\n").is_err());
        assert!(read_roots_csv("root_id,eta\n0,abc\n").is_err());
        assert!(read_roots_csv("").is_err());
        assert_eq!(read_roots_csv("root_id,eta\n").unwrap(), vec![]);
    }

    #[test]
    fn json_round_trip() {
        let doc = ResultsDocument::new(
            serde_json::json!({"command": "single-spectrum", "lambda_scaled": 0.97}),
            RunResults::SingleSpectrum {
                roots: vec![0.223_290_114_712_345_67],
                count: 1,
                estimate: Some(11),
                poles_rejected: 3,
                magnitude_rejected: 0,
            },
        );
        let text = write_results_json(&doc).unwrap();
        let back: ResultsDocument = read_results_json(&text).unwrap();
        assert_eq!(back, doc);
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"kind\": \"single-spectrum\""));
    }

    #[test]
    fn json_version_checked() {
        let bad = r#"{"schema_version": 2, "config": {}, "results": {"kind": "floquet-scan", "samples": []}}"#;
        assert!(read_results_json::<serde_json::Value>(bad).is_err());
        let ok = bad.replace("2,", "1,");
        assert!(read_results_json::<serde_json::Value>(&ok).is_ok());
        assert!(read_results_json::<serde_json::Value>("{}").is_err());
        assert!(read_results_json::<serde_json::Value>("[").is_err());
    }
}
