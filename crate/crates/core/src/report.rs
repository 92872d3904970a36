//! Run configuration and the serializable report written by the CLI.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GridMap;
use crate::schur::Certificate;
use crate::spectral::{SolverConfig, SpectralPicture, WitnessRow};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
/// Bumped whenever a CSV column is added, removed or reordered.
pub const CSV_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// All parameters of a run. The JSON config file uses these field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub tol: f64,
    pub m: Option<f64>,
    pub m_min: Option<f64>,
    pub m_max: Option<f64>,
    pub points: usize,
    pub alpha: Option<f64>,
    pub ell: u32,
    pub grid_n: usize,
    pub map: String,
    pub map_scale: f64,
    pub drift_tol: f64,
    pub min_gap: f64,
    pub lambda: f64,
    pub indices: Vec<u32>,
    pub trial_a: f64,
    pub trial_b: f64,
    pub format: Format,
    pub output: String,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            tol: 1e-10,
            m: None,
            m_min: None,
            m_max: None,
            points: 16,
            alpha: None,
            ell: 1,
            grid_n: s.grid_n,
            map: s.map.tag().to_string(),
            map_scale: 1.0,
            drift_tol: s.drift_tol,
            min_gap: s.min_gap,
            lambda: 0.5,
            indices: vec![8, 16, 32, 64],
            trial_a: 1.2,
            trial_b: 0.05,
            format: Format::Csv,
            output: "-".into(),
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tol", self.tol),
            ("map_scale", self.map_scale),
            ("drift_tol", self.drift_tol),
            ("min_gap", self.min_gap),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.grid_n < 16 {
            return Err(Error::Config(format!("grid_n must be at least 16, got {}", self.grid_n)));
        }
        GridMap::from_tag(&self.map, self.map_scale)?;
        Ok(())
    }

    pub fn solver(&self) -> Result<SolverConfig> {
        let map = match GridMap::from_tag(&self.map, self.map_scale)? {
            GridMap::Exponential { scale, .. } => GridMap::exponential(scale),
            other => other,
        };
        Ok(SolverConfig { grid_n: self.grid_n, map, drift_tol: self.drift_tol, min_gap: self.min_gap })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub root: f64,
    pub quadrature: f64,
    pub drift: f64,
    pub min_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub quantity: String,
    pub value: f64,
    pub reciprocal: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: f64,
    pub epsilon_min: f64,
    pub c1_bound: f64,
    pub c3_bound: f64,
    pub certifies_absence: bool,
    pub energies: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSection {
    pub ell: u32,
    pub alpha: f64,
    pub rows: Vec<SweepRow>,
    /// Row indices k where eps_min fails to increase from row k to k+1.
    pub violations: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: usize,
    pub epsilon: f64,
    pub energy: f64,
    pub residual: f64,
    pub drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSection {
    pub m: f64,
    pub alpha: f64,
    pub ell: u32,
    pub epsilon_min: f64,
    pub picture: SpectralPicture,
    pub levels: Vec<LevelRow>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSection {
    pub m: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub r0: f64,
    pub rows: Vec<WitnessRow>,
    pub residuals_decay: bool,
    pub gram_decays: bool,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionTiming {
    pub section: String,
    pub seconds: f64,
}

/// Everything one CLI run produced, with the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub software: String,
    pub version: String,
    pub csv_schema: u32,
    pub command: String,
    pub config: RunConfig,
    pub tolerances: Tolerances,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<ThresholdRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<Certificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<SpectrumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<SectionTiming>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SpectralReport {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            software: "trimer".into(),
            version: VERSION.into(),
            csv_schema: CSV_SCHEMA,
            command: command.into(),
            config: config.clone(),
            tolerances: Tolerances {
                root: config.tol,
                quadrature: crate::mass::QUAD_TOL,
                drift: config.drift_tol,
                min_gap: config.min_gap,
            },
            thresholds: None,
            certificates: None,
            sweep: None,
            spectrum: None,
            witness: None,
            timings: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Numerical(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("report: {e}")))
    }

    /// The report's main table as RFC-4180 CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Numerical(format!("csv: {e}"));
        if let Some(rows) = &self.thresholds {
            w.write_record(["quantity", "value", "reciprocal", "tolerance"]).map_err(io)?;
            for r in rows {
                w.write_record([r.quantity.clone(), num(r.value), num(r.reciprocal), num(r.tolerance)]).map_err(io)?;
            }
        } else if let Some(certs) = &self.certificates {
            w.write_record(["ell", "m", "bound", "certifies_absence", "r_max", "a_of_r_max", "multiplier"])
                .map_err(io)?;
            for c in certs {
                w.write_record([
                    c.ell.to_string(),
                    num(c.m),
                    num(c.bound),
                    c.certifies_absence.to_string(),
                    num(c.intermediates.r_max),
                    num(c.intermediates.a_of_r_max),
                    num(c.intermediates.multiplier),
                ])
                .map_err(io)?;
            }
        } else if let Some(s) = &self.sweep {
            w.write_record([
                "m",
                "epsilon_min",
                "c1_bound",
                "c3_bound",
                "certifies_absence",
                "energies",
                "tolerance",
            ])
            .map_err(io)?;
            for r in &s.rows {
                let energies: Vec<String> = r.energies.iter().map(|e| num(*e)).collect();
                w.write_record([
                    num(r.m),
                    num(r.epsilon_min),
                    num(r.c1_bound),
                    num(r.c3_bound),
                    r.certifies_absence.to_string(),
                    energies.join(";"),
                    num(r.tolerance),
                ])
                .map_err(io)?;
            }
        } else if let Some(s) = &self.spectrum {
            let (lo, hi) = match s.picture {
                SpectralPicture::Window(w) => (num(w.lower), num(w.upper)),
                SpectralPicture::HalfLine { .. } => (String::new(), String::new()),
            };
            w.write_record(["level", "epsilon", "energy", "window_lower", "window_upper", "residual", "drift"])
                .map_err(io)?;
            for l in &s.levels {
                w.write_record([
                    l.level.to_string(),
                    num(l.epsilon),
                    num(l.energy),
                    lo.clone(),
                    hi.clone(),
                    num(l.residual),
                    num(l.drift),
                ])
                .map_err(io)?;
            }
        } else if let Some(s) = &self.witness {
            w.write_record(["n", "residual_norm", "gram_offdiag", "h_minus_half_norm_sq", "r0"]).map_err(io)?;
            for r in &s.rows {
                w.write_record([
                    r.n.to_string(),
                    num(r.residual_norm),
                    r.gram_offdiag.map(num).unwrap_or_default(),
                    num(r.h_minus_half_norm_sq),
                    num(s.r0),
                ])
                .map_err(io)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Numerical(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Numerical(e.to_string()))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn write_to(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        let text = self.render(format).map_err(std::io::Error::other)?;
        out.write_all(text.as_bytes())
    }
}

// Shortest representation that parses back to the same f64.
fn num(x: f64) -> String {
    format!("{x:?}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_config_key_rejected() {
        assert!(RunConfig::from_json(r#"{"grid_size": 10}"#).is_err());
        let c = RunConfig::from_json(r#"{"grid_n": 100, "alpha": -2.0}"#).unwrap();
        assert_eq!(c.grid_n, 100);
        assert_eq!(c.alpha, Some(-2.0));
        assert_eq!(c.points, 16);
    }

    #[test]
    fn validation() {
        let c = RunConfig { grid_n: 8, ..Default::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { tol: -1.0, ..Default::default() };
        assert!(c.validate().is_err());
        let c = RunConfig { map: "spline".into(), ..Default::default() };
        assert!(c.validate().is_err());
        assert!(RunConfig::default().validate().is_ok());
    }
}
