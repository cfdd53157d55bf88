//! Run configuration shared by the pipelines and the CLI.
//!
//! Serialises to a plain `key=value` file; blank lines and `#` comments are
//! ignored and unknown keys are rejected.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::GeneratorKind;
use crate::grid::GridScale;

/// Stand-in for the implicit constants of `≲`: `Λ(δ) = C_s · log₂(1/δ)^κ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slack {
    pub c_s: f64,
    pub kappa: f64,
}

impl Default for Slack {
    fn default() -> Self {
        Slack {
            c_s: 16.0,
            kappa: 3.0,
        }
    }
}

impl Slack {
    pub fn lambda(&self, scale: GridScale) -> f64 {
        self.c_s * (scale.n() as f64).log2().powf(self.kappa)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub slack: Slack,
    /// Exponent slack in the falsification test `K < δ^{-c(σ) + slack}`.
    pub exponent_slack: f64,
    /// Plancherel cutoff `Ξ = xi_multiplier · n`.
    pub xi_multiplier: f64,
    /// High band `[n, i2_multiplier · n]` of the energy-mean split.
    pub i2_multiplier: f64,
    /// Simpson samples per oscillation in the energy-mean split.
    pub samples_per_cycle: usize,
    pub gauss_order: usize,
    pub bilinear_rel_tol: f64,
    /// Non-concentration constant `C` for hypothesis checks and `α, β`.
    pub concentration_constant: f64,
    pub witness_samples: usize,
    pub kind: GeneratorKind,
    pub sigmas: Vec<f64>,
    pub ladder: Vec<u64>,
    pub seeds: Vec<u64>,
    pub output_dir: PathBuf,
    /// 0 means rayon's default.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            slack: Slack::default(),
            exponent_slack: 0.1,
            xi_multiplier: 1000.0,
            i2_multiplier: 4.0,
            samples_per_cycle: 8,
            gauss_order: 8,
            bilinear_rel_tol: 1e-6,
            concentration_constant: 16.0,
            witness_samples: 64,
            kind: GeneratorKind::RandomTree,
            sigmas: vec![0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9],
            ladder: (8..=14).map(|m| 1u64 << m).collect(),
            seeds: (1..=5).collect(),
            output_dir: PathBuf::from("."),
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected key=value, found `{line}`"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse {
                line: line_no,
                message: format!("bad value `{value}` for `{key}`: {what}"),
            };
            match key {
                "c_s" => cfg.slack.c_s = value.parse().map_err(|_| bad("number"))?,
                "kappa" => cfg.slack.kappa = value.parse().map_err(|_| bad("number"))?,
                "exponent_slack" => cfg.exponent_slack = value.parse().map_err(|_| bad("number"))?,
                "xi_multiplier" => cfg.xi_multiplier = value.parse().map_err(|_| bad("number"))?,
                "i2_multiplier" => cfg.i2_multiplier = value.parse().map_err(|_| bad("number"))?,
                "samples_per_cycle" => {
                    cfg.samples_per_cycle = value.parse().map_err(|_| bad("integer"))?
                }
                "gauss_order" => cfg.gauss_order = value.parse().map_err(|_| bad("integer"))?,
                "bilinear_rel_tol" => {
                    cfg.bilinear_rel_tol = value.parse().map_err(|_| bad("number"))?
                }
                "concentration_constant" => {
                    cfg.concentration_constant = value.parse().map_err(|_| bad("number"))?
                }
                "witness_samples" => {
                    cfg.witness_samples = value.parse().map_err(|_| bad("integer"))?
                }
                "kind" => cfg.kind = value.parse().map_err(|_| bad("generator kind"))?,
                "sigmas" => cfg.sigmas = parse_list(value).map_err(|_| bad("list of numbers"))?,
                "ladder" => cfg.ladder = parse_list(value).map_err(|_| bad("list of integers"))?,
                "seeds" => cfg.seeds = parse_list(value).map_err(|_| bad("list of integers"))?,
                "output_dir" => cfg.output_dir = PathBuf::from(value),
                "threads" => cfg.threads = value.parse().map_err(|_| bad("integer"))?,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("c_s", self.slack.c_s),
            ("kappa", self.slack.kappa),
            ("xi_multiplier", self.xi_multiplier),
            ("i2_multiplier", self.i2_multiplier),
            ("bilinear_rel_tol", self.bilinear_rel_tol),
            ("concentration_constant", self.concentration_constant),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, format!("{v} must be positive")));
            }
        }
        if self.exponent_slack < 0.0 {
            return Err(Error::param("exponent_slack", "must be nonnegative"));
        }
        if self.i2_multiplier < 1.0 {
            return Err(Error::param("i2_multiplier", "must be at least 1"));
        }
        if self.samples_per_cycle < 2 || self.gauss_order == 0 || self.witness_samples == 0 {
            return Err(Error::param("budgets", "sample counts must be positive"));
        }
        if self.sigmas.is_empty() || self.ladder.is_empty() || self.seeds.is_empty() {
            return Err(Error::param("sweep", "sigmas, ladder and seeds must be nonempty"));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let list = |v: &[String]| v.join(",");
        let _ = writeln!(s, "c_s={}", self.slack.c_s);
        let _ = writeln!(s, "kappa={}", self.slack.kappa);
        let _ = writeln!(s, "exponent_slack={}", self.exponent_slack);
        let _ = writeln!(s, "xi_multiplier={}", self.xi_multiplier);
        let _ = writeln!(s, "i2_multiplier={}", self.i2_multiplier);
        let _ = writeln!(s, "samples_per_cycle={}", self.samples_per_cycle);
        let _ = writeln!(s, "gauss_order={}", self.gauss_order);
        let _ = writeln!(s, "bilinear_rel_tol={}", self.bilinear_rel_tol);
        let _ = writeln!(s, "concentration_constant={}", self.concentration_constant);
        let _ = writeln!(s, "witness_samples={}", self.witness_samples);
        let kind = serde_kind(self.kind);
        let _ = writeln!(s, "kind={kind}");
        let _ = writeln!(s, "sigmas={}", list(&self.sigmas.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        let _ = writeln!(s, "ladder={}", list(&self.ladder.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        let _ = writeln!(s, "seeds={}", list(&self.seeds.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        let _ = writeln!(s, "output_dir={}", self.output_dir.display());
        let _ = writeln!(s, "threads={}", self.threads);
        s
    }
}

fn serde_kind(kind: GeneratorKind) -> &'static str {
    match kind {
        GeneratorKind::Cantor => "cantor",
        GeneratorKind::RandomTree => "random_tree",
        GeneratorKind::ArithmeticProgression => "arithmetic_progression",
        GeneratorKind::GeometricProgression => "geometric_progression",
        GeneratorKind::Interval => "interval",
    }
}

fn parse_list<T: std::str::FromStr>(text: &str) -> std::result::Result<Vec<T>, ()> {
    text.split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| ()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let err = RunConfig::parse("c_s=8\n\n# note\nwat=1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                message: "unknown key `wat`".into()
            }
        );
    }

    #[test]
    fn budgets_must_be_positive() {
        assert!(RunConfig::parse("xi_multiplier=0").is_err());
        assert!(RunConfig::parse("c_s=-1").is_err());
        assert!(RunConfig::parse("seeds=").is_err());
        let cfg = RunConfig::parse("sigmas=0.6, 0.7\nladder=256,512\nkappa=2").unwrap();
        assert_eq!(cfg.sigmas, vec![0.6, 0.7]);
        assert_eq!(cfg.ladder, vec![256, 512]);
        assert_eq!(cfg.slack.kappa, 2.0);
    }

    #[test]
    fn lambda_default() {
        let s = GridScale::new(1024).unwrap();
        assert_eq!(Slack::default().lambda(s), 16.0 * 1000.0);
    }
}
