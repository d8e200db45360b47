//! Resolved constant sets. Every record carries the full set so output
//! never depends on defaults hidden in code.

use std::fmt::Write as _;

use cutlab_core::forall::{DEFAULT_ENUM_CAP, DEFAULT_GAP_C, DEFAULT_NOISE_C2};
use cutlab_core::local::{EstimatorConfig, FinalRule};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct Constants {
    pub preset: String,
    /// Encoder weight headroom for the bit-packing gadget.
    pub c1: f64,
    /// Decoder noise scale for the distance-gap gadget.
    pub c2: f64,
    /// Distance-gap promise constant.
    pub c: f64,
    pub beta0: f64,
    pub c_sample: f64,
    pub c_final: f64,
    pub c_kappa: f64,
    pub kappa_flat: bool,
    pub accept_factor: f64,
    pub final_rule: String,
    pub enum_cap: u64,
    /// Estimator repetitions per reduction call (median wins).
    pub reps: u32,
}

impl Constants {
    pub fn desk() -> Self {
        Constants {
            preset: "desk".into(),
            c1: 2.0,
            c2: DEFAULT_NOISE_C2,
            c: DEFAULT_GAP_C,
            beta0: 0.35,
            c_sample: 0.3,
            c_final: 2.0,
            c_kappa: 8.0,
            kappa_flat: true,
            accept_factor: 0.4,
            final_rule: "clogn".into(),
            enum_cap: DEFAULT_ENUM_CAP,
            reps: 5,
        }
    }

    /// Constants as stated for the asymptotic analysis; mostly useful to
    /// demonstrate how vacuous they are at desk sizes.
    pub fn paper() -> Self {
        Constants {
            preset: "paper".into(),
            c1: 2.0,
            c2: DEFAULT_NOISE_C2,
            c: DEFAULT_GAP_C,
            beta0: 0.25,
            c_sample: 12.0,
            c_final: 2.0,
            c_kappa: 2000.0,
            kappa_flat: false,
            accept_factor: 0.5,
            final_rule: "clogn".into(),
            enum_cap: DEFAULT_ENUM_CAP,
            reps: 5,
        }
    }

    /// Apply `key=value` lines on top of the preset. Blank lines and
    /// `#` comments are skipped.
    pub fn apply_overrides(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("constants line {}: expected key=value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| {
                CliError::Usage(format!(
                    "constants line {}: {key} needs a {what}, got {value:?}",
                    lineno + 1
                ))
            };
            let float = |slot: &mut f64| -> Result<(), CliError> {
                *slot = value.parse().map_err(|_| bad("number"))?;
                Ok(())
            };
            match key {
                "c1" => float(&mut self.c1)?,
                "c2" => float(&mut self.c2)?,
                "c" => float(&mut self.c)?,
                "beta0" => float(&mut self.beta0)?,
                "c_sample" => float(&mut self.c_sample)?,
                "c_final" => float(&mut self.c_final)?,
                "c_kappa" => float(&mut self.c_kappa)?,
                "accept_factor" => float(&mut self.accept_factor)?,
                "kappa_flat" => self.kappa_flat = value.parse().map_err(|_| bad("bool"))?,
                "enum_cap" => self.enum_cap = value.parse().map_err(|_| bad("integer"))?,
                "reps" => self.reps = value.parse().map_err(|_| bad("integer"))?,
                "final_rule" => match value {
                    "clogn" | "kappa" => self.final_rule = value.into(),
                    _ => return Err(bad("rule (clogn or kappa)")),
                },
                other => {
                    return Err(CliError::Usage(format!(
                        "constants line {}: unknown key {other:?}",
                        lineno + 1
                    )))
                }
            }
        }
        self.preset = "custom".into();
        Ok(())
    }

    pub fn as_json(&self) -> Value {
        json!({
            "c1": self.c1,
            "c2": self.c2,
            "c": self.c,
            "beta0": self.beta0,
            "c_sample": self.c_sample,
            "c_final": self.c_final,
            "c_kappa": self.c_kappa,
            "kappa_flat": self.kappa_flat,
            "accept_factor": self.accept_factor,
            "final_rule": self.final_rule,
            "enum_cap": self.enum_cap,
            "reps": self.reps,
        })
    }

    pub fn estimator(&self, eps: f64, seed: u64) -> EstimatorConfig {
        EstimatorConfig {
            eps,
            beta0: self.beta0,
            c_sample: self.c_sample,
            c_final: self.c_final,
            c_kappa: self.c_kappa,
            kappa_flat: self.kappa_flat,
            final_rule: if self.final_rule == "kappa" {
                FinalRule::Kappa
            } else {
                FinalRule::CLogN
            },
            accept_factor: self.accept_factor,
            seed,
        }
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{} (c1={}, c2={}, c={})", self.preset, self.c1, self.c2, self.c);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides_replace_single_keys() {
        let mut c = Constants::desk();
        c.apply_overrides("c_sample = 1.5\n# comment\n\nfinal_rule=kappa").unwrap();
        assert_eq!(c.c_sample, 1.5);
        assert_eq!(c.final_rule, "kappa");
        assert_eq!(c.preset, "custom");
        assert_eq!(c.beta0, 0.35);
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let mut c = Constants::desk();
        assert!(matches!(c.apply_overrides("c9=1"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_overrides("c1"), Err(CliError::Usage(_))));
        assert!(matches!(c.apply_overrides("c1=x"), Err(CliError::Usage(_))));
    }
}
