use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hermite::ReprKind;

/// How test levels are given.
#[derive(Clone, Debug, PartialEq)]
pub enum RhoSpec {
    /// Fractions of the critical level of the target component, in `(0, 1)`.
    Fraction(Vec<f64>),
    Absolute(Vec<f64>),
}

impl RhoSpec {
    pub fn values(&self) -> &[f64] {
        match self {
            RhoSpec::Fraction(v) | RhoSpec::Absolute(v) => v,
        }
    }
}

/// Where the representation coefficients come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffMode {
    /// Exact rational computation, one rounding at the end.
    Exact,
    /// The same algorithms run in binary64 throughout.
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub examples: Vec<u32>,
    pub n: Vec<usize>,
    pub rho: RhoSpec,
    pub nu: Vec<f64>,
    pub mu: Vec<f64>,
    pub k_phi: usize,
    pub seed: u64,
    pub reprs: Vec<ReprKind>,
    pub coeff_mode: CoeffMode,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            examples: vec![1],
            n: (4..=24).step_by(4).collect(),
            rho: RhoSpec::Fraction(vec![0.9]),
            nu: vec![0.0],
            mu: vec![0.0],
            k_phi: 10,
            seed: 0,
            reprs: ReprKind::ALL.to_vec(),
            coeff_mode: CoeffMode::Exact,
        }
    }
}

fn bad(key: &str, value: &str) -> Error {
    Error::Parse { what: "config value", input: format!("{key}={value}") }
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| bad(key, value))
}

/// `a:b:c` means `a, a+b, …` up to `c`; anything else is a comma list.
pub fn parse_usize_list(key: &str, value: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [start, step, end] => {
            let (start, step, end): (usize, usize, usize) =
                (parse_scalar(key, start)?, parse_scalar(key, step)?, parse_scalar(key, end)?);
            if step == 0 || end < start {
                return Err(bad(key, value));
            }
            Ok((start..=end).step_by(step).collect())
        }
        [_] => value.split(',').map(|v| parse_scalar(key, v)).collect(),
        _ => Err(bad(key, value)),
    }
}

pub fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse_scalar(key, v)).collect()
}

impl ExperimentConfig {
    /// Flat `key = value` text; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let mut rho_frac = None;
        let mut rho_abs = None;
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { what: "config line", input: line.to_string() })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "example" => {
                    cfg.examples = parse_usize_list(key, value)?.into_iter().map(|v| v as u32).collect();
                }
                "n" => cfg.n = parse_usize_list(key, value)?,
                "rho_frac" => rho_frac = Some(parse_f64_list(key, value)?),
                "rho_abs" => rho_abs = Some(parse_f64_list(key, value)?),
                "nu" => cfg.nu = parse_f64_list(key, value)?,
                "mu" => cfg.mu = parse_f64_list(key, value)?,
                "kphi" => cfg.k_phi = parse_scalar(key, value)?,
                "seed" => cfg.seed = parse_scalar(key, value)?,
                "reprs" => {
                    cfg.reprs = value.split(',').map(ReprKind::from_tag).collect::<Result<_>>()?;
                }
                "coeff_mode" => {
                    cfg.coeff_mode = match value {
                        "exact" => CoeffMode::Exact,
                        "float" => CoeffMode::Float,
                        _ => return Err(bad(key, value)),
                    }
                }
                _ => return Err(Error::Parse { what: "config key", input: key.to_string() }),
            }
        }
        cfg.rho = match (rho_abs, rho_frac) {
            (Some(abs), _) => RhoSpec::Absolute(abs),
            (None, Some(frac)) => RhoSpec::Fraction(frac),
            (None, None) => cfg.rho,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |name: &str| Error::InvalidArgument(format!("config list `{name}` is empty"));
        if self.examples.is_empty() {
            return Err(empty("example"));
        }
        if self.n.is_empty() {
            return Err(empty("n"));
        }
        if self.rho.values().is_empty() {
            return Err(empty("rho"));
        }
        if self.nu.is_empty() {
            return Err(empty("nu"));
        }
        if self.mu.is_empty() {
            return Err(empty("mu"));
        }
        if self.reprs.is_empty() {
            return Err(empty("reprs"));
        }
        if self.k_phi == 0 {
            return Err(Error::InvalidArgument("kphi must be at least 1".into()));
        }
        if let Some(&e) = self.examples.iter().find(|&&e| crate::presets::by_number(e).is_none()) {
            return Err(Error::InvalidArgument(format!("unknown example {e}")));
        }
        match &self.rho {
            RhoSpec::Fraction(v) if v.iter().any(|&f| !(f > 0.0 && f < 1.0)) => {
                return Err(Error::InvalidArgument("rho_frac values must lie in (0, 1)".into()));
            }
            RhoSpec::Absolute(v) if v.iter().any(|&r| !(r > 0.0 && r.is_finite())) => {
                return Err(Error::InvalidArgument("rho_abs values must be positive".into()));
            }
            _ => {}
        }
        for (name, list) in [("nu", &self.nu), ("mu", &self.mu)] {
            if list.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
                return Err(Error::InvalidArgument(format!("{name} values must be finite and non-negative")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        assert_eq!(parse_usize_list("n", "4:4:24").unwrap(), vec![4, 8, 12, 16, 20, 24]);
        assert_eq!(parse_usize_list("n", "4:8:100").unwrap().last(), Some(&100));
        assert_eq!(parse_usize_list("n", "3, 5").unwrap(), vec![3, 5]);
        assert!(parse_usize_list("n", "4:0:8").is_err());
    }

    #[test]
    fn full_config() {
        let cfg = ExperimentConfig::parse(
            "# noise sweep\nexample = 1,2\nn = 4:4:24\nrho_frac = 0.02\nnu = 1e-16, 1e-8\nmu = 0\nkphi = 10\nseed = 7\nreprs = M,S\ncoeff_mode = float\n",
        )
        .unwrap();
        assert_eq!(cfg.examples, vec![1, 2]);
        assert_eq!(cfg.rho, RhoSpec::Fraction(vec![0.02]));
        assert_eq!(cfg.nu, vec![1e-16, 1e-8]);
        assert_eq!(cfg.reprs, vec![ReprKind::Multicentric, ReprKind::Special]);
        assert_eq!(cfg.coeff_mode, CoeffMode::Float);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn absolute_level_overrides_fraction() {
        let cfg = ExperimentConfig::parse("rho_frac = 0.5\nrho_abs = 0.2309").unwrap();
        assert_eq!(cfg.rho, RhoSpec::Absolute(vec![0.2309]));
    }

    #[test]
    fn invalid_configs() {
        assert!(ExperimentConfig::parse("rho_frac = 1.2").is_err());
        assert!(ExperimentConfig::parse("nu = ").is_err());
        assert!(ExperimentConfig::parse("colour = red").is_err());
        assert!(ExperimentConfig::parse("example = 9").is_err());
        assert!(ExperimentConfig::parse("no equals sign").is_err());
    }
}
