//! JSON configuration schemas and argument parsing helpers. Unknown keys
//! are rejected everywhere; tolerances must be positive.

use epkit_core::complex2::C64;
use epkit_core::model::Hamiltonian2;
use epkit_core::rigidity::{Axis, HField, ScanSpec};
use serde::Deserialize;

use crate::CliError;

/// Hamiltonian input: `{"eps1": [re, im], "eps2": [re, im], "omega": [re, im]}`.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub eps1: [f64; 2],
    pub eps2: [f64; 2],
    pub omega: [f64; 2],
}

impl HamiltonianConfig {
    pub fn build(&self) -> Hamiltonian2 {
        Hamiltonian2::new(
            C64::new(self.eps1[0], self.eps1[1]),
            C64::new(self.eps2[0], self.eps2[1]),
            C64::new(self.omega[0], self.omega[1]),
        )
    }
}

/// One scan axis: which Hamiltonian field it drives and its range.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub field: String,
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl AxisConfig {
    fn build(&self) -> Result<Axis, CliError> {
        let field = match self.field.as_str() {
            "eps1_re" => HField::Eps1Re,
            "eps1_im" => HField::Eps1Im,
            "eps2_re" => HField::Eps2Re,
            "eps2_im" => HField::Eps2Im,
            "omega_re" => HField::OmegaRe,
            "omega_im" => HField::OmegaIm,
            other => {
                return Err(CliError::validation(format!(
                    "unknown axis field '{other}' (expected eps1_re, eps1_im, eps2_re, eps2_im, omega_re or omega_im)"
                )))
            }
        };
        if self.n == 0 {
            return Err(CliError::validation("axis needs n >= 1"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::validation("axis bounds must be finite"));
        }
        Ok(Axis {
            field,
            start: self.start,
            stop: self.stop,
            n: self.n,
        })
    }
}

/// Which rigidity column(s) the scan CSV reports.
#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BranchColumn {
    #[default]
    Plus,
    Minus,
    Both,
}

/// Optional EP-asymptote verification attached to a scan.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoteConfig {
    pub z_c: [f64; 2],
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

/// `scan.json`: base Hamiltonian plus two axis bindings.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub hamiltonian: HamiltonianConfig,
    pub x: AxisConfig,
    pub y: AxisConfig,
    #[serde(default)]
    pub branch: BranchColumn,
    #[serde(default)]
    pub ep_tol: Option<f64>,
    #[serde(default)]
    pub asymptote_check: Option<AsymptoteConfig>,
}

impl ScanConfig {
    pub fn spec(&self, default_ep_tol: f64) -> Result<ScanSpec, CliError> {
        let ep_tol = self.ep_tol.unwrap_or(default_ep_tol);
        if !(ep_tol > 0.0) {
            return Err(CliError::validation("ep_tol must be positive"));
        }
        Ok(ScanSpec {
            base: self.hamiltonian.build(),
            x: self.x.build()?,
            y: self.y.build()?,
            ep_tol,
        })
    }
}

pub fn load_hamiltonian(path: &std::path::Path) -> Result<Hamiltonian2, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let config: HamiltonianConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("invalid Hamiltonian config: {e}")))?;
    Ok(config.build())
}

pub fn load_scan(path: &std::path::Path) -> Result<ScanConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("invalid scan config: {e}")))
}

/// Parses a complex scalar: `1.5`, `i`, `-i`, `2i`, `1+2i`, `3e-2-0.5i`.
pub fn parse_complex(text: &str) -> Result<C64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    // Split at the last +/- that is not a leading sign or an exponent sign.
    let bytes = s.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        let b = bytes[k] as char;
        if (b == '+' || b == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
            split = Some(k);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(k) if s.ends_with('i') || s.ends_with('I') => (&s[..k], &s[k..]),
        _ if s.ends_with('i') || s.ends_with('I') => ("", s.as_str()),
        _ => (s.as_str(), ""),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part
            .parse::<f64>()
            .map_err(|_| format!("invalid real part '{re_part}'"))?
    };
    let im = if im_part.is_empty() {
        0.0
    } else {
        let body = &im_part[..im_part.len() - 1];
        match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other
                .parse::<f64>()
                .map_err(|_| format!("invalid imaginary part '{im_part}'"))?,
        }
    };
    Ok(C64::new(re, im))
}

/// Parses a log-spaced grid literal `start:stop:n`.
pub fn parse_log_grid(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("expected start:stop:n".into());
    }
    let start: f64 = parts[0].parse().map_err(|_| "invalid start".to_string())?;
    let stop: f64 = parts[1].parse().map_err(|_| "invalid stop".to_string())?;
    let n: usize = parts[2].parse().map_err(|_| "invalid count".to_string())?;
    if !(start > 0.0) || !(stop > 0.0) {
        return Err("grid bounds must be positive".into());
    }
    if n < 2 {
        return Err("grid needs at least two points".into());
    }
    Ok(epkit_core::puiseux::log_grid(start, stop, n))
}

/// Parses a real range literal `a:b`.
pub fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err("expected min:max".into());
    }
    let a: f64 = parts[0].parse().map_err(|_| "invalid range start".to_string())?;
    let b: f64 = parts[1].parse().map_err(|_| "invalid range end".to_string())?;
    if !(a < b) {
        return Err("range start must be below range end".into());
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("2i").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("1+2i").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex("1e-2-0.5i").unwrap(), C64::new(0.01, -0.5));
        assert_eq!(parse_complex("-3e-4+1e2i").unwrap(), C64::new(-3e-4, 100.0));
        assert!(parse_complex("foo").is_err());
    }

    #[test]
    fn grid_literals() {
        let grid = parse_log_grid("1e-2:1e-8:4").unwrap();
        assert_eq!(grid.len(), 4);
        assert!((grid[0] - 1e-2).abs() < 1e-17);
        assert!((grid[3] - 1e-8).abs() < 1e-22);
        assert!(parse_log_grid("1:2").is_err());
        assert!(parse_log_grid("-1:2:3").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"eps1":[0,0],"eps2":[0,0],"omega":[1,0],"extra":1}"#;
        assert!(serde_json::from_str::<HamiltonianConfig>(bad).is_err());
        let good = r#"{"eps1":[2,0],"eps2":[0,0],"omega":[1,0]}"#;
        let cfg: HamiltonianConfig = serde_json::from_str(good).unwrap();
        assert_eq!(cfg.build().eps1, C64::new(2.0, 0.0));
    }
}
