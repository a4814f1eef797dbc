use std::path::{Path, PathBuf};

use lctb_core::boehmian::DEFAULT_DEPTH;
use lctb_core::delta::FamilyKind;
use lctb_core::verify::TestBattery;
use lctb_core::{make_params, Grid, LctParams};
use serde::Deserialize;

use crate::error::CliError;

/// `start:step:count`, or the same three fields as an object.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridSpec(pub Grid);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGrid {
    Text(String),
    Fields { start: f64, step: f64, count: usize },
}

impl TryFrom<RawGrid> for GridSpec {
    type Error = String;

    fn try_from(raw: RawGrid) -> Result<Self, String> {
        match raw {
            RawGrid::Text(s) => parse_grid(&s),
            RawGrid::Fields { start, step, count } => Grid::new(start, step, count).map(GridSpec).map_err(|e| e.to_string()),
        }
    }
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, step, count] = parts.as_slice() else {
        return Err(format!("grid must be start:step:count, got '{s}'"));
    };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number '{x}' in grid '{s}'"));
    let count = count.trim().parse::<usize>().map_err(|_| format!("bad count '{count}' in grid '{s}'"))?;
    Grid::new(num(start)?, num(step)?, count).map(GridSpec).map_err(|e| e.to_string())
}

pub fn parse_params(s: &str) -> Result<LctParams, String> {
    let v = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number '{x}' in parameters '{s}'")))
        .collect::<Result<Vec<_>, _>>()?;
    let [a, b, c, d] = v.as_slice() else {
        return Err(format!("parameters must be a,b,c,d, got '{s}'"));
    };
    make_params(*a, *b, *c, *d).map_err(|e| e.to_string())
}

/// Run configuration read from `--config`; command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: Option<LctParams>,
    /// Sampling grid for generated signals.
    pub tgrid: Option<GridSpec>,
    /// Output grid for transforms.
    pub ugrid: Option<GridSpec>,
    pub family: Option<String>,
    pub depth: Option<usize>,
    /// Quotient compatibility tolerance.
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub battery: Option<TestBattery>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let cfg: Self =
            serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(f) = &self.family {
            FamilyKind::parse(f)?;
        }
        if let Some(d) = self.depth {
            if d < 2 {
                return Err(CliError::input(format!("depth must be at least 2, got {d}")));
            }
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::input(format!("tolerance must be positive, got {t}")));
            }
        }
        if let Some(b) = &self.battery {
            b.validate()?;
        }
        Ok(())
    }

    pub fn family_or(&self, flag: Option<&str>, default: FamilyKind) -> Result<FamilyKind, CliError> {
        match flag.or(self.family.as_deref()) {
            Some(name) => Ok(FamilyKind::parse(name)?),
            None => Ok(default),
        }
    }

    pub fn depth_or(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let d = flag.or(self.depth).unwrap_or(DEFAULT_DEPTH);
        if d < 2 {
            return Err(CliError::input(format!("depth must be at least 2, got {d}")));
        }
        Ok(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flags() {
        assert_eq!(parse_params("2,1,3,2").unwrap().as_array(), [2.0, 1.0, 3.0, 2.0]);
        assert!(parse_params("1,1,1,1").is_err());
        assert!(parse_params("1,2,3").is_err());
        let g = parse_grid("-8:0.5:33").unwrap().0;
        assert_eq!((g.start, g.step, g.count), (-8.0, 0.5, 33));
        assert!(parse_grid("0:0:10").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn loads_json() {
        let text = r#"{"params": [0, 1, -1, 0], "ugrid": "-6:0.05:241", "tgrid": {"start": -1, "step": 0.5, "count": 5},
                       "family": "triangular", "depth": 3}"#;
        let cfg: RunConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.ugrid.unwrap().0.count, 241);
        assert_eq!(cfg.tgrid.unwrap().0.step, 0.5);
        assert!(serde_json::from_str::<RunConfig>(r#"{"params": [1, 1, 1, 1]}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"colour": 1}"#).is_err());
        let bad: RunConfig = serde_json::from_str(r#"{"family": "nope"}"#).unwrap();
        assert!(bad.validate().is_err());
    }
}
