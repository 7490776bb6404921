//! Problem files (TOML, or JSON by extension).

use std::path::{Path, PathBuf};

use nlangle_core::geometry::AngleGeometry;
use serde::Deserialize;

use crate::error::CliError;
use crate::expr::Expression;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A real given either as a number or as a constant expression such as `"5*pi/6"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Real {
    Number(f64),
    Expr(String),
}

impl Real {
    pub fn value(&self) -> Result<f64, CliError> {
        match self {
            Real::Number(x) => Ok(*x),
            Real::Expr(s) => Expression::constant(s).map_err(CliError::Spec),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub geometry: Option<Geometry>,
    pub pencil: Option<Pencil>,
    pub solver: Option<Solver>,
    pub boundary: Option<Boundary>,
    pub weights: Option<Weights>,
    pub output: Option<Output>,
    pub difference: Option<Difference>,
    pub green: Option<Green>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    pub angles: Vec<Real>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pencil {
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Solver {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_phi: usize,
    /// Expression in `r`, `phi`, or `"manufactured"`.
    pub rhs: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    pub g1: String,
    pub g3: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Weights {
    pub a: f64,
    pub l: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// Explicit coefficients `e_{-R+1}, …, e_{R-1}` for the `spectrum` command.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Difference {
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Green {
    pub chi12: Option<f64>,
    pub order: Option<usize>,
    pub radial_panels: Option<usize>,
    pub angular_panels: Option<usize>,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Spec(format!("cannot read spec file {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str, json: bool) -> Result<Self, String> {
        if json {
            serde_json::from_str(text).map_err(|e| e.to_string())
        } else {
            toml::from_str(text).map_err(|e| e.to_string())
        }
    }

    pub fn geometry(&self) -> Result<AngleGeometry, CliError> {
        let g = require(&self.geometry, "geometry")?;
        let angles = g.angles.iter().map(Real::value).collect::<Result<Vec<_>, _>>()?;
        let geom = if angles.len() == 2 {
            AngleGeometry::two_sector(angles[0], angles[1])
        } else {
            AngleGeometry::new(&angles)
        };
        Ok(geom?)
    }

    /// Geometry with exactly two sectors, `[b1, b3]` or `[b1, b2, b3]`.
    pub fn two_sector_geometry(&self) -> Result<AngleGeometry, CliError> {
        let g = self.geometry()?;
        if g.sectors() != 2 {
            return Err(CliError::Spec(format!("this command needs two sectors, [geometry] has {}", g.sectors())));
        }
        Ok(g)
    }

    pub fn pencil(&self) -> Result<&Pencil, CliError> {
        require(&self.pencil, "pencil")
    }

    pub fn solver(&self) -> Result<&Solver, CliError> {
        require(&self.solver, "solver")
    }

    pub fn boundary(&self) -> Result<&Boundary, CliError> {
        require(&self.boundary, "boundary")
    }

    pub fn weights(&self) -> Result<&Weights, CliError> {
        require(&self.weights, "weights")
    }
}

fn require<'a, T>(section: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    section.as_ref().ok_or_else(|| CliError::Spec(format!("missing [{name}] section")))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FULL: &str = r#"
[geometry]
angles = ["pi/6", "pi/2", "5*pi/6"]
[pencil]
alpha = 0.3
beta = -0.3
[solver]
r_min = 0.5
r_max = 1.5
n_r = 16
n_phi = 16
rhs = "manufactured"
[boundary]
g1 = "0"
g3 = "bump(r, 0.6, 1.4)"
[weights]
a = 2
l = 1
[output]
format = "json"
path = "out.csv"
"#;

    #[test]
    fn parses_every_section() {
        let s = SpecFile::parse(FULL, false).unwrap();
        let g = s.two_sector_geometry().unwrap();
        assert!((g.last() - 5.0 * std::f64::consts::PI / 6.0).abs() < 1e-15);
        assert_eq!(s.solver().unwrap().n_phi, 16);
        assert_eq!(s.weights().unwrap().a, 2.0);
        assert_eq!(s.output.unwrap().format, Some(Format::Json));
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = FULL.replace("beta = -0.3", "beta = -0.3\ngamma = 1");
        assert!(SpecFile::parse(&bad, false).is_err());
        assert!(SpecFile::parse("[mystery]\nx = 1\n", false).is_err());
    }

    #[test]
    fn reports_missing_sections() {
        let s = SpecFile::parse("[pencil]\nalpha = 0\nbeta = 0\n", false).unwrap();
        assert!(matches!(s.geometry(), Err(CliError::Spec(m)) if m.contains("geometry")));
    }

    #[test]
    fn reads_json() {
        let s = SpecFile::parse(r#"{"pencil": {"alpha": 1, "beta": 0.5}}"#, true).unwrap();
        assert_eq!(s.pencil().unwrap().beta, 0.5);
    }
}
