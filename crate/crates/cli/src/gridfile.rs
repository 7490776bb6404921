//! Reading `r,phi,re,im` grid files.

use std::path::Path;

use nlangle_core::geometry::{AngleGeometry, GridFunction, SectorGrid};
use num_complex::Complex64;

use crate::error::CliError;

/// Nodes must lie on a uniform tensor grid whose angular ends match `geometry`.
pub fn read_grid(path: &Path, geometry: &AngleGeometry) -> Result<GridFunction, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Spec(format!("cannot read grid file {}: {e}", path.display())))?;
    parse_grid(&text, geometry).map_err(|e| CliError::Spec(format!("{}: {e}", path.display())))
}

pub fn parse_grid(text: &str, geometry: &AngleGeometry) -> Result<GridFunction, String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next().map(str::trim) {
        Some("r,phi,re,im") => {}
        other => return Err(format!("expected header `r,phi,re,im`, found {other:?}")),
    }
    let mut nodes = Vec::new();
    for (k, line) in lines.enumerate() {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("row {}: {e}", k + 1))?;
        if fields.len() != 4 {
            return Err(format!("row {}: expected 4 fields, found {}", k + 1, fields.len()));
        }
        nodes.push(fields);
    }
    let rs = distinct(nodes.iter().map(|n| n[0]));
    let phis = distinct(nodes.iter().map(|n| n[1]));
    if rs.len() < 2 || phis.len() < 2 {
        return Err("need at least two radii and two angles".into());
    }
    if rs.len() * phis.len() != nodes.len() {
        return Err(format!("{} rows do not form a {} x {} grid", nodes.len(), rs.len(), phis.len()));
    }
    let tol = 1e-9;
    if (phis[0] - geometry.first()).abs() > tol || (phis[phis.len() - 1] - geometry.last()).abs() > tol {
        return Err(format!(
            "angles span [{}, {}] but the geometry spans [{}, {}]",
            phis[0],
            phis[phis.len() - 1],
            geometry.first(),
            geometry.last()
        ));
    }
    let grid = SectorGrid::new(geometry.clone(), rs[0], rs[rs.len() - 1], rs.len() - 1, phis.len() - 1)
        .map_err(|e| e.to_string())?;
    let mut values = vec![Complex64::new(f64::NAN, f64::NAN); grid.node_count()];
    for n in &nodes {
        let i = locate(n[0], grid.r_min(), grid.dr(), grid.rows())?;
        let j = locate(n[1], geometry.first(), grid.dphi(), grid.cols())?;
        let slot = &mut values[grid.index(i, j)];
        if !slot.re.is_nan() {
            return Err(format!("node (r = {}, phi = {}) appears twice", n[0], n[1]));
        }
        *slot = Complex64::new(n[2], n[3]);
    }
    GridFunction::from_values(&grid, values).map_err(|e| e.to_string())
}

fn distinct(xs: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = xs.collect();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    v
}

fn locate(x: f64, start: f64, step: f64, count: usize) -> Result<usize, String> {
    let t = (x - start) / step;
    let k = t.round();
    if (t - k).abs() > 1e-6 || k < 0.0 || k as usize >= count {
        return Err(format!("coordinate {x} is not on a uniform grid"));
    }
    Ok(k as usize)
}
