//! Plane-angle geometry and the polar finite-difference grid.
//!
//! A plane angle `K = {r > 0, b_1 < φ < b_{R+1}}` is cut by equally spaced
//! rays `γ_q = {φ = b_q}` into `R` sectors `K_t = {b_t < φ < b_{t+1}}` of
//! common opening `d`. The grid discretizes a truncated piece
//! `r_min ≤ r ≤ r_max` of `K` with a uniform mesh in `(r, φ)`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on the equal-spacing condition of the rays.
pub const SPACING_TOL: f64 = 1e-12;

/// Rays `b_1 < … < b_{R+1}` with equal gaps `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleGeometry {
    angles: Vec<f64>,
    d: f64,
}

impl AngleGeometry {
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.len() < 2 {
            return Err(Error::TooFewAngles(angles.len()));
        }
        for &b in angles {
            if !(b > 0.0 && b < TAU) {
                return Err(Error::OutOfRange(b));
            }
        }
        let gaps: Vec<f64> = angles.windows(2).map(|w| w[1] - w[0]).collect();
        if let Some(&g) = gaps.iter().find(|&&g| g <= 0.0) {
            return Err(Error::NonUniformSpacing { expected: gaps[0], found: g });
        }
        let d = gaps.iter().sum::<f64>() / gaps.len() as f64;
        for &g in &gaps {
            if (g - d).abs() >= SPACING_TOL {
                return Err(Error::NonUniformSpacing { expected: d, found: g });
            }
        }
        Ok(Self { angles: angles.to_vec(), d })
    }

    /// Three rays `b_1, b_1 + d, b_1 + 2d` bounding two sectors.
    pub fn two_sector(b1: f64, b3: f64) -> Result<Self> {
        Self::new(&[b1, 0.5 * (b1 + b3), b3])
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Number of sectors `R`.
    pub fn sectors(&self) -> usize {
        self.angles.len() - 1
    }

    pub fn spacing(&self) -> f64 {
        self.d
    }

    pub fn first(&self) -> f64 {
        self.angles[0]
    }

    pub fn last(&self) -> f64 {
        self.angles[self.angles.len() - 1]
    }

    /// Total opening `b_{R+1} - b_1`.
    pub fn opening(&self) -> f64 {
        self.last() - self.first()
    }
}

/// Uniform polar mesh on `[r_min, r_max] × [b_1, b_{R+1}]`.
///
/// Nodes are `(i, j)` with `0 ≤ i ≤ n_r` and `0 ≤ j ≤ n_phi`. Every sector
/// spans exactly `n_phi / R` angular intervals, so an angular shift by `p·d`
/// is a shift by `p·n_phi/R` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorGrid {
    geometry: AngleGeometry,
    r_min: f64,
    r_max: f64,
    n_r: usize,
    n_phi: usize,
}

impl SectorGrid {
    pub fn new(geometry: AngleGeometry, r_min: f64, r_max: f64, n_r: usize, n_phi: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidRadii { r_min, r_max });
        }
        let sectors = geometry.sectors();
        if n_r < 3 || n_phi < 2 * sectors || n_phi % sectors != 0 {
            return Err(Error::IncompatibleGrid(format!(
                "n_r = {n_r}, n_phi = {n_phi} with R = {sectors} (need n_r >= 3, n_phi >= 2R, R | n_phi)"
            )));
        }
        Ok(Self { geometry, r_min, r_max, n_r, n_phi })
    }

    pub fn geometry(&self) -> &AngleGeometry {
        &self.geometry
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn dr(&self) -> f64 {
        (self.r_max - self.r_min) / self.n_r as f64
    }

    pub fn dphi(&self) -> f64 {
        self.geometry.opening() / self.n_phi as f64
    }

    /// Angular intervals per sector; the column shift that realizes a shift by `d`.
    pub fn columns_per_sector(&self) -> usize {
        self.n_phi / self.geometry.sectors()
    }

    pub fn rows(&self) -> usize {
        self.n_r + 1
    }

    pub fn cols(&self) -> usize {
        self.n_phi + 1
    }

    pub fn node_count(&self) -> usize {
        self.rows() * self.cols()
    }

    /// Flat node index, radial-major.
    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.cols() + j
    }

    #[inline]
    pub fn radius(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.dr()
    }

    #[inline]
    pub fn angle(&self, j: usize) -> f64 {
        self.geometry.first() + j as f64 * self.dphi()
    }

    pub fn node_coordinates(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        if i > self.n_r || j > self.n_phi {
            return Err(Error::IndexOutOfBounds { i, j, n_r: self.n_r, n_phi: self.n_phi });
        }
        Ok((self.radius(i), self.angle(j)))
    }

    /// True for nodes on the truncation arcs or on the outer rays `γ_1`, `γ_{R+1}`.
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || i == self.n_r || j == 0 || j == self.n_phi
    }
}

/// Complex nodal values on a [`SectorGrid`], stored radial-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: SectorGrid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn zeros(grid: &SectorGrid) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); grid.node_count()], grid: grid.clone() }
    }

    pub fn from_values(grid: &SectorGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::ShapeMismatch { expected: grid.node_count(), found: values.len() });
        }
        Ok(Self { grid: grid.clone(), values })
    }

    /// Samples `f(r, φ)` at every node.
    pub fn from_fn(grid: &SectorGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let mut values = Vec::with_capacity(grid.node_count());
        for i in 0..grid.rows() {
            let r = grid.radius(i);
            for j in 0..grid.cols() {
                values.push(f(r, grid.angle(j)));
            }
        }
        Self { grid: grid.clone(), values }
    }

    pub fn from_real_fn(grid: &SectorGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, |r, phi| Complex64::new(f(r, phi), 0.0))
    }

    pub fn grid(&self) -> &SectorGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let k = self.grid.index(i, j);
        self.values[k] = v;
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|v| v * c).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete `L_2(K)` norm with nodal weights `r_i Δr Δφ`.
    pub fn l2_norm(&self) -> f64 {
        let g = &self.grid;
        let w = g.dr() * g.dphi();
        let mut s = 0.0;
        for i in 0..g.rows() {
            let r = g.radius(i);
            for j in 0..g.cols() {
                s += r * w * self.get(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrid("grid functions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrid("grid functions live on different grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }
}
