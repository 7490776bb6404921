//! Finite differences for `-Δ(R_K w) + R_K w = f` on a truncated two-sector
//! angle, and for the nonlocal Poisson problem
//!
//! ```text
//! -Δu + u = f                  in K,
//! u|γ_1 + α u(r, φ + d)|γ_1 = g_1,
//! u|γ_3 + β u(r, φ - d)|γ_3 = g_3,
//! ```
//!
//! solved as `u = u_g + R_K w` with a cutoff lifting `u_g` of the data.
//!
//! Unknowns live on every node of the [`SectorGrid`]. Rows at boundary nodes
//! (both truncation arcs and the rays `γ_1`, `γ_3`) are identity rows
//! forcing `w = 0`; an interior row is the polar five-point stencil of
//! `-Δ + 1` composed with the column shift by `n_phi / 2`.

mod banded;
pub mod manufactured;

use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::difference_ops::DifferenceOperator;
use crate::error::{Error, Result};
use crate::geometry::{AngleGeometry, GridFunction, SectorGrid};
pub use banded::{BandLu, SparseMatrix};

/// Node count up to which [`discrete_coercivity`] uses a dense eigensolve.
pub const DENSE_EIGEN_LIMIT: usize = 4096;

/// Relative residual a direct solve must reach.
pub const RESIDUAL_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub type ScalarField = Arc<dyn Fn(f64, f64) -> Complex64 + Send + Sync>;
pub type RadialData = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Right-hand side given analytically or by nodal values.
#[derive(Clone)]
pub enum Rhs {
    Function(ScalarField),
    Grid(GridFunction),
}

impl Rhs {
    pub fn zero() -> Self {
        Rhs::Function(Arc::new(|_, _| ZERO))
    }

    pub fn real(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Rhs::Function(Arc::new(move |r, phi| Complex64::new(f(r, phi), 0.0)))
    }

    /// Nodal samples on `grid`.
    pub fn sample(&self, grid: &SectorGrid) -> Result<GridFunction> {
        match self {
            Rhs::Function(f) => Ok(GridFunction::from_fn(grid, |r, phi| f(r, phi))),
            Rhs::Grid(g) if g.grid() == grid => Ok(g.clone()),
            Rhs::Grid(_) => Err(Error::IncompatibleGrid("right-hand side lives on a different grid".into())),
        }
    }
}

impl fmt::Debug for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs::Function(_) => f.write_str("Rhs::Function(..)"),
            Rhs::Grid(g) => write!(f, "Rhs::Grid({} nodes)", g.values().len()),
        }
    }
}

pub fn real_data(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RadialData {
    Arc::new(move |r| Complex64::new(g(r), 0.0))
}

fn check_two_sectors(geometry: &AngleGeometry) -> Result<()> {
    if geometry.sectors() != 2 {
        return Err(Error::InvalidParameter(format!("the solver needs 3 rays, geometry has {}", geometry.sectors() + 1)));
    }
    Ok(())
}

fn check_radii(r_min: f64, r_max: f64) -> Result<()> {
    if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
        return Err(Error::InvalidRadii { r_min, r_max });
    }
    Ok(())
}

fn check_grid(geometry: &AngleGeometry, r_min: f64, r_max: f64, grid: &SectorGrid) -> Result<()> {
    let g = grid.geometry();
    let same_rays = g.sectors() == geometry.sectors()
        && g.angles().iter().zip(geometry.angles()).all(|(a, b)| (a - b).abs() <= crate::geometry::SPACING_TOL);
    if !same_rays {
        return Err(Error::IncompatibleGrid("grid rays differ from the problem rays".into()));
    }
    let tol = 1e-12 * r_max;
    if (grid.r_min() - r_min).abs() > tol || (grid.r_max() - r_max).abs() > tol {
        return Err(Error::IncompatibleGrid(format!(
            "grid spans r in [{}, {}], problem is truncated to [{r_min}, {r_max}]",
            grid.r_min(),
            grid.r_max()
        )));
    }
    if grid.n_phi() % 2 != 0 {
        return Err(Error::IncompatibleGrid(format!("n_phi = {} must be even", grid.n_phi())));
    }
    Ok(())
}

/// `-Δ(R_K w) + R_K w = f`, `w = 0` on `γ_1`, `γ_3` and on the truncation arcs.
#[derive(Debug, Clone)]
pub struct DDProblem {
    pub alpha: f64,
    pub beta: f64,
    pub geometry: AngleGeometry,
    pub rhs: Rhs,
    pub r_min: f64,
    pub r_max: f64,
}

impl DDProblem {
    pub fn new(alpha: f64, beta: f64, geometry: AngleGeometry, rhs: Rhs, r_min: f64, r_max: f64) -> Result<Self> {
        check_two_sectors(&geometry)?;
        check_radii(r_min, r_max)?;
        Ok(Self { alpha, beta, geometry, rhs, r_min, r_max })
    }

    /// Grid over the problem's truncated sector.
    pub fn grid(&self, n_r: usize, n_phi: usize) -> Result<SectorGrid> {
        SectorGrid::new(self.geometry.clone(), self.r_min, self.r_max, n_r, n_phi)
    }

    fn operator(&self) -> Result<DifferenceOperator> {
        DifferenceOperator::nonlocal_pair(self.geometry.clone(), self.alpha, self.beta)
    }
}

/// `-Δu + u = f` with the nonlocal conditions on `γ_1`, `γ_3`.
#[derive(Debug, Clone)]
pub struct NonlocalPoissonProblem {
    pub alpha: f64,
    pub beta: f64,
    pub geometry: AngleGeometry,
    pub rhs: Rhs,
    pub g1: RadialDataBox,
    pub g3: RadialDataBox,
    pub r_min: f64,
    pub r_max: f64,
}

/// Boundary data with a `Debug` impl.
#[derive(Clone)]
pub struct RadialDataBox(pub RadialData);

impl RadialDataBox {
    pub fn zero() -> Self {
        RadialDataBox(Arc::new(|_| ZERO))
    }

    pub fn real(g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialDataBox(real_data(g))
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        (self.0)(r)
    }
}

impl fmt::Debug for RadialDataBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("RadialData(..)")
    }
}

impl NonlocalPoissonProblem {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        geometry: AngleGeometry,
        rhs: Rhs,
        g1: RadialDataBox,
        g3: RadialDataBox,
        r_min: f64,
        r_max: f64,
    ) -> Result<Self> {
        check_two_sectors(&geometry)?;
        check_radii(r_min, r_max)?;
        Ok(Self { alpha, beta, geometry, rhs, g1, g3, r_min, r_max })
    }

    pub fn grid(&self, n_r: usize, n_phi: usize) -> Result<SectorGrid> {
        SectorGrid::new(self.geometry.clone(), self.r_min, self.r_max, n_r, n_phi)
    }

    pub fn in_solvable_regime(&self) -> bool {
        (self.alpha + self.beta).abs() < 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverStats {
    pub unknowns: usize,
    pub nonzeros: usize,
    /// Bandwidths `(lower, upper)` of the LU factors.
    pub factor_bandwidths: (usize, usize),
    pub refinement_steps: usize,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub solution: GridFunction,
    /// Discrete `L_2` norm of the equation residual.
    pub equation_residual: f64,
    /// Largest boundary-condition residual over the boundary nodes.
    pub boundary_residual: f64,
    /// Largest boundary-condition residual of the piecewise-linear
    /// interpolant at the radial midpoints.
    pub interpolated_boundary_residual: f64,
    /// `w` of the substitution `u = u_g + R_K w`, for the nonlocal solve.
    pub auxiliary: Option<GridFunction>,
    /// Set when `|α + β| ≥ 2`.
    pub regime_warning: bool,
    pub stats: SolverStats,
}

/// Assembled `A·M` with identity rows on constrained nodes.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub grid: SectorGrid,
    pub matrix: SparseMatrix,
    pub rhs: Vec<Complex64>,
}

/// Five-point polar stencil of `-Δ + 1` at an interior node.
fn stencil(grid: &SectorGrid, i: usize, j: usize) -> [(usize, usize, f64); 5] {
    let r = grid.radius(i);
    let h = grid.dr();
    let k = grid.dphi();
    let ang = 1.0 / (r * r * k * k);
    [
        (i, j, 2.0 / (h * h) + 2.0 * ang + 1.0),
        (i - 1, j, -(1.0 / (h * h) - 1.0 / (2.0 * r * h))),
        (i + 1, j, -(1.0 / (h * h) + 1.0 / (2.0 * r * h))),
        (i, j - 1, -ang),
        (i, j + 1, -ang),
    ]
}

/// Discrete `(-Δ + 1) u` at interior nodes, zero on the boundary.
pub fn apply_helmholtz(u: &GridFunction) -> GridFunction {
    let grid = u.grid();
    let mut out = GridFunction::zeros(grid);
    for i in 1..grid.n_r() {
        for j in 1..grid.n_phi() {
            let v = stencil(grid, i, j).iter().map(|&(a, b, c)| u.get(a, b) * c).sum();
            out.set(i, j, v);
        }
    }
    out
}

fn assemble_matrix(op: &DifferenceOperator, grid: &SectorGrid) -> SparseMatrix {
    let n = grid.node_count();
    let m = grid.columns_per_sector();
    let mut rows = Vec::with_capacity(n);
    for i in 0..grid.rows() {
        for j in 0..grid.cols() {
            if grid.is_boundary(i, j) {
                rows.push(vec![(grid.index(i, j), 1.0)]);
                continue;
            }
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(10);
            for (ii, jj, a) in stencil(grid, i, j) {
                for (jc, e) in op.column_stencil(jj, m, grid.n_phi()) {
                    if grid.is_boundary(ii, jc) {
                        continue;
                    }
                    let col = grid.index(ii, jc);
                    match row.iter_mut().find(|(c, _)| *c == col) {
                        Some(entry) => entry.1 += a * e,
                        None => row.push((col, a * e)),
                    }
                }
            }
            row.retain(|&(_, v)| v != 0.0);
            rows.push(row);
        }
    }
    SparseMatrix::from_rows(n, rows)
}

fn interior_rhs(grid: &SectorGrid, f: &GridFunction) -> Vec<Complex64> {
    let mut b = f.values().to_vec();
    for i in 0..grid.rows() {
        for j in 0..grid.cols() {
            if grid.is_boundary(i, j) {
                b[grid.index(i, j)] = ZERO;
            }
        }
    }
    b
}

pub fn assemble_dd_system(p: &DDProblem, grid: &SectorGrid) -> Result<LinearSystem> {
    check_grid(&p.geometry, p.r_min, p.r_max, grid)?;
    let op = p.operator()?;
    let f = p.rhs.sample(grid)?;
    Ok(LinearSystem { grid: grid.clone(), matrix: assemble_matrix(&op, grid), rhs: interior_rhs(grid, &f) })
}

/// Weighted discrete `L_2` norm of a nodal vector.
fn weighted_norm(grid: &SectorGrid, v: &[Complex64]) -> f64 {
    let w = grid.dr() * grid.dphi();
    let mut s = 0.0;
    for i in 0..grid.rows() {
        let r = grid.radius(i);
        for j in 0..grid.cols() {
            s += r * w * v[grid.index(i, j)].norm_sqr();
        }
    }
    s.sqrt()
}

fn residual(sys: &LinearSystem, x: &[Complex64]) -> Vec<Complex64> {
    sys.matrix.mul_vec(x).iter().zip(&sys.rhs).map(|(a, b)| a - b).collect()
}

/// Direct banded solve, certified by the recomputed residual and refined
/// iteratively if round-off leaves it above [`RESIDUAL_TOL`].
fn solve_system(sys: &LinearSystem) -> Result<(Vec<Complex64>, f64, SolverStats)> {
    let lu = BandLu::factor(&sys.matrix)?;
    let mut x = lu.solve(&sys.rhs);
    let target = RESIDUAL_TOL * weighted_norm(&sys.grid, &sys.rhs);
    let mut res = residual(sys, &x);
    let mut norm = weighted_norm(&sys.grid, &res);
    let mut steps = 0;
    while norm > target && steps < 3 {
        let dx = lu.solve(&res);
        for (a, b) in x.iter_mut().zip(&dx) {
            *a -= b;
        }
        res = residual(sys, &x);
        norm = weighted_norm(&sys.grid, &res);
        steps += 1;
    }
    if !norm.is_finite() || norm > target {
        return Err(Error::SolverFailure(format!("residual {norm:e} above {target:e} after {steps} refinement steps")));
    }
    let stats = SolverStats {
        unknowns: sys.matrix.dim(),
        nonzeros: sys.matrix.nonzeros(),
        factor_bandwidths: lu.bandwidths(),
        refinement_steps: steps,
    };
    Ok((x, norm, stats))
}

pub fn solve_dd(p: &DDProblem, grid: &SectorGrid) -> Result<SolveResult> {
    let sys = assemble_dd_system(p, grid)?;
    let (x, equation_residual, stats) = solve_system(&sys)?;
    let solution = GridFunction::from_values(grid, x)?;
    let boundary_residual = boundary_nodes(grid).map(|(i, j)| solution.get(i, j).norm()).fold(0.0, f64::max);
    Ok(SolveResult {
        solution,
        equation_residual,
        boundary_residual,
        interpolated_boundary_residual: boundary_residual,
        auxiliary: None,
        regime_warning: false,
        stats,
    })
}

fn boundary_nodes(grid: &SectorGrid) -> impl Iterator<Item = (usize, usize)> + '_ {
    (0..grid.rows()).flat_map(move |i| (0..grid.cols()).map(move |j| (i, j))).filter(|&(i, j)| grid.is_boundary(i, j))
}

/// `χ(t) = (1 - t)³(1 + 3t)` on `[0, 1]`, `1` for `t < 0` and `0` for `t > 1`.
pub fn cutoff(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else {
        (1.0 - t).powi(3) * (1.0 + 3.0 * t)
    }
}

/// `u_g = g_1(r) χ((φ - b_1)/ε) + g_3(r) χ((b_3 - φ)/ε)` with `ε = d/2`.
pub fn lifting(p: &NonlocalPoissonProblem, grid: &SectorGrid) -> GridFunction {
    let b1 = p.geometry.first();
    let b3 = p.geometry.last();
    let eps = 0.5 * p.geometry.spacing();
    GridFunction::from_fn(grid, |r, phi| {
        p.g1.eval(r) * cutoff((phi - b1) / eps) + p.g3.eval(r) * cutoff((b3 - phi) / eps)
    })
}

pub fn solve_nonlocal_poisson(p: &NonlocalPoissonProblem, grid: &SectorGrid) -> Result<SolveResult> {
    check_grid(&p.geometry, p.r_min, p.r_max, grid)?;
    let op = DifferenceOperator::nonlocal_pair(p.geometry.clone(), p.alpha, p.beta)?;
    let f = p.rhs.sample(grid)?;
    let ug = lifting(p, grid);
    let lifted = f.sub(&apply_helmholtz(&ug))?;
    let sys = LinearSystem { grid: grid.clone(), matrix: assemble_matrix(&op, grid), rhs: interior_rhs(grid, &lifted) };
    let (x, _, stats) = solve_system(&sys)?;
    let w = GridFunction::from_values(grid, x)?;
    let u = ug.add(&op.apply_on_grid(&w)?)?;

    let mut eq = apply_helmholtz(&u).sub(&f)?;
    for (i, j) in boundary_nodes(grid).collect::<Vec<_>>() {
        eq.set(i, j, ZERO);
    }
    let m = grid.columns_per_sector();
    let n_phi = grid.n_phi();
    let nodal = |i: usize, j0: usize, coef: f64, g: &RadialDataBox| {
        (u.get(i, j0) + u.get(i, m) * coef - g.eval(grid.radius(i))).norm()
    };
    let midpoint = |i: usize, j0: usize, coef: f64, g: &RadialDataBox| {
        let avg = |j: usize| 0.5 * (u.get(i, j) + u.get(i + 1, j));
        (avg(j0) + avg(m) * coef - g.eval(grid.radius(i) + 0.5 * grid.dr())).norm()
    };
    let mut boundary_residual = 0.0f64;
    let mut interpolated = 0.0f64;
    for i in 0..grid.rows() {
        boundary_residual = boundary_residual.max(nodal(i, 0, p.alpha, &p.g1)).max(nodal(i, n_phi, p.beta, &p.g3));
        if i + 1 < grid.rows() {
            interpolated = interpolated.max(midpoint(i, 0, p.alpha, &p.g1)).max(midpoint(i, n_phi, p.beta, &p.g3));
        }
    }
    Ok(SolveResult {
        equation_residual: eq.l2_norm(),
        solution: u,
        boundary_residual,
        interpolated_boundary_residual: interpolated,
        auxiliary: Some(w),
        regime_warning: !p.in_solvable_regime(),
        stats,
    })
}

/// Smallest eigenvalue of the symmetric part of `W·(A M)` on interior nodes,
/// `W` the diagonal of quadrature weights `r_i Δr Δφ`.
pub fn discrete_coercivity(p: &DDProblem, grid: &SectorGrid) -> Result<f64> {
    if grid.node_count() > DENSE_EIGEN_LIMIT {
        return Err(Error::TooLarge(grid.node_count()));
    }
    check_grid(&p.geometry, p.r_min, p.r_max, grid)?;
    let op = p.operator()?;
    let a = assemble_matrix(&op, grid);
    let interior: Vec<usize> = (1..grid.n_r())
        .flat_map(|i| (1..grid.n_phi()).map(move |j| (i, j)))
        .map(|(i, j)| grid.index(i, j))
        .collect();
    let mut pos = vec![usize::MAX; grid.node_count()];
    for (k, &node) in interior.iter().enumerate() {
        pos[node] = k;
    }
    let n = interior.len();
    let mut s = DMatrix::<f64>::zeros(n, n);
    let cell = grid.dr() * grid.dphi();
    for (k, &node) in interior.iter().enumerate() {
        let weight = grid.radius(node / grid.cols()) * cell;
        for &(col, v) in a.row(node) {
            s[(k, pos[col])] += weight * v;
        }
    }
    let sym = (&s + s.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// Largest gap at `γ_2` between quadratic extrapolations of `w` from the two sectors.
pub fn gamma2_mismatch(w: &GridFunction) -> Result<f64> {
    let grid = w.grid();
    let m = grid.columns_per_sector();
    if grid.geometry().sectors() != 2 || m < 3 {
        return Err(Error::IncompatibleGrid("need two sectors with at least 3 columns each".into()));
    }
    let mut worst = 0.0f64;
    for i in 0..grid.rows() {
        let left = w.get(i, m - 1) * 3.0 - w.get(i, m - 2) * 3.0 + w.get(i, m - 3);
        let right = w.get(i, m + 1) * 3.0 - w.get(i, m + 2) * 3.0 + w.get(i, m + 3);
        worst = worst.max((left - right).norm());
    }
    Ok(worst)
}

/// `log₂(e_coarse / e_fine)`.
pub fn observed_order(e_coarse: f64, e_fine: f64) -> f64 {
    (e_coarse / e_fine).log2()
}

/// Grid CSV with header `r,phi,re,im`, floats in shortest round-trip form.
pub fn write_grid_csv(u: &GridFunction, mut out: impl Write) -> io::Result<()> {
    let grid = u.grid();
    writeln!(out, "r,phi,re,im")?;
    for i in 0..grid.rows() {
        for j in 0..grid.cols() {
            let v = u.get(i, j);
            writeln!(out, "{:?},{:?},{:?},{:?}", grid.radius(i), grid.angle(j), v.re, v.im)?;
        }
    }
    Ok(())
}
