//! Difference operators in plane angles.
//!
//! `(R w)(r, φ) = Σ_p e_p · w(r, φ + p d)` for `p = -R+1, …, R-1`, and its
//! truncation `R_K = P_K R I_K` (extend by zero outside `K`, shift, restrict).
//! Stacking the restrictions of `w` to the sectors `K_1, …, K_R` turns
//! `R_K` into multiplication by the `R × R` matrix with entries
//! `r_{p1 p2} = e_{p2 - p1}`, so spectra, invertibility and definiteness of
//! `R_K` are all read off that matrix.

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{AngleGeometry, GridFunction};

/// Relative determinant threshold below which [`DifferenceOperator::inverse_matrix`] refuses.
pub const SINGULAR_TOL: f64 = 1e-14;

/// Relative margin for the strict positivity test of `R_1 + R_1^T`.
pub const DEFINITE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceOperator {
    geometry: AngleGeometry,
    /// `e_p` stored at index `p + R - 1`.
    coefficients: Vec<f64>,
}

impl DifferenceOperator {
    /// `coefficients` lists `e_{-R+1}, …, e_0, …, e_{R-1}`.
    pub fn new(geometry: AngleGeometry, coefficients: Vec<f64>) -> Result<Self> {
        let r = geometry.sectors();
        if coefficients.len() != 2 * r - 1 {
            return Err(Error::InvalidOperator(format!(
                "R = {r} needs {} coefficients, got {}",
                2 * r - 1,
                coefficients.len()
            )));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidOperator(format!("coefficient {c} is not finite")));
        }
        Ok(Self { geometry, coefficients })
    }

    /// `w(φ) - α w(φ + d) - β w(φ - d)` on a two-sector angle.
    pub fn nonlocal_pair(geometry: AngleGeometry, alpha: f64, beta: f64) -> Result<Self> {
        if geometry.sectors() != 2 {
            return Err(Error::InvalidOperator(format!(
                "the (alpha, beta) operator lives on two sectors, geometry has {}",
                geometry.sectors()
            )));
        }
        Self::new(geometry, vec![-beta, 1.0, -alpha])
    }

    pub fn geometry(&self) -> &AngleGeometry {
        &self.geometry
    }

    pub fn sectors(&self) -> usize {
        self.geometry.sectors()
    }

    /// `e_p`, zero outside `|p| < R`.
    pub fn coefficient(&self, p: isize) -> f64 {
        let r = self.sectors() as isize;
        if p.abs() >= r {
            0.0
        } else {
            self.coefficients[(p + r - 1) as usize]
        }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// Nonzero shifts `(p, e_p)`.
    pub fn terms(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        let r = self.sectors() as isize;
        (-r + 1..r).map(|p| (p, self.coefficient(p))).filter(|&(_, e)| e != 0.0)
    }

    /// `R^*`: `e'_p = e_{-p}`.
    pub fn adjoint(&self) -> Self {
        let mut coefficients = self.coefficients.clone();
        coefficients.reverse();
        Self { geometry: self.geometry.clone(), coefficients }
    }

    pub fn to_matrix(&self) -> ShiftMatrix {
        let r = self.sectors();
        let entries = DMatrix::from_fn(r, r, |p1, p2| self.coefficient(p2 as isize - p1 as isize));
        ShiftMatrix { entries }
    }

    /// Eigenvalues of `R_1` with algebraic multiplicity, ascending by real then imaginary part.
    pub fn spectrum(&self) -> Vec<Complex64> {
        self.to_matrix().eigenvalues()
    }

    pub fn inverse_matrix(&self) -> Result<ShiftMatrix> {
        self.to_matrix().inverse()
    }

    /// Whether `R_1 + R_1^T` is positive definite, equivalently `R_K + R_K^*` is.
    pub fn symmetric_part_positive_definite(&self) -> bool {
        let m = self.to_matrix();
        let sym = &m.entries + m.entries.transpose();
        let scale = sym.norm().max(f64::MIN_POSITIVE);
        let eig = SymmetricEigen::new(sym);
        eig.eigenvalues.iter().all(|&l| l > DEFINITE_TOL * scale)
    }

    /// Discrete `R_K`: `v(i, j) = Σ_p e_p u(i, j + p·n_phi/R)`, reading zero off the grid.
    pub fn apply_on_grid(&self, u: &GridFunction) -> Result<GridFunction> {
        let grid = u.grid();
        self.check_grid(grid.geometry())?;
        let m = grid.columns_per_sector() as isize;
        let n_phi = grid.n_phi() as isize;
        let mut v = GridFunction::zeros(grid);
        for i in 0..grid.rows() {
            for j in 0..grid.cols() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (p, e) in self.terms() {
                    let jj = j as isize + p * m;
                    if (0..=n_phi).contains(&jj) {
                        acc += u.get(i, jj as usize) * e;
                    }
                }
                v.set(i, j, acc);
            }
        }
        Ok(v)
    }

    /// Columns read by the discrete `R_K` at column `j`, with their weights.
    pub fn column_stencil(&self, j: usize, columns_per_sector: usize, n_phi: usize) -> Vec<(usize, f64)> {
        let m = columns_per_sector as isize;
        self.terms()
            .filter_map(|(p, e)| {
                let jj = j as isize + p * m;
                (0..=n_phi as isize).contains(&jj).then_some((jj as usize, e))
            })
            .collect()
    }

    pub(crate) fn check_grid(&self, geometry: &AngleGeometry) -> Result<()> {
        if geometry.sectors() != self.sectors()
            || (geometry.spacing() - self.geometry.spacing()).abs() > crate::geometry::SPACING_TOL
        {
            return Err(Error::IncompatibleGrid(format!(
                "operator has R = {} and d = {}, grid has R = {} and d = {}",
                self.sectors(),
                self.geometry.spacing(),
                geometry.sectors(),
                geometry.spacing()
            )));
        }
        Ok(())
    }
}

/// The `R × R` matrix `R_1` with entries `e_{p2 - p1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftMatrix {
    entries: DMatrix<f64>,
}

impl ShiftMatrix {
    pub fn from_matrix(entries: DMatrix<f64>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn transpose(&self) -> Self {
        Self { entries: self.entries.transpose() }
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    /// Eigenvalues with algebraic multiplicity, ordered by [`complex_order`].
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.dim();
        let max_iter = 200 * n.max(1);
        // the unshifted Schur iteration can stall on exactly structured
        // matrices (nilpotent Toeplitz, for one); an orthogonal similarity
        // breaks the structure without moving the eigenvalues
        let mut ev: Vec<Complex64> = (0..=SCHUR_RETRIES)
            .find_map(|k| {
                let m = if k == 0 { self.entries.clone() } else { rotated(&self.entries, k) };
                Schur::try_new(m, f64::EPSILON, max_iter).map(|s| s.complex_eigenvalues().iter().copied().collect())
            })
            .expect("Schur iteration failed on every rotation");
        sort_complex(&mut ev);
        ev
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        let scale = self.entries.norm().powi(self.dim() as i32).max(f64::MIN_POSITIVE);
        if !(det.abs() > SINGULAR_TOL * scale) {
            return Err(Error::SingularMatrix { det });
        }
        self.entries
            .clone()
            .try_inverse()
            .map(|entries| Self { entries })
            .ok_or(Error::SingularMatrix { det })
    }
}

const SCHUR_RETRIES: usize = 4;

/// `Q A Qᵀ` with `Q` orthogonal, from a fixed pseudo-random matrix seeded by `k`.
fn rotated(a: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let seed = DMatrix::from_fn(n, n, |i, j| (((i * n + j + 1) * (2 * k + 1)) as f64 * 0.754_877_666_246_692_8).sin());
    let q = seed.qr().q();
    &q * a * q.transpose()
}

/// Ascending by real part, ties broken by imaginary part. Real parts are
/// compared on a `1e-9` lattice so that numerically imaginary values order
/// by their imaginary parts alone.
pub fn sort_complex(values: &mut [Complex64]) {
    values.sort_by(complex_order);
}

pub fn complex_order(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    // `+ 0.0` folds -0.0 into 0.0
    let ka = (a.re / 1e-9).round() + 0.0;
    let kb = (b.re / 1e-9).round() + 0.0;
    ka.total_cmp(&kb).then(a.im.total_cmp(&b.im))
}
