//! The operator pencil of the nonlocal Poisson problem in a two-sector angle.
//!
//! Substituting `u = r^{iλ} Ũ(φ)` into `-Δu` and the nonlocal conditions on
//! `γ_1`, `γ_3` gives the boundary-value problem on the arc `(b_1, b_3)`
//!
//! ```text
//! -Ũ'' + λ² Ũ = 0,
//! Ũ(b_1) + α Ũ(b_2) = 0,
//! Ũ(b_3) + β Ũ(b_2) = 0,
//! ```
//!
//! whose eigenvalues decide in which weighted scales the problem is
//! uniquely solvable. With `d = (b_3 - b_1)/2` the characteristic
//! determinant factors as `-2 sinh(λd) (2 cosh(λd) + α + β)`.

pub mod roots;

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
pub use roots::{AnalyticFunction, Evaluation, Root, RootFinderOptions, Window};

/// Eigenvalues whose imaginary parts are closer than this to a line lie on it.
pub const LINE_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonPencilProblem {
    alpha: f64,
    beta: f64,
    b1: f64,
    b3: f64,
}

impl PoissonPencilProblem {
    pub fn new(alpha: f64, beta: f64, b1: f64, b3: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParameter("alpha and beta must be finite".into()));
        }
        if !(b1 > 0.0 && b3 > b1 && b3 < std::f64::consts::TAU) {
            return Err(Error::InvalidParameter(format!("need 0 < b1 < b3 < 2π, got b1 = {b1}, b3 = {b3}")));
        }
        Ok(Self { alpha, beta, b1, b3 })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn b1(&self) -> f64 {
        self.b1
    }

    pub fn b3(&self) -> f64 {
        self.b3
    }

    pub fn d(&self) -> f64 {
        0.5 * (self.b3 - self.b1)
    }

    pub fn b2(&self) -> f64 {
        self.b1 + self.d()
    }

    pub fn opening(&self) -> f64 {
        self.b3 - self.b1
    }

    /// `α + β`, the only combination the spectrum depends on.
    pub fn coupling(&self) -> f64 {
        self.alpha + self.beta
    }

    pub fn in_solvable_regime(&self) -> bool {
        self.coupling().abs() < 2.0
    }

    fn require_regime(&self) -> Result<()> {
        if self.in_solvable_regime() {
            Ok(())
        } else {
            Err(Error::UnsupportedRegime { sum_abs: self.coupling().abs() })
        }
    }

    /// Nonlocal conditions applied to `{e^{λψ}, e^{-λψ}}`, `ψ = φ - b_2`, each column
    /// scaled by `e^{-|Re λ| d}`. Returns the matrix and its entrywise λ-derivative.
    ///
    /// Centering at `b_2` multiplies the columns of the `{e^{λφ}, e^{-λφ}}` system by
    /// `e^{∓λ b_2}`, so the determinant is the same.
    pub fn characteristic_matrix(&self, lambda: Complex64) -> (Matrix2<Complex64>, Matrix2<Complex64>) {
        let d = self.d();
        let s = (-lambda.re.abs() * d).exp();
        let ep = (lambda * d).exp() * s;
        let em = (-lambda * d).exp() * s;
        let (a, b) = (self.alpha, self.beta);
        // columns: e^{λψ}, e^{-λψ} at ψ = -d (b_1), 0 (b_2), d (b_3)
        let m = Matrix2::new(em + a * s, ep + a * s, ep + b * s, em + b * s);
        let dm = Matrix2::new(-d * em, d * ep, d * ep, -d * em);
        (m, dm)
    }

    /// Scaled characteristic determinant; its zeros are the pencil eigenvalues.
    ///
    /// At `λ = 0` the exponential system degenerates and the determinant of the
    /// conditions on `{1, φ - b_2}` is returned instead; it equals `d (2 + α + β)`.
    pub fn characteristic_value(&self, lambda: Complex64) -> Complex64 {
        if lambda == ZERO {
            return self.degenerate_value();
        }
        self.exponential_determinant(lambda).value
    }

    /// Determinant of the conditions on `{1, φ - b_2}`.
    pub fn degenerate_value(&self) -> Complex64 {
        let d = self.d();
        let m = Matrix2::new(ONE * (1.0 + self.alpha), ONE * (-d), ONE * (1.0 + self.beta), ONE * d);
        m.determinant()
    }

    pub(crate) fn exponential_determinant(&self, lambda: Complex64) -> Evaluation {
        let (m, dm) = self.characteristic_matrix(lambda);
        let value = m.determinant();
        let derivative = dm[(0, 0)] * m[(1, 1)] + m[(0, 0)] * dm[(1, 1)] - dm[(0, 1)] * m[(1, 0)] - m[(0, 1)] * dm[(1, 0)];
        // magnitudes of all terms before any cancellation
        let s = (-lambda.re.abs() * self.d()).exp();
        let (ep, em) = (m[(1, 0)] - self.beta * s, m[(0, 0)] - self.alpha * s);
        let (ea, eb) = (self.alpha.abs() * s, self.beta.abs() * s);
        let scale = (em.norm() + ea) * (em.norm() + eb) + (ep.norm() + ea) * (ep.norm() + eb);
        Evaluation { value, derivative, scale }
    }

    /// Magnitude scale of the determinant's cancelling products at `λ`.
    pub fn characteristic_scale(&self, lambda: Complex64) -> f64 {
        self.exponential_determinant(lambda).scale
    }

    /// Eigenvalues from the explicit formulas, `Im λ ∈ [im_min, im_max]`.
    pub fn eigenvalues_closed_form(&self, im_min: f64, im_max: f64) -> Result<EigenvalueSet> {
        self.require_regime()?;
        if !(im_min <= im_max) {
            return Err(Error::InvalidParameter(format!("empty strip [{im_min}, {im_max}]")));
        }
        let l = self.opening();
        let s = self.coupling();
        let mut im_parts = Vec::new();
        let mut push_family = |offset: f64, period: f64, skip_zero: bool| {
            // offset + k·period inside the strip
            let k_lo = ((im_min - offset) / period).floor() as i64 - 1;
            let k_hi = ((im_max - offset) / period).ceil() as i64 + 1;
            for k in k_lo..=k_hi {
                if skip_zero && k == 0 {
                    continue;
                }
                let v = offset + k as f64 * period;
                if v >= im_min - 1e-12 && v <= im_max + 1e-12 {
                    im_parts.push(v);
                }
            }
        };
        if s == 0.0 {
            push_family(0.0, PI / l, true);
        } else {
            push_family(0.0, 2.0 * PI / l, true);
            let t = 2.0 * ((4.0 - s * s).sqrt() / s).atan();
            let base = if s < 0.0 { 0.0 } else { 2.0 * PI };
            push_family((base + t) / l, 4.0 * PI / l, false);
            push_family((base - t) / l, 4.0 * PI / l, false);
        }
        let mut values: Vec<Complex64> = im_parts.into_iter().map(|v| Complex64::new(0.0, v)).collect();
        crate::difference_ops::sort_complex(&mut values);
        values.dedup_by(|a, b| (*a - *b).norm() < 1e-10);
        Ok(EigenvalueSet { values, merged: Vec::new(), window: Window::strip(im_min, im_max), method: Method::ClosedForm })
    }

    /// Eigenvalues inside `window` by argument-principle counting and Newton polish.
    pub fn eigenvalues_numeric(&self, window: &Window) -> Result<EigenvalueSet> {
        self.eigenvalues_numeric_with(window, &RootFinderOptions::default())
    }

    pub fn eigenvalues_numeric_with(&self, window: &Window, opts: &RootFinderOptions) -> Result<EigenvalueSet> {
        let f = PrimalCharacteristic(self);
        let roots = roots::find_zeros(&f, window, opts)?;
        let origin_is_eigenvalue = self.degenerate_value().norm() < opts.residual_tol * (1.0 + self.alpha.abs() + self.beta.abs()) * self.d();
        Ok(EigenvalueSet::from_roots(roots, origin_is_eigenvalue, *window, Method::Numeric))
    }

    /// Determinant of the formally adjoint nonlocal transmission problem with parameter λ.
    ///
    /// Unknowns are `V_1 = A_1 e^{λψ_1} + B_1 e^{-λψ_1}` on `(b_1, b_2)` and
    /// `V_2 = A_2 e^{λψ_2} + B_2 e^{-λψ_2}` on `(b_2, b_3)`, with `ψ_t` measured
    /// from the sector midpoints and columns scaled by `e^{-|Re λ| d/2}`. Rows:
    /// `V_1(b_1) = 0`, `V_2(b_3) = 0`, `V_1(b_2) - V_2(b_2) = 0`, and
    /// `V_1'(b_2) - V_2'(b_2) + α V_1'(b_1) - β V_2'(b_3) = 0`, which is the
    /// flux condition on `γ_2` with `∂/∂n_1 = ∂/∂n_2 = r^{-1}∂_φ` and
    /// `∂/∂n_3 = -r^{-1}∂_φ`.
    pub fn adjoint_transmission_characteristic(&self, lambda: Complex64) -> Complex64 {
        if lambda == ZERO {
            return self.adjoint_degenerate_value();
        }
        self.adjoint_determinant(lambda).value
    }

    pub(crate) fn adjoint_matrix(&self, lambda: Complex64) -> (Matrix4<Complex64>, Matrix4<Complex64>) {
        let h = 0.5 * self.d();
        let s = (-lambda.re.abs() * h).exp();
        let ep = (lambda * h).exp() * s;
        let em = (-lambda * h).exp() * s;
        let (a, b) = (self.alpha, self.beta);
        let l = lambda;
        #[rustfmt::skip]
        let m = Matrix4::new(
            em, ep, ZERO, ZERO,
            ZERO, ZERO, ep, em,
            ep, em, -em, -ep,
            l * (ep + a * em), -l * (em + a * ep), -l * (em + b * ep), l * (ep + b * em),
        );
        // entrywise d/dλ
        let dep = h * ep;
        let dem = -h * em;
        #[rustfmt::skip]
        let dm = Matrix4::new(
            dem, dep, ZERO, ZERO,
            ZERO, ZERO, dep, dem,
            dep, dem, -dem, -dep,
            (ep + a * em) + l * (dep + a * dem),
            -(em + a * ep) - l * (dem + a * dep),
            -(em + b * ep) - l * (dem + b * dep),
            (ep + b * em) + l * (dep + b * dem),
        );
        (m, dm)
    }

    pub(crate) fn adjoint_determinant(&self, lambda: Complex64) -> Evaluation {
        let (m, dm) = self.adjoint_matrix(lambda);
        let value = m.determinant();
        // Jacobi: d det = Σ_k det(M with row k differentiated)
        let mut derivative = ZERO;
        for k in 0..4 {
            let mut mk = m;
            mk.set_row(k, &dm.row(k));
            derivative += mk.determinant();
        }
        // Hadamard bound on the matrix of term magnitudes
        let h = 0.5 * self.d();
        let s = (-lambda.re.abs() * h).exp();
        let ep = ((lambda * h).exp() * s).norm();
        let em = ((-lambda * h).exp() * s).norm();
        let (a, b) = (self.alpha.abs(), self.beta.abs());
        let row4 = lambda.norm() * ((ep + a * em).powi(2) + (em + a * ep).powi(2) + (em + b * ep).powi(2) + (ep + b * em).powi(2)).sqrt();
        let scale = (em * em + ep * ep) * (2.0 * (em * em + ep * ep)).sqrt() * row4;
        Evaluation { value, derivative, scale }
    }

    /// Transmission determinant on `{1, ψ}` per sector at `λ = 0`.
    pub fn adjoint_degenerate_value(&self) -> Complex64 {
        let h = 0.5 * self.d();
        let (a, b) = (self.alpha, self.beta);
        #[rustfmt::skip]
        let m = Matrix4::new(
            ONE, ONE * (-h), ZERO, ZERO,
            ZERO, ZERO, ONE, ONE * h,
            ONE, ONE * h, -ONE, ONE * h,
            ZERO, ONE * (1.0 + a), ZERO, ONE * (-1.0 - b),
        );
        m.determinant()
    }

    /// Zeros of the adjoint transmission determinant inside `window`.
    pub fn adjoint_eigenvalues_numeric(&self, window: &Window) -> Result<EigenvalueSet> {
        let opts = RootFinderOptions::default();
        let f = AdjointCharacteristic(self);
        let roots = roots::find_zeros(&f, window, &opts)?;
        let origin_is_eigenvalue = self.adjoint_degenerate_value().norm() < opts.residual_tol * (1.0 + self.alpha.abs() + self.beta.abs());
        Ok(EigenvalueSet::from_roots(roots, origin_is_eigenvalue, *window, Method::Numeric))
    }

    /// Whether no eigenvalue satisfies `|Im λ - h| ≤ 1e-9`.
    pub fn line_is_eigenvalue_free(&self, h: f64) -> Result<LineCertificate> {
        self.require_regime()?;
        // the sinh family alone has spacing 2π/(b_3 - b_1), so this strip is never empty
        let reach = 2.0 * PI / self.opening() + 1.0;
        let set = self.eigenvalues_closed_form(h - reach, h + reach)?;
        let nearest = set
            .values
            .iter()
            .copied()
            .min_by(|a, b| (a.im - h).abs().total_cmp(&(b.im - h).abs()));
        let distance = nearest.map_or(f64::INFINITY, |z| (z.im - h).abs());
        Ok(LineCertificate { h, free: distance > LINE_TOL, nearest, distance })
    }

    /// Unique solvability in the weighted scale with exponent `a` and smoothness `l`:
    /// the line `Im λ = a + 1 - l - 2m` with `m = 1` must be eigenvalue-free.
    pub fn solvability_report(&self, a: f64, l: u32) -> Result<SolvabilityReport> {
        let h = a - l as f64 - 1.0;
        let certificate = self.line_is_eigenvalue_free(h)?;
        Ok(SolvabilityReport { a, l, certificate })
    }
}

struct PrimalCharacteristic<'a>(&'a PoissonPencilProblem);

impl AnalyticFunction for PrimalCharacteristic<'_> {
    fn evaluate(&self, z: Complex64) -> Evaluation {
        self.0.exponential_determinant(z)
    }

    fn origin_multiplicity(&self) -> u32 {
        1
    }
}

struct AdjointCharacteristic<'a>(&'a PoissonPencilProblem);

impl AnalyticFunction for AdjointCharacteristic<'_> {
    fn evaluate(&self, z: Complex64) -> Evaluation {
        self.0.adjoint_determinant(z)
    }

    fn origin_multiplicity(&self) -> u32 {
        2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Numeric,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueSet {
    /// Ascending by real part, then imaginary part.
    pub values: Vec<Complex64>,
    /// Values that absorbed several numerically coincident zeros.
    pub merged: Vec<Complex64>,
    pub window: Window,
    pub method: Method,
}

impl EigenvalueSet {
    fn from_roots(roots: Vec<Root>, origin: bool, window: Window, method: Method) -> Self {
        let merged = roots.iter().filter(|r| r.merged > 1).map(|r| r.value).collect();
        let mut values: Vec<Complex64> = roots.into_iter().map(|r| r.value).collect();
        if origin && window.contains(ZERO) {
            values.push(ZERO);
            crate::difference_ops::sort_complex(&mut values);
        }
        Self { values, merged, window, method }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest distance between paired elements, `None` when the sizes differ.
    pub fn max_pair_distance(&self, other: &EigenvalueSet) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        Some(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineCertificate {
    pub h: f64,
    pub free: bool,
    pub nearest: Option<Complex64>,
    /// `|Im λ_nearest - h|`.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolvabilityReport {
    pub a: f64,
    pub l: u32,
    pub certificate: LineCertificate,
}

impl SolvabilityReport {
    pub fn h(&self) -> f64 {
        self.certificate.h
    }

    pub fn solvable(&self) -> bool {
        self.certificate.free
    }

    pub fn blocking(&self) -> Option<Complex64> {
        if self.solvable() {
            None
        } else {
            self.certificate.nearest
        }
    }
}

impl fmt::Display for SolvabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.blocking() {
            None => write!(f, "uniquely solvable in the weighted scale (a = {}, l = {})", self.a, self.l),
            Some(z) => write!(f, "blocked by the eigenvalue {} + {}i on the line Im λ = {}", z.re, z.im, self.h()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Hand expansion of the 2×2 determinant, same column scaling.
    fn factorized(p: &PoissonPencilProblem, l: Complex64) -> Complex64 {
        let d = p.d();
        let s = (-2.0 * l.re.abs() * d).exp();
        -2.0 * (l * d).sinh() * (2.0 * (l * d).cosh() + p.coupling()) * s
    }

    #[test]
    fn determinant_vanishes_on_sinh_zeros() {
        let p = PoissonPencilProblem::new(0.37, -1.21, 0.4, 2.9).unwrap();
        for k in 1..4 {
            let l = c(0.0, k as f64 * PI / p.d());
            assert!(p.characteristic_value(l).norm() < 1e-12 * p.characteristic_scale(l));
        }
    }

    #[test]
    fn dirichlet_like_opening_pi() {
        let p = PoissonPencilProblem::new(0.3, -0.3, 0.5, 0.5 + PI).unwrap();
        assert!(p.characteristic_value(c(0.0, 1.0)).norm() < 1e-12);
        let q = PoissonPencilProblem::new(0.0, 0.0, 0.5, 0.5 + PI).unwrap();
        assert!(q.characteristic_value(c(0.5, 0.0)).norm() > 1e-2);
    }

    #[test]
    fn degenerate_basis_at_origin() {
        let p = PoissonPencilProblem::new(0.6, 0.4, 0.2, 2.2).unwrap();
        assert!((p.characteristic_value(ZERO) - c(p.d() * 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn matches_hand_expansion() {
        let p = PoissonPencilProblem::new(0.8, -0.35, 0.3, 4.1).unwrap();
        for k in 0..100 {
            let t = k as f64 * 0.37;
            let l = c(2.5 * t.sin(), 2.5 * (1.3 * t).cos());
            let raw = p.characteristic_value(l);
            let f = factorized(&p, l);
            assert!((raw - f).norm() <= 1e-12 * f.norm().max(p.characteristic_scale(l)));
        }
    }

    #[test]
    fn closed_form_alpha_plus_beta_zero() {
        let p = PoissonPencilProblem::new(0.25, -0.25, 1.0, 1.0 + PI).unwrap();
        let set = p.eigenvalues_closed_form(-3.5, 3.5).unwrap();
        let ims: Vec<f64> = set.values.iter().map(|z| z.im).collect();
        let expected = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
        assert_eq!(ims.len(), expected.len());
        for (a, b) in ims.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_positive_coupling() {
        let p = PoissonPencilProblem::new(0.6, 0.4, 0.1, 0.1 + 2.0 * PI - 1e-9).unwrap_err();
        assert!(matches!(p, Error::InvalidParameter(_)));
        // opening 2π is not representable inside (0, 2π); scale the strip instead
        let l = 1.9 * PI;
        let p = PoissonPencilProblem::new(0.6, 0.4, 0.1, 0.1 + l).unwrap();
        let set = p.eigenvalues_closed_form(0.0, 2.0 * 2.0 * PI / l).unwrap();
        let unit = 2.0 * PI / l;
        let expected = [2.0 / 3.0, 1.0, 4.0 / 3.0, 2.0];
        assert_eq!(set.len(), 4);
        for (z, e) in set.values.iter().zip(expected) {
            assert!((z.im - e * unit).abs() < 1e-13, "{z} vs {}", e * unit);
        }
    }

    #[test]
    fn closed_form_regime_guard() {
        let p = PoissonPencilProblem::new(1.5, 1.5, 0.5, 2.0).unwrap();
        assert!(matches!(p.eigenvalues_closed_form(-1.0, 1.0), Err(Error::UnsupportedRegime { .. })));
        assert!(matches!(p.line_is_eigenvalue_free(0.0), Err(Error::UnsupportedRegime { .. })));
    }

    #[test]
    fn closed_form_zeros_are_zeros() {
        for (a, b) in [(0.6, 0.4), (-0.9, 0.2), (0.0, 0.0), (1.2, 0.5), (-1.0, -0.7)] {
            let p = PoissonPencilProblem::new(a, b, 0.7, 3.3).unwrap();
            for z in p.eigenvalues_closed_form(-6.0, 6.0).unwrap().values {
                assert!(p.characteristic_value(z).norm() < 1e-12 * p.characteristic_scale(z), "{a} {b} {z}");
            }
        }
    }

    #[test]
    fn numeric_matches_closed_form() {
        let p = PoissonPencilProblem::new(0.6, 0.4, 0.2, 0.2 + 1.9 * PI).unwrap();
        let w = Window::new(-0.1, 0.1, 0.1, 2.1).unwrap();
        let num = p.eigenvalues_numeric(&w).unwrap();
        let cf = p.eigenvalues_closed_form(0.1, 2.1).unwrap();
        assert!(num.max_pair_distance(&cf).unwrap() < 1e-8, "{:?} vs {:?}", num.values, cf.values);
    }

    #[test]
    fn numeric_single_dirichlet_root() {
        let p = PoissonPencilProblem::new(0.0, 0.0, 0.5, 0.5 + PI).unwrap();
        let w = Window::new(-0.3, 0.3, 0.5, 1.5).unwrap();
        let set = p.eigenvalues_numeric(&w).unwrap();
        assert_eq!(set.len(), 1);
        assert!((set.values[0] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn numeric_right_half_plane_is_empty() {
        let p = PoissonPencilProblem::new(0.7, -0.2, 0.5, 3.0).unwrap();
        let w = Window::new(1.0, 3.0, -4.0, 4.0).unwrap();
        assert!(p.eigenvalues_numeric(&w).unwrap().is_empty());
    }

    #[test]
    fn numeric_window_around_origin_skips_spurious_zero() {
        let p = PoissonPencilProblem::new(0.3, 0.1, 0.5, 3.0).unwrap();
        let w = Window::new(-0.5, 0.5, -0.5, 0.5).unwrap();
        assert!(p.eigenvalues_numeric(&w).unwrap().is_empty());
    }

    #[test]
    fn adjoint_zeros_mirror_primal() {
        let p = PoissonPencilProblem::new(0.45, 0.8, 0.3, 2.8).unwrap();
        let w = Window::new(-0.4, 0.4, -5.0, 5.0).unwrap();
        let primal = p.eigenvalues_numeric(&w).unwrap();
        let adjoint = p.adjoint_eigenvalues_numeric(&w).unwrap();
        let mut conj: Vec<Complex64> = primal.values.iter().map(|z| z.conj()).collect();
        crate::difference_ops::sort_complex(&mut conj);
        assert_eq!(conj.len(), adjoint.len());
        for (a, b) in conj.iter().zip(&adjoint.values) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn adjoint_is_nonzero_on_real_axis() {
        let p = PoissonPencilProblem::new(0.45, 0.8, 0.3, 2.8).unwrap();
        for k in 1..20 {
            let l = c(0.25 * k as f64, 0.0);
            let e = p.adjoint_determinant(l);
            assert!(e.value.norm() > 1e-6 * e.scale);
        }
        assert!(p.adjoint_degenerate_value().norm() > 1e-6);
    }

    #[test]
    fn adjoint_derivative_matches_difference_quotient() {
        let p = PoissonPencilProblem::new(-0.3, 1.1, 0.3, 2.8).unwrap();
        let l = c(0.3, 1.7);
        let h = 1e-6;
        let e = p.adjoint_determinant(l);
        // scaling is constant along a vertical step
        let fd = (p.adjoint_determinant(l + c(0.0, h)).value - p.adjoint_determinant(l - c(0.0, h)).value) / c(0.0, 2.0 * h);
        assert!((fd - e.derivative).norm() < 1e-6 * e.derivative.norm());
    }

    #[test]
    fn line_certificates() {
        let p = PoissonPencilProblem::new(0.6, 0.4, 0.5, 3.0).unwrap();
        assert!(p.line_is_eigenvalue_free(0.0).unwrap().free);
        let q = PoissonPencilProblem::new(0.5, -0.5, 0.5, 3.0).unwrap();
        let unit = PI / q.opening();
        let hit = q.line_is_eigenvalue_free(unit).unwrap();
        assert!(!hit.free);
        assert!((hit.nearest.unwrap() - c(0.0, unit)).norm() < 1e-14);
        let miss = q.line_is_eigenvalue_free(0.5 * unit).unwrap();
        assert!(miss.free);
        assert!((miss.distance - 0.5 * unit).abs() < 1e-14);
    }

    #[test]
    fn solvability_reports() {
        let p = PoissonPencilProblem::new(-0.7, 1.9, 0.5, 3.0).unwrap();
        for l in 0..4 {
            let rep = p.solvability_report(1.0 + l as f64, l).unwrap();
            assert_eq!(rep.h(), 0.0);
            assert!(rep.solvable());
        }
        let q = PoissonPencilProblem::new(0.2, -0.2, 0.5, 0.5 + PI).unwrap();
        let blocked = q.solvability_report(3.0, 1).unwrap();
        assert!(!blocked.solvable());
        assert!((blocked.blocking().unwrap() - c(0.0, 1.0)).norm() < 1e-14);
        assert!(q.solvability_report(2.5, 1).unwrap().solvable());
    }
}
