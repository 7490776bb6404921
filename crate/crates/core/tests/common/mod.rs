//! Manufactured solutions coded from scratch, shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use nlangle_core::geometry::AngleGeometry;
use nlangle_core::sector_solver::{NonlocalPoissonProblem, RadialDataBox, Rhs};

pub const B1: f64 = PI / 6.0;
pub const B3: f64 = 5.0 * PI / 6.0;

pub fn geometry() -> AngleGeometry {
    AngleGeometry::two_sector(B1, B3).unwrap()
}

/// `(1 - t²)^4` on `(0.6, 1.4)` with derivatives in `r`.
pub fn eta(r: f64) -> [f64; 3] {
    let t = (r - 1.0) / 0.4;
    if t.abs() >= 1.0 {
        return [0.0; 3];
    }
    let q = 1.0 - t * t;
    [q.powi(4), -8.0 * t * q.powi(3) / 0.4, (48.0 * t * t * q * q - 8.0 * q.powi(3)) / 0.16]
}

/// Smooth `v = η(r) P(ψ)` with `P(0) + α P(d) = 0`, `P(L) + β P(d) = 0`,
/// built from `P = a + b ψ(L - ψ) + c ψ` and fixed by a 2×2 solve.
pub struct Oracle {
    alpha: f64,
    beta: f64,
    coef: [f64; 3],
}

impl Oracle {
    pub fn new(alpha: f64, beta: f64) -> Self {
        let l = B3 - B1;
        let d = l / 2.0;
        // unknowns (a, c) with b = 1: P(ψ) = a + ψ(L - ψ) + c ψ
        let p = |a: f64, c: f64, psi: f64| a + psi * (l - psi) + c * psi;
        let m = DMatrix::from_row_slice(2, 2, &[1.0 + alpha, alpha * d, 1.0 + beta, l + beta * d]);
        let rhs = nalgebra::DVector::from_vec(vec![-(p(0.0, 0.0, 0.0) + alpha * p(0.0, 0.0, d)), -(p(0.0, 0.0, l) + beta * p(0.0, 0.0, d))]);
        let x = m.lu().solve(&rhs).unwrap();
        Self { alpha, beta, coef: [x[0], 1.0, x[1]] }
    }

    fn profile(&self, phi: f64) -> [f64; 2] {
        let l = B3 - B1;
        let psi = phi - B1;
        let [a, b, c] = self.coef;
        [a + b * psi * (l - psi) + c * psi, -2.0 * b]
    }

    pub fn v(&self, r: f64, phi: f64) -> f64 {
        eta(r)[0] * self.profile(phi)[0]
    }

    pub fn f(&self, r: f64, phi: f64) -> f64 {
        let [e, e1, e2] = eta(r);
        let [p, p2] = self.profile(phi);
        -(e2 * p + e1 * p / r + e * p2 / (r * r)) + e * p
    }

    pub fn w(&self, r: f64, phi: f64) -> f64 {
        let d = (B3 - B1) / 2.0;
        let inv = DMatrix::from_row_slice(2, 2, &[1.0, -self.alpha, -self.beta, 1.0]).try_inverse().unwrap();
        if phi - B1 <= d {
            inv[(0, 0)] * self.v(r, phi) + inv[(0, 1)] * self.v(r, phi + d)
        } else {
            inv[(1, 0)] * self.v(r, phi - d) + inv[(1, 1)] * self.v(r, phi)
        }
    }
}

pub struct PoissonOracle {
    pub alpha: f64,
    pub beta: f64,
}

impl PoissonOracle {
    // u = x · r η(r), x = r cos φ
    pub fn u(&self, r: f64, phi: f64) -> f64 {
        r * r * phi.cos() * eta(r)[0]
    }

    pub fn f(&self, r: f64, phi: f64) -> f64 {
        // Δ(x g(r)) = x (g'' + 3 g'/r) for g = r η
        let [e, e1, e2] = eta(r);
        let (g1, g2) = (e + r * e1, 2.0 * e1 + r * e2);
        let x = r * phi.cos();
        -x * (g2 + 3.0 * g1 / r) + self.u(r, phi)
    }

    pub fn problem(&self) -> NonlocalPoissonProblem {
        let (a, b) = (self.alpha, self.beta);
        let b2 = 0.5 * (B1 + B3);
        let rhs = PoissonOracle { alpha: a, beta: b };
        let g1 = PoissonOracle { alpha: a, beta: b };
        let g3 = PoissonOracle { alpha: a, beta: b };
        NonlocalPoissonProblem::new(
            a,
            b,
            geometry(),
            Rhs::real(move |r, phi| rhs.f(r, phi)),
            RadialDataBox::real(move |r| g1.u(r, B1) + a * g1.u(r, b2)),
            RadialDataBox::real(move |r| g3.u(r, B3) + b * g3.u(r, b2)),
            0.5,
            1.5,
        )
        .unwrap()
    }
}
