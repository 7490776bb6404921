//! Manufactured solutions with analytic right-hand sides.

use std::f64::consts::PI;

/// `η(r) = (1 - t²)^4` for `t = (2r - lo - hi) / (hi - lo)` in `(-1, 1)`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
}

impl Bump {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo < hi, "empty bump support");
        Self { lo, hi }
    }

    /// `(η, η', η'')` at `r`.
    pub fn eval(&self, r: f64) -> (f64, f64, f64) {
        let c = 2.0 / (self.hi - self.lo);
        let t = c * r - (self.lo + self.hi) / (self.hi - self.lo);
        if t.abs() >= 1.0 {
            return (0.0, 0.0, 0.0);
        }
        let q = 1.0 - t * t;
        let g = q.powi(4);
        let g1 = -8.0 * t * q.powi(3);
        let g2 = -8.0 * q.powi(3) + 48.0 * t * t * q * q;
        (g, c * g1, c * c * g2)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.eval(r).0
    }
}

/// `R_K w* = η(r) p(φ - b_1)` with `p = c + k cos(πψ/L) + sin(πψ/L)`, the
/// constants chosen so that `w*` vanishes on `γ_1` and `γ_3`.
///
/// For `α = β = 0` this is `w* = sin(π(φ - b_1)/L) η(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedDd {
    pub alpha: f64,
    pub beta: f64,
    pub b1: f64,
    pub b3: f64,
    pub bump: Bump,
    c: f64,
    k: f64,
}

impl ManufacturedDd {
    /// Needs `α + β ≠ -2` and `αβ ≠ 1`.
    pub fn new(alpha: f64, beta: f64, b1: f64, b3: f64, bump: Bump) -> Self {
        let s = alpha + beta;
        let c = -s / (2.0 + s);
        let k = -(alpha - beta) / (2.0 + s);
        Self { alpha, beta, b1, b3, bump, c, k }
    }

    fn profile(&self, phi: f64) -> (f64, f64) {
        let q = PI / (self.b3 - self.b1);
        let (sn, cs) = (q * (phi - self.b1)).sin_cos();
        (self.c + self.k * cs + sn, -q * q * (self.k * cs + sn))
    }

    /// `R_K w*`.
    pub fn v(&self, r: f64, phi: f64) -> f64 {
        self.bump.value(r) * self.profile(phi).0
    }

    /// `(-Δ + 1) R_K w*`.
    pub fn rhs(&self, r: f64, phi: f64) -> f64 {
        let (e, e1, e2) = self.bump.eval(r);
        let (p, p2) = self.profile(phi);
        -(e2 * p + e1 * p / r + e * p2 / (r * r)) + e * p
    }

    /// `w* = R_K^{-1} v*`, sector by sector through `R_1^{-1}`.
    pub fn w(&self, r: f64, phi: f64) -> f64 {
        let d = 0.5 * (self.b3 - self.b1);
        let det = 1.0 - self.alpha * self.beta;
        if phi - self.b1 <= d {
            (self.v(r, phi) + self.alpha * self.v(r, phi + d)) / det
        } else {
            (self.beta * self.v(r, phi - d) + self.v(r, phi)) / det
        }
    }
}

/// `u*(r, φ) = r² cos φ η(r)` with matching nonlocal boundary data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedPoisson {
    pub alpha: f64,
    pub beta: f64,
    pub b1: f64,
    pub b3: f64,
    pub bump: Bump,
}

impl ManufacturedPoisson {
    pub fn new(alpha: f64, beta: f64, b1: f64, b3: f64, bump: Bump) -> Self {
        Self { alpha, beta, b1, b3, bump }
    }

    pub fn u(&self, r: f64, phi: f64) -> f64 {
        r * r * phi.cos() * self.bump.value(r)
    }

    /// `(-Δ + 1) u*`.
    pub fn rhs(&self, r: f64, phi: f64) -> f64 {
        let (e, e1, e2) = self.bump.eval(r);
        (-(3.0 * e + 5.0 * r * e1 + r * r * e2) + r * r * e) * phi.cos()
    }

    fn b2(&self) -> f64 {
        0.5 * (self.b1 + self.b3)
    }

    pub fn g1(&self, r: f64) -> f64 {
        self.u(r, self.b1) + self.alpha * self.u(r, self.b2())
    }

    pub fn g3(&self, r: f64) -> f64 {
        self.u(r, self.b3) + self.beta * self.u(r, self.b2())
    }
}
