//! Quadrature check of two nonlocal Green formulas for `-Δ` in the angle
//! `K = {b_1 < φ < b_3}` split by `γ_2` into `K_1`, `K_2`.
//!
//! Dirichlet-type problem: `U|γ_1 + α U(χ_12 r, φ + φ_12)|γ_1 = g_1`,
//! `U|γ_3 = g_3`. Neumann-type problem: `∂U/∂n_1|γ_1 + α ∂_r U(χ_12 r, φ + φ_12)|γ_1 = g_1`,
//! `∂U/∂n_3|γ_3 = g_3`. Both Green formulas pair `U` with `(V_1, V_2)`;
//! the adjoint side carries `χ'_21 = 1/χ_12` and `φ'_21 = -φ_12`.
//!
//! Normals: `∂/∂n_1 = ∂/∂n_2 = (1/r) ∂_φ`, `∂/∂n_3 = -(1/r) ∂_φ`.

pub mod functions;
pub mod quadrature;

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
pub use functions::{Angular, PointValue, Radial, Separable, SumOf, TestFunction};
pub use quadrature::GaussLegendre;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `U` compactly supported in `support`, and `V_t` smooth on `K̄_t`.
#[derive(Clone)]
pub struct GreenTestPair {
    pub u: Arc<dyn TestFunction>,
    pub v1: Arc<dyn TestFunction>,
    pub v2: Arc<dyn TestFunction>,
    /// Radial support of `U`.
    pub support: (f64, f64),
}

impl GreenTestPair {
    pub fn new(u: Arc<dyn TestFunction>, v1: Arc<dyn TestFunction>, v2: Arc<dyn TestFunction>, support: (f64, f64)) -> Self {
        Self { u, v1, v2, support }
    }

    /// The built-in pairs: `(1 - t²)^4` bumps times trigonometric or
    /// polynomial factors in `φ` for `U`, non-compact smooth `V_t` that
    /// differ across `γ_2`.
    ///
    /// `U` is `C³`, enough for both formulas. A piecewise polynomial keeps the
    /// Gauss rules on the support-aligned panels spectrally accurate, which
    /// the `exp(-1/(1 - t²))` bump of [`Radial::Bump`] does not allow.
    pub fn library() -> Vec<(&'static str, GreenTestPair)> {
        let c = Complex64::new;
        let support = (0.6, 1.2);
        let bump = Radial::PolyBump { lo: support.0, hi: support.1, power: 4 };
        let trig_u = Arc::new(Separable::new(
            bump.clone(),
            Angular::Trig(vec![(0.0, c(0.5, 0.0), ZERO), (1.0, c(1.0, 0.0), c(0.0, 0.4)), (2.0, c(-0.3, 0.2), c(0.7, 0.0))]),
        ));
        let poly_u = Arc::new(SumOf(vec![
            Separable::new(bump.clone(), Angular::Poly(vec![c(1.0, 0.0), c(-0.8, 0.0), c(0.3, 0.0)])),
            Separable::new(
                Radial::PolyBump { lo: support.0, hi: support.1, power: 5 },
                Angular::Trig(vec![(3.0, c(0.25, 0.0), c(0.0, -0.5))]),
            ),
        ]));
        let real_u = Arc::new(Separable::new(bump, Angular::Trig(vec![(1.0, c(1.0, 0.0), c(0.6, 0.0)), (2.0, c(0.0, 0.0), c(-0.4, 0.0))])));
        let v_poly1 = Arc::new(Separable::new(
            Radial::Poly(vec![c(1.0, 0.0), c(0.5, -0.3), c(0.0, 0.2)]),
            Angular::Trig(vec![(1.0, c(1.0, 0.0), c(0.2, 0.0)), (2.0, c(0.0, 0.3), ZERO)]),
        ));
        let v_poly2 = Arc::new(Separable::new(
            Radial::Poly(vec![c(-0.4, 0.1), c(1.0, 0.0), c(0.1, 0.0)]),
            Angular::Poly(vec![c(0.2, 0.0), c(0.5, -0.5), c(-0.1, 0.0)]),
        ));
        let v_power1 = Arc::new(SumOf(vec![
            Separable::new(Radial::Power(1.5), Angular::Trig(vec![(1.5, c(1.0, 0.0), c(0.0, 1.0))])),
            Separable::new(Radial::Poly(vec![c(0.3, 0.0)]), Angular::Poly(vec![ZERO, c(0.0, 1.0)])),
        ]));
        let v_power2 = Arc::new(Separable::new(Radial::Power(-0.5), Angular::Trig(vec![(0.5, c(0.0, -1.0), c(2.0, 0.0))])));
        vec![
            ("trig-poly", GreenTestPair::new(trig_u.clone(), v_poly1.clone(), v_poly2.clone(), support)),
            ("poly-power", GreenTestPair::new(poly_u, v_power1.clone(), v_power2.clone(), support)),
            ("trig-power", GreenTestPair::new(trig_u, v_power1, v_poly2, support)),
            ("real-mixed", GreenTestPair::new(real_u, v_poly1, v_power2, support)),
        ]
    }

    /// Same pair with `U` multiplied by `a`.
    pub fn scaled_u(&self, a: Complex64) -> Self {
        Self { u: Arc::new(functions::Scaled(a, self.u.clone())), ..self.clone() }
    }

    /// Same pair with `V_1`, `V_2` conjugated.
    pub fn conjugated_v(&self) -> Self {
        Self {
            v1: Arc::new(functions::Conjugate(self.v1.clone())),
            v2: Arc::new(functions::Conjugate(self.v2.clone())),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenConfig {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub alpha: f64,
    pub chi12: f64,
    pub phi12: f64,
    /// Gauss points per panel.
    pub order: usize,
    pub radial_panels: usize,
    pub angular_panels: usize,
    /// Radial window that must contain the support of `U` and of `U(χ_12 r, ·)`.
    /// Radial panels are laid on those supports, so the kinks of piecewise
    /// defined bumps sit on panel ends.
    pub window: (f64, f64),
}

impl GreenConfig {
    /// Rays `b_1 < b_2 < b_3`, `φ_12 = b_2 - b_1`, order 12 on 8 × 8 panels, window `[0.2, 3]`.
    pub fn new(b1: f64, b2: f64, b3: f64, alpha: f64, chi12: f64) -> Self {
        Self { b1, b2, b3, alpha, chi12, phi12: b2 - b1, order: 12, radial_panels: 8, angular_panels: 8, window: (0.2, 3.0) }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_panels(mut self, radial: usize, angular: usize) -> Self {
        self.radial_panels = radial;
        self.angular_panels = angular;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(0.0 < self.b1 && self.b1 < self.b2 && self.b2 < self.b3 && self.b3 < std::f64::consts::TAU) {
            return Err(Error::InvalidParameter(format!("need 0 < b1 < b2 < b3 < 2π, got {}, {}, {}", self.b1, self.b2, self.b3)));
        }
        if !(self.chi12 > 0.0 && self.chi12.is_finite()) {
            return Err(Error::InvalidParameter(format!("chi12 = {} must be positive", self.chi12)));
        }
        if (self.b1 + self.phi12 - self.b2).abs() >= 1e-12 {
            return Err(Error::InvalidParameter(format!("b1 + phi12 = {} differs from b2 = {}", self.b1 + self.phi12, self.b2)));
        }
        if self.order == 0 || self.radial_panels == 0 || self.angular_panels == 0 {
            return Err(Error::InvalidParameter("quadrature order and panel counts must be positive".into()));
        }
        if !(0.0 < self.window.0 && self.window.0 < self.window.1) {
            return Err(Error::InvalidRadii { r_min: self.window.0, r_max: self.window.1 });
        }
        Ok(())
    }

    fn check_support(&self, pair: &GreenTestPair) -> Result<()> {
        let (lo, hi) = pair.support;
        let (r_lo, r_hi) = self.window;
        if !(r_lo < lo && hi < r_hi) {
            return Err(Error::SupportViolation(format!("support [{lo}, {hi}] not inside window ({r_lo}, {r_hi})")));
        }
        let (slo, shi) = (lo / self.chi12, hi / self.chi12);
        if !(r_lo <= slo && shi <= r_hi) {
            return Err(Error::SupportViolation(format!(
                "rescaled support [{slo}, {shi}] sampled through chi12 = {} leaves the window",
                self.chi12
            )));
        }
        Ok(())
    }
}

/// Which of the two nonlocal problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreenReport {
    pub lhs: Vec<(&'static str, Complex64)>,
    pub rhs: Vec<(&'static str, Complex64)>,
    /// `|LHS - RHS|`.
    pub residual: f64,
    /// Sum of all term magnitudes.
    pub scale: f64,
}

impl GreenReport {
    pub fn max_term(&self) -> f64 {
        self.lhs.iter().chain(&self.rhs).map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }
}

struct Rules {
    gauss: GaussLegendre,
    panels: usize,
    angular_panels: usize,
}

impl Rules {
    fn new(cfg: &GreenConfig) -> Self {
        Self { gauss: GaussLegendre::new(cfg.order), panels: cfg.radial_panels, angular_panels: cfg.angular_panels }
    }

    /// Radial rule on `[lo, hi]`; integrands vanish outside the support they are built on.
    fn radial(&self, (lo, hi): (f64, f64)) -> Vec<(f64, f64)> {
        self.gauss.composite(lo, hi, self.panels)
    }

    fn sector(&self, support: (f64, f64), a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        let ang = self.gauss.composite(a, b, self.angular_panels);
        let mut pts = Vec::new();
        for (r, wr) in self.radial(support) {
            for &(phi, wp) in &ang {
                pts.push((r, phi, wr * wp * r));
            }
        }
        pts
    }
}

fn integrate(points: &[(f64, f64)], f: impl Fn(f64) -> Complex64) -> Complex64 {
    points.iter().map(|&(r, w)| f(r) * w).sum()
}

pub fn green_report(kind: GreenKind, cfg: &GreenConfig, pair: &GreenTestPair) -> Result<GreenReport> {
    cfg.validate()?;
    cfg.check_support(pair)?;
    let q = Rules::new(cfg);
    let (b1, b2, b3) = (cfg.b1, cfg.b2, cfg.b3);
    let shifted = b1 + cfg.phi12;
    let back = b2 - cfg.phi12;
    let chi = cfg.chi12;
    let chi_p = 1.0 / chi;
    let alpha = cfg.alpha;
    let u = |r, phi| pair.u.eval(r, phi);
    let v1 = |r, phi| pair.v1.eval(r, phi).conj();
    let v2 = |r, phi| pair.v2.eval(r, phi).conj();

    // Σ_t ∫_{K_t} (-ΔU) V̄_t and Σ_t ∫_{K_t} U (-ΔV̄_t)
    let mut area_l = ZERO;
    let mut area_r = ZERO;
    let own = pair.support;
    let scaled = (own.0 / cfg.chi12, own.1 / cfg.chi12);
    let on_own = q.radial(own);
    let on_scaled = q.radial(scaled);
    for (t, pts) in [q.sector(own, b1, b2), q.sector(own, b2, b3)].iter().enumerate() {
        for &(r, phi, w) in pts {
            let pu = u(r, phi);
            if pu == PointValue::ZERO {
                continue;
            }
            let pv = if t == 0 { v1(r, phi) } else { v2(r, phi) };
            area_l -= pu.laplacian * pv.value * w;
            area_r -= pu.value * pv.laplacian * w;
        }
    }
    let n = |p: PointValue, r: f64| p.dphi / r;
    let gamma2_lhs = integrate(&on_own, |r| n(u(r, b2), r) * (v1(r, b2).value - v2(r, b2).value));
    let gamma2_jump = |r: f64| n(v1(r, b2), r) - n(v2(r, b2), r);

    let report = match kind {
        GreenKind::Dirichlet => {
            let l_g1 = integrate(&on_own, |r| u(r, b1).value * n(v1(r, b1), r))
                + integrate(&on_scaled, |r| u(chi * r, shifted).value * alpha * n(v1(r, b1), r));
            let l_g3 = integrate(&on_own, |r| u(r, b3).value * -n(v2(r, b3), r));
            let r_g1 = integrate(&on_own, |r| n(u(r, b1), r) * v1(r, b1).value);
            let r_g3 = integrate(&on_own, |r| -n(u(r, b3), r) * v2(r, b3).value);
            let r_g2 = integrate(&on_own, |r| {
                let rr = chi_p * r;
                u(r, b2).value * (gamma2_jump(r) + n(v1(rr, back), rr) * (alpha * chi_p))
            });
            GreenReport {
                lhs: vec![("area", area_l), ("gamma1", l_g1), ("gamma3", l_g3), ("gamma2", gamma2_lhs)],
                rhs: vec![("area", area_r), ("gamma1", r_g1), ("gamma3", r_g3), ("gamma2", r_g2)],
                residual: 0.0,
                scale: 0.0,
            }
        }
        GreenKind::Neumann => {
            let l_g1 = -integrate(&on_own, |r| n(u(r, b1), r) * v1(r, b1).value)
                - integrate(&on_scaled, |r| u(chi * r, shifted).dr * alpha * v1(r, b1).value);
            let l_g3 = integrate(&on_own, |r| -(-n(u(r, b3), r)) * v2(r, b3).value);
            let r_g1 = integrate(&on_own, |r| -u(r, b1).value * n(v1(r, b1), r));
            let r_g3 = integrate(&on_own, |r| -u(r, b3).value * -n(v2(r, b3), r));
            let r_g2 = integrate(&on_own, |r| {
                let rr = chi_p * r;
                u(r, b2).value * (gamma2_jump(r) + v1(rr, back).dr * (alpha * chi_p * chi_p))
            });
            GreenReport {
                lhs: vec![("area", area_l), ("gamma1", l_g1), ("gamma3", l_g3), ("gamma2", gamma2_lhs)],
                rhs: vec![("area", area_r), ("gamma1", r_g1), ("gamma3", r_g3), ("gamma2", r_g2)],
                residual: 0.0,
                scale: 0.0,
            }
        }
    };
    let lhs: Complex64 = report.lhs.iter().map(|t| t.1).sum();
    let rhs: Complex64 = report.rhs.iter().map(|t| t.1).sum();
    let scale = report.lhs.iter().chain(&report.rhs).map(|t| t.1.norm()).sum();
    Ok(GreenReport { residual: (lhs - rhs).norm(), scale, ..report })
}

/// `|LHS - RHS|` of the Green formula for the Dirichlet-type problem.
pub fn green_residual_dirichlet(cfg: &GreenConfig, pair: &GreenTestPair) -> Result<f64> {
    Ok(green_report(GreenKind::Dirichlet, cfg, pair)?.residual)
}

/// `|LHS - RHS|` of the Green formula for the Neumann-type problem.
pub fn green_residual_neumann(cfg: &GreenConfig, pair: &GreenTestPair) -> Result<f64> {
    Ok(green_report(GreenKind::Neumann, cfg, pair)?.residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(alpha: f64, chi: f64) -> GreenConfig {
        GreenConfig::new(PI / 6.0, PI / 2.0, 5.0 * PI / 6.0, alpha, chi)
    }

    #[test]
    fn zero_u_gives_exact_zero() {
        let (_, pair) = &GreenTestPair::library()[0];
        let zero = GreenTestPair::new(Arc::new(functions::Zero), pair.v1.clone(), pair.v2.clone(), pair.support);
        assert_eq!(green_residual_dirichlet(&cfg(0.7, 1.5), &zero).unwrap(), 0.0);
        assert_eq!(green_residual_neumann(&cfg(0.4, 2.0), &zero).unwrap(), 0.0);
    }

    #[test]
    fn library_pairs_satisfy_both_formulas() {
        for (name, pair) in GreenTestPair::library() {
            for chi in [1.0, 1.5, 2.0] {
                for kind in [GreenKind::Dirichlet, GreenKind::Neumann] {
                    let rep = green_report(kind, &cfg(0.7, chi), &pair).unwrap();
                    assert!(rep.residual < 1e-8 * rep.scale, "{name} {kind:?} chi = {chi}: {} vs {}", rep.residual, rep.scale);
                }
            }
        }
    }

    #[test]
    fn support_outside_window_is_rejected() {
        let (_, pair) = &GreenTestPair::library()[0];
        let c = cfg(0.7, 4.0);
        assert!(matches!(green_residual_dirichlet(&c, pair), Err(Error::SupportViolation(_))));
        let mut c = cfg(0.7, 1.0);
        c.window = (0.7, 3.0);
        assert!(matches!(green_residual_neumann(&c, pair), Err(Error::SupportViolation(_))));
    }

    #[test]
    fn inconsistent_rotation_is_rejected() {
        let (_, pair) = &GreenTestPair::library()[0];
        let mut c = cfg(0.7, 1.0);
        c.phi12 += 1e-6;
        assert!(matches!(green_residual_dirichlet(&c, pair), Err(Error::InvalidParameter(_))));
    }
}
