use std::f64::consts::PI;
use std::sync::Arc;

use nlangle_core::green_check::*;
use num_complex::Complex64;

fn cfg(alpha: f64, chi: f64) -> GreenConfig {
    GreenConfig::new(PI / 6.0, PI / 2.0, 5.0 * PI / 6.0, alpha, chi)
}

fn pair(name: &str) -> GreenTestPair {
    GreenTestPair::library().into_iter().find(|(n, _)| *n == name).unwrap().1
}

#[test]
fn dirichlet_formula_holds_at_order_twelve() {
    for (name, p) in GreenTestPair::library() {
        for chi in [1.0, 1.5, 2.0] {
            let rep = green_report(GreenKind::Dirichlet, &cfg(0.7, chi), &p).unwrap();
            assert!(rep.residual < 1e-8 * rep.scale, "{name}, chi = {chi}: {:e} / {:e}", rep.residual, rep.scale);
        }
    }
}

#[test]
fn neumann_formula_holds_at_order_twelve() {
    for (name, p) in GreenTestPair::library() {
        for chi in [1.0, 1.5, 2.0] {
            let rep = green_report(GreenKind::Neumann, &cfg(0.4, chi), &p).unwrap();
            assert!(rep.residual < 1e-8 * rep.scale, "{name}, chi = {chi}: {:e} / {:e}", rep.residual, rep.scale);
        }
    }
}

#[test]
fn residual_drops_when_order_doubles() {
    for name in ["poly-power", "trig-power", "real-mixed"] {
        let p = pair(name);
        for kind in [GreenKind::Dirichlet, GreenKind::Neumann] {
            let lo = green_report(kind, &cfg(0.4, 2.0).with_order(8).with_panels(1, 1), &p).unwrap();
            let hi = green_report(kind, &cfg(0.4, 2.0).with_order(16).with_panels(1, 1), &p).unwrap();
            assert!(hi.residual * 10.0 <= lo.residual, "{name} {kind:?}: {:e} -> {:e}", lo.residual, hi.residual);
        }
    }
}

#[test]
fn infinitely_smooth_bump_converges_under_refinement() {
    let c = Complex64::new;
    let u = Separable::new(Radial::Bump { lo: 0.6, hi: 1.2 }, Angular::Trig(vec![(1.0, c(1.0, 0.0), c(0.0, 0.5))]));
    let v = Separable::new(Radial::Power(1.5), Angular::Trig(vec![(2.0, c(0.5, 0.0), c(0.0, 1.0))]));
    let w = Separable::new(Radial::Poly(vec![c(1.0, 0.0), c(0.0, 1.0)]), Angular::Poly(vec![c(0.0, 0.0), c(1.0, 0.0)]));
    let p = GreenTestPair::new(Arc::new(u), Arc::new(v), Arc::new(w), (0.6, 1.2));
    let mut last = f64::INFINITY;
    for (order, panels) in [(8, 4), (16, 8), (24, 16)] {
        let rep = green_report(GreenKind::Dirichlet, &cfg(0.7, 1.5).with_order(order).with_panels(panels, 4), &p).unwrap();
        let rel = rep.residual / rep.scale;
        assert!(rel < last / 10.0, "order {order}: {rel:e} after {last:e}");
        last = rel;
    }
    assert!(last < 1e-8);
}

#[test]
fn residual_scales_linearly_in_u() {
    for (name, p) in GreenTestPair::library() {
        let base = green_report(GreenKind::Dirichlet, &cfg(0.7, 1.5), &p).unwrap();
        for a in [2.0, -0.37, 1e3] {
            let scaled = green_report(GreenKind::Dirichlet, &cfg(0.7, 1.5), &p.scaled_u(Complex64::new(a, 0.0))).unwrap();
            let expected = a.abs() * base.residual;
            assert!(
                (scaled.residual - expected).abs() <= 1e-13 * a.abs() * base.scale,
                "{name}, a = {a}: {:e} vs {expected:e}",
                scaled.residual
            );
            assert!((scaled.scale - a.abs() * base.scale).abs() <= 1e-13 * a.abs() * base.scale);
        }
    }
}

#[test]
fn conjugating_v_conjugates_every_term() {
    let p = pair("real-mixed");
    for kind in [GreenKind::Dirichlet, GreenKind::Neumann] {
        let a = green_report(kind, &cfg(0.7, 2.0), &p).unwrap();
        let b = green_report(kind, &cfg(0.7, 2.0), &p.conjugated_v()).unwrap();
        for (x, y) in a.lhs.iter().chain(&a.rhs).zip(b.lhs.iter().chain(&b.rhs)) {
            assert!((x.1.conj() - y.1).norm() <= 1e-13 * a.scale, "{}: {:?} vs {:?}", x.0, x.1, y.1);
        }
        assert!((a.residual - b.residual).abs() <= 1e-13 * a.scale);
    }
}

#[test]
fn unit_expansion_reduces_to_the_plain_pairing() {
    // χ_12 = 1: the γ_2 nonlocal term is α ∫ U(r, b_2) (1/r) ∂_φ V̄_1(r, b_1) dr
    let p = pair("trig-power");
    let c = cfg(0.7, 1.0);
    let with = green_report(GreenKind::Dirichlet, &c, &p).unwrap();
    let without = green_report(GreenKind::Dirichlet, &cfg(0.0, 1.0), &p).unwrap();
    let g = GaussLegendre::new(12);
    let direct: Complex64 = g
        .composite(p.support.0, p.support.1, 8)
        .iter()
        .map(|&(r, w)| p.u.eval(r, c.b2).value * (p.v1.eval(r, c.b1).dphi / r).conj() * (0.7 * w))
        .sum();
    let term = |rep: &GreenReport| rep.rhs.iter().find(|t| t.0 == "gamma2").unwrap().1;
    assert!((term(&with) - term(&without) - direct).norm() < 1e-13 * with.scale);
}
