use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use nlangle_core::difference_ops::DifferenceOperator;
use nlangle_core::geometry::{AngleGeometry, GridFunction, SectorGrid};
use nlangle_core::pencil::{PoissonPencilProblem, Window};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn equal_angles(b1: f64, spacing: f64, sectors: usize) -> Vec<f64> {
    (0..=sectors).map(|k| b1 + k as f64 * spacing).collect()
}

fn geometry_strategy() -> impl Strategy<Value = AngleGeometry> {
    (2usize..=4, 0.05f64..0.5, 0.2f64..0.95).prop_map(|(r, b1, frac)| {
        let spacing = frac * (TAU - 0.1 - b1) / r as f64;
        AngleGeometry::new(&equal_angles(b1, spacing, r)).unwrap()
    })
}

fn operator_strategy() -> impl Strategy<Value = DifferenceOperator> {
    geometry_strategy().prop_flat_map(|g| {
        let n = 2 * g.sectors() - 1;
        prop::collection::vec(-2.0f64..2.0, n).prop_map(move |c| DifferenceOperator::new(g.clone(), c).unwrap())
    })
}

/// Dense matrix of `apply_on_grid` on all nodes.
fn assembled(op: &DifferenceOperator, grid: &SectorGrid) -> DMatrix<f64> {
    let n = grid.node_count();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        e[k] = Complex64::new(1.0, 0.0);
        let v = op.apply_on_grid(&GridFunction::from_values(grid, e).unwrap()).unwrap();
        for (row, z) in v.values().iter().enumerate() {
            m[(row, k)] = z.re;
        }
    }
    m
}

proptest! {
    #[test]
    fn geometry_round_trips(g in geometry_strategy()) {
        prop_assert_eq!(AngleGeometry::new(g.angles()).unwrap(), g);
    }

    #[test]
    fn shifted_columns_differ_by_multiples_of_the_spacing(g in geometry_strategy(), n_r in 3usize..6, per in 2usize..6) {
        let n_phi = per * g.sectors();
        let grid = SectorGrid::new(g.clone(), 0.5, 1.5, n_r, n_phi).unwrap();
        let m = grid.columns_per_sector();
        for j in 0..=n_phi {
            for p in 0..=g.sectors() {
                if j + p * m <= n_phi {
                    let gap = grid.angle(j + p * m) - grid.angle(j);
                    prop_assert!((gap - p as f64 * g.spacing()).abs() <= 1e-13);
                }
            }
        }
    }

    #[test]
    fn adjoint_matrix_is_the_transpose(op in operator_strategy()) {
        let adjoint = op.adjoint().to_matrix();
        prop_assert_eq!(adjoint.entries(), &op.to_matrix().entries().transpose());
    }

    #[test]
    fn closed_form_inverse(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let det = 1.0 - alpha * beta;
        prop_assume!(det.abs() > 0.05);
        let g = AngleGeometry::two_sector(PI / 6.0, 5.0 * PI / 6.0).unwrap();
        let inv = DifferenceOperator::nonlocal_pair(g, alpha, beta).unwrap().inverse_matrix().unwrap();
        let expected = [[1.0 / det, alpha / det], [beta / det, 1.0 / det]];
        for (i, row) in expected.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                prop_assert!((inv.get(i, j) - e).abs() <= 1e-14 * e.abs().max(1.0), "{} vs {}", inv.get(i, j), e);
            }
        }
    }

    #[test]
    fn symmetric_part_is_definite_iff_coupling_is_small(alpha in -3.0f64..3.0, beta in -3.0f64..3.0) {
        let s = alpha + beta;
        prop_assume!((s.abs() - 2.0).abs() > 1e-6);
        let g = AngleGeometry::two_sector(0.4, 2.9).unwrap();
        let op = DifferenceOperator::nonlocal_pair(g, alpha, beta).unwrap();
        prop_assert_eq!(op.symmetric_part_positive_definite(), s.abs() < 2.0);
    }

    #[test]
    fn angular_and_radial_differences_commute(op in operator_strategy(), per in 2usize..5, n_r in 3usize..6, seed in any::<u64>()) {
        let g = op.geometry().clone();
        let n_phi = per * g.sectors();
        let grid = SectorGrid::new(g, 0.5, 1.5, n_r, n_phi).unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let mut u = GridFunction::zeros(&grid);
        // zero on both angular boundary columns
        for i in 0..grid.rows() {
            for j in 1..n_phi {
                u.set(i, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            }
        }
        let zero = Complex64::new(0.0, 0.0);
        let dphi = |v: &GridFunction| {
            let mut out = GridFunction::zeros(&grid);
            for i in 0..grid.rows() {
                for j in 0..=n_phi {
                    let next = if j < n_phi { v.get(i, j + 1) } else { zero };
                    out.set(i, j, next - v.get(i, j));
                }
            }
            out
        };
        let dr = |v: &GridFunction| {
            let mut out = GridFunction::zeros(&grid);
            for i in 0..grid.n_r() {
                for j in 0..=n_phi {
                    out.set(i, j, v.get(i + 1, j) - v.get(i, j));
                }
            }
            out
        };
        let ru = op.apply_on_grid(&u).unwrap();
        // the forward difference of R u on the last column reads past the grid
        let agree = |a: &GridFunction, b: &GridFunction, cols: usize| {
            let mut m = 0.0f64;
            let mut scale = 1.0f64;
            for i in 0..grid.rows() {
                for j in 0..cols {
                    m = m.max((a.get(i, j) - b.get(i, j)).norm());
                    scale = scale.max(a.get(i, j).norm()).max(b.get(i, j).norm());
                }
            }
            m <= 1e-13 * scale
        };
        prop_assert!(agree(&op.apply_on_grid(&dphi(&u)).unwrap(), &dphi(&ru), n_phi));
        prop_assert!(agree(&op.apply_on_grid(&dr(&u)).unwrap(), &dr(&ru), n_phi + 1));
    }

    #[test]
    fn determinant_factorizes(alpha in -1.5f64..1.5, beta in -1.5f64..1.5, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let p = PoissonPencilProblem::new(alpha, beta, 0.3, 2.8).unwrap();
        let l = Complex64::new(re, im);
        let d = p.d();
        let f = -2.0 * (l * d).sinh() * (2.0 * (l * d).cosh() + alpha + beta) * (-2.0 * re.abs() * d).exp();
        prop_assert!((p.characteristic_value(l) - f).norm() <= 1e-10 * p.characteristic_scale(l));
    }
}

#[test]
fn small_coupling_always_inverts() {
    let g = AngleGeometry::two_sector(PI / 6.0, 5.0 * PI / 6.0).unwrap();
    let mut checked = 0;
    for i in 0..=120 {
        for j in 0..=120 {
            let (alpha, beta) = (-3.0 + 0.05 * i as f64, -3.0 + 0.05 * j as f64);
            if (alpha + beta).abs() < 2.0 {
                let op = DifferenceOperator::nonlocal_pair(g.clone(), alpha, beta).unwrap();
                assert!(op.inverse_matrix().is_ok(), "alpha = {alpha}, beta = {beta}");
                checked += 1;
            }
        }
    }
    assert!(checked > 5000);
}

#[test]
fn assembled_operator_acts_as_the_matrix_off_the_rays() {
    let cases: Vec<(Vec<f64>, Vec<f64>)> = vec![
        (equal_angles(PI / 6.0, PI / 3.0, 2), vec![-0.4, 1.0, -0.7]),
        (equal_angles(0.3, 1.4, 2), vec![0.9, 2.0, 0.3]),
        (equal_angles(0.2, 1.1, 3), vec![0.1, -0.3, 1.5, 0.4, 0.2]),
        (equal_angles(0.1, 0.9, 4), vec![0.05, 0.1, -0.2, 2.0, 0.3, 0.15, -0.1]),
    ];
    for (angles, coef) in cases {
        let g = AngleGeometry::new(&angles).unwrap();
        let r = g.sectors();
        let op = DifferenceOperator::new(g.clone(), coef).unwrap();
        for n_phi in (r..=16).filter(|n| n % r == 0 && n / r >= 2) {
            let grid = SectorGrid::new(g.clone(), 0.5, 1.5, 3, n_phi).unwrap();
            let m = grid.columns_per_sector();
            let a = assembled(&op, &grid);
            let off: Vec<usize> = (0..grid.rows())
                .flat_map(|i| (0..=n_phi).filter(|j| j % m != 0).map(move |j| (i, j)))
                .map(|(i, j)| grid.index(i, j))
                .collect();
            let on: Vec<usize> = (0..grid.node_count()).filter(|k| !off.contains(k)).collect();
            // off-ray nodes do not mix with ray nodes
            for &x in &off {
                for &y in &on {
                    assert_eq!(a[(x, y)], 0.0);
                    assert_eq!(a[(y, x)], 0.0);
                }
            }
            let block = DMatrix::from_fn(off.len(), off.len(), |x, y| a[(off[x], off[y])]);
            // QR iterations stall on eigenvalues of this multiplicity, so count
            // null dimensions of B - μ instead; every listed μ is simple in R_1
            let spec = op.spectrum();
            let per_value = grid.rows() * (m - 1);
            let scale = block.norm();
            let mut total = 0;
            for mu in &spec {
                assert!(spec.iter().filter(|z| (*z - mu).norm() < 1e-6).count() == 1, "{mu} is repeated");
                let shifted = DMatrix::from_fn(off.len(), off.len(), |x, y| {
                    Complex64::new(block[(x, y)], 0.0) - if x == y { *mu } else { Complex64::new(0.0, 0.0) }
                });
                let sv = shifted.singular_values();
                let null = sv.iter().filter(|&&v| v <= 1e-10 * scale).count();
                assert_eq!(null, per_value, "R = {r}, n_phi = {n_phi}, mu = {mu}: {sv:?}");
                total += null;
            }
            assert_eq!(total, off.len());
        }
    }
}

fn closed_in(set: &[Complex64], window: &Window) -> Vec<Complex64> {
    set.iter().copied().filter(|z| window.contains(*z)).collect()
}

#[test]
fn closed_form_and_numeric_agree_on_several_windows() {
    let mut rng = StdRng::seed_from_u64(7);
    let windows = [
        Window::new(-1.0, 1.0, -4.0, 4.0).unwrap(),
        Window::new(-0.5, 0.5, 0.3, 3.7).unwrap(),
        Window::new(-2.0, 2.0, -6.1, 1.1).unwrap(),
        Window::new(0.2, 1.0, -4.0, 4.0).unwrap(),
        Window::new(-0.05, 0.3, -2.3, -0.2).unwrap(),
    ];
    for _ in 0..20 {
        let s: f64 = rng.gen_range(-1.8..1.8);
        let alpha: f64 = rng.gen_range(-2.0..2.0);
        let p = PoissonPencilProblem::new(alpha, s - alpha, PI / 6.0, 5.0 * PI / 6.0).unwrap();
        for w in &windows {
            let closed = closed_in(&p.eigenvalues_closed_form(w.im_min - 1.0, w.im_max + 1.0).unwrap().values, w);
            let numeric = p.eigenvalues_numeric(w).unwrap().values;
            assert_eq!(closed.len(), numeric.len(), "s = {s}, window {w:?}");
            for (a, b) in closed.iter().zip(&numeric) {
                assert!((a - b).norm() <= 1e-8, "s = {s}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn spectra_are_closed_under_negation() {
    let mut rng = StdRng::seed_from_u64(11);
    let w = Window::new(-1.0, 1.0, -5.0, 5.0).unwrap();
    for k in 0..12 {
        let s = if k < 3 { 0.0 } else { rng.gen_range(-1.95..1.95) };
        let alpha: f64 = rng.gen_range(-1.0..1.0);
        let p = PoissonPencilProblem::new(alpha, s - alpha, 0.4, 0.4 + rng.gen_range(1.0..5.0)).unwrap();
        let sets = [p.eigenvalues_closed_form(-5.0, 5.0).unwrap().values, p.eigenvalues_numeric(&w).unwrap().values];
        for set in sets {
            for z in &set {
                assert!(set.iter().any(|y| (y + z).norm() <= 1e-8), "s = {s}: -{z} missing");
            }
        }
    }
}

proptest! {
    #[test]
    fn spectrum_matches_trace_and_determinant(g in geometry_strategy(), c in prop::collection::vec(-2i32..=2, 7)) {
        // integer coefficients make repeated and defective spectra common
        let n = 2 * g.sectors() - 1;
        let coef: Vec<f64> = c[..n].iter().map(|&x| x as f64).collect();
        let op = DifferenceOperator::new(g, coef).unwrap();
        let m = op.to_matrix();
        let ev = op.spectrum();
        prop_assert_eq!(ev.len(), m.dim());
        let trace: f64 = (0..m.dim()).map(|i| m.get(i, i)).sum();
        let sum: Complex64 = ev.iter().sum();
        let prod: Complex64 = ev.iter().product();
        prop_assert!((sum - trace).norm() <= 1e-8 * (1.0 + trace.abs()));
        prop_assert!((prod - m.determinant()).norm() <= 1e-6 * (1.0 + m.determinant().abs()));
    }
}
