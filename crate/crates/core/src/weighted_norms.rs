//! Discrete weighted norms on a [`SectorGrid`]:
//!
//! ```text
//! ‖u‖²_{E_a^l} = Σ_{|α| ≤ l} ∫ r^{2a} (r^{2(|α| - l)} + 1) |D^α u|²,
//! ‖u‖²_{H_a^l} = Σ_{|α| ≤ l} ∫ r^{2(a - l + |α|)} |D^α u|²,
//! ```
//!
//! with Cartesian derivatives built from second-order differences of the
//! polar samples and the midpoint rule on grid cells.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::GridFunction;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    a: f64,
    l: u32,
}

impl WeightParams {
    pub fn new(a: f64, l: u32) -> Result<Self> {
        if l > 2 {
            return Err(Error::UnsupportedOrder(l));
        }
        if !a.is_finite() {
            return Err(Error::InvalidParameter(format!("weight exponent a = {a}")));
        }
        Ok(Self { a, l })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn l(&self) -> u32 {
        self.l
    }
}

/// Boundary ray carrying a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ray {
    /// `φ = b_1`.
    First,
    /// `φ = b_{R+1}`.
    Last,
}

/// Nodal derivatives of a grid function, Cartesian, grouped by order.
#[derive(Debug, Clone)]
pub struct CartesianDerivatives {
    pub value: Vec<Complex64>,
    /// `(∂_x u, ∂_y u)`.
    pub first: Vec<[Complex64; 2]>,
    /// `(∂_xx u, ∂_xy u, ∂_yy u)`.
    pub second: Vec<[Complex64; 3]>,
}

/// Second-order first derivative along a line of samples, one-sided at the ends.
fn diff1(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n - 1 {
        d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
    }
    d[0] = (f[0] * -3.0 + f[1] * 4.0 - f[2]) / (2.0 * h);
    d[n - 1] = (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) / (2.0 * h);
    d
}

/// Second-order second derivative, four-point one-sided at the ends.
fn diff2(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let h2 = h * h;
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n - 1 {
        d[k] = (f[k + 1] - f[k] * 2.0 + f[k - 1]) / h2;
    }
    d[0] = (f[0] * 2.0 - f[1] * 5.0 + f[2] * 4.0 - f[3]) / h2;
    d[n - 1] = (f[n - 1] * 2.0 - f[n - 2] * 5.0 + f[n - 3] * 4.0 - f[n - 4]) / h2;
    d
}

fn along_r(u: &[Complex64], rows: usize, cols: usize, h: f64, op: fn(&[Complex64], f64) -> Vec<Complex64>) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); u.len()];
    let mut line = vec![Complex64::new(0.0, 0.0); rows];
    for j in 0..cols {
        for i in 0..rows {
            line[i] = u[i * cols + j];
        }
        for (i, v) in op(&line, h).into_iter().enumerate() {
            out[i * cols + j] = v;
        }
    }
    out
}

fn along_phi(u: &[Complex64], rows: usize, cols: usize, h: f64, op: fn(&[Complex64], f64) -> Vec<Complex64>) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(u.len());
    for i in 0..rows {
        out.extend(op(&u[i * cols..(i + 1) * cols], h));
    }
    out
}

pub fn cartesian_derivatives(u: &GridFunction) -> CartesianDerivatives {
    let g = u.grid();
    let (rows, cols) = (g.rows(), g.cols());
    let v = u.values();
    let ur = along_r(v, rows, cols, g.dr(), diff1);
    let urr = along_r(v, rows, cols, g.dr(), diff2);
    let up = along_phi(v, rows, cols, g.dphi(), diff1);
    let upp = along_phi(v, rows, cols, g.dphi(), diff2);
    let urp = along_phi(&ur, rows, cols, g.dphi(), diff1);
    let mut first = Vec::with_capacity(v.len());
    let mut second = Vec::with_capacity(v.len());
    for i in 0..rows {
        let r = g.radius(i);
        for j in 0..cols {
            let k = i * cols + j;
            let (s, c) = g.angle(j).sin_cos();
            let (ur, up, urr, upp, urp) = (ur[k], up[k], urr[k], upp[k], urp[k]);
            let ux = ur * c - up * (s / r);
            let uy = ur * s + up * (c / r);
            let uxx = urr * (c * c) - urp * (2.0 * s * c / r) + upp * (s * s / (r * r)) + ur * (s * s / r) + up * (2.0 * s * c / (r * r));
            let uyy = urr * (s * s) + urp * (2.0 * s * c / r) + upp * (c * c / (r * r)) + ur * (c * c / r) - up * (2.0 * s * c / (r * r));
            let cs = c * c - s * s;
            let uxy = urr * (s * c) + urp * (cs / r) - upp * (s * c / (r * r)) - ur * (s * c / r) - up * (cs / (r * r));
            first.push([ux, uy]);
            second.push([uxx, uxy, uyy]);
        }
    }
    CartesianDerivatives { value: v.to_vec(), first, second }
}

/// `Σ_{|α| = k} |D^α u|²` at the nodes, `k = 0, 1, 2`.
fn order_sums(d: &CartesianDerivatives, l: u32) -> [Vec<f64>; 3] {
    let s0 = d.value.iter().map(|v| v.norm_sqr()).collect();
    let s1 = if l >= 1 { d.first.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).collect() } else { Vec::new() };
    let s2 = if l >= 2 { d.second.iter().map(|v| v.iter().map(|z| z.norm_sqr()).sum()).collect() } else { Vec::new() };
    [s0, s1, s2]
}

/// Midpoint rule: `Σ_cells r_c Δr Δφ · Σ_k weight(r_c, k) · S_k(c)`, `S_k`
/// averaged from the four corners.
fn midpoint(u: &GridFunction, l: u32, weight: impl Fn(f64, u32) -> f64) -> f64 {
    let g = u.grid();
    let d = cartesian_derivatives(u);
    let sums = order_sums(&d, l);
    let cols = g.cols();
    let cell = g.dr() * g.dphi();
    let mut total = 0.0;
    for i in 0..g.n_r() {
        let rc = g.radius(i) + 0.5 * g.dr();
        for j in 0..g.n_phi() {
            let corners = [i * cols + j, i * cols + j + 1, (i + 1) * cols + j, (i + 1) * cols + j + 1];
            let mut acc = 0.0;
            for k in 0..=l {
                let s = &sums[k as usize];
                let avg = 0.25 * corners.iter().map(|&c| s[c]).sum::<f64>();
                acc += weight(rc, k) * avg;
            }
            total += rc * cell * acc;
        }
    }
    total.sqrt()
}

pub fn e_norm(u: &GridFunction, p: &WeightParams) -> Result<f64> {
    let (a, l) = (p.a, p.l);
    Ok(midpoint(u, l, |r, k| r.powf(2.0 * a) * (r.powf(2.0 * (k as f64 - l as f64)) + 1.0)))
}

pub fn h_norm(u: &GridFunction, p: &WeightParams) -> Result<f64> {
    let (a, l) = (p.a, p.l);
    Ok(midpoint(u, l, |r, k| r.powf(2.0 * (a - l as f64 + k as f64))))
}

/// `(∫_γ r^{2(a - l + 1/2)} |u|² dr)^{1/2} / ‖u‖_{E_a^l}`, zero for `u ≡ 0`.
pub fn trace_ratio(u: &GridFunction, ray: Ray, p: &WeightParams) -> Result<f64> {
    if !(1..=2).contains(&p.l) {
        return Err(Error::UnsupportedOrder(p.l));
    }
    let g = u.grid();
    let j = match ray {
        Ray::First => 0,
        Ray::Last => g.n_phi(),
    };
    let e = 2.0 * (p.a - p.l as f64 + 0.5);
    let mut trace = 0.0;
    for i in 0..g.n_r() {
        let rc = g.radius(i) + 0.5 * g.dr();
        let avg = 0.5 * (u.get(i, j).norm_sqr() + u.get(i + 1, j).norm_sqr());
        trace += rc.powf(e) * avg * g.dr();
    }
    let norm = e_norm(u, p)?;
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(trace.sqrt() / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{AngleGeometry, SectorGrid};
    use std::f64::consts::PI;

    fn grid(r0: f64, r1: f64, n: usize) -> SectorGrid {
        SectorGrid::new(AngleGeometry::two_sector(PI / 6.0, 5.0 * PI / 6.0).unwrap(), r0, r1, n, n).unwrap()
    }

    #[test]
    fn rejects_high_orders() {
        assert_eq!(WeightParams::new(0.0, 3), Err(Error::UnsupportedOrder(3)));
        let g = grid(0.5, 1.5, 8);
        let u = GridFunction::from_real_fn(&g, |r, _| r);
        assert_eq!(trace_ratio(&u, Ray::First, &WeightParams::new(0.0, 0).unwrap()), Err(Error::UnsupportedOrder(0)));
    }

    #[test]
    fn zero_function_has_zero_norms() {
        let g = grid(0.5, 1.5, 8);
        let u = GridFunction::zeros(&g);
        for l in 0..=2 {
            let p = WeightParams::new(0.7, l).unwrap();
            assert_eq!(e_norm(&u, &p).unwrap(), 0.0);
            assert_eq!(h_norm(&u, &p).unwrap(), 0.0);
        }
        assert_eq!(trace_ratio(&u, Ray::Last, &WeightParams::new(0.7, 1).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn constant_on_annular_sector() {
        let g = grid(0.5, 1.5, 10);
        let u = GridFunction::from_real_fn(&g, |_, _| 1.0);
        let area = (2.0 * PI / 3.0) * (1.5f64.powi(2) - 0.25) / 2.0;
        let e = e_norm(&u, &WeightParams::new(0.0, 0).unwrap()).unwrap();
        assert!((e - (2.0 * area).sqrt()).abs() < 1e-13);
    }

    #[test]
    fn cartesian_derivatives_converge_at_second_order() {
        // x² + 3xy - y
        let err = |n: usize| {
            let g = grid(0.5, 1.5, n);
            let u = GridFunction::from_real_fn(&g, |r, phi| {
                let (x, y) = (r * phi.cos(), r * phi.sin());
                x * x + 3.0 * x * y - y
            });
            let d = cartesian_derivatives(&u);
            let mut worst = 0.0f64;
            for i in 0..g.rows() {
                for j in 0..g.cols() {
                    let k = g.index(i, j);
                    let (r, phi) = (g.radius(i), g.angle(j));
                    let (x, y) = (r * phi.cos(), r * phi.sin());
                    let [ux, uy] = d.first[k];
                    let [uxx, uxy, uyy] = d.second[k];
                    let e = [ux.re - (2.0 * x + 3.0 * y), uy.re - (3.0 * x - 1.0), uxx.re - 2.0, uxy.re - 3.0, uyy.re];
                    worst = e.iter().fold(worst, |m, v| m.max(v.abs()));
                }
            }
            worst
        };
        let (e1, e2, e3) = (err(8), err(16), err(32));
        assert!(e1 / e2 > 3.5 && e2 / e3 > 3.5, "{e1} {e2} {e3}");
    }
}
