//! Zero finding for entire functions in a rectangle of the complex plane.
//!
//! Zeros are counted with the argument principle: the phase of `f` is
//! tracked along the rectangle boundary and the accumulated change divided
//! by `2π` is the number of zeros inside. Rectangles are bisected until each
//! cell holds at most one zero, which is then polished by Newton's method.
//! A known zero of given multiplicity at the origin (produced by a
//! fundamental system that degenerates at `λ = 0`) is deflated from both
//! the count and the Newton iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Axis-aligned rectangle `[re_min, re_max] × [im_min, im_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::InvalidParameter(format!(
                "empty window [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self { re_min, re_max, im_min, im_max })
    }

    /// Horizontal strip `im_min ≤ Im λ ≤ im_max`, unbounded in the real direction.
    pub fn strip(im_min: f64, im_max: f64) -> Self {
        Self { re_min: f64::NEG_INFINITY, re_max: f64::INFINITY, im_min, im_max }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        self.contains_with(z, 0.0)
    }

    pub fn contains_with(&self, z: Complex64, tol: f64) -> bool {
        z.re >= self.re_min - tol && z.re <= self.re_max + tol && z.im >= self.im_min - tol && z.im <= self.im_max + tol
    }

    fn strictly_contains(&self, z: Complex64) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    fn width(&self) -> f64 {
        self.re_max - self.re_min
    }

    fn height(&self) -> f64 {
        self.im_max - self.im_min
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re_min + self.re_max), 0.5 * (self.im_min + self.im_max))
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re_min, self.im_min),
            Complex64::new(self.re_max, self.im_min),
            Complex64::new(self.re_max, self.im_max),
            Complex64::new(self.re_min, self.im_max),
        ]
    }
}

/// Value of an analytic function together with its derivative and a
/// magnitude scale for relative residual tests.
///
/// `value` and `derivative` may share any positive real factor; only their
/// ratio and the phase of `value` are used.
#[derive(Debug, Clone, Copy)]
pub struct Evaluation {
    pub value: Complex64,
    pub derivative: Complex64,
    pub scale: f64,
}

pub trait AnalyticFunction {
    fn evaluate(&self, z: Complex64) -> Evaluation;

    /// Multiplicity of a zero at the origin that should not be reported.
    fn origin_multiplicity(&self) -> u32 {
        0
    }
}

#[derive(Debug, Clone)]
pub struct RootFinderOptions {
    /// Initial samples per rectangle edge.
    pub edge_samples: usize,
    /// Maximum bisection depth for a single edge step.
    pub max_refinements: u32,
    /// Outer-boundary nudges allowed when it runs through a zero.
    pub max_nudges: u32,
    pub nudge: f64,
    pub newton_max_iter: usize,
    /// Residual target `|f| < residual_tol · scale`.
    pub residual_tol: f64,
    /// Roots closer than this are merged.
    pub dedupe_tol: f64,
    /// Cells smaller than this with several zeros are reported as one merged zero.
    pub min_cell: f64,
}

impl Default for RootFinderOptions {
    fn default() -> Self {
        Self {
            edge_samples: 64,
            max_refinements: 48,
            max_nudges: 8,
            nudge: 1.25e-7,
            newton_max_iter: 50,
            residual_tol: 1e-12,
            dedupe_tol: 1e-10,
            min_cell: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    pub value: Complex64,
    /// Number of zeros merged into this one (1 for a simple isolated zero).
    pub merged: u32,
}

/// Phase winding failure: the contour passes (numerically) through a zero.
struct OnContour(Complex64);

/// Number of zeros of `f` inside `w`, deflating the origin if it lies inside.
fn zero_count<F: AnalyticFunction + ?Sized>(f: &F, w: &Window, opts: &RootFinderOptions) -> std::result::Result<i64, OnContour> {
    let winding = winding_number(f, w, opts)?;
    let origin = Complex64::new(0.0, 0.0);
    let m = f.origin_multiplicity() as i64;
    if m > 0 && w.strictly_contains(origin) {
        Ok(winding - m)
    } else {
        Ok(winding)
    }
}

fn winding_number<F: AnalyticFunction + ?Sized>(f: &F, w: &Window, opts: &RootFinderOptions) -> std::result::Result<i64, OnContour> {
    let corners = w.corners();
    let mut total = 0.0;
    for k in 0..4 {
        total += edge_phase(f, corners[k], corners[(k + 1) % 4], opts)?;
    }
    Ok((total / std::f64::consts::TAU).round() as i64)
}

/// Accumulated phase change of `f` along the segment `a → b`.
///
/// Starts from `edge_samples` uniform steps and bisects every step whose
/// phase increment exceeds `π/4`, so zeros close to the edge are resolved
/// locally instead of by global doubling.
fn edge_phase<F: AnalyticFunction + ?Sized>(
    f: &F,
    a: Complex64,
    b: Complex64,
    opts: &RootFinderOptions,
) -> std::result::Result<f64, OnContour> {
    let n = opts.edge_samples;
    let mut total = 0.0;
    let mut z0 = a;
    let mut f0 = sample(f, a, opts)?;
    for k in 1..=n {
        let z1 = a + (b - a) * (k as f64 / n as f64);
        let f1 = sample(f, z1, opts)?;
        total += refined_step(f, (z0, f0), (z1, f1), opts, 0)?;
        z0 = z1;
        f0 = f1;
    }
    Ok(total)
}

fn refined_step<F: AnalyticFunction + ?Sized>(
    f: &F,
    (z0, f0): (Complex64, Complex64),
    (z1, f1): (Complex64, Complex64),
    opts: &RootFinderOptions,
    depth: u32,
) -> std::result::Result<f64, OnContour> {
    let step = (f1 / f0).arg();
    if step.abs() <= std::f64::consts::FRAC_PI_4 {
        return Ok(step);
    }
    if depth >= opts.max_refinements || (z1 - z0).norm() <= 1e-14 * (1.0 + z0.norm()) {
        return Err(OnContour(0.5 * (z0 + z1)));
    }
    let zm = 0.5 * (z0 + z1);
    let fm = sample(f, zm, opts)?;
    Ok(refined_step(f, (z0, f0), (zm, fm), opts, depth + 1)? + refined_step(f, (zm, fm), (z1, f1), opts, depth + 1)?)
}

/// Unit-modulus phase carrier of `f(z)`; refuses values that vanish relative to their scale.
fn sample<F: AnalyticFunction + ?Sized>(f: &F, z: Complex64, opts: &RootFinderOptions) -> std::result::Result<Complex64, OnContour> {
    let e = f.evaluate(z);
    let mag = e.value.norm();
    if !(mag > opts.residual_tol * 1e-3 * e.scale) || !mag.is_finite() {
        return Err(OnContour(z));
    }
    Ok(e.value / mag)
}

/// All zeros of `f` inside `window` (origin excluded when deflated).
pub fn find_zeros<F: AnalyticFunction + ?Sized>(f: &F, window: &Window, opts: &RootFinderOptions) -> Result<Vec<Root>> {
    let mut w = *window;
    let mut count = None;
    for attempt in 0..=opts.max_nudges {
        match zero_count(f, &w, opts) {
            Ok(c) => {
                count = Some(c);
                break;
            }
            Err(OnContour(z)) => {
                if attempt == opts.max_nudges {
                    return Err(Error::ContourThroughZero { re: z.re, im: z.im });
                }
                let s = opts.nudge * (attempt + 1) as f64;
                w = Window { re_min: window.re_min - s, re_max: window.re_max + s, im_min: window.im_min - s, im_max: window.im_max + s };
            }
        }
    }
    let count = count.unwrap_or(0);
    let mut roots = Vec::new();
    if count > 0 {
        subdivide(f, w, count, opts, &mut roots, 0)?;
    }
    let mut roots = dedupe(roots, opts.dedupe_tol);
    roots.retain(|r| w.contains_with(r.value, opts.dedupe_tol));
    roots.sort_by(|a, b| crate::difference_ops::complex_order(&a.value, &b.value));
    Ok(roots)
}

fn subdivide<F: AnalyticFunction + ?Sized>(
    f: &F,
    w: Window,
    count: i64,
    opts: &RootFinderOptions,
    out: &mut Vec<Root>,
    depth: u32,
) -> Result<()> {
    if count <= 0 {
        return Ok(());
    }
    if count == 1 {
        if let Ok(z) = newton(f, w.center(), opts) {
            let margin = 1e-3 * w.width().max(w.height());
            if w.contains_with(z, margin) {
                out.push(Root { value: z, merged: 1 });
                return Ok(());
            }
        }
    }
    if w.width().max(w.height()) < opts.min_cell || depth > 200 {
        let z = newton(f, w.center(), opts).unwrap_or(w.center());
        out.push(Root { value: z, merged: count as u32 });
        return Ok(());
    }
    let mut last = Complex64::new(0.0, 0.0);
    for (first, second) in split_candidates(f, &w) {
        match zero_count(f, &first, opts) {
            Ok(c1) => {
                subdivide(f, first, c1, opts, out, depth + 1)?;
                return subdivide(f, second, count - c1, opts, out, depth + 1);
            }
            Err(OnContour(z)) => last = z,
        }
    }
    Err(Error::ContourThroughZero { re: last.re, im: last.im })
}

/// Candidate bisections across the longer side, best separated from the
/// zeros of `f` first.
fn split_candidates<F: AnalyticFunction + ?Sized>(f: &F, w: &Window) -> Vec<(Window, Window)> {
    const FRACTIONS: [f64; 7] = [0.5, 0.5371, 0.4629, 0.5743, 0.4257, 0.6114, 0.3886];
    let horizontal = w.height() >= w.width();
    let mut scored: Vec<(f64, f64)> = FRACTIONS
        .iter()
        .map(|&t| {
            let (c, a, b) = if horizontal {
                let c = w.im_min + t * w.height();
                (c, Complex64::new(w.re_min, c), Complex64::new(w.re_max, c))
            } else {
                let c = w.re_min + t * w.width();
                (c, Complex64::new(c, w.im_min), Complex64::new(c, w.im_max))
            };
            let clearance = (0..=64)
                .map(|k| {
                    let e = f.evaluate(a + (b - a) * (k as f64 / 64.0));
                    e.value.norm() / e.scale.max(f64::MIN_POSITIVE)
                })
                .fold(f64::INFINITY, f64::min);
            (clearance, c)
        })
        .collect();
    scored.sort_by(|x, y| y.0.total_cmp(&x.0));
    scored
        .into_iter()
        .map(|(_, c)| {
            if horizontal {
                (Window { im_max: c, ..*w }, Window { im_min: c, ..*w })
            } else {
                (Window { re_max: c, ..*w }, Window { re_min: c, ..*w })
            }
        })
        .collect()
}

/// Newton iteration on `f(z) / z^m`, `m` the deflated multiplicity at the origin.
pub fn newton<F: AnalyticFunction + ?Sized>(f: &F, start: Complex64, opts: &RootFinderOptions) -> Result<Complex64> {
    let m = f.origin_multiplicity() as f64;
    let mut z = start;
    for _ in 0..opts.newton_max_iter {
        let e = f.evaluate(z);
        if e.value.norm() < opts.residual_tol * e.scale {
            return Ok(z);
        }
        let mut logd = e.derivative / e.value;
        if m > 0.0 {
            if z.norm() == 0.0 {
                break;
            }
            logd -= m / z;
        }
        let step = 1.0 / logd;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            let e = f.evaluate(z);
            if e.value.norm() < 1e3 * opts.residual_tol * e.scale {
                return Ok(z);
            }
        }
    }
    Err(Error::NoConvergence { re: start.re, im: start.im })
}

fn dedupe(mut roots: Vec<Root>, tol: f64) -> Vec<Root> {
    roots.sort_by(|a, b| crate::difference_ops::complex_order(&a.value, &b.value));
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        if let Some(existing) = out.iter_mut().find(|e| (e.value - r.value).norm() < tol) {
            existing.merged += r.merged;
        } else {
            out.push(r);
        }
    }
    out
}
