//! Test functions with exact first derivatives and Laplacians in polar form.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Value, `∂_r`, `∂_φ` and `Δ` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValue {
    pub value: Complex64,
    pub dr: Complex64,
    pub dphi: Complex64,
    pub laplacian: Complex64,
}

impl PointValue {
    pub const ZERO: PointValue = PointValue { value: ZERO, dr: ZERO, dphi: ZERO, laplacian: ZERO };

    pub fn conj(&self) -> Self {
        Self { value: self.value.conj(), dr: self.dr.conj(), dphi: self.dphi.conj(), laplacian: self.laplacian.conj() }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        Self { value: self.value * a, dr: self.dr * a, dphi: self.dphi * a, laplacian: self.laplacian * a }
    }
}

impl std::ops::Add for PointValue {
    type Output = PointValue;

    fn add(self, o: PointValue) -> PointValue {
        PointValue {
            value: self.value + o.value,
            dr: self.dr + o.dr,
            dphi: self.dphi + o.dphi,
            laplacian: self.laplacian + o.laplacian,
        }
    }
}

pub trait TestFunction: Send + Sync {
    fn eval(&self, r: f64, phi: f64) -> PointValue;
}

/// Radial factor with derivatives up to second order.
#[derive(Debug, Clone, PartialEq)]
pub enum Radial {
    /// `exp(-1 / (1 - t²))` for `t = (2r - lo - hi) / (hi - lo)`, zero for `|t| ≥ 1`.
    Bump { lo: f64, hi: f64 },
    /// `(1 - t²)^k`, same `t`; `C^{k-1}` across the support ends.
    PolyBump { lo: f64, hi: f64, power: i32 },
    /// `Σ c_k r^k`.
    Poly(Vec<Complex64>),
    /// `r^ν`.
    Power(f64),
}

impl Radial {
    pub fn eval(&self, r: f64) -> (Complex64, Complex64, Complex64) {
        match self {
            Radial::Bump { lo, hi } => {
                let c = 2.0 / (hi - lo);
                let t = c * r - (lo + hi) / (hi - lo);
                if t.abs() >= 1.0 {
                    return (ZERO, ZERO, ZERO);
                }
                let q = 1.0 - t * t;
                let g = (-1.0 / q).exp();
                let g1 = g * (-2.0 * t / (q * q));
                let g2 = g * (4.0 * t * t / q.powi(4) - (2.0 + 6.0 * t * t) / q.powi(3));
                (g.into(), (c * g1).into(), (c * c * g2).into())
            }
            Radial::PolyBump { lo, hi, power } => {
                let c = 2.0 / (hi - lo);
                let t = c * r - (lo + hi) / (hi - lo);
                if t.abs() >= 1.0 {
                    return (ZERO, ZERO, ZERO);
                }
                let k = *power;
                let kf = k as f64;
                let q = 1.0 - t * t;
                let g1 = -2.0 * kf * t * q.powi(k - 1);
                let g2 = -2.0 * kf * q.powi(k - 1) + 4.0 * kf * (kf - 1.0) * t * t * q.powi(k - 2);
                (q.powi(k).into(), (c * g1).into(), (c * c * g2).into())
            }
            Radial::Poly(coef) => {
                let mut v = ZERO;
                let mut d1 = ZERO;
                let mut d2 = ZERO;
                for &c in coef.iter().rev() {
                    d2 = d2 * r + d1 * 2.0;
                    d1 = d1 * r + v;
                    v = v * r + c;
                }
                (v, d1, d2)
            }
            Radial::Power(nu) => {
                let p = r.powf(*nu);
                (p.into(), (nu * p / r).into(), (nu * (nu - 1.0) * p / (r * r)).into())
            }
        }
    }

    /// Support in `r`, if bounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Radial::Bump { lo, hi } | Radial::PolyBump { lo, hi, .. } => Some((*lo, *hi)),
            _ => None,
        }
    }
}

/// Angular factor with derivatives up to second order.
#[derive(Debug, Clone, PartialEq)]
pub enum Angular {
    /// `Σ (a_k cos kφ + b_k sin kφ)` over `(k, a_k, b_k)`.
    Trig(Vec<(f64, Complex64, Complex64)>),
    /// `Σ c_k φ^k`.
    Poly(Vec<Complex64>),
}

impl Angular {
    pub fn eval(&self, phi: f64) -> (Complex64, Complex64, Complex64) {
        match self {
            Angular::Trig(terms) => {
                let mut out = (ZERO, ZERO, ZERO);
                for &(k, a, b) in terms {
                    let (s, c) = (k * phi).sin_cos();
                    out.0 += a * c + b * s;
                    out.1 += (b * c - a * s) * k;
                    out.2 -= (a * c + b * s) * (k * k);
                }
                out
            }
            Angular::Poly(coef) => Radial::Poly(coef.clone()).eval(phi),
        }
    }
}

/// `R(r) A(φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separable {
    pub radial: Radial,
    pub angular: Angular,
}

impl Separable {
    pub fn new(radial: Radial, angular: Angular) -> Self {
        Self { radial, angular }
    }
}

impl TestFunction for Separable {
    fn eval(&self, r: f64, phi: f64) -> PointValue {
        let (f, f1, f2) = self.radial.eval(r);
        if f == ZERO && f1 == ZERO && f2 == ZERO {
            return PointValue::ZERO;
        }
        let (a, a1, a2) = self.angular.eval(phi);
        PointValue { value: f * a, dr: f1 * a, dphi: f * a1, laplacian: f2 * a + f1 * a / r + f * a2 / (r * r) }
    }
}

/// Finite sum of separable terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SumOf(pub Vec<Separable>);

impl TestFunction for SumOf {
    fn eval(&self, r: f64, phi: f64) -> PointValue {
        self.0.iter().fold(PointValue::ZERO, |acc, t| acc + t.eval(r, phi))
    }
}

/// The zero function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Zero;

impl TestFunction for Zero {
    fn eval(&self, _: f64, _: f64) -> PointValue {
        PointValue::ZERO
    }
}

/// `a · f`.
pub struct Scaled<F>(pub Complex64, pub F);

impl<F: TestFunction> TestFunction for Scaled<F> {
    fn eval(&self, r: f64, phi: f64) -> PointValue {
        self.1.eval(r, phi).scale(self.0)
    }
}

/// Complex conjugate of `f`.
pub struct Conjugate<F>(pub F);

impl<F: TestFunction> TestFunction for Conjugate<F> {
    fn eval(&self, r: f64, phi: f64) -> PointValue {
        self.0.eval(r, phi).conj()
    }
}

impl<F: TestFunction + ?Sized> TestFunction for std::sync::Arc<F> {
    fn eval(&self, r: f64, phi: f64) -> PointValue {
        (**self).eval(r, phi)
    }
}
