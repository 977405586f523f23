//! Dense truncated Taylor series.
//!
//! A [`Series`] stores coefficients `c_0, …, c_N` of the polynomial
//! `Σ c_k z^k`; the stored polynomial *is* the function. Two coefficient
//! rings are provided: [`Complex64`] for everything numeric, and
//! [`ExactComplex`] (complex numbers over arbitrary-precision rationals)
//! for identities that must hold with zero tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex number with exact rational parts.
pub type ExactComplex = Complex<BigRational>;

/// Ring of series coefficients.
pub trait Coefficient:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_u64(n: u64) -> Self;
}

impl Coefficient for Complex64 {
    #[inline]
    fn from_u64(n: u64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

impl Coefficient for ExactComplex {
    fn from_u64(n: u64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }
}

/// Truncated power series `c_0 + c_1 z + … + c_N z^N`.
#[derive(Clone, Debug)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

/// Floating-point series, the workhorse type.
pub type TaylorSeries = Series<Complex64>;

/// Series with exact rational complex coefficients.
pub type ExactSeries = Series<ExactComplex>;

impl<C: Coefficient> Series<C> {
    /// Builds a series from its coefficients. An empty vector gives the zero series.
    pub fn new(coeffs: Vec<C>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Series { coeffs }
    }

    /// The zero series: order 0, coefficients `[0]`.
    pub fn zero() -> Self {
        Series { coeffs: vec![C::zero()] }
    }

    pub fn constant(c: C) -> Self {
        Series { coeffs: vec![c] }
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = C::one();
        Series { coeffs }
    }

    /// Truncation degree `N`; always `coeffs().len() - 1`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero past the truncation degree.
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Degree of the highest nonzero coefficient; `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Same polynomial with trailing zero coefficients removed.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            Some(d) => Series { coeffs: self.coeffs[..=d].to_vec() },
            None => Self::zero(),
        }
    }

    /// Drops every coefficient above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let end = (order + 1).min(self.coeffs.len());
        Series { coeffs: self.coeffs[..end].to_vec() }
    }

    pub fn map<D: Coefficient>(&self, f: impl FnMut(&C) -> D) -> Series<D> {
        Series { coeffs: self.coeffs.iter().map(f).collect() }
    }

    pub fn scale(&self, s: &C) -> Self {
        self.map(|c| c.clone() * s.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    /// Coefficient-wise sum; order is the larger of the two.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Series { coeffs: (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Series { coeffs: (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect() }
    }

    /// Cauchy product truncated at `out_order`.
    pub fn multiply(&self, other: &Self, out_order: usize) -> Self {
        let mut out = vec![C::zero(); out_order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(out_order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(out_order + 1 - i) {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Series { coeffs: out }
    }

    /// Full product, `out_order = order(self) + order(other)`.
    pub fn mul_full(&self, other: &Self) -> Self {
        self.multiply(other, self.order() + other.order())
    }

    /// `self^e` without truncation.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..e {
            acc = acc.mul_full(self);
        }
        acc
    }

    /// `m`-th formal derivative. Order drops by `m`; differentiating past
    /// the truncation degree yields the zero series.
    pub fn derivative(&self, m: usize) -> Self {
        if m == 0 {
            return self.clone();
        }
        if m > self.order() {
            return Self::zero();
        }
        let coeffs = (0..=self.order() - m)
            .map(|k| self.coeffs[k + m].clone() * falling_factorial::<C>(k + m, m))
            .collect();
        Series { coeffs }
    }

    /// `f^{(m)}(0) = m!·c_m`.
    pub fn derivative_at_zero(&self, m: usize) -> C {
        self.coeff(m) * falling_factorial::<C>(m, m)
    }

    /// Horner evaluation of `Σ c_k z^k`.
    pub fn evaluate(&self, z: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(C::zero(), |acc, c| acc * z.clone() + c.clone())
    }
}

/// `(top)(top−1)…(top−count+1)` as a coefficient, accumulated one integer at a time.
pub(crate) fn falling_factorial<C: Coefficient>(top: usize, count: usize) -> C {
    let mut acc = C::one();
    for i in 0..count {
        acc = acc * C::from_u64((top - i) as u64);
    }
    acc
}

/// Polynomial equality: trailing zero coefficients are ignored, so `0`
/// at order 0 equals `0` at order 5.
impl<C: Coefficient> PartialEq for Series<C> {
    fn eq(&self, other: &Self) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl TaylorSeries {
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Horner evaluation at a point given in floating point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.evaluate(&z)
    }

    /// Lifts to exact rationals. Every finite `f64` is a dyadic rational,
    /// so this is lossless.
    pub fn to_exact(&self) -> Result<ExactSeries> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| Ok(Complex::new(exact_from_f64(c.re)?, exact_from_f64(c.im)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactSeries::new(coeffs))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesFile::from(self)).expect("series serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SeriesFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

impl ExactSeries {
    /// Rounds every coefficient to the nearest `f64`.
    pub fn to_f64(&self) -> TaylorSeries {
        TaylorSeries::new(
            self.coeffs
                .iter()
                .map(|c| Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        )
    }
}

fn exact_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or(Error::NonFinite)
}

/// On-disk form: `{"order": N, "coeffs": [[re, im], ...]}`, increasing degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesFile {
    pub order: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<&TaylorSeries> for SeriesFile {
    fn from(s: &TaylorSeries) -> Self {
        SeriesFile {
            order: s.order(),
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<SeriesFile> for TaylorSeries {
    type Error = Error;

    fn try_from(file: SeriesFile) -> Result<Self> {
        if file.coeffs.len() != file.order + 1 {
            return Err(Error::Format(format!(
                "order {} requires {} coefficients, found {}",
                file.order,
                file.order + 1,
                file.coeffs.len()
            )));
        }
        if file.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(TaylorSeries::new(
            file.coeffs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

impl Serialize for TaylorSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TaylorSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let file = SeriesFile::deserialize(d)?;
        TaylorSeries::try_from(file).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(cs: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(cs)
    }

    #[test]
    fn add_examples() {
        assert_eq!(real(&[1.0, 1.0]).add(&real(&[0.0, 1.0])), real(&[1.0, 2.0]));
        let f = real(&[3.0, -1.0, 2.0]);
        assert_eq!(f.add(&TaylorSeries::zero()), f);
        let sum = TaylorSeries::new(vec![c(1.0, 0.0), c(0.0, 1.0)])
            .add(&TaylorSeries::new(vec![c(1.0, 0.0), c(0.0, -1.0)]));
        assert_eq!(sum, real(&[2.0]));
        assert_eq!(sum.order(), 1);
    }

    #[test]
    fn multiply_examples() {
        let p = real(&[1.0, 1.0]).multiply(&real(&[1.0, -1.0]), 2);
        assert_eq!(p, real(&[1.0, 0.0, -1.0]));
        let f = real(&[0.5, 2.0, -3.0]);
        assert_eq!(f.multiply(&real(&[1.0]), f.order()), f);
        let sq = real(&[1.0, 1.0]).multiply(&real(&[1.0, 1.0]), 1);
        assert_eq!(sq.order(), 1);
        assert_eq!(sq, real(&[1.0, 2.0]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(TaylorSeries::monomial(2).derivative(1), real(&[0.0, 2.0]));
        let f = real(&[1.0, 4.0, 2.0]);
        assert_eq!(f.derivative(0), f);
        let d = real(&[1.0, 1.0]).derivative(3);
        assert!(d.is_zero());
        assert_eq!(d.order(), 0);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(real(&[1.0, 1.0]).eval(c(1.0, 0.0)), c(2.0, 0.0));
        let f = real(&[7.0, 3.0, 1.0]);
        assert_eq!(f.eval(c(0.0, 0.0)), c(7.0, 0.0));
        assert_eq!(real(&[1.0, -1.0]).eval(c(0.0, 1.0)), c(1.0, -1.0));
    }

    #[test]
    fn zero_series_is_order_zero() {
        let z = TaylorSeries::new(vec![]);
        assert_eq!(z.order(), 0);
        assert_eq!(z.coeffs(), &[c(0.0, 0.0)]);
        assert_eq!(z.degree(), None);
    }

    #[test]
    fn exact_roundtrip_is_lossless() {
        let f = TaylorSeries::new(vec![c(0.1, -1e-300), c(1.0 / 3.0, 2.5)]);
        assert_eq!(f.to_exact().unwrap().to_f64(), f);
        assert!(TaylorSeries::new(vec![c(f64::NAN, 0.0)]).to_exact().is_err());
    }

    #[test]
    fn json_format() {
        let f = TaylorSeries::new(vec![c(1.0, 0.0), c(0.1, -2.0)]);
        let text = f.to_json();
        assert_eq!(text, r#"{"order":1,"coeffs":[[1.0,0.0],[0.1,-2.0]]}"#);
        assert_eq!(TaylorSeries::from_json(&text).unwrap(), f);
        assert!(TaylorSeries::from_json(r#"{"order":2,"coeffs":[[1,0]]}"#).is_err());
        assert!(TaylorSeries::from_json(r#"{"coeffs":[[1,0]]}"#).is_err());
    }

    fn arb_series(max_deg: usize) -> impl Strategy<Value = TaylorSeries> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_deg + 1)
            .prop_map(|v| TaylorSeries::new(v.into_iter().map(|(re, im)| c(re, im)).collect()))
    }

    proptest! {
        #[test]
        fn json_roundtrip_bit_exact(f in arb_series(20)) {
            let back = TaylorSeries::from_json(&f.to_json()).unwrap();
            for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }

        #[test]
        fn exact_ring_laws(f in arb_series(8), g in arb_series(8), h in arb_series(8)) {
            let (f, g, h) = (f.to_exact().unwrap(), g.to_exact().unwrap(), h.to_exact().unwrap());
            prop_assert_eq!(f.add(&g), g.add(&f));
            prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
            prop_assert_eq!(f.mul_full(&g), g.mul_full(&f));
            prop_assert_eq!(f.mul_full(&g).mul_full(&h), f.mul_full(&g.mul_full(&h)));
            // truncated products agree with truncating the full product
            prop_assert_eq!(f.multiply(&g, 5), f.mul_full(&g).truncate(5));
        }

        #[test]
        fn derivative_composes(f in arb_series(30), a in 0usize..12, b in 0usize..12) {
            let f = f.to_exact().unwrap();
            prop_assert_eq!(f.derivative(a).derivative(b), f.derivative(a + b));
        }

        #[test]
        fn evaluation_is_multiplicative(f in arb_series(40), g in arb_series(40),
                                        t in 0.0f64..std::f64::consts::TAU, r in 0.0f64..=1.0) {
            let z = Complex64::from_polar(r, t);
            let lhs = f.mul_full(&g).eval(z);
            let rhs = f.eval(z) * g.eval(z);
            // bound relative to the magnitude Horner actually accumulates
            let mag = f.coeffs().iter().map(|c| c.norm()).sum::<f64>()
                * g.coeffs().iter().map(|c| c.norm()).sum::<f64>();
            let n = (f.order() + g.order() + 1) as f64;
            prop_assert!((lhs - rhs).norm() <= 4.0 * f64::EPSILON * n * mag);
        }
    }
}
