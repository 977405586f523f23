//! Inner functions built from a finite Blaschke product and an atomic
//! singular factor:
//!
//! ```text
//! G(z) = γ · Π_j [ (|a_j|/a_j) (a_j − z)/(1 − ā_j z) ]^{m_j} · exp(−Σ_k c_k (e^{iθ_k} + z)/(e^{iθ_k} − z))
//! ```
//!
//! with the factor for `a_j = 0` taken to be `z`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{boundary_samples, QuadratureConfig};
use crate::series::TaylorSeries;

/// Points this close to a singular atom count as the atom itself.
const ATOM_EXCLUSION: f64 = 1e-14;
/// Half-width of the angular window skipped around each atom by
/// [`InnerFunction::boundary_unimodularity`].
const ATOM_WINDOW: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlaschkeZero {
    pub point: Complex64,
    pub mult: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularAtom {
    pub theta: f64,
    pub mass: f64,
}

impl SingularAtom {
    pub fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InnerFunction {
    zeros: Vec<BlaschkeZero>,
    unimodular: Complex64,
    atoms: Vec<SingularAtom>,
}

/// Outcome of [`singular_division_heuristic`]. Heuristic, not a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingularVerdict {
    Divisible,
    NotDivisible,
    Inconclusive,
}

impl InnerFunction {
    pub fn new(zeros: Vec<BlaschkeZero>, unimodular: Complex64, atoms: Vec<SingularAtom>) -> Result<Self> {
        for z in &zeros {
            if !(z.point.norm() < 1.0) {
                return Err(Error::InvalidInner(format!("zero {} is not inside the disk", z.point)));
            }
            if z.mult == 0 {
                return Err(Error::InvalidInner("zero multiplicity must be at least 1".into()));
            }
        }
        if !((unimodular.norm() - 1.0).abs() <= 1e-12) {
            return Err(Error::InvalidInner(format!("constant {unimodular} is not unimodular")));
        }
        for a in &atoms {
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidInner(format!("atom mass {} must be positive", a.mass)));
            }
            if !(0.0..TAU).contains(&a.theta) {
                return Err(Error::InvalidInner(format!("atom angle {} outside [0, 2π)", a.theta)));
            }
        }
        Ok(InnerFunction { zeros, unimodular, atoms })
    }

    /// `G ≡ 1`.
    pub fn trivial() -> Self {
        InnerFunction { zeros: vec![], unimodular: Complex64::new(1.0, 0.0), atoms: vec![] }
    }

    /// Blaschke product with the given simple or repeated zeros.
    pub fn blaschke(zeros: &[(Complex64, u32)]) -> Result<Self> {
        let zeros = zeros.iter().map(|&(point, mult)| BlaschkeZero { point, mult }).collect();
        Self::new(zeros, Complex64::new(1.0, 0.0), vec![])
    }

    pub fn singular(atoms: &[(f64, f64)]) -> Result<Self> {
        let atoms = atoms.iter().map(|&(theta, mass)| SingularAtom { theta, mass }).collect();
        Self::new(vec![], Complex64::new(1.0, 0.0), atoms)
    }

    pub fn zeros(&self) -> &[BlaschkeZero] {
        &self.zeros
    }

    pub fn atoms(&self) -> &[SingularAtom] {
        &self.atoms
    }

    pub fn unimodular(&self) -> Complex64 {
        self.unimodular
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    fn check_domain(&self, z: Complex64) -> Result<()> {
        if !(z.norm() <= 1.0 + 1e-15) {
            return Err(Error::OutsideDomain(format!("{z} (|z| > 1)")));
        }
        if self.atoms.iter().any(|a| (z - a.direction()).norm() < ATOM_EXCLUSION) {
            return Err(Error::OutsideDomain(format!("{z} (singular atom)")));
        }
        Ok(())
    }

    /// `G(z)` for `|z| ≤ 1` away from the atoms.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.check_domain(z)?;
        let mut value = self.unimodular;
        for zero in &self.zeros {
            value *= blaschke_factor(zero.point, z).powu(zero.mult);
        }
        let exponent: Complex64 = self
            .atoms
            .iter()
            .map(|a| {
                let e = a.direction();
                a.mass * (e + z) / (e - z)
            })
            .sum();
        Ok(value * (-exponent).exp())
    }

    /// `log|G(z)|`; finite where `eval` would underflow near an atom.
    pub fn log_modulus(&self, z: Complex64) -> Result<f64> {
        self.check_domain(z)?;
        let mut acc = self.unimodular.norm().ln();
        for zero in &self.zeros {
            acc += zero.mult as f64 * blaschke_factor(zero.point, z).norm().ln();
        }
        let r2 = z.norm_sqr();
        for a in &self.atoms {
            // Re (e+z)/(e-z) is the Poisson kernel (1-|z|²)/|e-z|²
            acc -= a.mass * (1.0 - r2) / (a.direction() - z).norm_sqr();
        }
        Ok(acc)
    }

    /// Largest `||G(e^{iθ})| − 1|` over `num_samples` equispaced boundary
    /// points, skipping a `1e-3` window around every atom.
    pub fn boundary_unimodularity(&self, num_samples: usize) -> Result<f64> {
        if num_samples < 16 {
            return Err(Error::Precondition(format!("need at least 16 samples, got {num_samples}")));
        }
        let mut worst: f64 = 0.0;
        for k in 0..num_samples {
            let theta = TAU * k as f64 / num_samples as f64;
            if self.atoms.iter().any(|a| angular_distance(theta, a.theta) < ATOM_WINDOW) {
                continue;
            }
            let g = self.eval(Complex64::from_polar(1.0, theta))?;
            worst = worst.max((g.norm() - 1.0).abs());
        }
        Ok(worst)
    }

    /// Numerator `Π (z − a_j)^{m_j}` of the Blaschke part.
    pub fn blaschke_numerator(&self) -> TaylorSeries {
        self.zeros.iter().fold(TaylorSeries::from_real(&[1.0]), |acc, zero| {
            let factor = TaylorSeries::new(vec![-zero.point, Complex64::new(1.0, 0.0)]);
            acc.mul_full(&factor.pow(zero.mult))
        })
    }

    /// Taylor coefficients of `G` up to `order`, from a Cauchy integral on
    /// the circle `|z| = radius` discretised with `num_points` nodes.
    pub fn taylor_series(&self, order: usize, radius: f64, num_points: usize) -> Result<TaylorSeries> {
        if !(radius > 0.0 && radius < 1.0) || num_points <= order {
            return Err(Error::Precondition("need 0 < radius < 1 and num_points > order".into()));
        }
        let mut buf = (0..num_points)
            .map(|j| self.eval(Complex64::from_polar(radius, TAU * j as f64 / num_points as f64)))
            .collect::<Result<Vec<_>>>()?;
        let fft = rustfft::FftPlanner::<f64>::new().plan_fft_forward(num_points);
        fft.process(&mut buf);
        let mut scale = 1.0 / num_points as f64;
        let coeffs = buf[..=order]
            .iter()
            .map(|c| {
                let out = c * scale;
                scale /= radius;
                out
            })
            .collect();
        Ok(TaylorSeries::new(coeffs))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&InnerFile::from(self)).expect("inner-function serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<InnerFile>(text)?.try_into()
    }
}

fn blaschke_factor(a: Complex64, z: Complex64) -> Complex64 {
    if a == Complex64::new(0.0, 0.0) {
        return z;
    }
    (a.norm() / a) * (a - z) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// `max |f|` over boundary samples; the scale against which zero tests are judged.
pub fn boundary_scale(f: &TaylorSeries) -> f64 {
    let cfg = QuadratureConfig::for_order(f.order());
    boundary_samples(f, 1.0, cfg.num_points)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
}

/// Largest `|f^{(i)}(a_j)| / ‖f‖_scale` over the zeros `a_j` of `G` and
/// `0 ≤ i < m_j`.
pub fn blaschke_residual(f: &TaylorSeries, g: &InnerFunction) -> Result<f64> {
    if g.has_atoms() {
        return Err(Error::Precondition(
            "inner function has singular atoms; use singular_division_heuristic".into(),
        ));
    }
    if f.is_zero() {
        return Err(Error::Precondition("f is identically zero".into()));
    }
    let scale = boundary_scale(f);
    let mut worst: f64 = 0.0;
    for zero in g.zeros() {
        for i in 0..zero.mult as usize {
            worst = worst.max(f.derivative(i).eval(zero.point).norm() / scale);
        }
    }
    Ok(worst)
}

/// For polynomials, divisibility of the inner factor by a finite Blaschke
/// product is vanishing at each zero to the stated multiplicity.
pub fn blaschke_divisibility(f: &TaylorSeries, g: &InnerFunction, tol: f64) -> Result<bool> {
    Ok(blaschke_residual(f, g)? <= tol)
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicConfig {
    /// Strictly increasing radii in `(0, 1)`.
    pub radii: Vec<f64>,
    /// Growth of `|f/G|` over the innermost radius that counts as blow-up.
    pub blowup: f64,
}

impl Default for HeuristicConfig {
    fn default() -> Self {
        HeuristicConfig { radii: vec![0.9, 0.99, 0.999], blowup: 1e3 }
    }
}

/// Heuristic test of singular divisibility: tracks `log|f/G|` along each
/// atom direction as `r → 1`. Monotone growth past `blowup` means
/// not divisible; growth bounded by `blowup` at every atom means divisible.
pub fn singular_division_heuristic(
    f: &TaylorSeries,
    g: &InnerFunction,
    cfg: &HeuristicConfig,
) -> Result<SingularVerdict> {
    if !g.has_atoms() {
        return Err(Error::Precondition("inner function has no singular atoms".into()));
    }
    if f.is_zero() {
        return Err(Error::Precondition("f is identically zero".into()));
    }
    let radii = &cfg.radii;
    if radii.len() < 2
        || radii.windows(2).any(|w| w[0] >= w[1])
        || radii.iter().any(|&r| !(r > 0.0 && r < 1.0))
    {
        return Err(Error::Precondition("radius grid must be increasing inside (0, 1)".into()));
    }
    let log_blowup = cfg.blowup.ln();
    let mut all_bounded = true;
    for atom in g.atoms() {
        let logs = radii
            .iter()
            .map(|&r| {
                let z = Complex64::from_polar(r, atom.theta);
                Ok(f.eval(z).norm().ln() - g.log_modulus(z)?)
            })
            .collect::<Result<Vec<f64>>>()?;
        let growth = logs.iter().map(|l| l - logs[0]).fold(f64::NEG_INFINITY, f64::max);
        let monotone = logs.windows(2).all(|w| w[1] >= w[0]);
        if monotone && logs[logs.len() - 1] - logs[0] > log_blowup {
            return Ok(SingularVerdict::NotDivisible);
        }
        if !(growth <= log_blowup) {
            all_bounded = false;
        }
    }
    Ok(if all_bounded { SingularVerdict::Divisible } else { SingularVerdict::Inconclusive })
}

/// On-disk form `{"zeros": [[re, im, mult], ...], "const": [re, im], "atoms": [[theta, mass], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InnerFile {
    #[serde(default)]
    pub zeros: Vec<[f64; 3]>,
    #[serde(rename = "const", default = "unit_const")]
    pub unimodular: [f64; 2],
    #[serde(default)]
    pub atoms: Vec<[f64; 2]>,
}

fn unit_const() -> [f64; 2] {
    [1.0, 0.0]
}

impl From<&InnerFunction> for InnerFile {
    fn from(g: &InnerFunction) -> Self {
        InnerFile {
            zeros: g.zeros.iter().map(|z| [z.point.re, z.point.im, z.mult as f64]).collect(),
            unimodular: [g.unimodular.re, g.unimodular.im],
            atoms: g.atoms.iter().map(|a| [a.theta, a.mass]).collect(),
        }
    }
}

impl TryFrom<InnerFile> for InnerFunction {
    type Error = Error;

    fn try_from(file: InnerFile) -> Result<Self> {
        let zeros = file
            .zeros
            .iter()
            .map(|&[re, im, m]| {
                if m.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&m) {
                    return Err(Error::InvalidInner(format!("multiplicity {m} is not a positive integer")));
                }
                Ok(BlaschkeZero { point: Complex64::new(re, im), mult: m as u32 })
            })
            .collect::<Result<Vec<_>>>()?;
        let atoms = file.atoms.iter().map(|&[theta, mass]| SingularAtom { theta, mass }).collect();
        let [re, im] = file.unimodular;
        InnerFunction::new(zeros, Complex64::new(re, im), atoms)
    }
}

impl Serialize for InnerFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        InnerFile::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for InnerFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        InnerFile::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}
