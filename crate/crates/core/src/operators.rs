//! Coefficient-level operators: the shift `M_z`, Volterra operators `T_g`,
//! the combined operator `T = M_z + n·T_z`, `d^n/dz^n` and its inverse
//! `V_n` on `S_{n,0}^p`.
//!
//! Order accounting: `shift` and `combined_t` raise the truncation order by
//! one, `v_n` by `n`, `volterra` to `order(f) + order(g)`; `diff_n` lowers
//! it by `n`. Nothing is truncated, so iterated applications must budget
//! order up front.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{falling_factorial, Coefficient, Series, TaylorSeries};

fn require_depth(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroDepth)
    } else {
        Ok(())
    }
}

/// `(M_z f)(z) = z f(z)`.
pub fn shift<C: Coefficient>(f: &Series<C>) -> Series<C> {
    let mut coeffs = Vec::with_capacity(f.order() + 2);
    coeffs.push(C::zero());
    coeffs.extend_from_slice(f.coeffs());
    Series::new(coeffs)
}

/// Term-by-term antiderivative with zero constant term.
pub fn antiderivative<C: Coefficient>(f: &Series<C>) -> Series<C> {
    let mut coeffs = Vec::with_capacity(f.order() + 2);
    coeffs.push(C::zero());
    coeffs.extend(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() / C::from_u64(k as u64 + 1)),
    );
    Series::new(coeffs)
}

/// `(T_g f)(z) = ∫_0^z f(ω) g'(ω) dω`.
pub fn volterra<C: Coefficient>(f: &Series<C>, g: &Series<C>) -> Series<C> {
    antiderivative(&f.mul_full(&g.derivative(1)))
}

/// `T f = z f + n ∫_0^z f` in closed coefficient form: degree `k+1` of the
/// result is `a_k (k+1+n)/(k+1)`.
pub fn combined_t<C: Coefficient>(f: &Series<C>, n: usize) -> Result<Series<C>> {
    require_depth(n)?;
    let mut coeffs = Vec::with_capacity(f.order() + 2);
    coeffs.push(C::zero());
    coeffs.extend(f.coeffs().iter().enumerate().map(|(k, c)| {
        let k = k as u64;
        c.clone() * C::from_u64(k + 1 + n as u64) / C::from_u64(k + 1)
    }));
    Ok(Series::new(coeffs))
}

/// `T` assembled as `shift(f) + n·volterra(f, z)`; the closed form is
/// checked against this.
pub fn combined_t_compositional<C: Coefficient>(f: &Series<C>, n: usize) -> Result<Series<C>> {
    require_depth(n)?;
    let z = Series::<C>::monomial(1);
    Ok(shift(f).add(&volterra(f, &z).scale(&C::from_u64(n as u64))))
}

/// `d^n/dz^n`.
pub fn diff_n<C: Coefficient>(f: &Series<C>, n: usize) -> Result<Series<C>> {
    require_depth(n)?;
    Ok(f.derivative(n))
}

/// `(V_n f)(z) = (1/(n-1)!) ∫_0^z (z-ζ)^{n-1} f(ζ) dζ`: coefficient `a_k`
/// moves to degree `k+n` as `a_k k!/(k+n)!`, the first `n` coefficients vanish.
pub fn v_n<C: Coefficient>(f: &Series<C>, n: usize) -> Result<Series<C>> {
    require_depth(n)?;
    let mut coeffs = vec![C::zero(); n];
    coeffs.extend(
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() / falling_factorial::<C>(k + n, n)),
    );
    Ok(Series::new(coeffs))
}

/// `P_m = Σ_{k<n} f^{(k)}(0) z^k/k! + V_n(p_m)`, the polynomial whose
/// `S_n^p` distance to `f` equals `‖p_m − f^{(n)}‖_{H^p}`.
pub fn pm_approximant<C: Coefficient>(f: &Series<C>, pm: &Series<C>, n: usize) -> Result<Series<C>> {
    let head = Series::new((0..n).map(|k| f.coeff(k)).collect());
    Ok(head.add(&v_n(pm, n)?))
}

/// Serializable operator selector used by the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum OperatorDescriptor {
    Shift,
    Volterra { g: TaylorSeries },
    Combined { n: usize },
    Diff { n: usize },
    Integrate { n: usize },
}

impl OperatorDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            OperatorDescriptor::Shift | OperatorDescriptor::Volterra { .. } => Ok(()),
            OperatorDescriptor::Combined { n }
            | OperatorDescriptor::Diff { n }
            | OperatorDescriptor::Integrate { n } => require_depth(*n),
        }
    }

    pub fn apply(&self, f: &TaylorSeries) -> Result<TaylorSeries> {
        match self {
            OperatorDescriptor::Shift => Ok(shift(f)),
            OperatorDescriptor::Volterra { g } => Ok(volterra(f, g)),
            OperatorDescriptor::Combined { n } => combined_t(f, *n),
            OperatorDescriptor::Diff { n } => diff_n(f, *n),
            OperatorDescriptor::Integrate { n } => v_n(f, *n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ExactSeries;
    use num_bigint::BigInt;
    use num_complex::Complex;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn real(cs: &[f64]) -> TaylorSeries {
        TaylorSeries::from_real(cs)
    }

    fn q(num: i64, den: i64) -> Complex<BigRational> {
        Complex::new(BigRational::new(BigInt::from(num), BigInt::from(den)), BigRational::zero())
    }

    fn exact(cs: &[(i64, i64)]) -> ExactSeries {
        ExactSeries::new(cs.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift(&real(&[1.0])), TaylorSeries::monomial(1));
        assert!(shift(&TaylorSeries::zero()).is_zero());
        let s = shift(&real(&[1.0, 1.0]));
        assert_eq!(s, real(&[0.0, 1.0, 1.0]));
        assert_eq!(s.order(), 2);
    }

    #[test]
    fn volterra_examples() {
        let one = exact(&[(1, 1)]);
        let z = ExactSeries::monomial(1);
        assert_eq!(volterra(&one, &z), z);
        let half_z2 = exact(&[(0, 1), (0, 1), (1, 2)]);
        assert_eq!(volterra(&one, &half_z2), half_z2);
        assert_eq!(volterra(&exact(&[(1, 1), (1, 1)]), &z), exact(&[(0, 1), (1, 1), (1, 2)]));
        // constant symbol gives the zero operator
        assert!(volterra(&exact(&[(3, 1), (2, 1)]), &exact(&[(5, 1)])).is_zero());
        assert_eq!(volterra(&one, &z).coeff(0), q(0, 1));
    }

    #[test]
    fn combined_t_examples() {
        assert_eq!(combined_t(&exact(&[(1, 1)]), 1).unwrap(), exact(&[(0, 1), (2, 1)]));
        assert_eq!(combined_t(&ExactSeries::monomial(1), 2).unwrap(), exact(&[(0, 1), (0, 1), (2, 1)]));
        // z(1+z) + 3∫(1+z) = 4z + (5/2)z²
        let f = exact(&[(1, 1), (1, 1)]);
        assert_eq!(combined_t(&f, 3).unwrap(), exact(&[(0, 1), (4, 1), (5, 2)]));
        assert!(matches!(combined_t(&f, 0), Err(Error::ZeroDepth)));
    }

    #[test]
    fn diff_n_examples() {
        assert_eq!(diff_n(&TaylorSeries::monomial(2), 2).unwrap(), real(&[2.0]));
        for n in 1..8 {
            let fact = (1..=n as i64).product::<i64>();
            let f = ExactSeries::monomial(n).scale(&q(1, fact));
            assert_eq!(diff_n(&f, n).unwrap(), exact(&[(1, 1)]));
        }
        assert!(diff_n(&real(&[1.0]), 1).unwrap().is_zero());
        assert!(diff_n(&real(&[1.0]), 0).is_err());
    }

    #[test]
    fn v_n_examples() {
        assert_eq!(v_n(&exact(&[(1, 1)]), 2).unwrap(), exact(&[(0, 1), (0, 1), (1, 2)]));
        assert_eq!(v_n(&ExactSeries::monomial(1), 1).unwrap(), exact(&[(0, 1), (0, 1), (1, 2)]));
        assert_eq!(
            v_n(&exact(&[(1, 1), (1, 1)]), 3).unwrap(),
            exact(&[(0, 1), (0, 1), (0, 1), (1, 6), (1, 24)])
        );
    }

    #[test]
    fn pm_approximant_examples() {
        let f = exact(&[(2, 1), (-1, 3), (5, 7), (1, 9)]);
        for n in 1..4 {
            let exact_pm = diff_n(&f, n).unwrap();
            assert_eq!(pm_approximant(&f, &exact_pm, n).unwrap(), f);
        }
        let z2 = ExactSeries::monomial(2);
        assert!(pm_approximant(&z2, &ExactSeries::zero(), 1).unwrap().is_zero());
        let f = exact(&[(1, 1), (0, 1), (1, 1)]);
        assert_eq!(pm_approximant(&f, &exact(&[(0, 1), (2, 1)]), 1).unwrap(), f);
    }

    #[test]
    fn descriptor_apply_and_json() {
        let one = real(&[1.0]);
        assert_eq!(OperatorDescriptor::Shift.apply(&one).unwrap(), TaylorSeries::monomial(1));
        assert_eq!(OperatorDescriptor::Combined { n: 1 }.apply(&one).unwrap(), real(&[0.0, 2.0]));
        assert_eq!(OperatorDescriptor::Integrate { n: 2 }.apply(&one).unwrap(), real(&[0.0, 0.0, 0.5]));
        assert!(OperatorDescriptor::Diff { n: 0 }.validate().is_err());
        let d: OperatorDescriptor = serde_json::from_str(r#"{"kind":"combined","n":3}"#).unwrap();
        assert_eq!(d, OperatorDescriptor::Combined { n: 3 });
        let v = OperatorDescriptor::Volterra { g: real(&[0.0, 1.0]) };
        let back: OperatorDescriptor = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
    }

    fn arb_exact(max_deg: usize) -> impl Strategy<Value = ExactSeries> {
        prop::collection::vec((-50i64..50, 1i64..20, -50i64..50, 1i64..20), 1..=max_deg + 1).prop_map(|v| {
            ExactSeries::new(
                v.into_iter()
                    .map(|(a, b, c, d)| {
                        Complex::new(
                            BigRational::new(a.into(), b.into()),
                            BigRational::new(c.into(), d.into()),
                        )
                    })
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn closed_form_matches_composition(f in arb_exact(16), n in 1usize..8) {
            prop_assert_eq!(combined_t(&f, n).unwrap(), combined_t_compositional(&f, n).unwrap());
        }

        #[test]
        fn v_n_round_trips(f in arb_exact(16), n in 1usize..6) {
            prop_assert_eq!(diff_n(&v_n(&f, n).unwrap(), n).unwrap(), f.clone());
            // kill the first n coefficients so f lies in S_{n,0}
            let tail = f.sub(&ExactSeries::new((0..n).map(|k| f.coeff(k)).collect()));
            prop_assert_eq!(v_n(&diff_n(&tail, n).unwrap(), n).unwrap(), tail);
        }

        #[test]
        fn binomial_collapse(f in arb_exact(16), n in 1usize..6) {
            // d^n(z f) = z f^{(n)} + n f^{(n-1)}, valid for every f
            let lhs = diff_n(&shift(&f), n).unwrap();
            let rhs = shift(&f.derivative(n))
                .add(&f.derivative(n - 1).scale(&Coefficient::from_u64(n as u64)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
