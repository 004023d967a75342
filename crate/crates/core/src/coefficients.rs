//! Exact scalars.
//!
//! [`GaussianRational`] is the ground field ℚ(i). [`Laurent`] adjoins finitely
//! many central invertible formal parameters (`q`, optionally `tau`), giving the
//! coefficient ring used by every algebra element. Nothing here touches floating
//! point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An element `re + im·i` of ℚ(i), always fully reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational(Complex<BigRational>);

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational(Complex::new(re, im))
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num/den`; panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn re(&self) -> &BigRational {
        &self.0.re
    }

    pub fn im(&self) -> &BigRational {
        &self.0.im
    }

    pub fn is_zero(&self) -> bool {
        self.0.re.is_zero() && self.0.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.re.is_one() && self.0.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.0.im.is_zero()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(GaussianRational(self.0.inv()))
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational(self.0.conj())
    }

    /// Sign and magnitude text used by the renderers: `(negative, body)`.
    /// `body` is `None` when the magnitude is exactly one.
    pub(crate) fn render_parts(&self) -> (bool, Option<String>) {
        let (re, im) = (&self.0.re, &self.0.im);
        if im.is_zero() {
            let neg = re.is_negative();
            let abs = re.abs();
            if abs.is_one() {
                (neg, None)
            } else {
                (neg, Some(abs.to_string()))
            }
        } else if re.is_zero() {
            let neg = im.is_negative();
            let abs = im.abs();
            if abs.is_one() {
                (neg, Some("i".to_string()))
            } else {
                (neg, Some(format!("{abs}*i")))
            }
        } else {
            let sign = if im.is_negative() { "-" } else { "+" };
            let abs = im.abs();
            let imag = if abs.is_one() {
                "i".to_string()
            } else {
                format!("{abs}*i")
            };
            (false, Some(format!("({re} {sign} {imag})")))
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, body) = self.render_parts();
        let sign = if neg { "-" } else { "" };
        match body {
            Some(b) => write!(f, "{sign}{b}"),
            None => write!(f, "{sign}1"),
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 + &rhs.0)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 - &rhs.0)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational(&self.0 * &rhs.0)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational(-self.0.clone())
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational(-self.0)
    }
}

/// Names of the formal parameters a coefficient lives over.
pub type Params = Arc<[String]>;

pub fn params(names: &[&str]) -> Params {
    names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into()
}

fn params_eq(a: &Params, b: &Params) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

/// A unit `q^power · (−1)^negative`; the values a bicharacter commutation
/// factor can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RhoUnit {
    pub q_power: i64,
    pub negative: bool,
}

impl RhoUnit {
    pub const ONE: RhoUnit = RhoUnit {
        q_power: 0,
        negative: false,
    };

    pub fn is_one(self) -> bool {
        self.q_power == 0 && !self.negative
    }

    pub fn inverse(self) -> RhoUnit {
        RhoUnit {
            q_power: -self.q_power,
            negative: self.negative,
        }
    }

    pub fn pow(self, k: i64) -> RhoUnit {
        RhoUnit {
            q_power: self.q_power * k,
            negative: self.negative && k.rem_euclid(2) == 1,
        }
    }
}

impl Mul for RhoUnit {
    type Output = RhoUnit;
    fn mul(self, rhs: RhoUnit) -> RhoUnit {
        RhoUnit {
            q_power: self.q_power + rhs.q_power,
            negative: self.negative ^ rhs.negative,
        }
    }
}

/// Multivariate Laurent polynomial over ℚ(i) in central formal parameters.
///
/// A coefficient with an empty parameter list is a plain scalar and combines
/// with any other parameter list.
#[derive(Clone)]
pub struct Laurent {
    params: Params,
    terms: BTreeMap<Vec<i32>, GaussianRational>,
}

impl Laurent {
    pub fn zero(params: Params) -> Self {
        Laurent {
            params,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: Params) -> Self {
        Self::constant(params, GaussianRational::one())
    }

    pub fn constant(params: Params, c: GaussianRational) -> Self {
        let n = params.len();
        Self::monomial(params, c, vec![0; n])
    }

    /// A parameter-free scalar.
    pub fn scalar(c: GaussianRational) -> Self {
        Self::constant(Arc::from(Vec::<String>::new()), c)
    }

    pub fn integer(n: i64) -> Self {
        Self::scalar(GaussianRational::from_integer(n))
    }

    pub fn monomial(params: Params, c: GaussianRational, exps: Vec<i32>) -> Self {
        assert_eq!(exps.len(), params.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Laurent { params, terms }
    }

    /// The named parameter itself, e.g. `q`.
    pub fn param(params: Params, name: &str) -> Result<Self> {
        let idx = params
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownParam(name.to_string()))?;
        let mut exps = vec![0; params.len()];
        exps[idx] = 1;
        Ok(Self::monomial(params, GaussianRational::one(), exps))
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &GaussianRational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The ℚ(i) value when the coefficient has no parameter dependence.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.terms.is_empty() {
            return Some(GaussianRational::zero());
        }
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            if k.iter().all(|e| *e == 0) {
                return Some(v.clone());
            }
        }
        None
    }

    /// Single-term coefficients `c·q^a·…` with `c ≠ 0` are exactly the units.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    fn promote(&self, target: &Params) -> Laurent {
        if params_eq(&self.params, target) {
            return self.clone();
        }
        debug_assert!(self.params.is_empty());
        let n = target.len();
        Laurent {
            params: target.clone(),
            terms: self
                .terms
                .values()
                .map(|c| (vec![0; n], c.clone()))
                .collect(),
        }
    }

    fn unify(&self, other: &Laurent) -> Result<Params> {
        if params_eq(&self.params, &other.params) || self.params.is_empty() {
            Ok(other.params.clone())
        } else if other.params.is_empty() {
            Ok(self.params.clone())
        } else {
            Err(Error::ParamMismatch {
                left: self.params.to_vec(),
                right: other.params.to_vec(),
            })
        }
    }

    pub fn try_add(&self, other: &Laurent) -> Result<Laurent> {
        let params = self.unify(other)?;
        let mut out = self.promote(&params);
        for (k, v) in other.promote(&params).terms {
            add_term(&mut out.terms, k, v);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Laurent) -> Result<Laurent> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Laurent) -> Result<Laurent> {
        let params = self.unify(other)?;
        let a = self.promote(&params);
        let b = other.promote(&params);
        let mut terms = BTreeMap::new();
        for (ka, va) in &a.terms {
            for (kb, vb) in &b.terms {
                let k: Vec<i32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                add_term(&mut terms, k, va * vb);
            }
        }
        Ok(Laurent { params, terms })
    }

    /// Inverse of a single-term unit.
    pub fn invert(&self) -> Result<Laurent> {
        if self.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (k, v) = self.terms.iter().next().unwrap();
        let inv = v.inv().ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        Ok(Laurent::monomial(
            self.params.clone(),
            inv,
            k.iter().map(|e| -e).collect(),
        ))
    }

    pub fn scale(&self, c: &GaussianRational) -> Laurent {
        if c.is_zero() {
            return Laurent::zero(self.params.clone());
        }
        Laurent {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `q^power·(−1)^negative`, where `q` sits at `q_index`.
    pub fn mul_rho(&self, q_index: Option<usize>, unit: RhoUnit) -> Laurent {
        if unit.is_one() || self.is_zero() {
            return self.clone();
        }
        let shift = |k: &Vec<i32>| -> Vec<i32> {
            let mut k = k.clone();
            if unit.q_power != 0 {
                let i = q_index.expect("q-power requested without a q parameter");
                k[i] += unit.q_power as i32;
            }
            k
        };
        Laurent {
            params: self.params.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (shift(k), if unit.negative { -v } else { v.clone() }))
                .collect(),
        }
    }

    /// Specialises every parameter to 1.
    pub fn eval_at_one(&self) -> GaussianRational {
        self.terms
            .values()
            .fold(GaussianRational::zero(), |acc, v| &acc + v)
    }

    /// `(negative, body)` for use as a leading factor: `body` is `None` for ±1.
    pub(crate) fn render_factor(&self) -> (bool, Option<String>) {
        match self.terms.len() {
            0 => (false, Some("0".into())),
            1 => {
                let (k, c) = self.terms.iter().next().unwrap();
                let (neg, body) = c.render_parts();
                let mut parts: Vec<String> = body.into_iter().collect();
                parts.extend(self.param_factors(k));
                if parts.is_empty() {
                    (neg, None)
                } else {
                    (neg, Some(parts.join("*")))
                }
            }
            _ => (false, Some(format!("({self})"))),
        }
    }

    fn param_factors(&self, exps: &[i32]) -> Vec<String> {
        exps.iter()
            .zip(self.params.iter())
            .filter(|(e, _)| **e != 0)
            .map(|(e, name)| {
                if *e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect()
    }
}

fn add_term(
    terms: &mut BTreeMap<Vec<i32>, GaussianRational>,
    key: Vec<i32>,
    val: GaussianRational,
) {
    if val.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(existing) => {
            let sum = &*existing + &val;
            if sum.is_zero() {
                terms.remove(&key);
            } else {
                *existing = sum;
            }
        }
        None => {
            terms.insert(key, val);
        }
    }
}

impl PartialEq for Laurent {
    fn eq(&self, other: &Laurent) -> bool {
        match self.unify(other) {
            Ok(p) => self.promote(&p).terms == other.promote(&p).terms,
            Err(_) => false,
        }
    }
}

impl Eq for Laurent {}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            let (neg, body) = c.render_parts();
            let mut parts: Vec<String> = body.into_iter().collect();
            parts.extend(self.param_factors(k));
            let text = if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            };
            match (n, neg) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    /// Panics on mismatched parameter lists; use [`Laurent::try_add`] otherwise.
    fn add(self, rhs: &Laurent) -> Laurent {
        self.try_add(rhs).expect("coefficient parameter lists differ")
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self.try_sub(rhs).expect("coefficient parameter lists differ")
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        self.try_mul(rhs).expect("coefficient parameter lists differ")
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }
}

/// Checked sum.
pub fn coeff_add(a: &Laurent, b: &Laurent) -> Result<Laurent> {
    a.try_add(b)
}

/// Checked product.
pub fn coeff_mul(a: &Laurent, b: &Laurent) -> Result<Laurent> {
    a.try_mul(b)
}

/// Inverse of a single-term unit; `NotAUnit` otherwise.
pub fn coeff_invert(a: &Laurent) -> Result<Laurent> {
    a.invert()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp() -> Params {
        params(&["q"])
    }

    fn q_pow(k: i32) -> Laurent {
        Laurent::monomial(qp(), GaussianRational::one(), vec![k])
    }

    #[test]
    fn additive_inverse_cancels() {
        let q = q_pow(1);
        assert!(coeff_add(&q, &-&q).unwrap().is_zero());
    }

    #[test]
    fn disjoint_supports_render_in_order() {
        let a = &Laurent::one(qp()) + &q_pow(1);
        let s = coeff_add(&a, &q_pow(-1)).unwrap();
        assert_eq!(s.to_string(), "q^-1 + 1 + q");
    }

    #[test]
    fn halves_reduce() {
        let h = Laurent::scalar(GaussianRational::from_ratio(1, 2));
        assert!(coeff_add(&h, &h).unwrap().is_one());
    }

    #[test]
    fn products() {
        assert!(coeff_mul(&q_pow(1), &q_pow(-1)).unwrap().is_one());
        let one = Laurent::one(qp());
        let a = &one + &q_pow(1);
        let b = &one - &q_pow(1);
        assert_eq!(coeff_mul(&a, &b).unwrap(), &one - &q_pow(2));
        let i = Laurent::scalar(GaussianRational::i());
        assert_eq!(coeff_mul(&i, &i).unwrap(), Laurent::integer(-1));
    }

    #[test]
    fn inverses() {
        let two_q3 = Laurent::monomial(qp(), GaussianRational::from_integer(2), vec![3]);
        let inv = coeff_invert(&two_q3).unwrap();
        assert_eq!(
            inv,
            Laurent::monomial(qp(), GaussianRational::from_ratio(1, 2), vec![-3])
        );
        assert!(matches!(
            coeff_invert(&Laurent::zero(qp())),
            Err(Error::NotAUnit(_))
        ));
        let iq = Laurent::monomial(qp(), GaussianRational::i(), vec![-1]);
        assert_eq!(
            coeff_invert(&iq).unwrap(),
            Laurent::monomial(qp(), -GaussianRational::i(), vec![1])
        );
        let two_terms = &Laurent::one(qp()) + &q_pow(1);
        assert!(coeff_invert(&two_terms).is_err());
    }

    #[test]
    fn parameter_lists_must_agree() {
        let a = Laurent::param(params(&["q"]), "q").unwrap();
        let b = Laurent::param(params(&["p"]), "p").unwrap();
        assert!(matches!(coeff_add(&a, &b), Err(Error::ParamMismatch { .. })));
        assert!(coeff_mul(&a, &b).is_err());
        // plain scalars mix with anything
        assert!(coeff_add(&a, &Laurent::integer(3)).is_ok());
    }

    #[test]
    fn mixed_gaussian_render() {
        let c = Laurent::scalar(GaussianRational::new(
            BigRational::from_integer(1.into()),
            BigRational::from_integer((-2).into()),
        ));
        assert_eq!(c.to_string(), "(1 - 2*i)");
        let third_i = GaussianRational::new(
            BigRational::zero(),
            BigRational::new(3.into(), 2.into()),
        );
        let c = Laurent::monomial(qp(), third_i, vec![-2]);
        assert_eq!(c.to_string(), "3/2*i*q^-2");
    }
}
