//! Presentations of ρ-commutative algebras and exact normal-form arithmetic.
//!
//! A presentation lists graded generators in a fixed order. Elements are sums
//! of normal-form monomials `g₁^{e₁}⋯gₙ^{eₙ}` (declaration order) with
//! [`Laurent`] coefficients. Reordering two generators costs the unit
//! `ρ(|g|,|h|)`; generators with `ρ(|g|,|g|) = −1` square to zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coefficients::{GaussianRational, Laurent, Params, RhoUnit};
use crate::error::{Error, Result};
use crate::grading::{CommutationFactor, Degree, GradeGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: Degree,
    pub invertible: bool,
    /// Forced on whenever `ρ(|g|,|g|) = −1`.
    pub square_zero: bool,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: Degree) -> Self {
        GeneratorSpec {
            name: name.into(),
            degree,
            invertible: false,
            square_zero: false,
        }
    }

    pub fn invertible(mut self) -> Self {
        self.invertible = true;
        self
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct Presentation {
    name: String,
    factor: CommutationFactor,
    generators: Vec<GeneratorSpec>,
    integral_domain: bool,
    // swap[i][j] = ρ(|g_i|, |g_j|)
    swap: Vec<Vec<RhoUnit>>,
}

impl Presentation {
    pub fn new(
        name: impl Into<String>,
        factor: CommutationFactor,
        generators: Vec<GeneratorSpec>,
        integral_domain: bool,
    ) -> Result<Arc<Self>> {
        let name = name.into();
        let group = factor.group();
        let mut generators = generators;
        for (i, g) in generators.iter_mut().enumerate() {
            if !group.contains(&g.degree) {
                return Err(Error::DimensionMismatch {
                    expected: group.rank(),
                    found: g.degree.slots().len(),
                });
            }
            if g.name.is_empty() {
                return Err(Error::InvalidPresentation(format!("generator {i} has no name")));
            }
            if factor.rho_unit(&g.degree, &g.degree).negative {
                g.square_zero = true;
            }
            if g.square_zero && g.invertible {
                return Err(Error::InvalidPresentation(format!(
                    "generator `{}` squares to zero and cannot be invertible",
                    g.name
                )));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidPresentation(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        let swap = generators
            .iter()
            .map(|g| {
                generators
                    .iter()
                    .map(|h| factor.rho_unit(&g.degree, &h.degree))
                    .collect()
            })
            .collect();
        Ok(Arc::new(Presentation {
            name,
            factor,
            generators,
            integral_domain,
            swap,
        }))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn factor(&self) -> &CommutationFactor {
        &self.factor
    }

    pub fn group(&self) -> GradeGroup {
        self.factor.group()
    }

    pub fn params(&self) -> &Params {
        self.factor.params()
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn integral_domain(&self) -> bool {
        self.integral_domain
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn rho_unit(&self, a: &Degree, b: &Degree) -> RhoUnit {
        self.factor.rho_unit(a, b)
    }

    pub fn rho(&self, a: &Degree, b: &Degree) -> Laurent {
        self.factor.unit_to_laurent(self.rho_unit(a, b))
    }

    pub(crate) fn swap_unit(&self, i: usize, j: usize) -> RhoUnit {
        self.swap[i][j]
    }

    pub fn monomial_degree(&self, m: &Monomial) -> Degree {
        let mut d = self.group().zero();
        for (e, g) in m.0.iter().zip(&self.generators) {
            if *e != 0 {
                d = &d + &(&g.degree * *e as i64);
            }
        }
        d
    }

    pub fn validate_monomial(&self, m: &Monomial) -> Result<()> {
        if m.0.len() != self.generators.len() {
            return Err(Error::InvalidPresentation(format!(
                "monomial has {} exponents, presentation has {} generators",
                m.0.len(),
                self.generators.len()
            )));
        }
        for (e, g) in m.0.iter().zip(&self.generators) {
            if *e < 0 && !g.invertible {
                return Err(Error::NegativePower(g.name.clone()));
            }
            if *e > 1 && g.square_zero {
                return Err(Error::InvalidPresentation(format!(
                    "`{}` squares to zero",
                    g.name
                )));
            }
        }
        Ok(())
    }

    /// Product of two normal-form monomials: `a·b = ρ-factor · (normal form)`,
    /// or `None` when a square-zero generator collides with itself.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(Monomial, RhoUnit)> {
        let n = self.generators.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let e = a.0[i] + b.0[i];
            if self.generators[i].square_zero && e > 1 {
                return None;
            }
            out.push(e);
        }
        // Each block g_j^{b_j} moves left past g_k^{a_k} for every k > j.
        let mut unit = RhoUnit::ONE;
        for j in 0..n {
            if b.0[j] == 0 {
                continue;
            }
            for k in (j + 1)..n {
                if a.0[k] == 0 {
                    continue;
                }
                unit = unit * self.swap[k][j].pow(a.0[k] as i64 * b.0[j] as i64);
            }
        }
        Some((Monomial(out), unit))
    }

    pub fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Exponent vector in generator declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| *e == 0)
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    /// The monomial written as single-letter factors `(generator, ±1)`, in order.
    pub fn letters(&self) -> Vec<(usize, i32)> {
        let mut out = Vec::new();
        for (i, e) in self.0.iter().enumerate() {
            let s = e.signum();
            for _ in 0..e.abs() {
                out.push((i, s));
            }
        }
        out
    }
}

/// Whether an element is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(Degree),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn degree(&self) -> Option<&Degree> {
        match self {
            Homogeneity::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

/// A finite sum of normal-form monomials with Laurent coefficients.
#[derive(Clone)]
pub struct Element {
    pres: Arc<Presentation>,
    terms: BTreeMap<Monomial, Laurent>,
}

impl Element {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        Element {
            pres: pres.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(pres: &Arc<Presentation>) -> Self {
        Self::constant(pres, Laurent::one(pres.params().clone()))
    }

    pub fn constant(pres: &Arc<Presentation>, c: Laurent) -> Self {
        let mut e = Self::zero(pres);
        e.add_term(Monomial::one(pres.num_generators()), c);
        e
    }

    pub fn integer(pres: &Arc<Presentation>, n: i64) -> Self {
        Self::constant(pres, Laurent::integer(n))
    }

    pub fn scalar(pres: &Arc<Presentation>, c: GaussianRational) -> Self {
        Self::constant(pres, Laurent::scalar(c))
    }

    pub fn param(pres: &Arc<Presentation>, name: &str) -> Result<Self> {
        Ok(Self::constant(
            pres,
            Laurent::param(pres.params().clone(), name)?,
        ))
    }

    pub fn generator(pres: &Arc<Presentation>, name: &str) -> Result<Self> {
        let i = pres
            .generator_index(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        Ok(Self::generator_at(pres, i))
    }

    pub fn generator_at(pres: &Arc<Presentation>, i: usize) -> Self {
        let mut m = vec![0; pres.num_generators()];
        m[i] = 1;
        Self::monomial(pres, Monomial(m)).expect("single generator is a valid monomial")
    }

    pub fn monomial(pres: &Arc<Presentation>, m: Monomial) -> Result<Self> {
        pres.validate_monomial(&m)?;
        let mut e = Self::zero(pres);
        e.add_term(m, Laurent::one(pres.params().clone()));
        Ok(e)
    }

    pub fn from_terms(
        pres: &Arc<Presentation>,
        terms: impl IntoIterator<Item = (Monomial, Laurent)>,
    ) -> Result<Self> {
        let mut e = Self::zero(pres);
        for (m, c) in terms {
            pres.validate_monomial(&m)?;
            e.add_term(m, c);
        }
        Ok(e)
    }

    /// Normal form of a word `g₁^{k₁} g₂^{k₂} ⋯` in arbitrary generator order.
    pub fn normalize(pres: &Arc<Presentation>, word: &[(usize, i32)]) -> Result<Self> {
        let n = pres.num_generators();
        let mut acc = Self::one(pres);
        for &(g, k) in word {
            if g >= n {
                return Err(Error::UnknownGenerator(format!("#{g}")));
            }
            let spec = &pres.generators()[g];
            if k < 0 && !spec.invertible {
                return Err(Error::NegativePower(spec.name.clone()));
            }
            if spec.square_zero && k > 1 {
                return Ok(Self::zero(pres));
            }
            let mut m = vec![0; n];
            m[g] = k;
            acc = &acc * &Self::monomial(pres, Monomial(m))?;
        }
        Ok(acc)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Laurent)> {
        self.terms.iter()
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
        self.terms.len() == 1
            && self.terms.iter().all(|(m, c)| m.is_one() && c.is_one())
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                let c = if c.params().is_empty() && !self.pres.params().is_empty() {
                    &Laurent::one(self.pres.params().clone()) * &c
                } else {
                    c
                };
                self.terms.insert(m, c);
            }
        }
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if self.pres.same(&other.pres) {
            Ok(())
        } else {
            Err(Error::PresentationMismatch(
                self.pres.name().to_string(),
                other.pres.name().to_string(),
            ))
        }
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut out = Element::zero(&self.pres);
        let q = self.pres.factor().q_index();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, unit)) = self.pres.mul_monomials(ma, mb) {
                    out.add_term(m, (ca * cb).mul_rho(q, unit));
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by a central coefficient.
    pub fn scale(&self, c: &Laurent) -> Element {
        let mut out = Element::zero(&self.pres);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn scale_rho(&self, unit: RhoUnit) -> Element {
        if unit.is_one() {
            return self.clone();
        }
        let q = self.pres.factor().q_index();
        Element {
            pres: self.pres.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_rho(q, unit)))
                .collect(),
        }
    }

    pub fn degree_of(&self) -> Homogeneity {
        let mut deg: Option<Degree> = None;
        for m in self.terms.keys() {
            let d = self.pres.monomial_degree(m);
            match &deg {
                None => deg = Some(d),
                Some(prev) if *prev != d => return Homogeneity::Inhomogeneous,
                _ => {}
            }
        }
        match deg {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Homogeneous(d),
        }
    }

    /// Decomposition into homogeneous components keyed by degree.
    pub fn split_homogeneous(&self) -> BTreeMap<Degree, Element> {
        let mut out: BTreeMap<Degree, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            let d = self.pres.monomial_degree(m);
            out.entry(d)
                .or_insert_with(|| Element::zero(&self.pres))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// The coefficient when the element is a multiple of `𝟙`.
    pub fn as_scalar(&self) -> Option<Laurent> {
        match self.terms.len() {
            0 => Some(Laurent::zero(self.pres.params().clone())),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// A field element `k·𝟙` with `k ∈ ℚ(i)`.
    pub fn as_field_scalar(&self) -> Option<GaussianRational> {
        self.as_scalar().and_then(|c| c.as_constant())
    }

    /// Two-sided inverse of a unit term `c·m` (unit coefficient, invertible letters).
    pub fn try_inverse(&self) -> Option<Element> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let cinv = c.invert().ok()?;
        let inv_m = Monomial(m.0.iter().map(|e| -e).collect());
        self.pres.validate_monomial(&inv_m).ok()?;
        let (prod, unit) = self.pres.mul_monomials(m, &inv_m)?;
        debug_assert!(prod.is_one());
        let q = self.pres.factor().q_index();
        let mut out = Element::zero(&self.pres);
        out.add_term(inv_m, cinv.mul_rho(q, unit.inverse()));
        Some(out)
    }

    pub fn is_unit(&self) -> bool {
        self.try_inverse().is_some()
    }

    /// Substitutes every formal parameter by 1 in each coefficient.
    pub fn eval_params_at_one(&self) -> Element {
        let mut out = Element::zero(&self.pres);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), Laurent::scalar(c.eval_at_one()));
        }
        out
    }

    fn render_term(&self, m: &Monomial, c: &Laurent) -> (bool, String) {
        let (neg, body) = c.render_factor();
        let mut parts: Vec<String> = body.into_iter().collect();
        for (e, g) in m.0.iter().zip(self.pres.generators()) {
            match *e {
                0 => {}
                1 => parts.push(g.name.clone()),
                e => parts.push(format!("{}^{e}", g.name)),
            }
        }
        let text = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        (neg, text)
    }
}

/// Renders `Σ cᵢ·nameᵢ` in the session grammar (`x*e1 - (1 + q)*e2`).
pub(crate) fn render_linear<'a>(items: impl IntoIterator<Item = (&'a Element, &'a str)>) -> String {
    let mut out = String::new();
    for (coeff, name) in items {
        if coeff.is_zero() {
            continue;
        }
        let (neg, body) = if coeff.len() == 1 {
            let (m, c) = coeff.terms.iter().next().unwrap();
            let (neg, text) = coeff.render_term(m, c);
            if text == "1" {
                (neg, name.to_string())
            } else {
                (neg, format!("{text}*{name}"))
            }
        } else {
            (false, format!("({coeff})*{name}"))
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&body),
            (true, true) => {
                out.push('-');
                out.push_str(&body)
            }
            (false, false) => {
                out.push_str(" + ");
                out.push_str(&body)
            }
            (false, true) => {
                out.push_str(" - ");
                out.push_str(&body)
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `[f,g] = f·g − ρ(|f|,|g|)·g·f`, extended bilinearly over homogeneous parts.
pub fn rho_commutator(f: &Element, g: &Element) -> Result<Element> {
    f.check_same(g)?;
    let pres = f.presentation();
    let mut out = Element::zero(pres);
    for (df, fh) in f.split_homogeneous() {
        for (dg, gh) in g.split_homogeneous() {
            let fg = fh.try_mul(&gh)?;
            let gf = gh.try_mul(&fh)?.scale_rho(pres.rho_unit(&df, &dg));
            out = &out + &(&fg - &gf);
        }
    }
    Ok(out)
}

impl PartialEq for Element {
    fn eq(&self, other: &Element) -> bool {
        self.pres.same(&other.pres) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let (neg, text) = self.render_term(m, c);
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

impl Add for &Element {
    type Output = Element;
    /// Panics when the presentations differ; see [`Element::try_add`].
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("elements from different presentations")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_add(&-rhs).expect("elements from different presentations")
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            pres: self.pres.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl Mul for &Element {
    type Output = Element;
    /// Panics when the presentations differ; see [`Element::try_mul`].
    fn mul(self, rhs: &Element) -> Element {
        self.try_mul(rhs).expect("elements from different presentations")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::params;

    fn quantum_plane() -> Arc<Presentation> {
        let group = GradeGroup::new(2, 0);
        let factor = CommutationFactor::new(
            group,
            vec![vec![0, 1], vec![-1, 0]],
            vec![vec![0, 0], vec![0, 0]],
            params(&["q"]),
            Some("q"),
        )
        .unwrap();
        Presentation::new(
            "qp",
            factor,
            vec![
                GeneratorSpec::new("x", group.degree(&[1, 0]).unwrap()).invertible(),
                GeneratorSpec::new("y", group.degree(&[0, 1]).unwrap()).invertible(),
            ],
            true,
        )
        .unwrap()
    }

    fn superplane() -> Arc<Presentation> {
        let group = GradeGroup::new(0, 1);
        let factor =
            CommutationFactor::new(group, vec![vec![0]], vec![vec![1]], params(&[]), None).unwrap();
        Presentation::new(
            "super",
            factor,
            vec![
                GeneratorSpec::new("x", group.degree(&[0]).unwrap()),
                GeneratorSpec::new("t1", group.degree(&[1]).unwrap()),
                GeneratorSpec::new("t2", group.degree(&[1]).unwrap()),
            ],
            false,
        )
        .unwrap()
    }

    fn q(p: &Arc<Presentation>, k: i32) -> Laurent {
        Laurent::monomial(p.params().clone(), GaussianRational::one(), vec![k])
    }

    #[test]
    fn yx_normalizes_with_inverse_q() {
        let p = quantum_plane();
        let yx = Element::normalize(&p, &[(1, 1), (0, 1)]).unwrap();
        let xy = Element::monomial(&p, Monomial(vec![1, 1])).unwrap();
        assert_eq!(yx, xy.scale(&q(&p, -1)));
        assert_eq!(yx.to_string(), "q^-1*x*y");
    }

    #[test]
    fn odd_square_vanishes() {
        let p = superplane();
        assert!(p.generators()[1].square_zero);
        let t = Element::generator(&p, "t1").unwrap();
        assert!((&t * &t).is_zero());
        assert!(Element::normalize(&p, &[(1, 1), (1, 1)]).unwrap().is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let p = superplane();
        let a = Element::generator(&p, "t1").unwrap();
        let b = Element::generator(&p, "t2").unwrap();
        assert_eq!(&a * &b, -&(&b * &a));
    }

    #[test]
    fn monomial_product_formula() {
        let p = quantum_plane();
        for (n, m, n2, m2) in [(1, 2, 3, -1), (-2, 1, 1, 1), (0, 3, 2, 0)] {
            let a = Element::monomial(&p, Monomial(vec![n, m])).unwrap();
            let b = Element::monomial(&p, Monomial(vec![n2, m2])).unwrap();
            let want = Element::monomial(&p, Monomial(vec![n + n2, m + m2]))
                .unwrap()
                .scale(&q(&p, -m * n2));
            assert_eq!(&a * &b, want);
        }
    }

    #[test]
    fn relation_xy_minus_q_yx() {
        let p = quantum_plane();
        let x = Element::generator(&p, "x").unwrap();
        let y = Element::generator(&p, "y").unwrap();
        let rel = &(&x * &y) - &(&y * &x).scale(&q(&p, 1));
        assert!(rel.is_zero());
        assert_eq!(&Element::one(&p) * &x, x);
    }

    #[test]
    fn negative_power_rejected() {
        let p = superplane();
        assert!(matches!(
            Element::normalize(&p, &[(0, -1)]),
            Err(Error::NegativePower(_))
        ));
    }

    #[test]
    fn degrees() {
        let p = quantum_plane();
        let m = Element::monomial(&p, Monomial(vec![2, -1])).unwrap();
        assert_eq!(
            m.degree_of(),
            Homogeneity::Homogeneous(p.group().degree(&[2, -1]).unwrap())
        );
        assert_eq!(
            Element::one(&p).degree_of(),
            Homogeneity::Homogeneous(p.group().zero())
        );
        let x = Element::generator(&p, "x").unwrap();
        let y = Element::generator(&p, "y").unwrap();
        assert_eq!((&x + &y).degree_of(), Homogeneity::Inhomogeneous);
    }

    #[test]
    fn commutators_vanish() {
        let p = quantum_plane();
        let x = Element::generator(&p, "x").unwrap();
        let f = &(&x * &x) + &Element::generator(&p, "y").unwrap();
        let g = Element::monomial(&p, Monomial(vec![-1, 3])).unwrap();
        assert!(rho_commutator(&f, &g).unwrap().is_zero());
        assert!(rho_commutator(&x, &x).unwrap().is_zero());
    }

    #[test]
    fn unit_inverse() {
        let p = quantum_plane();
        let u = Element::monomial(&p, Monomial(vec![2, -3]))
            .unwrap()
            .scale(&Laurent::scalar(GaussianRational::from_integer(5)));
        let inv = u.try_inverse().unwrap();
        assert!((&u * &inv).as_scalar().unwrap().is_one());
        assert!((&inv * &u).as_scalar().unwrap().is_one());
        let x = Element::generator(&p, "x").unwrap();
        assert!((&x + &Element::one(&p)).try_inverse().is_none());
    }
}
