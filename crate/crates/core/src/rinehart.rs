//! ρ-Lie-Rinehart pairs on free modules with a finite basis.
//!
//! Sections are coefficient vectors `Σ f_α e_α` (coefficients on the left).
//! The bracket is the unique extension of the structure table compatible
//! with the ρ-Leibniz rule and ρ-skewsymmetry:
//!
//! `[f e_α, g e_β] = f·a_α(g)·e_β + ρ(|e_α|,|g|)·f·g·[e_α,e_β] − ρ(|f|+|e_α|, |g|+|e_β|)·g·a_β(f)·e_α`

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::algebra::{render_linear, Element, Homogeneity, Presentation};
use crate::derivation::{der_commutator, DerivationCombo, RhoDerivation};
use crate::error::{Error, Result};
use crate::geometry::{Metric, TensorValue};
use crate::grading::Degree;
use crate::report::{Check, VerificationReport, Witness};
use crate::sampling::Sampler;

#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    coeffs: Vec<Element>,
}

impl Section {
    pub fn new(coeffs: Vec<Element>) -> Self {
        Section { coeffs }
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Element {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Element::is_zero)
    }

    /// Adds `c` to the coefficient of the `i`-th basis section.
    pub fn add_at(&mut self, i: usize, c: &Element) {
        self.coeffs[i] = &self.coeffs[i] + c;
    }

    /// `f·u`, multiplying every coefficient on the left.
    pub fn scale_left(&self, f: &Element) -> Section {
        Section {
            coeffs: self.coeffs.iter().map(|c| f * c).collect(),
        }
    }

    pub fn scale_rho(&self, unit: crate::coefficients::RhoUnit) -> Section {
        Section {
            coeffs: self.coeffs.iter().map(|c| c.scale_rho(unit)).collect(),
        }
    }
}

impl Add for &Section {
    type Output = Section;
    fn add(self, rhs: &Section) -> Section {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len(), "section length mismatch");
        Section {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Section {
    type Output = Section;
    fn sub(self, rhs: &Section) -> Section {
        self + &(-rhs)
    }
}

impl Neg for &Section {
    type Output = Section;
    fn neg(self) -> Section {
        Section {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

pub struct LieRinehartPair {
    name: String,
    algebra: Arc<Presentation>,
    basis: Vec<(String, Degree)>,
    anchors: Vec<DerivationCombo>,
    anchor_tables: Vec<RhoDerivation>,
    structure: Vec<Vec<Section>>,
}

impl fmt::Debug for LieRinehartPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieRinehartPair({}, basis {:?})", self.name, self.basis_names())
    }
}

impl LieRinehartPair {
    /// Checks shapes only; the axioms are checked by [`verify_pair`].
    pub fn new(
        name: impl Into<String>,
        algebra: &Arc<Presentation>,
        basis: Vec<(String, Degree)>,
        anchors: Vec<DerivationCombo>,
        structure: Vec<Vec<Section>>,
    ) -> Result<Arc<Self>> {
        let n = basis.len();
        if anchors.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "{} anchors for {} basis sections",
                anchors.len(),
                n
            )));
        }
        if structure.len() != n || structure.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch(format!("structure table must be {n}x{n}")));
        }
        for (name, d) in &basis {
            if !algebra.group().contains(d) {
                return Err(Error::DimensionMismatch {
                    expected: algebra.group().rank(),
                    found: d.slots().len(),
                });
            }
            if basis.iter().filter(|(m, _)| m == name).count() > 1 {
                return Err(Error::ShapeMismatch(format!("duplicate basis section `{name}`")));
            }
        }
        for a in &anchors {
            if !a.presentation().same(algebra) {
                return Err(Error::PresentationMismatch(
                    algebra.name().to_string(),
                    a.presentation().name().to_string(),
                ));
            }
        }
        for s in structure.iter().flatten() {
            if s.coeffs.len() != n {
                return Err(Error::ShapeMismatch("structure constant has wrong length".into()));
            }
            if s.coeffs.iter().any(|c| !c.presentation().same(algebra)) {
                return Err(Error::PresentationMismatch(
                    algebra.name().to_string(),
                    "structure constant".into(),
                ));
            }
        }
        let anchor_tables = anchors.iter().map(DerivationCombo::evaluate).collect();
        Ok(Arc::new(LieRinehartPair {
            name: name.into(),
            algebra: algebra.clone(),
            basis,
            anchors,
            anchor_tables,
            structure,
        }))
    }

    /// A pair with vanishing structure table.
    pub fn abelian(
        name: impl Into<String>,
        algebra: &Arc<Presentation>,
        basis: Vec<(String, Degree)>,
        anchors: Vec<DerivationCombo>,
    ) -> Result<Arc<Self>> {
        let n = basis.len();
        let zero = Section::new(vec![Element::zero(algebra); n]);
        let structure = vec![vec![zero; n]; n];
        Self::new(name, algebra, basis, anchors, structure)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Arc<Presentation> {
        &self.algebra
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, Degree)] {
        &self.basis
    }

    pub fn basis_names(&self) -> Vec<&str> {
        self.basis.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn basis_degree(&self, i: usize) -> &Degree {
        &self.basis[i].1
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|(n, _)| n == name)
    }

    pub fn anchors(&self) -> &[DerivationCombo] {
        &self.anchors
    }

    pub fn anchor_table(&self, i: usize) -> &RhoDerivation {
        &self.anchor_tables[i]
    }

    pub fn structure(&self, a: usize, b: usize) -> &Section {
        &self.structure[a][b]
    }

    pub fn same(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other)
    }

    pub fn zero_section(&self) -> Section {
        Section::new(vec![Element::zero(&self.algebra); self.rank()])
    }

    pub fn basis_section(&self, i: usize) -> Section {
        let mut s = self.zero_section();
        s.coeffs[i] = Element::one(&self.algebra);
        s
    }

    /// Builds `Σ f·e` from `(basis name, coefficient)` pairs.
    pub fn section(&self, terms: &[(&str, Element)]) -> Result<Section> {
        let mut s = self.zero_section();
        for (name, c) in terms {
            let i = self
                .basis_index(name)
                .ok_or_else(|| Error::UnknownBasisSection(name.to_string()))?;
            if !c.presentation().same(&self.algebra) {
                return Err(Error::PairMismatch(format!(
                    "coefficient of `{name}` is not over {}",
                    self.algebra.name()
                )));
            }
            s.coeffs[i] = &s.coeffs[i] + c;
        }
        Ok(s)
    }

    fn check_section(&self, s: &Section) -> Result<()> {
        if s.coeffs.len() != self.rank() {
            return Err(Error::PairMismatch(format!(
                "section of length {} for pair `{}` of rank {}",
                s.coeffs.len(),
                self.name,
                self.rank()
            )));
        }
        if s.coeffs.iter().any(|c| !c.presentation().same(&self.algebra)) {
            return Err(Error::PairMismatch(format!(
                "section is not over the algebra of `{}`",
                self.name
            )));
        }
        Ok(())
    }

    /// Homogeneous pieces keyed by section degree `|f| + |e_α|`.
    pub fn split_section(&self, s: &Section) -> BTreeMap<Degree, Section> {
        let mut out: BTreeMap<Degree, Section> = BTreeMap::new();
        for (i, c) in s.coeffs.iter().enumerate() {
            for (d, part) in c.split_homogeneous() {
                let sd = &d + &self.basis[i].1;
                let entry = out.entry(sd).or_insert_with(|| self.zero_section());
                entry.coeffs[i] = &entry.coeffs[i] + &part;
            }
        }
        out
    }

    pub fn section_degree(&self, s: &Section) -> Homogeneity {
        let parts = self.split_section(s);
        match parts.len() {
            0 => Homogeneity::Zero,
            1 => Homogeneity::Homogeneous(parts.into_keys().next().unwrap()),
            _ => Homogeneity::Inhomogeneous,
        }
    }

    pub fn render_section(&self, s: &Section) -> String {
        render_linear(s.coeffs.iter().zip(self.basis.iter().map(|(n, _)| n.as_str())))
    }

    /// `a_u = Σ u_α·a_α` as a combination of the declared anchor derivations.
    pub fn anchor_of(&self, u: &Section) -> Result<DerivationCombo> {
        self.check_section(u)?;
        let mut out = DerivationCombo::zero(&self.algebra);
        for (c, a) in u.coeffs.iter().zip(&self.anchors) {
            if !c.is_zero() {
                out = out.add(&a.scale_left(c));
            }
        }
        Ok(out)
    }

    /// `a_u` as a single generator table.
    pub fn anchor_derivation(&self, u: &Section) -> Result<RhoDerivation> {
        self.check_section(u)?;
        let mut out = RhoDerivation::zero(&self.algebra);
        for (c, a) in u.coeffs.iter().zip(&self.anchor_tables) {
            if !c.is_zero() {
                out = out.add(&a.scale_left(c));
            }
        }
        Ok(out)
    }

    /// `a_u(f)`.
    pub fn anchor_apply(&self, u: &Section, f: &Element) -> Result<Element> {
        self.check_section(u)?;
        let mut out = Element::zero(&self.algebra);
        for (c, a) in u.coeffs.iter().zip(&self.anchor_tables) {
            if !c.is_zero() {
                out = &out + &(c * &a.apply(f)?);
            }
        }
        Ok(out)
    }

    pub fn bracket(&self, u: &Section, v: &Section) -> Result<Section> {
        self.check_section(u)?;
        self.check_section(v)?;
        let n = self.rank();
        let mut out = self.zero_section();
        for a in 0..n {
            if u.coeffs[a].is_zero() {
                continue;
            }
            let da = &self.basis[a].1;
            for (df, f) in u.coeffs[a].split_homogeneous() {
                for b in 0..n {
                    if v.coeffs[b].is_zero() {
                        continue;
                    }
                    let db = &self.basis[b].1;
                    for (dg, g) in v.coeffs[b].split_homogeneous() {
                        // f·a_α(g)·e_β
                        let t1 = &f * &self.anchor_tables[a].apply(&g)?;
                        out.coeffs[b] = &out.coeffs[b] + &t1;
                        // ρ(|e_α|,|g|)·f·g·[e_α,e_β]
                        let s = &self.structure[a][b];
                        if !s.is_zero() {
                            let fg = (&f * &g).scale_rho(self.algebra.rho_unit(da, &dg));
                            out = &out + &s.scale_left(&fg);
                        }
                        // −ρ(|f|+|e_α|, |g|+|e_β|)·g·a_β(f)·e_α
                        let t3 = (&g * &self.anchor_tables[b].apply(&f)?)
                            .scale_rho(self.algebra.rho_unit(&(&df + da), &(&dg + db)));
                        out.coeffs[a] = &out.coeffs[a] - &t3;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `a_u(𝒢(v,w)) − 𝒢([u,v],w) − ρ(|u|,|v|)·𝒢(v,[u,w])` for homogeneous `u, v`.
    fn lie_derivative_value(
        &self,
        u: &Section,
        du: &Degree,
        metric: &Metric,
        v: &Section,
        w: &Section,
    ) -> Result<Element> {
        let mut out = self.anchor_apply(u, &metric.eval(v, w)?)?;
        out = &out - &metric.eval(&self.bracket(u, v)?, w)?;
        for (dv, vh) in self.split_section(v) {
            let term = metric
                .eval(&vh, &self.bracket(u, w)?)?
                .scale_rho(self.algebra.rho_unit(du, &dv));
            out = &out - &term;
        }
        Ok(out)
    }

    /// `ℒ_u𝒢` on basis pairs. `u` must be homogeneous.
    pub fn lie_derivative_metric(&self, u: &Section, metric: &Metric) -> Result<TensorValue> {
        self.check_section(u)?;
        let du = match self.section_degree(u) {
            Homogeneity::Homogeneous(d) => d,
            Homogeneity::Zero => self.algebra.group().zero(),
            Homogeneity::Inhomogeneous => {
                return Err(Error::ShapeMismatch("Lie derivative needs a homogeneous section".into()))
            }
        };
        let n = self.rank();
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                table.push(self.lie_derivative_value(
                    u,
                    &du,
                    metric,
                    &self.basis_section(a),
                    &self.basis_section(b),
                )?);
            }
        }
        Ok(TensorValue::new(self, du, 2, table))
    }

    pub fn is_killing(&self, u: &Section, metric: &Metric) -> Result<bool> {
        Ok(self.lie_derivative_metric(u, metric)?.is_zero())
    }

    /// Membership in the isotropy module `ker a`.
    pub fn is_isotropic(&self, u: &Section) -> Result<bool> {
        let a = self.anchor_derivation(u)?;
        Ok(a.is_zero())
    }

    /// A random nonzero homogeneous section.
    pub fn random_section(&self, sampler: &mut Sampler) -> Section {
        let n = self.rank();
        if n == 0 {
            return self.zero_section();
        }
        let pres = &self.algebra;
        let pivot = sampler_index(sampler, n);
        let lead = sampler.homogeneous_element(pres);
        let d = match lead.degree_of() {
            Homogeneity::Homogeneous(d) => &d + &self.basis[pivot].1,
            _ => self.basis[pivot].1.clone(),
        };
        let mut s = self.zero_section();
        s.coeffs[pivot] = lead;
        for i in 0..n {
            if i == pivot || !sampler_coin(sampler) {
                continue;
            }
            let want = &d - &self.basis[i].1;
            if let Some(c) = sampler.homogeneous_of_degree(pres, &want) {
                s.coeffs[i] = c;
            }
        }
        s
    }
}

pub(crate) fn sampler_index(sampler: &mut Sampler, n: usize) -> usize {
    use rand::Rng;
    sampler.rng().random_range(0..n)
}

pub(crate) fn sampler_coin(sampler: &mut Sampler) -> bool {
    use rand::Rng;
    sampler.rng().random_bool(0.5)
}

fn homogeneous_degree(pair: &LieRinehartPair, s: &Section) -> Degree {
    pair.section_degree(s)
        .degree()
        .cloned()
        .unwrap_or_else(|| pair.algebra.group().zero())
}

/// First generator on which two tables differ, as an element witness.
pub(crate) fn derivation_difference(
    x: &RhoDerivation,
    y: &RhoDerivation,
    context: &str,
) -> Option<Witness> {
    let pres = x.presentation();
    for (i, g) in pres.generators().iter().enumerate() {
        let diff = x.image(i) - y.image(i);
        if !diff.is_zero() {
            return Some(Witness::element(
                &diff.to_string(),
                format!("{context}, on generator {}", g.name),
            ));
        }
    }
    None
}

fn section_witness(pair: &LieRinehartPair, s: &Section, context: String) -> Option<Witness> {
    (!s.is_zero()).then(|| Witness::section(&pair.render_section(s), context))
}

/// `[u,[v,w]] − [[u,v],w] − ρ(|u|,|v|)[v,[u,w]]` for homogeneous `u, v`.
pub fn jacobiator(pair: &LieRinehartPair, u: &Section, v: &Section, w: &Section) -> Result<Section> {
    let du = homogeneous_degree(pair, u);
    let dv = homogeneous_degree(pair, v);
    let a = pair.bracket(u, &pair.bracket(v, w)?)?;
    let b = pair.bracket(&pair.bracket(u, v)?, w)?;
    let c = pair
        .bracket(v, &pair.bracket(u, w)?)?
        .scale_rho(pair.algebra.rho_unit(&du, &dv));
    Ok(&(&a - &b) - &c)
}

/// Checks the structure table, the anchor homomorphism, ρ-Jacobi and the
/// ρ-Leibniz rule on all basis tuples and on `samples` random sections.
pub fn verify_pair(pair: &LieRinehartPair, samples: usize, sampler: &mut Sampler) -> VerificationReport {
    let mut report = VerificationReport::new();
    let target = pair.name.as_str();
    let n = pair.rank();
    let pres = &pair.algebra;
    let names = pair.basis_names();
    let run = |f: &mut dyn FnMut() -> Result<Option<Witness>>| -> Option<Witness> {
        match f() {
            Ok(w) => w,
            Err(e) => Some(Witness::element("1", format!("evaluation error: {e}"))),
        }
    };

    // degrees
    let mut w = None;
    'deg: for a in 0..n {
        let want = &pair.basis[a].1;
        match pair.anchor_tables[a].degree_of() {
            Homogeneity::Zero => {}
            Homogeneity::Homogeneous(d) if &d == want => {}
            other => {
                let got = other.degree().map(|d| d.to_string()).unwrap_or("inhomogeneous".into());
                w = Some(Witness::degree(&got, format!("|a_{}| should be {want}", names[a])));
                break 'deg;
            }
        }
        for b in 0..n {
            let want = &pair.basis[a].1 + &pair.basis[b].1;
            match pair.section_degree(&pair.structure[a][b]) {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == want => {}
                other => {
                    let got =
                        other.degree().map(|d| d.to_string()).unwrap_or("inhomogeneous".into());
                    w = Some(Witness::degree(
                        &got,
                        format!("|[{},{}]| should be {want}", names[a], names[b]),
                    ));
                    break 'deg;
                }
            }
        }
    }
    report.push(Check::from_witness("degrees", target, w));

    // skewsymmetry of the table
    let mut w = None;
    'skew: for a in 0..n {
        for b in a..n {
            let unit = pres.rho_unit(&pair.basis[b].1, &pair.basis[a].1);
            let lhs = &pair.structure[b][a];
            let rhs = -&pair.structure[a][b].scale_rho(unit);
            let diff = lhs - &rhs;
            if let Some(x) = section_witness(
                pair,
                &diff,
                format!("[{b},{a}] + rho*[{a},{b}]", a = names[a], b = names[b]),
            ) {
                w = Some(x);
                break 'skew;
            }
        }
    }
    report.push(Check::from_witness("skewsymmetry", target, w));

    // anchor homomorphism on basis pairs
    let mut hom = run(&mut || {
        for a in 0..n {
            for b in 0..n {
                let lhs = pair.anchor_derivation(&pair.structure[a][b])?;
                let rhs = der_commutator(&pair.anchor_tables[a], &pair.anchor_tables[b])?;
                if let Some(x) = derivation_difference(
                    &lhs,
                    &rhs,
                    &format!("a_[{0},{1}] - [a_{0},a_{1}]", names[a], names[b]),
                ) {
                    return Ok(Some(x));
                }
            }
        }
        Ok(None)
    });

    // Jacobi on basis triples
    let mut jac = run(&mut || {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (u, v, w) = (pair.basis_section(a), pair.basis_section(b), pair.basis_section(c));
                    let j = jacobiator(pair, &u, &v, &w)?;
                    if let Some(x) = section_witness(
                        pair,
                        &j,
                        format!("Jacobi on ({}, {}, {})", names[a], names[b], names[c]),
                    ) {
                        return Ok(Some(x));
                    }
                }
            }
        }
        Ok(None)
    });

    let mut leib = None;
    let mut skew_sampled = None;
    if n > 0 {
        for k in 0..samples {
            let u = pair.random_section(sampler);
            let v = pair.random_section(sampler);
            let f = sampler.homogeneous_element(pres);
            let sample_run = |sampler: &mut Sampler| -> Result<(Option<Witness>, Option<Witness>, Option<Witness>, Option<Witness>)> {
                let du = homogeneous_degree(pair, &u);
                let dv = homogeneous_degree(pair, &v);
                let df = f.degree_of().degree().cloned().unwrap_or_else(|| pres.group().zero());
                let ctx = format!(
                    "sample {k}: u = {}, v = {}",
                    pair.render_section(&u),
                    pair.render_section(&v)
                );
                // [u, f v] = a_u(f) v + ρ(|u|,|f|) f [u,v]
                let lhs = pair.bracket(&u, &v.scale_left(&f))?;
                let rhs = &v.scale_left(&pair.anchor_apply(&u, &f)?)
                    + &pair.bracket(&u, &v)?.scale_left(&f).scale_rho(pres.rho_unit(&du, &df));
                let l = section_witness(pair, &(&lhs - &rhs), format!("{ctx}, f = {f}"));
                // [v,u] = −ρ(|v|,|u|)[u,v]
                let s = &pair.bracket(&v, &u)?
                    + &pair.bracket(&u, &v)?.scale_rho(pres.rho_unit(&dv, &du));
                let s = section_witness(pair, &s, ctx.clone());
                // a_[u,v] = [a_u, a_v]
                let h = derivation_difference(
                    &pair.anchor_derivation(&pair.bracket(&u, &v)?)?,
                    &der_commutator(&pair.anchor_derivation(&u)?, &pair.anchor_derivation(&v)?)?,
                    &format!("{ctx}: a_[u,v] - [a_u,a_v]"),
                );
                let w = pair.random_section(sampler);
                let j = jacobiator(pair, &u, &v, &w)?;
                let j = section_witness(
                    pair,
                    &j,
                    format!("{ctx}, w = {}: Jacobi", pair.render_section(&w)),
                );
                Ok((l, s, h, j))
            };
            match sample_run(sampler) {
                Ok((l, s, h, j)) => {
                    leib = leib.or(l);
                    skew_sampled = skew_sampled.or(s);
                    hom = hom.or(h);
                    jac = jac.or(j);
                }
                Err(e) => {
                    leib = leib.or(Some(Witness::element("1", format!("evaluation error: {e}"))));
                }
            }
            if leib.is_some() && skew_sampled.is_some() && hom.is_some() && jac.is_some() {
                break;
            }
        }
    }
    if let Some(x) = skew_sampled {
        if report.status_of("skewsymmetry") == Some(crate::report::Status::Pass) {
            report.checks.retain(|c| c.check != "skewsymmetry");
            report.push(Check::fail("skewsymmetry", target, x));
        }
    }
    report.push(Check::from_witness("anchor homomorphism", target, hom));
    report.push(Check::from_witness("Jacobi", target, jac));
    report.push(Check::from_witness("Leibniz rule", target, leib));
    report
}

/// Checks that `phi` (images of `p`'s basis in `q`) is a morphism of pairs
/// over the same algebra.
pub fn check_morphism(
    phi: &[Section],
    p: &LieRinehartPair,
    q: &LieRinehartPair,
    samples: usize,
    sampler: &mut Sampler,
) -> Result<VerificationReport> {
    if !p.algebra.same(&q.algebra) {
        return Err(Error::PairMismatch(format!(
            "`{}` and `{}` are over different algebras",
            p.name, q.name
        )));
    }
    if phi.len() != p.rank() {
        return Err(Error::ShapeMismatch(format!(
            "morphism has {} rows, `{}` has rank {}",
            phi.len(),
            p.name,
            p.rank()
        )));
    }
    for s in phi {
        q.check_section(s)?;
    }
    let target = format!("{} -> {}", p.name, q.name);
    let apply = |u: &Section| -> Section {
        let mut out = q.zero_section();
        for (c, img) in u.coeffs.iter().zip(phi) {
            if !c.is_zero() {
                out = &out + &img.scale_left(c);
            }
        }
        out
    };
    let names = p.basis_names();
    let mut report = VerificationReport::new();

    let mut w = None;
    for (a, img) in phi.iter().enumerate() {
        match q.section_degree(img) {
            Homogeneity::Zero => {}
            Homogeneity::Homogeneous(d) if &d == p.basis_degree(a) => {}
            other => {
                let got = other.degree().map(|d| d.to_string()).unwrap_or("inhomogeneous".into());
                w = Some(Witness::degree(
                    &got,
                    format!("|phi({})| should be {}", names[a], p.basis_degree(a)),
                ));
                break;
            }
        }
    }
    report.push(Check::from_witness("degree preservation", &target, w));

    let mut br = None;
    let mut an = None;
    for a in 0..p.rank() {
        let ea = p.basis_section(a);
        if an.is_none() {
            an = derivation_difference(
                &p.anchor_derivation(&ea)?,
                &q.anchor_derivation(&phi[a])?,
                &format!("a_{0} - a'_phi({0})", names[a]),
            );
        }
        for b in 0..p.rank() {
            if br.is_some() {
                break;
            }
            let eb = p.basis_section(b);
            let lhs = apply(&p.bracket(&ea, &eb)?);
            let rhs = q.bracket(&phi[a], &phi[b])?;
            br = section_witness(
                q,
                &(&lhs - &rhs),
                format!("phi([{0},{1}]) - [phi({0}),phi({1})]'", names[a], names[b]),
            );
        }
    }
    for k in 0..samples {
        if br.is_some() && an.is_some() {
            break;
        }
        let u = p.random_section(sampler);
        let v = p.random_section(sampler);
        let ctx = format!("sample {k}: u = {}, v = {}", p.render_section(&u), p.render_section(&v));
        if br.is_none() {
            let lhs = apply(&p.bracket(&u, &v)?);
            let rhs = q.bracket(&apply(&u), &apply(&v))?;
            br = section_witness(q, &(&lhs - &rhs), ctx.clone());
        }
        if an.is_none() {
            an = derivation_difference(
                &p.anchor_derivation(&u)?,
                &q.anchor_derivation(&apply(&u))?,
                &format!("{ctx}: a_u - a'_phi(u)"),
            );
        }
    }
    report.push(Check::from_witness("bracket compatibility", &target, br));
    report.push(Check::from_witness("anchor compatibility", &target, an));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn torus_constant_sections_commute() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let b = p.bracket(&p.basis_section(0), &p.basis_section(1)).unwrap();
        assert!(b.is_zero());
    }

    #[test]
    fn torus_anchor_of_section() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let u = Element::generator(pres, "u").unwrap();
        let v = Element::generator(pres, "v").unwrap();
        let s = p.section(&[("e1", u.clone()), ("e2", v.clone())]).unwrap();
        assert_eq!(p.anchor_of(&s).unwrap().to_string(), "u*du + v*dv");
        assert!(p.anchor_of(&p.zero_section()).unwrap().is_zero());
    }

    #[test]
    fn quantum_plane_anchor_is_module_map() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let x = Element::generator(p.algebra(), "x").unwrap();
        let s = p.section(&[("dx", x)]).unwrap();
        assert_eq!(p.anchor_of(&s).unwrap().to_string(), "x*dx");
    }

    #[test]
    fn bracket_closes_on_sigma_line() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let x = Element::generator(pres, "x").unwrap();
        let y = Element::generator(pres, "y").unwrap();
        let sigma = p.basis_section(1);
        let got = p.bracket(&sigma.scale_left(&x), &sigma.scale_left(&y)).unwrap();
        // x·a_σ(y) − ρ(|x|,|y|)·y·a_σ(x) = x·y
        let want = sigma.scale_left(&(&x * &y));
        assert_eq!(got, want);
    }

    #[test]
    fn builtin_pairs_verify() {
        let mut s = Sampler::new(7);
        for e in [builtins::quantum_plane().unwrap(), builtins::nc_torus(false).unwrap()] {
            let rep = verify_pair(e.pair().unwrap(), 20, &mut s);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn corrupted_structure_constant_fails() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let n = p.rank();
        let mut structure: Vec<Vec<Section>> =
            (0..n).map(|a| (0..n).map(|b| p.structure(a, b).clone()).collect()).collect();
        let y = Element::generator(pres, "y").unwrap();
        structure[0][1] = p.section(&[("dy", y.clone())]).unwrap();
        structure[1][0] = p.section(&[("dy", -&y)]).unwrap();
        let bad = LieRinehartPair::new(
            "bad",
            pres,
            p.basis().to_vec(),
            p.anchors().to_vec(),
            structure,
        )
        .unwrap();
        let rep = verify_pair(&bad, 5, &mut Sampler::new(1));
        assert!(!rep.passed());
        assert_eq!(rep.status_of("anchor homomorphism"), Some(crate::report::Status::Fail));
    }

    #[test]
    fn isotropy() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        assert!(p.is_isotropic(&p.zero_section()).unwrap());
        assert!(!p.is_isotropic(&p.basis_section(0)).unwrap());
    }

    #[test]
    fn killing_sections_of_golden_examples() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let g = e.metric().unwrap();
        assert!(p.is_killing(&p.basis_section(1), g).unwrap());
        assert!(p.is_killing(&p.zero_section(), g).unwrap());
        let t = builtins::nc_torus(false).unwrap();
        let p = t.pair().unwrap();
        assert!(p.is_killing(&p.basis_section(0), t.metric().unwrap()).unwrap());
    }

    #[test]
    fn identity_morphism_and_non_unit_scaling() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let mut s = Sampler::new(3);
        let id: Vec<Section> = (0..p.rank()).map(|i| p.basis_section(i)).collect();
        assert!(check_morphism(&id, p, p, 5, &mut s).unwrap().passed());
        let two = Element::integer(p.algebra(), 2);
        let mut scaled = id.clone();
        scaled[0] = scaled[0].scale_left(&two);
        let rep = check_morphism(&scaled, p, p, 5, &mut s).unwrap();
        assert_eq!(rep.status_of("anchor compatibility"), Some(crate::report::Status::Fail));
    }
}
