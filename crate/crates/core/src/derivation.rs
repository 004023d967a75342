//! ρ-derivations given by their action on generators.
//!
//! A derivation is stored only as the table `g ↦ X(g)`; values on arbitrary
//! elements are computed with the ρ-Leibniz rule
//! `X(ab) = X(a)·b + ρ(|X|,|a|)·a·X(b)`.
//! Inhomogeneous tables are split into homogeneous components by degree, so
//! the same table also represents left combinations `Σ fᵢ·Xᵢ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{render_linear, Element, Homogeneity, Monomial, Presentation};
use crate::error::{Error, Result};
use crate::grading::Degree;
use crate::report::{Check, VerificationReport, Witness};

#[derive(Clone)]
pub struct RhoDerivation {
    pres: Arc<Presentation>,
    declared: Option<Degree>,
    images: Vec<Element>,
}

struct Component<'a> {
    degree: Degree,
    images: Vec<Element>,
    pres: &'a Arc<Presentation>,
}

impl RhoDerivation {
    pub fn new(
        pres: &Arc<Presentation>,
        declared: Option<Degree>,
        images: Vec<Element>,
    ) -> Result<Self> {
        if images.len() != pres.num_generators() {
            return Err(Error::DerivationShape {
                expected: pres.num_generators(),
                found: images.len(),
            });
        }
        for img in &images {
            if !img.presentation().same(pres) {
                return Err(Error::PresentationMismatch(
                    pres.name().to_string(),
                    img.presentation().name().to_string(),
                ));
            }
        }
        if let Some(d) = &declared {
            if !pres.group().contains(d) {
                return Err(Error::DimensionMismatch {
                    expected: pres.group().rank(),
                    found: d.slots().len(),
                });
            }
        }
        Ok(RhoDerivation {
            pres: pres.clone(),
            declared,
            images,
        })
    }

    /// Builds a table from `(generator name, image)` pairs; unlisted generators map to 0.
    pub fn from_images(
        pres: &Arc<Presentation>,
        declared: Option<Degree>,
        images: &[(&str, Element)],
    ) -> Result<Self> {
        let mut table = vec![Element::zero(pres); pres.num_generators()];
        for (name, img) in images {
            let i = pres
                .generator_index(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            table[i] = img.clone();
        }
        Self::new(pres, declared, table)
    }

    pub fn zero(pres: &Arc<Presentation>) -> Self {
        RhoDerivation {
            pres: pres.clone(),
            declared: None,
            images: vec![Element::zero(pres); pres.num_generators()],
        }
    }

    /// Coordinate derivation `∂_g`: `∂_g(g) = 1`, `∂_g(h) = 0`, degree `−|g|`.
    pub fn coordinate(pres: &Arc<Presentation>, generator: &str) -> Result<Self> {
        let i = pres
            .generator_index(generator)
            .ok_or_else(|| Error::UnknownGenerator(generator.to_string()))?;
        let mut images = vec![Element::zero(pres); pres.num_generators()];
        images[i] = Element::one(pres);
        let degree = -&pres.generators()[i].degree;
        Self::new(pres, Some(degree), images)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Element {
        &self.images[generator]
    }

    pub fn declared_degree(&self) -> Option<&Degree> {
        self.declared.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Element::is_zero)
    }

    fn components(&self) -> Vec<Component<'_>> {
        let n = self.pres.num_generators();
        let mut by_degree: BTreeMap<Degree, Vec<Element>> = BTreeMap::new();
        for (i, img) in self.images.iter().enumerate() {
            let gd = &self.pres.generators()[i].degree;
            for (d, part) in img.split_homogeneous() {
                let xd = &d - gd;
                by_degree
                    .entry(xd)
                    .or_insert_with(|| vec![Element::zero(&self.pres); n])[i] = part;
            }
        }
        by_degree
            .into_iter()
            .map(|(degree, images)| Component {
                degree,
                images,
                pres: &self.pres,
            })
            .collect()
    }

    /// Degree read off the images (the declared degree is not consulted).
    pub fn degree_of(&self) -> Homogeneity {
        let comps = self.components();
        match comps.len() {
            0 => Homogeneity::Zero,
            1 => Homogeneity::Homogeneous(comps[0].degree.clone()),
            _ => Homogeneity::Inhomogeneous,
        }
    }

    /// The degree used for ρ-factors: the images' common degree, falling back
    /// to the declared one for the zero table.
    pub fn degree(&self) -> Option<Degree> {
        match self.degree_of() {
            Homogeneity::Homogeneous(d) => Some(d),
            Homogeneity::Zero => self.declared.clone(),
            Homogeneity::Inhomogeneous => None,
        }
    }

    /// Homogeneous pieces `X = Σ_d X_d`.
    pub fn homogeneous_parts(&self) -> Vec<RhoDerivation> {
        self.components()
            .into_iter()
            .map(|c| RhoDerivation {
                pres: self.pres.clone(),
                declared: Some(c.degree),
                images: c.images,
            })
            .collect()
    }

    pub fn apply(&self, f: &Element) -> Result<Element> {
        if !f.presentation().same(&self.pres) {
            return Err(Error::PresentationMismatch(
                self.pres.name().to_string(),
                f.presentation().name().to_string(),
            ));
        }
        let mut out = Element::zero(&self.pres);
        for comp in self.components() {
            out = &out + &comp.apply(f);
        }
        Ok(out)
    }

    /// `f·X`, i.e. `g ↦ f·X(g)`.
    pub fn scale_left(&self, f: &Element) -> RhoDerivation {
        let declared = match (&self.declared, f.degree_of()) {
            (Some(d), Homogeneity::Homogeneous(fd)) => Some(d + &fd),
            _ => None,
        };
        RhoDerivation {
            pres: self.pres.clone(),
            declared,
            images: self.images.iter().map(|img| f * img).collect(),
        }
    }

    pub fn add(&self, other: &RhoDerivation) -> RhoDerivation {
        let declared = if self.declared == other.declared {
            self.declared.clone()
        } else {
            None
        };
        RhoDerivation {
            pres: self.pres.clone(),
            declared,
            images: self
                .images
                .iter()
                .zip(&other.images)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RhoDerivation) -> RhoDerivation {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RhoDerivation {
        RhoDerivation {
            pres: self.pres.clone(),
            declared: self.declared.clone(),
            images: self.images.iter().map(|a| -a).collect(),
        }
    }

    /// Renders the table as `{ x -> ..., y -> ... }`.
    pub fn table_string(&self) -> String {
        let items: Vec<String> = self
            .pres
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, img)| format!("{} -> {}", g.name, img))
            .collect();
        format!("{{ {} }}", items.join(", "))
    }
}

impl Component<'_> {
    /// `X(g⁻¹) = −ρ(|X|,|g|)⁻¹·g⁻¹·X(g)·g⁻¹`
    fn letter_image(&self, g: usize, sign: i32) -> Element {
        let img = &self.images[g];
        if sign > 0 || img.is_zero() {
            return img.clone();
        }
        let n = self.pres.num_generators();
        let mut e = vec![0; n];
        e[g] = -1;
        let ginv = Element::monomial(self.pres, Monomial(e)).expect("invertible generator");
        let unit = self
            .pres
            .rho_unit(&self.degree, &self.pres.generators()[g].degree)
            .inverse();
        -&(&(&ginv * img) * &ginv).scale_rho(unit)
    }

    fn apply(&self, f: &Element) -> Element {
        let pres = self.pres;
        let n = pres.num_generators();
        let mut out = Element::zero(pres);
        for (m, c) in f.terms() {
            let letters = m.letters();
            let mut prefix = vec![0i32; n];
            for (pos, &(g, s)) in letters.iter().enumerate() {
                let image = self.letter_image(g, s);
                if !image.is_zero() {
                    let mut suffix = vec![0i32; n];
                    for &(h, t) in &letters[pos + 1..] {
                        suffix[h] += t;
                    }
                    let pre = Monomial(prefix.clone());
                    let unit = pres.rho_unit(&self.degree, &pres.monomial_degree(&pre));
                    let pre_el = Element::monomial(pres, pre).expect("prefix of a valid monomial");
                    let suf_el =
                        Element::monomial(pres, Monomial(suffix)).expect("suffix of a valid monomial");
                    let term = &(&pre_el * &image) * &suf_el;
                    out = &out + &term.scale_rho(unit).scale(c);
                }
                prefix[g] += s;
            }
        }
        out
    }

    /// `X(a)·b + ρ(|X|,|a|)·a·X(b)` for two single letters.
    fn leibniz_pair(&self, a: (usize, i32), b: (usize, i32)) -> Element {
        let pres = self.pres;
        let letter = |(g, s): (usize, i32)| {
            let mut e = vec![0; pres.num_generators()];
            e[g] = s;
            Element::monomial(pres, Monomial(e)).expect("valid letter")
        };
        let (la, lb) = (letter(a), letter(b));
        let da = pres.monomial_degree(&Monomial({
            let mut e = vec![0; pres.num_generators()];
            e[a.0] = a.1;
            e
        }));
        let first = &self.letter_image(a.0, a.1) * &lb;
        let second = (&la * &self.letter_image(b.0, b.1)).scale_rho(pres.rho_unit(&self.degree, &da));
        &first + &second
    }
}

impl PartialEq for RhoDerivation {
    fn eq(&self, other: &RhoDerivation) -> bool {
        self.pres.same(&other.pres) && self.images == other.images
    }
}

impl fmt::Debug for RhoDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table_string())
    }
}

/// Applies a derivation (or an evaluated combination) to an element.
pub fn apply(x: &RhoDerivation, f: &Element) -> Result<Element> {
    x.apply(f)
}

/// `[X,Y] = X∘Y − ρ(|X|,|Y|)·Y∘X`, returned as a new generator table.
pub fn der_commutator(x: &RhoDerivation, y: &RhoDerivation) -> Result<RhoDerivation> {
    if !x.pres.same(&y.pres) {
        return Err(Error::PresentationMismatch(
            x.pres.name().to_string(),
            y.pres.name().to_string(),
        ));
    }
    let pres = &x.pres;
    let n = pres.num_generators();
    let mut images = vec![Element::zero(pres); n];
    let xs = x.components();
    let ys = y.components();
    for cx in &xs {
        for cy in &ys {
            let unit = pres.rho_unit(&cx.degree, &cy.degree);
            for (g, slot) in images.iter_mut().enumerate() {
                let xy = cx.apply(&cy.images[g]);
                let yx = cy.apply(&cx.images[g]).scale_rho(unit);
                *slot = &*slot + &(&xy - &yx);
            }
        }
    }
    let declared = match (x.degree(), y.degree()) {
        (Some(a), Some(b)) => Some(&a + &b),
        _ => None,
    };
    RhoDerivation::new(pres, declared, images)
}

/// Checks the degree invariant and that `X` kills every defining relation:
/// `hg − ρ(|h|,|g|)gh`, `g² ` for square-zero `g`, and `gg⁻¹ − 1`, `g⁻¹g − 1`.
pub fn verify_derivation(x: &RhoDerivation, name: &str) -> VerificationReport {
    let pres = &x.pres;
    let gens = pres.generators();
    let mut report = VerificationReport::new();

    let mut degree_witness = None;
    if let Some(d) = &x.declared {
        for (g, img) in gens.iter().zip(&x.images) {
            let want = d + &g.degree;
            match img.degree_of() {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(got) if got == want => {}
                other => {
                    let got = match other {
                        Homogeneity::Homogeneous(got) => got.to_string(),
                        _ => "inhomogeneous".to_string(),
                    };
                    degree_witness = Some(Witness::degree(
                        &got,
                        format!("|X({})| should be {want}", g.name),
                    ));
                    break;
                }
            }
        }
    }
    report.push(Check::from_witness("image degrees", name, degree_witness));

    let comps = x.components();
    let mut relation_witness = None;
    'outer: for comp in &comps {
        for i in 0..gens.len() {
            for j in i..gens.len() {
                let residual = if i == j {
                    if !gens[i].square_zero {
                        continue;
                    }
                    comp.leibniz_pair((i, 1), (i, 1))
                } else {
                    // relation g_j g_i − ρ(|g_j|,|g_i|) g_i g_j
                    let lhs = comp.leibniz_pair((j, 1), (i, 1));
                    let rhs = comp
                        .leibniz_pair((i, 1), (j, 1))
                        .scale_rho(pres.swap_unit(j, i));
                    &lhs - &rhs
                };
                if !residual.is_zero() {
                    relation_witness = Some(Witness::element(
                        &residual.to_string(),
                        format!("X applied to the {}/{} relation", gens[j].name, gens[i].name),
                    ));
                    break 'outer;
                }
            }
            if gens[i].invertible {
                for (a, b) in [((i, 1), (i, -1)), ((i, -1), (i, 1))] {
                    let residual = comp.leibniz_pair(a, b);
                    if !residual.is_zero() {
                        relation_witness = Some(Witness::element(
                            &residual.to_string(),
                            format!("X applied to the inverse relation of {}", gens[i].name),
                        ));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.push(Check::from_witness("defining relations", name, relation_witness));
    report
}

/// A left combination `Σ fᵢ·Xᵢ` over named derivations.
#[derive(Clone)]
pub struct DerivationCombo {
    pres: Arc<Presentation>,
    terms: Vec<ComboTerm>,
}

#[derive(Clone)]
pub struct ComboTerm {
    pub name: String,
    pub coeff: Element,
    pub derivation: Arc<RhoDerivation>,
}

impl DerivationCombo {
    pub fn zero(pres: &Arc<Presentation>) -> Self {
        DerivationCombo {
            pres: pres.clone(),
            terms: Vec::new(),
        }
    }

    pub fn single(name: &str, derivation: Arc<RhoDerivation>) -> Self {
        let pres = derivation.presentation().clone();
        let mut c = Self::zero(&pres);
        c.add_term(name, Element::one(&pres), derivation);
        c
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn terms(&self) -> &[ComboTerm] {
        &self.terms
    }

    pub fn add_term(&mut self, name: &str, coeff: Element, derivation: Arc<RhoDerivation>) {
        if let Some(t) = self.terms.iter_mut().find(|t| t.name == name) {
            t.coeff = &t.coeff + &coeff;
        } else {
            self.terms.push(ComboTerm {
                name: name.to_string(),
                coeff,
                derivation,
            });
        }
        self.terms.retain(|t| !t.coeff.is_zero());
    }

    pub fn add(&self, other: &DerivationCombo) -> DerivationCombo {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_term(&t.name, t.coeff.clone(), t.derivation.clone());
        }
        out
    }

    /// `f·(Σ cᵢ Xᵢ) = Σ (f cᵢ) Xᵢ`.
    pub fn scale_left(&self, f: &Element) -> DerivationCombo {
        let mut out = DerivationCombo::zero(&self.pres);
        for t in &self.terms {
            out.add_term(&t.name, f * &t.coeff, t.derivation.clone());
        }
        out
    }

    pub fn coefficient(&self, name: &str) -> Option<&Element> {
        self.terms.iter().find(|t| t.name == name).map(|t| &t.coeff)
    }

    /// Collapses the combination to a single generator table.
    pub fn evaluate(&self) -> RhoDerivation {
        let mut acc = RhoDerivation::zero(&self.pres);
        let mut first = true;
        for t in &self.terms {
            let scaled = t.derivation.scale_left(&t.coeff);
            acc = if first { scaled } else { acc.add(&scaled) };
            first = false;
        }
        acc
    }

    pub fn apply(&self, f: &Element) -> Result<Element> {
        self.evaluate().apply(f)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for DerivationCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = render_linear(self.terms.iter().map(|t| (&t.coeff, t.name.as_str())));
        f.write_str(&s)
    }
}

impl fmt::Debug for DerivationCombo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GeneratorSpec;
    use crate::coefficients::{params, GaussianRational, Laurent};
    use crate::grading::{CommutationFactor, GradeGroup};

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

    fn mono(p: &Arc<Presentation>, e: &[i32]) -> Element {
        Element::monomial(p, Monomial(e.to_vec())).unwrap()
    }

    fn delta(p: &Arc<Presentation>, g: &str) -> RhoDerivation {
        let x = Element::generator(p, g).unwrap();
        RhoDerivation::from_images(p, Some(p.group().zero()), &[(g, x)]).unwrap()
    }

    #[test]
    fn partial_x_on_x2y() {
        let p = quantum_plane();
        let dx = RhoDerivation::coordinate(&p, "x").unwrap();
        let got = dx.apply(&mono(&p, &[2, 1])).unwrap();
        assert_eq!(got, mono(&p, &[1, 1]).scale(&Laurent::integer(2)));
    }

    #[test]
    fn euler_derivation_counts_degree() {
        let p = quantum_plane();
        let dx = delta(&p, "x");
        for (n, m) in [(3, 1), (-2, 2), (0, -1), (-1, -3)] {
            let f = mono(&p, &[n, m]);
            assert_eq!(dx.apply(&f).unwrap(), f.scale(&Laurent::integer(n as i64)));
        }
    }

    #[test]
    fn derivations_kill_unit() {
        let p = quantum_plane();
        let one = Element::one(&p);
        assert!(RhoDerivation::coordinate(&p, "y").unwrap().apply(&one).unwrap().is_zero());
        assert!(delta(&p, "x").apply(&one).unwrap().is_zero());
    }

    #[test]
    fn coordinate_derivations_verify() {
        let p = quantum_plane();
        for g in ["x", "y"] {
            let rep = verify_derivation(&RhoDerivation::coordinate(&p, g).unwrap(), g);
            assert!(rep.passed(), "{rep}");
            let rep = verify_derivation(&delta(&p, g), g);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn wrong_degree_is_reported() {
        let p = quantum_plane();
        let y = Element::generator(&p, "y").unwrap();
        let bogus = RhoDerivation::from_images(&p, Some(p.group().zero()), &[("x", y)]).unwrap();
        let rep = verify_derivation(&bogus, "bogus");
        assert_eq!(rep.status_of("image degrees"), Some(crate::report::Status::Fail));
    }

    #[test]
    fn relation_breaking_table_is_reported() {
        // an even generator declared square-zero: X(e) = 1 gives X(e·e) = 2e
        let group = GradeGroup::new(1, 0);
        let factor = CommutationFactor::trivial(group, params(&[]));
        let mut e = GeneratorSpec::new("e", group.zero());
        e.square_zero = true;
        let p = Presentation::new("dual", factor, vec![e], false).unwrap();
        let one = Element::one(&p);
        let bad = RhoDerivation::from_images(&p, Some(group.zero()), &[("e", one)]).unwrap();
        let rep = verify_derivation(&bad, "bad");
        assert_eq!(rep.status_of("defining relations"), Some(crate::report::Status::Fail));
        let w = rep.get("defining relations").unwrap().witness.as_ref().unwrap();
        assert_eq!(w.expr, "2*e");
    }

    #[test]
    fn commutator_of_euler_derivations_vanishes() {
        let p = quantum_plane();
        let c = der_commutator(&delta(&p, "x"), &delta(&p, "y")).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn inverse_letter_rule() {
        let p = quantum_plane();
        let dy = RhoDerivation::coordinate(&p, "y").unwrap();
        // ∂_y(y^-1) = −y^-2 up to the ρ factor, which is 1 here
        let got = dy.apply(&mono(&p, &[0, -1])).unwrap();
        assert_eq!(got, -&mono(&p, &[0, -2]));
        // and 0 = ∂_y(y·y^-1)
        let lhs = dy.apply(&(&mono(&p, &[0, 1]) * &mono(&p, &[0, -1]))).unwrap();
        assert!(lhs.is_zero());
    }

    #[test]
    fn combo_evaluates_to_scaled_table() {
        let p = quantum_plane();
        let dx = Arc::new(delta(&p, "x"));
        let y = Element::generator(&p, "y").unwrap();
        let combo = DerivationCombo::single("dx", dx.clone()).scale_left(&y);
        assert_eq!(combo.to_string(), "y*dx");
        let f = mono(&p, &[2, 0]);
        let want = &y * &dx.apply(&f).unwrap();
        assert_eq!(combo.apply(&f).unwrap(), want);
        let half = Element::scalar(&p, GaussianRational::from_ratio(1, 2));
        assert_eq!(combo.scale_left(&half).to_string(), "1/2*y*dx");
    }
}
