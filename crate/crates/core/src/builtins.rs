//! Catalog of the standard example structures, built programmatically.
//!
//! Every constructor runs the relevant verifiers before returning, so an
//! entry that comes back `Ok` is a trusted fixture.

use std::sync::Arc;

use crate::algebra::{Element, GeneratorSpec, Monomial, Presentation};
use crate::carroll::{verify_carroll, CarrollStructure};
use crate::coefficients::{params, GaussianRational};
use crate::derivation::{verify_derivation, DerivationCombo, RhoDerivation};
use crate::error::{Error, Result};
use crate::geometry::{check_metric_compatibility, verify_metric, Connection, Metric};
use crate::grading::{CommutationFactor, Degree, GradeGroup};
use crate::report::{Status, VerificationReport};
use crate::rinehart::{verify_pair, LieRinehartPair, Section};
use crate::sampling::Sampler;

/// Keys accepted by [`build`], with a one-line description each.
pub const CATALOG: &[(&str, &str)] = &[
    ("quantum_plane", "extended Manin quantum plane K_q[x^±1, y^±1] with Carroll structure sigma = dy"),
    ("nc_torus", "noncommutative 2-torus, canonical action pair, G(f,g) = f_v g_v, sigma = (1,0)"),
    ("nc_torus_tau", "noncommutative 2-torus with the 2*pi*i normalisation kept as tau*i"),
    ("r22_super", "superdomain R^{2|2} (polynomial coefficients), sigma = dx"),
    ("z22", "Z2xZ2-domain R^{1|1,2,2} (polynomial coefficients), sigma = dx"),
    ("eq2", "quantum Euclidean group E_q(2) with torus-style Carroll structure"),
    ("laurent_line", "degree-zero Laurent line K[w^±1] with cyclic derivation module"),
    ("tensor_product", "nc_torus (auxiliary metric) tensor laurent_line, sigma = 1 (x) dw"),
];

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    key: String,
    description: String,
    notes: Vec<String>,
    presentation: Arc<Presentation>,
    derivations: Vec<(String, Arc<RhoDerivation>)>,
    pair: Option<Arc<LieRinehartPair>>,
    metric: Option<Metric>,
    connection: Option<Connection>,
    carroll: Option<CarrollStructure>,
    auxiliary_metric: Option<Metric>,
}

impl CatalogEntry {
    fn new(key: &str, presentation: Arc<Presentation>) -> Self {
        let description = CATALOG
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, d)| d.to_string())
            .unwrap_or_default();
        CatalogEntry {
            key: key.to_string(),
            description,
            notes: Vec::new(),
            presentation,
            derivations: Vec::new(),
            pair: None,
            metric: None,
            connection: None,
            carroll: None,
            auxiliary_metric: None,
        }
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn derivations(&self) -> &[(String, Arc<RhoDerivation>)] {
        &self.derivations
    }

    pub fn derivation(&self, name: &str) -> Option<&Arc<RhoDerivation>> {
        self.derivations.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }

    /// The named derivation as a one-term combination (for flows and anchors).
    pub fn derivation_combo(&self, name: &str) -> Option<DerivationCombo> {
        self.derivation(name).map(|d| DerivationCombo::single(name, d.clone()))
    }

    pub fn pair(&self) -> Option<&Arc<LieRinehartPair>> {
        self.pair.as_ref()
    }

    pub fn metric(&self) -> Option<&Metric> {
        self.metric.as_ref()
    }

    pub fn connection(&self) -> Option<&Connection> {
        self.connection.as_ref()
    }

    pub fn carroll(&self) -> Option<&CarrollStructure> {
        self.carroll.as_ref()
    }

    /// A nondegenerate metric on the same pair, when the entry has one.
    pub fn auxiliary_metric(&self) -> Option<&Metric> {
        self.auxiliary_metric.as_ref()
    }

    fn note(mut self, n: &str) -> Self {
        self.notes.push(n.to_string());
        self
    }

    fn add_derivation(&mut self, name: &str, d: RhoDerivation) -> Arc<RhoDerivation> {
        let d = Arc::new(d);
        self.derivations.push((name.to_string(), d.clone()));
        d
    }

    /// Runs the verifiers every entry must pass.
    pub fn self_check(&self) -> VerificationReport {
        let mut s = Sampler::new(0);
        let mut r = self.presentation.factor().check_commutation_axioms(20, s.rng());
        for (name, d) in &self.derivations {
            r.extend(verify_derivation(d, name));
        }
        if let Some(p) = &self.pair {
            r.extend(verify_pair(p, 3, &mut s));
        }
        for g in self.metric.iter().chain(&self.auxiliary_metric) {
            r.extend(verify_metric(g));
        }
        if let (Some(c), Some(g)) = (&self.connection, &self.metric) {
            r.push(check_metric_compatibility(c, g));
        }
        if let Some(cs) = &self.carroll {
            let rep = verify_carroll(cs, 3, &mut s);
            for name in ["sigma degree", "kernel containment"] {
                if let Some(c) = rep.get(name) {
                    r.push(c.clone());
                }
            }
        }
        r
    }

    fn certified(self) -> Result<Self> {
        let rep = self.self_check();
        if let Some(c) = rep.checks.iter().find(|c| c.status == Status::Fail) {
            return Err(Error::CatalogInvariant {
                key: self.key.clone(),
                check: c.check.clone(),
            });
        }
        Ok(self)
    }
}

fn deg(group: GradeGroup, slots: &[i64]) -> Degree {
    group.degree(slots).expect("catalog degrees match their group")
}

/// `ρ((n,m),(n',m')) = q^{k(nm' − mn')}` on `ℤ²`.
fn planar_factor(k: i64, extra_params: &[&str]) -> Result<CommutationFactor> {
    let mut names = vec!["q"];
    names.extend_from_slice(extra_params);
    CommutationFactor::new(
        GradeGroup::new(2, 0),
        vec![vec![0, k], vec![-k, 0]],
        vec![vec![0, 0], vec![0, 0]],
        params(&names),
        Some("q"),
    )
}

/// The Euler-type derivation `g ∂_g` scaled by `c`.
fn euler(pres: &Arc<Presentation>, g: &str, c: &Element) -> Result<RhoDerivation> {
    let x = Element::generator(pres, g)?;
    RhoDerivation::from_images(pres, Some(pres.group().zero()), &[(g, c * &x)])
}

/// A pair whose basis sections are anchored to single named derivations and
/// have vanishing brackets.
fn action_pair(
    name: &str,
    pres: &Arc<Presentation>,
    basis: &[(&str, &str, Arc<RhoDerivation>)],
) -> Result<Arc<LieRinehartPair>> {
    let sections = basis
        .iter()
        .map(|(b, _, d)| (b.to_string(), d.degree().unwrap_or_else(|| pres.group().zero())))
        .collect();
    let anchors = basis
        .iter()
        .map(|(_, a, d)| DerivationCombo::single(a, d.clone()))
        .collect();
    LieRinehartPair::abelian(name, pres, sections, anchors)
}

pub fn quantum_plane() -> Result<CatalogEntry> {
    let factor = planar_factor(1, &[])?;
    let group = factor.group();
    let pres = Presentation::new(
        "Kq2",
        factor,
        vec![
            GeneratorSpec::new("x", deg(group, &[1, 0])).invertible(),
            GeneratorSpec::new("y", deg(group, &[0, 1])).invertible(),
        ],
        true,
    )?;
    let mut e = CatalogEntry::new("quantum_plane", pres.clone());
    let one = Element::one(&pres);
    let dx = e.add_derivation("dx", euler(&pres, "x", &one)?);
    let dy = e.add_derivation("dy", euler(&pres, "y", &one)?);
    e.add_derivation("px", RhoDerivation::coordinate(&pres, "x")?);
    e.add_derivation("py", RhoDerivation::coordinate(&pres, "y")?);
    let pair = action_pair("Kq2_pair", &pres, &[("dx", "dx", dx), ("dy", "dy", dy)])?;
    let g = Metric::from_entries("G", &pair, &[("dx", "dx", one.clone())])?;
    let c = Connection::from_entries("C", &pair, &[("dx", "dx", pair.basis_section(1))])?;
    let cs = CarrollStructure::new("QP", g.clone(), pair.basis_section(1))?;
    e.pair = Some(pair);
    e.metric = Some(g);
    e.connection = Some(c);
    e.carroll = Some(cs);
    e.note("Toy example: extended Manin quantum plane").certified()
}

/// With `explicit_tau` the generators are `δ_u = τ·i·u∂_u`, `δ_v = τ·i·v∂_v`
/// over the extra parameter `tau` (standing for 2π); otherwise the factor is
/// absorbed and `δ_u = u∂_u`.
pub fn nc_torus(explicit_tau: bool) -> Result<CatalogEntry> {
    let extra: &[&str] = if explicit_tau { &["tau"] } else { &[] };
    let factor = planar_factor(1, extra)?;
    let group = factor.group();
    let pres = Presentation::new(
        "A_theta",
        factor,
        vec![
            GeneratorSpec::new("u", deg(group, &[1, 0])).invertible(),
            GeneratorSpec::new("v", deg(group, &[0, 1])).invertible(),
        ],
        true,
    )?;
    let key = if explicit_tau { "nc_torus_tau" } else { "nc_torus" };
    let mut e = CatalogEntry::new(key, pres.clone());
    let c = if explicit_tau {
        Element::param(&pres, "tau")?.scale(&crate::coefficients::Laurent::scalar(GaussianRational::i()))
    } else {
        Element::one(&pres)
    };
    let du = e.add_derivation("du", euler(&pres, "u", &c)?);
    let dv = e.add_derivation("dv", euler(&pres, "v", &c)?);
    let pair = action_pair("A_theta_pair", &pres, &[("e1", "du", du), ("e2", "dv", dv)])?;
    let one = Element::one(&pres);
    let g = Metric::from_entries("G", &pair, &[("e2", "e2", one.clone())])?;
    let h = Metric::from_entries("H", &pair, &[("e1", "e1", one.clone()), ("e2", "e2", one)])?;
    let cs = CarrollStructure::new("T", g.clone(), pair.basis_section(0))?;
    e.connection = Some(Connection::trivial("C", &pair));
    e.pair = Some(pair);
    e.metric = Some(g);
    e.auxiliary_metric = Some(h);
    e.carroll = Some(cs);
    let e = e.note("q stands for exp(2*pi*i*theta) and is kept formal");
    let e = if explicit_tau {
        e.note("tau stands for 2*pi")
    } else {
        e.note("the 2*pi*i normalisation of du, dv is absorbed")
    };
    e.certified()
}

/// Coordinate pair `(𝒜, ρDer(𝒜))` with basis `∂_g` named `d<g>`.
fn coordinate_pair(e: &mut CatalogEntry, name: &str) -> Result<Arc<LieRinehartPair>> {
    let pres = e.presentation.clone();
    let mut basis = Vec::new();
    for g in pres.generators() {
        let b = format!("d{}", g.name);
        let d = e.add_derivation(&b, RhoDerivation::coordinate(&pres, &g.name)?);
        basis.push((b.clone(), b, d));
    }
    let refs: Vec<(&str, &str, Arc<RhoDerivation>)> =
        basis.iter().map(|(a, b, d)| (a.as_str(), b.as_str(), d.clone())).collect();
    action_pair(name, &pres, &refs)
}

pub fn r22_super() -> Result<CatalogEntry> {
    let group = GradeGroup::new(0, 1);
    let factor = CommutationFactor::new(group, vec![vec![0]], vec![vec![1]], params(&[]), None)?;
    let even = deg(group, &[0]);
    let odd = deg(group, &[1]);
    let pres = Presentation::new(
        "R22",
        factor,
        vec![
            GeneratorSpec::new("x", even.clone()),
            GeneratorSpec::new("y", even),
            GeneratorSpec::new("theta1", odd.clone()),
            GeneratorSpec::new("theta2", odd),
        ],
        false,
    )?;
    let mut e = CatalogEntry::new("r22_super", pres.clone());
    let pair = coordinate_pair(&mut e, "R22_pair")?;
    let one = Element::one(&pres);
    let g = Metric::from_entries(
        "G",
        &pair,
        &[("dy", "dy", one.clone()), ("dtheta1", "dtheta2", one)],
    )?;
    let cs = CarrollStructure::new("S", g.clone(), pair.basis_section(0))?;
    e.connection = Some(Connection::trivial("C", &pair));
    e.pair = Some(pair);
    e.metric = Some(g);
    e.carroll = Some(cs);
    e.note("smooth coefficients replaced by polynomials in x, y")
        .note("odd nilpotents: not an integral domain")
        .certified()
}

pub fn z22() -> Result<CatalogEntry> {
    let group = GradeGroup::new(0, 2);
    let factor = CommutationFactor::new(
        group,
        vec![vec![0, 0], vec![0, 0]],
        vec![vec![1, 0], vec![0, 1]],
        params(&[]),
        None,
    )?;
    let gens = [
        ("x", [0, 0]),
        ("z", [1, 1]),
        ("xi1", [0, 1]),
        ("xi2", [0, 1]),
        ("theta1", [1, 0]),
        ("theta2", [1, 0]),
    ];
    let pres = Presentation::new(
        "R1_122",
        factor,
        gens.iter().map(|(n, d)| GeneratorSpec::new(*n, deg(group, d))).collect(),
        false,
    )?;
    let mut e = CatalogEntry::new("z22", pres.clone());
    let pair = coordinate_pair(&mut e, "R1_122_pair")?;
    let one = Element::one(&pres);
    let g = Metric::from_entries(
        "G",
        &pair,
        &[
            ("dz", "dz", one.clone()),
            ("dxi1", "dxi2", one.clone()),
            ("dtheta1", "dtheta2", one),
        ],
    )?;
    let cs = CarrollStructure::new("Z", g.clone(), pair.basis_section(0))?;
    e.connection = Some(Connection::trivial("C", &pair));
    e.pair = Some(pair);
    e.metric = Some(g);
    e.carroll = Some(cs);
    e.note("formal power series replaced by polynomials")
        .note("unspecified antisymmetric metric components set to 1")
        .note("z and theta anticommute, as the sign factor dictates")
        .certified()
}

/// `v̄` is realised as `v⁻¹`, so `δ_v̄ = −δ_v`. The metric, connection and
/// Carroll structure are completed by analogy with the torus.
pub fn eq2() -> Result<CatalogEntry> {
    let factor = planar_factor(-2, &[])?;
    let group = factor.group();
    let pres = Presentation::new(
        "Eq2",
        factor,
        vec![
            GeneratorSpec::new("v", deg(group, &[-1, 1])).invertible(),
            GeneratorSpec::new("t", deg(group, &[0, 1])),
            GeneratorSpec::new("tbar", deg(group, &[1, 0])),
        ],
        true,
    )?;
    let mut e = CatalogEntry::new("eq2", pres.clone());
    let dv = e.add_derivation("dv", euler(&pres, "v", &Element::one(&pres))?);
    let dvbar = e.add_derivation("dvbar", euler(&pres, "v", &Element::integer(&pres, -1))?);
    let pair = action_pair("Eq2_pair", &pres, &[("e1", "dv", dv), ("e2", "dvbar", dvbar)])?;
    let g = Metric::from_entries("G", &pair, &[("e2", "e2", Element::one(&pres))])?;
    let cs = CarrollStructure::new("E", g.clone(), pair.basis_section(0))?;
    e.connection = Some(Connection::trivial("C", &pair));
    e.pair = Some(pair);
    e.metric = Some(g);
    e.carroll = Some(cs);
    e.note("vbar realised as v^-1")
        .note("metric, connection and Carroll structure engine-completed from the torus pattern")
        .certified()
}

/// `K[w^{±1}]` in degree zero over the planar `q`-factor, with `δ_w = w∂_w`.
pub fn laurent_line() -> Result<CatalogEntry> {
    let factor = planar_factor(1, &[])?;
    let group = factor.group();
    let pres = Presentation::new(
        "Kw",
        factor,
        vec![GeneratorSpec::new("w", group.zero()).invertible()],
        true,
    )?;
    let mut e = CatalogEntry::new("laurent_line", pres.clone());
    let dw = e.add_derivation("dw", euler(&pres, "w", &Element::one(&pres))?);
    e.pair = Some(action_pair("Kw_pair", &pres, &[("s", "dw", dw)])?);
    e.certified()
}

fn lift(f: &Element, target: &Arc<Presentation>, offset: usize) -> Result<Element> {
    let n = target.num_generators();
    Element::from_terms(
        target,
        f.terms().map(|(m, c)| {
            let mut ex = vec![0; n];
            ex[offset..offset + m.exponents().len()].copy_from_slice(m.exponents());
            (Monomial(ex), c.clone())
        }),
    )
}

fn lift_derivation(x: &RhoDerivation, target: &Arc<Presentation>, offset: usize) -> Result<RhoDerivation> {
    let mut images = vec![Element::zero(target); target.num_generators()];
    for (i, img) in x.images().iter().enumerate() {
        images[offset + i] = lift(img, target, offset)?;
    }
    RhoDerivation::new(target, x.declared_degree().cloned(), images)
}

/// Places the coefficients of `s` at basis positions `shift..` of a rank-`n` section.
fn lift_section(s: &Section, target: &Arc<Presentation>, offset: usize, shift: usize, n: usize) -> Result<Section> {
    let mut coeffs = vec![Element::zero(target); n];
    for (i, c) in s.coeffs().iter().enumerate() {
        coeffs[shift + i] = lift(c, target, offset)?;
    }
    Ok(Section::new(coeffs))
}

/// `𝒜 ⊗ ℬ` with lifted derivations, pair, block metric and, when `ℬ` sits in
/// degree zero with a rank-one pair, the Carroll structure `σ = 𝟙 ⊗ σ_ℬ`.
///
/// The metric on `𝒜` is its auxiliary metric when present. `ℬ` contributes
/// its own metric block, or zero.
pub fn tensor_product(a: &CatalogEntry, b: &CatalogEntry) -> Result<CatalogEntry> {
    let (pa, pb) = (&a.presentation, &b.presentation);
    if pa.factor() != pb.factor() {
        return Err(Error::FactorCompatibility(format!(
            "`{}` and `{}` have different commutation factors",
            pa.name(),
            pb.name()
        )));
    }
    let mut gens = pa.generators().to_vec();
    gens.extend(pb.generators().iter().cloned());
    let pres = Presentation::new(
        format!("{}⊗{}", pa.name(), pb.name()),
        pa.factor().clone(),
        gens,
        pa.integral_domain() && pb.integral_domain(),
    )?;
    let off = pa.num_generators();
    let mut e = CatalogEntry::new("tensor_product", pres.clone());
    e.key = format!("{}⊗{}", a.key, b.key);
    let mut lifted: Vec<(String, Arc<RhoDerivation>)> = Vec::new();
    for (name, d) in &a.derivations {
        lifted.push((name.clone(), e.add_derivation(name, lift_derivation(d, &pres, 0)?)));
    }
    for (name, d) in &b.derivations {
        lifted.push((name.clone(), e.add_derivation(name, lift_derivation(d, &pres, off)?)));
    }
    let (Some(qa), Some(qb)) = (&a.pair, &b.pair) else {
        return e.certified();
    };
    let (ra, rb) = (qa.rank(), qb.rank());
    let n = ra + rb;
    let find = |name: &str| lifted.iter().find(|(m, _)| m == name).map(|(_, d)| d.clone());
    let mut anchors = Vec::new();
    for (q, o) in [(qa, 0), (qb, off)] {
        for combo in q.anchors() {
            let mut c = DerivationCombo::zero(&pres);
            for t in combo.terms() {
                let d = match find(&t.name) {
                    Some(d) => d,
                    None => Arc::new(lift_derivation(&t.derivation, &pres, o)?),
                };
                c.add_term(&t.name, lift(&t.coeff, &pres, o)?, d);
            }
            anchors.push(c);
        }
    }
    let zero = Section::new(vec![Element::zero(&pres); n]);
    let mut structure = vec![vec![zero; n]; n];
    for i in 0..ra {
        for j in 0..ra {
            structure[i][j] = lift_section(qa.structure(i, j), &pres, 0, 0, n)?;
        }
    }
    for i in 0..rb {
        for j in 0..rb {
            structure[ra + i][ra + j] = lift_section(qb.structure(i, j), &pres, off, ra, n)?;
        }
    }
    let mut basis = qa.basis().to_vec();
    basis.extend(qb.basis().iter().cloned());
    let pair = LieRinehartPair::new(format!("{}_pair", pres.name()), &pres, basis, anchors, structure)?;

    let ga = a.auxiliary_metric.as_ref().or(a.metric.as_ref());
    let mut matrix = vec![vec![Element::zero(&pres); n]; n];
    if let Some(g) = ga {
        for i in 0..ra {
            for j in 0..ra {
                matrix[i][j] = lift(g.entry(i, j), &pres, 0)?;
            }
        }
    }
    if let Some(g) = &b.metric {
        for i in 0..rb {
            for j in 0..rb {
                matrix[ra + i][ra + j] = lift(g.entry(i, j), &pres, off)?;
            }
        }
    }
    let metric = Metric::new("G", &pair, matrix)?;

    let mut christoffel = vec![vec![pair.zero_section(); n]; n];
    if let Some(c) = &a.connection {
        for i in 0..ra {
            for j in 0..ra {
                christoffel[i][j] = lift_section(c.christoffel(i, j), &pres, 0, 0, n)?;
            }
        }
    }
    e.connection = Some(Connection::new("C", &pair, christoffel)?);

    let b_degree_zero = pb.generators().iter().all(|g| g.degree.is_zero());
    if b_degree_zero && rb == 1 && b.metric.is_none() {
        let sigma = pair.basis_section(ra);
        e.carroll = Some(CarrollStructure::new("TP", metric.clone(), sigma)?);
    }
    e.pair = Some(pair);
    e.metric = Some(metric);
    e.note("metric on the left factor: its auxiliary metric when present")
        .certified()
}

pub fn build(key: &str) -> Result<CatalogEntry> {
    match key {
        "quantum_plane" => quantum_plane(),
        "nc_torus" => nc_torus(false),
        "nc_torus_tau" => nc_torus(true),
        "r22_super" => r22_super(),
        "z22" => z22(),
        "eq2" => eq2(),
        "laurent_line" => laurent_line(),
        "tensor_product" => {
            let mut e = tensor_product(&nc_torus(false)?, &laurent_line()?)?;
            e.key = "tensor_product".into();
            Ok(e)
        }
        other => Err(Error::UnknownCatalogEntry(other.to_string())),
    }
}

pub fn keys() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|(k, _)| *k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(pres: &Arc<Presentation>, name: &str) -> Element {
        Element::generator(pres, name).unwrap()
    }

    #[test]
    fn every_key_builds_and_self_checks() {
        for k in keys() {
            let e = build(k).unwrap_or_else(|err| panic!("{k}: {err}"));
            let rep = e.self_check();
            assert!(rep.passed(), "{k}: {rep}");
        }
        assert!(matches!(build("nope"), Err(Error::UnknownCatalogEntry(_))));
    }

    #[test]
    fn quantum_plane_degrees_and_factor() {
        let e = quantum_plane().unwrap();
        let p = e.presentation();
        let x = el(p, "x");
        let y = el(p, "y");
        let xi = x.try_inverse().unwrap();
        assert_eq!(xi.degree_of().degree().unwrap().slots(), &[-1, 0]);
        // x y = q y x
        let q = Element::param(p, "q").unwrap();
        assert_eq!(&x * &y, &q * &(&y * &x));
        let g = e.metric().unwrap();
        assert!(g.entry(0, 0).is_one());
        assert!(g.entry(0, 1).is_zero() && g.entry(1, 0).is_zero() && g.entry(1, 1).is_zero());
    }

    #[test]
    fn torus_degrees() {
        let e = nc_torus(false).unwrap();
        let p = e.presentation();
        assert_eq!(el(p, "u").degree_of().degree().unwrap().slots(), &[1, 0]);
        assert_eq!(el(p, "v").degree_of().degree().unwrap().slots(), &[0, 1]);
    }

    #[test]
    fn tau_normalisation() {
        let e = nc_torus(true).unwrap();
        let p = e.presentation();
        let du = e.derivation("du").unwrap();
        assert_eq!(du.apply(&el(p, "u")).unwrap().to_string(), "i*tau*u");
    }

    #[test]
    fn super_relations() {
        let e = r22_super().unwrap();
        let p = e.presentation();
        let (t1, t2) = (el(p, "theta1"), el(p, "theta2"));
        assert_eq!(&t1 * &t2, -(&t2 * &t1));
        assert!((&t1 * &t1).is_zero());
    }

    #[test]
    fn z22_relations() {
        let e = z22().unwrap();
        let p = e.presentation();
        let (z, xi, th) = (el(p, "z"), el(p, "xi1"), el(p, "theta1"));
        assert_eq!(&z * &xi, -(&xi * &z));
        // ⟨(1,1),(1,0)⟩ = 1, so z and theta anticommute under this factor
        assert_eq!(&z * &th, -(&th * &z));
        assert!(!(&z * &z).is_zero());
        assert_eq!(&xi * &th, &th * &xi);
    }

    #[test]
    fn eq2_relations() {
        let e = eq2().unwrap();
        let p = e.presentation();
        let q2 = Element::param(p, "q").unwrap();
        let q2 = &q2 * &q2;
        let (v, t, tb) = (el(p, "v"), el(p, "t"), el(p, "tbar"));
        assert_eq!(&v * &t, &q2 * &(&t * &v));
        assert_eq!(&t * &tb, &q2 * &(&tb * &t));
        let vb = v.try_inverse().unwrap();
        assert_eq!(&(&vb * &t) * &q2, &t * &vb);
        for name in ["dv", "dvbar"] {
            assert!(e.derivation(name).unwrap().degree().unwrap().is_zero());
        }
    }

    #[test]
    fn tensor_product_structure() {
        let e = build("tensor_product").unwrap();
        let p = e.presentation();
        // (f ⊗ 1)(1 ⊗ ψ) needs no factor in degree 0
        let (u, w) = (el(p, "u"), el(p, "w"));
        assert_eq!(&u * &w, &w * &u);
        let cs = e.carroll().unwrap();
        assert_eq!(cs.pair().render_section(cs.sigma()), "s");
        assert!(cs.pair().section_degree(cs.sigma()).degree().unwrap().is_zero());
    }

    #[test]
    fn incompatible_factors_are_rejected() {
        let err = tensor_product(&quantum_plane().unwrap(), &r22_super().unwrap()).unwrap_err();
        assert!(matches!(err, Error::FactorCompatibility(_)));
    }
}
