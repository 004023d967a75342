//! Carrollian structures: a pair, a degenerate metric and a degree-0 section
//! `σ` spanning its kernel.
//!
//! Kernel exactness and non-degeneracy of the quotient metric are only
//! certified when `σ` has a unit coefficient, the complementary block of the
//! metric consists of invertible field scalars and the algebra is flagged as
//! an integral domain. Otherwise the checks report `uncertified`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Element, Homogeneity, Monomial};
use crate::coefficients::{GaussianRational, Laurent};
use crate::derivation::{der_commutator, DerivationCombo, RhoDerivation};
use crate::error::{Error, Result};
use crate::geometry::{
    check_flat, check_metric_compatibility, check_tensoriality, check_torsion_free,
    invert_scalar_matrix, verify_connection_degrees, verify_metric, Connection, Metric,
};
use crate::report::{Check, Status, VerificationReport, Witness};
use crate::rinehart::{derivation_difference, verify_pair, LieRinehartPair, Section};
use crate::sampling::Sampler;

#[derive(Clone, Debug)]
pub struct CarrollStructure {
    name: String,
    pair: Arc<LieRinehartPair>,
    metric: Metric,
    sigma: Section,
}

impl CarrollStructure {
    pub fn new(name: impl Into<String>, metric: Metric, sigma: Section) -> Result<Self> {
        let pair = metric.pair().clone();
        if sigma.coeffs().len() != pair.rank()
            || sigma.coeffs().iter().any(|c| !c.presentation().same(pair.algebra()))
        {
            return Err(Error::PairMismatch(format!(
                "sigma is not a section of `{}`",
                pair.name()
            )));
        }
        Ok(CarrollStructure {
            name: name.into(),
            pair,
            metric,
            sigma,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pair(&self) -> &Arc<LieRinehartPair> {
        &self.pair
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn sigma(&self) -> &Section {
        &self.sigma
    }

    /// A basis index whose `σ`-coefficient is a unit, with that unit's inverse.
    pub fn unit_component(&self) -> Option<(usize, Element)> {
        self.sigma
            .coeffs()
            .iter()
            .enumerate()
            .find_map(|(k, c)| c.try_inverse().map(|inv| (k, inv)))
    }

    /// The line `𝔩 = 𝒜·σ` as a rank-one pair, with the inclusion into the
    /// ambient pair (for [`crate::rinehart::check_morphism`]).
    pub fn kernel_pair(&self) -> Result<(Arc<LieRinehartPair>, Vec<Section>)> {
        let pres = self.pair.algebra();
        let anchor = self.pair.anchor_of(&self.sigma)?;
        let combo = if anchor.is_zero() {
            DerivationCombo::zero(pres)
        } else {
            DerivationCombo::single("a_sigma", Arc::new(anchor.evaluate()))
        };
        let line = LieRinehartPair::abelian(
            format!("{}_kernel", self.name),
            pres,
            vec![("sigma".to_string(), pres.group().zero())],
            vec![combo],
        )?;
        Ok((line, vec![self.sigma.clone()]))
    }

    /// Whether `s ∈ 𝒜·σ`, decided with a unit coefficient of `σ`.
    /// Returns the residual `s − h·σ` when there is one.
    pub fn line_residual(&self, s: &Section) -> Option<Section> {
        let (k, inv) = self.unit_component()?;
        let h = s.coeff(k) * &inv;
        Some(s - &self.sigma.scale_left(&h))
    }

    /// The metric block on the basis sections other than `skip`, when every
    /// entry is a field scalar.
    fn scalar_block(&self, skip: usize) -> Option<Vec<Vec<GaussianRational>>> {
        let n = self.pair.rank();
        (0..n)
            .filter(|&i| i != skip)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != skip)
                    .map(|j| self.metric.entry(i, j).as_field_scalar())
                    .collect()
            })
            .collect()
    }

    /// Why the exactness gate is closed, or `None` when it is open.
    fn gate(&self) -> std::result::Result<(), String> {
        let Some((k, _)) = self.unit_component() else {
            return Err("sigma has no unit coefficient, so no basis completion is known".into());
        };
        let Some(block) = self.scalar_block(k) else {
            return Err("complementary metric block has non-scalar entries".into());
        };
        if invert_scalar_matrix(&block).is_none() {
            return Err("complementary metric block is singular".into());
        }
        if !self.pair.algebra().integral_domain() {
            return Err("algebra is not flagged as an integral domain".into());
        }
        Ok(())
    }

    fn render(&self, s: &Section) -> String {
        self.pair.render_section(s)
    }
}

fn degree_of_element(f: &Element) -> crate::grading::Degree {
    f.degree_of()
        .degree()
        .cloned()
        .unwrap_or_else(|| f.presentation().group().zero())
}

/// Degree, kernel containment, kernel exactness and closure of `𝔩`.
pub fn verify_carroll(cs: &CarrollStructure, samples: usize, sampler: &mut Sampler) -> VerificationReport {
    let pair = &cs.pair;
    let pres = pair.algebra();
    let target = cs.name.as_str();
    let mut report = VerificationReport::new();

    let deg = match pair.section_degree(&cs.sigma) {
        Homogeneity::Homogeneous(d) if d.is_zero() => None,
        Homogeneity::Homogeneous(d) => Some(Witness::degree(&d.to_string(), "|sigma| should be 0")),
        Homogeneity::Zero => Some(Witness::section("0", "sigma is the zero section")),
        Homogeneity::Inhomogeneous => Some(Witness::section(&cs.render(&cs.sigma), "sigma is inhomogeneous")),
    };
    report.push(Check::from_witness("sigma degree", target, deg));

    let names = pair.basis_names();
    let mut contain = None;
    for b in 0..pair.rank() {
        match cs.metric.eval(&cs.sigma, &pair.basis_section(b)) {
            Ok(v) if v.is_zero() => {}
            Ok(v) => {
                contain = Some(Witness::element(&v.to_string(), format!("G(sigma,{})", names[b])));
                break;
            }
            Err(e) => {
                contain = Some(Witness::element("1", format!("evaluation error: {e}")));
                break;
            }
        }
    }
    let contained = contain.is_none();
    report.push(Check::from_witness("kernel containment", target, contain.clone()));

    let exact = if !contained {
        Check::fail("kernel exactness", target, contain.unwrap())
    } else {
        match cs.gate() {
            Ok(()) => Check::pass("kernel exactness", target)
                .with_note("certified: unit coefficient, invertible scalar block, integral domain"),
            Err(why) => Check::uncertified("kernel exactness", target, why),
        }
    };
    report.push(exact);

    // [σ,σ] = 0 and [fσ, gσ] = (f a_σ(g) − ρ(|f|,|g|) g a_σ(f))σ
    let mut closure = None;
    match pair.bracket(&cs.sigma, &cs.sigma) {
        Ok(s) if s.is_zero() => {}
        Ok(s) => closure = Some(Witness::section(&cs.render(&s), "[sigma,sigma]")),
        Err(e) => closure = Some(Witness::element("1", format!("evaluation error: {e}"))),
    }
    for k in 0..samples {
        if closure.is_some() {
            break;
        }
        let f = sampler.homogeneous_element(pres);
        let g = sampler.homogeneous_element(pres);
        let step = || -> Result<Section> {
            let lhs = pair.bracket(&cs.sigma.scale_left(&f), &cs.sigma.scale_left(&g))?;
            let unit = pres.rho_unit(&degree_of_element(&f), &degree_of_element(&g));
            let h = &(&f * &pair.anchor_apply(&cs.sigma, &g)?)
                - &(&g * &pair.anchor_apply(&cs.sigma, &f)?).scale_rho(unit);
            Ok(&lhs - &cs.sigma.scale_left(&h))
        };
        match step() {
            Ok(d) if d.is_zero() => {}
            Ok(d) => {
                closure = Some(Witness::section(&cs.render(&d), format!("sample {k}: f = {f}, g = {g}")))
            }
            Err(e) => closure = Some(Witness::element("1", format!("evaluation error: {e}"))),
        }
    }
    report.push(Check::from_witness("kernel closed under bracket", target, closure));
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    NonSingular { reason: String },
    Singular { witness: Element },
    Uncertified { reason: String },
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::NonSingular { reason } => write!(f, "non-singular ({reason})"),
            Classification::Singular { witness } => write!(f, "singular (f = {witness} kills a_sigma)"),
            Classification::Uncertified { reason } => write!(f, "uncertified ({reason})"),
        }
    }
}

/// The generator `a_σ` of the Carroll distribution and its singularity class.
pub fn carroll_distribution(cs: &CarrollStructure) -> Result<(DerivationCombo, Classification)> {
    let pair = &cs.pair;
    let pres = pair.algebra();
    let generator = pair.anchor_of(&cs.sigma)?;
    let table = generator.evaluate();
    if table.is_zero() {
        return Ok((
            generator,
            Classification::Singular {
                witness: Element::one(pres),
            },
        ));
    }
    for (i, g) in pres.generators().iter().enumerate() {
        if table.image(i).is_unit() {
            let reason = format!("a_sigma({}) = {} is a unit", g.name, table.image(i));
            return Ok((generator, Classification::NonSingular { reason }));
        }
    }
    if pres.integral_domain() {
        if let Some(t) = generator.terms().iter().find(|t| t.coeff.is_unit()) {
            let reason = format!("unit coefficient on {} over an integral domain", t.name);
            return Ok((generator, Classification::NonSingular { reason }));
        }
    }
    // look for an annihilating monomial among small candidates
    let n = pres.num_generators();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        let Ok(f) = Element::monomial(pres, Monomial(e)) else { continue };
        if table.scale_left(&f).is_zero() {
            return Ok((generator, Classification::Singular { witness: f }));
        }
    }
    Ok((
        generator,
        Classification::Uncertified {
            reason: "no unit certificate and no annihilating monomial found".into(),
        },
    ))
}

/// `[f a_σ, g a_σ] = h·a_σ` with `h = f a_σ(g) − ρ(|f|,|g|) g a_σ(f)`, on samples.
pub fn check_involutive(cs: &CarrollStructure, samples: usize, sampler: &mut Sampler) -> VerificationReport {
    let pair = &cs.pair;
    let pres = pair.algebra();
    let mut witness = None;
    let a = match pair.anchor_derivation(&cs.sigma) {
        Ok(a) => a,
        Err(e) => {
            let mut r = VerificationReport::new();
            r.push(Check::fail("involutive", cs.name(), Witness::element("1", format!("evaluation error: {e}"))));
            return r;
        }
    };
    let mut pairs: Vec<(Element, Element)> = vec![(Element::one(pres), Element::one(pres))];
    for _ in 0..samples {
        pairs.push((sampler.homogeneous_element(pres), sampler.homogeneous_element(pres)));
    }
    for (f, g) in pairs {
        let step = || -> Result<Option<Witness>> {
            let d = der_commutator(&a.scale_left(&f), &a.scale_left(&g))?;
            let unit = pres.rho_unit(&degree_of_element(&f), &degree_of_element(&g));
            let h = &(&f * &a.apply(&g)?) - &(&g * &a.apply(&f)?).scale_rho(unit);
            Ok(derivation_difference(&d, &a.scale_left(&h), &format!("[f a_sigma, g a_sigma] - h a_sigma, f = {f}, g = {g}")))
        };
        witness = match step() {
            Ok(w) => w,
            Err(e) => Some(Witness::element("1", format!("evaluation error: {e}"))),
        };
        if witness.is_some() {
            break;
        }
    }
    let mut r = VerificationReport::new();
    r.push(Check::from_witness("involutive", cs.name(), witness));
    r
}

/// Stationarity: `σ` is a Killing section.
pub fn check_stationary(cs: &CarrollStructure) -> VerificationReport {
    let mut r = VerificationReport::new();
    let check = match cs.pair.lie_derivative_metric(&cs.sigma, &cs.metric) {
        Ok(t) => {
            let w = t.nonzero_entries().first().map(|(idx, v)| {
                Witness::element(&v.to_string(), format!("(L_sigma G){}", t.index_label(idx)))
            });
            Check::from_witness("stationary", cs.name(), w)
        }
        Err(e) => Check::fail("stationary", cs.name(), Witness::element("1", format!("evaluation error: {e}"))),
    };
    r.push(check);
    r
}

/// Metric compatibility and `∇_{e_α}σ ∈ 𝔩`.
pub fn carroll_connection_check(cs: &CarrollStructure, conn: &Connection) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.push(check_metric_compatibility(conn, &cs.metric));
    let pair = &cs.pair;
    let names = pair.basis_names();
    let target = format!("{} / {}", cs.name, conn.name());
    if cs.unit_component().is_none() {
        r.push(Check::uncertified(
            "connection preserves kernel",
            target,
            "sigma has no unit coefficient",
        ));
        return r;
    }
    let mut w = None;
    for a in 0..pair.rank() {
        match conn.nabla(&pair.basis_section(a), &cs.sigma) {
            Ok(s) => {
                let res = cs.line_residual(&s).expect("unit component exists");
                if !res.is_zero() {
                    w = Some(Witness::section(
                        &cs.render(&res),
                        format!("nabla_{} sigma minus its projection onto sigma", names[a]),
                    ));
                    break;
                }
            }
            Err(e) => {
                w = Some(Witness::element("1", format!("evaluation error: {e}")));
                break;
            }
        }
    }
    r.push(Check::from_witness("connection preserves kernel", target, w));
    r
}

#[derive(Clone, Debug)]
pub struct QuotientMetric {
    pub basis: Vec<String>,
    pub matrix: Vec<Vec<Element>>,
    pub nondegenerate: Check,
    pub lift_independence: Check,
}

impl fmt::Display for QuotientMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        let basis: Vec<String> = self.basis.iter().map(|b| format!("[{b}]")).collect();
        write!(
            f,
            "basis {{{}}} matrix [{}] nondegenerate: {}",
            basis.join(", "),
            rows.join(", "),
            self.nondegenerate.status
        )
    }
}

/// The induced metric on `𝔤/𝔩` in the basis of classes `[e_β]`, `β ≠ k`.
pub fn quotient_metric(cs: &CarrollStructure, samples: usize, sampler: &mut Sampler) -> Result<QuotientMetric> {
    let pair = &cs.pair;
    let (k, _) = cs.unit_component().ok_or_else(|| {
        Error::SigmaNotBasisExtendable(format!("no coefficient of {} is a unit", cs.render(&cs.sigma)))
    })?;
    let n = pair.rank();
    let keep: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let basis = keep.iter().map(|&i| pair.basis_names()[i].to_string()).collect();
    let matrix: Vec<Vec<Element>> = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| cs.metric.entry(i, j).clone()).collect())
        .collect();
    let target = format!("{} quotient", cs.name);
    let nondegenerate = match cs.gate() {
        Ok(()) => Check::pass("quotient nondegenerate", &target),
        Err(why) => Check::uncertified("quotient nondegenerate", &target, why),
    };
    let pres = pair.algebra();
    let mut w = None;
    for s in 0..samples {
        if keep.is_empty() {
            break;
        }
        let i = keep[crate::rinehart::sampler_index(sampler, keep.len())];
        let j = keep[crate::rinehart::sampler_index(sampler, keep.len())];
        let f = sampler.homogeneous_element(pres);
        let g = sampler.homogeneous_element(pres);
        let u = &pair.basis_section(i) + &cs.sigma.scale_left(&f);
        let v = &pair.basis_section(j) + &cs.sigma.scale_left(&g);
        let d = &cs.metric.eval(&u, &v)? - cs.metric.entry(i, j);
        if !d.is_zero() {
            w = Some(Witness::element(
                &d.to_string(),
                format!("sample {s}: lifts of [{}],[{}] with f = {f}, g = {g}", pair.basis_names()[i], pair.basis_names()[j]),
            ));
            break;
        }
    }
    Ok(QuotientMetric {
        basis,
        matrix,
        nondegenerate,
        lift_independence: Check::from_witness("quotient lift independence", target, w),
    })
}

/// A truncated power series `Σ c_k t^k` with algebra coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct FlowSeries {
    pub coeffs: Vec<Element>,
}

impl FlowSeries {
    /// Product truncated at `order` (`t` is central).
    pub fn mul_truncated(&self, other: &FlowSeries, order: usize) -> FlowSeries {
        let pres = self.coeffs[0].presentation();
        let mut coeffs = vec![Element::zero(pres); order + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j <= order {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        FlowSeries { coeffs }
    }
}

fn t_power(k: usize) -> String {
    match k {
        0 => String::new(),
        1 => "t".into(),
        k => format!("t^{k}"),
    }
}

fn render_poly(items: &[(usize, Laurent)]) -> String {
    let mut out = String::new();
    for (k, c) in items {
        let (neg, body) = c.render_factor();
        let text = match (body, t_power(*k)) {
            (None, t) if t.is_empty() => "1".to_string(),
            (None, t) => t,
            (Some(b), t) if t.is_empty() => b,
            (Some(b), t) => format!("{b}*{t}"),
        };
        match (out.is_empty(), neg) {
            (true, false) => out.push_str(&text),
            (true, true) => out.push_str(&format!("-{text}")),
            (false, false) => out.push_str(&format!(" + {text}")),
            (false, true) => out.push_str(&format!(" - {text}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for FlowSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nonzero: Vec<(usize, &Element)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        if nonzero.is_empty() {
            return f.write_str("0");
        }
        if nonzero.len() == 1 && nonzero[0].0 == 0 {
            return write!(f, "{}", nonzero[0].1);
        }
        // factor out a common monomial when every coefficient is a multiple of it
        let first = nonzero[0].1.terms().next().map(|(m, _)| m.clone());
        let common = first.filter(|m| {
            nonzero
                .iter()
                .all(|(_, c)| c.len() == 1 && c.terms().next().map(|(n, _)| n == m).unwrap_or(false))
        });
        if let Some(m) = common {
            let pres = nonzero[0].1.presentation();
            let items: Vec<(usize, Laurent)> = nonzero
                .iter()
                .map(|(k, c)| (*k, c.terms().next().unwrap().1.clone()))
                .collect();
            let poly = render_poly(&items);
            if m.is_one() {
                return f.write_str(&poly);
            }
            let mono = Element::monomial(pres, m).map_err(|_| fmt::Error)?;
            return write!(f, "{mono}*({poly})");
        }
        let parts: Vec<String> = nonzero
            .iter()
            .map(|(k, c)| match t_power(*k) {
                t if t.is_empty() => format!("({c})"),
                t => format!("({c})*{t}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for FlowSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `e^{tX} f` truncated at `t^order`.
pub fn flow(x: &DerivationCombo, f: &Element, order: usize) -> Result<FlowSeries> {
    flow_derivation(&x.evaluate(), f, order)
}

pub fn flow_derivation(x: &RhoDerivation, f: &Element, order: usize) -> Result<FlowSeries> {
    match x.degree_of() {
        Homogeneity::Zero => {}
        Homogeneity::Homogeneous(d) if d.is_zero() => {}
        Homogeneity::Homogeneous(d) => return Err(Error::NonzeroDegreeFlow(d.to_string())),
        Homogeneity::Inhomogeneous => return Err(Error::NonzeroDegreeFlow("inhomogeneous".into())),
    }
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut current = f.clone();
    let mut factorial: i64 = 1;
    for k in 0..=order {
        if k > 0 {
            current = x.apply(&current)?;
            factorial *= k as i64;
        }
        coeffs.push(current.scale(&Laurent::scalar(GaussianRational::from_ratio(1, factorial))));
    }
    Ok(FlowSeries { coeffs })
}

/// Everything the engine knows how to check about a Carrollian structure,
/// optionally with a candidate Carroll connection.
pub fn carroll_suite(
    cs: &CarrollStructure,
    conn: Option<&Connection>,
    samples: usize,
    sampler: &mut Sampler,
) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.extend(verify_pair(&cs.pair, samples, sampler));
    r.extend(verify_metric(&cs.metric));
    r.extend(verify_carroll(cs, samples, sampler));
    match carroll_distribution(cs) {
        Ok((generator, class)) => {
            let target = format!("{} distribution {generator}", cs.name);
            r.push(match class {
                Classification::NonSingular { reason } => {
                    Check::pass("distribution non-singular", target).with_note(reason)
                }
                Classification::Singular { witness } => Check::uncertified(
                    "distribution non-singular",
                    target,
                    format!("singular: {witness}*a_sigma = 0"),
                ),
                Classification::Uncertified { reason } => {
                    Check::uncertified("distribution non-singular", target, reason)
                }
            });
        }
        Err(e) => r.push(Check::fail(
            "distribution non-singular",
            cs.name(),
            Witness::element("1", format!("evaluation error: {e}")),
        )),
    }
    r.extend(check_involutive(cs, samples.min(20), sampler));
    r.extend(check_stationary(cs));
    match quotient_metric(cs, samples.min(20), sampler) {
        Ok(q) => {
            let note = format!("{q}");
            r.push(q.nondegenerate.with_note(note));
            r.push(q.lift_independence);
        }
        Err(e) => r.push(Check::uncertified("quotient nondegenerate", cs.name(), e.to_string())),
    }
    if let Some(c) = conn {
        r.push(verify_connection_degrees(c));
        r.extend(carroll_connection_check(cs, c));
        r.push(check_torsion_free(c));
        r.push(check_flat(c));
        r.extend(check_tensoriality(c, samples.min(50), sampler));
    }
    r
}

impl Status {
    pub fn is_fail(self) -> bool {
        self == Status::Fail
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn golden_structures_verify() {
        let mut s = Sampler::new(5);
        for e in [builtins::quantum_plane().unwrap(), builtins::nc_torus(false).unwrap()] {
            let cs = e.carroll().unwrap();
            let rep = verify_carroll(cs, 10, &mut s);
            assert!(rep.passed(), "{rep}");
            assert_eq!(rep.status_of("kernel exactness"), Some(Status::Pass));
        }
    }

    #[test]
    fn superdomain_exactness_is_uncertified() {
        let e = builtins::r22_super().unwrap();
        let rep = verify_carroll(e.carroll().unwrap(), 5, &mut Sampler::new(1));
        assert_eq!(rep.status_of("kernel containment"), Some(Status::Pass));
        assert_eq!(rep.status_of("kernel exactness"), Some(Status::Uncertified));
        assert!(rep.passed());
    }

    #[test]
    fn sigma_of_nonzero_degree_fails() {
        let e = builtins::quantum_plane().unwrap();
        let cs = e.carroll().unwrap();
        let pres = cs.pair().algebra();
        let y = Element::generator(pres, "y").unwrap();
        let bad = CarrollStructure::new("bad", cs.metric().clone(), cs.sigma().scale_left(&y)).unwrap();
        let rep = verify_carroll(&bad, 2, &mut Sampler::new(1));
        assert_eq!(rep.status_of("sigma degree"), Some(Status::Fail));
    }

    #[test]
    fn distributions() {
        let e = builtins::quantum_plane().unwrap();
        let (gen, class) = carroll_distribution(e.carroll().unwrap()).unwrap();
        assert_eq!(gen.to_string(), "dy");
        assert!(matches!(class, Classification::NonSingular { .. }));
        let t = builtins::nc_torus(false).unwrap();
        let (gen, class) = carroll_distribution(t.carroll().unwrap()).unwrap();
        assert_eq!(gen.to_string(), "du");
        assert!(matches!(class, Classification::NonSingular { .. }));
    }

    #[test]
    fn zero_anchor_is_singular_with_unit_witness() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let zero_anchor = LieRinehartPair::abelian(
            "flat",
            pres,
            p.basis().to_vec(),
            vec![DerivationCombo::zero(pres); 2],
        )
        .unwrap();
        let g = Metric::new("G", &zero_anchor, e.metric().unwrap().matrix().to_vec()).unwrap();
        let cs = CarrollStructure::new("c", g, zero_anchor.basis_section(1)).unwrap();
        let (_, class) = carroll_distribution(&cs).unwrap();
        assert_eq!(class, Classification::Singular { witness: Element::one(pres) });
    }

    #[test]
    fn involutive_and_stationary() {
        let mut s = Sampler::new(9);
        for e in [builtins::quantum_plane().unwrap(), builtins::nc_torus(false).unwrap()] {
            let cs = e.carroll().unwrap();
            assert!(check_involutive(cs, 10, &mut s).passed());
            assert!(check_stationary(cs).passed());
        }
    }

    #[test]
    fn non_killing_metric_has_witness_y() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let y = Element::generator(p.algebra(), "y").unwrap();
        let g = Metric::from_entries("Gy", p, &[("dx", "dx", y)]).unwrap();
        let cs = CarrollStructure::new("c", g, p.basis_section(1)).unwrap();
        let rep = check_stationary(&cs);
        let w = rep.get("stationary").unwrap().witness.clone().unwrap();
        assert_eq!(w.expr, "y");
        assert_eq!(w.context, "(L_sigma G)(dx,dx)");
    }

    #[test]
    fn quotient_of_golden_structures() {
        let mut s = Sampler::new(4);
        for e in [builtins::quantum_plane().unwrap(), builtins::nc_torus(false).unwrap()] {
            let q = quotient_metric(e.carroll().unwrap(), 10, &mut s).unwrap();
            assert_eq!(q.matrix.len(), 1);
            assert!(q.matrix[0][0].is_one());
            assert_eq!(q.nondegenerate.status, Status::Pass);
            assert_eq!(q.lift_independence.status, Status::Pass);
        }
    }

    #[test]
    fn flow_of_y() {
        let e = builtins::quantum_plane().unwrap();
        let pres = e.presentation();
        let dy = e.derivation_combo("dy").unwrap();
        let y = Element::generator(pres, "y").unwrap();
        let x = Element::generator(pres, "x").unwrap();
        assert_eq!(flow(&dy, &y, 3).unwrap().to_string(), "y*(1 + t + 1/2*t^2 + 1/6*t^3)");
        assert_eq!(flow(&dy, &x, 4).unwrap().to_string(), "x");
        let px = e.derivation_combo("px").unwrap();
        assert!(matches!(flow(&px, &x, 2), Err(Error::NonzeroDegreeFlow(_))));
    }

    #[test]
    fn connection_checks() {
        let e = builtins::quantum_plane().unwrap();
        let rep = carroll_connection_check(e.carroll().unwrap(), e.connection().unwrap());
        assert!(rep.passed(), "{rep}");
    }
}
