//! Metrics, ρ-connections, curvature, torsion and the Koszul construction.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Element, Homogeneity, Presentation};
use crate::coefficients::GaussianRational;
use crate::error::{Error, Result};
use crate::grading::Degree;
use crate::report::{Check, VerificationReport, Witness};
use crate::rinehart::{LieRinehartPair, Section};
use crate::sampling::Sampler;

/// Note attached to metric-compatibility checks.
pub const COVARIANT_METRIC_NOTE: &str =
    "first term read as a_u(G(v,w)); the printed formula has G(v,u)";

/// A covariant ρ-tensor given by its values on basis tuples.
#[derive(Clone)]
pub struct TensorValue {
    pres: Arc<Presentation>,
    basis: Vec<(String, Degree)>,
    degree: Degree,
    valency: usize,
    table: Vec<Element>,
}

impl TensorValue {
    /// `table` is row-major over basis `valency`-tuples.
    pub fn new(pair: &LieRinehartPair, degree: Degree, valency: usize, table: Vec<Element>) -> Self {
        assert_eq!(table.len(), pair.rank().pow(valency as u32), "tensor table size");
        TensorValue {
            pres: pair.algebra().clone(),
            basis: pair.basis().to_vec(),
            degree,
            valency,
            table,
        }
    }

    pub fn degree(&self) -> &Degree {
        &self.degree
    }

    pub fn valency(&self) -> usize {
        self.valency
    }

    pub fn get(&self, index: &[usize]) -> &Element {
        let n = self.basis.len();
        let flat = index.iter().fold(0, |acc, i| acc * n + i);
        &self.table[flat]
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Element::is_zero)
    }

    /// Nonzero entries as `(basis tuple, value)`.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, &Element)> {
        let n = self.basis.len();
        self.table
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(flat, v)| {
                let mut idx = vec![0; self.valency];
                let mut r = flat;
                for slot in idx.iter_mut().rev() {
                    *slot = r % n;
                    r /= n;
                }
                (idx, v)
            })
            .collect()
    }

    pub fn index_label(&self, index: &[usize]) -> String {
        let names: Vec<&str> = index.iter().map(|&i| self.basis[i].0.as_str()).collect();
        format!("({})", names.join(","))
    }

    /// Evaluates on arbitrary sections by pulling coefficients out with
    /// `T(…, f u_i, …) = ρ(|T| + |u_1| + … + |u_{i−1}|, |f|)·f·T(…, u_i, …)`.
    pub fn eval(&self, args: &[Section]) -> Result<Element> {
        if args.len() != self.valency {
            return Err(Error::ShapeMismatch(format!(
                "tensor of valency {} applied to {} sections",
                self.valency,
                args.len()
            )));
        }
        let mut out = Element::zero(&self.pres);
        let mut index = vec![0; self.valency];
        self.eval_rec(args, 0, &mut index, self.degree.clone(), Element::one(&self.pres), &mut out);
        Ok(out)
    }

    fn eval_rec(
        &self,
        args: &[Section],
        slot: usize,
        index: &mut Vec<usize>,
        acc_degree: Degree,
        prefix: Element,
        out: &mut Element,
    ) {
        if slot == args.len() {
            let v = self.get(index);
            if !v.is_zero() {
                *out = &*out + &(&prefix * v);
            }
            return;
        }
        for (b, c) in args[slot].coeffs().iter().enumerate() {
            for (dc, part) in c.split_homogeneous() {
                let unit = self.pres.rho_unit(&acc_degree, &dc);
                let next = (&prefix * &part).scale_rho(unit);
                index[slot] = b;
                self.eval_rec(args, slot + 1, index, &acc_degree + &self.basis[b].1, next, out);
            }
        }
    }
}

impl fmt::Display for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries = self.nonzero_entries();
        if entries.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = entries
            .iter()
            .map(|(idx, v)| format!("{} -> {}", self.index_label(idx), v))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Debug for TensorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `G_{αβ} = 𝒢(e_α, e_β)`.
#[derive(Clone)]
pub struct Metric {
    name: String,
    pair: Arc<LieRinehartPair>,
    matrix: Vec<Vec<Element>>,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Metric({}: {:?})", self.name, self.matrix)
    }
}

impl Metric {
    /// Checks the shape only; degree and ρ-symmetry are in [`verify_metric`].
    pub fn new(name: impl Into<String>, pair: &Arc<LieRinehartPair>, matrix: Vec<Vec<Element>>) -> Result<Self> {
        let n = pair.rank();
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("metric must be {n}x{n}")));
        }
        if matrix.iter().flatten().any(|e| !e.presentation().same(pair.algebra())) {
            return Err(Error::PairMismatch("metric entry over another algebra".into()));
        }
        Ok(Metric {
            name: name.into(),
            pair: pair.clone(),
            matrix,
        })
    }

    /// Fills unspecified mirror entries by ρ-symmetry, the rest with 0.
    pub fn from_entries(
        name: impl Into<String>,
        pair: &Arc<LieRinehartPair>,
        entries: &[(&str, &str, Element)],
    ) -> Result<Self> {
        let n = pair.rank();
        let mut given: Vec<Vec<Option<Element>>> = vec![vec![None; n]; n];
        for (a, b, v) in entries {
            let i = pair.basis_index(a).ok_or_else(|| Error::UnknownBasisSection(a.to_string()))?;
            let j = pair.basis_index(b).ok_or_else(|| Error::UnknownBasisSection(b.to_string()))?;
            given[i][j] = Some(v.clone());
        }
        let pres = pair.algebra();
        let mut matrix = vec![vec![Element::zero(pres); n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = match (&given[i][j], &given[j][i]) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) => {
                        v.scale_rho(pres.rho_unit(pair.basis_degree(i), pair.basis_degree(j)))
                    }
                    (None, None) => Element::zero(pres),
                };
            }
        }
        Self::new(name, pair, matrix)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pair(&self) -> &Arc<LieRinehartPair> {
        &self.pair
    }

    pub fn matrix(&self) -> &[Vec<Element>] {
        &self.matrix
    }

    pub fn entry(&self, a: usize, b: usize) -> &Element {
        &self.matrix[a][b]
    }

    /// `𝒢(f e_α, g e_β) = f·ρ(|e_α|,|g|)·g·G_{αβ}`.
    pub fn eval(&self, u: &Section, v: &Section) -> Result<Element> {
        let pair = &self.pair;
        let n = pair.rank();
        if u.coeffs().len() != n || v.coeffs().len() != n {
            return Err(Error::PairMismatch(format!(
                "sections do not belong to `{}`",
                pair.name()
            )));
        }
        let pres = pair.algebra();
        let mut out = Element::zero(pres);
        for a in 0..n {
            let f = u.coeff(a);
            if f.is_zero() {
                continue;
            }
            for b in 0..n {
                let g = v.coeff(b);
                let entry = &self.matrix[a][b];
                if g.is_zero() || entry.is_zero() {
                    continue;
                }
                for (dg, gh) in g.split_homogeneous() {
                    let unit = pres.rho_unit(pair.basis_degree(a), &dg);
                    out = &out + &(&(f * &gh) * entry).scale_rho(unit);
                }
            }
        }
        Ok(out)
    }

    /// The metric as a valency-2 tensor of degree 0.
    pub fn as_tensor(&self) -> TensorValue {
        TensorValue::new(
            &self.pair,
            self.pair.algebra().group().zero(),
            2,
            self.matrix.iter().flatten().cloned().collect(),
        )
    }
}

/// `𝒢(u, v)`.
pub fn metric_eval(g: &Metric, u: &Section, v: &Section) -> Result<Element> {
    g.eval(u, v)
}

/// Degree and ρ-symmetry of the metric table.
pub fn verify_metric(g: &Metric) -> VerificationReport {
    let pair = &g.pair;
    let pres = pair.algebra();
    let names = pair.basis_names();
    let n = pair.rank();
    let mut report = VerificationReport::new();
    let mut deg = None;
    let mut sym = None;
    for a in 0..n {
        for b in 0..n {
            let want = pair.basis_degree(a) + pair.basis_degree(b);
            let e = &g.matrix[a][b];
            if deg.is_none() {
                match e.degree_of() {
                    Homogeneity::Zero => {}
                    Homogeneity::Homogeneous(d) if d == want => {}
                    other => {
                        let got = other
                            .degree()
                            .map(|d| d.to_string())
                            .unwrap_or_else(|| "inhomogeneous".into());
                        deg = Some(Witness::degree(
                            &got,
                            format!("|G({},{})| should be {want}", names[a], names[b]),
                        ));
                    }
                }
            }
            if sym.is_none() {
                let unit = pres.rho_unit(pair.basis_degree(a), pair.basis_degree(b));
                let diff = e - &g.matrix[b][a].scale_rho(unit);
                if !diff.is_zero() {
                    sym = Some(Witness::element(
                        &diff.to_string(),
                        format!(
                            "G({a},{b}) - rho*G({b},{a})",
                            a = names[a],
                            b = names[b]
                        ),
                    ));
                }
            }
        }
    }
    report.push(Check::from_witness("metric degree", g.name(), deg));
    report.push(Check::from_witness("metric symmetry", g.name(), sym));
    report
}

/// How the Christoffel table is extended to arbitrary sections.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// `∇_{f e_α}(g e_β) = f·(a_α(g)·e_β + ρ(|e_α|,|g|)·g·Γ_{αβ})`.
    Leibniz,
    /// Drops the `a_α(g)` term. Not a connection; kept as a negative control.
    WithoutAnchorTerm,
}

#[derive(Clone)]
pub struct Connection {
    name: String,
    pair: Arc<LieRinehartPair>,
    christoffel: Vec<Vec<Section>>,
    extension: Extension,
}

impl fmt::Debug for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Connection({})", self.name)
    }
}

impl Connection {
    pub fn new(
        name: impl Into<String>,
        pair: &Arc<LieRinehartPair>,
        christoffel: Vec<Vec<Section>>,
    ) -> Result<Self> {
        let n = pair.rank();
        if christoffel.len() != n || christoffel.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("connection table must be {n}x{n}")));
        }
        for s in christoffel.iter().flatten() {
            if s.coeffs().len() != n || s.coeffs().iter().any(|c| !c.presentation().same(pair.algebra())) {
                return Err(Error::PairMismatch("Christoffel entry is not a section of the pair".into()));
            }
        }
        Ok(Connection {
            name: name.into(),
            pair: pair.clone(),
            christoffel,
            extension: Extension::Leibniz,
        })
    }

    /// The connection with all `∇_{e_α} e_β = 0`.
    pub fn trivial(name: impl Into<String>, pair: &Arc<LieRinehartPair>) -> Self {
        let n = pair.rank();
        Connection {
            name: name.into(),
            pair: pair.clone(),
            christoffel: vec![vec![pair.zero_section(); n]; n],
            extension: Extension::Leibniz,
        }
    }

    /// Sets `∇_{e_a} e_b` from named entries; the rest are 0.
    pub fn from_entries(
        name: impl Into<String>,
        pair: &Arc<LieRinehartPair>,
        entries: &[(&str, &str, Section)],
    ) -> Result<Self> {
        let mut c = Self::trivial(name, pair);
        for (a, b, s) in entries {
            let i = pair.basis_index(a).ok_or_else(|| Error::UnknownBasisSection(a.to_string()))?;
            let j = pair.basis_index(b).ok_or_else(|| Error::UnknownBasisSection(b.to_string()))?;
            c.christoffel[i][j] = s.clone();
        }
        Self::new(c.name, pair, c.christoffel)
    }

    pub fn with_extension(mut self, extension: Extension) -> Self {
        self.extension = extension;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn pair(&self) -> &Arc<LieRinehartPair> {
        &self.pair
    }

    pub fn christoffel(&self, a: usize, b: usize) -> &Section {
        &self.christoffel[a][b]
    }

    pub fn nabla(&self, u: &Section, v: &Section) -> Result<Section> {
        let pair = &self.pair;
        let pres = pair.algebra();
        let n = pair.rank();
        if u.coeffs().len() != n || v.coeffs().len() != n {
            return Err(Error::PairMismatch(format!("sections do not belong to `{}`", pair.name())));
        }
        let mut out = pair.zero_section();
        for a in 0..n {
            let f = u.coeff(a);
            if f.is_zero() {
                continue;
            }
            for b in 0..n {
                let g = v.coeff(b);
                if g.is_zero() {
                    continue;
                }
                if self.extension == Extension::Leibniz {
                    out.add_at(b, &(f * &pair.anchor_table(a).apply(g)?));
                }
                let gamma = &self.christoffel[a][b];
                if gamma.is_zero() {
                    continue;
                }
                for (dg, gh) in g.split_homogeneous() {
                    let unit = pres.rho_unit(pair.basis_degree(a), &dg);
                    out = &out + &gamma.scale_left(&(f * &gh).scale_rho(unit));
                }
            }
        }
        Ok(out)
    }

    /// `R(u,v)w = ∇_u∇_v w − ρ(|u|,|v|)∇_v∇_u w − ∇_{[u,v]}w`.
    pub fn curvature(&self, u: &Section, v: &Section, w: &Section) -> Result<Section> {
        let pair = &self.pair;
        let pres = pair.algebra();
        let mut out = pair.zero_section();
        for (du, uh) in pair.split_section(u) {
            for (dv, vh) in pair.split_section(v) {
                let a = self.nabla(&uh, &self.nabla(&vh, w)?)?;
                let b = self.nabla(&vh, &self.nabla(&uh, w)?)?.scale_rho(pres.rho_unit(&du, &dv));
                let c = self.nabla(&pair.bracket(&uh, &vh)?, w)?;
                out = &out + &(&(&a - &b) - &c);
            }
        }
        Ok(out)
    }

    /// `T(u,v) = ∇_u v − ρ(|u|,|v|)∇_v u − [u,v]`.
    pub fn torsion(&self, u: &Section, v: &Section) -> Result<Section> {
        let pair = &self.pair;
        let pres = pair.algebra();
        let mut out = pair.zero_section();
        for (du, uh) in pair.split_section(u) {
            for (dv, vh) in pair.split_section(v) {
                let a = self.nabla(&uh, &vh)?;
                let b = self.nabla(&vh, &uh)?.scale_rho(pres.rho_unit(&du, &dv));
                let c = pair.bracket(&uh, &vh)?;
                out = &out + &(&(&a - &b) - &c);
            }
        }
        Ok(out)
    }

    /// `(∇_u𝒢)(v,w) = a_u(𝒢(v,w)) − 𝒢(∇_u v, w) − ρ(|u|,|v|)·𝒢(v, ∇_u w)`.
    pub fn covariant_derivative_metric(
        &self,
        g: &Metric,
        u: &Section,
        v: &Section,
        w: &Section,
    ) -> Result<Element> {
        let pair = &self.pair;
        let pres = pair.algebra();
        let mut out = Element::zero(pres);
        for (du, uh) in pair.split_section(u) {
            out = &out + &pair.anchor_apply(&uh, &g.eval(v, w)?)?;
            out = &out - &g.eval(&self.nabla(&uh, v)?, w)?;
            let nw = self.nabla(&uh, w)?;
            for (dv, vh) in pair.split_section(v) {
                out = &out - &g.eval(&vh, &nw)?.scale_rho(pres.rho_unit(&du, &dv));
            }
        }
        Ok(out)
    }
}

pub fn nabla(c: &Connection, u: &Section, v: &Section) -> Result<Section> {
    c.nabla(u, v)
}

pub fn curvature(c: &Connection, u: &Section, v: &Section, w: &Section) -> Result<Section> {
    c.curvature(u, v, w)
}

pub fn torsion(c: &Connection, u: &Section, v: &Section) -> Result<Section> {
    c.torsion(u, v)
}

pub fn covariant_derivative_metric(
    c: &Connection,
    g: &Metric,
    u: &Section,
    v: &Section,
    w: &Section,
) -> Result<Element> {
    c.covariant_derivative_metric(g, u, v, w)
}

fn err_witness(e: Error) -> Witness {
    Witness::element("1", format!("evaluation error: {e}"))
}

/// `|∇_{e_α} e_β| = |e_α| + |e_β|`.
pub fn verify_connection_degrees(c: &Connection) -> Check {
    let pair = &c.pair;
    let names = pair.basis_names();
    for a in 0..pair.rank() {
        for b in 0..pair.rank() {
            let want = pair.basis_degree(a) + pair.basis_degree(b);
            match pair.section_degree(&c.christoffel[a][b]) {
                Homogeneity::Zero => {}
                Homogeneity::Homogeneous(d) if d == want => {}
                other => {
                    let got = other
                        .degree()
                        .map(|d| d.to_string())
                        .unwrap_or_else(|| "inhomogeneous".into());
                    return Check::fail(
                        "connection degrees",
                        c.name(),
                        Witness::degree(&got, format!("|nabla_{} {}| should be {want}", names[a], names[b])),
                    );
                }
            }
        }
    }
    Check::pass("connection degrees", c.name())
}

/// Zero torsion on all basis pairs.
pub fn check_torsion_free(c: &Connection) -> Check {
    let pair = &c.pair;
    let names = pair.basis_names();
    for a in 0..pair.rank() {
        for b in 0..pair.rank() {
            match c.torsion(&pair.basis_section(a), &pair.basis_section(b)) {
                Ok(t) if t.is_zero() => {}
                Ok(t) => {
                    return Check::fail(
                        "torsion free",
                        c.name(),
                        Witness::section(&pair.render_section(&t), format!("T({},{})", names[a], names[b])),
                    )
                }
                Err(e) => return Check::fail("torsion free", c.name(), err_witness(e)),
            }
        }
    }
    Check::pass("torsion free", c.name())
}

/// Zero curvature on all basis triples.
pub fn check_flat(c: &Connection) -> Check {
    let pair = &c.pair;
    let names = pair.basis_names();
    let n = pair.rank();
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let (u, v, w) = (pair.basis_section(a), pair.basis_section(b), pair.basis_section(d));
                match c.curvature(&u, &v, &w) {
                    Ok(r) if r.is_zero() => {}
                    Ok(r) => {
                        return Check::fail(
                            "flat",
                            c.name(),
                            Witness::section(
                                &pair.render_section(&r),
                                format!("R({},{}){}", names[a], names[b], names[d]),
                            ),
                        )
                    }
                    Err(e) => return Check::fail("flat", c.name(), err_witness(e)),
                }
            }
        }
    }
    Check::pass("flat", c.name())
}

/// `∇𝒢 = 0` on all basis triples.
pub fn check_metric_compatibility(c: &Connection, g: &Metric) -> Check {
    let pair = &c.pair;
    let names = pair.basis_names();
    let n = pair.rank();
    let target = format!("{} / {}", c.name(), g.name());
    for a in 0..n {
        for b in 0..n {
            for d in 0..n {
                let (u, v, w) = (pair.basis_section(a), pair.basis_section(b), pair.basis_section(d));
                match c.covariant_derivative_metric(g, &u, &v, &w) {
                    Ok(x) if x.is_zero() => {}
                    Ok(x) => {
                        return Check::fail(
                            "metric compatibility",
                            target,
                            Witness::element(
                                &x.to_string(),
                                format!("(nabla_{} G)({},{})", names[a], names[b], names[d]),
                            ),
                        )
                        .with_note(COVARIANT_METRIC_NOTE)
                    }
                    Err(e) => return Check::fail("metric compatibility", target, err_witness(e)),
                }
            }
        }
    }
    Check::pass("metric compatibility", target).with_note(COVARIANT_METRIC_NOTE)
}

fn homogeneous(pair: &LieRinehartPair, s: &Section) -> Degree {
    pair.section_degree(s)
        .degree()
        .cloned()
        .unwrap_or_else(|| pair.algebra().group().zero())
}

/// ρ-tensoriality and ρ-skewsymmetry of curvature and torsion on random
/// homogeneous sections.
pub fn check_tensoriality(c: &Connection, samples: usize, sampler: &mut Sampler) -> VerificationReport {
    let pair = &c.pair;
    let pres = pair.algebra();
    let mut rt = None;
    let mut tt = None;
    let mut rs = None;
    let mut ts = None;
    let sw = |s: Section, ctx: String| (!s.is_zero()).then(|| Witness::section(&pair.render_section(&s), ctx));
    for k in 0..samples {
        if pair.rank() == 0 {
            break;
        }
        let u = pair.random_section(sampler);
        let v = pair.random_section(sampler);
        let w = pair.random_section(sampler);
        let f = sampler.homogeneous_element(pres);
        let (du, dv) = (homogeneous(pair, &u), homogeneous(pair, &v));
        let df = f.degree_of().degree().cloned().unwrap_or_else(|| pres.group().zero());
        let ctx = format!(
            "sample {k}: u = {}, v = {}, w = {}, f = {f}",
            pair.render_section(&u),
            pair.render_section(&v),
            pair.render_section(&w)
        );
        let step = || -> Result<[Option<Witness>; 4]> {
            let r = c.curvature(&u, &v, &w)?;
            // R(u, f v)w = ρ(|u|,|f|) f R(u,v)w
            let a = &c.curvature(&u, &v.scale_left(&f), &w)?
                - &r.scale_left(&f).scale_rho(pres.rho_unit(&du, &df));
            // R(u,v)(f w) = ρ(|u|+|v|,|f|) f R(u,v)w
            let b = &c.curvature(&u, &v, &w.scale_left(&f))?
                - &r.scale_left(&f).scale_rho(pres.rho_unit(&(&du + &dv), &df));
            // R(f u, v)w = f R(u,v)w
            let d = &c.curvature(&u.scale_left(&f), &v, &w)? - &r.scale_left(&f);
            let t = c.torsion(&u, &v)?;
            let ta = &c.torsion(&u, &v.scale_left(&f))?
                - &t.scale_left(&f).scale_rho(pres.rho_unit(&du, &df));
            let tb = &c.torsion(&u.scale_left(&f), &v)? - &t.scale_left(&f);
            let rskew = &r + &c.curvature(&v, &u, &w)?.scale_rho(pres.rho_unit(&du, &dv));
            let tskew = &t + &c.torsion(&v, &u)?.scale_rho(pres.rho_unit(&du, &dv));
            Ok([
                sw(a, format!("{ctx}: R(u,fv)w"))
                    .or_else(|| sw(b, format!("{ctx}: R(u,v)fw")))
                    .or_else(|| sw(d, format!("{ctx}: R(fu,v)w"))),
                sw(ta, format!("{ctx}: T(u,fv)")).or_else(|| sw(tb, format!("{ctx}: T(fu,v)"))),
                sw(rskew, format!("{ctx}: R(u,v)w + rho R(v,u)w")),
                sw(tskew, format!("{ctx}: T(u,v) + rho T(v,u)")),
            ])
        };
        match step() {
            Ok([a, b, d, e]) => {
                rt = rt.or(a);
                tt = tt.or(b);
                rs = rs.or(d);
                ts = ts.or(e);
            }
            Err(e) => rt = rt.or(Some(err_witness(e))),
        }
        if rt.is_some() && tt.is_some() && rs.is_some() && ts.is_some() {
            break;
        }
    }
    let mut report = VerificationReport::new();
    report.push(Check::from_witness("curvature tensoriality", c.name(), rt));
    report.push(Check::from_witness("torsion tensoriality", c.name(), tt));
    report.push(Check::from_witness("curvature skewsymmetry", c.name(), rs));
    report.push(Check::from_witness("torsion skewsymmetry", c.name(), ts));
    report
}

/// Inverse of a square matrix over ℚ(i) by Gauss-Jordan elimination.
pub(crate) fn invert_scalar_matrix(m: &[Vec<GaussianRational>]) -> Option<Vec<Vec<GaussianRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<GaussianRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { GaussianRational::one() } else { GaussianRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].inv()?;
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for k in 0..2 * n {
                    let sub = &factor * &a[col][k];
                    a[r][k] = &a[r][k] - &sub;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// The Koszul right-hand side for `2𝒢(∇_u v, w)`, with homogeneous `u, v, w`.
pub fn koszul_rhs(pair: &LieRinehartPair, g: &Metric, u: &Section, v: &Section, w: &Section) -> Result<Element> {
    let pres = pair.algebra();
    let (du, dv, dw) = (homogeneous(pair, u), homogeneous(pair, v), homogeneous(pair, w));
    let first = &pair.anchor_apply(u, &g.eval(v, w)?)? + &g.eval(&pair.bracket(u, v)?, w)?;
    let second = &pair.anchor_apply(v, &g.eval(w, u)?)? - &g.eval(&pair.bracket(v, w)?, u)?;
    let third = &pair.anchor_apply(w, &g.eval(u, v)?)? - &g.eval(&pair.bracket(w, u)?, v)?;
    Ok(&(&first + &second.scale_rho(pres.rho_unit(&du, &(&dv + &dw))))
        - &third.scale_rho(pres.rho_unit(&dw, &(&du + &dv))))
}

/// The Levi-Civita connection from the Koszul formula.
///
/// Needs an inverse of `G`: computed when all entries are field scalars,
/// otherwise supplied by the caller and verified.
pub fn levi_civita(
    pair: &Arc<LieRinehartPair>,
    g: &Metric,
    g_inverse: Option<Vec<Vec<Element>>>,
) -> Result<Connection> {
    let n = pair.rank();
    let pres = pair.algebra();
    let ginv: Vec<Vec<Element>> = match g_inverse {
        Some(inv) => {
            if inv.len() != n || inv.iter().any(|r| r.len() != n) {
                return Err(Error::InverseInvalid(format!("inverse must be {n}x{n}")));
            }
            for (label, left, right) in [("G*Ginv", g.matrix(), &inv[..]), ("Ginv*G", &inv[..], g.matrix())] {
                for i in 0..n {
                    for j in 0..n {
                        let mut s = Element::zero(pres);
                        for k in 0..n {
                            s = &s + &(&left[i][k] * &right[k][j]);
                        }
                        let want = if i == j { Element::one(pres) } else { Element::zero(pres) };
                        if s != want {
                            return Err(Error::InverseInvalid(format!("{label} entry ({i},{j}) is {s}")));
                        }
                    }
                }
            }
            inv
        }
        None => {
            let scalars: Option<Vec<Vec<GaussianRational>>> = g
                .matrix()
                .iter()
                .map(|r| r.iter().map(Element::as_field_scalar).collect())
                .collect();
            let scalars = scalars.ok_or(Error::InverseUnavailable)?;
            let inv = invert_scalar_matrix(&scalars).ok_or(Error::KernelNonTrivial)?;
            inv.into_iter()
                .map(|r| r.into_iter().map(|c| Element::scalar(pres, c)).collect())
                .collect()
        }
    };
    let half = Element::scalar(pres, GaussianRational::from_ratio(1, 2));
    let mut table = vec![vec![pair.zero_section(); n]; n];
    for a in 0..n {
        for b in 0..n {
            let rhs: Vec<Element> = (0..n)
                .map(|d| {
                    koszul_rhs(pair, g, &pair.basis_section(a), &pair.basis_section(b), &pair.basis_section(d))
                        .map(|x| &half * &x)
                })
                .collect::<Result<_>>()?;
            let coeffs = (0..n)
                .map(|mu| {
                    let mut s = Element::zero(pres);
                    for (d, r) in rhs.iter().enumerate() {
                        s = &s + &(r * &ginv[d][mu]);
                    }
                    s
                })
                .collect();
            table[a][b] = Section::new(coeffs);
        }
    }
    let conn = Connection::new(format!("levi_civita({})", g.name()), pair, table)?;
    let t = check_torsion_free(&conn);
    if t.status != crate::report::Status::Pass {
        return Err(Error::KoszulCheckFailed(format!("{t}")));
    }
    let m = check_metric_compatibility(&conn, g);
    if m.status != crate::report::Status::Pass {
        return Err(Error::KoszulCheckFailed(format!("{m}")));
    }
    Ok(conn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins;

    #[test]
    fn quantum_plane_metric_values() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let g = e.metric().unwrap();
        let (dx, dy) = (p.basis_section(0), p.basis_section(1));
        assert!(g.eval(&dx, &dx).unwrap().is_one());
        assert!(g.eval(&dy, &dy).unwrap().is_zero());
        assert!(g.eval(&p.zero_section(), &dx).unwrap().is_zero());
    }

    #[test]
    fn torus_metric_is_fv_gv() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let u = Element::generator(pres, "u").unwrap();
        let v = Element::generator(pres, "v").unwrap();
        let f = p.section(&[("e1", u.clone()), ("e2", v.clone())]).unwrap();
        let h = p.section(&[("e2", &u * &v)]).unwrap();
        let got = e.metric().unwrap().eval(&f, &h).unwrap();
        assert_eq!(got, &v * &(&u * &v));
    }

    #[test]
    fn quantum_plane_connection_values() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let c = e.connection().unwrap();
        let (dx, dy) = (p.basis_section(0), p.basis_section(1));
        assert_eq!(c.nabla(&dx, &dx).unwrap(), dy);
        assert!(c.nabla(&dy, &dy).unwrap().is_zero());
        assert!(c.curvature(&dx, &dy, &dx).unwrap().is_zero());
        assert!(c.curvature(&dx, &dy, &dy).unwrap().is_zero());
        assert_eq!(check_torsion_free(c).status, crate::report::Status::Pass);
        assert_eq!(check_metric_compatibility(c, e.metric().unwrap()).status, crate::report::Status::Pass);
    }

    #[test]
    fn incompatible_connection_has_witness_minus_two() {
        let e = builtins::quantum_plane().unwrap();
        let p = e.pair().unwrap();
        let c = Connection::from_entries("bad", p, &[("dx", "dx", p.basis_section(0))]).unwrap();
        let chk = check_metric_compatibility(&c, e.metric().unwrap());
        assert_eq!(chk.status, crate::report::Status::Fail);
        assert_eq!(chk.witness.unwrap().expr, "-2");
    }

    #[test]
    fn tensoriality_of_golden_connections() {
        let mut s = Sampler::new(11);
        for e in [builtins::quantum_plane().unwrap(), builtins::nc_torus(false).unwrap()] {
            let rep = check_tensoriality(e.connection().unwrap(), 20, &mut s);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn dropping_the_anchor_term_breaks_tensoriality() {
        let e = builtins::nc_torus(false).unwrap();
        let c = e.connection().unwrap().clone().with_extension(Extension::WithoutAnchorTerm);
        let rep = check_tensoriality(&c, 20, &mut Sampler::new(2));
        assert!(!rep.passed());
    }

    #[test]
    fn levi_civita_of_torus_auxiliary_metric_is_trivial() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let aux = e.auxiliary_metric().unwrap();
        let lc = levi_civita(p, aux, None).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(lc.christoffel(a, b).is_zero());
            }
        }
    }

    #[test]
    fn levi_civita_rejects_degenerate_metric() {
        let e = builtins::quantum_plane().unwrap();
        let err = levi_civita(e.pair().unwrap(), e.metric().unwrap(), None).unwrap_err();
        assert_eq!(err, Error::KernelNonTrivial);
    }

    #[test]
    fn levi_civita_checks_supplied_inverse() {
        let e = builtins::nc_torus(false).unwrap();
        let p = e.pair().unwrap();
        let pres = p.algebra();
        let bad = vec![
            vec![Element::integer(pres, 2), Element::zero(pres)],
            vec![Element::zero(pres), Element::one(pres)],
        ];
        let err = levi_civita(p, e.auxiliary_metric().unwrap(), Some(bad)).unwrap_err();
        assert!(matches!(err, Error::InverseInvalid(_)));
    }

    #[test]
    fn scalar_inverse() {
        let m = vec![
            vec![GaussianRational::from_integer(2), GaussianRational::i()],
            vec![GaussianRational::zero(), GaussianRational::from_integer(1)],
        ];
        let inv = invert_scalar_matrix(&m).unwrap();
        assert_eq!(inv[0][0], GaussianRational::from_ratio(1, 2));
        assert_eq!(inv[0][1], -&(&GaussianRational::i() * &GaussianRational::from_ratio(1, 2)));
        let singular = vec![vec![GaussianRational::one(); 2]; 2];
        assert!(invert_scalar_matrix(&singular).is_none());
    }
}
