//! Statement evaluator shared by batch runs and the REPL.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::ast::*;
use super::lexer::Pos;
use super::parser::parse_expr;
use super::DslError;
use crate::algebra::{render_linear, rho_commutator, Element, GeneratorSpec, Presentation};
use crate::builtins;
use crate::carroll::{carroll_suite, flow_derivation, CarrollStructure};
use crate::coefficients::{params, GaussianRational};
use crate::derivation::{der_commutator, verify_derivation, DerivationCombo, RhoDerivation};
use crate::error::Error;
use crate::geometry::{
    check_flat, check_metric_compatibility, check_tensoriality, check_torsion_free, levi_civita,
    verify_connection_degrees, verify_metric, Connection, Metric,
};
use crate::grading::{CommutationFactor, Degree, GradeGroup};
use crate::report::{Check, Status, VerificationReport};
use crate::rinehart::{verify_pair, LieRinehartPair, Section};
use crate::sampling::Sampler;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA: &str = "rho-carroll.report.v1";

/// Default number of random samples per property check.
pub const DEFAULT_SAMPLES: usize = 20;

/// A value produced by an expression.
#[derive(Clone, Debug)]
pub enum Value {
    Element(Element),
    /// A named combination of derivations, e.g. `x*dx + dy`.
    Derivation(DerivationCombo),
    /// A bare generator table (commutators).
    Table(RhoDerivation),
    Section(Section),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Element(_) => "element",
            Value::Derivation(_) | Value::Table(_) => "derivation",
            Value::Section(_) => "section",
        }
    }

    fn table(&self) -> Option<RhoDerivation> {
        match self {
            Value::Derivation(c) => Some(c.evaluate()),
            Value::Table(t) => Some(t.clone()),
            _ => None,
        }
    }
}

/// One line of session output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "record", rename_all = "lowercase")]
pub enum Output {
    Check {
        line: usize,
        #[serde(flatten)]
        check: Check,
    },
    Value {
        line: usize,
        source: String,
        value: String,
    },
    Info {
        line: usize,
        text: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub file: Option<String>,
    pub seed: u64,
    pub outputs: Vec<Output>,
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "lowercase")]
enum Framing<'a> {
    Meta {
        schema: &'a str,
        file: Option<&'a str>,
        seed: u64,
        engine: &'a str,
    },
    Summary {
        pass: usize,
        fail: usize,
        uncertified: usize,
    },
}

impl Report {
    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.outputs.iter().filter_map(|o| match o {
            Output::Check { check, .. } => Some(check),
            _ => None,
        })
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    /// 0 when no check failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "# rho-carroll report (engine {ENGINE_VERSION}, seed {}{})\n",
            self.seed,
            self.file.as_deref().map(|f| format!(", file {f}")).unwrap_or_default()
        );
        for o in &self.outputs {
            out.push_str(&render_output_text(o));
            out.push('\n');
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }

    pub fn summary_line(&self) -> String {
        format!(
            "summary: {} pass, {} fail, {} uncertified",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Uncertified)
        )
    }

    /// Line-delimited JSON: a `meta` record, one record per output, a `summary`.
    pub fn to_records(&self) -> String {
        let mut lines = vec![serde_json::to_string(&Framing::Meta {
            schema: REPORT_SCHEMA,
            file: self.file.as_deref(),
            seed: self.seed,
            engine: ENGINE_VERSION,
        })
        .expect("serialisable")];
        for o in &self.outputs {
            lines.push(serde_json::to_string(o).expect("serialisable"));
        }
        lines.push(
            serde_json::to_string(&Framing::Summary {
                pass: self.count(Status::Pass),
                fail: self.count(Status::Fail),
                uncertified: self.count(Status::Uncertified),
            })
            .expect("serialisable"),
        );
        let mut s = lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn render_output_text(o: &Output) -> String {
    match o {
        Output::Check { check, .. } => check.to_string(),
        Output::Value { source, value, .. } => format!("{source}\n  {value}"),
        Output::Info { text, .. } => text.clone(),
    }
}

/// Evaluation context for expressions: the algebra and, optionally, the
/// basis names sections are written in.
struct Ctx<'a> {
    pres: &'a Arc<Presentation>,
    basis: Option<&'a [String]>,
    pair: Option<&'a Arc<LieRinehartPair>>,
}

pub struct Session {
    seed: u64,
    sampler: Sampler,
    samples: usize,
    file: Option<String>,
    params: Vec<String>,
    group: Option<GradeGroup>,
    factor: Option<CommutationFactor>,
    algebras: BTreeMap<String, Arc<Presentation>>,
    current: Option<Arc<Presentation>>,
    derivations: BTreeMap<String, Arc<RhoDerivation>>,
    pairs: BTreeMap<String, Arc<LieRinehartPair>>,
    current_pair: Option<Arc<LieRinehartPair>>,
    metrics: BTreeMap<String, Metric>,
    connections: BTreeMap<String, Connection>,
    carrolls: BTreeMap<String, CarrollStructure>,
    outputs: Vec<Output>,
}

type R<T> = Result<T, DslError>;

fn engine(pos: Pos) -> impl Fn(Error) -> DslError {
    move |source| DslError::Engine { pos, source }
}

fn type_err(pos: Pos, message: impl Into<String>) -> DslError {
    DslError::Type { pos, message: message.into() }
}

fn name_err(pos: Pos, kind: &str, name: &str) -> DslError {
    DslError::Name { pos, kind: kind.to_string(), name: name.to_string() }
}

impl Session {
    pub fn new(seed: u64) -> Self {
        Session {
            seed,
            sampler: Sampler::new(seed),
            samples: DEFAULT_SAMPLES,
            file: None,
            params: Vec::new(),
            group: None,
            factor: None,
            algebras: BTreeMap::new(),
            current: None,
            derivations: BTreeMap::new(),
            pairs: BTreeMap::new(),
            current_pair: None,
            metrics: BTreeMap::new(),
            connections: BTreeMap::new(),
            carrolls: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn with_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }

    pub fn report(&self) -> Report {
        Report {
            file: self.file.clone(),
            seed: self.seed,
            outputs: self.outputs.clone(),
        }
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn pair(&self, name: &str) -> Option<&Arc<LieRinehartPair>> {
        self.pairs.get(name)
    }

    pub fn metric(&self, name: &str) -> Option<&Metric> {
        self.metrics.get(name)
    }

    pub fn connection(&self, name: &str) -> Option<&Connection> {
        self.connections.get(name)
    }

    pub fn carroll(&self, name: &str) -> Option<&CarrollStructure> {
        self.carrolls.get(name)
    }

    pub fn current_algebra(&self) -> Option<&Arc<Presentation>> {
        self.current.as_ref()
    }

    pub fn run(&mut self, ast: &SessionAst) -> R<()> {
        for s in &ast.statements {
            self.execute(s)?;
        }
        Ok(())
    }

    /// Evaluates `src` against the current algebra and pair.
    pub fn evaluate_str(&self, src: &str) -> R<Value> {
        let e = parse_expr(src)?;
        let pres = self.require_algebra(e.pos())?;
        let pair = self.current_pair.as_ref().filter(|p| p.algebra().same(pres));
        let basis: Option<Vec<String>> = pair.map(|p| p.basis().iter().map(|(n, _)| n.clone()).collect());
        let ctx = Ctx { pres, basis: basis.as_deref(), pair };
        self.eval(&e, &ctx)
    }

    /// Evaluates `src` with the basis of `pair` in scope.
    pub fn evaluate_in_pair(&self, pair: &Arc<LieRinehartPair>, src: &str) -> R<Value> {
        let e = parse_expr(src)?;
        let basis: Vec<String> = pair.basis().iter().map(|(n, _)| n.clone()).collect();
        let ctx = Ctx { pres: pair.algebra(), basis: Some(&basis), pair: Some(pair) };
        self.eval(&e, &ctx)
    }

    pub fn render_value(&self, v: &Value) -> String {
        match v {
            Value::Element(e) => e.to_string(),
            Value::Derivation(c) => c.to_string(),
            Value::Table(t) => t.table_string(),
            Value::Section(s) => match &self.current_pair {
                Some(p) if p.rank() == s.coeffs().len() => p.render_section(s),
                _ => {
                    let names: Vec<String> = (1..=s.coeffs().len()).map(|i| format!("b{i}")).collect();
                    render_linear(s.coeffs().iter().zip(names.iter().map(String::as_str)))
                }
            },
        }
    }

    fn require_algebra(&self, pos: Pos) -> R<&Arc<Presentation>> {
        self.current
            .as_ref()
            .ok_or_else(|| type_err(pos, "no algebra declared yet"))
    }

    fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str, pos: Pos) -> R<&'a T> {
        map.get(name).ok_or_else(|| name_err(pos, kind, name))
    }

    fn push_check(&mut self, line: usize, check: Check) {
        self.outputs.push(Output::Check { line, check });
    }

    fn push_report(&mut self, line: usize, report: VerificationReport) {
        for c in report.checks {
            self.push_check(line, c);
        }
    }

    fn push_value(&mut self, st: &Statement, value: String) {
        self.outputs.push(Output::Value { line: st.pos.line, source: st.text.clone(), value });
    }

    fn info(&mut self, line: usize, text: String) {
        self.outputs.push(Output::Info { line, text });
    }

    fn degree(&self, slots: &[i64], pos: Pos, group: GradeGroup) -> R<Degree> {
        group.degree(slots).map_err(engine(pos))
    }

    pub fn execute(&mut self, st: &Statement) -> R<()> {
        let pos = st.pos;
        let line = pos.line;
        match &st.stmt {
            Stmt::Params(names) => self.params = names.clone(),
            Stmt::Group { free, torsion } => {
                self.group = Some(GradeGroup::new(*free, *torsion));
                self.factor = None;
            }
            Stmt::Factor { qform, sign, qparam } => {
                let group = self.group.ok_or_else(|| type_err(pos, "declare a group before the factor"))?;
                let n = group.rank();
                let qform = if qform.is_empty() { vec![vec![0; n]; n] } else { qform.clone() };
                let sign = if sign.is_empty() { vec![vec![0; n]; n] } else { sign.clone() };
                let needs_q = qform.iter().flatten().any(|v| *v != 0);
                let qparam = match qparam {
                    Some(q) => Some(q.clone()),
                    None if needs_q => Some(
                        self.params
                            .iter()
                            .find(|p| *p == "q")
                            .or(self.params.first())
                            .cloned()
                            .ok_or_else(|| type_err(pos, "a nonzero qform needs `params q`"))?,
                    ),
                    None => None,
                };
                let names: Vec<&str> = self.params.iter().map(String::as_str).collect();
                let f = CommutationFactor::new(group, qform, sign, params(&names), qparam.as_deref())
                    .map_err(engine(pos))?;
                self.factor = Some(f);
            }
            Stmt::Algebra { name, domain, generators } => {
                let factor = match (&self.factor, self.group) {
                    (Some(f), _) => f.clone(),
                    (None, Some(g)) => {
                        let names: Vec<&str> = self.params.iter().map(String::as_str).collect();
                        CommutationFactor::trivial(g, params(&names))
                    }
                    (None, None) => return Err(type_err(pos, "declare a group before the algebra")),
                };
                let group = factor.group();
                let mut gens = Vec::new();
                for g in generators {
                    let mut spec = GeneratorSpec::new(&g.name, self.degree(&g.degree, g.pos, group)?);
                    spec.invertible = g.invertible;
                    spec.square_zero = g.square_zero;
                    gens.push(spec);
                }
                let pres = Presentation::new(name.clone(), factor, gens, *domain).map_err(engine(pos))?;
                self.algebras.insert(name.clone(), pres.clone());
                self.current = Some(pres);
                self.current_pair = None;
            }
            Stmt::Derivation { name, degree, images } => {
                let pres = self.require_algebra(pos)?.clone();
                let declared = match degree {
                    Some(d) => Some(self.degree(d, pos, pres.group())?),
                    None => None,
                };
                let ctx = Ctx { pres: &pres, basis: None, pair: None };
                let mut table = Vec::new();
                for (g, e, p) in images {
                    if pres.generator_index(g).is_none() {
                        return Err(name_err(*p, "generator", g));
                    }
                    table.push((g.as_str(), self.eval_element(e, &ctx)?));
                }
                let d = RhoDerivation::from_images(&pres, declared, &table).map_err(engine(pos))?;
                self.derivations.insert(name.clone(), Arc::new(d));
            }
            Stmt::Pair { name, items } => {
                let pair = self.build_pair(name, items, pos)?;
                self.pairs.insert(name.clone(), pair.clone());
                self.current_pair = Some(pair);
            }
            Stmt::Metric { name, pair, entries } => {
                let p = self.pair_or_current(pair.as_deref(), pos)?;
                let ctx = self.pair_ctx_names(&p);
                let ctx = Ctx { pres: p.algebra(), basis: Some(&ctx), pair: Some(&p) };
                let mut vals = Vec::new();
                for (a, b, e, ep) in entries {
                    vals.push((a.as_str(), b.as_str(), self.eval_element(e, &ctx)?, *ep));
                }
                let refs: Vec<(&str, &str, Element)> = vals.iter().map(|(a, b, e, _)| (*a, *b, e.clone())).collect();
                let g = Metric::from_entries(name.clone(), &p, &refs).map_err(engine(pos))?;
                self.metrics.insert(name.clone(), g);
            }
            Stmt::Connection { name, pair, body } => {
                let conn = match body {
                    ConnectionBody::Entries(entries) => {
                        let p = self.pair_or_current(pair.as_deref(), pos)?;
                        let names = self.pair_ctx_names(&p);
                        let ctx = Ctx { pres: p.algebra(), basis: Some(&names), pair: Some(&p) };
                        let mut vals = Vec::new();
                        for (a, b, e, _) in entries {
                            vals.push((a.as_str(), b.as_str(), self.eval_section(e, &ctx)?));
                        }
                        Connection::from_entries(name.clone(), &p, &vals).map_err(engine(pos))?
                    }
                    ConnectionBody::LeviCivita { metric, inverse } => {
                        let g = Self::lookup(&self.metrics, "metric", metric, pos)?.clone();
                        let p = g.pair().clone();
                        let inv = match inverse {
                            None => None,
                            Some(rows) => {
                                let ctx = Ctx { pres: p.algebra(), basis: None, pair: None };
                                let mut m = Vec::new();
                                for row in rows {
                                    let mut r = Vec::new();
                                    for e in row {
                                        r.push(self.eval_element(e, &ctx)?);
                                    }
                                    m.push(r);
                                }
                                Some(m)
                            }
                        };
                        let c = levi_civita(&p, &g, inv).map_err(engine(pos))?;
                        rename_connection(c, name)?
                    }
                };
                self.connections.insert(name.clone(), conn);
            }
            Stmt::Carroll { name, pair, metric, sigma } => {
                let g = Self::lookup(&self.metrics, "metric", metric, pos)?.clone();
                let p = g.pair().clone();
                if let Some(pn) = pair {
                    let declared = Self::lookup(&self.pairs, "pair", pn, pos)?;
                    if !declared.same(&p) {
                        return Err(type_err(pos, format!("metric `{metric}` is not on pair `{pn}`")));
                    }
                }
                let names = self.pair_ctx_names(&p);
                let ctx = Ctx { pres: p.algebra(), basis: Some(&names), pair: Some(&p) };
                let s = self.eval_section(sigma, &ctx)?;
                let cs = CarrollStructure::new(name.clone(), g, s).map_err(engine(pos))?;
                self.carrolls.insert(name.clone(), cs);
            }
            Stmt::UseBuiltin(key) => {
                let e = builtins::build(key).map_err(engine(pos))?;
                self.import(&e);
                let mut parts = vec![format!("algebra {}", e.presentation().name())];
                if let Some(p) = e.pair() {
                    parts.push(format!("pair {}", p.name()));
                }
                for g in e.metric().iter().chain(e.auxiliary_metric().iter()) {
                    parts.push(format!("metric {}", g.name()));
                }
                if let Some(c) = e.connection() {
                    parts.push(format!("connection {}", c.name()));
                }
                if let Some(c) = e.carroll() {
                    parts.push(format!("carroll {}", c.name()));
                }
                let ders: Vec<&str> = e.derivations().iter().map(|(n, _)| n.as_str()).collect();
                if !ders.is_empty() {
                    parts.push(format!("derivations {}", ders.join(", ")));
                }
                self.info(line, format!("using builtin {key}: {}", parts.join("; ")));
            }
            Stmt::Set { key, value } => match key.as_str() {
                "samples" if *value >= 0 => self.samples = *value as usize,
                _ => return Err(type_err(pos, format!("cannot set `{key}` to {value}"))),
            },
            Stmt::Eval(e) => {
                let v = self.eval_top(e)?;
                let text = self.render_value(&v);
                self.push_value(st, text);
            }
            Stmt::Check(target) => self.check(target, pos)?,
            Stmt::Curvature { connection, args } | Stmt::Torsion { connection, args } => {
                let is_curv = matches!(st.stmt, Stmt::Curvature { .. });
                let c = Self::lookup(&self.connections, "connection", connection, pos)?.clone();
                let p = c.pair().clone();
                let names = self.pair_ctx_names(&p);
                let ctx = Ctx { pres: p.algebra(), basis: Some(&names), pair: Some(&p) };
                let want = if is_curv { 3 } else { 2 };
                if args.len() != want {
                    return Err(type_err(pos, format!("expected {want} section arguments, got {}", args.len())));
                }
                let mut s = Vec::new();
                for a in args {
                    s.push(self.eval_section(a, &ctx)?);
                }
                let out = if is_curv {
                    c.curvature(&s[0], &s[1], &s[2])
                } else {
                    c.torsion(&s[0], &s[1])
                }
                .map_err(engine(pos))?;
                self.push_value(st, p.render_section(&out));
            }
            Stmt::Flow { derivation, element, order } => {
                let table = match self.eval_top(derivation)? {
                    Value::Section(s) => {
                        let p = self.current_pair.as_ref().expect("sections resolve only with a current pair");
                        p.anchor_derivation(&s).map_err(engine(derivation.pos()))?
                    }
                    d => d
                        .table()
                        .ok_or_else(|| type_err(derivation.pos(), format!("expected a derivation, found {}", d.kind())))?,
                };
                let f = match self.eval_top(element)? {
                    Value::Element(f) => f,
                    other => return Err(type_err(element.pos(), format!("expected an element, found {}", other.kind()))),
                };
                let series = flow_derivation(&table, &f, *order).map_err(engine(pos))?;
                self.push_value(st, series.to_string());
            }
            Stmt::CatalogList => {
                for (k, d) in builtins::CATALOG {
                    self.info(line, format!("{k:<16} {d}"));
                }
            }
            Stmt::CatalogBuild(key) => {
                let e = builtins::build(key).map_err(engine(pos))?;
                self.push_value(st, describe_entry(&e));
            }
            Stmt::Report => {
                let r = self.report();
                self.info(line, r.summary_line());
            }
        }
        Ok(())
    }

    fn import(&mut self, e: &builtins::CatalogEntry) {
        let pres = e.presentation().clone();
        self.algebras.insert(pres.name().to_string(), pres.clone());
        self.group = Some(pres.group());
        self.factor = Some(pres.factor().clone());
        self.params = pres.params().iter().cloned().collect();
        self.current = Some(pres);
        for (n, d) in e.derivations() {
            self.derivations.insert(n.clone(), d.clone());
        }
        self.current_pair = e.pair().cloned();
        if let Some(p) = e.pair() {
            self.pairs.insert(p.name().to_string(), p.clone());
        }
        for g in e.metric().into_iter().chain(e.auxiliary_metric()) {
            self.metrics.insert(g.name().to_string(), g.clone());
        }
        if let Some(c) = e.connection() {
            self.connections.insert(c.name().to_string(), c.clone());
        }
        if let Some(c) = e.carroll() {
            self.carrolls.insert(c.name().to_string(), c.clone());
        }
    }

    fn pair_or_current(&self, name: Option<&str>, pos: Pos) -> R<Arc<LieRinehartPair>> {
        match name {
            Some(n) => Ok(Self::lookup(&self.pairs, "pair", n, pos)?.clone()),
            None => self
                .current_pair
                .clone()
                .ok_or_else(|| type_err(pos, "no pair declared yet; name one with `on`")),
        }
    }

    fn pair_ctx_names(&self, p: &LieRinehartPair) -> Vec<String> {
        p.basis().iter().map(|(n, _)| n.clone()).collect()
    }

    fn build_pair(&self, name: &str, items: &[PairItem], pos: Pos) -> R<Arc<LieRinehartPair>> {
        let pres = self.require_algebra(pos)?.clone();
        let ctx = Ctx { pres: &pres, basis: None, pair: None };
        let mut basis = Vec::new();
        let mut anchors = Vec::new();
        let anchor_value = |e: &Expr, pos: Pos| -> R<DerivationCombo> {
            match self.eval(e, &ctx)? {
                Value::Derivation(c) => Ok(c),
                Value::Element(e) if e.is_zero() => Ok(DerivationCombo::zero(&pres)),
                other => Err(type_err(pos, format!("anchor must be a named derivation combination, found {}", other.kind()))),
            }
        };
        for it in items {
            if let PairItem::Section { name, degree, anchor, pos } = it {
                let later = items.iter().rev().find_map(|i| match i {
                    PairItem::Anchor { name: n, anchor, pos } if n == name => Some((anchor, *pos)),
                    _ => None,
                });
                let a = match (anchor, later) {
                    (_, Some((e, p))) => anchor_value(e, p)?,
                    (Some(e), None) => anchor_value(e, *pos)?,
                    (None, None) => DerivationCombo::zero(&pres),
                };
                let d = match degree {
                    Some(d) => self.degree(d, *pos, pres.group())?,
                    None => a.evaluate().degree().unwrap_or_else(|| pres.group().zero()),
                };
                basis.push((name.clone(), d));
                anchors.push(a);
            }
        }
        let n = basis.len();
        let names: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
        for it in items {
            if let PairItem::Anchor { name, pos, .. } = it {
                if !names.contains(name) {
                    return Err(name_err(*pos, "basis section", name));
                }
            }
        }
        let ctx = Ctx { pres: &pres, basis: Some(&names), pair: None };
        let zero = Section::new(vec![Element::zero(&pres); n]);
        let mut structure: Vec<Vec<Option<Section>>> = vec![vec![None; n]; n];
        for it in items {
            if let PairItem::Bracket { a, b, value, pos } = it {
                let i = names.iter().position(|x| x == a).ok_or_else(|| name_err(*pos, "basis section", a))?;
                let j = names.iter().position(|x| x == b).ok_or_else(|| name_err(*pos, "basis section", b))?;
                structure[i][j] = Some(self.eval_section(value, &ctx)?);
            }
        }
        let mut table = vec![vec![zero.clone(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = match (&structure[i][j], &structure[j][i]) {
                    (Some(s), _) => s.clone(),
                    (None, Some(s)) => -&s.scale_rho(pres.rho_unit(&basis[i].1, &basis[j].1)),
                    (None, None) => zero.clone(),
                };
            }
        }
        LieRinehartPair::new(name, &pres, basis, anchors, table).map_err(engine(pos))
    }

    fn check(&mut self, target: &CheckTarget, pos: Pos) -> R<()> {
        let line = pos.line;
        let samples = self.samples;
        match target {
            CheckTarget::Factor => {
                let f = self
                    .current
                    .as_ref()
                    .map(|p| p.factor().clone())
                    .or_else(|| self.factor.clone())
                    .ok_or_else(|| type_err(pos, "no commutation factor declared"))?;
                let rep = f.check_commutation_axioms(samples, self.sampler.rng());
                self.push_report(line, rep);
            }
            CheckTarget::Derivation(n) => {
                let d = Self::lookup(&self.derivations, "derivation", n, pos)?.clone();
                self.push_report(line, verify_derivation(&d, n));
            }
            CheckTarget::Pair(n) => {
                let p = Self::lookup(&self.pairs, "pair", n, pos)?.clone();
                let rep = verify_pair(&p, samples, &mut self.sampler);
                self.push_report(line, rep);
            }
            CheckTarget::Metric(n) => {
                let g = Self::lookup(&self.metrics, "metric", n, pos)?.clone();
                self.push_report(line, verify_metric(&g));
            }
            CheckTarget::Connection { name, metric } => {
                let c = Self::lookup(&self.connections, "connection", name, pos)?.clone();
                let g = match metric {
                    Some(m) => Some(Self::lookup(&self.metrics, "metric", m, pos)?.clone()),
                    None => None,
                };
                let mut rep = VerificationReport::new();
                rep.push(verify_connection_degrees(&c));
                if let Some(g) = &g {
                    rep.push(check_metric_compatibility(&c, g));
                }
                rep.push(check_torsion_free(&c));
                rep.push(check_flat(&c));
                rep.extend(check_tensoriality(&c, samples, &mut self.sampler));
                self.push_report(line, rep);
            }
            CheckTarget::Carroll { name, connection } => {
                let cs = Self::lookup(&self.carrolls, "Carroll structure", name, pos)?.clone();
                let c = match connection {
                    Some(c) => Some(Self::lookup(&self.connections, "connection", c, pos)?.clone()),
                    None => None,
                };
                let rep = carroll_suite(&cs, c.as_ref(), samples, &mut self.sampler);
                self.push_report(line, rep);
            }
            CheckTarget::Builtin(key) => {
                let e = builtins::build(key).map_err(engine(pos))?;
                self.push_report(line, e.self_check());
            }
        }
        Ok(())
    }

    fn eval_top(&self, e: &Expr) -> R<Value> {
        let pres = self.require_algebra(e.pos())?;
        let pair = self.current_pair.as_ref().filter(|p| p.algebra().same(pres));
        let names = pair.map(|p| self.pair_ctx_names(p));
        let ctx = Ctx { pres, basis: names.as_deref(), pair };
        self.eval(e, &ctx)
    }

    fn eval_element(&self, e: &Expr, ctx: &Ctx) -> R<Element> {
        match self.eval(e, ctx)? {
            Value::Element(x) => Ok(x),
            other => Err(type_err(e.pos(), format!("expected an element, found {}", other.kind()))),
        }
    }

    fn eval_section(&self, e: &Expr, ctx: &Ctx) -> R<Section> {
        match self.eval(e, ctx)? {
            Value::Section(s) => Ok(s),
            Value::Element(x) if x.is_zero() => {
                let n = ctx.basis.map(|b| b.len()).unwrap_or(0);
                Ok(Section::new(vec![Element::zero(ctx.pres); n]))
            }
            other => Err(type_err(e.pos(), format!("expected a section, found {}", other.kind()))),
        }
    }

    fn resolve(&self, name: &str, pos: Pos, ctx: &Ctx) -> R<Value> {
        let pres = ctx.pres;
        if pres.generator_index(name).is_some() {
            return Ok(Value::Element(Element::generator(pres, name).map_err(engine(pos))?));
        }
        if pres.params().iter().any(|p| p == name) {
            return Ok(Value::Element(Element::param(pres, name).map_err(engine(pos))?));
        }
        if name == "i" {
            return Ok(Value::Element(Element::scalar(pres, GaussianRational::i())));
        }
        if let Some(basis) = ctx.basis {
            if let Some(k) = basis.iter().position(|b| b == name) {
                let mut coeffs = vec![Element::zero(pres); basis.len()];
                coeffs[k] = Element::one(pres);
                return Ok(Value::Section(Section::new(coeffs)));
            }
        }
        if let Some(d) = self.derivations.get(name) {
            if !d.presentation().same(pres) {
                return Err(type_err(pos, format!("derivation `{name}` belongs to another algebra")));
            }
            return Ok(Value::Derivation(DerivationCombo::single(name, d.clone())));
        }
        Err(name_err(pos, "name", name))
    }

    fn eval(&self, e: &Expr, ctx: &Ctx) -> R<Value> {
        let pres = ctx.pres;
        match e {
            Expr::Int(s, pos) => {
                let n: BigInt = s.parse().map_err(|_| type_err(*pos, "bad integer"))?;
                let c = GaussianRational::from_rational(BigRational::from_integer(n));
                Ok(Value::Element(Element::scalar(pres, c)))
            }
            Expr::Name(n, pos) => self.resolve(n, *pos, ctx),
            Expr::Neg(a, _) => Ok(match self.eval(a, ctx)? {
                Value::Element(x) => Value::Element(-&x),
                Value::Derivation(c) => Value::Derivation(c.scale_left(&Element::integer(pres, -1))),
                Value::Table(t) => Value::Table(t.neg()),
                Value::Section(s) => Value::Section(-&s),
            }),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                let sub = matches!(e, Expr::Sub(..));
                let (x, y) = (self.eval(a, ctx)?, self.eval(b, ctx)?);
                add_values(x, y, sub, b.pos(), pres)
            }
            Expr::Mul(a, b) => {
                let x = self.eval(a, ctx)?;
                let y = self.eval(b, ctx)?;
                match (x, y) {
                    (Value::Element(f), Value::Element(g)) => Ok(Value::Element(&f * &g)),
                    (Value::Element(f), Value::Derivation(c)) => Ok(Value::Derivation(c.scale_left(&f))),
                    (Value::Element(f), Value::Table(t)) => Ok(Value::Table(t.scale_left(&f))),
                    (Value::Element(f), Value::Section(s)) => Ok(Value::Section(s.scale_left(&f))),
                    (x, Value::Element(f)) => match f.as_field_scalar() {
                        Some(_) => scale_value(x, &f, pres),
                        None => Err(type_err(
                            b.pos(),
                            format!("a {} can only be multiplied by elements on the left", x.kind()),
                        )),
                    },
                    (x, y) => Err(type_err(b.pos(), format!("cannot multiply {} by {}", x.kind(), y.kind()))),
                }
            }
            Expr::Div(a, b, pos) => {
                let x = self.eval(a, ctx)?;
                let d = self.eval_element(b, ctx)?;
                let inv = d
                    .try_inverse()
                    .ok_or_else(|| DslError::Engine { pos: *pos, source: Error::NotAUnit(d.to_string()) })?;
                match x {
                    Value::Element(f) => Ok(Value::Element(&f * &inv)),
                    other if inv.as_field_scalar().is_some() => scale_value(other, &inv, pres),
                    other => Err(type_err(*pos, format!("a {} can only be divided by a scalar", other.kind()))),
                }
            }
            Expr::Pow(a, k, pos) => {
                let f = self.eval_element(a, ctx)?;
                let base = if *k < 0 {
                    f.try_inverse()
                        .ok_or_else(|| DslError::Engine { pos: *pos, source: Error::NotAUnit(f.to_string()) })?
                } else {
                    f
                };
                let mut acc = Element::one(pres);
                for _ in 0..k.unsigned_abs() {
                    acc = &acc * &base;
                }
                Ok(Value::Element(acc))
            }
            Expr::Call(name, args, pos) => self.call(name, args, *pos, ctx),
            Expr::Bracket(a, b, pos) => {
                let x = self.eval(a, ctx)?;
                let y = self.eval(b, ctx)?;
                match (&x, &y) {
                    (Value::Element(f), Value::Element(g)) => {
                        Ok(Value::Element(rho_commutator(f, g).map_err(engine(*pos))?))
                    }
                    (Value::Section(u), Value::Section(v)) => {
                        let p = ctx.pair.ok_or_else(|| type_err(*pos, "section brackets need a declared pair"))?;
                        Ok(Value::Section(p.bracket(u, v).map_err(engine(*pos))?))
                    }
                    _ => match (x.table(), y.table()) {
                        (Some(s), Some(t)) => Ok(Value::Table(der_commutator(&s, &t).map_err(engine(*pos))?)),
                        _ => Err(type_err(*pos, format!("cannot bracket {} with {}", x.kind(), y.kind()))),
                    },
                }
            }
        }
    }

    fn call(&self, name: &str, args: &[Expr], pos: Pos, ctx: &Ctx) -> R<Value> {
        let arity = |n: usize| -> R<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(type_err(pos, format!("`{name}` takes {n} argument(s), got {}", args.len())))
            }
        };
        if name == "anchor" {
            arity(1)?;
            let p = ctx.pair.ok_or_else(|| type_err(pos, "`anchor` needs a declared pair"))?;
            let s = self.eval_section(&args[0], ctx)?;
            return Ok(Value::Derivation(p.anchor_of(&s).map_err(engine(pos))?));
        }
        if let Some(g) = self.metrics.get(name) {
            arity(2)?;
            let (u, v) = self.section_args(g.pair(), args, ctx)?;
            return Ok(Value::Element(g.eval(&u, &v).map_err(engine(pos))?));
        }
        if let Some(c) = self.connections.get(name) {
            arity(2)?;
            let (u, v) = self.section_args(c.pair(), args, ctx)?;
            return Ok(Value::Section(c.nabla(&u, &v).map_err(engine(pos))?));
        }
        arity(1)?;
        let head = self.resolve(name, pos, ctx)?;
        let f = self.eval_element(&args[0], ctx)?;
        let out = match head {
            Value::Derivation(c) => c.apply(&f),
            Value::Table(t) => t.apply(&f),
            Value::Section(s) => {
                let p = ctx.pair.ok_or_else(|| type_err(pos, "applying a section needs a declared pair"))?;
                p.anchor_apply(&s, &f)
            }
            Value::Element(_) => return Err(type_err(pos, format!("`{name}` is an element, not a derivation"))),
        }
        .map_err(engine(pos))?;
        Ok(Value::Element(out))
    }

    fn section_args(&self, p: &Arc<LieRinehartPair>, args: &[Expr], ctx: &Ctx) -> R<(Section, Section)> {
        let names = self.pair_ctx_names(p);
        let inner = Ctx { pres: p.algebra(), basis: Some(&names), pair: Some(p) };
        let ctx = if ctx.pair.map(|q| q.same(p)).unwrap_or(false) { ctx } else { &inner };
        Ok((self.eval_section(&args[0], ctx)?, self.eval_section(&args[1], ctx)?))
    }
}

fn scale_value(x: Value, f: &Element, pres: &Arc<Presentation>) -> R<Value> {
    let _ = pres;
    Ok(match x {
        Value::Element(g) => Value::Element(&g * f),
        Value::Derivation(c) => Value::Derivation(c.scale_left(f)),
        Value::Table(t) => Value::Table(t.scale_left(f)),
        Value::Section(s) => Value::Section(s.scale_left(f)),
    })
}

fn add_values(x: Value, y: Value, sub: bool, pos: Pos, pres: &Arc<Presentation>) -> R<Value> {
    let minus_one = Element::integer(pres, -1);
    match (x, y) {
        (Value::Element(a), Value::Element(b)) => Ok(Value::Element(if sub { &a - &b } else { &a + &b })),
        (Value::Section(a), Value::Section(b)) => {
            if a.coeffs().len() != b.coeffs().len() {
                return Err(type_err(pos, "sections of different pairs"));
            }
            Ok(Value::Section(if sub { &a - &b } else { &a + &b }))
        }
        (Value::Section(a), Value::Element(b)) | (Value::Element(b), Value::Section(a)) if b.is_zero() => {
            Ok(Value::Section(a))
        }
        (Value::Derivation(a), Value::Derivation(b)) => {
            let b = if sub { b.scale_left(&minus_one) } else { b };
            Ok(Value::Derivation(a.add(&b)))
        }
        (x, y) => match (x.table(), y.table()) {
            (Some(a), Some(b)) => Ok(Value::Table(if sub { a.sub(&b) } else { a.add(&b) })),
            _ if matches!(&y, Value::Element(e) if e.is_zero()) && x.table().is_some() => Ok(x),
            _ => Err(type_err(pos, format!("cannot add {} and {}", x.kind(), y.kind()))),
        },
    }
}

fn rename_connection(c: Connection, name: &str) -> R<Connection> {
    let p = c.pair().clone();
    let n = p.rank();
    let table = (0..n).map(|a| (0..n).map(|b| c.christoffel(a, b).clone()).collect()).collect();
    Connection::new(name.to_string(), &p, table).map_err(|source| DslError::Engine {
        pos: Pos { line: 0, col: 0 },
        source,
    })
}

/// Multi-line summary used by `catalog build`.
pub fn describe_entry(e: &builtins::CatalogEntry) -> String {
    let pres = e.presentation();
    let mut lines = vec![format!("{}: {}", e.key(), e.description())];
    let gens: Vec<String> = pres
        .generators()
        .iter()
        .map(|g| {
            let mut s = format!("{} deg={}", g.name, g.degree);
            if g.invertible {
                s.push_str(" invertible");
            }
            if g.square_zero {
                s.push_str(" square_zero");
            }
            s
        })
        .collect();
    lines.push(format!(
        "  algebra {} over params [{}]{}: {}",
        pres.name(),
        pres.params().join(", "),
        if pres.integral_domain() { " (integral domain)" } else { "" },
        gens.join("; ")
    ));
    for (n, d) in e.derivations() {
        lines.push(format!("  derivation {n} = {}", d.table_string()));
    }
    if let Some(p) = e.pair() {
        let b: Vec<String> = p
            .basis()
            .iter()
            .zip(p.anchors())
            .map(|((n, d), a)| format!("{n} deg={d} anchor={a}"))
            .collect();
        lines.push(format!("  pair {}: {}", p.name(), b.join("; ")));
    }
    for g in e.metric().into_iter().chain(e.auxiliary_metric()) {
        let p = g.pair();
        let names = p.basis_names();
        let mut entries = Vec::new();
        for a in 0..p.rank() {
            for b in 0..p.rank() {
                if !g.entry(a, b).is_zero() {
                    entries.push(format!("({},{}) = {}", names[a], names[b], g.entry(a, b)));
                }
            }
        }
        lines.push(format!("  metric {}: {}", g.name(), if entries.is_empty() { "0".into() } else { entries.join(", ") }));
    }
    if let Some(c) = e.connection() {
        let p = c.pair();
        let names = p.basis_names();
        let mut entries = Vec::new();
        for a in 0..p.rank() {
            for b in 0..p.rank() {
                if !c.christoffel(a, b).is_zero() {
                    entries.push(format!("nabla_{} {} = {}", names[a], names[b], p.render_section(c.christoffel(a, b))));
                }
            }
        }
        lines.push(format!("  connection {}: {}", c.name(), if entries.is_empty() { "trivial".into() } else { entries.join(", ") }));
    }
    if let Some(cs) = e.carroll() {
        lines.push(format!("  carroll {}: sigma = {}", cs.name(), cs.pair().render_section(cs.sigma())));
    }
    for n in e.notes() {
        lines.push(format!("  note: {n}"));
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn run(src: &str) -> Result<Session, DslError> {
        let mut s = Session::new(1);
        s.run(&parse(src)?)?;
        Ok(s)
    }

    fn value(s: &Session, src: &str) -> String {
        s.render_value(&s.evaluate_str(src).unwrap())
    }

    #[test]
    fn mirror_bracket_is_filled_in() {
        let s = run("use builtin quantum_plane\npair P {\n  section a anchor = dx\n  section b anchor = px\n  bracket a b = -b\n}\n").unwrap();
        assert_eq!(value(&s, "[b, a]"), "b");
        assert_eq!(s.report().count(Status::Fail), 0);
    }

    #[test]
    fn spec_style_declarations() {
        let src = "params q\ngroup Z^2\nfactor q_form=[[0,1],[-1,0]]\nalgebra K { x deg=(1,0) invertible; y deg=(0,1) invertible }\n\
                   derivation ex { x -> x }\nderivation ey { y -> y }\n\
                   pair P { basis e1 deg=(0,0); basis e2 deg=(0,0); anchor e1 -> ex; anchor e2 -> ey; bracket [e1,e2] -> 0 }\n\
                   metric G { (e1,e1) -> 1 }\ncarroll Z { pair=P metric=G sigma=e2 }\ncheck carroll Z\n";
        let s = run(src).unwrap();
        assert!(s.report().passed(), "{}", s.report().to_text());
        assert_eq!(value(&s, "e1(x^3)"), "3*x^3");
    }

    #[test]
    fn type_and_name_errors_carry_positions() {
        let e = run("use builtin quantum_plane\neval dx + x^2\n").err().unwrap();
        assert!(matches!(e, DslError::Type { pos: Pos { line: 2, .. }, .. }), "{e}");
        let e = run("use builtin quantum_plane\neval 1/(1 + x)\n").err().unwrap();
        assert!(matches!(e, DslError::Engine { source: Error::NotAUnit(_), .. }), "{e}");
        let e = run("check pair P\n").err().unwrap();
        assert!(matches!(e, DslError::Name { .. }), "{e}");
    }

    #[test]
    fn arithmetic_in_expressions() {
        let s = run("use builtin quantum_plane\n").unwrap();
        assert_eq!(value(&s, "3/2*i*q^-2*x^2*y^-1"), "3/2*i*q^-2*x^2*y^-1");
        assert_eq!(value(&s, "(x*y)^-1"), "q^-1*x^-1*y^-1");
        assert_eq!(value(&s, "x*dx + dy"), "x*dx + dy");
        assert_eq!(value(&s, "C(dx, dx)"), "dy");
        assert_eq!(value(&s, "anchor(x*dx + dy)"), "x*dx + dy");
        assert_eq!(value(&s, "dx(y) + dy(y)"), "y");
    }
}
