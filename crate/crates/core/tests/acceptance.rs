//! One line per acceptance criterion. Every tolerance is exact: a value
//! passes only if it is symbolically equal to its target.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use common::adjacent_swap_oracle;
use rho_carroll::algebra::{rho_commutator, Element};
use rho_carroll::builtins::{self, CatalogEntry};
use rho_carroll::carroll::{check_stationary, flow_derivation, quotient_metric};
use rho_carroll::coefficients::GaussianRational;
use rho_carroll::derivation::{der_commutator, verify_derivation, RhoDerivation};
use rho_carroll::dsl::{self, Session, Value};
use rho_carroll::geometry::{
    check_flat, check_metric_compatibility, check_tensoriality, check_torsion_free, levi_civita, Connection,
};
use rho_carroll::report::{Status, VerificationReport, WitnessKind};
use rho_carroll::rinehart::{verify_pair, Section};
use rho_carroll::sampling::Sampler;

const SEED: u64 = 2024;
const GOLDEN_BUDGET: Duration = Duration::from_secs(1);
const SUITE_BUDGET: Duration = Duration::from_secs(30);
const AXIOM_SAMPLES: usize = 200;
const ORACLE_WORDS: usize = 1000;
const ORACLE_WORD_LEN: usize = 8;
const PERTURBATIONS: usize = 10;
const FLOW_ORDER: usize = 6;
const FLOW_PAIRS: usize = 50;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_pass(rep: &VerificationReport, what: &str) -> Outcome {
    match rep.failures().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: {c}")),
    }
}

fn entry(key: &str) -> CatalogEntry {
    builtins::build(key).unwrap_or_else(|e| panic!("{key}: {e}"))
}

fn ac1() -> Outcome {
    let e = entry("quantum_plane");
    let (pair, cs, c) = (e.pair().unwrap(), e.carroll().unwrap(), e.connection().unwrap());
    let rep = rho_carroll::carroll::carroll_suite(cs, Some(c), 20, &mut Sampler::new(SEED));
    for name in ["kernel containment", "kernel exactness", "metric compatibility"] {
        ensure(rep.status_of(name) == Some(Status::Pass), || format!("{name}: {:?}", rep.status_of(name)))?;
    }
    let dy = pair.basis_section(1);
    ensure(c.nabla(&pair.basis_section(0), &pair.basis_section(0)).unwrap() == dy, || "nabla_dx dx != dy".into())?;
    for a in 0..pair.rank() {
        for b in 0..pair.rank() {
            let t = c.torsion(&pair.basis_section(a), &pair.basis_section(b)).unwrap();
            ensure(t.is_zero(), || format!("T(e{a},e{b}) = {}", pair.render_section(&t)))?;
        }
    }
    let (dx, dy) = (pair.basis_section(0), pair.basis_section(1));
    for w in [&dx, &dy] {
        let r = c.curvature(&dx, &dy, w).unwrap();
        ensure(r.is_zero(), || format!("R(dx,dy) = {}", pair.render_section(&r)))?;
    }
    Ok(())
}

/// A homogeneous section with every coefficient of the same degree.
fn homogeneous_section(pair: &rho_carroll::rinehart::LieRinehartPair, s: &mut Sampler) -> Section {
    let pres = pair.algebra();
    let lead = s.homogeneous_element(pres);
    let d = lead.degree_of().degree().cloned().unwrap_or_else(|| pres.group().zero());
    let mut coeffs = vec![lead];
    for _ in 1..pair.rank() {
        coeffs.push(s.homogeneous_of_degree(pres, &d).unwrap_or_else(|| Element::zero(pres)));
    }
    Section::new(coeffs)
}

fn ac2() -> Outcome {
    let e = entry("nc_torus");
    let (pair, g, c) = (e.pair().unwrap(), e.metric().unwrap(), e.connection().unwrap());
    let pres = pair.algebra();
    ensure(check_metric_compatibility(c, g).status == Status::Pass, || "basis triples".into())?;
    ensure(check_flat(c).status == Status::Pass, || "curvature".into())?;
    ensure(check_torsion_free(c).status == Status::Pass, || "torsion".into())?;
    let mut s = Sampler::new(SEED);
    for _ in 0..50 {
        let (f, gs, h) = (homogeneous_section(pair, &mut s), homogeneous_section(pair, &mut s), homogeneous_section(pair, &mut s));
        let lhs = pair.anchor_apply(&f, &g.eval(&gs, &h).unwrap()).unwrap();
        let (df, dg) = (pair.section_degree(&f), pair.section_degree(&gs));
        let (Some(df), Some(dg)) = (df.degree(), dg.degree()) else { continue };
        let rho = Element::constant(pres, pres.rho(df, dg));
        let (gv, hv) = (gs.coeff(1), h.coeff(1));
        let expanded = &(&pair.anchor_apply(&f, gv).unwrap() * hv) + &(&(&rho * gv) * &pair.anchor_apply(&f, hv).unwrap());
        let via_connection = &g.eval(&c.nabla(&f, &gs).unwrap(), &h).unwrap()
            + &(&rho * &g.eval(&gs, &c.nabla(&f, &h).unwrap()).unwrap());
        ensure(lhs == expanded && lhs == via_connection, || format!("a_f(G(g,h)) = {lhs}, expansion {expanded}"))?;
    }
    Ok(())
}

fn scaled_derivation(e: &CatalogEntry, s: &mut Sampler, k: usize) -> Option<RhoDerivation> {
    let ders = e.derivations();
    (!ders.is_empty()).then(|| ders[k % ders.len()].1.scale_left(&s.homogeneous_element(e.presentation())))
}

fn ac3() -> Outcome {
    for key in builtins::keys() {
        let e = entry(key);
        let pres = e.presentation();
        let mut s = Sampler::new(SEED);
        all_pass(&pres.factor().check_commutation_axioms(AXIOM_SAMPLES, s.rng()), key)?;
        for i in 0..AXIOM_SAMPLES {
            let (f, g) = (s.homogeneous_element(pres), s.homogeneous_element(pres));
            let c = rho_commutator(&f, &g).map_err(|e| e.to_string())?;
            ensure(c.is_zero(), || format!("{key}: [{f},{g}] = {c}"))?;
            let Some(x) = scaled_derivation(&e, &mut s, i) else { continue };
            if let (Some(dx), Some(df)) = (x.degree(), f.degree_of().degree()) {
                let rho = Element::constant(pres, pres.rho(&dx, df));
                let lhs = x.apply(&(&f * &g)).unwrap();
                let rhs = &(&x.apply(&f).unwrap() * &g) + &(&(&rho * &f) * &x.apply(&g).unwrap());
                ensure(lhs == rhs, || format!("{key}: derivation rule on {f}, {g}"))?;
            }
            let (y, z) = (scaled_derivation(&e, &mut s, i + 1).unwrap(), scaled_derivation(&e, &mut s, i + 2).unwrap());
            if let (Some(dx), Some(dy)) = (x.degree(), y.degree()) {
                let rho = Element::constant(pres, pres.rho(&dx, &dy));
                let lhs = der_commutator(&x, &der_commutator(&y, &z).unwrap()).unwrap();
                let rhs = der_commutator(&der_commutator(&x, &y).unwrap(), &z)
                    .unwrap()
                    .add(&der_commutator(&y, &der_commutator(&x, &z).unwrap()).unwrap().scale_left(&rho));
                ensure(lhs == rhs, || format!("{key}: derivation Jacobi"))?;
            }
        }
        for (name, d) in e.derivations() {
            all_pass(&verify_derivation(d, name), key)?;
        }
        if let Some(pair) = e.pair() {
            all_pass(&verify_pair(pair, AXIOM_SAMPLES, &mut s), key)?;
            let trivial = Connection::trivial("C0", pair);
            let c = e.connection().unwrap_or(&trivial);
            all_pass(&check_tensoriality(c, AXIOM_SAMPLES, &mut s), key)?;
        }
    }
    Ok(())
}

fn ac4() -> Outcome {
    for key in builtins::keys() {
        let pres = entry(key).presentation().clone();
        let mut s = Sampler::new(SEED);
        for _ in 0..ORACLE_WORDS {
            let w = s.word(&pres, ORACLE_WORD_LEN);
            let got = Element::normalize(&pres, &w).map_err(|e| e.to_string())?;
            ensure(got == adjacent_swap_oracle(&pres, &w), || format!("{key}: word {w:?}"))?;
        }
    }
    for key in ["quantum_plane", "nc_torus"] {
        let e = entry(key);
        let pair = e.pair().unwrap();
        let mut s = Sampler::new(SEED);
        for _ in 0..100 {
            let (u, v) = (pair.random_section(&mut s), pair.random_section(&mut s));
            let lhs = pair.anchor_derivation(&pair.bracket(&u, &v).unwrap()).unwrap();
            let rhs = der_commutator(&pair.anchor_derivation(&u).unwrap(), &pair.anchor_derivation(&v).unwrap()).unwrap();
            ensure(lhs == rhs, || format!("{key}: bracket vs commutator"))?;
        }
    }
    Ok(())
}

fn ac5() -> Outcome {
    let e = entry("nc_torus");
    let pair = e.pair().unwrap();
    let h = e.auxiliary_metric().ok_or("no auxiliary metric")?;
    let lc = levi_civita(pair, h, None).map_err(|e| e.to_string())?;
    let n = pair.rank();
    for a in 0..n {
        for b in 0..n {
            ensure(lc.christoffel(a, b).is_zero(), || format!("Gamma[{a}][{b}] != 0"))?;
        }
    }
    ensure(check_torsion_free(&lc).status == Status::Pass, || "torsion".into())?;
    ensure(check_metric_compatibility(&lc, h).status == Status::Pass, || "compatibility".into())?;
    let mut s = Sampler::new(SEED);
    for i in 0..PERTURBATIONS {
        let (a, b, k) = (i % n, (i / n) % n, (i / (n * n)) % n);
        let mut f = s.homogeneous_element(pair.algebra());
        if f.is_zero() {
            f = Element::one(pair.algebra());
        }
        let mut table: Vec<Vec<Section>> = (0..n).map(|x| (0..n).map(|y| lc.christoffel(x, y).clone()).collect()).collect();
        table[a][b].add_at(k, &f);
        let p = Connection::new("P", pair, table).map_err(|e| e.to_string())?;
        let broken = check_torsion_free(&p).status == Status::Fail || check_metric_compatibility(&p, h).status == Status::Fail;
        ensure(broken, || format!("perturbation {f} at Gamma[{a}][{b}]_{k} survived"))?;
    }
    Ok(())
}

fn ac6() -> Outcome {
    for key in ["quantum_plane", "nc_torus"] {
        let e = entry(key);
        let cs = e.carroll().unwrap();
        all_pass(&check_stationary(cs), key)?;
        let q = quotient_metric(cs, 20, &mut Sampler::new(SEED)).map_err(|e| e.to_string())?;
        ensure(q.nondegenerate.status == Status::Pass, || format!("{key}: {}", q.nondegenerate))?;
        ensure(q.lift_independence.status == Status::Pass, || format!("{key}: {}", q.lift_independence))?;
        let one = Element::one(cs.pair().algebra());
        ensure(q.matrix == vec![vec![one]], || format!("{key}: quotient matrix {q}"))?;
    }
    Ok(())
}

fn ac7() -> Outcome {
    let e = entry("quantum_plane");
    let pres = e.presentation();
    let dy = e.derivation("dy").unwrap();
    let y = Element::generator(pres, "y").unwrap();
    let series = flow_derivation(dy, &y, FLOW_ORDER).map_err(|e| e.to_string())?;
    let mut factorial = BigInt::from(1);
    for k in 0..=FLOW_ORDER {
        if k > 0 {
            factorial *= k;
        }
        let c = GaussianRational::from_rational(BigRational::new(BigInt::from(1), factorial.clone()));
        let want = &y * &Element::scalar(pres, c);
        ensure(series.coeffs[k] == want, || format!("t^{k}: {} != {want}", series.coeffs[k]))?;
    }
    let mut s = Sampler::new(SEED);
    for key in ["dx", "dy"] {
        let d = e.derivation(key).unwrap();
        for _ in 0..FLOW_PAIRS / 2 {
            let (f, g) = (s.element(pres), s.element(pres));
            let lhs = flow_derivation(d, &(&f * &g), FLOW_ORDER).unwrap();
            let rhs = flow_derivation(d, &f, FLOW_ORDER)
                .unwrap()
                .mul_truncated(&flow_derivation(d, &g, FLOW_ORDER).unwrap(), FLOW_ORDER);
            ensure(lhs.coeffs == rhs.coeffs, || format!("multiplicativity on {f}, {g}"))?;
        }
    }
    Ok(())
}

const NEGATIVE_CONTROLS: &[(&str, &str, &str)] = &[
    (
        "symmetric q_form",
        "rho(a,b)*rho(b,a) = 1",
        "params q\ngroup Z^2\nfactor qform=[[0,1],[1,0]] qparam=q\nalgebra A { x deg=(1,0) }\ncheck factor\n",
    ),
    (
        "corrupted structure constant",
        "anchor homomorphism",
        "use builtin quantum_plane\npair Bad {\n  section dx anchor = dx\n  section dy anchor = dy\n  bracket dx dy = y*dy\n}\ncheck pair Bad\n",
    ),
    (
        "non-Killing metric perturbation",
        "stationary",
        "use builtin r22_super\nmetric G2 { (dy,dy) = 1 + x^2; (dtheta1,dtheta2) = 1 }\ncarroll S2 on G2 sigma = dx\ncheck carroll S2\n",
    ),
    (
        "incompatible connection",
        "metric compatibility",
        "use builtin quantum_plane\nconnection C2 { (dx,dx) = dy + dx }\ncheck connection C2 with metric G\n",
    ),
];

fn ac8() -> Outcome {
    for (label, check, src) in NEGATIVE_CONTROLS {
        let mut session = Session::new(SEED);
        session.run(&dsl::parse(src).map_err(|e| format!("{label}: {e}"))?).map_err(|e| format!("{label}: {e}"))?;
        let report = session.report();
        ensure(report.exit_code() == 1, || format!("{label}: exit {}", report.exit_code()))?;
        let failed = report
            .checks()
            .find(|c| c.check == *check && c.status == Status::Fail)
            .ok_or_else(|| format!("{label}: `{check}` did not fail"))?;
        let w = failed.witness.as_ref().ok_or_else(|| format!("{label}: no witness"))?;
        let value = match w.kind {
            WitnessKind::Degree => return Err(format!("{label}: degree witness")),
            _ => session.evaluate_str(&w.expr).map_err(|e| format!("{label}: witness `{}`: {e}", w.expr))?,
        };
        let nonzero = match value {
            Value::Element(x) => !x.is_zero(),
            Value::Section(s) => !s.is_zero(),
            _ => false,
        };
        ensure(nonzero, || format!("{label}: witness `{}` is zero", w.expr))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome, Option<Duration>); 8] = [
        ("AC1", "quantum-plane golden run", ac1, Some(GOLDEN_BUDGET)),
        ("AC2", "torus golden run", ac2, Some(GOLDEN_BUDGET)),
        ("AC3", "axiom property suite on every entry", ac3, Some(SUITE_BUDGET)),
        ("AC4", "oracle equivalence", ac4, None),
        ("AC5", "Koszul / Levi-Civita uniqueness probe", ac5, Some(GOLDEN_BUDGET)),
        ("AC6", "stationarity and quotient metric", ac6, None),
        ("AC7", "flow series and multiplicativity", ac7, None),
        ("AC8", "negative controls with live witnesses", ac8, None),
    ];
    let mut failed = 0;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let (Ok(()), Some(b)) = (&outcome, budget) {
            if took > b {
                outcome = Err(format!("took {took:?}, budget {b:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("[PASS] {id} {title} ({:.3}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {title} ({:.3}s): {why}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
