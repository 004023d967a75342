use proptest::prelude::*;

use rho_carroll::algebra::Element;
use rho_carroll::builtins::{self, CatalogEntry};
use rho_carroll::derivation::{der_commutator, RhoDerivation};
use rho_carroll::dsl::{parse_expr, Session, Value};
use rho_carroll::sampling::Sampler;

fn entry(i: usize) -> CatalogEntry {
    let keys: Vec<&str> = builtins::keys().collect();
    builtins::build(keys[i % keys.len()]).unwrap()
}

fn entries_with_pairs() -> Vec<&'static str> {
    vec!["quantum_plane", "nc_torus", "r22_super", "z22", "eq2", "tensor_product"]
}

/// A homogeneous multiple `f*X` of a catalog derivation.
fn random_derivation(e: &CatalogEntry, s: &mut Sampler) -> Option<RhoDerivation> {
    let ders = e.derivations();
    if ders.is_empty() {
        return None;
    }
    let k = (s.homogeneous_element(e.presentation()).len()) % ders.len();
    let f = s.homogeneous_element(e.presentation());
    Some(ders[k].1.scale_left(&f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), k in 0usize..8) {
        let e = entry(k);
        let pres = e.presentation();
        let mut s = Sampler::new(seed);
        let (a, b, c) = (s.element(pres), s.element(pres), s.element(pres));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &Element::one(pres), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn derivation_rule(seed in any::<u64>(), k in 0usize..8) {
        let e = entry(k);
        let pres = e.presentation();
        let mut s = Sampler::new(seed);
        if let Some(x) = random_derivation(&e, &mut s) {
            let (f, g) = (s.homogeneous_element(pres), s.homogeneous_element(pres));
            if let (Some(dx), Some(df)) = (x.degree(), f.degree_of().degree().cloned()) {
                let rho = Element::constant(pres, pres.rho(&dx, &df));
                let lhs = x.apply(&(&f * &g)).unwrap();
                let rhs = &(&x.apply(&f).unwrap() * &g) + &(&(&rho * &f) * &x.apply(&g).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn derivation_jacobi(seed in any::<u64>(), k in 0usize..8) {
        let e = entry(k);
        let pres = e.presentation();
        let mut s = Sampler::new(seed);
        let xs: Option<Vec<RhoDerivation>> = (0..3).map(|_| random_derivation(&e, &mut s)).collect();
        if let Some(v) = xs {
            let (x, y, z) = (&v[0], &v[1], &v[2]);
            if let (Some(dx), Some(dy)) = (x.degree(), y.degree()) {
                let rho = Element::constant(pres, pres.rho(&dx, &dy));
                let lhs = der_commutator(x, &der_commutator(y, z).unwrap()).unwrap();
                let rhs = der_commutator(&der_commutator(x, y).unwrap(), z).unwrap()
                    .add(&der_commutator(y, &der_commutator(x, z).unwrap()).unwrap().scale_left(&rho));
                let f = s.element(pres);
                prop_assert_eq!(lhs.apply(&f).unwrap(), rhs.apply(&f).unwrap());
            }
        }
    }

    #[test]
    fn curvature_and_torsion_are_left_linear(seed in any::<u64>(), k in 0usize..6) {
        let e = builtins::build(entries_with_pairs()[k]).unwrap();
        let pair = e.pair().unwrap();
        let c = e.connection().unwrap();
        let mut s = Sampler::new(seed);
        let (u, v, w) = (pair.random_section(&mut s), pair.random_section(&mut s), pair.random_section(&mut s));
        let f = s.homogeneous_element(pair.algebra());
        let fu = u.scale_left(&f);
        prop_assert_eq!(c.nabla(&fu, &v).unwrap(), c.nabla(&u, &v).unwrap().scale_left(&f));
        prop_assert_eq!(c.curvature(&fu, &v, &w).unwrap(), c.curvature(&u, &v, &w).unwrap().scale_left(&f));
        prop_assert_eq!(c.torsion(&fu, &v).unwrap(), c.torsion(&u, &v).unwrap().scale_left(&f));
    }

    #[test]
    fn rendered_elements_parse_back(seed in any::<u64>(), k in 0usize..8) {
        let e = entry(k);
        let key = e.key().to_string();
        let mut session = Session::new(0);
        session.run(&rho_carroll::dsl::parse(&format!("use builtin {key}")).unwrap()).unwrap();
        let mut s = Sampler::new(seed);
        let f = s.element(e.presentation());
        let text = f.to_string();
        match session.evaluate_str(&text) {
            Ok(Value::Element(g)) => prop_assert_eq!(g.to_string(), text),
            other => prop_assert!(false, "{key}: `{text}` gave {other:?}"),
        }
    }

    #[test]
    fn parse_render_parse_is_stable(src in expr_source()) {
        let once = parse_expr(&src).unwrap().to_string();
        let twice = parse_expr(&once).unwrap().to_string();
        prop_assert_eq!(once, twice);
    }
}

fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..20).prop_map(|n| n.to_string()),
        prop::sample::select(vec!["x", "y", "q", "i", "u", "v"]).prop_map(str::to_string),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"]))
                .prop_map(|(a, b, op)| format!("{a} {op} {b}")),
            (inner.clone(), -3i32..4).prop_map(|(a, k)| format!("({a})^{k}")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("({a})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("[{a}, {b}]")),
            (prop::sample::select(vec!["dx", "G"]), inner.clone()).prop_map(|(f, a)| format!("{f}({a})")),
        ]
    })
}
