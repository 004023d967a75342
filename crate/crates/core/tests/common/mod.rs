//! Oracles shared by the integration targets.

use std::sync::Arc;

use rho_carroll::algebra::{Element, Monomial, Presentation};
use rho_carroll::coefficients::{GaussianRational, Laurent};

/// Bubble-sorts a word letter by letter, tracking ρ by hand from the
/// bilinear forms. Shares nothing with the engine's multiplication.
pub fn adjacent_swap_oracle(pres: &Arc<Presentation>, word: &[(usize, i32)]) -> Element {
    let f = pres.factor();
    let (b, c) = (f.q_form(), f.sign_form());
    let slots = |g: usize, s: i64| -> Vec<i64> {
        pres.generators()[g].degree.slots().iter().map(|v| v * s).collect()
    };
    let mut letters: Vec<(usize, i64)> = Vec::new();
    for &(g, k) in word {
        for _ in 0..k.unsigned_abs() {
            letters.push((g, k.signum() as i64));
        }
    }
    let (mut qexp, mut odd) = (0i64, 0i64);
    let n = letters.len();
    for i in 0..n {
        for j in 0..n.saturating_sub(i + 1) {
            let (l, r) = (letters[j], letters[j + 1]);
            if l.0 > r.0 {
                let (a, bb) = (slots(l.0, l.1), slots(r.0, r.1));
                for s in 0..a.len() {
                    for t in 0..bb.len() {
                        qexp += a[s] * b[s][t] * bb[t];
                        odd += a[s] * c[s][t] as i64 * bb[t];
                    }
                }
                letters.swap(j, j + 1);
            }
        }
    }
    let mut exps = vec![0i32; pres.num_generators()];
    let mut count = vec![0usize; pres.num_generators()];
    for (g, s) in &letters {
        exps[*g] += *s as i32;
        count[*g] += 1;
    }
    if pres.generators().iter().zip(&count).any(|(g, k)| g.square_zero && *k > 1) {
        return Element::zero(pres);
    }
    let params = pres.params().clone();
    let mut pexp = vec![0i32; params.len()];
    match f.q_index() {
        Some(qi) => pexp[qi] = qexp as i32,
        None => assert_eq!(qexp, 0, "q-power without a q parameter"),
    }
    let sign = if odd.rem_euclid(2) == 1 { -1 } else { 1 };
    let coeff = Laurent::monomial(params, GaussianRational::from_integer(sign), pexp);
    Element::from_terms(pres, [(Monomial(exps), coeff)]).unwrap()
}
