//! Seeded random generators for the property checks.
//!
//! Everything is driven by a single ChaCha stream so that a run is fully
//! determined by its seed.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Element, Monomial, Presentation};
use crate::coefficients::{GaussianRational, Laurent};
use crate::grading::Degree;

/// Default bound on the total absolute exponent of sampled monomials.
pub const DEFAULT_EXPONENT_BOUND: i32 = 2;

struct Pool {
    pres: Arc<Presentation>,
    by_degree: BTreeMap<Degree, Vec<Monomial>>,
    all: Vec<Monomial>,
}

pub struct Sampler {
    rng: ChaCha8Rng,
    bound: i32,
    pools: Vec<Pool>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self::with_bound(seed, DEFAULT_EXPONENT_BOUND)
    }

    pub fn with_bound(seed: u64, bound: i32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bound,
            pools: Vec::new(),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn pool(&mut self, pres: &Arc<Presentation>) -> usize {
        if let Some(i) = self.pools.iter().position(|p| Arc::ptr_eq(&p.pres, pres)) {
            return i;
        }
        let all = enumerate_monomials(pres, self.bound);
        let mut by_degree: BTreeMap<Degree, Vec<Monomial>> = BTreeMap::new();
        for m in &all {
            by_degree
                .entry(pres.monomial_degree(m))
                .or_default()
                .push(m.clone());
        }
        self.pools.push(Pool {
            pres: pres.clone(),
            by_degree,
            all,
        });
        self.pools.len() - 1
    }

    /// Nonzero coefficient `±k·(i)·q^e` with small `k` and `e`.
    pub fn coefficient(&mut self, pres: &Presentation) -> Laurent {
        let k = loop {
            let k: i64 = self.rng.random_range(-3..=3);
            if k != 0 {
                break k;
            }
        };
        let mut c = GaussianRational::from_integer(k);
        if self.rng.random_bool(0.25) {
            c = &c * &GaussianRational::i();
        }
        let params = pres.params().clone();
        let mut exps = vec![0; params.len()];
        if let Some(qi) = pres.factor().q_index() {
            exps[qi] = self.rng.random_range(-1..=1);
        }
        Laurent::monomial(params, c, exps)
    }

    /// A random nonzero homogeneous element with up to three terms.
    pub fn homogeneous_element(&mut self, pres: &Arc<Presentation>) -> Element {
        let i = self.pool(pres);
        let n = self.pools[i].all.len();
        let m = self.pools[i].all[self.rng.random_range(0..n)].clone();
        let d = pres.monomial_degree(&m);
        self.homogeneous_of_degree(pres, &d)
            .expect("degree of a pooled monomial has candidates")
    }

    /// A random nonzero element of degree `d`, if the pool has one.
    pub fn homogeneous_of_degree(&mut self, pres: &Arc<Presentation>, d: &Degree) -> Option<Element> {
        let i = self.pool(pres);
        let candidates = self.pools[i].by_degree.get(d)?.clone();
        let terms = self.rng.random_range(1..=3.min(candidates.len()));
        let mut e = Element::zero(pres);
        for _ in 0..terms {
            let m = candidates[self.rng.random_range(0..candidates.len())].clone();
            let c = self.coefficient(pres);
            e = &e + &Element::monomial(pres, m).unwrap().scale(&c);
        }
        if e.is_zero() {
            let m = candidates[0].clone();
            e = Element::monomial(pres, m).unwrap();
        }
        Some(e)
    }

    /// Degrees that have at least one pooled monomial.
    pub fn available_degrees(&mut self, pres: &Arc<Presentation>) -> Vec<Degree> {
        let i = self.pool(pres);
        self.pools[i].by_degree.keys().cloned().collect()
    }

    /// Sum of one to three homogeneous elements, usually inhomogeneous.
    pub fn element(&mut self, pres: &Arc<Presentation>) -> Element {
        let parts = self.rng.random_range(1..=3);
        let mut e = Element::zero(pres);
        for _ in 0..parts {
            e = &e + &self.homogeneous_element(pres);
        }
        e
    }

    /// A word of up to `max_len` letters `(generator, ±1)`; negative letters
    /// only for invertible generators.
    pub fn word(&mut self, pres: &Presentation, max_len: usize) -> Vec<(usize, i32)> {
        let n = pres.num_generators();
        if n == 0 {
            return Vec::new();
        }
        let len = self.rng.random_range(0..=max_len);
        (0..len)
            .map(|_| {
                let g = self.rng.random_range(0..n);
                let e = if pres.generators()[g].invertible && self.rng.random_bool(0.4) {
                    -1
                } else {
                    1
                };
                (g, e)
            })
            .collect()
    }
}

fn enumerate_monomials(pres: &Presentation, bound: i32) -> Vec<Monomial> {
    let gens = pres.generators();
    let mut out = Vec::new();
    let mut cur = vec![0i32; gens.len()];
    fn rec(
        pres: &Presentation,
        i: usize,
        left: i32,
        cur: &mut Vec<i32>,
        out: &mut Vec<Monomial>,
    ) {
        let gens = pres.generators();
        if i == gens.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let g = &gens[i];
        let lo = if g.invertible { -left } else { 0 };
        let hi = if g.square_zero { left.min(1) } else { left };
        for e in lo..=hi {
            cur[i] = e;
            rec(pres, i + 1, left - e.abs(), cur, out);
        }
        cur[i] = 0;
    }
    rec(pres, 0, bound, &mut cur, &mut out);
    out
}
