//! Grading group `ℤ^r ⊕ ℤ₂^s` and bicharacter commutation factors
//! `ρ(a,b) = q^{⟨a,Bb⟩}·(−1)^{⟨a,Cb⟩}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::coefficients::{Laurent, Params, RhoUnit};
use crate::error::{Error, Result};
use crate::report::{Check, VerificationReport, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GradeGroup {
    pub free_rank: usize,
    pub torsion_rank: usize,
}

impl GradeGroup {
    pub fn new(free_rank: usize, torsion_rank: usize) -> Self {
        GradeGroup {
            free_rank,
            torsion_rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion_rank
    }

    pub fn zero(&self) -> Degree {
        Degree {
            slots: vec![0; self.rank()],
            free: self.free_rank,
        }
    }

    pub fn degree(&self, slots: &[i64]) -> Result<Degree> {
        if slots.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: slots.len(),
            });
        }
        Ok(Degree::reduced(slots.to_vec(), self.free_rank))
    }

    pub fn contains(&self, d: &Degree) -> bool {
        d.slots.len() == self.rank() && d.free == self.free_rank
    }

    /// Uniform random degree with free slots in `[-bound, bound]`.
    pub fn random_degree<R: Rng>(&self, rng: &mut R, bound: i64) -> Degree {
        let slots = (0..self.rank())
            .map(|i| {
                if i < self.free_rank {
                    rng.random_range(-bound..=bound)
                } else {
                    rng.random_range(0..=1)
                }
            })
            .collect();
        Degree::reduced(slots, self.free_rank)
    }
}

impl fmt::Display for GradeGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.free_rank, self.torsion_rank) {
            (0, 0) => write!(f, "0"),
            (r, 0) => write!(f, "Z^{r}"),
            (0, s) => write!(f, "Z2^{s}"),
            (r, s) => write!(f, "Z^{r} x Z2^{s}"),
        }
    }
}

/// An element of the grading group. The trailing torsion slots are kept in `{0,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Degree {
    slots: Vec<i64>,
    free: usize,
}

impl Degree {
    fn reduced(mut slots: Vec<i64>, free: usize) -> Self {
        for s in slots.iter_mut().skip(free) {
            *s = s.rem_euclid(2);
        }
        Degree { slots, free }
    }

    pub fn slots(&self) -> &[i64] {
        &self.slots
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(|s| *s == 0)
    }

    fn check(&self, other: &Degree) {
        assert!(
            self.slots.len() == other.slots.len() && self.free == other.free,
            "degrees from different grading groups"
        );
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Degree {
    type Output = Degree;
    fn add(self, rhs: &Degree) -> Degree {
        self.check(rhs);
        Degree::reduced(
            self.slots.iter().zip(&rhs.slots).map(|(a, b)| a + b).collect(),
            self.free,
        )
    }
}

impl Sub for &Degree {
    type Output = Degree;
    fn sub(self, rhs: &Degree) -> Degree {
        self + &-rhs
    }
}

impl Neg for &Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::reduced(self.slots.iter().map(|a| -a).collect(), self.free)
    }
}

impl Mul<i64> for &Degree {
    type Output = Degree;
    fn mul(self, k: i64) -> Degree {
        Degree::reduced(self.slots.iter().map(|a| a * k).collect(), self.free)
    }
}

/// Commutation factor realised as a bicharacter.
///
/// `q_form` (B) may only be nonzero on the free block; `sign_form` (C) is read
/// mod 2. The axioms themselves (antisymmetric B, symmetric C) are not enforced
/// here so that [`CommutationFactor::check_commutation_axioms`] can report on
/// broken factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationFactor {
    group: GradeGroup,
    q_form: Vec<Vec<i64>>,
    sign_form: Vec<Vec<u8>>,
    params: Params,
    q_index: Option<usize>,
}

impl CommutationFactor {
    /// `q_param` names the parameter playing the role of `q`; it is required
    /// whenever `q_form` is nonzero.
    pub fn new(
        group: GradeGroup,
        q_form: Vec<Vec<i64>>,
        sign_form: Vec<Vec<i64>>,
        params: Params,
        q_param: Option<&str>,
    ) -> Result<Self> {
        let n = group.rank();
        let square = |m: usize, rows: &[Vec<i64>]| rows.len() == m && rows.iter().all(|r| r.len() == m);
        if !square(n, &q_form) {
            return Err(Error::InvalidFactor(format!("q_form must be {n}x{n}")));
        }
        if !square(n, &sign_form) {
            return Err(Error::InvalidFactor(format!("sign_form must be {n}x{n}")));
        }
        for (i, row) in q_form.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v != 0 && (i >= group.free_rank || j >= group.free_rank) {
                    return Err(Error::InvalidFactor(
                        "q_form must vanish on torsion slots".into(),
                    ));
                }
            }
        }
        let needs_q = q_form.iter().flatten().any(|v| *v != 0);
        let q_index = match q_param {
            Some(name) => Some(
                params
                    .iter()
                    .position(|p| p == name)
                    .ok_or_else(|| Error::UnknownParam(name.to_string()))?,
            ),
            None if needs_q => {
                return Err(Error::InvalidFactor(
                    "nonzero q_form needs a q parameter".into(),
                ))
            }
            None => None,
        };
        let sign_form = sign_form
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.rem_euclid(2) as u8).collect())
            .collect();
        Ok(CommutationFactor {
            group,
            q_form,
            sign_form,
            params,
            q_index,
        })
    }

    /// The trivial factor `ρ ≡ 1`.
    pub fn trivial(group: GradeGroup, params: Params) -> Self {
        let n = group.rank();
        CommutationFactor {
            group,
            q_form: vec![vec![0; n]; n],
            sign_form: vec![vec![0; n]; n],
            params,
            q_index: None,
        }
    }

    pub fn group(&self) -> GradeGroup {
        self.group
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn q_index(&self) -> Option<usize> {
        self.q_index
    }

    pub fn q_form(&self) -> &[Vec<i64>] {
        &self.q_form
    }

    pub fn sign_form(&self) -> &[Vec<u8>] {
        &self.sign_form
    }

    /// `ρ(a,b)` as a unit, without allocating a coefficient.
    pub fn rho_unit(&self, a: &Degree, b: &Degree) -> RhoUnit {
        let (a, b) = (a.slots(), b.slots());
        let n = self.group.rank();
        let mut q = 0i64;
        let mut s = 0i64;
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                q += a[i] * self.q_form[i][j] * b[j];
                s += a[i] * self.sign_form[i][j] as i64 * b[j];
            }
        }
        RhoUnit {
            q_power: q,
            negative: s.rem_euclid(2) == 1,
        }
    }

    pub fn rho(&self, a: &Degree, b: &Degree) -> Result<Laurent> {
        for d in [a, b] {
            if !self.group.contains(d) {
                return Err(Error::DimensionMismatch {
                    expected: self.group.rank(),
                    found: d.slots().len(),
                });
            }
        }
        Ok(self.unit_to_laurent(self.rho_unit(a, b)))
    }

    pub fn unit_to_laurent(&self, u: RhoUnit) -> Laurent {
        Laurent::one(self.params.clone()).mul_rho(self.q_index, u)
    }

    /// Samples `samples` random degree triples and checks the commutation
    /// factor axioms and their derived identities on each.
    pub fn check_commutation_axioms<R: Rng>(&self, samples: usize, rng: &mut R) -> VerificationReport {
        let mut report = VerificationReport::new();
        let target = "commutation factor";
        let mut fail: [Option<Witness>; 4] = [None, None, None, None];
        let names = [
            "rho(a,b)*rho(b,a) = 1",
            "rho(a+b,c) = rho(a,c)*rho(b,c)",
            "rho(a,b+c) = rho(a,b)*rho(a,c)",
            "rho(c,c) = +-1",
        ];
        for _ in 0..samples {
            let a = self.group.random_degree(rng, 3);
            let b = self.group.random_degree(rng, 3);
            let c = self.group.random_degree(rng, 3);
            let r = |x: &Degree, y: &Degree| self.rho_unit(x, y);
            let witness = |txt: String, u: RhoUnit| {
                Witness::element(
                    &(&self.unit_to_laurent(u) - &Laurent::integer(1)).to_string(),
                    txt,
                )
            };
            let inv = r(&a, &b) * r(&b, &a);
            if !inv.is_one() && fail[0].is_none() {
                fail[0] = Some(witness(format!("a={a}, b={b}"), inv));
            }
            let lhs = r(&(&a + &b), &c);
            let rhs = r(&a, &c) * r(&b, &c);
            if lhs != rhs && fail[1].is_none() {
                fail[1] = Some(witness(format!("a={a}, b={b}, c={c}"), lhs * rhs.inverse()));
            }
            let lhs = r(&a, &(&b + &c));
            let rhs = r(&a, &b) * r(&a, &c);
            if lhs != rhs && fail[2].is_none() {
                fail[2] = Some(witness(format!("a={a}, b={b}, c={c}"), lhs * rhs.inverse()));
            }
            let cc = r(&c, &c);
            if cc.q_power != 0 && fail[3].is_none() {
                fail[3] = Some(witness(format!("c={c}"), cc.pow(2)));
            }
        }
        for (name, w) in names.iter().zip(fail) {
            report.push(match w {
                None => Check::pass(*name, target),
                Some(w) => Check::fail(*name, target, w),
            });
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{params, GaussianRational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quantum_plane_factor() -> CommutationFactor {
        CommutationFactor::new(
            GradeGroup::new(2, 0),
            vec![vec![0, 1], vec![-1, 0]],
            vec![vec![0, 0], vec![0, 0]],
            params(&["q"]),
            Some("q"),
        )
        .unwrap()
    }

    #[test]
    fn quantum_plane_rho() {
        let f = quantum_plane_factor();
        let g = f.group();
        let q = Laurent::param(params(&["q"]), "q").unwrap();
        let r = f.rho(&g.degree(&[1, 0]).unwrap(), &g.degree(&[0, 1]).unwrap()).unwrap();
        assert_eq!(r, q);
        // q^{nm' - mn'}
        let r = f.rho(&g.degree(&[2, -1]).unwrap(), &g.degree(&[3, 4]).unwrap()).unwrap();
        assert_eq!(r, Laurent::monomial(params(&["q"]), GaussianRational::one(), vec![11]));
    }

    #[test]
    fn rho_of_zero_is_one() {
        let f = quantum_plane_factor();
        let g = f.group();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let b = g.random_degree(&mut rng, 5);
            assert!(f.rho(&g.zero(), &b).unwrap().is_one());
        }
    }

    #[test]
    fn z2_squared_sign() {
        let f = CommutationFactor::new(
            GradeGroup::new(0, 2),
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![1, 0], vec![0, 1]],
            params(&[]),
            None,
        )
        .unwrap();
        let g = f.group();
        let r = f.rho(&g.degree(&[1, 1]).unwrap(), &g.degree(&[1, 0]).unwrap()).unwrap();
        assert_eq!(r, Laurent::integer(-1));
    }

    #[test]
    fn torsion_slots_reduce() {
        let g = GradeGroup::new(1, 1);
        let d = g.degree(&[3, 3]).unwrap();
        assert_eq!(d.slots(), &[3, 1]);
        assert_eq!((&d + &d).slots(), &[6, 0]);
    }

    #[test]
    fn dimension_mismatch() {
        let f = quantum_plane_factor();
        let bad = GradeGroup::new(3, 0).zero();
        assert!(matches!(
            f.rho(&bad, &f.group().zero()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn q_form_rejected_on_torsion() {
        let r = CommutationFactor::new(
            GradeGroup::new(1, 1),
            vec![vec![0, 1], vec![-1, 0]],
            vec![vec![0, 0], vec![0, 0]],
            params(&["q"]),
            Some("q"),
        );
        assert!(r.is_err());
    }

    #[test]
    fn axioms_pass_for_quantum_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = quantum_plane_factor().check_commutation_axioms(500, &mut rng);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn symmetric_q_form_fails_with_witness() {
        let f = CommutationFactor::new(
            GradeGroup::new(2, 0),
            vec![vec![0, 1], vec![1, 0]],
            vec![vec![0, 0], vec![0, 0]],
            params(&["q"]),
            Some("q"),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rep = f.check_commutation_axioms(100, &mut rng);
        assert!(!rep.passed());
        let failed: Vec<_> = rep.failures().collect();
        assert!(failed.iter().all(|c| c.witness.is_some()));
    }

    #[test]
    fn self_rho_is_sign() {
        let f = CommutationFactor::new(
            GradeGroup::new(2, 1),
            vec![vec![0, 2, 0], vec![-2, 0, 0], vec![0, 0, 0]],
            vec![vec![1, 0, 1], vec![0, 0, 0], vec![1, 0, 1]],
            params(&["q"]),
            Some("q"),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let c = f.group().random_degree(&mut rng, 4);
            let u = f.rho_unit(&c, &c);
            assert_eq!(u.q_power, 0);
        }
    }
}
