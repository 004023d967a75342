//! Grading groups, commutation factors and their axioms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rho_carroll::coefficients::params;
use rho_carroll::grading::{CommutationFactor, GradeGroup};

fn main() -> Result<(), rho_carroll::error::Error> {
    // ℤ² with ρ(a,b) = q^{a₁b₂ − a₂b₁}
    let z2 = GradeGroup::new(2, 0);
    let planar = CommutationFactor::new(
        z2,
        vec![vec![0, 1], vec![-1, 0]],
        vec![vec![0, 0], vec![0, 0]],
        params(&["q"]),
        Some("q"),
    )?;
    let (x, y) = (z2.degree(&[1, 0])?, z2.degree(&[0, 1])?);
    println!("group {z2}");
    println!("rho(|x|,|y|) = {}", planar.rho(&x, &y)?);
    println!("rho(|y|,|x|) = {}", planar.rho(&y, &x)?);

    // ℤ₂² with the sign form ⟨a,b⟩: the Z2xZ2 "colour" signs
    let colour = GradeGroup::new(0, 2);
    let sign = CommutationFactor::new(
        colour,
        vec![vec![0, 0], vec![0, 0]],
        vec![vec![1, 0], vec![0, 1]],
        params(&[]),
        None,
    )?;
    let (a, b) = (colour.degree(&[1, 0])?, colour.degree(&[1, 1])?);
    println!("group {colour}: rho({a},{b}) = {}", sign.rho(&a, &b)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("{}", planar.check_commutation_axioms(100, &mut rng));

    // A symmetric q-form is not a bicharacter pairing to one.
    let broken = CommutationFactor::new(
        z2,
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![0, 0], vec![0, 0]],
        params(&["q"]),
        Some("q"),
    )?;
    println!("{}", broken.check_commutation_axioms(100, &mut rng));
    Ok(())
}
