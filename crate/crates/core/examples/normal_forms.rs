//! Building a ρ-commutative algebra and reducing words to normal form.

use rho_carroll::algebra::{rho_commutator, Element, GeneratorSpec, Presentation};
use rho_carroll::coefficients::params;
use rho_carroll::grading::{CommutationFactor, GradeGroup};

fn main() -> Result<(), rho_carroll::error::Error> {
    let g = GradeGroup::new(2, 0);
    let factor = CommutationFactor::new(
        g,
        vec![vec![0, 1], vec![-1, 0]],
        vec![vec![0, 0], vec![0, 0]],
        params(&["q"]),
        Some("q"),
    )?;
    let pres = Presentation::new(
        "Kq2",
        factor,
        vec![
            GeneratorSpec::new("x", g.degree(&[1, 0])?).invertible(),
            GeneratorSpec::new("y", g.degree(&[0, 1])?).invertible(),
        ],
        true,
    )?;
    let x = Element::generator(&pres, "x")?;
    let y = Element::generator(&pres, "y")?;
    let q = Element::param(&pres, "q")?;

    println!("y*x       = {}", &y * &x);
    println!("x*y - q*y*x = {}", &(&x * &y) - &(&(&q * &y) * &x));

    // y x y^-1 x^-1, read left to right
    let word = [(1, 1), (0, 1), (1, -1), (0, -1)];
    println!("y x y^-1 x^-1 = {}", Element::normalize(&pres, &word)?);

    let f = &(&x * &x) + &y;
    let inv = x.try_inverse().expect("x is invertible");
    println!("x^-1 = {inv},  (x^2 + y)*x^-1 = {}", &f * &inv);
    println!("[x, y] = {}", rho_commutator(&x, &y)?);
    println!("degree of x^2*y: {:?}", (&(&x * &x) * &y).degree_of());
    Ok(())
}
