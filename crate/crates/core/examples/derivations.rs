//! ρ-derivations: tables on generators, application, commutators.

use rho_carroll::algebra::Element;
use rho_carroll::builtins;
use rho_carroll::derivation::{der_commutator, verify_derivation, RhoDerivation};

fn main() -> Result<(), rho_carroll::error::Error> {
    let qp = builtins::build("quantum_plane")?;
    let pres = qp.presentation();
    let x = Element::generator(pres, "x")?;
    let y = Element::generator(pres, "y")?;

    let euler = qp.derivation("dx").unwrap();
    let px = qp.derivation("px").unwrap();
    println!("dx = {}", euler.table_string());
    println!("px = {}  (degree {:?})", px.table_string(), px.degree());

    let f = &(&x * &x) * &y;
    println!("dx(x^2 y) = {}", euler.apply(&f)?);
    println!("px(x^2 y) = {}", px.apply(&f)?);
    println!("px(x^-1)  = {}", px.apply(&x.try_inverse().unwrap())?);

    let c = der_commutator(px, euler)?;
    println!("[px, dx] = {}", c.table_string());
    println!("{}", verify_derivation(px, "px"));

    // y∂_x has degree (-1,1); declaring it degree zero is caught.
    let shift = RhoDerivation::from_images(pres, None, &[("x", y.clone())])?;
    println!("y px has degree {:?}", shift.degree_of());
    let mislabelled = RhoDerivation::from_images(pres, Some(pres.group().zero()), &[("x", y.clone())])?;
    println!("{}", verify_derivation(&mislabelled, "mislabelled"));
    Ok(())
}
