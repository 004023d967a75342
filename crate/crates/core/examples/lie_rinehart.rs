//! ρ-Lie-Rinehart pairs: anchors, brackets of coefficiented sections, axioms.

use rho_carroll::algebra::Element;
use rho_carroll::builtins;
use rho_carroll::rinehart::{jacobiator, verify_pair};
use rho_carroll::sampling::Sampler;

fn main() -> Result<(), rho_carroll::error::Error> {
    let torus = builtins::build("nc_torus")?;
    let pair = torus.pair().unwrap();
    let pres = pair.algebra();
    let u = Element::generator(pres, "u")?;
    let v = Element::generator(pres, "v")?;

    let a = pair.section(&[("e1", u.clone()), ("e2", v.clone())])?;
    let b = pair.section(&[("e2", &u * &v)])?;
    println!("a = {}", pair.render_section(&a));
    println!("b = {}", pair.render_section(&b));
    println!("anchor(a) = {}", pair.anchor_of(&a)?);
    println!("a(u*v) = {}", pair.anchor_apply(&a, &(&u * &v))?);
    println!("[a, b] = {}", pair.render_section(&pair.bracket(&a, &b)?));
    let c = pair.section(&[("e1", v.clone())])?;
    println!("Jac(a,b,c) = {}", pair.render_section(&jacobiator(pair, &a, &b, &c)?));

    let mut sampler = Sampler::new(3);
    println!("{}", verify_pair(pair, 25, &mut sampler));
    Ok(())
}
