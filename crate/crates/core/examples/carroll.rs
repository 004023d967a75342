//! Carrollian structures: kernel, distribution, stationarity, quotient, flow.

use rho_carroll::algebra::Element;
use rho_carroll::builtins;
use rho_carroll::carroll::{carroll_distribution, carroll_suite, check_stationary, flow_derivation, quotient_metric};
use rho_carroll::sampling::Sampler;

fn main() -> Result<(), rho_carroll::error::Error> {
    let qp = builtins::build("quantum_plane")?;
    let cs = qp.carroll().unwrap();
    let mut sampler = Sampler::new(11);

    println!("{}", carroll_suite(cs, qp.connection(), 20, &mut sampler));

    let (generator, class) = carroll_distribution(cs)?;
    println!("distribution generated by {generator}: {class}");
    println!("{}", check_stationary(cs));
    println!("{}", quotient_metric(cs, 10, &mut sampler)?);

    let y = Element::generator(qp.presentation(), "y")?;
    let dy = qp.derivation("dy").unwrap();
    println!("exp(t dy) y = {}", flow_derivation(dy, &y, 4)?);

    // A super example: exactness is honestly uncertified.
    let sup = builtins::build("r22_super")?;
    println!("{}", carroll_suite(sup.carroll().unwrap(), None, 5, &mut sampler));
    Ok(())
}
