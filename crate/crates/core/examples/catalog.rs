//! Every catalog entry, its self-check and the tensor product construction.

use rho_carroll::builtins::{self, tensor_product};
use rho_carroll::dsl::session::describe_entry;

fn main() -> Result<(), rho_carroll::error::Error> {
    for key in builtins::keys() {
        let e = builtins::build(key)?;
        let rep = e.self_check();
        println!("{}", describe_entry(&e));
        println!("  self-check: {} checks, {} failed\n", rep.checks.len(), rep.failures().count());
    }

    let torus = builtins::build("nc_torus")?;
    let line = builtins::build("laurent_line")?;
    let product = tensor_product(&torus, &line)?;
    println!("built {} by hand: sigma = {}", product.key(), {
        let cs = product.carroll().unwrap();
        cs.pair().render_section(cs.sigma())
    });

    // Factors over different parameter sets do not combine.
    let qp = builtins::build("quantum_plane")?;
    let tau = builtins::build("nc_torus_tau")?;
    if let Err(e) = tensor_product(&qp, &tau) {
        println!("quantum_plane (x) nc_torus_tau: {e}");
    }
    Ok(())
}
