//! Metrics, connections, curvature and torsion; Levi-Civita via Koszul.

use rho_carroll::builtins;
use rho_carroll::geometry::{
    check_flat, check_metric_compatibility, check_torsion_free, levi_civita, verify_metric, Connection, Metric,
};

fn main() -> Result<(), rho_carroll::error::Error> {
    let qp = builtins::build("quantum_plane")?;
    let pair = qp.pair().unwrap();
    let g = qp.metric().unwrap();
    let c = qp.connection().unwrap();
    let (dx, dy) = (pair.basis_section(0), pair.basis_section(1));

    println!("G(dx,dx) = {}, G(dy,dy) = {}", g.eval(&dx, &dx)?, g.eval(&dy, &dy)?);
    println!("nabla_dx dx = {}", pair.render_section(&c.nabla(&dx, &dx)?));
    println!("T(dx,dy) = {}", pair.render_section(&c.torsion(&dx, &dy)?));
    println!("R(dx,dy)dx = {}", pair.render_section(&c.curvature(&dx, &dy, &dx)?));
    println!("{}", check_metric_compatibility(c, g));

    // The torus with a nondegenerate metric has a unique Levi-Civita connection.
    let torus = builtins::build("nc_torus")?;
    let tp = torus.pair().unwrap();
    let one = rho_carroll::algebra::Element::one(tp.algebra());
    let h = Metric::from_entries("H", tp, &[("e1", "e1", one.clone()), ("e2", "e2", one)])?;
    println!("{}", verify_metric(&h));
    let lc = levi_civita(tp, &h, None)?;
    println!("{}", check_torsion_free(&lc));
    println!("{}", check_metric_compatibility(&lc, &h));
    println!("{}", check_flat(&lc));

    // Bending one Christoffel symbol breaks compatibility.
    let e1 = tp.basis_section(0);
    let bent = Connection::from_entries("bent", tp, &[("e1", "e1", e1)])?;
    println!("{}", check_metric_compatibility(&bent, &h));
    Ok(())
}
