//! Driving the session language from Rust, including witness re-evaluation.

use rho_carroll::dsl::{self, Session};
use rho_carroll::report::Status;

const SRC: &str = "
use builtin quantum_plane
connection Bent { (dx,dx) = dy + dx }
eval [x, y^2]
eval G(x*dx + dy, dx)
check connection Bent with metric G
flow dy y order=3
";

fn main() {
    let ast = match dsl::parse(SRC) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("parse error: {e}");
            return;
        }
    };
    let mut session = Session::new(42);
    if let Err(e) = session.run(&ast) {
        eprintln!("error: {e}");
        return;
    }
    let report = session.report();
    print!("{}", report.to_text());

    for c in report.checks().filter(|c| c.status == Status::Fail) {
        let w = c.witness.as_ref().unwrap();
        match session.evaluate_str(&w.expr) {
            Ok(v) => println!("witness of `{}` re-evaluates to {}", c.check, session.render_value(&v)),
            Err(e) => println!("witness of `{}` does not parse: {e}", c.check),
        }
    }

    println!("\nas records:");
    print!("{}", report.to_records());
}
