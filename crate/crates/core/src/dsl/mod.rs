//! The session language: `.rc` files, the REPL and one-shot `eval`.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod repl;
pub mod session;

use thiserror::Error;

pub use lexer::Pos;
pub use parser::{parse, parse_expr};
pub use session::{Output, Report, Session, Value};

#[derive(Debug, Error)]
pub enum DslError {
    #[error("{pos}: unexpected character `{found}`")]
    Lex { pos: Pos, found: char },
    #[error("{pos}: found {found}, expected {}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },
    #[error("{pos}: unknown {kind} `{name}`")]
    Name { pos: Pos, kind: String, name: String },
    #[error("{pos}: {message}")]
    Type { pos: Pos, message: String },
    #[error("{pos}: {source}")]
    Engine {
        pos: Pos,
        #[source]
        source: crate::error::Error,
    },
}

impl DslError {
    pub fn pos(&self) -> Pos {
        match self {
            DslError::Lex { pos, .. }
            | DslError::Syntax { pos, .. }
            | DslError::Name { pos, .. }
            | DslError::Type { pos, .. }
            | DslError::Engine { pos, .. } => *pos,
        }
    }
}

/// Parses and runs a whole session source.
///
/// Parse errors abort before anything runs; an evaluation error stops the run
/// and is returned together with the report gathered so far.
pub fn run(src: &str, seed: u64, file: Option<&str>) -> Result<Report, (DslError, Option<Report>)> {
    let ast = parse(src).map_err(|e| (e, None))?;
    let mut s = Session::new(seed);
    if let Some(f) = file {
        s = s.with_file(f);
    }
    match s.run(&ast) {
        Ok(()) => Ok(s.report()),
        Err(e) => Err((e, Some(s.report()))),
    }
}
