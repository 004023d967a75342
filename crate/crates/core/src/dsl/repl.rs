//! Line-oriented front end over a [`Session`].

use std::io::{self, BufRead, Write};

use super::session::{render_output_text, Session};
use super::parse;

fn balance(s: &str) -> i64 {
    s.lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::chars)
        .map(|c| match c {
            '{' | '[' | '(' => 1,
            '}' | ']' | ')' => -1,
            _ => 0,
        })
        .sum()
}

/// Reads statements until EOF or `quit`. Blocks may span lines; input is
/// buffered until its brackets balance.
pub fn run_repl<R: BufRead, W: Write>(input: R, mut out: W, session: &mut Session, prompt: bool) -> io::Result<()> {
    let mut buf = String::new();
    let mut line_no = 0usize;
    if prompt {
        write!(out, "rho> ")?;
        out.flush()?;
    }
    for line in input.lines() {
        let line = line?;
        line_no += 1;
        let trimmed = line.trim();
        if buf.is_empty() && matches!(trimmed, "quit" | "exit") {
            break;
        }
        buf.push_str(&line);
        buf.push('\n');
        if balance(&buf) > 0 {
            if prompt {
                write!(out, "...> ")?;
                out.flush()?;
            }
            continue;
        }
        let before = session.outputs().len();
        match parse(&buf).map_err(|e| e.to_string()).and_then(|ast| {
            ast.statements
                .iter()
                .try_for_each(|st| session.execute(st))
                .map_err(|e| e.to_string())
        }) {
            Ok(()) => {
                for o in &session.outputs()[before..] {
                    writeln!(out, "{}", render_output_text(o))?;
                }
            }
            Err(e) => {
                for o in &session.outputs()[before..] {
                    writeln!(out, "{}", render_output_text(o))?;
                }
                writeln!(out, "error (input line {line_no}): {e}")?;
            }
        }
        buf.clear();
        if prompt {
            write!(out, "rho> ")?;
            out.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_line_block_and_error_recovery() {
        let src = "use builtin quantum_plane\nderivation d2 {\n  x -> x\n}\neval d2(x*y)\neval nope\neval dx(x^2)\n";
        let mut s = Session::new(1);
        let mut out = Vec::new();
        run_repl(src.as_bytes(), &mut out, &mut s, false).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("x*y"), "{text}");
        assert!(text.contains("unknown name `nope`"), "{text}");
        assert!(text.contains("eval dx(x^2)"), "{text}");
    }
}
