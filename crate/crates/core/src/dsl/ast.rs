//! Session syntax tree.

use std::fmt;

use super::lexer::Pos;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(String, Pos),
    Name(String, Pos),
    Neg(Box<Expr>, Pos),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, i64, Pos),
    /// `D(f)`, `G(u, v)`, `C(u, v)`, `anchor(u)`
    Call(String, Vec<Expr>, Pos),
    /// `[a, b]`
    Bracket(Box<Expr>, Box<Expr>, Pos),
}

impl Expr {
    pub fn pos(&self) -> Pos {
        match self {
            Expr::Int(_, p) | Expr::Name(_, p) | Expr::Neg(_, p) => *p,
            Expr::Div(_, _, p) | Expr::Pow(_, _, p) | Expr::Call(_, _, p) | Expr::Bracket(_, _, p) => *p,
            Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => a.pos(),
        }
    }
}

/// Renders back into the surface grammar, fully parenthesised.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(s, _) | Expr::Name(s, _) => f.write_str(s),
            Expr::Neg(a, _) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a})*({b})"),
            Expr::Div(a, b, _) => write!(f, "({a})/({b})"),
            Expr::Pow(a, k, _) => write!(f, "({a})^{k}"),
            Expr::Call(n, args, _) => {
                let a: Vec<String> = args.iter().map(|e| e.to_string()).collect();
                write!(f, "{n}({})", a.join(", "))
            }
            Expr::Bracket(a, b, _) => write!(f, "[{a}, {b}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub degree: Vec<i64>,
    pub invertible: bool,
    pub square_zero: bool,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairItem {
    Section { name: String, degree: Option<Vec<i64>>, anchor: Option<Expr>, pos: Pos },
    Anchor { name: String, anchor: Expr, pos: Pos },
    Bracket { a: String, b: String, value: Expr, pos: Pos },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionBody {
    Entries(Vec<(String, String, Expr, Pos)>),
    LeviCivita { metric: String, inverse: Option<Vec<Vec<Expr>>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckTarget {
    Factor,
    Derivation(String),
    Pair(String),
    Metric(String),
    Connection { name: String, metric: Option<String> },
    Carroll { name: String, connection: Option<String> },
    Builtin(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Params(Vec<String>),
    Group { free: usize, torsion: usize },
    Factor { qform: Vec<Vec<i64>>, sign: Vec<Vec<i64>>, qparam: Option<String> },
    Algebra { name: String, domain: bool, generators: Vec<GenDecl> },
    Derivation { name: String, degree: Option<Vec<i64>>, images: Vec<(String, Expr, Pos)> },
    Pair { name: String, items: Vec<PairItem> },
    Metric { name: String, pair: Option<String>, entries: Vec<(String, String, Expr, Pos)> },
    Connection { name: String, pair: Option<String>, body: ConnectionBody },
    Carroll { name: String, pair: Option<String>, metric: String, sigma: Expr },
    UseBuiltin(String),
    Set { key: String, value: i64 },
    Eval(Expr),
    Check(CheckTarget),
    Curvature { connection: String, args: Vec<Expr> },
    Torsion { connection: String, args: Vec<Expr> },
    Flow { derivation: Expr, element: Expr, order: usize },
    CatalogList,
    CatalogBuild(String),
    Report,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub stmt: Stmt,
    pub pos: Pos,
    /// Source text of the statement's first line.
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SessionAst {
    pub statements: Vec<Statement>,
}
