//! Recursive-descent parser for session files.

use super::ast::*;
use super::lexer::{tokenize, Pos, Tok, Token};
use super::DslError;

pub fn parse(src: &str) -> Result<SessionAst, DslError> {
    let tokens = tokenize(src)?;
    let lines: Vec<&str> = src.lines().collect();
    let mut p = Parser { tokens, at: 0 };
    let mut statements = Vec::new();
    loop {
        p.skip_separators();
        if p.peek() == &Tok::Eof {
            break;
        }
        let pos = p.pos();
        let stmt = p.statement()?;
        p.end_of_statement()?;
        let text = lines.get(pos.line - 1).map(|l| l.trim().to_string()).unwrap_or_default();
        statements.push(Statement { stmt, pos, text });
    }
    Ok(SessionAst { statements })
}

/// Parses a single expression (the whole input must be consumed).
pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, at: 0 };
    p.skip_separators();
    let e = p.expr()?;
    p.skip_separators();
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected(&["operator", "end of input"]));
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.at + k).min(self.tokens.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> DslError {
        DslError::Syntax {
            pos: self.pos(),
            found: self.peek().describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, DslError> {
        if self.peek() == &tok {
            Ok(self.bump().pos)
        } else {
            Err(self.unexpected(&[&tok.describe()]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(&[what])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), DslError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&[&format!("`{kw}`")])),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi) {
            self.bump();
        }
    }

    fn skip_block_separators(&mut self) {
        while matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::Comma) {
            self.bump();
        }
    }

    fn end_of_statement(&mut self) -> Result<(), DslError> {
        match self.peek() {
            Tok::Newline | Tok::Semi | Tok::Eof => Ok(()),
            _ => Err(self.unexpected(&["end of line"])),
        }
    }

    fn int(&mut self) -> Result<i64, DslError> {
        let neg = self.eat(&Tok::Minus);
        match self.peek().clone() {
            Tok::Int(s) => {
                let pos = self.pos();
                self.bump();
                let v: i64 = s.parse().map_err(|_| DslError::Syntax {
                    pos,
                    found: format!("`{s}`"),
                    expected: vec!["integer that fits in 64 bits".into()],
                })?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn tuple(&mut self) -> Result<Vec<i64>, DslError> {
        self.expect(Tok::LParen)?;
        let mut v = vec![self.int()?];
        while self.eat(&Tok::Comma) {
            v.push(self.int()?);
        }
        self.expect(Tok::RParen)?;
        Ok(v)
    }

    fn matrix(&mut self) -> Result<Vec<Vec<i64>>, DslError> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        if !self.eat(&Tok::RBracket) {
            loop {
                self.expect(Tok::LBracket)?;
                let mut row = vec![self.int()?];
                while self.eat(&Tok::Comma) {
                    row.push(self.int()?);
                }
                self.expect(Tok::RBracket)?;
                rows.push(row);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(rows)
    }

    fn expr_matrix(&mut self) -> Result<Vec<Vec<Expr>>, DslError> {
        self.expect(Tok::LBracket)?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket)?;
            let mut row = vec![self.expr()?];
            while self.eat(&Tok::Comma) {
                row.push(self.expr()?);
            }
            self.expect(Tok::RBracket)?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket)?;
        Ok(rows)
    }

    /// `deg=(..)` if present.
    fn opt_degree(&mut self) -> Result<Option<Vec<i64>>, DslError> {
        if self.at_keyword("deg") {
            self.bump();
            self.expect(Tok::Eq)?;
            Ok(Some(self.tuple()?))
        } else {
            Ok(None)
        }
    }

    /// Runs `item` for every entry of a `{ ... }` block.
    fn block<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, DslError>) -> Result<Vec<T>, DslError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        loop {
            self.skip_block_separators();
            if self.eat(&Tok::RBrace) {
                return Ok(out);
            }
            if self.peek() == &Tok::Eof {
                return Err(self.unexpected(&["`}`"]));
            }
            out.push(item(self)?);
            if !matches!(self.peek(), Tok::Newline | Tok::Semi | Tok::Comma | Tok::RBrace) {
                return Err(self.unexpected(&["`,`", "end of line", "`}`"]));
            }
        }
    }

    fn statement(&mut self) -> Result<Stmt, DslError> {
        let kw = self.ident("statement keyword")?;
        match kw.as_str() {
            "params" => {
                let mut names = vec![self.ident("parameter name")?];
                while self.eat(&Tok::Comma) {
                    names.push(self.ident("parameter name")?);
                }
                Ok(Stmt::Params(names))
            }
            "group" => self.group(),
            "factor" => self.factor(),
            "algebra" => self.algebra(),
            "derivation" => {
                let name = self.ident("derivation name")?;
                let degree = self.opt_degree()?;
                let images = self.block(|p| {
                    let pos = p.pos();
                    let g = p.ident("generator name")?;
                    p.expect(Tok::Arrow)?;
                    Ok((g, p.expr()?, pos))
                })?;
                Ok(Stmt::Derivation { name, degree, images })
            }
            "pair" => {
                let name = self.ident("pair name")?;
                let items = self.block(|p| p.pair_item())?;
                Ok(Stmt::Pair { name, items })
            }
            "metric" => {
                let name = self.ident("metric name")?;
                let pair = self.opt_on()?;
                let entries = self.block(|p| p.entry())?;
                Ok(Stmt::Metric { name, pair, entries })
            }
            "connection" => self.connection(),
            "carroll" => {
                let name = self.ident("Carroll structure name")?;
                if self.peek() == &Tok::LBrace {
                    return self.carroll_block(name);
                }
                self.keyword("on")?;
                let metric = self.ident("metric name")?;
                self.keyword("sigma")?;
                self.expect(Tok::Eq)?;
                let sigma = self.expr()?;
                Ok(Stmt::Carroll { name, pair: None, metric, sigma })
            }
            "use" => {
                self.keyword("builtin")?;
                Ok(Stmt::UseBuiltin(self.ident("catalog key")?))
            }
            "set" => {
                let key = self.ident("setting name")?;
                self.expect(Tok::Eq)?;
                Ok(Stmt::Set { key, value: self.int()? })
            }
            "eval" => Ok(Stmt::Eval(self.expr()?)),
            "check" => self.check(),
            "curvature" | "torsion" => {
                let connection = self.ident("connection name")?;
                let mut args = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.expr()?);
                }
                Ok(if kw == "curvature" {
                    Stmt::Curvature { connection, args }
                } else {
                    Stmt::Torsion { connection, args }
                })
            }
            "flow" => {
                let derivation = self.expr()?;
                let element = self.expr()?;
                self.keyword("order")?;
                self.expect(Tok::Eq)?;
                let pos = self.pos();
                let order = self.int()?;
                if order < 0 {
                    return Err(DslError::Syntax {
                        pos,
                        found: order.to_string(),
                        expected: vec!["non-negative order".into()],
                    });
                }
                Ok(Stmt::Flow { derivation, element, order: order as usize })
            }
            "catalog" => {
                if self.at_keyword("list") {
                    self.bump();
                    Ok(Stmt::CatalogList)
                } else if self.at_keyword("build") {
                    self.bump();
                    Ok(Stmt::CatalogBuild(self.ident("catalog key")?))
                } else {
                    Err(self.unexpected(&["`list`", "`build`"]))
                }
            }
            "report" => Ok(Stmt::Report),
            _ => {
                self.at -= 1;
                Err(self.unexpected(STATEMENTS))
            }
        }
    }

    fn group(&mut self) -> Result<Stmt, DslError> {
        let (mut free, mut torsion) = (0, 0);
        loop {
            let pos = self.pos();
            let base = self.ident("`Z` or `Z2`")?;
            let k = if self.eat(&Tok::Caret) { self.int()? } else { 1 };
            let k = usize::try_from(k).map_err(|_| DslError::Syntax {
                pos,
                found: k.to_string(),
                expected: vec!["non-negative rank".into()],
            })?;
            match base.as_str() {
                "Z" => free += k,
                "Z2" => torsion += k,
                other => {
                    return Err(DslError::Syntax {
                        pos,
                        found: format!("`{other}`"),
                        expected: vec!["`Z`".into(), "`Z2`".into()],
                    })
                }
            }
            if !self.at_keyword("x") {
                break;
            }
            self.bump();
        }
        Ok(Stmt::Group { free, torsion })
    }

    fn factor(&mut self) -> Result<Stmt, DslError> {
        let (mut qform, mut sign, mut qparam) = (Vec::new(), Vec::new(), None);
        while let Tok::Ident(k) = self.peek().clone() {
            self.bump();
            self.expect(Tok::Eq)?;
            match k.as_str() {
                "qform" | "q_form" => qform = self.matrix()?,
                "sign" | "sign_form" => sign = self.matrix()?,
                "qparam" | "q" => qparam = Some(self.ident("parameter name")?),
                _ => {
                    self.at -= 2;
                    return Err(self.unexpected(&["`qform`", "`sign`", "`qparam`"]));
                }
            }
        }
        Ok(Stmt::Factor { qform, sign, qparam })
    }

    fn algebra(&mut self) -> Result<Stmt, DslError> {
        let name = self.ident("algebra name")?;
        let domain = if self.at_keyword("domain") {
            self.bump();
            true
        } else {
            false
        };
        let generators = self.block(|p| {
            if p.at_keyword("generator") {
                p.bump();
            }
            let pos = p.pos();
            let name = p.ident("generator name")?;
            let degree = p.opt_degree()?.ok_or_else(|| p.unexpected(&["`deg`"]))?;
            let (mut invertible, mut square_zero) = (false, false);
            loop {
                if p.at_keyword("invertible") {
                    invertible = true;
                } else if p.at_keyword("square_zero") {
                    square_zero = true;
                } else {
                    break;
                }
                p.bump();
            }
            Ok(GenDecl { name, degree, invertible, square_zero, pos })
        })?;
        Ok(Stmt::Algebra { name, domain, generators })
    }

    fn pair_item(&mut self) -> Result<PairItem, DslError> {
        let pos = self.pos();
        if self.at_keyword("section") {
            self.bump();
            let name = self.ident("section name")?;
            let degree = self.opt_degree()?;
            self.keyword("anchor")?;
            self.assign()?;
            let anchor = Some(self.expr()?);
            Ok(PairItem::Section { name, degree, anchor, pos })
        } else if self.at_keyword("basis") {
            self.bump();
            let name = self.ident("section name")?;
            let degree = self.opt_degree()?;
            Ok(PairItem::Section { name, degree, anchor: None, pos })
        } else if self.at_keyword("anchor") {
            self.bump();
            let name = self.ident("section name")?;
            self.assign()?;
            Ok(PairItem::Anchor { name, anchor: self.expr()?, pos })
        } else if self.at_keyword("bracket") {
            self.bump();
            let (a, b) = if self.eat(&Tok::LBracket) {
                let a = self.ident("section name")?;
                self.expect(Tok::Comma)?;
                let b = self.ident("section name")?;
                self.expect(Tok::RBracket)?;
                (a, b)
            } else {
                (self.ident("section name")?, self.ident("section name")?)
            };
            self.assign()?;
            let value = self.expr()?;
            Ok(PairItem::Bracket { a, b, value, pos })
        } else {
            Err(self.unexpected(&["`section`", "`basis`", "`anchor`", "`bracket`"]))
        }
    }

    /// `(a, b) = expr`
    fn entry(&mut self) -> Result<(String, String, Expr, Pos), DslError> {
        let pos = self.pos();
        self.expect(Tok::LParen)?;
        let a = self.ident("basis name")?;
        self.expect(Tok::Comma)?;
        let b = self.ident("basis name")?;
        self.expect(Tok::RParen)?;
        self.assign()?;
        Ok((a, b, self.expr()?, pos))
    }

    /// `=` or `->`; both read as "is".
    fn assign(&mut self) -> Result<(), DslError> {
        if self.eat(&Tok::Eq) || self.eat(&Tok::Arrow) {
            Ok(())
        } else {
            Err(self.unexpected(&["`=`", "`->`"]))
        }
    }

    fn opt_on(&mut self) -> Result<Option<String>, DslError> {
        if self.at_keyword("on") {
            self.bump();
            Ok(Some(self.ident("pair name")?))
        } else {
            Ok(None)
        }
    }

    /// `{ pair=P metric=G sigma=expr }`; keys may share a line.
    fn carroll_block(&mut self, name: String) -> Result<Stmt, DslError> {
        let (mut pair, mut metric, mut sigma) = (None, None, None);
        let open = self.expect(Tok::LBrace)?;
        loop {
            self.skip_block_separators();
            if self.eat(&Tok::RBrace) {
                break;
            }
            let key = self.ident("`pair`, `metric` or `sigma`")?;
            self.expect(Tok::Eq)?;
            match key.as_str() {
                "pair" => pair = Some(self.ident("pair name")?),
                "metric" => metric = Some(self.ident("metric name")?),
                "sigma" => sigma = Some(self.expr()?),
                _ => {
                    self.at -= 2;
                    return Err(self.unexpected(&["`pair`", "`metric`", "`sigma`"]));
                }
            }
        }
        let missing = |what: &str| DslError::Syntax {
            pos: open,
            found: "`}`".into(),
            expected: vec![format!("`{what}=`")],
        };
        Ok(Stmt::Carroll {
            name,
            pair,
            metric: metric.ok_or_else(|| missing("metric"))?,
            sigma: sigma.ok_or_else(|| missing("sigma"))?,
        })
    }

    fn connection(&mut self) -> Result<Stmt, DslError> {
        let name = self.ident("connection name")?;
        if self.eat(&Tok::Eq) {
            self.keyword("levi_civita")?;
            let metric = self.ident("metric name")?;
            let inverse = if self.at_keyword("inverse") {
                self.bump();
                self.expect(Tok::Eq)?;
                Some(self.expr_matrix()?)
            } else {
                None
            };
            return Ok(Stmt::Connection { name, pair: None, body: ConnectionBody::LeviCivita { metric, inverse } });
        }
        let pair = self.opt_on()?;
        let entries = if self.peek() == &Tok::LBrace {
            self.block(|p| p.entry())?
        } else {
            Vec::new()
        };
        Ok(Stmt::Connection { name, pair, body: ConnectionBody::Entries(entries) })
    }

    fn check(&mut self) -> Result<Stmt, DslError> {
        let kind = self.ident("check kind")?;
        let with = |p: &mut Self, kw: &str| -> Result<Option<String>, DslError> {
            if p.at_keyword("with") {
                p.bump();
                p.keyword(kw)?;
                Ok(Some(p.ident(&format!("{kw} name"))?))
            } else {
                Ok(None)
            }
        };
        let target = match kind.as_str() {
            "factor" => CheckTarget::Factor,
            "derivation" => CheckTarget::Derivation(self.ident("derivation name")?),
            "pair" => CheckTarget::Pair(self.ident("pair name")?),
            "metric" => CheckTarget::Metric(self.ident("metric name")?),
            "connection" => {
                let name = self.ident("connection name")?;
                CheckTarget::Connection { name, metric: with(self, "metric")? }
            }
            "carroll" => {
                let name = self.ident("Carroll structure name")?;
                CheckTarget::Carroll { name, connection: with(self, "connection")? }
            }
            "builtin" => CheckTarget::Builtin(self.ident("catalog key")?),
            _ => {
                self.at -= 1;
                return Err(self.unexpected(&[
                    "`factor`", "`derivation`", "`pair`", "`metric`", "`connection`", "`carroll`", "`builtin`",
                ]));
            }
        };
        Ok(Stmt::Check(target))
    }

    pub fn expr(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == &Tok::Slash {
                let pos = self.bump().pos;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.peek() == &Tok::Minus {
            let pos = self.bump().pos;
            return Ok(Expr::Neg(Box::new(self.unary()?), pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, DslError> {
        let base = self.atom()?;
        if self.peek() == &Tok::Caret {
            let pos = self.bump().pos;
            let k = self.int()?;
            return Ok(Expr::Pow(Box::new(base), k, pos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(Expr::Int(s, pos))
            }
            Tok::Ident(s) => {
                self.bump();
                if self.peek() == &Tok::LParen && self.peek_at(1) != &Tok::RParen {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while self.eat(&Tok::Comma) {
                        args.push(self.expr()?);
                    }
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(s, args, pos))
                } else {
                    Ok(Expr::Name(s, pos))
                }
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::LBracket => {
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma)?;
                let b = self.expr()?;
                self.expect(Tok::RBracket)?;
                Ok(Expr::Bracket(Box::new(a), Box::new(b), pos))
            }
            _ => Err(self.unexpected(&["number", "name", "`(`", "`[`", "`-`"])),
        }
    }
}

const STATEMENTS: &[&str] = &[
    "`params`", "`group`", "`factor`", "`algebra`", "`derivation`", "`pair`", "`metric`", "`connection`",
    "`carroll`", "`use`", "`set`", "`eval`", "`check`", "`curvature`", "`torsion`", "`flow`", "`catalog`",
    "`report`",
];
