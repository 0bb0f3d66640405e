//! Recursive-descent parser for the formula text syntax.
//!
//! Binding strength, tightest first: atoms and parenthesized formulas,
//! prefix operators (`!`, `F[a,b]`, `G[a,b]`, `escape`, `somewhere`,
//! `everywhere`), `&`, `|`, `->` (right-associative), and finally `U`
//! (right-associative; `U[a,b]` is bounded, bare `U` unbounded).
//! `reach[<=d](lhs, rhs)` is written in call form.

use super::{CmpOp, Formula, VarTable};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &[
    "true",
    "false",
    "reach",
    "escape",
    "somewhere",
    "everywhere",
    "U",
    "F",
    "G",
];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Lt,
    Gt,
    Le,
    Ge,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(x) => format!("number {x}"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Le => "`<=`".into(),
            Tok::Ge => "`>=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let two = |a: char, b: char| c == a && next == Some(b);
        let (tok, width) = if two('-', '>') {
            (Tok::Arrow, 2)
        } else if two('<', '=') {
            (Tok::Le, 2)
        } else if two('>', '=') {
            (Tok::Ge, 2)
        } else {
            match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                ',' => (Tok::Comma, 1),
                '!' => (Tok::Bang, 1),
                '&' => (Tok::Amp, 1),
                '|' => (Tok::Pipe, 1),
                '<' => (Tok::Lt, 1),
                '>' => (Tok::Gt, 1),
                _ if c.is_ascii_digit() || c == '.' || c == '-' || c == '+' => {
                    let mut j = i + 1;
                    while j < chars.len() {
                        let d = chars[j];
                        let exp_sign = (d == '-' || d == '+') && matches!(chars[j - 1], 'e' | 'E');
                        if d.is_ascii_digit() || d == '.' || d == 'e' || d == 'E' || exp_sign {
                            j += 1;
                        } else {
                            break;
                        }
                    }
                    let s: String = chars[i..j].iter().collect();
                    let v: f64 = s.parse().map_err(|_| Error::Syntax {
                        line,
                        column: col,
                        found: format!("`{s}`"),
                        expected: vec!["number".into()],
                    })?;
                    (Tok::Number(v), j - i)
                }
                _ if c.is_alphabetic() || c == '_' => {
                    let mut j = i + 1;
                    while j < chars.len() && (chars[j].is_alphanumeric() || chars[j] == '_') {
                        j += 1;
                    }
                    (Tok::Ident(chars[i..j].iter().collect()), j - i)
                }
                _ => {
                    return Err(Error::Syntax {
                        line,
                        column: col,
                        found: format!("`{c}`"),
                        expected: vec!["formula".into()],
                    })
                }
            }
        };
        push(&mut out, tok);
        i += width;
        col += width;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// Parses `text`, resolving atom identifiers through `vars`.
pub fn parse(text: &str, vars: &VarTable) -> Result<Formula> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars,
    };
    let f = p.until()?;
    p.expect(Tok::Eof, &["end of input", "`U`", "`->`", "`|`", "`&`"])?;
    f.validate()?;
    Ok(f)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error(&self, expected: &[&str]) -> Error {
        let t = &self.tokens[self.pos];
        Error::Syntax {
            line: t.line,
            column: t.column,
            found: t.tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, expected: &[&str]) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn number(&mut self) -> Result<f64> {
        match *self.peek() {
            Tok::Number(v) => {
                self.bump();
                Ok(v)
            }
            _ => Err(self.error(&["number"])),
        }
    }

    /// `[a,b]`
    fn time_bounds(&mut self) -> Result<(f64, f64)> {
        self.expect(Tok::LBracket, &["`[`"])?;
        let a = self.number()?;
        self.expect(Tok::Comma, &["`,`"])?;
        let b = self.number()?;
        self.expect(Tok::RBracket, &["`]`"])?;
        Ok((a, b))
    }

    /// `[<= d]` or `[>= d]`
    fn space_bound(&mut self, cmp: Tok) -> Result<f64> {
        let sym = if cmp == Tok::Le { "`<=`" } else { "`>=`" };
        self.expect(Tok::LBracket, &["`[`"])?;
        self.expect(cmp, &[sym])?;
        let d = self.number()?;
        self.expect(Tok::RBracket, &["`]`"])?;
        Ok(d)
    }

    fn until(&mut self) -> Result<Formula> {
        let lhs = self.implication()?;
        if !self.is_keyword("U") {
            return Ok(lhs);
        }
        self.bump();
        if *self.peek() == Tok::LBracket {
            let (a, b) = self.time_bounds()?;
            let rhs = self.until()?;
            Ok(Formula::until(a, b, lhs, rhs))
        } else {
            let rhs = self.until()?;
            Ok(Formula::unbounded_until(lhs, rhs))
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        let Tok::Ident(word) = self.peek().clone() else {
            return self.primary();
        };
        match word.as_str() {
            "F" | "G" => {
                self.bump();
                let (a, b) = self.time_bounds()?;
                let arg = self.unary()?;
                Ok(if word == "F" {
                    Formula::eventually(a, b, arg)
                } else {
                    Formula::globally(a, b, arg)
                })
            }
            "escape" => {
                self.bump();
                let d = self.space_bound(Tok::Ge)?;
                Ok(Formula::escape(d, self.unary()?))
            }
            "somewhere" | "everywhere" => {
                self.bump();
                let d = self.space_bound(Tok::Le)?;
                let arg = self.unary()?;
                Ok(if word == "somewhere" {
                    Formula::somewhere(d, arg)
                } else {
                    Formula::everywhere(d, arg)
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        const START: &[&str] = &[
            "`true`",
            "`false`",
            "identifier",
            "`!`",
            "`(`",
            "`F`",
            "`G`",
            "`reach`",
            "`escape`",
            "`somewhere`",
            "`everywhere`",
        ];
        let token = self.tokens[self.pos].clone();
        match token.tok {
            Tok::LParen => {
                self.bump();
                let f = self.until()?;
                self.expect(Tok::RParen, &["`)`", "`U`", "`->`", "`|`", "`&`"])?;
                Ok(f)
            }
            Tok::Ident(ref w) if w == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(ref w) if w == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(ref w) if w == "reach" => {
                self.bump();
                let d = self.space_bound(Tok::Le)?;
                self.expect(Tok::LParen, &["`(`"])?;
                let lhs = self.until()?;
                self.expect(Tok::Comma, &["`,`"])?;
                let rhs = self.until()?;
                self.expect(Tok::RParen, &["`)`"])?;
                Ok(Formula::reach(d, lhs, rhs))
            }
            Tok::Ident(ref name) if !KEYWORDS.contains(&name.as_str()) => {
                self.bump();
                let op = match self.bump() {
                    Tok::Gt => CmpOp::Gt,
                    Tok::Lt => CmpOp::Lt,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error(&["`<`", "`>`"]));
                    }
                };
                let c = self.number()?;
                let dim = self.vars.get(name).ok_or_else(|| Error::UnknownVariable {
                    name: name.clone(),
                    line: token.line,
                    column: token.column,
                })?;
                Ok(Formula::atom(name.clone(), dim, op, c))
            }
            _ => Err(self.error(START)),
        }
    }
}
