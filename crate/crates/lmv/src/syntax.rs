//! Concrete syntax: parser and printer for formulas, terms and E-terms.
//!
//! The grammar (prefix operators extend maximally to the right):
//!
//! ```text
//! F ::= UPPER-ident | `#` | F `->` F | F `&` F | F `|` F | `(` F `)`
//! T ::= ident | `\` ident [`:`F] `.` T | `mu` `@`ident [`:`F] `.` T
//!     | `(` `@`ident T `)` | `(` T E `)` | `<` T `,` T `>`
//!     | `in1` [`[`F`]`] T | `in2` [`[`F`]`] T
//! E ::= T | `p1` | `p2` | `[` ident `.` T `,` ident `.` T `]`
//! ```
//!
//! `&` binds tighter than `|` which binds tighter than `->`; `->` is
//! right-associative. Mu-names carry an `@` sigil, which keeps the naming
//! form `(@a t)` unambiguous against application.
//!
//! Printing is canonical: applications fully parenthesized, single spaces,
//! no space after commas. `parse_term` after `print_term` is the identity
//! up to alpha.

use std::fmt;

use thiserror::Error;

use crate::term::{ETerm, Index, Term, TermNode};
use crate::typing::Formula;

/// Byte offsets into the input, attached to parse errors.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    KwMu,
    KwIn(Index),
    KwProj(Index),
    Backslash,
    Dot,
    Comma,
    Colon,
    At,
    Hash,
    Arrow,
    Amp,
    Pipe,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LAngle,
    RAngle,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "identifier `{}`", name),
            Tok::KwMu => "`mu`",
            Tok::KwIn(Index::One) => "`in1`",
            Tok::KwIn(Index::Two) => "`in2`",
            Tok::KwProj(Index::One) => "`p1`",
            Tok::KwProj(Index::Two) => "`p2`",
            Tok::Backslash => "`\\`",
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::At => "`@`",
            Tok::Hash => "`#`",
            Tok::Arrow => "`->`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::LAngle => "`<`",
            Tok::RAngle => "`>`",
            Tok::Eof => "end of input",
        };
        write!(f, "{}", s)
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, SourceSpan)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        loop {
            let (tok, span) = lx.next_token()?;
            let done = tok == Tok::Eof;
            out.push((tok, span));
            if done {
                return Ok(out);
            }
        }
    }

    fn next_token(&mut self) -> Result<(Tok, SourceSpan), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && (bytes[self.pos] as char).is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let span = |end: usize| SourceSpan { start, end };
        if self.pos >= bytes.len() {
            return Ok((Tok::Eof, span(start)));
        }
        let c = bytes[self.pos] as char;
        let simple = |tok: Tok, lx: &mut Lexer| {
            lx.pos += 1;
            Ok((tok, span(lx.pos)))
        };
        match c {
            '\\' => simple(Tok::Backslash, self),
            '.' => simple(Tok::Dot, self),
            ',' => simple(Tok::Comma, self),
            ':' => simple(Tok::Colon, self),
            '@' => simple(Tok::At, self),
            '#' => simple(Tok::Hash, self),
            '&' => simple(Tok::Amp, self),
            '|' => simple(Tok::Pipe, self),
            '(' => simple(Tok::LParen, self),
            ')' => simple(Tok::RParen, self),
            '[' => simple(Tok::LBracket, self),
            ']' => simple(Tok::RBracket, self),
            '<' => simple(Tok::LAngle, self),
            '>' => simple(Tok::RAngle, self),
            '-' => {
                if bytes.get(self.pos + 1) == Some(&b'>') {
                    self.pos += 2;
                    Ok((Tok::Arrow, span(self.pos)))
                } else {
                    Err(error_at(self.src, span(self.pos + 1), "expected `->`".into()))
                }
            }
            c if ident_start(c) => {
                let mut end = self.pos + 1;
                while end < bytes.len() && ident_char(bytes[end] as char) {
                    end += 1;
                }
                let name = &self.src[self.pos..end];
                self.pos = end;
                let tok = match name {
                    "mu" => Tok::KwMu,
                    "in1" => Tok::KwIn(Index::One),
                    "in2" => Tok::KwIn(Index::Two),
                    "p1" => Tok::KwProj(Index::One),
                    "p2" => Tok::KwProj(Index::Two),
                    _ => Tok::Ident(name.to_string()),
                };
                Ok((tok, span(end)))
            }
            other => Err(error_at(
                self.src,
                span(self.pos + 1),
                format!("unexpected character `{}`", other),
            )),
        }
    }
}

fn error_at(src: &str, span: SourceSpan, message: String) -> ParseError {
    let mut line = 1;
    let mut col = 1;
    for (i, c) in src.char_indices() {
        if i >= span.start {
            break;
        }
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    ParseError {
        span,
        line,
        col,
        message,
    }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Parser<'a>, ParseError> {
        Ok(Parser {
            src,
            toks: Lexer::tokens(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &[&str]) -> ParseError {
        error_at(
            self.src,
            self.span(),
            format!("found {}, expected {}", self.peek(), expected.join(" or ")),
        )
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(&[what]))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.err(&[what])),
        }
    }

    fn opt_annotation(&mut self) -> Result<Option<Formula>, ParseError> {
        if self.peek() == &Tok::Colon {
            self.bump();
            Ok(Some(self.formula(0)?))
        } else {
            Ok(None)
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(Term::var(name))
            }
            Tok::Backslash => {
                self.bump();
                let binder = self.ident("a variable")?;
                let ann = self.opt_annotation()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(match ann {
                    Some(a) => Term::lam_ann(binder, a, body),
                    None => Term::lam(binder, body),
                })
            }
            Tok::KwMu => {
                self.bump();
                self.expect(Tok::At, "`@`")?;
                let binder = self.ident("a mu-variable")?;
                let ann = self.opt_annotation()?;
                self.expect(Tok::Dot, "`.`")?;
                let body = self.term()?;
                Ok(match ann {
                    Some(a) => Term::mu_ann(binder, a, body),
                    None => Term::mu(binder, body),
                })
            }
            Tok::KwIn(index) => {
                self.bump();
                let ann = if self.peek() == &Tok::LBracket {
                    self.bump();
                    let f = self.formula(0)?;
                    self.expect(Tok::RBracket, "`]`")?;
                    Some(f)
                } else {
                    None
                };
                let body = self.term()?;
                Ok(match ann {
                    Some(a) => Term::inj_ann(index, a, body),
                    None => Term::inj(index, body),
                })
            }
            Tok::LAngle => {
                self.bump();
                let left = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let right = self.term()?;
                self.expect(Tok::RAngle, "`>`")?;
                Ok(Term::pair(left, right))
            }
            Tok::LParen => {
                self.bump();
                if self.peek() == &Tok::At {
                    self.bump();
                    let name = self.ident("a mu-variable")?;
                    let body = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::name(name, body))
                } else {
                    let fun = self.term()?;
                    let arg = self.eterm()?;
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(Term::app(fun, arg))
                }
            }
            _ => Err(self.err(&["a term"])),
        }
    }

    fn eterm(&mut self) -> Result<ETerm, ParseError> {
        match self.peek().clone() {
            Tok::KwProj(index) => {
                self.bump();
                Ok(ETerm::Proj(index))
            }
            Tok::LBracket => {
                self.bump();
                let left_binder = self.ident("a variable")?;
                self.expect(Tok::Dot, "`.`")?;
                let left = self.term()?;
                self.expect(Tok::Comma, "`,`")?;
                let right_binder = self.ident("a variable")?;
                self.expect(Tok::Dot, "`.`")?;
                let right = self.term()?;
                self.expect(Tok::RBracket, "`]`")?;
                Ok(ETerm::case(left_binder, left, right_binder, right))
            }
            _ => Ok(ETerm::term(self.term()?)),
        }
    }

    // Precedence climbing: `&` = 3, `|` = 2, `->` = 1 (right-assoc).
    fn formula(&mut self, min_prec: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.formula_atom()?;
        loop {
            let (prec, right_assoc) = match self.peek() {
                Tok::Amp => (3, false),
                Tok::Pipe => (2, false),
                Tok::Arrow => (1, true),
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            let op = self.bump();
            let next_min = if right_assoc { prec } else { prec + 1 };
            let rhs = self.formula(next_min)?;
            lhs = match op {
                Tok::Amp => Formula::and(lhs, rhs),
                Tok::Pipe => Formula::or(lhs, rhs),
                Tok::Arrow => Formula::arrow(lhs, rhs),
                _ => unreachable!(),
            };
        }
        Ok(lhs)
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Hash => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula(0)?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => {
                if !name.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return Err(error_at(
                        self.src,
                        self.span(),
                        format!("formula atom `{}` must start with an uppercase letter", name),
                    ));
                }
                self.bump();
                Ok(Formula::atom(name))
            }
            _ => Err(self.err(&["a formula"])),
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.err(&["end of input"]))
        }
    }
}

/// Parses a term, consuming the whole input.
pub fn parse_term(s: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(s)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a formula, consuming the whole input.
pub fn parse_formula(s: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(s)?;
    let f = p.formula(0)?;
    p.finish()?;
    Ok(f)
}

/// Canonical printing. Labels are never printed; annotations only when
/// `with_annotations` is set.
pub fn print_term(t: &Term, with_annotations: bool) -> String {
    let mut out = String::new();
    pt(t, with_annotations, &mut out);
    out
}

fn ann_suffix(ann: &Option<Formula>, with: bool, out: &mut String) {
    if with {
        if let Some(f) = ann {
            out.push(':');
            out.push_str(&print_formula(f));
        }
    }
}

fn pt(t: &Term, w: bool, out: &mut String) {
    match &t.node {
        TermNode::Var(x) => out.push_str(x.as_str()),
        TermNode::Lam { binder, ann, body } => {
            out.push('\\');
            out.push_str(binder.as_str());
            ann_suffix(ann, w, out);
            out.push('.');
            pt(body, w, out);
        }
        TermNode::Mu { binder, ann, body } => {
            out.push_str("mu @");
            out.push_str(binder.as_str());
            ann_suffix(ann, w, out);
            out.push('.');
            pt(body, w, out);
        }
        TermNode::Name { name, body } => {
            out.push_str("(@");
            out.push_str(name.as_str());
            out.push(' ');
            pt(body, w, out);
            out.push(')');
        }
        TermNode::App { fun, arg } => {
            out.push('(');
            pt(fun, w, out);
            out.push(' ');
            pe(arg, w, out);
            out.push(')');
        }
        TermNode::Pair(l, r) => {
            out.push('<');
            pt(l, w, out);
            out.push(',');
            pt(r, w, out);
            out.push('>');
        }
        TermNode::Inj { index, ann, body } => {
            out.push_str(if *index == Index::One { "in1" } else { "in2" });
            if w {
                if let Some(f) = ann {
                    out.push('[');
                    out.push_str(&print_formula(f));
                    out.push(']');
                }
            }
            out.push(' ');
            pt(body, w, out);
        }
    }
}

fn pe(e: &ETerm, w: bool, out: &mut String) {
    match e {
        ETerm::Term(t) => pt(t, w, out),
        ETerm::Proj(Index::One) => out.push_str("p1"),
        ETerm::Proj(Index::Two) => out.push_str("p2"),
        ETerm::Case {
            left_binder,
            left,
            right_binder,
            right,
        } => {
            out.push('[');
            out.push_str(left_binder.as_str());
            out.push('.');
            pt(left, w, out);
            out.push(',');
            out.push_str(right_binder.as_str());
            out.push('.');
            pt(right, w, out);
            out.push(']');
        }
    }
}

/// Prints a formula with minimal parentheses.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    pf(f, 0, &mut out);
    out
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Arrow(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        Formula::Atom(_) | Formula::Bottom => 4,
    }
}

fn pf(f: &Formula, min: u8, out: &mut String) {
    let parens = prec(f) < min;
    if parens {
        out.push('(');
    }
    match f {
        Formula::Atom(name) => out.push_str(name),
        Formula::Bottom => out.push('#'),
        Formula::Arrow(a, b) => {
            pf(a, 2, out);
            out.push_str(" -> ");
            pf(b, 1, out);
        }
        Formula::Or(a, b) => {
            pf(a, 2, out);
            out.push_str(" | ");
            pf(b, 3, out);
        }
        Formula::And(a, b) => {
            pf(a, 3, out);
            out.push_str(" & ");
            pf(b, 4, out);
        }
    }
    if parens {
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_term(self, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subst::alpha_eq;
    use crate::term::Occurrence;

    fn roundtrip(s: &str) {
        let t = parse_term(s).unwrap();
        let printed = print_term(&t, true);
        let back = parse_term(&printed).unwrap();
        assert!(alpha_eq(&t, &back, true), "roundtrip failed for {s}: {printed}");
    }

    #[test]
    fn parses_worked_examples() {
        // case application from the segment-tree example
        let t = parse_term("(u [x. mu @a.(@a <x,(@a w)>), y. v])").unwrap();
        assert!(matches!(
            &t.node,
            TermNode::App {
                arg: ETerm::Case { .. },
                ..
            }
        ));
        // pair projection
        let t = parse_term("(<x,y> p1)").unwrap();
        assert!(
            matches!(&t.node, TermNode::App { fun, arg: ETerm::Proj(Index::One) }
                if matches!(fun.node, TermNode::Pair(..)))
        );
        // nested mu/name/injection term
        let t = parse_term("mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))").unwrap();
        let inner = crate::term::term_at(&t, &Occurrence(vec![0, 0, 0, 0, 0, 0, 0])).unwrap();
        assert!(matches!(
            &inner.node,
            TermNode::Inj {
                index: Index::One,
                ..
            }
        ));
    }

    #[test]
    fn formula_precedence() {
        assert_eq!(
            parse_formula("A -> B -> A").unwrap(),
            Formula::arrow(
                Formula::atom("A"),
                Formula::arrow(Formula::atom("B"), Formula::atom("A"))
            )
        );
        assert_eq!(
            parse_formula("A & B | C").unwrap(),
            Formula::or(
                Formula::and(Formula::atom("A"), Formula::atom("B")),
                Formula::atom("C")
            )
        );
        assert_eq!(parse_formula("#").unwrap(), Formula::Bottom);
        assert_eq!(
            parse_formula("(A -> B) -> A").unwrap(),
            Formula::arrow(
                Formula::arrow(Formula::atom("A"), Formula::atom("B")),
                Formula::atom("A")
            )
        );
    }

    #[test]
    fn formula_print_minimal_parens() {
        for s in ["A -> B -> A", "(A -> B) -> A", "A & B | C", "A & (B | C)", "#", "A | B | C"] {
            let f = parse_formula(s).unwrap();
            assert_eq!(print_formula(&f), s);
            assert_eq!(parse_formula(&print_formula(&f)).unwrap(), f);
        }
    }

    #[test]
    fn canonical_printing() {
        assert_eq!(print_term(&Term::pair(Term::var("x"), Term::var("y")), false), "<x,y>");
        assert_eq!(
            print_term(&Term::app_term(Term::lam("x", Term::var("x")), Term::var("y")), false),
            "(\\x.x y)"
        );
        assert_eq!(
            print_term(&Term::name("a", Term::inj(Index::One, Term::var("s"))), false),
            "(@a in1 s)"
        );
    }

    #[test]
    fn roundtrips() {
        for s in [
            "x",
            "\\x.x",
            "\\x:A.x",
            "mu @a:(A -> A).(@a \\x:A.x)",
            "in1[B] x",
            "(u [x. mu @a.(@a <x,(@a w)>), y. v])",
            "(((u [x.v,y.w]) [r.p,s.q]) e)",
            "mu @a.(@a mu @b.(@b in2 \\s.(@a in1 s)))",
            "(<x,y> p2)",
            "\\x:((A->B)->A). mu @a:A.(@a (x \\y:A. mu @b:B.(@a y)))",
        ] {
            roundtrip(s);
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_term("(x").unwrap_err();
        assert_eq!(err.line, 1);
        assert_eq!(err.col, 3);
        assert!(err.to_string().starts_with("1:3:"));
        let err = parse_term("\\x x").unwrap_err();
        assert!(err.message.contains("`.`"));
        let err = parse_term("mu a.x").unwrap_err();
        assert!(err.message.contains("`@`"));
        // keywords are reserved
        assert!(parse_term("p1").is_err());
        // lowercase formula atom
        let err = parse_term("\\x:a.x").unwrap_err();
        assert!(err.message.contains("uppercase"));
    }

    #[test]
    fn prefix_operators_extend_right() {
        // in1 binds the whole application
        let t = parse_term("in1 (x y)").unwrap();
        assert!(matches!(&t.node, TermNode::Inj { .. }));
        let printed = print_term(&parse_term("\\x.(x in2 \\y.y)").unwrap(), false);
        assert_eq!(printed, "\\x.(x in2 \\y.y)");
    }
}
