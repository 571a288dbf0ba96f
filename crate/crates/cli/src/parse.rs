//! Polynomial expression parsing over the variables x, y, z.
//!
//! The grammar, in precedence order: an expression is a sum or difference
//! of terms, a term is a product of signed powers, a power is an atom
//! raised to a literal nonnegative integer exponent, and an atom is an
//! integer, a variable, or a parenthesized expression. Multiplication may
//! be implicit by adjacency ("2x", "2(x+1)"), and unary minus may appear
//! anywhere an atom may start. Parsing expands the expression to canonical
//! coefficient form, so printing any parsed polynomial and parsing it again
//! gives the same polynomial.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use valset::{IntPoly, MultiPoly};

/// Largest accepted literal exponent; keeps expansion sizes sane.
const MAX_EXPONENT: u32 = 4096;

/// A syntax or semantic rejection, carrying the byte offset it refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "polynomial syntax error at byte {}: {}", self.pos, self.msg)
    }
}

/// A parsed expression: univariate when only x occurs, multivariate when
/// y or z occurs. The variable count of a multivariate result is the
/// highest variable used, so "x^2 - y^2" has two variables.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedPoly {
    Uni(IntPoly),
    Multi(MultiPoly),
}

impl std::fmt::Display for ParsedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParsedPoly::Uni(p) => p.fmt(f),
            ParsedPoly::Multi(g) => g.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let pos = i;
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = BigInt::parse_bytes(&bytes[start..i], 10)
                    .expect("a digit run parses as an integer");
                toks.push((Tok::Num(n), pos));
            }
            'x' => {
                toks.push((Tok::Var(0), pos));
                i += 1;
            }
            'y' => {
                toks.push((Tok::Var(1), pos));
                i += 1;
            }
            'z' => {
                toks.push((Tok::Var(2), pos));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, pos));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, pos));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, pos));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, pos));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, pos));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, pos));
                i += 1;
            }
            other => {
                return Err(ParseError {
                    pos,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(toks)
}

/// Sparse exponent-vector form used during expansion.
type Terms = BTreeMap<[u16; 3], BigInt>;

fn constant_terms(c: BigInt) -> Terms {
    let mut t = Terms::new();
    if !c.is_zero() {
        t.insert([0, 0, 0], c);
    }
    t
}

fn add_terms(mut a: Terms, b: Terms) -> Terms {
    for (e, c) in b {
        let entry = a.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            a.remove(&e);
        }
    }
    a
}

fn neg_terms(a: Terms) -> Terms {
    a.into_iter().map(|(e, c)| (e, -c)).collect()
}

fn mul_terms(a: &Terms, b: &Terms) -> Result<Terms, ParseError> {
    let mut out = Terms::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let mut e = [0u16; 3];
            for v in 0..3 {
                let sum = ea[v] as u32 + eb[v] as u32;
                e[v] = u16::try_from(sum).map_err(|_| ParseError {
                    pos: 0,
                    msg: format!("degree in {} exceeds 65535", ["x", "y", "z"][v]),
                })?;
            }
            let entry = out.entry(e).or_insert_with(BigInt::zero);
            *entry += ca * cb;
            if entry.is_zero() {
                out.remove(&e);
            }
        }
    }
    Ok(out)
}

fn pow_terms(base: &Terms, exp: u32) -> Result<Terms, ParseError> {
    let mut acc = constant_terms(BigInt::from(1));
    for _ in 0..exp {
        acc = mul_terms(&acc, base)?;
    }
    Ok(acc)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |&(_, p)| p)
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.i].clone();
        self.i += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos(), msg: msg.into() }
    }

    fn expr(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = add_terms(acc, self.term()?);
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = add_terms(acc, neg_terms(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = mul_terms(&acc, &self.unary()?)?;
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::LParen) => {
                    acc = mul_terms(&acc, &self.unary()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Terms, ParseError> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            Ok(neg_terms(self.unary()?))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Terms, ParseError> {
        let mut acc = self.atom()?;
        while matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            match self.peek() {
                Some(Tok::Num(_)) => {
                    let (tok, pos) = self.bump();
                    let Tok::Num(n) = tok else { unreachable!() };
                    let exp = n
                        .to_u32()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or(ParseError {
                            pos,
                            msg: format!("exponent exceeds the cap of {MAX_EXPONENT}"),
                        })?;
                    acc = pow_terms(&acc, exp)?;
                }
                _ => return Err(self.err("expected a nonnegative integer exponent after `^`")),
            }
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Terms, ParseError> {
        match self.peek() {
            Some(Tok::Num(_)) => {
                let (tok, _) = self.bump();
                let Tok::Num(n) = tok else { unreachable!() };
                Ok(constant_terms(n))
            }
            Some(&Tok::Var(v)) => {
                self.bump();
                let mut e = [0u16; 3];
                e[v] = 1;
                let mut t = Terms::new();
                t.insert(e, BigInt::from(1));
                Ok(t)
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return Err(self.err("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.err("expected a number, a variable, or `(`")),
        }
    }
}

/// Parse an expression into canonical coefficient form.
pub fn parse_poly(text: &str) -> Result<ParsedPoly, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(ParseError { pos: 0, msg: "empty expression".into() });
    }
    let mut parser = Parser { toks, i: 0, end: text.len() };
    let terms = parser.expr()?;
    if parser.i < parser.toks.len() {
        return Err(parser.err("unexpected trailing input"));
    }
    Ok(finish(terms))
}

fn finish(terms: Terms) -> ParsedPoly {
    let top_var = terms
        .keys()
        .flat_map(|e| (0..3).filter(|&v| e[v] > 0))
        .max();
    match top_var {
        None | Some(0) => {
            let deg = terms.keys().map(|e| e[0] as usize).max().unwrap_or(0);
            let mut coeffs = vec![BigInt::zero(); deg + 1];
            for (e, c) in terms {
                coeffs[e[0] as usize] = c;
            }
            ParsedPoly::Uni(IntPoly::from_coeffs(coeffs))
        }
        Some(v) => {
            let mut g = MultiPoly::new(v + 1).expect("variable indices stay below three");
            for (e, c) in terms {
                g.add_term(e, c);
            }
            ParsedPoly::Multi(g)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uni(text: &str) -> IntPoly {
        match parse_poly(text).unwrap() {
            ParsedPoly::Uni(f) => f,
            ParsedPoly::Multi(g) => panic!("expected univariate, got {g}"),
        }
    }

    fn multi(text: &str) -> MultiPoly {
        match parse_poly(text).unwrap() {
            ParsedPoly::Multi(g) => g,
            ParsedPoly::Uni(f) => panic!("expected multivariate, got {f}"),
        }
    }

    #[test]
    fn univariate_corpus() {
        assert_eq!(uni("x^4 - 2*x + 1"), IntPoly::from_i64(&[1, -2, 0, 0, 1]));
        assert_eq!(uni("(x^2+1)^2"), IntPoly::from_i64(&[1, 0, 2, 0, 1]));
        assert_eq!(uni("x^5 + x"), IntPoly::from_i64(&[0, 1, 0, 0, 0, 1]));
        assert_eq!(uni("7"), IntPoly::constant(BigInt::from(7)));
        assert_eq!(uni("(x-1)(x+1)"), IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn implicit_multiplication_and_unary_minus() {
        assert_eq!(uni("2x"), IntPoly::from_i64(&[0, 2]));
        assert_eq!(uni("2(x+1)"), IntPoly::from_i64(&[2, 2]));
        assert_eq!(uni("-x^2"), IntPoly::from_i64(&[0, 0, -1]));
        assert_eq!(uni("-x^2 + x"), IntPoly::from_i64(&[0, 1, -1]));
        assert_eq!(uni("3 - -x"), IntPoly::from_i64(&[3, 1]));
        assert_eq!(uni("-2 x^3"), IntPoly::from_i64(&[0, 0, 0, -2]));
    }

    #[test]
    fn multivariate_corpus() {
        let g = multi("x^2 - y^2");
        assert_eq!(g.nvars(), 2);
        assert_eq!(format!("{g}"), "x^2 - y^2");
        let h = multi("x^2 + y^2 + z^2");
        assert_eq!(h.nvars(), 3);
        let only_y = multi("y^2 - y");
        assert_eq!(only_y.nvars(), 2);
    }

    #[test]
    fn cancellation_collapses_to_canonical_form() {
        assert_eq!(uni("x^2 - x^2"), IntPoly::zero());
        assert_eq!(uni("(x+1)(x-1) - x^2"), IntPoly::from_i64(&[-1]));
        assert_eq!(multi("x y + y x"), multi("2 x y"));
    }

    #[test]
    fn print_parse_round_trips() {
        let corpus = [
            "x^2", "x^3", "x^4", "x^6", "x^3 + x", "x^5 + x", "(x^2+1)^2",
            "x^4 - 2*x + 1", "-3x^7 + 2x - 5", "x^2 - y^2", "x^2 + y^2",
            "x^2 + y^2 + z^2", "x y z - 4", "12",
        ];
        for text in corpus {
            let parsed = parse_poly(text).unwrap();
            let printed = format!("{parsed}");
            assert_eq!(parse_poly(&printed).unwrap(), parsed, "round trip of `{text}`");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_poly("x^2 $ 1").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_poly("x^").unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse_poly("x^y").unwrap_err();
        assert_eq!(e.pos, 2);
        let e = parse_poly("(x+1").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_poly("x^999999").unwrap_err();
        assert!(e.msg.contains("exponent"));
        let e = parse_poly("").unwrap_err();
        assert_eq!(e.pos, 0);
        let e = parse_poly("x + + 1").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_poly("x^2 y").is_ok());
        assert!(parse_poly("2.5").is_err());
    }
}
