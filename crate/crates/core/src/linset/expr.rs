//! Coordinate expressions of a linear-set spec.
//!
//! ```text
//! expr    := ['-'] term (('+' | '-') term)*
//! term    := [coeff '*'] var [power]
//! coeff   := int | '[' int (',' int)* ']'
//! power   := '^' frob
//! frob    := 'q' ['^' exp] | '{' 'q' ['^' exp] '}'
//! exp     := int | '{' int '}'
//! ```
//!
//! `x^q^2`, `x^{q^2}` and `x^q^{2}` all denote `x^(q^2)`. An integer
//! coefficient is read in the prime field; a bracketed list gives the
//! little-endian GF(p)-coefficients of an element of the top field.
//! Whitespace is ignored.

use std::fmt;

use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Literal {
    Int(u64),
    Coeffs(Vec<u32>),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(n) => write!(f, "{n}"),
            Literal::Coeffs(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", parts.join(", "))
            }
        }
    }
}

/// `± coeff · var^(q^frobenius)`.
#[derive(Clone, Debug, Eq)]
pub struct Term {
    pub negated: bool,
    pub coeff: Option<Literal>,
    pub var: String,
    pub frobenius: u32,
    /// 1-based column of the variable name.
    pub column: usize,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.negated == other.negated
            && self.coeff == other.coeff
            && self.var == other.var
            && self.frobenius == other.frobenius
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.terms.iter().enumerate() {
            match (i, term.negated) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if let Some(c) = &term.coeff {
                write!(f, "{c}*")?;
            }
            f.write_str(&term.var)?;
            match term.frobenius {
                0 => {}
                1 => f.write_str("^q")?,
                k => write!(f, "^q^{k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => f.write_str(s),
            Tok::Int(n) => write!(f, "{n}"),
            Tok::Sym(c) => write!(f, "{c}"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
}

impl Lexer {
    fn new(text: &str, line: usize) -> Result<Self, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| ParseError {
                    line,
                    column: col,
                    token: s.clone(),
                    message: "integer literal out of range".into(),
                })?;
                toks.push((Tok::Int(n), col));
            } else if "+-*^{}[],".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(ParseError {
                    line,
                    column: col,
                    token: c.to_string(),
                    message: "unexpected character".into(),
                });
            }
        }
        toks.push((Tok::End, chars.len() + 1));
        Ok(Lexer { toks, pos: 0, line })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn next(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> ParseError {
        let (tok, column) = &self.toks[self.pos];
        ParseError {
            line: self.line,
            column: *column,
            token: tok.to_string(),
            message: message.into(),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error_here(format!("expected `{c}`")))
        }
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.next();
                Ok(n)
            }
            _ => Err(self.error_here("expected an integer")),
        }
    }
}

/// Parses one expression; errors report `line` as given.
pub fn parse_expression_at(text: &str, line: usize) -> Result<Expr, ParseError> {
    let mut lx = Lexer::new(text, line)?;
    let mut terms = Vec::new();
    let mut negated = lx.eat('-');
    loop {
        terms.push(parse_term(&mut lx, negated)?);
        if lx.eat('+') {
            negated = false;
        } else if lx.eat('-') {
            negated = true;
        } else if *lx.peek() == Tok::End {
            break;
        } else {
            return Err(lx.error_here("expected `+`, `-` or end of expression"));
        }
    }
    Ok(Expr { terms })
}

pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_expression_at(text, 1)
}

fn parse_term(lx: &mut Lexer, negated: bool) -> Result<Term, ParseError> {
    let coeff = match lx.peek() {
        Tok::Int(_) => {
            let n = lx.int()?;
            lx.expect('*')?;
            Some(Literal::Int(n))
        }
        Tok::Sym('[') => {
            lx.next();
            let mut c = Vec::new();
            loop {
                let n = lx.int()?;
                c.push(u32::try_from(n).map_err(|_| lx.error_here("coefficient out of range"))?);
                if lx.eat(']') {
                    break;
                }
                lx.expect(',')?;
            }
            lx.expect('*')?;
            Some(Literal::Coeffs(c))
        }
        _ => None,
    };
    let (var, column) = match lx.peek() {
        Tok::Ident(_) => match lx.next() {
            (Tok::Ident(s), col) => (s, col),
            _ => unreachable!(),
        },
        _ => return Err(lx.error_here("expected a variable name")),
    };
    let frobenius = if lx.eat('^') { parse_frob(lx)? } else { 0 };
    Ok(Term {
        negated,
        coeff,
        var,
        frobenius,
        column,
    })
}

fn parse_frob(lx: &mut Lexer) -> Result<u32, ParseError> {
    let braced = lx.eat('{');
    if *lx.peek() != Tok::Ident("q".into()) {
        return Err(lx.error_here("expected `q` after `^`"));
    }
    lx.next();
    let mut k = 1u64;
    if lx.eat('^') {
        k = if lx.eat('{') {
            let n = lx.int()?;
            lx.expect('}')?;
            n
        } else {
            lx.int()?
        };
    }
    if braced {
        lx.expect('}')?;
    }
    u32::try_from(k).map_err(|_| lx.error_here("Frobenius exponent out of range"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(var: &str, frob: u32) -> Term {
        Term {
            negated: false,
            coeff: None,
            var: var.into(),
            frobenius: frob,
            column: 0,
        }
    }

    #[test]
    fn power_spellings_agree() {
        for s in ["x^q^2", "x^{q^2}", "x^q^{2}", " x ^ q ^ 2 "] {
            assert_eq!(parse_expression(s).unwrap().terms, vec![term("x", 2)], "{s}");
        }
        assert_eq!(parse_expression("x^q").unwrap().terms, vec![term("x", 1)]);
        assert_eq!(parse_expression("x^{q}").unwrap().terms, vec![term("x", 1)]);
    }

    #[test]
    fn sums_and_coefficients() {
        let e = parse_expression("y + z").unwrap();
        assert_eq!(e.terms, vec![term("y", 0), term("z", 0)]);
        let e = parse_expression("-y - 2*y^q + [0,1]*z^{q^3}").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert!(e.terms[0].negated && e.terms[1].negated && !e.terms[2].negated);
        assert_eq!(e.terms[1].coeff, Some(Literal::Int(2)));
        assert_eq!(e.terms[2].coeff, Some(Literal::Coeffs(vec![0, 1])));
        assert_eq!(e.terms[2].frobenius, 3);
    }

    #[test]
    fn double_caret_names_the_token() {
        let err = parse_expression("x^^q").unwrap_err();
        assert_eq!(err.token, "^");
        assert_eq!(err.column, 3);
        assert!(err.to_string().contains("`^`"));
    }

    #[test]
    fn malformed_inputs() {
        for (s, col) in [
            ("x +", 4),
            ("2 x", 3),
            ("[1,2*x", 5),
            ("x^p", 3),
            ("x y", 3),
            ("x$", 2),
            ("", 1),
        ] {
            let err = parse_expression(s).unwrap_err();
            assert_eq!(err.column, col, "{s}: {err}");
        }
    }

    #[test]
    fn canonical_form_round_trips() {
        let e = parse_expression("x^{q^2}+ -3*y -[1,0,1]*z^q").unwrap_err();
        assert_eq!(e.token, "-");
        let e = parse_expression("x^{q^2} - 3*y - [1, 0, 1]*z^q + w").unwrap();
        let printed = e.to_string();
        assert_eq!(printed, "x^q^2 - 3*y - [1, 0, 1]*z^q + w");
        assert_eq!(parse_expression(&printed).unwrap(), e);
    }
}
