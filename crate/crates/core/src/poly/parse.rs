//! Recursive-descent parser for the polynomial text format.
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := atom ('^' uint)?
//! atom     := rational | var | '(' expr ')'
//! rational := uint ('/' uint)?
//! var      := 'T' '[' uint ']' '[' uint ']' | 'S' '[' uint ']' | 't' | 's'
//! ```
//!
//! Whitespace is insignificant. The optional leading sign is what lets a
//! printed polynomial with a negative leading coefficient parse back.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use super::polynomial::SparsePolynomial;
use super::var::{Param, Var};
use super::{PolyError, Rational};

/// Which `T`/`S` variables a parse may mention. Parameters are always
/// accepted.
#[derive(Clone, Copy, Debug)]
pub enum Scope<'a> {
    Free,
    Vars(&'a BTreeSet<Var>),
}

impl Scope<'_> {
    fn admits(&self, v: Var) -> bool {
        match self {
            Scope::Free => true,
            Scope::Vars(set) => v.is_param() || set.contains(&v),
        }
    }
}

pub fn parse_polynomial(text: &str, scope: Scope<'_>) -> Result<SparsePolynomial, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, scope };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("'+', '-', '*' or end of input"));
    }
    Ok(out)
}

/// Parses a single variable name such as `T[2][1]`, `S[3]` or `s`.
pub fn parse_var(text: &str, scope: Scope<'_>) -> Result<Var, PolyError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, scope };
    p.skip_ws();
    let start = p.pos;
    let v = p.var()?;
    p.check_scope(v, start)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("end of input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    scope: Scope<'a>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", c as char)))
        }
    }

    fn error(&self, expected: &str) -> PolyError {
        let found = match self.src.get(self.pos) {
            Some(&c) => format!("'{}'", c as char),
            None => "end of input".to_string(),
        };
        PolyError::Syntax { position: self.pos, expected: expected.to_string(), found }
    }

    fn expr(&mut self) -> Result<SparsePolynomial, PolyError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePolynomial, PolyError> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<SparsePolynomial, PolyError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.uint_u32()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<SparsePolynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let den = if self.eat(b'/') {
                    let at = self.pos;
                    let d = self.uint()?;
                    if d == BigInt::from(0) {
                        self.pos = at;
                        return Err(self.error("nonzero denominator"));
                    }
                    d
                } else {
                    BigInt::from(1)
                };
                Ok(SparsePolynomial::constant(Rational::new(num, den)))
            }
            Some(b'T' | b'S' | b't' | b's') => {
                let start = self.pos;
                let v = self.var()?;
                self.check_scope(v, start)?;
                Ok(SparsePolynomial::var(v))
            }
            _ => Err(self.error("number, variable or '('")),
        }
    }

    fn var(&mut self) -> Result<Var, PolyError> {
        match self.peek() {
            Some(b'T') => {
                self.pos += 1;
                self.expect(b'[')?;
                let block = self.uint_u32()?;
                self.expect(b']')?;
                self.expect(b'[')?;
                let pos = self.uint_u32()?;
                self.expect(b']')?;
                Ok(Var::t(block, pos))
            }
            Some(b'S') => {
                self.pos += 1;
                self.expect(b'[')?;
                let k = self.uint_u32()?;
                self.expect(b']')?;
                Ok(Var::s(k))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(Var::Param(Param::T))
            }
            Some(b's') => {
                self.pos += 1;
                Ok(Var::Param(Param::S))
            }
            _ => Err(self.error("variable")),
        }
    }

    fn check_scope(&self, v: Var, start: usize) -> Result<(), PolyError> {
        if self.scope.admits(v) {
            Ok(())
        } else {
            Err(PolyError::UnknownVariable { name: v.to_string(), position: start })
        }
    }

    fn uint(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as an integer"))
    }

    fn uint_u32(&mut self) -> Result<u32, PolyError> {
        let at = self.pos;
        let v = self.uint()?;
        u32::try_from(v).map_err(|_| {
            let mut e = self.error("integer below 2^32");
            if let PolyError::Syntax { position, .. } = &mut e {
                *position = at;
            }
            e
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<SparsePolynomial, PolyError> {
        parse_polynomial(s, Scope::Free)
    }

    #[test]
    fn three_term_relation() {
        let p = parse("T[1][1]*T[1][2] - T[2][1]^2 - 1").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string(), "T[1][1]*T[1][2] - T[2][1]^2 - 1");
    }

    #[test]
    fn zero_is_empty() {
        assert!(parse("0").unwrap().is_zero());
        assert!(parse(" 3 - 3 ").unwrap().is_zero());
    }

    #[test]
    fn missing_second_index() {
        match parse("T[1]") {
            Err(PolyError::Syntax { position, expected, .. }) => {
                assert_eq!(position, 4);
                assert_eq!(expected, "'['");
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parentheses_powers_and_rationals() {
        let p = parse("(T[1][1] + 1/2)^2 - T[1][1]").unwrap();
        assert_eq!(p.to_string(), "T[1][1]^2 + 1/4");
        let q = parse("-3/2*S[1]*s + t").unwrap();
        assert_eq!(q.to_string(), "-3/2*S[1]*s + t");
    }

    #[test]
    fn scope_rejects_unknown() {
        let universe: BTreeSet<Var> = [Var::t(1, 1)].into_iter().collect();
        assert!(parse_polynomial("T[1][1] + s", Scope::Vars(&universe)).is_ok());
        match parse_polynomial("T[1][1] + T[9][9]", Scope::Vars(&universe)) {
            Err(PolyError::UnknownVariable { name, position }) => {
                assert_eq!(name, "T[9][9]");
                assert_eq!(position, 10);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_zero_denominator_and_trailing_input() {
        assert!(matches!(parse("1/0"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("T[1][1] T[1][2]"), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse(""), Err(PolyError::Syntax { .. })));
    }

    #[test]
    fn variable_names() {
        assert_eq!(parse_var("S[3]", Scope::Free).unwrap(), Var::s(3));
        assert_eq!(parse_var(" T[0][2] ", Scope::Free).unwrap(), Var::t(0, 2));
        assert!(parse_var("T[0][2]+1", Scope::Free).is_err());
    }
}
