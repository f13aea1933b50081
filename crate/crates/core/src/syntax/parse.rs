//! Recursive-descent parser for the ASCII concrete syntax.
//!
//! Formulas: `_|_`, propositional variables (`P`, `Q1`, `X[s-:E]`), `~F`,
//! `F /\ G`, `F \/ G`, `F -> G` (right associative, loosest), `t:F` where the
//! colon binds tighter than every binary connective. Terms: lowercase leaves,
//! `[s.t]`, `[s+t]`, `[s&t]`, `!t`; in signed syntax every leaf carries a
//! `+` or `-` suffix.

use thiserror::Error;

use super::ast::{Formula, Sign, Signedness, Term};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("sign error at offset {pos}: {message}")]
    Sign { pos: usize, message: String },
}

impl ParseError {
    pub fn pos(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::Sign { pos, .. } => *pos,
        }
    }
}

pub fn parse_term(input: &str, mode: Signedness) -> Result<Term, ParseError> {
    let mut p = Parser::new(input, mode);
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_formula(input: &str, mode: Signedness) -> Result<Formula, ParseError> {
    let mut p = Parser::new(input, mode);
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    mode: Signedness,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, mode: Signedness) -> Self {
        Parser { src, pos: 0, mode }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.syntax(format!("expected `{token}`"))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos < self.src.len() {
            self.syntax("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.formula()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat("\\/") {
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat("/\\") {
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek() {
            Some('~') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(c) if c.is_ascii_lowercase() || c == '[' || c == '!' => {
                let t = self.term()?;
                self.expect(":")?;
                let body = self.unary()?;
                Ok(Formula::just(t, body))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat("_|_") {
            return Ok(Formula::Bottom);
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        match self.peek() {
            Some(c) if c.is_ascii_uppercase() => {
                let name = self.prop_name()?;
                Ok(Formula::var(&name))
            }
            Some(_) => self.syntax("expected a formula"),
            None => self.syntax("unexpected end of input, expected a formula"),
        }
    }

    fn prop_name(&mut self) -> Result<String, ParseError> {
        let start = self.pos;
        let ident_len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        self.pos += ident_len;
        // A bracket group directly after the identifier is part of the name
        // (fresh variables introduced by the T-translation).
        if self.peek() == Some('[') {
            let mut depth = 0usize;
            for (i, c) in self.rest().char_indices() {
                match c {
                    '[' => depth += 1,
                    ']' => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += i + 1;
                            return Ok(self.src[start..self.pos].to_string());
                        }
                    }
                    _ => {}
                }
            }
            return self.syntax("unterminated `[` in variable name");
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some('!') => {
                self.pos += 1;
                let inner = self.term()?;
                if self.mode == Signedness::Signed && inner.sign() != Sign::Positive {
                    return Err(ParseError::Sign {
                        pos: start,
                        message: "`!` requires a positive inner term".into(),
                    });
                }
                Ok(Term::bang(inner))
            }
            Some('[') => {
                self.pos += 1;
                let lhs = self.term()?;
                self.skip_ws();
                let op = match self.peek() {
                    Some(c @ ('.' | '+' | '&')) => {
                        self.pos += 1;
                        c
                    }
                    _ => return self.syntax("expected one of `.`, `+`, `&`"),
                };
                let rhs = self.term()?;
                self.expect("]")?;
                self.compound(start, op, lhs, rhs)
            }
            Some(c) if c.is_ascii_lowercase() => self.leaf(),
            Some(_) => self.syntax("expected a justification term"),
            None => self.syntax("unexpected end of input, expected a justification term"),
        }
    }

    fn compound(&self, start: usize, op: char, lhs: Term, rhs: Term) -> Result<Term, ParseError> {
        if self.mode == Signedness::Signed {
            let (ls, rs) = (lhs.sign(), rhs.sign());
            let bad = match op {
                '&' => (ls != Sign::Negative || rs != Sign::Negative)
                    .then_some("pairing requires two negative terms"),
                _ => (ls != rs).then_some("operands must have the same sign"),
            };
            if let Some(message) = bad {
                return Err(ParseError::Sign {
                    pos: start,
                    message: message.into(),
                });
            }
        }
        Ok(match op {
            '.' => Term::app(lhs, rhs),
            '+' => Term::sum(lhs, rhs),
            _ => Term::pair(lhs, rhs),
        })
    }

    fn leaf(&mut self) -> Result<Term, ParseError> {
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'))
            .unwrap_or(self.rest().len());
        let name = &self.src[self.pos..self.pos + len];
        self.pos += len;
        let sign = match self.mode {
            Signedness::Unsigned => Sign::Unsigned,
            Signedness::Signed => match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    Sign::Positive
                }
                Some('-') if !self.rest().starts_with("->") => {
                    self.pos += 1;
                    Sign::Negative
                }
                _ => return self.syntax(format!("leaf `{name}` needs a `+` or `-` sign")),
            },
        };
        Ok(Term::leaf(name, sign))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(name: &str) -> Term {
        Term::leaf(name, Sign::Unsigned)
    }

    #[test]
    fn sum_term() {
        let t = parse_term("[s+t]", Signedness::Unsigned).unwrap();
        assert_eq!(t, Term::sum(u("s"), u("t")));
    }

    #[test]
    fn fused_pairing_term() {
        let t = parse_term("[c1- & x2-]", Signedness::Signed).unwrap();
        assert_eq!(
            t,
            Term::pair(
                Term::leaf("c1", Sign::Negative),
                Term::leaf("x2", Sign::Negative)
            )
        );
        assert!(matches!(t, Term::Pair(ref l, ref r) if l.is_constant() && !r.is_constant()));
    }

    #[test]
    fn bang_needs_positive_inner() {
        let err = parse_term("!x1-", Signedness::Signed).unwrap_err();
        assert!(matches!(err, ParseError::Sign { pos: 0, .. }));
    }

    #[test]
    fn mixed_signs_are_a_sign_error() {
        let err = parse_term("[x+ . y-]", Signedness::Signed).unwrap_err();
        assert!(matches!(err, ParseError::Sign { .. }));
        let err = parse_term("[x+ & y+]", Signedness::Signed).unwrap_err();
        assert!(matches!(err, ParseError::Sign { .. }));
    }

    #[test]
    fn unsigned_leaf_in_signed_mode_is_syntax_error() {
        let err = parse_term("[x . y]", Signedness::Signed).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { .. }));
    }

    #[test]
    fn denial_shape() {
        let f = parse_formula("t:P -> ~P", Signedness::Unsigned).unwrap();
        let p = Formula::var("P");
        assert_eq!(
            f,
            Formula::implies(Formula::just(u("t"), p.clone()), Formula::not(p))
        );
    }

    #[test]
    fn application_shape() {
        let f = parse_formula("s:(P -> Q) -> (t:P -> [s.t]:Q)", Signedness::Unsigned).unwrap();
        let (p, q) = (Formula::var("P"), Formula::var("Q"));
        let expected = Formula::implies(
            Formula::just(u("s"), Formula::implies(p.clone(), q.clone())),
            Formula::implies(
                Formula::just(u("t"), p),
                Formula::just(Term::app(u("s"), u("t")), q),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn dangling_connective_is_rejected() {
        let err = parse_formula("P /\\", Signedness::Unsigned).unwrap_err();
        assert!(matches!(err, ParseError::Syntax { pos: 4, .. }));
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("A /\\ B \\/ C -> D -> E", Signedness::Unsigned).unwrap();
        let v = Formula::var;
        let expected = Formula::implies(
            Formula::or(Formula::and(v("A"), v("B")), v("C")),
            Formula::implies(v("D"), v("E")),
        );
        assert_eq!(f, expected);
        let f = parse_formula("A /\\ B /\\ C", Signedness::Unsigned).unwrap();
        assert_eq!(f, Formula::and(Formula::and(v("A"), v("B")), v("C")));
    }

    #[test]
    fn colon_binds_tighter_than_connectives() {
        let f = parse_formula("t:P /\\ Q", Signedness::Unsigned).unwrap();
        assert!(matches!(f, Formula::And(..)));
        let f = parse_formula("~e1:R", Signedness::Unsigned).unwrap();
        assert_eq!(f, Formula::not(Formula::just(u("e1"), Formula::var("R"))));
        let f = parse_formula("s:t:P", Signedness::Unsigned).unwrap();
        assert_eq!(
            f,
            Formula::just(u("s"), Formula::just(u("t"), Formula::var("P")))
        );
    }

    #[test]
    fn fresh_variable_names_parse() {
        let f = parse_formula("t+:X[s-:E]", Signedness::Signed).unwrap();
        assert_eq!(
            f,
            Formula::just(Term::leaf("t", Sign::Positive), Formula::var("X[s-:E]"))
        );
    }

    #[test]
    fn signed_arrow_after_sign() {
        let f = parse_formula("s-:E -> ~E", Signedness::Signed).unwrap();
        assert!(matches!(f, Formula::Implies(..)));
    }
}
