//! Recursive-descent parser for transform-domain expressions.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := number | 'i' | 's' | 'cs' | 'conj' '(' 's' ')' | '(' expr ')'
//! ```
//!
//! Each subexpression is kept as a constant plus an `s`-part plus a `cs`-part.
//! Products, quotients and powers may only combine parts that live on the
//! same side; anything else is a mixed term and is rejected.

use super::poly::Polynomial;
use super::rational::RationalFunction;
use super::SplitTransform;
use crate::error::{Error, Result};
use crate::signal::ComplexValue;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    S,
    Cs,
    I,
    Conj,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    token: Token,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let single = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(token) = single {
            out.push(Spanned { token, pos: start });
            i += 1;
            continue;
        }
        if b.is_ascii_digit() || b == b'.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            // optional exponent, only when followed by digits
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lexeme = &text[start..i];
            let value: f64 = lexeme.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: format!("malformed number `{lexeme}`"),
            })?;
            out.push(Spanned {
                token: Token::Number(value),
                pos: start,
            });
            continue;
        }
        if b.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            let token = match &text[start..i] {
                "s" => Token::S,
                "cs" => Token::Cs,
                "i" => Token::I,
                "conj" => Token::Conj,
                other => {
                    return Err(Error::Syntax {
                        pos: start,
                        msg: format!("unknown identifier `{other}` (expected s, cs, i or conj)"),
                    })
                }
            };
            out.push(Spanned { token, pos: start });
            continue;
        }
        let ch = text[start..].chars().next().unwrap_or('?');
        return Err(Error::Syntax {
            pos: start,
            msg: format!("unexpected character `{ch}`"),
        });
    }
    out.push(Spanned {
        token: Token::End,
        pos: text.len(),
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vars {
    None,
    S,
    Cs,
    Both,
}

impl Vars {
    fn union(self, other: Vars) -> Vars {
        match (self, other) {
            (Vars::None, v) | (v, Vars::None) => v,
            (a, b) if a == b => a,
            _ => Vars::Both,
        }
    }
}

/// `constant + s_part(s) + cs_part(s̄)`; `vars` records which variables
/// occur syntactically, even if their contribution cancels.
#[derive(Debug, Clone)]
struct Part {
    constant: ComplexValue,
    s_part: RationalFunction,
    cs_part: RationalFunction,
    vars: Vars,
}

impl Part {
    fn constant(c: ComplexValue) -> Self {
        Self {
            constant: c,
            s_part: RationalFunction::zero(),
            cs_part: RationalFunction::zero(),
            vars: Vars::None,
        }
    }

    fn variable(vars: Vars) -> Self {
        let x = RationalFunction::polynomial(Polynomial::identity());
        let mut p = Self::constant(ComplexValue::default());
        match vars {
            Vars::S => p.s_part = x,
            Vars::Cs => p.cs_part = x,
            _ => unreachable!("a single variable"),
        }
        p.vars = vars;
        p
    }

    /// The whole part as one rational function on its single side.
    fn one_sided(&self) -> RationalFunction {
        let c = RationalFunction::constant(self.constant);
        match self.vars {
            Vars::S => c.add(&self.s_part),
            Vars::Cs => c.add(&self.cs_part),
            Vars::None => c,
            Vars::Both => unreachable!("callers reject mixed parts"),
        }
    }

    fn from_side(vars: Vars, r: RationalFunction) -> Self {
        let mut p = Self::constant(ComplexValue::default());
        match vars {
            Vars::S => p.s_part = r,
            Vars::Cs => p.cs_part = r,
            Vars::None => {
                // a rational with no variable is a constant
                p.constant = r.num().coeffs().first().copied().unwrap_or_default();
            }
            Vars::Both => unreachable!("callers reject mixed parts"),
        }
        p.vars = vars;
        p
    }

    fn scale(&self, k: ComplexValue) -> Self {
        Self {
            constant: self.constant * k,
            s_part: self.s_part.scale(k),
            cs_part: self.cs_part.scale(k),
            vars: self.vars,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            constant: self.constant + other.constant,
            s_part: self.s_part.add(&other.s_part),
            cs_part: self.cs_part.add(&other.cs_part),
            vars: self.vars.union(other.vars),
        }
    }

    fn neg(&self) -> Self {
        self.scale(ComplexValue::new(-1.0, 0.0))
    }

    fn mul(&self, other: &Self, pos: usize) -> Result<Self> {
        if self.vars == Vars::None {
            return Ok(other.scale(self.constant));
        }
        if other.vars == Vars::None {
            return Ok(self.scale(other.constant));
        }
        let vars = self.vars.union(other.vars);
        if vars == Vars::Both {
            return Err(Error::MixedTerm { pos });
        }
        Ok(Self::from_side(vars, self.one_sided().mul(&other.one_sided())))
    }

    fn div(&self, other: &Self, pos: usize) -> Result<Self> {
        let vars = self.vars.union(other.vars);
        if other.vars == Vars::None {
            if other.constant == ComplexValue::default() {
                return Err(Error::DivisionByZero { pos });
            }
            return Ok(self.scale(other.constant.inv()));
        }
        if vars == Vars::Both {
            return Err(Error::MixedTerm { pos });
        }
        let quotient = self
            .one_sided()
            .div(&other.one_sided())
            .map_err(|_| Error::DivisionByZero { pos })?;
        Ok(Self::from_side(vars, quotient))
    }

    fn pow(&self, n: u32, pos: usize) -> Result<Self> {
        match (self.vars, n) {
            (_, 0) => Ok(Self::constant(ComplexValue::new(1.0, 0.0))),
            (_, 1) => Ok(self.clone()),
            (Vars::None, _) => Ok(Self::constant(self.constant.powu(n))),
            (Vars::Both, _) => Err(Error::MixedTerm { pos }),
            (v, _) => Ok(Self::from_side(v, self.one_sided().pow(n))),
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.at]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.at].clone();
        if t.token != Token::End {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<()> {
        let t = self.bump();
        if t.token == token {
            Ok(())
        } else {
            Err(Error::Syntax {
                pos: t.pos,
                msg: format!("expected {what}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Part> {
        let mut acc = self.term()?;
        loop {
            match self.peek().token {
                Token::Plus => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Token::Minus => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Part> {
        let mut acc = self.unary()?;
        loop {
            let op = self.peek().clone();
            match op.token {
                Token::Star => {
                    self.bump();
                    acc = acc.mul(&self.unary()?, op.pos)?;
                }
                Token::Slash => {
                    self.bump();
                    acc = acc.div(&self.unary()?, op.pos)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Part> {
        match self.peek().token {
            Token::Minus => {
                self.bump();
                Ok(self.unary()?.neg())
            }
            Token::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Part> {
        let base = self.primary()?;
        if self.peek().token != Token::Caret {
            return Ok(base);
        }
        let caret = self.bump();
        let exp = self.bump();
        match exp.token {
            Token::Number(n) if n.fract() == 0.0 && (0.0..=64.0).contains(&n) => base.pow(n as u32, caret.pos),
            _ => Err(Error::Syntax {
                pos: exp.pos,
                msg: "exponent must be a nonnegative integer literal (at most 64)".into(),
            }),
        }
    }

    fn primary(&mut self) -> Result<Part> {
        let t = self.bump();
        match t.token {
            Token::Number(v) => Ok(Part::constant(ComplexValue::new(v, 0.0))),
            Token::I => Ok(Part::constant(ComplexValue::new(0.0, 1.0))),
            Token::S => Ok(Part::variable(Vars::S)),
            Token::Cs => Ok(Part::variable(Vars::Cs)),
            Token::Conj => {
                self.expect(Token::LParen, "`(` after conj")?;
                self.expect(Token::S, "`s` inside conj(...)")?;
                self.expect(Token::RParen, "`)` closing conj(s")?;
                Ok(Part::variable(Vars::Cs))
            }
            Token::LParen => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::End => Err(Error::Syntax {
                pos: t.pos,
                msg: "unexpected end of input".into(),
            }),
            other => Err(Error::Syntax {
                pos: t.pos,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }
}

/// Parse an expression in `s` and `cs` (= s̄) into its split form.
///
/// Constant terms are assigned to the `s` side.
pub fn parse_transform(text: &str) -> Result<SplitTransform> {
    let mut parser = Parser {
        tokens: lex(text)?,
        at: 0,
    };
    let part = parser.expr()?;
    let end = parser.peek();
    if end.token != Token::End {
        return Err(Error::Syntax {
            pos: end.pos,
            msg: "unexpected trailing input".into(),
        });
    }
    let g1 = RationalFunction::constant(part.constant).add(&part.s_part);
    Ok(SplitTransform {
        g1,
        g2: part.cs_part,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    fn inv_pow(k: u32, scale: f64) -> RationalFunction {
        let s = RationalFunction::polynomial(Polynomial::identity());
        RationalFunction::constant(c(scale, 0.0)).div(&s.pow(k)).unwrap()
    }

    #[test]
    fn split_examples() {
        let st = parse_transform("1/s^2 - 1/cs^2").unwrap();
        assert_eq!(st.g1, inv_pow(2, 1.0));
        assert_eq!(st.g2, inv_pow(2, -1.0));
        let st = parse_transform("1/s + 1/cs").unwrap();
        assert_eq!(st.g1, inv_pow(1, 1.0));
        assert_eq!(st.g2, inv_pow(1, 1.0));
    }

    #[test]
    fn product_is_expanded() {
        let st = parse_transform("(2*s+3)/((s+1)*(s+2))").unwrap();
        assert_eq!(st.g1.num(), &Polynomial::from_real(&[3.0, 2.0]));
        assert_eq!(st.g1.den(), &Polynomial::from_real(&[2.0, 3.0, 1.0]));
        assert!(st.g2.is_zero());
    }

    #[test]
    fn mixed_term_is_rejected() {
        let err = parse_transform("1/(s*cs)").unwrap_err();
        assert_eq!(err, Error::MixedTerm { pos: 4 });
        assert!(matches!(parse_transform("(1/s + 1/cs)^2"), Err(Error::MixedTerm { .. })));
        assert!(matches!(parse_transform("s/cs"), Err(Error::MixedTerm { .. })));
    }

    #[test]
    fn constants_are_distributed() {
        let st = parse_transform("2*(1/s + 1/cs)").unwrap();
        assert_eq!(st.g1, inv_pow(1, 2.0));
        assert_eq!(st.g2, inv_pow(1, 2.0));
        let st = parse_transform("1/(cs + 1)").unwrap();
        assert!(st.g1.is_zero());
        assert_eq!(st.g2.den(), &Polynomial::from_real(&[1.0, 1.0]));
        // a bare constant lands on the s side
        let st = parse_transform("3 + 1/cs").unwrap();
        assert_eq!(st.g1, RationalFunction::constant(c(3.0, 0.0)));
    }

    #[test]
    fn conj_alias_and_imaginary_unit() {
        let a = parse_transform("1/conj( s ) + i/s").unwrap();
        assert_eq!(a.g2, inv_pow(1, 1.0));
        assert_eq!(a.g1.num(), &Polynomial::constant(c(0.0, 1.0)));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert_eq!(
            parse_transform("1/s +* 2"),
            Err(Error::Syntax {
                pos: 5,
                msg: "unexpected token Star".into()
            })
        );
        assert!(matches!(parse_transform("(s + 1"), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_transform("s^-1"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_transform("s^1.5"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_transform("x + 1"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_transform("1 2"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_transform(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_transform("1.2.3"), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn zero_division_is_reported() {
        assert_eq!(parse_transform("1/(s - s)"), Err(Error::DivisionByZero { pos: 1 }));
        assert_eq!(parse_transform("s/0"), Err(Error::DivisionByZero { pos: 1 }));
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = parse_transform(" 1 /\ts ^ 2\n").unwrap();
        let b = parse_transform("1/s^2").unwrap();
        assert_eq!(a, b);
    }
}
