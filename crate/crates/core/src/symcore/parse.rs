//! Infix text grammar:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] integer | '^' '(' ['-'] integer ')')?
//! primary := number | name '(' expr ')' | symbol | '(' expr ')'
//! symbol  := λ | lambda | η | eta | x | t | u | v | u_<tx..> | v_<tx..>
//!          | f | f' | f'' ... | name[_<txu..>]'{' base (',' base)* '}' | name
//! ```
//!
//! Numbers are decimal with optional fraction and exponent and are read
//! exactly. Any other bare name is a named constant. `−` and `·` are accepted
//! for `-` and `*`.

use num_bigint::BigInt;
use num_traits::Pow;

use super::coord::{Base, Coord, Field, FuncSym, Jet};
use super::expr::{Expr, Func};
use super::Rational;
use crate::{Error, Result};

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Next significant character with unicode operator aliases folded.
    fn peek_op(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek().map(|c| match c {
            '−' => '-',
            '·' => '*',
            c => c,
        })
    }

    fn expect(&mut self, want: char) -> Result<()> {
        if self.peek_op() == Some(want) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{want}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek_op() {
                Some('+') => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Some('-') => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek_op() {
                Some('*') => {
                    self.bump();
                    factors.push(self.unary()?);
                }
                Some('/') => {
                    self.bump();
                    factors.push(self.unary()?.powi(-1));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek_op() == Some('-') {
            self.bump();
            return Ok(-self.unary()?);
        }
        if self.peek_op() == Some('+') {
            self.bump();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.bump();
        let paren = self.peek_op() == Some('(');
        if paren {
            self.bump();
        }
        let negative = self.peek_op() == Some('-');
        if negative {
            self.bump();
        }
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        let n: i32 = self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("expected an integer exponent"))?;
        if paren {
            self.expect(')')?;
        }
        Ok(base.powi(if negative { -n } else { n }))
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek_op() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_alphabetic() => self.symbol(),
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0usize;
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                if seen_dot {
                    frac_len += 1;
                }
            } else if c == '.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.bump();
        }
        if digits.is_empty() {
            self.pos = start;
            return Err(self.error("malformed number"));
        }
        let mut exp10: i64 = -(frac_len as i64);
        let rest = self.rest();
        if rest.starts_with(['e', 'E']) {
            let tail = &rest[1..];
            let sign_len = usize::from(tail.starts_with(['+', '-']));
            let exp_digits: String =
                tail[sign_len..].chars().take_while(|c| c.is_ascii_digit()).collect();
            if !exp_digits.is_empty() {
                let e: i64 = exp_digits.parse().map_err(|_| self.error("exponent too large"))?;
                exp10 += if tail.starts_with('-') { -e } else { e };
                self.pos += 1 + sign_len + exp_digits.len();
            }
        }
        let mantissa: BigInt = digits.parse().map_err(|_| self.error("malformed number"))?;
        let scale = BigInt::from(10).pow(exp10.unsigned_abs() as u32);
        let value = if exp10 >= 0 {
            Rational::from_integer(mantissa * scale)
        } else {
            Rational::new(mantissa, scale)
        };
        Ok(Expr::Num(value))
    }

    fn name(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_alphabetic() || c.is_ascii_digit() || c == '_') {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    fn symbol(&mut self) -> Result<Expr> {
        let start = self.pos;
        let name = self.name();
        if self.peek() == Some('(') {
            self.bump();
            let arg = self.expr()?;
            self.expect(')')?;
            return Ok(Expr::apply(Func::from_name(&name), arg));
        }
        if self.peek() == Some('{') {
            return self.func_symbol(&name, start);
        }
        let coord = match name.as_str() {
            "λ" | "lambda" => Coord::Lambda,
            "η" | "eta" => Coord::Eta,
            "x" => Coord::X,
            "t" => Coord::T,
            "u" => Coord::u(),
            "v" => Coord::v(),
            "f" => {
                let mut n = 0u8;
                while self.peek() == Some('\'') {
                    self.bump();
                    n += 1;
                }
                Coord::Reduced(n)
            }
            _ => match name.split_once('_') {
                Some((field @ ("u" | "v"), suffix)) => {
                    let jet = Jet::from_suffix(suffix)
                        .filter(|j| j.order() > 0)
                        .ok_or(Error::Parse { pos: start, msg: format!("bad jet `{name}`") })?;
                    Coord::Dep(if field == "u" { Field::U } else { Field::V }, jet)
                }
                _ => Coord::Const(name),
            },
        };
        Ok(Expr::Coord(coord))
    }

    /// `q_tx{t,x}`: an arbitrary function of the listed base variables with
    /// the given partial derivatives.
    fn func_symbol(&mut self, name: &str, start: usize) -> Result<Expr> {
        self.bump();
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            let arg = match self.bump() {
                Some('t') => Base::T,
                Some('x') => Base::X,
                Some('u') => Base::U,
                Some('}') if args.is_empty() => break,
                _ => return Err(self.error("function arguments must be t, x or u")),
            };
            args.push(arg);
            match self.peek_op() {
                Some(',') => {
                    self.bump();
                }
                Some('}') => {
                    self.bump();
                    break;
                }
                _ => return Err(self.error("expected `,` or `}`")),
            }
        }
        let (base, suffix) = name.split_once('_').unwrap_or((name, ""));
        let sym = FuncSym::new(base, &args)
            .with_suffix(suffix)
            .ok_or(Error::Parse { pos: start, msg: format!("bad derivative suffix in `{name}`") })?;
        Ok(Expr::Coord(Coord::Func(sym)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::expr::rat;

    #[test]
    fn numbers_are_exact() {
        assert_eq!(parse("0.375").unwrap().as_rational(), Some(rat(3, 8)));
        assert_eq!(parse("1e-3").unwrap().as_rational(), Some(rat(1, 1000)));
        assert_eq!(parse("2.5E2").unwrap().as_rational(), Some(rat(250, 1)));
        assert_eq!(parse("3/8").unwrap().as_rational(), Some(rat(3, 8)));
    }

    #[test]
    fn symbols() {
        assert_eq!(parse("u_xt").unwrap(), Expr::Coord(Coord::u_jet("tx")));
        assert_eq!(parse("lambda").unwrap(), parse("λ").unwrap());
        assert_eq!(parse("f''").unwrap(), Expr::Coord(Coord::Reduced(2)));
        assert_eq!(parse("k").unwrap(), Expr::constant("k"));
        let q = parse("q_xt{x,t}").unwrap();
        assert_eq!(q.to_string(), "q_tx{t,x}");
    }

    #[test]
    fn precedence() {
        let e = parse("-u^2 + 2*u*-3").unwrap().normalize();
        assert_eq!(e, parse("-(u*u) - 6*u").unwrap().normalize());
        // Reciprocals of sums are atoms, so this cancellation is decided by
        // sampling rather than by the canonical form.
        let e = parse("(u+1)^-1 * (u + 1) - 1").unwrap();
        assert!(crate::symcore::is_zero(&e).unwrap().zero);
        assert_eq!(parse("u^(-2)").unwrap().normalize(), parse("1/u^2").unwrap().normalize());
    }

    #[test]
    fn unicode_operators() {
        assert!(parse("λ·u³").is_err());
        assert_eq!(parse("λ·u − u").unwrap().normalize(), parse("lambda*u - u").unwrap().normalize());
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse("u +"), Err(Error::Parse { pos: 3, .. })));
        assert!(matches!(parse("u)"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse("u_ty"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_roundtrip_examples() {
        for s in [
            "-λ*u^3 + λ*u",
            "-1/2 - 1/2*tanh(1/2*x + 3/4*t)",
            "(u + 1)^-1*x",
            "q_tx{t,x}*h_u{u} + v_xx",
            "sqrt(1/2*λ)*exp(-2*t)",
        ] {
            let e = parse(s).unwrap().normalize();
            assert_eq!(parse(&e.to_string()).unwrap().normalize(), e, "{s}");
        }
    }
}
