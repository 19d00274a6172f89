//! Parser for the scalar expression grammar shared by the CLI, the model DSL
//! and the JSON formats: integers, `p/q`, `i`, `2i`, variables, `conj(..)`,
//! `+ - * /`, `^` with an integer exponent and parentheses.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::gauss::Gaussian;
use super::ratfn::RatFn;
use super::var::Var;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Imag(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>, AlgebraError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            let n: BigInt = digits.parse().expect("digits");
            let imag = i < chars.len()
                && chars[i] == 'i'
                && !chars.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_');
            if imag {
                i += 1;
                out.push((start, Tok::Imag(n)));
            } else {
                out.push((start, Tok::Int(n)));
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    resolve: &'a dyn Fn(&str) -> Option<Var>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, AlgebraError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.here();
                self.pos += 1;
                // Literal `r/si` reads as `(r/s) i`, matching the numeric
                // literal format `p/q+r/si`.
                if let Some(Tok::Imag(n)) = self.peek().cloned() {
                    if self.toks.get(self.pos + 1).map(|t| &t.1) != Some(&Tok::Op('^')) {
                        self.pos += 1;
                        let d = RatFn::constant(Gaussian::real(BigRational::from_integer(n)));
                        acc = acc.checked_div(&d).map_err(|_| AlgebraError::Parse { pos: at, msg: "division by zero".into() })?;
                        acc = &acc * &RatFn::i();
                        continue;
                    }
                }
                let d = self.unary()?;
                acc = acc.checked_div(&d).map_err(|_| AlgebraError::Parse { pos: at, msg: "division by zero".into() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn, AlgebraError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn, AlgebraError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let e = match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    i32::try_from(n).map_err(|_| AlgebraError::Parse { pos: self.here(), msg: "exponent too large".into() })?
                }
                _ => return self.err("expected integer exponent"),
            };
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| AlgebraError::Parse { pos: self.here(), msg: "negative power of zero".into() });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFn, AlgebraError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(RatFn::constant(Gaussian::real(BigRational::from_integer(n))))
            }
            Some(Tok::Imag(n)) => {
                self.pos += 1;
                Ok(RatFn::constant(Gaussian::new(BigRational::from_integer(0.into()), BigRational::from_integer(n))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(RatFn::i());
                }
                if name == "conj" {
                    if !self.eat('(') {
                        return self.err("expected '(' after conj");
                    }
                    let e = self.expr()?;
                    if !self.eat(')') {
                        return self.err("expected ')'");
                    }
                    return Ok(e.conj());
                }
                match (self.resolve)(&name) {
                    Some(v) => Ok(RatFn::var(v)),
                    None => Err(AlgebraError::Parse {
                        pos: self.toks[self.pos - 1].0,
                        msg: format!("unknown symbol '{name}'"),
                    }),
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses with a custom name resolver.
pub fn parse_with(s: &str, resolve: &dyn Fn(&str) -> Option<Var>) -> Result<RatFn, AlgebraError> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, end: s.chars().count(), resolve };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses a scalar using the global variable registry.
pub fn parse_scalar(s: &str) -> Result<RatFn, AlgebraError> {
    parse_with(s, &Var::lookup)
}

/// Parses a numeric literal (no variables), e.g. `1/2+3/4i` or `(1+i)/2`.
pub fn parse_number(s: &str) -> Result<Gaussian, AlgebraError> {
    let r = parse_with(s, &|_| None)?;
    r.as_constant().ok_or_else(|| AlgebraError::Parse { pos: 0, msg: "expected a number".into() })
}

#[cfg(test)]
mod tests {
    use super::super::var::{A, A_BAR, B};
    use super::*;

    #[test]
    fn parses_literals() {
        assert_eq!(parse_number("1/2+3/4i").unwrap(), Gaussian::new(BigRational::new(1.into(), 2.into()), BigRational::new(3.into(), 4.into())));
        assert_eq!(parse_number("2i").unwrap(), Gaussian::complex(0, 2));
        assert_eq!(parse_number("-i").unwrap(), Gaussian::complex(0, -1));
        assert_eq!(parse_number("(1+i)^2").unwrap(), Gaussian::complex(0, 2));
    }

    #[test]
    fn parses_expressions() {
        let f = parse_scalar("conj(a)*a/b^2").unwrap();
        assert_eq!(f, &(&RatFn::var(A) * &RatFn::var(A_BAR)) / &RatFn::var(B).pow(2).unwrap());
        assert!(parse_scalar("a +").is_err());
        assert!(parse_scalar("qq").is_err());
        assert!(parse_scalar("1/0").is_err());
    }

    #[test]
    fn display_roundtrips() {
        for s in ["(2*a - 3/4*i*b)/(conj(a)^2 + 1)", "-i*a*b^3", "1/b", "(1+i)*a/(a*b)"] {
            let f = parse_scalar(s).unwrap();
            assert_eq!(parse_scalar(&f.to_string()).unwrap(), f, "{s} -> {f}");
        }
    }
}
