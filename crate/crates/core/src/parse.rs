//! Text syntax for exact numbers (`1/2+3/4*sqrt(2)`), parameter lists,
//! intervals and index ranges.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::qfield::{Interval, QfieldError, QuadReal, Rational, RealParam};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected {found} at offset {pos} in {input:?}")]
    Unexpected { input: String, pos: usize, found: String },
    #[error("sqrt argument must be a nonnegative integer, got {0}")]
    BadRadicand(String),
    #[error("{0}")]
    Arith(#[from] QfieldError),
    #[error("bad interval {0:?}: expected e.g. (a,b] or [a,b)")]
    Interval(String),
    #[error("bad range {0:?}: expected lo:hi")]
    Range(String),
    #[error("bad float {0:?}")]
    Float(String),
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let chars = src.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Self { src, chars, pos: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn unexpected(&self) -> ParseError {
        ParseError::Unexpected {
            input: self.src.to_string(),
            pos: self.chars.get(self.pos).map_or(self.src.len(), |&(i, _)| i),
            found: self.peek().map_or("end of input".to_string(), |c| format!("{c:?}")),
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<QuadReal, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QuadReal, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.checked_div(&self.unary()?)?;
            } else if matches!(self.peek(), Some('s') | Some('√') | Some('(')) {
                // implicit product, e.g. `3sqrt2`
                acc = acc.checked_mul(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<QuadReal, ParseError> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.primary()
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn number(&mut self) -> Option<Rational> {
        let int = self.digits()?;
        let mut value = Rational::from_integer(int.parse::<BigInt>().ok()?);
        if self.peek() == Some('.') {
            self.pos += 1;
            let frac = self.digits().unwrap_or_default();
            if !frac.is_empty() {
                let den = BigInt::from(10).pow(frac.len() as u32);
                value += Rational::new(frac.parse::<BigInt>().ok()?, den);
            }
        }
        Some(value)
    }

    fn primary(&mut self) -> Result<QuadReal, ParseError> {
        if self.eat('(') {
            let v = self.expr()?;
            return if self.eat(')') { Ok(v) } else { Err(self.unexpected()) };
        }
        if self.eat('√') || self.keyword("sqrt") {
            let arg = if self.peek() == Some('(') { self.primary()? } else { self.unary_number()? };
            let n = arg
                .is_integer()
                .then(|| arg.a().to_integer())
                .filter(|n| !n.is_negative())
                .and_then(|n| n.to_u64())
                .ok_or_else(|| ParseError::BadRadicand(arg.to_string()))?;
            return Ok(QuadReal::sqrt(n));
        }
        match self.number() {
            Some(r) => Ok(QuadReal::from_rational(r)),
            None => Err(self.unexpected()),
        }
    }

    fn unary_number(&mut self) -> Result<QuadReal, ParseError> {
        self.number().map(QuadReal::from_rational).ok_or_else(|| self.unexpected())
    }

    fn keyword(&mut self, kw: &str) -> bool {
        let n = kw.chars().count();
        let matches = self.chars.len() >= self.pos + n
            && self.chars[self.pos..self.pos + n].iter().map(|&(_, c)| c).eq(kw.chars());
        if matches {
            self.pos += n;
        }
        matches
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos == self.chars.len() {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }
}

/// Parses an exact number such as `3`, `-7/3`, `sqrt2`, `1/2+3/4*sqrt(5)`,
/// `(1+sqrt(5))/2`.
pub fn parse_quad(s: &str) -> Result<QuadReal, ParseError> {
    let mut p = Parser::new(s);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// Splits on commas outside parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Comma-separated exact numbers, e.g. `1,sqrt2,2`.
pub fn parse_quad_list(s: &str) -> Result<Vec<QuadReal>, ParseError> {
    split_top(s, ',').into_iter().map(parse_quad).collect()
}

/// Float parameter carrying a tolerance.
pub fn parse_approx(s: &str, tolerance: f64) -> Result<RealParam, ParseError> {
    let value: f64 = s.trim().parse().map_err(|_| ParseError::Float(s.to_string()))?;
    Ok(RealParam::Approx { value, tolerance })
}

/// Exact unless `approx` is given, in which case the text is read as a float.
pub fn parse_param(s: &str, approx: Option<f64>) -> Result<RealParam, ParseError> {
    match approx {
        Some(tol) => parse_approx(s, tol),
        None => Ok(RealParam::Exact(parse_quad(s)?)),
    }
}

pub fn parse_param_list(s: &str, approx: Option<f64>) -> Result<Vec<RealParam>, ParseError> {
    split_top(s, ',').into_iter().map(|x| parse_param(x, approx)).collect()
}

/// `(a,b]`, `[a,b)`, `[a,b]` or `(a,b)` with exact endpoints.
pub fn parse_interval(s: &str) -> Result<Interval, ParseError> {
    let t = s.trim();
    let bad = || ParseError::Interval(s.to_string());
    let lo_closed = match t.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(bad()),
    };
    let hi_closed = match t.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(bad()),
    };
    let inner = &t[1..t.len() - 1];
    let parts = split_top(inner, ',');
    if parts.len() != 2 {
        return Err(bad());
    }
    Ok(Interval::new(parse_quad(parts[0])?, parse_quad(parts[1])?, lo_closed, hi_closed))
}

/// `lo:hi` with `lo <= 0 <= hi`.
pub fn parse_range(s: &str) -> Result<(i64, i64), ParseError> {
    let bad = || ParseError::Range(s.to_string());
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = a.trim().parse().map_err(|_| bad())?;
    let hi: i64 = b.trim().parse().map_err(|_| bad())?;
    if lo > 0 || hi < 0 {
        return Err(bad());
    }
    Ok((lo, hi))
}

/// Exact rendering that [`parse_quad`] reads back.
pub fn render(q: &QuadReal) -> String {
    if q.is_zero() {
        return "0".into();
    }
    q.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        assert_eq!(parse_quad("3").unwrap(), QuadReal::from_int(3));
        assert_eq!(parse_quad("-7/3").unwrap(), QuadReal::frac(-7, 3));
        assert_eq!(parse_quad("sqrt2").unwrap(), QuadReal::sqrt(2));
        assert_eq!(parse_quad("√8").unwrap(), QuadReal::sqrt(2) * QuadReal::from_int(2));
        assert_eq!(
            parse_quad("1/2 + 3/4*sqrt(5)").unwrap(),
            QuadReal::frac(1, 2) + QuadReal::frac(3, 4) * QuadReal::sqrt(5)
        );
        assert_eq!(parse_quad("(1+sqrt(5))/2").unwrap(), (QuadReal::one() + QuadReal::sqrt(5)) / QuadReal::from_int(2));
        assert_eq!(parse_quad("3-2sqrt2").unwrap(), QuadReal::from_int(3) - QuadReal::sqrt(2) * QuadReal::from_int(2));
        assert_eq!(parse_quad("0.25").unwrap(), QuadReal::frac(1, 4));
        assert_eq!(parse_quad("sqrt(9)").unwrap(), QuadReal::from_int(3));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_quad("1+"), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse_quad("sqrt(1/2)"), Err(ParseError::BadRadicand(_))));
        assert!(matches!(parse_quad("sqrt2+sqrt3"), Err(ParseError::Arith(QfieldError::IncompatibleField(..)))));
        assert!(matches!(parse_quad("1/0"), Err(ParseError::Arith(QfieldError::DivByZero))));
        assert!(parse_quad("x").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3+2*sqrt(2)", "-sqrt(5)", "1/2-3/4*sqrt(5)", "-7/3", "0"] {
            let q = parse_quad(s).unwrap();
            assert_eq!(parse_quad(&render(&q)).unwrap(), q);
        }
    }

    #[test]
    fn lists_intervals_ranges() {
        let v = parse_quad_list("1,sqrt2,(1+sqrt(2))/2").unwrap();
        assert_eq!(v.len(), 3);
        let iv = parse_interval("(-1, 0]").unwrap();
        assert!(!iv.lo_closed && iv.hi_closed);
        assert!(iv.contains(&QuadReal::zero()));
        assert!(parse_interval("-1,0").is_err());
        assert_eq!(parse_range("-500:500").unwrap(), (-500, 500));
        assert!(parse_range("5:10").is_err());
        assert_eq!(parse_param("0.5", Some(1e-9)).unwrap(), RealParam::Approx { value: 0.5, tolerance: 1e-9 });
    }
}
