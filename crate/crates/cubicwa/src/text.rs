//! The polynomial text grammar: terms joined by `+`/`-`, a term being
//! `coeff`, `coeff*mono` or `mono`, a monomial a `*`-product of
//! `x<idx>^<pow>` with 1-based indices, coefficients integers or `p/q`.

use std::fmt::Write;

use cubicwa_core::{Poly, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A malformed input, located by byte offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    /// 1-based line and column of the offset in `src`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let before = &src[..self.offset.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
        (line, col)
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn offset(&self) -> usize {
        self.base + self.pos
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ParseError::new(self.offset(), "expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }

    fn small(&mut self, what: &str) -> Result<u32, ParseError> {
        let at = self.offset();
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| ParseError::new(at, format!("{what} {d} is too large")))
    }

    fn coefficient(&mut self) -> Result<Rat, ParseError> {
        let num: BigInt = self.digits()?.parse().expect("digits");
        if self.eat(b'/') {
            let den_at = self.offset();
            let den: BigInt = self.digits()?.parse().expect("digits");
            if den.is_zero() {
                return Err(ParseError::new(den_at, "zero denominator"));
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }

    /// `x<idx>[^<pow>]`, returning the 0-based index.
    fn factor(&mut self) -> Result<(usize, u32), ParseError> {
        let at = self.offset();
        if !self.eat(b'x') {
            return Err(ParseError::new(at, "expected a variable x<index>"));
        }
        let idx_at = self.offset();
        let idx = self.small("variable index")?;
        if idx == 0 {
            return Err(ParseError::new(idx_at, "variable indices start at 1"));
        }
        let pow = if self.eat(b'^') { self.small("exponent")? } else { 1 };
        Ok((idx as usize - 1, pow))
    }
}

/// Parses a polynomial. With `nvars` given every index must be at most
/// `nvars`; otherwise the largest index used sets the variable count.
pub fn parse_poly(src: &str, nvars: Option<usize>) -> Result<Poly, ParseError> {
    parse_poly_at(src, 0, nvars)
}

pub(crate) fn parse_poly_at(src: &str, base: usize, nvars: Option<usize>) -> Result<Poly, ParseError> {
    let mut lx = Lexer {
        src: src.as_bytes(),
        pos: 0,
        base,
    };
    let mut terms: Vec<(Vec<(usize, u32)>, Rat, usize)> = Vec::new();
    if lx.peek().is_none() {
        return Err(ParseError::new(lx.offset(), "empty polynomial"));
    }
    let mut first = true;
    loop {
        lx.skip_ws();
        let sign_at = lx.offset();
        let negative = if lx.eat(b'-') {
            true
        } else if lx.eat(b'+') {
            if first {
                return Err(ParseError::new(sign_at, "leading '+'"));
            }
            false
        } else if first {
            false
        } else {
            return Err(ParseError::new(lx.offset(), "expected '+' or '-'"));
        };
        first = false;
        lx.skip_ws();
        let at = lx.offset();
        let mut coeff = Rat::one();
        let mut factors = Vec::new();
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                coeff = lx.coefficient()?;
                if lx.eat(b'*') {
                    factors.push(lx.factor()?);
                }
            }
            Some(b'x') => factors.push(lx.factor()?),
            Some(_) => return Err(ParseError::new(at, "expected a coefficient or a variable")),
            None => return Err(ParseError::new(at, "expected a term")),
        }
        if !factors.is_empty() {
            while lx.eat(b'*') {
                factors.push(lx.factor()?);
            }
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((factors, coeff, at));
        if lx.peek().is_none() {
            break;
        }
    }
    let used = terms
        .iter()
        .flat_map(|(f, _, _)| f.iter().map(|&(i, _)| i + 1))
        .max()
        .unwrap_or(0);
    let n = match nvars {
        Some(n) => {
            if let Some((_, _, at)) = terms.iter().find(|(f, _, _)| f.iter().any(|&(i, _)| i >= n)) {
                return Err(ParseError::new(*at, format!("variable index exceeds {n}")));
            }
            n
        }
        None => used,
    };
    let mut p = Poly::zero(n);
    for (factors, coeff, at) in terms {
        let mut e = vec![0u32; n];
        for (i, k) in factors {
            e[i] = e[i]
                .checked_add(k)
                .ok_or_else(|| ParseError::new(at, "exponent overflow"))?;
        }
        p.add_term(e, coeff);
    }
    Ok(p)
}

/// `p` or `p/q` in lowest terms.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `[-]p` or `[-]p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let t = s.trim();
    let lead = s.len() - s.trim_start().len();
    let (neg, body, off) = match t.strip_prefix('-') {
        Some(rest) => (true, rest, lead + 1),
        None => (false, t, lead),
    };
    let mut lx = Lexer {
        src: body.as_bytes(),
        pos: 0,
        base: off,
    };
    let r = lx.coefficient()?;
    if lx.peek().is_some() {
        return Err(ParseError::new(lx.offset(), "trailing characters after number"));
    }
    Ok(if neg { -r } else { r })
}

/// Comma-separated rationals, optionally in parentheses.
pub fn parse_vector(s: &str) -> Result<Vec<Rat>, ParseError> {
    let lead = s.len() - s.trim_start().len();
    let mut t = s.trim();
    let mut base = lead;
    if let Some(inner) = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        t = inner;
        base += 1;
    }
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        out.push(parse_rat(part).map_err(|e| ParseError::new(base + e.offset, e.message))?);
        base += part.len() + 1;
    }
    Ok(out)
}

pub fn format_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(format_rat).collect();
    format!("({})", parts.join(", "))
}

/// Canonical text: graded lexicographic order, variables named
/// `<prefix><idx>`.
pub fn format_poly_with(p: &Poly, prefix: &str) -> String {
    let mut out = String::new();
    for (k, (e, c)) in p.sorted_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        let mono: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(i, &d)| if d == 1 { format!("{prefix}{}", i + 1) } else { format!("{prefix}{}^{d}", i + 1) })
            .collect();
        if mono.is_empty() {
            out.push_str(&format_rat(&a));
        } else {
            if !a.is_one() {
                let _ = write!(out, "{}*", format_rat(&a));
            }
            out.push_str(&mono.join("*"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn format_poly(p: &Poly) -> String {
    format_poly_with(p, "x")
}
