//! Text grammar:
//!
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := [coeff] ("*"? factor)*
//! factor := name ("^" uint)?
//! coeff  := int ("/" uint)?
//! ```
//!
//! Whitespace is ignored everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{PolyError, VariableTable, WeightedPolynomial};

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> PolyError {
        PolyError::Syntax { position: self.pos, message: message.into() }
    }

    fn digits(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|e| self.err(e.to_string()))
    }

    fn name(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii name")
    }
}

pub(super) fn parse(text: &str, table: &VariableTable) -> Result<WeightedPolynomial, PolyError> {
    let mut cur = Cursor { bytes: text.as_bytes(), pos: 0 };
    let mut terms: Vec<(Vec<u32>, BigRational)> = Vec::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match cur.peek() {
            None if first => return Err(cur.err("empty polynomial")),
            None => break,
            Some(b'+') => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                sign = -sign;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("expected '+' or '-', found '{}'", c as char))),
        }
        first = false;
        let (exps, coeff) = parse_term(&mut cur, table)?;
        terms.push((exps, sign * coeff));
    }
    WeightedPolynomial::from_terms(table, terms)
}

fn parse_term(cur: &mut Cursor<'_>, table: &VariableTable) -> Result<(Vec<u32>, BigRational), PolyError> {
    let mut exps = vec![0u32; table.len()];
    let mut coeff = BigRational::one();
    let mut seen_any = false;
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        let num = cur.digits()?;
        let mut den = BigInt::one();
        if cur.peek() == Some(b'/') {
            cur.pos += 1;
            den = cur.digits()?;
            if den.is_zero() {
                return Err(cur.err("zero denominator"));
            }
        }
        coeff = BigRational::new(num, den);
        seen_any = true;
    }
    loop {
        let save = cur.pos;
        let star = cur.peek() == Some(b'*');
        if star {
            cur.pos += 1;
        }
        match cur.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let at = cur.pos;
                let name = cur.name();
                let idx = table
                    .index_of(name)
                    .ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), position: at })?;
                let mut e = 1u32;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    let d = cur.digits()?;
                    e = u32::try_from(d).map_err(|_| cur.err("exponent too large"))?;
                }
                exps[idx] = exps[idx].checked_add(e).ok_or(PolyError::ExponentOverflow)?;
                seen_any = true;
            }
            _ if star => return Err(cur.err("expected a variable after '*'")),
            _ => {
                cur.pos = save;
                break;
            }
        }
    }
    if !seen_any {
        return Err(cur.err("expected a coefficient or variable"));
    }
    Ok((exps, coeff))
}
