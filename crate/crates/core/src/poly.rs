//! The polynomial ring `A = F_q[t]`.
//!
//! [`PolyA`] is a plain little-endian coefficient vector; all arithmetic goes
//! through a [`PolyRing`], which owns the coefficient field.

use std::fmt;

use thiserror::Error;

use crate::field::{FieldDesc, Fq};

/// Position-tagged parse failure; `offset` is a byte offset into the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("modulus is the zero polynomial")]
    ZeroModulus,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Element of `F_q[t]`. No trailing zero coefficients; the zero polynomial is
/// the empty vector and has no degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct PolyA {
    coeffs: Vec<Fq>,
}

impl PolyA {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self {
            coeffs: vec![Fq::ONE],
        }
    }

    /// `t`
    pub fn t() -> Self {
        Self {
            coeffs: vec![Fq::ZERO, Fq::ONE],
        }
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = Fq::ONE;
        Self { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fq::ONE]
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }
}

/// Arithmetic context for `F_q[t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: FieldDesc,
}

impl PolyRing {
    pub fn new(field: FieldDesc) -> Self {
        Self { field }
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn add(&self, a: &PolyA, b: &PolyA) -> PolyA {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        PolyA::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &PolyA) -> PolyA {
        PolyA::from_coeffs(a.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &PolyA, b: &PolyA) -> PolyA {
        let f = &self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        PolyA::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn scale(&self, a: &PolyA, c: Fq) -> PolyA {
        PolyA::from_coeffs(a.coeffs.iter().map(|&x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &PolyA, b: &PolyA) -> PolyA {
        if a.is_zero() || b.is_zero() {
            return PolyA::zero();
        }
        let f = &self.field;
        let mut out = vec![Fq::ZERO; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        PolyA::from_coeffs(out)
    }

    pub fn divrem(&self, a: &PolyA, b: &PolyA) -> Result<(PolyA, PolyA), PolyError> {
        let db = b.degree().ok_or(PolyError::ZeroModulus)?;
        let f = &self.field;
        let lead_inv = f.inv(b.coeffs[db]).expect("nonzero leading coefficient");
        let mut rem = a.coeffs.clone();
        if rem.len() <= db {
            return Ok((PolyA::zero(), a.clone()));
        }
        let mut quot = vec![Fq::ZERO; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let k = f.mul(c, lead_inv);
            quot[i - db] = k;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[i - db + j] = f.sub(rem[i - db + j], f.mul(k, bj));
            }
        }
        rem.truncate(db);
        Ok((PolyA::from_coeffs(quot), PolyA::from_coeffs(rem)))
    }

    pub fn rem(&self, a: &PolyA, m: &PolyA) -> Result<PolyA, PolyError> {
        Ok(self.divrem(a, m)?.1)
    }

    pub fn make_monic(&self, a: &PolyA) -> PolyA {
        match a.leading() {
            None => PolyA::zero(),
            Some(c) => self.scale(a, self.field.inv(c).expect("nonzero")),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &PolyA, b: &PolyA) -> PolyA {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.make_monic(&x)
    }

    pub fn mulmod(&self, a: &PolyA, b: &PolyA, m: &PolyA) -> Result<PolyA, PolyError> {
        if m.is_zero() {
            return Err(PolyError::ZeroModulus);
        }
        self.rem(&self.mul(a, b), m)
    }

    /// `a^n mod m` by square-and-multiply.
    pub fn powmod(&self, a: &PolyA, mut n: u64, m: &PolyA) -> Result<PolyA, PolyError> {
        let mut base = self.rem(a, m)?;
        let mut acc = self.rem(&PolyA::one(), m)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mulmod(&acc, &base, m)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.mulmod(&base, &base, m)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &PolyA, n: u32) -> PolyA {
        (0..n).fold(PolyA::one(), |acc, _| self.mul(&acc, a))
    }

    /// `a(t)^q`, which over `F_q` is `a(t^q)`.
    pub fn frobenius(&self, a: &PolyA) -> PolyA {
        let q = self.field.q() as usize;
        if a.is_zero() {
            return PolyA::zero();
        }
        let mut out = vec![Fq::ZERO; (a.coeffs.len() - 1) * q + 1];
        for (i, &c) in a.coeffs.iter().enumerate() {
            out[i * q] = c;
        }
        PolyA::from_coeffs(out)
    }

    pub fn eval(&self, a: &PolyA, x: Fq) -> Fq {
        let f = &self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// Rabin's test: `f | t^{q^n} - t` and `gcd(t^{q^{n/r}} - t, f) = 1` for
    /// each prime `r | n`. Constants and zero are not irreducible.
    pub fn is_irreducible(&self, f: &PolyA) -> bool {
        let n = match f.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.make_monic(f);
        let q = self.field.q() as u64;
        let t = PolyA::t();
        // frob[k] = t^{q^k} mod f
        let mut frob = Vec::with_capacity(n + 1);
        frob.push(self.rem(&t, &f).expect("nonzero"));
        for k in 1..=n {
            let next = self.powmod(&frob[k - 1], q, &f).expect("nonzero");
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        prime_divisors(n).into_iter().all(|r| {
            let g = self.gcd(&self.sub(&frob[n / r], &t), &f);
            g.is_one()
        })
    }

    /// Monic polynomials of degree `d`, in lexicographic order of their
    /// little-endian coefficient sequences, optionally filtered to those
    /// coprime to `coprime_to`.
    pub fn monic_enum<'a>(&'a self, d: usize, coprime_to: Option<&'a PolyA>) -> MonicIter<'a> {
        MonicIter {
            ring: self,
            digits: vec![0; d],
            done: false,
            coprime_to,
        }
    }

    /// Encodes the first `len` coefficients as `sum c_i.index() * q^i`.
    pub fn to_index(&self, a: &PolyA) -> u64 {
        let q = self.field.q() as u64;
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, c| acc * q + c.index() as u64)
    }

    pub fn from_index(&self, mut idx: u64) -> PolyA {
        let q = self.field.q() as u64;
        let mut coeffs = Vec::new();
        while idx > 0 {
            coeffs.push(
                self.field
                    .from_index((idx % q) as u32)
                    .expect("digit below q"),
            );
            idx /= q;
        }
        PolyA::from_coeffs(coeffs)
    }

    pub fn parse(&self, text: &str) -> Result<PolyA, ParseError> {
        self.parse_in(text, 't')
    }

    /// Parses with an arbitrary single-character variable name.
    pub fn parse_in(&self, text: &str, var: char) -> Result<PolyA, ParseError> {
        Parser {
            ring: self,
            src: text,
            pos: 0,
            var,
        }
        .poly()
    }

    pub fn render(&self, a: &PolyA) -> String {
        self.render_in(a, 't')
    }

    /// Canonical form: descending powers, no zero terms, no coefficient 1
    /// in front of the variable.
    pub fn render_in(&self, a: &PolyA, var: char) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (k, &c) in a.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let coeff = self.field.render(c);
            terms.push(match (k, c == Fq::ONE) {
                (0, _) => coeff,
                (_, true) => mono,
                (_, false) => format!("{coeff}*{mono}"),
            });
        }
        terms.join("+")
    }

    pub fn display<'a>(&'a self, a: &'a PolyA) -> impl fmt::Display + 'a {
        struct D<'a>(&'a PolyRing, &'a PolyA);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, a)
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut r = 2;
    while r * r <= n {
        if n.is_multiple_of(r) {
            out.push(r);
            while n.is_multiple_of(r) {
                n /= r;
            }
        }
        r += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub struct MonicIter<'a> {
    ring: &'a PolyRing,
    /// Lower coefficients c_0..c_{d-1}; c_{d-1} varies fastest.
    digits: Vec<u32>,
    done: bool,
    coprime_to: Option<&'a PolyA>,
}

impl Iterator for MonicIter<'_> {
    type Item = PolyA;

    fn next(&mut self) -> Option<PolyA> {
        let q = self.ring.field.q();
        loop {
            if self.done {
                return None;
            }
            let mut coeffs: Vec<Fq> = self
                .digits
                .iter()
                .map(|&d| self.ring.field.from_index(d).expect("digit below q"))
                .collect();
            coeffs.push(Fq::ONE);
            let poly = PolyA::from_coeffs(coeffs);

            let mut i = self.digits.len();
            loop {
                if i == 0 {
                    self.done = true;
                    break;
                }
                i -= 1;
                self.digits[i] += 1;
                if self.digits[i] < q {
                    break;
                }
                self.digits[i] = 0;
            }

            match self.coprime_to {
                Some(g) if !self.ring.gcd(&poly, g).is_one() => continue,
                _ => return Some(poly),
            }
        }
    }
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a str,
    pos: usize,
    var: char,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a decimal number");
        }
        let digits = &self.src[start..self.pos];
        digits.parse::<u64>().or_else(|_| {
            self.pos = start;
            self.err("number out of range")
        })
    }

    fn coefficient(&mut self) -> Result<Fq, ParseError> {
        let field = self.ring.field();
        if self.eat('[') {
            let start = self.pos;
            let mut coords = vec![self.number()?];
            while self.eat(',') {
                coords.push(self.number()?);
            }
            if !self.eat(']') {
                return self.err("expected ']'");
            }
            if coords.iter().any(|&c| c >= field.p() as u64) {
                self.pos = start;
                return self.err(format!("coordinate digits must be below {}", field.p()));
            }
            match field.from_coords(&coords) {
                Some(c) => Ok(c),
                None => {
                    self.pos = start;
                    self.err(format!("at most {} coordinates allowed", field.e()))
                }
            }
        } else {
            let n = self.number()?;
            Ok(field.from_int((n % field.p() as u64) as i64))
        }
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if self.eat('^') {
            let start = self.pos;
            let k = self.number()?;
            usize::try_from(k)
                .ok()
                .filter(|&k| k <= 1 << 20)
                .map_or_else(
                    || {
                        self.pos = start;
                        self.err("exponent too large")
                    },
                    Ok,
                )
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<PolyA, ParseError> {
        self.skip_ws();
        let (coeff, k) = if self.eat(self.var) {
            (Fq::ONE, self.exponent()?)
        } else if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '[') {
            let c = self.coefficient()?;
            if self.eat('*') {
                if !self.eat(self.var) {
                    return self.err(format!("expected '{}'", self.var));
                }
                (c, self.exponent()?)
            } else {
                (c, 0)
            }
        } else {
            return self.err(format!("expected a coefficient or '{}'", self.var));
        };
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = coeff;
        Ok(PolyA::from_coeffs(coeffs))
    }

    fn poly(mut self) -> Result<PolyA, ParseError> {
        let mut acc = self.term()?;
        while self.eat('+') {
            let t = self.term()?;
            acc = self.ring.add(&acc, &t);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.err("unexpected trailing input");
        }
        Ok(acc)
    }
}
