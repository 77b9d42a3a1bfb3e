//! Polynomial maps from the rational base `Q^m` into `k x k` matrices.
//!
//! Coefficient fields of forms and gauge fields are built from these. They
//! are evaluated at Weil-valued points, which is what makes first-order
//! (directional) information visible to the operators.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::weil::{WeilElement, WeilMatrix};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("variable x{index} is out of range for a {nvars}-dimensional base")]
    VariableRange { index: usize, nvars: usize },
    #[error("expected a {expected}x{expected} matrix, found {found} rows/entries")]
    Shape { expected: usize, found: usize },
}

/// Polynomial in `x1..xm` with rational coefficients. Keys are exponent
/// vectors of length `m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    /// The coordinate function `x_{index+1}` (0-based `index`).
    pub fn variable(nvars: usize, index: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(exps, BigRational::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|x| *x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn add_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), x * c);
        }
        out
    }

    /// Partial derivative with respect to `x_{var+1}`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[var])));
        }
        out
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, p) in point.iter().zip(e) {
                for _ in 0..*p {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Evaluates at a Weil-valued point.
    pub fn eval(&self, point: &[WeilElement]) -> WeilElement {
        assert_eq!(point.len(), self.nvars, "point dimension");
        let mut powers: Vec<Vec<WeilElement>> = point.iter().map(|x| vec![WeilElement::one(), x.clone()]).collect();
        let mut acc = WeilElement::zero();
        for (e, c) in &self.terms {
            let mut t = WeilElement::constant(c.clone());
            for (v, p) in e.iter().enumerate() {
                let p = *p as usize;
                while powers[v].len() <= p {
                    let next = &powers[v][powers[v].len() - 1] * &point[v];
                    powers[v].push(next);
                }
                if p > 0 {
                    t = &t * &powers[v][p];
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Parses expressions such as `3/2*x1^2*x2 - x1 + 5`.
    pub fn parse(input: &str, nvars: usize) -> Result<Self, PolyError> {
        Parser::new(input, nvars).parse()
    }

    /// Random polynomial of total degree at most `max_degree` with integer
    /// coefficients in `[-bound, bound]`.
    pub fn random<R: Rng>(rng: &mut R, nvars: usize, max_degree: u32, bound: i64) -> Self {
        let mut p = Self::zero(nvars);
        let nterms = rng.gen_range(1..=3);
        for _ in 0..nterms {
            let mut exps = vec![0u32; nvars];
            let deg = rng.gen_range(0..=max_degree);
            for _ in 0..deg {
                exps[rng.gen_range(0..nvars)] += 1;
            }
            let c = rng.gen_range(-bound..=bound);
            p.add_term(exps, BigRational::from_integer(BigInt::from(c)));
        }
        p
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let abs = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, p)| **p > 0)
                .map(|(i, p)| if *p == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, p) })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, nvars: usize) -> Self {
        Self {
            input,
            chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            nvars,
        }
    }

    fn err(&self, reason: impl Into<String>) -> PolyError {
        PolyError::Parse {
            input: self.input.to_string(),
            reason: reason.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(mut self) -> Result<Polynomial, PolyError> {
        if self.chars.is_empty() {
            return Err(self.err("empty expression"));
        }
        let mut out = Polynomial::zero(self.nvars);
        let mut first = true;
        while self.peek().is_some() {
            let mut sign = BigRational::one();
            match self.peek() {
                Some('+') => self.pos += 1,
                Some('-') => {
                    sign = -sign;
                    self.pos += 1;
                }
                _ if !first => return Err(self.err(format!("expected '+' or '-' at {}", self.pos))),
                _ => {}
            }
            first = false;
            let (exps, c) = self.term()?;
            out.add_term(exps, c * sign);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Vec<u32>, BigRational), PolyError> {
        let mut exps = vec![0u32; self.nvars];
        let mut coeff = BigRational::one();
        loop {
            match self.peek() {
                Some('x') => {
                    self.pos += 1;
                    let idx = self.integer()?;
                    if idx == 0 || idx > self.nvars as u64 {
                        return Err(PolyError::VariableRange {
                            index: idx as usize,
                            nvars: self.nvars,
                        });
                    }
                    let mut p = 1;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        p = self.integer()? as u32;
                    }
                    exps[idx as usize - 1] += p;
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.big_integer()?;
                    let mut r = BigRational::from_integer(num);
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let den = self.big_integer()?;
                        if den.is_zero() {
                            return Err(self.err("zero denominator"));
                        }
                        r /= BigRational::from_integer(den);
                    }
                    coeff *= r;
                }
                _ => return Err(self.err(format!("unexpected token at {}", self.pos))),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((exps, coeff));
            }
        }
    }

    fn digits(&mut self) -> Result<String, PolyError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected digits at {start}")));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let s = self.digits()?;
        s.parse().map_err(|_| self.err("integer too large"))
    }

    fn big_integer(&mut self) -> Result<BigInt, PolyError> {
        let s = self.digits()?;
        BigInt::from_str(&s).map_err(|_| self.err("bad integer"))
    }
}

/// A `k x k` matrix of polynomials on `Q^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixField {
    nvars: usize,
    size: usize,
    entries: Vec<Polynomial>,
}

impl MatrixField {
    pub fn new(nvars: usize, size: usize, entries: Vec<Polynomial>) -> Result<Self, PolyError> {
        if entries.len() != size * size {
            return Err(PolyError::Shape {
                expected: size,
                found: entries.len(),
            });
        }
        Ok(Self { nvars, size, entries })
    }

    pub fn constant(nvars: usize, rows: &[Vec<BigRational>]) -> Self {
        let size = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().map(|c| Polynomial::constant(nvars, c.clone())))
            .collect();
        Self { nvars, size, entries }
    }

    pub fn zero(nvars: usize, size: usize) -> Self {
        Self {
            nvars,
            size,
            entries: vec![Polynomial::zero(nvars); size * size],
        }
    }

    pub fn identity(nvars: usize, size: usize) -> Self {
        let mut f = Self::zero(nvars, size);
        for i in 0..size {
            f.entries[i * size + i] = Polynomial::constant(nvars, BigRational::one());
        }
        f
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.size + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, p: Polynomial) {
        self.entries[row * self.size + col] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(Polynomial::is_constant)
    }

    pub fn eval(&self, point: &[WeilElement]) -> WeilMatrix {
        let entries = self.entries.iter().map(|p| p.eval(point)).collect();
        WeilMatrix::from_entries(self.size, entries).expect("square field")
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Vec<BigRational> {
        self.entries.iter().map(|p| p.eval_rational(point)).collect()
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self {
            nvars: self.nvars,
            size: self.size,
            entries: self.entries.iter().map(|p| p.derivative(var)).collect(),
        }
    }

    pub fn parse(rows: &[Vec<String>], nvars: usize) -> Result<Self, PolyError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for r in rows {
            if r.len() != size {
                return Err(PolyError::Shape {
                    expected: size,
                    found: r.len(),
                });
            }
            for s in r {
                entries.push(Polynomial::parse(s, nvars)?);
            }
        }
        Ok(Self { nvars, size, entries })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.entry(i, j).to_string()).collect())
            .collect()
    }

    pub fn random<R: Rng>(rng: &mut R, nvars: usize, size: usize, max_degree: u32, bound: i64) -> Self {
        let entries = (0..size * size)
            .map(|_| Polynomial::random(rng, nvars, max_degree, bound))
            .collect();
        Self { nvars, size, entries }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weil::GeneratorContext;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_display_round_trip() {
        let p = Polynomial::parse("3/2*x1^2*x2 - x1 + 5", 2).unwrap();
        assert_eq!(p.eval_rational(&[q(2, 1), q(1, 1)]), q(6 - 2 + 5, 1));
        assert_eq!(Polynomial::parse(&p.to_string(), 2).unwrap(), p);
        assert_eq!(Polynomial::parse("-x2", 2).unwrap().to_string(), "-x2");
        assert_eq!(Polynomial::parse("0", 1).unwrap(), Polynomial::zero(1));
    }

    #[test]
    fn parse_errors() {
        assert!(Polynomial::parse("", 1).is_err());
        assert!(Polynomial::parse("x3", 2).is_err());
        assert!(Polynomial::parse("x1 x2", 2).is_err());
        assert!(Polynomial::parse("1/0", 2).is_err());
        assert!(Polynomial::parse("2**x1", 2).is_err());
    }

    #[test]
    fn weil_evaluation_is_taylor_expansion() {
        // f(x) = x^2 at 1 + d is 1 + 2d
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let f = Polynomial::parse("x1^2", 1).unwrap();
        let v = f.eval(&[WeilElement::one() + d.clone()]);
        assert_eq!(v, WeilElement::one() + d.scale(&q(2, 1)));
    }

    #[test]
    fn derivative_of_monomials() {
        let p = Polynomial::parse("x1^3*x2 + 4*x2", 2).unwrap();
        assert_eq!(p.derivative(0), Polynomial::parse("3*x1^2*x2", 2).unwrap());
        assert_eq!(p.derivative(1), Polynomial::parse("x1^3 + 4", 2).unwrap());
    }
}
