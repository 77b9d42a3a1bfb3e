//! Elements of the algebra generated by finitely many square-zero generators.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::{ResidueError, WeilError};

static NEXT_CONTEXT: AtomicU32 = AtomicU32::new(1);

/// Allocator of square-zero generators.
///
/// Generators are handed out monotonically and never reused, so every
/// element built from one context lives in a single (growing) Weil algebra.
/// Allocation is an atomic increment and may happen from several threads.
#[derive(Debug)]
pub struct GeneratorContext {
    id: u32,
    next: AtomicU32,
}

impl Default for GeneratorContext {
    fn default() -> Self {
        Self::new()
    }
}

impl GeneratorContext {
    pub fn new() -> Self {
        Self {
            id: NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed),
            next: AtomicU32::new(0),
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    /// Allocates a generator that no existing element of this context uses.
    pub fn fresh(&self) -> Generator {
        Generator {
            ctx: self.id,
            index: self.next.fetch_add(1, Ordering::Relaxed),
        }
    }

    pub fn fresh_many(&self, n: usize) -> Vec<Generator> {
        (0..n).map(|_| self.fresh()).collect()
    }

    /// Marks indices below `upto` as used. Needed when elements are loaded
    /// from a file that already names generators.
    pub fn reserve(&self, upto: u32) {
        self.next.fetch_max(upto, Ordering::Relaxed);
    }

    /// Returns the generator with an explicit index, reserving it.
    pub fn generator(&self, index: u32) -> Generator {
        self.reserve(index + 1);
        Generator { ctx: self.id, index }
    }

    pub fn allocated(&self) -> u32 {
        self.next.load(Ordering::Relaxed)
    }
}

/// A square-zero generator `d` with `d * d = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    ctx: u32,
    index: u32,
}

impl Generator {
    pub fn index(self) -> u32 {
        self.index
    }

    pub fn context(self) -> u32 {
        self.ctx
    }
}

/// A square-free product of generators, stored as a sorted index set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(SmallVec<[u32; 6]>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(SmallVec::new())
    }

    /// Builds a monomial from indices; duplicates collapse.
    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        let mut v: SmallVec<[u32; 6]> = indices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }

    pub fn of(gens: &[Generator]) -> Self {
        Self::from_indices(gens.iter().map(|g| g.index))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, index: u32) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    pub fn is_superset_of(&self, other: &Monomial) -> bool {
        other.0.iter().all(|i| self.contains(*i))
    }

    /// Product of two monomials, or `None` when they share a generator.
    pub fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => return None,
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some(Monomial(out))
    }

    /// Set difference `self \ other`.
    pub fn without(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().copied().filter(|i| !other.contains(*i)).collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (n, i) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, "*")?;
            }
            write!(f, "d{i}")?;
        }
        Ok(())
    }
}

/// Binary ring operations accepted by [`ring_combine`].
#[derive(Clone, Debug, PartialEq)]
pub enum RingOp {
    Add,
    Sub,
    Mul,
    /// Scales the left operand by a rational; the right operand is ignored.
    Scale(BigRational),
}

/// A polynomial over square-zero generators with exact rational
/// coefficients. Zero coefficients are never stored, so structural
/// equality is algebraic equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeilElement {
    // Context of the generators used, `None` for pure constants.
    ctx: Option<u32>,
    terms: BTreeMap<Monomial, BigRational>,
}

fn join_ctx(a: Option<u32>, b: Option<u32>) -> Result<Option<u32>, WeilError> {
    match (a, b) {
        (Some(x), Some(y)) if x != y => Err(WeilError::ContextMismatch(x, y)),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x)),
        (None, None) => Ok(None),
    }
}

impl WeilElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut e = Self::zero();
        if !c.is_zero() {
            e.terms.insert(Monomial::unit(), c);
        }
        e
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn generator(g: Generator) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::from_indices([g.index]), BigRational::one());
        Self {
            ctx: Some(g.ctx),
            terms,
        }
    }

    /// The product of the given generators (the unit for an empty slice).
    pub fn product_of(gens: &[Generator]) -> Self {
        if gens.is_empty() {
            return Self::one();
        }
        let ctx = gens[0].ctx;
        assert!(gens.iter().all(|g| g.ctx == ctx), "mixed generator contexts");
        let mut e = Self::zero();
        let m = Monomial::of(gens);
        if m.degree() == gens.len() {
            e.terms.insert(m, BigRational::one());
            e.ctx = Some(ctx);
        }
        e
    }

    /// Builds an element from raw terms over the given context.
    pub fn from_terms<I>(ctx: Option<u32>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, BigRational)>,
    {
        let mut e = Self {
            ctx,
            terms: BTreeMap::new(),
        };
        for (m, c) in terms {
            e.add_term(m, c);
        }
        e.normalize_ctx();
        e
    }

    pub fn context(&self) -> Option<u32> {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Monomial::unit())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    /// Nilpotent elements are exactly those with zero constant term.
    pub fn is_nilpotent(&self) -> bool {
        self.constant_term().is_zero()
    }

    pub fn squares_to_zero(&self) -> bool {
        self.mul(self).is_zero()
    }

    /// Largest generator index used, if any.
    pub fn max_index(&self) -> Option<u32> {
        self.terms.keys().filter_map(|m| m.indices().last().copied()).max()
    }

    pub fn uses_index(&self, index: u32) -> bool {
        self.terms.keys().any(|m| m.contains(index))
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn normalize_ctx(&mut self) {
        if self.is_constant() {
            self.ctx = None;
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, WeilError> {
        let ctx = join_ctx(self.ctx, other.ctx)?;
        let mut out = self.clone();
        out.ctx = ctx;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out.normalize_ctx();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, WeilError> {
        let ctx = join_ctx(self.ctx, other.ctx)?;
        let mut out = self.clone();
        out.ctx = ctx;
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out.normalize_ctx();
        Ok(out)
    }

    /// Product; monomials sharing a generator annihilate.
    pub fn try_mul(&self, other: &Self) -> Result<Self, WeilError> {
        let ctx = join_ctx(self.ctx, other.ctx)?;
        let mut out = Self {
            ctx,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some(m) = ma.mul(mb) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out.normalize_ctx();
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Image under the algebra morphism sending each generator in `map` to
    /// its image and fixing all others. Each image must square to zero.
    pub fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Self, WeilError> {
        let mut by_index: BTreeMap<u32, &WeilElement> = BTreeMap::new();
        let mut ctx = self.ctx;
        for (g, img) in map {
            if let Some(c) = self.ctx {
                if g.ctx != c {
                    return Err(WeilError::ContextMismatch(c, g.ctx));
                }
            }
            if !img.squares_to_zero() {
                return Err(WeilError::NotSquareZero(g.index));
            }
            ctx = join_ctx(ctx, img.ctx)?;
            by_index.insert(g.index, img);
        }
        let mut out = Self {
            ctx,
            terms: BTreeMap::new(),
        };
        for (m, c) in &self.terms {
            let mut kept = SmallVec::<[u32; 6]>::new();
            let mut factor = Self::constant(c.clone());
            for i in m.indices() {
                match by_index.get(i) {
                    Some(img) => factor = factor.try_mul(img)?,
                    None => kept.push(*i),
                }
                if factor.is_zero() {
                    break;
                }
            }
            for (fm, fc) in factor.terms {
                if let Some(prod) = fm.mul(&Monomial(kept.clone())) {
                    out.add_term(prod, fc);
                }
            }
        }
        out.normalize_ctx();
        Ok(out)
    }

    /// Returns `c` with `self = c * m`, where `c` does not involve the
    /// generators of `m`. Coefficients of `c` may still involve other
    /// (ambient) generators.
    pub fn factor_out(&self, m: &Monomial) -> Result<Self, ResidueError> {
        let mut out = Self {
            ctx: self.ctx,
            terms: BTreeMap::new(),
        };
        for (mono, c) in &self.terms {
            if !mono.is_superset_of(m) {
                return Err(ResidueError {
                    target: m.clone(),
                    residue: mono.clone(),
                });
            }
            out.terms.insert(mono.without(m), c.clone());
        }
        out.normalize_ctx();
        Ok(out)
    }

    /// Returns the rational `c` with `self = c * m` exactly.
    pub fn factor_top(&self, m: &Monomial) -> Result<BigRational, ResidueError> {
        match self.terms.iter().find(|(mono, _)| *mono != m) {
            Some((mono, _)) => Err(ResidueError {
                target: m.clone(),
                residue: mono.clone(),
            }),
            None => Ok(self.coeff(m)),
        }
    }

    /// Splits `self = sum_S (prod_{s in S} gens[s]) * c_S` with each `c_S`
    /// free of `gens`. Entry `S` of the result is indexed by the bitmask of
    /// positions in `gens`.
    pub fn split_by(&self, gens: &[Generator]) -> Vec<WeilElement> {
        let mut parts = vec![WeilElement::zero(); 1 << gens.len()];
        for (mono, c) in &self.terms {
            let mut mask = 0usize;
            let mut rest = SmallVec::<[u32; 6]>::new();
            for i in mono.indices() {
                match gens.iter().position(|g| g.index == *i) {
                    Some(p) => mask |= 1 << p,
                    None => rest.push(*i),
                }
            }
            parts[mask].ctx = self.ctx;
            parts[mask].add_term(Monomial(rest), c.clone());
        }
        for p in &mut parts {
            p.normalize_ctx();
        }
        parts
    }
}

/// Applies one ring operation, rejecting operands from different contexts.
pub fn ring_combine(a: &WeilElement, b: &WeilElement, op: RingOp) -> Result<WeilElement, WeilError> {
    match op {
        RingOp::Add => a.try_add(b),
        RingOp::Sub => a.try_sub(b),
        RingOp::Mul => a.try_mul(b),
        RingOp::Scale(c) => Ok(a.scale(&c)),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&WeilElement> for &WeilElement {
            type Output = WeilElement;
            fn $method(self, rhs: &WeilElement) -> WeilElement {
                self.$try(rhs).expect("weil operands from different contexts")
            }
        }
        impl $trait<WeilElement> for WeilElement {
            type Output = WeilElement;
            fn $method(self, rhs: WeilElement) -> WeilElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&WeilElement> for WeilElement {
            type Output = WeilElement;
            fn $method(self, rhs: &WeilElement) -> WeilElement {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &WeilElement {
    type Output = WeilElement;
    fn neg(self) -> WeilElement {
        WeilElement {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for WeilElement {
    type Output = WeilElement;
    fn neg(self) -> WeilElement {
        -&self
    }
}

impl From<BigRational> for WeilElement {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for WeilElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl fmt::Display for WeilElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            if m.is_unit() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn generator_squares_to_zero() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        assert!((&d * &d).is_zero());
    }

    #[test]
    fn polynomial_expansion() {
        let ctx = GeneratorContext::new();
        let (g1, g2) = (ctx.fresh(), ctx.fresh());
        let d1 = WeilElement::generator(g1);
        let d2 = WeilElement::generator(g2);
        let a = WeilElement::one() + d1.scale(&q(2, 1));
        let b = WeilElement::from_int(3) + d2.clone();
        let expected = WeilElement::from_terms(
            Some(ctx.id()),
            [
                (Monomial::unit(), q(3, 1)),
                (Monomial::of(&[g1]), q(6, 1)),
                (Monomial::of(&[g2]), q(1, 1)),
                (Monomial::of(&[g1, g2]), q(2, 1)),
            ],
        );
        assert_eq!(&a * &b, expected);
        assert!(((&d1 + &d2) * (&d1 - &d2)).is_zero());
    }

    #[test]
    fn opposite_pair_multiplies_to_zero() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let e = WeilElement::generator(ctx.fresh());
        assert!((&d * &(-&d)).is_zero());
        let s = &d + &e;
        assert_eq!(&s * &s, (&d * &e).scale(&q(2, 1)));
    }

    #[test]
    fn mixing_contexts_is_rejected() {
        let a = GeneratorContext::new();
        let b = GeneratorContext::new();
        let x = WeilElement::generator(a.fresh());
        let y = WeilElement::generator(b.fresh());
        assert!(matches!(
            ring_combine(&x, &y, RingOp::Mul),
            Err(WeilError::ContextMismatch(_, _))
        ));
        // constants mix with anything
        assert!(ring_combine(&x, &WeilElement::from_int(2), RingOp::Add).is_ok());
    }

    #[test]
    fn substitution_cases() {
        let ctx = GeneratorContext::new();
        let (g1, g2) = (ctx.fresh(), ctx.fresh());
        let d1 = WeilElement::generator(g1);
        let d2 = WeilElement::generator(g2);

        let a = WeilElement::from_int(2) + d1.scale(&q(5, 1)) + &d1 * &d2;
        let face = BTreeMap::from([(g1, WeilElement::zero())]);
        assert_eq!(a.substitute(&face).unwrap(), WeilElement::from_int(2));

        let rescale = BTreeMap::from([(g1, d1.scale(&q(3, 1)))]);
        assert_eq!((&d1 * &d2).substitute(&rescale).unwrap(), (&d1 * &d2).scale(&q(3, 1)));

        let swap = BTreeMap::from([(g1, d2.clone()), (g2, d1.clone())]);
        let b = &d1 + &d2.scale(&q(2, 1));
        assert_eq!(b.substitute(&swap).unwrap(), &d2 + &d1.scale(&q(2, 1)));

        let bad = BTreeMap::from([(g1, WeilElement::one() + d2.clone())]);
        assert_eq!(a.substitute(&bad), Err(WeilError::NotSquareZero(g1.index())));
    }

    #[test]
    fn factor_top_cases() {
        let ctx = GeneratorContext::new();
        let (g1, g2) = (ctx.fresh(), ctx.fresh());
        let top = Monomial::of(&[g1, g2]);
        let d1 = WeilElement::generator(g1);
        let d2 = WeilElement::generator(g2);
        assert_eq!((&d1 * &d2).scale(&q(7, 1)).factor_top(&top).unwrap(), q(7, 1));
        assert_eq!(WeilElement::zero().factor_top(&top).unwrap(), q(0, 1));
        assert!(d1.factor_top(&top).is_err());
    }

    #[test]
    fn factor_out_keeps_ambient_part() {
        let ctx = GeneratorContext::new();
        let (g1, g2, a) = (ctx.fresh(), ctx.fresh(), ctx.fresh());
        let d12 = WeilElement::product_of(&[g1, g2]);
        let amb = WeilElement::from_int(3) + WeilElement::generator(a);
        let x = &d12 * &amb;
        assert_eq!(x.factor_out(&Monomial::of(&[g1, g2])).unwrap(), amb);
        assert!(x.factor_top(&Monomial::of(&[g1, g2])).is_err());
    }

    #[test]
    fn split_recombines() {
        let ctx = GeneratorContext::new();
        let (s1, s2, a) = (ctx.fresh(), ctx.fresh(), ctx.fresh());
        let x = WeilElement::from_int(1)
            + WeilElement::generator(s1).scale(&q(2, 1))
            + WeilElement::product_of(&[s1, s2, a])
            + WeilElement::generator(a);
        let parts = x.split_by(&[s1, s2]);
        assert_eq!(parts[0], WeilElement::from_int(1) + WeilElement::generator(a));
        assert_eq!(parts[1], WeilElement::from_int(2));
        assert_eq!(parts[2], WeilElement::zero());
        assert_eq!(parts[3], WeilElement::generator(a));
    }
}
