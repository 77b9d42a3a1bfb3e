use std::collections::BTreeMap;

use crate::weil::{Generator, GeneratorContext, WeilElement, WeilMatrix};

use super::{Arrow, Groupoid, GroupoidError, GroupoidKind, WeilVector};

/// Coefficient table of a microcube. Entry `S` (a bitmask over the slots)
/// multiplies `prod_{s in S} d_s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CubeBody {
    /// Target map `a_n(gamma)`; entry 0 is the base point, which is also
    /// the (constant) source.
    Pair(Vec<WeilVector>),
    /// Group element as a function of the slots; entry 0 is the identity.
    Bundle { base: WeilVector, table: Vec<WeilMatrix> },
}

/// An element of `A^n G`: a map `D^n -> G` with constant source and an
/// identity at the origin, stored as its `2^n` Kock-Lawvere coefficients.
///
/// Coefficients may involve ambient generators, which is how the
/// parametrised cubes `gamma^i_e` are represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Microcube {
    groupoid: Groupoid,
    arity: usize,
    body: CubeBody,
}

trait Block: Clone {
    fn zero_like(&self) -> Self;
    fn scale_by(&self, w: &WeilElement) -> Self;
    fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Self, GroupoidError>;
}

impl Block for WeilVector {
    fn zero_like(&self) -> Self {
        vec![WeilElement::zero(); self.len()]
    }
    fn scale_by(&self, w: &WeilElement) -> Self {
        self.iter().map(|x| x * w).collect()
    }
    fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Self, GroupoidError> {
        Ok(self.iter().map(|x| x.substitute(map)).collect::<Result<_, _>>()?)
    }
}

impl Block for WeilMatrix {
    fn zero_like(&self) -> Self {
        WeilMatrix::zero(self.size())
    }
    fn scale_by(&self, w: &WeilElement) -> Self {
        WeilMatrix::scale_by(self, w)
    }
    fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Self, GroupoidError> {
        Ok(WeilMatrix::substitute(self, map)?)
    }
}

/// Inserts a zero bit at `pos`, shifting higher bits up.
fn insert_bit(mask: usize, pos: usize) -> usize {
    let low = mask & ((1 << pos) - 1);
    let high = mask >> pos;
    low | (high << (pos + 1))
}

/// Removes bit `pos`, shifting higher bits down.
fn remove_bit(mask: usize, pos: usize) -> usize {
    let low = mask & ((1 << pos) - 1);
    let high = mask >> (pos + 1);
    low | (high << pos)
}

fn face_table<B: Block>(table: &[B], arity: usize, pos: usize) -> Vec<B> {
    (0..1usize << (arity - 1)).map(|m| table[insert_bit(m, pos)].clone()).collect()
}

fn degeneracy_table<B: Block>(table: &[B], arity: usize, pos: usize) -> Vec<B> {
    (0..1usize << (arity + 1))
        .map(|m| {
            if m & (1 << pos) != 0 {
                table[0].zero_like()
            } else {
                table[remove_bit(m, pos)].clone()
            }
        })
        .collect()
}

fn rescale_table<B: Block>(table: &[B], pos: usize, a: &WeilElement) -> Vec<B> {
    table
        .iter()
        .enumerate()
        .map(|(m, b)| if m & (1 << pos) != 0 { b.scale_by(a) } else { b.clone() })
        .collect()
}

fn permute_table<B: Block>(table: &[B], sigma: &[usize]) -> Vec<B> {
    let mut out = vec![table[0].zero_like(); table.len()];
    for (m, b) in table.iter().enumerate() {
        let mut image = 0;
        for (j, s) in sigma.iter().enumerate() {
            if m & (1 << j) != 0 {
                image |= 1 << s;
            }
        }
        out[image] = b.clone();
    }
    out
}

fn substitute_table<B: Block>(
    table: &[B],
    map: &BTreeMap<Generator, WeilElement>,
) -> Result<Vec<B>, GroupoidError> {
    table.iter().map(|b| b.substitute(map)).collect()
}

/// Products `prod_{s in S} args[s]` for every mask `S`.
fn monomial_values(args: &[WeilElement]) -> Vec<WeilElement> {
    let mut out = vec![WeilElement::one(); 1 << args.len()];
    for m in 1..out.len() {
        let low = m.trailing_zeros() as usize;
        out[m] = &out[m & (m - 1)] * &args[low];
    }
    out
}

/// Sign of a permutation given as an image list.
pub fn permutation_sign(sigma: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..sigma.len() {
        for j in i + 1..sigma.len() {
            if sigma[i] > sigma[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Microcube {
    /// A pair-groupoid cube from its target table (entry 0 is the base).
    pub fn pair(groupoid: Groupoid, table: Vec<WeilVector>) -> Result<Self, GroupoidError> {
        if groupoid.kind != GroupoidKind::Pair {
            return Err(GroupoidError::KindMismatch("pair table for a bundle groupoid".into()));
        }
        let arity = table_arity(table.len())?;
        if table.iter().any(|v| v.len() != groupoid.base_dim) {
            return Err(GroupoidError::InvalidCube(format!(
                "table vectors must have dimension {}",
                groupoid.base_dim
            )));
        }
        Ok(Self {
            groupoid,
            arity,
            body: CubeBody::Pair(table),
        })
    }

    /// A bundle cube; `table[0]` must be the identity.
    pub fn bundle(groupoid: Groupoid, base: WeilVector, table: Vec<WeilMatrix>) -> Result<Self, GroupoidError> {
        if groupoid.kind != GroupoidKind::Bundle {
            return Err(GroupoidError::KindMismatch("bundle table for a pair groupoid".into()));
        }
        let arity = table_arity(table.len())?;
        if base.len() != groupoid.base_dim {
            return Err(GroupoidError::InvalidCube(format!(
                "base must have dimension {}",
                groupoid.base_dim
            )));
        }
        if table.iter().any(|m| m.size() != groupoid.fiber_dim) {
            return Err(GroupoidError::InvalidCube(format!(
                "table matrices must be {0}x{0}",
                groupoid.fiber_dim
            )));
        }
        if !table[0].is_identity() {
            return Err(GroupoidError::InvalidCube("value at the origin is not the identity".into()));
        }
        Ok(Self {
            groupoid,
            arity,
            body: CubeBody::Bundle { base, table },
        })
    }

    /// The identity cube of arity 0 at `base`.
    pub fn point(groupoid: Groupoid, base: WeilVector) -> Result<Self, GroupoidError> {
        match groupoid.kind {
            GroupoidKind::Pair => Self::pair(groupoid, vec![base]),
            GroupoidKind::Bundle => Self::bundle(groupoid, base, vec![WeilMatrix::identity(groupoid.fiber_dim)]),
        }
    }

    pub fn groupoid(&self) -> Groupoid {
        self.groupoid
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn body(&self) -> &CubeBody {
        &self.body
    }

    /// `alpha(gamma(d))`, constant in `d`.
    pub fn source(&self) -> &WeilVector {
        match &self.body {
            CubeBody::Pair(t) => &t[0],
            CubeBody::Bundle { base, .. } => base,
        }
    }

    /// The first-order coefficient along slot `s` (1-based), flattened:
    /// the target velocity for the pair groupoid, the row-major fiber
    /// matrix for the bundle.
    pub fn velocity(&self, slot: usize) -> WeilVector {
        let m = 1 << (slot - 1);
        match &self.body {
            CubeBody::Pair(t) => t[m].clone(),
            CubeBody::Bundle { table, .. } => table[m].entries().to_vec(),
        }
    }

    /// The target table `a_n(gamma)`.
    pub fn target_table(&self) -> Vec<WeilVector> {
        match &self.body {
            CubeBody::Pair(t) => t.clone(),
            CubeBody::Bundle { base, .. } => {
                let mut t = vec![vec![WeilElement::zero(); base.len()]; 1 << self.arity];
                t[0] = base.clone();
                t
            }
        }
    }

    fn check_slot(&self, slot: usize, bound: usize) -> Result<usize, GroupoidError> {
        if slot == 0 || slot > bound {
            return Err(GroupoidError::IndexRange { index: slot, bound });
        }
        Ok(slot - 1)
    }

    fn map_table<F, G>(&self, arity: usize, pair: F, bundle: G) -> Microcube
    where
        F: FnOnce(&[WeilVector]) -> Vec<WeilVector>,
        G: FnOnce(&[WeilMatrix]) -> Vec<WeilMatrix>,
    {
        let body = match &self.body {
            CubeBody::Pair(t) => CubeBody::Pair(pair(t)),
            CubeBody::Bundle { base, table } => CubeBody::Bundle {
                base: base.clone(),
                table: bundle(table),
            },
        };
        Microcube {
            groupoid: self.groupoid,
            arity,
            body,
        }
    }

    /// `gamma(d_1, ..., d_n)`.
    pub fn eval(&self, args: &[WeilElement]) -> Result<Arrow, GroupoidError> {
        if args.len() != self.arity {
            return Err(GroupoidError::Arity {
                expected: self.arity,
                found: args.len(),
            });
        }
        if let Some(a) = args.iter().find(|a| !a.squares_to_zero()) {
            return Err(GroupoidError::NotSquareZero(a.to_string()));
        }
        let mono = monomial_values(args);
        Ok(match &self.body {
            CubeBody::Pair(t) => {
                let mut target = vec![WeilElement::zero(); self.groupoid.base_dim];
                for (w, v) in mono.iter().zip(t) {
                    if w.is_zero() {
                        continue;
                    }
                    for (acc, x) in target.iter_mut().zip(v) {
                        *acc = acc.try_add(&x.try_mul(w)?)?;
                    }
                }
                Arrow::Pair {
                    source: t[0].clone(),
                    target,
                }
            }
            CubeBody::Bundle { base, table } => {
                let mut element = WeilMatrix::zero(self.groupoid.fiber_dim);
                for (w, g) in mono.iter().zip(table) {
                    if w.is_zero() {
                        continue;
                    }
                    element = element.try_add(&g.scale_by(w))?;
                }
                Arrow::Group {
                    base: base.clone(),
                    element,
                }
            }
        })
    }

    /// Rebuilds a cube from an arrow expressed in the fresh slot generators
    /// `slots`. Fails when the source depends on the slots or the value at
    /// the origin is not an identity.
    pub fn read_back(groupoid: Groupoid, slots: &[Generator], arrow: &Arrow) -> Result<Microcube, GroupoidError> {
        let free_of_slots = |v: &WeilVector| {
            v.iter()
                .all(|x| x.split_by(slots).iter().skip(1).all(WeilElement::is_zero))
        };
        if !free_of_slots(arrow.source()) {
            return Err(GroupoidError::InvalidCube("source varies with the arguments".into()));
        }
        let n = 1usize << slots.len();
        match arrow {
            Arrow::Pair { source, target } => {
                let mut table = vec![Vec::with_capacity(target.len()); n];
                for x in target {
                    for (m, part) in x.split_by(slots).into_iter().enumerate() {
                        table[m].push(part);
                    }
                }
                if &table[0] != source {
                    return Err(GroupoidError::InvalidCube("value at the origin is not an identity".into()));
                }
                Microcube::pair(groupoid, table)
            }
            Arrow::Group { base, element } => {
                let k = element.size();
                let mut entries = vec![Vec::with_capacity(k * k); n];
                for x in element.entries() {
                    for (m, part) in x.split_by(slots).into_iter().enumerate() {
                        entries[m].push(part);
                    }
                }
                let table = entries
                    .into_iter()
                    .map(|e| WeilMatrix::from_entries(k, e))
                    .collect::<Result<Vec<_>, _>>()?;
                Microcube::bundle(groupoid, base.clone(), table)
            }
        }
    }

    /// Face `d_i`: sets slot `i` to zero and drops it.
    pub fn face(&self, i: usize) -> Result<Microcube, GroupoidError> {
        let pos = self.check_slot(i, self.arity)?;
        let a = self.arity;
        Ok(self.map_table(a - 1, |t| face_table(t, a, pos), |t| face_table(t, a, pos)))
    }

    /// Degeneracy `s_i`: inserts an ignored slot at position `i`.
    pub fn degeneracy(&self, i: usize) -> Result<Microcube, GroupoidError> {
        let pos = self.check_slot(i, self.arity + 1)?;
        let a = self.arity;
        Ok(self.map_table(a + 1, |t| degeneracy_table(t, a, pos), |t| degeneracy_table(t, a, pos)))
    }

    /// `gamma_i(d) = gamma(0, ..., d, ..., 0)` with `d` at slot `i`.
    pub fn axis(&self, i: usize) -> Result<Microcube, GroupoidError> {
        let pos = self.check_slot(i, self.arity)?;
        let pick = [0usize, 1 << pos];
        Ok(self.map_table(
            1,
            |t| pick.iter().map(|m| t[*m].clone()).collect(),
            |t| pick.iter().map(|m| t[*m].clone()).collect(),
        ))
    }

    /// `a ._i gamma`: rescales slot `i` by `a`.
    pub fn rescale(&self, i: usize, a: &WeilElement) -> Result<Microcube, GroupoidError> {
        let pos = self.check_slot(i, self.arity)?;
        Ok(self.map_table(self.arity, |t| rescale_table(t, pos, a), |t| rescale_table(t, pos, a)))
    }

    /// `gamma o D^sigma`, i.e. `(d_1..d_n) -> gamma(d_{sigma(1)}, ..., d_{sigma(n)})`,
    /// with `sigma` 0-based.
    pub fn permute(&self, sigma: &[usize]) -> Result<Microcube, GroupoidError> {
        let mut seen = vec![false; self.arity];
        if sigma.len() != self.arity || !sigma.iter().all(|s| *s < self.arity && !std::mem::replace(&mut seen[*s], true)) {
            return Err(GroupoidError::InvalidCube(format!("{sigma:?} is not a permutation of the slots")));
        }
        Ok(self.map_table(self.arity, |t| permute_table(t, sigma), |t| permute_table(t, sigma)))
    }

    /// Applies an ambient substitution to every coefficient.
    pub fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Microcube, GroupoidError> {
        let body = match &self.body {
            CubeBody::Pair(t) => CubeBody::Pair(substitute_table(t, map)?),
            CubeBody::Bundle { base, table } => CubeBody::Bundle {
                base: base.substitute(map)?,
                table: substitute_table(table, map)?,
            },
        };
        Ok(Microcube {
            groupoid: self.groupoid,
            arity: self.arity,
            body,
        })
    }

    /// `gamma^i_e(d) = gamma(d_1, .., e at slot i, .., d_n) . gamma(0, .., e, .., 0)^-1`.
    pub fn shifted_face(&self, i: usize, e: &WeilElement, ctx: &GeneratorContext) -> Result<Microcube, GroupoidError> {
        let pos = self.check_slot(i, self.arity)?;
        if !e.squares_to_zero() {
            return Err(GroupoidError::NotSquareZero(e.to_string()));
        }
        if e.is_zero() {
            return self.face(i);
        }
        let slots = ctx.fresh_many(self.arity - 1);
        let mut args: Vec<WeilElement> = slots.iter().map(|g| WeilElement::generator(*g)).collect();
        args.insert(pos, e.clone());
        let mut axis_args = vec![WeilElement::zero(); self.arity];
        axis_args[pos] = e.clone();
        let moved = self.eval(&args)?;
        let shift = self.eval(&axis_args)?.inverse()?;
        Self::read_back(self.groupoid, &slots, &moved.compose(&shift)?)
    }

    /// True when `self` is literally `s_i` of some cube for some `i`.
    pub fn is_degenerate(&self) -> bool {
        (0..self.arity).any(|pos| {
            let zero = |m: usize| match &self.body {
                CubeBody::Pair(t) => t[m].iter().all(WeilElement::is_zero),
                CubeBody::Bundle { table, .. } => table[m].is_zero(),
            };
            (0..1usize << self.arity).filter(|m| m & (1 << pos) != 0).all(zero)
        })
    }

    /// Largest generator index used in any coefficient.
    pub fn max_generator_index(&self) -> Option<u32> {
        let vec_max = |v: &WeilVector| v.iter().filter_map(WeilElement::max_index).max();
        match &self.body {
            CubeBody::Pair(t) => t.iter().filter_map(vec_max).max(),
            CubeBody::Bundle { base, table } => vec_max(base).into_iter().chain(
                table
                    .iter()
                    .filter_map(|m| m.entries().iter().filter_map(WeilElement::max_index).max()),
            )
            .max(),
        }
    }
}

fn table_arity(len: usize) -> Result<usize, GroupoidError> {
    if len == 0 || !len.is_power_of_two() {
        return Err(GroupoidError::InvalidCube(format!("table of length {len} is not 2^n")));
    }
    Ok(len.trailing_zeros() as usize)
}

/// A one-parameter family `d -> zeta(d)` of cubes, represented by a cube
/// whose coefficients involve the parameter generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicrocubeFamily {
    pub param: Generator,
    pub cube: Microcube,
}

impl MicrocubeFamily {
    pub fn at(&self, e: &WeilElement) -> Result<Microcube, GroupoidError> {
        self.cube.substitute(&BTreeMap::from([(self.param, e.clone())]))
    }

    /// `(zeta * t)(d_1, d_2) = zeta(d_1)_{d_2} . t_{d_1}`.
    ///
    /// Requires the base of `zeta(d)` to be the target of `t_d`.
    pub fn star(&self, t: &Microcube, ctx: &GeneratorContext) -> Result<Microcube, GroupoidError> {
        if t.arity() != 1 || self.cube.arity() != 1 {
            return Err(GroupoidError::Arity {
                expected: 1,
                found: if t.arity() != 1 { t.arity() } else { self.cube.arity() },
            });
        }
        if t.groupoid() != self.cube.groupoid() {
            return Err(GroupoidError::KindMismatch("star of cubes on different groupoids".into()));
        }
        let s = ctx.fresh_many(2);
        let (d1, d2) = (WeilElement::generator(s[0]), WeilElement::generator(s[1]));
        let zeta = self.at(&d1)?;
        let t_arrow = t.eval(std::slice::from_ref(&d1))?;
        if zeta.source() != t_arrow.target() {
            return Err(GroupoidError::BaseMismatch(
                "base of the family is not the target path of the tangent".into(),
            ));
        }
        let outer = zeta.eval(&[d2])?;
        Microcube::read_back(t.groupoid(), &s, &outer.compose(&t_arrow)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn v(xs: &[i64]) -> WeilVector {
        xs.iter().map(|x| WeilElement::from_int(*x)).collect()
    }

    fn square() -> Microcube {
        // {0: x, {1}: v, {2}: w, {1,2}: 0}
        Microcube::pair(Groupoid::pair(2, 2), vec![v(&[1, 2]), v(&[3, 0]), v(&[0, 5]), v(&[0, 0])]).unwrap()
    }

    #[test]
    fn bit_helpers() {
        assert_eq!(insert_bit(0b11, 1), 0b101);
        assert_eq!(remove_bit(0b101, 1), 0b11);
        for m in 0..16 {
            assert_eq!(remove_bit(insert_bit(m, 2), 2), m);
        }
    }

    #[test]
    fn face_of_coordinate_square() {
        let f = square().face(1).unwrap();
        assert_eq!(f, Microcube::pair(Groupoid::pair(2, 2), vec![v(&[1, 2]), v(&[0, 5])]).unwrap());
        assert_eq!(square().axis(2).unwrap(), f);
    }

    #[test]
    fn face_undoes_degeneracy() {
        let g = square();
        for i in 1..=3 {
            assert_eq!(g.degeneracy(i).unwrap().face(i).unwrap(), g);
            assert!(g.degeneracy(i).unwrap().is_degenerate());
        }
        assert!(!g.is_degenerate());
    }

    #[test]
    fn degeneracy_of_point_is_constant() {
        let p = Microcube::point(Groupoid::pair(2, 2), v(&[4, 4])).unwrap();
        let c = p.degeneracy(1).unwrap();
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        assert!(c.eval(&[d]).unwrap().is_identity());
    }

    #[test]
    fn slot_errors() {
        let g = square();
        assert!(matches!(g.face(3), Err(GroupoidError::IndexRange { .. })));
        assert!(matches!(g.face(0), Err(GroupoidError::IndexRange { .. })));
        assert!(matches!(g.eval(&[WeilElement::zero()]), Err(GroupoidError::Arity { .. })));
        assert!(matches!(
            g.eval(&[WeilElement::one(), WeilElement::zero()]),
            Err(GroupoidError::NotSquareZero(_))
        ));
    }

    #[test]
    fn eval_at_origin_is_identity() {
        let g = square();
        assert!(g.eval(&[WeilElement::zero(), WeilElement::zero()]).unwrap().is_identity());
    }

    #[test]
    fn linear_table_eval() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let g = Microcube::pair(Groupoid::pair(1, 1), vec![v(&[2]), v(&[3])]).unwrap();
        let a = g.eval(std::slice::from_ref(&d)).unwrap();
        assert_eq!(a.target(), &vec![WeilElement::from_int(2) + d.scale(&BigRational::from_integer(3.into()))]);
        // evaluating after d -> 3d scales the first-order coefficient
        let scaled = g.rescale(1, &WeilElement::from_int(3)).unwrap();
        let three_d = d.scale(&BigRational::from_integer(3.into()));
        assert_eq!(scaled.eval(std::slice::from_ref(&d)).unwrap(), g.eval(&[three_d]).unwrap());
    }

    #[test]
    fn shifted_face_at_zero_is_face() {
        let ctx = GeneratorContext::new();
        let g = square();
        assert_eq!(g.shifted_face(2, &WeilElement::zero(), &ctx).unwrap(), g.face(2).unwrap());
    }

    #[test]
    fn shifted_face_of_path_is_target_point() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let g = Microcube::pair(Groupoid::pair(2, 1), vec![v(&[1, 2]), v(&[3, -1])]).unwrap();
        let p = g.shifted_face(1, &d, &ctx).unwrap();
        let three = BigRational::from_integer(3.into());
        let target = vec![WeilElement::from_int(1) + d.scale(&three), WeilElement::from_int(2) - d.clone()];
        assert_eq!(p, Microcube::point(Groupoid::pair(2, 1), target).unwrap());
    }

    #[test]
    fn permutation_signs() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert!(square().permute(&[0, 0]).is_err());
    }

    #[test]
    fn bundle_requires_identity_at_origin() {
        let gp = Groupoid::bundle(1, 2);
        let bad = Microcube::bundle(gp, v(&[0]), vec![WeilMatrix::zero(2)]);
        assert!(matches!(bad, Err(GroupoidError::InvalidCube(_))));
    }
}
