use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Generator, Monomial, ResidueError, WeilElement, WeilError};

/// Square matrix over the Weil algebra, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeilMatrix {
    size: usize,
    entries: Vec<WeilElement>,
}

impl WeilMatrix {
    pub fn zero(size: usize) -> Self {
        Self {
            size,
            entries: vec![WeilElement::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.entries[i * size + i] = WeilElement::one();
        }
        m
    }

    pub fn from_entries(size: usize, entries: Vec<WeilElement>) -> Result<Self, WeilError> {
        if entries.len() != size * size {
            return Err(WeilError::Dimension(format!(
                "{} entries for a {size}x{size} matrix",
                entries.len()
            )));
        }
        Ok(Self { size, entries })
    }

    pub fn from_rational(size: usize, entries: &[BigRational]) -> Self {
        assert_eq!(entries.len(), size * size);
        Self {
            size,
            entries: entries.iter().cloned().map(WeilElement::constant).collect(),
        }
    }

    /// Rows of integers; convenient in tests.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let size = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), size, "matrix must be square");
                r.iter().map(|x| WeilElement::from_int(*x))
            })
            .collect();
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[WeilElement] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<WeilElement> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> &WeilElement {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: WeilElement) {
        self.entries[row * self.size + col] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(WeilElement::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(WeilElement::is_constant)
    }

    pub fn constant_part(&self) -> Vec<BigRational> {
        self.entries.iter().map(WeilElement::constant_term).collect()
    }

    fn check_size(&self, other: &Self) -> Result<(), WeilError> {
        if self.size != other.size {
            return Err(WeilError::Dimension(format!(
                "{}x{} against {}x{}",
                self.size, self.size, other.size, other.size
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_size(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_add(b))
            .collect::<Result<_, _>>()?;
        Ok(Self { size: self.size, entries })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_size(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<_, _>>()?;
        Ok(Self { size: self.size, entries })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, WeilError> {
        self.check_size(other)?;
        let n = self.size;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = WeilElement::zero();
                for k in 0..n {
                    let a = &self.entries[i * n + k];
                    let b = &other.entries[k * n + j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Ok(Self { size: n, entries })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix addition")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("matrix subtraction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix product")
    }

    pub fn neg(&self) -> Self {
        Self {
            size: self.size,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            size: self.size,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    /// Multiplies every entry by a Weil scalar.
    pub fn scale_by(&self, w: &WeilElement) -> Self {
        Self {
            size: self.size,
            entries: self.entries.iter().map(|e| e * w).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.size;
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j].clone();
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[WeilElement]) -> Vec<WeilElement> {
        assert_eq!(v.len(), self.size);
        let n = self.size;
        (0..n)
            .map(|i| {
                (0..n).fold(WeilElement::zero(), |acc, k| {
                    acc + &self.entries[i * n + k] * &v[k]
                })
            })
            .collect()
    }

    pub fn substitute(&self, map: &BTreeMap<Generator, WeilElement>) -> Result<Self, WeilError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.substitute(map))
            .collect::<Result<_, _>>()?;
        Ok(Self { size: self.size, entries })
    }

    /// Entrywise [`WeilElement::factor_out`].
    pub fn factor_out(&self, m: &Monomial) -> Result<Self, ResidueError> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.factor_out(m))
            .collect::<Result<_, _>>()?;
        Ok(Self { size: self.size, entries })
    }

    /// Entrywise [`WeilElement::factor_top`]: a rational matrix `C` with
    /// `self = C * m`.
    pub fn factor_top(&self, m: &Monomial) -> Result<Vec<BigRational>, ResidueError> {
        self.entries.iter().map(|e| e.factor_top(m)).collect()
    }

    /// Exact two-sided inverse.
    ///
    /// With `A = C + N`, `C` the rational constant part and `N` nilpotent,
    /// `A^-1 = sum_j (-C^-1 N)^j C^-1`. The series is finite: every entry of
    /// the `j`-th power has monomials of degree at least `j`.
    pub fn inverse(&self) -> Result<Self, WeilError> {
        let n = self.size;
        let c_inv = rational_inverse(n, &self.constant_part()).ok_or(WeilError::Singular)?;
        let c_inv = Self::from_rational(n, &c_inv);
        if self.is_constant() {
            return Ok(c_inv);
        }
        let nil = self.sub(&Self::from_rational(n, &self.constant_part()));
        let step = c_inv.mul(&nil).neg();
        let mut term = c_inv.clone();
        let mut sum = c_inv;
        loop {
            term = step.mul(&term);
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        Ok(sum)
    }
}

/// Gauss-Jordan inverse of a rational `n x n` matrix; `None` when singular.
pub fn rational_inverse(n: usize, a: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = a[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|r| !m[*r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(m.into_iter().flat_map(|row| row.into_iter().skip(n)).collect())
}

impl fmt::Display for WeilMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.size {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.size {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
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
    fn first_order_inverse() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let n = WeilMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let a = WeilMatrix::identity(2).add(&n.scale_by(&d));
        let expected = WeilMatrix::identity(2).sub(&n.scale_by(&d));
        assert_eq!(a.inverse().unwrap(), expected);
    }

    #[test]
    fn scalar_inverse_multiplies_back() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let a = WeilMatrix::from_entries(1, vec![WeilElement::from_int(2) + d.clone()]).unwrap();
        let inv = a.inverse().unwrap();
        let expected = WeilElement::constant(q(1, 2)) - d.scale(&q(1, 4));
        assert_eq!(inv.get(0, 0), &expected);
        assert!(a.mul(&inv).is_identity());
    }

    #[test]
    fn singular_constant_term() {
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let a = WeilMatrix::from_entries(2, vec![d.clone(), WeilElement::zero(), WeilElement::zero(), d])
            .unwrap();
        assert_eq!(a.inverse(), Err(WeilError::Singular));
    }

    #[test]
    fn inverse_with_several_generators() {
        let ctx = GeneratorContext::new();
        let g = ctx.fresh_many(3);
        let w: Vec<WeilElement> = g.iter().map(|x| WeilElement::generator(*x)).collect();
        let a = WeilMatrix::from_entries(
            2,
            vec![
                WeilElement::from_int(2) + &w[0] * &w[1],
                w[2].clone(),
                WeilElement::from_int(1) + w[0].clone(),
                WeilElement::from_int(3) - &w[1] * &w[2],
            ],
        )
        .unwrap();
        let inv = a.inverse().unwrap();
        assert!(inv.mul(&a).is_identity());
        assert!(a.mul(&inv).is_identity());
    }
}
