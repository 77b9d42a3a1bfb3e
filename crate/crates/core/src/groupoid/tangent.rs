use crate::weil::{GeneratorContext, Monomial, WeilElement, WeilMatrix};

use super::{Arrow, GroupoidError, WeilVector};

/// A tangent vector of the group bundle at the identity of the fiber over
/// `base`, i.e. an element of the Lie algebra bundle. Its value at an
/// infinitesimal `w` is `I + w X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentVector {
    pub base: WeilVector,
    pub matrix: WeilMatrix,
}

impl TangentVector {
    pub fn new(base: WeilVector, matrix: WeilMatrix) -> Self {
        Self { base, matrix }
    }

    pub fn zero(base: WeilVector, fiber_dim: usize) -> Self {
        Self::new(base, WeilMatrix::zero(fiber_dim))
    }

    /// `t_w = I + w X`. `w` must be nilpotent and square to zero.
    pub fn eval(&self, w: &WeilElement) -> Result<Arrow, GroupoidError> {
        if !w.is_nilpotent() || !w.squares_to_zero() {
            return Err(GroupoidError::NotSquareZero(w.to_string()));
        }
        let k = self.matrix.size();
        Ok(Arrow::Group {
            base: self.base.clone(),
            element: WeilMatrix::identity(k).try_add(&self.matrix.scale_by(w))?,
        })
    }

    /// Group element of [`TangentVector::eval`].
    pub fn eval_matrix(&self, w: &WeilElement) -> Result<WeilMatrix, GroupoidError> {
        match self.eval(w)? {
            Arrow::Group { element, .. } => Ok(element),
            Arrow::Pair { .. } => unreachable!(),
        }
    }

    fn same_base(&self, other: &Self) -> Result<(), GroupoidError> {
        if self.base != other.base {
            return Err(GroupoidError::BaseMismatch("tangent vectors at different points".into()));
        }
        Ok(())
    }

    /// Fiberwise sum; `(t1 + t2)_d = (t2)_d (t1)_d`.
    pub fn add(&self, other: &Self) -> Result<Self, GroupoidError> {
        self.same_base(other)?;
        Ok(Self::new(self.base.clone(), self.matrix.try_add(&other.matrix)?))
    }

    pub fn scale(&self, a: &num_rational::BigRational) -> Self {
        Self::new(self.base.clone(), self.matrix.scale(a))
    }

    /// The bracket defined by
    /// `[t1, t2]_{d1 d2} = (t2)_{-d2} (t1)_{-d1} (t2)_{d2} (t1)_{d1}`,
    /// extracted as the `d1 d2` coefficient of the group word.
    pub fn bracket(&self, other: &Self, ctx: &GeneratorContext) -> Result<Self, GroupoidError> {
        self.same_base(other)?;
        let g = ctx.fresh_many(2);
        let d1 = WeilElement::generator(g[0]);
        let d2 = WeilElement::generator(g[1]);
        let word = other
            .eval_matrix(&-&d2)?
            .try_mul(&self.eval_matrix(&-&d1)?)?
            .try_mul(&other.eval_matrix(&d2)?)?
            .try_mul(&self.eval_matrix(&d1)?)?;
        let k = self.matrix.size();
        let top = Monomial::of(&g);
        let value = word.try_sub(&WeilMatrix::identity(k))?.factor_out(&top).map_err(crate::weil::WeilError::from)?;
        Ok(Self::new(self.base.clone(), value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[i64]]) -> TangentVector {
        TangentVector::new(vec![WeilElement::zero()], WeilMatrix::from_int_rows(rows))
    }

    #[test]
    fn bracket_of_elementary_matrices() {
        let ctx = GeneratorContext::new();
        let x = t(&[&[0, 1], &[0, 0]]);
        let y = t(&[&[0, 0], &[1, 0]]);
        assert_eq!(x.bracket(&y, &ctx).unwrap().matrix, WeilMatrix::from_int_rows(&[&[-1, 0], &[0, 1]]));
    }

    #[test]
    fn commuting_bracket_vanishes() {
        let ctx = GeneratorContext::new();
        let x = t(&[&[2, 0], &[0, 3]]);
        let y = t(&[&[-1, 0], &[0, 5]]);
        assert!(x.bracket(&y, &ctx).unwrap().matrix.is_zero());
    }

    #[test]
    fn eval_cases() {
        let ctx = GeneratorContext::new();
        let x = t(&[&[1, 2], &[3, 4]]);
        assert!(x.eval(&WeilElement::zero()).unwrap().is_identity());
        assert!(x.eval(&WeilElement::one()).is_err());
        let g = ctx.fresh_many(2);
        let w = WeilElement::product_of(&g);
        let m = x.eval_matrix(&w).unwrap();
        assert_eq!(m, WeilMatrix::identity(2).add(&x.matrix.scale_by(&w)));
        let d = WeilElement::generator(g[0]);
        let prod = x.eval_matrix(&-&d).unwrap().mul(&x.eval_matrix(&d).unwrap());
        assert!(prod.is_identity());
    }

    #[test]
    fn base_mismatch() {
        let ctx = GeneratorContext::new();
        let a = t(&[&[1]]);
        let b = TangentVector::new(vec![WeilElement::one()], WeilMatrix::from_int_rows(&[&[1]]));
        assert!(matches!(a.add(&b), Err(GroupoidError::BaseMismatch(_))));
        assert!(a.bracket(&b, &ctx).is_err());
    }
}
