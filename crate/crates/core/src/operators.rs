//! Coboundary operators on matrix-valued forms.
//!
//! Every operator is evaluated by extraction: on a cube `gamma` of arity
//! `n + 1` fresh infinitesimals `d_1 .. d_{n+1}` are allocated, the defining
//! expression is assembled over the Weil algebra, and the coefficient of
//! `d_1 ... d_{n+1}` is read off. Any other surviving coefficient is an
//! extraction residue and is reported as an error.
//!
//! Values of the input form are themselves fetched through
//! [`DifferentialForm::eval_extracted`], so an input violating the form axioms
//! is detected rather than silently differentiated.

use std::fmt;
use std::sync::Arc;

use crate::forms::{DifferentialForm, FormError, FormEvaluator};
use crate::groupoid::{Microcube, TangentVector};
use crate::representation::Representation;
use crate::weil::{GeneratorContext, Monomial, WeilElement, WeilMatrix};

/// Order in which the `n + 1` factors of the multiplicative coboundary are
/// multiplied.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorOrder {
    Ascending,
    Descending,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operator {
    Additive,
    Multiplicative(FactorOrder),
    Contour,
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Additive => write!(f, "d+"),
            Operator::Multiplicative(FactorOrder::Ascending) => write!(f, "dx"),
            Operator::Multiplicative(FactorOrder::Descending) => write!(f, "dx(reversed)"),
            Operator::Contour => write!(f, "dcontour"),
        }
    }
}

/// The output of an operator, evaluated lazily.
#[derive(Debug)]
pub struct OperatorForm {
    pub op: Operator,
    pub source: DifferentialForm,
    pub rep: Arc<Representation>,
}

impl FormEvaluator for OperatorForm {
    fn evaluate(&self, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
        match self.op {
            Operator::Additive => eval_d_plus(&self.source, &self.rep, cube, ctx),
            Operator::Multiplicative(order) => eval_d_times(&self.source, &self.rep, cube, order, ctx),
            Operator::Contour => eval_d_contour(&self.source, &self.rep, cube, ctx),
        }
    }

    fn describe(&self) -> String {
        format!("{} of ({}) under the {} representation", self.op, self.source.describe(), self.rep.kind().name())
    }
}

fn check_inputs(form: &DifferentialForm, rep: &Representation) -> Result<(), FormError> {
    let g = form.groupoid();
    rep.check_groupoid(g.kind, g.fiber_dim)?;
    Ok(())
}

fn wrap(op: Operator, form: &DifferentialForm, rep: &Representation) -> Result<DifferentialForm, FormError> {
    check_inputs(form, rep)?;
    let out = OperatorForm {
        op,
        source: form.clone(),
        rep: Arc::new(rep.clone()),
    };
    Ok(DifferentialForm::from_evaluator(form.groupoid(), form.degree() + 1, Arc::new(out)))
}

/// Additive coboundary `d+ omega`.
pub fn d_plus(form: &DifferentialForm, rep: &Representation) -> Result<DifferentialForm, FormError> {
    wrap(Operator::Additive, form, rep)
}

/// Multiplicative coboundary `dx omega`, factors multiplied in index order.
/// Defined for `degree >= 1` only.
pub fn d_times(form: &DifferentialForm, rep: &Representation) -> Result<DifferentialForm, FormError> {
    d_times_ordered(form, rep, FactorOrder::Ascending)
}

pub fn d_times_ordered(form: &DifferentialForm, rep: &Representation, order: FactorOrder) -> Result<DifferentialForm, FormError> {
    if form.degree() == 0 {
        return Err(FormError::Invalid("the multiplicative coboundary needs a form of degree >= 1".into()));
    }
    wrap(Operator::Multiplicative(order), form, rep)
}

/// Contour derivative of a 1-form.
pub fn d_contour(form: &DifferentialForm, rep: &Representation) -> Result<DifferentialForm, FormError> {
    if form.degree() != 1 {
        return Err(FormError::Invalid("the contour derivative takes 1-forms".into()));
    }
    wrap(Operator::Contour, form, rep)
}

/// `omega(gamma^i_0)` and `(rho(gamma_i)_e)^-1 (omega(gamma^i_e))`.
pub fn face_terms(
    form: &DifferentialForm,
    rep: &Representation,
    cube: &Microcube,
    i: usize,
    e: &WeilElement,
    ctx: &GeneratorContext,
) -> Result<(WeilMatrix, WeilMatrix), FormError> {
    let at_zero = form.eval_extracted(&cube.face(i)?, ctx)?;
    let value = form.eval_extracted(&cube.shifted_face(i, e, ctx)?, ctx)?;
    let arrow = cube.axis(i)?.eval(std::slice::from_ref(e))?;
    let back = rep.transport(&arrow)?.inverse()?;
    Ok((at_zero, back.apply(&value)))
}

fn check_arity(form: &DifferentialForm, cube: &Microcube) -> Result<(), FormError> {
    if cube.arity() != form.degree() + 1 {
        return Err(FormError::DegreeMismatch {
            degree: form.degree() + 1,
            arity: cube.arity(),
        });
    }
    Ok(())
}

fn product_except(ds: &[WeilElement], skip: usize) -> WeilElement {
    ds.iter()
        .enumerate()
        .filter(|(j, _)| *j != skip)
        .fold(WeilElement::one(), |acc, (_, d)| &acc * d)
}

fn eval_d_plus(form: &DifferentialForm, rep: &Representation, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
    check_arity(form, cube)?;
    let gens = ctx.fresh_many(cube.arity());
    let ds: Vec<WeilElement> = gens.iter().map(|g| WeilElement::generator(*g)).collect();
    let mut acc = WeilMatrix::zero(form.fiber_dim());
    for i in 1..=cube.arity() {
        let (at_zero, moved) = face_terms(form, rep, cube, i, &ds[i - 1], ctx)?;
        let mut w = product_except(&ds, i - 1);
        if i % 2 == 1 {
            w = -w;
        }
        acc = acc.try_add(&at_zero.try_sub(&moved)?.scale_by(&w))?;
    }
    Ok(acc.factor_out(&Monomial::of(&gens))?)
}

/// `DF_i`, the derivative at `0` of `e -> (rho(gamma_i)_e)^-1 (omega(gamma^i_e))`.
pub fn derivative_df(
    form: &DifferentialForm,
    rep: &Representation,
    cube: &Microcube,
    i: usize,
    ctx: &GeneratorContext,
) -> Result<WeilMatrix, FormError> {
    check_inputs(form, rep)?;
    check_arity(form, cube)?;
    let e = ctx.fresh();
    let (at_zero, moved) = face_terms(form, rep, cube, i, &WeilElement::generator(e), ctx)?;
    Ok(moved.try_sub(&at_zero)?.factor_out(&Monomial::of(&[e]))?)
}

fn tangent(x: &WeilMatrix, w: &WeilElement) -> Result<WeilMatrix, FormError> {
    Ok(TangentVector::new(Vec::new(), x.clone()).eval_matrix(w)?)
}

fn eval_d_times(
    form: &DifferentialForm,
    rep: &Representation,
    cube: &Microcube,
    order: FactorOrder,
    ctx: &GeneratorContext,
) -> Result<WeilMatrix, FormError> {
    check_arity(form, cube)?;
    let n1 = cube.arity();
    let gens = ctx.fresh_many(n1);
    let ds: Vec<WeilElement> = gens.iter().map(|g| WeilElement::generator(*g)).collect();
    let mut factors = Vec::with_capacity(n1);
    for i in 1..=n1 {
        let (at_zero, moved) = face_terms(form, rep, cube, i, &ds[i - 1], ctx)?;
        let w = product_except(&ds, i - 1);
        let factor = tangent(&at_zero, &w)?.try_mul(&tangent(&moved, &-&w)?)?;
        factors.push(if i % 2 == 1 { factor.inverse()? } else { factor });
    }
    if order == FactorOrder::Descending {
        factors.reverse();
    }
    let k = form.fiber_dim();
    let word = factors.iter().try_fold(WeilMatrix::identity(k), |acc, f| acc.try_mul(f))?;
    Ok(word.try_sub(&WeilMatrix::identity(k))?.factor_out(&Monomial::of(&gens))?)
}

fn eval_d_contour(form: &DifferentialForm, rep: &Representation, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
    check_arity(form, cube)?;
    let gens = ctx.fresh_many(2);
    let d1 = WeilElement::generator(gens[0]);
    let d2 = WeilElement::generator(gens[1]);
    let (a1, b1) = face_terms(form, rep, cube, 1, &d1, ctx)?;
    let (a2, b2) = face_terms(form, rep, cube, 2, &d2, ctx)?;
    let word = tangent(&a1, &-&d2)?
        .try_mul(&tangent(&b2, &-&d1)?)?
        .try_mul(&tangent(&b1, &d2)?)?
        .try_mul(&tangent(&a2, &d1)?)?;
    let k = form.fiber_dim();
    Ok(word.try_sub(&WeilMatrix::identity(k))?.factor_out(&Monomial::of(&gens))?)
}

/// `dcontour omega(gamma) - dx omega(gamma)` for a 1-form and a 2-cube.
pub fn mc_defect(form: &DifferentialForm, rep: &Representation, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
    let contour = d_contour(form, rep)?.eval(cube, ctx)?;
    let mult = d_times(form, rep)?.eval(cube, ctx)?;
    Ok(contour.try_sub(&mult)?)
}
