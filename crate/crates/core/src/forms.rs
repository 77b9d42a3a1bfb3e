//! Differential forms on microcubes with values in `k x k` matrices.
//!
//! The classical family reads only first-order data: for each slot `s` the
//! velocity `v_s` of the cube (see [`Microcube::velocity`]), and evaluates
//!
//! ```text
//! omega(gamma) = sum_K A_K(x) det[ v_s(K_r) ]_{r,s}
//! ```
//!
//! at the base point `x`. Such forms are homogeneous in every slot and
//! alternating by construction. Forms produced by the operators are opaque
//! evaluators and are checked with the same validators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupoid::{permutation_sign, random_rational, Groupoid, GroupoidError, GroupoidKind, Microcube, TangentVector};
use crate::poly::{MatrixField, PolyError, Polynomial};
use crate::representation::RepError;
use crate::weil::{GeneratorContext, Monomial, ResidueError, WeilElement, WeilError, WeilMatrix};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FormError {
    #[error("form of degree {degree} evaluated on a cube of arity {arity}")]
    DegreeMismatch { degree: usize, arity: usize },
    #[error("form lives on {form:?} but the cube is on {cube:?}")]
    GroupoidMismatch { form: Groupoid, cube: Groupoid },
    #[error("invalid form: {0}")]
    Invalid(String),
    #[error(transparent)]
    Residue(#[from] ResidueError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl FormError {
    /// True when the failure is an extraction residue, wherever it arose.
    pub fn is_residue(&self) -> bool {
        matches!(
            self,
            FormError::Residue(_) | FormError::Weil(WeilError::Residue(_)) | FormError::Groupoid(GroupoidError::Weil(WeilError::Residue(_)))
        )
    }
}

/// A form given by an arbitrary evaluation procedure.
pub trait FormEvaluator: Send + Sync + fmt::Debug {
    fn evaluate(&self, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError>;
    fn describe(&self) -> String;
}

/// `A_K(x) dx_{k_1} ^ ... ^ dx_{k_n}` with 0-based component indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalTerm {
    pub index: Vec<usize>,
    pub field: MatrixField,
}

#[derive(Clone, Debug)]
pub enum FormBody {
    Classical(Vec<ClassicalTerm>),
    Evaluator(Arc<dyn FormEvaluator>),
}

#[derive(Clone, Debug)]
pub struct DifferentialForm {
    degree: usize,
    groupoid: Groupoid,
    body: FormBody,
    offset: Option<MatrixField>,
}

/// Determinant by Laplace expansion along the first row; `n <= 4` here.
fn det(rows: &[Vec<WeilElement>]) -> WeilElement {
    let n = rows.len();
    match n {
        0 => WeilElement::one(),
        1 => rows[0][0].clone(),
        _ => {
            let mut acc = WeilElement::zero();
            for c in 0..n {
                if rows[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<WeilElement>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &rows[0][c] * &det(&minor);
                acc = if c % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in combinations(n, k - 1) {
            if rest.first().map_or(true, |r| *r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

impl DifferentialForm {
    /// A classical form. Multi-indices must be strictly increasing, of
    /// length `degree`, and within the groupoid's velocity dimension.
    pub fn classical(groupoid: Groupoid, degree: usize, terms: Vec<ClassicalTerm>) -> Result<Self, FormError> {
        let c = groupoid.velocity_dim();
        for t in &terms {
            if t.index.len() != degree {
                return Err(FormError::Invalid(format!("multi-index {:?} for a {degree}-form", t.index)));
            }
            if t.index.windows(2).any(|w| w[0] >= w[1]) || t.index.iter().any(|i| *i >= c) {
                return Err(FormError::Invalid(format!(
                    "multi-index {:?} must be increasing and below {c}",
                    t.index
                )));
            }
            if t.field.size() != groupoid.fiber_dim || t.field.nvars() != groupoid.base_dim {
                return Err(FormError::Invalid("coefficient field has the wrong shape".into()));
            }
        }
        Ok(Self {
            degree,
            groupoid,
            body: FormBody::Classical(terms),
            offset: None,
        })
    }

    /// A degree-0 form given by a section `f`.
    pub fn section(groupoid: Groupoid, field: MatrixField) -> Result<Self, FormError> {
        Self::classical(groupoid, 0, vec![ClassicalTerm { index: vec![], field }])
    }

    pub fn from_evaluator(groupoid: Groupoid, degree: usize, evaluator: Arc<dyn FormEvaluator>) -> Self {
        Self {
            degree,
            groupoid,
            body: FormBody::Evaluator(evaluator),
            offset: None,
        }
    }

    /// Adds the base-point term `C(x)` to a classical form. For degree
    /// `>= 1` and `C != 0` the result is not homogeneous, hence not a form;
    /// such inputs exist to exercise the residue detector.
    pub fn with_offset(mut self, offset: MatrixField) -> Result<Self, FormError> {
        if !matches!(self.body, FormBody::Classical(_)) {
            return Err(FormError::Invalid("offsets apply to classical forms only".into()));
        }
        if offset.size() != self.groupoid.fiber_dim || offset.nvars() != self.groupoid.base_dim {
            return Err(FormError::Invalid("offset field has the wrong shape".into()));
        }
        self.offset = Some(offset);
        Ok(self)
    }

    pub fn offset(&self) -> Option<&MatrixField> {
        self.offset.as_ref()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn groupoid(&self) -> Groupoid {
        self.groupoid
    }

    pub fn fiber_dim(&self) -> usize {
        self.groupoid.fiber_dim
    }

    pub fn body(&self) -> &FormBody {
        &self.body
    }

    pub fn classical_terms(&self) -> Option<&[ClassicalTerm]> {
        match &self.body {
            FormBody::Classical(t) => Some(t),
            FormBody::Evaluator(_) => None,
        }
    }

    pub fn describe(&self) -> String {
        match &self.body {
            FormBody::Classical(t) if self.offset.is_some() => {
                format!("{}-form with {} term(s) and a base-point offset", self.degree, t.len())
            }
            FormBody::Classical(t) => format!("classical {}-form with {} term(s)", self.degree, t.len()),
            FormBody::Evaluator(e) => e.describe(),
        }
    }

    /// `omega(gamma)`.
    pub fn eval(&self, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
        if cube.arity() != self.degree {
            return Err(FormError::DegreeMismatch {
                degree: self.degree,
                arity: cube.arity(),
            });
        }
        if cube.groupoid() != self.groupoid {
            return Err(FormError::GroupoidMismatch {
                form: self.groupoid,
                cube: cube.groupoid(),
            });
        }
        match &self.body {
            FormBody::Classical(terms) => {
                let base = cube.source();
                let velocities: Vec<_> = (1..=self.degree).map(|s| cube.velocity(s)).collect();
                let mut acc = WeilMatrix::zero(self.fiber_dim());
                for t in terms {
                    let rows: Vec<Vec<WeilElement>> = t
                        .index
                        .iter()
                        .map(|k| velocities.iter().map(|v| v[*k].clone()).collect())
                        .collect();
                    let d = det(&rows);
                    if d.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&t.field.eval(base).scale_by(&d))?;
                }
                if let Some(c) = &self.offset {
                    acc = acc.try_add(&c.eval(base))?;
                }
                Ok(acc)
            }
            FormBody::Evaluator(e) => e.evaluate(cube, ctx),
        }
    }

    /// `omega(gamma)` recovered from the lift
    /// `phi(gamma, d_1..d_n) = omega(d_1 ._1 ... d_n ._n gamma)` by factoring
    /// out `d_1 ... d_n`. Agrees with [`DifferentialForm::eval`] for valid
    /// forms; a non-homogeneous evaluator leaves a residue.
    pub fn eval_extracted(&self, cube: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
        if self.degree == 0 {
            return self.eval(cube, ctx);
        }
        if cube.arity() != self.degree {
            return Err(FormError::DegreeMismatch {
                degree: self.degree,
                arity: cube.arity(),
            });
        }
        let gens = ctx.fresh_many(self.degree);
        let mut lifted = cube.clone();
        for (s, g) in gens.iter().enumerate() {
            lifted = lifted.rescale(s + 1, &WeilElement::generator(*g))?;
        }
        Ok(self.eval(&lifted, ctx)?.factor_out(&Monomial::of(&gens))?)
    }

    /// Random classical form with up to `max_terms` terms whose coefficient
    /// fields have degree at most `field_degree`.
    pub fn random_classical<R: Rng>(
        rng: &mut R,
        groupoid: Groupoid,
        degree: usize,
        field_degree: u32,
        bound: i64,
        max_terms: usize,
    ) -> Self {
        let mut indices = combinations(groupoid.velocity_dim(), degree);
        indices.shuffle(rng);
        let count = rng.gen_range(1..=max_terms.max(1)).min(indices.len());
        let terms = indices
            .into_iter()
            .take(count)
            .map(|index| ClassicalTerm {
                index,
                field: MatrixField::random(rng, groupoid.base_dim, groupoid.fiber_dim, field_degree, bound),
            })
            .collect();
        Self::classical(groupoid, degree, terms).expect("random terms are well formed")
    }
}

/// The planted invalid 1-form `omega(gamma) = v_1[0] I + (1 + x_1^2) E_{1k}`.
///
/// The offset depends on the base point only, so rescaling the slot by `0`
/// leaves `(1 + x_1^2) E_{1k}` behind: the map is not homogeneous and the
/// extraction of its lift leaves a residue.
pub fn planted_invalid_form(groupoid: Groupoid) -> DifferentialForm {
    let (m, k) = (groupoid.base_dim, groupoid.fiber_dim);
    let linear = ClassicalTerm {
        index: vec![0],
        field: MatrixField::identity(m, k),
    };
    let weight = Polynomial::parse("1 + x1^2", m).expect("valid polynomial");
    let mut offset = MatrixField::zero(m, k);
    offset.set_entry(0, k - 1, weight);
    DifferentialForm::classical(groupoid, 1, vec![linear])
        .and_then(|f| f.with_offset(offset))
        .expect("well-formed planted form")
}

/// Result of [`validate_form`]: failures carry a human-readable witness.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormReport {
    pub trials: usize,
    pub failures: Vec<String>,
}

impl FormReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Checks the axioms of a form on one cube: homogeneity along `axis` with
/// scalar `a`, alternation under `sigma` (0-based), and agreement of the
/// extracted value with the direct one.
pub fn check_form_axioms(
    form: &DifferentialForm,
    cube: &Microcube,
    a: &BigRational,
    axis: usize,
    sigma: &[usize],
    ctx: &GeneratorContext,
) -> Result<Vec<String>, FormError> {
    let mut failures = Vec::new();
    if form.degree() == 0 {
        return Ok(failures);
    }
    let value = form.eval(cube, ctx)?;
    let scaled = form.eval(&cube.rescale(axis, &WeilElement::constant(a.clone()))?, ctx)?;
    if scaled != value.scale(a) {
        failures.push(format!("homogeneity along slot {axis} with a = {a}: {scaled} != {}", value.scale(a)));
    }
    let permuted = form.eval(&cube.permute(sigma)?, ctx)?;
    let expected = value.scale(&rat(permutation_sign(sigma)));
    if permuted != expected {
        failures.push(format!("alternation under {sigma:?}: {permuted} != {expected}"));
    }
    match form.eval_extracted(cube, ctx) {
        Ok(x) if x == value => {}
        Ok(x) => failures.push(format!("extracted value {x} differs from {value}")),
        Err(e) => failures.push(format!("extraction failed: {e}")),
    }
    Ok(failures)
}

/// Checks the conditions satisfied by the group-valued lift
/// `phi(gamma, d_1..d_n) = omega(gamma)_{d_1 ... d_n}` (and by its additive
/// counterpart `d_1 ... d_n omega(gamma)`), at fresh infinitesimals.
pub fn check_phi_conditions(
    form: &DifferentialForm,
    cube: &Microcube,
    a: &BigRational,
    i: usize,
    j: usize,
    sigma: &[usize],
    ctx: &GeneratorContext,
) -> Result<Vec<String>, FormError> {
    let n = form.degree();
    let mut failures = Vec::new();
    if n == 0 {
        return Ok(failures);
    }
    let gens = ctx.fresh_many(n);
    let ds: Vec<WeilElement> = gens.iter().map(|g| WeilElement::generator(*g)).collect();
    let aw = WeilElement::constant(a.clone());
    let product = |args: &[WeilElement]| args.iter().fold(WeilElement::one(), |acc, x| &acc * x);
    let phi = |c: &Microcube, args: &[WeilElement]| -> Result<WeilMatrix, FormError> {
        let t = TangentVector::new(c.source().clone(), form.eval(c, ctx)?);
        Ok(t.eval_matrix(&product(args))?)
    };
    let additive = |c: &Microcube, args: &[WeilElement]| -> Result<WeilMatrix, FormError> {
        Ok(form.eval(c, ctx)?.scale_by(&product(args)))
    };
    let with_scaled = |slot: usize| {
        let mut v = ds.clone();
        v[slot - 1] = &v[slot - 1] * &aw;
        v
    };
    let scaled_cube = cube.rescale(i, &aw)?;

    // homogeneity moves into the first infinitesimal
    if phi(&scaled_cube, &ds)? != phi(cube, &with_scaled(1))? {
        failures.push(format!("phi(a ._{i} gamma, d) != phi(gamma, a d_1, ..)"));
    }
    if additive(&scaled_cube, &ds)? != additive(cube, &ds)?.scale(a) {
        failures.push(format!("additive lift not homogeneous along slot {i}"));
    }
    // a scalar may be moved between infinitesimal slots
    if phi(cube, &with_scaled(i))? != phi(cube, &with_scaled(j))? {
        failures.push(format!("phi does not transfer a scalar from slot {i} to slot {j}"));
    }
    if additive(cube, &with_scaled(i))? != additive(cube, &ds)?.scale(a) {
        failures.push(format!("additive lift not linear in d_{i}"));
    }
    // permutations act by the sign, as an inverse in the group
    let permuted = phi(&cube.permute(sigma)?, &ds)?;
    let base = phi(cube, &ds)?;
    let expected = if permutation_sign(sigma) == 1 { base } else { base.inverse()? };
    if permuted != expected {
        failures.push(format!("phi(gamma o D^sigma) != phi^sign for sigma = {sigma:?}"));
    }
    Ok(failures)
}

/// Random instance parameters shared by the validators.
pub(crate) fn random_axiom_inputs<R: Rng>(rng: &mut R, n: usize, bound: i64) -> (BigRational, usize, usize, Vec<usize>) {
    let a = random_rational(rng, bound);
    let i = rng.gen_range(1..=n);
    let j = rng.gen_range(1..=n);
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    (a, i, j, sigma)
}

/// Randomised check of the form axioms and the lift conditions.
pub fn validate_form(form: &DifferentialForm, seed: u64, trials: usize) -> FormReport {
    let mut report = FormReport {
        trials,
        failures: Vec::new(),
    };
    let n = form.degree();
    if n == 0 {
        return report;
    }
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let ctx = GeneratorContext::new();
        let cube = Microcube::random(&mut rng, form.groupoid(), n, 3);
        let (a, i, j, sigma) = random_axiom_inputs(&mut rng, n, 3);
        let outcome = check_form_axioms(form, &cube, &a, i, &sigma, &ctx).and_then(|mut f| {
            f.extend(check_phi_conditions(form, &cube, &a, i, j, &sigma, &ctx)?);
            Ok(f)
        });
        match outcome {
            Ok(f) => report.failures.extend(f.into_iter().map(|m| format!("trial {trial}: {m}"))),
            Err(e) => report.failures.push(format!("trial {trial}: {e}")),
        }
    }
    report
}

/// Serialised classical form, as used by config and instance files.
/// Multi-indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpec {
    pub degree: usize,
    pub groupoid: GroupoidKind,
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub terms: Vec<TermSpec>,
    /// Base-point term added to the value; makes the map non-homogeneous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub index: Vec<usize>,
    pub matrix: Vec<Vec<String>>,
}

impl FormSpec {
    pub fn groupoid(&self) -> Groupoid {
        Groupoid {
            kind: self.groupoid,
            base_dim: self.base_dim,
            fiber_dim: self.fiber_dim,
        }
    }

    pub fn build(&self) -> Result<DifferentialForm, FormError> {
        let groupoid = self.groupoid();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if t.index.iter().any(|i| *i == 0) {
                return Err(FormError::Invalid("multi-indices are 1-based".into()));
            }
            let field = MatrixField::parse(&t.matrix, self.base_dim)?;
            if field.size() != self.fiber_dim {
                return Err(FormError::Invalid(format!(
                    "coefficient matrix is {0}x{0}, fiber is {1}x{1}",
                    field.size(),
                    self.fiber_dim
                )));
            }
            terms.push(ClassicalTerm {
                index: t.index.iter().map(|i| i - 1).collect(),
                field,
            });
        }
        let form = DifferentialForm::classical(groupoid, self.degree, terms)?;
        match &self.offset {
            Some(rows) => form.with_offset(MatrixField::parse(rows, self.base_dim)?),
            None => Ok(form),
        }
    }

    pub fn from_form(form: &DifferentialForm) -> Option<Self> {
        let terms = form.classical_terms()?;
        let g = form.groupoid();
        Some(Self {
            degree: form.degree(),
            groupoid: g.kind,
            base_dim: g.base_dim,
            fiber_dim: g.fiber_dim,
            terms: terms
                .iter()
                .map(|t| TermSpec {
                    index: t.index.iter().map(|i| i + 1).collect(),
                    matrix: t.field.to_strings(),
                })
                .collect(),
            offset: form.offset().map(MatrixField::to_strings),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::random_microcube;

    fn unit_square(x: [i64; 2]) -> Microcube {
        let v = |a: i64, b: i64| vec![WeilElement::from_int(a), WeilElement::from_int(b)];
        Microcube::pair(Groupoid::pair(2, 2), vec![v(x[0], x[1]), v(1, 0), v(0, 1), v(0, 0)]).unwrap()
    }

    #[test]
    fn two_form_on_unit_square_is_its_coefficient() {
        let field = MatrixField::parse(&[vec!["x1".into(), "1".into()], vec!["x2^2".into(), "0".into()]], 2).unwrap();
        let form = DifferentialForm::classical(
            Groupoid::pair(2, 2),
            2,
            vec![ClassicalTerm {
                index: vec![0, 1],
                field: field.clone(),
            }],
        )
        .unwrap();
        let ctx = GeneratorContext::new();
        let cube = unit_square([3, 2]);
        let expected = WeilMatrix::from_int_rows(&[&[3, 1], &[4, 0]]);
        assert_eq!(form.eval(&cube, &ctx).unwrap(), expected);
    }

    #[test]
    fn degenerate_cubes_evaluate_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ctx = GeneratorContext::new();
        for g in [Groupoid::pair(2, 2), Groupoid::bundle(1, 2)] {
            let form = DifferentialForm::random_classical(&mut rng, g, 2, 2, 3, 3);
            let line = Microcube::random(&mut rng, g, 1, 3);
            for i in 1..=2 {
                assert!(form.eval(&line.degeneracy(i).unwrap(), &ctx).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn classical_forms_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in [Groupoid::pair(2, 2), Groupoid::bundle(2, 2)] {
            for degree in 0..=2 {
                let form = DifferentialForm::random_classical(&mut rng, g, degree, 2, 3, 2);
                let report = validate_form(&form, 17, 5);
                assert!(report.passed(), "{:?}", report.failures);
            }
        }
    }

    #[derive(Debug)]
    struct Quadratic;

    impl FormEvaluator for Quadratic {
        fn evaluate(&self, cube: &Microcube, _ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
            let v = cube.velocity(1);
            Ok(WeilMatrix::identity(1).scale_by(&(&v[0] * &v[0])))
        }
        fn describe(&self) -> String {
            "quadratic".into()
        }
    }

    #[test]
    fn quadratic_evaluator_fails_homogeneity() {
        let form = DifferentialForm::from_evaluator(Groupoid::pair(1, 1), 1, Arc::new(Quadratic));
        let report = validate_form(&form, 3, 10);
        assert!(report.failures.iter().any(|f| f.contains("homogeneity")));
    }

    #[test]
    fn planted_form_leaves_a_residue() {
        let g = Groupoid::pair(2, 2);
        let form = planted_invalid_form(g);
        let ctx = GeneratorContext::new();
        let cube = random_microcube(4, 1, g, 3);
        let err = form.eval_extracted(&cube, &ctx).unwrap_err();
        assert!(err.is_residue());
        assert!(!validate_form(&form, 1, 3).passed());
    }

    #[test]
    fn degree_zero_passes_vacuously() {
        let g = Groupoid::pair(1, 1);
        let form = DifferentialForm::section(g, MatrixField::new(1, 1, vec![Polynomial::parse("x1^2", 1).unwrap()]).unwrap()).unwrap();
        assert!(validate_form(&form, 0, 3).passed());
    }

    #[test]
    fn rejects_bad_indices() {
        let g = Groupoid::pair(2, 1);
        let field = MatrixField::identity(2, 1);
        let bad = |index: Vec<usize>| DifferentialForm::classical(g, 2, vec![ClassicalTerm { index, field: field.clone() }]);
        assert!(bad(vec![1, 0]).is_err());
        assert!(bad(vec![0, 2]).is_err());
        assert!(bad(vec![0]).is_err());
        assert!(bad(vec![0, 1]).is_ok());
    }

    #[test]
    fn spec_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let form = DifferentialForm::random_classical(&mut rng, Groupoid::bundle(2, 2), 1, 2, 3, 2);
        let spec = FormSpec::from_form(&form).unwrap();
        let rebuilt = spec.build().unwrap();
        assert_eq!(FormSpec::from_form(&rebuilt).unwrap(), spec);
    }

    #[test]
    fn degree_mismatch() {
        let g = Groupoid::pair(2, 2);
        let form = planted_invalid_form(g);
        let ctx = GeneratorContext::new();
        let err = form.eval(&random_microcube(1, 2, g, 2), &ctx).unwrap_err();
        assert!(matches!(err, FormError::DegreeMismatch { degree: 1, arity: 2 }));
    }
}
