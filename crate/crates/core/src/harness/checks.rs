use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::oracle;
use super::{trial_rng, Case, CheckConfig, Recorder, Replay};
use crate::forms::{check_form_axioms, check_phi_conditions, planted_invalid_form, random_axiom_inputs, DifferentialForm, FormError};
use crate::groupoid::{random_rational, random_rational_matrix, Groupoid, GroupoidKind, Microcube, MicrocubeFamily, TangentVector};
use crate::io::{EvalInput, MicrocubeJson, RepresentationSpec};
use crate::forms::FormSpec;
use crate::operators::{d_contour, d_plus, d_times, d_times_ordered, mc_defect, FactorOrder};
use crate::representation::{check_star_homomorphism, interchange_sides, HomomorphismCheck, Representation};
use crate::weil::{GeneratorContext, WeilElement, WeilMatrix};

type Check = fn(&CheckConfig, &mut Recorder);

pub(super) fn lookup(name: &str) -> Option<Check> {
    Some(match name {
        "simplicial" => simplicial,
        "lemma41" => lemma41,
        "lemma42" => lemma42,
        "lemma43" => lemma43,
        "star_compat" => star_compat,
        "bracket_oracle" => bracket_oracle,
        "jacobi" => jacobi,
        "tangent_add" => tangent_add,
        "tangent_inverse" => tangent_inverse,
        "form_axioms" => form_axioms,
        "phi_conditions" => phi_conditions,
        "residue_negative" => residue_negative,
        "dplus_sq_zero" => dplus_sq_zero,
        "coincidence" => coincidence,
        "order_indep" => order_indep,
        "mc_formula" => mc_formula,
        "closed_corollary" => closed_corollary,
        "classical_cross" => classical_cross,
        _ => return None,
    })
}

/// Coefficient fields of random forms have degree at most 2.
const FIELD_DEGREE: u32 = 2;
const MAX_TERMS: usize = 2;

fn random_form(rng: &mut ChaCha8Rng, cfg: &CheckConfig, g: Groupoid, degree: usize) -> DifferentialForm {
    DifferentialForm::random_classical(rng, g, degree, FIELD_DEGREE, cfg.bound, MAX_TERMS)
}

fn cube(rng: &mut ChaCha8Rng, cfg: &CheckConfig, g: Groupoid, arity: usize) -> Microcube {
    Microcube::random(rng, g, arity, cfg.bound)
}

fn replay(op: &str, form: &DifferentialForm, rep: &Representation, cube: &Microcube) -> Option<Replay> {
    Some(Replay {
        op: op.to_string(),
        input: EvalInput {
            form: Some(FormSpec::from_form(form)?),
            representation: Some(RepresentationSpec::from_rep(rep)),
            microcube: Some(MicrocubeJson::from_cube(cube).ok()?),
            ..EvalInput::default()
        },
    })
}

fn to_rational(m: &WeilMatrix) -> Vec<BigRational> {
    m.entries().iter().map(WeilElement::constant_term).collect()
}

fn from_rational(k: usize, m: &[BigRational]) -> WeilMatrix {
    WeilMatrix::from_rational(k, m)
}

fn generic(ctx: &GeneratorContext) -> WeilElement {
    WeilElement::generator(ctx.fresh())
}

// ---- groupoid structure -------------------------------------------------

fn simplicial(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "simplicial";
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for g in cfg.groupoids() {
            let case = g.kind.name();
            let c3 = cube(&mut rng, cfg, g, 3);
            let c2 = cube(&mut rng, cfg, g, 2);
            let c1 = cube(&mut rng, cfg, g, 1);
            let nf = 2.min(g.velocity_dim());
            let form = random_form(&mut rng, cfg, g, nf);
            let low = cube(&mut rng, cfg, g, nf - 1);
            rec.run(trial, case, "cubical identities", |rec| {
                for j in 2..=3 {
                    for i in 1..j {
                        let lhs = c3.face(j)?.face(i)?;
                        let rhs = c3.face(i)?.face(j - 1)?;
                        rec.expect(trial, case, &format!("face {j} then face {i}"), lhs == rhs, || (format!("{lhs:?}"), format!("{rhs:?}")));
                    }
                }
                for j in 1..=3 {
                    let s = c2.degeneracy(j)?;
                    rec.expect(trial, case, &format!("degeneracy {j} is degenerate"), s.is_degenerate(), || ("not degenerate".into(), "degenerate".into()));
                    for i in 1..=3 {
                        let lhs = s.face(i)?;
                        let rhs = if i < j {
                            c2.face(i)?.degeneracy(j - 1)?
                        } else if i == j {
                            c2.clone()
                        } else {
                            c2.face(i - 1)?.degeneracy(j)?
                        };
                        rec.expect(trial, case, &format!("face {i} of degeneracy {j}"), lhs == rhs, || (format!("{lhs:?}"), format!("{rhs:?}")));
                    }
                }
                for j in 1..=2 {
                    for i in 1..=j {
                        let lhs = c1.degeneracy(j)?.degeneracy(i)?;
                        let rhs = c1.degeneracy(i)?.degeneracy(j + 1)?;
                        rec.expect(trial, case, &format!("degeneracies {i} <= {j}"), lhs == rhs, || (format!("{lhs:?}"), format!("{rhs:?}")));
                    }
                }
                if nf >= 1 {
                    let ctx = GeneratorContext::new();
                    for j in 1..=nf {
                        let value = form.eval(&low.degeneracy(j)?, &ctx)?;
                        rec.expect(trial, case, "forms vanish on degenerate cubes", value.is_zero(), || (value.to_string(), "0".into()));
                    }
                }
                Ok(())
            });
        }
    }
}

fn lemma41(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "lemma41";
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for g in cfg.groupoids() {
            let case = g.kind.name();
            let c = cube(&mut rng, cfg, g, 3);
            rec.run(trial, case, "faces and axes", |rec| {
                for j in 1..=3 {
                    for i in 1..=2 {
                        let lhs = c.face(j)?.axis(i)?;
                        let rhs = if j <= i { c.axis(i + 1)? } else { c.axis(i)? };
                        rec.expect(trial, case, &format!("axis {i} of face {j}"), lhs == rhs, || (format!("{lhs:?}"), format!("{rhs:?}")));
                    }
                }
                Ok(())
            });
        }
    }
}

fn lemma42(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "lemma42";
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for g in cfg.groupoids() {
            let case = g.kind.name();
            let c = cube(&mut rng, cfg, g, 3);
            let ctx = GeneratorContext::new();
            let a = WeilElement::constant(random_rational(&mut rng, cfg.bound));
            let params = [WeilElement::zero(), generic(&ctx), &generic(&ctx) * &a];
            rec.run(trial, case, "shifted faces commute", |rec| {
                for i in 2..=3 {
                    for j in 1..i {
                        for e in &params {
                            for e2 in &params {
                                let lhs = c.shifted_face(i, e, &ctx)?.shifted_face(j, e2, &ctx)?;
                                let rhs = c.shifted_face(j, e2, &ctx)?.shifted_face(i - 1, e, &ctx)?;
                                rec.expect(
                                    trial,
                                    case,
                                    &format!("shifted faces i = {i}, j = {j}, e = {e}, e' = {e2}"),
                                    lhs == rhs,
                                    || (format!("{lhs:?}"), format!("{rhs:?}")),
                                );
                            }
                        }
                    }
                }
                Ok(())
            });
        }
    }
}

fn lemma43(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "lemma43";
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            let label = case.label();
            let c = cube(&mut rng, cfg, case.groupoid, 3);
            let ctx = GeneratorContext::new();
            rec.run(trial, &label, "interchange of inverse transports", |rec| {
                for i in 2..=3 {
                    for j in 1..i {
                        let sides = interchange_sides(&case.rep, &c, i, j, &ctx).map_err(FormError::from)?;
                        let id = format!("interchange i = {i}, j = {j}");
                        rec.expect_eq(trial, &label, &id, sides.via_i.matrix(), sides.direct.matrix(), || None);
                        rec.expect_eq(trial, &label, &id, sides.via_j.matrix(), sides.direct.matrix(), || None);
                    }
                }
                Ok(())
            });
        }
    }
}

fn star_compat(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "star_compat";
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            let label = case.label();
            let square = cube(&mut rng, cfg, case.groupoid, 2);
            let ctx = GeneratorContext::new();
            rec.run(trial, &label, "star decomposition", |rec| {
                let param = ctx.fresh();
                let family = MicrocubeFamily {
                    param,
                    cube: square.shifted_face(1, &WeilElement::generator(param), &ctx)?,
                };
                let t = square.axis(1)?;
                let starred = family.star(&t, &ctx)?;
                rec.expect(trial, &label, "family star axis recovers the square", starred == square, || {
                    (format!("{starred:?}"), format!("{square:?}"))
                });
                match check_star_homomorphism(&case.rep, &family, &t, &ctx)? {
                    HomomorphismCheck::Pass => {}
                    HomomorphismCheck::Fail { lhs, rhs } => rec.fail(trial, &label, "transport respects star", lhs, rhs, None),
                }
                Ok(())
            });
        }
    }
}

// ---- the Lie algebra of the fiber ----------------------------------------

fn tangent(rng: &mut ChaCha8Rng, k: usize, bound: i64) -> TangentVector {
    TangentVector::new(Vec::new(), random_rational_matrix(rng, k, bound))
}

fn bracket_oracle(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "bracket_oracle";
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for k in [cfg.fiber_dim, cfg.fiber_dim + 1] {
            let case = format!("k = {k}");
            let (t1, t2) = (tangent(&mut rng, k, cfg.bound), tangent(&mut rng, k, cfg.bound));
            let ctx = GeneratorContext::new();
            rec.run(trial, &case, "bracket", |rec| {
                let lhs = t1.bracket(&t2, &ctx)?.matrix;
                let rhs = from_rational(k, &oracle::commutator(k, &to_rational(&t1.matrix), &to_rational(&t2.matrix)));
                rec.expect_eq(trial, &case, "group-word bracket equals X2 X1 - X1 X2", &lhs, &rhs, || {
                    Some(Replay {
                        op: "bracket".into(),
                        input: EvalInput {
                            x1: crate::io::matrix_to_rows(&t1.matrix).ok(),
                            x2: crate::io::matrix_to_rows(&t2.matrix).ok(),
                            ..EvalInput::default()
                        },
                    })
                });
                Ok(())
            });
        }
    }
}

fn jacobi(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "jacobi";
    let k = cfg.fiber_dim;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        let (x, y, z) = (tangent(&mut rng, k, cfg.bound), tangent(&mut rng, k, cfg.bound), tangent(&mut rng, k, cfg.bound));
        let ctx = GeneratorContext::new();
        rec.run(trial, "", "Lie algebra", |rec| {
            let xy = x.bracket(&y, &ctx)?;
            let yx = y.bracket(&x, &ctx)?;
            rec.expect_eq(trial, "", "antisymmetry", &xy.matrix, &yx.matrix.neg(), || None);
            let sum = xy
                .bracket(&z, &ctx)?
                .add(&y.bracket(&z, &ctx)?.bracket(&x, &ctx)?)?
                .add(&z.bracket(&x, &ctx)?.bracket(&y, &ctx)?)?;
            rec.expect_eq(trial, "", "Jacobi identity", &sum.matrix, &WeilMatrix::zero(k), || None);
            let a = random_rational(&mut trial_rng(cfg.seed, "jacobi/scale", trial), cfg.bound);
            rec.expect_eq(trial, "", "bilinearity", &x.scale(&a).bracket(&y, &ctx)?.matrix, &xy.matrix.scale(&a), || None);
            Ok(())
        });
    }
}

fn tangent_add(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "tangent_add";
    let k = cfg.fiber_dim;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        let (t1, t2) = (tangent(&mut rng, k, cfg.bound), tangent(&mut rng, k, cfg.bound));
        let ctx = GeneratorContext::new();
        let g = ctx.fresh_many(2);
        for (label, w) in [("d", WeilElement::generator(g[0])), ("d1 d2", WeilElement::product_of(&g))] {
            rec.run(trial, label, "sum of tangent vectors", |rec| {
                let sum = t1.add(&t2)?.eval_matrix(&w)?;
                let (a, b) = (t1.eval_matrix(&w)?, t2.eval_matrix(&w)?);
                rec.expect_eq(trial, label, "(t1 + t2)_w = (t2)_w (t1)_w", &sum, &b.mul(&a), || None);
                rec.expect_eq(trial, label, "(t1 + t2)_w = (t1)_w (t2)_w", &sum, &a.mul(&b), || None);
                Ok(())
            });
        }
    }
}

fn tangent_inverse(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "tangent_inverse";
    let k = cfg.fiber_dim;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        let t = tangent(&mut rng, k, cfg.bound);
        let ctx = GeneratorContext::new();
        let d = generic(&ctx);
        rec.run(trial, "", "inverse", |rec| {
            let forward = t.eval_matrix(&d)?;
            let back = t.eval_matrix(&-&d)?;
            rec.expect_eq(trial, "", "t_{-d} = (t_d)^-1", &back, &forward.inverse()?, || None);
            rec.expect_eq(trial, "", "t_{-d} t_d = 1", &back.mul(&forward), &WeilMatrix::identity(k), || None);
            rec.expect_eq(trial, "", "t_0 = 1", &t.eval_matrix(&WeilElement::zero())?, &WeilMatrix::identity(k), || None);
            Ok(())
        });
    }
}

// ---- forms ---------------------------------------------------------------

/// Forms checked by the axiom validators: random classical forms of the
/// configured degrees and the outputs of every operator.
fn forms_under_test(rng: &mut ChaCha8Rng, cfg: &CheckConfig, case: &Case) -> Result<Vec<(String, DifferentialForm)>, FormError> {
    let g = case.groupoid;
    let mut out = Vec::new();
    for &n in &cfg.degrees {
        out.push((format!("classical {n}-form"), random_form(rng, cfg, g, n)));
    }
    let w0 = random_form(rng, cfg, g, 0);
    let w1 = random_form(rng, cfg, g, 1);
    out.push(("d+ of a 0-form".into(), d_plus(&w0, &case.rep)?));
    out.push(("d+ of a 1-form".into(), d_plus(&w1, &case.rep)?));
    out.push(("dx of a 1-form".into(), d_times(&w1, &case.rep)?));
    out.push(("dcontour of a 1-form".into(), d_contour(&w1, &case.rep)?));
    Ok(out)
}

fn form_checks(cfg: &CheckConfig, rec: &mut Recorder, name: &str, phi: bool) {
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            let label = case.label();
            let forms = match forms_under_test(&mut rng, cfg, case) {
                Ok(f) => f,
                Err(e) => {
                    rec.error(trial, &label, "operator construction", e);
                    continue;
                }
            };
            for (what, form) in forms {
                let n = form.degree();
                let c = cube(&mut rng, cfg, case.groupoid, n);
                if n == 0 {
                    continue;
                }
                let (a, i, j, sigma) = random_axiom_inputs(&mut rng, n, cfg.bound);
                let ctx = GeneratorContext::new();
                let outcome = if phi {
                    check_phi_conditions(&form, &c, &a, i, j, &sigma, &ctx)
                } else {
                    check_form_axioms(&form, &c, &a, i, &sigma, &ctx)
                };
                match outcome {
                    Ok(failures) => {
                        for f in failures {
                            rec.fail(trial, &label, &what, f, "axiom holds".into(), None);
                        }
                    }
                    Err(e) => rec.error(trial, &label, &what, e),
                }
            }
        }
    }
}

fn form_axioms(cfg: &CheckConfig, rec: &mut Recorder) {
    form_checks(cfg, rec, "form_axioms", false);
}

fn phi_conditions(cfg: &CheckConfig, rec: &mut Recorder) {
    form_checks(cfg, rec, "phi_conditions", true);
}

fn residue_negative(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "residue_negative";
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            let label = case.label();
            let g = case.groupoid;
            let planted = planted_invalid_form(g);
            let valid = random_form(&mut rng, cfg, g, 1);
            let c1 = cube(&mut rng, cfg, g, 1);
            let c2 = cube(&mut rng, cfg, g, 2);
            let ctx = GeneratorContext::new();
            let expect_residue = |rec: &mut Recorder, what: &str, r: Result<WeilMatrix, FormError>, replay: Option<Replay>| match r {
                Err(e) if e.is_residue() => {}
                Err(e) => rec.fail(trial, &label, what, format!("error: {e}"), "residue".into(), replay),
                Ok(v) => rec.fail(trial, &label, what, v.to_string(), "residue".into(), replay),
            };
            expect_residue(rec, "extraction of the planted form", planted.eval_extracted(&c1, &ctx), None);
            let planted_d = d_plus(&planted, &case.rep);
            match planted_d {
                Ok(f) => expect_residue(rec, "d+ of the planted form", f.eval(&c2, &ctx), replay("dplus", &planted, &case.rep, &c2)),
                Err(e) => rec.error(trial, &label, "d+ of the planted form", e),
            }
            if let Ok(f) = d_times(&planted, &case.rep) {
                expect_residue(rec, "dx of the planted form", f.eval(&c2, &ctx), replay("dtimes", &planted, &case.rep, &c2));
            }
            if let Ok(f) = d_contour(&planted, &case.rep) {
                expect_residue(rec, "dcontour of the planted form", f.eval(&c2, &ctx), replay("dcontour", &planted, &case.rep, &c2));
            }
            rec.run(trial, &label, "valid control form", |_| d_plus(&valid, &case.rep)?.eval(&c2, &ctx).map(|_| ()));
        }
    }
}

// ---- operators -----------------------------------------------------------

fn dplus_sq_zero(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "dplus_sq_zero";
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            for n in [0, 1].into_iter().filter(|n| cfg.has_degree(*n)) {
                let label = format!("{} degree {n}", case.label());
                let form = random_form(&mut rng, cfg, case.groupoid, n);
                let c = cube(&mut rng, cfg, case.groupoid, n + 2);
                let ctx = GeneratorContext::new();
                let k = case.groupoid.fiber_dim;
                rec.run(trial, &label, "d+ d+ = 0", |rec| {
                    let value = d_plus(&d_plus(&form, &case.rep)?, &case.rep)?.eval(&c, &ctx)?;
                    rec.expect_eq(trial, &label, "d+ d+ = 0", &value, &WeilMatrix::zero(k), || replay("dplus2", &form, &case.rep, &c));
                    if n >= 1 {
                        let value = d_times(&d_times(&form, &case.rep)?, &case.rep)?.eval(&c, &ctx)?;
                        rec.expect_eq(trial, &label, "dx dx = 0", &value, &WeilMatrix::zero(k), || replay("dtimes2", &form, &case.rep, &c));
                    }
                    Ok(())
                });
            }
        }
    }
}

fn operator_pairs(cfg: &CheckConfig, rec: &mut Recorder, name: &str, reversed: bool) {
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            for n in [1, 2].into_iter().filter(|n| cfg.has_degree(*n)) {
                let label = format!("{} degree {n}", case.label());
                let form = random_form(&mut rng, cfg, case.groupoid, n);
                let c = cube(&mut rng, cfg, case.groupoid, n + 1);
                let ctx = GeneratorContext::new();
                rec.run(trial, &label, name, |rec| {
                    let times = d_times(&form, &case.rep)?.eval(&c, &ctx)?;
                    if reversed {
                        let rev = d_times_ordered(&form, &case.rep, FactorOrder::Descending)?.eval(&c, &ctx)?;
                        rec.expect_eq(trial, &label, "dx in index order = dx in reversed order", &times, &rev, || {
                            replay("dtimes", &form, &case.rep, &c)
                        });
                    } else {
                        let plus = d_plus(&form, &case.rep)?.eval(&c, &ctx)?;
                        rec.expect_eq(trial, &label, "d+ = dx", &plus, &times, || replay("dtimes", &form, &case.rep, &c));
                    }
                    Ok(())
                });
            }
        }
    }
}

fn coincidence(cfg: &CheckConfig, rec: &mut Recorder) {
    operator_pairs(cfg, rec, "coincidence", false);
}

fn order_indep(cfg: &CheckConfig, rec: &mut Recorder) {
    operator_pairs(cfg, rec, "order_indep", true);
}

/// `[omega(gamma^2_0), omega(gamma^1_0)]` by the rational oracle.
fn face_bracket(form: &DifferentialForm, c: &Microcube, ctx: &GeneratorContext) -> Result<WeilMatrix, FormError> {
    let k = form.fiber_dim();
    let a1 = to_rational(&form.eval(&c.face(1)?, ctx)?);
    let a2 = to_rational(&form.eval(&c.face(2)?, ctx)?);
    Ok(from_rational(k, &oracle::commutator(k, &a2, &a1)))
}

fn mc_formula(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "mc_formula";
    let cases = cfg.cases();
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for case in &cases {
            let label = case.label();
            let form = random_form(&mut rng, cfg, case.groupoid, 1);
            let c = cube(&mut rng, cfg, case.groupoid, 2);
            let ctx = GeneratorContext::new();
            rec.run(trial, &label, "contour defect", |rec| {
                let defect = mc_defect(&form, &case.rep, &c, &ctx)?;
                let expected = face_bracket(&form, &c, &ctx)?;
                rec.expect_eq(trial, &label, "dcontour - dx = [omega(face 2), omega(face 1)]", &defect, &expected, || {
                    replay("mcdefect", &form, &case.rep, &c)
                });
                Ok(())
            });
        }
    }
}

fn closed_corollary(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "closed_corollary";
    if cfg.groupoid == Some(GroupoidKind::Bundle) || cfg.rep.map_or(false, |r| r != crate::representation::RepresentationKind::Trivial) {
        return;
    }
    let g = Groupoid::pair(cfg.base_dim, cfg.fiber_dim);
    let rep = Representation::Trivial { fiber_dim: cfg.fiber_dim };
    let k = cfg.fiber_dim;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        let form = DifferentialForm::random_classical(&mut rng, g, 1, 0, cfg.bound, g.velocity_dim());
        let c = cube(&mut rng, cfg, g, 2);
        let ctx = GeneratorContext::new();
        let case = "pair/trivial";
        rec.run(trial, case, "closed forms", |rec| {
            let plus = d_plus(&form, &rep)?.eval(&c, &ctx)?;
            if !rec.expect_eq(trial, case, "constant form is closed under d+", &plus, &WeilMatrix::zero(k), || replay("dplus", &form, &rep, &c)) {
                return Ok(());
            }
            let times = d_times(&form, &rep)?.eval(&c, &ctx)?;
            rec.expect_eq(trial, case, "constant form is closed under dx", &times, &WeilMatrix::zero(k), || replay("dtimes", &form, &rep, &c));
            let contour = d_contour(&form, &rep)?.eval(&c, &ctx)?;
            let expected = face_bracket(&form, &c, &ctx)?;
            rec.expect_eq(trial, case, "dcontour of a closed form is the face bracket", &contour, &expected, || {
                replay("dcontour", &form, &rep, &c)
            });
            Ok(())
        });
    }
}

fn classical_cross(cfg: &CheckConfig, rec: &mut Recorder) {
    let name = "classical_cross";
    if cfg.groupoid == Some(GroupoidKind::Bundle) || cfg.rep.map_or(false, |r| r != crate::representation::RepresentationKind::Trivial) {
        return;
    }
    let g = Groupoid::pair(cfg.base_dim, cfg.fiber_dim);
    let rep = Representation::Trivial { fiber_dim: cfg.fiber_dim };
    let k = cfg.fiber_dim;
    for trial in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, name, trial);
        for n in [0, 1].into_iter().filter(|n| cfg.has_degree(*n)) {
            let case = format!("pair/trivial degree {n}");
            let form = random_form(&mut rng, cfg, g, n);
            let mut c = cube(&mut rng, cfg, g, n + 1);
            if g.base_dim > n && rng.gen_bool(0.25) {
                // also exercise axis-aligned coordinate cubes
                let mut axes: Vec<usize> = (0..g.base_dim).collect();
                axes.shuffle(&mut rng);
                c = coordinate_cube(g, &c.source().clone(), &axes[..n + 1]);
            }
            let ctx = GeneratorContext::new();
            rec.run(trial, &case, "classical exterior derivative", |rec| {
                let value = d_plus(&form, &rep)?.eval(&c, &ctx)?;
                let base: Vec<BigRational> = c.source().iter().map(WeilElement::constant_term).collect();
                let velocities: Vec<Vec<BigRational>> =
                    (1..=n + 1).map(|s| c.velocity(s).iter().map(WeilElement::constant_term).collect()).collect();
                let terms = form.classical_terms().expect("classical form");
                let expected = from_rational(k, &oracle::exterior_derivative(k, terms, &base, &velocities));
                rec.expect_eq(trial, &case, "d+ equals the coordinate exterior derivative", &value, &expected, || {
                    replay("dplus", &form, &rep, &c)
                });
                Ok(())
            });
        }
    }
}

/// The cube `(d_1, .., d_n) -> x + d_1 e_{a_1} + .. + d_n e_{a_n}`.
fn coordinate_cube(g: Groupoid, x: &[WeilElement], axes: &[usize]) -> Microcube {
    let n = axes.len();
    let mut table = vec![vec![WeilElement::zero(); g.base_dim]; 1 << n];
    table[0] = x.to_vec();
    for (s, a) in axes.iter().enumerate() {
        table[1 << s][*a] = WeilElement::one();
    }
    Microcube::pair(g, table).expect("well-formed coordinate cube")
}
