//! Reference values computed by hand, independently of the library.

use coboundary::forms::{ClassicalTerm, DifferentialForm};
use coboundary::groupoid::{Arrow, Groupoid, Microcube, TangentVector};
use coboundary::operators::{d_contour, d_plus, d_times};
use coboundary::poly::MatrixField;
use coboundary::representation::Representation;
use coboundary::weil::{GeneratorContext, WeilElement, WeilMatrix};

fn v(xs: &[i64]) -> Vec<WeilElement> {
    xs.iter().map(|x| WeilElement::from_int(*x)).collect()
}

fn field(rows: &[&[&str]], nvars: usize) -> MatrixField {
    let rows: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect();
    MatrixField::parse(&rows, nvars).unwrap()
}

#[test]
fn bracket_of_fixed_matrices() {
    // X2 X1 - X1 X2 with X1 = [[1,2],[3,4]], X2 = [[0,1],[1,0]]
    let ctx = GeneratorContext::new();
    let x1 = TangentVector::new(vec![], WeilMatrix::from_int_rows(&[&[1, 2], &[3, 4]]));
    let x2 = TangentVector::new(vec![], WeilMatrix::from_int_rows(&[&[0, 1], &[1, 0]]));
    assert_eq!(x1.bracket(&x2, &ctx).unwrap().matrix, WeilMatrix::from_int_rows(&[&[1, 3], &[-3, -1]]));
}

#[test]
fn gradient_of_cubic_along_a_path() {
    // f = x1^2 x2 at (1, 2) along (3, -1): 4*3 + 1*(-1) = 11
    let g = Groupoid::pair(2, 1);
    let f = DifferentialForm::section(g, field(&[&["x1^2*x2"]], 2)).unwrap();
    let path = Microcube::pair(g, vec![v(&[1, 2]), v(&[3, -1])]).unwrap();
    let ctx = GeneratorContext::new();
    let value = d_plus(&f, &Representation::Trivial { fiber_dim: 1 }).unwrap().eval(&path, &ctx).unwrap();
    assert_eq!(value, WeilMatrix::from_int_rows(&[&[11]]));
}

#[test]
fn exterior_derivative_ignores_second_order_data() {
    // d(x2^2 dx1) = 2 x2 dx2 ^ dx1; on the unit square at (1, 3) this is -6
    let g = Groupoid::pair(2, 1);
    let form = DifferentialForm::classical(
        g,
        1,
        vec![ClassicalTerm {
            index: vec![0],
            field: field(&[&["x2^2"]], 2),
        }],
    )
    .unwrap();
    let rep = Representation::Trivial { fiber_dim: 1 };
    let ctx = GeneratorContext::new();
    let expected = WeilMatrix::from_int_rows(&[&[-6]]);
    for corner in [[0, 0], [5, 7]] {
        let square = Microcube::pair(g, vec![v(&[1, 3]), v(&[1, 0]), v(&[0, 1]), v(&corner)]).unwrap();
        assert_eq!(d_plus(&form, &rep).unwrap().eval(&square, &ctx).unwrap(), expected);
        assert_eq!(d_times(&form, &rep).unwrap().eval(&square, &ctx).unwrap(), expected);
    }
}

#[test]
fn gauge_twisted_derivative() {
    // f = x^2, T = 1 + x^2 at x = 1 along v = 1: f' - (T'/T) f = 2 - 1 = 1
    let g = Groupoid::pair(1, 1);
    let f = DifferentialForm::section(g, field(&[&["x1^2"]], 1)).unwrap();
    let rep = Representation::Gauge {
        field: field(&[&["1 + x1^2"]], 1),
    };
    let path = Microcube::pair(g, vec![v(&[1]), v(&[1])]).unwrap();
    let ctx = GeneratorContext::new();
    assert_eq!(d_plus(&f, &rep).unwrap().eval(&path, &ctx).unwrap(), WeilMatrix::from_int_rows(&[&[1]]));
}

#[test]
fn gauge_transport_matches_direct_computation() {
    // T(x) = I + x1 N with N^2 = 0: T(x + v d) T(x)^-1 = I + v1 d N
    let rep = Representation::Gauge {
        field: field(&[&["1", "x1"], &["0", "1"]], 2),
    };
    let ctx = GeneratorContext::new();
    let d = WeilElement::generator(ctx.fresh());
    let arrow = Arrow::Pair {
        source: v(&[2, 5]),
        target: vec![WeilElement::from_int(2) + (&d * &WeilElement::from_int(3)), WeilElement::from_int(5) - d.clone()],
    };
    let map = rep.transport(&arrow).unwrap();
    let x = WeilMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
    let n = WeilMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
    let expected = x.add(&n.mul(&x).scale_by(&(&d * &WeilElement::from_int(3))));
    assert_eq!(map.apply(&x), expected);
}

#[test]
fn contour_of_elementary_constant_form() {
    let g = Groupoid::pair(2, 2);
    let form = DifferentialForm::classical(
        g,
        1,
        vec![
            ClassicalTerm {
                index: vec![0],
                field: field(&[&["0", "1"], &["0", "0"]], 2),
            },
            ClassicalTerm {
                index: vec![1],
                field: field(&[&["0", "0"], &["1", "0"]], 2),
            },
        ],
    )
    .unwrap();
    let square = Microcube::pair(g, vec![v(&[4, -1]), v(&[1, 0]), v(&[0, 1]), v(&[0, 0])]).unwrap();
    let ctx = GeneratorContext::new();
    let rep = Representation::Trivial { fiber_dim: 2 };
    assert_eq!(
        d_contour(&form, &rep).unwrap().eval(&square, &ctx).unwrap(),
        WeilMatrix::from_int_rows(&[&[-1, 0], &[0, 1]])
    );
}

#[test]
fn weil_inverse_of_dual_number() {
    // (1 + d)(1 - d) = 1 and (I + d N)^-1 = I - d N
    let ctx = GeneratorContext::new();
    let d = WeilElement::generator(ctx.fresh());
    assert!((WeilElement::one() + d.clone()) * (WeilElement::one() - d.clone()) == WeilElement::one());
    let n = WeilMatrix::from_int_rows(&[&[1, 2], &[3, 4]]);
    let m = WeilMatrix::identity(2).add(&n.scale_by(&d));
    assert_eq!(m.inverse().unwrap(), WeilMatrix::identity(2).sub(&n.scale_by(&d)));
}
