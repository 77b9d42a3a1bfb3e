//! Reference computations over plain rationals, sharing no code with the
//! Weil-algebra pipeline.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forms::ClassicalTerm;

pub type RationalMatrix = Vec<BigRational>;

pub fn mat_mul(k: usize, a: &[BigRational], b: &[BigRational]) -> RationalMatrix {
    let mut out = vec![BigRational::zero(); k * k];
    for r in 0..k {
        for c in 0..k {
            let mut acc = BigRational::zero();
            for j in 0..k {
                acc += &a[r * k + j] * &b[j * k + c];
            }
            out[r * k + c] = acc;
        }
    }
    out
}

/// `X2 X1 - X1 X2`.
pub fn commutator(k: usize, x1: &[BigRational], x2: &[BigRational]) -> RationalMatrix {
    let ab = mat_mul(k, x2, x1);
    let ba = mat_mul(k, x1, x2);
    ab.iter().zip(&ba).map(|(p, q)| p - q).collect()
}

/// Determinant by the Leibniz formula.
pub fn det(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = BigRational::zero();
    permute_all(&mut perm, 0, &mut |p| {
        let mut term = BigRational::one();
        for (r, c) in p.iter().enumerate() {
            term *= &rows[r][*c];
        }
        let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|(i, j)| p[*i] > p[*j]).count();
        if inversions % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    });
    total
}

fn permute_all(p: &mut Vec<usize>, start: usize, f: &mut dyn FnMut(&[usize])) {
    if start == p.len() {
        f(p);
        return;
    }
    for i in start..p.len() {
        p.swap(start, i);
        permute_all(p, start + 1, f);
        p.swap(start, i);
    }
}

/// The coordinate exterior derivative
/// `d(sum_K A_K dx_K) = sum_K sum_b dA_K/dx_b dx_b ^ dx_K`
/// evaluated at `base` on the vectors `velocities`.
pub fn exterior_derivative(k: usize, terms: &[ClassicalTerm], base: &[BigRational], velocities: &[Vec<BigRational>]) -> RationalMatrix {
    let mut out = vec![BigRational::zero(); k * k];
    for t in terms {
        for b in 0..base.len() {
            let index: Vec<usize> = std::iter::once(b).chain(t.index.iter().copied()).collect();
            let rows: Vec<Vec<BigRational>> = index.iter().map(|i| velocities.iter().map(|v| v[*i].clone()).collect()).collect();
            let weight = det(&rows);
            if weight.is_zero() {
                continue;
            }
            let coeff = t.field.derivative(b).eval_rational(base);
            for (o, c) in out.iter_mut().zip(coeff) {
                *o += c * &weight;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&[]), q(1));
        assert_eq!(det(&[vec![q(1), q(2)], vec![q(3), q(4)]]), q(-2));
        let m = vec![vec![q(2), q(0), q(1)], vec![q(1), q(3), q(2)], vec![q(1), q(1), q(2)]];
        assert_eq!(det(&m), q(6));
    }

    #[test]
    fn commutator_of_elementary_matrices() {
        let e12 = vec![q(0), q(1), q(0), q(0)];
        let e21 = vec![q(0), q(0), q(1), q(0)];
        assert_eq!(commutator(2, &e12, &e21), vec![q(-1), q(0), q(0), q(1)]);
    }
}
