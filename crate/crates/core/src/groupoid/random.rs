use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::weil::{WeilElement, WeilMatrix};

use super::{Groupoid, GroupoidKind, Microcube, WeilVector};

/// Rational with numerator in `[-bound, bound]` and denominator in `1..=3`.
pub fn random_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let num = rng.gen_range(-bound..=bound);
    let den = rng.gen_range(1..=3i64);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn random_weil_vector<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> WeilVector {
    (0..dim).map(|_| WeilElement::constant(random_rational(rng, bound))).collect()
}

pub fn random_rational_matrix<R: Rng>(rng: &mut R, size: usize, bound: i64) -> WeilMatrix {
    let entries: Vec<BigRational> = (0..size * size).map(|_| random_rational(rng, bound)).collect();
    WeilMatrix::from_rational(size, &entries)
}

impl Microcube {
    /// Random cube with rational coefficients bounded by `bound`.
    pub fn random<R: Rng>(rng: &mut R, groupoid: Groupoid, arity: usize, bound: i64) -> Microcube {
        let n = 1usize << arity;
        match groupoid.kind {
            GroupoidKind::Pair => {
                let table = (0..n).map(|_| random_weil_vector(rng, groupoid.base_dim, bound)).collect();
                Microcube::pair(groupoid, table).expect("well-formed random table")
            }
            GroupoidKind::Bundle => {
                let base = random_weil_vector(rng, groupoid.base_dim, bound);
                let mut table: Vec<WeilMatrix> = (0..n)
                    .map(|_| random_rational_matrix(rng, groupoid.fiber_dim, bound))
                    .collect();
                table[0] = WeilMatrix::identity(groupoid.fiber_dim);
                Microcube::bundle(groupoid, base, table).expect("well-formed random table")
            }
        }
    }
}

/// Deterministic random cube for a seed.
pub fn random_microcube(seed: u64, arity: usize, groupoid: Groupoid, bound: i64) -> Microcube {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Microcube::random(&mut rng, groupoid, arity, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn deterministic_under_seed() {
        let g = Groupoid::bundle(2, 2);
        assert_eq!(random_microcube(7, 2, g, 3), random_microcube(7, 2, g, 3));
        assert_ne!(random_microcube(7, 2, g, 3), random_microcube(8, 2, g, 3));
    }

    #[test]
    fn arity_zero_is_identity() {
        for g in [Groupoid::pair(2, 2), Groupoid::bundle(2, 2)] {
            let c = random_microcube(1, 0, g, 4);
            assert_eq!(c.arity(), 0);
            assert!(c.eval(&[]).unwrap().is_identity());
        }
    }

    #[test]
    fn coefficients_within_bound() {
        let bound = BigRational::from_integer(BigInt::from(2));
        let c = random_microcube(3, 3, Groupoid::pair(3, 1), 2);
        for v in c.target_table() {
            for x in v {
                assert!(x.constant_term().abs() <= bound);
            }
        }
    }
}
