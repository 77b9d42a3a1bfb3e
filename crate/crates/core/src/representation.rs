//! Representations of the groupoid on the Lie algebra bundle `M x gl_k`.
//!
//! A representation sends every arrow `x -> y` to an invertible linear map
//! from the fiber at `x` to the fiber at `y`. Fibers are `k x k` matrices;
//! linear maps on them are `k^2 x k^2` Weil matrices acting on the row-major
//! flattening.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::groupoid::{Arrow, GroupoidError, GroupoidKind, Microcube, MicrocubeFamily};
use crate::poly::{MatrixField, Polynomial};
use crate::weil::{GeneratorContext, WeilElement, WeilError, WeilMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepresentationKind {
    Trivial,
    Adjoint,
    Gauge,
}

impl RepresentationKind {
    pub const ALL: [RepresentationKind; 3] = [Self::Trivial, Self::Adjoint, Self::Gauge];

    pub fn name(self) -> &'static str {
        match self {
            Self::Trivial => "trivial",
            Self::Adjoint => "adjoint",
            Self::Gauge => "gauge",
        }
    }

    /// Whether this kind acts on arrows of the given groupoid.
    pub fn supports(self, kind: GroupoidKind) -> bool {
        !matches!(
            (self, kind),
            (Self::Adjoint, GroupoidKind::Pair) | (Self::Gauge, GroupoidKind::Bundle)
        )
    }
}

impl std::str::FromStr for RepresentationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trivial" => Ok(Self::Trivial),
            "adjoint" => Ok(Self::Adjoint),
            "gauge" => Ok(Self::Gauge),
            other => Err(format!("unknown representation {other:?} (expected trivial, adjoint or gauge)")),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("{rep} representation does not act on the {groupoid} groupoid")]
    Incompatible { rep: &'static str, groupoid: &'static str },
    #[error("fiber dimension {found} does not match the representation's {expected}")]
    FiberDim { expected: usize, found: usize },
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
}

/// An invertible linear map between fibers, as a `k^2 x k^2` matrix on
/// row-major flattened `k x k` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberMap {
    fiber_dim: usize,
    matrix: WeilMatrix,
}

impl FiberMap {
    pub fn identity(fiber_dim: usize) -> Self {
        Self {
            fiber_dim,
            matrix: WeilMatrix::identity(fiber_dim * fiber_dim),
        }
    }

    /// Tabulates a linear map on `k x k` matrices from its action on the
    /// elementary matrices.
    pub fn from_fn<F>(fiber_dim: usize, f: F) -> Result<Self, WeilError>
    where
        F: Fn(&WeilMatrix) -> Result<WeilMatrix, WeilError>,
    {
        let n = fiber_dim * fiber_dim;
        let mut matrix = WeilMatrix::zero(n);
        for c in 0..n {
            let mut basis = WeilMatrix::zero(fiber_dim);
            basis.set(c / fiber_dim, c % fiber_dim, WeilElement::one());
            let image = f(&basis)?;
            for (r, x) in image.entries().iter().enumerate() {
                matrix.set(r, c, x.clone());
            }
        }
        Ok(Self { fiber_dim, matrix })
    }

    pub fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    pub fn matrix(&self) -> &WeilMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &WeilMatrix) -> WeilMatrix {
        let v = self.matrix.apply(x.entries());
        WeilMatrix::from_entries(self.fiber_dim, v).expect("fiber shape")
    }

    /// `self o first`.
    pub fn compose(&self, first: &FiberMap) -> Result<Self, WeilError> {
        Ok(Self {
            fiber_dim: self.fiber_dim,
            matrix: self.matrix.try_mul(&first.matrix)?,
        })
    }

    pub fn inverse(&self) -> Result<Self, WeilError> {
        Ok(Self {
            fiber_dim: self.fiber_dim,
            matrix: self.matrix.inverse()?,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// The shipped representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representation {
    /// Every arrow acts as the identity.
    Trivial { fiber_dim: usize },
    /// A bundle arrow `g` acts by `X -> g X g^-1`.
    Adjoint { fiber_dim: usize },
    /// A pair arrow `x -> y` acts by `X -> T(y) T(x)^-1 X`.
    Gauge { field: MatrixField },
}

impl Representation {
    pub fn kind(&self) -> RepresentationKind {
        match self {
            Self::Trivial { .. } => RepresentationKind::Trivial,
            Self::Adjoint { .. } => RepresentationKind::Adjoint,
            Self::Gauge { .. } => RepresentationKind::Gauge,
        }
    }

    pub fn fiber_dim(&self) -> usize {
        match self {
            Self::Trivial { fiber_dim } | Self::Adjoint { fiber_dim } => *fiber_dim,
            Self::Gauge { field } => field.size(),
        }
    }

    /// A built-in representation; gauge kinds get [`Representation::default_gauge`].
    pub fn of_kind(kind: RepresentationKind, base_dim: usize, fiber_dim: usize) -> Self {
        match kind {
            RepresentationKind::Trivial => Self::Trivial { fiber_dim },
            RepresentationKind::Adjoint => Self::Adjoint { fiber_dim },
            RepresentationKind::Gauge => Self::default_gauge(base_dim, fiber_dim),
        }
    }

    /// Upper-triangular gauge field with diagonal `1 + x_a^2` and linear
    /// entries above the diagonal. Its constant term is invertible at every
    /// rational point.
    pub fn default_gauge(base_dim: usize, fiber_dim: usize) -> Self {
        let mut field = MatrixField::zero(base_dim, fiber_dim);
        let one = Polynomial::constant(base_dim, num_rational::BigRational::from_integer(1.into()));
        for i in 0..fiber_dim {
            let x = Polynomial::variable(base_dim, i % base_dim);
            field.set_entry(i, i, one.add(&x.mul(&x)));
            for j in i + 1..fiber_dim {
                field.set_entry(i, j, Polynomial::variable(base_dim, (i + j) % base_dim));
            }
        }
        Self::Gauge { field }
    }

    pub fn check_groupoid(&self, kind: GroupoidKind, fiber_dim: usize) -> Result<(), RepError> {
        if !self.kind().supports(kind) {
            return Err(RepError::Incompatible {
                rep: self.kind().name(),
                groupoid: kind.name(),
            });
        }
        if fiber_dim != self.fiber_dim() {
            return Err(RepError::FiberDim {
                expected: self.fiber_dim(),
                found: fiber_dim,
            });
        }
        Ok(())
    }

    /// The linear map `rho(a)` from the fiber at the source to the fiber at
    /// the target.
    pub fn transport(&self, arrow: &Arrow) -> Result<FiberMap, RepError> {
        let k = self.fiber_dim();
        match (self, arrow) {
            (Self::Trivial { .. }, _) => Ok(FiberMap::identity(k)),
            (Self::Adjoint { .. }, Arrow::Group { element, .. }) => {
                if element.size() != k {
                    return Err(RepError::FiberDim {
                        expected: k,
                        found: element.size(),
                    });
                }
                let inv = element.inverse()?;
                Ok(FiberMap::from_fn(k, |x| element.try_mul(x)?.try_mul(&inv))?)
            }
            (Self::Gauge { field }, Arrow::Pair { source, target }) => {
                let m = field.eval(target).try_mul(&field.eval(source).inverse()?)?;
                Ok(FiberMap::from_fn(k, |x| m.try_mul(x))?)
            }
            (rep, Arrow::Pair { .. }) => Err(RepError::Incompatible {
                rep: rep.kind().name(),
                groupoid: "pair",
            }),
            (rep, Arrow::Group { .. }) => Err(RepError::Incompatible {
                rep: rep.kind().name(),
                groupoid: "bundle",
            }),
        }
    }
}

/// Outcome of a homomorphism check: either exact agreement or a
/// description of both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomomorphismCheck {
    Pass,
    Fail { lhs: String, rhs: String },
}

/// Checks `rho((zeta * t)(d1, d2)) = rho(zeta(d1))_{d2} o rho(t)_{d1}`, the
/// star law for the induced algebroid morphism, at fresh `d1, d2`.
pub fn check_star_homomorphism(
    rep: &Representation,
    zeta: &MicrocubeFamily,
    t: &Microcube,
    ctx: &GeneratorContext,
) -> Result<HomomorphismCheck, RepError> {
    let square = zeta.star(t, ctx)?;
    let g = ctx.fresh_many(2);
    let d1 = WeilElement::generator(g[0]);
    let d2 = WeilElement::generator(g[1]);
    let lhs = rep.transport(&square.eval(&[d1.clone(), d2.clone()])?)?;
    let outer = rep.transport(&zeta.at(&d1)?.eval(std::slice::from_ref(&d2))?)?;
    let inner = rep.transport(&t.eval(std::slice::from_ref(&d1))?)?;
    let rhs = outer.compose(&inner)?;
    Ok(if lhs == rhs {
        HomomorphismCheck::Pass
    } else {
        HomomorphismCheck::Fail {
            lhs: lhs.matrix().to_string(),
            rhs: rhs.matrix().to_string(),
        }
    })
}

/// The two composites compared by the interchange law for inverse
/// transports, plus the direct transport of `gamma(0, .., d_j, .., d_i, .., 0)`
/// inverted. All three agree for a functorial representation.
pub struct InterchangeSides {
    pub via_i: FiberMap,
    pub via_j: FiberMap,
    pub direct: FiberMap,
}

/// For `1 <= j < i <= arity`:
/// `(rho(gamma_i)_{d_i})^-1 o (rho((gamma^i_{d_i})_j)_{d_j})^-1` and
/// `(rho(gamma_j)_{d_j})^-1 o (rho((gamma^j_{d_j})_{i-1})_{d_i})^-1`.
pub fn interchange_sides(
    rep: &Representation,
    cube: &Microcube,
    i: usize,
    j: usize,
    ctx: &GeneratorContext,
) -> Result<InterchangeSides, RepError> {
    if !(1 <= j && j < i && i <= cube.arity()) {
        return Err(GroupoidError::IndexRange {
            index: i,
            bound: cube.arity(),
        }
        .into());
    }
    let g = ctx.fresh_many(2);
    let di = WeilElement::generator(g[0]);
    let dj = WeilElement::generator(g[1]);
    let inv = |c: &Microcube, d: &WeilElement| -> Result<FiberMap, RepError> {
        Ok(rep.transport(&c.eval(std::slice::from_ref(d))?)?.inverse()?)
    };
    let via_i = inv(&cube.axis(i)?, &di)?.compose(&inv(&cube.shifted_face(i, &di, ctx)?.axis(j)?, &dj)?)?;
    let via_j = inv(&cube.axis(j)?, &dj)?.compose(&inv(&cube.shifted_face(j, &dj, ctx)?.axis(i - 1)?, &di)?)?;
    let mut args = vec![WeilElement::zero(); cube.arity()];
    args[i - 1] = di;
    args[j - 1] = dj;
    let direct = rep.transport(&cube.eval(&args)?)?.inverse()?;
    Ok(InterchangeSides { via_i, via_j, direct })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{random_microcube, Groupoid};
    use num_rational::BigRational;

    fn v(xs: &[i64]) -> Vec<WeilElement> {
        xs.iter().map(|x| WeilElement::from_int(*x)).collect()
    }

    #[test]
    fn identity_arrows_act_trivially() {
        let adj = Representation::Adjoint { fiber_dim: 2 };
        assert!(adj.transport(&Arrow::identity_group(v(&[1]), 2)).unwrap().is_identity());
        let gauge = Representation::default_gauge(2, 2);
        assert!(gauge.transport(&Arrow::identity_pair(v(&[1, 3]))).unwrap().is_identity());
    }

    #[test]
    fn adjoint_fixes_central_elements() {
        let adj = Representation::Adjoint { fiber_dim: 2 };
        let g = WeilMatrix::from_int_rows(&[&[1, 2], &[3, 5]]);
        let map = adj.transport(&Arrow::Group { base: v(&[0]), element: g }).unwrap();
        let scalar = WeilMatrix::identity(2).scale(&BigRational::from_integer(7.into()));
        assert_eq!(map.apply(&scalar), scalar);
    }

    #[test]
    fn gauge_transport_matches_direct_matrix() {
        // T(x) = I + x1 N, arrow x -> x + v d
        let n = WeilMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let mut field = MatrixField::identity(2, 2);
        field.set_entry(0, 1, Polynomial::variable(2, 0));
        let rep = Representation::Gauge { field };
        let ctx = GeneratorContext::new();
        let d = WeilElement::generator(ctx.fresh());
        let x = v(&[2, 1]);
        let target = vec![WeilElement::from_int(2) + d.scale(&BigRational::from_integer(3.into())), WeilElement::from_int(1)];
        let map = rep
            .transport(&Arrow::Pair {
                source: x.clone(),
                target: target.clone(),
            })
            .unwrap();
        let t_y = WeilMatrix::identity(2).add(&n.scale_by(&target[0]));
        let t_x = WeilMatrix::identity(2).add(&n.scale_by(&x[0]));
        let m = t_y.mul(&t_x.inverse().unwrap());
        let probe = WeilMatrix::from_int_rows(&[&[1, -2], &[4, 3]]);
        assert_eq!(map.apply(&probe), m.mul(&probe));
    }

    #[test]
    fn incompatible_kinds() {
        let adj = Representation::Adjoint { fiber_dim: 2 };
        assert!(matches!(
            adj.transport(&Arrow::identity_pair(v(&[0]))),
            Err(RepError::Incompatible { .. })
        ));
        let gauge = Representation::default_gauge(1, 2);
        assert!(gauge.check_groupoid(GroupoidKind::Bundle, 2).is_err());
        assert!(gauge.check_groupoid(GroupoidKind::Pair, 3).is_err());
        assert!(gauge.check_groupoid(GroupoidKind::Pair, 2).is_ok());
    }

    #[test]
    fn interchange_on_random_cubes() {
        let ctx = GeneratorContext::new();
        for (g, rep) in [
            (Groupoid::bundle(1, 2), Representation::Adjoint { fiber_dim: 2 }),
            (Groupoid::pair(2, 2), Representation::default_gauge(2, 2)),
        ] {
            let cube = random_microcube(11, 3, g, 3);
            for (i, j) in [(2, 1), (3, 1), (3, 2)] {
                let s = interchange_sides(&rep, &cube, i, j, &ctx).unwrap();
                assert_eq!(s.via_i, s.via_j);
                assert_eq!(s.via_i, s.direct);
            }
        }
    }
}
