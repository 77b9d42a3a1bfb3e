//! The two concrete groupoids, their arrows over the Weil algebra, and the
//! microcubes `D^n -> G` built on them.
//!
//! Composition follows function-composition order throughout:
//! `compose(g, h)` is "first `h`, then `g`". For the bundle groupoid this is
//! the matrix product `g * h`.

mod cube;
mod random;
mod tangent;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::weil::{WeilElement, WeilError, WeilMatrix};

pub use cube::{permutation_sign, CubeBody, Microcube, MicrocubeFamily};
pub use random::{random_microcube, random_rational, random_rational_matrix, random_weil_vector};
pub use tangent::TangentVector;

/// A point of `Q^m`, possibly displaced by infinitesimals.
pub type WeilVector = Vec<WeilElement>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupoidKind {
    /// `M x M` over `M = Q^m`; one arrow per ordered pair of points.
    Pair,
    /// The trivial bundle `M x GL_k` viewed as a groupoid with equal source
    /// and target.
    Bundle,
}

impl GroupoidKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupoidKind::Pair => "pair",
            GroupoidKind::Bundle => "bundle",
        }
    }
}

impl std::str::FromStr for GroupoidKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pair" => Ok(GroupoidKind::Pair),
            "bundle" => Ok(GroupoidKind::Bundle),
            other => Err(format!("unknown groupoid {other:?} (expected pair or bundle)")),
        }
    }
}

/// A groupoid instance: its kind, the base dimension `m`, and the size `k`
/// of the fiber matrices (group elements for the bundle, Lie algebra values
/// for forms on either kind).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Groupoid {
    pub kind: GroupoidKind,
    pub base_dim: usize,
    pub fiber_dim: usize,
}

impl Groupoid {
    pub fn pair(base_dim: usize, fiber_dim: usize) -> Self {
        Self {
            kind: GroupoidKind::Pair,
            base_dim,
            fiber_dim,
        }
    }

    pub fn bundle(base_dim: usize, fiber_dim: usize) -> Self {
        Self {
            kind: GroupoidKind::Bundle,
            base_dim,
            fiber_dim,
        }
    }

    /// Number of components of a first-order velocity of a microcube:
    /// base coordinates for the pair groupoid, fiber matrix entries for the
    /// bundle.
    pub fn velocity_dim(&self) -> usize {
        match self.kind {
            GroupoidKind::Pair => self.base_dim,
            GroupoidKind::Bundle => self.fiber_dim * self.fiber_dim,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("slot {index} is outside 1..={bound}")]
    IndexRange { index: usize, bound: usize },
    #[error("argument does not square to zero: {0}")]
    NotSquareZero(String),
    #[error("arrows are not composable: {0}")]
    NotComposable(String),
    #[error("groupoid mismatch: {0}")]
    KindMismatch(String),
    #[error("base points differ: {0}")]
    BaseMismatch(String),
    #[error("not a microcube: {0}")]
    InvalidCube(String),
    #[error(transparent)]
    Weil(#[from] WeilError),
}

/// An arrow of one of the two groupoids, with Weil-valued data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Arrow {
    Pair { source: WeilVector, target: WeilVector },
    Group { base: WeilVector, element: WeilMatrix },
}

impl Arrow {
    pub fn identity_pair(point: WeilVector) -> Self {
        Arrow::Pair {
            source: point.clone(),
            target: point,
        }
    }

    pub fn identity_group(base: WeilVector, fiber_dim: usize) -> Self {
        Arrow::Group {
            base,
            element: WeilMatrix::identity(fiber_dim),
        }
    }

    pub fn source(&self) -> &WeilVector {
        match self {
            Arrow::Pair { source, .. } => source,
            Arrow::Group { base, .. } => base,
        }
    }

    pub fn target(&self) -> &WeilVector {
        match self {
            Arrow::Pair { target, .. } => target,
            Arrow::Group { base, .. } => base,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Arrow::Pair { source, target } => source == target,
            Arrow::Group { element, .. } => element.is_identity(),
        }
    }

    /// `g.compose(h)`: first `h`, then `g`.
    pub fn compose(&self, first: &Arrow) -> Result<Arrow, GroupoidError> {
        match (self, first) {
            (Arrow::Pair { source, target }, Arrow::Pair { source: s0, target: t0 }) => {
                if t0 != source {
                    return Err(GroupoidError::NotComposable(
                        "target of the first arrow is not the source of the second".into(),
                    ));
                }
                Ok(Arrow::Pair {
                    source: s0.clone(),
                    target: target.clone(),
                })
            }
            (Arrow::Group { base, element }, Arrow::Group { base: b0, element: e0 }) => {
                if base != b0 {
                    return Err(GroupoidError::NotComposable("bundle arrows over different points".into()));
                }
                Ok(Arrow::Group {
                    base: base.clone(),
                    element: element.try_mul(e0)?,
                })
            }
            _ => Err(GroupoidError::KindMismatch("pair arrow composed with bundle arrow".into())),
        }
    }

    pub fn inverse(&self) -> Result<Arrow, GroupoidError> {
        Ok(match self {
            Arrow::Pair { source, target } => Arrow::Pair {
                source: target.clone(),
                target: source.clone(),
            },
            Arrow::Group { base, element } => Arrow::Group {
                base: base.clone(),
                element: element.inverse()?,
            },
        })
    }
}
