//! Named, seeded check suites and their JSON reports.

mod checks;
pub mod oracle;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::forms::FormError;
use crate::groupoid::{Groupoid, GroupoidKind};
use crate::io::{EvalInput, IoError, RepresentationSpec};
use crate::poly::MatrixField;
use crate::representation::{Representation, RepresentationKind};
use crate::weil::WeilMatrix;

pub const CHECK_NAMES: [&str; 18] = [
    "simplicial",
    "lemma41",
    "lemma42",
    "lemma43",
    "star_compat",
    "bracket_oracle",
    "jacobi",
    "tangent_add",
    "tangent_inverse",
    "form_axioms",
    "phi_conditions",
    "residue_negative",
    "dplus_sq_zero",
    "coincidence",
    "order_indep",
    "mc_formula",
    "closed_corollary",
    "classical_cross",
];

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum HarnessError {
    #[error("unknown check {0:?}")]
    UnknownCheck(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Parameters shared by all checks. `rep` and `groupoid` restrict the
/// (groupoid, representation) cases; `None` runs every compatible pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub seed: u64,
    pub trials: usize,
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub degrees: Vec<usize>,
    pub rep: Option<RepresentationKind>,
    pub groupoid: Option<GroupoidKind>,
    pub bound: i64,
    /// Gauge field `T(x)` as rows of polynomial strings.
    pub gauge: Option<Vec<Vec<String>>>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            trials: 50,
            base_dim: 2,
            fiber_dim: 2,
            degrees: vec![0, 1, 2],
            rep: None,
            groupoid: None,
            bound: 3,
            gauge: None,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Config(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.base_dim == 0 || self.fiber_dim == 0 {
            return bad("base and fiber dimensions must be at least 1");
        }
        if self.base_dim > 6 || self.fiber_dim > 4 {
            return bad("supported sizes are base_dim <= 6 and fiber_dim <= 4");
        }
        if self.degrees.is_empty() || self.degrees.iter().any(|d| *d > 2) {
            return bad("degrees must be a non-empty subset of {0, 1, 2}");
        }
        if self.bound < 1 {
            return bad("bound must be at least 1");
        }
        if let (Some(r), Some(g)) = (self.rep, self.groupoid) {
            if !r.supports(g) {
                return Err(HarnessError::Config(format!(
                    "the {} representation does not act on the {} groupoid",
                    r.name(),
                    g.name()
                )));
            }
        }
        if self.gauge.is_some() {
            self.gauge_field().map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        Ok(())
    }

    fn gauge_field(&self) -> Result<Option<MatrixField>, IoError> {
        let Some(rows) = &self.gauge else { return Ok(None) };
        match (RepresentationSpec {
            kind: RepresentationKind::Gauge,
            gauge: Some(rows.clone()),
        })
        .build(self.base_dim, self.fiber_dim)?
        {
            Representation::Gauge { field } => Ok(Some(field)),
            _ => unreachable!(),
        }
    }

    pub fn groupoids(&self) -> Vec<Groupoid> {
        [GroupoidKind::Pair, GroupoidKind::Bundle]
            .into_iter()
            .filter(|k| self.groupoid.map_or(true, |g| g == *k))
            .map(|kind| Groupoid {
                kind,
                base_dim: self.base_dim,
                fiber_dim: self.fiber_dim,
            })
            .collect()
    }

    pub fn representation(&self, kind: RepresentationKind) -> Representation {
        match (kind, self.gauge_field()) {
            (RepresentationKind::Gauge, Ok(Some(field))) => Representation::Gauge { field },
            _ => Representation::of_kind(kind, self.base_dim, self.fiber_dim),
        }
    }

    /// Every compatible (groupoid, representation) pair allowed by the filters.
    pub fn cases(&self) -> Vec<Case> {
        let mut out = Vec::new();
        for groupoid in self.groupoids() {
            for kind in RepresentationKind::ALL {
                if kind.supports(groupoid.kind) && self.rep.map_or(true, |r| r == kind) {
                    out.push(Case {
                        groupoid,
                        rep: self.representation(kind),
                    });
                }
            }
        }
        out
    }

    pub fn has_degree(&self, n: usize) -> bool {
        self.degrees.contains(&n)
    }
}

#[derive(Clone, Debug)]
pub struct Case {
    pub groupoid: Groupoid,
    pub rep: Representation,
}

impl Case {
    pub fn label(&self) -> String {
        format!("{}/{}", self.groupoid.kind.name(), self.rep.kind().name())
    }
}

/// An `eval` invocation reproducing a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub op: String,
    pub input: EvalInput,
}

/// A failed identity: where it happened and both sides.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub case: String,
    pub identity: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replay: Option<Replay>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub check: String,
    pub trials: usize,
    pub failures: Vec<Witness>,
    pub millis: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects witnesses for one check.
pub(crate) struct Recorder {
    pub failures: Vec<Witness>,
}

impl Recorder {
    fn new() -> Self {
        Self { failures: Vec::new() }
    }

    pub fn fail(&mut self, trial: usize, case: &str, identity: &str, lhs: String, rhs: String, replay: Option<Replay>) {
        self.failures.push(Witness {
            trial,
            case: case.to_string(),
            identity: identity.to_string(),
            lhs,
            rhs,
            replay,
        });
    }

    /// Records a mismatch of two matrices; returns whether they agreed.
    pub fn expect_eq(&mut self, trial: usize, case: &str, identity: &str, lhs: &WeilMatrix, rhs: &WeilMatrix, replay: impl FnOnce() -> Option<Replay>) -> bool {
        if lhs == rhs {
            return true;
        }
        self.fail(trial, case, identity, lhs.to_string(), rhs.to_string(), replay());
        false
    }

    pub fn expect(&mut self, trial: usize, case: &str, identity: &str, ok: bool, detail: impl FnOnce() -> (String, String)) {
        if !ok {
            let (lhs, rhs) = detail();
            self.fail(trial, case, identity, lhs, rhs, None);
        }
    }

    /// Records an unexpected error as a failure.
    pub fn error<E: std::fmt::Display>(&mut self, trial: usize, case: &str, identity: &str, e: E) {
        self.fail(trial, case, identity, format!("error: {e}"), "no error".into(), None);
    }

    pub fn run<F>(&mut self, trial: usize, case: &str, identity: &str, f: F)
    where
        F: FnOnce(&mut Self) -> Result<(), FormError>,
    {
        if let Err(e) = f(self) {
            self.error(trial, case, identity, e);
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for one trial of one check.
pub(crate) fn trial_rng(seed: u64, check: &str, trial: usize) -> ChaCha8Rng {
    let name = check.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(splitmix(splitmix(seed ^ name) ^ trial as u64))
}

pub fn run_check(name: &str, cfg: &CheckConfig) -> Result<CheckReport, HarnessError> {
    cfg.validate()?;
    let check = checks::lookup(name).ok_or_else(|| HarnessError::UnknownCheck(name.to_string()))?;
    let start = Instant::now();
    let mut rec = Recorder::new();
    check(cfg, &mut rec);
    Ok(CheckReport {
        check: name.to_string(),
        trials: cfg.trials,
        failures: rec.failures,
        millis: start.elapsed().as_millis() as u64,
    })
}

/// Runs every check; checks run on separate threads and are reported in
/// the fixed order of [`CHECK_NAMES`].
pub fn run_suite(cfg: &CheckConfig) -> Result<Vec<CheckReport>, HarnessError> {
    cfg.validate()?;
    std::thread::scope(|s| {
        let handles: Vec<_> = CHECK_NAMES.iter().map(|name| s.spawn(move || run_check(name, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("check thread panicked")).collect()
    })
}

/// Fixed-width text table of a report list.
pub fn render_table(reports: &[CheckReport]) -> String {
    let mut out = format!("{:<18} {:>7} {:>9} {:>8}  {}\n", "check", "trials", "failures", "millis", "status");
    for r in reports {
        out.push_str(&format!(
            "{:<18} {:>7} {:>9} {:>8}  {}\n",
            r.check,
            r.trials,
            r.failures.len(),
            r.millis,
            if r.passed() { "PASS" } else { "FAIL" }
        ));
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} of {} checks passed\n", reports.len() - failed, reports.len()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_configs() {
        let bad = |f: fn(&mut CheckConfig)| {
            let mut cfg = CheckConfig::default();
            f(&mut cfg);
            cfg.validate().is_err()
        };
        assert!(bad(|c| c.trials = 0));
        assert!(bad(|c| c.base_dim = 0));
        assert!(bad(|c| c.degrees = vec![3]));
        assert!(bad(|c| {
            c.rep = Some(RepresentationKind::Adjoint);
            c.groupoid = Some(GroupoidKind::Pair)
        }));
        assert!(CheckConfig::default().validate().is_ok());
    }

    #[test]
    fn unknown_check() {
        assert_eq!(
            run_check("nosuch", &CheckConfig::default()).unwrap_err(),
            HarnessError::UnknownCheck("nosuch".into())
        );
    }

    #[test]
    fn default_cases_cover_every_representation() {
        let labels: Vec<String> = CheckConfig::default().cases().iter().map(Case::label).collect();
        assert_eq!(labels, ["pair/trivial", "pair/gauge", "bundle/trivial", "bundle/adjoint"]);
    }

    #[test]
    fn trial_streams_differ() {
        use rand::Rng;
        let a: u64 = trial_rng(1, "x", 0).gen();
        let b: u64 = trial_rng(1, "x", 1).gen();
        let c: u64 = trial_rng(1, "y", 0).gen();
        assert!(a != b && a != c);
        assert_eq!(a, trial_rng(1, "x", 0).gen::<u64>());
    }
}
