//! Shared plumbing for the verification suites: the report type, weight
//! grids and a deterministic parallel map.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::colors::Weight;
use crate::qseries::QSeries;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub weight: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    #[serde(serialize_with = "as_decimal")]
    pub max_discrepancy: BigInt,
}

fn as_decimal<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// Outcome of one case: how many comparisons it made and what went wrong.
#[derive(Clone, Debug, Default)]
pub struct CaseResult {
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub max_discrepancy: BigInt,
}

impl CaseResult {
    /// Records a series comparison; a mismatch becomes a failure.
    pub fn compare(&mut self, weight: &Weight, label: &str, lhs: &QSeries, rhs: &QSeries) {
        self.checks += 1;
        let diff = lhs.max_abs_diff(rhs);
        if !diff.is_zero() {
            self.failures.push(Failure {
                weight: weight.to_string(),
                detail: format!("{label}: {lhs} vs {rhs}"),
            });
            if diff > self.max_discrepancy {
                self.max_discrepancy = diff;
            }
        }
    }

    /// Records a boolean check.
    pub fn check(&mut self, weight: &Weight, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                weight: weight.to_string(),
                detail: detail(),
            });
        }
    }

    pub fn fail(&mut self, weight: &Weight, detail: String) {
        self.checks += 1;
        self.failures.push(Failure {
            weight: weight.to_string(),
            detail,
        });
    }
}

impl Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Folds case results in input order, so the report does not depend on
    /// scheduling.
    pub fn collect(suite: &str, results: Vec<CaseResult>) -> Report {
        let mut rep = Report {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            max_discrepancy: BigInt::zero(),
        };
        for r in results {
            rep.cases += r.checks;
            rep.failures.extend(r.failures);
            if r.max_discrepancy > rep.max_discrepancy {
                rep.max_discrepancy = r.max_discrepancy;
            }
        }
        rep
    }
}

impl Report {
    /// Concatenates several reports under one suite name.
    pub fn merge(suite: &str, parts: Vec<Report>) -> Report {
        let mut rep = Report {
            suite: suite.to_string(),
            cases: 0,
            failures: Vec::new(),
            max_discrepancy: BigInt::zero(),
        };
        for p in parts {
            rep.cases += p.cases;
            rep.failures.extend(p.failures);
            if p.max_discrepancy > rep.max_discrepancy {
                rep.max_discrepancy = p.max_discrepancy;
            }
        }
        rep
    }
}

/// Every weight of the given rank with coordinates in `0..=bound`, in
/// lexicographic order.
pub fn weight_grid(rank: usize, bound: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; rank];
    loop {
        out.push(Weight(cur.clone()));
        let mut pos = rank;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < bound {
                cur[pos] += 1;
                cur[pos + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// Parallel map that keeps the input order.
pub fn par_cases<T: Sync, F>(items: &[T], f: F) -> Vec<CaseResult>
where
    F: Fn(&T) -> CaseResult + Sync + Send,
{
    items.par_iter().map(f).collect()
}
