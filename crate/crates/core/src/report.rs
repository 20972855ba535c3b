use std::collections::BTreeMap;
use std::fmt;

use crate::model::{makespan, Instance, Schedule};
use crate::scalar::Scalar;

/// Which solver produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Oracle,
    Bipartite,
    Q2,
    P2Sched1,
    P2Sched2,
    QInf,
    PartialEqual,
    Grouped,
    Epas,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Oracle,
        Algorithm::Bipartite,
        Algorithm::Q2,
        Algorithm::QInf,
        Algorithm::PartialEqual,
        Algorithm::Grouped,
        Algorithm::Epas,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Oracle => "oracle",
            Algorithm::Bipartite => "bipartite",
            Algorithm::Q2 => "q2",
            Algorithm::P2Sched1 => "p2-sched1",
            Algorithm::P2Sched2 => "p2-sched2",
            Algorithm::QInf => "qinf",
            Algorithm::PartialEqual => "partial-equal",
            Algorithm::Grouped => "grouped",
            Algorithm::Epas => "epas",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Algorithm::Oracle,
            Algorithm::Bipartite,
            Algorithm::Q2,
            Algorithm::P2Sched1,
            Algorithm::P2Sched2,
            Algorithm::QInf,
            Algorithm::PartialEqual,
            Algorithm::Grouped,
            Algorithm::Epas,
        ]
        .into_iter()
        .find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Bound a solver promises relative to the optimum.
#[derive(Debug, Clone, PartialEq)]
pub enum Guarantee<T> {
    Exact,
    /// `makespan <= OPT + delta`
    Additive(T),
    /// `makespan <= rho * OPT`
    Ratio(T),
}

impl<T: Scalar> Guarantee<T> {
    /// Whether `value` respects this bound for the optimum `opt`.
    pub fn holds(&self, value: &T, opt: &T) -> bool {
        if value < opt {
            return false;
        }
        match self {
            Guarantee::Exact => value == opt,
            Guarantee::Additive(delta) => *value <= opt.clone() + delta.clone(),
            Guarantee::Ratio(rho) => *value <= rho.clone() * opt.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Guarantee::Exact => "exact",
            Guarantee::Additive(_) => "additive",
            Guarantee::Ratio(_) => "ratio",
        }
    }

    pub fn bound(&self) -> Option<&T> {
        match self {
            Guarantee::Exact => None,
            Guarantee::Additive(b) | Guarantee::Ratio(b) => Some(b),
        }
    }
}

/// Result of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<T> {
    pub schedule: Schedule<T>,
    pub makespan: T,
    pub algorithm: Algorithm,
    pub guarantee: Guarantee<T>,
    /// Solver statistics (probe counts, bounds, instance summaries).
    pub notes: BTreeMap<String, String>,
}

impl<T: Scalar> SolveReport<T> {
    pub fn new(
        inst: &Instance<T>,
        schedule: Schedule<T>,
        algorithm: Algorithm,
        guarantee: Guarantee<T>,
    ) -> Self {
        let makespan = makespan(inst, &schedule);
        SolveReport {
            schedule,
            makespan,
            algorithm,
            guarantee,
            notes: BTreeMap::new(),
        }
    }

    pub fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.notes.insert(key.to_string(), value.to_string());
        self
    }
}
