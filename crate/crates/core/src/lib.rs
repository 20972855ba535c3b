//! Scheduling fork-join task graphs with communication delays on uniformly
//! related processors.
//!
//! A fork-join graph has one source task, independent branch tasks, and one
//! sink task. Each branch pays its incoming (outgoing) communication delay
//! unless it shares a processor with the source (sink). This crate provides:
//!
//!  * the model with canonical start times, makespan and a validator ([`model`]);
//!  * the release-time/deadline view and its single-machine kernels ([`rtd`]);
//!  * an exhaustive oracle for small instances ([`oracle`]);
//!  * the slot-matching approximation for equal costs ([`matching`]);
//!  * exact algorithms for two processors, unlimited processors, equal
//!    incoming communication and two processor groups ([`special`]);
//!  * the configuration-ILP approximation scheme ([`epas`]).
//!
//! Every algorithm is generic over [`Scalar`]. Use the [`Rational`] aliases
//! for exact results.

pub mod epas;
pub mod error;
pub mod gen;
pub mod io;
pub mod matching;
pub mod model;
pub mod oracle;
pub mod report;
pub mod rtd;
pub mod scalar;
pub mod search;
pub mod special;

pub use error::{Error, Result};
pub use model::{
    canonicalize, evaluate, makespan, validate, BranchTask, Instance, Placement, Schedule,
    Violation,
};
pub use report::{Algorithm, Guarantee, SolveReport};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type ForkJoinInstance = Instance<Rational>;
pub type RationalSchedule = Schedule<Rational>;
pub type RationalReport = SolveReport<Rational>;
pub type RtdInstance = rtd::RtdInstance<Rational>;

pub type FloatInstance = Instance<f64>;
pub type FloatSchedule = Schedule<f64>;

/// Options of [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOptions<T> {
    pub epsilon: T,
    pub oracle: oracle::Limits,
    pub epas: epas::EpasLimits,
}

impl<T: Scalar> Default for SolveOptions<T> {
    fn default() -> Self {
        SolveOptions {
            epsilon: T::ratio(1, 3),
            oracle: oracle::Limits::default(),
            epas: epas::EpasLimits::default(),
        }
    }
}

/// Runs `algorithm` on `inst`. The two-processor variants use processor 0
/// for the source, and processor 1 for the sink in the split variant.
pub fn solve<T: Scalar>(
    inst: &Instance<T>,
    algorithm: Algorithm,
    opts: &SolveOptions<T>,
) -> Result<SolveReport<T>> {
    match algorithm {
        Algorithm::Oracle => oracle::exact_solve(inst, opts.oracle),
        Algorithm::Bipartite => matching::solve_matching_approx(inst),
        Algorithm::Q2 => special::solve_q2(inst),
        Algorithm::P2Sched1 => special::p2_sched1(inst, 0),
        Algorithm::P2Sched2 => special::p2_sched2(inst, 0, 1),
        Algorithm::QInf => special::solve_q_inf(inst),
        Algorithm::PartialEqual => special::solve_partial_equal(inst),
        Algorithm::Grouped => special::solve_grouped(inst),
        Algorithm::Epas => {
            epas::epas_solve_detailed(inst, &opts.epsilon, opts.epas).map(|(r, _)| r)
        }
    }
}
