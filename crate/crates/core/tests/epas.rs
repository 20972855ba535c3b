mod common;

use common::{frac, instance, params, q, Lcg};
use fjsched::epas::{
    build_ilp, enumerate_configurations, epas_solve_detailed, feasible_at, ratio_bound, simplify,
    EpasLimits,
};
use fjsched::oracle::{exact_solve, Limits};
use fjsched::{validate, BranchTask, Instance, Rational};

fn opt(inst: &Instance<Rational>) -> Rational {
    exact_solve(inst, Limits::default()).unwrap().makespan
}

fn small_instances(count: u64, base: u64) -> impl Iterator<Item = Instance<Rational>> {
    (0..count).map(move |seed| {
        let mut rng = Lcg::new(seed);
        let n = rng.range(1, 4) as usize;
        let m = rng.range(1, 3) as usize;
        instance(&params(base + seed, n, m, &[1, 2], false))
    })
}

#[test]
fn identical_tasks_on_one_speed() {
    let tasks = (0..4)
        .map(|j| BranchTask::new(format!("t{j}"), q(3), q(2), q(2)))
        .collect();
    let inst = Instance::new(tasks, q(1), q(1), vec![q(1), q(1)]).unwrap();
    let e = frac(1, 3);
    let (r, _) = epas_solve_detailed(&inst, &e, EpasLimits::default()).unwrap();
    assert!(validate(&inst, &r.schedule).is_empty());
    let best = opt(&inst);
    assert!(r.makespan <= ratio_bound(&e) * best.clone());
    // never worse than running everything on one processor
    let serial = q(1) + q(4 * 3) + q(1);
    assert!(r.makespan <= serial);
}

#[test]
fn probes_are_monotone_on_the_grid() {
    for inst in small_instances(25, 0) {
        for e in [frac(1, 2), frac(1, 3)] {
            let (_, stats) = epas_solve_detailed(&inst, &e, EpasLimits::default()).unwrap();
            let mut probes = stats.probes.clone();
            probes.sort_by(|a, b| a.0.cmp(&b.0));
            let first = probes.iter().position(|p| p.1).expect("one feasible probe");
            assert!(probes[first..].iter().all(|p| p.1), "{probes:?}");
        }
    }
}

#[test]
fn optimal_schedules_survive_rounding() {
    // whatever fits in (1 - 2e - e^2) T must be feasible for the rounded instance at T
    for inst in small_instances(25, 100) {
        for e in [frac(1, 3), frac(1, 4)] {
            let shrink = q(1) - q(2) * e.clone() - e.clone() * e.clone();
            let t = opt(&inst) / shrink;
            let found = feasible_at(&inst, &t, &e, &EpasLimits::default()).unwrap();
            assert!(found.is_some(), "infeasible at {t} for e = {e}");
        }
    }
}

/// Smallest `L` with `(1 + e)^L >= x`.
fn log_ceil(x: &Rational, e: &Rational) -> usize {
    let mut l = 0;
    let mut power = q(1);
    while power < *x {
        power = power * (q(1) + e.clone());
        l += 1;
    }
    l
}

#[test]
fn simplified_counts_stay_bounded() {
    let mut rng = Lcg::new(9);
    for seed in 0..40 {
        let n = rng.range(1, 6) as usize;
        let m = rng.range(1, 3) as usize;
        let inst = instance(&params(200 + seed, n, m, &[1, 2, 3], false));
        for e in [frac(1, 2), frac(1, 3), frac(1, 4)] {
            let (_, stats) = epas_solve_detailed(&inst, &e, EpasLimits::default()).unwrap();
            assert!(
                q(stats.gamma as i64) * e.clone() <= q(1),
                "|Gamma| = {}",
                stats.gamma
            );
            let ratio = inst.max_speed() / (inst.min_speed() * e.clone() * e.clone());
            let bound = log_ceil(&ratio, &e) + 1;
            for (m_src, m_sink) in inst.role_pairs() {
                let s = simplify(&inst, &stats.t_max, &e, m_src, m_sink).unwrap();
                let mut levels: Vec<u32> = s.big.keys().map(|b| b.level).collect();
                levels.sort_unstable();
                levels.dedup();
                assert!(
                    levels.len() <= bound,
                    "{} big levels, bound {bound}",
                    levels.len()
                );

                let configs: Vec<_> = (0..s.types.len())
                    .map(|ty| enumerate_configurations(&s, ty, 100_000).unwrap())
                    .collect();
                let ilp = build_ilp(&s, &configs);
                let mut comms: Vec<_> = s
                    .big
                    .keys()
                    .map(|b| b.comm)
                    .chain(s.small.keys().copied())
                    .collect();
                comms.sort_unstable();
                comms.dedup();
                let c = ilp.counts;
                assert_eq!(c.coverage, s.big.len());
                assert_eq!(
                    c.small_coverage,
                    s.small.values().filter(|g| g.placeholders > 0).count()
                );
                assert_eq!(c.machines, s.types.len());
                assert_eq!(c.small_time, s.types.len() * comms.len());
                assert!(c.slots <= s.types.len() * s.exec_categories().len() * comms.len());
                assert_eq!(
                    ilp.program.rows.len(),
                    c.coverage + c.small_coverage + c.slots + c.small_time + c.machines
                );
            }
        }
    }
}
