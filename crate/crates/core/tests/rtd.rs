mod common;

use common::{instance, naive_opt, params, q, Lcg};
use fjsched::rtd::{
    feasible_equal_length, forkjoin_to_rtd, max_throughput_equal_length, rtd_lmax_solve,
    RtdInstance, RtdTask, Window,
};
use fjsched::Rational;
use proptest::prelude::*;

fn windows_from(raw: &[(u8, u8)]) -> Vec<Window<Rational>> {
    raw.iter()
        .map(|&(r, len)| (q(r as i64), q(r as i64 + len as i64)))
        .collect()
}

/// Minimum maximum lateness over every assignment and every order.
fn brute_lmax(rtd: &RtdInstance<Rational>) -> Rational {
    let n = rtd.tasks.len();
    let m = rtd.speeds.len();
    let mut best: Option<Rational> = None;
    let mut assign = vec![0usize; n];
    loop {
        let mut per: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (j, &a) in assign.iter().enumerate() {
            per[a].push(j);
        }
        // machines are independent, so each takes its own best order
        let worst = per
            .iter()
            .enumerate()
            .filter(|(_, ts)| !ts.is_empty())
            .map(|(k, ts)| best_order(rtd, ts, &rtd.speeds[k]))
            .reduce(|a, b| if a > b { a } else { b })
            .expect("at least one task");
        if best.as_ref().is_none_or(|b| worst < *b) {
            best = Some(worst);
        }
        let mut k = 0;
        loop {
            if k == n {
                return best.expect("searched");
            }
            assign[k] += 1;
            if assign[k] < m {
                break;
            }
            assign[k] = 0;
            k += 1;
        }
    }
}

fn best_order(rtd: &RtdInstance<Rational>, tasks: &[usize], speed: &Rational) -> Rational {
    fn rec(
        rtd: &RtdInstance<Rational>,
        rest: &mut Vec<usize>,
        t: Rational,
        lmax: Option<Rational>,
        s: &Rational,
    ) -> Rational {
        if rest.is_empty() {
            return lmax.expect("non-empty");
        }
        let mut best: Option<Rational> = None;
        for i in 0..rest.len() {
            let j = rest.remove(i);
            let task = &rtd.tasks[j];
            let start = if t > task.r {
                t.clone()
            } else {
                task.r.clone()
            };
            let end = start + task.p.clone() / s.clone();
            let late = end.clone() - task.d.clone();
            let l = match &lmax {
                Some(x) if *x > late => x.clone(),
                _ => late,
            };
            let v = rec(rtd, rest, end, Some(l), s);
            if best.as_ref().is_none_or(|b| v < *b) {
                best = Some(v);
            }
            rest.insert(i, j);
        }
        best.expect("non-empty")
    }
    rec(rtd, &mut tasks.to_vec(), q(0), None, speed)
}

#[test]
fn lmax_matches_brute_force_on_two_machines() {
    let mut rng = Lcg::new(3);
    for _ in 0..40 {
        let tasks = (0..4)
            .map(|j| {
                let r = rng.range(0, 6) as i64;
                RtdTask {
                    id: format!("t{j}"),
                    p: q(rng.range(1, 5) as i64),
                    r: q(r),
                    d: q(r + rng.range(0, 8) as i64),
                }
            })
            .collect();
        let rtd = RtdInstance {
            tasks,
            speeds: vec![q(1), q(2)],
        };
        let got = rtd_lmax_solve(&rtd, 10).unwrap();
        assert_eq!(got.lmax, brute_lmax(&rtd));
    }
}

#[test]
fn huge_deadlines_give_negative_lateness() {
    let rtd = RtdInstance {
        tasks: vec![
            RtdTask {
                id: "a".into(),
                p: q(2),
                r: q(0),
                d: q(100),
            },
            RtdTask {
                id: "b".into(),
                p: q(1),
                r: q(0),
                d: q(50),
            },
        ],
        speeds: vec![q(1)],
    };
    // b first ends at 1 (slack 49), a ends at 3 (slack 97)
    assert_eq!(rtd_lmax_solve(&rtd, 10).unwrap().lmax, q(-49));
}

proptest! {
    #[test]
    fn relaxing_windows_keeps_feasibility(
        raw in prop::collection::vec((0u8..8, 1u8..10), 0..7),
        which in 0usize..7,
        widen in 0u8..4,
        p in 1i64..4,
    ) {
        let windows = windows_from(&raw);
        let s = q(1);
        if feasible_equal_length(&windows, &q(p), &s).is_some() && !windows.is_empty() {
            let mut relaxed = windows.clone();
            let k = which % relaxed.len();
            relaxed[k].1 = relaxed[k].1.clone() + q(widen as i64);
            relaxed[k].0 = relaxed[k].0.clone() - q(widen.min(raw[k].0) as i64);
            prop_assert!(feasible_equal_length(&relaxed, &q(p), &s).is_some());
        }
    }

    #[test]
    fn throughput_grows_with_speed(raw in prop::collection::vec((0u8..8, 1u8..10), 0..9), p in 1i64..5) {
        let windows = windows_from(&raw);
        let slow = max_throughput_equal_length(&windows, &q(p), &q(1)).0.len();
        let fast = max_throughput_equal_length(&windows, &q(p), &q(2)).0.len();
        prop_assert!(fast >= slow);
    }

    #[test]
    fn image_is_affine_in_the_bound(seed in any::<u64>(), t in 1i64..40, dt in 0i64..10) {
        let inst = instance(&params(seed, 4, 3, &[1, 2, 3], false));
        let a = forkjoin_to_rtd(&inst, &q(t), 0, 1).unwrap();
        let b = forkjoin_to_rtd(&inst, &q(t + dt), 0, 1).unwrap();
        for (x, y) in a.tasks.iter().zip(&b.tasks) {
            prop_assert_eq!(&x.r, &y.r);
            prop_assert_eq!(y.d.clone() - x.d.clone(), q(dt));
        }
    }
}

#[test]
fn one_remote_processor_matches_equal_length_feasibility() {
    for seed in 0..60 {
        let n = Lcg::new(seed).range(1, 5) as usize;
        let inst = instance(&params(900 + seed, n, 3, &[1, 2, 3], true));
        let opt = naive_opt(&inst, &[(0, 1)], &[2]).unwrap();
        let p = inst.tasks[0].p.clone();
        for t in [
            opt.clone() - common::frac(1, 3),
            opt.clone(),
            opt.clone() + q(1),
        ] {
            if t <= q(0) {
                continue;
            }
            let rtd = forkjoin_to_rtd(&inst, &t, 0, 1).unwrap();
            let windows: Vec<Window<Rational>> = rtd
                .tasks
                .iter()
                .map(|x| (x.r.clone(), x.d.clone()))
                .collect();
            let feasible = feasible_equal_length(&windows, &p, &inst.speeds[2]).is_some();
            assert_eq!(feasible, opt <= t, "seed {seed} at {t}");
        }
    }
}
