#![allow(dead_code)]

use fjsched::gen::{generate, CostMode, GenParams};
use fjsched::model::{evaluate, Instance, Placement};
use fjsched::Rational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Small deterministic generator for test parameters.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg(seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407))
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 33) % n
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }
}

pub fn params(seed: u64, n_tasks: usize, n_procs: usize, speeds: &[u32], equal: bool) -> GenParams {
    GenParams {
        n_tasks,
        n_procs,
        speed_set: speeds.to_vec(),
        cost_mode: if equal {
            CostMode::Equal
        } else {
            CostMode::Random
        },
        cost_range: (1, 6),
        gin_range: (0, 6),
        gout_range: (0, 6),
        equal_gin: false,
        groups: None,
        seed,
    }
}

pub fn instance(p: &GenParams) -> Instance<Rational> {
    generate(p).expect("valid generator parameters")
}

/// Minimum makespan by plain enumeration: every role pair, every
/// assignment of tasks to `allowed` processors and every order per
/// processor. No pruning, no shared structure with the library oracle.
pub fn naive_opt(
    inst: &Instance<Rational>,
    roles: &[(usize, usize)],
    allowed: &[usize],
) -> Option<Rational> {
    let n = inst.num_tasks();
    let mut best: Option<Rational> = None;
    for &(src, sink) in roles {
        let mut assign = vec![0usize; n];
        loop {
            let mut per_proc: Vec<Vec<usize>> = vec![Vec::new(); inst.num_procs()];
            for (j, &a) in assign.iter().enumerate() {
                per_proc[allowed[a]].push(j);
            }
            let mut orders = per_proc.clone();
            permute_all(&per_proc, 0, &mut orders, &mut |orders| {
                let placement = Placement {
                    m_src: src,
                    m_sink: sink,
                    orders: orders.to_vec(),
                };
                let (_, len) = evaluate(inst, &placement).expect("valid placement");
                if best.as_ref().is_none_or(|b| len < *b) {
                    best = Some(len);
                }
            });
            if !next_assignment(&mut assign, allowed.len()) {
                break;
            }
        }
    }
    best
}

pub fn all_roles(num_procs: usize) -> Vec<(usize, usize)> {
    (0..num_procs)
        .flat_map(|a| (0..num_procs).map(move |b| (a, b)))
        .collect()
}

fn next_assignment(assign: &mut [usize], base: usize) -> bool {
    for a in assign.iter_mut() {
        *a += 1;
        if *a < base {
            return true;
        }
        *a = 0;
    }
    false
}

fn permute_all(
    base: &[Vec<usize>],
    m: usize,
    cur: &mut Vec<Vec<usize>>,
    f: &mut impl FnMut(&[Vec<usize>]),
) {
    if m == base.len() {
        f(cur);
        return;
    }
    let mut items = base[m].clone();
    let len = items.len();
    heap_permutations(&mut items, len, &mut |perm| {
        cur[m] = perm.to_vec();
        permute_all(base, m + 1, cur, f);
    });
}

fn heap_permutations(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(items);
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, f);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}
