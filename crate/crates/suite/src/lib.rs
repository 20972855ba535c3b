//! Brute-force references for the acceptance checks. Each one is written
//! without reference to the library's own search code.

use std::collections::HashMap;

use fjsched::matching::BipartiteGraph;
use fjsched::rtd::Window;
use fjsched::Rational;

/// Maximum matching by dynamic programming over sets of used right nodes.
pub fn brute_matching(g: &BipartiteGraph) -> usize {
    fn go(
        g: &BipartiteGraph,
        u: usize,
        used: u32,
        memo: &mut HashMap<(usize, u32), usize>,
    ) -> usize {
        if u == g.n_left {
            return 0;
        }
        if let Some(&v) = memo.get(&(u, used)) {
            return v;
        }
        let mut best = go(g, u + 1, used, memo);
        for &v in &g.adj[u] {
            if used & (1 << v) == 0 {
                best = best.max(1 + go(g, u + 1, used | (1 << v), memo));
            }
        }
        memo.insert((u, used), best);
        best
    }
    go(g, 0, 0, &mut HashMap::new())
}

/// Earliest completion of every subset on one machine, `None` where the
/// subset cannot meet its windows.
pub fn subset_completions(
    windows: &[Window<Rational>],
    q_time: &Rational,
) -> Vec<Option<Rational>> {
    let n = windows.len();
    let mut best: Vec<Option<Rational>> = vec![None; 1 << n];
    best[0] = Some(Rational::from_integer(0.into()));
    for mask in 1..(1usize << n) {
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            if let Some(before) = &best[mask ^ (1 << j)] {
                let start = if *before > windows[j].0 {
                    before.clone()
                } else {
                    windows[j].0.clone()
                };
                let end = start + q_time.clone();
                if end <= windows[j].1 && best[mask].as_ref().is_none_or(|b| end < *b) {
                    best[mask] = Some(end);
                }
            }
        }
    }
    best
}

pub fn order_meets(windows: &[Window<Rational>], order: &[usize], q_time: &Rational) -> bool {
    let mut t = Rational::from_integer(0.into());
    for &j in order {
        let start = if t > windows[j].0 {
            t.clone()
        } else {
            windows[j].0.clone()
        };
        t = start + q_time.clone();
        if t > windows[j].1 {
            return false;
        }
    }
    true
}

pub fn any_permutation_meets(windows: &[Window<Rational>], q_time: &Rational) -> bool {
    fn rec(
        windows: &[Window<Rational>],
        q_time: &Rational,
        rest: &mut Vec<usize>,
        order: &mut Vec<usize>,
    ) -> bool {
        if rest.is_empty() {
            return order_meets(windows, order, q_time);
        }
        for i in 0..rest.len() {
            let j = rest.remove(i);
            order.push(j);
            let ok = rec(windows, q_time, rest, order);
            order.pop();
            rest.insert(i, j);
            if ok {
                return true;
            }
        }
        false
    }
    rec(
        windows,
        q_time,
        &mut (0..windows.len()).collect(),
        &mut Vec::new(),
    )
}
