use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{cmp, max_of, Scalar};

use super::simplify::{CommClass, SimplifiedInstance};

/// What a configuration slot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemKey {
    /// A big task running for `exec_categories()[time]`.
    Big { time: usize, comm: CommClass },
    /// A block of small work of length `t_small`.
    Small { comm: CommClass },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Item<T> {
    pub key: ItemKey,
    pub len: T,
    pub release: T,
    pub deadline: T,
    /// Most copies any configuration can usefully hold.
    pub bound: u32,
}

/// A configuration: how many copies of each item of its type it holds.
pub type Configuration = Vec<u32>;

#[derive(Debug, Clone)]
pub struct TypeConfigs<T> {
    pub items: Vec<Item<T>>,
    /// Maximal feasible configurations, in enumeration order.
    pub configs: Vec<Configuration>,
}

/// Useful items of processor type `ty`.
pub fn items_for_type<T: Scalar>(simp: &SimplifiedInstance<T>, ty: usize) -> Vec<Item<T>> {
    let categories = simp.exec_categories();
    let mut items: Vec<Item<T>> = Vec::new();
    let push = |items: &mut Vec<Item<T>>, key: ItemKey, len: T, comm: CommClass, count: u32| {
        if count == 0 {
            return;
        }
        let Some((release, deadline)) = simp.window(ty, comm) else {
            return;
        };
        if release.clone() + len.clone() > deadline {
            return;
        }
        match items.iter_mut().find(|it| it.key == key) {
            Some(it) => it.bound += count,
            None => items.push(Item {
                key,
                len,
                release,
                deadline,
                bound: count,
            }),
        }
    };
    // small volume per class on this type, in time units
    let mut small_time: Vec<(CommClass, T)> = Vec::new();
    let mut add_small =
        |comm: CommClass, t: T| match small_time.iter_mut().find(|(c, _)| *c == comm) {
            Some((_, v)) => *v = v.clone() + t,
            None => small_time.push((comm, t)),
        };
    for (class, tasks) in &simp.big {
        if simp.small_on(class.level, ty) {
            add_small(
                class.comm,
                simp.exec(class.level, ty) * T::of_usize(tasks.len()),
            );
        } else {
            let exec = simp.exec(class.level, ty);
            let time = categories
                .iter()
                .position(|c| *c == exec)
                .expect("known category");
            push(
                &mut items,
                ItemKey::Big {
                    time,
                    comm: class.comm,
                },
                exec,
                class.comm,
                tasks.len() as u32,
            );
        }
    }
    let speed = simp.types[ty].speed.clone();
    for (comm, g) in &simp.small {
        let t = simp.p_small.clone() / speed.clone() * T::of_usize(g.placeholders as usize);
        add_small(*comm, t);
    }
    for (comm, t) in small_time {
        let blocks = (t / simp.t_small.clone()).ceil_val().to_f64_lossy() as u32;
        push(
            &mut items,
            ItemKey::Small { comm },
            simp.t_small.clone(),
            comm,
            blocks,
        );
    }
    items
}

/// Exact single-machine check for multisets of items: the earliest
/// completion of each feasible count vector, memoized.
pub struct Packer<'a, T> {
    items: &'a [Item<T>],
    memo: HashMap<Vec<u32>, Option<T>>,
}

impl<'a, T: Scalar> Packer<'a, T> {
    pub fn new(items: &'a [Item<T>]) -> Self {
        Packer {
            items,
            memo: HashMap::new(),
        }
    }

    /// Earliest completion of a sequence holding exactly `counts`, with every
    /// item inside its window; `None` if there is none.
    pub fn completion(&mut self, counts: &[u32]) -> Option<T> {
        if counts.iter().all(|&c| c == 0) {
            return Some(T::zero());
        }
        if let Some(v) = self.memo.get(counts) {
            return v.clone();
        }
        let mut best: Option<T> = None;
        let mut prev = counts.to_vec();
        for k in 0..counts.len() {
            if counts[k] == 0 {
                continue;
            }
            prev[k] -= 1;
            if let Some(before) = self.completion(&prev) {
                let it = &self.items[k];
                let end = max_of(before, it.release.clone()) + it.len.clone();
                if end <= it.deadline && best.as_ref().is_none_or(|b| end < *b) {
                    best = Some(end);
                }
            }
            prev[k] += 1;
        }
        self.memo.insert(counts.to_vec(), best.clone());
        best
    }

    pub fn feasible(&mut self, counts: &[u32]) -> bool {
        self.completion(counts).is_some()
    }

    /// Item indices in execution order for a feasible `counts`.
    pub fn sequence(&mut self, counts: &[u32]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = counts.to_vec();
        while cur.iter().any(|&c| c > 0) {
            let target = self.completion(&cur).expect("feasible configuration");
            let k = (0..cur.len())
                .find(|&k| {
                    if cur[k] == 0 {
                        return false;
                    }
                    cur[k] -= 1;
                    let ok = self.completion(&cur).is_some_and(|before| {
                        let it = &self.items[k];
                        let end = max_of(before, it.release.clone()) + it.len.clone();
                        end == target
                    });
                    cur[k] += 1;
                    ok
                })
                .expect("a last item attains the completion");
            out.push(k);
            cur[k] -= 1;
        }
        out.reverse();
        out
    }
}

/// Every maximal feasible configuration of type `ty`. `cap` bounds the
/// number of feasible configurations visited.
pub fn enumerate_configurations<T: Scalar>(
    simp: &SimplifiedInstance<T>,
    ty: usize,
    cap: usize,
) -> Result<TypeConfigs<T>> {
    let mut items = items_for_type(simp, ty);
    // longer items first keeps infeasible branches shallow
    items.sort_by(|a, b| cmp(&b.len, &a.len));
    let mut packer = Packer::new(&items);
    let mut feasible: Vec<Configuration> = Vec::new();
    let mut counts = vec![0u32; items.len()];
    extend(&items, &mut packer, &mut counts, 0, &mut feasible, cap)?;
    let configs: Vec<Configuration> = feasible
        .into_iter()
        .filter(|c| {
            (0..items.len()).all(|k| {
                if c[k] >= items[k].bound {
                    return true;
                }
                let mut up = c.clone();
                up[k] += 1;
                !packer.feasible(&up)
            })
        })
        .collect();
    Ok(TypeConfigs { items, configs })
}

fn extend<T: Scalar>(
    items: &[Item<T>],
    packer: &mut Packer<'_, T>,
    counts: &mut Vec<u32>,
    k: usize,
    out: &mut Vec<Configuration>,
    cap: usize,
) -> Result<()> {
    if k == items.len() {
        if out.len() >= cap {
            return Err(Error::LimitExceeded(format!(
                "more than {cap} configurations for one processor type"
            )));
        }
        out.push(counts.clone());
        return Ok(());
    }
    for c in 0..=items[k].bound {
        counts[k] = c;
        // superset of an infeasible multiset is infeasible
        if c > 0 && !packer.feasible(counts) {
            break;
        }
        extend(items, packer, counts, k + 1, out, cap)?;
    }
    counts[k] = 0;
    Ok(())
}
