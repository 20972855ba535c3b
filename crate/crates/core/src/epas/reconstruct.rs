use crate::error::{Error, Result};
use crate::model::{Instance, Placement};
use crate::scalar::{cmp, Scalar};

use super::config::{ItemKey, Packer, TypeConfigs};
use super::ilp::ConfigIlp;
use super::simplify::{CommClass, SimplifiedInstance};

/// One placed configuration item on a processor.
struct Holder<T> {
    key: ItemKey,
    /// Remaining block time for small items, unused for big ones.
    room: T,
    tasks: Vec<usize>,
}

/// Turns an ILP solution into a placement of the original tasks.
///
/// Big tasks fill slots of their category, largest cost first. Small tasks,
/// and big tasks that are small on their type, are packed first-fit into
/// the blocks of their communication class; a block that cannot take a
/// task whole lets the one with most room overflow.
pub fn reconstruct_schedule<T: Scalar>(
    inst: &Instance<T>,
    simp: &SimplifiedInstance<T>,
    configs: &[TypeConfigs<T>],
    ilp: &ConfigIlp<T>,
    solution: &[u64],
) -> Result<Placement> {
    let num_procs = inst.num_procs();
    let mut holders: Vec<Vec<Holder<T>>> = (0..num_procs).map(|_| Vec::new()).collect();
    for (ty, tc) in configs.iter().enumerate() {
        let mut procs = simp.types[ty].procs.iter().copied();
        let mut packer = Packer::new(&tc.items);
        for (c, conf) in tc.configs.iter().enumerate() {
            for _ in 0..solution[ilp.x[ty][c]] {
                let m = procs.next().ok_or_else(|| {
                    Error::Internal(format!("type {ty} has more configurations than processors"))
                })?;
                for k in packer.sequence(conf) {
                    let item = &tc.items[k];
                    holders[m].push(Holder {
                        key: item.key,
                        room: item.len.clone(),
                        tasks: Vec::new(),
                    });
                }
            }
        }
    }

    let categories = simp.exec_categories();
    // pending small work per type and communication class
    let mut small_work: Vec<Vec<(CommClass, Vec<usize>)>> = vec![Vec::new(); simp.types.len()];
    let add_small = |work: &mut Vec<(CommClass, Vec<usize>)>, comm: CommClass, j: usize| match work
        .iter_mut()
        .find(|(c, _)| *c == comm)
    {
        Some((_, v)) => v.push(j),
        None => work.push((comm, vec![j])),
    };

    for (class, tasks) in &simp.big {
        let mut tasks = tasks.clone();
        tasks.sort_by(|&a, &b| cmp(&inst.tasks[b].p, &inst.tasks[a].p).then(a.cmp(&b)));
        let mut next = tasks.into_iter();
        for &(ty, vclass, v) in &ilp.n_big {
            if vclass != *class {
                continue;
            }
            for _ in 0..solution[v] {
                let Some(j) = next.next() else { break };
                if simp.small_on(class.level, ty) {
                    add_small(&mut small_work[ty], class.comm, j);
                    continue;
                }
                let exec = simp.exec(class.level, ty);
                let time = categories
                    .iter()
                    .position(|c| *c == exec)
                    .expect("known category");
                let key = ItemKey::Big {
                    time,
                    comm: class.comm,
                };
                let slot = simp.types[ty]
                    .procs
                    .iter()
                    .flat_map(|&m| (0..holders[m].len()).map(move |h| (m, h)))
                    .find(|&(m, h)| holders[m][h].key == key && holders[m][h].tasks.is_empty())
                    .ok_or_else(|| {
                        Error::Internal(format!("no free slot for a big task on type {ty}"))
                    })?;
                holders[slot.0][slot.1].tasks.push(j);
            }
        }
        if next.next().is_some() {
            return Err(Error::Internal("big class not fully covered".into()));
        }
    }

    // small tasks go to types in proportion to their placeholder shares
    for (comm, group) in &simp.small {
        let mut tasks = group.tasks.clone();
        tasks.sort_by(|&a, &b| cmp(&inst.tasks[b].p, &inst.tasks[a].p).then(a.cmp(&b)));
        let shares: Vec<(usize, T)> = ilp
            .n_small
            .iter()
            .filter(|e| e.1 == *comm && solution[e.2] > 0)
            .map(|e| {
                (
                    e.0,
                    simp.p_small.clone() * T::of_usize(solution[e.2] as usize),
                )
            })
            .collect();
        let Some(last) = shares.last().map(|s| s.0) else {
            return Err(Error::Internal("small tasks without placeholders".into()));
        };
        let mut share = 0;
        let mut used = T::zero();
        for j in tasks {
            while share + 1 < shares.len()
                && used.clone() + inst.tasks[j].p.clone() > shares[share].1
            {
                share += 1;
                used = T::zero();
            }
            let ty = if share < shares.len() {
                shares[share].0
            } else {
                last
            };
            used = used + inst.tasks[j].p.clone();
            add_small(&mut small_work[ty], *comm, j);
        }
    }

    for (ty, work) in small_work.iter().enumerate() {
        let speed = simp.types[ty].speed.clone();
        for (comm, tasks) in work {
            let key = ItemKey::Small { comm: *comm };
            let blocks: Vec<(usize, usize)> = simp.types[ty]
                .procs
                .iter()
                .flat_map(|&m| (0..holders[m].len()).map(move |h| (m, h)))
                .filter(|&(m, h)| holders[m][h].key == key)
                .collect();
            if blocks.is_empty() {
                return Err(Error::Internal(format!(
                    "no block for small work on type {ty}"
                )));
            }
            for &j in tasks {
                let time = inst.tasks[j].p.clone() / speed.clone();
                let (m, h) = blocks
                    .iter()
                    .copied()
                    .find(|&(m, h)| holders[m][h].room >= time)
                    .unwrap_or_else(|| {
                        *blocks
                            .iter()
                            .max_by(|a, b| {
                                cmp(&holders[a.0][a.1].room, &holders[b.0][b.1].room).then(b.cmp(a))
                            })
                            .expect("non-empty")
                    });
                let holder = &mut holders[m][h];
                holder.room = holder.room.clone() - time;
                holder.tasks.push(j);
            }
        }
    }

    let mut placement = Placement::empty(simp.m_src, simp.m_sink, num_procs);
    for (m, hs) in holders.into_iter().enumerate() {
        placement.orders[m] = hs.into_iter().flat_map(|h| h.tasks).collect();
    }
    Ok(placement)
}
