use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::config::{ItemKey, TypeConfigs};
use super::simplify::{BigClass, CommClass, SimplifiedInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    AtLeast,
    AtMost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row<T> {
    pub terms: Vec<(usize, T)>,
    pub sense: Sense,
    pub rhs: T,
}

/// Integer program over variables `0 <= x_i <= upper[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerProgram<T> {
    pub upper: Vec<u64>,
    pub rows: Vec<Row<T>>,
}

impl<T: Scalar> IntegerProgram<T> {
    pub fn satisfied_by(&self, x: &[u64]) -> bool {
        self.rows.iter().all(|row| {
            let lhs = row.terms.iter().fold(T::zero(), |acc, (i, a)| {
                acc + a.clone() * T::of_usize(x[*i] as usize)
            });
            match row.sense {
                Sense::AtLeast => lhs >= row.rhs,
                Sense::AtMost => lhs <= row.rhs,
            }
        })
    }
}

/// Row family sizes of a configuration ILP.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RowCounts {
    pub coverage: usize,
    pub small_coverage: usize,
    pub slots: usize,
    pub small_time: usize,
    pub machines: usize,
}

#[derive(Debug, Clone)]
pub struct ConfigIlp<T> {
    pub program: IntegerProgram<T>,
    /// `x[ty][c]`: processors of type `ty` using configuration `c`.
    pub x: Vec<Vec<usize>>,
    /// `(ty, class, var)`: big tasks of `class` sent to type `ty`.
    pub n_big: Vec<(usize, BigClass, usize)>,
    /// `(ty, comm, var)`: placeholders of `comm` sent to type `ty`.
    pub n_small: Vec<(usize, CommClass, usize)>,
    pub counts: RowCounts,
}

/// The configuration ILP for one rounded instance.
///
/// Coverage rows ask for every big class and every placeholder class to be
/// fully distributed over types. Slot rows ask each type's configurations
/// to provide a slot per big task that is big on that type. Small-time rows
/// ask for enough block time per communication class, counting big tasks
/// that are small on the type. Machine rows bound configurations by the
/// number of processors of a type.
pub fn build_ilp<T: Scalar>(
    simp: &SimplifiedInstance<T>,
    configs: &[TypeConfigs<T>],
) -> ConfigIlp<T> {
    let mut upper: Vec<u64> = Vec::new();
    let var = |upper: &mut Vec<u64>, ub: u64| {
        upper.push(ub);
        upper.len() - 1
    };
    let mut x = Vec::with_capacity(simp.types.len());
    let mut n_big = Vec::new();
    let mut n_small = Vec::new();
    for (ty, tc) in configs.iter().enumerate() {
        let mult = simp.types[ty].procs.len() as u64;
        x.push(
            tc.configs
                .iter()
                .map(|_| var(&mut upper, mult))
                .collect::<Vec<_>>(),
        );
        for (class, tasks) in &simp.big {
            n_big.push((ty, *class, var(&mut upper, tasks.len() as u64)));
        }
        for (comm, g) in &simp.small {
            if g.placeholders > 0 {
                n_small.push((ty, *comm, var(&mut upper, g.placeholders)));
            }
        }
    }

    let mut rows = Vec::new();
    let mut counts = RowCounts::default();
    for (class, tasks) in &simp.big {
        rows.push(Row {
            terms: n_big
                .iter()
                .filter(|e| e.1 == *class)
                .map(|e| (e.2, T::one()))
                .collect(),
            sense: Sense::AtLeast,
            rhs: T::of_usize(tasks.len()),
        });
        counts.coverage += 1;
    }
    for (comm, g) in &simp.small {
        if g.placeholders == 0 {
            continue;
        }
        rows.push(Row {
            terms: n_small
                .iter()
                .filter(|e| e.1 == *comm)
                .map(|e| (e.2, T::one()))
                .collect(),
            sense: Sense::AtLeast,
            rhs: T::of_usize(g.placeholders as usize),
        });
        counts.small_coverage += 1;
    }

    let categories = simp.exec_categories();
    let mut comms: Vec<CommClass> = simp
        .big
        .keys()
        .map(|b| b.comm)
        .chain(simp.small.keys().copied())
        .collect();
    comms.sort_unstable();
    comms.dedup();
    for (ty, tc) in configs.iter().enumerate() {
        // slot rows, one per execution category and communication class in use on this type
        for (t, exec) in categories.iter().enumerate() {
            for &comm in &comms {
                let mut terms: Vec<(usize, T)> = Vec::new();
                for &(vty, class, v) in &n_big {
                    if vty == ty
                        && class.comm == comm
                        && !simp.small_on(class.level, ty)
                        && simp.exec(class.level, ty) == *exec
                    {
                        terms.push((v, -T::one()));
                    }
                }
                if terms.is_empty() {
                    continue;
                }
                let key = ItemKey::Big { time: t, comm };
                if let Some(k) = tc.items.iter().position(|it| it.key == key) {
                    for (c, conf) in tc.configs.iter().enumerate() {
                        if conf[k] > 0 {
                            terms.push((x[ty][c], T::of_usize(conf[k] as usize)));
                        }
                    }
                }
                rows.push(Row {
                    terms,
                    sense: Sense::AtLeast,
                    rhs: T::zero(),
                });
                counts.slots += 1;
            }
        }
        let speed = simp.types[ty].speed.clone();
        for &comm in &comms {
            let mut terms: Vec<(usize, T)> = Vec::new();
            for &(vty, class, v) in &n_big {
                if vty == ty && class.comm == comm && simp.small_on(class.level, ty) {
                    terms.push((v, -simp.exec(class.level, ty)));
                }
            }
            for &(vty, c, v) in &n_small {
                if vty == ty && c == comm {
                    terms.push((v, -(simp.p_small.clone() / speed.clone())));
                }
            }
            let key = ItemKey::Small { comm };
            if let Some(k) = tc.items.iter().position(|it| it.key == key) {
                for (c, conf) in tc.configs.iter().enumerate() {
                    if conf[k] > 0 {
                        terms.push((
                            x[ty][c],
                            simp.t_small.clone() * T::of_usize(conf[k] as usize),
                        ));
                    }
                }
            }
            rows.push(Row {
                terms,
                sense: Sense::AtLeast,
                rhs: T::zero(),
            });
            counts.small_time += 1;
        }
        rows.push(Row {
            terms: x[ty].iter().map(|&v| (v, T::one())).collect(),
            sense: Sense::AtMost,
            rhs: T::of_usize(simp.types[ty].procs.len()),
        });
        counts.machines += 1;
    }
    ConfigIlp {
        program: IntegerProgram { upper, rows },
        x,
        n_big,
        n_small,
        counts,
    }
}

/// Depth-first search over the variables with bound propagation.
///
/// At every node each row tightens the lower and upper bounds of its
/// unfixed variables, to a fixpoint. Variables of a unit at-most row share
/// its capacity, which sharpens the best completion of the other rows.
/// Returns `Ok(None)` when the program is infeasible and an error when more
/// than `max_nodes` nodes would be needed to decide.
pub fn solve_ilp<T: Scalar>(
    program: &IntegerProgram<T>,
    max_nodes: u64,
) -> Result<Option<Vec<u64>>> {
    let n = program.upper.len();
    // cardinality groups: unit at-most rows over disjoint variables
    let mut group_of: Vec<Option<usize>> = vec![None; n];
    let mut groups: Vec<(Vec<usize>, u64)> = Vec::new();
    for row in &program.rows {
        let unit = row.sense == Sense::AtMost && row.terms.iter().all(|(_, a)| *a == T::one());
        if !unit || row.terms.iter().any(|(i, _)| group_of[*i].is_some()) {
            continue;
        }
        let cap = row.rhs.floor_val().to_f64_lossy().max(0.0) as u64;
        for (i, _) in &row.terms {
            group_of[*i] = Some(groups.len());
        }
        groups.push((row.terms.iter().map(|(i, _)| *i).collect(), cap));
    }
    let mut search = Search {
        program,
        group_of,
        groups,
        nodes: 0,
        max_nodes,
    };
    let bounds = Bounds {
        lo: vec![0; n],
        hi: program.upper.clone(),
    };
    search.dfs(bounds)
}

#[derive(Clone)]
struct Bounds {
    lo: Vec<u64>,
    hi: Vec<u64>,
}

struct Search<'a, T> {
    program: &'a IntegerProgram<T>,
    group_of: Vec<Option<usize>>,
    groups: Vec<(Vec<usize>, u64)>,
    nodes: u64,
    max_nodes: u64,
}

fn to_u64<T: Scalar>(v: &T) -> u64 {
    v.to_f64_lossy().max(0.0) as u64
}

impl<T: Scalar> Search<'_, T> {
    fn dfs(&mut self, mut b: Bounds) -> Result<Option<Vec<u64>>> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::LimitExceeded(format!(
                "integer program search exceeded {} nodes",
                self.max_nodes
            )));
        }
        if !self.propagate(&mut b) {
            return Ok(None);
        }
        let Some(i) = (0..b.lo.len()).find(|&i| b.lo[i] < b.hi[i]) else {
            return Ok(self.program.satisfied_by(&b.lo).then_some(b.lo));
        };
        for v in (b.lo[i]..=b.hi[i]).rev() {
            let mut child = b.clone();
            child.lo[i] = v;
            child.hi[i] = v;
            if let Some(x) = self.dfs(child)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// Largest value of the row's left side within the bounds.
    fn max_lhs(&self, row: &Row<T>, b: &Bounds) -> T {
        let mut total = T::zero();
        // grouped positive terms: lower bounds plus the shared capacity, greedily
        let mut grouped: Vec<(usize, Vec<(T, u64)>)> = Vec::new();
        for (v, a) in &row.terms {
            total = total + a.clone() * T::of_usize(b.lo[*v] as usize);
            let room = b.hi[*v] - b.lo[*v];
            if room == 0 {
                continue;
            }
            if *a > T::zero() {
                match self.group_of[*v] {
                    Some(g) => match grouped.iter_mut().find(|e| e.0 == g) {
                        Some(e) => e.1.push((a.clone(), room)),
                        None => grouped.push((g, vec![(a.clone(), room)])),
                    },
                    None => total = total + a.clone() * T::of_usize(room as usize),
                }
            }
        }
        for (g, mut terms) in grouped {
            let (vars, cap) = &self.groups[g];
            let used: u64 = vars.iter().map(|&v| b.lo[v]).sum();
            let mut left = cap.saturating_sub(used);
            terms.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("ordered"));
            for (a, room) in terms {
                let take = room.min(left);
                total = total + a * T::of_usize(take as usize);
                left -= take;
            }
        }
        total
    }

    /// Smallest value of the row's left side within the bounds.
    fn min_lhs(&self, row: &Row<T>, b: &Bounds) -> T {
        row.terms.iter().fold(T::zero(), |acc, (v, a)| {
            let at = if *a > T::zero() { b.lo[*v] } else { b.hi[*v] };
            acc + a.clone() * T::of_usize(at as usize)
        })
    }

    /// Tightens `b` to a fixpoint; false when some row cannot be met.
    fn propagate(&self, b: &mut Bounds) -> bool {
        loop {
            let mut changed = false;
            for row in &self.program.rows {
                match row.sense {
                    Sense::AtLeast => {
                        let best = self.max_lhs(row, b);
                        if best < row.rhs {
                            return false;
                        }
                        let slack = best - row.rhs.clone();
                        for (v, a) in &row.terms {
                            if b.lo[*v] == b.hi[*v] {
                                continue;
                            }
                            // a * (x - extreme) may cost at most the slack
                            if *a > T::zero() {
                                let need = b.hi[*v].saturating_sub(to_u64(
                                    &(slack.clone() / a.clone()).floor_val(),
                                ));
                                // the grouped bound is not additive, so only sure when ungrouped
                                if self.group_of[*v].is_none() && need > b.lo[*v] {
                                    b.lo[*v] = need;
                                    changed = true;
                                }
                            } else {
                                let room = to_u64(&(slack.clone() / -a.clone()).floor_val());
                                let cap = b.lo[*v].saturating_add(room);
                                if cap < b.hi[*v] {
                                    b.hi[*v] = cap;
                                    changed = true;
                                }
                            }
                        }
                    }
                    Sense::AtMost => {
                        let least = self.min_lhs(row, b);
                        if least > row.rhs {
                            return false;
                        }
                        let slack = row.rhs.clone() - least;
                        for (v, a) in &row.terms {
                            if b.lo[*v] == b.hi[*v] {
                                continue;
                            }
                            if *a > T::zero() {
                                let room = to_u64(&(slack.clone() / a.clone()).floor_val());
                                let cap = b.lo[*v].saturating_add(room);
                                if cap < b.hi[*v] {
                                    b.hi[*v] = cap;
                                    changed = true;
                                }
                            } else {
                                let need = b.hi[*v].saturating_sub(to_u64(
                                    &(slack.clone() / -a.clone()).floor_val(),
                                ));
                                if need > b.lo[*v] {
                                    b.lo[*v] = need;
                                    changed = true;
                                }
                            }
                        }
                    }
                }
                if b.lo.iter().zip(&b.hi).any(|(l, h)| l > h) {
                    return false;
                }
            }
            if !changed {
                return true;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn zero_rhs_gives_a_solution() {
        let p = IntegerProgram {
            upper: vec![3, 3],
            rows: vec![Row {
                terms: vec![(0, q(1)), (1, q(-1))],
                sense: Sense::AtLeast,
                rhs: q(0),
            }],
        };
        let x = solve_ilp(&p, 1000).unwrap().unwrap();
        assert!(p.satisfied_by(&x));
    }

    #[test]
    fn one_machine_cannot_host_two_configurations() {
        let p = IntegerProgram {
            upper: vec![1, 1],
            rows: vec![
                Row {
                    terms: vec![(0, q(1)), (1, q(1))],
                    sense: Sense::AtMost,
                    rhs: q(1),
                },
                Row {
                    terms: vec![(0, q(1))],
                    sense: Sense::AtLeast,
                    rhs: q(1),
                },
                Row {
                    terms: vec![(1, q(1))],
                    sense: Sense::AtLeast,
                    rhs: q(1),
                },
            ],
        };
        assert_eq!(solve_ilp(&p, 1000).unwrap(), None);
    }

    #[test]
    fn node_budget_is_reported() {
        // an odd total from even coefficients: bounds alone cannot refute it
        let row = |sense| Row {
            terms: (0..6).map(|i| (i, q(2))).collect(),
            sense,
            rhs: q(7),
        };
        let p = IntegerProgram {
            upper: vec![5; 6],
            rows: vec![row(Sense::AtLeast), row(Sense::AtMost)],
        };
        assert_eq!(solve_ilp(&p, 1_000_000).unwrap(), None);
        assert!(matches!(solve_ilp(&p, 10), Err(Error::LimitExceeded(_))));
    }
}
