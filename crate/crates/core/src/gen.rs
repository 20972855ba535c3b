//! Seeded random instance generation.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BranchTask, Instance};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    /// One cost shared by every branch task.
    Equal,
    Random,
}

/// Parameters of [`generate`]. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub n_tasks: usize,
    pub n_procs: usize,
    /// Speeds are drawn uniformly from this set.
    pub speed_set: Vec<u32>,
    pub cost_mode: CostMode,
    pub cost_range: (u32, u32),
    pub gin_range: (u32, u32),
    pub gout_range: (u32, u32),
    /// Share one incoming communication among all branch tasks.
    pub equal_gin: bool,
    /// Number of processor groups; `None` leaves the instance ungrouped.
    pub groups: Option<u32>,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            n_tasks: 5,
            n_procs: 2,
            speed_set: vec![1, 2, 3],
            cost_mode: CostMode::Equal,
            cost_range: (1, 6),
            gin_range: (0, 6),
            gout_range: (0, 6),
            equal_gin: false,
            groups: None,
            seed: 0,
        }
    }
}

impl GenParams {
    fn check(&self) -> Result<()> {
        let range = |name: &str, (lo, hi): (u32, u32)| {
            if lo > hi {
                Err(Error::invalid(name, format!("empty range {lo}..={hi}")))
            } else {
                Ok(())
            }
        };
        range("cost_range", self.cost_range)?;
        range("gin_range", self.gin_range)?;
        range("gout_range", self.gout_range)?;
        if self.cost_range.0 == 0 {
            return Err(Error::invalid("cost_range", "costs must be positive"));
        }
        if self.n_procs == 0 {
            return Err(Error::invalid(
                "n_procs",
                "at least one processor is required",
            ));
        }
        if self.speed_set.is_empty() || self.speed_set.contains(&0) {
            return Err(Error::invalid(
                "speed_set",
                "speeds must be positive and the set non-empty",
            ));
        }
        if let Some(g) = self.groups {
            if g == 0 || g as usize > self.n_procs {
                return Err(Error::invalid(
                    "groups",
                    format!("{g} groups cannot cover {} processors", self.n_procs),
                ));
            }
        }
        Ok(())
    }
}

fn int(v: u32) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A random instance; identical parameters give identical instances.
pub fn generate(params: &GenParams) -> Result<Instance<Rational>> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut draw = |(lo, hi): (u32, u32)| rng.gen_range(lo..=hi);
    let common = draw(params.cost_range);
    let shared_gin = draw(params.gin_range);
    let mut tasks = Vec::with_capacity(params.n_tasks);
    for j in 0..params.n_tasks {
        let p = match params.cost_mode {
            CostMode::Equal => common,
            CostMode::Random => draw(params.cost_range),
        };
        let gin = if params.equal_gin {
            shared_gin
        } else {
            draw(params.gin_range)
        };
        let gout = draw(params.gout_range);
        tasks.push(BranchTask::new(
            format!("t{j}"),
            int(p),
            int(gin),
            int(gout),
        ));
    }
    let p_src = draw(params.cost_range);
    let p_sink = draw(params.cost_range);
    let speeds: Vec<Rational> = (0..params.n_procs)
        .map(|_| int(*params.speed_set.choose(&mut rng).expect("non-empty")))
        .collect();
    let inst = Instance::new(tasks, int(p_src), int(p_sink), speeds)?;
    match params.groups {
        None => Ok(inst),
        Some(g) => {
            // every group gets at least one processor
            let mut labels: Vec<u32> = (0..params.n_procs as u32).map(|m| m % g).collect();
            labels.shuffle(&mut rng);
            inst.with_groups(labels)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let params = GenParams {
            seed: 42,
            cost_mode: CostMode::Random,
            ..GenParams::default()
        };
        assert_eq!(generate(&params).unwrap(), generate(&params).unwrap());
    }

    #[test]
    fn equal_mode_has_common_cost() {
        let inst = generate(&GenParams {
            n_tasks: 8,
            ..GenParams::default()
        })
        .unwrap();
        assert!(inst.common_cost().is_some());
    }

    #[test]
    fn zero_tasks_is_valid() {
        let inst = generate(&GenParams {
            n_tasks: 0,
            ..GenParams::default()
        })
        .unwrap();
        assert_eq!(inst.num_tasks(), 0);
    }

    #[test]
    fn contradictions_are_rejected() {
        assert!(generate(&GenParams {
            cost_range: (3, 2),
            ..GenParams::default()
        })
        .is_err());
        assert!(generate(&GenParams {
            groups: Some(3),
            ..GenParams::default()
        })
        .is_err());
    }
}
