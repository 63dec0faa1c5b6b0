//! Identical-machine heuristics (LPT, List Scheduling) and Round Robin.

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};
use crate::rational::{self, Rational};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    /// Job indices per machine, in assignment order.
    pub sets: Vec<Vec<usize>>,
    pub sums: Vec<Rational>,
}

impl Partition {
    /// Smallest set sum: the cover on identical unit-speed machines.
    pub fn min_sum(&self) -> Rational {
        rational::min(&self.sums).expect("at least one set")
    }

    pub fn max_sum(&self) -> Rational {
        self.sums.iter().max().cloned().expect("at least one set")
    }
}

/// List Scheduling: each job, in the given order, goes to a currently
/// least-loaded set (lowest index on ties).
pub fn list_schedule(jobs: &[Rational], k: usize) -> Partition {
    assert!(k >= 1, "list scheduling needs at least one set");
    let mut sets = vec![Vec::new(); k];
    let mut sums = vec![Rational::zero(); k];
    for (j, p) in jobs.iter().enumerate() {
        let target = argmin(&sums);
        sets[target].push(j);
        sums[target] += p;
    }
    Partition { sets, sums }
}

/// LPT on `k` identical machines. `jobs` must be sorted non-increasing;
/// returns the partition and its value `A` (the minimum set sum).
pub fn lpt_identical(jobs: &[Rational], k: usize) -> Result<(Partition, Rational)> {
    if k == 0 {
        return Err(Error::InvalidParams("LPT needs at least one machine".into()));
    }
    debug_assert!(jobs.windows(2).all(|w| w[0] >= w[1]), "jobs must be sorted");
    let partition = list_schedule(jobs, k);
    let value = partition.min_sum();
    Ok((partition, value))
}

fn argmin(values: &[Rational]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Round Robin: sorted job `j` goes to sorted machine `j mod m`.
pub fn round_robin(instance: &Instance) -> Assignment {
    let m = instance.m();
    Assignment::new((0..instance.n()).map(|j| j % m).collect())
}
