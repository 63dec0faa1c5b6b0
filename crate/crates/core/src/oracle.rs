//! Exact optimum by exhaustive search, returning the lexicographically
//! smallest optimal assignment.
//!
//! The lexicographic object is the job → machine-id sequence (jobs in sorted
//! order, machines compared by external id). It never reads bids, so among
//! equal-cover optima the winner does not move when speeds change.
//!
//! The search walks assignments in exactly that lexicographic order. The first
//! assignment reaching the optimum is therefore the lex-min one, and a subtree
//! may be skipped whenever nothing inside it can beat the incumbent strictly:
//!
//! * fractional bound: the best cover the remaining work could reach if it
//!   were divisible is no better than the incumbent;
//! * empty interchangeable machines: two untouched machines with equal bids
//!   give mirror-image subtrees, and the lower id wins the tie;
//! * equal consecutive jobs: swapping them preserves the cover, so only
//!   non-decreasing machine ids are explored across a run of equal sizes.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};
use crate::rational::Rational;

/// Default node budget used by the CLI and the harness.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_cover: Rational,
    /// Lex-min optimal assignment (by sorted position).
    pub assignment: Assignment,
    /// Complete assignments examined.
    pub explored: u64,
    /// Search nodes visited, the quantity charged against the budget.
    pub nodes: u64,
}

/// Exact OPT and the lex-min optimal assignment.
///
/// `budget` caps the number of search nodes; the search refuses with
/// [`Error::BudgetExceeded`] instead of returning an approximation.
pub fn optimal_cover(instance: &Instance, budget: u64) -> Result<OracleResult> {
    let scaled = Scaled::new(instance);
    if scaled.fits_i128() {
        scaled.search::<i128>(instance, budget)
    } else {
        scaled.search::<BigInt>(instance, budget)
    }
}

pub fn lex_min_optimal(instance: &Instance, budget: u64) -> Result<Assignment> {
    optimal_cover(instance, budget).map(|r| r.assignment)
}

/// Integer image of an instance: job sizes and bids multiplied by the lcm of
/// their denominators, so that every load comparison is an integer one.
struct Scaled {
    work: Vec<BigInt>,
    bid: Vec<BigInt>,
    /// lcm of the scaled bids; `reach[i] = lcm / bid[i]`
    reach: Vec<BigInt>,
    job_scale: BigInt,
    bid_scale: BigInt,
}

impl Scaled {
    fn new(instance: &Instance) -> Self {
        let job_scale = lcm_of_denoms(instance.jobs());
        let bid_scale = lcm_of_denoms(instance.bids());
        let work: Vec<BigInt> = instance.jobs().iter().map(|p| (p * &job_scale).to_integer()).collect();
        let bid: Vec<BigInt> = instance.bids().iter().map(|b| (b * &bid_scale).to_integer()).collect();
        let bid_lcm = bid.iter().fold(BigInt::one(), |acc, b| acc.lcm(b));
        let reach = bid.iter().map(|b| &bid_lcm / b).collect();
        Self {
            work,
            bid,
            reach,
            job_scale,
            bid_scale,
        }
    }

    fn fits_i128(&self) -> bool {
        let total: BigInt = self.work.iter().sum();
        let max_bid = self.bid.iter().max().cloned().unwrap_or_else(BigInt::one);
        let max_reach = self.reach.iter().max().cloned().unwrap_or_else(BigInt::one);
        let m = BigInt::from(self.bid.len() + 1);
        // largest intermediate: m * (best load) * reach, and total * lcm
        let bound = &m * &total * &max_bid * &max_reach + &total * &max_reach * &max_bid;
        bound.bits() < 120
    }

    fn search<T: SearchNum>(&self, instance: &Instance, budget: u64) -> Result<OracleResult> {
        let n = instance.n();
        let m = instance.m();
        let work: Vec<T> = self.work.iter().map(T::from_big).collect();
        let bid: Vec<T> = self.bid.iter().map(T::from_big).collect();
        let reach: Vec<T> = self.reach.iter().map(T::from_big).collect();
        let mut suffix = vec![T::zero(); n + 1];
        for j in (0..n).rev() {
            suffix[j] = suffix[j + 1].clone() + work[j].clone();
        }
        // machine positions in ascending external id order
        let mut by_id: Vec<usize> = (0..m).collect();
        by_id.sort_by_key(|&p| instance.machine_ids()[p]);

        let mut dfs = Dfs {
            work: &work,
            bid: &bid,
            reach: &reach,
            suffix: &suffix,
            by_id: &by_id,
            equal_prev: (0..n).map(|j| j > 0 && instance.jobs()[j] == instance.jobs()[j - 1]).collect(),
            loads: vec![T::zero(); m],
            used: vec![0usize; m],
            current: vec![0usize; n],
            best: None,
            best_assignment: Vec::new(),
            explored: 0,
            nodes: 0,
            budget,
        };
        dfs.descend(0, 0)?;
        let best = dfs.best.expect("at least one complete assignment");
        let opt_cover = Rational::new(best.to_big(), &self.job_scale * &self.bid_scale);
        Ok(OracleResult {
            opt_cover,
            assignment: Assignment::new(dfs.best_assignment),
            explored: dfs.explored,
            nodes: dfs.nodes,
        })
    }
}

fn lcm_of_denoms(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

trait SearchNum: Clone + Ord + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> {
    fn from_big(value: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl SearchNum for i128 {
    fn from_big(value: &BigInt) -> Self {
        value.to_i128().expect("range checked before search")
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SearchNum for BigInt {
    fn from_big(value: &BigInt) -> Self {
        value.clone()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Dfs<'a, T> {
    work: &'a [T],
    bid: &'a [T],
    reach: &'a [T],
    suffix: &'a [T],
    by_id: &'a [usize],
    equal_prev: Vec<bool>,
    /// scaled work per machine position
    loads: Vec<T>,
    used: Vec<usize>,
    current: Vec<usize>,
    best: Option<T>,
    best_assignment: Vec<usize>,
    explored: u64,
    nodes: u64,
    budget: u64,
}

impl<T: SearchNum> Dfs<'_, T> {
    /// `min_rank`: smallest id rank allowed for job `j` (equal-job symmetry).
    fn descend(&mut self, j: usize, min_rank: usize) -> Result<()> {
        if j == self.work.len() {
            self.explored += 1;
            let cover = self.cover();
            if self.best.as_ref().is_none_or(|b| cover > *b) {
                self.best = Some(cover);
                self.best_assignment.clone_from(&self.current);
            }
            return Ok(());
        }
        if self.cannot_improve(j) {
            return Ok(());
        }
        let m = self.by_id.len();
        for rank in min_rank..m {
            let pos = self.by_id[rank];
            if self.used[pos] == 0 && self.has_empty_twin_before(rank) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget });
            }
            self.loads[pos] = self.loads[pos].clone() + self.work[j].clone();
            self.used[pos] += 1;
            self.current[j] = pos;
            let next_min = if j + 1 < self.work.len() && self.equal_prev[j + 1] { rank } else { 0 };
            self.descend(j + 1, next_min)?;
            self.used[pos] -= 1;
            self.loads[pos] = self.loads[pos].clone() - self.work[j].clone();
        }
        Ok(())
    }

    fn cover(&self) -> T {
        self.loads
            .iter()
            .zip(self.bid)
            .map(|(w, b)| w.clone() * b.clone())
            .min()
            .expect("at least one machine")
    }

    /// True when even a divisible remainder could not lift every machine
    /// strictly above the incumbent.
    fn cannot_improve(&self, j: usize) -> bool {
        let Some(best) = &self.best else { return false };
        let mut needed = T::zero();
        for ((w, b), r) in self.loads.iter().zip(self.bid).zip(self.reach) {
            let load = w.clone() * b.clone();
            if load <= *best {
                needed = needed + (best.clone() - load) * r.clone();
            }
        }
        let lcm = self.reach[0].clone() * self.bid[0].clone();
        needed >= self.suffix[j].clone() * lcm
    }

    fn has_empty_twin_before(&self, rank: usize) -> bool {
        let pos = self.by_id[rank];
        self.by_id[..rank]
            .iter()
            .any(|&other| self.used[other] == 0 && self.bid[other] == self.bid[pos])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cover_of;
    use crate::rational::{int, ratio};

    /// Plain enumeration of all m^n assignments in lexicographic id order.
    fn brute(instance: &Instance) -> (Rational, Vec<usize>) {
        let n = instance.n();
        let m = instance.m();
        let mut by_id: Vec<usize> = (0..m).collect();
        by_id.sort_by_key(|&p| instance.machine_ids()[p]);
        let mut digits = vec![0usize; n];
        let mut best: Option<(Rational, Vec<usize>)> = None;
        loop {
            let a = Assignment::new(digits.iter().map(|&d| by_id[d]).collect());
            let c = cover_of(&a, instance);
            if best.as_ref().is_none_or(|(b, _)| c > *b) {
                best = Some((c, a.machine_of));
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return best.unwrap();
                }
                k -= 1;
                digits[k] += 1;
                if digits[k] < m {
                    break;
                }
                digits[k] = 0;
            }
        }
    }

    fn inst(jobs: &[Rational], bids: &[Rational]) -> Instance {
        Instance::new(jobs.to_vec(), bids.to_vec(), None).unwrap()
    }

    #[test]
    fn worked_examples() {
        let r = optimal_cover(&inst(&[int(3), int(2), int(2)], &[int(1), int(1)]), 1000).unwrap();
        assert_eq!(r.opt_cover, int(3));
        assert_eq!(r.assignment.machine_of, vec![0, 1, 1]);

        let r = optimal_cover(&inst(&[int(1)], &[int(1), int(1)]), 1000).unwrap();
        assert_eq!(r.opt_cover, int(0));
        assert_eq!(r.assignment.machine_of, vec![0]);

        let r = optimal_cover(&inst(&[int(2), int(2)], &[int(1), int(1)]), 1000).unwrap();
        assert_eq!(r.opt_cover, int(2));
        assert_eq!(r.assignment.machine_of, vec![0, 1]);
    }

    #[test]
    fn lex_min_examples() {
        let a = lex_min_optimal(&inst(&[int(1), int(1)], &[ratio(1, 4), int(1)]), 1000).unwrap();
        assert_eq!(a.machine_of, vec![0, 1]);

        let a = lex_min_optimal(&inst(&[int(5), int(1), int(2)], &[int(3)]), 1000).unwrap();
        assert_eq!(a.machine_of, vec![0, 0, 0]);

        let a = lex_min_optimal(&inst(&[int(2), int(2), int(2)], &[int(1), int(1), int(1)]), 1000).unwrap();
        assert_eq!(a.machine_of, vec![0, 1, 2]);
    }

    #[test]
    fn lex_order_follows_ids_not_bids() {
        // machine id 0 is the slow one; lex-min compares by id
        let i = Instance::new(vec![int(2), int(2)], vec![int(2), int(1)], None).unwrap();
        assert_eq!(i.machine_ids(), &[1, 0]);
        let a = lex_min_optimal(&i, 1000).unwrap();
        assert_eq!(a.to_external(&i), vec![0, 1]);
    }

    #[test]
    fn budget_is_enforced() {
        let jobs: Vec<Rational> = (1..=12).map(|k| ratio(k, 7)).collect();
        let i = inst(&jobs, &[int(1), int(2), int(3)]);
        assert_eq!(optimal_cover(&i, 5), Err(Error::BudgetExceeded { budget: 5 }));
    }

    #[test]
    fn agrees_with_plain_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=7);
            let jobs: Vec<Rational> = (0..n).map(|_| ratio(rng.gen_range(1..=6), rng.gen_range(1..=3))).collect();
            let bids: Vec<Rational> = (0..m).map(|_| ratio(rng.gen_range(1..=4), rng.gen_range(1..=2))).collect();
            let i = inst(&jobs, &bids);
            let (c, a) = brute(&i);
            let r = optimal_cover(&i, u64::MAX).unwrap();
            assert_eq!(r.opt_cover, c, "{i:?}");
            assert_eq!(r.assignment.machine_of, a, "{i:?}");
            let big = Scaled::new(&i).search::<BigInt>(&i, u64::MAX).unwrap();
            assert_eq!(big.assignment, r.assignment);
        }
    }
}
