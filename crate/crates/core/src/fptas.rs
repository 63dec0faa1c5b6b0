//! Dynamic-programming FPTAS and the monotone mechanism built on top of it.
//!
//! The FPTAS scales the instance so Round Robin covers exactly 1, then looks
//! for the largest guess `j * eps` in `[1, m]` that rounded job loads can
//! cover. For a fixed guess every job gets an integer load per machine and a
//! table over load vectors `{0..S}^m` records, for each job prefix, the
//! highest machine the last job can go to while still reaching the vector.
//!
//! The mechanism rounds bids to powers of `1 + eps`, runs the FPTAS on every
//! candidate rounded bid vector, reorders each result so that more work goes
//! to faster machines, and keeps the candidate with the best cover under the
//! rounded true bids.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::baselines::round_robin;
use crate::error::{Error, Result};
use crate::model::{cover_of, Assignment, Instance};
use crate::rational::{self, Rational};

/// Integer rounded loads for one guess.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpInput {
    /// `loads[k][i]`: rounded load of job `k` on machine position `i`, at least 1.
    pub loads: Vec<Vec<u64>>,
    pub target: u64,
    pub m: usize,
}

impl DpInput {
    pub fn n(&self) -> usize {
        self.loads.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub reachable: bool,
    /// Smallest job count whose table reaches the target on every machine.
    pub minimal_k: Option<usize>,
    /// Machine position for each of the first `minimal_k` jobs.
    pub prefix: Option<Vec<usize>>,
}

/// How a load that would drop below zero is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Guard {
    /// Predecessor coordinate is `max(0, a_i - l)`; a job may overshoot.
    #[default]
    Clamped,
    /// Job `k` may go to machine `i` only when `a_i >= l`.
    Strict,
}

struct Layout {
    side: usize,
    strides: Vec<usize>,
    cells: usize,
}

impl Layout {
    fn new(target: u64, m: usize) -> Self {
        let side = target as usize + 1;
        let mut strides = Vec::with_capacity(m);
        let mut s = 1usize;
        for _ in 0..m {
            strides.push(s);
            s = s.checked_mul(side).expect("table size overflow");
        }
        Self { side, strides, cells: s }
    }
}

/// Fills the tables job by job and stops at the first one reaching `(S,...,S)`.
pub fn dp_cover_test(input: &DpInput) -> DpOutcome {
    dp_cover_test_with(input, Guard::Clamped)
}

pub fn dp_cover_test_with(input: &DpInput, guard: Guard) -> DpOutcome {
    let m = input.m;
    let layout = Layout::new(input.target, m);
    let full: usize = layout.strides.iter().map(|s| s * input.target as usize).sum();
    let unreachable = DpOutcome {
        reachable: false,
        minimal_k: None,
        prefix: None,
    };
    if m == 0 {
        return unreachable;
    }

    let mut tables: Vec<Vec<u8>> = Vec::with_capacity(input.n() + 1);
    let mut first = vec![0u8; layout.cells];
    first[0] = m as u8;
    tables.push(first);
    if input.target == 0 {
        return DpOutcome {
            reachable: true,
            minimal_k: Some(0),
            prefix: Some(Vec::new()),
        };
    }

    for k in 0..input.n() {
        let prev = &tables[k];
        let mut next = vec![0u8; layout.cells];
        let mut digits = vec![0usize; m];
        for (idx, cell) in next.iter_mut().enumerate() {
            for i in (0..m).rev() {
                let load = input.loads[k][i] as usize;
                let a = digits[i];
                let reduced = match guard {
                    Guard::Clamped => a.saturating_sub(load),
                    Guard::Strict if a >= load => a - load,
                    Guard::Strict => continue,
                };
                let pred = idx - a * layout.strides[i] + reduced * layout.strides[i];
                if prev[pred] > 0 {
                    *cell = (i + 1) as u8;
                    break;
                }
            }
            // advance the mixed-radix counter
            for d in digits.iter_mut() {
                *d += 1;
                if *d < layout.side {
                    break;
                }
                *d = 0;
            }
        }
        tables.push(next);
        if tables[k + 1][full] > 0 {
            let prefix = backtrack(input, &tables, &layout, k + 1, full, guard);
            return DpOutcome {
                reachable: true,
                minimal_k: Some(k + 1),
                prefix: Some(prefix),
            };
        }
    }
    unreachable
}

fn backtrack(input: &DpInput, tables: &[Vec<u8>], layout: &Layout, k: usize, start: usize, guard: Guard) -> Vec<usize> {
    let mut prefix = vec![0; k];
    let mut idx = start;
    for job in (0..k).rev() {
        let machine = tables[job + 1][idx] as usize - 1;
        prefix[job] = machine;
        let a = (idx / layout.strides[machine]) % layout.side;
        let load = input.loads[job][machine] as usize;
        let reduced = match guard {
            Guard::Clamped => a.saturating_sub(load),
            Guard::Strict => a - load,
        };
        idx = idx - a * layout.strides[machine] + reduced * layout.strides[machine];
        debug_assert!(tables[job][idx] > 0);
    }
    prefix
}

/// `1 / eps` when it is a positive integer.
pub fn inverse_epsilon(epsilon: &Rational) -> Result<u64> {
    let bad = |reason: &str| Error::InvalidEpsilon {
        epsilon: rational::format(epsilon),
        reason: reason.into(),
    };
    if *epsilon <= Rational::zero() || *epsilon > Rational::one() {
        return Err(bad("epsilon must lie in (0, 1]"));
    }
    if !epsilon.numer().is_one() {
        return Err(bad("1/epsilon must be an integer; try 1/k such as 1/4"));
    }
    epsilon
        .denom()
        .to_u64()
        .ok_or_else(|| bad("1/epsilon is too large"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessSearch {
    /// Fewer jobs than machines; nothing to search.
    Skipped,
    Binary,
    /// The bracket check failed and every guess was tried from the top.
    LinearFallback,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FptasOutcome {
    pub assignment: Assignment,
    /// Largest guess index reached; the guess is `achieved_j * eps` in units
    /// of the Round Robin cover.
    pub achieved_j: Option<u64>,
    /// Jobs placed by the table; the rest went to the fastest machine.
    pub minimal_k: Option<usize>,
    pub search: GuessSearch,
}

struct Scaled<'a> {
    instance: &'a Instance,
    rr_cover: Rational,
    inv_eps: u64,
}

impl Scaled<'_> {
    fn dp_input(&self, j: u64) -> DpInput {
        let n = self.instance.n() as u64;
        let target = n * self.inv_eps;
        let factor = Rational::from_integer(BigInt::from(n * self.inv_eps * self.inv_eps))
            / (Rational::from_integer(BigInt::from(j)) * &self.rr_cover);
        let cap = BigInt::from(target + 1);
        let loads = self
            .instance
            .jobs()
            .iter()
            .map(|p| {
                let scaled = p * &factor;
                self.instance
                    .bids()
                    .iter()
                    .map(|b| {
                        let l = (&scaled * b).ceil().to_integer().min(cap.clone());
                        l.to_u64().expect("capped load fits")
                    })
                    .collect()
            })
            .collect();
        DpInput {
            loads,
            target,
            m: self.instance.m(),
        }
    }
}

/// The non-monotone FPTAS. Requires `1/eps` to be an integer.
pub fn fptas(instance: &Instance, epsilon: &Rational) -> Result<FptasOutcome> {
    let inv_eps = inverse_epsilon(epsilon)?;
    let n = instance.n();
    let m = instance.m();
    if n < m {
        return Ok(FptasOutcome {
            assignment: Assignment::all_on(0, n),
            achieved_j: None,
            minimal_k: None,
            search: GuessSearch::Skipped,
        });
    }
    let rr = round_robin(instance);
    let scaled = Scaled {
        instance,
        rr_cover: cover_of(&rr, instance),
        inv_eps,
    };
    let run = |j: u64| dp_cover_test(&scaled.dp_input(j));

    let low = inv_eps;
    let high = m as u64 * inv_eps;
    let mut search = GuessSearch::Binary;
    let mut best: Option<(u64, DpOutcome)> = None;

    let top = run(high);
    if top.reachable {
        best = Some((high, top));
    } else {
        let bottom = run(low);
        if bottom.reachable {
            // invariant: lo reachable, hi not
            let (mut lo, mut hi) = (low, high);
            let mut lo_outcome = bottom;
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                let outcome = run(mid);
                if outcome.reachable {
                    lo = mid;
                    lo_outcome = outcome;
                } else {
                    hi = mid;
                }
            }
            best = Some((lo, lo_outcome));
        } else {
            search = GuessSearch::LinearFallback;
            for j in (low..high).rev() {
                let outcome = run(j);
                if outcome.reachable {
                    best = Some((j, outcome));
                    break;
                }
            }
        }
    }

    let Some((j, outcome)) = best else {
        return Ok(FptasOutcome {
            assignment: Assignment::all_on(0, n),
            achieved_j: None,
            minimal_k: None,
            search,
        });
    };
    let prefix = outcome.prefix.expect("reachable outcome carries a prefix");
    let mut machine_of = vec![0; n];
    machine_of[..prefix.len()].copy_from_slice(&prefix);
    Ok(FptasOutcome {
        assignment: Assignment::new(machine_of),
        achieved_j: Some(j),
        minimal_k: outcome.minimal_k,
        search,
    })
}

/// Lower bound `1 - 2 eps` on cover / OPT.
pub fn guarantee(epsilon: &Rational) -> Rational {
    Rational::one() - Rational::from_integer(2.into()) * epsilon
}

/// Bids rounded up to powers of `1 + eps`, normalized and clamped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundedBids {
    /// Exponent per input bid (same order as the input).
    pub exponents: Vec<u32>,
    pub ell: u32,
    /// Whether any exponent was lowered to `ell + 1`.
    pub clamped: bool,
}

impl RoundedBids {
    pub fn values(&self, epsilon: &Rational) -> Vec<Rational> {
        let base = Rational::one() + epsilon;
        self.exponents.iter().map(|&e| rational::pow(&base, e as i64)).collect()
    }
}

/// Smallest `i` with `(1 + eps)^i >= total / smallest job`.
pub fn compute_ell(jobs: &[Rational], epsilon: &Rational) -> u32 {
    let smallest = jobs.iter().min().expect("at least one job");
    let ratio = rational::sum(jobs) / smallest;
    let e = rational::ceil_log(&(Rational::one() + epsilon), &ratio);
    e.max(0) as u32
}

pub fn round_bids(bids: &[Rational], epsilon: &Rational, ell: u32) -> RoundedBids {
    let base = Rational::one() + epsilon;
    let raw: Vec<i64> = bids.iter().map(|b| rational::ceil_log(&base, b)).collect();
    let min = raw.iter().copied().min().unwrap_or(0);
    let cap = ell as i64 + 1;
    let mut clamped = false;
    let exponents = raw
        .iter()
        .map(|&e| {
            let e = e - min;
            if e > cap {
                clamped = true;
                cap as u32
            } else {
                e as u32
            }
        })
        .collect();
    RoundedBids { exponents, ell, clamped }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismOutcome {
    pub assignment: Assignment,
    /// Rounded bids by sorted machine position.
    pub rounded: RoundedBids,
    /// Exponent vector of the winning candidate, non-decreasing.
    pub chosen: Vec<u32>,
    pub candidates: usize,
}

/// Non-decreasing vectors of length `m` over `0..=top`, in lexicographic order.
fn sorted_exponent_vectors(m: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; m];
    loop {
        out.push(current.clone());
        let mut idx = m;
        loop {
            if idx == 0 {
                return out;
            }
            idx -= 1;
            if current[idx] < top {
                current[idx] += 1;
                let v = current[idx];
                for later in current.iter_mut().skip(idx + 1) {
                    *later = v;
                }
                break;
            }
        }
    }
}

/// The monotone FPTAS mechanism.
///
/// Only non-decreasing candidate exponent vectors are tried: the FPTAS sees
/// a candidate through its sorted bids only, and every result is re-matched
/// to machines in rounded-bid order, so permuting a candidate changes nothing.
pub fn mechanism(instance: &Instance, epsilon: &Rational) -> Result<MechanismOutcome> {
    inverse_epsilon(epsilon)?;
    let n = instance.n();
    let m = instance.m();
    let ell = compute_ell(instance.jobs(), epsilon);
    let rounded = round_bids(instance.bids(), epsilon, ell);
    let d = rounded.values(epsilon);

    // machine positions ordered by (rounded bid, id)
    let mut d_order: Vec<usize> = (0..m).collect();
    d_order.sort_by_key(|&pos| (rounded.exponents[pos], instance.machine_ids()[pos]));

    let base = Rational::one() + epsilon;
    let candidates = sorted_exponent_vectors(m, ell + 1);
    let mut best: Option<(Rational, Vec<Rational>, Assignment, Vec<u32>)> = None;
    for exps in &candidates {
        let bids: Vec<Rational> = exps.iter().map(|&e| rational::pow(&base, e as i64)).collect();
        let trial = Instance::new(instance.jobs().to_vec(), bids, None)?;
        let out = fptas(&trial, epsilon)?;

        let mut sets = vec![Vec::new(); m];
        for (job, &machine) in out.assignment.machine_of.iter().enumerate() {
            sets[machine].push(job);
        }
        let sums: Vec<Rational> = sets
            .iter()
            .map(|s| rational::sum(s.iter().map(|&j| &instance.jobs()[j])))
            .collect();
        let mut rank: Vec<usize> = (0..m).collect();
        rank.sort_by(|&a, &b| sums[b].cmp(&sums[a]));

        let mut machine_of = vec![0; n];
        for (slot, &set) in rank.iter().enumerate() {
            for &job in &sets[set] {
                machine_of[job] = d_order[slot];
            }
        }
        let assignment = Assignment::new(machine_of);
        let works = assignment.works(instance);
        let cover = works
            .iter()
            .zip(&d)
            .map(|(w, b)| w * b)
            .min()
            .expect("at least one machine");
        let by_id = assignment.works_by_id(instance);

        let better = match &best {
            None => true,
            Some((c, w, _, _)) => cover > *c || (cover == *c && by_id > *w),
        };
        if better {
            best = Some((cover, by_id, assignment, exps.clone()));
        }
    }
    let (_, _, assignment, chosen) = best.expect("at least one candidate");
    Ok(MechanismOutcome {
        assignment,
        rounded,
        chosen,
        candidates: candidates.len(),
    })
}

/// Cover / OPT bound for the mechanism on unclamped inputs:
/// `(1 - 2 eps) / (1 + eps)^2`.
pub fn mechanism_bound(epsilon: &Rational) -> Rational {
    let one_plus = Rational::one() + epsilon;
    guarantee(epsilon) / (&one_plus * &one_plus)
}
