//! Next Cover and Sorted Next Cover (SNC).
//!
//! Next Cover fills identical machines one after another with consecutive
//! jobs from the sorted list until each reaches the guess. SNC searches for a
//! good guess geometrically, using LPT for the initial bracket, then hands the
//! resulting subsets out largest-first to machines in bid order. The subsets
//! depend on the job sizes alone, which is what makes SNC monotone.

use std::ops::Range;

use num_traits::Zero;
use serde::Serialize;

use crate::baselines::lpt_identical;
use crate::error::{Error, Result};
use crate::model::{normalize_total, Assignment, Instance};
use crate::rational::{self, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcOutcome {
    pub success: bool,
    /// One consecutive job range per machine. On success leftovers are part of
    /// the last range; on failure the machines after the one that ran dry
    /// hold empty ranges.
    pub intervals: Vec<Range<usize>>,
    pub guess: Rational,
}

impl NcOutcome {
    pub fn sums(&self, jobs: &[Rational]) -> Vec<Rational> {
        self.intervals.iter().map(|r| rational::sum(&jobs[r.clone()])).collect()
    }

    pub fn sets(&self) -> Vec<Vec<usize>> {
        self.intervals.iter().map(|r| r.clone().collect()).collect()
    }
}

/// Next Cover on `m` identical unit-speed machines. `jobs` sorted non-increasing.
pub fn next_cover(jobs: &[Rational], m: usize, guess: &Rational) -> NcOutcome {
    let n = jobs.len();
    let mut intervals = Vec::with_capacity(m);
    let mut start = 0;
    for _ in 0..m {
        let mut end = start;
        let mut sum = Rational::zero();
        while sum < *guess && end < n {
            sum += &jobs[end];
            end += 1;
        }
        intervals.push(start..end);
        start = end;
        if sum < *guess {
            intervals.resize(m, n..n);
            return NcOutcome {
                success: false,
                intervals,
                guess: guess.clone(),
            };
        }
    }
    if let Some(last) = intervals.last_mut() {
        last.end = n;
    }
    NcOutcome {
        success: true,
        intervals,
        guess: guess.clone(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SncStep {
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    #[serde(with = "rational::serde_str")]
    pub guess: Rational,
    pub success: bool,
}

/// Binary-search record of one SNC run, in normalized job units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SncTrace {
    /// LPT value on identical machines.
    #[serde(with = "rational::serde_str")]
    pub lpt_value: Rational,
    pub iterations: Vec<SncStep>,
    #[serde(with = "rational::serde_str")]
    pub final_lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub final_upper: Rational,
}

pub fn check_snc_epsilon(epsilon: &Rational) -> Result<()> {
    if *epsilon <= Rational::zero() || *epsilon >= ratio(1, 2) {
        return Err(Error::InvalidEpsilon {
            epsilon: rational::format(epsilon),
            reason: "SNC needs 0 < epsilon < 1/2".into(),
        });
    }
    Ok(())
}

/// Deterministic guess strictly inside `(lower, upper)` near `sqrt(lower * upper)`.
fn geometric_guess(lower: &Rational, upper: &Rational) -> Rational {
    let g = rational::sqrt_approx(&(lower * upper));
    if g > *lower && g < *upper {
        g
    } else {
        (lower + upper) / Rational::from_integer(2.into())
    }
}

/// Sorted Next Cover.
pub fn snc(instance: &Instance, epsilon: &Rational) -> Result<(Assignment, SncTrace)> {
    check_snc_epsilon(epsilon)?;
    let n = instance.n();
    let m = instance.m();
    if n < m {
        let trace = SncTrace {
            lpt_value: Rational::zero(),
            iterations: Vec::new(),
            final_lower: Rational::zero(),
            final_upper: Rational::zero(),
        };
        return Ok((Assignment::all_on(0, n), trace));
    }

    let normalized = normalize_total(instance);
    let jobs = normalized.jobs();
    let (_, a) = lpt_identical(jobs, m)?;
    let mut lower = &a / Rational::from_integer(2.into());
    let mut upper = &a * ratio(4, 3);
    let half_eps = epsilon / Rational::from_integer(2.into());
    let mut iterations = Vec::new();
    loop {
        let guess = geometric_guess(&lower, &upper);
        let success = next_cover(jobs, m, &guess).success;
        iterations.push(SncStep {
            lower: lower.clone(),
            upper: upper.clone(),
            guess: guess.clone(),
            success,
        });
        if success {
            lower = guess;
        } else {
            upper = guess;
        }
        if &upper - &lower <= &half_eps * &lower {
            break;
        }
    }

    let outcome = next_cover(jobs, m, &lower);
    debug_assert!(outcome.success, "the lower bracket always succeeds");
    let assignment = Assignment::sorted_allocation(n, &outcome.sets(), &outcome.sums(jobs));
    let trace = SncTrace {
        lpt_value: a,
        iterations,
        final_lower: lower,
        final_upper: upper,
    };
    Ok((assignment, trace))
}

/// Number of bracket-halving steps SNC may take for this epsilon, with `c = 4`.
pub fn iteration_allowance(epsilon: &Rational) -> f64 {
    4.0 / (1.0 + rational::approx(epsilon) / 2.0).ln()
}

/// Largest guess at which Next Cover still succeeds: the minimum set sum of
/// the success run is itself a success guess, and anything above it fails
/// on the same prefix structure. Found by trying every distinct candidate
/// value (sums of consecutive job runs).
pub fn max_success_guess(jobs: &[Rational], m: usize) -> Rational {
    let n = jobs.len();
    if n < m {
        return Rational::zero();
    }
    let mut prefix = vec![Rational::zero(); n + 1];
    for j in 0..n {
        prefix[j + 1] = &prefix[j] + &jobs[j];
    }
    let mut candidates: Vec<Rational> = Vec::new();
    for s in 0..n {
        for e in s + 1..=n {
            candidates.push(&prefix[e] - &prefix[s]);
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut best = Rational::zero();
    for c in candidates {
        if next_cover(jobs, m, &c).success {
            best = c;
        }
    }
    best
}
