//! Job reduction followed by exhaustive lex-min optimal search.
//!
//! The `delta` largest jobs are kept as they are. The remaining small jobs
//! are merged into mega-jobs, either greedily (when they are few relative to
//! the largest small job) or by List Scheduling onto `delta` bins. The
//! reduction looks at job sizes only, and the reduced instance is solved by
//! the bid-independent lex-min optimum, so the whole pipeline is monotone.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::baselines::list_schedule;
use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};
use crate::oracle::lex_min_optimal;
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionCase {
    Identity,
    Greedy,
    ListScheduling,
}

impl fmt::Display for ReductionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionCase::Identity => "identity",
            ReductionCase::Greedy => "greedy",
            ReductionCase::ListScheduling => "list-scheduling",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MegaJob {
    /// Sorted job positions, ascending.
    pub members: Vec<usize>,
    pub size: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedJobs {
    /// Positions of the jobs kept intact (all jobs in the identity case).
    pub kept: Vec<usize>,
    /// Ordered by smallest member.
    pub mega: Vec<MegaJob>,
    pub delta: usize,
    pub case: ReductionCase,
    /// Total and maximum size of the small jobs; zero in the identity case.
    pub small_total: Rational,
    pub small_max: Rational,
}

impl ReducedJobs {
    pub fn len(&self) -> usize {
        self.kept.len() + self.mega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn check_ptas_epsilon(epsilon: &Rational) -> Result<()> {
    if *epsilon <= Rational::zero() || *epsilon >= Rational::one() {
        return Err(Error::InvalidEpsilon {
            epsilon: rational::format(epsilon),
            reason: "the PTAS needs 0 < epsilon < 1".into(),
        });
    }
    Ok(())
}

/// `ceil(2 m^2 / eps^2) + m`.
pub fn delta(m: usize, epsilon: &Rational) -> usize {
    let m_r = Rational::from_integer((m as i64).into());
    let bound = Rational::from_integer(2.into()) * &m_r * &m_r / (epsilon * epsilon);
    let ceil = bound.ceil().to_integer();
    let ceil: usize = ceil.try_into().expect("delta fits in usize");
    ceil + m
}

/// Reduces sorted `jobs` for `m` machines.
pub fn reduce_jobs(jobs: &[Rational], m: usize, epsilon: &Rational) -> Result<ReducedJobs> {
    check_ptas_epsilon(epsilon)?;
    let n = jobs.len();
    let delta = delta(m, epsilon);
    if n <= delta {
        return Ok(ReducedJobs {
            kept: (0..n).collect(),
            mega: Vec::new(),
            delta,
            case: ReductionCase::Identity,
            small_total: Rational::zero(),
            small_max: Rational::zero(),
        });
    }
    let kept: Vec<usize> = (0..delta).collect();
    let small = &jobs[delta..];
    let total = rational::sum(small);
    let max = small[0].clone();
    let delta_r = Rational::from_integer((delta as i64).into());

    let (case, mut mega) = if total <= Rational::from_integer(3.into()) * &max * &delta_r {
        (ReductionCase::Greedy, greedy_merge(small, &max, delta))
    } else {
        let partition = list_schedule(small, delta);
        let mega = partition
            .sets
            .into_iter()
            .zip(partition.sums)
            .map(|(set, size)| MegaJob {
                members: set.into_iter().map(|j| j + delta).collect(),
                size,
            })
            .collect();
        (ReductionCase::ListScheduling, mega)
    };
    for job in &mut mega {
        job.members.sort_unstable();
    }
    mega.sort_by_key(|job| job.members[0]);
    Ok(ReducedJobs {
        kept,
        mega,
        delta,
        case,
        small_total: total,
        small_max: max,
    })
}

/// Consecutive runs reaching `threshold`; a short tail joins the last run.
fn greedy_merge(small: &[Rational], threshold: &Rational, offset: usize) -> Vec<MegaJob> {
    let mut out: Vec<MegaJob> = Vec::new();
    let mut members = Vec::new();
    let mut size = Rational::zero();
    for (j, p) in small.iter().enumerate() {
        members.push(j + offset);
        size += p;
        if size >= *threshold {
            out.push(MegaJob {
                members: std::mem::take(&mut members),
                size: std::mem::replace(&mut size, Rational::zero()),
            });
        }
    }
    if !members.is_empty() {
        let last = out.last_mut().expect("the first small job alone reaches the threshold");
        last.members.extend(members);
        last.size += size;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PtasOutcome {
    pub assignment: Assignment,
    pub reduction: ReducedJobs,
}

/// Reduce, solve the reduced instance exactly, expand.
pub fn ptas(instance: &Instance, epsilon: &Rational, budget: u64) -> Result<PtasOutcome> {
    let reduction = reduce_jobs(instance.jobs(), instance.m(), epsilon)?;
    let jobs = instance.jobs();

    // atomic items in input order: kept jobs first, then mega-jobs by smallest member
    let mut items: Vec<Vec<usize>> = reduction.kept.iter().map(|&j| vec![j]).collect();
    items.extend(reduction.mega.iter().map(|job| job.members.clone()));
    let mut sizes: Vec<Rational> = reduction.kept.iter().map(|&j| jobs[j].clone()).collect();
    sizes.extend(reduction.mega.iter().map(|job| job.size.clone()));

    let reduced = Instance::new(sizes, instance.bids_by_id(), None)?;
    debug_assert_eq!(reduced.machine_ids(), instance.machine_ids());
    let solved = lex_min_optimal(&reduced, budget)?;

    let mut machine_of = vec![0; instance.n()];
    for (pos, &machine) in solved.machine_of.iter().enumerate() {
        for &job in &items[reduced.job_order()[pos]] {
            machine_of[job] = machine;
        }
    }
    Ok(PtasOutcome {
        assignment: Assignment::new(machine_of),
        reduction,
    })
}

/// Lower bound `(1 - 3 eps)` on cover / OPT.
pub fn guarantee(epsilon: &Rational) -> Rational {
    Rational::one() - Rational::from_integer(3.into()) * epsilon
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cover_of;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn nine_tenths() -> Rational {
        ratio(9, 10)
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(2, &nine_tenths()), 12);
        assert_eq!(delta(1, &ratio(1, 2)), 9);
        assert_eq!(delta(3, &nine_tenths()), 26);
    }

    #[test]
    fn identity_case() {
        let jobs = vec![int(1); 10];
        let r = reduce_jobs(&jobs, 2, &nine_tenths()).unwrap();
        assert_eq!(r.case, ReductionCase::Identity);
        assert_eq!(r.kept.len(), 10);
        assert!(r.mega.is_empty());
    }

    #[test]
    fn greedy_case_keeps_unit_singletons() {
        let mut jobs = vec![int(10); 12];
        jobs.extend(vec![int(1); 8]);
        let r = reduce_jobs(&jobs, 2, &nine_tenths()).unwrap();
        assert_eq!(r.case, ReductionCase::Greedy);
        assert_eq!(r.mega.len(), 8);
        assert!(r.mega.iter().all(|job| job.size == int(1) && job.members.len() == 1));
    }

    #[test]
    fn list_scheduling_case() {
        let mut jobs = vec![int(10); 12];
        jobs.extend(vec![int(1); 40]);
        let r = reduce_jobs(&jobs, 2, &nine_tenths()).unwrap();
        assert_eq!(r.case, ReductionCase::ListScheduling);
        assert_eq!(r.mega.len(), 12);
        let lo = ratio(40, 12) - int(1);
        let hi = ratio(40, 12) + int(1);
        for job in &r.mega {
            assert!(job.size == int(3) || job.size == int(4));
            assert!(job.size >= lo && job.size <= hi);
        }
    }

    #[test]
    fn greedy_tail_joins_last_mega_job() {
        let mut jobs = vec![int(10); 12];
        jobs.extend([ratio(1, 2), ratio(1, 4), ratio(1, 4), ratio(1, 8)]);
        let r = reduce_jobs(&jobs, 2, &nine_tenths()).unwrap();
        let sizes: Vec<Rational> = r.mega.iter().map(|j| j.size.clone()).collect();
        assert_eq!(sizes, vec![ratio(1, 2), ratio(5, 8)]);
        assert_eq!(r.mega[1].members, vec![13, 14, 15]);
    }

    #[test]
    fn ptas_small_examples() {
        let i = Instance::identical(vec![int(3), int(2), int(2)], 2).unwrap();
        let out = ptas(&i, &nine_tenths(), 10_000).unwrap();
        assert_eq!(out.assignment.machine_of, vec![0, 1, 1]);
        assert_eq!(cover_of(&out.assignment, &i), int(3));

        let i = Instance::identical(vec![int(4)], 3).unwrap();
        let out = ptas(&i, &nine_tenths(), 10_000).unwrap();
        assert_eq!(out.assignment.machine_of, vec![0]);
        assert_eq!(cover_of(&out.assignment, &i), int(0));
    }

    #[test]
    fn ptas_expands_mega_jobs() {
        let mut jobs = vec![int(10); 12];
        jobs.extend(vec![int(1); 40]);
        let i = Instance::new(jobs, vec![int(1), int(2)], None).unwrap();
        let out = ptas(&i, &nine_tenths(), 50_000_000).unwrap();
        let works = out.assignment.works(&i);
        assert_eq!(rational::sum(&works), int(160));
        for job in &out.reduction.mega {
            let first = out.assignment.machine_of[job.members[0]];
            assert!(job.members.iter().all(|&j| out.assignment.machine_of[j] == first));
        }
    }

    #[test]
    fn rejects_bad_epsilon() {
        assert!(reduce_jobs(&[int(1)], 1, &int(1)).is_err());
        assert!(reduce_jobs(&[int(1)], 1, &int(0)).is_err());
    }

    proptest! {
        #[test]
        fn reduction_invariants(
            sizes in proptest::collection::vec(1i64..50, 1..80),
            m in 1usize..3,
        ) {
            let mut jobs: Vec<Rational> = sizes.iter().map(|&p| ratio(p, 7)).collect();
            jobs.sort_by(|a, b| b.cmp(a));
            let eps = nine_tenths();
            let r = reduce_jobs(&jobs, m, &eps).unwrap();
            let mut seen: Vec<usize> = r.kept.clone();
            for job in &r.mega {
                seen.extend(&job.members);
                prop_assert_eq!(&job.size, &rational::sum(job.members.iter().map(|&j| &jobs[j])));
            }
            seen.sort_unstable();
            prop_assert_eq!(seen, (0..jobs.len()).collect::<Vec<_>>());
            prop_assert!(r.len() <= 4 * r.delta);
        }
    }
}
