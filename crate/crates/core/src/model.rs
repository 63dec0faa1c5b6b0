//! Instances, assignments and cover evaluation.
//!
//! An [`Instance`] is always held in canonical order: jobs by non-increasing
//! size (stable on input order) and machines by non-decreasing bid (ties by
//! ascending external machine id). Algorithms address jobs and machines by
//! these sorted positions; the instance remembers how to map them back.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    jobs: Vec<Rational>,
    bids: Vec<Rational>,
    machine_ids: Vec<usize>,
    job_order: Vec<usize>,
}

impl Instance {
    /// Builds a canonical instance from raw input order.
    ///
    /// `machine_ids[i]` is the external id of the machine bidding `bids[i]`;
    /// `None` means ids `0..m`.
    pub fn new(jobs: Vec<Rational>, bids: Vec<Rational>, machine_ids: Option<Vec<usize>>) -> Result<Self> {
        sort_canonical(jobs, bids, machine_ids)
    }

    /// Identical machines with bid 1.
    pub fn identical(jobs: Vec<Rational>, m: usize) -> Result<Self> {
        Self::new(jobs, vec![Rational::one(); m], None)
    }

    pub fn jobs(&self) -> &[Rational] {
        &self.jobs
    }

    pub fn bids(&self) -> &[Rational] {
        &self.bids
    }

    /// External id of the machine at each sorted position.
    pub fn machine_ids(&self) -> &[usize] {
        &self.machine_ids
    }

    /// Original input index of the job at each sorted position.
    pub fn job_order(&self) -> &[usize] {
        &self.job_order
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn m(&self) -> usize {
        self.bids.len()
    }

    pub fn total_size(&self) -> Rational {
        rational::sum(&self.jobs)
    }

    /// Sorted position of the machine with external id `id`.
    pub fn position_of(&self, id: usize) -> Option<usize> {
        self.machine_ids.iter().position(|&x| x == id)
    }

    pub fn bid_of(&self, id: usize) -> Option<&Rational> {
        self.position_of(id).map(|p| &self.bids[p])
    }

    /// Jobs in original input order.
    pub fn raw_jobs(&self) -> Vec<Rational> {
        let mut raw = vec![Rational::zero(); self.n()];
        for (pos, &orig) in self.job_order.iter().enumerate() {
            raw[orig] = self.jobs[pos].clone();
        }
        raw
    }

    /// Bids indexed by external machine id.
    pub fn bids_by_id(&self) -> Vec<Rational> {
        let mut raw = vec![Rational::zero(); self.m()];
        for (pos, &id) in self.machine_ids.iter().enumerate() {
            raw[id] = self.bids[pos].clone();
        }
        raw
    }

    /// Same jobs, one machine's bid replaced, re-canonicalized.
    pub fn with_bid(&self, id: usize, bid: Rational) -> Result<Self> {
        let mut bids = self.bids_by_id();
        let slot = bids
            .get_mut(id)
            .ok_or_else(|| Error::InvalidParams(format!("no machine with id {id}")))?;
        *slot = bid;
        Self::new(self.raw_jobs(), bids, None)
    }

    /// Same jobs (and job order), all bids replaced; `bids` is indexed by machine id.
    pub fn with_bids_by_id(&self, bids: Vec<Rational>) -> Result<Self> {
        if bids.len() != self.m() {
            return Err(Error::InvalidParams("bid vector length differs from machine count".into()));
        }
        Self::new(self.raw_jobs(), bids, None)
    }

    pub fn to_document(&self) -> InstanceDocument {
        InstanceDocument {
            jobs: self.raw_jobs(),
            bids: self.bids_by_id(),
            machine_ids: None,
        }
    }
}

/// Canonical sort: stable non-increasing jobs, non-decreasing bids with id tie-break.
pub fn sort_canonical(jobs: Vec<Rational>, bids: Vec<Rational>, machine_ids: Option<Vec<usize>>) -> Result<Instance> {
    if jobs.is_empty() {
        return Err(Error::InvalidInstance("job list is empty".into()));
    }
    if bids.is_empty() {
        return Err(Error::InvalidInstance("machine list is empty".into()));
    }
    if let Some(bad) = jobs.iter().find(|p| !p.is_positive()) {
        return Err(Error::InvalidInstance(format!("non-positive job size {bad}")));
    }
    if let Some(bad) = bids.iter().find(|b| !b.is_positive()) {
        return Err(Error::InvalidInstance(format!("non-positive bid {bad}")));
    }
    let ids = machine_ids.unwrap_or_else(|| (0..bids.len()).collect());
    if ids.len() != bids.len() {
        return Err(Error::InvalidInstance("machine_ids and bids differ in length".into()));
    }
    let distinct: BTreeSet<usize> = ids.iter().copied().collect();
    if distinct.len() != ids.len() || ids.iter().any(|&id| id >= ids.len()) {
        return Err(Error::InvalidInstance("machine_ids must be a permutation of 0..m".into()));
    }

    let mut job_order: Vec<usize> = (0..jobs.len()).collect();
    job_order.sort_by(|&a, &b| jobs[b].cmp(&jobs[a]));
    let mut machines: Vec<usize> = (0..bids.len()).collect();
    machines.sort_by(|&a, &b| bids[a].cmp(&bids[b]).then(ids[a].cmp(&ids[b])));

    Ok(Instance {
        jobs: job_order.iter().map(|&j| jobs[j].clone()).collect(),
        bids: machines.iter().map(|&i| bids[i].clone()).collect(),
        machine_ids: machines.iter().map(|&i| ids[i]).collect(),
        job_order,
    })
}

/// Jobs scaled to total size one; order and bids unchanged.
pub fn normalize_total(instance: &Instance) -> Instance {
    let total = instance.total_size();
    Instance {
        jobs: instance.jobs.iter().map(|p| p / &total).collect(),
        ..instance.clone()
    }
}

/// Job → machine mapping, both by sorted position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub machine_of: Vec<usize>,
}

impl Assignment {
    pub fn new(machine_of: Vec<usize>) -> Self {
        Self { machine_of }
    }

    pub fn all_on(machine: usize, n: usize) -> Self {
        Self { machine_of: vec![machine; n] }
    }

    /// Builds an assignment from job sets given per machine position.
    pub fn from_sets(n: usize, sets: &[Vec<usize>]) -> Self {
        let mut machine_of = vec![usize::MAX; n];
        for (machine, set) in sets.iter().enumerate() {
            for &job in set {
                machine_of[job] = machine;
            }
        }
        debug_assert!(machine_of.iter().all(|&m| m != usize::MAX));
        Self { machine_of }
    }

    /// Sorted allocation: job sets ordered by non-increasing sum (stable)
    /// go to machine positions `0, 1, ...`, i.e. the largest set to the
    /// lowest bid. `sets.len()` must equal the machine count.
    pub fn sorted_allocation(n: usize, sets: &[Vec<usize>], sums: &[Rational]) -> Self {
        let mut order: Vec<usize> = (0..sets.len()).collect();
        order.sort_by(|&a, &b| sums[b].cmp(&sums[a]));
        let ordered: Vec<Vec<usize>> = order.into_iter().map(|k| sets[k].clone()).collect();
        Self::from_sets(n, &ordered)
    }

    fn check(&self, instance: &Instance) -> Result<()> {
        let m = instance.m();
        if self.machine_of.len() != instance.n() || self.machine_of.iter().any(|&i| i >= m) {
            return Err(Error::DimensionMismatch {
                got: self.machine_of.len(),
                got_machines: self.machine_of.iter().max().map_or(0, |&i| i + 1),
                jobs: instance.n(),
                machines: m,
            });
        }
        Ok(())
    }

    /// Work per machine position.
    pub fn works(&self, instance: &Instance) -> Vec<Rational> {
        let mut work = vec![Rational::zero(); instance.m()];
        for (job, &machine) in self.machine_of.iter().enumerate() {
            work[machine] += &instance.jobs[job];
        }
        work
    }

    /// Work indexed by external machine id.
    pub fn works_by_id(&self, instance: &Instance) -> Vec<Rational> {
        let by_pos = self.works(instance);
        let mut out = vec![Rational::zero(); instance.m()];
        for (pos, w) in by_pos.into_iter().enumerate() {
            out[instance.machine_ids[pos]] = w;
        }
        out
    }

    /// Machine id for every job in original input order.
    pub fn to_external(&self, instance: &Instance) -> Vec<usize> {
        let mut out = vec![0; instance.n()];
        for (pos, &machine) in self.machine_of.iter().enumerate() {
            out[instance.job_order[pos]] = instance.machine_ids[machine];
        }
        out
    }

    /// Inverse of [`Assignment::to_external`].
    pub fn from_external(instance: &Instance, ids: &[usize]) -> Result<Self> {
        if ids.len() != instance.n() {
            return Err(Error::DimensionMismatch {
                got: ids.len(),
                got_machines: instance.m(),
                jobs: instance.n(),
                machines: instance.m(),
            });
        }
        let machine_of = instance
            .job_order
            .iter()
            .map(|&orig| {
                instance
                    .position_of(ids[orig])
                    .ok_or_else(|| Error::InvalidParams(format!("unknown machine id {}", ids[orig])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { machine_of })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    /// Per sorted machine position.
    pub work: Vec<Rational>,
    pub load: Vec<Rational>,
    pub cover: Rational,
    pub bottleneck: Vec<usize>,
}

pub fn evaluate(assignment: &Assignment, instance: &Instance) -> Result<CoverReport> {
    assignment.check(instance)?;
    let work = assignment.works(instance);
    let load: Vec<Rational> = work.iter().zip(&instance.bids).map(|(w, b)| w * b).collect();
    let cover = rational::min(&load).expect("at least one machine");
    let bottleneck = load
        .iter()
        .enumerate()
        .filter(|(_, l)| **l == cover)
        .map(|(i, _)| i)
        .collect();
    Ok(CoverReport {
        work,
        load,
        cover,
        bottleneck,
    })
}

/// Cover of an assignment that is known to fit the instance.
pub fn cover_of(assignment: &Assignment, instance: &Instance) -> Rational {
    evaluate(assignment, instance).expect("assignment fits instance").cover
}

/// On-disk instance format: `{"jobs":[...],"bids":[...],"machine_ids":[...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct InstanceDocument {
    #[serde(with = "rational::serde_str::vec")]
    pub jobs: Vec<Rational>,
    #[serde(with = "rational::serde_str::vec")]
    pub bids: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine_ids: Option<Vec<usize>>,
}

impl InstanceDocument {
    pub fn into_instance(self) -> Result<Instance> {
        Instance::new(self.jobs, self.bids, self.machine_ids)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance document: {e}")))?;
    doc.into_instance()
}
