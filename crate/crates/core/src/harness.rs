//! Instance generators, monotonicity checks and ratio measurement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::round_robin;
use crate::error::{Error, Result};
use crate::fptas::{self, fptas, mechanism};
use crate::model::{cover_of, Assignment, Instance, InstanceDocument};
use crate::next_cover::snc;
use crate::oracle::{self, optimal_cover};
use crate::ptas::{self, ptas};
use crate::rational::{self, int, ratio, Rational};
use crate::two_machine::{snc2, ssnc2, ssnc_multi};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmKind {
    Snc,
    Snc2,
    Ssnc2,
    SsncMulti,
    RoundRobin,
    Ptas,
    Fptas,
    Mechanism,
    Oracle,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 9] = [
        AlgorithmKind::Snc,
        AlgorithmKind::Snc2,
        AlgorithmKind::Ssnc2,
        AlgorithmKind::SsncMulti,
        AlgorithmKind::RoundRobin,
        AlgorithmKind::Ptas,
        AlgorithmKind::Fptas,
        AlgorithmKind::Mechanism,
        AlgorithmKind::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgorithmKind::Snc => "snc",
            AlgorithmKind::Snc2 => "snc2",
            AlgorithmKind::Ssnc2 => "ssnc2",
            AlgorithmKind::SsncMulti => "ssnc-multi",
            AlgorithmKind::RoundRobin => "round-robin",
            AlgorithmKind::Ptas => "ptas",
            AlgorithmKind::Fptas => "fptas",
            AlgorithmKind::Mechanism => "mechanism",
            AlgorithmKind::Oracle => "oracle",
        }
    }

    /// Algorithms proven monotone; a violation is a bug.
    pub fn proven_monotone(self) -> bool {
        !matches!(self, AlgorithmKind::SsncMulti | AlgorithmKind::Fptas)
    }

    pub fn default_epsilon(self) -> Rational {
        match self {
            AlgorithmKind::Snc => ratio(1, 10),
            AlgorithmKind::Ptas => ratio(9, 10),
            AlgorithmKind::Fptas | AlgorithmKind::Mechanism => ratio(1, 4),
            _ => Rational::zero(),
        }
    }

    pub fn uses_epsilon(self) -> bool {
        matches!(
            self,
            AlgorithmKind::Snc | AlgorithmKind::Ptas | AlgorithmKind::Fptas | AlgorithmKind::Mechanism
        )
    }

    /// Only defined for two machines.
    pub fn two_machine_only(self) -> bool {
        matches!(self, AlgorithmKind::Snc2 | AlgorithmKind::Ssnc2)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

/// An algorithm together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solver {
    pub kind: AlgorithmKind,
    pub epsilon: Rational,
    pub budget: u64,
    /// Job-size rounding for `ssnc-multi`.
    pub rounding_base: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub assignment: Assignment,
    pub trace: Option<serde_json::Value>,
    pub achieved_j: Option<u64>,
    /// The mechanism had to clamp at least one rounded bid.
    pub clamped: bool,
}

impl Solution {
    fn plain(assignment: Assignment) -> Self {
        Self {
            assignment,
            trace: None,
            achieved_j: None,
            clamped: false,
        }
    }
}

impl Solver {
    pub fn new(kind: AlgorithmKind) -> Self {
        Self {
            kind,
            epsilon: kind.default_epsilon(),
            budget: oracle::DEFAULT_BUDGET,
            rounding_base: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: Rational) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_rounding_base(mut self, base: Option<Rational>) -> Self {
        self.rounding_base = base;
        self
    }

    pub fn solve(&self, instance: &Instance) -> Result<Solution> {
        let eps = &self.epsilon;
        Ok(match self.kind {
            AlgorithmKind::Snc => {
                let (assignment, trace) = snc(instance, eps)?;
                Solution {
                    trace: Some(serde_json::to_value(&trace).expect("trace serializes")),
                    ..Solution::plain(assignment)
                }
            }
            AlgorithmKind::Snc2 => Solution::plain(snc2(instance)?.0),
            AlgorithmKind::Ssnc2 => Solution::plain(ssnc2(instance)?.0),
            AlgorithmKind::SsncMulti => Solution::plain(ssnc_multi(instance, self.rounding_base.as_ref())?),
            AlgorithmKind::RoundRobin => Solution::plain(round_robin(instance)),
            AlgorithmKind::Oracle => Solution::plain(optimal_cover(instance, self.budget)?.assignment),
            AlgorithmKind::Ptas => {
                let out = ptas(instance, eps, self.budget)?;
                let r = &out.reduction;
                let trace = serde_json::json!({
                    "case": r.case,
                    "delta": r.delta,
                    "reduced_jobs": r.len(),
                    "mega_jobs": r.mega.len(),
                });
                Solution {
                    trace: Some(trace),
                    ..Solution::plain(out.assignment)
                }
            }
            AlgorithmKind::Fptas => {
                let out = fptas(instance, eps)?;
                let trace = serde_json::json!({
                    "search": out.search,
                    "minimal_k": out.minimal_k,
                });
                Solution {
                    trace: Some(trace),
                    achieved_j: out.achieved_j,
                    ..Solution::plain(out.assignment)
                }
            }
            AlgorithmKind::Mechanism => {
                let out = mechanism(instance, eps)?;
                let trace = serde_json::json!({
                    "ell": out.rounded.ell,
                    "rounded_exponents": out.rounded.exponents,
                    "chosen_exponents": out.chosen,
                    "candidates": out.candidates,
                });
                Solution {
                    trace: Some(trace),
                    clamped: out.rounded.clamped,
                    ..Solution::plain(out.assignment)
                }
            }
        })
    }

    /// Proven upper bound on OPT / cover for this instance, if any.
    pub fn ratio_bound(&self, instance: &Instance) -> Option<Rational> {
        let m = instance.m();
        let bids = instance.bids();
        let spread = &bids[m - 1] / &bids[0];
        let eps = &self.epsilon;
        let one = Rational::one();
        let positive = |r: Rational| if r > Rational::zero() { Some(one.clone() / r) } else { None };
        match self.kind {
            AlgorithmKind::Snc => {
                let by_speed = (int(2) + eps) * &spread;
                Some(by_speed.min(int(m as i64)))
            }
            AlgorithmKind::Snc2 => {
                let s = spread;
                let a = int(3) / (&s + &one);
                let b = int(2) * &s / (&s + &one);
                Some(a.max(b))
            }
            AlgorithmKind::Ssnc2 => {
                let s = spread;
                let a = &one + &s / (&s + &one);
                let b = &one + one.clone() / &s;
                Some(a.min(b))
            }
            AlgorithmKind::RoundRobin => Some(int(m as i64)),
            AlgorithmKind::Oracle => Some(one),
            AlgorithmKind::Ptas => positive(ptas::guarantee(eps)),
            AlgorithmKind::Fptas => positive(fptas::guarantee(eps)),
            AlgorithmKind::Mechanism => positive(fptas::mechanism_bound(eps)),
            AlgorithmKind::SsncMulti => None,
        }
    }
}

/// One single-bid raise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotonicityVerdict {
    pub algorithm: String,
    pub instance: InstanceDocument,
    pub machine_id: usize,
    #[serde(with = "rational::serde_str")]
    pub old_bid: Rational,
    #[serde(with = "rational::serde_str")]
    pub new_bid: Rational,
    #[serde(with = "rational::serde_str")]
    pub old_work: Rational,
    #[serde(with = "rational::serde_str")]
    pub new_work: Rational,
    pub violated: bool,
}

/// Runs `solver` before and after multiplying machine `machine_id`'s bid by
/// `factor` and compares the work that machine receives.
pub fn check_monotone_once(
    solver: &Solver,
    instance: &Instance,
    machine_id: usize,
    factor: &Rational,
) -> Result<MonotonicityVerdict> {
    if *factor <= Rational::one() {
        return Err(Error::InvalidParams(format!(
            "bid factor must exceed 1, got {}",
            rational::format(factor)
        )));
    }
    let old_bid = instance
        .bid_of(machine_id)
        .cloned()
        .ok_or_else(|| Error::InvalidParams(format!("unknown machine id {machine_id}")))?;
    let new_bid = &old_bid * factor;
    let raised = instance.with_bid(machine_id, new_bid.clone())?;
    let before = solver.solve(instance)?;
    let after = solver.solve(&raised)?;
    let old_work = before.assignment.works_by_id(instance)[machine_id].clone();
    let new_work = after.assignment.works_by_id(&raised)[machine_id].clone();
    Ok(MonotonicityVerdict {
        algorithm: solver.kind.name().to_string(),
        instance: instance.to_document(),
        machine_id,
        old_bid,
        new_bid,
        violated: new_work > old_work,
        old_work,
        new_work,
    })
}

/// Multiplicative bid raises used by the suites.
pub fn raise_factors() -> [Rational; 4] {
    [ratio(9, 8), ratio(3, 2), int(2), int(5)]
}

/// `key=value` pairs separated by commas.
pub type GenParams = BTreeMap<String, String>;

pub fn parse_gen_params(text: &str) -> Result<GenParams> {
    let mut out = GenParams::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected key=value, got {part:?}")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn param_rational(params: &GenParams, key: &str, default: Option<Rational>) -> Result<Rational> {
    match params.get(key) {
        Some(v) => rational::parse(v),
        None => default.ok_or_else(|| Error::InvalidParams(format!("missing parameter {key}"))),
    }
}

fn param_usize(params: &GenParams, key: &str, default: usize) -> Result<usize> {
    match params.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Parse(format!("parameter {key} must be a non-negative integer, got {v:?}"))),
        None => Ok(default),
    }
}

/// Inclusive range given as `"3"` or `"2..5"`.
fn param_range(params: &GenParams, key: &str, default: (usize, usize)) -> Result<(usize, usize)> {
    let Some(v) = params.get(key) else {
        return Ok(default);
    };
    let bad = || Error::Parse(format!("parameter {key} must be N or A..B, got {v:?}"));
    let (lo, hi) = match v.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().trim_start_matches('=').parse().map_err(|_| bad())?,
        ),
        None => {
            let x: usize = v.trim().parse().map_err(|_| bad())?;
            (x, x)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub instance: Instance,
    pub family: String,
    pub params: GenParams,
    /// Certified lower bound on OPT, achieved by `witness`.
    pub planted_cover: Option<Rational>,
    pub witness: Option<Assignment>,
    pub predicted_ratio: Option<Rational>,
    /// The designated bid raise `(machine id, factor)` for counterexample families.
    pub deviation: Option<(usize, Rational)>,
    /// Job-size rounding base the family is meant to be run with.
    pub rounding_base: Option<Rational>,
}

impl GeneratedInstance {
    fn plain(instance: Instance, family: &str, params: &GenParams) -> Self {
        Self {
            instance,
            family: family.to_string(),
            params: params.clone(),
            planted_cover: None,
            witness: None,
            predicted_ratio: None,
            deviation: None,
            rounding_base: None,
        }
    }

    fn with_witness(mut self, witness: Assignment) -> Self {
        self.planted_cover = Some(cover_of(&witness, &self.instance));
        self.witness = Some(witness);
        self
    }

    /// Document with generator metadata alongside the instance fields.
    pub fn to_json(&self) -> serde_json::Value {
        let mut doc = serde_json::to_value(self.instance.to_document()).expect("document serializes");
        let fmt_opt = |r: &Option<Rational>| r.as_ref().map(rational::format);
        doc["meta"] = serde_json::json!({
            "family": self.family,
            "params": self.params,
            "planted_cover": fmt_opt(&self.planted_cover),
            "witness": self.witness.as_ref().map(|w| w.to_external(&self.instance)),
            "predicted_ratio": fmt_opt(&self.predicted_ratio),
            "deviation": self.deviation.as_ref().map(|(id, f)| serde_json::json!({
                "machine_id": id,
                "factor": rational::format(f),
            })),
            "rounding_base": fmt_opt(&self.rounding_base),
        });
        doc
    }
}

pub const FAMILIES: [&str; 7] = [
    "rr_tight",
    "snc_lb1",
    "snc_lb2",
    "ssnc_lb_small",
    "ssnc_lb_large",
    "nonmono3",
    "round_nonmono",
];

/// Stand-in for the golden-ratio threshold between the two SSNC lower-bound
/// constructions.
pub fn phi_threshold() -> Rational {
    ratio(8, 5)
}

fn invalid(family: &str, why: &str) -> Error {
    Error::InvalidParams(format!("{family}: {why}"))
}

/// Two machines with speeds `s` and 1.
fn two_speeds(jobs: Vec<Rational>, s: &Rational) -> Result<Instance> {
    Instance::new(jobs, vec![s.recip(), Rational::one()], None)
}

/// Places the jobs given by original index on machine ids, rest on `rest_id`.
fn witness_from(instance: &Instance, fixed: &[(usize, usize)], rest_id: usize) -> Result<Assignment> {
    let mut ids = vec![rest_id; instance.n()];
    for &(job, id) in fixed {
        ids[job] = id;
    }
    Assignment::from_external(instance, &ids)
}

pub fn gen_adversarial(family: &str, params: &GenParams) -> Result<GeneratedInstance> {
    let one = Rational::one();
    match family {
        "rr_tight" => {
            let m = param_usize(params, "m", 2)?;
            if m < 2 {
                return Err(invalid(family, "needs m >= 2"));
            }
            let small = ratio(1, m as i64);
            let mut jobs = vec![one.clone(); m - 1];
            jobs.extend(std::iter::repeat(small).take(m));
            let instance = Instance::identical(jobs, m)?;
            let fixed: Vec<(usize, usize)> = (0..m - 1).map(|j| (j, j)).collect();
            let witness = witness_from(&instance, &fixed, m - 1)?;
            let mut g = GeneratedInstance::plain(instance, family, params).with_witness(witness);
            g.predicted_ratio = Some(int(m as i64));
            Ok(g)
        }
        "snc_lb1" => {
            let s = param_rational(params, "s", Some(int(3)))?;
            if s <= one {
                return Err(invalid(family, "needs s > 1"));
            }
            let jobs = vec![
                ratio(1, 2),
                (&s - &one) / (int(2) * (&s + &one)),
                one.clone() / (&s + &one),
            ];
            let instance = two_speeds(jobs, &s)?;
            // the job 1/(s+1) alone on the slow machine, the rest on the fast one
            let witness = witness_from(&instance, &[(2, 1)], 0)?;
            let mut g = GeneratedInstance::plain(instance, family, params).with_witness(witness);
            g.predicted_ratio = Some(int(2) * &s / (&s + &one));
            Ok(g)
        }
        "snc_lb2" => {
            let s = param_rational(params, "s", Some(one.clone()))?;
            if s < one || s > ratio(3, 2) {
                return Err(invalid(family, "needs 1 <= s <= 3/2"));
            }
            let d = int(3) * &s + int(3);
            let jobs = vec![
                ratio(1, 3),
                ratio(1, 3),
                (int(2) * &s - &one) / &d,
                (int(2) - &s) / &d,
            ];
            let instance = two_speeds(jobs, &s)?;
            // one third and (2s-1)/(3s+3) on the fast machine
            let witness = witness_from(&instance, &[(0, 0), (2, 0)], 1)?;
            let mut g = GeneratedInstance::plain(instance, family, params).with_witness(witness);
            g.predicted_ratio = Some(int(3) / (&s + &one));
            Ok(g)
        }
        "ssnc_lb_small" => {
            let s = param_rational(params, "s", Some(one.clone()))?;
            let eps = param_rational(params, "eps", Some(ratio(1, 30)))?;
            let head = &s / (int(2) * &s + &one);
            if s < one || s > phi_threshold() {
                return Err(invalid(family, "needs 1 <= s <= 8/5"));
            }
            if eps <= Rational::zero() || eps >= head {
                return Err(invalid(family, "needs 0 < eps < s/(2s+1)"));
            }
            let tail = one.clone() / (int(2) * &s + &one) + &eps;
            let default_count = (&tail / &eps).ceil().to_integer();
            let count = match params.get("smalls") {
                Some(_) => param_usize(params, "smalls", 0)?,
                None => default_count.try_into().map_err(|_| invalid(family, "too many small jobs"))?,
            };
            if count == 0 {
                return Err(invalid(family, "needs at least one small job"));
            }
            let small = &tail / int(count as i64);
            let mut jobs = vec![head.clone(), &head - &eps];
            jobs.extend(std::iter::repeat(small.clone()).take(count));
            let instance = two_speeds(jobs, &s)?;
            // fill the fast machine up to s/(s+1) starting from the largest job
            let goal = &s / (&s + &one);
            let mut fast = vec![(0usize, 0usize)];
            let mut work = head.clone();
            let mut j = 2;
            while work < goal && j < instance.n() {
                fast.push((j, 0));
                work += &small;
                j += 1;
            }
            let witness = witness_from(&instance, &fast, 1)?;
            let mut g = GeneratedInstance::plain(instance, family, params).with_witness(witness);
            g.predicted_ratio = Some((one.clone() / (&s + &one)) / &tail);
            Ok(g)
        }
        "ssnc_lb_large" => {
            let s = param_rational(params, "s", Some(int(2)))?;
            let eps = param_rational(params, "eps", Some(ratio(1, 100)))?;
            if s <= phi_threshold() {
                return Err(invalid(family, "needs s > 8/5"));
            }
            let sp1 = &s + &one;
            let first = &s * &s / (&sp1 * &sp1) - &eps;
            let second = one.clone() / &sp1 + &eps;
            let third = &s / (&sp1 * &sp1);
            if eps <= Rational::zero() || first <= second {
                return Err(invalid(family, "needs a small positive eps keeping the order"));
            }
            let instance = two_speeds(vec![first, second, third.clone()], &s)?;
            let witness = witness_from(&instance, &[(0, 0), (2, 0)], 1)?;
            let mut g = GeneratedInstance::plain(instance, family, params).with_witness(witness);
            let opt = one.clone() / &sp1 - &eps / &s;
            g.predicted_ratio = Some(opt / third);
            Ok(g)
        }
        "nonmono3" => {
            let a = param_rational(params, "a", Some(ratio(3, 2)))?;
            if &a * &a <= int(2) {
                return Err(invalid(family, "needs a > sqrt(2)"));
            }
            let a2 = &a * &a;
            let a3 = &a2 * &a;
            let jobs = vec![a3.clone(), &a3 - &one, &a2 - &one, &a2 - &one, one.clone()];
            let instance = Instance::new(jobs, vec![a2.recip(), a.recip(), one.clone()], None)?;
            let mut g = GeneratedInstance::plain(instance, family, params);
            // the fastest machine slows from a^2 to a
            g.deviation = Some((0, a));
            Ok(g)
        }
        "round_nonmono" => {
            let b = param_rational(params, "b", Some(ratio(13, 8)))?;
            let a = param_rational(params, "a", Some(int(2)))?;
            let eps = param_rational(params, "eps", Some(ratio(1, 2)))?;
            if b <= phi_threshold() {
                return Err(invalid(family, "needs b > 8/5"));
            }
            if a <= b || a >= &b + &one {
                return Err(invalid(family, "needs b < a < b + 1"));
            }
            if eps <= Rational::zero() || eps >= b.recip() {
                return Err(invalid(family, "needs 0 < eps < 1/b"));
            }
            let jobs = vec![(&one + &eps) * &b, b.clone(), b.clone(), one.clone()];
            let instance = Instance::new(jobs, vec![a.recip(), a.recip()], None)?;
            let mut g = GeneratedInstance::plain(instance, family, params);
            // machine id 1 slows from speed a to 1
            g.deviation = Some((1, a));
            g.rounding_base = Some(b);
            Ok(g)
        }
        _ => Err(Error::InvalidParams(format!(
            "unknown family {family:?}; expected one of {}",
            FAMILIES.join(", ")
        ))),
    }
}

/// Parameters of the random generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub machines: (usize, usize),
    pub jobs: (usize, usize),
    /// Job sizes are `k / d` with `k` in `1..=size_max`, `d` in `1..=size_den`.
    pub size_max: u32,
    pub size_den: u32,
    pub bid_max: u32,
    pub bid_den: u32,
    /// Identical machines (all bids 1).
    pub identical: bool,
    /// Build per-machine bundles first and record the witness.
    pub planted: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            machines: (2, 3),
            jobs: (1, 8),
            size_max: 20,
            size_den: 4,
            bid_max: 8,
            bid_den: 4,
            identical: false,
            planted: false,
        }
    }
}

impl RandomParams {
    pub fn from_params(base: RandomParams, params: &GenParams) -> Result<Self> {
        let flag = |key: &str, default: bool| -> Result<bool> {
            match params.get(key).map(String::as_str) {
                None => Ok(default),
                Some("true") | Some("1") | Some("yes") => Ok(true),
                Some("false") | Some("0") | Some("no") => Ok(false),
                Some(v) => Err(Error::Parse(format!("parameter {key} must be a boolean, got {v:?}"))),
            }
        };
        let out = Self {
            machines: param_range(params, "m", base.machines)?,
            jobs: param_range(params, "n", base.jobs)?,
            size_max: param_usize(params, "size_max", base.size_max as usize)? as u32,
            size_den: param_usize(params, "size_den", base.size_den as usize)? as u32,
            bid_max: param_usize(params, "bid_max", base.bid_max as usize)? as u32,
            bid_den: param_usize(params, "bid_den", base.bid_den as usize)? as u32,
            identical: flag("identical", base.identical)?,
            planted: flag("planted", base.planted)?,
        };
        if out.machines.0 == 0 || out.jobs.0 == 0 || out.size_max == 0 || out.size_den == 0 || out.bid_max == 0 || out.bid_den == 0
        {
            return Err(Error::InvalidParams("random generator ranges must be positive".into()));
        }
        Ok(out)
    }
}

fn random_rational(rng: &mut ChaCha8Rng, max: u32, den: u32) -> Rational {
    let k = rng.gen_range(1..=max) as i64;
    let d = rng.gen_range(1..=den) as i64;
    ratio(k, d)
}

pub fn gen_random_with(params: &RandomParams, rng: &mut ChaCha8Rng) -> Result<GeneratedInstance> {
    let m = rng.gen_range(params.machines.0..=params.machines.1);
    let n = rng.gen_range(params.jobs.0..=params.jobs.1);
    let bids: Vec<Rational> = (0..m)
        .map(|_| {
            if params.identical {
                Rational::one()
            } else {
                random_rational(rng, params.bid_max, params.bid_den)
            }
        })
        .collect();
    let jobs: Vec<Rational> = (0..n).map(|_| random_rational(rng, params.size_max, params.size_den)).collect();

    let mut ids: Vec<usize> = (0..m).collect();
    ids.shuffle(rng);
    let instance = Instance::new(jobs, bids, Some(ids))?;
    let mut g = GeneratedInstance::plain(instance, "random", &GenParams::new());
    if params.planted {
        // every machine receives at least one job when n >= m
        let mut owner: Vec<usize> = (0..n).map(|j| if j < m { j } else { rng.gen_range(0..m) }).collect();
        owner.shuffle(rng);
        let witness = Assignment::from_external(&g.instance, &owner)?;
        g = g.with_witness(witness);
    }
    Ok(g)
}

pub fn gen_random(params: &RandomParams, seed: u64) -> Result<GeneratedInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_random_with(params, &mut rng)
}

/// Random instances the suites use by default for each algorithm.
pub fn default_random_params(kind: AlgorithmKind) -> RandomParams {
    let base = RandomParams::default();
    match kind {
        AlgorithmKind::Snc | AlgorithmKind::RoundRobin => RandomParams {
            machines: (1, 4),
            jobs: (1, 10),
            ..base
        },
        AlgorithmKind::Snc2 | AlgorithmKind::Ssnc2 => RandomParams {
            machines: (2, 2),
            jobs: (1, 10),
            ..base
        },
        AlgorithmKind::Ptas => RandomParams {
            machines: (1, 3),
            jobs: (1, 12),
            ..base
        },
        AlgorithmKind::Fptas | AlgorithmKind::SsncMulti | AlgorithmKind::Oracle => RandomParams {
            machines: (1, 3),
            jobs: (1, 8),
            ..base
        },
        AlgorithmKind::Mechanism => RandomParams {
            machines: (2, 2),
            jobs: (1, 6),
            size_max: 16,
            size_den: 1,
            ..base
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    pub trials: usize,
    pub seed: u64,
    pub params: GenParams,
}

fn rational_opt<S: serde::Serializer>(value: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    rational::serde_str::opt::serialize(value, s)
}

/// Suite outcome in the shared report shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub algorithm: String,
    pub trials: usize,
    pub violations: Vec<MonotonicityVerdict>,
    #[serde(serialize_with = "rational_opt")]
    pub max_ratio: Option<Rational>,
    #[serde(serialize_with = "rational_opt")]
    pub bound: Option<Rational>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<RatioRow>,
}

/// One ratio-suite trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioRow {
    pub trial: usize,
    pub m: usize,
    pub n: usize,
    #[serde(with = "rational::serde_str")]
    pub opt: Rational,
    /// Whether `opt` is a planted lower bound rather than the exact optimum.
    pub planted: bool,
    #[serde(with = "rational::serde_str")]
    pub cover: Rational,
    /// `None` when the cover is zero but OPT is not.
    #[serde(serialize_with = "rational_opt")]
    pub ratio: Option<Rational>,
    #[serde(serialize_with = "rational_opt")]
    pub bound: Option<Rational>,
    pub within: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV: one line per ratio row, or per violation for monotonicity runs.
    pub fn to_csv(&self) -> String {
        let f = |r: &Option<Rational>| r.as_ref().map(rational::format).unwrap_or_default();
        let mut out = String::new();
        if self.rows.is_empty() {
            out.push_str("algorithm,machine_id,old_bid,new_bid,old_work,new_work,violated\n");
            for v in &self.violations {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    v.algorithm, v.machine_id, v.old_bid, v.new_bid, v.old_work, v.new_work, v.violated
                ));
            }
        } else {
            out.push_str("algorithm,trial,m,n,opt,planted,cover,ratio,bound,within\n");
            for r in &self.rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{}\n",
                    self.algorithm,
                    r.trial,
                    r.m,
                    r.n,
                    r.opt,
                    r.planted,
                    r.cover,
                    f(&r.ratio),
                    f(&r.bound),
                    r.within
                ));
            }
        }
        out
    }
}

/// A random instance with the bid raise to apply to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaiseTrial {
    pub instance: Instance,
    pub machine_id: usize,
    pub factor: Rational,
}

/// The random trials [`monotonicity_suite`] runs for `kind`, reproducible
/// from the seed.
pub fn raise_trials(kind: AlgorithmKind, options: &SuiteOptions) -> Result<Vec<RaiseTrial>> {
    let mut params = RandomParams::from_params(default_random_params(kind), &options.params)?;
    if kind.two_machine_only() {
        params.machines = (2, 2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let factors = raise_factors();
    (0..options.trials)
        .map(|_| {
            let g = gen_random_with(&params, &mut rng)?;
            let machine_id = rng.gen_range(0..g.instance.m());
            let factor = factors.choose(&mut rng).expect("non-empty grid").clone();
            Ok(RaiseTrial {
                instance: g.instance,
                machine_id,
                factor,
            })
        })
        .collect()
}

/// Single-bid-raise trials. With `family=...` in the parameters the family's
/// designated raise is checked once; otherwise `trials` random instances each
/// get one random raise from [`raise_factors`].
pub fn monotonicity_suite(solver: &Solver, options: &SuiteOptions) -> Result<Report> {
    let mut verdicts = Vec::new();
    if let Some(family) = options.params.get("family") {
        let g = gen_adversarial(family, &options.params)?;
        let solver = solver.clone().with_rounding_base(solver.rounding_base.clone().or(g.rounding_base.clone()));
        let (id, factor) = match &g.deviation {
            Some(d) => d.clone(),
            None => (0, ratio(3, 2)),
        };
        verdicts.push(check_monotone_once(&solver, &g.instance, id, &factor)?);
    } else {
        for trial in raise_trials(solver.kind, options)? {
            verdicts.push(check_monotone_once(solver, &trial.instance, trial.machine_id, &trial.factor)?);
        }
    }
    let trials = verdicts.len();
    let violations: Vec<MonotonicityVerdict> = verdicts.into_iter().filter(|v| v.violated).collect();
    Ok(Report {
        algorithm: solver.kind.name().to_string(),
        trials,
        pass: violations.is_empty(),
        violations,
        max_ratio: None,
        bound: None,
        rows: Vec::new(),
    })
}

/// OPT / cover, or `None` when the cover is zero and OPT is not.
pub fn measured_ratio(opt: &Rational, cover: &Rational) -> Option<Rational> {
    if cover.is_zero() {
        if opt.is_zero() {
            Some(Rational::one())
        } else {
            None
        }
    } else {
        Some(opt / cover)
    }
}

/// `cover * bound >= opt`, exactly.
pub fn within_bound(opt: &Rational, cover: &Rational, bound: &Rational) -> bool {
    cover * bound >= *opt
}

/// Measures OPT / cover over generated instances. OPT comes from the oracle,
/// or from the planted witness when `planted=true` (a lower bound, which only
/// makes the check stricter).
pub fn ratio_suite(solver: &Solver, options: &SuiteOptions) -> Result<Report> {
    let mut params = RandomParams::from_params(default_random_params(solver.kind), &options.params)?;
    if solver.kind.two_machine_only() {
        params.machines = (2, 2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut rows = Vec::with_capacity(options.trials);
    for trial in 0..options.trials {
        let g = gen_random_with(&params, &mut rng)?;
        let instance = &g.instance;
        let (opt, planted) = match &g.planted_cover {
            Some(p) => (p.clone(), true),
            None => (optimal_cover(instance, solver.budget)?.opt_cover, false),
        };
        let solution = solver.solve(instance)?;
        let cover = cover_of(&solution.assignment, instance);
        let bound = if solution.clamped { None } else { solver.ratio_bound(instance) };
        let within = match &bound {
            Some(b) => within_bound(&opt, &cover, b),
            None => true,
        };
        rows.push(RatioRow {
            trial,
            m: instance.m(),
            n: instance.n(),
            ratio: measured_ratio(&opt, &cover),
            opt,
            planted,
            cover,
            bound,
            within,
        });
    }
    let unbounded = rows.iter().any(|r| r.ratio.is_none());
    let max_ratio = if unbounded {
        None
    } else {
        rows.iter().filter_map(|r| r.ratio.clone()).max()
    };
    let bound = rows.iter().filter_map(|r| r.bound.clone()).max();
    Ok(Report {
        algorithm: solver.kind.name().to_string(),
        trials: rows.len(),
        violations: Vec::new(),
        max_ratio,
        bound,
        pass: rows.iter().all(|r| r.within),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::optimal_cover;

    fn params(text: &str) -> GenParams {
        parse_gen_params(text).unwrap()
    }

    #[test]
    fn parses_algorithm_names() {
        for kind in AlgorithmKind::ALL {
            assert_eq!(kind.name().parse::<AlgorithmKind>().unwrap(), kind);
        }
        assert_eq!("ssnc_multi".parse::<AlgorithmKind>().unwrap(), AlgorithmKind::SsncMulti);
        assert!("lpt".parse::<AlgorithmKind>().is_err());
    }

    #[test]
    fn gen_params_parse() {
        let p = params("family=nonmono3, a=3/2");
        assert_eq!(p["family"], "nonmono3");
        assert_eq!(p["a"], "3/2");
        assert!(parse_gen_params("oops").is_err());
    }

    #[test]
    fn rr_tight_family() {
        let g = gen_adversarial("rr_tight", &params("m=2")).unwrap();
        assert_eq!(g.instance.jobs(), &[int(1), ratio(1, 2), ratio(1, 2)]);
        assert_eq!(g.planted_cover, Some(int(1)));
    }

    #[test]
    fn ssnc_small_family_matches_listed_jobs() {
        let g = gen_adversarial("ssnc_lb_small", &params("s=1,eps=1/30")).unwrap();
        let mut expected = vec![ratio(10, 30), ratio(9, 30)];
        expected.extend(vec![ratio(1, 30); 11]);
        assert_eq!(g.instance.jobs(), expected.as_slice());
        assert_eq!(g.predicted_ratio, Some(ratio(15, 11)));
        assert_eq!(g.planted_cover, Some(ratio(1, 2)));
    }

    #[test]
    fn nonmono3_family() {
        let g = gen_adversarial("nonmono3", &params("a=3/2")).unwrap();
        assert_eq!(
            g.instance.jobs(),
            &[ratio(27, 8), ratio(19, 8), ratio(5, 4), ratio(5, 4), int(1)]
        );
        assert_eq!(g.instance.bids(), &[ratio(4, 9), ratio(2, 3), int(1)]);
        assert!(gen_adversarial("nonmono3", &params("a=7/5")).is_err());
    }

    #[test]
    fn family_witnesses_are_optimal_where_claimed() {
        for (family, p) in [("snc_lb1", "s=3"), ("snc_lb2", "s=1"), ("rr_tight", "m=3"), ("ssnc_lb_large", "s=2")] {
            let g = gen_adversarial(family, &params(p)).unwrap();
            let opt = optimal_cover(&g.instance, 1_000_000).unwrap().opt_cover;
            assert_eq!(Some(opt), g.planted_cover, "{family}");
        }
    }

    #[test]
    fn random_generation_is_deterministic() {
        let p = RandomParams {
            planted: true,
            ..RandomParams::default()
        };
        let a = gen_random(&p, 11).unwrap();
        let b = gen_random(&p, 11).unwrap();
        assert_eq!(a, b);
        let witness = a.witness.unwrap();
        assert_eq!(Some(cover_of(&witness, &a.instance)), a.planted_cover);
    }

    #[test]
    fn few_jobs_give_zero_opt() {
        let p = RandomParams {
            machines: (3, 3),
            jobs: (1, 2),
            ..RandomParams::default()
        };
        let g = gen_random(&p, 3).unwrap();
        assert_eq!(optimal_cover(&g.instance, 1000).unwrap().opt_cover, int(0));
    }

    #[test]
    fn monotone_once_examples() {
        let g = gen_adversarial("nonmono3", &params("a=3/2")).unwrap();
        let (id, f) = g.deviation.clone().unwrap();
        let v = check_monotone_once(&Solver::new(AlgorithmKind::SsncMulti), &g.instance, id, &f).unwrap();
        assert!(v.violated);
        assert_eq!((v.old_work, v.new_work), (ratio(7, 2), ratio(29, 8)));

        let i = Instance::new(vec![int(3), int(2), int(2), int(1)], vec![int(1), int(2)], None).unwrap();
        let v = check_monotone_once(&Solver::new(AlgorithmKind::Ssnc2), &i, 0, &int(5)).unwrap();
        assert!(!v.violated);
        assert!(check_monotone_once(&Solver::new(AlgorithmKind::Ssnc2), &i, 0, &int(1)).is_err());
    }

    #[test]
    fn small_suites_pass() {
        let options = SuiteOptions {
            trials: 40,
            seed: 7,
            params: GenParams::new(),
        };
        for kind in [AlgorithmKind::Snc, AlgorithmKind::RoundRobin, AlgorithmKind::Ssnc2] {
            let solver = Solver::new(kind);
            assert!(monotonicity_suite(&solver, &options).unwrap().pass, "{kind}");
            let report = ratio_suite(&solver, &options).unwrap();
            assert!(report.pass, "{kind}");
            assert_eq!(report.trials, 40);
        }
    }

    #[test]
    fn reports_serialize() {
        let options = SuiteOptions {
            trials: 3,
            seed: 1,
            params: GenParams::new(),
        };
        let report = ratio_suite(&Solver::new(AlgorithmKind::RoundRobin), &options).unwrap();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["algorithm"], "round-robin");
        assert_eq!(json["trials"], 3);
        assert!(json["violations"].as_array().unwrap().is_empty());
        assert_eq!(report.to_csv().lines().count(), 4);
    }
}
