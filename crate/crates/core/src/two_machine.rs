//! Consecutive-split algorithms: SNC and SSNC on two machines, and the
//! exhaustive speed-aware variant on any number of machines (optionally with
//! job sizes rounded to powers of a base).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance};
use crate::rational::{self, Rational};

/// The split `L_i = {0..i}`, `R_i = {i..n}` in sorted job order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitChoice {
    /// Number of jobs in the prefix, `1..n`.
    pub i: usize,
    pub sigma1: Rational,
    pub sigma2: Rational,
    /// Bid ratio `b2 / b1`; one for the speed-oblivious variant.
    pub r: Rational,
}

fn require_two(instance: &Instance) -> Result<()> {
    if instance.m() != 2 {
        return Err(Error::InvalidParams(format!(
            "two-machine algorithm called with {} machines",
            instance.m()
        )));
    }
    Ok(())
}

/// Best split for `min(sigma1 / r, sigma2)`, first maximizer wins.
/// `None` when there are fewer than two jobs.
pub fn best_split(jobs: &[Rational], r: &Rational) -> Option<SplitChoice> {
    let n = jobs.len();
    if n < 2 {
        return None;
    }
    let total = rational::sum(jobs);
    let mut sigma1 = Rational::zero();
    let mut best: Option<(Rational, SplitChoice)> = None;
    for i in 1..n {
        sigma1 += &jobs[i - 1];
        let sigma2 = &total - &sigma1;
        let value = (&sigma1 / r).min(sigma2.clone());
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((
                value,
                SplitChoice {
                    i,
                    sigma1: sigma1.clone(),
                    sigma2,
                    r: r.clone(),
                },
            ));
        }
    }
    best.map(|(_, c)| c)
}

fn place_split(n: usize, choice: &SplitChoice) -> Assignment {
    let prefix: Vec<usize> = (0..choice.i).collect();
    let suffix: Vec<usize> = (choice.i..n).collect();
    Assignment::sorted_allocation(
        n,
        &[prefix, suffix],
        &[choice.sigma1.clone(), choice.sigma2.clone()],
    )
}

/// SNC on two machines: maximize the smaller side, ignoring speeds.
pub fn snc2(instance: &Instance) -> Result<(Assignment, Option<SplitChoice>)> {
    require_two(instance)?;
    let n = instance.n();
    match best_split(instance.jobs(), &Rational::one()) {
        None => Ok((Assignment::all_on(0, n), None)),
        Some(choice) => Ok((place_split(n, &choice), Some(choice))),
    }
}

/// Speed-aware SNC on two machines.
pub fn ssnc2(instance: &Instance) -> Result<(Assignment, Option<SplitChoice>)> {
    require_two(instance)?;
    let n = instance.n();
    let bids = instance.bids();
    let r = &bids[1] / &bids[0];
    match best_split(instance.jobs(), &r) {
        None => Ok((Assignment::all_on(0, n), None)),
        Some(choice) => Ok((place_split(n, &choice), Some(choice))),
    }
}

/// Checks the two inequalities every SSNC split satisfies:
/// `sigma1/r >= sigma2 - p_{i+1}` and `sigma1 - p_i <= r * sigma2`.
pub fn split_inequalities_hold(jobs: &[Rational], choice: &SplitChoice) -> (bool, bool) {
    let head = &choice.sigma1 / &choice.r >= &choice.sigma2 - &jobs[choice.i];
    let tail = &choice.sigma1 - &jobs[choice.i - 1] <= &choice.r * &choice.sigma2;
    (head, tail)
}

/// Smallest power of `base` that is at least `size`.
pub fn round_up_to_power(size: &Rational, base: &Rational) -> Rational {
    rational::pow(base, rational::ceil_log(base, size))
}

/// Exhaustive speed-aware SNC on `m` machines.
///
/// Tries every split of the sorted jobs into `m` non-empty consecutive sets,
/// pairing the `k`-th set with the `k`-th machine in bid order, and keeps the
/// first split (lexicographically smallest cut tuple) maximizing
/// `min_k X_k * b_k`. With `rounding_base`, `X_k` is computed from sizes
/// rounded up to powers of the base. The chosen sets are then handed out by
/// true size, largest set to the lowest bid.
pub fn ssnc_multi(instance: &Instance, rounding_base: Option<&Rational>) -> Result<Assignment> {
    let n = instance.n();
    let m = instance.m();
    if let Some(base) = rounding_base {
        if *base <= Rational::one() {
            return Err(Error::InvalidParams(format!(
                "rounding base must exceed 1, got {}",
                rational::format(base)
            )));
        }
    }
    if n < m {
        return Ok(Assignment::all_on(0, n));
    }
    let jobs = instance.jobs();
    let seen: Vec<Rational> = match rounding_base {
        Some(base) => jobs.iter().map(|p| round_up_to_power(p, base)).collect(),
        None => jobs.to_vec(),
    };
    let mut prefix = vec![Rational::zero(); n + 1];
    for j in 0..n {
        prefix[j + 1] = &prefix[j] + &seen[j];
    }
    let bids = instance.bids();

    // cuts[k] is the start of set k + 1; set k spans cuts[k-1]..cuts[k]
    let mut cuts: Vec<usize> = (1..m).collect();
    let mut best: Option<(Rational, Vec<usize>)> = None;
    loop {
        let mut value: Option<Rational> = None;
        let mut start = 0;
        for k in 0..m {
            let end = if k + 1 < m { cuts[k] } else { n };
            let load = (&prefix[end] - &prefix[start]) * &bids[k];
            value = Some(match value {
                Some(v) if v <= load => v,
                _ => load,
            });
            start = end;
        }
        let value = value.expect("at least one machine");
        if best.as_ref().map_or(true, |(v, _)| value > *v) {
            best = Some((value, cuts.clone()));
        }
        if !next_cuts(&mut cuts, n) {
            break;
        }
    }

    let (_, cuts) = best.expect("at least one split");
    let mut sets = Vec::with_capacity(m);
    let mut start = 0;
    for k in 0..m {
        let end = if k + 1 < m { cuts[k] } else { n };
        sets.push((start..end).collect::<Vec<usize>>());
        start = end;
    }
    let sums: Vec<Rational> = sets
        .iter()
        .map(|s| rational::sum(s.iter().map(|&j| &jobs[j])))
        .collect();
    Ok(Assignment::sorted_allocation(n, &sets, &sums))
}

/// Advances strictly increasing cut positions in `1..n` to the next tuple in
/// lexicographic order.
fn next_cuts(cuts: &mut [usize], n: usize) -> bool {
    let k = cuts.len();
    for idx in (0..k).rev() {
        let limit = n - (k - idx);
        if cuts[idx] < limit {
            cuts[idx] += 1;
            for follow in idx + 1..k {
                cuts[follow] = cuts[follow - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cover_of;
    use crate::oracle::optimal_cover;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn two(jobs: Vec<Rational>, b1: Rational, b2: Rational) -> Instance {
        Instance::new(jobs, vec![b1, b2], None).unwrap()
    }

    #[test]
    fn snc2_first_tight_sequence() {
        let i = two(vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)], ratio(1, 3), int(1));
        let (a, choice) = snc2(&i).unwrap();
        let choice = choice.unwrap();
        assert_eq!(choice.i, 1);
        assert_eq!(cover_of(&a, &i), ratio(1, 6));
        let opt = optimal_cover(&i, 1000).unwrap().opt_cover;
        assert_eq!(opt, ratio(1, 4));
        assert_eq!(opt / cover_of(&a, &i), ratio(3, 2));
    }

    #[test]
    fn snc2_second_tight_sequence() {
        let i = two(
            vec![ratio(1, 3), ratio(1, 3), ratio(1, 6), ratio(1, 6)],
            int(1),
            int(1),
        );
        let (a, _) = snc2(&i).unwrap();
        let cover = cover_of(&a, &i);
        assert_eq!(cover, ratio(1, 3));
        assert_eq!(optimal_cover(&i, 1000).unwrap().opt_cover, ratio(1, 2));
    }

    #[test]
    fn symmetric_split_and_tiny_inputs() {
        let i = two(vec![ratio(1, 2), ratio(1, 2)], int(1), int(2));
        let (a, choice) = ssnc2(&i).unwrap();
        assert_eq!(choice.unwrap().i, 1);
        assert_eq!(cover_of(&a, &i), ratio(1, 2));

        let i = two(vec![int(3)], int(1), int(1));
        let (a, choice) = snc2(&i).unwrap();
        assert!(choice.is_none());
        assert_eq!(a.machine_of, vec![0]);
        assert_eq!(cover_of(&a, &i), int(0));

        assert!(snc2(&Instance::identical(vec![int(1)], 3).unwrap()).is_err());
    }

    #[test]
    fn ssnc2_many_small_jobs() {
        let mut jobs = vec![ratio(10, 30), ratio(9, 30)];
        jobs.extend(std::iter::repeat(ratio(1, 30)).take(11));
        let i = two(jobs, int(1), int(1));
        let (a, choice) = ssnc2(&i).unwrap();
        let choice = choice.unwrap();
        assert_eq!(choice.i, 2);
        assert_eq!((choice.sigma1.clone(), choice.sigma2.clone()), (ratio(19, 30), ratio(11, 30)));
        assert_eq!(cover_of(&a, &i), ratio(11, 30));
    }

    #[test]
    fn larger_side_goes_to_faster_machine() {
        // prefix {1} is smaller than the suffix, so the suffix takes position 0
        let i = two(vec![int(1), ratio(3, 4), ratio(3, 4)], int(1), int(1));
        let (a, choice) = snc2(&i).unwrap();
        assert_eq!(choice.unwrap().i, 1);
        assert_eq!(a.machine_of, vec![1, 0, 0]);
    }

    #[test]
    fn rounding_up_to_powers() {
        let b = ratio(13, 8);
        assert_eq!(round_up_to_power(&ratio(39, 16), &b), ratio(169, 64));
        assert_eq!(round_up_to_power(&b, &b), b);
        assert_eq!(round_up_to_power(&int(1), &b), int(1));
        assert_eq!(round_up_to_power(&ratio(1, 2), &int(2)), ratio(1, 2));
    }

    #[test]
    fn cut_tuples_enumerate_all_compositions() {
        let mut cuts = vec![1, 2];
        let mut seen = vec![cuts.clone()];
        while next_cuts(&mut cuts, 5) {
            seen.push(cuts.clone());
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn multi_three_machine_example() {
        let a = ratio(3, 2);
        let jobs = vec![ratio(27, 8), ratio(19, 8), ratio(5, 4), ratio(5, 4), int(1)];
        let speeds = [&a * &a, a.clone(), int(1)];
        let i = Instance::new(jobs.clone(), speeds.iter().map(|s| s.recip()).collect(), None).unwrap();
        let out = ssnc_multi(&i, None).unwrap();
        // split {27/8} {19/8} {7/2} ties the best objective a; the sorted
        // hand-out then puts 7/2 on the fastest machine
        let mut works = out.works(&i);
        works.sort();
        assert_eq!(works, vec![ratio(19, 8), ratio(27, 8), ratio(7, 2)]);
        assert_eq!(cover_of(&out, &i), ratio(14, 9));
        let slowed = i.with_bid(0, a.recip()).unwrap();
        let out2 = ssnc_multi(&slowed, None).unwrap();
        assert_eq!(out.works_by_id(&i)[0], ratio(7, 2));
        assert_eq!(out2.works_by_id(&slowed)[0], ratio(29, 8));
    }

    #[test]
    fn multi_single_machine_takes_everything() {
        let i = Instance::identical(vec![int(2), int(1)], 1).unwrap();
        assert_eq!(ssnc_multi(&i, None).unwrap().machine_of, vec![0, 0]);
    }

    proptest! {
        #[test]
        fn multi_matches_ssnc2_on_two_machines(
            jobs in proptest::collection::vec(1i64..20, 2..8),
            b1 in 1i64..6, b2 in 1i64..6,
        ) {
            let i = two(jobs.iter().map(|&p| int(p)).collect(), int(b1), int(b2));
            let (two_out, _) = ssnc2(&i).unwrap();
            let multi = ssnc_multi(&i, None).unwrap();
            prop_assert_eq!(cover_of(&two_out, &i), cover_of(&multi, &i));
            prop_assert_eq!(two_out, multi);
        }

        #[test]
        fn ssnc2_split_inequalities(
            jobs in proptest::collection::vec(1i64..30, 2..10),
            b1 in 1i64..8, b2 in 1i64..8,
        ) {
            let i = two(jobs.iter().map(|&p| int(p)).collect(), int(b1), int(b2));
            let (_, choice) = ssnc2(&i).unwrap();
            let choice = choice.unwrap();
            let (head, tail) = split_inequalities_hold(i.jobs(), &choice);
            prop_assert!(head && tail);
            prop_assert_eq!(&choice.sigma1 + &choice.sigma2, i.total_size());
        }
    }
}
