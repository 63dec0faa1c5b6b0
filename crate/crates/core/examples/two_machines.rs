//! The two-machine split algorithms, and the multi-machine variant that
//! loses monotonicity.

use machine_cover::harness::{check_monotone_once, gen_adversarial, parse_gen_params, AlgorithmKind, Solver};
use machine_cover::rational::{format, int, ratio};
use machine_cover::two_machine::{snc2, ssnc2};
use machine_cover::{cover_of, Instance};

fn main() -> machine_cover::Result<()> {
    let instance = Instance::new(vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)], vec![ratio(1, 3), int(1)], None)?;
    for (name, (assignment, choice)) in [("snc2", snc2(&instance)?), ("ssnc2", ssnc2(&instance)?)] {
        let split = choice.map(|c| c.i).unwrap_or(0);
        println!(
            "{name}: prefix of {split} job(s), cover {}",
            format(&cover_of(&assignment, &instance))
        );
    }

    let g = gen_adversarial("nonmono3", &parse_gen_params("a=3/2")?)?;
    let (id, factor) = g.deviation.clone().expect("designated raise");
    let verdict = check_monotone_once(&Solver::new(AlgorithmKind::SsncMulti), &g.instance, id, &factor)?;
    println!(
        "ssnc-multi, machine {id} bid {} -> {}: work {} -> {} (violated: {})",
        format(&verdict.old_bid),
        format(&verdict.new_bid),
        format(&verdict.old_work),
        format(&verdict.new_work),
        verdict.violated
    );
    Ok(())
}
