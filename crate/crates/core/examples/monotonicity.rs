//! Single-bid-raise trials for each algorithm.

use machine_cover::harness::{monotonicity_suite, AlgorithmKind, Solver, SuiteOptions};

fn main() -> machine_cover::Result<()> {
    let options = SuiteOptions {
        trials: 100,
        seed: 1,
        params: Default::default(),
    };
    for kind in AlgorithmKind::ALL {
        let report = monotonicity_suite(&Solver::new(kind), &options)?;
        println!(
            "{:<12} proven={:<5} violations {}/{}",
            kind.name(),
            kind.proven_monotone(),
            report.violations.len(),
            report.trials
        );
    }
    Ok(())
}
