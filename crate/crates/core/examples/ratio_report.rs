//! Approximation ratios against the exact optimum, as JSON and CSV.

use machine_cover::harness::{parse_gen_params, ratio_suite, AlgorithmKind, Solver, SuiteOptions};
use machine_cover::rational::format;

fn main() -> machine_cover::Result<()> {
    let options = SuiteOptions {
        trials: 50,
        seed: 3,
        params: parse_gen_params("m=2..3,n=2..8")?,
    };
    for kind in [AlgorithmKind::Snc, AlgorithmKind::RoundRobin, AlgorithmKind::Fptas] {
        let report = ratio_suite(&Solver::new(kind), &options)?;
        println!(
            "{:<12} max ratio {:<10} bound {:<8} pass {}",
            kind.name(),
            report.max_ratio.as_ref().map(format).unwrap_or_else(|| "inf".into()),
            report.bound.as_ref().map(format).unwrap_or_default(),
            report.pass
        );
    }

    let two = SuiteOptions { trials: 3, ..options };
    let report = ratio_suite(&Solver::new(AlgorithmKind::Ssnc2), &two)?;
    print!("{}", report.to_csv());
    Ok(())
}
