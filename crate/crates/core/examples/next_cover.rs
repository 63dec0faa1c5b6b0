//! Next Cover on identical machines and the speed-aware SNC built on it.

use machine_cover::next_cover::{next_cover, snc};
use machine_cover::oracle::{optimal_cover, DEFAULT_BUDGET};
use machine_cover::rational::{format, int, ratio};
use machine_cover::{cover_of, Instance};

fn main() -> machine_cover::Result<()> {
    let jobs = vec![int(5), int(4), int(3), int(3), int(2), int(1)];
    for guess in [int(4), int(6), int(7)] {
        let out = next_cover(&jobs, 3, &guess);
        let sums: Vec<String> = out.sums(&jobs).iter().map(format).collect();
        println!("guess {:>2}: success={} sums=[{}]", format(&guess), out.success, sums.join(", "));
    }

    let instance = Instance::new(jobs, vec![int(1), ratio(3, 2), int(3)], None)?;
    let (assignment, trace) = snc(&instance, &ratio(1, 10))?;
    let opt = optimal_cover(&instance, DEFAULT_BUDGET)?.opt_cover;
    println!(
        "SNC cover {} (OPT {}) after {} guesses",
        format(&cover_of(&assignment, &instance)),
        format(&opt),
        trace.iterations.len()
    );
    Ok(())
}
