//! Exact optimum with the lex-min tie-break.

use machine_cover::oracle::{optimal_cover, DEFAULT_BUDGET};
use machine_cover::rational::{format, int};
use machine_cover::Instance;

fn main() -> machine_cover::Result<()> {
    let jobs: Vec<_> = [9, 8, 7, 6, 5, 4, 3, 3, 2, 2, 1, 1].into_iter().map(int).collect();
    let instance = Instance::identical(jobs, 5)?;
    let result = optimal_cover(&instance, DEFAULT_BUDGET)?;
    println!(
        "OPT {} after {} nodes; assignment by job {:?}",
        format(&result.opt_cover),
        result.nodes,
        result.assignment.to_external(&instance)
    );

    match optimal_cover(&instance, 10) {
        Err(e) => println!("tiny budget: {e}"),
        Ok(_) => println!("tiny budget was enough"),
    }
    Ok(())
}
