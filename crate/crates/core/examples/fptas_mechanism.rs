//! The load-vector FPTAS and the monotone mechanism wrapped around it.

use machine_cover::fptas::{fptas, mechanism, mechanism_bound};
use machine_cover::rational::{format, int, ratio};
use machine_cover::{cover_of, Instance};

fn main() -> machine_cover::Result<()> {
    let worked = Instance::identical(vec![int(2), int(1), int(1)], 2)?;
    let out = fptas(&worked, &ratio(1, 4))?;
    println!(
        "fptas: guess j = {:?}, cover {}",
        out.achieved_j,
        format(&cover_of(&out.assignment, &worked))
    );

    let eps = ratio(1, 4);
    let instance = Instance::new(vec![int(7), int(5), int(4), int(2)], vec![int(1), ratio(5, 2)], None)?;
    let out = mechanism(&instance, &eps)?;
    println!(
        "mechanism: ell {}, rounded exponents {:?}, {} candidates, chosen {:?}",
        out.rounded.ell, out.rounded.exponents, out.candidates, out.chosen
    );
    println!(
        "cover {} with guaranteed fraction {} of OPT",
        format(&cover_of(&out.assignment, &instance)),
        format(&mechanism_bound(&eps))
    );
    Ok(())
}
