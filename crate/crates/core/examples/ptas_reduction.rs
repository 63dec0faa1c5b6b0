//! Job reduction into mega-jobs, then the exact solve on the reduced instance.

use machine_cover::ptas::{ptas, reduce_jobs};
use machine_cover::rational::{format, int, ratio};
use machine_cover::{cover_of, Instance};

fn main() -> machine_cover::Result<()> {
    let eps = ratio(9, 10);
    let mut jobs = vec![int(10); 12];
    jobs.extend(vec![int(1); 40]);

    let reduced = reduce_jobs(&jobs, 2, &eps)?;
    let sizes: Vec<String> = reduced.mega.iter().map(|j| format(&j.size)).collect();
    println!(
        "delta {}, case {}, {} mega-jobs: [{}]",
        reduced.delta,
        reduced.case,
        reduced.mega.len(),
        sizes.join(", ")
    );

    let instance = Instance::new(jobs, vec![int(1), int(2)], None)?;
    let out = ptas(&instance, &eps, 50_000_000)?;
    let works: Vec<String> = out.assignment.works_by_id(&instance).iter().map(format).collect();
    println!("works by machine [{}], cover {}", works.join(", "), format(&cover_of(&out.assignment, &instance)));
    Ok(())
}
