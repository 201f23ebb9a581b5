//! One line per acceptance criterion, over the desk instances.

use std::process::ExitCode;
use std::time::Instant;

use rbskit::checks::{by_criterion, Outcome, Profile};
use rbskit::Guards;

/// Wall-clock budget of each criterion, in seconds.
const BUDGETS: [u64; 9] = [10, 300, 600, 600, 300, 120, 60, 600, 300];

fn main() -> ExitCode {
    let guards = Guards::default();
    let mut failed = 0;
    for k in 1..=9u8 {
        let check = by_criterion(k).expect("every criterion has a check");
        let start = Instant::now();
        let mut problems = Vec::new();
        let instances = check.profile_instances(Profile::Desk);
        for inst in &instances {
            match check.run(inst, &guards) {
                Ok(r) => match r.outcome {
                    Outcome::Pass => {}
                    Outcome::Fail { witness } => problems.push(format!("{inst}: {witness}")),
                    Outcome::Inconclusive { reason } => problems.push(format!("{inst}: inconclusive: {reason}")),
                },
                Err(e) => problems.push(format!("{inst}: {e}")),
            }
        }
        let secs = start.elapsed().as_secs_f64();
        let budget = BUDGETS[k as usize - 1];
        if secs > budget as f64 {
            problems.push(format!("took {secs:.1} s, budget {budget} s"));
        }
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {k} [{status}] {:<16} {} instances, {secs:.1} s (budget {budget} s)",
            check.name,
            instances.len()
        );
        for p in &problems {
            println!("    {p}");
        }
        failed += !problems.is_empty() as usize;
    }
    println!("{}/9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
