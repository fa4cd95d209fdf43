use std::process::ExitCode;

use hecke_lab::hyperbolic::{AREA_FLOOR, GRAM_TOL};
use hecke_lab::par::Execution;
use hecke_lab::rep::{INVERTIBILITY_TOL, MULTIPLICATIVITY_TOL};
use hecke_lab::suite::{self, AREA_TOL, PARTITION_REL_TOL, SUMMATION_ORDER_TOL};

const SEED: u64 = 0;

fn main() -> ExitCode {
    // Tolerances the criteria are stated with.
    assert_eq!(AREA_TOL, 1e-9);
    assert_eq!(PARTITION_REL_TOL, 1e-6);
    assert_eq!(SUMMATION_ORDER_TOL, 1e-6);
    assert_eq!(GRAM_TOL, 1e-8);
    assert_eq!(MULTIPLICATIVITY_TOL, 1e-8);
    assert_eq!(INVERTIBILITY_TOL, 1e-9);
    assert_eq!(AREA_FLOOR, 1e-11);

    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !filter.is_empty() && !filter.iter().any(|f| "acceptance".contains(f.as_str())) {
        return ExitCode::SUCCESS;
    }

    let exec = Execution::default();
    let outcomes = suite::run_all(SEED, exec);
    println!("\nacceptance criteria");
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!("{} of {} criteria passed\n", outcomes.len() - failed, outcomes.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
