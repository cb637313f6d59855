//! The thirteen reproduction criteria, one test each, every one under its
//! time limit. Each test prints a PASS/FAIL line (visible with
//! `--nocapture`).

use std::time::Instant;

use quotfib::report::{run_check, ReproduceOptions, CHECKS};

fn criterion(index: usize) {
    let (name, limit, _) = CHECKS[index];
    let start = Instant::now();
    let (verdict, _) = run_check(index, &ReproduceOptions::default());
    let secs = start.elapsed().as_secs_f64();
    let pass = verdict.pass && secs < limit;
    println!(
        "{} [{:>2}] {name}: {} ({secs:.2} s, limit {limit} s)",
        if pass { "PASS" } else { "FAIL" },
        index + 1,
        verdict.detail
    );
    assert!(verdict.pass, "{name}: {}", verdict.detail);
    assert!(secs < limit, "{name} took {secs:.2} s, limit {limit} s");
}

macro_rules! criteria {
    ($($name:ident = $i:expr),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                criterion($i);
            }
        )*
    };
}

criteria! {
    c01_chart_equations = 0,
    c02_residual_hypersurface = 1,
    c03_singular_locus = 2,
    c04_involution = 3,
    c05_pullback_table = 4,
    c06_discrepancy_ledger = 5,
    c07_census_closed_form = 6,
    c08_quadric_fibre = 7,
    c09_kernel_oracle = 8,
    c10_chart_transition = 9,
    c11_chart_census_bijection = 10,
    c12_stable_pair_orbits = 11,
    c13_cramer_identity = 12,
}

#[test]
fn every_criterion_has_a_test() {
    assert_eq!(CHECKS.len(), 13);
}
