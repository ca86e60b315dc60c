//! Full-configuration verification: every criterion at its stated level
//! and tolerance, one pass/fail line each. `cargo test --test acceptance
//! -- --nocapture` shows the lines; the CLI command `treeperm verify`
//! runs the same suites.

use treeperm::verify::{run_suite, VerifyOptions};

fn run(name: &str) {
    let opts = VerifyOptions::default();
    let results = run_suite(name, &opts).expect("suite exists");
    let mut ok = true;
    for r in &results {
        println!("{}", r.line());
        ok &= r.passed;
    }
    assert!(ok, "suite {name} has failing criteria");
}

#[test]
fn acceptance_core() {
    run("core");
}

#[test]
fn acceptance_orders() {
    run("orders");
}

#[test]
fn acceptance_hausdorff() {
    run("hausdorff");
}

#[test]
fn acceptance_conjugacy() {
    run("conjugacy");
}

#[test]
fn acceptance_semirigid() {
    run("semirigid");
}

#[test]
fn acceptance_normalizer() {
    run("normalizer");
}

#[test]
fn acceptance_odometer() {
    run("odometer");
}

#[test]
fn acceptance_arith() {
    run("arith");
}
