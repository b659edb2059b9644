//! Acceptance gate: prints one line per check and fails if any check fails.

use std::process::ExitCode;
use std::time::Instant;

use symlap::acceptance;

fn main() -> ExitCode {
    let checks: [(&str, acceptance::Check); 10] = [
        ("closed form, sign", acceptance::example1_grid),
        ("closed forms, one and trigonometric pair", acceptance::closed_form_grids),
        ("Laplace and Fourier reductions", acceptance::reductions),
        ("real-axis kernel witness", acceptance::kernel_witness),
        ("split inversion", acceptance::split_inversion),
        ("numeric inversion", acceptance::numeric_inversion),
        ("derivative rules", acceptance::derivative_rules),
        ("heat equation", acceptance::heat_application),
        ("forced oscillator", acceptance::ode_application),
        ("determinism", acceptance::determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    let mut total = 0;
    for (k, (title, check)) in checks.iter().enumerate() {
        let results = check();
        let ok = results.iter().all(|r| r.passed());
        println!("criterion {:>2} {:<42} {}", k + 1, title, if ok { "PASS" } else { "FAIL" });
        for r in &results {
            println!("    {}", r.line());
            total += 1;
            if !r.passed() {
                failed += 1;
            }
        }
    }
    println!(
        "acceptance: {} of {total} checks passed in {:.2?}",
        total - failed,
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
