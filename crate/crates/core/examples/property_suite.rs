// Seeded property suite over a few dimensions, then again with one method
// deliberately perturbed to show how a failure is reported.
//
//     cargo run --example property_suite

use uhlfid::verify::{
    run_property_suite, run_property_suite_with_fault, FaultInjection, TolProfile,
};
use uhlfid::{FidelityMethod, Result};

pub fn run() -> Result<()> {
    let report = run_property_suite(3, &[2, 4, 8], 42, TolProfile::Default);
    for p in &report.properties {
        println!(
            "{} {:<40} worst {:.1e} / {:.0e}",
            if p.passed { "ok  " } else { "FAIL" },
            p.name,
            p.worst_residual,
            p.threshold
        );
    }
    println!("all passed: {}", report.all_passed);

    let fault = FaultInjection {
        method: FidelityMethod::ProductSqrt,
        offset: 1e-6,
    };
    let broken = run_property_suite_with_fault(1, &[4], 42, TolProfile::Default, Some(fault));
    let failed: Vec<&str> = broken
        .properties
        .iter()
        .filter(|p| !p.passed)
        .map(|p| p.name.as_str())
        .collect();
    println!(
        "with product-sqrt shifted by 1e-6, failing: {}",
        failed.join(", ")
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
