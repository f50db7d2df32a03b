// The spectrum of ρ^x σ ρ^(1-x) does not depend on x; only x = 1/2 gives a
// Hermitian matrix.
//
//     cargo run --example sandwich_spectrum

use uhlfid::fidelity::sandwich_spectrum;
use uhlfid::states::{random_density, StateSeed};
use uhlfid::Result;

pub fn run() -> Result<()> {
    let rho = random_density(4, 4, StateSeed::new(3, 0))?;
    let sigma = random_density(4, 4, StateSeed::new(3, 1))?;
    let reference = sandwich_spectrum(&rho, &sigma, 0.5)?.sorted_real_parts();
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let s = sandwich_spectrum(&rho, &sigma, x)?;
        let re = s.sorted_real_parts();
        let gap = re
            .iter()
            .zip(&reference)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let shown: Vec<String> = re.iter().map(|v| format!("{v:.10}")).collect();
        println!(
            "x = {x:<4}  [{}]  max imag {:.1e}  gap {gap:.1e}",
            shown.join(", "),
            s.max_imag
        );
    }
    let f: f64 = reference
        .iter()
        .map(|l| l.max(0.0).sqrt())
        .sum::<f64>()
        .powi(2);
    println!("(Σ √λ)² = {f:.14}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
