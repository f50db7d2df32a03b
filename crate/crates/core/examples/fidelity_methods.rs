// Four routes to the same fidelity, on a hand-checkable qubit pair and on a
// random 8-dimensional pair.
//
//     cargo run --example fidelity_methods

use uhlfid::states::{self, random_density, StateSeed};
use uhlfid::{fidelity, ComplexMatrix, FidelityMethod, Result, DEFAULT_TOL};

pub fn run() -> Result<()> {
    let rho = states::validate(
        ComplexMatrix::from_real_diagonal(&[0.75, 0.25])?,
        DEFAULT_TOL,
    )?;
    let sigma = states::maximally_mixed(2)?;
    let exact = 0.5 + 3f64.sqrt() / 4.0;
    println!("diag(3/4, 1/4) vs I/2, exact {exact:.16}");
    for m in FidelityMethod::CONCRETE {
        let r = fidelity(&rho, &sigma, m)?;
        println!(
            "  {:<13} {:.16}  error {:.1e}",
            m,
            r.value,
            (r.value - exact).abs()
        );
    }

    let seed = StateSeed::new(2024, 0);
    let (a, b) = seed.split();
    let rho = random_density(8, 8, a)?;
    let sigma = random_density(8, 8, b)?;
    println!("random full-rank pair, n = 8");
    let mut values = Vec::new();
    for m in FidelityMethod::CONCRETE {
        let r = fidelity(&rho, &sigma, m)?;
        println!(
            "  {:<13} {:.16}  imag {:.1e}  clamped {:.1e}",
            m, r.value, r.max_imag_residual, r.clamped_mass
        );
        values.push(r.value);
    }
    let spread = values.iter().cloned().fold(f64::MIN, f64::max)
        - values.iter().cloned().fold(f64::MAX, f64::min);
    println!("  spread {spread:.1e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
