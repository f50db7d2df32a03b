// F = tr(ρσ) + 2 Σ_{j<k} √(λ_j λ_k): the overlap plus a non-negative
// correction that vanishes when either state is pure.
//
//     cargo run --example miszczak_decomposition

use uhlfid::fidelity::miszczak_decomposition;
use uhlfid::states::{random_density, StateSeed};
use uhlfid::{fidelity, FidelityMethod, Result};

pub fn run() -> Result<()> {
    let n = 5;
    println!(
        "{:>5} {:>16} {:>16} {:>16} {:>9}",
        "rank", "overlap", "correction", "F", "residual"
    );
    for rank in 1..=n {
        let rho = random_density(n, rank, StateSeed::new(11, rank as u64))?;
        let sigma = random_density(n, n, StateSeed::new(12, rank as u64))?;
        let split = miszczak_decomposition(&rho, &sigma)?;
        let f = fidelity(&rho, &sigma, FidelityMethod::Classic)?.raw_value;
        println!(
            "{rank:>5} {:>16.12} {:>16.12} {:>16.12} {:>9.1e}",
            split.overlap,
            split.correction,
            f,
            (split.total() - f).abs()
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
