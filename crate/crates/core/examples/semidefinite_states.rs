// Rank-deficient states: the product routes still agree with the classic
// one, and the block shapes of √ρσ√ρ and ρσ in ρ's eigenbasis show why.
//
//     cargo run --example semidefinite_states

use uhlfid::matcore::{self, drazin_pinv_psd};
use uhlfid::states::{random_density, StateSeed};
use uhlfid::verify::check_block_structure;
use uhlfid::{fidelity, FidelityMethod, Result, DEFAULT_TOL};

pub fn run() -> Result<()> {
    let n = 6;
    for rank in 1..n {
        let rho = random_density(n, rank, StateSeed::new(7, rank as u64))?;
        let sigma = random_density(n, n, StateSeed::new(8, rank as u64))?;
        let report = check_block_structure(&rho, &sigma)?;
        let classic = fidelity(&rho, &sigma, FidelityMethod::Classic)?.value;
        let eig = fidelity(&rho, &sigma, FidelityMethod::ProductEig)?.value;
        println!(
            "rank {rank}/{n}: p={} q={}  |M off-block| {:.1e}  |N lower-left| {:.1e}  \
             spectrum gap {:.1e}  F {:.12}  |classic - eig| {:.1e}",
            report.p,
            report.q,
            report.m_offdiag,
            report.max_lower_left,
            report.spec_distance,
            eig,
            (classic - eig).abs()
        );
    }

    // The pseudo-inverse acts as an inverse on the support only.
    let rho = random_density(n, 3, StateSeed::new(9, 0))?;
    let pinv = drazin_pinv_psd(rho.matrix(), DEFAULT_TOL)?;
    let back = matcore::matmul(&matcore::matmul(rho.matrix(), &pinv)?, rho.matrix())?;
    println!(
        "pseudo-inverse: |ρ ρ⁺ ρ - ρ| = {:.1e}",
        back.max_abs_diff(rho.matrix())
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
