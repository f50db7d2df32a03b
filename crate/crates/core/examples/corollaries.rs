// Symmetry, unitary invariance, multiplicativity under tensor products and
// the pure-state overlap formula, each checked numerically.
//
//     cargo run --example corollaries

use uhlfid::matcore::trace_of_product;
use uhlfid::states::{conjugate, random_density, random_unitary, tensor, StateSeed};
use uhlfid::{fidelity, FidelityMethod, Result};

pub fn run() -> Result<()> {
    let m = FidelityMethod::ProductEig;
    let s = |k| StateSeed::new(5, k);
    let rho = random_density(4, 4, s(0))?;
    let sigma = random_density(4, 4, s(1))?;
    let f = fidelity(&rho, &sigma, m)?.value;

    let swapped = fidelity(&sigma, &rho, m)?.value;
    println!(
        "symmetry            |F(ρ,σ) - F(σ,ρ)|     = {:.1e}",
        (f - swapped).abs()
    );

    let u = random_unitary(4, s(2));
    let rotated = fidelity(&conjugate(&u, &rho)?, &conjugate(&u, &sigma)?, m)?.value;
    println!(
        "unitary invariance  |F(UρU†,UσU†) - F|   = {:.1e}",
        (f - rotated).abs()
    );

    let (r1, r2) = (random_density(2, 2, s(3))?, random_density(3, 3, s(4))?);
    let (q1, q2) = (random_density(2, 2, s(5))?, random_density(3, 3, s(6))?);
    let whole = fidelity(&tensor(&r1, &r2)?, &tensor(&q1, &q2)?, m)?.value;
    let parts = fidelity(&r1, &q1, m)?.value * fidelity(&r2, &q2, m)?.value;
    println!(
        "multiplicativity    |F(ρ₁⊗ρ₂,σ₁⊗σ₂) - F₁F₂| = {:.1e}",
        (whole - parts).abs()
    );

    let pure = random_density(4, 1, s(7))?;
    let overlap = trace_of_product(pure.matrix(), sigma.matrix())?.re;
    let fp = fidelity(&pure, &sigma, m)?.value;
    println!(
        "pure state          |F - tr(ρσ)|         = {:.1e}",
        (fp - overlap).abs()
    );

    let one = fidelity(&rho, &rho, m)?.value;
    println!(
        "self fidelity       |F(ρ,ρ) - 1|         = {:.1e}",
        (one - 1.0).abs()
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
