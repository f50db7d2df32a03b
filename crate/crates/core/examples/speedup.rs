// Times the classic route against the product-eigenvalue route. Dimensions
// may be given as arguments; the defaults keep the run short.
//
//     cargo run --release --example speedup -- 64 128 256 512

use uhlfid::bench::{configure_threads, speedup_report, BenchConfig};
use uhlfid::{FidelityMethod, Result};

pub fn run_with(dims: Vec<usize>, reps: usize) -> Result<()> {
    configure_threads(1);
    let config = BenchConfig {
        dims,
        reps,
        warmup_reps: 1,
        master_seed: 0,
        methods: vec![FidelityMethod::Classic, FidelityMethod::ProductEig],
    };
    let report = speedup_report(&config)?;
    for s in &report.speedups {
        let c = report.stats(s.dim, FidelityMethod::Classic).unwrap();
        let e = report.stats(s.dim, FidelityMethod::ProductEig).unwrap();
        println!(
            "n = {:>4}  classic {:.3e} s  product-eig {:.3e} s  speedup {:.2}",
            s.dim, c.median, e.median, s.ratio
        );
    }
    if let Some(x) = report.scaling_exponent(FidelityMethod::Classic) {
        println!("classic scaling exponent {x:.2}");
    }
    Ok(())
}

pub fn run() -> Result<()> {
    run_with(vec![16, 32, 64], 3)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let dims: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if dims.is_empty() {
        run()
    } else {
        run_with(dims, 5)
    }
}
