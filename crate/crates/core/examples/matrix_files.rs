// Writes two states as matrix files and runs `uhlfid compute --all-methods`
// on them in-process, with a JSON report.
//
//     cargo run --example matrix_files

use uhlfid::cli::{self, serialize_matrix};
use uhlfid::states::{random_density, StateSeed};
use uhlfid::Result;

pub fn run() -> Result<()> {
    let dir = std::env::temp_dir().join(format!("uhlfid-matrix-files-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let rho = random_density(4, 4, StateSeed::new(21, 0))?;
    let sigma = random_density(4, 2, StateSeed::new(21, 1))?;
    let rho_path = dir.join("rho.json");
    let sigma_path = dir.join("sigma.json");
    let report_path = dir.join("report.json");
    std::fs::write(&rho_path, serialize_matrix(rho.matrix()))?;
    std::fs::write(&sigma_path, serialize_matrix(sigma.matrix()))?;

    let text = std::fs::read_to_string(&sigma_path)?;
    println!("{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));
    println!("  ...");

    let args = [
        "uhlfid".to_string(),
        "compute".into(),
        "--rho".into(),
        rho_path.display().to_string(),
        "--sigma".into(),
        sigma_path.display().to_string(),
        "--all-methods".into(),
        "--report".into(),
        report_path.display().to_string(),
    ];
    let code = cli::run(args, &mut std::io::stdout(), &mut std::io::stderr());
    println!("exit code {code}");
    let report = std::fs::read_to_string(&report_path)?;
    println!(
        "report: {} bytes, starts {:?}",
        report.len(),
        &report[..40.min(report.len())]
    );
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<()> {
    run()
}
