// Weights and consistency of one expert's judgment matrix.
//
//     cargo run --example weights_consistency [matrix.json]

use pairwise::weights::{weight_report, CR_THRESHOLD};
use pairwise::JudgmentMatrix;

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/suppliers.json").to_string());
    let (m, scale) = JudgmentMatrix::load(&path)?;
    let r = weight_report(&m)?;

    println!("{} objects, scale {:?}", m.h(), scale);
    println!("{:<10} {:>10} {:>10}", "object", "approx", "eigen");
    for (k, label) in m.labels().iter().enumerate() {
        println!("{label:<10} {:>10.4} {:>10.4}", r.w_approx[k], r.w_eigen[k]);
    }
    println!("lambda_max = {:.4}, CI = {:.4}, RI = {:.4}, CR = {:.4}", r.lambda_max, r.ci, r.ri, r.cr);
    println!(
        "{}",
        if r.acceptable { format!("CR <= {CR_THRESHOLD}: acceptable") } else { format!("CR > {CR_THRESHOLD}: revise the judgments") }
    );
    Ok(())
}
