// The conflict table for triads of relations, then an audit of a matrix
// that breaks ordinal transitivity.
//
//     cargo run --example triad_audit [matrix.json]

use pairwise::transitivity::{all_relation_triples, classify_triad, conflict_census, full_matrix_audit};
use pairwise::JudgmentMatrix;

fn main() -> anyhow::Result<()> {
    println!("r_mj   r_ij   r_mi   verdict");
    for (r_mj, r_ij, r_mi) in all_relation_triples() {
        let v = classify_triad(r_mj, r_ij, r_mi);
        let verdict = match (v.is_conflict(), v.required) {
            (true, Some(req)) => format!("conflict, r_ij must be {req}"),
            (false, Some(_)) => "consistent (forced)".to_string(),
            (_, None) => "consistent (free)".to_string(),
        };
        println!("{:<6} {:<6} {:<6} {verdict}", r_mj.as_str(), r_ij.as_str(), r_mi.as_str());
    }
    println!("{} of 27 combinations conflict\n", conflict_census());

    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/intransitive.json").to_string());
    let (m, _) = JudgmentMatrix::load(&path)?;
    let triads = full_matrix_audit(&m)?;
    println!("audit of {path}: {} conflicting triad(s)", triads.len());
    for t in triads {
        println!("  {t}");
    }
    Ok(())
}
