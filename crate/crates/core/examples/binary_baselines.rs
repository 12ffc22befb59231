// Win counts for one expert and Thurstone scale values pooled over three.
//
//     cargo run --example binary_baselines

use pairwise::baselines::{c_frequencies, preference_intensities, thurstone_scale, BinaryComparisonMatrix, ThurstoneOptions};

fn main() -> anyhow::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let experts: Vec<BinaryComparisonMatrix> = (1..=3)
        .map(|k| BinaryComparisonMatrix::load(format!("{dir}/binary{k}.json")))
        .collect::<Result<_, _>>()?;
    let labels = experts[0].labels().to_vec();

    let c = c_frequencies(&experts[0])?;
    println!("expert 1 wins:");
    for &k in &c.ranking {
        println!("  {:<10} {}", labels[k], c.c[k]);
    }

    let p = preference_intensities(&experts)?;
    let s = thurstone_scale(&p, ThurstoneOptions::default())?;
    println!("pooled over {} experts (p clamped to [1/2k, 1-1/2k]):", p.k);
    for (label, v) in labels.iter().zip(&s) {
        println!("  {label:<10} {v:.4}");
    }
    Ok(())
}
