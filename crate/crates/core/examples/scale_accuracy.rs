// How closely slip-free judgments on each scale recover random integer
// truths.
//
//     cargo run --release --example scale_accuracy [trials]

use pairwise::simulation::{scale_accuracy_experiment, AccuracyConfig};

fn main() -> anyhow::Result<()> {
    let trials = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(100);
    for distinct in [false, true] {
        let r = scale_accuracy_experiment(&AccuracyConfig { trials, distinct, ..Default::default() })?;
        println!("truths drawn {}", if distinct { "without replacement" } else { "with replacement" });
        print!("{}", r.summary());
    }
    Ok(())
}
