// Reversing a single judgment: how much CI moves compared with the weights.
//
//     cargo run --release --example sensitivity

use pairwise::simulation::{flip_sensitivity, sensitivity_experiment, SensitivityConfig, SimulatedExpert, TrueWeights};
use pairwise::ComparisonScale;

fn main() -> anyhow::Result<()> {
    let truth = TrueWeights::from_raw(&[1.0, 2.0, 4.0, 7.0, 9.0, 3.0])?;
    let m = SimulatedExpert { truth, scale: ComparisonScale::Saaty9, slip_prob: 0.0, seed: 0 }.generate_matrix();
    println!("pair   CI before  CI after   rel dCI   max rel dw");
    for e in flip_sensitivity(&m)? {
        println!(
            "({},{})  {:>9.4}  {:>8.4}  {:>8.2}  {:>10.3}",
            e.pair.0 + 1,
            e.pair.1 + 1,
            e.ci_before,
            e.ci_after,
            e.rel_dci,
            e.max_rel_dw_approx
        );
    }
    println!();
    print!("{}", sensitivity_experiment(&SensitivityConfig::default())?.summary());
    Ok(())
}
