// Experts who slip now and then, with and without real-time transitivity
// control.
//
//     cargo run --release --example control_effect [seed]

use pairwise::simulation::{control_effect_experiment, ControlConfig};

fn main() -> anyhow::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let r = control_effect_experiment(&ControlConfig { seed, ..Default::default() })?;
    print!("{}", r.summary());
    println!();
    print!("{}", r.to_csv());
    Ok(())
}
