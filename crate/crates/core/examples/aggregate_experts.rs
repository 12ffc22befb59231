// Three simulated experts complete a study through the service; their
// weights are averaged with 95% t intervals.
//
//     cargo run --example aggregate_experts

use pairwise::session::NextPair;
use pairwise::service::Service;
use pairwise::simulation::{SimulatedExpert, TrueWeights};
use pairwise::weights::WeightMethod;
use pairwise::ComparisonScale;

fn main() -> anyhow::Result<()> {
    let svc = Service::in_memory();
    let labels: Vec<String> = ["range", "cost", "weight", "noise", "warranty"].map(String::from).to_vec();
    let study = svc.create_study(labels.clone(), ComparisonScale::Saaty9)?;
    let truth = TrueWeights::from_raw(&[5.0, 8.0, 2.0, 1.0, 3.0])?;

    for seed in 0..3 {
        let expert = SimulatedExpert { truth: truth.clone(), scale: ComparisonScale::Saaty9, slip_prob: 0.0, seed };
        let sid = svc.create_session(&study.id, &format!("expert-{seed}"))?;
        // each expert shades the ratios a little differently
        let bias = [1.0, 1.3, 0.8][seed as usize];
        while let NextPair::Pair(p) = svc.next_pair(&sid)? {
            let t = truth.as_slice();
            let v = pairwise::simulation::quantize_ratio((t[p.i] / t[p.j]).powf(bias), expert.scale);
            if !svc.submit_judgment(&sid, v)?.is_accepted() {
                let pending = svc.snapshot(&sid)?.pending().cloned().unwrap();
                let fix = expert.scale.values().into_iter().find(|x| pending.admissible.contains(&x.relation())).unwrap();
                svc.submit_revision(&sid, pending.pair, fix)?;
            }
        }
        println!("expert-{seed}: CR {:.4}", svc.session_results(&sid)?.cr);
    }

    let agg = svc.study_aggregate(&study.id, 0.95, WeightMethod::Approx)?;
    let hw = agg.half_width.clone().unwrap_or_default();
    println!("k = {}, level = {}", agg.k, agg.level);
    for (k, label) in labels.iter().enumerate() {
        println!("  {label:<10} {:.4} +/- {:.4}   (truth {:.4})", agg.mean_w[k], hw[k], truth.as_slice()[k]);
    }
    Ok(())
}
