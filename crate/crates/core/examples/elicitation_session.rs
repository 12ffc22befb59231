// One expert's session: pairs arrive in fill order, a judgment that breaks
// transitivity is refused, and the expert revises it.
//
//     cargo run --example elicitation_session

use pairwise::session::{NextPair, Outcome, Session};
use pairwise::{ComparisonScale, Ratio};

fn main() -> anyhow::Result<()> {
    let labels = ["comfort", "price", "safety", "style"].map(String::from).to_vec();
    let mut s = Session::new("demo", "cars", "alice", labels, ComparisonScale::default())?;
    let r = |n, d| Ratio::new(n, d).unwrap();

    // the last answer puts style above safety, but safety beats comfort
    // and comfort beats style
    let answers = [r(3, 1), r(1, 3), r(3, 1), r(1, 9), r(1, 3), r(1, 3)];
    for v in answers {
        let NextPair::Pair(p) = s.next_pair()? else { break };
        println!("{} vs {}: {}", p.label_i, p.label_j, s.scale().verbal(v).unwrap_or_default());
        if let Outcome::Conflict(c) = s.submit_judgment(v)? {
            for t in &c.triads {
                println!("  conflict {t}");
            }
            println!("  admissible: {:?}, may revise {:?}", c.admissible, c.candidates.0);
            // take the first admissible value, closest to 1 in log distance
            let fix = s
                .scale()
                .values()
                .into_iter()
                .filter(|x| c.admissible.contains(&x.relation()))
                .min_by(|a, b| a.value().ln().abs().total_cmp(&b.value().ln().abs()))
                .unwrap();
            println!("  revised to {fix}: {:?}", s.submit_revision(c.pair, fix)?.is_accepted());
        }
    }
    let w = s.results()?;
    println!("weights {:?}, CR {:.4}", w.w_approx.as_slice(), w.cr);
    println!("{} events logged, replay matches: {}", s.event_log().len(), s.replay()? == *s.matrix());
    Ok(())
}
