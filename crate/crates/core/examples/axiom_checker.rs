//! Randomized checks of the model category axioms, as the `axioms` verb runs them.

use lawvere::karoubi::check_karoubian_axioms;
use lawvere::model::{check_axioms, ModelId};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let mut reports: Vec<_> = ModelId::ALL.iter().map(|&m| check_axioms(m, seed, 30, 5).unwrap()).collect();
    reports.push(check_karoubian_axioms(seed, 30, 3).unwrap());
    for r in &reports {
        println!("{} seed {seed}: {}", r.model, if r.all_pass() { "all pass" } else { "FAILURES" });
        for a in &r.results {
            println!("  {:<4} {:<5} checked {:>4} skipped {:>3}", a.axiom, a.pass, a.checked, a.skipped);
        }
    }
}
