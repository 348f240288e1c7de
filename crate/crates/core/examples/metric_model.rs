//! Classifying, factoring and lifting maps in the metric model structure.

use lawvere::model::{classify, factorize, failing_square, solve_lift, Axiom, Generator, LiftOutcome, ModelId};
use lawvere::{ExtNN, Space, SpaceMap};

fn main() {
    let pair = Space::indiscernible_pair();
    let line = Space::from_fn(vec!["u".into(), "v".into()], |i, j| {
        ExtNN::from_int(if i == j { 0 } else { 2 })
    })
    .unwrap();
    let collapse = SpaceMap::to_point(&pair);
    let inclusion = SpaceMap::constant(&Space::point(), &line, 0);

    for (name, f) in [("collapse", &collapse), ("inclusion", &inclusion)] {
        println!("{name}: {:?}", classify(f, ModelId::Metric).unwrap());
        for axiom in [Axiom::M4, Axiom::M5] {
            let fac = factorize(f, ModelId::Metric, axiom).unwrap();
            println!("  {axiom:?} through {:?}", fac.mid.objects());
        }
    }

    match failing_square(&collapse, Generator::Delta).unwrap() {
        Some(sq) => {
            println!("collapse fails to lift against I -> *");
            println!("  solver confirms no lift: {}", matches!(solve_lift(&sq), LiftOutcome::NoLift));
        }
        None => println!("collapse lifts against I -> *"),
    }
}
