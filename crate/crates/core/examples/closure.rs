//! Builds a weighted graph, closes it into a Lawvere metric space and
//! collapses indiscernible points.

use lawvere::space::closure;
use lawvere::{ExtNN, WeightedGraph};

fn main() {
    let names = ["home", "work", "gym", "park"].map(String::from).to_vec();
    let mut g = WeightedGraph::new(names).expect("distinct names");
    g.add_named_edge("home", "work", ExtNN::ratio(5, 2)).unwrap();
    g.add_named_edge("work", "gym", ExtNN::from_int(1)).unwrap();
    g.add_named_edge("gym", "home", ExtNN::ratio(1, 2)).unwrap();
    g.add_named_edge("gym", "park", ExtNN::zero()).unwrap();
    g.add_named_edge("park", "gym", ExtNN::zero()).unwrap();

    let s = closure(&g);
    println!("{s:?}");
    println!("symmetric: {}, gaunt: {}", s.is_symmetric(), s.is_gaunt());

    let (q, collapse) = s.gaunt_quotient();
    println!("quotient has {} points: {:?}", q.len(), q.objects());
    for (from, to) in collapse.named_assignment() {
        println!("  {from} -> {to}");
    }
    println!("opposite:\n{:?}", s.opposite());
}
