//! The Cauchy and Cauchy-metric model structures on symmetric spaces.

use lawvere::model::{classify, factorize, has_rlp_against, iota_seq_condition, Axiom, Generator, ModelId};
use lawvere::{ExtNN, Space, SpaceMap};

fn main() {
    let near = Space::from_fn(vec!["x".into(), "x'".into(), "y".into()], |i, j| match (i.min(j), i.max(j)) {
        _ if i == j => ExtNN::zero(),
        (0, 1) => ExtNN::zero(),
        _ => ExtNN::from_int(1),
    })
    .unwrap();
    let f = SpaceMap::new(Space::point(), near.clone(), vec![0]).unwrap();

    for m in [ModelId::Cauchy, ModelId::CauchyMetric] {
        let c = classify(&f, m).unwrap();
        println!("{m}: weq {} cof {} fib {}", c.is_weq, c.is_cof, c.is_fib);
        let fac = factorize(&f, m, Axiom::M5).unwrap();
        println!("  M5 through {} points", fac.mid.len());
    }

    let g = SpaceMap::to_point(&near);
    println!("near -> *: iota condition {}", iota_seq_condition(&g).unwrap());
    for depth in 3..=5 {
        println!("  lifts against depth {depth}: {}", has_rlp_against(&g, Generator::IotaSeq(depth)).unwrap());
    }
}
