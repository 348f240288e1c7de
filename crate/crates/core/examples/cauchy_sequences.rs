//! Eventually periodic Cauchy sequences, their limits and the completion of
//! the dyadic sequence space.

use lawvere::cauchy::{are_equivalent, diagonal_limit, ell, extend_to_seqbar, iterated_limit, limits, EPSeq};
use lawvere::space::{seq_distance, seq_space};
use lawvere::{ExtNN, Space, SpaceMap};

fn main() {
    let s = Space::from_fn(["p", "p'", "q"].map(String::from).to_vec(), |i, j| {
        if i == j || i + j == 1 {
            ExtNN::zero()
        } else {
            ExtNN::from_int(3)
        }
    })
    .unwrap();

    let a = EPSeq::new(s.clone(), vec![2, 2], vec![0, 1]).unwrap();
    let b = EPSeq::new(s.clone(), vec![], vec![1]).unwrap();
    println!("a is Cauchy: {}, limits {:?}", a.is_cauchy(), limits(&a).unwrap());
    println!("a ~ b: {}", are_equivalent(&a, &b).unwrap());
    println!("ell(a) == ell(b): {}", ell(&a).unwrap() == ell(&b).unwrap());

    let c = EPSeq::constant(s.clone(), 2).unwrap();
    println!("lim_m lim_n d(a_m, c_n) = {:?}", iterated_limit(&a, &c).map(|v| v.to_string()));
    println!("lim_n d(a_n, c_n)       = {:?}", diagonal_limit(&a, &c).map(|v| v.to_string()));

    println!("Seq distances from 0: {:?}", (0..6).map(|n| seq_distance(0, n).to_string()).collect::<Vec<_>>());
    let target = Space::from_fn(vec!["x".into(), "y".into()], |i, j| {
        if i == j { ExtNN::zero() } else { ExtNN::ratio(1, 4) }
    })
    .unwrap();
    let f = SpaceMap::new(seq_space(4), target, vec![0, 0, 1, 1]).unwrap();
    for t in 0..2 {
        match extend_to_seqbar(&f, t) {
            Ok(g) => println!("extends with lim -> {}: {:?}", f.cod().name(t), g.named_assignment()),
            Err(e) => println!("cannot send lim to {}: {e}", f.cod().name(t)),
        }
    }
}
