//! Representable presheaves, presheaf distances and the dual test.

use lawvere::presheaf::{has_dual, presheaf_dist, yoneda, Presheaf};
use lawvere::{ExtNN, Space};

fn main() {
    let s = Space::from_fn(["a", "b", "c"].map(String::from).to_vec(), |i, j| {
        ExtNN::from_int(i.abs_diff(j) as u64)
    })
    .expect("a path metric");

    for x in 0..s.len() {
        for y in 0..s.len() {
            let d = presheaf_dist(&yoneda(&s, x), &yoneda(&s, y)).unwrap();
            print!("{:>4}", d.to_string());
        }
        println!();
    }

    let ya = yoneda(&s, 0);
    let v = has_dual(&ya);
    println!("y(a) has a dual: {} (min f+g = {})", v.has_dual, v.min_sum);

    let flat = Presheaf::new(s.clone(), vec![ExtNN::from_int(1); 3]).unwrap();
    let v = has_dual(&flat);
    let witness: Vec<String> = v.witness.iter().map(ToString::to_string).collect();
    println!("constant 1 has a dual: {} (candidate {witness:?}, min f+g = {})", v.has_dual, v.min_sum);
}
