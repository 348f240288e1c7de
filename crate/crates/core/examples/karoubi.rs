//! Idempotent splitting, Karoubi envelopes and the Karoubian model structure.

use lawvere::karoubi::{
    classify_karoubian, envelope, factorize_karoubian_m4, factorize_karoubian_m5, functor_flags, idem,
    idempotents, sigma, split_idempotent,
};

fn main() {
    let c = idem();
    for e in idempotents(&c) {
        let s = split_idempotent(&c, e).unwrap();
        println!("{} splits in C: {}", c.morphism_name(e), s.is_some());
    }

    let env = envelope(&c);
    println!("envelope objects: {:?}", env.cat.objects());
    for e in idempotents(&env.cat) {
        println!("  {} splits: {}", env.cat.morphism_name(e), split_idempotent(&env.cat, e).unwrap().is_some());
    }
    println!("inclusion: {:?}", functor_flags(&env.inclusion));

    let f = sigma();
    println!("sigma: {:?}", classify_karoubian(&f));
    let m5 = factorize_karoubian_m5(&f);
    let m4 = factorize_karoubian_m4(&f);
    println!("M5 middle: {:?}", m5.mid.objects());
    println!("M4 middle: {:?}", m4.mid.objects());
}
