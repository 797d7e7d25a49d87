use bklr_core::cartan::{default_scalars, random_scalars, CartanDatum};
use bklr_core::polyrep::{oracle_vectors, Layout, Orientation, Rep};
use bklr_core::relations::{instances, sequences, vanishes, Family};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn check(datum: &CartanDatum, sc: &bklr_core::cartan::ScalarChoice, mmax: usize, d: u32) -> Vec<String> {
    let o = Orientation::default_for(datum);
    let rep = Rep::new(datum, sc, &o);
    let mut bad = Vec::new();
    for m in 1..=mmax {
        for bottom in sequences(datum.rank(), m) {
            let layout = Layout::new(&datum.weight_of(&bottom)).unwrap();
            let vs = oracle_vectors(&layout, d);
            for inst in instances(datum, sc, &bottom, 2) {
                if !vanishes(&rep, &inst, &vs).unwrap() {
                    bad.push(format!("{:?} {:?} {}", inst.family, bottom, inst.name));
                }
            }
        }
    }
    bad
}

#[test]
fn defining_relations_hold_small() {
    for datum in [CartanDatum::sl2(), CartanDatum::a1xa1(), CartanDatum::a2(), CartanDatum::b2()] {
        let bad = check(&datum, &default_scalars(&datum), 2, 4);
        assert!(bad.is_empty(), "{:?}: {:#?}", datum.labels, &bad[..bad.len().min(20)]);
    }
}

#[test]
fn random_scalars_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for datum in [CartanDatum::a1xa1(), CartanDatum::a2(), CartanDatum::b2()] {
        let sc = random_scalars(&datum, || rng.gen_range(-4..=4));
        let bad = check(&datum, &sc, 3, 3);
        assert!(bad.is_empty(), "{:?}: {:#?}", datum.labels, &bad[..bad.len().min(20)]);
    }
    let _ = Family::R2;
}
