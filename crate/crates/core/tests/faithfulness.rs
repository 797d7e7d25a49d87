use bklr_core::basisrewrite::action_rank;
use bklr_core::cartan::{default_scalars, CartanDatum};
use bklr_core::polyrep::{Orientation, Rep};
use bklr_core::relations::sequences;

#[test]
fn basis_acts_independently() {
    for datum in [CartanDatum::sl2(), CartanDatum::a1xa1(), CartanDatum::a2(), CartanDatum::b2()] {
        let sc = default_scalars(&datum);
        let o = Orientation::default_for(&datum);
        let rep = Rep::new(&datum, &sc, &o);
        for m in 1..=2 {
            let seqs = sequences(datum.rank(), m);
            for i in &seqs {
                for j in &seqs {
                    if datum.weight_of(i) != datum.weight_of(j) {
                        continue;
                    }
                    let (n, r) = action_rank(&rep, i, j, 10, 6).unwrap();
                    assert_eq!(n, r, "{:?} {i:?} -> {j:?}", datum.labels);
                }
            }
        }
    }
}
