use bklr_core::basisrewrite::graded_dimension;
use bklr_core::cartan::{CartanDatum, ParabolicDatum};
use bklr_core::qside::{quantum_integer, specialize, Verma};
use bklr_core::relations::sequences;
use bklr_core::series::{expand_inverse, GradedSeries, Laurent, Window};

fn parab(pairs: &[(usize, u32)]) -> ParabolicDatum {
    ParabolicDatum { n: pairs.iter().copied().collect() }
}

fn weights(rank: usize, total: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (0..=total).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.retain(|w| w.iter().sum::<usize>() <= total);
    out
}

#[test]
fn sl2_first_pairing() {
    // (Fv, Fv) = q^{-1} λ (λ - λ^{-1}) / (q - q^{-1})
    let sl2 = CartanDatum::sl2();
    let mut v = Verma::universal(&sl2);
    let num = &(&Laurent::lam_pow(1, 0, 2) - &Laurent::one(1)) * &Laurent::q_pow(1, -1);
    let den = &Laurent::q_pow(1, 1) - &Laurent::q_pow(1, -1);
    let expect = GradedSeries::Exact { num, den };
    assert_eq!(v.shapovalov(&[0], &[0]).exact_eq(&expect), Some(true));
    assert_eq!(v.numerator(&[], &[]), Laurent::one(1));
}

#[test]
fn mismatched_weights_pair_to_zero() {
    let a2 = CartanDatum::a2();
    let mut v = Verma::universal(&a2);
    assert!(v.numerator(&[0], &[1]).is_zero());
    assert!(v.numerator(&[0, 1], &[0, 0]).is_zero());
}

#[test]
fn symmetric() {
    for datum in [CartanDatum::sl2(), CartanDatum::a2(), CartanDatum::b2(), CartanDatum::a1xa1()] {
        let mut v = Verma::universal(&datum);
        for nu in weights(datum.rank(), 3) {
            let g = v.gram_numerators(&nu);
            for (a, row) in g.iter().enumerate() {
                for (b, x) in row.iter().enumerate() {
                    assert_eq!(x, &g[b][a], "{:?} {nu:?}", datum.labels);
                }
            }
        }
    }
}

#[test]
fn gram_examples() {
    let a2 = CartanDatum::a2();
    let mut v = Verma::universal(&a2);
    assert_eq!(v.gram_numerators(&[0, 0]), vec![vec![Laurent::one(2)]]);
    let g = v.gram_matrix(&[1, 1]);
    assert_eq!(g.len(), 2);
    assert_eq!(g[0][1].exact_eq(&g[1][0]), Some(true));
    assert_eq!(v.weight_dim(&[1, 1]), 2);

    let sl2 = CartanDatum::sl2();
    let mut u = Verma::universal(&sl2);
    for m in 0..=4 {
        assert_eq!(u.weight_dim(&[m]), 1);
    }
    let mut v1 = Verma::new(&sl2, &parab(&[(0, 1)]));
    assert!(v1.numerator(&[0, 0], &[0, 0]).is_zero());
    assert_eq!(v1.weight_dim(&[2]), 0);
    assert_eq!(v1.weight_dim(&[1]), 1);
    let mut v2 = Verma::new(&sl2, &parab(&[(0, 2)]));
    assert_eq!(v2.weight_dim(&[3]), 0);
    assert_eq!(v2.weight_dim(&[2]), 1);
}

#[test]
fn finite_dimensional_quotients() {
    // V(1,1) for A2 has weight spaces of dimensions 1, 1, 1, 2, 1, 1, 1
    let a2 = CartanDatum::a2();
    let mut v = Verma::new(&a2, &parab(&[(0, 1), (1, 1)]));
    let dims: Vec<usize> = [[0, 0], [1, 0], [0, 1], [1, 1], [2, 1], [1, 2], [2, 2], [2, 0], [3, 3]]
        .iter()
        .map(|nu| v.weight_dim(nu))
        .collect();
    assert_eq!(dims, vec![1, 1, 1, 2, 1, 1, 1, 0, 0]);
    // the parabolic Verma module with I_f = {1}, n_1 = 0, is free over F_2
    let mut p = Verma::new(&a2, &parab(&[(0, 0)]));
    assert_eq!(p.weight_dim(&[1, 0]), 0);
    assert_eq!(p.weight_dim(&[0, 3]), 1);
    assert_eq!(p.weight_dim(&[1, 1]), 1);
}

#[test]
fn serre_elements_pair_to_zero() {
    for datum in [CartanDatum::a2(), CartanDatum::b2()] {
        let mut v = Verma::universal(&datum);
        for (i, j) in [(0, 1), (1, 0)] {
            let core = (1 - datum.a(i, j)) as usize + 1;
            for extra in 0..=(4usize.saturating_sub(core)) {
                for split in 0..=extra {
                    for fill in sequences(datum.rank(), extra) {
                        let combo = v.serre_element(i, j, &fill[..split], &fill[split..]);
                        let nu = datum.weight_of(&combo[0].1);
                        for y in v.sequences(&nu) {
                            assert!(
                                v.pair_combination(&combo, &y).is_zero(),
                                "{:?} ({i},{j}) {fill:?} against {y:?}",
                                datum.labels
                            );
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn specialization_is_coherent() {
    for (datum, p) in [
        (CartanDatum::sl2(), parab(&[(0, 2)])),
        (CartanDatum::a2(), parab(&[(0, 1)])),
        (CartanDatum::b2(), parab(&[(1, 2)])),
        (CartanDatum::b2(), parab(&[(0, 1), (1, 0)])),
    ] {
        let mut u = Verma::universal(&datum);
        let mut s = Verma::new(&datum, &p);
        for nu in weights(datum.rank(), 3) {
            let a = u.gram_numerators(&nu);
            let b = s.gram_numerators(&nu);
            for (ra, rb) in a.iter().zip(&b) {
                for (x, y) in ra.iter().zip(rb) {
                    assert_eq!(&specialize(&datum, &p, x), y, "{:?} {nu:?}", datum.labels);
                }
            }
        }
    }
}

#[test]
fn quantum_integers() {
    assert_eq!(quantum_integer(1, 1, 0), Laurent::one(0));
    assert_eq!(quantum_integer(2, 1, 0), &Laurent::q_pow(0, 1) + &Laurent::q_pow(0, -1));
    assert!(quantum_integer(0, 1, 0).is_zero());
    assert_eq!(quantum_integer(-3, 2, 0), -&quantum_integer(3, 2, 0));
}

#[test]
fn exact_and_truncated_agree() {
    // 1/(q^{-1} - q) expands as q + q^3 + q^5 + …
    let p = &Laurent::q_pow(0, -1) - &Laurent::q_pow(0, 1);
    let w = Window::new(9);
    let inv = expand_inverse(&p, &w).unwrap();
    let mut expect = Laurent::zero(0);
    for k in [1, 3, 5, 7, 9] {
        expect = &expect + &Laurent::q_pow(0, k);
    }
    assert_eq!(inv, expect);
    let g = GradedSeries::Exact { num: Laurent::one(0), den: p };
    assert_eq!(g.expand(&w).unwrap(), expect);
}

#[test]
fn strands_pair_like_the_algebra() {
    for (datum, total) in [(CartanDatum::sl2(), 3), (CartanDatum::a2(), 2), (CartanDatum::b2(), 2)] {
        let mut v = Verma::universal(&datum);
        for nu in weights(datum.rank(), total) {
            let seqs = v.sequences(&nu);
            for i in &seqs {
                for j in &seqs {
                    let g = graded_dimension(&datum, i, j, true).unwrap();
                    assert_eq!(v.strand_pairing(i, j).exact_eq(&g), Some(true), "{:?} {i:?} {j:?}", datum.labels);
                }
            }
        }
    }
}
