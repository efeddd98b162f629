mod common;

use common::{braids, corpus, corpus_upto, dense_homology};
use khbn::homology::{
    euler_characteristic, homology_of, reduced_over_basepoints, verify_triangle, verify_triangle_general, Bidegree,
};
use khbn::linkdiag::{bundled_table, kauffman_jones, LaurentPoly};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn one_plus_q_minus_2() -> LaurentPoly {
    LaurentPoly::from_terms([(0, 1), (-2, 1)])
}

#[test]
fn reduced_kh_of_left_trefoil() {
    let d = bundled_table().get("trefoil_L").unwrap().diagram.clone();
    let m = homology_of(&d, 1, true, Some(1)).unwrap();
    let want: BTreeMap<Bidegree, usize> = [((0, -1), 1), ((-2, -5), 1), ((-3, -7), 1)].into();
    assert_eq!(m.dims, want);
}

#[test]
fn reduced_bn2_of_left_trefoil() {
    let d = bundled_table().get("trefoil_L").unwrap().diagram.clone();
    let m = homology_of(&d, 2, true, Some(1)).unwrap();
    assert_eq!(m.total_dim(), 4);
    assert_eq!(m.u_rank(), 1);
    assert_eq!(m.summands[&(0, -1)], [(2, 1)].into());
    assert_eq!(m.summands[&(-2, -5)], [(1, 1)].into());
    assert_eq!(m.summands[&(-3, -9)], [(1, 1)].into());
    // not a u-multiple in H, yet filtration level 1
    assert_eq!(m.graded[&(-3, -9)], vec![0, 1]);
}

#[test]
fn kh_of_mirror_is_dual() {
    for (name, d) in corpus_upto(7) {
        for red in [false, true] {
            let bp = red.then(|| d.effective_basepoint());
            let a = homology_of(&d, 1, red, bp).unwrap();
            let b = homology_of(&d.mirror(), 1, red, bp).unwrap();
            // reduced groups sit one quantum step up, so duality fixes j = 1
            let c = if red { 2 } else { 0 };
            let flipped: BTreeMap<Bidegree, usize> = a.dims.iter().map(|(&(i, j), &x)| ((-i, c - j), x)).collect();
            assert_eq!(b.dims, flipped, "{name} reduced={red}");
        }
    }
}

#[test]
fn free_part_over_a_long_truncation() {
    // over F₂[u] the free rank is 2^c, or 2^{c−1} reduced
    for (name, d) in corpus_upto(6) {
        let c = d.component_count() as u32;
        let un = homology_of(&d, 6, false, None).unwrap();
        let red = homology_of(&d, 6, true, Some(d.effective_basepoint())).unwrap();
        assert_eq!(un.length_multiplicities().get(&6).copied().unwrap_or(0), 1 << c, "{name}");
        assert_eq!(red.length_multiplicities().get(&6).copied().unwrap_or(0), 1 << (c - 1), "{name}");
    }
}

#[test]
fn general_triangles() {
    for (name, d) in corpus_upto(6) {
        for (a, b) in [(1, 2), (2, 1), (1, 3)] {
            let r = verify_triangle_general(&d, false, a, b).unwrap();
            assert!(r.exact(), "{name} a={a} b={b}: {:?}", r.failures);
        }
    }
}

#[test]
fn decomposition_accounts_for_every_dimension() {
    for (name, d) in corpus() {
        let m = homology_of(&d, 3, false, None).unwrap();
        let mut from_summands: BTreeMap<Bidegree, usize> = BTreeMap::new();
        for (&(i, j), s) in &m.summands {
            for (&l, &c) in s {
                for t in 0..l as i64 {
                    *from_summands.entry((i, j - 2 * t)).or_insert(0) += c;
                }
            }
        }
        assert_eq!(from_summands, m.dims, "{name}");
        for (b, g) in &m.graded {
            assert_eq!(g.iter().sum::<usize>(), m.dims[b], "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sparse_equals_dense(d in braids(6), k in 1u32..=3, reduced in any::<bool>()) {
        let sparse = homology_of(&d, k, reduced, reduced.then(|| d.effective_basepoint())).unwrap();
        prop_assert_eq!(sparse, dense_homology(&d, k, reduced));
    }

    #[test]
    fn euler_identities(d in braids(8)) {
        let bn = homology_of(&d, 2, false, None).unwrap();
        let v = kauffman_jones(&d);
        prop_assert_eq!(euler_characteristic(&bn), &one_plus_q_minus_2() * &v);
        let kh = homology_of(&d, 1, false, None).unwrap();
        prop_assert_eq!(euler_characteristic(&kh), v);
    }

    #[test]
    fn splitting(d in braids(8)) {
        let un = homology_of(&d, 2, false, None).unwrap();
        let red = homology_of(&d, 2, true, Some(d.effective_basepoint())).unwrap();
        prop_assert_eq!(un, red.direct_sum(&red.shift_quantum(-2)));
    }

    #[test]
    fn basepoints(d in braids(6)) {
        let all = reduced_over_basepoints(&d, 2).unwrap();
        for (_, m) in &all {
            prop_assert_eq!(m, &all[0].1);
        }
    }

    #[test]
    fn triangle(d in braids(7), reduced in any::<bool>()) {
        let r = verify_triangle(&d, reduced).unwrap();
        prop_assert!(r.exact(), "{:?}", r.failures);
    }
}
