use atlas_core::coxeter::orbit_closure;
use atlas_core::ekor::{i_set, supp_sigma};
use atlas_core::siegel::SiegelContext;
use atlas_core::{AffineWeylGroup, ExtAffineElement, NodeSubset};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn element(grp: &AffineWeylGroup, word: &[usize], omega: &ExtAffineElement) -> ExtAffineElement {
    let n = grp.num_nodes();
    let w: Vec<usize> = word.iter().map(|&i| i % n).collect();
    grp.mul(&grp.word_element(&w), omega)
}

fn omegas(c: &SiegelContext) -> Vec<ExtAffineElement> {
    let tau = c.adm().tau().clone();
    vec![c.group().identity(), c.group().inv(&tau), tau]
}

#[test]
fn support_ignores_descent_choice() {
    let mut rng = StdRng::seed_from_u64(7);
    for g in 1..=3 {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        for x in c.adm().elements() {
            let greedy = grp.reduced_word(x);
            for _ in 0..100 / g {
                let red = grp.reduced_word_with(x, |d| *d.choose(&mut rng).unwrap());
                assert_eq!(red.word.len(), greedy.word.len());
                assert_eq!(red.omega, greedy.omega);
                let raw: NodeSubset = red.word.iter().copied().collect();
                assert_eq!(raw, supp_sigma(grp, x).raw);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn length_of_inverse_and_products(g in 1usize..4, a in prop::collection::vec(0usize..8, 0..8), b in prop::collection::vec(0usize..8, 0..8), o in 0usize..3) {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        let om = &omegas(&c)[o];
        let x = element(grp, &a, om);
        let y = element(grp, &b, &grp.identity());
        prop_assert_eq!(grp.length(&grp.inv(&x)), grp.length(&x));
        let lxy = grp.length(&grp.mul(&x, &y));
        prop_assert!(lxy <= grp.length(&x) + grp.length(&y));
        prop_assert!(grp.length(&x) <= lxy + grp.length(&y));
        prop_assert_eq!(grp.kottwitz(&grp.mul(&x, &y)), grp.kottwitz(&x));
    }

    #[test]
    fn reduced_word_reconstructs(g in 1usize..4, a in prop::collection::vec(0usize..8, 0..10), o in 0usize..3) {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        let x = element(grp, &a, &omegas(&c)[o]);
        let red = grp.reduced_word(&x);
        prop_assert_eq!(red.word.len(), grp.length(&x));
        prop_assert_eq!(grp.length(&red.omega), 0);
        prop_assert_eq!(grp.mul(&grp.word_element(&red.word), &red.omega), x);
    }

    #[test]
    fn supp_sigma_closure_is_stable(g in 1usize..5, a in prop::collection::vec(0usize..8, 0..10), o in 0usize..3) {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        let x = element(grp, &a, &omegas(&c)[o]);
        let s = supp_sigma(grp, &x);
        let frob = grp.twisted_frobenius(&x);
        prop_assert!(s.raw.is_subset(s.closure));
        prop_assert_eq!(frob.image(s.closure), s.closure);
        prop_assert_eq!(orbit_closure(&frob, s.closure), s.closure);
        prop_assert_eq!(s.is_finite, grp.diagram().is_finite_parabolic(s.closure));
    }

    #[test]
    fn i_set_is_greatest_stable(g in 1usize..4, k in 0u64..16, a in prop::collection::vec(0usize..8, 0..8), o in 0usize..3) {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        let x = element(grp, &a, &omegas(&c)[o]);
        let k = NodeSubset::from_bits(k).intersection(grp.all_nodes());
        let i = i_set(grp, k, &x);
        prop_assert!(i.is_subset(k));
        for s in i.iter() {
            let t = atlas_core::ekor::twisted_conjugate_node(grp, &x, s);
            prop_assert!(t.is_some_and(|t| i.contains(t)));
        }
        prop_assert_eq!(i_set(grp, i, &x), i);
    }

    #[test]
    fn bruhat_is_compatible_with_length(g in 1usize..3, i in 0usize..13, j in 0usize..13) {
        let c = SiegelContext::new(g).unwrap();
        let grp = c.group();
        let els = c.adm().elements();
        let (x, y) = (&els[i % els.len()], &els[j % els.len()]);
        if grp.bruhat_leq(x, y) {
            prop_assert!(grp.length(x) <= grp.length(y));
            if grp.bruhat_leq(y, x) {
                prop_assert_eq!(x, y);
            }
        }
    }
}
