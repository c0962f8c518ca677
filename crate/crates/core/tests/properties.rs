//! Property tests over random finite spaces and posets.

use dualcheck_core::acceptance::random_poset;
use dualcheck_core::cornish::{
    e_functor, eval_e_cornish, eval_eps_cornish, CornishSpace, Polarity, Signature, Word,
};
use dualcheck_core::corpus::dual_document;
use dualcheck_core::ddp::ddp_simplicity_triple;
use dualcheck_core::engine::con_sub_duality_check;
use dualcheck_core::order::Poset;
use dualcheck_core::primality::{internal_sufficient, order_preserving_refutation, quasi_primal_pair, Outcome};
use dualcheck_core::text::{parse, render, Document, Structure};
use dualcheck_core::Guards;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random self-map of a naturally labelled poset that preserves
/// (`Plus`) or reverses (`Minus`) the order; constant if no attempt works.
fn random_map(rng: &mut impl Rng, p: &Poset, polarity: Polarity) -> Vec<usize> {
    let n = p.len();
    'attempt: for _ in 0..50 {
        let mut f: Vec<usize> = Vec::with_capacity(n);
        for x in 0..n {
            let candidates: Vec<usize> = (0..n)
                .filter(|&y| {
                    (0..x).all(|a| {
                        !p.lt(a, x)
                            || match polarity {
                                Polarity::Plus => p.leq(f[a], y),
                                Polarity::Minus => p.leq(y, f[a]),
                            }
                    })
                })
                .collect();
            if candidates.is_empty() {
                continue 'attempt;
            }
            f.push(candidates[rng.random_range(0..candidates.len())]);
        }
        return f;
    }
    vec![rng.random_range(0..n); n]
}

fn random_space(seed: u64, max_points: usize, symbols: usize) -> CornishSpace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_points);
    let p = random_poset(&mut rng, n).unwrap();
    let sig: Vec<(String, Polarity)> = (0..symbols)
        .map(|i| {
            let pol = if rng.random_bool(0.5) { Polarity::Plus } else { Polarity::Minus };
            (format!("f{i}"), pol)
        })
        .collect();
    let sig = Signature::new(sig).unwrap();
    let maps = (0..symbols)
        .map(|i| random_map(&mut rng, &p, sig.polarity(i)))
        .collect();
    CornishSpace::new(sig, p, maps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_maps_are_isomorphisms(seed in any::<u64>(), symbols in 0usize..3) {
        let g = Guards::default();
        let x = random_space(seed, 6, symbols);
        eval_eps_cornish(&x, &g).unwrap();
        let a = e_functor(&x, &g).unwrap().algebra;
        eval_e_cornish(&a, &g).unwrap();
    }

    #[test]
    fn documents_round_trip(seed in any::<u64>(), symbols in 0usize..3) {
        let g = Guards::default();
        let x = random_space(seed, 5, symbols);
        let doc = Document::numbered("S".to_string(), "x", Structure::Space(x)).unwrap();
        prop_assert_eq!(parse(&render(&doc)).unwrap(), doc.clone());
        let dual = dual_document(&doc, &g).unwrap();
        prop_assert_eq!(parse(&render(&dual)).unwrap(), dual);
    }

    #[test]
    fn congruences_match_substructures(seed in any::<u64>(), symbols in 1usize..3) {
        let g = Guards::default();
        let a = e_functor(&random_space(seed, 4, symbols), &g).unwrap().algebra;
        prop_assert!(con_sub_duality_check(&a, &g).unwrap().holds());
    }

    #[test]
    fn orbit_condition_implies_brute_force_yes(seed in any::<u64>()) {
        let g = Guards::default();
        let x = random_space(seed, 3, 2);
        if let Some(&minus) = x.sig().minus_symbols().first() {
            if internal_sufficient(std::slice::from_ref(&x), &Word::letter(minus)).unwrap().is_yes() {
                let a = e_functor(&x, &g).unwrap().algebra;
                prop_assert_eq!(quasi_primal_pair(&a, &a, &g).unwrap().outcome, Outcome::Yes);
            }
        }
    }

    #[test]
    fn plus_only_algebras_are_refuted(seed in any::<u64>(), symbols in 0usize..3) {
        let g = Guards::default();
        let x = random_space(seed, 5, symbols);
        let sig = Signature::new((0..symbols).map(|i| (format!("f{i}"), Polarity::Plus))).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let maps = (0..symbols).map(|_| random_map(&mut rng, x.poset(), Polarity::Plus)).collect();
        let plus = CornishSpace::new(sig, x.poset().clone(), maps).unwrap();
        let a = e_functor(&plus, &g).unwrap().algebra;
        prop_assert!(order_preserving_refutation(&a).is_some());
    }

    #[test]
    fn ddp_triple_components_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=5);
        let p = random_poset(&mut rng, n).unwrap();
        let t = ddp_simplicity_triple(&p, &Guards::default()).unwrap();
        prop_assert_eq!(t.simple, t.value);
        prop_assert_eq!(t.regular_and_indecomposable(), t.value);
        prop_assert_eq!(t.connected_all_extremal(), t.value);
    }
}
