//! Cross-module invariants: the coloring-composition pipeline certifies an
//! alphabet bound on random hypergraphs, search verdicts are monotone, and
//! edge successes are invariant under the symmetries that leave decoding
//! untouched.

use epcodes_core::codes::{rs_code, Code};
use epcodes_core::construct;
use epcodes_core::galois::{next_prime_power, FieldSpec};
use epcodes_core::hypergraph::{
    strong_chromatic, ChromaticStatus, ColorMode, Hypergraph, DEFAULT_NODE_BUDGET,
};
use epcodes_core::rational::ratio;
use epcodes_core::search::{hom_search, q_exact, Outcome, SearchLimits};
use epcodes_core::selftest::random_hypergraph;

use num::rational::BigRational;
use num::traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Composing an MDS base along an exact strong coloring yields an exactly
/// valid code, certifying that the alphabet never needs to exceed the
/// smallest prime power reaching the chromatic number.
#[test]
fn coloring_composition_pipeline_on_random_hypergraphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..50 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let n = rng.gen_range(k.max(3)..=12);
        let g = random_hypergraph(&mut rng, n, k, 35);
        let result = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        assert_eq!(result.status, ChromaticStatus::Exact, "trial {trial}");
        let chi = result.coloring.color_count();
        let base_len = chi.max(k);
        let q = next_prime_power(base_len as u64 - 1);
        let field = FieldSpec::new(q).unwrap();
        let base = rs_code(&field, base_len, k).unwrap();
        let composed = construct::compose(&g, &result.coloring, &base).unwrap();
        let cert = composed.verify_exact(&g).unwrap();
        assert!(cert.valid, "trial {trial}: composed code failed");
    }
}

/// Every found homomorphism converts into a code that passes exact
/// verification, and absence agrees with the exhaustive alphabet search.
#[test]
fn hom_search_agrees_with_code_existence() {
    let limits = SearchLimits::default();
    let zero = BigRational::zero();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..25 {
        let n = rng.gen_range(3..=6);
        let g = random_hypergraph(&mut rng, n, 2, 45);
        let result = hom_search(&g, 2, &zero, &limits).unwrap();
        match result.outcome {
            Outcome::Found(map) => {
                let code = construct::code_from_hom(&map, &g, &zero).unwrap();
                assert!(code.verify_exact(&g).unwrap().valid);
            }
            Outcome::Absent => {
                // the exhaustive search must agree there is no alphabet-2 code
                let verdict = q_exact(&g, &zero, 2, &limits).unwrap();
                assert!(matches!(verdict.outcome, Outcome::Absent));
            }
            Outcome::Unknown => panic!("budget should not be exhausted at n <= 6"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 24,
        ..ProptestConfig::default()
    })]

    /// Relaxing the tolerance never increases the minimum alphabet size, and
    /// adding edges never decreases it.
    #[test]
    fn q_exact_is_monotone(seed in 0u64..1 << 48) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let limits = SearchLimits::default();
        let zero = BigRational::zero();
        let n = rng.gen_range(3..=5);
        let g = random_hypergraph(&mut rng, n, 2, 50);

        let exact = q_exact(&g, &zero, 3, &limits).unwrap().outcome;
        let relaxed = q_exact(&g, &ratio(1, 4), 2, &limits).unwrap().outcome;
        if let (Outcome::Found((q_exact_val, _)), Outcome::Found((q_relaxed, _))) =
            (&exact, &relaxed)
        {
            prop_assert!(q_relaxed <= q_exact_val);
        }
        if matches!(relaxed, Outcome::Absent) {
            // an exact code over the same alphabet would also be eps-valid
            prop_assert!(!matches!(exact, Outcome::Found((2, _))));
        }

        // add one edge: the alphabet requirement cannot drop
        let mut edges: Vec<Vec<usize>> = g.edges().to_vec();
        let u = rng.gen_range(0..n);
        let v = (u + 1 + rng.gen_range(0..n - 1)) % n;
        if u != v {
            edges.push(vec![u.min(v), u.max(v)]);
            let bigger = Hypergraph::new(n, 2, edges).unwrap();
            let after = q_exact(&bigger, &zero, 3, &limits).unwrap().outcome;
            match (&exact, &after) {
                (Outcome::Found((before_q, _)), Outcome::Found((after_q, _))) => {
                    prop_assert!(after_q >= before_q);
                }
                (Outcome::Found(_), Outcome::Absent) => {} // grew beyond the cap
                (Outcome::Absent, Outcome::Found(_)) => {
                    prop_assert!(false, "supergraph found a code the subgraph lacked");
                }
                _ => {}
            }
        }
    }

    /// Edge success is invariant under relabeling messages and applying a
    /// fixed alphabet permutation per column.
    #[test]
    fn edge_success_invariances(seed in 0u64..1 << 48, q in 2usize..=3, n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = q * q;
        let table: Vec<Vec<u16>> = (0..rows)
            .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u16).collect())
            .collect();
        let code = Code::from_table(q, 2, table.clone()).unwrap();

        let mut message_perm: Vec<usize> = (0..rows).collect();
        for i in (1..rows).rev() {
            message_perm.swap(i, rng.gen_range(0..=i));
        }
        let column_perms: Vec<Vec<u16>> = (0..n)
            .map(|_| {
                let mut p: Vec<u16> = (0..q as u16).collect();
                for i in (1..q).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        let scrambled_rows: Vec<Vec<u16>> = (0..rows)
            .map(|r| {
                (0..n)
                    .map(|c| column_perms[c][table[message_perm[r]][c] as usize])
                    .collect()
            })
            .collect();
        let scrambled = Code::from_table(q, 2, scrambled_rows).unwrap();

        for i in 0..n {
            for j in i + 1..n {
                let edge = [i, j];
                prop_assert_eq!(
                    code.edge_success(&edge).unwrap(),
                    scrambled.edge_success(&edge).unwrap()
                );
            }
        }
    }

    /// Serialized hypergraphs and codes re-read as identical values.
    #[test]
    fn text_round_trips(seed in 0u64..1 << 48) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=8);
        let k = rng.gen_range(2..=n.min(3));
        let g = random_hypergraph(&mut rng, n, k, 40);
        prop_assert_eq!(Hypergraph::parse(&g.to_text()).unwrap(), g);

        let q = rng.gen_range(2..=4);
        let cols = rng.gen_range(1..=4);
        let rows = q * q;
        let table: Vec<Vec<u16>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.gen_range(0..q) as u16).collect())
            .collect();
        let code = Code::from_table(q, 2, table).unwrap();
        prop_assert_eq!(Code::parse(&code.to_text()).unwrap(), code);
    }
}
