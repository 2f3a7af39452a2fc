//! The acceptance suite: one test per headline criterion, each printing a
//! pass/fail line (visible with `--nocapture`). The checks themselves live in
//! `epcodes_core::selftest` so the CLI selftest runs the same code; the
//! headline numbers are additionally pinned here.

use epcodes_core::codes::{self, Code};
use epcodes_core::construct;
use epcodes_core::galois::FieldSpec;
use epcodes_core::hypergraph::{
    strong_chromatic, ChromaticStatus, ColorMode, Hypergraph, DEFAULT_NODE_BUDGET,
};
use epcodes_core::rational::ratio;
use epcodes_core::selftest::{self, CheckOutcome};
use epcodes_core::universal::{self, CoverFamily, VertexFamily};

const SEED: u64 = 0;

fn report(outcome: &CheckOutcome) {
    let verdict = if outcome.passed { "PASS" } else { "FAIL" };
    println!("{verdict} criterion {}: {}", outcome.id, outcome.name);
    for detail in &outcome.details {
        println!("  {detail}");
    }
    assert!(outcome.passed, "criterion {} failed", outcome.id);
}

#[test]
fn criterion_1_fano_instance() {
    let g = Hypergraph::fano_complement();
    assert_eq!(g.edge_count(), 28);
    let result = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
    assert_eq!(result.coloring.color_count(), 7);
    assert_eq!(result.status, ChromaticStatus::Exact);
    report(&selftest::check_fano_instance());
}

#[test]
fn criterion_2_error_tolerant_fixtures() {
    // pinned: stated tolerances, edge counts, and exact verdicts
    for (name, eps, edges) in [
        ("q3-n20", ratio(1, 3), 190),
        ("q4-n7", ratio(1, 4), 21),
        ("q6-n6", ratio(1, 6), 15),
    ] {
        let fx = codes::fixture(name).expect("fixture exists");
        assert_eq!(fx.hypergraph.edge_count(), edges);
        let cert = fx.code.verify_eps(&fx.hypergraph, &eps).unwrap();
        assert!(cert.valid, "{name} at its stated tolerance");
    }
    report(&selftest::check_error_tolerant_fixtures());
}

#[test]
fn criterion_3_mds_baselines() {
    let f19 = FieldSpec::new(19).unwrap();
    let code = codes::rs_code(&f19, 20, 2).unwrap();
    let g = Hypergraph::complete(20, 2).unwrap();
    assert_eq!(g.edge_count(), 190);
    assert_eq!(code.message_count(), 361);
    assert!(code.verify_exact(&g).unwrap().valid);
    report(&selftest::check_mds_baselines());
}

#[test]
fn criterion_4_universal_small_q() {
    report(&selftest::check_universal_small_q());
}

#[test]
fn criterion_5_covers_validate() {
    // pinned: family sizes
    assert_eq!(
        universal::enumerate_vertices(3, VertexFamily::PermBlocks)
            .unwrap()
            .len(),
        216
    );
    assert_eq!(
        universal::enumerate_vertices(4, VertexFamily::CyclicShifts)
            .unwrap()
            .len(),
        256
    );
    assert_eq!(
        universal::enumerate_vertices(5, VertexFamily::CyclicShifts)
            .unwrap()
            .len(),
        3125
    );
    assert_eq!(
        universal::canonical_cover(3, CoverFamily::HqEps).unwrap().len(),
        18
    );
    report(&selftest::check_covers());
}

#[test]
fn criterion_6_average_error() {
    let code = construct::average_error_code(2, 6).unwrap();
    let g = Hypergraph::complete(6, 2).unwrap();
    let cert = code.verify_avg(&g, &ratio(1, 3)).unwrap();
    assert_eq!(cert.average_success, Some(ratio(9, 10)));
    assert_eq!(construct::average_error_lower_bound(2, 6), ratio(4, 5));
    assert!(ratio(9, 10) >= ratio(4, 5));
    report(&selftest::check_average_error());
}

#[test]
fn criterion_7_oracle_agreements() {
    report(&selftest::check_oracle_agreement(SEED));
}

#[test]
fn criterion_8_property_suites() {
    report(&selftest::check_property_suites(SEED));
}

/// The full suite exactly as the CLI runs it.
#[test]
fn selftest_run_all_passes() {
    let outcomes = selftest::run_all(SEED);
    assert_eq!(outcomes.len(), 8);
    for outcome in &outcomes {
        let verdict = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {}", outcome.id, outcome.name);
    }
    assert!(outcomes.iter().all(|o| o.passed));
}

/// Round-trip sanity shared with the CLI surface: serialized values
/// re-parse to identical values.
#[test]
fn file_round_trips_are_value_identical() {
    let g = Hypergraph::fano_complement();
    assert_eq!(Hypergraph::parse(&g.to_text()).unwrap(), g);
    for fx in codes::fixtures() {
        let text = fx.code.to_text();
        assert_eq!(Code::parse(&text).unwrap(), fx.code);
    }
}
