//! The built-in verification suite behind `epcodes selftest`: every check
//! reruns one of the headline certificates from scratch and reports a
//! pass/fail verdict with details.

use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codes::{self, Code};
use crate::construct;
use crate::galois::FieldSpec;
use crate::hypergraph::{
    strong_chromatic, validate_coloring, ChromaticStatus, ColorMode, Hypergraph,
    DEFAULT_NODE_BUDGET, DEFAULT_PG_VERTEX_CAP,
};
use crate::rational::{self, ratio};
use crate::search::{self, Outcome, SearchLimits};
use crate::universal::{self, CoverFamily, UniversalVertex, VertexFamily};

/// Outcome of one acceptance check.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

struct Check {
    id: usize,
    name: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Check {
    fn new(id: usize, name: &'static str) -> Self {
        Check {
            id,
            name,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn expect(&mut self, condition: bool, message: impl Into<String>) {
        if !condition {
            self.failures.push(message.into());
        }
    }

    fn note(&mut self, message: impl Into<String>) {
        self.notes.push(message.into());
    }

    fn finish(mut self) -> CheckOutcome {
        let passed = self.failures.is_empty();
        let mut details = std::mem::take(&mut self.failures);
        details.extend(self.notes);
        CheckOutcome {
            id: self.id,
            name: self.name,
            passed,
            details,
        }
    }
}

fn run_check(
    id: usize,
    name: &'static str,
    body: impl FnOnce(&mut Check) -> Result<(), String>,
) -> CheckOutcome {
    let mut check = Check::new(id, name);
    if let Err(error) = body(&mut check) {
        check.failures.push(format!("error: {error}"));
    }
    check.finish()
}

fn err_str<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs the whole suite; the seed drives the randomized agreement checks.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        check_fano_instance(),
        check_error_tolerant_fixtures(),
        check_mds_baselines(),
        check_universal_small_q(),
        check_covers(),
        check_average_error(),
        check_oracle_agreement(seed),
        check_property_suites(seed),
    ]
}

/// 1: the line-complement instance has 28 edges, its binary linear code is
/// exactly valid, and the strong chromatic number is exactly 7.
pub fn check_fano_instance() -> CheckOutcome {
    run_check(1, "fano-instance", |check| {
        let g = Hypergraph::fano_complement();
        check.expect(g.edge_count() == 28, format!("edges {} != 28", g.edge_count()));
        let fx = codes::fixture("fano").ok_or("missing fano fixture")?;
        let cert = fx.code.verify_exact(&g).map_err(err_str)?;
        check.expect(cert.valid, "fano code is not exactly valid");
        let result = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        check.expect(
            result.status == ChromaticStatus::Exact,
            "chromatic search did not complete",
        );
        check.expect(
            result.coloring.color_count() == 7,
            format!("chromatic number {} != 7", result.coloring.color_count()),
        );
        check.expect(
            validate_coloring(&g, &result.coloring),
            "returned coloring is not strong-valid",
        );
        Ok(())
    })
}

/// 2: the embedded q = 3, 4, 6 codes verify at exactly their stated error
/// tolerances on the complete graphs of matching size.
pub fn check_error_tolerant_fixtures() -> CheckOutcome {
    run_check(2, "error-tolerant-fixtures", |check| {
        let expectations = [
            ("q3-n20", 190usize, ratio(1, 3)),
            ("q4-n7", 21, ratio(1, 4)),
            ("q6-n6", 15, ratio(1, 6)),
        ];
        for (name, edges, eps) in expectations {
            let fx = codes::fixture(name).ok_or_else(|| format!("missing fixture {name}"))?;
            check.expect(
                fx.hypergraph.edge_count() == edges,
                format!("{name}: edge count {} != {edges}", fx.hypergraph.edge_count()),
            );
            check.expect(fx.epsilon == eps, format!("{name}: unexpected epsilon"));
            let cert = fx.code.verify_eps(&fx.hypergraph, &eps).map_err(err_str)?;
            check.expect(cert.valid, format!("{name}: verification failed"));
            if let Some(min) = cert.witness_success {
                check.note(format!("{name} min_success {}", rational::format(&min)));
            }
        }
        Ok(())
    })
}

/// 3: Reed-Solomon baselines achieve block length q + 1 exactly.
pub fn check_mds_baselines() -> CheckOutcome {
    run_check(3, "mds-baselines", |check| {
        let f19 = FieldSpec::new(19).map_err(err_str)?;
        let code = codes::rs_code(&f19, 20, 2).map_err(err_str)?;
        let g = Hypergraph::complete(20, 2).map_err(err_str)?;
        let cert = code.verify_exact(&g).map_err(err_str)?;
        check.expect(cert.valid, "GF(19) length-20 code failed exact verification");
        check.expect(cert.edges_checked == 190, "expected 190 edges");
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = FieldSpec::new(q).map_err(err_str)?;
            let n = q as usize + 1;
            let code = codes::rs_code(&f, n, 2).map_err(err_str)?;
            let g = Hypergraph::complete(n, 2).map_err(err_str)?;
            let cert = code.verify_exact(&g).map_err(err_str)?;
            check.expect(cert.valid, format!("GF({q}) length-{n} code failed"));
        }
        Ok(())
    })
}

/// 4: the balanced universal graph at q = 2 has chromatic number exactly 3;
/// at q = 3 the canonical cover colors it with 6 colors and an MDS clique
/// gives the lower bound 4.
pub fn check_universal_small_q() -> CheckOutcome {
    run_check(4, "universal-small-q", |check| {
        let g2 = universal::gq_graph(2).map_err(err_str)?;
        check.expect(g2.len() == 6, "balanced q=2 vertex count != 6");
        let as_hypergraph = g2.to_hypergraph().map_err(err_str)?;
        let result = strong_chromatic(&as_hypergraph, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        check.expect(
            result.status == ChromaticStatus::Exact && result.coloring.color_count() == 3,
            format!("chromatic number of q=2 graph: {}", result.coloring.color_count()),
        );

        let g3 = universal::gq_graph(3).map_err(err_str)?;
        check.expect(g3.len() == 1680, "balanced q=3 vertex count != 1680");
        let cover = universal::canonical_cover(3, CoverFamily::Gq).map_err(err_str)?;
        check.expect(cover.len() == 6, "canonical cover size != 6");
        let coloring = universal::coloring_from_cover(&cover, g3.vertices()).map_err(err_str)?;
        check.expect(coloring.color_count() <= 6, "cover used more than 6 colors");
        let mut classes: Vec<Vec<usize>> = vec![Vec::new(); coloring.color_count()];
        for (v, &c) in coloring.colors().iter().enumerate() {
            classes[c].push(v);
        }
        let mut conflicts = 0usize;
        for class in &classes {
            for (a, &i) in class.iter().enumerate() {
                for &j in &class[a + 1..] {
                    if g3.adjacent(i, j) {
                        conflicts += 1;
                    }
                }
            }
        }
        check.expect(conflicts == 0, format!("{conflicts} adjacent same-color pairs"));

        let f3 = FieldSpec::new(3).map_err(err_str)?;
        let clique =
            universal::clique_from_mds(&codes::rs_code(&f3, 4, 2).map_err(err_str)?)
                .map_err(err_str)?;
        check.expect(clique.len() == 4, "expected a 4-clique");
        for i in 0..clique.len() {
            for j in i + 1..clique.len() {
                let adjacent =
                    universal::gq_adjacent(&clique[i], &clique[j], &BigRational::zero())
                        .map_err(err_str)?;
                check.expect(adjacent, format!("clique pair ({i},{j}) not adjacent"));
            }
        }
        check.note("bracket: 4 <= chromatic number of balanced q=3 graph <= 6".to_string());
        Ok(())
    })
}

/// 5: the canonical covers of the permutation and cyclic families yield
/// complete, valid colorings at their stated sizes.
pub fn check_covers() -> CheckOutcome {
    run_check(5, "canonical-covers", |check| {
        // permutation blocks at q = 3, exact adjacency
        let vertices = universal::enumerate_vertices(3, VertexFamily::PermBlocks).map_err(err_str)?;
        check.expect(vertices.len() == 216, "perm-block q=3 count != 216");
        let cover = universal::canonical_cover(3, CoverFamily::Hq).map_err(err_str)?;
        let coloring = universal::coloring_from_cover(&cover, &vertices).map_err(err_str)?;
        check.expect(coloring.color_count() == 3, "expected a 3-coloring");
        let ok = universal::validate_universal_coloring(&vertices, &coloring, &BigRational::zero())
            .map_err(err_str)?;
        check.expect(ok, "perm-block 3-coloring invalid");

        // cyclic blocks at eps = 1/q
        for (q, colors) in [(4usize, 16usize), (5, 25)] {
            let vertices =
                universal::enumerate_vertices(q, VertexFamily::CyclicShifts).map_err(err_str)?;
            let cover = universal::canonical_cover(q, CoverFamily::HqCyclicEps).map_err(err_str)?;
            let coloring = universal::coloring_from_cover(&cover, &vertices).map_err(err_str)?;
            check.expect(
                coloring.color_count() == colors,
                format!("cyclic q={q}: expected {colors} colors"),
            );
            let eps = BigRational::new(1.into(), (q as i64).into());
            let ok = universal::validate_universal_coloring(&vertices, &coloring, &eps)
                .map_err(err_str)?;
            check.expect(ok, format!("cyclic q={q} coloring invalid"));
        }

        // permutation blocks at eps = 1/3: the 18-set cover is complete and
        // valid
        let vertices = universal::enumerate_vertices(3, VertexFamily::PermBlocks).map_err(err_str)?;
        let cover = universal::canonical_cover(3, CoverFamily::HqEps).map_err(err_str)?;
        check.expect(cover.len() == 18, "expected 18 sets");
        let coloring = universal::coloring_from_cover(&cover, &vertices).map_err(err_str)?;
        let ok = universal::validate_universal_coloring(&vertices, &coloring, &ratio(1, 3))
            .map_err(err_str)?;
        check.expect(ok, "18-set cover coloring invalid");
        Ok(())
    })
}

/// 6: the average-error clique construction attains its closed-form bound.
pub fn check_average_error() -> CheckOutcome {
    run_check(6, "average-error", |check| {
        let code = construct::average_error_code(2, 6).map_err(err_str)?;
        let g = Hypergraph::complete(6, 2).map_err(err_str)?;
        let cert = code.verify_avg(&g, &ratio(1, 3)).map_err(err_str)?;
        check.expect(cert.valid, "p=2, n=6 failed at tolerance 1/3");
        check.expect(
            cert.average_success == Some(ratio(9, 10)),
            "p=2, n=6 average is not exactly 9/10",
        );
        check.expect(
            ratio(9, 10) >= construct::average_error_lower_bound(2, 6),
            "average below the closed-form bound",
        );

        for p in [2u64, 3, 5] {
            let tolerance = BigRational::new(1.into(), (p as i64 + 1).into());
            let floor = BigRational::one() - &tolerance;
            for n in 2..=20usize {
                let code = construct::average_error_code(p, n).map_err(err_str)?;
                let g = Hypergraph::complete(n, 2).map_err(err_str)?;
                let cert = code.verify_avg(&g, &tolerance).map_err(err_str)?;
                let avg = cert.average_success.clone().ok_or("missing average")?;
                check.expect(cert.valid, format!("p={p}, n={n}: verification failed"));
                check.expect(avg >= floor, format!("p={p}, n={n}: below 1 - 1/(p+1)"));
                check.expect(
                    avg >= construct::average_error_lower_bound(p, n),
                    format!("p={p}, n={n}: below the closed-form bound"),
                );
            }
        }
        Ok(())
    })
}

/// 7: the exhaustive searches agree with the constructions, and the
/// hom/code duality round-trips on random exactly-valid codes.
pub fn check_oracle_agreement(seed: u64) -> CheckOutcome {
    run_check(7, "oracle-agreement", |check| {
        let limits = SearchLimits::default();
        let zero = BigRational::zero();
        let cycle = |n: usize| {
            Hypergraph::new(n, 2, (0..n).map(|i| vec![i, (i + 1) % n])).expect("cycle")
        };
        let expectations = [
            ("K3", Hypergraph::complete(3, 2).map_err(err_str)?, 2usize),
            ("K4", Hypergraph::complete(4, 2).map_err(err_str)?, 3),
            ("C4", cycle(4), 2),
            ("C5", cycle(5), 2),
        ];
        for (name, g, expected) in expectations {
            let result = search::q_exact(&g, &zero, 3, &limits).map_err(err_str)?;
            match result.outcome {
                Outcome::Found((q, code)) => {
                    check.expect(q == expected, format!("{name}: q = {q}, expected {expected}"));
                    let cert = code.verify_exact(&g).map_err(err_str)?;
                    check.expect(cert.valid, format!("{name}: witness invalid"));
                }
                _ => check.expect(false, format!("{name}: no witness found")),
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for trial in 0..100 {
            let (code, g) = random_valid_code(&mut rng, 8).map_err(err_str)?;
            let map = universal::hom_from_code(&code, &g, &zero).map_err(err_str)?;
            for e in g.edges() {
                let adjacent =
                    universal::gq_adjacent(&map[e[0]], &map[e[1]], &zero).map_err(err_str)?;
                check.expect(adjacent, format!("trial {trial}: map breaks edge {e:?}"));
            }
            let back = construct::code_from_hom(&map, &g, &zero).map_err(err_str)?;
            for e in g.edges() {
                let lhs = code.edge_success(e).map_err(err_str)?;
                let rhs = back.edge_success(e).map_err(err_str)?;
                check.expect(
                    lhs == rhs,
                    format!("trial {trial}: edge {e:?} success changed"),
                );
            }
        }
        Ok(())
    })
}

/// 8: exhaustive small-scale property sweeps (field axioms, canonical-set
/// independence, the cyclic adjacency shortcut, the collision formula, and
/// normalized-column colorings).
pub fn check_property_suites(seed: u64) -> CheckOutcome {
    run_check(8, "property-suites", |check| {
        // field axioms, every supported field with q <= 64
        for q in [
            2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47,
            49, 53, 59, 61, 64,
        ] {
            let f = FieldSpec::new(q).map_err(err_str)?;
            if let Err(msg) = field_axioms_hold(&f) {
                check.expect(false, format!("GF({q}): {msg}"));
            }
        }

        // canonical independent sets: exhaustive at q = 2, sampled at q = 3
        let g2 = universal::gq_graph(2).map_err(err_str)?;
        for set in universal::canonical_cover(2, CoverFamily::Gq).map_err(err_str)? {
            let members: Vec<usize> = (0..g2.len())
                .filter(|&i| set.contains(&g2.vertices()[i]).unwrap_or(false))
                .collect();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    check.expect(!g2.adjacent(i, j), format!("q=2 set {set} not independent"));
                }
            }
        }
        let g3 = universal::gq_graph(3).map_err(err_str)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        for set in universal::canonical_cover(3, CoverFamily::Gq).map_err(err_str)? {
            let members: Vec<usize> = (0..g3.len())
                .filter(|&i| set.contains(&g3.vertices()[i]).unwrap_or(false))
                .collect();
            for _ in 0..300 {
                let i = members[rng.gen_range(0..members.len())];
                let j = members[rng.gen_range(0..members.len())];
                if i != j {
                    check.expect(!g3.adjacent(i, j), format!("q=3 set {set} not independent"));
                }
            }
        }

        // full member sets of the block-structured covers are independent
        let h3 = universal::enumerate_vertices(3, VertexFamily::PermBlocks).map_err(err_str)?;
        for (cover, vertices, eps) in [
            (
                universal::canonical_cover(3, CoverFamily::Hq).map_err(err_str)?,
                &h3,
                BigRational::zero(),
            ),
            (
                universal::canonical_cover(3, CoverFamily::HqEps).map_err(err_str)?,
                &h3,
                ratio(1, 3),
            ),
        ] {
            for set in cover {
                let members: Vec<&UniversalVertex> = vertices
                    .iter()
                    .filter(|v| set.contains(v).unwrap_or(false))
                    .collect();
                for (a, u) in members.iter().enumerate() {
                    for v in &members[a + 1..] {
                        let adjacent = universal::gq_adjacent(u, v, &eps).map_err(err_str)?;
                        check.expect(!adjacent, format!("set {set} not independent"));
                    }
                }
            }
        }
        for q in [3usize, 4, 5] {
            let vertices =
                universal::enumerate_vertices(q, VertexFamily::CyclicShifts).map_err(err_str)?;
            let eps = BigRational::new(1.into(), (q as i64).into());
            for set in universal::canonical_cover(q, CoverFamily::HqCyclicEps).map_err(err_str)? {
                let members: Vec<&UniversalVertex> = vertices
                    .iter()
                    .filter(|v| set.contains(v).unwrap_or(false))
                    .collect();
                for (a, u) in members.iter().enumerate() {
                    for v in &members[a + 1..] {
                        let adjacent = universal::gq_adjacent(u, v, &eps).map_err(err_str)?;
                        check.expect(!adjacent, format!("cyclic q={q} set {set} not independent"));
                    }
                }
            }
        }

        // cyclic-shortcut adjacency equals definitional adjacency, q <= 4
        for q in [3usize, 4] {
            let vertices =
                universal::enumerate_vertices(q, VertexFamily::CyclicShifts).map_err(err_str)?;
            let eps = BigRational::new(1.into(), (q as i64).into());
            for (a, u) in vertices.iter().enumerate() {
                for v in &vertices[a + 1..] {
                    let shortcut = universal::gq_adjacent(u, v, &eps).map_err(err_str)?;
                    let ud = UniversalVertex::dense(q, u.expanded().into_owned())
                        .map_err(err_str)?;
                    let vd = UniversalVertex::dense(q, v.expanded().into_owned())
                        .map_err(err_str)?;
                    let definitional = universal::gq_adjacent(&ud, &vd, &eps).map_err(err_str)?;
                    if shortcut != definitional {
                        check.expect(false, format!("shortcut mismatch at q={q}"));
                    }
                }
            }
        }

        // collision probability formula against exhaustive enumeration
        for (n, k) in [(2u64, 2u64), (3, 3)] {
            let vertices =
                universal::enumerate_vertices(k as usize, VertexFamily::Balanced).map_err(err_str)?;
            let hits = vertices
                .iter()
                .filter(|v| v.expanded()[0] == v.expanded()[1])
                .count();
            let expected =
                universal::balanced_collision_probability(n, k).map_err(err_str)?;
            let observed = ratio(hits as i64, vertices.len() as i64);
            check.expect(
                observed == expected,
                format!("collision formula mismatch at (n,k)=({n},{k})"),
            );
        }

        // normalized-column colorings from valid linear codes are valid
        let fano = codes::fixture("fano").ok_or("missing fano fixture")?;
        let coloring = codes::normalized_column_coloring(&fano.code, &fano.hypergraph)
            .map_err(err_str)?;
        check.expect(
            validate_coloring(&fano.hypergraph, &coloring),
            "fano normalized coloring invalid",
        );
        for q in [3u64, 5, 7] {
            let f = FieldSpec::new(q).map_err(err_str)?;
            let n = q as usize + 1;
            let code = codes::rs_code(&f, n, 2).map_err(err_str)?;
            let g = Hypergraph::complete(n, 2).map_err(err_str)?;
            let coloring = codes::normalized_column_coloring(&code, &g).map_err(err_str)?;
            check.expect(
                validate_coloring(&g, &coloring),
                format!("GF({q}) normalized coloring invalid"),
            );
            check.expect(
                coloring.color_count() <= q as usize + 1,
                format!("GF({q}) normalized coloring uses too many colors"),
            );
        }
        let f3 = FieldSpec::new(3).map_err(err_str)?;
        let pg_code = construct::pg_linear_code(&f3, 2, DEFAULT_PG_VERTEX_CAP).map_err(err_str)?;
        let pg = Hypergraph::pg(&f3, 2, DEFAULT_PG_VERTEX_CAP).map_err(err_str)?;
        let coloring = codes::normalized_column_coloring(&pg_code, &pg).map_err(err_str)?;
        check.expect(validate_coloring(&pg, &coloring), "pg normalized coloring invalid");
        Ok(())
    })
}

fn field_axioms_hold(f: &FieldSpec) -> Result<(), String> {
    let q = f.q();
    for a in 0..q {
        if f.add(a, 0) != a || f.mul(a, 1) != a {
            return Err(format!("identity fails at {a}"));
        }
        if f.add(a, f.neg(a)) != 0 {
            return Err(format!("negation fails at {a}"));
        }
        if a != 0 {
            let inv = f.inv(a).map_err(|e| e.to_string())?;
            if f.mul(a, inv) != 1 {
                return Err(format!("inverse fails at {a}"));
            }
            if f.pow(a, q - 1) != 1 {
                return Err(format!("group order fails at {a}"));
            }
        }
    }
    for a in 0..q {
        for b in 0..q {
            if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                return Err(format!("commutativity fails at ({a},{b})"));
            }
            for c in 0..q {
                if f.add(f.add(a, b), c) != f.add(a, f.add(b, c)) {
                    return Err(format!("additive associativity fails at ({a},{b},{c})"));
                }
                if f.mul(f.mul(a, b), c) != f.mul(a, f.mul(b, c)) {
                    return Err(format!("multiplicative associativity fails at ({a},{b},{c})"));
                }
                if f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c)) {
                    return Err(format!("distributivity fails at ({a},{b},{c})"));
                }
            }
        }
    }
    Ok(())
}

// --- Seeded instance generators ------------------------------------------------

/// A random k-uniform hypergraph: every k-subset is an edge independently
/// with probability `percent`/100.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, k: usize, percent: u32) -> Hypergraph {
    let edges: Vec<Vec<usize>> = crate::hypergraph::combinations(n, k)
        .into_iter()
        .filter(|_| rng.gen_ratio(percent, 100))
        .collect();
    Hypergraph::new(n, k, edges).expect("generated edges are well formed")
}

/// A random exactly-valid k = 2 code along with its hypergraph: a random map
/// into the balanced universal graph pulled back to a code, then scrambled
/// by per-column alphabet permutations and a message relabeling (both
/// preserve every edge success).
pub fn random_valid_code(
    rng: &mut ChaCha8Rng,
    max_n: usize,
) -> Result<(Code, Hypergraph), String> {
    let q: usize = if rng.gen_bool(0.5) { 2 } else { 3 };
    let vertices = universal::enumerate_vertices(q, VertexFamily::Balanced).map_err(err_str)?;
    let zero = BigRational::zero();
    loop {
        let n = rng.gen_range(2..=max_n);
        let map: Vec<UniversalVertex> = (0..n)
            .map(|_| vertices[rng.gen_range(0..vertices.len())].clone())
            .collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if universal::gq_adjacent(&map[i], &map[j], &zero).map_err(err_str)? {
                    edges.push(vec![i, j]);
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let g = Hypergraph::new(n, 2, edges).map_err(err_str)?;
        let base = construct::code_from_hom(&map, &g, &zero).map_err(err_str)?;

        // scramble without touching edge successes
        let rows = base.message_count() as usize;
        let mut message_perm: Vec<usize> = (0..rows).collect();
        shuffle(rng, &mut message_perm);
        let mut columns = Vec::with_capacity(n);
        for v in 0..n {
            let column = base.column(v).map_err(err_str)?;
            let mut alphabet: Vec<u16> = (0..q as u16).collect();
            shuffle(rng, &mut alphabet);
            let scrambled: Vec<u16> = (0..rows)
                .map(|r| alphabet[column[message_perm[r]] as usize])
                .collect();
            columns.push(scrambled);
        }
        let code = Code::from_columns(q, 2, &columns).map_err(err_str)?;
        return Ok((code, g));
    }
}

fn shuffle<T>(rng: &mut ChaCha8Rng, data: &mut [T]) {
    for i in (1..data.len()).rev() {
        let j = rng.gen_range(0..=i);
        data.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_valid_codes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let (code, g) = random_valid_code(&mut rng, 6).unwrap();
            assert!(code.verify_exact(&g).unwrap().valid);
        }
    }

    #[test]
    fn random_hypergraphs_are_well_formed() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let g = random_hypergraph(&mut rng, 8, 3, 40);
            assert_eq!(g.n(), 8);
            assert_eq!(g.k(), 3);
        }
    }
}
