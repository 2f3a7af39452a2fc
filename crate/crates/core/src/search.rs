//! Exhaustive oracles for the minimum alphabet size on tiny instances:
//! homomorphism search into the universal graphs for k = 2, and generic
//! column-assignment backtracking for k >= 3.

use num::rational::BigRational;
use num::traits::Zero;
use thiserror::Error;

use crate::codes::{Code, CodeError};
use crate::construct::{self, ConstructError};
use crate::hypergraph::{Hypergraph, HypergraphError};
use crate::universal::{
    self, UniversalError, UniversalGraph, UniversalVertex, VertexFamily,
};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("homomorphism search needs a k = 2 hypergraph, got k = {0}")]
    NotGraph(usize),
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Caps keeping the exhaustive searches tractable.
#[derive(Debug, Clone)]
pub struct SearchLimits {
    /// Search-tree node budget shared by each individual search.
    pub node_budget: u64,
    /// Largest target alphabet for exact homomorphism search (balanced
    /// vertices).
    pub hom_q_exact: usize,
    /// Largest target alphabet for error-tolerant homomorphism search
    /// (unrestricted vertices).
    pub hom_q_eps: usize,
    /// Caps for the k >= 3 column-assignment search.
    pub assign_max_n: usize,
    pub assign_max_q: usize,
    pub assign_max_k: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: 10_000_000,
            hom_q_exact: 3,
            hom_q_eps: 2,
            assign_max_n: 5,
            assign_max_q: 2,
            assign_max_k: 3,
        }
    }
}

/// A search verdict: `Unknown` (budget exhausted) is explicitly distinct
/// from `Absent`.
#[derive(Debug, Clone)]
pub enum Outcome<T> {
    Found(T),
    Absent,
    Unknown,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

#[derive(Debug)]
pub struct HomSearchResult {
    pub outcome: Outcome<Vec<UniversalVertex>>,
    pub nodes: u64,
}

/// Searches for a homomorphism from the k = 2 hypergraph `g` into the
/// universal graph at alphabet `q` (balanced vertices for `eps = 0`,
/// unrestricted otherwise). Presence is equivalent to the existence of a
/// code for `g` over alphabet q at error `eps`.
///
/// Symmetry breaking: alphabet and coordinate permutations act as
/// automorphisms of the target, so the first assigned vertex ranges over one
/// representative per orbit (a single sorted vector for balanced targets,
/// one vector per count-partition for unrestricted ones). Vertex order is
/// descending degree with ties by id; value order is target enumeration
/// order.
pub fn hom_search(
    g: &Hypergraph,
    q: usize,
    eps: &BigRational,
    limits: &SearchLimits,
) -> Result<HomSearchResult, SearchError> {
    if g.k() != 2 {
        return Err(SearchError::NotGraph(g.k()));
    }
    let exact = eps.is_zero();
    let target: TargetGraph = if exact {
        if q > limits.hom_q_exact {
            return Err(SearchError::CapExceeded(format!(
                "exact homomorphism targets are capped at q <= {}, got q = {q}",
                limits.hom_q_exact
            )));
        }
        TargetGraph::Shared(universal::gq_graph(q)?)
    } else {
        if q > limits.hom_q_eps {
            return Err(SearchError::CapExceeded(format!(
                "error-tolerant homomorphism targets are capped at q <= {}, got q = {q}",
                limits.hom_q_eps
            )));
        }
        let vertices = universal::enumerate_vertices(q, VertexFamily::Unrestricted)?;
        TargetGraph::Owned(UniversalGraph::build(vertices, eps.clone())?)
    };
    let target = target.get();

    let first_reps = if exact {
        vec![0] // the sorted balanced vector is lexicographically first
    } else {
        unrestricted_orbit_reps(q)
    };

    let n = g.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));

    let words = target.words_per_row();
    let full_row = vec![u64::MAX; words];
    let mut search = HomSearch {
        adj: &adj,
        order: &order,
        target,
        first_reps: &first_reps,
        assignment: vec![usize::MAX; n],
        cand: vec![full_row; n],
        nodes: 0,
        budget: limits.node_budget,
        aborted: false,
    };
    let found = search.run(0);
    let outcome = if found {
        let map: Vec<UniversalVertex> = search
            .assignment
            .iter()
            .map(|&t| target.vertices()[t].clone())
            .collect();
        // re-verify before reporting
        for e in g.edges() {
            if !universal::gq_adjacent(&map[e[0]], &map[e[1]], eps)? {
                return Err(SearchError::CapExceeded(
                    "internal error: reported map is not a homomorphism".into(),
                ));
            }
        }
        Outcome::Found(map)
    } else if search.aborted {
        Outcome::Unknown
    } else {
        Outcome::Absent
    };
    Ok(HomSearchResult {
        outcome,
        nodes: search.nodes,
    })
}

enum TargetGraph {
    Shared(&'static UniversalGraph),
    Owned(UniversalGraph),
}

impl TargetGraph {
    fn get(&self) -> &UniversalGraph {
        match self {
            TargetGraph::Shared(g) => g,
            TargetGraph::Owned(g) => g,
        }
    }
}

/// One unrestricted vector per orbit of (alphabet x coordinate)
/// permutations: the sorted vector of each symbol-count partition.
fn unrestricted_orbit_reps(q: usize) -> Vec<usize> {
    let len = q * q;
    let mut reps = Vec::new();
    let mut partition = Vec::new();
    partitions_rec(len, q, len, &mut partition, &mut reps, q);
    reps.sort_unstable();
    reps
}

fn partitions_rec(
    remaining: usize,
    slots: usize,
    max_part: usize,
    acc: &mut Vec<usize>,
    out: &mut Vec<usize>,
    q: usize,
) {
    if remaining == 0 {
        // sorted vector: acc[0] zeros, then acc[1] ones, ...
        let mut index = 0usize;
        for (symbol, &count) in acc.iter().enumerate() {
            for _ in 0..count {
                index = index * q + symbol;
            }
        }
        // skipped slots contribute nothing; vector length is fixed by acc sum
        out.push(index);
        return;
    }
    if slots == 0 {
        return;
    }
    let cap = max_part.min(remaining);
    // non-increasing parts, largest first; every position must be filled
    for part in (1..=cap).rev() {
        if part * slots < remaining {
            break;
        }
        acc.push(part);
        partitions_rec(remaining - part, slots - 1, part, acc, out, q);
        acc.pop();
    }
}

struct HomSearch<'a> {
    adj: &'a [Vec<usize>],
    order: &'a [usize],
    target: &'a UniversalGraph,
    first_reps: &'a [usize],
    assignment: Vec<usize>,
    cand: Vec<Vec<u64>>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl HomSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        if self.nodes >= self.budget {
            self.aborted = true;
            return false;
        }
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        if self.adj[v].is_empty() {
            // isolated vertices are unconstrained; fix them deterministically
            self.assignment[v] = 0;
            if self.run(depth + 1) {
                return true;
            }
            self.assignment[v] = usize::MAX;
            return false;
        }
        let candidates: Vec<usize> = if depth == 0 {
            self.first_reps.to_vec()
        } else {
            iter_bits(&self.cand[v], self.target.len())
        };
        for t in candidates {
            if depth == 0 && !bit_set(&self.cand[v], t) {
                continue;
            }
            if self.assign(v, t, depth) {
                return true;
            }
            if self.aborted {
                return false;
            }
        }
        false
    }

    fn assign(&mut self, v: usize, t: usize, depth: usize) -> bool {
        let mut trail: Vec<(usize, Vec<u64>)> = Vec::new();
        self.assignment[v] = t;
        let row = self.target.adjacency_row(t).to_vec();
        let mut dead = false;
        for &w in &self.adj[v] {
            if self.assignment[w] != usize::MAX {
                if !self.target.adjacent(t, self.assignment[w]) {
                    dead = true;
                    break;
                }
                continue;
            }
            trail.push((w, self.cand[w].clone()));
            for (cell, mask) in self.cand[w].iter_mut().zip(&row) {
                *cell &= mask;
            }
            if self.cand[w].iter().all(|&x| x == 0) {
                dead = true;
                break;
            }
        }
        let ok = !dead && self.run(depth + 1);
        if !ok {
            for (w, bits) in trail {
                self.cand[w] = bits;
            }
            self.assignment[v] = usize::MAX;
        }
        ok
    }
}

fn bit_set(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn iter_bits(bits: &[u64], len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in bits.iter().enumerate() {
        let mut word = word;
        while word != 0 {
            let b = word.trailing_zeros() as usize;
            let idx = w * 64 + b;
            if idx < len {
                out.push(idx);
            }
            word &= word - 1;
        }
    }
    out
}

// --- q_exact ------------------------------------------------------------------

#[derive(Debug)]
pub struct QExactResult {
    pub outcome: Outcome<(usize, Code)>,
    pub nodes: u64,
}

/// The smallest alphabet size in `[2, q_max]` admitting a valid code for `g`
/// at error `eps`, with a re-verified witness code.
///
/// k = 2 instances go through [`hom_search`]; k >= 3 instances run a
/// column-assignment backtracking over canonical columns. Absence is only
/// certified within the caps; asking beyond them errors out.
pub fn q_exact(
    g: &Hypergraph,
    eps: &BigRational,
    q_max: usize,
    limits: &SearchLimits,
) -> Result<QExactResult, SearchError> {
    let mut nodes = 0;
    let cap = if g.k() == 2 {
        if eps.is_zero() {
            limits.hom_q_exact
        } else {
            limits.hom_q_eps
        }
    } else {
        if g.n() > limits.assign_max_n || g.k() > limits.assign_max_k {
            return Err(SearchError::CapExceeded(format!(
                "column-assignment search is capped at n <= {}, k <= {}",
                limits.assign_max_n, limits.assign_max_k
            )));
        }
        limits.assign_max_q
    };
    for q in 2..=q_max.min(cap) {
        let outcome = if g.k() == 2 {
            let result = hom_search(g, q, eps, limits)?;
            nodes += result.nodes;
            match result.outcome {
                Outcome::Found(map) => {
                    let code = construct::code_from_hom(&map, g, eps)?;
                    Some(code)
                }
                Outcome::Absent => None,
                Outcome::Unknown => {
                    return Ok(QExactResult {
                        outcome: Outcome::Unknown,
                        nodes,
                    })
                }
            }
        } else {
            let result = assign_search(g, q, eps, limits.node_budget)?;
            nodes += result.1;
            match result.0 {
                Outcome::Found(code) => Some(code),
                Outcome::Absent => None,
                Outcome::Unknown => {
                    return Ok(QExactResult {
                        outcome: Outcome::Unknown,
                        nodes,
                    })
                }
            }
        };
        if let Some(code) = outcome {
            // soundness: the witness must pass the matching verifier
            let cert = if eps.is_zero() {
                code.verify_exact(g)?
            } else {
                code.verify_eps(g, eps)?
            };
            if !cert.valid {
                return Err(SearchError::CapExceeded(
                    "internal error: witness failed re-verification".into(),
                ));
            }
            return Ok(QExactResult {
                outcome: Outcome::Found((q, code)),
                nodes,
            });
        }
    }
    if q_max > cap {
        return Err(SearchError::CapExceeded(format!(
            "cannot certify absence beyond q = {cap} (asked for q_max = {q_max})"
        )));
    }
    Ok(QExactResult {
        outcome: Outcome::Absent,
        nodes,
    })
}

/// Column-assignment backtracking for k >= 3: each vertex gets a column
/// function `[q]^k -> [q]`, restricted to canonical columns (first
/// occurrences relabeled 0, 1, 2, ...) since per-column alphabet
/// permutations preserve every edge success.
fn assign_search(
    g: &Hypergraph,
    q: usize,
    eps: &BigRational,
    budget: u64,
) -> Result<(Outcome<Code>, u64), SearchError> {
    let k = g.k();
    let rows = q.pow(k as u32);
    let candidates = canonical_columns(q, rows);
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));

    // minimum number of distinct full tuples an edge must reach
    let threshold = {
        use num::traits::ToPrimitive;
        let full = BigRational::from_integer(rows.into());
        let needed = (BigRational::from_integer(1.into()) - eps) * &full;
        needed.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
    };

    let mut state = AssignSearch {
        g,
        q,
        rows,
        candidates: &candidates,
        order: &order,
        columns: vec![None; g.n()],
        threshold,
        nodes: 0,
        budget,
        aborted: false,
    };
    let found = state.run(0);
    let outcome = if found {
        let columns: Vec<Vec<u16>> = state
            .columns
            .iter()
            .map(|c| c.clone().expect("complete assignment"))
            .collect();
        Outcome::Found(Code::from_columns(q, k, &columns)?)
    } else if state.aborted {
        Outcome::Unknown
    } else {
        Outcome::Absent
    };
    Ok((outcome, state.nodes))
}

/// All canonical columns: restricted growth strings of the given length
/// over at most q symbols.
fn canonical_columns(q: usize, len: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(len);
    fn rec(q: usize, len: usize, next: u16, prefix: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        let limit = next.min(q as u16 - 1);
        for s in 0..=limit {
            prefix.push(s);
            rec(q, len, next.max(s + 1), prefix, out);
            prefix.pop();
        }
    }
    rec(q, len, 0, &mut prefix, &mut out);
    out
}

struct AssignSearch<'a> {
    g: &'a Hypergraph,
    q: usize,
    rows: usize,
    candidates: &'a [Vec<u16>],
    order: &'a [usize],
    columns: Vec<Option<Vec<u16>>>,
    /// minimum distinct full tuples per edge
    threshold: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl AssignSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        self.nodes += 1;
        if self.nodes >= self.budget {
            self.aborted = true;
            return false;
        }
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for cand in self.candidates {
            self.columns[v] = Some(cand.clone());
            if self.edges_feasible(v) && self.run(depth + 1) {
                return true;
            }
            self.columns[v] = None;
            if self.aborted {
                return false;
            }
        }
        false
    }

    /// Upper-bounds the final distinct-tuple count of every edge through v:
    /// each partially observed tuple class can split into at most
    /// q^(unassigned) full tuples.
    fn edges_feasible(&self, v: usize) -> bool {
        'edges: for edge in self.g.edges() {
            if !edge.contains(&v) {
                continue;
            }
            let assigned: Vec<&Vec<u16>> = edge
                .iter()
                .filter_map(|&u| self.columns[u].as_ref())
                .collect();
            if assigned.is_empty() {
                continue 'edges;
            }
            let unassigned = edge.len() - assigned.len();
            let split_cap = self.q.pow(unassigned as u32);
            let mut class_sizes: std::collections::HashMap<Vec<u16>, usize> =
                std::collections::HashMap::new();
            for r in 0..self.rows {
                let key: Vec<u16> = assigned.iter().map(|c| c[r]).collect();
                *class_sizes.entry(key).or_insert(0) += 1;
            }
            let bound: usize = class_sizes
                .values()
                .map(|&size| size.min(split_cap))
                .sum();
            if bound < self.threshold {
                return false;
            }
        }
        true
    }
}
