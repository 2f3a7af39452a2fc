//! Erasure-pattern hypergraphs, builders for the standard families, and
//! strong-coloring solvers.
//!
//! Vertices are 1-based in files and reports, 0-based internally. Edges are
//! stored sorted ascending within each edge and lexicographically across
//! edges, deduplicated.

use thiserror::Error;

use crate::galois::{self, FieldSpec};

/// Default node budget for the exact coloring search.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Default cap on the vertex count of generated projective hypergraphs.
pub const DEFAULT_PG_VERTEX_CAP: usize = 512;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("uniformity k = {0} is too small (need k >= 2)")]
    UniformityTooSmall(usize),
    #[error("k = {k} exceeds the vertex count n = {n}")]
    KExceedsN { k: usize, n: usize },
    #[error("edge {edge:?} does not have exactly k = {k} distinct vertices in range")]
    BadEdge { edge: Vec<usize>, k: usize },
    #[error("instance too large: {n} vertices exceeds the cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A k-uniform hypergraph of decoding sets: vertices are codeword positions,
/// edges are recovery groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph from 0-based edges, sorting and deduplicating.
    pub fn new(
        n: usize,
        k: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::UniformityTooSmall(k));
        }
        let mut cleaned: Vec<Vec<usize>> = Vec::new();
        for mut edge in edges {
            edge.sort_unstable();
            let distinct = edge.windows(2).all(|w| w[0] != w[1]);
            if edge.len() != k || !distinct || edge.iter().any(|&v| v >= n) {
                return Err(HypergraphError::BadEdge { edge, k });
            }
            cleaned.push(edge);
        }
        cleaned.sort();
        cleaned.dedup();
        Ok(Hypergraph {
            n,
            k,
            edges: cleaned,
        })
    }

    /// The complete n-vertex k-uniform hypergraph: all C(n,k) k-subsets.
    pub fn complete(n: usize, k: usize) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::UniformityTooSmall(k));
        }
        if k > n {
            return Err(HypergraphError::KExceedsN { k, n });
        }
        Ok(Hypergraph {
            n,
            k,
            edges: combinations(n, k),
        })
    }

    /// The 7-vertex 3-uniform hypergraph whose edges are the 28 triples of
    /// points *not* forming lines of the Fano plane, under the labeling where
    /// vertex i carries the i-th column of the three generator vectors
    /// 0001111, 0111001, 1101100.
    pub fn fano_complement() -> Self {
        let cols = fano_columns();
        let mut edges = Vec::with_capacity(28);
        for triple in combinations(7, 3) {
            if cols[triple[0]] ^ cols[triple[1]] ^ cols[triple[2]] != 0 {
                edges.push(triple);
            }
        }
        Hypergraph { n: 7, k: 3, edges }
    }

    /// One vertex per normalized vector of F^k (leading nonzero entry 1),
    /// ordered lexicographically; edges are the k-sets of vertices whose
    /// vectors are linearly independent over F.
    pub fn pg(f: &FieldSpec, k: usize, vertex_cap: usize) -> Result<Self, HypergraphError> {
        if k < 2 {
            return Err(HypergraphError::UniformityTooSmall(k));
        }
        let vectors = normalized_vectors(f, k, vertex_cap)?;
        let n = vectors.len();
        let mut edges = Vec::new();
        for subset in combinations(n, k) {
            let rows: Vec<Vec<u64>> = subset.iter().map(|&v| vectors[v].clone()).collect();
            if galois::matrix_rank(&rows, f) == k {
                edges.push(subset);
            }
        }
        Ok(Hypergraph { n, k, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Membership test for a sorted 0-based edge.
    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        self.edges.binary_search_by(|e| e.as_slice().cmp(edge)).is_ok()
    }

    /// Number of edges containing v.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    pub fn is_isolated(&self, v: usize) -> bool {
        self.edges.iter().all(|e| !e.contains(&v))
    }

    /// The k=2 hypergraph on the same vertices where u,v are joined iff they
    /// co-occur in some edge. Strong coloring of `self` is exactly proper
    /// coloring of this graph.
    pub fn two_section(&self) -> Hypergraph {
        let mut pairs = Vec::new();
        for edge in &self.edges {
            for i in 0..edge.len() {
                for j in i + 1..edge.len() {
                    pairs.push(vec![edge[i], edge[j]]);
                }
            }
        }
        pairs.sort();
        pairs.dedup();
        Hypergraph {
            n: self.n,
            k: 2,
            edges: pairs,
        }
    }

    /// Parses the text format:
    ///
    /// ```text
    /// line 1: <n> <k>
    /// following lines: k space-separated 1-based vertex ids per edge
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges: Vec<Vec<usize>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match header {
                None => {
                    if fields.len() != 2 {
                        return Err(parse_err(line, "expected header `<n> <k>`"));
                    }
                    let n = parse_number(fields[0], line)?;
                    let k = parse_number(fields[1], line)?;
                    if k < 2 {
                        return Err(parse_err(line, format!("uniformity k = {k} must be >= 2")));
                    }
                    header = Some((n, k));
                }
                Some((n, k)) => {
                    if fields.len() != k {
                        return Err(parse_err(
                            line,
                            format!("expected {k} vertex ids, found {}", fields.len()),
                        ));
                    }
                    let mut edge = Vec::with_capacity(k);
                    for field in fields {
                        let v = parse_number(field, line)?;
                        if v == 0 || v > n {
                            return Err(parse_err(
                                line,
                                format!("vertex id {v} out of range 1..{n}"),
                            ));
                        }
                        edge.push(v - 1);
                    }
                    edge.sort_unstable();
                    if edge.windows(2).any(|w| w[0] == w[1]) {
                        return Err(parse_err(line, "repeated vertex in edge"));
                    }
                    edges.push(edge);
                }
            }
        }
        let (n, k) = header.ok_or_else(|| parse_err(1, "missing header `<n> <k>`"))?;
        Hypergraph::new(n, k, edges)
    }

    /// Inverse of [`Hypergraph::parse`]; deterministic byte output.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.k);
        for edge in &self.edges {
            let ids: Vec<String> = edge.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&ids.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> HypergraphError {
    HypergraphError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_number(field: &str, line: usize) -> Result<usize, HypergraphError> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("`{field}` is not a non-negative integer")))
}

/// The Fano-plane point labels as 3-bit column vectors.
fn fano_columns() -> [u8; 7] {
    let v1 = [0, 0, 0, 1, 1, 1, 1];
    let v2 = [0, 1, 1, 1, 0, 0, 1];
    let v3 = [1, 1, 0, 1, 1, 0, 0];
    let mut cols = [0u8; 7];
    for i in 0..7 {
        cols[i] = (v1[i] << 2) | (v2[i] << 1) | v3[i];
    }
    cols
}

/// All k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance odometer
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - (k - i) {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Normalized vectors of F^k (leading nonzero entry 1), lexicographic by
/// integer encoding.
pub fn normalized_vectors(
    f: &FieldSpec,
    k: usize,
    vertex_cap: usize,
) -> Result<Vec<Vec<u64>>, HypergraphError> {
    let q = f.q() as u128;
    let count = (q.pow(k as u32) - 1) / (q - 1);
    if count > vertex_cap as u128 {
        return Err(HypergraphError::TooLarge {
            n: count as usize,
            cap: vertex_cap,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut vector = vec![0u64; k];
    loop {
        let leading = vector.iter().find(|&&x| x != 0);
        if leading == Some(&1) {
            out.push(vector.clone());
        }
        // lexicographic odometer over [q]^k
        let mut i = k;
        loop {
            if i == 0 {
                debug_assert_eq!(out.len(), count as usize);
                return Ok(out);
            }
            i -= 1;
            if vector[i] + 1 < f.q() {
                vector[i] += 1;
                for cell in vector.iter_mut().skip(i + 1) {
                    *cell = 0;
                }
                break;
            }
        }
    }
}

// --- Coloring ---------------------------------------------------------------

/// A vertex-to-color assignment; colors are 0-based internally and 1-based in
/// reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(colors: Vec<usize>) -> Self {
        Coloring { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of colors, counted as (largest color index) + 1 so colors can
    /// directly index the columns of a base code.
    pub fn color_count(&self) -> usize {
        self.colors.iter().max().map_or(0, |&c| c + 1)
    }
}

/// True iff every edge is rainbow (all k colors pairwise distinct). A
/// coloring of the wrong length is not valid.
pub fn validate_coloring(g: &Hypergraph, coloring: &Coloring) -> bool {
    if coloring.len() != g.n() {
        return false;
    }
    let colors = coloring.colors();
    g.edges().iter().all(|edge| {
        let mut seen: Vec<usize> = edge.iter().map(|&v| colors[v]).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorMode {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChromaticStatus {
    /// The returned color count equals the strong chromatic number.
    Exact,
    /// Budget exhausted or greedy mode: only the bracket
    /// `lower_bound ..= color_count` is certified.
    BoundOnly,
}

#[derive(Debug, Clone)]
pub struct ChromaticResult {
    pub coloring: Coloring,
    pub lower_bound: usize,
    pub status: ChromaticStatus,
    /// Search-tree nodes consumed by the exact solver.
    pub nodes: u64,
}

/// Strong coloring by proper coloring of the 2-section.
///
/// Exact mode runs a DSATUR-ordered branch and bound (ties broken by lower
/// vertex id) seeded with a greedy clique of the 2-section as lower bound;
/// when the node budget runs out it degrades to `BoundOnly`. Greedy mode
/// colors in descending 2-section degree order only.
pub fn strong_chromatic(g: &Hypergraph, mode: ColorMode, budget: u64) -> ChromaticResult {
    let two = g.two_section();
    let n = two.n();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in two.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let matrix = AdjacencyMatrix::new(n, two.edges());

    let clique = greedy_clique(&adj, &matrix);
    let lower_bound = clique.len();
    let greedy = greedy_coloring(&adj);

    if mode == ColorMode::Greedy {
        let count = greedy.color_count();
        return ChromaticResult {
            status: if count == lower_bound {
                ChromaticStatus::Exact
            } else {
                ChromaticStatus::BoundOnly
            },
            coloring: greedy,
            lower_bound,
            nodes: 0,
        };
    }

    let mut search = ExactSearch {
        n,
        adj: &adj,
        assign: vec![usize::MAX; n],
        best_count: greedy.color_count(),
        best_assign: greedy.colors().to_vec(),
        lower_bound,
        nodes: 0,
        budget,
        aborted: false,
    };
    // Pre-color the clique: its vertices need pairwise distinct colors in any
    // solution, which breaks color-permutation symmetry.
    for (color, &v) in clique.iter().enumerate() {
        search.assign[v] = color;
    }
    if search.best_count > search.lower_bound {
        search.run(clique.len(), clique.len());
    }
    let completed = !search.aborted;
    let count = search
        .best_assign
        .iter()
        .max()
        .map_or(0, |&c| c + 1);
    ChromaticResult {
        coloring: Coloring::new(search.best_assign),
        lower_bound,
        status: if completed || count == lower_bound {
            ChromaticStatus::Exact
        } else {
            ChromaticStatus::BoundOnly
        },
        nodes: search.nodes,
    }
}

struct AdjacencyMatrix {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl AdjacencyMatrix {
    fn new(n: usize, edges: &[Vec<usize>]) -> Self {
        let words_per_row = n.div_ceil(64);
        let mut bits = vec![0u64; words_per_row * n];
        for e in edges {
            let (a, b) = (e[0], e[1]);
            bits[a * words_per_row + b / 64] |= 1 << (b % 64);
            bits[b * words_per_row + a / 64] |= 1 << (a % 64);
        }
        AdjacencyMatrix {
            words_per_row,
            bits,
        }
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.words_per_row + b / 64] >> (b % 64) & 1 == 1
    }
}

/// Greedily grown clique: scan in descending degree order (ties by id) and
/// keep vertices adjacent to everything collected so far.
fn greedy_clique(adj: &[Vec<usize>], matrix: &AdjacencyMatrix) -> Vec<usize> {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| matrix.adjacent(u, v)) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

fn greedy_coloring(adj: &[Vec<usize>]) -> Coloring {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    let mut colors = vec![usize::MAX; n];
    for v in order {
        let mut taken: Vec<usize> = adj[v]
            .iter()
            .filter(|&&u| colors[u] != usize::MAX)
            .map(|&u| colors[u])
            .collect();
        taken.sort_unstable();
        taken.dedup();
        let mut color = 0;
        for t in taken {
            if t == color {
                color += 1;
            } else if t > color {
                break;
            }
        }
        colors[v] = color;
    }
    Coloring::new(colors)
}

struct ExactSearch<'a> {
    n: usize,
    adj: &'a [Vec<usize>],
    assign: Vec<usize>,
    best_count: usize,
    best_assign: Vec<usize>,
    lower_bound: usize,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl ExactSearch<'_> {
    fn run(&mut self, colored: usize, used: usize) {
        self.nodes += 1;
        if self.nodes >= self.budget {
            self.aborted = true;
            return;
        }
        if used >= self.best_count {
            return;
        }
        if colored == self.n {
            self.best_count = used;
            self.best_assign = self.assign.clone();
            return;
        }
        let v = self.pick_vertex();
        let limit = (used + 1).min(self.best_count - 1).min(self.n);
        for color in 0..limit {
            if self.adj[v]
                .iter()
                .any(|&u| self.assign[u] == color)
            {
                continue;
            }
            self.assign[v] = color;
            self.run(colored + 1, used.max(color + 1));
            self.assign[v] = usize::MAX;
            if self.aborted || self.best_count == self.lower_bound {
                return;
            }
        }
    }

    /// Uncolored vertex with maximum saturation degree; the ascending scan
    /// breaks ties by lower vertex id.
    fn pick_vertex(&self) -> usize {
        let mut best = usize::MAX;
        let mut best_sat = 0usize;
        for v in 0..self.n {
            if self.assign[v] != usize::MAX {
                continue;
            }
            let mut seen: Vec<usize> = self.adj[v]
                .iter()
                .filter(|&&u| self.assign[u] != usize::MAX)
                .map(|&u| self.assign[u])
                .collect();
            seen.sort_unstable();
            seen.dedup();
            if best == usize::MAX || seen.len() > best_sat {
                best = v;
                best_sat = seen.len();
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Hypergraph {
        Hypergraph::new(n, 2, (0..n).map(|i| vec![i, (i + 1) % n])).unwrap()
    }

    #[test]
    fn complete_counts() {
        assert_eq!(Hypergraph::complete(3, 2).unwrap().edge_count(), 3);
        assert_eq!(Hypergraph::complete(7, 3).unwrap().edge_count(), 35);
        assert_eq!(Hypergraph::complete(20, 2).unwrap().edge_count(), 190);
        assert!(Hypergraph::complete(2, 3).is_err());
    }

    #[test]
    fn fano_complement_structure() {
        let g = Hypergraph::fano_complement();
        assert_eq!(g.n(), 7);
        assert_eq!(g.k(), 3);
        // 35 triples minus the 7 lines
        assert_eq!(g.edge_count(), 28);
        assert!(g.contains_edge(&[0, 1, 3])); // {1,2,4} is independent
        assert!(!g.contains_edge(&[0, 1, 2])); // {1,2,3} is a line

        // Oracle: recount by XOR-to-zero over explicit columns.
        let v1 = [0u8, 0, 0, 1, 1, 1, 1];
        let v2 = [0u8, 1, 1, 1, 0, 0, 1];
        let v3 = [1u8, 1, 0, 1, 1, 0, 0];
        let mut independent = 0;
        for t in combinations(7, 3) {
            let x = |i: usize| (v1[i], v2[i], v3[i]);
            let (a, b, c) = (x(t[0]), x(t[1]), x(t[2]));
            let xor = (a.0 ^ b.0 ^ c.0, a.1 ^ b.1 ^ c.1, a.2 ^ b.2 ^ c.2);
            if xor != (0, 0, 0) {
                independent += 1;
                assert!(g.contains_edge(&t));
            } else {
                assert!(!g.contains_edge(&t));
            }
        }
        assert_eq!(independent, 28);
    }

    #[test]
    fn pg_families() {
        let f2 = FieldSpec::new(2).unwrap();
        let g = Hypergraph::pg(&f2, 3, DEFAULT_PG_VERTEX_CAP).unwrap();
        assert_eq!(g.n(), 7);

        // Matches fano_complement up to the relabeling that aligns column
        // vectors: check edge counts and per-vertex degrees as a set.
        let fano = Hypergraph::fano_complement();
        assert_eq!(g.edge_count(), fano.edge_count());

        // Explicit relabeling: vertex i of fano carries column
        // (v1_i, v2_i, v3_i); pg vertex order is lexicographic over vectors.
        let vectors = normalized_vectors(&f2, 3, 64).unwrap();
        let v1 = [0u64, 0, 0, 1, 1, 1, 1];
        let v2 = [0u64, 1, 1, 1, 0, 0, 1];
        let v3 = [1u64, 1, 0, 1, 1, 0, 0];
        let relabel: Vec<usize> = (0..7)
            .map(|i| {
                let col = vec![v1[i], v2[i], v3[i]];
                vectors.iter().position(|v| *v == col).unwrap()
            })
            .collect();
        for edge in fano.edges() {
            let mut mapped: Vec<usize> = edge.iter().map(|&v| relabel[v]).collect();
            mapped.sort_unstable();
            assert!(g.contains_edge(&mapped));
        }

        let f3 = FieldSpec::new(3).unwrap();
        let g = Hypergraph::pg(&f3, 2, DEFAULT_PG_VERTEX_CAP).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6); // all pairs of distinct normalized vectors

        assert!(matches!(
            Hypergraph::pg(&f3, 2, 3),
            Err(HypergraphError::TooLarge { .. })
        ));
    }

    #[test]
    fn two_section_families() {
        let triangle = Hypergraph::complete(3, 2).unwrap();
        assert_eq!(triangle.two_section(), triangle);

        let fano = Hypergraph::fano_complement();
        assert_eq!(fano.two_section(), Hypergraph::complete(7, 2).unwrap());

        let single = Hypergraph::new(5, 3, vec![vec![1, 2, 4]]).unwrap();
        let two = single.two_section();
        assert_eq!(two.edges(), &[vec![1, 2], vec![1, 4], vec![2, 4]]);
    }

    #[test]
    fn validate_coloring_cases() {
        let triangle = Hypergraph::complete(3, 2).unwrap();
        assert!(validate_coloring(&triangle, &Coloring::new(vec![0, 1, 2])));
        assert!(!validate_coloring(&triangle, &Coloring::new(vec![0, 0, 1])));
        assert!(!validate_coloring(&triangle, &Coloring::new(vec![0, 1])));
        let fano = Hypergraph::fano_complement();
        assert!(validate_coloring(&fano, &Coloring::new((0..7).collect())));
    }

    /// Brute-force chromatic number of the 2-section by trying all
    /// assignments with at most c colors.
    fn brute_chromatic(g: &Hypergraph) -> usize {
        fn feasible(adj: &[Vec<usize>], colors: &mut Vec<usize>, v: usize, c: usize) -> bool {
            if v == adj.len() {
                return true;
            }
            for color in 0..c {
                if adj[v].iter().all(|&u| u >= v || colors[u] != color) {
                    colors[v] = color;
                    if feasible(adj, colors, v + 1, c) {
                        return true;
                    }
                }
            }
            false
        }
        let two = g.two_section();
        let mut adj = vec![Vec::new(); two.n()];
        for e in two.edges() {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for c in 1..=two.n().max(1) {
            let mut colors = vec![usize::MAX; two.n()];
            if feasible(&adj, &mut colors, 0, c) {
                return c;
            }
        }
        0
    }

    #[test]
    fn chromatic_small_instances() {
        let fano = Hypergraph::fano_complement();
        let res = strong_chromatic(&fano, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        assert_eq!(res.coloring.color_count(), 7);
        assert_eq!(res.status, ChromaticStatus::Exact);
        assert!(validate_coloring(&fano, &res.coloring));

        let c5 = cycle(5);
        let res = strong_chromatic(&c5, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        assert_eq!(res.coloring.color_count(), 3);
        assert_eq!(res.status, ChromaticStatus::Exact);
        assert_eq!(brute_chromatic(&c5), 3);

        for n in [4usize, 5, 6] {
            let g = Hypergraph::complete(n, 2).unwrap();
            let res = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
            assert_eq!(res.coloring.color_count(), n);
            assert_eq!(res.lower_bound, n);
        }
    }

    #[test]
    fn chromatic_matches_brute_force_on_random_instances() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..40 {
            let n = rng.gen_range(4..=9);
            let k = if trial % 2 == 0 { 2 } else { 3 };
            if k > n {
                continue;
            }
            let edges: Vec<Vec<usize>> = combinations(n, k)
                .into_iter()
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let g = Hypergraph::new(n, k, edges).unwrap();
            let res = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
            assert_eq!(res.status, ChromaticStatus::Exact, "trial {trial}");
            assert!(validate_coloring(&g, &res.coloring));
            assert_eq!(
                res.coloring.color_count(),
                brute_chromatic(&g),
                "trial {trial}"
            );
            assert!(res.lower_bound <= res.coloring.color_count());
        }
    }

    #[test]
    fn greedy_mode_is_valid_and_bounded() {
        let g = Hypergraph::complete(9, 3).unwrap();
        let res = strong_chromatic(&g, ColorMode::Greedy, 0);
        assert!(validate_coloring(&g, &res.coloring));
        assert!(res.lower_bound <= res.coloring.color_count());
        // complete hypergraph: any two vertices share an edge
        assert_eq!(res.coloring.color_count(), 9);
        assert_eq!(res.status, ChromaticStatus::Exact);
    }

    #[test]
    fn isolated_vertices_get_first_color() {
        let g = Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap();
        let res = strong_chromatic(&g, ColorMode::Exact, DEFAULT_NODE_BUDGET);
        assert_eq!(res.coloring.colors()[2], 0);
        assert_eq!(res.coloring.colors()[3], 0);
        assert_eq!(res.coloring.color_count(), 2);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let text = "5 2\n1 2\n# comment\n2 3   # trailing\n\n4 5\n";
        let g = Hypergraph::parse(text).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 3);
        let again = Hypergraph::parse(&g.to_text()).unwrap();
        assert_eq!(g, again);

        let err = Hypergraph::parse("3 2\n1 4\n").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 2, .. }), "{err}");
        let err = Hypergraph::parse("3 2\n1\n").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 2, .. }));
        let err = Hypergraph::parse("3 2\n1 1\n").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 2, .. }));
        let err = Hypergraph::parse("# nothing\n").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 1, .. }));
        let err = Hypergraph::parse("3 x\n").unwrap_err();
        assert!(matches!(err, HypergraphError::Parse { line: 1, .. }));
    }
}
