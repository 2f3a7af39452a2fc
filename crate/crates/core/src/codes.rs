//! Code tables, encoding/erasure semantics, and the exact, error-tolerant,
//! and average-error verifiers.
//!
//! A code is an explicit encoding table `[q]^k -> [q]^n` (messages
//! enumerated lexicographically with symbol order `0..q-1`), optionally
//! backed by a k-by-n generator matrix over a finite field. All success
//! probabilities are exact rationals; no verdict goes through floating
//! point.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};
use thiserror::Error;

use crate::galois::{self, FieldSpec, GaloisError};
use crate::hypergraph::{Coloring, Hypergraph};
use crate::rational;

/// Tables with more than this many rows are not materialized; linear codes
/// above the cap are verified through generator submatrix ranks instead.
pub const TABLE_ROW_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CodeError {
    #[error("alphabet size {0} is too small (need q >= 2)")]
    AlphabetTooSmall(usize),
    #[error("table needs {rows} rows which exceeds the cap {TABLE_ROW_CAP}")]
    TableCapExceeded { rows: u128 },
    #[error("table has {got} rows, expected q^k = {expected}")]
    WrongRowCount { got: usize, expected: usize },
    #[error("row {row} has {got} symbols, expected n = {expected}")]
    WrongRowLength {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("symbol {value} out of range for alphabet size {q}")]
    BadSymbol { value: u64, q: usize },
    #[error("message {message:?} is not a valid element of [q]^k")]
    BadMessage { message: Vec<u16> },
    #[error("positions {edge:?} are not distinct in-range codeword positions")]
    BadEdge { edge: Vec<usize> },
    #[error("edge has {got} positions, expected k = {expected}")]
    EdgeSizeMismatch { got: usize, expected: usize },
    #[error(
        "hypergraph ({n_g} vertices, {k_g}-uniform) does not match code (n = {n_c}, k = {k_c})"
    )]
    DimensionMismatch {
        n_g: usize,
        k_g: usize,
        n_c: usize,
        k_c: usize,
    },
    #[error("epsilon {0} outside [0, 1)")]
    BadEpsilon(String),
    #[error("average-error verification needs at least one edge")]
    EmptyEdgeSet,
    #[error("operation requires a linear code")]
    NotLinear,
    #[error("operation requires a materialized table (q^k within cap)")]
    TableUnavailable,
    #[error("reed-solomon length n = {n} exceeds q + 1 = {limit}")]
    LengthBeyondMds { n: usize, limit: u64 },
    #[error("dimension k = {k} exceeds block length n = {n}")]
    DimensionBeyondLength { k: usize, n: usize },
    #[error("code is not valid for the given hypergraph: {0}")]
    NotValidForGraph(String),
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A generator matrix over a finite field: k rows, n columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub field: FieldSpec,
    pub rows: Vec<Vec<u64>>,
}

/// An explicit encoding table `[q]^k -> [q]^n`, optionally linear.
#[derive(Debug, Clone, PartialEq)]
pub struct Code {
    q: usize,
    k: usize,
    n: usize,
    generator: Option<Generator>,
    /// Row-major q^k x n symbols; absent only for linear codes whose message
    /// space exceeds [`TABLE_ROW_CAP`].
    table: Option<Vec<u16>>,
}

impl Code {
    /// Builds a nonlinear code from explicit table rows (messages
    /// lexicographic).
    pub fn from_table(q: usize, k: usize, rows: Vec<Vec<u16>>) -> Result<Code, CodeError> {
        if q < 2 {
            return Err(CodeError::AlphabetTooSmall(q));
        }
        let expected = checked_rows(q, k)?;
        if rows.len() != expected {
            return Err(CodeError::WrongRowCount {
                got: rows.len(),
                expected,
            });
        }
        let n = rows.first().map_or(0, Vec::len);
        let mut table = Vec::with_capacity(expected * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(CodeError::WrongRowLength {
                    row: i + 1,
                    got: row.len(),
                    expected: n,
                });
            }
            for &s in row {
                if s as usize >= q {
                    return Err(CodeError::BadSymbol {
                        value: s as u64,
                        q,
                    });
                }
            }
            table.extend_from_slice(row);
        }
        Ok(Code {
            q,
            k,
            n,
            generator: None,
            table: Some(table),
        })
    }

    /// Builds a nonlinear code from per-position column functions: column i
    /// lists the symbol at position i for every message, lexicographic.
    pub fn from_columns(q: usize, k: usize, columns: &[Vec<u16>]) -> Result<Code, CodeError> {
        let rows_count = checked_rows(q, k)?;
        let n = columns.len();
        for (i, col) in columns.iter().enumerate() {
            if col.len() != rows_count {
                return Err(CodeError::WrongRowLength {
                    row: i + 1,
                    got: col.len(),
                    expected: rows_count,
                });
            }
        }
        let rows: Vec<Vec<u16>> = (0..rows_count)
            .map(|r| (0..n).map(|c| columns[c][r]).collect())
            .collect();
        Code::from_table(q, k, rows)
    }

    /// Builds a linear code from generator rows over `field`; the table is
    /// materialized when q^k is within [`TABLE_ROW_CAP`].
    pub fn linear(field: FieldSpec, rows: Vec<Vec<u64>>) -> Result<Code, CodeError> {
        let q = field.q() as usize;
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(CodeError::WrongRowLength {
                    row: i + 1,
                    got: row.len(),
                    expected: n,
                });
            }
            for &x in row {
                field.element(x)?;
            }
        }
        let generator = Generator { field, rows };
        let mut code = Code {
            q,
            k,
            n,
            generator: Some(generator),
            table: None,
        };
        if (q as u128).checked_pow(k as u32).is_some_and(|r| r <= TABLE_ROW_CAP) {
            let rows_count = (q as u128).pow(k as u32) as usize;
            let mut table = Vec::with_capacity(rows_count * n);
            let mut message = vec![0u16; k];
            for _ in 0..rows_count {
                let word = code.encode_with_generator(&message);
                table.extend(word);
                next_message(&mut message, q);
            }
            code.table = Some(table);
        }
        Ok(code)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_linear(&self) -> bool {
        self.generator.is_some()
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_ref()
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// Number of messages, q^k.
    pub fn message_count(&self) -> u128 {
        (self.q as u128).pow(self.k as u32)
    }

    fn table_rows(&self) -> Result<usize, CodeError> {
        if self.table.is_some() {
            Ok(self.message_count() as usize)
        } else {
            Err(CodeError::TableUnavailable)
        }
    }

    fn entry(&self, row: usize, col: usize) -> u16 {
        self.table.as_ref().expect("table present")[row * self.n + col]
    }

    /// Column i as a function of the lexicographically ordered messages.
    pub fn column(&self, i: usize) -> Result<Vec<u16>, CodeError> {
        if i >= self.n {
            return Err(CodeError::BadEdge { edge: vec![i] });
        }
        let rows = self.table_rows()?;
        Ok((0..rows).map(|r| self.entry(r, i)).collect())
    }

    fn check_message(&self, m: &[u16]) -> Result<(), CodeError> {
        if m.len() != self.k || m.iter().any(|&s| s as usize >= self.q) {
            return Err(CodeError::BadMessage {
                message: m.to_vec(),
            });
        }
        Ok(())
    }

    /// 0-based row index of a message in lexicographic order.
    pub fn message_index(&self, m: &[u16]) -> Result<usize, CodeError> {
        self.check_message(m)?;
        Ok(m.iter().fold(0usize, |acc, &s| acc * self.q + s as usize))
    }

    /// Inverse of [`Code::message_index`].
    pub fn message_of_index(&self, mut index: usize) -> Vec<u16> {
        let mut m = vec![0u16; self.k];
        for slot in m.iter_mut().rev() {
            *slot = (index % self.q) as u16;
            index /= self.q;
        }
        m
    }

    fn encode_with_generator(&self, m: &[u16]) -> Vec<u16> {
        let gen = self.generator.as_ref().expect("linear code");
        let f = &gen.field;
        (0..self.n)
            .map(|j| {
                let mut acc = 0u64;
                for (i, &mi) in m.iter().enumerate() {
                    acc = f.add(acc, f.mul(mi as u64, gen.rows[i][j]));
                }
                acc as u16
            })
            .collect()
    }

    /// The codeword for message `m`.
    pub fn encode(&self, m: &[u16]) -> Result<Vec<u16>, CodeError> {
        self.check_message(m)?;
        if self.table.is_some() {
            let row = self.message_index(m)?;
            return Ok((0..self.n).map(|c| self.entry(row, c)).collect());
        }
        Ok(self.encode_with_generator(m))
    }

    /// The codeword for `m` with every position outside `keep` replaced by
    /// the erasure symbol (`None`).
    pub fn erase(&self, m: &[u16], keep: &[usize]) -> Result<Vec<Option<u16>>, CodeError> {
        let word = self.encode(m)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != keep.len() || sorted.iter().any(|&p| p >= self.n) {
            return Err(CodeError::BadEdge {
                edge: keep.to_vec(),
            });
        }
        let mut masked: Vec<Option<u16>> = vec![None; self.n];
        for &p in keep {
            masked[p] = Some(word[p]);
        }
        Ok(masked)
    }

    fn check_edge(&self, edge: &[usize]) -> Result<(), CodeError> {
        if edge.len() != self.k {
            return Err(CodeError::EdgeSizeMismatch {
                got: edge.len(),
                expected: self.k,
            });
        }
        let mut sorted = edge.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != edge.len() || sorted.iter().any(|&p| p >= self.n) {
            return Err(CodeError::BadEdge {
                edge: edge.to_vec(),
            });
        }
        Ok(())
    }

    /// The optimal-decoder success probability on `edge` under uniform
    /// messages: (number of distinct restricted k-tuples) / q^k. Each
    /// distinct tuple decodes to exactly one preimage, so this is the best
    /// any decoder can do.
    pub fn edge_success(&self, edge: &[usize]) -> Result<BigRational, CodeError> {
        self.check_edge(edge)?;
        if self.table.is_some() {
            let distinct = self.distinct_tuples(edge);
            return Ok(BigRational::new(
                BigInt::from(distinct),
                BigInt::from(self.message_count()),
            ));
        }
        // Linear code above the table cap: the restriction is a linear map
        // whose image has q^rank points, each with an equal fiber.
        let gen = self.generator.as_ref().ok_or(CodeError::TableUnavailable)?;
        let sub = submatrix(gen, edge);
        let rank = galois::matrix_rank(&sub, &gen.field);
        Ok(BigRational::new(
            BigInt::one(),
            rational::power(self.q as u64, (self.k - rank) as u32),
        ))
    }

    fn distinct_tuples(&self, edge: &[usize]) -> usize {
        let rows = self.message_count() as usize;
        let mut seen = vec![0u64; rows.div_ceil(64)];
        let mut distinct = 0;
        for r in 0..rows {
            let mut idx = 0usize;
            for &p in edge {
                idx = idx * self.q + self.entry(r, p) as usize;
            }
            let (w, b) = (idx / 64, idx % 64);
            if seen[w] >> b & 1 == 0 {
                seen[w] |= 1 << b;
                distinct += 1;
            }
        }
        distinct
    }

    /// First colliding message pair on `edge` in lexicographic scan order:
    /// the smallest message whose restricted tuple was already produced,
    /// paired with the earlier producer.
    fn collision_pair(&self, edge: &[usize]) -> Option<(Vec<u16>, Vec<u16>)> {
        if self.table.is_some() {
            let rows = self.message_count() as usize;
            let mut first_seen: Vec<u32> = vec![u32::MAX; rows];
            for r in 0..rows {
                let mut idx = 0usize;
                for &p in edge {
                    idx = idx * self.q + self.entry(r, p) as usize;
                }
                if first_seen[idx] == u32::MAX {
                    first_seen[idx] = r as u32;
                } else {
                    return Some((
                        self.message_of_index(first_seen[idx] as usize),
                        self.message_of_index(r),
                    ));
                }
            }
            return None;
        }
        let gen = self.generator.as_ref()?;
        let sub = submatrix(gen, edge);
        let delta = galois::left_kernel_vector(&sub, &gen.field)?;
        let zero = vec![0u16; self.k];
        let partner: Vec<u16> = delta.iter().map(|&x| x as u16).collect();
        Some((zero, partner))
    }

    /// Valid iff every edge restriction is injective (edge success exactly
    /// 1). The certificate pins the lexicographically first failing edge and
    /// a colliding message pair.
    pub fn verify_exact(&self, g: &Hypergraph) -> Result<Certificate, CodeError> {
        self.verify_exact_jobs(g, 1)
    }

    pub fn verify_exact_jobs(&self, g: &Hypergraph, jobs: usize) -> Result<Certificate, CodeError> {
        self.check_graph(g)?;
        let scores = self.edge_scores(g, jobs)?;
        let one = BigRational::one();
        let failing = scores.iter().position(|s| *s != one);
        let mut cert = Certificate::new(VerifyMode::Exact, g.edge_count());
        match failing {
            None => cert.valid = true,
            Some(idx) => {
                let edge = g.edges()[idx].clone();
                cert.collision = self.collision_pair(&edge);
                cert.witness_success = Some(scores[idx].clone());
                cert.witness_edge = Some(edge);
            }
        }
        Ok(cert)
    }

    /// Valid iff every edge success is at least 1 - eps. The certificate
    /// reports the minimum-success edge (lexicographically first among ties).
    pub fn verify_eps(&self, g: &Hypergraph, eps: &BigRational) -> Result<Certificate, CodeError> {
        self.verify_eps_jobs(g, eps, 1)
    }

    pub fn verify_eps_jobs(
        &self,
        g: &Hypergraph,
        eps: &BigRational,
        jobs: usize,
    ) -> Result<Certificate, CodeError> {
        check_epsilon(eps)?;
        self.check_graph(g)?;
        let scores = self.edge_scores(g, jobs)?;
        let threshold = BigRational::one() - eps;
        let mut cert = Certificate::new(VerifyMode::Eps(eps.clone()), g.edge_count());
        match scores
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.cmp(b))
        {
            None => cert.valid = true, // vacuous
            Some((idx, min)) => {
                cert.valid = *min >= threshold;
                cert.witness_edge = Some(g.edges()[idx].clone());
                cert.witness_success = Some(min.clone());
            }
        }
        Ok(cert)
    }

    /// Valid iff the average edge success over a uniform edge is at least
    /// 1 - eps. The certificate carries the exact average.
    pub fn verify_avg(&self, g: &Hypergraph, eps: &BigRational) -> Result<Certificate, CodeError> {
        self.verify_avg_jobs(g, eps, 1)
    }

    pub fn verify_avg_jobs(
        &self,
        g: &Hypergraph,
        eps: &BigRational,
        jobs: usize,
    ) -> Result<Certificate, CodeError> {
        check_epsilon(eps)?;
        self.check_graph(g)?;
        if g.edge_count() == 0 {
            return Err(CodeError::EmptyEdgeSet);
        }
        let scores = self.edge_scores(g, jobs)?;
        let sum: BigRational = scores.iter().fold(BigRational::zero(), |acc, s| acc + s);
        let average = sum / BigRational::from_integer(BigInt::from(g.edge_count()));
        let threshold = BigRational::one() - eps;
        let mut cert = Certificate::new(VerifyMode::Avg(eps.clone()), g.edge_count());
        cert.valid = average >= threshold;
        if let Some((idx, min)) = scores.iter().enumerate().min_by(|(_, a), (_, b)| a.cmp(b)) {
            cert.witness_edge = Some(g.edges()[idx].clone());
            cert.witness_success = Some(min.clone());
        }
        cert.average_success = Some(average);
        Ok(cert)
    }

    fn check_graph(&self, g: &Hypergraph) -> Result<(), CodeError> {
        if g.n() != self.n || g.k() != self.k {
            return Err(CodeError::DimensionMismatch {
                n_g: g.n(),
                k_g: g.k(),
                n_c: self.n,
                k_c: self.k,
            });
        }
        Ok(())
    }

    /// Per-edge success in edge order. `jobs > 1` fans the edges out over
    /// scoped threads; the output order (and hence every certificate) is
    /// independent of the scheduling.
    fn edge_scores(&self, g: &Hypergraph, jobs: usize) -> Result<Vec<BigRational>, CodeError> {
        let edges = g.edges();
        let jobs = jobs.max(1).min(edges.len().max(1));
        if jobs == 1 {
            return edges.iter().map(|e| self.edge_success(e)).collect();
        }
        let chunk = edges.len().div_ceil(jobs);
        let results: Vec<Result<Vec<BigRational>, CodeError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = edges
                .chunks(chunk)
                .map(|slice| scope.spawn(move || slice.iter().map(|e| self.edge_success(e)).collect()))
                .collect();
            handles.into_iter().map(|h| h.join().expect("verifier worker panicked")).collect()
        });
        let mut scores = Vec::with_capacity(edges.len());
        for part in results {
            scores.extend(part?);
        }
        Ok(scores)
    }

    /// Serializes to the text format (see [`Code::parse`]).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.generator {
            Some(gen) => {
                out.push_str(&format!("{} {} {} linear\n", self.q, self.k, self.n));
                for row in &gen.rows {
                    let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                    out.push_str(&cells.join(" "));
                    out.push('\n');
                }
            }
            None => {
                out.push_str(&format!("{} {} {}\n", self.q, self.k, self.n));
                let rows = self.message_count() as usize;
                for r in 0..rows {
                    let cells: Vec<String> = (0..self.n)
                        .map(|c| self.entry(r, c).to_string())
                        .collect();
                    out.push_str(&cells.join(" "));
                    out.push('\n');
                }
            }
        }
        out
    }

    /// Parses the text format:
    ///
    /// ```text
    /// line 1: <q> <k> <n> [linear]
    /// if linear: k lines of n field elements (generator rows)
    /// else: q^k lines of n symbols (table rows, messages lexicographic)
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Code, CodeError> {
        let mut header: Option<(usize, usize, usize, bool)> = None;
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut header_line = 1;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            match &header {
                None => {
                    header_line = line;
                    let linear = match fields.len() {
                        3 => false,
                        4 if fields[3] == "linear" => true,
                        _ => {
                            return Err(parse_err(line, "expected header `<q> <k> <n> [linear]`"))
                        }
                    };
                    let q = parse_num(fields[0], line)?;
                    let k = parse_num(fields[1], line)?;
                    let n = parse_num(fields[2], line)?;
                    header = Some((q as usize, k as usize, n as usize, linear));
                }
                Some((q, _, n, linear)) => {
                    if fields.len() != *n {
                        return Err(parse_err(
                            line,
                            format!("expected {n} symbols, found {}", fields.len()),
                        ));
                    }
                    let mut row = Vec::with_capacity(*n);
                    for field in fields {
                        let value = parse_num(field, line)?;
                        if !linear && value as usize >= *q {
                            return Err(parse_err(
                                line,
                                format!("symbol {value} out of range for alphabet {q}"),
                            ));
                        }
                        row.push(value);
                    }
                    rows.push(row);
                }
            }
        }
        let (q, k, n, linear) = header.ok_or_else(|| parse_err(1, "missing header"))?;
        if linear {
            if rows.len() != k {
                return Err(parse_err(
                    header_line,
                    format!("linear code needs k = {k} generator rows, found {}", rows.len()),
                ));
            }
            let field = FieldSpec::new(q as u64)
                .map_err(|e| parse_err(header_line, format!("bad field size: {e}")))?;
            let code = Code::linear(field, rows)?;
            if code.n != n {
                return Err(parse_err(
                    header_line,
                    format!("generator rows have {} columns, header says n = {n}", code.n),
                ));
            }
            Ok(code)
        } else {
            let table: Vec<Vec<u16>> = rows
                .iter()
                .map(|row| row.iter().map(|&x| x as u16).collect())
                .collect();
            let code = Code::from_table(q, k, table)?;
            if code.n != n {
                return Err(parse_err(header_line, "row width disagrees with header"));
            }
            Ok(code)
        }
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> CodeError {
    CodeError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num(field: &str, line: usize) -> Result<u64, CodeError> {
    field
        .parse()
        .map_err(|_| parse_err(line, format!("`{field}` is not a non-negative integer")))
}

fn checked_rows(q: usize, k: usize) -> Result<usize, CodeError> {
    if q < 2 {
        return Err(CodeError::AlphabetTooSmall(q));
    }
    if q > u16::MAX as usize + 1 {
        return Err(CodeError::BadSymbol {
            value: q as u64 - 1,
            q,
        });
    }
    let rows = (q as u128)
        .checked_pow(k as u32)
        .ok_or(CodeError::TableCapExceeded { rows: u128::MAX })?;
    if rows > TABLE_ROW_CAP {
        return Err(CodeError::TableCapExceeded { rows });
    }
    Ok(rows as usize)
}

fn next_message(message: &mut [u16], q: usize) {
    for slot in message.iter_mut().rev() {
        if (*slot as usize) + 1 < q {
            *slot += 1;
            return;
        }
        *slot = 0;
    }
}

fn submatrix(gen: &Generator, edge: &[usize]) -> Vec<Vec<u64>> {
    gen.rows
        .iter()
        .map(|row| edge.iter().map(|&c| row[c]).collect())
        .collect()
}

fn check_epsilon(eps: &BigRational) -> Result<(), CodeError> {
    if *eps < BigRational::zero() || *eps >= BigRational::one() {
        return Err(CodeError::BadEpsilon(rational::format(eps)));
    }
    Ok(())
}

// --- Certificates -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum VerifyMode {
    Exact,
    Eps(BigRational),
    Avg(BigRational),
}

/// The deterministic outcome of a verification run. Regardless of worker
/// scheduling, `witness_edge` is the lexicographically first failing edge
/// (exact mode) or the lexicographically first minimum-success edge
/// (eps/avg modes).
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub valid: bool,
    pub mode: VerifyMode,
    pub edges_checked: usize,
    /// 0-based vertex ids; rendered 1-based.
    pub witness_edge: Option<Vec<usize>>,
    pub witness_success: Option<BigRational>,
    /// A colliding message pair on the witness edge (exact mode only).
    pub collision: Option<(Vec<u16>, Vec<u16>)>,
    pub average_success: Option<BigRational>,
}

impl Certificate {
    fn new(mode: VerifyMode, edges_checked: usize) -> Self {
        Certificate {
            valid: false,
            mode,
            edges_checked,
            witness_edge: None,
            witness_success: None,
            collision: None,
            average_success: None,
        }
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mode {
            VerifyMode::Exact => writeln!(f, "mode exact")?,
            VerifyMode::Eps(eps) => {
                writeln!(f, "mode eps")?;
                writeln!(f, "epsilon {}", rational::format(eps))?;
                writeln!(
                    f,
                    "threshold {}",
                    rational::format(&(BigRational::one() - eps))
                )?;
            }
            VerifyMode::Avg(eps) => {
                writeln!(f, "mode avg")?;
                writeln!(f, "avg_epsilon {}", rational::format(eps))?;
                writeln!(
                    f,
                    "threshold {}",
                    rational::format(&(BigRational::one() - eps))
                )?;
            }
        }
        writeln!(f, "edges {}", self.edges_checked)?;
        writeln!(f, "valid {}", self.valid)?;
        if let Some(edge) = &self.witness_edge {
            let ids: Vec<String> = edge.iter().map(|v| (v + 1).to_string()).collect();
            let label = match self.mode {
                VerifyMode::Exact => "failing_edge",
                _ => "min_edge",
            };
            writeln!(f, "{label} {}", ids.join(" "))?;
        }
        if let Some(success) = &self.witness_success {
            let label = match self.mode {
                VerifyMode::Exact => "edge_success",
                _ => "min_success",
            };
            writeln!(f, "{label} {}", rational::format(success))?;
        }
        if let Some((a, b)) = &self.collision {
            let fmt_msg =
                |m: &[u16]| m.iter().map(u16::to_string).collect::<Vec<_>>().join(" ");
            writeln!(f, "collision_message_a {}", fmt_msg(a))?;
            writeln!(f, "collision_message_b {}", fmt_msg(b))?;
        }
        if let Some(avg) = &self.average_success {
            writeln!(f, "average_success {}", rational::format(avg))?;
        }
        Ok(())
    }
}

// --- Edge decoders ----------------------------------------------------------

/// An explicit decoder for one edge: maps every observed restricted k-tuple
/// to a single representative preimage (the lexicographically smallest one,
/// which attains the optimal success probability).
#[derive(Debug, Clone)]
pub struct EdgeDecoder {
    edge: Vec<usize>,
    map: BTreeMap<Vec<u16>, Vec<u16>>,
}

impl EdgeDecoder {
    pub fn build(code: &Code, edge: &[usize]) -> Result<EdgeDecoder, CodeError> {
        code.check_edge(edge)?;
        let rows = code.table_rows()?;
        let mut map: BTreeMap<Vec<u16>, Vec<u16>> = BTreeMap::new();
        for r in 0..rows {
            let tuple: Vec<u16> = edge.iter().map(|&p| code.entry(r, p)).collect();
            map.entry(tuple).or_insert_with(|| code.message_of_index(r));
        }
        Ok(EdgeDecoder {
            edge: edge.to_vec(),
            map,
        })
    }

    pub fn edge(&self) -> &[usize] {
        &self.edge
    }

    /// Decodes a masked word; the positions of this decoder's edge must be
    /// present.
    pub fn decode(&self, masked: &[Option<u16>]) -> Option<Vec<u16>> {
        let tuple: Option<Vec<u16>> = self.edge.iter().map(|&p| masked.get(p).copied()?).collect();
        self.map.get(&tuple?).cloned()
    }

    pub fn decode_tuple(&self, tuple: &[u16]) -> Option<&[u16]> {
        self.map.get(tuple).map(Vec::as_slice)
    }
}

// --- Constructions owned by this module -------------------------------------

/// A Reed-Solomon style MDS code: generator columns are the Vandermonde
/// columns (1, a, ..., a^{k-1}) over the first n field points in increasing
/// integer encoding, plus the column (0, ..., 0, 1) when n = q + 1. Every k
/// columns are invertible.
pub fn rs_code(f: &FieldSpec, n: usize, k: usize) -> Result<Code, CodeError> {
    let q = f.q();
    if k > n {
        return Err(CodeError::DimensionBeyondLength { k, n });
    }
    if n as u64 > q + 1 {
        return Err(CodeError::LengthBeyondMds { n, limit: q + 1 });
    }
    let mut rows = vec![vec![0u64; n]; k];
    for (j, point) in f.elements().take(n.min(q as usize)).enumerate() {
        for (i, row) in rows.iter_mut().enumerate() {
            row[j] = f.pow(point, i as u64);
        }
    }
    if n as u64 == q + 1 {
        rows[k - 1][n - 1] = 1;
    }
    Code::linear(f.clone(), rows)
}

/// For a valid linear code, mapping each vertex to the normalization of its
/// generator column (leading nonzero scaled to 1) yields a valid strong
/// coloring: edge columns are linearly independent, so they normalize to
/// pairwise distinct vectors. Uses at most (q^k - 1)/(q - 1) colors, and at
/// most q + 1 for k = 2.
pub fn normalized_column_coloring(code: &Code, g: &Hypergraph) -> Result<Coloring, CodeError> {
    let gen = code.generator().ok_or(CodeError::NotLinear)?.clone();
    let cert = code.verify_exact(g)?;
    if !cert.valid {
        return Err(CodeError::NotValidForGraph(format!(
            "edge {:?} is not exactly decodable",
            cert.witness_edge
                .map(|e| e.iter().map(|v| v + 1).collect::<Vec<_>>())
                .unwrap_or_default()
        )));
    }
    let f = &gen.field;
    let mut classes: Vec<Vec<u64>> = Vec::new();
    let mut colors = Vec::with_capacity(code.n());
    for j in 0..code.n() {
        let column: Vec<u64> = gen.rows.iter().map(|row| row[j]).collect();
        let normalized = match column.iter().find(|&&x| x != 0) {
            Some(&lead) => {
                let scale = f.inv(lead).expect("leading entry is nonzero");
                column.iter().map(|&x| f.mul(x, scale)).collect()
            }
            // all-zero columns only occur on isolated vertices; bucket them
            // together
            None => column,
        };
        let color = match classes.iter().position(|c| *c == normalized) {
            Some(idx) => idx,
            None => {
                classes.push(normalized);
                classes.len() - 1
            }
        };
        colors.push(color);
    }
    Ok(Coloring::new(colors))
}

// --- Embedded fixtures -------------------------------------------------------

/// A named reference code together with the hypergraph and error tolerance it
/// certifies.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub summary: &'static str,
    pub code: Code,
    pub hypergraph: Hypergraph,
    pub epsilon: BigRational,
}

const FANO_ROWS: [[u64; 7]; 3] = [
    [0, 0, 0, 1, 1, 1, 1],
    [0, 1, 1, 1, 0, 0, 1],
    [1, 1, 0, 1, 1, 0, 0],
];

const Q3_N20_COLUMNS: [[u16; 9]; 20] = [
    [0, 0, 0, 1, 1, 1, 2, 2, 2],
    [0, 1, 2, 0, 1, 2, 0, 1, 2],
    [0, 0, 1, 0, 1, 2, 1, 2, 2],
    [0, 0, 1, 1, 0, 2, 2, 1, 2],
    [0, 0, 1, 1, 2, 0, 2, 2, 1],
    [0, 0, 1, 2, 2, 1, 0, 1, 2],
    [0, 1, 0, 1, 2, 0, 2, 1, 2],
    [0, 1, 0, 2, 2, 1, 2, 0, 1],
    [0, 1, 1, 0, 2, 2, 2, 1, 0],
    [0, 1, 1, 2, 0, 2, 0, 2, 1],
    [0, 1, 1, 2, 1, 0, 2, 0, 2],
    [0, 1, 1, 2, 2, 0, 1, 2, 0],
    [0, 1, 2, 0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 2, 1, 1, 0, 2],
    [0, 1, 2, 1, 0, 0, 1, 2, 2],
    [0, 1, 2, 1, 0, 2, 2, 0, 1],
    [0, 1, 2, 1, 2, 1, 0, 2, 0],
    [0, 1, 2, 2, 0, 1, 2, 1, 0],
    [0, 1, 2, 2, 1, 2, 1, 0, 0],
    [0, 1, 2, 2, 2, 0, 0, 1, 1],
];

const Q4_N7_COLUMNS: [[u16; 16]; 7] = [
    [0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 3, 3, 3, 3],
    [0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3],
    [0, 1, 2, 3, 1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2],
    [0, 1, 2, 3, 2, 3, 0, 1, 1, 2, 3, 0, 3, 0, 1, 2],
    [0, 1, 2, 3, 3, 0, 1, 2, 1, 2, 3, 0, 2, 3, 0, 1],
    [0, 1, 2, 3, 0, 1, 2, 3, 3, 0, 1, 2, 2, 3, 0, 1],
    [0, 1, 2, 3, 2, 3, 0, 1, 2, 3, 0, 1, 1, 2, 3, 0],
];

const Q6_N6_COLUMNS: [[u16; 36]; 6] = [
    [
        0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3, 4, 4, 4, 4, 4, 4,
        5, 5, 5, 5, 5, 5,
    ],
    [
        0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5, 0, 1, 2, 3, 4, 5,
        0, 1, 2, 3, 4, 5,
    ],
    [
        0, 1, 2, 3, 4, 5, 1, 2, 3, 4, 5, 0, 2, 3, 4, 5, 0, 1, 3, 4, 5, 0, 1, 2, 4, 5, 0, 1, 2, 3,
        5, 0, 1, 2, 3, 4,
    ],
    [
        0, 1, 2, 3, 4, 5, 2, 3, 4, 5, 0, 1, 4, 5, 0, 1, 2, 3, 1, 2, 3, 4, 5, 0, 3, 4, 5, 0, 1, 2,
        5, 0, 1, 2, 3, 4,
    ],
    [
        0, 1, 2, 3, 4, 5, 3, 4, 5, 0, 1, 2, 1, 2, 3, 4, 5, 0, 5, 0, 1, 2, 3, 4, 2, 3, 4, 5, 0, 1,
        0, 1, 2, 3, 4, 5,
    ],
    [
        0, 1, 2, 3, 4, 5, 4, 5, 0, 1, 2, 3, 3, 4, 5, 0, 1, 2, 2, 3, 4, 5, 0, 1, 1, 2, 3, 4, 5, 0,
        1, 2, 3, 4, 5, 0,
    ],
];

/// The embedded reference codes, each transcribed column by column as a
/// function of the q^2 (or 2^3) lexicographically ordered messages.
pub fn fixtures() -> Vec<Fixture> {
    let f2 = FieldSpec::new(2).expect("GF(2)");
    let fano_code = Code::linear(f2, FANO_ROWS.iter().map(|r| r.to_vec()).collect())
        .expect("fano generator is well formed");
    let build = |q: usize, cols: &[&[u16]]| {
        let columns: Vec<Vec<u16>> = cols.iter().map(|c| c.to_vec()).collect();
        Code::from_columns(q, 2, &columns).expect("fixture columns are well formed")
    };
    let q3_cols: Vec<&[u16]> = Q3_N20_COLUMNS.iter().map(|c| c.as_slice()).collect();
    let q4_cols: Vec<&[u16]> = Q4_N7_COLUMNS.iter().map(|c| c.as_slice()).collect();
    let q6_cols: Vec<&[u16]> = Q6_N6_COLUMNS.iter().map(|c| c.as_slice()).collect();
    vec![
        Fixture {
            name: "fano",
            summary: "binary linear [7,3] code exact on the Fano line-complement",
            code: fano_code,
            hypergraph: Hypergraph::fano_complement(),
            epsilon: BigRational::zero(),
        },
        Fixture {
            name: "q3-n20",
            summary: "ternary length-20 code for the complete graph at error 1/3",
            code: build(3, &q3_cols),
            hypergraph: Hypergraph::complete(20, 2).expect("complete graph"),
            epsilon: rational::ratio(1, 3),
        },
        Fixture {
            name: "q4-n7",
            summary: "quaternary length-7 code for the complete graph at error 1/4",
            code: build(4, &q4_cols),
            hypergraph: Hypergraph::complete(7, 2).expect("complete graph"),
            epsilon: rational::ratio(1, 4),
        },
        Fixture {
            name: "q6-n6",
            summary: "senary length-6 code for the complete graph at error 1/6",
            code: build(6, &q6_cols),
            hypergraph: Hypergraph::complete(6, 2).expect("complete graph"),
            epsilon: rational::ratio(1, 6),
        },
    ]
}

/// Looks up an embedded fixture by name.
pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
