//! The universal graphs on function vectors: vertex encodings, adjacency,
//! canonical independent sets and covers, cliques from MDS codes, and the
//! balanced-vector collision probability.
//!
//! A vertex is a vector in `[q]^{q^2}` read as a function from pairs of
//! alphabet symbols to symbols (message `(a, b)` sits at index `a*q + b`).
//! Two vertices are adjacent at error `eps` when their coordinate pairs
//! `{(u_i, v_i)}` take at least `(1 - eps) * q^2` distinct values; `eps = 0`
//! demands all `q^2` pairs, which forces both endpoints to be balanced.

use std::borrow::Cow;
use std::fmt;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::integer::binomial;
use num::rational::BigRational;
use num::traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{Code, CodeError};
use crate::hypergraph::{Coloring, Hypergraph, HypergraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UniversalError {
    #[error("enumeration of {family} vertices is capped at q <= {cap}, got q = {q}")]
    CapExceeded {
        family: &'static str,
        q: usize,
        cap: usize,
    },
    #[error("vertices live over different alphabets ({0} vs {1})")]
    MismatchedAlphabet(usize, usize),
    #[error("bad vertex data: {0}")]
    BadVertex(String),
    #[error("{family} is unsupported for q = {q}: {reason}")]
    UnsupportedFamily {
        family: &'static str,
        q: usize,
        reason: String,
    },
    #[error("vertex {index} is not covered by any set in the cover")]
    UncoveredVertex { index: usize },
    #[error("input code is not an MDS code for the complete graph: {0}")]
    NotMds(String),
    #[error("input code is not valid for the hypergraph: {0}")]
    InvalidCode(String),
    #[error("count does not fit in 128 bits")]
    CountOverflow,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

// --- Vertices ----------------------------------------------------------------

#[derive(Debug, Clone)]
enum Repr {
    Dense(Vec<u16>),
    /// Shift tuple r in [q]^q; block i expands to (r_i, r_i+1, ..., r_i+q-1)
    /// mod q.
    Cyclic(Vec<u16>),
}

/// A vertex of a universal graph over alphabet size q.
#[derive(Debug, Clone)]
pub struct UniversalVertex {
    q: usize,
    repr: Repr,
}

impl PartialEq for UniversalVertex {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.expanded() == other.expanded()
    }
}
impl Eq for UniversalVertex {}

impl UniversalVertex {
    /// A vertex from its full `[q]^{q^2}` vector.
    pub fn dense(q: usize, data: Vec<u16>) -> Result<Self, UniversalError> {
        if q < 2 {
            return Err(UniversalError::BadVertex(format!(
                "alphabet size {q} is too small"
            )));
        }
        if data.len() != q * q || data.iter().any(|&s| s as usize >= q) {
            return Err(UniversalError::BadVertex(format!(
                "expected {} symbols below {q}",
                q * q
            )));
        }
        Ok(UniversalVertex {
            q,
            repr: Repr::Dense(data),
        })
    }

    /// A concatenation of q cyclic permutations, stored compactly as the
    /// shift tuple.
    pub fn cyclic(q: usize, shifts: Vec<u16>) -> Result<Self, UniversalError> {
        if q < 2 {
            return Err(UniversalError::BadVertex(format!(
                "alphabet size {q} is too small"
            )));
        }
        if shifts.len() != q || shifts.iter().any(|&s| s as usize >= q) {
            return Err(UniversalError::BadVertex(format!(
                "expected {q} shifts below {q}"
            )));
        }
        Ok(UniversalVertex {
            q,
            repr: Repr::Cyclic(shifts),
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// The full `[q]^{q^2}` vector (expanding cyclic representations).
    pub fn expanded(&self) -> Cow<'_, [u16]> {
        match &self.repr {
            Repr::Dense(data) => Cow::Borrowed(data),
            Repr::Cyclic(shifts) => {
                let q = self.q as u16;
                let mut out = Vec::with_capacity(self.q * self.q);
                for &r in shifts {
                    for t in 0..q {
                        out.push((r + t) % q);
                    }
                }
                Cow::Owned(out)
            }
        }
    }

    /// The shift tuple if the vertex is a concatenation of cyclic
    /// permutations.
    pub fn shifts(&self) -> Option<Vec<u16>> {
        match &self.repr {
            Repr::Cyclic(shifts) => Some(shifts.clone()),
            Repr::Dense(data) => {
                let q = self.q as u16;
                let mut shifts = Vec::with_capacity(self.q);
                for block in data.chunks(self.q) {
                    let r = block[0];
                    for (t, &s) in block.iter().enumerate() {
                        if s != (r + t as u16) % q {
                            return None;
                        }
                    }
                    shifts.push(r);
                }
                Some(shifts)
            }
        }
    }

    /// Each symbol appears exactly q times.
    pub fn is_balanced(&self) -> bool {
        let mut counts = vec![0usize; self.q];
        for &s in self.expanded().iter() {
            counts[s as usize] += 1;
        }
        counts.iter().all(|&c| c == self.q)
    }

    /// Each length-q block is a permutation of the alphabet.
    pub fn is_perm_blocks(&self) -> bool {
        self.expanded().chunks(self.q).all(|block| {
            let mut seen = vec![false; self.q];
            block.iter().all(|&s| {
                let fresh = !seen[s as usize];
                seen[s as usize] = true;
                fresh
            })
        })
    }

    /// Each length-q block is a cyclic permutation.
    pub fn is_cyclic_blocks(&self) -> bool {
        self.shifts().is_some()
    }
}

impl fmt::Display for UniversalVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let data = self.expanded();
        if self.q <= 10 {
            for &s in data.iter() {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let cells: Vec<String> = data.iter().map(u16::to_string).collect();
            write!(f, "{}", cells.join(" "))
        }
    }
}

/// Number of distinct coordinate pairs `(u_i, v_i)`.
///
/// Cyclic pairs short-cut through shift tuples: block i contributes the q
/// pairs `(a, a - d_i)` for the difference `d_i = r_i - s_i`, and blocks with
/// equal differences contribute identical pair sets, so the count is q times
/// the number of distinct differences.
pub fn distinct_pair_count(
    u: &UniversalVertex,
    v: &UniversalVertex,
) -> Result<usize, UniversalError> {
    if u.q != v.q {
        return Err(UniversalError::MismatchedAlphabet(u.q, v.q));
    }
    let q = u.q;
    if let (Repr::Cyclic(a), Repr::Cyclic(b)) = (&u.repr, &v.repr) {
        let mut seen = vec![false; q];
        let mut distinct = 0;
        for (&x, &y) in a.iter().zip(b) {
            let d = ((x as usize) + q - (y as usize)) % q;
            if !seen[d] {
                seen[d] = true;
                distinct += 1;
            }
        }
        return Ok(q * distinct);
    }
    let ue = u.expanded();
    let ve = v.expanded();
    if q * q <= 128 {
        let mut bits: u128 = 0;
        for (&x, &y) in ue.iter().zip(ve.iter()) {
            bits |= 1u128 << (x as usize * q + y as usize);
        }
        Ok(bits.count_ones() as usize)
    } else {
        let cells = q * q;
        let mut bits = vec![0u64; cells.div_ceil(64)];
        let mut distinct = 0;
        for (&x, &y) in ue.iter().zip(ve.iter()) {
            let idx = x as usize * q + y as usize;
            let (w, b) = (idx / 64, idx % 64);
            if bits[w] >> b & 1 == 0 {
                bits[w] |= 1 << b;
                distinct += 1;
            }
        }
        Ok(distinct)
    }
}

/// Smallest distinct-pair count that meets the adjacency threshold
/// `(1 - eps) * q^2`.
pub fn pair_threshold(q: usize, eps: &BigRational) -> Result<usize, UniversalError> {
    use num::traits::ToPrimitive;
    let q2 = BigRational::from_integer(BigInt::from(q * q));
    let needed = (BigRational::one() - eps) * q2;
    needed
        .ceil()
        .to_integer()
        .to_usize()
        .ok_or(UniversalError::CountOverflow)
}

/// Adjacency test: at least `(1 - eps) * q^2` distinct coordinate pairs
/// (exactly `q^2` when `eps = 0`).
pub fn gq_adjacent(
    u: &UniversalVertex,
    v: &UniversalVertex,
    eps: &BigRational,
) -> Result<bool, UniversalError> {
    let threshold = pair_threshold(u.q, eps)?;
    Ok(distinct_pair_count(u, v)? >= threshold)
}

// --- Enumeration --------------------------------------------------------------

/// The vector shape of a universal-graph vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexFamily {
    /// Balanced vectors: every symbol exactly q times.
    Balanced,
    /// Concatenations of q permutations.
    PermBlocks,
    /// Concatenations of q cyclic permutations.
    CyclicShifts,
    /// All vectors of `[q]^{q^2}`.
    Unrestricted,
}

impl VertexFamily {
    fn name(self) -> &'static str {
        match self {
            VertexFamily::Balanced => "balanced",
            VertexFamily::PermBlocks => "perm-blocks",
            VertexFamily::CyclicShifts => "cyclic-shifts",
            VertexFamily::Unrestricted => "unrestricted",
        }
    }

    fn cap(self) -> usize {
        match self {
            VertexFamily::Balanced | VertexFamily::PermBlocks => 3,
            VertexFamily::CyclicShifts => 6,
            VertexFamily::Unrestricted => 2,
        }
    }
}

/// Exact vertex count from the closed form.
pub fn vertex_count(q: usize, family: VertexFamily) -> Result<u128, UniversalError> {
    let qq = q as u128;
    let out = match family {
        // (q^2)! / (q!)^q as a product of binomials C(iq, q)
        VertexFamily::Balanced => {
            let mut acc: u128 = 1;
            for i in 1..=qq {
                acc = acc
                    .checked_mul(binomial(i * qq, qq))
                    .ok_or(UniversalError::CountOverflow)?;
            }
            acc
        }
        VertexFamily::PermBlocks => {
            let fact: u128 = (1..=qq).product();
            checked_pow(fact, q as u32)?
        }
        VertexFamily::CyclicShifts => checked_pow(qq, q as u32)?,
        VertexFamily::Unrestricted => checked_pow(qq, (q * q) as u32)?,
    };
    Ok(out)
}

fn checked_pow(base: u128, exp: u32) -> Result<u128, UniversalError> {
    base.checked_pow(exp).ok_or(UniversalError::CountOverflow)
}

/// All vertices of the family in lexicographic order of their expanded
/// vectors, with the exact count asserted against the closed form.
pub fn enumerate_vertices(
    q: usize,
    family: VertexFamily,
) -> Result<Vec<UniversalVertex>, UniversalError> {
    if q < 2 || q > family.cap() {
        return Err(UniversalError::CapExceeded {
            family: family.name(),
            q,
            cap: family.cap(),
        });
    }
    let out = match family {
        VertexFamily::Balanced => {
            let mut out = Vec::new();
            let mut counts = vec![q; q];
            let mut prefix = Vec::with_capacity(q * q);
            balanced_rec(q, &mut counts, &mut prefix, &mut out);
            out
        }
        VertexFamily::PermBlocks => {
            let perms = permutations_lex(q);
            let mut out = Vec::new();
            let mut choice = vec![0usize; q];
            loop {
                let mut data = Vec::with_capacity(q * q);
                for &c in &choice {
                    data.extend_from_slice(&perms[c]);
                }
                out.push(UniversalVertex::dense(q, data)?);
                if !odometer(&mut choice, perms.len()) {
                    break;
                }
            }
            out
        }
        VertexFamily::CyclicShifts => {
            let mut out = Vec::new();
            let mut shifts = vec![0usize; q];
            loop {
                out.push(UniversalVertex::cyclic(
                    q,
                    shifts.iter().map(|&s| s as u16).collect(),
                )?);
                if !odometer(&mut shifts, q) {
                    break;
                }
            }
            out
        }
        VertexFamily::Unrestricted => {
            let mut out = Vec::new();
            let mut data = vec![0usize; q * q];
            loop {
                out.push(UniversalVertex::dense(
                    q,
                    data.iter().map(|&s| s as u16).collect(),
                )?);
                if !odometer(&mut data, q) {
                    break;
                }
            }
            out
        }
    };
    assert_eq!(
        out.len() as u128,
        vertex_count(q, family)?,
        "enumeration disagrees with the closed-form count"
    );
    Ok(out)
}

fn balanced_rec(
    q: usize,
    counts: &mut Vec<usize>,
    prefix: &mut Vec<u16>,
    out: &mut Vec<UniversalVertex>,
) {
    if prefix.len() == q * q {
        out.push(UniversalVertex {
            q,
            repr: Repr::Dense(prefix.clone()),
        });
        return;
    }
    for s in 0..q {
        if counts[s] > 0 {
            counts[s] -= 1;
            prefix.push(s as u16);
            balanced_rec(q, counts, prefix, out);
            prefix.pop();
            counts[s] += 1;
        }
    }
}

/// Lexicographic odometer over `[radix]^len`; false when it wraps around.
fn odometer(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if *d + 1 < radix {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn permutations_lex(q: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut perm: Vec<u16> = (0..q as u16).collect();
    loop {
        out.push(perm.clone());
        // next lexicographic permutation
        let Some(i) = (0..q - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return out;
        };
        let j = (i + 1..q).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

/// The lexicographically first balanced vertex (all symbols sorted
/// ascending); where a fixed arbitrary vertex is needed, this is it.
pub fn first_balanced_vertex(q: usize) -> UniversalVertex {
    let mut data = Vec::with_capacity(q * q);
    for s in 0..q {
        data.extend(std::iter::repeat_n(s as u16, q));
    }
    UniversalVertex {
        q,
        repr: Repr::Dense(data),
    }
}

fn all_zero_vertex(q: usize) -> UniversalVertex {
    UniversalVertex {
        q,
        repr: Repr::Dense(vec![0; q * q]),
    }
}

// --- Canonical sets and covers -------------------------------------------------

/// A canonical independent set, decidable per vertex in O(q^2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CanonicalSet {
    /// Vertices with `u_i = u_j` (0-based coordinate indices).
    Pair { i: usize, j: usize },
    /// Vertices agreeing on every listed coordinate pair (disjoint pairs).
    PairList(Vec<(usize, usize)>),
    /// Cyclic vertices whose shift tuple satisfies `r_0 - r_1 = i` and
    /// `r_0 - r_2 = j` (differences mod q).
    CyclicDiff { i: u16, j: u16 },
    /// Permutation-block vertices with `u_t = u_{q + perm[t]}` for every t
    /// and `u_0 = u_{2q + extra}` (0-based).
    PermTuple { perm: Vec<usize>, extra: usize },
}

impl CanonicalSet {
    pub fn contains(&self, u: &UniversalVertex) -> Result<bool, UniversalError> {
        let q = u.q;
        match self {
            CanonicalSet::Pair { i, j } => {
                let data = u.expanded();
                if *i >= data.len() || *j >= data.len() {
                    return Err(UniversalError::BadVertex(format!(
                        "coordinate pair ({i},{j}) outside vector of length {}",
                        data.len()
                    )));
                }
                Ok(data[*i] == data[*j])
            }
            CanonicalSet::PairList(pairs) => {
                let data = u.expanded();
                for &(i, j) in pairs {
                    if i >= data.len() || j >= data.len() {
                        return Err(UniversalError::BadVertex(format!(
                            "coordinate pair ({i},{j}) outside vector of length {}",
                            data.len()
                        )));
                    }
                    if data[i] != data[j] {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CanonicalSet::CyclicDiff { i, j } => {
                let shifts = u.shifts().ok_or_else(|| {
                    UniversalError::BadVertex("vertex is not a cyclic concatenation".into())
                })?;
                if q < 3 {
                    return Err(UniversalError::UnsupportedFamily {
                        family: "cyclic difference sets",
                        q,
                        reason: "need at least three blocks".into(),
                    });
                }
                let diff = |a: u16, b: u16| (a as usize + q - b as usize) % q;
                Ok(diff(shifts[0], shifts[1]) == *i as usize
                    && diff(shifts[0], shifts[2]) == *j as usize)
            }
            CanonicalSet::PermTuple { perm, extra } => {
                let data = u.expanded();
                if q < 3 {
                    return Err(UniversalError::UnsupportedFamily {
                        family: "permutation tuple sets",
                        q,
                        reason: "need at least three blocks".into(),
                    });
                }
                for (t, &p) in perm.iter().enumerate() {
                    if data[t] != data[q + p] {
                        return Ok(false);
                    }
                }
                Ok(data[0] == data[2 * q + extra])
            }
        }
    }
}

impl fmt::Display for CanonicalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalSet::Pair { i, j } => write!(f, "pair {} {}", i + 1, j + 1),
            CanonicalSet::PairList(pairs) => {
                let cells: Vec<String> = pairs
                    .iter()
                    .map(|(i, j)| format!("{}={}", i + 1, j + 1))
                    .collect();
                write!(f, "pairs {}", cells.join(" "))
            }
            CanonicalSet::CyclicDiff { i, j } => write!(f, "diff {i} {j}"),
            CanonicalSet::PermTuple { perm, extra } => {
                let cells: Vec<String> = perm.iter().map(|p| (p + 1).to_string()).collect();
                write!(f, "perm {} extra {}", cells.join(" "), extra + 1)
            }
        }
    }
}

/// The universal-graph family a cover is built for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverFamily {
    /// Balanced vectors, exact adjacency.
    Gq,
    /// Permutation blocks, exact adjacency.
    Hq,
    /// Cyclic blocks at error 1/q.
    HqCyclicEps,
    /// Permutation blocks at error 1/q.
    HqEps,
    /// Unrestricted vectors at error 1/q.
    GqEps,
}

impl CoverFamily {
    pub fn name(self) -> &'static str {
        match self {
            CoverFamily::Gq => "gq",
            CoverFamily::Hq => "hq",
            CoverFamily::HqCyclicEps => "hq-cyclic-eps",
            CoverFamily::HqEps => "hq-eps",
            CoverFamily::GqEps => "gq-eps",
        }
    }

    /// The vertex family the cover lives on.
    pub fn vertex_family(self) -> VertexFamily {
        match self {
            CoverFamily::Gq => VertexFamily::Balanced,
            CoverFamily::Hq | CoverFamily::HqEps => VertexFamily::PermBlocks,
            CoverFamily::HqCyclicEps => VertexFamily::CyclicShifts,
            CoverFamily::GqEps => VertexFamily::Unrestricted,
        }
    }

    /// The error parameter under which the cover's sets are independent.
    pub fn epsilon(self, q: usize) -> BigRational {
        match self {
            CoverFamily::Gq | CoverFamily::Hq => BigRational::zero(),
            _ => BigRational::new(BigInt::one(), BigInt::from(q)),
        }
    }
}

/// Size of the canonical cover in closed form.
pub fn cover_size_formula(q: usize, family: CoverFamily) -> Result<u128, UniversalError> {
    let qq = q as u128;
    Ok(match family {
        CoverFamily::Gq => binomial(qq + 1, 2),
        CoverFamily::Hq => qq,
        CoverFamily::HqCyclicEps => qq * qq,
        CoverFamily::HqEps => {
            let fact: u128 = (1..=qq).product();
            fact.checked_mul(qq).ok_or(UniversalError::CountOverflow)?
        }
        CoverFamily::GqEps => {
            let pairs = qq + 1;
            // number of perfect matchings of 2(q+1) points: (2p-1)!!
            let mut matchings: u128 = 1;
            for i in 1..=pairs {
                matchings = matchings
                    .checked_mul(2 * i - 1)
                    .ok_or(UniversalError::CountOverflow)?;
            }
            binomial(3 * qq + 1, 2 * pairs)
                .checked_mul(matchings)
                .ok_or(UniversalError::CountOverflow)?
        }
    })
}

/// The canonical independent-set cover of the family's vertex set.
pub fn canonical_cover(
    q: usize,
    family: CoverFamily,
) -> Result<Vec<CanonicalSet>, UniversalError> {
    if q < 2 {
        return Err(UniversalError::UnsupportedFamily {
            family: family.name(),
            q,
            reason: "alphabet too small".into(),
        });
    }
    let cover = match family {
        // every vector repeats a symbol among its first q+1 coordinates
        CoverFamily::Gq => {
            let mut out = Vec::new();
            for i in 0..=q {
                for j in i + 1..=q {
                    out.push(CanonicalSet::Pair { i, j });
                }
            }
            out
        }
        // u_0 appears somewhere in the second block
        CoverFamily::Hq => (0..q).map(|i| CanonicalSet::Pair { i: 0, j: q + i }).collect(),
        CoverFamily::HqCyclicEps => {
            require_blocks(q, 3, family)?;
            let mut out = Vec::new();
            for i in 0..q as u16 {
                for j in 0..q as u16 {
                    out.push(CanonicalSet::CyclicDiff { i, j });
                }
            }
            out
        }
        CoverFamily::HqEps => {
            require_blocks(q, 3, family)?;
            let perms = permutations_lex(q);
            let mut out = Vec::new();
            for perm in &perms {
                for extra in 0..q {
                    out.push(CanonicalSet::PermTuple {
                        perm: perm.iter().map(|&p| p as usize).collect(),
                        extra,
                    });
                }
            }
            out
        }
        // iterated pigeonhole: q+1 disjoint equal pairs within the first
        // 3q+1 coordinates
        CoverFamily::GqEps => {
            if q < 4 {
                return Err(UniversalError::UnsupportedFamily {
                    family: family.name(),
                    q,
                    reason: format!(
                        "the index range {} exceeds the vector length {}",
                        3 * q + 1,
                        q * q
                    ),
                });
            }
            let indices = 3 * q + 1;
            let pair_count = q + 1;
            let mut out = Vec::new();
            for subset in crate::hypergraph::combinations(indices, 2 * pair_count) {
                pairings_rec(&subset, &mut vec![], &mut out);
            }
            out
        }
    };
    assert_eq!(
        cover.len() as u128,
        cover_size_formula(q, family)?,
        "cover disagrees with the closed-form count"
    );
    Ok(cover)
}

fn require_blocks(q: usize, needed: usize, family: CoverFamily) -> Result<(), UniversalError> {
    if q < needed {
        return Err(UniversalError::UnsupportedFamily {
            family: family.name(),
            q,
            reason: format!("need at least {needed} blocks"),
        });
    }
    Ok(())
}

/// All perfect matchings of `elements`, pairing the smallest remaining
/// element first so the order is deterministic.
fn pairings_rec(elements: &[usize], acc: &mut Vec<(usize, usize)>, out: &mut Vec<CanonicalSet>) {
    if elements.is_empty() {
        out.push(CanonicalSet::PairList(acc.clone()));
        return;
    }
    let first = elements[0];
    for idx in 1..elements.len() {
        let partner = elements[idx];
        let rest: Vec<usize> = elements[1..]
            .iter()
            .copied()
            .filter(|&e| e != partner)
            .collect();
        acc.push((first, partner));
        pairings_rec(&rest, acc, out);
        acc.pop();
    }
}

/// Colors every vertex by the index of the first covering set.
pub fn coloring_from_cover(
    cover: &[CanonicalSet],
    vertices: &[UniversalVertex],
) -> Result<Coloring, UniversalError> {
    let mut colors = Vec::with_capacity(vertices.len());
    for (index, vertex) in vertices.iter().enumerate() {
        let mut color = None;
        for (c, set) in cover.iter().enumerate() {
            if set.contains(vertex)? {
                color = Some(c);
                break;
            }
        }
        colors.push(color.ok_or(UniversalError::UncoveredVertex { index })?);
    }
    Ok(Coloring::new(colors))
}

/// Checks that same-colored vertices are pairwise non-adjacent at `eps`.
pub fn validate_universal_coloring(
    vertices: &[UniversalVertex],
    coloring: &Coloring,
    eps: &BigRational,
) -> Result<bool, UniversalError> {
    if coloring.len() != vertices.len() {
        return Ok(false);
    }
    let count = coloring.color_count();
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); count];
    for (v, &c) in coloring.colors().iter().enumerate() {
        classes[c].push(v);
    }
    let threshold = match vertices.first() {
        Some(v) => pair_threshold(v.q(), eps)?,
        None => return Ok(true),
    };
    for class in &classes {
        for (a, &i) in class.iter().enumerate() {
            for &j in &class[a + 1..] {
                if distinct_pair_count(&vertices[i], &vertices[j])? >= threshold {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

// --- Bridges between codes and universal graphs --------------------------------

/// Flattens the columns of an MDS code with k = 2 into pairwise-adjacent
/// balanced vertices: column i becomes the function `m -> C_i(m)` over the
/// lexicographically ordered messages.
pub fn clique_from_mds(code: &Code) -> Result<Vec<UniversalVertex>, UniversalError> {
    if code.k() != 2 {
        return Err(UniversalError::InvalidCode(format!(
            "clique extraction needs k = 2, got k = {}",
            code.k()
        )));
    }
    if code.n() >= 2 {
        let complete = Hypergraph::complete(code.n(), 2)?;
        let cert = code.verify_exact(&complete)?;
        if !cert.valid {
            let edge = cert
                .witness_edge
                .map(|e| e.iter().map(|v| v + 1).collect::<Vec<_>>())
                .unwrap_or_default();
            return Err(UniversalError::NotMds(format!(
                "edge {edge:?} is not exactly decodable"
            )));
        }
    }
    (0..code.n())
        .map(|i| UniversalVertex::dense(code.q(), code.column(i)?))
        .collect()
}

/// Maps each vertex of `g` to the universal-graph vertex realizing its
/// column function; isolated vertices go to a fixed first-enumerated vertex.
/// The code must verify on `g` (exactly for `eps = 0`, else at `eps`), which
/// makes the output a homomorphism into the universal graph at `eps`.
pub fn hom_from_code(
    code: &Code,
    g: &Hypergraph,
    eps: &BigRational,
) -> Result<Vec<UniversalVertex>, UniversalError> {
    if code.k() != 2 {
        return Err(UniversalError::InvalidCode(format!(
            "homomorphism extraction needs k = 2, got k = {}",
            code.k()
        )));
    }
    let cert = if eps.is_zero() {
        code.verify_exact(g)?
    } else {
        code.verify_eps(g, eps)?
    };
    if !cert.valid {
        let edge = cert
            .witness_edge
            .map(|e| e.iter().map(|v| v + 1).collect::<Vec<_>>())
            .unwrap_or_default();
        return Err(UniversalError::InvalidCode(format!(
            "edge {edge:?} fails verification"
        )));
    }
    let fallback = if eps.is_zero() {
        first_balanced_vertex(code.q())
    } else {
        all_zero_vertex(code.q())
    };
    (0..g.n())
        .map(|v| {
            if g.is_isolated(v) {
                Ok(fallback.clone())
            } else {
                Ok(UniversalVertex::dense(code.q(), code.column(v)?)?)
            }
        })
        .collect()
}

/// First canonical set housing `u` under the family's pigeonhole scan.
///
/// For exact adjacency the scan covers coordinate pairs within the first
/// q+1 entries (a repeat always exists). For the error-tolerant family the
/// iterated pigeonhole collects q+1 disjoint equal pairs within the first
/// 3q+1 entries; for q < 4 the window may be truncated by the vector length
/// and the scan can come up empty.
pub fn find_canonical_home(
    u: &UniversalVertex,
    family: CoverFamily,
) -> Result<Option<CanonicalSet>, UniversalError> {
    let q = u.q;
    match family {
        CoverFamily::Gq => {
            let data = u.expanded();
            for i in 0..=q {
                for j in i + 1..=q {
                    if data[i] == data[j] {
                        return Ok(Some(CanonicalSet::Pair { i, j }));
                    }
                }
            }
            Ok(None) // unreachable for well-formed vertices (pigeonhole)
        }
        CoverFamily::GqEps => {
            let data = u.expanded();
            let mut used = vec![false; data.len()];
            let mut pairs = Vec::with_capacity(q + 1);
            for t in 1..=q + 1 {
                let window = (q + 2 * t - 1).min(data.len());
                let mut found = None;
                'scan: for i in 0..window {
                    if used[i] {
                        continue;
                    }
                    for j in i + 1..window {
                        if !used[j] && data[i] == data[j] {
                            found = Some((i, j));
                            break 'scan;
                        }
                    }
                }
                match found {
                    Some((i, j)) => {
                        used[i] = true;
                        used[j] = true;
                        pairs.push((i, j));
                    }
                    None => return Ok(None),
                }
            }
            Ok(Some(CanonicalSet::PairList(pairs)))
        }
        other => Err(UniversalError::UnsupportedFamily {
            family: other.name(),
            q,
            reason: "canonical homes are defined for gq and gq-eps".into(),
        }),
    }
}

/// Monte Carlo check of the iterated pigeonhole: samples uniform vectors of
/// `[q]^{q^2}` and counts how many receive a canonical home in the
/// error-tolerant family. Reproducible per seed.
pub fn sample_canonical_homes(
    q: usize,
    samples: u64,
    seed: u64,
) -> Result<u64, UniversalError> {
    if q < 2 {
        return Err(UniversalError::BadVertex(format!(
            "alphabet size {q} is too small"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    for _ in 0..samples {
        let data: Vec<u16> = (0..q * q).map(|_| rng.gen_range(0..q) as u16).collect();
        let vertex = UniversalVertex::dense(q, data)?;
        if find_canonical_home(&vertex, CoverFamily::GqEps)?.is_some() {
            found += 1;
        }
    }
    Ok(found)
}

/// The probability that two fixed coordinates of a uniform balanced vector
/// in `[k]^{nk}` (each symbol n times) coincide: (n-1)/(nk-1).
pub fn balanced_collision_probability(
    n: u64,
    k: u64,
) -> Result<BigRational, UniversalError> {
    if n * k < 2 {
        return Err(UniversalError::BadVertex(format!(
            "need nk >= 2, got n = {n}, k = {k}"
        )));
    }
    Ok(BigRational::new(
        BigInt::from(n - 1),
        BigInt::from(n * k - 1),
    ))
}

// --- Materialized universal graphs ----------------------------------------------

/// A fully materialized universal graph with a bitset adjacency matrix,
/// immutable after build and shareable across workers.
#[derive(Debug)]
pub struct UniversalGraph {
    q: usize,
    eps: BigRational,
    vertices: Vec<UniversalVertex>,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl UniversalGraph {
    pub fn build(
        vertices: Vec<UniversalVertex>,
        eps: BigRational,
    ) -> Result<UniversalGraph, UniversalError> {
        let n = vertices.len();
        let q = vertices.first().map_or(2, |v| v.q);
        let words_per_row = n.div_ceil(64).max(1);
        let threshold = pair_threshold(q, &eps)?;
        let mut bits = vec![0u64; words_per_row * n];
        for i in 0..n {
            for j in i + 1..n {
                if distinct_pair_count(&vertices[i], &vertices[j])? >= threshold {
                    bits[i * words_per_row + j / 64] |= 1 << (j % 64);
                    bits[j * words_per_row + i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(UniversalGraph {
            q,
            eps,
            vertices,
            words_per_row,
            bits,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn eps(&self) -> &BigRational {
        &self.eps
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[UniversalVertex] {
        &self.vertices
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn adjacency_row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency_row(i)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// The graph as a 2-uniform hypergraph (for the coloring machinery).
    pub fn to_hypergraph(&self) -> Result<Hypergraph, UniversalError> {
        let n = self.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.adjacent(i, j) {
                    edges.push(vec![i, j]);
                }
            }
        }
        Ok(Hypergraph::new(n, 2, edges)?)
    }
}

static G2: OnceLock<UniversalGraph> = OnceLock::new();
static G3: OnceLock<UniversalGraph> = OnceLock::new();

/// The balanced universal graph at exact adjacency, materialized once per
/// process (q <= 3).
pub fn gq_graph(q: usize) -> Result<&'static UniversalGraph, UniversalError> {
    let cell = match q {
        2 => &G2,
        3 => &G3,
        _ => {
            return Err(UniversalError::CapExceeded {
                family: "balanced",
                q,
                cap: 3,
            })
        }
    };
    if let Some(g) = cell.get() {
        return Ok(g);
    }
    let vertices = enumerate_vertices(q, VertexFamily::Balanced)?;
    let graph = UniversalGraph::build(vertices, BigRational::zero())?;
    Ok(cell.get_or_init(|| graph))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::rs_code;
    use crate::galois::FieldSpec;
    use crate::rational::ratio;

    fn dense(q: usize, data: &[u16]) -> UniversalVertex {
        UniversalVertex::dense(q, data.to_vec()).unwrap()
    }

    #[test]
    fn adjacency_q2() {
        let a = dense(2, &[0, 0, 1, 1]);
        let b = dense(2, &[0, 1, 0, 1]);
        let c = dense(2, &[1, 1, 0, 0]);
        let zero = BigRational::zero();
        assert!(gq_adjacent(&a, &b, &zero).unwrap());
        assert!(!gq_adjacent(&a, &c, &zero).unwrap());
        assert!(gq_adjacent(&b, &c, &zero).unwrap());
    }

    #[test]
    fn cyclic_adjacency_shortcut() {
        let u = UniversalVertex::cyclic(3, vec![0, 0, 0]).unwrap();
        let v = UniversalVertex::cyclic(3, vec![0, 1, 2]).unwrap();
        assert!(gq_adjacent(&u, &v, &ratio(1, 3)).unwrap());
        // one distinct difference only
        let w = UniversalVertex::cyclic(3, vec![1, 1, 1]).unwrap();
        assert!(!gq_adjacent(&u, &w, &ratio(1, 3)).unwrap());

        // shortcut equals the definitional count on expansions, q <= 4
        for q in [3usize, 4] {
            let vertices = enumerate_vertices(q, VertexFamily::CyclicShifts).unwrap();
            for (a, u) in vertices.iter().enumerate() {
                for v in &vertices[a + 1..] {
                    let expanded_u = dense(q, &u.expanded());
                    let expanded_v = dense(q, &v.expanded());
                    assert_eq!(
                        distinct_pair_count(u, v).unwrap(),
                        distinct_pair_count(&expanded_u, &expanded_v).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(vertex_count(2, VertexFamily::Balanced).unwrap(), 6);
        assert_eq!(vertex_count(3, VertexFamily::Balanced).unwrap(), 1680);
        assert_eq!(vertex_count(3, VertexFamily::CyclicShifts).unwrap(), 27);
        assert_eq!(vertex_count(3, VertexFamily::PermBlocks).unwrap(), 216);
        assert_eq!(vertex_count(2, VertexFamily::Unrestricted).unwrap(), 16);

        for (q, family) in [
            (2, VertexFamily::Balanced),
            (3, VertexFamily::Balanced),
            (3, VertexFamily::PermBlocks),
            (3, VertexFamily::CyclicShifts),
            (2, VertexFamily::Unrestricted),
        ] {
            let vertices = enumerate_vertices(q, family).unwrap();
            assert_eq!(vertices.len() as u128, vertex_count(q, family).unwrap());
            // lexicographic order of expanded vectors
            for pair in vertices.windows(2) {
                assert!(pair[0].expanded() < pair[1].expanded());
            }
        }
        assert!(enumerate_vertices(4, VertexFamily::Balanced).is_err());
        assert!(enumerate_vertices(3, VertexFamily::Unrestricted).is_err());
    }

    #[test]
    fn balanced_q2_is_the_octahedron() {
        let g = gq_graph(2).unwrap();
        assert_eq!(g.len(), 6);
        for i in 0..6 {
            assert_eq!(g.degree(i), 4);
        }
    }

    #[test]
    fn vertex_classifiers() {
        let v = dense(2, &[0, 1, 1, 0]);
        assert!(v.is_balanced());
        assert!(v.is_perm_blocks());
        assert!(!dense(2, &[0, 0, 0, 1]).is_balanced());
        let c = UniversalVertex::cyclic(3, vec![2, 0, 1]).unwrap();
        assert!(c.is_balanced() && c.is_perm_blocks() && c.is_cyclic_blocks());
        assert_eq!(c.expanded()[0..3], [2, 0, 1]);
        let perm_not_cyclic = dense(3, &[0, 2, 1, 0, 1, 2, 0, 1, 2]);
        assert!(perm_not_cyclic.is_perm_blocks());
        assert!(!perm_not_cyclic.is_cyclic_blocks());
    }

    #[test]
    fn cover_sizes_and_membership() {
        assert_eq!(canonical_cover(3, CoverFamily::Gq).unwrap().len(), 6);
        assert_eq!(canonical_cover(3, CoverFamily::Hq).unwrap().len(), 3);
        assert_eq!(canonical_cover(4, CoverFamily::HqCyclicEps).unwrap().len(), 16);
        assert_eq!(canonical_cover(3, CoverFamily::HqEps).unwrap().len(), 18);
        assert_eq!(cover_size_formula(4, CoverFamily::GqEps).unwrap(), 270270);

        // pairings of a single 10-element subset: (2*5-1)!! = 945
        let mut out = Vec::new();
        pairings_rec(&(0..10).collect::<Vec<_>>(), &mut vec![], &mut out);
        assert_eq!(out.len(), 945);

        assert!(matches!(
            canonical_cover(3, CoverFamily::GqEps),
            Err(UniversalError::UnsupportedFamily { .. })
        ));
    }

    #[test]
    fn gq_eps_cover_materializes_at_q4() {
        let cover = canonical_cover(4, CoverFamily::GqEps).unwrap();
        assert_eq!(cover.len(), 270270);
        // every set is q+1 = 5 disjoint pairs within the first 13 coordinates
        for set in cover.iter().step_by(9973) {
            let CanonicalSet::PairList(pairs) = set else {
                panic!("unexpected set shape")
            };
            assert_eq!(pairs.len(), 5);
            let mut seen = Vec::new();
            for &(i, j) in pairs {
                assert!(i < j && j <= 12);
                seen.push(i);
                seen.push(j);
            }
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), 10);
        }
    }

    #[test]
    fn g2_cover_coloring() {
        let g = gq_graph(2).unwrap();
        let cover = canonical_cover(2, CoverFamily::Gq).unwrap();
        assert_eq!(cover.len(), 3);
        let coloring = coloring_from_cover(&cover, g.vertices()).unwrap();
        assert!(validate_universal_coloring(g.vertices(), &coloring, &BigRational::zero()).unwrap());
        assert_eq!(coloring.color_count(), 3);
    }

    #[test]
    fn h3_cover_coloring() {
        let vertices = enumerate_vertices(3, VertexFamily::PermBlocks).unwrap();
        let cover = canonical_cover(3, CoverFamily::Hq).unwrap();
        let coloring = coloring_from_cover(&cover, &vertices).unwrap();
        assert_eq!(coloring.color_count(), 3);
        assert!(validate_universal_coloring(&vertices, &coloring, &BigRational::zero()).unwrap());
    }

    #[test]
    fn cyclic_eps_cover_coloring_q4() {
        let vertices = enumerate_vertices(4, VertexFamily::CyclicShifts).unwrap();
        let cover = canonical_cover(4, CoverFamily::HqCyclicEps).unwrap();
        let coloring = coloring_from_cover(&cover, &vertices).unwrap();
        assert_eq!(coloring.color_count(), 16);
        assert!(validate_universal_coloring(&vertices, &coloring, &ratio(1, 4)).unwrap());
    }

    #[test]
    fn canonical_sets_are_independent_in_g2() {
        let g = gq_graph(2).unwrap();
        for set in canonical_cover(2, CoverFamily::Gq).unwrap() {
            let members: Vec<usize> = (0..g.len())
                .filter(|&i| set.contains(&g.vertices()[i]).unwrap())
                .collect();
            for (a, &i) in members.iter().enumerate() {
                for &j in &members[a + 1..] {
                    assert!(!g.adjacent(i, j));
                }
            }
        }
    }

    #[test]
    fn cliques_from_mds_codes() {
        let f2 = FieldSpec::new(2).unwrap();
        let clique = clique_from_mds(&rs_code(&f2, 3, 2).unwrap()).unwrap();
        assert_eq!(clique.len(), 3);
        let expected = ["0011", "0110", "0101"];
        for (v, e) in clique.iter().zip(expected) {
            assert_eq!(v.to_string(), e);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(gq_adjacent(&clique[i], &clique[j], &BigRational::zero()).unwrap());
            }
        }

        let f3 = FieldSpec::new(3).unwrap();
        let clique = clique_from_mds(&rs_code(&f3, 4, 2).unwrap()).unwrap();
        assert_eq!(clique.len(), 4);
        for i in 0..4 {
            assert!(clique[i].is_balanced());
            for j in i + 1..4 {
                assert!(gq_adjacent(&clique[i], &clique[j], &BigRational::zero()).unwrap());
            }
        }

        // two equal columns are not MDS
        let twin =
            Code::from_columns(2, 2, &[vec![0, 0, 1, 1], vec![0, 0, 1, 1]]).unwrap();
        assert!(matches!(
            clique_from_mds(&twin),
            Err(UniversalError::NotMds(_))
        ));

        // a single column has no edges to check: a vacuous 1-clique
        let lone = Code::from_columns(2, 2, &[vec![0, 0, 1, 1]]).unwrap();
        assert_eq!(clique_from_mds(&lone).unwrap().len(), 1);
    }

    #[test]
    fn hom_from_code_on_k3() {
        let f2 = FieldSpec::new(2).unwrap();
        let code = rs_code(&f2, 3, 2).unwrap();
        let k3 = Hypergraph::complete(3, 2).unwrap();
        let hom = hom_from_code(&code, &k3, &BigRational::zero()).unwrap();
        let names: Vec<String> = hom.iter().map(|v| v.to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["0011", "0101", "0110"]);

        // isolated vertices take the first balanced vertex
        let path = Hypergraph::new(4, 2, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let columns = vec![
            code.column(0).unwrap(),
            code.column(1).unwrap(),
            code.column(2).unwrap(),
            vec![0, 0, 0, 0],
        ];
        let padded = Code::from_columns(2, 2, &columns).unwrap();
        let hom = hom_from_code(&padded, &path, &BigRational::zero()).unwrap();
        assert_eq!(hom[3], first_balanced_vertex(2));
    }

    /// Two columns sharing 3 of 4 pairs support an error-tolerant map but
    /// not an exact one.
    #[test]
    fn hom_from_code_at_positive_eps() {
        let code =
            Code::from_columns(2, 2, &[vec![0, 0, 1, 1], vec![0, 1, 0, 0]]).unwrap();
        let g = Hypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(matches!(
            hom_from_code(&code, &g, &BigRational::zero()),
            Err(UniversalError::InvalidCode(_))
        ));
        let map = hom_from_code(&code, &g, &ratio(1, 4)).unwrap();
        assert!(gq_adjacent(&map[0], &map[1], &ratio(1, 4)).unwrap());
        assert!(!gq_adjacent(&map[0], &map[1], &BigRational::zero()).unwrap());
    }

    #[test]
    fn canonical_homes() {
        let u = dense(3, &[0, 1, 2, 0, 1, 2, 0, 1, 2]);
        assert_eq!(
            find_canonical_home(&u, CoverFamily::Gq).unwrap(),
            Some(CanonicalSet::Pair { i: 0, j: 3 })
        );
        let v = dense(2, &[0, 0, 1, 1]);
        assert_eq!(
            find_canonical_home(&v, CoverFamily::Gq).unwrap(),
            Some(CanonicalSet::Pair { i: 0, j: 1 })
        );

        // seeded sampling at q = 4: a home always exists
        let found = sample_canonical_homes(4, 2000, 0).unwrap();
        assert_eq!(found, 2000);

        // found homes are disjoint equal pairs within [3q+1]
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let data: Vec<u16> = (0..16).map(|_| rng.gen_range(0..4) as u16).collect();
            let vertex = UniversalVertex::dense(4, data.clone()).unwrap();
            let Some(CanonicalSet::PairList(pairs)) =
                find_canonical_home(&vertex, CoverFamily::GqEps).unwrap()
            else {
                panic!("home must exist at q = 4");
            };
            assert_eq!(pairs.len(), 5);
            let mut used = Vec::new();
            for (i, j) in pairs {
                assert!(j <= 12);
                assert_eq!(data[i], data[j]);
                used.push(i);
                used.push(j);
            }
            used.sort_unstable();
            used.dedup();
            assert_eq!(used.len(), 10);
        }
    }

    #[test]
    fn collision_probability_formula() {
        assert_eq!(balanced_collision_probability(2, 2).unwrap(), ratio(1, 3));
        assert_eq!(balanced_collision_probability(1, 5).unwrap(), ratio(0, 1));
        assert_eq!(balanced_collision_probability(3, 3).unwrap(), ratio(1, 4));
        assert!(balanced_collision_probability(1, 1).is_err());

        // exhaustive oracle at (n, k) = (2, 2): balanced vectors of [2]^4
        let vertices = enumerate_vertices(2, VertexFamily::Balanced).unwrap();
        let hits = vertices
            .iter()
            .filter(|v| v.expanded()[0] == v.expanded()[1])
            .count();
        assert_eq!(ratio(hits as i64, vertices.len() as i64), ratio(1, 3));

        // and at (3, 3): balanced vectors of [3]^9
        let vertices = enumerate_vertices(3, VertexFamily::Balanced).unwrap();
        let hits = vertices
            .iter()
            .filter(|v| v.expanded()[0] == v.expanded()[1])
            .count();
        assert_eq!(
            ratio(hits as i64, vertices.len() as i64),
            balanced_collision_probability(3, 3).unwrap()
        );
    }
}
