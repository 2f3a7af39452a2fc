//! Code constructions: composing a base code along a strong coloring,
//! projective linear codes, average-error clique codes, and pulling a code
//! back along a homomorphism into a universal graph.

use num::bigint::BigInt;
use num::integer::binomial;
use num::rational::BigRational;
use num::traits::One;
use thiserror::Error;

use crate::codes::{self, Code, CodeError};
use crate::galois::{FieldSpec, GaloisError};
use crate::hypergraph::{self, Coloring, Hypergraph, HypergraphError};
use crate::universal::{self, UniversalError, UniversalVertex};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("coloring is not strong-valid for the hypergraph")]
    InvalidColoring,
    #[error("base code has {base_n} columns but the coloring uses {colors} colors")]
    BaseTooShort { base_n: usize, colors: usize },
    #[error("base code is {base_k}-dimensional but the hypergraph is {k}-uniform")]
    UniformityMismatch { base_k: usize, k: usize },
    #[error("vertex map does not preserve edge {edge:?}")]
    NotHomomorphism { edge: Vec<usize> },
    #[error("vertex map entry {index} has alphabet {got}, expected {expected}")]
    MixedAlphabets {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("vertex map covers {got} vertices, hypergraph has {expected}")]
    WrongMapLength { got: usize, expected: usize },
    #[error("average-error construction needs n >= 2, got n = {0}")]
    TooFewVertices(usize),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] GaloisError),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
    #[error(transparent)]
    Universal(#[from] UniversalError),
}

/// Composes a base code along a strong coloring: output column i is the base
/// column of vertex i's color. Whenever the base is exactly valid for the
/// complete hypergraph on the colors, the output is exactly valid for `g`
/// (and an error-tolerant base propagates its tolerance the same way).
pub fn compose(g: &Hypergraph, coloring: &Coloring, base: &Code) -> Result<Code, ConstructError> {
    if !hypergraph::validate_coloring(g, coloring) {
        return Err(ConstructError::InvalidColoring);
    }
    if base.k() != g.k() {
        return Err(ConstructError::UniformityMismatch {
            base_k: base.k(),
            k: g.k(),
        });
    }
    let colors = coloring.color_count();
    if colors > base.n() {
        return Err(ConstructError::BaseTooShort {
            base_n: base.n(),
            colors,
        });
    }
    if let Some(gen) = base.generator() {
        let rows: Vec<Vec<u64>> = gen
            .rows
            .iter()
            .map(|row| coloring.colors().iter().map(|&c| row[c]).collect())
            .collect();
        return Ok(Code::linear(gen.field.clone(), rows)?);
    }
    let columns: Vec<Vec<u16>> = coloring
        .colors()
        .iter()
        .map(|&c| base.column(c))
        .collect::<Result<_, _>>()?;
    Ok(Code::from_columns(base.q(), base.k(), &columns)?)
}

/// The linear code whose generator columns are all normalized vectors of
/// F^k, in the same order as the projective hypergraph's vertices; exactly
/// valid on that hypergraph because its edges are the independent k-sets.
pub fn pg_linear_code(
    f: &FieldSpec,
    k: usize,
    vertex_cap: usize,
) -> Result<Code, ConstructError> {
    let vectors = hypergraph::normalized_vectors(f, k, vertex_cap)?;
    let rows: Vec<Vec<u64>> = (0..k)
        .map(|i| vectors.iter().map(|v| v[i]).collect())
        .collect();
    Ok(Code::linear(f.clone(), rows)?)
}

/// The average-error code for the complete graph on n vertices over a
/// prime-power alphabet p: vertices are labeled row-major by
/// `(i, j) in [p+1] x [alpha]` (plus a leftover block), and every vertex
/// labeled `(i, _)` carries column i of the MDS base code of length p + 1.
/// Only same-i edges can fail, which keeps the average success at least
/// 1 - 1/(p+1).
pub fn average_error_code(p: u64, n: usize) -> Result<Code, ConstructError> {
    if n < 2 {
        return Err(ConstructError::TooFewVertices(n));
    }
    let field = FieldSpec::new(p)?;
    let base = codes::rs_code(&field, p as usize + 1, 2)?;
    let gen = base.generator().expect("rs codes are linear");
    let block = p as usize + 1;
    let rows: Vec<Vec<u64>> = gen
        .rows
        .iter()
        .map(|row| (0..n).map(|v| row[v % block]).collect())
        .collect();
    Ok(Code::linear(field, rows)?)
}

/// The closed-form lower bound on the average success of
/// [`average_error_code`]: with alpha = floor(n / (p+1)) full label blocks
/// and r leftovers, at most C(alpha, 2) * (p+1) + r * alpha of the C(n, 2)
/// edges repeat a label, and only those can fail.
pub fn average_error_lower_bound(p: u64, n: usize) -> BigRational {
    let block = p as u128 + 1;
    let alpha = n as u128 / block;
    let r = n as u128 - alpha * block;
    if alpha == 0 {
        return BigRational::one();
    }
    let bad = binomial(alpha, 2) * block + r * alpha;
    let total = binomial(n as u128, 2);
    BigRational::one()
        - BigRational::new(BigInt::from(bad), BigInt::from(total))
}

/// Pulls a code back along a vertex map into a universal graph: the column
/// of vertex v is the q^2-vector of `map[v]` read as a function of the
/// lexicographic messages. The map must send every edge of `g` to an
/// adjacent pair at error `eps`; with `eps = 0` the result is exactly valid
/// on `g`.
pub fn code_from_hom(
    map: &[UniversalVertex],
    g: &Hypergraph,
    eps: &BigRational,
) -> Result<Code, ConstructError> {
    if map.len() != g.n() {
        return Err(ConstructError::WrongMapLength {
            got: map.len(),
            expected: g.n(),
        });
    }
    let q = map.first().map_or(2, UniversalVertex::q);
    for (index, vertex) in map.iter().enumerate() {
        if vertex.q() != q {
            return Err(ConstructError::MixedAlphabets {
                index,
                got: vertex.q(),
                expected: q,
            });
        }
    }
    for edge in g.edges() {
        if !universal::gq_adjacent(&map[edge[0]], &map[edge[1]], eps)? {
            return Err(ConstructError::NotHomomorphism {
                edge: edge.iter().map(|&v| v + 1).collect(),
            });
        }
    }
    let columns: Vec<Vec<u16>> = map.iter().map(|v| v.expanded().into_owned()).collect();
    Ok(Code::from_columns(q, 2, &columns)?)
}
