//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`: the base-p digits of the
//! value are the coefficients of the representing polynomial, low degree
//! first. This keeps field elements interoperable with the alphabet symbols
//! `[q]` used by nonlinear code tables.

use std::sync::Arc;

use thiserror::Error;

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Field sizes up to this bound precompute full multiplication and inverse
/// tables; everything larger multiplies polynomials on the fly.
const TABLE_LIMIT: u64 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("{0} is not a prime power (a field requires q = p^m with p prime, q >= 2)")]
    NotPrimePower(u64),
    #[error("field size {0} exceeds the supported maximum {MAX_FIELD_SIZE}")]
    FieldTooLarge(u64),
    #[error("element {value} out of range for GF({q})")]
    ElementOutOfRange { value: u64, q: u64 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

#[derive(Debug)]
struct Tables {
    mul: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field GF(p^m), immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    q: u64,
    /// Monic irreducible reduction polynomial, coefficient of x^i at index i
    /// (length m+1). Chosen as the lexicographically smallest irreducible,
    /// coefficients compared low-to-high degree, so fields are deterministic
    /// across runs.
    reduction: Vec<u64>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}
impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds the field of size `q`, rejecting non-prime-powers (including
    /// q = 1) and sizes above [`MAX_FIELD_SIZE`].
    pub fn new(q: u64) -> Result<FieldSpec, GaloisError> {
        let (p, m) = prime_power_parts(q).ok_or(GaloisError::NotPrimePower(q))?;
        if q > MAX_FIELD_SIZE {
            return Err(GaloisError::FieldTooLarge(q));
        }
        let reduction = smallest_irreducible(p, m);
        let mut field = FieldSpec {
            p,
            m,
            q,
            reduction,
            tables: None,
        };
        if q <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut mul = vec![0u16; q * q];
        for a in 0..self.q {
            for b in a..self.q {
                let prod = self.mul_slow(a, b) as u16;
                mul[(a * self.q + b) as usize] = prod;
                mul[(b * self.q + a) as usize] = prod;
            }
        }
        let mut inv = vec![0u16; q];
        for a in 1..self.q {
            for b in 1..self.q {
                if mul[(a * self.q + b) as usize] == 1 {
                    inv[a as usize] = b as u16;
                    break;
                }
            }
        }
        Tables { mul, inv }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Reduction polynomial coefficients, low degree first (length m+1).
    pub fn reduction_polynomial(&self) -> &[u64] {
        &self.reduction
    }

    /// Validates an externally supplied symbol as a field element.
    pub fn element(&self, value: u64) -> Result<u64, GaloisError> {
        if value < self.q {
            Ok(value)
        } else {
            Err(GaloisError::ElementOutOfRange {
                value,
                q: self.q,
            })
        }
    }

    /// All elements in increasing integer encoding.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.q
    }

    fn check(&self, a: u64) {
        assert!(
            a < self.q,
            "element {a} out of range for GF({}); validate inputs with FieldSpec::element",
            self.q
        );
    }

    /// Digit-wise sum mod p.
    pub fn add(&self, a: u64, b: u64) -> u64 {
        self.check(a);
        self.check(b);
        if self.m == 1 {
            return (a + b) % self.p;
        }
        self.zip_digits(a, b, |x, y| (x + y) % self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.check(a);
        self.check(b);
        if self.m == 1 {
            return (a + self.p - b) % self.p;
        }
        self.zip_digits(a, b, |x, y| (x + self.p - y) % self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    fn zip_digits(&self, a: u64, b: u64, op: impl Fn(u64, u64) -> u64) -> u64 {
        let mut out = 0;
        let mut scale = 1;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.m {
            out += op(a % self.p, b % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    /// Polynomial product reduced by the reduction polynomial.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.check(a);
        self.check(b);
        if let Some(tables) = &self.tables {
            return tables.mul[(a * self.q + b) as usize] as u64;
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        if self.m == 1 {
            return (a as u128 * b as u128 % self.p as u128) as u64;
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let m = self.m as usize;
        let mut conv = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                conv[i + j] = (conv[i + j] + x * y) % self.p;
            }
        }
        // reduce: x^(m+t) == -(reduction minus leading term) * x^t
        for i in (m..conv.len()).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            for j in 0..m {
                let r = self.reduction[j];
                if r != 0 {
                    let idx = i - m + j;
                    let sub = c * r % self.p;
                    conv[idx] = (conv[idx] + self.p - sub) % self.p;
                }
            }
        }
        self.undigits(&conv[..m])
    }

    /// Multiplicative inverse. Errors on zero.
    pub fn inv(&self, a: u64) -> Result<u64, GaloisError> {
        self.check(a);
        if a == 0 {
            return Err(GaloisError::ZeroInverse);
        }
        if let Some(tables) = &self.tables {
            return Ok(tables.inv[a as usize] as u64);
        }
        // Nonzero elements form a cyclic group of order q-1.
        Ok(self.pow(a, self.q - 2))
    }

    pub fn pow(&self, a: u64, mut exp: u64) -> u64 {
        self.check(a);
        let mut base = a;
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn digits(&self, mut value: u64) -> Vec<u64> {
        let mut out = vec![0; self.m as usize];
        for d in out.iter_mut() {
            *d = value % self.p;
            value /= self.p;
        }
        out
    }

    fn undigits(&self, digits: &[u64]) -> u64 {
        let mut out = 0;
        for &d in digits.iter().rev() {
            out = out * self.p + d;
        }
        out
    }
}

/// True iff `x = p^m` for a prime p and m >= 1.
pub fn is_prime_power(x: u64) -> bool {
    prime_power_parts(x).is_some()
}

/// Decomposes a prime power into (p, m); `None` if `x` is not one.
pub fn prime_power_parts(x: u64) -> Option<(u64, u32)> {
    if x < 2 {
        return None;
    }
    let p = smallest_prime_factor(x);
    let mut rest = x;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// The smallest prime power `>= max(x, 2)`.
pub fn next_prime_power(x: u64) -> u64 {
    let mut candidate = x.max(2);
    loop {
        if is_prime_power(candidate) {
            return candidate;
        }
        candidate += 1;
    }
}

fn smallest_prime_factor(x: u64) -> u64 {
    if x.is_multiple_of(2) {
        return 2;
    }
    let mut d = 3;
    while d * d <= x {
        if x.is_multiple_of(d) {
            return d;
        }
        d += 2;
    }
    x
}

/// Lexicographically smallest monic irreducible of degree m over GF(p),
/// coefficients compared low-to-high degree.
fn smallest_irreducible(p: u64, m: u32) -> Vec<u64> {
    let m = m as usize;
    if m == 1 {
        // x itself; reduction is only used for m >= 2 but keep it well formed
        return vec![0, 1];
    }
    let total = p.pow(m as u32);
    for encoded in 0..total {
        let mut coeffs = vec![0u64; m + 1];
        coeffs[m] = 1;
        let mut rest = encoded;
        // earlier (lower-degree) coefficients are the most significant in the
        // comparison order
        for i in (0..m).rev() {
            coeffs[m - 1 - i] = rest / p.pow(i as u32);
            rest %= p.pow(i as u32);
        }
        if poly_is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible of every degree exists over GF(p)")
}

/// Trial division against all lower-degree monics.
fn poly_is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    if f[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for encoded in 0..count {
            let mut g = vec![0u64; d + 1];
            g[d] = 1;
            let mut rest = encoded;
            for c in g.iter_mut().take(d) {
                *c = rest % p;
                rest /= p;
            }
            if poly_rem_is_zero(f, &g, p) {
                return false;
            }
        }
    }
    true
}

/// True iff monic `g` divides `f` over GF(p).
fn poly_rem_is_zero(f: &[u64], g: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = f.to_vec();
    let dg = g.len() - 1;
    while rem.len() > dg {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dg;
        if lead != 0 {
            for (i, &gc) in g.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + p - lead * gc % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

// --- Linear algebra over a field -------------------------------------------

/// Rank of a row-major matrix by Gaussian elimination.
pub fn matrix_rank(rows: &[Vec<u64>], f: &FieldSpec) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let scale = f.inv(m[rank][col]).expect("pivot is nonzero");
        for cell in m[rank][col..].iter_mut() {
            *cell = f.mul(*cell, scale);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (cell, &pv) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *cell = f.sub(*cell, f.mul(factor, pv));
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// True iff the square matrix is invertible over `f`.
pub fn matrix_is_invertible(rows: &[Vec<u64>], f: &FieldSpec) -> bool {
    !rows.is_empty() && rows.len() == rows[0].len() && matrix_rank(rows, f) == rows.len()
}

/// A deterministic nonzero vector `v` with `v * rows = 0`, if the rows are
/// linearly dependent. Pivoting picks the lowest usable row, so for a fixed
/// matrix the same witness comes back every time.
pub fn left_kernel_vector(rows: &[Vec<u64>], f: &FieldSpec) -> Option<Vec<u64>> {
    let k = rows.len();
    if k == 0 {
        return None;
    }
    let ncols = rows[0].len();
    // Eliminate on the transpose: columns of the working matrix index the
    // original rows amid standard RREF; a free column yields the witness.
    let mut m: Vec<Vec<u64>> = (0..ncols)
        .map(|c| (0..k).map(|r| rows[r][c]).collect())
        .collect();
    let nrows = ncols;
    let mut pivot_row_of_col: Vec<Option<usize>> = vec![None; k];
    let mut next_row = 0;
    for col in 0..k {
        let Some(pivot) = (next_row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(next_row, pivot);
        let scale = f.inv(m[next_row][col]).expect("pivot is nonzero");
        for cell in m[next_row].iter_mut() {
            *cell = f.mul(*cell, scale);
        }
        let pivot_row = m[next_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != next_row && row[col] != 0 {
                let factor = row[col];
                for (cell, &pv) in row.iter_mut().zip(&pivot_row) {
                    *cell = f.sub(*cell, f.mul(factor, pv));
                }
            }
        }
        pivot_row_of_col[col] = Some(next_row);
        next_row += 1;
    }
    let free = (0..k).find(|&c| pivot_row_of_col[c].is_none())?;
    let mut v = vec![0u64; k];
    v[free] = 1;
    for (col, pivot) in pivot_row_of_col.iter().enumerate() {
        if let Some(row) = pivot {
            v[col] = f.neg(m[*row][free]);
        }
    }
    Some(v)
}
