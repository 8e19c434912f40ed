//! Brute-force homology over Z2, trusted by construction.
//!
//! Everything here recomputes from scratch on every call: boundary matrices
//! are rebuilt with sorted-simplex indexing and ranks come straight out of
//! fresh eliminations. That is slow and deliberately so; the point of this
//! module is to be independent of the tracker's incremental state so it can
//! sit in judgment of it.

use crate::simplicial::{boundary_of_chain, Simplex, SimplicialComplex, Z2Chain};
use crate::z2::{rank, BitVec, Z2Matrix};
use crate::{Error, Result};

/// Betti numbers per dimension, index = dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector(pub Vec<usize>);

/// Boundary matrix of dimension `p` with rows indexed by the sorted
/// (p-1)-simplices and columns by the sorted p-simplices. For `p == 0` the
/// matrix has zero rows.
fn boundary_matrix(k: &SimplicialComplex, p: usize) -> Z2Matrix {
    let rows: Vec<&Simplex> = if p == 0 {
        Vec::new()
    } else {
        k.simplices(p - 1).collect()
    };
    let row_of = |s: &Simplex| rows.binary_search_by(|r| (*r).cmp(s)).expect("face present");
    let mut m = Z2Matrix::new(rows.len());
    for s in k.simplices(p) {
        let mut col = BitVec::new();
        if p > 0 {
            for f in s.faces() {
                col.set(row_of(&f));
            }
        }
        m.push_col(col);
    }
    m
}

fn chain_as_column(k: &SimplicialComplex, c: &Z2Chain) -> Result<BitVec> {
    let p = c.dimension();
    let rows: Vec<&Simplex> = k.simplices(p).collect();
    let mut col = BitVec::new();
    for s in c.support() {
        match rows.binary_search_by(|r| (*r).cmp(s)) {
            Ok(i) => col.set(i),
            Err(_) => return Err(Error::MissingSimplex { simplex: s.clone() }),
        }
    }
    Ok(col)
}

/// Betti number in dimension `p`: `dim C_p - rank d_p - rank d_{p+1}`.
#[must_use]
pub fn betti(k: &SimplicialComplex, p: usize) -> usize {
    let c_p = k.count(p);
    if c_p == 0 {
        return 0;
    }
    c_p - rank(&boundary_matrix(k, p)) - rank(&boundary_matrix(k, p + 1))
}

/// Betti numbers for dimensions `0..=max(2, dim K)`.
#[must_use]
pub fn betti_vector(k: &SimplicialComplex) -> BettiVector {
    let top = k.dimension().unwrap_or(0).max(2);
    BettiVector((0..=top).map(|p| betti(k, p)).collect())
}

/// Whether a cycle bounds: is `c` in the image of `d_{p+1}`? Errors if `c`
/// is not a cycle of the complex (support present, boundary zero). The empty
/// chain is a boundary.
pub fn is_boundary(k: &SimplicialComplex, c: &Z2Chain) -> Result<bool> {
    if !boundary_of_chain(c, k)?.is_empty() {
        return Err(Error::NonCycle);
    }
    if c.is_empty() {
        return Ok(true);
    }
    let target = chain_as_column(k, c)?;
    let image = boundary_matrix(k, c.dimension() + 1);
    Ok(crate::z2::solve_in_span(&image, &target).is_some())
}

/// Whether two cycles of the same dimension are homologous: their sum bounds.
pub fn homologous(k: &SimplicialComplex, a: &Z2Chain, b: &Z2Chain) -> Result<bool> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch { expected: a.dimension(), found: b.dimension() });
    }
    let mut sum = a.clone();
    sum.add_assign(b);
    // Validate both inputs are cycles even when the sum cancels support.
    if !boundary_of_chain(a, k)?.is_empty() || !boundary_of_chain(b, k)?.is_empty() {
        return Err(Error::NonCycle);
    }
    is_boundary(k, &sum)
}

/// Checks that `cycles` is a homology basis for dimension `p`: every entry a
/// nontrivial cycle of the complex, their classes jointly independent, and
/// exactly `betti(k, p)` of them. Returns `false` rather than erroring on
/// malformed input (an empty chain, a non-cycle, a stale simplex).
#[must_use]
pub fn validate_basis(k: &SimplicialComplex, p: usize, cycles: &[Z2Chain]) -> bool {
    if cycles.len() != betti(k, p) {
        return false;
    }
    let image = boundary_matrix(k, p + 1);
    let base_rank = rank(&image);
    let mut augmented = image;
    for c in cycles {
        if c.dimension() != p || c.is_empty() {
            return false;
        }
        match boundary_of_chain(c, k) {
            Ok(b) if b.is_empty() => {}
            _ => return false,
        }
        match chain_as_column(k, c) {
            Ok(col) => augmented.push_col(col),
            Err(_) => return false,
        }
    }
    rank(&augmented) == base_rank + cycles.len()
}
