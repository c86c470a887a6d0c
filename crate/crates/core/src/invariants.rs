//! The invariant triple `(o, chi, b)` of a connected surface.
//!
//! * `o`: the orientation double cover splits into two components exactly
//!   when the surface is orientable.
//! * `chi = |V| - |E| + n`, where `|E| = (3n + x) / 2` for `x` unglued edges
//!   and `|V|` is the number of components of `K`.
//! * `b = k' - k + x`, where `k` and `k'` count components of `K` and `K'`.

use std::fmt;

use crate::connectivity::{count_components, ConnectivityOracle};
use crate::error::{Error, Result};
use crate::graphs::{boundary_identification_graph, double_cover, face_dual, vertex_identification_graph};
use crate::triangulation::Triangulation;

/// `(o, chi, b)`, ordered lexicographically in that field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantTriple {
    /// 0 orientable, 1 non-orientable.
    pub o: u8,
    pub chi: i64,
    pub b: u64,
}

impl InvariantTriple {
    pub fn new(o: u8, chi: i64, b: u64) -> Self {
        Self { o, chi, b }
    }

    pub fn is_orientable(&self) -> bool {
        self.o == 0
    }
}

impl fmt::Display for InvariantTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o={} chi={} b={}", self.o, self.chi, self.b)
    }
}

/// `|E| = (3n + x) / 2`, with the parity the formula needs.
pub fn edge_count(n: usize, x: usize) -> Result<usize> {
    let twice = 3 * n + x;
    if !twice.is_multiple_of(2) {
        return Err(Error::Parity { n, x });
    }
    Ok(twice / 2)
}

fn require_connected(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<()> {
    let c = count_components(oracle, &face_dual(tri))?;
    if c != 1 {
        return Err(Error::NotConnected { components: c });
    }
    Ok(())
}

/// 0 if orientable, 1 if not. The input must be a connected surface.
pub fn orientability(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<u8> {
    require_connected(tri, oracle)?;
    let sheets = count_components(oracle, &face_dual(&double_cover(tri)))?;
    match sheets {
        2 => Ok(0),
        1 => Ok(1),
        c => Err(Error::NotConnected { components: c }),
    }
}

/// Euler characteristic; additive over components, so connectedness is not
/// required.
pub fn euler_characteristic(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<i64> {
    let n = tri.triangle_count();
    let x = tri.boundary_edge_count();
    let edges = edge_count(n, x)?;
    let vertices = count_components(oracle, &vertex_identification_graph(tri))?;
    Ok(vertices as i64 - edges as i64 + n as i64)
}

pub fn boundary_components(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<u64> {
    let k = count_components(oracle, &vertex_identification_graph(tri))? as i64;
    let k_prime = count_components(oracle, &boundary_identification_graph(tri))? as i64;
    let x = tri.boundary_edge_count() as i64;
    let b = k_prime - k + x;
    assert!(b >= 0, "negative boundary count k'={k_prime} k={k} x={x}");
    Ok(b as u64)
}

pub fn invariant_triple(tri: &Triangulation, oracle: &dyn ConnectivityOracle) -> Result<InvariantTriple> {
    let o = orientability(tri, oracle)?;
    Ok(InvariantTriple { o, chi: euler_characteristic(tri, oracle)?, b: boundary_components(tri, oracle)? })
}
