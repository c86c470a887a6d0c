//! The space-metered engine.
//!
//! Every stage reads its input through a [`TableSource`] and hands graphs to
//! the oracles as streams, so intermediate tables and graphs are recomputed
//! on demand instead of stored. Loop indices and counters are charged to the
//! [`MeteredWorkspace`] at `ceil(log2(n + 2))` bits each.
//!
//! Face-dual connectivity goes to `face_oracle`. The corner graphs `K` and
//! `K'` have maximum degree 2, so `corner_oracle` defaults to the path walk.

use crate::classify::InvariantList;
use crate::connectivity::{count_components_metered, ConnectivityOracle, PathWalkOracle};
use crate::error::{Error, Result};
use crate::invariants::{edge_count, InvariantTriple};
use crate::stream::{
    ComponentTable, DoubleCoverTable, FaceDualStream, IdentificationStream, InputTable, TableSource,
};
use crate::tape::{counter_bits, MeteredWorkspace};
use crate::triangulation::{Column, GluingEntry, Triangulation};

#[derive(Clone, Copy)]
pub struct MeteredEngine<'a> {
    pub face_oracle: &'a dyn ConnectivityOracle,
    pub corner_oracle: &'a dyn ConnectivityOracle,
}

impl<'a> MeteredEngine<'a> {
    pub fn new(face_oracle: &'a dyn ConnectivityOracle) -> Self {
        Self { face_oracle, corner_oracle: &PathWalkOracle }
    }

    pub fn with_corner_oracle(mut self, oracle: &'a dyn ConnectivityOracle) -> Self {
        self.corner_oracle = oracle;
        self
    }

    /// The five-condition scan, stopping at the first failure.
    pub fn check_surface(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<bool> {
        let n = src.triangle_count(ws)?;
        let _t = ws.counter(n as u64)?;
        let _e = ws.charge(2)?;
        let _scan_row = ws.counter(n as u64)?;
        let _scan_col = ws.charge(2)?;
        let _c = ws.charge(2)?;
        for t in 1..=n {
            for col in Column::ALL {
                let e = col.label();
                let mut c = 0;
                for s in 1..=n {
                    for scan in Column::ALL {
                        if let GluingEntry::Glued { target, label } = src.entry(ws, s, scan)? {
                            if target == t && label.column() == col {
                                c += 1;
                                if c > 1 {
                                    return Ok(false);
                                }
                            }
                        }
                    }
                }
                match src.entry(ws, t, col)? {
                    GluingEntry::Boundary => {
                        if c != 0 {
                            return Ok(false);
                        }
                    }
                    GluingEntry::Glued { target: s, label: f } => {
                        let z = src.entry(ws, s, f.column())?;
                        let want = if f.is_forward() { e } else { e.reverse() };
                        if z != GluingEntry::glued(t, want) {
                            return Ok(false);
                        }
                        if s == t && (f == e || f == e.reverse()) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// Number of connected components of the surface (face-dual components).
    pub fn component_count(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<usize> {
        count_components_metered(self.face_oracle, &FaceDualStream::new(src), ws)
    }

    pub fn orientability(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<u8> {
        let c = self.component_count(src, ws)?;
        if c != 1 {
            return Err(Error::NotConnected { components: c });
        }
        let cover = DoubleCoverTable::new(src);
        match self.component_count(&cover, ws)? {
            2 => Ok(0),
            1 => Ok(1),
            c => Err(Error::NotConnected { components: c }),
        }
    }

    /// `(n, x)`: triangle count and number of unglued edges, by one scan.
    fn scan_counts(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<(usize, usize)> {
        let n = src.triangle_count(ws)?;
        let _t = ws.counter(n as u64)?;
        let mut x = 0;
        for t in 1..=n {
            for col in Column::ALL {
                if src.entry(ws, t, col)?.is_boundary() {
                    x += 1;
                }
            }
        }
        Ok((n, x))
    }

    pub fn euler_characteristic(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<i64> {
        let (n, x) = self.scan_counts(src, ws)?;
        let _n = ws.counter(3 * n as u64)?;
        let _x = ws.counter(3 * n as u64)?;
        let edges = edge_count(n, x)?;
        let _edges = ws.counter(3 * n as u64)?;
        let vertices =
            count_components_metered(self.corner_oracle, &IdentificationStream::vertex_graph(src), ws)?;
        Ok(vertices as i64 - edges as i64 + n as i64)
    }

    pub fn boundary_components(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<u64> {
        let (n, x) = self.scan_counts(src, ws)?;
        let _x = ws.counter(3 * n as u64)?;
        let k = count_components_metered(self.corner_oracle, &IdentificationStream::vertex_graph(src), ws)?;
        let _k = ws.counter(3 * n as u64)?;
        let k_prime =
            count_components_metered(self.corner_oracle, &IdentificationStream::boundary_graph(src), ws)?;
        let b = k_prime as i64 - k as i64 + x as i64;
        assert!(b >= 0, "negative boundary count");
        Ok(b as u64)
    }

    /// `(o, chi, b)` of a connected surface.
    pub fn invariant_triple(&self, src: &dyn TableSource, ws: &MeteredWorkspace) -> Result<InvariantTriple> {
        let o = self.orientability(src, ws)?;
        let _o = ws.charge(1)?;
        let chi = self.euler_characteristic(src, ws)?;
        let n = src.triangle_count(ws)? as u64;
        let _chi = ws.counter(3 * n)?;
        let b = self.boundary_components(src, ws)?;
        Ok(InvariantTriple { o, chi, b })
    }

    /// Sorted triples of every component.
    ///
    /// With more than one component this enumerates candidate triples in
    /// output order, `o` in {0, 1}, `chi` from `chi(S) - 2(c - 1)` to 2, and
    /// `b` from 0 to `b(S)`, and for each candidate recomputes every
    /// component's triple, emitting the matches.
    pub fn classify(&self, tri: &Triangulation, ws: &MeteredWorkspace) -> Result<InvariantList> {
        let input = InputTable::new(tri);
        if !self.check_surface(&input, ws)? {
            let violations = crate::validate::check_surface(tri).err().map_or(0, |v| v.len());
            return Err(Error::InvalidSurface { input: None, violations });
        }
        let n = tri.triangle_count();
        let _n = ws.counter(n as u64)?;
        let c = self.component_count(&input, ws)?;
        let _c = ws.counter(n as u64)?;
        match c {
            0 => return Ok(InvariantList::default()),
            1 => return Ok(InvariantList::from_sorted(vec![self.invariant_triple(&input, ws)?])),
            _ => {}
        }

        let chi_total = self.euler_characteristic(&input, ws)?;
        let b_total = self.boundary_components(&input, ws)?;
        let wide = counter_bits(4 * n as u64) + 1;
        let _chi_total = ws.charge(wide)?;
        let _b_total = ws.counter(3 * n as u64)?;
        let chi_low = chi_total - 2 * (c as i64 - 1);

        let _o = ws.charge(1)?;
        let _chi = ws.charge(wide)?;
        let _x = ws.counter(3 * n as u64)?;
        let _i = ws.counter(n as u64)?;
        let mut out = Vec::with_capacity(c);
        for o in 0..=1u8 {
            for chi in chi_low..=2 {
                for x in 0..=b_total {
                    let candidate = InvariantTriple { o, chi, b: x };
                    for i in 1..=c {
                        let comp = ComponentTable::new(ws, &input, self.face_oracle, i)?;
                        if self.invariant_triple(&comp, ws)? == candidate {
                            out.push(candidate);
                        }
                    }
                }
            }
        }
        Ok(InvariantList::from_sorted(out))
    }
}
