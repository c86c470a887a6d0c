//! Read-only input / metered work memory.
//!
//! The metered engine never materializes intermediate tables or graphs. All
//! scratch state it keeps (counters and recursion frames) is charged
//! against a [`MeteredWorkspace`] in bits, and input cells are read through
//! [`MeteredWorkspace::read_entry`], which is free but counted.

use std::cell::Cell;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{Column, GluingEntry, Triangulation};

/// Multiplier in the default budget `C * ceil(log2(N + 2))^2`.
pub const DEFAULT_BUDGET_FACTOR: u64 = 64;

/// Bits needed to hold any value in `0..=n+1` in binary.
pub fn counter_bits(n: u64) -> u64 {
    ceil_log2(n.saturating_add(2))
}

/// `ceil(log2(x))` for `x >= 1`.
pub fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 1);
    if x <= 1 {
        0
    } else {
        u64::from(64 - (x - 1).leading_zeros())
    }
}

/// Default metered budget for an input of `symbols` tape symbols.
pub fn default_budget(symbols: u64) -> u64 {
    let l = counter_bits(symbols);
    DEFAULT_BUDGET_FACTOR * l * l
}

/// Strict `C * ceil(log2(N + 2))` budget, for logspace oracles.
pub fn strict_budget(symbols: u64) -> u64 {
    DEFAULT_BUDGET_FACTOR * counter_bits(symbols)
}

/// Bit-accounted work memory.
///
/// Charges are released when the returned [`ChargeToken`] is dropped, so the
/// live total always equals the sum of outstanding tokens.
#[derive(Debug)]
pub struct MeteredWorkspace {
    budget_bits: u64,
    current_bits: Cell<u64>,
    peak_bits: Cell<u64>,
    input_reads: Cell<u64>,
    deadline: Option<Instant>,
    ticks: Cell<u32>,
}

impl Default for MeteredWorkspace {
    fn default() -> Self {
        Self::unlimited()
    }
}

impl MeteredWorkspace {
    /// `budget_bits == 0` means unlimited.
    pub fn new(budget_bits: u64) -> Self {
        Self {
            budget_bits,
            current_bits: Cell::new(0),
            peak_bits: Cell::new(0),
            input_reads: Cell::new(0),
            deadline: None,
            ticks: Cell::new(0),
        }
    }

    pub fn unlimited() -> Self {
        Self::new(0)
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    pub fn budget_bits(&self) -> u64 {
        self.budget_bits
    }

    pub fn current_bits(&self) -> u64 {
        self.current_bits.get()
    }

    pub fn peak_bits(&self) -> u64 {
        self.peak_bits.get()
    }

    pub fn input_reads(&self) -> u64 {
        self.input_reads.get()
    }

    pub fn charge(&self, bits: u64) -> Result<ChargeToken<'_>> {
        assert!(bits > 0, "charge of zero bits");
        let current = self.current_bits.get();
        let next = current + bits;
        if self.budget_bits > 0 && next > self.budget_bits {
            return Err(Error::BudgetExceeded { requested: bits, current, budget: self.budget_bits });
        }
        self.current_bits.set(next);
        if next > self.peak_bits.get() {
            self.peak_bits.set(next);
        }
        Ok(ChargeToken { ws: self, bits })
    }

    /// Charge one binary counter able to hold values up to `max`.
    pub fn counter(&self, max: u64) -> Result<ChargeToken<'_>> {
        self.charge(counter_bits(max).max(1))
    }

    /// Reads row `t`, column `col` of the input table. Never charges work bits.
    pub fn read_entry(&self, tri: &Triangulation, t: usize, col: Column) -> Result<GluingEntry> {
        let entry = tri.entry(t, col)?;
        self.input_reads.set(self.input_reads.get() + 1);
        Ok(entry)
    }

    /// Counts one input read that does not go through [`Self::read_entry`].
    pub fn note_read(&self) {
        self.input_reads.set(self.input_reads.get() + 1);
    }

    /// Cheap cooperative cancellation point for long recomputations.
    pub fn tick(&self) -> Result<()> {
        if let Some(deadline) = self.deadline {
            let t = self.ticks.get().wrapping_add(1);
            self.ticks.set(t);
            if t.is_multiple_of(4096) && Instant::now() >= deadline {
                return Err(Error::DeadlineExceeded);
            }
        }
        Ok(())
    }

    pub fn report(&self, input_symbols: u64) -> SpaceReport {
        SpaceReport {
            input_symbols,
            budget_bits: self.budget_bits,
            peak_bits: self.peak_bits(),
            input_reads: self.input_reads(),
        }
    }
}

/// A live charge; dropping it returns the bits.
#[derive(Debug)]
#[must_use = "dropping the token releases the charge immediately"]
pub struct ChargeToken<'a> {
    ws: &'a MeteredWorkspace,
    bits: u64,
}

impl ChargeToken<'_> {
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn release(self) {}
}

impl Drop for ChargeToken<'_> {
    fn drop(&mut self) {
        let cur = self.ws.current_bits.get();
        self.ws.current_bits.set(cur - self.bits);
    }
}

/// Space report written by the metered engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    pub input_symbols: u64,
    pub budget_bits: u64,
    pub peak_bits: u64,
    pub input_reads: u64,
}

impl SpaceReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("space report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_charge() {
        let ws = MeteredWorkspace::unlimited();
        let _tok = ws.charge(64).unwrap();
        assert_eq!(ws.current_bits(), 64);
        assert_eq!(ws.peak_bits(), 64);
    }

    #[test]
    fn over_budget() {
        let ws = MeteredWorkspace::new(32);
        assert!(matches!(ws.charge(64), Err(Error::BudgetExceeded { .. })));
        assert_eq!(ws.current_bits(), 0);
    }

    #[test]
    fn peak_after_release() {
        let ws = MeteredWorkspace::unlimited();
        ws.charge(8).unwrap().release();
        let _tok = ws.charge(16).unwrap();
        assert_eq!(ws.current_bits(), 16);
        assert_eq!(ws.peak_bits(), 16);
    }

    #[test]
    fn counter_widths() {
        assert_eq!(counter_bits(0), 1);
        assert_eq!(counter_bits(2), 2);
        assert_eq!(counter_bits(6), 3);
        assert_eq!(counter_bits(7), 4);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn report_json_keys() {
        let ws = MeteredWorkspace::new(100);
        let _a = ws.charge(10).unwrap();
        let json = ws.report(42).to_json();
        assert_eq!(json, r#"{"input_symbols":42,"budget_bits":100,"peak_bits":10,"input_reads":0}"#);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        // Ops: Some(bits) pushes a charge, None pops the most recent one.
        proptest! {
            #[test]
            fn peak_is_max_prefix_sum(ops in proptest::collection::vec(proptest::option::of(1u64..100), 0..60)) {
                let ws = MeteredWorkspace::unlimited();
                let mut live = Vec::new();
                let mut sim_cur = 0u64;
                let mut sim_peak = 0u64;
                for op in ops {
                    match op {
                        Some(bits) => {
                            live.push(ws.charge(bits).unwrap());
                            sim_cur += bits;
                            sim_peak = sim_peak.max(sim_cur);
                        }
                        None => {
                            if let Some(tok) = live.pop() {
                                sim_cur -= tok.bits();
                                drop(tok);
                            }
                        }
                    }
                    prop_assert_eq!(ws.current_bits(), sim_cur);
                    prop_assert!(ws.current_bits() <= ws.peak_bits());
                }
                prop_assert_eq!(ws.peak_bits(), sim_peak);
                while let Some(tok) = live.pop() { drop(tok); }
                prop_assert_eq!(ws.current_bits(), 0);
            }
        }
    }
}
