//! Effort-to-compress (ETC) complexity via non-sequential recursive pair
//! substitution (NSRPS).
//!
//! NSRPS rewrites a sequence by replacing the most frequent adjacent symbol
//! pair with a fresh symbol, over and over, until every remaining symbol is
//! identical. ETC is the number of rewriting steps that takes: a homogeneous
//! sequence compresses in zero steps, an irregular one needs many. Unlike
//! entropy-style measures, the result depends on the *order* of the symbols,
//! not just their histogram.
//!
//! Pair frequencies are greedy left-to-right non-overlapping occurrence
//! counts (`aaa` contains `aa` once). Ties on count are broken by the
//! earliest adjacent occurrence, then by the numerically smaller pair; that
//! last rule is unreachable in practice because two distinct pairs cannot
//! first occur at the same index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of opaque symbol ids.
///
/// Symbols may repeat and order is significant. Empty and single-symbol
/// sequences are valid; both are terminal for NSRPS and have ETC 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolSequence {
    symbols: Vec<u32>,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u32>) -> Self {
        Self { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }
}

impl From<Vec<u32>> for SymbolSequence {
    fn from(symbols: Vec<u32>) -> Self {
        Self::new(symbols)
    }
}

impl From<&[u32]> for SymbolSequence {
    fn from(symbols: &[u32]) -> Self {
        Self::new(symbols.to_vec())
    }
}

impl FromIterator<u32> for SymbolSequence {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Occurrence statistics for one adjacent pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairCount {
    /// The ordered pair of symbols.
    pub pair: (u32, u32),
    /// Greedy left-to-right non-overlapping occurrence count.
    pub count: usize,
    /// Index of the earliest adjacent occurrence.
    pub first_position: usize,
}

/// One NSRPS rewriting step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NsrpsStep {
    /// The pair that was substituted.
    pub pair: (u32, u32),
    /// The fresh symbol that replaced it.
    pub replacement: u32,
    /// Sequence length after the substitution.
    pub length_after: usize,
}

/// Record of a full NSRPS run; `total_steps` equals the ETC value.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NsrpsTrace {
    pub steps: Vec<NsrpsStep>,
}

impl NsrpsTrace {
    pub fn total_steps(&self) -> usize {
        self.steps.len()
    }
}

/// True iff all symbols are equal; vacuously true for empty and
/// single-symbol sequences.
pub fn is_homogeneous(seq: &SymbolSequence) -> bool {
    slice_is_homogeneous(seq.symbols())
}

fn slice_is_homogeneous(symbols: &[u32]) -> bool {
    match symbols.first() {
        None => true,
        Some(&first) => symbols.iter().all(|&s| s == first),
    }
}

/// Count every distinct adjacent pair of `seq`, greedily and without
/// overlap, in order of first occurrence.
///
/// Sequences shorter than two symbols have no pairs; the table is empty.
pub fn count_pairs(seq: &SymbolSequence) -> Vec<PairCount> {
    let mut table = PairTable::with_capacity(seq.len());
    table.scan(seq.symbols());
    let mut counts = table.to_pair_counts();
    counts.sort_by_key(|c| c.first_position);
    counts
}

/// Apply one NSRPS substitution: select the most frequent pair (ties broken
/// by earliest occurrence) and replace its greedy non-overlapping occurrences
/// with a fresh symbol, one greater than the largest symbol present.
///
/// Returns the rewritten sequence together with the selected pair. Fails
/// with [`Error::TerminalSequence`] on homogeneous or sub-two-symbol input.
pub fn nsrps_step(seq: &SymbolSequence) -> Result<(SymbolSequence, (u32, u32))> {
    if seq.len() < 2 || is_homogeneous(seq) {
        return Err(Error::TerminalSequence);
    }
    let mut table = PairTable::with_capacity(seq.len());
    table.scan(seq.symbols());
    let pair = table.best_pair().expect("non-terminal sequence has a pair");
    let fresh = fresh_symbol(seq.symbols());
    let mut out = Vec::with_capacity(seq.len());
    substitute(seq.symbols(), pair, fresh, &mut out);
    Ok((SymbolSequence::new(out), pair))
}

/// Effort-to-compress: the number of NSRPS steps until the sequence becomes
/// homogeneous, together with the full substitution trace.
pub fn etc(seq: &SymbolSequence) -> (usize, NsrpsTrace) {
    let mut trace = NsrpsTrace::default();
    let value = EtcWorkspace::new().run(seq.symbols(), Some(&mut trace.steps));
    debug_assert_eq!(value, trace.total_steps());
    (value, trace)
}

/// Effort-to-compress without materialising the trace.
pub fn etc_value(seq: &SymbolSequence) -> usize {
    EtcWorkspace::new().run(seq.symbols(), None)
}

/// Fresh symbols continue the run's id space: one past the current maximum.
/// Every substitution injects its fresh symbol into the result, so the
/// current maximum is also the running maximum of the whole NSRPS run.
fn fresh_symbol(symbols: &[u32]) -> u32 {
    let max = symbols.iter().copied().max().unwrap_or(0);
    max.checked_add(1).expect("symbol id space exhausted")
}

/// Replace greedy left-to-right non-overlapping occurrences of `pair` with
/// `fresh`, writing into `out`.
fn substitute(symbols: &[u32], pair: (u32, u32), fresh: u32, out: &mut Vec<u32>) {
    out.clear();
    let mut i = 0;
    while i < symbols.len() {
        if i + 1 < symbols.len() && symbols[i] == pair.0 && symbols[i + 1] == pair.1 {
            out.push(fresh);
            i += 2;
        } else {
            out.push(symbols[i]);
            i += 1;
        }
    }
}

/// Reusable NSRPS state: two sequence buffers plus the pair table. The split
/// search evaluates ETC for millions of short sequences, so keeping the
/// allocations alive across calls matters.
pub(crate) struct EtcWorkspace {
    cur: Vec<u32>,
    next: Vec<u32>,
    table: PairTable,
}

impl EtcWorkspace {
    pub(crate) fn new() -> Self {
        Self {
            cur: Vec::new(),
            next: Vec::new(),
            table: PairTable::with_capacity(0),
        }
    }

    /// ETC of `symbols`; appends per-step records to `trace` when given.
    pub(crate) fn run(&mut self, symbols: &[u32], mut trace: Option<&mut Vec<NsrpsStep>>) -> usize {
        self.cur.clear();
        self.cur.extend_from_slice(symbols);
        self.table.reserve(symbols.len());
        let mut steps = 0;
        while !slice_is_homogeneous(&self.cur) {
            self.table.scan(&self.cur);
            let pair = self.table.best_pair().expect("inhomogeneous sequence");
            let fresh = fresh_symbol(&self.cur);
            substitute(&self.cur, pair, fresh, &mut self.next);
            std::mem::swap(&mut self.cur, &mut self.next);
            steps += 1;
            if let Some(t) = trace.as_deref_mut() {
                t.push(NsrpsStep {
                    pair,
                    replacement: fresh,
                    length_after: self.cur.len(),
                });
            }
        }
        steps
    }

    /// ETC of a bare label slice (hot path used by the impurity search).
    pub(crate) fn etc_of(&mut self, symbols: &[u32]) -> usize {
        self.run(symbols, None)
    }
}

/// Open-addressing table of adjacent-pair statistics keyed by the packed
/// pair. Rebuilt once per NSRPS step; stale slots are invalidated by bumping
/// a generation counter rather than clearing. Capacity is at least twice the
/// sequence length, so the load factor stays below one half.
struct PairTable {
    keys: Vec<u64>,
    counts: Vec<u32>,
    first_pos: Vec<u32>,
    last_counted: Vec<u32>,
    gens: Vec<u32>,
    occupied: Vec<usize>,
    gen: u32,
    mask: usize,
}

#[inline]
fn pack(a: u32, b: u32) -> u64 {
    // Packed keys order exactly like lexicographic pair order.
    (u64::from(a) << 32) | u64::from(b)
}

#[inline]
fn hash(key: u64, mask: usize) -> usize {
    // Fibonacci hashing: a single multiply spreads the high bits.
    (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 33) as usize & mask
}

impl PairTable {
    fn with_capacity(seq_len: usize) -> Self {
        let cap = (2 * seq_len.max(2)).next_power_of_two();
        Self {
            keys: vec![0; cap],
            counts: vec![0; cap],
            first_pos: vec![0; cap],
            last_counted: vec![0; cap],
            gens: vec![0; cap],
            occupied: Vec::new(),
            gen: 0,
            mask: cap - 1,
        }
    }

    fn reserve(&mut self, seq_len: usize) {
        let needed = (2 * seq_len.max(2)).next_power_of_two();
        if needed > self.keys.len() {
            *self = Self::with_capacity(seq_len);
        }
    }

    /// Tally every adjacent pair of `symbols` with greedy non-overlapping
    /// counting: an occurrence is counted only if it does not overlap the
    /// previously counted occurrence of the same pair.
    fn scan(&mut self, symbols: &[u32]) {
        self.gen = self.gen.wrapping_add(1);
        self.occupied.clear();
        if symbols.len() < 2 {
            return;
        }
        for i in 0..symbols.len() - 1 {
            let key = pack(symbols[i], symbols[i + 1]);
            let mut slot = hash(key, self.mask);
            loop {
                if self.gens[slot] != self.gen {
                    self.gens[slot] = self.gen;
                    self.keys[slot] = key;
                    self.counts[slot] = 1;
                    self.first_pos[slot] = i as u32;
                    self.last_counted[slot] = i as u32;
                    self.occupied.push(slot);
                    break;
                }
                if self.keys[slot] == key {
                    if i as u32 > self.last_counted[slot] + 1 {
                        self.counts[slot] += 1;
                        self.last_counted[slot] = i as u32;
                    }
                    break;
                }
                slot = (slot + 1) & self.mask;
            }
        }
    }

    /// The pair maximising (count, earliest occurrence, smaller pair); the
    /// ordering is total over distinct pairs, so the winner does not depend
    /// on table iteration order.
    fn best_pair(&self) -> Option<(u32, u32)> {
        let mut best: Option<usize> = None;
        for &slot in &self.occupied {
            match best {
                None => best = Some(slot),
                Some(b) => {
                    let better = self.counts[slot] > self.counts[b]
                        || (self.counts[slot] == self.counts[b]
                            && (self.first_pos[slot] < self.first_pos[b]
                                || (self.first_pos[slot] == self.first_pos[b]
                                    && self.keys[slot] < self.keys[b])));
                    if better {
                        best = Some(slot);
                    }
                }
            }
        }
        best.map(|slot| {
            let key = self.keys[slot];
            ((key >> 32) as u32, key as u32)
        })
    }

    fn to_pair_counts(&self) -> Vec<PairCount> {
        self.occupied
            .iter()
            .map(|&slot| PairCount {
                pair: ((self.keys[slot] >> 32) as u32, self.keys[slot] as u32),
                count: self.counts[slot] as usize,
                first_position: self.first_pos[slot] as usize,
            })
            .collect()
    }
}
