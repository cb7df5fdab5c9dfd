//! Propagation of `{I, Z}` strings through CNOT ladders.
//!
//! A ladder on `n` qubits is the cascade `CNOT(0→1), CNOT(1→2), …, CNOT(n−2→n−1)`
//! with control on the lower index, applied in ascending order. Conjugating a
//! `Z`-string by it maps bit `i` to `b_i ⊕ b_{i+1}` (the last bit is fixed), so
//! successive images are the rows of an inverted binary Pascal triangle.
//!
//! Hit counting follows the reverse-circuit picture: at each of `L` steps the
//! noise sees the current string and then the ladder maps it, so the string is
//! inspected at images `0..L`.

use std::fmt;

use crate::error::{Error, Result};
use crate::pauli::ZString;

/// Default largest `n` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 12;

/// Image of `s` under one CNOT ladder.
pub fn cnot_ladder_step(s: &ZString) -> Result<ZString> {
    if s.len() < 2 {
        return Err(Error::InvalidSize(format!(
            "a CNOT ladder needs at least 2 qubits, got {}",
            s.len()
        )));
    }
    Ok(step_unchecked(s))
}

#[inline]
fn step_unchecked(s: &ZString) -> ZString {
    ZString::from_raw(s.len(), s.bits() ^ (s.bits() >> 1))
}

/// One full cycle of a string under repeated ladder steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    pub period: usize,
    /// `cycle[0]` is the input; stepping `cycle[period-1]` returns `cycle[0]`.
    pub cycle: Vec<ZString>,
    /// Total `Z` count on the first `n_d` positions summed over the cycle.
    pub z_hits_first_nd: usize,
}

pub fn cycle_of(s: &ZString, n_dirty: usize) -> Result<CycleReport> {
    if s.len() < 2 {
        return Err(Error::InvalidSize(format!(
            "a CNOT ladder needs at least 2 qubits, got {}",
            s.len()
        )));
    }
    if n_dirty > s.len() {
        return Err(Error::InvalidSize(format!(
            "n_d = {n_dirty} exceeds n = {}",
            s.len()
        )));
    }
    let mut cycle = vec![*s];
    let mut cur = step_unchecked(s);
    while cur != *s {
        cycle.push(cur);
        cur = step_unchecked(&cur);
    }
    let z_hits_first_nd = cycle
        .iter()
        .map(|c| c.prefix_weight(n_dirty) as usize)
        .sum();
    Ok(CycleReport { period: cycle.len(), cycle, z_hits_first_nd })
}

/// A row of 0/1 entries in an XOR triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRow(pub Vec<bool>);

impl BinaryRow {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BinaryRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// XOR triangle with `row0` on top: each entry below is the XOR of its upper-left
/// and upper-right neighbours, so rows shrink by one. Stops early once a row
/// would be empty.
pub fn xor_triangle(row0: &[bool], rows: usize) -> Vec<BinaryRow> {
    let mut out = Vec::with_capacity(rows.min(row0.len()));
    let mut cur = row0.to_vec();
    for _ in 0..rows {
        if cur.is_empty() {
            break;
        }
        let next: Vec<bool> = cur.windows(2).map(|w| w[0] ^ w[1]).collect();
        out.push(BinaryRow(std::mem::replace(&mut cur, next)));
    }
    out
}

/// Inverted binary Pascal triangle of `s`: row 0 is `s` (Z→1, I→0) followed by
/// `n − 1` zeros.
pub fn pascal_triangle(s: &ZString, rows: usize) -> Vec<BinaryRow> {
    let mut row0 = s.to_bools();
    row0.extend(std::iter::repeat_n(false, s.len() - 1));
    xor_triangle(&row0, rows)
}

fn check_sizes(n: usize, n_dirty: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("n = {n} must be at least 2")));
    }
    if n_dirty > n {
        return Err(Error::InvalidSize(format!("n_d = {n_dirty} exceeds n = {n}")));
    }
    Ok(())
}

/// Exponent of the `(1 − p)` factor in the ladder concentration bound.
///
/// `⌊L·n_d / 2^⌊log2 n⌋⌋` for one dirty qubit, `⌊L·n_d / 2^⌈log2 n⌉⌋` for more,
/// and 0 without dirty qubits.
pub fn gamma(n: usize, n_dirty: usize, layers: usize) -> Result<u64> {
    check_sizes(n, n_dirty)?;
    let denom = match n_dirty {
        0 => return Ok(0),
        1 => 1u64 << n.ilog2(),
        _ => n.next_power_of_two() as u64,
    };
    Ok((layers as u64 * n_dirty as u64) / denom)
}

/// The string with a single `Z` at 1-based position `2^⌊log2 n⌋`; its cycle puts a
/// `Z` on qubit 0 exactly once per `2^⌊log2 n⌋` steps.
pub fn construction_string(n: usize) -> Result<ZString> {
    check_sizes(n, 0)?;
    ZString::single(n, (1usize << n.ilog2()) - 1)
}

/// Number of images among `s, step(s), …, step^{L−1}(s)` carrying a `Z` on the
/// first `n_d` positions.
pub fn z_hits(s: &ZString, n_dirty: usize, layers: usize) -> Result<u64> {
    check_sizes(s.len(), n_dirty)?;
    Ok(z_hits_unchecked(*s, n_dirty, layers))
}

fn z_hits_unchecked(mut s: ZString, n_dirty: usize, layers: usize) -> u64 {
    let mut hits = 0;
    for _ in 0..layers {
        if s.prefix_weight(n_dirty) > 0 {
            hits += 1;
        }
        s = step_unchecked(&s);
    }
    hits
}

/// Brute-force minimum of [`z_hits`] over every non-identity string of length `n`.
pub fn min_z_hits(n: usize, n_dirty: usize, layers: usize) -> Result<u64> {
    min_z_hits_with_limit(n, n_dirty, layers, DEFAULT_EXHAUSTIVE_LIMIT).map(|(h, _)| h)
}

/// As [`min_z_hits`], with an explicit size limit; also returns a minimizing string
/// (the smallest one in packed order).
pub fn min_z_hits_with_limit(
    n: usize,
    n_dirty: usize,
    layers: usize,
    limit: usize,
) -> Result<(u64, ZString)> {
    check_sizes(n, n_dirty)?;
    if n > limit || n >= 63 {
        return Err(Error::ResourceLimit { what: "exhaustive string length", value: n, limit });
    }
    let mut best: Option<(u64, ZString)> = None;
    for bits in 1u64..(1u64 << n) {
        let s = ZString::from_raw(n, bits);
        let h = z_hits_unchecked(s, n_dirty, layers);
        if best.is_none_or(|(b, _)| h < b) {
            best = Some((h, s));
            if h == 0 {
                break;
            }
        }
    }
    Ok(best.expect("n >= 2 has non-identity strings"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(s: &str) -> ZString {
        s.parse().unwrap()
    }

    #[test]
    fn single_cnot_mappings() {
        assert_eq!(cnot_ladder_step(&z("ZZ")).unwrap(), z("IZ"));
        assert_eq!(cnot_ladder_step(&z("IZ")).unwrap(), z("ZZ"));
        assert_eq!(cnot_ladder_step(&z("ZI")).unwrap(), z("ZI"));
        assert_eq!(cnot_ladder_step(&z("II")).unwrap(), z("II"));
    }

    #[test]
    fn four_qubit_chain() {
        let chain = ["ZIZZ", "ZZIZ", "IZZZ", "ZIIZ", "ZIZZ"];
        for w in chain.windows(2) {
            assert_eq!(cnot_ladder_step(&z(w[0])).unwrap(), z(w[1]));
        }
    }

    #[test]
    fn identity_is_fixed() {
        for n in 2..10 {
            let id = ZString::identity(n).unwrap();
            assert_eq!(cnot_ladder_step(&id).unwrap(), id);
            assert_eq!(cycle_of(&id, n).unwrap().period, 1);
        }
    }

    #[test]
    fn step_rejects_single_qubit() {
        assert!(matches!(cnot_ladder_step(&z("Z")), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn cycle_of_zizz() {
        let r = cycle_of(&z("ZIZZ"), 1).unwrap();
        assert_eq!(r.period, 4);
        let words: Vec<String> = r.cycle.iter().map(|c| c.to_string()).collect();
        assert_eq!(words, ["ZIZZ", "ZZIZ", "IZZZ", "ZIIZ"]);
        assert_eq!(r.z_hits_first_nd, 3);
    }

    #[test]
    fn cycle_of_three_qubit_string() {
        let r = cycle_of(&z("ZII"), 3).unwrap();
        // ZII is a fixed point: the top qubit only ever controls.
        assert_eq!(r.period, 1);
        let r = cycle_of(&z("IIZ"), 0).unwrap();
        assert_eq!(r.period, 4);
        assert_eq!(r.z_hits_first_nd, 0);
    }

    #[test]
    fn pascal_triangle_of_zizz() {
        let rows = pascal_triangle(&z("ZIZZ"), 4);
        let rows: Vec<String> = rows.iter().map(|r| r.to_string()).collect();
        assert_eq!(rows, ["1011000", "110100", "01110", "1001"]);
    }

    #[test]
    fn pascal_triangle_all_zero() {
        for r in pascal_triangle(&ZString::identity(5).unwrap(), 9) {
            assert!(r.0.iter().all(|&b| !b));
        }
    }

    #[test]
    fn pascal_triangle_stops_at_single_entry() {
        let rows = pascal_triangle(&z("ZZZ"), 100);
        assert_eq!(rows.len(), 5);
        assert_eq!(rows.last().unwrap().len(), 1);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma(8, 2, 8).unwrap(), 2);
        assert_eq!(gamma(8, 8, 1).unwrap(), 1);
        assert_eq!(gamma(6, 1, 7).unwrap(), 1);
        assert_eq!(gamma(6, 0, 100).unwrap(), 0);
        assert!(gamma(1, 0, 1).is_err());
        assert!(gamma(4, 5, 1).is_err());
    }

    #[test]
    fn min_z_hits_examples() {
        assert_eq!(min_z_hits(4, 1, 4).unwrap(), 1);
        assert_eq!(min_z_hits(4, 4, 1).unwrap(), 1);
        let c = construction_string(4).unwrap();
        assert_eq!(c.to_string(), "IIIZ");
        assert_eq!(z_hits(&c, 1, 4).unwrap(), 1);
    }

    #[test]
    fn min_z_hits_respects_limit() {
        assert!(matches!(
            min_z_hits(13, 1, 1),
            Err(Error::ResourceLimit { value: 13, limit: 12, .. })
        ));
        assert!(min_z_hits_with_limit(13, 1, 2, 13).is_ok());
    }
}
