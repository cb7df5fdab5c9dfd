//! Bit-packed Pauli words.
//!
//! Qubit `q` is stored in bit `q` of each mask, and strings print with qubit 0
//! first (the topmost wire). `ZString` is the restricted alphabet `{I, Z}` used
//! by the ladder analysis; `PauliString` carries the full alphabet and a phase.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest qubit count a packed word can hold.
pub const MAX_WORD_LEN: usize = 64;

fn low_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A word over `{I, Z}`; bit `i` set means `Z` on qubit `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZString {
    bits: u64,
    len: usize,
}

impl ZString {
    pub fn new(len: usize, bits: u64) -> Result<Self> {
        if len == 0 || len > MAX_WORD_LEN {
            return Err(Error::InvalidSize(format!(
                "string length {len} must be in 1..={MAX_WORD_LEN}"
            )));
        }
        if bits & !low_mask(len) != 0 {
            return Err(Error::InvalidSize(format!(
                "bits {bits:#b} do not fit in {len} positions"
            )));
        }
        Ok(Self { bits, len })
    }

    pub fn identity(len: usize) -> Result<Self> {
        Self::new(len, 0)
    }

    /// The string with a single `Z` at `position` (0-based).
    pub fn single(len: usize, position: usize) -> Result<Self> {
        if position >= len {
            return Err(Error::InvalidTarget(format!(
                "position {position} outside a length-{len} string"
            )));
        }
        Self::new(len, 1u64 << position)
    }

    pub fn from_bools(bits: &[bool]) -> Result<Self> {
        let packed = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Self::new(bits.len(), packed)
    }

    #[inline]
    pub fn bits(&self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn bit(&self, i: usize) -> bool {
        (self.bits >> i) & 1 == 1
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Number of `Z`s among the first `k` positions.
    pub fn prefix_weight(&self, k: usize) -> u32 {
        (self.bits & low_mask(k.min(self.len))).count_ones()
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }

    /// Same word rendered as `0`/`1` characters.
    pub fn to_binary(&self) -> String {
        (0..self.len)
            .map(|i| if self.bit(i) { '1' } else { '0' })
            .collect()
    }

    pub(crate) fn from_raw(len: usize, bits: u64) -> Self {
        debug_assert!(len >= 1 && len <= MAX_WORD_LEN && bits & !low_mask(len) == 0);
        Self { bits, len }
    }
}

impl fmt::Display for ZString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "Z" } else { "I" })?;
        }
        Ok(())
    }
}

/// Accepts `ZIZZ`-style words or `1011`-style binary words.
impl FromStr for ZString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                'Z' | 'z' | '1' => Ok(true),
                'I' | 'i' | '0' => Ok(false),
                other => Err(Error::Parse(format!("character {other:?} in Z-string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_bools(&bits)
    }
}

/// Single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `self * other = i^k * result`, returned as `(k, result)`.
    fn product(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }
}

/// A tensor word over `{I, X, Y, Z}` with a phase `i^phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: u64,
    z: u64,
    len: usize,
    phase: u8,
}

impl PauliString {
    pub fn identity(len: usize) -> Result<Self> {
        if len == 0 || len > MAX_WORD_LEN {
            return Err(Error::InvalidSize(format!(
                "string length {len} must be in 1..={MAX_WORD_LEN}"
            )));
        }
        Ok(Self { x: 0, z: 0, len, phase: 0 })
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Result<Self> {
        let mut s = Self::identity(paulis.len())?;
        for (q, p) in paulis.iter().enumerate() {
            let (x, z) = p.bits();
            s.x |= u64::from(x) << q;
            s.z |= u64::from(z) << q;
        }
        Ok(s)
    }

    /// `p` on each listed qubit, identity elsewhere.
    pub fn from_sparse(len: usize, terms: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(len)?;
        for &(q, p) in terms {
            if q >= len {
                return Err(Error::InvalidTarget(format!("qubit {q} >= {len}")));
            }
            if s.get(q) != Pauli::I {
                return Err(Error::InvalidTarget(format!("qubit {q} listed twice")));
            }
            let (x, z) = p.bits();
            s.x |= u64::from(x) << q;
            s.z |= u64::from(z) << q;
        }
        Ok(s)
    }

    pub fn from_zstring(s: &ZString) -> Self {
        Self { x: 0, z: s.bits(), len: s.len(), phase: 0 }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Exponent `k` of the overall phase `i^k`.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn negated(self) -> Self {
        let p = self.phase;
        self.with_phase(p + 2)
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Real overall sign: the operator is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// Same word with the phase dropped.
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti % 2 == 0
    }

    /// `i`-power picked up by `⟨c ⊕ x|σ|c⟩` before the `(-1)^{c·z}` sign.
    #[inline]
    pub(crate) fn matrix_phase(&self) -> u8 {
        ((self.phase as u32 + (self.x & self.z).count_ones()) % 4) as u8
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        assert_eq!(self.len, rhs.len, "multiplying Pauli strings of different length");
        let mut phase = u32::from(self.phase) + u32::from(rhs.phase);
        let mut out = PauliString { x: 0, z: 0, len: self.len, phase: 0 };
        let support = self.x | self.z | rhs.x | rhs.z;
        for q in 0..self.len {
            if (support >> q) & 1 == 0 {
                continue;
            }
            let (k, p) = self.get(q).product(rhs.get(q));
            phase += u32::from(k);
            let (x, z) = p.bits();
            out.x |= u64::from(x) << q;
            out.z |= u64::from(z) << q;
        }
        out.phase = (phase % 4) as u8;
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.phase {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        })?;
        for q in 0..self.len {
            write!(f, "{}", self.get(q).symbol())?;
        }
        Ok(())
    }
}

/// Parses an optional phase prefix (`+`, `-`, `i`, `+i`, `-i`) followed by `IXYZ` letters.
impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else {
            (0, s)
        };
        let paulis = body
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Parse(format!("character {other:?} in Pauli string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_paulis(&paulis)?.with_phase(phase))
    }
}
