use super::gate::Gate;
use super::observable::Observable;
use super::operator::{Operator, C64, DEFAULT_MAX_QUBITS};
use crate::error::{Error, Result};

/// Tolerances used by [`DensityMatrix::validate`].
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
/// Largest imaginary residual accepted by [`DensityMatrix::expectation`].
pub const IMAG_TOL: f64 = 1e-10;

/// A mixed state on `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// `|bits⟩⟨bits|`, with `bits[q]` the state of qubit `q`.
    pub fn basis_state(bits: &[bool]) -> Result<Self> {
        Self::basis_state_with_limit(bits, DEFAULT_MAX_QUBITS)
    }

    pub fn basis_state_with_limit(bits: &[bool], limit: usize) -> Result<Self> {
        let mut op = Operator::zeros_with_limit(bits.len(), limit)?;
        let idx = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
        op.set(idx, idx, C64::new(1.0, 0.0));
        Ok(Self { op })
    }

    /// Parses a word of `0`/`1` characters, qubit 0 first.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("bit string {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::basis_state(&bits)
    }

    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis_state(&vec![false; n])
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let mut op = Operator::identity(n)?;
        op.scale(C64::new(1.0 / op.dim() as f64, 0.0));
        Ok(Self { op })
    }

    /// Wraps an operator after checking the state invariants.
    pub fn from_operator(op: Operator) -> Result<Self> {
        let rho = Self { op };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_operator_unchecked(op: Operator) -> Self {
        Self { op }
    }

    pub fn n(&self) -> usize {
        self.op.n()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub(crate) fn as_operator_mut(&mut self) -> &mut Operator {
        &mut self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    /// Hermiticity, unit trace and positivity within the module tolerances.
    pub fn validate(&self) -> Result<()> {
        let h = self.op.hermiticity_defect();
        if h > HERMITIAN_TOL {
            return Err(Error::Numerical(format!("Hermiticity defect {h:e}")));
        }
        let t = self.op.trace();
        if (t - 1.0).norm() > TRACE_TOL {
            return Err(Error::Numerical(format!("trace {t} differs from 1")));
        }
        let min = self.op.hermitian_eigenvalues()[0];
        if min < -PSD_TOL {
            return Err(Error::Numerical(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        self.op.apply_gate(g)
    }

    /// `(1−p)ρ + (p/3)(XρX + YρY + ZρZ)` on `qubit`.
    pub fn apply_depolarizing(&mut self, qubit: usize, p: f64) -> Result<()> {
        self.op.depolarize(qubit, p)
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        self.op.data().iter().map(|v| v.norm_sqr()).sum()
    }

    /// `⟨bits|ρ|bits⟩`.
    pub fn probability(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n() {
            return Err(Error::InvalidSize(format!(
                "{} bits for a {}-qubit state",
                bits.len(),
                self.n()
            )));
        }
        let idx = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (q, &b)| acc | (usize::from(b) << q));
        Ok(self.op.get(idx, idx).re)
    }

    /// `Σ_k c_k Tr[ρ σ_k]`.
    pub fn expectation(&self, obs: &Observable) -> Result<f64> {
        if obs.n() != self.n() {
            return Err(Error::InvalidSize(format!(
                "{}-qubit observable on a {}-qubit state",
                obs.n(),
                self.n()
            )));
        }
        let v: C64 = obs
            .terms()
            .iter()
            .map(|(c, s)| self.op.trace_with_pauli(s) * *c)
            .sum();
        if v.im.abs() > IMAG_TOL {
            return Err(Error::Numerical(format!("imaginary expectation residual {:e}", v.im)));
        }
        Ok(v.re)
    }
}
