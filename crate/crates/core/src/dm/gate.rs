use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use super::operator::{Operator, C64};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Quantum gates.
///
/// Rotations follow `R_σ(φ) = e^{−i(φ/2)σ}` and `XX(θ) = e^{−iθ X⊗X}`; a
/// [`Gate::PauliRotation`] is `e^{−iθσ}` on the whole register.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, angle: f64 },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Xx { q1: usize, q2: usize, angle: f64 },
    H { qubit: usize },
    Cnot { control: usize, target: usize },
    PauliRotation { generator: PauliString, angle: f64 },
    Unitary1 { qubit: usize, matrix: [[C64; 2]; 2] },
    /// Local index is `2·b(q1) + b(q2)`.
    Unitary2 { q1: usize, q2: usize, matrix: [[C64; 4]; 4] },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::Rx { .. } => "RX",
            Gate::Ry { .. } => "RY",
            Gate::Rz { .. } => "RZ",
            Gate::Xx { .. } => "XX",
            Gate::H { .. } => "H",
            Gate::Cnot { .. } => "CNOT",
            Gate::PauliRotation { .. } => "PauliRotation",
            Gate::Unitary1 { .. } => "U1",
            Gate::Unitary2 { .. } => "U2",
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::H { qubit }
            | Gate::Unitary1 { qubit, .. } => vec![*qubit],
            Gate::Xx { q1, q2, .. } | Gate::Unitary2 { q1, q2, .. } => vec![*q1, *q2],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::PauliRotation { generator, .. } => {
                (0..generator.len()).filter(|&q| generator.get(q) != Pauli::I).collect()
            }
        }
    }

    /// Whether the gate belongs to the native trapped-ion set `{RX, RY, RZ, XX}`.
    pub fn is_native(&self) -> bool {
        matches!(self, Gate::Rx { .. } | Gate::Ry { .. } | Gate::Rz { .. } | Gate::Xx { .. })
    }

    /// Writes the gate as `e^{−iθσ}` on an `n`-qubit register when it is a
    /// Pauli rotation.
    pub fn as_pauli_rotation(&self, n: usize) -> Result<Option<(PauliString, f64)>> {
        let single = |q: usize, p: Pauli| PauliString::from_sparse(n, &[(q, p)]);
        Ok(Some(match self {
            Gate::Rx { qubit, angle } => (single(*qubit, Pauli::X)?, angle / 2.0),
            Gate::Ry { qubit, angle } => (single(*qubit, Pauli::Y)?, angle / 2.0),
            Gate::Rz { qubit, angle } => (single(*qubit, Pauli::Z)?, angle / 2.0),
            Gate::Xx { q1, q2, angle } => {
                if q1 == q2 {
                    return Err(Error::InvalidTarget(format!("repeated qubit {q1}")));
                }
                (PauliString::from_sparse(n, &[(*q1, Pauli::X), (*q2, Pauli::X)])?, *angle)
            }
            Gate::PauliRotation { generator, angle } => (*generator, *angle),
            _ => return Ok(None),
        }))
    }

    /// Local unitary for the fixed one- and two-qubit gates.
    fn local_matrix(&self) -> Option<LocalMatrix> {
        match self {
            Gate::H { qubit } => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                Some(LocalMatrix::One(*qubit, [[h, h], [h, -h]]))
            }
            Gate::Cnot { control, target } => Some(LocalMatrix::Two(
                *control,
                *target,
                [
                    [ONE, ZERO, ZERO, ZERO],
                    [ZERO, ONE, ZERO, ZERO],
                    [ZERO, ZERO, ZERO, ONE],
                    [ZERO, ZERO, ONE, ZERO],
                ],
            )),
            Gate::Unitary1 { qubit, matrix } => Some(LocalMatrix::One(*qubit, *matrix)),
            Gate::Unitary2 { q1, q2, matrix } => Some(LocalMatrix::Two(*q1, *q2, *matrix)),
            _ => None,
        }
    }
}

enum LocalMatrix {
    One(usize, [[C64; 2]; 2]),
    Two(usize, usize, [[C64; 4]; 4]),
}

impl LocalMatrix {
    fn adjoint(self) -> Self {
        match self {
            LocalMatrix::One(q, m) => {
                LocalMatrix::One(q, [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
            }
            LocalMatrix::Two(a, b, m) => {
                let mut t = [[ZERO; 4]; 4];
                for (r, row) in t.iter_mut().enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = m[c][r].conj();
                    }
                }
                LocalMatrix::Two(a, b, t)
            }
        }
    }

    fn apply(&self, op: &mut Operator) -> Result<()> {
        match self {
            LocalMatrix::One(q, m) => op.conjugate_1q(*q, m),
            LocalMatrix::Two(a, b, m) => op.conjugate_2q(*a, *b, m),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rx { qubit, angle } | Gate::Ry { qubit, angle } | Gate::Rz { qubit, angle } => {
                write!(f, "{}({angle})[{qubit}]", self.name())
            }
            Gate::Xx { q1, q2, angle } => write!(f, "XX({angle})[{q1},{q2}]"),
            Gate::PauliRotation { generator, angle } => write!(f, "exp(-i {angle} {generator})"),
            _ => write!(f, "{}{:?}", self.name(), self.qubits()),
        }
    }
}

impl Operator {
    /// `A → U A U†`.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        self.apply_gate_dir(g, false)
    }

    /// `A → U† A U` (Heisenberg-picture action).
    pub fn apply_gate_adjoint(&mut self, g: &Gate) -> Result<()> {
        self.apply_gate_dir(g, true)
    }

    fn apply_gate_dir(&mut self, g: &Gate, adjoint: bool) -> Result<()> {
        match g.qubits().as_slice() {
            [q] => self.check_qubit(*q)?,
            [a, b] => self.check_pair(*a, *b)?,
            _ => {}
        }
        if let Some((sigma, theta)) = g.as_pauli_rotation(self.n())? {
            return self.pauli_rotation(&sigma, if adjoint { -theta } else { theta });
        }
        let m = g.local_matrix().expect("every non-rotation gate has a local matrix");
        if adjoint {
            m.adjoint().apply(self)
        } else {
            m.apply(self)
        }
    }
}
