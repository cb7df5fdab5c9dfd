//! Noise channels, qubit layouts and per-gate noise schedules.
//!
//! Dirty qubits are always the contiguous block `0..n_d`; every rate a schedule
//! emits is multiplied by the layout's rescale factor `f`.

use crate::circuit::LayeredCircuit;
use crate::dm::{DensityMatrix, Gate, Operator, C64};
use crate::error::{check_probability, Error, Result};
use crate::pauli::{Pauli, PauliString};

/// Total qubits, dirty block size and error-rate rescale factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitLayout {
    n: usize,
    n_dirty: usize,
    f: f64,
}

impl QubitLayout {
    pub fn new(n: usize, n_dirty: usize, f: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("layout needs at least one qubit".into()));
        }
        if n_dirty > n {
            return Err(Error::InvalidSize(format!("n_d = {n_dirty} exceeds n = {n}")));
        }
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::InvalidSize(format!("rescale factor {f} is outside (0, 1]")));
        }
        Ok(Self { n, n_dirty, f })
    }

    pub fn clean_dirty(n: usize, n_dirty: usize) -> Result<Self> {
        Self::new(n, n_dirty, 1.0)
    }

    /// Every qubit dirty, all rates scaled by `f`.
    pub fn rescaled(n: usize, f: f64) -> Result<Self> {
        Self::new(n, n, f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_dirty(&self) -> usize {
        self.n_dirty
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn is_dirty(&self, q: usize) -> bool {
        q < self.n_dirty
    }
}

/// Pauli-type noise channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channel {
    /// `(1−p)ρ + (p/3)(XρX + YρY + ZρZ)`.
    Depolarize { qubit: usize, p: f64 },
    /// `(1−p)ρ + p ZρZ`.
    Dephase { qubit: usize, p: f64 },
    /// `(1−p)ρ + p σρσ` for a single-qubit Pauli σ.
    PauliFlip { qubit: usize, axis: Pauli, p: f64 },
    /// `(1−p)ρ + p (X⊗X)ρ(X⊗X)`.
    TwoQubitXx { q1: usize, q2: usize, p: f64 },
}

impl Channel {
    pub fn probability(&self) -> f64 {
        match *self {
            Channel::Depolarize { p, .. }
            | Channel::Dephase { p, .. }
            | Channel::PauliFlip { p, .. }
            | Channel::TwoQubitXx { p, .. } => p,
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Channel::Depolarize { qubit, .. }
            | Channel::Dephase { qubit, .. }
            | Channel::PauliFlip { qubit, .. } => vec![qubit],
            Channel::TwoQubitXx { q1, q2, .. } => vec![q1, q2],
        }
    }

    fn flip_string(&self, n: usize) -> Result<PauliString> {
        match *self {
            Channel::Dephase { qubit, .. } => PauliString::from_sparse(n, &[(qubit, Pauli::Z)]),
            Channel::PauliFlip { qubit, axis, .. } => PauliString::from_sparse(n, &[(qubit, axis)]),
            Channel::TwoQubitXx { q1, q2, .. } => {
                if q1 == q2 {
                    return Err(Error::InvalidTarget(format!("repeated qubit {q1}")));
                }
                PauliString::from_sparse(n, &[(q1, Pauli::X), (q2, Pauli::X)])
            }
            Channel::Depolarize { .. } => unreachable!("depolarizing is not a single flip"),
        }
    }

    pub fn apply(&self, op: &mut Operator) -> Result<()> {
        for q in self.qubits() {
            op.check_qubit(q)?;
        }
        match *self {
            Channel::Depolarize { qubit, p } => op.depolarize(qubit, p),
            _ => op.pauli_channel(&self.flip_string(op.n())?, self.probability()),
        }
    }

    /// Local Kraus operators (row-major, local index `2·b(q1) + b(q2)`).
    pub fn kraus(&self) -> Result<Vec<Vec<C64>>> {
        let p = self.probability();
        check_probability(p)?;
        let r = |x: f64| C64::new(x, 0.0);
        let i = C64::new(0.0, 1.0);
        let o = r(0.0);
        let one = r(1.0);
        let id = vec![one, o, o, one];
        let x = vec![o, one, one, o];
        let y = vec![o, -i, i, o];
        let z = vec![one, o, o, -one];
        let scaled = |m: &[C64], s: f64| m.iter().map(|v| v * s).collect::<Vec<_>>();
        Ok(match *self {
            Channel::Depolarize { .. } => {
                let s = (p / 3.0).sqrt();
                vec![scaled(&id, (1.0 - p).sqrt()), scaled(&x, s), scaled(&y, s), scaled(&z, s)]
            }
            Channel::Dephase { .. } => vec![scaled(&id, (1.0 - p).sqrt()), scaled(&z, p.sqrt())],
            Channel::PauliFlip { axis, .. } => {
                let m = match axis {
                    Pauli::I => &id,
                    Pauli::X => &x,
                    Pauli::Y => &y,
                    Pauli::Z => &z,
                };
                vec![scaled(&id, (1.0 - p).sqrt()), scaled(m, p.sqrt())]
            }
            Channel::TwoQubitXx { .. } => {
                let mut k0 = vec![o; 16];
                let mut k1 = vec![o; 16];
                for l in 0..4 {
                    k0[5 * l] = r((1.0 - p).sqrt());
                    k1[4 * l + (3 - l)] = r(p.sqrt());
                }
                vec![k0, k1]
            }
        })
    }

    fn scaled_by(self, f: f64) -> Self {
        match self {
            Channel::Depolarize { qubit, p } => Channel::Depolarize { qubit, p: p * f },
            Channel::Dephase { qubit, p } => Channel::Dephase { qubit, p: p * f },
            Channel::PauliFlip { qubit, axis, p } => Channel::PauliFlip { qubit, axis, p: p * f },
            Channel::TwoQubitXx { q1, q2, p } => Channel::TwoQubitXx { q1, q2, p: p * f },
        }
    }
}

/// Where a noise event fires: after gate `gate` of `layer`, or after the whole
/// layer when `gate` is `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub layer: usize,
    pub gate: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseEvent {
    pub channel: Channel,
    pub placement: Placement,
}

/// Per-gate error rates of the trapped-ion model at `f = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrappedIonRates {
    pub p_d: f64,
    pub p_dep: f64,
    pub p_d1: f64,
    pub p_d2: f64,
    pub p_alpha: f64,
    pub p_xx: f64,
    pub p_h: f64,
    pub p_idle: f64,
}

impl Default for TrappedIonRates {
    fn default() -> Self {
        Self {
            p_d: 1.5e-4,
            p_dep: 8e-4,
            p_d1: 7.5e-4,
            p_d2: 7.5e-4,
            p_alpha: 1e-4,
            p_xx: 1e-3,
            p_h: 1.25e-3,
            p_idle: 0.0,
        }
    }
}

impl TrappedIonRates {
    pub fn validate(&self) -> Result<()> {
        for p in [self.p_d, self.p_dep, self.p_d1, self.p_d2, self.p_alpha, self.p_xx, self.p_h, self.p_idle] {
            check_probability(p)?;
        }
        Ok(())
    }
}

/// Noise model choice for a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    Noiseless,
    /// Single-qubit depolarizing after every gate layer on each dirty qubit.
    Depolarizing { p: f64 },
    TrappedIon(TrappedIonRates),
}

impl NoiseModel {
    pub fn name(&self) -> &'static str {
        match self {
            NoiseModel::Noiseless => "noiseless",
            NoiseModel::Depolarizing { .. } => "depolarizing",
            NoiseModel::TrappedIon(_) => "trapped_ion",
        }
    }

    pub fn schedule(&self, circuit: &LayeredCircuit, layout: &QubitLayout) -> Result<Vec<NoiseEvent>> {
        check_layout(circuit, layout)?;
        match self {
            NoiseModel::Noiseless => Ok(Vec::new()),
            NoiseModel::Depolarizing { p } => depolarizing_schedule(circuit, layout, *p),
            NoiseModel::TrappedIon(rates) => trapped_ion_schedule(circuit, layout, rates),
        }
    }
}

fn check_layout(circuit: &LayeredCircuit, layout: &QubitLayout) -> Result<()> {
    if circuit.n() != layout.n() {
        return Err(Error::InvalidSize(format!(
            "{}-qubit circuit with a {}-qubit layout",
            circuit.n(),
            layout.n()
        )));
    }
    Ok(())
}

/// One `Depolarize(q, p·f)` per dirty qubit after every gate layer.
pub fn depolarizing_schedule(
    circuit: &LayeredCircuit,
    layout: &QubitLayout,
    p: f64,
) -> Result<Vec<NoiseEvent>> {
    check_layout(circuit, layout)?;
    check_probability(p)?;
    let p = p * layout.f();
    let mut out = Vec::with_capacity(circuit.depth() * layout.n_dirty());
    for layer in 0..circuit.depth() {
        for qubit in 0..layout.n_dirty() {
            out.push(NoiseEvent {
                channel: Channel::Depolarize { qubit, p },
                placement: Placement { layer, gate: None },
            });
        }
    }
    Ok(out)
}

/// Trapped-ion noise: single-qubit rotations on dirty qubits are followed by
/// angle imprecision, depolarizing and dephasing (in that order); XX gates
/// between two dirty qubits by heating, XX imprecision, depolarizing on both
/// qubits and dephasing on each. XX gates touching a clean qubit are noiseless.
/// Dirty qubits not touched by a layer get `Depolarize(p_idle)` when `p_idle > 0`.
pub fn trapped_ion_schedule(
    circuit: &LayeredCircuit,
    layout: &QubitLayout,
    rates: &TrappedIonRates,
) -> Result<Vec<NoiseEvent>> {
    check_layout(circuit, layout)?;
    rates.validate()?;
    let f = layout.f();
    let mut out = Vec::new();
    for (layer, gates) in circuit.layers().iter().enumerate() {
        let mut touched = vec![false; layout.n()];
        for (gi, g) in gates.iter().enumerate() {
            let placement = Placement { layer, gate: Some(gi) };
            let mut emit = |c: Channel| out.push(NoiseEvent { channel: c.scaled_by(f), placement });
            let axis = match g {
                Gate::Rx { .. } => Some(Pauli::X),
                Gate::Ry { .. } => Some(Pauli::Y),
                Gate::Rz { .. } => Some(Pauli::Z),
                Gate::Xx { .. } => None,
                other => return Err(Error::UnsupportedGate(other.name().to_string())),
            };
            for q in g.qubits() {
                touched[q] = true;
            }
            match (axis, g) {
                (Some(axis), _) => {
                    let qubit = g.qubits()[0];
                    if layout.is_dirty(qubit) {
                        emit(Channel::PauliFlip { qubit, axis, p: rates.p_alpha });
                        emit(Channel::Depolarize { qubit, p: rates.p_dep });
                        emit(Channel::Dephase { qubit, p: rates.p_d });
                    }
                }
                (None, Gate::Xx { q1, q2, .. }) => {
                    let (q1, q2) = (*q1, *q2);
                    if layout.is_dirty(q1) && layout.is_dirty(q2) {
                        emit(Channel::TwoQubitXx { q1, q2, p: rates.p_h });
                        emit(Channel::TwoQubitXx { q1, q2, p: rates.p_xx });
                        emit(Channel::Depolarize { qubit: q1, p: rates.p_dep });
                        emit(Channel::Depolarize { qubit: q2, p: rates.p_dep });
                        emit(Channel::Dephase { qubit: q1, p: rates.p_d1 });
                        emit(Channel::Dephase { qubit: q2, p: rates.p_d2 });
                    }
                }
                _ => unreachable!(),
            }
        }
        if rates.p_idle > 0.0 {
            for qubit in (0..layout.n_dirty()).filter(|&q| !touched[q]) {
                out.push(NoiseEvent {
                    channel: Channel::Depolarize { qubit, p: rates.p_idle * f },
                    placement: Placement { layer, gate: None },
                });
            }
        }
    }
    Ok(out)
}

/// Sum of the probability parameters of all events.
pub fn total_error_rate(events: &[NoiseEvent]) -> f64 {
    events.iter().map(|e| e.channel.probability()).sum()
}

impl DensityMatrix {
    pub fn apply_channel(&mut self, c: &Channel) -> Result<()> {
        c.apply(self.as_operator_mut())
    }
}
