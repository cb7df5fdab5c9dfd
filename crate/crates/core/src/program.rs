//! Noisy parametrized programs and their parameter-shift gradients.
//!
//! Every trainable gate is a Pauli rotation `e^{−iθσ}`. Its dummy variable is
//! shifted by `±π/4` and the partial derivative is `C(+) − C(−)`; summing the
//! dummies that share a parameter gives the derivative for that parameter.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{LayeredCircuit, Step};
use crate::dm::{Gate, Operator};
use crate::error::{Error, Result};
use crate::noise::{Channel, NoiseEvent};
use crate::pauli::PauliString;

#[derive(Debug, Clone, PartialEq)]
pub enum ProgramOp {
    /// `e^{−i θ[param] σ}`.
    Rotation { generator: PauliString, param: usize },
    Fixed(Gate),
    Noise(Channel),
}

impl ProgramOp {
    fn apply(&self, op: &mut Operator, theta: &[f64]) -> Result<()> {
        match self {
            ProgramOp::Rotation { generator, param } => op.pauli_rotation(generator, theta[*param]),
            ProgramOp::Fixed(g) => op.apply_gate(g),
            ProgramOp::Noise(c) => c.apply(op),
        }
    }

    fn apply_adjoint(&self, op: &mut Operator, theta: &[f64]) -> Result<()> {
        match self {
            ProgramOp::Rotation { generator, param } => op.pauli_rotation(generator, -theta[*param]),
            ProgramOp::Fixed(g) => op.apply_gate_adjoint(g),
            ProgramOp::Noise(c) => c.apply(op),
        }
    }
}

/// Partial derivatives of a cost with respect to every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientResult {
    pub partials: Vec<f64>,
    pub one_norm: f64,
    /// Shifted cost evaluations the parameter-shift rule needed (two per dummy).
    pub cost_evals: usize,
}

impl GradientResult {
    fn from_partials(partials: Vec<f64>, cost_evals: usize) -> Self {
        let one_norm = partials.iter().map(|p| p.abs()).sum();
        Self { partials, one_norm, cost_evals }
    }
}

/// A fixed sequence of gates, parametrized rotations and noise channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    n: usize,
    num_params: usize,
    ops: Vec<ProgramOp>,
}

impl Program {
    pub fn new(n: usize, num_params: usize, ops: Vec<ProgramOp>) -> Result<Self> {
        for op in &ops {
            let qubits = match op {
                ProgramOp::Rotation { generator, param } => {
                    if *param >= num_params {
                        return Err(Error::InvalidTarget(format!("parameter {param} of {num_params}")));
                    }
                    if generator.len() != n || !generator.is_hermitian() {
                        return Err(Error::InvalidTarget(format!("generator {generator} on {n} qubits")));
                    }
                    continue;
                }
                ProgramOp::Fixed(g) => g.qubits(),
                ProgramOp::Noise(c) => c.qubits(),
            };
            if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidTarget(format!("qubit {q} on {n} qubits")));
            }
        }
        Ok(Self { n, num_params, ops })
    }

    /// Converts a circuit with its noise into a program. `param_of` receives the
    /// running gate index and returns the parameter driving that gate, if any;
    /// such gates must be Pauli rotations and their angle is replaced by it.
    pub fn from_circuit(
        circuit: &LayeredCircuit,
        events: &[NoiseEvent],
        num_params: usize,
        mut param_of: impl FnMut(usize) -> Option<usize>,
    ) -> Result<Self> {
        let n = circuit.n();
        let mut ops = Vec::new();
        let mut gate_idx = 0;
        for step in circuit.interleave(events)? {
            match step {
                Step::Noise(c) => ops.push(ProgramOp::Noise(c)),
                Step::Gate(g) => {
                    match param_of(gate_idx) {
                        Some(param) => {
                            let (generator, _) = g.as_pauli_rotation(n)?.ok_or_else(|| {
                                Error::UnsupportedGate(format!("{} cannot carry a parameter", g.name()))
                            })?;
                            ops.push(ProgramOp::Rotation { generator, param });
                        }
                        None => ops.push(ProgramOp::Fixed(g)),
                    }
                    gate_idx += 1;
                }
            }
        }
        Self::new(n, num_params, ops)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn ops(&self) -> &[ProgramOp] {
        &self.ops
    }

    /// Number of dummy variables (trainable gates).
    pub fn num_dummies(&self) -> usize {
        self.ops.iter().filter(|o| matches!(o, ProgramOp::Rotation { .. })).count()
    }

    pub fn total_error_rate(&self) -> f64 {
        self.ops
            .iter()
            .map(|o| match o {
                ProgramOp::Noise(c) => c.probability(),
                _ => 0.0,
            })
            .sum()
    }

    fn check(&self, theta: &[f64], rho: &Operator, obs: Option<&Operator>) -> Result<()> {
        if theta.len() != self.num_params {
            return Err(Error::InvalidSize(format!(
                "{} parameters given, {} expected",
                theta.len(),
                self.num_params
            )));
        }
        if rho.n() != self.n || obs.is_some_and(|o| o.n() != self.n) {
            return Err(Error::InvalidSize(format!("operators must act on {} qubits", self.n)));
        }
        Ok(())
    }

    /// Evolves `rho` in place.
    pub fn run(&self, theta: &[f64], rho: &mut Operator) -> Result<()> {
        self.check(theta, rho, None)?;
        for op in &self.ops {
            op.apply(rho, theta)?;
        }
        Ok(())
    }

    /// `Tr[O · Φ_θ(ρ)]`.
    pub fn expectation(&self, theta: &[f64], rho: &Operator, obs: &Operator) -> Result<f64> {
        let mut r = rho.clone();
        self.run(theta, &mut r)?;
        Ok(r.trace_product(obs).re)
    }

    /// Parameter-shift gradient by re-simulating the program for every shifted
    /// dummy. Quadratic in program length; the reference for [`Program::gradient`].
    pub fn gradient_by_resimulation(&self, theta: &[f64], rho: &Operator, obs: &Operator) -> Result<GradientResult> {
        self.check(theta, rho, Some(obs))?;
        let mut partials = vec![0.0; self.num_params];
        let mut evals = 0;
        for (i, op) in self.ops.iter().enumerate() {
            let ProgramOp::Rotation { generator, param } = op else { continue };
            let mut shifted = [0.0; 2];
            for (k, s) in [FRAC_PI_4, -FRAC_PI_4].into_iter().enumerate() {
                let mut r = rho.clone();
                for (j, o) in self.ops.iter().enumerate() {
                    if j == i {
                        r.pauli_rotation(generator, theta[*param] + s)?;
                    } else {
                        o.apply(&mut r, theta)?;
                    }
                }
                shifted[k] = r.trace_product(obs).re;
                evals += 1;
            }
            partials[*param] += shifted[0] - shifted[1];
        }
        Ok(GradientResult::from_partials(partials, evals))
    }

    /// Parameter-shift gradient evaluated with one forward and one backward
    /// sweep: the state before each trainable gate is rebuilt from checkpoints,
    /// the observable is carried backwards in the Heisenberg picture, and each
    /// shifted cost is `Tr[O_after · G_±(ρ_before)]`. Returns the same values as
    /// [`Program::gradient_by_resimulation`].
    pub fn gradient(&self, theta: &[f64], rho: &Operator, obs: &Operator) -> Result<GradientResult> {
        Ok(self.cost_and_gradient(theta, rho, obs)?.1)
    }

    /// Unshifted cost together with the gradient.
    pub fn cost_and_gradient(
        &self,
        theta: &[f64],
        rho: &Operator,
        obs: &Operator,
    ) -> Result<(f64, GradientResult)> {
        self.check(theta, rho, Some(obs))?;
        let m = self.ops.len();
        let stride = ((m as f64).sqrt().ceil() as usize).max(1);

        let mut checkpoints = Vec::with_capacity(m / stride + 1);
        let mut state = rho.clone();
        for (i, op) in self.ops.iter().enumerate() {
            if i % stride == 0 {
                checkpoints.push(state.clone());
            }
            op.apply(&mut state, theta)?;
        }
        let cost = state.trace_product(obs).re;
        drop(state);

        let mut partials = vec![0.0; self.num_params];
        let mut evals = 0;
        let mut heis = obs.clone();
        let mut buf: Vec<Operator> = Vec::with_capacity(stride + 1);
        let mut scratch = rho.clone();
        for (seg, start_state) in checkpoints.iter().enumerate().rev() {
            let start = seg * stride;
            let end = (start + stride).min(m);
            buf.clear();
            buf.push(start_state.clone());
            for i in start..end {
                let mut next = buf[i - start].clone();
                self.ops[i].apply(&mut next, theta)?;
                buf.push(next);
            }
            for i in (start..end).rev() {
                let op = &self.ops[i];
                if let ProgramOp::Rotation { generator, param } = op {
                    let after = &buf[i + 1 - start];
                    let mut diff = 0.0;
                    for s in [FRAC_PI_4, -FRAC_PI_4] {
                        scratch.clone_from(after);
                        scratch.pauli_rotation(generator, s)?;
                        let v = scratch.trace_product(&heis).re;
                        diff += if s > 0.0 { v } else { -v };
                        evals += 1;
                    }
                    partials[*param] += diff;
                }
                op.apply_adjoint(&mut heis, theta)?;
            }
        }
        Ok((cost, GradientResult::from_partials(partials, evals)))
    }
}
