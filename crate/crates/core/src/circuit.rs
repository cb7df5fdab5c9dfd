//! Circuits organised into layers of gates acting on disjoint qubits.

use crate::dm::{DensityMatrix, Gate, Operator};
use crate::error::{Error, Result};
use crate::noise::{Channel, NoiseEvent};

/// A gate schedule split into layers; gates within a layer commute because they
/// act on disjoint qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredCircuit {
    n: usize,
    layers: Vec<Vec<Gate>>,
}

impl LayeredCircuit {
    pub fn new(n: usize) -> Self {
        Self { n, layers: Vec::new() }
    }

    pub fn from_layers(n: usize, layers: Vec<Vec<Gate>>) -> Result<Self> {
        let mut c = Self::new(n);
        for layer in layers {
            c.push_layer(layer)?;
        }
        Ok(c)
    }

    pub fn push_layer(&mut self, layer: Vec<Gate>) -> Result<()> {
        let mut used = vec![false; self.n];
        for g in &layer {
            let qs = g.qubits();
            if qs.is_empty() {
                continue;
            }
            for &q in &qs {
                if q >= self.n {
                    return Err(Error::InvalidTarget(format!("qubit {q} on a {}-qubit circuit", self.n)));
                }
                if used[q] {
                    return Err(Error::InvalidTarget(format!("qubit {q} used twice in one layer")));
                }
                used[q] = true;
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> &[Vec<Gate>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.layers.iter().flatten()
    }

    /// Gates interleaved with noise: each event follows the gate (or layer) it is
    /// attached to, in the order the events are listed.
    pub fn interleave(&self, events: &[NoiseEvent]) -> Result<Vec<Step>> {
        let mut after_gate: Vec<Vec<Vec<Channel>>> =
            self.layers.iter().map(|l| vec![Vec::new(); l.len()]).collect();
        let mut after_layer: Vec<Vec<Channel>> = vec![Vec::new(); self.layers.len()];
        for e in events {
            let layer = e.placement.layer;
            if layer >= self.layers.len() {
                return Err(Error::InvalidTarget(format!("noise placed after missing layer {layer}")));
            }
            match e.placement.gate {
                Some(g) if g < self.layers[layer].len() => after_gate[layer][g].push(e.channel),
                Some(g) => {
                    return Err(Error::InvalidTarget(format!("noise placed after missing gate {g} of layer {layer}")))
                }
                None => after_layer[layer].push(e.channel),
            }
        }
        let mut steps = Vec::with_capacity(self.gate_count() + events.len());
        for (l, layer) in self.layers.iter().enumerate() {
            for (g, gate) in layer.iter().enumerate() {
                steps.push(Step::Gate(gate.clone()));
                steps.extend(after_gate[l][g].iter().copied().map(Step::Noise));
            }
            steps.extend(after_layer[l].iter().copied().map(Step::Noise));
        }
        Ok(steps)
    }

    /// Runs the circuit with the given noise on `rho`.
    pub fn run(&self, rho: &mut DensityMatrix, events: &[NoiseEvent]) -> Result<()> {
        if rho.n() != self.n {
            return Err(Error::InvalidSize(format!(
                "{}-qubit circuit on a {}-qubit state",
                self.n,
                rho.n()
            )));
        }
        for step in self.interleave(events)? {
            step.apply(rho.as_operator_mut())?;
        }
        Ok(())
    }
}

/// One element of a noisy program.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Gate(Gate),
    Noise(Channel),
}

impl Step {
    pub fn apply(&self, op: &mut Operator) -> Result<()> {
        match self {
            Step::Gate(g) => op.apply_gate(g),
            Step::Noise(c) => c.apply(op),
        }
    }

    /// Heisenberg-picture action (adjoint map).
    pub fn apply_adjoint(&self, op: &mut Operator) -> Result<()> {
        match self {
            Step::Gate(g) => op.apply_gate_adjoint(g),
            // Pauli channels are self-adjoint.
            Step::Noise(c) => c.apply(op),
        }
    }
}
