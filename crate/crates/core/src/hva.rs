//! Hamiltonian variational ansatz for the periodic transverse-field Ising chain.
//!
//! One ansatz layer is `e^{−iθ_{2l+1} H_Z} e^{−iθ_{2l} H_XX}`, compiled to
//! three gate layers: `XX(θ_{2l})` on pairs `(0,1), (2,3), …`, then on
//! `(1,2), …, (n−1,0)`, then `RZ(2θ_{2l+1})` on every qubit.

use crate::circuit::LayeredCircuit;
use crate::dm::{DensityMatrix, Gate, Observable, Operator};
use crate::error::{Error, Result};
use crate::noise::{total_error_rate, NoiseModel, QubitLayout};
use crate::pauli::{Pauli, PauliString};
use crate::program::{GradientResult, Program};

/// `H = −Σ_i X_i X_{i+1} − g Σ_i Z_i` with periodic boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfimHamiltonian {
    pub n: usize,
    pub g: f64,
}

impl TfimHamiltonian {
    pub fn new(n: usize, g: f64) -> Self {
        Self { n, g }
    }

    pub fn observable(&self) -> Result<Observable> {
        if self.n < 2 {
            return Err(Error::InvalidSize(format!("TFIM chain needs n ≥ 2, got {}", self.n)));
        }
        let mut obs = Observable::new(self.n);
        let bonds: Vec<(usize, usize)> = if self.n == 2 {
            vec![(0, 1)]
        } else {
            (0..self.n).map(|i| (i, (i + 1) % self.n)).collect()
        };
        for (a, b) in bonds {
            obs.push(-1.0, PauliString::from_sparse(self.n, &[(a, Pauli::X), (b, Pauli::X)])?)?;
        }
        for i in 0..self.n {
            obs.push(-self.g, PauliString::from_sparse(self.n, &[(i, Pauli::Z)])?)?;
        }
        Ok(obs)
    }

    pub fn to_operator(&self) -> Result<Operator> {
        self.observable()?.to_operator()
    }

    /// Lowest eigenvalue by dense diagonalization.
    pub fn ground_energy(&self) -> Result<f64> {
        Ok(self.to_operator()?.hermitian_eigenvalues()[0])
    }
}

/// An `L`-layer ansatz with its `2L` parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct HvaCircuit {
    n: usize,
    layers: usize,
    theta: Vec<f64>,
}

pub fn build_hva(n: usize, layers: usize, theta: Vec<f64>) -> Result<HvaCircuit> {
    check_topology(n)?;
    if theta.len() != 2 * layers {
        return Err(Error::InvalidSize(format!(
            "{layers} layers need {} parameters, got {}",
            2 * layers,
            theta.len()
        )));
    }
    Ok(HvaCircuit { n, layers, theta })
}

fn check_topology(n: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::UnsupportedTopology(format!(
            "the periodic XX layering needs an even n ≥ 4, got {n}"
        )));
    }
    Ok(())
}

impl HvaCircuit {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// Native-gate schedule with the current angles.
    pub fn circuit(&self) -> LayeredCircuit {
        hva_layers(self.n, &self.theta, &identity_map(self.n))
    }

    /// Parameter index driving gate number `g` of [`HvaCircuit::circuit`].
    pub fn param_of_gate(&self, g: usize) -> usize {
        param_of_gate(self.n, g)
    }
}

fn identity_map(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn param_of_gate(n: usize, g: usize) -> usize {
    let layer = g / (2 * n);
    if g % (2 * n) < n {
        2 * layer
    } else {
        2 * layer + 1
    }
}

fn hva_layers(n: usize, theta: &[f64], map: &[usize]) -> LayeredCircuit {
    let mut c = LayeredCircuit::new(n);
    for l in 0..theta.len() / 2 {
        let (a, b) = (theta[2 * l], theta[2 * l + 1]);
        let xx = |q: usize| Gate::Xx { q1: map[q], q2: map[(q + 1) % n], angle: a };
        let layers = [
            (0..n).step_by(2).map(xx).collect(),
            (1..n).step_by(2).map(xx).collect(),
            (0..n).map(|q| Gate::Rz { qubit: map[q], angle: 2.0 * b }).collect(),
        ];
        for layer in layers {
            c.push_layer(layer).expect("HVA layers act on disjoint qubits");
        }
    }
    c
}

/// A noisy HVA instance with its schedule compiled once; only the angles vary
/// between evaluations.
#[derive(Debug, Clone)]
pub struct HvaSimulator {
    layout: QubitLayout,
    layers: usize,
    program: Program,
    hamiltonian: Operator,
    initial: Operator,
    total_error_rate: f64,
}

impl HvaSimulator {
    pub fn new(layers: usize, layout: QubitLayout, model: &NoiseModel) -> Result<Self> {
        Self::with_qubit_map(layers, layout, model, &identity_map(layout.n()))
    }

    /// As [`HvaSimulator::new`] with the ansatz's qubit `q` placed on register
    /// qubit `map[q]`; noise still follows the layout's dirty block.
    pub fn with_qubit_map(layers: usize, layout: QubitLayout, model: &NoiseModel, map: &[usize]) -> Result<Self> {
        let n = layout.n();
        check_topology(n)?;
        let mut seen = vec![false; n];
        if map.len() != n || map.iter().any(|&q| q >= n || std::mem::replace(&mut seen[q], true)) {
            return Err(Error::InvalidTarget("qubit map must be a permutation".into()));
        }
        let circuit = hva_layers(n, &vec![0.0; 2 * layers], map);
        let events = model.schedule(&circuit, &layout)?;
        let program = Program::from_circuit(&circuit, &events, 2 * layers, |g| Some(param_of_gate(n, g)))?;
        Ok(Self {
            layout,
            layers,
            program,
            hamiltonian: TfimHamiltonian::new(n, 1.0).to_operator()?,
            initial: DensityMatrix::zero_state(n)?.into_operator(),
            total_error_rate: total_error_rate(&events),
        })
    }

    pub fn layout(&self) -> &QubitLayout {
        &self.layout
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn num_params(&self) -> usize {
        2 * self.layers
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn total_error_rate(&self) -> f64 {
        self.total_error_rate
    }

    /// Final state for parameters `theta`.
    pub fn state(&self, theta: &[f64]) -> Result<DensityMatrix> {
        let mut r = self.initial.clone();
        self.program.run(theta, &mut r)?;
        Ok(DensityMatrix::from_operator_unchecked(r))
    }

    /// `⟨H⟩` of the final state for the `g = 1` chain.
    pub fn cost(&self, theta: &[f64]) -> Result<f64> {
        self.program.expectation(theta, &self.initial, &self.hamiltonian)
    }

    pub fn gradient(&self, theta: &[f64]) -> Result<GradientResult> {
        self.program.gradient(theta, &self.initial, &self.hamiltonian)
    }

    pub fn gradient_by_resimulation(&self, theta: &[f64]) -> Result<GradientResult> {
        self.program.gradient_by_resimulation(theta, &self.initial, &self.hamiltonian)
    }
}

/// `⟨H⟩` for the circuit under the given layout and noise.
pub fn cost(circuit: &HvaCircuit, layout: &QubitLayout, model: &NoiseModel) -> Result<f64> {
    simulator_for(circuit, layout, model)?.cost(&circuit.theta)
}

/// Parameter-shift gradient of [`cost`].
pub fn gradient(circuit: &HvaCircuit, layout: &QubitLayout, model: &NoiseModel) -> Result<GradientResult> {
    simulator_for(circuit, layout, model)?.gradient(&circuit.theta)
}

fn simulator_for(circuit: &HvaCircuit, layout: &QubitLayout, model: &NoiseModel) -> Result<HvaSimulator> {
    if layout.n() != circuit.n {
        return Err(Error::InvalidSize(format!(
            "{}-qubit layout for a {}-qubit ansatz",
            layout.n(),
            circuit.n
        )));
    }
    HvaSimulator::new(circuit.layers, *layout, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_counts() {
        let c = build_hva(4, 1, vec![0.1, 0.2]).unwrap().circuit();
        assert_eq!(c.depth(), 3);
        let xx = c.gates().filter(|g| matches!(g, Gate::Xx { .. })).count();
        let rz = c.gates().filter(|g| matches!(g, Gate::Rz { .. })).count();
        assert_eq!((xx, rz), (4, 4));
        let c = build_hva(6, 2, vec![0.0; 4]).unwrap().circuit();
        let xx = c.gates().filter(|g| matches!(g, Gate::Xx { .. })).count();
        assert_eq!((xx, c.gate_count() - xx), (12, 12));
    }

    #[test]
    fn rejects_odd_and_small_n() {
        assert!(matches!(build_hva(5, 1, vec![0.0; 2]), Err(Error::UnsupportedTopology(_))));
        assert!(matches!(build_hva(2, 1, vec![0.0; 2]), Err(Error::UnsupportedTopology(_))));
        assert!(matches!(build_hva(4, 2, vec![0.0; 2]), Err(Error::InvalidSize(_))));
    }

    #[test]
    fn zero_angles_give_minus_n() {
        let layout = QubitLayout::clean_dirty(4, 0).unwrap();
        let c = build_hva(4, 3, vec![0.0; 6]).unwrap();
        assert!((cost(&c, &layout, &NoiseModel::Noiseless).unwrap() + 4.0).abs() < 1e-12);
        let c = build_hva(4, 0, vec![]).unwrap();
        assert!((cost(&c, &layout, &NoiseModel::Noiseless).unwrap() + 4.0).abs() < 1e-12);
        let g = gradient(&c, &layout, &NoiseModel::Noiseless).unwrap();
        assert!(g.partials.is_empty());
        assert_eq!(g.one_norm, 0.0);
    }

    #[test]
    fn tfim_terms() {
        let obs = TfimHamiltonian::new(4, 1.0).observable().unwrap();
        assert_eq!(obs.terms().len(), 8);
        let e = DensityMatrix::zero_state(4).unwrap().expectation(&obs).unwrap();
        assert!((e + 4.0).abs() < 1e-12);
    }

    #[test]
    fn cost_evals_count() {
        let layout = QubitLayout::clean_dirty(4, 2).unwrap();
        let sim = HvaSimulator::new(2, layout, &NoiseModel::Depolarizing { p: 0.01 }).unwrap();
        let g = sim.gradient(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(g.cost_evals, 2 * 2 * 2 * 4);
    }
}
