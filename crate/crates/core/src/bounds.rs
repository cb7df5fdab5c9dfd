//! Model circuits for the concentration and gradient bounds, and checks of
//! each bound against exact simulation.
//!
//! Bound formulas use the probability `p` of the channel `(1−p)ρ + p·I/2`;
//! simulations convert it to the Pauli-weighted form via `p_pauli = 3p/4`.

use std::fmt;

use rand::Rng;

use crate::dm::{DensityMatrix, Gate, Operator};
use crate::error::{check_probability, Error, Result};
use crate::ladder::gamma;
use crate::noise::Channel;
use crate::pauli::{Pauli, PauliString};
use crate::program::{Program, ProgramOp};
use crate::random::{haar_1q, haar_2q, mix_seed, random_angles, random_density_matrix, rng_from_seed};

/// Slack allowed on `lhs ≤ rhs`.
pub const BOUND_TOL: f64 = 1e-10;

/// Converts `(1−p)ρ + p·I/2` to the `(1−q)ρ + (q/3)ΣσρΣ` parameter.
pub fn to_pauli_form(p_mixing: f64) -> f64 {
    0.75 * p_mixing
}

/// Converts `(1−q)ρ + (q/3)ΣσρΣ` to the `(1−p)ρ + p·I/2` parameter.
pub fn to_mixing_form(p_pauli: f64) -> f64 {
    p_pauli * 4.0 / 3.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs, margin: rhs - lhs, passed: lhs <= rhs + BOUND_TOL }
    }
}

/// `L` layers of (CNOT ladder, then noise on the first `n_d` qubits).
///
/// The ladder is laid out so that its Heisenberg action on `{I, Z}` strings is
/// [`crate::ladder::cnot_ladder_step`]: CNOTs `(n−2→n−1), …, (0→1)` in that
/// time order.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderModel {
    pub n: usize,
    pub n_dirty: usize,
    pub layers: usize,
    /// Mixing-form probability.
    pub p: f64,
}

impl LadderModel {
    pub fn new(n: usize, n_dirty: usize, layers: usize, p: f64) -> Result<Self> {
        gamma(n, n_dirty, layers)?;
        check_probability(p)?;
        Ok(Self { n, n_dirty, layers, p })
    }

    pub fn gamma(&self) -> u64 {
        gamma(self.n, self.n_dirty, self.layers).expect("validated at construction")
    }

    fn noise(&self) -> impl Iterator<Item = ProgramOp> + '_ {
        let p = to_pauli_form(self.p);
        (0..self.n_dirty).map(move |qubit| ProgramOp::Noise(Channel::Depolarize { qubit, p }))
    }

    /// The channel `W_L` as program steps.
    pub fn forward_ops(&self) -> Vec<ProgramOp> {
        let mut ops = Vec::new();
        for _ in 0..self.layers {
            for c in (0..self.n - 1).rev() {
                ops.push(ProgramOp::Fixed(Gate::Cnot { control: c, target: c + 1 }));
            }
            ops.extend(self.noise());
        }
        ops
    }

    /// The adjoint channel `W_L†` as program steps (noise, then the reversed ladder).
    pub fn adjoint_ops(&self) -> Vec<ProgramOp> {
        let mut ops = Vec::new();
        for _ in 0..self.layers {
            ops.extend(self.noise());
            for c in 0..self.n - 1 {
                ops.push(ProgramOp::Fixed(Gate::Cnot { control: c, target: c + 1 }));
            }
        }
        ops
    }
}

fn projector(z: &[bool]) -> Result<Operator> {
    Ok(DensityMatrix::basis_state(z)?.into_operator())
}

fn check_word(n: usize, z: &[bool]) -> Result<()> {
    if z.len() != n {
        return Err(Error::InvalidSize(format!("{}-bit outcome for {n} qubits", z.len())));
    }
    Ok(())
}

/// `Tr[W_L(ρ)|z⟩⟨z|] − 2^{−n} ≤ (1−p)^Γ √P(ρ)`.
pub fn check_prop1(model: &LadderModel, rho: &DensityMatrix, z: &[bool]) -> Result<BoundCheck> {
    check_word(model.n, z)?;
    let prog = Program::new(model.n, 0, model.forward_ops())?;
    let lhs = prog.expectation(&[], rho.as_operator(), &projector(z)?)? - 1.0 / rho.dim() as f64;
    let rhs = (1.0 - model.p).powi(model.gamma() as i32) * rho.purity().sqrt();
    Ok(BoundCheck::new(lhs, rhs))
}

/// Which register of the entangled model carries noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoisySide {
    A,
    B,
    Both,
}

impl fmt::Display for NoisySide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoisySide::A => "A",
            NoisySide::B => "B",
            NoisySide::Both => "both",
        })
    }
}

/// Registers `A = 0..n_A` and `B = n_A..n_A+n_B`, separate evolutions `U` on
/// `A` and `V` on `B` (each unitary layer followed by noise on every qubit of a
/// noisy side), optional global unitary `W` before them, and `m` Bell pairs
/// `(n_A−m+j, n_A+j)` straddling the cut.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledModel {
    pub n_a: usize,
    pub n_b: usize,
    pub m: usize,
    pub noisy: NoisySide,
    /// Mixing-form probability.
    pub p: f64,
    pub u_layers: Vec<Vec<Gate>>,
    pub v_layers: Vec<Vec<Gate>>,
    pub w_layers: Vec<Vec<Gate>>,
}

impl EntangledModel {
    /// Seeded instance with Haar-random brickwork layers; `W` has depth `n`
    /// when `with_w` is set and is empty otherwise.
    #[allow(clippy::too_many_arguments)]
    pub fn random<R: Rng + ?Sized>(
        n_a: usize,
        n_b: usize,
        m: usize,
        l_u: usize,
        l_v: usize,
        noisy: NoisySide,
        p: f64,
        with_w: bool,
        rng: &mut R,
    ) -> Result<Self> {
        let n = n_a + n_b;
        let model = Self {
            n_a,
            n_b,
            m,
            noisy,
            p,
            u_layers: (0..l_u).map(|l| brickwork_layer(0, n_a, l % 2, rng)).collect(),
            v_layers: (0..l_v).map(|l| brickwork_layer(n_a, n, l % 2, rng)).collect(),
            w_layers: if with_w {
                (0..n).map(|l| brickwork_layer(0, n, l % 2, rng)).collect()
            } else {
                Vec::new()
            },
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_a == 0 || self.n_b == 0 {
            return Err(Error::InvalidSize("both registers need at least one qubit".into()));
        }
        if self.m == 0 || self.m > self.n_a.min(self.n_b) {
            return Err(Error::InvalidSize(format!(
                "m = {} must be in 1..={}",
                self.m,
                self.n_a.min(self.n_b)
            )));
        }
        check_probability(self.p)?;
        let n = self.n();
        let inside = |layers: &[Vec<Gate>], lo: usize, hi: usize| {
            layers.iter().flatten().all(|g| g.qubits().iter().all(|q| (lo..hi).contains(q)))
        };
        if !inside(&self.u_layers, 0, self.n_a) || !inside(&self.v_layers, self.n_a, n) || !inside(&self.w_layers, 0, n) {
            return Err(Error::InvalidTarget("layer gates leave their register".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn l_u(&self) -> usize {
        self.u_layers.len()
    }

    pub fn l_v(&self) -> usize {
        self.v_layers.len()
    }

    /// Noisy depth entering the bound exponent.
    pub fn l_t(&self) -> usize {
        match self.noisy {
            NoisySide::A => self.l_u(),
            NoisySide::B => self.l_v(),
            NoisySide::Both => self.l_u() + self.l_v(),
        }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.m).map(|j| (self.n_a - self.m + j, self.n_a + j)).collect()
    }

    /// `ρ → VρV†` with `V` = Hadamard on each control, then the CNOTs.
    pub fn entangle_ops(&self) -> Vec<ProgramOp> {
        let mut ops: Vec<ProgramOp> = self.pairs().iter().map(|&(a, _)| ProgramOp::Fixed(Gate::H { qubit: a })).collect();
        ops.extend(self.pairs().iter().map(|&(a, b)| ProgramOp::Fixed(Gate::Cnot { control: a, target: b })));
        ops
    }

    /// `ρ → V†ρV`.
    pub fn disentangle_ops(&self) -> Vec<ProgramOp> {
        let mut ops: Vec<ProgramOp> =
            self.pairs().iter().map(|&(a, b)| ProgramOp::Fixed(Gate::Cnot { control: a, target: b })).collect();
        ops.extend(self.pairs().iter().map(|&(a, _)| ProgramOp::Fixed(Gate::H { qubit: a })));
        ops
    }

    pub fn w_ops(&self) -> Vec<ProgramOp> {
        self.w_layers.iter().flatten().cloned().map(ProgramOp::Fixed).collect()
    }

    /// The separable noisy evolution `T`.
    pub fn t_ops(&self) -> Vec<ProgramOp> {
        let p = to_pauli_form(self.p);
        let mut ops = Vec::new();
        let mut side = |layers: &[Vec<Gate>], lo: usize, hi: usize, noisy: bool| {
            for layer in layers {
                ops.extend(layer.iter().cloned().map(ProgramOp::Fixed));
                if noisy {
                    ops.extend((lo..hi).map(|qubit| ProgramOp::Noise(Channel::Depolarize { qubit, p })));
                }
            }
        };
        let noisy_a = matches!(self.noisy, NoisySide::A | NoisySide::Both);
        let noisy_b = matches!(self.noisy, NoisySide::B | NoisySide::Both);
        side(&self.u_layers, 0, self.n_a, noisy_a);
        side(&self.v_layers, self.n_a, self.n(), noisy_b);
        ops
    }
}

/// One brickwork layer on qubits `lo..hi`: Haar two-qubit gates on pairs
/// starting at `lo + offset`, Haar single-qubit gates on qubits left over.
pub fn brickwork_layer<R: Rng + ?Sized>(lo: usize, hi: usize, offset: usize, rng: &mut R) -> Vec<Gate> {
    let mut gates = Vec::new();
    let mut covered = vec![false; hi - lo];
    let mut q = lo + offset.min(1);
    while q + 1 < hi {
        gates.push(Gate::Unitary2 { q1: q, q2: q + 1, matrix: haar_2q(rng) });
        covered[q - lo] = true;
        covered[q + 1 - lo] = true;
        q += 2;
    }
    for (i, c) in covered.iter().enumerate() {
        if !c {
            gates.push(Gate::Unitary1 { qubit: lo + i, matrix: haar_1q(rng) });
        }
    }
    gates
}

/// `Tr[B_m†∘T∘W(ρ)|z⟩⟨z|] − 2^{−n} ≤ (1−p)^{L_T} √P(ρ)`.
pub fn check_prop2(model: &EntangledModel, rho: &DensityMatrix, z: &[bool]) -> Result<BoundCheck> {
    model.validate()?;
    let n = model.n();
    check_word(n, z)?;
    let mut ops = model.w_ops();
    ops.extend(model.t_ops());
    ops.extend(model.disentangle_ops());
    let prog = Program::new(n, 0, ops)?;
    let lhs = prog.expectation(&[], rho.as_operator(), &projector(z)?)? - 1.0 / rho.dim() as f64;
    let rhs = (1.0 - model.p).powi(model.l_t() as i32) * rho.purity().sqrt();
    Ok(BoundCheck::new(lhs, rhs))
}

/// `Y(θ)`: in time order `W_0, e^{−iθ_1 H_1}, W_1, …, e^{−iθ_K H_K}, W_K`
/// with Pauli-string generators, so `‖H_k‖_∞ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainableUnitary {
    pub generators: Vec<PauliString>,
    /// `K + 1` fixed blocks.
    pub fixed: Vec<Vec<Gate>>,
    pub theta: Vec<f64>,
}

impl TrainableUnitary {
    pub fn random<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Self> {
        let mut generators = Vec::with_capacity(k);
        while generators.len() < k {
            let paulis: Vec<Pauli> = (0..n)
                .map(|_| [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..4)])
                .collect();
            let s = PauliString::from_paulis(&paulis)?;
            if !s.is_identity() {
                generators.push(s);
            }
        }
        let fixed = (0..=k).map(|l| brickwork_layer(0, n, l % 2, rng)).collect();
        Ok(Self { generators, fixed, theta: random_angles(k, rng) })
    }

    fn ops(&self) -> Result<Vec<ProgramOp>> {
        if self.fixed.len() != self.generators.len() + 1 || self.theta.len() != self.generators.len() {
            return Err(Error::InvalidSize("K generators need K angles and K + 1 fixed blocks".into()));
        }
        let mut ops: Vec<ProgramOp> = self.fixed[0].iter().cloned().map(ProgramOp::Fixed).collect();
        for (k, g) in self.generators.iter().enumerate() {
            ops.push(ProgramOp::Rotation { generator: *g, param: k });
            ops.extend(self.fixed[k + 1].iter().cloned().map(ProgramOp::Fixed));
        }
        Ok(ops)
    }
}

fn max_partial(ops: Vec<ProgramOp>, n: usize, y: &TrainableUnitary, rho: &DensityMatrix, z: &[bool]) -> Result<f64> {
    let prog = Program::new(n, y.theta.len(), ops)?;
    let g = prog.gradient(&y.theta, rho.as_operator(), &projector(z)?)?;
    Ok(g.partials.iter().fold(0.0, |m, v| m.max(v.abs())))
}

/// `max_k |∂_k C| ≤ (1−p)^{Γ(L1)+Γ(L2)}` for `C = Tr[W_{L2}∘Y(θ)∘W_{L1}†(ρ)|z⟩⟨z|]`.
/// Both ladder models must share `n`, `n_d` and `p`.
pub fn check_prop3(
    first: &LadderModel,
    second: &LadderModel,
    y: &TrainableUnitary,
    rho: &DensityMatrix,
    z: &[bool],
) -> Result<BoundCheck> {
    if (first.n, first.n_dirty, first.p) != (second.n, second.n_dirty, second.p) {
        return Err(Error::InvalidSize("ladder blocks must share n, n_d and p".into()));
    }
    check_word(first.n, z)?;
    let mut ops = first.adjoint_ops();
    ops.extend(y.ops()?);
    ops.extend(second.forward_ops());
    let lhs = max_partial(ops, first.n, y, rho, z)?;
    let rhs = (1.0 - first.p).powi((first.gamma() + second.gamma()) as i32);
    Ok(BoundCheck::new(lhs, rhs))
}

/// `max_k |∂_k C| ≤ (1−p)^{L_T1+L_T2}` for
/// `C = Tr[B_{m2}†∘T_2∘Y(θ)∘T_1∘B_{m1}(ρ)|z⟩⟨z|]`. `W` layers are ignored.
pub fn check_prop4(
    first: &EntangledModel,
    second: &EntangledModel,
    y: &TrainableUnitary,
    rho: &DensityMatrix,
    z: &[bool],
) -> Result<BoundCheck> {
    first.validate()?;
    second.validate()?;
    if first.n() != second.n() || first.p != second.p {
        return Err(Error::InvalidSize("entangled blocks must share n and p".into()));
    }
    check_word(first.n(), z)?;
    let mut ops = first.entangle_ops();
    ops.extend(first.t_ops());
    ops.extend(y.ops()?);
    ops.extend(second.t_ops());
    ops.extend(second.disentangle_ops());
    let lhs = max_partial(ops, first.n(), y, rho, z)?;
    let rhs = (1.0 - first.p).powi((first.l_t() + second.l_t()) as i32);
    Ok(BoundCheck::new(lhs, rhs))
}

/// Verifies `II→II, IZ→ZZ, ZI→XX, ZZ→−YY` under `σ → VσV†`, `V` = Hadamard on
/// the first qubit then CNOT from it.
pub fn check_bell_mapping() -> bool {
    bell_images().iter().all(|(got, want)| (got.clone() - want.clone()).norm2() < 1e-12)
}

/// `(VσV†, expected)` for the four `{I, Z}` strings on two qubits.
pub fn bell_images() -> Vec<(Operator, Operator)> {
    [("II", "II"), ("IZ", "ZZ"), ("ZI", "XX"), ("ZZ", "-YY")]
        .iter()
        .map(|(from, to)| {
            let mut op = Operator::pauli(&from.parse().expect("literal")).expect("2 qubits");
            op.apply_gate(&Gate::H { qubit: 0 }).expect("in range");
            op.apply_gate(&Gate::Cnot { control: 0, target: 1 }).expect("in range");
            (op, Operator::pauli(&to.parse().expect("literal")).expect("2 qubits"))
        })
        .collect()
}

/// Heisenberg amplitude of `string` after `W_L†`: the coefficient of its
/// `L`-th ladder image in `W_L†(σ)`.
pub fn heisenberg_amplitude(model: &LadderModel, string: &crate::pauli::ZString) -> Result<f64> {
    if string.len() != model.n {
        return Err(Error::InvalidSize("string length must equal n".into()));
    }
    let sigma = PauliString::from_zstring(string);
    let mut image = *string;
    for _ in 0..model.layers {
        image = crate::ladder::cnot_ladder_step(&image)?;
    }
    let mut op = Operator::pauli(&sigma)?;
    Program::new(model.n, 0, model.adjoint_ops())?.run(&[], &mut op)?;
    let amp = op.trace_with_pauli(&PauliString::from_zstring(&image)) / op.dim() as f64;
    Ok(amp.re)
}

/// Comparison of `n_d` dirty qubits at rate `p` with all qubits dirty at
/// `p·n_d/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct RescalingReport {
    /// `(1−p)^{L·n_d/n}`.
    pub clean_dirty: f64,
    /// `(1−p·n_d/n)^L`.
    pub rescaled: f64,
    pub relative_gap: f64,
    /// `2·L·p²`.
    pub taylor_bound: f64,
    /// Largest relative difference of `Tr[W_l(|0⟩⟨0|)|0⟩⟨0|] − 2^{−n}` between the
    /// two configurations over `l = 1..=L`.
    pub simulated_gap: f64,
    pub within_bound: bool,
}

/// Largest `p` accepted by [`check_rescaling_identity`].
pub const RESCALING_MAX_P: f64 = 0.05;

pub fn check_rescaling_identity(n: usize, n_dirty: usize, layers: usize, p: f64) -> Result<RescalingReport> {
    gamma(n, n_dirty, layers)?;
    if !(0.0..=RESCALING_MAX_P).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let r = n_dirty as f64 / n as f64;
    let clean_dirty = (1.0 - p).powf(layers as f64 * r);
    let rescaled = (1.0 - p * r).powi(layers as i32);
    let relative_gap = (clean_dirty - rescaled).abs() / clean_dirty.max(rescaled);
    let taylor_bound = 2.0 * layers as f64 * p * p;

    let mut simulated_gap: f64 = 0.0;
    if n_dirty > 0 {
        let zero = DensityMatrix::zero_state(n)?;
        let proj = zero.as_operator().clone();
        let base = 1.0 / zero.dim() as f64;
        let pc = to_pauli_form(p);
        let mut a = zero.as_operator().clone();
        let mut b = a.clone();
        let ladder = LadderModel::new(n, 0, 1, 0.0)?.forward_ops();
        for _ in 0..layers {
            for op in &ladder {
                if let ProgramOp::Fixed(g) = op {
                    a.apply_gate(g)?;
                    b.apply_gate(g)?;
                }
            }
            for q in 0..n_dirty {
                a.depolarize(q, pc)?;
            }
            for q in 0..n {
                b.depolarize(q, pc * r)?;
            }
            let da = a.trace_product(&proj).re - base;
            let db = b.trace_product(&proj).re - base;
            simulated_gap = simulated_gap.max((da - db).abs() / da.abs().max(db.abs()));
        }
    }
    Ok(RescalingReport {
        clean_dirty,
        rescaled,
        relative_gap,
        taylor_bound,
        simulated_gap,
        within_bound: relative_gap <= taylor_bound + 1e-15,
    })
}

/// A randomized bound check with its sampled parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub prop: u8,
    pub n: usize,
    pub n_dirty: usize,
    /// Depth parameters, e.g. `L=5` or `LU=2;LV=3;m=1;noisy=A`.
    pub params: String,
    pub p: f64,
    pub seed: u64,
    pub check: BoundCheck,
}

/// Largest register used by [`random_check`].
pub const RANDOM_CHECK_MAX_QUBITS: usize = 6;

fn random_input<R: Rng + ?Sized>(n: usize, basis_only: bool, rng: &mut R) -> Result<DensityMatrix> {
    if basis_only || rng.random_bool(0.5) {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        DensityMatrix::basis_state(&bits)
    } else {
        let rank = rng.random_range(1..=(1usize << n).min(4));
        random_density_matrix(n, rank, rng)
    }
}

/// Random outcome, or half of the time the most likely outcome of `ops` on `rho`.
fn pick_outcome<R: Rng + ?Sized>(n: usize, ops: &[ProgramOp], num_params: usize, theta: &[f64], rho: &DensityMatrix, rng: &mut R) -> Result<Vec<bool>> {
    if rng.random_bool(0.5) {
        return Ok((0..n).map(|_| rng.random_bool(0.5)).collect());
    }
    let mut out = rho.as_operator().clone();
    Program::new(n, num_params, ops.to_vec())?.run(theta, &mut out)?;
    let best = (0..out.dim())
        .max_by(|&a, &b| out.get(a, a).re.total_cmp(&out.get(b, b).re))
        .unwrap_or(0);
    Ok((0..n).map(|q| best >> q & 1 == 1).collect())
}

fn random_side<R: Rng + ?Sized>(rng: &mut R) -> NoisySide {
    [NoisySide::A, NoisySide::B, NoisySide::Both][rng.random_range(0..3)]
}

/// One seeded random instance of proposition `prop` (1–4) with `n ≤ 6`.
pub fn random_check(prop: u8, seed: u64) -> Result<CheckRecord> {
    let mut rng = rng_from_seed(seed);
    let rng = &mut rng;
    let p: f64 = rng.random_range(0.0..=1.0);
    match prop {
        1 | 3 => {
            let n = rng.random_range(2..=RANDOM_CHECK_MAX_QUBITS);
            let n_dirty = rng.random_range(0..=n);
            if prop == 1 {
                let layers = rng.random_range(0..=2 * n);
                let model = LadderModel::new(n, n_dirty, layers, p)?;
                let rho = random_input(n, false, rng)?;
                let z = pick_outcome(n, &model.forward_ops(), 0, &[], &rho, rng)?;
                let check = check_prop1(&model, &rho, &z)?;
                Ok(CheckRecord { prop, n, n_dirty, params: format!("L={layers}"), p, seed, check })
            } else {
                let (l1, l2) = (rng.random_range(0..=n), rng.random_range(0..=n));
                let first = LadderModel::new(n, n_dirty, l1, p)?;
                let second = LadderModel::new(n, n_dirty, l2, p)?;
                let k = rng.random_range(1..=3);
                let y = TrainableUnitary::random(n, k, rng)?;
                let rho = random_input(n, true, rng)?;
                let mut ops = first.adjoint_ops();
                ops.extend(y.ops()?);
                ops.extend(second.forward_ops());
                let z = pick_outcome(n, &ops, k, &y.theta, &rho, rng)?;
                let check = check_prop3(&first, &second, &y, &rho, &z)?;
                Ok(CheckRecord { prop, n, n_dirty, params: format!("L1={l1};L2={l2};K={k}"), p, seed, check })
            }
        }
        2 | 4 => {
            let n = rng.random_range(2..=RANDOM_CHECK_MAX_QUBITS);
            let n_a = rng.random_range(1..n);
            let n_b = n - n_a;
            let block = |rng: &mut crate::random::SimRng, with_w: bool| {
                let m = rng.random_range(1..=n_a.min(n_b));
                let (l_u, l_v) = (rng.random_range(0..=4), rng.random_range(0..=4));
                EntangledModel::random(n_a, n_b, m, l_u, l_v, random_side(rng), p, with_w, rng)
            };
            let dirty = |b: &EntangledModel| match b.noisy {
                NoisySide::A => n_a,
                NoisySide::B => n_b,
                NoisySide::Both => n,
            };
            let describe = |b: &EntangledModel| format!("LU={};LV={};m={};noisy={}", b.l_u(), b.l_v(), b.m, b.noisy);
            if prop == 2 {
                let model = block(rng, true)?;
                let rho = random_input(n, false, rng)?;
                let mut ops = model.w_ops();
                ops.extend(model.t_ops());
                ops.extend(model.disentangle_ops());
                let z = pick_outcome(n, &ops, 0, &[], &rho, rng)?;
                let check = check_prop2(&model, &rho, &z)?;
                Ok(CheckRecord { prop, n, n_dirty: dirty(&model), params: format!("nA={n_a};{}", describe(&model)), p, seed, check })
            } else {
                let first = block(rng, false)?;
                let second = block(rng, false)?;
                let k = rng.random_range(1..=3);
                let y = TrainableUnitary::random(n, k, rng)?;
                let rho = random_input(n, true, rng)?;
                let mut ops = first.entangle_ops();
                ops.extend(first.t_ops());
                ops.extend(y.ops()?);
                ops.extend(second.t_ops());
                ops.extend(second.disentangle_ops());
                let z = pick_outcome(n, &ops, k, &y.theta, &rho, rng)?;
                let check = check_prop4(&first, &second, &y, &rho, &z)?;
                Ok(CheckRecord {
                    prop,
                    n,
                    n_dirty: dirty(&first).max(dirty(&second)),
                    params: format!("nA={n_a};K={k};first:{};second:{}", describe(&first), describe(&second)),
                    p,
                    seed,
                    check,
                })
            }
        }
        _ => Err(Error::InvalidTarget(format!("proposition {prop} (expected 1-4)"))),
    }
}

/// `trials` random checks with per-trial seeds derived from `seed`.
pub fn random_checks(prop: u8, trials: usize, seed: u64) -> Result<Vec<CheckRecord>> {
    (0..trials)
        .map(|i| random_check(prop, mix_seed(seed, &[u64::from(prop), i as u64])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ladder::construction_string;

    #[test]
    fn bell_mapping_holds() {
        assert!(check_bell_mapping());
    }

    #[test]
    fn prop1_example() {
        let model = LadderModel::new(4, 1, 4, 0.1).unwrap();
        let rho = DensityMatrix::zero_state(4).unwrap();
        for z in [[false; 4], [true, false, true, false]] {
            let c = check_prop1(&model, &rho, &z).unwrap();
            assert!((c.rhs - 0.9).abs() < 1e-15);
            assert!(c.passed);
        }
    }

    #[test]
    fn prop1_counterexample_fails() {
        // Γ(4, 2, 2) = 1 but the string on qubits 2,3 never reaches the dirty block.
        let model = LadderModel::new(4, 2, 2, 1.0).unwrap();
        let rho = DensityMatrix::zero_state(4).unwrap();
        let c = check_prop1(&model, &rho, &[false; 4]).unwrap();
        assert_eq!(c.rhs, 0.0);
        assert!((c.lhs - 1.0 / 16.0).abs() < 1e-12);
        assert!(!c.passed);
    }

    #[test]
    fn ladder_adjoint_is_adjoint() {
        let model = LadderModel::new(3, 2, 3, 0.3).unwrap();
        let mut rng = rng_from_seed(1);
        let a = random_density_matrix(3, 2, &mut rng).unwrap();
        let b = random_density_matrix(3, 3, &mut rng).unwrap();
        let fwd = Program::new(3, 0, model.forward_ops()).unwrap();
        let adj = Program::new(3, 0, model.adjoint_ops()).unwrap();
        let x = fwd.expectation(&[], a.as_operator(), b.as_operator()).unwrap();
        let y = adj.expectation(&[], b.as_operator(), a.as_operator()).unwrap();
        assert!((x - y).abs() < 1e-12);
    }

    #[test]
    fn construction_string_is_tight() {
        for n in [4usize, 8] {
            let s = construction_string(n).unwrap();
            for layers in [0, 1, n - 1, n, 2 * n + 3] {
                let model = LadderModel::new(n, 1, layers, 0.2).unwrap();
                let amp = heisenberg_amplitude(&model, &s).unwrap();
                let expect = 0.8f64.powi((layers / n) as i32);
                assert!((amp - expect).abs() < 1e-10, "n={n} L={layers}: {amp} vs {expect}");
            }
        }
    }

    #[test]
    fn prop2_exponents() {
        let mut rng = rng_from_seed(2);
        let m = EntangledModel::random(2, 2, 1, 3, 5, NoisySide::A, 0.1, true, &mut rng).unwrap();
        assert_eq!(m.l_t(), 3);
        let m = EntangledModel::random(2, 2, 1, 3, 5, NoisySide::Both, 0.1, true, &mut rng).unwrap();
        assert_eq!(m.l_t(), 8);
    }

    #[test]
    fn prop2_noiseless_rhs_is_root_purity() {
        let mut rng = rng_from_seed(4);
        let m = EntangledModel::random(2, 1, 1, 2, 2, NoisySide::B, 0.0, true, &mut rng).unwrap();
        let rho = random_density_matrix(3, 2, &mut rng).unwrap();
        let c = check_prop2(&m, &rho, &[false, true, false]).unwrap();
        assert!((c.rhs - rho.purity().sqrt()).abs() < 1e-12);
        assert!(c.passed);
    }

    #[test]
    fn prop3_full_noise_kills_gradient() {
        let mut rng = rng_from_seed(9);
        let a = LadderModel::new(4, 4, 2, 1.0).unwrap();
        let y = TrainableUnitary::random(4, 2, &mut rng).unwrap();
        let rho = DensityMatrix::zero_state(4).unwrap();
        let c = check_prop3(&a, &a, &y, &rho, &[false; 4]).unwrap();
        assert_eq!(c.rhs, 0.0);
        assert!(c.lhs.abs() < 1e-10);
    }

    #[test]
    fn rescaling_examples() {
        let r = check_rescaling_identity(8, 2, 16, 0.0).unwrap();
        assert_eq!((r.clean_dirty, r.rescaled), (1.0, 1.0));
        let r = check_rescaling_identity(8, 2, 16, 0.01).unwrap();
        assert!(r.within_bound);
        assert!(check_rescaling_identity(8, 2, 16, 0.1).is_err());
    }

    #[test]
    fn random_checks_are_reproducible() {
        for prop in 1..=4 {
            let a = random_check(prop, 42).unwrap();
            let b = random_check(prop, 42).unwrap();
            assert_eq!(a, b);
        }
        assert!(random_check(5, 0).is_err());
    }
}
