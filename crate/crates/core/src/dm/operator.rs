use std::ops::{Add, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub type C64 = Complex64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Qubit count above which dense operators are refused.
pub const DEFAULT_MAX_QUBITS: usize = 10;

#[inline]
fn parity_sign(k: usize, z: usize) -> f64 {
    if (k & z).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

/// Dense `2^n × 2^n` complex matrix acting on `n` qubits, stored row-major.
///
/// Basis index bit `q` is the state of qubit `q` (little-endian), so a
/// two-qubit local matrix on `(q1, q2)` is indexed by `2·b(q1) + b(q2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    n: usize,
    dim: usize,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(n: usize) -> Result<Self> {
        Self::zeros_with_limit(n, DEFAULT_MAX_QUBITS)
    }

    pub fn zeros_with_limit(n: usize, limit: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("operators need at least one qubit".into()));
        }
        if n > limit {
            return Err(Error::ResourceLimit { what: "qubit count", value: n, limit });
        }
        let dim = 1usize << n;
        Ok(Self { n, dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut op = Self::zeros(n)?;
        for i in 0..op.dim {
            op.data[i * op.dim + i] = ONE;
        }
        Ok(op)
    }

    pub fn from_row_major(n: usize, data: Vec<C64>) -> Result<Self> {
        let mut op = Self::zeros(n)?;
        if data.len() != op.data.len() {
            return Err(Error::InvalidSize(format!(
                "expected {} entries for {n} qubits, got {}",
                op.data.len(),
                data.len()
            )));
        }
        op.data = data;
        Ok(op)
    }

    /// Dense matrix of a Pauli string (including its phase).
    pub fn pauli(s: &PauliString) -> Result<Self> {
        let mut op = Self::zeros(s.len())?;
        let x = s.x_mask() as usize;
        let z = s.z_mask() as usize;
        let ph = i_pow(s.matrix_phase());
        for c in 0..op.dim {
            op.data[(c ^ x) * op.dim + c] = ph * parity_sign(c, z);
        }
        Ok(op)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn data(&self) -> &[C64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `Tr[self · other]`.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        debug_assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut acc = ZERO;
        for r in 0..d {
            let row = &self.data[r * d..(r + 1) * d];
            for (c, &a) in row.iter().enumerate() {
                acc += a * other.data[c * d + r];
            }
        }
        acc
    }

    /// `Tr[self · σ]` without forming σ.
    pub fn trace_with_pauli(&self, s: &PauliString) -> C64 {
        debug_assert_eq!(s.len(), self.n);
        let x = s.x_mask() as usize;
        let z = s.z_mask() as usize;
        let d = self.dim;
        let mut acc = ZERO;
        for c in 0..d {
            acc += self.data[c * d + (c ^ x)] * parity_sign(c, z);
        }
        acc * i_pow(s.matrix_phase())
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = self.clone();
        for r in 0..d {
            for c in 0..d {
                out.data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Operator) -> Self {
        let d = self.dim;
        let mut out = Self { n: self.n, dim: d, data: vec![ZERO; d * d] };
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    out.data[r * d + c] += a * other.data[k * d + c];
                }
            }
        }
        out
    }

    pub fn scale(&mut self, s: C64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// Largest `|A_rc − conj(A_cr)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.data[r * d + c] - self.data[c * d + r].conj()).norm());
            }
        }
        worst
    }

    /// Schatten 2-norm (Frobenius).
    pub fn norm2(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Schatten ∞-norm (largest singular value).
    pub fn norm_inf(&self) -> f64 {
        self.to_nalgebra()
            .singular_values()
            .iter()
            .fold(0.0, |m, &v| m.max(v))
    }

    pub fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    pub fn from_nalgebra(n: usize, m: &DMatrix<C64>) -> Result<Self> {
        let mut op = Self::zeros(n)?;
        if m.nrows() != op.dim || m.ncols() != op.dim {
            return Err(Error::InvalidSize(format!(
                "{}x{} matrix does not act on {n} qubits",
                m.nrows(),
                m.ncols()
            )));
        }
        for r in 0..op.dim {
            for c in 0..op.dim {
                op.data[r * op.dim + c] = m[(r, c)];
            }
        }
        Ok(op)
    }

    /// Eigenvalues of a Hermitian operator (ascending).
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub(crate) fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::InvalidTarget(format!("qubit {q} on a {}-qubit register", self.n)));
        }
        Ok(())
    }

    pub(crate) fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::InvalidTarget(format!("repeated qubit {a}")));
        }
        Ok(())
    }

    /// `A → U A U†` for a single-qubit `U`.
    pub fn conjugate_1q(&mut self, q: usize, u: &[[C64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let d = self.dim;
        let m = 1usize << q;
        for hi in (0..d).step_by(2 * m) {
            for r0 in hi..hi + m {
                let r1 = r0 | m;
                for c in 0..d {
                    let a = self.data[r0 * d + c];
                    let b = self.data[r1 * d + c];
                    self.data[r0 * d + c] = u[0][0] * a + u[0][1] * b;
                    self.data[r1 * d + c] = u[1][0] * a + u[1][1] * b;
                }
            }
        }
        let uc = [[u[0][0].conj(), u[0][1].conj()], [u[1][0].conj(), u[1][1].conj()]];
        for row in self.data.chunks_exact_mut(d) {
            for hi in (0..d).step_by(2 * m) {
                for c0 in hi..hi + m {
                    let c1 = c0 | m;
                    let a = row[c0];
                    let b = row[c1];
                    row[c0] = a * uc[0][0] + b * uc[0][1];
                    row[c1] = a * uc[1][0] + b * uc[1][1];
                }
            }
        }
        Ok(())
    }

    /// `A → U A U†` for a two-qubit `U` on `(q1, q2)`.
    pub fn conjugate_2q(&mut self, q1: usize, q2: usize, u: &[[C64; 4]; 4]) -> Result<()> {
        self.check_pair(q1, q2)?;
        let d = self.dim;
        let m1 = 1usize << q1;
        let m2 = 1usize << q2;
        let both = m1 | m2;
        let bases: Vec<usize> = (0..d).filter(|i| i & both == 0).collect();
        let local = |b: usize| [b, b | m2, b | m1, b | m1 | m2];
        for &b in &bases {
            let idx = local(b);
            for c in 0..d {
                let v = idx.map(|r| self.data[r * d + c]);
                for (l, &r) in idx.iter().enumerate() {
                    self.data[r * d + c] =
                        u[l][0] * v[0] + u[l][1] * v[1] + u[l][2] * v[2] + u[l][3] * v[3];
                }
            }
        }
        let mut uc = [[ZERO; 4]; 4];
        for (l, row) in uc.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = u[l][k].conj();
            }
        }
        for row in self.data.chunks_exact_mut(d) {
            for &b in &bases {
                let idx = local(b);
                let v = idx.map(|c| row[c]);
                for (l, &c) in idx.iter().enumerate() {
                    row[c] = v[0] * uc[l][0] + v[1] * uc[l][1] + v[2] * uc[l][2] + v[3] * uc[l][3];
                }
            }
        }
        Ok(())
    }

    fn check_pauli(&self, s: &PauliString) -> Result<()> {
        if s.len() != self.n {
            return Err(Error::InvalidTarget(format!(
                "{}-qubit Pauli string on a {}-qubit operator",
                s.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// `A → σ A σ†`.
    pub fn conjugate_pauli(&mut self, s: &PauliString) -> Result<()> {
        self.check_pauli(s)?;
        self.pauli_mix(s, 0.0, 1.0);
        Ok(())
    }

    /// `A → (1 − p) A + p σ A σ†`.
    pub fn pauli_channel(&mut self, s: &PauliString, p: f64) -> Result<()> {
        self.check_pauli(s)?;
        crate::error::check_probability(p)?;
        self.pauli_mix(s, 1.0 - p, p);
        Ok(())
    }

    fn pauli_mix(&mut self, s: &PauliString, keep: f64, flip: f64) {
        let x = s.x_mask() as usize;
        let z = s.z_mask() as usize;
        let d = self.dim;
        if x == 0 {
            for r in 0..d {
                for c in 0..d {
                    let sign = parity_sign(r, z) * parity_sign(c, z);
                    self.data[r * d + c] *= keep + flip * sign;
                }
            }
            return;
        }
        let low = x & x.wrapping_neg();
        for r in (0..d).filter(|r| r & low == 0) {
            let rx = r ^ x;
            for c in 0..d {
                let cx = c ^ x;
                let a = self.data[r * d + c];
                let b = self.data[rx * d + cx];
                let sa = parity_sign(rx, z) * parity_sign(cx, z);
                let sb = parity_sign(r, z) * parity_sign(c, z);
                self.data[r * d + c] = a * keep + b * (flip * sa);
                self.data[rx * d + cx] = b * keep + a * (flip * sb);
            }
        }
    }

    /// `A → e^{−iθσ} A e^{iθσ}` for a Hermitian Pauli string σ.
    pub fn pauli_rotation(&mut self, s: &PauliString, theta: f64) -> Result<()> {
        self.check_pauli(s)?;
        if !s.is_hermitian() {
            return Err(Error::InvalidTarget(format!("rotation generator {s} is not Hermitian")));
        }
        let x = s.x_mask() as usize;
        let z = s.z_mask() as usize;
        let ph = i_pow(s.matrix_phase());
        let (sn, cs) = theta.sin_cos();
        let d = self.dim;
        // coefficient of ⟨k ⊕ x|σ|k⟩
        let coeff = |k: usize| ph * parity_sign(k, z);
        let cc = C64::new(cs, 0.0);
        let mis = C64::new(0.0, -sn);
        let pis = C64::new(0.0, sn);
        if x == 0 {
            let left: Vec<C64> = (0..d).map(|r| cc + mis * coeff(r)).collect();
            let right: Vec<C64> = (0..d).map(|c| cc + pis * coeff(c)).collect();
            for r in 0..d {
                for c in 0..d {
                    self.data[r * d + c] *= left[r] * right[c];
                }
            }
            return Ok(());
        }
        let low = x & x.wrapping_neg();
        // left multiply by cI − i s σ: (σA)[r] = coeff(r ⊕ x) A[r ⊕ x]
        for r in (0..d).filter(|r| r & low == 0) {
            let rx = r ^ x;
            let kr = mis * coeff(rx);
            let krx = mis * coeff(r);
            for c in 0..d {
                let a = self.data[r * d + c];
                let b = self.data[rx * d + c];
                self.data[r * d + c] = cc * a + kr * b;
                self.data[rx * d + c] = cc * b + krx * a;
            }
        }
        // right multiply by cI + i s σ: (Aσ)[·][c] = A[·][c ⊕ x] coeff(c)
        let kc: Vec<C64> = (0..d).map(|c| pis * coeff(c)).collect();
        for row in self.data.chunks_exact_mut(d) {
            for c in (0..d).filter(|c| c & low == 0) {
                let cx = c ^ x;
                let a = row[c];
                let b = row[cx];
                row[c] = cc * a + kc[c] * b;
                row[cx] = cc * b + kc[cx] * a;
            }
        }
        Ok(())
    }

    /// Single-qubit depolarizing channel `(1−p)A + (p/3)(XAX + YAY + ZAZ)`.
    pub fn depolarize(&mut self, q: usize, p: f64) -> Result<()> {
        self.check_qubit(q)?;
        crate::error::check_probability(p)?;
        let lambda = 4.0 * p / 3.0;
        let keep = 1.0 - lambda / 2.0;
        let swap = lambda / 2.0;
        let off = 1.0 - lambda;
        let d = self.dim;
        let m = 1usize << q;
        for hi in (0..d).step_by(2 * m) {
            for r0 in hi..hi + m {
                let r1 = r0 | m;
                for hc in (0..d).step_by(2 * m) {
                    for c0 in hc..hc + m {
                        let c1 = c0 | m;
                        let a = self.data[r0 * d + c0];
                        let dd = self.data[r1 * d + c1];
                        self.data[r0 * d + c0] = a * keep + dd * swap;
                        self.data[r1 * d + c1] = dd * keep + a * swap;
                        self.data[r0 * d + c1] *= off;
                        self.data[r1 * d + c0] *= off;
                    }
                }
            }
        }
        Ok(())
    }

    /// `Σ_k K_k A K_k†` for local Kraus operators on `qubits` (1 or 2 qubits,
    /// same local ordering as [`Operator::conjugate_2q`]). Slow reference path.
    pub fn apply_kraus(&mut self, qubits: &[usize], kraus: &[Vec<C64>]) -> Result<()> {
        let mut acc = Self { n: self.n, dim: self.dim, data: vec![ZERO; self.data.len()] };
        for k in kraus {
            let mut term = self.clone();
            match qubits {
                [q] => {
                    if k.len() != 4 {
                        return Err(Error::InvalidSize("single-qubit Kraus operator must be 2x2".into()));
                    }
                    term.conjugate_1q(*q, &[[k[0], k[1]], [k[2], k[3]]])?;
                }
                [a, b] => {
                    if k.len() != 16 {
                        return Err(Error::InvalidSize("two-qubit Kraus operator must be 4x4".into()));
                    }
                    let mut u = [[ZERO; 4]; 4];
                    for (l, row) in u.iter_mut().enumerate() {
                        row.copy_from_slice(&k[4 * l..4 * l + 4]);
                    }
                    term.conjugate_2q(*a, *b, &u)?;
                }
                _ => return Err(Error::InvalidTarget("Kraus maps act on 1 or 2 qubits".into())),
            }
            acc = acc + term;
        }
        *self = acc;
        Ok(())
    }
}

impl Add for Operator {
    type Output = Operator;

    fn add(mut self, rhs: Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter_mut().zip(rhs.data).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Operator {
    type Output = Operator;

    fn sub(mut self, rhs: Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        self.data.iter_mut().zip(rhs.data).for_each(|(a, b)| *a -= b);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Operator, b: &Operator, tol: f64) -> bool {
        (a.clone() - b.clone()).data.iter().all(|v| v.norm() < tol)
    }

    fn kron_pauli(s: &str) -> Operator {
        Operator::pauli(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn pauli_matrices() {
        let y = kron_pauli("Y");
        assert_eq!(y.get(0, 1), -I);
        assert_eq!(y.get(1, 0), I);
        let zi = kron_pauli("ZI");
        // qubit 0 is bit 0 of the index
        assert_eq!(zi.get(1, 1), -ONE);
        assert_eq!(zi.get(2, 2), ONE);
    }

    #[test]
    fn pauli_mix_matches_explicit_product() {
        let mut a = Operator::zeros(3).unwrap();
        for (i, v) in a.data.iter_mut().enumerate() {
            *v = C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos());
        }
        for s in ["XYZ", "IZY", "ZZI", "YII"] {
            let sigma = kron_pauli(s);
            let expect = sigma.matmul(&a).matmul(&sigma.adjoint());
            let mut got = a.clone();
            got.conjugate_pauli(&s.parse().unwrap()).unwrap();
            assert!(close(&got, &expect, 1e-12), "{s}");
        }
    }

    #[test]
    fn pauli_rotation_matches_dense_exponential() {
        let mut a = Operator::zeros(2).unwrap();
        for (i, v) in a.data.iter_mut().enumerate() {
            *v = C64::new((i as f64 * 0.7).cos(), (i as f64 * 0.3).sin());
        }
        let theta: f64 = 0.4123;
        for s in ["XX", "ZI", "-YZ", "IY"] {
            let p: PauliString = s.parse().unwrap();
            let sigma = Operator::pauli(&p).unwrap();
            let mut u = Operator::identity(2).unwrap();
            u.scale(C64::new(theta.cos(), 0.0));
            let mut s_part = sigma.clone();
            s_part.scale(C64::new(0.0, -theta.sin()));
            let u = u + s_part;
            let expect = u.matmul(&a).matmul(&u.adjoint());
            let mut got = a.clone();
            got.pauli_rotation(&p, theta).unwrap();
            assert!(close(&got, &expect, 1e-12), "{s}");
        }
    }

    #[test]
    fn trace_with_pauli_matches_dense() {
        let mut a = Operator::zeros(3).unwrap();
        for (i, v) in a.data.iter_mut().enumerate() {
            *v = C64::new((i as f64).sqrt(), -(i as f64) * 0.01);
        }
        for s in ["XYZ", "-iZZX", "III"] {
            let p: PauliString = s.parse().unwrap();
            let dense = a.trace_product(&Operator::pauli(&p).unwrap());
            assert!((a.trace_with_pauli(&p) - dense).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_targets() {
        let mut a = Operator::identity(2).unwrap();
        let h = [[ONE, ONE], [ONE, -ONE]];
        assert!(matches!(a.conjugate_1q(2, &h), Err(Error::InvalidTarget(_))));
        let id4 = [[ONE, ZERO, ZERO, ZERO], [ZERO, ONE, ZERO, ZERO], [ZERO, ZERO, ONE, ZERO], [ZERO, ZERO, ZERO, ONE]];
        assert!(matches!(a.conjugate_2q(1, 1, &id4), Err(Error::InvalidTarget(_))));
    }

    #[test]
    fn refuses_oversized_registers() {
        assert!(matches!(Operator::zeros(11), Err(Error::ResourceLimit { .. })));
    }
}
