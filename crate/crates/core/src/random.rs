//! Seeded sampling of unitaries, states and parameters.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dm::{DensityMatrix, Operator, C64};
use crate::error::{Error, Result};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed `dim × dim` unitary (QR of a Ginibre matrix with the
/// phases of `R`'s diagonal divided out).
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<C64> {
    let qr = ginibre(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn haar_1q<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 2]; 2] {
    let u = haar_unitary(2, rng);
    [[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]]
}

pub fn haar_2q<R: Rng + ?Sized>(rng: &mut R) -> [[C64; 4]; 4] {
    let u = haar_unitary(4, rng);
    let mut m = [[C64::new(0.0, 0.0); 4]; 4];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, v) in row.iter_mut().enumerate() {
            *v = u[(r, c)];
        }
    }
    m
}

/// Random mixed state `GG†/Tr[GG†]` with `G` a `2^n × rank` Ginibre matrix.
pub fn random_density_matrix<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let dim = 1usize << n.min(usize::BITS as usize - 1);
    if rank == 0 || rank > dim {
        return Err(Error::InvalidSize(format!("rank {rank} must be in 1..={dim}")));
    }
    // size check before allocating
    Operator::zeros(n)?;
    let g = ginibre(dim, rank, rng);
    let mut m = &g * g.adjoint();
    let tr = m.trace();
    m /= tr;
    let mut op = Operator::from_nalgebra(n, &m)?;
    // symmetrize rounding noise
    let adj = op.adjoint();
    op = op + adj;
    op.scale(C64::new(0.5, 0.0));
    DensityMatrix::from_operator(op)
}

/// Derives a seed from a master seed and a list of keys (splitmix64 mixing),
/// so independent work items get uncorrelated streams.
pub fn mix_seed(master: u64, keys: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    keys.iter().fold(splitmix(master), |acc, &k| splitmix(acc ^ splitmix(k)))
}

/// `count` angles i.i.d. uniform on `[0, 2π)`.
pub fn random_angles<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(0.0..TAU)).collect()
}
