//! Random states, unitaries and channels for property tests and sweeps.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DimList, ZERO};
use crate::objects::{DensityOperator, KrausChannel, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_raw(rows, cols, (0..rows * cols).map(|_| gaussian(rng)).collect())
}

/// Haar-random pure state on `dims`.
pub fn haar_state<R: Rng + ?Sized>(dims: &DimList, rng: &mut R) -> Result<PureState> {
    let amps = (0..dims.total()).map(|_| gaussian(rng)).collect();
    PureState::normalized(amps, dims.clone())
}

/// Haar-random unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for c in 0..d {
        let mut v: Vec<Complex64> = (0..d).map(|r| g[(r, c)]).collect();
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= n);
        cols.push(v);
    }
    let mut data = vec![ZERO; d * d];
    for (c, col) in cols.iter().enumerate() {
        for (r, z) in col.iter().enumerate() {
            data[r * d + c] = *z;
        }
    }
    ComplexMatrix::from_raw(d, d, data)
}

/// Random mixed state `GG†/tr(GG†)` with `G` a `d × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(dims: &DimList, rank: usize, rng: &mut R) -> Result<DensityOperator> {
    let d = dims.total();
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale_real(1.0 / tr), dims.clone())
}

/// Random channel with `n_kraus` operators: `K_k = G_k S^{-1/2}` with
/// `S = Σ G_k†G_k`. Needs `n_kraus · output_dim ≥ input_dim` so that `S`
/// is invertible.
pub fn random_channel<R: Rng + ?Sized>(input_dim: usize, output_dim: usize, n_kraus: usize, rng: &mut R) -> Result<KrausChannel> {
    if n_kraus * output_dim < input_dim {
        return Err(Error::InvalidArgument(format!(
            "{n_kraus} Kraus operators of shape {output_dim}x{input_dim} cannot be trace preserving"
        )));
    }
    let gs: Vec<ComplexMatrix> = (0..n_kraus).map(|_| ginibre(output_dim, input_dim, rng)).collect();
    let mut s = ComplexMatrix::zeros(input_dim, input_dim);
    for g in &gs {
        s = &s + &(&g.adjoint() * g);
    }
    let (vals, vecs) = linalg::herm_eig(&s)?;
    let inv_sqrt = linalg::spectral_map(&vals, &vecs, |v| 1.0 / v.sqrt());
    KrausChannel::new(gs.iter().map(|g| g * &inv_sqrt).collect())
}
