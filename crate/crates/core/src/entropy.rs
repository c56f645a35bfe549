//! Entropic quantities, all in bits.

use nalgebra::Cholesky;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DimList, ZERO};
use crate::objects::DensityOperator;
use crate::optim::{multistart_maximize, OptimizerConfig};

/// Eigenvalues below this are treated as exact zeros in entropy sums.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Groups of subsystem indices: `a`, `b` and an optional conditioning block `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Option<Vec<usize>>,
}

impl Partition {
    pub fn new(a: impl Into<Vec<usize>>, b: impl Into<Vec<usize>>) -> Self {
        Self { a: a.into(), b: b.into(), c: None }
    }

    pub fn conditional(a: impl Into<Vec<usize>>, b: impl Into<Vec<usize>>, c: impl Into<Vec<usize>>) -> Self {
        Self { a: a.into(), b: b.into(), c: Some(c.into()) }
    }

    /// The default bipartition of a two-subsystem state.
    pub fn bipartite() -> Self {
        Self::new([0], [1])
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        let blocks = [Some(&self.a), Some(&self.b), self.c.as_ref()];
        for block in blocks.into_iter().flatten() {
            for &i in block {
                if i >= n {
                    return Err(Error::Shape(format!("partition index {i} out of range for {n} subsystems")));
                }
                if seen[i] {
                    return Err(Error::Shape(format!("partition blocks overlap at subsystem {i}")));
                }
                seen[i] = true;
            }
        }
        Ok(())
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// `−Σ λ log₂ λ` over a spectrum, skipping values below [`EIGEN_FLOOR`].
pub(crate) fn spectrum_entropy(eigs: &[f64]) -> f64 {
    let h: f64 = eigs.iter().filter(|&&l| l > EIGEN_FLOOR).map(|&l| -l * l.log2()).sum();
    h.max(0.0)
}

/// Entropy of a Hermitian matrix known to be a state.
pub(crate) fn matrix_entropy(m: &ComplexMatrix) -> f64 {
    spectrum_entropy(&linalg::herm_eigvals_unchecked(m))
}

pub fn von_neumann(rho: &DensityOperator) -> f64 {
    matrix_entropy(rho.matrix())
}

/// Entropy of the reduced state on `set`; zero for the empty set.
pub fn subsystem_entropy(rho: &DensityOperator, set: &[usize]) -> Result<f64> {
    if set.is_empty() {
        return Ok(0.0);
    }
    if set.len() == rho.dims().len() {
        return Ok(von_neumann(rho));
    }
    Ok(von_neumann(&rho.partial_trace(set)?))
}

pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if p.is_empty() || p.iter().any(|&x| x.is_nan() || x < 0.0 || !x.is_finite()) {
        return Err(Error::Domain(format!("invalid probability vector {p:?}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum())
}

/// `H₂(t) = −t log t − (1−t) log(1−t)`.
pub fn binary_entropy(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        return 0.0;
    }
    -t * t.log2() - (1.0 - t) * (1.0 - t).log2()
}

/// `H(A|B) = H(AB) − H(B)`.
pub fn cond_entropy(rho: &DensityOperator, part: &Partition) -> Result<f64> {
    part.validate(rho.dims().len())?;
    Ok(subsystem_entropy(rho, &union(&part.a, &part.b))? - subsystem_entropy(rho, &part.b)?)
}

/// `I(A;B) = H(A) + H(B) − H(AB)`.
pub fn mutual_info(rho: &DensityOperator, part: &Partition) -> Result<f64> {
    part.validate(rho.dims().len())?;
    Ok(subsystem_entropy(rho, &part.a)? + subsystem_entropy(rho, &part.b)? - subsystem_entropy(rho, &union(&part.a, &part.b))?)
}

/// `I(A;B|C) = H(AC) + H(BC) − H(ABC) − H(C)`.
pub fn cond_mutual_info(rho: &DensityOperator, part: &Partition) -> Result<f64> {
    part.validate(rho.dims().len())?;
    let c = part.c.as_ref().ok_or_else(|| Error::Shape("conditional mutual information needs a conditioning block".into()))?;
    let ac = union(&part.a, c);
    let bc = union(&part.b, c);
    let abc = union(&ac, &part.b);
    Ok(subsystem_entropy(rho, &ac)? + subsystem_entropy(rho, &bc)? - subsystem_entropy(rho, &abc)? - subsystem_entropy(rho, c)?)
}

/// `I(A⟩B) = −H(A|B)`.
pub fn coherent_info(rho: &DensityOperator, part: &Partition) -> Result<f64> {
    Ok(-cond_entropy(rho, part)?)
}

/// How the reference state `σ_B` of the conditional min-entropy is chosen.
#[derive(Clone, Debug)]
pub enum SigmaChoice<'a> {
    Fixed(&'a DensityOperator),
    Optimize(OptimizerConfig),
}

impl SigmaChoice<'_> {
    /// Optimization with 16 restarts.
    pub fn optimize() -> Self {
        SigmaChoice::Optimize(OptimizerConfig { restarts: 16, ..Default::default() })
    }
}

#[derive(Clone, Debug)]
pub struct MinEntropy {
    pub value: f64,
    pub sigma: DensityOperator,
    pub converged: bool,
}

/// Conditional min-entropy of a bipartite `ρ_AB` (dims `[d_A, d_B]`).
///
/// With a fixed `σ_B` this is `−log₂ λ_max((1⊗σ^{-1/2}) ρ (1⊗σ^{-1/2}))`,
/// with the inverse taken on the support of `σ_B`. With `Optimize`, `σ_B` is
/// searched over and the best value found is returned; every candidate is a
/// valid lower bound on `H_min(A|B)`.
pub fn min_entropy_cond(rho: &DensityOperator, sigma: SigmaChoice<'_>) -> Result<MinEntropy> {
    let dims = rho.dims().as_slice();
    if dims.len() != 2 {
        return Err(Error::Shape(format!("min-entropy needs a bipartite state, got dims {dims:?}")));
    }
    let (da, db) = (dims[0], dims[1]);
    match sigma {
        SigmaChoice::Fixed(s) => {
            if s.dim() != db {
                return Err(Error::Shape(format!("sigma_B has dimension {}, expected {db}", s.dim())));
            }
            s.validate()?;
            let rho_b = rho.partial_trace(&[1])?;
            Ok(MinEntropy { value: min_entropy_fixed(rho, &rho_b, s.matrix(), da)?, sigma: s.clone(), converged: true })
        }
        SigmaChoice::Optimize(cfg) => {
            let rho_b = rho.partial_trace(&[1])?;
            let objective = |x: &[f64]| {
                let s = sigma_from_params(x, db);
                min_entropy_fixed(rho, &rho_b, &s, da).unwrap_or(f64::NEG_INFINITY)
            };
            let init = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> { (0..db * db).map(|_| StandardNormal.sample(rng)).collect() };
            let mut warm = vec![params_from_factor(&ComplexMatrix::identity(db))];
            if let Some(l) = cholesky_factor(rho_b.matrix()) {
                warm.push(params_from_factor(&l));
            }
            let opt = multistart_maximize(objective, init, &warm, 0.3, &cfg)?;
            let s = sigma_from_params(&opt.x, db);
            let sigma = DensityOperator::new(s, DimList::single(db)?)?;
            Ok(MinEntropy { value: opt.value, sigma, converged: opt.converged })
        }
    }
}

fn min_entropy_fixed(rho: &DensityOperator, rho_b: &DensityOperator, sigma: &ComplexMatrix, da: usize) -> Result<f64> {
    let (vals, vecs) = linalg::herm_eig_unchecked(sigma);
    let top = vals.first().copied().unwrap_or(0.0);
    let support = |v: f64| v > EIGEN_FLOOR * top.max(1.0);
    let inv_sqrt = linalg::spectral_map(&vals, &vecs, |v| if support(v) { 1.0 / v.sqrt() } else { 0.0 });
    let kernel = linalg::spectral_map(&vals, &vecs, |v| if support(v) { 0.0 } else { 1.0 });
    let leak = (&kernel * rho_b.matrix()).trace().re;
    if leak > 1e-10 {
        return Err(Error::Domain(format!("support of rho_B is not contained in support of sigma_B (weight {leak:.3e} outside)")));
    }
    let op = linalg::kron(&ComplexMatrix::identity(da), &inv_sqrt)?;
    let m = &(&op * rho.matrix()) * &op;
    let lam = linalg::herm_eigvals_unchecked(&m)[0];
    if lam <= 0.0 {
        return Err(Error::Domain("degenerate min-entropy operator".into()));
    }
    Ok(-lam.log2())
}

/// `σ = LL†/tr(LL†)` with `L` lower triangular; real diagonal entries come
/// first in `x`, followed by the real and imaginary parts of the strict lower
/// triangle in row order.
fn sigma_from_params(x: &[f64], d: usize) -> ComplexMatrix {
    let mut l = vec![ZERO; d * d];
    for i in 0..d {
        l[i * d + i] = Complex64::new(x[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in 0..i {
            l[i * d + j] = Complex64::new(x[k], x[k + 1]);
            k += 2;
        }
    }
    let l = ComplexMatrix::from_raw(d, d, l);
    let s = &l * &l.adjoint();
    let tr = s.trace().re;
    if tr > 0.0 {
        s.scale_real(1.0 / tr)
    } else {
        ComplexMatrix::identity(d).scale_real(1.0 / d as f64)
    }
}

fn params_from_factor(l: &ComplexMatrix) -> Vec<f64> {
    let d = l.rows();
    let mut x: Vec<f64> = (0..d).map(|i| l[(i, i)].re).collect();
    for i in 0..d {
        for j in 0..i {
            x.push(l[(i, j)].re);
            x.push(l[(i, j)].im);
        }
    }
    x
}

fn cholesky_factor(m: &ComplexMatrix) -> Option<ComplexMatrix> {
    let chol = Cholesky::new(m.to_nalgebra())?;
    Some(ComplexMatrix::from_nalgebra(&chol.l()))
}
