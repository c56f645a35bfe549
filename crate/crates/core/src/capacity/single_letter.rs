//! Multi-start maximization of the single-letter channel quantities: the
//! Holevo information, the entanglement-assisted mutual information and the
//! coherent information.
//!
//! Every reported value is re-evaluated from its witness through the exact
//! entropy pipeline, so it is an achievable (lower-bound) value of the
//! quantity being maximized.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::ensemble::Ensemble;
use super::{classical_region_point, state_capacities};
use crate::entropy::{matrix_entropy, subsystem_entropy};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DimList, ZERO};
use crate::objects::{apply_channel_unchecked, channel_tensor, KrausChannel, PureState};
use crate::optim::{multistart_maximize, OptimizerConfig, Optimum};

/// Simplex step used for every capacity search.
const STEP: f64 = 0.5;

/// Convergence bookkeeping of a capacity search. Non-convergence is
/// reported here rather than as an error.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimStatus {
    pub converged: bool,
    pub starts: usize,
    pub starts_converged: usize,
    pub evaluations: usize,
}

impl From<&Optimum> for OptimStatus {
    fn from(o: &Optimum) -> Self {
        Self { converged: o.converged, starts: o.starts, starts_converged: o.starts_converged, evaluations: o.evaluations }
    }
}

#[derive(Clone, Debug)]
pub struct HolevoEstimate {
    /// Holevo information of the witness per channel use, `χ(N^{⊗b})/b`.
    pub value: f64,
    pub block: usize,
    /// Pure-state ensemble on the `b`-fold input.
    pub witness: Ensemble,
    pub status: OptimStatus,
}

#[derive(Clone, Debug)]
pub struct StateEstimate {
    pub value: f64,
    /// Pure input on `A1 ⊗ A`.
    pub witness: PureState,
    /// Entropy of the witness's `A1` marginal.
    pub entanglement_entropy: f64,
    pub status: OptimStatus,
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Unit vector from interleaved real/imaginary parts; `None` at the origin.
fn unit_vector(x: &[f64]) -> Option<Vec<Complex64>> {
    let v: Vec<Complex64> = x.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    (n > 1e-150 && n.is_finite()).then(|| v.into_iter().map(|z| z / n).collect())
}

fn gaussian_vec(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

struct LetterLayout {
    letters: usize,
    dim: usize,
}

impl LetterLayout {
    fn len(&self) -> usize {
        self.letters * (1 + 2 * self.dim)
    }

    fn decode(&self, x: &[f64]) -> Option<(Vec<f64>, Vec<Vec<Complex64>>)> {
        let probs = softmax(&x[..self.letters]);
        let states = x[self.letters..].chunks_exact(2 * self.dim).map(unit_vector).collect::<Option<Vec<_>>>()?;
        Some((probs, states))
    }

    fn encode(&self, probs: &[f64], states: &[Vec<Complex64>]) -> Vec<f64> {
        let mut x: Vec<f64> = probs.iter().map(|p| p.max(1e-12).ln()).collect();
        for s in states {
            for z in s {
                x.push(z.re);
                x.push(z.im);
            }
        }
        x
    }
}

/// `I(X;B)` of a pure-state ensemble, evaluated letter by letter.
fn holevo_quantity(channel: &KrausChannel, probs: &[f64], states: &[Vec<Complex64>]) -> f64 {
    let d = channel.output_dim();
    let mut avg = ComplexMatrix::zeros(d, d);
    let mut cond = 0.0;
    for (p, psi) in probs.iter().zip(states) {
        let out = channel.apply_pure(psi);
        cond += p * matrix_entropy(&out);
        avg = &avg + &out.scale_real(*p);
    }
    matrix_entropy(&avg) - cond
}

/// Holevo information `χ(N^{⊗b})/b`, maximized over ensembles of `dim²`
/// pure states on the `b`-fold input.
///
/// For `block = 2` the single-use optimum is computed first and its product
/// ensemble seeds one extra start.
pub fn holevo_chi(channel: &KrausChannel, cfg: &OptimizerConfig, block: usize) -> Result<HolevoEstimate> {
    cfg.validate()?;
    let blocked = channel_tensor(channel, block)?;
    let dim = blocked.input_dim();
    let layout = LetterLayout { letters: dim * dim, dim };

    let mut warm = Vec::new();
    if block > 1 {
        let single = holevo_chi(channel, cfg, 1)?;
        warm.push(product_warm_start(&single.witness, block, &layout)?);
    }

    let objective = |x: &[f64]| match layout.decode(x) {
        Some((p, s)) => holevo_quantity(&blocked, &p, &s),
        None => f64::NEG_INFINITY,
    };
    let init = |rng: &mut ChaCha8Rng| gaussian_vec(layout.len(), rng);
    let opt = multistart_maximize(objective, init, &warm, STEP, cfg)?;

    let (probs, states) = layout.decode(&opt.x).ok_or_else(|| Error::Domain("optimizer returned a degenerate ensemble".into()))?;
    let letter_dims = DimList::single(dim)?;
    let letters = states.into_iter().map(|s| PureState::normalized(s, letter_dims.clone())).collect::<Result<Vec<_>>>()?;
    let total: f64 = probs.iter().sum();
    let witness = Ensemble::pure_letters(probs.iter().map(|p| p / total).collect(), &letters)?;
    let exact = classical_region_point(&blocked, &witness)?.r;
    Ok(HolevoEstimate { value: exact / block as f64, block, witness, status: OptimStatus::from(&opt) })
}

/// Product ensemble `{p(x₁)p(x₂), ψ_{x₁}⊗ψ_{x₂}}` of a single-use witness.
fn product_warm_start(single: &Ensemble, block: usize, layout: &LetterLayout) -> Result<Vec<f64>> {
    let d = single.input_dim();
    let mut letters: Vec<(f64, Vec<Complex64>)> = vec![(1.0, vec![Complex64::new(1.0, 0.0)])];
    let single_states: Vec<Vec<Complex64>> = single
        .encoders()
        .iter()
        .map(|enc| {
            // replacement encoder: its output on |0⟩ is the letter state
            let out = enc.apply_pure(&basis_vec(d, 0));
            let (vals, vecs) = linalg::herm_eig_unchecked(&out);
            debug_assert!(vals[0] > 1.0 - 1e-9);
            (0..d).map(|r| vecs[(r, 0)]).collect()
        })
        .collect();
    for _ in 0..block {
        let mut next = Vec::new();
        for (p, v) in &letters {
            for (q, s) in single.probs().iter().zip(&single_states) {
                next.push((p * q, linalg::kron_vec(v, s)));
            }
        }
        letters = next;
    }
    if letters.len() != layout.letters {
        return Err(Error::Shape(format!("product ensemble has {} letters, expected {}", letters.len(), layout.letters)));
    }
    let (probs, states): (Vec<f64>, Vec<Vec<Complex64>>) = letters.into_iter().unzip();
    Ok(layout.encode(&probs, &states))
}

fn basis_vec(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; d];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// Which functional of `ω_{A1B} = (id⊗N)(φ_{A1A})` to maximize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StateObjective {
    MutualInfo,
    CoherentInfo,
}

fn maximize_over_inputs(channel: &KrausChannel, cfg: &OptimizerConfig, which: StateObjective) -> Result<StateEstimate> {
    cfg.validate()?;
    let da = channel.input_dim();
    let dims = [da, da];
    let objective = |x: &[f64]| {
        let Some(psi) = unit_vector(x) else { return f64::NEG_INFINITY };
        let rho = ComplexMatrix::outer(&psi, &psi);
        let omega = apply_channel_unchecked(channel, &rho, &dims, 1);
        let out_dims = [da, channel.output_dim()];
        let h_ab = matrix_entropy(&omega);
        let h_b = matrix_entropy(&linalg::partial_trace_unchecked(&omega, &out_dims, &[1]));
        match which {
            StateObjective::MutualInfo => {
                let h_a = matrix_entropy(&linalg::partial_trace_unchecked(&omega, &out_dims, &[0]));
                h_a + h_b - h_ab
            }
            StateObjective::CoherentInfo => h_b - h_ab,
        }
    };
    let init = |rng: &mut ChaCha8Rng| gaussian_vec(2 * da * da, rng);
    let opt = multistart_maximize(objective, init, &[], STEP, cfg)?;
    let psi = unit_vector(&opt.x).ok_or_else(|| Error::Domain("optimizer returned a zero input state".into()))?;
    let witness = PureState::normalized(psi, DimList::new(vec![da, da])?)?;
    let (mi, ci) = state_capacities(channel, &witness)?;
    let value = match which {
        StateObjective::MutualInfo => mi,
        StateObjective::CoherentInfo => ci.max(0.0),
    };
    let entanglement_entropy = subsystem_entropy(&witness.to_density(), &[0])?;
    Ok(StateEstimate { value, witness, entanglement_entropy, status: OptimStatus::from(&opt) })
}

/// Entanglement-assisted capacity `max I(A1;B)` over pure inputs with
/// `dim(A1) = dim(A)`.
pub fn ea_capacity(channel: &KrausChannel, cfg: &OptimizerConfig) -> Result<StateEstimate> {
    maximize_over_inputs(channel, cfg, StateObjective::MutualInfo)
}

/// `max I(A1⟩B)` over pure inputs, floored at zero.
pub fn coherent_capacity(channel: &KrausChannel, cfg: &OptimizerConfig) -> Result<StateEstimate> {
    maximize_over_inputs(channel, cfg, StateObjective::CoherentInfo)
}
