//! Rate-region formulas evaluated on concrete ensembles and ansätze, plus
//! the single-letter channel quantities that bound them.

mod ensemble;
mod region;
mod single_letter;

use rayon::prelude::*;

pub use ensemble::Ensemble;
pub use region::{pareto_frontier, time_division_region, uniform_grid, PointParams, RatePoint, RateRegion, TimeDivisionLine};
pub use single_letter::{coherent_capacity, ea_capacity, holevo_chi, HolevoEstimate, OptimStatus, StateEstimate};

use crate::entropy::{coherent_info, cond_entropy, cond_mutual_info, mutual_info, Partition};
use crate::error::{Error, Result};
use crate::objects::{apply_channel, depolarizing, KrausChannel, PureState};

/// `(I(X;B), I(A1;B|X))` of the classical-quantum state the ensemble
/// induces through `channel`.
pub fn classical_region_point(channel: &KrausChannel, ensemble: &Ensemble) -> Result<RatePoint> {
    let omega = ensemble.cq_state(channel)?;
    let r = mutual_info(&omega, &Partition::new([0], [2]))?;
    let r_prime = cond_mutual_info(&omega, &Partition::conditional([1], [2], [0]))?;
    Ok(RatePoint::new(r, r_prime, PointParams::None))
}

/// Classical region points of the superposition family over `betas`
/// through an arbitrary qubit channel.
pub fn superposition_sweep_channel(channel: &KrausChannel, betas: &[f64]) -> Result<RateRegion> {
    if betas.is_empty() {
        return Err(Error::InvalidArgument("beta grid is empty".into()));
    }
    let points = betas
        .par_iter()
        .map(|&beta| {
            let e = Ensemble::superposition(beta)?;
            let p = classical_region_point(channel, &e)?;
            Ok(RatePoint { params: PointParams::Beta(beta), ..p })
        })
        .collect::<Result<Vec<_>>>()?;
    pareto_frontier(&points)
}

/// Superposition sweep through the depolarizing channel.
pub fn superposition_sweep(eps: f64, betas: &[f64]) -> Result<RateRegion> {
    superposition_sweep_channel(&depolarizing(eps)?, betas)
}

/// `(I(A1;B), I(A1⟩B))` of `(id⊗N)(φ_{A1A})`.
pub(crate) fn state_capacities(channel: &KrausChannel, input: &PureState) -> Result<(f64, f64)> {
    let omega = apply_channel(channel, &input.to_density(), 1)?;
    let part = Partition::bipartite();
    Ok((mutual_info(&omega, &part)?, coherent_info(&omega, &part)?))
}

/// A pure state on `A1 ⊗ A2 ⊗ A`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumAnsatz {
    state: PureState,
}

impl QuantumAnsatz {
    pub fn new(state: PureState) -> Result<Self> {
        if state.dims().len() != 3 {
            return Err(Error::Shape(format!("quantum ansatz needs three subsystems A1, A2, A; got dims {:?}", state.dims().as_slice())));
        }
        Ok(Self { state })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn input_dim(&self) -> usize {
        self.state.dims().as_slice()[2]
    }
}

/// Corner point `(Q, Q′)` of the quantum region for one ansatz:
/// `Q = min(cap_q, cap_tot)` and `Q′ = cap_tot − Q`, where
/// `cap_q = max(0, min(I(A1⟩B), H(A1|A2)))` and `cap_tot = max(0, ½I(A2;B))`.
pub fn quantum_region_point(channel: &KrausChannel, ansatz: &QuantumAnsatz) -> Result<RatePoint> {
    if channel.input_dim() != ansatz.input_dim() {
        return Err(Error::Shape(format!(
            "channel takes dimension {}, ansatz A has dimension {}",
            channel.input_dim(),
            ansatz.input_dim()
        )));
    }
    let omega = apply_channel(channel, &ansatz.state.to_density(), 2)?;
    let ci = coherent_info(&omega, &Partition::new([0], [2]))?;
    let h_a1_a2 = cond_entropy(&omega, &Partition::new([0], [1]))?;
    let i_a2_b = mutual_info(&omega, &Partition::new([1], [2]))?;
    let cap_q = ci.min(h_a1_a2).max(0.0);
    let cap_tot = (0.5 * i_a2_b).max(0.0);
    let q = cap_q.min(cap_tot);
    Ok(RatePoint::new(q, cap_tot - q, PointParams::None))
}

/// Information bounds of the two-receiver region for one ensemble.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadcastBounds {
    /// `I(X;B2)`
    pub r0: f64,
    /// `I(A1;B1|X)`
    pub r1: f64,
    /// `I(XA1;B1)`
    pub r_sum: f64,
}

/// Bounds for a common message decoded at `B2` through `n2` and a private
/// message at the entanglement-holding receiver `B1` through `n1`.
pub fn broadcast_region_point(n1: &KrausChannel, n2: &KrausChannel, ensemble: &Ensemble) -> Result<BroadcastBounds> {
    let omega1 = ensemble.cq_state(n1)?;
    let omega2 = ensemble.cq_state(n2)?;
    let r0 = mutual_info(&omega2, &Partition::new([0], [2]))?.max(0.0);
    let r1 = cond_mutual_info(&omega1, &Partition::conditional([1], [2], [0]))?.max(0.0);
    let r_sum = mutual_info(&omega1, &Partition::new([0, 1], [2]))?.max(0.0);
    Ok(BroadcastBounds { r0, r1, r_sum })
}
