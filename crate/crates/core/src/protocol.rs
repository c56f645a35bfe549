//! Monte-Carlo simulation of the time-division code over a qubit channel:
//! basis signaling on `(1−λ)n` uses carries the guaranteed message, super-dense
//! coding on `λn` uses carries the excess message.
//!
//! Outcome probabilities come from exact Born-rule evaluation on the two-qubit
//! state of each position; only the sampling is random.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::objects::{apply_channel, depolarizing, heisenberg_weyl, maximally_entangled, DensityOperator, KrausChannel, PureState};

/// Dense-coding symbol `m'` carries the bits `(a, b) = (m' / 2, m' % 2)` and
/// is encoded as `Σ(a, b)` on Alice's half.
fn symbol_bits(m_prime: usize) -> (usize, usize) {
    (m_prime / 2, m_prime % 2)
}

/// `(Σ(a,b) ⊗ 1)|Φ⟩`.
fn bell_state(m_prime: usize) -> Result<PureState> {
    let (a, b) = symbol_bits(m_prime);
    maximally_entangled(2)?.apply_local(&heisenberg_weyl(2, a, b)?, 0)
}

fn check_symbol(m_prime: usize) -> Result<()> {
    if m_prime > 3 {
        return Err(Error::InvalidArgument(format!("dense-coding symbol {m_prime} outside 0..=3")));
    }
    Ok(())
}

/// Encoded pair after Alice's qubit passes through the channel.
fn received_pair(channel: &KrausChannel, m_prime: usize) -> Result<DensityOperator> {
    check_symbol(m_prime)?;
    apply_channel(channel, &bell_state(m_prime)?.to_density(), 0)
}

fn born(rho: &ComplexMatrix, effect: &PureState) -> f64 {
    let v = rho.apply_unchecked(effect.amplitudes());
    let p: f64 = effect.amplitudes().iter().zip(&v).map(|(e, w)| (e.conj() * w).re).sum();
    p.clamp(0.0, 1.0)
}

/// Bell-measurement outcome distribution for symbol `m_prime` when Bob holds
/// both qubits.
pub fn assisted_distribution(m_prime: usize, eps: f64) -> Result<[f64; 4]> {
    let rho = received_pair(&depolarizing(eps)?, m_prime)?;
    let mut p = [0.0; 4];
    for (j, pj) in p.iter_mut().enumerate() {
        *pj = born(rho.matrix(), &bell_state(j)?);
    }
    Ok(p)
}

/// Computational-basis outcome distribution of the received qubit alone.
pub fn unassisted_distribution(m_prime: usize, eps: f64) -> Result<[f64; 2]> {
    let received = received_pair(&depolarizing(eps)?, m_prime)?.partial_trace(&[0])?;
    Ok([born(received.matrix(), &PureState::basis(2, 0)?), born(received.matrix(), &PureState::basis(2, 1)?)])
}

/// Outcome distribution of a basis-signaled bit measured in the
/// computational basis.
pub fn basis_distribution(bit: usize, eps: f64) -> Result<[f64; 2]> {
    let sent = PureState::basis(2, bit)?.to_density();
    let out = depolarizing(eps)?.apply(&sent)?;
    Ok([born(out.matrix(), &PureState::basis(2, 0)?), born(out.matrix(), &PureState::basis(2, 1)?)])
}

/// Naive unassisted guess of a dense-coded symbol from a computational-basis
/// outcome `o`: the symbol `(a, b) = (o, 0)`.
pub fn naive_guess(outcome: usize) -> usize {
    2 * outcome
}

fn sample<const K: usize>(p: &[f64; K], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random::<f64>() * p.iter().sum::<f64>();
    let mut acc = 0.0;
    for (k, pk) in p.iter().enumerate() {
        acc += pk;
        if u < acc {
            return k;
        }
    }
    // u landed on the round-off tail; return the last outcome with mass
    p.iter().rposition(|&pk| pk > 0.0).unwrap_or(K - 1)
}

/// One super-dense coding round: encode, transmit Alice's qubit through the
/// depolarizing channel, and sample Bob's Bell-measurement outcome.
pub fn superdense_roundtrip(m_prime: usize, eps: f64, rng: &mut impl Rng) -> Result<usize> {
    Ok(sample(&assisted_distribution(m_prime, eps)?, rng))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub lambda: f64,
    pub trials: usize,
    pub seed: u64,
    pub assisted: bool,
    pub channel_eps: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self { n: 8, lambda: 0.0, trials: 1000, seed: 0, assisted: true, channel_eps: 0.0 }
    }
}

impl SimConfig {
    /// Number of dense-coded positions, `λn`.
    pub fn dense_positions(&self) -> Result<usize> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::InvalidArgument("blocklength and trial count must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::InvalidArgument(format!("lambda {} outside [0, 1]", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.channel_eps) {
            return Err(Error::InvalidArgument(format!("channel eps {} outside [0, 1]", self.channel_eps)));
        }
        let k = self.lambda * self.n as f64;
        let rounded = k.round();
        if (k - rounded).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("lambda*n = {k} is not an integer")));
        }
        Ok(rounded as usize)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimReport {
    pub guaranteed_rate: f64,
    pub excess_rate: f64,
    /// Fraction of trials with the guaranteed message decoded wrongly.
    pub err_guaranteed: f64,
    /// Fraction of trials with the excess message decoded wrongly. Without
    /// assistance this uses the naive computational-basis guess.
    pub err_excess: f64,
    /// Fraction of dense-coded symbols decoded wrongly.
    pub excess_symbol_error: f64,
    pub trials: usize,
}

#[derive(Clone, Copy, Default)]
struct TrialCounts {
    guaranteed_errors: u64,
    excess_errors: u64,
    symbol_errors: u64,
}

impl std::ops::Add for TrialCounts {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            guaranteed_errors: self.guaranteed_errors + o.guaranteed_errors,
            excess_errors: self.excess_errors + o.excess_errors,
            symbol_errors: self.symbol_errors + o.symbol_errors,
        }
    }
}

struct Tables {
    basis: [[f64; 2]; 2],
    assisted: [[f64; 4]; 4],
    unassisted: [[f64; 2]; 4],
}

impl Tables {
    fn new(eps: f64) -> Result<Self> {
        let mut t = Self { basis: [[0.0; 2]; 2], assisted: [[0.0; 4]; 4], unassisted: [[0.0; 2]; 4] };
        for bit in 0..2 {
            t.basis[bit] = basis_distribution(bit, eps)?;
        }
        for m in 0..4 {
            t.assisted[m] = assisted_distribution(m, eps)?;
            t.unassisted[m] = unassisted_distribution(m, eps)?;
        }
        Ok(t)
    }
}

fn run_trial(tables: &Tables, basis_uses: usize, dense_uses: usize, assisted: bool, rng: &mut ChaCha8Rng) -> TrialCounts {
    let mut guaranteed_wrong = false;
    for _ in 0..basis_uses {
        let bit = rng.random_range(0..2usize);
        guaranteed_wrong |= sample(&tables.basis[bit], rng) != bit;
    }
    let mut symbol_errors = 0;
    for _ in 0..dense_uses {
        let m = rng.random_range(0..4usize);
        let decoded = if assisted { sample(&tables.assisted[m], rng) } else { naive_guess(sample(&tables.unassisted[m], rng)) };
        symbol_errors += u64::from(decoded != m);
    }
    TrialCounts { guaranteed_errors: u64::from(guaranteed_wrong), excess_errors: u64::from(symbol_errors > 0), symbol_errors }
}

/// Runs `cfg.trials` independent blocks. Trial `t` draws from a ChaCha stream
/// keyed by `(seed, t)`, so the report is independent of thread scheduling.
pub fn run_protocol(cfg: &SimConfig) -> Result<SimReport> {
    let dense = cfg.dense_positions()?;
    let basis = cfg.n - dense;
    let tables = Tables::new(cfg.channel_eps)?;
    let counts = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64);
            run_trial(&tables, basis, dense, cfg.assisted, &mut rng)
        })
        .reduce(TrialCounts::default, |a, b| a + b);
    let trials = cfg.trials as f64;
    let symbols = (cfg.trials * dense) as f64;
    Ok(SimReport {
        guaranteed_rate: 1.0 - cfg.lambda,
        excess_rate: 2.0 * cfg.lambda,
        err_guaranteed: counts.guaranteed_errors as f64 / trials,
        err_excess: counts.excess_errors as f64 / trials,
        excess_symbol_error: if dense == 0 { 0.0 } else { counts.symbol_errors as f64 / symbols },
        trials: cfg.trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_bell_measurement_is_exact() {
        for m in 0..4 {
            let p = assisted_distribution(m, 0.0).unwrap();
            for (j, pj) in p.iter().enumerate() {
                let expect = if j == m { 1.0 } else { 0.0 };
                assert!((pj - expect).abs() < 1e-12, "m={m} j={j} p={pj}");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 0..4 {
            for _ in 0..50 {
                assert_eq!(superdense_roundtrip(m, 0.0, &mut rng).unwrap(), m);
            }
        }
    }

    #[test]
    fn full_depolarization_is_uniform() {
        for m in 0..4 {
            let p = assisted_distribution(m, 1.0).unwrap();
            assert!(p.iter().all(|pj| (pj - 0.25).abs() < 1e-12));
        }
    }

    #[test]
    fn unassisted_outcomes_ignore_message() {
        // exact success of the naive guess, averaged over uniform symbols
        let mut success = 0.0;
        for m in 0..4 {
            let p = unassisted_distribution(m, 0.0).unwrap();
            assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
            success += 0.25 * (0..2).filter(|&o| naive_guess(o) == m).map(|o| p[o]).sum::<f64>();
        }
        assert!((success - 0.25).abs() < 1e-12);
    }

    #[test]
    fn basis_flip_probability() {
        let p = basis_distribution(1, 0.5).unwrap();
        assert!((p[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn bad_symbol_rejected() {
        assert!(assisted_distribution(4, 0.0).is_err());
    }

    #[test]
    fn config_checks() {
        let cfg = SimConfig { n: 8, lambda: 0.3, ..Default::default() };
        assert!(run_protocol(&cfg).is_err());
        assert!(run_protocol(&SimConfig { trials: 0, ..Default::default() }).is_err());
        assert!(run_protocol(&SimConfig { channel_eps: 1.5, ..Default::default() }).is_err());
        assert_eq!(SimConfig { lambda: 0.375, ..Default::default() }.dense_positions().unwrap(), 3);
    }

    #[test]
    fn noiseless_runs() {
        let r = run_protocol(&SimConfig { lambda: 0.0, assisted: false, ..Default::default() }).unwrap();
        assert_eq!((r.guaranteed_rate, r.excess_rate, r.err_guaranteed), (1.0, 0.0, 0.0));
        let r = run_protocol(&SimConfig { lambda: 1.0, ..Default::default() }).unwrap();
        assert_eq!((r.guaranteed_rate, r.excess_rate, r.err_excess), (0.0, 2.0, 0.0));
        let r = run_protocol(&SimConfig { lambda: 0.5, seed: 7, ..Default::default() }).unwrap();
        assert_eq!((r.guaranteed_rate, r.excess_rate, r.err_guaranteed, r.err_excess), (0.5, 1.0, 0.0, 0.0));
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = SimConfig { lambda: 0.5, channel_eps: 0.3, seed: 11, ..Default::default() };
        assert_eq!(run_protocol(&cfg).unwrap(), run_protocol(&cfg).unwrap());
    }
}
