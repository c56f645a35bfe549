use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DimList, ZERO};
use crate::objects::{apply_channel_unchecked, heisenberg_weyl, maximally_entangled, pauli_x, DensityOperator, KrausChannel, PureState};

/// Classical letters, a shared resource state on `A0 ⊗ A1`, and one encoder
/// `A0 → A` per letter.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    probs: Vec<f64>,
    resource: PureState,
    encoders: Vec<KrausChannel>,
}

impl Ensemble {
    pub fn new(probs: Vec<f64>, resource: PureState, encoders: Vec<KrausChannel>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidArgument("ensemble has no letters".into()));
        }
        if probs.len() != encoders.len() {
            return Err(Error::InvalidArgument(format!("{} probabilities but {} encoders", probs.len(), encoders.len())));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Domain(format!("invalid letter probabilities {probs:?}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("letter probabilities sum to {total}")));
        }
        let rdims = resource.dims().as_slice();
        if rdims.len() != 2 {
            return Err(Error::Shape(format!("resource state must live on A0 x A1, got dims {rdims:?}")));
        }
        let (a0, out) = (encoders[0].input_dim(), encoders[0].output_dim());
        if encoders.iter().any(|e| e.input_dim() != a0 || e.output_dim() != out) {
            return Err(Error::Shape("encoders do not share input and output dimensions".into()));
        }
        if a0 != rdims[0] {
            return Err(Error::Shape(format!("encoders take dimension {a0}, resource A0 has dimension {}", rdims[0])));
        }
        let max_letters = out * out + 1;
        if probs.len() > max_letters {
            return Err(Error::InvalidArgument(format!(
                "{} letters exceed the cardinality bound {max_letters} for a {out}-dimensional input",
                probs.len()
            )));
        }
        Ok(Self { probs, resource, encoders })
    }

    /// The superposition family interpolating between basis signaling
    /// (`beta = 0`) and dense coding over two Bell states (`beta = 1`):
    /// resource `∝ √(1−β)|00⟩ + √β|Φ⟩`, letters `x ∈ {0,1}` equiprobable,
    /// encoder `ρ ↦ XˣρXˣ`.
    pub fn superposition(beta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(Error::InvalidArgument(format!("beta {beta} outside [0, 1]")));
        }
        let phi = maximally_entangled(2)?;
        let mut u: Vec<Complex64> = phi.amplitudes().iter().map(|a| a * beta.sqrt()).collect();
        u[0] += Complex64::new((1.0 - beta).sqrt(), 0.0);
        let resource = PureState::normalized(u, DimList::new(vec![2, 2])?)?;
        Self::new(vec![0.5, 0.5], resource, vec![KrausChannel::identity(2)?, KrausChannel::unitary(pauli_x())?])
    }

    /// Equiprobable computational basis states on a `d`-dimensional input,
    /// with a product resource `|0⟩|0⟩` and shift encoders.
    pub fn basis_signaling(d: usize) -> Result<Self> {
        let mut amps = vec![ZERO; d * d];
        amps[0] = Complex64::new(1.0, 0.0);
        let resource = PureState::new(amps, DimList::new(vec![d, d])?)?;
        let encoders = (0..d).map(|x| KrausChannel::unitary(heisenberg_weyl(d, x, 0)?)).collect::<Result<_>>()?;
        Self::new(vec![1.0 / d as f64; d], resource, encoders)
    }

    /// Pure-state letters with an unentangled, one-dimensional ancilla: each
    /// encoder prepares its letter state regardless of input.
    pub fn pure_letters(probs: Vec<f64>, states: &[PureState]) -> Result<Self> {
        let d = states.first().map(|s| s.amplitudes().len()).ok_or_else(|| Error::InvalidArgument("no letter states".into()))?;
        let mut amps = vec![ZERO; d];
        amps[0] = Complex64::new(1.0, 0.0);
        let resource = PureState::new(amps, DimList::new(vec![d, 1])?)?;
        let encoders = states
            .iter()
            .map(|s| KrausChannel::replacement(&PureState::new(s.amplitudes().to_vec(), DimList::single(s.amplitudes().len())?)?, d))
            .collect::<Result<_>>()?;
        Self::new(probs, resource, encoders)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn resource(&self) -> &PureState {
        &self.resource
    }

    pub fn encoders(&self) -> &[KrausChannel] {
        &self.encoders
    }

    pub fn letters(&self) -> usize {
        self.probs.len()
    }

    /// Dimension of the channel input `A`.
    pub fn input_dim(&self) -> usize {
        self.encoders[0].output_dim()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.resource.dims().as_slice()[1]
    }

    /// Per-letter states on `A1 ⊗ B` after encoding and the channel.
    pub fn conditional_outputs(&self, channel: &KrausChannel) -> Result<Vec<ComplexMatrix>> {
        if channel.input_dim() != self.input_dim() {
            return Err(Error::Shape(format!(
                "channel takes dimension {}, ensemble produces dimension {}",
                channel.input_dim(),
                self.input_dim()
            )));
        }
        let rdims = self.resource.dims().as_slice();
        let (a0, a1) = (rdims[0], rdims[1]);
        let rho = self.resource.to_density();
        // resource lives on (A0, A1); move A0 last so outputs read (A1, B)
        let rho = rho.permute(&[1, 0])?;
        let dims_a1_a0 = [a1, a0];
        let da = self.input_dim();
        let dims_a1_a = [a1, da];
        Ok(self
            .encoders
            .iter()
            .map(|enc| {
                let encoded = apply_channel_unchecked(enc, rho.matrix(), &dims_a1_a0, 1);
                apply_channel_unchecked(channel, &encoded, &dims_a1_a, 1)
            })
            .collect())
    }

    /// The classical-quantum state `ω_{X A1 B} = Σ p(x)|x⟩⟨x| ⊗ ω^x_{A1 B}`,
    /// with `X` as a block-diagonal register.
    pub fn cq_state(&self, channel: &KrausChannel) -> Result<DensityOperator> {
        let blocks = self.conditional_outputs(channel)?;
        let a1 = self.ancilla_dim();
        let db = channel.output_dim();
        let block = a1 * db;
        let n = self.letters();
        let total = n * block;
        let mut data = vec![ZERO; total * total];
        for (x, (p, m)) in self.probs.iter().zip(&blocks).enumerate() {
            let off = x * block;
            for r in 0..block {
                for c in 0..block {
                    data[(off + r) * total + off + c] = m[(r, c)] * *p;
                }
            }
        }
        DensityOperator::new(ComplexMatrix::new(total, total, data)?, DimList::new(vec![n, a1, db])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::depolarizing;

    #[test]
    fn superposition_normalization() {
        for beta in [0.0, 0.2, 0.5, 1.0] {
            // ‖u_β‖² = 1 + √(2β(1−β))
            let phi = maximally_entangled(2).unwrap();
            let mut u: Vec<Complex64> = phi.amplitudes().iter().map(|a| a * f64::sqrt(beta)).collect();
            u[0] += Complex64::new((1.0 - beta).sqrt(), 0.0);
            let norm_sq: f64 = u.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm_sq - (1.0 + (2.0 * beta * (1.0 - beta)).sqrt())).abs() < 1e-14);
            assert!(Ensemble::superposition(beta).is_ok());
        }
        assert!(Ensemble::superposition(1.5).is_err());
    }

    #[test]
    fn cardinality_bound_enforced() {
        let letters: Vec<PureState> = (0..6).map(|k| PureState::basis(2, k % 2).unwrap()).collect();
        assert!(Ensemble::pure_letters(vec![1.0 / 6.0; 6], &letters).is_err());
        assert!(Ensemble::pure_letters(vec![0.2; 5], &letters[..5]).is_ok());
    }

    #[test]
    fn mismatched_ensembles_rejected() {
        let e = Ensemble::basis_signaling(2).unwrap();
        assert!(Ensemble::new(vec![0.5, 0.5], e.resource().clone(), vec![KrausChannel::identity(2).unwrap()]).is_err());
        assert!(Ensemble::new(vec![0.7, 0.7], e.resource().clone(), e.encoders().to_vec()).is_err());
        assert!(Ensemble::new(
            vec![0.5, 0.5],
            e.resource().clone(),
            vec![KrausChannel::identity(2).unwrap(), KrausChannel::identity(3).unwrap()]
        )
        .is_err());
        assert!(e.cq_state(&KrausChannel::identity(3).unwrap()).is_err());
    }

    #[test]
    fn cq_state_is_valid() {
        let e = Ensemble::superposition(0.4).unwrap();
        let w = e.cq_state(&depolarizing(0.3).unwrap()).unwrap();
        assert_eq!(w.dims().as_slice(), &[2, 2, 2]);
        w.validate().unwrap();
    }
}
