//! States, channels and structured operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, DimList, ONE, ZERO};

/// Completeness tolerance for Kraus families.
pub const CPTP_TOL: f64 = 1e-8;
/// Trace and positivity tolerance for density operators.
pub const STATE_TOL: f64 = 1e-9;
/// Norm tolerance for pure states.
pub const PURE_NORM_TOL: f64 = 1e-10;
/// Default largest block length accepted by [`channel_tensor`].
pub const DEFAULT_MAX_BLOCK: usize = 2;

/// A Hermitian, positive semidefinite, unit-trace matrix annotated with
/// its tensor factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: DimList,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix, dims: DimList) -> Result<Self> {
        let rho = Self::from_parts(matrix, dims)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Skips the spectral checks but still verifies the shape.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: DimList) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != dims.total() {
            return Err(Error::Shape(format!("dims {:?} do not factorize a {}x{} matrix", dims.as_slice(), matrix.rows(), matrix.cols())));
        }
        Ok(Self { matrix, dims })
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: DimList) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self { matrix, dims }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_hermitian() {
            return Err(Error::InvalidState(format!("not Hermitian (defect {:.3e})", self.matrix.hermitian_defect())));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {:.12} is not 1", tr.re)));
        }
        let min_eig = linalg::herm_eigvals_unchecked(&self.matrix).last().copied().unwrap_or(0.0);
        if min_eig < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(())
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), DimList::single(d)?)
    }

    /// Computational basis projector `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        Ok(PureState::basis(d, k)?.to_density())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Same matrix, new tensor factorization of the same total dimension.
    pub fn with_dims(&self, dims: DimList) -> Result<Self> {
        Self::from_parts(self.matrix.clone(), dims)
    }

    /// Reduced state on `keep`, in original subsystem order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let m = linalg::partial_trace(&self.matrix, &self.dims, keep)?;
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        let dims =
            if sorted.is_empty() { DimList::single(1)? } else { DimList::new(sorted.iter().map(|&i| self.dims.as_slice()[i]).collect())? };
        Ok(Self::from_parts_unchecked(m, dims))
    }

    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let (m, dims) = linalg::permute_subsystems(&self.matrix, &self.dims, perm)?;
        Ok(Self::from_parts_unchecked(m, dims))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_parts_unchecked(linalg::kron(&self.matrix, &other.matrix)?, self.dims.concat(&other.dims)?))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::herm_eigvals_unchecked(&self.matrix)
    }

    /// Convex combination `Σ wᵢ ρᵢ`; all states must share their dims.
    pub fn mixture(weights: &[f64], states: &[Self]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?;
        if weights.len() != states.len() {
            return Err(Error::InvalidArgument("weights and states differ in length".into()));
        }
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, s) in weights.iter().zip(states) {
            if s.dims != first.dims {
                return Err(Error::Shape("mixture components have different dims".into()));
            }
            acc = &acc + &s.matrix.scale_real(*w);
        }
        Self::new(acc, first.dims.clone())
    }
}

/// Unit vector in a tensor-product space. Global phase is not fixed.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
    dims: DimList,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Shape(format!("{} amplitudes for dims {:?}", amplitudes.len(), dims.as_slice())));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("non-finite amplitude".into()));
        }
        let norm = norm(&amplitudes);
        if (norm - 1.0).abs() > PURE_NORM_TOL {
            return Err(Error::InvalidState(format!("state norm {norm:.12} is not 1")));
        }
        Ok(Self { amplitudes, dims })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>, dims: DimList) -> Result<Self> {
        let n = norm(&amplitudes);
        if !(n.is_finite() && n > 1e-300) {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|z| z / n).collect(), dims)
    }

    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidArgument(format!("basis index {k} out of range for dimension {d}")));
        }
        let mut amps = vec![ZERO; d];
        amps[k] = ONE;
        Self::new(amps, DimList::single(d)?)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &DimList {
        &self.dims
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator::from_parts_unchecked(ComplexMatrix::outer(&self.amplitudes, &self.amplitudes), self.dims.clone())
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.to_density().partial_trace(keep)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.amplitudes.len() != other.amplitudes.len() {
            return Err(Error::Shape("inner product of states of different dimension".into()));
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Ok(Self { amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes), dims: self.dims.concat(&other.dims)? })
    }

    /// Applies `u` to subsystem `target`, identity elsewhere.
    pub fn apply_local(&self, u: &ComplexMatrix, target: usize) -> Result<Self> {
        let dims = self.dims.as_slice();
        let dt = *dims.get(target).ok_or_else(|| Error::Shape(format!("no subsystem {target}")))?;
        if u.cols() != dt {
            return Err(Error::Shape(format!("operator with {} columns on a {dt}-dimensional subsystem", u.cols())));
        }
        let before: usize = dims[..target].iter().product();
        let after: usize = dims[target + 1..].iter().product();
        let out_d = u.rows();
        let mut out = vec![ZERO; before * out_d * after];
        for b in 0..before {
            for o in 0..out_d {
                for t in 0..dt {
                    let k = u[(o, t)];
                    if k == ZERO {
                        continue;
                    }
                    for a in 0..after {
                        out[(b * out_d + o) * after + a] += k * self.amplitudes[(b * dt + t) * after + a];
                    }
                }
            }
        }
        let dims = self.dims.with(target, out_d)?;
        Self::normalized(out, dims)
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `|Φ_d⟩ = d^{-1/2} Σ_j |j⟩⊗|j⟩`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("maximally entangled state needs d >= 2, got {d}")));
    }
    let mut amps = vec![ZERO; d * d];
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for j in 0..d {
        amps[j * d + j] = a;
    }
    PureState::new(amps, DimList::new(vec![d, d])?)
}

/// Purification on `(d, d)`: the second factor is a reference system of the
/// same dimension as the state.
pub fn purify(rho: &DensityOperator) -> Result<PureState> {
    rho.validate()?;
    let d = rho.dim();
    let (vals, vecs) = linalg::herm_eig_unchecked(rho.matrix());
    let mut amps = vec![ZERO; d * d];
    for (k, &lam) in vals.iter().enumerate() {
        let w = lam.max(0.0).sqrt();
        if w == 0.0 {
            continue;
        }
        for i in 0..d {
            amps[i * d + k] = vecs[(i, k)] * w;
        }
    }
    PureState::normalized(amps, DimList::new(vec![d, d])?)
}

/// Heisenberg-Weyl operator `Σ_X^a Σ_Z^b` with the cyclic shift
/// `Σ_X|j⟩ = |j+1 mod d⟩` and phase `Σ_Z|j⟩ = e^{2πij/d}|j⟩`.
pub fn heisenberg_weyl(d: usize, a: usize, b: usize) -> Result<ComplexMatrix> {
    if d == 0 || a >= d || b >= d {
        return Err(Error::InvalidArgument(format!("Heisenberg-Weyl indices ({a},{b}) out of range for d={d}")));
    }
    // Σ_X^a Σ_Z^b |j⟩ = e^{2πi bj/d} |j+a⟩
    let mut m = vec![ZERO; d * d];
    for j in 0..d {
        let phase = Complex64::from_polar(1.0, 2.0 * PI * ((b * j) % d) as f64 / d as f64);
        m[((j + a) % d) * d + j] = phase;
    }
    Ok(ComplexMatrix::from_raw(d, d, m))
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_raw(2, 2, vec![ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    ComplexMatrix::from_raw(2, 2, vec![ZERO, -i, i, ZERO])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_raw(2, 2, vec![ONE, ZERO, ZERO, -ONE])
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    input_dim: usize,
    output_dim: usize,
    kraus_ops: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus_ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus_ops.first().ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (output_dim, input_dim) = (first.rows(), first.cols());
        if let Some(k) = kraus_ops.iter().find(|k| k.rows() != output_dim || k.cols() != input_dim) {
            return Err(Error::Shape(format!("Kraus operators of mixed shape {}x{} and {}x{}", output_dim, input_dim, k.rows(), k.cols())));
        }
        let ch = Self { input_dim, output_dim, kraus_ops };
        let residual = ch.completeness_residual();
        if residual > CPTP_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("identity channel of dimension 0".into()));
        }
        Self::new(vec![ComplexMatrix::identity(d)])
    }

    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Discards the input and prepares `psi`.
    pub fn replacement(psi: &PureState, input_dim: usize) -> Result<Self> {
        let out = psi.amplitudes();
        let ops = (0..input_dim)
            .map(|j| {
                let mut m = ComplexMatrix::zeros(out.len(), input_dim).entries().to_vec();
                for (r, a) in out.iter().enumerate() {
                    m[r * input_dim + j] = *a;
                }
                ComplexMatrix::from_raw(out.len(), input_dim, m)
            })
            .collect();
        Self::new(ops)
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.kraus_ops
    }

    /// `max |Σ K†K − 1|` entrywise.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.input_dim, self.input_dim);
        for k in &self.kraus_ops {
            acc = &acc + &k.adjoint().mul_unchecked(k);
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.input_dim))
    }

    /// Output of the channel on a pure input, `Σ (Kψ)(Kψ)†`.
    pub(crate) fn apply_pure(&self, psi: &[Complex64]) -> ComplexMatrix {
        let d = self.output_dim;
        let mut acc = vec![ZERO; d * d];
        for k in &self.kraus_ops {
            let v = k.apply_unchecked(psi);
            for r in 0..d {
                if v[r] == ZERO {
                    continue;
                }
                for c in 0..d {
                    acc[r * d + c] += v[r] * v[c].conj();
                }
            }
        }
        ComplexMatrix::from_raw(d, d, acc)
    }

    /// Channel acting on the whole of `rho`.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        let whole = rho.with_dims(DimList::single(rho.dim())?)?;
        apply_channel(self, &whole, 0)
    }
}

/// Applies `channel` to subsystem `target` of `rho`, identity elsewhere.
pub fn apply_channel(channel: &KrausChannel, rho: &DensityOperator, target: usize) -> Result<DensityOperator> {
    let dims = rho.dims().as_slice();
    let dt = *dims.get(target).ok_or_else(|| Error::Shape(format!("no subsystem {target} in dims {dims:?}")))?;
    if dt != channel.input_dim {
        return Err(Error::Shape(format!(
            "channel input dimension {} does not match subsystem {target} of dimension {dt}",
            channel.input_dim
        )));
    }
    let residual = channel.completeness_residual();
    if residual > CPTP_TOL {
        return Err(Error::NotTracePreserving { residual });
    }
    let out = apply_channel_unchecked(channel, rho.matrix(), dims, target);
    let new_dims = rho.dims().with(target, channel.output_dim)?;
    DensityOperator::new(out, new_dims)
}

pub(crate) fn apply_channel_unchecked(channel: &KrausChannel, m: &ComplexMatrix, dims: &[usize], target: usize) -> ComplexMatrix {
    let dt = dims[target];
    let before: usize = dims[..target].iter().product();
    let after: usize = dims[target + 1..].iter().product();
    let din = m.rows();
    let od = channel.output_dim;
    let dout = before * od * after;
    let src = m.entries();
    let mut acc = vec![ZERO; dout * dout];
    let mut left = vec![ZERO; dout * din];
    for k in channel.kraus_ops() {
        // left = (1⊗K⊗1) m
        left.iter_mut().for_each(|z| *z = ZERO);
        for b in 0..before {
            for o in 0..od {
                for t in 0..dt {
                    let kv = k[(o, t)];
                    if kv == ZERO {
                        continue;
                    }
                    for a in 0..after {
                        let dst_row = (b * od + o) * after + a;
                        let src_row = (b * dt + t) * after + a;
                        let dst = &mut left[dst_row * din..(dst_row + 1) * din];
                        let s = &src[src_row * din..(src_row + 1) * din];
                        for (d, v) in dst.iter_mut().zip(s) {
                            *d += kv * v;
                        }
                    }
                }
            }
        }
        // acc += left (1⊗K⊗1)†
        for r in 0..dout {
            let lrow = &left[r * din..(r + 1) * din];
            for b in 0..before {
                for o in 0..od {
                    for a in 0..after {
                        let c = (b * od + o) * after + a;
                        let mut s = ZERO;
                        for t in 0..dt {
                            let kv = k[(o, t)];
                            if kv != ZERO {
                                s += lrow[(b * dt + t) * after + a] * kv.conj();
                            }
                        }
                        acc[r * dout + c] += s;
                    }
                }
            }
        }
    }
    ComplexMatrix::from_raw(dout, dout, acc)
}

/// Qubit depolarizing channel `ρ ↦ (1−ε)ρ + ε·1/2`, stored in Pauli Kraus form.
pub fn depolarizing(eps: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("depolarizing parameter {eps} outside [0, 1]")));
    }
    let w0 = (1.0 - 0.75 * eps).sqrt();
    let w = (0.25 * eps).sqrt();
    KrausChannel::new(vec![
        ComplexMatrix::identity(2).scale_real(w0),
        pauli_x().scale_real(w),
        pauli_y().scale_real(w),
        pauli_z().scale_real(w),
    ])
}

/// `N^{⊗b}` with the default block cap.
pub fn channel_tensor(n: &KrausChannel, b: usize) -> Result<KrausChannel> {
    channel_tensor_capped(n, b, DEFAULT_MAX_BLOCK)
}

pub fn channel_tensor_capped(n: &KrausChannel, b: usize, max_block: usize) -> Result<KrausChannel> {
    if b == 0 || b > max_block {
        return Err(Error::InvalidArgument(format!("block length {b} outside [1, {max_block}]")));
    }
    let mut ops = n.kraus_ops.clone();
    for _ in 1..b {
        let mut next = Vec::with_capacity(ops.len() * n.kraus_ops.len());
        for a in &ops {
            for k in &n.kraus_ops {
                next.push(linalg::kron(a, k)?);
            }
        }
        ops = next;
    }
    KrausChannel::new(ops)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace_distance;

    fn bell_density() -> DensityOperator {
        maximally_entangled(2).unwrap().to_density()
    }

    #[test]
    fn bell_pair_amplitudes() {
        let phi = maximally_entangled(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [s, 0.0, 0.0, s];
        for (a, e) in phi.amplitudes().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        assert!(maximally_entangled(1).is_err());
    }

    #[test]
    fn maximally_entangled_marginals_are_mixed() {
        for d in 2..=4 {
            let rho = maximally_entangled(d).unwrap().to_density();
            let mixed = DensityOperator::maximally_mixed(d).unwrap();
            for side in 0..2 {
                let red = rho.partial_trace(&[side]).unwrap();
                assert!(red.matrix().max_abs_diff(mixed.matrix()) < 1e-14);
            }
        }
    }

    #[test]
    fn density_validation() {
        let dims = DimList::single(2).unwrap();
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[0.6, 0.6]), dims.clone()).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[1.5, -0.5]), dims.clone()).is_err());
        let nonherm = ComplexMatrix::from_real(2, 2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(DensityOperator::new(nonherm, dims.clone()).is_err());
        assert!(DensityOperator::new(ComplexMatrix::diag_real(&[0.25, 0.75]), dims).is_ok());
    }

    #[test]
    fn purify_pure_and_mixed() {
        let zero = DensityOperator::basis(2, 0).unwrap();
        let p = purify(&zero).unwrap();
        // reference basis is arbitrary; the result must be a product |0⟩⊗|r⟩
        assert!(trace_distance(&p.reduced(&[0]).unwrap(), &zero).unwrap() < 1e-12);
        assert!(p.reduced(&[1]).unwrap().eigenvalues()[0] > 1.0 - 1e-12);

        let mixed = DensityOperator::maximally_mixed(2).unwrap();
        let p = purify(&mixed).unwrap();
        let schmidt = p.reduced(&[0]).unwrap().eigenvalues();
        assert!((schmidt[0] - 0.5).abs() < 1e-12 && (schmidt[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn heisenberg_weyl_qubit_is_pauli() {
        assert_eq!(heisenberg_weyl(2, 0, 0).unwrap(), ComplexMatrix::identity(2));
        assert!(heisenberg_weyl(2, 1, 0).unwrap().max_abs_diff(&pauli_x()) < 1e-15);
        assert!(heisenberg_weyl(2, 0, 1).unwrap().max_abs_diff(&pauli_z()) < 1e-15);
        let xz = &pauli_x() * &pauli_z();
        assert!(heisenberg_weyl(2, 1, 1).unwrap().max_abs_diff(&xz) < 1e-15);
        assert!(heisenberg_weyl(2, 2, 0).is_err());
    }

    #[test]
    fn heisenberg_weyl_unitary() {
        for d in 1..=5 {
            for a in 0..d {
                for b in 0..d {
                    let u = heisenberg_weyl(d, a, b).unwrap();
                    let uu = &u * &u.adjoint();
                    assert!(uu.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn heisenberg_weyl_trace_orthogonal() {
        for d in 2..=4 {
            let ops: Vec<_> = (0..d * d).map(|i| heisenberg_weyl(d, i / d, i % d).unwrap()).collect();
            for (i, p) in ops.iter().enumerate() {
                for (j, q) in ops.iter().enumerate() {
                    let t = (&p.adjoint() * q).trace();
                    let expect = if i == j { d as f64 } else { 0.0 };
                    assert!((t - Complex64::new(expect, 0.0)).norm() < 1e-12, "d={d} i={i} j={j} t={t}");
                }
            }
        }
    }

    #[test]
    fn depolarizing_extremes() {
        let rho = DensityOperator::new(
            ComplexMatrix::new(
                2,
                2,
                vec![Complex64::new(0.7, 0.0), Complex64::new(0.2, 0.1), Complex64::new(0.2, -0.1), Complex64::new(0.3, 0.0)],
            )
            .unwrap(),
            DimList::single(2).unwrap(),
        )
        .unwrap();
        let out = depolarizing(0.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-15);
        let out = depolarizing(1.0).unwrap().apply(&rho).unwrap();
        assert!(out.matrix().max_abs_diff(DensityOperator::maximally_mixed(2).unwrap().matrix()) < 1e-15);
        assert!(depolarizing(-0.1).is_err());
        assert!(depolarizing(1.1).is_err());
    }

    #[test]
    fn depolarizing_matches_affine_form() {
        let rho = DensityOperator::basis(2, 0).unwrap();
        for eps in [0.1, 0.37, 0.9] {
            let out = depolarizing(eps).unwrap().apply(&rho).unwrap();
            let expect = ComplexMatrix::diag_real(&[1.0 - eps / 2.0, eps / 2.0]);
            assert!(out.matrix().max_abs_diff(&expect) < 1e-15);
        }
    }

    #[test]
    fn depolarized_bell_pair_spectrum() {
        let out = apply_channel(&depolarizing(0.5).unwrap(), &bell_density(), 1).unwrap();
        let ev = out.eigenvalues();
        let expect = [5.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0, 1.0 / 8.0];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
        for eps in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let out = apply_channel(&depolarizing(eps).unwrap(), &bell_density(), 0).unwrap();
            assert!(out.validate().is_ok());
        }
    }

    #[test]
    fn full_depolarizing_gives_product() {
        let rho = DensityOperator::new(
            ComplexMatrix::new(
                4,
                4,
                vec![0.4, 0.1, 0.0, 0.2, 0.1, 0.2, 0.05, 0.0, 0.0, 0.05, 0.1, 0.0, 0.2, 0.0, 0.0, 0.3]
                    .into_iter()
                    .map(|x| Complex64::new(x, 0.0))
                    .collect(),
            )
            .unwrap(),
            DimList::new(vec![2, 2]).unwrap(),
        )
        .unwrap();
        let out = apply_channel(&depolarizing(1.0).unwrap(), &rho, 0).unwrap();
        let expect = DensityOperator::maximally_mixed(2).unwrap().tensor(&rho.partial_trace(&[1]).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(expect.matrix()) < 1e-15);
    }

    #[test]
    fn apply_channel_dimension_mismatch() {
        let rho = DensityOperator::maximally_mixed(3).unwrap();
        assert!(matches!(apply_channel(&depolarizing(0.2).unwrap(), &rho, 0), Err(Error::Shape(_))));
        assert!(apply_channel(&depolarizing(0.2).unwrap(), &bell_density(), 2).is_err());
    }

    #[test]
    fn kraus_completeness_enforced() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        match KrausChannel::new(vec![half]) {
            Err(Error::NotTracePreserving { residual }) => assert!((residual - 0.75).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn tensor_power_of_depolarizing() {
        let n = depolarizing(0.3).unwrap();
        assert_eq!(channel_tensor(&n, 1).unwrap(), n);
        let n2 = channel_tensor(&n, 2).unwrap();
        assert_eq!(n2.kraus_ops().len(), 16);
        assert_eq!(n2.input_dim(), 4);
        assert!(n2.completeness_residual() <= CPTP_TOL);
        assert!(channel_tensor(&n, 3).is_err());
        assert!(channel_tensor_capped(&n, 3, 3).is_ok());
        assert!(channel_tensor(&n, 0).is_err());
    }

    #[test]
    fn replacement_channel_outputs_fixed_state() {
        let plus = PureState::normalized(vec![ONE, ONE], DimList::single(2).unwrap()).unwrap();
        let ch = KrausChannel::replacement(&plus, 3).unwrap();
        let out = ch.apply(&DensityOperator::basis(3, 2).unwrap()).unwrap();
        assert!(out.matrix().max_abs_diff(plus.to_density().matrix()) < 1e-15);
    }

    #[test]
    fn apply_local_matches_kron() {
        let phi = maximally_entangled(2).unwrap();
        let lhs = phi.apply_local(&pauli_x(), 0).unwrap();
        let full = linalg::kron(&pauli_x(), &ComplexMatrix::identity(2)).unwrap();
        let rhs = full.apply(phi.amplitudes()).unwrap();
        for (a, b) in lhs.amplitudes().iter().zip(&rhs) {
            assert!((a - b).norm() < 1e-15);
        }
    }
}
