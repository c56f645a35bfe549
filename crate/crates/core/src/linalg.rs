//! Dense complex linear algebra over tensor-product spaces.
//!
//! Matrices are small (at most a few dozen rows in practice) and stored
//! row-major. Every operation returns a fresh value; nothing is mutated in
//! place once a matrix has been handed out.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::objects::DensityOperator;

/// Largest row or column count any tensor construction may produce.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Hermiticity tolerance, relative to the matrix norm.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Allowed reconstruction residual of an eigendecomposition.
pub const EIG_RESIDUAL_TOL: f64 = 1e-9;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!("empty matrix {rows}x{cols}")));
        }
        if rows * cols != data.len() {
            return Err(Error::Shape(format!("{rows}x{cols} matrix needs {} entries, got {}", rows * cols, data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(rows * cols, data.len());
        Self { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d, d);
        for i in 0..d {
            m.data[i * d + i] = ONE;
        }
        m
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let d = values.len();
        let mut m = Self::zeros(d, d);
        for (i, v) in values.iter().enumerate() {
            m.data[i * d + i] = *v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        Self::diag(&values.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    /// `|v⟩⟨w|`.
    pub fn outer(v: &[Complex64], w: &[Complex64]) -> Self {
        let mut data = Vec::with_capacity(v.len() * w.len());
        for a in v {
            for b in w {
                data.push(a * b.conj());
            }
        }
        Self::from_raw(v.len(), w.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.data[i * self.cols + i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.data[r * self.cols + c].conj());
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.data[r * self.cols + c]);
            }
        }
        Self::from_raw(self.cols, self.rows, out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|z| z * s).collect())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, rhs.rows, rhs.cols)));
        }
        Ok(self.mul_unchecked(rhs))
    }

    pub(crate) fn mul_unchecked(&self, rhs: &Self) -> Self {
        let (n, k, m) = (self.rows, self.cols, rhs.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[l * m..(l + 1) * m];
                let dst = &mut out[i * m..(i + 1) * m];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Self::from_raw(n, m, out)
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!("cannot apply {}x{} matrix to vector of length {}", self.rows, self.cols, v.len())));
        }
        Ok(self.apply_unchecked(v))
    }

    pub(crate) fn apply_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermiticity, `max |h_ij − conj(h_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let d = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                let dev = (self.data[i * d + j] - self.data[j * d + i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_defect() <= HERMITIAN_TOL * self.norm().max(1.0)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(m[(r, c)]);
            }
        }
        Self::from_raw(rows, cols, data)
    }

    /// Symmetrized copy `(h + h†)/2`.
    pub(crate) fn hermitian_part(&self) -> Self {
        let d = self.rows;
        let mut out = self.data.clone();
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = (self.data[i * d + j] + self.data[j * d + i].conj()) * 0.5;
            }
        }
        Self::from_raw(d, d, out)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix::from_raw(self.rows, self.cols, self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix::from_raw(self.rows, self.cols, self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect())
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("shape mismatch in mul")
    }
}

/// Subsystem dimensions of a tensor-product space, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DimList(Vec<usize>);

impl DimList {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("dimension list is empty".into()));
        }
        if dims.contains(&0) {
            return Err(Error::Shape(format!("zero subsystem dimension in {dims:?}")));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= DEFAULT_DIM_CAP)
                .ok_or(Error::DimensionLimit { requested: usize::MAX, cap: DEFAULT_DIM_CAP })?;
        }
        Ok(Self(dims))
    }

    pub fn single(d: usize) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.0.get(i).copied()
    }

    /// Copy with subsystem `i` resized to `d`.
    pub fn with(&self, i: usize, d: usize) -> Result<Self> {
        let mut v = self.0.clone();
        *v.get_mut(i).ok_or_else(|| Error::Shape(format!("no subsystem {i}")))? = d;
        Self::new(v)
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for i in (0..self.0.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.0[i + 1];
        }
        strides
    }
}

impl From<DimList> for Vec<usize> {
    fn from(d: DimList) -> Self {
        d.0
    }
}

/// Kronecker product with the default dimension cap.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    kron_capped(a, b, DEFAULT_DIM_CAP)
}

pub fn kron_capped(a: &ComplexMatrix, b: &ComplexMatrix, cap: usize) -> Result<ComplexMatrix> {
    let rows = a.rows.saturating_mul(b.rows);
    let cols = a.cols.saturating_mul(b.cols);
    if rows > cap || cols > cap {
        return Err(Error::DimensionLimit { requested: rows.max(cols), cap });
    }
    let mut data = vec![ZERO; rows * cols];
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a.data[ar * a.cols + ac];
            if x == ZERO {
                continue;
            }
            for br in 0..b.rows {
                let r = ar * b.rows + br;
                for bc in 0..b.cols {
                    data[r * cols + ac * b.cols + bc] = x * b.data[br * b.cols + bc];
                }
            }
        }
    }
    Ok(ComplexMatrix::from_raw(rows, cols, data))
}

pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

fn check_factorization(m: &ComplexMatrix, dims: &DimList) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", m.rows, m.cols)));
    }
    if dims.total() != m.rows {
        return Err(Error::Shape(format!("dims {:?} do not factorize a {}x{} matrix", dims.as_slice(), m.rows, m.cols)));
    }
    Ok(())
}

fn check_index_set(set: &[usize], n: usize) -> Result<()> {
    for (k, &i) in set.iter().enumerate() {
        if i >= n {
            return Err(Error::Shape(format!("subsystem index {i} out of range for {n} subsystems")));
        }
        if set[..k].contains(&i) {
            return Err(Error::Shape(format!("subsystem index {i} repeated")));
        }
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`. Kept subsystems stay in
/// their original order. An empty `keep` yields the 1×1 matrix `[tr m]`.
pub fn partial_trace(m: &ComplexMatrix, dims: &DimList, keep: &[usize]) -> Result<ComplexMatrix> {
    check_factorization(m, dims)?;
    check_index_set(keep, dims.len())?;
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    Ok(partial_trace_unchecked(m, dims.as_slice(), &keep_sorted))
}

pub(crate) fn partial_trace_unchecked(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let n = dims.len();
    if keep.len() == n {
        return m.clone();
    }
    let total = m.rows;
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced.iter().map(|&i| dims[i]).product();

    // Offset in the full space of each kept multi-index and each traced multi-index.
    let offsets = |set: &[usize], count: usize| -> Vec<usize> {
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0usize; set.len()];
        for _ in 0..count {
            out.push(set.iter().zip(&digits).map(|(&s, &d)| d * strides[s]).sum());
            for k in (0..set.len()).rev() {
                digits[k] += 1;
                if digits[k] < dims[set[k]] {
                    break;
                }
                digits[k] = 0;
            }
        }
        out
    };
    let kept_off = offsets(keep, kept_total);
    let traced_off = offsets(&traced, traced_total);

    let mut data = vec![ZERO; kept_total * kept_total];
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            let mut acc = ZERO;
            for &t in &traced_off {
                acc += m.data[(ro + t) * total + co + t];
            }
            data[r * kept_total + c] = acc;
        }
    }
    ComplexMatrix::from_raw(kept_total, kept_total, data)
}

/// Reorders subsystems: output subsystem `k` is input subsystem `perm[k]`.
pub fn permute_subsystems(m: &ComplexMatrix, dims: &DimList, perm: &[usize]) -> Result<(ComplexMatrix, DimList)> {
    check_factorization(m, dims)?;
    if perm.len() != dims.len() {
        return Err(Error::Shape(format!("permutation {perm:?} has wrong length for {} subsystems", dims.len())));
    }
    check_index_set(perm, dims.len())?;
    let map = permutation_map(dims, perm);
    let d = m.rows;
    let mut data = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            data[r * d + c] = m.data[map[r] * d + map[c]];
        }
    }
    let new_dims = DimList::new(perm.iter().map(|&p| dims.as_slice()[p]).collect())?;
    Ok((ComplexMatrix::from_raw(d, d, data), new_dims))
}

/// For each basis index of the permuted space, the corresponding index in
/// the original space.
pub(crate) fn permutation_map(dims: &DimList, perm: &[usize]) -> Vec<usize> {
    let old_strides = dims.strides();
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims.as_slice()[p]).collect();
    let total = dims.total();
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; perm.len()];
    for _ in 0..total {
        map.push(perm.iter().zip(&digits).map(|(&p, &dg)| dg * old_strides[p]).sum());
        for k in (0..perm.len()).rev() {
            digits[k] += 1;
            if digits[k] < new_dims[k] {
                break;
            }
            digits[k] = 0;
        }
    }
    map
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues in descending order
/// and the matching unit eigenvectors as columns.
pub fn herm_eig(h: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    check_hermitian(h)?;
    Ok(herm_eig_unchecked(h))
}

pub fn herm_eigvals(h: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(h)?;
    Ok(herm_eigvals_unchecked(h))
}

fn check_hermitian(h: &ComplexMatrix) -> Result<()> {
    if !h.is_square() {
        return Err(Error::Shape(format!("expected a square matrix, got {}x{}", h.rows, h.cols)));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.norm().max(1.0) {
        return Err(Error::Domain(format!("matrix is not Hermitian (defect {defect:.3e})")));
    }
    Ok(())
}

pub(crate) fn herm_eigvals_unchecked(h: &ComplexMatrix) -> Vec<f64> {
    if h.rows == 1 {
        return vec![h.data[0].re];
    }
    let mut vals: Vec<f64> = h.hermitian_part().to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

pub(crate) fn herm_eig_unchecked(h: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let d = h.rows;
    if d == 1 {
        return (vec![h.data[0].re], ComplexMatrix::identity(1));
    }
    let eig = SymmetricEigen::new(h.hermitian_part().to_nalgebra());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = ComplexMatrix::zeros(d, d);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..d {
            vecs.data[r * d + new_c] = eig.eigenvectors[(r, old_c)];
        }
    }
    (vals, vecs)
}

/// Rebuilds `V diag(f(λ)) V†` from an eigendecomposition.
pub(crate) fn spectral_map(vals: &[f64], vecs: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let d = vecs.rows;
    let mapped: Vec<f64> = vals.iter().map(|&v| f(v)).collect();
    let mut data = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            let mut acc = ZERO;
            for (k, &w) in mapped.iter().enumerate() {
                if w != 0.0 {
                    acc += vecs.data[r * d + k] * vecs.data[c * d + k].conj() * w;
                }
            }
            data[r * d + c] = acc;
        }
    }
    ComplexMatrix::from_raw(d, d, data)
}

/// Normalized trace distance `½‖ρ − σ‖₁`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (a, b) = (rho.matrix(), sigma.matrix());
    if a.rows() != b.rows() {
        return Err(Error::Shape(format!("trace distance between {}- and {}-dimensional states", a.rows(), b.rows())));
    }
    // fixed operand order keeps the result bit-for-bit symmetric
    let ordered = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)))
        .find(|o| o.is_ne())
        .is_none_or(|o| o.is_lt());
    let diff = if ordered { a - b } else { b - a };
    let half_norm = 0.5 * herm_eigvals_unchecked(&diff).iter().map(|v| v.abs()).sum::<f64>();
    Ok(half_norm.clamp(0.0, 1.0))
}
