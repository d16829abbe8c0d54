//! Dense complex matrices, density matrices and qubit Bloch vectors.
//!
//! Everything here is sized for small systems: the largest object the toolkit
//! ever builds is a two-qudit state with `d = 5`, i.e. a 25×25 matrix, so all
//! storage is dense and row-major.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest matrix dimension the toolkit supports.
pub const MAX_DIM: usize = 25;

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
const JACOBI_TOLERANCE: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self {
            rows,
            cols,
            data: vec![Complex64::default(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |i, j| if i == j { c(entries[i], 0.0) } else { c(0.0, 0.0) })
    }

    /// `|v⟩⟨v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max |M − M†|` entrywise; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Largest entrywise distance to `other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `⟨u|M|v⟩`.
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        debug_assert_eq!(u.len(), self.rows);
        debug_assert_eq!(v.len(), self.cols);
        let mut acc = Complex64::default();
        for (i, ui) in u.iter().enumerate() {
            let row = self.row(i);
            let inner: Complex64 = row.iter().zip(v).map(|(m, vj)| m * vj).sum();
            acc += ui.conj() * inner;
        }
        acc
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    fn check_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::default() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Serialized as nested rows of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let rows: Vec<Vec<Complex64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|[re, im]| c(re, im)).collect())
            .collect();
        ComplexMatrix::from_rows(&rows).map_err(D::Error::custom)
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows, b.cols);
    ComplexMatrix::from_fn(a.rows * br, a.cols * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Kronecker product of two state vectors.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Spectrum and eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        self.vectors.column(i)
    }

    /// `Σ λ_i v_i v_i†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * lambda;
                }
            }
        }
        out
    }
}

fn require_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows, m.cols)));
    }
    let dev = m.hermiticity_deviation();
    if dev > DEFAULT_TOLERANCE {
        return Err(Error::validation("matrix is not Hermitian", dev));
    }
    Ok(())
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary, then applies the real symmetric Jacobi rotation that annihilates it.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    require_hermitian(m)?;
    let n = m.rows;
    // symmetrize so that rounding noise in the input cannot stall convergence
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off < JACOBI_TOLERANCE * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                // J = diag(1, phase*) · [[c, s], [-s, c]] on the (p, q) plane
                let jpp = c(cs, 0.0);
                let jpq = c(sn, 0.0);
                let jqp = -phase.conj() * sn;
                let jqq = phase.conj() * cs;
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * jpp + aiq * jqp;
                    a[(i, q)] = aip * jpq + aiq * jqq;
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * jpp + viq * jqp;
                    v[(i, q)] = vip * jpq + viq * jqq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = jpp.conj() * apj + jqp.conj() * aqj;
                    a[(q, j)] = jpq.conj() * apj + jqq.conj() * aqj;
                }
                a[(p, q)] = Complex64::default();
                a[(q, p)] = Complex64::default();
                a[(p, p)] = c(a[(p, p)].re, 0.0);
                a[(q, q)] = c(a[(q, q)].re, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { values, vectors })
}

/// Eigenvalues only, descending. Uses the closed form for 2×2 input.
pub fn eigenvalues_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.rows == 2 && m.cols == 2 {
        require_hermitian(m)?;
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = m[(0, 1)].norm();
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        return Ok(vec![mean + half_gap, mean - half_gap]);
    }
    Ok(eig_hermitian(m)?.values)
}

/// Binary entropy `H(x) = −x log₂ x − (1−x) log₂ (1−x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    shannon_entropy(&[x, 1.0 - x])
}

/// Shannon entropy in bits of a (possibly slightly unnormalized) distribution,
/// with `0 · log 0 := 0`; tiny negative entries from rounding are ignored.
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Which half of a bipartite system to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// A validated density matrix, optionally carrying a bipartite split.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Option<(usize, usize)>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, DEFAULT_TOLERANCE)
    }

    /// Validates Hermiticity, unit trace and positivity against `tol`.
    pub fn with_tolerance(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                mat.rows, mat.cols
            )));
        }
        if mat.rows > MAX_DIM {
            return Err(Error::Dimension(format!(
                "dimension {} exceeds the supported maximum {MAX_DIM}",
                mat.rows
            )));
        }
        let herm = mat.hermiticity_deviation();
        if herm > tol {
            return Err(Error::validation("Hermitian", herm));
        }
        let tr = mat.trace();
        let trace_dev = (tr - c(1.0, 0.0)).norm();
        if trace_dev > tol {
            return Err(Error::validation("unit trace", trace_dev));
        }
        let min_eig = eigenvalues_hermitian(&mat)?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::validation("positive semidefinite", -min_eig));
        }
        Ok(Self { mat, dims: None })
    }

    /// Same validation as [`DensityMatrix::new`], plus a bipartite split.
    pub fn bipartite(mat: ComplexMatrix, dims: (usize, usize)) -> Result<Self> {
        Self::bipartite_with_tolerance(mat, dims, DEFAULT_TOLERANCE)
    }

    pub fn bipartite_with_tolerance(
        mat: ComplexMatrix,
        dims: (usize, usize),
        tol: f64,
    ) -> Result<Self> {
        let rho = Self::with_tolerance(mat, tol)?;
        rho.with_dims(dims)
    }

    /// Attaches a bipartite split `(d_A, d_B)` with `d_A · d_B = d`.
    pub fn with_dims(mut self, dims: (usize, usize)) -> Result<Self> {
        if dims.0 == 0 || dims.1 == 0 || dims.0 * dims.1 != self.dim() {
            return Err(Error::Dimension(format!(
                "dims {dims:?} do not factor dimension {}",
                self.dim()
            )));
        }
        self.dims = Some(dims);
        Ok(self)
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let psi: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&psi))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims: None,
        }
    }

    /// Convex combination `p·a + (1−p)·b`; the bipartite split of `a` is kept
    /// when both inputs agree on it.
    pub fn mix(p: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0, 1]")));
        }
        if a.dim() != b.dim() {
            return Err(Error::Dimension("mixing states of different dimension".into()));
        }
        let mat = &a.mat.scale(p) + &b.mat.scale(1.0 - p);
        let dims = if a.dims == b.dims { a.dims } else { None };
        Ok(Self { mat, dims })
    }

    /// Product state `a ⊗ b` with dims `(d_a, d_b)`.
    pub fn tensor(a: &Self, b: &Self) -> Self {
        Self {
            mat: kron(&a.mat, &b.mat),
            dims: Some((a.dim(), b.dim())),
        }
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix, dims: Option<(usize, usize)>) -> Self {
        Self { mat, dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    pub fn purity(&self) -> f64 {
        self.mat.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_hermitian(&self.mat).expect("density matrices are Hermitian")
    }

    pub fn partial_trace(&self, keep: Subsystem) -> Result<Self> {
        partial_trace(self, keep)
    }
}

/// Reduced state of the kept subsystem.
pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    let (da, db) = rho
        .dims
        .ok_or_else(|| Error::Dimension("partial trace needs declared subsystem dims".into()))?;
    let m = &rho.mat;
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, k| {
            (0..db).map(|j| m[(i * db + j, k * db + j)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |j, l| {
            (0..da).map(|i| m[(i * db + j, i * db + l)]).sum()
        }),
    };
    Ok(DensityMatrix::from_trusted(out, None))
}

/// Von Neumann entropy in bits.
pub fn vn_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// Pauli matrices `σ₁, σ₂, σ₃`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        ComplexMatrix::new(2, 2, vec![z, one, one, z]).unwrap(),
        ComplexMatrix::new(2, 2, vec![z, -i, i, z]).unwrap(),
        ComplexMatrix::new(2, 2, vec![one, z, z, -one]).unwrap(),
    ]
}

/// Qubit Bloch vector `r⃗` with `|r⃗| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        let v = Self { r1, r2, r3 };
        let n2 = v.norm_sqr();
        if !n2.is_finite() || n2 > 1.0 + DEFAULT_TOLERANCE {
            return Err(Error::validation("Bloch vector length ≤ 1", n2.sqrt() - 1.0));
        }
        Ok(v)
    }

    pub fn components(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }
}

/// `½(I + r⃗·σ⃗)`.
pub fn bloch_to_state(r: BlochVector) -> DensityMatrix {
    let m = ComplexMatrix::new(
        2,
        2,
        vec![
            c(0.5 * (1.0 + r.r3), 0.0),
            c(0.5 * r.r1, -0.5 * r.r2),
            c(0.5 * r.r1, 0.5 * r.r2),
            c(0.5 * (1.0 - r.r3), 0.0),
        ],
    )
    .unwrap();
    DensityMatrix::from_trusted(m, None)
}

/// `r_i = Tr(ρ σ_i)`.
pub fn state_to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::Dimension(format!(
            "Bloch vectors need a qubit, got dimension {}",
            rho.dim()
        )));
    }
    let m = &rho.mat;
    Ok(BlochVector {
        r1: 2.0 * m[(0, 1)].re,
        r2: -2.0 * m[(0, 1)].im,
        r3: (m[(0, 0)] - m[(1, 1)]).re,
    })
}

/// Singlet `|ψ⁻⟩ = (|01⟩ − |10⟩)/√2`.
pub fn singlet() -> Vec<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![c(0.0, 0.0), c(s, 0.0), c(-s, 0.0), c(0.0, 0.0)]
}

/// Werner state `(1−p)/4 · I₄ + p |ψ⁻⟩⟨ψ⁻|`, dims (2, 2).
pub fn werner(p_w: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p_w) {
        return Err(Error::InvalidArgument(format!("Werner weight {p_w} outside [0, 1]")));
    }
    let noise = ComplexMatrix::identity(4).scale((1.0 - p_w) / 4.0);
    let mat = &noise + &ComplexMatrix::outer(&singlet()).scale(p_w);
    Ok(DensityMatrix::from_trusted(mat, Some((2, 2))))
}
