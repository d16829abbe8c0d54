//! Mutually unbiased bases.
//!
//! Two families are provided: the rotated Pauli eigenbases of a qubit, with a
//! shared `(θ, φ)` frame, and complete sets of `d + 1` bases for the supported
//! prime-power dimensions. Odd prime powers use the quadratic trace
//! construction over `GF(d)`; `d = 4, 8` use quadratic forms over `Z₄` built
//! from a fixed Kerdock set of binary symmetric matrices.
//!
//! Basis ordering: qubit triples are `(x, y, z)`; complete families put the
//! computational basis first and then follow construction order.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, FieldTables};
use crate::qmatrix::{c, ComplexMatrix};

pub const SUPPORTED_DIMS: [usize; 8] = [2, 3, 4, 5, 7, 8, 9, 25];

const ORTHONORMAL_TOL: f64 = 1e-9;
const PHASE_EPS: f64 = 1e-12;

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// An orthonormal basis of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    vectors: Vec<Vec<Complex64>>,
}

impl Basis {
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let b = Self { vectors };
        let d = b.dim();
        if d == 0 || b.vectors.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension(format!(
                "basis needs {d} vectors of length {d}"
            )));
        }
        let dev = b.orthonormality_deviation();
        if dev > ORTHONORMAL_TOL {
            return Err(Error::validation("orthonormal basis", dev));
        }
        Ok(b)
    }

    pub fn computational(d: usize) -> Self {
        let vectors = (0..d)
            .map(|i| (0..d).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
            .collect();
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, a: usize) -> &[Complex64] {
        &self.vectors[a]
    }

    pub fn projector(&self, a: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vectors[a])
    }

    /// `max |⟨v_i|v_j⟩ − δ_ij|`.
    pub fn orthonormality_deviation(&self) -> f64 {
        let mut dev = 0.0_f64;
        for (i, u) in self.vectors.iter().enumerate() {
            for (j, v) in self.vectors.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((inner(u, v) - c(target, 0.0)).norm());
            }
        }
        dev
    }

    /// Makes the first amplitude above `1e-12` of every vector real and positive.
    pub fn with_phase_convention(&self) -> Self {
        let vectors = self
            .vectors
            .iter()
            .map(|v| match v.iter().find(|z| z.norm() > PHASE_EPS) {
                Some(lead) => {
                    let phase = lead.conj() / lead.norm();
                    v.iter().map(|z| z * phase).collect()
                }
                None => v.clone(),
            })
            .collect();
        Self { vectors }
    }

    /// As sets of rays: every vector of `self` matches one of `other` up to phase.
    pub fn same_rays(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .vectors
                .iter()
                .all(|u| other.vectors.iter().any(|v| (inner(u, v).norm() - 1.0).abs() < tol))
    }
}

impl Serialize for Basis {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let vs: Vec<Vec<[f64; 2]>> = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        vs.serialize(serializer)
    }
}

/// A list of bases of a common dimension, meant to be pairwise unbiased.
#[derive(Debug, Clone, PartialEq)]
pub struct MubFamily {
    dim: usize,
    bases: Vec<Basis>,
}

/// Outcome of [`verify_unbiased`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnbiasedReport {
    pub max_deviation: f64,
    pub ok: bool,
}

impl MubFamily {
    /// Requires equal dimensions only; use [`MubFamily::new`] to also enforce
    /// unbiasedness.
    pub fn from_bases(bases: Vec<Basis>) -> Result<Self> {
        let dim = bases
            .first()
            .map(Basis::dim)
            .ok_or_else(|| Error::InvalidArgument("empty basis family".into()))?;
        if bases.iter().any(|b| b.dim() != dim) {
            return Err(Error::Dimension("bases of different dimensions".into()));
        }
        Ok(Self { dim, bases })
    }

    pub fn new(bases: Vec<Basis>) -> Result<Self> {
        let fam = Self::from_bases(bases)?;
        let report = verify_unbiased(&fam);
        if !report.ok {
            return Err(Error::validation("mutually unbiased", report.max_deviation));
        }
        Ok(fam)
    }

    /// Canonical Pauli eigenbases in `(x, y, z)` order with outcomes `(+, −)`,
    /// `(+i, −i)` and `(0, 1)`.
    pub fn pauli() -> Self {
        let s = FRAC_1_SQRT_2;
        let x = vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]];
        let y = vec![vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]];
        let z = Basis::computational(2);
        Self {
            dim: 2,
            bases: vec![Basis { vectors: x }, Basis { vectors: y }, z],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self, k: usize) -> &Basis {
        &self.bases[k]
    }

    pub fn with_phase_convention(&self) -> Self {
        Self {
            dim: self.dim,
            bases: self.bases.iter().map(Basis::with_phase_convention).collect(),
        }
    }

    /// Returns a copy with basis `k` swapped for `basis`.
    pub fn replace_basis(&self, k: usize, basis: Basis) -> Result<Self> {
        let mut bases = self.bases.clone();
        *bases
            .get_mut(k)
            .ok_or_else(|| Error::InvalidArgument(format!("no basis {k}")))? = basis;
        Self::from_bases(bases)
    }
}

impl Serialize for MubFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MubFamily", 2)?;
        s.serialize_field("dim", &self.dim)?;
        s.serialize_field("bases", &self.bases)?;
        s.end()
    }
}

/// Eigenbases of `σ₁(θ,φ), σ₂(θ,φ), σ₃(θ,φ)` in `(x, y, z)` order.
///
/// The rotated computational basis is
/// `|0(θ,φ)⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` and
/// `|1(θ,φ)⟩ = −sin(θ/2)|0⟩ + e^{iφ} cos(θ/2)|1⟩`; the x and y bases are
/// `(|0⟩ ± |1⟩)/√2` and `(|0⟩ ± i|1⟩)/√2` in that frame, so `(0, 0)` gives
/// exactly [`MubFamily::pauli`]. Vectors are left
/// exactly as these formulas give them (smooth in θ and φ); apply
/// [`MubFamily::with_phase_convention`] for serialization.
pub fn rotated_qubit_mubs(theta: f64, phi: f64) -> MubFamily {
    let (sh, ch) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let zero = [c(ch, 0.0), e * sh];
    let one = [c(-sh, 0.0), e * ch];
    let s = FRAC_1_SQRT_2;
    let i = c(0.0, 1.0);
    let combo = |w: Complex64| -> Vec<Complex64> {
        vec![(zero[0] + w * one[0]) * s, (zero[1] + w * one[1]) * s]
    };
    let x = vec![combo(c(1.0, 0.0)), combo(c(-1.0, 0.0))];
    let y = vec![combo(i), combo(-i)];
    let z = vec![zero.to_vec(), one.to_vec()];
    MubFamily {
        dim: 2,
        bases: vec![Basis { vectors: x }, Basis { vectors: y }, Basis { vectors: z }],
    }
}

/// `d + 1` MUBs in a supported prime-power dimension, computational basis first.
pub fn mubs_prime_power(d: usize) -> Result<MubFamily> {
    let fam = match d {
        2 => {
            let p = MubFamily::pauli();
            MubFamily {
                dim: 2,
                bases: vec![p.bases[2].clone(), p.bases[0].clone(), p.bases[1].clone()],
            }
        }
        4 => z4_quadratic_family(2, &KERDOCK_2),
        8 => z4_quadratic_family(3, &KERDOCK_3),
        3 | 5 | 7 | 9 | 25 => odd_prime_power_family(d)?,
        _ => {
            return Err(Error::UnsupportedDimension {
                dim: d,
                supported: SUPPORTED_DIMS.to_vec(),
            })
        }
    };
    Ok(fam.with_phase_convention())
}

/// `|v_{b,a}⟩ = d^{-1/2} Σ_x ω^{tr(b x² + a x)} |x⟩`, `ω = e^{2πi/p}`, one basis per `b`.
fn odd_prime_power_family(d: usize) -> Result<MubFamily> {
    let spec = Arc::new(FieldSpec::for_order(d)?);
    let t = FieldTables::new(&spec);
    let p = t.characteristic as f64;
    let norm = 1.0 / (d as f64).sqrt();
    let roots: Vec<Complex64> = (0..t.characteristic)
        .map(|m| Complex64::from_polar(norm, 2.0 * PI * m as f64 / p))
        .collect();
    let mut bases = vec![Basis::computational(d)];
    for b in 0..d {
        let vectors = (0..d)
            .map(|a| {
                (0..d)
                    .map(|x| {
                        let bxx = t.mul(b, t.mul(x, x));
                        let ax = t.mul(a, x);
                        roots[t.trace(t.add(bxx, ax)) as usize]
                    })
                    .collect()
            })
            .collect();
        bases.push(Basis { vectors });
    }
    MubFamily::from_bases(bases)
}

/// Binary symmetric `2×2` matrices with pairwise invertible differences.
const KERDOCK_2: [[[u8; 2]; 2]; 4] = [
    [[0, 0], [0, 0]],
    [[0, 1], [1, 1]],
    [[1, 0], [0, 1]],
    [[1, 1], [1, 0]],
];

/// Binary symmetric `3×3` matrices with pairwise invertible differences.
const KERDOCK_3: [[[u8; 3]; 3]; 8] = [
    [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
    [[0, 1, 0], [1, 1, 0], [0, 0, 1]],
    [[0, 1, 1], [1, 0, 0], [1, 0, 1]],
    [[1, 0, 0], [0, 0, 1], [0, 1, 1]],
    [[1, 0, 1], [0, 1, 1], [1, 1, 1]],
    [[1, 1, 0], [1, 1, 1], [0, 1, 0]],
    [[1, 1, 1], [1, 0, 1], [1, 1, 0]],
];

/// `|v_{B,a}⟩ = 2^{-n/2} Σ_x i^{xᵀBx + 2a·x} |x⟩` with the exponent taken over
/// the integers mod 4. Entries are exact powers of `i` scaled by `2^{-n/2}`.
fn z4_quadratic_family<const N: usize>(n: usize, kerdock: &[[[u8; N]; N]]) -> MubFamily {
    debug_assert_eq!(n, N);
    let d = 1usize << n;
    let norm = 1.0 / (d as f64).sqrt();
    let powers = [c(norm, 0.0), c(0.0, norm), c(-norm, 0.0), c(0.0, -norm)];
    // bit i of x (most significant first) is coordinate i
    let bit = |x: usize, i: usize| ((x >> (n - 1 - i)) & 1) as u32;
    let mut bases = vec![Basis::computational(d)];
    for m in kerdock {
        let vectors = (0..d)
            .map(|a| {
                (0..d)
                    .map(|x| {
                        let mut e = 0u32;
                        for i in 0..n {
                            for j in 0..n {
                                e += bit(x, i) * m[i][j] as u32 * bit(x, j);
                            }
                            e += 2 * bit(a, i) * bit(x, i);
                        }
                        powers[(e % 4) as usize]
                    })
                    .collect()
            })
            .collect();
        bases.push(Basis { vectors });
    }
    MubFamily { dim: d, bases }
}

/// Largest deviation `| |⟨u|v⟩|² − 1/d |` over vectors from distinct bases.
pub fn verify_unbiased(fam: &MubFamily) -> UnbiasedReport {
    let target = 1.0 / fam.dim as f64;
    let mut max_dev = 0.0_f64;
    for (i, bi) in fam.bases.iter().enumerate() {
        for bj in &fam.bases[i + 1..] {
            for u in &bi.vectors {
                for v in &bj.vectors {
                    max_dev = max_dev.max((inner(u, v).norm_sqr() - target).abs());
                }
            }
        }
    }
    UnbiasedReport {
        max_deviation: max_dev,
        ok: max_dev <= ORTHONORMAL_TOL,
    }
}
