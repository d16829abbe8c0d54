//! Basis-dependent coherence: the l1-norm and the relative entropy of coherence.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::{Basis, MubFamily};
use crate::qmatrix::{
    binary_entropy, eigenvalues_hermitian, shannon_entropy, BlochVector, DensityMatrix,
};

const CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    L1,
    RelativeEntropy,
}

/// A coherence quantifier. `normalized` divides the l1-norm by `d − 1` and is
/// ignored by the relative entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoherenceMeasure {
    pub kind: MeasureKind,
    pub normalized: bool,
}

impl CoherenceMeasure {
    pub const fn l1() -> Self {
        Self {
            kind: MeasureKind::L1,
            normalized: false,
        }
    }

    pub const fn l1_normalized() -> Self {
        Self {
            kind: MeasureKind::L1,
            normalized: true,
        }
    }

    pub const fn relative_entropy() -> Self {
        Self {
            kind: MeasureKind::RelativeEntropy,
            normalized: false,
        }
    }

    /// The measure used for `S` in dimension `d`: normalization is on for `d ≥ 3`.
    pub const fn for_dim(kind: MeasureKind, d: usize) -> Self {
        Self {
            kind,
            normalized: matches!(kind, MeasureKind::L1) && d >= 3,
        }
    }

    /// True when the l1 value is divided by `d − 1` in dimension `d`.
    pub fn divides_by_d_minus_1(&self, d: usize) -> bool {
        self.kind == MeasureKind::L1 && self.normalized && d > 2
    }
}

impl fmt::Display for CoherenceMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.normalized) {
            (MeasureKind::L1, false) => write!(f, "l1"),
            (MeasureKind::L1, true) => write!(f, "l1_normalized"),
            (MeasureKind::RelativeEntropy, _) => write!(f, "relent"),
        }
    }
}

/// Single-system ceiling `Ω` on `Σ_k C_k²` over a complete MUB family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaBound {
    pub measure: CoherenceMeasure,
    pub dim: usize,
    pub value: f64,
}

impl OmegaBound {
    /// `Ω = 2` for qubits under either measure, `Ω = d` for the normalized
    /// l1-norm in higher dimension. Other combinations have no known ceiling.
    pub fn new(measure: CoherenceMeasure, dim: usize) -> Result<Self> {
        let value = match (dim, measure.kind) {
            (2, _) => 2.0,
            (d, MeasureKind::L1) if d > 2 && measure.normalized => d as f64,
            (d, _) => {
                return Err(Error::NotEstablished(format!(
                    "no coherence complementarity ceiling for {measure} in dimension {d}"
                )))
            }
        };
        Ok(Self {
            measure,
            dim,
            value,
        })
    }
}

fn clamp_zero(x: f64) -> f64 {
    if x.abs() < CLAMP {
        0.0
    } else {
        x
    }
}

/// Coherence of `rho` in `basis`.
///
/// l1: `Σ_{m≠n} |⟨m|ρ|n⟩|`, optionally divided by `d − 1`.
/// Relative entropy: `S(Δ(ρ)) − S(ρ)` where `Δ` dephases in `basis`.
pub fn coherence(rho: &DensityMatrix, basis: &Basis, measure: CoherenceMeasure) -> Result<f64> {
    let d = rho.dim();
    if basis.dim() != d {
        return Err(Error::Dimension(format!(
            "basis dimension {} does not match state dimension {d}",
            basis.dim()
        )));
    }
    let m = rho.matrix();
    let value = match measure.kind {
        MeasureKind::L1 => {
            let mut sum = 0.0;
            for i in 0..d {
                for j in i + 1..d {
                    sum += 2.0 * m.sandwich(basis.vector(i), basis.vector(j)).norm();
                }
            }
            if measure.divides_by_d_minus_1(d) {
                sum / (d - 1) as f64
            } else {
                sum
            }
        }
        MeasureKind::RelativeEntropy => {
            let diag: Vec<f64> = basis
                .vectors()
                .iter()
                .map(|v| m.sandwich(v, v).re)
                .collect();
            let spectrum = eigenvalues_hermitian(m)?;
            shannon_entropy(&diag) - shannon_entropy(&spectrum)
        }
    };
    Ok(clamp_zero(value).max(0.0))
}

/// Qubit axis selecting the eigenbasis of `σ₁, σ₂` or `σ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// `C_k^{l1} = √(r_i² + r_j²)` over the two components other than `axis`.
pub fn qubit_l1_closed_form(r: BlochVector, axis: Axis) -> f64 {
    let comps = r.components();
    let k = axis.index();
    let sq: f64 = (0..3).filter(|&i| i != k).map(|i| comps[i] * comps[i]).sum();
    clamp_zero(sq.sqrt())
}

/// `C_k^{r} = H((1 + r_k)/2) − H((1 + |r⃗|)/2)`.
pub fn qubit_relative_entropy_closed_form(r: BlochVector, axis: Axis) -> f64 {
    let rk = r.components()[axis.index()];
    let value = binary_entropy(0.5 * (1.0 + rk)) - binary_entropy(0.5 * (1.0 + r.norm().min(1.0)));
    clamp_zero(value).max(0.0)
}

/// `Σ_k C_k²` over every basis of `fam`.
pub fn complementarity_sum(
    rho: &DensityMatrix,
    fam: &MubFamily,
    measure: CoherenceMeasure,
) -> Result<f64> {
    if fam.dim() != rho.dim() {
        return Err(Error::Dimension(format!(
            "family dimension {} does not match state dimension {}",
            fam.dim(),
            rho.dim()
        )));
    }
    fam.bases()
        .iter()
        .map(|b| coherence(rho, b, measure).map(|c| c * c))
        .sum()
}

/// Purity-resolved ceiling `d(d·P − 1)/(d − 1)` for the normalized l1-norm.
pub fn purity_bound(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    d * (d * rho.purity() - 1.0) / (d - 1.0)
}
