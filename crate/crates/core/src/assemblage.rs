//! Bob's conditional-state assemblages and the hidden-variable models that
//! generate them.
//!
//! An assemblage is the table `σ_{a|x}` of unnormalized states Bob holds after
//! Alice announces setting `x` and outcome `a`; `p(a|x) = Tr σ_{a|x}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::Basis;
use crate::qmatrix::{
    eigenvalues_hermitian, ComplexMatrix, DensityMatrix, DEFAULT_TOLERANCE,
};

/// Probability below which a conditional state is treated as undefined.
pub const NULL_OUTCOME: f64 = 1e-12;

const SIGNALING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assemblage {
    dim: usize,
    settings: usize,
    outcomes: usize,
    sigma: Vec<Vec<ComplexMatrix>>,
    p: Vec<Vec<f64>>,
}

impl Assemblage {
    /// Builds from `sigma[x][a]`; every setting needs `d` outcomes of `d×d` matrices.
    pub fn from_sigma(sigma: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let dim = sigma
            .first()
            .and_then(|s| s.first())
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::InvalidArgument("empty assemblage".into()))?;
        for (x, row) in sigma.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Dimension(format!(
                    "setting {x} has {} outcomes, expected {dim}",
                    row.len()
                )));
            }
            if row.iter().any(|m| m.rows() != dim || m.cols() != dim) {
                return Err(Error::Dimension(format!("setting {x} has a non-{dim}x{dim} entry")));
            }
        }
        let p = sigma
            .iter()
            .map(|row| row.iter().map(|m| m.trace().re).collect())
            .collect();
        Ok(Self {
            dim,
            settings: sigma.len(),
            outcomes: dim,
            sigma,
            p,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn sigma(&self, x: usize, a: usize) -> &ComplexMatrix {
        &self.sigma[x][a]
    }

    pub fn prob(&self, x: usize, a: usize) -> f64 {
        self.p[x][a]
    }

    /// `σ_{a|x} / p(a|x)`, or `None` when `p(a|x) < 1e-12`.
    pub fn conditional_state(&self, x: usize, a: usize) -> Option<DensityMatrix> {
        let p = self.p[x][a];
        (p >= NULL_OUTCOME)
            .then(|| DensityMatrix::from_trusted(self.sigma[x][a].scale(1.0 / p), None))
    }

    /// `Σ_a σ_{a|x}`.
    pub fn marginal(&self, x: usize) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for m in &self.sigma[x] {
            acc = &acc + m;
        }
        acc
    }
}

/// `σ_{a|x} = Tr_A[(|e_{x,a}⟩⟨e_{x,a}| ⊗ I) ρ_AB]` for Alice's rank-one projective measurements.
pub fn steer(rho_ab: &DensityMatrix, alice_bases: &[Basis]) -> Result<Assemblage> {
    let (da, db) = rho_ab
        .dims()
        .ok_or_else(|| Error::Dimension("steering needs a bipartite state".into()))?;
    if alice_bases.is_empty() {
        return Err(Error::InvalidArgument("no measurement bases".into()));
    }
    if let Some(b) = alice_bases.iter().find(|b| b.dim() != da) {
        return Err(Error::Dimension(format!(
            "Alice's basis has dimension {}, her subsystem {da}",
            b.dim()
        )));
    }
    if da != db {
        return Err(Error::Dimension(format!(
            "outcome count {da} must equal Bob's dimension {db}"
        )));
    }
    let m = rho_ab.matrix();
    let sigma = alice_bases
        .iter()
        .map(|basis| {
            basis
                .vectors()
                .iter()
                .map(|v| {
                    ComplexMatrix::from_fn(db, db, |j, l| {
                        let mut acc = num_complex::Complex64::default();
                        for (k, vk) in v.iter().enumerate() {
                            let ck = vk.conj();
                            for (i, vi) in v.iter().enumerate() {
                                acc += ck * vi * m[(k * db + j, i * db + l)];
                            }
                        }
                        acc
                    })
                })
                .collect()
        })
        .collect();
    Assemblage::from_sigma(sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "LHS")]
    Lhs,
    #[serde(rename = "SQI1")]
    Sqi1,
}

/// Bob's hidden states: one per `λ` (LHS) or one per `(λ, a)` (1SQI).
#[derive(Debug, Clone, PartialEq)]
pub enum HiddenStates {
    Lhs(Vec<DensityMatrix>),
    Sqi1(Vec<Vec<DensityMatrix>>),
}

/// Explicit hidden-variable ensemble `{P_λ, p(a|x,λ), ρ_λ or ρ_{λ,a}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelEnsemble {
    weights: Vec<f64>,
    /// `responses[λ][x][a]`
    responses: Vec<Vec<Vec<f64>>>,
    states: HiddenStates,
}

impl ModelEnsemble {
    pub fn new(
        weights: Vec<f64>,
        responses: Vec<Vec<Vec<f64>>>,
        states: HiddenStates,
    ) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidArgument("ensemble needs at least one λ".into()));
        }
        if weights.iter().any(|&w| w.is_nan() || w < 0.0) {
            return Err(Error::validation("nonnegative weights", 0.0));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > DEFAULT_TOLERANCE {
            return Err(Error::validation("weights sum to 1", (total - 1.0).abs()));
        }
        if responses.len() != n {
            return Err(Error::IncompleteModel(format!(
                "{} response tables for {n} hidden values",
                responses.len()
            )));
        }
        let dim = match &states {
            HiddenStates::Lhs(s) => {
                if s.len() != n {
                    return Err(Error::IncompleteModel("one state per λ required".into()));
                }
                s[0].dim()
            }
            HiddenStates::Sqi1(s) => {
                if s.len() != n {
                    return Err(Error::IncompleteModel("one state table per λ required".into()));
                }
                let d = s[0].first().map(DensityMatrix::dim).unwrap_or(0);
                if s.iter().any(|row| row.len() != d) {
                    return Err(Error::IncompleteModel("one state per (λ, a) required".into()));
                }
                d
            }
        };
        let all_dims_ok = match &states {
            HiddenStates::Lhs(s) => s.iter().all(|r| r.dim() == dim),
            HiddenStates::Sqi1(s) => s.iter().flatten().all(|r| r.dim() == dim),
        };
        if !all_dims_ok {
            return Err(Error::Dimension("hidden states of mixed dimension".into()));
        }
        for (l, table) in responses.iter().enumerate() {
            for (x, dist) in table.iter().enumerate() {
                if dist.len() != dim {
                    return Err(Error::IncompleteModel(format!(
                        "response p(·|{x},{l}) has {} outcomes, expected {dim}",
                        dist.len()
                    )));
                }
                let s: f64 = dist.iter().sum();
                if dist.iter().any(|&q| q < -DEFAULT_TOLERANCE) || (s - 1.0).abs() > DEFAULT_TOLERANCE
                {
                    return Err(Error::validation(
                        format!("response p(·|{x},{l}) is a distribution"),
                        (s - 1.0).abs(),
                    ));
                }
            }
        }
        Ok(Self {
            weights,
            responses,
            states,
        })
    }

    pub fn kind(&self) -> ModelKind {
        match self.states {
            HiddenStates::Lhs(_) => ModelKind::Lhs,
            HiddenStates::Sqi1(_) => ModelKind::Sqi1,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.states {
            HiddenStates::Lhs(s) => s[0].dim(),
            HiddenStates::Sqi1(s) => s[0][0].dim(),
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn responses(&self) -> &[Vec<Vec<f64>>] {
        &self.responses
    }

    pub fn states(&self) -> &HiddenStates {
        &self.states
    }

    fn hidden_state(&self, lambda: usize, a: usize) -> &DensityMatrix {
        match &self.states {
            HiddenStates::Lhs(s) => &s[lambda],
            HiddenStates::Sqi1(s) => &s[lambda][a],
        }
    }
}

/// `σ_{a|x} = Σ_λ P_λ p(a|x,λ) ρ_λ` (LHS) or `Σ_λ P_λ p(a|x,λ) ρ_{λ,a}` (1SQI).
pub fn realize(model: &ModelEnsemble, settings: usize) -> Result<Assemblage> {
    let d = model.dim();
    for (l, table) in model.responses.iter().enumerate() {
        if table.len() < settings {
            return Err(Error::IncompleteModel(format!(
                "λ = {l} defines {} settings, {settings} requested",
                table.len()
            )));
        }
    }
    let sigma = (0..settings)
        .map(|x| {
            (0..d)
                .map(|a| {
                    let mut acc = ComplexMatrix::zeros(d, d);
                    for (l, &w) in model.weights.iter().enumerate() {
                        let coef = w * model.responses[l][x][a];
                        if coef != 0.0 {
                            acc = &acc + &model.hidden_state(l, a).matrix().scale(coef);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Assemblage::from_sigma(sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Positivity, normalization and no-signaling.
    Strict,
    /// Positivity and per-setting normalization only.
    Sqi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub hermiticity: f64,
    /// Magnitude of the most negative eigenvalue over all `σ_{a|x}` (0 if none).
    pub positivity: f64,
    /// `max_x |Σ_a p(a|x) − 1|`.
    pub normalization: f64,
    /// `max_{x,x'} max |Σ_a σ_{a|x} − Σ_a σ_{a|x'}|`, computed in strict mode only.
    pub signaling: Option<f64>,
    pub ok: bool,
}

pub fn validate(asm: &Assemblage, mode: ValidationMode) -> ValidationReport {
    let mut herm = 0.0_f64;
    let mut neg = 0.0_f64;
    for row in &asm.sigma {
        for m in row {
            let h = m.hermiticity_deviation();
            herm = herm.max(h);
            if h <= DEFAULT_TOLERANCE {
                let min = eigenvalues_hermitian(m)
                    .ok()
                    .and_then(|v| v.last().copied())
                    .unwrap_or(0.0);
                neg = neg.max(-min);
            }
        }
    }
    let normalization = asm
        .p
        .iter()
        .map(|row| (row.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max);
    let signaling = (mode == ValidationMode::Strict).then(|| {
        let first = asm.marginal(0);
        (1..asm.settings)
            .map(|x| asm.marginal(x).max_abs_diff(&first))
            .fold(0.0, f64::max)
    });
    let ok = herm <= DEFAULT_TOLERANCE
        && neg <= DEFAULT_TOLERANCE
        && normalization <= DEFAULT_TOLERANCE
        && signaling.is_none_or(|s| s <= SIGNALING_TOL);
    ValidationReport {
        hermiticity: herm,
        positivity: neg,
        normalization,
        signaling,
        ok,
    }
}
