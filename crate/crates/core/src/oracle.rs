//! Seeded samplers, random model ensembles and the explicit saturating
//! constructions used to cross-check the analytic bounds.
//!
//! All randomness flows from `ChaCha8Rng::seed_from_u64(seed + trial)`, so a
//! parallel sweep reproduces a serial one bit for bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assemblage::{realize, steer, HiddenStates, ModelEnsemble, ModelKind};
use crate::coherence::{CoherenceMeasure, MeasureKind};
use crate::error::{Error, Result};
use crate::mub::{mubs_prime_power, rotated_qubit_mubs, MubFamily};
use crate::naqc::{s_quantity, s_term, IndexPattern};
use crate::optimizer::optimize_s;
use crate::qmatrix::{c, ComplexMatrix, DensityMatrix, MAX_DIM};

/// Cap on the number of hidden values in a random ensemble.
pub const MAX_HIDDEN: usize = 8;

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial))
}

/// Standard normal variate by the Marsaglia polar method.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let v: f64 = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(gaussian(rng), gaussian(rng))
}

/// Uniform point on the probability simplex with `n` vertices.
pub fn flat_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    HaarPure,
    GinibreMixed,
}

/// Haar-random unit vector in `C^d`.
pub fn haar_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

pub fn sample_state<R: Rng + ?Sized>(rng: &mut R, d: usize, kind: StateKind) -> DensityMatrix {
    match kind {
        StateKind::HaarPure => {
            let psi = haar_vector(rng, d);
            DensityMatrix::from_trusted(ComplexMatrix::outer(&psi), None)
        }
        StateKind::GinibreMixed => {
            let entries = (0..d * d).map(|_| complex_gaussian(rng)).collect();
            let g = ComplexMatrix::new(d, d, entries).expect("d·d entries");
            let w = &g * &g.adjoint();
            let tr = w.trace().re;
            let mut m = w.scale(1.0 / tr);
            // exact hermiticity
            for i in 0..d {
                m[(i, i)] = c(m[(i, i)].re, 0.0);
                for j in i + 1..d {
                    let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            DensityMatrix::from_trusted(m, None)
        }
    }
}

/// A seeded random state of dimension `d`.
pub fn random_state(d: usize, kind: StateKind, seed: u64) -> Result<DensityMatrix> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(format!("dimension {d} outside 1..={MAX_DIM}")));
    }
    Ok(sample_state(&mut trial_rng(seed, 0), d, kind))
}

/// A seeded random two-qubit state.
pub fn random_two_qubit(kind: StateKind, seed: u64) -> DensityMatrix {
    sample_state(&mut trial_rng(seed, 0), 4, kind)
        .with_dims((2, 2))
        .expect("4 = 2·2")
}

/// Bob's family for sweeps: Pauli order `(x, y, z)` for qubits, the
/// prime-power construction otherwise.
pub fn sweep_family(d: usize) -> Result<MubFamily> {
    if d == 2 {
        Ok(MubFamily::pauli())
    } else {
        mubs_prime_power(d)
    }
}

/// Random ensemble of the given kind. `variant` picks one of the four
/// (deterministic | stochastic responses) × (pure | mixed states) mixes.
pub fn random_ensemble<R: Rng + ?Sized>(
    rng: &mut R,
    kind: ModelKind,
    d: usize,
    settings: usize,
    variant: usize,
) -> ModelEnsemble {
    let deterministic = variant.is_multiple_of(2);
    let state_kind = if (variant / 2).is_multiple_of(2) {
        StateKind::HaarPure
    } else {
        StateKind::GinibreMixed
    };
    let n = rng.gen_range(1..=MAX_HIDDEN);
    let weights = flat_simplex(rng, n);
    let responses: Vec<Vec<Vec<f64>>> = (0..n)
        .map(|_| {
            (0..settings)
                .map(|_| {
                    if deterministic {
                        let a = rng.gen_range(0..d);
                        (0..d).map(|b| if a == b { 1.0 } else { 0.0 }).collect()
                    } else {
                        flat_simplex(rng, d)
                    }
                })
                .collect()
        })
        .collect();
    let states = match kind {
        ModelKind::Lhs => {
            HiddenStates::Lhs((0..n).map(|_| sample_state(rng, d, state_kind)).collect())
        }
        ModelKind::Sqi1 => HiddenStates::Sqi1(
            (0..n)
                .map(|_| (0..d).map(|_| sample_state(rng, d, state_kind)).collect())
                .collect(),
        ),
    };
    ModelEnsemble::new(weights, responses, states).expect("sampled ensemble is well formed")
}

/// A sweep pool member: one ensemble, or one ensemble per coherence basis
/// whose `k`-th term is scored against basis `k` only.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidate {
    Single(ModelEnsemble),
    PerBasis(Vec<ModelEnsemble>),
}

impl Candidate {
    pub fn kind(&self) -> ModelKind {
        match self {
            Candidate::Single(m) => m.kind(),
            Candidate::PerBasis(v) => v[0].kind(),
        }
    }

    /// `S_(i≠j≠k)` of the candidate against `fam`.
    pub fn s_value(&self, fam: &MubFamily, measure: CoherenceMeasure) -> Result<f64> {
        let n = fam.len();
        match self {
            Candidate::Single(m) => {
                s_quantity(&realize(m, n)?, fam, measure, IndexPattern::Distinct)
            }
            Candidate::PerBasis(v) => {
                if v.len() != n {
                    return Err(Error::IncompleteModel(format!(
                        "{} per-basis ensembles for {n} bases",
                        v.len()
                    )));
                }
                let mut total = 0.0;
                for (k, m) in v.iter().enumerate() {
                    total += s_term(&realize(m, n)?, fam, measure, IndexPattern::Distinct, k)?;
                }
                Ok(total)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct LhsDemo {
    pub state: DensityMatrix,
    pub s_value: f64,
}

/// `|0⟩⟨0| ⊗ |+⟩⟨+|`.
pub fn product_zero_plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::tensor(
        &DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).expect("unit vector"),
        &DensityMatrix::pure(&[c(h, 0.0), c(h, 0.0)]).expect("unit vector"),
    )
}

/// The product state steered in the Pauli bases; every conditional state
/// is `|+⟩` and `S = 4`.
pub fn lhs_tightness_demo() -> LhsDemo {
    lhs_tightness_demo_with(CoherenceMeasure::l1(), None)
        .expect("fixed construction")
}

/// As [`lhs_tightness_demo`] with a chosen measure and optional frame.
pub fn lhs_tightness_demo_with(
    measure: CoherenceMeasure,
    frame: Option<(f64, f64)>,
) -> Result<LhsDemo> {
    let state = product_zero_plus();
    let fam = match frame {
        None => MubFamily::pauli(),
        Some((t, p)) => rotated_qubit_mubs(t, p),
    };
    let asm = steer(&state, fam.bases())?;
    let s_value = s_quantity(&asm, &fam, measure, IndexPattern::Distinct)?;
    Ok(LhsDemo { state, s_value })
}

/// Single-λ LHS ensemble with hidden state `|+⟩`, realizing the same
/// assemblage as the product-state demo.
pub fn lhs_demo_ensemble() -> ModelEnsemble {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DensityMatrix::pure(&[c(h, 0.0), c(h, 0.0)]).expect("unit vector");
    ModelEnsemble::new(
        vec![1.0],
        vec![vec![vec![0.5, 0.5]; 3]],
        HiddenStates::Lhs(vec![plus]),
    )
    .expect("fixed construction")
}

#[derive(Debug, Clone)]
pub struct SqiDemo {
    /// Ensemble `k` is scored against coherence basis `k`.
    pub ensembles: Vec<ModelEnsemble>,
    pub terms: Vec<f64>,
    pub s_value: f64,
}

impl SqiDemo {
    pub fn candidate(&self) -> Candidate {
        Candidate::PerBasis(self.ensembles.clone())
    }
}

/// Per-basis 1SQI strategy for the Pauli family. For basis `k` both
/// outcome states are eigenstates of an axis other than `k` with full
/// coherence in the two remaining bases: `|0⟩, |1⟩` for `k = x, y` and
/// `|+⟩, |−⟩` for `k = z`. Each term is 2 and the total is 6.
pub fn sqi_tightness_demo() -> SqiDemo {
    sqi_tightness_demo_with(CoherenceMeasure::l1()).expect("fixed construction")
}

pub fn sqi_tightness_demo_with(measure: CoherenceMeasure) -> Result<SqiDemo> {
    let fam = MubFamily::pauli();
    let z = fam.basis(2);
    let x = fam.basis(0);
    let ensembles: Vec<ModelEnsemble> = (0..3)
        .map(|k| {
            let b = if k == 2 { x } else { z };
            let states = vec![(0..2).map(|a| DensityMatrix::from_trusted(b.projector(a), None)).collect()];
            ModelEnsemble::new(vec![1.0], vec![vec![vec![0.5, 0.5]; 3]], HiddenStates::Sqi1(states))
        })
        .collect::<Result<_>>()?;
    let mut terms = Vec::with_capacity(3);
    for (k, m) in ensembles.iter().enumerate() {
        terms.push(s_term(&realize(m, 3)?, &fam, measure, IndexPattern::Distinct, k)?);
    }
    let s_value = terms.iter().sum();
    Ok(SqiDemo {
        ensembles,
        terms,
        s_value,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub kind: ModelKind,
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_s: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub summary: SweepSummary,
    pub argmax: Candidate,
    /// Random trial that achieved the maximum; `None` for an injected candidate.
    pub argmax_trial: Option<usize>,
}

pub fn sweep_models(kind: ModelKind, d: usize, trials: usize, seed: u64) -> Result<SweepResult> {
    sweep_models_with(kind, d, trials, seed, &[])
}

/// Maximum of `S_(i≠j≠k)` over `trials` random ensembles plus `injected`.
/// The measure is the l1-norm, normalized for `d ≥ 3`.
pub fn sweep_models_with(
    kind: ModelKind,
    d: usize,
    trials: usize,
    seed: u64,
    injected: &[Candidate],
) -> Result<SweepResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if let Some(bad) = injected.iter().find(|cand| cand.kind() != kind) {
        return Err(Error::InvalidArgument(format!(
            "injected {:?} candidate in a {kind:?} sweep",
            bad.kind()
        )));
    }
    let fam = sweep_family(d)?;
    let measure = CoherenceMeasure::for_dim(MeasureKind::L1, d);
    let settings = fam.len();

    let sample = |t: usize| {
        random_ensemble(&mut trial_rng(seed, t as u64), kind, d, settings, t)
    };
    let scores: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| Candidate::Single(sample(t)).s_value(&fam, measure))
        .collect::<Result<_>>()?;
    let injected_scores: Vec<f64> = injected
        .iter()
        .map(|cand| cand.s_value(&fam, measure))
        .collect::<Result<_>>()?;

    // lowest index wins ties; injected candidates rank after random trials
    let mut best: (f64, Option<usize>, Option<usize>) = (scores[0], Some(0), None);
    for (t, &s) in scores.iter().enumerate() {
        if s > best.0 {
            best = (s, Some(t), None);
        }
    }
    for (i, &s) in injected_scores.iter().enumerate() {
        if s > best.0 {
            best = (s, None, Some(i));
        }
    }
    let (max_s, trial, inj) = best;
    let argmax = match (trial, inj) {
        (_, Some(i)) => injected[i].clone(),
        (Some(t), None) => Candidate::Single(sample(t)),
        (None, None) => unreachable!("best always has a source"),
    };
    Ok(SweepResult {
        summary: SweepSummary {
            kind,
            d,
            trials,
            seed,
            max_s,
        },
        argmax,
        argmax_trial: if inj.is_some() { None } else { trial },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantumSweep {
    pub trials: usize,
    pub seed: u64,
    pub refined: usize,
    /// Largest `S` at the sampled frames, before refinement.
    pub max_sampled: f64,
    /// Largest `S` after optimizing the frame of the top `refined` states.
    pub max_refined: f64,
    /// Trial index of the state reaching `max_refined`.
    pub argmax_trial: usize,
}

/// Trial `t` of a two-qubit sweep: the state alternates between Haar pure
/// and Ginibre mixed, the frame is uniform on the sphere.
pub fn quantum_trial(seed: u64, t: usize) -> (DensityMatrix, f64, f64) {
    let mut rng = trial_rng(seed, t as u64);
    let kind = if t.is_multiple_of(2) {
        StateKind::HaarPure
    } else {
        StateKind::GinibreMixed
    };
    let rho = sample_state(&mut rng, 4, kind).with_dims((2, 2)).expect("4 = 2·2");
    let theta = (1.0 - 2.0 * rng.gen::<f64>()).acos();
    let phi = 2.0 * std::f64::consts::PI * rng.gen::<f64>();
    (rho, theta, phi)
}

/// `S_(i≠j≠k)` over random two-qubit states at random frames, then a full
/// frame optimization of the `refine` best states.
pub fn sweep_quantum(
    trials: usize,
    seed: u64,
    measure: CoherenceMeasure,
    refine: usize,
) -> Result<QuantumSweep> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let scores: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let (rho, theta, phi) = quantum_trial(seed, t);
            let fam = rotated_qubit_mubs(theta, phi);
            s_quantity(&steer(&rho, fam.bases())?, &fam, measure, IndexPattern::Distinct)
        })
        .collect::<Result<_>>()?;
    let mut order: Vec<usize> = (0..trials).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let top = &order[..refine.min(trials)];
    let refined: Vec<f64> = top
        .par_iter()
        .map(|&t| optimize_s(&quantum_trial(seed, t).0, measure).map(|r| r.s_max))
        .collect::<Result<_>>()?;
    let max_sampled = scores[order[0]];
    let (mut max_refined, mut argmax_trial) = (max_sampled, order[0]);
    for (&t, &s) in top.iter().zip(&refined) {
        if s > max_refined {
            (max_refined, argmax_trial) = (s, t);
        }
    }
    Ok(QuantumSweep {
        trials,
        seed,
        refined: top.len(),
        max_sampled,
        max_refined,
        argmax_trial,
    })
}
