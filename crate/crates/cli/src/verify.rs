//! Randomized bound checks behind `naqc verify`.

use naqc_core::assemblage::ModelKind;
use naqc_core::coherence::{complementarity_sum, purity_bound, CoherenceMeasure, MeasureKind};
use naqc_core::mub::{mubs_prime_power, verify_unbiased, MubFamily, SUPPORTED_DIMS};
use naqc_core::naqc::{born_probabilities, f_sum};
use naqc_core::oracle::{sample_state, sweep_models, sweep_quantum, trial_rng, StateKind};
use naqc_core::qmatrix::DensityMatrix;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::print_json;
use crate::Suite;

const MODEL_TOL: f64 = 1e-9;
const QUANTUM_TOL: f64 = 1e-6;
const F_TOL: f64 = 1e-12;
const QUANTUM_REFINE: usize = 100;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub max_observed: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offending_trial: Option<usize>,
}

impl Check {
    fn new(name: impl Into<String>, max_observed: f64, argmax: Option<usize>, bound: f64, tolerance: f64) -> Self {
        let pass = max_observed <= bound + tolerance;
        Self {
            name: name.into(),
            max_observed,
            bound,
            tolerance,
            pass,
            offending_trial: if pass { None } else { argmax },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Largest value of `f` over per-trial states with the trial reaching it.
fn scan_states(
    trials: usize,
    seed: u64,
    d: usize,
    mut f: impl FnMut(&DensityMatrix) -> naqc_core::Result<f64>,
) -> CliResult<(f64, usize)> {
    let mut best = (f64::NEG_INFINITY, 0);
    for t in 0..trials {
        let kind = if t % 2 == 0 {
            StateKind::HaarPure
        } else {
            StateKind::GinibreMixed
        };
        let rho = sample_state(&mut trial_rng(seed, t as u64), d, kind);
        let v = f(&rho)?;
        if v > best.0 {
            best = (v, t);
        }
    }
    Ok(best)
}

fn complementarity_check(
    name: &str,
    trials: usize,
    seed: u64,
    d: usize,
    fam: &MubFamily,
    measure: CoherenceMeasure,
    bound: f64,
) -> CliResult<Check> {
    let (m, t) = scan_states(trials, seed, d, |rho| complementarity_sum(rho, fam, measure))?;
    Ok(Check::new(name, m, Some(t), bound, MODEL_TOL))
}

fn purity_check(trials: usize, seed: u64, d: usize) -> CliResult<Check> {
    let fam = mubs_prime_power(d)?;
    let measure = CoherenceMeasure::for_dim(MeasureKind::L1, d);
    let (m, t) = scan_states(trials, seed, d, |rho| {
        Ok(complementarity_sum(rho, &fam, measure)? - purity_bound(rho))
    })?;
    Ok(Check::new(format!("d{d}_purity_bound_excess"), m, Some(t), 0.0, MODEL_TOL))
}

fn f_check(trials: usize, seed: u64, d: usize, tol: f64) -> CliResult<Check> {
    let fam = if d == 2 { MubFamily::pauli() } else { mubs_prime_power(d)? };
    let (m, t) = scan_states(trials, seed, d, |rho| {
        let probs = born_probabilities(rho, &fam)?;
        Ok((0..fam.len()).map(|k| f_sum(&probs, k)).fold(f64::MIN, f64::max))
    })?;
    Ok(Check::new(format!("d{d}_f_sum"), m, Some(t), (d as f64 + 1.0) / 2.0, tol))
}

fn model_check(kind: ModelKind, d: usize, trials: usize, seed: u64, bound: f64) -> CliResult<Check> {
    let r = sweep_models(kind, d, trials, seed)?;
    let label = match kind {
        ModelKind::Lhs => "lhs",
        ModelKind::Sqi1 => "sqi",
    };
    Ok(Check::new(
        format!("d{d}_{label}_max_s"),
        r.summary.max_s,
        r.argmax_trial,
        bound,
        MODEL_TOL,
    ))
}

pub fn checks(suite: Suite, trials: usize, seed: u64) -> CliResult<Vec<Check>> {
    let pauli = MubFamily::pauli();
    Ok(match suite {
        Suite::Coherence => vec![
            complementarity_check("qubit_l1_complementarity", trials, seed, 2, &pauli, CoherenceMeasure::l1(), 2.0)?,
            complementarity_check(
                "qubit_relent_complementarity",
                trials,
                seed,
                2,
                &pauli,
                CoherenceMeasure::relative_entropy(),
                2.0,
            )?,
            purity_check(trials, seed, 3)?,
        ],
        Suite::Lhs => vec![model_check(ModelKind::Lhs, 2, trials, seed, 4.0)?],
        Suite::Sqi => vec![model_check(ModelKind::Sqi1, 2, trials, seed, 6.0)?],
        Suite::Quantum => [CoherenceMeasure::l1(), CoherenceMeasure::relative_entropy()]
            .into_iter()
            .map(|m| {
                let r = sweep_quantum(trials, seed, m, QUANTUM_REFINE.min(trials))?;
                Ok(Check::new(
                    format!("quantum_{m}_max_s"),
                    r.max_refined,
                    Some(r.argmax_trial),
                    6.0,
                    QUANTUM_TOL,
                ))
            })
            .collect::<CliResult<_>>()?,
        Suite::Qudit => vec![
            purity_check(trials, seed, 3)?,
            model_check(ModelKind::Lhs, 3, trials, seed, 18.0)?,
            model_check(ModelKind::Sqi1, 3, trials, seed, 24.0)?,
            f_check(trials, seed, 3, MODEL_TOL)?,
        ],
        Suite::Mub => SUPPORTED_DIMS
            .iter()
            .map(|&d| {
                let rep = verify_unbiased(&mubs_prime_power(d)?);
                Ok(Check::new(format!("d{d}_unbiasedness"), rep.max_deviation, None, 0.0, 1e-9))
            })
            .collect::<CliResult<_>>()?,
        Suite::F => vec![f_check(trials, seed, 2, F_TOL)?],
    })
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Coherence => "coherence",
        Suite::Lhs => "lhs",
        Suite::Sqi => "sqi",
        Suite::Quantum => "quantum",
        Suite::Qudit => "qudit",
        Suite::Mub => "mub",
        Suite::F => "f",
    }
}

pub fn run(suite: Suite, trials: usize, seed: u64) -> CliResult<()> {
    let checks = checks(suite, trials, seed)?;
    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        suite: suite_name(suite).into(),
        trials,
        seed,
        pass,
        checks,
    };
    print_json(&report)?;
    if pass {
        return Ok(());
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| match c.offending_trial {
            Some(t) => format!(
                "{} = {} exceeds {} at trial {t} (seed {})",
                c.name,
                c.max_observed,
                c.bound,
                seed.wrapping_add(t as u64)
            ),
            None => format!("{} = {} exceeds {}", c.name, c.max_observed, c.bound),
        })
        .collect();
    Err(CliError::Verify(failed.join("; ")))
}
