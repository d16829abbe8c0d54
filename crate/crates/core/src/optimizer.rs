//! Maximization of `S` over the measurement frame, Werner scans and
//! bound-crossing thresholds.
//!
//! The default search rotates Alice's measurement triple and Bob's coherence
//! triple together through one `(θ, φ)` pair: a `64 × 32` grid, then a
//! Nelder–Mead polish started from the best grid point.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::assemblage::steer;
use crate::coherence::CoherenceMeasure;
use crate::error::{Error, Result};
use crate::mub::rotated_qubit_mubs;
use crate::naqc::{bound, s_quantity, BoundKind, IndexPattern};
use crate::qmatrix::{werner, DensityMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameMode {
    /// One `(θ, φ)` shared by Alice's measurements and Bob's coherence bases.
    Shared,
    /// Independent `(θ_A, φ_A)` and `(θ_B, φ_B)`.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub grid_theta: usize,
    pub grid_phi: usize,
    pub pattern: IndexPattern,
    pub frames: FrameMode,
    pub max_evals: usize,
    /// Simplex diameter at which the polish stops.
    pub tolerance: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 32,
            pattern: IndexPattern::Distinct,
            frames: FrameMode::Shared,
            max_evals: 2000,
            tolerance: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BobFrame {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptResult {
    pub s_max: f64,
    /// In `[0, π]`.
    pub theta: f64,
    /// In `[0, 2π)`.
    pub phi: f64,
    pub evaluations: usize,
    /// Bob's frame when it is optimized separately.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bob: Option<BobFrame>,
}

/// Folds an angle pair into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`. The rotated family
/// is the same set of bases at `(θ, φ)`, `(θ + 2π, φ)` and `(−θ, φ + π)`.
pub fn normalize_angles(theta: f64, phi: f64) -> (f64, f64) {
    let tau = 2.0 * PI;
    let mut t = theta.rem_euclid(tau);
    let mut p = phi;
    if t > PI {
        t = tau - t;
        p += PI;
    }
    let mut p = p.rem_euclid(tau);
    if p >= tau {
        p = 0.0;
    }
    (t, p)
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != Some((2, 2)) {
        return Err(Error::Dimension(format!(
            "frame optimization needs a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// `S` at a shared frame.
pub fn s_at_frame(
    rho: &DensityMatrix,
    measure: CoherenceMeasure,
    pattern: IndexPattern,
    theta: f64,
    phi: f64,
) -> Result<f64> {
    s_at_frames(rho, measure, pattern, (theta, phi), (theta, phi))
}

/// `S` with Alice measuring in the `alice` frame and Bob's coherence in `bob`.
pub fn s_at_frames(
    rho: &DensityMatrix,
    measure: CoherenceMeasure,
    pattern: IndexPattern,
    alice: (f64, f64),
    bob: (f64, f64),
) -> Result<f64> {
    let alice_fam = rotated_qubit_mubs(alice.0, alice.1);
    let bob_fam = if alice == bob {
        alice_fam.clone()
    } else {
        rotated_qubit_mubs(bob.0, bob.1)
    };
    let asm = steer(rho, alice_fam.bases())?;
    s_quantity(&asm, &bob_fam, measure, pattern)
}

struct Polished {
    x: Vec<f64>,
    value: f64,
    evals: usize,
}

/// Nelder–Mead minimization with reflection 1, expansion 2, contraction ½
/// and shrink ½. Stops when every vertex lies within `tol` of the best one
/// or after `max_evals` evaluations.
fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_evals: usize,
) -> Polished {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let n = x0.len();
    let evals = std::cell::Cell::new(0usize);
    let eval = |x: &[f64]| {
        evals.set(evals.get() + 1);
        f(x)
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = eval(&x);
        simplex.push((x, fx));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0.clone();
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol || evals.get() >= max_evals {
            break;
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(x, _)| x[j]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along =
            |t: f64| -> Vec<f64> { (0..n).map(|j| centroid[j] + t * (worst.0[j] - centroid[j])).collect() };

        let xr = along(-ALPHA);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(-GAMMA);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(-RHO);
            let fc = eval(&xc);
            (xc, fc)
        } else {
            let xc = along(RHO);
            let fc = eval(&xc);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        for v in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = (0..n).map(|j| best[j] + SIGMA * (v.0[j] - best[j])).collect();
            let fx = eval(&x);
            *v = (x, fx);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Polished {
        x,
        value,
        evals: evals.get(),
    }
}

fn grid_points(nt: usize, np: usize) -> Vec<(f64, f64)> {
    let nt = nt.max(2);
    let np = np.max(1);
    (0..nt)
        .flat_map(|i| {
            (0..np).map(move |j| {
                (
                    PI * i as f64 / (nt - 1) as f64,
                    2.0 * PI * j as f64 / np as f64,
                )
            })
        })
        .collect()
}

/// Index of the largest value; ties go to the lowest index.
fn argmax(values: &[f64]) -> usize {
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, &v)| if v > values[best] { i } else { best })
}

pub fn optimize_s(rho_ab: &DensityMatrix, measure: CoherenceMeasure) -> Result<OptResult> {
    optimize_s_with(rho_ab, measure, &OptimizerConfig::default())
}

pub fn optimize_s_with(
    rho_ab: &DensityMatrix,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    require_two_qubit(rho_ab)?;
    match cfg.frames {
        FrameMode::Shared => optimize_shared(rho_ab, measure, cfg),
        FrameMode::Independent => optimize_independent(rho_ab, measure, cfg),
    }
}

fn optimize_shared(
    rho: &DensityMatrix,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    let pattern = cfg.pattern;
    // validates once so the closures below can unwrap
    s_at_frame(rho, measure, pattern, 0.0, 0.0)?;
    let objective = |t: f64, p: f64| s_at_frame(rho, measure, pattern, t, p).expect("validated");

    let grid = grid_points(cfg.grid_theta, cfg.grid_phi);
    let values: Vec<f64> = grid.par_iter().map(|&(t, p)| objective(t, p)).collect();
    let best = argmax(&values);
    let (t0, p0) = grid[best];

    let step = 0.5 * PI / (cfg.grid_theta.max(2) - 1) as f64;
    let polished = nelder_mead(
        |x| -objective(x[0], x[1]),
        &[t0, p0],
        step,
        cfg.tolerance,
        cfg.max_evals,
    );
    let (t, p) = if -polished.value > values[best] {
        (polished.x[0], polished.x[1])
    } else {
        (t0, p0)
    };
    let (theta, phi) = normalize_angles(t, p);
    Ok(OptResult {
        s_max: objective(theta, phi),
        theta,
        phi,
        evaluations: grid.len() + polished.evals + 1,
        bob: None,
    })
}

fn optimize_independent(
    rho: &DensityMatrix,
    measure: CoherenceMeasure,
    cfg: &OptimizerConfig,
) -> Result<OptResult> {
    let pattern = cfg.pattern;
    s_at_frame(rho, measure, pattern, 0.0, 0.0)?;
    let objective = |x: &[f64]| {
        s_at_frames(rho, measure, pattern, (x[0], x[1]), (x[2], x[3])).expect("validated")
    };

    let side = grid_points((cfg.grid_theta / 4).max(2), (cfg.grid_phi / 4).max(1));
    let grid: Vec<[f64; 4]> = side
        .iter()
        .flat_map(|&(ta, pa)| side.iter().map(move |&(tb, pb)| [ta, pa, tb, pb]))
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|x| objective(x)).collect();
    let best = argmax(&values);

    let step = 0.5 * PI / ((cfg.grid_theta / 4).max(2) - 1) as f64;
    let polished = nelder_mead(|x| -objective(x), &grid[best], step, cfg.tolerance, cfg.max_evals);
    let x = if -polished.value > values[best] {
        polished.x.clone()
    } else {
        grid[best].to_vec()
    };
    let (theta, phi) = normalize_angles(x[0], x[1]);
    let (tb, pb) = normalize_angles(x[2], x[3]);
    Ok(OptResult {
        s_max: objective(&[theta, phi, tb, pb]),
        theta,
        phi,
        evaluations: grid.len() + polished.evals + 1,
        bob: Some(BobFrame { theta: tb, phi: pb }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanBounds {
    pub lhs: f64,
    pub sqi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub p_w: f64,
    pub opt: OptResult,
    pub bounds: ScanBounds,
}

pub fn scan_werner(measure: CoherenceMeasure, p_grid: &[f64]) -> Result<Vec<ScanRecord>> {
    scan_werner_with(measure, p_grid, &OptimizerConfig::default())
}

pub fn scan_werner_with(
    measure: CoherenceMeasure,
    p_grid: &[f64],
    cfg: &OptimizerConfig,
) -> Result<Vec<ScanRecord>> {
    let bounds = ScanBounds {
        lhs: bound(BoundKind::Lhs, 2, measure)?,
        sqi: bound(BoundKind::Sqi1, 2, measure)?,
    };
    p_grid
        .par_iter()
        .map(|&p_w| {
            let opt = optimize_s_with(&werner(p_w)?, measure, cfg)?;
            Ok(ScanRecord { p_w, opt, bounds })
        })
        .collect()
}

/// `p_w` grid with `steps` uniformly spaced points on `[0, 1]`.
pub fn uniform_grid(steps: usize) -> Vec<f64> {
    match steps {
        0 => vec![],
        1 => vec![0.0],
        n => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    /// Smallest violating weight, to within the bisection width.
    Crossing(f64),
    /// The optimized Werner curve never exceeds the bound.
    NoViolation,
}

/// Width of the final bisection interval.
pub const THRESHOLD_WIDTH: f64 = 1e-4;

/// Exceedance below this counts as touching the bound, not crossing it.
const CROSSING_EPS: f64 = 1e-9;

pub fn find_threshold(measure: CoherenceMeasure, bound_kind: BoundKind) -> Result<Threshold> {
    find_threshold_with(measure, bound_kind, &OptimizerConfig::default())
}

/// Bisection on `p_w` of `max_frame S(Werner(p_w)) − bound`.
pub fn find_threshold_with(
    measure: CoherenceMeasure,
    bound_kind: BoundKind,
    cfg: &OptimizerConfig,
) -> Result<Threshold> {
    let b = bound(bound_kind, 2, measure)?;
    let excess = |p: f64| -> Result<f64> {
        Ok(optimize_s_with(&werner(p)?, measure, cfg)?.s_max - b)
    };
    if excess(1.0)? <= CROSSING_EPS {
        return Ok(Threshold::NoViolation);
    }
    if excess(0.0)? > CROSSING_EPS {
        return Ok(Threshold::Crossing(0.0));
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo >= THRESHOLD_WIDTH {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? > CROSSING_EPS {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Threshold::Crossing(0.5 * (lo + hi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmatrix::c;
    use approx::assert_abs_diff_eq;

    fn product_state() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::tensor(
            &DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap(),
            &DensityMatrix::pure(&[c(s, 0.0), c(s, 0.0)]).unwrap(),
        )
    }

    #[test]
    fn nelder_mead_quadratic() {
        let r = nelder_mead(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2),
            &[0.0, 0.0],
            0.3,
            1e-10,
            5000,
        );
        assert_abs_diff_eq!(r.x[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r.x[1], -0.5, epsilon = 1e-8);
        assert!(r.evals < 5000);
    }

    #[test]
    fn nelder_mead_respects_budget() {
        let r = nelder_mead(|x| x[0].sin() * x[1].cos(), &[0.1, 0.2], 0.1, 0.0, 50);
        assert!(r.evals <= 55);
    }

    #[test]
    fn angle_folding() {
        let (t, p) = normalize_angles(-0.3, 0.2);
        assert_abs_diff_eq!(t, 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(p, 0.2 + PI, epsilon = 1e-15);
        let (t, p) = normalize_angles(7.0, -1.0);
        assert!((0.0..=PI).contains(&t) && (0.0..2.0 * PI).contains(&p));
        // same bases after folding
        let rho = DensityMatrix::mix(0.4, &werner(0.9).unwrap(), &product_state()).unwrap();
        let m = CoherenceMeasure::l1();
        let a = s_at_frame(&rho, m, IndexPattern::Distinct, 7.0, -1.0).unwrap();
        let b = s_at_frame(&rho, m, IndexPattern::Distinct, t, p).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-12);
    }

    #[test]
    fn werner_optimum() {
        let r = optimize_s(&werner(0.9).unwrap(), CoherenceMeasure::l1()).unwrap();
        assert_abs_diff_eq!(r.s_max, 4.86, epsilon = 1e-6);
        let again = s_at_frame(&werner(0.9).unwrap(), CoherenceMeasure::l1(), IndexPattern::Distinct, r.theta, r.phi)
            .unwrap();
        assert_eq!(again, r.s_max);
    }

    #[test]
    fn product_state_optimum_is_four() {
        let r = optimize_s(&product_state(), CoherenceMeasure::l1()).unwrap();
        assert_abs_diff_eq!(r.s_max, 4.0, epsilon = 1e-6);
    }

    #[test]
    fn maximally_mixed_optimum_is_zero() {
        let rho = DensityMatrix::maximally_mixed(4).with_dims((2, 2)).unwrap();
        for m in [CoherenceMeasure::l1(), CoherenceMeasure::relative_entropy()] {
            assert_eq!(optimize_s(&rho, m).unwrap().s_max, 0.0);
        }
    }

    #[test]
    fn rejects_non_two_qubit() {
        let rho = DensityMatrix::maximally_mixed(9).with_dims((3, 3)).unwrap();
        assert!(matches!(optimize_s(&rho, CoherenceMeasure::l1()), Err(Error::Dimension(_))));
    }

    #[test]
    fn independent_frames_not_worse() {
        let rho = DensityMatrix::mix(0.5, &werner(1.0).unwrap(), &product_state()).unwrap();
        let m = CoherenceMeasure::l1();
        let shared = optimize_s(&rho, m).unwrap();
        let cfg = OptimizerConfig {
            frames: FrameMode::Independent,
            ..OptimizerConfig::default()
        };
        let indep = optimize_s_with(&rho, m, &cfg).unwrap();
        assert!(indep.bob.is_some());
        assert!(indep.s_max >= shared.s_max - 1e-6);
        assert!(indep.s_max <= 6.0 + 1e-9);
    }

    #[test]
    fn scan_endpoints() {
        let recs = scan_werner(CoherenceMeasure::l1(), &uniform_grid(2)).unwrap();
        assert_eq!(recs.len(), 2);
        assert_abs_diff_eq!(recs[0].opt.s_max, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(recs[1].opt.s_max, 6.0, epsilon = 1e-9);
        assert_eq!(recs[1].bounds.lhs, 4.0);
        assert_eq!(recs[1].bounds.sqi, 6.0);
        let re = scan_werner(CoherenceMeasure::relative_entropy(), &[0.0, 0.816, 1.0]).unwrap();
        assert_abs_diff_eq!(re[0].opt.s_max, 0.0, epsilon = 1e-12);
        assert!(re[2].opt.s_max <= 6.0 + 1e-12);
        let l1 = scan_werner(CoherenceMeasure::l1(), &[0.816]).unwrap();
        assert!(l1[0].opt.s_max < 4.0 && l1[0].opt.s_max > 3.99);
    }

    #[test]
    fn sqi_threshold_does_not_exist() {
        let t = find_threshold(CoherenceMeasure::l1(), BoundKind::Sqi1).unwrap();
        assert_eq!(t, Threshold::NoViolation);
    }

    #[test]
    fn uniform_grid_shape() {
        assert_eq!(uniform_grid(2), vec![0.0, 1.0]);
        let g = uniform_grid(11);
        assert_eq!(g.len(), 11);
        assert_abs_diff_eq!(g[9], 0.9, epsilon = 1e-15);
    }
}
