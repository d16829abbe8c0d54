use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use naqc_core::coherence::CoherenceMeasure;
use naqc_core::mub::{mubs_prime_power, rotated_qubit_mubs};
use naqc_core::naqc::{bound, s_report, Angles, BoundKind, IndexPattern, NaqcReport};
use naqc_core::optimizer::{
    find_threshold_with, optimize_s_with, scan_werner_with, uniform_grid, OptimizerConfig,
    Threshold, THRESHOLD_WIDTH,
};
use naqc_core::oracle::sweep_family;
use naqc_core::qmatrix::{werner, DensityMatrix};
use naqc_core::steer;
use serde::Serialize;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{csv_row, print_json, write_stdout};
use crate::state_file::read_state;
use crate::{BoundArg, MeasureArg};

fn optimizer_config(s: &Settings, pattern: IndexPattern) -> OptimizerConfig {
    OptimizerConfig {
        grid_theta: s.grid_theta,
        grid_phi: s.grid_phi,
        pattern,
        ..OptimizerConfig::default()
    }
}

pub fn compute(
    s: &Settings,
    state: Option<&Path>,
    werner_weight: Option<f64>,
    measure: MeasureArg,
    optimize: bool,
    pattern: &str,
) -> CliResult<()> {
    let pattern: IndexPattern = pattern.parse()?;
    let rho = match (state, werner_weight) {
        (Some(path), None) => read_state(path, s.tolerance)?,
        (None, Some(p)) => werner(p)?,
        _ => return Err(CliError::Usage("give exactly one of --state or --werner".into())),
    };
    let report = evaluate(s, &rho, measure, optimize, pattern)?;
    print_json(&report)
}

fn evaluate(
    s: &Settings,
    rho: &DensityMatrix,
    measure: MeasureArg,
    optimize: bool,
    pattern: IndexPattern,
) -> CliResult<NaqcReport> {
    let Some((da, db)) = rho.dims() else {
        return Err(CliError::Usage("state has no bipartite split".into()));
    };
    if da != db {
        return Err(CliError::Usage(format!(
            "S needs equal local dimensions, got [{da}, {db}]"
        )));
    }
    let measure = CoherenceMeasure::for_dim(measure.kind(), db);
    let (fam, angles) = if optimize {
        let opt = optimize_s_with(rho, measure, &optimizer_config(s, pattern))?;
        (
            rotated_qubit_mubs(opt.theta, opt.phi),
            Some(Angles {
                theta: opt.theta,
                phi: opt.phi,
            }),
        )
    } else {
        (sweep_family(db)?, None)
    };
    let mut report = s_report(&steer(rho, fam.bases())?, &fam, measure)?;
    report.s_value = report.patterns.get(pattern);
    report.angles = angles;
    Ok(report)
}

pub const SCAN_HEADER: &str = "p_w,s_opt,theta,phi,s_full_pattern,bound_lhs,bound_sqi";

pub fn scan(
    s: &Settings,
    measure: MeasureArg,
    steps: usize,
    out: Option<&Path>,
    patterns: bool,
) -> CliResult<()> {
    if steps < 2 {
        return Err(CliError::Usage(format!("--steps must be at least 2, got {steps}")));
    }
    let measure = CoherenceMeasure::for_dim(measure.kind(), 2);
    // open the target before the scan so an unwritable path fails fast
    let mut file = match out {
        Some(path) => Some(BufWriter::new(File::create(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?)),
        None => None,
    };
    let cfg = optimizer_config(s, IndexPattern::Distinct);
    let records = scan_werner_with(measure, &uniform_grid(steps), &cfg)?;

    let mut text = String::from(SCAN_HEADER);
    if patterns {
        text.push_str(",s_ijk_over_2,s_full_over_9");
    }
    text.push('\n');
    for r in &records {
        let fam = rotated_qubit_mubs(r.opt.theta, r.opt.phi);
        let full = s_report(&steer(&werner(r.p_w)?, fam.bases())?, &fam, measure)?
            .patterns
            .full;
        let mut row = vec![
            r.p_w,
            r.opt.s_max,
            r.opt.theta,
            r.opt.phi,
            full,
            r.bounds.lhs,
            r.bounds.sqi,
        ];
        if patterns {
            row.extend([r.opt.s_max / 2.0, full / 9.0]);
        }
        text.push_str(&csv_row(&row));
        text.push('\n');
    }
    match (&mut file, out) {
        (Some(f), Some(path)) => f
            .write_all(text.as_bytes())
            .and_then(|()| f.flush())
            .map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
        _ => write_stdout(text.as_bytes()),
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum PStar {
    Value(f64),
    None(&'static str),
}

#[derive(Serialize)]
struct ThresholdReport {
    measure: String,
    bound: &'static str,
    bound_value: f64,
    p_star: PStar,
    width: f64,
}

pub fn threshold(s: &Settings, measure: MeasureArg, which: BoundArg) -> CliResult<()> {
    let measure = CoherenceMeasure::for_dim(measure.kind(), 2);
    let (kind, name) = match which {
        BoundArg::Lhs => (BoundKind::Lhs, "lhs"),
        BoundArg::Sqi => (BoundKind::Sqi1, "sqi"),
    };
    let cfg = optimizer_config(s, IndexPattern::Distinct);
    let p_star = match find_threshold_with(measure, kind, &cfg)? {
        Threshold::Crossing(p) => PStar::Value(p),
        Threshold::NoViolation => PStar::None("none"),
    };
    print_json(&ThresholdReport {
        measure: measure.to_string(),
        bound: name,
        bound_value: bound(kind, 2, measure)?,
        p_star,
        width: THRESHOLD_WIDTH,
    })
}

pub fn mub(dim: usize, theta: Option<f64>, phi: Option<f64>) -> CliResult<()> {
    let fam = if dim == 2 {
        rotated_qubit_mubs(theta.unwrap_or(0.0), phi.unwrap_or(0.0))
    } else {
        if theta.is_some() || phi.is_some() {
            return Err(CliError::Usage("--theta/--phi apply to --dim 2 only".into()));
        }
        mubs_prime_power(dim)?
    };
    print_json(&fam.with_phase_convention())
}
