use std::time::Instant;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::accuracy::Accuracy;
use crate::biphoton::{gamma2_factorized, gamma2_oracle_mc_batch, OracleGrids};
use crate::cli::config::{as_config, RunKind, ScenarioConfig, WkSpec};
use crate::detection::{fringe_scan, Scenario, Sweep};
use crate::entanglement::{build_two_qubit, verify_bound};
use crate::error::{Error, Result};
use crate::pump_models::{wk_transform, CrossSpectralDensity, TabulatedKernel};

/// One table cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
        }
    }
}

/// Result table plus the metadata written to the sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub kind: RunKind,
    pub seed: u64,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub warnings: Vec<String>,
    pub summary: Value,
    pub wall_time_seconds: f64,
}

impl RunReport {
    /// Comma-separated table with a one-line header.
    pub fn table(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn sidecar(&self, config: &ScenarioConfig) -> Value {
        json!({
            "kind": self.kind.name(),
            "seed": self.seed,
            "config": config,
            "columns": self.columns,
            "rows": self.rows.len(),
            "warnings": self.warnings,
            "summary": self.summary,
            "wall_time_seconds": self.wall_time_seconds,
            "library_version": env!("CARGO_PKG_VERSION"),
        })
    }
}

fn describe(accuracy: &Accuracy) -> Option<String> {
    match accuracy {
        Accuracy::Resolved => None,
        Accuracy::CoarseGrid { relative_gap } => Some(format!("coarse grid (half-grid gap {relative_gap:.3e})")),
        Accuracy::TruncatedSupport { edge_ratio } => {
            Some(format!("truncated support (edge/peak {edge_ratio:.3e})"))
        }
    }
}

/// Executes the configured run. `seed` overrides the config's seed.
pub fn run(config: &ScenarioConfig, seed: Option<u64>) -> Result<RunReport> {
    let start = Instant::now();
    let seed = seed.unwrap_or(config.seed);
    let mut report = match config.kind {
        RunKind::FransonScan | RunKind::HomScan => scan_run(config)?,
        RunKind::BoundSweep => bound_run(config)?,
        RunKind::FactorizationCheck => factorization_run(config, seed)?,
        RunKind::WkValidate => wk_run(config)?,
    };
    report.seed = seed;
    report.wall_time_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

fn scenario(config: &ScenarioConfig) -> Result<(Scenario, Sweep)> {
    let csd = config.build_csd()?;
    let response = config.build_response(csd.center())?;
    let difference_grid = config.difference_grid(&response)?;
    config.couplings.validate()?;
    config.windows.validate()?;
    let spec = config
        .sweep
        .ok_or_else(|| Error::Config(format!("run kind {} needs a [sweep] table", config.kind.name())))?;
    let sweep = Sweep {
        parameter: config.sweep_parameter(),
        start: spec.start,
        stop: spec.stop,
        n_points: spec.n_points,
    };
    sweep.points()?;
    Ok((
        Scenario {
            csd,
            response,
            paths: config.paths,
            couplings: config.couplings,
            windows: config.windows,
            difference_grid,
        },
        sweep,
    ))
}

fn new_report(kind: RunKind, columns: Vec<&'static str>) -> RunReport {
    RunReport {
        kind,
        seed: 0,
        columns,
        rows: Vec::new(),
        warnings: Vec::new(),
        summary: Value::Null,
        wall_time_seconds: 0.0,
    }
}

fn scan_run(config: &ScenarioConfig) -> Result<RunReport> {
    let (scenario, sweep) = scenario(config).map_err(as_config)?;
    let scan = fringe_scan(&scenario, &sweep)?;
    let mut report = new_report(
        config.kind,
        vec![sweep.parameter.name(), "rate", "abs_gamma_p", "abs_gamma_d"],
    );
    for (k, p) in scan.points.iter().enumerate() {
        report.rows.push(vec![
            Cell::Float(p.value),
            Cell::Float(p.rate),
            Cell::Float(p.gamma_p.norm()),
            Cell::Float(p.gamma_d.norm()),
        ]);
        if let Some(w) = describe(&p.accuracy) {
            report.warnings.push(format!("row {k}: {w}"));
        }
        if p.clamped {
            report.warnings.push(format!("row {k}: negative round-off rate clamped to zero"));
        }
    }
    report.summary = json!({
        "sweep": sweep,
        "mapping": sweep.parameter.mapping(),
        "carrier": scan.carrier,
    });
    Ok(report)
}

fn bound_run(config: &ScenarioConfig) -> Result<RunReport> {
    let (scenario, sweep) = scenario(config).map_err(as_config)?;
    let scan = fringe_scan(&scenario, &sweep)?;
    let mut report = new_report(
        config.kind,
        vec![sweep.parameter.name(), "concurrence", "abs_gamma_p", "slack"],
    );
    let mut all_hold = true;
    let mut min_slack = f64::INFINITY;
    for (k, p) in scan.points.iter().enumerate() {
        let paths = sweep.parameter.apply(&scenario.paths, p.value);
        let state = build_two_qubit(
            &scenario.couplings,
            p.r2,
            p.gamma_p,
            p.gamma_d,
            paths.delta_tau(),
            paths.delta_tau_prime(),
            paths.delta_phi(),
            scenario.csd.center(),
            scenario.response.difference_center(),
        )?;
        let b = verify_bound(&state, p.gamma_p);
        all_hold &= b.holds;
        min_slack = min_slack.min(b.slack);
        report.rows.push(vec![
            Cell::Float(p.value),
            Cell::Float(b.concurrence),
            Cell::Float(b.bound),
            Cell::Float(b.slack),
        ]);
        if let Some(w) = describe(&p.accuracy) {
            report.warnings.push(format!("row {k}: {w}"));
        }
    }
    report.summary = json!({
        "sweep": sweep,
        "mapping": sweep.parameter.mapping(),
        "bound_holds_everywhere": all_hold,
        "min_slack": min_slack,
    });
    Ok(report)
}

fn factorization_run(config: &ScenarioConfig, seed: u64) -> Result<RunReport> {
    let (csd, resp, grids, spec) = (|| {
        let csd = config.build_csd()?;
        let resp = config.build_response(csd.center())?;
        let grids = OracleGrids::new(config.pump_grid(&csd)?, config.difference_grid(&resp)?);
        let spec = config
            .oracle
            .clone()
            .ok_or_else(|| Error::Config("factorization-check needs an [oracle] table".into()))?;
        Ok::<_, Error>((csd, resp, grids, spec))
    })()
    .map_err(as_config)?;
    let times: Vec<(f64, f64)> = spec.times.iter().map(|t| (t[0], t[1])).collect();
    let oracle = gamma2_oracle_mc_batch(&csd, &resp, &config.paths, &times, spec.count, seed, &grids)?;
    let mut report = new_report(
        config.kind,
        vec![
            "t_s",
            "t_i",
            "factorized_re",
            "factorized_im",
            "oracle_re",
            "oracle_im",
            "standard_error",
            "discrepancy_in_se",
        ],
    );
    let mut worst: f64 = 0.0;
    for (k, (&(ts, ti), est)) in times.iter().zip(&oracle).enumerate() {
        let f = gamma2_factorized(&csd, &resp, &config.paths, ts, ti, &grids.difference)?;
        let diff = (f.value - est.sample.value).norm();
        let z = if est.standard_error > 0.0 { diff / est.standard_error } else { f64::INFINITY };
        let z = if diff == 0.0 { 0.0 } else { z };
        worst = worst.max(z);
        report.rows.push(vec![
            Cell::Float(ts),
            Cell::Float(ti),
            Cell::Float(f.value.re),
            Cell::Float(f.value.im),
            Cell::Float(est.sample.value.re),
            Cell::Float(est.sample.value.im),
            Cell::Float(est.standard_error),
            Cell::Float(z),
        ]);
        if let Some(w) = describe(&f.accuracy) {
            report.warnings.push(format!("row {k}: factorized value: {w}"));
        }
    }
    report.summary = json!({
        "count": spec.count,
        "max_discrepancy_in_se": worst,
    });
    Ok(report)
}

fn wk_run(config: &ScenarioConfig) -> Result<RunReport> {
    let (model, kernel, spec) = (|| {
        let csd = config.build_csd()?;
        let CrossSpectralDensity::Gsm(model) = csd else {
            return Err(Error::Config("wk-validate compares against the Schell-model closed form; use a gsm pump".into()));
        };
        let kernel = TabulatedKernel::from_gsm(&model, config.pump_grid(&csd)?)?;
        let spec = config.wk.unwrap_or_default();
        if spec.lattice_points < 2 || spec.extent.is_nan() || spec.extent <= 0.0 {
            return Err(Error::Config("wk lattice needs at least two points and a positive extent".into()));
        }
        Ok::<_, Error>((model, kernel, spec))
    })()
    .map_err(as_config)?;
    let WkSpec { lattice_points, extent } = spec;
    let t = model.pulse_width();
    let axis: Vec<f64> = (0..lattice_points)
        .map(|k| -extent * t + 2.0 * extent * t * k as f64 / (lattice_points - 1) as f64)
        .collect();
    let numeric = CrossSpectralDensity::tabulated(kernel);
    let mut cells = Vec::new();
    for &t1 in &axis {
        for &t2 in &axis {
            let n = wk_transform(&numeric, t1, t2)?;
            cells.push((t1, t2, n, model.temporal_correlation(t1, t2)?));
        }
    }
    let peak = cells.iter().map(|c| c.3.abs()).fold(0.0, f64::max);
    let mut report = new_report(
        config.kind,
        vec!["t1", "t2", "numeric_re", "numeric_im", "closed_form", "peak_relative_error"],
    );
    let mut worst: f64 = 0.0;
    for (k, (t1, t2, n, exact)) in cells.into_iter().enumerate() {
        let err = (n.value - Complex64::new(exact, 0.0)).norm() / peak;
        worst = worst.max(err);
        report.rows.push(vec![
            Cell::Float(t1),
            Cell::Float(t2),
            Cell::Float(n.value.re),
            Cell::Float(n.value.im),
            Cell::Float(exact),
            Cell::Float(err),
        ]);
        if let Some(w) = describe(&n.accuracy) {
            report.warnings.push(format!("row {k}: {w}"));
        }
    }
    report.summary = json!({
        "pulse_width": t,
        "coherence_time": model.coherence_time(),
        "max_peak_relative_error": worst,
    });
    Ok(report)
}
