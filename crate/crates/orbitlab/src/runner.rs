//! Experiment orchestration: resolve a config, run one experiment kind,
//! and persist CSV/JSON/SVG artifacts with byte-identical output across
//! runs.

use std::fmt;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::config::{resolve, ConfigError, ExperimentConfig, SetConfig};
use crate::degrees::{
    alpha_estimate, genericness_report, product_map_profile, recursion_verify, DegreeProfile,
};
use crate::error::MultError;
use crate::heights::SubschemeSpec;
use crate::lang_siegel::{
    banach_profile, check_hypothesis, coordinate_ratio_series, default_d_grid,
    multiplicity_weight, ratio_series, roth_scan, threshold_return_set, DensityProfile,
};
use crate::maps::{extend_periodic, iterate_orbit, OrbitRecord, StopReason};
use crate::multiplicity::{backward_cocycle, e_minus_estimate};
use crate::report::{atomic_write, csv_bytes, fmt_real, svg_line_chart};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Orbit,
    Alpha,
    Recursion,
    Cocycle,
    Ratio,
    Density,
    Roth,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Orbit => "orbit",
            ExperimentKind::Alpha => "alpha",
            ExperimentKind::Recursion => "recursion",
            ExperimentKind::Cocycle => "cocycle",
            ExperimentKind::Ratio => "ratio",
            ExperimentKind::Density => "density",
            ExperimentKind::Roth => "roth",
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "orbit" => Ok(ExperimentKind::Orbit),
            "alpha" => Ok(ExperimentKind::Alpha),
            "recursion" => Ok(ExperimentKind::Recursion),
            "cocycle" => Ok(ExperimentKind::Cocycle),
            "ratio" => Ok(ExperimentKind::Ratio),
            "density" => Ok(ExperimentKind::Density),
            "roth" => Ok(ExperimentKind::Roth),
            other => Err(format!(
                "unknown experiment kind {other:?}; expected one of orbit, alpha, recursion, cocycle, ratio, density, roth"
            )),
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    ConfigParse(String),
    Validation(String),
    Budget(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::ConfigParse(_) => 2,
            RunError::Validation(_) => 3,
            RunError::Budget(_) => 4,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::ConfigParse(m) => write!(f, "config parse error: {m}"),
            RunError::Validation(m) => write!(f, "validation error: {m}"),
            RunError::Budget(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> RunError {
        match e {
            ConfigError::Parse(m) => RunError::ConfigParse(m),
            ConfigError::Validation(m) => RunError::Validation(m),
        }
    }
}

fn budget(e: MultError) -> RunError {
    match e {
        MultError::DegreeCapExceeded(d, cap) => {
            RunError::Budget(format!("fiber degree {d} exceeds cap {cap}"))
        }
        other => RunError::Validation(other.to_string()),
    }
}

pub struct RunOutput {
    pub summary: Value,
    pub files: Vec<PathBuf>,
}

pub fn parse_config(json: &str) -> Result<ExperimentConfig, RunError> {
    serde_json::from_str(json).map_err(|e| RunError::ConfigParse(e.to_string()))
}

/// Run one experiment. All artifacts are computed first and written only
/// on success; repeated runs with the same config produce identical bytes.
pub fn run_experiment(
    kind: ExperimentKind,
    config: &ExperimentConfig,
    out_dir: &Path,
    emit_svg: bool,
) -> Result<RunOutput, RunError> {
    let resolved = resolve(config)?;
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let results = match kind {
        ExperimentKind::Orbit => run_orbit(config, &resolved, &mut files, emit_svg)?,
        ExperimentKind::Alpha => run_alpha(config, &resolved, &mut files, emit_svg)?,
        ExperimentKind::Recursion => run_recursion(config, &resolved, &mut files)?,
        ExperimentKind::Cocycle => run_cocycle(config, &resolved, &mut files, emit_svg)?,
        ExperimentKind::Ratio => run_ratio(config, &resolved, &mut files, emit_svg)?,
        ExperimentKind::Density => run_density(config, &mut files, emit_svg)?,
        ExperimentKind::Roth => run_roth(config, &resolved, &mut files)?,
    };
    let summary = json!({
        "kind": kind.name(),
        "config": serde_json::to_value(config).expect("config serializes"),
        "results": results,
    });
    let mut written = Vec::new();
    let pretty = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    files.push(("summary.json".into(), pretty.into_bytes()));
    for (name, bytes) in files {
        let path = out_dir.join(&name);
        atomic_write(&path, &bytes)
            .map_err(|e| RunError::Validation(format!("cannot write {}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(RunOutput {
        summary,
        files: written,
    })
}

fn need<'a, T>(opt: &'a Option<T>, what: &str) -> Result<&'a T, RunError> {
    opt.as_ref()
        .ok_or_else(|| RunError::Validation(format!("this experiment kind needs {what}")))
}

fn run_orbit_records(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    extend: bool,
) -> Result<(Vec<OrbitRecord>, StopReason), RunError> {
    let system = need(&resolved.system, "a map")?;
    let start = need(&resolved.start, "a start point")?;
    let (records, stop) = iterate_orbit(system, start.clone(), config.n_max, config.bit_budget);
    let records = if extend {
        extend_periodic(records, &stop, config.n_max)
    } else {
        records
    };
    Ok((records, stop))
}

fn orbit_csv(records: &[OrbitRecord]) -> Vec<u8> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                fmt_real(r.height),
                r.bits.to_string(),
                r.point.to_string(),
            ]
        })
        .collect();
    csv_bytes(&["n", "height", "bits", "point"], &rows)
}

fn run_orbit(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
    emit_svg: bool,
) -> Result<Value, RunError> {
    let (records, stop) = run_orbit_records(config, resolved, false)?;
    files.push(("orbit.csv".into(), orbit_csv(&records)));
    if emit_svg {
        let series: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.height)).collect();
        files.push((
            "orbit.svg".into(),
            svg_line_chart(&series, "orbit heights", "h", config.svg_log_y).into_bytes(),
        ));
    }
    // orbit points against the subscheme, when one is configured
    let genericness = resolved.subscheme.as_ref().map(|spec| {
        let rep = genericness_report(&records, std::slice::from_ref(spec), 3);
        let hits = &rep.per_set[0];
        json!({
            "hits": hits.hits,
            "non_generic_witness": hits.non_generic_witness,
        })
    });
    Ok(json!({
        "stop_reason": stop.to_string(),
        "steps_recorded": records.len(),
        "final_height": fmt_real(records.last().map(|r| r.height).unwrap_or(0.0)),
        "genericness": genericness,
    }))
}

fn pick_profile(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
) -> Result<Option<DegreeProfile>, RunError> {
    if let Some(degs) = &resolved.product_degrees {
        return Ok(Some(
            product_map_profile(degs).map_err(|e| RunError::Validation(e.to_string()))?,
        ));
    }
    if let Some(mu) = &config.profile_mu {
        return Ok(Some(
            DegreeProfile::from_mu(mu.clone()).map_err(|e| RunError::Validation(e.to_string()))?,
        ));
    }
    if let Some(m) = &resolved.morphism {
        return Ok(Some(
            DegreeProfile::from_mu(vec![m.degree() as f64]).expect("single ratio"),
        ));
    }
    Ok(None)
}

fn run_alpha(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
    emit_svg: bool,
) -> Result<Value, RunError> {
    let (records, stop) = run_orbit_records(config, resolved, true)?;
    let profile = pick_profile(config, resolved)?;
    let est = alpha_estimate(&records, config.tail_window, profile.as_ref())
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let rows: Vec<Vec<String>> = records
        .iter()
        .skip(1)
        .zip(&est.sequence)
        .map(|(r, root)| vec![r.n.to_string(), fmt_real(r.height), fmt_real(*root)])
        .collect();
    files.push(("alpha.csv".into(), csv_bytes(&["n", "h", "root"], &rows)));
    if emit_svg {
        let series: Vec<(f64, f64)> = records
            .iter()
            .skip(1)
            .zip(&est.sequence)
            .map(|(r, root)| (r.n as f64, *root))
            .collect();
        files.push((
            "alpha.svg".into(),
            svg_line_chart(&series, "max{1,h_n}^(1/n)", "root", config.svg_log_y).into_bytes(),
        ));
    }
    Ok(json!({
        "stop_reason": stop.to_string(),
        "alpha_lower": est.alpha_lower,
        "alpha_upper": est.alpha_upper,
        "classified_value": est.classified_value,
        "tail_window": config.tail_window,
        "profile_mu": profile.as_ref().map(|p| p.mu_seq().to_vec()),
        "profile_peak": profile.as_ref().and_then(|p| p.peak()),
    }))
}

fn run_recursion(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
) -> Result<Value, RunError> {
    let params = need(&config.recursion, "a recursion parameter block")?;
    if !(params.eta > 0.0 && params.eta < 1.0) {
        return Err(RunError::Validation("eta must lie in (0,1)".into()));
    }
    let (records, stop) = run_orbit_records(config, resolved, true)?;
    let heights: Vec<f64> = records.iter().map(|r| r.height).collect();
    let report = recursion_verify(
        &heights,
        params.mu_l,
        params.mu_l_plus_1,
        params.m,
        params.eta,
        params.n0,
        params.s,
        params.violation_floor,
    )
    .map_err(|e| RunError::Validation(e.to_string()))?;
    let mut rows = Vec::new();
    let sub: Vec<f64> = (0..)
        .map(|j| params.m * j + params.s)
        .take_while(|&idx| idx < heights.len())
        .map(|idx| heights[idx])
        .collect();
    let rate = (params.eta * params.mu_l).powi(params.m as i32);
    for n in params.n0..sub.len() {
        if sub[n] <= 0.0 {
            continue;
        }
        let mut scale = 1.0;
        for k in 0..sub.len() - n {
            rows.push(vec![
                n.to_string(),
                k.to_string(),
                fmt_real(sub[n + k] / (scale * sub[n])),
            ]);
            scale *= rate;
        }
    }
    files.push(("recursion.csv".into(), csv_bytes(&["n", "k", "ratio"], &rows)));
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|(n, k, r)| json!({"n": n, "k": k, "ratio": r}))
        .collect();
    Ok(json!({
        "stop_reason": stop.to_string(),
        "best_c": report.best_c,
        "violations": violations,
        "pairs_checked": report.pairs_checked,
        "mu_l": params.mu_l,
        "mu_l_plus_1": params.mu_l_plus_1,
        "m": params.m,
        "eta": params.eta,
        "n0": params.n0,
        "s": params.s,
        "violation_floor": params.violation_floor,
    }))
}

fn run_cocycle(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
    emit_svg: bool,
) -> Result<Value, RunError> {
    let morphism = resolved.morphism.as_ref().ok_or_else(|| {
        RunError::Validation("cocycle experiments need a certified morphism of P^1".into())
    })?;
    let start = need(&resolved.start, "a start point")?;
    let point = start
        .as_single()
        .ok_or_else(|| RunError::Validation("cocycle start must be a single P^1 point".into()))?;
    if point.dim() != 1 {
        return Err(RunError::Validation("cocycle start must lie on P^1".into()));
    }
    let n_max = config.cocycle_n_max.unwrap_or_else(|| {
        if morphism.degree() <= 1 {
            return config.n_max.max(1) as u32;
        }
        let mut n = 0u32;
        let mut d: u64 = 1;
        while d.saturating_mul(morphism.degree() as u64) <= config.degree_cap {
            d *= morphism.degree() as u64;
            n += 1;
        }
        n.max(1)
    });
    let table = backward_cocycle(morphism, point, n_max, config.degree_cap).map_err(budget)?;
    let window = config.tail_window.min(n_max as usize);
    let (e_lo, e_hi) =
        e_minus_estimate(&table, window).map_err(|e| RunError::Validation(e.to_string()))?;
    let rows: Vec<Vec<String>> = table
        .entries
        .iter()
        .zip(&table.roots)
        .enumerate()
        .map(|(n, (k, r))| vec![n.to_string(), k.to_string(), fmt_real(*r)])
        .collect();
    files.push(("cocycle.csv".into(), csv_bytes(&["n", "kappa", "root"], &rows)));
    if emit_svg {
        let series: Vec<(f64, f64)> = table
            .roots
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, r)| (n as f64, *r))
            .collect();
        files.push((
            "cocycle.svg".into(),
            svg_line_chart(&series, "kappa_{-n}^(1/n)", "root", config.svg_log_y).into_bytes(),
        ));
    }
    Ok(json!({
        "n_max": n_max,
        "entries": table.entries,
        "e_minus_lower": e_lo,
        "e_minus_upper": e_hi,
        "tail_window": window,
        "degree_cap": config.degree_cap,
    }))
}

fn run_ratio(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
    emit_svg: bool,
) -> Result<Value, RunError> {
    let spec = need(&resolved.subscheme, "a subscheme")?;
    let (records, stop) = run_orbit_records(config, resolved, true)?;
    if records
        .first()
        .map(|r| r.point.as_single().is_none())
        .unwrap_or(false)
    {
        return Err(RunError::Validation(
            "ratio experiments run on projective-space orbits, not products".into(),
        ));
    }
    let series = ratio_series(&records, spec, &resolved.places)
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let theta = config.theta.unwrap_or(0.5);
    let grid = default_d_grid(records.len().saturating_sub(1));
    let (return_set, profile) = threshold_return_set(&series, theta, &grid);
    let rows: Vec<Vec<String>> = series
        .entries
        .iter()
        .map(|e| {
            vec![
                e.n.to_string(),
                fmt_real(e.numerator),
                fmt_real(e.denominator),
                fmt_real(e.ratio),
            ]
        })
        .collect();
    files.push((
        "ratio.csv".into(),
        csv_bytes(&["n", "numerator", "denominator", "ratio"], &rows),
    ));
    files.push(("ratio_density.csv".into(), density_csv(&profile)));
    // coordinate-size ratios for the last coordinate, the complement view
    // of proximity to that coordinate hyperplane
    if let Some(first) = records.first().and_then(|r| r.point.as_single()) {
        let k = first.dim();
        let (coords, _) = coordinate_ratio_series(&records, k);
        let rows: Vec<Vec<String>> = coords
            .iter()
            .map(|e| vec![e.n.to_string(), fmt_real(e.ratio)])
            .collect();
        files.push((
            "coordinate_ratio.csv".into(),
            csv_bytes(&["n", "ratio"], &rows),
        ));
    }
    if emit_svg {
        let series_pts: Vec<(f64, f64)> = series
            .entries
            .iter()
            .map(|e| (e.n as f64, e.ratio))
            .collect();
        files.push((
            "ratio.svg".into(),
            svg_line_chart(&series_pts, "local height / height", "ratio", config.svg_log_y)
                .into_bytes(),
        ));
    }
    // the conditional hypothesis, when the fiber side is computable
    let hypothesis = match (&resolved.morphism, spec) {
        (Some(m), SubschemeSpec::Points(_)) => {
            let window = config.tail_window;
            let n_max = config.cocycle_n_max.unwrap_or(6);
            match check_hypothesis(
                m,
                spec,
                &records,
                n_max,
                window,
                config.degree_cap,
                pick_profile(config, resolved)?.as_ref(),
            ) {
                Ok(rep) => json!({
                    "label": rep.label(),
                    "holds": rep.holds,
                    "e_lower": rep.e_lower,
                    "e_upper": rep.e_upper,
                    "alpha_lower": rep.alpha.alpha_lower,
                    "alpha_upper": rep.alpha.alpha_upper,
                    "alpha_classified": rep.alpha.classified_value,
                }),
                Err(msg) => json!({"label": "unchecked", "reason": msg}),
            }
        }
        _ => json!({"label": "unchecked", "reason": "needs a P^1 morphism and a points-mode subscheme"}),
    };
    Ok(json!({
        "stop_reason": stop.to_string(),
        "skipped": series.skipped,
        "theta": theta,
        "return_set": return_set,
        "return_density_summary": profile.summary,
        "hypothesis": hypothesis,
    }))
}

fn density_csv(profile: &DensityProfile) -> Vec<u8> {
    let rows: Vec<Vec<String>> = profile
        .entries
        .iter()
        .map(|e| {
            vec![
                e.d.to_string(),
                e.max_count.to_string(),
                (e.d + 1).to_string(),
                fmt_real(e.value),
            ]
        })
        .collect();
    csv_bytes(&["d", "max_count", "window", "value"], &rows)
}

fn run_density(
    config: &ExperimentConfig,
    files: &mut Vec<(String, Vec<u8>)>,
    emit_svg: bool,
) -> Result<Value, RunError> {
    let dc = need(&config.density, "a density block")?;
    let set: Vec<usize> = match &dc.set {
        SetConfig::MultiplesOf(k) => {
            if *k == 0 {
                return Err(RunError::Validation("multiples_of needs k >= 1".into()));
            }
            (0..=dc.horizon).step_by(*k as usize).collect()
        }
        SetConfig::Squares => (0..)
            .map(|i| i * i)
            .take_while(|&s| s <= dc.horizon)
            .collect(),
        SetConfig::Explicit(vals) => {
            let mut v: Vec<usize> = vals.iter().cloned().filter(|&a| a <= dc.horizon).collect();
            v.sort();
            v.dedup();
            v
        }
    };
    let grid = match &dc.d_grid {
        Some(g) => g.clone(),
        None => default_d_grid(dc.horizon),
    };
    let profile = banach_profile(&set, dc.horizon, &grid);
    files.push(("density.csv".into(), density_csv(&profile)));
    if emit_svg {
        let series: Vec<(f64, f64)> = profile
            .entries
            .iter()
            .map(|e| (e.d as f64, e.value))
            .collect();
        files.push((
            "density.svg".into(),
            svg_line_chart(&series, "window occupancy maxima", "density", config.svg_log_y)
                .into_bytes(),
        ));
    }
    Ok(json!({
        "horizon": dc.horizon,
        "set_size": set.len(),
        "density_summary": profile.summary,
        "windows_computed": profile.entries.len(),
    }))
}

fn run_roth(
    config: &ExperimentConfig,
    resolved: &crate::config::Resolved,
    files: &mut Vec<(String, Vec<u8>)>,
) -> Result<Value, RunError> {
    let spec = need(&resolved.subscheme, "a points-mode subscheme")?;
    let eps = *need(&config.epsilon, "epsilon")?;
    let bound = *need(&config.height_bound, "height_bound")?;
    if eps <= 0.0 {
        return Err(RunError::Validation("epsilon must be positive".into()));
    }
    let weight =
        multiplicity_weight(spec).map_err(|e| RunError::Validation(e.to_string()))?;
    let scan = roth_scan(spec, &resolved.places, eps, bound)
        .map_err(|e| RunError::Validation(e.to_string()))?;
    let rows: Vec<Vec<String>> = scan
        .violators
        .iter()
        .map(|v| {
            vec![
                v.point.to_string(),
                fmt_real(v.height),
                fmt_real(v.lambda_sum),
                fmt_real(v.bound),
            ]
        })
        .collect();
    files.push((
        "roth.csv".into(),
        csv_bytes(&["point", "height", "lambda_sum", "bound"], &rows),
    ));
    Ok(json!({
        "epsilon": eps,
        "height_bound": bound,
        "height_limit": scan.height_limit,
        "points_scanned": scan.points_scanned,
        "multiplicity_weight": weight,
        "violators": scan.violators.iter().map(|v| v.point.to_string()).collect::<Vec<_>>(),
    }))
}
