use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use kspectral::bounds::{boundary_report, ellipse_report, parabola_report, polygon_report, sector_report};
use kspectral::disk_families::{
    ando_form_of_family, disk_deviation, flat_disk_condition, make_family, witness_psi2, zero_multiplicity, FamilySpec,
};
use kspectral::extremal::{optimize_sector, optimize_strip};
use kspectral::linalg::{operator_norm, random};
use kspectral::numrange::{boundary, cardioid_boundary, cardioid_matrix, numerical_radius};
use kspectral::optim::restart_rng;
use kspectral::psi::{psi_from_boundary, psi_with, PsiOptions};
use kspectral::{Complex64, ComplexMatrix};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::matrix_file::MatrixFile;
use crate::report::RunReport;
use crate::svg::boundary_svg;
use crate::CliError;

/// Header of the cardioid-grid CSV.
pub const TABLE1_HEADER: &str = "a,b,psi,uncert,restarts,seconds";

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixFile::from_matrix(m)).expect("matrix serializes")
}

fn value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result serializes")
}

#[derive(Debug, Args)]
pub struct BoundaryArgs {
    /// Matrix file (JSON).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Half-order; the sample has 2n+1 points.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn run_boundary(args: &BoundaryArgs) -> Result<RunReport, CliError> {
    let file = MatrixFile::read(&args.matrix)?;
    let a = file.to_matrix();
    let mut report = RunReport::new("boundary", json!({"matrix": file, "n": args.n}), None);
    let sample = boundary(&a, args.n)?;
    if let Some(path) = &args.csv {
        let mut csv = String::from("re,im\n");
        for p in &sample.points {
            writeln!(csv, "{},{}", p.re, p.im).unwrap();
        }
        write_file(path, &csv)?;
    }
    if let Some(path) = &args.svg {
        write_file(path, &boundary_svg(&sample.points, "W(A)"))?;
    }
    if !sample.smooth {
        report.diagnostics.push(format!("boundary has a flat part (eigenvalue gap {:.3e})", sample.min_gap));
    }
    report.results = json!({
        "points": sample.points.len(),
        "smooth": sample.smooth,
        "min_gap": sample.min_gap,
        "numerical_radius": numerical_radius(&a, args.n)?,
        "norm": operator_norm(&a),
    });
    Ok(report)
}

#[derive(Debug, Args)]
pub struct PsiArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn run_psi(args: &PsiArgs) -> Result<RunReport, CliError> {
    let file = MatrixFile::read(&args.matrix)?;
    let a = file.to_matrix();
    let inputs = json!({"matrix": file, "n": args.n, "restarts": args.restarts});
    let mut report = RunReport::new("psi", inputs, Some(args.seed));
    let opts = PsiOptions { n: args.n, restarts: args.restarts, seed: args.seed, ..Default::default() };
    let r = psi_with(&a, &opts)?;
    if r.normal {
        report.diagnostics.push("normal matrix: ψ = 1 without optimization".into());
    }
    if !r.converged {
        report.diagnostics.push("the maximizing run stopped at its iteration cap".into());
    }
    report.results = json!({
        "psi": r.value,
        "uncertainty": r.uncertainty,
        "per_degree": r.per_degree,
        "argmax_zeros": value(&r.argmax.zeros()),
        "converged": r.converged,
        "normal": r.normal,
    });
    Ok(report)
}

#[derive(Debug, Args)]
pub struct Table1Args {
    /// Cells as `a:b`, comma separated; the full 10×10 grid by default.
    #[arg(long, value_delimiter = ',')]
    pub cells: Vec<String>,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub a: f64,
    pub b: f64,
    pub psi: f64,
    pub uncert: Option<f64>,
    pub restarts: usize,
    pub seconds: f64,
    /// `support` or `cardioid`.
    pub boundary: &'static str,
}

fn parse_cell(s: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Input(format!("cell `{s}` is not of the form a:b"));
    let (a, b) = s.trim().split_once(':').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(CliError::Input(format!("cell ({a}, {b}) outside [0, 1]²")));
    }
    Ok((a, b))
}

/// ψ of the cardioid-family matrix at each cell, one row per cell in input
/// order. The support boundary is used when it is smooth, the arc-length
/// cardioid boundary otherwise.
pub fn run_table1(cells: &[(f64, f64)], n: usize, restarts: usize, seed: u64) -> Result<Vec<Table1Row>, CliError> {
    let opts = PsiOptions { n, restarts, seed, ..Default::default() };
    cells
        .par_iter()
        .map(|&(a, b)| {
            let start = Instant::now();
            let m = cardioid_matrix(a, b);
            let support = boundary(&m, n)?;
            let (sample, kind) = if support.smooth { (support, "support") } else { (cardioid_boundary(a, b, n)?, "cardioid") };
            let r = psi_from_boundary(&m, &sample, &opts)?;
            Ok(Table1Row {
                a,
                b,
                psi: r.value,
                uncert: r.uncertainty,
                restarts,
                seconds: start.elapsed().as_secs_f64(),
                boundary: kind,
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = format!("{TABLE1_HEADER}\n");
    for r in rows {
        let uncert = r.uncert.map(|u| format!("{u:.3e}")).unwrap_or_default();
        writeln!(out, "{},{},{:.6},{uncert},{},{:.3}", r.a, r.b, r.psi, r.restarts, r.seconds).unwrap();
    }
    out
}

pub fn run_table1_command(args: &Table1Args) -> Result<RunReport, CliError> {
    let requested: Vec<(f64, f64)> = if args.cells.is_empty() {
        (1..=10).flat_map(|i| (1..=10).map(move |j| (i as f64 / 10.0, j as f64 / 10.0))).collect()
    } else {
        args.cells.iter().map(|s| parse_cell(s)).collect::<Result<_, _>>()?
    };
    let inputs = json!({"cells": requested, "n": args.n, "restarts": args.restarts});
    let mut report = RunReport::new("table1", inputs, Some(args.seed));
    let mut cells = Vec::new();
    for (a, b) in requested {
        if a == 0.0 || b == 0.0 {
            report.diagnostics.push(format!("cell ({a}, {b}) skipped: degenerate family member"));
        } else {
            cells.push((a, b));
        }
    }
    let rows = run_table1(&cells, args.n, args.restarts, args.seed)?;
    if let Some(path) = &args.csv {
        write_file(path, &table1_csv(&rows))?;
    }
    report.results = json!({"rows": rows});
    Ok(report)
}

#[derive(Debug, Args)]
pub struct StripArgs {
    /// Matrix size, one of 2, 4, 6, 8.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Restrict to the persymmetric ansatz.
    #[arg(long)]
    pub symmetric: bool,
}

pub fn run_strip(args: &StripArgs) -> Result<RunReport, CliError> {
    let inputs = json!({"d": args.d, "restarts": args.restarts, "symmetric": args.symmetric});
    let mut report = RunReport::new("strip", inputs, Some(args.seed));
    let s = optimize_strip(args.d, args.restarts, args.seed, args.symmetric)?;
    let converged = s.runs.iter().filter(|r| r.converged).count();
    report.diagnostics.push(format!("{converged} of {} runs met the simplex tolerances", s.runs.len()));
    report.results = json!({
        "best_found": s.best_found,
        "candidate": value(&s.best),
        "matrix": matrix_json(&s.best.matrix()),
        "runs": value(&s.runs),
    });
    Ok(report)
}

#[derive(Debug, Args)]
pub struct SectorArgs {
    /// Half-angle α in (0, π/2).
    #[arg(long)]
    pub alpha: f64,
    /// Matrix size, 2 or 4.
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Track the d = 2 and d = 4 branches from α near π/2 down to α.
    #[arg(long)]
    pub continuation: bool,
}

pub fn run_sector(args: &SectorArgs) -> Result<RunReport, CliError> {
    let inputs = json!({"alpha": args.alpha, "d": args.d, "restarts": args.restarts, "continuation": args.continuation});
    let mut report = RunReport::new("sector", inputs, Some(args.seed));
    let s = optimize_sector(args.alpha, args.d, args.restarts, args.seed, args.continuation)?;
    for step in &s.trace {
        for e in &step.errors {
            report.diagnostics.push(format!("α = {:.4}: {e}", step.alpha));
        }
    }
    report.results = json!({
        "best_found": s.best_found,
        "candidate": value(&s.best),
        "matrix": matrix_json(&s.best.matrix()),
        "runs": value(&s.runs),
        "trace": value(&s.trace),
    });
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DomainKind {
    Sector,
    Strip,
    Polygon,
    Ellipse,
    Parabola,
    Matrix,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub domain: DomainKind,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub sides: Option<usize>,
    #[arg(long)]
    pub eccentricity: Option<f64>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Boundary sample size for the total variation and conformal bounds.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

fn required<T: Copy>(x: Option<T>, flag: &str, domain: &str) -> Result<T, CliError> {
    x.ok_or_else(|| CliError::Input(format!("--domain {domain} requires --{flag}")))
}

pub fn run_bounds(args: &BoundsArgs) -> Result<RunReport, CliError> {
    let nodes = 2 * args.n + 1;
    let (inputs, r) = match args.domain {
        DomainKind::Sector => {
            let alpha = required(args.alpha, "alpha", "sector")?;
            (json!({"domain": "sector", "alpha": alpha}), sector_report(alpha)?)
        }
        DomainKind::Strip => (json!({"domain": "strip"}), sector_report(0.0)?),
        DomainKind::Polygon => {
            let m = required(args.sides, "sides", "polygon")?;
            if m < 3 {
                return Err(CliError::Input(format!("a polygon needs at least 3 sides, got {m}")));
            }
            (json!({"domain": "polygon", "sides": m, "nodes": nodes}), polygon_report(m, nodes)?)
        }
        DomainKind::Ellipse => {
            let e = required(args.eccentricity, "eccentricity", "ellipse")?;
            (json!({"domain": "ellipse", "eccentricity": e, "nodes": nodes}), ellipse_report(e, nodes)?)
        }
        DomainKind::Parabola => (json!({"domain": "parabola"}), parabola_report()),
        DomainKind::Matrix => {
            let path = args.matrix.as_ref().ok_or_else(|| CliError::Input("--domain matrix requires --matrix".into()))?;
            let file = MatrixFile::read(path)?;
            let sample = boundary(&file.to_matrix(), args.n)?;
            (json!({"domain": "matrix", "matrix": file, "n": args.n}), boundary_report(&sample)?)
        }
    };
    let mut report = RunReport::new("bounds", inputs, None);
    if !r.consistent {
        report.diagnostics.push("some lower bound exceeds some upper bound".into());
    }
    report.results = json!({
        "best_lower": r.best_lower(),
        "best_upper": r.best_upper(),
        "report": value(&r),
    });
    Ok(report)
}

#[derive(Debug, Args)]
pub struct DiskfamArgs {
    /// 1 or 2.
    #[arg(long)]
    pub family: u8,
    #[arg(long, default_value_t = 0.0)]
    pub xi_re: f64,
    #[arg(long, default_value_t = 0.0)]
    pub xi_im: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.0)]
    pub psi: f64,
    #[arg(long, default_value_t = 24)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size ‖E‖ of random perturbations for the local-maximum probe.
    #[arg(long)]
    pub probe: Option<f64>,
    #[arg(long, default_value_t = 4)]
    pub probes: usize,
    #[arg(long, default_value_t = 64)]
    pub n: usize,
}

/// Stream tag for the perturbation probe.
const PROBE_TAG: u64 = 0x9b0e;

pub fn run_diskfam(args: &DiskfamArgs) -> Result<RunReport, CliError> {
    let spec = match args.family {
        1 => FamilySpec::Family1 { xi: Complex64::new(args.xi_re, args.xi_im) },
        2 => FamilySpec::Family2 { phi: args.phi, psi: args.psi },
        f => return Err(CliError::Input(format!("unknown family {f}; expected 1 or 2"))),
    };
    let inputs = json!({"spec": spec, "restarts": args.restarts, "probe": args.probe, "probes": args.probes, "n": args.n});
    let mut report = RunReport::new("diskfam", inputs, Some(args.seed));
    let a = make_family(&spec)?;
    let flat = flat_disk_condition(&ando_form_of_family(&spec)?)?;
    let witness = witness_psi2(&spec)?;
    let opts = PsiOptions { n: args.n, restarts: args.restarts, seed: args.seed, ..Default::default() };
    let psi_disk = kspectral::psi::psi_disk_with(&a, &opts)?;
    let mut probe = Value::Null;
    if let Some(eps) = args.probe {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(CliError::Input(format!("--probe must be positive, got {eps}")));
        }
        let mut values = Vec::new();
        for k in 0..args.probes {
            let mut rng = restart_rng(args.seed, PROBE_TAG, k as u64);
            let e = random::gaussian_matrix(&mut rng, a.nrows());
            let e = &e * Complex64::new(eps / operator_norm(&e), 0.0);
            match psi_with(&(&a + e), &opts) {
                Ok(r) => values.push(Some(r.value)),
                Err(err) => {
                    report.diagnostics.push(format!("probe {k}: {err}"));
                    values.push(None);
                }
            }
        }
        let max = values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max);
        probe = json!({"eps": eps, "values": values, "max": max.is_finite().then_some(max)});
    }
    report.results = json!({
        "matrix": matrix_json(&a),
        "flat_disk_condition": flat,
        "disk_deviation": disk_deviation(&a, args.n)?,
        "witness": {
            "zeros": value(&witness.g.zeros()),
            "target_re": witness.target.re,
            "target_im": witness.target.im,
            "residual": witness.residual,
            "norm": witness.norm,
        },
        "psi_disk": psi_disk.value,
        "zero_multiplicity": zero_multiplicity(&a)?,
        "probe": probe,
    });
    Ok(report)
}
