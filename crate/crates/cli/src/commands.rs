//! Command implementations. Each returns `Ok(violated)` where `violated`
//! signals that at least one bound verdict failed (exit code 3).

use crate::dump::dump_state;
use crate::report::{fmt_f64, Report};
use crate::rows;
use crate::{BackendArg, Settings};
use gkp_core::bounds::{self, BoundReport};
use gkp_core::circuit::{
    compile_displacement, compile_squeeze, displacement_complexity_lower, serialize, symplectic_of,
};
use gkp_core::protocols::{
    instrument_profile, run_comb, run_gaussification, run_gkp, Backend, GaussifyInput,
};
use gkp_core::sim::{GridAxis, HybridGridState};

use gkp_core::states::{build_state, eta_term, GaussianSum, StateSpec};
use std::path::Path;
use std::time::Instant;

pub enum CmdError {
    Core(gkp_core::Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<gkp_core::Error> for CmdError {
    fn from(e: gkp_core::Error) -> Self {
        CmdError::Core(e)
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e)
    }
}

type CmdResult = Result<bool, CmdError>;

fn config_section(report: &mut Report, settings: &Settings, extra: &[(&str, String)]) {
    let f = report.section("config");
    for (k, v) in extra {
        Report::kv(f, k, v);
    }
    Report::kv(f, "tol", fmt_f64(settings.tol));
    Report::kv(f, "seed", settings.seed);
    Report::kv(f, "workers", settings.workers);
    for (k, v) in settings.config.entries() {
        Report::kv(f, &format!("config.{k}"), v);
    }
}

fn finish(report: &mut Report, settings: &Settings, started: Instant) -> CmdResult {
    finish_with(report, settings, started, true)
}

fn finish_with(
    report: &mut Report,
    settings: &Settings,
    started: Instant,
    write_out: bool,
) -> CmdResult {
    report.set_timing(started.elapsed().as_millis());
    let text = report.render();
    print!("{text}");
    if write_out {
        if let Some(path) = &settings.out {
            std::fs::write(path, &text)?;
        }
    }
    if let Some(path) = &settings.csv {
        std::fs::write(path, report.bounds_csv())?;
    }
    Ok(report.any_violated())
}

pub fn cmd_comb(
    settings: &Settings,
    delta: Option<f64>,
    rounds: Option<u32>,
    dump: Option<&Path>,
) -> CmdResult {
    let started = Instant::now();
    let delta = settings.flag_f64(delta, "delta").map_err(CmdError::Usage)?.unwrap_or(0.04);
    let rounds = match rounds {
        Some(r) => r,
        None => settings.config.get_parsed("rounds").map_err(CmdError::Usage)?.unwrap_or(3),
    };
    let backend = match settings.backend {
        BackendArg::Grid => Backend::Grid,
        BackendArg::Gauss => Backend::GaussianSum,
        // The exact backend is authoritative for the comb stage; the grid is
        // its cross-check.
        BackendArg::Auto => Backend::GaussianSum,
    };
    let out = run_comb(delta, rounds, backend)?;

    let mut report = Report::new();
    config_section(
        &mut report,
        settings,
        &[
            ("command", "comb".into()),
            ("delta", fmt_f64(delta)),
            ("rounds", rounds.to_string()),
            ("backend", backend.to_string()),
        ],
    );
    report.protocol_section(&out.report);
    if let Some(o) = out.backend_overlap_sq {
        let f = report.section("cross-check");
        Report::kvf(f, "backend_overlap_sq", o);
    }
    report.extend_bounds(rows::comb_rows(&out.report));

    if let Some(path) = dump {
        let grid = match &out.grid {
            Some(g) => g.clone(),
            None => {
                let axis = GridAxis::auto((1u32 << rounds) as f64 / 2.0 + 8.0, delta / 4.0)?;
                out.exact.to_grid(axis)?
            }
        };
        dump_state(&grid, path)?;
    }
    finish(&mut report, settings, started)
}

pub fn cmd_gaussify(
    settings: &Settings,
    kappa: Option<f64>,
    l: Option<u32>,
    delta: Option<f64>,
    resolution: Option<f64>,
) -> CmdResult {
    let started = Instant::now();
    let kappa = settings.flag_f64(kappa, "kappa").map_err(CmdError::Usage)?.unwrap_or(0.2);
    let delta = settings.flag_f64(delta, "delta").map_err(CmdError::Usage)?.unwrap_or(0.01);
    let l = match l {
        Some(v) => v,
        None => settings.config.get_parsed("l").map_err(CmdError::Usage)?.unwrap_or(8),
    };
    let eps = delta.sqrt();
    let comb = build_state(StateSpec::TruncatedComb { l, delta, eps }, settings.tol)?;
    let input = GaussifyInput::pure(comb.clone())?;
    let out = run_gaussification(&input, kappa, delta, l, resolution)?;

    // Conditional overlap against the pointwise-envelope reference state.
    let eta = GaussianSum::new(vec![eta_term(kappa)]);
    let prof = instrument_profile(
        &eta,
        &comb,
        out.ensemble.region,
        resolution.unwrap_or_else(|| gkp_core::protocols::gaussify::default_resolution(kappa)),
    )?;

    let mut report = Report::new();
    let effective_res = resolution
        .unwrap_or_else(|| gkp_core::protocols::gaussify::default_resolution(kappa));
    config_section(
        &mut report,
        settings,
        &[
            ("command", "gaussify".into()),
            ("kappa", fmt_f64(kappa)),
            ("delta", fmt_f64(delta)),
            ("L", l.to_string()),
            ("resolution", fmt_f64(effective_res)),
        ],
    );
    report.protocol_section(&out.report);
    {
        let f = report.section("instrument");
        Report::kvf(f, "p0", prof.p0);
        Report::kvf(f, "p_region", prof.p_region);
        Report::kvf(f, "conditional_overlap", prof.conditional_overlap);
    }
    report.extend_bounds(rows::gaussify_rows(
        kappa,
        delta,
        l,
        0.0,
        out.report.p_acc.unwrap_or(0.0),
        out.report.fidelity_to_target,
        Some(prof.conditional_overlap),
    ));
    finish(&mut report, settings, started)
}

pub fn cmd_gkp(settings: &Settings, kappa: Option<f64>, delta: Option<f64>) -> CmdResult {
    let started = Instant::now();
    let kappa = settings.flag_f64(kappa, "kappa").map_err(CmdError::Usage)?.unwrap_or(0.2);
    let delta = settings.flag_f64(delta, "delta").map_err(CmdError::Usage)?.unwrap_or(0.01);
    let out = run_gkp(kappa, delta, settings.protocol_backend())?;

    let mut report = Report::new();
    config_section(
        &mut report,
        settings,
        &[
            ("command", "gkp".into()),
            ("kappa", fmt_f64(kappa)),
            ("delta", fmt_f64(delta)),
        ],
    );
    report.protocol_section(&out.report);
    {
        let f = report.section("comb-stage");
        Report::kvf(f, "fidelity", out.comb.report.fidelity_to_target);
        Report::kvf(f, "xi", out.xi);
    }
    report.extend_bounds(rows::gkp_rows(&out));
    finish(&mut report, settings, started)
}

fn parse_list(arg: Option<&str>, key: &str, default: &[f64]) -> Result<Vec<f64>, CmdError> {
    match arg {
        None => Ok(default.to_vec()),
        Some(s) => s
            .split(',')
            .map(|v| {
                v.trim()
                    .parse()
                    .map_err(|_| CmdError::Usage(format!("cannot parse {key} entry '{v}'")))
            })
            .collect(),
    }
}

pub fn cmd_verify(
    settings: &Settings,
    suite: &str,
    kappa: Option<&str>,
    delta: Option<&str>,
    r: Option<&str>,
    gates: Option<usize>,
    trials: Option<usize>,
) -> CmdResult {
    let started = Instant::now();
    let kappas = parse_list(kappa, "kappa", &[0.01, 0.05, 0.1, 0.2])?;
    let deltas = parse_list(delta, "delta", &[0.01])?;
    let rs = parse_list(r, "r", &[1.0, 2.0, 5.0, 10.0])?;
    let gates = gates.unwrap_or(8);
    let trials = trials.unwrap_or(50);

    let mut report = Report::new();
    config_section(
        &mut report,
        settings,
        &[("command", "verify".into()), ("suite", suite.to_string())],
    );

    let run_one = |name: &str, report: &mut Report| -> Result<(), CmdError> {
        let rows: Vec<BoundReport> = match name {
            "formulas" => bounds::formulas_suite()?,
            "tails" => bounds::tails_suite(&kappas, &deltas, &rs)?,
            "moments" => bounds::moments_suite(gates, trials, settings.seed)?,
            "stability" => bounds::stability_suite(0.2, 0.01, 8)?,
            other => return Err(CmdError::Usage(format!("unknown suite '{other}'"))),
        };
        report.extend_bounds(rows);
        Ok(())
    };

    match suite {
        "all" => {
            for s in ["formulas", "tails", "moments", "stability"] {
                run_one(s, &mut report)?;
            }
        }
        s => run_one(s, &mut report)?,
    }

    let (holds, vacuous, unmet, violated) =
        report.bounds().iter().fold((0, 0, 0, 0), |acc, b| match b.verdict {
            bounds::Verdict::Holds => (acc.0 + 1, acc.1, acc.2, acc.3),
            bounds::Verdict::Vacuous => (acc.0, acc.1 + 1, acc.2, acc.3),
            bounds::Verdict::PreconditionUnmet => (acc.0, acc.1, acc.2 + 1, acc.3),
            bounds::Verdict::Violated => (acc.0, acc.1, acc.2, acc.3 + 1),
        });
    {
        let f = report.section("summary");
        Report::kv(f, "holds", holds);
        Report::kv(f, "vacuous", vacuous);
        Report::kv(f, "precondition_unmet", unmet);
        Report::kv(f, "violated", violated);
    }
    finish(&mut report, settings, started)
}

pub fn cmd_sweep(
    settings: &Settings,
    protocol: Option<&str>,
    kappa: Option<&str>,
    delta: Option<&str>,
) -> CmdResult {
    let started = Instant::now();
    let protocol = protocol.unwrap_or("gkp");
    let kappas = parse_list(kappa, "kappa", &[0.1, 0.2])?;
    let deltas = parse_list(delta, "delta", &[0.01, 0.04])?;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    for &k in &kappas {
        for &d in &deltas {
            cells.push((k, d));
        }
    }

    let run_cell = |&(k, d): &(f64, f64)| -> String {
        match protocol {
            "gkp" => match run_gkp(k, d, Backend::GaussianSum) {
                Ok(out) => {
                    let r = &out.report;
                    let worst = rows::gkp_rows(&out)
                        .iter()
                        .find(|b| !b.is_ok())
                        .map(|b| b.name.clone())
                        .unwrap_or_else(|| "ok".into());
                    format!(
                        "gkp,{},{},{},{},{},{},{},{},{},{},{}",
                        fmt_f64(k),
                        fmt_f64(d),
                        r.rounds.unwrap_or(0),
                        r.peaks.unwrap_or(0),
                        fmt_f64(r.p_acc.unwrap_or(f64::NAN)),
                        fmt_f64(r.fidelity_to_target),
                        fmt_f64(r.delta_p.unwrap_or(f64::NAN)),
                        fmt_f64(r.delta_q.unwrap_or(f64::NAN)),
                        r.op_count.unitaries,
                        r.op_count.total,
                        worst,
                    )
                }
                Err(e) => format!("gkp,{},{},,,,,,,,,error:{e}", fmt_f64(k), fmt_f64(d)),
            },
            "comb" => match run_comb(d, (1.0 / k).log2().floor().max(1.0) as u32, Backend::GaussianSum)
            {
                Ok(out) => {
                    let r = &out.report;
                    format!(
                        "comb,{},{},{},{},,{},,,{},{},ok",
                        fmt_f64(k),
                        fmt_f64(d),
                        r.rounds.unwrap_or(0),
                        r.peaks.unwrap_or(0),
                        fmt_f64(r.fidelity_to_target),
                        r.op_count.unitaries,
                        r.op_count.total,
                    )
                }
                Err(e) => format!("comb,{},{},,,,,,,,,error:{e}", fmt_f64(k), fmt_f64(d)),
            },
            other => format!("{other},,,,,,,,,,,error:unknown protocol"),
        }
    };

    let rows: Vec<String> = if settings.workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(settings.workers)
            .build()
            .map_err(|e| CmdError::Usage(format!("cannot build worker pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            cells.par_iter().map(run_cell).collect()
        })
    } else {
        cells.iter().map(run_cell).collect()
    };

    let mut csv = String::from(
        "protocol,kappa,delta,rounds,peaks,p_acc,fidelity,delta_p,delta_q,op_unitaries,op_total,verdict\n",
    );
    for row in &rows {
        csv.push_str(row);
        csv.push('\n');
    }
    print!("{csv}");
    if let Some(path) = &settings.csv {
        std::fs::write(path, &csv)?;
    }
    if let Some(path) = &settings.out {
        std::fs::write(path, &csv)?;
    }
    // Cells that cannot run (e.g. parameters outside a protocol's range) are
    // recorded in their row but are not bound violations; only a violated
    // verdict inside a completed cell fails the sweep.
    let violated = rows
        .iter()
        .any(|r| !r.ends_with(",ok") && !r.contains("error:"));
    let _ = started;
    Ok(violated && !settings.force)
}

pub fn cmd_compile(
    settings: &Settings,
    displacement: Option<&str>,
    squeeze: Option<f64>,
) -> CmdResult {
    let started = Instant::now();
    let mut report = Report::new();
    let (circuit, count) = match (displacement, squeeze) {
        (Some(spec), None) => {
            let (dq, dp) = parse_pair(spec)?;
            let (c, n) = compile_displacement(dq, dp)?;
            let norm = (dq * dq + dp * dp).sqrt();
            config_section(
                &mut report,
                settings,
                &[("command", "compile".into()), ("displacement", spec.to_string())],
            );
            if norm > 0.0 {
                let (full, simplified) = displacement_complexity_lower(dq, dp)?;
                let f = report.section("complexity");
                Report::kv(f, "count", n);
                Report::kvf(f, "upper_bound", 2.0 * norm.ln().abs().ceil() + 3.0);
                Report::kvf(f, "lower_bound", full);
                Report::kvf(f, "lower_bound_simplified", simplified);
                report.push_bound(BoundReport::upper(
                    "compile.count_ceiling",
                    format!("d=({dq},{dp})"),
                    n as f64,
                    (2.0 * norm.ln().abs().ceil() + 3.0).max(1.0),
                    f64::INFINITY,
                    true,
                ));
                report.push_bound(BoundReport::lower(
                    "compile.count_floor",
                    format!("d=({dq},{dp})"),
                    n as f64,
                    simplified,
                    0.0,
                    true,
                ));
            }
            (c, n)
        }
        (None, Some(z)) => {
            let (c, n) = compile_squeeze(z);
            config_section(
                &mut report,
                settings,
                &[("command", "compile".into()), ("squeeze", fmt_f64(z))],
            );
            let f = report.section("complexity");
            Report::kv(f, "count", n);
            (c, n)
        }
        _ => {
            return Err(CmdError::Usage(
                "compile needs exactly one of --displacement dq,dp or --squeeze z".into(),
            ))
        }
    };
    let _ = count;
    // For this command --out names the circuit file; the report goes to stdout.
    let text = serialize::to_text(&circuit);
    {
        let f = report.section("circuit");
        Report::kv(f, "gates", circuit.len());
        if let Some(path) = &settings.out {
            Report::kv(f, "written_to", path.display());
        }
    }
    if let Some(path) = &settings.out {
        std::fs::write(path, &text)?;
    } else {
        print!("{text}");
    }
    finish_with(&mut report, settings, started, false)
}

fn parse_pair(s: &str) -> Result<(f64, f64), CmdError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CmdError::Usage(format!("expected 'dq,dp', got '{s}'")));
    }
    let dq = parts[0]
        .trim()
        .parse()
        .map_err(|_| CmdError::Usage(format!("cannot parse '{}'", parts[0])))?;
    let dp = parts[1]
        .trim()
        .parse()
        .map_err(|_| CmdError::Usage(format!("cannot parse '{}'", parts[1])))?;
    Ok((dq, dp))
}

pub fn cmd_simulate(
    settings: &Settings,
    circuit_path: &Path,
    coherent_target: Option<&str>,
    dump: Option<&Path>,
) -> CmdResult {
    let started = Instant::now();
    let text = std::fs::read_to_string(circuit_path)?;
    let circuit = serialize::from_text(&text)?;
    if circuit.modes != 1 || circuit.qubits != 0 {
        return Err(CmdError::Usage(
            "simulate runs one-mode, qubit-free circuits (as produced by compile)".into(),
        ));
    }

    // Size the grid from the prefix symplectic actions: the narrowest
    // intermediate width sets dx, the farthest displaced, widest intermediate
    // state sets the radius.
    let mut min_width = 1.0f64;
    let mut radius = 10.0f64;
    let mut prefix = gkp_core::circuit::Circuit::permissive(1, 0);
    for g in &circuit.gates {
        prefix.push(g.clone()).map_err(CmdError::Core)?;
        let act = symplectic_of(&prefix)?;
        let ss = &act.s * act.s.transpose();
        let sigma_q = (ss[(0, 0)] / 2.0).sqrt();
        min_width = min_width.min(sigma_q * 2.0f64.sqrt());
        radius = radius.max(act.displacement[0].abs() + 10.0 * sigma_q + 2.0);
    }
    let axis = GridAxis::auto(radius, min_width)?;
    let vac = build_state(StateSpec::Vacuum, settings.tol)?;
    let state = HybridGridState::from_sum(&vac, vec![axis], 0)?.apply_circuit(&circuit)?;

    let mut report = Report::new();
    config_section(
        &mut report,
        settings,
        &[
            ("command", "simulate".into()),
            ("circuit", circuit_path.display().to_string()),
            ("grid_points", axis.n.to_string()),
        ],
    );
    {
        use gkp_core::sim::Observable;
        let q = state.expectation(Observable::Q)?.re;
        let p = state.expectation(Observable::P)?.re;
        let h = state.expectation(Observable::H)?.re;
        let f = report.section("output");
        Report::kvf(f, "mean_q", q);
        Report::kvf(f, "mean_p", p);
        Report::kvf(f, "energy", h);
    }
    if let Some(spec) = coherent_target {
        let (dq, dp) = parse_pair(spec)?;
        let target = gkp_core::sim::displace_sum(&vac, dq, dp);
        let fid = state.reduce_fidelity(&target)?;
        report.push_bound(BoundReport::lower(
            "simulate.coherent_fidelity",
            format!("d=({dq},{dp})"),
            fid,
            1.0 - 1e-8,
            0.0,
            true,
        ));
    }
    if let Some(path) = dump {
        dump_state(&state, path)?;
    }
    finish(&mut report, settings, started)
}
