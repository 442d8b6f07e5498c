//! The named experiments.

use std::collections::BTreeMap;

use rayon::prelude::*;
use semilab_core::cauchy::{probe_outcome, solve_ivp, MaxRegEstimate, Probe, ProbeOutcome};
use semilab_core::grid::{TimeGrid, DEFAULT_NODES_PER_PANEL};
use semilab_core::linop::{spectral_bound, ScanPoint};
use semilab_core::scalar::{re, sub};
use semilab_core::theorem::{
    assemble_u_v, claim1_check, default_mu_grid, halfplane_report, omega1, omega1_weighted, omega2, proof_grid,
    rplus_verdict, surjectivity_identity_check, SurjectivityMaps, OMEGA2_TOLERANCE,
};
use semilab_core::weighted::{dpg_scale, lp_norms, trace_norm_upper, weighted_e1_norm, weighted_maxreg_check, weighted_norm};
use semilab_core::{Forcing, MatrixSolver, OperatorPair, C64};

use crate::config::{Experiment, ExperimentConfig};
use crate::error::{LabError, EXIT_PASS, EXIT_SCIENTIFIC_FAIL};
use crate::fixtures::{default_probes, random_unit_vector, rng};
use crate::parse::{parse_mu_grid, parse_operator, parse_probes};
use crate::report::{num, write_outputs, OperatorInfo, Record, Report, Summary, Table};

pub const IDENTITY_TOLERANCE: f64 = 1e-8;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-6;
pub const MAX_NEUMANN_TERMS_AT_HALF: usize = 60;
pub const DEFAULT_IDENTITY_GRID: &str = "0.5:32:5:-16:16:5";
/// Largest `|beta|` and number of points on the imaginary axis.
pub const AXIS_EXTENT: f64 = 100.0;
pub const AXIS_POINTS: usize = 2001;
/// Distance from the imaginary axis of the near-axis scan points.
pub const AXIS_OFFSET: f64 = 1e-8;
/// Grading levels used by the weighted experiment so that the smallest
/// node resolves the behaviour at `t = 0`.
pub const WEIGHTED_GRADING_LEVELS: usize = 24;
const CLAIM_MUS: [C64; 3] = [C64::new(0.5, 0.0), C64::new(1.0, 2.0), C64::new(4.0, 0.0)];

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.all_pass {
            EXIT_PASS
        } else {
            EXIT_SCIENTIFIC_FAIL
        }
    }
}

/// Number of worker threads requested through `SEMILAB_THREADS`.
pub fn threads_from_env() -> Result<Option<usize>, LabError> {
    match std::env::var("SEMILAB_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::usage(format!("SEMILAB_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

/// Runs the experiment and writes its outputs.
pub fn run(config: &ExperimentConfig) -> Result<Outcome, LabError> {
    let outcome = compute(config)?;
    write_outputs(&config.output_dir, &outcome.report, &outcome.tables)?;
    Ok(outcome)
}

/// [`run`] on a dedicated pool of `threads` workers (all cores if `None`).
pub fn run_with_threads(config: &ExperimentConfig, threads: Option<usize>) -> Result<Outcome, LabError> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        b = b.num_threads(n);
    }
    let pool = b.build().map_err(|e| LabError::usage(format!("cannot start worker threads: {e}")))?;
    pool.install(|| run(config))
}

fn read(path: &std::path::Path) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|source| LabError::Io { context: format!("reading {}", path.display()), source })
}

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    op: OperatorPair,
    summary: Summary,
    pass: BTreeMap<String, bool>,
    notes: Vec<String>,
    records: Vec<Record>,
    tables: Vec<Table>,
}

/// Computes the experiment without writing anything.
pub fn compute(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    cfg.validate()?;
    let op = parse_operator(&read(&cfg.operator_file)?, &cfg.operator_file.display().to_string())?;
    let mut ctx = Ctx {
        cfg,
        summary: Summary { s_a: Some(spectral_bound(op.eigenvalues())), ..Default::default() },
        op,
        pass: BTreeMap::new(),
        notes: Vec::new(),
        records: Vec::new(),
        tables: Vec::new(),
    };
    match cfg.experiment {
        Experiment::Spectrum => spectrum(&mut ctx),
        Experiment::ResolventScan => resolvent_scan(&mut ctx)?,
        Experiment::MaxregEstimate => maxreg_estimate(&mut ctx)?,
        Experiment::IdentityCheck => identity_check(&mut ctx)?,
        Experiment::Reconstruct => reconstruct(&mut ctx)?,
        Experiment::Weighted => weighted(&mut ctx)?,
        Experiment::ThetaSweep => theta_sweep(&mut ctx)?,
        Experiment::Verdict => verdict(&mut ctx)?,
    }
    let all_pass = ctx.pass.values().all(|p| *p);
    Ok(Outcome {
        report: Report {
            experiment: cfg.experiment,
            config: cfg.clone(),
            operator: OperatorInfo::of(&ctx.op),
            summary: ctx.summary,
            pass: ctx.pass,
            all_pass,
            notes: ctx.notes,
            records: ctx.records,
        },
        tables: ctx.tables,
    })
}

impl Ctx<'_> {
    fn probes(&self, op: &OperatorPair) -> Result<Vec<Probe>, LabError> {
        match &self.cfg.probe_file {
            Some(p) => parse_probes(&read(p)?, &p.display().to_string(), op.dim()),
            None => Ok(default_probes(op.dim(), self.cfg.seed)),
        }
    }

    fn solve_grid(&self, op: &OperatorPair) -> Result<TimeGrid, LabError> {
        Ok(TimeGrid::adapted(self.cfg.t_end, self.cfg.panels, DEFAULT_NODES_PER_PANEL, op.operator_norm(), 0.0)?)
    }

    fn mu_grid(&self, default: impl FnOnce() -> Vec<C64>) -> Vec<C64> {
        match &self.cfg.mu_grid {
            Some(g) => parse_mu_grid(g).expect("validated"),
            None => default(),
        }
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.pass.insert(name.to_string(), ok);
    }

    fn detail(&mut self, name: &str, v: impl Into<Option<f64>>) {
        self.summary.details.insert(name.to_string(), v.into());
    }
}

fn outcomes(op: &OperatorPair, grid: &TimeGrid, probes: &[Probe], offset: usize) -> Result<Vec<ProbeOutcome>, LabError> {
    probes
        .par_iter()
        .enumerate()
        .map(|(i, p)| probe_outcome(op, grid, p, offset + i))
        .collect::<Result<Vec<_>, _>>()
        .map_err(LabError::from)
}

fn estimate(op: &OperatorPair, grid: &TimeGrid, probes: &[Probe]) -> Result<MaxRegEstimate, LabError> {
    Ok(MaxRegEstimate::from_outcomes(grid.clone(), &outcomes(op, grid, probes, 0)?)?)
}

/// The data pairs behind the a priori estimate at `(mu, x)`:
/// `(e^{mu t}(mu - A)x, x)` and `(e^{-conj(mu) t} x, 0)`.
fn proof_probes(op: &OperatorPair, mu: C64, x: &[C64]) -> [Probe; 2] {
    [
        Probe::new(Forcing::exp(-mu, op.apply_shifted(mu, x)), x.to_vec()),
        Probe::new(Forcing::exp(mu.conj(), x.to_vec()), vec![C64::new(0.0, 0.0); x.len()]),
    ]
}

fn initial_values(probes: &[Probe], n: usize) -> Vec<Vec<C64>> {
    let xs: Vec<Vec<C64>> = probes.iter().filter(|p| p.forcing == Forcing::Zero && !p.is_homogeneous_ic()).map(|p| p.x.clone()).collect();
    if xs.is_empty() {
        let mut e1 = vec![C64::new(0.0, 0.0); n];
        e1[0] = re(1.0);
        vec![e1]
    } else {
        xs
    }
}

fn probe_table(est: &MaxRegEstimate) -> Table {
    let mut t = Table::new("probes.csv", &["probe_id", "ratio", "M_hat_running"]);
    for (i, (r, m)) in est.ratios.iter().zip(&est.running).enumerate() {
        t.push(vec![i.to_string(), num(*r), num(*m)]);
    }
    t
}

fn spectrum(ctx: &mut Ctx) {
    let mut t = Table::new("spectrum.csv", &["re_lambda", "im_lambda"]);
    for l in ctx.op.eigenvalues() {
        t.push(vec![num(l.re), num(l.im)]);
    }
    ctx.tables.push(t);
}

fn scan_points(op: &OperatorPair, mus: &[C64]) -> Vec<ScanPoint> {
    mus.par_iter().map(|&mu| ScanPoint { mu, resolvent_norm: op.resolvent_norm(mu).ok() }).collect()
}

fn scan_table(scan: &[ScanPoint]) -> Table {
    let mut t = Table::new("scan.csv", &["re_mu", "im_mu", "resolvent_norm", "weighted_norm"]);
    for p in scan {
        t.push(vec![num(p.mu.re), num(p.mu.im), num(p.resolvent_norm), num(p.weighted_norm())]);
    }
    t
}

fn running_records(scan: &[ScanPoint]) -> Vec<Record> {
    let mut running: Option<f64> = None;
    scan.iter()
        .map(|p| {
            if let Some(w) = p.weighted_norm() {
                running = Some(running.map_or(w, |r| r.max(w)));
            }
            Record { n_running: running, ..Record::new(p.mu) }
        })
        .collect()
}

fn resolvent_scan(ctx: &mut Ctx) -> Result<(), LabError> {
    let omega = ctx.summary.s_a.unwrap().max(0.0);
    let mus = ctx.mu_grid(|| default_mu_grid(omega, 5, 21));
    if let Some(mu) = mus.iter().find(|m| !(m.re > omega)) {
        return Err(LabError::usage(format!("mu grid point {mu} is not right of the scan offset {omega}")));
    }
    let scan = scan_points(&ctx.op, &mus);
    let singular = scan.iter().filter(|p| p.resolvent_norm.is_none()).count();
    if singular > 0 {
        ctx.notes.push(format!("{singular} scan points lie on the spectrum"));
    }
    let res = halfplane_report(&ctx.op, omega, scan, None);
    ctx.summary.n = res.report.bound_constant;
    ctx.detail("scan_offset", omega);
    ctx.notes.push("N depends on how close the scan comes to the half-plane boundary".into());
    ctx.records = running_records(&res.report.scan);
    ctx.tables.push(scan_table(&res.report.scan));
    ctx.flag("N_finite", res.report.bound_constant.is_some_and(f64::is_finite));
    Ok(())
}

fn maxreg_estimate(ctx: &mut Ctx) -> Result<(), LabError> {
    let grid = ctx.solve_grid(&ctx.op)?;
    let mut probes = ctx.probes(&ctx.op)?;
    let mut outs = outcomes(&ctx.op, &grid, &probes, 0)?;
    let mut est = MaxRegEstimate::from_outcomes(grid.clone(), &outs)?;
    let mus = ctx.mu_grid(|| CLAIM_MUS.to_vec());
    let xs = initial_values(&probes, ctx.op.dim());
    let pairs: Vec<(C64, Vec<C64>)> = mus.iter().flat_map(|mu| xs.iter().map(move |x| (*mu, x.clone()))).collect();
    let check = |m: f64| -> Result<Vec<bool>, LabError> {
        pairs.iter().map(|(mu, x)| Ok(claim1_check(&ctx.op, &grid, m, *mu, x)?.pass)).collect()
    };
    let first = check(est.m_hat)?;
    let failed: Vec<usize> = (0..pairs.len()).filter(|&i| !first[i]).collect();
    if !failed.is_empty() {
        // a failure only means the probe set missed the relevant data
        let extra: Vec<Probe> = failed.iter().flat_map(|&i| proof_probes(&ctx.op, pairs[i].0, &pairs[i].1)).collect();
        outs.extend(outcomes(&ctx.op, &grid, &extra, probes.len())?);
        probes.extend(extra);
        est = MaxRegEstimate::from_outcomes(grid.clone(), &outs)?;
        ctx.notes.push(format!("{} estimate checks failed with the initial probes; added their proof probes", failed.len()));
    }
    let last = check(est.m_hat)?;
    ctx.summary.m_hat = Some(est.m_hat);
    ctx.summary.c2_hat = Some(est.c2_hat);
    ctx.summary.omega1 = Some(omega1(est.m_hat, ctx.cfg.t_end)?);
    ctx.detail("probe_count", est.probe_count as f64);
    ctx.detail("enrichment_probes", (2 * failed.len()) as f64);
    ctx.notes.push("M_hat is a lower bound for the maximal-regularity constant".into());
    ctx.tables.push(probe_table(&est));
    ctx.flag("claim1", last.iter().all(|p| *p));
    Ok(())
}

fn identity_check(ctx: &mut Ctx) -> Result<(), LabError> {
    let mus = ctx.mu_grid(|| parse_mu_grid(DEFAULT_IDENTITY_GRID).unwrap());
    if let Some(mu) = mus.iter().find(|m| !(m.re > 0.0)) {
        return Err(LabError::usage(format!("mu grid point {mu} needs Re mu > 0")));
    }
    let op = &ctx.op;
    let solver = MatrixSolver::new(op);
    let (t_end, panels, seed) = (ctx.cfg.t_end, ctx.cfg.panels, ctx.cfg.seed);
    let rows = mus
        .par_iter()
        .enumerate()
        .map(|(i, &mu)| -> Result<(f64, f64), LabError> {
            let grid = proof_grid(t_end, panels, op.operator_norm(), mu)?;
            let maps = SurjectivityMaps::new(&solver, mu, &grid)?;
            let x = random_unit_vector(&mut rng(seed, 1000 + i as u64), op.dim());
            let residual = surjectivity_identity_check(op, &maps, &x)?;
            Ok((op.e0().operator(&maps.v_matrix()?), residual))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut worst: f64 = 0.0;
    for (mu, (v, r)) in mus.iter().zip(&rows) {
        worst = worst.max(*r);
        ctx.records.push(Record { v_norm: Some(*v), identity_residual: Some(*r), ..Record::new(*mu) });
    }
    ctx.summary.max_identity_residual = Some(worst);
    ctx.flag("identity_residual", worst <= IDENTITY_TOLERANCE);
    Ok(())
}

fn reconstruct(ctx: &mut Ctx) -> Result<(), LabError> {
    let op = &ctx.op;
    let solver = MatrixSolver::new(op);
    let grid_t = ctx.solve_grid(op)?;
    let w2 = match omega2(&solver, &grid_t, OMEGA2_TOLERANCE) {
        Ok(w) => w,
        Err(e) => {
            ctx.notes.push(format!("omega2 not found: {e}"));
            ctx.flag("omega2_found", false);
            return Ok(());
        }
    };
    ctx.summary.omega2 = Some(w2);
    let mus = ctx.mu_grid(|| default_mu_grid(w2, 3, 5));
    let (t_end, panels, seed) = (ctx.cfg.t_end, ctx.cfg.panels, ctx.cfg.seed);
    struct Row {
        record: Record,
        terms: Option<usize>,
    }
    let rows = mus
        .par_iter()
        .enumerate()
        .map(|(i, &mu)| -> Result<Row, LabError> {
            let mut record = Record::new(mu);
            if !(mu.re > w2) {
                return Ok(Row { record, terms: None });
            }
            let grid = proof_grid(t_end, panels, op.operator_norm(), mu)?;
            let data = assemble_u_v(&solver, mu, &grid)?;
            let y = random_unit_vector(&mut rng(seed, 2000 + i as u64), op.dim());
            let sol = data.resolvent(&y)?;
            let direct = op.resolvent_solve(mu, &y)?;
            record.v_norm = Some(data.v_norm);
            record.reconstruction_error = Some(op.norm0(&sub(&sol.x, &direct)) / op.norm0(&direct));
            record.identity_residual = Some(surjectivity_identity_check(op, &data.maps, &y)?);
            record.n_running = op.resolvent_norm(mu).ok().map(|r| (1.0 + mu.norm()) * r);
            Ok(Row { record, terms: (data.v_norm <= 0.5).then_some(sol.terms) })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let skipped = rows.iter().filter(|r| r.record.reconstruction_error.is_none()).count();
    if skipped > 0 {
        ctx.notes.push(format!("{skipped} grid points with Re mu <= omega2 skipped"));
    }
    let mut running: Option<f64> = None;
    let (mut worst_err, mut worst_res, mut max_terms) = (0.0f64, 0.0f64, 0usize);
    for mut row in rows {
        if let Some(w) = row.record.n_running {
            running = Some(running.map_or(w, |r| r.max(w)));
        }
        row.record.n_running = running;
        worst_err = worst_err.max(row.record.reconstruction_error.unwrap_or(0.0));
        worst_res = worst_res.max(row.record.identity_residual.unwrap_or(0.0));
        max_terms = max_terms.max(row.terms.unwrap_or(0));
        ctx.records.push(row.record);
    }
    ctx.summary.n = running;
    ctx.summary.max_reconstruction_error = Some(worst_err);
    ctx.summary.max_identity_residual = Some(worst_res);
    ctx.summary.max_neumann_terms = Some(max_terms);
    ctx.flag("reconstruction_error", worst_err <= RECONSTRUCTION_TOLERANCE);
    ctx.flag("identity_residual", worst_res <= IDENTITY_TOLERANCE);
    ctx.flag("neumann_terms", max_terms <= MAX_NEUMANN_TERMS_AT_HALF);
    Ok(())
}

fn weighted(ctx: &mut Ctx) -> Result<(), LabError> {
    let op = &ctx.op;
    let (sigma, p, t_end) = (ctx.cfg.sigma, ctx.cfg.p, ctx.cfg.t_end);
    let base = ctx.solve_grid(op)?;
    let levels = WEIGHTED_GRADING_LEVELS.max(base.panels() - ctx.cfg.panels);
    let grid = TimeGrid::graded(t_end, ctx.cfg.panels, DEFAULT_NODES_PER_PANEL, levels)?;
    let mut probes = ctx.probes(op)?;
    let mut outs = outcomes(op, &grid, &probes, 0)?;
    let mut est = MaxRegEstimate::from_outcomes(grid.clone(), &outs)?;

    let mut t = Table::new(
        "weighted.csv",
        &["probe_id", "weighted_norm", "weighted_e1_norm", "membership_ok", "lp_e0", "lp_e1", "trace_norm_upper"],
    );
    let rows = probes
        .par_iter()
        .map(|pr| -> Result<Vec<String>, LabError> {
            let u = solve_ivp(op, &pr.forcing, &pr.x, &grid)?;
            let wn = weighted_norm(op.e0(), &u, sigma)?;
            let we1 = weighted_e1_norm(op, &u, sigma)?;
            let (l0, l1) = lp_norms(op, &u, p)?;
            let trace = if pr.forcing == Forcing::Zero && !pr.is_homogeneous_ic() {
                Some(trace_norm_upper(op, &pr.x, &grid, sigma)?)
            } else {
                None
            };
            Ok(vec![String::new(), num(wn.value), num(we1), wn.membership_ok.to_string(), num(l0), num(l1), num(trace)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut membership = true;
    for (i, mut row) in rows.into_iter().enumerate() {
        row[0] = i.to_string();
        membership &= row[3] == "true";
        t.push(row);
    }

    let mus = ctx.mu_grid(|| vec![re(1.0)]);
    let xs = initial_values(&probes, op.dim());
    let pairs: Vec<(C64, Vec<C64>)> = mus.iter().flat_map(|mu| xs.iter().map(move |x| (*mu, x.clone()))).collect();
    let check = |est: &MaxRegEstimate| -> Result<Vec<(bool, bool)>, LabError> {
        pairs
            .iter()
            .map(|(mu, x)| {
                let w = weighted_maxreg_check(op, &grid, est.m_hat, est.c2_hat, sigma, *mu, x)?;
                Ok((w.estimate.pass, w.endpoint.pass))
            })
            .collect()
    };
    let first = check(&est)?;
    let failed: Vec<usize> = (0..pairs.len()).filter(|&i| !(first[i].0 && first[i].1)).collect();
    if !failed.is_empty() {
        let extra: Vec<Probe> = failed.iter().flat_map(|&i| proof_probes(op, pairs[i].0, &pairs[i].1)).collect();
        outs.extend(outcomes(op, &grid, &extra, probes.len())?);
        probes.extend(extra);
        est = MaxRegEstimate::from_outcomes(grid.clone(), &outs)?;
        ctx.notes.push(format!("{} weighted checks failed with the initial probes; added their proof probes", failed.len()));
    }
    let last = check(&est)?;
    ctx.summary.m_hat = Some(est.m_hat);
    ctx.summary.c2_hat = Some(est.c2_hat);
    ctx.summary.omega1 = Some(omega1_weighted(est.m_hat, t_end, sigma)?);
    ctx.detail("omega1_unweighted", omega1(est.m_hat, t_end)?);
    ctx.detail("sigma", sigma);
    ctx.detail("p", p);
    ctx.notes.push("trace_norm_upper is the norm of t -> e^{tA}x, an upper bound for the trace norm".into());
    ctx.tables.push(t);
    ctx.flag("membership", membership);
    ctx.flag("weighted_estimate", last.iter().all(|c| c.0));
    ctx.flag("weighted_endpoint", last.iter().all(|c| c.1));
    Ok(())
}

fn theta_sweep(ctx: &mut Ctx) -> Result<(), LabError> {
    let thetas: Vec<f64> = match ctx.cfg.theta {
        Some(th) => vec![th],
        None => (1..10).map(|k| k as f64 / 10.0).collect(),
    };
    let omega = ctx.summary.s_a.unwrap().max(0.0);
    let mus = ctx.mu_grid(|| default_mu_grid(omega, 5, 21));
    let mut t = Table::new("theta_sweep.csv", &["theta", "M_hat", "omega1", "N"]);
    let mut finite = true;
    for th in thetas {
        let scaled = dpg_scale(&ctx.op, th)?;
        let grid = ctx.solve_grid(&scaled.op)?;
        let est = estimate(&scaled.op, &grid, &ctx.probes(&scaled.op)?)?;
        let w1 = omega1(est.m_hat, ctx.cfg.t_end)?;
        let scan = scan_points(&scaled.op, &mus);
        let n = halfplane_report(&scaled.op, omega, scan, None).report.bound_constant;
        finite &= n.is_some_and(f64::is_finite);
        t.push(vec![num(th), num(est.m_hat), num(w1), num(n)]);
    }
    ctx.tables.push(t);
    ctx.flag("N_finite", finite);
    Ok(())
}

fn verdict(ctx: &mut Ctx) -> Result<(), LabError> {
    let op = &ctx.op;
    let grid = ctx.solve_grid(op)?;
    let est = estimate(op, &grid, &ctx.probes(op)?)?;
    let w1 = omega1(est.m_hat, ctx.cfg.t_end)?;
    let w2 = match omega2(&MatrixSolver::new(op), &grid, OMEGA2_TOLERANCE) {
        Ok(w) => Some(w),
        Err(e) => {
            ctx.notes.push(format!("omega2 not found: {e}"));
            None
        }
    };
    let betas: Vec<f64> = (0..AXIS_POINTS).map(|k| -AXIS_EXTENT + 2.0 * AXIS_EXTENT * k as f64 / (AXIS_POINTS - 1) as f64).collect();
    let mut mus: Vec<C64> = betas.iter().map(|b| C64::new(AXIS_OFFSET, *b)).collect();
    mus.extend(ctx.mu_grid(|| default_mu_grid(0.0, 5, 21)).into_iter().filter(|m| m.re > 0.0));
    let scan = halfplane_report(op, 0.0, scan_points(op, &mus), None);
    let n = scan.report.bound_constant;
    let v = rplus_verdict(op, &betas, n)?;

    let mut t = Table::new("verdict.csv", &["T", "V_norm"]);
    for (tt, vn) in &v.v_norm_decay {
        t.push(vec![num(*tt), num(*vn)]);
    }
    ctx.summary.m_hat = Some(est.m_hat);
    ctx.summary.c2_hat = Some(est.c2_hat);
    ctx.summary.omega1 = Some(w1);
    ctx.summary.omega2 = w2;
    ctx.summary.omega = w2.map(|w| w.max(w1));
    ctx.summary.n = n;
    ctx.detail("uniform_bound", v.uniform_bound);
    ctx.detail("V_norm_at_T32", v.v_norm_decay.last().map(|x| x.1));
    ctx.tables.push(t);
    let decay_ok = v.v_norm_decays && v.v_norm_decay.last().is_some_and(|x| x.1 < 1e-6);
    ctx.flag("rplus", v.pass);
    ctx.flag("v_norm_decay", decay_ok);
    Ok(())
}
