//! Campaign driver: one function per command, each producing a [`VerificationReport`].
//!
//! Trial `i` of a campaign draws from stream `i` of the seeded generator (offset
//! by `p_index << 32` when a command loops over several exponents), so reports
//! are reproducible from `(config, seed)` alone.

use std::time::Instant;

use gls_core::convexity::{
    delta_lp_exact, delta_lp_lower_bound, refined_triangle_check, wcoc_bound_thm21, wcoc_bound_thm31, ExampleCheck,
    ExampleKind, VIOLATION_TOL,
};
use gls_core::moc::{random_sweep, two_atom_directed, MocTarget};
use gls_core::psi::btheta_norm;
use gls_core::sampling::{random_ball_pair, trial_rng, SamplerConfig};
use gls_core::{GlSpaceF64, OptConfig, PsiSpecF64, SimpleFunctionF64};

use crate::config::{fmt_num, CampaignConfig, Command};
use crate::report::VerificationReport;
use crate::HarnessError;

/// Maximum number of violating pairs written out per campaign.
const MAX_SAVED_VIOLATIONS: usize = 10;

pub fn run_campaign(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let mut report = match config.command {
        Command::Norm => run_norm(config)?,
        Command::Moc => run_moc(config)?,
        Command::VerifyTriangle => run_triangle(config)?,
        Command::VerifyThm21 | Command::VerifyThm31 => run_wcoc(config)?,
        Command::VerifyExamples => run_examples(config)?,
        Command::SweepMoc => run_sweep_moc(config)?,
        Command::SweepSubgaussian => run_sweep_subgaussian(config)?,
    };
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Recomputes the slack of a stored pair for the verification commands.
///
/// `p` selects the exponent for `verify-triangle` (defaults to the first configured one).
pub fn reevaluate(
    config: &CampaignConfig,
    p: Option<f64>,
    x: &SimpleFunctionF64,
    y: &SimpleFunctionF64,
) -> Result<f64, HarnessError> {
    match config.command {
        Command::VerifyTriangle => {
            let p = p.unwrap_or_else(|| triangle_exponents(config)[0]);
            Ok(refined_triangle_check(x, y, p)?.slack)
        }
        Command::VerifyThm21 => Ok(wcoc_bound_thm21(x, y, &space_for(config)?)?.slack),
        Command::VerifyThm31 => Ok(wcoc_bound_thm31(x, y, &space_for(config)?)?.slack),
        Command::VerifyExamples => {
            let space = space_for(config)?;
            let d = example_bound(config, &space)?;
            Ok(ExampleCheck::new(&space, d)?.check(x, y)?.slack)
        }
        other => Err(HarnessError::Config(format!("`{other}` has no per-pair slack"))),
    }
}

fn default_interval(command: Command) -> (f64, f64) {
    match command {
        Command::VerifyThm31 => (2.5, 8.0),
        Command::VerifyExamples => (1.5, 2.0),
        Command::SweepSubgaussian => (1.0, f64::INFINITY),
        _ => (1.2, 2.0),
    }
}

fn space_for(config: &CampaignConfig) -> Result<GlSpaceF64, HarnessError> {
    let (da, db) = default_interval(config.command);
    let a = config.a.unwrap_or(da);
    let b = config.b.unwrap_or(db);
    let spec = match config.command {
        Command::SweepSubgaussian => "power_root:m=2",
        _ => config.psi.as_deref().unwrap_or("const:c=1"),
    };
    let psi = PsiSpecF64::parse(spec, a, b)?;
    let opt = OptConfig { p_max: config.p_max, ..OptConfig::default() };
    Ok(GlSpaceF64::with_config(psi, opt))
}

fn sampler(config: &CampaignConfig) -> SamplerConfig {
    SamplerConfig { atoms_min: config.atoms_min, atoms_max: config.atoms_max }
}

fn stream(p_index: usize, trial: usize) -> u64 {
    ((p_index as u64) << 32) | trial as u64
}

fn draw_pair<N>(
    config: &CampaignConfig,
    p_index: usize,
    trial: usize,
    norm: N,
) -> (SimpleFunctionF64, SimpleFunctionF64)
where
    N: Fn(&SimpleFunctionF64) -> f64,
{
    let mut rng = trial_rng(config.seed, stream(p_index, trial));
    let (x, y) = random_ball_pair(&mut rng, &sampler(config), norm);
    if config.degenerate {
        (x.clone(), x)
    } else {
        (x, y)
    }
}

fn flag(b: bool) -> String {
    u8::from(b).to_string()
}

/// Running min/mean of slacks plus the worst pair and saved violations.
struct SlackTracker {
    count: usize,
    sum: f64,
    min: f64,
    worst: Option<(String, SimpleFunctionF64, SimpleFunctionF64)>,
    violations: usize,
    saved: Vec<(String, SimpleFunctionF64)>,
}

impl SlackTracker {
    fn new() -> Self {
        Self { count: 0, sum: 0.0, min: f64::INFINITY, worst: None, violations: 0, saved: Vec::new() }
    }

    fn record(&mut self, label: String, slack: f64, x: &SimpleFunctionF64, y: &SimpleFunctionF64) -> bool {
        self.count += 1;
        self.sum += slack;
        if slack < self.min || self.worst.is_none() {
            self.min = slack;
            self.worst = Some((label.clone(), x.clone(), y.clone()));
        }
        let violation = slack < -VIOLATION_TOL;
        if violation {
            self.violations += 1;
            if self.saved.len() < 2 * MAX_SAVED_VIOLATIONS {
                self.saved.push((format!("violation_{label}_x"), x.clone()));
                self.saved.push((format!("violation_{label}_y"), y.clone()));
            }
        }
        violation
    }

    fn finish(self, report: &mut VerificationReport) {
        report.summary.push(("trials_evaluated".into(), self.count.to_string()));
        report.summary.push(("min_slack".into(), fmt_num(self.min)));
        let mean = if self.count > 0 { self.sum / self.count as f64 } else { f64::NAN };
        report.summary.push(("mean_slack".into(), fmt_num(mean)));
        report.summary.push(("violations".into(), self.violations.to_string()));
        if let Some((label, x, y)) = self.worst {
            report.summary.push(("worst_trial".into(), label));
            report.pairs.push(("worst_x".into(), x));
            report.pairs.push(("worst_y".into(), y));
        }
        report.pairs.extend(self.saved);
        report.violations = self.violations;
    }
}

fn triangle_exponents(config: &CampaignConfig) -> Vec<f64> {
    if config.p.is_empty() {
        vec![2.0]
    } else {
        config.p.clone()
    }
}

fn run_triangle(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let columns =
        vec!["p", "trial", "atoms", "norm_x", "norm_y", "diff_norm", "sum_norm", "delta", "slack", "violation"];
    let mut report = VerificationReport::new(config, columns);
    report.asserting = true;
    let mut tracker = SlackTracker::new();
    for (pi, &p) in triangle_exponents(config).iter().enumerate() {
        if !(p.is_finite() && p > 1.0) {
            return Err(HarnessError::Config(format!("verify-triangle needs p > 1, got {p}")));
        }
        for trial in 0..config.trials {
            let (x, y) = draw_pair(config, pi, trial, |f| f.profile().lp_norm(p));
            let c = refined_triangle_check(&x, &y, p)?;
            let violation = tracker.record(format!("p{pi}_t{trial}"), c.slack, &x, &y);
            report.rows.push(vec![
                fmt_num(p),
                trial.to_string(),
                x.values().len().to_string(),
                fmt_num(c.norm_x),
                fmt_num(c.norm_y),
                fmt_num(c.diff_norm),
                fmt_num(c.sum_norm),
                fmt_num(c.delta),
                fmt_num(c.slack),
                flag(violation),
            ]);
        }
    }
    tracker.finish(&mut report);
    Ok(report)
}

fn run_wcoc(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let space = space_for(config)?;
    let columns = vec![
        "trial",
        "atoms",
        "norm_x",
        "norm_y",
        "functional",
        "arg_p",
        "bound",
        "lhs",
        "slack",
        "stated_form_slack",
        "chain_bound",
        "chain_slack",
        "vacuous",
        "converged",
        "violation",
    ];
    let mut report = VerificationReport::new(config, columns);
    report.asserting = true;
    let mut tracker = SlackTracker::new();
    let (mut vacuous, mut stated_gaps, mut chain_failures, mut unconverged) = (0usize, 0usize, 0usize, 0usize);
    for trial in 0..config.trials {
        let (x, y) = draw_pair(config, 0, trial, |f| space.norm(f).value);
        let c = if config.command == Command::VerifyThm21 {
            wcoc_bound_thm21(&x, &y, &space)?
        } else {
            wcoc_bound_thm31(&x, &y, &space)?
        };
        vacuous += usize::from(c.vacuous);
        stated_gaps += usize::from(c.stated_form_slack < -VIOLATION_TOL);
        chain_failures += usize::from(c.chain_slack < -VIOLATION_TOL);
        unconverged += usize::from(!c.converged);
        let violation = tracker.record(format!("t{trial}"), c.slack, &x, &y);
        report.rows.push(vec![
            trial.to_string(),
            x.values().len().to_string(),
            fmt_num(c.norm_x),
            fmt_num(c.norm_y),
            fmt_num(c.bound.functional_value),
            fmt_num(c.bound.arg_p),
            fmt_num(c.bound.bound_value),
            fmt_num(c.lhs),
            fmt_num(c.slack),
            fmt_num(c.stated_form_slack),
            fmt_num(c.chain_bound),
            fmt_num(c.chain_slack),
            flag(c.vacuous),
            flag(c.converged),
            flag(violation),
        ]);
    }
    tracker.finish(&mut report);
    report.summary.push(("vacuous_bound".into(), vacuous.to_string()));
    report.summary.push(("stated_form_gaps".into(), stated_gaps.to_string()));
    report.summary.push(("chain_failures".into(), chain_failures.to_string()));
    report.summary.push(("unconverged".into(), unconverged.to_string()));
    Ok(report)
}

fn example_bound(config: &CampaignConfig, space: &GlSpaceF64) -> Result<f64, HarnessError> {
    if let Some(d) = config.d {
        return Ok(d);
    }
    let d = space.psi().probe_sup();
    if d.is_finite() {
        Ok(d)
    } else {
        Err(HarnessError::Config("psi is unbounded on the interval; pass --d".into()))
    }
}

fn run_examples(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let space = space_for(config)?;
    let d = example_bound(config, &space)?;
    let check = ExampleCheck::new(&space, d)?;
    let columns = vec!["trial", "atoms", "example", "diff_norm_a", "bound", "lhs", "slack", "violation"];
    let mut report = VerificationReport::new(config, columns);
    report.asserting = check.kind() == ExampleKind::Lyapunov;
    let label = match check.kind() {
        ExampleKind::Lyapunov => "1",
        ExampleKind::Retained => "2",
    };
    let mut tracker = SlackTracker::new();
    for trial in 0..config.trials {
        let (x, y) = draw_pair(config, 0, trial, |f| space.norm(f).value);
        let o = check.check(&x, &y)?;
        let violation = tracker.record(format!("t{trial}"), o.slack, &x, &y);
        report.rows.push(vec![
            trial.to_string(),
            x.values().len().to_string(),
            label.to_string(),
            fmt_num(o.diff_norm_a),
            fmt_num(o.bound),
            fmt_num(o.lhs),
            fmt_num(o.slack),
            flag(violation),
        ]);
    }
    tracker.finish(&mut report);
    report.summary.push(("example".into(), label.to_string()));
    report.summary.push(("d".into(), fmt_num(d)));
    report.summary.push(("mode".into(), if report.asserting { "asserting" } else { "reporting" }.into()));
    Ok(report)
}

fn run_norm(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let path =
        config.function.as_ref().ok_or_else(|| HarnessError::Config("`norm` needs --f <function file>".into()))?;
    let f = SimpleFunctionF64::parse(&std::fs::read_to_string(path)?)?;
    let space = space_for(config)?;
    let columns = vec!["quantity", "value", "arg_p", "converged", "tail_dominated", "vacuous"];
    let mut report = VerificationReport::new(config, columns);
    let n = space.norm(&f);
    report.rows.push(vec![
        "gls_norm".into(),
        fmt_num(n.value),
        fmt_num(n.arg_p),
        flag(n.converged),
        flag(n.tail_dominated),
        "0".into(),
    ]);
    for (name, r) in [("kappa", space.kappa(&f)), ("theta", space.theta(&f))] {
        report.rows.push(vec![
            name.into(),
            fmt_num(r.value()),
            fmt_num(r.opt.arg_p),
            flag(r.opt.converged),
            flag(r.opt.tail_dominated),
            flag(r.vacuous),
        ]);
    }
    report.rows.push(vec!["ess_sup".into(), fmt_num(f.ess_sup()), "inf".into(), "1".into(), "0".into(), "0".into()]);
    report.rows.push(vec![
        "lp_norm_at_a".into(),
        fmt_num(f.lp_norm(space.a())?),
        fmt_num(space.a()),
        "1".into(),
        "0".into(),
        "0".into(),
    ]);
    if space.b().is_finite() {
        let bt = btheta_norm(&f, space.b(), 1.0)?;
        report.rows.push(vec![
            "btheta_norm_theta1".into(),
            fmt_num(bt.value),
            fmt_num(space.b() - bt.arg_p),
            flag(bt.converged),
            "0".into(),
            "0".into(),
        ]);
    }
    Ok(report)
}

fn eps_grid(config: &CampaignConfig, default: &[f64]) -> Vec<f64> {
    if config.eps.is_empty() {
        default.to_vec()
    } else {
        config.eps.clone()
    }
}

fn run_moc(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let columns = vec!["p", "eps", "delta", "method", "iterations", "residual", "lower_bound"];
    let mut report = VerificationReport::new(config, columns);
    for &p in &triangle_exponents(config) {
        for &eps in &eps_grid(config, &[1.0]) {
            let m = delta_lp_exact(p, eps)?;
            report.rows.push(vec![
                fmt_num(p),
                fmt_num(eps),
                fmt_num(m.delta),
                m.method.as_str().into(),
                m.iterations.to_string(),
                fmt_num(m.residual),
                fmt_num(delta_lp_lower_bound(p, eps)?),
            ]);
        }
    }
    Ok(report)
}

const DEFAULT_SWEEP_EPS: [f64; 5] = [0.0, 0.5, 1.0, 1.5, 2.0];

fn run_sweep_moc(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let grid = eps_grid(config, &DEFAULT_SWEEP_EPS);
    if config.psi.is_some() {
        let space = space_for(config)?;
        let columns = vec!["eps", "estimate", "feasible", "rejected", "distance"];
        let mut report = VerificationReport::new(config, columns);
        let results = random_sweep(MocTarget::Gls(&space), &grid, config.trials, config.seed, &sampler(config));
        for (i, (eps, r)) in grid.iter().zip(results).enumerate() {
            let r = r?;
            report.rows.push(vec![
                fmt_num(*eps),
                fmt_num(r.result.delta),
                r.feasible.to_string(),
                r.rejected.to_string(),
                fmt_num(r.distance),
            ]);
            if let Some((x, y)) = r.minimizer {
                report.pairs.push((format!("min_e{i}_x"), x));
                report.pairs.push((format!("min_e{i}_y"), y));
            }
        }
        return Ok(report);
    }
    let columns = vec![
        "p",
        "eps",
        "delta_exact",
        "method",
        "lower_bound",
        "two_atom",
        "two_atom_gap",
        "random",
        "random_gap",
        "feasible",
        "rejected",
    ];
    let mut report = VerificationReport::new(config, columns);
    for (pi, &p) in triangle_exponents(config).iter().enumerate() {
        let seed = config.seed.wrapping_add(pi as u64);
        let randoms = random_sweep(MocTarget::Lp(p), &grid, config.trials, seed, &sampler(config));
        for (&eps, random) in grid.iter().zip(randoms) {
            let exact = delta_lp_exact(p, eps)?;
            let two = two_atom_directed(p, eps)?;
            let (rand_delta, feasible, rejected) = match random {
                Ok(r) => (r.result.delta, r.feasible, r.rejected),
                Err(gls_core::Error::Infeasible { .. }) => (f64::NAN, 0, config.trials),
                Err(e) => return Err(e.into()),
            };
            report.rows.push(vec![
                fmt_num(p),
                fmt_num(eps),
                fmt_num(exact.delta),
                exact.method.as_str().into(),
                fmt_num(delta_lp_lower_bound(p, eps)?),
                fmt_num(two.result.delta),
                fmt_num(two.result.delta - exact.delta),
                fmt_num(rand_delta),
                fmt_num(rand_delta - exact.delta),
                feasible.to_string(),
                rejected.to_string(),
            ]);
        }
    }
    Ok(report)
}

/// Atom counts `2, 4, 8, …` up to `atoms_max`, always ending at `atoms_max`.
fn atom_levels(config: &CampaignConfig) -> Vec<usize> {
    let mut levels = Vec::new();
    let mut k = config.atoms_min.max(2);
    while k < config.atoms_max {
        levels.push(k);
        k *= 2;
    }
    levels.push(config.atoms_max.max(config.atoms_min));
    levels
}

fn run_sweep_subgaussian(config: &CampaignConfig) -> Result<VerificationReport, HarnessError> {
    let space = space_for(config)?;
    let grid = eps_grid(config, &DEFAULT_SWEEP_EPS);
    let columns = vec!["atoms", "eps", "estimate", "feasible", "rejected", "distance"];
    let mut report = VerificationReport::new(config, columns);
    for k in atom_levels(config) {
        let sampler = SamplerConfig { atoms_min: k, atoms_max: k };
        let results = random_sweep(MocTarget::Gls(&space), &grid, config.trials, config.seed, &sampler);
        for (i, (eps, r)) in grid.iter().zip(results).enumerate() {
            match r {
                Ok(r) => {
                    report.rows.push(vec![
                        k.to_string(),
                        fmt_num(*eps),
                        fmt_num(r.result.delta),
                        r.feasible.to_string(),
                        r.rejected.to_string(),
                        fmt_num(r.distance),
                    ]);
                    if let Some((x, y)) = r.minimizer {
                        report.pairs.push((format!("min_k{k}_e{i}_x"), x));
                        report.pairs.push((format!("min_k{k}_e{i}_y"), y));
                    }
                }
                Err(gls_core::Error::Infeasible { .. }) => {
                    report.rows.push(vec![
                        k.to_string(),
                        fmt_num(*eps),
                        "nan".into(),
                        "0".into(),
                        config.trials.to_string(),
                        "nan".into(),
                    ]);
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(report)
}
