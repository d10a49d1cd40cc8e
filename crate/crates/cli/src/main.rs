use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use gls_harness::config::{parse_bound, parse_grid, parse_list};
use gls_harness::{run_campaign, CampaignConfig, Command, HarnessError};

/// Grand Lebesgue space norms, moduli of convexity and inequality campaigns.
#[derive(Debug, Parser)]
#[command(name = "gls", version)]
struct Cli {
    /// norm | moc | verify-thm21 | verify-thm31 | verify-triangle | verify-examples | sweep-moc | sweep-subgaussian
    command: String,
    #[arg(long)]
    a: Option<f64>,
    /// Upper end of the interval; `inf` allowed.
    #[arg(long)]
    b: Option<String>,
    /// e.g. `power_root:m=2`, `endpoint:beta1=1,beta2=0.5`, `const:c=1`,
    /// `extremal:r=3`, `natural:file=PATH`, `table:file=PATH`
    #[arg(long)]
    psi: Option<String>,
    /// Exponent, or comma-separated exponents.
    #[arg(long)]
    p: Option<String>,
    /// Epsilon, or comma-separated values.
    #[arg(long, conflicts_with = "eps_grid")]
    eps: Option<String>,
    /// `lo:hi:n`
    #[arg(long)]
    eps_grid: Option<String>,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    atoms_min: usize,
    #[arg(long, default_value_t = 64)]
    atoms_max: usize,
    /// Function file (`<weight> <value>` per line) for `norm`.
    #[arg(long = "f")]
    function: Option<PathBuf>,
    /// Upper bound of psi for `verify-examples`.
    #[arg(long)]
    d: Option<f64>,
    /// Use y = x in every trial.
    #[arg(long)]
    degenerate: bool,
    #[arg(long, default_value_t = 65536.0)]
    p_max: f64,
    /// Output directory for trials.csv, summary.csv and pair files.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(cli: Cli) -> Result<CampaignConfig, HarnessError> {
    let command: Command = cli.command.parse()?;
    let eps = match (cli.eps, cli.eps_grid) {
        (Some(e), _) => parse_list(&e)?,
        (None, Some(g)) => parse_grid(&g)?,
        (None, None) => Vec::new(),
    };
    Ok(CampaignConfig {
        command,
        trials: cli.trials,
        seed: cli.seed,
        atoms_min: cli.atoms_min,
        atoms_max: cli.atoms_max,
        a: cli.a,
        b: cli.b.as_deref().map(parse_bound).transpose()?,
        psi: cli.psi,
        p: cli.p.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
        eps,
        function: cli.function,
        d: cli.d,
        degenerate: cli.degenerate,
        p_max: cli.p_max,
        out: cli.out,
    })
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    let config = build_config(cli)?;
    let report = run_campaign(&config)?;
    match &config.out {
        Some(dir) => {
            report.write_to(dir)?;
            print!("{}", report.summary_csv());
        }
        None => {
            print!("{}", report.trials_csv());
            eprint!("{}", report.summary_csv());
        }
    }
    Ok(!(report.asserting && report.violations > 0))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gls: {e}");
            ExitCode::from(2)
        }
    }
}
