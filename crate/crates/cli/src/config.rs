use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Norm,
    Moc,
    VerifyThm21,
    VerifyThm31,
    VerifyTriangle,
    VerifyExamples,
    SweepMoc,
    SweepSubgaussian,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Norm,
        Command::Moc,
        Command::VerifyThm21,
        Command::VerifyThm31,
        Command::VerifyTriangle,
        Command::VerifyExamples,
        Command::SweepMoc,
        Command::SweepSubgaussian,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Moc => "moc",
            Command::VerifyThm21 => "verify-thm21",
            Command::VerifyThm31 => "verify-thm31",
            Command::VerifyTriangle => "verify-triangle",
            Command::VerifyExamples => "verify-examples",
            Command::SweepMoc => "sweep-moc",
            Command::SweepSubgaussian => "sweep-subgaussian",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown command `{s}`")))
    }
}

/// Everything a campaign needs; the report header echoes all of it.
#[derive(Debug, Clone, PartialEq)]
pub struct CampaignConfig {
    pub command: Command,
    pub trials: usize,
    pub seed: u64,
    pub atoms_min: usize,
    pub atoms_max: usize,
    /// Interval ends; `None` picks the command's default.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub psi: Option<String>,
    pub p: Vec<f64>,
    pub eps: Vec<f64>,
    /// Input function file for `norm`.
    pub function: Option<PathBuf>,
    /// Upper bound `d` of ψ for `verify-examples`; defaults to the probed supremum.
    pub d: Option<f64>,
    /// Forces `y = x` in every trial.
    pub degenerate: bool,
    /// Largest probed exponent when `b = ∞`.
    pub p_max: f64,
    pub out: Option<PathBuf>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            command: Command::VerifyTriangle,
            trials: 1000,
            seed: 42,
            atoms_min: 2,
            atoms_max: 64,
            a: None,
            b: None,
            psi: None,
            p: Vec::new(),
            eps: Vec::new(),
            function: None,
            d: None,
            degenerate: false,
            p_max: 65536.0,
            out: None,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be at least 1".into()));
        }
        if self.atoms_min == 0 || self.atoms_min > self.atoms_max {
            return Err(HarnessError::Config("need 1 <= atoms-min <= atoms-max".into()));
        }
        if let (Some(a), Some(b)) = (self.a, self.b) {
            if a >= b || a.is_nan() || b.is_nan() {
                return Err(HarnessError::Config(format!("need a < b, got a = {a}, b = {b}")));
            }
        }
        if !(self.p_max.is_finite() && self.p_max > 1.0) {
            return Err(HarnessError::Config("p-max must be finite and > 1".into()));
        }
        Ok(())
    }

    /// `key=value` lines echoed into every report header.
    pub fn echo(&self) -> Vec<(String, String)> {
        let list = |v: &[f64]| v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(";");
        let opt = |v: Option<f64>| v.map(fmt_num).unwrap_or_else(|| "default".into());
        vec![
            ("command".into(), self.command.to_string()),
            ("trials".into(), self.trials.to_string()),
            ("seed".into(), self.seed.to_string()),
            ("atoms_min".into(), self.atoms_min.to_string()),
            ("atoms_max".into(), self.atoms_max.to_string()),
            ("a".into(), opt(self.a)),
            ("b".into(), opt(self.b)),
            ("psi".into(), self.psi.clone().unwrap_or_else(|| "default".into())),
            ("p".into(), list(&self.p)),
            ("eps".into(), list(&self.eps)),
            (
                "function".into(),
                self.function.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "none".into()),
            ),
            ("d".into(), opt(self.d)),
            ("degenerate".into(), self.degenerate.to_string()),
            ("p_max".into(), fmt_num(self.p_max)),
        ]
    }
}

/// 17 significant digits; `inf`, `-inf`, `nan` spelled out.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

/// Parses a number, accepting `inf`.
pub fn parse_bound(s: &str) -> Result<f64, HarnessError> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| HarnessError::Config(format!("not a number: `{s}`"))),
    }
}

/// `lo:hi:n` → `n` evenly spaced values including both ends.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, HarnessError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || HarnessError::Config(format!("grid must be `lo:hi:n`, got `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![lo]),
        _ => Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 }).collect()),
    }
}

/// Comma-separated numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, HarnessError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_bound).collect()
}
