//! Verification campaigns, sweeps and CSV reports behind the `gls` binary.

pub mod campaign;
pub mod config;
pub mod report;

pub use campaign::{reevaluate, run_campaign};
pub use config::{CampaignConfig, Command};
pub use report::VerificationReport;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] gls_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
