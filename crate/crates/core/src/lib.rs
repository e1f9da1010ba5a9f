//! Turnover-adjusted information ratios for mean-variance and quintile
//! long-short portfolios.
//!
//! * [`stat_kernels`]: normal, bivariate normal, truncated and log-normal
//!   moments.
//! * [`analytics`]: closed-form IR, turnover and turnover-adjusted IR.
//! * [`integrated`]: one-lag and EWMA signal blends and their optimization.
//! * [`sim`]: Monte Carlo engine reproducing the closed forms.
//! * [`report`]: table builders behind the command-line interface.

pub mod analytics;
pub mod error;
pub mod integrated;
pub mod optimize;
pub mod params;
pub mod report;
pub mod sim;
pub mod stat_kernels;

pub use error::{Error, Result};
pub use params::{CostParams, PortfolioKind, SignalStats, UniverseStats};
