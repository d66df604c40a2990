use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(name = "dicke", version, about = "Photon statistics of collective emission from Dicke states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Worker threads; 0 picks the number of cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Time series of photon statistics for one initial state.
    Stats(StatsArgs),
    /// Minimum Mandel-Q over 0 < tau <= 1 across M and detuning.
    QminSweep(SweepArgs),
    /// Dataset behind one of the published figures.
    Figure(FigureArgs),
    /// Compare the spectral pipeline against brute-force evolution.
    Validate(ValidateArgs),
}

/// Initial state, given either as atom counts or as doubled `J`, `M`.
#[derive(Debug, Clone, Args, Serialize)]
pub struct StateArgs {
    #[arg(long, requires = "excited", conflicts_with_all = ["two_j", "two_m"])]
    pub n_atoms: Option<i64>,
    #[arg(long, requires = "n_atoms")]
    pub excited: Option<i64>,
    #[arg(long, requires = "two_m")]
    pub two_j: Option<i64>,
    #[arg(long, requires = "two_j")]
    pub two_m: Option<i64>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TimeArgs {
    #[arg(long, default_value_t = 0.0)]
    pub tau_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau_max: f64,
    /// Number of evenly spaced points, both ends included.
    #[arg(long, default_value_t = 101)]
    pub tau_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    #[arg(long, conflicts_with = "two_j", required_unless_present = "two_j")]
    pub n_atoms: Option<i64>,
    #[arg(long)]
    pub two_j: Option<i64>,
    /// Smallest M (integer or half-integer, e.g. -4 or 3/2); default -J + 1.
    #[arg(long, allow_hyphen_values = true)]
    pub m_min: Option<HalfInteger>,
    /// Largest M; default J.
    #[arg(long, allow_hyphen_values = true)]
    pub m_max: Option<HalfInteger>,
    /// Comma-separated detunings.
    #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = dicke_core::statistics::DEFAULT_QMIN_GRID)]
    pub grid_points: usize,
    /// Report the raw grid minimum without golden-section refinement.
    #[arg(long)]
    pub no_refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FigureId {
    #[value(name = "1a")]
    #[serde(rename = "1a")]
    Fig1a,
    #[value(name = "1b")]
    #[serde(rename = "1b")]
    Fig1b,
    #[value(name = "1c")]
    #[serde(rename = "1c")]
    Fig1c,
    #[value(name = "2")]
    #[serde(rename = "2")]
    Fig2,
    #[value(name = "3")]
    #[serde(rename = "3")]
    Fig3,
    #[value(name = "4")]
    #[serde(rename = "4")]
    Fig4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Panel {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,
    /// Replace the figure's list of atom numbers.
    #[arg(long, value_delimiter = ',')]
    pub n_atoms: Option<Vec<i64>>,
    /// Replace the figure's detuning (a list for figure 4).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub delta: Option<Vec<f64>>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub tau_steps: Option<usize>,
    #[arg(long)]
    pub grid_points: Option<usize>,
    /// Figure 3 only: restrict to one panel.
    #[arg(long, value_enum)]
    pub panel: Option<Panel>,
    /// Figure 4 only: spacing of M values below J (default N/10, at least 1).
    #[arg(long)]
    pub m_step: Option<i64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = dicke_core::oracle::full_space::MAX_ATOMS)]
    pub max_atoms: usize,
    #[arg(long, value_delimiter = ',', default_value = "0,1,10", allow_negative_numbers = true)]
    pub deltas: Vec<f64>,
    #[arg(long, default_value_t = 3.0)]
    pub tau_max: f64,
    #[arg(long, default_value_t = 25)]
    pub tau_steps: usize,
}

/// An integer or half-integer, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfInteger(pub i64);

impl FromStr for HalfInteger {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let bad = || format!("`{s}` is not an integer or half-integer");
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "2" => Ok(Self(num)),
                "1" => Ok(Self(2 * num)),
                _ => Err(bad()),
            };
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Self(2 * n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let doubled = 2.0 * x;
        if doubled.fract() != 0.0 || !doubled.is_finite() {
            return Err(bad());
        }
        Ok(Self(doubled as i64))
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInteger {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integers() {
        assert_eq!("4".parse::<HalfInteger>().unwrap(), HalfInteger(8));
        assert_eq!("-4".parse::<HalfInteger>().unwrap(), HalfInteger(-8));
        assert_eq!("3/2".parse::<HalfInteger>().unwrap(), HalfInteger(3));
        assert_eq!("-1.5".parse::<HalfInteger>().unwrap(), HalfInteger(-3));
        assert!("0.25".parse::<HalfInteger>().is_err());
        assert!("1/3".parse::<HalfInteger>().is_err());
        assert_eq!(HalfInteger(-3).to_string(), "-3/2");
    }

    #[test]
    fn parser_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
