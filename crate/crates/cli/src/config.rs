use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Result};
use semnet::affinity::AffinityKind;
use semnet::centrality::EigenOptions;
use semnet::pipe::PipeOptions;

/// Affinity used for the extrinsic value and for Pipe routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AffinityChoice {
    BestFriend,
    BestCommonFriend,
    Machiavelli,
    #[default]
    Mixed,
}

impl FromStr for AffinityChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bf" => Ok(Self::BestFriend),
            "bcf" => Ok(Self::BestCommonFriend),
            "mach" => Ok(Self::Machiavelli),
            "mix" => Ok(Self::Mixed),
            other => Err(format!("unknown affinity `{other}` (expected bf, bcf, mach or mix)")),
        }
    }
}

impl fmt::Display for AffinityChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BestFriend => "bf",
            Self::BestCommonFriend => "bcf",
            Self::Machiavelli => "mach",
            Self::Mixed => "mix",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub window: usize,
    pub top: usize,
    pub alpha: f64,
    pub affinity: AffinityChoice,
    pub tol: f64,
    pub max_iter: usize,
    pub epsilon: f64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            window: 10,
            top: 300,
            alpha: 0.9,
            affinity: AffinityChoice::Mixed,
            tol: 1e-10,
            max_iter: 1000,
            epsilon: 1e-9,
            out_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window < 1 {
            bail!("--window must be at least 1, got {}", self.window);
        }
        if self.top < 1 {
            bail!("--top must be at least 1, got {}", self.top);
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            bail!("--alpha must lie in [0, 1], got {}", self.alpha);
        }
        if !(self.epsilon > 0.0) {
            bail!("--epsilon must be positive, got {}", self.epsilon);
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            bail!("eigenvector tolerance and iteration limit must be positive");
        }
        Ok(())
    }

    pub fn affinity_kind(&self) -> AffinityKind {
        match self.affinity {
            AffinityChoice::BestFriend => AffinityKind::BestFriend,
            AffinityChoice::BestCommonFriend => AffinityKind::BestCommonFriend,
            AffinityChoice::Machiavelli => AffinityKind::Machiavelli,
            AffinityChoice::Mixed => AffinityKind::Mixed { alpha: self.alpha },
        }
    }

    pub fn eigen(&self) -> EigenOptions {
        EigenOptions {
            tol: self.tol,
            max_iter: self.max_iter,
        }
    }

    pub fn pipe(&self) -> PipeOptions {
        PipeOptions {
            epsilon: self.epsilon,
            iteration_cap: None,
        }
    }
}
