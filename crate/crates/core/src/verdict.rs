use serde::{Deserialize, Serialize};

/// How far a universally quantified coloring claim was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum Status {
    VerifiedExhaustively,
    /// Random trials only; never a proof.
    NoCounterexampleFound {
        trials: usize,
        seed: u64,
    },
    Refuted,
}

impl Status {
    pub fn holds(&self) -> bool {
        !matches!(self, Status::Refuted)
    }

    pub fn label(&self) -> String {
        match self {
            Status::VerifiedExhaustively => "verified-exhaustively".into(),
            Status::NoCounterexampleFound { trials, seed } => {
                format!("no-counterexample-found({trials} trials, seed {seed})")
            }
            Status::Refuted => "refuted".into(),
        }
    }
}

/// How colorings are examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum Mode {
    Exhaustive,
    Sampled { trials: usize, seed: u64 },
}
