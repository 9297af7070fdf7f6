//! Resumable ladder state.
//!
//! A checkpoint is a small versioned TOML document written after every
//! consistent point of the refinement (bracket established, each root-finding
//! step). All multiprecision values are stored as exact decimal strings, so a
//! resumed run continues from bit-identical state and produces the same
//! digits as an uninterrupted one.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eigensolver::BoundaryCondition;
use crate::error::{Error, Result};
use crate::estimator::PrecisionPlan;
use crate::potential::PotentialSpec;

pub const CHECKPOINT_VERSION: u32 = 1;

/// Which of the two runs of a solve the checkpoint belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Primary,
    Certify,
}

/// Root-finding state within one ladder stage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderSnapshot {
    pub stage: usize,
    pub stage_digits: u64,
    pub lo: String,
    pub hi: String,
    pub f_lo: String,
    pub f_hi: String,
    /// Endpoint kept by the previous step: -1 lower, +1 upper, 0 none.
    pub retained: i8,
    pub iterations: u64,
    /// Steps since the bracket last halved.
    pub stale: u32,
    pub width_ref: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format_version: u32,
    pub potential_hash: String,
    pub potential: String,
    pub n: u64,
    pub digits: u64,
    pub bc: BoundaryCondition,
    pub phase: Phase,
    /// Full-precision mismatch evaluations completed so far (both phases).
    pub evaluations: u64,
    /// Result of the primary run once it has finished.
    pub primary_epsilon: Option<String>,
    /// Plan of the run in progress (primary or certification).
    pub plan: PrecisionPlan,
    pub ladder: Option<LadderSnapshot>,
}

fn err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Checkpoint { path: PathBuf::from(path), reason: reason.into() }
}

/// Write atomically: a crash mid-write leaves the previous checkpoint intact.
pub fn save(path: &Path, cp: &Checkpoint) -> Result<()> {
    let text = toml::to_string(cp).map_err(|e| err(path, e.to_string()))?;
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Read a checkpoint and check that it belongs to `pot`.
pub fn load(path: &Path, pot: &PotentialSpec) -> Result<Checkpoint> {
    let text = fs::read_to_string(path)?;
    let cp: Checkpoint = toml::from_str(&text).map_err(|e| err(path, format!("unreadable: {e}")))?;
    if cp.format_version != CHECKPOINT_VERSION {
        return Err(err(
            path,
            format!("format version {} is not supported (expected {CHECKPOINT_VERSION})", cp.format_version),
        ));
    }
    if cp.potential_hash != pot.hash_hex() {
        return Err(err(path, format!("written for a different potential ({})", cp.potential)));
    }
    Ok(cp)
}
