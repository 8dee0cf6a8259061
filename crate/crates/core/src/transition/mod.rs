//! Algorithms as state families with a one-step transformation, update sets
//! and their transport along renamings.

mod algorithm;
pub mod canon;
mod rule;
mod update;

pub use algorithm::{Algorithm, Transition};
pub use rule::Rule;
pub use update::{Location, Update, UpdateSet};

use crate::error::Result;
use crate::kernel::Renaming;

/// Lifts `r` to an update set, element-wise.
pub fn lift_update_set(r: &Renaming, updates: &UpdateSet) -> Result<UpdateSet> {
    updates.lift(r)
}
