//! Lift-and-project operators: certificate checkers and constructions.

mod certfile;
mod lasserre;
mod obstructions;
mod ranks;
mod report;
mod sa_plus;
mod tilde_ls;

pub use certfile::*;
pub use lasserre::*;
pub use obstructions::*;
pub use ranks::*;
pub use report::{CertificateReport, ConditionRecord};
pub use sa_plus::*;
pub use tilde_ls::*;
