use thiserror::Error;

use crate::config::{ComponentId, ComponentSet, Diagnostic, render_set};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown component {0}")]
    UnknownComponent(ComponentId),

    #[error("no stratum for {}", render_set(.0))]
    MissingStratum(ComponentSet),

    #[error("unrepresentable cover over stratum {}: {reason}", render_set(.stratum))]
    Unrepresentable { stratum: ComponentSet, reason: String },

    #[error("invalid configuration:\n{}", render_diagnostics(.0))]
    InvalidConfiguration(Vec<Diagnostic>),

    #[error("invalid blow-up center:\n{}", render_diagnostics(.0))]
    InvalidCenter(Vec<Diagnostic>),

    #[error("invalid resolution graph: {0}")]
    InvalidGraph(String),

    #[error("selection is empty")]
    EmptySelection,

    #[error("{context}: {message}")]
    Format { context: String, message: String },

    #[error("expansion degree {needed} exceeds bound {bound}")]
    DegreeBound { needed: u64, bound: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

fn render_diagnostics(d: &[Diagnostic]) -> String {
    d.iter().map(|x| format!("  {x}")).collect::<Vec<_>>().join("\n")
}
