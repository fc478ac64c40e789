//! Crate-wide error type.

use std::fmt;

use num_complex::Complex64;

/// Which axis of a nested (bivariate) contour integral failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Outer,
    Inner,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Outer => write!(f, "outer"),
            Axis::Inner => write!(f, "inner"),
        }
    }
}

/// Errors surfaced by the numerical evaluators and configuration layers.
#[derive(Debug, Clone)]
pub enum Error {
    /// Log-gamma evaluated at a non-positive integer.
    Pole { z: Complex64 },
    /// The two pole families of an H-function kernel cannot be separated by
    /// a vertical contour.
    NoContour { detail: String },
    /// A contour quadrature exhausted its node budget (or failed a realness
    /// check) before reaching the requested tolerance.
    Convergence {
        context: String,
        axis: Option<Axis>,
        nodes: u64,
    },
    /// Input outside a function's domain.
    Domain { what: String },
    /// The optimizer target cannot be met on the given search interval.
    Infeasible { reason: String },
    /// A channel preset label could not be resolved.
    Preset { label: String },
    /// Invalid configuration (scenario files, parameter validation).
    Config { msg: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { z } => write!(f, "log-gamma pole at z = {z}"),
            Error::NoContour { detail } => write!(f, "no separating contour: {detail}"),
            Error::Convergence { context, axis, nodes } => {
                write!(f, "contour quadrature failed to converge in {context}")?;
                if let Some(a) = axis {
                    write!(f, " ({a} axis)")?;
                }
                write!(f, " after {nodes} nodes")
            }
            Error::Domain { what } => write!(f, "domain error: {what}"),
            Error::Infeasible { reason } => write!(f, "infeasible target: {reason}"),
            Error::Preset { label } => write!(f, "unknown channel preset {label:?}"),
            Error::Config { msg } => write!(f, "configuration error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config { msg: msg.into() }
    }

    pub(crate) fn domain(what: impl Into<String>) -> Self {
        Error::Domain { what: what.into() }
    }
}
