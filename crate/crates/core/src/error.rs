use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic modulus {0} is outside [0, 1]")]
    InvalidModulus(f64),

    #[error("erfi({0}) is outside the supported range |x| <= {max}", max = crate::special::ERFI_MAX_ARG)]
    ErfiOverflow(f64),

    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("length mismatch: {what} ({left} vs {right})")]
    LengthMismatch {
        what: &'static str,
        left: usize,
        right: usize,
    },

    #[error("analytic derivatives are not available for this sampler")]
    DerivativeModeUnavailable,

    #[error("integration became unstable at t = {t}: max amplitude {amplitude:e} (limit {limit:e})")]
    Unstable { t: f64, amplitude: f64, limit: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason,
        })
    }
}
