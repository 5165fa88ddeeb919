use thiserror::Error;

use crate::config::ConfigError;

/// A command-line request that cannot be carried out as given.
#[derive(Debug, Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// 1 for usage and configuration errors, 2 for everything else (unreadable
/// or invalid data, model files, I/O).
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<ConfigError>() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<lyricmood_core::Error>() {
            return match e {
                lyricmood_core::Error::InvalidArgument(_) | lyricmood_core::Error::TokenizerConfig(_) => EXIT_USAGE,
                _ => EXIT_DATA,
            };
        }
    }
    EXIT_DATA
}
