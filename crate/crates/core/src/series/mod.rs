//! Elements of the completed Puiseux field at desk scale.

mod sqrt;
mod stream;
mod truncated;

pub use sqrt::sqrt_stream;
pub use stream::{SeriesStream, TermSource, DEFAULT_PULL_BUDGET};
pub use truncated::TruncatedSeries;
