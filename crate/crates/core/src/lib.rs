//! Rank-based analysis of evaluation metrics.
//!
//! Metric scores over systems and utterances are turned into rankings;
//! from those rankings the crate measures how much two metrics disagree
//! (complementarity), how the metric space clusters, and how well one
//! human judgment can be predicted from other metrics.
//!
//! ```
//! use rankcomp::{complementarity, ScoreTensor, MetricProfile};
//!
//! let t = ScoreTensor::from_raw(
//!     "demo",
//!     vec![MetricProfile::human("H:q"), MetricProfile::automatic("bleu")],
//!     vec!["s0".into(), "s1".into()],
//!     vec!["u0".into()],
//!     vec![1.0, 2.0, 2.0, 1.0],
//! )
//! .unwrap();
//! assert_eq!(complementarity::pairwise(&t, "H:q", "bleu").unwrap(), 1.0);
//! ```

pub mod complementarity;
pub mod kemeny;
pub mod plot;
pub mod prediction;
pub mod ranking;
pub mod scoreset;
pub mod structure;
pub mod synth;

pub use ranking::{kendall_distance, kendall_tau, normalized_kendall, rank_slice, Level, RankVector};
pub use scoreset::{Ingestion, MetricKind, MetricProfile, Orientation, ScoreSetError, ScoreTensor};
