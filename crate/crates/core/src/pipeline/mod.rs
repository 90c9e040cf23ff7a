//! From GPS traces and site lists to an [`Instance`](crate::Instance).

pub mod access;
pub mod cluster;
pub mod downsample;
pub mod ingest;
pub mod replicate;
pub mod synthetic;
pub mod trace;

pub use crate::costs::amortize;
pub use access::build_access_matrix;
pub use cluster::{cluster_depots, dbscan_labels};
pub use downsample::{downsample, DownsampleOptions, Downsampled};
pub use ingest::{ingest, read_sites, read_substations, read_traces, IngestOptions, IngestResult};
pub use replicate::{replicate_fleet, replicate_owners};
pub use synthetic::{generate_synthetic, SyntheticSpec};
pub use trace::{classify_stops, Activity, LabeledTrace, RawTrace, Segment, TraceSample};
