//! Data model, dataset files, validation, follow-graph snapshots and the
//! synthetic challenge generator.

pub mod generate;
pub mod io;
pub mod model;
pub mod snapshot;
pub mod validate;

pub use generate::{generate_challenge, Family, TOPIC_KEYWORDS};
pub use io::{
    load_dataset, load_dataset_with, load_ground_truth, write_dataset, write_ground_truth, LoadOptions,
    MalformedLine,
};
pub use model::{
    Dataset, FamilyMix, GeneratorConfig, GroundTruth, NetworkEvent, Tweet, UserAccount, SECONDS_PER_DAY,
};
pub use snapshot::{follower_series, network_snapshot, FollowGraph};
pub use validate::{validate_dataset, ValidationReport, Violation, ViolationClass};
