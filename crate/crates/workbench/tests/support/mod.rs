#![allow(dead_code)]

use bothunt_core::corpus::{generate_challenge, Dataset, GeneratorConfig, GroundTruth};
use bothunt_workbench::{Session, WorkbenchConfig};

pub fn small_config() -> GeneratorConfig {
    GeneratorConfig { n_users: 250, n_bots: 12, duration_days: 14, flip_day: 7, ..GeneratorConfig::default() }
}

pub fn small_challenge() -> (Dataset, GroundTruth) {
    generate_challenge(&small_config(), 11).unwrap()
}

pub fn small_session() -> (Session, GroundTruth) {
    let (ds, gt) = small_challenge();
    let mut s = Session::new(ds, WorkbenchConfig::default());
    s.attach_oracle(gt.clone()).unwrap();
    (s, gt)
}
