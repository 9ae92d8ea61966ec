//! JSON report envelope shared by every command.

use serde::Serialize;

use crate::model::Tolerances;
use crate::rng::RNG_ALGORITHM;

#[derive(Clone, Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub version: &'static str,
    pub rng: &'static str,
    pub command: String,
    pub input: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, input: &str, seed: u64, samples: usize, tolerances: Tolerances, result: T) -> Self {
        Report {
            version: crate::VERSION,
            rng: RNG_ALGORITHM,
            command: command.to_string(),
            input: input.to_string(),
            seed,
            samples,
            tolerances,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
