//! JSON report types. Field order is fixed by declaration, so equal runs give
//! byte-identical documents.

use nilhsp::{Element, GroupSpec};
use serde::Serialize;

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ElementJson {
    pub e: Vec<u64>,
    pub f: Vec<u64>,
}

impl From<&Element> for ElementJson {
    fn from(x: &Element) -> Self {
        ElementJson { e: x.e.to_vec(), f: x.f.to_vec() }
    }
}

pub fn elements(xs: &[Element]) -> Vec<ElementJson> {
    xs.iter().map(ElementJson::from).collect()
}

#[derive(Serialize, Debug, Clone)]
pub struct GroupJson {
    pub p: u64,
    pub m: usize,
    pub d: usize,
    /// c(i, j) for i < j in lexicographic order.
    pub constants: Vec<Vec<u64>>,
}

impl From<&GroupSpec> for GroupJson {
    fn from(g: &GroupSpec) -> Self {
        let m = g.m();
        let constants = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .map(|(i, j)| g.structure_constant(i, j).to_vec())
            .collect();
        GroupJson { p: g.p().get(), m, d: g.d(), constants }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct HspConfigJson {
    pub p: u64,
    pub m: usize,
    pub d: usize,
    pub order: String,
    pub trials: usize,
    pub max_attempts: usize,
    pub bound: usize,
    pub fixed_group: bool,
}

#[derive(Serialize, Debug, Clone)]
pub struct HspTrial {
    pub trial: usize,
    pub group: GroupJson,
    pub hidden_generators: Vec<ElementJson>,
    /// |H| from the brute-force oracle `{g : f(g) = f(1)}`.
    pub oracle_order: usize,
    pub recovered_order: Option<usize>,
    pub recovered_generators: Vec<ElementJson>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub attempts: usize,
    pub samples: usize,
    pub diagnostics: Vec<String>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Serialize, Debug, Clone)]
pub struct HspSummary {
    pub trials: usize,
    pub matched: usize,
    pub failed: usize,
    pub mean_attempts: f64,
    pub mean_samples: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct HspReport {
    pub command: &'static str,
    pub seed: u64,
    pub config: HspConfigJson,
    pub records: Vec<HspTrial>,
    pub summary: HspSummary,
}

impl HspSummary {
    pub fn from_records(records: &[HspTrial]) -> Self {
        let n = records.len();
        let matched = records.iter().filter(|r| r.matched).count();
        let mean = |f: fn(&HspTrial) -> usize| {
            if n == 0 {
                0.0
            } else {
                records.iter().map(f).sum::<usize>() as f64 / n as f64
            }
        };
        HspSummary {
            trials: n,
            matched,
            failed: n - matched,
            mean_attempts: mean(|r| r.attempts),
            mean_samples: mean(|r| r.samples),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct SylowJson {
    pub prime: usize,
    pub order: usize,
    pub chain_length: usize,
    pub recovered_order: usize,
    pub p_calls: usize,
    pub call_bound: usize,
    pub rounds: usize,
    pub exponent_subgroup_order: Option<usize>,
    pub hall_property: Option<bool>,
    pub exponent_subgroup_error: Option<String>,
}

#[derive(Serialize, Debug, Clone)]
pub struct ReductionReport {
    pub command: &'static str,
    pub seed: u64,
    pub order: usize,
    pub solver: String,
    pub hidden_generators: Vec<usize>,
    pub oracle: Vec<usize>,
    pub recovered: Vec<usize>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub sylow: Vec<SylowJson>,
    pub quantum_calls: usize,
    pub fallback_calls: usize,
}

#[derive(Serialize, Debug, Clone)]
pub struct BenchPoint {
    pub p: u64,
    pub m: Option<usize>,
    pub d: usize,
    pub n: usize,
    pub reps: usize,
    pub mean_us: f64,
    pub mean_attempts: Option<f64>,
}

#[derive(Serialize, Debug, Clone)]
pub struct BenchSlope {
    pub p: u64,
    pub slope: f64,
}

#[derive(Serialize, Debug, Clone)]
pub struct BenchReport {
    pub command: &'static str,
    pub suite: String,
    pub seed: u64,
    pub points: Vec<BenchPoint>,
    pub slopes: Vec<BenchSlope>,
}
