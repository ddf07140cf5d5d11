//! JSON representations: complex numbers as `[re, im]` arrays, equation
//! specs, series, and the frozen golden data used by tests.

use crate::equations::{EquationSpec, PainleveCase};
use crate::error::{Error, Result};
use crate::series::FormalSeries;
use crate::{c64, C64};
use serde::{Deserialize, Serialize};

pub fn c_to_pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

pub fn pair_to_c(p: [f64; 2]) -> C64 {
    c64(p[0], p[1])
}

/// Wire format of [`EquationSpec`]:
/// `{"case": "PIII_i", "alpha": [re,im], "beta": [re,im], "branch_A": [re,im]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecJson {
    pub case: PainleveCase,
    pub alpha: [f64; 2],
    pub beta: [f64; 2],
    #[serde(rename = "branch_A", skip_serializing_if = "Option::is_none", default)]
    pub branch_a: Option<[f64; 2]>,
}

impl From<&EquationSpec> for SpecJson {
    fn from(s: &EquationSpec) -> Self {
        SpecJson {
            case: s.case,
            alpha: c_to_pair(s.alpha),
            beta: c_to_pair(s.beta),
            branch_a: s.branch_a.map(c_to_pair),
        }
    }
}

impl TryFrom<&SpecJson> for EquationSpec {
    type Error = Error;
    fn try_from(j: &SpecJson) -> Result<EquationSpec> {
        EquationSpec::new(
            j.case,
            pair_to_c(j.alpha),
            pair_to_c(j.beta),
            j.branch_a.map(pair_to_c),
        )
    }
}

/// Wire format of a truncated series: coefficients of `w^-(offset+i)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesJson {
    pub offset: i32,
    pub n: i64,
    pub coeffs: Vec<[f64; 2]>,
}

impl From<&FormalSeries> for SeriesJson {
    fn from(s: &FormalSeries) -> Self {
        SeriesJson {
            offset: s.offset(),
            n: s.known_end() - 1,
            coeffs: s.coeffs().iter().map(|&c| c_to_pair(c)).collect(),
        }
    }
}

impl From<&SeriesJson> for FormalSeries {
    fn from(j: &SeriesJson) -> Self {
        FormalSeries::new(j.offset, j.coeffs.iter().map(|&p| pair_to_c(p)).collect())
    }
}

#[derive(Debug, Deserialize)]
struct GoldenFile {
    instances: Vec<GoldenInstance>,
}

#[derive(Debug, Deserialize)]
struct GoldenInstance {
    spec: SpecJson,
    coeffs: std::collections::BTreeMap<String, [f64; 2]>,
}

/// A frozen reference instance: equation parameters plus independently
/// computed series coefficients.
pub struct H0Golden {
    pub spec: EquationSpec,
    pub coeffs: Vec<(i32, C64)>,
}

/// Reference `h̃₀` coefficients obtained by series-solving the original
/// equations in the `x`-plane (see `testdata/h0_series.json`).
pub fn load_h0_goldens() -> Vec<H0Golden> {
    let raw = include_str!("../testdata/h0_series.json");
    let file: GoldenFile = serde_json::from_str(raw).expect("valid golden file");
    file.instances
        .iter()
        .map(|inst| H0Golden {
            spec: EquationSpec::try_from(&inst.spec).expect("valid golden spec"),
            coeffs: inst
                .coeffs
                .iter()
                .map(|(k, v)| (k.parse::<i32>().expect("integer order"), pair_to_c(*v)))
                .collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip() {
        let s = EquationSpec::new(
            PainleveCase::P3i,
            c64(0.25, -0.5),
            c64(0.1, 0.0),
            Some(c64(0.0, 1.0)),
        )
        .unwrap();
        let j = SpecJson::from(&s);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"PIII_i\""));
        let back: SpecJson = serde_json::from_str(&text).unwrap();
        let s2 = EquationSpec::try_from(&back).unwrap();
        assert_eq!(s, s2);
    }

    #[test]
    fn goldens_parse() {
        let g = load_h0_goldens();
        assert_eq!(g.len(), 5);
        assert!(g.iter().all(|i| !i.coeffs.is_empty()));
    }
}
