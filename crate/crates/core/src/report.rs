//! JSON rendering of verification reports.
//!
//! Field order is fixed by the struct layouts below. Floating values are
//! decimal strings with as many significant digits as the report precision
//! carries; rationals are `"num/den"` strings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{faithful_digits, ComplexP};
use crate::engine::{VerificationReport, Witness};
use crate::error::Result;
use crate::exact_numbers::parse_rational;
use crate::poles::Params;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub r: usize,
    pub a: Vec<u32>,
    pub m: Vec<u32>,
    pub w: Vec<String>,
    pub j: [usize; 2],
}

impl ParamsDoc {
    pub fn from_params(p: &Params) -> Self {
        ParamsDoc {
            r: p.r(),
            a: p.a().to_vec(),
            m: p.m().to_vec(),
            w: p.w().iter().map(rational_string).collect(),
            j: [p.j().0, p.j().1],
        }
    }

    pub fn to_params(&self) -> Result<Params> {
        let w = self.w.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Params::new(self.a.clone(), self.m.clone(), w, (self.j[0], self.j[1]))
    }
}

/// `"num/den"`, also for integers (`"0/1"`).
pub fn rational_string(x: &rug::Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessDoc {
    pub z: Option<[String; 2]>,
    pub lhs: [String; 2],
    pub rhs: [String; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryDoc {
    pub lhs: [String; 2],
    pub rhs: [String; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportDoc {
    pub law: String,
    pub params: ParamsDoc,
    pub case: String,
    pub precision_bits: u32,
    pub samples: usize,
    pub max_abs_err: String,
    pub max_rel_err: String,
    pub tolerance: String,
    pub passed: bool,
    pub witnesses: Vec<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<SummaryDoc>,
    pub wall_time_ms: u64,
}

/// Shortest round-trip decimal of an `f64`.
pub fn float_string(x: f64) -> String {
    format!("{x:e}")
}

pub fn complex_strings(z: &ComplexP, digits: usize) -> [String; 2] {
    let (re, im) = z.to_decimal_pair(digits);
    [re, im]
}

fn witness_doc(w: &Witness, prec: u32) -> WitnessDoc {
    let digits = faithful_digits(prec);
    let round = |z: &ComplexP| complex_strings(&z.with_prec(prec), digits);
    WitnessDoc {
        z: w.z.as_ref().map(round),
        lhs: round(&w.lhs),
        rhs: round(&w.rhs),
    }
}

impl ReportDoc {
    pub fn new(rep: &VerificationReport) -> Self {
        let prec = rep.precision_bits;
        let digits = faithful_digits(prec);
        ReportDoc {
            law: rep.law.clone(),
            params: ParamsDoc::from_params(&rep.params),
            case: rep.case.to_string(),
            precision_bits: prec,
            samples: rep.samples,
            max_abs_err: float_string(rep.max_abs_err),
            max_rel_err: float_string(rep.max_rel_err),
            tolerance: float_string(rep.tolerance),
            passed: rep.passed,
            witnesses: rep.witnesses.iter().map(|w| witness_doc(w, prec)).collect(),
            summary: rep.summary.as_ref().map(|(l, r)| SummaryDoc {
                lhs: complex_strings(&l.with_prec(prec), digits),
                rhs: complex_strings(&r.with_prec(prec), digits),
            }),
            wall_time_ms: rep.wall_time_ms,
        }
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(doc)?)
}

/// Serialize `rep`; write it to `path` when given. Returns the document.
pub fn emit_report(rep: &VerificationReport, path: Option<&Path>) -> Result<String> {
    let text = to_json(&ReportDoc::new(rep))?;
    if let Some(path) = path {
        std::fs::write(path, format!("{text}\n"))?;
    }
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{verify_identity, SamplePolicy};
    use rug::Rational;

    #[test]
    fn params_round_trip() {
        let w = vec![Rational::new(), Rational::from((1, 3))];
        let p = Params::new(vec![2, 3], vec![1, 2], w, (1, 1)).unwrap();
        let doc = ParamsDoc::from_params(&p);
        assert_eq!(doc.w, vec!["0/1", "1/3"]);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ParamsDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_params().unwrap(), p);
    }

    #[test]
    fn passing_report_layout() {
        let p = Params::simple(&[2, 3], (2, 0)).unwrap();
        let rep = verify_identity(&p, &SamplePolicy::with_seed(1, 4), 128).unwrap();
        let text = emit_report(&rep, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["passed"], true);
        assert_eq!(v["witnesses"].as_array().unwrap().len(), 0);
        assert_eq!(v["case"], "I");
        let keys = [
            "\"law\"",
            "\"params\"",
            "\"case\"",
            "\"precision_bits\"",
            "\"samples\"",
            "\"max_abs_err\"",
            "\"max_rel_err\"",
            "\"tolerance\"",
            "\"passed\"",
            "\"witnesses\"",
            "\"wall_time_ms\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn failing_report_has_witnesses() {
        let p = Params::simple(&[2, 3], (2, 0)).unwrap();
        let rep = verify_identity(&p, &SamplePolicy::with_seed(1, 4), 128)
            .unwrap()
            .with_tolerance(1000);
        let v: serde_json::Value = serde_json::from_str(&emit_report(&rep, None).unwrap()).unwrap();
        assert_eq!(v["passed"], false);
        let ws = v["witnesses"].as_array().unwrap();
        assert!(!ws.is_empty());
        assert_eq!(ws[0]["z"].as_array().unwrap().len(), 2);
    }
}
