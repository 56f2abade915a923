//! The JSON problem file: two observables, a state, an optional fill and
//! optional tolerance overrides.
//!
//! ```json
//! {
//!   "A": [[{"re": 0, "im": 0}, {"re": 1, "im": 0}], [{"re": 1, "im": 0}, {"re": 0, "im": 0}]],
//!   "B": [[{"re": 1, "im": 0}, {"re": 0, "im": 0}], [{"re": 0, "im": 0}, {"re": -1, "im": 0}]],
//!   "psi": [{"re": 1, "im": 0}, {"re": 0, "im": 1}],
//!   "fill": [{"re": 0, "im": 0}, {"re": 0, "im": 0}],
//!   "tolerances": {"zero": 1e-12, "degeneracy": 1e-9, "hermitian": 1e-9}
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use wvbound::bounds::{ObservablePair, ReportOptions};
use wvbound::linalg::{ComplexMatrix, PureState};
use wvbound::C64;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex> for C64 {
    fn from(c: Complex) -> Self {
        C64::new(c.re, c.im)
    }
}

impl From<C64> for Complex {
    fn from(c: C64) -> Self {
        Complex { re: c.re, im: c.im }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hermitian: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<Complex>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<Complex>>,
    pub psi: Vec<Complex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fill: Option<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceOverrides>,
}

/// A validated problem ready for evaluation.
#[derive(Debug, Clone)]
pub struct Problem {
    pub pair: ObservablePair,
    pub psi: PureState,
}

fn matrix_rows(rows: &[Vec<Complex>]) -> Vec<Vec<C64>> {
    rows.iter().map(|r| r.iter().map(|&c| c.into()).collect()).collect()
}

fn check_tolerance(field: &str, v: Option<f64>) -> CliResult<()> {
    match v {
        Some(t) if !(t.is_finite() && t >= 0.0) => Err(CliError::validation(field, format!("must be a finite non-negative number, got {t}"))),
        _ => Ok(()),
    }
}

impl ProblemSpec {
    pub fn from_json(text: &str, origin: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: origin.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }

    /// Exact round-trip JSON (shortest representation of every float).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem specs always serialize")
    }

    pub fn from_instance(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Self {
        let rows = |m: &ComplexMatrix| m.rows().into_iter().map(|r| r.into_iter().map(Complex::from).collect()).collect();
        ProblemSpec {
            a: rows(a),
            b: rows(b),
            psi: psi.amplitudes().iter().map(|&c| c.into()).collect(),
            fill: None,
            tolerances: None,
        }
    }

    pub fn options(&self, cli: &ToleranceOverrides) -> CliResult<ReportOptions> {
        let file = self.tolerances.unwrap_or_default();
        let mut options = ReportOptions::default();
        let zero = cli.zero.or(file.zero);
        let degeneracy = cli.degeneracy.or(file.degeneracy);
        let hermitian = cli.hermitian.or(file.hermitian);
        check_tolerance("tolerances.zero", zero)?;
        check_tolerance("tolerances.degeneracy", degeneracy)?;
        check_tolerance("tolerances.hermitian", hermitian)?;
        options.zero_tol = zero.unwrap_or(options.zero_tol);
        options.degeneracy_rel_tol = degeneracy.unwrap_or(options.degeneracy_rel_tol);
        options.hermitian_tol = hermitian.unwrap_or(options.hermitian_tol);
        options.fill = self.fill.as_ref().map(|f| f.iter().map(|&c| c.into()).collect());
        Ok(options)
    }

    /// Checks shapes, finiteness and Hermiticity; CLI tolerance overrides win
    /// over those in the file.
    pub fn validate(&self, cli: &ToleranceOverrides) -> CliResult<Problem> {
        let a = ComplexMatrix::from_rows(matrix_rows(&self.a)).map_err(|e| CliError::validation("A", e.to_string()))?;
        let b = ComplexMatrix::from_rows(matrix_rows(&self.b)).map_err(|e| CliError::validation("B", e.to_string()))?;
        if a.dim() != b.dim() {
            return Err(CliError::validation(
                "B",
                format!("dimension {} does not match A ({})", b.dim(), a.dim()),
            ));
        }
        if self.psi.len() != a.dim() {
            return Err(CliError::validation(
                "psi",
                format!("has {} entries but A and B are {}×{}", self.psi.len(), a.dim(), a.dim()),
            ));
        }
        let psi = PureState::new(self.psi.iter().map(|&c| c.into()).collect())
            .map_err(|e| CliError::validation("psi", e.to_string()))?;
        let options = self.options(cli)?;
        if let Some(fill) = &options.fill {
            if let Some(k) = fill.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
                return Err(CliError::validation(format!("fill[{k}]"), "non-finite value"));
            }
        }
        for (field, m) in [("A", &a), ("B", &b)] {
            m.check_hermitian(options.hermitian_tol)
                .map_err(|e| CliError::validation(field, e.to_string()))?;
        }
        let pair = ObservablePair::with_options(a, b, options).map_err(|e| match e {
            wvbound::Error::FillLengthMismatch { .. } => CliError::validation("fill", e.to_string()),
            other => CliError::Numerical(other),
        })?;
        Ok(Problem { pair, psi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAULI: &str = r#"{
        "A": [[{"re": 0, "im": 0}, {"re": 1, "im": 0}], [{"re": 1, "im": 0}, {"re": 0, "im": 0}]],
        "B": [[{"re": 1, "im": 0}, {"re": 0, "im": 0}], [{"re": 0, "im": 0}, {"re": -1, "im": 0}]],
        "psi": [{"re": 1, "im": 0}, {"re": 0, "im": 1}]
    }"#;

    #[test]
    fn parses_and_validates() {
        let spec = ProblemSpec::from_json(PAULI, "inline").unwrap();
        let p = spec.validate(&ToleranceOverrides::default()).unwrap();
        assert_eq!(p.psi.dim(), 2);
        let report = p.pair.report(&p.psi).unwrap();
        assert!(report.extra_e_ab < 1e-12);
    }

    #[test]
    fn parse_errors_carry_position() {
        match ProblemSpec::from_json("{\n  \"A\": [[\n", "bad.json") {
            Err(CliError::Parse { line, path, .. }) => {
                assert_eq!(path, "bad.json");
                assert!(line >= 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            ProblemSpec::from_json(r#"{"A": [], "B": [], "psi": [], "extra": 1}"#, "x"),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn validation_errors_name_the_field() {
        let mut spec = ProblemSpec::from_json(PAULI, "inline").unwrap();
        spec.b[0][1] = Complex { re: 0.5, im: 0.0 };
        match spec.validate(&ToleranceOverrides::default()) {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "B"),
            other => panic!("unexpected {other:?}"),
        }
        let mut spec = ProblemSpec::from_json(PAULI, "inline").unwrap();
        spec.psi.pop();
        assert!(matches!(spec.validate(&ToleranceOverrides::default()), Err(CliError::Validation { field, .. }) if field == "psi"));
        let mut spec = ProblemSpec::from_json(PAULI, "inline").unwrap();
        spec.fill = Some(vec![Complex { re: 1.0, im: 0.0 }]);
        assert!(matches!(spec.validate(&ToleranceOverrides::default()), Err(CliError::Validation { field, .. }) if field == "fill"));
        let mut spec = ProblemSpec::from_json(PAULI, "inline").unwrap();
        spec.a[1].push(Complex { re: 0.0, im: 0.0 });
        assert!(matches!(spec.validate(&ToleranceOverrides::default()), Err(CliError::Validation { field, .. }) if field == "A"));
    }

    #[test]
    fn dump_round_trips_exactly() {
        let spec = ProblemSpec {
            a: vec![vec![Complex { re: 0.1 + 0.2, im: 0.0 }]],
            b: vec![vec![Complex { re: 1.0 / 3.0, im: 0.0 }]],
            psi: vec![Complex { re: std::f64::consts::PI, im: -1e-300 }],
            fill: None,
            tolerances: None,
        };
        assert_eq!(ProblemSpec::from_json(&spec.to_json(), "dump").unwrap(), spec);
    }
}
