//! Versioned JSON request format for a full analysis.

use serde::{Deserialize, Serialize};

use crate::curves::{CurveError, WeierstrassModel};
use crate::selmer::{
    analyze, AbelianVarietyInput, AnalysisInput, EulerCharReport, ExternalArithmetic, ReductionTableEntry, SelmerError,
    DEFAULT_SAMPLES,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RequestError {
    #[error("malformed request at {pointer}: {message}")]
    Parse { pointer: String, message: String },
    #[error("invalid request: {0}")]
    Invalid(String),
    #[error(transparent)]
    Analysis(#[from] SelmerError),
}

impl RequestError {
    /// Exit code for the command line: malformed and invalid input map to 1.
    pub fn exit_code(&self) -> i32 {
        1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseField {
    pub cyclotomic_conductor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbelianVarietySpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction_table: Option<Vec<ReductionTableEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Options {
    pub samples: usize,
    pub precision_digits: Option<i64>,
}

impl Default for Options {
    fn default() -> Self {
        Options { samples: DEFAULT_SAMPLES, precision_digits: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    pub chi_sigma_exponent: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisRequest {
    pub schema_version: u32,
    pub curve: Vec<String>,
    pub prime: u64,
    pub base_field: BaseField,
    pub abelian_variety: AbelianVarietySpec,
    #[serde(default)]
    pub external: ExternalArithmetic,
    #[serde(default)]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

fn parse_model(coeffs: &[String], at: &str) -> Result<WeierstrassModel, RequestError> {
    WeierstrassModel::parse(coeffs).map_err(|e: CurveError| RequestError::Parse { pointer: at.into(), message: e.to_string() })
}

impl AnalysisRequest {
    /// Parses JSON text; errors carry a JSON pointer to the offending value.
    pub fn from_json(text: &str) -> Result<AnalysisRequest, RequestError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let req: AnalysisRequest = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            RequestError::Parse {
                pointer: if path == "." { "/".into() } else { format!("/{}", path.replace('.', "/")) },
                message: e.into_inner().to_string(),
            }
        })?;
        if req.schema_version != SCHEMA_VERSION {
            return Err(RequestError::Parse {
                pointer: "/schema_version".into(),
                message: format!("unsupported schema version {}", req.schema_version),
            });
        }
        req.to_input()?;
        Ok(req)
    }

    /// Validated library input.
    pub fn to_input(&self) -> Result<AnalysisInput, RequestError> {
        let curve = parse_model(&self.curve, "/curve")?;
        let factors = self
            .abelian_variety
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| parse_model(f, &format!("/abelian_variety/factors/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let dimension = match (self.abelian_variety.dimension, factors.len()) {
            (Some(d), _) => d,
            (None, n) if n > 0 => n,
            (None, _) => {
                return Err(RequestError::Parse {
                    pointer: "/abelian_variety/dimension".into(),
                    message: "dimension is required with a reduction table alone".into(),
                })
            }
        };
        let abelian_variety = AbelianVarietyInput { factors, reduction_table: self.abelian_variety.reduction_table.clone(), dimension };
        abelian_variety.validate().map_err(|e| RequestError::Parse { pointer: "/abelian_variety".into(), message: e.to_string() })?;
        if self.options.samples == 0 {
            return Err(RequestError::Parse { pointer: "/options/samples".into(), message: "samples must be positive".into() });
        }
        if matches!(self.options.precision_digits, Some(n) if n < 1) {
            return Err(RequestError::Parse {
                pointer: "/options/precision_digits".into(),
                message: "precision must be positive".into(),
            });
        }
        Ok(AnalysisInput {
            curve,
            p: self.prime,
            m: self.base_field.cyclotomic_conductor,
            abelian_variety,
            external: self.external.clone(),
            samples: self.options.samples,
            precision_digits: self.options.precision_digits,
            expected_chi_sigma_exponent: self.expected.as_ref().map(|e| e.chi_sigma_exponent),
        })
    }

    /// Canonical form: reduced rational strings and explicit defaults.
    pub fn canonical(&self) -> AnalysisRequest {
        let norm = |c: &[String]| match WeierstrassModel::parse(c) {
            Ok(m) => m.to_strings().to_vec(),
            Err(_) => c.to_vec(),
        };
        let mut out = self.clone();
        out.curve = norm(&self.curve);
        out.abelian_variety.factors = self.abelian_variety.factors.iter().map(|f| norm(f)).collect();
        if out.abelian_variety.dimension.is_none() {
            out.abelian_variety.dimension = Some(out.abelian_variety.factors.len());
        }
        out
    }

    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.canonical()).expect("request serializes")
    }
}

/// Parses and runs a request; the report's own status decides the exit code.
pub fn run_analysis(text: &str) -> Result<EulerCharReport, RequestError> {
    let req = AnalysisRequest::from_json(text)?;
    Ok(analyze(&req.to_input()?)?)
}
