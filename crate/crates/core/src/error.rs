use serde_json::{json, Value};
use thiserror::Error;

pub type Result<T, E = TopoError> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// The CLI maps each variant onto one exit code (see [`TopoError::exit_code`])
/// and one JSON shape (see [`TopoError::to_json`]).
#[derive(Debug, Error)]
pub enum TopoError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed delta-set: {0}")]
    MalformedDeltaSet(String),

    #[error("invalid delta-set: {count} violation(s), first: {first}")]
    InvalidDeltaSet { count: usize, first: String },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("actions are over different groups")]
    GroupMismatch,

    #[error("action is not free: element {element} fixes simplex {simplex} in dimension {dim}")]
    NotFree { element: usize, dim: usize, simplex: usize },

    #[error("lens parameter l_{index} shares the factor {gcd} with the modulus")]
    NonPrimeParameter { index: usize, gcd: u64 },

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction would have {predicted} simplices, above the cap of {cap}")]
    SizeLimit { predicted: u128, cap: u128 },

    #[error("syntax error at {line}:{col}: expected {expected}")]
    Syntax { line: usize, col: usize, expected: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl TopoError {
    pub fn kind(&self) -> &'static str {
        match self {
            TopoError::InvalidArgument(_) => "InvalidArgument",
            TopoError::MalformedDeltaSet(_) => "MalformedDeltaSet",
            TopoError::InvalidDeltaSet { .. } => "InvalidDeltaSet",
            TopoError::InvalidMap(_) => "InvalidMap",
            TopoError::InvalidGroup(_) => "InvalidGroup",
            TopoError::InvalidAction(_) => "InvalidAction",
            TopoError::GroupMismatch => "GroupMismatch",
            TopoError::NotFree { .. } => "NotFree",
            TopoError::NonPrimeParameter { .. } => "NonPrimeParameter",
            TopoError::NotAutomorphism(_) => "NotAutomorphism",
            TopoError::Precondition(_) => "Precondition",
            TopoError::SizeLimit { .. } => "SizeLimit",
            TopoError::Syntax { .. } => "SyntaxError",
            TopoError::Io(_) => "Io",
            TopoError::Json(_) => "Json",
        }
    }

    /// 1 for syntax and I/O problems, 2 for everything the mathematics rejects.
    pub fn exit_code(&self) -> i32 {
        match self {
            TopoError::Syntax { .. } | TopoError::Io(_) | TopoError::Json(_) => 1,
            _ => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind(), "message": self.to_string() });
        let extra = match self {
            TopoError::NotFree { element, dim, simplex } => {
                json!({ "element": element, "dim": dim, "simplex": simplex })
            }
            TopoError::NonPrimeParameter { index, gcd } => json!({ "index": index, "gcd": gcd }),
            TopoError::SizeLimit { predicted, cap } => {
                json!({ "predicted": predicted.to_string(), "cap": cap.to_string() })
            }
            TopoError::Syntax { line, col, expected } => {
                json!({ "line": line, "col": col, "expected": expected })
            }
            _ => Value::Null,
        };
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, extra) {
            dst.extend(src);
        }
        v
    }
}
