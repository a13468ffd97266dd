//! An exact symbolic workbench for left-symmetric conformal algebras over
//! free polynomial-ring modules.
//!
//! The crate represents λ-products by structure-constant tables over an
//! exact rational polynomial ring, verifies the defining identities and
//! every compatibility system as polynomial identities, constructs unified,
//! crossed and bicrossed products, and solves bounded-degree classification
//! problems (conformal derivations, inner semi-quasicentroids, datum
//! equivalence) by exact linear algebra.
//!
//! Expression grammar used by the parser and all file formats:
//!
//! ```text
//! expr     := ('+'|'-')? term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' nonneg_int)?
//! base     := rational | ident | '(' expr ')'
//! rational := int ('/' posint)?
//! ident    := [A-Za-z_][A-Za-z0-9_]*
//! ```
//!
//! `d` denotes the module generator ∂; `lam`, `mu`, `nu` are the reserved
//! spectral variables; every other identifier must be a declared parameter.

pub mod axioms;
pub mod conformal;
pub mod fixtures;
pub mod flagdatum;
pub mod io;
mod linalg;
pub mod operators;
pub mod poly;
pub mod products;
pub mod registry;

use thiserror::Error as ThisError;

/// All errors produced by the workbench.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("undeclared identifier `{0}`")]
    UndeclaredIdentifier(String),
    #[error("cannot substitute parameter `{0}`; bind it to a value instead")]
    SubstituteParameter(String),
    #[error("cannot bind reserved variable `{0}`")]
    BindReserved(String),
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),
    #[error("duplicate basis name `{0}`")]
    DuplicateBasisName(String),
    #[error("basis name `{0}` collides with a reserved variable or parameter")]
    BasisNameClash(String),
    #[error("parameter name `{0}` is reserved")]
    ReservedParameterName(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("module mismatch between tables or elements")]
    ModuleMismatch,
    #[error("table entries must not contain `mu` or `nu`")]
    SpectralVariableInTable,
    #[error("`{0}` is not a spectral variable")]
    NotSpectral(String),
    #[error("spectral variable `{0}` already occurs in an operand")]
    VariableCollision(String),
    #[error("operator family application requires an index element")]
    FamilyNeedsIndex,
    #[error("table is not square")]
    NotSquare,
    #[error("table fails left-symmetry ({0} residual(s))")]
    NotLeftSymmetric(usize),
    #[error("datum fails its compatibility conditions:\n{0}")]
    DatumFailsConditions(Box<axioms::CheckReport>),
    #[error("symbolic parameter `{0}` present; bind all parameters before solving")]
    SymbolicParameters(String),
    #[error("assembled system is not linear in the unknowns")]
    NonLinearSystem,
    #[error("the R block is not closed under the product")]
    BlockNotClosed,
    #[error("crossed/bicrossed shape violated: {0}")]
    ActionsNotTrivial(&'static str),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("candidate beta list is empty")]
    EmptyBetaList,
    #[error("unknown law id `{0}`")]
    UnknownLaw(String),
    #[error("wrong number of indices for this law")]
    BadIndices,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

/// Configures the global compute thread pool from the
/// `CONFORMAL_WORKBENCH_THREADS` environment variable (`0` or unset picks
/// the automatic default). Safe to call more than once; later calls are
/// ignored.
pub fn configure_threads_from_env() {
    if let Ok(v) = std::env::var("CONFORMAL_WORKBENCH_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}
