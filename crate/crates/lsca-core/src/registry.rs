//! Registry of named identities: exposes the left-hand-minus-right-hand
//! residual of any registered law on chosen basis indices, for debugging and
//! for the cross-validation oracles.

use crate::axioms::{self, Residual};
use crate::conformal::{LambdaTable, OperatorTable};
use crate::flagdatum::{self, EquivWitness, FlagDatum};
use crate::operators;
use crate::products::{self, ExtendingDatum};
use crate::Error;

/// The tables participating in a law.
pub enum LawContext<'a> {
    /// A square λ-product table (left-symmetry, skew-symmetry, jacobi).
    Algebra(&'a LambdaTable),
    /// An algebra acting on a module by two operator families (bm1, bm2).
    Bimodule {
        r_table: &'a LambdaTable,
        l: &'a OperatorTable,
        r: &'a OperatorTable,
    },
    /// An operator identity over an algebra (derivation,
    /// semi-quasicentroid).
    Operator {
        r_table: &'a LambdaTable,
        op: &'a OperatorTable,
    },
    /// A twisted derivation pair.
    TwistedDerivation {
        r_table: &'a LambdaTable,
        d_op: &'a OperatorTable,
        g: &'a OperatorTable,
    },
    /// An extending datum (LC1..LC10, C1..C5).
    Datum(&'a ExtendingDatum),
    /// A flag datum (lfd1..lfd10).
    Flag(&'a FlagDatum),
    /// An equivalence witness check (eq4.1..eq4.4).
    Equiv {
        fd1: &'a FlagDatum,
        fd2: &'a FlagDatum,
        witness: &'a EquivWitness,
    },
}

/// All registered law identifiers.
pub const LAW_IDS: &[&str] = &[
    "left-symmetry",
    "skew-symmetry",
    "jacobi",
    "bm1",
    "bm2",
    "derivation",
    "twisted-derivation",
    "semi-quasicentroid",
    "LC1",
    "LC2",
    "LC3",
    "LC4",
    "LC5",
    "LC6",
    "LC7",
    "LC8",
    "LC9",
    "LC10",
    "C1",
    "C2",
    "C3",
    "C4",
    "C5",
    "lfd1",
    "lfd2",
    "lfd3",
    "lfd4",
    "lfd5",
    "lfd6",
    "lfd7",
    "lfd8",
    "lfd9",
    "lfd10",
    "eq4.1",
    "eq4.2",
    "eq4.3",
    "eq4.4",
];

/// Computes the canonical residual of a registered law at the given basis
/// indices. Unknown law names are rejected.
pub fn residual(law: &str, ctx: &LawContext, indices: &[usize]) -> Result<Residual, Error> {
    match (law, ctx) {
        ("left-symmetry", LawContext::Algebra(t)) => match indices {
            [i, j, k] => Ok(axioms::residual_left_symmetry(t, *i, *j, *k)),
            _ => Err(Error::BadIndices),
        },
        ("skew-symmetry", LawContext::Algebra(t)) => match indices {
            [i, j] => Ok(axioms::residual_skew(t, *i, *j)),
            _ => Err(Error::BadIndices),
        },
        ("jacobi", LawContext::Algebra(t)) => match indices {
            [i, j, k] => Ok(axioms::residual_jacobi(t, *i, *j, *k)),
            _ => Err(Error::BadIndices),
        },
        ("bm1", LawContext::Bimodule { r_table, l, .. }) => match indices {
            [i, j, k] => Ok(axioms::residual_bm1(r_table, l, *i, *j, *k)),
            _ => Err(Error::BadIndices),
        },
        ("bm2", LawContext::Bimodule { r_table, l, r }) => match indices {
            [i, j, k] => Ok(axioms::residual_bm2(r_table, l, r, *i, *j, *k)),
            _ => Err(Error::BadIndices),
        },
        ("derivation", LawContext::Operator { r_table, op }) => match indices {
            [i, j] => Ok(operators::residual_derivation(r_table, op, *i, *j)),
            _ => Err(Error::BadIndices),
        },
        ("semi-quasicentroid", LawContext::Operator { r_table, op }) => match indices {
            [i, j] => Ok(operators::residual_semiquasicentroid(r_table, op, *i, *j)),
            _ => Err(Error::BadIndices),
        },
        ("twisted-derivation", LawContext::TwistedDerivation { r_table, d_op, g }) => {
            match indices {
                [i, j] => Ok(operators::residual_twisted_derivation(
                    r_table, d_op, g, *i, *j,
                )),
                _ => Err(Error::BadIndices),
            }
        }
        (lc, LawContext::Datum(d)) if lc.starts_with("LC") || lc.starts_with('C') => {
            products::lc_residual(d, lc, indices)
        }
        (lfd, LawContext::Flag(fd)) if lfd.starts_with("lfd") => {
            flagdatum::lfd_residual(fd, lfd, indices)
        }
        (eq, LawContext::Equiv { fd1, fd2, witness }) if eq.starts_with("eq4.") => {
            let report = flagdatum::check_equiv(fd1, fd2, witness)?;
            for f in &report.failures {
                if f.law == eq && f.indices == indices {
                    return Ok(f.residual.clone());
                }
            }
            // No failure recorded for this law instance: residual is zero.
            Ok(Residual::Scalar(crate::poly::Poly::zero()))
        }
        _ if !LAW_IDS.contains(&law) => Err(Error::UnknownLaw(law.to_string())),
        _ => Err(Error::BadIndices),
    }
}
