//! Free finite-rank modules over the ring in `d`, λ-product tables, and the
//! sesquilinear evaluation calculus.
//!
//! Tables store values on basis vectors only; evaluation on general elements
//! extends them by the sesquilinearity rules
//! `(d·a)_λ b = -λ (a_λ b)` and `a_λ (d·b) = (d+λ)(a_λ b)`.
//! A subscript that is not a bare spectral variable (for example `-λ-d`) is
//! realized by evaluating at the fresh variable `nu` and substituting it away
//! with [`shift_spectral`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_rational::BigRational;

use crate::poly::{Poly, Var};
use crate::Error;

/// An ordered basis of a free module over the ring in `d`, together with the
/// declared parameter set of the session.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModule {
    basis: Vec<String>,
    params: BTreeSet<String>,
}

impl FreeModule {
    pub fn new(basis: Vec<String>, params: BTreeSet<String>) -> Result<Arc<Self>, Error> {
        let mut seen = BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.clone()) {
                return Err(Error::DuplicateBasisName(b.clone()));
            }
            if Var::reserved(b).is_some() || params.contains(b) {
                return Err(Error::BasisNameClash(b.clone()));
            }
        }
        for p in &params {
            if Var::reserved(p).is_some() {
                return Err(Error::ReservedParameterName(p.clone()));
            }
        }
        Ok(Arc::new(FreeModule { basis, params }))
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[String] {
        &self.basis
    }

    pub fn basis_name(&self, i: usize) -> &str {
        &self.basis[i]
    }

    pub fn params(&self) -> &BTreeSet<String> {
        &self.params
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }
}

/// An element of a free module: a coefficient vector of polynomials.
///
/// Coefficients of stored fixtures live in `d` and the parameters; elements
/// arising mid-computation may additionally carry spectral variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    module: Arc<FreeModule>,
    coeffs: Vec<Poly>,
}

impl Element {
    pub fn zero(module: &Arc<FreeModule>) -> Self {
        Element {
            module: module.clone(),
            coeffs: vec![Poly::zero(); module.rank()],
        }
    }

    pub fn basis_vector(module: &Arc<FreeModule>, i: usize) -> Self {
        let mut e = Element::zero(module);
        e.coeffs[i] = Poly::one();
        e
    }

    pub fn from_coeffs(module: &Arc<FreeModule>, coeffs: Vec<Poly>) -> Result<Self, Error> {
        if coeffs.len() != module.rank() {
            return Err(Error::RankMismatch {
                expected: module.rank(),
                got: coeffs.len(),
            });
        }
        Ok(Element {
            module: module.clone(),
            coeffs,
        })
    }

    pub fn module(&self) -> &Arc<FreeModule> {
        &self.module
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.coeffs.iter().any(|c| c.contains_var(v))
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.coeffs.iter().flat_map(|c| c.params()).collect()
    }

    /// Multiplies every coefficient by a scalar polynomial. With the scalar
    /// `f(d)` this is precisely the module action of `f(∂)`.
    pub fn scaled(&self, f: &Poly) -> Element {
        Element {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
        }
    }

    pub fn scaled_rat(&self, c: &BigRational) -> Element {
        Element {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|q| q.scale(c)).collect(),
        }
    }

    /// Coefficientwise substitution of a variable.
    pub(crate) fn subst_raw(&self, v: &Var, q: &Poly) -> Element {
        Element {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|c| c.subst_raw(v, q)).collect(),
        }
    }

    pub fn bind_params(
        &self,
        bindings: &std::collections::BTreeMap<String, BigRational>,
    ) -> Result<Element, Error> {
        Ok(Element {
            module: self.module.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.bind_params(bindings))
                .collect::<Result<_, _>>()?,
        })
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert_eq!(self.module, rhs.module, "module mismatch in element sum");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert_eq!(self.module, rhs.module, "module mismatch in element sum");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            module: self.module.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let name = self.module.basis_name(i);
            if c == &Poly::one() {
                f.write_str(name)?;
            } else {
                write!(f, "({})*{}", c, name)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn check_table_poly(p: &Poly) -> Result<(), Error> {
    if p.contains_var(&Var::Mu) || p.contains_var(&Var::Nu) {
        return Err(Error::SpectralVariableInTable);
    }
    Ok(())
}

/// A λ-product or λ-action by structure constants: for each pair of basis
/// vectors, a target element with coefficients in `d`, `lam` and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    left: Arc<FreeModule>,
    right: Arc<FreeModule>,
    target: Arc<FreeModule>,
    entries: Vec<Element>,
}

impl LambdaTable {
    pub fn new(
        left: Arc<FreeModule>,
        right: Arc<FreeModule>,
        target: Arc<FreeModule>,
        entries: Vec<Element>,
    ) -> Result<Self, Error> {
        if entries.len() != left.rank() * right.rank() {
            return Err(Error::RankMismatch {
                expected: left.rank() * right.rank(),
                got: entries.len(),
            });
        }
        for e in &entries {
            if e.module() != &target {
                return Err(Error::ModuleMismatch);
            }
            for c in e.coeffs() {
                check_table_poly(c)?;
            }
        }
        Ok(LambdaTable {
            left,
            right,
            target,
            entries,
        })
    }

    pub fn zero(
        left: &Arc<FreeModule>,
        right: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
    ) -> Self {
        LambdaTable {
            left: left.clone(),
            right: right.clone(),
            target: target.clone(),
            entries: vec![Element::zero(target); left.rank() * right.rank()],
        }
    }

    /// A square table over one module; the usual shape of an algebra.
    pub fn square(module: &Arc<FreeModule>, entries: Vec<Element>) -> Result<Self, Error> {
        LambdaTable::new(module.clone(), module.clone(), module.clone(), entries)
    }

    pub fn left(&self) -> &Arc<FreeModule> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FreeModule> {
        &self.right
    }

    pub fn target(&self) -> &Arc<FreeModule> {
        &self.target
    }

    pub fn is_square(&self) -> bool {
        self.left == self.right && self.right == self.target
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Element::is_zero)
    }

    pub fn entry(&self, i: usize, j: usize) -> &Element {
        &self.entries[i * self.right.rank() + j]
    }

    pub fn entries(&self) -> &[Element] {
        &self.entries
    }

    pub fn params(&self) -> BTreeSet<String> {
        self.entries.iter().flat_map(|e| e.params()).collect()
    }

    pub fn bind_params(
        &self,
        bindings: &std::collections::BTreeMap<String, BigRational>,
    ) -> Result<LambdaTable, Error> {
        Ok(LambdaTable {
            left: self.left.clone(),
            right: self.right.clone(),
            target: self.target.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| e.bind_params(bindings))
                .collect::<Result<_, _>>()?,
        })
    }
}

fn validate_out_var(out: &Var) -> Result<(), Error> {
    if !out.is_spectral() {
        return Err(Error::NotSpectral(out.name().to_string()));
    }
    Ok(())
}

fn rename_lam(p: &Poly, out: &Var) -> Poly {
    if *out == Var::Lam {
        p.clone()
    } else {
        p.subst_raw(&Var::Lam, &Poly::var(out.clone()))
    }
}

/// Evaluates `a_out b` on general elements:
/// `Σ_{i,j} f_i(-out) · g_j(d+out) · table(i,j)[lam := out]`.
pub fn eval_lambda(
    table: &LambdaTable,
    a: &Element,
    b: &Element,
    out: &Var,
) -> Result<Element, Error> {
    validate_out_var(out)?;
    if a.module() != table.left() || b.module() != table.right() {
        return Err(Error::ModuleMismatch);
    }
    if a.contains_var(out) || b.contains_var(out) {
        return Err(Error::VariableCollision(out.name().to_string()));
    }
    let minus_out = -&Poly::var(out.clone());
    let d_plus_out = &Poly::var(Var::D) + &Poly::var(out.clone());
    let mut acc = Element::zero(table.target());
    for (i, fi) in a.coeffs().iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        let fa = fi.subst_raw(&Var::D, &minus_out);
        for (j, gj) in b.coeffs().iter().enumerate() {
            if gj.is_zero() {
                continue;
            }
            let entry = table.entry(i, j);
            if entry.is_zero() {
                continue;
            }
            let gb = gj.subst_raw(&Var::D, &d_plus_out);
            let scalar = &fa * &gb;
            for (k, pk) in entry.coeffs().iter().enumerate() {
                if pk.is_zero() {
                    continue;
                }
                let term = &rename_lam(pk, out) * &scalar;
                acc.coeffs[k] += &term;
            }
        }
    }
    Ok(acc)
}

/// How an operator extends over multiplication by `d` in its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variance {
    /// `D_λ(f(d)·v) = f(d+λ)·D_λ(v)` — conformal linear maps.
    Conformal,
    /// `h_λ(f(d)·v) = f(-λ)·h_λ(v)` — left conformal linear maps.
    LeftConformal,
}

/// Values of an operator table: target elements, or scalar polynomials for
/// functional-valued operators.
#[derive(Clone, Debug, PartialEq, Eq)]
enum OpValues {
    Module {
        target: Arc<FreeModule>,
        entries: Vec<Element>,
    },
    Scalar {
        entries: Vec<Poly>,
    },
}

/// Result of applying an operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpResult {
    Element(Element),
    Scalar(Poly),
}

impl OpResult {
    pub fn into_element(self) -> Element {
        match self {
            OpResult::Element(e) => e,
            OpResult::Scalar(_) => panic!("expected module-valued operator result"),
        }
    }

    pub fn into_scalar(self) -> Poly {
        match self {
            OpResult::Scalar(p) => p,
            OpResult::Element(_) => panic!("expected functional-valued operator result"),
        }
    }
}

/// An operator given by its values on basis vectors.
///
/// `acting` is the optional index module of an operator family (the domain
/// of a module homomorphism into conformal endomorphisms); the index
/// argument always extends by `f(d) → f(-λ)`. `variance` governs the main
/// argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTable {
    acting: Option<Arc<FreeModule>>,
    on: Arc<FreeModule>,
    variance: Variance,
    values: OpValues,
}

impl OperatorTable {
    /// A standalone conformal operator `on → target`, e.g. a derivation.
    pub fn conformal(
        on: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
        rows: Vec<Element>,
    ) -> Result<Self, Error> {
        Self::build(None, on, Variance::Conformal, rows)
            .and_then(|t| t.check_target(target).map(|()| t))
    }

    /// A standalone left conformal functional `on → scalars`, e.g. `h`, `k`.
    pub fn left_functional(on: &Arc<FreeModule>, rows: Vec<Poly>) -> Result<Self, Error> {
        if rows.len() != on.rank() {
            return Err(Error::RankMismatch {
                expected: on.rank(),
                got: rows.len(),
            });
        }
        for p in &rows {
            check_table_poly(p)?;
        }
        Ok(OperatorTable {
            acting: None,
            on: on.clone(),
            variance: Variance::LeftConformal,
            values: OpValues::Scalar { entries: rows },
        })
    }

    /// A family of conformal operators indexed by the basis of `acting`,
    /// e.g. the actions `l, r, phi, psi` of extending datums.
    pub fn family(
        acting: &Arc<FreeModule>,
        on: &Arc<FreeModule>,
        rows: Vec<Element>,
    ) -> Result<Self, Error> {
        Self::build(Some(acting.clone()), on, Variance::Conformal, rows)
    }

    fn build(
        acting: Option<Arc<FreeModule>>,
        on: &Arc<FreeModule>,
        variance: Variance,
        rows: Vec<Element>,
    ) -> Result<Self, Error> {
        let n_idx = acting.as_ref().map(|m| m.rank()).unwrap_or(1);
        if rows.len() != n_idx * on.rank() {
            return Err(Error::RankMismatch {
                expected: n_idx * on.rank(),
                got: rows.len(),
            });
        }
        let target = match rows.first() {
            Some(e) => e.module().clone(),
            None => on.clone(),
        };
        for e in &rows {
            if e.module() != &target {
                return Err(Error::ModuleMismatch);
            }
            for c in e.coeffs() {
                check_table_poly(c)?;
            }
        }
        Ok(OperatorTable {
            acting,
            on: on.clone(),
            variance,
            values: OpValues::Module {
                target,
                entries: rows,
            },
        })
    }

    fn check_target(&self, target: &Arc<FreeModule>) -> Result<(), Error> {
        match &self.values {
            OpValues::Module { target: t, .. } if t == target => Ok(()),
            _ => Err(Error::ModuleMismatch),
        }
    }

    pub fn zero_op(on: &Arc<FreeModule>, target: &Arc<FreeModule>) -> Self {
        OperatorTable {
            acting: None,
            on: on.clone(),
            variance: Variance::Conformal,
            values: OpValues::Module {
                target: target.clone(),
                entries: vec![Element::zero(target); on.rank()],
            },
        }
    }

    pub fn zero_functional(on: &Arc<FreeModule>) -> Self {
        OperatorTable {
            acting: None,
            on: on.clone(),
            variance: Variance::LeftConformal,
            values: OpValues::Scalar {
                entries: vec![Poly::zero(); on.rank()],
            },
        }
    }

    pub fn zero_family(acting: &Arc<FreeModule>, on: &Arc<FreeModule>) -> Self {
        OperatorTable {
            acting: Some(acting.clone()),
            on: on.clone(),
            variance: Variance::Conformal,
            values: OpValues::Module {
                target: on.clone(),
                entries: vec![Element::zero(on); acting.rank() * on.rank()],
            },
        }
    }

    /// Zero family `acting → Cend(on → target)` with distinct target.
    pub fn zero_family_into(
        acting: &Arc<FreeModule>,
        on: &Arc<FreeModule>,
        target: &Arc<FreeModule>,
    ) -> Self {
        OperatorTable {
            acting: Some(acting.clone()),
            on: on.clone(),
            variance: Variance::Conformal,
            values: OpValues::Module {
                target: target.clone(),
                entries: vec![Element::zero(target); acting.rank() * on.rank()],
            },
        }
    }

    pub fn acting(&self) -> Option<&Arc<FreeModule>> {
        self.acting.as_ref()
    }

    pub fn on(&self) -> &Arc<FreeModule> {
        &self.on
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn is_scalar_valued(&self) -> bool {
        matches!(self.values, OpValues::Scalar { .. })
    }

    pub fn target(&self) -> Option<&Arc<FreeModule>> {
        match &self.values {
            OpValues::Module { target, .. } => Some(target),
            OpValues::Scalar { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.values {
            OpValues::Module { entries, .. } => entries.iter().all(Element::is_zero),
            OpValues::Scalar { entries } => entries.iter().all(Poly::is_zero),
        }
    }

    /// Table value on `(acting index, on index)`; use index 0 for standalone
    /// operators.
    pub fn module_entry(&self, idx: usize, j: usize) -> &Element {
        match &self.values {
            OpValues::Module { entries, .. } => &entries[idx * self.on.rank() + j],
            OpValues::Scalar { .. } => panic!("scalar-valued operator has no module entries"),
        }
    }

    pub fn scalar_entry(&self, j: usize) -> &Poly {
        match &self.values {
            OpValues::Scalar { entries } => &entries[j],
            OpValues::Module { .. } => panic!("module-valued operator has no scalar entries"),
        }
    }

    pub fn params(&self) -> BTreeSet<String> {
        match &self.values {
            OpValues::Module { entries, .. } => entries.iter().flat_map(|e| e.params()).collect(),
            OpValues::Scalar { entries } => entries.iter().flat_map(|p| p.params()).collect(),
        }
    }

    pub fn bind_params(
        &self,
        bindings: &std::collections::BTreeMap<String, BigRational>,
    ) -> Result<OperatorTable, Error> {
        let values = match &self.values {
            OpValues::Module { target, entries } => OpValues::Module {
                target: target.clone(),
                entries: entries
                    .iter()
                    .map(|e| e.bind_params(bindings))
                    .collect::<Result<_, _>>()?,
            },
            OpValues::Scalar { entries } => OpValues::Scalar {
                entries: entries
                    .iter()
                    .map(|p| p.bind_params(bindings))
                    .collect::<Result<_, _>>()?,
            },
        };
        Ok(OperatorTable {
            acting: self.acting.clone(),
            on: self.on.clone(),
            variance: self.variance,
            values,
        })
    }

    fn variance_subst(&self, f: &Poly, out: &Var) -> Poly {
        match self.variance {
            Variance::Conformal => {
                f.subst_raw(&Var::D, &(&Poly::var(Var::D) + &Poly::var(out.clone())))
            }
            Variance::LeftConformal => f.subst_raw(&Var::D, &-&Poly::var(out.clone())),
        }
    }

    fn apply_row(&self, idx: usize, v: &Element, out: &Var) -> Result<OpResult, Error> {
        if v.module() != &self.on {
            return Err(Error::ModuleMismatch);
        }
        if v.contains_var(out) {
            return Err(Error::VariableCollision(out.name().to_string()));
        }
        match &self.values {
            OpValues::Module { target, .. } => {
                let mut acc = Element::zero(target);
                for (j, fj) in v.coeffs().iter().enumerate() {
                    if fj.is_zero() {
                        continue;
                    }
                    let scalar = self.variance_subst(fj, out);
                    let entry = self.module_entry(idx, j);
                    for (kk, pk) in entry.coeffs().iter().enumerate() {
                        if pk.is_zero() {
                            continue;
                        }
                        acc.coeffs[kk] += &(&rename_lam(pk, out) * &scalar);
                    }
                }
                Ok(OpResult::Element(acc))
            }
            OpValues::Scalar { entries } => {
                let mut acc = Poly::zero();
                for (j, fj) in v.coeffs().iter().enumerate() {
                    if fj.is_zero() {
                        continue;
                    }
                    let scalar = self.variance_subst(fj, out);
                    acc += &(&rename_lam(&entries[j], out) * &scalar);
                }
                Ok(OpResult::Scalar(acc))
            }
        }
    }

    /// Applies a standalone operator at the spectral variable `out`,
    /// extending over `d`-coefficients by the operator's variance.
    pub fn apply(&self, v: &Element, out: &Var) -> Result<OpResult, Error> {
        validate_out_var(out)?;
        if self.acting.is_some() {
            return Err(Error::FamilyNeedsIndex);
        }
        self.apply_row(0, v, out)
    }

    /// Applies an operator family: the index argument extends by
    /// `f(d) → f(-out)`, the main argument by the variance.
    pub fn apply_family(&self, index: &Element, v: &Element, out: &Var) -> Result<OpResult, Error> {
        validate_out_var(out)?;
        let acting = self.acting.as_ref().ok_or(Error::FamilyNeedsIndex)?;
        if index.module() != acting {
            return Err(Error::ModuleMismatch);
        }
        if index.contains_var(out) {
            return Err(Error::VariableCollision(out.name().to_string()));
        }
        let minus_out = -&Poly::var(out.clone());
        let mut acc: Option<OpResult> = None;
        for (i, fi) in index.coeffs().iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            let scalar = fi.subst_raw(&Var::D, &minus_out);
            let part = self.apply_row(i, v, out)?;
            let part = match part {
                OpResult::Element(e) => OpResult::Element(e.scaled(&scalar)),
                OpResult::Scalar(p) => OpResult::Scalar(&p * &scalar),
            };
            acc = Some(match (acc, part) {
                (None, p) => p,
                (Some(OpResult::Element(mut a)), OpResult::Element(b)) => {
                    a += &b;
                    OpResult::Element(a)
                }
                (Some(OpResult::Scalar(a)), OpResult::Scalar(b)) => OpResult::Scalar(&a + &b),
                _ => unreachable!("operator value kinds cannot mix"),
            });
        }
        Ok(acc.unwrap_or(match &self.values {
            OpValues::Module { target, .. } => OpResult::Element(Element::zero(target)),
            OpValues::Scalar { .. } => OpResult::Scalar(Poly::zero()),
        }))
    }
}

/// Substitutes a spectral variable of an element by a polynomial expression,
/// coefficientwise. This realizes subscripts such as `b_{-λ-d} a`.
pub fn shift_spectral(e: &Element, v: &Var, expr: &Poly) -> Result<Element, Error> {
    validate_out_var(v)?;
    Ok(e.subst_raw(v, expr))
}

/// Scalar version of [`shift_spectral`].
pub fn shift_spectral_poly(p: &Poly, v: &Var, expr: &Poly) -> Result<Poly, Error> {
    validate_out_var(v)?;
    Ok(p.subst_raw(v, expr))
}

/// Builds the λ-table of a current algebra: given constant structure
/// coefficients `c[i][j][k]` of a finite-dimensional algebra, the λ-product
/// of basis vectors is the constant product `e_i ∘ e_j`.
pub fn build_current(
    module: &Arc<FreeModule>,
    consts: &[Vec<Vec<BigRational>>],
) -> Result<LambdaTable, Error> {
    let n = module.rank();
    if consts.len() != n || consts.iter().any(|r| r.len() != n) {
        return Err(Error::RankMismatch {
            expected: n,
            got: consts.len(),
        });
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in consts {
        for cell in row {
            if cell.len() != n {
                return Err(Error::RankMismatch {
                    expected: n,
                    got: cell.len(),
                });
            }
            let coeffs = cell.iter().map(|c| Poly::constant(c.clone())).collect();
            entries.push(Element::from_coeffs(module, coeffs)?);
        }
    }
    LambdaTable::square(module, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::int;

    fn lam() -> Var {
        Var::Lam
    }

    #[test]
    fn eval_respects_sesquilinearity_rule() {
        // R_c: x_lam x = (d+lam+c)x; then x_lam (d·x) = (d+lam)(d+lam+c)x.
        let rc = fixtures::rank1_rc();
        let m = rc.left().clone();
        let x = Element::basis_vector(&m, 0);
        let dx = x.scaled(&Poly::var(Var::D));
        let got = eval_lambda(&rc, &x, &dx, &lam()).unwrap();
        let params = m.params().clone();
        let expect = Poly::parse("(d+lam)*(d+lam+c)", &params).unwrap();
        assert_eq!(got.coeff(0), &expect);
    }

    #[test]
    fn eval_zero_table_is_zero() {
        let r0 = fixtures::rank1_r0();
        let m = r0.left().clone();
        let f = Element::basis_vector(&m, 0).scaled(&Poly::parse("d^2+1", m.params()).unwrap());
        let g = Element::basis_vector(&m, 0).scaled(&Poly::parse("d-3", m.params()).unwrap());
        assert!(eval_lambda(&r0, &f, &g, &lam()).unwrap().is_zero());
    }

    #[test]
    fn eval_table_lookup() {
        let bad1 = fixtures::rank1_bad_lam();
        let m = bad1.left().clone();
        let x = Element::basis_vector(&m, 0);
        let got = eval_lambda(&bad1, &x, &x, &lam()).unwrap();
        assert_eq!(got.coeff(0), &Poly::var(Var::Lam));
    }

    #[test]
    fn eval_rejects_collision_and_mismatch() {
        let rc = fixtures::rank1_rc();
        let m = rc.left().clone();
        let x = Element::basis_vector(&m, 0);
        let x_lam = x.scaled(&Poly::var(Var::Lam));
        assert!(matches!(
            eval_lambda(&rc, &x_lam, &x, &lam()),
            Err(Error::VariableCollision(_))
        ));
        let other = FreeModule::new(vec!["y".into()], Default::default()).unwrap();
        let y = Element::basis_vector(&other, 0);
        assert!(matches!(
            eval_lambda(&rc, &y, &x, &lam()),
            Err(Error::ModuleMismatch)
        ));
    }

    #[test]
    fn conformal_operator_variance() {
        // D_lam x = (d+lam+c)x applied to d·x gives (d+lam)(d+lam+c)x.
        let rc = fixtures::rank1_rc();
        let m = rc.left().clone();
        let entry = Element::from_coeffs(&m, vec![Poly::parse("d+lam+c", m.params()).unwrap()])
            .unwrap();
        let d_op = OperatorTable::conformal(&m, &m, vec![entry]).unwrap();
        let dx = Element::basis_vector(&m, 0).scaled(&Poly::var(Var::D));
        let got = d_op.apply(&dx, &lam()).unwrap().into_element();
        assert_eq!(
            got.coeff(0),
            &Poly::parse("(d+lam)*(d+lam+c)", m.params()).unwrap()
        );
    }

    #[test]
    fn left_functional_variance() {
        // h_lam(x, d) = d+lam applied to d·x gives (-lam)(d+lam).
        let m = FreeModule::new(vec!["x".into()], Default::default()).unwrap();
        let h = OperatorTable::left_functional(&m, vec![Poly::parse("d+lam", m.params()).unwrap()])
            .unwrap();
        let dx = Element::basis_vector(&m, 0).scaled(&Poly::var(Var::D));
        let got = h.apply(&dx, &lam()).unwrap().into_scalar();
        assert_eq!(got, Poly::parse("(0-lam)*(d+lam)", m.params()).unwrap());
    }

    #[test]
    fn zero_operator_is_zero() {
        let m = FreeModule::new(vec!["x".into()], Default::default()).unwrap();
        let z = OperatorTable::zero_op(&m, &m);
        let v = Element::basis_vector(&m, 0).scaled(&Poly::parse("d^3-2", m.params()).unwrap());
        assert!(z.apply(&v, &lam()).unwrap().into_element().is_zero());
    }

    #[test]
    fn shift_examples() {
        // x_mu x = (d+mu+c)x shifted by mu -> -lam-d gives (c-lam)x.
        let rc = fixtures::rank1_rc();
        let m = rc.left().clone();
        let x = Element::basis_vector(&m, 0);
        let w = eval_lambda(&rc, &x, &x, &Var::Mu).unwrap();
        let shifted = shift_spectral(
            &w,
            &Var::Mu,
            &Poly::parse("-lam-d", m.params()).unwrap(),
        )
        .unwrap();
        assert_eq!(shifted.coeff(0), &Poly::parse("c-lam", m.params()).unwrap());
        // Bind c=1, lam=0 as an independent spot check.
        let bound = shifted
            .coeff(0)
            .bind_params(&[("c".to_string(), int(1))].into())
            .unwrap()
            .subst_raw(&Var::Lam, &Poly::zero());
        assert_eq!(bound, Poly::one());

        // Shift by v -> v is the identity; shift of 0 is 0.
        let id = shift_spectral(&w, &Var::Mu, &Poly::var(Var::Mu)).unwrap();
        assert_eq!(id, w);
        let z = Element::zero(&m);
        assert!(shift_spectral(&z, &Var::Mu, &Poly::zero()).unwrap().is_zero());
    }

    #[test]
    fn current_algebra_tables() {
        // 1-dim algebra with x∘x = x gives the constant table x_lam x = x.
        let m = FreeModule::new(vec!["x".into()], Default::default()).unwrap();
        let t = build_current(&m, &[vec![vec![int(1)]]]).unwrap();
        assert_eq!(t, fixtures::rank1_r1());

        // Zero product gives the zero table.
        let t0 = build_current(&m, &[vec![vec![int(0)]]]).unwrap();
        assert!(t0.is_zero());

        // 2-dim algebra with e1∘e1 = e1, the rest zero.
        let m2 = FreeModule::new(vec!["e1".into(), "e2".into()], Default::default()).unwrap();
        let mut consts = vec![vec![vec![int(0); 2]; 2]; 2];
        consts[0][0][0] = int(1);
        let t2 = build_current(&m2, &consts).unwrap();
        assert_eq!(t2.entry(0, 0), &Element::basis_vector(&m2, 0));
        assert!(t2.entry(0, 1).is_zero());
        assert!(t2.entry(1, 0).is_zero());
        assert!(t2.entry(1, 1).is_zero());
    }
}
