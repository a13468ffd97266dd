//! The rank-1 extension engine: flag datums, their ten defining identities,
//! the extension builder, equivalence of datums (with witness check and
//! bounded search), and membership in the two distinguished families.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::axioms::{collect_failures, tuples, CheckReport, Failure, Residual};
use crate::conformal::{
    eval_lambda, shift_spectral, Element, FreeModule, LambdaTable, OperatorTable, Variance,
};
use crate::linalg;
use crate::operators::{
    check_derivation, check_twisted_derivation, linear_system_from_residuals, require_numeric,
    unknown_name, DegreeBound,
};
use crate::products::{build_unified_unchecked, ExtendingDatum, ProductAlgebra};
use crate::poly::{Poly, Var};
use crate::Error;

/// The sextuple `(h, k, D, T, M, P)` describing a rank-1 extension of the
/// base algebra: two left conformal functionals, two conformal operators, an
/// element `M` and a polynomial `P`, all in `lam`, `d` and parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagDatum {
    pub r_table: LambdaTable,
    pub h: OperatorTable,
    pub k: OperatorTable,
    pub d_op: OperatorTable,
    pub t_op: OperatorTable,
    pub m: Element,
    pub p: Poly,
    /// Basis name used for the adjoined rank-1 generator.
    pub q_name: String,
}

/// An equivalence witness `(ω, β)`: an element of `R` with `d`-only
/// coefficients and a nonzero rational scale.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivWitness {
    pub omega: Element,
    pub beta: BigRational,
}

impl EquivWitness {
    pub fn new(omega: Element, beta: BigRational) -> Result<Self, Error> {
        if beta.is_zero() {
            return Err(Error::InvalidWitness("beta must be nonzero".into()));
        }
        if omega.contains_var(&Var::Lam)
            || omega.contains_var(&Var::Mu)
            || omega.contains_var(&Var::Nu)
        {
            return Err(Error::InvalidWitness(
                "omega must have d-only coefficients".into(),
            ));
        }
        Ok(EquivWitness { omega, beta })
    }
}

impl FlagDatum {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        r_table: LambdaTable,
        h: OperatorTable,
        k: OperatorTable,
        d_op: OperatorTable,
        t_op: OperatorTable,
        m: Element,
        p: Poly,
        q_name: &str,
    ) -> Result<Self, Error> {
        if !r_table.is_square() {
            return Err(Error::NotSquare);
        }
        let rm = r_table.left();
        let functional_ok = |t: &OperatorTable| {
            t.acting().is_none()
                && t.is_scalar_valued()
                && t.on() == rm
                && t.variance() == Variance::LeftConformal
        };
        if !functional_ok(&h) || !functional_ok(&k) {
            return Err(Error::ModuleMismatch);
        }
        let op_ok = |t: &OperatorTable| {
            t.acting().is_none()
                && t.on() == rm
                && t.target() == Some(rm)
                && t.variance() == Variance::Conformal
        };
        if !op_ok(&d_op) || !op_ok(&t_op) {
            return Err(Error::ModuleMismatch);
        }
        if m.module() != rm {
            return Err(Error::ModuleMismatch);
        }
        if m.contains_var(&Var::Mu) || m.contains_var(&Var::Nu) {
            return Err(Error::SpectralVariableInTable);
        }
        if p.contains_var(&Var::Mu) || p.contains_var(&Var::Nu) {
            return Err(Error::SpectralVariableInTable);
        }
        if rm.basis().iter().any(|b| b == q_name) {
            return Err(Error::DuplicateBasisName(q_name.to_string()));
        }
        Ok(FlagDatum {
            r_table,
            h,
            k,
            d_op,
            t_op,
            m,
            p,
            q_name: q_name.to_string(),
        })
    }

    /// The all-zero flag datum over an algebra.
    pub fn zero(r_table: LambdaTable, q_name: &str) -> Result<Self, Error> {
        let rm = r_table.left().clone();
        FlagDatum::new(
            r_table,
            OperatorTable::zero_functional(&rm),
            OperatorTable::zero_functional(&rm),
            OperatorTable::zero_op(&rm, &rm),
            OperatorTable::zero_op(&rm, &rm),
            Element::zero(&rm),
            Poly::zero(),
            q_name,
        )
    }

    pub fn params(&self) -> std::collections::BTreeSet<String> {
        let mut out = self.r_table.params();
        out.extend(self.h.params());
        out.extend(self.k.params());
        out.extend(self.d_op.params());
        out.extend(self.t_op.params());
        out.extend(self.m.params());
        out.extend(self.p.params());
        out
    }

    pub fn bind_params(&self, bindings: &BTreeMap<String, BigRational>) -> Result<Self, Error> {
        Ok(FlagDatum {
            r_table: self.r_table.bind_params(bindings)?,
            h: self.h.bind_params(bindings)?,
            k: self.k.bind_params(bindings)?,
            d_op: self.d_op.bind_params(bindings)?,
            t_op: self.t_op.bind_params(bindings)?,
            m: self.m.bind_params(bindings)?,
            p: self.p.bind_params(bindings)?,
            q_name: self.q_name.clone(),
        })
    }
}

/// Shift expressions shared by the identity transcriptions.
struct Sh {
    lam_mu: Poly,
    m_lam_d: Poly,
    m_mu_d: Poly,
    m_lam_mu_d: Poly,
    m_lam_mu: Poly,
    lam_d: Poly,
    mu_d: Poly,
}

impl Sh {
    fn new() -> Self {
        let lam = Poly::var(Var::Lam);
        let mu = Poly::var(Var::Mu);
        let d = Poly::var(Var::D);
        Sh {
            lam_mu: &lam + &mu,
            m_lam_d: &(-&lam) - &d,
            m_mu_d: &(-&mu) - &d,
            m_lam_mu_d: &(&(-&lam) - &mu) - &d,
            m_lam_mu: &(-&lam) - &mu,
            lam_d: &lam + &d,
            mu_d: &mu + &d,
        }
    }
}

struct FOps<'a> {
    fd: &'a FlagDatum,
    sh: Sh,
}

impl<'a> FOps<'a> {
    fn new(fd: &'a FlagDatum) -> Self {
        FOps { fd, sh: Sh::new() }
    }

    fn basis(&self, i: usize) -> Element {
        Element::basis_vector(self.fd.r_table.left(), i)
    }

    fn prod(&self, a: &Element, b: &Element, out: &Var) -> Element {
        eval_lambda(&self.fd.r_table, a, b, out).unwrap()
    }

    fn d_at(&self, a: &Element, out: &Var) -> Element {
        self.fd.d_op.apply(a, out).unwrap().into_element()
    }

    fn t_at(&self, a: &Element, out: &Var) -> Element {
        self.fd.t_op.apply(a, out).unwrap().into_element()
    }

    /// `T_{-λ-d}(a)` via the fresh slot.
    fn t_shifted(&self, a: &Element, expr: &Poly) -> Element {
        shift_spectral(&self.t_at(a, &Var::Nu), &Var::Nu, expr).unwrap()
    }

    fn d_shifted(&self, a: &Element, expr: &Poly) -> Element {
        shift_spectral(&self.d_at(a, &Var::Nu), &Var::Nu, expr).unwrap()
    }

    fn h_scalar(&self, a: &Element, out: &Var) -> Poly {
        self.fd.h.apply(a, out).unwrap().into_scalar()
    }

    fn k_scalar(&self, a: &Element, out: &Var) -> Poly {
        self.fd.k.apply(a, out).unwrap().into_scalar()
    }

    /// Stored table entry `H_a(lam, d)` on a basis vector.
    fn h_entry(&self, i: usize) -> &Poly {
        self.fd.h.scalar_entry(i)
    }

    fn k_entry(&self, i: usize) -> &Poly {
        self.fd.k.scalar_entry(i)
    }

    fn m_at(&self, lam_to: &Poly) -> Element {
        self.fd.m.clone().subst_raw(&Var::Lam, lam_to)
    }

    fn p_at(&self, lam_to: &Poly, d_to: &Poly) -> Poly {
        self.fd
            .p
            .subst_multi(&[(Var::Lam, lam_to.clone()), (Var::D, d_to.clone())])
    }

    fn sub2(&self, p: &Poly, lam_to: &Poly, d_to: &Poly) -> Poly {
        p.subst_multi(&[(Var::Lam, lam_to.clone()), (Var::D, d_to.clone())])
    }

    fn sh(&self, e: &Element, expr: &Poly) -> Element {
        shift_spectral(e, &Var::Nu, expr).unwrap()
    }

    fn shp(&self, p: &Poly, expr: &Poly) -> Poly {
        p.subst_raw(&Var::Nu, expr)
    }

    /// `M(λ,∂)` and `P(λ,∂)` with `λ -> λ+μ` / `λ -> μ`.
    fn m_lam_mu(&self) -> Element {
        self.m_at(&self.sh.lam_mu)
    }

    fn m_mu(&self) -> Element {
        self.m_at(&Poly::var(Var::Mu))
    }

    fn p_diff(&self) -> Poly {
        // P(λ, -λ-μ) - P(μ, -λ-μ)
        let lam = Poly::var(Var::Lam);
        let mu = Poly::var(Var::Mu);
        &self.p_at(&lam, &self.sh.m_lam_mu) - &self.p_at(&mu, &self.sh.m_lam_mu)
    }
}

/// lfd1 on `(a, b)`:
/// `(D_λ(a) - T_λ(a))_{λ+μ} b + (k_μ(a,-λ-μ) - h_μ(a,-λ-μ))·D_{λ+μ}(b)
///  - D_λ(a_μ b) + a_μ(D_λ(b)) + k_{-λ-μ-d}(b, μ+d)·T_{-μ-d}(a)`.
fn lfd1(o: &FOps, ai: usize, bi: usize) -> Residual {
    let a = o.basis(ai);
    let b = o.basis(bi);
    let mu = Poly::var(Var::Mu);

    let u = &o.d_at(&a, &Var::Lam) - &o.t_at(&a, &Var::Lam);
    let t1 = o.sh(&o.prod(&u, &b, &Var::Nu), &o.sh.lam_mu);
    let s2 = o.sub2(
        &(&o.k_entry(ai).clone() - o.h_entry(ai)),
        &mu,
        &o.sh.m_lam_mu,
    );
    let t2 = o.d_shifted(&b, &o.sh.lam_mu).scaled(&s2);
    let t3 = o.d_at(&o.prod(&a, &b, &Var::Mu), &Var::Lam);
    let t4 = o.prod(&a, &o.d_at(&b, &Var::Lam), &Var::Mu);
    let s5 = o.sub2(o.k_entry(bi), &o.sh.m_lam_mu_d, &o.sh.mu_d);
    let t5 = o.t_shifted(&a, &o.sh.m_mu_d).scaled(&s5);
    Residual::Element(&(&(&(&t1 + &t2) - &t3) + &t4) + &t5)
}

/// lfd2 on `(a, b)` (scalar):
/// `(k_μ(a,-λ-μ) - h_μ(a,-λ-μ))·k_{-λ-μ-d}(b, d) - k_{-λ-d}(a_μ b, d)
///  + k_{-λ-μ-d}(b, μ+d)·h_μ(a, d)`.
fn lfd2(o: &FOps, ai: usize, bi: usize) -> Residual {
    let a = o.basis(ai);
    let b = o.basis(bi);
    let mu = Poly::var(Var::Mu);
    let dd = Poly::var(Var::D);

    let s1 = &o.sub2(
        &(&o.k_entry(ai).clone() - o.h_entry(ai)),
        &mu,
        &o.sh.m_lam_mu,
    ) * &o.sub2(o.k_entry(bi), &o.sh.m_lam_mu_d, &dd);
    let s2 = o.shp(
        &o.k_scalar(&o.prod(&a, &b, &Var::Mu), &Var::Nu),
        &o.sh.m_lam_d,
    );
    let s3 = &o.sub2(o.k_entry(bi), &o.sh.m_lam_mu_d, &o.sh.mu_d)
        * &o.sub2(o.h_entry(ai), &mu, &dd);
    Residual::Scalar(&(&s1 - &s2) + &s3)
}

/// lfd3 on `(a, b)`:
/// `T_{-λ-μ-d}(a_λ b - b_μ a) - a_λ T_{-μ-d}(b) + b_μ T_{-λ-d}(a)
///  - h_μ(b, λ+d)·T_{-λ-d}(a) + h_λ(a, μ+d)·T_{-μ-d}(b)`.
fn lfd3(o: &FOps, ai: usize, bi: usize) -> Residual {
    let a = o.basis(ai);
    let b = o.basis(bi);
    let mu = Poly::var(Var::Mu);
    let lam = Poly::var(Var::Lam);

    let w = &o.prod(&a, &b, &Var::Lam) - &o.prod(&b, &a, &Var::Mu);
    let t1 = o.sh(
        &o.fd.t_op.apply(&w, &Var::Nu).unwrap().into_element(),
        &o.sh.m_lam_mu_d,
    );
    let tb = o.t_shifted(&b, &o.sh.m_mu_d);
    let t2 = o.prod(&a, &tb, &Var::Lam);
    let ta = o.t_shifted(&a, &o.sh.m_lam_d);
    let t3 = o.prod(&b, &ta, &Var::Mu);
    let t4 = ta.scaled(&o.sub2(o.h_entry(bi), &mu, &o.sh.lam_d));
    let t5 = tb.scaled(&o.sub2(o.h_entry(ai), &lam, &o.sh.mu_d));
    Residual::Element(&(&(&(&t1 - &t2) + &t3) - &t4) + &t5)
}

/// lfd4 on `(a, b)` (scalar):
/// `h_{λ+μ}(a_λ b - b_μ a, d) - h_μ(b, λ+d)·h_λ(a, d) + h_λ(a, μ+d)·h_μ(b, d)`.
fn lfd4(o: &FOps, ai: usize, bi: usize) -> Residual {
    let a = o.basis(ai);
    let b = o.basis(bi);
    let mu = Poly::var(Var::Mu);
    let lam = Poly::var(Var::Lam);
    let dd = Poly::var(Var::D);

    let w = &o.prod(&a, &b, &Var::Lam) - &o.prod(&b, &a, &Var::Mu);
    let s1 = o.shp(&o.h_scalar(&w, &Var::Nu), &o.sh.lam_mu);
    let s2 = &o.sub2(o.h_entry(bi), &mu, &o.sh.lam_d) * &o.sub2(o.h_entry(ai), &lam, &dd);
    let s3 = &o.sub2(o.h_entry(ai), &lam, &o.sh.mu_d) * &o.sub2(o.h_entry(bi), &mu, &dd);
    Residual::Scalar(&(&s1 - &s2) + &s3)
}

/// lfd5 on `(a)`:
/// `T_{-λ-μ-d}(T_μ(a) - D_μ(a)) + h_λ(a,-λ-μ)·M(λ+μ,d) - P(μ,λ+d)·T_{-λ-d}(a)
///  - a_λ M(μ,d) - k_λ(a,-λ-μ)·M(λ+μ,d) + D_μ(T_{-λ-d}(a)) + h_λ(a,μ+d)·M(μ,d)`.
fn lfd5(o: &FOps, ai: usize) -> Residual {
    let a = o.basis(ai);
    let lam = Poly::var(Var::Lam);
    let mu = Poly::var(Var::Mu);

    let w = &o.t_at(&a, &Var::Mu) - &o.d_at(&a, &Var::Mu);
    let t1 = o.sh(
        &o.fd.t_op.apply(&w, &Var::Nu).unwrap().into_element(),
        &o.sh.m_lam_mu_d,
    );
    let t2 = o
        .m_lam_mu()
        .scaled(&o.sub2(o.h_entry(ai), &lam, &o.sh.m_lam_mu));
    let ta = o.t_shifted(&a, &o.sh.m_lam_d);
    let t3 = ta.scaled(&o.p_at(&mu, &o.sh.lam_d));
    let t4 = o.prod(&a, &o.m_mu(), &Var::Lam);
    let t5 = o
        .m_lam_mu()
        .scaled(&o.sub2(o.k_entry(ai), &lam, &o.sh.m_lam_mu));
    let t6 = o.d_at(&ta, &Var::Mu);
    let t7 = o.m_mu().scaled(&o.sub2(o.h_entry(ai), &lam, &o.sh.mu_d));
    Residual::Element(&(&(&(&(&(&t1 + &t2) - &t3) - &t4) - &t5) + &t6) + &t7)
}

/// lfd6 on `(a)` (scalar):
/// `h_λ(a,-λ-μ)·P(λ+μ,d) + h_{λ+μ}(T_{-λ-d}(a), d) - P(μ,λ+d)·h_λ(a,d)
///  - h_{λ+μ}(D_μ(a), d) - k_λ(a,-λ-μ)·P(λ+μ,d) + k_{-μ-d}(T_{-λ-d}(a), d)
///  + h_λ(a,μ+d)·P(μ,d)`.
fn lfd6(o: &FOps, ai: usize) -> Residual {
    let a = o.basis(ai);
    let lam = Poly::var(Var::Lam);
    let mu = Poly::var(Var::Mu);
    let dd = Poly::var(Var::D);

    let p_lam_mu = o.p_at(&o.sh.lam_mu, &dd);
    let ta = o.t_shifted(&a, &o.sh.m_lam_d);
    let s1 = &o.sub2(o.h_entry(ai), &lam, &o.sh.m_lam_mu) * &p_lam_mu;
    let s2 = o.shp(&o.h_scalar(&ta, &Var::Nu), &o.sh.lam_mu);
    let s3 = &o.p_at(&mu, &o.sh.lam_d) * &o.sub2(o.h_entry(ai), &lam, &dd);
    let s4 = o.shp(&o.h_scalar(&o.d_at(&a, &Var::Mu), &Var::Nu), &o.sh.lam_mu);
    let s5 = &o.sub2(o.k_entry(ai), &lam, &o.sh.m_lam_mu) * &p_lam_mu;
    let s6 = o.shp(&o.k_scalar(&ta, &Var::Nu), &o.sh.m_mu_d);
    let s7 = &o.sub2(o.h_entry(ai), &lam, &o.sh.mu_d) * &o.p_at(&mu, &dd);
    Residual::Scalar(&(&(&(&(&(&s1 + &s2) - &s3) - &s4) - &s5) + &s6) + &s7)
}

/// lfd7 on `(a)`:
/// `(M(λ,d) - M(μ,d))_{λ+μ} a + (P(λ,-λ-μ) - P(μ,-λ-μ))·D_{λ+μ}(a)
///  - D_λ(D_μ(a)) + D_μ(D_λ(a)) - k_{-λ-μ-d}(a, λ+d)·M(λ,d)
///  + k_{-λ-μ-d}(a, μ+d)·M(μ,d)`.
fn lfd7(o: &FOps, ai: usize) -> Residual {
    let a = o.basis(ai);
    let m_diff = &o.fd.m - &o.m_mu();
    let t1 = o.sh(&o.prod(&m_diff, &a, &Var::Nu), &o.sh.lam_mu);
    let t2 = o.d_shifted(&a, &o.sh.lam_mu).scaled(&o.p_diff());
    let t3 = o.d_at(&o.d_at(&a, &Var::Mu), &Var::Lam);
    let t4 = o.d_at(&o.d_at(&a, &Var::Lam), &Var::Mu);
    let t5 = o
        .fd
        .m
        .scaled(&o.sub2(o.k_entry(ai), &o.sh.m_lam_mu_d, &o.sh.lam_d));
    let t6 = o
        .m_mu()
        .scaled(&o.sub2(o.k_entry(ai), &o.sh.m_lam_mu_d, &o.sh.mu_d));
    Residual::Element(&(&(&(&(&t1 + &t2) - &t3) + &t4) - &t5) + &t6)
}

/// lfd8 on `(a)` (scalar):
/// `(P(λ,-λ-μ) - P(μ,-λ-μ))·k_{-λ-μ-d}(a, d) - k_{-λ-d}(D_μ(a), d)
///  + k_{-μ-d}(D_λ(a), d) - k_{-λ-μ-d}(a, λ+d)·P(λ,d)
///  + k_{-λ-μ-d}(a, μ+d)·P(μ,d)`.
fn lfd8(o: &FOps, ai: usize) -> Residual {
    let a = o.basis(ai);
    let lam = Poly::var(Var::Lam);
    let mu = Poly::var(Var::Mu);
    let dd = Poly::var(Var::D);

    let s1 = &o.p_diff() * &o.sub2(o.k_entry(ai), &o.sh.m_lam_mu_d, &dd);
    let s2 = o.shp(&o.k_scalar(&o.d_at(&a, &Var::Mu), &Var::Nu), &o.sh.m_lam_d);
    let s3 = o.shp(&o.k_scalar(&o.d_at(&a, &Var::Lam), &Var::Nu), &o.sh.m_mu_d);
    let s4 = &o.sub2(o.k_entry(ai), &o.sh.m_lam_mu_d, &o.sh.lam_d) * &o.p_at(&lam, &dd);
    let s5 = &o.sub2(o.k_entry(ai), &o.sh.m_lam_mu_d, &o.sh.mu_d) * &o.p_at(&mu, &dd);
    Residual::Scalar(&(&(&(&s1 - &s2) + &s3) - &s4) + &s5)
}

/// lfd9 (no free index):
/// `T_{-λ-μ-d}(M(λ,d) - M(μ,d)) + (P(λ,-λ-μ) - P(μ,-λ-μ))·M(λ+μ,d)
///  - D_λ(M(μ,d)) + D_μ(M(λ,d)) - P(μ,λ+d)·M(λ,d) + P(λ,μ+d)·M(μ,d)`.
fn lfd9(o: &FOps) -> Residual {
    let lam = Poly::var(Var::Lam);
    let mu = Poly::var(Var::Mu);

    let m_diff = &o.fd.m - &o.m_mu();
    let t1 = o.sh(
        &o.fd.t_op.apply(&m_diff, &Var::Nu).unwrap().into_element(),
        &o.sh.m_lam_mu_d,
    );
    let t2 = o.m_lam_mu().scaled(&o.p_diff());
    let t3 = o.d_at(&o.m_mu(), &Var::Lam);
    let t4 = o.d_at(&o.fd.m, &Var::Mu);
    let t5 = o.fd.m.scaled(&o.p_at(&mu, &o.sh.lam_d));
    let t6 = o.m_mu().scaled(&o.p_at(&lam, &o.sh.mu_d));
    Residual::Element(&(&(&(&(&t1 + &t2) - &t3) + &t4) - &t5) + &t6)
}

/// lfd10 (no free index, scalar):
/// `h_{λ+μ}(M(λ,d) - M(μ,d), d) + (P(λ,-λ-μ) - P(μ,-λ-μ))·P(λ+μ,d)
///  - k_{-λ-d}(M(μ,d), d) + k_{-μ-d}(M(λ,d), d) - P(μ,λ+d)·P(λ,d)
///  + P(λ,μ+d)·P(μ,d)`.
fn lfd10(o: &FOps) -> Residual {
    let lam = Poly::var(Var::Lam);
    let mu = Poly::var(Var::Mu);
    let dd = Poly::var(Var::D);

    let m_diff = &o.fd.m - &o.m_mu();
    let s1 = o.shp(&o.h_scalar(&m_diff, &Var::Nu), &o.sh.lam_mu);
    let s2 = &o.p_diff() * &o.p_at(&o.sh.lam_mu, &dd);
    let s3 = o.shp(&o.k_scalar(&o.m_mu(), &Var::Nu), &o.sh.m_lam_d);
    let s4 = o.shp(&o.k_scalar(&o.fd.m, &Var::Nu), &o.sh.m_mu_d);
    let s5 = &o.p_at(&mu, &o.sh.lam_d) * &o.p_at(&lam, &dd);
    let s6 = &o.p_at(&lam, &o.sh.mu_d) * &o.p_at(&mu, &dd);
    Residual::Scalar(&(&(&(&(&s1 + &s2) - &s3) + &s4) - &s5) + &s6)
}

pub(crate) fn lfd_residual(fd: &FlagDatum, law: &str, ix: &[usize]) -> Result<Residual, Error> {
    let o = FOps::new(fd);
    let r = match (law, ix) {
        ("lfd1", [a, b]) => lfd1(&o, *a, *b),
        ("lfd2", [a, b]) => lfd2(&o, *a, *b),
        ("lfd3", [a, b]) => lfd3(&o, *a, *b),
        ("lfd4", [a, b]) => lfd4(&o, *a, *b),
        ("lfd5", [a]) => lfd5(&o, *a),
        ("lfd6", [a]) => lfd6(&o, *a),
        ("lfd7", [a]) => lfd7(&o, *a),
        ("lfd8", [a]) => lfd8(&o, *a),
        ("lfd9", []) => lfd9(&o),
        ("lfd10", []) => lfd10(&o),
        _ => return Err(Error::UnknownLaw(law.to_string())),
    };
    Ok(r)
}

const LFD_LAWS: [(&str, usize); 10] = [
    ("lfd1", 2),
    ("lfd2", 2),
    ("lfd3", 2),
    ("lfd4", 2),
    ("lfd5", 1),
    ("lfd6", 1),
    ("lfd7", 1),
    ("lfd8", 1),
    ("lfd9", 0),
    ("lfd10", 0),
];

/// Checks the ten flag-datum identities on all basis tuples.
pub fn check_flag(fd: &FlagDatum) -> CheckReport {
    let n = fd.r_table.left().rank();
    let mut report = CheckReport::default();
    for (law, arity) in LFD_LAWS {
        let ranks = vec![n; arity];
        let mut part = collect_failures(law, tuples(&ranks), |ix| {
            lfd_residual(fd, law, ix).unwrap()
        });
        for f in &mut part.failures {
            f.index_names = f
                .indices
                .iter()
                .map(|&i| fd.r_table.left().basis_name(i).to_string())
                .collect();
        }
        report.merge(part);
    }
    report
}

/// Translates a flag datum into the rank-1 extending datum with
/// `l(a)_λ x = h_λ(a,d)x`, `r(a)_λ x = k_λ(a,d)x`, `phi(x)_λ a = D_λ(a)`,
/// `psi(x)_λ a = T_λ(a)`, `g_λ(x,x) = M`, `x∘_λ x = P·x`.
pub fn flag_to_datum(fd: &FlagDatum) -> Result<ExtendingDatum, Error> {
    let rm = fd.r_table.left().clone();
    let n = rm.rank();
    let qm = FreeModule::new(vec![fd.q_name.clone()], rm.params().clone())?;

    let mut l_rows = Vec::with_capacity(n);
    let mut r_rows = Vec::with_capacity(n);
    for i in 0..n {
        l_rows.push(Element::from_coeffs(&qm, vec![fd.h.scalar_entry(i).clone()])?);
        r_rows.push(Element::from_coeffs(&qm, vec![fd.k.scalar_entry(i).clone()])?);
    }
    let mut phi_rows = Vec::with_capacity(n);
    let mut psi_rows = Vec::with_capacity(n);
    for i in 0..n {
        phi_rows.push(fd.d_op.module_entry(0, i).clone());
        psi_rows.push(fd.t_op.module_entry(0, i).clone());
    }
    ExtendingDatum::new(
        fd.r_table.clone(),
        qm.clone(),
        OperatorTable::family(&qm, &rm, phi_rows)?,
        OperatorTable::family(&qm, &rm, psi_rows)?,
        OperatorTable::family(&rm, &qm, l_rows)?,
        OperatorTable::family(&rm, &qm, r_rows)?,
        LambdaTable::new(qm.clone(), qm.clone(), rm.clone(), vec![fd.m.clone()])?,
        LambdaTable::new(
            qm.clone(),
            qm.clone(),
            qm.clone(),
            vec![Element::from_coeffs(&qm, vec![fd.p.clone()])?],
        )?,
    )
}

/// Builds the rank `n+1` extension determined by a flag datum; refuses
/// datums failing [`check_flag`].
pub fn build_flag_extension(fd: &FlagDatum) -> Result<ProductAlgebra, Error> {
    let report = check_flag(fd);
    if !report.passed() {
        return Err(Error::DatumFailsConditions(Box::new(report)));
    }
    build_flag_extension_unchecked(fd)
}

pub fn build_flag_extension_unchecked(fd: &FlagDatum) -> Result<ProductAlgebra, Error> {
    build_unified_unchecked(&flag_to_datum(fd)?)
}

fn table_entry_diff(a: &OperatorTable, b: &OperatorTable, i: usize) -> Poly {
    &a.scalar_entry(i).clone() - b.scalar_entry(i)
}

/// Verifies the four witness equations of datum equivalence, after first
/// requiring `h = h'` and `k = k'`. With differing functionals the witness
/// equations are skipped and only the mismatches are reported.
pub fn check_equiv(
    fd1: &FlagDatum,
    fd2: &FlagDatum,
    w: &EquivWitness,
) -> Result<CheckReport, Error> {
    if fd1.r_table != fd2.r_table {
        return Err(Error::ModuleMismatch);
    }
    if w.omega.module() != fd1.r_table.left() {
        return Err(Error::ModuleMismatch);
    }
    if w.beta.is_zero() {
        return Err(Error::InvalidWitness("beta must be nonzero".into()));
    }
    let rm = fd1.r_table.left().clone();
    let n = rm.rank();
    let mut failures = Vec::new();
    for i in 0..n {
        for (law, diff) in [
            ("h-equality", table_entry_diff(&fd1.h, &fd2.h, i)),
            ("k-equality", table_entry_diff(&fd1.k, &fd2.k, i)),
        ] {
            if !diff.is_zero() {
                failures.push(Failure {
                    law: law.to_string(),
                    indices: vec![i],
                    index_names: vec![rm.basis_name(i).to_string()],
                    residual: Residual::Scalar(diff),
                });
            }
        }
    }
    if !failures.is_empty() {
        return Ok(CheckReport { failures });
    }

    let o1 = FOps::new(fd1);
    let o2 = FOps::new(fd2);
    let beta = Poly::constant(w.beta.clone());
    let beta2 = Poly::constant(&w.beta * &w.beta);
    let omega = &w.omega;

    let mut push = |law: &str, ix: Vec<usize>, names: Vec<String>, res: Element| {
        if !res.is_zero() {
            failures.push(Failure {
                law: law.to_string(),
                indices: ix,
                index_names: names,
                residual: Residual::Element(res),
            });
        }
    };

    for i in 0..n {
        let a = o1.basis(i);
        let names = vec![rm.basis_name(i).to_string()];
        // eq4.1: D(a) - β D'(a) - ω_λ a + k_{-λ-d}(a,d)·ω
        let r1 = &(&(&o1.d_at(&a, &Var::Lam) - &o2.d_at(&a, &Var::Lam).scaled(&beta))
            - &o1.prod(omega, &a, &Var::Lam))
            + &omega.scaled(&o1.sub2(o1.k_entry(i), &o1.sh.m_lam_d, &Poly::var(Var::D)));
        push("eq4.1", vec![i], names.clone(), r1);
        // eq4.2: T_{-λ-d}(a) - β T'_{-λ-d}(a) - a_λ ω + h_λ(a,d)·ω
        let r2 = &(&(&o1.t_shifted(&a, &o1.sh.m_lam_d)
            - &o2.t_shifted(&a, &o2.sh.m_lam_d).scaled(&beta))
            - &o1.prod(&a, omega, &Var::Lam))
            + &omega.scaled(o1.h_entry(i));
        push("eq4.2", vec![i], names, r2);
    }
    // eq4.3: M - ω_λ ω - β² M' - β T'_{-λ-d}(ω) - β D'_λ(ω) + P·ω
    let r3 = &(&(&(&(&fd1.m - &o1.prod(omega, omega, &Var::Lam)) - &fd2.m.scaled(&beta2))
        - &o2.t_shifted(omega, &o2.sh.m_lam_d).scaled(&beta))
        - &o2.d_at(omega, &Var::Lam).scaled(&beta))
        + &omega.scaled(&fd1.p);
    push("eq4.3", Vec::new(), Vec::new(), r3);
    // eq4.4: P - k'_{-λ-d}(ω,d) - h'_λ(ω,d) - β P'
    let k_om = o2.shp(&o2.k_scalar(omega, &Var::Nu), &o2.sh.m_lam_d);
    let h_om = o2.h_scalar(omega, &Var::Lam);
    let r4 = &(&(&fd1.p - &k_om) - &h_om) - &(&beta * &fd2.p);
    if !r4.is_zero() {
        failures.push(Failure {
            law: "eq4.4".to_string(),
            indices: Vec::new(),
            index_names: Vec::new(),
            residual: Residual::Scalar(r4),
        });
    }
    Ok(CheckReport { failures })
}

/// Searches for an equivalence witness: for each candidate `β` the three
/// witness equations linear in `ω` are solved exactly, and the resulting
/// candidate (free coordinates set to zero) is verified against all four
/// equations. Returns the first witness found, or `None` when every
/// candidate fails within the bound.
pub fn search_equiv(
    fd1: &FlagDatum,
    fd2: &FlagDatum,
    bound: DegreeBound,
    betas: &[BigRational],
) -> Result<Option<EquivWitness>, Error> {
    if fd1.r_table != fd2.r_table {
        return Err(Error::ModuleMismatch);
    }
    if betas.is_empty() {
        return Err(Error::EmptyBetaList);
    }
    if betas.iter().any(BigRational::is_zero) {
        return Err(Error::InvalidWitness("beta must be nonzero".into()));
    }
    require_numeric(&fd1.params())?;
    require_numeric(&fd2.params())?;
    let rm = fd1.r_table.left().clone();
    let n = rm.rank();
    for i in 0..n {
        if !table_entry_diff(&fd1.h, &fd2.h, i).is_zero()
            || !table_entry_diff(&fd1.k, &fd2.k, i).is_zero()
        {
            return Ok(None);
        }
    }

    // Generic witness with bounded d-degree coefficients.
    let mut t = 0;
    let mut coeffs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut p = Poly::zero();
        for q in 0..=bound.0 {
            p += &(&Poly::param(&unknown_name(t)) * &Poly::var(Var::D).pow(q));
            t += 1;
        }
        coeffs.push(p);
    }
    let omega_template = Element::from_coeffs(&rm, coeffs)?;
    let o1 = FOps::new(fd1);
    let o2 = FOps::new(fd2);

    for beta_val in betas {
        let beta = Poly::constant(beta_val.clone());
        let mut residuals: Vec<Poly> = Vec::new();
        for i in 0..n {
            let a = o1.basis(i);
            // eq4.1 and eq4.2, linear in ω.
            let r1 = &(&(&o1.d_at(&a, &Var::Lam) - &o2.d_at(&a, &Var::Lam).scaled(&beta))
                - &o1.prod(&omega_template, &a, &Var::Lam))
                + &omega_template
                    .scaled(&o1.sub2(o1.k_entry(i), &o1.sh.m_lam_d, &Poly::var(Var::D)));
            residuals.extend(r1.coeffs().iter().cloned());
            let r2 = &(&(&o1.t_shifted(&a, &o1.sh.m_lam_d)
                - &o2.t_shifted(&a, &o2.sh.m_lam_d).scaled(&beta))
                - &o1.prod(&a, &omega_template, &Var::Lam))
                + &omega_template.scaled(o1.h_entry(i));
            residuals.extend(r2.coeffs().iter().cloned());
        }
        // eq4.4, linear in ω.
        let k_om = o2.shp(&o2.k_scalar(&omega_template, &Var::Nu), &o2.sh.m_lam_d);
        let h_om = o2.h_scalar(&omega_template, &Var::Lam);
        let r4 = &(&(&fd1.p - &k_om) - &h_om) - &(&beta * &fd2.p);
        residuals.push(r4);

        let (rows, rhs) = linear_system_from_residuals(&residuals, t)?;
        let Some(solution) = linalg::solve_affine(&rows, &rhs, t) else {
            continue;
        };
        let bindings: BTreeMap<String, BigRational> = solution
            .particular
            .iter()
            .enumerate()
            .map(|(idx, v)| (unknown_name(idx), v.clone()))
            .collect();
        let omega = omega_template.bind_params(&bindings)?;
        let witness = EquivWitness::new(omega, beta_val.clone())?;
        if check_equiv(fd1, fd2, &witness)?.passed() {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

/// The two distinguished flag-datum families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DflcTag {
    /// `h`, `k`, `T` trivial; `D` is then a conformal derivation.
    Dflc1,
    /// `h`, `T` trivial, `P = 0`, `k` nonzero; `D` is then a twisted
    /// conformal derivation with twist functional `k`.
    Dflc2,
    Neither,
}

/// Membership result: the definitional tag, plus the verification of the
/// derivation property the tag asserts.
#[derive(Clone, Debug)]
pub struct DflcMembership {
    pub tag: DflcTag,
    pub verification: CheckReport,
}

pub fn check_dflc_membership(fd: &FlagDatum) -> Result<DflcMembership, Error> {
    let h_zero = fd.h.is_zero();
    let k_zero = fd.k.is_zero();
    let t_zero = fd.t_op.is_zero();
    let p_zero = fd.p.is_zero();
    if h_zero && k_zero && t_zero {
        let verification = check_derivation(&fd.r_table, &fd.d_op)?;
        return Ok(DflcMembership {
            tag: DflcTag::Dflc1,
            verification,
        });
    }
    if h_zero && t_zero && p_zero && !k_zero {
        let verification = check_twisted_derivation(&fd.r_table, &fd.d_op, &fd.k)?;
        return Ok(DflcMembership {
            tag: DflcTag::Dflc2,
            verification,
        });
    }
    Ok(DflcMembership {
        tag: DflcTag::Neither,
        verification: CheckReport::default(),
    })
}

fn require_shapes(fd: &FlagDatum, h: bool, k: bool, t: bool, p: bool) -> Result<(), Error> {
    let ok = (!h || fd.h.is_zero())
        && (!k || fd.k.is_zero())
        && (!t || fd.t_op.is_zero())
        && (!p || fd.p.is_zero());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidWitness(
            "flag datum does not have the required trivial components".into(),
        ))
    }
}

/// The specialized witness equations for datums with `h = k = T = 0`:
/// `D = βD' + ω_λ(·)`, `(·)_λ ω = 0`, `M = ω_λω + β²M' + βD'(ω) - Pω`,
/// `P = βP'`.
pub fn check_equiv_dflc1(
    fd1: &FlagDatum,
    fd2: &FlagDatum,
    w: &EquivWitness,
) -> Result<CheckReport, Error> {
    require_shapes(fd1, true, true, true, false)?;
    require_shapes(fd2, true, true, true, false)?;
    if fd1.r_table != fd2.r_table {
        return Err(Error::ModuleMismatch);
    }
    let o1 = FOps::new(fd1);
    let o2 = FOps::new(fd2);
    let rm = fd1.r_table.left().clone();
    let beta = Poly::constant(w.beta.clone());
    let beta2 = Poly::constant(&w.beta * &w.beta);
    let omega = &w.omega;
    let mut failures = Vec::new();
    let mut push = |law: &str, ix: Vec<usize>, names: Vec<String>, res: Residual| {
        if !res.is_zero() {
            failures.push(Failure {
                law: law.to_string(),
                indices: ix,
                index_names: names,
                residual: res,
            });
        }
    };
    for i in 0..rm.rank() {
        let a = o1.basis(i);
        let names = vec![rm.basis_name(i).to_string()];
        let r1 = &(&o1.d_at(&a, &Var::Lam) - &o2.d_at(&a, &Var::Lam).scaled(&beta))
            - &o1.prod(omega, &a, &Var::Lam);
        push("eq4.19", vec![i], names.clone(), Residual::Element(r1));
        let r2 = o1.prod(&a, omega, &Var::Lam);
        push("eq4.20", vec![i], names, Residual::Element(r2));
    }
    let r3 = &(&(&(&fd1.m - &o1.prod(omega, omega, &Var::Lam)) - &fd2.m.scaled(&beta2))
        - &o2.d_at(omega, &Var::Lam).scaled(&beta))
        + &omega.scaled(&fd1.p);
    push("eq4.21", Vec::new(), Vec::new(), Residual::Element(r3));
    let r4 = &fd1.p - &(&beta * &fd2.p);
    push("eq4.22", Vec::new(), Vec::new(), Residual::Scalar(r4));
    Ok(CheckReport { failures })
}

/// The specialized witness equations for datums with `h = T = 0`, `P = 0`:
/// `D = βD' + ω_λ(·) - k_{-λ-d}(·,d)ω`, `(·)_λ ω = 0`,
/// `M = ω_λω + β²M' + βD'(ω)`, `k'_{-λ-d}(ω,d) = 0`; requires `k = k'`.
pub fn check_equiv_dflc2(
    fd1: &FlagDatum,
    fd2: &FlagDatum,
    w: &EquivWitness,
) -> Result<CheckReport, Error> {
    require_shapes(fd1, true, false, true, true)?;
    require_shapes(fd2, true, false, true, true)?;
    if fd1.r_table != fd2.r_table {
        return Err(Error::ModuleMismatch);
    }
    let o1 = FOps::new(fd1);
    let o2 = FOps::new(fd2);
    let rm = fd1.r_table.left().clone();
    let beta = Poly::constant(w.beta.clone());
    let beta2 = Poly::constant(&w.beta * &w.beta);
    let omega = &w.omega;
    let mut failures = Vec::new();
    for i in 0..rm.rank() {
        let diff = table_entry_diff(&fd1.k, &fd2.k, i);
        if !diff.is_zero() {
            failures.push(Failure {
                law: "k-equality".to_string(),
                indices: vec![i],
                index_names: vec![rm.basis_name(i).to_string()],
                residual: Residual::Scalar(diff),
            });
        }
    }
    if !failures.is_empty() {
        return Ok(CheckReport { failures });
    }
    let mut push = |law: &str, ix: Vec<usize>, names: Vec<String>, res: Residual| {
        if !res.is_zero() {
            failures.push(Failure {
                law: law.to_string(),
                indices: ix,
                index_names: names,
                residual: res,
            });
        }
    };
    for i in 0..rm.rank() {
        let a = o1.basis(i);
        let names = vec![rm.basis_name(i).to_string()];
        let r1 = &(&(&o1.d_at(&a, &Var::Lam) - &o2.d_at(&a, &Var::Lam).scaled(&beta))
            - &o1.prod(omega, &a, &Var::Lam))
            + &omega.scaled(&o1.sub2(o1.k_entry(i), &o1.sh.m_lam_d, &Poly::var(Var::D)));
        push("eq4.23", vec![i], names.clone(), Residual::Element(r1));
        let r2 = o1.prod(&a, omega, &Var::Lam);
        push("eq4.24", vec![i], names, Residual::Element(r2));
    }
    let r3 = &(&(&fd1.m - &o1.prod(omega, omega, &Var::Lam)) - &fd2.m.scaled(&beta2))
        - &o2.d_at(omega, &Var::Lam).scaled(&beta);
    push("eq4.25", Vec::new(), Vec::new(), Residual::Element(r3));
    let r4 = o2.shp(&o2.k_scalar(omega, &Var::Nu), &o2.sh.m_lam_d);
    push("eq4.26", Vec::new(), Vec::new(), Residual::Scalar(r4));
    Ok(CheckReport { failures })
}
