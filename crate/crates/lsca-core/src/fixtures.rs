//! Ready-made algebras and datum constructors used across tests and the
//! bundled fixture files.

use std::collections::BTreeSet;

use num_rational::BigRational;

use crate::conformal::{Element, FreeModule, LambdaTable, OperatorTable};
use crate::flagdatum::FlagDatum;
use crate::poly::{Poly, Var};

fn params(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn rank1(name: &str, param_names: &[&str], product: &str) -> LambdaTable {
    let m = FreeModule::new(vec![name.to_string()], params(param_names)).unwrap();
    let coeff = Poly::parse(product, m.params()).unwrap();
    let entry = Element::from_coeffs(&m, vec![coeff]).unwrap();
    LambdaTable::square(&m, vec![entry]).unwrap()
}

/// Rank-1 algebra with the trivial product `x_λ x = 0`.
pub fn rank1_r0() -> LambdaTable {
    rank1("x", &[], "0")
}

/// Rank-1 algebra with `x_λ x = x`.
pub fn rank1_r1() -> LambdaTable {
    rank1("x", &[], "1")
}

/// Rank-1 algebra with `x_λ x = (d + lam + c)x`, `c` symbolic.
pub fn rank1_rc() -> LambdaTable {
    rank1("x", &["c"], "d + lam + c")
}

/// Rank-1 algebra with `x_λ x = (d + lam + c)x` over basis name `L`.
pub fn rank1_rc_named(name: &str) -> LambdaTable {
    rank1(name, &["c"], "d + lam + c")
}

/// Rank-1 table `x_λ x = lam·x`; fails left-symmetry.
pub fn rank1_bad_lam() -> LambdaTable {
    rank1("x", &[], "lam")
}

/// Rank-1 table `x_λ x = d·x`; fails left-symmetry.
pub fn rank1_bad_d() -> LambdaTable {
    rank1("x", &[], "d")
}

/// The rank-2 algebra on `L, W` with `L_λ L = 0`, `L_λ W = W_λ L = L`,
/// `W_λ W = W`.
pub fn rank2_lw() -> LambdaTable {
    let m = FreeModule::new(vec!["L".into(), "W".into()], params(&[])).unwrap();
    let l = Element::basis_vector(&m, 0);
    let w = Element::basis_vector(&m, 1);
    let zero = Element::zero(&m);
    LambdaTable::square(&m, vec![zero, l.clone(), l, w]).unwrap()
}

/// A flag datum over a rank-1 algebra from scalar tables
/// `(h, k, D, T, P)` with `M = 0`; the shape of the rank-1 bicrossed
/// classification lists.
pub fn rank1_flag(
    r_table: &LambdaTable,
    h: &str,
    k: &str,
    d_coeff: &str,
    t_coeff: &str,
    p: &str,
) -> FlagDatum {
    let m = r_table.left().clone();
    assert_eq!(m.rank(), 1, "rank1_flag needs a rank-1 base algebra");
    let ps = m.params();
    let parse = |s: &str| Poly::parse(s, ps).unwrap();
    let h_op = OperatorTable::left_functional(&m, vec![parse(h)]).unwrap();
    let k_op = OperatorTable::left_functional(&m, vec![parse(k)]).unwrap();
    let d_op = OperatorTable::conformal(
        &m,
        &m,
        vec![Element::from_coeffs(&m, vec![parse(d_coeff)]).unwrap()],
    )
    .unwrap();
    let t_op = OperatorTable::conformal(
        &m,
        &m,
        vec![Element::from_coeffs(&m, vec![parse(t_coeff)]).unwrap()],
    )
    .unwrap();
    let zero_m = Element::zero(&m);
    FlagDatum::new(r_table.clone(), h_op, k_op, d_op, t_op, zero_m, parse(p), "w").unwrap()
}

/// The crossed-product flag datum over the `L, W` algebra determined by the
/// scalar data `(k0(lam), p1(lam), p0(lam), h)`:
///
/// ```text
/// D_λ L = k0(λ)·L            D_λ W = (p1(λ)d + p0(λ))·L + h·W
/// T_λ L = h·L                T_λ W = (-p1(λ)λ + p0(λ))·L + h·W
/// M     = q1·L + h²·W  with  q1(λ,d) = d1(-λ-d, λ+d)·k0(λ) + h·d1(λ,d)
/// P     = 0,  h and k functionals trivial,
/// ```
/// where `d1(λ,d) = p1(λ)d + p0(λ)`.
pub fn lw_crossed_flag(k0: &Poly, p1: &Poly, p0: &Poly, h: &BigRational) -> FlagDatum {
    let table = rank2_lw();
    let m = table.left().clone();
    let lam = Poly::var(Var::Lam);
    let dd = Poly::var(Var::D);
    let h_poly = Poly::constant(h.clone());

    let d1 = &(p1 * &dd) + p0;
    let d_rows = vec![
        Element::from_coeffs(&m, vec![k0.clone(), Poly::zero()]).unwrap(),
        Element::from_coeffs(&m, vec![d1.clone(), h_poly.clone()]).unwrap(),
    ];
    let t_w_coeff = &(-&(p1 * &lam)) + p0;
    let t_rows = vec![
        Element::from_coeffs(&m, vec![h_poly.clone(), Poly::zero()]).unwrap(),
        Element::from_coeffs(&m, vec![t_w_coeff, h_poly.clone()]).unwrap(),
    ];
    let d_op = OperatorTable::conformal(&m, &m, d_rows).unwrap();
    let t_op = OperatorTable::conformal(&m, &m, t_rows).unwrap();

    // q1(lam, d) = d1(-lam-d, lam+d)·k0(lam) + h·d1(lam, d)
    let minus_lam_d = &(-&lam) - &dd;
    let lam_plus_d = &lam + &dd;
    let d1_shifted = d1.subst_multi(&[(Var::Lam, minus_lam_d), (Var::D, lam_plus_d)]);
    let q1 = &(&d1_shifted * k0) + &(&h_poly * &d1);
    let q2 = &h_poly * &h_poly;
    let m_elem = Element::from_coeffs(&m, vec![q1, q2]).unwrap();

    FlagDatum::new(
        table.clone(),
        OperatorTable::zero_functional(&m),
        OperatorTable::zero_functional(&m),
        d_op,
        t_op,
        m_elem,
        Poly::zero(),
        "x",
    )
    .unwrap()
}
