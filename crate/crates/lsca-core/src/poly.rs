//! Exact multivariate polynomial arithmetic over the rationals.
//!
//! Polynomials live in the commuting variables `d` (the module generator,
//! written ∂ on paper), the spectral variables `lam`, `mu`, `nu`, and any
//! number of user-declared scalar parameters. Coefficients are
//! arbitrary-precision rationals, terms are kept in a canonical sparse map,
//! so equality of canonical forms decides equality of polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// Names that can never be declared as parameters.
pub const RESERVED_NAMES: [&str; 4] = ["d", "lam", "mu", "nu"];

/// A variable of the ambient polynomial ring.
///
/// The derived ordering realizes the fixed variable order
/// `d < lam < mu < nu < parameters (alphabetical)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// The module variable ∂.
    D,
    /// The outer spectral variable λ.
    Lam,
    /// The inner spectral variable μ.
    Mu,
    /// The auxiliary spectral variable ν, reserved for intermediate shifts.
    Nu,
    /// A user-declared scalar parameter.
    Param(String),
}

impl Var {
    pub fn is_spectral(&self) -> bool {
        matches!(self, Var::Lam | Var::Mu | Var::Nu)
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Var::Param(_))
    }

    pub fn name(&self) -> &str {
        match self {
            Var::D => "d",
            Var::Lam => "lam",
            Var::Mu => "mu",
            Var::Nu => "nu",
            Var::Param(s) => s,
        }
    }

    /// Maps an identifier to its reserved variable, if it is one.
    pub fn reserved(name: &str) -> Option<Var> {
        match name {
            "d" => Some(Var::D),
            "lam" => Some(Var::Lam),
            "mu" => Some(Var::Mu),
            "nu" => Some(Var::Nu),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A monomial: variables with positive exponents, sorted by variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// Splits off the exponent of `v`, returning the remaining monomial.
    fn without(&self, v: &Var) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.0.len());
        let mut exp = 0;
        for (w, e) in &self.0 {
            if w == v {
                exp = *e;
            } else {
                rest.push((w.clone(), *e));
            }
        }
        (exp, Monomial(rest))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order: total degree first, then the exponents
    /// compared along the fixed variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = &self.0[i];
            let (vb, eb) = &other.0[j];
            match va.cmp(vb) {
                // `self` has a positive exponent on an earlier variable.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match ea.cmp(eb) {
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                    }
                    ord => return ord,
                },
            }
        }
        match (i < self.0.len(), j < other.0.len()) {
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            _ => Ordering::Equal,
        }
    }
}

/// An exact multivariate polynomial with rational coefficients.
///
/// Invariant: no zero coefficient is ever stored, so `==` on the term maps
/// decides mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        Poly { terms }
    }

    pub fn param(name: &str) -> Self {
        Poly::var(Var::Param(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.terms.is_empty() {
            return Some(BigRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_one() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn insert_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, q)| (m.clone(), q * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// All variables occurring with positive exponent.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (v, _) in m.factors() {
                out.insert(v.clone());
            }
        }
        out
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors().iter().any(|(w, _)| w == v))
    }

    /// Names of all parameters occurring in the polynomial.
    pub fn params(&self) -> BTreeSet<String> {
        self.vars()
            .into_iter()
            .filter_map(|v| match v {
                Var::Param(s) => Some(s),
                _ => None,
            })
            .collect()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Total degree counting only the listed variables.
    pub fn total_degree_in(&self, vs: &[Var]) -> u32 {
        self.terms
            .keys()
            .map(|m| vs.iter().map(|v| m.exponent(v)).sum())
            .max()
            .unwrap_or(0)
    }

    /// Unchecked substitution of a single variable by a polynomial.
    pub(crate) fn subst_raw(&self, v: &Var, q: &Poly) -> Poly {
        // Group terms by the exponent of v and use Horner evaluation in q.
        let mut by_exp: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.without(v);
            let mut p = Poly::zero();
            p.insert_term(rest, c.clone());
            *by_exp.entry(e).or_insert_with(Poly::zero) += &p;
        }
        let mut acc = Poly::zero();
        let mut prev_exp = None;
        for (e, p) in by_exp.into_iter().rev() {
            if let Some(pe) = prev_exp {
                acc = &acc * &q.pow(pe - e);
            }
            acc += &p;
            prev_exp = Some(e);
        }
        if let Some(e) = prev_exp {
            if e > 0 {
                acc = &acc * &q.pow(e);
            }
        }
        acc
    }

    /// Simultaneous substitution of several variables.
    pub fn subst_multi(&self, map: &[(Var, Poly)]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for (v, e) in m.factors() {
                let factor = match map.iter().find(|(w, _)| w == v) {
                    Some((_, q)) => q.pow(*e),
                    None => Poly::var(v.clone()).pow(*e),
                };
                term = &term * &factor;
            }
            out += &term;
        }
        out
    }

    /// Substitution of a lambda-variable or `d`. Substituting a parameter is
    /// rejected; parameters are fixed per session via [`Poly::bind_params`].
    pub fn substitute(&self, v: &Var, q: &Poly) -> Result<Poly, Error> {
        if v.is_param() {
            return Err(Error::SubstituteParameter(v.name().to_string()));
        }
        Ok(self.subst_raw(v, q))
    }

    /// Replaces declared parameters by rational values. Unbound parameters
    /// stay symbolic.
    pub fn bind_params(&self, bindings: &BTreeMap<String, BigRational>) -> Result<Poly, Error> {
        for name in bindings.keys() {
            if Var::reserved(name).is_some() {
                return Err(Error::BindReserved(name.clone()));
            }
        }
        let map: Vec<(Var, Poly)> = bindings
            .iter()
            .map(|(name, val)| (Var::Param(name.clone()), Poly::constant(val.clone())))
            .collect();
        Ok(self.subst_multi(&map))
    }

    /// Full rational evaluation; every variable of the polynomial must be
    /// assigned. Used as the independent evaluation oracle in tests.
    pub fn eval(&self, env: &BTreeMap<Var, BigRational>) -> Result<BigRational, Error> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let val = env
                    .get(v)
                    .ok_or_else(|| Error::UnassignedVariable(v.name().to_string()))?;
                for _ in 0..*e {
                    t *= val;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Parses an expression over `d`, `lam`, `mu`, `nu` and the declared
    /// parameters. See the grammar in the crate documentation.
    pub fn parse(src: &str, declared_params: &BTreeSet<String>) -> Result<Poly, Error> {
        parse::Parser::new(src, declared_params).parse()
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.insert_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_monomial(m: &Monomial) -> String {
    m.factors()
        .iter()
        .map(|(v, e)| {
            if *e == 1 {
                v.name().to_string()
            } else {
                format!("{}^{}", v.name(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for Poly {
    /// Canonical form: terms in descending graded-lex order; re-parsing the
    /// output reproduces the polynomial exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

mod parse {
    use super::*;

    /// Recursive-descent parser for the expression grammar:
    ///
    /// ```text
    /// expr     := ('+'|'-')? term (('+'|'-') term)*
    /// term     := factor ('*' factor)*
    /// factor   := base ('^' nonneg_int)?
    /// base     := rational | ident | '(' expr ')'
    /// rational := int ('/' posint)?
    /// ident    := [A-Za-z_][A-Za-z0-9_]*
    /// ```
    pub struct Parser<'a> {
        src: &'a [u8],
        pos: usize,
        params: &'a BTreeSet<String>,
    }

    impl<'a> Parser<'a> {
        pub fn new(src: &'a str, params: &'a BTreeSet<String>) -> Self {
            Parser {
                src: src.as_bytes(),
                pos: 0,
                params,
            }
        }

        pub fn parse(mut self) -> Result<Poly, Error> {
            let p = self.expr()?;
            self.skip_ws();
            if self.pos != self.src.len() {
                return Err(self.syntax("unexpected trailing input"));
            }
            Ok(p)
        }

        fn syntax(&self, msg: &str) -> Error {
            Error::Syntax {
                position: self.pos,
                message: msg.to_string(),
            }
        }

        fn skip_ws(&mut self) {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
        }

        fn peek(&mut self) -> Option<u8> {
            self.skip_ws();
            self.src.get(self.pos).copied()
        }

        fn eat(&mut self, c: u8) -> bool {
            if self.peek() == Some(c) {
                self.pos += 1;
                true
            } else {
                false
            }
        }

        fn expr(&mut self) -> Result<Poly, Error> {
            let mut acc = if self.eat(b'-') {
                -&self.term()?
            } else {
                self.eat(b'+');
                self.term()?
            };
            loop {
                if self.eat(b'+') {
                    acc += &self.term()?;
                } else if self.eat(b'-') {
                    acc -= &self.term()?;
                } else {
                    break;
                }
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Poly, Error> {
            let mut acc = self.factor()?;
            while self.eat(b'*') {
                acc = &acc * &self.factor()?;
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<Poly, Error> {
            let base = self.base()?;
            if self.eat(b'^') {
                if self.peek() == Some(b'-') {
                    return Err(self.syntax("negative exponent"));
                }
                let e = self.integer()?;
                let e: u32 = e
                    .try_into()
                    .map_err(|_| self.syntax("exponent out of range"))?;
                return Ok(base.pow(e));
            }
            Ok(base)
        }

        fn base(&mut self) -> Result<Poly, Error> {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let p = self.expr()?;
                    if !self.eat(b')') {
                        return Err(self.syntax("expected ')'"));
                    }
                    Ok(p)
                }
                Some(c) if c.is_ascii_digit() => {
                    let numer = self.integer()?;
                    if self.eat(b'/') {
                        let denom = self.integer()?;
                        if denom <= 0 {
                            return Err(self.syntax("denominator must be positive"));
                        }
                        Ok(Poly::constant(BigRational::new(
                            BigInt::from(numer),
                            BigInt::from(denom),
                        )))
                    } else {
                        Ok(Poly::constant(BigRational::from_integer(BigInt::from(
                            numer,
                        ))))
                    }
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident();
                    if let Some(v) = Var::reserved(&name) {
                        Ok(Poly::var(v))
                    } else if self.params.contains(&name) {
                        Ok(Poly::param(&name))
                    } else {
                        Err(Error::UndeclaredIdentifier(name))
                    }
                }
                _ => Err(self.syntax("expected a number, identifier or '('")),
            }
        }

        fn integer(&mut self) -> Result<i128, Error> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.syntax("expected an integer"));
            }
            std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.syntax("integer out of range"))
        }

        fn ident(&mut self) -> String {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(src: &str) -> Poly {
        Poly::parse(src, &params(&["c", "xi", "alpha", "beta"])).unwrap()
    }

    #[test]
    fn parse_literal_sum() {
        let q = p("d + lam + c");
        let expected = &(&Poly::var(Var::D) + &Poly::var(Var::Lam)) + &Poly::param("c");
        assert_eq!(q, expected);
    }

    #[test]
    fn parse_expand_square_difference() {
        // (d+lam)^2 - d^2 - 2*d*lam should collapse to lam^2; cross-check by
        // evaluating both routes at random rational points.
        let q = p("(d+lam)^2 - d^2 - 2*d*lam");
        assert_eq!(q, p("lam^2"));
        let pts = [(3, 7), (-2, 5), (1, 3), (11, 2), (-4, -9)];
        for (a, b) in pts {
            let env: BTreeMap<Var, BigRational> =
                [(Var::D, rat(a, 1)), (Var::Lam, rat(b, 1))].into();
            let direct = (rat(a, 1) + rat(b, 1)).pow(2) - rat(a, 1).pow(2) - rat(2 * a * b, 1);
            assert_eq!(q.eval(&env).unwrap(), direct);
        }
    }

    #[test]
    fn parse_cancellation_is_zero() {
        assert!(p("1/2*mu - 1/2*mu").is_zero());
    }

    #[test]
    fn undeclared_identifier_rejected() {
        let err = Poly::parse("lambda + d", &params(&[])).unwrap_err();
        assert!(matches!(err, Error::UndeclaredIdentifier(ref s) if s == "lambda"));
    }

    #[test]
    fn negative_exponent_rejected() {
        let err = Poly::parse("d^-1", &params(&[])).unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }));
    }

    #[test]
    fn syntax_error_reports_position() {
        match Poly::parse("d + + )", &params(&[])) {
            Err(Error::Syntax { position, .. }) => assert!(position >= 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn subst_expands_shift() {
        // mu^2 + c*mu with mu -> -lam-d, checked against random evaluations.
        let q = p("mu^2 + c*mu");
        let shift = p("-lam - d");
        let s = q.substitute(&Var::Mu, &shift).unwrap();
        assert_eq!(s, p("lam^2 + 2*lam*d + d^2 - c*lam - c*d"));
        for (a, b, cc) in [(2, 3, 5), (-1, 4, 7), (0, 1, -2)] {
            let env: BTreeMap<Var, BigRational> = [
                (Var::Lam, rat(a, 1)),
                (Var::D, rat(b, 1)),
                (Var::Param("c".into()), rat(cc, 1)),
            ]
            .into();
            let mu_val = -rat(a, 1) - rat(b, 1);
            let env_q: BTreeMap<Var, BigRational> = [
                (Var::Mu, mu_val),
                (Var::Param("c".into()), rat(cc, 1)),
            ]
            .into();
            assert_eq!(s.eval(&env).unwrap(), q.eval(&env_q).unwrap());
        }
    }

    #[test]
    fn subst_identity_and_zero() {
        let q = p("lam + d + c");
        assert_eq!(q.substitute(&Var::Lam, &Poly::var(Var::Lam)).unwrap(), q);
        assert_eq!(q.substitute(&Var::D, &Poly::zero()).unwrap(), p("lam + c"));
    }

    #[test]
    fn subst_parameter_rejected() {
        let err = p("c + d")
            .substitute(&Var::Param("c".into()), &Poly::one())
            .unwrap_err();
        assert!(matches!(err, Error::SubstituteParameter(_)));
    }

    #[test]
    fn bind_params_examples() {
        let bind: BTreeMap<String, BigRational> = [("c".to_string(), int(1))].into();
        assert_eq!(p("lam + d + c").bind_params(&bind).unwrap(), p("lam + d + 1"));

        let bind2: BTreeMap<String, BigRational> =
            [("xi".to_string(), int(2)), ("c".to_string(), int(2))].into();
        assert!(p("xi - c").bind_params(&bind2).unwrap().is_zero());

        let bind3: BTreeMap<String, BigRational> = [("beta".to_string(), int(1))].into();
        assert_eq!(p("beta*alpha").bind_params(&bind3).unwrap(), p("alpha"));
    }

    #[test]
    fn bind_reserved_rejected() {
        let bind: BTreeMap<String, BigRational> = [("lam".to_string(), int(1))].into();
        assert!(matches!(
            p("d").bind_params(&bind),
            Err(Error::BindReserved(_))
        ));
    }

    #[test]
    fn display_roundtrip_canonical() {
        for src in [
            "d^2 + 2*d*lam + lam^2 - c",
            "-1/2*mu + 3*nu^4",
            "0",
            "c",
            "-d",
            "1/2",
            "d*lam*mu*nu*alpha",
        ] {
            let q = p(src);
            let printed = q.to_string();
            let re = Poly::parse(&printed, &params(&["c", "alpha"])).unwrap();
            assert_eq!(q, re, "roundtrip failed for {printed}");
        }
    }
}
