//! JSON file schema for algebras and datums, plus deterministic report
//! rendering.
//!
//! An algebra file declares parameters (with optional rational bindings), an
//! ordered basis, and a sparse table keyed by 1-based `"(i,j)"` pairs whose
//! values are lists of `"coeff_poly * basis_name"` strings; omitted keys are
//! zero. A datum file embeds the algebra file of `R`, a module (or algebra)
//! file for `Q`, the six table sections `phi/psi/l/r/g/circ`, or instead a
//! `flag` section for rank-1 `Q`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::axioms::CheckReport;
use crate::conformal::{Element, FreeModule, LambdaTable, OperatorTable};
use crate::flagdatum::{flag_to_datum, FlagDatum};
use crate::poly::{Poly, Var};
use crate::products::ExtendingDatum;
use crate::Error;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParamDecl {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamDecl>,
    pub basis: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub table: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FlagSection {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub h: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub k: BTreeMap<String, String>,
    #[serde(rename = "D", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub d: BTreeMap<String, Vec<String>>,
    #[serde(rename = "T", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub t: BTreeMap<String, Vec<String>>,
    #[serde(rename = "M", default, skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<String>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_name: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DatumFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "R")]
    pub r: AlgebraFile,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<AlgebraFile>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub phi: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub psi: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub l: BTreeMap<String, Vec<String>>,
    #[serde(rename = "r", default, skip_serializing_if = "BTreeMap::is_empty")]
    pub r_action: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub g: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub circ: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagSection>,
}

/// A loaded file: either an algebra or a datum.
pub enum Loaded {
    Algebra(LoadedAlgebra),
    Datum(LoadedDatum),
}

#[derive(Debug)]
pub struct LoadedAlgebra {
    pub name: Option<String>,
    pub table: LambdaTable,
    /// Parameter values given inside the file; not yet applied.
    pub bindings: BTreeMap<String, BigRational>,
}

#[derive(Debug)]
pub struct LoadedDatum {
    pub name: Option<String>,
    pub datum: ExtendingDatum,
    /// Present when the file used the flag section.
    pub flag: Option<FlagDatum>,
    pub bindings: BTreeMap<String, BigRational>,
}

fn schema_err(path: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let p = Poly::parse(s, &BTreeSet::new())?;
    p.as_constant()
        .ok_or_else(|| schema_err("", format!("`{s}` is not a rational constant")))
}

/// Parses a 1-based index tuple like `"(1,2)"`.
fn parse_key(key: &str, arity: usize, ranks: &[usize], path: &str) -> Result<Vec<usize>, Error> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| schema_err(path, format!("key `{key}` must look like (i,j)")))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != arity {
        return Err(schema_err(
            path,
            format!("key `{key}` must have {arity} indices"),
        ));
    }
    let mut out = Vec::with_capacity(arity);
    for (slot, p) in parts.iter().enumerate() {
        let i: usize = p
            .parse()
            .map_err(|_| schema_err(path, format!("bad index `{p}` in `{key}`")))?;
        if i == 0 || i > ranks[slot] {
            return Err(schema_err(
                path,
                format!("index {i} out of range 1..={} in `{key}`", ranks[slot]),
            ));
        }
        out.push(i - 1);
    }
    Ok(out)
}

/// Splits an entry `"coeff_poly * basis_name"` at the last top-level `*`;
/// a bare basis name means coefficient 1.
fn parse_entry(
    entry: &str,
    target: &Arc<FreeModule>,
    params: &BTreeSet<String>,
    path: &str,
) -> Result<(usize, Poly), Error> {
    let bytes = entry.as_bytes();
    let mut depth = 0usize;
    let mut split = None;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth = depth.checked_sub(1).ok_or_else(|| {
                    schema_err(path, format!("unbalanced parentheses in `{entry}`"))
                })?
            }
            b'*' if depth == 0 => split = Some(i),
            _ => {}
        }
    }
    let (coeff_src, name) = match split {
        Some(i) => (&entry[..i], entry[i + 1..].trim()),
        None => ("1", entry.trim()),
    };
    let idx = target.basis_index(name).ok_or_else(|| {
        schema_err(
            path,
            format!("entry `{entry}` must end in `* basis_name`; `{name}` is not a basis name"),
        )
    })?;
    let coeff = Poly::parse(coeff_src, params).map_err(|e| match e {
        Error::Syntax { position, message } => schema_err(
            path,
            format!("in `{entry}` at byte {position}: {message}"),
        ),
        other => other,
    })?;
    Ok((idx, coeff))
}

fn parse_entry_list(
    entries: &[String],
    target: &Arc<FreeModule>,
    params: &BTreeSet<String>,
    path: &str,
) -> Result<Element, Error> {
    let mut acc = Element::zero(target);
    for (n, entry) in entries.iter().enumerate() {
        let path = format!("{path}[{n}]");
        let (idx, coeff) = parse_entry(entry, target, params, &path)?;
        let mut coeffs = vec![Poly::zero(); target.rank()];
        coeffs[idx] = coeff;
        acc += &Element::from_coeffs(target, coeffs)?;
    }
    Ok(acc)
}

fn element_to_entries(e: &Element) -> Vec<String> {
    let mut out = Vec::new();
    for (i, c) in e.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let name = e.module().basis_name(i);
        if c == &Poly::one() {
            out.push(name.to_string());
        } else {
            out.push(format!("({c})*{name}"));
        }
    }
    out
}

fn table_map(
    map: &BTreeMap<String, Vec<String>>,
    left: &Arc<FreeModule>,
    right: &Arc<FreeModule>,
    target: &Arc<FreeModule>,
    params: &BTreeSet<String>,
    section: &str,
) -> Result<Vec<Element>, Error> {
    let mut entries = vec![Element::zero(target); left.rank() * right.rank()];
    for (key, list) in map {
        let path = format!("{section}.{key}");
        let ix = parse_key(key, 2, &[left.rank(), right.rank()], &path)?;
        entries[ix[0] * right.rank() + ix[1]] = parse_entry_list(list, target, params, &path)?;
    }
    Ok(entries)
}

impl AlgebraFile {
    pub fn param_decls(&self) -> Result<BTreeMap<String, Option<BigRational>>, Error> {
        let mut out = BTreeMap::new();
        for p in &self.params {
            let value = match &p.value {
                Some(v) => Some(parse_rational(v)?),
                None => None,
            };
            if out.insert(p.name.clone(), value).is_some() {
                return Err(schema_err("params", format!("duplicate parameter `{}`", p.name)));
            }
        }
        Ok(out)
    }

    pub fn to_table(&self) -> Result<LoadedAlgebra, Error> {
        let decls = self.param_decls()?;
        let params: BTreeSet<String> = decls.keys().cloned().collect();
        let module = FreeModule::new(self.basis.clone(), params.clone())?;
        let entries = table_map(&self.table, &module, &module, &module, &params, "table")?;
        let table = LambdaTable::square(&module, entries)?;
        let bindings = decls
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k, v)))
            .collect();
        Ok(LoadedAlgebra {
            name: self.name.clone(),
            table,
            bindings,
        })
    }

    pub fn from_table(table: &LambdaTable, name: Option<&str>) -> AlgebraFile {
        let m = table.left();
        let mut map = BTreeMap::new();
        for i in 0..m.rank() {
            for j in 0..m.rank() {
                let e = table.entry(i, j);
                if !e.is_zero() {
                    map.insert(format!("({},{})", i + 1, j + 1), element_to_entries(e));
                }
            }
        }
        AlgebraFile {
            name: name.map(str::to_string),
            params: m
                .params()
                .iter()
                .map(|p| ParamDecl {
                    name: p.clone(),
                    value: None,
                })
                .collect(),
            basis: m.basis().to_vec(),
            table: map,
        }
    }
}

impl DatumFile {
    pub fn load(&self) -> Result<LoadedDatum, Error> {
        let r_loaded = self.r.to_table()?;
        let rm = r_loaded.table.left().clone();
        let mut bindings = r_loaded.bindings.clone();

        // Q: either explicit, or implied rank-1 by the flag section.
        let (qm, q_table, q_bindings) = match &self.q {
            Some(qf) => {
                let decls = qf.param_decls()?;
                let mut params: BTreeSet<String> = decls.keys().cloned().collect();
                params.extend(rm.params().iter().cloned());
                let module = FreeModule::new(qf.basis.clone(), params.clone())?;
                let table = if qf.table.is_empty() {
                    None
                } else {
                    let entries =
                        table_map(&qf.table, &module, &module, &module, &params, "Q.table")?;
                    Some(LambdaTable::square(&module, entries)?)
                };
                let qb: BTreeMap<String, BigRational> = decls
                    .into_iter()
                    .filter_map(|(k, v)| v.map(|v| (k, v)))
                    .collect();
                (module, table, qb)
            }
            None => {
                let name = self
                    .flag
                    .as_ref()
                    .and_then(|f| f.q_name.clone())
                    .unwrap_or_else(|| "x".to_string());
                let module = FreeModule::new(vec![name], rm.params().clone())?;
                (module, None, BTreeMap::new())
            }
        };
        bindings.extend(q_bindings);
        let params: BTreeSet<String> = qm.params().clone();

        if let Some(flag) = &self.flag {
            let six_given = !self.phi.is_empty()
                || !self.psi.is_empty()
                || !self.l.is_empty()
                || !self.r_action.is_empty()
                || !self.g.is_empty()
                || !self.circ.is_empty();
            if six_given {
                return Err(schema_err(
                    "flag",
                    "flag section and the six table sections are mutually exclusive",
                ));
            }
            if qm.rank() != 1 {
                return Err(schema_err("flag", "flag datums require rank-1 Q"));
            }
            let fd = load_flag(flag, &r_loaded.table, &qm, &params)?;
            let datum = flag_to_datum(&fd)?;
            return Ok(LoadedDatum {
                name: self.name.clone(),
                datum,
                flag: Some(fd),
                bindings,
            });
        }

        let mk_family = |map: &BTreeMap<String, Vec<String>>,
                         acting: &Arc<FreeModule>,
                         on: &Arc<FreeModule>,
                         section: &str|
         -> Result<OperatorTable, Error> {
            let entries = table_map(map, acting, on, on, &params, section)?;
            OperatorTable::family(acting, on, entries)
        };
        let phi = mk_family(&self.phi, &qm, &rm, "phi")?;
        let psi = mk_family(&self.psi, &qm, &rm, "psi")?;
        let l = mk_family(&self.l, &rm, &qm, "l")?;
        let r = mk_family(&self.r_action, &rm, &qm, "r")?;
        let g = LambdaTable::new(
            qm.clone(),
            qm.clone(),
            rm.clone(),
            table_map(&self.g, &qm, &qm, &rm, &params, "g")?,
        )?;
        let circ_entries = if self.circ.is_empty() {
            match &q_table {
                Some(t) => t.entries().to_vec(),
                None => vec![Element::zero(&qm); qm.rank() * qm.rank()],
            }
        } else {
            table_map(&self.circ, &qm, &qm, &qm, &params, "circ")?
        };
        let circ = LambdaTable::new(qm.clone(), qm.clone(), qm.clone(), circ_entries)?;
        let datum = ExtendingDatum::new(r_loaded.table, qm, phi, psi, l, r, g, circ)?;
        Ok(LoadedDatum {
            name: self.name.clone(),
            datum,
            flag: None,
            bindings,
        })
    }

    pub fn from_datum(d: &ExtendingDatum, name: Option<&str>) -> DatumFile {
        let rm = d.r_table.left();
        let qm = &d.q;
        let fam_map = |op: &OperatorTable, n_act: usize, n_on: usize| {
            let mut map = BTreeMap::new();
            for i in 0..n_act {
                for j in 0..n_on {
                    let e = op.module_entry(i, j);
                    if !e.is_zero() {
                        map.insert(format!("({},{})", i + 1, j + 1), element_to_entries(e));
                    }
                }
            }
            map
        };
        let table_map_of = |t: &LambdaTable| {
            let mut map = BTreeMap::new();
            for i in 0..t.left().rank() {
                for j in 0..t.right().rank() {
                    let e = t.entry(i, j);
                    if !e.is_zero() {
                        map.insert(format!("({},{})", i + 1, j + 1), element_to_entries(e));
                    }
                }
            }
            map
        };
        DatumFile {
            name: name.map(str::to_string),
            r: AlgebraFile::from_table(&d.r_table, None),
            q: Some(AlgebraFile {
                name: None,
                params: qm
                    .params()
                    .iter()
                    .filter(|p| !rm.params().contains(*p))
                    .map(|p| ParamDecl {
                        name: p.clone(),
                        value: None,
                    })
                    .collect(),
                basis: qm.basis().to_vec(),
                table: BTreeMap::new(),
            }),
            phi: fam_map(&d.phi, qm.rank(), rm.rank()),
            psi: fam_map(&d.psi, qm.rank(), rm.rank()),
            l: fam_map(&d.l, rm.rank(), qm.rank()),
            r_action: fam_map(&d.r, rm.rank(), qm.rank()),
            g: table_map_of(&d.g),
            circ: table_map_of(&d.circ),
            flag: None,
        }
    }
}

fn load_flag(
    section: &FlagSection,
    r_table: &LambdaTable,
    qm: &Arc<FreeModule>,
    params: &BTreeSet<String>,
) -> Result<FlagDatum, Error> {
    let rm = r_table.left().clone();
    let n = rm.rank();
    let scalar_map = |map: &BTreeMap<String, String>, section: &str| -> Result<Vec<Poly>, Error> {
        let mut rows = vec![Poly::zero(); n];
        for (key, src) in map {
            let path = format!("{section}.{key}");
            let ix = parse_key(key, 1, &[n], &path)?;
            rows[ix[0]] = Poly::parse(src, params).map_err(|e| match e {
                Error::Syntax { position, message } => {
                    schema_err(&path, format!("at byte {position}: {message}"))
                }
                other => other,
            })?;
        }
        Ok(rows)
    };
    let op_map =
        |map: &BTreeMap<String, Vec<String>>, section: &str| -> Result<Vec<Element>, Error> {
            let mut rows = vec![Element::zero(&rm); n];
            for (key, list) in map {
                let path = format!("{section}.{key}");
                let ix = parse_key(key, 1, &[n], &path)?;
                rows[ix[0]] = parse_entry_list(list, &rm, params, &path)?;
            }
            Ok(rows)
        };
    let h = OperatorTable::left_functional(&rm, scalar_map(&section.h, "flag.h")?)?;
    let k = OperatorTable::left_functional(&rm, scalar_map(&section.k, "flag.k")?)?;
    let d_op = OperatorTable::conformal(&rm, &rm, op_map(&section.d, "flag.D")?)?;
    let t_op = OperatorTable::conformal(&rm, &rm, op_map(&section.t, "flag.T")?)?;
    let m = parse_entry_list(&section.m, &rm, params, "flag.M")?;
    let p = match &section.p {
        Some(src) => Poly::parse(src, params)?,
        None => Poly::zero(),
    };
    FlagDatum::new(
        r_table.clone(),
        h,
        k,
        d_op,
        t_op,
        m,
        p,
        qm.basis_name(0),
    )
}

/// Loads a file and decides whether it is an algebra or a datum by the
/// presence of the `R` key.
pub fn load(path: &Path) -> Result<Loaded, Error> {
    let text = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("R").is_some() {
        let file: DatumFile = serde_json::from_value(value)?;
        Ok(Loaded::Datum(file.load()?))
    } else if value.get("basis").is_some() {
        let file: AlgebraFile = serde_json::from_value(value)?;
        Ok(Loaded::Algebra(file.to_table()?))
    } else {
        Err(schema_err(
            path.to_string_lossy().as_ref(),
            "file is neither an algebra (needs `basis`) nor a datum (needs `R`)",
        ))
    }
}

/// Merges file bindings with command-line bindings (the latter win) and
/// validates that every bound name is a declared parameter.
pub fn merge_bindings(
    file: &BTreeMap<String, BigRational>,
    cli: &BTreeMap<String, BigRational>,
    declared: &BTreeSet<String>,
) -> Result<BTreeMap<String, BigRational>, Error> {
    let mut out = file.clone();
    for (k, v) in cli {
        out.insert(k.clone(), v.clone());
    }
    for name in out.keys() {
        if Var::reserved(name).is_some() {
            return Err(Error::BindReserved(name.clone()));
        }
        if !declared.contains(name) {
            return Err(Error::UndeclaredIdentifier(name.clone()));
        }
    }
    Ok(out)
}

/// Renders a check report as deterministic JSON.
pub fn report_json(passed: bool, report: &CheckReport) -> serde_json::Value {
    serde_json::json!({
        "passed": passed,
        "failures": report
            .failures
            .iter()
            .map(|f| {
                serde_json::json!({
                    "law": f.law,
                    "at": f.index_names,
                    "residual": f.residual.to_string(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn algebra_file_roundtrip() {
        let rc = fixtures::rank1_rc();
        let file = AlgebraFile::from_table(&rc, Some("rc"));
        let json = serde_json::to_string_pretty(&file).unwrap();
        let parsed: AlgebraFile = serde_json::from_str(&json).unwrap();
        let loaded = parsed.to_table().unwrap();
        assert_eq!(loaded.table, rc);
        // Byte-identical re-serialization.
        let again = serde_json::to_string_pretty(&AlgebraFile::from_table(
            &loaded.table,
            Some("rc"),
        ))
        .unwrap();
        assert_eq!(json, again);
    }

    #[test]
    fn rc_fixture_shape() {
        let file = AlgebraFile {
            name: Some("rc".into()),
            params: vec![ParamDecl {
                name: "c".into(),
                value: None,
            }],
            basis: vec!["x".into()],
            table: [("(1,1)".to_string(), vec!["(d+lam+c)*x".to_string()])].into(),
        };
        let loaded = file.to_table().unwrap();
        assert_eq!(loaded.table, fixtures::rank1_rc());
    }

    #[test]
    fn empty_table_is_zero_algebra() {
        let file = AlgebraFile {
            name: None,
            params: vec![],
            basis: vec!["x".into()],
            table: BTreeMap::new(),
        };
        let loaded = file.to_table().unwrap();
        assert!(loaded.table.is_zero());
    }

    #[test]
    fn misspelled_lambda_is_undeclared() {
        let file = AlgebraFile {
            name: None,
            params: vec![],
            basis: vec!["x".into()],
            table: [("(1,1)".to_string(), vec!["(d+lambda)*x".to_string()])].into(),
        };
        match file.to_table() {
            Err(Error::UndeclaredIdentifier(s)) => assert_eq!(s, "lambda"),
            other => panic!("expected undeclared identifier, got {other:?}"),
        }
    }

    #[test]
    fn bad_key_reports_path() {
        let file = AlgebraFile {
            name: None,
            params: vec![],
            basis: vec!["x".into()],
            table: [("(1,5)".to_string(), vec!["x".to_string()])].into(),
        };
        match file.to_table() {
            Err(Error::Schema { path, .. }) => assert!(path.contains("(1,5)")),
            other => panic!("expected schema error, got {other:?}"),
        }
    }

    #[test]
    fn datum_file_roundtrip() {
        let rc = fixtures::rank1_rc();
        let fd = fixtures::rank1_flag(&rc, "0", "0", "0", "0", "d+lam+c");
        let datum = flag_to_datum(&fd).unwrap();
        let file = DatumFile::from_datum(&datum, Some("case1"));
        let json = serde_json::to_string_pretty(&file).unwrap();
        let parsed: DatumFile = serde_json::from_str(&json).unwrap();
        let loaded = parsed.load().unwrap();
        assert_eq!(loaded.datum, datum);
    }
}
