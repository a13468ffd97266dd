//! Command-line surface of the workbench.
//!
//! Exit codes: 0 on pass/success, 1 on mathematical failure (failed checks,
//! no witness found), 2 on usage or i/o errors. Reports are deterministic
//! plain text; `--json` switches to machine-readable output.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use lsca_core::axioms::{check_lie, check_lsca, subadjacent, CheckReport};
use lsca_core::conformal::{LambdaTable, OperatorTable};
use lsca_core::flagdatum::{
    build_flag_extension, check_dflc_membership, check_equiv, check_flag, search_equiv, DflcTag,
    EquivWitness, FlagDatum,
};
use lsca_core::io::{
    self, load, merge_bindings, parse_rational, report_json, AlgebraFile, DatumFile, Loaded,
    LoadedAlgebra, LoadedDatum,
};
use lsca_core::operators::{
    check_semiquasicentroid, solve_derivations, solve_inner_witness, DegreeBound,
};
use lsca_core::poly::Poly;
use lsca_core::products::{
    build_unified, check_bicrossed, check_crossed, check_extending_structure, extract_datum,
    ProductAlgebra,
};
use lsca_core::Error;

#[derive(Parser)]
#[command(
    name = "lsca",
    about = "Exact workbench for left-symmetric conformal algebras",
    version
)]
struct Cli {
    /// Emit machine-readable JSON reports.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Bindings {
    /// Bind a parameter, e.g. `--bind c=1` (repeatable).
    #[arg(long = "bind", value_name = "NAME=RATIONAL")]
    bind: Vec<String>,
}

impl Bindings {
    fn parse(&self) -> Result<BTreeMap<String, BigRational>, String> {
        let mut out = BTreeMap::new();
        for b in &self.bind {
            let (name, val) = b
                .split_once('=')
                .ok_or_else(|| format!("--bind expects NAME=RATIONAL, got `{b}`"))?;
            let val = parse_rational(val.trim()).map_err(|e| e.to_string())?;
            out.insert(name.trim().to_string(), val);
        }
        Ok(out)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the left-symmetry identity of an algebra file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Check the Lie conformal axioms (skew-symmetry, then Jacobi).
    CheckLie {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Compute the sub-adjacent Lie bracket of a left-symmetric algebra.
    Subadjacent {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        /// Write the resulting algebra file here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the ten compatibility conditions of an extending datum.
    CheckDatum {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Build the unified product of a datum that passes its conditions.
    BuildUnified {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Read the six tables off a product algebra with a recorded R block.
    ExtractDatum {
        file: PathBuf,
        /// How many leading basis vectors form the R block.
        #[arg(long)]
        r_rank: usize,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the crossed-product conditions (requires l = r = 0).
    CheckCrossed {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Check the bicrossed-product conditions (requires g = 0).
    CheckBicrossed {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Check the ten flag-datum identities of a rank-1 extension datum.
    CheckFlag {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Build the rank n+1 extension of a passing flag datum.
    BuildFlag {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide equivalence of two flag datums: verify a witness or search.
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        /// Verify this witness file instead of searching.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Degree bound on the witness element.
        #[arg(long, default_value_t = 6)]
        deg: u32,
        /// Candidate scale factors, e.g. `--betas 1,-1,2,1/2`.
        #[arg(long, default_value = "1,-1,2,1/2")]
        betas: String,
    },
    /// Solve for all conformal derivations within a degree bound.
    SolveDerivations {
        file: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long, default_value_t = 6)]
        deg: u32,
    },
    /// Decide whether a semi-quasicentroid is inner within a degree bound.
    InnerWitness {
        file: PathBuf,
        /// Operator file with `entries: {"(i)": ["coeff*name", ...]}`.
        #[arg(long)]
        op: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
        #[arg(long, default_value_t = 6)]
        deg: u32,
    },
    /// Check the conformal semi-quasicentroid identity for an operator.
    CheckCentroid {
        file: PathBuf,
        #[arg(long)]
        op: PathBuf,
        #[command(flatten)]
        bindings: Bindings,
    },
    /// Describe a file: what it contains, ranks, parameters, table shapes.
    Report { file: PathBuf },
}

fn main() -> ExitCode {
    lsca_core::configure_threads_from_env();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn fail(e: Error) -> String {
    e.to_string()
}

fn load_algebra(
    path: &PathBuf,
    bindings: &Bindings,
) -> Result<(LoadedAlgebra, LambdaTable), String> {
    let loaded = match load(path).map_err(fail)? {
        Loaded::Algebra(a) => a,
        Loaded::Datum(_) => return Err(format!("{} is a datum file; an algebra file is required", path.display())),
    };
    let cli_binds = bindings.parse()?;
    let merged = merge_bindings(
        &loaded.bindings,
        &cli_binds,
        loaded.table.left().params(),
    )
    .map_err(fail)?;
    let table = loaded.table.bind_params(&merged).map_err(fail)?;
    Ok((loaded, table))
}

fn load_datum(path: &PathBuf, bindings: &Bindings) -> Result<LoadedDatum, String> {
    let loaded = match load(path).map_err(fail)? {
        Loaded::Datum(d) => d,
        Loaded::Algebra(_) => return Err(format!("{} is an algebra file; a datum file is required", path.display())),
    };
    let cli_binds = bindings.parse()?;
    let merged = merge_bindings(&loaded.bindings, &cli_binds, loaded.datum.q.params())
        .map_err(fail)?;
    let datum = loaded.datum.bind_params(&merged).map_err(fail)?;
    let flag = loaded
        .flag
        .map(|f| f.bind_params(&merged))
        .transpose()
        .map_err(fail)?;
    Ok(LoadedDatum {
        name: loaded.name,
        datum,
        flag,
        bindings: merged,
    })
}

fn require_flag(loaded: &LoadedDatum) -> Result<FlagDatum, String> {
    match &loaded.flag {
        Some(f) => Ok(f.clone()),
        None => {
            // A rank-1 six-table datum converts to a flag datum.
            datum_to_flag(loaded).ok_or_else(|| {
                "this datum has no flag section and its Q is not of rank 1".to_string()
            })
        }
    }
}

fn datum_to_flag(loaded: &LoadedDatum) -> Option<FlagDatum> {
    let d = &loaded.datum;
    if d.q.rank() != 1 {
        return None;
    }
    let rm = d.r_table.left().clone();
    let n = rm.rank();
    let h_rows: Vec<Poly> = (0..n).map(|i| d.l.module_entry(i, 0).coeff(0).clone()).collect();
    let k_rows: Vec<Poly> = (0..n).map(|i| d.r.module_entry(i, 0).coeff(0).clone()).collect();
    let d_rows = (0..n).map(|i| d.phi.module_entry(0, i).clone()).collect();
    let t_rows = (0..n).map(|i| d.psi.module_entry(0, i).clone()).collect();
    FlagDatum::new(
        d.r_table.clone(),
        OperatorTable::left_functional(&rm, h_rows).ok()?,
        OperatorTable::left_functional(&rm, k_rows).ok()?,
        OperatorTable::conformal(&rm, &rm, d_rows).ok()?,
        OperatorTable::conformal(&rm, &rm, t_rows).ok()?,
        d.g.entry(0, 0).clone(),
        d.circ.entry(0, 0).coeff(0).clone(),
        d.q.basis_name(0),
    )
    .ok()
}

fn emit_report(json: bool, report: &CheckReport) -> ExitCode {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report_json(report.passed(), report)).unwrap()
        );
    } else {
        print!("{report}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit_algebra(
    json: bool,
    table: &LambdaTable,
    name: Option<&str>,
    output: &Option<PathBuf>,
) -> Result<ExitCode, String> {
    let file = AlgebraFile::from_table(table, name);
    let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
    match output {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| e.to_string())?;
            if !json {
                println!("wrote {}", path.display());
            }
        }
        None => println!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn product_name(p: &ProductAlgebra, base: Option<&str>) -> String {
    match base {
        Some(n) => format!("{n}-unified"),
        None => format!("unified-product-r{}", p.r_rank),
    }
}

/// Loads an operator file `{ "entries": {"(i)": ["coeff*name", ...]} }` as a
/// conformal operator on the algebra's module.
fn load_operator(path: &PathBuf, table: &LambdaTable) -> Result<OperatorTable, String> {
    #[derive(serde::Deserialize)]
    struct OpFile {
        entries: BTreeMap<String, Vec<String>>,
    }
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file: OpFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let m = table.left();
    let mut rows = vec![lsca_core::conformal::Element::zero(m); m.rank()];
    for (key, list) in &file.entries {
        let inner = key
            .trim()
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| format!("bad key `{key}` in operator file"))?;
        let i: usize = inner
            .trim()
            .parse()
            .map_err(|_| format!("bad index `{key}` in operator file"))?;
        if i == 0 || i > m.rank() {
            return Err(format!("index {i} out of range in operator file"));
        }
        let mut acc = lsca_core::conformal::Element::zero(m);
        for entry in list {
            let (coeff, name) = match entry.rsplit_once('*') {
                Some((c, n)) => (c.to_string(), n.trim().to_string()),
                None => ("1".to_string(), entry.trim().to_string()),
            };
            let j = m
                .basis_index(&name)
                .ok_or_else(|| format!("`{name}` is not a basis name"))?;
            let p = Poly::parse(&coeff, m.params()).map_err(fail)?;
            let mut coeffs = vec![Poly::zero(); m.rank()];
            coeffs[j] = p;
            acc += &lsca_core::conformal::Element::from_coeffs(m, coeffs).map_err(fail)?;
        }
        rows[i - 1] = acc;
    }
    OperatorTable::conformal(m, m, rows).map_err(fail)
}

fn load_witness(path: &PathBuf, fd: &FlagDatum) -> Result<EquivWitness, String> {
    #[derive(serde::Deserialize)]
    struct WitnessFile {
        omega: Vec<String>,
        beta: String,
    }
    let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file: WitnessFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let m = fd.r_table.left();
    let mut acc = lsca_core::conformal::Element::zero(m);
    for entry in &file.omega {
        let (coeff, name) = match entry.rsplit_once('*') {
            Some((c, n)) => (c.to_string(), n.trim().to_string()),
            None => ("1".to_string(), entry.trim().to_string()),
        };
        let j = m
            .basis_index(&name)
            .ok_or_else(|| format!("`{name}` is not a basis name"))?;
        let p = Poly::parse(&coeff, m.params()).map_err(fail)?;
        let mut coeffs = vec![Poly::zero(); m.rank()];
        coeffs[j] = p;
        acc += &lsca_core::conformal::Element::from_coeffs(m, coeffs).map_err(fail)?;
    }
    let beta = parse_rational(&file.beta).map_err(fail)?;
    EquivWitness::new(acc, beta).map_err(fail)
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Check { file, bindings } => {
            let (_, table) = load_algebra(file, bindings)?;
            let report = check_lsca(&table).map_err(fail)?;
            Ok(emit_report(cli.json, &report))
        }
        Command::CheckLie { file, bindings } => {
            let (_, table) = load_algebra(file, bindings)?;
            let report = check_lie(&table).map_err(fail)?;
            Ok(emit_report(cli.json, &report))
        }
        Command::Subadjacent {
            file,
            bindings,
            output,
        } => {
            let (loaded, table) = load_algebra(file, bindings)?;
            match subadjacent(&table) {
                Ok(lie) => {
                    let name = loaded.name.as_deref().map(|n| format!("{n}-sub-adjacent"));
                    emit_algebra(cli.json, &lie, name.as_deref(), output)
                }
                Err(Error::NotLeftSymmetric(_)) => {
                    let report = check_lsca(&table).map_err(fail)?;
                    if !cli.json {
                        println!("input is not left-symmetric:");
                    }
                    Ok(emit_report(cli.json, &report))
                }
                Err(e) => Err(fail(e)),
            }
        }
        Command::CheckDatum { file, bindings } => {
            let loaded = load_datum(file, bindings)?;
            let report = check_extending_structure(&loaded.datum);
            Ok(emit_report(cli.json, &report))
        }
        Command::BuildUnified {
            file,
            bindings,
            output,
        } => {
            let loaded = load_datum(file, bindings)?;
            match build_unified(&loaded.datum) {
                Ok(product) => emit_algebra(
                    cli.json,
                    &product.table,
                    Some(&product_name(&product, loaded.name.as_deref())),
                    output,
                ),
                Err(Error::DatumFailsConditions(report)) => {
                    if !cli.json {
                        println!("datum fails its conditions:");
                    }
                    Ok(emit_report(cli.json, &report))
                }
                Err(e) => Err(fail(e)),
            }
        }
        Command::ExtractDatum {
            file,
            r_rank,
            bindings,
            output,
        } => {
            let (loaded, table) = load_algebra(file, bindings)?;
            if *r_rank > table.left().rank() {
                return Err("--r-rank exceeds the rank of the algebra".into());
            }
            let product = ProductAlgebra {
                table,
                r_rank: *r_rank,
            };
            let datum = extract_datum(&product).map_err(fail)?;
            let dfile = DatumFile::from_datum(&datum, loaded.name.as_deref());
            let text = serde_json::to_string_pretty(&dfile).map_err(|e| e.to_string())?;
            match output {
                Some(path) => {
                    std::fs::write(path, text + "\n").map_err(|e| e.to_string())?;
                    if !cli.json {
                        println!("wrote {}", path.display());
                    }
                }
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::CheckCrossed { file, bindings } => {
            let loaded = load_datum(file, bindings)?;
            let report = check_crossed(&loaded.datum).map_err(fail)?;
            Ok(emit_report(cli.json, &report))
        }
        Command::CheckBicrossed { file, bindings } => {
            let loaded = load_datum(file, bindings)?;
            let report = check_bicrossed(&loaded.datum).map_err(fail)?;
            Ok(emit_report(cli.json, &report))
        }
        Command::CheckFlag { file, bindings } => {
            let loaded = load_datum(file, bindings)?;
            let fd = require_flag(&loaded)?;
            let report = check_flag(&fd);
            if cli.json {
                let mut v = report_json(report.passed(), &report);
                let membership = check_dflc_membership(&fd).map_err(fail)?;
                v["family"] = serde_json::json!(match membership.tag {
                    DflcTag::Dflc1 => "DFLC1",
                    DflcTag::Dflc2 => "DFLC2",
                    DflcTag::Neither => "neither",
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
                return Ok(if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                });
            }
            let membership = check_dflc_membership(&fd).map_err(fail)?;
            let family = match membership.tag {
                DflcTag::Dflc1 => "DFLC1",
                DflcTag::Dflc2 => "DFLC2",
                DflcTag::Neither => "neither",
            };
            println!("family: {family}");
            Ok(emit_report(cli.json, &report))
        }
        Command::BuildFlag {
            file,
            bindings,
            output,
        } => {
            let loaded = load_datum(file, bindings)?;
            let fd = require_flag(&loaded)?;
            match build_flag_extension(&fd) {
                Ok(product) => emit_algebra(
                    cli.json,
                    &product.table,
                    Some(&product_name(&product, loaded.name.as_deref())),
                    output,
                ),
                Err(Error::DatumFailsConditions(report)) => {
                    if !cli.json {
                        println!("flag datum fails its conditions:");
                    }
                    Ok(emit_report(cli.json, &report))
                }
                Err(e) => Err(fail(e)),
            }
        }
        Command::Equiv {
            file1,
            file2,
            bindings,
            witness,
            deg,
            betas,
        } => {
            let loaded1 = load_datum(file1, bindings)?;
            let loaded2 = load_datum(file2, bindings)?;
            let fd1 = require_flag(&loaded1)?;
            let fd2 = require_flag(&loaded2)?;
            match witness {
                Some(wpath) => {
                    let w = load_witness(wpath, &fd1)?;
                    let report = check_equiv(&fd1, &fd2, &w).map_err(fail)?;
                    Ok(emit_report(cli.json, &report))
                }
                None => {
                    let beta_list: Vec<BigRational> = betas
                        .split(',')
                        .map(|b| parse_rational(b.trim()).map_err(fail))
                        .collect::<Result<_, _>>()?;
                    match search_equiv(&fd1, &fd2, DegreeBound(*deg), &beta_list).map_err(fail)? {
                        Some(w) => {
                            if cli.json {
                                println!(
                                    "{}",
                                    serde_json::json!({
                                        "equivalent": true,
                                        "omega": w.omega.to_string(),
                                        "beta": w.beta.to_string(),
                                    })
                                );
                            } else {
                                println!("equivalent: omega = {}, beta = {}", w.omega, w.beta);
                            }
                            Ok(ExitCode::SUCCESS)
                        }
                        None => {
                            if cli.json {
                                println!("{}", serde_json::json!({"equivalent": false}));
                            } else {
                                println!("none-within-bound (deg {deg}, betas {betas})");
                            }
                            Ok(ExitCode::from(1))
                        }
                    }
                }
            }
        }
        Command::SolveDerivations {
            file,
            bindings,
            deg,
        } => {
            let (_, table) = load_algebra(file, bindings)?;
            let sols = solve_derivations(&table, DegreeBound(*deg)).map_err(fail)?;
            if cli.json {
                let basis: Vec<serde_json::Value> = sols
                    .basis_ops
                    .iter()
                    .map(|op| {
                        let rows: Vec<String> = (0..table.left().rank())
                            .map(|i| op.module_entry(0, i).to_string())
                            .collect();
                        serde_json::json!(rows)
                    })
                    .collect();
                println!(
                    "{}",
                    serde_json::to_string_pretty(
                        &serde_json::json!({"dimension": sols.dimension, "basis": basis})
                    )
                    .unwrap()
                );
            } else {
                println!("dimension {}", sols.dimension);
                for (n, op) in sols.basis_ops.iter().enumerate() {
                    for i in 0..table.left().rank() {
                        println!(
                            "  D{}({}) = {}",
                            n + 1,
                            table.left().basis_name(i),
                            op.module_entry(0, i)
                        );
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::InnerWitness {
            file,
            op,
            bindings,
            deg,
        } => {
            let (_, table) = load_algebra(file, bindings)?;
            let t_op = load_operator(op, &table)?;
            let centroid = check_semiquasicentroid(&table, &t_op).map_err(fail)?;
            if !centroid.passed() {
                if !cli.json {
                    println!("operator is not a semi-quasicentroid:");
                }
                return Ok(emit_report(cli.json, &centroid));
            }
            match solve_inner_witness(&table, &t_op, DegreeBound(*deg)).map_err(fail)? {
                Some(b) => {
                    if cli.json {
                        println!("{}", serde_json::json!({"inner": true, "witness": b.to_string()}));
                    } else {
                        println!("inner: witness b = {b}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    if cli.json {
                        println!("{}", serde_json::json!({"inner": false}));
                    } else {
                        println!("none-within-bound (deg {deg})");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::CheckCentroid { file, op, bindings } => {
            let (_, table) = load_algebra(file, bindings)?;
            let t_op = load_operator(op, &table)?;
            let report = check_semiquasicentroid(&table, &t_op).map_err(fail)?;
            Ok(emit_report(cli.json, &report))
        }
        Command::Report { file } => {
            match load(file).map_err(fail)? {
                Loaded::Algebra(a) => {
                    let m = a.table.left();
                    println!("algebra{}", a.name.as_deref().map(|n| format!(" `{n}`")).unwrap_or_default());
                    println!("  rank: {}", m.rank());
                    println!("  basis: {}", m.basis().join(", "));
                    println!(
                        "  params: {}",
                        if m.params().is_empty() {
                            "(none)".to_string()
                        } else {
                            m.params().iter().cloned().collect::<Vec<_>>().join(", ")
                        }
                    );
                    for i in 0..m.rank() {
                        for j in 0..m.rank() {
                            let e = a.table.entry(i, j);
                            if !e.is_zero() {
                                println!(
                                    "  {}_lam {} = {}",
                                    m.basis_name(i),
                                    m.basis_name(j),
                                    e
                                );
                            }
                        }
                    }
                }
                Loaded::Datum(d) => {
                    println!(
                        "datum{}",
                        d.name.as_deref().map(|n| format!(" `{n}`")).unwrap_or_default()
                    );
                    println!("  R rank: {}", d.datum.r_table.left().rank());
                    println!("  Q rank: {}", d.datum.q.rank());
                    println!("  flag section: {}", d.flag.is_some());
                    let shape = |b: bool| if b { "zero" } else { "nonzero" };
                    println!("  phi: {}", shape(d.datum.phi.is_zero()));
                    println!("  psi: {}", shape(d.datum.psi.is_zero()));
                    println!("  l: {}", shape(d.datum.l.is_zero()));
                    println!("  r: {}", shape(d.datum.r.is_zero()));
                    println!("  g: {}", shape(d.datum.g.is_zero()));
                    println!("  circ: {}", shape(d.datum.circ.is_zero()));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
