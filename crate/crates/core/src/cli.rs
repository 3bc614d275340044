//! The `cpkit` command-line front end.
//!
//! Input files are JSON. A complex number is written `[re, im]` (a bare
//! number is read as real) and a matrix is an array of rows.
//!
//! Channel files:
//!
//! ```json
//! {"kind": "kraus", "dim": 2, "payload": [[[[1,0],[0,0]],[[0,0],[1,0]]]]}
//! ```
//!
//! `kind` is one of `kraus` (payload: array of `N×N` matrices), `superop`,
//! `choi` or `gks` (payload: one `N²×N²` matrix). `gks` also needs `basis`:
//! `"standard"`, `"gellmann"` or `{"custom": [matrices]}`.
//!
//! Model files: `{"n", "m", "h_s", "h_e", "h_se", "env_state_index"}` with
//! the last field optional.
//!
//! Reports go to standard output as single-line JSON with every float
//! written to 17 significant digits, or as tables with `--pretty`.
//! Exit status: 0 on success, 1 when a valid input fails the verdict,
//! 2 on input errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::bases::{gellmann_basis, standard_basis, BasisLabel, OperatorBasis};
use crate::channels::{
    check, choi, choi_inverse, dpj, fc, gks, gks_inverse, kraus_from_gks, pskh, superop_from_kraus,
    GksMatrix, KrausSet, SuperOp,
};
use crate::linalg::{herm_eig, CMatrix};
use crate::opensys::{expansion, verify_expansion, Expansion, ExpansionReport, OpenSystemModel};
use crate::{Complex64, Error};

pub const DEFAULT_TOL: f64 = 1e-9;
/// Exact-map eigenvalues above `-EXPAND_CP_TOL` count as non-negative in `expand`.
pub const EXPAND_CP_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "cpkit", version, about = "Complete-positivity toolkit for finite-dimensional quantum channels")]
pub struct Cli {
    /// Numerical tolerance for verdicts.
    #[arg(long, global = true, env = "CPKIT_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// CP / TP / Hermiticity verdict for a channel.
    Check {
        file: PathBuf,
        /// standard, gellmann, or a path to a custom basis file.
        #[arg(long, default_value = "standard")]
        basis: String,
    },
    /// Convert a channel to another representation.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Repr,
        #[arg(long, default_value = "standard")]
        basis: String,
    },
    /// Compare the matrix isomorphisms on one channel.
    Compare { file: PathBuf },
    /// Short-time GKS expansion of an open-system model.
    Expand {
        file: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        t_max: f64,
        /// Sample times are t_max, t_max/2, t_max/4, ...
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Choi,
    Gks,
    Kraus,
    Superop,
}

/// What went wrong, and which exit status it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Malformed or invalid input: exit 2.
    Input(String),
    /// Valid input that fails the requested operation: exit 1.
    Rejected(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotCompletelyPositive(_) => Failure::Rejected(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Rejected(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

/// Runs a parsed command, returning the rendered output and exit status.
pub fn execute(cli: &Cli) -> Result<(String, i32), Failure> {
    if !(cli.tol.is_finite() && cli.tol >= 0.0) {
        return Err(Failure::Input(format!("tolerance must be non-negative, got {}", cli.tol)));
    }
    match &cli.command {
        Command::Check { file, basis } => cmd_check(file, basis, cli.tol, cli.pretty),
        Command::Convert { file, to, basis } => cmd_convert(file, *to, basis, cli.tol, cli.pretty),
        Command::Compare { file } => cmd_compare(file, cli.tol, cli.pretty),
        Command::Expand {
            file,
            t_max,
            samples,
        } => cmd_expand(file, *t_max, *samples, cli.pretty),
    }
}

pub fn cmd_check(file: &Path, basis: &str, tol: f64, pretty: bool) -> Result<(String, i32), Failure> {
    let ch = load_channel(file)?;
    let f = resolve_basis(basis, ch.superop.dim())?;
    let v = check(&ch.superop, &f, tol)?;
    let ok = v.completely_positive && v.trace_preserving;
    let report = json!({
        "command": "check",
        "basis": basis_name(&f),
        "tol": tol,
        "hermiticity_preserving": v.hermiticity_preserving,
        "trace_preserving": v.trace_preserving,
        "completely_positive": v.completely_positive,
        "min_eigenvalue": v.min_eigenvalue,
        "max_eigenvalue": v.max_eigenvalue,
        "kraus_rank": v.kraus_rank,
    });
    let text = if pretty {
        let mut s = String::new();
        for (k, val) in [
            ("basis", basis_name(&f).to_string()),
            ("hermiticity_preserving", v.hermiticity_preserving.to_string()),
            ("trace_preserving", v.trace_preserving.to_string()),
            ("completely_positive", v.completely_positive.to_string()),
            ("min_eigenvalue", format!("{:.6e}", v.min_eigenvalue)),
            ("max_eigenvalue", format!("{:.6e}", v.max_eigenvalue)),
            ("kraus_rank", v.kraus_rank.map_or("-".into(), |r| r.to_string())),
        ] {
            let _ = writeln!(s, "{k:<24}{val}");
        }
        s
    } else {
        render(&report)
    };
    Ok((text, if ok { 0 } else { 1 }))
}

pub fn cmd_convert(file: &Path, to: Repr, basis: &str, tol: f64, pretty: bool) -> Result<(String, i32), Failure> {
    let ch = load_channel(file)?;
    let f = resolve_basis(basis, ch.superop.dim())?;
    let n = ch.superop.dim();
    let (kind, payload, used_basis) = match to {
        Repr::Superop => ("superop", matrix_json(ch.superop.matrix()), None),
        Repr::Choi => ("choi", matrix_json(choi(&ch.superop).g()), None),
        Repr::Gks => ("gks", matrix_json(gks(&ch.superop, &f)?.g()), Some(&f)),
        Repr::Kraus => {
            let k = kraus_from_gks(&gks(&ch.superop, &f)?, tol)?;
            let ops = k.operators().iter().map(matrix_json).collect();
            ("kraus", Value::Array(ops), Some(&f))
        }
    };
    let mut doc = Map::new();
    doc.insert("kind".into(), json!(kind));
    doc.insert("dim".into(), json!(n));
    if let Some(b) = used_basis {
        doc.insert("basis".into(), basis_json(b));
    }
    doc.insert("payload".into(), payload);
    let doc = Value::Object(doc);
    let text = if pretty {
        let mut s = format!("{kind} (dim {n})\n");
        match to {
            Repr::Kraus => {
                let k = parse_channel_value(&doc)?;
                for (i, a) in k.kraus.iter().flatten().enumerate() {
                    let _ = writeln!(s, "operator {i}");
                    s.push_str(&matrix_table(a));
                }
            }
            _ => {
                let m = parse_matrix(&doc["payload"], "payload")?;
                s.push_str(&matrix_table(&m));
            }
        }
        s
    } else {
        render(&doc)
    };
    Ok((text, 0))
}

/// One row of the `compare` table.
#[derive(Debug, Clone)]
pub struct IsoRow {
    pub name: String,
    pub matrix: CMatrix,
    pub hermitian: bool,
    pub eigenvalues: Vec<f64>,
    pub psd: bool,
    pub hash: String,
}

pub fn compare_rows(s: &SuperOp, tol: f64) -> Result<Vec<IsoRow>, Failure> {
    let n = s.dim();
    if !(2..=4).contains(&n) {
        return Err(Failure::Input(format!("compare needs dimension 2..4, got {n}")));
    }
    let std_b = standard_basis(n);
    let herm_b = gellmann_basis(n);
    let herm_name = if n == 2 { "pauli" } else { "gellmann" };
    let mats = vec![
        ("choi".to_string(), choi(s).into_matrix()),
        (format!("gks/{herm_name}"), gks(s, &herm_b)?.into_matrix()),
        ("dpj".to_string(), dpj(s, &std_b)?),
        ("pskh/standard".to_string(), pskh(s, &std_b)?),
        (format!("pskh/{herm_name}"), pskh(s, &herm_b)?),
        ("fc".to_string(), fc(s, &std_b)?),
    ];
    mats.into_iter()
        .map(|(name, m)| {
            let hermitian = m.is_hermitian(tol);
            let eigenvalues = herm_eig(&m.hermitian_part())?.eigenvalues;
            let psd = hermitian && eigenvalues.iter().all(|&l| l >= -tol);
            Ok(IsoRow {
                name,
                hash: matrix_hash(&m),
                matrix: m,
                hermitian,
                eigenvalues,
                psd,
            })
        })
        .collect()
}

pub fn cmd_compare(file: &Path, tol: f64, pretty: bool) -> Result<(String, i32), Failure> {
    let ch = load_channel(file)?;
    let rows = compare_rows(&ch.superop, tol)?;
    let text = if pretty {
        let mut s = format!("{:<18}{:<6}{:<6}{:<48}{}\n", "isomorphism", "herm", "psd", "eigenvalues", "hash");
        for r in &rows {
            let eig: Vec<String> = r.eigenvalues.iter().map(|l| format!("{:+.4}", clean(*l))).collect();
            let _ = writeln!(
                s,
                "{:<18}{:<6}{:<6}{:<48}{}",
                r.name,
                yes_no(r.hermitian),
                yes_no(r.psd),
                eig.join(" "),
                &r.hash[..16]
            );
        }
        s
    } else {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "hash": r.hash,
                    "hermitian": r.hermitian,
                    "eigenvalues": r.eigenvalues,
                    "psd": r.psd,
                })
            })
            .collect();
        render(&json!({
            "command": "compare",
            "dim": ch.superop.dim(),
            "tol": tol,
            "rows": rows,
        }))
    };
    Ok((text, 0))
}

/// Sample times `t_max, t_max/2, …`.
pub fn sample_times(t_max: f64, samples: usize) -> Vec<f64> {
    (0..samples).map(|i| t_max / f64::powi(2.0, i as i32)).collect()
}

pub fn cmd_expand(file: &Path, t_max: f64, samples: usize, pretty: bool) -> Result<(String, i32), Failure> {
    if !(t_max > 0.0 && t_max <= 1.0) {
        return Err(Failure::Input(format!("--t-max must lie in (0, 1], got {t_max}")));
    }
    if samples < 2 {
        return Err(Failure::Input("--samples must be at least 2".into()));
    }
    let model = load_model(file)?;
    let f = gellmann_basis(model.n());
    let ex = expansion(&model, &f)?;
    let rep = verify_expansion(&model, &f, &sample_times(t_max, samples))?;
    let ok = rep.g2_sub_psd() && rep.perturbation_ok() && rep.exact_psd(EXPAND_CP_TOL);
    let text = if pretty { expand_table(&ex, &rep, ok) } else { render(&expand_json(&model, &ex, &rep, ok)) };
    Ok((text, if ok { 0 } else { 1 }))
}

fn expand_json(model: &OpenSystemModel, ex: &Expansion, rep: &ExpansionReport, ok: bool) -> Value {
    let d = ex.basis.len();
    let provenance: Vec<Value> = (0..d)
        .map(|a| Value::Array((0..d).map(|b| json!(ex.g2_provenance(a, b).as_str())).collect()))
        .collect();
    let samples: Vec<Value> = rep
        .samples
        .iter()
        .map(|s| {
            json!({
                "t": s.t,
                "deviation": s.deviation,
                "deviation_sub": s.deviation_sub,
                "first_order_edge": s.first_order_edge,
                "exact_min_eigenvalue": s.exact_min_eigenvalue,
                "truncated_min_eigenvalue": s.truncated_min_eigenvalue,
            })
        })
        .collect();
    let c = &ex.coefficients;
    json!({
        "command": "expand",
        "n": model.n(),
        "m": model.m(),
        "basis": "gellmann",
        "coefficients": {
            "h": c.h,
            "v0": c.v0,
            "vplus": matrix_json(&c.vplus),
        },
        "g0": matrix_json(&ex.g0),
        "g1": matrix_json(&ex.g1),
        "g2": matrix_json(&ex.g2),
        "g2_provenance": provenance,
        "report": {
            "samples": samples,
            "exponent": rep.exponent,
            "cubic_constants": rep.cubic_constants,
            "g2_sub_min_eigenvalue": rep.g2_sub_min_eigenvalue,
            "g2_sub_psd": rep.g2_sub_psd(),
            "g2_sub_consistency": rep.g2_sub_consistency,
            "epsilon1_dominant": rep.epsilon1_dominant,
            "epsilon1": rep.epsilon1,
            "epsilon2": rep.epsilon2,
            "effective_min_eigenvalue": rep.effective_min_eigenvalue,
            "perturbation_ok": rep.perturbation_ok(),
            "exact_psd": rep.exact_psd(EXPAND_CP_TOL),
        },
        "ok": ok,
    })
}

fn expand_table(ex: &Expansion, rep: &ExpansionReport, ok: bool) -> String {
    let mut s = String::new();
    for (name, m) in [("g0", &ex.g0), ("g1", &ex.g1), ("g2", &ex.g2)] {
        let _ = writeln!(s, "{name}");
        s.push_str(&matrix_table(m));
    }
    let _ = writeln!(s, "g2 row/column 0: derived; remaining entries: analytic");
    let _ = writeln!(
        s,
        "\n{:<12}{:<14}{:<14}{:<16}min eig truncated",
        "t", "deviation", "dev/t^3", "min eig exact"
    );
    for (smp, c3) in rep.samples.iter().zip(&rep.cubic_constants) {
        let _ = writeln!(
            s,
            "{:<12.6}{:<14.4e}{:<14.4e}{:<16.4e}{:.4e}",
            smp.t, smp.deviation, c3, smp.exact_min_eigenvalue, smp.truncated_min_eigenvalue
        );
    }
    let _ = writeln!(s, "\nexponent                 {:.4}", rep.exponent);
    let _ = writeln!(s, "g2 block min eigenvalue  {:.4e}", rep.g2_sub_min_eigenvalue);
    let _ = writeln!(s, "effective min eigenvalue {:.4e}", rep.effective_min_eigenvalue);
    let e1 = rep.epsilon1.iter().fold(rep.epsilon1_dominant, |m, e| m.max(*e));
    let e2 = rep.epsilon2.iter().fold(f64::INFINITY, |m, e| m.min(*e));
    let _ = writeln!(s, "max |eps1|               {e1:.4e}");
    let _ = writeln!(s, "min eps2                 {e2:.4e}");
    let _ = writeln!(s, "ok                       {ok}");
    s
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Flushes values that would print as `-0.0000` to zero.
fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

fn matrix_table(m: &CMatrix) -> String {
    let mut s = String::new();
    for r in 0..m.rows() {
        let cells: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:+.4}{:+.4}i", clean(z.re), clean(z.im))
            })
            .collect();
        let _ = writeln!(s, "  {}", cells.join("  "));
    }
    s
}

/// SHA-256 of the matrix with every component rounded to 12 decimals.
pub fn matrix_hash(m: &CMatrix) -> String {
    let mut text = format!("{}x{}", m.rows(), m.cols());
    for z in m.as_slice() {
        let _ = write!(text, ";{:.12},{:.12}", clean(round12(z.re)), clean(round12(z.im)));
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn round12(x: f64) -> f64 {
    let r = (x * 1e12).round() / 1e12;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Serializes with every float written as `{:.16e}` (17 significant digits).
pub fn render(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Float17);
    serde::Serialize::serialize(v, &mut ser).expect("serializing a Value into memory cannot fail");
    let mut s = String::from_utf8(buf).expect("JSON output is UTF-8");
    s.push('\n');
    s
}

struct Float17;

impl serde_json::ser::Formatter for Float17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| complex_json(m[(r, c)])).collect()))
            .collect(),
    )
}

fn basis_name(f: &OperatorBasis) -> &'static str {
    f.label().as_str()
}

fn basis_json(f: &OperatorBasis) -> Value {
    match f.label() {
        BasisLabel::Custom => json!({ "custom": f.elements().iter().map(matrix_json).collect::<Vec<_>>() }),
        other => json!(other.as_str()),
    }
}

/// A loaded channel: its superoperator, plus the Kraus operators if given.
#[derive(Debug, Clone)]
pub struct LoadedChannel {
    pub superop: SuperOp,
    pub kraus: Option<Vec<CMatrix>>,
}

fn read_json(file: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| Failure::Input(format!("{}: {e}", file.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", file.display())))
}

pub fn load_channel(file: &Path) -> Result<LoadedChannel, Failure> {
    let v = read_json(file)?;
    parse_channel_value(&v).map_err(|f| match f {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", file.display())),
        other => other,
    })
}

fn field<'a>(obj: &'a Value, name: &str) -> Result<&'a Value, Failure> {
    obj.get(name)
        .ok_or_else(|| Failure::Input(format!("field `{name}`: missing")))
}

fn parse_usize(v: &Value, path: &str) -> Result<usize, Failure> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Failure::Input(format!("field `{path}`: expected a non-negative integer")))
}

pub fn parse_channel_value(v: &Value) -> Result<LoadedChannel, Failure> {
    if !v.is_object() {
        return Err(Failure::Input("expected a JSON object at the top level".into()));
    }
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| Failure::Input("field `kind`: expected a string".into()))?;
    let n = parse_usize(field(v, "dim")?, "dim")?;
    if n == 0 {
        return Err(Failure::Input("field `dim`: must be positive".into()));
    }
    let payload = field(v, "payload")?;
    let d = n * n;
    match kind {
        "kraus" => {
            let arr = payload
                .as_array()
                .ok_or_else(|| Failure::Input("field `payload`: expected an array of matrices".into()))?;
            if arr.is_empty() {
                return Err(Failure::Input("field `payload`: no Kraus operators".into()));
            }
            let ops = arr
                .iter()
                .enumerate()
                .map(|(i, m)| {
                    let path = format!("payload[{i}]");
                    let a = parse_matrix(m, &path)?;
                    require_shape(&a, n, n, &path)?;
                    Ok(a)
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            let set = KrausSet::new(ops.clone())?;
            Ok(LoadedChannel {
                superop: if set.is_empty() { SuperOp::new(CMatrix::zeros(d, d))? } else { superop_from_kraus(&set) },
                kraus: Some(ops),
            })
        }
        "superop" | "choi" | "gks" => {
            let m = parse_matrix(payload, "payload")?;
            require_shape(&m, d, d, "payload")?;
            let superop = match kind {
                "superop" => SuperOp::new(m)?,
                "choi" => choi_inverse(&GksMatrix::new(m, standard_basis(n))?)?,
                _ => {
                    let b = parse_basis_value(field(v, "basis")?, n, "basis")?;
                    gks_inverse(&GksMatrix::new(m, b)?)
                }
            };
            Ok(LoadedChannel { superop, kraus: None })
        }
        other => Err(Failure::Input(format!(
            "field `kind`: unknown kind `{other}` (expected kraus, superop, choi or gks)"
        ))),
    }
}

fn require_shape(m: &CMatrix, rows: usize, cols: usize, path: &str) -> Result<(), Failure> {
    if m.rows() != rows || m.cols() != cols {
        return Err(Failure::Input(format!(
            "field `{path}`: expected {rows}x{cols}, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

fn parse_complex(v: &Value, path: &str) -> Result<Complex64, Failure> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(Failure::Input(format!("field `{path}`: expected numbers in [re, im]"))),
        },
        _ => Err(Failure::Input(format!(
            "field `{path}`: expected a number or an [re, im] pair"
        ))),
    }
}

pub fn parse_matrix(v: &Value, path: &str) -> Result<CMatrix, Failure> {
    let rows = v
        .as_array()
        .ok_or_else(|| Failure::Input(format!("field `{path}`: expected an array of rows")))?;
    if rows.is_empty() {
        return Err(Failure::Input(format!("field `{path}`: empty matrix")));
    }
    let mut out = Vec::with_capacity(rows.len());
    let mut width = None;
    for (r, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| Failure::Input(format!("field `{path}[{r}]`: expected an array")))?;
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Failure::Input(format!(
                    "field `{path}[{r}]`: ragged row with {} entries, expected {w}",
                    cells.len()
                )))
            }
            _ => {}
        }
        let parsed = cells
            .iter()
            .enumerate()
            .map(|(c, z)| parse_complex(z, &format!("{path}[{r}][{c}]")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    CMatrix::from_rows(out).map_err(|e| Failure::Input(format!("field `{path}`: {e}")))
}

fn parse_basis_value(v: &Value, n: usize, path: &str) -> Result<OperatorBasis, Failure> {
    if let Some(name) = v.as_str() {
        return named_basis(name, n)
            .ok_or_else(|| Failure::Input(format!("field `{path}`: unknown basis `{name}`")));
    }
    let (elements, epath) = if let Some(arr) = v.get("custom").or_else(|| v.get("elements")) {
        let key = if v.get("custom").is_some() { "custom" } else { "elements" };
        (arr, format!("{path}.{key}"))
    } else {
        (v, path.to_string())
    };
    let arr = elements
        .as_array()
        .ok_or_else(|| Failure::Input(format!("field `{epath}`: expected an array of matrices")))?;
    let mats = arr
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let p = format!("{epath}[{i}]");
            let a = parse_matrix(m, &p)?;
            require_shape(&a, n, n, &p)?;
            Ok(a)
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    OperatorBasis::custom(mats).map_err(|e| Failure::Input(format!("field `{epath}`: {e}")))
}

fn named_basis(name: &str, n: usize) -> Option<OperatorBasis> {
    match name {
        "standard" => Some(standard_basis(n)),
        "gellmann" | "pauli" => Some(gellmann_basis(n)),
        _ => None,
    }
}

/// `standard`, `gellmann`, or a path to a basis file.
pub fn resolve_basis(arg: &str, n: usize) -> Result<OperatorBasis, Failure> {
    if let Some(b) = named_basis(arg, n) {
        return Ok(b);
    }
    let path = Path::new(arg);
    let v = read_json(path)?;
    parse_basis_value(&v, n, "basis").map_err(|f| match f {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn load_model(file: &Path) -> Result<OpenSystemModel, Failure> {
    let v = read_json(file)?;
    parse_model_value(&v).map_err(|f| match f {
        Failure::Input(m) => Failure::Input(format!("{}: {m}", file.display())),
        other => other,
    })
}

pub fn parse_model_value(v: &Value) -> Result<OpenSystemModel, Failure> {
    if !v.is_object() {
        return Err(Failure::Input("expected a JSON object at the top level".into()));
    }
    let n = parse_usize(field(v, "n")?, "n")?;
    let m = parse_usize(field(v, "m")?, "m")?;
    if n == 0 || m == 0 {
        return Err(Failure::Input("fields `n` and `m` must be positive".into()));
    }
    let mut parts = Vec::new();
    for (name, d) in [("h_s", n), ("h_e", m), ("h_se", n * m)] {
        let x = parse_matrix(field(v, name)?, name)?;
        require_shape(&x, d, d, name)?;
        let err = x.hermiticity_error();
        if err > crate::opensys::MODEL_HERMITICITY_TOL {
            return Err(Failure::Input(format!("field `{name}`: not Hermitian (deviation {err:e})")));
        }
        parts.push(x);
    }
    let env = match v.get("env_state_index") {
        None | Some(Value::Null) => 0,
        Some(x) => parse_usize(x, "env_state_index")?,
    };
    let h_se = parts.pop().expect("three parts");
    let h_e = parts.pop().expect("three parts");
    let h_s = parts.pop().expect("three parts");
    Ok(OpenSystemModel::new(h_s, h_e, h_se, env)?)
}

/// Writes a model file in the input schema.
pub fn model_json(model: &OpenSystemModel) -> Value {
    json!({
        "n": model.n(),
        "m": model.m(),
        "h_s": matrix_json(model.h_s()),
        "h_e": matrix_json(model.h_e()),
        "h_se": matrix_json(model.h_se()),
        "env_state_index": model.env_state_index(),
    })
}
