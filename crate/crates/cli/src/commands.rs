//! Subcommands: argument definitions and report assembly.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use etd_core::basechange::BaseChangeConfig;
use etd_core::cartier::FrobeniusBase;
use etd_core::degeneration::Differential;
use etd_core::error::EtdError;
use etd_core::etd::{Etd, FacetSpec, OneDimensionalCase};
use etd_core::forms::{MonoidIdeal, ReductionMode, Ring, WValue};
use etd_core::lattice::int::is_prime_u64;
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog;
use crate::format::{fingerprint, EtdFile, LoadError, ParseError};
use crate::report::{OutputFormat, Report};

#[derive(Parser, Debug)]
#[command(name = "etd", version, about = "Checks and invariants of elementary log toroidal data")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub format: OutputFormat,
    /// Worker threads; all cores if absent.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Path to an ETD JSON file.
    #[arg(required_unless_present = "example", conflicts_with = "example")]
    pub path: Option<PathBuf>,
    /// A built-in catalog entry instead of a file.
    #[arg(long, value_parser = catalog::NAMES)]
    pub example: Option<String>,
    /// Override the facet set of the input.
    #[arg(long, value_enum)]
    pub facets: Option<FacetsArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FacetsArg {
    Min,
    Max,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Relative,
    Reductions,
}

impl From<ModeArg> for ReductionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Relative => ReductionMode::RelativeModule,
            ModeArg::Reductions => ReductionMode::IntersectionOfReductions,
        }
    }
}

/// `field`, `max` (the ideal `Q⁺`) or `k` for `k·Q⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealArg {
    Field,
    Max,
    Power(usize),
}

fn parse_ideal(s: &str) -> Result<IdealArg, String> {
    match s {
        "field" => Ok(IdealArg::Field),
        "max" => Ok(IdealArg::Max),
        _ => match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(IdealArg::Power(k)),
            _ => Err(format!("expected field, max or a positive integer, found {s:?}")),
        },
    }
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_prime_u64(p) {
        Ok(p)
    } else {
        Err(format!("{p} is not prime"))
    }
}

fn parse_characteristic(s: &str) -> Result<u64, String> {
    if s == "0" {
        Ok(0)
    } else {
        parse_prime(s)
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Validate the input and describe its faces and charts.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Graded pieces of the log differential modules per face class.
    Wforms {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// 0 for the lattice over ℤ, or a prime.
        #[arg(long = "char", default_value = "0", value_parser = parse_characteristic)]
        characteristic: u64,
        #[arg(long)]
        window: Option<u64>,
        /// Absolute instead of relative forms.
        #[arg(long)]
        absolute: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Relative)]
        mode: ModeArg,
    },
    /// Base change to the given characteristics and the bound p₀.
    Basechange {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7", value_parser = parse_prime)]
        primes: Vec<u64>,
        /// Window for the element-level cross-check.
        #[arg(long)]
        window: Option<u64>,
        /// Multiple of the generator sum used as chart point.
        #[arg(long, default_value_t = 1)]
        scale: u64,
    },
    /// The Frobenius decomposition in characteristic p.
    Frobenius {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long, default_value = "field", value_parser = parse_ideal)]
        ideal: IdealArg,
        #[arg(long)]
        window: Option<u64>,
    },
    /// Acyclicity of the kernel complex over a one-dimensional base.
    Kcomplex {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        mt: Option<usize>,
        #[arg(long)]
        window: Option<u64>,
        #[arg(long)]
        ubound: Option<usize>,
        /// Also run the differential without its u-term, which must fail.
        #[arg(long)]
        control: bool,
    },
    /// Windowed dimension totals of the fiber complexes.
    Hodge {
        #[command(flatten)]
        input: Input,
        #[arg(long = "char", default_value = "0", value_parser = parse_characteristic)]
        characteristic: u64,
        #[arg(long)]
        window: Option<u64>,
        #[arg(long, value_enum, default_value_t = ModeArg::Relative)]
        mode: ModeArg,
        #[arg(long, default_value = "max", value_parser = parse_ideal)]
        ideal: IdealArg,
    },
}

/// Failures that stop a command before it produces verdicts.
#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse(ParseError),
    /// The input is an ETD but the command does not apply to it.
    Precondition(EtdError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        match self {
            CliError::Io(s) => f.write_str(s),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Precondition(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl From<EtdError> for CliError {
    fn from(e: EtdError) -> Self {
        CliError::Precondition(e)
    }
}

fn read_input(input: &Input) -> Result<EtdFile, CliError> {
    let text = match (&input.path, &input.example) {
        (_, Some(name)) => catalog::source(name).ok_or_else(|| CliError::Io(format!("unknown example {name}")))?.to_string(),
        (Some(p), None) => std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
        (None, None) => return Err(CliError::Io("no input given".into())),
    };
    EtdFile::parse(&text).map_err(CliError::Parse)
}

fn facet_override(input: &Input) -> Option<FacetSpec> {
    input.facets.map(|f| match f {
        FacetsArg::Min => FacetSpec::Min,
        FacetsArg::Max => FacetSpec::Max,
    })
}

fn show(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn face_generators(etd: &Etd, face: usize) -> Vec<Vec<String>> {
    etd.p().face(face).generators.iter().map(|&i| show(&etd.p().generators()[i])).collect()
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Wforms { .. } => "wforms",
            Command::Basechange { .. } => "basechange",
            Command::Frobenius { .. } => "frobenius",
            Command::Kcomplex { .. } => "kcomplex",
            Command::Hodge { .. } => "hodge",
        }
    }

    fn input(&self) -> &Input {
        match self {
            Command::Validate { input }
            | Command::Wforms { input, .. }
            | Command::Basechange { input, .. }
            | Command::Frobenius { input, .. }
            | Command::Kcomplex { input, .. }
            | Command::Hodge { input, .. } => input,
        }
    }

    fn args(&self, file: &EtdFile) -> BTreeMap<String, Value> {
        let input = self.input();
        let mut a = BTreeMap::new();
        match (&input.path, &input.example) {
            (_, Some(e)) => a.insert("example".into(), json!(e)),
            (Some(p), None) => a.insert("path".into(), json!(p.display().to_string())),
            _ => None,
        };
        if let Some(f) = input.facets {
            a.insert("facets".into(), json!(format!("{f:?}").to_lowercase()));
        }
        let w = file.window();
        match self {
            Command::Validate { .. } => {}
            Command::Wforms { m, characteristic, window, absolute, mode, .. } => {
                a.insert("m".into(), json!(m));
                a.insert("char".into(), json!(characteristic));
                a.insert("window".into(), json!(window.unwrap_or(w)));
                a.insert("absolute".into(), json!(absolute));
                a.insert("mode".into(), json!(format!("{mode:?}").to_lowercase()));
            }
            Command::Basechange { primes, window, scale, .. } => {
                a.insert("primes".into(), json!(primes));
                a.insert("window".into(), json!(window.unwrap_or(w)));
                a.insert("scale".into(), json!(scale));
            }
            Command::Frobenius { p, ideal, window, .. } => {
                a.insert("p".into(), json!(p));
                a.insert("ideal".into(), json!(format!("{ideal:?}").to_lowercase()));
                a.insert("window".into(), json!(window.unwrap_or(w)));
            }
            Command::Kcomplex { mt, window, ubound, control, .. } => {
                a.insert("mt".into(), json!(mt.or(file.m_t).unwrap_or(1)));
                a.insert("window".into(), json!(window.unwrap_or(w)));
                a.insert("ubound".into(), json!(ubound.or(file.u_bound).unwrap_or(6)));
                a.insert("control".into(), json!(control));
            }
            Command::Hodge { characteristic, window, mode, ideal, .. } => {
                a.insert("char".into(), json!(characteristic));
                a.insert("window".into(), json!(window.unwrap_or(w)));
                a.insert("mode".into(), json!(format!("{mode:?}").to_lowercase()));
                a.insert("ideal".into(), json!(format!("{ideal:?}").to_lowercase()));
            }
        }
        a
    }
}

#[derive(Serialize)]
struct ErrorDetail {
    error: String,
    kind: String,
}

/// Runs a command to a report; `Err` means exit code 2.
pub fn run(command: &Command) -> Result<Report, CliError> {
    let start = Instant::now();
    let file = read_input(command.input())?;
    let args = command.args(&file);
    let loaded = file.load(facet_override(command.input()));
    let etd = match loaded {
        Err(LoadError::Parse(e)) => return Err(CliError::Parse(e)),
        Err(LoadError::Invalid(e)) => {
            let mut r = Report::new(command.name(), args, &file.name, fingerprint(&file, None));
            let detail = ErrorDetail {
                error: e.to_string(),
                kind: format!("{e:?}"),
            };
            r.witness(&detail);
            r.verdict("valid", false, detail);
            r.timing.elapsed_ms = start.elapsed().as_millis() as u64;
            return Ok(r);
        }
        Ok(etd) => etd,
    };
    let mut r = Report::new(command.name(), args.clone(), &file.name, fingerprint(&file, Some(&etd)));
    let window = |w: &Option<u64>| w.unwrap_or(file.window());
    match command {
        Command::Validate { .. } => validate(&mut r, &etd),
        Command::Wforms { m, characteristic, window: w, absolute, mode, .. } => {
            wforms(&mut r, &etd, *m, *characteristic, window(w), *absolute, (*mode).into())?
        }
        Command::Basechange { primes, window: w, scale, .. } => basechange(&mut r, &etd, primes, window(w), *scale)?,
        Command::Frobenius { p, ideal, window: w, .. } => frobenius(&mut r, &etd, *p, *ideal, window(w))?,
        Command::Kcomplex { control, .. } => {
            let get = |k: &str| args[k].as_u64().expect("numeric argument");
            kcomplex(&mut r, &etd, get("mt") as usize, get("window"), get("ubound") as usize, *control)?
        }
        Command::Hodge { characteristic, window: w, mode, ideal, .. } => {
            hodge(&mut r, &etd, *characteristic, window(w), (*mode).into(), *ideal)?
        }
    }
    r.timing.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(r)
}

fn validate(r: &mut Report, etd: &Etd) {
    let cert = etd.certificate();
    r.verdict("valid", true, json!({ "certified_up_to": cert.window, "elements_checked": cert.elements_checked }));
    let cover = etd.cover_up();
    r.verdict("cover", cover.ok, &cover);
    let classes = etd.classify_facets();
    let f_max: Vec<usize> = (0..etd.p().facets().len()).collect();
    r.dim("d", etd.d());
    r.dim("rank", etd.p().rank());
    r.dim("ambient_rank", etd.p().ambient_rank());
    r.dim("facets", etd.p().facets().len());
    r.dim("faces", etd.p().faces().len());
    r.dim("f", etd.facet_set());
    r.dim("f_min", etd.f_min());
    r.dim("f_min_empty", etd.f_min().is_empty());
    r.dim("log_smooth", etd.facet_set().iter().copied().collect::<Vec<_>>() == f_max);
    r.dim(
        "one_dimensional_case",
        etd.one_dimensional_case().map(|c| match c {
            OneDimensionalCase::AllFacets => "all_facets",
            OneDimensionalCase::ProductWithN => "product_with_n",
            OneDimensionalCase::Neither => "neither",
        }),
    );
    r.dim("essential_faces", etd.essential_face_ids().len());
    r.dim("bad_faces", etd.bad_faces().ids());
    for (j, f) in etd.p().facets().iter().enumerate() {
        let class = if classes.vertical.contains(&j) {
            "vertical"
        } else if classes.horizontal.contains(&j) {
            "horizontal"
        } else {
            "unused"
        };
        r.witness(json!({
            "kind": "facet",
            "id": j,
            "class": class,
            "normal": show(&f.normal),
            "generators": f.generators,
        }));
    }
    for f in etd.essential_faces() {
        r.witness(json!({
            "kind": "essential_face",
            "id": f.face,
            "rank": f.rank,
            "in_cover": f.in_cover,
            "generators": face_generators(etd, f.face),
        }));
    }
    for b in etd.bad_faces().faces {
        r.witness(json!({
            "kind": "bad_face",
            "id": b.face,
            "essential_part": b.essential_part,
            "base_part": b.base_part,
            "generators": face_generators(etd, b.face),
        }));
    }
}

fn basis_strings(v: &WValue) -> Vec<Vec<String>> {
    match v {
        WValue::Integral(l) => l.basis().iter().map(|b| show(b)).collect(),
        WValue::Rational(s) => s.basis().iter().map(|b| b.iter().map(|x| x.to_string()).collect()).collect(),
        WValue::Modular(s) => s.basis().iter().map(|b| b.iter().map(|x| x.to_string()).collect()).collect(),
    }
}

fn wforms(r: &mut Report, etd: &Etd, m: usize, characteristic: u64, window: u64, absolute: bool, mode: ReductionMode) -> Result<(), CliError> {
    let ring = if characteristic == 0 { Ring::Integers } else { Ring::Prime(characteristic) };
    let degrees = etd.p().enumerate_up_to(etd.grading(), window);
    let mut by_face: BTreeMap<usize, (usize, &Vec<BigInt>)> = BTreeMap::new();
    for x in &degrees {
        let f = etd.p().face_of_internal(x).expect("x ∈ P");
        by_face.entry(f).or_insert((0, x)).0 += 1;
    }
    let mut ranks = Vec::new();
    for (face, (count, x)) in by_face {
        let w = if absolute {
            etd.w_absolute_internal(m, x, ring, mode)?
        } else {
            etd.w_relative_internal(m, x, ring, mode)?
        };
        ranks.push(w.rank());
        r.witness(json!({
            "face": face,
            "face_generators": face_generators(etd, face),
            "degree": show(&etd.p().to_ambient(x)),
            "degrees_in_window": count,
            "rank": w.rank(),
            "basis": basis_strings(&w.value),
        }));
    }
    r.verdict("computed", true, json!({ "face_classes": ranks.len() }));
    r.dim("ranks", ranks);
    r.dim("degrees", degrees.len());
    Ok(())
}

fn basechange(r: &mut Report, etd: &Etd, primes: &[u64], window: u64, scale: u64) -> Result<(), CliError> {
    let config = BaseChangeConfig { window, scale };
    let d = etd.d();
    let mut failed = Vec::new();
    for &p in primes {
        let mut pass = true;
        let mut count = 0;
        for m in 0..=d {
            let rep = etd.check_iso_condition(m, p, &config)?;
            count += rep.witnesses.len();
            pass &= rep.pass;
            for w in rep.failing() {
                r.witness(json!({
                    "prime": p,
                    "m": m,
                    "face": w.face,
                    "e": w.e,
                    "charts": w.charts,
                    "integral_rank": w.integral_rank,
                    "reduced_dim": w.reduced_dim,
                    "pass": false,
                }));
            }
            for e in &rep.cross_check_mismatches {
                r.witness(json!({ "prime": p, "m": m, "cross_check_mismatch": e, "pass": false }));
            }
        }
        if !pass {
            failed.push(p);
        }
        r.verdict(format!("p={p}"), pass, json!({ "witnesses_checked": count }));
    }
    let bound = etd.p0_bound(0..=d, &config)?;
    r.dim("p0", bound.p0);
    r.dim("obstruction_primes", &bound.primes);
    r.dim("candidates", &bound.candidates);
    r.dim("failing_primes", failed);
    Ok(())
}

fn ideal_for(etd: &Etd, ideal: IdealArg) -> MonoidIdeal {
    match ideal {
        IdealArg::Field | IdealArg::Max => MonoidIdeal::maximal(etd),
        IdealArg::Power(k) => MonoidIdeal::power_of_maximal(etd, k),
    }
}

fn frobenius(r: &mut Report, etd: &Etd, p: u64, ideal: IdealArg, window: u64) -> Result<(), CliError> {
    let base = match ideal {
        IdealArg::Field => FrobeniusBase::Field,
        _ => FrobeniusBase::Truncated(ideal_for(etd, ideal)),
    };
    let map = etd.frobenius_map(p, &base, window)?;
    r.verdict("frobenius_map", map.pass, json!({ "sources": map.entries.len(), "injective": map.injective }));
    let v = etd.verify_decomposition(p, &base, window)?;
    r.verdict("decomposition", v.pass, json!({ "rows": v.rows.len() }));
    let mut totals = vec![0usize; etd.d() + 1];
    let mut image = 0;
    for row in &v.rows {
        totals[row.m] += row.cohomology;
        if row.m == 0 && row.in_image {
            image += 1;
        }
        r.witness(row);
    }
    r.dim("cohomology_totals", totals);
    r.dim("image_degrees", image);
    Ok(())
}

fn kcomplex(r: &mut Report, etd: &Etd, m_t: usize, window: u64, n_u: usize, control: bool) -> Result<(), CliError> {
    let v = etd.verify_k_acyclic(m_t, window, n_u, Differential::Correct)?;
    r.verdict("k_acyclic", v.pass, json!({ "rows": v.rows.len() }));
    for row in &v.rows {
        r.witness(row);
    }
    let degrees: std::collections::BTreeSet<&Vec<String>> = v.rows.iter().map(|x| &x.degree).collect();
    r.dim("degrees", degrees.len());
    if control {
        let c = etd.verify_k_acyclic(m_t, window, n_u, Differential::DropRhoTerm)?;
        let failing = c.rows.iter().filter(|x| !x.pass).count();
        r.verdict("control_fails", !c.pass, json!({ "failing_rows": failing }));
    }
    Ok(())
}

fn hodge(r: &mut Report, etd: &Etd, characteristic: u64, window: u64, mode: ReductionMode, ideal: IdealArg) -> Result<(), CliError> {
    let k = ideal_for(etd, ideal);
    let h = etd.hodge_report(&k, characteristic, window, mode)?;
    r.verdict("hodge", h.pass, json!({ "flags": h.flags.len() }));
    r.dim("totals", &h.totals);
    r.dim("prediction", &h.prediction);
    r.dim("kernel_count", &h.kernel_count);
    for f in &h.flags {
        r.witness(json!({ "flag": true, "degree": f.degree, "integral_rank": f.integral_rank, "reduced_dim": f.reduced_dim }));
    }
    for row in &h.rows {
        r.witness(row);
    }
    Ok(())
}

/// Parses arguments, runs, renders; returns the output and exit code.
pub fn execute(cli: &Cli) -> (String, String, i32) {
    match run(&cli.command) {
        Ok(report) => (report.render(cli.format), String::new(), report.exit_code()),
        Err(e) => (String::new(), format!("error: {e}\n"), e.exit_code()),
    }
}
