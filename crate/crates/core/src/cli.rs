//! Command-line front end: point files in, reports and certificates out.
//!
//! Exit codes: 0 success, 1 invalid certificate, 2 bad input, 3 no
//! certificate found.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds::{es_bound, es_kl_bound, quadrilateral_threshold, threshold_k};
use crate::convexity::{max_convex_position_subset, max_strictly_convex_subset, onion_layers, q_formula};
use crate::error::Error;
use crate::extractor::{extract, ExtractionParams, Outcome, TraceStep};
use crate::generators;
use crate::geometry::{all_collinear, max_collinear, Point, PointSet, COORD_LIMIT};
use crate::holes::{check_hole, find_k_hole, largest_hole_size};
use crate::oracle::oracle_is_hole;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "pentagon",
    version,
    about = "Collinear points, convex position and empty pentagons in integer point sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarise a point file.
    Analyze { input: PathBuf },
    /// Find `ell` collinear points or a 5-hole and print a certificate.
    Extract {
        input: PathBuf,
        /// Number of collinear points that counts as a certificate.
        #[arg(long)]
        ell: usize,
        /// Outer layer size; defaults to the threshold for `ell`, reduced to
        /// what the input supports.
        #[arg(long)]
        k: Option<usize>,
        /// Do not run the complete 5-hole search when the layer walk ends
        /// without a certificate.
        #[arg(long)]
        no_fallback: bool,
        /// Embed the step-by-step trace in the certificate.
        #[arg(long)]
        trace: bool,
        /// Point file with the starting outer layer.
        #[arg(long)]
        outer: Option<PathBuf>,
        /// Write the certificate here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated point set.
    Generate {
        /// every_second_side, grid, horton, collinear_plus_one,
        /// eppstein_family_a_b, eppstein_family_c_d, eppstein_family_e,
        /// random_general_position, random_bounded_collinear or
        /// random_convex_position.
        family: String,
        /// Integer parameters of the family, e.g. `k ell` or `n`.
        params: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against a point file.
    Verify { input: PathBuf, certificate: PathBuf },
    /// Print the bound formulas for `k` and `ell`.
    Bounds { k: u64, ell: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Collinear,
    Hole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub kind: CertificateKind,
    pub parameter: usize,
    pub points: Vec<Point>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceStep>>,
    pub tool_version: String,
}

/// A failure that ends the command with a given exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::input(e.to_string())
    }
}

/// Parses the point-file format: one `x y` pair per line, `#` comments and
/// blank lines ignored, duplicates rejected.
pub fn parse_points(text: &str) -> Result<PointSet, String> {
    let mut seen: HashMap<Point, usize> = HashMap::new();
    let mut points = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [xs, ys] = fields.as_slice() else {
            return Err(format!("line {line_no}: expected two integers, found {}", fields.len()));
        };
        let parse = |s: &str| {
            s.parse::<i64>()
                .map_err(|_| format!("line {line_no}: '{s}' is not a decimal integer"))
        };
        let p = Point::new(parse(xs)?, parse(ys)?);
        if p.x.abs() >= COORD_LIMIT || p.y.abs() >= COORD_LIMIT {
            return Err(format!("line {line_no}: coordinate outside the supported range"));
        }
        if let Some(first) = seen.insert(p, line_no) {
            return Err(format!("line {line_no}: duplicate point {p} (first on line {first})"));
        }
        points.push(p);
    }
    PointSet::new(points).map_err(|e| e.to_string())
}

pub fn format_points(points: &[Point]) -> String {
    let mut out = String::new();
    for p in points {
        writeln!(out, "{} {}", p.x, p.y).expect("writing to a string");
    }
    out
}

fn load_points(path: &Path) -> Result<PointSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_points(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("writing output: {e}"))),
    }
}

fn analyze(points: &PointSet) -> Result<String, Failure> {
    let mut r = String::new();
    writeln!(r, "points: {}", points.len()).unwrap();
    if points.is_empty() {
        return Ok(r);
    }
    let (collinear, witness) = max_collinear(points)?;
    let line: Vec<String> = witness.iter().map(Point::to_string).collect();
    writeln!(r, "max_collinear: {collinear} [{}]", line.join(", ")).unwrap();
    writeln!(r, "max_convex_subset: {}", max_convex_position_subset(points).len()).unwrap();
    writeln!(
        r,
        "max_strictly_convex_subset: {}",
        max_strictly_convex_subset(points).len()
    )
    .unwrap();
    let largest = if points.len() < 3 || all_collinear(points) {
        0
    } else {
        largest_hole_size(points)
    };
    writeln!(r, "largest_hole: {largest}").unwrap();
    for k in 3..=7 {
        let found = k <= largest;
        writeln!(r, "has_{k}_hole: {}", if found { "yes" } else { "no" }).unwrap();
    }
    let sizes: Vec<String> = onion_layers(points).iter().map(|l| l.len().to_string()).collect();
    writeln!(r, "convex_layers: [{}]", sizes.join(", ")).unwrap();
    Ok(r)
}

fn certificate_json(doc: &CertificateDocument) -> String {
    let mut text = serde_json::to_string(doc).expect("certificate serializes");
    text.push('\n');
    text
}

struct ExtractArgs<'a> {
    ell: usize,
    k: Option<usize>,
    no_fallback: bool,
    trace: bool,
    outer: Option<&'a Path>,
}

fn run_extract(points: &PointSet, args: &ExtractArgs<'_>) -> Result<(i32, String), Failure> {
    if args.ell < 2 {
        return Err(Failure::input(format!("--ell must be at least 2, got {}", args.ell)));
    }
    if points.len() < 3 {
        return Err(Failure::input(format!("{} points, need at least 3", points.len())));
    }
    let mut params = ExtractionParams::new(args.ell);
    params.k = args.k;
    params.oracle_fallback = !args.no_fallback;
    if let Some(path) = args.outer {
        let outer = load_points(path)?;
        if !points.is_superset_of(&outer) {
            return Err(Failure::input("outer layer contains points not in the input"));
        }
        params.outer_layer = Some(outer.into_vec());
    }
    let result = extract(points, &params)?;
    let trace = args.trace.then(|| result.trace.clone());
    let (kind, parameter, cert_points, verified) = match &result.outcome {
        Outcome::Collinear(c) => {
            let ok = c.points().iter().all(|p| points.contains(p)) && all_collinear(c.points());
            (CertificateKind::Collinear, c.ell(), c.points().to_vec(), ok)
        }
        Outcome::Hole(h) => {
            let ok = oracle_is_hole(points, h.vertices()) && check_hole(points, h.vertices()).is_ok();
            (CertificateKind::Hole, h.k(), h.vertices().to_vec(), ok)
        }
        Outcome::Absent | Outcome::Inconclusive => {
            let what = if matches!(result.outcome, Outcome::Absent) {
                "absent: no 5-hole and fewer than ell collinear points"
            } else {
                "inconclusive: layer walk ended without a certificate"
            };
            let mut text = format!("{what}\n");
            if let Some(steps) = trace {
                text.push_str(&serde_json::to_string(&steps).expect("trace serializes"));
                text.push('\n');
            }
            return Ok((EXIT_INCONCLUSIVE, text));
        }
    };
    let doc = CertificateDocument {
        kind,
        parameter,
        points: cert_points,
        verified,
        trace,
        tool_version: TOOL_VERSION.to_string(),
    };
    let code = if verified { EXIT_OK } else { EXIT_INVALID };
    Ok((code, certificate_json(&doc)))
}

fn param(params: &[i64], index: usize, name: &str, family: &str) -> Result<usize, Failure> {
    let value = *params
        .get(index)
        .ok_or_else(|| Failure::input(format!("{family}: missing parameter {name}")))?;
    usize::try_from(value).map_err(|_| Failure::input(format!("{family}: {name} must be non-negative, got {value}")))
}

fn expect_params(params: &[i64], count: usize, family: &str) -> Result<(), Failure> {
    if params.len() != count {
        return Err(Failure::input(format!(
            "{family} takes {count} parameter(s), got {}",
            params.len()
        )));
    }
    Ok(())
}

/// Builds a family member and a short report of its checked properties.
pub fn generate(family: &str, params: &[i64], seed: u64) -> Result<(PointSet, String), Failure> {
    let mut report = String::new();
    let set = match family {
        "every_second_side" | "every_second_side_odd" | "every_second_side_even" => {
            expect_params(params, 2, family)?;
            let (k, ell) = (param(params, 0, "k", family)?, param(params, 1, "ell", family)?);
            if family.ends_with("_odd") && k % 2 == 0 || family.ends_with("_even") && k % 2 == 1 {
                return Err(Failure::input(format!("{family}: k = {k} has the wrong parity")));
            }
            let set = generators::every_second_side(k, ell)?;
            let strict = max_strictly_convex_subset(&set).len();
            writeln!(report, "max_strictly_convex_subset: {strict} (< k = {k})").unwrap();
            writeln!(report, "q(k, ell): {}", q_formula(k as u64, ell as u64)).unwrap();
            set
        }
        "grid" => {
            expect_params(params, 1, family)?;
            let set = generators::grid(param(params, 0, "m", family)?)?;
            if set.len() <= 36 {
                let five = find_k_hole(&set, 5)?.is_some();
                writeln!(report, "has_5_hole: {}", if five { "yes" } else { "no" }).unwrap();
            }
            set
        }
        "horton" => {
            expect_params(params, 1, family)?;
            let set = generators::horton(param(params, 0, "n", family)?)?;
            writeln!(report, "general_position: yes").unwrap();
            if set.len() <= 64 {
                let clean = generators::has_no_seven_hole(&set)?;
                writeln!(report, "has_7_hole: {}", if clean { "no" } else { "yes" }).unwrap();
            }
            set
        }
        "collinear_plus_one" => {
            expect_params(params, 1, family)?;
            let set = generators::collinear_plus_one(param(params, 0, "ell", family)?)?;
            writeln!(
                report,
                "max_strictly_convex_subset: {}",
                max_strictly_convex_subset(&set).len()
            )
            .unwrap();
            set
        }
        "eppstein_family_a_b" => {
            let count = param(params, 0, "count", family)?;
            let apex = match params.get(1) {
                None | Some(0) => false,
                Some(1) => true,
                Some(v) => return Err(Failure::input(format!("{family}: apex must be 0 or 1, got {v}"))),
            };
            if params.len() > 2 {
                return Err(Failure::input(format!("{family} takes 1 or 2 parameters")));
            }
            generators::eppstein_family_a_b(count, apex)?
        }
        "eppstein_family_c_d" => {
            expect_params(params, 2, family)?;
            generators::eppstein_family_c_d(param(params, 0, "count", family)?, params[1])?
        }
        "eppstein_family_e" => {
            expect_params(params, 0, family)?;
            generators::eppstein_family_e()?
        }
        "random_general_position" => {
            expect_params(params, 1, family)?;
            generators::random_general_position(param(params, 0, "n", family)?, seed)?
        }
        "random_bounded_collinear" => {
            expect_params(params, 2, family)?;
            generators::random_bounded_collinear(
                param(params, 0, "n", family)?,
                param(params, 1, "ell", family)?,
                seed,
            )?
        }
        "random_convex_position" => {
            expect_params(params, 2, family)?;
            generators::random_convex_position(param(params, 0, "k", family)?, param(params, 1, "ell", family)?, seed)?
        }
        other => return Err(Failure::input(format!("unknown family '{other}'"))),
    };
    if family.starts_with("eppstein") {
        let four = find_k_hole(&set, 4)?.is_some();
        writeln!(report, "has_4_hole: {}", if four { "yes" } else { "no" }).unwrap();
    }
    let mut header = format!("family: {family}\npoints: {}\n", set.len());
    if !set.is_empty() {
        writeln!(header, "max_collinear: {}", max_collinear(&set)?.0).unwrap();
    }
    header.push_str(&report);
    Ok((set, header))
}

/// Checks a certificate; `Err` carries the first violated condition.
pub fn verify_certificate(points: &PointSet, doc: &CertificateDocument) -> Result<(), String> {
    if doc.points.len() != doc.parameter {
        return Err(format!(
            "parameter {} does not match {} certificate points",
            doc.parameter,
            doc.points.len()
        ));
    }
    if let Some(p) = doc.points.iter().find(|p| !points.contains(p)) {
        return Err(format!("point {p} not in point set"));
    }
    match doc.kind {
        CertificateKind::Collinear => {
            let mut sorted = doc.points.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != doc.points.len() {
                return Err("repeated point".into());
            }
            if doc.points.len() < 2 || !all_collinear(&doc.points) {
                return Err("points not collinear".into());
            }
            Ok(())
        }
        CertificateKind::Hole => {
            check_hole(points, &doc.points).map_err(|v| v.to_string())?;
            if !oracle_is_hole(points, &doc.points) {
                return Err("hull not empty".into());
            }
            Ok(())
        }
    }
}

fn bounds_report(k: u64, ell: u64) -> Result<String, Failure> {
    if k < 3 || ell < 3 {
        return Err(Failure::input(format!(
            "bounds need k >= 3 and ell >= 3, got ({k}, {ell})"
        )));
    }
    let strict = es_kl_bound(k, ell)?;
    let ell32 = u32::try_from(ell).map_err(|_| Failure::input("ell too large"))?;
    let mut r = String::new();
    writeln!(r, "es_bound({k}) = {}", es_bound(k)?).unwrap();
    writeln!(
        r,
        "es_kl_bound({k}, {ell}) via convex subset = {}",
        strict.convex_to_strict
    )
    .unwrap();
    writeln!(
        r,
        "es_kl_bound({k}, {ell}) via general position subset = {}",
        strict.general_position
    )
    .unwrap();
    let winner = serde_json::to_value(strict.winner).expect("serializes");
    writeln!(
        r,
        "es_kl_bound({k}, {ell}) smaller = {}",
        winner.as_str().unwrap_or_default()
    )
    .unwrap();
    writeln!(r, "q({k}, {ell}) = {}", q_formula(k, ell)).unwrap();
    writeln!(r, "threshold_k({ell}) = {}", threshold_k(ell32)?).unwrap();
    writeln!(r, "quadrilateral_threshold({ell}) = {}", quadrilateral_threshold(ell)).unwrap();
    Ok(r)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze { input } => {
            let points = load_points(&input)?;
            emit(out, None, &analyze(&points)?)?;
            Ok(EXIT_OK)
        }
        Command::Extract {
            input,
            ell,
            k,
            no_fallback,
            trace,
            outer,
            out: out_path,
        } => {
            let points = load_points(&input)?;
            let args = ExtractArgs {
                ell,
                k,
                no_fallback,
                trace,
                outer: outer.as_deref(),
            };
            let (code, text) = run_extract(&points, &args)?;
            if code == EXIT_OK {
                emit(out, out_path.as_deref(), &text)?;
            } else {
                emit(out, None, &text)?;
            }
            Ok(code)
        }
        Command::Generate {
            family,
            params,
            seed,
            out: out_path,
        } => {
            let (set, report) = generate(&family, &params, seed)?;
            match out_path {
                Some(path) => {
                    emit(out, Some(&path), &format_points(&set))?;
                    emit(out, None, &report)?;
                }
                None => {
                    emit(out, None, &format_points(&set))?;
                    eprint!("{report}");
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { input, certificate } => {
            let points = load_points(&input)?;
            let text = fs::read_to_string(&certificate)
                .map_err(|e| Failure::input(format!("{}: {e}", certificate.display())))?;
            let doc: CertificateDocument =
                serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", certificate.display())))?;
            match verify_certificate(&points, &doc) {
                Ok(()) => {
                    emit(out, None, "valid\n")?;
                    Ok(EXIT_OK)
                }
                Err(reason) => Err(Failure {
                    code: EXIT_INVALID,
                    message: format!("invalid certificate: {reason}"),
                }),
            }
        }
        Command::Bounds { k, ell } => {
            emit(out, None, &bounds_report(k, ell)?)?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs a parsed command, writing normal output to `out` and failures to
/// stderr. Returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let set = parse_points("# header\n1 2\n\n  3 4  \n# x\n").unwrap();
        assert_eq!(set.points(), &[Point::new(1, 2), Point::new(3, 4)]);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_points("0 0\n1 1\n0 0\n").unwrap_err();
        assert!(err.contains("line 3") && err.contains("line 1"), "{err}");
        let err = parse_points("0 0\n1 x\n").unwrap_err();
        assert!(err.starts_with("line 2"), "{err}");
        assert!(parse_points("1 2 3\n").is_err());
    }

    #[test]
    fn bounds_five_three() {
        let r = bounds_report(5, 3).unwrap();
        assert!(r.contains("es_bound(5) = 11"));
        assert!(r.contains("q(5, 3) = 5"));
        assert!(r.contains("quadrilateral_threshold(3) = 7"));
        assert!(bounds_report(9, 6).unwrap().contains("q(9, 6) = 21"));
        assert!(bounds_report(3, 4).unwrap().contains("threshold_k(4) = 400"));
    }

    #[test]
    fn generate_sizes() {
        assert_eq!(generate("every_second_side", &[9, 6], 0).unwrap().0.len(), 20);
        assert_eq!(generate("grid", &[4], 0).unwrap().0.len(), 16);
        let (h, report) = generate("horton", &[16], 0).unwrap();
        assert_eq!(h.len(), 16);
        assert!(report.contains("has_7_hole: no"));
        assert!(generate("every_second_side_odd", &[8, 6], 0).is_err());
        assert!(generate("nope", &[], 0).is_err());
    }

    #[test]
    fn analyze_small_line() {
        let set = parse_points("0 0\n1 1\n2 2\n").unwrap();
        let r = analyze(&set).unwrap();
        assert!(r.contains("max_collinear: 3"));
        assert!(r.contains("max_strictly_convex_subset: 2"));
    }

    #[test]
    fn verify_names_violations() {
        let set = parse_points("0 0\n4 0\n4 4\n0 4\n2 2\n2 0\n").unwrap();
        let doc = |pts: &[(i64, i64)]| CertificateDocument {
            kind: CertificateKind::Hole,
            parameter: pts.len(),
            points: pts.iter().map(|&c| Point::from(c)).collect(),
            verified: true,
            trace: None,
            tool_version: TOOL_VERSION.into(),
        };
        let flat = verify_certificate(&set, &doc(&[(0, 0), (2, 0), (4, 0), (2, 2)])).unwrap_err();
        assert_eq!(flat, "not strictly convex");
        let full = verify_certificate(&set, &doc(&[(0, 0), (4, 0), (4, 4), (0, 4)])).unwrap_err();
        assert!(full.starts_with("hull not empty"), "{full}");
        assert!(verify_certificate(&set, &doc(&[(0, 0), (2, 0), (2, 2)])).is_ok());
    }
}
