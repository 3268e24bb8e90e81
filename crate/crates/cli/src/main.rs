//! `mu-domains`: JSON front end for membership, Schwarz feasibility, Lempert
//! values, interpolants and sweep campaigns.
//!
//! Exit codes: 0 interior / feasible / verified, 1 boundary, 2 exterior /
//! infeasible / not verified, 3 construction incomplete, 64 malformed input.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mu_domains::domains::{g2_membership, tetra_membership, TetraCriterion};
use mu_domains::interpolate::{
    build_interpolant_g2, build_interpolant_tetra, schur_matrix_witness, verify_interpolant,
    AnalyticDisc, Target, VERIFY_GRID,
};
use mu_domains::oracle::{equivalence_sweep, SweepConfig};
use mu_domains::schwarz::{
    g2_feasibility, lempert_origin_g2, lempert_origin_tetra, tetra_feasibility, SchwarzProblem,
};
use mu_domains::{Complex, Error, Region, SymPoint, TetraPoint, DEFAULT_BAND};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

const MALFORMED: u8 = 64;
const INCOMPLETE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "mu-domains",
    version,
    about = "Tetrablock and symmetrized bidisc toolkit"
)]
struct Cli {
    /// Width of the boundary band.
    #[arg(
        long,
        global = true,
        env = "MU_DOMAINS_TOL",
        default_value_t = DEFAULT_BAND,
        allow_hyphen_values = true
    )]
    tol: f64,
    /// Grid size for verification (interpolate, verify) or the bidisc
    /// search (sweep).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Seed for sweep campaigns.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON input file, `-` for stdin.
    #[arg(long, global = true, default_value = "-")]
    input: String,
    /// Output file, `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// `{domain, point[, criteria]}` to a membership verdict.
    Membership,
    /// `{domain, lambda0, point}` to a per-condition report.
    Feasibility,
    /// `{domain, point}` to the Lempert value from the origin.
    Lempert,
    /// `{domain, lambda0, point}` to a verified analytic disc.
    Interpolate,
    /// Re-checks the disc in an `interpolate` output.
    Verify,
    /// Runs an equivalence campaign from a sweep config.
    Sweep,
}

#[derive(Deserialize, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Domain {
    Tetra,
    G2,
}

#[derive(Deserialize, Debug)]
struct Query {
    domain: Domain,
    point: Value,
    #[serde(default)]
    lambda0: Option<Complex>,
    #[serde(default)]
    criteria: Option<Vec<String>>,
    #[serde(default)]
    disc: Option<AnalyticDisc>,
}

/// A failure carrying its exit code and a JSON diagnostic.
#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn malformed(message: impl Into<String>) -> Self {
        Failure {
            code: MALFORMED,
            kind: "malformed_input",
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InfeasibleProblem(_) => (2, "infeasible_problem"),
            Error::OutsideDomain(m) if *m >= 0.0 => (1, "outside_domain"),
            Error::OutsideDomain(_) => (2, "outside_domain"),
            Error::ConstructionIncomplete(_) => (INCOMPLETE, "construction_incomplete"),
            Error::WitnessNotConstructed(_) => (INCOMPLETE, "witness_not_constructed"),
            _ => (MALFORMED, "malformed_input"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<(Value, u8), Failure>;

fn region_code(r: Region) -> u8 {
    match r {
        Region::Interior => 0,
        Region::Boundary => 1,
        Region::Exterior => 2,
    }
}

fn finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

enum Point {
    Tetra(TetraPoint),
    G2(SymPoint),
}

impl Point {
    fn parse(domain: Domain, v: &Value) -> Result<Point, Failure> {
        let coords: Vec<Complex> = serde_json::from_value(v.clone())
            .map_err(|e| Failure::malformed(format!("point: {e}")))?;
        if !coords.iter().all(|z| finite(*z)) {
            return Err(Failure::malformed("point has a non-finite entry"));
        }
        match (domain, coords.as_slice()) {
            (Domain::Tetra, [a, b, p]) => Ok(Point::Tetra(TetraPoint::new(*a, *b, *p))),
            (Domain::G2, [s, p]) => Ok(Point::G2(SymPoint::new(*s, *p))),
            (Domain::Tetra, _) => Err(Failure::malformed("tetra point needs 3 complex entries")),
            (Domain::G2, _) => Err(Failure::malformed("g2 point needs 2 complex entries")),
        }
    }

    fn target(&self) -> Target {
        match self {
            Point::Tetra(x) => Target::Tetra(*x),
            Point::G2(y) => Target::G2(*y),
        }
    }
}

fn lambda0(q: &Query) -> Result<Complex, Failure> {
    let l = q
        .lambda0
        .ok_or_else(|| Failure::malformed("missing lambda0"))?;
    if !finite(l) || !(l.norm() > 0.0 && l.norm() < 1.0) {
        return Err(Failure::malformed(format!(
            "lambda0 = {l} must satisfy 0 < |lambda0| < 1"
        )));
    }
    Ok(l)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialise")
}

fn membership(q: &Query, tol: f64) -> Outcome {
    let verdict = match Point::parse(q.domain, &q.point)? {
        Point::Tetra(x) => {
            let criteria = match &q.criteria {
                None => TetraCriterion::ALL.to_vec(),
                Some(ids) => ids
                    .iter()
                    .map(|id| {
                        TetraCriterion::from_id(id)
                            .ok_or_else(|| Failure::malformed(format!("unknown criterion {id}")))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            };
            if criteria.is_empty() {
                return Err(Failure::malformed("empty criteria list"));
            }
            tetra_membership(&x, &criteria, tol)
        }
        Point::G2(y) => g2_membership(&y, tol),
    };
    Ok((to_value(&verdict), region_code(verdict.overall)))
}

fn feasibility(q: &Query, tol: f64) -> Outcome {
    let l = lambda0(q)?;
    let report = match Point::parse(q.domain, &q.point)? {
        Point::Tetra(x) => tetra_feasibility(&SchwarzProblem::new(l, x)?, tol),
        Point::G2(y) => g2_feasibility(&SchwarzProblem::new(l, y)?, tol),
    };
    Ok((to_value(&report), region_code(report.feasible.region())))
}

fn lempert(q: &Query) -> Outcome {
    let value = match Point::parse(q.domain, &q.point)? {
        Point::Tetra(x) => lempert_origin_tetra(&x)?,
        Point::G2(y) => lempert_origin_g2(&y)?,
    };
    Ok((
        json!({ "domain": q.domain, "point": q.point, "lempert": value }),
        0,
    ))
}

fn interpolate(q: &Query, tol: f64, grid: usize) -> Outcome {
    let l = lambda0(q)?;
    let point = Point::parse(q.domain, &q.point)?;
    let (disc, witness) = match point {
        Point::Tetra(x) => {
            let prob = SchwarzProblem::new(l, x)?;
            let disc = build_interpolant_tetra(&prob, tol)?;
            let witness = match schur_matrix_witness(&prob, &disc, 32) {
                Ok(w) => to_value(&w),
                Err(e) => json!({ "error": e.to_string() }),
            };
            (disc, Some(witness))
        }
        Point::G2(y) => (
            build_interpolant_g2(&SchwarzProblem::new(l, y)?, tol)?,
            None,
        ),
    };
    let report = verify_interpolant(&disc, l, &point.target(), grid)?;
    let mut out = json!({
        "domain": q.domain,
        "lambda0": l,
        "point": q.point,
        "disc": disc,
        "report": report,
    });
    if let Some(w) = witness {
        out["schur_witness"] = w;
    }
    Ok((out, if report.verified { 0 } else { 2 }))
}

fn verify(q: &Query, grid: usize) -> Outcome {
    let l = lambda0(q)?;
    let point = Point::parse(q.domain, &q.point)?;
    let disc = q
        .disc
        .as_ref()
        .ok_or_else(|| Failure::malformed("missing disc"))?;
    let report = verify_interpolant(disc, l, &point.target(), grid)?;
    Ok((to_value(&report), if report.verified { 0 } else { 2 }))
}

fn sweep(text: &str, cli: &Cli) -> Outcome {
    let raw: Value = if text.trim().is_empty() {
        json!({})
    } else {
        serde_json::from_str(text).map_err(|e| Failure::malformed(e.to_string()))?
    };
    let band_given = raw.get("tolerance_band").is_some() || raw.get("band").is_some();
    let mut cfg: SweepConfig =
        serde_json::from_value(raw).map_err(|e| Failure::malformed(e.to_string()))?;
    if !band_given {
        cfg.tolerance_band = cli.tol;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(g) = cli.grid {
        cfg.bidisc_grid = g;
    }
    let report = equivalence_sweep(&cfg)?;
    let code = if report.summary.genuine_disagreements == 0 {
        0
    } else {
        2
    };
    Ok((to_value(&report), code))
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == "-" {
        io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::malformed(format!("cannot read {path}: {e}")))?;
    Ok(text)
}

fn run(cli: &Cli) -> Outcome {
    if !(cli.tol >= 0.0 && cli.tol.is_finite()) {
        return Err(Failure::malformed(format!(
            "--tol {} must be finite and nonnegative",
            cli.tol
        )));
    }
    let text = read_input(&cli.input)?;
    if let Command::Sweep = cli.command {
        return sweep(&text, cli);
    }
    let q: Query = serde_json::from_str(&text).map_err(|e| Failure::malformed(e.to_string()))?;
    let grid = cli.grid.unwrap_or(VERIFY_GRID);
    match cli.command {
        Command::Membership => membership(&q, cli.tol),
        Command::Feasibility => feasibility(&q, cli.tol),
        Command::Lempert => lempert(&q),
        Command::Interpolate => interpolate(&q, cli.tol, grid),
        Command::Verify => verify(&q, grid),
        Command::Sweep => unreachable!(),
    }
}

fn write_output(path: &str, v: &Value) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("json values serialise");
    text.push('\n');
    if path == "-" {
        io::stdout().lock().write_all(text.as_bytes())
    } else {
        fs::write(path, text)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { MALFORMED } else { 0 });
        }
    };
    let (value, code) = match run(&cli) {
        Ok(ok) => ok,
        Err(f) => {
            eprintln!("mu-domains: {}", f.message);
            (json!({ "error": f.kind, "message": f.message }), f.code)
        }
    };
    if let Err(e) = write_output(&cli.output, &value) {
        eprintln!("mu-domains: cannot write {}: {e}", cli.output);
        return ExitCode::from(74);
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mu_domains::schwarz::Verdict;

    #[test]
    fn verdict_codes() {
        assert_eq!(region_code(Verdict::Feasible.region()), 0);
        assert_eq!(region_code(Verdict::Boundary.region()), 1);
        assert_eq!(region_code(Verdict::Infeasible.region()), 2);
    }

    #[test]
    fn points_need_the_right_arity() {
        let v = json!([[0, 0], [0, 0]]);
        assert!(Point::parse(Domain::G2, &v).is_ok());
        assert_eq!(
            Point::parse(Domain::Tetra, &v).err().unwrap().code,
            MALFORMED
        );
        assert!(Point::parse(Domain::G2, &json!([[0, 0]])).is_err());
        assert!(Point::parse(Domain::G2, &json!([[0, 0, 1], [0, 0]])).is_err());
    }

    #[test]
    fn cli_parses() {
        Cli::try_parse_from(["mu-domains", "--tol", "1e-8", "sweep", "--seed", "3"]).unwrap();
        assert!(Cli::try_parse_from(["mu-domains", "nonsense"]).is_err());
    }
}
