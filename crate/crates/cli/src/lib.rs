//! Command implementations behind the `hamflux` binary.
//!
//! Every command reads a `hamflux/1` problem file and returns an [`Output`]
//! carrying the text to print and the process exit code.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use hamflux::gallery::random_instance;
use hamflux::group::{hat_adjoint, kappa, kappa_inverse_check, GroupElement};
use hamflux::ham::{exactness_report, flux_rank, poisson_bracket, HamiltonianAnalysis};
use hamflux::linear::{add_vectors, format_rational, is_zero_vector, Rational};
use hamflux::momentum::{
    baer_product_lie, build_abelian_extension, build_central_extension, cartan2_check,
    equivalence_report, equivariantize, solve_momentum, tau_cocycle, Equivariantization,
};
use hamflux::noether::{commuting_actions_check, invariant_flow_check, NoetherReport};
use hamflux::problem::{
    cochain_entries, extension_problem, matrix_doc, to_canonical_json, to_json,
};
use hamflux::{analyze, parse_problem, AlgebraHom, Error, Matrix, MomentumMap, Problem};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_MATH: i32 = 3;

/// Number of random triples used by the sampled Jacobi check in `analyze`.
const JACOBI_SAMPLES: usize = 8;

#[derive(Debug, Parser)]
#[command(
    name = "hamflux",
    version,
    about = "Hamiltonian actions of Lie algebras on modules, in exact arithmetic"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for sampled checks and generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a problem file.
    Validate { file: PathBuf },
    /// Symplectic and hamiltonian subalgebras, admissible vectors and exactness checks.
    Analyze { file: PathBuf },
    /// Emit the requested extension of g as a problem document.
    Extend {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Momentum map, obstruction cocycle and group cocycles.
    Momentum { file: PathBuf },
    /// Noether checks for the flows and commuting pairs in the file.
    Noether { file: PathBuf },
    /// Print a random problem document.
    Random {
        /// `dim h` and `dim V`.
        #[arg(long, num_args = 2, value_names = ["DIM_H", "DIM_V"], default_values_t = [2usize, 2])]
        dims: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Central extension by the invariant vectors.
    Cen,
    /// Abelian extension by the admissible vectors.
    Ab,
    /// Baer product of the central extension with the semidirect product.
    Baer,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Cen => "cen",
            Kind::Ab => "ab",
            Kind::Baer => "baer",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CmdResult = std::result::Result<String, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output::ok(text)
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Output {
    let result = match &cli.command {
        Command::Validate { file } => load(file).map(|p| validate(&p, cli.json)),
        Command::Analyze { file } => load(file).and_then(|p| cmd_analyze(&p, cli.json, cli.seed)),
        Command::Extend { file, kind } => load(file).and_then(|p| cmd_extend(&p, *kind)),
        Command::Momentum { file } => load(file).and_then(|p| cmd_momentum(&p, cli.json)),
        Command::Noether { file } => load(file).and_then(|p| cmd_noether(&p, cli.json)),
        Command::Random { dims } => cmd_random(dims, cli.seed),
    };
    match result {
        Ok(stdout) => Output::ok(stdout),
        Err(failure) => failure_output(failure, cli.json),
    }
}

fn failure_output(failure: Failure, json: bool) -> Output {
    let (code, kind, message) = match failure {
        Failure::Usage(message) => (EXIT_USAGE, "usage", message),
        Failure::Core(e) if e.is_validation() => (EXIT_VALIDATION, "validation", e.to_string()),
        Failure::Core(e) => (EXIT_MATH, "mathematical", e.to_string()),
    };
    let stdout = if json {
        to_canonical_json(&json!({"status": "error", "kind": kind, "message": message}))
    } else {
        String::new()
    };
    Output {
        code,
        stdout,
        stderr: format!("error ({kind}): {message}\n"),
    }
}

fn load(path: &Path) -> std::result::Result<Problem, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_problem(&text)?)
}

fn validate(p: &Problem, json: bool) -> String {
    let summary = json!({
        "status": "ok",
        "dim_h": p.algebra().dim(),
        "dim_v": p.module.dim(),
        "has_zeta": p.zeta.is_some(),
        "group_elements": p.group_elements.len(),
        "flows": p.flows.len(),
        "commuting": p.commuting.len(),
    });
    if json {
        to_canonical_json(&summary)
    } else {
        format!(
            "ok: dim h = {}, dim V = {}\n",
            p.algebra().dim(),
            p.module.dim()
        )
    }
}

fn basis_doc(sub: &hamflux::Subspace) -> Value {
    json!(matrix_doc(sub.basis()))
}

/// Jacobi identity of the Poisson bracket on random admissible triples.
fn sampled_jacobi(a: &HamiltonianAnalysis, seed: u64) -> hamflux::Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = a.v_omega.dim();
    let draw = |rng: &mut ChaCha8Rng| a.v_omega.vector(&hamflux::gallery::random_vector(dim, rng));
    for _ in 0..JACOBI_SAMPLES {
        let (u, v, w) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let pb = |x: &[Rational], y: &[Rational]| poisson_bracket(a, x, y);
        let sum = add_vectors(
            &add_vectors(&pb(&u, &pb(&v, &w)?)?, &pb(&v, &pb(&w, &u)?)?),
            &pb(&w, &pb(&u, &v)?)?,
        );
        if !is_zero_vector(&sum) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmd_analyze(p: &Problem, json: bool, seed: u64) -> CmdResult {
    let a = analyze(&p.module, &p.omega)?;
    let report = exactness_report(&a);
    let rank = flux_rank(&a)?;
    let jacobi = sampled_jacobi(&a, seed)?;
    if json {
        let value = json!({
            "dims": report.dims,
            "checks": report.checks,
            "poisson_jacobi_sampled": jacobi,
            "h1_dim": a.h1().dim(),
            "flux_rank": rank,
            "bases": {
                "sp": basis_doc(&a.sp),
                "ham": basis_doc(&a.ham),
                "rad": basis_doc(&a.rad),
                "h_omega": basis_doc(&a.h_omega),
                "v_h": basis_doc(&a.v_h),
                "v_omega": basis_doc(&a.v_omega),
            },
        });
        return Ok(to_canonical_json(&value));
    }
    let d = &report.dims;
    let c = &report.checks;
    let mut out = String::new();
    out.push_str(&format!(
        "dims: sp {} ham {} rad {} h_omega {} V^h {} V_omega {}\n",
        d.sp, d.ham, d.rad, d.h_omega, d.v_h, d.v_omega
    ));
    out.push_str(&format!(
        "hat ham {}, H^1 {}, flux rank {}\n",
        d.hat_ham,
        a.h1().dim(),
        rank
    ));
    for (name, ok) in [
        ("rad -> ham -> d(V_omega)", c.ham_sequence),
        ("V^h -> V_omega -> d(V_omega)", c.admissible_sequence),
        ("rad -> h_omega -> 1-forms", c.normalizer_sequence),
        ("V^h -> hat ham -> ham", c.hat_ham_sequence),
        ("inclusions", c.inclusions),
        ("Poisson Jacobi (sampled)", jacobi),
    ] {
        out.push_str(&format!("{}  {name}\n", if ok { "ok  " } else { "FAIL" }));
    }
    Ok(out)
}

fn require_zeta(p: &Problem) -> std::result::Result<&AlgebraHom, Failure> {
    p.zeta
        .as_ref()
        .ok_or_else(|| Failure::Usage("the problem file has no zeta".into()))
}

/// The momentum map supplied in the file, or the canonical solution.
fn momentum_map(
    a: &HamiltonianAnalysis,
    zeta: &AlgebraHom,
    supplied: Option<&Matrix>,
) -> hamflux::Result<MomentumMap> {
    match supplied {
        Some(j) => MomentumMap::new(a, zeta, j.clone()),
        None => Ok(solve_momentum(a, zeta)?.map),
    }
}

fn cmd_extend(p: &Problem, kind: Kind) -> CmdResult {
    let zeta = require_zeta(p)?;
    let a = analyze(&p.module, &p.omega)?;
    let m = momentum_map(&a, zeta, p.momentum.as_ref())?;
    let problem = match kind {
        Kind::Cen => extension_problem(kind.name(), &build_central_extension(&m)?, None),
        Kind::Ab => extension_problem(kind.name(), &build_abelian_extension(&a, zeta)?, None),
        Kind::Baer => {
            let cen = build_central_extension(&m)?;
            let baer = baer_product_lie(&m, &cen)?;
            extension_problem(kind.name(), &baer.extension, Some(&baer))
        }
    };
    Ok(to_json(&problem))
}

fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn cmd_momentum(p: &Problem, json: bool) -> CmdResult {
    let zeta = require_zeta(p)?;
    let a = analyze(&p.module, &p.omega)?;
    let solution = solve_momentum(&a, zeta)?;
    let m = momentum_map(&a, zeta, p.momentum.as_ref())?;
    let class = tau_cocycle(&m)?;
    let (equivariantizable, shift, equivariant) = match equivariantize(&m)? {
        Equivariantization::Equivariant { c, map } => (true, Some(c), Some(map)),
        Equivariantization::Obstructed { .. } => (false, None, None),
    };
    let report = equivalence_report(&m)?;
    let cartan = cartan2_check(&a, zeta, m.matrix())?;
    let cen = build_central_extension(&m)?;
    let mut groups = Vec::new();
    for g in &p.group_elements {
        let element = GroupElement::new(g.label.clone(), g.ad.clone(), g.rho_v.clone(), &m)?;
        groups.push(json!({
            "label": g.label,
            "kappa": matrix_doc(&kappa(&element, &m)?),
            "kappa_inverse_identity": kappa_inverse_check(&element, &m)?,
            "hat_ad": matrix_doc(&hat_adjoint(&element, &m, &cen)?),
        }));
    }
    let value = json!({
        "momentum": matrix_doc(m.matrix()),
        "supplied": p.momentum.is_some(),
        "freedom_dim": solution.freedom_dim(),
        "tau": cochain_entries(&class.tau),
        "tau_invariant": cochain_entries(&class.tau_invariant),
        "obstruction_class": rationals(&class.h2_class),
        "equivariantizable": equivariantizable,
        "equivariant_shift": shift.as_ref().map(matrix_doc),
        "equivariant_momentum": equivariant.as_ref().map(|e| matrix_doc(e.matrix())),
        "conditions": report,
        "cartan": cartan,
        "group_elements": groups,
    });
    if json {
        return Ok(to_canonical_json(&value));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "J = {}\n",
        serde_json::to_string(&matrix_doc(m.matrix())).expect("json")
    ));
    out.push_str(&format!(
        "freedom dim Hom(g, V^h) = {}\n",
        solution.freedom_dim()
    ));
    out.push_str(&format!(
        "tau = {}\n",
        serde_json::to_string(&cochain_entries(&class.tau)).expect("json")
    ));
    out.push_str(&format!(
        "obstruction class = [{}]\n",
        rationals(&class.h2_class).join(", ")
    ));
    out.push_str(&format!("equivariantizable: {equivariantizable}\n"));
    if let Some(e) = &equivariant {
        out.push_str(&format!(
            "equivariant J = {}\n",
            serde_json::to_string(&matrix_doc(e.matrix())).expect("json")
        ));
    }
    for g in &groups {
        out.push_str(&format!(
            "kappa({}) = {}\n",
            g["label"].as_str().unwrap_or(""),
            g["kappa"]
        ));
    }
    Ok(out)
}

fn report_value(label: String, r: &NoetherReport) -> Value {
    json!({"label": label, "report": r})
}

fn cmd_noether(p: &Problem, json: bool) -> CmdResult {
    let a = analyze(&p.module, &p.omega)?;
    let mut reports = Vec::new();
    if !p.flows.is_empty() {
        let zeta = require_zeta(p)?;
        let m = momentum_map(&a, zeta, p.momentum.as_ref())?;
        for (i, f) in p.flows.iter().enumerate() {
            let r = invariant_flow_check(&a, &m, &f.v, &f.xi)?;
            reports.push(report_value(format!("flow[{i}]"), &r));
        }
    }
    for (i, c) in p.commuting.iter().enumerate() {
        let m1 = momentum_map(&a, &c.zeta1, c.momentum1.as_ref())?;
        let m2 = momentum_map(&a, &c.zeta2, c.momentum2.as_ref())?;
        let r = commuting_actions_check(&a, &m1, &m2)?;
        reports.push(report_value(format!("commuting[{i}]"), &r));
    }
    if json {
        return Ok(to_canonical_json(&json!({ "reports": reports })));
    }
    let mut out = String::new();
    if reports.is_empty() {
        out.push_str("no flows or commuting pairs in the file\n");
    }
    for r in &reports {
        let ok = r["report"]["conclusion_ok"].as_bool().unwrap_or(false);
        out.push_str(&format!(
            "{}: {}\n",
            r["label"].as_str().unwrap_or(""),
            if ok {
                "conclusion holds"
            } else {
                "CONCLUSION FAILS"
            }
        ));
        for check in r["report"]["sub_checks"].as_array().into_iter().flatten() {
            out.push_str(&format!(
                "  {} {}\n",
                if check[1] == true { "ok  " } else { "FAIL" },
                check[0].as_str().unwrap_or("")
            ));
        }
    }
    Ok(out)
}

fn cmd_random(dims: &[usize], seed: u64) -> CmdResult {
    let (n, m) = match dims {
        [n, m] if *n > 0 && *m > 0 => (*n, *m),
        _ => return Err(Failure::Usage("--dims needs two positive integers".into())),
    };
    let bundle = random_instance((n, m), seed)?;
    Ok(to_json(&Problem::from_bundle(&bundle)))
}
