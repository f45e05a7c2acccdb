//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a verification residual
//! exceeds the tolerance, 2 for usage errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::anticommute::{
    brute_force_maximal_sets, structural_families, verify_family, BruteForceOptions, GeneratorFamily,
};
use crate::complexmat::{Complex, ComplexMatrix};
use crate::decomp::{
    cayley_table, decompose, decompose_via_quintet, to_dirac, to_gellmann, BasisCoefficients, CayleyTable,
};
use crate::error::Error;
use crate::euler::EulerAngles;
use crate::generators::{
    all_generators, build_generator, dirac_basis, gellmann4_basis, signature_twist, u_matrix, AngleList,
    GeneratorIndex, LabeledGenerator,
};
use crate::gl4::{
    block_antidiagonal_unitary, block_diagonal_unitary, compose, determinant_formula, from_h_factors, inverse_params,
    su4_condition_residual, FourVector, FourVectorParams, UnitaryElement,
};
use crate::{GL4_TOL, SINGULAR_FLOOR, STRUCTURAL_TOL};

#[derive(Parser, Debug)]
#[command(
    name = "cliffgen",
    version,
    about = "Euler-angle parametrized Clifford algebra generators"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Residual tolerance [default: 1e-10, 1e-9 for gl4]
    #[arg(long, global = true, env = "CLIFFGEN_TOL", allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Args, Debug, Clone)]
pub struct AngleArgs {
    /// 3n comma-separated angles alpha1,beta1,gamma1,alpha2,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["angle_triple", "random"])]
    pub angles: Option<Vec<f64>>,
    /// One alpha,beta,gamma triple used for every factor
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "random")]
    pub angle_triple: Option<Vec<f64>>,
    /// Draw every angle uniformly from [0, 2pi) using --seed
    #[arg(long)]
    pub random: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build labeled generators, one generator, or one structural family
    Generate {
        #[arg(long)]
        n: usize,
        /// Generator index such as 2,1 or A21
        #[arg(long, conflicts_with = "family")]
        index: Option<String>,
        /// 1-based structural family number
        #[arg(long)]
        family: Option<usize>,
        #[command(flatten)]
        angles: AngleArgs,
    },
    /// List structural families and compare with clique enumeration
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long)]
        no_brute_force: bool,
        /// Permit brute force at n = 4
        #[arg(long)]
        allow_slow: bool,
    },
    /// Verify a structural family or an explicit member list
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, conflicts_with = "members")]
        family: Option<usize>,
        /// Comma-separated member labels, e.g. A11,A12,A13
        #[arg(long, value_delimiter = ',')]
        members: Option<Vec<String>>,
        /// Multiply the last q members by i
        #[arg(long, default_value_t = 0)]
        twist: usize,
        /// Also check the scaled product of all members
        #[arg(long)]
        u_matrix: bool,
        #[command(flatten)]
        angles: AngleArgs,
    },
    /// Cayley table of the labeled basis
    Cayley {
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Sub-table for the quintet A10, A21, A22, A23, A30
        #[arg(long, conflicts_with = "labels")]
        quintet: bool,
        /// Sub-table for these labels
        #[arg(long, value_delimiter = ',')]
        labels: Option<Vec<String>>,
        #[command(flatten)]
        angles: AngleArgs,
    },
    /// Decompose a matrix or a generator over a basis
    Decompose {
        #[arg(long)]
        n: usize,
        /// JSON matrix file {"order": n, "entries": [[re, im], ...]}
        #[arg(long, conflicts_with = "index")]
        matrix: Option<PathBuf>,
        /// Generator to decompose; dirac and gellmann use the closed forms
        #[arg(long)]
        index: Option<String>,
        #[arg(long, value_enum, default_value_t = Basis::Generators)]
        basis: Basis,
        /// Structural family used with --basis quintet
        #[arg(long, default_value_t = 2)]
        family: usize,
        #[command(flatten)]
        angles: AngleArgs,
    },
    /// Four-vector parametrization of GL(4)
    Gl4 {
        #[command(subcommand)]
        action: Gl4Action,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Generators,
    Dirac,
    Gellmann,
    Quintet,
}

#[derive(Subcommand, Debug)]
pub enum Gl4Action {
    /// Product of the given parameter files, left to right
    Compose {
        #[arg(long = "params", required = true, num_args = 1..)]
        params: Vec<PathBuf>,
    },
    /// Closed-form inverse
    Invert {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = SINGULAR_FLOOR)]
        floor: f64,
    },
    /// Closed-form determinant against LU
    Det {
        #[arg(long)]
        params: PathBuf,
    },
    /// Unitarity check; block-diagonal and anti-diagonal sets use their
    /// closed-form conditions
    Unitary {
        #[arg(long)]
        params: PathBuf,
    },
    /// Random parameter set drawn from --seed
    Random {
        /// Keep only the block-diagonal (n = l = 0) part
        #[arg(long, conflicts_with = "antidiagonal")]
        diagonal: bool,
        /// Keep only the anti-diagonal (k = m = 0) part
        #[arg(long)]
        antidiagonal: bool,
        /// Fixed alpha,beta,gamma instead of random angles
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// Parameters of a matrix from its trace decomposition
    FromMatrix {
        #[arg(long)]
        matrix: PathBuf,
        /// Angles alpha,beta,gamma of the first Kronecker factor
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        outer: Option<Vec<f64>>,
        /// Angles alpha,beta,gamma of the second factor (the R basis of the result)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        inner: Option<Vec<f64>>,
    },
}

/// Failure of a command.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Singular { .. }
            | Error::VerificationFailed(_)
            | Error::QuasiClosureViolation { .. }
            | Error::NotUnitary(_)
            | Error::NotParametric(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Result of one command in every output format it supports.
pub struct Report {
    pub json: Value,
    pub pretty: String,
    pub csv: Option<String>,
    pub passed: bool,
}

/// Seed, tolerance and output format shared by all commands.
pub struct RunConfig {
    pub seed: u64,
    pub tol: f64,
    pub format: Format,
    rng: ChaCha8Rng,
}

impl RunConfig {
    pub fn new(seed: u64, tol: f64, format: Format) -> CliResult<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self {
            seed,
            tol,
            format,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    fn angles(&mut self, args: &AngleArgs, n: usize) -> CliResult<AngleList> {
        if let Some(values) = &args.angles {
            if values.len() != 3 * n {
                return Err(CliError::Usage(format!(
                    "--angles needs {} values for n = {n}, got {}",
                    3 * n,
                    values.len()
                )));
            }
            return Ok(AngleList::from_flat(values)?);
        }
        if let Some(t) = &args.angle_triple {
            return Ok(AngleList::replicated(triple(t, "--angle-triple")?, n));
        }
        if args.random {
            return Ok(AngleList::random(&mut self.rng, n));
        }
        Ok(AngleList::trivial(n))
    }
}

fn triple(values: &[f64], flag: &str) -> CliResult<EulerAngles> {
    match values {
        [a, b, g] if values.iter().all(|v| v.is_finite()) => Ok(EulerAngles::new(*a, *b, *g)),
        _ => Err(CliError::Usage(format!("{flag} needs three finite values"))),
    }
}

fn check_n(n: usize) -> CliResult<()> {
    if (1..=4).contains(&n) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--n must be between 1 and 4, got {n}")))
    }
}

fn parse_index(s: &str, n: usize) -> CliResult<GeneratorIndex> {
    let index: GeneratorIndex = s.parse()?;
    if index.len() != n {
        return Err(CliError::Usage(format!(
            "index {index} has {} components, expected {n}",
            index.len()
        )));
    }
    Ok(index)
}

fn pick_family(families: Vec<GeneratorFamily>, id: usize) -> CliResult<GeneratorFamily> {
    let count = families.len();
    families
        .into_iter()
        .nth(id.wrapping_sub(1))
        .ok_or_else(|| CliError::Usage(format!("family must be between 1 and {count}, got {id}")))
}

fn cplx(z: Complex) -> Value {
    json!([z.re, z.im])
}

fn fmt_c(z: Complex) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

fn generator_json(g: &LabeledGenerator) -> Value {
    json!({
        "label": g.label,
        "matrix": g.matrix,
        "hermiticity_residual": g.matrix.hermiticity_residual(),
        "involution_residual": g.matrix.involution_residual(1.0),
    })
}

fn family_json(id: usize, f: &GeneratorFamily, tol: f64) -> (Value, bool) {
    let report = verify_family(f, tol);
    let passed = report.passed;
    (
        json!({
            "id": id,
            "structure": f.structure.to_string(),
            "members": f.describe().split(' ').collect::<Vec<_>>(),
            "report": report,
        }),
        passed,
    )
}

fn cmd_generate(
    cfg: &mut RunConfig,
    n: usize,
    index: Option<&str>,
    family: Option<usize>,
    angle_args: &AngleArgs,
) -> CliResult<Report> {
    check_n(n)?;
    let angles = cfg.angles(angle_args, n)?;
    let (generators, family_value, mut passed) = if let Some(id) = family {
        let fam = pick_family(structural_families(&angles)?, id)?;
        let (v, ok) = family_json(id, &fam, cfg.tol);
        (fam.members, Some(v), ok)
    } else if let Some(s) = index {
        (vec![build_generator(&parse_index(s, n)?, &angles)?], None, true)
    } else {
        (all_generators(&angles).into_iter().skip(1).collect(), None, true)
    };
    let mut pretty = String::new();
    for g in &generators {
        let ok = g.matrix.hermiticity_residual() <= cfg.tol && g.matrix.involution_residual(1.0) <= cfg.tol;
        passed &= ok;
        pretty.push_str(&format!("{}\n{}\n", g.label, g.matrix));
    }
    let mut json = json!({
        "n": n,
        "seed": cfg.seed,
        "angles": angles,
        "generators": generators.iter().map(generator_json).collect::<Vec<_>>(),
    });
    if let Some(v) = family_value {
        pretty = format!(
            "family {}: {}\n{pretty}",
            v["id"],
            v["structure"].as_str().unwrap_or_default()
        );
        json["family"] = v;
    }
    Ok(Report {
        json,
        pretty,
        csv: None,
        passed,
    })
}

fn cmd_enumerate(
    cfg: &mut RunConfig,
    n: usize,
    angle_args: &AngleArgs,
    no_brute_force: bool,
    allow_slow: bool,
) -> CliResult<Report> {
    check_n(n)?;
    let angles = cfg.angles(angle_args, n)?;
    let families = structural_families(&angles)?;
    let mut all_ok = true;
    let mut listed = Vec::with_capacity(families.len());
    let mut pretty = String::new();
    let mut csv = String::from("id,structure,members,passed\n");
    for (k, f) in families.iter().enumerate() {
        let (v, ok) = family_json(k + 1, f, cfg.tol);
        all_ok &= ok;
        pretty.push_str(&format!(
            "{:>4}  {:<32} {}\n",
            k + 1,
            f.structure.to_string(),
            f.describe()
        ));
        csv.push_str(&format!("{},{},{},{}\n", k + 1, f.structure, f.describe(), ok));
        listed.push(v);
    }

    let run_brute = !no_brute_force && (n <= 3 || allow_slow);
    let (brute, verdict) = if run_brute {
        let confirm = AngleList::random(&mut cfg.rng, n);
        let sets = brute_force_maximal_sets(
            &angles,
            &confirm,
            BruteForceOptions {
                tol: cfg.tol,
                allow_slow,
            },
        )?;
        let structural: BTreeSet<_> = families.iter().map(GeneratorFamily::canonical_key).collect();
        let found: BTreeSet<_> = sets.iter().map(GeneratorFamily::canonical_key).collect();
        let verdict = if structural == found { "MATCH" } else { "MISMATCH" };
        (
            json!({
                "count": sets.len(),
                "structural_subset": structural.is_subset(&found),
                "extra": found.difference(&structural).count(),
            }),
            verdict,
        )
    } else {
        (Value::Null, "SKIPPED")
    };
    let summary = if run_brute {
        format!(
            "{} families; brute-force: {}; {verdict}",
            families.len(),
            brute["count"]
        )
    } else {
        format!("{} families", families.len())
    };
    pretty.push_str(&summary);
    pretty.push('\n');
    Ok(Report {
        json: json!({
            "n": n,
            "seed": cfg.seed,
            "angles": angles,
            "structural_count": families.len(),
            "families": listed,
            "brute_force": brute,
            "verdict": verdict,
            "summary": summary,
        }),
        pretty,
        csv: Some(csv),
        passed: all_ok && verdict != "MISMATCH",
    })
}

fn cmd_verify(
    cfg: &mut RunConfig,
    n: usize,
    family: Option<usize>,
    members: Option<&[String]>,
    twist: usize,
    with_u: bool,
    angle_args: &AngleArgs,
) -> CliResult<Report> {
    check_n(n)?;
    let angles = cfg.angles(angle_args, n)?;
    let mut fam = match (family, members) {
        (_, Some(labels)) => {
            let indices = labels
                .iter()
                .map(|s| parse_index(s, n))
                .collect::<CliResult<Vec<_>>>()?;
            GeneratorFamily::new(indices, &angles, crate::anticommute::FamilyStructure::Custom)?
        }
        (Some(id), None) => pick_family(structural_families(&angles)?, id)?,
        (None, None) => return Err(CliError::Usage("verify needs --family or --members".into())),
    };
    if twist > 0 {
        fam = signature_twist(&fam, twist)?;
    }
    let report = verify_family(&fam, cfg.tol);
    let mut passed = report.passed;
    let mut pretty = format!("{}\n{}\n", fam.describe(), report.summary());
    let mut json = json!({
        "n": n,
        "angles": angles,
        "members": fam.describe().split(' ').collect::<Vec<_>>(),
        "negative_count": fam.negative_count,
        "report": report,
    });
    if with_u {
        let u = u_matrix(&fam, cfg.tol)?;
        let ok = u.relation == u.expected_relation() && u.square_residual <= cfg.tol;
        passed &= ok;
        pretty.push_str(&format!(
            "U: phase {}, U^2 residual {:.3e}, relation {:?} (expected {:?})\n",
            fmt_c(u.phase),
            u.square_residual,
            u.relation,
            u.expected_relation()
        ));
        json["u_matrix"] = json!({
            "matrix": u.matrix,
            "phase": cplx(u.phase),
            "square_residual": u.square_residual,
            "commutator_residual": u.commutator_residual,
            "anticommutator_residual": u.anticommutator_residual,
            "relation": u.relation,
            "expected_relation": u.expected_relation(),
        });
    }
    Ok(Report {
        json,
        pretty,
        csv: None,
        passed,
    })
}

fn cmd_cayley(
    cfg: &mut RunConfig,
    n: usize,
    quintet: bool,
    labels: Option<&[String]>,
    angle_args: &AngleArgs,
) -> CliResult<Report> {
    if !(1..=3).contains(&n) {
        return Err(CliError::Usage(format!("cayley supports n = 1..3, got {n}")));
    }
    let angles = cfg.angles(angle_args, n)?;
    let full = cayley_table(&all_generators(&angles), cfg.tol)?;
    let table: CayleyTable = if quintet {
        if n != 2 {
            return Err(CliError::Usage("--quintet needs n = 2".into()));
        }
        let q: Vec<GeneratorIndex> = ["A10", "A21", "A22", "A23", "A30"]
            .iter()
            .map(|s| s.parse().expect("valid label"))
            .collect();
        full.subtable(&q)?
    } else if let Some(ls) = labels {
        let q = ls.iter().map(|s| parse_index(s, n)).collect::<CliResult<Vec<_>>>()?;
        full.subtable(&q)?
    } else {
        full.clone()
    };
    let census = full.census();
    let passed = full.max_residual() <= cfg.tol;
    let mut pretty = table.pretty();
    if !quintet && labels.is_none() {
        pretty.push_str("anticommuting partners:\n");
        for (l, c) in &census {
            pretty.push_str(&format!("  {l}: {c}\n"));
        }
    }
    Ok(Report {
        json: json!({
            "n": n,
            "angles": angles,
            "table": table,
            "census": census.iter().map(|(l, c)| json!({"label": l, "anticommuting": c})).collect::<Vec<_>>(),
            "max_residual": full.max_residual(),
        }),
        pretty,
        csv: Some(table.to_csv()),
        passed,
    })
}

fn coefficients_report<L: Serialize + std::fmt::Display>(c: &BasisCoefficients<L>, extra: Value, tol: f64) -> Report {
    let mut pretty = String::new();
    let mut csv = String::from("label,re,im\n");
    for (l, z) in &c.entries {
        pretty.push_str(&format!("{l:>8}  {}\n", fmt_c(*z)));
        csv.push_str(&format!("{l},{:e},{:e}\n", z.re, z.im));
    }
    pretty.push_str(&format!("residual {:.3e}\n", c.residual));
    let mut json = serde_json::to_value(c).expect("serializable");
    if let (Value::Object(map), Value::Object(more)) = (&mut json, extra) {
        map.extend(more);
    }
    Report {
        json,
        pretty,
        csv: Some(csv),
        passed: c.residual <= tol,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("malformed {}: {e}", path.display())))
}

#[allow(clippy::too_many_arguments)]
fn cmd_decompose(
    cfg: &mut RunConfig,
    n: usize,
    matrix: Option<&Path>,
    index: Option<&str>,
    basis: Basis,
    family: usize,
    angle_args: &AngleArgs,
) -> CliResult<Report> {
    check_n(n)?;
    let angles = cfg.angles(angle_args, n)?;
    let (y, index) = match (matrix, index) {
        (Some(p), None) => (read_json::<ComplexMatrix>(p)?, None),
        (None, Some(s)) => {
            let i = parse_index(s, n)?;
            (build_generator(&i, &angles)?.matrix, Some(i))
        }
        _ => return Err(CliError::Usage("decompose needs --matrix or --index".into())),
    };
    if y.order() != 1 << n {
        return Err(CliError::Usage(format!(
            "matrix order {} does not match n = {n}",
            y.order()
        )));
    }
    let extra = json!({"n": n, "angles": angles});
    let tol = cfg.tol;
    if matches!(basis, Basis::Dirac | Basis::Gellmann | Basis::Quintet) && n != 2 {
        return Err(CliError::Usage("this basis needs n = 2".into()));
    }
    Ok(match basis {
        Basis::Generators => coefficients_report(&decompose(&y, &all_generators(&angles), tol)?, extra, tol),
        Basis::Dirac => match &index {
            Some(i) => {
                let closed = to_dirac(i, &angles)?;
                let traced = decompose(&y, &dirac_basis(), tol)?;
                let gap = closed.max_abs_diff(&traced);
                let mut r =
                    coefficients_report(&closed, json!({"n": n, "angles": angles, "trace_agreement": gap}), tol);
                r.passed &= gap <= tol;
                r
            }
            None => coefficients_report(&decompose(&y, &dirac_basis(), tol)?, extra, tol),
        },
        Basis::Gellmann => match &index {
            Some(i) => {
                let closed = to_gellmann(i, &angles)?;
                let traced = decompose(&y, &gellmann4_basis(), tol)?;
                let gap = closed.max_abs_diff(&traced);
                let mut r =
                    coefficients_report(&closed, json!({"n": n, "angles": angles, "trace_agreement": gap}), tol);
                r.passed &= gap <= tol;
                r
            }
            None => coefficients_report(&decompose(&y, &gellmann4_basis(), tol)?, extra, tol),
        },
        Basis::Quintet => {
            let q = pick_family(structural_families(&angles)?, family)?;
            let d = decompose_via_quintet(&y, &q, tol)?;
            let mut pretty = String::new();
            let mut csv = String::from("term,label,phase,re,im\n");
            for t in &d.terms {
                pretty.push_str(&format!("{:>10}  {}\n", t.expression(), fmt_c(t.coefficient)));
                csv.push_str(&format!(
                    "{},{},{},{:e},{:e}\n",
                    t.expression(),
                    t.label,
                    t.phase,
                    t.coefficient.re,
                    t.coefficient.im
                ));
            }
            pretty.push_str(&format!("residual {:.3e}\n", d.residual));
            Report {
                json: json!({
                    "n": n,
                    "angles": angles,
                    "quintet": q.describe().split(' ').collect::<Vec<_>>(),
                    "terms": d.terms.iter().map(|t| json!({
                        "term": t.expression(),
                        "label": t.label,
                        "phase": t.phase,
                        "coefficient": cplx(t.coefficient),
                    })).collect::<Vec<_>>(),
                    "residual": d.residual,
                }),
                pretty,
                csv: Some(csv),
                passed: d.residual <= tol,
            }
        }
    })
}

fn params_pretty(p: &FourVectorParams) -> String {
    let fv = |name: &str, v: &FourVector| {
        format!(
            "{name}: {} | {} {} {}\n",
            fmt_c(v.scalar),
            fmt_c(v.vector[0]),
            fmt_c(v.vector[1]),
            fmt_c(v.vector[2])
        )
    };
    format!(
        "{}{}{}{}angles: {} {} {}\n",
        fv("k", &p.k),
        fv("n", &p.n),
        fv("l", &p.l),
        fv("m", &p.m),
        p.angles.alpha,
        p.angles.beta,
        p.angles.gamma
    )
}

fn is_zero(v: &FourVector) -> bool {
    *v == FourVector::ZERO
}

fn relative(a: Complex, b: Complex) -> f64 {
    let d = (a - b).norm();
    if d == 0.0 {
        0.0
    } else {
        d / b.norm().max(a.norm())
    }
}

fn cmd_gl4(cfg: &mut RunConfig, action: &Gl4Action) -> CliResult<Report> {
    let tol = cfg.tol;
    match action {
        Gl4Action::Compose { params } => {
            if params.len() < 2 {
                return Err(CliError::Usage("compose needs at least two --params files".into()));
            }
            let ps = params
                .iter()
                .map(|p| read_json::<FourVectorParams>(p))
                .collect::<CliResult<Vec<_>>>()?;
            let mut acc = ps[0];
            let mut direct = ps[0].to_matrix();
            for p in &ps[1..] {
                acc = compose(&acc, p)?;
                direct = direct.matmul(&p.to_matrix())?;
            }
            let residual = acc.to_matrix().max_abs_diff(&direct)?;
            Ok(Report {
                json: json!({"result": acc, "matrix_residual": residual}),
                pretty: format!("{}matrix residual {residual:.3e}\n", params_pretty(&acc)),
                csv: None,
                passed: residual <= tol,
            })
        }
        Gl4Action::Invert { params, floor } => {
            let p: FourVectorParams = read_json(params)?;
            let inv = inverse_params(&p, *floor)?;
            let y = p.to_matrix();
            let residual = inv.to_matrix().matmul(&y)?.max_abs_diff(&ComplexMatrix::identity(4))?;
            let lu_gap = match y.inverse_lu() {
                Ok(lu) => inv.to_matrix().max_abs_diff(&lu)?,
                Err(_) => f64::INFINITY,
            };
            Ok(Report {
                json: json!({"result": inv, "identity_residual": residual, "lu_residual": lu_gap}),
                pretty: format!(
                    "{}|Y^-1 Y - I| = {residual:.3e}, |Y^-1 - LU^-1| = {lu_gap:.3e}\n",
                    params_pretty(&inv)
                ),
                csv: None,
                passed: residual <= tol && lu_gap <= tol,
            })
        }
        Gl4Action::Det { params } => {
            let p: FourVectorParams = read_json(params)?;
            let formula = determinant_formula(&p);
            let lu = p.to_matrix().det_lu();
            let rel = relative(formula, lu);
            Ok(Report {
                json: json!({"determinant": cplx(formula), "lu": cplx(lu), "relative_residual": rel}),
                pretty: format!(
                    "det {}\nLU  {}\nrelative residual {rel:.3e}\n",
                    fmt_c(formula),
                    fmt_c(lu)
                ),
                csv: None,
                passed: rel <= tol,
            })
        }
        Gl4Action::Unitary { params } => {
            let p: FourVectorParams = read_json(params)?;
            let (case, element) = if is_zero(&p.n) && is_zero(&p.l) {
                ("block-diagonal", block_diagonal_unitary(p.k, p.m, p.angles, tol))
            } else if is_zero(&p.k) && is_zero(&p.m) {
                ("anti-diagonal", block_antidiagonal_unitary(p.n, p.l, p.angles, tol))
            } else {
                let cond = su4_condition_residual(&p, SINGULAR_FLOOR).unwrap_or(f64::INFINITY);
                let e = UnitaryElement::check(p, cond, tol);
                let r = if e.report.accepted {
                    Ok(e)
                } else {
                    Err(Error::NotUnitary(e.report.to_string()))
                };
                ("general", r)
            };
            let element = match element {
                Ok(e) => e,
                Err(Error::NotUnitary(msg)) => return Err(CliError::Failure(format!("{case}: {msg}"))),
                Err(e) => return Err(e.into()),
            };
            Ok(Report {
                json: json!({"case": case, "params": element.params, "report": element.report}),
                pretty: format!("{case}: {}\n", element.report),
                csv: None,
                passed: element.report.accepted,
            })
        }
        Gl4Action::Random {
            diagonal,
            antidiagonal,
            angles,
        } => {
            let mut p = FourVectorParams::random(&mut cfg.rng);
            if let Some(a) = angles {
                p.angles = triple(a, "--angles")?;
            }
            if *diagonal {
                p.n = FourVector::ZERO;
                p.l = FourVector::ZERO;
            }
            if *antidiagonal {
                p.k = FourVector::ZERO;
                p.m = FourVector::ZERO;
            }
            Ok(Report {
                json: serde_json::to_value(p).expect("serializable"),
                pretty: params_pretty(&p),
                csv: None,
                passed: true,
            })
        }
        Gl4Action::FromMatrix { matrix, outer, inner } => {
            let y: ComplexMatrix = read_json(matrix)?;
            if y.order() != 4 {
                return Err(CliError::Usage(format!(
                    "expected an order-4 matrix, got order {}",
                    y.order()
                )));
            }
            let outer = outer
                .as_deref()
                .map_or(Ok(EulerAngles::trivial()), |v| triple(v, "--outer"))?;
            let inner = inner
                .as_deref()
                .map_or(Ok(EulerAngles::trivial()), |v| triple(v, "--inner"))?;
            let angles = AngleList::new(vec![outer, inner])?;
            let h = decompose(&y, &all_generators(&angles), STRUCTURAL_TOL)?;
            let p = from_h_factors(&h, outer, inner)?;
            let residual = p.to_matrix().max_abs_diff(&y)?;
            Ok(Report {
                json: json!({"result": p, "matrix_residual": residual}),
                pretty: format!("{}matrix residual {residual:.3e}\n", params_pretty(&p)),
                csv: None,
                passed: residual <= tol,
            })
        }
    }
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> CliResult<Report> {
    let default_tol = match cli.command {
        Command::Gl4 { .. } => GL4_TOL,
        _ => STRUCTURAL_TOL,
    };
    let mut cfg = RunConfig::new(
        cli.global.seed,
        cli.global.tol.unwrap_or(default_tol),
        cli.global.format,
    )?;
    match &cli.command {
        Command::Generate {
            n,
            index,
            family,
            angles,
        } => cmd_generate(&mut cfg, *n, index.as_deref(), *family, angles),
        Command::Enumerate {
            n,
            angles,
            no_brute_force,
            allow_slow,
        } => cmd_enumerate(&mut cfg, *n, angles, *no_brute_force, *allow_slow),
        Command::Verify {
            n,
            family,
            members,
            twist,
            u_matrix,
            angles,
        } => cmd_verify(&mut cfg, *n, *family, members.as_deref(), *twist, *u_matrix, angles),
        Command::Cayley {
            n,
            quintet,
            labels,
            angles,
        } => cmd_cayley(&mut cfg, *n, *quintet, labels.as_deref(), angles),
        Command::Decompose {
            n,
            matrix,
            index,
            basis,
            family,
            angles,
        } => cmd_decompose(
            &mut cfg,
            *n,
            matrix.as_deref(),
            index.as_deref(),
            *basis,
            *family,
            angles,
        ),
        Command::Gl4 { action } => cmd_gl4(&mut cfg, action),
    }
}

fn render(report: &Report, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"),
        Format::Pretty => Ok(report.pretty.clone()),
        Format::Csv => report
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage("csv output is not available for this command".into())),
    }
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let out: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(out, "{}", e.render());
            return code;
        }
    };
    let outcome = execute(&cli).and_then(|report| {
        let text = render(&report, cli.global.format)?;
        match &cli.global.output {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
            None => stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Failure(format!("write failed: {e}")))?,
        }
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            let _ = writeln!(
                stderr,
                "check failed: a residual exceeds the tolerance or the enumeration does not match"
            );
            1
        }
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) => format!("error: {m}"),
                CliError::Failure(m) => format!("verification failed: {m}"),
            };
            let _ = writeln!(stderr, "{msg}");
            e.exit_code()
        }
    }
}
