use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hss_core::polyring::{GaussRational, Polynomial};
use hss_core::rigidity::{
    default_max_order, find_nondegeneracy_witness, flattening_jacobian, irreducibility_oracle, isometry_pullback_check,
    support_claims, transversality_rank, transversality_recipe, volume_equation_check, OracleOutcome, RationalMap,
};
use hss_core::segre::{
    build_rho, einstein_fit, identity_checks, kahler_metric, random_point, random_rational, SegreFamily, SAMPLE_RADIUS,
};
use hss_core::selftest::{corrupted_table, run_criterion, SelftestOptions, SelftestReport, DEFAULT_SEED};
use hss_core::spaces::{Space, SpaceDescriptor};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

mod maps;
mod report;

use maps::{parse_map_file, MapFile};
use report::{render, Format};

/// Verification toolkit for irreducible Hermitian symmetric spaces of compact type.
#[derive(Parser, Debug)]
#[command(name = "hss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for randomized commands; HSS_SEED overrides it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance of float checks.
    #[arg(long, global = true)]
    float_tol: Option<f64>,
    /// Tolerance of the V·ρ^λ constancy fit.
    #[arg(long, global = true, default_value_t = 1e-8)]
    einstein_tol: f64,
    /// Work budget of the irreducibility oracle.
    #[arg(long, global = true, default_value_t = 1e7)]
    oracle_budget: f64,
    /// Jet order bound of the witness search (default 1 + N − n).
    #[arg(long, global = true)]
    max_jet_order: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions, Einstein constant and embedding of a space.
    Describe {
        #[arg(long)]
        space: String,
    },
    /// The Segre family ρ(z, ξ).
    Rho {
        #[arg(long)]
        space: String,
    },
    /// Kähler metric of i∂∂̄ log ρ at a point.
    Metric {
        #[arg(long)]
        space: String,
        /// JSON array of [re, im] pairs; a random point when absent.
        #[arg(long)]
        point: Option<String>,
    },
    /// Fit of the volume density against ρ^{-λ}.
    Einstein {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Nondegeneracy witness for a map (identity by default).
    Hyp1 {
        #[arg(long)]
        space: String,
        #[arg(long)]
        maps: Option<PathBuf>,
        /// Which map of the file to test.
        #[arg(long, default_value_t = 0)]
        map_index: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 1_000_000)]
        row_budget: usize,
    },
    /// Transversality rank and flattening Jacobian.
    Hyp2 {
        #[arg(long)]
        space: String,
    },
    /// Support facts of ρ and irreducibility over a finite field.
    Hyp3 {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 5)]
        prime: u64,
    },
    /// Residual of Σ λ_j log det J F_j against the Einstein volume equation.
    VolumeCheck {
        #[arg(long)]
        space: String,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Residual of F*ω − ω for every map of the file.
    IsometryCheck {
        #[arg(long)]
        space: String,
        #[arg(long)]
        maps: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Runs the verification matrix.
    Selftest {
        /// Run only these criteria (1..9).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[arg(long, default_value_t = 400)]
        e27_row_budget: usize,
        /// Mutation hook: use an octonion table with e1e2 and e2e1 negated.
        #[arg(long, hide = true)]
        corrupt_octonion_table: bool,
    },
}

const DEFAULT_FLOAT_TOL: f64 = 1e-9;

enum Failure {
    Usage(String),
    Check(Value),
}

struct Outcome {
    report: Value,
    passed: bool,
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

struct Job {
    cli: Cli,
    seed: u64,
    seed_source: &'static str,
}

impl Job {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn float_tol(&self) -> f64 {
        self.cli.float_tol.unwrap_or(DEFAULT_FLOAT_TOL)
    }

    fn config(&self) -> Value {
        let (name, extra) = match &self.cli.command {
            Command::Describe { space } | Command::Rho { space } | Command::Hyp2 { space } => {
                (command_name(&self.cli.command), json!({"space": space}))
            }
            Command::Metric { space, point } => ("metric", json!({"space": space, "point": point})),
            Command::Einstein { space, samples } => ("einstein", json!({"space": space, "samples": samples})),
            Command::Hyp1 { space, maps, map_index, trials, row_budget } => (
                "hyp1",
                json!({"space": space, "maps": maps, "map_index": map_index, "trials": trials, "row_budget": row_budget}),
            ),
            Command::Hyp3 { space, prime } => ("hyp3", json!({"space": space, "prime": prime})),
            Command::VolumeCheck { space, maps, samples } | Command::IsometryCheck { space, maps, samples } => {
                (command_name(&self.cli.command), json!({"space": space, "maps": maps, "samples": samples}))
            }
            Command::Selftest { only, e27_row_budget, corrupt_octonion_table } => (
                "selftest",
                json!({"only": only, "e27_row_budget": e27_row_budget, "corrupt_octonion_table": corrupt_octonion_table}),
            ),
        };
        let mut c = json!({
            "command": name,
            "seed": self.seed,
            "seed_source": self.seed_source,
            "float_tol": match self.cli.command {
                Command::Selftest { .. } => self.cli.float_tol,
                _ => Some(self.float_tol()),
            },
            "einstein_tol": self.cli.einstein_tol,
            "oracle_budget": self.cli.oracle_budget,
            "max_jet_order": self.cli.max_jet_order,
            "output": format!("{:?}", self.cli.output).to_lowercase(),
        });
        if let (Value::Object(c), Value::Object(e)) = (&mut c, extra) {
            c.extend(e);
        }
        c
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Describe { .. } => "describe",
        Command::Rho { .. } => "rho",
        Command::Metric { .. } => "metric",
        Command::Einstein { .. } => "einstein",
        Command::Hyp1 { .. } => "hyp1",
        Command::Hyp2 { .. } => "hyp2",
        Command::Hyp3 { .. } => "hyp3",
        Command::VolumeCheck { .. } => "volume-check",
        Command::IsometryCheck { .. } => "isometry-check",
        Command::Selftest { .. } => "selftest",
    }
}

fn space_of(spec: &str) -> Result<Space, Failure> {
    let d = SpaceDescriptor::parse(spec).map_err(usage)?;
    Space::build(d).map_err(usage)
}

fn family(spec: &str) -> Result<SegreFamily, Failure> {
    Ok(build_rho(&space_of(spec)?))
}

fn load_maps(path: &PathBuf, space: &Space) -> Result<MapFile, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_map_file(&text, space).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn gauss_strings(v: &[GaussRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn complex_pair(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn poly_json(p: &Polynomial) -> Value {
    serde_json::to_value(p.to_json()).expect("polynomial serializes")
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn describe(spec: &str) -> Result<Outcome, Failure> {
    let s = space_of(spec)?;
    Ok(Outcome {
        report: json!({
            "kind": s.desc.kind_name(),
            "params": s.desc.params(),
            "space": s.desc.to_string(),
            "n": s.n,
            "N": s.big_n,
            "lambda": s.einstein_lambda,
            "vars": s.var_names(),
            "psi": s.psi.iter().map(poly_json).collect::<Vec<_>>(),
        }),
        passed: true,
    })
}

fn rho(spec: &str) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    Ok(Outcome {
        report: json!({
            "space": f.space.desc.to_string(),
            "n": f.n(),
            "xi_vars": f.space.xi_names,
            "weights": gauss_strings(&f.space.weights),
            "rho": poly_json(&f.rho),
        }),
        passed: true,
    })
}

fn parse_point(text: &str, n: usize) -> Result<Vec<Complex64>, Failure> {
    let v: Vec<[f64; 2]> = serde_json::from_str(text)
        .map_err(|e| Failure::Usage(format!("--point at line {}, column {}: {e}", e.line(), e.column())))?;
    if v.len() != n {
        return Err(Failure::Usage(format!("--point has {} coordinates, space has dimension {n}", v.len())));
    }
    Ok(v.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
}

fn metric(job: &Job, spec: &str, point: Option<&str>) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let z = match point {
        Some(p) => parse_point(p, f.n())?,
        None => random_point(&mut job.rng(), f.n(), SAMPLE_RADIUS),
    };
    let m = kahler_metric(&f, &z).map_err(|e| Failure::Check(json!({"space": spec, "error": e.to_string()})))?;
    let g: Vec<Vec<Value>> =
        (0..m.g.nrows()).map(|i| (0..m.g.ncols()).map(|j| complex_pair(m.g[(i, j)])).collect()).collect();
    Ok(Outcome {
        report: json!({
            "space": f.space.desc.to_string(),
            "point": z.iter().map(|c| complex_pair(*c)).collect::<Vec<_>>(),
            "rho": f.rho_zzbar(&z),
            "g": g,
            "volume_density": m.volume_density,
        }),
        passed: true,
    })
}

fn einstein(job: &Job, spec: &str, samples: usize) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let mut rng = job.rng();
    let checks = identity_checks(&f, 20, &mut rng);
    let expected = f.space.einstein_lambda;
    let mut report = json!({
        "space": f.space.desc.to_string(),
        "expected_lambda": expected,
        "identity_checks": to_value(&checks),
    });
    let identities_ok = checks.rho_origin_is_one
        && checks.swap_symmetric
        && checks.rho_zzbar_at_least_one
        && checks.determinant_identity != Some(false);
    let passed = match einstein_fit(&f, samples, &mut rng) {
        Ok(fit) => {
            report["lambda"] = json!(fit.lambda);
            report["c"] = json!(fit.c);
            report["residual"] = json!(fit.max_residual);
            report["einstein_residual"] = json!(fit.max_residual);
            fit.max_residual < job.cli.einstein_tol && expected.is_none_or(|l| l == fit.lambda)
        }
        Err(e) => {
            report["lambda"] = Value::Null;
            report["error"] = json!(e.to_string());
            false
        }
    };
    Ok(Outcome { report, passed: passed && identities_ok })
}

fn rigidity_report(hypothesis: &str, spec: &str, witness: Value, evidence: &str, seed: u64) -> Value {
    json!({"hypothesis": hypothesis, "space": spec, "witness": witness, "evidence": evidence, "seed": seed})
}

fn hyp1(
    job: &Job,
    spec: &str,
    maps: Option<&PathBuf>,
    index: usize,
    trials: usize,
    budget: usize,
) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let map = match maps {
        Some(p) => {
            let mut file = load_maps(p, &f.space)?;
            if index >= file.maps.len() {
                return Err(Failure::Usage(format!("--map-index {index} but the file holds {} maps", file.maps.len())));
            }
            file.maps.swap_remove(index)
        }
        None => RationalMap::identity(&f.space),
    };
    let max_order = job.cli.max_jet_order.unwrap_or_else(|| default_max_order(&f.space));
    let out = find_nondegeneracy_witness(&f, &map, max_order, trials, budget, &mut job.rng())
        .map_err(|e| Failure::Check(rigidity_report("I", spec, json!({"error": e.to_string()}), "exact", job.seed)))?;
    let passed = out.found();
    let mut report = rigidity_report("I", spec, if passed { to_value(&out) } else { Value::Null }, "exact", job.seed);
    report["max_order"] = json!(max_order);
    if !passed {
        report["search"] = to_value(&out);
    }
    Ok(Outcome { report, passed })
}

fn hyp2(job: &Job, spec: &str) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let fail = |e: String| Failure::Check(rigidity_report("II", spec, json!({"error": e}), "exact", job.seed));
    let (xi, z0, z1) = transversality_recipe(&f, &mut job.rng()).map_err(|e| fail(e.to_string()))?;
    let rank = transversality_rank(&f, &xi, &z0, &z1).map_err(|e| fail(e.to_string()))?;
    let flattening = flattening_jacobian(&f, &xi, &z0, &z1).ok();
    let witness = json!({
        "xi0": gauss_strings(&xi),
        "z0": gauss_strings(&z0),
        "z1": gauss_strings(&z1),
        "rank": rank,
        "flattening": flattening.as_ref().map(to_value),
    });
    Ok(Outcome { report: rigidity_report("II", spec, witness, "exact", job.seed), passed: rank == 2 })
}

fn hyp3(job: &Job, spec: &str, prime: u64) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let mut rng = job.rng();
    let support = support_claims(&f, &mut rng).map_err(|e| {
        Failure::Check(rigidity_report("III", spec, json!({"error": e.to_string()}), "support-only", job.seed))
    })?;
    let (oracle, evidence) = if f.space.desc == SpaceDescriptor::E27 {
        (None, "support-only")
    } else {
        let xi: Vec<GaussRational> = (0..f.n()).map(|_| random_rational(&mut rng, 97)).collect();
        let r = f.to_space_ring(&f.rho_at_xi(&xi));
        let out = irreducibility_oracle(&r, prime, u32::MAX, job.cli.oracle_budget).map_err(usage)?;
        (Some((xi, out)), "exact")
    };
    let certified = oracle.as_ref().is_none_or(|(_, o)| *o == OracleOutcome::IrreducibleCertified);
    let witness = json!({
        "support": to_value(&support),
        "oracle": oracle.as_ref().map(|(xi, o)| json!({"prime": prime, "xi": gauss_strings(xi), "result": to_value(o)})),
    });
    let mut report = rigidity_report("III", spec, witness, evidence, job.seed);
    report["connectivity"] = json!("shadow check only: irreducibility of rho and a regular sample of the family");
    Ok(Outcome { report, passed: support.all_pass && certified })
}

fn volume_check(job: &Job, spec: &str, path: &PathBuf, samples: usize) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let file = load_maps(path, &f.space)?;
    let lambdas: Vec<f64> = match &file.lambdas {
        Some(ls) => ls.iter().map(|l| l.value()).collect(),
        None => vec![1.0; file.maps.len()],
    };
    let residual = volume_equation_check(&f, &file.maps, &lambdas, samples, &mut job.rng())
        .map_err(|e| Failure::Check(json!({"space": spec, "error": e.to_string()})))?;
    let lambda_json = match &file.lambdas {
        Some(ls) => Value::Array(ls.iter().map(|l| l.to_json()).collect()),
        None => json!("default: 1 per map"),
    };
    Ok(Outcome {
        report: json!({
            "space": f.space.desc.to_string(),
            "maps": file.maps.len(),
            "lambdas": lambda_json,
            "residual": residual,
            "tolerance": job.float_tol(),
        }),
        passed: residual < job.float_tol(),
    })
}

fn isometry_check(job: &Job, spec: &str, path: &PathBuf, samples: usize) -> Result<Outcome, Failure> {
    let f = family(spec)?;
    let file = load_maps(path, &f.space)?;
    let mut rng = job.rng();
    let mut residuals = Vec::new();
    for m in &file.maps {
        let r = isometry_pullback_check(&f, m, samples, &mut rng)
            .map_err(|e| Failure::Check(json!({"space": spec, "error": e.to_string()})))?;
        residuals.push(r);
    }
    let passed = residuals.iter().all(|&r| r < job.float_tol());
    Ok(Outcome {
        report: json!({
            "space": f.space.desc.to_string(),
            "residuals": residuals,
            "tolerance": job.float_tol(),
        }),
        passed,
    })
}

fn selftest(job: &Job, only: &[u8], e27_row_budget: usize, corrupt: bool) -> Result<Outcome, Failure> {
    let mut opts =
        SelftestOptions { seed: job.seed, float_tol: job.cli.float_tol, e27_row_budget, ..Default::default() };
    if corrupt {
        opts.table = corrupted_table();
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=9).collect() } else { only.to_vec() };
    let mut criteria = Vec::new();
    for id in ids {
        criteria.push(run_criterion(id, &opts).ok_or_else(|| Failure::Usage(format!("no criterion {id}; use 1..9")))?);
    }
    let all_passed = criteria.iter().all(|c| c.passed);
    for c in criteria.iter().filter(|c| !c.passed) {
        eprintln!("criterion {} failed ({}): {}", c.id, c.name, c.detail);
    }
    let rep = SelftestReport { seed: job.seed, criteria, all_passed };
    Ok(Outcome { report: to_value(&rep), passed: all_passed })
}

fn run(job: &Job) -> Result<Outcome, Failure> {
    if let Some(t) = job.cli.float_tol {
        if !(t > 0.0) {
            return Err(Failure::Usage("--float-tol must be positive".into()));
        }
    }
    if !(job.cli.einstein_tol > 0.0) || !(job.cli.oracle_budget > 0.0) {
        return Err(Failure::Usage("tolerances and budgets must be positive".into()));
    }
    match &job.cli.command {
        Command::Describe { space } => describe(space),
        Command::Rho { space } => rho(space),
        Command::Metric { space, point } => metric(job, space, point.as_deref()),
        Command::Einstein { space, samples } => einstein(job, space, *samples),
        Command::Hyp1 { space, maps, map_index, trials, row_budget } => {
            hyp1(job, space, maps.as_ref(), *map_index, *trials, *row_budget)
        }
        Command::Hyp2 { space } => hyp2(job, space),
        Command::Hyp3 { space, prime } => hyp3(job, space, *prime),
        Command::VolumeCheck { space, maps, samples } => volume_check(job, space, maps, *samples),
        Command::IsometryCheck { space, maps, samples } => isometry_check(job, space, maps, *samples),
        Command::Selftest { only, e27_row_budget, corrupt_octonion_table } => {
            selftest(job, only, *e27_row_budget, *corrupt_octonion_table)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (seed, seed_source) = match std::env::var("HSS_SEED") {
        Ok(s) => match s.trim().parse::<u64>() {
            Ok(v) => (v, "env"),
            Err(_) => {
                eprintln!("error: HSS_SEED={s:?} is not an unsigned integer");
                return ExitCode::from(2);
            }
        },
        Err(_) => match cli.seed {
            Some(v) => (v, "flag"),
            None => (DEFAULT_SEED, "default"),
        },
    };
    let job = Job { cli, seed, seed_source };
    let (body, code) = match run(&job) {
        Ok(o) => (o.report, if o.passed { 0 } else { 1 }),
        Err(Failure::Check(v)) => (v, 1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let mut top = match body {
        Value::Object(m) => m,
        other => Map::from_iter([("result".to_string(), other)]),
    };
    top.insert("config".into(), job.config());
    top.insert("passed".into(), json!(code == 0));
    println!("{}", render(&Value::Object(top), job.cli.output));
    ExitCode::from(code)
}
