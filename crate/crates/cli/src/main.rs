//! Terminal front end over the algebra constructor.
//!
//! Subcommands: `classify` validates a descriptor and reports each block's
//! case and reducibility point; `rootdatum` prints the based root datum with
//! its wall parameters; `verify` checks every defining relation by exact
//! computation; `eval` evaluates expressions and prints their normal forms,
//! one basis term per line; `selftest` runs the relation suite on the
//! bundled example descriptors.
//!
//! Exit codes: 0 on success, 1 when the mathematics rejects the input (parity
//! failure, gap in a Jordan multiset, a failed relation check, an expression
//! naming a missing generator), 2 on structural errors (unreadable file,
//! malformed JSON or expression, bad command line).

mod expr;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hecke_core::arith::VLaurent;
use hecke_core::hecke::{
    verify_relations, AlgebraCtx, CoefficientsMode, HeckeElem, RelationReport,
};
use hecke_core::langlands::{
    reducibility_point, ClassifiedBlock, LanglandsDescriptor, Reducibility, ValidatedDescriptor,
};
use hecke_core::rootdatum::{build_root_datum, DenominatorKind};

#[derive(Parser)]
#[command(
    name = "heckealg",
    version,
    about = "Intertwining algebras of cuspidal supports, as affine Hecke algebras with parameters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a descriptor and report each block's case and reducibility.
    Classify {
        #[command(flatten)]
        descriptor: DescriptorArg,
        /// Emit a JSON report instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Print the based root datum and the wall parameters.
    Rootdatum {
        #[command(flatten)]
        descriptor: DescriptorArg,
        /// Emit a JSON report instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Check every defining relation of the algebra by exact computation.
    Verify {
        #[command(flatten)]
        descriptor: DescriptorArg,
        /// Random samples per relation family (0 runs only the structural
        /// checks).
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed of the deterministic sample stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Square scalar of every sign-part generator (nonzero integer).
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        j_square: i64,
        /// Emit a JSON report instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Evaluate expressions and print their normal forms, one term per line.
    Eval {
        #[command(flatten)]
        descriptor: DescriptorArg,
        /// Expression over q, v, integers, b[..], T[..], J[..], phi[..], p[..].
        #[arg(
            required_unless_present = "file",
            conflicts_with = "file",
            allow_hyphen_values = true
        )]
        expression: Option<String>,
        /// Read expressions from a file instead, one per line.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Square scalar of every sign-part generator (nonzero integer).
        #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
        j_square: i64,
        /// Emit a JSON report instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Run the relation suite on the bundled example descriptors.
    Selftest {
        /// Random samples per relation family.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Seed of the deterministic sample stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct DescriptorArg {
    /// Path to a descriptor in the JSON wire format.
    descriptor: PathBuf,
}

/// A failure routed to an exit code: `Usage` -> 2, `Reject` -> 1.
enum Failure {
    Usage(String),
    Reject(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Reject(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Classify { descriptor, json } => classify(&load(&descriptor.descriptor)?, json),
        Command::Rootdatum { descriptor, json } => rootdatum(&load(&descriptor.descriptor)?, json),
        Command::Verify {
            descriptor,
            samples,
            seed,
            j_square,
            json,
        } => verify(
            &load(&descriptor.descriptor)?,
            samples,
            seed,
            j_square,
            json,
        ),
        Command::Eval {
            descriptor,
            expression,
            file,
            j_square,
            json,
        } => {
            let v = load(&descriptor.descriptor)?;
            let expressions = match (&expression, &file) {
                (Some(e), None) => vec![e.clone()],
                (None, Some(path)) => fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
                    .lines()
                    .map(str::trim)
                    .filter(|l| !l.is_empty())
                    .map(String::from)
                    .collect(),
                _ => unreachable!("clap enforces exactly one expression source"),
            };
            eval(&v, &expressions, file.is_some(), j_square, json)
        }
        Command::Selftest { samples, seed } => selftest(samples, seed),
    }
}

fn load(path: &PathBuf) -> Result<ValidatedDescriptor, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_and_validate(&text)
}

fn parse_and_validate(text: &str) -> Result<ValidatedDescriptor, Failure> {
    let descriptor = LanglandsDescriptor::from_json(text)
        .map_err(|e| Failure::Usage(format!("descriptor: {e}")))?;
    descriptor.validate().map_err(|e| {
        if e.is_schema_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Reject(e.to_string())
        }
    })
}

fn algebra(v: &ValidatedDescriptor, j_square: i64) -> Result<Arc<AlgebraCtx>, Failure> {
    if j_square == 1 {
        return Ok(AlgebraCtx::new(&v.blocks));
    }
    let scalars = vec![VLaurent::from_int(j_square); v.blocks.len()];
    AlgebraCtx::with_j_square(&v.blocks, scalars).map_err(|e| Failure::Usage(e.to_string()))
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

fn reducibility_text(v: &ValidatedDescriptor, b: &ClassifiedBlock) -> (Value, String) {
    match reducibility_point(v.descriptor.group, b, &v.descriptor.h) {
        Reducibility::Point(r) => {
            let s = r.to_string();
            (json!(s.clone()), format!("reducibility {s}"))
        }
        Reducibility::AlwaysIrreducible => {
            (json!("always-irreducible"), "always irreducible".into())
        }
        Reducibility::NotApplicable => (Value::Null, "reducibility -".into()),
    }
}

fn classify(v: &ValidatedDescriptor, json_out: bool) -> Result<(), Failure> {
    if json_out {
        let blocks: Vec<Value> = v
            .blocks
            .iter()
            .map(|b| {
                json!({
                    "label": b.label,
                    "k": b.k,
                    "t": b.t,
                    "d": b.d,
                    "case": b.case.to_string(),
                    "d_prime": b.d_prime,
                    "a": b.a,
                    "a_minus": b.a_minus,
                    "swapped": b.swapped,
                    "reducibility": reducibility_text(v, b).0,
                })
            })
            .collect();
        print_json(&json!({
            "schema": 1,
            "command": "classify",
            "group": v.descriptor.group.to_string(),
            "parity": "ok",
            "jord": "gap-free",
            "blocks": blocks,
        }));
    } else {
        println!("group {}", v.descriptor.group);
        println!("parity ok, jord gap-free");
        for b in &v.blocks {
            let mut line = format!(
                "block {}: case {}, k={}, d={}, d'={}, t={}",
                b.label, b.case, b.k, b.d, b.d_prime, b.t
            );
            if let (Some(a), Some(a_minus)) = (b.a, b.a_minus) {
                line.push_str(&format!(", a={a}, a_minus={a_minus}"));
                if b.swapped {
                    line.push_str(" (swapped)");
                }
            }
            println!("{line}, {}", reducibility_text(v, b).1);
        }
    }
    Ok(())
}

fn rootdatum(v: &ValidatedDescriptor, json_out: bool) -> Result<(), Failure> {
    let datum = build_root_datum(&v.blocks);
    datum
        .verify_root_system()
        .map_err(|e| Failure::Reject(format!("root system inconsistency: {e}")))?;
    let wall_kind = |k: DenominatorKind| match k {
        DenominatorKind::Simple => "simple",
        DenominatorKind::SplitQuadratic => "split-quadratic",
    };
    if json_out {
        let walls: Vec<Value> = datum
            .walls
            .iter()
            .map(|w| {
                json!({
                    "generator": w.gen.to_string(),
                    "kind": wall_kind(w.kind),
                    "q_exponent": w.quad_v_exponent / 2,
                    "wall_vector": w.wall_vector,
                    "split_v_exponents": w.split_v_exponents.map(|(a, b)| vec![a, b]),
                })
            })
            .collect();
        let coroots: Vec<Vec<String>> = datum
            .simple_coroots
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect())
            .collect();
        print_json(&json!({
            "schema": 1,
            "command": "rootdatum",
            "rank": datum.rank(),
            "dims": datum.dims,
            "ts": datum.ts,
            "cases": datum.cases.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "generators": datum.gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "simple_roots": datum.simple_roots,
            "simple_coroots": coroots,
            "sigma_plus": datum.positive_roots(),
            "walls": walls,
            "cartan": datum.cartan_summary(),
            "root_system": "verified",
        }));
    } else {
        println!("cartan: {}", datum.cartan_summary());
        println!(
            "rank {}, {} simple roots, {} positive roots, root system verified",
            datum.rank(),
            datum.gens.len(),
            datum.positive_roots().len()
        );
        for (i, w) in datum.walls.iter().enumerate() {
            let mut line = format!(
                "{}  {:<15} q^{}  root {:?}",
                w.gen,
                wall_kind(w.kind),
                w.quad_v_exponent / 2,
                datum.simple_roots[i]
            );
            if let Some((a, b)) = w.split_v_exponents {
                line.push_str(&format!("  split v-exponents ({a}, {b})"));
            }
            println!("{line}");
        }
    }
    Ok(())
}

fn report_json(report: &RelationReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "cases": c.cases,
                "failures": c.failures,
                "witness": c.witness,
            })
        })
        .collect();
    json!({
        "schema": 1,
        "command": "verify",
        "seed": report.seed,
        "samples": report.sample_count,
        "all_passed": report.all_passed(),
        "checks": checks,
    })
}

fn verify(
    v: &ValidatedDescriptor,
    samples: usize,
    seed: u64,
    j_square: i64,
    json_out: bool,
) -> Result<(), Failure> {
    let ctx = algebra(v, j_square)?;
    let report = verify_relations(&ctx, samples, seed);
    if json_out {
        print_json(&report_json(&report));
    } else {
        print!("{report}");
        println!(
            "seed {seed}, {samples} samples per family: {}",
            if report.all_passed() {
                "all relations hold"
            } else {
                "FAILED"
            }
        );
    }
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name)
            .collect();
        Err(Failure::Reject(format!(
            "relation checks failed: {}",
            failed.join(", ")
        )))
    }
}

fn eval_one(
    ctx: &Arc<AlgebraCtx>,
    expression: &str,
) -> Result<(HeckeElem, CoefficientsMode), Failure> {
    let ast = expr::parse(expression).map_err(|e| Failure::Usage(e.to_string()))?;
    let elem = expr::eval(&ast, ctx).map_err(|e| match e {
        expr::ExprError::Parse { .. } => Failure::Usage(e.to_string()),
        other => Failure::Reject(other.to_string()),
    })?;
    let mode = elem.coefficients_mode();
    Ok((elem, mode))
}

fn eval(
    v: &ValidatedDescriptor,
    expressions: &[String],
    from_file: bool,
    j_square: i64,
    json_out: bool,
) -> Result<(), Failure> {
    let ctx = algebra(v, j_square)?;
    let mut results = Vec::new();
    for e in expressions {
        let (elem, mode) = eval_one(&ctx, e)?;
        results.push((e, elem, mode));
    }
    if json_out {
        let reports: Vec<Value> = results
            .iter()
            .map(|(e, elem, mode)| {
                json!({
                    "expression": e,
                    "terms": elem.rendered_terms(),
                    "coefficients": mode.to_string(),
                    "closed": *mode != CoefficientsMode::Rational,
                })
            })
            .collect();
        if from_file {
            print_json(&json!({
                "schema": 1,
                "command": "eval",
                "results": reports,
            }));
        } else {
            let mut single = reports.into_iter().next().expect("one expression");
            let obj = single.as_object_mut().expect("object report");
            obj.insert("schema".into(), json!(1));
            obj.insert("command".into(), json!("eval"));
            print_json(&single);
        }
    } else {
        for (e, elem, mode) in &results {
            if from_file {
                println!("-- {e}");
            }
            if elem.is_zero() {
                println!("0");
            } else {
                for line in elem.rendered_terms() {
                    println!("{line}");
                }
            }
            println!("coefficients: {mode}");
            if *mode == CoefficientsMode::Rational {
                println!(
                    "not closed: a coefficient left the Laurent ring; polynomial \
                     form is guaranteed only for monomials on the sublattice"
                );
            }
        }
    }
    Ok(())
}

const BUNDLED: [(&str, &str); 5] = [
    ("case-i", include_str!("../descriptors/case-i.json")),
    ("case-ii", include_str!("../descriptors/case-ii.json")),
    ("case-iib", include_str!("../descriptors/case-iib.json")),
    ("case-iii", include_str!("../descriptors/case-iii.json")),
    ("mixture", include_str!("../descriptors/mixture.json")),
];

fn selftest(samples: usize, seed: u64) -> Result<(), Failure> {
    println!("seed {seed}, {samples} samples per family");
    let mut failed = Vec::new();
    for (name, text) in BUNDLED {
        let v = parse_and_validate(text)
            .map_err(|_| Failure::Reject(format!("bundled descriptor '{name}' is invalid")))?;
        let ctx = AlgebraCtx::new(&v.blocks);
        let start = Instant::now();
        let report = verify_relations(&ctx, samples, seed);
        let cases: usize = report.checks.iter().map(|c| c.cases).sum();
        if report.all_passed() {
            println!(
                "ok    {:<10} {} checks, {} cases, {} ms",
                name,
                report.checks.len(),
                cases,
                start.elapsed().as_millis()
            );
        } else {
            println!("FAIL  {name}");
            print!("{report}");
            failed.push(name);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Reject(format!(
            "self-test failures: {}",
            failed.join(", ")
        )))
    }
}
