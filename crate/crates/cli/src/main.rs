//! Command-line front end: exhaustive verification of the
//! coefficient-reduction bijection at small dimension, plus one-shot
//! projector lifting, isomorphism lifting, classification and
//! idempotent enumeration over JSON files.
//!
//! Exit codes: 0 success (or a pass verdict), 1 fail verdict, 2 invalid
//! input, 3 resource limit exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use quadric_motives::error::Error;
use quadric_motives::harness::{
    algebra_soundness_check, enumerate_idempotents_mod2, reduction_bijection_check,
};
use quadric_motives::json as qjson;
use quadric_motives::lifting::{classify, lift_isomorphism, lift_projector, IsoOutcome};
use quadric_motives::motive::Motive;
use quadric_motives::quadric::{Bits, GaloisContext, SplitQuadric};
use quadric_motives::rationality::RationalityContext;
use quadric_motives::Correspondence;

#[derive(Parser)]
#[command(
    name = "qmotive",
    about = "Chow groups and correspondences of split quadrics, with projector and isomorphism lifting between coefficient rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify that coefficient reduction is a bijection on isomorphism
    /// classes, exhaustively over all shapes up to a dimension bound.
    Verify {
        /// Largest quadric dimension to check
        #[arg(long, default_value_t = 2)]
        dim_max: u32,
        /// Coefficient exponent: lifts run through Z/2^n
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Number of marked Galois involutions
        #[arg(long, default_value_t = 1)]
        galois_r: usize,
        /// Seed for the randomised algebra soundness sweep
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lift a rational Galois-invariant idempotent mod 2^n to an
    /// integral projector.
    LiftProjector {
        /// JSON input: {"galois", "projector", "extra_generators"?}
        #[arg(long)]
        input: PathBuf,
    },
    /// Build an integral isomorphism between two integral motives out
    /// of a mod-2^n one, or report that none exists.
    LiftIso {
        /// JSON input: {"galois", "rho", "sigma", "alpha", "extra_generators"?}
        #[arg(long)]
        input: PathBuf,
    },
    /// Compute the isomorphism-class invariant of a motive.
    Classify {
        /// JSON input: {"galois", "projector"}
        #[arg(long)]
        input: PathBuf,
    },
    /// Enumerate the Galois-invariant idempotents mod 2 in the default
    /// rational span of one quadric shape.
    Enumerate {
        /// Quadric dimension
        #[arg(long)]
        dim: u32,
        /// Discriminant character as a string of 0/1, one bit per involution
        #[arg(long, default_value = "0")]
        disc: String,
        /// Coefficient exponent of the ambient context
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::ResourceLimit(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Verify {
            dim_max,
            n,
            galois_r,
            seed,
        } => {
            let galois = GaloisContext::new(galois_r, n)?;
            eprintln!("algebra soundness sweep (seed {seed})");
            let triples = algebra_soundness_check(seed, 600)?;
            eprintln!("checked {triples} random triples");
            eprintln!("reduction bijection check up to dimension {dim_max}, mod 2^{n}");
            let report = reduction_bijection_check(dim_max, galois, n)?;
            for shape in &report.shapes {
                eprintln!(
                    "dim {} disc {:?}: {} mod-2 classes, {} integral, surjectivity {}, injectivity {}",
                    shape.dim,
                    shape.disc,
                    shape.mod2_classes,
                    shape.integral_classes,
                    shape.surjectivity,
                    shape.injectivity
                );
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("report serialises"));
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::LiftProjector { input } => {
            let doc = read_json(&input)?;
            let obj = doc
                .as_object()
                .ok_or_else(|| Error::InvalidInput("input must be a JSON object".into()))?;
            let galois = qjson::galois_from_json(field(obj, "galois")?)?;
            let tau = qjson::correspondence_from_json(field(obj, "projector")?)?;
            if tau.source() != tau.target() {
                return Err(Error::QuadricMismatch);
            }
            let extra = extra_generators(obj)?;
            let ctx = RationalityContext::with_generators(
                galois,
                *tau.source(),
                *tau.target(),
                extra,
            )?;
            let lifted = lift_projector(&tau, &ctx)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&qjson::correspondence_to_json(&lifted))
                    .expect("correspondence serialises")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::LiftIso { input } => {
            let doc = read_json(&input)?;
            let obj = doc
                .as_object()
                .ok_or_else(|| Error::InvalidInput("input must be a JSON object".into()))?;
            let galois = qjson::galois_from_json(field(obj, "galois")?)?;
            let rho = qjson::correspondence_from_json(field(obj, "rho")?)?;
            let sigma = qjson::correspondence_from_json(field(obj, "sigma")?)?;
            let alpha = qjson::correspondence_from_json(field(obj, "alpha")?)?;
            let extra = extra_generators(obj)?;
            let ctx = RationalityContext::with_generators(
                galois,
                *rho.source(),
                *sigma.source(),
                extra,
            )?;
            let outcome = lift_isomorphism(&rho, &sigma, &alpha, &ctx)?;
            let out = match outcome {
                IsoOutcome::Isomorphic(c) => json!({
                    "result": "isomorphic",
                    "isomorphism": qjson::correspondence_to_json(&c),
                }),
                IsoOutcome::NotIsomorphic(reason) => json!({
                    "result": "not isomorphic",
                    "reason": reason.describe(),
                }),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serialises"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { input } => {
            let doc = read_json(&input)?;
            let obj = doc
                .as_object()
                .ok_or_else(|| Error::InvalidInput("input must be a JSON object".into()))?;
            let _galois = qjson::galois_from_json(field(obj, "galois")?)?;
            let projector = qjson::correspondence_from_json(field(obj, "projector")?)?;
            let motive = Motive::new(projector)?;
            let class = classify(&motive)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&qjson::iso_class_to_json(&class))
                    .expect("serialises")
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { dim, disc, n } => {
            let bits: Vec<u8> = disc
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(Error::InvalidInput(format!(
                        "discriminant must be a string of 0/1, got {disc:?}"
                    ))),
                })
                .collect::<Result<_, _>>()?;
            let galois = GaloisContext::new(bits.len(), n)?;
            let q = SplitQuadric::new(dim, Bits::from_bits(&bits)?)?;
            let ctx = RationalityContext::standard(galois, q, q)?;
            let idems = enumerate_idempotents_mod2(&q, &ctx)?;
            let out = json!({
                "count": idems.len(),
                "idempotents": idems
                    .iter()
                    .map(qjson::correspondence_to_json)
                    .collect::<Vec<Value>>(),
            });
            println!("{}", serde_json::to_string_pretty(&out).expect("serialises"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_json(path: &Path) -> Result<Value, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::InvalidInput(format!("bad JSON in {}: {e}", path.display())))
}

fn field<'v>(
    obj: &'v serde_json::Map<String, Value>,
    key: &str,
) -> Result<&'v Value, Error> {
    obj.get(key)
        .ok_or_else(|| Error::InvalidInput(format!("missing field {key:?}")))
}

fn extra_generators(
    obj: &serde_json::Map<String, Value>,
) -> Result<Vec<Correspondence>, Error> {
    match obj.get("extra_generators") {
        None => Ok(Vec::new()),
        Some(v) => v
            .as_array()
            .ok_or_else(|| Error::InvalidInput("extra_generators must be an array".into()))?
            .iter()
            .map(qjson::correspondence_from_json)
            .collect(),
    }
}
