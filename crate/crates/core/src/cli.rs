//! The `design-forge` command line.
//!
//! Exit status: 0 on success, 1 when a design or GDD fails verification,
//! 2 for usage errors and missing ingredients.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assemble::{construct_design, AdmissibleOrder};
use crate::blocks::{catalog, catalog_text, develop, difference_transversal_check, BaseBlock};
use crate::certify::{
    certify, certify_raw_edges_in_mode, read_certificate, write_certificate, Certificate,
};
use crate::error::{Error, Result};
use crate::gdd::{gdd_24_t, verify_gdd, GddType, IngredientStore, MolsTdProvider};
use crate::targets::{is_isomorphic, srg_parameters, SrgParameters, TargetId};

/// Environment variable naming an ingredient directory; `--ingredients` wins.
pub const INGREDIENTS_ENV: &str = "DESIGN_FORGE_INGREDIENTS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "design-forge",
    version,
    about = "Build and verify Shrikhande-graph and L(K4,4) designs"
)]
pub struct Cli {
    /// Directory of ingredient 4-GDDs used instead of the built-in ones.
    #[arg(long, global = true, value_name = "DIR")]
    pub ingredients: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a design, certify it, and write its certificate.
    Construct {
        /// shrikhande or lk44
        #[arg(long)]
        graph: TargetId,
        #[arg(long)]
        order: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a certificate file and print the report.
    Verify {
        path: PathBuf,
        /// Check each block's edge set by isomorphism search instead of trusting the tuple.
        #[arg(long)]
        raw: bool,
    },
    /// Build and verify a 4-GDD of type 24^t.
    Gdd {
        #[arg(long = "type", value_name = "24^t")]
        ty: GddType,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the base blocks and the target edge lists.
    Catalog,
    /// Check the base blocks by both methods and the target graphs' parameters.
    Selftest {
        /// Random single-label mutations checked per base block.
        #[arg(long, default_value_t = 100)]
        mutations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the command line with the process environment and standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = std::env::var_os(INGREDIENTS_ENV).map(PathBuf::from);
    run_with(
        args,
        env,
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}

/// [`run`] with the ingredient variable and the output streams supplied.
pub fn run_with<I, T>(
    args: I,
    ingredients_env: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    let ingredients = cli.ingredients.clone().or(ingredients_env);
    match execute(cli.command, ingredients, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::VerificationFailed(_) => EXIT_FAIL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn load_store(dir: Option<PathBuf>) -> Result<IngredientStore> {
    match dir {
        Some(dir) => IngredientStore::from_dir(&dir),
        None => IngredientStore::builtin(),
    }
}

fn execute(command: Command, ingredients: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Construct {
            graph,
            order,
            out: path,
        } => {
            let n = AdmissibleOrder::new(order)?;
            let store = load_store(ingredients)?;
            let design = construct_design(graph, n, &store)?;
            let cert = Certificate::complete(&design);
            let report = certify(&cert);
            if !report.pass {
                write!(out, "{report}")?;
                return Err(Error::VerificationFailed(format!(
                    "constructed design of order {order} failed certification; nothing written"
                )));
            }
            write_certificate(&cert, &path)?;
            writeln!(
                out,
                "wrote {} blocks of {graph} for order {order} to {} (certified)",
                cert.blocks.len(),
                path.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Verify { path, raw } => {
            let cert = match read_certificate(&path) {
                Ok(c) => c,
                Err(e @ Error::Parse { .. }) => {
                    writeln!(out, "result: FAIL\nparse: {e}")?;
                    return Ok(EXIT_FAIL);
                }
                Err(e) => return Err(e),
            };
            let report = if raw {
                certify_raw_edges_in_mode(cert.order, cert.mode, &cert.to_raw_edges(), cert.target)
            } else {
                certify(&cert)
            };
            write!(out, "{report}")?;
            Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Gdd { ty, out: path } => {
            let t = match ty.parts.as_slice() {
                &[(24, t)] => t,
                _ => {
                    return Err(Error::Precondition(format!(
                        "only types 24^t are built, got {ty}"
                    )))
                }
            };
            let store = load_store(ingredients)?;
            let gdd = gdd_24_t(t, &store, &MolsTdProvider)?;
            let report = verify_gdd(&gdd);
            writeln!(out, "{}", gdd.provenance())?;
            writeln!(out, "{}", report.summary())?;
            if !report.pass {
                return Ok(EXIT_FAIL);
            }
            fs::write(&path, gdd.to_text())?;
            writeln!(
                out,
                "wrote {} blocks to {}",
                gdd.blocks().len(),
                path.display()
            )?;
            Ok(EXIT_OK)
        }
        Command::Catalog => {
            writeln!(
                out,
                "# base blocks: <target> <n> <omega> <labels of vertices 1..16>"
            )?;
            write!(out, "{}", catalog_text())?;
            for target in TargetId::ALL {
                writeln!(out, "# {target} edges")?;
                write!(out, "{}", target.graph().graph.to_text())?;
            }
            Ok(EXIT_OK)
        }
        Command::Selftest { mutations, seed } => {
            let ok = selftest(mutations, seed, out)?;
            Ok(if ok { EXIT_OK } else { EXIT_FAIL })
        }
    }
}

/// Whether developing `b` yields a design that certifies.
pub fn develops_to_design(b: &BaseBlock) -> bool {
    develop(b).is_ok_and(|d| certify(&Certificate::complete(&d)).pass)
}

/// `b` with one label replaced by a different random element.
pub fn random_mutation(b: &BaseBlock, rng: &mut impl Rng) -> Result<BaseBlock> {
    let position = rng.gen_range(0..b.labels.len());
    let order = b.ring.order();
    let current = b.labels[position].code();
    let offset = rng.gen_range(1..order);
    b.with_label(position, (current + offset) % order)
}

fn selftest(mutations: usize, seed: u64, out: &mut dyn Write) -> Result<bool> {
    let mut all = true;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for entry in catalog() {
        let base = entry.base_block()?;
        let mut cases = vec![base.clone()];
        for _ in 0..mutations {
            cases.push(random_mutation(&base, &mut rng)?);
        }
        let mut agree = 0;
        let mut valid = 0;
        for b in &cases {
            let fast = difference_transversal_check(b)?;
            let slow = develops_to_design(b);
            agree += usize::from(fast == slow);
            valid += usize::from(slow);
        }
        let ok = agree == cases.len() && develops_to_design(&base);
        all &= ok;
        writeln!(
            out,
            "{} oracle {} n={}: {agree}/{} agree, {valid} valid",
            if ok { "PASS" } else { "FAIL" },
            entry.target,
            entry.order,
            cases.len()
        )?;
    }
    let expected = SrgParameters {
        v: 16,
        k: 6,
        lambda: 2,
        mu: 2,
    };
    for target in TargetId::ALL {
        let ok = srg_parameters(&target.graph().graph) == Some(expected);
        all &= ok;
        writeln!(
            out,
            "{} srg {target}: (16,6,2,2)",
            if ok { "PASS" } else { "FAIL" }
        )?;
    }
    let distinct = is_isomorphic(
        &TargetId::Shrikhande.graph().graph,
        &TargetId::LineK44.graph().graph,
    )
    .is_none();
    all &= distinct;
    writeln!(
        out,
        "{} shrikhande and lk44 are not isomorphic",
        if distinct { "PASS" } else { "FAIL" }
    )?;
    Ok(all)
}
