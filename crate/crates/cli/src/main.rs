//! Batch verification front-end. Four subcommands:
//!   dims     exact isotropic root-space dimensions against closed forms
//!   verify   basis construction plus bracket integrality over a window
//!   lemmas   commutator-law suite and the opposite-pairing normalization
//!   bracket  one bracket of two labeled basis elements, decomposed
//!
//! Exit codes: 0 clean, 1 verification failures, 2 usage or parse errors.
//! Reports with the same configuration serialize byte-identically; worker
//! count changes throughput only.

use clap::{Args, Parser, Subcommand};
use eala_kernel::chevalley::{
    build_basis, express_in_basis, verify_integrality, verify_opposite_pairing_window, Label,
};
use eala_kernel::eala::{dimension_sweep, e_bracket, DimRow};
use eala_kernel::jordan::JordanTorusSpec;
use eala_kernel::lattice::{Root, Semilattice};
use eala_kernel::operator::verify_commutator_laws;
use eala_kernel::scalar::IntegralityRing;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "eala",
    about = "Exact computations in rank-2 isotropic root spaces of Jordan-torus Lie algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Torus descriptor, e.g. "semilattice:S:v=2,cosets=00+10+01",
    /// "quantum:q=formal", "quantum:q=root:2", "laurent", "hermitian:sign=-1".
    #[arg(long)]
    jordan: String,

    /// Sup-norm window radius for degrees.
    #[arg(long, default_value_t = 3)]
    radius: i64,

    /// Worker threads; defaults to EALA_WORKERS or all cores.
    #[arg(long)]
    workers: Option<usize>,

    /// Report destination; stdout when omitted.
    #[arg(long)]
    out: Option<String>,

    /// Report format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep every nonzero window degree and compare computed dimensions
    /// with the per-family closed forms.
    Dims {
        #[command(flatten)]
        common: CommonOpts,

        /// Shift window radius for the operator-span rank; must be at
        /// least the sweep radius. Defaults to the sweep radius.
        #[arg(long)]
        tau_radius: Option<i64>,
    },
    /// Build the labeled basis and check that all bracket structure
    /// constants lie in the chosen coefficient ring.
    Verify {
        #[command(flatten)]
        common: CommonOpts,

        /// Coefficient ring: Z, Z-Laurent, Z-sqrt2, Z-Laurent-sqrt2.
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Run the commutator-law suite on a semilattice (rank 2 to 4) and,
    /// in rank 2, the opposite-pairing normalization sweep.
    Lemmas {
        /// Torus descriptor; the suite runs on its support semilattice.
        #[arg(long)]
        jordan: Option<String>,

        /// Lattice rank when no descriptor is given (2 to 4, full
        /// semilattice).
        #[arg(long)]
        nu: Option<usize>,

        #[arg(long, default_value_t = 2)]
        radius: i64,

        /// Sampled representatives per coset class.
        #[arg(long, default_value_t = 2)]
        reps: usize,

        #[arg(long, default_value_t = 7)]
        seed: u64,

        #[arg(long)]
        workers: Option<usize>,
    },
    /// Bracket two labeled basis elements and print the decomposition in
    /// basis coordinates.
    Bracket {
        #[command(flatten)]
        common: CommonOpts,

        /// Left element, e.g. "Xplus (0,0)" or "Comm (1,1) (0,1)".
        left: String,

        /// Right element.
        right: String,
    },
}

fn init_workers(cli_workers: Option<usize>) {
    let n = cli_workers.or_else(|| {
        std::env::var("EALA_WORKERS").ok().and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn parse_spec(descriptor: &str) -> Result<JordanTorusSpec, String> {
    JordanTorusSpec::parse_descriptor(descriptor)
}

fn emit(out: &Option<String>, content: &str) -> Result<(), String> {
    match out {
        None => {
            print!("{}", content);
            Ok(())
        }
        Some(path) => std::fs::write(path, content)
            .map_err(|e| format!("cannot write {}: {}", path, e)),
    }
}

fn dims_csv(rows: &[DimRow]) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "sigma", "coset", "op_dim", "d_dim", "c_dim", "total", "predicted", "lemma_tag", "match",
    ])
    .map_err(|e| e.to_string())?;
    for r in rows {
        w.write_record([
            r.sigma.to_string(),
            r.coset.to_string(),
            r.op_dim.to_string(),
            r.d_dim.to_string(),
            r.c_dim.to_string(),
            r.total.to_string(),
            r.predicted.to_string(),
            r.lemma_tag.clone(),
            r.is_match.to_string(),
        ])
        .map_err(|e| e.to_string())?;
    }
    String::from_utf8(w.into_inner().map_err(|e| e.to_string())?).map_err(|e| e.to_string())
}

fn run_dims(common: &CommonOpts, tau_radius: Option<i64>) -> Result<ExitCode, String> {
    if common.radius < 1 {
        return Err("radius must be at least 1".into());
    }
    let tau = tau_radius.unwrap_or(common.radius);
    if tau < common.radius {
        return Err("tau-radius must be at least the sweep radius".into());
    }
    let spec = parse_spec(&common.jordan)?;
    init_workers(common.workers);
    let rows = dimension_sweep(&spec, common.radius, tau);
    let all_match = rows.iter().all(|r| r.is_match);
    let content = match common.format.as_str() {
        "csv" => dims_csv(&rows)?,
        _ => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    emit(&common.out, &content)?;
    eprintln!(
        "dims {}: {} rows, {}",
        spec.descriptor(),
        rows.len(),
        if all_match { "all match" } else { "MISMATCH" }
    );
    Ok(if all_match { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_verify(common: &CommonOpts, ring_name: &str) -> Result<ExitCode, String> {
    if common.radius < 1 {
        return Err("radius must be at least 1".into());
    }
    let spec = parse_spec(&common.jordan)?;
    let ring = IntegralityRing::parse(ring_name)?;
    init_workers(common.workers);
    let basis = build_basis(&spec, common.radius)
        .map_err(|e| format!("basis construction failed: {}", e))?;
    let report = verify_integrality(&basis, ring);
    let content = match common.format.as_str() {
        "csv" => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "radius", "ring", "pairs", "skipped", "failures", "suppressed"])
                .map_err(|e| e.to_string())?;
            w.write_record([
                report.family.clone(),
                report.radius.to_string(),
                report.ring.clone(),
                report.pairs.to_string(),
                report.skipped.to_string(),
                report.failures.len().to_string(),
                report.suppressed_rows.len().to_string(),
            ])
            .map_err(|e| e.to_string())?;
            String::from_utf8(w.into_inner().map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?
        }
        _ => {
            let mut s = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    emit(&common.out, &content)?;
    eprintln!(
        "verify {}: {} pairs, {} skipped, {} failures ({} ms)",
        report.family,
        report.pairs,
        report.skipped,
        report.failures.len(),
        report.elapsed_ms
    );
    Ok(if report.verified() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_lemmas(
    jordan: &Option<String>,
    nu: Option<usize>,
    radius: i64,
    reps: usize,
    seed: u64,
    workers: Option<usize>,
) -> Result<ExitCode, String> {
    if radius < 1 {
        return Err("radius must be at least 1".into());
    }
    init_workers(workers);
    let (semilattice, pair_spec) = match jordan {
        Some(desc) => {
            let spec = parse_spec(desc)?;
            if let Some(n) = nu {
                if n != spec.nu() {
                    return Err(format!(
                        "--nu {} conflicts with the rank-{} descriptor",
                        n,
                        spec.nu()
                    ));
                }
            }
            (spec.support_semilattice(), Some(spec))
        }
        None => {
            let n = nu.unwrap_or(2);
            if !(2..=4).contains(&n) {
                return Err("rank must be between 2 and 4".into());
            }
            let pair_spec = (n == 2).then(|| JordanTorusSpec::semilattice(Semilattice::full(2)));
            (Semilattice::full(n), pair_spec)
        }
    };

    let report = verify_commutator_laws(&semilattice, radius, reps, seed);
    let mut all_ok = report.all_pass();
    for check in &report.checks {
        if check.passed() {
            println!("{}: pass ({} instances)", check.name, check.instances);
        } else {
            println!(
                "{}: FAIL ({} instances, {} witnesses)",
                check.name,
                check.instances,
                check.failures.len()
            );
            for w in &check.failures {
                println!("  counterexample: {}", w);
            }
        }
    }

    if let Some(spec) = pair_spec {
        let ok = verify_opposite_pairing_window(&spec, radius);
        println!(
            "opposite-root-pairing-normalizes-to-minus-one: {} ({})",
            if ok { "pass" } else { "FAIL" },
            spec.descriptor()
        );
        all_ok &= ok;
    }

    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run_bracket(common: &CommonOpts, left: &str, right: &str) -> Result<ExitCode, String> {
    if common.radius < 1 {
        return Err("radius must be at least 1".into());
    }
    let spec = parse_spec(&common.jordan)?;
    init_workers(common.workers);
    let ll = Label::from_str(left)?;
    let rl = Label::from_str(right)?;
    let lv = ll.realize(&spec)?;
    let rv = rl.realize(&spec)?;
    let lr = ll.root();
    let rr = rl.root();
    if lr.lambda.norm_inf() > common.radius || rr.lambda.norm_inf() > common.radius {
        return Err("operand degree outside the window; raise --radius".into());
    }

    let br = e_bracket(&lv, &rv);
    if br.is_zero() {
        println!("[{}, {}] = 0", ll, rl);
        return Ok(ExitCode::SUCCESS);
    }

    let m_sum = lr.m + rr.m;
    let lam_sum = lr.lambda.add(&rr.lambda);
    if m_sum.abs() > 1 {
        return Err("nonzero bracket beyond the root string".into());
    }
    if lam_sum.norm_inf() > common.radius {
        return Err("bracket degree outside the window; raise --radius".into());
    }
    let basis = build_basis(&spec, common.radius)
        .map_err(|e| format!("basis construction failed: {}", e))?;
    let root = Root::new(m_sum, lam_sum);
    let coords = express_in_basis(&basis, &br, &root)
        .map_err(|e| format!("cannot decompose the bracket: {}", e))?;

    let mut line = String::new();
    for (idx, coeff) in basis.at_root(&root).iter().zip(coords.iter()) {
        if coeff.is_zero() {
            continue;
        }
        if !line.is_empty() {
            line.push_str(" + ");
        }
        write!(line, "{} * {}", coeff, basis.elements()[*idx].label).unwrap();
    }
    if line.is_empty() {
        line.push('0');
    }
    println!("[{}, {}] = {}", ll, rl, line);
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Dims { common, tau_radius } => run_dims(common, *tau_radius),
        Command::Verify { common, ring } => run_verify(common, ring),
        Command::Lemmas { jordan, nu, radius, reps, seed, workers } => {
            run_lemmas(jordan, *nu, *radius, *reps, *seed, *workers)
        }
        Command::Bracket { common, left, right } => run_bracket(common, left, right),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
