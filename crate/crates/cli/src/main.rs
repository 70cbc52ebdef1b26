//! `bch`: batch front end for the bch-storage toolkit.
//!
//! Each subcommand writes one JSON document (or a CSV table for `nm-table`)
//! and exits with 0 on success, 2 on a bad parameter, 3 when a budget is
//! exceeded and 4 when a checked property fails.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use bch_storage::carryfree::{nm_bound_for, nm_value};
use bch_storage::cayley::{
    bfs_connected, build_graph, export_edges, gcd_rule, is_triangle_free_criterion, span_dimension,
    triangle_oracle,
};
use bch_storage::code::{code_report, coset_matrix, sample_codewords, verify_repair};
use bch_storage::poly::{certify_unit_rate, DEFAULT_TERM_BUDGET};
use bch_storage::verify::{verify_all, VerifyBudget};
use bch_storage::{Error, FamilyParams, FieldSpec, VERSION};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

/// Largest `n` certified without `--extended`.
const STANDARD_CERTIFY_N: u32 = 9;

#[derive(Parser, Debug)]
#[command(
    name = "bch",
    version,
    about = "Exact computations for BCH-family storage codes"
)]
struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Output format; `csv` is available for `nm-table` only.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Leave elapsed times out of reports so identical runs are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Budget {
    Quick,
    Full,
    Extended,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Modulus and size of GF(2^m).
    FieldInfo {
        #[arg(long)]
        m: u32,
    },
    /// Carry-free counts N_m with their upper bounds.
    NmTable {
        #[arg(long, default_value_t = 1)]
        m_min: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long, default_value_t = 1)]
        r: u32,
    },
    /// The Cayley graph of one family member.
    Graph {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Decide triangle-freeness and connectivity, each two ways.
        #[arg(long)]
        check: bool,
        /// Also write the edge list to this file.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Ranks, dimension and rate of one storage code.
    CodeReport {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        /// Sample this many codewords and check the repair property on each.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dump the parity-check matrix H to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Search for t with rank(d^(2^t - 1)) < 4^t.
    Certify {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 8)]
        t_max: u32,
        /// Cap on monomial products per multiplication.
        #[arg(long, default_value_t = DEFAULT_TERM_BUDGET)]
        budget: usize,
        /// Allow n above 9.
        #[arg(long)]
        extended: bool,
    },
    /// Re-check every claim at the chosen budget.
    VerifyAll {
        #[arg(long, value_enum, default_value = "quick")]
        budget: Budget,
    },
}

enum Report {
    Json(Value),
    Text(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("bch: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Param(_) => 2,
        Error::Budget(_) => 3,
        Error::Property(_) => 4,
        Error::Io(_) => 1,
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let start = Instant::now();
    let csv_ok = matches!(cli.command, Command::NmTable { .. });
    if !csv_ok && cli.format == Some(Format::Csv) {
        return Err(Error::Param(
            "csv output is only available for nm-table".into(),
        ));
    }
    let (report, code) = match &cli.command {
        Command::FieldInfo { m } => (field_info(*m)?, 0),
        Command::NmTable { m_min, m_max, r } => (nm_table(cli, *m_min, *m_max, *r)?, 0),
        Command::Graph { n, m, check, edges } => graph(*n, *m, *check, edges.as_ref())?,
        Command::CodeReport {
            n,
            m,
            samples,
            seed,
            dump,
        } => code_report_cmd(*n, *m, *samples, *seed, dump.as_ref())?,
        Command::Certify {
            n,
            t_max,
            budget,
            extended,
        } => (certify(*n, *t_max, *budget, *extended)?, 0),
        Command::VerifyAll { budget } => verify(cli, *budget),
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let text = match report {
        Report::Json(mut value) => {
            if let Value::Object(map) = &mut value {
                if !cli.no_timing {
                    map.insert("elapsed_ms".into(), json!(elapsed_ms));
                }
            }
            serde_json::to_string_pretty(&value).expect("serializable") + "\n"
        }
        Report::Text(text) => text,
    };
    write_output(cli.output.as_ref(), &text)?;
    Ok(code)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => {
            let mut f = BufWriter::new(File::create(p)?);
            f.write_all(text.as_bytes())?;
            f.flush()?;
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Fields shared by every JSON report.
fn header(command: &str) -> Map<String, Value> {
    let mut map = Map::new();
    map.insert("tool".into(), json!("bch"));
    map.insert("version".into(), json!(VERSION));
    map.insert("command".into(), json!(command));
    map
}

fn field_info(m: u32) -> Result<Report, Error> {
    let spec = FieldSpec::new(m)?;
    let mut map = header("field-info");
    map.insert("m".into(), json!(m));
    map.insert("modulus".into(), json!(spec.modulus()));
    map.insert("modulus_poly".into(), json!(spec.modulus_string()));
    map.insert("order".into(), json!(spec.order()));
    Ok(Report::Json(Value::Object(map)))
}

fn nm_table(cli: &Cli, m_min: u32, m_max: u32, r: u32) -> Result<Report, Error> {
    if m_min > m_max {
        return Err(Error::Param(format!(
            "m_min = {m_min} exceeds m_max = {m_max}"
        )));
    }
    let rows = (m_min..=m_max)
        .map(|m| nm_bound_for(m, r, nm_value(m, r)?))
        .collect::<Result<Vec<_>, _>>()?;
    if cli.format == Some(Format::Json) {
        let mut map = header("nm-table");
        map.insert("r".into(), json!(r));
        let table: Vec<Value> = rows
            .iter()
            .map(|b| {
                json!({
                    "m": b.m,
                    "r": b.r,
                    "N_m": b.n_m.to_string(),
                    "bound": b.bound().to_string(),
                    "bound_holds": b.holds(),
                })
            })
            .collect();
        map.insert("rows".into(), Value::Array(table));
        return Ok(Report::Json(Value::Object(map)));
    }
    let mut out = format!("# bch {VERSION} nm-table r={r} m={m_min}..{m_max}\n");
    out.push_str("m,r,N_m,bound,bound_holds\n");
    for b in &rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            b.m,
            b.r,
            b.n_m,
            b.bound(),
            b.holds()
        ));
    }
    Ok(Report::Text(out))
}

fn graph(n: u32, m: u32, check: bool, edges: Option<&PathBuf>) -> Result<(Report, u8), Error> {
    let params = FamilyParams::new(n, m)?;
    let spec = FieldSpec::new(m)?;
    let g = build_graph(params, &spec)?;
    let mut map = header("graph");
    map.insert("n".into(), json!(n));
    map.insert("m".into(), json!(m));
    map.insert("modulus".into(), json!(spec.modulus_string()));
    map.insert("vertices".into(), json!(g.num_vertices()));
    map.insert("edges".into(), json!(g.num_edges()));
    map.insert("degree".into(), json!(params.degree()));
    if check {
        let triangle_free = is_triangle_free_criterion(params, &spec)?;
        if triangle_oracle(&g) != triangle_free {
            return Err(Error::Property(format!(
                "triangle oracle disagrees with the equation scan for n = {n}, m = {m}"
            )));
        }
        let dim = span_dimension(params, &spec)?;
        let connected = dim == 2 * m as usize;
        if bfs_connected(&g) != connected {
            return Err(Error::Property(format!(
                "breadth-first search disagrees with the span rank for n = {n}, m = {m}"
            )));
        }
        map.insert("triangle_free".into(), json!(triangle_free));
        map.insert("gcd_rule".into(), json!(gcd_rule(params)));
        map.insert("span_dimension".into(), json!(dim));
        map.insert("connected".into(), json!(connected));
    }
    if let Some(path) = edges {
        let mut f = BufWriter::new(File::create(path)?);
        export_edges(&g, &mut f)?;
        f.flush()?;
    }
    Ok((Report::Json(Value::Object(map)), 0))
}

fn code_report_cmd(
    n: u32,
    m: u32,
    samples: usize,
    seed: u64,
    dump: Option<&PathBuf>,
) -> Result<(Report, u8), Error> {
    let params = FamilyParams::new(n, m)?;
    let spec = FieldSpec::new(m)?;
    let r = code_report(params, &spec)?;
    let mut map = header("code-report");
    map.insert("n".into(), json!(n));
    map.insert("m".into(), json!(m));
    map.insert("modulus".into(), json!(spec.modulus_string()));
    map.insert("size".into(), json!(r.size));
    map.insert("rank_H".into(), json!(r.rank_h));
    map.insert("rank_W".into(), json!(r.rank_w));
    map.insert("rank_D".into(), json!(r.rank_d));
    map.insert("dimension".into(), json!(r.dimension));
    map.insert("rate_num".into(), json!(r.rate_num));
    map.insert("rate_den".into(), json!(r.rate_den));
    map.insert("rate".into(), json!(r.rate_decimal()));
    map.insert("weight_exponent".into(), json!(r.weight_exponent));
    map.insert("N_m".into(), json!(r.n_m));
    map.insert(
        "bounds".into(),
        serde_json::to_value(&r.checks).expect("serializable"),
    );

    if samples > 0 || dump.is_some() {
        let h = coset_matrix(params, &spec)?;
        if let Some(path) = dump {
            let mut f = BufWriter::new(File::create(path)?);
            h.write_dump(&mut f)?;
            f.flush()?;
        }
        if samples > 0 {
            let g = build_graph(params, &spec)?;
            let words = sample_codewords(&h, samples, seed)?;
            let mut repaired = 0;
            for w in &words {
                if verify_repair(&g, w)? {
                    repaired += 1;
                }
            }
            map.insert(
                "samples".into(),
                json!({ "count": samples, "seed": seed, "repairable": repaired }),
            );
            if repaired != samples {
                return Err(Error::Property(format!(
                    "{} of {samples} sampled codewords fail the repair check",
                    samples - repaired
                )));
            }
        }
    }
    if !r.checks.all_ok() {
        return Err(Error::Property(format!(
            "bound checks failed: {:?}",
            r.checks
        )));
    }
    Ok((Report::Json(Value::Object(map)), 0))
}

fn certify(n: u32, t_max: u32, budget: usize, extended: bool) -> Result<Report, Error> {
    if n > STANDARD_CERTIFY_N && !extended {
        return Err(Error::Budget(format!(
            "n = {n} exceeds {STANDARD_CERTIFY_N}; pass --extended to run it"
        )));
    }
    let r = certify_unit_rate(n, t_max, budget)?;
    let mut map = header("certify");
    map.insert("n".into(), json!(n));
    map.insert("t_max".into(), json!(t_max));
    map.insert("budget".into(), json!(budget));
    let trace: Vec<Value> = r
        .trace
        .iter()
        .map(|e| json!({ "t": e.t, "rank": e.rank, "threshold": e.threshold, "terms": e.terms }))
        .collect();
    map.insert("trace".into(), Value::Array(trace));
    map.insert("certified".into(), json!(r.certified));
    map.insert("t_star".into(), json!(r.t_star));
    map.insert("poly_rank".into(), json!(r.poly_rank()));
    map.insert("threshold".into(), json!(r.threshold()));
    map.insert("c_constant".into(), json!(r.c_constant));
    Ok(Report::Json(Value::Object(map)))
}

fn verify(cli: &Cli, budget: Budget) -> (Report, u8) {
    let level = match budget {
        Budget::Quick => VerifyBudget::Quick,
        Budget::Full => VerifyBudget::Full,
        Budget::Extended => VerifyBudget::Extended,
    };
    let mut outcomes = verify_all(level);
    if cli.no_timing {
        outcomes.iter_mut().for_each(|o| o.elapsed_ms = 0);
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    let code = if failed.is_empty() { 0 } else { 4 };
    if !failed.is_empty() {
        eprintln!("bch: failing claims {failed:?}");
    }
    if cli.format == Some(Format::Json) {
        let mut map = header("verify-all");
        map.insert(
            "budget".into(),
            serde_json::to_value(level).expect("serializable"),
        );
        map.insert(
            "claims".into(),
            serde_json::to_value(&outcomes).expect("serializable"),
        );
        map.insert("all_passed".into(), json!(failed.is_empty()));
        return (Report::Json(Value::Object(map)), code);
    }
    let mut out = String::new();
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        let timing = if cli.no_timing {
            String::new()
        } else {
            format!(" [{} ms]", o.elapsed_ms)
        };
        out.push_str(&format!(
            "{status} {:>2} {}: {}{timing}\n",
            o.id, o.claim, o.detail
        ));
    }
    let passed = outcomes.len() - failed.len();
    out.push_str(&format!("{passed}/{} claims passed\n", outcomes.len()));
    (Report::Text(out), code)
}
