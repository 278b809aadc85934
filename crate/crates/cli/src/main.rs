//! `twistgen` command-line front end.
//!
//! Exit status: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or data error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use twistgen::report::{self, DataInfo, Report};
use twistgen::stabchain::closure_order;
use twistgen::surface::{self, default_document, template_document, MIN_GENUS, MIN_REFLECTION_GENUS};
use twistgen::{bsgs, build_model, transvection, BitMat, BitVec, CurveTable};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "twistgen", version, about = "Check torsion generators of the twist subgroup on mod-2 homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Genus of the nonorientable surface.
    #[arg(short, long, global = true, default_value_t = 13)]
    genus: usize,

    /// Curve table (JSON); defaults to the embedded table for the genus.
    #[arg(long, global = true)]
    curves: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for the randomized phase of the stabilizer chain.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Ledger, orders, determinants and generation.
    Verify,
    /// Identity ledger only.
    Identities,
    /// Element orders, determinants and group order.
    Orders,
    /// Small-dimension oracles; needs no curve data.
    Selftest,
    /// Validate a curve table against the crosscap model.
    CurvesValidate,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, msg: msg.into() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let start = Instant::now();
    let result = run(&cli);
    if cli.verbose {
        eprintln!("elapsed: {:.2?}", start.elapsed());
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Selftest => Ok(selftest(cli)),
        Command::CurvesValidate => curves_validate(cli),
        cmd => {
            let (table, data) = load(cli, MIN_REFLECTION_GENUS)?;
            let report = match cmd {
                Command::Verify => report::verify(&table, data, cli.seed),
                Command::Identities => report::identities(&table, data),
                Command::Orders => report::orders(&table, data, cli.seed),
                _ => unreachable!(),
            }
            .map_err(|e| Failure { code: EXIT_FAIL, msg: e.to_string() })?;
            emit(cli, &report);
            Ok(report.pass())
        }
    }
}

fn emit(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}

/// Reads the curve table named on the command line, or the embedded one, or
/// the generated layout for genera without an embedded table.
fn load(cli: &Cli, min_genus: usize) -> Result<(CurveTable, DataInfo), Failure> {
    let g = cli.genus;
    if g < min_genus {
        return Err(Failure::usage(format!("genus {g} is below the supported minimum {min_genus}")));
    }
    let model = build_model(g).map_err(|e| Failure::usage(e.to_string()))?;
    let (source, text) = match &cli.curves {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            (path.display().to_string(), text)
        }
        None => match default_document(g) {
            Some(t) => ("embedded".to_string(), t.to_string()),
            None => {
                let doc = template_document(&model).map_err(|e| Failure::usage(e.to_string()))?;
                ("generated".to_string(), doc.to_json_pretty())
            }
        },
    };
    let table = surface::load_curves_str(&model, &text)
        .map_err(|e| Failure::usage(format!("{source}: {e}")))?;
    Ok((table, DataInfo::new(&source, &text)))
}

fn curves_validate(cli: &Cli) -> Result<bool, Failure> {
    let (table, data) = load(cli, MIN_GENUS)?;
    let count = table.curves().len();
    match cli.format {
        Format::Json => {
            let v = serde_json::json!({
                "genus": table.genus(),
                "source": data.source,
                "checksum": data.checksum,
                "curves": count,
                "valid": true,
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => println!(
            "{}: {} curves valid for genus {} (checksum {})",
            data.source,
            count,
            table.genus(),
            data.checksum
        ),
    }
    Ok(true)
}

fn tv(dim: usize, idx: &[usize]) -> BitMat {
    transvection(&BitVec::from_indices(dim, idx).expect("indices in range")).expect("isotropic")
}

/// Brute-force oracles that exercise the engine without curve data.
fn selftest(cli: &Cli) -> bool {
    let mut checks: Vec<(&str, bool, String)> = Vec::new();

    let gl2 = vec![
        BitMat::from_row_bits(2, vec![0b11, 0b10]).expect("dim 2"),
        BitMat::from_row_bits(2, vec![0b01, 0b11]).expect("dim 2"),
    ];
    let chain = bsgs(2, &gl2, cli.seed).map(|c| c.order().to_string());
    let bfs = closure_order(2, &gl2, 1 << 10);
    let ok = matches!((&chain, &bfs), (Ok(c), Ok(b)) if c == "6" && *b == 6);
    checks.push(("GL(2,2) order 6", ok, format!("chain {chain:?}, closure {bfs:?}")));

    let sp4: Vec<BitMat> = vec![tv(5, &[0, 1]), tv(5, &[1, 2]), tv(5, &[2, 3]), tv(5, &[3, 4]), tv(5, &[0, 1, 2, 3])];
    let chain = bsgs(5, &sp4, cli.seed).map(|c| c.order().to_string());
    let bfs = closure_order(5, &sp4, 1 << 12);
    let ok = matches!((&chain, &bfs), (Ok(c), Ok(b)) if c == "720" && *b == 720);
    checks.push(("Sp(4,2) order 720", ok, format!("chain {chain:?}, closure {bfs:?}")));

    let (ok, detail) = packed_vs_naive(cli.seed);
    checks.push(("bit-packed vs naive", ok, detail));

    let pass = checks.iter().all(|c| c.1);
    match cli.format {
        Format::Json => {
            let items: Vec<_> = checks
                .iter()
                .map(|(n, p, d)| serde_json::json!({"name": n, "pass": p, "detail": d}))
                .collect();
            let v = serde_json::json!({"selftest": items, "pass": pass});
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
        }
        Format::Text => {
            let mut s = String::new();
            for (n, p, d) in &checks {
                let _ = writeln!(s, "[{}] {n}: {d}", if *p { "PASS" } else { "FAIL" });
            }
            let _ = writeln!(s, "selftest {}", if pass { "PASS" } else { "FAIL" });
            print!("{s}");
        }
    }
    pass
}

/// Products and ranks of pseudo-random matrices in dims 1..=16 against a
/// nested-vector reference.
fn packed_vs_naive(seed: u64) -> (bool, String) {
    let mut state = seed ^ 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        // xorshift64*
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        state.wrapping_mul(0x2545_f491_4f6c_dd1d)
    };
    let mut cases = 0;
    for d in 1..=16usize {
        let mask = (1u64 << d) - 1;
        for _ in 0..16 {
            let ra: Vec<u64> = (0..d).map(|_| next() & mask).collect();
            let rb: Vec<u64> = (0..d).map(|_| next() & mask).collect();
            let a = BitMat::from_row_bits(d, ra.clone()).expect("rows fit");
            let b = BitMat::from_row_bits(d, rb.clone()).expect("rows fit");
            let prod = a.mul(&b).expect("same dim");
            for i in 0..d {
                for j in 0..d {
                    let mut bit = false;
                    for k in 0..d {
                        bit ^= (ra[i] >> k) & 1 == 1 && (rb[k] >> j) & 1 == 1;
                    }
                    if prod.get(i, j) != bit {
                        return (false, format!("product mismatch at dim {d}"));
                    }
                }
            }
            if a.rank() != naive_rank(&ra, d) {
                return (false, format!("rank mismatch at dim {d}"));
            }
            cases += 1;
        }
    }
    (true, format!("{cases} random pairs"))
}

fn naive_rank(rows: &[u64], d: usize) -> usize {
    let mut m: Vec<Vec<bool>> = rows.iter().map(|r| (0..d).map(|j| (r >> j) & 1 == 1).collect()).collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..d).find(|&r| m[r][col]) else { continue };
        m.swap(rank, p);
        for r in 0..d {
            if r != rank && m[r][col] {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}
