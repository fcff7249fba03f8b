//! `qminor`: expand, verify and translate quantum-minor identities.
//!
//! Exit codes: 0 success, 1 an identity or check failed, 2 parse error,
//! 3 validation error (bad options, sizes, modes or unreadable files).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qminor::identity::{parse_expression, Format};
use qminor::minors::{
    check_minor_images, check_row_col_agreement, check_specialization, expand_product_with, matrix_system,
};
use qminor::ncalg::{render_word, Reducer};
use qminor::tensor::{
    check_exterior_rescaling, check_injectivity, check_iota_homomorphism, CheckReport, InstanceResult,
};
use qminor::translate::{corpus_files, run_corpus, translate_to_multiparam, translate_to_one_param, verify_in};
use qminor::{Error, MinorIdentity, Mode, NCPoly, ParamSpec, Preset, RelationSystem};

const SCHEMA_VERSION: u32 = 1;
const MAX_N: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "qminor",
    version,
    about = "Exact quantum-minor identities in one- and multiparameter quantum matrix algebras"
)]
struct Cli {
    /// Output format: text or structured (JSON).
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Worker threads for parallel checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the normal form of a sum of minor products, e.g. "D[1,2|1,2]".
    Expand {
        expr: String,
        #[arg(long)]
        n: Option<usize>,
        /// 1param or multiparam; must agree with the factor letters.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Check that a .qid identity holds by normal-form reduction.
    Verify {
        path: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
    },
    /// Rescale a homogeneous identity into the other setting.
    Translate {
        path: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
        /// Target mode; defaults to the opposite of the input's.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Run the shipped corpus through verify, translate, verify, round trip.
    Corpus {
        /// Write the shipped .qid files into this directory instead.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Run the structural checks for matrices of size n.
    Selfcheck {
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
}

enum Failure {
    Parse(String),
    Validation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            Failure::Parse(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

type Outcome = Result<bool, Failure>;

struct Ctx {
    format: Format,
}

impl Ctx {
    fn emit(&self, text: &str, doc: Value) {
        match self.format {
            Format::Text => println!("{text}"),
            Format::Structured => {
                let mut doc = doc;
                doc["schema_version"] = json!(SCHEMA_VERSION);
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
        }
    }
}

fn parse_mode(mode: &Option<String>) -> Result<Option<Mode>, Failure> {
    mode.as_deref()
        .map(|m| m.parse::<Mode>().map_err(|_| Failure::Validation(format!("unknown mode `{m}`"))))
        .transpose()
}

fn ambient_n(id: &MinorIdentity, n: Option<usize>) -> Result<usize, Failure> {
    let n = n.unwrap_or(id.n).max(1);
    if n < id.max_label() {
        return Err(Failure::Validation(format!("--n {n} is smaller than label {}", id.max_label())));
    }
    if n > MAX_N {
        return Err(Failure::Validation(format!("n = {n} exceeds the supported maximum {MAX_N}")));
    }
    Ok(n)
}

fn check_mode(id: &MinorIdentity, mode: Option<Mode>) -> Result<(), Failure> {
    match mode {
        Some(m) if m != id.mode => {
            Err(Failure::Validation(format!("identity is {}, but --mode {m} was given", id.mode)))
        }
        _ => Ok(()),
    }
}

fn read_identity(path: &Path) -> Result<MinorIdentity, Failure> {
    let src =
        fs::read_to_string(path).map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
    MinorIdentity::parse(&src).map_err(|e| Failure::Parse(format!("{}:{e}", path.display())))
}

fn poly_terms(p: &NCPoly) -> Value {
    Value::Array(p.terms().map(|(w, c)| json!({ "coeff": c.canonical_string(), "word": render_word(w) })).collect())
}

fn cmd_expand(ctx: &Ctx, expr: &str, n: Option<usize>, mode: Option<Mode>) -> Outcome {
    let id = parse_expression(expr).map_err(|e| Failure::Parse(e.to_string()))?;
    check_mode(&id, mode)?;
    let n = ambient_n(&id, n)?;
    let rs = matrix_system(n, id.mode);
    let mut red = Reducer::new(&rs);
    let mut total = NCPoly::zero(rs.tag());
    for t in &id.terms {
        total.add_scaled(&expand_product_with(&t.factors, &mut red)?, &t.coeff);
    }
    ctx.emit(
        &total.to_string(),
        json!({
            "command": "expand",
            "mode": id.mode,
            "n": n,
            "input": id.render_sum(),
            "normal_form": total.to_string(),
            "terms": poly_terms(&total),
        }),
    );
    Ok(true)
}

fn cmd_verify(ctx: &Ctx, path: &Path, n: Option<usize>, mode: Option<Mode>) -> Outcome {
    let id = read_identity(path)?;
    check_mode(&id, mode)?;
    let n = ambient_n(&id, n)?;
    let rep = verify_in(&id, n)?;
    ctx.emit(
        &format!("{}: {rep}", path.display()),
        json!({
            "command": "verify",
            "path": path.display().to_string(),
            "n": n,
            "identity": id.to_structured(),
            "report": rep,
        }),
    );
    Ok(rep.holds)
}

fn cmd_translate(ctx: &Ctx, path: &Path, output: Option<&Path>, mode: Option<Mode>) -> Outcome {
    let id = read_identity(path)?;
    ambient_n(&id, None)?;
    let target = mode.unwrap_or(match id.mode {
        Mode::OneParam => Mode::MultiParam,
        Mode::MultiParam => Mode::OneParam,
    });
    if target == id.mode {
        return Err(Failure::Validation(format!("identity is already {target}")));
    }
    let out = match target {
        Mode::MultiParam => translate_to_multiparam(&id)?,
        Mode::OneParam => translate_to_one_param(&id)?,
    };
    match output {
        Some(o) => {
            fs::write(o, out.render_text())
                .map_err(|e| Failure::Validation(format!("cannot write {}: {e}", o.display())))?;
            ctx.emit(
                &format!("wrote {}", o.display()),
                json!({ "command": "translate", "output": o.display().to_string(), "identity": out.to_structured() }),
            );
        }
        None => match ctx.format {
            Format::Text => print!("{}", out.render_text()),
            Format::Structured => ctx.emit("", json!({ "command": "translate", "identity": out.to_structured() })),
        },
    }
    Ok(true)
}

fn cmd_corpus(ctx: &Ctx, export: Option<&Path>) -> Outcome {
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(|e| Failure::Validation(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (name, src) in corpus_files() {
            let p = dir.join(format!("{name}.qid"));
            fs::write(&p, src).map_err(|e| Failure::Validation(format!("cannot write {}: {e}", p.display())))?;
            written.push(p.display().to_string());
        }
        ctx.emit(&written.join("\n"), json!({ "command": "corpus", "exported": written }));
        return Ok(true);
    }
    let rep = run_corpus();
    eprintln!("corpus wall time: {} ms", rep.wall_time_ms);
    let mut doc = serde_json::to_value(&rep).expect("serializable");
    doc["command"] = json!("corpus");
    ctx.emit(&rep.to_string(), doc);
    Ok(rep.all_passed())
}

fn confluence_report(preset: Preset, spec: ParamSpec) -> CheckReport {
    let rs = RelationSystem::new(preset, spec);
    let failures: Vec<_> = rs.confluence_failures();
    let results = rs
        .overlap_words()
        .into_iter()
        .map(|w| {
            let residual = failures.iter().find(|(f, _)| *f == w).map(|(_, r)| r.to_string());
            InstanceResult {
                instance: render_word(&w),
                passed: residual.is_none(),
                residual: residual.unwrap_or_default(),
            }
        })
        .collect();
    CheckReport::new(format!("confluence {preset:?} {} n={}", spec.mode(), spec.n()), results)
}

fn cmd_selfcheck(ctx: &Ctx, n: usize) -> Outcome {
    if !(1..=MAX_N).contains(&n) {
        return Err(Failure::Validation(format!("--n must be in 1..={MAX_N}")));
    }
    let mut reports = vec![
        check_iota_homomorphism(n),
        check_injectivity(n, if n <= 2 { 3 } else { 2 }),
        check_row_col_agreement(n, Mode::MultiParam),
        check_row_col_agreement(n, Mode::OneParam),
        check_specialization(n),
        check_minor_images(n, |_| true),
        check_exterior_rescaling(n),
    ];
    for preset in Preset::ALL {
        for mode in [Mode::OneParam, Mode::MultiParam] {
            reports.push(confluence_report(preset, ParamSpec::new(n, mode)?));
        }
    }
    let ok = reports.iter().all(|r| r.passed());
    let mut text: Vec<String> = reports.iter().map(|r| r.to_string()).collect();
    text.push(if ok { "all checks passed".into() } else { "some checks FAILED".into() });
    ctx.emit(
        &text.join("\n"),
        json!({
            "command": "selfcheck",
            "n": n,
            "passed": ok,
            "checks": reports.iter().map(|r| json!({
                "check": r.check,
                "instances": r.len(),
                "failures": r.failures(),
            })).collect::<Vec<_>>(),
        }),
    );
    Ok(ok)
}

fn run(cli: Cli) -> Outcome {
    let format = cli.format.parse::<Format>().map_err(Failure::from)?;
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Validation("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Validation(e.to_string()))?;
    }
    let ctx = Ctx { format };
    match &cli.command {
        Command::Expand { expr, n, mode } => cmd_expand(&ctx, expr, *n, parse_mode(mode)?),
        Command::Verify { path, n, mode } => cmd_verify(&ctx, path, *n, parse_mode(mode)?),
        Command::Translate { path, output, mode } => cmd_translate(&ctx, path, output.as_deref(), parse_mode(mode)?),
        Command::Corpus { export } => cmd_corpus(&ctx, export.as_deref()),
        Command::Selfcheck { n } => cmd_selfcheck(&ctx, *n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Parse(m)) => {
            eprintln!("parse error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Validation(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
