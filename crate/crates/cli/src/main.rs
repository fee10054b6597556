//! `eeid`: check, normalize and witness graded polynomial identities of
//! `E ⊗ E`, and run the acceptance suite.

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eeid_core::acceptance;
use eeid_core::checker::{check, exhaustive_ranks, Mode, Substitution, Verdict};
use eeid_core::freealg::parse_polynomial;
use eeid_core::identities::{catalog, combination_text, i_generators, ip_extra, lookup, ordinary, pigeonhole, CatalogEntry};
use eeid_core::rewrite::{is_member, normal_form, Ideal, RewriteConfig};
use eeid_core::tensor_square::{BiDegree, Target};
use eeid_core::witness::{construct, construct_ordinary, sufficient_ranks, DegreeRequest};
use eeid_core::{Field, GradedPolynomial, GradingScheme, Ranks, TensorElement, Variable};

#[derive(Parser)]
#[command(name = "eeid", version, about = "Graded polynomial identities of the tensor square of the Grassmann algebra")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for the checkers (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a polynomial is a (graded) identity.
    Check(CheckArgs),
    /// Print the normal form modulo I or I_p.
    Normalize(RewriteArgs),
    /// Decide membership in I or I_p.
    Member(RewriteArgs),
    /// Build disjoint basis elements with prescribed degrees.
    Witness(WitnessArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
    /// List catalog identities.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Characteristic: 0 or an odd prime.
    #[arg(long = "char", default_value_t = 0)]
    characteristic: u64,
}

#[derive(Args)]
struct RankArgs {
    #[arg(long)]
    rank_left: Option<u32>,
    #[arg(long)]
    rank_right: Option<u32>,
}

#[derive(Args)]
struct CheckArgs {
    /// Q1|Q2|Q3, E(<k>*|inf|<k>)xE(...), or E / EE for ordinary identities.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, conflicts_with = "id", required_unless_present = "id")]
    poly: Option<String>,
    /// Catalog id; a family id checks every instance on its declared algebra.
    #[arg(long)]
    id: Option<String>,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    ranks: RankArgs,
    /// Generic-sum trials for non-multilinear input.
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// basis_exhaustive | degree_patterns | generic_sums.
    #[arg(long)]
    mode: Option<Mode>,
}

#[derive(Args)]
struct RewriteArgs {
    #[arg(long)]
    poly: String,
    /// I or Ip (Ip needs --char p).
    #[arg(long)]
    ideal: Option<String>,
    #[command(flatten)]
    field: FieldArgs,
}

#[derive(Args)]
struct WitnessArgs {
    #[arg(long)]
    scheme: String,
    /// Comma-separated `<bidegree>:<degree>` items, e.g. `10:0,11:1`.
    #[arg(long)]
    request: String,
    #[command(flatten)]
    field: FieldArgs,
    #[command(flatten)]
    ranks: RankArgs,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long)]
    scheme: Option<String>,
    #[command(flatten)]
    field: FieldArgs,
}

/// Successful outcome: printed output and whether the answer is affirmative.
struct Outcome {
    text: String,
    json: Value,
    affirmative: bool,
}

type CmdResult = Result<Outcome, String>;

fn field_of(args: &FieldArgs) -> Result<Field, String> {
    Field::from_characteristic(args.characteristic).map_err(|e| e.to_string())
}

fn resolve_ranks(args: &RankArgs, default: Ranks) -> Ranks {
    Ranks::new(args.rank_left.unwrap_or(default.left), args.rank_right.unwrap_or(default.right))
}

fn default_ranks(target: Target, f: &GradedPolynomial, mode: Option<Mode>) -> Ranks {
    let d = f.total_degree() as u32;
    match mode {
        Some(Mode::BasisExhaustive) => exhaustive_ranks(target, d),
        _ => sufficient_ranks(target, d),
    }
}

fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::Holds { mode, ranks, trials } => {
            let mut s = format!("holds ({}, ranks {}x{})", mode.name(), ranks.left, ranks.right);
            if let Some(t) = trials {
                s.push_str(&format!(" on {t} generic trials: evidence, not proof"));
            }
            s
        }
        Verdict::Fails { mode, ranks, witness, value } => {
            format!("fails ({}, ranks {}x{})\n  witness: {witness}\n  value: {value}", mode.name(), ranks.left, ranks.right)
        }
    }
}

fn run_check(
    f: &GradedPolynomial,
    target: Target,
    args: &CheckArgs,
) -> Result<Verdict, String> {
    let ranks = resolve_ranks(&args.ranks, default_ranks(target, f, args.mode));
    check(f, target, ranks, args.mode, args.trials, args.seed).map_err(|e| e.to_string())
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let field = field_of(&args.field)?;
    let scheme: Option<Target> = args.scheme.as_deref().map(str::parse).transpose().map_err(|e: eeid_core::tensor_square::SchemeParseError| e.to_string())?;
    if let Some(id) = &args.id {
        let entries = lookup(id, field).map_err(|e| e.to_string())?;
        let mut lines = Vec::new();
        let mut results = Vec::new();
        let mut all = true;
        for e in entries {
            let target = scheme.unwrap_or(e.target);
            let v = run_check(&e.polynomial, target, args)?;
            all &= v.holds();
            lines.push(format!("{} on {target}: {}", e.id, verdict_text(&v)));
            let mut j = serde_json::to_value(&v).map_err(|e| e.to_string())?;
            j["id"] = json!(e.id);
            j["target"] = json!(target.to_string());
            results.push(j);
        }
        return Ok(Outcome { text: lines.join("\n"), json: Value::Array(results), affirmative: all });
    }
    let target = scheme.ok_or("--scheme is required with --poly")?;
    let f = parse_polynomial(args.poly.as_deref().unwrap_or_default(), field).map_err(|e| e.to_string())?;
    let v = run_check(&f, target, args)?;
    Ok(Outcome { text: verdict_text(&v), json: serde_json::to_value(&v).map_err(|e| e.to_string())?, affirmative: v.holds() })
}

fn rewrite_config(args: &RewriteArgs, field: Field) -> Result<RewriteConfig, String> {
    let ideal = match (args.ideal.as_deref(), field) {
        (None, _) => return Ok(RewriteConfig::for_field(field)),
        (Some("I"), _) => Ideal::I,
        (Some("Ip"), Field::Prime(p)) => Ideal::Ip(p),
        (Some("Ip"), Field::Rational) => return Err("ideal Ip needs --char p".into()),
        (Some(other), _) => return Err(format!("unknown ideal `{other}` (I|Ip)")),
    };
    RewriteConfig::new(ideal, RewriteConfig::DEFAULT_BUDGET).map_err(|e| e.to_string())
}

fn cmd_normalize(args: &RewriteArgs) -> CmdResult {
    let field = field_of(&args.field)?;
    let cfg = rewrite_config(args, field)?;
    let f = parse_polynomial(&args.poly, field).map_err(|e| e.to_string())?;
    let nf = normal_form(&f, &cfg).map_err(|e| e.to_string())?;
    let text = combination_text(&nf);
    Ok(Outcome { json: json!({ "normal_form": nf, "text": text }), text, affirmative: true })
}

fn cmd_member(args: &RewriteArgs) -> CmdResult {
    let field = field_of(&args.field)?;
    let cfg = rewrite_config(args, field)?;
    let f = parse_polynomial(&args.poly, field).map_err(|e| e.to_string())?;
    let m = is_member(&f, &cfg).map_err(|e| e.to_string())?;
    Ok(Outcome { text: m.to_string(), json: json!({ "member": m }), affirmative: m })
}

fn cmd_witness(args: &WitnessArgs) -> CmdResult {
    let field = field_of(&args.field)?;
    let target: Target = args.scheme.parse().map_err(|e: eeid_core::tensor_square::SchemeParseError| e.to_string())?;
    let (vars, bs) = match target {
        Target::Graded(scheme) => {
            let req = DegreeRequest::parse(&args.request, scheme)?;
            let ranks = resolve_ranks(&args.ranks, sufficient_ranks(target, req.items.len() as u32));
            let bs = construct(&req, ranks).map_err(|e| e.to_string())?;
            let vars: Vec<Variable> =
                req.items.iter().enumerate().map(|(i, (_, h))| if *h == 0 { Variable::y(i as u32 + 1) } else { Variable::z(i as u32 + 1) }).collect();
            (vars, bs)
        }
        Target::Ordinary(algebra) => {
            let bidegrees: Vec<BiDegree> = args
                .request
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|item| {
                    let g = item.split(':').next().unwrap_or_default();
                    match g {
                        "00" => Ok(BiDegree(0, 0)),
                        "10" => Ok(BiDegree(1, 0)),
                        "01" => Ok(BiDegree(0, 1)),
                        "11" => Ok(BiDegree(1, 1)),
                        _ => Err(format!("bad request item `{item}` (expected e.g. 10)")),
                    }
                })
                .collect::<Result<_, _>>()?;
            let ranks = resolve_ranks(&args.ranks, sufficient_ranks(target, bidegrees.len() as u32));
            let bs = construct_ordinary(&bidegrees, algebra, ranks).map_err(|e| e.to_string())?;
            ((1..=bs.len() as u32).map(Variable::x).collect(), bs)
        }
    };
    let images: BTreeMap<Variable, TensorElement> = vars.into_iter().zip(bs).map(|(v, b)| (v, TensorElement::basis(field, b))).collect();
    let s = Substitution::new(target, images);
    Ok(Outcome { text: s.to_string(), json: serde_json::to_value(&s).map_err(|e| e.to_string())?, affirmative: true })
}

fn cmd_selftest(args: &SelftestArgs) -> CmdResult {
    let report = acceptance::run(args.seed);
    let mut lines: Vec<String> = report
        .criteria
        .iter()
        .map(|c| format!("criterion {:>2} {}: {} ({} cases) {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name, c.cases, c.detail))
        .collect();
    let passed = report.criteria.iter().filter(|c| c.passed).count();
    lines.push(format!("{passed}/{} criteria passed", report.criteria.len()));
    Ok(Outcome { text: lines.join("\n"), json: serde_json::to_value(&report).map_err(|e| e.to_string())?, affirmative: report.passed })
}

fn all_entries(field: Field) -> Vec<CatalogEntry> {
    let mut out = i_generators(field);
    if let Field::Prime(p) = field {
        out.extend(ip_extra(p));
    }
    for k in 1..=2 {
        for j in 1..=2 {
            out.push(pigeonhole(k, j, field));
        }
    }
    if field == Field::Rational {
        out.extend(ordinary(field));
    } else {
        out.extend(ordinary(field).into_iter().filter(|e| e.id.starts_with("ORD.E.")));
    }
    out
}

fn cmd_catalog(args: &CatalogArgs) -> CmdResult {
    let field = field_of(&args.field)?;
    let entries = match &args.scheme {
        Some(s) => catalog(s.parse::<GradingScheme>().map_err(|e| e.to_string())?, field).map_err(|e| e.to_string())?,
        None => all_entries(field),
    };
    let text = entries.iter().map(|e| format!("{:<12} {:<48} {}", e.id, e.expr.to_string(), e.target)).collect::<Vec<_>>().join("\n");
    Ok(Outcome { text, json: serde_json::to_value(&entries).map_err(|e| e.to_string())?, affirmative: true })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Check(a) => cmd_check(a),
        Command::Normalize(a) => cmd_normalize(a),
        Command::Member(a) => cmd_member(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Selftest(a) => cmd_selftest(a),
        Command::Catalog(a) => cmd_catalog(a),
    };
    match result {
        Ok(out) => {
            match cli.format {
                Format::Text => println!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("json value serializes")),
            }
            if out.affirmative {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
