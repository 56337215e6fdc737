use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use shiftaut::block_code::{find_root_relation, verify_endomorphism, SlidingBlockCode};
use shiftaut::checks::{run_checks, GROUPS};
use shiftaut::recurrence::{cassaigne_s_bound, lr_aut_bound, recurrence_constant, ReturnWordIndex};
use shiftaut::search::{enumerate_endomorphisms_with, invertible_endomorphisms, SearchConfig};
use shiftaut::special::{
    asymptotic_upper_bound, aut_upper_bound, branch_census, certify_branch_points,
    left_special_tree, substitution_root_bound,
};
use shiftaut::{Error, Side};

mod source;

use source::{Source, SourceArgs};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFICATION: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "shiftaut",
    version,
    about = "Complexity, branch points and endomorphisms of minimal subshifts"
)]
struct Cli {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p(n) and s(n) for every n up to a depth
    Complexity {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = positive)]
        depth: usize,
    },
    /// Left- or right-special factors of one length
    Special {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = positive)]
        length: usize,
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
    },
    /// Branch-point census with certificates and automorphism bounds
    Branch {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_parser = positive)]
        depth: usize,
        /// Table length; chains must survive to one less than this [default: 4*depth+1]
        #[arg(long, value_parser = positive)]
        table_length: Option<usize>,
        /// Largest substitution power tried by the certificates
        #[arg(long, value_parser = positive, default_value_t = 6)]
        max_period: usize,
    },
    /// Return words and the empirical recurrence constant
    ReturnWords {
        #[command(flatten)]
        source: SourceArgs,
        /// Longest factor whose return words are collected
        #[arg(long, value_parser = positive)]
        max_u: usize,
        /// Probe letters read off the generator [default: 262144 or the whole prefix]
        #[arg(long, value_parser = positive)]
        probe_length: Option<usize>,
    },
    /// Closed-form bounds for a recurrence constant
    Bounds {
        #[arg(long = "K", value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        /// Alphabet size for the substitution root bound
        #[arg(long, value_parser = positive)]
        alphabet_size: Option<usize>,
    },
    /// Exhaustive search for endomorphisms of bounded radius
    SearchEndo {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[arg(long, default_value_t = SearchConfig::default().node_budget)]
        node_budget: u64,
        /// Also report which codes have an inverse of radius at most 2*radius
        #[arg(long)]
        invertible: bool,
        /// Write the JSON report to this file
        #[arg(long, value_name = "FILE")]
        emit_json: Option<PathBuf>,
    },
    /// Check a code against the language and look for a root relation
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// Code JSON file; optional for sources with a built-in code
        #[arg(long, value_name = "FILE")]
        code: Option<PathBuf>,
        #[arg(long, value_parser = positive)]
        depth: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
    },
    /// Run the built-in claim checks
    PaperCheck {
        /// Run one group only
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(GROUPS))]
        only: Option<String>,
    },
}

/// A report in both output forms.
struct Report {
    json: Value,
    tsv: Vec<String>,
    exit: u8,
}

impl Report {
    fn new(json: Value, tsv: Vec<String>) -> Self {
        Report { json, tsv, exit: 0 }
    }

    /// Writes to stdout; a closed pipe ends output quietly.
    fn print(&self, format: Format) {
        let mut out = std::io::stdout().lock();
        let _ = match format {
            Format::Json => writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&self.json).expect("serializable")
            ),
            Format::Tsv => self.tsv.iter().try_for_each(|line| writeln!(out, "{line}")),
        };
    }
}

fn provenance(source: Option<&Source>, parameters: Value) -> Value {
    json!({
        "source": source.map(Source::to_json),
        "parameters": parameters,
        "version": env!("CARGO_PKG_VERSION"),
    })
}

fn provenance_lines(prov: &Value) -> Vec<String> {
    let mut out = vec![format!(
        "# version\t{}",
        prov["version"].as_str().unwrap_or("")
    )];
    if let Some(src) = prov["source"].as_object() {
        for key in ["kind", "value", "sha256"] {
            out.push(format!(
                "# source.{key}\t{}",
                src[key].as_str().unwrap_or("")
            ));
        }
    }
    if let Some(params) = prov["parameters"].as_object() {
        for (k, v) in params {
            out.push(format!("# {k}\t{v}"));
        }
    }
    out
}

fn cmd_complexity(args: &SourceArgs, depth: usize) -> Result<Report> {
    let source = Source::load(args)?;
    let table = source.table(depth + 1)?;
    let mut rows = Vec::new();
    let mut tsv = Vec::new();
    let mut max_s = i64::MIN;
    for n in 1..=depth {
        let (p, s) = (table.complexity(n)?, table.complexity_diff(n)?);
        max_s = max_s.max(s);
        rows.push(json!({ "n": n, "p": p, "s": s }));
        tsv.push(format!("{n}\t{p}\t{s}"));
    }
    let estimate = table.cassaigne_k(depth).ok();
    let prov = provenance(Some(&source), json!({ "depth": depth }));
    let mut lines = provenance_lines(&prov);
    lines.push("n\tp\ts".into());
    lines.extend(tsv);
    lines.push(format!("# max_s\t{max_s}"));
    if let Some(e) = &estimate {
        lines.push(format!("# cassaigne_K\t{}", e.k));
    }
    Ok(Report::new(
        json!({ "provenance": prov, "rows": rows, "max_s": max_s, "cassaigne_k": estimate }),
        lines,
    ))
}

fn cmd_special(args: &SourceArgs, length: usize, side: SideArg) -> Result<Report> {
    let source = Source::load(args)?;
    let table = source.table(length + 1)?;
    let side = match side {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    };
    let words = table.special_words(length, side)?;
    let prov = provenance(Some(&source), json!({ "length": length, "side": side }));
    let mut lines = provenance_lines(&prov);
    lines.push("word\textensions".into());
    let mut entries = Vec::new();
    for w in &words {
        let (word, ext) = (table.render(&w.word), table.render(&w.extensions));
        lines.push(format!("{word}\t{ext}"));
        entries.push(json!({ "word": word, "extensions": ext }));
    }
    Ok(Report::new(
        json!({ "provenance": prov, "words": entries }),
        lines,
    ))
}

fn cmd_branch(
    args: &SourceArgs,
    depth: usize,
    table_length: Option<usize>,
    max_period: usize,
) -> Result<Report> {
    let source = Source::load(args)?;
    let table_length = table_length.unwrap_or(4 * depth + 1);
    let table = source.table(table_length)?;
    let tree = left_special_tree(&table, depth)?;
    let certs = match source.substitution() {
        Some(theta) => certify_branch_points(theta, &table, max_period),
        None => Vec::new(),
    };
    let census = branch_census(&tree, &certs);
    let aut_bound = aut_upper_bound(&census).ok();
    let asymptotic = asymptotic_upper_bound(&census).ok();
    let certificates: Vec<Value> = certs
        .iter()
        .map(|c| {
            let mut v = c.to_json(table.alphabet());
            let replays = source
                .substitution()
                .is_some_and(|theta| c.replay(theta, &table));
            v["replays"] = json!(replays);
            v
        })
        .collect();
    let chains: Vec<Value> = census
        .chains()
        .iter()
        .map(|c| json!({ "word": table.render(&c.word), "order": c.order, "certificate": c.certificate }))
        .collect();
    let census_json = census.to_json();
    let prov = provenance(
        Some(&source),
        json!({ "depth": depth, "table_length": table_length, "horizon": tree.horizon(), "max_period": max_period }),
    );
    let mut lines = provenance_lines(&prov);
    lines.push("order\tcount\tcertified".into());
    for (k, e) in census.entries() {
        lines.push(format!("{k}\t{}\t{}", e.count, e.is_certified()));
    }
    for c in &certs {
        lines.push(format!(
            "# certificate\t{}\tperiod={}\tletters={}\tprefix={}",
            c.kind(),
            c.period(),
            table.render(c.letters()),
            table.render(c.point_prefix())
        ));
    }
    lines.push(format!(
        "# aut_bound\t{}",
        aut_bound.map_or("none".into(), |m| m.to_string())
    ));
    if let Some(a) = &asymptotic {
        lines.push(format!("# asymptotic_upper_bound\t{}", a.upper_bound_total));
    }
    Ok(Report::new(
        json!({
            "provenance": prov,
            "depth": depth,
            "counts": census_json["counts"],
            "certified": census_json["certified"],
            "chains": chains,
            "certificates": certificates,
            "aut_bound": aut_bound,
            "asymptotic_upper_bound": asymptotic.map(|a| a.to_json()),
        }),
        lines,
    ))
}

fn cmd_return_words(
    args: &SourceArgs,
    max_u: usize,
    probe_length: Option<usize>,
) -> Result<Report> {
    let source = Source::load(args)?;
    let table = source.table(2 * max_u + 1)?;
    let probe = source.probe(probe_length)?;
    let index = ReturnWordIndex::build(&table, &probe, max_u)?;
    let estimate = recurrence_constant(&table, &probe, max_u)?;
    let k = estimate.k_ceil();
    let prov = provenance(
        Some(&source),
        json!({ "max_u": max_u, "probe_length": probe.len() }),
    );
    let mut lines = provenance_lines(&prov);
    lines.push("u\treturn_words".into());
    let mut sets = serde_json::Map::new();
    for (u, words) in &index.entries {
        let rendered: Vec<String> = words.iter().map(|w| table.render(w)).collect();
        lines.push(format!("{}\t{}", table.render(u), rendered.join(",")));
        sets.insert(table.render(u), json!(rendered));
    }
    lines.push(format!("# k_hat\t{}", estimate.k_hat));
    lines.push(format!("# k_ceil\t{k}"));
    let bounds = json!({ "s_bound": cassaigne_s_bound(k).ok(), "aut_bound": lr_aut_bound(k).ok() });
    Ok(Report::new(
        json!({ "provenance": prov, "return_words": sets, "estimate": estimate.to_json(&table), "bounds_at_k_ceil": bounds }),
        lines,
    ))
}

fn cmd_bounds(k: u64, alphabet_size: Option<usize>) -> Result<Report> {
    let s_bound = cassaigne_s_bound(k)?;
    let aut_bound = lr_aut_bound(k)?;
    let root = alphabet_size.map(substitution_root_bound).transpose()?;
    let prov = provenance(None, json!({ "K": k, "alphabet_size": alphabet_size }));
    let mut lines = provenance_lines(&prov);
    lines.push(format!("K\t{k}"));
    lines.push(format!("s_bound\t{s_bound}"));
    lines.push(format!("aut_bound\t{aut_bound}"));
    lines.push(format!("root_index_bound\t{aut_bound}"));
    if let Some(r) = root {
        lines.push(format!("substitution_root_bound\t{r}"));
    }
    Ok(Report::new(
        json!({
            "provenance": prov,
            "K": k,
            "s_bound": s_bound,
            "aut_bound": aut_bound,
            "root_index_bound": aut_bound,
            "substitution_root_bound": root,
        }),
        lines,
    ))
}

fn cmd_search(
    args: &SourceArgs,
    radius: usize,
    depth: usize,
    node_budget: u64,
    invertible: bool,
    emit_json: Option<&PathBuf>,
) -> Result<Report> {
    let source = Source::load(args)?;
    let reach = if invertible { 2 * radius } else { radius };
    let table = source.table(depth + reach)?;
    let config = SearchConfig {
        node_budget,
        parallel: true,
    };
    let outcome = enumerate_endomorphisms_with(&table, radius, depth, &config)?;
    let inverses = if invertible {
        Some(invertible_endomorphisms(&table, radius, depth, &config)?)
    } else {
        None
    };
    let prov = provenance(
        Some(&source),
        json!({ "radius": radius, "depth": depth, "node_budget": node_budget, "table_length": table.max_length() }),
    );
    let mut lines = provenance_lines(&prov);
    lines.push(format!("# nodes_visited\t{}", outcome.nodes_visited));
    lines.push("anticipation\tshift_power\tinvertible\trule".into());
    let mut codes = Vec::new();
    for report in &outcome.reports {
        let inverse = inverses.as_ref().and_then(|inv| {
            inv.iter()
                .find(|(r, _)| r.code == report.code)
                .map(|(_, d)| d)
        });
        let rule_json = report.code.to_json();
        let rule_text: Vec<String> = rule_json["rule"]
            .as_array()
            .expect("rule list")
            .iter()
            .map(|pair| {
                format!(
                    "{}>{}",
                    pair[0].as_str().unwrap_or(""),
                    pair[1].as_str().unwrap_or("")
                )
            })
            .collect();
        lines.push(format!(
            "{}\t{}\t{}\t{}",
            report.code.anticipation(),
            report
                .shift_power_equivalent
                .map_or("-".into(), |n| n.to_string()),
            inverses
                .as_ref()
                .map_or("-".into(), |_| inverse.is_some().to_string()),
            rule_text.join(" ")
        ));
        let mut entry = report.to_json();
        if inverses.is_some() {
            entry["inverse"] = inverse.map_or(Value::Null, SlidingBlockCode::to_json);
        }
        codes.push(entry);
    }
    let json = json!({
        "provenance": prov,
        "nodes_visited": outcome.nodes_visited,
        "codes": codes,
    });
    if let Some(path) = emit_json {
        fs::write(path, serde_json::to_string_pretty(&json)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Report::new(json, lines))
}

fn cmd_verify(
    args: &SourceArgs,
    code_path: Option<&PathBuf>,
    depth: usize,
    k_max: usize,
    n_max: usize,
) -> Result<Report> {
    let source = Source::load(args)?;
    let code_json: Option<Value> = code_path
        .map(|p| -> Result<Value> {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .transpose()?;
    let (memory, anticipation) = match &code_json {
        Some(v) => (
            v["memory"].as_u64().context("code has no memory field")? as usize,
            v["anticipation"]
                .as_u64()
                .context("code has no anticipation field")? as usize,
        ),
        None => (0, 3),
    };
    let window = memory + 1 + anticipation;
    let needed = (depth + window - 1).max(k_max * memory + 1 + (k_max * anticipation).max(n_max));
    let table = source.table(needed)?;
    let code = match &code_json {
        Some(v) => SlidingBlockCode::from_json(&table, v)?,
        None => source
            .default_code(&table)?
            .context("this source has no built-in code; pass --code")?,
    };
    let prov = provenance(
        Some(&source),
        json!({ "depth": depth, "k_max": k_max, "n_max": n_max, "table_length": table.max_length() }),
    );
    let mut lines = provenance_lines(&prov);
    match verify_endomorphism(&code, &table, depth) {
        Ok(mut report) => {
            report.root_relation = find_root_relation(&code, &table, k_max, n_max)?;
            lines.push(format!("verified_depth\t{}", report.verified_depth));
            lines.push(format!(
                "shift_power_equivalent\t{}",
                report
                    .shift_power_equivalent
                    .map_or("none".into(), |n| n.to_string())
            ));
            lines.push(format!(
                "root_relation\t{}",
                report
                    .root_relation
                    .map_or("none".into(), |(k, n)| format!("{k},{n}"))
            ));
            Ok(Report::new(
                json!({ "provenance": prov, "status": "PASS", "report": report.to_json() }),
                lines,
            ))
        }
        Err(Error::NotEndomorphism { factor, image }) => {
            lines.push(format!("FAIL\tfactor={factor}\timage={image}"));
            Ok(Report {
                json: json!({ "provenance": prov, "status": "FAIL", "witness": { "factor": factor, "image": image } }),
                tsv: lines,
                exit: EXIT_VERIFICATION,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_paper_check(only: Option<&str>) -> Result<Report> {
    let checks = run_checks(only)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let prov = provenance(None, json!({ "only": only }));
    let mut lines = provenance_lines(&prov);
    for c in &checks {
        lines.push(format!(
            "{}\t{}\t{}\t{}",
            if c.passed { "PASS" } else { "FAIL" },
            c.group,
            c.name,
            c.witness
        ));
    }
    lines.push(format!(
        "# passed\t{}/{}",
        checks.len() - failed,
        checks.len()
    ));
    Ok(Report {
        json: json!({
            "provenance": prov,
            "checks": checks.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "passed": checks.len() - failed,
            "failed": failed,
        }),
        tsv: lines,
        exit: if failed == 0 { 0 } else { EXIT_VERIFICATION },
    })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Complexity { source, depth } => cmd_complexity(source, *depth),
        Command::Special {
            source,
            length,
            side,
        } => cmd_special(source, *length, *side),
        Command::Branch {
            source,
            depth,
            table_length,
            max_period,
        } => cmd_branch(source, *depth, *table_length, *max_period),
        Command::ReturnWords {
            source,
            max_u,
            probe_length,
        } => cmd_return_words(source, *max_u, *probe_length),
        Command::Bounds { k, alphabet_size } => cmd_bounds(*k, *alphabet_size),
        Command::SearchEndo {
            source,
            radius,
            depth,
            node_budget,
            invertible,
            emit_json,
        } => cmd_search(
            source,
            *radius,
            *depth,
            *node_budget,
            *invertible,
            emit_json.as_ref(),
        ),
        Command::Verify {
            source,
            code,
            depth,
            k_max,
            n_max,
        } => cmd_verify(source, code.as_ref(), *depth, *k_max, *n_max),
        Command::PaperCheck { only } => cmd_paper_check(only.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
        Some(Error::NotEndomorphism { .. }) => EXIT_VERIFICATION,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_USAGE } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            report.print(cli.format);
            ExitCode::from(report.exit)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
