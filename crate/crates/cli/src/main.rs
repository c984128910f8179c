//! `belyi`: command-line front end to the belyi-core library.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a report assertion
//! failed.

use std::path::PathBuf;
use std::process::ExitCode;

use belyi_core::experiments::{
    self, CapSetting, OrderedParams, PoissonParams, SweepParams, SystoleParams, TraceMode, TraceParams,
};
use belyi_core::report::{fmt_sig, results_dir, rows_to_csv, to_value, ExperimentReport, RESULTS_DIR_ENV};
use belyi_core::spectrum_bounds::{
    self, LowerConditioning, WeightPolicy, DEFAULT_LOWER_KMAX, DEFAULT_UPPER_KMAX,
};
use belyi_core::stern_moments::{self, MomentVector};
use belyi_core::{enumerate_cycles, is_disconnecting, CapPolicy, RotationGraph, Seed};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "belyi", version, about = "Random Belyi surfaces from oriented cubic graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Master seed; every sample derives its own stream from it.
    #[arg(long, global = true, default_value_t = Seed::DEFAULT.value())]
    seed: u64,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for persisted experiment reports.
    #[arg(long, global = true, env = RESULTS_DIR_ENV)]
    results_dir: Option<PathBuf>,
    /// Do not persist experiment reports.
    #[arg(long, global = true)]
    no_save: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample one oriented cubic graph on 2n vertices.
    GenGraph {
        #[arg(long)]
        n: usize,
    },
    /// List the short simple cycles of sampled or loaded graphs.
    Cycles {
        #[arg(long, required_unless_present = "graph")]
        n: Option<usize>,
        /// Read the graph from a JSON file instead of sampling.
        #[arg(long, conflicts_with_all = ["n", "samples"])]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long)]
        max_len: usize,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Fit cycle counts to Poisson(2^i / 2i).
    PoissonCheck {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 5)]
        i_max: usize,
        /// Lengths whose fit is asserted (default 3..=i_max).
        #[arg(long, value_delimiter = ',')]
        tested: Option<Vec<usize>>,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Empirical systole of sampled surfaces.
    Systole {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        min_cycle_len: usize,
        /// Asserted bracket for the mean, as LO,HI.
        #[arg(long, value_parser = parse_pair::<f64>, default_value = "2.7,3.2")]
        bracket: (f64, f64),
        /// Skip the bracket assertion.
        #[arg(long)]
        no_bracket: bool,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Lengths of the k shortest pairwise compatible geodesics across sizes.
    Geodesics {
        #[arg(long, value_delimiter = ',', default_values_t = [250usize, 500, 1000, 2000])]
        n_values: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        min_cycle_len: usize,
        #[arg(long, default_value_t = 2.0)]
        z_threshold: f64,
        #[command(flatten)]
        cap: CapArgs,
    },
    /// Disconnection or intersection fractions over a range of sizes.
    Sweep {
        #[arg(value_enum)]
        kind: SweepKind,
        #[arg(long, value_delimiter = ',', default_values_t = [64usize, 256, 1024])]
        n_values: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = belyi_core::cycle_census::DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Expected-systole series.
    Bounds {
        #[arg(value_enum)]
        side: Side,
        #[arg(long)]
        kmax: Option<u32>,
        #[arg(long, value_enum, default_value_t = Weight::Printed)]
        weight: Weight,
        #[arg(long, value_enum, default_value_t = Conditioning::AllWords)]
        conditioning: Conditioning,
    },
    /// Stern rows and exact entry moments.
    Stern {
        #[arg(long)]
        steps: u32,
        /// Seed pair of the row, as A,B.
        #[arg(long, value_parser = parse_pair::<u64>, default_value = "1,0")]
        pair: (u64, u64),
        /// Print the moment table for steps 1..=STEPS instead of the row.
        #[arg(long)]
        table: bool,
    },
    /// Trace and length statistics of random words.
    TraceStats {
        #[arg(long)]
        len: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Growth factor of the diagonal entry from blocks of b letters.
    Growth {
        #[arg(long)]
        block: u32,
    },
}

#[derive(Args, Debug)]
struct CapArgs {
    /// Lift the alpha cutoff on max-len.
    #[arg(long)]
    unchecked: bool,
    #[arg(long, default_value_t = belyi_core::cycle_census::DEFAULT_EPSILON)]
    epsilon: f64,
}

impl CapArgs {
    fn setting(&self) -> CapSetting {
        if self.unchecked {
            CapSetting::Unchecked
        } else {
            CapSetting::Alpha { epsilon: self.epsilon }
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepKind {
    Disconnection,
    Intersection,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Weight {
    Printed,
    AllButUniform,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Conditioning {
    AllWords,
    ExcludeUniform,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

/// What a command produced.
enum Output {
    /// A JSON document; CSV is the flattened `path,value` listing unless
    /// the command has a natural table.
    Doc { doc: Value, csv: Option<String> },
    Report(ExperimentReport),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String> {
    let bad = || format!("expected two comma separated values, got '{s}'");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    if let Some(t) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let seed = Seed(cli.common.seed);
    let out = execute(&cli.command, seed).map_err(|e| e.to_string())?;
    let (text, summary, passed) = match &out {
        Output::Doc { doc, csv } => {
            let doc = &to_value(doc);
            let text = match (cli.common.format, csv) {
                // the graph file format is compact
                (Format::Json, _) if matches!(cli.command, Command::GenGraph { .. }) => {
                    format!("{doc}\n")
                }
                (Format::Json, _) => pretty(doc),
                (Format::Csv, Some(csv)) => csv.clone(),
                (Format::Csv, None) => flatten_csv(doc),
            };
            (text, summary_line(&cli.command, doc), true)
        }
        Output::Report(r) => {
            let text = match cli.common.format {
                Format::Json => r.to_json(),
                Format::Csv => flatten_csv(&serde_json::to_value(r).map_err(|e| e.to_string())?),
            };
            let mut line = format!(
                "{}: {}/{} assertions passed",
                r.experiment,
                r.assertions.iter().filter(|a| a.passed).count(),
                r.assertions.len()
            );
            if !cli.common.no_save {
                let root = cli.common.results_dir.clone().unwrap_or_else(results_dir);
                let path = r.persist(&root).map_err(|e| e.to_string())?;
                line.push_str(&format!(", saved {}", path.display()));
            }
            for a in r.assertions.iter().filter(|a| !a.passed) {
                line.push_str(&format!("\n  failed {}: {}", a.name, a.detail));
            }
            (text, line, r.all_passed())
        }
    };
    match &cli.common.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?,
        None => print!("{text}"),
    }
    eprintln!("{summary}");
    Ok(ExitCode::from(if passed { 0 } else { 2 }))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_f64() => fmt_sig(n.as_f64().expect("f64")),
        other => other.to_string(),
    }
}

/// `path,value` rows for every leaf of a JSON document.
fn flatten_csv(doc: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        match v {
            Value::Object(map) => map.iter().for_each(|(k, x)| walk(&join(k), x, out)),
            Value::Array(items) => items.iter().enumerate().for_each(|(i, x)| walk(&join(&i.to_string()), x, out)),
            leaf => out.push((prefix.to_string(), scalar(leaf))),
        }
    }
    let mut rows = Vec::new();
    walk("", doc, &mut rows);
    let mut text = String::from("path,value\n");
    for (p, v) in rows {
        let quoted = if v.contains([',', '"', '\n']) {
            format!("\"{}\"", v.replace('"', "\"\""))
        } else {
            v
        };
        text.push_str(&format!("{p},{quoted}\n"));
    }
    text
}

fn summary_line(cmd: &Command, doc: &Value) -> String {
    match cmd {
        Command::GenGraph { .. } => format!("graph with {} vertices", doc["vertex_count"]),
        Command::Cycles { .. } => format!("{} cycles", doc.as_array().map_or(0, |a| a.len())),
        Command::Bounds { .. } => format!("value {}", scalar(&doc["value"])),
        Command::Growth { .. } => format!("factor {}", scalar(&doc["factor"])),
        Command::Stern { table: false, .. } => format!(
            "row {}",
            doc["row"]
                .as_array()
                .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
                .unwrap_or_default()
        ),
        Command::Stern { .. } => format!(
            "covariance turns positive at step {}",
            stern_moments::covariance_sign_change()
        ),
        _ => String::new(),
    }
}

fn execute(cmd: &Command, seed: Seed) -> belyi_core::Result<Output> {
    let doc = |doc: Value| Output::Doc { doc, csv: None };
    let as_table = |rows: Vec<Value>| -> belyi_core::Result<Output> {
        Ok(Output::Doc {
            csv: Some(rows_to_csv(&rows)?),
            doc: Value::Array(rows),
        })
    };
    Ok(match cmd {
        Command::GenGraph { n } => {
            let g = belyi_core::sample_graph(*n, seed)?;
            let rows: Vec<Value> = (0..g.stub_count())
                .map(|s| {
                    json!({
                        "stub": s,
                        "vertex": RotationGraph::vertex_of(s),
                        "partner": g.partner(s),
                        "succ": g.succ(s),
                    })
                })
                .collect();
            Output::Doc {
                doc: serde_json::to_value(g.to_data())?,
                csv: Some(rows_to_csv(&rows)?),
            }
        }
        Command::Cycles {
            n,
            graph,
            samples,
            max_len,
            cap,
        } => {
            let graphs: Vec<RotationGraph> = match (graph, n) {
                (Some(path), _) => vec![RotationGraph::from_json(&std::fs::read_to_string(path)?)?],
                (None, Some(n)) => (0..*samples)
                    .map(|t| experiments::trial_graph(seed, *n, t))
                    .collect::<belyi_core::Result<_>>()?,
                (None, None) => unreachable!("clap requires --n or --graph"),
            };
            let policy: CapPolicy = cap.setting().into();
            let mut rows = Vec::new();
            for (id, g) in graphs.iter().enumerate() {
                for c in enumerate_cycles(g, *max_len, policy)? {
                    rows.push(json!({
                        "graph_id": id,
                        "length": c.len(),
                        "stubs": c.stub_string(),
                        "disconnecting": is_disconnecting(g, &[&c]),
                    }));
                }
            }
            as_table(rows)?
        }
        Command::PoissonCheck {
            n,
            samples,
            i_max,
            tested,
            cap,
        } => {
            let params = PoissonParams {
                n: *n,
                samples: *samples,
                i_max: *i_max,
                tested: tested.clone().unwrap_or_else(|| (3..=*i_max).collect()),
                cap: cap.setting(),
                ..Default::default()
            };
            Output::Report(experiments::poisson_fit(&params, seed)?)
        }
        Command::Systole {
            n,
            samples,
            max_len,
            min_cycle_len,
            bracket,
            no_bracket,
            cap,
        } => {
            let params = SystoleParams {
                n: *n,
                samples: *samples,
                max_len: *max_len,
                min_cycle_len: *min_cycle_len,
                cap: cap.setting(),
                bracket: (!no_bracket).then_some(*bracket),
            };
            Output::Report(experiments::empirical_systole(&params, seed)?)
        }
        Command::Geodesics {
            n_values,
            samples,
            max_len,
            k,
            min_cycle_len,
            z_threshold,
            cap,
        } => {
            let params = OrderedParams {
                n_values: n_values.clone(),
                samples: *samples,
                max_len: *max_len,
                k: *k,
                min_cycle_len: *min_cycle_len,
                cap: cap.setting(),
                z_threshold: Some(*z_threshold),
            };
            Output::Report(experiments::ordered_geodesics(&params, seed)?)
        }
        Command::Sweep {
            kind,
            n_values,
            samples,
            epsilon,
        } => {
            let params = SweepParams {
                n_values: n_values.clone(),
                samples: *samples,
                epsilon: *epsilon,
                final_limit: match kind {
                    SweepKind::Disconnection => SweepParams::default().final_limit,
                    SweepKind::Intersection => None,
                },
                ..Default::default()
            };
            Output::Report(match kind {
                SweepKind::Disconnection => experiments::disconnection_sweep(&params, seed)?,
                SweepKind::Intersection => experiments::intersection_sweep(&params, seed)?,
            })
        }
        Command::Bounds {
            side,
            kmax,
            weight,
            conditioning,
        } => {
            let policy = match weight {
                Weight::Printed => WeightPolicy::Printed,
                Weight::AllButUniform => WeightPolicy::AllButUniform,
            };
            let series = match side {
                Side::Upper => spectrum_bounds::systole_upper(kmax.unwrap_or(DEFAULT_UPPER_KMAX), policy)?,
                Side::Lower => {
                    let cond = match conditioning {
                        Conditioning::AllWords => LowerConditioning::AllWords,
                        Conditioning::ExcludeUniform => LowerConditioning::ExcludeUniform,
                    };
                    spectrum_bounds::systole_lower(kmax.unwrap_or(DEFAULT_LOWER_KMAX), policy, cond)?
                }
            };
            doc(to_value(series))
        }
        Command::Growth { block } => {
            let bound = spectrum_bounds::growth_lower_bound(*block)?;
            doc(to_value(json!({
                "block": bound.block,
                "factor": bound.factor,
                "method": bound.method,
                "radical": spectrum_bounds::cubic_radical_value(),
                "multipliers": spectrum_bounds::block_multipliers(*block)?,
            })))
        }
        Command::Stern { steps, pair, table } => {
            if *table {
                let mut v = MomentVector::identity();
                let mut rows = Vec::new();
                for row in stern_moments::moment_table(*steps) {
                    v = v.step();
                    let mut r = to_value(&row);
                    r["covariance_exact"] = json!(v.covariance().to_string());
                    r["trace_variance_exact"] = json!(v.trace_variance().to_string());
                    rows.push(r);
                }
                as_table(rows)?
            } else {
                let row = stern_moments::stern_row(*steps, *pair)?;
                let text = row.values.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                Output::Doc {
                    doc: json!({"step": row.step, "seed": [pair.0, pair.1], "row": row.values}),
                    csv: Some(text + "\n"),
                }
            }
        }
        Command::TraceStats { len, mode, samples } => {
            let params = TraceParams {
                word_len: *len,
                mode: match mode {
                    Mode::Exhaustive => TraceMode::Exhaustive,
                    Mode::Sampled => TraceMode::Sampled,
                },
                samples: *samples,
                ..Default::default()
            };
            Output::Report(experiments::trace_stats(&params, seed)?)
        }
    })
}
