//! Command-line front end. Every subcommand parses flags, calls one library
//! routine and formats the result; no numerics live here.
//!
//! Exit codes: `0` success, `1` domain error, `2` usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::benford::{density_qsn, sequence_benford_report, SetPredicate};
use crate::counting::{
    bijection_oracle, block_position_tally, coefficient_distribution, count_super_legal,
    interior_keys, CountMethod, Route,
};
use crate::decomposition::{decompose, is_legal, is_super_legal, segment_blocks};
use crate::enumerate::Budget;
use crate::error::ZeckError;
use crate::numeric::{rational_string, ser_f64};
use crate::recurrence::{
    dominant_root, fit_binet_constant, generate_sequence, validate_spec, RecurrenceSpec,
    SequenceTable,
};
use crate::stochastic::{concentration, summand_digit_report, xy_ladder, Plan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SetKind {
    Even,
    LeadingDigit,
    Significand,
    Residue,
    File,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckMode {
    Legal,
    SuperLegal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenfordMode {
    Sequence,
    Summand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Recurrence,
    Enumeration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Formula,
    Enumeration,
}

/// Flags shared by every subcommand. All optional so that a config file can
/// supply them.
#[derive(Debug, Clone, Default, clap::Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Options {
    /// Recurrence coefficients c_1..c_L, comma separated
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub coeffs: Option<Vec<i64>>,
    /// Initial terms G_1..G_L, comma separated
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub initial: Option<Vec<String>>,
    /// Use canonical initial terms even if --initial is present in the config
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub canonical: bool,
    /// String length, table size or ladder of lengths (comma separated)
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub base: Option<u32>,
    #[arg(long, global = true)]
    pub digit: Option<u32>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub set: Option<SetKind>,
    /// Modulus for --set residue
    #[arg(long, global = true)]
    pub modulus: Option<u64>,
    /// Residue classes for --set residue
    #[arg(long, global = true, value_delimiter = ',')]
    pub classes: Option<Vec<u64>>,
    /// Upper significand bound for --set significand
    #[arg(long, global = true)]
    pub bound: Option<f64>,
    /// Index file for --set file (whitespace or comma separated indices)
    #[arg(long, global = true)]
    pub set_file: Option<PathBuf>,
    /// Known density to compare against instead of the table-horizon estimate
    #[arg(long, global = true)]
    pub density: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Cap on enumerated strings (overrides ZECK_BUDGET)
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

impl Options {
    /// Fills unset fields from `other`.
    fn or(self, other: Options) -> Options {
        Options {
            coeffs: self.coeffs.or(other.coeffs),
            initial: if self.canonical {
                None
            } else {
                self.initial.or(other.initial)
            },
            canonical: self.canonical || other.canonical,
            n: self.n.or(other.n),
            samples: self.samples.or(other.samples),
            seed: self.seed.or(other.seed),
            base: self.base.or(other.base),
            digit: self.digit.or(other.digit),
            epsilon: self.epsilon.or(other.epsilon),
            set: self.set.or(other.set),
            modulus: self.modulus.or(other.modulus),
            classes: self.classes.or(other.classes),
            bound: self.bound.or(other.bound),
            set_file: self.set_file.or(other.set_file),
            density: self.density.or(other.density),
            format: self.format.or(other.format),
            workers: self.workers.or(other.workers),
            budget: self.budget.or(other.budget),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "zeck",
    version,
    about = "Generalized Zeckendorf decompositions and Benford experiments"
)]
pub struct Cli {
    /// JSON config file mirroring flag names; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print G_1..G_n
    Sequence,
    /// Decompose an integer
    Decompose { value: String },
    /// Test a digit string for legality
    Check {
        #[arg(value_delimiter = ',')]
        digits: Vec<u32>,
        #[arg(long, value_enum, default_value = "legal")]
        mode: CheckMode,
    },
    /// Segment a legal digit string into blocks
    Blocks {
        #[arg(value_delimiter = ',')]
        digits: Vec<u32>,
    },
    /// Super-legal counts H_1..H_n
    CountSuperlegal {
        #[arg(long, value_enum, default_value = "recurrence")]
        method: MethodArg,
    },
    /// Dominant root and Binet constant
    Root {
        #[arg(long, default_value_t = 1e-12)]
        tolerance: f64,
    },
    /// Exact coefficient distribution p_{j,k}(n)
    Distribution {
        #[arg(long, value_enum, default_value = "formula")]
        route: RouteArg,
    },
    /// Closed-form block-position counts against enumeration
    BlockCounts,
    /// Density q(S, n) of a set among G_1..G_n
    Density,
    /// Leading-digit histograms of the sequence or of summands
    Benford {
        #[arg(long, value_enum, default_value = "sequence")]
        mode: BenfordMode,
    },
    /// Moments of X_n and Y_n, exact or sampled
    Stats,
    /// Probability that Y_n/X_n is within epsilon of the density
    Concentration,
    /// Bijection audit of fixed-length legal strings
    Oracle,
}

enum Failure {
    Usage(String),
    Domain(ZeckError),
    Io(String),
}

impl From<ZeckError> for Failure {
    fn from(e: ZeckError) -> Self {
        Failure::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

/// Parses `args` (including the program name), runs one command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            1
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn load_options(cli: &Cli) -> CliResult<Options> {
    let file = match &cli.config {
        None => Options::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))?
        }
    };
    Ok(cli.options.clone().or(file))
}

struct Ctx {
    opts: Options,
    format: Format,
    workers: usize,
    budget: Budget,
}

impl Ctx {
    fn spec(&self) -> CliResult<RecurrenceSpec> {
        let Some(coeffs) = &self.opts.coeffs else {
            return usage("missing --coeffs");
        };
        let initial = match &self.opts.initial {
            Some(list) if !self.opts.canonical => Some(
                list.iter()
                    .map(|t| t.trim().parse::<BigInt>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Failure::Usage("--initial: expected integers".into()))?,
            ),
            _ => None,
        };
        Ok(validate_spec(coeffs, initial.as_deref())?)
    }

    fn ladder(&self) -> CliResult<Vec<usize>> {
        match &self.opts.n {
            Some(v) if !v.is_empty() => Ok(v.clone()),
            _ => usage("missing --n"),
        }
    }

    fn n(&self) -> CliResult<usize> {
        Ok(self.ladder()?[0])
    }

    fn n_or(&self, default: usize) -> usize {
        self.opts
            .n
            .as_ref()
            .and_then(|v| v.first().copied())
            .unwrap_or(default)
    }

    fn seed(&self) -> CliResult<u64> {
        self.opts
            .seed
            .ok_or_else(|| Failure::Usage("missing --seed (required for sampled commands)".into()))
    }

    fn samples(&self) -> CliResult<usize> {
        self.opts
            .samples
            .ok_or_else(|| Failure::Usage("missing --samples".into()))
    }

    fn base(&self) -> u32 {
        self.opts.base.unwrap_or(10)
    }

    fn predicate(&self) -> CliResult<SetPredicate> {
        let kind = self.opts.set.unwrap_or(SetKind::All);
        Ok(match kind {
            SetKind::All => SetPredicate::Everything,
            SetKind::Even => SetPredicate::even(),
            SetKind::LeadingDigit => {
                SetPredicate::leading_digit(self.base(), self.opts.digit.unwrap_or(1))?
            }
            SetKind::Significand => {
                let Some(bound) = self.opts.bound else {
                    return usage("--set significand needs --bound");
                };
                SetPredicate::significand_at_most(self.base(), bound)?
            }
            SetKind::Residue => {
                let Some(modulus) = self.opts.modulus else {
                    return usage("--set residue needs --modulus");
                };
                let classes = self.opts.classes.clone().unwrap_or_else(|| vec![0]);
                SetPredicate::residue(modulus, classes)?
            }
            SetKind::File => {
                let Some(path) = &self.opts.set_file else {
                    return usage("--set file needs --set-file");
                };
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Io(format!("--set-file {}: {e}", path.display())))?;
                let indices = text
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Failure::Usage("--set-file: expected integer indices".into()))?;
                SetPredicate::indices(indices)
            }
        })
    }

    fn emit<T: Serialize>(
        &self,
        value: &T,
        csv: impl FnOnce() -> String,
        pretty: impl FnOnce() -> String,
    ) -> CliResult<String> {
        Ok(match self.format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => csv(),
            Format::Pretty => pretty(),
        })
    }
}

fn csv_rows<R: IntoIterator<Item = Vec<String>>>(header: &[&str], rows: R) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct SequenceOut<'a> {
    spec: &'a RecurrenceSpec,
    terms: Vec<String>,
}

#[derive(Serialize)]
struct CheckOut<'a> {
    digits: &'a [u32],
    mode: &'static str,
    result: bool,
}

#[derive(Serialize)]
struct RootOut {
    #[serde(serialize_with = "ser_f64")]
    lambda1: f64,
    #[serde(serialize_with = "ser_f64")]
    a_const: f64,
    burn_in: usize,
    table_len: usize,
    #[serde(serialize_with = "ser_f64")]
    ratio_gap: f64,
}

#[derive(Serialize)]
struct DistRow {
    n: usize,
    j: usize,
    k: usize,
    exact: String,
    #[serde(serialize_with = "ser_f64")]
    value: f64,
}

#[derive(Serialize)]
struct DistOut {
    n: usize,
    denominator: String,
    route: Route,
    #[serde(serialize_with = "crate::numeric::ser_f64_vec")]
    marginal: Vec<f64>,
    rows: Vec<DistRow>,
}

#[derive(Serialize)]
struct BlockCountRow {
    j: usize,
    k: u32,
    length: usize,
    position: usize,
    formula: String,
    enumeration: String,
    agree: bool,
}

#[derive(Serialize)]
struct BlockCountsOut {
    n: usize,
    all_agree: bool,
    rows: Vec<BlockCountRow>,
}

fn table_for_value(spec: &RecurrenceSpec, m: &BigUint) -> SequenceTable {
    let mut table = generate_sequence(spec, spec.depth());
    while &table.bound() <= m {
        let len = table.len();
        table.extend_to(len + 1);
    }
    table
}

fn execute(cli: Cli) -> CliResult<String> {
    let opts = load_options(&cli)?;
    let ctx = Ctx {
        format: opts.format.unwrap_or(Format::Json),
        workers: opts.workers.unwrap_or(1).max(1),
        budget: opts
            .budget
            .map(Budget::new)
            .unwrap_or_else(Budget::from_env),
        opts,
    };
    match cli.command {
        Command::Sequence => {
            let spec = ctx.spec()?;
            let table = generate_sequence(&spec, ctx.n()?);
            let terms: Vec<String> = table.g_values().iter().map(|g| g.to_string()).collect();
            ctx.emit(
                &SequenceOut {
                    spec: &spec,
                    terms: terms.clone(),
                },
                || {
                    csv_rows(
                        &["index", "value"],
                        terms
                            .iter()
                            .enumerate()
                            .map(|(i, t)| vec![(i + 1).to_string(), t.clone()]),
                    )
                },
                || terms.join("\n") + "\n",
            )
        }
        Command::Decompose { value } => {
            let spec = ctx.spec()?;
            let m: BigUint = value.trim().parse().map_err(|_| {
                Failure::Usage(format!("<value>: not a nonnegative integer: {value}"))
            })?;
            let table = table_for_value(&spec, &m);
            let d = decompose(&m, &table)?;
            let json = d.to_json(&spec);
            ctx.emit(
                &json,
                || {
                    csv_rows(
                        &["index", "coefficient"],
                        (1..=d.len())
                            .rev()
                            .map(|i| vec![i.to_string(), d.coeff_of(i).to_string()]),
                    )
                },
                || {
                    let terms: Vec<String> = (1..=d.len())
                        .rev()
                        .filter(|&i| d.coeff_of(i) > 0)
                        .map(|i| match d.coeff_of(i) {
                            1 => format!("G_{i}"),
                            a => format!("{a}G_{i}"),
                        })
                        .collect();
                    format!("{} = {}\n", d.value(), terms.join(" + "))
                },
            )
        }
        Command::Check { digits, mode } => {
            let spec = ctx.spec()?;
            let (mode, result) = match mode {
                CheckMode::Legal => ("legal", is_legal(&digits, &spec)),
                CheckMode::SuperLegal => ("super-legal", is_super_legal(&digits, &spec)),
            };
            let out = CheckOut {
                digits: &digits,
                mode,
                result,
            };
            ctx.emit(
                &out,
                || {
                    csv_rows(
                        &["mode", "result"],
                        [vec![mode.to_string(), result.to_string()]],
                    )
                },
                || format!("{result}\n"),
            )
        }
        Command::Blocks { digits } => {
            let spec = ctx.spec()?;
            let seg = segment_blocks(&digits, &spec)?;
            ctx.emit(
                &seg,
                || {
                    csv_rows(
                        &["start", "length", "digits", "closing", "trailing_zeros"],
                        seg.blocks.iter().map(|b| {
                            vec![
                                b.start.to_string(),
                                b.length.to_string(),
                                b.digits
                                    .iter()
                                    .map(|d| d.to_string())
                                    .collect::<Vec<_>>()
                                    .join(" "),
                                format!("{:?}", b.closing).to_lowercase(),
                                b.trailing_zeros.to_string(),
                            ]
                        }),
                    )
                },
                || {
                    seg.blocks
                        .iter()
                        .map(|b| format!("{:?}", b.digits))
                        .collect::<Vec<_>>()
                        .join(" ")
                        + "\n"
                },
            )
        }
        Command::CountSuperlegal { method } => {
            let spec = ctx.spec()?;
            let method = match method {
                MethodArg::Recurrence => CountMethod::Recurrence,
                MethodArg::Enumeration => CountMethod::Enumeration,
            };
            let t = count_super_legal(&spec, ctx.n()?, method, ctx.budget)?;
            ctx.emit(
                &t,
                || {
                    csv_rows(
                        &["n", "h"],
                        t.h_values
                            .iter()
                            .enumerate()
                            .map(|(i, h)| vec![(i + 1).to_string(), h.to_string()]),
                    )
                },
                || {
                    t.h_values
                        .iter()
                        .map(|h| h.to_string())
                        .collect::<Vec<_>>()
                        .join("\n")
                        + "\n"
                },
            )
        }
        Command::Root { tolerance } => {
            let spec = ctx.spec()?;
            let lambda1 = dominant_root(&spec, tolerance);
            let len = ctx.n_or(60).max(2 * spec.depth() + 10);
            let table = generate_sequence(&spec, len);
            let fit = fit_binet_constant(&table, lambda1)?;
            let out = RootOut {
                lambda1,
                a_const: fit.a_const,
                burn_in: fit.burn_in,
                table_len: len,
                ratio_gap: (table.growth_ratio(len - 1) - lambda1).abs(),
            };
            ctx.emit(
                &out,
                || {
                    csv_rows(
                        &["lambda1", "a_const", "burn_in"],
                        [vec![
                            crate::numeric::round_sig(lambda1, 12).to_string(),
                            crate::numeric::round_sig(fit.a_const, 12).to_string(),
                            fit.burn_in.to_string(),
                        ]],
                    )
                },
                || format!("lambda1 = {lambda1:.12}\nA = {:.12}\n", fit.a_const),
            )
        }
        Command::Distribution { route } => {
            let spec = ctx.spec()?;
            let n = ctx.n()?;
            let table = generate_sequence(&spec, n + 1);
            let route = match route {
                RouteArg::Formula => Route::Formula,
                RouteArg::Enumeration => Route::Enumeration,
            };
            let dist = coefficient_distribution(&table, n, route, ctx.budget)?;
            let rows = (1..=n)
                .flat_map(|j| (0..=spec.max_coeff()).map(move |k| (j, k)))
                .map(|(j, k)| {
                    let p = dist.probability(j, k);
                    DistRow {
                        n,
                        j,
                        k: k as usize,
                        exact: rational_string(&p),
                        value: dist.probability_f64(j, k),
                    }
                })
                .collect();
            let out = DistOut {
                n,
                denominator: dist.denominator.to_string(),
                route,
                marginal: dist.marginal.clone(),
                rows,
            };
            ctx.emit(&out, || dist.to_csv(), || dist.to_csv())
        }
        Command::BlockCounts => {
            let spec = ctx.spec()?;
            let n = ctx.n()?;
            let table = generate_sequence(&spec, n + 1);
            let tally = block_position_tally(&table, n, ctx.budget, ctx.workers)?;
            let mut rows = Vec::new();
            for (j, k, length, position) in interior_keys(&spec, n) {
                let formula = crate::counting::block_position_count(
                    &table,
                    n,
                    j,
                    k,
                    length,
                    position,
                    Route::Formula,
                    ctx.budget,
                )?
                .count;
                let enumerated =
                    BigUint::from(tally.get(&(j, k, length, position)).copied().unwrap_or(0));
                rows.push(BlockCountRow {
                    j,
                    k,
                    length,
                    position,
                    agree: formula == enumerated,
                    formula: formula.to_string(),
                    enumeration: enumerated.to_string(),
                });
            }
            let out = BlockCountsOut {
                n,
                all_agree: rows.iter().all(|r| r.agree),
                rows,
            };
            ctx.emit(
                &out,
                || {
                    csv_rows(
                        &[
                            "n",
                            "j",
                            "k",
                            "length",
                            "position",
                            "formula",
                            "enumeration",
                        ],
                        out.rows.iter().map(|r| {
                            vec![
                                n.to_string(),
                                r.j.to_string(),
                                r.k.to_string(),
                                r.length.to_string(),
                                r.position.to_string(),
                                r.formula.clone(),
                                r.enumeration.clone(),
                            ]
                        }),
                    )
                },
                || {
                    format!(
                        "{} interior cases, all agree: {}\n",
                        out.rows.len(),
                        out.all_agree
                    )
                },
            )
        }
        Command::Density => {
            let spec = ctx.spec()?;
            let n = ctx.n()?;
            let table = generate_sequence(&spec, n);
            let pred = ctx.predicate()?;
            let d = density_qsn(&pred, &table, n)?;
            ctx.emit(
                &d,
                || {
                    csv_rows(
                        &["n", "hits", "q"],
                        [vec![n.to_string(), d.hits.to_string(), d.exact.clone()]],
                    )
                },
                || format!("q(S, {n}) = {} = {:.12}\n", d.exact, d.value),
            )
        }
        Command::Benford { mode } => {
            let spec = ctx.spec()?;
            let n = ctx.n()?;
            let base = ctx.base();
            match mode {
                BenfordMode::Sequence => {
                    let table = generate_sequence(&spec, n);
                    let r = sequence_benford_report(&table, n, base)?;
                    ctx.emit(&r, || r.histogram.to_csv(), || r.histogram.to_csv())
                }
                BenfordMode::Summand => {
                    let seed = ctx.seed()?;
                    let count = ctx.samples()?;
                    let table = generate_sequence(&spec, n + 1);
                    let h = summand_digit_report(&table, n, base, seed, count, ctx.workers)?;
                    ctx.emit(&h, || h.to_csv(), || h.to_csv())
                }
            }
        }
        Command::Stats => {
            let spec = ctx.spec()?;
            let ladder = ctx.ladder()?;
            let pred = ctx.predicate()?;
            let plan = match ctx.opts.samples {
                None => Plan::Exact,
                Some(count) => Plan::Sampled {
                    seed: ctx.seed()?,
                    count,
                },
            };
            let horizon = ladder.iter().copied().max().unwrap_or(1) + 1;
            let table = generate_sequence(&spec, horizon);
            let reports = xy_ladder(&table, &ladder, &pred, &plan, ctx.workers, ctx.budget)?;
            let value: &dyn erased::Out = if reports.len() == 1 {
                &reports[0]
            } else {
                &reports
            };
            ctx.emit(
                &erased::Wrap(value),
                || {
                    csv_rows(
                        &["n", "x_mean", "x_var", "y_mean", "y_var", "ratio_mean"],
                        reports.iter().map(|r| {
                            [
                                r.stats.x_mean,
                                r.stats.x_var,
                                r.stats.y_mean,
                                r.stats.y_var,
                                r.stats.ratio_mean,
                            ]
                            .iter()
                            .map(|v| crate::numeric::round_sig(*v, 12).to_string())
                            .fold(
                                vec![r.n.to_string()],
                                |mut acc, v| {
                                    acc.push(v);
                                    acc
                                },
                            )
                        }),
                    )
                },
                || json_line(&reports),
            )
        }
        Command::Concentration => {
            let spec = ctx.spec()?;
            let ladder = ctx.ladder()?;
            let pred = ctx.predicate()?;
            let seed = ctx.seed()?;
            let count = ctx.samples()?;
            let Some(epsilon) = ctx.opts.epsilon else {
                return usage("missing --epsilon");
            };
            let horizon = ladder.iter().copied().max().unwrap_or(1) + 1;
            let table = generate_sequence(&spec, horizon);
            let r = concentration(
                &table,
                &ladder,
                &pred,
                epsilon,
                seed,
                count,
                ctx.opts.density,
                ctx.workers,
            )?;
            ctx.emit(
                &r,
                || {
                    csv_rows(
                        &["n", "fraction", "ratio_mean"],
                        r.points.iter().map(|p| {
                            vec![
                                p.n.to_string(),
                                crate::numeric::round_sig(p.fraction, 12).to_string(),
                                crate::numeric::round_sig(p.ratio_mean, 12).to_string(),
                            ]
                        }),
                    )
                },
                || {
                    r.points
                        .iter()
                        .map(|p| format!("n = {}: {:.4}\n", p.n, p.fraction))
                        .collect()
                },
            )
        }
        Command::Oracle => {
            let spec = ctx.spec()?;
            let n = ctx.n()?;
            let table = generate_sequence(&spec, n + 1);
            let r = bijection_oracle(&table, n, ctx.budget)?;
            ctx.emit(
                &r,
                || {
                    csv_rows(
                        &["n", "string_count", "bound", "bijective"],
                        [vec![
                            n.to_string(),
                            r.string_count.to_string(),
                            r.bound.clone(),
                            r.bijective.to_string(),
                        ]],
                    )
                },
                || format!("bijective: {}\n", r.bijective),
            )
        }
    }
}

/// Lets one emit path serialize either a single report or a list.
mod erased {
    use serde::Serialize;

    pub trait Out {
        fn to_value(&self) -> serde_json::Value;
    }

    impl<T: Serialize> Out for T {
        fn to_value(&self) -> serde_json::Value {
            serde_json::to_value(self).expect("serializable")
        }
    }

    pub struct Wrap<'a>(pub &'a dyn Out);

    impl Serialize for Wrap<'_> {
        fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            self.0.to_value().serialize(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["zeck"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = call(&["decompose", "12"]);
        assert_eq!(code, 2);
        assert!(err.contains("--coeffs"));
        let (code, _, _) = call(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, err) = call(&[
            "concentration",
            "--coeffs",
            "1,1",
            "--n",
            "50",
            "--samples",
            "10",
            "--epsilon",
            "0.1",
        ]);
        assert_eq!(code, 2);
        assert!(err.contains("--seed"));
    }

    #[test]
    fn domain_errors_exit_one() {
        let (code, _, err) = call(&["sequence", "--coeffs", "0,1", "--n", "5"]);
        assert_eq!(code, 1);
        assert!(err.contains("ZeroLeadCoeff"));
        let (code, _, err) = call(&["decompose", "2", "--coeffs", "1,2,3", "--initial", "1,3,8"]);
        assert_eq!(code, 1);
        assert!(err.contains("Unrepresentable"));
    }

    #[test]
    fn pretty_check() {
        let (code, out, _) = call(&[
            "check",
            "1,2,2,1,0,0,1,1",
            "--coeffs",
            "1,2,3",
            "--mode",
            "super-legal",
            "--format",
            "pretty",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out, "true\n");
    }
}
