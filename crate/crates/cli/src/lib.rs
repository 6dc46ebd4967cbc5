//! Library half of the `solab` binary: configuration, report assembly, and
//! output formatting, split out so integration tests can drive runs without
//! spawning processes.
//!
//! Every run is described by a [`RunConfig`]; [`run`] dispatches it and
//! returns a [`RunOutput`] whose report body depends only on the config
//! fields that name the computation (never on worker count or wall time), so
//! replaying a saved config reproduces the body byte for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use num_traits::{Signed, ToPrimitive};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use solab_core::enumerate::{class_representative, integer_partitions};
use solab_core::insolubility::EtaReport;
use solab_core::textnum::{parse_rational, rational_string};
use solab_core::{
    b_empirical, ccent_check, construction_chain, crucial_bound_check, eta_exact, facile_count,
    fact1_check, fact2_check, factorial_identity_check, fpagl_check, iota_count,
    kappa_closed_form, kappa_count, lambda_rate_exact, lambda_rate_montecarlo,
    nontransitivity_exact, nontransitivity_rate, pins_exact, pins_montecarlo, prime_powers_up_to,
    solubilizer_set, totient_ratio_count, two_coset_generation_check, wreath_pins_montecarlo,
    BigRational, CacheMode, CcentOutcome, CosetParity, CosetSpec, GroupHandle, NormalChain,
    Permutation, WreathElement,
};
use solab_core::constructions::{alternating, construction, symmetric};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Preset scaling for exhaustive work: degree caps and coset ceilings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Smoke,
    #[default]
    Desk,
    Deep,
}

impl Level {
    pub fn degree_cap(self) -> usize {
        match self {
            Level::Smoke => 6,
            Level::Desk => 8,
            Level::Deep => 9,
        }
    }

    pub fn coset_ceiling(self) -> u64 {
        match self {
            Level::Smoke => 1_000,
            Level::Desk => 100_000,
            Level::Deep => 500_000,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Smoke => "smoke",
            Level::Desk => "desk",
            Level::Deep => "deep",
        })
    }
}

impl FromStr for Level {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smoke" => Ok(Level::Smoke),
            "desk" => Ok(Level::Desk),
            "deep" => Ok(Level::Deep),
            other => bail!("unknown level `{other}`; choose smoke, desk or deep"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Pretty,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
            OutputFormat::Pretty => "pretty",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "pretty" => Ok(OutputFormat::Pretty),
            other => bail!("unknown output format `{other}`; choose json, csv or pretty"),
        }
    }
}

/// A fully resolved run: the command name, its textual parameters, and the
/// global knobs. Serializable both as JSON and as the `key = value` config
/// file format that `solab run --config` reads back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub seed: u64,
    pub output: OutputFormat,
    pub level: Level,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.to_string(),
            params: BTreeMap::new(),
            seed: DEFAULT_SEED,
            output: OutputFormat::default(),
            level: Level::default(),
            workers: None,
        }
    }

    pub fn with(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    /// Renders the config in the `key = value` file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command = {}\n", self.command));
        out.push_str(&format!("level = {}\n", self.level));
        out.push_str(&format!("output = {}\n", self.output));
        out.push_str(&format!("seed = {}\n", self.seed));
        if let Some(w) = self.workers {
            out.push_str(&format!("workers = {w}\n"));
        }
        for (key, value) in &self.params {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }

    /// Parses the `key = value` file format: one pair per line, `#` starts a
    /// comment, blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut command = None;
        let mut config = RunConfig::new("");
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow!("line {}: expected `key = value`, got `{raw}`", number + 1)
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "command" => command = Some(value.to_string()),
                "level" => config.level = value.parse()?,
                "output" => config.output = value.parse()?,
                "seed" => {
                    config.seed = value
                        .parse()
                        .with_context(|| format!("line {}: bad seed `{value}`", number + 1))?
                }
                "workers" => {
                    config.workers = Some(value.parse().with_context(|| {
                        format!("line {}: bad worker count `{value}`", number + 1)
                    })?)
                }
                _ => {
                    config.params.insert(key.to_string(), value.to_string());
                }
            }
        }
        config.command =
            command.ok_or_else(|| anyhow!("the config file never sets `command`"))?;
        Ok(config)
    }

    fn param(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn require(&self, key: &str, remedy: &str) -> Result<&str> {
        self.param(key)
            .ok_or_else(|| anyhow!("missing parameter `{key}`; {remedy}"))
    }

    fn parse<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        match self.param(key) {
            None => Ok(None),
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("parameter `{key}` = `{text}` is invalid: {e}")),
        }
    }

    fn parse_or<T>(&self, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    fn flag(&self, key: &str) -> bool {
        matches!(self.param(key), Some("true") | Some("1") | Some("yes"))
    }

    fn samples(&self) -> Result<u64> {
        self.parse_or("samples", DEFAULT_SAMPLES)
    }

    fn confidence(&self) -> Result<f64> {
        self.parse_or("confidence", DEFAULT_CONFIDENCE)
    }

    /// Exhaustive-scan ceiling: explicit `ceiling` beats the level preset.
    fn ceiling(&self) -> Result<u64> {
        self.parse_or("ceiling", self.level.coset_ceiling())
    }

    /// Preset-clamped default: an explicit value wins outright, otherwise
    /// the built-in default is clamped to the level's degree cap.
    fn clamped(&self, key: &str, default: usize) -> Result<usize> {
        Ok(match self.parse::<usize>(key)? {
            Some(explicit) => explicit,
            None => default.min(self.level.degree_cap()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub config: RunConfig,
    /// Unix seconds at dispatch; excluded from replay comparison.
    pub timestamp: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub provenance: Provenance,
    pub body: Value,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let render = |fields: &[String]| {
            fields
                .iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&render(&self.header));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&render(row));
            out.push('\n');
        }
        out
    }
}

struct CommandOutcome {
    body: Value,
    csv: CsvTable,
    passed: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: Report,
    pub csv: CsvTable,
    pub passed: bool,
    pub format: OutputFormat,
}

/// Dispatches a resolved config on the requested worker pool and assembles
/// the provenance-wrapped report.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let started = Instant::now();
    let outcome = match config.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .context("building the worker pool")?;
            pool.install(|| dispatch(config))?
        }
        None => dispatch(config)?,
    };
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(RunOutput {
        report: Report {
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION").to_string(),
                config: config.clone(),
                timestamp,
                wall_ms: started.elapsed().as_millis() as u64,
            },
            body: outcome.body,
        },
        csv: outcome.csv,
        passed: outcome.passed,
        format: config.output,
    })
}

/// Renders a finished run in its configured output format.
pub fn render(out: &RunOutput) -> Result<String> {
    Ok(match out.format {
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&out.report)?;
            text.push('\n');
            text
        }
        OutputFormat::Csv => out.csv.to_text(),
        OutputFormat::Pretty => render_pretty(out),
    })
}

fn render_pretty(out: &RunOutput) -> String {
    let config = &out.report.provenance.config;
    let mut text = format!(
        "solab {}  [level {}, seed {}]\n",
        config.command, config.level, config.seed
    );
    if let Value::Object(fields) = &out.report.body {
        for (key, value) in fields {
            pretty_value(&mut text, key, value, 1);
        }
    }
    text.push_str(if out.passed { "status: PASS\n" } else { "status: FAIL\n" });
    text
}

fn pretty_value(out: &mut String, key: &str, value: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(fields) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in fields {
                pretty_value(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                pretty_value(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}

fn dispatch(config: &RunConfig) -> Result<CommandOutcome> {
    match config.command.as_str() {
        "pins" => cmd_pins(config),
        "eta" => cmd_eta(config),
        "wreath" => cmd_wreath(config),
        "verify" => cmd_verify(config),
        "lambda-rate" => cmd_lambda_rate(config),
        "nontrans" => cmd_nontrans(config),
        "totient-count" => cmd_totient_count(config),
        "bt" => cmd_bt(config),
        "fpagl" => cmd_fpagl(config),
        "solubilizer" => cmd_solubilizer(config),
        "crucial" => cmd_crucial(config),
        "run" => bail!("`run` resolves a saved config file; load it first and dispatch the inner command"),
        other => bail!("unknown command `{other}`; see `solab --help` for the list"),
    }
}

fn rational_decimal(r: &BigRational) -> String {
    format!("{:.6}", r.to_f64().unwrap_or(f64::NAN))
}

fn class_text(parts: &[usize]) -> String {
    parts
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("+")
}

fn check_degree(config: &RunConfig, n: usize) -> Result<()> {
    let cap = config.level.degree_cap();
    if n > cap {
        bail!(
            "degree {n} exceeds the {} cap {cap}; raise --level or lower --n",
            config.level
        );
    }
    Ok(())
}

fn parse_coset(text: &str) -> Result<CosetParity> {
    match text {
        "even" => Ok(CosetParity::Even),
        "odd" => Ok(CosetParity::Odd),
        other => bail!("unknown coset `{other}`; choose even or odd"),
    }
}

fn coset_text(parity: CosetParity) -> &'static str {
    match parity {
        CosetParity::Even => "even",
        CosetParity::Odd => "odd",
    }
}

fn parse_degree_range(text: &str) -> Result<Vec<usize>> {
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (text, text),
    };
    let lo: usize = lo
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad degree range `{text}`; write 5, 5..7 or 5..=7"))?;
    let hi: usize = hi
        .trim()
        .parse()
        .map_err(|_| anyhow!("bad degree range `{text}`; write 5, 5..7 or 5..=7"))?;
    if lo > hi {
        bail!("empty degree range `{text}`");
    }
    Ok((lo..=hi).collect())
}

fn insolubility_csv(table: &mut CsvTable, label: &str, report: &solab_core::InsolubilityReport) {
    let (p_decimal, p_exact, ci_low, ci_high) = match (&report.p_ins).as_exact() {
        Some(r) => (rational_decimal(r), rational_string(r), String::new(), String::new()),
        None => {
            let e = report.p_ins.as_estimate().expect("estimate when not exact");
            (
                format!("{:.6}", e.estimate),
                String::new(),
                format!("{:.6}", e.ci_low),
                format!("{:.6}", e.ci_high),
            )
        }
    };
    table.push(vec![
        label.to_string(),
        p_decimal,
        p_exact,
        ci_low,
        ci_high,
        report
            .q_value
            .as_ref()
            .and_then(|q| q.as_exact())
            .map(|r| rational_string(r))
            .unwrap_or_default(),
        report.count_insoluble.map(|c| c.to_string()).unwrap_or_default(),
        report.coset_size.map(|c| c.to_string()).unwrap_or_default(),
        report.samples.map(|s| s.to_string()).unwrap_or_default(),
        report.seed.map(|s| s.to_string()).unwrap_or_default(),
    ]);
}

const INSOLUBILITY_HEADER: [&str; 10] = [
    "case", "p_ins", "p_ins_exact", "ci_low", "ci_high", "q_exact", "count_insoluble",
    "coset_size", "samples", "seed",
];

fn cmd_pins(config: &RunConfig) -> Result<CommandOutcome> {
    let n: usize = config
        .require("n", "pass --n <degree>")?
        .parse()
        .context("parameter `n` must be a degree")?;
    check_degree(config, n)?;
    let a_text = config.require("a", "pass --a \"(1 2)(3 4)\"")?;
    let a = Permutation::parse_cycles(a_text, n)?;
    let parity = parse_coset(config.parse_or("coset", "even".to_string())?.as_str())?;
    let coset = CosetSpec::alternating_coset(n, parity)?;
    let report = if config.flag("exact") {
        pins_exact(&a, &coset, config.ceiling()?)?
    } else {
        pins_montecarlo(&a, &coset, config.samples()?, config.seed, config.confidence()?)?
    };
    let mut csv = CsvTable::new(&INSOLUBILITY_HEADER);
    insolubility_csv(
        &mut csv,
        &format!("n={n} a={a} coset={}", coset_text(parity)),
        &report,
    );
    Ok(CommandOutcome {
        body: json!({
            "command": "pins",
            "n": n,
            "a": a.to_string(),
            "coset": coset_text(parity),
            "report": report,
            "passed": true,
        }),
        csv,
        passed: true,
    })
}

fn eta_csv_rows(table: &mut CsvTable, report: &EtaReport) {
    for row in &report.rows {
        let exact = row
            .report
            .p_ins
            .as_exact()
            .map(|r| rational_string(r))
            .unwrap_or_default();
        table.push(vec![
            report.n.to_string(),
            class_text(&row.class),
            coset_text(row.coset).to_string(),
            exact,
            row.report
                .count_insoluble
                .map(|c| c.to_string())
                .unwrap_or_default(),
            row.report
                .coset_size
                .map(|c| c.to_string())
                .unwrap_or_default(),
            report
                .witnesses
                .iter()
                .any(|(class, coset)| *class == row.class && *coset == row.coset)
                .to_string(),
        ]);
    }
}

fn cmd_eta(config: &RunConfig) -> Result<CommandOutcome> {
    let degrees = parse_degree_range(config.require("n", "pass --n 5 or --n 5..7")?)?;
    for &n in &degrees {
        check_degree(config, n)?;
    }
    let ceiling = config.ceiling()?;
    let mut reports = Vec::new();
    let mut csv = CsvTable::new(&[
        "n", "class", "coset", "p_ins_exact", "count_insoluble", "coset_size", "is_minimum",
    ]);
    let mut passed = true;
    for &n in &degrees {
        let report = eta_exact(n, ceiling)?;
        passed &= report.eta.is_positive();
        eta_csv_rows(&mut csv, &report);
        reports.push(report);
    }
    Ok(CommandOutcome {
        body: json!({
            "command": "eta",
            "degrees": degrees,
            "reports": reports,
            "passed": passed,
        }),
        csv,
        passed,
    })
}

fn block_cycle(m: usize) -> Permutation {
    Permutation::from_images((0..m).map(|i| (i + 1) % m).collect()).expect("a valid cycle")
}

fn cmd_wreath(config: &RunConfig) -> Result<CommandOutcome> {
    let name = config.require("s", "pass --s alt5")?;
    let base = construction(name)?;
    let m: usize = config
        .require("m", "pass --m <blocks>")?
        .parse()
        .context("parameter `m` must be a block count")?;
    if m == 0 {
        bail!("parameter `m` must be positive");
    }
    let d = base.group.degree();
    let a_top = match config.param("a-top") {
        Some(text) => Permutation::parse_cycles(text, m)?,
        None => block_cycle(m),
    };
    let b_top = match config.param("b-top") {
        Some(text) => Permutation::parse_cycles(text, m)?,
        None => Permutation::identity(m),
    };
    let a = WreathElement::new(vec![Permutation::identity(d); m], a_top.clone())?;
    let b = WreathElement::new(vec![Permutation::identity(d); m], b_top.clone())?;
    let report = wreath_pins_montecarlo(
        &a,
        &b,
        &base.group,
        config.samples()?,
        config.seed,
        config.confidence()?,
    )?;
    let mut csv = CsvTable::new(&INSOLUBILITY_HEADER);
    insolubility_csv(&mut csv, &format!("s={} m={m} a_top={a_top}", base.name), &report);
    Ok(CommandOutcome {
        body: json!({
            "command": "wreath",
            "s": base.name,
            "m": m,
            "a_top": a_top.to_string(),
            "b_top": b_top.to_string(),
            "report": report,
            "passed": true,
        }),
        csv,
        passed: true,
    })
}

#[derive(Debug, Clone, Serialize)]
struct CheckRow {
    check: String,
    parameter: String,
    observed: String,
    expected: String,
    pass: bool,
}

impl CheckRow {
    fn new(check: &str, parameter: String, observed: String, expected: String, pass: bool) -> Self {
        CheckRow {
            check: check.to_string(),
            parameter,
            observed,
            expected,
            pass,
        }
    }
}

fn verify_factorial(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let n_max: u64 = config.parse_or("n-max", 30)?;
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let mut failed = Vec::new();
        for a in 0..n {
            let identity = factorial_identity_check(n, a)?;
            if !identity.equal {
                failed.push(a);
            }
        }
        rows.push(CheckRow::new(
            "factorial-identity",
            format!("n={n} a=0..{n}"),
            if failed.is_empty() {
                "equal for every a".to_string()
            } else {
                format!("unequal at a in {failed:?}")
            },
            "lhs = rhs".to_string(),
            failed.is_empty(),
        ));
    }
    Ok(rows)
}

fn verify_iota(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let omega_max = config.clamped("omega-max", 8)?;
    let mut rows = Vec::new();
    for omega in 1..=omega_max {
        for a_size in 1..=omega {
            let count = iota_count(omega, a_size)?;
            let closed: u64 = (1..omega as u64).product::<u64>() * a_size as u64;
            let split_applies = omega - a_size >= 2;
            let split_ok = !split_applies || count.even == count.odd;
            let pass = count.total == closed && split_ok;
            rows.push(CheckRow::new(
                "iota",
                format!("omega={omega} a={a_size}"),
                format!("total={} even={} odd={}", count.total, count.even, count.odd),
                if split_applies {
                    format!("total={closed}, even=odd")
                } else {
                    format!("total={closed}")
                },
                pass,
            ));
        }
    }
    Ok(rows)
}

fn verify_kappa(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let omega_max = config.clamped("omega-max", 7)?;
    let mut rows = Vec::new();
    for omega_size in 1..=omega_max {
        let omega: Vec<usize> = (0..omega_size).collect();
        let mut checked = 0u64;
        let mut failed = Vec::new();
        for a_bits in 1u32..(1 << omega_size) {
            for b_bits in 1u32..=a_bits {
                if b_bits & !a_bits != 0 {
                    continue;
                }
                let a: Vec<usize> = omega.iter().copied().filter(|&i| a_bits >> i & 1 == 1).collect();
                let b: Vec<usize> = omega.iter().copied().filter(|&i| b_bits >> i & 1 == 1).collect();
                let exact = kappa_count(&omega, &a, &b)?;
                let closed = kappa_closed_form(omega_size, a.len(), b.len())?;
                checked += 1;
                if exact != closed {
                    failed.push(format!("|A|={} |B|={} exact={exact} closed={closed}", a.len(), b.len()));
                }
            }
        }
        rows.push(CheckRow::new(
            "kappa",
            format!("omega={omega_size} pairs={checked}"),
            if failed.is_empty() {
                "exact = closed form for every nested pair".to_string()
            } else {
                failed.join("; ")
            },
            "exact = closed form".to_string(),
            failed.is_empty(),
        ));
    }
    Ok(rows)
}

fn verify_facile(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let n_max = config.clamped("n-max", 9)?;
    let mut rows = Vec::new();
    for n in 2..=n_max {
        for k in (n + 1) / 2..=n {
            let count = facile_count(n, k)?;
            rows.push(CheckRow::new(
                "facile",
                format!("n={n} k={k}"),
                format!(
                    "exact={} closed={} bound={}",
                    count.exact,
                    count.closed_form,
                    rational_string(&count.bound)
                ),
                "exact = closed form and exact >= bound".to_string(),
                count.matches_closed_form && count.respects_bound,
            ));
        }
    }
    Ok(rows)
}

fn verify_fact1(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let omega_max = config.clamped("omega-max", 7)?;
    let mut rows = Vec::new();
    for omega in 1..=omega_max {
        let mut checked = 0u64;
        let mut pass = true;
        for r_bits in 1u32..(1 << omega) {
            let r: Vec<usize> = (0..omega).filter(|&i| r_bits >> i & 1 == 1).collect();
            pass &= fact1_check(omega, &r)?;
            checked += 1;
        }
        rows.push(CheckRow::new(
            "fact1",
            format!("omega={omega} subsets={checked}"),
            if pass { "uniform fibers".to_string() } else { "non-uniform fiber found".to_string() },
            "every projection fiber has size omega!/|r|!".to_string(),
            pass,
        ));
    }
    Ok(rows)
}

fn random_subset_permutation(degree: usize, r: &[usize], rng: &mut ChaCha12Rng) -> Permutation {
    let mut targets = r.to_vec();
    for i in (1..targets.len()).rev() {
        let j = rng.gen_range(0..=i);
        targets.swap(i, j);
    }
    let mut images: Vec<usize> = (0..degree).collect();
    for (&point, &target) in r.iter().zip(&targets) {
        images[point] = target;
    }
    Permutation::from_images(images).expect("a bijection")
}

fn verify_fact2(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let degree = config.clamped("degree", 7)?;
    let instances: u64 = config.parse_or("instances", 200)?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let all: Vec<usize> = (0..degree).collect();
    let mut failures = 0u64;
    for _ in 0..instances {
        let mut r: Vec<usize> = (0..degree).filter(|_| rng.gen_bool(0.5)).collect();
        if r.is_empty() {
            r.push(rng.gen_range(0..degree));
        }
        let gen_count = rng.gen_range(1..=2);
        let gens: Vec<Permutation> = (0..gen_count)
            .map(|_| random_subset_permutation(degree, &r, &mut rng))
            .collect();
        let sigma = random_subset_permutation(degree, &all, &mut rng);
        if !fact2_check(&gens, &sigma, &r)? {
            failures += 1;
        }
    }
    Ok(vec![CheckRow::new(
        "fact2",
        format!("degree={degree} instances={instances} seed={}", config.seed),
        format!("{failures} orbit-partition mismatches"),
        "projected orbits match restricted global orbits".to_string(),
        failures == 0,
    )])
}

fn verify_two_coset(config: &RunConfig) -> Result<Vec<CheckRow>> {
    let n: usize = config.parse_or("n", 5)?;
    let threshold = BigRational::new(53.into(), 90.into());
    let classes = integer_partitions(n);
    let mut rows = Vec::new();
    for p1 in &classes {
        let x1 = class_representative(p1)?;
        for p2 in &classes {
            let x2 = class_representative(p2)?;
            let report = two_coset_generation_check(&x1, &x2, n)?;
            rows.push(CheckRow::new(
                "two-coset",
                format!("n={n} x1={} x2={}", class_text(p1), class_text(p2)),
                rational_string(&report.probability),
                ">= 53/90".to_string(),
                report.probability >= threshold,
            ));
        }
    }
    Ok(rows)
}

fn verify_ccent(_config: &RunConfig) -> Result<Vec<CheckRow>> {
    let sym4 = symmetric(4)?;
    let v4 = GroupHandle::new(vec![
        Permutation::parse_cycles("(1 2)(3 4)", 4)?,
        Permutation::parse_cycles("(1 3)(2 4)", 4)?,
    ])?;
    let soluble_chain = NormalChain::new(
        sym4.clone(),
        vec![sym4, alternating(4)?, v4, GroupHandle::trivial(4)],
    )?;
    let accept = ccent_check(
        &soluble_chain,
        &Permutation::parse_cycles("(1 2)", 4)?,
        &Permutation::parse_cycles("(1 2 3 4)", 4)?,
    )?;
    let alt5 = alternating(5)?;
    let perfect_chain = NormalChain::new(alt5.clone(), vec![alt5, GroupHandle::trivial(5)])?;
    let reject = ccent_check(
        &perfect_chain,
        &Permutation::parse_cycles("(1 2 3 4 5)", 5)?,
        &Permutation::parse_cycles("(3 4 5)", 5)?,
    )?;
    Ok(vec![
        CheckRow::new(
            "ccent",
            "chain sym4 > alt4 > v4 > 1, x=(1 2), y=(1 2 3 4)".to_string(),
            format!("{accept:?}"),
            "HypothesisHoldsAndSoluble".to_string(),
            accept == CcentOutcome::HypothesisHoldsAndSoluble,
        ),
        CheckRow::new(
            "ccent",
            "chain alt5 > 1, x=(1 2 3 4 5), y=(3 4 5)".to_string(),
            format!("{reject:?}"),
            "HypothesisFails { step: 0 }".to_string(),
            reject == (CcentOutcome::HypothesisFails { step: 0 }),
        ),
    ])
}

const VERIFY_SUITES: [&str; 8] = [
    "factorial-identity",
    "iota",
    "kappa",
    "facile",
    "fact1",
    "fact2",
    "two-coset",
    "ccent",
];

fn verify_rows(which: &str, config: &RunConfig) -> Result<Vec<CheckRow>> {
    match which {
        "factorial-identity" => verify_factorial(config),
        "iota" => verify_iota(config),
        "kappa" => verify_kappa(config),
        "facile" => verify_facile(config),
        "fact1" => verify_fact1(config),
        "fact2" => verify_fact2(config),
        "two-coset" => verify_two_coset(config),
        "ccent" => verify_ccent(config),
        "all" => {
            let mut rows = Vec::new();
            for suite in VERIFY_SUITES {
                rows.extend(verify_rows(suite, config)?);
            }
            Ok(rows)
        }
        other => bail!(
            "unknown verification suite `{other}`; choose one of {VERIFY_SUITES:?} or all"
        ),
    }
}

fn cmd_verify(config: &RunConfig) -> Result<CommandOutcome> {
    let which = config.require(
        "which",
        "pass a suite name such as `solab verify factorial-identity`",
    )?;
    let rows = verify_rows(which, config)?;
    let failures: Vec<String> = rows
        .iter()
        .filter(|row| !row.pass)
        .map(|row| format!("{}: {}", row.check, row.parameter))
        .collect();
    let passed = failures.is_empty();
    let mut csv = CsvTable::new(&["check", "parameter", "observed", "expected", "pass"]);
    for row in &rows {
        csv.push(vec![
            row.check.clone(),
            row.parameter.clone(),
            row.observed.clone(),
            row.expected.clone(),
            row.pass.to_string(),
        ]);
    }
    Ok(CommandOutcome {
        body: json!({
            "command": "verify",
            "which": which,
            "total": rows.len(),
            "failed": failures.len(),
            "failures": failures,
            "checks": rows,
            "passed": passed,
        }),
        csv,
        passed,
    })
}

fn cmd_lambda_rate(config: &RunConfig) -> Result<CommandOutcome> {
    let n: usize = config
        .require("n", "pass --n <degree>")?
        .parse()
        .context("parameter `n` must be a degree")?;
    let delta1: f64 = config.parse_or("delta1", 0.6)?;
    let delta2: f64 = config.parse_or("delta2", 0.3)?;
    let mut csv = CsvTable::new(&[
        "n", "delta1", "delta2", "mode", "value", "ci_low", "ci_high", "samples", "seed",
    ]);
    let body;
    if config.flag("exact") {
        check_degree(config, n)?;
        let rate = lambda_rate_exact(n, delta1, delta2)?;
        csv.push(vec![
            n.to_string(),
            delta1.to_string(),
            delta2.to_string(),
            "exact".to_string(),
            rational_string(&rate),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
        body = json!({
            "command": "lambda-rate",
            "n": n,
            "delta1": delta1,
            "delta2": delta2,
            "mode": "exact",
            "rate": rational_string(&rate),
            "rate_decimal": rate.to_f64().unwrap_or(f64::NAN),
            "passed": true,
        });
    } else {
        let samples = config.samples()?;
        let estimate = lambda_rate_montecarlo(n, delta1, delta2, samples, config.seed, config.confidence()?)?;
        csv.push(vec![
            n.to_string(),
            delta1.to_string(),
            delta2.to_string(),
            "montecarlo".to_string(),
            format!("{:.6}", estimate.estimate),
            format!("{:.6}", estimate.ci_low),
            format!("{:.6}", estimate.ci_high),
            samples.to_string(),
            config.seed.to_string(),
        ]);
        body = json!({
            "command": "lambda-rate",
            "n": n,
            "delta1": delta1,
            "delta2": delta2,
            "mode": "montecarlo",
            "estimate": estimate,
            "passed": true,
        });
    }
    Ok(CommandOutcome {
        body,
        csv,
        passed: true,
    })
}

fn cmd_nontrans(config: &RunConfig) -> Result<CommandOutcome> {
    let n: usize = config
        .require("n", "pass --n <degree>")?
        .parse()
        .context("parameter `n` must be a degree")?;
    let gens_text = config.parse_or("gens", "(1 2)".to_string())?;
    let gens: Vec<Permutation> = gens_text
        .split(';')
        .map(|chunk| Permutation::parse_cycles(chunk.trim(), n))
        .collect::<solab_core::Result<_>>()?;
    let rho = match config.param("rho") {
        Some(text) => Permutation::parse_cycles(text, n)?,
        None => Permutation::identity(n),
    };
    let fixed = (0..n).filter(|&p| gens.iter().all(|g| g.image(p) == p)).count();
    if fixed == n {
        bail!("the generators fix every point; pass at least one nonidentity generator");
    }
    let moved = n - fixed;
    let bound = fixed as f64 / n as f64 + 2.0 / moved as f64;
    let tolerance = 3.0 / moved as f64;
    let mut csv = CsvTable::new(&[
        "n", "gens", "fixed", "mode", "value", "bound", "tolerance", "pass", "samples", "seed",
    ]);
    let (value, mode, estimate_json) = if config.flag("exact") {
        let rate = nontransitivity_exact(&gens, &rho)?;
        (
            rate.to_f64().unwrap_or(f64::NAN),
            "exact",
            json!(rational_string(&rate)),
        )
    } else {
        let estimate = nontransitivity_rate(&gens, &rho, config.samples()?, config.seed, config.confidence()?)?;
        (estimate.estimate, "montecarlo", json!(estimate))
    };
    let pass = value <= bound + tolerance;
    csv.push(vec![
        n.to_string(),
        gens_text.clone(),
        fixed.to_string(),
        mode.to_string(),
        format!("{value:.6}"),
        format!("{bound:.6}"),
        format!("{tolerance:.6}"),
        pass.to_string(),
        if mode == "exact" { String::new() } else { config.samples()?.to_string() },
        if mode == "exact" { String::new() } else { config.seed.to_string() },
    ]);
    Ok(CommandOutcome {
        body: json!({
            "command": "nontrans",
            "n": n,
            "gens": gens_text,
            "rho": rho.to_string(),
            "fixed_points": fixed,
            "mode": mode,
            "value": estimate_json,
            "value_decimal": value,
            "bound": bound,
            "tolerance": tolerance,
            "passed": pass,
        }),
        csv,
        passed: pass,
    })
}

fn cmd_totient_count(config: &RunConfig) -> Result<CommandOutcome> {
    let n: u64 = config
        .require("n", "pass --n <limit>")?
        .parse()
        .context("parameter `n` must be a limit")?;
    let delta1: f64 = config.parse_or("delta1", 0.5)?;
    let delta2: f64 = config.parse_or("delta2", 0.3)?;
    let count = totient_ratio_count(n, delta1, delta2)?;
    let ratio = count as f64 / n as f64;
    let mut csv = CsvTable::new(&["n", "delta1", "delta2", "count", "ratio"]);
    csv.push(vec![
        n.to_string(),
        delta1.to_string(),
        delta2.to_string(),
        count.to_string(),
        format!("{ratio:.6}"),
    ]);
    Ok(CommandOutcome {
        body: json!({
            "command": "totient-count",
            "n": n,
            "delta1": delta1,
            "delta2": delta2,
            "count": count,
            "ratio": ratio,
            "passed": true,
        }),
        csv,
        passed: true,
    })
}

fn cmd_bt(config: &RunConfig) -> Result<CommandOutcome> {
    let t_text = config.require("t", "pass --t 1.1 or --t 1.0,1.5,2.0")?;
    let ts: Vec<f64> = t_text
        .split(',')
        .map(|chunk| {
            chunk
                .trim()
                .parse()
                .map_err(|_| anyhow!("bad threshold `{chunk}` in --t"))
        })
        .collect::<Result<_>>()?;
    let limit: usize = config.parse_or("limit", 1_000_000)?;
    let mut csv = CsvTable::new(&["t", "limit", "fraction", "decimal"]);
    let mut rows = Vec::new();
    for &t in &ts {
        let fraction = b_empirical(t, limit)?;
        csv.push(vec![
            t.to_string(),
            limit.to_string(),
            rational_string(&fraction),
            rational_decimal(&fraction),
        ]);
        rows.push(json!({
            "t": t,
            "fraction": rational_string(&fraction),
            "decimal": fraction.to_f64().unwrap_or(f64::NAN),
        }));
    }
    Ok(CommandOutcome {
        body: json!({
            "command": "bt",
            "limit": limit,
            "rows": rows,
            "passed": true,
        }),
        csv,
        passed: true,
    })
}

fn cmd_fpagl(config: &RunConfig) -> Result<CommandOutcome> {
    let q_max: u64 = config.parse_or("q-max", 81)?;
    let mut csv = CsvTable::new(&["q", "max_fix", "sqrt_q", "pass", "affine_max_fix", "affine_pass"]);
    let mut reports = Vec::new();
    let mut passed = true;
    for q in prime_powers_up_to(q_max) {
        let report = fpagl_check(q)?;
        passed &= report.pass && report.affine_pass;
        csv.push(vec![
            q.to_string(),
            report.max_fix.to_string(),
            format!("{:.6}", (q as f64).sqrt()),
            report.pass.to_string(),
            report.affine_max_fix.to_string(),
            report.affine_pass.to_string(),
        ]);
        reports.push(report);
    }
    Ok(CommandOutcome {
        body: json!({
            "command": "fpagl",
            "q_max": q_max,
            "reports": reports,
            "passed": passed,
        }),
        csv,
        passed,
    })
}

fn resolve_element(text: &str, c: &solab_core::constructions::NamedConstruction) -> Result<Permutation> {
    if text == "swap" {
        c.outer.clone().ok_or_else(|| {
            anyhow!(
                "construction `{}` has no canonical outer element; pass --g as cycle text",
                c.name
            )
        })
    } else {
        Ok(Permutation::parse_cycles(text, c.group.degree())?)
    }
}

fn parse_cache(text: &str) -> Result<CacheMode> {
    match text {
        "off" => Ok(CacheMode::Off),
        "advisory" => Ok(CacheMode::Advisory),
        other => bail!("unknown cache mode `{other}`; choose off or advisory"),
    }
}

fn cmd_solubilizer(config: &RunConfig) -> Result<CommandOutcome> {
    let name = config.require("group", "pass --group alt5")?;
    let c = construction(name)?;
    let g = resolve_element(config.require("g", "pass --g \"(1 2 3 4 5)\" or --g swap")?, &c)?;
    let cache = parse_cache(config.parse_or("cache", "off".to_string())?.as_str())?;
    let report = solubilizer_set(&c.group, &g, config.ceiling()?, cache)?;
    let mut csv = CsvTable::new(&["group", "g", "group_order", "solubilizer_size", "ratio"]);
    csv.push(vec![
        c.name.clone(),
        g.to_string(),
        report.group_order.to_string(),
        report.solubilizer_size.to_string(),
        rational_string(&report.ratio),
    ]);
    Ok(CommandOutcome {
        body: json!({
            "command": "solubilizer",
            "group": c.name,
            "g": g.to_string(),
            "cache": format!("{cache:?}").to_lowercase(),
            "report": report,
            "passed": true,
        }),
        csv,
        passed: true,
    })
}

fn resolve_eta(text: &str, ceiling: u64) -> Result<BigRational> {
    if let Some(rest) = text.strip_prefix("from-eta-exact:") {
        let n: usize = rest
            .parse()
            .map_err(|_| anyhow!("bad degree in `{text}`; write from-eta-exact:5"))?;
        Ok(eta_exact(n, ceiling)?.eta)
    } else {
        parse_rational(text).map_err(|e| anyhow!("bad eta `{text}`: {e}; write 2/5 or from-eta-exact:5"))
    }
}

fn cmd_crucial(config: &RunConfig) -> Result<CommandOutcome> {
    let name = config.require("construction", "pass --construction alt5 or alt5^2:swap")?;
    let c = construction(name)?;
    let g = resolve_element(config.require("g", "pass --g swap or cycle text")?, &c)?;
    let ceiling = config.ceiling()?;
    let eta = resolve_eta(
        config.require("eta", "pass --eta 2/5 or --eta from-eta-exact:5")?,
        ceiling,
    )?;
    let chain = construction_chain(&c)?;
    let report = crucial_bound_check(&c.group, &g, &chain, &eta, ceiling)?;
    let mut csv = CsvTable::new(&[
        "construction", "g", "t", "eta", "eta_tilde", "bound", "ratio", "holds",
    ]);
    csv.push(vec![
        c.name.clone(),
        g.to_string(),
        report.t.to_string(),
        rational_string(&report.eta),
        rational_string(&report.eta_tilde),
        rational_string(&report.bound),
        rational_string(&report.solubilizer.ratio),
        report.holds.to_string(),
    ]);
    let passed = report.holds;
    Ok(CommandOutcome {
        body: json!({
            "command": "crucial",
            "construction": c.name,
            "g": g.to_string(),
            "report": report,
            "passed": passed,
        }),
        csv,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_round_trip() {
        let config = RunConfig::new("pins")
            .with("n", 5)
            .with("a", "(1 2)(3 4)")
            .with("coset", "even")
            .with("exact", true);
        let text = config.to_text();
        let back = RunConfig::from_text(&text).unwrap();
        assert_eq!(config, back);
        let with_comment = format!("# saved run\n{text}\n");
        assert_eq!(RunConfig::from_text(&with_comment).unwrap(), config);
    }

    #[test]
    fn config_text_rejects_junk() {
        assert!(RunConfig::from_text("n = 5").is_err());
        assert!(RunConfig::from_text("command = pins\nnot a pair").is_err());
        assert!(RunConfig::from_text("command = pins\nseed = abc").is_err());
    }

    #[test]
    fn ceiling_precedence_is_flag_then_preset() {
        let preset = RunConfig::new("pins");
        assert_eq!(preset.ceiling().unwrap(), Level::Desk.coset_ceiling());
        let explicit = RunConfig::new("pins").with("ceiling", 42);
        assert_eq!(explicit.ceiling().unwrap(), 42);
        let mut deep = RunConfig::new("pins");
        deep.level = Level::Deep;
        assert_eq!(deep.ceiling().unwrap(), 500_000);
        assert_eq!(deep.clamped("omega-max", 12).unwrap(), 9);
        assert_eq!(deep.with("omega-max", 12).clamped("omega-max", 8).unwrap(), 12);
    }

    #[test]
    fn csv_escaping_quotes_only_when_needed() {
        let mut table = CsvTable::new(&["a", "b"]);
        table.push(vec!["plain".to_string(), "with, comma".to_string()]);
        table.push(vec!["with \"quote\"".to_string(), "fine".to_string()]);
        let text = table.to_text();
        assert_eq!(
            text,
            "a,b\nplain,\"with, comma\"\n\"with \"\"quote\"\"\",fine\n"
        );
    }

    #[test]
    fn exact_pins_run_reports_the_known_ratio() {
        let config = RunConfig::new("pins")
            .with("n", 5)
            .with("a", "(1 2)(3 4)")
            .with("coset", "even")
            .with("exact", true);
        let out = run(&config).unwrap();
        assert!(out.passed);
        let p = &out.report.body["report"]["p_ins"]["exact"];
        assert_eq!(p, "2/5");
        assert_eq!(out.csv.rows.len(), 1);
        assert_eq!(out.csv.rows[0][2], "2/5");
    }

    #[test]
    fn monte_carlo_body_is_identical_across_worker_counts() {
        let base = RunConfig::new("pins")
            .with("n", 5)
            .with("a", "(1 2)")
            .with("coset", "odd")
            .with("samples", 2000);
        let mut one = base.clone();
        one.workers = Some(1);
        let mut four = base.clone();
        four.workers = Some(4);
        let body_one = serde_json::to_string(&run(&one).unwrap().report.body).unwrap();
        let body_four = serde_json::to_string(&run(&four).unwrap().report.body).unwrap();
        assert_eq!(body_one, body_four);
    }

    #[test]
    fn verify_ccent_accepts_and_rejects_as_documented() {
        let out = run(&RunConfig::new("verify").with("which", "ccent")).unwrap();
        assert!(out.passed);
        assert_eq!(out.report.body["failed"], 0);
        assert_eq!(out.csv.rows.len(), 2);
    }

    #[test]
    fn unknown_commands_and_suites_are_rejected_with_remedies() {
        let err = run(&RunConfig::new("frobnicate")).unwrap_err().to_string();
        assert!(err.contains("unknown command"));
        let err = run(&RunConfig::new("verify").with("which", "nope"))
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown verification suite"));
        let err = run(&RunConfig::new("pins")).unwrap_err().to_string();
        assert!(err.contains("missing parameter `n`"));
    }

    #[test]
    fn degree_range_parsing() {
        assert_eq!(parse_degree_range("5").unwrap(), vec![5]);
        assert_eq!(parse_degree_range("5..7").unwrap(), vec![5, 6, 7]);
        assert_eq!(parse_degree_range("5..=6").unwrap(), vec![5, 6]);
        assert!(parse_degree_range("7..5").is_err());
        assert!(parse_degree_range("x").is_err());
    }

    #[test]
    fn level_caps_block_oversized_degrees() {
        let mut config = RunConfig::new("pins")
            .with("n", 7)
            .with("a", "(1 2)")
            .with("exact", true);
        config.level = Level::Smoke;
        let err = run(&config).unwrap_err().to_string();
        assert!(err.contains("exceeds the smoke cap"));
    }

    #[test]
    fn crucial_run_on_the_small_simple_group() {
        let config = RunConfig::new("crucial")
            .with("construction", "alt5")
            .with("g", "(1 2 3 4 5)")
            .with("eta", "from-eta-exact:5");
        let out = run(&config).unwrap();
        assert!(out.passed);
        assert_eq!(out.report.body["report"]["bound"], "3/5");
        assert_eq!(out.report.body["report"]["solubilizer"]["ratio"], "1/6");
    }

    #[test]
    fn pretty_rendering_mentions_status() {
        let mut config = RunConfig::new("verify").with("which", "ccent");
        config.output = OutputFormat::Pretty;
        let out = run(&config).unwrap();
        let text = render(&out).unwrap();
        assert!(text.starts_with("solab verify"));
        assert!(text.ends_with("status: PASS\n"));
    }
}
