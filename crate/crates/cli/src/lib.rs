//! Command implementations behind the `hyperent` binary: hypergraph
//! selection, entanglement sweeps with deterministic CSV/JSON emission,
//! threshold tables, and catalog validation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hyperent_core::poly::rational_to_f64;
use hyperent_core::*;
use rayon::prelude::*;

pub const TOOL_NAME: &str = "hyperent";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code semantics: 0 ok, 1 computation failure, 2 usage error.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: msg.into(),
        }
    }

    pub fn computation(msg: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: msg.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. }
            | Error::VertexOutOfRange { .. }
            | Error::DuplicateEdge { .. }
            | Error::InvalidArgument(_)
            | Error::UnknownFamily(_)
            | Error::ProbabilityRange { .. }
            | Error::MissingOrder { .. }
            | Error::DimensionMismatch { .. } => 2,
            Error::Capacity { .. }
            | Error::NotHermitian { .. }
            | Error::EigenNoConvergence { .. }
            | Error::WitnessNeverFires
            | Error::SdpMaxIterations { .. }
            | Error::SdpNumerical { .. } => 1,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// How a command picks its hypergraph.
#[derive(Debug, Clone)]
pub enum Selector {
    Family { name: String, n: usize },
    Catalog { path: String, name: Option<String> },
}

impl Selector {
    pub fn resolve(&self) -> CliResult<Hypergraph> {
        match self {
            Selector::Family { name, n } => Ok(family(name, *n)?),
            Selector::Catalog { path, name } => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::usage(format!("cannot read catalog {path}: {e}"))
                })?;
                let records = parse_catalog(&text)?;
                match name {
                    Some(wanted) => records
                        .into_iter()
                        .find(|h| h.name() == Some(wanted.as_str()))
                        .ok_or_else(|| {
                            CliError::usage(format!("no record named \"{wanted}\" in {path}"))
                        }),
                    None => {
                        if records.len() == 1 {
                            Ok(records.into_iter().next().unwrap())
                        } else {
                            Err(CliError::usage(format!(
                                "catalog {path} has {} records; pick one with --name",
                                records.len()
                            )))
                        }
                    }
                }
            }
        }
    }
}

/// Parses `"1|2,3,4"` (or just `"1"`, complement implied) into a
/// bipartition of `n` qubits.
pub fn parse_bipartition(text: &str, n: usize) -> CliResult<Bipartition> {
    let parse_side = |side: &str| -> CliResult<Vec<usize>> {
        side.split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::usage(format!("invalid qubit index \"{t}\"")))
            })
            .collect()
    };
    let (a, b) = match text.split_once('|') {
        Some((a, b)) => (parse_side(a)?, Some(parse_side(b)?)),
        None => (parse_side(text)?, None),
    };
    if let Some(b) = &b {
        let mut all: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
        all.sort_unstable();
        let expect: Vec<usize> = (1..=n).collect();
        if all != expect {
            return Err(CliError::usage(format!(
                "bipartition \"{text}\" does not split qubits 1..{n} into two disjoint sides"
            )));
        }
    }
    Bipartition::from_qubits(n, &a).map_err(Into::into)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Negativity,
    Gmn,
    Overlap,
    Witness,
}

impl Measure {
    pub fn label(&self) -> &'static str {
        match self {
            Measure::Negativity => "negativity",
            Measure::Gmn => "gmn",
            Measure::Overlap => "overlap",
            Measure::Witness => "witness",
        }
    }

    pub fn parse(text: &str) -> CliResult<Measure> {
        match text {
            "negativity" => Ok(Measure::Negativity),
            "gmn" => Ok(Measure::Gmn),
            "overlap" => Ok(Measure::Overlap),
            "witness" => Ok(Measure::Witness),
            other => Err(CliError::usage(format!(
                "unknown measure \"{other}\" (expected negativity, gmn, overlap, or witness)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(text: &str) -> CliResult<OutputFormat> {
        match text {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::usage(format!(
                "unknown format \"{other}\" (expected csv or json)"
            ))),
        }
    }
}

/// Grid sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub hypergraph: Hypergraph,
    pub measure: Measure,
    /// Required for negativity.
    pub bipartition: Option<Bipartition>,
    /// Grid points per randomization variable, endpoints included.
    pub resolution: usize,
    /// Required for gmn; ignored otherwise.
    pub normalization: Option<Normalization>,
}

/// A finished sweep: self-describing metadata plus rows in lexicographic
/// grid order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub hypergraph: String,
    pub measure: Measure,
    pub normalization: Option<Normalization>,
    pub bipartition: Option<String>,
    /// Randomization orders the grid ranges over, ascending.
    pub variables: Vec<usize>,
    pub rows: Vec<(Vec<f64>, f64)>,
}

pub fn run_sweep(config: &SweepConfig) -> CliResult<SweepResult> {
    if config.resolution < 2 {
        return Err(CliError::usage(format!(
            "grid resolution must be >= 2, got {}",
            config.resolution
        )));
    }
    let h = &config.hypergraph;
    match config.measure {
        Measure::Negativity => {
            if config.bipartition.is_none() {
                return Err(CliError::usage(
                    "measure negativity requires --bipartition",
                ));
            }
        }
        Measure::Gmn => {
            if config.normalization.is_none() {
                return Err(CliError::usage(
                    "measure gmn requires an explicit --normalization (trace-one or operator-bounded)",
                ));
            }
        }
        _ => {}
    }

    let orders = h.randomizable_orders();
    let res = config.resolution;
    let total: usize = res.pow(orders.len() as u32);
    let grid_value = |flat: usize| -> Vec<f64> {
        // Lexicographic: the first variable is the slowest index.
        let mut coords = Vec::with_capacity(orders.len());
        let mut rem = flat;
        for pos in 0..orders.len() {
            let stride = res.pow((orders.len() - 1 - pos) as u32);
            let idx = rem / stride;
            rem %= stride;
            coords.push(idx as f64 / (res - 1) as f64);
        }
        coords
    };

    // Polynomial measures evaluate exactly once; point measures rebuild the
    // density matrix per grid point.
    let overlap = match config.measure {
        Measure::Overlap | Measure::Witness => Some(overlap_polynomial(h)?),
        _ => None,
    };
    let alpha = match config.measure {
        Measure::Witness => Some(rational_to_f64(&witness_alpha(h.max_order())?)),
        _ => None,
    };

    let evaluate = |coords: &[f64]| -> std::result::Result<f64, Error> {
        match config.measure {
            Measure::Overlap | Measure::Witness => {
                let poly = overlap.as_ref().expect("precomputed");
                let mut point = BTreeMap::new();
                for (&k, &v) in orders.iter().zip(coords) {
                    point.insert(k, v);
                }
                let o = poly.eval_f64(&point);
                Ok(match config.measure {
                    Measure::Overlap => o,
                    Measure::Witness => alpha.expect("precomputed") - o,
                    _ => unreachable!(),
                })
            }
            Measure::Negativity | Measure::Gmn => {
                let params =
                    RandomizationParams::new(orders.iter().zip(coords).map(|(&k, &v)| (k, v)))?;
                let rho = randomized_density(h, &params)?;
                match config.measure {
                    Measure::Negativity => {
                        negativity(&rho, config.bipartition.as_ref().expect("checked"))
                    }
                    Measure::Gmn => gmn(&rho, config.normalization.expect("checked")),
                    _ => unreachable!(),
                }
            }
        }
    };

    let rows: CliResult<Vec<(Vec<f64>, f64)>> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let coords = grid_value(flat);
            let value = evaluate(&coords).map_err(|e| {
                // Name the offending grid point; rows never fail silently.
                let point: Vec<String> = orders
                    .iter()
                    .zip(&coords)
                    .map(|(k, v)| format!("p{k}={v}"))
                    .collect();
                let base = CliError::from(e);
                CliError {
                    code: base.code,
                    message: format!("at grid point [{}]: {}", point.join(", "), base.message),
                }
            })?;
            Ok((coords, value))
        })
        .collect();
    let rows = rows?;

    Ok(SweepResult {
        hypergraph: h.serialize(),
        measure: config.measure,
        normalization: config.normalization,
        bipartition: config.bipartition.as_ref().map(|b| b.label()),
        variables: orders,
        rows,
    })
}

impl SweepResult {
    fn normalization_label(&self) -> &'static str {
        match self.normalization {
            Some(n) => n.label(),
            None => "n/a",
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {TOOL_NAME} {TOOL_VERSION}");
        let _ = writeln!(out, "# hypergraph: {}", self.hypergraph);
        let _ = writeln!(out, "# measure: {}", self.measure.label());
        let _ = writeln!(out, "# normalization: {}", self.normalization_label());
        if let Some(b) = &self.bipartition {
            let _ = writeln!(out, "# bipartition: {b}");
        }
        let mut header: Vec<String> =
            self.variables.iter().map(|k| format!("p{k}")).collect();
        header.push("value".to_string());
        let _ = writeln!(out, "{}", header.join(","));
        for (coords, value) in &self.rows {
            let mut fields: Vec<String> =
                coords.iter().map(|c| format!("{c:.12}")).collect();
            fields.push(format!("{value:.12}"));
            let _ = writeln!(out, "{}", fields.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let columns: Vec<String> = self
            .variables
            .iter()
            .map(|k| format!("p{k}"))
            .chain(["value".to_string()])
            .collect();
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|(coords, value)| coords.iter().copied().chain([*value]).collect())
            .collect();
        let doc = serde_json::json!({
            "tool": TOOL_NAME,
            "version": TOOL_VERSION,
            "hypergraph": self.hypergraph,
            "measure": self.measure.label(),
            "normalization": self.normalization_label(),
            "bipartition": self.bipartition,
            "columns": columns,
            "rows": rows,
        });
        serde_json::to_string_pretty(&doc).expect("static document")
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

/// `state` command: exact amplitudes plus an optional stabilizer check.
pub fn cmd_state(h: &Hypergraph, check_stabilizers: bool) -> CliResult<String> {
    let s = build_state(h)?;
    let n = h.n();
    let dim = s.dim();
    let mut out = String::new();
    let _ = writeln!(out, "hypergraph: {}", h.serialize());
    let amp = if n % 2 == 0 {
        format!("1/{}", 1usize << (n / 2))
    } else {
        format!("1/sqrt({dim})")
    };
    let _ = writeln!(out, "amplitude magnitude: {amp}");
    let pattern: String = (0..dim)
        .map(|x| if s.sign(x) > 0 { '+' } else { '-' })
        .collect();
    let _ = writeln!(out, "sign pattern: {pattern}");
    for x in 0..dim {
        let bits: String = (0..n)
            .map(|q| if x & (1 << q) != 0 { '1' } else { '0' })
            .collect();
        let _ = writeln!(
            out,
            "|{bits}>  {}{amp}",
            if s.sign(x) > 0 { '+' } else { '-' }
        );
    }
    if check_stabilizers {
        for i in 1..=n {
            let g = stabilizer(h, i)?;
            if g.apply(&s)? != s {
                return Err(CliError::computation(format!(
                    "stabilizer {i} does not fix the state"
                )));
            }
        }
        let _ = writeln!(out, "all stabilizers OK");
    }
    Ok(out)
}

/// `randomize` command: the branch table, numeric or symbolic.
pub fn cmd_randomize(
    h: &Hypergraph,
    probs: Option<&RandomizationParams>,
    symbolic: bool,
) -> CliResult<String> {
    let mut out = String::new();
    let _ = writeln!(out, "# {TOOL_NAME} {TOOL_VERSION}");
    let _ = writeln!(out, "# hypergraph: {}", h.serialize());
    if symbolic {
        let _ = writeln!(out, "branch,weight,edges");
        for (idx, (w, sub)) in symbolic_randomize(h)?.iter().enumerate() {
            let _ = writeln!(
                out,
                "{idx},{},\"{}\"",
                w.canonical_string(),
                edges_label(sub)
            );
        }
    } else {
        let params = probs.ok_or_else(|| {
            CliError::usage("numeric randomization needs probabilities (--p or --prob)")
        })?;
        let ens = randomize(h, params)?;
        let _ = writeln!(out, "branch,weight,edges");
        for (idx, b) in ens.branches().iter().enumerate() {
            let _ = writeln!(
                out,
                "{idx},{:.12},\"{}\"",
                b.weight,
                edges_label(&b.subhypergraph)
            );
        }
    }
    Ok(out)
}

fn edges_label(h: &Hypergraph) -> String {
    let text = h.serialize();
    match text.split_once("edges=") {
        Some((_, edges)) => edges.to_string(),
        None => String::new(),
    }
}

/// `thresholds` command: critical probabilities for a family over a range.
/// A range silently skips sizes the family does not admit (even flowers); a
/// single explicit size must be valid.
pub fn cmd_thresholds(family_name: &str, ns: &[usize]) -> CliResult<String> {
    if family_name != "clover" && family_name != "flower" {
        return Err(CliError::usage(format!(
            "thresholds supports families clover and flower, got \"{family_name}\""
        )));
    }
    let single = ns.len() == 1;
    let mut out = String::new();
    let _ = writeln!(out, "# {TOOL_NAME} {TOOL_VERSION}");
    let _ = writeln!(out, "# family: {family_name}");
    let _ = writeln!(out, "n,p_w,overlap");
    for &n in ns {
        let h = match family(family_name, n) {
            Ok(h) => h,
            Err(e) if single => return Err(e.into()),
            Err(_) => continue,
        };
        let p = critical_probability(&h)?;
        let o = overlap_polynomial(&h)?;
        let _ = writeln!(out, "{n},{p:.3},\"{}\"", o.canonical_string());
    }
    Ok(out)
}

/// `overlap` command: exact polynomial data for one hypergraph.
pub fn cmd_overlap(h: &Hypergraph) -> CliResult<String> {
    let o = overlap_polynomial(h)?;
    let mut out = String::new();
    let _ = writeln!(out, "hypergraph: {}", h.serialize());
    let _ = writeln!(out, "overlap: {}", o.canonical_string());
    if h.max_order() >= 2 {
        let alpha = witness_alpha(h.max_order())?;
        let _ = writeln!(out, "kappa_max: {}", h.max_order());
        let _ = writeln!(out, "alpha: {alpha}");
        let w = witness_expectation(h)?;
        let _ = writeln!(out, "witness expectation: {}", w.canonical_string());
        if h.randomizable_orders().len() == 1 {
            match critical_probability(h) {
                Ok(p) => {
                    let _ = writeln!(out, "critical probability: {p:.9}");
                }
                Err(Error::WitnessNeverFires) => {
                    let _ = writeln!(out, "critical probability: none (witness never fires)");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(out)
}

/// `catalog-validate` command. Returns `(report, all_valid)`.
pub fn cmd_catalog_validate(path: &str) -> CliResult<(String, bool)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read catalog {path}: {e}")))?;
    let mut out = String::new();
    match parse_catalog(&text) {
        Ok(records) => {
            for (i, h) in records.iter().enumerate() {
                let _ = writeln!(out, "record {}: OK  {}", i + 1, h.serialize());
            }
            let _ = writeln!(out, "{} record(s) valid", records.len());
            Ok((out, true))
        }
        Err(e) => {
            let _ = writeln!(out, "INVALID: {e}");
            Ok((out, false))
        }
    }
}

/// Parses `"3..8"` or `"4"` into an inclusive list.
pub fn parse_range(text: &str) -> CliResult<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid range start \"{lo}\"")))?;
        let hi: usize = hi
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid range end \"{hi}\"")))?;
        if lo > hi {
            return Err(CliError::usage(format!("empty range {lo}..{hi}")));
        }
        Ok((lo..=hi).collect())
    } else {
        let n: usize = text
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid n \"{text}\"")))?;
        Ok(vec![n])
    }
}

/// Parses `--prob "2=0.5,3=0.25"` pairs.
pub fn parse_probs(text: &str) -> CliResult<RandomizationParams> {
    let mut pairs = Vec::new();
    for item in text.split(',') {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("expected order=prob, got \"{item}\"")))?;
        let k: usize = k
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid order \"{k}\"")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("invalid probability \"{v}\"")))?;
        pairs.push((k, v));
    }
    RandomizationParams::new(pairs).map_err(Into::into)
}
