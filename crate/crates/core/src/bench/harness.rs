//! Experiment runner: one CSV row per instance file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use log::{info, warn};

use crate::csp::{lb1, lb2, max_halfintegral_packing};
use crate::flow::isolating_cut_approx;
use crate::frontends::{mwc_root_reduce, mwc_simple_preprocess, mwc_to_csp, solve_mwc};
use crate::graph::{parse_mwc, MwcInstance};
use crate::impsep::solve_mwc_impsep;
use crate::solver::{Limits, SolverVariant};

pub const HEADER: [&str; 14] = [
    "test", "n", "m", "t", "LB1", "LB2", "OPT", "APPX", "PRE_DEL", "PRE_UNDEL", "PRE_RES_TERMS", "PRE_LEFT_TERM", "PRE_LEFT_DEG", "PRE_LEFT_OPT",
];

/// A solver timed by the harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchVariant {
    Csp(SolverVariant),
    ImpSep { split_components: bool },
}

impl BenchVariant {
    pub fn column(self) -> String {
        match self {
            BenchVariant::Csp(v) => v.to_string().replace(' ', "_"),
            BenchVariant::ImpSep { split_components } => format!("IMPSEP{}", if split_components { "+CC" } else { "" }),
        }
    }

    /// Optimum within the limits, `None` on timeout.
    pub fn solve(self, inst: &MwcInstance, limits: Limits) -> Result<Option<usize>> {
        Ok(match self {
            BenchVariant::Csp(v) => solve_mwc(inst, v, limits)?.opt,
            BenchVariant::ImpSep { split_components } => solve_mwc_impsep(inst, split_components, limits)?.opt,
        })
    }
}

impl std::str::FromStr for BenchVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "impsep" => Ok(BenchVariant::ImpSep { split_components: false }),
            "impsep+cc" => Ok(BenchVariant::ImpSep { split_components: true }),
            _ => lower.parse().map(BenchVariant::Csp),
        }
    }
}

pub fn parse_variants(list: &str) -> Result<Vec<BenchVariant>, String> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResultRow {
    pub test: String,
    pub n: usize,
    pub m: usize,
    pub t: usize,
    pub lb1: usize,
    pub lb2: usize,
    /// `None` if every variant timed out.
    pub opt: Option<usize>,
    /// `None` if two terminals are adjacent.
    pub appx: Option<usize>,
    pub pre_del: usize,
    pub pre_undel: usize,
    pub pre_res_terms: usize,
    pub pre_left_term: usize,
    pub pre_left_deg: usize,
    pub pre_left_opt: Option<usize>,
    /// One entry per variant, `None` on timeout.
    pub runtimes: Vec<Option<Duration>>,
}

/// `M:SS.cc` below an hour, `H:MM:SS` from there on.
pub fn format_runtime(d: Option<Duration>) -> String {
    let Some(d) = d else { return "-".into() };
    let centis = d.as_millis() / 10;
    let secs = centis / 100;
    if secs < 3600 {
        format!("{}:{:02}.{:02}", secs / 60, secs % 60, centis % 100)
    } else {
        format!("{}:{:02}:{:02}", secs / 3600, secs / 60 % 60, secs % 60)
    }
}

fn cell(x: Option<usize>) -> String {
    x.map_or_else(|| "-".into(), |v| v.to_string())
}

impl ResultRow {
    pub fn fields(&self) -> Vec<String> {
        let mut out = vec![self.test.clone()];
        out.extend([self.n, self.m, self.t, self.lb1, self.lb2].map(|x| x.to_string()));
        out.extend([cell(self.opt), cell(self.appx)]);
        out.extend([self.pre_del, self.pre_undel, self.pre_res_terms, self.pre_left_term, self.pre_left_deg].map(|x| x.to_string()));
        out.push(cell(self.pre_left_opt));
        out.extend(self.runtimes.iter().map(|&r| format_runtime(r)));
        out
    }
}

#[derive(Debug)]
pub struct RowError {
    pub test: String,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.test, self.message)
    }
}

/// Solves `inst` with every variant under `timeout` and fills in the
/// bounds and reduction statistics.
pub fn measure(test: &str, inst: &MwcInstance, variants: &[BenchVariant], timeout: Duration) -> Result<ResultRow> {
    let pre = mwc_simple_preprocess(inst)?;
    let (csp, _) = mwc_to_csp(&pre);
    let root = max_halfintegral_packing(&csp, true);
    let forced = pre.forced.len();
    let lb_1 = forced + lb1(root.value);
    let lb_2 = forced + root.packing.as_ref().map_or(lb1(root.value), |p| lb2(p).max(lb1(root.value)));
    let appx = isolating_cut_approx(inst).ok().map(|c| c.len());
    let red = mwc_root_reduce(inst)?;
    let pre_left_opt = solve_mwc(&red.instance, SolverVariant::LB2, Limits::timeout(timeout))?.opt;

    let mut opt = None;
    let mut runtimes = Vec::new();
    for &v in variants {
        let start = Instant::now();
        let res = v.solve(inst, Limits::timeout(timeout))?;
        let elapsed = start.elapsed();
        match res {
            Some(o) => {
                if let Some(prev) = opt {
                    anyhow::ensure!(prev == o, "{test}: {} found optimum {o}, another variant {prev}", v.column());
                }
                opt = Some(o);
                runtimes.push(Some(elapsed));
            }
            None => runtimes.push(None),
        }
    }
    Ok(ResultRow {
        test: test.into(),
        n: inst.graph.n(),
        m: inst.graph.m(),
        t: inst.terminals.len(),
        lb1: lb_1,
        lb2: lb_2,
        opt,
        appx,
        pre_del: red.deleted.len(),
        pre_undel: red.undeletable.len(),
        pre_res_terms: red.resolved_terminals,
        pre_left_term: red.instance.terminals.len(),
        pre_left_deg: red.terminal_neighbourhood(),
        pre_left_opt,
        runtimes,
    })
}

/// Instance paths listed in a manifest, one per line, relative to the
/// manifest's directory. Blank lines and `#` comments are skipped.
pub fn read_manifest(path: &Path) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(|l| dir.join(l)).collect())
}

pub fn test_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn load(path: &Path) -> Result<MwcInstance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_mwc(&text)?)
}

/// Rows sorted by test name; a file that cannot be read or solved yields an
/// error entry instead.
pub fn run_experiments(files: &[PathBuf], variants: &[BenchVariant], timeout: Duration) -> Vec<Result<ResultRow, RowError>> {
    let mut rows: Vec<Result<ResultRow, RowError>> = files
        .iter()
        .map(|path| {
            let test = test_name(path);
            info!("running {test}");
            load(path).and_then(|inst| measure(&test, &inst, variants, timeout)).map_err(|e| {
                warn!("{test}: {e:#}");
                RowError { test, message: format!("{e:#}") }
            })
        })
        .collect();
    rows.sort_by(|a, b| row_name(a).cmp(row_name(b)));
    rows
}

fn row_name(r: &Result<ResultRow, RowError>) -> &str {
    match r {
        Ok(row) => &row.test,
        Err(e) => &e.test,
    }
}

pub fn header(variants: &[BenchVariant]) -> Vec<String> {
    HEADER.iter().map(|s| s.to_string()).chain(variants.iter().map(|v| v.column())).collect()
}

/// CSV text; error rows carry `ERROR` in the `n` column and the message in
/// the last column.
pub fn to_csv(rows: &[Result<ResultRow, RowError>], variants: &[BenchVariant]) -> Result<String> {
    let head = header(variants);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&head)?;
    for r in rows {
        match r {
            Ok(row) => w.write_record(row.fields())?,
            Err(e) => {
                let mut rec = vec![String::new(); head.len()];
                rec[0] = e.test.clone();
                rec[1] = "ERROR".into();
                *rec.last_mut().unwrap() = e.message.clone();
                w.write_record(&rec)?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
