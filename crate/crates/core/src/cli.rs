//! Batch front end: job files, reports and the `pq` commands.
//!
//! A job is a JSON object. File-valued inputs are looked up first under
//! `"inputs"` and then at the top level; each may be a path relative to the
//! job file or an inline object. Quadrature settings come from CLI
//! overrides, then the job's `"cfg"`, then defaults.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{PqError, Result};
use crate::integrator::{convergence_order, sphere_sweep_errors, Convergence, QuadratureConfig};
use crate::io::{
    as_f64, as_str, as_u64, as_vec, format_f64, generator_from_json, group_from_json, group_to_json,
    homotopy_from_json, morphism_from_json, morphism_to_json, path_from_json, point_from_json, read_json_file,
    space_from_json, space_to_json, to_json_string,
};
use crate::paths::{SampledHomotopy, SampledPath};
use crate::prequantum::{detect_periods, Gauge, Morphism, PeriodGroup, Prequantum};
use crate::spaces::{cone_lift_near, deck_rotate, Point, SpaceModel};
use crate::symmetry::{one_point_moment, paths_moment, two_point_moment, LieGenerator};
use crate::verify::{run_suite, Check};

/// Default `S × T` for period detection.
pub const DEFAULT_RESOLUTION: (usize, usize) = (256, 512);
/// Default resolutions for `converge`.
pub const DEFAULT_CONVERGE_NS: [usize; 3] = [64, 128, 256];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Holonomy,
    Cocycle,
    Classify,
    Compose,
    Periods,
    Moment,
    Verify,
    Converge,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Holonomy,
        Command::Cocycle,
        Command::Classify,
        Command::Compose,
        Command::Periods,
        Command::Moment,
        Command::Verify,
        Command::Converge,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Holonomy => "holonomy",
            Command::Cocycle => "cocycle",
            Command::Classify => "classify",
            Command::Compose => "compose",
            Command::Periods => "periods",
            Command::Moment => "moment",
            Command::Verify => "verify",
            Command::Converge => "converge",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| PqError::Parse(format!("unknown command \"{s}\"")))
    }

    /// Whether the command can run without a job file.
    pub fn job_optional(&self) -> bool {
        matches!(self, Command::Periods | Command::Verify | Command::Converge)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Settings given on the command line; they win over the job file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub refine: Option<usize>,
    pub rows: Option<usize>,
    pub resolution: Option<(usize, usize)>,
    pub suite: Option<String>,
    pub seed: Option<u64>,
}

/// A parsed job file.
#[derive(Debug, Clone)]
pub struct Job {
    value: Value,
    dir: PathBuf,
    source: Option<(String, String)>,
}

impl Job {
    pub fn load(path: &Path) -> Result<Self> {
        let (value, bytes) = read_json_file(path)?;
        let name = path
            .file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::build(value, dir, Some((name, sha256_hex(&bytes))))
    }

    /// A job given in memory; relative file references resolve against `dir`.
    pub fn from_value(value: Value, dir: impl Into<PathBuf>) -> Result<Self> {
        Self::build(value, dir.into(), None)
    }

    pub fn empty() -> Self {
        Job {
            value: json!({}),
            dir: PathBuf::new(),
            source: None,
        }
    }

    fn build(value: Value, dir: PathBuf, source: Option<(String, String)>) -> Result<Self> {
        if !value.is_object() {
            return Err(PqError::Parse("a job must be a JSON object".into()));
        }
        Ok(Job { value, dir, source })
    }

    pub fn command(&self) -> Result<Option<Command>> {
        self.value
            .get("command")
            .map(|c| Command::parse(as_str(c, "command")?))
            .transpose()
    }

    fn get(&self, key: &str) -> Option<&Value> {
        self.value.get(key)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// A tabular sweep (CSV-friendly).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: Command,
    pub inputs: Map<String, Value>,
    pub config: Map<String, Value>,
    pub results: Map<String, Value>,
    pub error_bounds: Map<String, Value>,
    pub checks: Vec<Check>,
    pub table: Option<Table>,
}

impl Report {
    fn new(command: Command) -> Self {
        Report {
            command,
            inputs: Map::new(),
            config: Map::new(),
            results: Map::new(),
            error_bounds: Map::new(),
            checks: Vec::new(),
            table: None,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }

    /// 0, or 1 when a verification check failed.
    pub fn exit_code(&self) -> i32 {
        if self.command == Command::Verify && !self.all_passed() {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "residual": c.residual,
                    "threshold": c.threshold,
                    "relation": c.relation.symbol(),
                    "pass": c.pass(),
                })
            })
            .collect();
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command.name()));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("config".into(), Value::Object(self.config.clone()));
        m.insert("results".into(), Value::Object(self.results.clone()));
        m.insert("error_bounds".into(), Value::Object(self.error_bounds.clone()));
        m.insert("checks".into(), Value::Array(checks));
        if let Some(t) = &self.table {
            m.insert("table".into(), json!({ "columns": t.columns, "rows": t.rows }));
        }
        Value::Object(m)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => to_json_string(&self.to_json(), true),
            Format::Csv => self.to_csv(),
        }
    }

    /// The sweep table if there is one, else the checks, else flattened
    /// results as `key,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.table {
            out.push_str(&t.columns.join(","));
            out.push('\n');
            for r in &t.rows {
                out.push_str(&r.iter().map(|x| format_f64(*x)).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
        } else if !self.checks.is_empty() && self.command == Command::Verify {
            out.push_str("name,residual,threshold,relation,pass\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    c.name,
                    format_f64(c.residual),
                    format_f64(c.threshold),
                    c.relation.symbol(),
                    c.pass()
                ));
            }
        } else {
            out.push_str("key,value\n");
            let mut rows = Vec::new();
            flatten("", &Value::Object(self.results.clone()), &mut rows);
            for (k, v) in rows {
                out.push_str(&format!("{k},{v}\n"));
            }
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&key(k), x, out)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, out)),
        Value::Number(n) => out.push((prefix.into(), n.as_f64().map_or_else(|| n.to_string(), format_f64))),
        Value::String(s) => out.push((prefix.into(), s.clone())),
        Value::Bool(b) => out.push((prefix.into(), b.to_string())),
        Value::Null => out.push((prefix.into(), String::new())),
    }
}

/// Finite number or a numeric failure.
fn num(x: f64, what: &str) -> Result<Value> {
    if x.is_finite() {
        Ok(json!(x))
    } else {
        Err(PqError::Numeric(format!("{what} is not finite")))
    }
}

/// Exit code for an error: 3 for numeric failures, 2 for everything else.
pub fn exit_code_for(e: &PqError) -> i32 {
    match e {
        PqError::Numeric(_) => 3,
        _ => 2,
    }
}

struct Run<'a> {
    job: &'a Job,
    cfg: QuadratureConfig,
    resolution: Option<(usize, usize)>,
    report: Report,
}

impl<'a> Run<'a> {
    fn new(command: Command, job: &'a Job, ov: &Overrides) -> Result<Self> {
        let mut cfg = QuadratureConfig::default();
        let mut resolution = None;
        if let Some(c) = job.get("cfg") {
            if let Some(v) = c.get("refine") {
                cfg.refine = as_u64(v, "cfg.refine")? as usize;
            }
            if let Some(v) = c.get("rows") {
                cfg.rows = as_u64(v, "cfg.rows")? as usize;
            }
            if let Some(v) = c.get("tol") {
                cfg.tol_report = as_f64(v, "cfg.tol")?;
            }
            if let Some(v) = c.get("resolution") {
                let r = as_vec(v, "cfg.resolution")?;
                match r.as_slice() {
                    [s, t] if *s >= 1.0 && *t >= 1.0 && s.fract() == 0.0 && t.fract() == 0.0 => {
                        resolution = Some((*s as usize, *t as usize))
                    }
                    _ => {
                        return Err(PqError::Parse(
                            "cfg.resolution: expected [S, T] positive integers".into(),
                        ))
                    }
                }
            }
        }
        cfg.refine = ov.refine.unwrap_or(cfg.refine);
        cfg.rows = ov.rows.unwrap_or(cfg.rows);
        cfg.tol_report = ov.tol.unwrap_or(cfg.tol_report);
        resolution = ov.resolution.or(resolution);
        cfg.validate()?;
        let mut report = Report::new(command);
        if let Some((name, digest)) = &job.source {
            report
                .inputs
                .insert("job".into(), json!({ "file": name, "sha256": digest }));
        }
        report.config.insert("refine".into(), json!(cfg.refine));
        report.config.insert("rows".into(), json!(cfg.rows));
        report.config.insert("tol".into(), json!(cfg.tol_report));
        Ok(Run {
            job,
            cfg,
            resolution,
            report,
        })
    }

    /// A file-or-inline input, recording the digest of files.
    fn input(&mut self, key: &str) -> Result<Option<Value>> {
        let raw = match self
            .job
            .get("inputs")
            .and_then(|i| i.get(key))
            .or_else(|| self.job.get(key))
        {
            None => return Ok(None),
            Some(v) => v,
        };
        match raw {
            Value::String(rel) => {
                let (v, bytes) = read_json_file(&self.job.dir.join(rel))?;
                self.report
                    .inputs
                    .insert(key.into(), json!({ "file": rel, "sha256": sha256_hex(&bytes) }));
                Ok(Some(v))
            }
            other => Ok(Some(other.clone())),
        }
    }

    fn required(&mut self, key: &str) -> Result<Value> {
        self.input(key)?
            .ok_or_else(|| PqError::Parse(format!("job needs input \"{key}\"")))
    }

    fn space(&mut self, fallback: Option<SpaceModel>) -> Result<SpaceModel> {
        match self.job.get("space") {
            Some(v) => space_from_json(v),
            None => fallback.ok_or_else(|| PqError::Parse("job needs a \"space\"".into())),
        }
    }

    fn context(&mut self, space: SpaceModel) -> Result<Prequantum> {
        let periods = match self.job.get("periods") {
            None => PeriodGroup::pinned(&space),
            Some(Value::String(s)) if s == "pinned" => PeriodGroup::pinned(&space),
            Some(Value::String(s)) if s == "detect" => {
                let (s_steps, t_steps) = self.resolution.unwrap_or(DEFAULT_RESOLUTION);
                detect_periods(&space, s_steps, t_steps, &self.cfg)?.group
            }
            Some(v) => group_from_json(v)?,
        };
        self.report.results.insert("group".into(), group_to_json(&periods));
        self.report.results.insert("space".into(), space_to_json(&space));
        Ok(Prequantum::with_periods(space, periods).with_config(self.cfg))
    }

    /// Value at the configured refine plus `|I_r − I_{2r}| / 3`, recorded as
    /// `key` in results and error bounds with a check against the tolerance.
    fn estimate(&mut self, key: &str, pq: &Prequantum, f: impl Fn(&Prequantum) -> Result<f64>) -> Result<f64> {
        let v = f(pq)?;
        let fine = pq.clone().with_config(self.cfg.with_refine(2 * self.cfg.refine));
        let bound = (v - f(&fine)?).abs() / 3.0;
        self.report.results.insert(key.into(), num(v, key)?);
        self.report.error_bounds.insert(key.into(), num(bound, "error bound")?);
        self.report.checks.push(Check::at_most(
            format!("{key}.quadrature_error_bound"),
            bound,
            self.cfg.tol_report,
        ));
        Ok(v)
    }

    fn phase(&mut self, pq: &Prequantum, raw: f64) -> Result<()> {
        let p = pq.phase(raw)?;
        self.report.results.insert("phase".into(), num(p.value(), "phase")?);
        Ok(())
    }
}

/// Runs `command` on `job`.
pub fn run(command: Command, job: &Job, ov: &Overrides) -> Result<Report> {
    if let Some(c) = job.command()? {
        if c != command {
            return Err(PqError::Parse(format!(
                "job is for \"{}\", not \"{}\"",
                c.name(),
                command.name()
            )));
        }
    }
    let mut r = Run::new(command, job, ov)?;
    match command {
        Command::Holonomy => holonomy(&mut r)?,
        Command::Cocycle => cocycle(&mut r)?,
        Command::Classify => classify(&mut r)?,
        Command::Compose => compose(&mut r)?,
        Command::Periods => periods(&mut r)?,
        Command::Moment => moment(&mut r)?,
        Command::Verify => verify(&mut r, ov)?,
        Command::Converge => converge(&mut r)?,
    }
    Ok(r.report)
}

fn holonomy(r: &mut Run) -> Result<()> {
    let l = path_from_json(&r.required("loop")?)?;
    let space = r.space(Some(*l.space()))?;
    let pq = r.context(space)?;
    let sigma: Option<SampledHomotopy> = match r.input("contraction")? {
        None => None,
        Some(v) => match v.get("toward") {
            Some(t) => Some(pq.contraction_toward(&l, &as_vec(t, "toward")?)?),
            None => Some(homotopy_from_json(&v)?),
        },
    };
    let raw = r.estimate("raw", &pq, |p| p.isotropy_raw(&l, sigma.as_ref()))?;
    r.phase(&pq, raw)
}

fn cocycle(r: &mut Run) -> Result<()> {
    let a = path_from_json(&r.required("a")?)?;
    let b = path_from_json(&r.required("b")?)?;
    let sigma = r.input("homotopy")?.map(|v| homotopy_from_json(&v)).transpose()?;
    let space = r.space(Some(*a.space()))?;
    let pq = r.context(space)?;
    let raw = r.estimate("raw", &pq, |p| p.cocycle_raw(&a, &b, sigma.as_ref()))?;
    r.phase(&pq, raw)
}

fn gauge(r: &Run) -> Result<Gauge> {
    match r.job.get("gauge").map(|g| as_str(g, "gauge")).transpose()? {
        None | Some("reference") => Ok(Gauge::Reference),
        Some("primitive") => Ok(Gauge::Primitive),
        Some(other) => Err(PqError::Parse(format!("unknown gauge \"{other}\""))),
    }
}

fn classify_path(r: &mut Run, pq: &Prequantum, g: &SampledPath, gauge: Gauge, key: &str) -> Result<Morphism> {
    let m = match gauge {
        Gauge::Reference => {
            let raw = r.estimate(key, pq, |p| p.class_raw(g))?;
            Morphism::new(pq.space, g.start(), g.end(), pq.phase(raw)?, Gauge::Reference)?
        }
        Gauge::Primitive => {
            let m = pq.exact_morphism(g)?;
            r.report.results.insert(key.into(), num(m.phase.value(), key)?);
            m
        }
    };
    Ok(m)
}

fn classify(r: &mut Run) -> Result<()> {
    let g = path_from_json(&r.required("path")?)?;
    let space = r.space(Some(*g.space()))?;
    let pq = r.context(space)?;
    let gauge = gauge(r)?;
    let m = classify_path(r, &pq, &g, gauge, "raw")?;
    r.phase(&pq, m.phase.value())?;
    r.report.results.insert("morphism".into(), morphism_to_json(&m));
    Ok(())
}

fn compose(r: &mut Run) -> Result<()> {
    let first = r.required("first")?;
    let second = r.required("second")?;
    let fallback = match first.get("knots") {
        Some(_) => Some(*path_from_json(&first)?.space()),
        None => first.get("space").map(space_from_json).transpose()?,
    };
    let space = r.space(fallback)?;
    let pq = r.context(space)?;
    let gauge = gauge(r)?;
    let load = |r: &mut Run, v: &Value, key: &str| -> Result<Morphism> {
        if v.get("knots").is_some() {
            classify_path(r, &pq, &path_from_json(v)?, gauge, key)
        } else {
            morphism_from_json(v, Some(space))
        }
    };
    let m = load(r, &first, "first_raw")?;
    let n = load(r, &second, "second_raw")?;
    let composite = pq.compose(&m, &n)?;
    if m.gauge == Gauge::Reference {
        let third = match space.cone_order() {
            Some(k) => {
                let (_, shift) = cone_lift_near(k, m.dst.coords(), n.src.coords());
                deck_rotate(k, shift, n.dst.coords()).to_vec()
            }
            None => n.dst.coords().to_vec(),
        };
        r.estimate("correction", &pq, |p| {
            p.triangle_correction(m.src.coords(), m.dst.coords(), &third)
        })?;
    }
    r.report.results.insert("first".into(), morphism_to_json(&m));
    r.report.results.insert("second".into(), morphism_to_json(&n));
    r.report
        .results
        .insert("composite".into(), morphism_to_json(&composite));
    r.report
        .results
        .insert("phase".into(), num(composite.phase.value(), "phase")?);
    Ok(())
}

fn periods(r: &mut Run) -> Result<()> {
    let space = r.space(Some(SpaceModel::sphere2()))?;
    let (s_steps, t_steps) = r.resolution.unwrap_or(DEFAULT_RESOLUTION);
    r.report.config.insert("resolution".into(), json!([s_steps, t_steps]));
    let est = detect_periods(&space, s_steps, t_steps, &r.cfg)?;
    r.report.results.insert("space".into(), space_to_json(&space));
    r.report.results.insert("group".into(), group_to_json(&est.group));
    if let Some(raw) = est.raw {
        r.report.results.insert("raw".into(), num(raw, "period")?);
    }
    if let Some(b) = est.error_bound {
        r.report.error_bounds.insert("raw".into(), num(b, "error bound")?);
    }
    Ok(())
}

fn moment(r: &mut Run) -> Result<()> {
    let gens: Vec<LieGenerator> = match (r.input("generators")?, r.input("generator")?) {
        (Some(Value::Array(list)), _) => list.iter().map(generator_from_json).collect::<Result<_>>()?,
        (None, Some(g)) => vec![generator_from_json(&g)?],
        _ => {
            return Err(PqError::Parse(
                "job needs \"generator\" or a \"generators\" array".into(),
            ))
        }
    };
    let path = r.input("path")?.map(|v| path_from_json(&v)).transpose()?;
    let space = r.space(path.as_ref().map(|p| *p.space()))?;
    let pq = r.context(space)?;
    let point = |r: &Run, key: &str| -> Result<Option<Point>> {
        r.job.get(key).map(|v| point_from_json(&space, v)).transpose()
    };
    let (x, y, base) = (point(r, "x")?, point(r, "y")?, point(r, "base")?);
    let mut values = Vec::with_capacity(gens.len());
    for (i, xi) in gens.iter().enumerate() {
        let key = if gens.len() == 1 {
            "value".to_string()
        } else {
            format!("value_{i}")
        };
        let v = match (&path, &x, &y, &base) {
            (Some(g), ..) => r.estimate(&key, &pq, |p| paths_moment(g, xi, &p.cfg))?,
            (None, Some(x), Some(y), _) => r.estimate(&key, &pq, |p| two_point_moment(p, x, y, xi))?,
            (None, Some(x), None, Some(b)) => r.estimate(&key, &pq, |p| one_point_moment(p, x, xi, b))?,
            _ => {
                return Err(PqError::Parse(
                    "moment job needs a \"path\", points \"x\" and \"y\", or \"x\" and \"base\"".into(),
                ))
            }
        };
        values.push(v);
    }
    if values.len() > 1 {
        r.report.results.insert("coefficients".into(), json!(values));
    }
    Ok(())
}

fn verify(r: &mut Run, ov: &Overrides) -> Result<()> {
    let suite = match (&ov.suite, r.job.get("suite")) {
        (Some(s), _) => s.clone(),
        (None, Some(v)) => as_str(v, "suite")?.to_string(),
        (None, None) => "all".into(),
    };
    let seed = match (ov.seed, r.job.get("seed")) {
        (Some(s), _) => s,
        (None, Some(v)) => as_u64(v, "seed")?,
        (None, None) => 0,
    };
    let mut checks = run_suite(&suite, seed, &r.cfg)?;
    if let Some(t) = ov
        .tol
        .or_else(|| r.job.get("cfg").and_then(|c| c.get("tol")).and_then(Value::as_f64))
    {
        checks = checks.into_iter().map(|c| c.tighten(t)).collect();
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    r.report.results.insert("suite".into(), json!(suite));
    r.report.results.insert("seed".into(), json!(seed));
    r.report.results.insert("total".into(), json!(checks.len()));
    r.report.results.insert("failed".into(), json!(failed));
    r.report.checks = checks;
    Ok(())
}

fn converge(r: &mut Run) -> Result<()> {
    let space = r.space(Some(SpaceModel::sphere2()))?;
    let ns: Vec<usize> = match r.job.get("ns") {
        Some(v) => as_vec(v, "ns")?
            .into_iter()
            .map(|x| {
                if x >= 1.0 && x.fract() == 0.0 {
                    Ok(x as usize)
                } else {
                    Err(PqError::Parse("ns: expected positive integers".into()))
                }
            })
            .collect::<Result<_>>()?,
        None => DEFAULT_CONVERGE_NS.to_vec(),
    };
    let samples = sphere_sweep_errors(&space, &ns, &r.cfg)?;
    let order = convergence_order(&samples)?;
    r.report.results.insert("space".into(), space_to_json(&space));
    r.report.results.insert(
        "order".into(),
        match order {
            Convergence::Order(p) => num(p, "order")?,
            Convergence::Exact => json!("exact"),
        },
    );
    r.report.table = Some(Table {
        columns: vec!["n".into(), "h".into(), "error".into()],
        rows: ns
            .iter()
            .zip(&samples)
            .map(|(n, (h, e))| vec![*n as f64, *h, *e])
            .collect(),
    });
    if let Convergence::Order(p) = order {
        r.report
            .checks
            .push(Check::at_most("order_minus_two", (p - 2.0).abs(), 0.3));
    }
    Ok(())
}

/// Parses `SxT` (also `S×T`).
pub fn parse_resolution(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s
        .split_once(['x', 'X', '×'])
        .ok_or_else(|| PqError::Parse(format!("resolution \"{s}\": expected SxT")))?;
    let p = |x: &str| x.trim().parse::<usize>().ok().filter(|&v| v >= 1);
    match (p(a), p(b)) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(PqError::Parse(format!(
            "resolution \"{s}\": expected positive integers"
        ))),
    }
}

/// Exit codes of `pq`.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Resolves an oracle-table value from a report's results (`"raw"`,
/// `"correction"`, …).
pub fn result_value(report: &Report, key: &str) -> Option<f64> {
    report.results.get(key).and_then(Value::as_f64)
}
