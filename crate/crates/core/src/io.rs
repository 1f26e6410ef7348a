//! JSON file formats and the deterministic writer.
//!
//! Objects are written with sorted keys (serde_json's default map) and every
//! float with 17 significant digits, so reading a file and writing it again
//! reproduces it byte for byte.

use std::io::Write;
use std::path::Path;

use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Map, Value};

use crate::error::{PqError, Result};
use crate::paths::{SampledHomotopy, SampledPath};
use crate::prequantum::{Gauge, Morphism, PeriodGroup, Phase, DEFAULT_COEFFICIENT_BOUND};
use crate::spaces::{Point, SpaceKind, SpaceModel};
use crate::symmetry::{Diffeo, LieGenerator};

/// `%.17g`-style decimal, always with a fractional part or exponent so the
/// value reads back as a float. Non-finite values become `null`.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0" } else { "0.0" }.into();
    }
    let sci = format!("{x:.16e}");
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let sign = if x < 0.0 { "-" } else { "" };
    let digits: String = mant.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    if (-5..17).contains(&exp) {
        if exp >= 0 {
            let e = exp as usize + 1;
            if digits.len() > e {
                format!("{sign}{}.{}", &digits[..e], &digits[e..])
            } else {
                format!("{sign}{digits}{}.0", "0".repeat(e - digits.len()))
            }
        } else {
            format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize))
        }
    } else {
        let (head, tail) = digits.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        format!("{sign}{head}.{tail}e{exp}")
    }
}

struct Compact;

impl Formatter for Compact {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
}

struct Pretty(PrettyFormatter<'static>);

impl Formatter for Pretty {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        w.write_all(format_f64(value).as_bytes())
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `v`; pretty output is indented by two spaces and ends with a
/// newline.
pub fn to_json_string(v: &Value, pretty: bool) -> String {
    use serde::Serialize;
    let mut buf = Vec::new();
    let res = if pretty {
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Pretty(PrettyFormatter::new()));
        v.serialize(&mut ser)
    } else {
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, Compact);
        v.serialize(&mut ser)
    };
    res.expect("writing to memory");
    if pretty {
        buf.push(b'\n');
    }
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| PqError::Parse(e.to_string()))
}

/// Reads a JSON file, returning the parsed value and the raw bytes.
pub fn read_json_file(path: &Path) -> Result<(Value, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| PqError::Io(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| PqError::Parse(format!("{}: {e}", path.display())))?;
    let v = parse_json(text).map_err(|e| PqError::Parse(format!("{}: {e}", path.display())))?;
    Ok((v, bytes))
}

pub(crate) fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| PqError::Parse(format!("missing field \"{key}\"")))
}

pub(crate) fn as_f64(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| PqError::Parse(format!("{what}: expected a number")))
}

pub(crate) fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| PqError::Parse(format!("{what}: expected a non-negative integer")))
}

pub(crate) fn as_str<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| PqError::Parse(format!("{what}: expected a string")))
}

pub(crate) fn as_vec(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| PqError::Parse(format!("{what}: expected an array of numbers")))?
        .iter()
        .map(|x| as_f64(x, what))
        .collect()
}

fn as_matrix(v: &Value, what: &str) -> Result<Vec<Vec<f64>>> {
    v.as_array()
        .ok_or_else(|| PqError::Parse(format!("{what}: expected an array of rows")))?
        .iter()
        .map(|r| as_vec(r, what))
        .collect()
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json!(x)).collect())
}

pub fn space_to_json(space: &SpaceModel) -> Value {
    let mut m = Map::new();
    m.insert("space".into(), json!(space.name()));
    match space.kind() {
        SpaceKind::EuclideanSymplectic { n } => {
            m.insert("n".into(), json!(n));
        }
        SpaceKind::ConeOrbifold { m: k } => {
            m.insert("m".into(), json!(k));
        }
        SpaceKind::Sphere2 => {}
    }
    m.insert("normalization".into(), json!(space.normalization()));
    Value::Object(m)
}

/// Accepts a descriptor object or a bare name (`"sphere2"`, defaults
/// otherwise).
pub fn space_from_json(v: &Value) -> Result<SpaceModel> {
    let (name, obj) = match v {
        Value::String(s) => (s.as_str(), None),
        Value::Object(_) => (as_str(field(v, "space")?, "space")?, Some(v)),
        _ => return Err(PqError::Parse("space: expected a descriptor object or name".into())),
    };
    let int = |k: &str| obj.and_then(|o| o.get(k)).map(|x| as_u64(x, k)).transpose();
    let space = match name {
        "euclidean" => SpaceModel::euclidean(int("n")?.unwrap_or(1) as usize)?,
        "sphere2" => SpaceModel::sphere2(),
        "cone" => {
            let m = int("m")?.ok_or_else(|| PqError::Parse("cone descriptor needs \"m\"".into()))?;
            SpaceModel::cone(u32::try_from(m).map_err(|_| PqError::InvalidSpace(format!("cone order {m}")))?)?
        }
        other => return Err(PqError::InvalidSpace(format!("unknown space \"{other}\""))),
    };
    match obj.and_then(|o| o.get("normalization")) {
        Some(x) => space.with_normalization(as_f64(x, "normalization")?),
        None => Ok(space),
    }
}

/// The space of a file: either nested under `"space"` or given inline by
/// the enclosing object.
fn space_of(v: &Value) -> Result<SpaceModel> {
    match field(v, "space")? {
        Value::String(_) => space_from_json(v),
        inner => space_from_json(inner),
    }
}

pub fn point_from_json(space: &SpaceModel, v: &Value) -> Result<Point> {
    space.point(as_vec(v, "point")?)
}

pub fn path_to_json(p: &SampledPath) -> Value {
    let knots = p.knots().map(|(t, x)| json!([t, floats(x)])).collect();
    json!({ "space": space_to_json(p.space()), "knots": Value::Array(knots) })
}

pub fn path_from_json(v: &Value) -> Result<SampledPath> {
    let space = space_of(v)?;
    let knots = field(v, "knots")?
        .as_array()
        .ok_or_else(|| PqError::Parse("knots: expected an array".into()))?
        .iter()
        .map(|k| match k.as_array().map(Vec::as_slice) {
            Some([t, x]) => Ok((as_f64(t, "knot time")?, Point::new(as_vec(x, "knot point")?))),
            _ => Err(PqError::Parse("knot: expected [t, [coords…]]".into())),
        })
        .collect::<Result<Vec<_>>>()?;
    SampledPath::new(space, knots)
}

pub fn homotopy_to_json(h: &SampledHomotopy) -> Value {
    let grid = (0..h.rows())
        .map(|i| Value::Array((0..h.cols()).map(|j| floats(h.point(i, j))).collect()))
        .collect();
    let mut m = Map::new();
    m.insert("space".into(), space_to_json(h.space()));
    m.insert("fixed_ends".into(), json!(h.fixed_ends()));
    m.insert("grid".into(), Value::Array(grid));
    if !h.has_uniform_times() {
        m.insert("t".into(), floats(h.times()));
    }
    Value::Object(m)
}

pub fn homotopy_from_json(v: &Value) -> Result<SampledHomotopy> {
    let space = space_of(v)?;
    let fixed = match v.get("fixed_ends") {
        Some(b) => b
            .as_bool()
            .ok_or_else(|| PqError::Parse("fixed_ends: expected a boolean".into()))?,
        None => false,
    };
    let grid = field(v, "grid")?
        .as_array()
        .ok_or_else(|| PqError::Parse("grid: expected an array of rows".into()))?
        .iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| PqError::Parse("grid row: expected an array of points".into()))?
                .iter()
                .map(|p| Ok(Point::new(as_vec(p, "grid point")?)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    match v.get("t") {
        None => SampledHomotopy::new(space, grid, fixed),
        Some(t) => {
            let times = as_vec(t, "t")?;
            let rows = grid.len();
            if grid.iter().any(|r| r.len() != times.len()) {
                return Err(PqError::InvalidHomotopy(
                    "row lengths differ from the number of times".into(),
                ));
            }
            let data = grid.into_iter().flatten().flat_map(Point::into_coords).collect();
            SampledHomotopy::with_times(space, times, rows, data, fixed)
        }
    }
}

pub fn group_to_json(g: &PeriodGroup) -> Value {
    match g {
        PeriodGroup::Zero => json!({ "kind": "zero" }),
        PeriodGroup::Cyclic(a) => json!({ "kind": "cyclic", "a": a }),
        PeriodGroup::Generated { gens, bound } => json!({ "kind": "generated", "gens": floats(gens), "bound": bound }),
    }
}

pub fn group_from_json(v: &Value) -> Result<PeriodGroup> {
    match as_str(field(v, "kind")?, "kind")? {
        "zero" => Ok(PeriodGroup::Zero),
        "cyclic" => PeriodGroup::cyclic(as_f64(field(v, "a")?, "a")?),
        "generated" => {
            let bound = v.get("bound").map(|b| as_u64(b, "bound")).transpose()?;
            PeriodGroup::generated_with_bound(
                as_vec(field(v, "gens")?, "gens")?,
                bound.unwrap_or(DEFAULT_COEFFICIENT_BOUND),
            )
        }
        other => Err(PqError::InvalidGroup(format!("unknown group kind \"{other}\""))),
    }
}

pub fn phase_to_json(p: &Phase) -> Value {
    json!({ "value": p.value(), "group": group_to_json(p.group()) })
}

pub fn morphism_to_json(m: &Morphism) -> Value {
    json!({
        "src": floats(m.src.coords()),
        "dst": floats(m.dst.coords()),
        "phase": m.phase.value(),
        "group": group_to_json(m.phase.group()),
        "space": space_to_json(&m.space),
        "gauge": m.gauge.name(),
    })
}

/// `default_space` is used when the file carries no `"space"`.
pub fn morphism_from_json(v: &Value, default_space: Option<SpaceModel>) -> Result<Morphism> {
    let space = match (v.get("space"), default_space) {
        (Some(_), _) => space_of(v)?,
        (None, Some(s)) => s,
        (None, None) => return Err(PqError::Parse("morphism has no \"space\"".into())),
    };
    let gauge = match v.get("gauge").map(|g| as_str(g, "gauge")).transpose()? {
        None | Some("reference") => Gauge::Reference,
        Some("primitive") => Gauge::Primitive,
        Some(other) => return Err(PqError::Parse(format!("unknown gauge \"{other}\""))),
    };
    let phase = Phase::new(
        as_f64(field(v, "phase")?, "phase")?,
        group_from_json(field(v, "group")?)?,
    )?;
    Morphism::new(
        space,
        point_from_json(&space, field(v, "src")?)?,
        point_from_json(&space, field(v, "dst")?)?,
        phase,
        gauge,
    )
}

fn axis3(v: &Value) -> Result<[f64; 3]> {
    let a = as_vec(v, "axis")?;
    <[f64; 3]>::try_from(a.as_slice()).map_err(|_| PqError::Parse("axis: expected 3 numbers".into()))
}

fn square(v: &Value, what: &str) -> Result<(usize, Vec<f64>)> {
    let rows = as_matrix(v, what)?;
    let d = rows.len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(PqError::Parse(format!("{what}: expected a square matrix")));
    }
    Ok((d, rows.into_iter().flatten().collect()))
}

fn matrix_json(d: usize, s: &[f64]) -> Value {
    Value::Array(s.chunks(d).map(floats).collect())
}

pub fn diffeo_to_json(g: &Diffeo) -> Value {
    match g {
        Diffeo::Rotation3 { r } => {
            json!({ "rotation": { "matrix": r.iter().map(|row| floats(row)).collect::<Vec<_>>() } })
        }
        Diffeo::SymplecticAffine { n, s, b } => json!({ "symplectic": { "S": matrix_json(2 * n, s), "b": floats(b) } }),
        Diffeo::DeckPower { m, k } => json!({ "deck": { "m": m, "k": k } }),
        Diffeo::Composite(parts) => json!({ "compose": parts.iter().map(diffeo_to_json).collect::<Vec<_>>() }),
    }
}

/// Descriptors: `{"rotation": {"axis", "angle"} | {"matrix"}}`,
/// `{"symplectic": {"S", "b"}}`, `{"affine": {"S", "b"}}` (unchecked),
/// `{"deck": {"m", "k"}}` and `{"compose": [g, h, …]}`.
pub fn diffeo_from_json(v: &Value) -> Result<Diffeo> {
    if let Some(r) = v.get("rotation") {
        if let Some(m) = r.get("matrix") {
            let rows = as_matrix(m, "matrix")?;
            if rows.len() != 3 || rows.iter().any(|x| x.len() != 3) {
                return Err(PqError::Parse("rotation matrix must be 3×3".into()));
            }
            return Diffeo::rotation_matrix([0, 1, 2].map(|i| [rows[i][0], rows[i][1], rows[i][2]]));
        }
        return Diffeo::rotation(axis3(field(r, "axis")?)?, as_f64(field(r, "angle")?, "angle")?);
    }
    for (key, checked) in [("symplectic", true), ("affine", false)] {
        if let Some(a) = v.get(key) {
            let (_, s) = square(field(a, "S")?, "S")?;
            let b = as_vec(field(a, "b")?, "b")?;
            return if checked {
                Diffeo::symplectic(s, b)
            } else {
                Diffeo::affine_unchecked(s, b)
            };
        }
    }
    if let Some(d) = v.get("deck") {
        let m = as_u64(field(d, "m")?, "m")?;
        let k = as_u64(field(d, "k")?, "k")?;
        let m = u32::try_from(m).map_err(|_| PqError::InvalidDiffeo(format!("deck order {m}")))?;
        return Diffeo::deck(m, u32::try_from(k).unwrap_or(u32::MAX));
    }
    if let Some(parts) = v.get("compose") {
        let parts = parts
            .as_array()
            .ok_or_else(|| PqError::Parse("compose: expected an array".into()))?;
        return Ok(Diffeo::Composite(
            parts.iter().map(diffeo_from_json).collect::<Result<_>>()?,
        ));
    }
    Err(PqError::Parse("unrecognized diffeomorphism descriptor".into()))
}

pub fn generator_to_json(xi: &LieGenerator) -> Value {
    match xi {
        LieGenerator::Rotation { axis } => json!({ "generator": { "axis": floats(axis) } }),
        LieGenerator::Hamiltonian { n, linear, quadratic } => json!({
            "generator": { "linear": floats(linear), "quadratic": matrix_json(2 * n, quadratic) }
        }),
    }
}

/// `{"generator": {"axis": [...]}}` or
/// `{"generator": {"linear": [...], "quadratic": [[...]]}}`; the outer
/// wrapper is optional.
pub fn generator_from_json(v: &Value) -> Result<LieGenerator> {
    let g = v.get("generator").unwrap_or(v);
    if let Some(a) = g.get("axis") {
        return LieGenerator::rotation(axis3(a)?);
    }
    let linear = as_vec(field(g, "linear")?, "linear")?;
    match g.get("quadratic") {
        Some(q) => {
            let (d, a) = square(q, "quadratic")?;
            if d != linear.len() {
                return Err(PqError::InvalidGenerator(
                    "linear and quadratic parts differ in dimension".into(),
                ));
            }
            LieGenerator::hamiltonian(linear, a)
        }
        None => LieGenerator::linear_hamiltonian(linear),
    }
}
