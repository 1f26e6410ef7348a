//! Sampled paths and sampled homotopies.
//!
//! A [`SampledPath`] is a finite list of knots `(tᵢ, pᵢ)` on `[0, 1]` joined
//! by straight segments (ℝ²ⁿ, cone cover) or great-circle arcs (S²). A
//! [`SampledHomotopy`] is an `(S+1) × (T+1)` grid of points whose row `s` is
//! the path `γ_s` sampled at shared column times.
//!
//! Knot times are stored together with their complements `1 − tᵢ` so that
//! reversal is an exact involution in floating point.

use crate::error::{PqError, Result};
use crate::spaces::{cone_lift_near, deck_rotate, Point, SpaceModel, POINT_EQ_TOL};

/// Time axis shared by paths and homotopy columns.
#[derive(Debug, Clone, PartialEq)]
struct Knots {
    t: Vec<f64>,
    rev: Vec<f64>,
}

impl Knots {
    fn uniform(n: usize) -> Self {
        let t = (0..=n).map(|i| i as f64 / n as f64).collect();
        let rev = (0..=n).map(|i| (n - i) as f64 / n as f64).collect();
        Knots { t, rev }
    }

    fn from_times(t: Vec<f64>) -> Self {
        let n = t.len().saturating_sub(1);
        if n > 0 && t.iter().enumerate().all(|(i, &x)| x == i as f64 / n as f64) {
            return Knots::uniform(n);
        }
        let rev = t.iter().map(|x| 1.0 - x).collect();
        Knots { t, rev }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        let t = &self.t;
        if t.len() < 2 {
            return Err(format!("need at least 2 knots, got {}", t.len()));
        }
        if t[0] != 0.0 || t[t.len() - 1] != 1.0 {
            return Err("knot times must start at 0 and end at 1".into());
        }
        if t.iter().any(|x| !x.is_finite()) {
            return Err("non-finite knot time".into());
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err("knot times must be strictly increasing".into());
        }
        Ok(())
    }

    fn reversed(&self) -> Self {
        Knots {
            t: self.rev.iter().rev().copied().collect(),
            rev: self.t.iter().rev().copied().collect(),
        }
    }

    /// Knots of `a ∨ b`: `a` compressed to `[0, ½]`, `b` to `[½, 1]`.
    fn concat(a: &Knots, b: &Knots) -> Self {
        let mut t: Vec<f64> = a.t.iter().map(|x| 0.5 * x).collect();
        let mut rev: Vec<f64> = a.rev.iter().map(|x| 0.5 + 0.5 * x).collect();
        t.extend(b.t.iter().skip(1).map(|x| 0.5 + 0.5 * x));
        rev.extend(b.rev.iter().skip(1).map(|x| 0.5 * x));
        Knots { t, rev }
    }

    /// Interval index `i` and local parameter `u` with `t = tᵢ + u(tᵢ₊₁ − tᵢ)`.
    fn locate(&self, t: f64) -> (usize, f64) {
        let t = t.clamp(0.0, 1.0);
        let last = self.t.len() - 1;
        if t >= 1.0 {
            return (last - 1, 1.0);
        }
        let i = self.t.partition_point(|&x| x <= t) - 1;
        let (a, b) = (self.t[i], self.t[i + 1]);
        (i, (t - a) / (b - a))
    }
}

/// A finite plot of path space: knots joined by the space's interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    space: SpaceModel,
    knots: Knots,
    coords: Vec<f64>,
}

impl SampledPath {
    /// Builds a path from `(t, point)` knots. Cone points are coordinates in
    /// the cover ℂ and are used as given.
    pub fn new(space: SpaceModel, knots: Vec<(f64, Point)>) -> Result<Self> {
        let times = knots.iter().map(|(t, _)| *t).collect();
        let coords = knots.into_iter().flat_map(|(_, p)| p.into_coords()).collect();
        Self::from_flat(space, times, coords)
    }

    /// Uniformly timed knots `tᵢ = i/N`.
    pub fn from_points(space: SpaceModel, points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(PqError::InvalidPath(format!(
                "need at least 2 knots, got {}",
                points.len()
            )));
        }
        let knots = Knots::uniform(points.len() - 1);
        let coords = points.into_iter().flat_map(Point::into_coords).collect();
        Self::build(space, knots, coords)
    }

    pub fn from_flat(space: SpaceModel, times: Vec<f64>, coords: Vec<f64>) -> Result<Self> {
        Self::build(space, Knots::from_times(times), coords)
    }

    /// Samples `f` at `n + 1` uniform times.
    pub fn from_fn(space: SpaceModel, n: usize, f: impl Fn(f64) -> Point) -> Result<Self> {
        Self::from_points(space, (0..=n).map(|i| f(i as f64 / n as f64)).collect())
    }

    /// The constant path at `x` with two knots.
    pub fn constant(space: SpaceModel, x: &Point) -> Result<Self> {
        Self::from_points(space, vec![x.clone(), x.clone()])
    }

    fn build(space: SpaceModel, knots: Knots, coords: Vec<f64>) -> Result<Self> {
        knots.validate().map_err(PqError::InvalidPath)?;
        let d = space.dim();
        if coords.len() != knots.t.len() * d {
            return Err(PqError::InvalidPath(format!(
                "{} coordinates for {} knots of dimension {d}",
                coords.len(),
                knots.t.len()
            )));
        }
        for p in coords.chunks(d) {
            space.validate_point(p)?;
        }
        for i in 1..knots.t.len() {
            if !space.check_adjacent(&coords[(i - 1) * d..i * d], &coords[i * d..(i + 1) * d]) {
                return Err(PqError::InvalidPath(format!("knots {} and {i} are antipodal", i - 1)));
            }
        }
        Ok(SampledPath { space, knots, coords })
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn knot_count(&self) -> usize {
        self.knots.t.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.knots.t
    }

    pub fn knot(&self, i: usize) -> &[f64] {
        let d = self.space.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, &[f64])> {
        self.knots.t.iter().copied().zip(self.coords.chunks(self.space.dim()))
    }

    pub fn start(&self) -> Point {
        Point::new(self.knot(0).to_vec())
    }

    pub fn end(&self) -> Point {
        Point::new(self.knot(self.knot_count() - 1).to_vec())
    }

    pub fn ends(&self) -> (Point, Point) {
        (self.start(), self.end())
    }

    /// True when both ends coincide (modulo deck transformations on the cone).
    pub fn is_loop(&self) -> bool {
        self.space
            .same_point(self.knot(0), self.knot(self.knot_count() - 1), POINT_EQ_TOL)
    }

    /// `γ(t)`, with `t` clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> Point {
        let mut out = vec![0.0; self.space.dim()];
        self.eval_into(t, &mut out);
        Point::new(out)
    }

    pub(crate) fn eval_into(&self, t: f64, out: &mut [f64]) {
        let (i, u) = self.knots.locate(t);
        self.space.interpolate(self.knot(i), self.knot(i + 1), u, out);
    }

    /// Point on knot interval `i` at local parameter `u ∈ [0, 1]`.
    pub(crate) fn eval_segment(&self, i: usize, u: f64, out: &mut [f64]) {
        self.space.interpolate(self.knot(i), self.knot(i + 1), u, out);
    }

    /// `γ ∨ γ′`: `γ` on `[0, ½]`, `γ′` on `[½, 1]`.
    pub fn concat(&self, other: &SampledPath) -> Result<SampledPath> {
        if self.space != other.space {
            return Err(PqError::SpaceMismatch);
        }
        let d = self.space.dim();
        let end = self.knot(self.knot_count() - 1);
        if !self.space.same_point(end, other.knot(0), POINT_EQ_TOL) {
            return Err(PqError::EndpointMismatch);
        }
        let other = other.align_start_to(end);
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords[d..]);
        let knots = Knots::concat(&self.knots, &other.knots);
        knots.validate().map_err(PqError::InvalidPath)?;
        Ok(SampledPath {
            space: self.space,
            knots,
            coords,
        })
    }

    /// On the cone, applies the deck transformation that moves the start of
    /// `self` closest to `anchor`; identity elsewhere.
    pub(crate) fn align_start_to(&self, anchor: &[f64]) -> SampledPath {
        match self.space.cone_order() {
            Some(m) => {
                let (_, k) = cone_lift_near(m, anchor, self.knot(0));
                if k == 0 {
                    return self.clone();
                }
                let coords = self.coords.chunks(2).flat_map(|z| deck_rotate(m, k, z)).collect();
                SampledPath { coords, ..self.clone() }
            }
            None => self.clone(),
        }
    }

    /// `t ↦ γ(1 − t)`.
    pub fn reverse(&self) -> SampledPath {
        let d = self.space.dim();
        let coords = self.coords.chunks(d).rev().flatten().copied().collect();
        SampledPath {
            space: self.space,
            knots: self.knots.reversed(),
            coords,
        }
    }

    /// `γ ∘ λ` for the smashing function `λ` that is 0 on `[0, ε]`, 1 on
    /// `[1 − ε, 1]` and a smoothstep ramp in between. Realized by re-timing
    /// knots, so the traced curve is unchanged.
    pub fn smash_reparam(&self, eps: f64) -> Result<SampledPath> {
        let times = smash_times(&self.knots.t, eps)?;
        let d = self.space.dim();
        let n = self.knot_count();
        let mut coords = Vec::with_capacity((n + 2) * d);
        coords.extend_from_slice(self.knot(0));
        coords.extend_from_slice(&self.coords);
        coords.extend_from_slice(self.knot(n - 1));
        let knots = Knots::from_times(times);
        knots.validate().map_err(PqError::InvalidPath)?;
        Ok(SampledPath {
            space: self.space,
            knots,
            coords,
        })
    }

    /// Points of the path at the given times, flattened.
    pub(crate) fn sample_flat(&self, times: &[f64]) -> Vec<f64> {
        let d = self.space.dim();
        let mut out = vec![0.0; times.len() * d];
        for (t, o) in times.iter().zip(out.chunks_mut(d)) {
            self.eval_into(*t, o);
        }
        out
    }

    pub(crate) fn map_coords(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<SampledPath> {
        let coords = self.coords.chunks(self.space.dim()).flat_map(f).collect();
        Self::build(self.space, self.knots.clone(), coords)
    }
}

/// The smashing function: `λ(t) = s₃((t − ε)/(1 − 2ε))`, clamped, with
/// `s₃(u) = 3u² − 2u³`.
pub fn smash(t: f64, eps: f64) -> f64 {
    let u = ((t - eps) / (1.0 - 2.0 * eps)).clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Inverse of `smash` on `(0, 1)`: the unique `t ∈ (ε, 1 − ε)` with `λ(t) = y`.
fn smash_inverse(y: f64, eps: f64) -> f64 {
    let u = 0.5 - ((1.0 - 2.0 * y).asin() / 3.0).sin();
    eps + (1.0 - 2.0 * eps) * u
}

fn smash_times(times: &[f64], eps: f64) -> Result<Vec<f64>> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(PqError::BadEpsilon(eps));
    }
    let n = times.len();
    let mut out = Vec::with_capacity(n + 2);
    out.push(0.0);
    out.push(eps);
    out.extend(times[1..n - 1].iter().map(|&t| smash_inverse(t, eps)));
    out.push(1.0 - eps);
    out.push(1.0);
    Ok(out)
}

/// A finite plot of `Paths(Paths(X))`: row `s` is the path `γ_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledHomotopy {
    space: SpaceModel,
    rows: usize,
    cols: usize,
    knots: Knots,
    data: Vec<f64>,
    fixed_ends: bool,
}

impl SampledHomotopy {
    /// Grid with uniform column times.
    pub fn new(space: SpaceModel, grid: Vec<Vec<Point>>, fixed_ends: bool) -> Result<Self> {
        let cols = grid.first().map_or(0, Vec::len);
        if cols < 2 {
            return Err(PqError::DegenerateGrid("a homotopy row needs at least 2 points".into()));
        }
        if grid.iter().any(|r| r.len() != cols) {
            return Err(PqError::InvalidHomotopy("rows have different lengths".into()));
        }
        let rows = grid.len();
        let data = grid.into_iter().flatten().flat_map(Point::into_coords).collect();
        Self::build(space, rows, Knots::uniform(cols - 1), data, fixed_ends)
    }

    /// Grid with explicit column times.
    pub fn with_times(
        space: SpaceModel,
        times: Vec<f64>,
        rows: usize,
        data: Vec<f64>,
        fixed_ends: bool,
    ) -> Result<Self> {
        Self::build(space, rows, Knots::from_times(times), data, fixed_ends)
    }

    /// `(s, t) ↦ f(s, t)` sampled on a uniform `(S+1) × (T+1)` grid.
    pub fn from_fn(
        space: SpaceModel,
        s_steps: usize,
        t_steps: usize,
        fixed_ends: bool,
        f: impl Fn(f64, f64) -> Point,
    ) -> Result<Self> {
        if s_steps == 0 || t_steps == 0 {
            return Err(PqError::DegenerateGrid("S and T must be ≥ 1".into()));
        }
        let mut data = Vec::with_capacity((s_steps + 1) * (t_steps + 1) * space.dim());
        for i in 0..=s_steps {
            for j in 0..=t_steps {
                data.extend(f(i as f64 / s_steps as f64, j as f64 / t_steps as f64).into_coords());
            }
        }
        Self::build(space, s_steps + 1, Knots::uniform(t_steps), data, fixed_ends)
    }

    fn build(space: SpaceModel, rows: usize, knots: Knots, data: Vec<f64>, fixed_ends: bool) -> Result<Self> {
        if rows < 2 {
            return Err(PqError::DegenerateGrid(
                "a homotopy needs S ≥ 1 (at least 2 rows)".into(),
            ));
        }
        knots.validate().map_err(PqError::InvalidHomotopy)?;
        let cols = knots.t.len();
        let d = space.dim();
        if data.len() != rows * cols * d {
            return Err(PqError::InvalidHomotopy(format!(
                "{} coordinates for a {rows}×{cols} grid of dimension {d}",
                data.len()
            )));
        }
        for p in data.chunks(d) {
            space.validate_point(p)?;
        }
        let h = SampledHomotopy {
            space,
            rows,
            cols,
            knots,
            data,
            fixed_ends,
        };
        for i in 0..rows {
            for j in 1..cols {
                if !space.check_adjacent(h.point(i, j - 1), h.point(i, j)) {
                    return Err(PqError::InvalidHomotopy(format!(
                        "row {i}: knots {} and {j} are antipodal",
                        j - 1
                    )));
                }
            }
        }
        if fixed_ends {
            for i in 1..rows {
                for j in [0, cols - 1] {
                    if crate::spaces::dist(h.point(i, j), h.point(0, j)) > POINT_EQ_TOL {
                        return Err(PqError::InvalidHomotopy(format!(
                            "fixed_ends set but column {j} moves at row {i}"
                        )));
                    }
                }
            }
        }
        Ok(h)
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    /// Number of rows, `S + 1`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns, `T + 1`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn times(&self) -> &[f64] {
        &self.knots.t
    }

    pub fn fixed_ends(&self) -> bool {
        self.fixed_ends
    }

    /// Whether the column times are `j / T`.
    pub fn has_uniform_times(&self) -> bool {
        self.knots == Knots::uniform(self.cols - 1)
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> &[f64] {
        let d = self.space.dim();
        let k = (i * self.cols + j) * d;
        &self.data[k..k + d]
    }

    /// Row `s` as a path.
    pub fn row_path(&self, i: usize) -> SampledPath {
        let d = self.space.dim();
        let k = i * self.cols * d;
        SampledPath {
            space: self.space,
            knots: self.knots.clone(),
            coords: self.data[k..k + self.cols * d].to_vec(),
        }
    }

    /// Reflects the grid along `t`: every row is reversed.
    pub fn reverse_t(&self) -> SampledHomotopy {
        let d = self.space.dim();
        let data = self
            .data
            .chunks(self.cols * d)
            .flat_map(|row| row.chunks(d).rev().flatten().copied().collect::<Vec<_>>())
            .collect();
        SampledHomotopy {
            knots: self.knots.reversed(),
            data,
            ..self.clone()
        }
    }

    /// Reflects the grid along `s`: rows in reverse order.
    pub fn reverse_s(&self) -> SampledHomotopy {
        let d = self.space.dim();
        let data = self.data.chunks(self.cols * d).rev().flatten().copied().collect();
        SampledHomotopy { data, ..self.clone() }
    }

    /// Applies the smashing reparametrization to every row.
    pub fn smash_rows(&self, eps: f64) -> Result<SampledHomotopy> {
        let times = smash_times(&self.knots.t, eps)?;
        let d = self.space.dim();
        let mut data = Vec::with_capacity(self.rows * (self.cols + 2) * d);
        for i in 0..self.rows {
            data.extend_from_slice(self.point(i, 0));
            for j in 0..self.cols {
                data.extend_from_slice(self.point(i, j));
            }
            data.extend_from_slice(self.point(i, self.cols - 1));
        }
        Self::build(self.space, self.rows, Knots::from_times(times), data, self.fixed_ends)
    }

    pub(crate) fn map_coords(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<SampledHomotopy> {
        let data = self.data.chunks(self.space.dim()).flat_map(f).collect();
        Self::build(self.space, self.rows, self.knots.clone(), data, self.fixed_ends)
    }
}

/// The pointwise interpolation from `γ` (row 0) to `γ′` (row S), both sampled
/// on the union of their knot times so that neither path is altered.
pub fn linear_homotopy(a: &SampledPath, b: &SampledPath, s_steps: usize) -> Result<SampledHomotopy> {
    linear_homotopy_with_columns(a, b, s_steps, 0)
}

/// As [`linear_homotopy`], with the uniform times `j / min_cols` added to the
/// columns. Extra columns sit on the existing arcs, so the paths are unchanged
/// while curved spaces gain quadrature resolution.
pub fn linear_homotopy_with_columns(
    a: &SampledPath,
    b: &SampledPath,
    s_steps: usize,
    min_cols: usize,
) -> Result<SampledHomotopy> {
    if a.space != b.space {
        return Err(PqError::SpaceMismatch);
    }
    if s_steps == 0 {
        return Err(PqError::DegenerateGrid("S must be ≥ 1".into()));
    }
    let space = a.space;
    let b = b.align_start_to(a.knot(0));
    let same = |p: &[f64], q: &[f64]| crate::spaces::dist(p, q) <= POINT_EQ_TOL;
    if !same(a.knot(0), b.knot(0)) || !same(a.knot(a.knot_count() - 1), b.knot(b.knot_count() - 1)) {
        return Err(PqError::EndsMismatch);
    }
    let mut times = merge_times(&a.knots.t, &b.knots.t);
    if min_cols > 0 {
        times = merge_times(&times, &Knots::uniform(min_cols).t);
    }
    let pa = a.sample_flat(&times);
    let pb = b.sample_flat(&times);
    let d = space.dim();
    if space.is_sphere() {
        for (p, q) in pa.chunks(d).zip(pb.chunks(d)) {
            if !space.check_adjacent(p, q) {
                return Err(PqError::AntipodalInterpolation);
            }
        }
    }
    let cols = times.len();
    let mut data = vec![0.0; (s_steps + 1) * cols * d];
    for i in 0..=s_steps {
        let s = i as f64 / s_steps as f64;
        for j in 0..cols {
            let k = (i * cols + j) * d;
            space.interpolate(&pa[j * d..(j + 1) * d], &pb[j * d..(j + 1) * d], s, &mut data[k..k + d]);
        }
    }
    // Ends agree only up to POINT_EQ_TOL; pin the interior rows to row 0's ends.
    for i in 1..s_steps {
        for j in [0, cols - 1] {
            let (head, tail) = data.split_at_mut((i * cols + j) * d);
            tail[..d].copy_from_slice(&head[j * d..(j + 1) * d]);
        }
    }
    let fixed = s_steps == 1
        || (0..=s_steps).all(|i| {
            [0, cols - 1].iter().all(|&j| {
                crate::spaces::dist(&data[(i * cols + j) * d..][..d], &data[j * d..(j + 1) * d]) <= POINT_EQ_TOL
            })
        });
    SampledHomotopy::build(space, s_steps + 1, Knots::from_times(times), data, fixed)
}

/// `σ ∗ σ′ : s ↦ γ_s ∨ γ′_s`.
pub fn concat_homotopy(a: &SampledHomotopy, b: &SampledHomotopy) -> Result<SampledHomotopy> {
    if a.space != b.space {
        return Err(PqError::SpaceMismatch);
    }
    if a.rows != b.rows {
        return Err(PqError::RowCountMismatch(a.rows, b.rows));
    }
    let d = a.space.dim();
    for i in 0..a.rows {
        if crate::spaces::dist(a.point(i, a.cols - 1), b.point(i, 0)) > POINT_EQ_TOL {
            return Err(PqError::RowEndpointMismatch(i));
        }
    }
    let knots = Knots::concat(&a.knots, &b.knots);
    knots.validate().map_err(PqError::InvalidHomotopy)?;
    let cols = a.cols + b.cols - 1;
    let mut data = Vec::with_capacity(a.rows * cols * d);
    for i in 0..a.rows {
        data.extend_from_slice(&a.data[i * a.cols * d..(i + 1) * a.cols * d]);
        data.extend_from_slice(&b.data[(i * b.cols + 1) * d..(i + 1) * b.cols * d]);
    }
    Ok(SampledHomotopy {
        space: a.space,
        rows: a.rows,
        cols,
        knots,
        data,
        fixed_ends: a.fixed_ends && b.fixed_ends,
    })
}

/// Sorted union of two knot-time lists (both contain 0 and 1).
pub(crate) fn merge_times(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b).copied().collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|x, y| (*x - *y).abs() <= 1e-14);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::dist;

    fn plane() -> SpaceModel {
        SpaceModel::euclidean(1).unwrap()
    }

    fn pt(x: f64, y: f64) -> Point {
        Point::new(vec![x, y])
    }

    fn line_integral_xdy(g: &SampledPath) -> f64 {
        // Exact for polylines: x is affine on each segment.
        g.knots()
            .zip(g.knots().skip(1))
            .map(|((_, p), (_, q))| 0.5 * (p[0] + q[0]) * (q[1] - p[1]))
            .sum()
    }

    #[test]
    fn eval_examples() {
        let g = SampledPath::new(plane(), vec![(0.0, pt(0.0, 0.0)), (1.0, pt(2.0, 4.0))]).unwrap();
        assert_eq!(g.eval(0.5), pt(1.0, 2.0));
        assert_eq!(g.eval(0.0), g.start());
        assert_eq!(g.eval(-3.0), g.start());
        assert_eq!(g.eval(7.0), g.end());
        let s = SpaceModel::sphere2();
        let arc = SampledPath::from_points(
            s,
            vec![Point::new(vec![1.0, 0.0, 0.0]), Point::new(vec![0.0, 1.0, 0.0])],
        )
        .unwrap();
        let m = arc.eval(0.5);
        let r = 0.5_f64.sqrt();
        assert!(dist(m.coords(), &[r, r, 0.0]) < 1e-15);
    }

    #[test]
    fn constructor_rejects_bad_knots() {
        let s = plane();
        assert!(SampledPath::new(s, vec![(0.0, pt(0.0, 0.0))]).is_err());
        assert!(SampledPath::new(s, vec![(0.1, pt(0.0, 0.0)), (1.0, pt(1.0, 0.0))]).is_err());
        assert!(SampledPath::new(
            s,
            vec![
                (0.0, pt(0.0, 0.0)),
                (0.5, pt(1.0, 0.0)),
                (0.5, pt(1.0, 0.0)),
                (1.0, pt(1.0, 1.0))
            ]
        )
        .is_err());
        let sphere = SpaceModel::sphere2();
        let e = SampledPath::from_points(
            sphere,
            vec![Point::new(vec![0.0, 0.0, 1.0]), Point::new(vec![0.0, 0.0, -1.0])],
        );
        assert!(matches!(e, Err(PqError::InvalidPath(_))));
    }

    #[test]
    fn concat_examples() {
        let x = pt(1.0, 2.0);
        let c = SampledPath::constant(plane(), &x).unwrap();
        let cc = c.concat(&c).unwrap();
        assert!(cc.knots().all(|(_, p)| p == x.coords()));
        let a = SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(1.0, 0.0)]).unwrap();
        let b = SampledPath::from_points(plane(), vec![pt(1.0, 0.0), pt(1.0, 1.0)]).unwrap();
        let ab = a.concat(&b).unwrap();
        assert_eq!(ab.ends(), (a.start(), b.end()));
        assert_eq!(line_integral_xdy(&ab), line_integral_xdy(&a) + line_integral_xdy(&b));
        assert_eq!(line_integral_xdy(&ab), 1.0);
        assert_eq!(b.concat(&b), Err(PqError::EndpointMismatch));
    }

    #[test]
    fn reverse_examples() {
        let g = SampledPath::new(
            plane(),
            vec![
                (0.0, pt(0.0, 0.0)),
                (0.1, pt(0.3, 0.7)),
                (0.7, pt(1.0, -1.0)),
                (1.0, pt(2.0, 2.0)),
            ],
        )
        .unwrap();
        assert_eq!(g.reverse().reverse(), g);
        assert_eq!(g.reverse().ends(), (g.end(), g.start()));
        assert!((line_integral_xdy(&g.reverse()) + line_integral_xdy(&g)).abs() < 1e-15);
    }

    #[test]
    fn smash_examples() {
        let g = SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(1.0, 0.5), pt(1.0, 2.0)]).unwrap();
        let sg = g.smash_reparam(0.1).unwrap();
        assert_eq!(sg.ends(), g.ends());
        assert!((line_integral_xdy(&sg) - line_integral_xdy(&g)).abs() < 1e-12);
        for k in 0..=20 {
            let t = k as f64 / 20.0;
            assert!(dist(sg.eval(t).coords(), g.eval(smash(t, 0.1)).coords()) < 1e-12 || t > 0.0);
        }
        let c = SampledPath::constant(plane(), &pt(3.0, 3.0)).unwrap();
        let sc = c.smash_reparam(0.25).unwrap();
        for k in 0..=10 {
            assert_eq!(sc.eval(k as f64 / 10.0), pt(3.0, 3.0));
        }
        assert_eq!(g.smash_reparam(0.5), Err(PqError::BadEpsilon(0.5)));
        assert_eq!(g.smash_reparam(0.0), Err(PqError::BadEpsilon(0.0)));
    }

    #[test]
    fn smashed_knots_sit_on_the_composed_path() {
        let g =
            SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(1.0, 0.5), pt(1.0, 2.0), pt(3.0, 1.0)]).unwrap();
        let eps = 0.15;
        let sg = g.smash_reparam(eps).unwrap();
        for (t, p) in sg.knots() {
            assert!(dist(p, g.eval(smash(t, eps)).coords()) < 1e-12);
        }
        for w in (0..=100).map(|k| k as f64 / 100.0).collect::<Vec<_>>().windows(2) {
            assert!(smash(w[1], eps) >= smash(w[0], eps));
        }
    }

    #[test]
    fn linear_homotopy_examples() {
        let g = SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(1.0, 0.0)]).unwrap();
        let h = linear_homotopy(&g, &g, 4).unwrap();
        for i in 0..h.rows() {
            assert_eq!(
                h.row_path(i).sample_flat(&[0.0, 0.3, 1.0]),
                g.sample_flat(&[0.0, 0.3, 1.0])
            );
        }
        let detour =
            SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(0.0, 1.0), pt(1.0, 1.0), pt(1.0, 0.0)]).unwrap();
        let h = linear_homotopy(&g, &detour, 5).unwrap();
        assert!(h.fixed_ends());
        assert_eq!(h.row_path(0).sample_flat(h.times()), g.sample_flat(h.times()));
        assert_eq!(h.row_path(5).sample_flat(h.times()), detour.sample_flat(h.times()));
        let other = SampledPath::from_points(plane(), vec![pt(0.0, 0.0), pt(2.0, 0.0)]).unwrap();
        assert_eq!(linear_homotopy(&g, &other, 3), Err(PqError::EndsMismatch));
    }

    #[test]
    fn linear_homotopy_detects_antipodal_interpolation() {
        let s = SpaceModel::sphere2();
        let n = Point::new(vec![0.0, 0.0, 1.0]);
        let south = Point::new(vec![0.0, 0.0, -1.0]);
        let e = Point::new(vec![1.0, 0.0, 0.0]);
        let w = Point::new(vec![-1.0, 0.0, 0.0]);
        let a = SampledPath::from_points(s, vec![n.clone(), e, south.clone()]).unwrap();
        let b = SampledPath::from_points(s, vec![n, w, south]).unwrap();
        assert_eq!(linear_homotopy(&a, &b, 4), Err(PqError::AntipodalInterpolation));
    }

    #[test]
    fn concat_homotopy_rows_obey_concat() {
        let s = plane();
        let a = SampledHomotopy::from_fn(s, 3, 4, false, |u, t| pt(t, u)).unwrap();
        let b = SampledHomotopy::from_fn(s, 3, 2, false, |u, t| pt(1.0 + t, u + t * t)).unwrap();
        let ab = concat_homotopy(&a, &b).unwrap();
        for i in 0..ab.rows() {
            let row = ab.row_path(i);
            assert_eq!(row, a.row_path(i).concat(&b.row_path(i)).unwrap());
            assert_eq!(row.ends(), (a.row_path(i).start(), b.row_path(i).end()));
        }
        let c = SampledHomotopy::from_fn(s, 2, 2, false, |u, t| pt(1.0 + t, u)).unwrap();
        assert_eq!(concat_homotopy(&a, &c), Err(PqError::RowCountMismatch(4, 3)));
        let d = SampledHomotopy::from_fn(s, 3, 2, false, |u, t| pt(5.0 + t, u)).unwrap();
        assert_eq!(concat_homotopy(&a, &d), Err(PqError::RowEndpointMismatch(0)));
        let k = SampledHomotopy::from_fn(s, 3, 2, true, |_, t| pt(t, 0.0)).unwrap();
        let kk = concat_homotopy(&k.map_coords(|p| vec![p[0] - 1.0, p[1]]).unwrap(), &k).unwrap();
        assert!(kk.fixed_ends());
    }

    #[test]
    fn homotopy_reflections() {
        let s = plane();
        let h = SampledHomotopy::from_fn(s, 3, 5, false, |u, t| pt(t * t, u + t)).unwrap();
        assert_eq!(h.reverse_t().reverse_t(), h);
        assert_eq!(h.reverse_s().reverse_s(), h);
        assert_eq!(
            h.reverse_t().row_path(1).ends(),
            (h.row_path(1).end(), h.row_path(1).start())
        );
        assert_eq!(h.reverse_s().row_path(0), h.row_path(3));
    }

    #[test]
    fn degenerate_homotopies_rejected() {
        let s = plane();
        assert!(matches!(
            SampledHomotopy::new(s, vec![vec![pt(0.0, 0.0), pt(1.0, 0.0)]], false),
            Err(PqError::DegenerateGrid(_))
        ));
        assert!(matches!(
            SampledHomotopy::new(
                s,
                vec![vec![pt(0.0, 0.0), pt(1.0, 0.0)], vec![pt(0.0, 1.0), pt(1.0, 0.0)]],
                true
            ),
            Err(PqError::InvalidHomotopy(_))
        ));
    }

    #[test]
    fn cone_concat_aligns_sheets() {
        let s = SpaceModel::cone(4).unwrap();
        let a = SampledPath::from_points(s, vec![Point::new(vec![1.0, 0.0]), Point::new(vec![0.0, 2.0])]).unwrap();
        assert_eq!(a.knot(1), &[0.0, 2.0]);
        // Starts at a deck image of a's end; concat rotates it into place.
        let b = SampledPath::from_points(s, vec![Point::new(vec![2.0, 0.0]), Point::new(vec![1.0, 0.0])]).unwrap();
        let ab = a.concat(&b).unwrap();
        assert!(dist(ab.knot(1), &[0.0, 2.0]) < 1e-15);
        assert!(dist(ab.knot(2), &[0.0, 1.0]) < 1e-15);
    }
}
