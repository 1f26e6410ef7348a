//! Period groups, phases, the cocycle φ and morphisms of the prequantum
//! groupoid stored in trivialized form `(src, phase, dst)`.
//!
//! Sign conventions, fixed once here:
//! * `φ(γ, γ′)` is the pairing over a fixed-ends homotopy whose first row is
//!   `γ` and last row is `γ′`; on exact spaces it equals `∫_γ α − ∫_{γ′} α`.
//! * The isotropy phase of a loop `ℓ` is the pairing over a contraction whose
//!   first row is `ℓ`; on exact spaces it equals `∫_ℓ α`.
//! * The class of a path is `φ(γ, ref(γ(0), γ(1)))`.

use std::f64::consts::PI;

use crate::error::{PqError, Result};
use crate::integrator::{
    curl_report, line_integral, pairing, sphere_sweep_integral, CurlReport, PathFamily, QuadratureConfig,
};
use crate::paths::{linear_homotopy_with_columns, merge_times, SampledHomotopy, SampledPath};
use crate::shapes::{cap_contraction, latitude_loop};
use crate::spaces::{cone_lift_near, deck_rotate, dot, Point, SpaceModel, ANTIPODAL_TOL, POINT_EQ_TOL};

/// Default coefficient bound for reductions in a generated group.
pub const DEFAULT_COEFFICIENT_BOUND: u64 = 1_000_000;

/// Tolerance used to decide which rows of a supplied homotopy carry which path.
const ROW_MATCH_TOL: f64 = 1e-6;

/// Subgroup of ℝ generated by the periods of ω.
#[derive(Debug, Clone, PartialEq)]
pub enum PeriodGroup {
    Zero,
    Cyclic(f64),
    /// Generators sorted ascending; reductions search integer coefficients
    /// with `|nᵢ| ≤ bound`.
    Generated {
        gens: Vec<f64>,
        bound: u64,
    },
}

impl PeriodGroup {
    pub fn cyclic(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(PqError::InvalidGroup(format!(
                "cyclic generator must be positive, got {a}"
            )));
        }
        Ok(PeriodGroup::Cyclic(a))
    }

    pub fn generated(gens: Vec<f64>) -> Result<Self> {
        Self::generated_with_bound(gens, DEFAULT_COEFFICIENT_BOUND)
    }

    pub fn generated_with_bound(mut gens: Vec<f64>, bound: u64) -> Result<Self> {
        if gens.len() < 2 {
            return Err(PqError::InvalidGroup(
                "a generated group needs at least 2 generators".into(),
            ));
        }
        if gens.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
            return Err(PqError::InvalidGroup("generators must be positive and finite".into()));
        }
        if bound == 0 {
            return Err(PqError::InvalidGroup("coefficient bound must be ≥ 1".into()));
        }
        gens.sort_by(f64::total_cmp);
        Ok(PeriodGroup::Generated { gens, bound })
    }

    /// The period group of a built-in space with the exact sphere period.
    pub fn pinned(space: &SpaceModel) -> Self {
        if space.is_sphere() {
            PeriodGroup::Cyclic(2.0 * PI * space.normalization())
        } else {
            PeriodGroup::Zero
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PeriodGroup::Zero => "zero",
            PeriodGroup::Cyclic(_) => "cyclic",
            PeriodGroup::Generated { .. } => "generated",
        }
    }

    /// Pairs of generators whose ratio is within `1e−9` of a fraction `p/q`
    /// with `q ≤ 1000`; such groups are closer to cyclic than they look.
    pub fn near_commensurable_pairs(&self) -> Vec<(usize, usize, i64, i64)> {
        let PeriodGroup::Generated { gens, .. } = self else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                let ratio = gens[j] / gens[i];
                for q in 1..=1000_i64 {
                    let p = (ratio * q as f64).round();
                    if (ratio - p / q as f64).abs() < 1e-9 {
                        out.push((i, j, p as i64, q));
                        break;
                    }
                }
            }
        }
        out
    }

    /// Canonical representative of `x` modulo the group.
    pub fn reduce(&self, x: f64) -> f64 {
        let a = match self {
            PeriodGroup::Zero => return x,
            PeriodGroup::Cyclic(a) => *a,
            PeriodGroup::Generated { gens, .. } => gens[0],
        };
        let r = x.rem_euclid(a);
        if r >= a {
            0.0
        } else {
            r
        }
    }

    /// Distance from `x` to the group (bounded search for generated groups).
    pub fn distance_to_group(&self, x: f64) -> f64 {
        match self {
            PeriodGroup::Zero => x.abs(),
            PeriodGroup::Cyclic(a) => {
                let r = x.rem_euclid(*a);
                r.min(a - r).abs()
            }
            PeriodGroup::Generated { gens, bound } => generated_distance(gens, *bound, x),
        }
    }
}

fn generated_distance(gens: &[f64], bound: u64, x: f64) -> f64 {
    let g1 = gens[0];
    let n1_max = bound as f64;
    let nearest = |r: f64| {
        let n1 = (r / g1).round().clamp(-n1_max, n1_max);
        (r - n1 * g1).abs()
    };
    if gens.len() == 2 {
        let b = bound as i64;
        let g2 = gens[1];
        return (-b..=b)
            .map(|n2| nearest(x - n2 as f64 * g2))
            .fold(f64::INFINITY, f64::min);
    }
    // More generators: every coefficient beyond the first is capped at 10.
    let b = bound.min(10) as i64;
    let rest = &gens[1..];
    let mut best = f64::INFINITY;
    let mut coeffs = vec![-b; rest.len()];
    loop {
        let shift: f64 = coeffs.iter().zip(rest).map(|(n, g)| *n as f64 * g).sum();
        best = best.min(nearest(x - shift));
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return best;
            }
            coeffs[k] += 1;
            if coeffs[k] <= b {
                break;
            }
            coeffs[k] = -b;
            k += 1;
        }
    }
}

/// An element of `ℝ / P`, stored by its canonical representative.
#[derive(Debug, Clone, PartialEq)]
pub struct Phase {
    value: f64,
    group: PeriodGroup,
}

impl Phase {
    pub fn new(value: f64, group: PeriodGroup) -> Result<Self> {
        if !value.is_finite() {
            return Err(PqError::NonFinite("phase"));
        }
        Ok(Phase {
            value: group.reduce(value),
            group,
        })
    }

    pub fn zero(group: PeriodGroup) -> Self {
        Phase { value: 0.0, group }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn group(&self) -> &PeriodGroup {
        &self.group
    }

    fn same_group(&self, other: &Phase) -> Result<()> {
        if self.group == other.group {
            Ok(())
        } else {
            Err(PqError::GroupMismatch)
        }
    }

    pub fn checked_add(&self, other: &Phase) -> Result<Phase> {
        self.same_group(other)?;
        Phase::new(self.value + other.value, self.group.clone())
    }

    pub fn checked_sub(&self, other: &Phase) -> Result<Phase> {
        self.same_group(other)?;
        Phase::new(self.value - other.value, self.group.clone())
    }

    pub fn neg(&self) -> Phase {
        Phase {
            value: self.group.reduce(-self.value),
            group: self.group.clone(),
        }
    }

    /// Distance between the two classes.
    pub fn distance(&self, other: &Phase) -> Result<f64> {
        self.same_group(other)?;
        Ok(self.group.distance_to_group(self.value - other.value))
    }

    /// Whether `self − other` lies within `tol` of the group. For generated
    /// groups "not equal" means "not reducible within the coefficient bound".
    pub fn approx_eq(&self, other: &Phase, tol: f64) -> Result<bool> {
        Ok(self.distance(other)? <= tol)
    }
}

/// How reference paths between two points are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceScheme {
    /// Straight segments (ℝ²ⁿ and the cone cover).
    Straight,
    /// Shortest great-circle arcs (S²).
    Geodesic,
}

impl ReferenceScheme {
    pub fn for_space(space: &SpaceModel) -> Self {
        if space.is_sphere() {
            ReferenceScheme::Geodesic
        } else {
            ReferenceScheme::Straight
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ReferenceScheme::Straight => "straight",
            ReferenceScheme::Geodesic => "geodesic",
        }
    }

    /// `ref(x, x′)` with `n` equal pieces. On the cone `x′` is taken in the
    /// cover as given.
    pub fn path(&self, space: &SpaceModel, x: &[f64], y: &[f64], n: usize) -> Result<SampledPath> {
        if (*self == ReferenceScheme::Geodesic) != space.is_sphere() {
            return Err(PqError::InvalidSpace(format!(
                "{} references do not apply to {}",
                self.name(),
                space.name()
            )));
        }
        space.validate_point(x)?;
        space.validate_point(y)?;
        if space.is_sphere() && dot(x, y) <= -1.0 + ANTIPODAL_TOL {
            return Err(PqError::AntipodalPoints);
        }
        let n = n.max(1);
        let mut coords = Vec::with_capacity((n + 1) * x.len());
        let mut buf = vec![0.0; x.len()];
        for k in 0..=n {
            space.interpolate(x, y, k as f64 / n as f64, &mut buf);
            coords.extend_from_slice(&buf);
        }
        let times = (0..=n).map(|k| k as f64 / n as f64).collect();
        SampledPath::from_flat(*space, times, coords)
    }
}

/// How a morphism's phase is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// Relative to the reference path between its ends.
    Reference,
    /// The line integral of the chosen primitive (exact spaces only).
    Primitive,
}

impl Gauge {
    pub fn name(&self) -> &'static str {
        match self {
            Gauge::Reference => "reference",
            Gauge::Primitive => "primitive",
        }
    }
}

/// A morphism `(src, phase, dst)` of the prequantum groupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Morphism {
    pub src: Point,
    pub dst: Point,
    pub phase: Phase,
    pub space: SpaceModel,
    pub gauge: Gauge,
}

impl Morphism {
    pub fn new(space: SpaceModel, src: Point, dst: Point, phase: Phase, gauge: Gauge) -> Result<Self> {
        space.validate_point(src.coords())?;
        space.validate_point(dst.coords())?;
        if gauge == Gauge::Primitive && !space.has_primitive() {
            return Err(PqError::NoPrimitive);
        }
        Ok(Morphism {
            src,
            dst,
            phase,
            space,
            gauge,
        })
    }
}

/// Raw estimate of the period group.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodEstimate {
    pub group: PeriodGroup,
    /// Raw quadrature value of the generator, when one was computed.
    pub raw: Option<f64>,
    /// `|I_h − I_{2h}| / 3`.
    pub error_bound: Option<f64>,
}

/// Period group of a built-in space. On S² the generator is the full sphere
/// sweep at `(s_steps, t_steps)`, reported raw with a Richardson error bound.
pub fn detect_periods(
    space: &SpaceModel,
    s_steps: usize,
    t_steps: usize,
    cfg: &QuadratureConfig,
) -> Result<PeriodEstimate> {
    if !space.is_sphere() {
        return Ok(PeriodEstimate {
            group: PeriodGroup::Zero,
            raw: None,
            error_bound: None,
        });
    }
    let fine = sphere_sweep_integral(space, s_steps, t_steps, cfg)?;
    let coarse = sphere_sweep_integral(space, (s_steps / 2).max(1), (t_steps / 2).max(3), cfg)?;
    Ok(PeriodEstimate {
        group: PeriodGroup::cyclic(fine.abs())?,
        raw: Some(fine),
        error_bound: Some((fine - coarse).abs() / 3.0),
    })
}

/// `α(x′)·ẋ′ − ṫ − α(x)·ẋ` for a plot `s ↦ (x(s), t(s), x′(s))`, with central
/// differences of step `ds`.
pub fn exact_lambda_eval(
    space: &SpaceModel,
    plot: impl Fn(f64) -> (Point, f64, Point),
    s: f64,
    ds: f64,
) -> Result<f64> {
    if !space.has_primitive() {
        return Err(PqError::NoPrimitive);
    }
    let (x0, t0, y0) = plot(s - ds);
    let (x, _, y) = plot(s);
    let (x1, t1, y1) = plot(s + ds);
    let vel = |a: &Point, b: &Point| -> Vec<f64> {
        a.coords()
            .iter()
            .zip(b.coords())
            .map(|(p, q)| (q - p) / (2.0 * ds))
            .collect()
    };
    let value =
        space.alpha(y.coords(), &vel(&y0, &y1)) - (t1 - t0) / (2.0 * ds) - space.alpha(x.coords(), &vel(&x0, &x1));
    if value.is_finite() {
        Ok(value)
    } else {
        Err(PqError::Numeric("λ evaluation is not finite".into()))
    }
}

/// Result of a surjectivity witness search.
#[derive(Debug, Clone)]
pub struct Witness {
    pub theta: f64,
    pub phase: f64,
    pub loop_path: SampledPath,
    pub contraction: SampledHomotopy,
}

/// Sides and rows used by witness loops and their cap contractions.
pub const WITNESS_SIDES: usize = 1024;
pub const WITNESS_ROWS: usize = 128;

/// Computation context: a space, its period group, the reference scheme and
/// the quadrature settings.
#[derive(Debug, Clone)]
pub struct Prequantum {
    pub space: SpaceModel,
    pub periods: PeriodGroup,
    pub scheme: ReferenceScheme,
    pub cfg: QuadratureConfig,
}

impl Prequantum {
    /// Context with the exact period group of the space.
    pub fn pinned(space: SpaceModel) -> Self {
        Self::with_periods(space, PeriodGroup::pinned(&space))
    }

    pub fn with_periods(space: SpaceModel, periods: PeriodGroup) -> Self {
        Prequantum {
            space,
            periods,
            scheme: ReferenceScheme::for_space(&space),
            cfg: QuadratureConfig::default(),
        }
    }

    pub fn with_config(mut self, cfg: QuadratureConfig) -> Self {
        self.cfg = cfg;
        self
    }

    pub fn phase(&self, value: f64) -> Result<Phase> {
        Phase::new(value, self.periods.clone())
    }

    fn check_space(&self, space: &SpaceModel) -> Result<()> {
        if *space == self.space {
            Ok(())
        } else {
            Err(PqError::SpaceMismatch)
        }
    }

    /// Extra uniform columns for homotopies built on the fly; only curved
    /// spaces need them.
    fn columns(&self) -> usize {
        if self.space.is_sphere() {
            self.cfg.rows
        } else {
            0
        }
    }

    /// Raw (unreduced) value of `φ(γ, γ′)`. A supplied homotopy may run in
    /// either direction; its orientation is read off its boundary rows.
    pub fn cocycle_raw(&self, a: &SampledPath, b: &SampledPath, sigma: Option<&SampledHomotopy>) -> Result<f64> {
        self.check_space(a.space())?;
        self.check_space(b.space())?;
        let (xa, ya) = (a.knot(0), a.knot(a.knot_count() - 1));
        let (xb, yb) = (b.knot(0), b.knot(b.knot_count() - 1));
        if !self.space.same_point(xa, xb, POINT_EQ_TOL) || !self.space.same_point(ya, yb, POINT_EQ_TOL) {
            return Err(PqError::EndsMismatch);
        }
        match sigma {
            None => {
                let h = linear_homotopy_with_columns(a, b, self.cfg.rows, self.columns())?;
                pairing(&h, &self.cfg)
            }
            Some(h) => {
                self.check_space(h.space())?;
                let last = h.rows() - 1;
                if !columns_fixed(h) {
                    return Err(PqError::InvalidHomotopy(
                        "a cocycle homotopy must keep its ends fixed".into(),
                    ));
                }
                let sign = if row_matches(h, 0, a) && row_matches(h, last, b) {
                    1.0
                } else if row_matches(h, 0, b) && row_matches(h, last, a) {
                    -1.0
                } else {
                    return Err(PqError::InvalidHomotopy(
                        "homotopy does not connect the two paths".into(),
                    ));
                };
                Ok(sign * pairing(h, &self.cfg)?)
            }
        }
    }

    /// `φ(γ, γ′)` in the context's period group.
    pub fn cocycle_phi(&self, a: &SampledPath, b: &SampledPath, sigma: Option<&SampledHomotopy>) -> Result<Phase> {
        self.phase(self.cocycle_raw(a, b, sigma)?)
    }

    /// Reference path between the ends of `γ` with `n` pieces.
    pub fn reference(&self, x: &[f64], y: &[f64], n: usize) -> Result<SampledPath> {
        self.scheme.path(&self.space, x, y, n)
    }

    /// Raw class phase `φ(γ, ref(γ(0), γ(1)))`.
    pub fn class_raw(&self, g: &SampledPath) -> Result<f64> {
        self.check_space(g.space())?;
        let r = self.reference(g.knot(0), g.knot(g.knot_count() - 1), 1)?;
        self.cocycle_raw(g, &r, None)
    }

    pub fn class_of_path(&self, g: &SampledPath) -> Result<Morphism> {
        let phase = self.phase(self.class_raw(g)?)?;
        Morphism::new(self.space, g.start(), g.end(), phase, Gauge::Reference)
    }

    /// Morphism with phase `∫_γ α`; composes additively with no correction.
    pub fn exact_morphism(&self, g: &SampledPath) -> Result<Morphism> {
        self.check_space(g.space())?;
        let alpha = self.space.one_form()?;
        let v = line_integral(&alpha, g, &self.cfg)?;
        Morphism::new(self.space, g.start(), g.end(), self.phase(v)?, Gauge::Primitive)
    }

    pub fn identity(&self, x: &Point, gauge: Gauge) -> Result<Morphism> {
        Morphism::new(
            self.space,
            x.clone(),
            x.clone(),
            Phase::zero(self.periods.clone()),
            gauge,
        )
    }

    /// Both built-in schemes satisfy `ref(x′, x) = reverse(ref(x, x′))`, so
    /// inversion needs no correction.
    pub fn inverse(&self, m: &Morphism) -> Result<Morphism> {
        self.check_morphism(m)?;
        Ok(Morphism {
            src: m.dst.clone(),
            dst: m.src.clone(),
            phase: m.phase.neg(),
            ..m.clone()
        })
    }

    fn check_morphism(&self, m: &Morphism) -> Result<()> {
        self.check_space(&m.space)?;
        if *m.phase.group() != self.periods {
            return Err(PqError::GroupMismatch);
        }
        Ok(())
    }

    /// Holonomy of the reference triangle `x → x′ → x″ → x`.
    pub fn triangle_correction(&self, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
        let r1 = self.reference(x, y, 1)?;
        let r2 = self.reference(y, z, 1)?;
        let r13 = self.reference(x, z, 1)?;
        self.cocycle_raw(&r1.concat(&r2)?, &r13, None)
    }

    /// `m · m′`: the morphism of the concatenation.
    pub fn compose(&self, m: &Morphism, n: &Morphism) -> Result<Morphism> {
        self.check_morphism(m)?;
        self.check_morphism(n)?;
        if m.gauge != n.gauge || !self.space.same_point(m.dst.coords(), n.src.coords(), POINT_EQ_TOL) {
            return Err(PqError::ComposeMismatch);
        }
        // On the cone, move `n` into the sheet where it starts at `m.dst`.
        let n_dst = match self.space.cone_order() {
            Some(mm) => {
                let (_, k) = cone_lift_near(mm, m.dst.coords(), n.src.coords());
                Point::new(deck_rotate(mm, k, n.dst.coords()).to_vec())
            }
            None => n.dst.clone(),
        };
        let mut phase = m.phase.checked_add(&n.phase)?;
        if m.gauge == Gauge::Reference {
            let c = self.triangle_correction(m.src.coords(), m.dst.coords(), n_dst.coords())?;
            phase = phase.checked_add(&self.phase(c)?)?;
        }
        Morphism::new(self.space, m.src.clone(), n_dst, phase, m.gauge)
    }

    /// Same ends (modulo deck transformations) and phases within `tol`.
    pub fn morphism_distance(&self, m: &Morphism, n: &Morphism) -> Result<f64> {
        if m.space != n.space || m.gauge != n.gauge {
            return Err(PqError::ComposeMismatch);
        }
        if !self.space.same_point(m.src.coords(), n.src.coords(), POINT_EQ_TOL)
            || !self.space.same_point(m.dst.coords(), n.dst.coords(), POINT_EQ_TOL)
        {
            return Ok(f64::INFINITY);
        }
        m.phase.distance(&n.phase)
    }

    /// The built-in contraction of a loop: straight lines to the base point on
    /// ℝ²ⁿ, radial lines to the singular point on the cone, geodesics to the
    /// base point on S².
    pub fn default_contraction(&self, l: &SampledPath) -> Result<SampledHomotopy> {
        let target: Vec<f64> = match self.space.cone_order() {
            Some(_) => vec![0.0; self.space.dim()],
            None => l.knot(0).to_vec(),
        };
        self.contraction_toward(l, &target)
    }

    /// Contracts `ℓ` by moving every point along the interpolation rule of the
    /// space toward `target` (geodesics on S²).
    pub fn contraction_toward(&self, l: &SampledPath, target: &[f64]) -> Result<SampledHomotopy> {
        self.check_space(l.space())?;
        self.space.validate_point(target)?;
        let rows = self.cfg.rows;
        let d = self.space.dim();
        let times = if self.space.is_sphere() {
            let uniform: Vec<f64> = (0..=rows).map(|j| j as f64 / rows as f64).collect();
            merge_times(l.times(), &uniform)
        } else {
            l.times().to_vec()
        };
        let pts = l.sample_flat(&times);
        if self.space.is_sphere() && pts.chunks(3).any(|p| dot(p, target) <= -1.0 + ANTIPODAL_TOL) {
            return Err(PqError::ContractionUnavailable(
                "the loop meets the antipode of the contraction target; supply a contraction".into(),
            ));
        }
        let cols = times.len();
        let mut data = vec![0.0; (rows + 1) * cols * d];
        for i in 0..=rows {
            let s = i as f64 / rows as f64;
            for j in 0..cols {
                let out = &mut data[(i * cols + j) * d..][..d];
                self.space.interpolate(&pts[j * d..(j + 1) * d], target, s, out);
            }
        }
        SampledHomotopy::with_times(self.space, times, rows + 1, data, false)
    }

    /// Raw pairing over a contraction of `ℓ` (first row `ℓ`, last row constant).
    pub fn isotropy_raw(&self, l: &SampledPath, sigma: Option<&SampledHomotopy>) -> Result<f64> {
        self.check_space(l.space())?;
        if !l.is_loop() {
            return Err(PqError::NotALoop);
        }
        match sigma {
            None => pairing(&self.default_contraction(l)?, &self.cfg),
            Some(h) => {
                self.check_space(h.space())?;
                let last = h.rows() - 1;
                if (0..h.rows()).any(|i| {
                    !self
                        .space
                        .same_point(h.point(i, 0), h.point(i, h.cols() - 1), POINT_EQ_TOL)
                }) {
                    return Err(PqError::InvalidHomotopy(
                        "every row of a contraction must be a loop".into(),
                    ));
                }
                let sign = if row_matches(h, 0, l) && row_constant(h, last) {
                    1.0
                } else if row_constant(h, 0) && row_matches(h, last, l) {
                    -1.0
                } else {
                    return Err(PqError::InvalidHomotopy("homotopy does not contract the loop".into()));
                };
                Ok(sign * pairing(h, &self.cfg)?)
            }
        }
    }

    pub fn isotropy_phase(&self, l: &SampledPath, sigma: Option<&SampledHomotopy>) -> Result<Phase> {
        self.phase(self.isotropy_raw(l, sigma)?)
    }

    /// A latitude loop whose cap-contraction phase is `target`, found by
    /// bisection on the polar angle.
    pub fn isotropy_witness(&self, target: f64, tol: f64) -> Result<Witness> {
        let PeriodGroup::Cyclic(a) = self.periods else {
            return Err(PqError::InvalidSpace(
                "witness search needs a cyclic period group".into(),
            ));
        };
        if !self.space.is_sphere() {
            return Err(PqError::InvalidSpace(format!(
                "witness search needs sphere2, got {}",
                self.space.name()
            )));
        }
        if !(0.0..a).contains(&target) {
            return Err(PqError::TargetOutOfRange(target));
        }
        let eval = |theta: f64| -> Result<(f64, SampledHomotopy)> {
            let h = cap_contraction(&self.space, theta, WITNESS_ROWS, WITNESS_SIDES)?;
            Ok((pairing(&h, &self.cfg)?, h))
        };
        let (mut lo, mut hi) = (0.0, PI);
        let mut best = (0.0, eval(0.0)?);
        for _ in 0..80 {
            if (best.1 .0 - target).abs() <= 0.25 * tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let r = eval(mid)?;
            if r.0 < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if (r.0 - target).abs() < (best.1 .0 - target).abs() {
                best = (mid, r);
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        let (theta, (phase, contraction)) = best;
        Ok(Witness {
            theta,
            phase,
            loop_path: latitude_loop(&self.space, theta, WITNESS_SIDES)?,
            contraction,
        })
    }

    /// Discrete curvature identity on class phases. At every node,
    /// `λ_u = G^ref_u − Δ_u θ` where `G^ref` pairs the family of reference
    /// paths and `θ` are class phases; the curl of `λ` is compared with
    /// `ω(Δ_u dst, Δ_v dst) − ω(Δ_u src, Δ_v src)`.
    pub fn curvature_check(&self, family: &PathFamily) -> Result<CurlReport> {
        let lam = self.lambda_grid(family)?;
        let (nu, nv) = family.shape();
        if nu < 5 || nv < 5 {
            return Err(PqError::DegenerateGrid(format!(
                "curvature check needs at least 5×5, got {nu}×{nv}"
            )));
        }
        let mut curl = Vec::new();
        let mut rhs = Vec::new();
        for i in 2..nu - 2 {
            for j in 2..nv - 2 {
                curl.push(
                    (lam.v[(i + 1) * nv + j] - lam.v[(i - 1) * nv + j])
                        - (lam.u[i * nv + j + 1] - lam.u[i * nv + j - 1]),
                );
                rhs.push(family.end_term(1, i, j) - family.end_term(0, i, j));
            }
        }
        let (du, dv) = family.steps();
        Ok(curl_report(&curl, &rhs, du, dv))
    }

    /// `max |λ(∂) − Kω(∂)| / max |Kω(∂)|` over interior nodes and both
    /// directions: the pulled-back λ reproduces the chain-homotopy pairing.
    pub fn pullback_residual(&self, family: &PathFamily) -> Result<f64> {
        let lam = self.lambda_grid(family)?;
        let (nu, nv) = family.shape();
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for i in 1..nu - 1 {
            for j in 1..nv - 1 {
                let gu = family.g_u(i, j, &self.cfg)?;
                let gv = family.g_v(i, j, &self.cfg)?;
                err = err
                    .max((lam.u[i * nv + j] - gu).abs())
                    .max((lam.v[i * nv + j] - gv).abs());
                scale = scale.max(gu.abs()).max(gv.abs());
            }
        }
        Ok(if scale > 0.0 { err / scale } else { err })
    }

    fn lambda_grid(&self, family: &PathFamily) -> Result<LambdaGrid> {
        self.check_space(family.space())?;
        let (nu, nv) = family.shape();
        if nu < 3 || nv < 3 {
            return Err(PqError::DegenerateGrid(format!(
                "family needs at least 3×3, got {nu}×{nv}"
            )));
        }
        let n = family.path(0, 0).knot_count() - 1;
        let mut refs = Vec::with_capacity(nu);
        let mut theta = vec![0.0; nu * nv];
        for i in 0..nu {
            let mut row = Vec::with_capacity(nv);
            for j in 0..nv {
                let g = family.path(i, j);
                let r = self.reference(g.knot(0), g.knot(g.knot_count() - 1), n)?;
                theta[i * nv + j] = self.cocycle_raw(g, &r, None)?;
                row.push(r);
            }
            refs.push(row);
        }
        let (du, dv) = family.steps();
        let ref_family = PathFamily::new(refs, du, dv)?;
        let mut u = vec![0.0; nu * nv];
        let mut v = vec![0.0; nu * nv];
        for i in 1..nu - 1 {
            for j in 1..nv - 1 {
                u[i * nv + j] = ref_family.g_u(i, j, &self.cfg)? - (theta[(i + 1) * nv + j] - theta[(i - 1) * nv + j]);
                v[i * nv + j] = ref_family.g_v(i, j, &self.cfg)? - (theta[i * nv + j + 1] - theta[i * nv + j - 1]);
            }
        }
        Ok(LambdaGrid { u, v })
    }
}

struct LambdaGrid {
    u: Vec<f64>,
    v: Vec<f64>,
}

fn columns_fixed(h: &SampledHomotopy) -> bool {
    let last = h.cols() - 1;
    (1..h.rows()).all(|i| {
        crate::spaces::dist(h.point(i, 0), h.point(0, 0)) <= POINT_EQ_TOL
            && crate::spaces::dist(h.point(i, last), h.point(0, last)) <= POINT_EQ_TOL
    })
}

fn row_constant(h: &SampledHomotopy, i: usize) -> bool {
    (1..h.cols()).all(|j| crate::spaces::dist(h.point(i, j), h.point(i, 0)) <= POINT_EQ_TOL)
}

/// Row `i` of `h` and `g` trace the same polyline: each passes through the
/// other's knots.
fn row_matches(h: &SampledHomotopy, i: usize, g: &SampledPath) -> bool {
    let space = h.space();
    let row = h.row_path(i);
    let close = |p: &[f64], q: &[f64]| space.same_point(p, q, ROW_MATCH_TOL);
    let g = g.align_start_to(row.knot(0));
    row.knots().all(|(t, p)| close(p, g.eval(t).coords())) && g.knots().all(|(t, p)| close(p, row.eval(t).coords()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{cone_loop, great_arc, polyline, square_detour, unit_segment};
    use crate::spaces::dist;
    use proptest::prelude::*;

    fn p3(x: f64, y: f64, z: f64) -> Point {
        Point::new(vec![x, y, z])
    }

    #[test]
    fn cyclic_arithmetic() {
        let g = PeriodGroup::cyclic(2.0 * PI).unwrap();
        let a = Phase::new(1.5 * PI, g.clone()).unwrap();
        let s = a.checked_add(&a).unwrap();
        assert!((s.value() - PI).abs() < 1e-15);
        assert_eq!(Phase::new(-0.5, g.clone()).unwrap().value(), 2.0 * PI - 0.5);
        assert!(Phase::new(2.0 * PI - 1e-12, g.clone())
            .unwrap()
            .approx_eq(&Phase::zero(g.clone()), 1e-9)
            .unwrap());
        assert_eq!(a.neg().checked_add(&a).unwrap().value(), 0.0);
        assert_eq!(
            a.checked_add(&Phase::zero(PeriodGroup::Zero)),
            Err(PqError::GroupMismatch)
        );
        assert!(PeriodGroup::cyclic(0.0).is_err());
    }

    #[test]
    fn zero_group_equality_is_absolute() {
        let z = PeriodGroup::Zero;
        let a = Phase::new(1.0, z.clone()).unwrap();
        let b = Phase::new(1.0 + 5e-7, z.clone()).unwrap();
        assert!(a.approx_eq(&b, 1e-6).unwrap());
        assert!(!a.approx_eq(&b, 1e-7).unwrap());
    }

    fn brute_distance(gens: &[f64], x: f64, bound: i64) -> f64 {
        let mut best = f64::INFINITY;
        for n2 in -bound..=bound {
            for n1 in -bound..=bound {
                best = best.min((x - n1 as f64 * gens[0] - n2 as f64 * gens[1]).abs());
            }
        }
        best
    }

    #[test]
    fn generated_group_examples() {
        let g = PeriodGroup::generated(vec![2f64.sqrt(), 1.0]).unwrap();
        let ph = |v: f64| Phase::new(v, g.clone()).unwrap();
        assert!(ph(1.0 + 2f64.sqrt()).approx_eq(&ph(2.414213562373095), 1e-9).unwrap());
        assert!(ph(0.0).approx_eq(&ph(3.0 - 2.0 * 2f64.sqrt()), 1e-9).unwrap());
        assert!(!ph(0.0).approx_eq(&ph(0.1716), 1e-9).unwrap());
        assert!(g.near_commensurable_pairs().is_empty());
        let c = PeriodGroup::generated(vec![1.0, 1.5]).unwrap();
        assert_eq!(c.near_commensurable_pairs(), vec![(0, 1, 3, 2)]);
        let three = PeriodGroup::generated(vec![1.0, 2f64.sqrt(), 3f64.sqrt()]).unwrap();
        assert!(three.distance_to_group(2.0 * 2f64.sqrt() - 3.0 * 3f64.sqrt() + 7.0) < 1e-12);
        assert!(PeriodGroup::generated(vec![1.0]).is_err());
    }

    #[test]
    fn generated_search_agrees_with_brute_force() {
        let gens = [1.0, 2f64.sqrt()];
        let g = PeriodGroup::generated_with_bound(gens.to_vec(), 40).unwrap();
        for k in 0..50 {
            let x = -7.0 + 0.2937 * k as f64;
            assert!((g.distance_to_group(x) - brute_distance(&gens, x, 40)).abs() < 1e-12);
        }
    }

    #[test]
    fn detect_periods_examples() {
        let cfg = QuadratureConfig::default();
        let e = detect_periods(&SpaceModel::euclidean(1).unwrap(), 8, 8, &cfg).unwrap();
        assert_eq!(e.group, PeriodGroup::Zero);
        let c = detect_periods(&SpaceModel::cone(3).unwrap(), 8, 8, &cfg).unwrap();
        assert_eq!(c.group, PeriodGroup::Zero);
        let s = detect_periods(&SpaceModel::sphere2(), 128, 256, &cfg).unwrap();
        let PeriodGroup::Cyclic(a) = s.group else { panic!() };
        assert!((a - 2.0 * PI).abs() < 1e-3);
        assert!(s.error_bound.unwrap() > 0.0 && s.error_bound.unwrap() < 1e-3);
    }

    #[test]
    fn cocycle_examples() {
        let plane = SpaceModel::euclidean(1).unwrap();
        let pq = Prequantum::pinned(plane);
        let seg = unit_segment(&plane).unwrap();
        let det = square_detour(&plane).unwrap();
        assert_eq!(pq.cocycle_phi(&seg, &seg, None).unwrap().value(), 0.0);
        let v = pq.cocycle_phi(&seg, &det, None).unwrap();
        assert!((v.value() - 1.0).abs() < 1e-12);
        let other =
            SampledPath::from_points(plane, vec![Point::new(vec![0.0, 0.0]), Point::new(vec![2.0, 0.0])]).unwrap();
        assert_eq!(pq.cocycle_phi(&seg, &other, None), Err(PqError::EndsMismatch));
        // A supplied homotopy in the reverse direction gives the same φ.
        let back = crate::paths::linear_homotopy(&det, &seg, 4).unwrap();
        assert!((pq.cocycle_raw(&seg, &det, Some(&back)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_quarter_circles_bound_an_octant() {
        let s = SpaceModel::sphere2();
        let pq = Prequantum::pinned(s);
        let (x, y, z) = (p3(1.0, 0.0, 0.0), p3(0.0, 1.0, 0.0), p3(0.0, 0.0, 1.0));
        let equator = great_arc(&s, &x, &y, 32).unwrap();
        let over = polyline(&s, &[x.clone(), z.clone(), y.clone()], 32).unwrap();
        // x → z → y → x is clockwise seen from outside the octant.
        let v = pq.cocycle_phi(&over, &equator, None).unwrap();
        let want = Phase::new(-PI / 4.0, pq.periods.clone()).unwrap();
        assert!(v.distance(&want).unwrap() < 1e-4, "{}", v.value());
        let m = pq.class_of_path(&over).unwrap();
        assert!(m.phase.distance(&want).unwrap() < 1e-4);
        // Meridians from pole to pole through x and y bound a lune of angle
        // π/2; z → y → south → x → z runs clockwise around it.
        let south = p3(0.0, 0.0, -1.0);
        let via_x = polyline(&s, &[z.clone(), x.clone(), south.clone()], 32).unwrap();
        let via_y = polyline(&s, &[z.clone(), y.clone(), south.clone()], 32).unwrap();
        let fine = pq.clone().with_config(QuadratureConfig::default().with_refine(2));
        let lune = fine.cocycle_phi(&via_y, &via_x, None).unwrap();
        let want = Phase::new(-PI / 2.0, pq.periods.clone()).unwrap();
        assert!(lune.distance(&want).unwrap() < 1e-4, "{}", lune.value());
    }

    #[test]
    fn class_examples() {
        let s = SpaceModel::sphere2();
        let pq = Prequantum::pinned(s);
        let (x, y) = (p3(1.0, 0.0, 0.0), p3(0.0, 0.6, 0.8));
        let r = pq.reference(x.coords(), y.coords(), 7).unwrap();
        assert!(pq.class_of_path(&r).unwrap().phase.value().abs() < 1e-12);
        let c = SampledPath::constant(s, &x).unwrap();
        let m = pq.class_of_path(&c).unwrap();
        assert_eq!(m, pq.identity(&x, Gauge::Reference).unwrap());
        let bad = polyline(&s, &[x.clone(), p3(0.0, 0.0, 1.0), p3(-1.0, 0.0, 0.0)], 4).unwrap();
        assert_eq!(pq.class_of_path(&bad), Err(PqError::AntipodalPoints));
    }

    #[test]
    fn octant_correction() {
        let s = SpaceModel::sphere2();
        let pq = Prequantum::pinned(s);
        let c = pq
            .triangle_correction(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0])
            .unwrap();
        assert!((c - PI / 4.0).abs() < 1e-4, "{c}");
        let ms = [
            (p3(1.0, 0.0, 0.0), p3(0.0, 1.0, 0.0)),
            (p3(0.0, 1.0, 0.0), p3(0.0, 0.0, 1.0)),
        ]
        .map(|(a, b)| pq.class_of_path(&great_arc(&s, &a, &b, 8).unwrap()).unwrap());
        let composed = pq.compose(&ms[0], &ms[1]).unwrap();
        let path = great_arc(&s, &p3(1.0, 0.0, 0.0), &p3(0.0, 1.0, 0.0), 8)
            .unwrap()
            .concat(&great_arc(&s, &p3(0.0, 1.0, 0.0), &p3(0.0, 0.0, 1.0), 8).unwrap())
            .unwrap();
        let direct = pq.class_of_path(&path).unwrap();
        assert!(pq.morphism_distance(&composed, &direct).unwrap() < 1e-4);
        assert!((composed.phase.value() - PI / 4.0).abs() < 1e-4);
    }

    #[test]
    fn isotropy_examples() {
        let s = SpaceModel::sphere2();
        let pq = Prequantum::pinned(s);
        let equator = latitude_loop(&s, PI / 2.0, 512).unwrap();
        assert!(matches!(
            pq.isotropy_phase(&equator, None),
            Err(PqError::ContractionUnavailable(_))
        ));
        let cap = cap_contraction(&s, PI / 2.0, 128, 512).unwrap();
        let v = pq.isotropy_phase(&equator, Some(&cap)).unwrap();
        assert!((v.value() - PI).abs() < 1e-4, "{}", v.value());
        let fine = pq.clone().with_config(QuadratureConfig::default().with_rows(256));
        let toward = fine.contraction_toward(&equator, &[0.0, 0.0, 1.0]).unwrap();
        assert!((fine.isotropy_raw(&equator, Some(&toward)).unwrap() - PI).abs() < 1e-4);
        assert!(matches!(
            pq.contraction_toward(&equator, &[1.0, 0.0, 0.0]),
            Err(PqError::ContractionUnavailable(_))
        ));
        let c = SampledPath::constant(s, &p3(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(pq.isotropy_phase(&c, None).unwrap().value(), 0.0);
        let open = great_arc(&s, &p3(1.0, 0.0, 0.0), &p3(0.0, 1.0, 0.0), 4).unwrap();
        assert_eq!(pq.isotropy_phase(&open, None), Err(PqError::NotALoop));
        for m in [2, 3, 5] {
            let cone = SpaceModel::cone(m).unwrap();
            let pc = Prequantum::pinned(cone);
            let l = cone_loop(&cone, 1.0, 4096).unwrap();
            let v = pc.isotropy_phase(&l, None).unwrap();
            assert_eq!(*v.group(), PeriodGroup::Zero);
            assert!((v.value() - PI / m as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn witness_examples() {
        let pq = Prequantum::pinned(SpaceModel::sphere2());
        let w0 = pq.isotropy_witness(0.0, 1e-4).unwrap();
        assert!(w0.phase.abs() <= 1e-4);
        let w = pq.isotropy_witness(PI, 1e-4).unwrap();
        assert!((w.theta - PI / 2.0).abs() < 1e-3);
        let w3 = pq.isotropy_witness(3.0, 1e-4).unwrap();
        assert!((w3.theta - (1.0 - 3.0 / PI).acos()).abs() < 1e-3);
        let v = pq.isotropy_phase(&w3.loop_path, Some(&w3.contraction)).unwrap();
        assert!((v.value() - 3.0).abs() < 1e-4);
        assert_eq!(
            pq.isotropy_witness(7.0, 1e-4).unwrap_err(),
            PqError::TargetOutOfRange(7.0)
        );
    }

    #[test]
    fn exact_morphism_examples() {
        let plane = SpaceModel::euclidean(1).unwrap();
        let pq = Prequantum::pinned(plane);
        let x = Point::new(vec![0.3, -0.2]);
        let m = pq.exact_morphism(&SampledPath::constant(plane, &x).unwrap()).unwrap();
        assert_eq!(m, pq.identity(&x, Gauge::Primitive).unwrap());
        let seg =
            SampledPath::from_points(plane, vec![Point::new(vec![1.0, 0.0]), Point::new(vec![1.0, 1.0])]).unwrap();
        assert_eq!(pq.exact_morphism(&seg).unwrap().phase.value(), 1.0);
        let sp = Prequantum::pinned(SpaceModel::sphere2());
        let c = SampledPath::constant(SpaceModel::sphere2(), &p3(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(sp.exact_morphism(&c), Err(PqError::NoPrimitive));
    }

    #[test]
    fn cone_dual_route() {
        let cone = SpaceModel::cone(3).unwrap();
        let pq = Prequantum::pinned(cone);
        let arc = SampledPath::from_fn(cone, 2048, |t| {
            let a = 0.5 * PI * t;
            Point::new(vec![2.0 * a.cos(), 2.0 * a.sin()])
        })
        .unwrap();
        let exact = pq.exact_morphism(&arc).unwrap().phase.value();
        assert!((exact - PI).abs() < 1e-6);
        let class = pq.class_of_path(&arc).unwrap().phase.value();
        let r = pq.reference(arc.knot(0), arc.knot(2048), 1).unwrap();
        let alpha = cone.one_form().unwrap();
        let via = class + line_integral(&alpha, &r, &pq.cfg).unwrap();
        assert!((exact - via).abs() < 1e-6);
    }

    #[test]
    fn lambda_examples() {
        let plane = SpaceModel::euclidean(1).unwrap();
        let x = Point::new(vec![0.5, 0.5]);
        assert_eq!(
            exact_lambda_eval(&plane, |_| (x.clone(), 2.0, x.clone()), 0.3, 1e-3).unwrap(),
            0.0
        );
        let v = exact_lambda_eval(&plane, |s| (x.clone(), s, x.clone()), 0.3, 1e-3).unwrap();
        assert!((v + 1.0).abs() < 1e-12);
        // Along a moving family the pulled-back λ equals the pairing density.
        let pq = Prequantum::pinned(plane);
        let fam = |s: f64| {
            SampledPath::from_fn(plane, 64, |t| {
                Point::new(vec![t + 0.3 * s * t * t, s * (PI * t).sin() + 0.2 * s * t])
            })
            .unwrap()
        };
        let plot = |s: f64| {
            let g = fam(s);
            let m = pq.exact_morphism(&g).unwrap();
            (m.src, m.phase.value(), m.dst)
        };
        let (s, ds) = (0.4, 1e-3);
        let lam = exact_lambda_eval(&plane, plot, s, ds).unwrap();
        let h = SampledHomotopy::from_fn(plane, 2, 64, false, |u, t| fam(s - ds + 2.0 * ds * u).eval(t)).unwrap();
        let k = pairing(&h, &pq.cfg).unwrap() / (2.0 * ds);
        assert!((lam - k).abs() < 1e-4, "{lam} {k}");
    }

    #[test]
    fn curvature_examples() {
        let plane = SpaceModel::euclidean(1).unwrap();
        let pq = Prequantum::pinned(plane);
        let fam = crate::shapes::sheared_arc_family(32, 32, 64).unwrap();
        assert!(pq.curvature_check(&fam).unwrap().residual < 1e-3);
        assert!(pq.pullback_residual(&fam).unwrap() < 1e-3);
        let fixed = PathFamily::from_fn(plane, 7, 7, 16, |u, v, t| {
            let b = (PI * t).sin();
            Point::new(vec![t + 0.2 * u * b, 0.3 * v * b])
        })
        .unwrap();
        let r = pq.curvature_check(&fixed).unwrap();
        assert_eq!(r.max_rhs, 0.0);
        assert!(r.residual < 1e-3);
    }

    #[test]
    fn groupoid_laws_on_the_plane() {
        let plane = SpaceModel::euclidean(1).unwrap();
        let pq = Prequantum::pinned(plane);
        let a = square_detour(&plane).unwrap();
        let m = pq.class_of_path(&a).unwrap();
        let id = pq.identity(&m.dst, Gauge::Reference).unwrap();
        assert!(pq.morphism_distance(&pq.compose(&m, &id).unwrap(), &m).unwrap() < 1e-12);
        let mm = pq.compose(&m, &pq.inverse(&m).unwrap()).unwrap();
        assert!(
            pq.morphism_distance(&mm, &pq.identity(&m.src, Gauge::Reference).unwrap())
                .unwrap()
                < 1e-12
        );
        assert_eq!(pq.inverse(&pq.inverse(&m).unwrap()).unwrap(), m);
        let e = pq.exact_morphism(&a).unwrap();
        assert_eq!(pq.compose(&m, &e), Err(PqError::ComposeMismatch));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn class_of_reverse_is_inverse(pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 2..6)) {
            let plane = SpaceModel::euclidean(1).unwrap();
            let pq = Prequantum::pinned(plane);
            let g = SampledPath::from_points(plane, pts.iter().map(|&(x, y)| Point::new(vec![x, y])).collect()).unwrap();
            let a = pq.class_of_path(&g.reverse()).unwrap();
            let b = pq.inverse(&pq.class_of_path(&g).unwrap()).unwrap();
            prop_assert!(pq.morphism_distance(&a, &b).unwrap() <= 1e-6);
        }

        #[test]
        fn exact_composition_is_additive(pts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 3..8)) {
            let plane = SpaceModel::euclidean(1).unwrap();
            let pq = Prequantum::pinned(plane);
            let p: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(vec![x, y])).collect();
            let k = p.len() / 2;
            let g1 = SampledPath::from_points(plane, p[..=k].to_vec()).unwrap();
            let g2 = SampledPath::from_points(plane, p[k..].to_vec()).unwrap();
            let sum = pq.compose(&pq.exact_morphism(&g1).unwrap(), &pq.exact_morphism(&g2).unwrap()).unwrap();
            let direct = pq.exact_morphism(&g1.concat(&g2).unwrap()).unwrap();
            prop_assert!((sum.phase.value() - direct.phase.value()).abs() <= 1e-12 * (1.0 + direct.phase.value().abs()));
            prop_assert!(dist(sum.dst.coords(), direct.dst.coords()) == 0.0);
        }
    }
}
