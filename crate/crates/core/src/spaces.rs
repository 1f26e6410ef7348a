//! Concrete parasymplectic base spaces.
//!
//! Three families are supported: the symplectic vector space ℝ²ⁿ with
//! coordinates interleaved as `(x₁, y₁, …, xₙ, yₙ)`, the unit sphere S² ⊂ ℝ³
//! carrying half its Euclidean area form (total area 2π), and the cone
//! orbifold ℂ/ℤₘ, which is always handled through its covering chart ℂ ≅ ℝ²
//! where the form is `dx∧dy`.

use crate::error::{PqError, Result};
use std::f64::consts::PI;

/// Allowed deviation of a sphere point from unit norm.
pub const UNIT_TOL: f64 = 1e-12;
/// Two sphere points with `a·b ≤ −1 + ANTIPODAL_TOL` count as antipodal.
pub const ANTIPODAL_TOL: f64 = 1e-9;
/// Tolerance for "same point" checks (end points, composability).
pub const POINT_EQ_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// ℝ²ⁿ with `ω = Σ dxᵢ∧dyᵢ`.
    EuclideanSymplectic { n: usize },
    /// S² with `ω = ½ · area`.
    Sphere2,
    /// ℂ/ℤₘ computed in the covering chart.
    ConeOrbifold { m: u32 },
}

/// A point given by its ambient (or covering-chart) coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: impl Into<Vec<f64>>) -> Self {
        Point(coords.into())
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A base space together with the scale applied to its two-form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceModel {
    kind: SpaceKind,
    normalization: f64,
}

impl SpaceModel {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(PqError::InvalidSpace("euclidean half-dimension must be ≥ 1".into()));
        }
        Ok(SpaceModel {
            kind: SpaceKind::EuclideanSymplectic { n },
            normalization: 1.0,
        })
    }

    pub fn sphere2() -> Self {
        SpaceModel {
            kind: SpaceKind::Sphere2,
            normalization: 1.0,
        }
    }

    pub fn cone(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(PqError::InvalidSpace(format!("cone order must be ≥ 2, got {m}")));
        }
        Ok(SpaceModel {
            kind: SpaceKind::ConeOrbifold { m },
            normalization: 1.0,
        })
    }

    pub fn with_normalization(mut self, normalization: f64) -> Result<Self> {
        if !(normalization.is_finite() && normalization > 0.0) {
            return Err(PqError::InvalidSpace(format!(
                "normalization must be positive and finite, got {normalization}"
            )));
        }
        self.normalization = normalization;
        Ok(self)
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// Number of coordinates of a point.
    pub fn dim(&self) -> usize {
        match self.kind {
            SpaceKind::EuclideanSymplectic { n } => 2 * n,
            SpaceKind::Sphere2 => 3,
            SpaceKind::ConeOrbifold { .. } => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            SpaceKind::EuclideanSymplectic { .. } => "euclidean",
            SpaceKind::Sphere2 => "sphere2",
            SpaceKind::ConeOrbifold { .. } => "cone",
        }
    }

    pub fn is_sphere(&self) -> bool {
        matches!(self.kind, SpaceKind::Sphere2)
    }

    pub fn cone_order(&self) -> Option<u32> {
        match self.kind {
            SpaceKind::ConeOrbifold { m } => Some(m),
            _ => None,
        }
    }

    /// ω is exact with a chosen primitive on ℝ²ⁿ and on the cone.
    pub fn has_primitive(&self) -> bool {
        !self.is_sphere()
    }

    pub fn validate_point(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim() {
            return Err(PqError::DimensionMismatch {
                expected: self.dim(),
                found: p.len(),
            });
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(PqError::NonFinite("point coordinate"));
        }
        if self.is_sphere() {
            let dev = (norm(p) - 1.0).abs();
            if dev > UNIT_TOL {
                return Err(PqError::OffSphere(dev));
            }
        }
        Ok(())
    }

    pub fn point(&self, coords: impl Into<Vec<f64>>) -> Result<Point> {
        let p = Point::new(coords);
        self.validate_point(p.coords())?;
        Ok(p)
    }

    /// Point of S² from polar angle θ (from +z) and azimuth φ.
    pub fn sphere_point(theta: f64, phi: f64) -> Point {
        Point::new(vec![theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()])
    }

    pub fn two_form(&self) -> TwoForm {
        TwoForm {
            space: *self,
            scale: 1.0,
        }
    }

    pub fn one_form(&self) -> Result<OneForm> {
        if !self.has_primitive() {
            return Err(PqError::NoPrimitive);
        }
        Ok(OneForm {
            space: *self,
            scale: 1.0,
        })
    }

    /// `ω_p(u, v)` with validation of the inputs.
    pub fn eval_two_form(&self, p: &Point, u: &[f64], v: &[f64]) -> Result<f64> {
        self.validate_point(p.coords())?;
        self.check_vector(u)?;
        self.check_vector(v)?;
        Ok(self.omega(p.coords(), u, v))
    }

    pub(crate) fn check_vector(&self, w: &[f64]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(PqError::DimensionMismatch {
                expected: self.dim(),
                found: w.len(),
            });
        }
        if w.iter().any(|x| !x.is_finite()) {
            return Err(PqError::NonFinite("tangent vector"));
        }
        Ok(())
    }

    /// Unchecked ω evaluation. On S² the value `½ det[p, u, v]` only sees the
    /// components of `u` and `v` orthogonal to `p`, so tangent projection is
    /// implicit.
    #[inline]
    pub(crate) fn omega(&self, p: &[f64], u: &[f64], v: &[f64]) -> f64 {
        let raw = match self.kind {
            SpaceKind::EuclideanSymplectic { n } => {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i];
                }
                acc
            }
            SpaceKind::Sphere2 => 0.5 * det3(p, u, v),
            SpaceKind::ConeOrbifold { .. } => u[0] * v[1] - u[1] * v[0],
        };
        self.normalization * raw
    }

    /// Unchecked primitive: `Σ xᵢ dyᵢ` on ℝ²ⁿ, the rotation-invariant
    /// `½(x dy − y dx)` on the cone cover.
    #[inline]
    pub(crate) fn alpha(&self, p: &[f64], u: &[f64]) -> f64 {
        let raw = match self.kind {
            SpaceKind::EuclideanSymplectic { n } => {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += p[2 * i] * u[2 * i + 1];
                }
                acc
            }
            SpaceKind::ConeOrbifold { .. } => 0.5 * (p[0] * u[1] - p[1] * u[0]),
            SpaceKind::Sphere2 => 0.0,
        };
        self.normalization * raw
    }

    /// Tangent projection: `w − (w·p)p` on S², identity elsewhere.
    pub fn project_tangent(&self, p: &Point, w: &[f64]) -> Vec<f64> {
        let mut out = w.to_vec();
        if self.is_sphere() {
            let d = dot(p.coords(), w);
            for (o, pi) in out.iter_mut().zip(p.coords()) {
                *o -= d * pi;
            }
        }
        out
    }

    /// Constant-speed minimal geodesic from `a` to `b` at parameter `t`.
    pub fn geodesic(&self, a: &Point, b: &Point, t: f64) -> Result<Point> {
        self.validate_point(a.coords())?;
        self.validate_point(b.coords())?;
        if !t.is_finite() {
            return Err(PqError::NonFinite("geodesic parameter"));
        }
        if self.is_sphere() && dot(a.coords(), b.coords()) <= -1.0 + ANTIPODAL_TOL {
            return Err(PqError::AntipodalPoints);
        }
        let mut out = vec![0.0; self.dim()];
        self.interpolate(a.coords(), b.coords(), t, &mut out);
        Ok(Point(out))
    }

    /// Straight or great-circle interpolation; exact at `u = 0` and `u = 1`.
    pub(crate) fn interpolate(&self, a: &[f64], b: &[f64], u: f64, out: &mut [f64]) {
        if u == 0.0 {
            out.copy_from_slice(a);
            return;
        }
        if u == 1.0 {
            out.copy_from_slice(b);
            return;
        }
        if self.is_sphere() {
            slerp(a, b, u, out);
        } else {
            for i in 0..out.len() {
                out[i] = a[i] + u * (b[i] - a[i]);
            }
        }
    }

    /// Pushes an ambient vector back onto the space (normalization on S²).
    #[inline]
    pub(crate) fn retract(&self, x: &mut [f64]) {
        if self.is_sphere() {
            let n = norm(x);
            if n > 0.0 {
                x.iter_mut().for_each(|c| *c /= n);
            }
        }
    }

    /// Equality of points; on the cone, equality modulo deck transformations.
    pub fn same_point(&self, a: &[f64], b: &[f64], tol: f64) -> bool {
        match self.kind {
            SpaceKind::ConeOrbifold { m } => cone_equal(m, a, b, tol),
            _ => dist(a, b) <= tol,
        }
    }

    /// Checks that two sphere points are safely non-antipodal.
    pub(crate) fn check_adjacent(&self, a: &[f64], b: &[f64]) -> bool {
        !self.is_sphere() || dot(a, b) > -1.0 + ANTIPODAL_TOL
    }
}

/// The space's two-form, optionally rescaled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoForm {
    space: SpaceModel,
    scale: f64,
}

impl TwoForm {
    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn scaled(self, c: f64) -> Self {
        TwoForm {
            scale: self.scale * c,
            ..self
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn eval(&self, p: &[f64], u: &[f64], v: &[f64]) -> f64 {
        self.scale * self.space.omega(p, u, v)
    }
}

/// The chosen primitive α of ω on exact spaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneForm {
    space: SpaceModel,
    scale: f64,
}

impl OneForm {
    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn scaled(self, c: f64) -> Self {
        OneForm {
            scale: self.scale * c,
            ..self
        }
    }

    #[inline]
    pub fn eval(&self, p: &[f64], u: &[f64]) -> f64 {
        self.scale * self.space.alpha(p, u)
    }
}

/// Representative of `[z] ∈ ℂ/ℤₘ` with argument in `[0, 2π/m)`.
pub fn orbifold_canonical(m: u32, z: [f64; 2]) -> [f64; 2] {
    let wedge = 2.0 * PI / m as f64;
    let r = z[0].hypot(z[1]);
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let arg = z[1].atan2(z[0]);
    if (0.0..wedge).contains(&arg) {
        return z;
    }
    let full = if arg < 0.0 { arg + 2.0 * PI } else { arg };
    let k = ((full / wedge).floor() as i64).clamp(0, m as i64 - 1);
    let mut theta = full - k as f64 * wedge;
    if !(0.0..wedge).contains(&theta) {
        theta = theta.clamp(0.0, wedge * (1.0 - 1e-15));
    }
    let out = [r * theta.cos(), r * theta.sin()];
    let back = out[1].atan2(out[0]);
    if (0.0..wedge).contains(&back) {
        out
    } else if back < 0.0 {
        [r, 0.0]
    } else {
        let t = wedge * (1.0 - 1e-12);
        [r * t.cos(), r * t.sin()]
    }
}

/// Applies the k-th deck transformation `z ↦ e^{2πik/m} z`.
pub fn deck_rotate(m: u32, k: i64, z: &[f64]) -> [f64; 2] {
    let k = k.rem_euclid(m as i64);
    if k == 0 {
        return [z[0], z[1]];
    }
    let a = 2.0 * PI * k as f64 / m as f64;
    let (s, c) = a.sin_cos();
    [c * z[0] - s * z[1], s * z[0] + c * z[1]]
}

pub(crate) fn cone_equal(m: u32, a: &[f64], b: &[f64], tol: f64) -> bool {
    (0..m as i64).any(|k| dist(&deck_rotate(m, k, a), b) <= tol)
}

/// Deck image of `z` closest to `anchor`, returned with its deck index.
pub(crate) fn cone_lift_near(m: u32, anchor: &[f64], z: &[f64]) -> ([f64; 2], i64) {
    let mut best = ([z[0], z[1]], 0_i64);
    let mut best_d = dist(anchor, z);
    for k in 1..m as i64 {
        let w = deck_rotate(m, k, z);
        let d = dist(anchor, &w);
        if d < best_d {
            best_d = d;
            best = (w, k);
        }
    }
    best
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[inline]
pub(crate) fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub(crate) fn det3(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    dot(a, &cross(b, c))
}

fn slerp(a: &[f64], b: &[f64], u: f64, out: &mut [f64]) {
    let c = cross(a, b);
    let theta = norm(&c).atan2(dot(a, b));
    if theta < 1e-12 {
        for i in 0..3 {
            out[i] = a[i] + u * (b[i] - a[i]);
        }
    } else {
        let s = theta.sin();
        let wa = ((1.0 - u) * theta).sin() / s;
        let wb = (u * theta).sin() / s;
        for i in 0..3 {
            out[i] = wa * a[i] + wb * b[i];
        }
    }
    let n = norm(out);
    out.iter_mut().for_each(|x| *x /= n);
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_unit(rng: &mut ChaCha8Rng) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let n = norm(&v);
            if n > 0.1 && n < 1.0 {
                return v.iter().map(|x| x / n).collect();
            }
        }
    }

    #[test]
    fn standard_pairing_on_the_plane() {
        let s = SpaceModel::euclidean(1).unwrap();
        let p = s.point(vec![0.0, 0.0]).unwrap();
        assert_eq!(s.eval_two_form(&p, &[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
    }

    #[test]
    fn sphere_form_is_half_the_area_form() {
        let s = SpaceModel::sphere2();
        let p = s.point(vec![0.0, 0.0, 1.0]).unwrap();
        // 3×3 determinant of the columns (p, u, v), expanded by hand.
        let (u, v) = ([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let det = p.coords()[0] * (u[1] * v[2] - u[2] * v[1]) - u[0] * (p.coords()[1] * v[2] - p.coords()[2] * v[1])
            + v[0] * (p.coords()[1] * u[2] - p.coords()[2] * u[1]);
        assert_eq!(det, 1.0);
        assert_eq!(s.eval_two_form(&p, &u, &v).unwrap(), 0.5 * det);
    }

    #[test]
    fn equal_arguments_give_zero() {
        for s in [
            SpaceModel::euclidean(2).unwrap(),
            SpaceModel::sphere2(),
            SpaceModel::cone(3).unwrap(),
        ] {
            let p = match s.kind() {
                SpaceKind::Sphere2 => vec![0.0, 0.6, 0.8],
                _ => vec![0.3; s.dim()],
            };
            let u: Vec<f64> = (0..s.dim()).map(|i| 0.7 - 0.2 * i as f64).collect();
            assert_eq!(s.eval_two_form(&Point::new(p), &u, &u).unwrap(), 0.0);
        }
    }

    #[test]
    fn eval_rejects_bad_input() {
        let s = SpaceModel::euclidean(1).unwrap();
        let p = Point::new(vec![0.0, 0.0]);
        assert!(matches!(
            s.eval_two_form(&p, &[1.0, 0.0, 0.0], &[0.0, 1.0]),
            Err(PqError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            s.eval_two_form(&p, &[f64::NAN, 0.0], &[0.0, 1.0]),
            Err(PqError::NonFinite(_))
        ));
        let sphere = SpaceModel::sphere2();
        assert!(matches!(
            sphere.eval_two_form(&Point::new(vec![0.0, 0.0, 1.1]), &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]),
            Err(PqError::OffSphere(_))
        ));
    }

    #[test]
    fn constructors_validate() {
        assert!(SpaceModel::euclidean(0).is_err());
        assert!(SpaceModel::cone(1).is_err());
        assert!(SpaceModel::sphere2().with_normalization(0.0).is_err());
        assert!(SpaceModel::sphere2().with_normalization(f64::INFINITY).is_err());
        assert_eq!(
            SpaceModel::sphere2().with_normalization(2.0).unwrap().normalization(),
            2.0
        );
    }

    #[test]
    fn tangent_projection() {
        let s = SpaceModel::sphere2();
        let north = Point::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(s.project_tangent(&north, &[0.0, 0.0, 5.0]), vec![0.0, 0.0, 0.0]);
        // Gram–Schmidt against p = e₁.
        let e1 = Point::new(vec![1.0, 0.0, 0.0]);
        let w = [1.0, 1.0, 0.0];
        let along = w[0];
        let expected = [w[0] - along, w[1], w[2]];
        assert_eq!(s.project_tangent(&e1, &w), expected.to_vec());
        let e = SpaceModel::euclidean(1).unwrap();
        assert_eq!(
            e.project_tangent(&Point::new(vec![3.0, 4.0]), &[1.5, -2.0]),
            vec![1.5, -2.0]
        );
    }

    #[test]
    fn geodesic_examples() {
        let s = SpaceModel::sphere2();
        let a = Point::new(vec![1.0, 0.0, 0.0]);
        let b = Point::new(vec![0.0, 1.0, 0.0]);
        let mid = s.geodesic(&a, &b, 0.5).unwrap();
        let r = 0.5_f64.sqrt();
        for (x, y) in mid.coords().iter().zip([r, r, 0.0]) {
            assert!((x - y).abs() < 1e-15);
        }
        let e = SpaceModel::euclidean(1).unwrap();
        let q = e
            .geodesic(&Point::new(vec![0.0, 0.0]), &Point::new(vec![2.0, 0.0]), 0.25)
            .unwrap();
        assert_eq!(q.coords(), &[0.5, 0.0]);
        let n = Point::new(vec![0.0, 0.0, 1.0]);
        let south = Point::new(vec![0.0, 0.0, -1.0]);
        assert_eq!(s.geodesic(&n, &south, 0.3), Err(PqError::AntipodalPoints));
    }

    #[test]
    fn geodesic_ends_exact_and_speed_constant() {
        let s = SpaceModel::sphere2();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = Point::new(random_unit(&mut rng));
            let b = Point::new(random_unit(&mut rng));
            if dot(a.coords(), b.coords()) < -0.99 {
                continue;
            }
            assert_eq!(s.geodesic(&a, &b, 0.0).unwrap(), a);
            assert_eq!(s.geodesic(&a, &b, 1.0).unwrap(), b);
            let angle = norm(&cross(a.coords(), b.coords())).atan2(dot(a.coords(), b.coords()));
            let steps = 16;
            for k in 0..steps {
                let p = s.geodesic(&a, &b, k as f64 / steps as f64).unwrap();
                let q = s.geodesic(&a, &b, (k + 1) as f64 / steps as f64).unwrap();
                let arc = norm(&cross(p.coords(), q.coords())).atan2(dot(p.coords(), q.coords()));
                assert!((arc - angle / steps as f64).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn orbifold_examples() {
        let w = 2.0 * PI / 3.0;
        let c = orbifold_canonical(3, [w.cos(), w.sin()]);
        assert!((c[0] - 1.0).abs() < 1e-12 && c[1].abs() < 1e-12);
        assert_eq!(orbifold_canonical(2, [-1.0, 0.0])[0], 1.0);
        assert!(orbifold_canonical(2, [-1.0, 0.0])[1].abs() < 1e-15);
        // i · 2e^{iπ/8} has argument π/2 + π/8; reducing by π/2 leaves π/8.
        let t = PI / 8.0;
        let z = [-2.0 * t.sin(), 2.0 * t.cos()];
        let c = orbifold_canonical(4, z);
        assert!((c[0] - 2.0 * t.cos()).abs() < 1e-12);
        assert!((c[1] - 2.0 * t.sin()).abs() < 1e-12);
        assert_eq!(orbifold_canonical(5, [0.0, 0.0]), [0.0, 0.0]);
    }

    #[test]
    fn random_antisymmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spaces = [
            SpaceModel::euclidean(2).unwrap(),
            SpaceModel::sphere2(),
            SpaceModel::cone(5).unwrap(),
        ];
        for _ in 0..1000 {
            for s in &spaces {
                let p = if s.is_sphere() {
                    random_unit(&mut rng)
                } else {
                    (0..s.dim()).map(|_| rng.gen_range(-3.0..3.0)).collect()
                };
                let u: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                assert!((s.omega(&p, &u, &v) + s.omega(&p, &v, &u)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn primitive_differentiates_to_omega() {
        // dα(u, v) = ∂_u α(v) − ∂_v α(u) for constant fields u, v.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = 1e-4;
        for s in [
            SpaceModel::euclidean(2).unwrap(),
            SpaceModel::cone(3).unwrap().with_normalization(1.5).unwrap(),
        ] {
            for _ in 0..100 {
                let p: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let u: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let v: Vec<f64> = (0..s.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let shift = |d: &[f64], k: f64| -> Vec<f64> { p.iter().zip(d).map(|(a, b)| a + k * b).collect() };
                let du_av = (s.alpha(&shift(&u, h), &v) - s.alpha(&shift(&u, -h), &v)) / (2.0 * h);
                let dv_au = (s.alpha(&shift(&v, h), &u) - s.alpha(&shift(&v, -h), &u)) / (2.0 * h);
                let exact = s.omega(&p, &u, &v);
                assert!((du_av - dv_au - exact).abs() <= 1e-6 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn cone_primitive_is_deck_invariant() {
        let s = SpaceModel::cone(5).unwrap();
        let p = [0.4, -1.3];
        let u = [0.2, 0.9];
        for k in 0..5 {
            let gp = deck_rotate(5, k, &p);
            let gu = deck_rotate(5, k, &u);
            assert!((s.alpha(&gp, &gu) - s.alpha(&p, &u)).abs() < 1e-14);
        }
    }

    #[test]
    fn orbifold_equality_is_an_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [2_u32, 3, 7] {
            for _ in 0..200 {
                let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
                let k = rng.gen_range(0..m as i64);
                let gz = deck_rotate(m, k, &z);
                let ggz = deck_rotate(m, rng.gen_range(0..m as i64), &gz);
                assert!(cone_equal(m, &z, &z, 1e-12));
                assert!(cone_equal(m, &z, &gz, 1e-12) && cone_equal(m, &gz, &z, 1e-12));
                assert!(cone_equal(m, &z, &ggz, 1e-12));
                let c = orbifold_canonical(m, z);
                assert_eq!(orbifold_canonical(m, c), c);
                let cg = orbifold_canonical(m, gz);
                assert!(dist(&c, &cg) < 1e-12 || cone_equal(m, &c, &cg, 1e-12));
            }
        }
    }
}
