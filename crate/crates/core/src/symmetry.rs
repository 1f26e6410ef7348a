//! Symplectomorphisms acting on points, paths and homotopies; invariance of
//! the cocycle; moment maps against explicit generators.
//!
//! Moment pairing: `⟨Ψ(γ), ξ⟩ = ∫₀¹ ω(ξ(γ(t)), ∂_t γ) dt`, so that a field
//! with `ι_ξ ω = dH` has two-point moment `H(x′) − H(x)`. For the
//! z-rotation on S² (with the default normalization) `H = z/2`.

use rand::Rng;

use crate::error::{PqError, Result};
use crate::integrator::{sum_cells, QuadratureConfig};
use crate::paths::{SampledHomotopy, SampledPath};
use crate::prequantum::Prequantum;
use crate::spaces::{cross, deck_rotate, dot, norm, Point, SpaceKind, SpaceModel};

/// Tolerance on the structural checks of rotations and symplectic maps.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// An ω-preserving diffeomorphism from one of the represented subgroups.
#[derive(Debug, Clone, PartialEq)]
pub enum Diffeo {
    /// `p ↦ R p` on S².
    Rotation3 { r: [[f64; 3]; 3] },
    /// `p ↦ S p + b` on ℝ²ⁿ (row-major `S`).
    SymplecticAffine { n: usize, s: Vec<f64>, b: Vec<f64> },
    /// `z ↦ e^{2πik/m} z` on the cone.
    DeckPower { m: u32, k: u32 },
    /// `g₁ ∘ g₂ ∘ …`: the last entry acts first.
    Composite(Vec<Diffeo>),
}

impl Diffeo {
    /// Rotation by `angle` about `axis` (right-hand rule).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let l = norm(&axis);
        if !(l.is_finite() && l > 0.0 && angle.is_finite()) {
            return Err(PqError::InvalidDiffeo(
                "rotation needs a non-zero axis and a finite angle".into(),
            ));
        }
        let [x, y, z] = axis.map(|c| c / l);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        let r = [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ];
        Ok(Diffeo::Rotation3 { r })
    }

    pub fn rotation_matrix(r: [[f64; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                let g: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > STRUCTURE_TOL {
                    return Err(PqError::InvalidDiffeo("rotation matrix is not orthogonal".into()));
                }
            }
        }
        let det = crate::spaces::det3(&r[0], &r[1], &r[2]);
        if (det - 1.0).abs() > STRUCTURE_TOL {
            return Err(PqError::InvalidDiffeo(format!("rotation determinant is {det}")));
        }
        Ok(Diffeo::Rotation3 { r })
    }

    /// Affine map with symplectic linear part; `s` is `2n × 2n` row-major.
    pub fn symplectic(s: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let g = Self::affine_unchecked(s, b)?;
        if let Diffeo::SymplecticAffine { n, s, .. } = &g {
            let res = symplectic_defect(*n, s);
            if res > STRUCTURE_TOL {
                return Err(PqError::InvalidDiffeo(format!("SᵀJS differs from J by {res:e}")));
            }
        }
        Ok(g)
    }

    /// Affine map without the symplectic check (used for negative controls).
    pub fn affine_unchecked(s: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let d = b.len();
        if d == 0 || !d.is_multiple_of(2) || s.len() != d * d {
            return Err(PqError::InvalidDiffeo(format!(
                "affine map needs an even dimension, got S with {} entries and b with {d}",
                s.len()
            )));
        }
        if s.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(PqError::NonFinite("affine map"));
        }
        Ok(Diffeo::SymplecticAffine { n: d / 2, s, b })
    }

    pub fn translation(b: Vec<f64>) -> Result<Self> {
        let d = b.len();
        let mut s = vec![0.0; d * d];
        (0..d).for_each(|i| s[i * d + i] = 1.0);
        Self::symplectic(s, b)
    }

    pub fn deck(m: u32, k: u32) -> Result<Self> {
        if m < 2 || k >= m {
            return Err(PqError::InvalidDiffeo(format!(
                "deck power needs 0 ≤ k < m, got k={k}, m={m}"
            )));
        }
        Ok(Diffeo::DeckPower { m, k })
    }

    /// `g ∘ h`.
    pub fn compose(g: &Diffeo, h: &Diffeo) -> Diffeo {
        let mut parts = Vec::new();
        for x in [g, h] {
            match x {
                Diffeo::Composite(v) => parts.extend(v.iter().cloned()),
                other => parts.push(other.clone()),
            }
        }
        Diffeo::Composite(parts)
    }

    /// A rotation with uniformly random axis and angle.
    pub fn random_rotation(rng: &mut impl Rng) -> Self {
        let axis = random_unit(rng);
        Self::rotation(axis, rng.gen_range(0.0..std::f64::consts::TAU)).expect("unit axis")
    }

    /// A random symplectic-affine map of ℝ²ⁿ: a product of shears and
    /// per-plane SL(2) factors, plus a translation.
    pub fn random_symplectic(n: usize, rng: &mut impl Rng) -> Self {
        let d = 2 * n;
        let mut s = identity(d);
        for _ in 0..3 {
            // Per-plane SL(2) block [[a, b], [c, (1 + bc)/a]].
            let mut blk = vec![0.0; d * d];
            for i in 0..n {
                let a: f64 = rng.gen_range(0.5..2.0);
                let b: f64 = rng.gen_range(-1.0..1.0);
                let c: f64 = rng.gen_range(-1.0..1.0);
                let (x, y) = (2 * i, 2 * i + 1);
                blk[x * d + x] = a;
                blk[x * d + y] = b;
                blk[y * d + x] = c;
                blk[y * d + y] = (1.0 + b * c) / a;
            }
            s = matmul(d, &blk, &s);
            // Shear x_i += Σ A_ij y_j with A symmetric.
            let mut sh = identity(d);
            for i in 0..n {
                for j in i..n {
                    let a: f64 = rng.gen_range(-0.5..0.5);
                    sh[2 * i * d + 2 * j + 1] = a;
                    sh[2 * j * d + 2 * i + 1] = a;
                }
            }
            s = matmul(d, &sh, &s);
        }
        let b = (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect();
        Diffeo::SymplecticAffine { n, s, b }
    }

    /// Whether the map acts on `space`.
    pub fn check_space(&self, space: &SpaceModel) -> Result<()> {
        let ok = match (self, space.kind()) {
            (Diffeo::Rotation3 { .. }, SpaceKind::Sphere2) => true,
            (Diffeo::SymplecticAffine { n, .. }, SpaceKind::EuclideanSymplectic { n: k }) => *n == k,
            (Diffeo::DeckPower { m, .. }, SpaceKind::ConeOrbifold { m: k }) => *m == k,
            (Diffeo::Composite(v), _) => return v.iter().try_for_each(|g| g.check_space(space)),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(PqError::SpaceMismatch)
        }
    }

    /// Applies the map; sphere images are renormalized.
    pub(crate) fn apply(&self, p: &[f64]) -> Vec<f64> {
        match self {
            Diffeo::Rotation3 { r } => {
                let mut out: Vec<f64> = r.iter().map(|row| dot(row, p)).collect();
                let l = norm(&out);
                out.iter_mut().for_each(|x| *x /= l);
                out
            }
            Diffeo::SymplecticAffine { n, s, b } => {
                let d = 2 * n;
                (0..d).map(|i| dot(&s[i * d..(i + 1) * d], p) + b[i]).collect()
            }
            Diffeo::DeckPower { m, k } => deck_rotate(*m, *k as i64, p).to_vec(),
            Diffeo::Composite(v) => v.iter().rev().fold(p.to_vec(), |x, g| g.apply(&x)),
        }
    }

    /// The differential applied to a tangent vector (all maps are affine in
    /// the ambient coordinates).
    pub(crate) fn push_vector(&self, w: &[f64]) -> Vec<f64> {
        match self {
            Diffeo::Rotation3 { r } => r.iter().map(|row| dot(row, w)).collect(),
            Diffeo::SymplecticAffine { n, s, .. } => {
                let d = 2 * n;
                (0..d).map(|i| dot(&s[i * d..(i + 1) * d], w)).collect()
            }
            Diffeo::DeckPower { m, k } => deck_rotate(*m, *k as i64, w).to_vec(),
            Diffeo::Composite(v) => v.iter().rev().fold(w.to_vec(), |x, g| g.push_vector(&x)),
        }
    }
}

fn identity(d: usize) -> Vec<f64> {
    let mut s = vec![0.0; d * d];
    (0..d).for_each(|i| s[i * d + i] = 1.0);
    s
}

fn matmul(d: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = (0..d).map(|k| a[i * d + k] * b[k * d + j]).sum();
        }
    }
    out
}

/// `max |SᵀJS − J|` with `J` the interleaved standard symplectic matrix.
fn symplectic_defect(n: usize, s: &[f64]) -> f64 {
    let d = 2 * n;
    let j = |a: usize, b: usize| -> f64 {
        if a / 2 != b / 2 {
            0.0
        } else if a.is_multiple_of(2) && b == a + 1 {
            1.0
        } else if a % 2 == 1 && b + 1 == a {
            -1.0
        } else {
            0.0
        }
    };
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let mut v = 0.0;
            for k in 0..d {
                for l in 0..d {
                    v += s[k * d + a] * j(k, l) * s[l * d + b];
                }
            }
            worst = worst.max((v - j(a, b)).abs());
        }
    }
    worst
}

fn random_unit(rng: &mut impl Rng) -> [f64; 3] {
    loop {
        let v = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        let l = norm(&v);
        if l > 1e-3 && l <= 1.0 {
            return v.map(|c| c / l);
        }
    }
}

/// A random point of the space (unit sphere, box `[-2, 2]` otherwise).
pub fn random_point(space: &SpaceModel, rng: &mut impl Rng) -> Point {
    if space.is_sphere() {
        Point::new(random_unit(rng).to_vec())
    } else {
        Point::new((0..space.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect::<Vec<_>>())
    }
}

pub fn act_point(g: &Diffeo, space: &SpaceModel, p: &Point) -> Result<Point> {
    g.check_space(space)?;
    space.point(g.apply(p.coords()))
}

pub fn act_path(g: &Diffeo, path: &SampledPath) -> Result<SampledPath> {
    g.check_space(path.space())?;
    path.map_coords(|p| g.apply(p))
}

pub fn act_homotopy(g: &Diffeo, h: &SampledHomotopy) -> Result<SampledHomotopy> {
    g.check_space(h.space())?;
    h.map_coords(|p| g.apply(p))
}

/// `max |ω_{g(p)}(dg·u, dg·v) − ω_p(u, v)|` over random tangent data.
pub fn omega_invariance_residual(g: &Diffeo, space: &SpaceModel, samples: usize, rng: &mut impl Rng) -> Result<f64> {
    g.check_space(space)?;
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let p = random_point(space, rng);
        let mut tangent = || {
            let w: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            space.project_tangent(&p, &w)
        };
        let (u, v) = (tangent(), tangent());
        let before = space.omega(p.coords(), &u, &v);
        let after = space.omega(&g.apply(p.coords()), &g.push_vector(&u), &g.push_vector(&v));
        worst = worst.max((after - before).abs());
    }
    Ok(worst)
}

/// `|φ(gγ, gγ′) − φ(γ, γ′)|` modulo the period group.
pub fn cocycle_invariance_residual(pq: &Prequantum, g: &Diffeo, a: &SampledPath, b: &SampledPath) -> Result<f64> {
    let before = pq.cocycle_phi(a, b, None)?;
    let after = pq.cocycle_phi(&act_path(g, a)?, &act_path(g, b)?, None)?;
    before.distance(&after)
}

/// A vector field generating a one-parameter subgroup of symmetries.
#[derive(Debug, Clone, PartialEq)]
pub enum LieGenerator {
    /// `ξ(p) = u × p` on S², `u` a unit axis.
    Rotation { axis: [f64; 3] },
    /// Hamiltonian field of `H(p) = c·p + ½ pᵀAp` on ℝ²ⁿ, with
    /// `ξ_{x_i} = ∂H/∂y_i`, `ξ_{y_i} = −∂H/∂x_i`.
    Hamiltonian {
        n: usize,
        linear: Vec<f64>,
        quadratic: Vec<f64>,
    },
}

impl LieGenerator {
    pub fn rotation(axis: [f64; 3]) -> Result<Self> {
        let l = norm(&axis);
        if !(l.is_finite() && (l - 1.0).abs() <= 1e-12) {
            return Err(PqError::InvalidGenerator(format!(
                "rotation axis must be a unit vector, norm is {l}"
            )));
        }
        Ok(LieGenerator::Rotation { axis })
    }

    /// `H(p) = c·p`: a translation field.
    pub fn linear_hamiltonian(c: Vec<f64>) -> Result<Self> {
        let d = c.len();
        Self::hamiltonian(c, vec![0.0; d * d])
    }

    /// `H(p) = c·p + ½ pᵀAp` with `A` symmetric, row-major.
    pub fn hamiltonian(linear: Vec<f64>, quadratic: Vec<f64>) -> Result<Self> {
        let d = linear.len();
        if d == 0 || !d.is_multiple_of(2) || quadratic.len() != d * d {
            return Err(PqError::InvalidGenerator(
                "Hamiltonian needs c of even length 2n and A of size 2n×2n".into(),
            ));
        }
        if linear.iter().chain(&quadratic).any(|x| !x.is_finite()) {
            return Err(PqError::NonFinite("generator coefficients"));
        }
        for i in 0..d {
            for j in 0..i {
                if (quadratic[i * d + j] - quadratic[j * d + i]).abs() > 1e-12 {
                    return Err(PqError::InvalidGenerator("quadratic part must be symmetric".into()));
                }
            }
        }
        Ok(LieGenerator::Hamiltonian {
            n: d / 2,
            linear,
            quadratic,
        })
    }

    pub fn check_space(&self, space: &SpaceModel) -> Result<()> {
        match (self, space.kind()) {
            (LieGenerator::Rotation { .. }, SpaceKind::Sphere2) => Ok(()),
            (LieGenerator::Hamiltonian { n, .. }, SpaceKind::EuclideanSymplectic { n: k }) if *n == k => Ok(()),
            _ => Err(PqError::SpaceMismatch),
        }
    }

    /// `ξ(p)`.
    pub fn field(&self, p: &[f64]) -> Vec<f64> {
        match self {
            LieGenerator::Rotation { axis } => cross(axis, p).to_vec(),
            LieGenerator::Hamiltonian { n, linear, quadratic } => {
                let d = 2 * n;
                let grad: Vec<f64> = (0..d)
                    .map(|i| linear[i] + dot(&quadratic[i * d..(i + 1) * d], p))
                    .collect();
                let mut xi = vec![0.0; d];
                for i in 0..*n {
                    xi[2 * i] = grad[2 * i + 1];
                    xi[2 * i + 1] = -grad[2 * i];
                }
                xi
            }
        }
    }

    /// The Hamiltonian `H` with `ι_ξ ω = dH`, including the normalization.
    pub fn hamiltonian_value(&self, space: &SpaceModel, p: &[f64]) -> f64 {
        let raw = match self {
            LieGenerator::Rotation { axis } => 0.5 * dot(axis, p),
            LieGenerator::Hamiltonian { n, linear, quadratic } => {
                let d = 2 * n;
                let quad: f64 = (0..d).map(|i| p[i] * dot(&quadratic[i * d..(i + 1) * d], p)).sum();
                dot(linear, p) + 0.5 * quad
            }
        };
        space.normalization() * raw
    }
}

/// Moment values against a basis of generators.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub coefficients: Vec<f64>,
}

/// `⟨Ψ(γ), ξ⟩ = ∫ ω(ξ, ∂_t γ) dt` by the chord-midpoint rule.
pub fn paths_moment(g: &SampledPath, xi: &LieGenerator, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    let space = *g.space();
    xi.check_space(&space)?;
    let d = space.dim();
    let r = cfg.refine;
    let cells = (g.knot_count() - 1) * r;
    let total = sum_cells(cells, |c| {
        let (i, k) = (c / r, c % r);
        let mut p0 = vec![0.0; d];
        let mut p1 = vec![0.0; d];
        g.eval_segment(i, k as f64 / r as f64, &mut p0);
        g.eval_segment(i, (k + 1) as f64 / r as f64, &mut p1);
        let mut mid: Vec<f64> = p0.iter().zip(&p1).map(|(a, b)| 0.5 * (a + b)).collect();
        space.retract(&mut mid);
        let dp: Vec<f64> = p1.iter().zip(&p0).map(|(b, a)| b - a).collect();
        space.omega(&mid, &xi.field(&mid), &dp)
    });
    if total.is_finite() {
        Ok(total)
    } else {
        Err(PqError::Numeric("moment is not finite".into()))
    }
}

pub fn moment_vector(g: &SampledPath, basis: &[LieGenerator], cfg: &QuadratureConfig) -> Result<MomentValue> {
    let coefficients = basis.iter().map(|xi| paths_moment(g, xi, cfg)).collect::<Result<_>>()?;
    Ok(MomentValue { coefficients })
}

/// `ψ(x, x′)`: the moment of the reference path from `x` to `x′`.
pub fn two_point_moment(pq: &Prequantum, x: &Point, y: &Point, xi: &LieGenerator) -> Result<f64> {
    let r = pq.reference(x.coords(), y.coords(), 1)?;
    paths_moment(&r, xi, &pq.cfg)
}

/// `μ(x) = ψ(x₀, x)`.
pub fn one_point_moment(pq: &Prequantum, x: &Point, xi: &LieGenerator, base: &Point) -> Result<f64> {
    two_point_moment(pq, base, x, xi)
}

/// `|Ψ(γ ∨ γ′) − Ψ(γ) − Ψ(γ′)|`.
pub fn moment_additivity_residual(
    a: &SampledPath,
    b: &SampledPath,
    xi: &LieGenerator,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    let ab = a.concat(b)?;
    Ok((paths_moment(&ab, xi, cfg)? - paths_moment(a, xi, cfg)? - paths_moment(b, xi, cfg)?).abs())
}
