//! Quadrature kernels: line integrals of the primitive, the chain-homotopy
//! pairing of ω with sampled homotopies, sphere sweeps and the discrete
//! `d ∘ K` identity.
//!
//! Every kernel produces one value per cell in a fixed order and reduces the
//! list with [`pairwise_sum`], so results do not depend on the thread count.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{PqError, Result};
use crate::paths::{SampledHomotopy, SampledPath};
use crate::spaces::{OneForm, Point, SpaceModel, TwoForm};

/// Cell count above which per-cell work is spread over the rayon pool.
const PAR_THRESHOLD: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Supersampling factor per cell.
    pub refine: usize,
    /// Number of `s` steps for homotopies built on the fly.
    pub rows: usize,
    /// Threshold recorded next to reported residuals.
    pub tol_report: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            refine: 1,
            rows: 128,
            tol_report: 1e-4,
        }
    }
}

impl QuadratureConfig {
    pub fn with_refine(mut self, refine: usize) -> Self {
        self.refine = refine;
        self
    }

    pub fn with_rows(mut self, rows: usize) -> Self {
        self.rows = rows;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.refine == 0 {
            return Err(PqError::InvalidConfig("refine must be ≥ 1".into()));
        }
        if self.rows == 0 {
            return Err(PqError::InvalidConfig("rows must be ≥ 1".into()));
        }
        if !(self.tol_report.is_finite() && self.tol_report >= 0.0) {
            return Err(PqError::InvalidConfig(format!(
                "tolerance must be finite and ≥ 0, got {}",
                self.tol_report
            )));
        }
        Ok(())
    }
}

/// Sum by a fixed binary tree over the slice.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Evaluates `f` on `0..n` (in parallel for large `n`) and reduces pairwise.
pub(crate) fn sum_cells(n: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    let values: Vec<f64> = if n >= PAR_THRESHOLD {
        (0..n).into_par_iter().map(&f).collect()
    } else {
        (0..n).map(f).collect()
    };
    pairwise_sum(&values)
}

fn finite(x: f64, what: &str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(PqError::Numeric(format!("{what} is not finite")))
    }
}

/// `∫_γ α` by the composite midpoint rule on every knot interval.
pub fn line_integral(alpha: &OneForm, gamma: &SampledPath, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if alpha.space() != gamma.space() {
        return Err(PqError::SpaceMismatch);
    }
    let d = gamma.space().dim();
    let r = cfg.refine;
    let cells = (gamma.knot_count() - 1) * r;
    let total = sum_cells(cells, |c| {
        let (i, k) = (c / r, c % r);
        let mut p0 = vec![0.0; d];
        let mut p1 = vec![0.0; d];
        gamma.eval_segment(i, k as f64 / r as f64, &mut p0);
        gamma.eval_segment(i, (k + 1) as f64 / r as f64, &mut p1);
        let mid: Vec<f64> = p0.iter().zip(&p1).map(|(a, b)| 0.5 * (a + b)).collect();
        let dp: Vec<f64> = p1.iter().zip(&p0).map(|(b, a)| b - a).collect();
        alpha.eval(&mid, &dp)
    });
    finite(total, "line integral")
}

/// `∫₀¹∫₀¹ ω(∂t σ, ∂s σ) dt ds`.
///
/// Each grid cell with corners `a = σ(s_i, t_j)`, `b = σ(s_i, t_{j+1})`,
/// `c = σ(s_{i+1}, t_{j+1})`, `d = σ(s_{i+1}, t_j)` contributes
/// `ω_m(((b−a)+(c−d))/2, ((d−a)+(c−b))/2)` with `m` the (retracted) corner
/// mean. This is exact for planar quadrilaterals. `refine > 1` splits every
/// cell bilinearly before applying the rule.
pub fn k_pairing(omega: &TwoForm, sigma: &SampledHomotopy, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    if omega.space() != sigma.space() {
        return Err(PqError::SpaceMismatch);
    }
    let (rows, cols) = (sigma.rows() - 1, sigma.cols() - 1);
    let space = *sigma.space();
    let r = cfg.refine;
    let total = sum_cells(rows * cols, |c| {
        let (i, j) = (c / cols, c % cols);
        let a = sigma.point(i, j);
        let b = sigma.point(i, j + 1);
        let cc = sigma.point(i + 1, j + 1);
        let d = sigma.point(i + 1, j);
        if r == 1 {
            quad_value(omega, &space, a, b, cc, d)
        } else {
            refined_quad(omega, &space, [a, b, cc, d], r)
        }
    });
    finite(total, "pairing")
}

/// Pairing with the homotopy's own two-form.
pub fn pairing(sigma: &SampledHomotopy, cfg: &QuadratureConfig) -> Result<f64> {
    k_pairing(&sigma.space().two_form(), sigma, cfg)
}

#[inline]
fn quad_value(omega: &TwoForm, space: &SpaceModel, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let n = a.len();
    let mut m = [0.0; 8];
    let mut dt = [0.0; 8];
    let mut ds = [0.0; 8];
    let (m, dt, ds) = if n <= 8 {
        (&mut m[..n], &mut dt[..n], &mut ds[..n])
    } else {
        return quad_value_heap(omega, space, a, b, c, d);
    };
    for k in 0..n {
        m[k] = 0.25 * ((a[k] + b[k]) + (c[k] + d[k]));
        dt[k] = 0.5 * ((b[k] - a[k]) + (c[k] - d[k]));
        ds[k] = 0.5 * ((d[k] - a[k]) + (c[k] - b[k]));
    }
    space.retract(m);
    omega.eval(m, dt, ds)
}

fn quad_value_heap(omega: &TwoForm, space: &SpaceModel, a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> f64 {
    let n = a.len();
    let mut m: Vec<f64> = (0..n).map(|k| 0.25 * ((a[k] + b[k]) + (c[k] + d[k]))).collect();
    let dt: Vec<f64> = (0..n).map(|k| 0.5 * ((b[k] - a[k]) + (c[k] - d[k]))).collect();
    let ds: Vec<f64> = (0..n).map(|k| 0.5 * ((d[k] - a[k]) + (c[k] - b[k]))).collect();
    space.retract(&mut m);
    omega.eval(&m, &dt, &ds)
}

fn refined_quad(omega: &TwoForm, space: &SpaceModel, q: [&[f64]; 4], r: usize) -> f64 {
    let n = q[0].len();
    // Sub-grid nodes by bilinear interpolation, u along t and v along s.
    let mut nodes = vec![0.0; (r + 1) * (r + 1) * n];
    for iv in 0..=r {
        let v = iv as f64 / r as f64;
        for iu in 0..=r {
            let u = iu as f64 / r as f64;
            let w = [(1.0 - u) * (1.0 - v), u * (1.0 - v), u * v, (1.0 - u) * v];
            let out = &mut nodes[(iv * (r + 1) + iu) * n..][..n];
            for k in 0..n {
                out[k] = w[0] * q[0][k] + w[1] * q[1][k] + w[2] * q[2][k] + w[3] * q[3][k];
            }
            space.retract(out);
        }
    }
    let at = |iv: usize, iu: usize| &nodes[(iv * (r + 1) + iu) * n..][..n];
    let mut vals = Vec::with_capacity(r * r);
    for iv in 0..r {
        for iu in 0..r {
            vals.push(quad_value(
                omega,
                space,
                at(iv, iu),
                at(iv, iu + 1),
                at(iv + 1, iu + 1),
                at(iv + 1, iu),
            ));
        }
    }
    pairwise_sum(&vals)
}

/// `|K(σ ∗ σ′) − K(σ) − K(σ′)|`.
pub fn pairing_additivity_residual(a: &SampledHomotopy, b: &SampledHomotopy, cfg: &QuadratureConfig) -> Result<f64> {
    let ab = crate::paths::concat_homotopy(a, b)?;
    Ok((pairing(&ab, cfg)? - pairing(a, cfg)? - pairing(b, cfg)?).abs())
}

/// The latitude sweep of S² from the south pole (`s = 0`) towards the north
/// pole, truncated at `s = s_max`; row `s` is the circle at polar angle
/// `π(1 − s)` traversed eastward as a geodesic polygon with `T` sides.
pub fn sphere_sweep(space: &SpaceModel, s_max: f64, s_steps: usize, t_steps: usize) -> Result<SampledHomotopy> {
    if !space.is_sphere() {
        return Err(PqError::InvalidSpace(format!(
            "sphere sweep needs sphere2, got {}",
            space.name()
        )));
    }
    if !(s_max > 0.0 && s_max <= 1.0) {
        return Err(PqError::Numeric(format!(
            "sweep extent must lie in (0, 1], got {s_max}"
        )));
    }
    if s_steps == 0 || t_steps < 3 {
        return Err(PqError::DegenerateGrid("sphere sweep needs S ≥ 1 and T ≥ 3".into()));
    }
    let trig: Vec<(f64, f64)> = (0..=t_steps)
        .map(|j| {
            let phi = 2.0 * PI * (j % t_steps) as f64 / t_steps as f64;
            phi.sin_cos()
        })
        .collect();
    let mut data = Vec::with_capacity((s_steps + 1) * (t_steps + 1) * 3);
    for i in 0..=s_steps {
        let s = s_max * i as f64 / s_steps as f64;
        let pole = if i == 0 {
            Some(-1.0)
        } else if i == s_steps && s_max == 1.0 {
            Some(1.0)
        } else {
            None
        };
        let theta = PI * (1.0 - s);
        let (st, ct) = theta.sin_cos();
        for &(sp, cp) in &trig {
            match pole {
                Some(z) => data.extend([0.0, 0.0, z]),
                None => data.extend([st * cp, st * sp, ct]),
            }
        }
    }
    let times = (0..=t_steps).map(|j| j as f64 / t_steps as f64).collect();
    SampledHomotopy::with_times(*space, times, s_steps + 1, data, false)
}

/// Pairing of ω with the full latitude sweep; the continuum value is `∫_{S²} ω`.
pub fn sphere_sweep_integral(
    space: &SpaceModel,
    s_steps: usize,
    t_steps: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    pairing(&sphere_sweep(space, 1.0, s_steps, t_steps)?, cfg)
}

/// Pairing with the sweep truncated at `s_max` (`½` gives the southern hemisphere).
pub fn partial_sphere_sweep_integral(
    space: &SpaceModel,
    s_max: f64,
    s_steps: usize,
    t_steps: usize,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    pairing(&sphere_sweep(space, s_max, s_steps, t_steps)?, cfg)
}

/// A `U × V` grid of paths `γ_{u,v}` sharing their knot times, with
/// parameter steps `du`, `dv`.
#[derive(Debug, Clone)]
pub struct PathFamily {
    space: SpaceModel,
    nu: usize,
    nv: usize,
    du: f64,
    dv: f64,
    times: Vec<f64>,
    paths: Vec<SampledPath>,
}

impl PathFamily {
    /// `paths[i][j]` is `γ_{u_i, v_j}`.
    pub fn new(paths: Vec<Vec<SampledPath>>, du: f64, dv: f64) -> Result<Self> {
        let nu = paths.len();
        let nv = paths.first().map_or(0, Vec::len);
        if nu == 0 || nv == 0 || paths.iter().any(|r| r.len() != nv) {
            return Err(PqError::DegenerateGrid(
                "family must be a non-empty rectangular grid".into(),
            ));
        }
        if !(du > 0.0 && dv > 0.0 && du.is_finite() && dv.is_finite()) {
            return Err(PqError::DegenerateGrid("parameter steps must be positive".into()));
        }
        let paths: Vec<SampledPath> = paths.into_iter().flatten().collect();
        let space = *paths[0].space();
        let times = paths[0].times().to_vec();
        for p in &paths {
            if *p.space() != space {
                return Err(PqError::SpaceMismatch);
            }
            if p.times() != times.as_slice() {
                return Err(PqError::InvalidPath("family paths must share knot times".into()));
            }
        }
        Ok(PathFamily {
            space,
            nu,
            nv,
            du,
            dv,
            times,
            paths,
        })
    }

    /// `γ_{u,v}(t) = f(u, v, t)` for `u, v ∈ [0, 1]` on a `U × V` grid,
    /// each path with `T + 1` uniform knots.
    pub fn from_fn(
        space: SpaceModel,
        nu: usize,
        nv: usize,
        t_steps: usize,
        f: impl Fn(f64, f64, f64) -> Point,
    ) -> Result<Self> {
        if nu < 2 || nv < 2 {
            return Err(PqError::DegenerateGrid(
                "family needs at least 2 samples per direction".into(),
            ));
        }
        let (du, dv) = (1.0 / (nu - 1) as f64, 1.0 / (nv - 1) as f64);
        let mut grid = Vec::with_capacity(nu);
        for i in 0..nu {
            let mut row = Vec::with_capacity(nv);
            for j in 0..nv {
                let (u, v) = (i as f64 * du, j as f64 * dv);
                row.push(SampledPath::from_fn(space, t_steps, |t| f(u, v, t))?);
            }
            grid.push(row);
        }
        Self::new(grid, du, dv)
    }

    pub fn space(&self) -> &SpaceModel {
        &self.space
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }

    pub fn steps(&self) -> (f64, f64) {
        (self.du, self.dv)
    }

    pub fn path(&self, i: usize, j: usize) -> &SampledPath {
        &self.paths[i * self.nv + j]
    }

    /// The homotopy whose rows are the listed family members.
    pub fn sub_homotopy(&self, nodes: &[(usize, usize)]) -> Result<SampledHomotopy> {
        let data = nodes
            .iter()
            .flat_map(|&(i, j)| {
                self.path(i, j)
                    .knots()
                    .flat_map(|(_, p)| p.to_vec())
                    .collect::<Vec<_>>()
            })
            .collect();
        SampledHomotopy::with_times(self.space, self.times.clone(), nodes.len(), data, false)
    }

    /// Pairing along `u` centred at node `(i, j)`: rows `γ_{i−1,j}, γ_{i,j}, γ_{i+1,j}`.
    pub(crate) fn g_u(&self, i: usize, j: usize, cfg: &QuadratureConfig) -> Result<f64> {
        pairing(&self.sub_homotopy(&[(i - 1, j), (i, j), (i + 1, j)])?, cfg)
    }

    /// Pairing along `v` centred at node `(i, j)`.
    pub(crate) fn g_v(&self, i: usize, j: usize, cfg: &QuadratureConfig) -> Result<f64> {
        pairing(&self.sub_homotopy(&[(i, j - 1), (i, j), (i, j + 1)])?, cfg)
    }

    /// `ω_p(Δ_u, Δ_v)` at the given end (0 or 1) with central differences.
    pub(crate) fn end_term(&self, end: usize, i: usize, j: usize) -> f64 {
        let pick = |a: usize, b: usize| -> &[f64] {
            let p = self.path(a, b);
            if end == 0 {
                p.knot(0)
            } else {
                p.knot(p.knot_count() - 1)
            }
        };
        let du: Vec<f64> = pick(i + 1, j).iter().zip(pick(i - 1, j)).map(|(a, b)| a - b).collect();
        let dv: Vec<f64> = pick(i, j + 1).iter().zip(pick(i, j - 1)).map(|(a, b)| a - b).collect();
        self.space.omega(pick(i, j), &du, &dv)
    }
}

/// Nodewise comparison of a discrete curl with a discrete right-hand side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlReport {
    /// `max |curl − rhs| / max |rhs|`, or the absolute error per unit
    /// parameter area when the right-hand side vanishes.
    pub residual: f64,
    pub max_abs_error: f64,
    pub max_rhs: f64,
    pub nodes: usize,
}

pub(crate) fn curl_report(curl: &[f64], rhs: &[f64], du: f64, dv: f64) -> CurlReport {
    let max_abs_error = curl.iter().zip(rhs).map(|(c, r)| (c - r).abs()).fold(0.0, f64::max);
    let max_rhs = rhs.iter().map(|r| r.abs()).fold(0.0, f64::max);
    // The discrete quantities carry a factor 4·du·dv.
    let area = 4.0 * du * dv;
    let residual = if max_rhs > 1e-14 * area {
        max_abs_error / max_rhs
    } else {
        max_abs_error / area
    };
    CurlReport {
        residual,
        max_abs_error,
        max_rhs,
        nodes: curl.len(),
    }
}

/// Discrete check of `d(Kω) = 1̂*ω − 0̂*ω` on a family of paths.
///
/// At each interior node the curl
/// `[G_v(i+1,j) − G_v(i−1,j)] − [G_u(i,j+1) − G_u(i,j−1)]` is compared with
/// `ω(Δ_u γ(1), Δ_v γ(1)) − ω(Δ_u γ(0), Δ_v γ(0))`, all differences central.
pub fn kdk_identity_residual(family: &PathFamily, cfg: &QuadratureConfig) -> Result<CurlReport> {
    let (nu, nv) = family.shape();
    if nu < 5 || nv < 5 {
        return Err(PqError::DegenerateGrid(format!(
            "kdk check needs a grid of at least 5×5, got {nu}×{nv}"
        )));
    }
    let mut gu = vec![0.0; nu * nv];
    let mut gv = vec![0.0; nu * nv];
    for i in 1..nu - 1 {
        for j in 1..nv - 1 {
            gu[i * nv + j] = family.g_u(i, j, cfg)?;
            gv[i * nv + j] = family.g_v(i, j, cfg)?;
        }
    }
    let mut curl = Vec::new();
    let mut rhs = Vec::new();
    for i in 2..nu - 2 {
        for j in 2..nv - 2 {
            curl.push((gv[(i + 1) * nv + j] - gv[(i - 1) * nv + j]) - (gu[i * nv + j + 1] - gu[i * nv + j - 1]));
            rhs.push(family.end_term(1, i, j) - family.end_term(0, i, j));
        }
    }
    let (du, dv) = family.steps();
    let report = curl_report(&curl, &rhs, du, dv);
    finite(report.residual, "kdk residual")?;
    Ok(report)
}

/// Outcome of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Convergence {
    /// Least-squares slope of `log err` against `log h`.
    Order(f64),
    /// Every error is at round-off level; no order is defined.
    Exact,
}

/// Observed order from `(h, error)` samples.
pub fn convergence_order(samples: &[(f64, f64)]) -> Result<Convergence> {
    if samples.len() < 3 {
        return Err(PqError::InsufficientPoints {
            needed: 3,
            found: samples.len(),
        });
    }
    if samples.iter().all(|&(_, e)| e.abs() < 1e-14) {
        return Ok(Convergence::Exact);
    }
    if samples
        .iter()
        .any(|&(h, e)| !h.is_finite() || h <= 0.0 || e == 0.0 || !e.is_finite())
    {
        return Err(PqError::Numeric(
            "convergence samples need h > 0 and finite non-zero errors".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(h, e)| (h.ln(), e.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        return Err(PqError::Numeric("convergence samples need distinct h".into()));
    }
    Ok(Convergence::Order(sxy / sxx))
}

/// Errors of the full sphere sweep at resolutions `(n, 2n)` against
/// `2π · normalization`, paired with `h = 1/n`.
pub fn sphere_sweep_errors(space: &SpaceModel, ns: &[usize], cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    let exact = 2.0 * PI * space.normalization();
    ns.iter()
        .map(|&n| Ok((1.0 / n as f64, sphere_sweep_integral(space, n, 2 * n, cfg)? - exact)))
        .collect()
}
