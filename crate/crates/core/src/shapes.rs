//! Stock paths, homotopies and families used by fixtures, suites and tests.

use std::f64::consts::PI;

use crate::error::{PqError, Result};
use crate::integrator::PathFamily;
use crate::paths::{SampledHomotopy, SampledPath};
use crate::spaces::{Point, SpaceModel};

fn need_sphere(space: &SpaceModel) -> Result<()> {
    if space.is_sphere() {
        Ok(())
    } else {
        Err(PqError::InvalidSpace(format!("expected sphere2, got {}", space.name())))
    }
}

fn latitude_point(theta: f64, j: usize, n: usize) -> [f64; 3] {
    if theta == 0.0 {
        return [0.0, 0.0, 1.0];
    }
    let phi = 2.0 * PI * (j % n) as f64 / n as f64;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// The circle at polar angle `theta`, eastward from azimuth 0, as a closed
/// geodesic polygon with `n` sides.
pub fn latitude_loop(space: &SpaceModel, theta: f64, n: usize) -> Result<SampledPath> {
    need_sphere(space)?;
    if n < 3 {
        return Err(PqError::DegenerateGrid("a latitude loop needs at least 3 sides".into()));
    }
    let pts = (0..=n)
        .map(|j| Point::new(latitude_point(theta, j, n).to_vec()))
        .collect();
    SampledPath::from_points(*space, pts)
}

/// Shrinks the latitude loop at `theta` through the northern cap onto the
/// north pole; row `i` is the loop at polar angle `theta (1 − i/rows)`.
pub fn cap_contraction(space: &SpaceModel, theta: f64, rows: usize, n: usize) -> Result<SampledHomotopy> {
    need_sphere(space)?;
    if rows == 0 || n < 3 {
        return Err(PqError::DegenerateGrid(
            "cap contraction needs rows ≥ 1 and n ≥ 3".into(),
        ));
    }
    let mut data = Vec::with_capacity((rows + 1) * (n + 1) * 3);
    for i in 0..=rows {
        let th = if i == rows {
            0.0
        } else {
            theta * (1.0 - i as f64 / rows as f64)
        };
        for j in 0..=n {
            data.extend(latitude_point(th, j, n));
        }
    }
    let times = (0..=n).map(|j| j as f64 / n as f64).collect();
    SampledHomotopy::with_times(*space, times, rows + 1, data, false)
}

/// Great-circle arc from `a` to `b` with `n` equal pieces.
pub fn great_arc(space: &SpaceModel, a: &Point, b: &Point, n: usize) -> Result<SampledPath> {
    need_sphere(space)?;
    let n = n.max(1);
    let pts = (0..=n)
        .map(|k| space.geodesic(a, b, k as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    SampledPath::from_points(*space, pts)
}

/// Polyline (or geodesic polygon) through `vertices`, each leg split into
/// `per_leg` pieces, uniformly timed.
pub fn polyline(space: &SpaceModel, vertices: &[Point], per_leg: usize) -> Result<SampledPath> {
    if vertices.len() < 2 {
        return Err(PqError::InvalidPath("a polyline needs at least 2 vertices".into()));
    }
    let per_leg = per_leg.max(1);
    let mut pts = vec![vertices[0].clone()];
    for w in vertices.windows(2) {
        for k in 1..=per_leg {
            pts.push(space.geodesic(&w[0], &w[1], k as f64 / per_leg as f64)?);
        }
    }
    SampledPath::from_points(*space, pts)
}

/// The planar segment from the origin to `(1, 0)`.
pub fn unit_segment(space: &SpaceModel) -> Result<SampledPath> {
    SampledPath::from_points(*space, vec![Point::new(vec![0.0, 0.0]), Point::new(vec![1.0, 0.0])])
}

/// The detour `(0,0) → (0,1) → (1,1) → (1,0)` around the unit square.
pub fn square_detour(space: &SpaceModel) -> Result<SampledPath> {
    let v = |x: f64, y: f64| Point::new(vec![x, y]);
    SampledPath::from_points(*space, vec![v(0.0, 0.0), v(0.0, 1.0), v(1.0, 1.0), v(1.0, 0.0)])
}

/// On the cone cover: the arc of radius `r` from angle 0 to `2π/m`, which
/// closes up in the quotient and winds once around the singular point.
pub fn cone_loop(space: &SpaceModel, r: f64, n: usize) -> Result<SampledPath> {
    let m = space
        .cone_order()
        .ok_or_else(|| PqError::InvalidSpace(format!("expected cone, got {}", space.name())))?;
    let wedge = 2.0 * PI / m as f64;
    SampledPath::from_fn(*space, n.max(2), |t| {
        let a = wedge * t;
        Point::new(vec![r * a.cos(), r * a.sin()])
    })
}

/// Homotopy whose row `s` is the two-leg geodesic `x → c(ψ) → y`, with
/// `c(ψ) = cos ψ · pole + sin ψ · w` and `ψ` running from `psi0` to `psi1`.
#[allow(clippy::too_many_arguments)]
pub fn vertex_sweep(
    space: &SpaceModel,
    x: &Point,
    y: &Point,
    pole: &[f64; 3],
    w: &[f64; 3],
    (psi0, psi1): (f64, f64),
    rows: usize,
    per_leg: usize,
) -> Result<SampledHomotopy> {
    need_sphere(space)?;
    let mut data = Vec::new();
    let mut times = Vec::new();
    for i in 0..=rows {
        let psi = psi0 + (psi1 - psi0) * i as f64 / rows as f64;
        let (s, c) = psi.sin_cos();
        let v = Point::new((0..3).map(|k| c * pole[k] + s * w[k]).collect::<Vec<_>>());
        let mut v = v.into_coords();
        let n = crate::spaces::norm(&v);
        v.iter_mut().for_each(|z| *z /= n);
        let row = polyline(space, &[x.clone(), Point::new(v), y.clone()], per_leg)?;
        if i == 0 {
            times = row.times().to_vec();
        }
        data.extend(row.knots().flat_map(|(_, p)| p.to_vec()));
    }
    SampledHomotopy::with_times(*space, times, rows + 1, data, true)
}

/// A Euclidean family of arcs, nonlinear in both parameters.
pub fn sheared_arc_family(nu: usize, nv: usize, nt: usize) -> Result<PathFamily> {
    let space = SpaceModel::euclidean(1)?;
    PathFamily::from_fn(space, nu, nv, nt, |u, v, t| {
        let a = 1.5 * t + 0.3 * u * v;
        Point::new(vec![
            (1.0 + 0.4 * u) * a.cos() + v,
            (1.0 + 0.2 * v * v) * a.sin() + 0.5 * u * t,
        ])
    })
}

/// A family of short great arcs on S² rotated and stretched by `(u, v)`;
/// stays well inside the northern hemisphere.
pub fn rotating_arc_family(nu: usize, nv: usize, nt: usize) -> Result<PathFamily> {
    let space = SpaceModel::sphere2();
    PathFamily::from_fn(space, nu, nv, nt, |u, v, t| {
        let theta = 0.5 + 0.3 * v + 0.4 * t * (1.0 - 0.3 * u);
        let phi = 0.8 * u + (0.6 + 0.2 * v) * t;
        SpaceModel::sphere_point(theta, phi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::dist;

    #[test]
    fn latitude_loops_close_exactly() {
        let s = SpaceModel::sphere2();
        let l = latitude_loop(&s, 1.0, 17).unwrap();
        assert_eq!(l.knot(0), l.knot(17));
        let c = cap_contraction(&s, 1.0, 5, 17).unwrap();
        assert_eq!(c.row_path(0), l);
        assert!((1..=17).all(|j| c.point(5, j) == [0.0, 0.0, 1.0]));
    }

    #[test]
    fn vertex_sweep_rows() {
        let s = SpaceModel::sphere2();
        let x = Point::new(vec![1.0, 0.0, 0.0]);
        let y = Point::new(vec![0.0, 1.0, 0.0]);
        let r = 0.5_f64.sqrt();
        let h = vertex_sweep(&s, &x, &y, &[0.0, 0.0, 1.0], &[-r, -r, 0.0], (0.0, -PI / 2.0), 8, 4).unwrap();
        assert!(h.fixed_ends());
        let mid = h.cols() / 2;
        assert!(dist(h.point(0, mid), &[0.0, 0.0, 1.0]) < 1e-15);
        assert!(dist(h.point(8, mid), &[r, r, 0.0]) < 1e-15);
    }

    #[test]
    fn cone_loop_closes_in_the_quotient() {
        let s = SpaceModel::cone(3).unwrap();
        let l = cone_loop(&s, 2.0, 64).unwrap();
        assert!(l.is_loop());
        assert!(dist(l.knot(0), l.knot(64)) > 1.0);
    }
}
