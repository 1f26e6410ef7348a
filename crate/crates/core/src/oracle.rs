//! Reference values computed without the quadrature kernel: shoelace areas,
//! spherical excess, cap and sector areas, and the height moment.
//!
//! `regenerate` produces the table stored in `fixtures/oracles.json`.

use std::f64::consts::PI;

use serde_json::{json, Map, Value};

use crate::spaces::{cross, dot};

/// Signed area of a closed planar polygon (last vertex joins the first).
pub fn shoelace(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum::<f64>()
}

/// Signed area of the geodesic triangle `abc` on the unit sphere
/// (positive when counter-clockwise seen from outside).
pub fn spherical_triangle_area(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3]) -> f64 {
    let triple = dot(a, &cross(b, c));
    2.0 * triple.atan2(1.0 + dot(a, b) + dot(b, c) + dot(c, a))
}

/// Signed area of a geodesic polygon contained in an open hemisphere, by a
/// fan from the first vertex.
pub fn spherical_polygon_area(vertices: &[[f64; 3]]) -> f64 {
    (1..vertices.len().saturating_sub(1))
        .map(|i| spherical_triangle_area(&vertices[0], &vertices[i], &vertices[i + 1]))
        .sum()
}

/// Total area of S² from a subdivided octahedron (`4 · 8 · k²` triangles)
/// summed by spherical excess.
pub fn sphere_area_by_excess(k: usize) -> f64 {
    let k = k.max(1);
    let mut total = 0.0;
    let signs = [1.0, -1.0];
    for &sx in &signs {
        for &sy in &signs {
            for &sz in &signs {
                let corner = |i: usize, j: usize| -> [f64; 3] {
                    let (u, v) = (i as f64 / k as f64, j as f64 / k as f64);
                    let p = [sx * (1.0 - u - v), sy * u, sz * v];
                    let l = dot(&p, &p).sqrt();
                    p.map(|c| c / l)
                };
                let flip = sx * sy * sz < 0.0;
                for i in 0..k {
                    for j in 0..k - i {
                        let mut tris = vec![(corner(i, j), corner(i + 1, j), corner(i, j + 1))];
                        if i + j + 1 < k {
                            tris.push((corner(i + 1, j), corner(i + 1, j + 1), corner(i, j + 1)));
                        }
                        for (a, b, c) in tris {
                            let s = spherical_triangle_area(&a, &b, &c);
                            total += if flip { -s } else { s };
                        }
                    }
                }
            }
        }
    }
    total
}

/// `ω`-area of the polar cap of angle `theta` with ω = ½ area.
pub fn cap_omega(theta: f64) -> f64 {
    PI * (1.0 - theta.cos())
}

/// `dx∧dy`-area of the wedge of radius `r` and angle `2π/m`.
pub fn cone_sector(r: f64, m: u32) -> f64 {
    PI * r * r / m as f64
}

/// Two-point moment of the z-rotation with ω = ½ area.
pub fn height_moment(z0: f64, z1: f64) -> f64 {
    0.5 * (z1 - z0)
}

fn entry(fixture: &str, oracle: &str, path: &str, value: f64, tol: f64) -> Value {
    json!({ "fixture": fixture, "oracle": oracle, "result": path, "value": value, "tol": tol })
}

/// The oracle table for the bundled job fixtures. `result` names the report
/// field compared against `value`.
pub fn regenerate() -> Value {
    let x = [1.0, 0.0, 0.0];
    let y = [0.0, 1.0, 0.0];
    let z = [0.0, 0.0, 1.0];
    let mut m = Map::new();
    // Loop: segment forward, detour backward.
    let square = shoelace(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]);
    m.insert(
        "cocycle_square".into(),
        entry("job_cocycle_square.json", "shoelace", "raw", square, 1e-6),
    );
    let octant = 0.5 * spherical_triangle_area(&x, &y, &z);
    m.insert(
        "compose_octant".into(),
        entry(
            "job_compose_octant.json",
            "spherical_excess",
            "correction",
            octant,
            1e-4,
        ),
    );
    let over_pole = 0.5 * spherical_polygon_area(&[x, z, y]);
    m.insert(
        "classify_over_pole".into(),
        entry(
            "job_classify_over_pole.json",
            "spherical_excess",
            "raw",
            over_pole,
            1e-4,
        ),
    );
    m.insert(
        "holonomy_equator".into(),
        entry(
            "job_holonomy_equator.json",
            "cap_area",
            "raw",
            cap_omega(PI / 2.0),
            1e-4,
        ),
    );
    m.insert(
        "holonomy_cone5".into(),
        entry(
            "job_holonomy_cone5.json",
            "sector_area",
            "raw",
            cone_sector(1.0, 5),
            1e-6,
        ),
    );
    m.insert(
        "holonomy_constant".into(),
        entry("job_holonomy_constant.json", "trivial", "raw", 0.0, 0.0),
    );
    m.insert(
        "moment_meridian".into(),
        entry(
            "job_moment_meridian.json",
            "height_moment",
            "value",
            height_moment(1.0, -1.0),
            1e-6,
        ),
    );
    m.insert(
        "periods_sphere".into(),
        entry(
            "job_periods_sphere.json",
            "octahedral_excess_sum",
            "raw",
            0.5 * sphere_area_by_excess(64),
            1e-3,
        ),
    );
    Value::Object(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(shoelace(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]), 1.0);
        assert!(
            (spherical_triangle_area(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]) - PI / 2.0).abs() < 1e-15
        );
        assert!(
            (spherical_triangle_area(&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 1.0, 0.0]) + PI / 2.0).abs() < 1e-15
        );
        assert!((sphere_area_by_excess(1) - 4.0 * PI).abs() < 1e-12);
        assert!((sphere_area_by_excess(16) - 4.0 * PI).abs() < 1e-11);
        assert!((cap_omega(PI) - 2.0 * PI).abs() < 1e-15);
        assert_eq!(height_moment(1.0, -1.0), -1.0);
    }
}
