//! Seeded property suites behind `pq verify`.
//!
//! Each suite draws its random data from its own ChaCha stream, so a suite
//! gives the same residuals whether it runs alone or inside `all`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PqError, Result};
use crate::integrator::{
    convergence_order, k_pairing, kdk_identity_residual, line_integral, pairing, pairing_additivity_residual,
    sphere_sweep_errors, sphere_sweep_integral, Convergence, QuadratureConfig,
};
use crate::paths::{concat_homotopy, linear_homotopy, SampledHomotopy, SampledPath};
use crate::prequantum::{detect_periods, Gauge, PeriodGroup, Phase, Prequantum};
use crate::shapes::{
    cap_contraction, cone_loop, latitude_loop, polyline, rotating_arc_family, sheared_arc_family, vertex_sweep,
};
use crate::spaces::{dist, dot, norm, orbifold_canonical, Point, SpaceModel};
use crate::symmetry::{
    act_path, cocycle_invariance_residual, moment_additivity_residual, omega_invariance_residual, one_point_moment,
    paths_moment, random_point, two_point_moment, Diffeo, LieGenerator,
};

pub const SUITES: [&str; 5] = ["all", "paths", "integrator", "prequantum", "symmetry"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Passes when `residual ≤ threshold`.
    AtMost,
    /// Passes when `residual > threshold` (negative controls).
    Exceeds,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Exceeds => ">",
        }
    }
}

/// One verified property.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub relation: Relation,
}

impl Check {
    pub fn at_most(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            threshold,
            relation: Relation::AtMost,
        }
    }

    pub fn exceeds(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            residual,
            threshold,
            relation: Relation::Exceeds,
        }
    }

    pub fn pass(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.residual <= self.threshold,
            Relation::Exceeds => self.residual > self.threshold,
        }
    }

    /// Replaces the threshold of an upper-bound check.
    pub fn tighten(mut self, tol: f64) -> Self {
        if self.relation == Relation::AtMost {
            self.threshold = tol;
        }
        self
    }
}

/// Runs a named suite with the given seed and quadrature settings.
pub fn run_suite(name: &str, seed: u64, cfg: &QuadratureConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let rng = |k: u64| ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k));
    match name {
        "paths" => paths_suite(&mut rng(1), cfg),
        "integrator" => integrator_suite(&mut rng(2), cfg),
        "prequantum" => prequantum_suite(&mut rng(3), cfg),
        "symmetry" => symmetry_suite(&mut rng(4), cfg),
        "all" => {
            let mut out = Vec::new();
            for s in &SUITES[1..] {
                out.extend(run_suite(s, seed, cfg)?);
            }
            Ok(out)
        }
        other => Err(PqError::UnknownSuite(other.to_string())),
    }
}

fn max_of(xs: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    xs.into_iter().try_fold(0.0_f64, |m, x| Ok(m.max(x?)))
}

fn normalized(v: Vec<f64>) -> Point {
    let l = norm(&v);
    Point::new(v.into_iter().map(|c| c / l).collect::<Vec<_>>())
}

/// Random plane point in the box `[-r, r]²`.
pub fn random_plane_point(rng: &mut impl Rng, r: f64) -> Point {
    Point::new(vec![rng.gen_range(-r..r), rng.gen_range(-r..r)])
}

/// Polyline from `x` to `y` through `k` random interior vertices.
pub fn random_plane_path(
    rng: &mut impl Rng,
    space: &SpaceModel,
    x: &Point,
    y: &Point,
    k: usize,
) -> Result<SampledPath> {
    let mut v = vec![x.clone()];
    v.extend((0..k).map(|_| random_plane_point(rng, 2.0)));
    v.push(y.clone());
    polyline(space, &v, 2)
}

/// A sphere point within roughly `spread` radians of `c`.
pub fn random_sphere_point_near(rng: &mut impl Rng, c: &Point, spread: f64) -> Point {
    let w: Vec<f64> = c
        .coords()
        .iter()
        .map(|x| x + spread * rng.gen_range(-1.0..1.0))
        .collect();
    normalized(w)
}

/// Geodesic polygon `x → m → y` with `m` a random perturbation of the
/// midpoint of `x` and `y`.
pub fn random_sphere_path(
    rng: &mut impl Rng,
    space: &SpaceModel,
    x: &Point,
    y: &Point,
    spread: f64,
    per_leg: usize,
) -> Result<SampledPath> {
    let mid = space.geodesic(x, y, 0.5)?;
    let m = random_sphere_point_near(rng, &mid, spread);
    polyline(space, &[x.clone(), m, y.clone()], per_leg)
}

fn chasles(pq: &Prequantum, a: &SampledPath, b: &SampledPath, c: &SampledPath) -> Result<f64> {
    let ab = pq.cocycle_phi(a, b, None)?;
    let bc = pq.cocycle_phi(b, c, None)?;
    let ac = pq.cocycle_phi(a, c, None)?;
    ab.checked_add(&bc)?.distance(&ac)
}

fn paths_suite(rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<Vec<Check>> {
    let plane = SpaceModel::euclidean(1)?;
    let sphere = SpaceModel::sphere2();
    let cone = SpaceModel::cone(3)?;
    let mut out = Vec::new();

    let mut anti: f64 = 0.0;
    for space in [plane, sphere, cone] {
        for _ in 0..1000 {
            let p = random_point(&space, rng);
            let mut w = || -> Vec<f64> {
                let raw: Vec<f64> = (0..space.dim()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                space.project_tangent(&p, &raw)
            };
            let (u, v) = (w(), w());
            anti = anti.max((space.eval_two_form(&p, &u, &v)? + space.eval_two_form(&p, &v, &u)?).abs());
        }
    }
    out.push(Check::at_most("spaces.omega_antisymmetry", anti, 1e-12));

    let h = 1e-4;
    let mut dalpha: f64 = 0.0;
    for space in [plane, cone] {
        for _ in 0..200 {
            let p = random_point(&space, rng);
            let u = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let shifted =
                |w: &[f64], s: f64| -> Vec<f64> { p.coords().iter().zip(w).map(|(a, b)| a + s * b).collect() };
            let du_av = (space.alpha(&shifted(&u, h), &v) - space.alpha(&shifted(&u, -h), &v)) / (2.0 * h);
            let dv_au = (space.alpha(&shifted(&v, h), &u) - space.alpha(&shifted(&v, -h), &u)) / (2.0 * h);
            let w = space.omega(p.coords(), &u, &v);
            dalpha = dalpha.max((du_av - dv_au - w).abs() / w.abs().max(1.0));
        }
    }
    out.push(Check::at_most("spaces.d_alpha_equals_omega", dalpha, 1e-6));

    let (mut ends, mut speed): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let a = random_point(&sphere, rng);
        let b = random_sphere_point_near(rng, &a, 1.0);
        ends = ends.max(dist(sphere.geodesic(&a, &b, 0.0)?.coords(), a.coords()));
        ends = ends.max(dist(sphere.geodesic(&a, &b, 1.0)?.coords(), b.coords()));
        let pts = (0..=16)
            .map(|k| sphere.geodesic(&a, &b, k as f64 / 16.0))
            .collect::<Result<Vec<_>>>()?;
        let chords: Vec<f64> = pts.windows(2).map(|w| dist(w[0].coords(), w[1].coords())).collect();
        let c0 = chords[0];
        if c0 > 0.0 {
            speed = speed.max(chords.iter().map(|c| (c - c0).abs() / c0).fold(0.0, f64::max));
        }
    }
    out.push(Check::at_most("spaces.geodesic_endpoints", ends, 0.0));
    out.push(Check::at_most("spaces.geodesic_constant_speed", speed, 1e-9));

    let mut idem: f64 = 0.0;
    for m in [2, 3, 5] {
        for _ in 0..200 {
            let z = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
            let c = orbifold_canonical(m, z);
            idem = idem.max(dist(&orbifold_canonical(m, c), &c));
        }
    }
    out.push(Check::at_most("spaces.orbifold_canonical_idempotent", idem, 1e-12));

    let mut invol: f64 = 0.0;
    let mut assoc_line: f64 = 0.0;
    let mut smash_line: f64 = 0.0;
    let alpha = plane.one_form()?;
    for _ in 0..50 {
        let pts: Vec<Point> = (0..4).map(|_| random_plane_point(rng, 2.0)).collect();
        let a = random_plane_path(rng, &plane, &pts[0], &pts[1], 2)?;
        let b = random_plane_path(rng, &plane, &pts[1], &pts[2], 1)?;
        let c = random_plane_path(rng, &plane, &pts[2], &pts[3], 3)?;
        invol = invol.max(if a.reverse().reverse() == a { 0.0 } else { 1.0 });
        let left = line_integral(&alpha, &a.concat(&b)?.concat(&c)?, cfg)?;
        let right = line_integral(&alpha, &a.concat(&b.concat(&c)?)?, cfg)?;
        assoc_line = assoc_line.max((left - right).abs());
        let eps = rng.gen_range(0.05..0.45);
        smash_line = smash_line
            .max((line_integral(&alpha, &a.smash_reparam(eps)?, cfg)? - line_integral(&alpha, &a, cfg)?).abs());
    }
    out.push(Check::at_most("paths.reverse_involution", invol, 0.0));
    out.push(Check::at_most(
        "paths.concat_associativity_line_integral",
        assoc_line,
        1e-8,
    ));
    out.push(Check::at_most("paths.smash_reparam_line_integral", smash_line, 1e-8));

    let mut assoc_k: f64 = 0.0;
    for _ in 0..5 {
        let c = random_point(&sphere, rng);
        let v: Vec<Point> = (0..4).map(|_| random_sphere_point_near(rng, &c, 0.6)).collect();
        let mut hs: Vec<SampledHomotopy> = Vec::new();
        for w in v.windows(2) {
            let p = random_sphere_path(rng, &sphere, &w[0], &w[1], 0.3, 4)?;
            let q = random_sphere_path(rng, &sphere, &w[0], &w[1], 0.3, 4)?;
            hs.push(linear_homotopy(&p, &q, 16)?);
        }
        let left = pairing(&concat_homotopy(&concat_homotopy(&hs[0], &hs[1])?, &hs[2])?, cfg)?;
        let right = pairing(&concat_homotopy(&hs[0], &concat_homotopy(&hs[1], &hs[2])?)?, cfg)?;
        assoc_k = assoc_k.max((left - right).abs());
    }
    out.push(Check::at_most("paths.concat_associativity_pairing", assoc_k, 1e-8));
    Ok(out)
}

fn random_sphere_homotopy(rng: &mut ChaCha8Rng, sphere: &SpaceModel, rows: usize) -> Result<SampledHomotopy> {
    let x = random_point(sphere, rng);
    let y = random_sphere_point_near(rng, &x, 1.0);
    let a = random_sphere_path(rng, sphere, &x, &y, 0.4, 8)?;
    let b = random_sphere_path(rng, sphere, &x, &y, 0.4, 8)?;
    linear_homotopy(&a, &b, rows)
}

fn integrator_suite(rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<Vec<Check>> {
    let plane = SpaceModel::euclidean(1)?;
    let sphere = SpaceModel::sphere2();
    let mut out = Vec::new();

    let (mut lin, mut anti_t, mut anti_s, mut smash): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..10 {
        let h = random_sphere_homotopy(rng, &sphere, 32)?;
        let w = sphere.two_form();
        let k = k_pairing(&w, &h, cfg)?;
        let c = rng.gen_range(-3.0..3.0);
        lin = lin.max((k_pairing(&w.scaled(c), &h, cfg)? - c * k).abs() / (c * k).abs().max(1.0));
        anti_t = anti_t.max((k_pairing(&w, &h.reverse_t(), cfg)? + k).abs());
        anti_s = anti_s.max((k_pairing(&w, &h.reverse_s(), cfg)? + k).abs());
        smash = smash.max((k_pairing(&w, &h.smash_rows(rng.gen_range(0.05..0.45))?, cfg)? - k).abs());
    }
    out.push(Check::at_most("integrator.linearity", lin, 1e-12));
    out.push(Check::at_most("integrator.antisymmetry_t", anti_t, 1e-12));
    out.push(Check::at_most("integrator.antisymmetry_s", anti_s, 1e-12));
    out.push(Check::at_most("integrator.smash_invariance", smash, 1e-8));

    let fine = cfg.with_refine(2.max(cfg.refine));
    let mut add: f64 = 0.0;
    for _ in 0..20 {
        let x = random_plane_point(rng, 2.0);
        let y = random_plane_point(rng, 2.0);
        let z = random_plane_point(rng, 2.0);
        let h1 = linear_homotopy(
            &random_plane_path(rng, &plane, &x, &y, 2)?,
            &random_plane_path(rng, &plane, &x, &y, 1)?,
            8,
        )?;
        let h2 = linear_homotopy(
            &random_plane_path(rng, &plane, &y, &z, 1)?,
            &random_plane_path(rng, &plane, &y, &z, 2)?,
            8,
        )?;
        add = add.max(pairing_additivity_residual(&h1, &h2, &fine)?);
        let s1 = random_sphere_homotopy(rng, &sphere, 8)?;
        let p = s1.row_path(0).end();
        let q = random_sphere_point_near(rng, &p, 0.8);
        let a = random_sphere_path(rng, &sphere, &p, &q, 0.3, 8)?;
        let b = random_sphere_path(rng, &sphere, &p, &q, 0.3, 8)?;
        let s2 = linear_homotopy(&a, &b, 8)?;
        if s1.fixed_ends() && s2.fixed_ends() {
            add = add.max(pairing_additivity_residual(&s1, &s2, &fine)?);
        }
    }
    out.push(Check::at_most("integrator.concat_additivity", add, 1e-8));

    let total = sphere_sweep_integral(&sphere, 128, 256, cfg)?;
    out.push(Check::at_most(
        "integrator.sphere_total_area",
        (total - 2.0 * PI).abs(),
        1e-3,
    ));
    let order = match convergence_order(&sphere_sweep_errors(&sphere, &[16, 32, 64], cfg)?)? {
        Convergence::Order(p) => (p - 2.0).abs(),
        Convergence::Exact => f64::INFINITY,
    };
    out.push(Check::at_most("integrator.sphere_order_minus_two", order, 0.3));

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| PqError::Numeric(e.to_string()))?
        .install(|| sphere_sweep_integral(&sphere, 128, 256, cfg))?;
    out.push(Check::at_most(
        "integrator.thread_determinism",
        if single.to_bits() == total.to_bits() {
            0.0
        } else {
            (single - total).abs().max(f64::MIN_POSITIVE)
        },
        0.0,
    ));

    out.push(Check::at_most(
        "integrator.kdk_euclidean",
        kdk_identity_residual(&sheared_arc_family(32, 32, 64)?, cfg)?.residual,
        1e-3,
    ));
    out.push(Check::at_most(
        "integrator.kdk_sphere",
        kdk_identity_residual(&rotating_arc_family(32, 32, 64)?, cfg)?.residual,
        5e-3,
    ));
    Ok(out)
}

fn prequantum_suite(rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<Vec<Check>> {
    let plane = SpaceModel::euclidean(1)?;
    let sphere = SpaceModel::sphere2();
    let pp = Prequantum::pinned(plane).with_config(*cfg);
    let ps = Prequantum::pinned(sphere).with_config(*cfg);
    let mut out = Vec::new();

    let mut ch: f64 = 0.0;
    for _ in 0..50 {
        let x = random_plane_point(rng, 2.0);
        let y = random_plane_point(rng, 2.0);
        let p: Vec<SampledPath> = (0..3)
            .map(|k| random_plane_path(rng, &plane, &x, &y, k + 1))
            .collect::<Result<_>>()?;
        ch = ch.max(chasles(&pp, &p[0], &p[1], &p[2])?);
    }
    out.push(Check::at_most("prequantum.chasles_plane", ch, 1e-6));
    let mut ch: f64 = 0.0;
    for _ in 0..10 {
        let x = random_point(&sphere, rng);
        let y = random_sphere_point_near(rng, &x, 1.0);
        let p: Vec<SampledPath> = (0..3)
            .map(|_| random_sphere_path(rng, &sphere, &x, &y, 0.5, 8))
            .collect::<Result<_>>()?;
        ch = ch.max(chasles(&ps, &p[0], &p[1], &p[2])?);
    }
    out.push(Check::at_most("prequantum.chasles_sphere", ch, 1e-4));

    let fine = ps.clone().with_config(cfg.with_refine(4.max(cfg.refine)));
    let (raw_gap, phase_gap) = homotopy_independence(&fine, 256, 128)?;
    out.push(Check::at_most(
        "prequantum.homotopy_independence_raw_gap",
        raw_gap,
        2e-3,
    ));
    out.push(Check::at_most(
        "prequantum.homotopy_independence_phase",
        phase_gap,
        1e-4,
    ));

    let (mut ident, mut inv, mut assoc): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (pq, sphere_case) in [(&pp, false), (&ps, true)] {
        for _ in 0..10 {
            let pts: Vec<Point> = if sphere_case {
                let c = random_point(&sphere, rng);
                (0..4).map(|_| random_sphere_point_near(rng, &c, 0.4)).collect()
            } else {
                (0..4).map(|_| random_plane_point(rng, 2.0)).collect()
            };
            let ms = (0..3)
                .map(|k| {
                    let g = if sphere_case {
                        random_sphere_path(rng, &sphere, &pts[k], &pts[k + 1], 0.2, 4)?
                    } else {
                        random_plane_path(rng, &plane, &pts[k], &pts[k + 1], 1)?
                    };
                    pq.class_of_path(&g)
                })
                .collect::<Result<Vec<_>>>()?;
            let id = pq.identity(&pts[0], Gauge::Reference)?;
            ident = ident.max(pq.morphism_distance(&pq.compose(&id, &ms[0])?, &ms[0])?);
            inv = inv.max(pq.morphism_distance(&pq.compose(&ms[0], &pq.inverse(&ms[0])?)?, &id)?);
            let left = pq.compose(&pq.compose(&ms[0], &ms[1])?, &ms[2])?;
            let right = pq.compose(&ms[0], &pq.compose(&ms[1], &ms[2])?)?;
            assoc = assoc.max(pq.morphism_distance(&left, &right)?);
        }
    }
    out.push(Check::at_most("prequantum.groupoid_identity", ident, 1e-6));
    out.push(Check::at_most("prequantum.groupoid_inverse", inv, 1e-6));
    out.push(Check::at_most("prequantum.groupoid_associativity", assoc, 1e-6));

    let (mut additive, mut dual, mut rev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let alpha = plane.one_form()?;
    for _ in 0..20 {
        let pts: Vec<Point> = (0..3).map(|_| random_plane_point(rng, 2.0)).collect();
        let a = random_plane_path(rng, &plane, &pts[0], &pts[1], 2)?;
        let b = random_plane_path(rng, &plane, &pts[1], &pts[2], 2)?;
        let c = random_plane_path(rng, &plane, &pts[0], &pts[1], 1)?;
        let m = pp.compose(&pp.exact_morphism(&a)?, &pp.exact_morphism(&b)?)?;
        let sum = line_integral(&alpha, &a, cfg)? + line_integral(&alpha, &b, cfg)?;
        additive = additive.max((m.phase.value() - sum).abs());
        let via_alpha = line_integral(&alpha, &a, cfg)? - line_integral(&alpha, &c, cfg)?;
        dual = dual.max((pp.cocycle_raw(&a, &c, None)? - via_alpha).abs());
        rev = rev.max(pp.morphism_distance(&pp.class_of_path(&a.reverse())?, &pp.inverse(&pp.class_of_path(&a)?)?)?);
    }
    for _ in 0..5 {
        let x = random_point(&sphere, rng);
        let y = random_sphere_point_near(rng, &x, 1.0);
        let g = random_sphere_path(rng, &sphere, &x, &y, 0.5, 8)?;
        rev = rev.max(ps.morphism_distance(&ps.class_of_path(&g.reverse())?, &ps.inverse(&ps.class_of_path(&g)?)?)?);
    }
    out.push(Check::at_most("prequantum.exact_composition_additive", additive, 1e-12));
    out.push(Check::at_most("prequantum.exact_dual_route", dual, 1e-6));
    out.push(Check::at_most("prequantum.class_of_reverse_is_inverse", rev, 1e-6));

    let equator = latitude_loop(&sphere, PI / 2.0, 512)?;
    let cap = cap_contraction(&sphere, PI / 2.0, 256, 512)?;
    let iso = ps.isotropy_phase(&equator, Some(&cap))?;
    out.push(Check::at_most(
        "prequantum.equator_isotropy",
        iso.distance(&ps.phase(PI)?)?,
        1e-4,
    ));

    let mut wit: f64 = 0.0;
    for k in 0..4 {
        let target = (k as f64 + rng.gen_range(0.0..1.0)) * PI / 2.0;
        let w = ps.isotropy_witness(target, 1e-5)?;
        wit = wit.max(ps.phase(w.phase)?.distance(&ps.phase(target)?)?);
    }
    out.push(Check::at_most("prequantum.isotropy_witnesses", wit, 1e-4));

    let mut cone_err: f64 = 0.0;
    for m in [2u32, 3, 5] {
        let cone = SpaceModel::cone(m)?;
        let pc = Prequantum::pinned(cone).with_config(*cfg);
        let r = rng.gen_range(0.5..2.0);
        let v = pc.isotropy_raw(&cone_loop(&cone, r, 4096)?, None)?;
        cone_err = cone_err.max((v - PI * r * r / m as f64).abs());
    }
    out.push(Check::at_most("prequantum.cone_isotropy", cone_err, 1e-6));

    let est = detect_periods(&sphere, 128, 256, cfg)?;
    let gap = match est.group {
        PeriodGroup::Cyclic(a) => (a - 2.0 * PI).abs(),
        _ => f64::INFINITY,
    };
    out.push(Check::at_most("prequantum.sphere_period", gap, 1e-3));
    let flat = detect_periods(&plane, 8, 8, cfg)?;
    out.push(Check::at_most(
        "prequantum.euclidean_periods_zero",
        if flat.group == PeriodGroup::Zero { 0.0 } else { 1.0 },
        0.0,
    ));

    let curv = ps.curvature_check(&rotating_arc_family(16, 16, 32)?)?;
    out.push(Check::at_most("prequantum.curvature_sphere", curv.residual, 5e-3));
    Ok(out)
}

/// Two fixed-end homotopies between the same quarter circles whose
/// difference wraps the sphere once; returns `(|Δraw| − 2π, phase gap)`.
pub fn homotopy_independence(pq: &Prequantum, rows: usize, per_leg: usize) -> Result<(f64, f64)> {
    let sphere = pq.space;
    let x = Point::new(vec![1.0, 0.0, 0.0]);
    let y = Point::new(vec![0.0, 1.0, 0.0]);
    let r = 0.5_f64.sqrt();
    let pole = [0.0, 0.0, 1.0];
    let w = [-r, -r, 0.0];
    let a = vertex_sweep(&sphere, &x, &y, &pole, &w, (0.0, -PI / 2.0), rows, per_leg)?;
    let b = vertex_sweep(&sphere, &x, &y, &pole, &w, (0.0, 1.5 * PI), rows, per_leg)?;
    let top = a.row_path(0);
    let bottom = a.row_path(a.rows() - 1);
    let ra = pq.cocycle_raw(&top, &bottom, Some(&a))?;
    let rb = pq.cocycle_raw(&top, &b.row_path(b.rows() - 1), Some(&b))?;
    let raw_gap = ((ra - rb).abs() - 2.0 * PI * sphere.normalization()).abs();
    let pa: Phase = pq.phase(ra)?;
    Ok((raw_gap, pa.distance(&pq.phase(rb)?)?))
}

fn symmetry_suite(rng: &mut ChaCha8Rng, cfg: &QuadratureConfig) -> Result<Vec<Check>> {
    let plane = SpaceModel::euclidean(1)?;
    let sphere = SpaceModel::sphere2();
    let cone = SpaceModel::cone(5)?;
    let pp = Prequantum::pinned(plane).with_config(*cfg);
    let ps = Prequantum::pinned(sphere).with_config(*cfg);
    let mut out = Vec::new();

    let (mut rot, mut sym): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        rot = rot.max(omega_invariance_residual(
            &Diffeo::random_rotation(rng),
            &sphere,
            50,
            rng,
        )?);
        sym = sym.max(omega_invariance_residual(
            &Diffeo::random_symplectic(1, rng),
            &plane,
            50,
            rng,
        )?);
    }
    out.push(Check::at_most("symmetry.omega_invariance_rotation", rot, 1e-10));
    out.push(Check::at_most("symmetry.omega_invariance_symplectic", sym, 1e-10));
    out.push(Check::at_most(
        "symmetry.omega_invariance_deck",
        omega_invariance_residual(&Diffeo::deck(5, 3)?, &cone, 100, rng)?,
        1e-10,
    ));
    let bad = Diffeo::affine_unchecked(vec![2.0, 0.3, 0.0, 1.0], vec![0.0, 0.0])?;
    out.push(Check::exceeds(
        "symmetry.negative_control_non_symplectic",
        omega_invariance_residual(&bad, &plane, 100, rng)?,
        1e-2,
    ));

    let (mut inv_s, mut inv_p, mut funct): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..10 {
        let x = random_point(&sphere, rng);
        let y = random_sphere_point_near(rng, &x, 1.0);
        let a = random_sphere_path(rng, &sphere, &x, &y, 0.5, 8)?;
        let b = random_sphere_path(rng, &sphere, &x, &y, 0.5, 8)?;
        let (g, h) = (Diffeo::random_rotation(rng), Diffeo::random_rotation(rng));
        inv_s = inv_s.max(cocycle_invariance_residual(&ps, &g, &a, &b)?);
        funct = funct.max(
            if act_path(&Diffeo::compose(&g, &h), &a)? == act_path(&g, &act_path(&h, &a)?)? {
                0.0
            } else {
                1.0
            },
        );
        let (x, y) = (random_plane_point(rng, 2.0), random_plane_point(rng, 2.0));
        let a = random_plane_path(rng, &plane, &x, &y, 2)?;
        let b = random_plane_path(rng, &plane, &x, &y, 3)?;
        let (g, h) = (Diffeo::random_symplectic(1, rng), Diffeo::random_symplectic(1, rng));
        inv_p = inv_p.max(cocycle_invariance_residual(&pp, &g, &a, &b)?);
        funct = funct.max(
            if act_path(&Diffeo::compose(&g, &h), &a)? == act_path(&g, &act_path(&h, &a)?)? {
                0.0
            } else {
                1.0
            },
        );
    }
    out.push(Check::at_most("symmetry.cocycle_invariance_rotation", inv_s, 1e-6));
    out.push(Check::at_most("symmetry.cocycle_invariance_symplectic", inv_p, 1e-6));
    out.push(Check::at_most("symmetry.action_functoriality", funct, 0.0));

    let zrot = LieGenerator::rotation([0.0, 0.0, 1.0])?;
    let axis = random_point(&sphere, rng);
    let tilted = LieGenerator::rotation([axis.coords()[0], axis.coords()[1], axis.coords()[2]])?;
    let quad = LieGenerator::hamiltonian(vec![0.5, -1.0], vec![1.0, 0.2, 0.2, -0.5])?;
    let (mut add, mut chas, mut indep_s, mut indep_p): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..10 {
        let c = random_point(&sphere, rng);
        let v: Vec<Point> = (0..3).map(|_| random_sphere_point_near(rng, &c, 0.8)).collect();
        let a = random_sphere_path(rng, &sphere, &v[0], &v[1], 0.4, 8)?;
        let b = random_sphere_path(rng, &sphere, &v[1], &v[2], 0.4, 8)?;
        for xi in [&zrot, &tilted] {
            add = add.max(moment_additivity_residual(&a, &b, xi, cfg)?);
            let direct = two_point_moment(&ps, &v[0], &v[2], xi)?;
            let split = two_point_moment(&ps, &v[0], &v[1], xi)? + two_point_moment(&ps, &v[1], &v[2], xi)?;
            chas = chas.max((direct - split).abs());
            let routes = [
                a.concat(&b)?,
                random_sphere_path(rng, &sphere, &v[0], &v[2], 0.6, 8)?,
                random_sphere_path(rng, &sphere, &v[0], &v[2], 0.6, 8)?,
            ];
            let vals = max_of(routes.iter().map(|r| Ok((paths_moment(r, xi, cfg)? - direct).abs())))?;
            indep_s = indep_s.max(vals);
        }
        let v: Vec<Point> = (0..3).map(|_| random_plane_point(rng, 2.0)).collect();
        let a = random_plane_path(rng, &plane, &v[0], &v[1], 2)?;
        let b = random_plane_path(rng, &plane, &v[1], &v[2], 2)?;
        add = add.max(moment_additivity_residual(&a, &b, &quad, cfg)?);
        let direct = two_point_moment(&pp, &v[0], &v[2], &quad)?;
        chas = chas.max(
            (direct - two_point_moment(&pp, &v[0], &v[1], &quad)? - two_point_moment(&pp, &v[1], &v[2], &quad)?).abs(),
        );
        for k in 1..4 {
            indep_p = indep_p
                .max((paths_moment(&random_plane_path(rng, &plane, &v[0], &v[2], k)?, &quad, cfg)? - direct).abs());
        }
    }
    out.push(Check::at_most("symmetry.moment_additivity", add, 1e-6));
    out.push(Check::at_most("symmetry.moment_chasles", chas, 1e-6));
    out.push(Check::at_most(
        "symmetry.moment_path_independence_sphere",
        indep_s,
        1e-4,
    ));
    out.push(Check::at_most("symmetry.moment_path_independence_plane", indep_p, 1e-6));

    let base = Point::new(vec![1.0, 0.0, 0.0]);
    let (mut stab, mut oracle): (f64, f64) = (0.0, 0.0);
    for _ in 0..20 {
        let x = random_point(&sphere, rng);
        if dot(x.coords(), base.coords()) < -0.9 {
            continue;
        }
        let g = Diffeo::rotation([0.0, 0.0, 1.0], rng.gen_range(0.0..2.0 * PI))?;
        let gx = crate::symmetry::act_point(&g, &sphere, &x)?;
        if dot(gx.coords(), base.coords()) < -0.9 {
            continue;
        }
        stab = stab.max((one_point_moment(&ps, &x, &zrot, &base)? - one_point_moment(&ps, &gx, &zrot, &base)?).abs());
        let y = random_sphere_point_near(rng, &x, 1.0);
        let want = 0.5 * sphere.normalization() * (y.coords()[2] - x.coords()[2]);
        oracle = oracle.max((two_point_moment(&ps, &x, &y, &zrot)? - want).abs());
    }
    out.push(Check::at_most("symmetry.z_moment_stabilizer_invariance", stab, 1e-8));
    out.push(Check::at_most("symmetry.z_moment_meridian_oracle", oracle, 1e-4));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert_eq!(
            run_suite("bogus", 0, &QuadratureConfig::default()),
            Err(PqError::UnknownSuite("bogus".into()))
        );
    }

    #[test]
    fn check_relations() {
        assert!(Check::at_most("a", 1.0, 1.0).pass());
        assert!(!Check::exceeds("a", 1.0, 1.0).pass());
        assert!(!Check::at_most("a", f64::NAN, 1.0).pass());
        assert_eq!(Check::exceeds("a", 1.0, 0.5).tighten(1e-15).threshold, 0.5);
    }

    #[test]
    fn every_suite_passes_with_defaults() {
        let cfg = QuadratureConfig::default();
        for s in &SUITES[1..] {
            let checks = run_suite(s, 0, &cfg).unwrap();
            let failed: Vec<_> = checks.iter().filter(|c| !c.pass()).collect();
            assert!(failed.is_empty(), "{s}: {failed:#?}");
        }
    }
}
