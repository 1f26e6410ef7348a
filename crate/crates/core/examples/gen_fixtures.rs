//! Writes the bundled fixtures under `crates/core/fixtures`.
//!
//! Run with `cargo run -p pq-core --example gen_fixtures`. Output is
//! deterministic, so a rerun leaves the tree unchanged.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use pq_core::io::{
    diffeo_to_json, generator_to_json, homotopy_to_json, morphism_to_json, path_to_json, space_to_json, to_json_string,
};
use pq_core::oracle;
use pq_core::paths::{linear_homotopy, SampledPath};
use pq_core::prequantum::Prequantum;
use pq_core::shapes::{cone_loop, latitude_loop, polyline, square_detour, unit_segment};
use pq_core::spaces::{Point, SpaceModel};
use pq_core::symmetry::{Diffeo, LieGenerator};

fn write(dir: &Path, name: &str, v: &Value) {
    let p = dir.join(name);
    std::fs::write(&p, to_json_string(v, true)).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    println!("wrote {}", p.display());
}

fn main() -> pq_core::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    std::fs::create_dir_all(&dir).expect("create fixtures dir");

    let plane = SpaceModel::euclidean(1)?;
    let sphere = SpaceModel::sphere2();
    let cone5 = SpaceModel::cone(5)?;
    write(&dir, "space_plane.json", &space_to_json(&plane));
    write(&dir, "space_sphere.json", &space_to_json(&sphere));
    write(&dir, "space_cone5.json", &space_to_json(&cone5));

    let segment = unit_segment(&plane)?;
    let detour = square_detour(&plane)?;
    write(&dir, "square_segment.json", &path_to_json(&segment));
    write(&dir, "square_detour.json", &path_to_json(&detour));
    write(
        &dir,
        "square_homotopy.json",
        &homotopy_to_json(&linear_homotopy(&segment, &detour, 8)?),
    );

    let x = Point::new(vec![1.0, 0.0, 0.0]);
    let y = Point::new(vec![0.0, 1.0, 0.0]);
    let z = Point::new(vec![0.0, 0.0, 1.0]);
    let south = Point::new(vec![0.0, 0.0, -1.0]);
    let octant_xy = polyline(&sphere, &[x.clone(), y.clone()], 64)?;
    let octant_yz = polyline(&sphere, &[y.clone(), z.clone()], 64)?;
    let over_pole = polyline(&sphere, &[x.clone(), z.clone(), y.clone()], 64)?;
    write(&dir, "octant_xy.json", &path_to_json(&octant_xy));
    write(&dir, "octant_yz.json", &path_to_json(&octant_yz));
    write(&dir, "octant_over_pole.json", &path_to_json(&over_pole));
    write(
        &dir,
        "equator.json",
        &path_to_json(&latitude_loop(&sphere, PI / 2.0, 512)?),
    );
    write(&dir, "cone5_loop.json", &path_to_json(&cone_loop(&cone5, 1.0, 4096)?));
    write(
        &dir,
        "constant_loop.json",
        &path_to_json(&SampledPath::constant(sphere, &z)?),
    );
    write(
        &dir,
        "meridian.json",
        &path_to_json(&polyline(&sphere, &[z, x, south], 64)?),
    );

    let pq = Prequantum::pinned(sphere);
    write(
        &dir,
        "morphism_octant_xy.json",
        &morphism_to_json(&pq.class_of_path(&octant_xy)?),
    );
    write(
        &dir,
        "diffeo_rotation.json",
        &diffeo_to_json(&Diffeo::rotation([0.0, 0.0, 1.0], PI / 3.0)?),
    );
    write(
        &dir,
        "generator_z.json",
        &generator_to_json(&LieGenerator::rotation([0.0, 0.0, 1.0])?),
    );

    let jobs = [
        (
            "job_cocycle_square.json",
            json!({ "command": "cocycle", "inputs": { "a": "square_segment.json", "b": "square_detour.json" } }),
        ),
        (
            "job_compose_octant.json",
            json!({ "command": "compose", "inputs": { "first": "octant_xy.json", "second": "octant_yz.json" } }),
        ),
        (
            "job_classify_over_pole.json",
            json!({ "command": "classify", "inputs": { "path": "octant_over_pole.json" }, "gauge": "reference" }),
        ),
        (
            "job_holonomy_equator.json",
            json!({
                "command": "holonomy",
                "inputs": { "loop": "equator.json", "contraction": { "toward": [0.0, 0.0, 1.0] } },
                "cfg": { "rows": 256 },
            }),
        ),
        (
            "job_holonomy_cone5.json",
            json!({ "command": "holonomy", "inputs": { "loop": "cone5_loop.json" } }),
        ),
        (
            "job_holonomy_constant.json",
            json!({ "command": "holonomy", "inputs": { "loop": "constant_loop.json" } }),
        ),
        (
            "job_moment_meridian.json",
            json!({ "command": "moment", "inputs": { "generator": "generator_z.json", "path": "meridian.json" } }),
        ),
        (
            "job_periods_sphere.json",
            json!({ "command": "periods", "space": "sphere2", "cfg": { "resolution": [256, 512] } }),
        ),
        (
            "job_converge_sphere.json",
            json!({ "command": "converge", "space": "sphere2", "ns": [64, 128, 256] }),
        ),
        (
            "job_verify_all.json",
            json!({ "command": "verify", "suite": "all", "seed": 0 }),
        ),
    ];
    for (name, job) in &jobs {
        write(&dir, name, job);
    }

    write(&dir, "oracles.json", &oracle::regenerate());
    Ok(())
}
