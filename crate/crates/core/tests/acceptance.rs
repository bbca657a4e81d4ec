//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use overlap_forge::combinatorics::{count_spanning_trees, random_spanning_tree, PolyhedralGraph};
use overlap_forge::embedding::{embed_base_polygon, tutte_embed, BaseShape};
use overlap_forge::fixtures;
use overlap_forge::geometry::Vec2;
use overlap_forge::io::read_graph;
use overlap_forge::lifting::{face_angle, maxwell_cremona_lift, metric_report, vertex_curvature};
use overlap_forge::pipeline::{realize, realize_with_overlap, OverlapCertificate, PipelineConfig, Route, ScaleStage};
use overlap_forge::unfolding::{canonical_form, unfold, unfolding_census, z_overlap_model, ZModelInstance};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

struct Suite {
    failed: usize,
}

impl Suite {
    fn report(&mut self, id: u32, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("PASS [{id}] {name}: {detail}"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL [{id}] {name}: {detail}");
            }
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(what: &str, got: f64, want: f64, tol: f64) -> Result<(), String> {
    ensure((got - want).abs() <= tol, || format!("{what} = {got} outside {want} +/- {tol}"))
}

fn diamond_frustum_metrics() -> Result<String, String> {
    let p = read_graph(data("diamond_frustum.json")).map_err(|e| e.to_string())?.solid.ok_or("no coordinates")?;
    // Top diamond (+-1, 0), (0, +-2): the sharp corners sit at (0, +-2).
    let alpha = face_angle(&p, 1, 3).map_err(|e| e.to_string())?.to_degrees();
    let w_a1 = vertex_curvature(&p, 1).to_degrees();
    let w_a2 = vertex_curvature(&p, 3).to_degrees();
    let total = metric_report(&p).total_curvature().to_degrees();
    within("alpha", alpha, 53.13, 0.05)?;
    within("omega(a1)", w_a1, 6.0, 0.2)?;
    within("omega(a2)", w_a2, 6.5, 0.2)?;
    within("total curvature", total, 720.0, 1e-6)?;
    Ok(format!("alpha {alpha:.4} deg, omegas {w_a1:.4} / {w_a2:.4} deg, total {total:.9} deg"))
}

fn check_certificate(cert: &OverlapCertificate, route: Route) -> Result<(), String> {
    ensure(cert.route == route, || format!("route {:?}, expected {route:?}", cert.route))?;
    let top = cert.overlap.witnesses.first().ok_or("no witness")?;
    ensure(top.area > cert.overlap.eps_area, || format!("witness area {} <= eps {}", top.area, cert.overlap.eps_area))?;
    let replay = cert.replay().map_err(|e| e.to_string())?;
    ensure(replay.overlapping, || "replay found no overlap".into())?;
    ensure(cert.z_constraint_holds(), || "Z constraint violated".into())
}

fn cube_overlap() -> Result<String, String> {
    let g = read_graph(data("cube.json")).map_err(|e| e.to_string())?.graph;
    let cert = realize_with_overlap(&g, &PipelineConfig::default()).map_err(|e| e.to_string())?;
    check_certificate(&cert, Route::Disjoint)?;
    let mut areas = Vec::new();
    for seed in 0..8 {
        let c = realize_with_overlap(&g, &PipelineConfig { seed: Some(seed), ..PipelineConfig::default() }).map_err(|e| e.to_string())?;
        check_certificate(&c, Route::Disjoint)?;
        areas.push(c.overlap.witnesses[0].area / c.overlap.eps_area);
    }
    let worst = areas.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!(
        "witness area {:.3e} (eps {:.1e}); 8 seeded reruns, min area/eps {worst:.3e}",
        cert.overlap.witnesses[0].area, cert.overlap.eps_area
    ))
}

fn critical_curvature() -> Result<String, String> {
    let out =
        Command::new(env!("CARGO_BIN_EXE_overlap-forge")).args(["critical-omega", "--alpha", "60"]).output().map_err(|e| e.to_string())?;
    ensure(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let w: f64 = String::from_utf8_lossy(&out.stdout).trim().parse().map_err(|_| "unparsable output".to_string())?;
    within("critical omega", w, 20.0, 0.05)?;
    let at = |deg: f64| z_overlap_model(&ZModelInstance::symmetric(PI / 3.0, 1.0, 1.0, deg.to_radians())).overlapping;
    ensure(at(10.0), || "no overlap at 10 deg".into())?;
    ensure(!at(25.0), || "overlap at 25 deg".into())?;
    Ok(format!("critical {w:.4} deg; overlap at 10 deg, clear at 25 deg"))
}

fn cube_census() -> Result<String, String> {
    let start = Instant::now();
    let n = count_spanning_trees(&fixtures::cube_graph()).map_err(|e| e.to_string())?;
    ensure(n == 384, || format!("{n} spanning trees"))?;
    let c = unfolding_census(&fixtures::unit_cube(), None).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(c.trees == 384 && c.nets == 384, || format!("{} trees, {} nets", c.trees, c.nets))?;
    ensure(c.classes() == 11, || format!("{} classes", c.classes()))?;
    ensure(secs < 30.0, || format!("took {secs:.1} s"))?;
    Ok(format!("384 trees, 384 nets, 11 classes in {secs:.2} s"))
}

fn closure_fixtures() -> Vec<PolyhedralGraph> {
    vec![
        fixtures::tetrahedron_graph(),
        fixtures::cube_graph(),
        fixtures::square_pyramid_graph(),
        fixtures::triangular_bipyramid_graph(),
        fixtures::octahedron_graph(),
        fixtures::dodecahedron_graph(),
        fixtures::icosahedron_graph(),
        fixtures::truncated_corner_cube().graph().clone(),
    ]
}

fn tutte_and_lifting() -> Result<String, String> {
    let g = fixtures::cube_graph();
    let sq = vec![Vec2::new(1.0, 1.0), Vec2::new(-1.0, 1.0), Vec2::new(-1.0, -1.0), Vec2::new(1.0, -1.0)];
    let pins = embed_base_polygon(g.face(0), &BaseShape::Explicit(sq)).map_err(|e| e.to_string())?;
    let e = tutte_embed(&g, 0, &pins, None).map_err(|e| e.to_string())?;
    // Symmetric ansatz (s, s): 3s = 1 + (s - s) + (s - s).
    let inner =
        (0..8).filter(|&v| !e.on_base[v]).map(|v| (e.coords[v].x.abs() - 1.0 / 3.0).abs().max((e.coords[v].y.abs() - 1.0 / 3.0).abs()));
    let dev = inner.fold(0.0, f64::max);
    ensure(dev <= 1e-9, || format!("inner square off by {dev:e}"))?;

    let k4 = fixtures::tetrahedron_graph();
    let pins = embed_base_polygon(k4.face(0), &BaseShape::default()).map_err(|e| e.to_string())?;
    let (p, _) = maxwell_cremona_lift(&tutte_embed(&k4, 0, &pins, None).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let base_z = k4.face(0).iter().map(|&v| p.coords()[v].z.abs()).fold(0.0, f64::max);
    let apex = (0..4).find(|v| !k4.face(0).contains(v)).ok_or("no apex")?;
    ensure(base_z <= 1e-9, || format!("K4 base |z| {base_z:e}"))?;
    ensure(p.coords()[apex].z > 0.0, || "K4 apex not above the base".into())?;

    let mut worst: f64 = 0.0;
    for g in closure_fixtures() {
        for base in 0..g.face_count() {
            let r = realize(&g, base, None, &BaseShape::default()).map_err(|e| format!("base {base}: {e}"))?;
            worst = worst.max(r.diagnostics.closure_residual);
        }
    }
    ensure(worst <= 1e-10, || format!("closure residual {worst:e}"))?;
    Ok(format!("inner square dev {dev:.1e}, K4 base |z| {base_z:.1e}, apex z {:.4}, worst closure {worst:.1e}", p.coords()[apex].z))
}

fn route_coverage() -> Result<String, String> {
    let cases = [
        ("tetrahedron", "tetrahedron.json", Route::Tetrahedron),
        ("square pyramid", "square_pyramid.json", Route::SharedVertex),
        ("cube", "cube.json", Route::Disjoint),
        ("octahedron", "octahedron.json", Route::Disjoint),
        ("dodecahedron", "dodecahedron.json", Route::Disjoint),
        ("icosahedron", "icosahedron.json", Route::Disjoint),
    ];
    let mut summary = Vec::new();
    for (name, file, route) in cases {
        let g = read_graph(data(file)).map_err(|e| e.to_string())?.graph;
        let cert = realize_with_overlap(&g, &PipelineConfig::default()).map_err(|e| format!("{name}: {e}"))?;
        check_certificate(&cert, route).map_err(|e| format!("{name}: {e}"))?;
        let sharpened = cert.scale_history.iter().any(|s| s.stage == ScaleStage::Sharpen);
        if name == "dodecahedron" {
            ensure(sharpened, || "dodecahedron was not sharpened".into())?;
        }
        if g.is_triangulated() {
            ensure(!sharpened, || format!("{name} was sharpened"))?;
        }
        summary.push(format!("{name} {:?}", cert.route));
    }
    Ok(summary.join(", "))
}

fn unfolding_invariants() -> Result<String, String> {
    let g = fixtures::icosahedron_graph();
    let p = realize(&g, 0, None, &BaseShape::default()).map_err(|e| e.to_string())?.solid;
    let diam = p.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let (mut worst_len, mut worst_seam): (f64, f64) = (0.0, 0.0);
    for i in 0..100 {
        let tree = random_spanning_tree(&g, &mut rng);
        let u = unfold(&p, &tree, None).map_err(|e| e.to_string())?;
        for (f, cycle) in g.faces().iter().enumerate() {
            for a in 0..cycle.len() {
                for b in a + 1..cycle.len() {
                    let d3 = (p.coords()[cycle[a]] - p.coords()[cycle[b]]).norm();
                    let d2 = (u.polygons[f][a] - u.polygons[f][b]).norm();
                    worst_len = worst_len.max((d2 - d3).abs() / d3);
                }
            }
        }
        for (e, &[x, y]) in g.edges().iter().enumerate() {
            if tree.contains(x, y) {
                continue;
            }
            let [f, h] = g.edge_faces(e);
            let at = |face: usize, v: usize| u.polygons[face][g.face_position(face, v).expect("on face")];
            worst_seam = worst_seam.max((at(f, x) - at(h, x)).norm()).max((at(f, y) - at(h, y)).norm());
        }
        let root = rng.gen_range(0..g.face_count());
        let v = unfold(&p, &tree, Some(root)).map_err(|e| e.to_string())?;
        ensure(canonical_form(&u) == canonical_form(&v), || format!("tree {i}: root {root} changes the layout"))?;
    }
    ensure(worst_len <= 1e-9, || format!("relative edge error {worst_len:e}"))?;
    ensure(worst_seam <= 1e-9 * diam, || format!("seam gap {worst_seam:e}"))?;
    Ok(format!("100 trees: max relative length error {worst_len:.1e}, max seam gap {worst_seam:.1e}, root changes canonical-equal"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut suite = Suite { failed: 0 };
    suite.report(1, "diamond-frustum metrics", diamond_frustum_metrics());
    suite.report(2, "cube overlap", cube_overlap());
    suite.report(3, "critical curvature", critical_curvature());
    suite.report(4, "cube census", cube_census());
    suite.report(5, "Tutte and lifting oracles", tutte_and_lifting());
    suite.report(6, "route coverage", route_coverage());
    suite.report(7, "unfolding invariants", unfolding_invariants());
    println!("{} of 7 criteria passed in {:.1} s", 7 - suite.failed, start.elapsed().as_secs_f64());
    if suite.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
