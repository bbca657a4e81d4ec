use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use overlap_forge::combinatorics::{
    classify_face_pairs, count_spanning_trees, enumerate_spanning_trees, random_spanning_tree, validate_graph, PolyhedralGraph,
};
use overlap_forge::embedding::{embed_base_polygon, tutte_embed, uniform_stress, BaseShape};
use overlap_forge::fixtures;
use overlap_forge::io::{graph_json, parse_graph};
use overlap_forge::lifting::{maxwell_cremona_lift, metric_report, verify_convex_polyhedron, LiftedPolyhedron};
use overlap_forge::pipeline::{realize_with_overlap, PipelineConfig};
use overlap_forge::shaping::{affine_scale, ScaleParams};
use overlap_forge::unfolding::{canonical_form, critical_omega, detect_overlap, layout_residuals, unfold, Unfolding, CRITICAL_OMEGA_TOL};

fn graphs() -> Vec<PolyhedralGraph> {
    vec![
        fixtures::tetrahedron_graph(),
        fixtures::cube_graph(),
        fixtures::square_pyramid_graph(),
        fixtures::triangular_bipyramid_graph(),
        fixtures::octahedron_graph(),
        fixtures::dodecahedron_graph(),
        fixtures::icosahedron_graph(),
    ]
}

fn solids() -> Vec<LiftedPolyhedron> {
    vec![
        fixtures::regular_tetrahedron(),
        fixtures::unit_cube(),
        fixtures::diamond_frustum(),
        fixtures::square_pyramid(1.0),
        fixtures::octahedron(),
        fixtures::dodecahedron(),
        fixtures::icosahedron(),
        fixtures::truncated_corner_cube(),
    ]
}

/// A triangle-faced graph, a triangular base, and random interior stresses.
fn stressed_lift(which: usize, base: usize, weights: &[f64]) -> LiftedPolyhedron {
    let g = [fixtures::tetrahedron_graph(), fixtures::octahedron_graph(), fixtures::icosahedron_graph()][which].clone();
    let base = base % g.face_count();
    let mut w = uniform_stress(&g, base);
    for (e, x) in w.iter_mut().enumerate() {
        if *x > 0.0 {
            *x = weights[e % weights.len()];
        }
    }
    let pins = embed_base_polygon(g.face(base), &BaseShape::default()).unwrap();
    let emb = tutte_embed(&g, base, &pins, Some(&w)).unwrap();
    maxwell_cremona_lift(&emb).unwrap().0
}

#[test]
fn every_tree_of_small_graphs_has_a_dual_spanning_complement() {
    for g in [fixtures::tetrahedron_graph(), fixtures::cube_graph(), fixtures::square_pyramid_graph()] {
        let trees = enumerate_spanning_trees(&g, None).unwrap();
        assert_eq!(trees.len() as u128, count_spanning_trees(&g).unwrap());
        for t in &trees {
            assert_eq!(t.edges().len(), g.vertex_count() - 1);
            t.check_dual_complement(&g).unwrap();
        }
    }
}

#[test]
fn unit_stress_vertices_sit_inside_their_neighbourhood() {
    for g in graphs() {
        for base in 0..g.face_count() {
            let pins = embed_base_polygon(g.face(base), &BaseShape::default()).unwrap();
            let e = tutte_embed(&g, base, &pins, None).unwrap();
            for v in (0..g.vertex_count()).filter(|&v| !e.on_base[v]) {
                let c = e.coords[v];
                let mut dirs: Vec<f64> = g.neighbors(v).iter().map(|&u| (e.coords[u].y - c.y).atan2(e.coords[u].x - c.x)).collect();
                dirs.sort_by(f64::total_cmp);
                // Strictly inside the hull iff no angular gap between neighbours reaches a half turn.
                let wrap = dirs[0] + 2.0 * PI - dirs[dirs.len() - 1];
                let gap = dirs.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
                let inside = gap < PI - 1e-9;
                assert!(inside, "vertex {v} with base {base}");
            }
        }
    }
}

fn permuted(g: &PolyhedralGraph, order: &[usize]) -> PolyhedralGraph {
    validate_graph(g.vertex_count(), order.iter().map(|&f| g.face(f).to_vec()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_trees_are_spanning_with_dual_complement(which in 0usize..7, seed in any::<u64>()) {
        let g = &graphs()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_spanning_tree(g, &mut rng);
        prop_assert_eq!(t.edges().len(), g.vertex_count() - 1);
        prop_assert!(t.check_dual_complement(g).is_ok());
    }

    #[test]
    fn route_tag_ignores_face_order(which in 0usize..7, seed in any::<u64>()) {
        let g = &graphs()[which];
        let mut order: Vec<usize> = (0..g.face_count()).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(seed));
        let h = permuted(g, &order);
        prop_assert_eq!(classify_face_pairs(g).unwrap().tag(), classify_face_pairs(&h).unwrap().tag());
    }

    #[test]
    fn common_stress_scale_leaves_drawing_fixed(which in 0usize..7, scale in 1e-3f64..1e3) {
        let g = &graphs()[which];
        let pins = embed_base_polygon(g.face(0), &BaseShape::default()).unwrap();
        let w: Vec<f64> = uniform_stress(g, 0).iter().map(|x| x * scale).collect();
        let a = tutte_embed(g, 0, &pins, None).unwrap();
        let b = tutte_embed(g, 0, &pins, Some(&w)).unwrap();
        for (p, q) in a.coords.iter().zip(&b.coords) {
            prop_assert!((p - q).norm() <= 1e-9);
        }
    }

    #[test]
    fn random_stresses_stay_in_equilibrium(which in 0usize..7, weights in prop::collection::vec(0.2f64..5.0, 1..12)) {
        let g = &graphs()[which];
        let mut w = uniform_stress(g, 0);
        for (e, x) in w.iter_mut().enumerate() {
            if *x > 0.0 {
                *x = weights[e % weights.len()];
            }
        }
        let pins = embed_base_polygon(g.face(0), &BaseShape::default()).unwrap();
        let e = tutte_embed(g, 0, &pins, Some(&w)).unwrap();
        prop_assert!(e.equilibrium_residual() <= 1e-9);
    }

    #[test]
    fn lifts_of_random_stresses_are_convex(which in 0usize..3, base in 0usize..20, weights in prop::collection::vec(0.2f64..5.0, 1..12)) {
        let p = stressed_lift(which, base, &weights);
        let report = verify_convex_polyhedron(&p);
        prop_assert!(report.passed, "{:?}", report.failures);
        prop_assert!((metric_report(&p).total_curvature() - 4.0 * PI).abs() <= 1e-8);
        let mut q = p.clone();
        q.normalize_to_base();
        for (a, b) in p.coords().iter().zip(q.coords()) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn affine_scaling_keeps_type_and_total_curvature(which in 0usize..8, angle in 0.0f64..PI, f in 0.1f64..3.0, vertical in any::<bool>()) {
        let p = &solids()[which];
        let params = if vertical { ScaleParams::vertical(f) } else { ScaleParams::horizontal(angle, f) };
        let q = affine_scale(p, params).unwrap();
        prop_assert_eq!(q.graph(), p.graph());
        prop_assert!(verify_convex_polyhedron(&q).passed);
        prop_assert!((metric_report(&q).total_curvature() - 4.0 * PI).abs() <= 1e-8);
    }

    #[test]
    fn graph_documents_round_trip(which in 0usize..8) {
        let p = &solids()[which];
        let back = parse_graph(&graph_json(p.graph(), Some(p.coords()))).unwrap();
        prop_assert_eq!(back.graph.faces(), p.graph().faces());
        let plain = parse_graph(&graph_json(p.graph(), None)).unwrap();
        prop_assert_eq!(plain.graph, p.graph().clone());
    }

    #[test]
    fn layouts_are_isometric_and_root_free(which in 0usize..8, seed in any::<u64>(), root in 0usize..20) {
        let p = &solids()[which];
        let tree = random_spanning_tree(p.graph(), &mut ChaCha8Rng::seed_from_u64(seed));
        let u = unfold(p, &tree, None).unwrap();
        let res = layout_residuals(p, &u);
        prop_assert!(res.max_length_error <= 1e-9);
        prop_assert!(res.max_seam_gap <= 1e-9 * p.diameter());
        let v = unfold(p, &tree, Some(root % p.graph().face_count())).unwrap();
        prop_assert_eq!(canonical_form(&u), canonical_form(&v));
    }

    #[test]
    fn overlap_report_ignores_face_order(which in 0usize..8, seed in any::<u64>()) {
        let p = &solids()[which];
        let tree = random_spanning_tree(p.graph(), &mut ChaCha8Rng::seed_from_u64(seed));
        let u = unfold(p, &tree, None).unwrap();
        let n = u.faces.len();
        let rev = Unfolding {
            faces: u.faces.iter().rev().cloned().collect(),
            polygons: u.polygons.iter().rev().cloned().collect(),
            ..u.clone()
        };
        let a = detect_overlap(&u);
        let b = detect_overlap(&rev);
        prop_assert_eq!(a.overlapping, b.overlapping);
        let key = |r: &overlap_forge::unfolding::OverlapReport, flip: bool| {
            let mut k: Vec<([usize; 2], i64)> = r.witnesses.iter().map(|w| {
                let f = if flip { [n - 1 - w.faces[1], n - 1 - w.faces[0]] } else { w.faces };
                (f, (w.area * 1e12).round() as i64)
            }).collect();
            k.sort_unstable();
            k
        };
        prop_assert_eq!(key(&a, false), key(&b, true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equilateral_corner_has_the_lowest_threshold(alpha_deg in 5.0f64..60.0, l12 in 0.1f64..1.0, l23 in 1.0f64..3.0) {
        let eq = critical_omega(PI / 3.0, 1.0, 1.0, CRITICAL_OMEGA_TOL).unwrap();
        let w = critical_omega(alpha_deg.to_radians(), l12, l23, CRITICAL_OMEGA_TOL).unwrap();
        prop_assert!(w >= eq - 2.0 * CRITICAL_OMEGA_TOL, "{} < {}", w.to_degrees(), eq.to_degrees());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn seeded_certificates_replay(which in 0usize..3, seed in any::<u64>()) {
        let g = [fixtures::cube_graph(), fixtures::octahedron_graph(), fixtures::square_pyramid_graph()][which].clone();
        let cert = realize_with_overlap(&g, &PipelineConfig { seed: Some(seed), ..PipelineConfig::default() }).unwrap();
        prop_assert!(cert.replay().unwrap().overlapping);
        prop_assert!(cert.z_constraint_holds());
        prop_assert!(cert.overlap.witnesses[0].area > cert.overlap.eps_area);
    }
}
