mod common;

use common::*;
use rand::Rng;
use topoplan::harness::fixture;
use topoplan::planner::default_config;
use topoplan::topology::{build_topo_graph, detect_simple_loops, extract_channels, RejectReason, TopoGraph};

#[test]
fn loops_match_brute_force_on_random_graphs() {
    let mut r = rng(21);
    for _ in 0..300 {
        let n = r.gen_range(1..=8);
        let edges = random_graph(&mut r, n, 14);
        let g = TopoGraph::from_edges(n, &edges);
        let got: Vec<Vec<usize>> = detect_simple_loops(&g, 8).into_iter().map(|l| l.nodes).collect();
        let want = brute_force_cycles(n, &edges, 8);
        assert_eq!(got.len(), want.len(), "edges {edges:?}");
        assert_eq!(got.iter().cloned().collect::<std::collections::BTreeSet<_>>(), want);
        // Length first, then lexicographic.
        assert!(got.windows(2).all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1])));
    }
}

#[test]
fn loop_length_cap() {
    let mut edges = Vec::new();
    for a in 0..5 {
        for b in (a + 1)..5 {
            edges.push((a, b));
        }
    }
    let g = TopoGraph::from_edges(5, &edges);
    for cap in 3..=5 {
        let want = brute_force_cycles(5, &edges, cap);
        assert_eq!(detect_simple_loops(&g, cap).len(), want.len());
    }
    // K5: 10 triangles, 15 four-cycles, 12 five-cycles.
    assert_eq!(detect_simple_loops(&g, 5).len(), 37);
}

#[test]
fn frame_has_one_square_channel() {
    let scene = fixture("frame").unwrap().scene();
    let cfg = default_config();
    let g = build_topo_graph(&scene, cfg.contact_tol).unwrap();
    assert_eq!((g.nodes.len(), g.edges.len()), (4, 4));
    let loops = detect_simple_loops(&g, cfg.max_loop_len);
    let ex = extract_channels(&loops, &scene, &cfg.filter_params());
    assert_eq!(ex.channels.len(), 1);
    let c = &ex.channels[0];
    assert!((c.area - 0.16).abs() <= 0.016, "area {}", c.area);
    assert!((c.incircle_radius - 0.2).abs() <= 0.02, "incircle {}", c.incircle_radius);
    // Opening lies in the x = 0 plane.
    assert!(c.plane.normal.x.abs() > 1.0 - 1e-9);
    assert!(c.center.x.abs() < 1e-9);
    assert!((c.center - c.lift(&c.centroid)).norm() < 1e-9);
    assert!(c.thickness > 0.0);
}

#[test]
fn shelf_keeps_only_the_open_slot() {
    let scene = fixture("shelf").unwrap().scene();
    let cfg = default_config();
    let g = build_topo_graph(&scene, cfg.contact_tol).unwrap();
    let loops = detect_simple_loops(&g, cfg.max_loop_len);
    let ex = extract_channels(&loops, &scene, &cfg.filter_params());
    assert_eq!(ex.channels.len(), 1);
    let ids = &ex.channels[0].source_loop.ids;
    assert!(ids.contains(&"board1".to_string()) && ids.contains(&"board2".to_string()));
    assert_eq!(ex.rejected.len(), loops.len() - 1);
    assert!(ex.rejected.iter().all(|(_, why)| *why == RejectReason::Interior));
}

#[test]
fn single_parent_ring_is_rejected_by_default() {
    // The shelf is one parent obstacle; without its opt-in flag every loop is
    // an artifact.
    let mut scene = fixture("shelf").unwrap().scene();
    scene.allow_single_parent_loops = false;
    let cfg = default_config();
    let g = build_topo_graph(&scene, cfg.contact_tol).unwrap();
    let loops = detect_simple_loops(&g, cfg.max_loop_len);
    let ex = extract_channels(&loops, &scene, &cfg.filter_params());
    assert!(ex.channels.is_empty());
    assert!(ex.rejected.iter().any(|(_, why)| *why == RejectReason::SingleParent));
}

#[test]
fn scattered_spheres_add_no_loops() {
    let scene = fixture("rubble").unwrap().scene();
    let cfg = default_config();
    let g = build_topo_graph(&scene, cfg.contact_tol).unwrap();
    let loops = detect_simple_loops(&g, cfg.max_loop_len);
    assert_eq!(loops.len(), 1);
    assert_eq!(extract_channels(&loops, &scene, &cfg.filter_params()).channels.len(), 1);
}
