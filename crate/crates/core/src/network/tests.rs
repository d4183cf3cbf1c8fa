use super::*;
use crate::qdcore::{make_qdiff, QuadDiff};
use crate::tracer::{build_structure, find_short_trajectories, TraceConfig};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn k2() -> QuadDiff {
    make_qdiff(2, &[c(-1.0, 0.0), c(0.0, 0.0)]).unwrap()
}

fn k3() -> QuadDiff {
    make_qdiff(3, &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap()
}

fn k3_generic() -> QuadDiff {
    make_qdiff(3, &[c(-1.0, 0.0), c(0.0, 0.1), c(0.0, 0.0)]).unwrap()
}

fn graph(qd: &QuadDiff, o: Orientation) -> AdmissibleGraph {
    build_graph(&build_structure(qd, o, &TraceConfig::default()).unwrap()).unwrap()
}

fn merged(qd: &QuadDiff) -> MergedGraph {
    merge_graphs(&graph(qd, Orientation::Horizontal), &graph(qd, Orientation::Vertical)).unwrap()
}

fn outer(a: usize, b: usize, w: f64) -> GraphEdge {
    GraphEdge {
        ends: [Vertex::Outer(a), Vertex::Outer(b)],
        weight: w,
        gaps: [0, 0],
    }
}

fn pole(a: usize, gap: usize, w: f64) -> GraphEdge {
    GraphEdge {
        ends: [Vertex::Center, Vertex::Outer(a)],
        weight: w,
        gaps: [0, gap],
    }
}

fn plain(orientation: Orientation, n_outer: usize, edges: Vec<GraphEdge>) -> AdmissibleGraph {
    AdmissibleGraph {
        orientation,
        n_outer,
        edges,
        double_support: None,
    }
}

#[test]
fn cubic_horizontal_graph() {
    let g = graph(&k3(), Orientation::Horizontal);
    assert_eq!(g.n_outer, 4);
    assert_eq!(g.double_support, Some(2));
    assert_eq!(g.center_edges().len(), 2);
    let chords: Vec<_> = g.strip_edges().iter().map(|e| e.ends).collect();
    assert_eq!(chords, vec![[Vertex::Outer(1), Vertex::Outer(3)]]);
    let gamma = to_chord_diagram(&g).unwrap();
    // the doubly supported vertex is split
    assert_eq!(gamma.diagram.n_plus_1, 5);
    assert_eq!(gamma.origin, vec![0, 1, 2, 2, 3]);
    assert_eq!(gamma.diagram.chords.len(), 1);
    assert!(has_short(&g).unwrap());
}

#[test]
fn cubic_vertical_graph() {
    let g = graph(&k3(), Orientation::Vertical);
    assert_eq!(g.double_support, None);
    let ends: Vec<usize> = g.center_edges().iter().map(|e| e.outer_ends()[0].0).collect();
    assert_eq!(ends, vec![0, 3]);
    let gamma = to_chord_diagram(&g).unwrap();
    assert_eq!(gamma.diagram.n_plus_1, 4);
    assert!(gamma.diagram.chords.is_empty());
    assert_eq!((gamma.sides[0].a, gamma.sides[0].c), (0, 3));
    assert!(has_short(&g).unwrap());
}

#[test]
fn generic_cubic_has_complete_triangulations() {
    let qd = k3_generic();
    for o in Orientation::BOTH {
        let g = graph(&qd, o);
        let gamma = to_chord_diagram(&g).unwrap();
        assert_eq!(gamma.diagram.n_plus_1, 5);
        assert_eq!(gamma.diagram.chords.len(), 2);
        assert!(!has_short(&g).unwrap());
    }
}

#[test]
fn short_detection_routes_agree() {
    for qd in [k2(), k3(), k3_generic()] {
        for o in Orientation::BOTH {
            let g = graph(&qd, o);
            let found = !find_short_trajectories(&qd, o, 1e-5).is_empty();
            assert_eq!(has_short(&g).unwrap(), found, "{:?} {o:?}", qd.coeffs());
        }
    }
}

#[test]
fn chord_diagram_keeps_strip_widths() {
    for qd in [k2(), k3(), k3_generic()] {
        for o in Orientation::BOTH {
            let s = build_structure(&qd, o, &TraceConfig::default()).unwrap();
            let gamma = to_chord_diagram(&build_graph(&s).unwrap()).unwrap();
            let mut got: Vec<f64> = gamma
                .diagram
                .chords
                .iter()
                .chain(&gamma.sides)
                .map(|c| c.weight)
                .collect();
            let mut want: Vec<f64> = s.strips.iter().map(|s| s.width).collect();
            got.sort_by(f64::total_cmp);
            want.sort_by(f64::total_cmp);
            assert_eq!(got, want);
        }
    }
}

#[test]
fn graph_is_stable_under_small_perturbation() {
    let base = k3_generic();
    let moved = make_qdiff(3, &[c(-1.0, 1e-6), c(1e-6, 0.1), c(0.0, 0.0)]).unwrap();
    for o in Orientation::BOTH {
        let (g0, g1) = (graph(&base, o), graph(&moved, o));
        assert_eq!(g0.double_support, g1.double_support);
        let shape = |g: &AdmissibleGraph| g.edges.iter().map(|e| (e.ends, e.gaps)).collect::<Vec<_>>();
        assert_eq!(shape(&g0), shape(&g1));
    }
}

#[test]
fn graphs_need_the_pole() {
    let poly = QuadDiff::polynomial(3, &[c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
    let s = build_structure(&poly, Orientation::Horizontal, &TraceConfig::default()).unwrap();
    assert!(matches!(build_graph(&s), Err(Error::Precondition(_))));
}

#[test]
fn admissibility_rules() {
    let h = Orientation::Horizontal;
    assert!(check_admissible(&plain(h, 4, vec![pole(0, 0, 1.0), pole(1, 1, 1.0), outer(1, 3, 2.0)])));
    // three edges at the centre
    assert!(!check_admissible(&plain(
        h,
        4,
        vec![pole(0, 0, 1.0), pole(1, 0, 1.0), pole(2, 0, 1.0)]
    )));
    // centre edges at non-adjacent vertices
    assert!(!check_admissible(&plain(h, 4, vec![pole(0, 0, 1.0), pole(2, 0, 1.0)])));
    // crossing chords of a hexagon
    assert!(!check_admissible(&plain(
        h,
        6,
        vec![pole(0, 0, 1.0), pole(1, 0, 1.0), outer(0, 3, 1.0), outer(1, 4, 1.0)]
    )));
    assert!(!check_admissible(&plain(h, 4, vec![pole(0, 0, 1.0), pole(1, 1, 1.0), outer(1, 3, 0.0)])));
    // double support must be declared
    let mut g = plain(h, 4, vec![pole(2, 0, 1.0), pole(2, 1, 1.0)]);
    assert!(!check_admissible(&g));
    g.double_support = Some(2);
    assert!(check_admissible(&g));
    // attachments in the wrong order around a vertex
    let twisted = plain(
        h,
        6,
        vec![pole(3, 0, 1.0), pole(4, 1, 1.0), GraphEdge { gaps: [1, 0], ..outer(0, 2, 1.0) }, outer(0, 4, 1.0)],
    );
    assert!(!check_admissible(&twisted));
}

#[test]
fn pole_pair_alone_gives_no_diagonals() {
    let g = plain(Orientation::Horizontal, 5, vec![pole(1, 0, 0.5), pole(2, 0, 0.5)]);
    let gamma = to_chord_diagram(&g).unwrap();
    assert!(gamma.diagram.chords.is_empty());
    assert_eq!(gamma.sides.len(), 1);
    assert!(has_short(&g).unwrap());
}

#[test]
fn triangle_is_complete() {
    let g = graph(&k2(), Orientation::Horizontal);
    let gamma = to_chord_diagram(&g).unwrap();
    assert_eq!(gamma.diagram.n_plus_1, 3);
    assert!(!has_short(&g).unwrap());
}

#[test]
fn parallel_strips_share_a_chord() {
    let g = plain(
        Orientation::Vertical,
        5,
        vec![pole(0, 0, 1.0), pole(1, 2, 1.0), outer(1, 3, 0.25), GraphEdge { gaps: [1, 1], ..outer(1, 3, 0.5) }],
    );
    assert!(check_admissible(&g));
    let gamma = to_chord_diagram(&g).unwrap();
    assert_eq!(gamma.diagram.chords.len(), 1);
    assert_eq!(gamma.diagram.chords[0].weight, 0.75);
}

#[test]
fn graph_json_round_trip() {
    let g = graph(&k3(), Orientation::Horizontal);
    let text = serde_json::to_string(&g).unwrap();
    assert!(text.contains("\"double_support\":2"));
    let back: AdmissibleGraph = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
}

#[test]
fn merge_interlaces_the_polygons() {
    let m = merged(&k3());
    assert_eq!(m.pi_len(), 8);
    // horizontal chord 1-3 lands on 2-6, the vertical pole edges on 1 and 7
    let find = |color| {
        let mut v: Vec<[MergedVertex; 2]> = m.edges.iter().filter(|e| e.color == color).map(|e| e.ends).collect();
        v.sort();
        v
    };
    assert!(find(Orientation::Horizontal).contains(&[MergedVertex::Pi(2), MergedVertex::Pi(6)]));
    assert_eq!(
        find(Orientation::Vertical),
        vec![
            [MergedVertex::Center, MergedVertex::Pi(1)],
            [MergedVertex::Center, MergedVertex::Pi(7)]
        ]
    );
    // centre face of the horizontal graph is the triangle on directions 1, 2, 3
    assert!((m.center[0] + 1.0 / 3.0).abs() < 1e-12 && m.center[1].abs() < 1e-12);
    let m2 = merged(&k2());
    assert_eq!(m2.edges.len(), 4);
}

#[test]
fn merge_rejects_mismatched_graphs() {
    let gh = graph(&k3(), Orientation::Horizontal);
    assert!(matches!(merge_graphs(&gh, &gh), Err(Error::Precondition(_))));
    let gv = graph(&k2(), Orientation::Vertical);
    assert!(matches!(merge_graphs(&gh, &gv), Err(Error::Precondition(_))));
}

fn signed_area(poly: &[[f64; 2]]) -> f64 {
    let m = poly.len();
    (0..m)
        .map(|i| poly[i][0] * poly[(i + 1) % m][1] - poly[i][1] * poly[(i + 1) % m][0])
        .sum::<f64>()
        / 2.0
}

fn check_extension(m: &MergedGraph, x: &ExtendedGraph) {
    let n = m.pi_len();
    // each polygon side bounds exactly one triangle
    assert_eq!(x.count(FaceKind::OuterSide), n);
    let total: f64 = x.faces.iter().map(|f| signed_area(&f.polygon)).sum();
    let regular = n as f64 / 2.0 * (std::f64::consts::TAU / n as f64).sin();
    assert!((total - regular).abs() < 1e-12, "{total} vs {regular}");
    for f in &x.faces {
        match (f.kind, f.metric) {
            (FaceKind::OuterSide, Metric::Quadrant) => {}
            (FaceKind::OuterVertex, Metric::StripQuarter { width, .. }) => assert!(width > 0.0),
            (FaceKind::Bicolored, Metric::Rectangle { horizontal, vertical }) => {
                assert!(horizontal > 0.0 && vertical > 0.0)
            }
            (FaceKind::Pole, Metric::Rectangle { .. } | Metric::StripQuarter { .. }) => {}
            other => panic!("mistyped face {other:?}"),
        }
    }
}

#[test]
fn pole_edges_only() {
    // four edges from the centre to polygon vertices 1, 2, 4, 5 cut the
    // hexagon into four faces; counting their sectors by hand gives six
    // side triangles, eight vertex triangles and six at the pole
    let m = merged(&k2());
    let x = extend_graph(&m).unwrap();
    check_extension(&m, &x);
    assert_eq!(x.component_centers.len(), 4);
    assert_eq!(x.count(FaceKind::OuterVertex), 8);
    assert_eq!(x.count(FaceKind::Pole), 6);
    assert_eq!(x.count(FaceKind::Bicolored), 0);
}

#[test]
fn cubic_extension() {
    // the chord x = 0 meets both vertical pole edges, which run from
    // (-1/3, 0) to (cos 45, +-sin 45); each crossing gives four quadrilaterals
    let m = merged(&k3());
    let x = extend_graph(&m).unwrap();
    check_extension(&m, &x);
    assert_eq!(x.count(FaceKind::Bicolored), 8);
    let json = serde_json::to_value(&x).unwrap();
    assert_eq!(json["faces"].as_array().unwrap().len(), x.faces.len());
}

#[test]
fn generic_extension() {
    let m = merged(&k3_generic());
    let x = extend_graph(&m).unwrap();
    check_extension(&m, &x);
}

mod random {
    use super::*;
    use proptest::prelude::*;

    /// An admissible graph: greedily kept non-crossing chords plus a centre
    /// pair on a side of the polygon.
    fn admissible(o: Orientation, n: usize, picks: &[(usize, usize)], side: usize) -> AdmissibleGraph {
        let mut edges = vec![pole(side % n, 0, 1.0), pole((side + 1) % n, 0, 1.0)];
        let mut kept: Vec<(usize, usize)> = Vec::new();
        for &(a, b) in picks {
            let (a, b) = (a % n, b % n);
            if a == b || adjacent(n, a, b) || kept.iter().any(|&c| c == (a.min(b), a.max(b)) || interleave(n, c, (a, b))) {
                continue;
            }
            kept.push((a.min(b), a.max(b)));
            edges.push(outer(a, b, 1.0 + kept.len() as f64));
        }
        // gaps: attachments at each vertex ordered by offset
        let mut g = plain(o, n, edges);
        for v in 0..n {
            let mut at: Vec<(usize, usize, usize)> = Vec::new();
            for (i, e) in g.edges.iter().enumerate() {
                for (slot, end) in e.ends.iter().enumerate() {
                    if *end == Vertex::Outer(v) {
                        let other = match e.ends[1 - slot] {
                            Vertex::Outer(w) => 2 * ((w + n - v) % n),
                            Vertex::Center if (side + 1) % n == v => 2 * n - 1,
                            Vertex::Center => 1,
                        };
                        at.push((other, i, slot));
                    }
                }
            }
            at.sort();
            for (gap, &(_, i, slot)) in at.iter().enumerate() {
                g.edges[i].gaps[slot] = gap;
            }
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn merged_pairs_extend(
            n in 3usize..8,
            ph in proptest::collection::vec((0usize..8, 0usize..8), 0..6),
            pv in proptest::collection::vec((0usize..8, 0usize..8), 0..6),
            sh in 0usize..8,
            sv in 0usize..8,
        ) {
            let gh = admissible(Orientation::Horizontal, n, &ph, sh);
            let gv = admissible(Orientation::Vertical, n, &pv, sv);
            prop_assert!(check_admissible(&gh) && check_admissible(&gv));
            let Ok(m) = merge_graphs(&gh, &gv) else { return Ok(()) };
            let x = extend_graph(&m).unwrap();
            check_extension(&m, &x);
        }
    }
}
