use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn square(c: f64) -> BalancedWeight {
    BalancedWeight::new(vec![c, -c, c, -c]).unwrap()
}

#[test]
fn square_single_chord_closed_form() {
    let f = square(1.0);
    let d = weight_to_diagram(&f, DEFAULT_P).unwrap();
    assert_eq!(d.diagonals(), vec![(0, 2)]);
    // L = 1 + t * (-2y); majorizing requires t in [-1, 1], so the interval
    // at p has length 2 * |2 p_y|
    let closed = 4.0 * DEFAULT_P[1];
    assert!((d.chords[0].weight - closed).abs() < 1e-14);

    // brute force over the one-parameter family of affine functions through
    // the lifted vertices 0 and 2
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..100_000 {
        let t = -3.0 + 6.0 * i as f64 / 99_999.0;
        let l = |x: f64, y: f64| 1.0 + 0.0 * x - 2.0 * t * y;
        let majorizes = (0..4).all(|v| {
            let [x, y] = vertex(4, v);
            l(x, y) >= f.values()[v] - 1e-12
        });
        if majorizes {
            let val = l(DEFAULT_P[0], DEFAULT_P[1]);
            lo = lo.min(val);
            hi = hi.max(val);
        }
    }
    assert!((hi - lo - closed).abs() < 1e-4);
}

#[test]
fn zero_weight_has_no_chords() {
    for m in 4..9 {
        let d = weight_to_diagram(&BalancedWeight::zero(m), DEFAULT_P).unwrap();
        assert!(d.chords.is_empty());
    }
}

#[test]
fn reference_point_on_a_vertex_line() {
    let f = square(1.0);
    assert!(matches!(
        weight_to_diagram(&f, [0.3, 0.0]),
        Err(Error::GeneralPositionViolated(_))
    ));
}

#[test]
fn empty_diagram_inverts_to_zero() {
    for m in 4..8 {
        let d = WeightedChordDiagram::new(m, vec![]).unwrap();
        let f = diagram_to_weight(&d, DEFAULT_P).unwrap();
        assert!(f.values().iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn square_chord_inverts_to_alternating_weight() {
    let d = WeightedChordDiagram::new(4, vec![Chord { a: 0, c: 2, weight: 1.0 }]).unwrap();
    let f = diagram_to_weight(&d, DEFAULT_P).unwrap();
    let c = 1.0 / (4.0 * DEFAULT_P[1]);
    for (i, v) in f.values().iter().enumerate() {
        let expect = if i % 2 == 0 { c } else { -c };
        assert!((v - expect).abs() < 1e-12, "{:?}", f.values());
    }
    let back = weight_to_diagram(&f, DEFAULT_P).unwrap();
    assert_eq!(back.diagonals(), vec![(0, 2)]);
    assert!((back.chords[0].weight - 1.0).abs() < 1e-8);
}

#[test]
fn pentagon_round_trip_and_hull_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let f = BalancedWeight::random(5, &mut rng);
        let d = weight_to_diagram(&f, DEFAULT_P).unwrap();
        assert_eq!(d.diagonals(), upper_hull_subdivision(&f).diagonal_set);
        let g = diagram_to_weight(&d, DEFAULT_P).unwrap();
        let back = weight_to_diagram(&g, DEFAULT_P).unwrap();
        assert_eq!(back.diagonals(), d.diagonals());
        for (x, y) in back.chords.iter().zip(&d.chords) {
            assert!((x.weight - y.weight).abs() < 1e-8);
        }
    }
}

#[test]
fn degeneracy_examples() {
    let (deg, witness) = is_degenerate(&BalancedWeight::zero(4));
    assert!(deg);
    let w = witness.unwrap();
    assert_eq!(w.touching, vec![0, 1, 2, 3]);
    assert!(w.affine.iter().all(|c| c.abs() < 1e-15));
    assert!(!is_degenerate(&square(1.0)).0);
}

#[test]
fn subdivision_examples() {
    let face = upper_hull_subdivision(&BalancedWeight::zero(6));
    assert!(face.is_apex());
    assert_eq!(face.codim, 3);
    let face = upper_hull_subdivision(&square(1.0));
    assert_eq!(face.diagonal_set, vec![(0, 2)]);
    assert_eq!(face.codim, 0);
    let face = upper_hull_subdivision(&square(-1.0));
    assert_eq!(face.diagonal_set, vec![(1, 3)]);
}

#[test]
fn square_fan_has_two_cones_and_an_apex() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut seen = BTreeSet::new();
    for _ in 0..10_000 {
        let face = fan_face(&BalancedWeight::random(4, &mut rng));
        assert_eq!(face.codim, 0);
        seen.insert(face.diagonal_set);
    }
    assert_eq!(seen.len(), 2);
    assert!(fan_face(&BalancedWeight::zero(4)).is_apex());
}

#[test]
fn scaling_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for m in 4..10 {
        let f = BalancedWeight::random(m, &mut rng);
        for lambda in [1e-3, 0.5, 7.0, 1e4] {
            assert_eq!(fan_face(&f.scaled(lambda)), fan_face(&f));
        }
    }
}

#[test]
fn balanced_space_dimension() {
    for n in 3..=10 {
        let m = n + 1;
        let rows: Vec<Vec<f64>> = vec![
            vec![1.0; m],
            (0..m).map(|i| vertex(m, i)[0]).collect(),
            (0..m).map(|i| vertex(m, i)[1]).collect(),
        ];
        let r = linalg::rank(rows, 1e-10);
        assert_eq!(m - r, n - 2);
        assert_eq!(linalg::balanced_basis(m).len(), n - 2);
    }
}

#[test]
fn cone_dimension_matches_codim() {
    // weights inducing a fixed diagonal set span a cone of dimension |D|
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for m in 5..8 {
        for _ in 0..5 {
            let f = BalancedWeight::random(m, &mut rng);
            let d = weight_to_diagram(&f, DEFAULT_P).unwrap();
            let face = fan_face(&f);
            let kept: Vec<Chord> = d.chords.iter().copied().take(1 + d.chords.len() / 2).collect();
            let sub = WeightedChordDiagram::new(m, kept.clone()).unwrap();
            let target = FanFace::new(m, sub.diagonals());
            let mut samples = Vec::new();
            for _ in 0..3 * m {
                let randomized: Vec<Chord> = kept
                    .iter()
                    .map(|c| Chord { weight: rand::Rng::gen_range(&mut rng, 0.1..2.0), ..*c })
                    .collect();
                let g = diagram_to_weight(&WeightedChordDiagram::new(m, randomized).unwrap(), DEFAULT_P).unwrap();
                assert_eq!(fan_face(&g), target);
                samples.push(g.values().to_vec());
            }
            assert_eq!(linalg::rank(samples, 1e-9), (m - 3) - target.codim);
            assert_eq!(face.codim, 0);
        }
    }
}

#[test]
fn diagram_validation() {
    assert!(WeightedChordDiagram::new(5, vec![Chord { a: 0, c: 1, weight: 1.0 }]).is_err());
    assert!(WeightedChordDiagram::new(5, vec![Chord { a: 0, c: 2, weight: 0.0 }]).is_err());
    let crossing = vec![Chord { a: 0, c: 2, weight: 1.0 }, Chord { a: 1, c: 3, weight: 1.0 }];
    assert!(matches!(WeightedChordDiagram::new(5, crossing), Err(Error::InconsistentDiagram(_))));
    let d = WeightedChordDiagram::new(6, vec![Chord { a: 3, c: 0, weight: 2.0 }]).unwrap();
    assert_eq!(d.support_signature(), "6:0-3");
    let json = serde_json::to_string(&d).unwrap();
    assert_eq!(json, r#"{"n_plus_1":6,"chords":[[0,3,2.0]]}"#);
}

#[test]
fn unbalanced_input_rejected() {
    assert!(BalancedWeight::new(vec![1.0, 0.0, 0.0, 0.0]).is_err());
    let json = serde_json::to_string(&square(2.0)).unwrap();
    assert_eq!(json, r#"{"values":[2.0,-2.0,2.0,-2.0]}"#);
}

/// Bracketings of n symbols are in bijection with triangulations of the
/// (n+1)-gon: the root bracket splits the base edge (0, n) at its apex.
fn bracketings(lo: usize, hi: usize) -> Vec<String> {
    if hi - lo == 1 {
        return vec![((b'a' + lo as u8) as char).to_string()];
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        for l in bracketings(lo, mid) {
            for r in bracketings(mid, hi) {
                out.push(format!("({l}{r})"));
            }
        }
    }
    out
}

fn bracket_of(t: &Triangulation, lo: usize, hi: usize) -> String {
    if hi - lo == 1 {
        return ((b'a' + lo as u8) as char).to_string();
    }
    let apex = (lo + 1..hi)
        .find(|&b| {
            let edge = |x: usize, y: usize| y - x == 1 || t.diagonals.contains(&(x, y)) || (x, y) == (0, t.n_plus_1 - 1);
            edge(lo, b) && edge(b, hi)
        })
        .unwrap();
    format!("({}{})", bracket_of(t, lo, apex), bracket_of(t, apex, hi))
}

#[test]
fn bracketing_bijection() {
    for n in 3..=6 {
        let brackets: BTreeSet<String> = bracketings(0, n).into_iter().collect();
        let images: BTreeSet<String> = enumerate_triangulations(n)
            .unwrap()
            .iter()
            .map(|t| bracket_of(t, 0, n))
            .collect();
        assert_eq!(brackets, images);
        assert_eq!(brackets.len() as u64, catalan(n - 1).unwrap());
    }
}
