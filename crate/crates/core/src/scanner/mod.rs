//! Two-parameter slices of coefficient space and the walls where the
//! trajectory structure jumps.
//!
//! A slice point `(t, s)` maps to the coefficient vector
//! `base + t * u + s * v`, with `u`, `v` in `R^{2k}` laid out as
//! `(Re a_0, Im a_0, Re a_1, Im a_1, ...)`.

mod export;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{Chord, WeightedChordDiagram};
use crate::error::{Error, Result};
use crate::network::{build_graph, to_chord_diagram};
use crate::qdcore::{period, Family, Path, QuadDiff};
use crate::tracer::{build_structure, find_short_trajectories, Orientation, TraceConfig};

pub use export::{to_csv, to_ppm, walls_json};

/// Edge parameters are refined until the bracket is this narrow.
pub const REFINE_TOL: f64 = 1e-8;

/// Tolerance handed to the short-trajectory detector at a refined wall.
pub const SHORT_TOL: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    Horizontal,
    Vertical,
    Both,
}

impl Selection {
    pub fn includes(self, o: Orientation) -> bool {
        match self {
            Selection::Both => true,
            Selection::Horizontal => o == Orientation::Horizontal,
            Selection::Vertical => o == Orientation::Vertical,
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub k: usize,
    #[serde(default)]
    pub family: Family,
    /// `a_0 .. a_{k-1}` at the slice origin.
    pub base: Vec<Complex64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t_range: [f64; 2],
    pub s_range: [f64; 2],
    pub nx: usize,
    pub ny: usize,
    pub orientation: Selection,
    /// Locate each wall crossing along its grid edge.
    #[serde(default = "default_true")]
    pub refine: bool,
}

impl SliceSpec {
    /// A `k = 2` slice through the differential with zeros `1` and
    /// `1 + 0.2 e^{i pi/4}`, moving `a_0` by `t + s i` with `t, s` in
    /// `[-0.1, 0.1]`. It is crossed by horizontal walls of short
    /// trajectories and by walls of pole-zero connections.
    pub fn k2_demo() -> Self {
        let d = Complex64::from_polar(0.2, PI / 4.0);
        Self {
            k: 2,
            family: Family::Rational,
            base: vec![1.0 + d, -(2.0 + d)],
            u: vec![1.0, 0.0, 0.0, 0.0],
            v: vec![0.0, 1.0, 0.0, 0.0],
            t_range: [-0.1, 0.1],
            s_range: [-0.1, 0.1],
            nx: 21,
            ny: 21,
            orientation: Selection::Both,
            refine: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let dim = 2 * self.k;
        if self.base.len() != self.k || self.u.len() != dim || self.v.len() != dim {
            return Err(Error::Precondition(format!(
                "slice for k = {} needs {} base coefficients and directions of length {dim}",
                self.k, self.k
            )));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Precondition("grid needs at least 2 x 2 points".into()));
        }
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let (uu, vv, uv) = (dot(&self.u, &self.u), dot(&self.v, &self.v), dot(&self.u, &self.v));
        if uu * vv - uv * uv <= 1e-12 * uu * vv || uu == 0.0 || vv == 0.0 {
            return Err(Error::Precondition("slice directions are linearly dependent".into()));
        }
        let finite = |x: &f64| x.is_finite();
        if !(self.t_range.iter().all(finite) && self.s_range.iter().all(finite)) {
            return Err(Error::Precondition("non-finite slice range".into()));
        }
        Ok(())
    }

    /// Slice coordinates of grid point `(i, j)`.
    pub fn point(&self, i: usize, j: usize) -> [f64; 2] {
        let lerp = |r: [f64; 2], x: usize, n: usize| r[0] + (r[1] - r[0]) * x as f64 / (n - 1) as f64;
        [lerp(self.t_range, i, self.nx), lerp(self.s_range, j, self.ny)]
    }

    pub fn coeffs_at(&self, [t, s]: [f64; 2]) -> Vec<Complex64> {
        self.base
            .iter()
            .enumerate()
            .map(|(m, b)| {
                b + Complex64::new(
                    t * self.u[2 * m] + s * self.v[2 * m],
                    t * self.u[2 * m + 1] + s * self.v[2 * m + 1],
                )
            })
            .collect()
    }

    pub fn qd_at(&self, p: [f64; 2]) -> Result<QuadDiff> {
        let c = self.coeffs_at(p);
        match self.family {
            Family::Rational => QuadDiff::new(self.k, &c),
            Family::Polynomial => QuadDiff::polynomial(self.k, &c),
        }
    }
}

/// Classification of one orientation at one grid point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Label {
    /// Chord supports of a complete triangulation.
    Cell(String),
    /// The triangulation is incomplete: the point itself lies on a wall.
    Wall(String),
    /// Collided zeros, or a vanishing constant term.
    Singular,
    Failed(String),
}

impl Label {
    pub fn short(&self) -> &str {
        match self {
            Label::Cell(s) => s,
            Label::Wall(_) => "WALL",
            Label::Singular => "SINGULAR",
            Label::Failed(_) => "FAILED",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
    pub t: f64,
    pub s: f64,
    pub horizontal: Option<Label>,
    pub vertical: Option<Label>,
}

impl GridPoint {
    pub fn label(&self, o: Orientation) -> Option<&Label> {
        match o {
            Orientation::Horizontal => self.horizontal.as_ref(),
            Orientation::Vertical => self.vertical.as_ref(),
        }
    }
}

/// A grid edge whose endpoint labels differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WallEdge {
    pub from: [usize; 2],
    pub to: [usize; 2],
    pub orientation: Orientation,
}

/// Where the transverse part of a zero-to-zero period vanishes on an edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WallPoint {
    /// Edge parameter in `[0, 1]`.
    pub t: f64,
    /// Zeros (in the order of the edge start) joined by the short trajectory.
    pub pair: (usize, usize),
    pub period: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedWall {
    pub edge: WallEdge,
    pub point: [f64; 2],
    pub wall: WallPoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnrefinedWall {
    pub edge: WallEdge,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WallMap {
    pub spec: SliceSpec,
    /// Row-major: index `j * nx + i`.
    pub points: Vec<GridPoint>,
    pub walls: Vec<WallEdge>,
    pub refined: Vec<RefinedWall>,
    pub unrefined: Vec<UnrefinedWall>,
}

impl WallMap {
    pub fn at(&self, i: usize, j: usize) -> &GridPoint {
        &self.points[j * self.spec.nx + i]
    }

    /// Distinct cell signatures per orientation.
    pub fn signatures(&self, o: Orientation) -> Vec<&str> {
        let mut v: Vec<&str> = self
            .points
            .iter()
            .filter_map(|p| match p.label(o) {
                Some(Label::Cell(s)) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn encode(n_plus_1: usize, chords: &[Chord], sides: &[Chord]) -> String {
    let pair = |c: &Chord| format!("{}-{}", c.a.min(c.c), c.a.max(c.c));
    let mut out = format!("{n_plus_1}");
    if let Some(p) = sides.first() {
        out += &format!("|p{}", pair(p));
    }
    let mut rest: Vec<String> = sides.iter().skip(1).map(|c| format!("s{}", pair(c))).collect();
    rest.sort();
    rest.extend(chords.iter().map(pair));
    for r in rest {
        out += &format!("|{r}");
    }
    out
}

/// Chord-support signature of one orientation.
pub fn classify(qd: &QuadDiff, orientation: Orientation) -> Label {
    if qd.has_multiple_zero() {
        return Label::Singular;
    }
    match signature(qd, orientation) {
        Ok((sig, complete)) if complete => Label::Cell(sig),
        Ok((sig, _)) => Label::Wall(sig),
        Err(e) => Label::Failed(e.to_string()),
    }
}

fn signature(qd: &QuadDiff, orientation: Orientation) -> Result<(String, bool)> {
    let s = build_structure(qd, orientation, &TraceConfig::default())?;
    match qd.family() {
        Family::Rational => {
            let gamma = to_chord_diagram(&build_graph(&s)?)?;
            let d = &gamma.diagram;
            Ok((encode(d.n_plus_1, &d.chords, &gamma.sides), d.is_complete()))
        }
        Family::Polynomial => {
            // no pole: every strip is a chord between two directions
            let n = s.n_directions();
            let mut chords: Vec<Chord> = Vec::new();
            let mut sides = Vec::new();
            for strip in &s.strips {
                let (a, c) = (strip.ends[0].direction, strip.ends[1].direction);
                let chord = Chord { a: a.min(c), c: a.max(c), weight: strip.width };
                if (a + 1) % n == c || (c + 1) % n == a || a == c {
                    sides.push(chord);
                } else if let Some(x) = chords.iter_mut().find(|x| (x.a, x.c) == (chord.a, chord.c)) {
                    x.weight += chord.weight;
                } else {
                    chords.push(chord);
                }
            }
            let d = WeightedChordDiagram::new(n, chords)?;
            // sides carry no pole marker here
            let mut sig = encode(n, &d.chords, &[]);
            for c in &sides {
                sig += &format!("|s{}-{}", c.a, c.c);
            }
            Ok((sig, d.is_complete() && s.shorts.is_empty()))
        }
    }
}

fn classify_point(spec: &SliceSpec, p: [f64; 2], o: Orientation) -> Option<Label> {
    if !spec.orientation.includes(o) {
        return None;
    }
    Some(match spec.qd_at(p) {
        Ok(qd) => classify(&qd, o),
        Err(Error::DegenerateInput(_)) => Label::Singular,
        Err(e) => Label::Failed(e.to_string()),
    })
}

/// Labels every grid point, marks edges between differing labels and, if
/// requested, locates the wall on each of them.
///
/// Points are evaluated in parallel; the output depends only on `spec`.
pub fn scan_slice(spec: &SliceSpec) -> Result<WallMap> {
    spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let points: Vec<GridPoint> = (0..nx * ny)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let p = spec.point(i, j);
            GridPoint {
                i,
                j,
                t: p[0],
                s: p[1],
                horizontal: classify_point(spec, p, Orientation::Horizontal),
                vertical: classify_point(spec, p, Orientation::Vertical),
            }
        })
        .collect();

    let mut walls = Vec::new();
    for o in Orientation::BOTH {
        if !spec.orientation.includes(o) {
            continue;
        }
        for j in 0..ny {
            for i in 0..nx {
                let here = points[j * nx + i].label(o);
                for (di, dj) in [(1, 0), (0, 1)] {
                    let (i2, j2) = (i + di, j + dj);
                    if i2 < nx && j2 < ny && points[j2 * nx + i2].label(o) != here {
                        walls.push(WallEdge { from: [i, j], to: [i2, j2], orientation: o });
                    }
                }
            }
        }
    }

    let mut refined = Vec::new();
    let mut unrefined = Vec::new();
    if spec.refine {
        let outcomes: Vec<(WallEdge, Result<WallPoint>)> = walls
            .par_iter()
            .map(|&edge| {
                let (a, b) = (spec.point(edge.from[0], edge.from[1]), spec.point(edge.to[0], edge.to[1]));
                let at = |x: f64| [a[0] + x * (b[0] - a[0]), a[1] + x * (b[1] - a[1])];
                (edge, wall_refine(|x| spec.qd_at(at(x)), edge.orientation))
            })
            .collect();
        for (edge, r) in outcomes {
            match r {
                Ok(wall) => {
                    let (a, b) = (spec.point(edge.from[0], edge.from[1]), spec.point(edge.to[0], edge.to[1]));
                    let point = [a[0] + wall.t * (b[0] - a[0]), a[1] + wall.t * (b[1] - a[1])];
                    refined.push(RefinedWall { edge, point, wall });
                }
                Err(e) => unrefined.push(UnrefinedWall { edge, reason: e.to_string() }),
            }
        }
    }
    Ok(WallMap {
        spec: spec.clone(),
        points,
        walls,
        refined,
        unrefined,
    })
}

/// Straight path between two zeros, bent around the origin along the
/// shorter arc of a circle of radius `0.1 * min |zero|` when it comes closer.
pub fn zero_path(qd: &QuadDiff, a: Complex64, b: Complex64) -> Result<Path> {
    if !qd.has_pole() {
        return Path::segment(a, b);
    }
    let r = 0.1
        * qd.zeros()
            .iter()
            .map(|(z, _)| z.norm())
            .fold(f64::INFINITY, f64::min);
    let d = b - a;
    let len2 = d.norm_sqr();
    let foot = (-(a.conj() * d).re / len2).clamp(0.0, 1.0);
    let closest = a + d * foot;
    if closest.norm() >= r {
        return Path::segment(a, b);
    }
    // where the segment enters and leaves the disc
    let (pa, pd) = ((a.conj() * d).re, a.norm_sqr() - r * r);
    let disc = (pa * pa - len2 * pd).max(0.0).sqrt();
    let (t1, t2) = ((-pa - disc) / len2, (-pa + disc) / len2);
    let (e1, e2) = (a + d * t1, a + d * t2);
    let (th1, mut th2) = (e1.arg(), e2.arg());
    // shorter arc, on the side of the segment's closest point
    while th2 - th1 > PI {
        th2 -= 2.0 * PI;
    }
    while th2 - th1 < -PI {
        th2 += 2.0 * PI;
    }
    const ARC: usize = 16;
    let mut pts = vec![a];
    for m in 0..=ARC {
        let th = th1 + (th2 - th1) * m as f64 / ARC as f64;
        pts.push(Complex64::from_polar(r, th));
    }
    pts.push(b);
    pts.dedup_by(|x, y| (*x - *y).norm() == 0.0);
    Path::new(pts)
}

fn transverse_sign(o: Orientation, p: Complex64) -> f64 {
    // invariant under the sign ambiguity of the period
    match o {
        Orientation::Horizontal => p.im * p.re.signum(),
        Orientation::Vertical => p.re * p.im.signum(),
    }
}

/// Zero-pair periods at one parameter, zeros matched to `reference`.
fn pair_periods(qd: &QuadDiff, reference: &[Complex64]) -> Vec<Option<Complex64>> {
    let zs: Vec<Complex64> = qd.zeros().iter().map(|(z, _)| *z).collect();
    let mut used = vec![false; zs.len()];
    let matched: Vec<Complex64> = reference
        .iter()
        .map(|r| {
            let (m, _) = zs
                .iter()
                .enumerate()
                .filter(|(m, _)| !used[*m])
                .min_by(|x, y| (x.1 - r).norm().total_cmp(&(y.1 - r).norm()))
                .unwrap();
            used[m] = true;
            zs[m]
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..matched.len() {
        for j in i + 1..matched.len() {
            let p = zero_path(qd, matched[i], matched[j])
                .and_then(|path| period(qd, &path, Complex64::new(1.0, 0.0)));
            out.push(p.ok());
        }
    }
    out
}

/// Locates a wall on the edge `x -> qd_at(x)`, `x` in `[0, 1]`.
///
/// Bisects each zero-pair period whose transverse part changes sign between
/// the edge ends, then confirms with the trajectory-based short detector.
pub fn wall_refine<F>(qd_at: F, orientation: Orientation) -> Result<WallPoint>
where
    F: Fn(f64) -> Result<QuadDiff>,
{
    let (q0, q1) = (qd_at(0.0)?, qd_at(1.0)?);
    if q0.zeros().len() != q0.k() || q1.zeros().len() != q1.k() {
        return Err(Error::Precondition("edge end has a multiple zero".into()));
    }
    if classify(&q0, orientation) == classify(&q1, orientation) {
        return Err(Error::Precondition("edge ends carry the same signature".into()));
    }
    let reference: Vec<Complex64> = q0.zeros().iter().map(|(z, _)| *z).collect();
    let pairs: Vec<(usize, usize)> = (0..reference.len())
        .flat_map(|i| (i + 1..reference.len()).map(move |j| (i, j)))
        .collect();
    let eval = |x: f64| -> Result<Vec<Option<Complex64>>> { Ok(pair_periods(&qd_at(x)?, &reference)) };
    let (f0, f1) = (eval(0.0)?, eval(1.0)?);
    let mut candidates = Vec::new();
    for (m, &pair) in pairs.iter().enumerate() {
        let (Some(p0), Some(p1)) = (f0[m], f1[m]) else { continue };
        let (s0, s1) = (transverse_sign(orientation, p0), transverse_sign(orientation, p1));
        if s0 == 0.0 || s1 == 0.0 || s0.signum() == s1.signum() {
            continue;
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        let mut ok = true;
        while hi - lo > REFINE_TOL {
            let mid = 0.5 * (lo + hi);
            match eval(mid)?[m] {
                Some(p) if transverse_sign(orientation, p).signum() == s0.signum() => lo = mid,
                Some(_) => hi = mid,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        let t = 0.5 * (lo + hi);
        let Some(period) = (if ok { eval(t)?[m] } else { None }) else { continue };
        // a jump of the other component flips the sign without a zero
        if orientation.transverse(period).abs() > 1e-6 * period.norm() {
            continue;
        }
        candidates.push(WallPoint { t, pair, period });
    }
    if candidates.is_empty() {
        return Err(Error::NoSignChange);
    }
    candidates.sort_by(|a, b| a.t.total_cmp(&b.t));
    for c in &candidates {
        if !find_short_trajectories(&qd_at(c.t)?, orientation, SHORT_TOL).is_empty() {
            return Ok(*c);
        }
    }
    Err(Error::StructureAmbiguous(format!(
        "period vanishes at t = {} but no short trajectory was traced",
        candidates[0].t
    )))
}
