//! Self-contained SVG renderers.

use std::f64::consts::TAU;
use std::fmt::Write;

use strata::network::{ExtendedGraph, FaceKind};
use strata::tracer::{principal_angle, Orientation, TrajectoryStructure};
use strata::Complex64;

const SIZE: f64 = 600.0;
const HALF: f64 = SIZE / 2.0;

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r##"<rect width="{SIZE}" height="{SIZE}" fill="#ffffff"/>"##);
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn color(o: Orientation) -> &'static str {
    match o {
        Orientation::Horizontal => "#1f5fa8",
        Orientation::Vertical => "#d9731a",
    }
}

fn points_attr(pts: impl Iterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (x, y) in pts {
        let _ = write!(s, "{x:.2},{y:.2} ");
    }
    s.pop();
    s
}

/// Trajectories, critical points and the far ends of the half-planes.
pub fn structure(s: &TrajectoryStructure, title: &str) -> String {
    let qd = &s.qd;
    let cps = qd.critical_points();
    let reach = cps.iter().map(|c| c.z.norm()).fold(qd.scale(), f64::max);
    let r = 2.0 * reach;
    let px = |z: Complex64| (HALF + z.re / r * (HALF - 20.0), HALF - z.im / r * (HALF - 20.0));

    let mut out = String::new();
    header(&mut out, title);
    out.push_str(r#"<defs><clipPath id="view"><rect width="600" height="600"/></clipPath></defs>"#);
    out.push_str("\n<g clip-path=\"url(#view)\">\n");

    let n = s.n_directions();
    for (idx, hp) in s.half_planes.iter().enumerate() {
        let a0 = principal_angle(qd, hp.between.0, s.orientation);
        let mut a1 = principal_angle(qd, hp.between.1, s.orientation);
        if a1 <= a0 {
            a1 += TAU;
        }
        if n == 1 {
            a1 = a0 + TAU;
        }
        let arc = |rad: f64| (0..=32).map(move |i| Complex64::from_polar(rad, a0 + (a1 - a0) * i as f64 / 32.0));
        let ring: Vec<Complex64> = arc(0.8 * r).chain(arc(1.6 * r).rev()).collect();
        let fill = if idx % 2 == 0 { "#dbe7f3" } else { "#f3e6d6" };
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="0.7"/>"#,
            points_attr(ring.into_iter().map(px))
        );
    }

    let shorts: Vec<usize> = s.shorts.iter().map(|x| x.trajectory).collect();
    let poles: Vec<usize> = s.pole_connections.iter().map(|x| x.trajectory).collect();
    for (idx, t) in s.trajectories.iter().enumerate() {
        let (stroke, width) = if shorts.contains(&idx) {
            ("#c0162d", 2.5)
        } else if poles.contains(&idx) {
            ("#7a2b9c", 2.0)
        } else {
            (color(s.orientation), 1.2)
        };
        let mut pts = Vec::new();
        for &z in &t.points {
            pts.push(px(z));
            if z.norm() > 3.0 * r {
                break;
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#,
            points_attr(pts.into_iter())
        );
    }
    out.push_str("</g>\n");

    for c in &cps {
        let (x, y) = px(c.z);
        if c.is_pole() {
            let _ = writeln!(
                out,
                r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#ffffff" stroke="#c0162d" stroke-width="2"/>"##
            );
        } else {
            let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="#000000"/>"##);
        }
    }
    let _ = writeln!(
        out,
        r##"<text x="10" y="20" font-family="sans-serif" font-size="13" fill="#333333">{} trajectories, {} strips, {} half-planes</text>"##,
        s.orientation.name(),
        s.strips.len(),
        s.half_planes.len()
    );
    out.push_str("</svg>\n");
    out
}

fn face_fill(kind: FaceKind) -> &'static str {
    match kind {
        FaceKind::OuterSide => "#ececec",
        FaceKind::OuterVertex => "#d6e6f4",
        FaceKind::Bicolored => "#f4e1c6",
        FaceKind::Pole => "#f1c8cc",
    }
}

/// Faces of the extended graph, its colored pieces and vertices.
pub fn extended(g: &ExtendedGraph, title: &str) -> String {
    let px = |p: [f64; 2]| (HALF + p[0] * (HALF - 40.0), HALF - p[1] * (HALF - 40.0));
    let mut out = String::new();
    header(&mut out, title);
    for f in &g.faces {
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="{}" stroke="#ffffff" stroke-width="0.5"/>"##,
            points_attr(f.polygon.iter().map(|&p| px(p))),
            face_fill(f.kind)
        );
    }
    for a in &g.auxiliary {
        let ((x0, y0), (x1, y1)) = (px(a[0]), px(a[1]));
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#999999" stroke-width="0.6" stroke-dasharray="3,3"/>"##
        );
    }
    for p in &g.pieces {
        let ((x0, y0), (x1, y1)) = (px(p.ends[0]), px(p.ends[1]));
        let (stroke, width) = match p.color {
            Some(o) => (color(o), 2.0),
            None => ("#555555", 1.0),
        };
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="{stroke}" stroke-width="{width}"/>"#
        );
    }
    for &p in &g.pi {
        let (x, y) = px(p);
        let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="#000000"/>"##);
    }
    let (x, y) = px(g.center);
    let _ = writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="4.5" fill="#c0162d"/>"##);
    out.push_str("</svg>\n");
    out
}
