//! Text and image exports of a wall map.

use std::fmt::Write;

use serde_json::json;

use super::{Label, WallMap};
use crate::tracer::Orientation;

/// One row per grid point: `i,j,t,s,label_h,label_v,flags`.
///
/// Flags name the orientations with a wall edge at the point, separated by
/// `;`.
pub fn to_csv(map: &WallMap) -> String {
    let mut out = String::from("i,j,t,s,label_h,label_v,flags\n");
    let name = |l: Option<&Label>| l.map_or("-", Label::short).to_string();
    for p in &map.points {
        let mut flags = Vec::new();
        for o in Orientation::BOTH {
            let hit = map
                .walls
                .iter()
                .any(|w| w.orientation == o && (w.from == [p.i, p.j] || w.to == [p.i, p.j]));
            if hit {
                flags.push(format!("wall_{}", &o.name()[..1]));
            }
        }
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.i,
            p.j,
            p.t,
            p.s,
            name(p.label(Orientation::Horizontal)),
            name(p.label(Orientation::Vertical)),
            flags.join(";")
        );
    }
    out
}

/// Refined and unrefined walls as pretty-printed JSON.
pub fn walls_json(map: &WallMap) -> String {
    let v = json!({ "refined": map.refined, "unrefined": map.unrefined });
    serde_json::to_string_pretty(&v).expect("wall data serializes")
}

const CELL: usize = 8;

fn hue_color(index: usize) -> [u8; 3] {
    // golden-ratio hue steps keep neighbouring indices apart
    let h = (index as f64 * 0.618_033_988_749_895).fract() * 6.0;
    let x = 1.0 - (h % 2.0 - 1.0).abs();
    let (r, g, b) = match h as usize {
        0 => (1.0, x, 0.0),
        1 => (x, 1.0, 0.0),
        2 => (0.0, 1.0, x),
        3 => (0.0, x, 1.0),
        4 => (x, 0.0, 1.0),
        _ => (1.0, 0.0, x),
    };
    let scale = |c: f64| (55.0 + 180.0 * c) as u8;
    [scale(r), scale(g), scale(b)]
}

/// Binary PPM with `8 x 8` pixels per grid point, colored by the pair of
/// labels. Horizontal walls are drawn black and vertical walls white, on
/// the border between the two points.
pub fn to_ppm(map: &WallMap) -> Vec<u8> {
    let (nx, ny) = (map.spec.nx, map.spec.ny);
    let key = |i: usize| {
        let p = &map.points[i];
        (p.horizontal.clone(), p.vertical.clone())
    };
    let mut keys: Vec<_> = (0..map.points.len()).map(key).collect();
    keys.sort();
    keys.dedup();
    let (w, h) = (nx * CELL, ny * CELL);
    let mut px = vec![[0u8; 3]; w * h];
    for (idx, p) in map.points.iter().enumerate() {
        let labels = [&p.horizontal, &p.vertical];
        let color = if labels.iter().any(|l| matches!(l, Some(Label::Failed(_)))) {
            [200, 0, 0]
        } else if labels.iter().any(|l| matches!(l, Some(Label::Singular))) {
            [128, 128, 128]
        } else {
            hue_color(keys.binary_search(&key(idx)).unwrap())
        };
        // row 0 of the image is the top of the slice
        let row0 = (ny - 1 - p.j) * CELL;
        for y in row0..row0 + CELL {
            for x in p.i * CELL..(p.i + 1) * CELL {
                px[y * w + x] = color;
            }
        }
    }
    for wall in &map.walls {
        let color = match wall.orientation {
            Orientation::Horizontal => [0, 0, 0],
            Orientation::Vertical => [255, 255, 255],
        };
        let [i, j] = wall.from;
        if wall.to[0] > i {
            let x = (i + 1) * CELL;
            let row0 = (ny - 1 - j) * CELL;
            for y in row0..row0 + CELL {
                px[y * w + x - 1] = color;
                px[y * w + x] = color;
            }
        } else {
            // the upper neighbour sits one block higher in the image
            let y = (ny - 1 - j) * CELL;
            for x in i * CELL..(i + 1) * CELL {
                px[y * w + x] = color;
                px[(y - 1) * w + x] = color;
            }
        }
    }
    let mut out = format!("P6\n{w} {h}\n255\n").into_bytes();
    out.extend(px.iter().flatten());
    out
}
