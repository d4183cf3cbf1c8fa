use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use strata::combinat::{
    catalan, diagram_to_weight, enumerate_triangulations, fan_face, flip_graph, is_degenerate, weight_to_diagram,
    BalancedWeight, Chord, FanFace, WeightedChordDiagram, DEFAULT_P,
};
use strata::network::{build_graph, extend_graph, has_short, merge_graphs, to_chord_diagram, AdmissibleGraph};
use strata::qdcore::{Family, QuadDiff};
use strata::scanner::{scan_slice, to_csv, to_ppm, walls_json, Label, SliceSpec};
use strata::tracer::{build_structure, Orientation, TrajectoryStructure};
use strata::Complex64;

use crate::config::RunConfig;
use crate::{svg, CliError, DiffArgs, FamilyArg, OrientationArg};

fn parse_coeffs(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(';')
        .map(|pair| {
            let parts: Vec<&str> = pair.split(',').map(str::trim).collect();
            let [re, im] = parts.as_slice() else {
                return Err(CliError::Input(format!("coefficient {pair:?} is not \"re,im\"")));
            };
            let num = |s: &str| s.parse::<f64>().map_err(|_| CliError::Input(format!("not a number: {s:?}")));
            Ok(Complex64::new(num(re)?, num(im)?))
        })
        .collect()
}

fn differential(d: &DiffArgs) -> Result<QuadDiff, CliError> {
    let coeffs = parse_coeffs(&d.coeffs)?;
    let qd = match d.family {
        FamilyArg::Rational => QuadDiff::new(d.k, &coeffs)?,
        FamilyArg::Polynomial => QuadDiff::polynomial(d.k, &coeffs)?,
    };
    Ok(qd)
}

fn write(cfg: &RunConfig, name: &str, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::io(&cfg.out, e))?;
    let path = cfg.out.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn structure(qd: &QuadDiff, o: Orientation, cfg: &RunConfig) -> Result<TrajectoryStructure, CliError> {
    build_structure(qd, o, &cfg.trace_config()).map_err(|e| match CliError::from(e) {
        CliError::Input(m) => CliError::Input(m),
        CliError::Numeric(m) => CliError::Numeric(format!("tracing failed: {m}")),
    })
}

pub fn trace(cfg: &RunConfig, d: &DiffArgs, o: OrientationArg) -> Result<(), CliError> {
    let qd = differential(d)?;
    let chosen: &[(Orientation, &str)] = match o {
        OrientationArg::H => &[(Orientation::Horizontal, "")],
        OrientationArg::V => &[(Orientation::Vertical, "")],
        OrientationArg::Both => &[(Orientation::Horizontal, "_h"), (Orientation::Vertical, "_v")],
    };
    for &(o, suffix) in chosen {
        let s = structure(&qd, o, cfg)?;
        write(cfg, &format!("structure{suffix}.json"), json(&s)?)?;
        let title = format!("{} trajectories, k = {}, coefficients {}", o.name(), d.k, d.coeffs);
        write(cfg, &format!("structure{suffix}.svg"), svg::structure(&s, &title))?;
        println!(
            "{}: {} directions, {} half-planes, {} strips, {} shorts, {} pole connections",
            o.name(),
            s.n_directions(),
            s.half_planes.len(),
            s.strips.len(),
            s.shorts.len(),
            s.pole_connections.len()
        );
    }
    Ok(())
}

fn graphs(cfg: &RunConfig, d: &DiffArgs) -> Result<(AdmissibleGraph, AdmissibleGraph), CliError> {
    let qd = differential(d)?;
    let gh = build_graph(&structure(&qd, Orientation::Horizontal, cfg)?)?;
    let gv = build_graph(&structure(&qd, Orientation::Vertical, cfg)?)?;
    Ok((gh, gv))
}

#[derive(Serialize)]
struct HasShort {
    horizontal: bool,
    vertical: bool,
}

fn report_short(cfg: &RunConfig, gh: &AdmissibleGraph, gv: &AdmissibleGraph) -> Result<(), CliError> {
    let h = HasShort { horizontal: has_short(gh)?, vertical: has_short(gv)? };
    write(cfg, "has_short.json", json(&h)?)?;
    println!("has_short horizontal: {}", h.horizontal);
    println!("has_short vertical: {}", h.vertical);
    Ok(())
}

pub fn graph(cfg: &RunConfig, d: &DiffArgs) -> Result<(), CliError> {
    let (gh, gv) = graphs(cfg, d)?;
    write(cfg, "gh.json", json(&gh)?)?;
    write(cfg, "gv.json", json(&gv)?)?;
    let ext = extend_graph(&merge_graphs(&gh, &gv)?)?;
    write(cfg, "g_ext.json", json(&ext)?)?;
    write(cfg, "g_ext.svg", svg::extended(&ext, &format!("extended graph, coefficients {}", d.coeffs)))?;
    report_short(cfg, &gh, &gv)
}

pub fn diagram(cfg: &RunConfig, d: &DiffArgs) -> Result<(), CliError> {
    let (gh, gv) = graphs(cfg, d)?;
    for (g, name) in [(&gh, "gamma_h"), (&gv, "gamma_v")] {
        let gamma = to_chord_diagram(g)?;
        write(cfg, &format!("{name}.json"), json(&gamma)?)?;
        println!(
            "{name}: {}-gon, chords {}",
            gamma.diagram.n_plus_1,
            gamma.diagram.support_signature()
        );
    }
    report_short(cfg, &gh, &gv)
}

fn describe(face: &FanFace, degenerate: bool) -> String {
    let kind = if degenerate { "degenerate" } else { "generic" };
    if face.is_apex() {
        return format!("{kind}, apex face, codim {}", face.codim);
    }
    let diagonals: Vec<String> = face.diagonal_set.iter().map(|(a, c)| format!("{a}-{c}")).collect();
    format!("{kind}, diagonals {}, codim {}", diagonals.join(" "), face.codim)
}

pub fn stasheff(
    cfg: &RunConfig,
    n: usize,
    count: bool,
    list: bool,
    flips: bool,
    weight: Option<&str>,
    random: Option<usize>,
) -> Result<(), CliError> {
    if !(3..=12).contains(&n) {
        return Err(CliError::Input(format!("n = {n}, need 3 <= n <= 12")));
    }
    let any = list || flips || weight.is_some() || random.is_some();
    if count || !any {
        println!("{}", catalan(n - 1)?);
    }
    if list {
        for t in enumerate_triangulations(n)? {
            let ds: Vec<String> = t.diagonals.iter().map(|(a, c)| format!("{a}-{c}")).collect();
            println!("{}", ds.join(" "));
        }
    }
    if flips {
        let (all, adj) = flip_graph(n)?;
        let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        println!("flip graph: {} vertices, {edges} edges", all.len());
    }
    if let Some(text) = weight {
        let values = text
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Input(format!("not a number: {s:?}"))))
            .collect::<Result<Vec<f64>, _>>()?;
        if values.len() != n + 1 {
            return Err(CliError::Input(format!("expected {} weight values, got {}", n + 1, values.len())));
        }
        let f = BalancedWeight::new(values)?;
        println!("{}", describe(&fan_face(&f), is_degenerate(&f).0));
    }
    if let Some(m) = random {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..m {
            let f = BalancedWeight::random(n + 1, &mut rng);
            let vals: Vec<String> = f.values().iter().map(|v| format!("{v:.6}")).collect();
            println!("{}: {}", vals.join(","), describe(&fan_face(&f), is_degenerate(&f).0));
        }
    }
    Ok(())
}

pub fn scan(cfg: &RunConfig, spec: Option<&Path>, print_spec: bool) -> Result<(), CliError> {
    let spec = match spec {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            serde_json::from_str::<SliceSpec>(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?
        }
        None => SliceSpec::k2_demo(),
    };
    if print_spec {
        print!("{}", json(&spec)?);
        return Ok(());
    }
    spec.validate()?;
    let map = scan_slice(&spec)?;
    write(cfg, "wallmap.csv", to_csv(&map))?;
    write(cfg, "wallmap.ppm", to_ppm(&map))?;
    write(cfg, "walls.json", walls_json(&map))?;
    for o in Orientation::BOTH {
        if !spec.orientation.includes(o) {
            continue;
        }
        let mut cells: Vec<&str> = map
            .points
            .iter()
            .filter_map(|p| match p.label(o) {
                Some(Label::Cell(s)) => Some(s.as_str()),
                _ => None,
            })
            .collect();
        cells.sort_unstable();
        cells.dedup();
        let failed = map.points.iter().filter(|p| matches!(p.label(o), Some(Label::Failed(_)))).count();
        println!("{}: {} cells, {failed} failed points", o.name(), cells.len());
    }
    println!("walls: {} refined, {} unrefined", map.refined.len(), map.unrefined.len());
    Ok(())
}

pub fn selftest(cfg: &RunConfig) -> Result<(), CliError> {
    let mut report = String::new();
    let mut ok = true;
    let mut check = |name: &str, result: Result<bool, CliError>| {
        let pass = matches!(result, Ok(true));
        ok &= pass;
        let detail = match result {
            Err(e) => format!(" ({e})"),
            _ => String::new(),
        };
        let _ = writeln!(report, "{name}: {}{detail}", if pass { "PASS" } else { "FAIL" });
    };

    check(
        "triangulation counts",
        (3..=8).try_fold(true, |acc, n| Ok(acc && enumerate_triangulations(n)?.len() as u64 == catalan(n - 1)?)),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    check(
        "degeneracy and diagrams agree",
        (0..200).try_fold(true, |acc, i| {
            let f = BalancedWeight::random(4 + i % 5, &mut rng);
            let incomplete = !weight_to_diagram(&f, DEFAULT_P)?.is_complete();
            Ok(acc && is_degenerate(&f).0 == incomplete && (fan_face(&f).codim > 0) == incomplete)
        }),
    );

    check(
        "chord diagram round trip",
        (|| {
            let d = WeightedChordDiagram::new(
                6,
                vec![Chord { a: 0, c: 2, weight: 0.7 }, Chord { a: 0, c: 3, weight: 1.3 }],
            )?;
            let back = weight_to_diagram(&diagram_to_weight(&d, DEFAULT_P)?, DEFAULT_P)?;
            Ok(back.diagonals() == d.diagonals()
                && back.chords.iter().zip(&d.chords).all(|(x, y)| (x.weight - y.weight).abs() < 1e-8))
        })(),
    );

    check(
        "cubic fixture has short trajectories",
        (|| {
            let qd = QuadDiff::new(3, &parse_coeffs("-1,0;0,0;0,0")?)?;
            for o in Orientation::BOTH {
                if !has_short(&build_graph(&structure(&qd, o, cfg)?)?)? {
                    return Ok(false);
                }
            }
            Ok(qd.family() == Family::Rational)
        })(),
    );

    print!("{report}");
    if ok {
        Ok(())
    } else {
        Err(CliError::Numeric("self-test failed".into()))
    }
}
