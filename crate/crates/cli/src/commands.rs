use std::io::Write;
use std::time::Instant;

use serde_json::{json, Value};

use voronoi_forge_core::exact::{RVector, Rational, ScaledVec};
use voronoi_forge_core::faces::{build_hierarchy, bw16_faces, Hierarchy, HierarchyOptions, LevelReport, Region, SymmetryContext};
use voronoi_forge_core::group::{
    automorphism_generators, bw16_generators, bw16_permutations, bw16_s1, bw16_s2, bw16_s3, bw16_structured_generators,
    group_order, GroupElement, MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP,
};
use voronoi_forge_core::lattice::{make_lattice, Lattice};
use voronoi_forge_core::moments::{hierarchy_moments, isotropy_check, quantizer_constant, MomentData};
use voronoi_forge_core::montecarlo::{compare_estimators, estimate};
use voronoi_forge_core::relvec::relevant_vectors;
use voronoi_forge_core::verify::verify_representatives;

use crate::{Cli, CliError, Command, FacesArgs, GroupCommand, McCommand, MomentsCommand};

pub(crate) fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Lattice(a) => lattice(&a.name, a.json, out),
        Command::Relvecs(a) => relvecs(&a.name, a.json, out),
        Command::Group(GroupCommand::Order { name, generators, json }) => order(name, generators.as_deref(), *json, out),
        Command::Faces(a) => faces(a, out),
        Command::Moments(MomentsCommand::Exact { name, extended, checkpoint }) => {
            moments(name, *extended, checkpoint.clone(), cli.digits, out)
        }
        Command::Mc(McCommand::Estimate { name, samples, seed, json }) => mc_estimate(name, *samples, *seed, *json, cli.digits, out),
        Command::Mc(McCommand::Compare { lattice, samples, groups, reps, seed, csv }) => {
            let l = make_lattice(lattice)?;
            let report = compare_estimators(&l, *samples, *groups, *reps, *seed)?;
            if let Some(path) = csv {
                std::fs::write(path, report.to_csv())?;
            }
            let summary = json!({
                "lattice": report.lattice,
                "samples": report.samples,
                "groups": report.groups,
                "reps": report.reps,
                "seed": report.seed,
                "exact_sd": report.exact_sd,
                "direct_spread": report.direct_spread,
                "jackknife_spread": report.jackknife_spread,
                "spread_ratio": report.spread_ratio(),
            });
            print_json(out, &summary)
        }
        Command::Verify(a) => verify(a.seed, a.json, out, err),
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn rational(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn lattice(name: &str, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let l = make_lattice(name)?;
    let basis: Vec<Vec<String>> =
        (0..l.dim()).map(|i| l.basis().row_slice(i).iter().map(ToString::to_string).collect()).collect();
    if as_json {
        let value = json!({
            "name": l.name(),
            "dim": l.dim(),
            "basis": basis,
            "volume": rational(l.volume()),
            "determinant": rational(&l.determinant()),
            "covering_radius2": l.covering_radius2().map(rational),
        });
        return print_json(out, &value);
    }
    writeln!(out, "{} (dimension {})", l.name(), l.dim())?;
    for row in basis {
        writeln!(out, "  [{}]", row.join(", "))?;
    }
    writeln!(out, "volume {}", l.volume())?;
    if let Some(r) = l.covering_radius2() {
        writeln!(out, "squared covering radius {r}")?;
    }
    Ok(())
}

fn relvecs(name: &str, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let l = make_lattice(name)?;
    let set = relevant_vectors(&l);
    if as_json {
        let map: serde_json::Map<String, Value> = set.summary().iter().map(|c| (c.norm2.to_string(), json!(c.count))).collect();
        return print_json(out, &Value::Object(map));
    }
    for c in set.summary() {
        writeln!(out, "norm2 {}: {}", c.norm2, c.count)?;
    }
    writeln!(out, "total: {}", set.len())?;
    Ok(())
}

fn unit(n: usize) -> ScaledVec {
    let mut v = vec![0; n];
    v[0] = 1;
    ScaledVec::from_ints(&v)
}

fn named_generators(l: &Lattice, set: Option<&str>) -> Result<(Vec<GroupElement>, ScaledVec), CliError> {
    let standard = || {
        automorphism_generators(l).ok_or_else(|| CliError::Domain(format!("no automorphism generators known for {}", l.name())))
    };
    let Some(set) = set else { return standard() };
    if l.name() != "BW16" {
        return match set {
            "standard" => standard(),
            _ => Err(CliError::Usage(format!("generator set {set:?} is only defined for BW16"))),
        };
    }
    let [p1, p2, p3, p4] = bw16_permutations();
    let gens = match set {
        "m1m2" | "standard" => bw16_generators(),
        "structured" => bw16_structured_generators(),
        "p123" => vec![p1, p2, p3],
        "p14" => vec![p1, p4],
        "p34" => vec![p3, p4],
        "signs" => {
            let mut s = bw16_s1();
            s.extend(bw16_s2());
            s.push(bw16_s3());
            s
        }
        other => return Err(CliError::Usage(format!("unknown generator set {other:?}"))),
    };
    Ok((gens, unit(16)))
}

fn order(name: &str, set: Option<&str>, as_json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let l = make_lattice(name)?;
    let (gens, base) = named_generators(&l, set)?;
    let order = group_order(&gens, &base)?;
    if as_json {
        return print_json(out, &json!({ "lattice": l.name(), "generators": set.unwrap_or("standard"), "order": order.to_string() }));
    }
    writeln!(out, "{order}")?;
    Ok(())
}

fn small_context(l: &Lattice) -> Result<(Region, SymmetryContext), CliError> {
    let region = Region::enumerate(l)?;
    let (gens, base) = named_generators(l, None)?;
    let group = MatrixGroup::new(gens, &base, DEFAULT_ORBIT_CAP)?;
    let ctx = SymmetryContext::from_group(&region, &group, StabilizerOptions::default())?;
    Ok((region, ctx))
}

fn progress(r: &LevelReport) {
    let how = if r.resumed { "resumed" } else { "built" };
    eprintln!("dimension {:>2}: {} classes, {} faces constructed, {how} in {:.1}s", r.dim, r.classes, r.constructed, r.seconds);
}

fn hierarchy_json(h: &Hierarchy) -> Value {
    json!({
        "class_counts": h.class_counts(),
        "constructed_faces": h.constructed_faces(),
        "min_dim": h.min_dim,
    })
}

fn faces(a: &FacesArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let l = make_lattice(&a.name)?;
    let opts = HierarchyOptions { min_dim: a.min_dim, checkpoint: a.checkpoint.clone(), progress: Some(&progress) };
    if l.name() != "BW16" {
        let (region, ctx) = small_context(&l)?;
        let h = build_hierarchy(&region, &ctx, &opts)?;
        let mut value = hierarchy_json(&h);
        value["lattice"] = json!(l.name());
        value["vertices"] = json!(region.store().len());
        value["relevant_vectors"] = json!(region.relvecs().len());
        return emit(out, a.json, &value);
    }
    let t = Instant::now();
    let log = |s: &str| eprintln!("[{:>8.1}s] {s}", t.elapsed().as_secs_f64());
    let bw = bw16_faces(StabilizerOptions::default(), &log)?;
    let names = ["n1", "n2"];
    let facets: Vec<Value> = bw
        .facets
        .iter()
        .zip(names)
        .map(|(f, name)| json!({ "normal": name, "vertices": f.vertices().len(), "children": bw.region.children(f).len() }))
        .collect();
    let mut value = json!({ "lattice": "BW16", "relevant_vectors": bw.region.relvecs().len(), "facets": facets });
    if a.extended {
        let h = build_hierarchy(&bw.region, &bw.context, &opts)?;
        value["hierarchy"] = hierarchy_json(&h);
    }
    emit(out, a.json, &value)
}

/// JSON, or a flat `key: value` rendering of a JSON object.
fn emit(out: &mut dyn Write, as_json: bool, value: &Value) -> Result<(), CliError> {
    if as_json {
        return print_json(out, value);
    }
    if let Value::Object(map) = value {
        for (k, v) in map {
            writeln!(out, "{k}: {v}")?;
        }
    }
    Ok(())
}

fn moments(
    name: &str,
    extended: bool,
    checkpoint: Option<std::path::PathBuf>,
    digits: usize,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let l = make_lattice(name)?;
    let opts = HierarchyOptions { min_dim: 0, checkpoint, progress: Some(&progress) };
    let m: MomentData = if l.name() == "BW16" {
        if !extended {
            return Err(CliError::Usage("exact BW16 moments need the full face hierarchy; pass --extended".into()));
        }
        let t = Instant::now();
        let log = |s: &str| eprintln!("[{:>8.1}s] {s}", t.elapsed().as_secs_f64());
        let bw = bw16_faces(StabilizerOptions::default(), &log)?;
        let h = build_hierarchy(&bw.region, &bw.context, &opts)?;
        hierarchy_moments(&bw.region, &h)?[16][0].moments.clone()
    } else {
        let (region, ctx) = small_context(&l)?;
        let h = build_hierarchy(&region, &ctx, &opts)?;
        hierarchy_moments(&region, &h)?[l.dim()][0].moments.clone()
    };
    let u = m.m2.trace();
    let g = quantizer_constant(&u, &m.m0, l.dim(), digits)?;
    let value = json!({
        "lattice": l.name(),
        "dim": l.dim(),
        "volume": rational(&m.m0),
        "volume_matches_determinant": m.m0 == l.determinant().abs(),
        "u": rational(&u),
        "g": {
            "coefficient": g.coefficient.as_ref().map(rational),
            "radicand": g.radicand.as_ref().map(|r| r.to_string()),
            "exact": g.exact,
            "decimal": g.decimal,
        },
        "centroid_at_origin": m.m1 == RVector::zeros(l.dim()),
        "isotropic": isotropy_check(&m.m2),
    });
    print_json(out, &value)
}

fn mc_estimate(name: &str, samples: u64, seed: u64, as_json: bool, digits: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let l = make_lattice(name)?;
    let e = estimate(&l, samples, seed)?;
    if as_json {
        let mut value = serde_json::to_value(&e)?;
        value["lattice"] = json!(l.name());
        value["sd_g"] = json!(e.sd_g());
        return print_json(out, &value);
    }
    let p = digits;
    writeln!(out, "{} N={} seed={}", l.name(), e.samples, e.seed)?;
    writeln!(out, "U_hat = {:.p$} +- {:.p$}", e.u_hat, e.var_u_hat.sqrt())?;
    writeln!(out, "G_hat = {:.p$} +- {:.p$}", e.g_hat, e.sd_g())?;
    Ok(())
}

fn verify(seed: u64, as_json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let options = StabilizerOptions { seed, ..StabilizerOptions::default() };
    let t = Instant::now();
    let log = |s: &str| eprintln!("[{:>6.1}s] {s}", t.elapsed().as_secs_f64());
    let report = verify_representatives(options, &log)?;
    if as_json {
        let mut value = serde_json::to_value(&report)?;
        value["passed"] = json!(report.passed());
        print_json(out, &value)?;
    } else {
        writeln!(out, "|G| = {}", report.group_order)?;
        writeln!(out, "{:<4} {:>6} {:>10} {:>10} {:>10}  status", "rep", "norm2", "orbit", "stabilizer", "method")?;
        for r in &report.rows {
            let method = format!("{:?}", r.orbit_method).to_lowercase();
            let status = if r.passed() { "ok".to_string() } else { r.diff().join("; ") };
            writeln!(out, "{:<4} {:>6} {:>10} {:>10} {:>10}  {status}", r.name, r.norm2.to_string(), r.orbit, r.stabilizer, method)?;
        }
        writeln!(out, "vertex orbits sum to {} (expected {})", report.vertex_orbit_sum, report.expected_vertex_count)?;
    }
    if !report.passed() {
        for r in report.rows.iter().filter(|r| !r.passed()) {
            writeln!(err, "{}: {}", r.name, r.diff().join("; "))?;
        }
        return Err(CliError::Failed);
    }
    Ok(())
}
