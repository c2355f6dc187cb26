//! Acceptance suite: one PASS/FAIL line per criterion. Criterion 9 (the full
//! BW16 face hierarchy and exact moments, multi-hour) runs only with
//! `VORONOI_FORGE_EXTENDED=1`; its checkpoints go to
//! `VORONOI_FORGE_CHECKPOINT` when set.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;

use voronoi_forge_core::bw16::{second_moment, FACET_CHILDREN, FACET_VERTICES, FACE_CLASS_COUNTS, QUANTIZER_CONSTANT};
use voronoi_forge_core::exact::{RMatrix, RVector, Rational, ScaledVec};
use voronoi_forge_core::faces::{build_hierarchy, bw16_faces, face_geometry, HierarchyOptions, Region, Shape, SymmetryContext};
use voronoi_forge_core::group::{
    automorphism_generators, bw16_generators, bw16_permutations, bw16_s1, bw16_s2, bw16_s3, group_order, GroupElement,
    MatrixGroup, StabilizerOptions, DEFAULT_ORBIT_CAP,
};
use voronoi_forge_core::lattice::make_lattice;
use voronoi_forge_core::moments::{
    face_moments, face_moments_with_apex, hierarchy_moments, isotropy_check, quantizer_constant, region_moments, ClassMoments,
};
use voronoi_forge_core::montecarlo::{compare_estimators, direct_variance, estimate, jackknife_variance, sample_norms2};
use voronoi_forge_core::relvec::{relevant_vectors, RelevantVectorSet};
use voronoi_forge_core::verify::verify_representatives;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

struct Runner {
    failed: usize,
}

impl Runner {
    fn run(&mut self, id: &str, title: &str, f: impl FnOnce() -> Outcome) {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:<3} {title}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                self.failed += 1;
                println!("FAIL {id:<3} {title}: {detail} ({secs:.1}s)");
            }
        }
    }

    fn skip(&self, id: &str, title: &str, why: &str) {
        println!("SKIP {id:<3} {title}: {why}");
    }
}

fn bw16_relvecs() -> &'static RelevantVectorSet {
    static SET: OnceLock<RelevantVectorSet> = OnceLock::new();
    SET.get_or_init(|| relevant_vectors(&make_lattice("BW16").unwrap()))
}

fn criterion_1() -> Outcome {
    let set = bw16_relvecs();
    let counts: Vec<(String, usize)> = set.summary().iter().map(|c| (c.norm2.to_string(), c.count)).collect();
    ensure(set.len() == 65_760, format!("total {}", set.len()))?;
    ensure(counts == [("2".to_string(), 4320), ("3".to_string(), 61_440)], format!("{counts:?}"))?;
    Ok("65760 = 4320 (norm 2) + 61440 (norm 3)".into())
}

fn criterion_2() -> Outcome {
    let n1 = ScaledVec::from_ints(&[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    let e1 = ScaledVec::from_ints(&[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
    let full = group_order(&bw16_generators(), &n1).map_err(|e| e.to_string())?;
    ensure(full == BigUint::from(89_181_388_800u64), format!("|<M1, M2>| = {full}"))?;
    let [p1, p2, p3, p4] = bw16_permutations();
    for set in [vec![p1.clone(), p2, p3.clone()], vec![p1, p4.clone()], vec![p3, p4]] {
        let o = group_order(&set, &e1).map_err(|e| e.to_string())?;
        ensure(o == BigUint::from(322_560u32), format!("permutation subgroup order {o}"))?;
    }
    let mut signs = bw16_s1();
    signs.extend(bw16_s2());
    signs.push(bw16_s3());
    let s = group_order(&signs, &e1).map_err(|e| e.to_string())?;
    ensure(s == BigUint::from(2048u32), format!("sign changes {s}"))?;
    Ok("|G| = 89181388800, |P| = 322560 for three generating sets, |S| = 2048".into())
}

fn criterion_3() -> Outcome {
    let report = verify_representatives(StabilizerOptions::default(), &|_| {}).map_err(|e| e.to_string())?;
    for r in &report.rows {
        ensure(r.passed(), format!("{}: {}", r.name, r.diff().join("; ")))?;
    }
    ensure(report.passed(), format!("vertex orbits sum to {}", report.vertex_orbit_sum))?;
    let draws: u64 = report.rows.iter().map(|r| r.draws).sum();
    Ok(format!("8 rows, vertex orbits sum to {}, {draws} random elements drawn", report.vertex_orbit_sum))
}

fn criterion_4() -> Outcome {
    let bw = bw16_faces(StabilizerOptions::default(), &|_| {}).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for (i, f) in bw.facets.iter().enumerate() {
        let kids = bw.region.children(f).len();
        ensure(f.vertices().len() == FACET_VERTICES[i], format!("facet {i}: {} vertices", f.vertices().len()))?;
        ensure(kids == FACET_CHILDREN[i], format!("facet {i}: {kids} children"))?;
        parts.push(format!("{} vertices / {kids} children", f.vertices().len()));
    }
    Ok(format!("n1 facet {}; n2 facet {}", parts[0], parts[1]))
}

fn small_context(name: &str) -> (Region, SymmetryContext) {
    let l = make_lattice(name).unwrap();
    let region = Region::enumerate(&l).unwrap();
    let (gens, base) = automorphism_generators(&l).unwrap();
    let group = MatrixGroup::new(gens, &base, DEFAULT_ORBIT_CAP).unwrap();
    let ctx = SymmetryContext::from_group(&region, &group, StabilizerOptions::default()).unwrap();
    (region, ctx)
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    let mut d4_exact = None;
    for name in ["Zn(2)", "Zn(3)", "D4"] {
        let l = make_lattice(name).unwrap();
        let (region, ctx) = small_context(name);
        let h = build_hierarchy(&region, &ctx, &HierarchyOptions::default()).map_err(|e| e.to_string())?;
        let m = region_moments(&region, &h).map_err(|e| e.to_string())?;
        ensure(m.m0 == l.determinant().abs(), format!("{name}: volume {} vs det {}", m.m0, l.determinant()))?;
        let g = quantizer_constant(&m.m2.trace(), &m.m0, l.dim(), 20).map_err(|e| e.to_string())?;
        if name == "Zn(3)" {
            ensure(g.coefficient == Some(Rational::new(1, 12)) && g.radicand == Some(1.into()), format!("G(Z3) = {}", g.decimal))?;
        }
        if name == "D4" {
            d4_exact = Some(g.to_f64());
        }
        parts.push(format!("{} V={} U={}", l.name(), m.m0, m.m2.trace()));
    }
    let exact = d4_exact.unwrap();
    let e = estimate(&make_lattice("D4").unwrap(), 10_000_000, 20_240_601).map_err(|e| e.to_string())?;
    let z = (e.g_hat - exact) / e.sd_g();
    ensure(z.abs() < 4.0, format!("D4 Monte Carlo {} vs exact {exact}: z = {z:.2}", e.g_hat))?;
    parts.push(format!("G(Z3) = 1/12, G(D4) = {exact:.10} vs MC z = {z:.2}"));
    Ok(parts.join("; "))
}

fn criterion_6() -> Outcome {
    let e = estimate(&make_lattice("BW16").unwrap(), 1_000_000, 16).map_err(|e| e.to_string())?;
    let diff = (e.g_hat - QUANTIZER_CONSTANT).abs();
    ensure(diff < 4.0 * e.sd_g(), format!("G_hat {} differs by {diff:.3e}, 4 sd = {:.3e}", e.g_hat, 4.0 * e.sd_g()))?;
    Ok(format!("G_hat = {:.9} +- {:.2e}, |diff| = {diff:.2e} = {:.2} sd", e.g_hat, e.sd_g(), diff / e.sd_g()))
}

fn criterion_7() -> Outcome {
    let z3 = make_lattice("Z3").unwrap();
    let c = compare_estimators(&z3, 100_000, 100, 1000, 7).map_err(|e| e.to_string())?;
    let ratio = c.spread_ratio().ok_or("no spread")?;
    ensure(ratio >= 5.0, format!("spread ratio {ratio:.2}"))?;
    let xs = sample_norms2(&z3, 100_000, 99);
    let direct = direct_variance(&xs).map_err(|e| e.to_string())?;
    let jack = jackknife_variance(&xs, xs.len()).map_err(|e| e.to_string())?;
    let rel = ((jack - direct) / direct).abs();
    ensure(rel <= 1e-12, format!("g = N jackknife differs by {rel:.2e}"))?;
    Ok(format!(
        "direct spread {:.3e}, jackknife spread {:.3e}, ratio {ratio:.1}; g = N relative difference {rel:.1e}",
        c.direct_spread.unwrap(),
        c.jackknife_spread.unwrap()
    ))
}

fn simplex(vertices: &[RVector], apex: Option<&RVector>) -> ClassMoments {
    let d = vertices.len() - 1;
    let id = GroupElement::identity(vertices[0].dim());
    let mut faces: Vec<Vec<(u32, ClassMoments)>> = vec![(0..=d).map(|i| (1u32 << i, ClassMoments::point(&vertices[i]))).collect()];
    for k in 1..=d {
        let mut level = Vec::new();
        for mask in (0u32..(1 << (d + 1))).filter(|m| m.count_ones() as usize == k + 1) {
            let pts: Vec<RVector> = (0..=d).filter(|i| mask >> i & 1 == 1).map(|i| vertices[i].clone()).collect();
            let kids: Vec<_> = faces[k - 1].iter().filter(|(m, _)| m & mask == *m).map(|(_, c)| (c, &id)).collect();
            let m = match apex.filter(|_| k == d) {
                Some(a) => face_moments_with_apex(&pts, k, a, kids).unwrap(),
                None => face_moments(&pts, k, kids).unwrap(),
            };
            level.push((mask, m));
        }
        faces.push(level);
    }
    faces.pop().unwrap().pop().unwrap().1
}

fn criterion_8() -> Outcome {
    // Orbit-stabilizer products on D4 relevant vectors.
    let d4 = make_lattice("D4").unwrap();
    let (gens, base) = automorphism_generators(&d4).unwrap();
    let group = MatrixGroup::new(gens, &base, DEFAULT_ORBIT_CAP).unwrap();
    let rv = relevant_vectors(&d4);
    for r in rv.vectors().iter().take(4) {
        let x = ScaledVec::from_rvector(&r.coords).unwrap();
        let orbit = group.orbit(&x, &|_| false, DEFAULT_ORBIT_CAP).unwrap().len();
        let (stab, _) = group.stabilizer(&x, &BigUint::from(orbit), StabilizerOptions::default()).unwrap();
        ensure(BigUint::from(orbit) * stab.order() == group.order(), "orbit * stabilizer != |G|")?;
    }
    // Negation closure of the BW16 relevant vectors.
    let set = bw16_relvecs();
    ensure(set.vectors().iter().all(|r| set.position(&r.coords.neg()).is_some()), "relevant vectors not closed under negation")?;
    // Moments of simplices against closed forms, and apex invariance.
    let ints = RVector::from_ints;
    let tet = [ints(&[0, 0, 0]), ints(&[2, 0, 1]), ints(&[1, 3, 0]), ints(&[-1, 1, 2])];
    let tri = [ints(&[1, 0, 0]), ints(&[0, 2, 0]), ints(&[0, 0, 3])];
    for vs in [&tri[..], &tet[..]] {
        let m = simplex(vs, None);
        let d = vs.len() - 1;
        let n = vs[0].dim();
        let mut sum = RVector::zeros(n);
        let mut outer = RMatrix::zeros(n, n);
        for v in vs {
            sum = sum.add(v);
            outer = outer.add(&RMatrix::outer(v, v));
        }
        let expected = outer.add(&RMatrix::outer(&sum, &sum)).scale(&(&m.moments.m0 * &Rational::new(1, ((d + 1) * (d + 2)) as i64)));
        ensure(m.moments.m2 == expected, format!("{d}-simplex second moment"))?;
        let e = RMatrix::from_rows(vs[1..].iter().map(|v| v.sub(&vs[0])).collect()).unwrap();
        let fact: i64 = (1..=d as i64).product();
        ensure(m.volume_squared() == &e.mul(&e.transpose()).determinant().unwrap() / &Rational::from(fact * fact), "simplex volume")?;
    }
    let off = RVector::new(vec![Rational::new(1, 3), Rational::new(2, 3), Rational::one()]);
    ensure(simplex(&tri, Some(&off)).moments == simplex(&tri, None).moments, "triangle apex invariance")?;
    ensure(simplex(&tet, Some(&ints(&[5, -3, 2]))).moments == simplex(&tet, None).moments, "tetrahedron apex invariance")?;
    // Volume and isotropy of full regions.
    for name in ["Zn(2)", "Zn(3)", "D4"] {
        let l = make_lattice(name).unwrap();
        let (region, ctx) = small_context(name);
        let h = build_hierarchy(&region, &ctx, &HierarchyOptions::default()).unwrap();
        let m = region_moments(&region, &h).unwrap();
        ensure(m.m0 == l.determinant().abs(), format!("{name} volume"))?;
        ensure(isotropy_check(&m.m2), format!("{name} isotropy"))?;
    }
    Ok("orbit-stabilizer, negation closure, simplex oracles, apex invariance, volume = |det B|, isotropy".into())
}

fn criterion_9() -> Outcome {
    let t = Instant::now();
    let log = |s: &str| eprintln!("[{:>8.1}s] {s}", t.elapsed().as_secs_f64());
    let bw = bw16_faces(StabilizerOptions::default(), &log).map_err(|e| e.to_string())?;
    let progress = |r: &voronoi_forge_core::faces::LevelReport| {
        log(&format!("dimension {}: {} classes, {} constructed, {:.1}s", r.dim, r.classes, r.constructed, r.seconds))
    };
    let checkpoint = std::env::var_os("VORONOI_FORGE_CHECKPOINT").map(Into::into);
    let opts = HierarchyOptions { min_dim: 0, checkpoint, progress: Some(&progress) };
    let h = build_hierarchy(&bw.region, &bw.context, &opts).map_err(|e| e.to_string())?;
    ensure(h.class_counts() == FACE_CLASS_COUNTS, format!("class counts {:?}", h.class_counts()))?;

    let mut squares = 0;
    let mut cos_range: Option<(Rational, Rational)> = None;
    for class in &h.levels[2] {
        let g = face_geometry(&bw.region, &class.face).map_err(|e| e.to_string())?;
        if g.shape == Shape::Square {
            squares += 1;
            ensure(g.area2 == Some(Rational::new(1, 81)), "square area")?;
        }
        for a in &g.angles {
            let c = a.signed_cos2();
            cos_range = Some(match cos_range {
                None => (c.clone(), c),
                Some((lo, hi)) => (if c < lo { c.clone() } else { lo }, if c > hi { c } else { hi }),
            });
        }
    }
    let (lo, hi) = cos_range.ok_or("no 2-faces")?;
    ensure(squares == 3, format!("{squares} square classes"))?;
    ensure(lo == Rational::new(10, 1600), format!("largest angle cos^2 {lo}"))?;
    ensure(hi == Rational::new(29 * 29 * 238, 476 * 476), format!("smallest angle cos^2 {hi}"))?;

    let levels = hierarchy_moments(&bw.region, &h).map_err(|e| e.to_string())?;
    let m = &levels[16][0].moments;
    ensure(m.m0 == Rational::new(1, 16), format!("V = {}", m.m0))?;
    ensure(m.m2.trace() == second_moment(), format!("U = {}", m.m2.trace()))?;
    ensure(isotropy_check(&m.m2), "M2 is not isotropic")?;
    Ok(format!("class counts match, V = 1/16, U = {}", m.m2.trace()))
}

fn main() {
    let mut r = Runner { failed: 0 };
    r.run("1", "BW16 relevant vectors", criterion_1);
    r.run("2", "group orders", criterion_2);
    r.run("3", "representative verification", criterion_3);
    r.run("4", "BW16 facet statistics", criterion_4);
    r.run("5", "small-lattice exact pipeline", criterion_5);
    r.run("6", "BW16 Monte-Carlo quantizer constant", criterion_6);
    r.run("7", "variance estimator comparison", criterion_7);
    r.run("8", "property suites", criterion_8);
    if std::env::var("VORONOI_FORGE_EXTENDED").as_deref() == Ok("1") {
        r.run("9", "BW16 face hierarchy and exact moments", criterion_9);
    } else {
        r.skip("9", "BW16 face hierarchy and exact moments", "set VORONOI_FORGE_EXTENDED=1 (multi-hour, not gating)");
    }
    if r.failed > 0 {
        println!("{} criteria failed", r.failed);
        std::process::exit(1);
    }
}
