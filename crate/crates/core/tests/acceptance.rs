//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary so the lines are always printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;

use common::*;
use pentagon::bounds::{es_bound, es_kl_bound, threshold_k, BoundWinner};
use pentagon::cli::{CertificateDocument, CertificateKind};
use pentagon::convexity::{convex_hull, q_formula, strictly_convex_subset_in_convex_position};
use pentagon::extractor::{extract, ExtractionParams, Outcome, TraceStep};
use pentagon::generators::{
    eppstein_family_a_b, eppstein_family_c_d, eppstein_family_e, grid, horton, q_extremal, random_bounded_collinear,
    random_bounded_collinear_in_box, random_convex_position, random_general_position,
};
use pentagon::geometry::{all_collinear, cross, is_general_position, max_collinear, perturb_general_position};
use pentagon::holes::{classify_no_four_hole, find_k_hole, min_area_five_hole, visibility_graph};
use pentagon::oracle::{oracle_is_convex, oracle_is_hole, oracle_is_strictly_convex, OracleBudget};
use pentagon::{Point, PointSet};
use tempfile::TempDir;

type Outcome_ = Result<String, String>;

/// Trace tag, fixture, `--ell` argument, label.
type PathCase = (&'static str, &'static [(i64, i64)], &'static str, &'static str);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q_formula_exactness() -> Outcome_ {
    let budget = OracleBudget {
        convex_subsets: 32,
        ..OracleBudget::default()
    };
    let mut sampled = 0;
    for ell in 3..=6usize {
        for k in 3..=9usize {
            let q = q_formula(k as u64, ell as u64) as usize;
            let extremal = q_extremal(k, ell).map_err(|e| format!("q_extremal({k}, {ell}): {e}"))?;
            check(extremal.len() == q - 1, || {
                format!("({k}, {ell}): {} points, want {}", extremal.len(), q - 1)
            })?;
            check(oracle_is_convex(&extremal), || {
                format!("({k}, {ell}): extremal set not in convex position")
            })?;
            let strict = budget.max_convex_subset(&extremal, true).map_err(|e| e.to_string())?;
            check(strict < k, || {
                format!("({k}, {ell}): {strict} points in strictly convex position")
            })?;
            let collinear = budget.max_collinear(&extremal).map_err(|e| e.to_string())?;
            check(collinear < ell, || format!("({k}, {ell}): {collinear} collinear"))?;

            for seed in 0..100u64 {
                let p = random_convex_position(k, ell, seed).map_err(|e| e.to_string())?;
                check(p.len() == q && max_collinear(&p).unwrap().0 < ell, || {
                    format!("({k}, {ell}) seed {seed}: bad sample")
                })?;
                let s = strictly_convex_subset_in_convex_position(&p, k, ell)
                    .map_err(|e| format!("({k}, {ell}) seed {seed}: {e}"))?;
                check(
                    s.len() == k && oracle_is_strictly_convex(&s) && s.iter().all(|x| p.contains(x)),
                    || format!("({k}, {ell}) seed {seed}: subset {s:?} fails"),
                )?;
                sampled += 1;
            }
        }
    }
    Ok(format!(
        "28 extremal sets checked by oracle, {sampled} convex-position samples"
    ))
}

fn harborth() -> Outcome_ {
    let dir = TempDir::new().unwrap();
    for seed in 0..200u64 {
        let p = random_general_position(10, seed).map_err(|e| e.to_string())?;
        check(find_k_hole(&p, 5).unwrap().is_some(), || {
            format!("seed {seed}: find_k_hole found none")
        })?;
        let file = write_points(dir.path(), "p.txt", &p);
        let out = run(&["extract", file.to_str().unwrap(), "--ell", "3"]);
        check(out.status.code() == Some(0), || {
            format!("seed {seed}: extract exit {:?}", out.status.code())
        })?;
        let doc: CertificateDocument = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        check(
            doc.kind == CertificateKind::Hole && doc.parameter == 5 && doc.verified && oracle_is_hole(&p, &doc.points),
            || format!("seed {seed}: bad certificate {doc:?}"),
        )?;
    }
    Ok("200/200 sets, library and CLI".into())
}

fn grid_no_five_hole() -> Outcome_ {
    for m in 3..=5 {
        let g = grid(m).unwrap();
        let found = OracleBudget::default().k_hole(&g, 5).map_err(|e| e.to_string())?;
        check(found.is_none(), || format!("grid({m}) has 5-hole {found:?}"))?;
    }
    Ok("grids 3, 4, 5: no 5-hole".into())
}

fn horton_no_seven_hole() -> Outcome_ {
    let h16 = horton(16).unwrap();
    let found = OracleBudget::default().k_hole(&h16, 7).map_err(|e| e.to_string())?;
    check(found.is_none(), || format!("horton(16) has 7-hole {found:?}"))?;
    let h32 = horton(32).unwrap();
    check(is_general_position(&h32), || {
        "horton(32) not in general position".into()
    })?;
    check(find_k_hole(&h32, 7).unwrap().is_none(), || {
        "horton(32) has a 7-hole".into()
    })?;
    check(find_k_hole(&h32, 6).unwrap().is_some(), || {
        "horton(32) has no 6-hole".into()
    })?;
    let found = OracleBudget::unlimited().k_hole(&h32, 7).map_err(|e| e.to_string())?;
    check(found.is_none(), || format!("horton(32) has 7-hole {found:?}"))?;
    Ok("horton(16) and horton(32) by 7-subset scan and by complete search".into())
}

fn quadrilateral() -> Outcome_ {
    for ell in 3..=5usize {
        let n = 7.max(ell + 2);
        for seed in 0..200u64 {
            let p = random_bounded_collinear(n, ell, seed).map_err(|e| e.to_string())?;
            check(max_collinear(&p).unwrap().0 < ell, || {
                format!("ell {ell} seed {seed}: too collinear")
            })?;
            let oracle = OracleBudget::default().k_hole(&p, 4).map_err(|e| e.to_string())?;
            check(oracle.is_some() && find_k_hole(&p, 4).unwrap().is_some(), || {
                format!("ell {ell} seed {seed}: no 4-hole in {:?}", p.points())
            })?;
        }
    }
    Ok("600/600 sets contain a 4-hole".into())
}

fn eppstein_equivalence() -> Outcome_ {
    let mut sets: Vec<PointSet> = Vec::new();
    for count in 3..=8 {
        sets.push(eppstein_family_a_b(count, false).unwrap());
    }
    for count in 2..=8 {
        sets.push(eppstein_family_a_b(count, true).unwrap());
    }
    for count in 2..=6usize {
        let last = 2 * (count as i64 - 1);
        for crossing in -3..=last + 3 {
            if let Ok(s) = eppstein_family_c_d(count, crossing) {
                sets.push(s);
            }
        }
    }
    sets.push(eppstein_family_e().unwrap());
    let families = sets.len();
    for seed in 0..500u64 {
        let n = 3 + (seed % 8) as usize;
        let side = 3 + (seed % 4) as i64;
        let p = random_bounded_collinear_in_box(n, n + 1, seed, side).map_err(|e| e.to_string())?;
        sets.push(p);
    }
    let mut without = 0;
    for (index, p) in sets.iter().enumerate() {
        let r = classify_no_four_hole(p).map_err(|e| e.to_string())?;
        let oracle = OracleBudget::default().k_hole(p, 4).map_err(|e| e.to_string())?;
        check(r.no_four_hole == oracle.is_none(), || {
            format!("set {index}: hole search disagrees with oracle")
        })?;
        check(r.equivalence_holds(), || format!("set {index} {:?}: {r:?}", p.points()))?;
        if index < families {
            check(r.no_four_hole, || format!("family set {index} has a 4-hole"))?;
        }
        without += usize::from(r.no_four_hole);
    }
    Ok(format!(
        "{families} family sets + 500 random sets, {without} without a 4-hole, 0 discrepancies"
    ))
}

fn visible_clique() -> Outcome_ {
    let mut tested = 0;
    let mut seed = 0u64;
    while tested < 100 {
        seed += 1;
        let n = 8 + (seed % 12) as usize;
        let p = random_bounded_collinear(n, 4, seed).map_err(|e| e.to_string())?;
        let Some(h) = find_k_hole(&p, 5).unwrap() else { continue };
        let m = min_area_five_hole(&p, &h).map_err(|e| e.to_string())?;
        check(m.twice_area() <= h.twice_area(), || format!("seed {seed}: area grew"))?;
        check(visibility_graph(&p).is_clique(m.vertices()), || {
            format!("seed {seed}: corners not visible")
        })?;
        tested += 1;
    }
    Ok(format!("100/100 inputs (seeds 1..={seed})"))
}

struct Decomposition {
    ell: usize,
    sizes: Vec<usize>,
    window_harvest: bool,
}

fn extractor_agreement(decompositions: &mut Vec<Decomposition>) -> Outcome_ {
    let mut holes = 0;
    let mut lines = 0;
    for seed in 0..1000u64 {
        let ell = 3 + (seed % 3) as usize;
        let n = 6 + (seed as usize * 7) % 20;
        let side = n as i64 / 2 + 3 + (seed % 7) as i64;
        let p = random_bounded_collinear_in_box(n, ell + 1, seed, side).map_err(|e| e.to_string())?;
        let r = extract(&p, &ExtractionParams::new(ell)).map_err(|e| e.to_string())?;
        let budget = OracleBudget::default();
        let exists = budget.max_collinear(&p).unwrap() >= ell || budget.k_hole(&p, 5).unwrap().is_some();
        check(exists == r.has_certificate(), || {
            format!("seed {seed}: oracle {exists}, extractor {:?}", r.outcome)
        })?;
        match &r.outcome {
            Outcome::Hole(h) => {
                check(oracle_is_hole(&p, h.vertices()) && h.k() == 5, || {
                    format!("seed {seed}: bad hole")
                })?;
                holes += 1;
            }
            Outcome::Collinear(c) => {
                check(
                    c.ell() == ell && all_collinear(c.points()) && c.points().iter().all(|x| p.contains(x)),
                    || format!("seed {seed}: bad collinear certificate"),
                )?;
                lines += 1;
            }
            Outcome::Absent => {}
            Outcome::Inconclusive => return Err(format!("seed {seed}: inconclusive with fallback on")),
        }
        let window_harvest = r.fired("window_harvest");
        for step in &r.trace {
            if let TraceStep::Layers { sizes } = step {
                decompositions.push(Decomposition {
                    ell,
                    sizes: sizes.clone(),
                    window_harvest,
                });
            }
        }
    }

    let dir = TempDir::new().unwrap();
    let mut fired = Vec::new();
    let cases: [PathCase; 5] = [
        ("nonempty_follower", NONEMPTY_FOLLOWER, "4", "non-empty follower"),
        ("unaligned_follower", UNALIGNED_FOLLOWER, "4", "unaligned follower"),
        ("terminal_hole", TERMINAL_HOLE, "4", "terminal pentagon"),
        ("window_harvest", WINDOW, "3", "window"),
        ("restart", RESTART, "3", "restart"),
    ];
    for (tag, coords, ell, label) in cases {
        let p = pts(coords);
        let file = write_points(dir.path(), &format!("{tag}.txt"), &p);
        let mut args = vec!["extract", file.to_str().unwrap(), "--ell", ell, "--trace"];
        let outer_file;
        if tag == "restart" {
            outer_file = write_points(dir.path(), "outer.txt", &convex_hull(&p).boundary);
            args.extend_from_slice(&["--k", "5", "--outer", outer_file.to_str().unwrap()]);
        }
        let out = run(&args);
        check(out.status.code() == Some(0), || {
            format!("{label}: exit {:?}", out.status.code())
        })?;
        let doc: CertificateDocument = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        let trace = doc.trace.clone().unwrap_or_default();
        let hit = trace.iter().any(|s| match (tag, s) {
            ("nonempty_follower", TraceStep::NonemptyFollower { verified, .. })
            | ("unaligned_follower", TraceStep::UnalignedFollower { verified, .. })
            | ("terminal_hole", TraceStep::TerminalHole { verified, .. }) => *verified,
            ("window_harvest", TraceStep::WindowViolation { harvested, .. }) => harvested.is_some(),
            ("restart", TraceStep::Restart { .. }) => true,
            _ => false,
        });
        check(hit && doc.verified && oracle_is_hole(&p, &doc.points), || {
            format!("{label}: path not taken")
        })?;
        fired.push(label);
    }
    Ok(format!(
        "1000 inputs ({holes} holes, {lines} collinear, rest absent) agree with oracle; traced paths: {}",
        fired.join(", ")
    ))
}

fn bound_arithmetic() -> Outcome_ {
    let big = |v: u64| BigUint::from(v);
    check(es_bound(5).unwrap() == big(11), || "es_bound(5)".into())?;
    check(es_bound(6).unwrap() == big(36), || "es_bound(6)".into())?;
    for (ell, want) in [(2, 4), (3, 31), (4, 400)] {
        check(threshold_k(ell).unwrap() == big(want), || format!("threshold_k({ell})"))?;
    }
    for k in (7..=31).step_by(2) {
        let b = es_kl_bound(k, 3).unwrap();
        check(b.convex_to_strict <= b.general_position, || {
            format!("({k}, 3): general position bound smaller")
        })?;
    }
    let b = es_kl_bound(9, 6).unwrap();
    check(b.winner == BoundWinner::GeneralPosition, || {
        format!("(9, 6): winner {:?}", b.winner)
    })?;
    Ok("values exact; ell = 3 odd k: convex bound not larger (both equal ES(k)); (9, 6): general position bound smaller".into())
}

/// Visits every subset of `points` in convex position, growing subsets in
/// index order; convex position is hereditary so pruning is exact.
fn convex_subsets(points: &[Point], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn grow(points: &[Point], chosen: &mut Vec<usize>, next: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        for i in next..points.len() {
            chosen.push(i);
            let subset: Vec<Point> = chosen.iter().map(|&j| points[j]).collect();
            if oracle_is_convex(&subset) && (!visit(chosen) || !grow(points, chosen, i + 1, visit)) {
                return false;
            }
            chosen.pop();
        }
        true
    }
    grow(points, &mut Vec::new(), 0, visit)
}

fn perturbation() -> Outcome_ {
    let mut sets = 0;
    let mut subsets = 0u64;
    let mut seed = 0u64;
    while sets < 200 {
        seed += 1;
        let n = 6 + (seed % 10) as usize;
        let side = 4 + (seed % 3) as i64;
        let p = random_bounded_collinear_in_box(n, n + 1, seed, side).map_err(|e| e.to_string())?;
        if is_general_position(&p) {
            continue;
        }
        let moved = perturb_general_position(&p).map_err(|e| e.to_string())?;
        check(is_general_position(&moved), || {
            format!("seed {seed}: output not in general position")
        })?;
        let (a, b) = (p.points(), moved.points());
        for i in 0..a.len() {
            for j in 0..a.len() {
                for l in 0..a.len() {
                    let before = cross(a[i], a[j], a[l]).signum();
                    check(before == 0 || before == cross(b[i], b[j], b[l]).signum(), || {
                        format!("seed {seed}: orientation ({i}, {j}, {l}) flipped")
                    })?;
                }
            }
        }
        let mut failure = None;
        convex_subsets(b, &mut |idx| {
            subsets += 1;
            let preimage: Vec<Point> = idx.iter().map(|&i| a[i]).collect();
            if !oracle_is_convex(&preimage) {
                failure = Some(preimage);
                return false;
            }
            true
        });
        if let Some(bad) = failure {
            return Err(format!("seed {seed}: preimage {bad:?} not in convex position"));
        }
        sets += 1;
    }
    Ok(format!(
        "200 sets with collinear triples, {subsets} convex subsets checked"
    ))
}

fn layer_inequality(decompositions: &[Decomposition]) -> Outcome_ {
    let mut checked = 0;
    for d in decompositions.iter().filter(|d| !d.window_harvest) {
        let w = 2 * d.ell - 1;
        for pair in d.sizes.windows(2) {
            check(pair[0] < w * (pair[1] + 1), || {
                format!("ell {}: layer sizes {:?}", d.ell, d.sizes)
            })?;
        }
        checked += 1;
    }
    Ok(format!(
        "{checked} decompositions without a window harvest, 0 violations"
    ))
}

fn main() -> ExitCode {
    let mut decompositions = Vec::new();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, f: &mut dyn FnMut() -> Outcome_| {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n:>2} {name}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({secs:.1}s) {detail}");
            }
        }
    };
    report(1, "q-formula exactness", &mut q_formula_exactness);
    report(2, "ten points in general position", &mut harborth);
    report(3, "grids have no 5-hole", &mut grid_no_five_hole);
    report(4, "horton sets have no 7-hole", &mut horton_no_seven_hole);
    report(5, "empty quadrilateral threshold", &mut quadrilateral);
    report(6, "no-4-hole equivalence", &mut eppstein_equivalence);
    report(7, "visible 5-clique", &mut visible_clique);
    report(8, "extractor soundness and oracle agreement", &mut || {
        extractor_agreement(&mut decompositions)
    });
    report(9, "bound arithmetic", &mut bound_arithmetic);
    report(10, "perturbation", &mut perturbation);
    report(11, "consecutive layer inequality", &mut || {
        layer_inequality(&decompositions)
    });
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
