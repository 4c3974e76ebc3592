//! Deterministic constructors for the point families used as examples and
//! extremal witnesses. Every output is checked before it is returned.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convexity::{convex_hull, is_convex_position, max_strictly_convex_subset, q_formula};
use crate::error::{Error, Result};
use crate::geometry::{cross, is_general_position, max_collinear, Point, PointSet, COORD_LIMIT};
use crate::holes::{classify_no_four_hole, find_k_hole, NoFourHoleFamily, SIX_POINT_EXCEPTIONAL};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Integer approximation of a regular `m`-gon of the given radius, returned
/// clockwise, or `None` if rounding broke strict convexity.
fn rounded_polygon(m: usize, radius: f64, phase: f64) -> Option<Vec<Point>> {
    let corners: Vec<Point> = (0..m)
        .map(|i| {
            let t = phase - std::f64::consts::TAU * i as f64 / m as f64;
            Point::new((radius * t.cos()).round() as i64, (radius * t.sin()).round() as i64)
        })
        .collect();
    let strictly_convex = (0..m).all(|i| cross(corners[i], corners[(i + 1) % m], corners[(i + 2) % m]) < 0);
    strictly_convex.then_some(corners)
}

/// `count` evenly spaced lattice points strictly inside segment `a b`, which
/// must be divisible into `count + 1` equal integer steps.
fn interior_points(a: Point, b: Point, count: usize) -> Vec<Point> {
    let steps = count as i64 + 1;
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    debug_assert!(dx % steps == 0 && dy % steps == 0);
    (1..steps)
        .map(|t| Point::new(a.x + dx / steps * t, a.y + dy / steps * t))
        .collect()
}

/// Extremal set for `q(k, ell)`: `ell - 1` points (corners included) on every
/// second side of a convex `(k - 1)`-gon for odd `k`; for even `k` the same
/// on a `(k - 2)`-gon plus one point, just outside a bare side, on no line
/// through two others. The result is in convex position.
pub fn every_second_side(k: usize, ell: usize) -> Result<PointSet> {
    if k < 5 || ell < 3 {
        return Err(Error::InvalidParameter(format!(
            "every_second_side needs k >= 5 and ell >= 3, got ({k}, {ell})"
        )));
    }
    let sides = if k % 2 == 1 { k - 1 } else { k - 2 };
    let interior = ell - 3;
    let scale = (ell - 2) as i64;
    let mut radius = 40.0 * sides as f64;
    for _ in 0..20 {
        if let Some(candidate) = try_every_second_side(k, ell, sides, interior, scale, radius) {
            return Ok(candidate);
        }
        radius *= 1.7;
    }
    Err(Error::Degenerate(format!(
        "no integer realization found for ({k}, {ell})"
    )))
}

fn try_every_second_side(
    k: usize,
    ell: usize,
    sides: usize,
    interior: usize,
    scale: i64,
    radius: f64,
) -> Option<PointSet> {
    let corners: Vec<Point> = rounded_polygon(sides, radius, 0.3)?
        .into_iter()
        .map(|p| Point::new(p.x * scale, p.y * scale))
        .collect();
    let mut points = corners.clone();
    for i in (0..sides).step_by(2) {
        points.extend(interior_points(corners[i], corners[i + 1], interior));
    }
    if k.is_multiple_of(2) {
        // Just outside the midpoint of a side that carries no extra points.
        let (a, b) = (corners[1], corners[2]);
        let (mx, my) = ((a.x + b.x) / 2, (a.y + b.y) / 2);
        let (nx, ny) = (-(b.y - a.y) as f64, (b.x - a.x) as f64);
        let len = nx.hypot(ny);
        let extra = (1..50)
            .map(|t| {
                let push = t as f64;
                Point::new(
                    mx + (nx / len * push).round() as i64,
                    my + (ny / len * push).round() as i64,
                )
            })
            .find(|&e| {
                let mut with = points.clone();
                with.push(e);
                is_convex_position(&with)
                    && (0..points.len()).all(|i| (i + 1..points.len()).all(|j| cross(points[i], points[j], e) != 0))
            })?;
        points.push(extra);
    }
    let set = PointSet::new(points).ok()?;
    let expected = if k % 2 == 1 {
        (ell - 1) * (k - 1) / 2
    } else {
        (ell - 1) * (k - 2) / 2 + 1
    };
    let (collinear, _) = max_collinear(&set).ok()?;
    let ok = set.len() == expected && collinear == ell - 1 && max_strictly_convex_subset(&set).len() < k;
    ok.then_some(set)
}

/// A convex-position set of `q(k, ell) - 1` points with fewer than `ell`
/// collinear points and fewer than `k` points in strictly convex position.
pub fn q_extremal(k: usize, ell: usize) -> Result<PointSet> {
    if k < 3 || ell < 3 {
        return Err(Error::InvalidParameter(format!("needs k, ell >= 3, got ({k}, {ell})")));
    }
    match k {
        3 => PointSet::new((0..ell as i64 - 1).map(|i| Point::new(i, 0)).collect()),
        4 => collinear_plus_one(ell),
        _ => every_second_side(k, ell),
    }
}

pub fn grid(m: usize) -> Result<PointSet> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid side must be at least 2, got {m}"
        )));
    }
    let m = m as i64;
    PointSet::new((0..m).flat_map(|x| (0..m).map(move |y| Point::new(x, y))).collect())
}

/// `p` lies strictly above every line through two points of `set` (or below,
/// for `above = false`).
fn beyond_all_lines(set: &[Point], p: Point, above: bool) -> bool {
    (0..set.len()).all(|i| {
        (i + 1..set.len()).all(|j| {
            let (a, b) = if set[i].x < set[j].x {
                (set[i], set[j])
            } else {
                (set[j], set[i])
            };
            let c = cross(a, b, p);
            if above {
                c > 0
            } else {
                c < 0
            }
        })
    })
}

/// The recursive Horton property: the even and odd halves (by x) are Horton
/// sets, every point of the odd half is above every line through two even
/// points, and every even point is below every line through two odd points.
fn is_horton(set: &[Point]) -> bool {
    if set.len() <= 2 {
        return true;
    }
    let even: Vec<Point> = set.iter().step_by(2).copied().collect();
    let odd: Vec<Point> = set.iter().skip(1).step_by(2).copied().collect();
    odd.iter().all(|&p| beyond_all_lines(&even, p, true))
        && even.iter().all(|&p| beyond_all_lines(&odd, p, false))
        && is_horton(&even)
        && is_horton(&odd)
}

/// An `n`-point Horton set (`n` a power of two). Point `i` sits at `x = i`;
/// its height adds `D^(levels - 1 - j)` for each set bit `j` of `i`, so the
/// lowest bit decides the top-level split.
pub fn horton(n: usize) -> Result<PointSet> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "horton size must be a power of two, got {n}"
        )));
    }
    let levels = n.trailing_zeros();
    let mut base: i64 = n as i64 + 1;
    loop {
        let heights: Option<Vec<i64>> = (0..n)
            .map(|i| {
                (0..levels).try_fold(0i64, |acc, j| {
                    if i >> j & 1 == 1 {
                        acc.checked_add(base.checked_pow(levels - 1 - j)?)
                    } else {
                        Some(acc)
                    }
                })
            })
            .collect();
        let Some(heights) = heights.filter(|h| h.iter().all(|&y| y < COORD_LIMIT)) else {
            return Err(Error::InvalidParameter(format!(
                "horton({n}) exceeds the coordinate range"
            )));
        };
        let points: Vec<Point> = heights
            .iter()
            .enumerate()
            .map(|(i, &y)| Point::new(i as i64, y))
            .collect();
        if is_general_position(&points) && is_horton(&points) {
            return PointSet::new(points);
        }
        base = base
            .checked_mul(2)
            .ok_or_else(|| Error::InvalidParameter(format!("horton({n}) exceeds the coordinate range")))?;
    }
}

/// `ell - 1` points on a line plus one point off it.
pub fn collinear_plus_one(ell: usize) -> Result<PointSet> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("ell must be at least 2, got {ell}")));
    }
    if ell == 2 {
        return PointSet::new(vec![Point::new(0, 0), Point::new(1, 1)]);
    }
    let mut points: Vec<Point> = (0..ell as i64 - 1).map(|i| Point::new(i, 0)).collect();
    points.push(Point::new(0, 1));
    let set = PointSet::new(points)?;
    debug_assert!(max_strictly_convex_subset(&set).len() <= 3);
    Ok(set)
}

fn confirm_no_four_hole(set: PointSet, tag: &str) -> Result<PointSet> {
    let report = classify_no_four_hole(&set)?;
    if !report.no_four_hole || !report.structural {
        return Err(Error::Precondition(format!("{tag} output failed classification")));
    }
    Ok(set)
}

/// `count` collinear points, with an apex above the line when requested.
pub fn eppstein_family_a_b(count: usize, apex: bool) -> Result<PointSet> {
    if count < 2 || count + usize::from(apex) < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 points, got {count} on the line"
        )));
    }
    let mut points: Vec<Point> = (0..count as i64).map(|i| Point::new(i, 0)).collect();
    if apex {
        points.push(Point::new(count as i64 / 2, 2));
    }
    confirm_no_four_hole(PointSet::new(points)?, "eppstein_family_a_b")
}

/// `count` points on the x-axis at `x = 0, 2, 4, ..` and two points `v`,
/// `w` on opposite sides whose segment crosses the axis at `x = crossing`.
/// The segment must either miss the hull of the collinear points or pass
/// through one of them, so `crossing` must not be odd inside that hull.
pub fn eppstein_family_c_d(count: usize, crossing: i64) -> Result<PointSet> {
    if count < 2 {
        return Err(Error::InvalidParameter(format!(
            "need at least 2 points on the line, got {count}"
        )));
    }
    let last = 2 * (count as i64 - 1);
    if crossing % 2 != 0 && (0..=last).contains(&crossing) {
        return Err(Error::InvalidParameter(format!(
            "segment crosses the line at x = {crossing}, strictly between two points"
        )));
    }
    let mut points: Vec<Point> = (0..count as i64).map(|i| Point::new(2 * i, 0)).collect();
    points.push(Point::new(crossing + 1, 1));
    points.push(Point::new(crossing - 1, -1));
    confirm_no_four_hole(PointSet::new(points)?, "eppstein_family_c_d")
}

pub fn eppstein_family_e() -> Result<PointSet> {
    let set = PointSet::new(SIX_POINT_EXCEPTIONAL.to_vec())?;
    let report = classify_no_four_hole(&set)?;
    assert!(matches!(report.family, NoFourHoleFamily::SixPointExceptional(_)));
    Ok(set)
}

fn line_key(p: Point, q: Point) -> (i64, i64) {
    let (mut dx, mut dy) = (q.x - p.x, q.y - p.y);
    let g = gcd(dx, dy);
    dx /= g;
    dy /= g;
    if dx < 0 || (dx == 0 && dy < 0) {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

/// `n` points with fewer than `ell` on any line, by seeded rejection
/// sampling in a box of side `2n + 4`.
pub fn random_bounded_collinear(n: usize, ell: usize, seed: u64) -> Result<PointSet> {
    let side = 2 * n as i64 + 4;
    random_bounded_collinear_in_box(n, ell, seed, side)
}

pub fn random_bounded_collinear_in_box(n: usize, ell: usize, seed: u64, side: i64) -> Result<PointSet> {
    if n == 0 || ell < 3 || side < 1 {
        return Err(Error::InvalidParameter(format!(
            "needs n >= 1 and ell >= 3, got ({n}, {ell})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Point> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    let budget = 2000 * n;
    while points.len() < n {
        attempts += 1;
        if attempts > budget {
            return Err(Error::SamplingExhausted(format!(
                "placed {} of {n} points in a box of side {side}",
                points.len()
            )));
        }
        let p = Point::new(rng.gen_range(0..side), rng.gen_range(0..side));
        if points.contains(&p) {
            continue;
        }
        let mut lines: HashMap<(i64, i64), usize> = HashMap::new();
        let mut ok = true;
        for &q in &points {
            let count = lines.entry(line_key(p, q)).or_insert(0);
            *count += 1;
            if *count + 1 >= ell {
                ok = false;
                break;
            }
        }
        if ok {
            points.push(p);
        }
    }
    let set = PointSet::new(points)?;
    debug_assert!(max_collinear(&set)?.0 < ell.max(2) || n < 2);
    Ok(set)
}

pub fn random_general_position(n: usize, seed: u64) -> Result<PointSet> {
    random_bounded_collinear(n, 3, seed)
}

/// A random convex-position set of exactly `q(k, ell)` points whose hull
/// sides carry at most `ell - 1` points each.
pub fn random_convex_position(k: usize, ell: usize, seed: u64) -> Result<PointSet> {
    if k < 3 || ell < 3 {
        return Err(Error::InvalidParameter(format!("needs k, ell >= 3, got ({k}, {ell})")));
    }
    let size = q_formula(k as u64, ell as u64) as usize;
    let per_side = ell - 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let min_corners = if per_side == 0 {
        size
    } else {
        size.div_ceil(per_side + 1)
    }
    .max(3);
    for _ in 0..1000 {
        let corners_wanted = rng.gen_range(min_corners..=size.max(min_corners));
        let radius = 60.0 * size as f64;
        let mut angles: Vec<f64> = (0..corners_wanted)
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| b.total_cmp(a));
        let corners: Vec<Point> = angles
            .iter()
            .map(|t| Point::new((radius * t.cos()).round() as i64, (radius * t.sin()).round() as i64))
            .collect();
        let hull = convex_hull(&corners);
        if hull.corners.len() != corners_wanted || size < corners_wanted {
            continue;
        }
        let m = corners_wanted;
        let scale = (ell - 2) as i64;
        let corners: Vec<Point> = hull
            .corners
            .iter()
            .map(|p| Point::new(p.x * scale, p.y * scale))
            .collect();
        let mut extra = vec![0usize; m];
        let mut remaining = size - m;
        if remaining > m * per_side {
            continue;
        }
        while remaining > 0 {
            let side = rng.gen_range(0..m);
            if extra[side] < per_side {
                extra[side] += 1;
                remaining -= 1;
            }
        }
        let mut points = corners.clone();
        for side in 0..m {
            let (a, b) = (corners[side], corners[(side + 1) % m]);
            let (dx, dy) = ((b.x - a.x) / scale, (b.y - a.y) / scale);
            let mut slots: Vec<i64> = (1..scale).collect();
            for _ in 0..extra[side] {
                let pick = rng.gen_range(0..slots.len());
                let t = slots.swap_remove(pick);
                points.push(Point::new(a.x + dx * t, a.y + dy * t));
            }
        }
        let set = PointSet::new(points)?;
        if set.len() == size && is_convex_position(&set) && max_collinear(&set)?.0 < ell {
            return Ok(set);
        }
    }
    Err(Error::SamplingExhausted(format!(
        "no convex-position set for ({k}, {ell})"
    )))
}

/// Confirms the Horton property that matters downstream: no 7-hole.
pub fn has_no_seven_hole(points: &[Point]) -> Result<bool> {
    Ok(find_k_hole(points, 7)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_k_hole, oracle_max_convex_subset};

    #[test]
    fn every_second_side_sizes() {
        let s = every_second_side(9, 6).unwrap();
        assert_eq!(s.len(), 20);
        assert_eq!(max_collinear(&s).unwrap().0, 5);
        assert_eq!(every_second_side(8, 6).unwrap().len(), 16);
        let small = every_second_side(5, 3).unwrap();
        assert_eq!(small.len(), 4);
        assert!(is_general_position(&small));
        assert!(oracle_max_convex_subset(&small, true).unwrap() < 5);
    }

    #[test]
    fn every_second_side_rejects_small_k() {
        assert!(every_second_side(4, 5).is_err());
        assert!(every_second_side(7, 2).is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(grid(2).unwrap().len(), 4);
        assert_eq!(max_collinear(&grid(3).unwrap()).unwrap().0, 3);
        let g4 = grid(4).unwrap();
        assert_eq!(g4.len(), 16);
        assert!(oracle_k_hole(&g4, 5).unwrap().is_none());
        assert!(grid(1).is_err());
    }

    #[test]
    fn horton_sets() {
        let h4 = horton(4).unwrap();
        assert_eq!(h4.len(), 4);
        assert!(is_general_position(&h4));
        assert!(is_general_position(&horton(8).unwrap()));
        assert!(has_no_seven_hole(&horton(16).unwrap()).unwrap());
        assert!(horton(12).is_err());
    }

    #[test]
    fn collinear_plus_one_cases() {
        let s = collinear_plus_one(5).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(oracle_max_convex_subset(&s, true).unwrap(), 3);
        assert_eq!(collinear_plus_one(2).unwrap().len(), 2);
        let tri = collinear_plus_one(3).unwrap();
        assert_eq!(convex_hull(&tri).corners.len(), 3);
    }

    #[test]
    fn eppstein_families() {
        assert!(eppstein_family_a_b(6, false).is_ok());
        assert!(eppstein_family_a_b(6, true).is_ok());
        let through = eppstein_family_c_d(4, 2).unwrap();
        let report = classify_no_four_hole(&through).unwrap();
        assert_eq!(report.family.tag(), "two-apex-line");
        assert!(eppstein_family_c_d(4, -3).is_ok());
        assert!(eppstein_family_c_d(4, 9).is_ok());
        assert!(eppstein_family_c_d(4, 3).is_err());
        assert_eq!(
            classify_no_four_hole(&eppstein_family_e().unwrap())
                .unwrap()
                .family
                .tag(),
            "six-point-exceptional"
        );
    }

    #[test]
    fn random_sets() {
        let a = random_bounded_collinear(10, 3, 7).unwrap();
        assert_eq!(a, random_bounded_collinear(10, 3, 7).unwrap());
        assert!(is_general_position(&a));
        let b = random_bounded_collinear(20, 4, 1).unwrap();
        assert!(max_collinear(&b).unwrap().0 <= 3);
        assert_eq!(random_bounded_collinear(1, 3, 0).unwrap().len(), 1);
        assert!(matches!(
            random_bounded_collinear_in_box(10, 3, 0, 2),
            Err(Error::SamplingExhausted(_))
        ));
    }

    #[test]
    fn random_convex_sets() {
        for seed in 0..5 {
            let s = random_convex_position(9, 6, seed).unwrap();
            assert_eq!(s.len(), 21);
            assert!(is_convex_position(&s));
            assert!(max_collinear(&s).unwrap().0 < 6);
        }
    }

    #[test]
    fn extremal_sets() {
        for ell in 3..=6 {
            for k in 3..=9 {
                let s = q_extremal(k, ell).unwrap();
                assert_eq!(s.len() as u64, q_formula(k as u64, ell as u64) - 1, "k={k} ell={ell}");
                assert!(is_convex_position(&s));
            }
        }
    }
}
