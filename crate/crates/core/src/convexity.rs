//! Hulls, convex and strictly convex position, convex layers and the
//! k-minimal descent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{all_collinear, cross, max_collinear, on_segment, Point};

/// Clockwise hull boundary starting at the canonically least boundary point.
/// `boundary` keeps collinear points on the hull edges; `corners` is the
/// subsequence of extreme points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullBoundary {
    pub boundary: Vec<Point>,
    pub corners: Vec<Point>,
}

impl HullBoundary {
    pub fn is_degenerate(&self) -> bool {
        self.corners.len() < 3
    }

    /// Closed containment in the hull.
    pub fn contains(&self, p: Point) -> bool {
        match self.corners.as_slice() {
            [] => false,
            [a] => *a == p,
            [a, b] => on_segment(p, *a, *b),
            cs => {
                let n = cs.len();
                (0..n).all(|i| cross(cs[i], cs[(i + 1) % n], p) <= 0)
            }
        }
    }

    /// Containment in the topological interior (empty for degenerate hulls).
    pub fn contains_strictly(&self, p: Point) -> bool {
        let cs = &self.corners;
        let n = cs.len();
        n >= 3 && (0..n).all(|i| cross(cs[i], cs[(i + 1) % n], p) < 0)
    }

    pub fn on_boundary(&self, p: Point) -> bool {
        self.contains(p) && !self.contains_strictly(p)
    }

    /// Twice the area enclosed by the hull.
    pub fn twice_area(&self) -> i128 {
        -crate::geometry::twice_signed_area(&self.corners)
    }
}

pub fn convex_hull(points: &[Point]) -> HullBoundary {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() <= 2 || all_collinear(&sorted) {
        let corners = match sorted.len() {
            0 => vec![],
            1 => vec![sorted[0]],
            n => vec![sorted[0], sorted[n - 1]],
        };
        return HullBoundary {
            boundary: sorted,
            corners,
        };
    }

    let mut upper: Vec<Point> = Vec::new();
    let mut lower: Vec<Point> = Vec::new();
    for &p in &sorted {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) > 0 {
            upper.pop();
        }
        upper.push(p);
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) < 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut boundary = upper;
    boundary.extend(lower.iter().rev().skip(1).take(lower.len() - 2));

    let n = boundary.len();
    let corners = (0..n)
        .filter(|&i| cross(boundary[(i + n - 1) % n], boundary[i], boundary[(i + 1) % n]) != 0)
        .map(|i| boundary[i])
        .collect();
    HullBoundary { boundary, corners }
}

pub fn is_convex_position(points: &[Point]) -> bool {
    convex_hull(points).boundary.len() == points.len()
}

pub fn is_strictly_convex_position(points: &[Point]) -> bool {
    convex_hull(points).corners.len() == points.len()
}

/// Minimum size of a convex-position set forcing `ell` collinear points or
/// `k` points in strictly convex position.
pub fn q_formula(k: u64, ell: u64) -> u64 {
    if k <= 2 || ell <= 2 {
        k.min(ell)
    } else if k == 3 {
        ell
    } else if ell == 3 {
        k
    } else if k % 2 == 1 {
        (ell - 1) * (k - 1) / 2 + 1
    } else {
        (ell - 1) * (k - 2) / 2 + 2
    }
}

/// Picks `k` points in strictly convex position from a convex-position set
/// with fewer than `ell` collinear points and at least `q_formula(k, ell)`
/// points.
///
/// Follows the inductive argument on the side sizes `|P_i|` of the hull:
/// a side with at least four points contributes two interior points and is
/// removed; a side with exactly two points contributes the window
/// `u, v, w, x` after removing `t..y`; when every side has exactly three
/// points, the side midpoints plus every second corner are taken.
pub fn strictly_convex_subset_in_convex_position(points: &[Point], k: usize, ell: usize) -> Result<Vec<Point>> {
    if !is_convex_position(points) {
        return Err(Error::Precondition("input is not in convex position".into()));
    }
    if !points.is_empty() && max_collinear(points)?.0 >= ell {
        return Err(Error::Precondition(format!("input has {ell} collinear points")));
    }
    let needed = q_formula(k as u64, ell as u64);
    if (points.len() as u64) < needed {
        return Err(Error::Precondition(format!(
            "{} points given, q({k}, {ell}) = {needed} required",
            points.len()
        )));
    }
    let mut chosen = select_strictly_convex(points, k, ell);
    chosen.sort_unstable();
    assert_eq!(chosen.len(), k);
    assert!(is_strictly_convex_position(&chosen));
    Ok(chosen)
}

fn select_strictly_convex(points: &[Point], k: usize, ell: usize) -> Vec<Point> {
    let hull = convex_hull(points);
    if k <= 2 {
        return hull.boundary[..k].to_vec();
    }
    if k == 3 || ell == 3 {
        return hull.corners[..k].to_vec();
    }

    let boundary = &hull.boundary;
    let n = boundary.len();
    let corner_idx: Vec<usize> = (0..n).filter(|&i| hull.corners.contains(&boundary[i])).collect();
    let m = corner_idx.len();
    // side i runs from corner i to corner i + 1, both included
    let side = |i: usize| -> Vec<Point> {
        let (start, end) = (corner_idx[i], corner_idx[(i + 1) % m]);
        let len = (end + n - start) % n + 1;
        (0..len).map(|t| boundary[(start + t) % n]).collect()
    };
    let sides: Vec<Vec<Point>> = (0..m).map(side).collect();

    if let Some(long) = sides.iter().find(|s| s.len() >= 4) {
        let rest: Vec<Point> = points.iter().filter(|p| !long.contains(p)).copied().collect();
        let mut chosen = select_strictly_convex(&rest, k - 2, ell);
        chosen.extend([long[1], long[2]]);
        return chosen;
    }

    if let Some(i) = sides.iter().position(|s| s.len() == 2) {
        let v = corner_idx[i];
        let at = |offset: isize| boundary[((v as isize + offset).rem_euclid(n as isize)) as usize];
        let window = [at(-1), at(0), at(1), at(2)];
        if k == 4 {
            return window.to_vec();
        }
        let removed = [at(-2), at(-1), at(0), at(1), at(2), at(3)];
        let rest: Vec<Point> = points.iter().filter(|p| !removed.contains(p)).copied().collect();
        let mut chosen = select_strictly_convex(&rest, k - 4, ell);
        chosen.extend(window);
        return chosen;
    }

    // every side has exactly three points
    let mut chosen: Vec<Point> = sides.iter().map(|s| s[1]).collect();
    let last_corner = if m.is_multiple_of(2) { m } else { m - 1 };
    chosen.extend((0..last_corner).step_by(2).map(|i| boundary[corner_idx[i]]));
    assert!(chosen.len() >= k, "alternating selection too small");
    chosen.truncate(k);
    chosen
}

/// Longest convex chain search: for each anchor (the least point of the
/// polygon), the remaining points are sorted by angle and a DP over directed
/// edges keeps the longest chain with non-negative (or positive) turns.
/// Stops early once a chain reaches `stop_at`.
fn longest_convex_subset(points: &[Point], strict: bool, stop_at: Option<usize>) -> Vec<Point> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let n = sorted.len();
    if n <= 2 {
        return sorted;
    }
    let mut best: Vec<Point> = if strict {
        sorted[..2].to_vec()
    } else {
        max_collinear(&sorted).map(|(_, w)| w).unwrap_or_default()
    };
    let done = |best: &Vec<Point>| stop_at.is_some_and(|t| best.len() >= t);
    if done(&best) {
        return best;
    }

    for a in 0..n {
        let s = sorted[a];
        let mut cand: Vec<Point> = sorted[a + 1..].to_vec();
        let m = cand.len();
        if m < best.len() {
            break;
        }
        cand.sort_by(|&u, &v| match cross(s, u, v) {
            c if c > 0 => std::cmp::Ordering::Less,
            c if c < 0 => std::cmp::Ordering::Greater,
            _ => u.cmp(&v),
        });
        // points strictly between s and cand[j] on the same ray
        let mut ray_before = vec![0usize; m];
        for j in 1..m {
            if cross(s, cand[j - 1], cand[j]) == 0 {
                ray_before[j] = ray_before[j - 1] + 1;
            }
        }

        // node m stands for the anchor; dp[i * m + j] = chain length ending i -> j
        let pt = |i: usize| if i == m { s } else { cand[i] };
        let mut dp = vec![0u16; (m + 1) * m];
        let mut parent = vec![usize::MAX; (m + 1) * m];
        for j in 0..m {
            dp[m * m + j] = 2;
        }
        let mut best_end: Option<(usize, usize, usize)> = None;
        let mut best_len = best.len();
        for j in 0..m {
            let preds = (0..j).chain(std::iter::once(m));
            for i in preds {
                let len = dp[i * m + j];
                if len == 0 {
                    continue;
                }
                let closing = cross(pt(i), cand[j], s);
                if closing > 0 {
                    let total = len as usize + if strict { 0 } else { ray_before[j] };
                    if total > best_len {
                        best_len = total;
                        best_end = Some((i, j, total));
                    }
                }
                for k in j + 1..m {
                    let turn = cross(pt(i), cand[j], cand[k]);
                    if (strict && turn > 0) || (!strict && turn >= 0) {
                        let slot = j * m + k;
                        if len + 1 > dp[slot] {
                            dp[slot] = len + 1;
                            parent[slot] = i;
                        }
                    }
                }
            }
        }
        if let Some((i, j, _)) = best_end {
            let mut chain = vec![cand[j]];
            let (mut prev, mut cur) = (i, j);
            while prev != m {
                chain.push(cand[prev]);
                let p = parent[prev * m + cur];
                cur = prev;
                prev = p;
            }
            chain.push(s);
            if !strict {
                chain.extend(cand[j - ray_before[j]..j].iter().copied());
            }
            chain.sort_unstable();
            best = chain;
            if done(&best) {
                return best;
            }
        }
    }
    best
}

/// A maximum subset in (non-strict) convex position, canonical order.
pub fn max_convex_position_subset(points: &[Point]) -> Vec<Point> {
    longest_convex_subset(points, false, None)
}

/// A maximum subset in strictly convex position, canonical order.
pub fn max_strictly_convex_subset(points: &[Point]) -> Vec<Point> {
    longest_convex_subset(points, true, None)
}

/// Some subset of at least `k` points in convex position, if one exists.
pub fn convex_position_subset_of_size(points: &[Point], k: usize) -> Option<Vec<Point>> {
    let found = longest_convex_subset(points, false, Some(k));
    (found.len() >= k).then_some(found)
}

/// Greedy maximal general-position subset in canonical order.
pub fn max_general_position_subset(points: &[Point]) -> Vec<Point> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut chosen: Vec<Point> = Vec::new();
    for p in sorted {
        let blocked = (0..chosen.len()).any(|i| (i + 1..chosen.len()).any(|j| cross(chosen[i], chosen[j], p) == 0));
        if !blocked {
            chosen.push(p);
        }
    }
    chosen
}

/// All points of `points` on the boundary of `conv(x)`.
pub(crate) fn saturate(points: &[Point], x: &[Point]) -> Vec<Point> {
    let hull = convex_hull(x);
    let mut out: Vec<Point> = points.iter().copied().filter(|&p| hull.on_boundary(p)).collect();
    out.sort_unstable();
    out
}

/// A k-minimal convex-position subset: no other subset of at least `k`
/// points in convex position has a strictly smaller hull. The result also
/// contains every input point on its hull boundary.
pub fn k_minimal_convex_subset(points: &[Point], k: usize) -> Result<Vec<Point>> {
    let start = convex_position_subset_of_size(points, k)
        .ok_or_else(|| Error::Precondition(format!("no {k} points in convex position")))?;
    k_minimal_from(points, &start, k)
}

/// Descends from `start` (at least `k` points in convex position) by
/// repeatedly replacing it with a subset of strictly smaller hull.
///
/// A subset `Y` inside `conv(X)` has a strictly smaller hull iff it misses
/// some corner `c` of `X`, so each step searches `P ∩ conv(X) - c` for every
/// corner `c`.
pub fn k_minimal_from(points: &[Point], start: &[Point], k: usize) -> Result<Vec<Point>> {
    if start.len() < k || !is_convex_position(start) {
        return Err(Error::Precondition(format!(
            "starting set is not {k} points in convex position"
        )));
    }
    let mut current = saturate(points, start);
    'descent: loop {
        let hull = convex_hull(&current);
        let inside: Vec<Point> = points.iter().copied().filter(|&p| hull.contains(p)).collect();
        for corner in &hull.corners {
            let without: Vec<Point> = inside.iter().copied().filter(|p| p != corner).collect();
            if let Some(smaller) = convex_position_subset_of_size(&without, k) {
                current = saturate(points, &smaller);
                continue 'descent;
            }
        }
        return Ok(current);
    }
}

/// Layers `A_1 .. A_ell` nested inside a k-minimal outer layer, stored with
/// 0-based indices: `layers[0]` is the outer layer and `layers[ell - 1]` the
/// residue. Every layer except the residue is in clockwise boundary order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerDecomposition {
    pub layers: Vec<Vec<Point>>,
    pub apex: Option<Point>,
    pub ell: usize,
}

impl LayerDecomposition {
    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// `|A_{i-1}| < (2 ell - 1)(|A_i| + 1)` for each consecutive pair.
    pub fn consecutive_layer_bounds(&self) -> Vec<bool> {
        let w = 2 * self.ell - 1;
        self.layers
            .windows(2)
            .map(|pair| pair[0].len() < w * (pair[1].len() + 1))
            .collect()
    }

    pub fn all_nonempty(&self) -> bool {
        self.layers.iter().all(|l| !l.is_empty())
    }
}

/// Builds the decomposition with `A_1 = k_minimal_convex_subset(P, k)`.
pub fn convex_layers(points: &[Point], ell: usize, k: usize) -> Result<LayerDecomposition> {
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("ell = {ell} must be at least 2")));
    }
    let outer = k_minimal_convex_subset(points, k)?;
    Ok(layers_from_outer(points, &outer, ell))
}

/// Peels `ell - 2` hull layers off the points strictly inside `conv(outer)`;
/// whatever remains is the residue `A_ell`.
pub fn layers_from_outer(points: &[Point], outer: &[Point], ell: usize) -> LayerDecomposition {
    let outer = saturate(points, outer);
    let hull = convex_hull(&outer);
    let mut remaining: Vec<Point> = points
        .iter()
        .copied()
        .filter(|&p| hull.contains(p) && !outer.contains(&p))
        .collect();
    remaining.sort_unstable();
    let mut layers = vec![hull.boundary];
    for _ in 1..ell.saturating_sub(1) {
        let layer = convex_hull(&remaining).boundary;
        remaining.retain(|p| !layer.contains(p));
        layers.push(layer);
    }
    let apex = remaining.first().copied();
    layers.push(remaining);
    LayerDecomposition { layers, apex, ell }
}

/// Full onion peeling of the point set.
pub fn onion_layers(points: &[Point]) -> Vec<Vec<Point>> {
    let mut remaining = points.to_vec();
    remaining.sort_unstable();
    remaining.dedup();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let layer = convex_hull(&remaining).boundary;
        remaining.retain(|p| !layer.contains(p));
        layers.push(layer);
    }
    layers
}
