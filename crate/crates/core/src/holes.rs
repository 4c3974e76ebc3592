//! k-holes, visibility graphs and the no-4-hole classification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::convexity::{convex_hull, is_strictly_convex_position};
use crate::error::{Error, Result};
use crate::geometry::{
    all_collinear, cross, max_collinear, on_segment, segments_cross_properly, segments_intersect, Point,
};

/// `k` points in strictly convex position whose hull holds no other point of
/// the ambient set. Vertices are clockwise from the least one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoleCertificate {
    vertices: Vec<Point>,
}

impl HoleCertificate {
    /// Verifies the hole against `ambient` before constructing it.
    pub fn new(ambient: &[Point], vertices: &[Point]) -> Result<Self> {
        if let Err(violation) = check_hole(ambient, vertices) {
            return Err(Error::Precondition(format!("not a hole: {violation}")));
        }
        Ok(HoleCertificate {
            vertices: convex_hull(vertices).corners,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn k(&self) -> usize {
        self.vertices.len()
    }

    pub fn twice_area(&self) -> i128 {
        convex_hull(&self.vertices).twice_area()
    }
}

/// `ell` collinear points ordered along their line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollinearCertificate {
    points: Vec<Point>,
}

impl CollinearCertificate {
    pub fn new(points: &[Point]) -> Result<Self> {
        let mut sorted = points.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(Error::Precondition("repeated point in collinear certificate".into()));
        }
        if sorted.len() < 2 || !all_collinear(&sorted) {
            return Err(Error::Precondition("points are not collinear".into()));
        }
        Ok(CollinearCertificate { points: sorted })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ell(&self) -> usize {
        self.points.len()
    }
}

/// First violated condition when checking a claimed hole.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HoleViolation {
    TooFewPoints(usize),
    RepeatedVertex(Point),
    NotInAmbientSet(Point),
    NotStrictlyConvex,
    HullNotEmpty(Point),
}

impl fmt::Display for HoleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HoleViolation::TooFewPoints(n) => write!(f, "only {n} vertices"),
            HoleViolation::RepeatedVertex(p) => write!(f, "vertex {p} repeated"),
            HoleViolation::NotInAmbientSet(p) => write!(f, "vertex {p} not in point set"),
            HoleViolation::NotStrictlyConvex => write!(f, "not strictly convex"),
            HoleViolation::HullNotEmpty(p) => write!(f, "hull not empty: contains {p}"),
        }
    }
}

pub fn check_hole(ambient: &[Point], vertices: &[Point]) -> std::result::Result<(), HoleViolation> {
    if vertices.len() < 3 {
        return Err(HoleViolation::TooFewPoints(vertices.len()));
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(HoleViolation::RepeatedVertex(w[0]));
    }
    if let Some(p) = vertices.iter().find(|p| !ambient.contains(p)) {
        return Err(HoleViolation::NotInAmbientSet(*p));
    }
    if !is_strictly_convex_position(vertices) {
        return Err(HoleViolation::NotStrictlyConvex);
    }
    let hull = convex_hull(vertices);
    if let Some(p) = ambient.iter().find(|p| !vertices.contains(p) && hull.contains(**p)) {
        return Err(HoleViolation::HullNotEmpty(*p));
    }
    Ok(())
}

/// `x` is in strictly convex position and `conv(x)` meets `points` only in `x`.
pub fn is_hole(points: &[Point], x: &[Point]) -> Result<bool> {
    if let Some(p) = x.iter().find(|p| !points.contains(p)) {
        return Err(Error::Precondition(format!("{p} is not in the point set")));
    }
    if x.len() < 3 {
        return Err(Error::Precondition(format!("a hole needs 3 vertices, got {}", x.len())));
    }
    Ok(check_hole(points, x).is_ok())
}

/// Longest empty convex chain anchored at each point in turn: the anchor is
/// the least vertex, the other vertices are visited by angle, and every fan
/// triangle `(anchor, v_i, v_{i+1})` must be empty. Complete for every input
/// size. Stops at the first chain of `target` vertices.
fn largest_hole_chain(points: &[Point], target: usize) -> Option<Vec<Point>> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut best: Option<Vec<Point>> = None;
    for a in 0..sorted.len() {
        let s = sorted[a];
        let mut cand: Vec<Point> = sorted[a + 1..].to_vec();
        let m = cand.len();
        if m + 1 < target.min(best.as_ref().map_or(0, |b| b.len() + 1)).max(3) {
            break;
        }
        cand.sort_by(|&u, &v| match cross(s, u, v) {
            c if c > 0 => std::cmp::Ordering::Less,
            c if c < 0 => std::cmp::Ordering::Greater,
            _ => u.cmp(&v),
        });
        let mut empty = vec![false; m * m];
        for i in 0..m {
            for j in i + 1..m {
                if cross(s, cand[i], cand[j]) > 0 {
                    let (u, v) = (cand[i], cand[j]);
                    empty[i * m + j] = !cand
                        .iter()
                        .any(|&p| p != u && p != v && crate::geometry::in_closed_triangle(p, s, u, v));
                }
            }
        }
        let pt = |i: usize| if i == m { s } else { cand[i] };
        let mut dp = vec![0u16; (m + 1) * m];
        let mut parent = vec![usize::MAX; (m + 1) * m];
        for j in 0..m {
            dp[m * m + j] = 2;
        }
        let mut found: Option<(usize, usize, usize)> = None;
        'scan: for j in 0..m {
            for i in (0..j).chain(std::iter::once(m)) {
                let len = dp[i * m + j];
                if len == 0 {
                    continue;
                }
                if len >= 3 && cross(pt(i), cand[j], s) > 0 {
                    let better = found.is_none_or(|(_, _, l)| len as usize > l);
                    if better && best.as_ref().is_none_or(|b| len as usize > b.len()) {
                        found = Some((i, j, len as usize));
                        if len as usize >= target {
                            break 'scan;
                        }
                    }
                }
                for k in j + 1..m {
                    if empty[j * m + k] && cross(pt(i), cand[j], cand[k]) > 0 {
                        let slot = j * m + k;
                        if len + 1 > dp[slot] {
                            dp[slot] = len + 1;
                            parent[slot] = i;
                        }
                    }
                }
            }
        }
        if let Some((i, j, _)) = found {
            let mut chain = vec![cand[j]];
            let (mut prev, mut cur) = (i, j);
            while prev != m {
                chain.push(cand[prev]);
                let p = parent[prev * m + cur];
                cur = prev;
                prev = p;
            }
            chain.push(s);
            chain.reverse();
            let reached = chain.len() >= target;
            best = Some(chain);
            if reached {
                break;
            }
        }
    }
    best
}

/// A k-hole of `points` if one exists. The search is exhaustive.
pub fn find_k_hole(points: &[Point], k: usize) -> Result<Option<HoleCertificate>> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!(
            "k = {k}: holes have at least 3 vertices"
        )));
    }
    match largest_hole_chain(points, k) {
        Some(chain) if chain.len() >= k => Ok(Some(HoleCertificate::new(points, &chain[..k])?)),
        _ => Ok(None),
    }
}

/// Number of vertices of a largest hole (0 when fewer than 3 points or all
/// collinear).
pub fn largest_hole_size(points: &[Point]) -> usize {
    largest_hole_chain(points, usize::MAX).map_or(0, |c| c.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VisibilityGraph {
    vertices: Vec<Point>,
    adjacency: Vec<Vec<bool>>,
}

impl VisibilityGraph {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn adjacent(&self, v: Point, w: Point) -> bool {
        match (self.index(v), self.index(w)) {
            (Some(i), Some(j)) => self.adjacency[i][j],
            _ => false,
        }
    }

    fn index(&self, p: Point) -> Option<usize> {
        self.vertices.binary_search(&p).ok()
    }

    /// Unordered edges as index pairs `(i, j)` with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adjacency[i][j])
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edges().len() == self.vertices.len() * (self.vertices.len().saturating_sub(1)) / 2
    }

    /// `true` iff `points` are pairwise adjacent.
    pub fn is_clique(&self, points: &[Point]) -> bool {
        points
            .iter()
            .enumerate()
            .all(|(i, &v)| points[i + 1..].iter().all(|&w| self.adjacent(v, w)))
    }

    /// First pair of edges that cross at a point interior to both.
    pub fn crossing(&self) -> Option<((Point, Point), (Point, Point))> {
        let edges = self.edges();
        let v = &self.vertices;
        for (a, &(i, j)) in edges.iter().enumerate() {
            for &(k, l) in &edges[a + 1..] {
                if i == k || i == l || j == k || j == l {
                    continue;
                }
                if segments_cross_properly(v[i], v[j], v[k], v[l]) {
                    return Some(((v[i], v[j]), (v[k], v[l])));
                }
            }
        }
        None
    }

    pub fn is_crossing_free(&self) -> bool {
        self.crossing().is_none()
    }
}

/// Two points are adjacent iff no third point lies on the closed segment
/// between them.
pub fn visibility_graph(points: &[Point]) -> VisibilityGraph {
    let mut vertices = points.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    let n = vertices.len();
    let mut adjacency = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let blocked = (0..n).any(|k| k != i && k != j && on_segment(vertices[k], vertices[i], vertices[j]));
            adjacency[i][j] = !blocked;
            adjacency[j][i] = !blocked;
        }
    }
    VisibilityGraph { vertices, adjacency }
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return;
            }
        }
        if idx[i] == i + n - k {
            return;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub(crate) fn for_each_combination(n: usize, k: usize, visit: impl FnMut(&[usize]) -> bool) {
    combinations(n, k, visit)
}

/// Among all 5-holes inside `conv(hole)`, one of minimum area; ties go to
/// the lexicographically least vertex list.
pub fn min_area_five_hole(points: &[Point], hole: &HoleCertificate) -> Result<HoleCertificate> {
    if hole.k() != 5 || check_hole(points, hole.vertices()).is_err() {
        return Err(Error::Precondition("input is not a 5-hole of the point set".into()));
    }
    let hull = convex_hull(hole.vertices());
    let mut inside: Vec<Point> = points.iter().copied().filter(|&p| hull.contains(p)).collect();
    inside.sort_unstable();
    let mut best: Option<(i128, Vec<Point>)> = None;
    combinations(inside.len(), 5, |idx| {
        let subset: Vec<Point> = idx.iter().map(|&i| inside[i]).collect();
        if check_hole(points, &subset).is_ok() {
            let area = convex_hull(&subset).twice_area();
            let better = match &best {
                None => true,
                Some((a, v)) => area < *a || (area == *a && subset < *v),
            };
            if better {
                best = Some((area, subset));
            }
        }
        true
    });
    let (_, vertices) = best.expect("the input hole is itself a candidate");
    HoleCertificate::new(points, &vertices)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VisibleClique {
    Clique(Vec<Point>),
    Collinear(CollinearCertificate),
    /// Neither `ell` collinear points nor a 5-hole exists.
    Inconclusive,
}

/// `ell` collinear points, or five pairwise visible points taken from a
/// minimum-area 5-hole.
pub fn find_visible_5_clique(points: &[Point], ell: usize) -> Result<VisibleClique> {
    if points.len() < 5 {
        return Err(Error::Precondition(format!("{} points, need at least 5", points.len())));
    }
    let (count, witness) = max_collinear(points)?;
    if count >= ell {
        return Ok(VisibleClique::Collinear(CollinearCertificate::new(&witness[..ell])?));
    }
    let Some(hole) = find_k_hole(points, 5)? else {
        return Ok(VisibleClique::Inconclusive);
    };
    let refined = min_area_five_hole(points, &hole)?;
    let graph = visibility_graph(points);
    assert!(
        graph.is_clique(refined.vertices()),
        "minimum-area 5-hole corners must see each other"
    );
    Ok(VisibleClique::Clique(refined.vertices().to_vec()))
}

/// Which no-4-hole family a point set belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoFourHoleFamily {
    HasFourHole(HoleCertificate),
    /// All points but at most one on `line`.
    AllButOneCollinear {
        line: Vec<Point>,
        apex: Option<Point>,
    },
    /// `v`, `w` on opposite sides of the line through all other points, with
    /// `conv(line) ∩ vw` empty or a point of the set.
    TwoApexLine {
        v: Point,
        w: Point,
        line: Vec<Point>,
    },
    SixPointExceptional(Vec<Point>),
    /// No 4-hole, yet none of the families matched.
    Unclassified,
}

impl NoFourHoleFamily {
    pub fn tag(&self) -> &'static str {
        match self {
            NoFourHoleFamily::HasFourHole(_) => "has-four-hole",
            NoFourHoleFamily::AllButOneCollinear { .. } => "all-but-one-collinear",
            NoFourHoleFamily::TwoApexLine { .. } => "two-apex-line",
            NoFourHoleFamily::SixPointExceptional(_) => "six-point-exceptional",
            NoFourHoleFamily::Unclassified => "unclassified",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoFourHoleReport {
    pub family: NoFourHoleFamily,
    pub no_four_hole: bool,
    pub crossing_free: bool,
    /// One of the three structural families holds.
    pub structural: bool,
}

impl NoFourHoleReport {
    /// The three characterisations agree on this instance.
    pub fn equivalence_holds(&self) -> bool {
        self.no_four_hole == self.crossing_free && self.crossing_free == self.structural
    }
}

/// A 6-point set with no 4-hole outside the two line-based families: three
/// 3-point lines, two of them sharing `(1, 2)` and the third through `(1, 1)`
/// and `(2, 2)`. Every such set on the 5x5 grid has this order type.
pub const SIX_POINT_EXCEPTIONAL: [Point; 6] = [
    Point::new(0, 0),
    Point::new(1, 1),
    Point::new(1, 2),
    Point::new(1, 3),
    Point::new(2, 2),
    Point::new(3, 2),
];

fn all_but_one_collinear(points: &[Point]) -> Option<(Vec<Point>, Option<Point>)> {
    let (count, line) = max_collinear(points).ok()?;
    if count + 1 < points.len() {
        return None;
    }
    let apex = points.iter().copied().find(|p| !line.contains(p));
    Some((line, apex))
}

fn two_apex_line(points: &[Point]) -> Option<(Point, Point, Vec<Point>)> {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let (v, w) = (points[i], points[j]);
            let line: Vec<Point> = points.iter().copied().filter(|&p| p != v && p != w).collect();
            if line.len() < 2 || !all_collinear(&line) {
                continue;
            }
            let (a, b) = (line[0], line[1]);
            if cross(a, b, v).signum() * cross(a, b, w).signum() >= 0 {
                continue;
            }
            let mut sorted = line.clone();
            sorted.sort_unstable();
            let (lo, hi) = (sorted[0], sorted[sorted.len() - 1]);
            let meets = segments_intersect(v, w, lo, hi);
            let at_point = sorted.iter().any(|&p| on_segment(p, v, w));
            if !meets || at_point {
                return Some((v, w, sorted));
            }
        }
    }
    None
}

/// Same order type up to relabelling, optionally allowing a reflection.
pub fn same_order_type(a: &[Point], b: &[Point], allow_mirror: bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    fn sign(pts: &[Point], i: usize, j: usize, k: usize) -> i128 {
        cross(pts[i], pts[j], pts[k]).signum()
    }
    fn extend(a: &[Point], b: &[Point], flip: i128, assign: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let depth = assign.len();
        if depth == a.len() {
            return true;
        }
        for cand in 0..b.len() {
            if used[cand] {
                continue;
            }
            assign.push(cand);
            let ok = (0..depth)
                .all(|i| (i + 1..depth).all(|j| sign(a, i, j, depth) == flip * sign(b, assign[i], assign[j], cand)));
            if ok {
                used[cand] = true;
                if extend(a, b, flip, assign, used) {
                    return true;
                }
                used[cand] = false;
            }
            assign.pop();
        }
        false
    }
    let try_flip = |flip: i128| extend(a, b, flip, &mut Vec::with_capacity(a.len()), &mut vec![false; a.len()]);
    try_flip(1) || (allow_mirror && try_flip(-1))
}

/// Classifies a point set against the no-4-hole characterisation and
/// reports whether hole-freeness, a crossing-free visibility graph and the
/// structural families agree.
pub fn classify_no_four_hole(points: &[Point]) -> Result<NoFourHoleReport> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 3 {
        return Err(Error::Precondition(format!("{} points, need at least 3", sorted.len())));
    }
    let four_hole = find_k_hole(&sorted, 4)?;
    let crossing_free = visibility_graph(&sorted).is_crossing_free();

    let structural_family = if let Some((line, apex)) = all_but_one_collinear(&sorted) {
        Some(NoFourHoleFamily::AllButOneCollinear { line, apex })
    } else if let Some((v, w, line)) = two_apex_line(&sorted) {
        Some(NoFourHoleFamily::TwoApexLine { v, w, line })
    } else if same_order_type(&sorted, &SIX_POINT_EXCEPTIONAL, true) {
        Some(NoFourHoleFamily::SixPointExceptional(sorted.clone()))
    } else {
        None
    };
    let structural = structural_family.is_some();
    let no_four_hole = four_hole.is_none();
    let family = match (four_hole, structural_family) {
        (Some(h), _) => NoFourHoleFamily::HasFourHole(h),
        (None, Some(f)) => f,
        (None, None) => NoFourHoleFamily::Unclassified,
    };
    Ok(NoFourHoleReport {
        family,
        no_four_hole,
        crossing_free,
        structural,
    })
}
