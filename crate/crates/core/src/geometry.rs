//! Exact predicates on integer points.
//!
//! Coordinates are `i64` limited to `±COORD_LIMIT`; every determinant is
//! evaluated in `i128`, so no predicate ever rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible absolute coordinate. Differences then fit in 63 bits
/// and 2x2 determinants of differences fit in `i128`.
pub const COORD_LIMIT: i64 = 1 << 61;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

impl From<[i64; 2]> for Point {
    fn from([x, y]: [i64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [i64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A set of pairwise distinct points kept in canonical `(x, y)` order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    /// Sorts the input canonically; rejects duplicates and out-of-range
    /// coordinates.
    pub fn new(mut points: Vec<Point>) -> Result<Self> {
        for p in &points {
            for c in [p.x, p.y] {
                if c.unsigned_abs() > COORD_LIMIT as u64 {
                    return Err(Error::CoordinateOutOfRange(c));
                }
            }
        }
        points.sort_unstable();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0]));
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&c| Point::from(c)).collect())
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_vec(self) -> Vec<Point> {
        self.points
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn index_of(&self, p: &Point) -> Option<usize> {
        self.points.binary_search(p).ok()
    }

    /// `true` iff every point of `other` belongs to `self`.
    pub fn is_superset_of(&self, other: &[Point]) -> bool {
        other.iter().all(|p| self.contains(p))
    }

    /// Points of `self` not in `removed`.
    pub fn without(&self, removed: &[Point]) -> PointSet {
        let points = self.points.iter().filter(|p| !removed.contains(p)).copied().collect();
        PointSet { points }
    }
}

impl Deref for PointSet {
    type Target = [Point];

    fn deref(&self) -> &[Point] {
        &self.points
    }
}

impl TryFrom<Vec<Point>> for PointSet {
    type Error = Error;

    fn try_from(points: Vec<Point>) -> Result<Self> {
        PointSet::new(points)
    }
}

impl From<PointSet> for Vec<Point> {
    fn from(set: PointSet) -> Self {
        set.points
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.points.iter()).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Negative,
    Zero,
    Positive,
}

impl Orientation {
    pub fn from_sign(value: i128) -> Self {
        match value.cmp(&0) {
            Ordering::Less => Orientation::Negative,
            Ordering::Equal => Orientation::Zero,
            Ordering::Greater => Orientation::Positive,
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Negative => Orientation::Positive,
            Orientation::Zero => Orientation::Zero,
            Orientation::Positive => Orientation::Negative,
        }
    }
}

/// The exact determinant of `(b - a, c - a)`: positive for a left turn.
#[inline]
pub fn cross(a: Point, b: Point, c: Point) -> i128 {
    let (ux, uy) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (vx, vy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    ux * vy - uy * vx
}

/// Orientation of the ordered triple; the points must be pairwise distinct.
pub fn orientation(a: Point, b: Point, c: Point) -> Result<Orientation> {
    if a == b || a == c {
        return Err(Error::DuplicatePoint(a));
    }
    if b == c {
        return Err(Error::DuplicatePoint(b));
    }
    Ok(Orientation::from_sign(cross(a, b, c)))
}

/// `p` on the closed segment `[v, w]`; also correct when `v == w`.
#[inline]
pub(crate) fn on_segment(p: Point, v: Point, w: Point) -> bool {
    cross(v, w, p) == 0 && p.x >= v.x.min(w.x) && p.x <= v.x.max(w.x) && p.y >= v.y.min(w.y) && p.y <= v.y.max(w.y)
}

/// `p` on the closed segment `[v, w]`, endpoints included.
pub fn on_closed_segment(p: Point, v: Point, w: Point) -> Result<bool> {
    if v == w {
        return Err(Error::Degenerate(format!("segment endpoints coincide at {v}")));
    }
    Ok(on_segment(p, v, w))
}

/// `p` in the closed triangle `conv{a, b, c}`. A collinear triangle is the
/// closed segment covering its three corners.
pub fn in_closed_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let d = cross(a, b, c);
    if d == 0 {
        return on_segment(p, a, b) || on_segment(p, b, c) || on_segment(p, a, c);
    }
    let s = d.signum();
    cross(a, b, p) * s >= 0 && cross(b, c, p) * s >= 0 && cross(c, a, p) * s >= 0
}

/// `p` in the interior of `conv{a, b, c}`; always `false` for collinear corners.
pub fn in_open_triangle(p: Point, a: Point, b: Point, c: Point) -> bool {
    let d = cross(a, b, c);
    if d == 0 {
        return false;
    }
    let s = d.signum();
    cross(a, b, p) * s > 0 && cross(b, c, p) * s > 0 && cross(c, a, p) * s > 0
}

/// Twice the signed area of a polygon given in boundary order
/// (negative for clockwise).
pub fn twice_signed_area(polygon: &[Point]) -> i128 {
    let n = polygon.len();
    (0..n)
        .map(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % n]);
            a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128
        })
        .sum()
}

/// The open segments `ab` and `cd` cross at a single point interior to both.
pub fn segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = cross(a, b, c).signum();
    let o2 = cross(a, b, d).signum();
    let o3 = cross(c, d, a).signum();
    let o4 = cross(c, d, b).signum();
    o1 * o2 < 0 && o3 * o4 < 0
}

/// The closed segments `ab` and `cd` share at least one point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    if segments_cross_properly(a, b, c, d) {
        return true;
    }
    on_segment(c, a, b) || on_segment(d, a, b) || on_segment(a, c, d) || on_segment(b, c, d)
}

pub fn all_collinear(points: &[Point]) -> bool {
    match points {
        [] | [_] | [_, _] => true,
        [a, rest @ ..] => match rest.iter().find(|p| *p != a) {
            None => true,
            Some(&b) => rest.iter().all(|&c| cross(*a, b, c) == 0),
        },
    }
}

pub fn is_general_position(points: &[Point]) -> bool {
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if cross(points[i], points[j], points[k]) == 0 {
                    return false;
                }
            }
        }
    }
    true
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive direction from `a` to `b`, normalised so that `d` and `-d` agree.
fn line_direction(a: Point, b: Point) -> (i64, i64) {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let g = gcd(dx, dy);
    let (dx, dy) = (dx / g, dy / g);
    if dx < 0 || (dx == 0 && dy < 0) {
        (-dx, -dy)
    } else {
        (dx, dy)
    }
}

/// Size of a largest collinear subset together with one witness, listed in
/// canonical order. Among maximum lines the lexicographically least point
/// list wins.
pub fn max_collinear(points: &[Point]) -> Result<(usize, Vec<Point>)> {
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    match sorted.len() {
        0 => return Err(Error::EmptyInput),
        1 | 2 => return Ok((sorted.len(), sorted)),
        _ => {}
    }
    let mut best: Vec<Point> = Vec::new();
    for (i, &anchor) in sorted.iter().enumerate() {
        // Only later points: the anchor is then the least point of its line.
        let mut dirs: Vec<((i64, i64), usize)> = sorted[i + 1..]
            .iter()
            .enumerate()
            .map(|(j, &q)| (line_direction(anchor, q), i + 1 + j))
            .collect();
        if dirs.len() + 1 < best.len() {
            break;
        }
        dirs.sort_unstable();
        for group in dirs.chunk_by(|a, b| a.0 == b.0) {
            let mut line: Vec<Point> = Vec::with_capacity(group.len() + 1);
            line.push(anchor);
            line.extend(group.iter().map(|&(_, j)| sorted[j]));
            if line.len() > best.len() || (line.len() == best.len() && line < best) {
                best = line;
            }
        }
    }
    Ok((best.len(), best))
}

/// A general-position image of `points` that keeps the sign of every
/// non-degenerate triple.
///
/// The `i`-th point in canonical order becomes `M * p + (i, i^2)`. Both
/// postconditions are checked over all triples; on failure `M` is squared.
/// The canonical order is preserved, so the `i`-th output is the image of
/// the `i`-th input.
pub fn perturb_general_position(points: &PointSet) -> Result<PointSet> {
    let n = points.len() as i64;
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let span = points.iter().flat_map(|p| [p.x.abs(), p.y.abs()]).max().unwrap_or(0);
    let mut scale: i64 = 8 * (span + 1) * (n * n + 1) + 2;
    loop {
        let image = scaled_offsets(points, scale)?;
        if perturbation_is_valid(points, &image) {
            return PointSet::new(image);
        }
        scale = scale.checked_mul(scale).ok_or(Error::CoordinateOutOfRange(scale))?;
    }
}

fn scaled_offsets(points: &[Point], scale: i64) -> Result<Vec<Point>> {
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let i = i as i64;
            let x = p.x.checked_mul(scale).and_then(|v| v.checked_add(i));
            let y = p.y.checked_mul(scale).and_then(|v| v.checked_add(i * i));
            match (x, y) {
                (Some(x), Some(y)) if x.abs() <= COORD_LIMIT && y.abs() <= COORD_LIMIT => Ok(Point::new(x, y)),
                _ => Err(Error::CoordinateOutOfRange(scale)),
            }
        })
        .collect()
}

fn perturbation_is_valid(original: &[Point], image: &[Point]) -> bool {
    let n = original.len();
    if image.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let before = cross(original[i], original[j], original[k]).signum();
                let after = cross(image[i], image[j], image[k]).signum();
                if after == 0 || (before != 0 && before != after) {
                    return false;
                }
            }
        }
    }
    true
}
