//! Brute-force reference implementations. Slow, exhaustive and deliberately
//! independent of the hull and dynamic-programming code: position tests use
//! supporting lines and Carathéodory triangles directly.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::geometry::{cross, in_closed_triangle, on_segment, Point};
use crate::holes::for_each_combination;

/// Size limits past which an oracle refuses instead of running.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    /// Hole search with `k <= 5`.
    pub holes_small: usize,
    /// Hole search with `k >= 6`.
    pub holes_large: usize,
    pub convex_subsets: usize,
    pub k_minimality: usize,
    pub collinear: usize,
    pub time_limit: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            holes_small: 30,
            holes_large: 20,
            convex_subsets: 12,
            k_minimality: 14,
            collinear: 200,
            time_limit: None,
        }
    }
}

impl OracleBudget {
    /// No size limits; for explicitly slow checks.
    pub fn unlimited() -> Self {
        OracleBudget {
            holes_small: usize::MAX,
            holes_large: usize::MAX,
            convex_subsets: usize::MAX,
            k_minimality: usize::MAX,
            collinear: usize::MAX,
            time_limit: None,
        }
    }

    fn admit(task: &'static str, size: usize, limit: usize) -> Result<()> {
        if size > limit {
            return Err(Error::BudgetExceeded { task, size, limit });
        }
        Ok(())
    }

    fn clock(&self, task: &'static str) -> Clock {
        Clock {
            task,
            deadline: self.time_limit.map(|d| (Instant::now() + d, d)),
        }
    }

    pub fn k_hole(&self, points: &[Point], k: usize) -> Result<Option<Vec<Point>>> {
        let limit = if k <= 5 { self.holes_small } else { self.holes_large };
        Self::admit("k-hole search", points.len(), limit)?;
        if k < 3 {
            return Err(Error::InvalidParameter(format!(
                "k = {k}: holes have at least 3 vertices"
            )));
        }
        let pts = canonical(points);
        let clock = self.clock("k-hole search");
        let mut found = None;
        let mut timed_out = None;
        for_each_combination(pts.len(), k, |idx| {
            if let Err(e) = clock.check() {
                timed_out = Some(e);
                return false;
            }
            let subset: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
            if strictly_convex(&subset) && hull_is_empty(&pts, &subset) {
                found = Some(subset);
                return false;
            }
            true
        });
        match timed_out {
            Some(e) => Err(e),
            None => Ok(found),
        }
    }

    pub fn max_convex_subset(&self, points: &[Point], strict: bool) -> Result<usize> {
        Self::admit("convex subset search", points.len(), self.convex_subsets)?;
        let pts = canonical(points);
        let clock = self.clock("convex subset search");
        let test = if strict { strictly_convex } else { convex };
        let mut best = pts.len().min(2);
        for size in 3..=pts.len() {
            let mut hit = false;
            for_each_combination(pts.len(), size, |idx| {
                let subset: Vec<Point> = idx.iter().map(|&i| pts[i]).collect();
                hit = test(&subset);
                !hit
            });
            clock.check()?;
            if !hit {
                break;
            }
            best = size;
        }
        Ok(best)
    }

    /// `x` is in convex position with at least `k` points, and no `k` points
    /// of `points` in convex position span a hull strictly inside `conv(x)`.
    pub fn k_minimality(&self, points: &[Point], x: &[Point], k: usize) -> Result<bool> {
        Self::admit("k-minimality check", points.len(), self.k_minimality)?;
        let pts = canonical(points);
        let x = canonical(x);
        if x.len() < k || !convex(&x) {
            return Ok(false);
        }
        let corners: Vec<Point> = x.iter().copied().filter(|&p| is_corner(&x, p)).collect();
        let inside: Vec<Point> = pts.iter().copied().filter(|&p| in_hull(&x, p)).collect();
        let clock = self.clock("k-minimality check");
        let mut witness = false;
        for_each_combination(inside.len(), k, |idx| {
            let y: Vec<Point> = idx.iter().map(|&i| inside[i]).collect();
            if convex(&y) && corners.iter().any(|&c| !in_hull(&y, c)) {
                witness = true;
            }
            !witness
        });
        clock.check()?;
        Ok(!witness)
    }

    /// Largest number of collinear points, by scanning every pair's line.
    pub fn max_collinear(&self, points: &[Point]) -> Result<usize> {
        Self::admit("collinear scan", points.len(), self.collinear)?;
        let pts = canonical(points);
        let mut best = pts.len().min(2);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let on_line = pts.iter().filter(|&&p| cross(pts[i], pts[j], p) == 0).count();
                best = best.max(on_line);
            }
        }
        Ok(best)
    }
}

struct Clock {
    task: &'static str,
    deadline: Option<(Instant, Duration)>,
}

impl Clock {
    fn check(&self) -> Result<()> {
        match self.deadline {
            Some((at, limit)) if Instant::now() > at => Err(Error::BudgetExceeded {
                task: self.task,
                size: limit.as_secs() as usize,
                limit: limit.as_secs() as usize,
            }),
            _ => Ok(()),
        }
    }
}

fn canonical(points: &[Point]) -> Vec<Point> {
    let mut v = points.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Some line through `p` and another point of `set` has all of `set` on one
/// closed side.
fn on_hull_boundary(set: &[Point], p: Point) -> bool {
    if set.len() <= 2 {
        return true;
    }
    set.iter().filter(|&&q| q != p).any(|&q| {
        let signs: Vec<i128> = set.iter().map(|&r| cross(p, q, r).signum()).collect();
        signs.iter().all(|&s| s >= 0) || signs.iter().all(|&s| s <= 0)
    })
}

/// `p` is not in the convex hull of the other points of `set`.
fn is_corner(set: &[Point], p: Point) -> bool {
    let others: Vec<Point> = set.iter().copied().filter(|&q| q != p).collect();
    !in_hull(&others, p)
}

/// Carathéodory: `p` lies in `conv(set)` iff it lies in a closed triangle or
/// on a closed segment of points of `set`.
fn in_hull(set: &[Point], p: Point) -> bool {
    let n = set.len();
    if set.contains(&p) {
        return true;
    }
    for i in 0..n {
        for j in i + 1..n {
            if on_segment(p, set[i], set[j]) {
                return true;
            }
            for l in j + 1..n {
                if cross(set[i], set[j], set[l]) != 0 && in_closed_triangle(p, set[i], set[j], set[l]) {
                    return true;
                }
            }
        }
    }
    false
}

fn convex(set: &[Point]) -> bool {
    set.iter().all(|&p| on_hull_boundary(set, p))
}

fn strictly_convex(set: &[Point]) -> bool {
    set.iter().all(|&p| is_corner(set, p))
}

fn hull_is_empty(points: &[Point], subset: &[Point]) -> bool {
    points.iter().all(|p| subset.contains(p) || !in_hull(subset, *p))
}

pub fn oracle_k_hole(points: &[Point], k: usize) -> Result<Option<Vec<Point>>> {
    OracleBudget::default().k_hole(points, k)
}

pub fn oracle_max_convex_subset(points: &[Point], strict: bool) -> Result<usize> {
    OracleBudget::default().max_convex_subset(points, strict)
}

pub fn oracle_k_minimality(points: &[Point], x: &[Point], k: usize) -> Result<bool> {
    OracleBudget::default().k_minimality(points, x, k)
}

pub fn oracle_max_collinear(points: &[Point]) -> Result<usize> {
    OracleBudget::default().max_collinear(points)
}

pub fn oracle_is_convex(points: &[Point]) -> bool {
    convex(&canonical(points))
}

pub fn oracle_is_strictly_convex(points: &[Point]) -> bool {
    strictly_convex(&canonical(points))
}

/// Independent hole test used when auditing certificates.
pub fn oracle_is_hole(points: &[Point], x: &[Point]) -> bool {
    let x = canonical(x);
    x.len() >= 3 && x.iter().all(|p| points.contains(p)) && strictly_convex(&x) && hull_is_empty(points, &x)
}
