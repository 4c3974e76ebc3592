//! Finds `ell` collinear points or a 5-hole by walking nested convex layers.
//!
//! The outer layer `A_1` is a k-minimal convex-position subset and
//! `A_2 .. A_ell` are the layers inside it. Starting from an arc of `A_1`
//! whose triangle towards an innermost point `z` holds no point of `A_2`,
//! the walk follows that arc inward layer by layer. Each step either yields
//! a 5-hole, or constrains the next arc to lie on the segments towards `z`;
//! too many such steps force `ell` collinear points. Below the size where
//! the walk is guaranteed to succeed it may run out, in which case a
//! complete 5-hole search decides.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::threshold_k;
use crate::convexity::{
    convex_hull, k_minimal_convex_subset, k_minimal_from, layers_from_outer, max_convex_position_subset,
    LayerDecomposition,
};
use crate::error::{Error, Result};
use crate::geometry::{cross, in_closed_triangle, in_open_triangle, max_collinear, on_segment, Point};
use crate::holes::{check_hole, find_k_hole, CollinearCertificate, HoleCertificate};

/// An oriented edge between clockwise-consecutive points of layer `layer`
/// (1-based). `empty` means the open triangle towards `z` holds no point of
/// the next layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub from: Point,
    pub to: Point,
    pub layer: usize,
    pub empty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alignment {
    /// `p` on segment `xz` and `q` on segment `yz`.
    Double,
    /// Only `p` on segment `xz`.
    Left,
    /// Only `q` on segment `yz`.
    Right,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionParams {
    pub ell: usize,
    /// Size of the outer convex-position layer; `None` uses `threshold_k(ell)`
    /// and shrinks it to what the input supports.
    pub k: Option<usize>,
    pub oracle_fallback: bool,
    /// Start from this outer layer instead of a k-minimal one. It is
    /// re-minimalized only if the walk finds it is not minimal.
    pub outer_layer: Option<Vec<Point>>,
}

impl ExtractionParams {
    pub fn new(ell: usize) -> Self {
        ExtractionParams {
            ell,
            k: None,
            oracle_fallback: true,
            outer_layer: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "step", rename_all = "snake_case")]
pub enum TraceStep {
    CollinearCheck {
        max_collinear: usize,
        ell: usize,
    },
    OuterSize {
        requested: String,
        used: usize,
        reduced: bool,
    },
    TooFewConvex {
        largest: usize,
    },
    Layers {
        sizes: Vec<usize>,
    },
    WindowViolation {
        layer: usize,
        window: Vec<Point>,
        harvested: Option<Vec<Point>>,
    },
    EmptyLayer {
        layer: usize,
    },
    Apex {
        z: Point,
    },
    Restart {
        attempt: usize,
        outer_size: usize,
    },
    StartArc {
        arc: Arc,
    },
    Follower {
        arc: Arc,
        alignment: Alignment,
    },
    FollowerQuad {
        ok: bool,
        points: Vec<Point>,
    },
    NonemptyFollower {
        hole: Vec<Point>,
        verified: bool,
    },
    UnalignedFollower {
        hole: Vec<Point>,
        verified: bool,
        degenerate: bool,
    },
    TerminalHole {
        i: usize,
        j: usize,
        side: Side,
        hole: Vec<Point>,
        verified: bool,
    },
    ChainCollinear {
        points: Vec<Point>,
    },
    WalkExhausted {
        reason: String,
    },
    Fallback {
        found: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Collinear(CollinearCertificate),
    Hole(HoleCertificate),
    /// The complete fallback search confirmed there is no 5-hole.
    Absent,
    /// The walk found nothing and the fallback was disabled.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    pub outcome: Outcome,
    pub trace: Vec<TraceStep>,
}

impl ExtractionResult {
    pub fn has_certificate(&self) -> bool {
        matches!(self.outcome, Outcome::Collinear(_) | Outcome::Hole(_))
    }

    /// The last layer decomposition recorded in the trace.
    pub fn layer_sizes(&self) -> Option<&[usize]> {
        self.trace.iter().rev().find_map(|s| match s {
            TraceStep::Layers { sizes } => Some(sizes.as_slice()),
            _ => None,
        })
    }

    pub fn fired(&self, tag: &str) -> bool {
        self.trace.iter().any(|s| match (tag, s) {
            ("nonempty_follower", TraceStep::NonemptyFollower { verified, .. })
            | ("unaligned_follower", TraceStep::UnalignedFollower { verified, .. })
            | ("terminal_hole", TraceStep::TerminalHole { verified, .. }) => *verified,
            ("window_harvest", TraceStep::WindowViolation { harvested, .. }) => harvested.is_some(),
            ("restart", TraceStep::Restart { .. }) => true,
            ("fallback", TraceStep::Fallback { .. }) => true,
            _ => false,
        })
    }
}

fn layer(decomp: &LayerDecomposition, i: usize) -> &[Point] {
    &decomp.layers[i - 1]
}

/// The clockwise arcs of layer `i` (1-based), with emptiness judged against
/// layer `i + 1` and the apex `z`.
pub fn arcs_of_layer(decomp: &LayerDecomposition, i: usize) -> Result<Vec<Arc>> {
    if i == 0 || i >= decomp.ell {
        return Err(Error::InvalidParameter(format!("layer {i} has no arcs")));
    }
    let points = layer(decomp, i);
    if points.len() < 3 || convex_hull(points).is_degenerate() {
        return Err(Error::Precondition(format!(
            "layer {i} has {} points, arcs need 3",
            points.len()
        )));
    }
    let z = decomp
        .apex
        .ok_or_else(|| Error::Precondition("innermost layer is empty".into()))?;
    let next = layer(decomp, i + 1);
    let m = points.len();
    Ok((0..m)
        .map(|t| {
            let (from, to) = (points[t], points[(t + 1) % m]);
            let empty = !next.iter().any(|&p| in_open_triangle(p, from, to, z));
            Arc {
                from,
                to,
                layer: i,
                empty,
            }
        })
        .collect())
}

/// The arc of the next layer crossed by the open triangle of the empty arc
/// `arc` towards `z`.
pub fn follower(arc: &Arc, decomp: &LayerDecomposition) -> Result<Arc> {
    if !arc.empty {
        return Err(Error::Precondition("follower of an arc that is not empty".into()));
    }
    if arc.layer + 1 >= decomp.ell {
        return Err(Error::Precondition(format!(
            "layer {} has no inner layer with arcs",
            arc.layer
        )));
    }
    let arcs = arcs_of_layer(decomp, arc.layer + 1)?;
    let z = decomp.apex.expect("checked by arcs_of_layer");
    // Any direction strictly inside the angle x z y.
    let dir = Point::new(arc.from.x + arc.to.x - z.x, arc.from.y + arc.to.y - z.y);
    arcs.into_iter()
        .find(|a| cross(z, a.from, dir) <= 0 && cross(z, dir, a.to) < 0)
        .ok_or_else(|| Error::Degenerate("no inner arc crosses the triangle".into()))
}

pub fn classify_alignment(xy: &Arc, pq: &Arc, z: Point) -> Alignment {
    let left = on_segment(pq.from, xy.from, z);
    let right = on_segment(pq.to, xy.to, z);
    match (left, right) {
        (true, true) => Alignment::Double,
        (true, false) => Alignment::Left,
        (false, true) => Alignment::Right,
        (false, false) => Alignment::None,
    }
}

/// The candidate closest to line `pq`, ties broken by canonical order.
fn closest_to_line(p: Point, q: Point, candidates: impl Iterator<Item = Point>) -> Option<Point> {
    candidates.min_by_key(|&r| (cross(p, q, r).abs(), r))
}

fn verified_hole(points: &[Point], candidate: &[Point]) -> Option<HoleCertificate> {
    (candidate.len() == 5 && check_hole(points, candidate).is_ok())
        .then(|| HoleCertificate::new(points, candidate).expect("checked"))
}

enum Walk {
    Found(Outcome),
    NotMinimal,
    Exhausted,
}

struct Extraction<'a> {
    points: &'a [Point],
    ell: usize,
    trace: Vec<TraceStep>,
}

impl<'a> Extraction<'a> {
    /// Windows of `2 ell - 1` consecutive points of each layer whose hull
    /// misses the next layer; such a window must hold a 5-hole if the input
    /// has fewer than `ell` collinear points.
    fn windows(&mut self, decomp: &LayerDecomposition) -> Option<HoleCertificate> {
        let width = 2 * self.ell - 1;
        for i in 2..=self.ell {
            let outer = layer(decomp, i - 1);
            let inner = layer(decomp, i);
            if inner.is_empty() {
                self.trace.push(TraceStep::EmptyLayer { layer: i });
            }
            let windows: Vec<Vec<Point>> = if outer.len() < width {
                if inner.is_empty() && outer.len() >= 5 {
                    vec![outer.to_vec()]
                } else {
                    vec![]
                }
            } else {
                (0..outer.len())
                    .map(|s| (0..width).map(|t| outer[(s + t) % outer.len()]).collect())
                    .collect()
            };
            for window in windows {
                let hull = convex_hull(&window);
                if inner.iter().any(|&p| hull.contains(p)) {
                    continue;
                }
                let local: Vec<Point> = self.points.iter().copied().filter(|&p| hull.contains(p)).collect();
                let hole = find_k_hole(&local, 5)
                    .expect("k = 5 is valid")
                    .map(|h| h.vertices().to_vec());
                self.trace.push(TraceStep::WindowViolation {
                    layer: i - 1,
                    window,
                    harvested: hole.clone(),
                });
                if let Some(found) = hole.and_then(|h| verified_hole(self.points, &h)) {
                    return Some(found);
                }
            }
            if inner.is_empty() {
                break;
            }
        }
        None
    }

    fn walk(&mut self, decomp: &LayerDecomposition) -> Walk {
        let ell = self.ell;
        let Some(z) = decomp.apex else {
            self.trace.push(TraceStep::WalkExhausted {
                reason: "innermost layer is empty".into(),
            });
            return Walk::Exhausted;
        };
        self.trace.push(TraceStep::Apex { z });
        let arcs = match arcs_of_layer(decomp, 1) {
            Ok(arcs) => arcs,
            Err(e) => {
                self.trace.push(TraceStep::WalkExhausted { reason: e.to_string() });
                return Walk::Exhausted;
            }
        };
        let starts: Vec<Arc> = arcs.into_iter().filter(|a| a.empty).collect();
        if starts.is_empty() {
            return Walk::NotMinimal;
        }
        for start in starts {
            self.trace.push(TraceStep::StartArc { arc: start });
            if let Some(outcome) = self.follow(decomp, start, z) {
                return Walk::Found(outcome);
            }
        }
        self.trace.push(TraceStep::WalkExhausted {
            reason: format!("no certificate from any empty arc of layer 1 (ell = {ell})"),
        });
        Walk::Exhausted
    }

    /// Follows one chain `x_1 y_1, x_2 y_2, ..`; `chain[i - 1]` is the arc of
    /// layer `i` and `alignments[i - 1]` its alignment relative to the arc
    /// before it.
    fn follow(&mut self, decomp: &LayerDecomposition, start: Arc, z: Point) -> Option<Outcome> {
        let ell = self.ell;
        let mut chain = vec![start];
        let mut alignments = vec![Alignment::Double];
        for i in 2..ell {
            let prev = chain[i - 2];
            let next = match follower(&prev, decomp) {
                Ok(arc) => arc,
                Err(e) => {
                    self.trace.push(TraceStep::WalkExhausted { reason: e.to_string() });
                    return None;
                }
            };
            let alignment = classify_alignment(&prev, &next, z);
            self.trace.push(TraceStep::Follower { arc: next, alignment });
            let (x, y, p, q) = (prev.from, prev.to, next.from, next.to);

            let quad = [x, y, p, q];
            let four_ok = check_hole(self.points, &quad).is_ok();
            self.trace.push(TraceStep::FollowerQuad {
                ok: four_ok,
                points: quad.to_vec(),
            });
            if !four_ok {
                return None;
            }

            if !next.empty {
                let deeper = layer(decomp, i + 1);
                let r = closest_to_line(p, q, deeper.iter().copied().filter(|&r| in_open_triangle(r, p, q, z)))
                    .expect("arc is not empty");
                let hole = [x, y, p, q, r];
                let found = verified_hole(self.points, &hole);
                self.trace.push(TraceStep::NonemptyFollower {
                    hole: hole.to_vec(),
                    verified: found.is_some(),
                });
                return found.map(Outcome::Hole);
            }

            if alignment == Alignment::None {
                let degenerate = cross(p, q, z) == 0;
                let d = if degenerate {
                    None
                } else {
                    closest_to_line(
                        p,
                        q,
                        self.points
                            .iter()
                            .copied()
                            .filter(|&r| r != p && r != q && in_closed_triangle(r, p, q, z)),
                    )
                };
                let hole: Vec<Point> = match d {
                    Some(r) => vec![x, y, p, q, r],
                    None => vec![x, y, p, q],
                };
                let found = verified_hole(self.points, &hole);
                self.trace.push(TraceStep::UnalignedFollower {
                    hole,
                    verified: found.is_some(),
                    degenerate,
                });
                return found.map(Outcome::Hole);
            }
            chain.push(next);
            alignments.push(alignment);
        }
        self.terminal(&chain, &alignments, z)
    }

    /// The end of the walk: locate the first arc that is not double-aligned
    /// and the first later arc that breaks its alignment.
    fn terminal(&mut self, chain: &[Arc], alignments: &[Alignment], z: Point) -> Option<Outcome> {
        let ell = self.ell;
        let last = chain.len();
        let first_single = (2..=ell.saturating_sub(2).min(last)).find(|&i| alignments[i - 1] != Alignment::Double);
        let Some(i) = first_single else {
            // Every arc through layer ell - 2 is double-aligned, so both
            // chains run straight to z.
            return self
                .chain_collinear(chain, alignments, z, Side::Left)
                .or_else(|| self.chain_collinear(chain, alignments, z, Side::Right));
        };
        let side = if alignments[i - 1] == Alignment::Left {
            Side::Left
        } else {
            Side::Right
        };
        let keeps = |a: Alignment| match side {
            Side::Left => a == Alignment::Left,
            Side::Right => a == Alignment::Right,
        };
        let Some(j) = (i + 1..=last).find(|&j| !keeps(alignments[j - 1])) else {
            return self.chain_collinear(chain, alignments, z, side);
        };
        let (a, b, c) = (chain[j - 3], chain[j - 2], chain[j - 1]);
        let hole = match side {
            Side::Left => vec![a.from, a.to, b.to, c.to, b.from],
            Side::Right => vec![a.to, a.from, b.from, c.from, b.to],
        };
        let found = verified_hole(self.points, &hole);
        self.trace.push(TraceStep::TerminalHole {
            i,
            j,
            side,
            hole,
            verified: found.is_some(),
        });
        found.map(Outcome::Hole)
    }

    /// The points of one side of the chain that lie on the line to `z`,
    /// emitted when they reach `ell`.
    fn chain_collinear(&mut self, chain: &[Arc], alignments: &[Alignment], z: Point, side: Side) -> Option<Outcome> {
        let on_side = |a: Alignment| match side {
            Side::Left => matches!(a, Alignment::Double | Alignment::Left),
            Side::Right => matches!(a, Alignment::Double | Alignment::Right),
        };
        let mut points = vec![z];
        for (arc, &alignment) in chain.iter().zip(alignments) {
            if !on_side(alignment) {
                break;
            }
            points.push(match side {
                Side::Left => arc.from,
                Side::Right => arc.to,
            });
        }
        self.trace.push(TraceStep::ChainCollinear { points: points.clone() });
        if points.len() < self.ell {
            return None;
        }
        CollinearCertificate::new(&points[..self.ell])
            .ok()
            .map(Outcome::Collinear)
    }
}

/// Runs the layer walk on `points`. Every certificate returned has passed
/// its verifier.
pub fn extract(points: &[Point], params: &ExtractionParams) -> Result<ExtractionResult> {
    let ell = params.ell;
    if ell < 2 {
        return Err(Error::InvalidParameter(format!("ell = {ell} must be at least 2")));
    }
    let mut points = points.to_vec();
    points.sort_unstable();
    points.dedup();
    if points.len() < 3 {
        return Err(Error::Precondition(format!("{} points, need at least 3", points.len())));
    }
    let mut run = Extraction {
        points: &points,
        ell,
        trace: Vec::new(),
    };

    let (collinear, witness) = max_collinear(&points)?;
    run.trace.push(TraceStep::CollinearCheck {
        max_collinear: collinear,
        ell,
    });
    if collinear >= ell {
        let cert = CollinearCertificate::new(&witness[..ell])?;
        return Ok(ExtractionResult {
            outcome: Outcome::Collinear(cert),
            trace: run.trace,
        });
    }

    let outcome = walk_layers(&mut run, params)?;
    let outcome = match outcome {
        Some(o) => o,
        None if params.oracle_fallback => {
            let found = find_k_hole(&points, 5)?;
            run.trace.push(TraceStep::Fallback { found: found.is_some() });
            match found {
                Some(h) => Outcome::Hole(h),
                None => Outcome::Absent,
            }
        }
        None => Outcome::Inconclusive,
    };
    if let Outcome::Hole(h) = &outcome {
        assert!(
            check_hole(&points, h.vertices()).is_ok(),
            "emitted hole failed verification"
        );
    }
    Ok(ExtractionResult {
        outcome,
        trace: run.trace,
    })
}

fn walk_layers(run: &mut Extraction<'_>, params: &ExtractionParams) -> Result<Option<Outcome>> {
    let points = run.points;
    let ell = run.ell;
    let requested: BigUint = match params.k {
        Some(k) => BigUint::from(k),
        None => threshold_k(ell as u32)?,
    };
    let largest = max_convex_position_subset(points).len();
    let k = if requested <= BigUint::from(largest) {
        usize::try_from(&requested).expect("bounded by the input size")
    } else {
        largest
    };
    run.trace.push(TraceStep::OuterSize {
        requested: requested.to_string(),
        used: k,
        reduced: BigUint::from(k) != requested,
    });
    if k < 5 {
        run.trace.push(TraceStep::TooFewConvex { largest });
        return Ok(None);
    }

    let mut outer = match &params.outer_layer {
        Some(seed) => seed.clone(),
        None => k_minimal_convex_subset(points, k)?,
    };
    for attempt in 0..=points.len() {
        let decomp = layers_from_outer(points, &outer, ell);
        run.trace.push(TraceStep::Layers { sizes: decomp.sizes() });
        if let Some(hole) = run.windows(&decomp) {
            return Ok(Some(Outcome::Hole(hole)));
        }
        match run.walk(&decomp) {
            Walk::Found(outcome) => return Ok(Some(outcome)),
            Walk::Exhausted => return Ok(None),
            Walk::NotMinimal => {
                let tighter = k_minimal_from(points, &decomp.layers[0], k)?;
                let mut current = decomp.layers[0].clone();
                current.sort_unstable();
                if tighter == current || attempt == points.len() {
                    run.trace.push(TraceStep::WalkExhausted {
                        reason: "no empty arc on a k-minimal outer layer".into(),
                    });
                    return Ok(None);
                }
                run.trace.push(TraceStep::Restart {
                    attempt: attempt + 1,
                    outer_size: tighter.len(),
                });
                outer = tighter;
            }
        }
    }
    Ok(None)
}
