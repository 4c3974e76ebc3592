mod common;

use common::*;
use pentagon::convexity::convex_hull;
use pentagon::extractor::{extract, ExtractionParams, Outcome, TraceStep};
use pentagon::holes::is_hole;

fn run(points: &[pentagon::Point], params: &ExtractionParams) -> pentagon::extractor::ExtractionResult {
    let r = extract(points, params).unwrap();
    if let Outcome::Hole(h) = &r.outcome {
        assert!(is_hole(points, h.vertices()).unwrap());
    }
    r
}

#[test]
fn terminal_pentagon() {
    let p = pts(TERMINAL_HOLE);
    let r = run(&p, &ExtractionParams::new(4));
    assert!(r.fired("terminal_hole"), "{:#?}", r.trace);
    assert!(!r.fired("fallback"));
    let step = r.trace.iter().find_map(|s| match s {
        TraceStep::TerminalHole { i, j, hole, .. } => Some((*i, *j, hole.clone())),
        _ => None,
    });
    let (i, j, hole) = step.unwrap();
    assert_eq!((i, j), (2, 3));
    assert!(is_hole(&p, &hole).unwrap());
}

#[test]
fn follower_triangle_not_empty() {
    let r = run(&pts(NONEMPTY_FOLLOWER), &ExtractionParams::new(4));
    assert!(r.fired("nonempty_follower"), "{:#?}", r.trace);
}

#[test]
fn unaligned_follower() {
    let r = run(&pts(UNALIGNED_FOLLOWER), &ExtractionParams::new(4));
    assert!(r.fired("unaligned_follower"), "{:#?}", r.trace);
    assert!(r.trace.iter().any(|s| matches!(
        s,
        TraceStep::Follower {
            alignment: pentagon::extractor::Alignment::None,
            ..
        }
    )));
}

#[test]
fn window_without_inner_point() {
    let r = run(&pts(WINDOW), &ExtractionParams::new(3));
    assert!(r.fired("window_harvest"), "{:#?}", r.trace);
}

#[test]
fn non_minimal_outer_layer_restarts() {
    let p = pts(RESTART);
    let mut params = ExtractionParams::new(3);
    params.k = Some(5);
    params.outer_layer = Some(convex_hull(&p).boundary);
    let r = run(&p, &params);
    assert!(r.fired("restart"), "{:#?}", r.trace);
    assert!(r.has_certificate());
}

#[test]
fn every_follower_quad_is_a_four_hole() {
    for fixture in [TERMINAL_HOLE, NONEMPTY_FOLLOWER, UNALIGNED_FOLLOWER] {
        let p = pts(fixture);
        let r = run(&p, &ExtractionParams::new(4));
        for step in &r.trace {
            if let TraceStep::FollowerQuad { ok, points } = step {
                assert!(*ok);
                assert!(is_hole(&p, points).unwrap());
            }
        }
    }
}

#[test]
fn trace_round_trips_through_json() {
    let r = run(&pts(TERMINAL_HOLE), &ExtractionParams::new(4));
    let text = serde_json::to_string(&r.trace).unwrap();
    let back: Vec<TraceStep> = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r.trace);
}
