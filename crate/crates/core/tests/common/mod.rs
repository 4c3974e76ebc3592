#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pentagon::cli::format_points;
use pentagon::Point;

pub fn pts(coords: &[(i64, i64)]) -> Vec<Point> {
    coords.iter().map(|&c| Point::from(c)).collect()
}

/// ell = 4: the walk ends with a left-aligned arc followed by one that is
/// not, and the terminal pentagon is empty.
pub const TERMINAL_HOLE: &[(i64, i64)] = &[
    (0, 1),
    (0, 6),
    (1, 1),
    (2, 13),
    (4, 0),
    (4, 3),
    (5, 4),
    (6, 5),
    (6, 10),
    (6, 12),
    (7, 10),
    (7, 13),
    (9, 0),
    (10, 0),
    (10, 11),
    (11, 3),
    (11, 4),
    (12, 3),
    (12, 12),
    (12, 14),
    (13, 1),
    (13, 11),
    (13, 14),
    (14, 5),
];

/// ell = 4: a follower whose own triangle towards the apex is not empty.
pub const NONEMPTY_FOLLOWER: &[(i64, i64)] = &[
    (0, 14),
    (1, 4),
    (1, 6),
    (1, 12),
    (2, 13),
    (3, 3),
    (3, 10),
    (4, 2),
    (5, 11),
    (5, 15),
    (7, 7),
    (7, 15),
    (8, 6),
    (8, 9),
    (8, 11),
    (9, 4),
    (9, 12),
    (10, 0),
    (10, 2),
    (11, 1),
    (11, 8),
    (12, 10),
    (13, 7),
    (15, 2),
];

/// ell = 4: a follower with neither endpoint on the segments to the apex.
pub const UNALIGNED_FOLLOWER: &[(i64, i64)] = &[
    (0, 9),
    (0, 13),
    (1, 5),
    (1, 9),
    (2, 3),
    (2, 8),
    (2, 14),
    (3, 1),
    (3, 5),
    (3, 6),
    (4, 2),
    (4, 3),
    (4, 5),
    (5, 2),
    (5, 14),
    (6, 6),
    (7, 11),
    (8, 6),
    (8, 12),
    (10, 7),
    (11, 2),
    (11, 13),
    (14, 3),
    (14, 4),
];

/// ell = 3: five consecutive outer points whose hull misses the next layer.
pub const WINDOW: &[(i64, i64)] = &[(1, 5), (4, 11), (4, 14), (7, 13), (11, 1), (14, 4), (16, 16)];

/// ell = 3, k = 5: starting from the full hull, no outer arc is empty.
pub const RESTART: &[(i64, i64)] = &[
    (5, 3),
    (8, 8),
    (10, 8),
    (11, 12),
    (13, 5),
    (13, 21),
    (16, 17),
    (16, 33),
    (17, 31),
    (19, 22),
    (22, 0),
    (29, 3),
    (29, 4),
    (34, 18),
    (35, 5),
    (35, 23),
];

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pentagon")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

pub fn write_points(dir: &Path, name: &str, points: &[Point]) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format_points(points)).unwrap();
    path
}
