//! Named image families and the fixed example images.

use crate::error::{Error, Result};
use crate::image::{DigitalImage, Point};

/// `[a, b]` in `Z` with `c_1` adjacency.
pub fn interval(a: i64, b: i64) -> Result<DigitalImage> {
    if a > b {
        return Err(Error::InvalidParameter(format!("interval needs a <= b, got [{a},{b}]")));
    }
    let points = (a..=b).map(|x| Point(vec![x])).collect();
    DigitalImage::from_points(format!("interval({a},{b})"), points, 1)
}

/// The digital `n`-cycle: `x_i` adjacent only to `x_{i±1 mod n}`.
pub fn cycle(n: usize) -> Result<DigitalImage> {
    if n == 0 {
        return Err(Error::InvalidParameter("cycle needs n >= 1".into()));
    }
    let edges: Vec<(usize, usize)> = if n == 1 {
        Vec::new()
    } else {
        (0..n).map(|i| (i, (i + 1) % n)).collect()
    };
    DigitalImage::from_edges(format!("cycle({n})"), n, &edges)
}

/// `[1,a] x [1,b]` with `c_u`, points in lexicographic order.
pub fn unit_box(a: i64, b: i64, u: usize) -> Result<DigitalImage> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidParameter(format!("box needs a,b >= 1, got {a},{b}")));
    }
    if !(1..=2).contains(&u) {
        return Err(Error::AdjacencyOutOfRange { u, max: 2 });
    }
    let mut points = Vec::new();
    for x in 1..=a {
        for y in 1..=b {
            points.push(Point(vec![x, y]));
        }
    }
    DigitalImage::from_points(format!("box({a},{b},{u})"), points, u)
}

/// `{0,1}^3` with `c_1`.
pub fn cube() -> DigitalImage {
    let mut points = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                points.push(Point(vec![x, y, z]));
            }
        }
    }
    DigitalImage::from_points("cube", points, 1).expect("cube is valid")
}

/// Two 6-point simple closed curves in `Z^2` sharing the origin, with 8-adjacency.
/// Index 0 is the shared point, 1..=5 the right loop `a_1..a_5`, 6..=10 the left loop `b_1..b_5`.
pub fn wedge_cycles_8() -> DigitalImage {
    let coords: [[i64; 2]; 11] = [
        [0, 0],
        [1, -1],
        [2, -1],
        [3, 0],
        [2, 1],
        [1, 1],
        [-1, -1],
        [-2, -1],
        [-3, 0],
        [-2, 1],
        [-1, 1],
    ];
    let points = coords.iter().map(|c| Point(c.to_vec())).collect();
    DigitalImage::from_points("wedge_cycles_8", points, 2).expect("valid preset")
}

fn sorted_points(mut pts: Vec<[i64; 2]>) -> Vec<Point> {
    pts.sort();
    pts.into_iter().map(|c| Point(c.to_vec())).collect()
}

/// `([0,6] x {0,2}) ∪ {(0,1),(2,1),(4,1),(6,1)}` with 4-adjacency (18 points).
pub fn fig_xexample() -> DigitalImage {
    let mut pts: Vec<[i64; 2]> = (0..=6).flat_map(|x| [[x, 0], [x, 2]]).collect();
    pts.extend([[0, 1], [2, 1], [4, 1], [6, 1]]);
    DigitalImage::from_points("fig_xexample", sorted_points(pts), 1).expect("valid preset")
}

/// `([0,5] x {0,2}) ∪ {(0,1),(2,1),(5,1)}` with 4-adjacency (15 points).
pub fn fig_sexample() -> DigitalImage {
    let mut pts: Vec<[i64; 2]> = (0..=5).flat_map(|x| [[x, 0], [x, 2]]).collect();
    pts.extend([[0, 1], [2, 1], [5, 1]]);
    DigitalImage::from_points("fig_sexample", sorted_points(pts), 1).expect("valid preset")
}

pub const FAMILIES: &[&str] = &[
    "interval",
    "cycle",
    "box",
    "cube",
    "wedge_cycles_8",
    "fig_xexample",
    "fig_sexample",
];

/// Dispatches on a family name with integer parameters.
pub fn generate(family: &str, params: &[i64]) -> Result<DigitalImage> {
    let arity = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{family} takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let unsigned = |v: i64| -> Result<usize> {
        usize::try_from(v).map_err(|_| Error::InvalidParameter(format!("{v} must be non-negative")))
    };
    match family {
        "interval" => {
            arity(2)?;
            interval(params[0], params[1])
        }
        "cycle" => {
            arity(1)?;
            cycle(unsigned(params[0])?)
        }
        "box" => {
            arity(3)?;
            unit_box(params[0], params[1], unsigned(params[2])?)
        }
        "cube" => arity(0).map(|_| cube()),
        "wedge_cycles_8" => arity(0).map(|_| wedge_cycles_8()),
        "fig_xexample" => arity(0).map(|_| fig_xexample()),
        "fig_sexample" => arity(0).map(|_| fig_sexample()),
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}
