//! Outer borders of 8-connected foreground components.

use super::image::{BinaryImage, RectI};

/// Closed 8-connected boundary of one foreground component.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    pub points: Vec<(i32, i32)>,
    pub area: f64,
}

impl Contour {
    /// Builds a contour and computes its area: the shoelace area of the
    /// boundary polygon, floored at the number of distinct boundary pixels so
    /// that degenerate (single-pixel or line) components keep a positive area.
    pub fn from_points(points: Vec<(i32, i32)>) -> Self {
        let area = contour_area(&points);
        Self { points, area }
    }
}

pub fn shoelace_area(points: &[(i32, i32)]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let twice: i64 = points
        .iter()
        .zip(points.iter().cycle().skip(1))
        .map(|(&(x0, y0), &(x1, y1))| x0 as i64 * y1 as i64 - x1 as i64 * y0 as i64)
        .sum();
    twice.abs() as f64 / 2.0
}

fn contour_area(points: &[(i32, i32)]) -> f64 {
    let mut distinct = points.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    shoelace_area(points).max(distinct.len() as f64)
}

// Clockwise on screen (y down), starting west.
const DIRS: [(i32, i32); 8] = [
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
];

fn dir_index(from: (i32, i32), to: (i32, i32)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter().position(|&v| v == d).expect("neighbors are adjacent")
}

/// One 8-connected foreground component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub bbox: RectI,
    pub pixels: Vec<(u32, u32)>,
}

/// 8-connected components in raster order of their first pixel.
pub fn connected_components(img: &BinaryImage) -> Vec<Component> {
    let (w, h) = img.dimensions();
    let (wi, hi) = (w as i32, h as i32);
    let raw = img.as_gray().as_raw();
    let mut seen = vec![false; raw.len()];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    for start in 0..raw.len() {
        if raw[start] == 0 || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut pixels = Vec::new();
        let (mut x0, mut y0, mut x1, mut y1) = (i32::MAX, i32::MAX, i32::MIN, i32::MIN);
        while let Some(i) = stack.pop() {
            let (x, y) = ((i % w as usize) as i32, (i / w as usize) as i32);
            pixels.push((x as u32, y as u32));
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
            for &(dx, dy) in &DIRS {
                let (nx, ny) = (x + dx, y + dy);
                if nx >= 0 && ny >= 0 && nx < wi && ny < hi {
                    let ni = (ny * wi + nx) as usize;
                    if raw[ni] != 0 && !seen[ni] {
                        seen[ni] = true;
                        stack.push(ni);
                    }
                }
            }
        }
        out.push(Component {
            bbox: RectI::from_edges(x0, y0, x1 + 1, y1 + 1),
            pixels,
        });
    }
    out
}

/// Outer contour of every 8-connected component, in raster order of each
/// component's first pixel.
pub fn find_contours(img: &BinaryImage) -> Vec<Contour> {
    let (w, h) = img.dimensions();
    let (wi, hi) = (w as i32, h as i32);
    let raw = img.as_gray().as_raw();
    let fg = |x: i32, y: i32| x >= 0 && y >= 0 && x < wi && y < hi && raw[(y * wi + x) as usize] != 0;

    let mut seen = vec![false; raw.len()];
    let mut stack = Vec::new();
    let mut contours = Vec::new();

    for y in 0..hi {
        for x in 0..wi {
            let idx = (y * wi + x) as usize;
            if raw[idx] == 0 || seen[idx] {
                continue;
            }
            // Flood the component so it is traced once.
            seen[idx] = true;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                for &(dx, dy) in &DIRS {
                    let (nx, ny) = (cx + dx, cy + dy);
                    if fg(nx, ny) {
                        let ni = (ny * wi + nx) as usize;
                        if !seen[ni] {
                            seen[ni] = true;
                            stack.push((nx, ny));
                        }
                    }
                }
            }
            contours.push(Contour::from_points(trace_border((x, y), &fg)));
        }
    }
    contours
}

/// Border following from the component's raster-first pixel, whose west
/// neighbor is background.
fn trace_border(start: (i32, i32), fg: &impl Fn(i32, i32) -> bool) -> Vec<(i32, i32)> {
    let step = |p: (i32, i32), d: usize| (p.0 + DIRS[d].0, p.1 + DIRS[d].1);

    let Some(last) = (0..8).map(|d| step(start, d)).find(|&(x, y)| fg(x, y)) else {
        return vec![start];
    };

    let mut points = Vec::new();
    let (mut prev, mut cur) = (last, start);
    loop {
        let from = dir_index(cur, prev);
        let next = (1..=8)
            .map(|i| step(cur, (from + 8 - i) % 8))
            .find(|&(x, y)| fg(x, y))
            .expect("previous point is foreground");
        points.push(cur);
        if next == start && cur == last {
            break;
        }
        prev = cur;
        cur = next;
    }
    points
}
