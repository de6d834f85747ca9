use serde::{Deserialize, Serialize};

use super::contours::Contour;
use super::image::RectI;
use crate::error::{Error, Result};

/// Rectangle of arbitrary orientation. `angle` is the direction of the
/// `width` side in degrees, normalized to `(-45, 45]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RotatedRect {
    pub center: (f64, f64),
    pub size: (f64, f64),
    pub angle: f64,
}

impl RotatedRect {
    pub fn area(&self) -> f64 {
        self.size.0 * self.size.1
    }

    /// Brings `angle` into `(-45, 45]` by quarter turns, swapping the sides
    /// each turn.
    pub fn normalized(mut self) -> Self {
        while self.angle > 45.0 {
            self.angle -= 90.0;
            self.size = (self.size.1, self.size.0);
        }
        while self.angle <= -45.0 {
            self.angle += 90.0;
            self.size = (self.size.1, self.size.0);
        }
        self
    }

    pub fn corners(&self) -> [(f64, f64); 4] {
        let (s, c) = self.angle.to_radians().sin_cos();
        let (hw, hh) = (self.size.0 / 2.0, self.size.1 / 2.0);
        let (cx, cy) = self.center;
        [(-hw, -hh), (hw, -hh), (hw, hh), (-hw, hh)]
            .map(|(u, v)| (cx + u * c - v * s, cy + u * s + v * c))
    }
}

/// Tightest axis-aligned rectangle containing every point, in pixel units
/// (a single point yields a 1×1 rect).
pub fn bounding_rect(contour: &Contour) -> Result<RectI> {
    points_bounding_rect(&contour.points)
}

pub fn points_bounding_rect(points: &[(i32, i32)]) -> Result<RectI> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("bounding rect of an empty contour".into()))?;
    let (mut x0, mut y0, mut x1, mut y1) = (first.0, first.1, first.0, first.1);
    for &(x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    Ok(RectI::from_edges(x0, y0, x1 + 1, y1 + 1))
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; counterclockwise in `(x, y)`-math orientation
/// with collinear points removed.
pub fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &(f64, f64)>| {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for &p in iter {
            while out.len() >= 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 0.0 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    hull
}

/// Minimum-area enclosing rectangle by rotating calipers over the convex
/// hull of the contour points.
pub fn min_area_rect(contour: &Contour) -> Result<RotatedRect> {
    let pts: Vec<(f64, f64)> = contour
        .points
        .iter()
        .map(|&(x, y)| (x as f64, y as f64))
        .collect();
    min_area_rect_points(&pts)
}

pub fn min_area_rect_points(points: &[(f64, f64)]) -> Result<RotatedRect> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("min area rect of an empty contour".into()));
    }
    let hull = convex_hull(points);
    match hull.len() {
        1 => {
            return Ok(RotatedRect {
                center: hull[0],
                size: (0.0, 0.0),
                angle: 0.0,
            })
        }
        2 => {
            let (a, b) = (hull[0], hull[1]);
            let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
            return Ok(RotatedRect {
                center: ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0),
                size: (len, 0.0),
                angle: (b.1 - a.1).atan2(b.0 - a.0).to_degrees(),
            }
            .normalized());
        }
        _ => {}
    }

    let n = hull.len();
    let dot = |a: (f64, f64), b: (f64, f64)| a.0 * b.0 + a.1 * b.1;
    let (mut right, mut top, mut left) = (0usize, 0usize, 0usize);
    let mut best: Option<(f64, RotatedRect)> = None;

    for i in 0..n {
        let (p, q) = (hull[i], hull[(i + 1) % n]);
        let len = ((q.0 - p.0).powi(2) + (q.1 - p.1).powi(2)).sqrt();
        let u = ((q.0 - p.0) / len, (q.1 - p.1) / len);
        let v = (-u.1, u.0);

        if i == 0 {
            let by = |f: &dyn Fn(usize) -> f64| {
                (0..n)
                    .max_by(|&a, &b| f(a).partial_cmp(&f(b)).expect("finite"))
                    .expect("non-empty hull")
            };
            right = by(&|k| dot(u, hull[k]));
            top = by(&|k| dot(v, hull[k]));
            left = by(&|k| -dot(u, hull[k]));
        } else {
            // Extremes only move forward as the caliper turns.
            let advance = |mut k: usize, f: &dyn Fn(usize) -> f64| {
                for _ in 0..n {
                    let next = (k + 1) % n;
                    if f(next) >= f(k) - 1e-12 {
                        k = next;
                    } else {
                        break;
                    }
                }
                k
            };
            right = advance(right, &|k| dot(u, hull[k]));
            top = advance(top, &|k| dot(v, hull[k]));
            left = advance(left, &|k| -dot(u, hull[k]));
        }

        let (min_u, max_u) = (dot(u, hull[left]), dot(u, hull[right]));
        let (min_v, max_v) = (dot(v, p), dot(v, hull[top]));
        let (width, height) = (max_u - min_u, max_v - min_v);
        let area = width * height;
        if best.as_ref().is_none_or(|(a, _)| area < *a - 1e-9) {
            let (mu, mv) = ((min_u + max_u) / 2.0, (min_v + max_v) / 2.0);
            best = Some((
                area,
                RotatedRect {
                    center: (u.0 * mu + v.0 * mv, u.1 * mu + v.1 * mv),
                    size: (width, height),
                    angle: u.1.atan2(u.0).to_degrees(),
                },
            ));
        }
    }
    Ok(best.expect("hull has at least three edges").1.normalized())
}
