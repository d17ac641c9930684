//! Convex planar regions: disks and convex polygons.

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

pub type Point = [f64; 2];

pub(crate) fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Unit vector at angle `theta` and its left normal.
pub fn direction(theta: f64) -> (Point, Point) {
    let (s, c) = theta.sin_cos();
    ([c, s], [-s, c])
}

/// Disk or convex polygon (vertices counter-clockwise).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Region {
    Disk { center: Point, radius: f64 },
    Polygon { vertices: Vec<Point> },
}

impl Region {
    pub fn disk(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return param(format!("disk radius must be positive, got {radius}"));
        }
        Ok(Region::Disk { center, radius })
    }

    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return param("rectangle needs x0 < x1 and y0 < y1");
        }
        Ok(Region::Polygon { vertices: vec![[x0, y0], [x1, y0], [x1, y1], [x0, y1]] })
    }

    /// Convex polygon; vertices are reordered counter-clockwise.
    pub fn polygon(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return param("polygon needs at least three vertices");
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let n = vertices.len();
        for i in 0..n {
            let (a, b, c) = (vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n]);
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross < -1e-14 {
                return param("polygon is not convex");
            }
        }
        Ok(Region::Polygon { vertices })
    }

    /// Square `(-h, h)²`.
    pub fn centered_square(h: f64) -> Result<Self> {
        Self::rect(-h, h, -h, h)
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Region::Disk { center, radius } => {
                let (dx, dy) = (p[0] - center[0], p[1] - center[1]);
                dx * dx + dy * dy < radius * radius
            }
            Region::Polygon { vertices } => {
                let n = vertices.len();
                (0..n).all(|i| {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) > 0.0
                })
            }
        }
    }

    /// Open chord `{t : z·normal + t·sigma ∈ region}`.
    pub fn chord(&self, sigma: Point, normal: Point, z: f64) -> Option<(f64, f64)> {
        match self {
            Region::Disk { center, radius } => {
                let e = z - dot(*center, normal);
                let h2 = radius * radius - e * e;
                if h2 <= 0.0 {
                    return None;
                }
                let t0 = dot(*center, sigma);
                let h = h2.sqrt();
                Some((t0 - h, t0 + h))
            }
            Region::Polygon { vertices } => {
                let base = [z * normal[0], z * normal[1]];
                let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
                let n = vertices.len();
                for i in 0..n {
                    let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                    // inward normal of edge a→b for a counter-clockwise polygon
                    let nrm = [-(b[1] - a[1]), b[0] - a[0]];
                    let c = dot(nrm, [base[0] - a[0], base[1] - a[1]]);
                    let d = dot(nrm, sigma);
                    // constraint c + d t > 0
                    if d == 0.0 {
                        if c <= 0.0 {
                            return None;
                        }
                    } else if d > 0.0 {
                        lo = lo.max(-c / d);
                    } else {
                        hi = hi.min(-c / d);
                    }
                }
                (lo < hi).then_some((lo, hi))
            }
        }
    }

    /// Range of `⟨p, v⟩` over the region.
    pub fn projection(&self, v: Point) -> (f64, f64) {
        match self {
            Region::Disk { center, radius } => {
                let c = dot(*center, v);
                let r = radius * dot(v, v).sqrt();
                (c - r, c + r)
            }
            Region::Polygon { vertices } => vertices.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |acc, &p| {
                let d = dot(p, v);
                (acc.0.min(d), acc.1.max(d))
            }),
        }
    }

    /// Offsets along `normal` where chords change character: tangencies and
    /// vertex projections.
    pub fn critical_offsets(&self, normal: Point) -> Vec<f64> {
        match self {
            Region::Disk { .. } => {
                let (a, b) = self.projection(normal);
                vec![a, b]
            }
            Region::Polygon { vertices } => vertices.iter().map(|&p| dot(p, normal)).collect(),
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Region::Disk { radius, .. } => 2.0 * std::f64::consts::PI * radius,
            Region::Polygon { vertices } => {
                let n = vertices.len();
                (0..n)
                    .map(|i| {
                        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                        ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
                    })
                    .sum()
            }
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Region::Disk { radius, .. } => std::f64::consts::PI * radius * radius,
            Region::Polygon { vertices } => signed_area(vertices).abs(),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Region::Disk { radius, .. } => 2.0 * radius,
            Region::Polygon { vertices } => {
                let mut d: f64 = 0.0;
                for a in vertices {
                    for b in vertices {
                        d = d.max(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt());
                    }
                }
                d
            }
        }
    }

    /// Closed region inside the open region `outer`, up to boundary contact.
    pub fn is_inside(&self, outer: &Region) -> bool {
        match self {
            Region::Polygon { vertices } => {
                vertices.iter().all(|&p| outer.contains(p) || on_boundary(outer, p))
            }
            Region::Disk { center, radius } => match outer {
                Region::Disk { center: c2, radius: r2 } => {
                    ((center[0] - c2[0]).powi(2) + (center[1] - c2[1]).powi(2)).sqrt() + radius <= *r2
                }
                Region::Polygon { vertices } => {
                    let n = vertices.len();
                    outer.contains(*center)
                        && (0..n).all(|i| {
                            let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
                            let dist = ((b[0] - a[0]) * (center[1] - a[1]) - (b[1] - a[1]) * (center[0] - a[0])) / len;
                            dist >= *radius
                        })
                }
            },
        }
    }

    /// Image under rotation by `theta` about the origin.
    pub fn rotated(&self, theta: f64) -> Region {
        let r = |p: Point| rotate(p, theta);
        match self {
            Region::Disk { center, radius } => Region::Disk { center: r(*center), radius: *radius },
            Region::Polygon { vertices } => Region::Polygon { vertices: vertices.iter().map(|&p| r(p)).collect() },
        }
    }

    /// Axis-aligned rectangle bounds when the polygon is one.
    pub fn as_rect(&self) -> Option<(f64, f64, f64, f64)> {
        let Region::Polygon { vertices } = self else { return None };
        if vertices.len() != 4 {
            return None;
        }
        let xs: Vec<f64> = vertices.iter().map(|p| p[0]).collect();
        let ys: Vec<f64> = vertices.iter().map(|p| p[1]).collect();
        let (x0, x1) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        let (y0, y1) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        let ok = vertices.iter().all(|p| (p[0] == x0 || p[0] == x1) && (p[1] == y0 || p[1] == y1));
        ok.then_some((x0, x1, y0, y1))
    }
}

pub fn rotate(p: Point, theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    [c * p[0] - s * p[1], s * p[0] + c * p[1]]
}

fn on_boundary(r: &Region, p: Point) -> bool {
    match r {
        Region::Disk { center, radius } => {
            (((p[0] - center[0]).powi(2) + (p[1] - center[1]).powi(2)).sqrt() - radius).abs() < 1e-12
        }
        Region::Polygon { vertices } => {
            let n = vertices.len();
            let inside_closed = (0..n).all(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= -1e-12
            });
            inside_closed && !r.contains(p)
        }
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    0.5 * (0..n).map(|i| v[i][0] * v[(i + 1) % n][1] - v[(i + 1) % n][0] * v[i][1]).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chords() {
        let d = Region::disk([0.0, 0.0], 0.3).unwrap();
        let (s, n) = direction(0.0);
        let (a, b) = d.chord(s, n, 0.0).unwrap();
        assert!((a + 0.3).abs() < 1e-15 && (b - 0.3).abs() < 1e-15);
        assert!(d.chord(s, n, 0.5).is_none());
        let sq = Region::centered_square(1.0).unwrap();
        let (s, n) = direction(std::f64::consts::FRAC_PI_4);
        let (a, b) = sq.chord(s, n, 0.0).unwrap();
        assert!((b - a - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((sq.perimeter() - 8.0).abs() < 1e-15 && (sq.area() - 4.0).abs() < 1e-15);
        assert!(d.is_inside(&sq));
        assert_eq!(sq.as_rect(), Some((-1.0, 1.0, -1.0, 1.0)));
    }
}
