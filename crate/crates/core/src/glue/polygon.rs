//! A convex polygon with every side folded onto itself about its midpoint.

use serde::{Deserialize, Serialize};

use super::graph::shortest_paths;
use super::{GluedDistance, DEFAULT_CROSSING_CAP};
use crate::error::{ensure, invalid, Result};

const EDGE_SLACK: f64 = 1e-12;

type Point = [f64; 2];

/// Convex polygon whose sides are glued by `x ↦ V_i + V_{i+1} − x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonGluing {
    vertices: Vec<Point>,
    #[serde(skip, default = "default_cap")]
    crossing_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_CROSSING_CAP
}

fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl PolygonGluing {
    /// Accepts a strictly convex polygon in either orientation.
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        ensure(n >= 3, || format!("polygon needs at least 3 vertices, got {n}"))?;
        ensure(vertices.iter().flatten().all(|x| x.is_finite()), || "vertex coordinates must be finite".into())?;
        let turns: Vec<f64> = (0..n).map(|i| cross(vertices[i], vertices[(i + 1) % n], vertices[(i + 2) % n])).collect();
        let ccw = turns.iter().all(|&t| t > 0.0);
        let cw = turns.iter().all(|&t| t < 0.0);
        ensure(ccw || cw, || "polygon must be strictly convex".into())?;
        let mut vertices = vertices;
        if cw {
            vertices.reverse();
        }
        Ok(Self { vertices, crossing_cap: DEFAULT_CROSSING_CAP })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    fn side(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    fn perimeter_scale(&self) -> f64 {
        (0..self.vertices.len()).map(|i| dist(self.side(i).0, self.side(i).1)).fold(0.0, f64::max)
    }

    /// Sides that contain `p` (within rounding).
    fn sides_through(&self, p: Point) -> Vec<usize> {
        let scale = self.perimeter_scale();
        (0..self.vertices.len())
            .filter(|&i| {
                let (a, b) = self.side(i);
                let len = dist(a, b);
                cross(a, b, p).abs() <= EDGE_SLACK * scale * len
                    && (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]) >= -EDGE_SLACK * scale * len
                    && (p[0] - b[0]) * (a[0] - b[0]) + (p[1] - b[1]) * (a[1] - b[1]) >= -EDGE_SLACK * scale * len
            })
            .collect()
    }

    pub fn contains(&self, p: Point) -> bool {
        let scale = self.perimeter_scale();
        (0..self.vertices.len()).all(|i| {
            let (a, b) = self.side(i);
            cross(a, b, p) >= -EDGE_SLACK * scale * dist(a, b)
        })
    }

    /// Quotient distance between two points of the polygon over a boundary net
    /// of spacing at most `eps`.
    pub fn distance(&self, x: Point, y: Point, eps: f64) -> Result<GluedDistance> {
        ensure(eps > 0.0 && eps.is_finite(), || format!("graph resolution must be positive, got {eps}"))?;
        for p in [x, y] {
            if !self.contains(p) {
                return Err(invalid(format!("point ({}, {}) lies outside the polygon", p[0], p[1])));
            }
        }
        let n = self.vertices.len();
        let m = ((self.perimeter_scale() / (2.0 * eps)).ceil().max(1.0) as usize).next_power_of_two();
        let mut nodes: Vec<Point> = vec![x, y];
        let mut partners: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
        // side i has nodes k = 0..=2m; k = 0 is vertex i and k = 2m is vertex i+1
        let vertex_node = |i: usize| 2 + (i % n) * 2 * m;
        for i in 0..n {
            let (a, b) = self.side(i);
            for k in 0..2 * m {
                let f = k as f64 / (2 * m) as f64;
                nodes.push([a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]);
                partners.push(Vec::new());
            }
        }
        let side_node = |i: usize, k: usize| if k == 2 * m { vertex_node(i + 1) } else { vertex_node(i) + k };
        for i in 0..n {
            for k in 0..=2 * m {
                let (u, v) = (side_node(i, k), side_node(i, 2 * m - k));
                if u != v && !partners[u].contains(&v) {
                    partners[u].push(v);
                }
            }
        }
        for q in 0..2 {
            let p = nodes[q];
            for i in self.sides_through(p) {
                let (a, b) = self.side(i);
                let image = [a[0] + b[0] - p[0], a[1] + b[1] - p[1]];
                let j = nodes.len();
                nodes.push(image);
                partners.push(vec![q]);
                partners[q].push(j);
            }
        }
        let paths = shortest_paths(nodes.len(), 0, |i, j| dist(nodes[i], nodes[j]), &partners);
        let spacing = (0..n).map(|i| dist(self.side(i).0, self.side(i).1) / (2 * m) as f64).fold(0.0, f64::max);
        Ok(GluedDistance {
            value: paths.dist[1],
            error_bound: self.crossing_cap as f64 * spacing,
            crossings: paths.crossings[1],
            nodes: nodes.len(),
        })
    }
}
