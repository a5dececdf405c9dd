use serde::{Deserialize, Serialize};

use crate::linalg::{self, dedup_points, lerp};

/// Number of interior subdivisions used when sampling a segment between two generators.
/// Halvings from the anchor projection towards each generator.
const ANCHOR_LEVELS: i32 = 8;

const SEGMENT_STEPS: usize = 8;

/// A subdifferential given as a finite union of polytopes, each polytope
/// being the convex hull of its generators.
///
/// Convex kinks (`|x|` at 0, active sets of a max) produce a single polytope.
/// Limiting subdifferentials at concave kinks (`-|x|` at 0) are not convex
/// and are stored as one singleton polytope per generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subdifferential {
    pieces: Vec<Vec<Vec<f64>>>,
}

impl Subdifferential {
    pub fn singleton(v: Vec<f64>) -> Self {
        Self {
            pieces: vec![vec![v]],
        }
    }

    /// The convex hull of `generators`.
    pub fn hull(generators: Vec<Vec<f64>>) -> Self {
        assert!(!generators.is_empty(), "hull of an empty set");
        Self {
            pieces: vec![dedup_points(generators)],
        }
    }

    /// The finite set `points` itself (no convexification).
    pub fn points(points: Vec<Vec<f64>>) -> Self {
        assert!(!points.is_empty(), "empty point set");
        Self {
            pieces: dedup_points(points).into_iter().map(|p| vec![p]).collect(),
        }
    }

    pub fn pieces(&self) -> &[Vec<Vec<f64>>] {
        &self.pieces
    }

    /// All generators, deduplicated, in piece order.
    pub fn generators(&self) -> Vec<Vec<f64>> {
        dedup_points(self.pieces.iter().flatten().cloned().collect())
    }

    pub fn is_singleton(&self) -> bool {
        self.generators().len() == 1
    }

    pub fn dim(&self) -> usize {
        self.pieces[0][0].len()
    }

    /// `{c v : v ∈ self}`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| dedup_points(p.iter().map(|g| linalg::scaled(g, c)).collect()))
                .collect(),
        }
    }

    /// `{v - shift : v ∈ self}`.
    pub fn translated(&self, shift: &[f64]) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .map(|p| p.iter().map(|g| linalg::sub(g, shift)).collect())
                .collect(),
        }
    }

    /// Minkowski sum; hulls of pairwise generator sums, one per piece pair.
    pub fn minkowski_sum(&self, other: &Subdifferential) -> Self {
        let mut pieces = Vec::with_capacity(self.pieces.len() * other.pieces.len());
        for a in &self.pieces {
            for b in &other.pieces {
                let mut sums = Vec::with_capacity(a.len() * b.len());
                for ga in a {
                    for gb in b {
                        sums.push(linalg::add(ga, gb));
                    }
                }
                pieces.push(dedup_points(sums));
            }
        }
        Self { pieces }
    }

    /// Distance from `v` to the set.
    pub fn distance(&self, v: &[f64]) -> f64 {
        self.pieces
            .iter()
            .map(|p| linalg::hull_distance(v, p))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, v: &[f64], tol: f64) -> bool {
        self.distance(v) <= tol
    }

    /// Finite sample of the set: every generator, points along each segment
    /// between generators of a common piece, piece centroids and, when an
    /// anchor is given, its projection `p` onto every piece together with
    /// the points `p + 2^-k (g - p)` towards each generator `g`.
    pub fn samples(&self, anchor: Option<&[f64]>) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            out.extend(piece.iter().cloned());
            for i in 0..piece.len() {
                for j in (i + 1)..piece.len() {
                    for k in 1..SEGMENT_STEPS {
                        out.push(lerp(&piece[i], &piece[j], k as f64 / SEGMENT_STEPS as f64));
                    }
                }
            }
            if piece.len() > 2 {
                let n = piece[0].len();
                let mut c = vec![0.0; n];
                for g in piece {
                    for (ci, gi) in c.iter_mut().zip(g) {
                        *ci += gi / piece.len() as f64;
                    }
                }
                out.push(c);
            }
            if let Some(a) = anchor {
                if piece.len() > 1 {
                    let p = linalg::project_onto_hull(a, piece);
                    for g in piece {
                        for k in 1..=ANCHOR_LEVELS {
                            out.push(lerp(&p, g, 0.5f64.powi(k)));
                        }
                    }
                    out.push(p);
                }
            }
        }
        dedup_points(out)
    }
}
