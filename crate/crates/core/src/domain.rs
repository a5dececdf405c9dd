use serde::{Deserialize, Serialize};

use crate::error::{ProxError, Result};

/// Axis-aligned box `[lower, upper]` in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(ProxError::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        for (i, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(ProxError::DegenerateBox(format!(
                    "axis {i}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The box `[lo, hi]^n`.
    pub fn cube(dim: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    /// Zero-dimensional box, used as the parameter domain of unparametrized functions.
    pub fn point() -> Self {
        Self {
            lower: Vec::new(),
            upper: Vec::new(),
        }
    }

    /// Box of half-width `radius` (per axis) centred at `center`.
    pub fn around(center: &[f64], radius: f64) -> Result<Self> {
        Self::new(
            center.iter().map(|c| c - radius).collect(),
            center.iter().map(|c| c + radius).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }

    pub fn width(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    pub fn contains_box(&self, other: &BoxDomain) -> bool {
        other.dim() == self.dim()
            && (0..self.dim())
                .all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }

    /// Intersection with another box, `None` when empty.
    pub fn intersect(&self, other: &BoxDomain) -> Option<BoxDomain> {
        if other.dim() != self.dim() {
            return None;
        }
        let lower: Vec<f64> = (0..self.dim())
            .map(|i| self.lower[i].max(other.lower[i]))
            .collect();
        let upper: Vec<f64> = (0..self.dim())
            .map(|i| self.upper[i].min(other.upper[i]))
            .collect();
        BoxDomain::new(lower, upper).ok()
    }
}

/// Uniform lattice over a box with the same number of nodes on every axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    domain: BoxDomain,
    points_per_axis: usize,
}

impl Grid {
    pub fn new(domain: BoxDomain, points_per_axis: usize) -> Result<Self> {
        if points_per_axis < 3 {
            return Err(ProxError::InvalidArgument(format!(
                "grid needs at least 3 points per axis, got {points_per_axis}"
            )));
        }
        if domain.dim() == 0 {
            return Err(ProxError::DegenerateBox("zero-dimensional grid".into()));
        }
        for axis in 0..domain.dim() {
            if domain.width(axis) <= 0.0 {
                return Err(ProxError::DegenerateBox(format!("axis {axis} has zero width")));
            }
        }
        Ok(Self {
            domain,
            points_per_axis,
        })
    }

    pub fn interval(lo: f64, hi: f64, points: usize) -> Result<Self> {
        Self::new(BoxDomain::interval(lo, hi)?, points)
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.domain.width(axis) / (self.points_per_axis - 1) as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let last = self.points_per_axis - 1;
        if i == last {
            return self.domain.upper()[axis];
        }
        self.domain.lower()[axis] + self.domain.width(axis) * i as f64 / last as f64
    }

    /// Per-axis indices of a flat node index (axis 0 varies slowest).
    pub fn multi_index(&self, mut index: usize) -> Vec<usize> {
        let n = self.dim();
        let mut out = vec![0; n];
        for axis in (0..n).rev() {
            out[axis] = index % self.points_per_axis;
            index /= self.points_per_axis;
        }
        out
    }

    pub fn node(&self, index: usize) -> Vec<f64> {
        self.multi_index(index)
            .into_iter()
            .enumerate()
            .map(|(axis, i)| self.coordinate(axis, i))
            .collect()
    }

    pub fn nodes(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.node(i)).collect()
    }

    pub fn is_boundary(&self, index: usize) -> bool {
        let last = self.points_per_axis - 1;
        self.multi_index(index).iter().any(|&i| i == 0 || i == last)
    }

    /// Flat index of the node nearest to `x` (coordinates are clamped to the box).
    pub fn nearest_index(&self, x: &[f64]) -> usize {
        let last = self.points_per_axis - 1;
        let mut index = 0;
        for (axis, v) in x.iter().enumerate() {
            let t = (v - self.domain.lower()[axis]) / self.spacing(axis);
            let i = t.round().clamp(0.0, last as f64) as usize;
            index = index * self.points_per_axis + i;
        }
        index
    }

    /// Stable key used for envelope caching.
    pub fn signature(&self) -> String {
        let mut s = format!("n{}p{}", self.dim(), self.points_per_axis);
        for axis in 0..self.dim() {
            s.push_str(&format!(
                ":{:016x}-{:016x}",
                self.domain.lower()[axis].to_bits(),
                self.domain.upper()[axis].to_bits()
            ));
        }
        s
    }

    /// Grid with the same spacing whose box is the original scaled about its
    /// centre by the largest integer factor `<= factor` that still fits in
    /// `within`. Nodes of `self` remain nodes of the result when the point
    /// count is odd.
    pub fn widened(&self, factor: usize, within: &BoxDomain) -> Grid {
        let center = self.domain.center();
        for k in (1..=factor.max(1)).rev() {
            let lower: Vec<f64> = (0..self.dim())
                .map(|a| center[a] - 0.5 * k as f64 * self.domain.width(a))
                .collect();
            let upper: Vec<f64> = (0..self.dim())
                .map(|a| center[a] + 0.5 * k as f64 * self.domain.width(a))
                .collect();
            let candidate = BoxDomain::new(lower, upper).expect("scaled box is valid");
            if k == 1 || within.contains_box(&candidate) {
                return Grid {
                    domain: if k == 1 { self.domain.clone() } else { candidate },
                    points_per_axis: (self.points_per_axis - 1) * k + 1,
                };
            }
        }
        unreachable!("k = 1 always returns")
    }

    /// Grid over the same box with `factor` times finer spacing.
    pub fn refined(&self, factor: usize) -> Grid {
        Grid {
            domain: self.domain.clone(),
            points_per_axis: (self.points_per_axis - 1) * factor.max(1) + 1,
        }
    }
}
