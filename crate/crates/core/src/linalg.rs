//! Small dense-vector helpers on `&[f64]`.

use nalgebra::{DMatrix, DVector};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scaled(a: &[f64], c: f64) -> Vec<f64> {
    a.iter().map(|x| c * x).collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Affine combination `(1 - t) a + t b`.
pub fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| (1.0 - t) * x + t * y).collect()
}

/// Removes exact duplicates while keeping first-occurrence order.
pub fn dedup_points(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !out.iter().any(|q| q == &p) {
            out.push(p);
        }
    }
    out
}

/// Euclidean projection of `p` onto the convex hull of `generators`.
///
/// The projection lies in the relative interior of some face spanned by at
/// most `n + 1` generators, so every such subset is tried and the nearest
/// feasible affine projection wins. Generator sets here are small (kinks of
/// catalog functions), which keeps the enumeration cheap.
pub fn project_onto_hull(p: &[f64], generators: &[Vec<f64>]) -> Vec<f64> {
    assert!(!generators.is_empty(), "empty generator set");
    let gens = dedup_points(generators.to_vec());
    if gens.len() == 1 {
        return gens[0].clone();
    }
    let n = p.len();
    let max_size = gens.len().min(n + 1);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut subset = Vec::with_capacity(max_size);
    for size in 1..=max_size {
        for_each_subset(gens.len(), size, &mut subset, &mut |idx| {
            if let Some(q) = affine_projection(p, &gens, idx) {
                let d = dist_sq(p, &q);
                if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                    best = Some((d, q));
                }
            }
        });
    }
    best.map(|(_, q)| q).unwrap_or_else(|| gens[0].clone())
}

/// Distance from `p` to the convex hull of `generators`.
pub fn hull_distance(p: &[f64], generators: &[Vec<f64>]) -> f64 {
    dist(p, &project_onto_hull(p, generators))
}

fn for_each_subset(
    total: usize,
    size: usize,
    current: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    fn rec(
        start: usize,
        total: usize,
        size: usize,
        current: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if current.len() == size {
            visit(current);
            return;
        }
        for i in start..total {
            if total - i < size - current.len() {
                break;
            }
            current.push(i);
            rec(i + 1, total, size, current, visit);
            current.pop();
        }
    }
    current.clear();
    rec(0, total, size, current, visit);
}

/// Projection onto the affine hull of the chosen generators, `None` when the
/// barycentric coordinates leave the simplex or the face is degenerate.
fn affine_projection(p: &[f64], gens: &[Vec<f64>], idx: &[usize]) -> Option<Vec<f64>> {
    let base = &gens[idx[0]];
    if idx.len() == 1 {
        return Some(base.clone());
    }
    let n = p.len();
    let k = idx.len() - 1;
    let d = DMatrix::from_fn(n, k, |row, col| gens[idx[col + 1]][row] - base[row]);
    let rhs = DVector::from_fn(n, |row, _| p[row] - base[row]);
    let gram = d.transpose() * &d;
    let beta = gram.lu().solve(&(d.transpose() * rhs))?;
    let alpha0 = 1.0 - beta.sum();
    const SLACK: f64 = -1e-12;
    if alpha0 < SLACK || beta.iter().any(|&b| b < SLACK || !b.is_finite()) {
        return None;
    }
    let q = DVector::from_column_slice(base) + d * beta;
    Some(q.iter().copied().collect())
}
