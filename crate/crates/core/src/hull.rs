//! Convex hulls of finite point sets in an affine chart: vertex and facet
//! descriptions, with LP-based membership for higher dimensions.

use crate::error::{Error, Result};
use crate::lp::{lp_feasible, Constraint, LpOutcome};

/// Hull of a finite chart point set: extreme vertices plus facet
/// inequalities `normal . x <= offset`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChartHull {
    pub dim: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<(Vec<f64>, f64)>,
    /// Set when the input was affinely degenerate (hull of lower dimension);
    /// facets are then omitted.
    pub degenerate: bool,
}

impl ChartHull {
    pub fn contains(&self, p: &[f64]) -> bool {
        point_in_hull(&self.vertices, p)
    }
}

/// Closed-hull membership via barycentric LP.
pub fn point_in_hull(vertices: &[Vec<f64>], p: &[f64]) -> bool {
    let k = vertices.len();
    if k == 0 {
        return false;
    }
    let dim = vertices[0].len();
    let mut cons = Vec::with_capacity(2 * dim + 2 + k);
    for coord in 0..dim {
        let row: Vec<f64> = vertices.iter().map(|v| v[coord]).collect();
        cons.push(Constraint::ge(row.clone(), p[coord]));
        cons.push(Constraint::le(row, p[coord]));
    }
    let ones = vec![1.0; k];
    cons.push(Constraint::ge(ones.clone(), 1.0));
    cons.push(Constraint::le(ones, 1.0));
    for i in 0..k {
        let mut e = vec![0.0; k];
        e[i] = 1.0;
        cons.push(Constraint::ge(e, 0.0));
    }
    matches!(lp_feasible(k, &cons), Ok(LpOutcome::Feasible(_)))
}

/// Convex hull of chart points: extreme vertices and facets; idempotent.
/// Affinely degenerate inputs are flagged rather than rejected.
pub fn convex_hull_in_chart(points: &[Vec<f64>]) -> Result<ChartHull> {
    if points.is_empty() {
        return Err(Error::Degenerate("hull of empty set".into()));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimMismatch("ragged point list".into()));
    }
    let degenerate = affine_rank(points) < dim;
    let vertices = extreme_points(points);
    let facets = if degenerate {
        Vec::new()
    } else {
        match dim {
            1 => facets_1d(&vertices),
            2 => facets_2d(&vertices),
            _ => facets_nd(&vertices, dim)?,
        }
    };
    Ok(ChartHull {
        dim,
        vertices,
        facets,
        degenerate,
    })
}

fn affine_rank(points: &[Vec<f64>]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let dim = points[0].len();
    let base = &points[0];
    let rows: Vec<f64> = points[1..]
        .iter()
        .flat_map(|p| p.iter().zip(base).map(|(a, b)| a - b))
        .collect();
    let m = nalgebra::DMatrix::from_row_slice(points.len() - 1, dim, &rows);
    m.rank(1e-9 * (1.0 + m.amax()))
}

/// Extreme points: p is a vertex iff it is not in the hull of the others.
fn extreme_points(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // Dedup first so repeated points do not mask each other.
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !uniq
            .iter()
            .any(|q| q.iter().zip(p).all(|(a, b)| (a - b).abs() < 1e-12))
        {
            uniq.push(p.clone());
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    let mut out = Vec::new();
    for (i, p) in uniq.iter().enumerate() {
        let others: Vec<Vec<f64>> = uniq
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        if !point_in_hull(&others, p) {
            out.push(p.clone());
        }
    }
    out
}

fn facets_1d(vertices: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let lo = vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
    let hi = vertices
        .iter()
        .map(|v| v[0])
        .fold(f64::NEG_INFINITY, f64::max);
    vec![(vec![-1.0], -lo), (vec![1.0], hi)]
}

/// Monotone chain; facets are the polygon edges oriented outward.
fn facets_2d(vertices: &[Vec<f64>]) -> Vec<(Vec<f64>, f64)> {
    let mut pts = vertices.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    let cross = |o: &[f64], a: &[f64], b: &[f64]| {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    let ring: Vec<Vec<f64>> = lower.into_iter().chain(upper).collect();
    let mut facets = Vec::new();
    for i in 0..ring.len() {
        let a = &ring[i];
        let b = &ring[(i + 1) % ring.len()];
        // Outward normal of edge a->b for a ccw ring.
        let n = vec![b[1] - a[1], a[0] - b[0]];
        let c = n[0] * a[0] + n[1] * a[1];
        facets.push((n, c));
    }
    facets
}

/// Facets via (dim)-subsets of vertices; adequate for the orbit-hull sizes
/// used here (a few hundred vertices in dimension <= 4).
fn facets_nd(vertices: &[Vec<f64>], dim: usize) -> Result<Vec<(Vec<f64>, f64)>> {
    let v = vertices.len();
    if v > 200 {
        return Ok(Vec::new()); // facet list omitted for large hulls
    }
    let mut facets: Vec<(Vec<f64>, f64)> = Vec::new();
    let idx: Vec<usize> = (0..v).collect();
    let mut subset = vec![0usize; dim];
    enumerate_subsets(&idx, dim, &mut subset, 0, 0, &mut |s| {
        let base = &vertices[s[0]];
        // Square matrix with a zero last row so the full right frame (and the
        // kernel direction) is available from the SVD.
        let mut rows: Vec<f64> = s[1..]
            .iter()
            .flat_map(|&i| vertices[i].iter().zip(base).map(|(a, b)| a - b))
            .collect();
        rows.extend(std::iter::repeat(0.0).take(dim));
        let m = nalgebra::DMatrix::from_row_slice(dim, dim, &rows);
        let Ok(svd) = crate::linalg::svd_f64(&m) else {
            return;
        };
        let sig = &svd.profile.sigmas;
        let smax = sig[0];
        // Need the dim-1 spanning directions independent and a 1-dim kernel.
        if dim > 1 && (smax == 0.0 || sig[dim - 2] < 1e-9 * smax) {
            return; // degenerate subset
        }
        let normal: Vec<f64> = svd.vt.row(dim - 1).iter().cloned().collect();
        let c: f64 = normal.iter().zip(base).map(|(n, x)| n * x).sum();
        let scale = normal.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let tol = 1e-9 * (1.0 + c.abs()) * (1.0 + scale);
        let mut above = false;
        let mut below = false;
        for p in vertices {
            let val: f64 = normal.iter().zip(p).map(|(n, x)| n * x).sum();
            if val > c + tol {
                above = true;
            }
            if val < c - tol {
                below = true;
            }
            if above && below {
                return;
            }
        }
        let (n, cc) = if above {
            (normal.iter().map(|x| -x).collect::<Vec<f64>>(), -c)
        } else {
            (normal, c)
        };
        let dup = facets.iter().any(|(fn_, fc)| {
            let cos: f64 = fn_.iter().zip(&n).map(|(a, b)| a * b).sum::<f64>()
                / (norm(fn_) * norm(&n));
            cos > 1.0 - 1e-9 && (fc / norm(fn_) - cc / norm(&n)).abs() < 1e-9
        });
        if !dup {
            facets.push((n, cc));
        }
    });
    Ok(facets)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn enumerate_subsets(
    idx: &[usize],
    k: usize,
    cur: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(cur);
        return;
    }
    for i in start..idx.len() {
        cur[depth] = idx[i];
        enumerate_subsets(idx, k, cur, depth + 1, i + 1, f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn triangle_from_three_points() {
        let h = convex_hull_in_chart(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(h.vertices.len(), 3);
        assert_eq!(h.facets.len(), 3);
        assert!(!h.degenerate);
        assert!(h.contains(&[0.2, 0.2]));
        assert!(!h.contains(&[0.9, 0.9]));
    }

    #[test]
    fn center_absorbed_in_square() {
        let h = convex_hull_in_chart(&[
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(h.vertices.len(), 4);
    }

    #[test]
    fn collinear_points_flagged() {
        let h = convex_hull_in_chart(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert!(h.degenerate);
        assert_eq!(h.vertices.len(), 2);
    }

    #[test]
    fn idempotent_on_vertices() {
        let pts = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.3],
            vec![1.0, 2.0],
            vec![-0.5, 1.0],
        ];
        let h1 = convex_hull_in_chart(&pts).unwrap();
        let h2 = convex_hull_in_chart(&h1.vertices).unwrap();
        let mut a = h1.vertices.clone();
        let mut b = h2.vertices.clone();
        let key = |v: &Vec<f64>| (v[0] * 1e9) as i64 * 31 + (v[1] * 1e9) as i64;
        a.sort_by_key(key);
        b.sort_by_key(key);
        assert_eq!(a, b);
    }

    /// O(n^3) pairwise-orientation oracle for planar hull vertices.
    pub fn brute_force_hull_vertices(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = points.len();
        let mut verts = Vec::new();
        'outer: for i in 0..n {
            // i is a hull vertex iff some direction separates it: equivalently
            // it is not a convex combination; detect via supporting line:
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut pos = 0;
                let mut neg = 0;
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let c = (points[j][0] - points[i][0]) * (points[k][1] - points[i][1])
                        - (points[j][1] - points[i][1]) * (points[k][0] - points[i][0]);
                    if c > 1e-12 {
                        pos += 1;
                    } else if c < -1e-12 {
                        neg += 1;
                    }
                }
                if pos == 0 || neg == 0 {
                    verts.push(points[i].clone());
                    continue 'outer;
                }
            }
        }
        verts
    }

    #[test]
    fn agrees_with_orientation_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..40 {
            let n = rng.gen_range(5..25);
            let pts: Vec<Vec<f64>> = (0..n)
                .map(|_| {
                    let r: f64 = rng.gen_range(0.0..1.0);
                    let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    vec![r.sqrt() * t.cos(), r.sqrt() * t.sin()]
                })
                .collect();
            let h = convex_hull_in_chart(&pts).unwrap();
            let mut got = h.vertices.clone();
            let mut want = brute_force_hull_vertices(&pts);
            let key = |v: &Vec<f64>| ((v[0] * 1e9) as i64, (v[1] * 1e9) as i64);
            got.sort_by_key(key);
            want.sort_by_key(key);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn three_d_box_has_six_facets() {
        let mut pts = Vec::new();
        for x in [-1.0, 1.0] {
            for y in [-1.0, 1.0] {
                for z in [-1.0, 1.0] {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts.push(vec![0.0, 0.0, 0.0]);
        let h = convex_hull_in_chart(&pts).unwrap();
        assert_eq!(h.vertices.len(), 8);
        assert_eq!(h.facets.len(), 6);
        for (n, c) in &h.facets {
            for v in &h.vertices {
                let val: f64 = n.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(val <= c + 1e-9);
            }
        }
    }
}
