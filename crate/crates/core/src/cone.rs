//! Polytopal sharp convex cones with exact ray/facet descriptions, the
//! duality involution, dual triangulations, and the characteristic function
//! machinery built on them.
//!
//! Sign convention: a facet covector `b` of a cone `C` satisfies `b(x) <= 0`
//! on the closure of `C`, and the dual cone is the set of covectors strictly
//! negative on `closure(C) - 0`. Facet covectors of `C` are then exactly the
//! extreme rays of the dual cone, so one polar enumeration serves both
//! directions.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::projective::ProjHyperplane;
use crate::scalar::{Scalar, ScalarKind};

pub type ExactVec = Vec<Scalar>;

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    if a.len() != b.len() {
        return Err(Error::DimMismatch("dot of unequal lengths".into()));
    }
    let mut acc = Scalar::zero(a[0].kind());
    for (x, y) in a.iter().zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.checked_add(&x.checked_mul(y)?)?;
    }
    Ok(acc)
}

pub fn dot_f64(a: &[Scalar], x: &[f64]) -> f64 {
    a.iter().zip(x).map(|(s, v)| s.to_f64() * v).sum()
}

pub fn scalar_cmp(a: &Scalar, b: &Scalar) -> Ordering {
    match (a, b) {
        (Scalar::Float(x), Scalar::Float(y)) => x.total_cmp(y),
        _ => match a.checked_sub(b) {
            Ok(d) => match d.signum() {
                s if s < 0 => Ordering::Less,
                0 => Ordering::Equal,
                _ => Ordering::Greater,
            },
            Err(_) => Ordering::Equal,
        },
    }
}

pub fn vec_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match scalar_cmp(x, y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Scale so the maximum-absolute coordinate is 1, preserving orientation.
/// Exact for exact kinds. Rays and covectors of cones carry meaningful signs,
/// so no sign flip happens here; use [`normalize_projective`] for projective
/// classes where v and -v coincide.
pub fn normalize_ray(v: &[Scalar]) -> Result<ExactVec> {
    let mut max: Option<Scalar> = None;
    for s in v {
        let a = s.abs();
        max = Some(match max {
            None => a,
            Some(m) => {
                if scalar_cmp(&a, &m) == Ordering::Greater {
                    a
                } else {
                    m
                }
            }
        });
    }
    let max = max.ok_or_else(|| Error::Degenerate("empty vector".into()))?;
    if max.is_zero() {
        return Err(Error::Degenerate("zero vector".into()));
    }
    v.iter().map(|s| s.checked_div(&max)).collect()
}

/// Max-abs scaling with the first nonzero coordinate made positive.
pub fn normalize_projective(v: &[Scalar]) -> Result<ExactVec> {
    let mut out = normalize_ray(v)?;
    if let Some(first) = out.iter().find(|s| !s.is_zero()) {
        if first.signum() < 0 {
            out = out.iter().map(|s| s.neg()).collect();
        }
    }
    Ok(out)
}

fn dedup_normalized(mut vs: Vec<ExactVec>) -> Vec<ExactVec> {
    vs.sort_by(|a, b| vec_cmp(a, b));
    vs.dedup();
    vs
}

/// Rank and pivot columns of the span of `vs` (rows), by exact elimination.
pub fn rank_profile(vs: &[ExactVec], dim: usize) -> Result<(usize, Vec<usize>)> {
    if vs.is_empty() {
        return Ok((0, Vec::new()));
    }
    let kind = vs[0][0].kind();
    let mut m: Vec<ExactVec> = vs.to_vec();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..dim {
        let mut pivot = None;
        for row in r..rows {
            if !m[row][c].is_zero() {
                pivot = Some(row);
                break;
            }
        }
        let Some(p) = pivot else { continue };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in 0..dim {
            m[r][j] = m[r][j].checked_div(&pv)?;
        }
        for row in 0..rows {
            if row == r {
                continue;
            }
            let f = m[row][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..dim {
                let s = f.checked_mul(&m[r][j])?;
                m[row][j] = m[row][j].checked_sub(&s)?;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let _ = kind;
    Ok((r, pivots))
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// One-dimensional exact nullspace of the span of `vs` inside R^dim, if the
/// span has rank dim - 1. Returns a normalized generator.
fn nullspace_line(vs: &[&ExactVec], dim: usize, kind: ScalarKind) -> Result<Option<ExactVec>> {
    let rows: Vec<Vec<Scalar>> = vs.iter().map(|v| (*v).clone()).collect();
    if rows.is_empty() {
        if dim == 1 {
            return Ok(Some(vec![Scalar::one(kind)]));
        }
        return Ok(None);
    }
    let m = Matrix::from_rows(rows)?;
    let basis = m.kernel_basis()?;
    if basis.len() != 1 {
        return Ok(None);
    }
    Ok(Some(normalize_ray(&basis[0])?))
}

/// Extreme rays of the polar cone `{ y : v . y <= 0 for all v in vs }`,
/// assuming the polar is sharp (callers check rank afterwards). Each extreme
/// ray lies on dim-1 independent active constraints.
pub fn polar_extreme_rays(vs: &[ExactVec], dim: usize) -> Result<Vec<ExactVec>> {
    if vs.is_empty() {
        return Ok(Vec::new());
    }
    let kind = vs[0][0].kind();
    let mut found: Vec<ExactVec> = Vec::new();
    for subset in k_subsets(vs.len(), dim.saturating_sub(1)) {
        let chosen: Vec<&ExactVec> = subset.iter().map(|&i| &vs[i]).collect();
        let Some(candidate) = nullspace_line(&chosen, dim, kind)? else {
            continue;
        };
        let mut pos = false;
        let mut neg = false;
        for v in vs {
            match dot(v, &candidate)?.signum() {
                s if s > 0 => pos = true,
                s if s < 0 => neg = true,
                _ => {}
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue;
        }
        let ray = if pos {
            normalize_ray(&candidate.iter().map(|s| s.neg()).collect::<Vec<_>>())?
        } else {
            candidate
        };
        found.push(ray);
    }
    Ok(dedup_normalized(found))
}

/// A simplicial cone of the dual triangulation: `dim` facet covectors of the
/// primal cone together with the absolute determinant of their matrix.
#[derive(Debug, Clone)]
pub struct DualSimplex {
    pub covectors: Vec<ExactVec>,
    pub abs_det: f64,
}

/// Polytopal sharp convex cone: extreme rays, facet covectors, and a
/// triangulation of the dual cone used by the characteristic function.
#[derive(Debug, Clone)]
pub struct PolyCone {
    dim: usize,
    kind: ScalarKind,
    rays: Vec<ExactVec>,
    facets: Vec<ExactVec>,
    dual_triangulation: Vec<DualSimplex>,
}

impl PolyCone {
    /// Build from generating rays. Requires a full-dimensional sharp cone;
    /// a cone whose dual has empty interior is flagged, not silently returned.
    pub fn from_rays(dim: usize, rays: Vec<ExactVec>) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::Degenerate("no rays".into()));
        }
        let kind = rays[0][0].kind();
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimMismatch("ray length".into()));
            }
            for s in r {
                if s.kind() != kind {
                    return Err(Error::KindMismatch {
                        expected: kind,
                        got: s.kind(),
                    });
                }
            }
        }
        let rays: Vec<ExactVec> = rays
            .iter()
            .map(|r| normalize_ray(r))
            .collect::<Result<_>>()?;
        let rays = dedup_normalized(rays);
        let (rank, _) = rank_profile(&rays, dim)?;
        if rank < dim {
            return Err(Error::Degenerate(format!(
                "cone spans only {rank} of {dim} dimensions"
            )));
        }
        let facets = polar_extreme_rays(&rays, dim)?;
        let (facet_rank, _) = rank_profile(&facets, dim).unwrap_or((0, vec![]));
        if facet_rank < dim || !has_strict_interior(&facets, &rays)? {
            return Err(Error::ConeNotSharp);
        }
        // Prune non-extreme rays: an extreme ray lies on dim-1 independent facets.
        let mut extreme = Vec::new();
        for r in &rays {
            let active: Vec<ExactVec> = facets
                .iter()
                .filter(|f| dot(f, r).map(|d| d.is_zero()).unwrap_or(false))
                .cloned()
                .collect();
            let (ar, _) = rank_profile(&active, dim)?;
            if ar == dim - 1 {
                extreme.push(r.clone());
            }
        }
        let extreme = dedup_normalized(extreme);
        let dual_triangulation = triangulate_dual(&facets, dim)?;
        Ok(PolyCone {
            dim,
            kind,
            rays: extreme,
            facets,
            dual_triangulation,
        })
    }

    /// Build from facet covectors (each nonpositive on the cone).
    pub fn from_facets(dim: usize, facets: Vec<ExactVec>) -> Result<Self> {
        let rays = polar_extreme_rays(&facets, dim)?;
        if rays.is_empty() {
            return Err(Error::Degenerate("facet system has no rays".into()));
        }
        PolyCone::from_rays(dim, rays)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn rays(&self) -> &[ExactVec] {
        &self.rays
    }

    pub fn facets(&self) -> &[ExactVec] {
        &self.facets
    }

    pub fn dual_triangulation(&self) -> &[DualSimplex] {
        &self.dual_triangulation
    }

    /// The dual cone `{a : a(x) < 0 on closure(C) - 0}` with ray and facet
    /// roles swapped; exact.
    pub fn dual(&self) -> Result<PolyCone> {
        PolyCone::from_rays(self.dim, self.facets.clone())
    }

    /// Image cone g . C (rays map by g, facets by inverse transpose).
    pub fn transform(&self, g: &Matrix) -> Result<PolyCone> {
        if g.rows() != self.dim || g.cols() != self.dim {
            return Err(Error::DimMismatch("cone transform".into()));
        }
        let rays: Vec<ExactVec> = self
            .rays
            .iter()
            .map(|r| g.mul_vec(r))
            .collect::<Result<_>>()?;
        PolyCone::from_rays(self.dim, rays)
    }

    /// Strictly-interior test for a float point.
    pub fn contains_interior_f64(&self, x: &[f64], margin: f64) -> bool {
        self.facets.iter().all(|f| dot_f64(f, x) < -margin)
    }

    /// An interior point: the sum of the extreme rays (float embedding).
    pub fn interior_point_f64(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        for r in &self.rays {
            for (i, s) in r.iter().enumerate() {
                p[i] += s.to_f64();
            }
        }
        p
    }

    pub fn canonical_rays(&self) -> Vec<ExactVec> {
        self.rays.clone()
    }

    /// Exact set equality of extreme rays and facets.
    pub fn same_cone(&self, other: &PolyCone) -> bool {
        self.dim == other.dim && self.rays == other.rays && self.facets == other.facets
    }

    /// Characteristic function at an interior point: the integral of
    /// `exp(a(x))` over the dual cone, evaluated as a sum over the dual
    /// triangulation of `|det B| / prod_i (-b_i(x))`.
    pub fn characteristic_function(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimMismatch("characteristic point".into()));
        }
        let mut total = 0.0;
        for simplex in &self.dual_triangulation {
            let mut denom = 1.0;
            for b in &simplex.covectors {
                let v = -dot_f64(b, x);
                if v <= 0.0 {
                    return Err(Error::OutsideDomain(
                        "characteristic function needs a strictly interior point".into(),
                    ));
                }
                denom *= v;
            }
            total += simplex.abs_det / denom;
        }
        if !total.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(total)
    }

    /// Gradient of the characteristic function; lies in the (open) dual cone.
    pub fn characteristic_gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut grad = vec![0.0; self.dim];
        for simplex in &self.dual_triangulation {
            let mut term = simplex.abs_det;
            for b in &simplex.covectors {
                let v = -dot_f64(b, x);
                if v <= 0.0 {
                    return Err(Error::OutsideDomain(
                        "gradient needs a strictly interior point".into(),
                    ));
                }
                term /= v;
            }
            for b in &simplex.covectors {
                let v = -dot_f64(b, x);
                for (i, s) in b.iter().enumerate() {
                    grad[i] += term * s.to_f64() / v;
                }
            }
        }
        Ok(grad)
    }

    /// Tangent direction of the characteristic level set through `x`,
    /// projectivized; an equivariant diffeomorphism onto the dual domain.
    pub fn dual_map(&self, x: &[f64]) -> Result<ProjHyperplane> {
        let g = self.characteristic_gradient(&x.to_vec())?;
        let norm: f64 = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Degenerate("degenerate characteristic gradient".into()));
        }
        ProjHyperplane::from_slice(&g)
    }

    /// Radially project lifts of `points` onto the level set `{f_C = level}`,
    /// average, and return the (interior) mean point. Invariant under any
    /// |det| = 1 automorphism of the cone permuting the point set.
    pub fn center_of_mass(&self, points: &[Vec<f64>], level: f64) -> Result<Vec<f64>> {
        if points.is_empty() {
            return Err(Error::Precondition("empty point set".into()));
        }
        if level <= 0.0 {
            return Err(Error::Precondition("level must be positive".into()));
        }
        let n = self.dim as f64;
        let mut mean = vec![0.0; self.dim];
        for p in points {
            let f = self.characteristic_function(p)?;
            let t = (f / level).powf(1.0 / n);
            for i in 0..self.dim {
                mean[i] += t * p[i] / points.len() as f64;
            }
        }
        Ok(mean)
    }
}

fn has_strict_interior(dual_rays: &[ExactVec], rays: &[ExactVec]) -> Result<bool> {
    if dual_rays.is_empty() {
        return Ok(false);
    }
    let kind = dual_rays[0][0].kind();
    let dim = dual_rays[0].len();
    let mut alpha = vec![Scalar::zero(kind); dim];
    for d in dual_rays {
        for (i, s) in d.iter().enumerate() {
            alpha[i] = alpha[i].checked_add(s)?;
        }
    }
    for r in rays {
        if dot(&alpha, r)?.signum() >= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sharpness: the dual cone has nonempty interior.
pub fn is_sharp(dim: usize, rays: &[ExactVec]) -> Result<bool> {
    let rays: Vec<ExactVec> = rays
        .iter()
        .map(|r| normalize_ray(r))
        .collect::<Result<_>>()?;
    let dual_rays = polar_extreme_rays(&rays, dim)?;
    let (rank, _) = rank_profile(&dual_rays, dim)?;
    if rank < dim {
        return Ok(false);
    }
    has_strict_interior(&dual_rays, &rays)
}

/// Pulling triangulation of the cone spanned by `gens` (assumed extreme,
/// full rank `dim`): returns simplicial covector tuples with determinants.
fn triangulate_dual(gens: &[ExactVec], dim: usize) -> Result<Vec<DualSimplex>> {
    let index_tuples = triangulate_cone_indices(gens, dim)?;
    let mut out = Vec::with_capacity(index_tuples.len());
    for tuple in index_tuples {
        let covectors: Vec<ExactVec> = tuple.iter().map(|&i| gens[i].clone()).collect();
        let m = Matrix::from_rows(covectors.clone())?;
        let det = m.det()?.to_f64().abs();
        if det == 0.0 {
            return Err(Error::Degenerate("flat simplex in triangulation".into()));
        }
        out.push(DualSimplex {
            covectors,
            abs_det: det,
        });
    }
    Ok(out)
}

/// Recursive pulling triangulation on index sets; works inside proper
/// subspaces by projecting to pivot coordinates.
fn triangulate_cone_indices(gens: &[ExactVec], dim: usize) -> Result<Vec<Vec<usize>>> {
    let (rank, pivots) = rank_profile(gens, dim)?;
    if gens.len() < rank {
        return Err(Error::Degenerate("not enough generators".into()));
    }
    if gens.len() == rank {
        return Ok(vec![(0..gens.len()).collect()]);
    }
    // Project onto pivot coordinates so the sub-cone is full-dimensional.
    let proj: Vec<ExactVec> = gens
        .iter()
        .map(|g| pivots.iter().map(|&c| g[c].clone()).collect())
        .collect();
    let facets = polar_extreme_rays(&proj, rank)?;
    let apex = 0usize;
    let mut out = Vec::new();
    for f in &facets {
        let apex_val = dot(f, &proj[apex])?;
        if apex_val.is_zero() {
            continue; // facet contains the apex
        }
        let members: Vec<usize> = (0..gens.len())
            .filter(|&i| dot(f, &proj[i]).map(|d| d.is_zero()).unwrap_or(false))
            .collect();
        if members.is_empty() {
            continue;
        }
        let sub_gens: Vec<ExactVec> = members.iter().map(|&i| proj[i].clone()).collect();
        for sub in triangulate_cone_indices(&sub_gens, rank)? {
            let mut tuple = vec![apex];
            tuple.extend(sub.iter().map(|&j| members[j]));
            out.push(tuple);
        }
    }
    if out.is_empty() {
        return Err(Error::Degenerate("triangulation produced no simplices".into()));
    }
    Ok(out)
}
