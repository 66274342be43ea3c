//! Convex domain oracles and the Hilbert metric.
//!
//! Every metric operation goes through a membership predicate, so polytopes,
//! ellipsoids, graph domains, and implicit (smoothed) domains share one code
//! path. Boundary points along chords are located by bracketing + bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};


pub const BISECTION_DEPTH: usize = 60;
pub const BISECTION_EARLY_EXIT: f64 = 1e-12;
const BRACKET_LIMIT: f64 = 1e9;

/// Membership oracle for an open bounded-in-chart convex domain in R^d.
pub trait ConvexDomain {
    fn dim(&self) -> usize;
    /// True on the open domain.
    fn contains(&self, p: &[f64]) -> bool;
    /// Some interior point.
    fn interior_point(&self) -> Vec<f64>;
}

/// Chord endpoints: the boundary points a, b on the line through x, y,
/// ordered a, x, y, b.
pub fn line_boundary_intersect(
    domain: &dyn ConvexDomain,
    x: &[f64],
    y: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::OutsideDomain(
            "chord endpoints must be interior".into(),
        ));
    }
    let d: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - a).collect();
    let norm: f64 = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::Degenerate("x = y has no chord".into()));
    }
    let at = |t: f64| -> Vec<f64> { x.iter().zip(&d).map(|(a, v)| a + t * v).collect() };
    // b side: t >= 1, a side: t <= 0.
    let b_t = boundary_parameter(domain, &at, 1.0)?;
    let a_t = boundary_parameter(domain, &|t| at(-t), 0.0)?;
    Ok((at(-a_t), at(b_t)))
}

/// Smallest t >= start with at(t) on the boundary, found by doubling then
/// bisection. Errors if the ray never leaves the domain within the bracket
/// limit (treated as a boundary point at infinity by callers that allow it).
fn boundary_parameter(
    domain: &dyn ConvexDomain,
    at: &dyn Fn(f64) -> Vec<f64>,
    start: f64,
) -> Result<f64> {
    let mut lo = start;
    let mut hi = (start.abs() * 2.0).max(1.0);
    let mut found = false;
    while hi < BRACKET_LIMIT {
        if !domain.contains(&at(hi)) {
            found = true;
            break;
        }
        lo = hi;
        hi *= 2.0;
    }
    if !found {
        return Err(Error::Numeric("ray does not exit the domain".into()));
    }
    for _ in 0..BISECTION_DEPTH {
        let mid = 0.5 * (lo + hi);
        if domain.contains(&at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < BISECTION_EARLY_EXIT {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Hilbert distance: half the log of the chord cross-ratio CR(a, x, y, b).
///
/// On domains that are unbounded in the chart (graph domains), a chord may
/// exit only on one side; the missing factor degenerates to 1.
pub fn hilbert_distance(domain: &dyn ConvexDomain, x: &[f64], y: &[f64]) -> Result<f64> {
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::OutsideDomain("Hilbert distance needs interior points".into()));
    }
    let diff: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if diff == 0.0 {
        return Ok(0.0);
    }
    let d: Vec<f64> = y.iter().zip(x).map(|(b, a)| b - a).collect();
    let at = |t: f64| -> Vec<f64> { x.iter().zip(&d).map(|(a, v)| a + t * v).collect() };
    // Parameters along the chord: a at t=-ta, x at 0, y at 1, b at tb.
    let tb = boundary_parameter(domain, &at, 1.0).ok();
    let ta = boundary_parameter(domain, &|t| at(-t), 0.0).ok();
    // CR(a,x,y,b) in the affine parameter of the chord:
    // (|a-y| / |a-x|) * (|b-x| / |b-y|) = ((ta+1)/ta) * (tb/(tb-1)).
    let factor_a = match ta {
        Some(ta) => (ta + 1.0) / ta,
        None => 1.0,
    };
    let factor_b = match tb {
        Some(tb) => tb / (tb - 1.0),
        None => 1.0,
    };
    if !(factor_a * factor_b).is_finite() || factor_a * factor_b <= 0.0 {
        return Err(Error::Numeric("degenerate chord cross-ratio".into()));
    }
    Ok(0.5 * (factor_a * factor_b).ln())
}

/// Open convex hull of a finite vertex set. Facets are precomputed at
/// construction so membership is exact to float precision, which the
/// 1e-12 boundary bisection needs (LP feasibility is too fuzzy for that).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeDomain {
    pub vertices: Vec<Vec<f64>>,
    facets: Vec<(Vec<f64>, f64)>,
    dim: usize,
}

impl PolytopeDomain {
    pub fn new(vertices: Vec<Vec<f64>>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Degenerate("polytope needs vertices".into()));
        }
        let dim = vertices[0].len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(Error::DimMismatch("ragged vertex list".into()));
        }
        let hull = crate::hull::convex_hull_in_chart(&vertices)?;
        if hull.degenerate || hull.facets.is_empty() {
            return Err(Error::Degenerate(
                "polytope domain must be full-dimensional".into(),
            ));
        }
        Ok(PolytopeDomain {
            vertices: hull.vertices,
            facets: hull.facets,
            dim,
        })
    }
}

impl ConvexDomain for PolytopeDomain {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, p: &[f64]) -> bool {
        self.facets
            .iter()
            .all(|(n, c)| n.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() < *c)
    }

    fn interior_point(&self) -> Vec<f64> {
        let k = self.vertices.len() as f64;
        let mut c = vec![0.0; self.dim];
        for v in &self.vertices {
            for i in 0..self.dim {
                c[i] += v[i] / k;
            }
        }
        c
    }
}

/// Open ellipsoid `{x : x^T A x < 1}` for a positive definite shape matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipsoidDomain {
    pub shape_matrix: Vec<Vec<f64>>,
}

impl EllipsoidDomain {
    pub fn unit_ball(dim: usize) -> Self {
        let shape = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        EllipsoidDomain { shape_matrix: shape }
    }

    fn quad_form(&self, p: &[f64]) -> f64 {
        let n = self.shape_matrix.len();
        let mut q = 0.0;
        for i in 0..n {
            for j in 0..n {
                q += p[i] * self.shape_matrix[i][j] * p[j];
            }
        }
        q
    }
}

impl ConvexDomain for EllipsoidDomain {
    fn dim(&self) -> usize {
        self.shape_matrix.len()
    }

    fn contains(&self, p: &[f64]) -> bool {
        self.quad_form(p) < 1.0
    }

    fn interior_point(&self) -> Vec<f64> {
        vec![0.0; self.dim()]
    }
}

/// Epigraph domain `{(V, t) : t > phi(V)}` for a strictly convex graph
/// function; unbounded in this chart, properly convex projectively.
#[derive(Debug, Clone)]
pub struct GraphDomain {
    pub dim: usize,
    pub phi: GraphFn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFn {
    /// phi(V) = ||V||^2 / 2
    Quadratic,
}

impl GraphFn {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            GraphFn::Quadratic => 0.5 * v.iter().map(|x| x * x).sum::<f64>(),
        }
    }

    pub fn gradient(&self, v: &[f64]) -> Vec<f64> {
        match self {
            GraphFn::Quadratic => v.to_vec(),
        }
    }

    /// Hessian is constant for the quadratic graph.
    pub fn hessian(&self, v: &[f64]) -> Vec<Vec<f64>> {
        match self {
            GraphFn::Quadratic => {
                let d = v.len();
                (0..d)
                    .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                    .collect()
            }
        }
    }

    /// Domain of definition is all of R^{d} for the quadratic graph.
    pub fn domain_is_full(&self) -> bool {
        match self {
            GraphFn::Quadratic => true,
        }
    }
}

impl ConvexDomain for GraphDomain {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, p: &[f64]) -> bool {
        let (v, t) = p.split_at(self.dim - 1);
        t[0] > self.phi.eval(v)
    }

    fn interior_point(&self) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        p[self.dim - 1] = 1.0;
        p
    }
}

/// A domain given only by a membership predicate and provenance tag, e.g.
/// the output of the smoothing construction.
pub struct ImplicitDomain {
    pub dim: usize,
    pub provenance: String,
    membership: Box<dyn Fn(&[f64]) -> bool + Send + Sync>,
    seed: Vec<f64>,
}

impl ImplicitDomain {
    pub fn new(
        dim: usize,
        provenance: String,
        seed: Vec<f64>,
        membership: Box<dyn Fn(&[f64]) -> bool + Send + Sync>,
    ) -> Self {
        ImplicitDomain {
            dim,
            provenance,
            membership,
            seed,
        }
    }

    /// Sample a boundary point along the ray from the seed through `dir`.
    pub fn boundary_sample(&self, dir: &[f64]) -> Result<Vec<f64>> {
        let at = |t: f64| -> Vec<f64> {
            self.seed
                .iter()
                .zip(dir)
                .map(|(s, d)| s + t * d)
                .collect()
        };
        let t = boundary_parameter(self, &at, 0.0)?;
        Ok(at(t))
    }

    /// Midpoint convexity spot check on sampled interior pairs.
    pub fn midpoint_convex_on(&self, pairs: &[(Vec<f64>, Vec<f64>)]) -> bool {
        pairs.iter().all(|(a, b)| {
            if !(self.contains(a) && self.contains(b)) {
                return true;
            }
            let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
            self.contains(&mid)
        })
    }
}

impl std::fmt::Debug for ImplicitDomain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ImplicitDomain({} dim {})", self.provenance, self.dim)
    }
}

impl ConvexDomain for ImplicitDomain {
    fn dim(&self) -> usize {
        self.dim
    }

    fn contains(&self, p: &[f64]) -> bool {
        (self.membership)(p)
    }

    fn interior_point(&self) -> Vec<f64> {
        self.seed.clone()
    }
}

/// Wire format for domains:
/// `{"kind":"polytope"|"ellipsoid"|"graph", "dim":n, ...}` with `vertices`,
/// `shape_matrix`, or `phi` as the kind requires.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Polytope { dim: usize, vertices: Vec<Vec<f64>> },
    Ellipsoid { dim: usize, shape_matrix: Vec<Vec<f64>> },
    Graph { dim: usize, phi: GraphFn },
}

impl DomainSpec {
    pub fn build(&self) -> Result<Box<dyn ConvexDomain + Send + Sync>> {
        match self {
            DomainSpec::Polytope { dim, vertices } => {
                let p = PolytopeDomain::new(vertices.clone())?;
                if p.dim() != *dim {
                    return Err(Error::DimMismatch("polytope dim field".into()));
                }
                Ok(Box::new(p))
            }
            DomainSpec::Ellipsoid { dim, shape_matrix } => {
                if shape_matrix.len() != *dim {
                    return Err(Error::DimMismatch("ellipsoid dim field".into()));
                }
                Ok(Box::new(EllipsoidDomain {
                    shape_matrix: shape_matrix.clone(),
                }))
            }
            DomainSpec::Graph { dim, phi } => Ok(Box::new(GraphDomain {
                dim: *dim,
                phi: *phi,
            })),
        }
    }
}

/// Closed-form Klein-model hyperbolic distance on the unit ball, used as the
/// independent oracle for the Hilbert metric on the disk.
pub fn klein_distance(x: &[f64], y: &[f64]) -> f64 {
    let xx: f64 = 1.0 - x.iter().map(|v| v * v).sum::<f64>();
    let yy: f64 = 1.0 - y.iter().map(|v| v * v).sum::<f64>();
    let xy: f64 = 1.0 - x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    (xy / (xx * yy).sqrt()).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn interval_chord() {
        let seg = PolytopeDomain::new(vec![vec![-1.0], vec![1.0]]).unwrap();
        let (a, b) = line_boundary_intersect(&seg, &[0.0], &[0.5]).unwrap();
        assert!((a[0] + 1.0).abs() < 1e-10);
        assert!((b[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn disk_chord() {
        let disk = EllipsoidDomain::unit_ball(2);
        let (a, b) = line_boundary_intersect(&disk, &[0.0, 0.0], &[0.5, 0.0]).unwrap();
        assert!((a[0] + 1.0).abs() < 1e-10 && a[1].abs() < 1e-12);
        assert!((b[0] - 1.0).abs() < 1e-10 && b[1].abs() < 1e-12);
    }

    #[test]
    fn square_diagonal_chord_hits_corners() {
        let sq = PolytopeDomain::new(vec![
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        let (a, b) = line_boundary_intersect(&sq, &[-0.2, -0.2], &[0.3, 0.3]).unwrap();
        assert!((a[0] + 1.0).abs() < 1e-9 && (a[1] + 1.0).abs() < 1e-9);
        assert!((b[0] - 1.0).abs() < 1e-9 && (b[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn outside_points_rejected() {
        let seg = PolytopeDomain::new(vec![vec![-1.0], vec![1.0]]).unwrap();
        assert!(line_boundary_intersect(&seg, &[2.0], &[0.0]).is_err());
        assert!(hilbert_distance(&seg, &[2.0], &[0.0]).is_err());
    }

    #[test]
    fn hilbert_on_interval() {
        let seg = PolytopeDomain::new(vec![vec![-1.0], vec![1.0]]).unwrap();
        assert_eq!(hilbert_distance(&seg, &[0.0], &[0.0]).unwrap(), 0.0);
        let d = hilbert_distance(&seg, &[0.0], &[0.5]).unwrap();
        assert!((d - 0.5 * 3.0f64.ln()).abs() < 1e-9, "got {d}");
    }

    #[test]
    fn hilbert_matches_klein_on_disk() {
        let disk = EllipsoidDomain::unit_ball(2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..25 {
            let mut sample = || loop {
                let p = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                if p[0] * p[0] + p[1] * p[1] < 0.9 {
                    break p.to_vec();
                }
            };
            let x = sample();
            let y = sample();
            let d = hilbert_distance(&disk, &x, &y).unwrap();
            let k = klein_distance(&x, &y);
            assert!((d - k).abs() < 1e-6, "hilbert {d} klein {k}");
        }
    }

    #[test]
    fn hilbert_symmetry_and_triangle() {
        let sq = PolytopeDomain::new(vec![
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
        ])
        .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let mut p = || vec![rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9)];
            let (x, y, z) = (p(), p(), p());
            let dxy = hilbert_distance(&sq, &x, &y).unwrap();
            let dyx = hilbert_distance(&sq, &y, &x).unwrap();
            assert!((dxy - dyx).abs() < 1e-9);
            let dxz = hilbert_distance(&sq, &x, &z).unwrap();
            let dzy = hilbert_distance(&sq, &z, &y).unwrap();
            assert!(dxy <= dxz + dzy + 1e-8);
        }
    }

    #[test]
    fn graph_domain_one_sided_chord() {
        let g = GraphDomain {
            dim: 2,
            phi: GraphFn::Quadratic,
        };
        // Vertical chord exits only downward; distance still defined.
        let d = hilbert_distance(&g, &[0.0, 1.0], &[0.0, 2.0]).unwrap();
        assert!(d.is_finite() && d > 0.0);
    }

    #[test]
    fn domain_spec_json() {
        let j = r#"{"kind":"ellipsoid","dim":2,"shape_matrix":[[1.0,0.0],[0.0,1.0]]}"#;
        let spec: DomainSpec = serde_json::from_str(j).unwrap();
        let d = spec.build().unwrap();
        assert!(d.contains(&[0.5, 0.0]));
        assert!(!d.contains(&[1.5, 0.0]));
    }
}
