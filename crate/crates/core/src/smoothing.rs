//! Smoothing of polytopal projective domains along a supporting hyperplane:
//! lift to the cone, slice a characteristic level set by a hyperplane through
//! the support, and return the result as an implicit domain.
//!
//! Concretely, for a cone C with characteristic function f_C and a supporting
//! covector b (nonpositive on C, vanishing on the supported face), the
//! smoothed domain in the projectivization is
//!     { [x] : x in C, f_C(x) * (-b(x))^n < c }.
//! The defining product is scale-invariant, exactly invariant under any
//! |det| = 1 automorphism fixing b, and its sublevel sets are convex slices
//! of the level-set body.

use crate::cone::{dot, dot_f64, ExactVec, PolyCone};
use crate::domain::{ConvexDomain, ImplicitDomain};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

/// A polytopal properly convex domain: an exact sharp cone together with a
/// chart covector from the dual interior and an affine frame for chart
/// coordinates.
#[derive(Debug, Clone)]
pub struct PolyDomain {
    pub cone: PolyCone,
    pub chart: ExactVec,
    origin: Vec<f64>,
    basis: Vec<Vec<f64>>,
}

impl PolyDomain {
    pub fn new(cone: PolyCone, chart: ExactVec) -> Result<Self> {
        for r in cone.rays() {
            if dot(&chart, r)?.signum() >= 0 {
                return Err(Error::Precondition(
                    "chart covector must be strictly negative on the cone".into(),
                ));
            }
        }
        // Affine frame for the slice {chart . x = -1}.
        let interior = cone.interior_point_f64();
        let s = dot_f64(&chart, &interior);
        let origin: Vec<f64> = interior.iter().map(|v| v / -s).collect();
        let chart_mat = Matrix::from_rows(vec![chart.clone()])?;
        let kernel = chart_mat.kernel_basis()?;
        let basis: Vec<Vec<f64>> = kernel
            .iter()
            .map(|v| v.iter().map(Scalar::to_f64).collect())
            .collect();
        Ok(PolyDomain {
            cone,
            chart,
            origin,
            basis,
        })
    }

    pub fn chart_dim(&self) -> usize {
        self.basis.len()
    }

    /// Homogeneous lift of a chart point (lands on {chart . x = -1}).
    pub fn lift(&self, v: &[f64]) -> Vec<f64> {
        let mut x = self.origin.clone();
        for (coef, b) in v.iter().zip(&self.basis) {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi += coef * bi;
            }
        }
        x
    }

    /// Chart coordinates of a homogeneous vector with chart(x) < 0.
    pub fn chart_coords(&self, x: &[f64]) -> Result<Vec<f64>> {
        let s = dot_f64(&self.chart, x);
        if s >= 0.0 {
            return Err(Error::OutsideDomain("point not on the chart side".into()));
        }
        let scaled: Vec<f64> = x.iter().map(|v| v / -s).collect();
        // Solve scaled = origin + basis * v in least squares (basis has full
        // column rank by construction).
        let n = scaled.len();
        let k = self.basis.len();
        let a = nalgebra::DMatrix::from_fn(n, k, |i, j| self.basis[j][i]);
        let rhs = nalgebra::DVector::from_fn(n, |i, _| scaled[i] - self.origin[i]);
        let sol = a
            .svd(true, true)
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::Numeric(e.to_string()))?;
        Ok(sol.iter().cloned().collect())
    }

    /// Chart vertices (the extreme rays in chart coordinates).
    pub fn vertices_chart(&self) -> Result<Vec<Vec<f64>>> {
        self.cone
            .rays()
            .iter()
            .map(|r| {
                let rf: Vec<f64> = r.iter().map(Scalar::to_f64).collect();
                self.chart_coords(&rf)
            })
            .collect()
    }
}

impl ConvexDomain for PolyDomain {
    fn dim(&self) -> usize {
        self.chart_dim()
    }

    fn contains(&self, p: &[f64]) -> bool {
        let x = self.lift(p);
        self.cone
            .facets()
            .iter()
            .all(|f| dot_f64(f, &x) < 0.0)
    }

    fn interior_point(&self) -> Vec<f64> {
        vec![0.0; self.chart_dim()]
    }
}

/// Value of the scale-invariant defining function of the smoothed domain.
pub fn smoothing_value(cone: &PolyCone, support: &ExactVec, x: &[f64]) -> Result<f64> {
    let f = cone.characteristic_function(x)?;
    let s = -dot_f64(support, x);
    if s <= 0.0 {
        return Err(Error::OutsideDomain("support side".into()));
    }
    Ok(f * s.powi(cone.dim() as i32))
}

/// Smooth a polytopal domain along a supporting hyperplane at level `c`.
///
/// The support covector must be nonpositive on the cone and vanish on at
/// least one ray. The output is an implicit domain over the same chart.
pub fn smooth_domain(
    domain: &PolyDomain,
    support: &ExactVec,
    level: f64,
) -> Result<SmoothedDomain> {
    if level <= 0.0 {
        return Err(Error::Precondition("smoothing level must be positive".into()));
    }
    let mut touches = 0usize;
    for r in domain.cone.rays() {
        match dot(support, r)?.signum() {
            0 => touches += 1,
            s if s < 0 => {}
            _ => {
                return Err(Error::Precondition(
                    "covector does not support the domain (positive on a ray)".into(),
                ))
            }
        }
    }
    if touches == 0 {
        return Err(Error::Precondition(
            "covector does not touch the boundary (not supporting)".into(),
        ));
    }
    // Seed: walk from the chart origin toward the supported face until the
    // defining value drops below the level.
    let face_rays: Vec<Vec<f64>> = domain
        .cone
        .rays()
        .iter()
        .filter(|r| dot(support, r).map(|d| d.is_zero()).unwrap_or(false))
        .map(|r| r.iter().map(Scalar::to_f64).collect())
        .collect();
    let mut face_center = vec![0.0; domain.cone.dim()];
    for r in &face_rays {
        for (fc, v) in face_center.iter_mut().zip(r) {
            *fc += v / face_rays.len() as f64;
        }
    }
    let origin = domain.lift(&vec![0.0; domain.chart_dim()]);
    let mut seed_h = None;
    let mut t = 0.0;
    for _ in 0..200 {
        let x: Vec<f64> = origin
            .iter()
            .zip(&face_center)
            .map(|(o, f)| (1.0 - t) * o + t * f)
            .collect();
        if let Ok(v) = smoothing_value(&domain.cone, support, &x) {
            if v < level {
                seed_h = Some(x);
                break;
            }
        }
        t = 0.5 + 0.5 * t; // approach the face geometrically
    }
    let seed_h = seed_h.ok_or_else(|| {
        Error::Numeric("could not find an interior seed below the smoothing level".into())
    })?;
    let seed_chart = domain.chart_coords(&seed_h)?;

    let cone = domain.cone.clone();
    let support_c = support.clone();
    let dom = domain.clone();
    let provenance = format!("smoothed level set, level {level}");
    let membership = move |p: &[f64]| -> bool {
        let x = dom.lift(p);
        matches!(smoothing_value(&cone, &support_c, &x), Ok(v) if v < level)
    };
    let implicit = ImplicitDomain::new(
        domain.chart_dim(),
        provenance,
        seed_chart,
        Box::new(membership),
    );
    Ok(SmoothedDomain {
        implicit,
        domain: domain.clone(),
        support: support.clone(),
        level,
    })
}

/// Output of the smoothing construction: the implicit domain plus the data
/// needed to audit it against the original boundary.
pub struct SmoothedDomain {
    pub implicit: ImplicitDomain,
    pub domain: PolyDomain,
    pub support: ExactVec,
    pub level: f64,
}

impl SmoothedDomain {
    pub fn value_at_chart(&self, p: &[f64]) -> Result<f64> {
        smoothing_value(&self.domain.cone, &self.support, &self.domain.lift(p))
    }

    /// Chart distance from a point to the original polytope boundary.
    pub fn chart_distance_to_original_boundary(&self, p: &[f64]) -> f64 {
        let x = self.domain.lift(p);
        let mut best = f64::INFINITY;
        for f in self.domain.cone.facets() {
            let val = dot_f64(f, &x).abs();
            let grad: Vec<f64> = self
                .domain
                .basis
                .iter()
                .map(|b| dot_f64(f, b))
                .collect();
            let g = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
            if g > 1e-300 {
                best = best.min(val / g);
            }
        }
        best
    }

    /// Chart distance from a point to the supported face of the boundary.
    pub fn chart_distance_to_support(&self, p: &[f64]) -> f64 {
        let x = self.domain.lift(p);
        let val = dot_f64(&self.support, &x).abs();
        let grad: Vec<f64> = self
            .domain
            .basis
            .iter()
            .map(|b| dot_f64(&self.support, b))
            .collect();
        let g = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
        val / g.max(1e-300)
    }
}
