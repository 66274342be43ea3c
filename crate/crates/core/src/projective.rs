//! Projective points, hyperplanes, flags, cross-ratios, and group actions.
//!
//! Normalization convention throughout: scale so the maximum-absolute
//! coordinate is 1 and the first nonzero coordinate is positive. This makes
//! hashing and comparison deterministic.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::svd_f64;

pub const COLLINEARITY_TOL: f64 = 1e-10;
pub const TRANSVERSALITY_TOL: f64 = 1e-10;
pub const INCIDENCE_TOL: f64 = 1e-12;

/// Normalize a homogeneous vector in place per the crate convention.
pub fn normalize_homogeneous(v: &mut DVector<f64>) -> Result<()> {
    let max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return Err(Error::Degenerate("zero or non-finite homogeneous vector".into()));
    }
    *v /= max;
    if let Some(first) = v.iter().find(|x| x.abs() > 0.0) {
        if *first < 0.0 {
            *v = -v.clone();
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProjHyperplane {
    covector: DVector<f64>,
}

impl ProjPoint {
    pub fn new(coords: DVector<f64>) -> Result<Self> {
        let mut coords = coords;
        normalize_homogeneous(&mut coords)?;
        Ok(ProjPoint { coords })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        ProjPoint::new(DVector::from_column_slice(v))
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Angular distance in [0, pi/2] between the two projective points.
    pub fn angle_to(&self, other: &ProjPoint) -> f64 {
        angle_between(&self.coords, &other.coords)
    }
}

impl ProjHyperplane {
    pub fn new(covector: DVector<f64>) -> Result<Self> {
        let mut covector = covector;
        normalize_homogeneous(&mut covector)?;
        Ok(ProjHyperplane { covector })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        ProjHyperplane::new(DVector::from_column_slice(v))
    }

    pub fn covector(&self) -> &DVector<f64> {
        &self.covector
    }

    pub fn dim(&self) -> usize {
        self.covector.len()
    }

    /// Pairing <phi, p> on normalized representatives.
    pub fn pair(&self, p: &ProjPoint) -> f64 {
        self.covector.dot(p.coords())
    }

    pub fn angle_to(&self, other: &ProjHyperplane) -> f64 {
        angle_between(&self.covector, &other.covector)
    }
}

pub fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let c = (a.dot(b) / (a.norm() * b.norm())).abs().min(1.0);
    c.acos()
}

/// A point-hyperplane pair. Incidence is required only where an operation
/// says so; transversality queries are allowed on any pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub point: ProjPoint,
    pub hyperplane: ProjHyperplane,
}

impl Flag {
    pub fn new(point: ProjPoint, hyperplane: ProjHyperplane) -> Result<Self> {
        if point.dim() != hyperplane.dim() {
            return Err(Error::DimMismatch("flag point/hyperplane dims".into()));
        }
        Ok(Flag { point, hyperplane })
    }

    pub fn incident(point: ProjPoint, hyperplane: ProjHyperplane) -> Result<Self> {
        let f = Flag::new(point, hyperplane)?;
        if f.hyperplane.pair(&f.point).abs() > INCIDENCE_TOL {
            return Err(Error::Precondition(format!(
                "flag not incident: |<phi,p>| = {:.3e}",
                f.hyperplane.pair(&f.point).abs()
            )));
        }
        Ok(f)
    }

    /// Max of the point and hyperplane angular distances.
    pub fn angle_to(&self, other: &Flag) -> f64 {
        self.point
            .angle_to(&other.point)
            .max(self.hyperplane.angle_to(&other.hyperplane))
    }
}

/// Cross-ratio of four collinear points, computed in a 2D basis of their
/// common line as a ratio of determinants. For points in the order a, x, y, b
/// along a chord this is the quantity whose half-log is the Hilbert distance.
pub fn cross_ratio(a: &ProjPoint, x: &ProjPoint, y: &ProjPoint, b: &ProjPoint) -> Result<f64> {
    let n = a.dim();
    for p in [x, y, b] {
        if p.dim() != n {
            return Err(Error::DimMismatch("cross-ratio point dims".into()));
        }
    }
    let mut stack = DMatrix::zeros(4, n);
    for (i, p) in [a, x, y, b].iter().enumerate() {
        stack.set_row(i, &p.coords().transpose());
    }
    let svd = svd_f64(&stack)?;
    let sig = &svd.profile.sigmas;
    if sig.len() > 2 && sig[2] > COLLINEARITY_TOL * sig[0] {
        return Err(Error::Precondition(format!(
            "points not collinear: sigma_3/sigma_1 = {:.3e}",
            sig[2] / sig[0]
        )));
    }
    if sig.len() < 2 || sig[1] <= COLLINEARITY_TOL * sig[0] {
        return Err(Error::Degenerate("all four points coincide".into()));
    }
    // Coordinates in the dominant 2D row space.
    let basis = svd.vt.rows(0, 2);
    let coord = |p: &ProjPoint| -> (f64, f64) {
        let v = &basis * p.coords();
        (v[0], v[1])
    };
    let (pa, px, py, pb) = (coord(a), coord(x), coord(y), coord(b));
    let det = |p: (f64, f64), q: (f64, f64)| p.0 * q.1 - p.1 * q.0;
    let day = det(pa, py);
    let dbx = det(pb, px);
    let dax = det(pa, px);
    let dby = det(pb, py);
    let scale = [day, dbx, dax, dby]
        .iter()
        .map(|v| v.abs())
        .fold(0.0, f64::max)
        .max(1e-300);
    if dax.abs() <= 1e-13 * scale || dby.abs() <= 1e-13 * scale {
        return Err(Error::Degenerate(
            "cross-ratio degenerate: a = x or b = y".into(),
        ));
    }
    Ok((day * dbx) / (dax * dby))
}

/// Objects a projective transformation can act on.
#[derive(Debug, Clone)]
pub enum ProjObject {
    Point(ProjPoint),
    Hyperplane(ProjHyperplane),
    Flag(Flag),
}

pub fn act_point(g: &DMatrix<f64>, p: &ProjPoint) -> Result<ProjPoint> {
    ProjPoint::new(g * p.coords())
}

pub fn act_hyperplane(g: &DMatrix<f64>, h: &ProjHyperplane) -> Result<ProjHyperplane> {
    let ginv_t = g
        .clone()
        .try_inverse()
        .ok_or(Error::Singular)?
        .transpose();
    ProjHyperplane::new(ginv_t * h.covector())
}

pub fn act_flag(g: &DMatrix<f64>, f: &Flag) -> Result<Flag> {
    Flag::new(act_point(g, &f.point)?, act_hyperplane(g, &f.hyperplane)?)
}

pub fn act(g: &DMatrix<f64>, obj: &ProjObject) -> Result<ProjObject> {
    Ok(match obj {
        ProjObject::Point(p) => ProjObject::Point(act_point(g, p)?),
        ProjObject::Hyperplane(h) => ProjObject::Hyperplane(act_hyperplane(g, h)?),
        ProjObject::Flag(f) => ProjObject::Flag(act_flag(g, f)?),
    })
}

/// Two flags are transverse when each point stays off the other hyperplane,
/// with both pairings bounded away from zero on normalized representatives.
pub fn is_transverse(f1: &Flag, f2: &Flag) -> Result<bool> {
    if f1.point.dim() != f2.point.dim() {
        return Err(Error::DimMismatch("flag dims".into()));
    }
    let p12 = f2.hyperplane.pair(&f1.point).abs();
    let p21 = f1.hyperplane.pair(&f2.point).abs();
    Ok(p12 > TRANSVERSALITY_TOL && p21 > TRANSVERSALITY_TOL)
}

/// Transversality with marginal cases surfaced instead of silently rounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transversality {
    Transverse,
    NotTransverse,
    Marginal,
}

pub fn transversality(f1: &Flag, f2: &Flag) -> Result<Transversality> {
    if f1.point.dim() != f2.point.dim() {
        return Err(Error::DimMismatch("flag dims".into()));
    }
    let worst = f2
        .hyperplane
        .pair(&f1.point)
        .abs()
        .min(f1.hyperplane.pair(&f2.point).abs());
    Ok(if worst > 10.0 * TRANSVERSALITY_TOL {
        Transversality::Transverse
    } else if worst < 0.1 * TRANSVERSALITY_TOL {
        Transversality::NotTransverse
    } else {
        Transversality::Marginal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn pt(v: &[f64]) -> ProjPoint {
        ProjPoint::from_slice(v).unwrap()
    }

    fn affine_line_pt(t: f64) -> ProjPoint {
        pt(&[t, 1.0])
    }

    #[test]
    fn cross_ratio_hand_example() {
        // a=0, x=1, y=2, b=4 on the affine line gives 3.
        let cr = cross_ratio(
            &affine_line_pt(0.0),
            &affine_line_pt(1.0),
            &affine_line_pt(2.0),
            &affine_line_pt(4.0),
        )
        .unwrap();
        assert!((cr - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cross_ratio_coincident_middle() {
        let cr = cross_ratio(
            &affine_line_pt(0.0),
            &affine_line_pt(1.5),
            &affine_line_pt(1.5),
            &affine_line_pt(4.0),
        )
        .unwrap();
        assert!((cr - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_ratio_affine_reparam_invariant() {
        // t -> 2t + 1 on all four points leaves the cross-ratio at 3.
        let f = |t: f64| affine_line_pt(2.0 * t + 1.0);
        let cr = cross_ratio(&f(0.0), &f(1.0), &f(2.0), &f(4.0)).unwrap();
        assert!((cr - 3.0).abs() < 1e-12);
    }

    #[test]
    fn cross_ratio_rejects_non_collinear() {
        let a = pt(&[1.0, 0.0, 0.0]);
        let x = pt(&[0.0, 1.0, 0.0]);
        let y = pt(&[0.0, 0.0, 1.0]);
        let b = pt(&[1.0, 1.0, 1.0]);
        assert!(cross_ratio(&a, &x, &y, &b).is_err());
    }

    #[test]
    fn cross_ratio_rejects_degenerate_pairs() {
        let a = affine_line_pt(0.0);
        assert!(cross_ratio(&a, &a, &affine_line_pt(1.0), &affine_line_pt(2.0)).is_err());
    }

    #[test]
    fn cross_ratio_projective_invariance_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let ts: Vec<f64> = vec![0.0, 1.0, 2.0, 4.0];
            let pts: Vec<ProjPoint> = ts
                .iter()
                .map(|&t| pt(&[t, 0.5 * t - 1.0, 1.0])) // a line in P^2
                .collect();
            let cr0 = cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]).unwrap();
            let g = loop {
                let m: DMatrix<f64> = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
                if m.determinant().abs() > 0.3 {
                    break m;
                }
            };
            let moved: Vec<ProjPoint> = pts.iter().map(|p| act_point(&g, p).unwrap()).collect();
            let cr1 = cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]).unwrap();
            assert!(
                (cr0 - cr1).abs() <= 1e-8 * (1.0 + cr0.abs()),
                "cr {cr0} vs {cr1}"
            );
        }
    }

    #[test]
    fn act_examples() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 1.0]);
        let p = act_point(&g, &pt(&[1.0, 1.0])).unwrap();
        assert_eq!(p, pt(&[1.0, 0.5]));
        let h = act_hyperplane(&g, &ProjHyperplane::from_slice(&[0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(h, ProjHyperplane::from_slice(&[0.0, 1.0]).unwrap());
        let f = Flag::new(
            pt(&[1.0, 0.0]),
            ProjHyperplane::from_slice(&[0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let id = DMatrix::identity(2, 2);
        assert_eq!(act_flag(&id, &f).unwrap(), f);
    }

    #[test]
    fn act_is_functorial() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let g = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0))
                + DMatrix::identity(3, 3) * 2.0;
            let h = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0))
                + DMatrix::identity(3, 3) * 2.0;
            let p = pt(&[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), 1.0]);
            let lhs = act_point(&(&g * &h), &p).unwrap();
            let rhs = act_point(&g, &act_point(&h, &p).unwrap()).unwrap();
            assert!((lhs.coords() - rhs.coords()).norm() < 1e-10);
        }
    }

    #[test]
    fn incidence_preserved_by_action() {
        let f = Flag::incident(
            pt(&[1.0, 0.0, 0.0]),
            ProjHyperplane::from_slice(&[0.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let g = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.5, 0.0, 1.0, -1.0, 0.0, 0.0, 1.0]);
        let gf = act_flag(&g, &f).unwrap();
        assert!(gf.hyperplane.pair(&gf.point).abs() < 1e-12);
    }

    #[test]
    fn transversality_cases() {
        let n = 3;
        let e = |i: usize| {
            let mut v = vec![0.0; n];
            v[i] = 1.0;
            v
        };
        let f1 = Flag::new(
            pt(&e(0)),
            ProjHyperplane::from_slice(&e(2)).unwrap(),
        )
        .unwrap();
        let f2 = Flag::new(
            pt(&e(2)),
            ProjHyperplane::from_slice(&e(0)).unwrap(),
        )
        .unwrap();
        assert!(is_transverse(&f1, &f2).unwrap());
        // A flag against itself (incident) is never transverse.
        assert!(!is_transverse(&f1, &f1).unwrap());
        // (e1, e3*) vs (e2, e1*): e1* vanishes on... both pairings evaluated.
        let f3 = Flag::new(
            pt(&e(1)),
            ProjHyperplane::from_slice(&e(0)).unwrap(),
        )
        .unwrap();
        assert!(!is_transverse(&f1, &f3).unwrap());
        // Symmetry.
        assert_eq!(
            is_transverse(&f1, &f2).unwrap(),
            is_transverse(&f2, &f1).unwrap()
        );
        assert_eq!(
            is_transverse(&f1, &f3).unwrap(),
            is_transverse(&f3, &f1).unwrap()
        );
    }
}
