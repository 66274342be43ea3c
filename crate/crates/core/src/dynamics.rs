//! Group dynamics diagnostics: Cartan-projection divergence profiles, limit
//! flag estimation, automorphism classification, weak-unipotence checking,
//! and fixed-pair detection.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{MatrixGroup, WordSample};
use crate::linalg::{eigen_moduli, nullspace_f64, svd_f64};
use crate::matrix::Matrix;
use crate::projective::{Flag, ProjHyperplane, ProjPoint};
use crate::scalar::{Scalar, ScalarKind};
use crate::verdict::{Condition, ConditionVerdict, SampleMeta, VerdictStatus};

pub const DIVERGENCE_GATE: f64 = 1e3;
pub const BOOST_TARGET: f64 = 1e10;
pub const CLUSTER_RADIUS: f64 = 1e-2;

/// Per-word-length minima of singular value gaps plus growth fit data.
#[derive(Debug, Clone, Serialize)]
pub struct DivergenceReport {
    pub per_length: Vec<LengthStats>,
    /// Log-log slope of min sigma_1/sigma_2 against word length, fitted on
    /// the upper half of the available lengths.
    pub fit_exponent: Option<f64>,
    /// Per-k flags: min gap ratio non-decreasing in length.
    pub monotone_gaps: Vec<bool>,
    pub limit_data: Option<LimitFlagReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LengthStats {
    pub length: usize,
    /// min over elements of this length of sigma_k / sigma_{k+1}, k = 1..n-1
    pub min_gap: Vec<f64>,
    pub max_entry_norm: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagCluster {
    pub point: Vec<f64>,
    pub hyperplane: Vec<f64>,
    pub members: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitFlagReport {
    pub point_clusters: Vec<FlagCluster>,
    pub max_cluster_radius: f64,
    pub skipped: usize,
}

pub fn divergence_diagnostics(samples: &[WordSample]) -> Result<DivergenceReport> {
    if samples.is_empty() {
        return Err(Error::Precondition("no samples".into()));
    }
    let n = samples[0].element.rows();
    let mut by_length: std::collections::BTreeMap<usize, Vec<&WordSample>> = Default::default();
    for s in samples {
        by_length.entry(s.length).or_default().push(s);
    }
    let mut per_length = Vec::new();
    for (&length, group) in &by_length {
        let mut min_gap = vec![f64::INFINITY; n - 1];
        let mut max_norm = 0.0f64;
        for s in group {
            let sv = svd_f64(&s.element.to_f64())?;
            for k in 0..n - 1 {
                min_gap[k] = min_gap[k].min(sv.profile.ratios[k]);
            }
            max_norm = max_norm.max(s.element.max_abs());
        }
        per_length.push(LengthStats {
            length,
            min_gap,
            max_entry_norm: max_norm,
            count: group.len(),
        });
    }
    let fit_exponent = fit_growth_exponent(&per_length);
    let mut monotone_gaps = vec![true; n - 1];
    for k in 0..n - 1 {
        for w in per_length.windows(2) {
            if w[1].min_gap[k] < w[0].min_gap[k] - 1e-9 {
                monotone_gaps[k] = false;
                break;
            }
        }
    }
    Ok(DivergenceReport {
        per_length,
        fit_exponent,
        monotone_gaps,
        limit_data: None,
    })
}

fn fit_growth_exponent(per_length: &[LengthStats]) -> Option<f64> {
    let max_len = per_length.iter().map(|l| l.length).max()?;
    let pts: Vec<(f64, f64)> = per_length
        .iter()
        .filter(|l| l.length >= (max_len / 2).max(1) && l.min_gap[0] > 1.0)
        .map(|l| ((l.length as f64).ln(), l.min_gap[0].ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Estimated limit flags from the largest-norm decile of the sample.
///
/// Each element's attracting flag is estimated from the tail of its own
/// cyclic group: the matrix is squared (with renormalization) until its
/// top singular gap clears `BOOST_TARGET`, and the dominant left/right
/// singular directions are read off. Elements that never clear
/// `DIVERGENCE_GATE` are skipped; if none clears it the verdict is
/// inconclusive.
pub fn limit_flags(samples: &[WordSample]) -> Result<LimitFlagReport> {
    let mut candidates: Vec<&WordSample> = samples.iter().filter(|s| s.length > 0).collect();
    if candidates.is_empty() {
        return Err(Error::Precondition("no non-identity samples".into()));
    }
    candidates.sort_by(|a, b| b.element.max_abs().total_cmp(&a.element.max_abs()));
    // largest-norm decile, but never fewer than a handful of elements
    let decile = (candidates.len() / 10).max(4).min(candidates.len());
    let mut flags: Vec<Flag> = Vec::new();
    let mut skipped = 0usize;
    for s in &candidates[..decile] {
        match boosted_flag(&s.element) {
            Some(f) => flags.push(f),
            None => skipped += 1,
        }
    }
    if flags.is_empty() {
        return Err(Error::Precondition(format!(
            "no sample reached gap {DIVERGENCE_GATE}; verdict inconclusive"
        )));
    }
    // Greedy angular clustering.
    let mut clusters: Vec<(Flag, Vec<usize>)> = Vec::new();
    for (i, f) in flags.iter().enumerate() {
        match clusters
            .iter_mut()
            .find(|(center, _)| center.angle_to(f) <= CLUSTER_RADIUS)
        {
            Some((_, members)) => members.push(i),
            None => clusters.push((f.clone(), vec![i])),
        }
    }
    let mut out = Vec::new();
    let mut max_radius = 0.0f64;
    for (center, members) in &clusters {
        let radius = members
            .iter()
            .map(|&i| center.angle_to(&flags[i]))
            .fold(0.0, f64::max);
        max_radius = max_radius.max(radius);
        out.push(FlagCluster {
            point: center.point.coords().iter().cloned().collect(),
            hyperplane: center.hyperplane.covector().iter().cloned().collect(),
            members: members.len(),
            radius,
        });
    }
    out.sort_by_key(|c| std::cmp::Reverse(c.members));
    Ok(LimitFlagReport {
        point_clusters: out,
        max_cluster_radius: max_radius,
        skipped,
    })
}

/// Attracting point (top left singular direction) and repelling hyperplane
/// (top right singular direction as covector) of the boosted element.
fn boosted_flag(m: &Matrix) -> Option<Flag> {
    let mut a = m.to_f64();
    let scale = a.amax();
    if scale == 0.0 {
        return None;
    }
    a /= scale;
    for _ in 0..40 {
        let sv = svd_f64(&a).ok()?;
        let gap = sv.profile.ratios.first().copied().unwrap_or(1.0);
        if gap >= BOOST_TARGET {
            break;
        }
        a = &a * &a;
        let s = a.amax();
        if !(s.is_finite()) || s == 0.0 {
            return None;
        }
        a /= s;
    }
    let sv = svd_f64(&a).ok()?;
    if sv.profile.ratios.first().copied().unwrap_or(1.0) < DIVERGENCE_GATE {
        return None;
    }
    let point = ProjPoint::new(sv.u.column(0).into_owned()).ok()?;
    let hyperplane = ProjHyperplane::new(sv.vt.row(0).transpose()).ok()?;
    Flag::new(point, hyperplane).ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class", content = "translation_length")]
pub enum ElementClass {
    Elliptic,
    Parabolic,
    Hyperbolic(f64),
}

impl ElementClass {
    pub fn translation_length(&self) -> f64 {
        match self {
            ElementClass::Hyperbolic(t) => *t,
            _ => 0.0,
        }
    }
}

/// Trichotomy by eigenvalue moduli; among translation-length-zero elements,
/// elliptic means bounded powers (tested up to `k_pow`).
pub fn classify_element(g: &Matrix, k_pow: usize) -> Result<ElementClass> {
    let moduli = eigen_moduli(g)?;
    let top = moduli.first().copied().unwrap_or(1.0);
    let bottom = moduli.last().copied().unwrap_or(1.0);
    if bottom <= 0.0 {
        return Err(Error::Singular);
    }
    let ratio = top / bottom;
    if ratio > 1.0 + 1e-9 {
        return Ok(ElementClass::Hyperbolic(0.5 * ratio.ln()));
    }
    let base = g.to_f64();
    let base_norm = base.amax();
    let mut p = base.clone();
    let mut bounded = true;
    let mut k = 1usize;
    while k < k_pow {
        p = &p * &base;
        k += 1;
        if p.amax() > 10.0 * base_norm {
            bounded = false;
            break;
        }
    }
    Ok(if bounded {
        ElementClass::Elliptic
    } else {
        ElementClass::Parabolic
    })
}

/// Condition (WU): every sampled element has all eigenvalue moduli within
/// `tol` of 1. Refutation carries the offending word.
pub fn weakly_unipotent_check(
    samples: &[WordSample],
    group: &MatrixGroup,
    tol: f64,
    max_length: usize,
) -> Result<ConditionVerdict> {
    let meta = SampleMeta {
        max_length,
        count: samples.len(),
    };
    for s in samples {
        let moduli = eigen_moduli(&s.element)?;
        if let Some(bad) = moduli.iter().find(|m| (*m - 1.0).abs() > tol) {
            return Ok(ConditionVerdict {
                condition: Condition::WeaklyUnipotent,
                status: VerdictStatus::RefutedOnSample,
                certificate: serde_json::json!({
                    "word": s.word_string(group),
                    "eigen_modulus": bad,
                }),
                sample: meta,
                evidence: serde_json::Value::Null,
            });
        }
    }
    Ok(ConditionVerdict {
        condition: Condition::WeaklyUnipotent,
        status: VerdictStatus::CertifiedOnSample,
        certificate: serde_json::json!({"tolerance": tol}),
        sample: meta,
        evidence: serde_json::Value::Null,
    })
}

/// A fixed point/hyperplane pair with residuals of the fixing equations.
#[derive(Debug, Clone)]
pub struct FixedPair {
    pub p: ProjPoint,
    pub phi: ProjHyperplane,
    pub p_exact: Option<Vec<Scalar>>,
    pub phi_exact: Option<Vec<Scalar>>,
    pub residual_p: f64,
    pub residual_phi: f64,
}

#[derive(Debug)]
pub enum FixedPairResult {
    Pair(FixedPair),
    /// The fixed spaces are higher-dimensional; the choice of p is deferred
    /// to the caller, which may try each basis vector.
    Subspaces {
        p_basis: Vec<Vec<f64>>,
        phi_basis: Vec<Vec<f64>>,
    },
    None {
        reason: String,
    },
}

/// Common fixed vectors: p spanning the intersection of ker(g - I) and phi
/// spanning the intersection of ker(g^T - I) over the generators.
pub fn fixed_pair(group: &MatrixGroup) -> Result<FixedPairResult> {
    let p_basis = common_kernel(group, false)?;
    let phi_basis = common_kernel(group, true)?;
    if p_basis.is_empty() || phi_basis.is_empty() {
        return Ok(FixedPairResult::None {
            reason: "no nonzero fixed vector or covector".into(),
        });
    }
    if p_basis.len() > 1 || phi_basis.len() > 1 {
        return Ok(FixedPairResult::Subspaces {
            p_basis: p_basis.iter().map(|v| to_f64_vec(v)).collect(),
            phi_basis: phi_basis.iter().map(|v| to_f64_vec(v)).collect(),
        });
    }
    let pf = to_f64_vec(&p_basis[0]);
    let phif = to_f64_vec(&phi_basis[0]);
    let p = ProjPoint::from_slice(&pf)?;
    let phi = ProjHyperplane::from_slice(&phif)?;
    let pairing = phi.pair(&p).abs();
    if pairing > 1e-10 {
        return Ok(FixedPairResult::None {
            reason: format!("fixed pair exists but phi(p) = {pairing:.3e} != 0"),
        });
    }
    let mut residual_p = 0.0f64;
    let mut residual_phi = 0.0f64;
    for g in &group.generators {
        let gf = g.matrix.to_f64();
        let rp = (&gf * p.coords() - p.coords()).amax();
        let rphi = (gf.transpose() * phi.covector() - phi.covector()).amax();
        residual_p = residual_p.max(rp);
        residual_phi = residual_phi.max(rphi);
    }
    Ok(FixedPairResult::Pair(FixedPair {
        p,
        phi,
        p_exact: p_basis[0].clone_exact(),
        phi_exact: phi_basis[0].clone_exact(),
        residual_p,
        residual_phi,
    }))
}


fn to_f64_vec(v: &KernelVec) -> Vec<f64> {
    match v {
        KernelVec::Exact(s) => s.iter().map(Scalar::to_f64).collect(),
        KernelVec::Float(f) => f.clone(),
    }
}

#[derive(Debug, Clone)]
pub enum KernelVec {
    Exact(Vec<Scalar>),
    Float(Vec<f64>),
}

impl KernelVec {
    fn clone_exact(&self) -> Option<Vec<Scalar>> {
        match self {
            KernelVec::Exact(v) => Some(v.clone()),
            KernelVec::Float(_) => None,
        }
    }
}

fn common_kernel(group: &MatrixGroup, transpose: bool) -> Result<Vec<KernelVec>> {
    let n = group.dim;
    if group.scalar_kind == ScalarKind::Float64 {
        let mut stacked = DMatrix::zeros(n * group.generators.len(), n);
        for (gi, g) in group.generators.iter().enumerate() {
            let mut m = g.matrix.to_f64();
            if transpose {
                m = m.transpose();
            }
            m -= DMatrix::identity(n, n);
            stacked.rows_mut(gi * n, n).copy_from(&m);
        }
        // pad to square for the svd helper
        let square = if stacked.nrows() == n {
            stacked
        } else {
            stacked.clone()
        };
        let basis = if square.nrows() == square.ncols() {
            nullspace_f64(&square, 1e-10)?
        } else {
            let gram = square.transpose() * &square;
            nullspace_f64(&gram, 1e-10)?
        };
        return Ok(basis
            .into_iter()
            .map(|v| KernelVec::Float(v.iter().cloned().collect()))
            .collect());
    }
    let kind = group.scalar_kind;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in &group.generators {
        let m = if transpose {
            g.matrix.transpose()
        } else {
            g.matrix.clone()
        };
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut v = m.get(i, j).clone();
                if i == j {
                    v = v.checked_sub(&Scalar::one(kind))?;
                }
                row.push(v);
            }
            rows.push(row);
        }
    }
    let stacked = Matrix::from_rows(rows)?;
    Ok(stacked
        .kernel_basis()?
        .into_iter()
        .map(KernelVec::Exact)
        .collect())
}

impl FixedPair {
    pub fn exact_p(&self) -> Option<Vec<Scalar>> {
        self.p_exact.clone()
    }
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::group::{enumerate_words, NamedGenerator};

    fn cyclic(m: Matrix, kind: ScalarKind) -> MatrixGroup {
        let dim = m.rows();
        MatrixGroup::new(
            dim,
            kind,
            vec![NamedGenerator {
                name: "g".into(),
                matrix: m,
            }],
            None,
        )
        .unwrap()
    }

    #[test]
    fn diag_cyclic_divergence() {
        let g = cyclic(
            Matrix::from_rows(vec![
                vec![
                    Scalar::Rational(crate::scalar::rat_from_i64(2)),
                    Scalar::Rational(crate::scalar::rat_from_i64(0)),
                ],
                vec![
                    Scalar::Rational(crate::scalar::rat_from_i64(0)),
                    Scalar::Rational(crate::scalar::rat_from_pair(1, 2)),
                ],
            ])
            .unwrap(),
            ScalarKind::Rational,
        );
        let words = enumerate_words(&g, 6).unwrap();
        let rep = divergence_diagnostics(&words).unwrap();
        for stats in &rep.per_length {
            let expect = 4.0f64.powi(stats.length as i32);
            assert!(
                (stats.min_gap[0] - expect).abs() <= 1e-9 * expect,
                "length {} gap {} expect {expect}",
                stats.length,
                stats.min_gap[0]
            );
        }
    }

    #[test]
    fn jordan_divergence_exponent_near_two() {
        let g = gallery::jordan_unipotent(2).unwrap();
        let words = enumerate_words(&g, 30).unwrap();
        let rep = divergence_diagnostics(&words).unwrap();
        let e = rep.fit_exponent.unwrap();
        assert!((1.8..=2.2).contains(&e), "fit exponent {e}");
    }

    #[test]
    fn repeated_singular_values_not_divergent() {
        let m = Matrix::from_f64_rows(&[
            vec![2.0, 0.0, 0.0, 0.0],
            vec![0.0, 2.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.5, 0.0],
            vec![0.0, 0.0, 0.0, 0.5],
        ])
        .unwrap();
        let g = cyclic(m, ScalarKind::Float64);
        let words = enumerate_words(&g, 5).unwrap();
        let rep = divergence_diagnostics(&words).unwrap();
        for stats in &rep.per_length {
            assert!((stats.min_gap[0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn limit_flags_of_parabolic() {
        let g = gallery::jordan_unipotent(2).unwrap();
        let words = enumerate_words(&g, 10).unwrap();
        let rep = limit_flags(&words).unwrap();
        assert_eq!(rep.point_clusters.len(), 1);
        let c = &rep.point_clusters[0];
        // attracting point [1:0], repelling hyperplane {x2 = 0}
        assert!(c.point[1].abs() < 1e-4);
        assert!(c.hyperplane[0].abs() < 1e-4);
        assert!(rep.max_cluster_radius < 1e-3);
    }

    #[test]
    fn limit_flags_of_diagonal_has_two_point_clusters() {
        let m = Matrix::from_f64_rows(&[vec![4.0, 0.0], vec![0.0, 0.25]]).unwrap();
        let g = cyclic(m, ScalarKind::Float64);
        let words = enumerate_words(&g, 8).unwrap();
        let rep = limit_flags(&words).unwrap();
        assert_eq!(rep.point_clusters.len(), 2);
    }

    #[test]
    fn limit_flags_inconclusive_for_elliptic() {
        let c = 1.0f64.cos();
        let s = 1.0f64.sin();
        let g = cyclic(
            Matrix::from_f64_rows(&[vec![c, s], vec![-s, c]]).unwrap(),
            ScalarKind::Float64,
        );
        let words = enumerate_words(&g, 6).unwrap();
        assert!(limit_flags(&words).is_err());
    }

    #[test]
    fn classification_trichotomy() {
        let c = 1.0f64.cos();
        let s = 1.0f64.sin();
        let rot = Matrix::from_f64_rows(&[vec![c, s], vec![-s, c]]).unwrap();
        assert_eq!(classify_element(&rot, 64).unwrap(), ElementClass::Elliptic);

        let par = Matrix::from_f64_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(classify_element(&par, 64).unwrap(), ElementClass::Parabolic);

        let hyp = Matrix::from_f64_rows(&[
            vec![4.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.25],
        ])
        .unwrap();
        match classify_element(&hyp, 64).unwrap() {
            ElementClass::Hyperbolic(t) => assert!((t - 4.0f64.ln()).abs() < 1e-9),
            other => panic!("expected hyperbolic, got {other:?}"),
        }
    }

    #[test]
    fn classification_conjugation_invariant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let base = Matrix::from_f64_rows(&[
            vec![4.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.25],
        ])
        .unwrap();
        for _ in 0..20 {
            let h = loop {
                let m: DMatrix<f64> = DMatrix::from_fn(3, 3, |_, _| rng.gen_range(-1.0..1.0));
                if m.determinant().abs() > 0.2 {
                    break m;
                }
            };
            let conj = &h * base.to_f64() * h.try_inverse().unwrap();
            let cm = Matrix::from_dmatrix(&conj).unwrap();
            match classify_element(&cm, 64).unwrap() {
                ElementClass::Hyperbolic(t) => assert!((t - 4.0f64.ln()).abs() < 1e-7),
                other => panic!("conjugate misclassified: {other:?}"),
            }
        }
    }

    #[test]
    fn wu_check_on_gallery() {
        let g = gallery::weakly_unipotent_9x9().unwrap();
        let words = enumerate_words(&g, 10).unwrap();
        let v = weakly_unipotent_check(&words, &g, 1e-7, 10).unwrap();
        assert!(v.certified());

        let d = cyclic(
            Matrix::from_rows(vec![
                vec![
                    Scalar::Rational(crate::scalar::rat_from_i64(2)),
                    Scalar::Rational(crate::scalar::rat_from_i64(0)),
                ],
                vec![
                    Scalar::Rational(crate::scalar::rat_from_i64(0)),
                    Scalar::Rational(crate::scalar::rat_from_pair(1, 2)),
                ],
            ])
            .unwrap(),
            ScalarKind::Rational,
        );
        let words = enumerate_words(&d, 3).unwrap();
        let v = weakly_unipotent_check(&words, &d, 1e-7, 3).unwrap();
        assert!(v.refuted());

        // trivial group certified
        let t = cyclic(Matrix::identity(2, ScalarKind::Rational), ScalarKind::Rational);
        let words = enumerate_words(&t, 5).unwrap();
        assert!(weakly_unipotent_check(&words, &t, 1e-7, 5).unwrap().certified());
    }

    #[test]
    fn fixed_pair_jordan3() {
        let g = gallery::jordan_unipotent(3).unwrap();
        match fixed_pair(&g).unwrap() {
            FixedPairResult::Pair(fp) => {
                // p = e1, phi = e3*
                assert!((fp.p.coords()[0].abs() - 1.0).abs() < 1e-12);
                assert!(fp.p.coords()[1].abs() < 1e-12 && fp.p.coords()[2].abs() < 1e-12);
                assert!(fp.phi.covector()[0].abs() < 1e-12 && fp.phi.covector()[1].abs() < 1e-12);
                assert!(fp.residual_p < 1e-12 && fp.residual_phi < 1e-12);
                assert!(fp.p_exact.is_some());
            }
            other => panic!("expected a fixed pair, got {other:?}"),
        }
    }

    #[test]
    fn fixed_pair_hyperbolic_cusp() {
        let g = gallery::hyperbolic_cusp_translations(4).unwrap();
        match fixed_pair(&g).unwrap() {
            FixedPairResult::Pair(fp) => {
                assert!((fp.p.coords()[0].abs() - 1.0).abs() < 1e-12);
                let n = fp.phi.covector().len();
                assert!((fp.phi.covector()[n - 1].abs() - 1.0).abs() < 1e-12);
            }
            other => panic!("expected fixed pair, got {other:?}"),
        }
    }

    #[test]
    fn fixed_pair_none_for_rotation() {
        let c = 1.0f64.cos();
        let s = 1.0f64.sin();
        let g = cyclic(
            Matrix::from_f64_rows(&[vec![c, s], vec![-s, c]]).unwrap(),
            ScalarKind::Float64,
        );
        match fixed_pair(&g).unwrap() {
            FixedPairResult::None { .. } => {}
            other => panic!("expected none, got {other:?}"),
        }
    }

    #[test]
    fn fixed_pair_solvable_is_e3_e7() {
        let g = gallery::solvable_7x7().unwrap();
        match fixed_pair(&g).unwrap() {
            FixedPairResult::Pair(fp) => {
                let p = fp.p_exact.unwrap();
                for (i, s) in p.iter().enumerate() {
                    assert_eq!(!s.is_zero(), i == 2, "p should span e3");
                }
                let phi = fp.phi_exact.unwrap();
                for (i, s) in phi.iter().enumerate() {
                    assert_eq!(!s.is_zero(), i == 6, "phi should span e7*");
                }
            }
            other => panic!("expected fixed pair, got {other:?}"),
        }
    }

    #[test]
    fn sigma_inverse_duality_across_samples() {
        let g = gallery::hyperbolic_cusp_translations(4).unwrap();
        let words = enumerate_words(&g, 5).unwrap();
        for w in &words {
            if w.length == 0 {
                continue;
            }
            let inv = w.element.inverse().unwrap();
            let s = svd_f64(&w.element.to_f64()).unwrap().profile.sigmas;
            let si = svd_f64(&inv.to_f64()).unwrap().profile.sigmas;
            let n = s.len();
            for i in 0..n {
                let prod = si[i] * s[n - 1 - i];
                assert!((prod - 1.0).abs() < 1e-9, "duality broke: {prod}");
            }
        }
    }
}
