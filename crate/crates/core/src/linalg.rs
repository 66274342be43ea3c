//! Float spectral routines: SVD profiles with orthonormal frames, and
//! eigenvalue moduli.
//!
//! Eigenvalue moduli first condense the matrix along strongly connected
//! components of its support graph. Closed-form group elements carry exact
//! zeros, so the condensation isolates small diagonal blocks (e.g. 2x2
//! rotation blocks inside unipotent-with-rotation elements) whose moduli are
//! far better conditioned than those of the full defective matrix.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Singular values in descending order with consecutive ratios.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SingularProfile {
    pub sigmas: Vec<f64>,
    pub ratios: Vec<f64>,
}

impl SingularProfile {
    pub fn gap(&self, k: usize) -> f64 {
        self.ratios[k - 1]
    }
}

/// Full SVD data: descending singular values plus left/right orthonormal frames
/// (columns of `u`, rows of `vt`).
#[derive(Debug, Clone)]
pub struct SvdFrames {
    pub profile: SingularProfile,
    pub u: DMatrix<f64>,
    pub vt: DMatrix<f64>,
}

pub fn svd(m: &Matrix) -> Result<SvdFrames> {
    if !m.is_square() {
        return Err(Error::DimMismatch("svd of non-square matrix".into()));
    }
    svd_f64(&m.to_f64())
}

pub fn svd_f64(a: &DMatrix<f64>) -> Result<SvdFrames> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let svd = a
        .clone()
        .try_svd(true, true, f64::EPSILON * 8.0, 10_000)
        .ok_or_else(|| Error::Numeric("svd did not converge".into()))?;
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| {
        svd.singular_values[j]
            .partial_cmp(&svd.singular_values[i])
            .unwrap()
    });
    let u_raw = svd.u.ok_or_else(|| Error::Numeric("svd missing u".into()))?;
    let vt_raw = svd
        .v_t
        .ok_or_else(|| Error::Numeric("svd missing vt".into()))?;
    let n = idx.len();
    let mut sigmas = Vec::with_capacity(n);
    let mut u = DMatrix::zeros(u_raw.nrows(), n);
    let mut vt = DMatrix::zeros(n, vt_raw.ncols());
    for (new, &old) in idx.iter().enumerate() {
        sigmas.push(svd.singular_values[old]);
        u.set_column(new, &u_raw.column(old));
        vt.set_row(new, &vt_raw.row(old));
    }
    let ratios = sigmas
        .windows(2)
        .map(|w| if w[1] > 0.0 { w[0] / w[1] } else { f64::INFINITY })
        .collect();
    Ok(SvdFrames {
        profile: SingularProfile { sigmas, ratios },
        u,
        vt,
    })
}

/// Moduli of all complex eigenvalues, descending.
pub fn eigen_moduli(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimMismatch("eigenvalues of non-square matrix".into()));
    }
    let a = m.to_f64();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut moduli = Vec::with_capacity(a.nrows());
    for block in scc_diagonal_blocks(&a) {
        moduli.extend(block_moduli(&block)?);
    }
    moduli.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(moduli)
}

fn block_moduli(a: &DMatrix<f64>) -> Result<Vec<f64>> {
    match a.nrows() {
        1 => Ok(vec![a[(0, 0)].abs()]),
        2 => {
            // Quadratic formula, stable for both real and complex pairs.
            let tr = a[(0, 0)] + a[(1, 1)];
            let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
            let disc = tr * tr / 4.0 - det;
            if disc >= 0.0 {
                let s = disc.sqrt();
                Ok(vec![(tr / 2.0 + s).abs(), (tr / 2.0 - s).abs()])
            } else {
                let md = det.abs().sqrt();
                Ok(vec![md, md])
            }
        }
        _ => {
            let eig = a
                .clone()
                .complex_eigenvalues();
            Ok(eig.iter().map(|z| z.norm()).collect())
        }
    }
}

/// Split a square matrix into the diagonal blocks of its strongly-connected-
/// component condensation (Tarjan). Entries that are exactly zero are treated
/// as absent edges; the eigenvalue multiset is the union over blocks.
fn scc_diagonal_blocks(a: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let n = a.nrows();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&j| a[(i, j)] != 0.0).collect())
        .collect();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;

    // Iterative Tarjan.
    enum FrameState {
        Enter,
        Resume(usize),
    }
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call_stack = vec![(root, FrameState::Enter)];
        while let Some((v, state)) = call_stack.pop() {
            let mut next_child = match state {
                FrameState::Enter => {
                    index[v] = counter;
                    low[v] = counter;
                    counter += 1;
                    stack.push(v);
                    on_stack[v] = true;
                    0
                }
                FrameState::Resume(k) => {
                    let w = adj[v][k];
                    low[v] = low[v].min(low[w]);
                    k + 1
                }
            };
            let mut descended = false;
            while next_child < adj[v].len() {
                let w = adj[v][next_child];
                if index[w] == usize::MAX {
                    call_stack.push((v, FrameState::Resume(next_child)));
                    call_stack.push((w, FrameState::Enter));
                    descended = true;
                    break;
                }
                if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                next_child += 1;
            }
            if descended {
                continue;
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
        .into_iter()
        .map(|comp| {
            DMatrix::from_fn(comp.len(), comp.len(), |i, j| a[(comp[i], comp[j])])
        })
        .collect()
}

/// Nullspace basis of a float matrix via SVD with relative cutoff.
pub fn nullspace_f64(a: &DMatrix<f64>, cutoff: f64) -> Result<Vec<DVector<f64>>> {
    let svd = svd_f64(a)?;
    let scale = svd.profile.sigmas.first().copied().unwrap_or(0.0).max(1.0);
    let mut basis = Vec::new();
    for (k, &s) in svd.profile.sigmas.iter().enumerate() {
        if s <= cutoff * scale {
            basis.push(svd.vt.row(k).transpose());
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;

    #[test]
    fn svd_diagonal() {
        let m = Matrix::from_f64_rows(&[vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert!((s.profile.sigmas[0] - 4.0).abs() < 1e-12);
        assert!((s.profile.sigmas[1] - 1.0).abs() < 1e-12);
        assert!((s.profile.ratios[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn svd_identity() {
        let m = Matrix::from_f64_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        let s = svd(&m).unwrap();
        for v in &s.profile.sigmas {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svd_shear_matches_characteristic_roots() {
        // G^T G for [[1,100],[0,1]] has characteristic polynomial
        // l^2 - 10002 l + 1; sigma are the square roots of its roots.
        let m = Matrix::from_f64_rows(&[vec![1.0, 100.0], vec![0.0, 1.0]]).unwrap();
        let s = svd(&m).unwrap();
        let tr = 10002.0f64;
        let l1 = (tr + (tr * tr - 4.0).sqrt()) / 2.0;
        assert!((s.profile.sigmas[0] - l1.sqrt()).abs() / l1.sqrt() < 1e-12);
        assert!((s.profile.sigmas[1] - 1.0 / l1.sqrt()).abs() < 1e-12);
        assert!((s.profile.sigmas[0] - 100.00999950005).abs() < 1e-6);
    }

    #[test]
    fn svd_product_of_sigmas_is_abs_det() {
        let m = Matrix::from_f64_rows(&[
            vec![2.0, -1.0, 0.5],
            vec![0.3, 1.0, -2.0],
            vec![1.0, 4.0, 0.1],
        ])
        .unwrap();
        let s = svd(&m).unwrap();
        let prod: f64 = s.profile.sigmas.iter().product();
        let det = m.to_f64().determinant().abs();
        assert!((prod - det).abs() / det < 1e-9);
    }

    #[test]
    fn eigen_moduli_rotation_and_jordan() {
        let c = 1.0f64.cos();
        let s = 1.0f64.sin();
        let rot = Matrix::from_f64_rows(&[vec![c, s], vec![-s, c]]).unwrap();
        let m = eigen_moduli(&rot).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-12 && (m[1] - 1.0).abs() < 1e-12);

        let jordan = Matrix::from_f64_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        let m = eigen_moduli(&jordan).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-9 && (m[1] - 1.0).abs() < 1e-9);

        let d = Matrix::from_f64_rows(&[
            vec![4.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.25],
        ])
        .unwrap();
        let m = eigen_moduli(&d).unwrap();
        assert_eq!(m.len(), 3);
        assert!((m[0] - 4.0).abs() < 1e-12);
        assert!((m[2] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn scc_blocks_isolate_rotations() {
        // Block upper triangular with 2x2 rotation blocks: moduli exactly 1
        // from the 2x2 formula, despite the defective full matrix.
        let n = 100.0;
        let c = 100.0f64.cos();
        let s = 100.0f64.sin();
        let a = Matrix::from_f64_rows(&[
            vec![c, s, n * c, n * s],
            vec![-s, c, -n * s, n * c],
            vec![0.0, 0.0, c, s],
            vec![0.0, 0.0, -s, c],
        ])
        .unwrap();
        let m = eigen_moduli(&a).unwrap();
        for v in m {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }
}
