//! Dense two-phase simplex feasibility solver with Bland's anti-cycling rule.
//!
//! Instances here are small (tens of variables, at most a few thousand
//! constraints), so a plain dense tableau is the right tool. Free variables
//! are split into positive parts internally.

use crate::error::{Error, Result};

pub const LP_TOL: f64 = 1e-9;

/// Affine inequality `coeffs . x >= rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

impl Constraint {
    pub fn ge(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint { coeffs, rhs }
    }

    /// `coeffs . x <= rhs` rewritten as `-coeffs . x >= -rhs`.
    pub fn le(coeffs: Vec<f64>, rhs: f64) -> Self {
        Constraint {
            coeffs: coeffs.into_iter().map(|c| -c).collect(),
            rhs: -rhs,
        }
    }

    pub fn slack(&self, x: &[f64]) -> f64 {
        let dot: f64 = self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum();
        dot - self.rhs
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    /// A point satisfying every constraint with slack >= -LP_TOL.
    Feasible(Vec<f64>),
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

/// Phase-one feasibility for a system of `>=` constraints over R^dim.
pub fn lp_feasible(dim: usize, constraints: &[Constraint]) -> Result<LpOutcome> {
    for c in constraints {
        if c.coeffs.len() != dim {
            return Err(Error::DimMismatch(format!(
                "constraint has {} coefficients, expected {dim}",
                c.coeffs.len()
            )));
        }
        if c.coeffs.iter().any(|v| !v.is_finite()) || !c.rhs.is_finite() {
            return Err(Error::NonFinite);
        }
    }
    if constraints.is_empty() {
        return Ok(LpOutcome::Feasible(vec![0.0; dim]));
    }

    // Standard form: a . x - s = b with s >= 0 surplus, x = x+ - x- free.
    // Multiply rows so b >= 0, then add artificials and minimize their sum.
    let m = constraints.len();
    let nx = 2 * dim;
    let ncols = nx + m + m; // x+/x-, surplus, artificial
    let mut tableau = vec![vec![0.0f64; ncols + 1]; m + 1];

    for (i, c) in constraints.iter().enumerate() {
        let flip = if c.rhs < 0.0 { -1.0 } else { 1.0 };
        for j in 0..dim {
            tableau[i][j] = flip * c.coeffs[j];
            tableau[i][dim + j] = -flip * c.coeffs[j];
        }
        tableau[i][nx + i] = -flip; // surplus for >= rows
        tableau[i][nx + m + i] = 1.0; // artificial
        tableau[i][ncols] = flip * c.rhs;
    }

    // Objective row: minimize sum of artificials; expressed as reduced costs.
    for j in 0..=ncols {
        let s: f64 = (0..m).map(|i| tableau[i][j]).sum();
        tableau[m][j] = -s;
    }
    for i in 0..m {
        tableau[m][nx + m + i] = 0.0;
    }

    let mut basis: Vec<usize> = (0..m).map(|i| nx + m + i).collect();
    let max_iters = 50 * (m + ncols);
    let mut iter = 0;
    loop {
        iter += 1;
        if iter > max_iters {
            return Err(Error::Numeric("simplex iteration budget exceeded".into()));
        }
        // Bland: entering = lowest-index column with negative reduced cost.
        let mut entering = None;
        for j in 0..ncols {
            if tableau[m][j] < -LP_TOL {
                entering = Some(j);
                break;
            }
        }
        let Some(e) = entering else { break };
        // Ratio test, Bland ties by lowest basis variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            if tableau[i][e] > LP_TOL {
                let ratio = tableau[i][ncols] / tableau[i][e];
                match leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < lr - LP_TOL
                            || ((ratio - lr).abs() <= LP_TOL && basis[i] < basis[li])
                        {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((l, _)) = leave else {
            // Unbounded phase-one objective cannot happen (bounded below by 0);
            // treat as numeric trouble.
            return Err(Error::Numeric("phase-one ratio test failed".into()));
        };
        pivot(&mut tableau, l, e);
        basis[l] = e;
    }

    let objective = -tableau[m][ncols];
    if objective.abs() > 1e-7 {
        return Ok(LpOutcome::Infeasible);
    }

    let mut x = vec![0.0; dim];
    for (i, &b) in basis.iter().enumerate() {
        if b < dim {
            x[b] += tableau[i][ncols];
        } else if b < 2 * dim {
            x[b - dim] -= tableau[i][ncols];
        }
    }
    // Verify the witness at the declared tolerance before reporting it.
    let worst = constraints
        .iter()
        .map(|c| c.slack(&x))
        .fold(f64::INFINITY, f64::min);
    if worst < -1e-6 {
        return Ok(LpOutcome::Infeasible);
    }
    Ok(LpOutcome::Feasible(x))
}

fn pivot(t: &mut [Vec<f64>], row: usize, col: usize) {
    let p = t[row][col];
    let ncols = t[0].len();
    for j in 0..ncols {
        t[row][j] /= p;
    }
    let nrows = t.len();
    for i in 0..nrows {
        if i == row {
            continue;
        }
        let f = t[i][col];
        if f == 0.0 {
            continue;
        }
        for j in 0..ncols {
            t[i][j] -= f * t[row][j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_feasible() {
        // x >= 1
        let out = lp_feasible(1, &[Constraint::ge(vec![1.0], 1.0)]).unwrap();
        match out {
            LpOutcome::Feasible(x) => assert!(x[0] >= 1.0 - 1e-9),
            _ => panic!("expected feasible"),
        }
    }

    #[test]
    fn simple_infeasible() {
        // x >= 1 and -x >= 0
        let out = lp_feasible(
            1,
            &[
                Constraint::ge(vec![1.0], 1.0),
                Constraint::ge(vec![-1.0], 0.0),
            ],
        )
        .unwrap();
        assert!(!out.is_feasible());
    }

    #[test]
    fn two_dim_witness() {
        // x + y >= 1, x - y >= 1, -x >= -2
        let cons = [
            Constraint::ge(vec![1.0, 1.0], 1.0),
            Constraint::ge(vec![1.0, -1.0], 1.0),
            Constraint::ge(vec![-1.0, 0.0], -2.0),
        ];
        match lp_feasible(2, &cons).unwrap() {
            LpOutcome::Feasible(x) => {
                for c in &cons {
                    assert!(c.slack(&x) >= -1e-9);
                }
            }
            _ => panic!("expected feasible, e.g. (2, 0)"),
        }
    }

    #[test]
    fn malformed_constraint_rejected() {
        assert!(lp_feasible(2, &[Constraint::ge(vec![1.0], 0.0)]).is_err());
        assert!(lp_feasible(1, &[Constraint::ge(vec![f64::NAN], 0.0)]).is_err());
    }

    /// Brute-force oracle: a system of halfplanes (with a bounding box) is
    /// feasible iff some intersection vertex of a constraint pair (or box
    /// corner) satisfies everything.
    fn oracle_2d(cons: &[Constraint]) -> bool {
        let mut all = cons.to_vec();
        let big = 1e3;
        all.push(Constraint::ge(vec![1.0, 0.0], -big));
        all.push(Constraint::ge(vec![-1.0, 0.0], -big));
        all.push(Constraint::ge(vec![0.0, 1.0], -big));
        all.push(Constraint::ge(vec![0.0, -1.0], -big));
        let n = all.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (&all[i], &all[j]);
                let det = a.coeffs[0] * b.coeffs[1] - a.coeffs[1] * b.coeffs[0];
                if det.abs() < 1e-12 {
                    continue;
                }
                let x = (a.rhs * b.coeffs[1] - b.rhs * a.coeffs[1]) / det;
                let y = (a.coeffs[0] * b.rhs - b.coeffs[0] * a.rhs) / det;
                if all.iter().all(|c| c.slack(&[x, y]) >= -1e-6) {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn agrees_with_vertex_enumeration_2d() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = rng.gen_range(2..6);
            let cons: Vec<Constraint> = (0..k)
                .map(|_| {
                    Constraint::ge(
                        vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                        rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            let got = lp_feasible(2, &cons).unwrap().is_feasible();
            let want = oracle_2d(&cons);
            assert_eq!(got, want, "disagreement on {cons:?}");
        }
    }
}
