//! Closed-form constructors for the explicit groups used throughout:
//! horospherical translation groups, unipotent Jordan families, a weakly
//! unipotent 9x9 family with rotation blocks, and a solvable 7x7 family over
//! Q(sqrt 2). Evaluators are exact per parameter; generator-word products
//! serve only as cross-checks.

use num_traits::One;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::group::{ClosedFormFamily, MatrixGroup, NamedGenerator};
use crate::matrix::Matrix;
use crate::scalar::{rat_from_i64, rat_from_pair, QuadSqrt2, Rat, Scalar, ScalarKind};

/// Reference outcomes used by tests: condition name -> expected status.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub id: &'static str,
    pub dim: usize,
    pub expected_certified: &'static [&'static str],
    pub expected_refuted: &'static [&'static str],
}

pub fn gallery_catalog() -> Vec<GalleryEntry> {
    vec![
        GalleryEntry {
            id: "hyperbolic_cusp",
            dim: 4,
            expected_certified: &["WU", "GP+", "Tr", "TRe"],
            expected_refuted: &[],
        },
        GalleryEntry {
            id: "jordan_unipotent",
            dim: 3,
            expected_certified: &["WU", "GP+", "Tr", "TRe"],
            expected_refuted: &[],
        },
        GalleryEntry {
            id: "weakly_unipotent_9x9",
            dim: 9,
            expected_certified: &["WU", "GP+"],
            expected_refuted: &["Tr", "TRe"],
        },
        GalleryEntry {
            id: "solvable_7x7",
            dim: 7,
            expected_certified: &[],
            expected_refuted: &["WU"],
        },
    ]
}

fn rat(n: i64) -> Scalar {
    Scalar::Rational(rat_from_i64(n))
}

/// Translations on a horosphere: unitriangular with top row (1, Y^T, |Y|^2/2).
pub struct HyperbolicCuspFamily {
    pub d: usize,
}

impl ClosedFormFamily for HyperbolicCuspFamily {
    fn gallery_id(&self) -> &'static str {
        "hyperbolic_cusp"
    }

    fn param_dim(&self) -> usize {
        self.d - 2
    }

    fn element(&self, params: &[i64]) -> Result<Matrix> {
        if params.len() != self.d - 2 {
            return Err(Error::DimMismatch("hyperbolic cusp params".into()));
        }
        let d = self.d;
        let mut m = Matrix::identity(d, ScalarKind::Rational);
        let norm2: i64 = params.iter().map(|y| y * y).sum();
        for (j, &y) in params.iter().enumerate() {
            m.set(0, 1 + j, rat(y));
            m.set(1 + j, d - 1, rat(y));
        }
        m.set(0, d - 1, Scalar::Rational(rat_from_pair(norm2, 2)));
        Ok(m)
    }
}

/// The full translation group of a horosphere in dimension `d`, with one
/// generator per coordinate direction.
pub fn hyperbolic_cusp_translations(d: usize) -> Result<MatrixGroup> {
    if d < 3 {
        return Err(Error::Precondition(
            "horospherical translations need dimension >= 3".into(),
        ));
    }
    let family = HyperbolicCuspFamily { d };
    let mut generators = Vec::new();
    for i in 0..d - 2 {
        let mut params = vec![0i64; d - 2];
        params[i] = 1;
        generators.push(NamedGenerator {
            name: format!("t{}", i + 1),
            matrix: family.element(&params)?,
        });
    }
    MatrixGroup::new(d, ScalarKind::Rational, generators, Some(Box::new(family)))
}

/// One-parameter unipotent family with entries n^j / j! on the j-th
/// superdiagonal (the group generated by a single Jordan block).
pub struct JordanFamily {
    pub k: usize,
}

impl ClosedFormFamily for JordanFamily {
    fn gallery_id(&self) -> &'static str {
        "jordan_unipotent"
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn element(&self, params: &[i64]) -> Result<Matrix> {
        let n = params[0];
        let k = self.k;
        let mut m = Matrix::identity(k, ScalarKind::Rational);
        for i in 0..k {
            let mut power = Rat::one(); // n^d / d!
            for (d, j) in ((i + 1)..k).enumerate() {
                power = power * rat_from_i64(n) / rat_from_i64(d as i64 + 1);
                m.set(i, j, Scalar::Rational(power.clone()));
            }
        }
        Ok(m)
    }
}

pub fn jordan_unipotent(k: usize) -> Result<MatrixGroup> {
    if k < 2 {
        return Err(Error::Precondition("jordan family needs size >= 2".into()));
    }
    let family = JordanFamily { k };
    let gen = family.element(&[1])?;
    MatrixGroup::new(
        k,
        ScalarKind::Rational,
        vec![NamedGenerator {
            name: "j".into(),
            matrix: gen,
        }],
        Some(Box::new(family)),
    )
}

/// Weakly unipotent 9x9 family: a 3x3 unipotent block and a 6x6 block mixing
/// polynomial growth with a rotation, evaluated exactly per n (float trig).
pub struct WeaklyUnipotent9x9;

impl ClosedFormFamily for WeaklyUnipotent9x9 {
    fn gallery_id(&self) -> &'static str {
        "weakly_unipotent_9x9"
    }

    fn param_dim(&self) -> usize {
        1
    }

    fn element(&self, params: &[i64]) -> Result<Matrix> {
        let n = params[0] as f64;
        let (c, s) = ((params[0] as f64).cos(), (params[0] as f64).sin());
        let h = 0.5 * n * n;
        let mut rows = vec![vec![0.0f64; 9]; 9];
        // unipotent 3x3 block
        rows[0][0] = 1.0;
        rows[0][1] = n;
        rows[0][2] = h;
        rows[1][1] = 1.0;
        rows[1][2] = n;
        rows[2][2] = 1.0;
        // 6x6 block: [[R, nR, h R], [0, R, nR], [0, 0, R]]
        let r = [[c, s], [-s, c]];
        for (block_i, block_j, scale) in [
            (0, 0, 1.0),
            (0, 1, n),
            (0, 2, h),
            (1, 1, 1.0),
            (1, 2, n),
            (2, 2, 1.0),
        ] {
            for a in 0..2 {
                for b in 0..2 {
                    rows[3 + 2 * block_i + a][3 + 2 * block_j + b] = scale * r[a][b];
                }
            }
        }
        Matrix::from_f64_rows(&rows)
    }
}

pub fn weakly_unipotent_9x9() -> Result<MatrixGroup> {
    let family = WeaklyUnipotent9x9;
    let gen = family.element(&[1])?;
    MatrixGroup::new(
        9,
        ScalarKind::Float64,
        vec![NamedGenerator {
            name: "p".into(),
            matrix: gen,
        }],
        Some(Box::new(family)),
    )
}

/// The matrix coefficient the 9x9 family admits: alpha = e1*+e4*+e5*,
/// x = 2 e3 + (e8+e9)/2, with value n^2 (1 + cos(n)/2).
pub fn witness_9x9() -> (Vec<f64>, Vec<f64>) {
    (
        vec![1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 2.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.5],
    )
}

/// Solvable 7x7 family over Q(sqrt 2): two Galois-conjugate triangular blocks
/// glued with a parabolic block, parameters (a, b, n, m).
pub struct Solvable7x7;

impl Solvable7x7 {
    /// lambda = (1 + sqrt 2)^2 = 3 + 2 sqrt 2
    pub fn lambda() -> QuadSqrt2 {
        QuadSqrt2::from_ints(3, 2)
    }

    pub fn lambda_pow(n: i64) -> QuadSqrt2 {
        let base = if n >= 0 {
            Self::lambda()
        } else {
            QuadSqrt2::from_ints(3, -2) // lambda^{-1}
        };
        let mut acc = QuadSqrt2::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }
}

impl ClosedFormFamily for Solvable7x7 {
    fn gallery_id(&self) -> &'static str {
        "solvable_7x7"
    }

    fn param_dim(&self) -> usize {
        4
    }

    fn element(&self, params: &[i64]) -> Result<Matrix> {
        let [a, b, n, m] = params else {
            return Err(Error::DimMismatch("solvable family needs (a,b,n,m)".into()));
        };
        let omega = QuadSqrt2::from_ints(*a, *b);
        let omega_c = omega.conj();
        let lam_n = Self::lambda_pow(*n);
        let lam_mn = Self::lambda_pow(-*n);
        let two = QuadSqrt2::from_ints(2, 0);
        let mi = QuadSqrt2::from_ints(*m, 0);

        let mut mat = Matrix::identity(7, ScalarKind::QuadSqrt2);
        let q = |v: QuadSqrt2| Scalar::Quad(v);
        mat.set(0, 0, q(&lam_n * &lam_n));
        mat.set(0, 4, q(&lam_n * &omega));
        mat.set(0, 6, q(&omega * &omega));
        mat.set(1, 1, q(&lam_mn * &lam_mn));
        mat.set(1, 5, q(&lam_mn * &omega_c));
        mat.set(1, 6, q(&omega_c * &omega_c));
        mat.set(2, 3, q(mi.clone()));
        mat.set(2, 6, q(&mi * &mi));
        mat.set(3, 6, q(&two * &mi));
        mat.set(4, 4, q(lam_n));
        mat.set(4, 6, q(&two * &omega));
        mat.set(5, 5, q(lam_mn));
        mat.set(5, 6, q(&two * &omega_c));
        Ok(mat)
    }
}

pub fn solvable_7x7() -> Result<MatrixGroup> {
    let family = Solvable7x7;
    let generators = [
        ("a", [1, 0, 0, 0]),
        ("b", [0, 1, 0, 0]),
        ("n", [0, 0, 1, 0]),
        ("m", [0, 0, 0, 1]),
    ]
    .into_iter()
    .map(|(name, p)| {
        Ok(NamedGenerator {
            name: name.to_string(),
            matrix: family.element(&p)?,
        })
    })
    .collect::<Result<Vec<_>>>()?;
    MatrixGroup::new(7, ScalarKind::QuadSqrt2, generators, Some(Box::new(family)))
}

/// The positive s-proper coefficient data for the solvable family:
/// P(a,b,n,m) = lambda^{2n} + lambda^{-2n} + 1 + omega^2 + conj(omega)^2 + m^2.
pub fn solvable_p_value(a: i64, b: i64, n: i64, m: i64) -> QuadSqrt2 {
    let omega = QuadSqrt2::from_ints(a, b);
    let omega_c = omega.conj();
    let lam_n = Solvable7x7::lambda_pow(n);
    let lam_mn = Solvable7x7::lambda_pow(-n);
    let mut p = &lam_n * &lam_n;
    p = &p + &(&lam_mn * &lam_mn);
    p = &p + &QuadSqrt2::one();
    p = &p + &(&omega * &omega);
    p = &p + &(&omega_c * &omega_c);
    p = &p + &QuadSqrt2::from_ints(m * m, 0);
    p
}

pub fn build_gallery(id: &str, params: &Map<String, Value>) -> Result<MatrixGroup> {
    let int_param = |key: &str, default: i64| -> Result<i64> {
        match params.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("gallery param {key} must be an integer"))),
        }
    };
    match id {
        "hyperbolic_cusp" => hyperbolic_cusp_translations(int_param("d", 4)? as usize),
        "jordan_unipotent" => jordan_unipotent(int_param("k", 3)? as usize),
        "weakly_unipotent_9x9" => weakly_unipotent_9x9(),
        "solvable_7x7" => solvable_7x7(),
        other => Err(Error::Parse(format!("unknown gallery id `{other}`"))),
    }
}

pub fn closed_form_by_id(
    id: &str,
    params: &Map<String, Value>,
) -> Result<Box<dyn ClosedFormFamily>> {
    let group = build_gallery(id, params)?;
    group
        .closed_form
        .ok_or_else(|| Error::Parse(format!("gallery `{id}` has no closed form")))
}

pub fn closed_form_params(cf: &dyn ClosedFormFamily) -> Map<String, Value> {
    let mut m = Map::new();
    match cf.gallery_id() {
        "hyperbolic_cusp" => {
            m.insert("d".into(), Value::from(cf.param_dim() + 2));
        }
        "jordan_unipotent" => {
            // recover k from the element shape
            if let Ok(e) = cf.element(&[0]) {
                m.insert("k".into(), Value::from(e.rows()));
            }
        }
        _ => {}
    }
    m
}
