//! Finitely generated matrix groups: generator sets with exact scalars,
//! breadth-first word enumeration with deduplication, and closed-form
//! parameter-grid enumeration for gallery families.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixKey};
use crate::scalar::ScalarKind;

pub const SAMPLE_BUDGET: usize = 1_000_000;

/// Identifier plus integer-parameter evaluator for a closed-form family.
/// Grid enumeration avoids float product drift for families with
/// transcendental entries.
pub trait ClosedFormFamily: Send + Sync {
    fn gallery_id(&self) -> &'static str;
    fn param_dim(&self) -> usize;
    fn element(&self, params: &[i64]) -> Result<Matrix>;
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedGenerator {
    pub name: String,
    pub matrix: Matrix,
}

pub struct MatrixGroup {
    pub dim: usize,
    pub scalar_kind: ScalarKind,
    pub generators: Vec<NamedGenerator>,
    pub closed_form: Option<Box<dyn ClosedFormFamily>>,
}

impl std::fmt::Debug for MatrixGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MatrixGroup(dim {}, {} generators, {:?})",
            self.dim,
            self.generators.len(),
            self.closed_form.as_ref().map(|c| c.gallery_id())
        )
    }
}

impl MatrixGroup {
    pub fn new(
        dim: usize,
        scalar_kind: ScalarKind,
        generators: Vec<NamedGenerator>,
        closed_form: Option<Box<dyn ClosedFormFamily>>,
    ) -> Result<Self> {
        for g in &generators {
            if g.matrix.rows() != dim || g.matrix.cols() != dim {
                return Err(Error::DimMismatch(format!(
                    "generator {} is not {dim}x{dim}",
                    g.name
                )));
            }
            if g.matrix.kind() != scalar_kind {
                return Err(Error::KindMismatch {
                    expected: scalar_kind,
                    got: g.matrix.kind(),
                });
            }
            let det = g.matrix.det()?.to_f64().abs();
            if (det - 1.0).abs() > 1e-9 {
                return Err(Error::Precondition(format!(
                    "generator {} has |det| = {det}, group must sit in SL+-",
                    g.name
                )));
            }
        }
        Ok(MatrixGroup {
            dim,
            scalar_kind,
            generators,
            closed_form,
        })
    }

    /// Generators together with their inverses (inverse omitted for
    /// involutions and the identity).
    pub fn symmetric_generators(&self) -> Result<Vec<(i32, Matrix)>> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            out.push((i as i32 + 1, g.matrix.clone()));
            let inv = g.matrix.inverse()?;
            if inv != g.matrix {
                out.push((-(i as i32 + 1), inv));
            }
        }
        Ok(out)
    }
}

/// A group element tagged with the word that produced it.
#[derive(Debug, Clone)]
pub struct WordSample {
    pub element: Matrix,
    /// Generator indices, 1-based; negative for inverses. For closed-form
    /// grids this encodes the parameter vector as generator powers.
    pub word: Vec<i32>,
    pub length: usize,
}

impl WordSample {
    pub fn word_string(&self, group: &MatrixGroup) -> String {
        if self.word.is_empty() {
            return "e".to_string();
        }
        self.word
            .iter()
            .map(|&w| {
                let name = &group.generators[(w.unsigned_abs() as usize) - 1].name;
                if w < 0 {
                    format!("{name}'")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// All distinct group elements of word length at most `max_len`, including
/// the identity. Deduplication is exact for exact scalars and uses a 1e-12
/// rounded hash for floats. Closed-form families are enumerated on the
/// parameter grid of L1 radius `max_len` instead of by multiplication.
pub fn enumerate_words(group: &MatrixGroup, max_len: usize) -> Result<Vec<WordSample>> {
    if let Some(cf) = &group.closed_form {
        return enumerate_closed_form(group, cf.as_ref(), max_len);
    }
    let gens = group.symmetric_generators()?;
    let mut seen: HashMap<MatrixKey, ()> = HashMap::new();
    let identity = Matrix::identity(group.dim, group.scalar_kind);
    let mut out = vec![WordSample {
        element: identity.clone(),
        word: vec![],
        length: 0,
    }];
    seen.insert(identity.dedup_key(), ());
    let mut frontier: VecDeque<usize> = VecDeque::new();
    frontier.push_back(0);
    let mut next_frontier = VecDeque::new();
    for len in 1..=max_len {
        while let Some(idx) = frontier.pop_front() {
            let base = out[idx].element.clone();
            let base_word = out[idx].word.clone();
            for (tag, g) in &gens {
                let prod = base.mul(g)?;
                let key = prod.dedup_key();
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, ());
                let mut word = base_word.clone();
                word.push(*tag);
                out.push(WordSample {
                    element: prod,
                    word,
                    length: len,
                });
                next_frontier.push_back(out.len() - 1);
                if out.len() > SAMPLE_BUDGET {
                    return Err(Error::SampleBudget(out.len()));
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next_frontier);
    }
    Ok(out)
}

fn enumerate_closed_form(
    group: &MatrixGroup,
    cf: &dyn ClosedFormFamily,
    radius: usize,
) -> Result<Vec<WordSample>> {
    let d = cf.param_dim();
    let mut params = vec![0i64; d];
    let mut out = Vec::new();
    fn rec(
        cf: &dyn ClosedFormFamily,
        params: &mut Vec<i64>,
        idx: usize,
        remaining: i64,
        out: &mut Vec<WordSample>,
    ) -> Result<()> {
        if idx == params.len() {
            let element = cf.element(params)?;
            let length: usize = params.iter().map(|p| p.unsigned_abs() as usize).sum();
            let word: Vec<i32> = params
                .iter()
                .enumerate()
                .flat_map(|(i, &p)| {
                    let tag = if p >= 0 { i as i32 + 1 } else { -(i as i32 + 1) };
                    std::iter::repeat(tag).take(p.unsigned_abs() as usize)
                })
                .collect();
            out.push(WordSample {
                element,
                word,
                length,
            });
            if out.len() > SAMPLE_BUDGET {
                return Err(Error::SampleBudget(out.len()));
            }
            return Ok(());
        }
        for v in -remaining..=remaining {
            params[idx] = v;
            rec(cf, params, idx + 1, remaining - v.abs(), out)?;
        }
        params[idx] = 0;
        Ok(())
    }
    rec(cf, &mut params, 0, radius as i64, &mut out)?;
    let _ = group;
    Ok(out)
}

/// Wire format for groups.
#[derive(Debug, Serialize, Deserialize)]
pub struct GroupSpec {
    pub dim: usize,
    pub scalar: ScalarKind,
    #[serde(default)]
    pub generators: Vec<NamedGenerator>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedFormSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedFormSpec {
    pub gallery: String,
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<MatrixGroup> {
        let closed_form = match &self.closed_form {
            None => None,
            Some(cf) => Some(crate::gallery::closed_form_by_id(&cf.gallery, &cf.params)?),
        };
        MatrixGroup::new(
            self.dim,
            self.scalar,
            self.generators.clone(),
            closed_form,
        )
    }

    pub fn from_group(group: &MatrixGroup) -> GroupSpec {
        GroupSpec {
            dim: group.dim,
            scalar: group.scalar_kind,
            generators: group.generators.clone(),
            closed_form: group.closed_form.as_ref().map(|cf| ClosedFormSpec {
                gallery: cf.gallery_id().to_string(),
                params: crate::gallery::closed_form_params(cf.as_ref()),
            }),
        }
    }
}
