//! Dyadic bucketing of samples by a positive size measure. The top three
//! non-empty buckets are the finite surrogate for "outside a bounded set":
//! trends across them stand in for behavior at infinity.

#[derive(Debug, Clone)]
pub struct DyadicBuckets {
    /// (bucket level, member indices), sorted by level ascending.
    pub levels: Vec<(i32, Vec<usize>)>,
}

impl DyadicBuckets {
    pub fn new(sizes: &[f64]) -> Self {
        let mut map: std::collections::BTreeMap<i32, Vec<usize>> = Default::default();
        for (i, &s) in sizes.iter().enumerate() {
            if !(s.is_finite() && s > 0.0) {
                continue;
            }
            map.entry(s.log2().floor() as i32).or_default().push(i);
        }
        DyadicBuckets {
            levels: map.into_iter().collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// The top `k` non-empty buckets, from lowest to highest.
    pub fn top(&self, k: usize) -> &[(i32, Vec<usize>)] {
        let n = self.levels.len();
        &self.levels[n.saturating_sub(k)..]
    }

    /// Member indices of the single topmost bucket.
    pub fn far_bucket(&self) -> &[usize] {
        self.levels.last().map(|(_, v)| v.as_slice()).unwrap_or(&[])
    }

    /// Indices in the top `k` buckets.
    pub fn top_indices(&self, k: usize) -> Vec<usize> {
        self.top(k).iter().flat_map(|(_, v)| v.iter().copied()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn buckets_split_dyadically() {
        let sizes = [1.0, 1.5, 2.0, 3.9, 4.0, 100.0];
        let b = DyadicBuckets::new(&sizes);
        assert_eq!(b.levels.len(), 4);
        assert_eq!(b.far_bucket(), &[5]);
        assert_eq!(b.top(2).len(), 2);
    }

    #[test]
    fn nonpositive_sizes_skipped() {
        let b = DyadicBuckets::new(&[0.0, -1.0, f64::NAN, 8.0]);
        assert_eq!(b.levels.len(), 1);
        assert_eq!(b.far_bucket(), &[3]);
    }
}
