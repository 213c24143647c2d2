//! Near-duplicate lookup through a scalar key.
//!
//! Items whose keys differ by less than the bucket width land in the same or an
//! adjacent bucket, so a query only scans three buckets.

use std::collections::HashMap;

#[derive(Debug, Clone)]
pub struct NearIndex {
    width: f64,
    buckets: HashMap<i64, Vec<usize>>,
}

impl NearIndex {
    /// `width` must bound the key difference of any two items that should match.
    pub fn new(width: f64) -> Self {
        assert!(width > 0.0, "bucket width must be positive");
        NearIndex { width, buckets: HashMap::new() }
    }

    fn bucket(&self, key: f64) -> i64 {
        (key / self.width).floor() as i64
    }

    pub fn candidates(&self, key: f64) -> impl Iterator<Item = usize> + '_ {
        let b = self.bucket(key);
        (b - 1..=b + 1).flat_map(move |k| self.buckets.get(&k).into_iter().flatten().copied())
    }

    pub fn insert(&mut self, key: f64, item: usize) {
        let b = self.bucket(key);
        self.buckets.entry(b).or_default().push(item);
    }
}

/// Fixed weights for a scalar key of a coordinate vector.
pub fn key_weight(i: usize) -> f64 {
    1.0 / (1.0 + 0.37 * i as f64)
}

/// Weighted coordinate sum; `|key(a) − key(b)| ≤ len · max|a − b|`.
pub fn vector_key(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(i, v)| v * key_weight(i)).sum()
}
