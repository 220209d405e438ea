use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::SearchRecord;

/// Interior bin edges of the `ΔI` histogram. Bin `k` counts values in
/// `[edge[k−1], edge[k])`, with open-ended first and last bins.
pub const HISTOGRAM_EDGES: [f64; 12] = [
    -1e-1, -1e-3, -1e-5, -1e-7, -1e-9, 0.0, 1e-9, 1e-7, 1e-5, 1e-3, 1e-1, 1.0,
];

fn bin(value: f64) -> usize {
    HISTOGRAM_EDGES.iter().take_while(|&&e| value >= e).count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DimsSummary {
    pub dims: Vec<usize>,
    pub records: usize,
    pub below_threshold: usize,
    /// Record with the smallest `ΔI`; the earliest one on ties.
    pub min: SearchRecord,
    pub histogram: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub threshold: f64,
    pub records: usize,
    pub below_threshold: usize,
    /// Sorted by dims.
    pub per_dims: Vec<DimsSummary>,
    pub global_min: Option<SearchRecord>,
}

/// Folds records into a [`Summary`]; the result depends only on the multiset
/// of records pushed and, for ties, their order.
#[derive(Clone, Debug)]
pub struct SummaryBuilder {
    threshold: f64,
    per_dims: BTreeMap<Vec<usize>, DimsSummary>,
}

impl SummaryBuilder {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            per_dims: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, record: &SearchRecord) {
        let entry = self
            .per_dims
            .entry(record.dims.clone())
            .or_insert_with(|| DimsSummary {
                dims: record.dims.clone(),
                records: 0,
                below_threshold: 0,
                min: record.clone(),
                histogram: vec![0; HISTOGRAM_EDGES.len() + 1],
            });
        entry.records += 1;
        if record.delta_i < self.threshold {
            entry.below_threshold += 1;
        }
        if record.delta_i < entry.min.delta_i {
            entry.min = record.clone();
        }
        entry.histogram[bin(record.delta_i)] += 1;
    }

    pub fn summary(&self) -> Summary {
        let per_dims: Vec<DimsSummary> = self.per_dims.values().cloned().collect();
        let global_min = per_dims
            .iter()
            .map(|d| &d.min)
            .fold(None::<&SearchRecord>, |best, r| match best {
                Some(b) if b.delta_i <= r.delta_i => Some(b),
                _ => Some(r),
            })
            .cloned();
        Summary {
            threshold: self.threshold,
            records: per_dims.iter().map(|d| d.records).sum(),
            below_threshold: per_dims.iter().map(|d| d.below_threshold).sum(),
            per_dims,
            global_min,
        }
    }
}
