use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::eigen::eigenvalues_unchecked;
use super::partial::{normalize_indices, partial_trace_op};
use super::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Eigenvalues at or below this are treated as zero in entropies.
pub const ENTROPY_CLAMP: f64 = 1e-12;

/// `−Σ λ log₂ λ` over eigenvalues above `clamp`.
pub fn spectral_entropy(eigenvalues: &[f64], clamp: f64) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > clamp)
        .map(|&l| -l * libm::log2(l))
        .sum()
}

/// Same as [`spectral_entropy`] with Neumaier-compensated summation.
pub fn spectral_entropy_compensated(eigenvalues: &[f64], clamp: f64) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &l in eigenvalues.iter().filter(|&&l| l > clamp) {
        let term = -l * libm::log2(l);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of(rho.matrix(), ENTROPY_CLAMP)
}

/// Entropy of the Hermitian part of a raw operator.
pub fn entropy_of(m: &ComplexMatrix, clamp: f64) -> f64 {
    spectral_entropy(&eigenvalues_unchecked(m), clamp)
}

/// A split of the subsystems into disjoint, non-empty groups covering all of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(groups: Vec<Vec<usize>>, num_subsystems: usize) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::InvalidPartition("need at least two groups".into()));
        }
        let mut seen = vec![false; num_subsystems];
        let mut normalized = Vec::with_capacity(groups.len());
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidPartition("empty group".into()));
            }
            let g = normalize_indices(g, num_subsystems)?;
            for &i in &g {
                if seen[i] {
                    return Err(Error::InvalidPartition(format!(
                        "subsystem {i} in two groups"
                    )));
                }
                seen[i] = true;
            }
            normalized.push(g);
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "subsystem {missing} not covered"
            )));
        }
        Ok(Self { groups: normalized })
    }

    pub fn bipartite(left: &[usize], right: &[usize], num_subsystems: usize) -> Result<Self> {
        Self::new(vec![left.to_vec(), right.to_vec()], num_subsystems)
    }

    /// Subsystem `target` against everything else.
    pub fn cut(target: usize, num_subsystems: usize) -> Result<Self> {
        let rest: Vec<usize> = (0..num_subsystems).filter(|&i| i != target).collect();
        Self::bipartite(&[target], &rest, num_subsystems)
    }

    /// Every subsystem in its own group (the N-partite form).
    pub fn individual(num_subsystems: usize) -> Result<Self> {
        Self::new(
            (0..num_subsystems).map(|i| vec![i]).collect(),
            num_subsystems,
        )
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

/// `Σ_g S(ρ_g) − S(ρ)` in bits.
pub fn mutual_information(rho: &DensityMatrix, partition: &Partition) -> Result<f64> {
    mutual_information_op(rho.dims(), rho.matrix(), partition, ENTROPY_CLAMP)
}

pub(crate) fn mutual_information_op(
    dims: &[usize],
    m: &ComplexMatrix,
    partition: &Partition,
    clamp: f64,
) -> Result<f64> {
    mutual_information_with(dims, m, partition, |op| entropy_of(op, clamp))
}

/// Mutual information with a caller-supplied entropy functional.
pub fn mutual_information_with<F>(
    dims: &[usize],
    m: &ComplexMatrix,
    partition: &Partition,
    mut entropy: F,
) -> Result<f64>
where
    F: FnMut(&ComplexMatrix) -> f64,
{
    let covered: usize = partition.groups.iter().map(Vec::len).sum();
    if covered != dims.len() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {covered} subsystems, state has {}",
            dims.len()
        )));
    }
    let mut total = -entropy(m);
    for g in &partition.groups {
        let (_, reduced) = partial_trace_op(dims, m, g)?;
        total += entropy(&reduced);
    }
    Ok(total)
}
