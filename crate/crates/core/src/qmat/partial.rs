use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Sorted, deduplicated, range-checked subsystem list.
pub(crate) fn normalize_indices(indices: &[usize], count: usize) -> Result<Vec<usize>> {
    let mut v = indices.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() != indices.len() {
        return Err(Error::InvalidPartition(format!(
            "repeated subsystem in {indices:?}"
        )));
    }
    if let Some(&index) = v.iter().find(|&&i| i >= count) {
        return Err(Error::InvalidSubsystem { index, count });
    }
    Ok(v)
}

/// Reduced operator on the `keep` subsystems (raw form, no validation of `m`).
pub(crate) fn partial_trace_op(
    dims: &[usize],
    m: &ComplexMatrix,
    keep: &[usize],
) -> Result<(Vec<usize>, ComplexMatrix)> {
    if keep.is_empty() {
        return Err(Error::InvalidPartition("nothing to keep".into()));
    }
    let keep = normalize_indices(keep, dims.len())?;
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    if keep.len() == dims.len() {
        return Ok((kept_dims, m.clone()));
    }
    let order = m.rows();
    let kept_order: usize = kept_dims.iter().product();
    let traced_order = order / kept_order;

    // Split each full index into (kept, traced) mixed-radix parts.
    let mut kept_of = vec![0usize; order];
    let mut rows_by_traced: Vec<Vec<usize>> = vec![Vec::new(); traced_order];
    for (r, kept_slot) in kept_of.iter_mut().enumerate() {
        let mut rem = r;
        let (mut k, mut kmul, mut t, mut tmul) = (0, 1, 0, 1);
        for (s, &d) in dims.iter().enumerate().rev() {
            let digit = rem % d;
            rem /= d;
            if keep.binary_search(&s).is_ok() {
                k += digit * kmul;
                kmul *= d;
            } else {
                t += digit * tmul;
                tmul *= d;
            }
        }
        *kept_slot = k;
        rows_by_traced[t].push(r);
    }

    let mut out = ComplexMatrix::zeros(kept_order, kept_order);
    for rows in &rows_by_traced {
        for &r in rows {
            for &c in rows {
                out[(kept_of[r], kept_of[c])] += m[(r, c)];
            }
        }
    }
    Ok((kept_dims, out))
}

/// Reduced state on the subsystems listed in `keep`, in their original order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (dims, m) = partial_trace_op(rho.dims(), rho.matrix(), keep)?;
    Ok(DensityMatrix::from_parts_unchecked(
        dims,
        m.hermitian_part(),
    ))
}
