//! Contractions over a single subsystem index.

use num_complex::Complex64;

use crate::qmat::ComplexMatrix;
use crate::{Error, Result};

/// A multipartite index space split as (left, target, right).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Split {
    pub left: usize,
    pub dim: usize,
    pub right: usize,
}

impl Split {
    pub fn new(dims: &[usize], target: usize) -> Result<Self> {
        if target >= dims.len() {
            return Err(Error::InvalidSubsystem {
                index: target,
                count: dims.len(),
            });
        }
        Ok(Self {
            left: dims[..target].iter().product(),
            dim: dims[target],
            right: dims[target + 1..].iter().product(),
        })
    }

    pub fn rest(&self) -> usize {
        self.left * self.right
    }

    pub fn order(&self) -> usize {
        self.left * self.dim * self.right
    }

    #[inline]
    fn full(&self, l: usize, a: usize, r: usize) -> usize {
        (l * self.dim + a) * self.right + r
    }
}

/// `⟨c| op |c⟩` as an operator on the remaining subsystems.
pub(crate) fn contract(op: &ComplexMatrix, split: Split, c: &[Complex64]) -> ComplexMatrix {
    let Split { left, right, .. } = split;
    let order = split.order();
    let rest = split.rest();
    // half[(l,r), col] = Σ_a conj(c_a) op[(l,a,r), col]
    let mut half = ComplexMatrix::zeros(rest, order);
    for l in 0..left {
        for r in 0..right {
            let row = l * right + r;
            for (a, ca) in c.iter().enumerate() {
                let w = ca.conj();
                if w == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = split.full(l, a, r);
                for col in 0..order {
                    half[(row, col)] += w * op[(src, col)];
                }
            }
        }
    }
    let mut out = ComplexMatrix::zeros(rest, rest);
    for row in 0..rest {
        for l in 0..left {
            for r in 0..right {
                let mut acc = Complex64::new(0.0, 0.0);
                for (a, ca) in c.iter().enumerate() {
                    acc += half[(row, split.full(l, a, r))] * ca;
                }
                out[(row, l * right + r)] = acc;
            }
        }
    }
    out
}

/// `out += weight · |v⟩⟨v| ⊗ block`, with `|v⟩⟨v|` placed on the target subsystem.
pub(crate) fn embed_add(
    out: &mut ComplexMatrix,
    split: Split,
    v: &[Complex64],
    block: &ComplexMatrix,
    weight: f64,
) {
    let Split { left, dim, right } = split;
    for l in 0..left {
        for r in 0..right {
            let brow = l * right + r;
            for l2 in 0..left {
                for r2 in 0..right {
                    let b = block[(brow, l2 * right + r2)] * weight;
                    if b == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for a in 0..dim {
                        let va = v[a] * b;
                        for a2 in 0..dim {
                            out[(split.full(l, a, r), split.full(l2, a2, r2))] += va * v[a2].conj();
                        }
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{tensor, StateVector};
    use crate::states::{random_density, RngSeed};

    #[test]
    fn contraction_matches_explicit_operator() {
        // ⟨c|ρ|c⟩ on the middle factor of a 2×3×2 operator versus (I⊗⟨c|⊗I) ρ (I⊗|c⟩⊗I).
        let rho = random_density(&[2, 3, 2], 12, RngSeed(5)).unwrap();
        let c = [
            Complex64::new(0.3, 0.2),
            Complex64::new(-1.0, 0.5),
            Complex64::new(0.1, -0.7),
        ];
        let split = Split::new(&[2, 3, 2], 1).unwrap();
        let fast = contract(rho.matrix(), split, &c);

        let mut bra = ComplexMatrix::zeros(1, 3);
        for (k, z) in c.iter().enumerate() {
            bra[(0, k)] = z.conj();
        }
        let left = tensor(
            &tensor(&ComplexMatrix::identity(2), &bra),
            &ComplexMatrix::identity(2),
        );
        let slow = &(&left * rho.matrix()) * &left.adjoint();
        assert!(fast.max_abs_diff(&slow) < 1e-14);
    }

    #[test]
    fn embed_matches_kronecker() {
        let v = StateVector::plus();
        let block = random_density(&[3], 3, RngSeed(1)).unwrap();
        let split = Split::new(&[2, 3], 0).unwrap();
        let mut out = ComplexMatrix::zeros(6, 6);
        embed_add(&mut out, split, v.amplitudes(), block.matrix(), 0.5);
        let expected = tensor(&v.projector(), block.matrix()).scaled(0.5);
        assert!(out.max_abs_diff(&expected) < 1e-15);
    }
}
