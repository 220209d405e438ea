//! Inner convex problem of the geometric oblique discord: for a fixed basis
//! `{|i⟩}` of subsystem A, minimize `‖ρ − Σ_i |i⟩⟨i| ⊗ M_i‖²` over
//! `M_i ⪰ 0` with `Σ_i tr M_i = 1`.
//!
//! With `G_ij = |⟨i|j⟩|²` and `R_i = ⟨i|ρ|i⟩` the objective is
//! `Σ_ij G_ij tr(M_i M_j) − 2 Σ_i tr(R_i M_i) + tr ρ²`, a convex quadratic
//! whose gradient `2(Σ_j G_ij M_j − R_i)` is Lipschitz with constant
//! `2 λ_max(G)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::blocks::{contract, Split};
use crate::channels::ObliqueBasis;
use crate::qmat::{eigensystem_unchecked, eigenvalues_unchecked, ComplexMatrix};
use crate::Result;

/// Iteration cap of the inner solver.
pub const INNER_MAX_ITERATIONS: usize = 500;
/// Stop once an accelerated step improves the objective by at most this.
pub const INNER_TOLERANCE: f64 = 1e-10;

pub(crate) struct InnerProblem {
    n: usize,
    gram_sq: Vec<f64>,
    lipschitz: f64,
    targets: Vec<ComplexMatrix>,
    purity: f64,
}

pub(crate) struct InnerSolution {
    #[cfg_attr(not(test), allow(dead_code))]
    pub blocks: Vec<ComplexMatrix>,
    pub value: f64,
}

impl InnerProblem {
    pub fn new(dims: &[usize], rho: &ComplexMatrix, basis: &ObliqueBasis) -> Result<Self> {
        let split = Split::new(dims, 0)?;
        let n = basis.dim();
        let vectors = basis.vectors();
        let mut gram_sq = Vec::with_capacity(n * n);
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = vectors[i].inner(&vectors[j]).norm_sqr();
                gram_sq.push(v);
                g[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        let lambda_max = eigenvalues_unchecked(&g).last().copied().unwrap_or(1.0);
        let targets = vectors
            .iter()
            .map(|v| contract(rho, split, v.amplitudes()).hermitian_part())
            .collect();
        Ok(Self {
            n,
            gram_sq,
            lipschitz: 2.0 * lambda_max.max(1.0),
            targets,
            purity: rho.real_trace_product(rho),
        })
    }

    pub fn objective(&self, m: &[ComplexMatrix]) -> f64 {
        let mut total = self.purity;
        for i in 0..self.n {
            total -= 2.0 * self.targets[i].real_trace_product(&m[i]);
            total += self.gram_sq[i * self.n + i] * m[i].real_trace_product(&m[i]);
            for j in i + 1..self.n {
                total += 2.0 * self.gram_sq[i * self.n + j] * m[i].real_trace_product(&m[j]);
            }
        }
        total
    }

    /// `y − ∇f(y)/L`.
    fn gradient_step(&self, y: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let step = 2.0 / self.lipschitz;
        (0..self.n)
            .map(|i| {
                let mut out = y[i].clone();
                out.add_scaled(&self.targets[i], Complex64::new(step, 0.0));
                for j in 0..self.n {
                    out.add_scaled(
                        &y[j],
                        Complex64::new(-step * self.gram_sq[i * self.n + j], 0.0),
                    );
                }
                out
            })
            .collect()
    }

    /// Accelerated projected gradient with function-value restarts, started
    /// at the feasible point `init`. Returns the best iterate seen, so the
    /// value never exceeds `objective(init)`.
    pub fn solve(&self, init: Vec<ComplexMatrix>) -> InnerSolution {
        let mut x = init;
        let mut fx = self.objective(&x);
        let mut best = (x.clone(), fx);
        let mut y = x.clone();
        let mut t = 1.0f64;
        let mut iterations = 0;
        let mut just_restarted = true;
        while iterations < INNER_MAX_ITERATIONS {
            iterations += 1;
            let mut z = self.gradient_step(&y);
            project_block_spectraplex(&mut z);
            let fz = self.objective(&z);
            if fz > fx {
                if just_restarted {
                    break;
                }
                y = x.clone();
                t = 1.0;
                just_restarted = true;
                continue;
            }
            let t_next = 0.5 * (1.0 + libm::sqrt(1.0 + 4.0 * t * t));
            let momentum = (t - 1.0) / t_next;
            y = z
                .iter()
                .zip(&x)
                .map(|(zi, xi)| {
                    let mut yi = zi.clone();
                    yi.add_scaled(zi, Complex64::new(momentum, 0.0));
                    yi.add_scaled(xi, Complex64::new(-momentum, 0.0));
                    yi
                })
                .collect();
            let decrease = fx - fz;
            x = z;
            fx = fz;
            t = t_next;
            just_restarted = false;
            if fx < best.1 {
                best = (x.clone(), fx);
            }
            if decrease <= INNER_TOLERANCE {
                break;
            }
        }
        InnerSolution {
            blocks: best.0,
            value: best.1,
        }
    }
}

/// Euclidean projection onto `{M_i ⪰ 0, Σ_i tr M_i = 1}`: diagonalize every
/// block and project the pooled eigenvalues onto the probability simplex.
pub(crate) fn project_block_spectraplex(blocks: &mut [ComplexMatrix]) {
    let systems: Vec<_> = blocks
        .iter()
        .map(|b| eigensystem_unchecked(&b.hermitian_part()))
        .collect();
    let pooled: Vec<f64> = systems
        .iter()
        .flat_map(|e| e.values.iter().copied())
        .collect();
    let projected = project_simplex(&pooled);
    let mut offset = 0;
    for (block, e) in blocks.iter_mut().zip(&systems) {
        let k = e.values.len();
        *block = e.reconstruct_with(&projected[offset..offset + k]);
        offset += k;
    }
}

/// Euclidean projection of `v` onto `{w ≥ 0, Σ w = 1}`.
pub(crate) fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&u| (u - theta).max(0.0)).collect()
}
