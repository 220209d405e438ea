#![allow(dead_code)]

use oblique_core::channels::ObliqueBasis;
use oblique_core::qmat::{tensor_all, ComplexMatrix, DensityMatrix, StateVector};
use oblique_core::states::{random_density, random_oblique_basis, RngSeed, ZodSpec};
use oblique_core::Complex64;
use rand::Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` at `target`.
pub fn embed(dims: &[usize], target: usize, op: &ComplexMatrix) -> ComplexMatrix {
    let ids: Vec<ComplexMatrix> = dims.iter().map(|&d| ComplexMatrix::identity(d)).collect();
    let factors: Vec<&ComplexMatrix> = (0..dims.len())
        .map(|k| if k == target { op } else { &ids[k] })
        .collect();
    tensor_all(&factors)
}

/// The oblique channel written out with dense operators `K_i = |i⟩⟨ĩ| ⊗ I`.
pub fn dense_channel(
    basis: &ObliqueBasis,
    target: usize,
    rho: &ComplexMatrix,
    dims: &[usize],
) -> ComplexMatrix {
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (v, d) in basis.vectors().iter().zip(basis.duals()) {
        let k = embed(
            dims,
            target,
            &ComplexMatrix::outer(v.amplitudes(), d.amplitudes()),
        );
        let term = &(&k * rho) * &k.adjoint();
        out = &out + &term;
    }
    let z = out.trace().re;
    out.scaled(1.0 / z)
}

/// `Σ_i P_i ρ P_i` with `P_i = |i⟩⟨i| ⊗ I`.
pub fn projective_map(
    basis: &ObliqueBasis,
    target: usize,
    rho: &ComplexMatrix,
    dims: &[usize],
) -> ComplexMatrix {
    let n = rho.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for v in basis.vectors() {
        let p = embed(dims, target, &v.projector());
        out = &out + &(&(&p * rho) * &p);
    }
    out
}

/// Duals from the Gram route `D = S (S†S)⁻¹`, solved by Gauss–Jordan elimination.
pub fn gram_duals(basis: &ObliqueBasis) -> ComplexMatrix {
    let columns: Vec<&[Complex64]> = basis
        .vectors()
        .iter()
        .map(StateVector::amplitudes)
        .collect();
    let s = ComplexMatrix::from_columns(&columns);
    let g = &s.adjoint() * &s;
    &s * &gauss_jordan_inverse(&g)
}

fn gauss_jordan_inverse(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut a = m.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[(x, col)].norm().total_cmp(&a[(y, col)].norm()))
            .unwrap();
        for j in 0..n {
            let t = a[(col, j)];
            a[(col, j)] = a[(pivot, j)];
            a[(pivot, j)] = t;
            let t = inv[(col, j)];
            inv[(col, j)] = inv[(pivot, j)];
            inv[(pivot, j)] = t;
        }
        let p = a[(col, col)];
        for j in 0..n {
            a[(col, j)] /= p;
            inv[(col, j)] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[(r, col)];
                for j in 0..n {
                    let (x, y) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * x;
                    inv[(r, j)] -= f * y;
                }
            }
        }
    }
    inv
}

pub fn random_weights<R: Rng>(k: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// A random ZOD specification with `n_a` terms and full-rank conditionals.
pub fn random_zod_spec(n_a: usize, d_b: usize, seed: RngSeed) -> ZodSpec {
    let mut rng = seed.mix(0).rng();
    let basis = random_oblique_basis(n_a, 1e4, seed.mix(1)).unwrap();
    let weights = random_weights(n_a, &mut rng);
    let conditionals = (0..n_a)
        .map(|k| random_density(&[d_b], d_b, seed.mix(2 + k as u64)).unwrap())
        .collect();
    ZodSpec {
        basis,
        weights,
        conditionals,
    }
}

pub fn bell() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::unit(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
    DensityMatrix::pure(vec![2, 2], &psi).unwrap()
}

pub fn local_unitary(
    u_a: &ComplexMatrix,
    u_b: &ComplexMatrix,
    rho: &DensityMatrix,
) -> DensityMatrix {
    let u = tensor_all(&[u_a, u_b]);
    rho.conjugate_by(&u).unwrap()
}
