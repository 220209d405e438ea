#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use oblique::formats::{BasisJson, StateJson};
use oblique_core::channels::ObliqueBasis;
use oblique_core::qmat::{ComplexMatrix, DensityMatrix, StateVector};
use oblique_core::Complex64;
use serde_json::Value;

pub fn run(args: &[&str]) -> (i32, Value, String) {
    let out = raw(args);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = if stdout.trim().is_empty() {
        Value::Null
    } else {
        serde_json::from_str(&stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {stdout}"))
    };
    (
        out.status.code().unwrap(),
        json,
        String::from_utf8(out.stderr).unwrap(),
    )
}

pub fn raw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oblique"))
        .args(args)
        .env_remove("OBLIQUE_THREADS")
        .output()
        .unwrap()
}

pub fn schema_errors(name: &str, instance: &Value) -> Vec<String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    validator
        .iter_errors(instance)
        .map(|e| e.to_string())
        .collect()
}

pub fn assert_schema(name: &str, instance: &Value) {
    let errors = schema_errors(name, instance);
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

pub fn write_state(dir: &Path, name: &str, rho: &DensityMatrix) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(
        &p,
        serde_json::to_string(&StateJson::from_state(rho)).unwrap(),
    )
    .unwrap();
    p
}

pub fn write_basis(dir: &Path, name: &str, b: &ObliqueBasis) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(
        &p,
        serde_json::to_string(&BasisJson::from_basis(b)).unwrap(),
    )
    .unwrap();
    p
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn bell() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let psi = StateVector::unit(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
    DensityMatrix::pure(vec![2, 2], &psi).unwrap()
}

pub fn zero_plus() -> ObliqueBasis {
    ObliqueBasis::new(vec![StateVector::basis(2, 0), StateVector::plus()]).unwrap()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `Σ_i K_i ρ K_i† / tr(…)` with `K_i = |i⟩⟨ĩ| ⊗ I` built densely on subsystem 0
/// of a bipartite `d_a × d_b` state.
pub fn dense_channel(
    basis: &ObliqueBasis,
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
) -> ComplexMatrix {
    let n = d_a * d_b;
    let mut out = ComplexMatrix::zeros(n, n);
    for (v, d) in basis.vectors().iter().zip(basis.duals()) {
        let k = oblique_core::qmat::tensor(
            &ComplexMatrix::outer(v.amplitudes(), d.amplitudes()),
            &ComplexMatrix::identity(d_b),
        );
        out = &out + &(&(&k * rho) * &k.adjoint());
    }
    let z = out.trace().re;
    out.scaled(1.0 / z)
}

/// Reduced states `(ρ_A, ρ_B)` by explicit index sums.
pub fn marginals(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> (ComplexMatrix, ComplexMatrix) {
    let mut a = ComplexMatrix::zeros(d_a, d_a);
    let mut b = ComplexMatrix::zeros(d_b, d_b);
    for i in 0..d_a {
        for j in 0..d_a {
            for k in 0..d_b {
                a[(i, j)] += rho[(i * d_b + k, j * d_b + k)];
            }
        }
    }
    for i in 0..d_b {
        for j in 0..d_b {
            for k in 0..d_a {
                b[(i, j)] += rho[(k * d_b + i, k * d_b + j)];
            }
        }
    }
    (a, b)
}

/// Von Neumann entropy in bits from nalgebra's Hermitian eigenvalues.
pub fn entropy(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let h = nalgebra::DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    h.symmetric_eigenvalues()
        .iter()
        .filter(|&&x| x > 1e-12)
        .map(|&x| -x * x.log2())
        .sum()
}

pub fn mutual_information(rho: &ComplexMatrix, d_a: usize, d_b: usize) -> f64 {
    let (a, b) = marginals(rho, d_a, d_b);
    entropy(&a) + entropy(&b) - entropy(rho)
}

/// Two-qubit geometric discord `¼(‖x‖² + ‖T‖² − k_max)` from the Bloch
/// vector of A and the correlation matrix.
pub fn two_qubit_geometric_discord(rho: &ComplexMatrix) -> f64 {
    let i = Complex64::new(0.0, 1.0);
    let paulis = [
        ComplexMatrix::from_row_major(2, 2, vec![c(0.0), c(1.0), c(1.0), c(0.0)]).unwrap(),
        ComplexMatrix::from_row_major(2, 2, vec![c(0.0), -i, i, c(0.0)]).unwrap(),
        ComplexMatrix::from_row_major(2, 2, vec![c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap(),
    ];
    let id = ComplexMatrix::identity(2);
    let expect = |op: &ComplexMatrix| (rho * op).trace().re;
    let x: Vec<f64> = paulis
        .iter()
        .map(|p| expect(&oblique_core::qmat::tensor(p, &id)))
        .collect();
    let t = nalgebra::Matrix3::from_fn(|r, s| {
        expect(&oblique_core::qmat::tensor(&paulis[r], &paulis[s]))
    });
    let xv = nalgebra::Vector3::new(x[0], x[1], x[2]);
    let k = xv * xv.transpose() + t * t.transpose();
    let k_max = k.symmetric_eigenvalues().max();
    0.25 * (xv.norm_squared() + t.norm_squared() - k_max)
}
