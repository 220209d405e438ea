use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::channels::ObliqueBasis;
use crate::qmat::{tensor, ComplexMatrix, DensityMatrix, StateVector};

/// Fixed states separating the three sets of the inclusion hierarchy.
#[derive(Clone, Debug)]
pub struct HierarchyWitness {
    pub label: &'static str,
    pub description: &'static str,
    pub state: DensityMatrix,
    /// Basis certifying zero oblique discord, when one exists.
    pub basis: Option<ObliqueBasis>,
}

fn mix(terms: &[(&StateVector, &StateVector)]) -> DensityMatrix {
    let w = 1.0 / terms.len() as f64;
    let mut m = ComplexMatrix::zeros(4, 4);
    for (a, b) in terms {
        m.add_scaled(
            &tensor(&a.projector(), &b.projector()),
            Complex64::new(w, 0.0),
        );
    }
    DensityMatrix::new(vec![2, 2], m.hermitian_part()).expect("witness is a valid state")
}

/// `w1` (zero discord), `w2` (zero oblique discord, positive discord) and
/// `w3` (separable, positive oblique discord).
///
/// - `w1 = ½(|0⟩⟨0|⊗|0⟩⟨0| + |1⟩⟨1|⊗|1⟩⟨1|)`
/// - `w2 = ½(|0⟩⟨0|⊗|0⟩⟨0| + |+⟩⟨+|⊗|1⟩⟨1|)`
/// - `w3 = ⅓(|0⟩⟨0|⊗|0⟩⟨0| + |1⟩⟨1|⊗|1⟩⟨1| + |+⟩⟨+|⊗|+⟩⟨+|)`
pub fn hierarchy_witnesses() -> Vec<HierarchyWitness> {
    let k0 = StateVector::basis(2, 0);
    let k1 = StateVector::basis(2, 1);
    let plus = StateVector::plus();
    vec![
        HierarchyWitness {
            label: "w1",
            description: "zero-discord state",
            state: mix(&[(&k0, &k0), (&k1, &k1)]),
            basis: Some(ObliqueBasis::computational(2)),
        },
        HierarchyWitness {
            label: "w2",
            description: "zero-oblique-discord state with nonzero discord",
            state: mix(&[(&k0, &k0), (&plus, &k1)]),
            basis: Some(
                ObliqueBasis::new(vec![k0.clone(), plus.clone()]).expect("{|0>,|+>} is a basis"),
            ),
        },
        HierarchyWitness {
            label: "w3",
            description: "separable state with nonzero oblique discord",
            state: mix(&[(&k0, &k0), (&k1, &k1), (&plus, &plus)]),
            basis: None,
        },
    ]
}
