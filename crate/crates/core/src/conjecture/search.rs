use alloc::format;
use alloc::vec::Vec;

use crate::channels::{ObliqueChannel, DEFAULT_CONDITION_CAP};
use crate::measures::{minimize, Chart, NelderMeadOptions, PENALTY};
use crate::qmat::{
    check_dims, mutual_information_op, mutual_information_with, DensityMatrix, Partition,
    ENTROPY_CLAMP,
};
use crate::states::{random_density, random_oblique_basis, random_unitary, RngSeed};
use crate::{Error, Result};

/// `I(ρ) − I(Φ_A ρ)` in bits, with `A` the channel's target against the rest.
pub fn delta_i(rho: &DensityMatrix, phi: &ObliqueChannel) -> Result<f64> {
    let partition = Partition::cut(phi.target(), rho.num_subsystems())?;
    let out = phi.apply_operator(rho.dims(), rho.matrix())?;
    Ok(
        mutual_information_op(rho.dims(), rho.matrix(), &partition, ENTROPY_CLAMP)?
            - mutual_information_op(rho.dims(), &out, &partition, ENTROPY_CLAMP)?,
    )
}

/// [`delta_i`] with a caller-supplied entropy of a Hermitian operator.
pub fn delta_i_with<F>(rho: &DensityMatrix, phi: &ObliqueChannel, mut entropy: F) -> Result<f64>
where
    F: FnMut(&crate::qmat::ComplexMatrix) -> f64,
{
    let partition = Partition::cut(phi.target(), rho.num_subsystems())?;
    let out = phi.apply_operator(rho.dims(), rho.matrix())?;
    let before = mutual_information_with(rho.dims(), rho.matrix(), &partition, &mut entropy)?;
    let after = mutual_information_with(rho.dims(), &out, &partition, &mut entropy)?;
    Ok(before - after)
}

/// Rank of the random state drawn for a sample.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RankSchedule {
    /// Ranks `1, 2, …, order, 1, 2, …` by sample position within its dims.
    #[default]
    Cycle,
    Full,
    Fixed(usize),
}

impl RankSchedule {
    pub fn rank(self, order: usize, position: usize) -> usize {
        match self {
            RankSchedule::Cycle => 1 + position % order,
            RankSchedule::Full => order,
            RankSchedule::Fixed(r) => r,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Dimension lists swept in order; channels act on subsystem 0.
    pub dims: Vec<Vec<usize>>,
    pub samples_per_dims: usize,
    pub ranks: RankSchedule,
    pub condition_cap: f64,
    /// Nelder–Mead iterations per sample.
    pub max_iterations: usize,
    pub tolerance: f64,
    pub initial_scale: f64,
    pub seed: RngSeed,
    /// Records below this are candidates.
    pub threshold: f64,
    pub certification_tolerance: f64,
    /// Restrict to orthonormal bases (projective measurements).
    pub orthonormal_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dims: alloc::vec![
                alloc::vec![2, 2],
                alloc::vec![2, 3],
                alloc::vec![3, 3],
                alloc::vec![2, 2, 2]
            ],
            samples_per_dims: 100,
            ranks: RankSchedule::Cycle,
            condition_cap: DEFAULT_CONDITION_CAP,
            max_iterations: 200,
            tolerance: 1e-10,
            initial_scale: 0.1,
            seed: RngSeed(0),
            threshold: -1e-7,
            certification_tolerance: 1e-9,
            orthonormal_only: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples_per_dims == 0 {
            return Err(Error::InvalidConfig(
                "samples per dims must be at least 1".into(),
            ));
        }
        if !(self.threshold < 0.0) {
            return Err(Error::InvalidConfig("threshold must be negative".into()));
        }
        if !(self.tolerance > 0.0 && self.initial_scale > 0.0 && self.certification_tolerance > 0.0)
        {
            return Err(Error::InvalidConfig("tolerances must be positive".into()));
        }
        if !(self.condition_cap >= 1.0) {
            return Err(Error::InvalidConfig(
                "condition cap must be at least 1".into(),
            ));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidConfig("no dims to search".into()));
        }
        for d in &self.dims {
            check_dims(d, d.iter().product())?;
            if d.len() < 2 {
                return Err(Error::InvalidDims(format!("{d:?} has a single subsystem")));
            }
            let order: usize = d.iter().product();
            if let RankSchedule::Fixed(r) = self.ranks {
                if r == 0 || r > order {
                    return Err(Error::InvalidConfig(format!(
                        "rank {r} invalid for order {order}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn total_samples(&self) -> u64 {
        (self.dims.len() * self.samples_per_dims) as u64
    }

    /// Dims and position within them of global sample `index`.
    pub fn locate(&self, index: u64) -> Result<(&[usize], usize)> {
        if index >= self.total_samples() {
            return Err(Error::InvalidConfig(format!(
                "sample {index} out of range ({} samples)",
                self.total_samples()
            )));
        }
        let index = index as usize;
        Ok((
            &self.dims[index / self.samples_per_dims],
            index % self.samples_per_dims,
        ))
    }

    fn nelder_mead(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            max_iterations: self.max_iterations,
            tolerance: self.tolerance,
            initial_scale: self.initial_scale,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Start,
    Optimized,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Start => "start",
            Stage::Optimized => "optimized",
        }
    }
}

/// One evaluated `(state, basis)` pair. The state is regenerated from
/// `(seed, dims, rank)` and the basis decoded from `basis` parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchRecord {
    pub index: u64,
    /// Sample seed; the state is drawn from `seed.mix(0)`.
    pub seed: u64,
    pub dims: Vec<usize>,
    pub rank: usize,
    pub stage: Stage,
    pub orthonormal: bool,
    /// Chart parameters on subsystem 0 (see [`Chart`]).
    pub basis: Vec<f64>,
    pub delta_i: f64,
    /// Gram condition number of the decoded basis.
    pub condition: f64,
}

impl SearchRecord {
    pub fn chart(&self) -> Chart {
        Chart::new(self.dims[0], self.orthonormal)
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        random_density(&self.dims, self.rank, RngSeed(self.seed).mix(0))
    }
}

/// Recomputes a record's `ΔI` from its seed and parameters.
pub fn replay(record: &SearchRecord, condition_cap: f64) -> Result<f64> {
    let rho = record.state()?;
    let basis =
        record
            .chart()
            .decode(&record.basis, condition_cap)
            .ok_or(Error::IllConditioned {
                condition: f64::INFINITY,
                cap: condition_cap,
            })?;
    delta_i(&rho, &ObliqueChannel::new(0, basis))
}

/// Draws sample `index` and returns its start and optimized records.
pub fn evaluate_sample(config: &SearchConfig, index: u64) -> Result<[SearchRecord; 2]> {
    let (dims, position) = config.locate(index)?;
    let order: usize = dims.iter().product();
    let rank = config.ranks.rank(order, position);
    let seed = config.seed.mix(index);
    let rho = random_density(dims, rank, seed.mix(0))?;
    let chart = Chart::new(dims[0], config.orthonormal_only);
    let start = if config.orthonormal_only {
        let u = random_unitary(dims[0], seed.mix(1));
        u.as_slice().iter().flat_map(|z| [z.re, z.im]).collect()
    } else {
        chart.encode(&random_oblique_basis(
            dims[0],
            config.condition_cap,
            seed.mix(1),
        )?)
    };

    let partition = Partition::cut(0, dims.len())?;
    let before = mutual_information_op(dims, rho.matrix(), &partition, ENTROPY_CLAMP)?;
    let evaluate = |x: &[f64]| -> Result<(f64, f64)> {
        let basis = chart
            .decode(x, config.condition_cap)
            .ok_or(Error::IllConditioned {
                condition: f64::INFINITY,
                cap: config.condition_cap,
            })?;
        let condition = basis.condition();
        let out = ObliqueChannel::new(0, basis).apply_operator(dims, rho.matrix())?;
        let after = mutual_information_op(dims, &out, &partition, ENTROPY_CLAMP)?;
        Ok((before - after, condition))
    };
    let record = |stage, basis: Vec<f64>| -> Result<SearchRecord> {
        let (delta_i, condition) = evaluate(&basis)?;
        Ok(SearchRecord {
            index,
            seed: seed.0,
            dims: dims.to_vec(),
            rank,
            stage,
            orthonormal: config.orthonormal_only,
            basis,
            delta_i,
            condition,
        })
    };

    let first = record(Stage::Start, start)?;
    let outcome = minimize(
        |x| evaluate(x).map_or(PENALTY, |(d, _)| d),
        &first.basis,
        &config.nelder_mead(),
    );
    let second = record(Stage::Optimized, outcome.x)?;
    Ok([first, second])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::ObliqueBasis;
    use crate::qmat::{ComplexMatrix, StateVector};
    use crate::states::{build_zod, ZodSpec};
    use alloc::vec;
    use num_complex::Complex64;

    #[test]
    fn delta_i_examples() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(
            vec![2, 2],
            &StateVector::unit(vec![
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
            ])
            .unwrap(),
        )
        .unwrap();
        let comp = ObliqueChannel::new(0, ObliqueBasis::computational(2));
        assert!((delta_i(&bell, &comp).unwrap() - 1.0).abs() < 1e-12);

        let basis = ObliqueBasis::new(vec![StateVector::basis(2, 0), StateVector::plus()]).unwrap();
        let k = |i| DensityMatrix::pure(vec![2], &StateVector::basis(2, i)).unwrap();
        let zod = build_zod(&ZodSpec {
            basis: basis.clone(),
            weights: vec![0.5, 0.5],
            conditionals: vec![k(0), k(1)],
        })
        .unwrap();
        assert!(
            delta_i(&zod.state, &ObliqueChannel::new(0, basis))
                .unwrap()
                .abs()
                < 1e-10
        );
    }

    #[test]
    fn delta_i_with_matches_default() {
        let rho = random_density(&[2, 3], 4, RngSeed(3)).unwrap();
        let phi = ObliqueChannel::new(0, random_oblique_basis(2, 1e8, RngSeed(4)).unwrap());
        let a = delta_i(&rho, &phi).unwrap();
        let b = delta_i_with(&rho, &phi, |m: &ComplexMatrix| {
            crate::qmat::entropy_of(m, ENTROPY_CLAMP)
        })
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn samples_replay_exactly() {
        let config = SearchConfig {
            samples_per_dims: 3,
            max_iterations: 30,
            ..SearchConfig::default()
        };
        for i in [0, 4, 8, 11] {
            let records = evaluate_sample(&config, i).unwrap();
            assert!(records[1].delta_i <= records[0].delta_i);
            for r in &records {
                assert_eq!(replay(r, config.condition_cap).unwrap(), r.delta_i);
            }
            assert_eq!(evaluate_sample(&config, i).unwrap(), records);
        }
        assert!(evaluate_sample(&config, 12).is_err());
    }

    #[test]
    fn orthonormal_samples_are_nonnegative() {
        let config = SearchConfig {
            dims: vec![vec![2, 2], vec![3, 2]],
            samples_per_dims: 10,
            orthonormal_only: true,
            max_iterations: 100,
            ..SearchConfig::default()
        };
        for i in 0..config.total_samples() {
            for r in evaluate_sample(&config, i).unwrap() {
                assert!(r.delta_i >= -1e-7, "{}", r.delta_i);
                assert!(r.condition < 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn rank_schedule() {
        assert_eq!(RankSchedule::Cycle.rank(4, 0), 1);
        assert_eq!(RankSchedule::Cycle.rank(4, 5), 2);
        assert_eq!(RankSchedule::Full.rank(4, 5), 4);
        let bad = SearchConfig {
            ranks: RankSchedule::Fixed(5),
            dims: vec![vec![2, 2]],
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }
}
