//! Nelder–Mead simplex search with dimension-adaptive coefficients.

use alloc::vec;
use alloc::vec::Vec;

/// Stopping rules for one simplex run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Converged once `f_worst − f_best` drops to this.
    pub tolerance: f64,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_scale: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `x0`. Non-finite objective values are treated as `+∞`.
///
/// Coefficients follow Gao and Han: reflection 1, expansion `1 + 2/n`,
/// contraction `3/4 − 1/(2n)`, shrink `1 − 1/n`. The best vertex is never
/// replaced by a worse point, so the returned value is at most `f(x0)`.
pub fn minimize<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if n == 0 {
        let value = eval(x0, &mut evaluations);
        return NelderMeadOutcome {
            x: Vec::new(),
            value,
            iterations: 0,
            evaluations,
            converged: true,
        };
    }

    let nf = n as f64;
    let (alpha, beta, gamma, delta) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.initial_scale;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evaluations)).collect();

    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    let mut iterations = 0usize;
    let mut converged = false;

    loop {
        // Stable sort keeps earlier vertices ahead on ties, so x0 stays best
        // until something strictly better appears.
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if values[worst] - values[best] <= opts.tolerance {
            converged = true;
            break;
        }
        if iterations >= opts.max_iterations {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &k in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&simplex[k]) {
                *c += x / nf;
            }
        }
        let along = |out: &mut [f64], towards: &[f64], t: f64, centroid: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(centroid).zip(towards) {
                *o = c + t * (w - c);
            }
        };

        along(&mut trial, &simplex[worst], -alpha, &centroid);
        let fr = eval(&trial, &mut evaluations);
        if fr < values[best] {
            along(&mut trial2, &trial, beta, &centroid);
            let fe = eval(&trial2, &mut evaluations);
            if fe < fr {
                simplex[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                simplex[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second_worst] {
            simplex[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }
        let accepted = if fr < values[worst] {
            along(&mut trial2, &trial, gamma, &centroid);
            let fc = eval(&trial2, &mut evaluations);
            (fc <= fr).then_some(fc)
        } else {
            along(&mut trial2, &simplex[worst], gamma, &centroid);
            let fc = eval(&trial2, &mut evaluations);
            (fc < values[worst]).then_some(fc)
        };
        if let Some(fc) = accepted {
            simplex[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for k in 0..=n {
            if k == best {
                continue;
            }
            for (x, a) in simplex[k].iter_mut().zip(&anchor) {
                *x = a + delta * (*x - a);
            }
            values[k] = eval(&simplex[k], &mut evaluations);
        }
    }

    let best = order[0];
    NelderMeadOutcome {
        x: simplex.swap_remove(best),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}
