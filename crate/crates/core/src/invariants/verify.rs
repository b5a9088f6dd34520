//! Exact randomized check that expressions are invariant: evaluate at random
//! rational matrix tuples and at their images under every group element.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::expr::{Evaluator, Expr};
use crate::chartheory::representation::Representation;
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rational::Rational;

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub trials: usize,
    /// Size of the random square matrices.
    pub dim: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { trials: 3, dim: 4, seed: 0x5eed }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub elements: usize,
    pub generators: usize,
    /// `(trial, generator, group element)` for every mismatch.
    pub failures: Vec<(usize, usize, usize)>,
}

impl InvarianceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Indices of generators that failed in some trial.
    pub fn failing_generators(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.failures.iter().map(|f| f.1).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            let p: i64 = rng.gen_range(-4..=4);
            let q: i64 = rng.gen_range(1..=2);
            m.set(i, j, Cyclotomic::from_rational(Rational::new(p, q)));
        }
    }
    m
}

/// `X'_j = sum_i rho(g)_ij X_i`.
fn act(rho: &Matrix, xs: &[Matrix]) -> Vec<Matrix> {
    let d = xs[0].rows();
    (0..xs.len())
        .map(|j| {
            (0..xs.len()).fold(Matrix::zeros(d, d), |acc, i| {
                let c = rho.get(i, j);
                if c.is_zero() {
                    acc
                } else {
                    acc.add(&xs[i].scale(c))
                }
            })
        })
        .collect()
}

/// Checks `f(g.X) = f(X)` for every expression, every element of the group
/// and `trials` random tuples of rational matrices.
pub fn verify_invariance(exprs: &[Expr], rep: &Representation, opts: &VerifyOptions) -> Result<InvarianceReport> {
    let n = rep.dim();
    if n == 0 {
        return Err(Error::Input("no variables".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut failures = Vec::new();
    for trial in 0..opts.trials {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let xs: Vec<Matrix> = (0..n).map(|_| random_matrix(&mut rng, opts.dim)).collect();
            match check_tuple(exprs, rep, &xs, trial) {
                Ok(f) => {
                    failures.extend(f);
                    break;
                }
                // A singular value under an inverse: draw again.
                Err(Error::Input(_)) if attempts < 20 => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(InvarianceReport { trials: opts.trials, elements: rep.images().len(), generators: exprs.len(), failures })
}

fn check_tuple(exprs: &[Expr], rep: &Representation, xs: &[Matrix], trial: usize) -> Result<Vec<(usize, usize, usize)>> {
    let mut base = Evaluator::new(xs);
    let values: Vec<Matrix> = exprs.iter().map(|e| base.eval(e)).collect::<Result<_>>()?;
    let mut failures = Vec::new();
    for (g, rho) in rep.images().iter().enumerate() {
        let moved = act(rho, xs);
        let mut ev = Evaluator::new(&moved);
        for (k, e) in exprs.iter().enumerate() {
            if ev.eval(e)? != values[k] {
                failures.push((trial, k, g));
            }
        }
    }
    Ok(failures)
}
