//! Nonnegative matrix factorization by multiplicative updates.
//!
//! `X ≈ W·H` with `W` (n × r) and `H` (r × d) kept elementwise nonnegative.
//! Each iteration updates `H` then `W` with the Lee–Seung ratios, which never
//! increase `‖X − WH‖²_F`. A positive `ortho_lambda` adds the penalty
//! `λ·Σ_{k≠l} ⟨w_k, w_l⟩` on the columns of `W` through the `W` denominator.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfConfig<T> {
    pub rank: usize,
    pub max_iter: usize,
    /// Stop once the relative objective decrease of one iteration drops
    /// below this.
    pub tol: T,
    pub ortho_lambda: T,
    pub seed: u64,
    /// Independent starts from seeds `seed, seed + 1, ...`; the lowest
    /// objective wins. A start that fits exactly ends the search.
    pub restarts: usize,
}

impl<T: Scalar> Default for NmfConfig<T> {
    fn default() -> Self {
        Self { rank: 8, max_iter: 500, tol: T::of(1e-6), ortho_lambda: T::zero(), seed: 0, restarts: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding<T> {
    pub w: Array2<T>,
    pub h: Array2<T>,
    /// Squared Frobenius reconstruction error of the final factors.
    pub objective: T,
    /// Objective of the initial factors followed by one entry per iteration.
    pub history: Vec<T>,
    pub iterations: usize,
}

impl<T: Scalar> Embedding<T> {
    /// `‖X − WH‖_F / ‖X‖_F`.
    pub fn relative_error(&self, x: ArrayView2<T>) -> T {
        let norm: T = x.iter().map(|v| *v * *v).sum();
        if norm == T::zero() {
            return self.objective.sqrt();
        }
        (self.objective / norm).sqrt()
    }
}

/// Subtracts each column's minimum so every entry is nonnegative. Returns
/// the shifted matrix and the subtracted minima.
pub fn shift_nonnegative<T: Scalar>(x: ArrayView2<T>) -> (Array2<T>, Array1<T>) {
    let mins: Array1<T> = x.map_axis(Axis(0), |c| c.iter().copied().fold(T::infinity(), T::min));
    let mins = mins.mapv(|m| if m.is_finite() { m } else { T::zero() });
    let shifted = &x - &mins.view().insert_axis(Axis(0));
    (shifted.mapv(|v| v.max(T::zero())), mins)
}

pub fn frobenius_sq<T: Scalar>(x: ArrayView2<T>, w: &Array2<T>, h: &Array2<T>) -> T {
    let r = w.dot(h);
    x.iter().zip(r.iter()).map(|(a, b)| (*a - *b) * (*a - *b)).sum()
}

fn ratio_update<T: Scalar>(f: &mut Array2<T>, num: &Array2<T>, den: &Array2<T>) {
    let tiny = T::min_positive_value();
    ndarray::Zip::from(f).and(num).and(den).for_each(|f, &n, &d| {
        *f = *f * n / d.max(tiny);
    });
}

pub fn nmf<T: Scalar>(x: ArrayView2<T>, cfg: &NmfConfig<T>) -> Result<Embedding<T>> {
    let norm: T = x.iter().map(|v| *v * *v).sum();
    let exact = norm * T::epsilon() * T::epsilon();
    let mut best = nmf_single(x, cfg, cfg.seed)?;
    for k in 1..cfg.restarts {
        if best.objective <= exact {
            break;
        }
        let e = nmf_single(x, cfg, cfg.seed.wrapping_add(k as u64))?;
        if e.objective < best.objective {
            best = e;
        }
    }
    Ok(best)
}

fn nmf_single<T: Scalar>(x: ArrayView2<T>, cfg: &NmfConfig<T>, seed: u64) -> Result<Embedding<T>> {
    let (n, d) = x.dim();
    if cfg.rank == 0 || cfg.rank > n.min(d) {
        return Err(Error::RankOutOfRange { rank: cfg.rank, max: n.min(d) });
    }
    if x.iter().any(|v| *v < T::zero() || v.is_nan()) {
        return Err(Error::NegativeInput);
    }
    let r = cfg.rank;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // scale the init so WH starts near the data mean
    let mean = x.iter().copied().sum::<T>() / T::of_usize(n * d);
    let scale = (mean.max(T::of(1e-3)) / T::of_usize(r)).sqrt();
    let mut draw = |_| T::of(rng.random_range(0.1..1.0)) * scale;
    let mut w = Array2::from_shape_fn((n, r), &mut draw);
    let mut h = Array2::from_shape_fn((r, d), &mut draw);

    let mut obj = frobenius_sq(x, &w, &h);
    let mut history = vec![obj];
    let mut iterations = 0;
    let off_diag = Array2::from_shape_fn((r, r), |(a, b)| if a == b { T::zero() } else { T::one() });

    for _ in 0..cfg.max_iter {
        let wt = w.t();
        let num_h = wt.dot(&x);
        let den_h = wt.dot(&w).dot(&h);
        ratio_update(&mut h, &num_h, &den_h);

        let ht = h.t();
        let num_w = x.dot(&ht);
        let mut den_w = w.dot(&h.dot(&ht));
        if cfg.ortho_lambda > T::zero() {
            den_w = den_w + &(w.dot(&off_diag) * cfg.ortho_lambda);
        }
        ratio_update(&mut w, &num_w, &den_w);

        let next = frobenius_sq(x, &w, &h);
        history.push(next);
        iterations += 1;
        let done = obj == T::zero() || (obj - next) / obj < cfg.tol;
        obj = next;
        if done {
            break;
        }
    }
    if w.iter().chain(h.iter()).any(|v| *v < T::zero()) {
        return Err(Error::NegativeInput);
    }
    Ok(Embedding { w, h, objective: obj, history, iterations })
}

/// Index of the largest entry in each row of `W`, lowest index on ties.
pub fn dominant_component<T: Scalar>(w: &Array2<T>) -> Vec<usize> {
    w.rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for (k, v) in row.iter().enumerate() {
                if *v > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn random(n: usize, d: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_fn((n, d), |_| rng.random::<f64>())
    }

    #[test]
    fn monotone_objective() {
        for seed in 0..5 {
            let x = random(30, 20, seed);
            let e = nmf(x.view(), &NmfConfig { rank: 5, seed, ..Default::default() }).unwrap();
            assert!(e.history.windows(2).all(|w| w[1] <= w[0]), "seed {seed}");
            assert!(e.w.iter().chain(e.h.iter()).all(|v| *v >= 0.0));
        }
    }

    #[test]
    fn rank_bounds_and_negative_input() {
        let x = random(4, 3, 1);
        assert!(matches!(nmf(x.view(), &NmfConfig { rank: 4, ..Default::default() }), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(nmf(x.view(), &NmfConfig { rank: 0, ..Default::default() }), Err(Error::RankOutOfRange { .. })));
        let neg = array![[1.0, -1.0], [0.0, 1.0]];
        assert!(matches!(nmf(neg.view(), &NmfConfig { rank: 1, ..Default::default() }), Err(Error::NegativeInput)));
    }

    #[test]
    fn shift_removes_negatives() {
        let x = array![[-1.0, 2.0], [1.0, 3.0]];
        let (s, mins) = shift_nonnegative(x.view());
        assert_eq!(s, array![[0.0, 0.0], [2.0, 1.0]]);
        assert_eq!(mins, array![-1.0, 2.0]);
    }

    #[test]
    fn orthogonal_variant_runs() {
        let x = random(20, 10, 3);
        let e = nmf(x.view(), &NmfConfig { rank: 3, ortho_lambda: 0.5, ..Default::default() }).unwrap();
        assert!(e.objective.is_finite());
        assert_eq!(dominant_component(&e.w).len(), 20);
    }

    #[test]
    fn single_precision() {
        let x = random(10, 6, 2).mapv(|v| v as f32);
        let e = nmf(x.view(), &NmfConfig { rank: 2, ..Default::default() }).unwrap();
        assert!(e.relative_error(x.view()) < 0.6);
    }
}
