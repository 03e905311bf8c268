use std::fmt::Write as _;

use ndarray::{Array1, ArrayView1, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const HEADER: &str = "bothunt-linear-model 1";

/// Stochastic subgradient settings. The step at update `t` is
/// `step_size / (1 + step_size · lambda · t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinearConfig {
    pub epochs: usize,
    pub step_size: f64,
    pub lambda: f64,
    /// Reweight examples so both classes carry equal total weight.
    pub balanced: bool,
    pub seed: u64,
}

impl Default for LinearConfig {
    fn default() -> Self {
        Self { epochs: 60, step_size: 0.1, lambda: 1e-3, balanced: true, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel<T> {
    pub names: Vec<String>,
    pub weights: Array1<T>,
    pub bias: T,
    pub config: LinearConfig,
}

impl<T: Scalar> LinearModel<T> {
    pub fn margin(&self, x: ArrayView1<T>) -> Result<T> {
        if x.len() != self.weights.len() {
            return Err(Error::LengthMismatch { expected: self.weights.len(), got: x.len() });
        }
        Ok(self.weights.dot(&x) + self.bias)
    }

    /// Per-column `weight · value`.
    pub fn contributions(&self, x: ArrayView1<T>) -> Result<Array1<T>> {
        if x.len() != self.weights.len() {
            return Err(Error::LengthMismatch { expected: self.weights.len(), got: x.len() });
        }
        Ok(&self.weights * &x)
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        writeln!(s, "{HEADER}").unwrap();
        writeln!(s, "epochs {}", c.epochs).unwrap();
        writeln!(s, "step_size {}", c.step_size).unwrap();
        writeln!(s, "lambda {}", c.lambda).unwrap();
        writeln!(s, "balanced {}", c.balanced).unwrap();
        writeln!(s, "seed {}", c.seed).unwrap();
        writeln!(s, "bias {}", self.bias).unwrap();
        for (n, w) in self.names.iter().zip(self.weights.iter()) {
            writeln!(s, "{n} {w}").unwrap();
        }
        s
    }

    /// Inverse of [`LinearModel::to_text`]. `source` names the input in errors.
    pub fn from_text(text: &str, source: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { file: source.to_string(), line, message };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, HEADER)) => {}
            Some((n, other)) => return Err(err(n, format!("expected header `{HEADER}`, found `{other}`"))),
            None => return Err(err(1, "empty model file".into())),
        }
        let mut config = LinearConfig::default();
        let mut bias = None;
        let mut names = Vec::new();
        let mut weights = Vec::new();
        for (n, line) in lines {
            let (key, value) = line.rsplit_once(' ').ok_or_else(|| err(n, format!("expected `name value`, found `{line}`")))?;
            let num = || value.parse::<f64>().map_err(|e| err(n, format!("bad number `{value}`: {e}")));
            let int = || value.parse::<u64>().map_err(|e| err(n, format!("bad integer `{value}`: {e}")));
            match key {
                "epochs" => config.epochs = int()? as usize,
                "step_size" => config.step_size = num()?,
                "lambda" => config.lambda = num()?,
                "balanced" => config.balanced = value.parse().map_err(|_| err(n, format!("bad flag `{value}`")))?,
                "seed" => config.seed = int()?,
                "bias" => bias = Some(T::of(num()?)),
                name => {
                    names.push(name.to_string());
                    weights.push(T::of(num()?));
                }
            }
        }
        let bias = bias.ok_or_else(|| err(0, "missing bias line".into()))?;
        Ok(Self { names, weights: Array1::from(weights), bias, config })
    }
}

fn sigmoid<T: Scalar>(m: T) -> T {
    if m >= T::zero() {
        T::one() / (T::one() + (-m).exp())
    } else {
        let e = m.exp();
        e / (T::one() + e)
    }
}

/// Logistic squashing of the model margin.
pub fn predict_prob<T: Scalar>(model: &LinearModel<T>, x: ArrayView1<T>) -> Result<T> {
    model.margin(x).map(sigmoid)
}

/// Hinge-loss linear classifier with L2 regularization on the weights,
/// trained by seeded stochastic subgradient descent. Labels are `+1` for bot
/// and `-1` for human; any positive value counts as `+1`.
pub fn train_linear<T: Scalar>(x: ArrayView2<T>, y: &[i8], names: &[String], cfg: &LinearConfig) -> Result<LinearModel<T>> {
    let (n, d) = x.dim();
    if y.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: y.len() });
    }
    if names.len() != d {
        return Err(Error::LengthMismatch { expected: d, got: names.len() });
    }
    let pos = y.iter().filter(|&&v| v > 0).count();
    if pos == 0 || pos == n {
        return Err(Error::SingleClass);
    }
    let (wp, wn) = if cfg.balanced {
        (T::of(n as f64 / (2.0 * pos as f64)), T::of(n as f64 / (2.0 * (n - pos) as f64)))
    } else {
        (T::one(), T::one())
    };
    let lambda = T::of(cfg.lambda);
    let eta0 = T::of(cfg.step_size);
    let mut w = Array1::<T>::zeros(d);
    let mut b = T::zero();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = 0usize;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let eta = eta0 / (T::one() + eta0 * lambda * T::of_usize(t));
            t += 1;
            let yi = if y[i] > 0 { T::one() } else { -T::one() };
            let ci = if y[i] > 0 { wp } else { wn };
            let row = x.row(i);
            let margin = yi * (w.dot(&row) + b);
            w *= T::one() - eta * lambda;
            if margin < T::one() {
                w.scaled_add(eta * ci * yi, &row);
                b += eta * ci * yi;
            }
        }
    }
    Ok(LinearModel { names: names.to_vec(), weights: w, bias: b, config: *cfg })
}
