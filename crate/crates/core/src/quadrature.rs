//! Gauss–Hermite quadrature.
//!
//! Nodes are eigenvalues of the symmetric Jacobi matrix of the Hermite
//! recurrence (Golub–Welsch), polished by Newton iteration on the orthonormal
//! Hermite polynomial. Weights come from the Christoffel function
//! `w_i = 1 / Σ_k p_k(x_i)²`, which avoids the precision loss of taking
//! squared eigenvector components.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_ORDER: usize = 2;
/// Beyond this the orthonormal polynomials overflow at the outermost nodes.
pub const MAX_ORDER: usize = 256;
pub const DEFAULT_ORDER: usize = 64;

/// Rule for `∫ f(x) e^{−x²/s²} dx ≈ Σ wᵢ f(xᵢ)` with length scale `s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub length_scale: f64,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫ f(x) e^{−x²/s²} dx`.
    pub fn integrate_weighted<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weights for integrating a plain integrand, `wᵢ e^{xᵢ²/s²}`.
    pub fn plain_weights(&self) -> Vec<f64> {
        let s2 = self.length_scale * self.length_scale;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * (x * x / s2).exp())
            .collect()
    }

    /// `∫ f(x) dx` for integrands that decay like the rule's Gaussian.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(self.plain_weights())
            .map(|(&x, w)| w * f(x))
            .sum()
    }

    /// Tensor-product nodes `(x, y, w)` for `∫∫ f(x, y) dx dy` (plain weights).
    pub fn tensor_plain(&self) -> Vec<(f64, f64, f64)> {
        let pw = self.plain_weights();
        let mut out = Vec::with_capacity(pw.len() * pw.len());
        for (i, &x) in self.nodes.iter().enumerate() {
            for (j, &y) in self.nodes.iter().enumerate() {
                out.push((x, y, pw[i] * pw[j]));
            }
        }
        out
    }
}

/// Orthonormal Hermite polynomial `p_n` (weight `e^{−x²}`) and `p_{n−1}`.
fn orthonormal_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    for j in 0..n {
        let jf = j as f64;
        let next = (2.0 / (jf + 1.0)).sqrt() * x * cur - (jf / (jf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Gauss–Hermite rule of the given order scaled to `e^{−x²/s²}`.
pub fn gauss_hermite_rule(order: usize, length_scale: f64) -> Result<QuadratureRule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::QuadratureOrder {
            requested: order,
            min: MIN_ORDER,
            max: MAX_ORDER,
        });
    }
    if !(length_scale > 0.0 && length_scale.is_finite()) {
        return Err(Error::InvalidParams(format!(
            "quadrature length scale must be positive, got {length_scale}"
        )));
    }

    let jacobi = DMatrix::from_fn(order, order, |i, j| {
        if i + 1 == j {
            (j as f64 / 2.0).sqrt()
        } else if j + 1 == i {
            (i as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.total_cmp(b));

    for x in nodes.iter_mut() {
        for _ in 0..3 {
            // p_n' = √(2n) p_{n−1}
            let (p, q) = orthonormal_pair(order, *x);
            let dp = (2.0 * order as f64).sqrt() * q;
            if dp == 0.0 {
                break;
            }
            *x -= p / dp;
        }
    }
    // symmetrise exactly
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let a = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -a;
        nodes[j] = a;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }

    let weights: Vec<f64> = nodes
        .iter()
        .map(|&x| {
            let mut prev = 0.0;
            let mut cur = std::f64::consts::PI.powf(-0.25);
            let mut sum = cur * cur;
            for j in 0..order - 1 {
                let jf = j as f64;
                let next = (2.0 / (jf + 1.0)).sqrt() * x * cur - (jf / (jf + 1.0)).sqrt() * prev;
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            1.0 / sum
        })
        .collect();

    Ok(QuadratureRule {
        nodes: nodes.iter().map(|x| x * length_scale).collect(),
        weights: weights.iter().map(|w| w * length_scale).collect(),
        length_scale,
    })
}
