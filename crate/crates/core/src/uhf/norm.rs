//! Two-sided operator-norm brackets for exact rational matrices.
//!
//! The upper bound comes from `λ_max(A) ≤ ‖A^{2^m}‖_F^{1/2^m}` with `A = x*x`,
//! evaluated by repeated normalised squaring. The lower bound is the Rayleigh
//! quotient `‖x v‖ / ‖v‖` for `v` read off the last squared iterate and
//! polished by power iteration. Both ends are widened by a rounding margin
//! proportional to `n · ε_mach`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::uhf::matrix::RatMatrix;
use crate::uhf::stage::StageElement;

const MAX_SQUARINGS: usize = 64;
const POWER_STEPS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormBracket {
    pub lower: f64,
    pub upper: f64,
    /// False when the iteration cap was hit before the width target.
    pub converged: bool,
    pub squarings: usize,
}

impl NormBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

pub fn op_norm_bracket(x: &StageElement, tol: f64) -> Result<NormBracket> {
    op_norm_bracket_matrix(x.matrix(), tol)
}

pub fn op_norm_bracket_matrix(x: &RatMatrix, tol: f64) -> Result<NormBracket> {
    if tol.is_nan() || tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    if x.is_zero() {
        return Ok(NormBracket {
            lower: 0.0,
            upper: 0.0,
            converged: true,
            squarings: 0,
        });
    }
    let n = x.dim();
    let a = x.to_f64();
    let gram = gram_matrix(&a, n);
    let margin = 64.0 * n as f64 * f64::EPSILON;

    let s0 = frobenius(&gram);
    let mut b: Vec<f64> = gram.iter().map(|v| v / s0).collect();
    // ln λ_max(A) ≤ log_bound, tightened at every squaring.
    let mut log_bound = s0.ln();
    let mut weight = 1.0f64;
    let mut best_lower = 0.0f64;
    let mut upper = f64::INFINITY;

    for step in 0..=MAX_SQUARINGS {
        upper = (0.5 * log_bound).exp() * (1.0 + margin);
        let lower = rayleigh_lower(&a, &gram, &b, n) * (1.0 - margin);
        best_lower = best_lower.max(lower);
        if upper - best_lower <= tol * upper.max(1.0) {
            return Ok(NormBracket {
                lower: best_lower,
                upper,
                converged: true,
                squarings: step,
            });
        }
        if step == MAX_SQUARINGS {
            break;
        }
        let sq = square(&b, n);
        let s = frobenius(&sq);
        if s == 0.0 {
            break;
        }
        weight *= 0.5;
        log_bound += weight * s.ln();
        b = sq.into_iter().map(|v| v / s).collect();
    }
    Ok(NormBracket {
        lower: best_lower,
        upper,
        converged: false,
        squarings: MAX_SQUARINGS,
    })
}

fn gram_matrix(a: &[f64], n: usize) -> Vec<f64> {
    let mut g = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            let aki = a[k * n + i];
            if aki == 0.0 {
                continue;
            }
            for j in 0..n {
                g[i * n + j] += aki * a[k * n + j];
            }
        }
    }
    g
}

fn square(b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = b[i * n + k];
            if x == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += x * b[k * n + j];
            }
        }
    }
    out
}

fn frobenius(m: &[f64]) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn mat_vec(m: &[f64], v: &[f64], n: usize) -> Vec<f64> {
    (0..n).map(|i| (0..n).map(|j| m[i * n + j] * v[j]).sum()).collect()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn rayleigh_lower(a: &[f64], gram: &[f64], b: &[f64], n: usize) -> f64 {
    // The column of largest norm in the squared iterate approximates the top
    // eigenvector of x*x.
    let mut best = 0;
    let mut best_norm = -1.0;
    for j in 0..n {
        let c: f64 = (0..n).map(|i| b[i * n + j] * b[i * n + j]).sum();
        if c > best_norm {
            best_norm = c;
            best = j;
        }
    }
    let mut v: Vec<f64> = (0..n).map(|i| b[i * n + best]).collect();
    if norm(&v) == 0.0 {
        v = vec![1.0; n];
    }
    let mut lower = 0.0f64;
    for _ in 0..=POWER_STEPS {
        let nv = norm(&v);
        if nv == 0.0 {
            break;
        }
        lower = lower.max(norm(&mat_vec(a, &v, n)) / nv);
        v = mat_vec(gram, &v, n);
        let nv = norm(&v);
        if nv == 0.0 || !nv.is_finite() {
            break;
        }
        v.iter_mut().for_each(|x| *x /= nv);
    }
    lower
}
