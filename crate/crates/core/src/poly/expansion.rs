//! Float backend for `Σ_i g(x + w_i)` at many points `x ≥ 0`.
//!
//! Weights are grouped by binary exponent, so inside a group
//! `|w - c| ≤ c / 3` around the center `c`. Each group keeps the moments
//! `M_k = Σ (w - c)^k` and is evaluated through the series
//! `Σ 1/(X + h) = Σ_k (-1)^k M_k / X^{k+1}` with `X = x + c ≥ c`.

use super::{multipoint_eval, sum_inverse_shifted, DistanceKernel};
use crate::error::{IglError, Result};

const MAX_TERMS: usize = 48;
const TOL: f64 = 1e-17;
const COEFF_ROUTE_MAX_DEGREE: usize = 32;

struct Cluster {
    center: f64,
    radius: f64,
    moments: Vec<f64>,
}

struct Expansion {
    zeros: usize,
    clusters: Vec<Cluster>,
}

impl Expansion {
    fn build(weights: &[f64]) -> Self {
        let mut zeros = 0;
        let mut groups: std::collections::BTreeMap<i32, Vec<f64>> = Default::default();
        for &w in weights {
            if w == 0.0 {
                zeros += 1;
            } else {
                let e = w.log2().floor() as i32;
                // guard against log2 rounding at exact powers of two
                let e = if 2f64.powi(e) > w { e - 1 } else if 2f64.powi(e + 1) <= w { e + 1 } else { e };
                groups.entry(e).or_default().push(w);
            }
        }
        let clusters = groups
            .into_iter()
            .map(|(e, ws)| {
                let center = 1.5 * 2f64.powi(e);
                let mut moments = vec![0.0; MAX_TERMS];
                let mut radius: f64 = 0.0;
                for w in ws {
                    let h = w - center;
                    radius = radius.max(h.abs());
                    let mut p = 1.0;
                    for m in moments.iter_mut() {
                        *m += p;
                        p *= h;
                    }
                }
                Cluster { center, radius, moments }
            })
            .collect();
        Expansion { zeros, clusters }
    }

    /// `Σ 1/(x + w)^power` for `power ∈ {1, 2}`.
    fn eval(&self, x: f64, power: u32) -> Result<f64> {
        let mut total = 0.0;
        if self.zeros > 0 {
            if x == 0.0 {
                return Err(IglError::Pole(x.to_string()));
            }
            total += self.zeros as f64 / x.powi(power as i32);
        }
        for c in &self.clusters {
            let big_x = x + c.center;
            let inv = 1.0 / big_x;
            let q = c.radius * inv;
            let mut scale = inv.powi(power as i32);
            let mut qk = 1.0;
            let mut sum = 0.0;
            for k in 0..MAX_TERMS {
                let coef = if power == 1 { 1.0 } else { (k + 1) as f64 };
                let term = coef * c.moments[k] * scale;
                sum += if k % 2 == 0 { term } else { -term };
                qk *= q;
                if coef * qk * (k + 2) as f64 <= TOL {
                    break;
                }
                scale *= inv;
            }
            total += sum;
        }
        Ok(total)
    }
}

fn direct(kernel: DistanceKernel, weights: &[f64], points: &[f64]) -> Result<Vec<f64>> {
    points
        .iter()
        .map(|&x| {
            let mut s = 0.0;
            for &w in weights {
                let y = x + w;
                if y == 0.0 && !kernel.is_polynomial() {
                    return Err(IglError::Pole(x.to_string()));
                }
                s += kernel.apply(&y);
            }
            Ok(s)
        })
        .collect()
}

pub fn kernel_sum_eval_f64(kernel: DistanceKernel, weights: &[f64], points: &[f64]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if kernel.is_polynomial() || weights.len() * kernel.den_degree() <= COEFF_ROUTE_MAX_DEGREE {
        let f = sum_inverse_shifted(weights, kernel);
        return multipoint_eval(&f, points);
    }
    let nonneg = points.iter().all(|&x| x >= 0.0) && weights.iter().all(|&w| w >= 0.0);
    let direct_cost = points.len() * weights.len();
    let expansion_cost = weights.len() * MAX_TERMS + points.len() * 64 * 12;
    if !nonneg || direct_cost <= expansion_cost {
        return direct(kernel, weights, points);
    }
    match kernel {
        DistanceKernel::Inverse => {
            let e = Expansion::build(weights);
            points.iter().map(|&x| e.eval(x, 1)).collect()
        }
        DistanceKernel::InverseSquareWeighted => {
            // y/(1+y)^2 = 1/(1+y) - 1/(1+y)^2
            let shifted: Vec<f64> = weights.iter().map(|w| w + 1.0).collect();
            let e = Expansion::build(&shifted);
            points.iter().map(|&x| Ok(e.eval(x, 1)? - e.eval(x, 2)?)).collect()
        }
        DistanceKernel::Identity | DistanceKernel::Square => unreachable!(),
    }
}
