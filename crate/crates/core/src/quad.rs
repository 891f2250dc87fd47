//! Gauss–Legendre rules and composite panels.

#[allow(unused_imports)]
use num_traits::Float;
use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_traits::Zero;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n
            let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<T, F>(&self, a: f64, b: f64, f: F) -> T
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        self.mapped(a, b).fold(T::zero(), |acc, (x, w)| acc + f(x) * w)
    }

    /// Composite rule over `panels` equal panels.
    pub fn integrate_panels<T, F>(&self, a: f64, b: f64, panels: usize, f: F) -> T
    where
        T: Copy + Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: Fn(f64) -> T,
    {
        let h = (b - a) / panels as f64;
        (0..panels).fold(T::zero(), |acc, p| {
            let lo = a + h * p as f64;
            acc + self.integrate(lo, lo + h, &f)
        })
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(5);
        let v: f64 = g.integrate(0.0, 2.0, |x| x.powi(9));
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
        let w: f64 = g.integrate(-1.0, 1.0, |_| 1.0);
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn composite_panels_integrate_exponential() {
        let g = GaussLegendre::new(8);
        let v: f64 = g.integrate_panels(0.0, 5.0, 10, |x| (-x).exp());
        assert!((v - (1.0 - (-5f64).exp())).abs() < 1e-14);
    }
}
