//! Gauss-Legendre quadrature rules.
//!
//! Nodes and weights are found by Newton iteration on the Legendre
//! polynomials (computed in `f64`, then converted to the working scalar).
//! An order-`q` rule integrates polynomials of degree `2q - 1` exactly,
//! which the oracle relies on after splitting integrands at their kinks.

use crate::scalar::Scalar;

/// Gauss-Legendre rule on `[-1, 1]` of the given order (node count).
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

/// Legendre polynomial `P_q` and its derivative at `x`.
fn legendre_and_derivative(q: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=q {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if q == 0 {
        return (1.0, 0.0);
    }
    let dp = q as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

impl<T: Scalar> GaussLegendre<T> {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be at least 1");
        let q = order;
        let mut nodes = vec![0.0f64; q];
        let mut weights = vec![0.0f64; q];
        for i in 0..q.div_ceil(2) {
            // Chebyshev-based initial guess, then Newton.
            let mut x =
                (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(q, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(q, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x.abs();
            nodes[q - 1 - i] = x.abs();
            weights[i] = w;
            weights[q - 1 - i] = w;
        }
        if q % 2 == 1 {
            nodes[q / 2] = 0.0;
        }
        GaussLegendre {
            nodes: nodes.into_iter().map(T::real).collect(),
            weights: weights.into_iter().map(T::real).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = T::real(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let mut acc = T::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += *w * f(mid + rad * *x);
        }
        acc * rad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_high_degree_polynomials_exactly() {
        let rule = GaussLegendre::<f64>::new(16);
        // degree 31 is the exactness limit of a 16-point rule
        let val = rule.integrate(0.0, 1.0, |x| x.powi(31));
        assert!((val - 1.0 / 32.0).abs() < 1e-14, "got {val}");
        let val = rule.integrate(-2.0, 3.0, |x| 3.0 * x * x);
        assert!((val - (27.0 + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        for order in [1, 2, 5, 8, 16, 24] {
            let rule = GaussLegendre::<f64>::new(order);
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "order {order}: {total}");
        }
    }

    #[test]
    fn works_at_f32() {
        let rule = GaussLegendre::<f32>::new(8);
        let val = rule.integrate(0.0f32, 1.0, |x| x * x);
        assert!((val - 1.0 / 3.0).abs() < 1e-6);
    }
}
