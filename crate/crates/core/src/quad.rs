//! Gauss-Legendre quadrature nodes and weights.

use crate::float::Real;

/// Gauss-Legendre rule on the reference interval [-1, 1].
///
/// Nodes and weights are computed once with Newton iteration on the Legendre
/// polynomial recurrence and can be mapped onto an arbitrary interval.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build an `n`-point rule. Exact for polynomials of degree `2n - 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for k in 0..m {
            // Chebyshev-based initial guess for the k-th positive root.
            let mut z = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, p_prev) = legendre_pair(n, z);
                dp = n as f64 * (z * p - p_prev) / (z * z - 1.0);
                let step = p / dp;
                z -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            nodes[k] = -z;
            nodes[n - 1 - k] = z;
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn scaled<R: Real>(&self, a: R, b: R) -> (Vec<R>, Vec<R>) {
        let half = (b - a) * R::of(0.5);
        let mid = (b + a) * R::of(0.5);
        let nodes = self.nodes.iter().map(|&x| mid + half * R::of(x)).collect();
        let weights = self.weights.iter().map(|&w| half * R::of(w)).collect();
        (nodes, weights)
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<R: Real>(&self, a: R, b: R, mut f: impl FnMut(R) -> R) -> R {
        let (nodes, weights) = self.scaled(a, b);
        nodes
            .iter()
            .zip(&weights)
            .fold(R::zero(), |acc, (&x, &w)| acc + w * f(x))
    }
}

/// Legendre polynomial P_n and P_{n-1} at `x` via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}
