//! Gauss–Legendre rules generated by Newton iteration on the Legendre
//! three-term recurrence.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an m-point rule on [-1, 1], ordered by increasing node.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "a Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        let half = m.div_ceil(2);
        for i in 0..half {
            // Tricomi initial guess for the i-th largest root
            let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                    dp = legendre_with_derivative(m, x).1;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[m - 1 - i] = x;
            weights[m - 1 - i] = w;
            nodes[i] = -x;
            weights[i] = w;
        }
        if m % 2 == 1 {
            nodes[m / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped affinely onto [a, b].
    pub fn on_interval(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|x| mid + half * x).collect();
        let weights = self.weights.iter().map(|w| half * w).collect();
        (nodes, weights)
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        half * s
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=m {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// m-point Gauss–Legendre nodes and weights on [a, b].
pub fn gauss_legendre_nodes(m: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    GaussLegendre::new(m).on_interval(a, b)
}

const DOUBLING_LEVELS: usize = 7;

/// Shared rules with 64 * 2^i nodes, i < 7.
pub(crate) fn doubling_rule(level: usize) -> &'static GaussLegendre {
    static RULES: [OnceLock<GaussLegendre>; DOUBLING_LEVELS] =
        [const { OnceLock::new() }; DOUBLING_LEVELS];
    RULES[level].get_or_init(|| GaussLegendre::new(64 << level))
}

/// Integrates with 64, 128, ... node rules until two successive values agree
/// to `rel_tol`. Returns the last value and whether the tolerance was met.
pub fn integrate_doubling<F: Fn(f64) -> f64>(a: f64, b: f64, rel_tol: f64, f: F) -> (f64, bool) {
    let mut prev = doubling_rule(0).integrate(a, b, &f);
    for level in 1..DOUBLING_LEVELS {
        let next = doubling_rule(level).integrate(a, b, &f);
        if (next - prev).abs() <= rel_tol * next.abs() || next == prev {
            return (next, true);
        }
        prev = next;
    }
    (prev, false)
}
