//! Gauss-Legendre and Gauss-Hermite node tables.
//!
//! Tables are built once by Newton iteration on the three-term recurrences and
//! then shared read-only; every rule size is a power of two.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an n-point rule.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integrates `f` over `[a, b]`, treating `self` as a Legendre rule on `[-1, 1]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(mid + half * x)).sum::<f64>() * half
    }
}

const LEGENDRE_SIZES: [usize; 8] = [8, 16, 32, 64, 128, 256, 512, 1024];
const HERMITE_SIZES: [usize; 4] = [32, 64, 128, 256];

/// Largest Legendre rule available.
pub const MAX_LEGENDRE_NODES: usize = 1024;
/// Largest Hermite rule available.
pub const MAX_HERMITE_NODES: usize = 256;

fn ladder_index(sizes: &[usize], n: usize) -> Option<usize> {
    sizes.iter().position(|&s| s == n)
}

/// Gauss-Legendre rule on `[-1, 1]`. `n` must be a power of two in `8..=1024`.
pub fn gauss_legendre(n: usize) -> Option<&'static GaussRule> {
    static TABLES: [OnceLock<GaussRule>; 8] = [const { OnceLock::new() }; 8];
    let idx = ladder_index(&LEGENDRE_SIZES, n)?;
    Some(TABLES[idx].get_or_init(|| build_legendre(n)))
}

/// Gauss-Hermite rule for weight `exp(-x^2)` on the real line.
/// `n` must be a power of two in `32..=256`.
pub fn gauss_hermite(n: usize) -> Option<&'static GaussRule> {
    static TABLES: [OnceLock<GaussRule>; 4] = [const { OnceLock::new() }; 4];
    let idx = ladder_index(&HERMITE_SIZES, n)?;
    Some(TABLES[idx].get_or_init(|| build_hermite(n)))
}

fn build_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = ((2.0 * jf + 1.0) * z * p2 - jf * p3) / (jf + 1.0);
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() <= 1e-15 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    GaussRule { nodes, weights }
}

fn build_hermite(n: usize) -> GaussRule {
    // pi^(-1/4)
    const PIM4: f64 = 0.751_125_544_464_942_5;
    let nf = n as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // Roots bracket from the Jacobi matrix (zero diagonal, off-diagonal sqrt(j/2))
    // by Sturm-count bisection, then polished by Newton on the normalised recurrence.
    let bound = (2.0 * nf + 1.0).sqrt() + 1.0;
    let below = |x: f64| -> usize {
        let mut count = 0;
        let mut q = -x;
        if q < 0.0 {
            count += 1;
        }
        for j in 1..n {
            let b2 = j as f64 / 2.0;
            let prev = if q == 0.0 { f64::EPSILON } else { q };
            q = -x - b2 / prev;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for i in 0..n {
        let (mut lo, mut hi) = (-bound, bound);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if below(mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
                break;
            }
        }
        let mut z = 0.5 * (lo + hi);
        let mut pp = 1.0;
        for _ in 0..3 {
            let mut p1 = PIM4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            if dz.abs() < hi - lo + 1e-15 {
                z -= dz;
            }
        }
        nodes.push(z);
        weights.push(2.0 / (pp * pp));
    }
    GaussRule { nodes, weights }
}
