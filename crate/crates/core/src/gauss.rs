//! Gauss-Legendre rules computed once by Newton iteration on the Legendre
//! recurrence. Order 15 carries the panel value, order 30 the refinement used
//! for the error estimate.

use std::sync::LazyLock;

pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_rule(n: usize) -> Rule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Rule { nodes, weights }
}

pub static G15: LazyLock<Rule> = LazyLock::new(|| legendre_rule(15));
pub static G30: LazyLock<Rule> = LazyLock::new(|| legendre_rule(30));

#[cfg(test)]
mod tests {
    use super::*;

    fn apply<F: Fn(f64) -> f64>(rule: &Rule, f: &F, a: f64, b: f64) -> f64 {
        let c = 0.5 * (a + b);
        let r = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            acc += w * f(c + r * x);
        }
        acc * r
    }

    #[test]
    fn weights_sum_to_two() {
        for rule in [&*G15, &*G30] {
            let s: f64 = rule.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_of_exactness() {
        // order n integrates x^(2n-1) exactly; check a high even power
        let f = |x: f64| x.powi(28);
        let exact = 2.0 / 29.0;
        assert!((apply(&G15, &f, -1.0, 1.0) - exact).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_panel_accuracy() {
        // one full oscillation per panel is resolved far below 1e-12
        let f = |x: f64| (10.0 * x).cos();
        let exact = 2.0 * 10.0f64.sin() / 10.0;
        assert!((apply(&G30, &f, -1.0, 1.0) - exact).abs() < 1e-13);
    }
}
