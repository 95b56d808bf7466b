//! Barycentric Lagrange interpolation on arbitrary node sets.
//!
//! All nodal bases of the crate (Gauss-Radau in time, Gauss-Lobatto in
//! space) are evaluated through the barycentric form, which stays stable for
//! the clustered node sets that appear at higher orders.

use nalgebra::DMatrix;

/// Tolerance below which an evaluation point is treated as a node hit.
const NODE_EPS: f64 = 10.0 * f64::EPSILON;

/// Barycentric weights `1 / prod_{k != j} (x_j - x_k)`.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let mut w = vec![1.0; n];
    for j in 0..n {
        for k in 0..n {
            if k != j {
                w[j] /= nodes[j] - nodes[k];
            }
        }
    }
    w
}

/// Values of all cardinal polynomials at `x` (`card[j] = l_j(x)`).
///
/// The cardinal values sum to one identically, so partition of unity holds
/// to the last bit by construction.
pub fn cardinal_values(nodes: &[f64], weights: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    let scale = node_scale(nodes);
    for j in 0..n {
        if (x - nodes[j]).abs() <= NODE_EPS * scale {
            let mut card = vec![0.0; n];
            card[j] = 1.0;
            return card;
        }
    }
    let mut card = vec![0.0; n];
    let mut denom = 0.0;
    for j in 0..n {
        let term = weights[j] / (x - nodes[j]);
        card[j] = term;
        denom += term;
    }
    for c in &mut card {
        *c /= denom;
    }
    card
}

/// Interpolant value at `x` for nodal data `values`.
pub fn interpolate(nodes: &[f64], weights: &[f64], values: &[f64], x: f64) -> f64 {
    cardinal_values(nodes, weights, x)
        .iter()
        .zip(values)
        .map(|(c, v)| c * v)
        .sum()
}

/// Derivatives of all cardinal polynomials at `x` (`card[j] = l_j'(x)`).
///
/// At a node the differentiation-matrix formula is used; elsewhere the
/// logarithmic derivative of the barycentric form.
pub fn cardinal_derivatives(nodes: &[f64], weights: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    let scale = node_scale(nodes);
    for j in 0..n {
        if (x - nodes[j]).abs() <= NODE_EPS * scale {
            let d = diff_matrix(nodes, weights);
            return (0..n).map(|i| d[(j, i)]).collect();
        }
    }
    let mut s = 0.0;
    let mut s2 = 0.0;
    for j in 0..n {
        let t = weights[j] / (x - nodes[j]);
        s += t;
        s2 += t / (x - nodes[j]);
    }
    let card = cardinal_values(nodes, weights, x);
    (0..n)
        .map(|j| card[j] * (s2 / s - 1.0 / (x - nodes[j])))
        .collect()
}

/// Differentiation matrix `D[(j, i)] = l_i'(x_j)`.
///
/// The diagonal uses the negative-sum trick, so every row sums to zero
/// exactly and constants are annihilated.
pub fn diff_matrix(nodes: &[f64], weights: &[f64]) -> DMatrix<f64> {
    let n = nodes.len();
    let mut d = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut row_sum = 0.0;
        for i in 0..n {
            if i != j {
                let v = (weights[i] / weights[j]) / (nodes[j] - nodes[i]);
                d[(j, i)] = v;
                row_sum += v;
            }
        }
        d[(j, j)] = -row_sum;
    }
    d
}

fn node_scale(nodes: &[f64]) -> f64 {
    nodes.iter().fold(1.0f64, |m, x| m.max(x.abs()))
}
