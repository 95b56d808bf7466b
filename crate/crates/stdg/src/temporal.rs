//! Time slabs, mapped Gauss-Radau bases and temporal interpolation.
//!
//! The time interval `[0, T]` is partitioned into slabs `I_m = (t_{m-1}, t_m]`.
//! On each slab the discrete solution is a polynomial of degree `q` in time,
//! represented by its values at the mapped Gauss-Radau points of the weighted
//! rule with decay parameter `a = rho * tau_m`; the affine map takes the
//! reference interval `(-1, 1]` to the slab, so the slab quadrature
//! `(tau_m / 2) * sum_i w_i v(t_{m,i})` integrates `v(t) * exp(-2 rho (t - t_{m-1}))`
//! exactly for polynomials of degree up to `2q`.
//!
//! Reference data (nodes, weights, differentiation matrix, left-endpoint
//! values) depends only on `(rho * tau_m, q)` and is cached, so uniform
//! meshes build it once.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::DMatrix;

use crate::lagrange;
use crate::quadrature;
use crate::{Error, Result};

/// Partition of `[0, T]` into slabs, with the weight exponent and temporal order.
#[derive(Debug, Clone)]
pub struct TimeMesh {
    breakpoints: Vec<f64>,
    rho: f64,
    q: usize,
}

impl TimeMesh {
    /// Mesh from explicit breakpoints `0 = t_0 < t_1 < ... < t_M = T`.
    pub fn new(breakpoints: Vec<f64>, rho: f64, q: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidInput("time mesh needs at least one slab".into()));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::InvalidInput("time mesh must start at t = 0".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("time breakpoints must be strictly increasing".into()));
        }
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::InvalidInput(format!("weight exponent must be >= 0, got {rho}")));
        }
        Ok(TimeMesh { breakpoints, rho, q })
    }

    /// Uniform mesh with `m` slabs on `[0, t_end]`.
    pub fn uniform(t_end: f64, m: usize, rho: f64, q: usize) -> Result<Self> {
        if m == 0 || !(t_end > 0.0) {
            return Err(Error::InvalidInput(format!(
                "uniform time mesh needs m >= 1 and t_end > 0, got m={m}, t_end={t_end}"
            )));
        }
        let breakpoints = (0..=m).map(|i| t_end * i as f64 / m as f64).collect();
        TimeMesh::new(breakpoints, rho, q)
    }

    pub fn num_slabs(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn t_end(&self) -> f64 {
        *self.breakpoints.last().unwrap()
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn breakpoint(&self, i: usize) -> f64 {
        self.breakpoints[i]
    }

    /// Slab endpoints `(t_{m-1}, t_m)` for the 1-based slab index `m`.
    pub fn slab_interval(&self, m: usize) -> (f64, f64) {
        (self.breakpoints[m - 1], self.breakpoints[m])
    }

    pub fn tau(&self, m: usize) -> f64 {
        self.breakpoints[m] - self.breakpoints[m - 1]
    }

    /// 1-based index of the slab whose half-open interval `(t_{m-1}, t_m]`
    /// contains `t`; at a breakpoint `side` picks the slab.
    pub fn slab_containing(&self, t: f64, side: Side) -> Result<usize> {
        let tol = 1e-12 * self.t_end().max(1.0);
        if t < -tol || t > self.t_end() + tol {
            return Err(Error::InvalidInput(format!(
                "time {t} outside [0, {}]",
                self.t_end()
            )));
        }
        let m_count = self.num_slabs();
        for m in 1..=m_count {
            let (lo, hi) = self.slab_interval(m);
            if (t - lo).abs() <= tol {
                // at an interior breakpoint the left limit belongs to the
                // previous slab; at t = 0 there is none
                return Ok(match side {
                    Side::Right => m,
                    Side::Left => {
                        if m == 1 {
                            1
                        } else {
                            m - 1
                        }
                    }
                });
            }
            if t > lo && t < hi {
                return Ok(m);
            }
        }
        Ok(m_count)
    }
}

/// Resolves which one-sided limit is meant at a slab breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Reference data shared by all slabs with equal `rho * tau`.
#[derive(Debug)]
pub struct ReferenceBasis {
    pub q: usize,
    /// decay parameter `rho * tau`
    pub a: f64,
    /// Gauss-Radau nodes on `(-1, 1]`
    pub nodes: Vec<f64>,
    /// rule weights
    pub weights: Vec<f64>,
    /// barycentric weights of the node set
    pub bary: Vec<f64>,
    /// cardinal values at the left endpoint `x = -1`
    pub left_values: Vec<f64>,
    /// `diff[(j, i)] = l_i'(r_j)` on the reference interval
    pub diff: DMatrix<f64>,
}

fn reference_basis(a: f64, q: usize) -> Result<Arc<ReferenceBasis>> {
    static CACHE: OnceLock<RwLock<HashMap<(i64, usize), Arc<ReferenceBasis>>>> = OnceLock::new();
    let key = ((a / 1e-14).round() as i64, q);
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(hit) = cache.read().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let rule = quadrature::radau_rule(a, q)?;
    let bary = lagrange::barycentric_weights(&rule.nodes);
    let left_values = lagrange::cardinal_values(&rule.nodes, &bary, -1.0);
    let diff = lagrange::diff_matrix(&rule.nodes, &bary);
    let basis = Arc::new(ReferenceBasis {
        q,
        a,
        nodes: rule.nodes,
        weights: rule.weights,
        bary,
        left_values,
        diff,
    });
    let mut map = cache.write().unwrap();
    Ok(map.entry(key).or_insert(basis).clone())
}

/// Nodal basis of one slab: mapped quadrature points, scaled weights and
/// differentiation data for the Lagrange basis at those points.
#[derive(Debug, Clone)]
pub struct SlabBasis {
    /// 1-based slab index
    pub m: usize,
    pub t_left: f64,
    pub t_right: f64,
    /// mapped nodes `t_{m,i}`, inside `(t_{m-1}, t_m]`, the last one `t_m`
    pub nodes: Vec<f64>,
    /// `(tau_m / 2) * w_i`
    pub scaled_weights: Vec<f64>,
    reference: Arc<ReferenceBasis>,
}

impl SlabBasis {
    pub fn tau(&self) -> f64 {
        self.t_right - self.t_left
    }

    pub fn order(&self) -> usize {
        self.reference.q
    }

    /// Basis values at the left slab endpoint, `e_i = phi_i(t_{m-1})`.
    pub fn left_values(&self) -> &[f64] {
        &self.reference.left_values
    }

    /// `phi_i'(t_{m,j})` on the physical slab.
    pub fn derivative(&self, j: usize, i: usize) -> f64 {
        self.reference.diff[(j, i)] * 2.0 / self.tau()
    }

    /// Maps physical time to the reference coordinate in `[-1, 1]`.
    pub fn to_reference(&self, t: f64) -> f64 {
        (2.0 * t - (self.t_left + self.t_right)) / self.tau()
    }

    /// Values of all nodal basis functions at time `t`.
    pub fn cardinal_values(&self, t: f64) -> Vec<f64> {
        lagrange::cardinal_values(&self.reference.nodes, &self.reference.bary, self.to_reference(t))
    }

    /// Reference rule weights (unscaled).
    pub fn reference_weights(&self) -> &[f64] {
        &self.reference.weights
    }

    pub fn reference_nodes(&self) -> &[f64] {
        &self.reference.nodes
    }
}

/// Builds the nodal basis of slab `m` (reference part cached by `rho * tau`).
pub fn build_slab_basis(mesh: &TimeMesh, m: usize) -> Result<SlabBasis> {
    if m == 0 || m > mesh.num_slabs() {
        return Err(Error::InvalidInput(format!(
            "slab index {m} outside 1..={}",
            mesh.num_slabs()
        )));
    }
    let (t_left, t_right) = mesh.slab_interval(m);
    let tau = t_right - t_left;
    let reference = reference_basis(mesh.rho() * tau, mesh.order())?;
    let mid = 0.5 * (t_left + t_right);
    let half = 0.5 * tau;
    let last = reference.nodes.len() - 1;
    let nodes: Vec<f64> = reference
        .nodes
        .iter()
        .enumerate()
        .map(|(i, r)| if i == last { t_right } else { mid + half * r })
        .collect();
    let scaled_weights = reference.weights.iter().map(|w| half * w).collect();
    Ok(SlabBasis { m, t_left, t_right, nodes, scaled_weights, reference })
}

/// Bases for every slab of the mesh.
pub fn build_all_bases(mesh: &TimeMesh) -> Result<Vec<SlabBasis>> {
    (1..=mesh.num_slabs()).map(|m| build_slab_basis(mesh, m)).collect()
}

/// Degree-`q` interpolant at the slab quadrature nodes; discontinuous across
/// breakpoints, pinned to `v(0)` at `t = 0`.
#[derive(Debug, Clone)]
pub struct NodalInterpolant {
    pub value_at_zero: f64,
    values: Vec<Vec<f64>>,
}

impl NodalInterpolant {
    pub fn new<F: Fn(f64) -> f64>(bases: &[SlabBasis], v: F) -> Self {
        let values = bases
            .iter()
            .map(|b| b.nodes.iter().map(|&t| v(t)).collect())
            .collect();
        NodalInterpolant { value_at_zero: v(0.0), values }
    }

    /// Evaluates the interpolant of slab `m` (1-based) at `t`.
    pub fn eval_on_slab(&self, bases: &[SlabBasis], m: usize, t: f64) -> f64 {
        bases[m - 1]
            .cardinal_values(t)
            .iter()
            .zip(&self.values[m - 1])
            .map(|(c, v)| c * v)
            .sum()
    }

    pub fn node_values(&self, m: usize) -> &[f64] {
        &self.values[m - 1]
    }
}

/// Degree-`q+1` interpolant that adds the left slab endpoint to the node
/// set; continuous across breakpoints for continuous data.
#[derive(Debug, Clone)]
pub struct ExtendedInterpolant {
    /// per slab: `q + 2` interpolation points (left endpoint first)
    nodes: Vec<Vec<f64>>,
    bary: Vec<Vec<f64>>,
    values: Vec<Vec<f64>>,
}

impl ExtendedInterpolant {
    pub fn new<F: Fn(f64) -> f64>(bases: &[SlabBasis], v: F) -> Self {
        let mut nodes = Vec::with_capacity(bases.len());
        let mut bary = Vec::with_capacity(bases.len());
        let mut values = Vec::with_capacity(bases.len());
        for b in bases {
            let mut ns = Vec::with_capacity(b.nodes.len() + 1);
            ns.push(b.t_left);
            ns.extend_from_slice(&b.nodes);
            let vs: Vec<f64> = ns.iter().map(|&t| v(t)).collect();
            bary.push(lagrange::barycentric_weights(&ns));
            nodes.push(ns);
            values.push(vs);
        }
        ExtendedInterpolant { nodes, bary, values }
    }

    pub fn eval_on_slab(&self, m: usize, t: f64) -> f64 {
        lagrange::interpolate(&self.nodes[m - 1], &self.bary[m - 1], &self.values[m - 1], t)
    }

    /// Time derivative of the slab interpolant at `t`.
    pub fn deriv_on_slab(&self, m: usize, t: f64) -> f64 {
        lagrange::cardinal_derivatives(&self.nodes[m - 1], &self.bary[m - 1], t)
            .iter()
            .zip(&self.values[m - 1])
            .map(|(c, v)| c * v)
            .sum()
    }
}
