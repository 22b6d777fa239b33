//! Quadrature rules over the unit domain and the exactness loss.
//!
//! The loss is the worst-case relative integration error over the product
//! space: `L² = eᵀ M⁻¹ e` where `e` collects the signed per-basis-function
//! integration errors and `M` is the Gram matrix. With the orthonormal
//! shifted-Legendre basis `M` is the identity, so `L²` collapses to a plain
//! sum of squared errors and no matrix inversion is ever performed. A rule
//! is exact on the space if and only if `L = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyspace::{
    legendre_norms, product_exponent_set, shifted_legendre_tables, trunk_exponent_set, Dim,
    SpaceBasis,
};

/// Feasibility tolerance on |Σw − 1| for a rule to count as satisfying the
/// partition-of-unity side constraint.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// A quadrature rule: `q` points in the unit square or cube with one weight
/// per point. Coordinates are stored point-major (`x0 y0 [z0] x1 y1 …`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuadratureRule {
    dim: Dim,
    coords: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(dim: Dim, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let q = weights.len();
        if q == 0 {
            return Err(Error::invalid("a rule needs at least one point"));
        }
        if coords.len() != q * dim.size() {
            return Err(Error::invalid(format!(
                "expected {} coordinates for {} points in {}D, got {}",
                q * dim.size(),
                q,
                dim,
                coords.len()
            )));
        }
        Ok(QuadratureRule { dim, coords, weights })
    }

    /// Builds a rule from the optimiser's flat parameter layout
    /// (`x y [z] w` per point).
    pub fn from_flat_params(dim: Dim, params: &[f64]) -> Result<Self> {
        let stride = dim.size() + 1;
        if params.is_empty() || params.len() % stride != 0 {
            return Err(Error::invalid(format!(
                "flat parameter vector length {} is not a multiple of {stride}",
                params.len()
            )));
        }
        let q = params.len() / stride;
        let mut coords = Vec::with_capacity(q * dim.size());
        let mut weights = Vec::with_capacity(q);
        for point in params.chunks_exact(stride) {
            coords.extend_from_slice(&point[..dim.size()]);
            weights.push(point[dim.size()]);
        }
        QuadratureRule::new(dim, coords, weights)
    }

    pub fn flat_params(&self) -> Vec<f64> {
        let d = self.dim.size();
        let mut out = Vec::with_capacity(self.num_points() * (d + 1));
        for j in 0..self.num_points() {
            out.extend_from_slice(self.point(j));
            out.push(self.weights[j]);
        }
        out
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn num_points(&self) -> usize {
        self.weights.len()
    }

    pub fn point(&self, j: usize) -> &[f64] {
        let d = self.dim.size();
        &self.coords[j * d..(j + 1) * d]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Sum of the weights, accumulated in value order so the result is
    /// independent of how the points are listed. The constant-mode
    /// integration error equals `1 − weight_sum()` bit for bit.
    pub fn weight_sum(&self) -> f64 {
        let mut sorted = self.weights.clone();
        sorted.sort_unstable_by(f64::total_cmp);
        sorted.iter().sum()
    }

    /// A rule is feasible when every coordinate and weight lies strictly
    /// inside (0,1) and the weights sum to 1 within [`WEIGHT_SUM_TOL`].
    pub fn is_feasible(&self) -> bool {
        let interior = |v: f64| v > 0.0 && v < 1.0;
        self.coords.iter().copied().all(interior)
            && self.weights.iter().copied().all(interior)
            && (self.weight_sum() - 1.0).abs() <= WEIGHT_SUM_TOL
    }

    /// Returns the same rule with its points listed in permuted order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.num_points() {
            return Err(Error::invalid("permutation length must equal point count"));
        }
        let d = self.dim.size();
        let mut coords = Vec::with_capacity(self.coords.len());
        let mut weights = Vec::with_capacity(self.weights.len());
        for &j in order {
            coords.extend_from_slice(&self.coords[j * d..(j + 1) * d]);
            weights.push(self.weights[j]);
        }
        QuadratureRule::new(self.dim, coords, weights)
    }
}

/// Signed integration errors, one per basis function in canonical order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorVector {
    pub values: Vec<f64>,
}

impl ErrorVector {
    pub fn l2_squared(&self) -> f64 {
        self.values.iter().map(|e| e * e).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, e| m.max(e.abs()))
    }
}

/// Loss of a rule against a basis: `l` is the worst-case relative error and
/// `l_squared` its square, which is the quantity the optimiser monitors and
/// thresholds (the square root hits the f64 round-off floor long before
/// 1e−22 can be resolved).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LossValue {
    pub l: f64,
    pub l_squared: f64,
}

fn check_dims(basis: &SpaceBasis, rule: &QuadratureRule) -> Result<()> {
    if basis.dim() != rule.dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.dim().size(),
            got: rule.dim().size(),
        });
    }
    Ok(())
}

/// Per-basis-function signed integration errors
/// `e_i = ∫ v_i − Σ_j w_j v_i(x_j)`.
///
/// The per-point contributions to each error are accumulated in a canonical
/// (value-sorted) order, so the result is bit-identical under any
/// permutation of the rule's points.
pub fn integration_errors(basis: &SpaceBasis, rule: &QuadratureRule) -> Result<ErrorVector> {
    check_dims(basis, rule)?;
    let mut ws = LossWorkspace::new(basis, rule.num_points());
    ws.fill_tables(basis, rule);
    let mut scratch = vec![0.0; rule.num_points()];
    let values = (0..basis.len())
        .map(|i| ws.error_canonical(basis, rule, i, &mut scratch))
        .collect();
    Ok(ErrorVector { values })
}

/// Loss of Eq-style quadratic form; with the orthonormal basis this is the
/// square root of the plain sum of squared errors.
pub fn loss(basis: &SpaceBasis, rule: &QuadratureRule) -> Result<LossValue> {
    let errors = integration_errors(basis, rule)?;
    let l_squared = errors.l2_squared();
    Ok(LossValue { l: l_squared.sqrt(), l_squared })
}

/// Analytic gradient of `L²` with respect to the flat rule parameters
/// (`x y [z] w` per point):
/// `∂L²/∂w_j = −2 Σ_i e_i v_i(x_j)` and
/// `∂L²/∂x_j = −2 w_j Σ_i e_i ∂v_i/∂x(x_j)`.
pub fn loss_gradient(basis: &SpaceBasis, rule: &QuadratureRule) -> Result<Vec<f64>> {
    check_dims(basis, rule)?;
    let mut ws = LossWorkspace::new(basis, rule.num_points());
    ws.fill_tables(basis, rule);
    let mut scratch = vec![0.0; rule.num_points()];
    for i in 0..basis.len() {
        ws.errors[i] = ws.error_canonical(basis, rule, i, &mut scratch);
    }
    let mut grad = vec![0.0; rule.num_points() * (basis.dim().size() + 1)];
    ws.accumulate_gradient(basis, rule.weights(), &mut grad);
    Ok(grad)
}

/// Dense symmetric matrix with row-major storage, used for Gram matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Matrix { n, data }
    }

    pub fn from_rows(n: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n);
        Matrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_abs_diff_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.at(i, j) - target).abs());
            }
        }
        worst
    }
}

/// Gram matrix of the basis. The shifted-Legendre tensor basis is
/// orthonormal by construction, so this is the identity and is returned
/// without numerical integration. [`crate::verifier::gram_matrix_oracle`]
/// provides the independently integrated path used by the tests.
pub fn gram_matrix(basis: &SpaceBasis) -> Matrix {
    Matrix::identity(basis.len())
}

/// Heuristic dimension-count lower bound on the number of points: each
/// point carries dim+1 free parameters against one exactness constraint per
/// basis function, so `q = ⌈|S| / (dim+1)⌉` using the enumerated product-set
/// size.
pub fn q_lower_bound(dim: Dim, p: usize) -> Result<usize> {
    let product = product_exponent_set(&trunk_exponent_set(dim, p)?);
    Ok(product.len().div_ceil(dim.size() + 1))
}

/// Point count `q′ = (p+1)^dim` of the tensor-product Gauss baseline.
pub fn gaussian_point_count(dim: Dim, p: usize) -> usize {
    (p + 1).pow(dim.size() as u32)
}

/// Fractional reduction in points relative to the Gauss baseline:
/// `1 − q / (p+1)^dim`.
pub fn savings(q: usize, dim: Dim, p: usize) -> f64 {
    1.0 - q as f64 / gaussian_point_count(dim, p) as f64
}

/// Reusable evaluation buffers for the loss and its gradient. One instance
/// belongs to one restart; the shared basis stays read-only, so many
/// workspaces can evaluate concurrently against it.
pub(crate) struct LossWorkspace {
    dim: usize,
    n: usize,
    q: usize,
    deg: usize,
    norms: Vec<f64>,
    point_vals: Vec<f64>,
    point_ders: Vec<f64>,
    /// basis values, row i contiguous over points: `vals[i*q + j]`
    vals: Vec<f64>,
    /// basis partials, laid out `[ (i*q + j)*dim + axis ]`
    ders: Vec<f64>,
    pub(crate) errors: Vec<f64>,
}

impl LossWorkspace {
    pub(crate) fn new(basis: &SpaceBasis, q: usize) -> Self {
        let dim = basis.dim().size();
        let n = basis.len();
        let deg = basis.max_component_degree();
        LossWorkspace {
            dim,
            n,
            q,
            deg,
            norms: legendre_norms(deg),
            point_vals: vec![0.0; dim * (deg + 1)],
            point_ders: vec![0.0; dim * (deg + 1)],
            vals: vec![0.0; n * q],
            ders: vec![0.0; n * q * dim],
            errors: vec![0.0; n],
        }
    }

    fn fill_tables(&mut self, basis: &SpaceBasis, rule: &QuadratureRule) {
        self.fill_tables_flat(basis, &rule.flat_params());
    }

    /// Evaluates every basis function and its partials at every point of the
    /// flat parameter vector.
    fn fill_tables_flat(&mut self, basis: &SpaceBasis, params: &[f64]) {
        let (dim, q, deg) = (self.dim, self.q, self.deg);
        let stride = dim + 1;
        debug_assert_eq!(params.len(), q * stride);
        let width = deg + 1;
        for j in 0..q {
            let point = &params[j * stride..j * stride + dim];
            for axis in 0..dim {
                let (v, d) = (
                    &mut self.point_vals[axis * width..(axis + 1) * width],
                    &mut self.point_ders[axis * width..(axis + 1) * width],
                );
                shifted_legendre_tables(point[axis], &self.norms, v, d);
            }
            for (i, alpha) in basis.exponent_set().indices().iter().enumerate() {
                let comps = alpha.components();
                match dim {
                    2 => {
                        let a = self.point_vals[comps[0] as usize];
                        let b = self.point_vals[width + comps[1] as usize];
                        let da = self.point_ders[comps[0] as usize];
                        let db = self.point_ders[width + comps[1] as usize];
                        self.vals[i * q + j] = a * b;
                        let base = (i * q + j) * dim;
                        self.ders[base] = da * b;
                        self.ders[base + 1] = a * db;
                    }
                    3 => {
                        let a = self.point_vals[comps[0] as usize];
                        let b = self.point_vals[width + comps[1] as usize];
                        let c = self.point_vals[2 * width + comps[2] as usize];
                        let da = self.point_ders[comps[0] as usize];
                        let db = self.point_ders[width + comps[1] as usize];
                        let dc = self.point_ders[2 * width + comps[2] as usize];
                        let bc = b * c;
                        let ab = a * b;
                        self.vals[i * q + j] = a * bc;
                        let base = (i * q + j) * dim;
                        self.ders[base] = da * bc;
                        self.ders[base + 1] = a * db * c;
                        self.ders[base + 2] = ab * dc;
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    /// Error of basis function `i` with the per-point contributions summed
    /// in value order, making the result independent of point ordering.
    fn error_canonical(
        &self,
        basis: &SpaceBasis,
        rule: &QuadratureRule,
        i: usize,
        scratch: &mut [f64],
    ) -> f64 {
        let q = self.q;
        for j in 0..q {
            scratch[j] = rule.weights()[j] * self.vals[i * q + j];
        }
        scratch.sort_unstable_by(f64::total_cmp);
        let applied: f64 = scratch.iter().sum();
        basis.exact_integrals()[i] - applied
    }

    /// Fast path used inside the optimiser's inner loop: recomputes the
    /// tables, errors and (optionally) the gradient for a flat parameter
    /// vector, returning `L²`. Summation order is fixed but not value-sorted;
    /// the optimiser confirms threshold crossings through the canonical path.
    pub(crate) fn loss_sq_flat(
        &mut self,
        basis: &SpaceBasis,
        params: &[f64],
        mut grad: Option<&mut [f64]>,
    ) -> f64 {
        self.fill_tables_flat(basis, params);
        let (dim, q) = (self.dim, self.q);
        let stride = dim + 1;
        let mut l2 = 0.0;
        for i in 0..self.n {
            let mut applied = 0.0;
            let row = &self.vals[i * q..(i + 1) * q];
            for (j, v) in row.iter().enumerate() {
                applied += params[j * stride + dim] * v;
            }
            let e = basis.exact_integrals()[i] - applied;
            self.errors[i] = e;
            l2 += e * e;
        }
        if let Some(grad) = grad.as_deref_mut() {
            let weights: Vec<f64> = (0..q).map(|j| params[j * stride + dim]).collect();
            self.accumulate_gradient(basis, &weights, grad);
        }
        l2
    }

    fn accumulate_gradient(&self, _basis: &SpaceBasis, weights: &[f64], grad: &mut [f64]) {
        let (dim, q) = (self.dim, self.q);
        let stride = dim + 1;
        debug_assert_eq!(grad.len(), q * stride);
        grad.fill(0.0);
        for i in 0..self.n {
            let e = self.errors[i];
            if e == 0.0 {
                continue;
            }
            let row_v = &self.vals[i * q..(i + 1) * q];
            let row_d = &self.ders[i * q * dim..(i + 1) * q * dim];
            for j in 0..q {
                for axis in 0..dim {
                    grad[j * stride + axis] += e * row_d[j * dim + axis];
                }
                grad[j * stride + dim] += e * row_v[j];
            }
        }
        for j in 0..q {
            for axis in 0..dim {
                grad[j * stride + axis] *= -2.0 * weights[j];
            }
            grad[j * stride + dim] *= -2.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::MultiIndex;
    use crate::verifier::gauss_legendre_1d;
    use approx::assert_abs_diff_eq;

    fn product_basis(dim: Dim, p: usize) -> SpaceBasis {
        SpaceBasis::new(product_exponent_set(&trunk_exponent_set(dim, p).unwrap()))
    }

    fn midpoint_rule() -> QuadratureRule {
        QuadratureRule::new(Dim::Two, vec![0.5, 0.5], vec![1.0]).unwrap()
    }

    fn tensor_gauss_2x2() -> QuadratureRule {
        let (nodes, weights) = gauss_legendre_1d(2).unwrap();
        let mut coords = Vec::new();
        let mut w = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                coords.push(nodes[i]);
                coords.push(nodes[j]);
                w.push(weights[i] * weights[j]);
            }
        }
        QuadratureRule::new(Dim::Two, coords, w).unwrap()
    }

    #[test]
    fn constant_mode_error_is_one_minus_weight_sum() {
        let basis = product_basis(Dim::Two, 1);
        let rule = QuadratureRule::new(
            Dim::Two,
            vec![0.1, 0.2, 0.7, 0.9, 0.4, 0.4],
            vec![0.25, 0.45, 0.17],
        )
        .unwrap();
        let errs = integration_errors(&basis, &rule).unwrap();
        // weight-sum equivalence holds exactly, not just to tolerance
        assert_eq!(errs.values[0], 1.0 - rule.weight_sum());
    }

    #[test]
    fn two_point_gauss_exact_on_bilinear_product() {
        let basis = product_basis(Dim::Two, 1);
        let errs = integration_errors(&basis, &tensor_gauss_2x2()).unwrap();
        assert_eq!(errs.values.len(), 9);
        for (i, e) in errs.values.iter().enumerate() {
            assert!(e.abs() < 1e-15, "basis {i}: {e}");
        }
        let l = loss(&basis, &tensor_gauss_2x2()).unwrap();
        assert!(l.l_squared < 1e-28);
    }

    #[test]
    fn midpoint_rule_errors_and_loss() {
        let basis = product_basis(Dim::Two, 1);
        let errs = integration_errors(&basis, &midpoint_rule()).unwrap();
        let half_sqrt5 = 0.5 * 5.0_f64.sqrt();
        for (alpha, e) in basis.exponent_set().iter().zip(&errs.values) {
            let expect = match alpha.components() {
                [2, 0] | [0, 2] => half_sqrt5,
                [2, 2] => -1.25,
                _ => 0.0,
            };
            assert_abs_diff_eq!(*e, expect, epsilon = 1e-12);
        }
        let l = loss(&basis, &midpoint_rule()).unwrap();
        assert_abs_diff_eq!(l.l_squared, 4.0625, epsilon = 1e-12);
        assert_abs_diff_eq!(l.l, 2.0155644370746373, epsilon = 1e-12);
    }

    #[test]
    fn loss_zero_iff_all_errors_zero() {
        let basis = product_basis(Dim::Two, 1);
        let exact = tensor_gauss_2x2();
        let l = loss(&basis, &exact).unwrap();
        assert!(l.l_squared < 1e-28);
        let errs = integration_errors(&basis, &exact).unwrap();
        assert!(errs.max_abs() < 1e-15);

        let inexact = midpoint_rule();
        assert!(loss(&basis, &inexact).unwrap().l_squared > 0.0);
        assert!(integration_errors(&basis, &inexact).unwrap().max_abs() > 0.0);
    }

    #[test]
    fn gradient_zero_at_exact_rule() {
        let basis = product_basis(Dim::Two, 1);
        let grad = loss_gradient(&basis, &tensor_gauss_2x2()).unwrap();
        for g in grad {
            assert!(g.abs() < 1e-13, "{g}");
        }
    }

    #[test]
    fn gradient_constant_basis_scalar_case() {
        // basis {1}: L^2 = (1 - w)^2, dL^2/dw = -2(1 - w)
        let set = crate::polyspace::ExponentSet::from_indices(
            Dim::Two,
            1,
            vec![MultiIndex::new(Dim::Two, &[0, 0])],
        );
        let basis = SpaceBasis::new(set);
        let rule = QuadratureRule::new(Dim::Two, vec![0.3, 0.6], vec![0.25]).unwrap();
        let grad = loss_gradient(&basis, &rule).unwrap();
        assert_abs_diff_eq!(grad[2], -1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(grad[0], 0.0);
        assert_abs_diff_eq!(grad[1], 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let basis = product_basis(Dim::Two, 2);
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        let q = 9;
        let stride = 3;
        let params: Vec<f64> = (0..q * stride).map(|_| next()).collect();
        let rule = QuadratureRule::from_flat_params(Dim::Two, &params).unwrap();
        let grad = loss_gradient(&basis, &rule).unwrap();
        let h = 1e-6;
        for k in 0..params.len() {
            let mut plus = params.clone();
            plus[k] += h;
            let mut minus = params.clone();
            minus[k] -= h;
            let lp = loss(&basis, &QuadratureRule::from_flat_params(Dim::Two, &plus).unwrap())
                .unwrap()
                .l_squared;
            let lm = loss(&basis, &QuadratureRule::from_flat_params(Dim::Two, &minus).unwrap())
                .unwrap()
                .l_squared;
            let fd = (lp - lm) / (2.0 * h);
            let denom = fd.abs().max(grad[k].abs()).max(1e-12);
            assert!(
                ((grad[k] - fd) / denom).abs() < 1e-6,
                "param {k}: analytic {} vs fd {fd}",
                grad[k]
            );
        }
    }

    #[test]
    fn loss_permutation_invariant_exactly() {
        let basis = product_basis(Dim::Two, 2);
        let params: Vec<f64> = (0..8 * 3).map(|k| ((k * 37 + 11) % 97) as f64 / 97.0 + 0.01).collect();
        let rule = QuadratureRule::from_flat_params(Dim::Two, &params).unwrap();
        let l0 = loss(&basis, &rule).unwrap();
        let perm: Vec<usize> = vec![5, 2, 7, 0, 3, 6, 1, 4];
        let shuffled = rule.permuted(&perm).unwrap();
        let l1 = loss(&basis, &shuffled).unwrap();
        assert_eq!(l0.l_squared.to_bits(), l1.l_squared.to_bits());
        assert_eq!(l0.l.to_bits(), l1.l.to_bits());
    }

    #[test]
    fn gram_of_orthonormal_basis_is_identity() {
        let basis = product_basis(Dim::Two, 2);
        let m = gram_matrix(&basis);
        assert_eq!(m.size(), 22);
        assert_eq!(m.max_abs_diff_from_identity(), 0.0);
    }

    #[test]
    fn q_lower_bound_examples() {
        assert_eq!(q_lower_bound(Dim::Two, 3).unwrap(), 13);
        assert_eq!(q_lower_bound(Dim::Three, 4).unwrap(), 74);
        assert_eq!(q_lower_bound(Dim::Two, 10).unwrap(), 85);
        assert_eq!(q_lower_bound(Dim::Two, 1).unwrap(), 3);
        assert_eq!(q_lower_bound(Dim::Three, 2).unwrap(), 23);
    }

    #[test]
    fn savings_examples() {
        assert_abs_diff_eq!(savings(13, Dim::Two, 3), 0.1875);
        assert_abs_diff_eq!(savings(178, Dim::Three, 6), 1.0 - 178.0 / 343.0);
        assert_abs_diff_eq!(savings(gaussian_point_count(Dim::Two, 4), Dim::Two, 4), 0.0);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let basis = product_basis(Dim::Three, 3);
        let rule = midpoint_rule();
        assert!(integration_errors(&basis, &rule).is_err());
    }

    #[test]
    fn infeasible_rules_detected() {
        let ok = QuadratureRule::new(Dim::Two, vec![0.25, 0.5, 0.75, 0.5], vec![0.5, 0.5]).unwrap();
        assert!(ok.is_feasible());
        let weight_out = QuadratureRule::new(Dim::Two, vec![0.25, 0.5], vec![1.5]).unwrap();
        assert!(!weight_out.is_feasible());
        let coord_out = QuadratureRule::new(Dim::Two, vec![1.25, 0.5], vec![1.0]).unwrap();
        assert!(!coord_out.is_feasible());
        let bad_sum = QuadratureRule::new(Dim::Two, vec![0.25, 0.5, 0.75, 0.5], vec![0.5, 0.6]).unwrap();
        assert!(!bad_sum.is_feasible());
    }
}
