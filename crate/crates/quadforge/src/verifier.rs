//! Independent correctness oracle.
//!
//! Everything here recomputes reference integrals by classical tensor-product
//! Gauss–Legendre quadrature instead of trusting the analytic
//! `exact_integrals` stored on a basis, so agreement between the two paths is
//! evidence rather than tautology. The module also validates the enumerated
//! trunk and product cardinalities against their closed forms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyspace::{
    product_cardinality, product_exponent_set, trunk_cardinality, trunk_exponent_set, Dim,
    ExponentSet, SpaceBasis,
};
use crate::quadrature::{Matrix, QuadratureRule, WEIGHT_SUM_TOL};

/// Default absolute tolerance on per-basis-function errors for a rule to be
/// classified exact. The optimiser's `L² < 1e−22` target implies a per
/// function RMS error around 1e−12; the 100× margin absorbs oracle
/// round-off.
pub const DEFAULT_VERIFY_TOLERANCE: f64 = 1e-10;

/// Classical Gauss–Legendre nodes and weights mapped from [−1,1] to [0,1].
/// Exact for polynomials of degree ≤ 2m−1. Nodes are found by Newton
/// iteration on the Legendre roots to ~1e−15.
pub fn gauss_legendre_1d(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m < 1 {
        return Err(Error::invalid("point count must be at least 1"));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for k in 0..m {
        // Tricomi-style initial guess for the k-th root of P_m
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_value_deriv(m, x);
            let step = p / d;
            x -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_value_deriv(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0,1]: node (x+1)/2, weight w/2
        nodes[m - 1 - k] = 0.5 * (x + 1.0);
        weights[m - 1 - k] = 0.5 * w;
    }
    Ok((nodes, weights))
}

fn legendre_value_deriv(n: usize, x: f64) -> (f64, f64) {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    // (1 - x^2) P'_n = n (P_{n-1} - x P_n); safe here because Gauss nodes
    // stay strictly inside (-1, 1)
    let d = n as f64 * (prev - x * cur) / (1.0 - x * x);
    (cur, d)
}

/// Tensor-product Gauss rule over `[0,1]^dim` with `m` points per axis,
/// materialised as flat point coordinates plus weights.
pub fn tensor_gauss(dim: usize, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim < 1 {
        return Err(Error::invalid("tensor rule needs dim >= 1"));
    }
    let (nodes, w1) = gauss_legendre_1d(m)?;
    let total = m.pow(dim as u32);
    let mut coords = Vec::with_capacity(total * dim);
    let mut weights = Vec::with_capacity(total);
    let mut counter = vec![0usize; dim];
    for _ in 0..total {
        let mut w = 1.0;
        for &c in &counter {
            coords.push(nodes[c]);
            w *= w1[c];
        }
        weights.push(w);
        for axis in (0..dim).rev() {
            counter[axis] += 1;
            if counter[axis] < m {
                break;
            }
            counter[axis] = 0;
        }
    }
    Ok((coords, weights))
}

/// Integrates `f` over `[0,1]^dim` with a `(p+1)`-point-per-axis tensor
/// Gauss rule, exact for per-axis polynomial degree up to `2p+1`. The caller
/// states the integrand's maximum per-axis degree; anything past the exact
/// range is rejected.
pub fn oracle_integral<F>(dim: usize, p: usize, max_per_axis_degree: usize, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if max_per_axis_degree > 2 * p + 1 {
        return Err(Error::invalid(format!(
            "integrand per-axis degree {max_per_axis_degree} exceeds the exact range {} of a {}-point rule",
            2 * p + 1,
            p + 1
        )));
    }
    let (coords, weights) = tensor_gauss(dim, p + 1)?;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(i, w)| w * f(&coords[i * dim..(i + 1) * dim]))
        .sum())
}

/// Gram matrix of a basis computed by tensor-Gauss integration with enough
/// points to integrate every pairwise product exactly (per-axis degree up to
/// twice the basis's maximum component degree).
pub fn gram_matrix_oracle(basis: &SpaceBasis) -> Matrix {
    let dim = basis.dim().size();
    let n = basis.len();
    let m = basis.max_component_degree() + 1;
    let (coords, weights) = tensor_gauss(dim, m).expect("tensor rule construction");
    // values of every basis function at every oracle point
    let npts = weights.len();
    let mut values = vec![0.0; n * npts];
    for (j, w_chunk) in coords.chunks_exact(dim).enumerate() {
        for i in 0..n {
            values[i * npts + j] = basis.eval(i, w_chunk);
        }
    }
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..npts {
                acc += weights[k] * values[i * npts + k] * values[j * npts + k];
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc;
        }
    }
    Matrix::from_rows(n, data)
}

/// Gram matrix of an arbitrary family of functions on `[0,1]^dim`, used for
/// the non-orthonormal reference cases in the tests.
pub fn gram_oracle_fns(
    dim: usize,
    points_per_axis: usize,
    fns: &[&dyn Fn(&[f64]) -> f64],
) -> Result<Matrix> {
    let (coords, weights) = tensor_gauss(dim, points_per_axis)?;
    let n = fns.len();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                let x = &coords[k * dim..(k + 1) * dim];
                acc += w * fns[i](x) * fns[j](x);
            }
            data[i * n + j] = acc;
            data[j * n + i] = acc;
        }
    }
    Ok(Matrix::from_rows(n, data))
}

/// Exactness classification of a verified rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Exact,
    Inexact,
    Infeasible,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Exact => write!(f, "exact"),
            Verdict::Inexact => write!(f, "inexact"),
            Verdict::Infeasible => write!(f, "infeasible"),
        }
    }
}

/// Outcome of re-verifying a rule against the Gauss oracle.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub dim: Dim,
    pub p: usize,
    pub q: usize,
    pub max_abs_error: f64,
    pub rms_error: f64,
    pub per_function_errors: Vec<f64>,
    pub weight_sum_deviation: f64,
    pub bounds_ok: bool,
    pub verdict: Verdict,
    pub oracle_points_per_dim: usize,
    pub tolerance: f64,
}

/// Recomputes every basis-function integration error of `rule` against the
/// tensor-Gauss oracle (not the stored analytic integrals), checks the
/// bounds and weight-sum side constraints, and classifies the verdict.
/// Infeasibility wins over exactness.
pub fn verify_rule(rule: &QuadratureRule, p: usize, tolerance: f64) -> Result<VerificationReport> {
    let dim = rule.dim();
    let basis = SpaceBasis::new(product_exponent_set(&trunk_exponent_set(dim, p)?));
    let d = dim.size();
    let n = basis.len();
    let m = p + 1;
    let (oracle_coords, oracle_weights) = tensor_gauss(d, m)?;

    let mut errors = Vec::with_capacity(n);
    for i in 0..n {
        let mut reference = 0.0;
        for (k, w) in oracle_weights.iter().enumerate() {
            reference += w * basis.eval(i, &oracle_coords[k * d..(k + 1) * d]);
        }
        let mut applied = 0.0;
        for j in 0..rule.num_points() {
            applied += rule.weights()[j] * basis.eval(i, rule.point(j));
        }
        errors.push(reference - applied);
    }

    let max_abs_error = errors.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let rms_error = (errors.iter().map(|e| e * e).sum::<f64>() / n as f64).sqrt();
    let interior = |v: f64| v > 0.0 && v < 1.0;
    let bounds_ok = rule.coords().iter().copied().all(interior)
        && rule.weights().iter().copied().all(interior);
    let weight_sum_deviation = (rule.weight_sum() - 1.0).abs();

    // Side constraints only decide the verdict once the errors vanish: a
    // rule that misintegrates is inexact whatever its bounds, while an
    // exact rule with an out-of-range weight or weight sum is infeasible.
    let verdict = if max_abs_error >= tolerance {
        Verdict::Inexact
    } else if !bounds_ok || weight_sum_deviation > WEIGHT_SUM_TOL {
        Verdict::Infeasible
    } else {
        Verdict::Exact
    };

    Ok(VerificationReport {
        dim,
        p,
        q: rule.num_points(),
        max_abs_error,
        rms_error,
        per_function_errors: errors,
        weight_sum_deviation,
        bounds_ok,
        verdict,
        oracle_points_per_dim: m,
        tolerance,
    })
}

/// One row of the cardinality validation table.
#[derive(Clone, Debug, Serialize)]
pub struct CardinalityRow {
    pub dim: Dim,
    pub p: usize,
    pub trunk_enumerated: usize,
    pub trunk_formula: usize,
    pub product_enumerated: usize,
    pub product_formula: usize,
    pub sandwich_lower: usize,
    pub sandwich_upper: usize,
    pub downward_closed: bool,
    pub pass: bool,
}

/// Validates a given trunk exponent set for degree `p`: enumerated sizes
/// against the closed forms, the strict sandwich bounds, and downward
/// closure of both the trunk set and its product.
pub fn check_space(dim: Dim, p: usize, trunk: &ExponentSet) -> Result<CardinalityRow> {
    let trunk_formula = trunk_cardinality(dim, p)?;
    let product_formula = product_cardinality(dim, p)?;
    let product = product_exponent_set(trunk);
    let sandwich_lower = trunk_cardinality(dim, 2 * p)?;
    let sandwich_upper = (2 * p + 1).pow(dim.size() as u32);
    let downward_closed = trunk.is_downward_closed() && product.is_downward_closed();
    let pass = trunk.len() == trunk_formula
        && product.len() == product_formula
        && sandwich_lower < product.len()
        && product.len() < sandwich_upper
        && downward_closed;
    Ok(CardinalityRow {
        dim,
        p,
        trunk_enumerated: trunk.len(),
        trunk_formula,
        product_enumerated: product.len(),
        product_formula,
        sandwich_lower,
        sandwich_upper,
        downward_closed,
        pass,
    })
}

/// Builds and validates every degree in the range, returning one row per
/// degree. Any failing row carries the offending `p`.
pub fn check_cardinalities(
    dim: Dim,
    p_range: std::ops::RangeInclusive<usize>,
) -> Result<Vec<CardinalityRow>> {
    p_range
        .map(|p| check_space(dim, p, &trunk_exponent_set(dim, p)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyspace::MultiIndex;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_1d_small_orders() {
        let (n1, w1) = gauss_legendre_1d(1).unwrap();
        assert_abs_diff_eq!(n1[0], 0.5);
        assert_abs_diff_eq!(w1[0], 1.0);

        let (n2, w2) = gauss_legendre_1d(2).unwrap();
        let off = 1.0 / (2.0 * 3.0_f64.sqrt());
        assert_abs_diff_eq!(n2[0], 0.5 - off, epsilon = 1e-15);
        assert_abs_diff_eq!(n2[1], 0.5 + off, epsilon = 1e-15);
        assert_abs_diff_eq!(w2[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w2[1], 0.5, epsilon = 1e-15);

        assert!(gauss_legendre_1d(0).is_err());
    }

    #[test]
    fn gauss_3_integrates_x5_exactly() {
        let (nodes, weights) = gauss_legendre_1d(3).unwrap();
        let integral: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(5))
            .sum();
        assert_abs_diff_eq!(integral, 1.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_weights_sum_to_one() {
        for m in 1..=25 {
            let (_, w) = gauss_legendre_1d(m).unwrap();
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn oracle_constant_and_orthogonality() {
        let one = oracle_integral(2, 3, 0, |_| 1.0).unwrap();
        assert_abs_diff_eq!(one, 1.0, epsilon = 1e-15);

        let basis = SpaceBasis::new(product_exponent_set(
            &trunk_exponent_set(Dim::Two, 3).unwrap(),
        ));
        for i in 0..basis.len() {
            let alpha = &basis.exponent_set().indices()[i];
            let deg = alpha.max_component();
            let value = oracle_integral(2, 3, deg, |x| basis.eval(i, x)).unwrap();
            let expected = basis.exact_integrals()[i];
            assert!((value - expected).abs() < 1e-13, "{alpha}: {value}");
        }
    }

    #[test]
    fn oracle_self_products_are_unit() {
        let basis = SpaceBasis::new(product_exponent_set(
            &trunk_exponent_set(Dim::Two, 2).unwrap(),
        ));
        let p = 2;
        for i in 0..basis.len() {
            let deg = basis.exponent_set().indices()[i].max_component();
            // v^2 has per-axis degree up to 2*deg <= 4p
            let value =
                oracle_integral(2, 2 * p, 2 * deg, |x| basis.eval(i, x).powi(2)).unwrap();
            assert!((value - 1.0).abs() < 1e-12, "i={i}: {value}");
        }
    }

    #[test]
    fn oracle_degree_overflow_rejected() {
        assert!(oracle_integral(2, 2, 6, |_| 1.0).is_err());
    }

    #[test]
    fn gram_oracle_identity() {
        let basis = SpaceBasis::new(product_exponent_set(
            &trunk_exponent_set(Dim::Two, 2).unwrap(),
        ));
        let m = gram_matrix_oracle(&basis);
        assert_eq!(m.size(), 22);
        assert!(m.max_abs_diff_from_identity() < 1e-12);
    }

    #[test]
    fn gram_oracle_hilbert_block() {
        let f0: &dyn Fn(&[f64]) -> f64 = &|_| 1.0;
        let f1: &dyn Fn(&[f64]) -> f64 = &|x| x[0];
        let m = gram_oracle_fns(1, 2, &[f0, f1]).unwrap();
        assert_abs_diff_eq!(m.at(0, 0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.at(0, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.at(1, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.at(1, 1), 1.0 / 3.0, epsilon = 1e-15);
    }

    fn tensor_rule(dim: Dim, m: usize) -> QuadratureRule {
        let (coords, weights) = tensor_gauss(dim.size(), m).unwrap();
        QuadratureRule::new(dim, coords, weights).unwrap()
    }

    #[test]
    fn gauss_baseline_verifies_exact() {
        for p in 1..=6 {
            let rule = tensor_rule(Dim::Two, p + 1);
            let report = verify_rule(&rule, p, DEFAULT_VERIFY_TOLERANCE).unwrap();
            assert_eq!(report.verdict, Verdict::Exact, "2D p={p}");
        }
        for p in 1..=4 {
            let rule = tensor_rule(Dim::Three, p + 1);
            let report = verify_rule(&rule, p, DEFAULT_VERIFY_TOLERANCE).unwrap();
            assert_eq!(report.verdict, Verdict::Exact, "3D p={p}");
        }
    }

    #[test]
    fn perturbed_rule_is_inexact() {
        let mut rule = tensor_rule(Dim::Two, 4);
        let mut weights = rule.weights().to_vec();
        weights[3] += 1e-6;
        rule = QuadratureRule::new(Dim::Two, rule.coords().to_vec(), weights).unwrap();
        let report = verify_rule(&rule, 3, DEFAULT_VERIFY_TOLERANCE).unwrap();
        assert_eq!(report.verdict, Verdict::Inexact);
    }

    #[test]
    fn out_of_bounds_weight_is_infeasible_even_when_exact() {
        // exact 2x2 Gauss rule plus a cancelling pair of points whose
        // weights leave (0,1): errors still vanish, feasibility does not
        let base = tensor_rule(Dim::Two, 2);
        let mut coords = base.coords().to_vec();
        let mut weights = base.weights().to_vec();
        coords.extend_from_slice(&[0.5, 0.5, 0.5, 0.5]);
        weights.extend_from_slice(&[1.5, -1.5]);
        let rule = QuadratureRule::new(Dim::Two, coords, weights).unwrap();
        let report = verify_rule(&rule, 1, DEFAULT_VERIFY_TOLERANCE).unwrap();
        assert!(report.max_abs_error < DEFAULT_VERIFY_TOLERANCE);
        assert!(!report.bounds_ok);
        assert_eq!(report.verdict, Verdict::Infeasible);
    }

    #[test]
    fn cardinality_tables_pass() {
        for row in check_cardinalities(Dim::Two, 2..=10).unwrap() {
            assert!(row.pass, "2D p={}: {row:?}", row.p);
        }
        for row in check_cardinalities(Dim::Three, 3..=8).unwrap() {
            assert!(row.pass, "3D p={}: {row:?}", row.p);
        }
    }

    #[test]
    fn corrupted_set_fails_with_p_identified() {
        let trunk = trunk_exponent_set(Dim::Two, 4).unwrap();
        let mut indices: Vec<MultiIndex> = trunk.iter().copied().collect();
        indices.retain(|a| a.components() != [2, 1]);
        let corrupted = ExponentSet::from_indices(Dim::Two, 4, indices);
        let row = check_space(Dim::Two, 4, &corrupted).unwrap();
        assert!(!row.pass);
        assert_eq!(row.p, 4);
        assert_ne!(row.trunk_enumerated, row.trunk_formula);
    }
}
