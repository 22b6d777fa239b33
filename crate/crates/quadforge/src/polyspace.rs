//! Trunk-space exponent sets and orthonormal shifted-Legendre bases.
//!
//! A *trunk* (serendipity) space of degree `p` on the unit quad/hex keeps all
//! monomials of total degree ≤ p plus a small block of higher-degree edge and
//! face monomials. Its monomial support is a downward-closed exponent set, so
//! the span is unchanged when the monomials are replaced by graded orthogonal
//! polynomials. This module builds those exponent sets, their Minkowski-square
//! product sets, and a basis of tensor products of shifted Legendre
//! polynomials, orthonormal on `[0,1]^d`, for which every exact integral is
//! known in closed form (1 for the constant mode, 0 otherwise).

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Spatial dimension of the reference domain (unit square or unit cube).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn try_from_usize(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::invalid(format!(
                "dimension must be 2 or 3, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.size())
    }
}

impl serde::Serialize for Dim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.size() as u64)
    }
}

impl<'de> serde::Deserialize<'de> for Dim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = u64::deserialize(d)?;
        Dim::try_from_usize(v as usize).map_err(serde::de::Error::custom)
    }
}

/// Exponent tuple of a single monomial, e.g. `(3, 1)` for `x^3 y`.
///
/// Unused trailing components are always zero, so derived equality and
/// hashing are consistent across dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: Dim,
    exps: [u16; 3],
}

impl MultiIndex {
    pub fn new(dim: Dim, components: &[usize]) -> Self {
        assert_eq!(components.len(), dim.size(), "component count must match dim");
        let mut exps = [0u16; 3];
        for (slot, &c) in exps.iter_mut().zip(components) {
            *slot = u16::try_from(c).expect("exponent out of range");
        }
        MultiIndex { dim, exps }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn components(&self) -> &[u16] {
        &self.exps[..self.dim.size()]
    }

    pub fn component(&self, axis: usize) -> usize {
        self.exps[axis] as usize
    }

    pub fn total_degree(&self) -> usize {
        self.components().iter().map(|&e| e as usize).sum()
    }

    pub fn max_component(&self) -> usize {
        self.components().iter().copied().max().unwrap_or(0) as usize
    }

    /// Componentwise sum, used to form Minkowski sums of exponent sets.
    pub fn sum(&self, other: &MultiIndex) -> MultiIndex {
        assert_eq!(self.dim, other.dim);
        let mut exps = [0u16; 3];
        for (i, slot) in exps.iter_mut().enumerate() {
            *slot = self.exps[i] + other.exps[i];
        }
        MultiIndex { dim: self.dim, exps }
    }

    /// True when `other` is componentwise less than or equal to `self`.
    pub fn dominates(&self, other: &MultiIndex) -> bool {
        self.dim == other.dim && self.exps.iter().zip(&other.exps).all(|(a, b)| a >= b)
    }
}

/// Graded ordering: by total degree first, then by descending exponent
/// tuple within a degree, so `(1,0)` precedes `(0,1)` and `(2,0)` precedes
/// `(1,1)`. This is the canonical order used for bases, error vectors and
/// rule files.
impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.components().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// An ordered set of multi-indices describing the monomial support of a
/// polynomial space. `degree` records the defining degree parameter `p` of
/// the space the set was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    dim: Dim,
    degree: usize,
    indices: Vec<MultiIndex>,
}

impl ExponentSet {
    /// Builds a set from arbitrary indices: sorts into canonical order and
    /// removes duplicates. Downward closure is *not* enforced here; the
    /// trunk and product constructors guarantee it and [`Self::is_downward_closed`]
    /// checks it.
    pub fn from_indices(dim: Dim, degree: usize, indices: Vec<MultiIndex>) -> Self {
        let mut indices = indices;
        indices.sort_unstable();
        indices.dedup();
        ExponentSet { dim, degree, indices }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MultiIndex> {
        self.indices.iter()
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn contains(&self, idx: &MultiIndex) -> bool {
        self.indices.binary_search(idx).is_ok()
    }

    pub fn max_total_degree(&self) -> usize {
        self.indices.iter().map(|a| a.total_degree()).max().unwrap_or(0)
    }

    pub fn max_component_degree(&self) -> usize {
        self.indices.iter().map(|a| a.max_component()).max().unwrap_or(0)
    }

    /// Exhaustively checks that every componentwise-smaller index of every
    /// member is itself a member.
    pub fn is_downward_closed(&self) -> bool {
        let members: HashSet<&MultiIndex> = self.indices.iter().collect();
        for idx in &self.indices {
            let comps = idx.components();
            let mut below = vec![0usize; comps.len()];
            loop {
                let candidate = MultiIndex::new(self.dim, &below);
                if !members.contains(&candidate) {
                    return false;
                }
                // advance the componentwise counter through the box [0, idx]
                let mut axis = 0;
                loop {
                    if axis == comps.len() {
                        break;
                    }
                    if below[axis] < comps[axis] as usize {
                        below[axis] += 1;
                        break;
                    }
                    below[axis] = 0;
                    axis += 1;
                }
                if axis == comps.len() {
                    break;
                }
            }
        }
        true
    }
}

fn simplex_indices(dim: Dim, p: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    match dim {
        Dim::Two => {
            for i in 0..=p {
                for j in 0..=(p - i) {
                    out.push(MultiIndex::new(dim, &[i, j]));
                }
            }
        }
        Dim::Three => {
            for i in 0..=p {
                for j in 0..=(p - i) {
                    for k in 0..=(p - i - j) {
                        out.push(MultiIndex::new(dim, &[i, j, k]));
                    }
                }
            }
        }
    }
    out
}

fn tensor_indices(dim: Dim, p: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    match dim {
        Dim::Two => {
            for i in 0..=p {
                for j in 0..=p {
                    out.push(MultiIndex::new(dim, &[i, j]));
                }
            }
        }
        Dim::Three => {
            for i in 0..=p {
                for j in 0..=p {
                    for k in 0..=p {
                        out.push(MultiIndex::new(dim, &[i, j, k]));
                    }
                }
            }
        }
    }
    out
}

fn push_perms3(out: &mut Vec<MultiIndex>, a: usize, b: usize, c: usize) {
    for perm in [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ] {
        out.push(MultiIndex::new(Dim::Three, &perm));
    }
}

/// Monomial support of the trunk (serendipity) space of degree `p`.
///
/// In 2D, for p ≥ 2, this is the total-degree simplex plus the two retained
/// edge monomials `x^p y` and `x y^p`. In 3D, for p ≥ 2, it is the simplex
/// plus the corner block `{0,1}^3`, the edge monomials `x^i y z` (i ≤ p) and
/// `x^p y`, and the face monomials `x^i y^j z` with i,j ≥ 2 and i + j = p,
/// in all coordinate orientations. At p = 1 the trunk space coincides with
/// the full tensor-product (multilinear) space.
///
/// The 3D construction restricts on every face to the 2D trunk set of the
/// same degree, is downward closed, and enumerates to
/// (p+1)(p+2)(p+3)/6 + 3p + 3 members for every p ≥ 3.
pub fn trunk_exponent_set(dim: Dim, p: usize) -> Result<ExponentSet> {
    if p < 1 {
        return Err(Error::invalid(format!("degree must be >= 1, got {p}")));
    }
    if p == 1 {
        return Ok(ExponentSet::from_indices(dim, p, tensor_indices(dim, 1)));
    }
    let mut indices = simplex_indices(dim, p);
    match dim {
        Dim::Two => {
            indices.push(MultiIndex::new(dim, &[p, 1]));
            indices.push(MultiIndex::new(dim, &[1, p]));
        }
        Dim::Three => {
            indices.extend(tensor_indices(dim, 1)); // corner block, adds (1,1,1) at p = 2
            for i in 2..=p {
                push_perms3(&mut indices, i, 1, 1);
            }
            for i in 2..p.saturating_sub(1) {
                let j = p - i;
                if j >= 2 {
                    push_perms3(&mut indices, i, j, 1);
                }
            }
            push_perms3(&mut indices, p, 1, 0);
        }
    }
    Ok(ExponentSet::from_indices(dim, p, indices))
}

/// Closed-form size of the trunk set: (p+1)(p+2)/2 + 2 in 2D (p ≥ 2) and
/// (p+1)(p+2)(p+3)/6 + 3p + 3 in 3D (p ≥ 3).
pub fn trunk_cardinality(dim: Dim, p: usize) -> Result<usize> {
    match dim {
        Dim::Two => {
            if p < 2 {
                return Err(Error::invalid(format!(
                    "2D trunk cardinality formula requires p >= 2, got {p}"
                )));
            }
            Ok((p + 1) * (p + 2) / 2 + 2)
        }
        Dim::Three => {
            if p < 3 {
                return Err(Error::invalid(format!(
                    "3D trunk cardinality formula requires p >= 3, got {p}"
                )));
            }
            Ok((p + 1) * (p + 2) * (p + 3) / 6 + 3 * p + 3)
        }
    }
}

/// Minkowski square `{α + β : α, β ∈ t}` of a trunk set: the monomial
/// support of the span of pairwise products of two copies of the space.
/// Downward closure of `t` makes this exactly the product-space support.
pub fn product_exponent_set(t: &ExponentSet) -> ExponentSet {
    let mut sums: HashSet<MultiIndex> = HashSet::with_capacity(t.len() * 4);
    for a in t.iter() {
        for b in t.iter() {
            sums.insert(a.sum(b));
        }
    }
    ExponentSet::from_indices(t.dim(), t.degree(), sums.into_iter().collect())
}

/// Closed-form size of the product set: 2p² + 5p + 4 in 2D (p ≥ 2) and
/// (4p³ + 24p² + 56p + 21)/3 in 3D (p ≥ 3).
pub fn product_cardinality(dim: Dim, p: usize) -> Result<usize> {
    match dim {
        Dim::Two => {
            if p < 2 {
                return Err(Error::invalid(format!(
                    "2D product cardinality formula requires p >= 2, got {p}"
                )));
            }
            Ok(2 * p * p + 5 * p + 4)
        }
        Dim::Three => {
            if p < 3 {
                return Err(Error::invalid(format!(
                    "3D product cardinality formula requires p >= 3, got {p}"
                )));
            }
            Ok((4 * p * p * p + 24 * p * p + 56 * p + 21) / 3)
        }
    }
}

/// Shifted Legendre polynomial on [0,1], normalised to unit L² norm:
/// `L̂_n(x) = sqrt(2n+1) · P_n(2x−1)`, evaluated by the three-term
/// recurrence.
pub fn shifted_legendre_eval(n: usize, x: f64) -> f64 {
    let u = 2.0 * x - 1.0;
    let norm = ((2 * n + 1) as f64).sqrt();
    norm * legendre_raw(n, u)
}

/// Derivative of [`shifted_legendre_eval`] with respect to `x`, including
/// the factor 2 from the [−1,1] → [0,1] shift.
pub fn shifted_legendre_deriv(n: usize, x: f64) -> f64 {
    let u = 2.0 * x - 1.0;
    let norm = ((2 * n + 1) as f64).sqrt();
    let (_, dp) = legendre_raw_pair(n, u);
    2.0 * norm * dp
}

fn legendre_raw(n: usize, u: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut prev, mut cur) = (1.0, u);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * u * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Value and derivative of the (unshifted) Legendre polynomial, via the
/// division-free derivative recurrence `P'_{k+1} = P'_{k−1} + (2k+1) P_k`,
/// which stays finite at the interval endpoints.
fn legendre_raw_pair(n: usize, u: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p_cur) = (1.0, u);
    let (mut d_prev, mut d_cur) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * u * p_cur - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p_cur;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    (p_cur, d_cur)
}

/// Fills `vals[k] = L̂_k(x)` and `ders[k] = dL̂_k/dx` for k = 0..vals.len(),
/// scaling by the precomputed norms `sqrt(2k+1)`. Shared by the loss
/// evaluator and the oracle so that tables are built once per point.
pub(crate) fn shifted_legendre_tables(x: f64, norms: &[f64], vals: &mut [f64], ders: &mut [f64]) {
    let n = norms.len();
    debug_assert!(vals.len() >= n && ders.len() >= n);
    let u = 2.0 * x - 1.0;
    vals[0] = 1.0;
    ders[0] = 0.0;
    if n == 1 {
        return;
    }
    vals[1] = u;
    ders[1] = 1.0;
    for k in 1..n - 1 {
        let kf = k as f64;
        vals[k + 1] = ((2.0 * kf + 1.0) * u * vals[k] - kf * vals[k - 1]) / (kf + 1.0);
        ders[k + 1] = ders[k - 1] + (2.0 * kf + 1.0) * vals[k];
    }
    for k in 0..n {
        vals[k] *= norms[k];
        ders[k] *= 2.0 * norms[k];
    }
}

pub(crate) fn legendre_norms(max_degree: usize) -> Vec<f64> {
    (0..=max_degree).map(|k| ((2 * k + 1) as f64).sqrt()).collect()
}

/// Orthonormal basis for the space spanned by an exponent set: the function
/// for multi-index α is the tensor product of `L̂_{α_d}` over the axes, in
/// the set's canonical order. The Gram matrix is the identity and the exact
/// integral over the unit domain is 1 for the constant mode, 0 otherwise.
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    exponents: ExponentSet,
    exact_integrals: Vec<f64>,
}

impl SpaceBasis {
    pub fn new(exponents: ExponentSet) -> Self {
        let exact_integrals = exponents
            .iter()
            .map(|a| if a.total_degree() == 0 { 1.0 } else { 0.0 })
            .collect();
        SpaceBasis { exponents, exact_integrals }
    }

    pub fn dim(&self) -> Dim {
        self.exponents.dim()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponent_set(&self) -> &ExponentSet {
        &self.exponents
    }

    pub fn exact_integrals(&self) -> &[f64] {
        &self.exact_integrals
    }

    pub fn max_component_degree(&self) -> usize {
        self.exponents.max_component_degree()
    }

    /// Evaluates basis function `i` at a point of the unit domain.
    pub fn eval(&self, i: usize, x: &[f64]) -> f64 {
        let alpha = &self.exponents.indices()[i];
        debug_assert_eq!(x.len(), self.dim().size());
        alpha
            .components()
            .iter()
            .zip(x)
            .map(|(&e, &xi)| shifted_legendre_eval(e as usize, xi))
            .product()
    }
}

/// Convenience constructor matching the basis-building operation name used
/// elsewhere in the crate's documentation.
pub fn build_basis(exponents: ExponentSet) -> SpaceBasis {
    SpaceBasis::new(exponents)
}
