//! Desarguesian spreads and the variety `V_rt`.
//!
//! Two coordinate systems appear throughout:
//!
//! * **reduced** coordinates: `GF(q)^{rt}`, where position `i·t + j` holds the
//!   coefficient of `ξ^j` in the `i`-th coordinate of a vector of `GF(q^t)^r`;
//! * **block** coordinates: `GF(q^t)^{rt}`, split into `t` blocks
//!   `U_0, …, U_{t-1}` of `r` coordinates each. The Frobenius collineation
//!   `σ` shifts blocks cyclically and raises entries to the q-th power. A
//!   vector `y ∈ GF(q^t)^r` lifts to the σ-fixed vector `(y, y^q, …, y^{q^{t-1}})`.
//!
//! The GF(q)-linear bijection between reduced vectors and σ-fixed block
//! vectors is [`BlockDecomposition::lift_reduced`].

use std::collections::{HashMap, HashSet};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::exterior::{self, IndexTable};
use crate::gf::{Elem, FieldTower, Level};
use crate::linalg::{self, SubspaceBasis, Vector};

/// `V = U_0 ⊕ … ⊕ U_{t-1}` with `U_i` the coordinates `i·r .. (i+1)·r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub r: usize,
    pub t: usize,
}

impl BlockDecomposition {
    pub fn new(field: &FieldTower, r: usize) -> Self {
        BlockDecomposition {
            r,
            t: field.t() as usize,
        }
    }

    pub fn dim(&self) -> usize {
        self.r * self.t
    }

    pub fn block(&self, i: usize) -> SubspaceBasis {
        SubspaceBasis::coordinate(Level::Top, self.dim(), i * self.r..(i + 1) * self.r)
    }

    /// `σ(x^(0), …, x^(t-1)) = (x^(t-1)q, x^(0)q, …, x^(t-2)q)`.
    pub fn sigma(&self, field: &FieldTower, v: &[Elem]) -> Vector {
        let (r, t) = (self.r, self.t);
        let mut out = vec![Elem::ZERO; r * t];
        for b in 0..t {
            let src = (b + t - 1) % t;
            for i in 0..r {
                out[b * r + i] = field.frobenius(v[src * r + i], 1);
            }
        }
        out
    }

    pub fn sigma_subspace(&self, field: &FieldTower, w: &SubspaceBasis) -> SubspaceBasis {
        let rows = w.rows().iter().map(|v| self.sigma(field, v)).collect();
        SubspaceBasis::span(field, w.level(), w.ambient(), rows)
    }

    /// `y ↦ (y, y^q, …, y^{q^{t-1}})`.
    pub fn lift(&self, field: &FieldTower, y: &[Elem]) -> Vector {
        (0..self.t as u32)
            .flat_map(|i| y.iter().map(move |&x| field.frobenius(x, i)))
            .collect()
    }

    /// Reads a reduced vector as an element of `GF(q^t)^r`.
    pub fn to_top(&self, field: &FieldTower, v: &[Elem]) -> Vector {
        v.chunks(self.t).map(|c| field.combine(c)).collect()
    }

    pub fn to_reduced(&self, field: &FieldTower, y: &[Elem]) -> Vector {
        y.iter().flat_map(|&x| field.expand(x)).collect()
    }

    pub fn lift_reduced(&self, field: &FieldTower, v: &[Elem]) -> Vector {
        self.lift(field, &self.to_top(field, v))
    }

    /// `W* = ⟨W⟩_{GF(q^t)}` in block coordinates, for a GF(q)-subspace `W` in reduced coordinates.
    pub fn extend(&self, field: &FieldTower, w: &SubspaceBasis) -> SubspaceBasis {
        let rows = w.rows().iter().map(|v| self.lift_reduced(field, v)).collect();
        SubspaceBasis::span(field, Level::Top, self.dim(), rows)
    }

    /// `W* ∩ Fix(σ)`, returned in reduced coordinates as a GF(q)-subspace.
    ///
    /// Solves `lift(y) ∈ W*` for `y ∈ GF(q)^{rt}`: the residue of `lift(y)`
    /// modulo `W*` is GF(q)-linear in `y`, and expanding each residue entry over
    /// GF(q) gives an ordinary linear system.
    pub fn fixed_part(&self, field: &FieldTower, w_star: &SubspaceBasis) -> SubspaceBasis {
        let n = self.dim();
        let residues: Vec<Vector> = (0..n)
            .map(|k| {
                let mut v = self.lift_reduced(field, &linalg::unit(n, k));
                w_star.reduce(field, &mut v);
                v.iter().flat_map(|&x| field.expand(x)).collect()
            })
            .collect();
        let kernel = linalg::left_kernel(field, &residues, n * self.t);
        SubspaceBasis::span(field, Level::Sub, n, kernel)
    }
}

/// Result of [`sigma_fix_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaFix {
    pub fixed: bool,
    /// GF(q^t)-dimension of the subspace.
    pub dim: usize,
    /// GF(q)-dimension of its intersection with `Fix(σ)`.
    pub fixed_dim: usize,
}

/// Whether `σ(w) = w`. A σ-fixed subspace meets `Fix(σ)` in a GF(q)-space of
/// the same dimension; a violation of that is reported as an error.
pub fn sigma_fix_check(field: &FieldTower, blocks: &BlockDecomposition, w: &SubspaceBasis) -> Result<SigmaFix> {
    let fixed = blocks.sigma_subspace(field, w) == *w;
    let fixed_dim = blocks.fixed_part(field, w).dim();
    if fixed && fixed_dim != w.dim() {
        return Err(Error::Invariant(format!(
            "σ-fixed subspace of dimension {} meets Fix(σ) in dimension {fixed_dim}",
            w.dim()
        )));
    }
    Ok(SigmaFix {
        fixed,
        dim: w.dim(),
        fixed_dim,
    })
}

/// Normalized representatives of the points of `PG(n-1, |level|)`, grouped by
/// the position of the leading 1 and then in element order.
pub fn projective_points(field: &FieldTower, level: Level, n: usize, cap: u64) -> Result<Vec<Vector>> {
    let size = field.size_of(level) as u128;
    let count = (size.pow(n as u32) - 1) / (size - 1);
    if count > cap as u128 {
        return Err(Error::CapExceeded { requested: count, cap });
    }
    let scalars = field.elements(level, cap)?;
    let mut out = Vec::with_capacity(count as usize);
    for lead in 0..n {
        let free = n - lead - 1;
        let total = scalars.len().pow(free as u32);
        for code in 0..total {
            let mut v = vec![Elem::ZERO; n];
            v[lead] = Elem::ONE;
            let mut c = code;
            for slot in v[lead + 1..].iter_mut().rev() {
                *slot = scalars[c % scalars.len()];
                c /= scalars.len();
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// A point of `PG(r-1, q^t)` with its field-reduced `(t-1)`-space of `PG(rt-1, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpreadElement {
    pub point: Vector,
    pub reduced: SubspaceBasis,
}

/// Field reduction: `⟨x⟩ ↦ {λx : λ ∈ GF(q^t)}` as a GF(q)-subspace of `GF(q)^{rt}`.
pub fn field_reduce(field: &FieldTower, x: &[Elem]) -> Result<SpreadElement> {
    let mut point = x.to_vec();
    if !field.normalize(&mut point) {
        return Err(Error::ZeroVector);
    }
    let blocks = BlockDecomposition::new(field, point.len());
    let rows = field
        .xi_powers()
        .iter()
        .map(|&xi| {
            let scaled: Vector = point.iter().map(|&c| field.mul(xi, c)).collect();
            blocks.to_reduced(field, &scaled)
        })
        .collect();
    let reduced = SubspaceBasis::span(field, Level::Sub, blocks.dim(), rows);
    Ok(SpreadElement { point, reduced })
}

/// One spread element per point of `PG(r-1, q^t)`.
pub fn desarguesian_spread(field: &FieldTower, r: usize, cap: u64) -> Result<Vec<SpreadElement>> {
    projective_points(field, Level::Top, r, cap)?
        .iter()
        .map(|x| field_reduce(field, x))
        .collect()
}

/// Outcome of checking that a spread partitions `PG(rt-1, q)`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct PartitionCheck {
    pub elements: usize,
    pub expected_elements: u128,
    pub points_covered: usize,
    pub expected_points: u128,
    pub all_dimension_t: bool,
    pub disjoint: bool,
    pub covers: bool,
}

impl PartitionCheck {
    pub fn passed(&self) -> bool {
        self.elements as u128 == self.expected_elements && self.all_dimension_t && self.disjoint && self.covers
    }
}

pub fn verify_partition(field: &FieldTower, r: usize, spread: &[SpreadElement], cap: u64) -> Result<PartitionCheck> {
    let (q, t) = (field.q() as u128, field.t() as usize);
    let n = r * t;
    let expected_points = (q.pow(n as u32) - 1) / (q - 1);
    let expected_elements = (q.pow(n as u32) - 1) / (q.pow(t as u32) - 1);
    let mut seen: HashSet<Vector> = HashSet::new();
    let mut disjoint = true;
    for elt in spread {
        let mut own: HashSet<Vector> = HashSet::new();
        for mut v in elt.reduced.nonzero_vectors(field, cap)? {
            field.normalize(&mut v);
            own.insert(v);
        }
        for v in own {
            disjoint &= seen.insert(v);
        }
    }
    Ok(PartitionCheck {
        elements: spread.len(),
        expected_elements,
        points_covered: seen.len(),
        expected_points,
        all_dimension_t: spread.iter().all(|e| e.reduced.dim() == t),
        disjoint,
        covers: seen.len() as u128 == expected_points,
    })
}

/// `α(x)_f = Π_i x_{f(i)}^{q^i}` for `f : {0..t-1} → {0..r-1}`, with `f` in
/// lexicographic order of `(f(0), …, f(t-1))`. Not rescaled.
pub fn alpha_raw(field: &FieldTower, x: &[Elem]) -> Vector {
    let t = field.t();
    let mut acc = vec![Elem::ONE];
    for i in 0..t {
        let powered: Vector = x.iter().map(|&c| field.frobenius(c, i)).collect();
        acc = tensor(field, &acc, &powered);
    }
    acc
}

/// Kronecker product with the left factor's index most significant.
pub fn tensor(field: &FieldTower, a: &[Elem], b: &[Elem]) -> Vector {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for &x in a {
        out.extend(b.iter().map(|&y| field.mul(x, y)));
    }
    out
}

/// Canonically scaled [`alpha_raw`].
pub fn alpha(field: &FieldTower, x: &[Elem]) -> Result<Vector> {
    let mut v = alpha_raw(field, x);
    if !field.normalize(&mut v) {
        return Err(Error::ZeroVector);
    }
    Ok(v)
}

/// `(σ†T)_f = (T_g)^q` with `g(j) = f(j+1 mod t)`; the collineation induced by σ on
/// `U_0 ⊗ … ⊗ U_{t-1}`.
pub fn sigma_dagger(field: &FieldTower, r: usize, coords: &[Elem]) -> Vector {
    let t = field.t() as usize;
    (0..coords.len())
        .map(|idx| {
            let f = function_of_index(idx, r, t);
            let g: Vec<usize> = (0..t).map(|j| f[(j + 1) % t]).collect();
            field.frobenius(coords[index_of_function(&g, r)], 1)
        })
        .collect()
}

pub fn function_of_index(mut idx: usize, r: usize, t: usize) -> Vec<usize> {
    let mut f = vec![0; t];
    for slot in f.iter_mut().rev() {
        *slot = idx % r;
        idx /= r;
    }
    f
}

pub fn index_of_function(f: &[usize], r: usize) -> usize {
    f.iter().fold(0, |acc, &x| acc * r + x)
}

/// The subset `{i·r + f(i)}` of block coordinates picked by `f`.
fn block_subset(f: &[usize], r: usize) -> Vec<usize> {
    f.iter().enumerate().map(|(i, &x)| i * r + x).collect()
}

/// Canonical Plücker coordinates of the GF(q^t)-span of a field-reduced
/// element, read on the one-index-per-block subsets, together with whether
/// every other coordinate vanishes.
fn plucker_on_blocks(field: &FieldTower, elt: &SpreadElement) -> Result<(Vector, bool)> {
    let r = elt.point.len();
    let t = field.t() as usize;
    let blocks = BlockDecomposition::new(field, r);
    let span = blocks.extend(field, &elt.reduced);
    let pv = exterior::plucker(field, &span, t)?;
    let table = IndexTable::shared(blocks.dim(), t);
    let mut on_blocks = Vec::with_capacity(r.pow(t as u32));
    let mut hit = vec![false; table.len()];
    for idx in 0..r.pow(t as u32) {
        let s = block_subset(&function_of_index(idx, r, t), r);
        let j = table.index_of(&s).expect("block subset");
        hit[j] = true;
        on_blocks.push(pv.coords[j]);
    }
    let zero_elsewhere = pv.coords.iter().zip(&hit).all(|(c, &h)| h || c.is_zero());
    Ok((on_blocks, zero_elsewhere))
}

/// Per-(p, r, t) signs relating `ε_t` of a spread element to `α`, measured once
/// at the all-ones point.
pub fn commutation_signs(field: &FieldTower, r: usize) -> Result<Vec<i8>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize, u32), Vec<i8>>>> = OnceLock::new();
    let key = (field.p(), r, field.t());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&key) {
        return Ok(s.clone());
    }
    let ones = vec![Elem::ONE; r];
    let (mut on_blocks, _) = plucker_on_blocks(field, &field_reduce(field, &ones)?)?;
    field.normalize(&mut on_blocks);
    let minus = field.neg(Elem::ONE);
    let signs = on_blocks
        .iter()
        .map(|&c| match c {
            Elem::ONE => Ok(1),
            c if c == minus => Ok(-1),
            _ => Err(Error::Invariant("sign pattern entry is not ±1".into())),
        })
        .collect::<Result<Vec<i8>>>()?;
    cache.lock().unwrap().insert(key, signs.clone());
    Ok(signs)
}

/// Outcome of the diagram-commutation test for one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Commutation {
    pub zero_pattern: bool,
    pub matches_alpha: bool,
}

/// Compares `ε_t(field_reduce(x))` with `α(x)` up to the cached sign pattern.
pub fn check_commutation(field: &FieldTower, x: &[Elem]) -> Result<Commutation> {
    let r = x.len();
    let signs = commutation_signs(field, r)?;
    let elt = field_reduce(field, x)?;
    let (mut on_blocks, zero_pattern) = plucker_on_blocks(field, &elt)?;
    field.normalize(&mut on_blocks);
    let mut expected: Vector = alpha_raw(field, &elt.point)
        .into_iter()
        .zip(&signs)
        .map(|(a, &s)| if s < 0 { field.neg(a) } else { a })
        .collect();
    field.normalize(&mut expected);
    Ok(Commutation {
        zero_pattern,
        matches_alpha: on_blocks == expected,
    })
}

/// Every point of the reduced subspace, reshaped as the `r × t` matrix of its
/// expansion coefficients, has rank one.
pub fn rank_one_check(field: &FieldTower, elt: &SpreadElement, cap: u64) -> Result<bool> {
    let t = field.t() as usize;
    for v in elt.reduced.nonzero_vectors(field, cap)? {
        let rows: Vec<Vector> = v.chunks(t).map(|c| c.to_vec()).collect();
        if linalg::rank(field, &rows, t) != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The Segre-spread route: `⟨u, u^σ, …, u^{σ^{t-1}}⟩ ∩ Fix(σ)` for `u = x` placed
/// in `U_0`, read back in reduced coordinates.
pub fn segre_reduce(field: &FieldTower, x: &[Elem]) -> Result<SubspaceBasis> {
    if x.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroVector);
    }
    let blocks = BlockDecomposition::new(field, x.len());
    let mut u = vec![Elem::ZERO; blocks.dim()];
    u[..x.len()].copy_from_slice(x);
    let mut rows = Vec::with_capacity(blocks.t);
    for _ in 0..blocks.t {
        let next = blocks.sigma(field, &u);
        rows.push(std::mem::replace(&mut u, next));
    }
    let pi_star = SubspaceBasis::span(field, Level::Top, blocks.dim(), rows);
    Ok(blocks.fixed_part(field, &pi_star))
}

/// Rank of the stacked `α` images of all points of `PG(r-1, q^t)`.
pub fn alpha_span_rank(field: &FieldTower, r: usize, cap: u64) -> Result<usize> {
    let width = r.pow(field.t());
    let rows = projective_points(field, Level::Top, r, cap)?
        .into_iter()
        .map(|x| alpha_raw(field, &x));
    Ok(linalg::fast_rank(field, width, rows, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1 << 20;

    fn tower(q: u32, t: u32) -> FieldTower {
        FieldTower::from_q(q, t).unwrap()
    }

    #[test]
    fn pg1_4_reduces_to_five_lines() {
        let f = tower(2, 2);
        let spread = desarguesian_spread(&f, 2, CAP).unwrap();
        assert_eq!(spread.len(), 5);
        let check = verify_partition(&f, 2, &spread, CAP).unwrap();
        assert!(check.passed(), "{check:?}");
        assert_eq!(check.points_covered, 15);
    }

    #[test]
    fn reduction_ignores_the_representative() {
        let f = tower(3, 2);
        let x = vec![Elem(4), Elem(7)];
        let mu = Elem(5);
        let y: Vector = x.iter().map(|&c| f.mul(mu, c)).collect();
        assert_eq!(field_reduce(&f, &x).unwrap(), field_reduce(&f, &y).unwrap());
        assert!(matches!(
            field_reduce(&f, &[Elem::ZERO, Elem::ZERO]),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn first_coordinate_point() {
        let f = tower(2, 3);
        let elt = field_reduce(&f, &[Elem::ONE, Elem::ZERO]).unwrap();
        assert_eq!(elt.reduced, SubspaceBasis::coordinate(Level::Sub, 6, 0..3));
    }

    #[test]
    fn sigma_fixes_full_space_but_moves_blocks() {
        let f = tower(2, 3);
        let b = BlockDecomposition::new(&f, 2);
        let full = SubspaceBasis::full(Level::Top, 6);
        assert!(sigma_fix_check(&f, &b, &full).unwrap().fixed);
        let u0 = b.block(0);
        assert!(!sigma_fix_check(&f, &b, &u0).unwrap().fixed);
        assert_eq!(b.sigma_subspace(&f, &u0), b.block(1));
    }

    #[test]
    fn alpha_small_cases() {
        let f = tower(2, 2);
        let a = alpha(&f, &[Elem::ONE, Elem::ZERO, Elem::ZERO]).unwrap();
        assert_eq!(a[0], Elem::ONE);
        assert!(a[1..].iter().all(|x| x.is_zero()));

        let (x0, x1) = (Elem(2), Elem(3));
        let raw = alpha_raw(&f, &[x0, x1]);
        let q = |x| f.frobenius(x, 1);
        assert_eq!(
            raw,
            vec![f.mul(x0, q(x0)), f.mul(x0, q(x1)), f.mul(x1, q(x0)), f.mul(x1, q(x1))]
        );
    }

    #[test]
    fn subline_points_are_rank_one_but_others_are_not() {
        let f = tower(2, 2);
        for x in projective_points(&f, Level::Sub, 2, CAP).unwrap() {
            let elt = field_reduce(&f, &x).unwrap();
            assert!(rank_one_check(&f, &elt, CAP).unwrap());
        }
        let omega = f.generator();
        let elt = field_reduce(&f, &[Elem::ONE, omega]).unwrap();
        assert!(!rank_one_check(&f, &elt, CAP).unwrap());
    }

    #[test]
    fn segre_route_matches_field_reduction() {
        for &(q, t, r) in &[(2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 3)] {
            let f = tower(q, t);
            for x in projective_points(&f, Level::Top, r, CAP).unwrap() {
                assert_eq!(segre_reduce(&f, &x).unwrap(), field_reduce(&f, &x).unwrap().reduced);
            }
        }
    }

    #[test]
    fn alpha_points_are_sigma_dagger_fixed() {
        let f = tower(2, 3);
        for x in projective_points(&f, Level::Top, 2, CAP).unwrap() {
            let a = alpha(&f, &x).unwrap();
            let mut moved = sigma_dagger(&f, 2, &a);
            f.normalize(&mut moved);
            assert_eq!(moved, a);
        }
    }

    #[test]
    fn function_index_round_trip() {
        for idx in 0..81 {
            assert_eq!(index_of_function(&function_of_index(idx, 3, 4), 3), idx);
        }
    }

    #[test]
    fn plucker_image_matches_alpha() {
        for &(q, t, r) in &[(2, 2, 2), (3, 2, 2), (2, 3, 2), (2, 2, 3)] {
            let f = tower(q, t);
            let signs = commutation_signs(&f, r).unwrap();
            assert_eq!(signs.len(), r.pow(t));
            for x in projective_points(&f, Level::Top, r, CAP).unwrap() {
                let c = check_commutation(&f, &x).unwrap();
                assert!(c.zero_pattern && c.matches_alpha, "{x:?}");
            }
        }
    }

    #[test]
    fn alpha_spans_the_subgeometry() {
        let f = tower(2, 2);
        assert_eq!(alpha_span_rank(&f, 2, CAP).unwrap(), 4);
        let f = tower(2, 3);
        assert_eq!(alpha_span_rank(&f, 2, CAP).unwrap(), 8);
    }
}
