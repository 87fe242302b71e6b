//! Dense exact linear algebra over any level of a [`FieldTower`].
//!
//! Subspaces are always stored by their reduced row echelon basis, so two
//! [`SubspaceBasis`] values are equal exactly when they describe the same
//! subspace.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldTower, Level};

pub mod packed;

pub type Vector = Vec<Elem>;

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref_in_place(field: &FieldTower, rows: &mut Vec<Vector>, width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv_nz(rows[r][col]);
        field.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = field.neg(row[col]);
                field.axpy(row, f, &pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Rank of a list of vectors of common length `width`.
pub fn rank(field: &FieldTower, rows: &[Vector], width: usize) -> usize {
    let mut ech = Echelon::new(field, width);
    for v in rows {
        ech.insert(v.clone());
    }
    ech.rank()
}

/// Right kernel `{x : M x = 0}` of a matrix with `width` columns.
pub fn kernel(field: &FieldTower, matrix: &[Vector], width: usize) -> Vec<Vector> {
    let mut rows = matrix.to_vec();
    let pivots = rref_in_place(field, &mut rows, width);
    let mut is_pivot = vec![None; width];
    for (r, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(r);
    }
    (0..width)
        .filter(|&c| is_pivot[c].is_none())
        .map(|free| {
            let mut x = vec![Elem::ZERO; width];
            x[free] = Elem::ONE;
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = field.neg(rows[r][free]);
            }
            x
        })
        .collect()
}

/// Left kernel `{y : y M = 0}` of a matrix with `rows.len()` rows.
pub fn left_kernel(field: &FieldTower, matrix: &[Vector], width: usize) -> Vec<Vector> {
    kernel(field, &transpose(matrix, width), matrix.len())
}

pub fn transpose(matrix: &[Vector], width: usize) -> Vec<Vector> {
    (0..width).map(|c| matrix.iter().map(|row| row[c]).collect()).collect()
}

/// `v · M`.
pub fn vec_mat(field: &FieldTower, v: &[Elem], m: &[Vector], width: usize) -> Vector {
    let mut out = vec![Elem::ZERO; width];
    for (&c, row) in v.iter().zip(m) {
        field.axpy(&mut out, c, row);
    }
    out
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert(field: &FieldTower, m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let mut aug: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    let pivots = rref_in_place(field, &mut aug, 2 * n);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant of a square matrix (consumed).
pub fn det(field: &FieldTower, mut m: Vec<Vector>) -> Elem {
    let n = m.len();
    let mut acc = Elem::ONE;
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| !m[i][col].is_zero()) else {
            return Elem::ZERO;
        };
        if sel != col {
            m.swap(sel, col);
            acc = field.neg(acc);
        }
        let piv = m[col][col];
        acc = field.mul(acc, piv);
        let inv = field.inv_nz(piv);
        for r in col + 1..n {
            if !m[r][col].is_zero() {
                let f = field.neg(field.mul(m[r][col], inv));
                let (top, bottom) = m.split_at_mut(r);
                field.axpy(&mut bottom[0][col..], f, &top[col][col..]);
            }
        }
    }
    acc
}

/// Canonical basis of a subspace of `F^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    level: Level,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl SubspaceBasis {
    /// Row space of `rows`.
    pub fn span(field: &FieldTower, level: Level, ambient: usize, rows: Vec<Vector>) -> Self {
        let mut rows = rows;
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let pivots = rref_in_place(field, &mut rows, ambient);
        SubspaceBasis {
            level,
            ambient,
            rows,
            pivots,
        }
    }

    pub fn zero(level: Level, ambient: usize) -> Self {
        SubspaceBasis {
            level,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(level: Level, ambient: usize) -> Self {
        Self::coordinate(level, ambient, 0..ambient)
    }

    /// Span of the standard basis vectors with the given (increasing) indices.
    pub fn coordinate(level: Level, ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let pivots: Vec<usize> = indices.into_iter().collect();
        debug_assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        let rows = pivots.iter().map(|&i| unit(ambient, i)).collect();
        SubspaceBasis {
            level,
            ambient,
            rows,
            pivots,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    #[inline]
    pub fn ambient(&self) -> usize {
        self.ambient
    }
    #[inline]
    pub fn level(&self) -> Level {
        self.level
    }
    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn into_rows(self) -> Vec<Vector> {
        self.rows
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient || self.level != other.level {
            return Err(Error::IncompatibleSubspaces);
        }
        Ok(())
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, field: &FieldTower, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = field.neg(v[p]);
                field.axpy(v, f, row);
            }
        }
    }

    pub fn contains(&self, field: &FieldTower, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_subspace(&self, field: &FieldTower, other: &Self) -> bool {
        other.rows.iter().all(|r| self.contains(field, r))
    }

    pub fn join(&self, field: &FieldTower, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Self::span(field, self.level, self.ambient, rows))
    }

    /// Intersection via the Zassenhaus construction.
    pub fn meet(&self, field: &FieldTower, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let n = self.ambient;
        let mut rows: Vec<Vector> = self
            .rows
            .iter()
            .map(|r| r.iter().chain(r.iter()).copied().collect())
            .chain(
                other
                    .rows
                    .iter()
                    .map(|r| r.iter().copied().chain(std::iter::repeat(Elem::ZERO).take(n)).collect()),
            )
            .collect();
        let pivots = rref_in_place(field, &mut rows, 2 * n);
        let meet_rows = rows
            .into_iter()
            .zip(pivots)
            .filter(|(_, p)| *p >= n)
            .map(|(r, _)| r[n..].to_vec())
            .collect();
        let meet = Self::span(field, self.level, n, meet_rows);
        debug_assert_eq!(
            meet.dim() + self.join(field, other)?.dim(),
            self.dim() + other.dim(),
            "modular law"
        );
        Ok(meet)
    }

    /// Span of the standard basis vectors at the non-pivot columns.
    pub fn complement(&self) -> Self {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        Self::coordinate(self.level, self.ambient, (0..self.ambient).filter(|&i| !is_pivot[i]))
    }

    /// Relabels the level tag, e.g. to read a GF(q)-subspace as spanning a GF(q^t)-subspace.
    pub fn with_level(mut self, level: Level) -> Self {
        self.level = level;
        self
    }

    /// All nonzero vectors of the subspace; the coefficient field is `level`.
    pub fn nonzero_vectors(&self, field: &FieldTower, cap: u64) -> Result<Vec<Vector>> {
        let scalars = field.elements(self.level, cap)?;
        let size = (scalars.len() as u128).checked_pow(self.dim() as u32);
        match size {
            Some(s) if s <= cap as u128 => {}
            _ => {
                return Err(Error::CapExceeded {
                    requested: size.unwrap_or(u128::MAX),
                    cap,
                })
            }
        }
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.dim()];
        loop {
            // advance the mixed-radix counter; skip the all-zero start
            let mut i = 0;
            while i < idx.len() {
                idx[i] += 1;
                if idx[i] < scalars.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == idx.len() {
                break;
            }
            let mut v = vec![Elem::ZERO; self.ambient];
            for (row, &k) in self.rows.iter().zip(&idx) {
                field.axpy(&mut v, scalars[k], row);
            }
            out.push(v);
        }
        Ok(out)
    }
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Elem::ZERO; n];
    v[i] = Elem::ONE;
    v
}

/// Projection onto one summand of a direct sum along the other.
pub struct Projector {
    onto: SubspaceBasis,
    inverse: Vec<Vector>,
}

impl Projector {
    pub fn new(field: &FieldTower, onto: &SubspaceBasis, along: &SubspaceBasis) -> Result<Self> {
        onto.compatible(along)?;
        let n = onto.ambient();
        let not_direct = || Error::NotDirectSum {
            onto: onto.dim(),
            along: along.dim(),
            ambient: n,
        };
        if onto.dim() + along.dim() != n {
            return Err(not_direct());
        }
        let basis: Vec<Vector> = onto.rows().iter().chain(along.rows()).cloned().collect();
        let inverse = invert(field, &basis).ok_or_else(not_direct)?;
        Ok(Projector {
            onto: onto.clone(),
            inverse,
        })
    }

    /// Coordinates of the projection of `v` in the basis of `onto`.
    pub fn coordinates(&self, field: &FieldTower, v: &[Elem]) -> Vector {
        let mut c = vec_mat(field, v, &self.inverse, v.len());
        c.truncate(self.onto.dim());
        c
    }

    pub fn project(&self, field: &FieldTower, v: &[Elem]) -> Vector {
        let c = self.coordinates(field, v);
        vec_mat(field, &c, self.onto.rows(), v.len())
    }
}

/// One-shot projection of `v` onto `onto` along `along`.
pub fn project(field: &FieldTower, v: &[Elem], onto: &SubspaceBasis, along: &SubspaceBasis) -> Result<Vector> {
    Ok(Projector::new(field, onto, along)?.project(field, v))
}

/// Incrementally built echelon basis.
///
/// Every stored row has a leading 1 and zeros at the pivots of all earlier
/// rows, so a new vector is reduced by one pass in insertion order.
pub struct Echelon<'a> {
    field: &'a FieldTower,
    width: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a FieldTower, width: usize) -> Self {
        Echelon {
            field,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &mut [Elem]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = self.field.neg(v[p]);
                self.field.axpy(v, f, row);
            }
        }
    }

    /// Adds `v`; returns `true` if it was independent of the rows so far.
    pub fn insert(&mut self, mut v: Vector) -> bool {
        debug_assert_eq!(v.len(), self.width);
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = self.field.inv_nz(v[p]);
        self.field.scale(&mut v, inv);
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn into_subspace(self, level: Level) -> SubspaceBasis {
        SubspaceBasis::span(self.field, level, self.width, self.rows)
    }
}

/// Rank with the packed kernel when the field has characteristic two and
/// the generic kernel otherwise. Stops early once `stop_at` is reached.
pub fn fast_rank<I>(field: &FieldTower, width: usize, rows: I, stop_at: Option<usize>) -> usize
where
    I: IntoIterator<Item = Vector>,
{
    let limit = stop_at.unwrap_or(usize::MAX).min(width);
    if packed::supported(field) {
        let mut ech = packed::PackedEchelon::new(field, width);
        for v in rows {
            if ech.rank() >= limit {
                break;
            }
            ech.insert(&v);
        }
        ech.rank()
    } else {
        let mut ech = Echelon::new(field, width);
        for v in rows {
            if ech.rank() >= limit {
                break;
            }
            ech.insert(v);
        }
        ech.rank()
    }
}

pub fn random_vector<R: Rng + ?Sized>(field: &FieldTower, rng: &mut R, level: Level, n: usize) -> Vector {
    (0..n).map(|_| field.random(rng, level)).collect()
}

/// A uniformly random invertible matrix, by rejection.
pub fn random_invertible<R: Rng + ?Sized>(field: &FieldTower, rng: &mut R, level: Level, n: usize) -> Vec<Vector> {
    loop {
        let m: Vec<Vector> = (0..n).map(|_| random_vector(field, rng, level, n)).collect();
        if rank(field, &m, n) == n {
            return m;
        }
    }
}

/// Row space of `rows` in canonical form, eliminating with the packed kernel
/// when the field allows it.
pub fn fast_span<I>(field: &FieldTower, level: Level, width: usize, rows: I) -> SubspaceBasis
where
    I: IntoIterator<Item = Vector>,
{
    if packed::supported(field) {
        let mut ech = packed::PackedEchelon::new(field, width);
        for v in rows {
            if ech.rank() == width {
                break;
            }
            ech.insert(&v);
        }
        SubspaceBasis::span(field, level, width, ech.rows())
    } else {
        let mut ech = Echelon::new(field, width);
        for v in rows {
            if ech.rank() == width {
                break;
            }
            ech.insert(v);
        }
        ech.into_subspace(level)
    }
}

/// Number of `k`-subspaces of an `n`-space over a field with `size` elements.
pub fn gaussian_binomial(n: usize, k: usize, size: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= size.pow((n - i) as u32) - 1;
        den *= size.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Every `k`-subspace of `level^n`, one per reduced row echelon form, grouped
/// by pivot pattern in lexicographic order.
pub fn all_subspaces(field: &FieldTower, level: Level, n: usize, k: usize, cap: u64) -> Result<Vec<SubspaceBasis>> {
    let count = gaussian_binomial(n, k, field.size_of(level) as u128);
    if count > cap as u128 {
        return Err(Error::CapExceeded { requested: count, cap });
    }
    let scalars = field.elements(level, cap)?;
    let table = crate::exterior::IndexTable::shared(n, k);
    let mut out = Vec::with_capacity(count as usize);
    for s in 0..table.len() {
        let pivots: Vec<usize> = table.subset(s).iter().map(|&x| x as usize).collect();
        // free slots: row i, column c > pivot i that is not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
            .collect();
        let total = scalars.len().pow(free.len() as u32);
        for code in 0..total {
            let mut rows: Vec<Vector> = pivots.iter().map(|&p| unit(n, p)).collect();
            let mut c = code;
            for &(i, col) in &free {
                rows[i][col] = scalars[c % scalars.len()];
                c /= scalars.len();
            }
            out.push(SubspaceBasis {
                level,
                ambient: n,
                rows,
                pivots: pivots.clone(),
            });
        }
    }
    Ok(out)
}

/// A matrix in the JSON exchange format: entries are little-endian GF(p) coefficient lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub field: crate::gf::FieldConfig,
    pub rows: Vec<Vec<Vec<u32>>>,
}

impl MatrixRecord {
    pub fn from_rows(field: &FieldTower, rows: &[Vector]) -> Self {
        MatrixRecord {
            field: field.config(),
            rows: rows
                .iter()
                .map(|r| r.iter().map(|&x| field.to_coeffs(x)).collect())
                .collect(),
        }
    }

    pub fn to_rows(&self, field: &FieldTower) -> Result<Vec<Vector>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| field.from_coeffs(c)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn gf(p: u32, t: u32) -> FieldTower {
        FieldTower::new(p, 1, t).unwrap()
    }

    fn bits(s: &str) -> Vector {
        s.chars().map(|c| Elem(c.to_digit(10).unwrap())).collect()
    }

    #[test]
    fn identity_is_its_own_rref() {
        let f = gf(3, 1);
        let id = SubspaceBasis::full(Level::Top, 5);
        let again = SubspaceBasis::span(&f, Level::Top, 5, id.rows().to_vec());
        assert_eq!(id, again);
        assert_eq!(again.dim(), 5);
    }

    #[test]
    fn dependent_rows_over_gf2() {
        let f = gf(2, 1);
        let s = SubspaceBasis::span(&f, Level::Top, 4, vec![bits("1100"), bits("0110"), bits("1010")]);
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn rank_matches_span_enumeration_over_gf3() {
        let f = gf(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let rows: Vec<Vector> = (0..5).map(|_| random_vector(&f, &mut rng, Level::Top, 8)).collect();
            // brute force: enumerate all 3^5 combinations
            let mut span = HashSet::new();
            for code in 0..3u32.pow(5) {
                let mut v = vec![Elem::ZERO; 8];
                let mut c = code;
                for row in &rows {
                    f.axpy(&mut v, Elem(c % 3), row);
                    c /= 3;
                }
                span.insert(v);
            }
            let r = rank(&f, &rows, 8);
            assert_eq!(span.len(), 3usize.pow(r as u32));
        }
    }

    #[test]
    fn meet_and_join_of_coordinate_planes() {
        let f = gf(2, 1);
        let a = SubspaceBasis::coordinate(Level::Top, 4, [0, 1]);
        let b = SubspaceBasis::coordinate(Level::Top, 4, [1, 2]);
        assert_eq!(a.meet(&f, &b).unwrap(), SubspaceBasis::coordinate(Level::Top, 4, [1]));
        assert_eq!(a.join(&f, &b).unwrap().dim(), 3);
        assert_eq!(a.meet(&f, &a).unwrap(), a);
        assert_eq!(a.join(&f, &a).unwrap(), a);
    }

    #[test]
    fn meet_matches_point_set_intersection() {
        let f = gf(2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let ra: Vec<Vector> = (0..3).map(|_| random_vector(&f, &mut rng, Level::Top, 6)).collect();
            let rb: Vec<Vector> = (0..4).map(|_| random_vector(&f, &mut rng, Level::Top, 6)).collect();
            let a = SubspaceBasis::span(&f, Level::Top, 6, ra);
            let b = SubspaceBasis::span(&f, Level::Top, 6, rb);
            let pa: HashSet<Vector> = a.nonzero_vectors(&f, 1 << 20).unwrap().into_iter().collect();
            let pb: HashSet<Vector> = b.nonzero_vectors(&f, 1 << 20).unwrap().into_iter().collect();
            let common: HashSet<Vector> = pa.intersection(&pb).cloned().collect();
            let m = a.meet(&f, &b).unwrap();
            let pm: HashSet<Vector> = m.nonzero_vectors(&f, 1 << 20).unwrap().into_iter().collect();
            assert_eq!(common, pm);
        }
    }

    #[test]
    fn complement_extends_pivots() {
        let f = gf(2, 1);
        let w = SubspaceBasis::coordinate(Level::Top, 4, [0, 1]);
        assert_eq!(w.complement(), SubspaceBasis::coordinate(Level::Top, 4, [2, 3]));
        assert_eq!(
            SubspaceBasis::zero(Level::Top, 4).complement(),
            SubspaceBasis::full(Level::Top, 4)
        );
        let s = SubspaceBasis::span(&f, Level::Top, 4, vec![bits("1100"), bits("0011")]);
        let c = s.complement();
        assert_eq!(s.meet(&f, &c).unwrap().dim(), 0);
        assert_eq!(s.join(&f, &c).unwrap().dim(), 4);
    }

    #[test]
    fn projection_fixes_onto_and_kills_along() {
        let f = gf(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let onto = SubspaceBasis::span(
            &f,
            Level::Top,
            5,
            (0..2).map(|_| random_vector(&f, &mut rng, Level::Top, 5)).collect(),
        );
        let along = onto.complement();
        let pr = Projector::new(&f, &onto, &along).unwrap();
        for r in onto.rows() {
            assert_eq!(&pr.project(&f, r), r);
        }
        for r in along.rows() {
            assert!(pr.project(&f, r).iter().all(|x| x.is_zero()));
        }
        let v = random_vector(&f, &mut rng, Level::Top, 5);
        let pv = pr.project(&f, &v);
        assert_eq!(pr.project(&f, &pv), pv);
        let rest: Vector = v.iter().zip(&pv).map(|(&a, &b)| f.sub(a, b)).collect();
        assert!(along.contains(&f, &rest));
    }

    #[test]
    fn projection_requires_direct_sum() {
        let f = gf(2, 1);
        let a = SubspaceBasis::coordinate(Level::Top, 3, [0, 1]);
        let b = SubspaceBasis::coordinate(Level::Top, 3, [1]);
        assert!(matches!(Projector::new(&f, &a, &b), Err(Error::NotDirectSum { .. })));
        let c = SubspaceBasis::coordinate(Level::Top, 3, [0, 1, 2]);
        assert!(Projector::new(&f, &a, &c).is_err());
    }

    #[test]
    fn determinant_and_inverse() {
        let f = gf(5, 1);
        let m = vec![
            vec![Elem(1), Elem(2), Elem(0)],
            vec![Elem(3), Elem(4), Elem(1)],
            vec![Elem(0), Elem(1), Elem(1)],
        ];
        // 1*(4-1) - 2*(3-0) + 0 = -3 = 2 mod 5
        assert_eq!(det(&f, m.clone()), Elem(2));
        let inv = invert(&f, &m).unwrap();
        for (i, row) in m.iter().enumerate() {
            let prod = vec_mat(&f, row, &inv, 3);
            assert_eq!(prod, unit(3, i));
        }
    }

    #[test]
    fn kernel_is_annihilated() {
        let f = gf(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m: Vec<Vector> = (0..3).map(|_| random_vector(&f, &mut rng, Level::Top, 7)).collect();
        let k = kernel(&f, &m, 7);
        assert_eq!(k.len() + rank(&f, &m, 7), 7);
        for x in &k {
            for row in &m {
                assert!(f.dot(row, x).is_zero());
            }
        }
    }
}
