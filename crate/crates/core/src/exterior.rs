//! Coordinates on `⋀^k F^n`: k-subset index tables, wedge products,
//! Plücker vectors of subspaces, Hodge-dual linear forms and the
//! decomposability test.
//!
//! Coordinates are indexed by the k-subsets of `{0..n-1}` in lexicographic
//! order. That order is part of the file format and never changes.

use std::collections::HashMap;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Elem, FieldConfig, FieldTower, Level};
use crate::linalg::{self, SubspaceBasis, Vector};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// All k-subsets of `{0..n-1}` in lexicographic order, with inverse lookup.
#[derive(Debug)]
pub struct IndexTable {
    n: usize,
    k: usize,
    elems: Vec<u8>,
    masks: Vec<u64>,
    lookup: HashMap<u64, usize>,
    /// `faces[i*k + c]`: index in the (n, k-1) table of subset `i` with its
    /// `c`-th element removed.
    faces: Vec<u32>,
}

impl IndexTable {
    fn build(n: usize, k: usize) -> Self {
        assert!(n <= 64, "index tables support n <= 64");
        let mut elems = Vec::with_capacity(binomial(n, k) * k);
        if k <= n {
            let mut cur: Vec<usize> = (0..k).collect();
            loop {
                elems.extend(cur.iter().map(|&x| x as u8));
                // next combination in lexicographic order
                let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
                    break;
                };
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
            }
        }
        Self::from_elems(n, k, elems)
    }

    fn from_elems(n: usize, k: usize, elems: Vec<u8>) -> Self {
        let count = if k == 0 { 1 } else { elems.len() / k };
        let masks: Vec<u64> = (0..count)
            .map(|i| elems[i * k..(i + 1) * k].iter().fold(0u64, |m, &x| m | (1 << x)))
            .collect();
        let lookup = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let faces = if k == 0 {
            Vec::new()
        } else {
            let lower = IndexTable::shared(n, k - 1);
            let mut faces = Vec::with_capacity(count * k);
            for (i, &m) in masks.iter().enumerate() {
                for c in 0..k {
                    let drop = 1u64 << elems[i * k + c];
                    faces.push(lower.index_of_mask(m & !drop).unwrap() as u32);
                }
            }
            faces
        };
        IndexTable {
            n,
            k,
            elems,
            masks,
            lookup,
            faces,
        }
    }

    /// Process-wide shared table, consulting the disk cache when one is configured.
    pub fn shared(n: usize, k: usize) -> Arc<IndexTable> {
        static REGISTRY: OnceLock<Mutex<HashMap<(usize, usize), Arc<IndexTable>>>> = OnceLock::new();
        let reg = REGISTRY.get_or_init(Default::default);
        if let Some(t) = reg.lock().unwrap().get(&(n, k)) {
            return Arc::clone(t);
        }
        // built outside the lock: construction recurses into smaller tables
        let table = Arc::new(match cache_dir() {
            Some(dir) => load_or_build(&dir, n, k),
            None => IndexTable::build(n, k),
        });
        Arc::clone(reg.lock().unwrap().entry((n, k)).or_insert(table))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn len(&self) -> usize {
        self.masks.len()
    }
    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
    pub fn subset(&self, i: usize) -> &[u8] {
        &self.elems[i * self.k..(i + 1) * self.k]
    }
    pub fn mask(&self, i: usize) -> u64 {
        self.masks[i]
    }
    pub fn index_of_mask(&self, mask: u64) -> Option<usize> {
        self.lookup.get(&mask).copied()
    }
    pub fn index_of(&self, subset: &[usize]) -> Option<usize> {
        if subset.len() != self.k {
            return None;
        }
        let mask = subset.iter().fold(0u64, |m, &x| m | (1 << x));
        self.index_of_mask(mask)
    }
    fn face(&self, i: usize, c: usize) -> usize {
        self.faces[i * self.k + c] as usize
    }
}

// -- disk cache ----------------------------------------------------------------

static CACHE_DIR: Mutex<Option<PathBuf>> = Mutex::new(None);

/// Directory used to persist index tables; `None` disables the cache.
pub fn set_cache_dir(dir: Option<PathBuf>) {
    *CACHE_DIR.lock().unwrap() = dir;
}

fn cache_dir() -> Option<PathBuf> {
    CACHE_DIR.lock().unwrap().clone()
}

const CACHE_MAGIC: &[u8; 4] = b"FGIT";

fn cache_path(dir: &Path, n: usize, k: usize) -> PathBuf {
    dir.join(format!("index_{n}_{k}.bin"))
}

/// Loads a cached table if it passes validation, otherwise builds and stores it.
pub fn load_or_build(dir: &Path, n: usize, k: usize) -> IndexTable {
    let path = cache_path(dir, n, k);
    if let Some(elems) = read_cached(&path, n, k) {
        return IndexTable::from_elems(n, k, elems);
    }
    let table = IndexTable::build(n, k);
    // the cache is an optimization; failures to write are not errors
    let _ = write_cached(dir, &path, &table);
    table
}

fn read_cached(path: &Path, n: usize, k: usize) -> Option<Vec<u8>> {
    let mut buf = Vec::new();
    fs::File::open(path).ok()?.read_to_end(&mut buf).ok()?;
    if buf.len() < 16 || &buf[..4] != CACHE_MAGIC {
        return None;
    }
    let field = |i: usize| u32::from_le_bytes(buf[i..i + 4].try_into().unwrap()) as usize;
    let (fn_, fk, count) = (field(4), field(8), field(12));
    let elems = buf[16..].to_vec();
    if fn_ != n || fk != k || count != binomial(n, k) || elems.len() != count * k {
        return None;
    }
    // exactly the lexicographic list: strictly increasing inside each subset,
    // strictly increasing between subsets, all entries below n
    let mut prev: Option<&[u8]> = None;
    for s in elems.chunks(k.max(1)).take(if k == 0 { 0 } else { count }) {
        if s.iter().any(|&x| x as usize >= n) || s.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        if prev.is_some_and(|p| p >= s) {
            return None;
        }
        prev = Some(s);
    }
    Some(elems)
}

fn write_cached(dir: &Path, path: &Path, table: &IndexTable) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(CACHE_MAGIC)?;
        for x in [table.n, table.k, table.len()] {
            f.write_all(&(x as u32).to_le_bytes())?;
        }
        f.write_all(&table.elems)?;
    }
    fs::rename(tmp, path)
}

// -- Plücker vectors -----------------------------------------------------------

/// A coordinate vector in `⋀^k F^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    pub n: usize,
    pub k: usize,
    pub level: Level,
    pub coords: Vector,
}

impl PluckerVector {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }

    pub fn table(&self) -> Arc<IndexTable> {
        IndexTable::shared(self.n, self.k)
    }

    /// Scales so the first nonzero coordinate is 1.
    pub fn canonicalize(&mut self, field: &FieldTower) {
        field.normalize(&mut self.coords);
    }

    pub fn record(&self, field: &FieldTower) -> PluckerRecord {
        PluckerRecord {
            n: self.n,
            k: self.k,
            field: field.config(),
            coordinates: self.coords.iter().map(|&x| field.to_coeffs(x)).collect(),
        }
    }
}

/// JSON form of a [`PluckerVector`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PluckerRecord {
    pub n: usize,
    pub k: usize,
    pub field: FieldConfig,
    pub coordinates: Vec<Vec<u32>>,
}

/// `v_0 ∧ … ∧ v_{k-1}`, unnormalized. The result is zero exactly when the
/// inputs are linearly dependent.
///
/// Built row by row with Laplace expansion along the last row, so each
/// coordinate costs `k` multiplications given the previous level.
pub fn wedge(field: &FieldTower, vectors: &[Vector]) -> PluckerVector {
    let k = vectors.len();
    let n = vectors.first().map_or(0, |v| v.len());
    let mut prev = vec![Elem::ONE];
    for (j, v) in vectors.iter().enumerate() {
        let table = IndexTable::shared(n, j + 1);
        let mut cur = vec![Elem::ZERO; table.len()];
        for (i, slot) in cur.iter_mut().enumerate() {
            let s = table.subset(i);
            let mut acc = Elem::ZERO;
            for (c, &col) in s.iter().enumerate() {
                let x = v[col as usize];
                if x.is_zero() {
                    continue;
                }
                let minor = prev[table.face(i, c)];
                if minor.is_zero() {
                    continue;
                }
                let term = field.mul(x, minor);
                // cofactor sign (-1)^(j + c)
                acc = if (j + c) % 2 == 0 {
                    field.add(acc, term)
                } else {
                    field.sub(acc, term)
                };
            }
            *slot = acc;
        }
        prev = cur;
    }
    PluckerVector {
        n,
        k,
        level: Level::Top,
        coords: prev,
    }
}

/// Canonical Plücker vector of a `k`-dimensional subspace.
pub fn plucker(field: &FieldTower, w: &SubspaceBasis, k: usize) -> Result<PluckerVector> {
    if w.dim() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: w.dim(),
        });
    }
    let mut v = wedge(field, w.rows());
    v.n = w.ambient();
    v.level = w.level();
    v.canonicalize(field);
    Ok(v)
}

/// The form `x_1 ∧ … ∧ x_k ↦ det[x_1; …; x_k; c_1; …; c_{n-k}]` on `⋀^k F^n`.
///
/// The coefficient at `S` is `sign(S, S^c)` times the minor of `c` on the
/// complementary columns.
pub fn hodge_form(field: &FieldTower, c: &SubspaceBasis, k: usize) -> Result<Vector> {
    let n = c.ambient();
    if k > n || c.dim() != n - k {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(k),
            got: c.dim(),
        });
    }
    let minors = wedge(field, c.rows());
    let comp_table = IndexTable::shared(n, n - k);
    let table = IndexTable::shared(n, k);
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok((0..table.len())
        .map(|i| {
            let j = comp_table.index_of_mask(full & !table.mask(i)).unwrap();
            let m = minors.coords[j];
            let inversions: usize = table
                .subset(i)
                .iter()
                .enumerate()
                .map(|(pos, &s)| s as usize - pos)
                .sum();
            if inversions % 2 == 0 {
                m
            } else {
                field.neg(m)
            }
        })
        .collect())
}

pub fn eval_form(field: &FieldTower, form: &[Elem], v: &PluckerVector) -> Elem {
    field.dot(form, &v.coords)
}

/// Decomposability test: `v` is a pure wedge iff `{x : x ∧ v = 0}` has
/// dimension `k`. Returns that kernel as the witness subspace.
pub fn is_decomposable(field: &FieldTower, v: &PluckerVector) -> Option<SubspaceBasis> {
    let (n, k) = (v.n, v.k);
    if v.is_zero() {
        return None;
    }
    let table = IndexTable::shared(n, k);
    let upper = IndexTable::shared(n, k + 1);
    // row i: coordinates of e_i ∧ v in ⋀^{k+1}
    let rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut row = vec![Elem::ZERO; upper.len()];
            for (s, &x) in v.coords.iter().enumerate() {
                if x.is_zero() || table.mask(s) & (1 << i) != 0 {
                    continue;
                }
                let target = upper.index_of_mask(table.mask(s) | (1 << i)).unwrap();
                let before = table.subset(s).iter().filter(|&&e| (e as usize) < i).count();
                row[target] = if before % 2 == 0 { x } else { field.neg(x) };
            }
            row
        })
        .collect();
    let kernel = linalg::left_kernel(field, &rows, upper.len());
    (kernel.len() == k).then(|| SubspaceBasis::span(field, v.level, n, kernel))
}
