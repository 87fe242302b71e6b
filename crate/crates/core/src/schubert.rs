//! Linear equations of Schubert varieties and of linear sets on `V_rt`.
//!
//! Three routes compute the number of independent linear equations cutting
//! the image of a linear set `Λ` on `V_rt`:
//!
//! * **span**: the rank `dim_S` of the wedges `u_0 ∧ … ∧ u_{t-1}`, `u_i ∈ Ū_i`,
//!   inside `⋀^t W♮`. This is the route of record.
//! * **minors**: the `t × t` minors of the matrix of Frobenius-twisted trace
//!   equations, expanded over the monomials `Π_i x_{f(i)}^{q^i}`.
//! * **points**: the corank of the `α`-images of `Λ`, both evaluated at the
//!   rational points and over the algebraic closure (symbolic GF(q)-parameters).

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{self, binomial, IndexTable};
use crate::geometry::{self, BlockDecomposition};
use crate::gf::{Elem, FieldTower, Level};
use crate::linalg::{self, Projector, SubspaceBasis, Vector};
use crate::linset::LinearSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    HodgeDual,
    Minor,
    PointEvaluation,
    DecomposableSpanAnnihilator,
}

/// A space of linear forms, stored as the row space of their coefficient vectors.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub provenance: Provenance,
    pub basis: SubspaceBasis,
    /// Set when the space is trivially zero, with the reason.
    pub note: Option<String>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn ambient(&self) -> usize {
        self.basis.ambient()
    }
}

/// The forms on `⋀^k F^n` vanishing on every `k`-space that meets `a1`.
///
/// Spanned by the Hodge duals of the `(n−k)`-spaces through `a1`; completions
/// `a1 + ⟨e_s : s ∈ S⟩` over `(n−k−h)`-sets `S` of non-pivot columns of `a1`
/// are tried in lexicographic order until the rank reaches `binom(n−h, k)`.
pub fn omega_forms(field: &FieldTower, a1: &SubspaceBasis, k: usize) -> Result<FormSpace> {
    let n = a1.ambient();
    let h = a1.dim();
    let width = binomial(n, k);
    if k > n {
        return Err(Error::DimensionMismatch { expected: n, got: k });
    }
    if h > n - k {
        return Ok(FormSpace {
            provenance: Provenance::HodgeDual,
            basis: SubspaceBasis::zero(a1.level(), width),
            note: Some(format!(
                "dim A_1 = {h} exceeds n−k = {}: every k-space meets A_1 and no nonzero form vanishes on all of them",
                n - k
            )),
        });
    }
    let target = binomial(n - h, k);
    let free: Vec<usize> = a1.complement().pivots().to_vec();
    let choose = n - k - h;
    let subsets = IndexTable::shared(free.len(), choose);
    let mut ech = linalg::Echelon::new(field, width);
    for s in 0..subsets.len() {
        if ech.rank() == target {
            break;
        }
        let mut rows = a1.rows().to_vec();
        rows.extend(subsets.subset(s).iter().map(|&i| linalg::unit(n, free[i as usize])));
        let c = SubspaceBasis::span(field, a1.level(), n, rows);
        ech.insert(exterior::hodge_form(field, &c, k)?);
    }
    Ok(FormSpace {
        provenance: Provenance::HodgeDual,
        basis: ech.into_subspace(a1.level()),
        note: None,
    })
}

/// The forms on `⋀^k F^n` vanishing on a list of points, as a left kernel.
pub fn annihilator(field: &FieldTower, width: usize, points: &[Vector], provenance: Provenance) -> FormSpace {
    let span = linalg::fast_span(field, Level::Top, width, points.iter().cloned());
    let kernel = linalg::kernel(field, span.rows(), width);
    FormSpace {
        provenance,
        basis: SubspaceBasis::span(field, Level::Top, width, kernel),
        note: None,
    }
}

/// Coefficient rows `a_j ∈ GF(q^t)^r` with `W = {x : Tr(Σ_i a_{ji} x_i) = 0 ∀j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEquations {
    pub rows: Vec<Vector>,
}

/// Builds the trace equations of `W` (reduced coordinates): the GF(q)-dual of `W`
/// pulled back through the Gram matrix `Tr(ξ^{j+l})` of the trace form.
pub fn trace_equations(field: &FieldTower, blocks: &BlockDecomposition, w: &SubspaceBasis) -> Result<TraceEquations> {
    let (r, t) = (blocks.r, blocks.t);
    let n = r * t;
    let dual = SubspaceBasis::span(field, Level::Sub, n, linalg::kernel(field, w.rows(), n));
    let xi = field.xi_powers();
    let gram: Vec<Vector> = (0..t)
        .map(|j| (0..t).map(|l| field.trace(field.mul(xi[j], xi[l]))).collect())
        .collect();
    let gram_inv = linalg::invert(field, &gram).ok_or_else(|| Error::Invariant("trace form is degenerate".into()))?;
    let rows = dual
        .rows()
        .iter()
        .map(|k| {
            (0..r)
                .map(|i| {
                    // T is symmetric, so a_i = T^{-1} k_i is also k_i · T^{-1}
                    let a = linalg::vec_mat(field, &k[i * t..(i + 1) * t], &gram_inv, t);
                    field.combine(&a)
                })
                .collect()
        })
        .collect();
    Ok(TraceEquations { rows })
}

impl TraceEquations {
    /// `Tr(Σ_i a_{ji} x_i)` for every equation.
    pub fn evaluate(&self, field: &FieldTower, x: &[Elem]) -> Vector {
        self.rows.iter().map(|a| field.trace(field.dot(a, x))).collect()
    }

    /// The GF(q)-solution space in reduced coordinates, by direct trace evaluation.
    pub fn solve(&self, field: &FieldTower, blocks: &BlockDecomposition) -> SubspaceBasis {
        let n = blocks.dim();
        let matrix: Vec<Vector> = (0..n)
            .map(|k| self.evaluate(field, &blocks.to_top(field, &linalg::unit(n, k))))
            .collect();
        let kernel = linalg::left_kernel(field, &matrix, self.rows.len());
        SubspaceBasis::span(field, Level::Sub, n, kernel)
    }
}

/// The `t × t` minors of `M = [(Σ_k a_{jk} x_k)^{q^i}]_{j,i}`, each expanded over the
/// `α`-monomials `m_f = Π_i x_{f(i)}^{q^i}`: the coefficient at `f` is
/// `det[a_{J_l, f(i)}^{q^i}]_{l,i}`. One vector per `t`-subset `J` of rows.
pub fn minor_vectors(field: &FieldTower, r: usize, eqs: &TraceEquations) -> Vec<Vector> {
    let t = field.t() as usize;
    let n = eqs.rows.len();
    if n < t {
        return Vec::new();
    }
    // powered[j][i] = (a_{j,k}^{q^i})_k
    let powered: Vec<Vec<Vector>> = eqs
        .rows
        .iter()
        .map(|a| {
            (0..t as u32)
                .map(|i| a.iter().map(|&x| field.frobenius(x, i)).collect())
                .collect()
        })
        .collect();
    let subsets = IndexTable::shared(n, t);
    (0..subsets.len())
        .map(|s| {
            let rows: Vec<usize> = subsets.subset(s).iter().map(|&j| j as usize).collect();
            antisymmetrized_tensor(field, r, t, |l, i| &powered[rows[l]][i])
        })
        .collect()
}

/// `Σ_π sgn(π) ⊗_i v(π(i), i)` over permutations `π` of `0..t`, with the
/// tensor index of slot 0 most significant. Computed slot by slot, keeping one
/// partial tensor per set of already used `l`.
fn antisymmetrized_tensor<'a, F>(field: &FieldTower, r: usize, t: usize, v: F) -> Vector
where
    F: Fn(usize, usize) -> &'a Vector,
{
    let mut layer: BTreeMap<u32, Vector> = BTreeMap::from([(0, vec![Elem::ONE])]);
    for i in 0..t {
        let mut next: BTreeMap<u32, Vector> = BTreeMap::new();
        for (&used, partial) in &layer {
            for l in (0..t).filter(|l| used & (1 << l) == 0) {
                // sign of placing l after the already used entries: count used entries above l
                let above = (used >> (l + 1)).count_ones();
                let mut piece = geometry::tensor(field, partial, v(l, i));
                if above % 2 == 1 {
                    piece.iter_mut().for_each(|x| *x = field.neg(*x));
                }
                let slot = next
                    .entry(used | (1 << l))
                    .or_insert_with(|| vec![Elem::ZERO; partial.len() * r]);
                for (d, s) in slot.iter_mut().zip(&piece) {
                    *d = field.add(*d, *s);
                }
            }
        }
        layer = next;
    }
    layer.into_values().next().unwrap_or_default()
}

/// Ranks of the `α`-images of a linear set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct PointRoute {
    pub points: usize,
    /// Rank of `α(P)` over the rational points `P ∈ Λ`.
    pub literal_rank: usize,
    pub literal_deficit: usize,
    /// Number of degree-`t` monomials in the `m+1` GF(q)-parameters.
    pub generic_rows: usize,
    /// Rank of the coefficient vectors of `α(Σ_j w_j y_j)` as a polynomial in
    /// the parameters `w_j` (each satisfying `w_j^q = w_j`).
    pub generic_rank: usize,
    /// `r^t − generic_rank`: the equations vanishing on the image over the
    /// algebraic closure.
    pub deficit: usize,
}

/// Stacks `α(P)` for every point of `Λ` and, separately, the coefficient
/// vectors of the `α`-parametrization in the GF(q)-coordinates of `W`.
pub fn point_evaluation_route(set: &LinearSet, cap: u64) -> Result<PointRoute> {
    let field = set.field();
    let (r, t) = (set.r(), set.t());
    let width = r.pow(t as u32);
    let census = set.points_and_weights(cap)?;
    let literal_rank = linalg::fast_rank(
        field,
        width,
        census.points.iter().map(|p| geometry::alpha_raw(field, &p.point)),
        None,
    );
    let blocks = set.blocks();
    let ys: Vec<Vector> = set.w().rows().iter().map(|v| blocks.to_top(field, v)).collect();
    let rows = generic_alpha_rows(field, &ys, cap)?;
    let generic_rows = rows.len();
    let generic_rank = linalg::fast_rank(field, width, rows, None);
    Ok(PointRoute {
        points: census.points.len(),
        literal_rank,
        literal_deficit: width - literal_rank,
        generic_rows,
        generic_rank,
        deficit: width - generic_rank,
    })
}

/// For `x = Σ_j w_j y_j` with GF(q)-valued parameters, `x_k^{q^i} = Σ_j w_j y_{j,k}^{q^i}`,
/// so `α(x)` is a form of degree `t` in `w`. Returns its coefficient vectors,
/// one per monomial (multiset of `t` parameter indices).
pub fn generic_alpha_rows(field: &FieldTower, ys: &[Vector], cap: u64) -> Result<Vec<Vector>> {
    let t = field.t() as usize;
    let k = ys.len();
    let r = ys.first().map_or(0, |y| y.len());
    let tuples = (k as u128).pow(t as u32);
    if tuples * (r as u128).pow(t as u32) > cap as u128 * 64 {
        return Err(Error::CapExceeded { requested: tuples, cap });
    }
    let twisted: Vec<Vec<Vector>> = ys
        .iter()
        .map(|y| {
            (0..t as u32)
                .map(|i| y.iter().map(|&c| field.frobenius(c, i)).collect())
                .collect()
        })
        .collect();
    let mut rows: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
    let mut idx = vec![0usize; t];
    for _ in 0..tuples {
        let mut acc = vec![Elem::ONE];
        for (i, &j) in idx.iter().enumerate() {
            acc = geometry::tensor(field, &acc, &twisted[j][i]);
        }
        let mut key = idx.clone();
        key.sort_unstable();
        let row = rows.entry(key).or_insert_with(|| vec![Elem::ZERO; acc.len()]);
        for (d, s) in row.iter_mut().zip(&acc) {
            *d = field.add(*d, *s);
        }
        for slot in idx.iter_mut().rev() {
            *slot += 1;
            if *slot < k {
                break;
            }
            *slot = 0;
        }
    }
    Ok(rows.into_values().collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Routes {
    pub minors: bool,
    pub points: bool,
}

impl Default for Routes {
    fn default() -> Self {
        Routes {
            minors: true,
            points: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CodimOptions {
    pub routes: Routes,
    /// Randomized repetitions of `dim_S` (random complement and/or change of basis).
    pub complement_trials: usize,
    pub seed: u64,
    /// Cap on enumerations (vectors of `W`, points).
    pub cap: u64,
    /// Cap on the dimension of any dual space handled (`binom(rt−m−1, t)`, `r^t`).
    pub max_dual_dim: u64,
    pub timings: bool,
}

impl Default for CodimOptions {
    fn default() -> Self {
        CodimOptions {
            routes: Routes::default(),
            complement_trials: 3,
            seed: 0,
            cap: crate::gf::DEFAULT_ENUMERATION_CAP,
            max_dual_dim: 1 << 16,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct PairDim {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct Trial {
    pub random_complement: bool,
    pub basis_change: bool,
    pub dim_s: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct MinorRoute {
    pub equations: usize,
    pub round_trip: bool,
    pub minors: usize,
    pub rank: usize,
    pub sampled_points: usize,
    pub vanish_on_samples: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct InvariantCheck {
    pub name: String,
    pub passed: bool,
    /// Findings (cross-route comparisons) are reported but do not fail a run.
    pub asserted: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct CodimReport {
    pub q: u32,
    pub r: usize,
    pub t: usize,
    pub m: usize,
    pub h: usize,
    pub c: usize,
    pub h_per_block: Vec<usize>,
    pub c_per_block: Vec<usize>,
    /// `rt − m − 1 = dim W♮`.
    pub complement_dim: usize,
    /// `binom(rt−m−1, t)`.
    pub bound: usize,
    /// `m+1 > rt − t − c`.
    pub injective: bool,
    /// Route of record: rank of the decomposable wedges over the `Ū_i`.
    pub dim_s: usize,
    /// Codimension in `⋀^t W♮` of `F_0 + … + F_{t-1}`, where `F_i` is the space of
    /// forms vanishing on the `t`-spaces meeting `Ū_i`. Each `F_i` annihilates
    /// the decomposable span, so this is at least `dim_S`.
    pub schubert_sum_codim: usize,
    /// `dim(Ū_i ∩ Ū_j)` for `i < j`.
    pub pairwise: Vec<PairDim>,
    pub trials: Vec<Trial>,
    pub complement_independent: bool,
    /// `binom(3r−m−1, 3) − 3·binom(3r−m−1−c, 3)` when `t = 3`, `r > 2`, `m+1 ≤ 3r−3−c`.
    pub t3_prediction: Option<usize>,
    pub minors: Option<MinorRoute>,
    pub points: Option<PointRoute>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub invariants: Vec<InvariantCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, u128>>,
}

impl CodimReport {
    /// Whether every asserted invariant holds; findings are not considered.
    pub fn all_passed(&self) -> bool {
        self.invariants.iter().all(|i| i.passed || !i.asserted)
    }

    pub fn invariant(&self, name: &str) -> Option<&InvariantCheck> {
        self.invariants.iter().find(|i| i.name == name)
    }
}

/// The `Ū_i` as subspaces of `GF(q^t)^{rt−m−1}`, in the coordinates of the
/// basis rows of `complement`.
pub fn projected_blocks(
    field: &FieldTower,
    blocks: &BlockDecomposition,
    w_star: &SubspaceBasis,
    complement: &SubspaceBasis,
) -> Result<Vec<SubspaceBasis>> {
    let proj = Projector::new(field, complement, w_star)?;
    let n = complement.dim();
    Ok((0..blocks.t)
        .map(|i| {
            let rows = (i * blocks.r..(i + 1) * blocks.r)
                .map(|k| proj.coordinates(field, &linalg::unit(blocks.dim(), k)))
                .collect();
            SubspaceBasis::span(field, Level::Top, n, rows)
        })
        .collect())
}

/// Rank of `{b_0 ∧ … ∧ b_{t-1} : b_i a basis vector of the i-th space}`, stopping
/// at `stop_at`.
pub fn decomposable_span_rank(field: &FieldTower, bases: &[Vec<Vector>], stop_at: usize) -> usize {
    let Some(n) = bases.iter().flat_map(|b| b.first()).map(|v| v.len()).next() else {
        return 0;
    };
    let t = bases.len();
    if bases.iter().any(|b| b.is_empty()) || t > n {
        return 0;
    }
    let width = binomial(n, t);
    let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let total: usize = sizes.iter().product();
    let wedges = (0..total).map(|mut code| {
        let mut pick = vec![Vec::new(); t];
        for i in (0..t).rev() {
            pick[i] = bases[i][code % sizes[i]].clone();
            code /= sizes[i];
        }
        exterior::wedge(field, &pick).coords
    });
    linalg::fast_rank(field, width, wedges, Some(stop_at))
}

/// `binom(n, t) − dim(F_0 + … + F_{t-1})` with `F_i = omega_forms(Ū_i)`.
pub fn schubert_sum_codim(field: &FieldTower, ubar: &[SubspaceBasis], t: usize) -> Result<usize> {
    let Some(first) = ubar.first() else {
        return Ok(0);
    };
    let width = binomial(first.ambient(), t);
    let mut rows = Vec::new();
    for u in ubar {
        rows.extend(omega_forms(field, u, t)?.basis.into_rows());
    }
    Ok(width - linalg::fast_rank(field, width, rows, None))
}

/// A random complement of `w` in its ambient space.
fn random_complement<R: Rng>(field: &FieldTower, w: &SubspaceBasis, rng: &mut R) -> SubspaceBasis {
    let n = w.ambient();
    let k = n - w.dim();
    loop {
        let rows = (0..k)
            .map(|_| linalg::random_vector(field, rng, Level::Top, n))
            .collect();
        let c = SubspaceBasis::span(field, Level::Top, n, rows);
        if c.dim() == k && w.join(field, &c).map(|j| j.dim() == n).unwrap_or(false) {
            return c;
        }
    }
}

fn mixed_bases<R: Rng>(field: &FieldTower, ubar: &[SubspaceBasis], rng: &mut R) -> Vec<Vec<Vector>> {
    ubar.iter()
        .map(|u| {
            let g = linalg::random_invertible(field, rng, Level::Top, u.dim());
            g.iter()
                .map(|row| linalg::vec_mat(field, row, u.rows(), u.ambient()))
                .collect()
        })
        .collect()
}

struct Clock {
    enabled: bool,
    laps: BTreeMap<String, u128>,
}

impl Clock {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        if !self.enabled {
            return f();
        }
        let start = std::time::Instant::now();
        let out = f();
        self.laps.insert(name.into(), start.elapsed().as_millis());
        out
    }
}

/// The full pipeline on a linear set: block parameters, `dim_S` with its
/// randomized repetitions, and the requested cross-check routes.
pub fn codim_pipeline(set: &LinearSet, opts: &CodimOptions) -> Result<CodimReport> {
    let field = set.field();
    let blocks = set.blocks();
    let (r, t) = (blocks.r, blocks.t);
    let rank = set.rank();
    let m = rank - 1;
    if rank + t > r * t {
        return Err(Error::InvalidSpec(format!(
            "rank {rank} exceeds rt−t = {}: W meets every spread element",
            r * t - t
        )));
    }
    let n = r * t - rank;
    let bound = binomial(n, t);
    let r_t = r.pow(t as u32);
    for dual in [bound, r_t] {
        if dual as u64 > opts.max_dual_dim {
            return Err(Error::CapExceeded {
                requested: dual as u128,
                cap: opts.max_dual_dim,
            });
        }
    }
    let mut clock = Clock {
        enabled: opts.timings,
        laps: BTreeMap::new(),
    };
    let mut invariants = Vec::new();
    let mut record = |name: &str, asserted: bool, passed: bool, detail: String| {
        invariants.push(InvariantCheck {
            name: name.into(),
            passed,
            asserted,
            detail,
        })
    };
    macro_rules! check {
        ($name:expr, $passed:expr, $detail:expr $(,)?) => {
            record($name, true, $passed, $detail)
        };
    }

    let params = set.block_params()?;
    let w_star = set.w_star();
    check!(
        "sigma_fixed",
        params.sigma_fixed && params.fixed_dim == rank,
        format!(
            "σ(W*) = W*: {}, dim(W* ∩ Fix σ) = {} (m+1 = {rank})",
            params.sigma_fixed, params.fixed_dim
        ),
    );
    if !params.sigma_fixed {
        return Err(Error::Invariant("W* is not σ-fixed".into()));
    }

    let complement = w_star.complement();
    let ubar = clock.time("projection", || projected_blocks(field, &blocks, &w_star, &complement))?;
    let c_per_block: Vec<usize> = ubar.iter().map(|u| u.dim()).collect();
    let c = c_per_block[0];
    check!(
        "c_constant",
        c_per_block.iter().all(|&x| x == c),
        format!("dim Ū_i = {c_per_block:?}"),
    );
    check!(
        "c_equals_r_minus_h",
        c + params.h == r,
        format!("c = {c}, r − h = {}", r - params.h)
    );

    let mut pairwise = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            pairwise.push(PairDim {
                i,
                j,
                dim: ubar[i].meet(field, &ubar[j])?.dim(),
            });
        }
    }

    let bases: Vec<Vec<Vector>> = ubar.iter().map(|u| u.rows().to_vec()).collect();
    let dim_s = clock.time("span", || decomposable_span_rank(field, &bases, bound));
    let schubert_sum_codim = clock.time("schubert_sum", || schubert_sum_codim(field, &ubar, t))?;
    check!(
        "schubert_sum_contained",
        dim_s <= schubert_sum_codim,
        format!("F_0 + … + F_{} ⊆ Ann(S): dim_S = {dim_s} ≤ {schubert_sum_codim}", t - 1)
    );
    let injective = rank + t + c > r * t;
    check!(
        "dim_s_within_bound",
        dim_s <= bound,
        format!("dim_S = {dim_s} ≤ {bound}")
    );
    check!(
        "injective_gives_bound",
        !injective || dim_s == bound,
        format!("injective = {injective}, dim_S = {dim_s}, bound = {bound}"),
    );
    if t == 2 && params.proper {
        check!(
            "t2_injective",
            injective,
            format!("m+1 = {rank}, rt−t−c = {}", r * t - t - c)
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut trials = Vec::new();
    clock.time("trials", || -> Result<()> {
        for k in 0..opts.complement_trials {
            let (random_complement_used, basis_change) = match k % 3 {
                0 => (true, false),
                1 => (false, true),
                _ => (true, true),
            };
            let ub = if random_complement_used {
                let comp = random_complement(field, &w_star, &mut rng);
                projected_blocks(field, &blocks, &w_star, &comp)?
            } else {
                ubar.clone()
            };
            let b = if basis_change {
                mixed_bases(field, &ub, &mut rng)
            } else {
                ub.iter().map(|u| u.rows().to_vec()).collect()
            };
            trials.push(Trial {
                random_complement: random_complement_used,
                basis_change,
                dim_s: decomposable_span_rank(field, &b, bound),
            });
        }
        Ok(())
    })?;
    let complement_independent = trials.iter().all(|tr| tr.dim_s == dim_s);
    check!(
        "complement_independent",
        complement_independent,
        format!(
            "dim_S over {} randomized trials: {:?}",
            trials.len(),
            trials.iter().map(|tr| tr.dim_s).collect::<Vec<_>>()
        ),
    );

    let t3_prediction = (t == 3 && r > 2 && rank + c + 3 <= 3 * r)
        .then(|| binomial(3 * r - rank, 3) - 3 * binomial(3 * r - rank - c, 3));
    if let Some(pred) = t3_prediction {
        check!(
            "t3_closed_form",
            pred == dim_s,
            format!("predicted {pred}, dim_S = {dim_s}")
        );
        check!(
            "t3_annihilator_is_schubert_sum",
            schubert_sum_codim == dim_s,
            format!("codim(F_0 + F_1 + F_2) = {schubert_sum_codim}, dim_S = {dim_s}")
        );
    }

    let minors = if opts.routes.minors {
        let route = clock.time("minors", || minor_route(set, opts, &mut rng))?;
        check!(
            "trace_round_trip",
            route.round_trip,
            format!("{} trace equations re-derive W", route.equations),
        );
        check!(
            "minors_vanish_on_points",
            route.vanish_on_samples,
            format!(
                "{} minor forms evaluated on {} sampled points",
                route.rank, route.sampled_points
            ),
        );
        Some(route)
    } else {
        None
    };

    let points = if opts.routes.points {
        let route = clock.time("points", || point_evaluation_route(set, opts.cap))?;
        check!(
            "literal_deficit_at_least_generic",
            route.literal_deficit >= route.deficit,
            format!(
                "rational-point deficit {} vs generic {}",
                route.literal_deficit, route.deficit
            ),
        );
        record(
            "point_deficit_equals_dim_s",
            false,
            route.deficit == dim_s,
            format!("generic point deficit {} vs dim_S = {dim_s}", route.deficit),
        );
        if let Some(mr) = &minors {
            check!(
                "minor_rank_at_most_deficit",
                mr.rank <= route.deficit,
                format!("minor rank {} ≤ deficit {}", mr.rank, route.deficit),
            );
        }
        Some(route)
    } else {
        None
    };

    Ok(CodimReport {
        q: field.q(),
        r,
        t,
        m,
        h: params.h,
        c,
        h_per_block: params.h_per_block,
        c_per_block,
        complement_dim: n,
        bound,
        injective,
        dim_s,
        schubert_sum_codim,
        pairwise,
        trials,
        complement_independent,
        t3_prediction,
        minors,
        points,
        invariants,
        timings_ms: opts.timings.then_some(clock.laps),
    })
}

fn minor_route(set: &LinearSet, opts: &CodimOptions, rng: &mut ChaCha8Rng) -> Result<MinorRoute> {
    let field = set.field();
    let blocks = set.blocks();
    let (r, t) = (blocks.r, blocks.t);
    let eqs = trace_equations(field, &blocks, set.w())?;
    let round_trip = eqs.solve(field, &blocks) == *set.w();
    let count = binomial(eqs.rows.len(), t);
    if count as u64 > opts.max_dual_dim {
        return Err(Error::CapExceeded {
            requested: count as u128,
            cap: opts.max_dual_dim,
        });
    }
    let vectors = minor_vectors(field, r, &eqs);
    let space = linalg::fast_span(field, Level::Top, r.pow(t as u32), vectors);
    let samples = 16;
    let mut vanish = true;
    for _ in 0..samples {
        let coeffs: Vector = (0..set.rank()).map(|_| field.random(rng, Level::Sub)).collect();
        let v = linalg::vec_mat(field, &coeffs, set.w().rows(), blocks.dim());
        let x = blocks.to_top(field, &v);
        if x.iter().all(|e| e.is_zero()) {
            continue;
        }
        let a = geometry::alpha_raw(field, &x);
        vanish &= space.rows().iter().all(|f| field.dot(f, &a).is_zero());
    }
    Ok(MinorRoute {
        equations: eqs.rows.len(),
        round_trip,
        minors: count,
        rank: space.dim(),
        sampled_points: samples,
        vanish_on_samples: vanish,
    })
}
