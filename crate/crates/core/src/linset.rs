//! Linear sets of `PG(r-1, q^t)` given by a parametric spec.
//!
//! A spec lists GF(q)-linear coordinate expressions in variables ranging over
//! subfields `GF(q^s)` of the top field, optionally restricted to the
//! trace-zero hyperplane. Its defining subspace `W ⊆ GF(q)^{rt}` is the span of
//! the coordinate vectors obtained by substituting a GF(q)-basis of each
//! variable domain.

pub mod expr;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::geometry::{self, BlockDecomposition};
use crate::gf::{Elem, FieldConfig, FieldTower, Level};
use crate::linalg::{self, SubspaceBasis, Vector};
use expr::{Expr, Literal};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    TraceZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct VarSpec {
    pub name: String,
    /// The variable ranges over GF(q^degree); `degree` must divide `t`.
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct LinearSetSpec {
    pub q: u32,
    pub r: usize,
    pub t: u32,
    /// Pins the moduli; defaults to the automatic choice for `(q, t)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldConfig>,
    pub vars: Vec<VarSpec>,
    pub coords: Vec<String>,
    /// Declared rank `m+1`; defaults to the sum of the variable dimensions.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

impl LinearSetSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// The tower described by the spec, checked against `q` and `t`.
    pub fn field(&self) -> Result<FieldTower> {
        let field = match &self.field {
            Some(cfg) => FieldTower::from_config(cfg)?,
            None => FieldTower::from_q(self.q, self.t)?,
        };
        if field.q() != self.q || field.t() != self.t {
            return Err(Error::InvalidSpec(format!(
                "field block describes GF({}^{}) but the spec says q = {}, t = {}",
                field.q(),
                field.t(),
                self.q,
                self.t
            )));
        }
        Ok(field)
    }

    /// `(x_0, …, x_{r-1})` with every `x_i ∈ GF(q)`.
    pub fn canonical_subgeometry(q: u32, r: usize, t: u32) -> Self {
        LinearSetSpec {
            q,
            r,
            t,
            field: None,
            vars: (0..r)
                .map(|i| VarSpec {
                    name: format!("x{i}"),
                    degree: 1,
                    constraints: vec![],
                })
                .collect(),
            coords: (0..r).map(|i| format!("x{i}")).collect(),
            rank: Some(r),
        }
    }

    /// Sum of the GF(q)-dimensions of the variable domains.
    pub fn parameter_dim(&self) -> usize {
        self.vars.iter().map(|v| v.degree as usize - v.constraints.len()).sum()
    }

    pub fn declared_rank(&self) -> usize {
        self.rank.unwrap_or_else(|| self.parameter_dim())
    }
}

/// Whether [`LinearSet::build`] enforces `r ≤ m+1 ≤ rt−t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    Strict,
    /// Accepts any rank, e.g. to study the whole space or a single point.
    Diagnostic,
}

struct CompiledTerm {
    coeff: Elem,
    var: usize,
    frobenius: u32,
}

/// A linear set with its defining subspace.
pub struct LinearSet {
    field: Arc<FieldTower>,
    spec: LinearSetSpec,
    blocks: BlockDecomposition,
    w: SubspaceBasis,
    exprs: Vec<Expr>,
    warnings: Vec<String>,
}

impl LinearSet {
    pub fn build(spec: &LinearSetSpec, validation: Validation) -> Result<Self> {
        Self::build_in(Arc::new(spec.field()?), spec, validation)
    }

    /// As [`build`](Self::build), reusing an already constructed tower.
    pub fn build_in(field: Arc<FieldTower>, spec: &LinearSetSpec, validation: Validation) -> Result<Self> {
        if field.q() != spec.q || field.t() != spec.t {
            return Err(Error::InvalidSpec("spec and field tower disagree on q or t".into()));
        }
        let (r, t) = (spec.r, spec.t as usize);
        if r == 0 {
            return Err(Error::InvalidSpec("r must be positive".into()));
        }
        if spec.coords.len() != r {
            return Err(Error::InvalidSpec(format!(
                "expected {r} coordinate expressions, found {}",
                spec.coords.len()
            )));
        }
        let mut names = HashMap::new();
        for (i, v) in spec.vars.iter().enumerate() {
            if v.degree == 0 || spec.t % v.degree != 0 {
                return Err(Error::InvalidSpec(format!(
                    "variable `{}` has degree {}, which does not divide t = {}",
                    v.name, v.degree, spec.t
                )));
            }
            if names.insert(v.name.as_str(), i).is_some() {
                return Err(Error::InvalidSpec(format!("variable `{}` declared twice", v.name)));
            }
        }

        let mut warnings = Vec::new();
        let mut exprs = Vec::with_capacity(r);
        let mut compiled: Vec<Vec<CompiledTerm>> = Vec::with_capacity(r);
        for (i, text) in spec.coords.iter().enumerate() {
            let line = i + 1;
            let e = expr::parse_expression_at(text, line)?;
            let mut terms = Vec::new();
            for term in &e.terms {
                let var = *names.get(term.var.as_str()).ok_or_else(|| ParseError {
                    line,
                    column: term.column,
                    token: term.var.clone(),
                    message: "unknown variable".into(),
                })?;
                let mut coeff = match &term.coeff {
                    None => Elem::ONE,
                    Some(Literal::Int(n)) => field.from_int((*n % field.p() as u64) as i64),
                    Some(Literal::Coeffs(c)) => field.from_coeffs(c).map_err(|err| ParseError {
                        line,
                        column: term.column,
                        token: term.var.clone(),
                        message: format!("malformed coefficient literal: {err}"),
                    })?,
                };
                if term.negated {
                    coeff = field.neg(coeff);
                }
                let mut frobenius = term.frobenius;
                if frobenius >= spec.t {
                    frobenius %= spec.t;
                    warnings.push(format!(
                        "line {line}, column {}: Frobenius exponent {} of `{}` reduced mod t = {} to {frobenius}",
                        term.column, term.frobenius, term.var, spec.t
                    ));
                }
                terms.push(CompiledTerm { coeff, var, frobenius });
            }
            compiled.push(terms);
            exprs.push(e);
        }

        let blocks = BlockDecomposition::new(&field, r);
        let mut gens = Vec::new();
        for (vi, v) in spec.vars.iter().enumerate() {
            for b in domain_basis(&field, v)? {
                let y: Vector = compiled
                    .iter()
                    .map(|terms| {
                        terms
                            .iter()
                            .filter(|term| term.var == vi)
                            .fold(Elem::ZERO, |acc, term| {
                                field.add(acc, field.mul(term.coeff, field.frobenius(b, term.frobenius)))
                            })
                    })
                    .collect();
                gens.push(blocks.to_reduced(&field, &y));
            }
        }
        let w = SubspaceBasis::span(&field, Level::Sub, r * t, gens);
        let declared = spec.declared_rank();
        if declared != w.dim() {
            return Err(Error::RankMismatch {
                declared,
                computed: w.dim(),
            });
        }
        if validation == Validation::Strict {
            let k = w.dim();
            if k < r || k > r * t - t {
                return Err(Error::InvalidSpec(format!(
                    "rank m+1 = {k} is outside r ≤ m+1 ≤ rt−t = [{r}, {}]; \
                     below r the set cannot span PG({}, q^{t}), above rt−t it is the whole space",
                    r * t - t,
                    r - 1
                )));
            }
        }
        Ok(LinearSet {
            field,
            spec: spec.clone(),
            blocks,
            w,
            exprs,
            warnings,
        })
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }

    pub fn shared_field(&self) -> &Arc<FieldTower> {
        &self.field
    }

    pub fn spec(&self) -> &LinearSetSpec {
        &self.spec
    }

    pub fn blocks(&self) -> BlockDecomposition {
        self.blocks
    }

    pub fn r(&self) -> usize {
        self.blocks.r
    }

    pub fn t(&self) -> usize {
        self.blocks.t
    }

    /// `W` in reduced coordinates.
    pub fn w(&self) -> &SubspaceBasis {
        &self.w
    }

    /// `m + 1`.
    pub fn rank(&self) -> usize {
        self.w.dim()
    }

    pub fn expressions(&self) -> &[Expr] {
        &self.exprs
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `W* = ⟨W⟩_{GF(q^t)}` in block coordinates.
    pub fn w_star(&self) -> SubspaceBasis {
        self.blocks.extend(&self.field, &self.w)
    }

    /// Points of the linear set with their weights, in ascending order of the
    /// normalized representative.
    pub fn points_and_weights(&self, cap: u64) -> Result<PointCensus> {
        let f = &*self.field;
        let mut counts: BTreeMap<Vector, u64> = BTreeMap::new();
        for v in self.w.nonzero_vectors(f, cap)? {
            let mut x = self.blocks.to_top(f, &v);
            f.normalize(&mut x);
            *counts.entry(x).or_default() += 1;
        }
        let q = f.q() as u64;
        let mut points = Vec::with_capacity(counts.len());
        let mut spectrum = BTreeMap::new();
        let mut counts_match = true;
        let mut total = 0u128;
        for (x, n) in counts {
            let elt = geometry::field_reduce(f, &x)?;
            let meet = self.w.meet(f, &elt.reduced)?;
            let weight = meet.dim();
            counts_match &= n == q.pow(weight as u32) - 1;
            total += (q as u128).pow(weight as u32) - 1;
            *spectrum.entry(weight).or_default() += 1;
            points.push(WeightedPoint { point: x, weight, meet });
        }
        let expected = (q as u128).pow(self.rank() as u32) - 1;
        Ok(PointCensus {
            points,
            spectrum,
            vector_identity: total == expected && counts_match,
        })
    }

    /// The points of `PG(r-1, q^t)` whose spread element meets `W`.
    pub fn points_via_spread(&self, cap: u64) -> Result<Vec<Vector>> {
        let f = &*self.field;
        let mut out = Vec::new();
        for x in geometry::projective_points(f, Level::Top, self.r(), cap)? {
            let elt = geometry::field_reduce(f, &x)?;
            if self.w.meet(f, &elt.reduced)?.dim() > 0 {
                out.push(elt.point);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Whether the weight-one points already span `W`.
    pub fn minimality_check(&self, census: &PointCensus) -> bool {
        let rows: Vec<Vector> = census
            .points
            .iter()
            .filter(|p| p.weight == 1)
            .flat_map(|p| p.meet.rows().to_vec())
            .collect();
        linalg::rank(&self.field, &rows, self.w.ambient()) == self.rank()
    }

    pub fn block_params(&self) -> Result<BlockParams> {
        let f = &*self.field;
        let (r, t) = (self.r(), self.t());
        let w_star = self.w_star();
        let fix = geometry::sigma_fix_check(f, &self.blocks, &w_star)?;
        let h_per_block: Vec<usize> = (0..t)
            .map(|i| self.blocks.block(i).meet(f, &w_star).map(|m| m.dim()))
            .collect::<Result<_>>()?;
        let h = h_per_block[0];
        if h_per_block.iter().any(|&x| x != h) {
            return Err(Error::Invariant(format!(
                "dim(U_i ∩ W*) differs across blocks: {h_per_block:?}"
            )));
        }
        let heads: Vec<Vector> = w_star.rows().iter().map(|v| v[..r].to_vec()).collect();
        let spans_u0 = linalg::rank(f, &heads, r) == r;
        let k = self.rank();
        let covers_space = k + t > r * t;
        let proper = spans_u0 && !covers_space;
        let bound_holds = proper.then(|| if t == 2 { h + r == k } else { h * (t - 1) + r <= k });
        Ok(BlockParams {
            h_per_block,
            h,
            c: r - h,
            spans_u0,
            covers_space,
            proper,
            bound_holds,
            sigma_fixed: fix.fixed,
            fixed_dim: fix.fixed_dim,
        })
    }

    /// Everything the linear-set layer reports.
    pub fn report(&self, cap: u64) -> Result<LinearSetReport> {
        let census = self.points_and_weights(cap)?;
        let params = self.block_params()?;
        Ok(LinearSetReport {
            rank: self.rank(),
            point_count: census.points.len(),
            spectrum: census.spectrum.clone(),
            vector_identity: census.vector_identity,
            minimal: self.minimality_check(&census),
            proper: params.proper,
            h_per_block: params.h_per_block.clone(),
            c_per_block: params.h_per_block.iter().map(|h| self.r() - h).collect(),
            bound_holds: params.bound_holds,
            warnings: self.warnings.clone(),
        })
    }
}

/// GF(q)-basis of the domain of a variable, as elements of the top field.
pub fn domain_basis(field: &FieldTower, var: &VarSpec) -> Result<Vec<Elem>> {
    let t = field.t() as usize;
    let s = var.degree;
    // GF(q^s) = ker(Frob^s − id) on the expansion coordinates
    let image: Vec<Vector> = field
        .xi_powers()
        .iter()
        .map(|&xi| field.expand(field.sub(field.frobenius(xi, s), xi)))
        .collect();
    let mut basis: Vec<Elem> = linalg::left_kernel(field, &image, t)
        .iter()
        .map(|c| field.combine(c))
        .collect();
    for c in &var.constraints {
        match c {
            Constraint::TraceZero => {
                let traces: Vec<Vector> = basis.iter().map(|&b| vec![field.trace_over(b, s)]).collect();
                basis = linalg::left_kernel(field, &traces, 1)
                    .iter()
                    .map(|comb| {
                        comb.iter()
                            .zip(&basis)
                            .fold(Elem::ZERO, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
                    })
                    .collect();
            }
        }
    }
    Ok(basis)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoint {
    pub point: Vector,
    pub weight: usize,
    /// `W ∩ field_reduce(point)`.
    pub meet: SubspaceBasis,
}

#[derive(Clone, Debug)]
pub struct PointCensus {
    pub points: Vec<WeightedPoint>,
    pub spectrum: BTreeMap<usize, usize>,
    /// `Σ_P (q^{w(P)} − 1) = q^{m+1} − 1`, together with the per-point vector counts.
    pub vector_identity: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct BlockParams {
    pub h_per_block: Vec<usize>,
    pub h: usize,
    pub c: usize,
    pub spans_u0: bool,
    pub covers_space: bool,
    pub proper: bool,
    /// `h ≤ (m+1−r)/(t−1)` (or `h = m+1−r` for `t = 2`); only checked for proper sets.
    pub bound_holds: Option<bool>,
    pub sigma_fixed: bool,
    pub fixed_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
pub struct LinearSetReport {
    pub rank: usize,
    pub point_count: usize,
    pub spectrum: BTreeMap<usize, usize>,
    pub vector_identity: bool,
    pub minimal: bool,
    pub proper: bool,
    pub h_per_block: Vec<usize>,
    pub c_per_block: Vec<usize>,
    pub bound_holds: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

/// A random spec over `field`: variables of random degree dividing `t` and
/// coordinates with random coefficients and Frobenius twists. The rank is
/// declared as the parameter count, so degenerate draws fail to build.
pub fn random_spec<R: Rng + ?Sized>(field: &FieldTower, r: usize, rank: usize, rng: &mut R) -> LinearSetSpec {
    let t = field.t();
    let divisors: Vec<u32> = (1..=t).filter(|d| t % d == 0).collect();
    let mut vars = Vec::new();
    let mut left = rank;
    while left > 0 {
        let options: Vec<u32> = divisors.iter().copied().filter(|&d| d as usize <= left).collect();
        let degree = options[rng.gen_range(0..options.len())];
        left -= degree as usize;
        vars.push(VarSpec {
            name: format!("z{}", vars.len()),
            degree,
            constraints: vec![],
        });
    }
    // some variables keep exponent 0 everywhere, which produces whole spread elements
    let untwisted: Vec<bool> = vars.iter().map(|_| rng.gen_bool(0.5)).collect();
    let coords = (0..r)
        .map(|_| {
            let mut terms = Vec::new();
            for (v, &flat) in vars.iter().zip(&untwisted) {
                if !rng.gen_bool(0.6) {
                    continue;
                }
                let c = field.random_nonzero(rng, Level::Top);
                let frob = if flat { 0 } else { rng.gen_range(0..v.degree) };
                terms.push(expr::Term {
                    negated: false,
                    coeff: Some(Literal::Coeffs(trimmed_coeffs(field, c))),
                    var: v.name.clone(),
                    frobenius: frob,
                    column: 0,
                });
            }
            if terms.is_empty() {
                let v = &vars[rng.gen_range(0..vars.len())];
                terms.push(expr::Term {
                    negated: false,
                    coeff: None,
                    var: v.name.clone(),
                    frobenius: 0,
                    column: 0,
                });
            }
            Expr { terms }.to_string()
        })
        .collect();
    LinearSetSpec {
        q: field.q(),
        r,
        t,
        field: Some(field.config()),
        vars,
        coords,
        rank: None,
    }
}

fn trimmed_coeffs(field: &FieldTower, a: Elem) -> Vec<u32> {
    let mut c = field.to_coeffs(a);
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    c
}

/// Draws random specs until one builds, is proper and passes `accept`.
/// Returns `None` after `tries` failures.
pub fn random_proper_set<R, F>(
    field: &Arc<FieldTower>,
    r: usize,
    rng: &mut R,
    tries: usize,
    mut accept: F,
) -> Option<LinearSet>
where
    R: Rng + ?Sized,
    F: FnMut(&LinearSet, &BlockParams) -> bool,
{
    let t = field.t() as usize;
    if r * t < r + t {
        return None;
    }
    for _ in 0..tries {
        let rank = rng.gen_range(r..=r * t - t);
        let spec = random_spec(field, r, rank, rng);
        let Ok(set) = LinearSet::build_in(field.clone(), &spec, Validation::Strict) else {
            continue;
        };
        let Ok(params) = set.block_params() else {
            continue;
        };
        if params.proper && accept(&set, &params) {
            return Some(set);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CAP: u64 = 1 << 20;

    fn spec(q: u32, r: usize, t: u32, vars: &[(&str, u32, bool)], coords: &[&str]) -> LinearSetSpec {
        LinearSetSpec {
            q,
            r,
            t,
            field: None,
            vars: vars
                .iter()
                .map(|&(n, d, tz)| VarSpec {
                    name: n.into(),
                    degree: d,
                    constraints: if tz { vec![Constraint::TraceZero] } else { vec![] },
                })
                .collect(),
            coords: coords.iter().map(|s| s.to_string()).collect(),
            rank: None,
        }
    }

    #[test]
    fn canonical_subgeometry_has_weight_one_points() {
        let set = LinearSet::build(&LinearSetSpec::canonical_subgeometry(2, 2, 2), Validation::Strict).unwrap();
        assert_eq!(set.rank(), 2);
        let report = set.report(CAP).unwrap();
        assert_eq!(report.point_count, 3);
        assert_eq!(report.spectrum, BTreeMap::from([(1, 3)]));
        assert!(report.vector_identity && report.minimal && report.proper);
        assert_eq!(report.h_per_block, vec![0, 0]);
        assert_eq!(report.bound_holds, Some(true));
    }

    #[test]
    fn single_point_has_weight_t() {
        let s = spec(2, 2, 3, &[("x", 3, false)], &["x", "0*x"]);
        let set = LinearSet::build(&s, Validation::Diagnostic).unwrap();
        assert_eq!(set.rank(), 3);
        let census = set.points_and_weights(CAP).unwrap();
        assert_eq!(census.points.len(), 1);
        assert_eq!(census.points[0].weight, 3);
        assert!(census.vector_identity);
        assert!(!set.minimality_check(&census));
        let params = set.block_params().unwrap();
        assert!(!params.spans_u0 && !params.proper);
    }

    #[test]
    fn subfield_and_trace_zero_domains() {
        let f = FieldTower::from_q(2, 4).unwrap();
        let sub = |d, tz| VarSpec {
            name: "v".into(),
            degree: d,
            constraints: if tz { vec![Constraint::TraceZero] } else { vec![] },
        };
        let b2 = domain_basis(&f, &sub(2, false)).unwrap();
        assert_eq!(b2.len(), 2);
        assert!(b2.iter().all(|&b| f.frobenius(b, 2) == b));
        let b4 = domain_basis(&f, &sub(4, true)).unwrap();
        assert_eq!(b4.len(), 3);
        assert!(b4.iter().all(|&b| f.trace(b).is_zero()));
    }

    #[test]
    fn rank_nine_specs_build() {
        let ex1 = spec(
            2,
            6,
            4,
            &[("x", 4, false), ("y", 4, false), ("z", 1, false)],
            &["x", "x^q", "y", "y^q", "y^{q^2}", "z"],
        );
        let ex2 = spec(
            2,
            6,
            4,
            &[("x", 2, false), ("y", 4, true), ("z", 4, false)],
            &["x", "y", "y^q", "z", "z^q", "z^{q^2}"],
        );
        for s in [ex1, ex2] {
            let set = LinearSet::build(&s, Validation::Strict).unwrap();
            assert_eq!(set.rank(), 9);
            let params = set.block_params().unwrap();
            assert_eq!((params.h, params.c), (0, 6));
            assert!(params.sigma_fixed && params.fixed_dim == 9 && params.proper);
        }
    }

    #[test]
    fn spec_errors_point_at_the_problem() {
        let s = spec(2, 2, 2, &[("x", 2, false)], &["x", "x^^q"]);
        match LinearSet::build(&s, Validation::Diagnostic) {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.column, e.token.as_str()), (2, 3, "^")),
            other => panic!("{:?}", other.err()),
        }
        let s = spec(2, 2, 2, &[("x", 2, false)], &["x", "y"]);
        match LinearSet::build(&s, Validation::Diagnostic) {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.token.as_str()), (2, "y")),
            other => panic!("{:?}", other.err()),
        }
        let mut s = spec(2, 2, 2, &[("x", 2, false)], &["x", "x^q"]);
        s.rank = Some(3);
        assert!(matches!(
            LinearSet::build(&s, Validation::Diagnostic),
            Err(Error::RankMismatch {
                declared: 3,
                computed: 2
            })
        ));
    }

    #[test]
    fn large_exponents_wrap_with_a_warning() {
        let s = spec(2, 2, 2, &[("x", 1, false), ("y", 1, false)], &["x^q^3", "y"]);
        let set = LinearSet::build(&s, Validation::Strict).unwrap();
        assert_eq!(set.warnings().len(), 1);
        assert!(set.warnings()[0].contains("reduced mod t = 2 to 1"));
    }

    #[test]
    fn spread_enumeration_agrees_with_vectors() {
        let f = Arc::new(FieldTower::from_q(2, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let set = random_proper_set(&f, 3, &mut rng, 200, |_, _| true).unwrap();
            let census = set.points_and_weights(CAP).unwrap();
            let mut from_vectors: Vec<Vector> = census.points.iter().map(|p| p.point.clone()).collect();
            from_vectors.sort();
            assert_eq!(from_vectors, set.points_via_spread(CAP).unwrap());
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let s = LinearSetSpec::canonical_subgeometry(3, 3, 2);
        assert_eq!(LinearSetSpec::from_json(&s.to_json()).unwrap(), s);
        let raw =
            r#"{"q":2,"r":2,"t":2,"vars":[{"name":"y","degree":2,"constraints":["trace_zero"]}],"coords":["y","y"]}"#;
        let parsed = LinearSetSpec::from_json(raw).unwrap();
        assert_eq!(parsed.vars[0].constraints, vec![Constraint::TraceZero]);
        assert_eq!(parsed.declared_rank(), 1);
    }
}
