use std::collections::HashSet;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schemars::JsonSchema;
use serde::Serialize;

use fingeo_core::exterior::{self, binomial};
use fingeo_core::geometry::{self, PartitionCheck};
use fingeo_core::linalg::{self, SubspaceBasis};
use fingeo_core::linset::{LinearSet, LinearSetReport, LinearSetSpec, Validation};
use fingeo_core::schubert::{self, CodimOptions, CodimReport, Provenance, Routes};
use fingeo_core::{Elem, FieldTower, Level, Vector};

use crate::report::{check, finding, Emit, Outcome};
use crate::{Cli, CodimArgs, Failure, OmegaArgs, Route, SpecArgs, SpreadArgs, SpreadCheck};

type Run = Result<Box<dyn Emit>, Failure>;

fn read_spec(path: &Path) -> Result<LinearSetSpec, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    LinearSetSpec::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn build(path: &Path, validation: Validation) -> Result<LinearSet, Failure> {
    let spec = read_spec(path)?;
    LinearSet::build(&spec, validation).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

#[derive(Serialize, JsonSchema)]
pub struct SpreadResult {
    pub q: u32,
    pub r: usize,
    pub t: u32,
    pub elements: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionCheck>,
    /// Rank of the stacked `α` images; `r^t` when they span.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_rank: Option<usize>,
    /// Points whose Segre-route element equals the field-reduced one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segre_agreements: Option<usize>,
    /// Points whose Plücker coordinates match `α` up to the sign pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commuting_points: Option<usize>,
    /// Vectors on subgeometry elements with rank-one expansion matrix, out of the total.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_one_vectors: Option<(usize, usize)>,
}

fn spread_checks(
    field: &FieldTower,
    r: usize,
    checks: &[SpreadCheck],
    cap: u64,
) -> Result<(SpreadResult, Vec<schubert::InvariantCheck>), Failure> {
    let t = field.t();
    let spread = geometry::desarguesian_spread(field, r, cap)?;
    let mut res = SpreadResult {
        q: field.q(),
        r,
        t,
        elements: spread.len(),
        partition: None,
        alpha_rank: None,
        segre_agreements: None,
        commuting_points: None,
        rank_one_vectors: None,
    };
    let mut inv = Vec::new();
    let n = spread.len();
    if checks.contains(&SpreadCheck::Partition) {
        let p = geometry::verify_partition(field, r, &spread, cap)?;
        inv.push(check(
            "spread_partition",
            p.passed(),
            format!(
                "{} elements of {} expected, {} points covered",
                p.elements, p.expected_elements, p.points_covered
            ),
        ));
        res.partition = Some(p);
    }
    if checks.contains(&SpreadCheck::Span) {
        let rank = geometry::alpha_span_rank(field, r, cap)?;
        let full = r.pow(t);
        inv.push(check("alpha_span", rank == full, format!("rank {rank} of {full}")));
        res.alpha_rank = Some(rank);
    }
    if checks.contains(&SpreadCheck::Segre) {
        let mut agree = 0;
        for elt in &spread {
            agree += (geometry::segre_reduce(field, &elt.point)? == elt.reduced) as usize;
        }
        inv.push(check("segre_route", agree == n, format!("{agree}/{n} elements agree")));
        res.segre_agreements = Some(agree);
    }
    if checks.contains(&SpreadCheck::Commutation) {
        let mut good = 0;
        for elt in &spread {
            let c = geometry::check_commutation(field, &elt.point)?;
            good += (c.zero_pattern && c.matches_alpha) as usize;
        }
        inv.push(check("commutation", good == n, format!("{good}/{n} points")));
        res.commuting_points = Some(good);
    }
    if checks.contains(&SpreadCheck::RankOne) {
        let (mut good, mut total) = (0, 0);
        for x in geometry::projective_points(field, Level::Sub, r, cap)? {
            let elt = geometry::field_reduce(field, &x)?;
            total += 1;
            good += geometry::rank_one_check(field, &elt, cap)? as usize;
        }
        inv.push(check(
            "rank_one_on_subgeometry",
            good == total,
            format!("{good}/{total} subgeometry elements"),
        ));
        res.rank_one_vectors = Some((good, total));
    }
    Ok((res, inv))
}

pub fn spread(cli: &Cli, args: &SpreadArgs) -> Run {
    let field = FieldTower::from_q(args.q, args.t)?;
    let (result, invariants) = spread_checks(&field, args.r, &args.verify, cli.max_enumeration)?;
    let summary = format!(
        "{} elements in PG({}, {})",
        result.elements,
        args.r * args.t as usize - 1,
        args.q
    );
    Ok(Box::new(Outcome {
        name: "spread",
        field: Some(field.config()),
        result,
        invariants,
        summary,
    }))
}

#[derive(Serialize, JsonSchema)]
pub struct LinsetResult {
    pub spec: LinearSetSpec,
    pub report: LinearSetReport,
}

pub fn linset(cli: &Cli, args: &SpecArgs) -> Run {
    let set = build(&args.spec, Validation::Diagnostic)?;
    let cap = cli.max_enumeration;
    let report = set.report(cap)?;
    let q = set.field().q() as u128;
    let mut invariants = Vec::new();
    // the cross-check walks all of PG(r−1, q^t)
    let qt = set.field().size_of(Level::Top) as u128;
    let all_points = (qt.pow(set.r() as u32) - 1) / (qt - 1);
    if all_points <= cap as u128 {
        let via_spread = set.points_via_spread(cap)?.len();
        invariants.push(check(
            "points_via_spread",
            via_spread == report.point_count,
            format!(
                "{via_spread} spread elements meet W, {} points found from W",
                report.point_count
            ),
        ));
    }
    invariants.extend([
        check(
            "vector_identity",
            report.vector_identity,
            format!(
                "Σ (q^w − 1) over {} points = q^{} − 1 = {}",
                report.point_count,
                report.rank,
                q.pow(report.rank as u32) - 1
            ),
        ),
        finding("minimal", report.minimal, "weight-one points span W"),
    ]);
    if let Some(ok) = report.bound_holds {
        invariants.push(check("block_bound", ok, format!("h = {:?}", report.h_per_block)));
    }
    let summary = format!(
        "rank {}, {} points, spectrum {:?}",
        report.rank, report.point_count, report.spectrum
    );
    Ok(Box::new(Outcome {
        name: "linset",
        field: Some(set.field().config()),
        result: LinsetResult {
            spec: set.spec().clone(),
            report,
        },
        invariants,
        summary,
    }))
}

#[derive(Serialize, JsonSchema)]
pub struct CodimResult {
    pub spec: LinearSetSpec,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub report: CodimReport,
}

pub fn codim(cli: &Cli, args: &CodimArgs) -> Run {
    let set = build(&args.spec, Validation::Strict)?;
    let opts = CodimOptions {
        routes: Routes {
            minors: args.routes.contains(&Route::Minors),
            points: args.routes.contains(&Route::Points),
        },
        complement_trials: args.complement_trials,
        seed: cli.seed,
        cap: cli.max_enumeration,
        max_dual_dim: cli.max_dual_dim,
        timings: args.timings,
    };
    let mut report = schubert::codim_pipeline(&set, &opts)?;
    let invariants = std::mem::take(&mut report.invariants);
    let summary = format!(
        "dim_S = {} (bound {}, codim of the Schubert sum {}), c = {}, h = {}",
        report.dim_s, report.bound, report.schubert_sum_codim, report.c, report.h
    );
    Ok(Box::new(Outcome {
        name: "codim",
        field: Some(set.field().config()),
        result: CodimResult {
            spec: set.spec().clone(),
            warnings: set.warnings().to_vec(),
            report,
        },
        invariants,
        summary,
    }))
}

#[derive(Serialize, JsonSchema)]
pub struct OmegaResult {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub h: usize,
    /// Basis of `A_1` (element codes).
    pub a1: Vec<Vec<u32>>,
    pub dim: usize,
    /// `binom(n−h, k)`.
    pub expected_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Basis of the form space (element codes), indexed by `k`-subsets in lexicographic order.
    pub forms: Vec<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspaces_checked: Option<usize>,
}

fn codes(rows: &[Vector]) -> Vec<Vec<u32>> {
    rows.iter().map(|r| r.iter().map(|e| e.0).collect()).collect()
}

fn parse_basis(field: &FieldTower, n: usize, text: &str) -> Result<Vec<Vector>, Failure> {
    let rows: Vec<Vec<u32>> = serde_json::from_str(text).map_err(|e| Failure::Input(format!("--basis: {e}")))?;
    rows.into_iter()
        .map(|row| {
            if row.len() != n {
                return Err(Failure::Input(format!(
                    "--basis: row {row:?} has length {}, expected {n}",
                    row.len()
                )));
            }
            row.into_iter()
                .map(|c| {
                    if c < field.q() {
                        Ok(Elem(c))
                    } else {
                        Err(Failure::Input(format!(
                            "--basis: entry {c} is not an element of GF({})",
                            field.q()
                        )))
                    }
                })
                .collect()
        })
        .collect()
}

fn omega_run(
    field: &FieldTower,
    args: &OmegaArgs,
    a1: &SubspaceBasis,
    cap: u64,
) -> Result<(OmegaResult, Vec<schubert::InvariantCheck>), Failure> {
    let (n, k, h) = (args.n, args.k, a1.dim());
    let forms = schubert::omega_forms(field, a1, k)?;
    let expected = if h > n - k { 0 } else { binomial(n - h, k) };
    let mut invariants = vec![check(
        "omega_dimension",
        forms.dim() == expected,
        format!("dim {} vs binom({}, {k}) = {expected}", forms.dim(), n - h),
    )];
    let mut checked = None;
    if args.exhaustive {
        let all = linalg::all_subspaces(field, Level::Top, n, k, cap)?;
        let mut meeting = Vec::new();
        let mut agree = 0;
        for c in &all {
            let p = exterior::plucker(field, c, k)?;
            let meets = c.meet(field, a1)?.dim() > 0;
            let vanishes = forms
                .basis
                .rows()
                .iter()
                .all(|f| exterior::eval_form(field, f, &p).is_zero());
            agree += (meets == vanishes) as usize;
            if meets {
                meeting.push(p.coords);
            }
        }
        invariants.push(check(
            "vanishing_iff_meets",
            agree == all.len(),
            format!("{agree}/{} subspaces", all.len()),
        ));
        let oracle = schubert::annihilator(field, binomial(n, k), &meeting, Provenance::DecomposableSpanAnnihilator);
        invariants.push(check(
            "equals_annihilator_of_meeting_subspaces",
            oracle.basis == forms.basis,
            format!(
                "annihilator of {} Plücker images has dim {}",
                meeting.len(),
                oracle.dim()
            ),
        ));
        checked = Some(all.len());
    }
    Ok((
        OmegaResult {
            q: field.q(),
            n,
            k,
            h,
            a1: codes(a1.rows()),
            dim: forms.dim(),
            expected_dim: expected,
            note: forms.note.clone(),
            forms: codes(forms.basis.rows()),
            subspaces_checked: checked,
        },
        invariants,
    ))
}

pub fn omega(cli: &Cli, args: &OmegaArgs) -> Run {
    let field = FieldTower::from_q(args.q, 1)?;
    let n = args.n;
    if args.k > n {
        return Err(Failure::Input(format!("k = {} exceeds n = {n}", args.k)));
    }
    let a1 = match (&args.basis, args.h) {
        (Some(text), _) => SubspaceBasis::span(&field, Level::Top, n, parse_basis(&field, n, text)?),
        (None, Some(h)) if h <= n => {
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            loop {
                let rows = (0..h)
                    .map(|_| linalg::random_vector(&field, &mut rng, Level::Top, n))
                    .collect();
                let a = SubspaceBasis::span(&field, Level::Top, n, rows);
                if a.dim() == h {
                    break a;
                }
            }
        }
        (None, Some(h)) => return Err(Failure::Input(format!("h = {h} exceeds n = {n}"))),
        (None, None) => return Err(Failure::Input("either --basis or --h is required".into())),
    };
    let (result, invariants) = omega_run(&field, args, &a1, cli.max_enumeration)?;
    let summary = format!("dim {} = binom({}, {})", result.dim, n - result.h, args.k);
    Ok(Box::new(Outcome {
        name: "omega",
        field: Some(field.config()),
        result,
        invariants,
        summary,
    }))
}

#[derive(Serialize, JsonSchema)]
pub struct SelftestResult {
    /// Lines of PG(3, 2).
    pub lines: usize,
    /// Decomposable nonzero vectors of `⋀^2 GF(2)^4`.
    pub decomposable: usize,
    pub omega: Vec<OmegaResult>,
    pub spread: SpreadResult,
}

pub fn selftest(cli: &Cli) -> Run {
    let cap = cli.max_enumeration;
    let mut invariants = Vec::new();
    let gf2 = FieldTower::from_q(2, 1)?;
    let lines = linalg::all_subspaces(&gf2, Level::Top, 4, 2, cap)?;
    invariants.push(check(
        "line_count",
        lines.len() == 35,
        format!("{} lines, Gaussian binomial 35", lines.len()),
    ));

    let images: HashSet<Vector> = lines
        .iter()
        .map(|w| exterior::plucker(&gf2, w, 2).map(|p| p.coords))
        .collect::<Result<_, _>>()?;
    let mut decomposable = 0;
    let mut agree = 0;
    for code in 1u32..64 {
        let coords: Vector = (0..6).map(|i| Elem((code >> i) & 1)).collect();
        let v = exterior::PluckerVector {
            n: 4,
            k: 2,
            level: Level::Top,
            coords: coords.clone(),
        };
        let d = exterior::is_decomposable(&gf2, &v).is_some();
        decomposable += d as usize;
        agree += (d == images.contains(&coords)) as usize;
    }
    invariants.push(check(
        "klein_quadric",
        decomposable == 35 && agree == 63,
        format!("{decomposable} decomposable vectors, {agree}/63 agree with the Plücker images"),
    ));

    let mut hodge_ok = 0;
    for c in &lines {
        let form = exterior::hodge_form(&gf2, c, 2)?;
        for w in &lines {
            let p = exterior::plucker(&gf2, w, 2)?;
            hodge_ok += (exterior::eval_form(&gf2, &form, &p).is_zero() == (c.meet(&gf2, w)?.dim() > 0)) as usize;
        }
    }
    invariants.push(check(
        "hodge_vanishing",
        hodge_ok == 35 * 35,
        format!("{hodge_ok}/1225 pairs"),
    ));

    let mut omega = Vec::new();
    for h in [1, 2] {
        let args = OmegaArgs {
            q: 2,
            n: 4,
            k: 2,
            basis: None,
            h: Some(h),
            exhaustive: true,
        };
        let a1 = SubspaceBasis::coordinate(Level::Top, 4, 0..h);
        let (res, mut inv) = omega_run(&gf2, &args, &a1, cap)?;
        for i in &mut inv {
            i.name = format!("omega_h{h}_{}", i.name);
        }
        invariants.extend(inv);
        omega.push(res);
    }

    let field = FieldTower::from_q(2, 2)?;
    let (spread, inv) = spread_checks(&field, 2, &SpreadCheck::all(), cap)?;
    invariants.extend(inv);
    let summary = format!("{} lines of PG(3,2), spread of {} lines", lines.len(), spread.elements);
    Ok(Box::new(Outcome {
        name: "selftest",
        field: None,
        result: SelftestResult {
            lines: lines.len(),
            decomposable,
            omega,
            spread,
        },
        invariants,
        summary,
    }))
}
