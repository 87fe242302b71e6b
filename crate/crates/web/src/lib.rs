//! Browser bindings. Every function returns a JSON string; `www/index.html`
//! renders it.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use fingeo_core::linset::{LinearSet, LinearSetSpec, Validation};
use fingeo_core::schubert::{self, CodimOptions, Routes};
use fingeo_core::{geometry, FieldTower, Level, SubspaceBasis};

/// Keeps a page responsive: enumerations beyond this are refused.
const CAP: u64 = 1 << 16;

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct SpreadSummary {
    q: u32,
    r: usize,
    t: u32,
    elements: usize,
    partition: bool,
    alpha_rank: usize,
    commuting_points: usize,
    /// The first few elements as (point, reduced basis) in element codes.
    sample: Vec<(Vec<u32>, Vec<Vec<u32>>)>,
}

fn codes(v: &[fingeo_core::Elem]) -> Vec<u32> {
    v.iter().map(|e| e.0).collect()
}

#[wasm_bindgen]
pub fn spread_summary(q: u32, r: usize, t: u32) -> Result<String, JsError> {
    let field = FieldTower::from_q(q, t).map_err(err)?;
    let spread = geometry::desarguesian_spread(&field, r, CAP).map_err(err)?;
    let partition = geometry::verify_partition(&field, r, &spread, CAP).map_err(err)?;
    let alpha_rank = geometry::alpha_span_rank(&field, r, CAP).map_err(err)?;
    let mut commuting_points = 0;
    for elt in &spread {
        let c = geometry::check_commutation(&field, &elt.point).map_err(err)?;
        commuting_points += (c.zero_pattern && c.matches_alpha) as usize;
    }
    let sample = spread
        .iter()
        .take(6)
        .map(|e| (codes(&e.point), e.reduced.rows().iter().map(|r| codes(r)).collect()))
        .collect();
    Ok(to_json(&SpreadSummary {
        q,
        r,
        t,
        elements: spread.len(),
        partition: partition.passed(),
        alpha_rank,
        commuting_points,
        sample,
    }))
}

/// Runs the codimension pipeline on a linear-set spec given as JSON.
#[wasm_bindgen]
pub fn codim_report(spec_json: &str, with_points: bool) -> Result<String, JsError> {
    let spec = LinearSetSpec::from_json(spec_json).map_err(err)?;
    let set = LinearSet::build(&spec, Validation::Strict).map_err(err)?;
    let opts = CodimOptions {
        routes: Routes {
            minors: true,
            points: with_points,
        },
        cap: CAP,
        ..CodimOptions::default()
    };
    let report = schubert::codim_pipeline(&set, &opts).map_err(err)?;
    Ok(to_json(&report))
}

#[derive(Serialize)]
struct OmegaSummary {
    n: usize,
    k: usize,
    h: usize,
    dim: usize,
    expected: usize,
    a1: Vec<Vec<u32>>,
}

/// Forms vanishing on the `k`-spaces meeting the span of the first `h` unit vectors.
#[wasm_bindgen]
pub fn omega_dim(q: u32, n: usize, k: usize, h: usize) -> Result<String, JsError> {
    if k > n || h > n {
        return Err(JsError::new("need k ≤ n and h ≤ n"));
    }
    let field = FieldTower::from_q(q, 1).map_err(err)?;
    let a1 = SubspaceBasis::coordinate(Level::Top, n, 0..h);
    let forms = schubert::omega_forms(&field, &a1, k).map_err(err)?;
    let expected = if h > n - k {
        0
    } else {
        fingeo_core::exterior::binomial(n - h, k)
    };
    Ok(to_json(&OmegaSummary {
        n,
        k,
        h,
        dim: forms.dim(),
        expected,
        a1: a1.rows().iter().map(|r| codes(r)).collect(),
    }))
}

/// The canonical subgeometry spec, as a starting point for the editor.
#[wasm_bindgen]
pub fn canonical_spec(q: u32, r: usize, t: u32) -> String {
    LinearSetSpec::canonical_subgeometry(q, r, t).to_json()
}
