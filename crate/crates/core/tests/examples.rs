//! The two rank-9 specs of `specs/` over larger base fields: the counts do not
//! depend on q.

use std::path::PathBuf;

use fingeo_core::linset::{LinearSet, LinearSetSpec, Validation};
use fingeo_core::schubert::{self, CodimOptions, Routes};

fn over(name: &str, q: u32) -> LinearSet {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name);
    let mut spec = LinearSetSpec::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    spec.q = q;
    LinearSet::build(&spec, Validation::Strict).unwrap()
}

fn counts(set: &LinearSet) -> (usize, usize, usize) {
    let opts = CodimOptions {
        routes: Routes {
            minors: true,
            points: false,
        },
        complement_trials: 1,
        ..CodimOptions::default()
    };
    let r = schubert::codim_pipeline(set, &opts).unwrap();
    assert!(r.all_passed());
    (r.dim_s, r.schubert_sum_codim, r.minors.unwrap().rank)
}

#[test]
fn first_spec_is_independent_of_q() {
    for q in [3, 4] {
        assert_eq!(counts(&over("lambda1.json", q)), (849, 865, 849), "q = {q}");
    }
}

#[test]
fn second_spec_is_independent_of_q() {
    for q in [3, 4] {
        assert_eq!(counts(&over("lambda2.json", q)), (855, 863, 855), "q = {q}");
    }
}
