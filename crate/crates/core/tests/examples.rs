use std::path::PathBuf;

use sftkit::complex::{induced_on_homology, pair_homology};
use sftkit::dimension::{dimension_group, Kind, Side};
use sftkit::io::{load_code, load_graph, load_pair, load_square, load_triple};
use sftkit::sft::degree;
use sftkit::verify::{verify_pullback_identity, Level, Settings};
use sftkit::Error;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

#[test]
fn graphs_load_with_their_adjacency() {
    let g = load_graph(data("G.json")).unwrap();
    assert_eq!(g.graph().n_vertices(), 2);
    assert_eq!(g.graph().adjacency_matrix().to_i64_rows().unwrap(), vec![vec![1, 1], vec![1, 1]]);
    assert_eq!(dimension_group(&load_graph(data("H.json")).unwrap(), Side::U).rational_dimension(), 1);
}

#[test]
fn three_to_one_cover_has_degree_three() {
    assert_eq!(degree(&load_code(data("pi3.json")).unwrap()).unwrap(), 3);
}

#[test]
fn both_squares_violate_the_identity() {
    let settings = Settings::default();
    for name in ["square1.json", "square2.json"] {
        let d = load_square(data(name)).unwrap();
        assert!(!verify_pullback_identity(&d, Level::Dimension, &settings).unwrap().passed, "{name}");
    }
}

#[test]
fn pair_over_the_three_fold_cover_has_the_homology_of_h() {
    let settings = Settings::default();
    let (dc, h) = pair_homology(&load_pair(data("pair_G3_pi3_H.json")).unwrap(), Side::S, settings.caps, settings.level_window).unwrap();
    assert_eq!(h.dim_q(0), 1);
    assert_eq!(h.dim_q(1), 0);
    dc.check_d_squared().unwrap();
}

#[test]
fn shift_triple_induces_an_isomorphism() {
    let settings = Settings::default();
    let t = load_triple(data("shift_triple_H.json")).unwrap();
    assert!(induced_on_homology(&t, Kind::S, settings.caps, settings.level_window).is_ok());
}

#[test]
fn mismatched_triple_is_a_hypothesis_error() {
    let settings = Settings::default();
    let t = load_triple(data("mismatched_triple.json")).unwrap();
    let err = induced_on_homology(&t, Kind::S, settings.caps, settings.level_window).unwrap_err();
    assert!(matches!(err, Error::Hypothesis(_)), "{err}");
}
