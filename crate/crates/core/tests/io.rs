use proptest::prelude::*;

use schurlab::io::{parse_matrix, read_matrix, write_matrix_json, write_matrix_text};
use schurlab::{Error, Matrix};

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO,
        -10.0f64..10.0,
    ]
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
        prop::collection::vec(finite(), r * c).prop_map(move |d| Matrix::new(r, c, d).unwrap())
    })
}

fn bits(m: &Matrix) -> Vec<u64> {
    m.data().iter().map(|x| x.to_bits()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn text_output_round_trips_bit_for_bit(m in matrix()) {
        let back = parse_matrix(&write_matrix_text(&m)).unwrap();
        prop_assert_eq!((back.rows(), back.cols()), (m.rows(), m.cols()));
        prop_assert_eq!(bits(&back), bits(&m));
    }

    #[test]
    fn json_output_round_trips_bit_for_bit(m in matrix()) {
        let back = parse_matrix(&write_matrix_json(&m)).unwrap();
        prop_assert_eq!(bits(&back), bits(&m));
    }
}

#[test]
fn reads_files_and_reports_missing_ones() {
    let dir = std::env::temp_dir().join(format!("schurlab-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.txt");
    std::fs::write(&path, "0.5 1\n0 0.25\n").unwrap();
    let m = read_matrix(&path).unwrap();
    assert_eq!(m, Matrix::from_rows(&[[0.5, 1.0], [0.0, 0.25]]));
    assert!(matches!(read_matrix(&dir.join("missing.txt")), Err(Error::Io { .. })));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn json_rejects_ragged_and_mismatched_shapes() {
    assert!(parse_matrix(r#"{"rows": 2, "cols": 2, "data": [[1, 2], [3]]}"#).is_err());
    assert!(parse_matrix(r#"{"rows": 3, "cols": 2, "data": [[1, 2], [3, 4]]}"#).is_err());
    assert!(parse_matrix(r#"{"rows": 1, "cols": 1, "data": [["x"]]}"#).is_err());
}
