//! Cache files and command-level behaviour.

use amlj::aml::{scale_coefficients, Functional, ScaleMode};
use amlj::commands::{
    cmd_continuous, cmd_fit, cmd_gamma_class, cmd_gen, cmd_report, cmd_scale, cmd_spectra, cmd_table_x3, X3Table,
};
use amlj::io::{decode_stream, encode_stream, read_stream, write_stream};
use amlj::manifold::ManifoldSpec;
use amlj::spectra::x3_spectrum;
use amlj::Error;
use std::f64::consts::PI;
use std::path::PathBuf;

fn spec(s: &str) -> ManifoldSpec {
    ManifoldSpec::resolve(s).unwrap()
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap()
}

#[test]
fn cache_round_trip_is_bit_exact_for_shipped_streams() {
    let dir = tempfile::tempdir().unwrap();
    let names = ["P1", "P3", "P12", "X3", "product P1 P2", "hypersurface P3 2", "hypersurface P3 3", "hypersurface P4 4"];
    for name in names {
        let s = spec(name).kind.stream(120).unwrap();
        let path = dir.path().join("s.amls");
        write_stream(&s, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes, encode_stream(&s).unwrap(), "{name}");
        let back = read_stream(&path).unwrap();
        assert_eq!(back.coeffs, s.coeffs, "{name}");
        assert_eq!(back.beta, s.beta);
        assert_eq!(back.r, s.r);
        assert_eq!(encode_stream(&back).unwrap(), bytes, "{name}");
    }
}

#[test]
fn cache_rejects_other_versions_and_garbage() {
    let s = spec("P2").kind.stream(5).unwrap();
    let mut bytes = encode_stream(&s).unwrap();
    bytes[8..12].copy_from_slice(&2u32.to_le_bytes());
    assert!(matches!(decode_stream(&bytes), Err(Error::Cache(_))));
    assert!(matches!(decode_stream(b"not a cache at all"), Err(Error::Cache(_))));
    let mut long = encode_stream(&s).unwrap();
    long.push(0);
    assert!(matches!(decode_stream(&long), Err(Error::Cache(_))));
}

fn generated(dir: &tempfile::TempDir, name: &str, m: usize) -> PathBuf {
    let path = dir.path().join(format!("{}.amls", name.replace(' ', "_")));
    cmd_gen(&spec(name), m, &path).unwrap();
    path
}

#[test]
fn commands_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p3 = generated(&dir, "P3", 300);
    let again = dir.path().join("again.amls");
    cmd_gen(&spec("P3"), 300, &again).unwrap();
    assert_eq!(std::fs::read(&p3).unwrap(), std::fs::read(&again).unwrap());
    let fit = || json(&cmd_fit(&p3, None, Functional::Point).unwrap());
    assert_eq!(fit(), fit());
    let scale = || json(&cmd_scale(&p3, 4.0, 0.0, ScaleMode::Gamma, Some((10, 20))).unwrap());
    assert_eq!(scale(), scale());
    let sc = cmd_fit(&p3, None, Functional::Point).unwrap();
    let cont = || json(&cmd_continuous(&p3, &sc, &[0.0, 0.5], None).unwrap());
    assert_eq!(cont(), cont());
    let report = || json(&cmd_report(&p3, None, Functional::Point).unwrap());
    assert_eq!(report(), report());
    for name in ["X3", "P4", "hypersurface P3 3"] {
        assert_eq!(json(&cmd_spectra(&spec(name)).unwrap()), json(&cmd_spectra(&spec(name)).unwrap()));
        assert_eq!(json(&cmd_gamma_class(&spec(name)).unwrap()), json(&cmd_gamma_class(&spec(name)).unwrap()));
    }
    let x3 = generated(&dir, "X3", 60);
    let rows = [14, 15, 16, 17, 30];
    assert_eq!(json(&cmd_table_x3(&x3, &rows).unwrap()), json(&cmd_table_x3(&x3, &rows).unwrap()));
}

#[test]
fn table_presentation_parses_back_to_table_mode_values() {
    let dir = tempfile::tempdir().unwrap();
    let x3 = generated(&dir, "X3", 60);
    let rows = [14, 15, 16, 17, 30, 60];
    let table = cmd_table_x3(&x3, &rows).unwrap();
    let parsed = X3Table::parse_presentation_csv(&table.to_presentation_csv()).unwrap();
    let s = read_stream(&x3).unwrap();
    let t = x3_spectrum().unwrap().spectral_radius;
    for (m, cells) in parsed {
        let direct = scale_coefficients(&s, t, PI, ScaleMode::Table, m..=m).unwrap();
        for (k, (got, want)) in cells.iter().zip(&direct[0].0).enumerate() {
            let want = want * 1e3;
            for (g, w) in [(got.re, want.re), (got.im, want.im)] {
                // six significant digits: half a unit in the sixth place
                assert!((g - w).abs() <= 5.0001e-6 * w.abs(), "m = {m}, column {k}: {g} vs {w}");
            }
        }
    }
}

#[test]
fn validation_errors_map_to_exit_code_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ManifoldSpec::resolve("P0").unwrap_err().exit_code(), 2);
    assert_eq!(ManifoldSpec::resolve("hypersurface P3 5").unwrap_err().exit_code(), 2);
    let err = cmd_gen(&spec("P2"), 0, &dir.path().join("x")).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let p1 = generated(&dir, "P1", 20);
    assert_eq!(cmd_fit(&p1, Some((5, 40)), Functional::Point).unwrap_err().exit_code(), 2);
    assert_eq!(cmd_fit(&p1, Some((5, 10)), Functional::Index(9)).unwrap_err().exit_code(), 2);
}
