//! Pins the text format and the JSON report layout against checked-in files.

use std::fs;
use std::path::PathBuf;

use bernstein_core::dsl::{parse, serialize, AlgebraFile};
use bernstein_core::report::{build_report, emit_report, ReportOptions};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn algebra_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "alg"))
        .collect();
    files.sort();
    files
}

#[test]
fn every_golden_file_round_trips() {
    let files = algebra_files();
    assert!(files.len() >= 8);
    for path in files {
        let text = fs::read_to_string(&path).unwrap();
        let parsed = parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        let once = serialize(&parsed);
        assert_eq!(parse(&once).unwrap(), parsed, "{}", path.display());
        assert_eq!(serialize(&parse(&once).unwrap()), once, "{}", path.display());
        let canonical = serialize(&AlgebraFile::from_named_algebra(&parsed.to_named_algebra()));
        assert_eq!(
            serialize(&AlgebraFile::from_named_algebra(&parse(&canonical).unwrap().to_named_algebra())),
            canonical
        );
    }
}

#[test]
fn family_files_are_canonical() {
    for name in ["bdown2", "bdown3", "bup4", "jordan3", "squareshift3", "zhevlakov4"] {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.alg"))).unwrap();
        assert_eq!(serialize(&parse(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn reports_match_golden_json() {
    let opts = ReportOptions { full: true, ..ReportOptions::default() };
    for name in ["bdown3", "jordan3", "squareshift3", "nuclear4", "peirce_corrupted"] {
        let text = fs::read_to_string(golden_dir().join(format!("{name}.alg"))).unwrap();
        let named = parse(&text).unwrap().to_named_algebra();
        let report = emit_report(&build_report(&named, &opts).unwrap());
        let expected = fs::read_to_string(golden_dir().join(format!("reports/{name}.json"))).unwrap();
        assert_eq!(report, expected, "{name}");
    }
}

#[test]
fn report_key_order_is_stable() {
    let text = fs::read_to_string(golden_dir().join("bdown3.alg")).unwrap();
    let named = parse(&text).unwrap().to_named_algebra();
    let json = emit_report(&build_report(&named, &ReportOptions { full: true, ..Default::default() }).unwrap());
    let keys = [
        "\"algebra\"", "\"dimension\"", "\"basis\"", "\"baric\"", "\"weight\"", "\"flags\"", "\"witnesses\"",
        "\"identities\"", "\"peirce\"", "\"powers\"", "\"fixed_subspace\"", "\"mult_closure\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap_or_else(|| panic!("{k}"))).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}
