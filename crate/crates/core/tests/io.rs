use starprod_core::io::*;
use starprod_core::C64;

#[test]
fn complex_parsing() {
    assert_eq!(parse_complex("1,-0.5").unwrap(), C64::new(1.0, -0.5));
    assert_eq!(parse_complex("2").unwrap(), C64::new(2.0, 0.0));
    assert!(parse_complex("1,2,3").is_err());
    assert!(parse_complex("x").is_err());
}

#[test]
fn state_specs() {
    assert_eq!("fock:3".parse::<StateSpec>().unwrap(), StateSpec::Fock(3));
    assert_eq!("coherent:0.5,1".parse::<StateSpec>().unwrap(), StateSpec::Coherent(C64::new(0.5, 1.0)));
    assert!("fock:x".parse::<StateSpec>().is_err());
}

#[test]
fn csv_table_round_trip() {
    let mut t = Table::new(&["a", "b"]).with_meta("norm", 1.0);
    t.push(vec![0.1, -2.5e-17]);
    let mut buf = Vec::new();
    t.write(&mut buf, Format::Csv).unwrap();
    let text = String::from_utf8(buf.clone()).unwrap();
    assert!(text.starts_with("# norm=1\na,b\n1.0000000000000001e-1,"));
    let back = Table::read(buf.as_slice(), Format::Csv).unwrap();
    assert_eq!(back, t);
}

use starprod_core::fock::fock_state;
use starprod_core::wigner::{wigner_function, PhaseGrid};
use starprod_core::FockOperator;

#[test]
fn symbol_grids_round_trip_in_both_formats() {
    let rho = fock_state(1, 12).unwrap();
    let w = wigner_function(&rho, &PhaseGrid::square(2.0, 5).unwrap()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for name in ["w.csv", "w.json"] {
        let path = dir.path().join(name);
        let file = std::fs::File::create(&path).unwrap();
        write_symbol_grid(&w, file, Format::from_path(&path), &[("state", "fock:1".into())]).unwrap();
        let back = read_symbol_grid(&path).unwrap();
        assert_eq!(back.labels(), w.labels());
        assert_eq!(back.values(), w.values());
        assert_eq!(back.weights(), w.weights());
        assert_eq!(Table::read_path(&path).unwrap().metadata["state"], "fock:1");
    }
}

#[test]
fn state_files() {
    let dir = tempfile::tempdir().unwrap();
    let mix = dir.path().join("mix.json");
    std::fs::write(&mix, r#"{"components":[{"weight":0.25,"state":"fock:0"},{"weight":0.75,"state":"coherent:0.5,0"}]}"#).unwrap();
    let rho = StateSpec::File(mix).build(16).unwrap();
    assert!((rho.rho().trace().re - 1.0).abs() < 1e-9);
    assert!((rho.rho().get(0, 0).re - (0.25 + 0.75 * (-0.25f64).exp())).abs() < 1e-9);

    let mat = dir.path().join("mat.json");
    std::fs::write(&mat, r#"{"re":[[0.5,0.5],[0.5,0.5]]}"#).unwrap();
    let rho = StateSpec::File(mat).build(6).unwrap();
    assert_eq!(rho.dim(), 6);
    assert!((rho.rho().get(1, 0).re - 0.5).abs() < 1e-15);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"re":[[2.0]]}"#).unwrap();
    assert!(StateSpec::File(bad).build(4).is_err());
    assert!(StateSpec::File(dir.path().join("missing.json")).build(4).is_err());
}

#[test]
fn operator_tables_list_every_entry() {
    let t = operator_table(&FockOperator::identity(3));
    assert_eq!(t.rows.len(), 9);
    assert_eq!(t.columns, ["row", "col", "re", "im"]);
    assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
    assert!("xml".parse::<Format>().is_err());
}
