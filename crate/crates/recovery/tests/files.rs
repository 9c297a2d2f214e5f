use sepsparse_recovery::io::{read_config, read_signal_csv, write_signal_csv};
use sepsparse_recovery::{generate_signal, GeneratorParams, RecoveryError};

#[test]
fn generated_signal_survives_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.csv");
    let sig = generate_signal(&GeneratorParams {
        d: 1000,
        alpha: 50.0,
        beta: 5.0,
        sigma: 0.1,
        seed: 7,
    })
    .unwrap();
    write_signal_csv(&path, &sig.values).unwrap();
    assert_eq!(read_signal_csv(&path).unwrap(), sig.values);
}

#[test]
fn config_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bench.cfg");
    std::fs::write(&cfg, "d = 1000,10000\ntrials=10\n").unwrap();
    let map = read_config(&cfg).unwrap();
    assert_eq!(map["trials"], "10");
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1.0\n2.0\nx\n").unwrap();
    assert!(matches!(
        read_signal_csv(&bad),
        Err(RecoveryError::Malformed { line: 3, .. })
    ));
    assert!(matches!(
        read_signal_csv(&dir.path().join("missing.csv")),
        Err(RecoveryError::Io(_))
    ));
}
