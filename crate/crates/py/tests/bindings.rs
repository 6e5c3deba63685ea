use heisweil::weil::VerifyMode;
use heisweil_py::config;

#[test]
fn config_from_keyword_arguments() {
    let cfg = config(5, 1, 3, 1, "sampled", 40, 9).unwrap();
    assert_eq!((cfg.p, cfg.ell, cfg.precision, cfg.k0, cfg.samples, cfg.seed), (5, 1, 3, 1, 40, 9));
    assert_eq!(cfg.mode, VerifyMode::Sampled);
    assert!(config(3, 1, 4, 1, "sometimes", 1, 0).is_err());
}
