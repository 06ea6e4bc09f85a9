use pw::cli::{run, EPSILON_VAR};

#[test]
fn epsilon_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.pw");
    let b = dir.path().join("b.pw");
    std::fs::write(&a, "pw 1 -> 1 { white(1) }").unwrap();
    std::fs::write(&b, "pw 1 -> 1 { white(1.001) }").unwrap();
    let args = ["pw", "equal", a.to_str().unwrap(), b.to_str().unwrap()];
    let code = |var: Option<&str>| {
        match var {
            Some(v) => std::env::set_var(EPSILON_VAR, v),
            None => std::env::remove_var(EPSILON_VAR),
        }
        let (mut out, mut err) = (Vec::new(), Vec::new());
        run(args, &mut out, &mut err)
    };
    assert_eq!(code(None), 1);
    assert_eq!(code(Some("0.01")), 0);
    assert_eq!(code(Some("not-a-number")), 2);
    assert_eq!(code(Some("-1")), 2);
    std::env::remove_var(EPSILON_VAR);
}
