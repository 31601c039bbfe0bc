use proptest::prelude::*;
use wavefront::profile_io::{load, read_csv, save, write_csv};
use wavefront_core::prelude::*;

fn solved(h: f64, c: f64) -> (Profile, Vec<Profile>) {
    let opts = SolveOptions {
        delta: 0.05,
        iteration: IterationOptions {
            emit_iterates: 2,
            ..IterationOptions::default()
        },
        ..SolveOptions::default()
    };
    let out = solve(&ModelParams::new(h, c).unwrap(), &opts).unwrap();
    (out.profile, out.iterates)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn emitted_profiles_reparse(h in 0.0f64..0.35, c in 2.05f64..4.0) {
        let (phi, iterates) = solved(h, c);
        let dir = tempfile::tempdir().unwrap();
        for (stem, p) in std::iter::once(("profile", &phi)).chain(iterates.iter().map(|p| ("iterate", p))) {
            save(dir.path(), stem, p, h, c).unwrap();
            let back = load(&dir.path().join(format!("{stem}.csv")), &dir.path().join(format!("{stem}.json"))).unwrap();
            prop_assert!(back.validate().is_ok());
            prop_assert_eq!(&back.values, &p.values);
            prop_assert_eq!(back.grid, p.grid);
            prop_assert_eq!(back.left, p.left);
            prop_assert_eq!(back.right, p.right);
        }
    }
}

#[test]
fn rejects_malformed_csv() {
    assert!(read_csv("x,y\n1,2\n".as_bytes()).is_err());
    assert!(read_csv("t,phi\n1,abc\n".as_bytes()).is_err());

    let (phi, _) = solved(0.0, 2.5);
    let mut buf = Vec::new();
    write_csv(&mut buf, &phi).unwrap();
    let (ts, vs) = read_csv(&buf[..]).unwrap();
    assert_eq!(vs, phi.values);
    assert_eq!(ts.len(), phi.len());
}
