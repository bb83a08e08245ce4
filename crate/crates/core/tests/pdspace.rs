use std::time::{Duration, Instant};

use opkit::pdspace::{verify, BuildOptions, Mutation, PdAlgebra, PdFile, PdReport, SimplicialComplex};

fn run(c: SimplicialComplex, opts: BuildOptions) -> PdReport {
    let built = PdAlgebra::new(c, opts.order).build(&opts).unwrap();
    let text = serde_json::to_string(&PdFile::from_structure(&built)).unwrap();
    let file: PdFile = serde_json::from_str(&text).unwrap();
    verify(&file).unwrap()
}

fn assert_passes(r: &PdReport) {
    assert!(r.pass, "first failure {:?}, locality {:?}", r.first_failure(), r.locality_violations);
    for name in ["d_square", "g_square", "h_square", "f_intertwines", "chi_chain"] {
        assert_eq!(r.checks.iter().filter(|c| c.name == name).count(), r.order, "{name}");
    }
}

#[test]
fn circle_through_order_four() {
    let t = Instant::now();
    let r = run(SimplicialComplex::sphere(1), BuildOptions::new(4));
    assert_passes(&r);
    assert_eq!(r.f_degree, -1);
    assert!(t.elapsed() < Duration::from_secs(60));
}

#[test]
fn sphere_through_order_three() {
    let t = Instant::now();
    let r = run(SimplicialComplex::sphere(2), BuildOptions::new(3));
    assert_passes(&r);
    assert_eq!(r.f_degree, -2);
    assert!(t.elapsed() < Duration::from_secs(60));
}

#[test]
fn point_is_trivial() {
    let c = SimplicialComplex::new(1, &[vec![0]]).unwrap();
    for order in 1..=3 {
        let built = PdAlgebra::new(c.clone(), order).build(&BuildOptions::new(order)).unwrap();
        let higher = built.d.values().flat_map(|e| e.keys()).filter(|w| w.len() > 2).count();
        assert_eq!(higher, 0);
        assert!(verify(&PdFile::from_structure(&built)).unwrap().pass);
    }
}

#[test]
fn mutations_are_detected() {
    let circle = SimplicialComplex::sphere(1);
    let r = run(circle.clone(), BuildOptions { order: 4, mutation: Some(Mutation::CorruptSign) });
    assert!(!r.pass && r.failed("d2_is_aw"));

    let r = run(circle.clone(), BuildOptions { order: 4, mutation: Some(Mutation::SkipCorrection(3)) });
    assert!(!r.pass);
    let first = r.checks.iter().find(|c| c.name == "g_square" && !c.pass).unwrap();
    assert_eq!(first.order, Some(3));

    let clean = PdAlgebra::new(circle.clone(), 4).build(&BuildOptions::new(4)).unwrap();
    let top = (0..circle.len()).filter(|&i| circle.dim(i) == 1).map(|i| clean.pd.v[i]);
    let perturbed = top.flat_map(|x| clean.d.get(&x).into_iter().flat_map(|e| e.keys().map(|w| w.len()))).max();
    let r = run(circle, BuildOptions { order: 4, mutation: Some(Mutation::PerturbCoefficient) });
    assert!(!r.pass);
    assert_eq!(r.first_failure().unwrap().order, perturbed);
}

#[test]
fn edited_file_fails() {
    let built = PdAlgebra::new(SimplicialComplex::sphere(1), 3).build(&BuildOptions::new(3)).unwrap();
    let mut file = PdFile::from_structure(&built);
    file.mu[0] = "2".into();
    let r = verify(&file).unwrap();
    assert!(r.failed("mu_unit_coefficients") && r.failed("mu_cycle"));
}
