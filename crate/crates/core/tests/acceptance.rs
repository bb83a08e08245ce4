//! Runs every acceptance criterion and prints one line per criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use opkit::algebras::{induced_dual_derivation, random_gauge_instance, square_residual, RandomSpec};
use opkit::commands::{cmd_pd_build, cmd_pd_verify};
use opkit::duality::{check_decomposition, cobar_complex, koszul_report, quadratic_dual, CobarOptions};
use opkit::hatop::{base_arity, check_hat_associativity, cross_validate, hat_signatures, kind, HatKind, HatOperad};
use opkit::operad::presets::{expected_dim, preset, word_rank, Preset};
use opkit::operad::{check_cyclic_axioms, Mutation as CyclicMutation, Operad, OperadData};
use opkit::pdspace::{verify, BuildOptions, Mutation, PdAlgebra, PdFile, SimplicialComplex};
use opkit::trees::Signature;
use opkit::Error;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn op(p: Preset) -> Arc<Operad> {
    Arc::new(Operad::new(preset(p)).expect("preset"))
}

fn uncolored_dims(o: &Operad, max: usize) -> Vec<usize> {
    (1..=max).map(|n| o.dim(&Signature::uncolored(n))).collect()
}

fn preset_dims() -> Outcome {
    let t = Instant::now();
    for p in Preset::ALL {
        let o = op(p);
        for n in 1..=5 {
            let (dim, words, closed) = (o.dim(&Signature::uncolored(n)), word_rank(p, n), expected_dim(p, n));
            ensure(dim == words && dim == closed, || format!("{} n={n}: quotient {dim}, words {words}, closed form {closed}", p.name()))?;
        }
    }
    ensure(t.elapsed() < Duration::from_secs(10), || format!("took {:?}", t.elapsed()))?;
    Ok(format!("assoc, comm, lie for n <= 5 in {:?}", t.elapsed()))
}

fn dual_dims() -> Outcome {
    for (p, target) in [(Preset::Comm, Preset::Lie), (Preset::Assoc, Preset::Assoc)] {
        let dual = Operad::new(quadratic_dual(&preset(p)).map_err(|e| e.to_string())?.presentation).map_err(|e| e.to_string())?;
        let got = uncolored_dims(&dual, 4);
        let want: Vec<usize> = (1..=4).map(|n| expected_dim(target, n)).collect();
        ensure(got == want, || format!("{}^! dims {got:?}, expected {want:?}", p.name()))?;
    }
    Ok("Comm^! = [1,1,2,6], Assoc^! = [1,2,6,24]".into())
}

fn koszul(hat: bool, presets: &[Preset]) -> Outcome {
    let mut lines = Vec::new();
    for &p in presets {
        let r = koszul_report(&preset(p), 4, hat, CobarOptions::default()).map_err(|e| e.to_string())?;
        for e in &r.entries {
            ensure(e.pass, || format!("{} {}: homology {:?} in degrees {:?}", p.name(), e.signature, e.homology, e.degrees))?;
        }
        if !hat {
            let h0: Vec<usize> = r.entries.iter().map(|e| e.target).collect();
            let want: Vec<usize> = (2..=4).map(|n| expected_dim(p, n)).collect();
            ensure(h0 == want, || format!("{} targets {h0:?}", p.name()))?;
        }
        lines.push(format!("{} {} signatures", p.name(), r.entries.len()));
    }
    Ok(lines.join(", "))
}

fn hat_koszul() -> Outcome {
    let mut kinds = Vec::new();
    for p in [Preset::Assoc, Preset::Comm] {
        let h = HatOperad::new(op(p)).map_err(|e| e.to_string())?;
        for n in 2..=4 {
            for s in hat_signatures(n) {
                let want = expected_dim(p, base_arity(&s).expect("admissible"));
                ensure(h.dim(&s) == want, || format!("{} {s}: direct dim {} vs {want}", p.name(), h.dim(&s)))?;
                kinds.push(kind(&s));
            }
        }
    }
    for k in [HatKind::Full, HatKind::Dashed, HatKind::Empty] {
        ensure(kinds.contains(&k), || format!("no signature of kind {k:?}"))?;
    }
    koszul(true, &[Preset::Assoc, Preset::Comm])
}

fn hat_consistency() -> Outcome {
    let mut count = 0;
    for p in Preset::ALL {
        for c in cross_validate(&preset(p), 4).map_err(|e| e.to_string())? {
            ensure(c.pass, || format!("{} {}: presented {} direct {}", p.name(), c.signature, c.presented, c.direct))?;
            count += 1;
        }
    }
    Ok(format!("{count} signatures"))
}

fn cyclic_and_associativity() -> Outcome {
    for p in Preset::ALL {
        let o = op(p);
        let c = check_cyclic_axioms(&o, 5, CyclicMutation::None).map_err(|e| e.to_string())?;
        ensure(c.pass, || format!("{} cyclic: {:?}", p.name(), c.violations))?;
        let h = HatOperad::new(o).map_err(|e| e.to_string())?;
        let a = check_hat_associativity(&h, 5);
        ensure(a.pass, || format!("{} hat associativity: {:?}", p.name(), a.violations))?;
    }
    Ok("presets, total arity <= 5".into())
}

fn star_hash() -> Outcome {
    let h = HatOperad::new(op(Preset::Assoc)).map_err(|e| e.to_string())?;
    let mut cells = 0;
    for n in 2..=4 {
        let r = check_decomposition(&h, n).map_err(|e| e.to_string())?;
        ensure(r.pass, || format!("n={n}: {r:?}"))?;
        cells += r.cells;
    }
    Ok(format!("{cells} cells"))
}

fn induced_dual() -> Outcome {
    let mut instances = 0;
    let mut nontrivial = 0;
    for p in Preset::ALL {
        let dual = Arc::new(Operad::new(quadratic_dual(&preset(p)).map_err(|e| e.to_string())?.presentation).map_err(|e| e.to_string())?);
        for seed in 0..24 {
            let inst = random_gauge_instance(&RandomSpec { operad: dual.clone(), max_order: 3, max_total_dim: 6, seed });
            let (alg, s) = (&inst.alg, &inst.data);
            let mut dg = s.d.clone();
            dg.extend(s.g.clone());
            ensure(square_residual(alg, &s.d, &s.v).is_empty() && square_residual(alg, &dg, &s.w).is_empty(), || {
                format!("{} seed {seed}: instance has d^2 or g^2 nonzero", p.name())
            })?;
            let h = induced_dual_derivation(alg, &s.v, &s.w, &s.w_dual, &s.g);
            let mut dh = s.d.clone();
            dh.extend(h.clone());
            ensure(square_residual(alg, &dh, &s.w_dual).is_empty(), || format!("{} seed {seed}: h^2 != 0", p.name()))?;
            instances += 1;
            nontrivial += usize::from(!h.is_empty());
        }
    }
    ensure(nontrivial >= 20, || format!("only {nontrivial} instances with h != 0"))?;
    Ok(format!("{instances} instances, {nontrivial} with h != 0"))
}

fn pipeline() -> Outcome {
    let mut lines = Vec::new();
    for (name, c, order) in [("circle", SimplicialComplex::sphere(1), 4), ("sphere", SimplicialComplex::sphere(2), 3)] {
        let t = Instant::now();
        let built = PdAlgebra::new(c, order).build(&BuildOptions::new(order)).map_err(|e| e.to_string())?;
        let text = serde_json::to_string(&PdFile::from_structure(&built)).map_err(|e| e.to_string())?;
        let file: PdFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let r = verify(&file).map_err(|e| e.to_string())?;
        let elapsed = t.elapsed();
        for name in ["d2_is_aw", "mu_cycle", "mu_unit_coefficients", "d_square", "g_square", "h_square", "f_intertwines", "locality"] {
            ensure(r.checks.iter().any(|c| c.name == name), || format!("missing check {name}"))?;
        }
        ensure(r.pass, || format!("{name}: {:?} {:?}", r.first_failure(), r.locality_violations))?;
        ensure(elapsed < Duration::from_secs(60), || format!("{name} took {elapsed:?}"))?;
        lines.push(format!("{name} order {order} in {elapsed:?}"));
    }
    Ok(lines.join(", "))
}

fn temp_path(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("opkit-acceptance-{}-{name}", std::process::id()))
}

fn squares_and_mutations() -> Outcome {
    // every constructed complex: cobar complexes check δ² = 0 when built
    let mut complexes = 0;
    for p in Preset::ALL {
        let o = op(p);
        let dual = Arc::new(Operad::new(quadratic_dual(&preset(p)).map_err(|e| e.to_string())?.presentation).map_err(|e| e.to_string())?);
        let hd = HatOperad::new(dual.clone()).map_err(|e| e.to_string())?;
        for n in 2..=4 {
            cobar_complex(dual.as_ref(), &Signature::uncolored(n), CobarOptions::default()).map_err(|e| e.to_string())?;
            cobar_complex(o.as_ref(), &Signature::uncolored(n), CobarOptions::default()).map_err(|e| e.to_string())?;
            complexes += 2;
            for s in hat_signatures(n) {
                cobar_complex(&hd, &s, CobarOptions::default()).map_err(|e| e.to_string())?;
                complexes += 1;
            }
        }
    }
    for c in [SimplicialComplex::sphere(1), SimplicialComplex::sphere(2), SimplicialComplex::sphere(3)] {
        c.chain_complex().map_err(|e| e.to_string())?;
        complexes += 1;
    }

    // corrupted signs
    let dual = Operad::new(quadratic_dual(&preset(Preset::Assoc)).map_err(|e| e.to_string())?.presentation).map_err(|e| e.to_string())?;
    let bad = cobar_complex(&dual, &Signature::uncolored(4), CobarOptions { ignore_orientation: true });
    ensure(matches!(bad, Err(Error::CobarSquare(_))), || "cobar complex without orientation signs was accepted".into())?;
    for p in Preset::ALL {
        let c = check_cyclic_axioms(&op(p), 4, CyclicMutation::NegateOutputVertex).map_err(|e| e.to_string())?;
        ensure(!c.pass, || format!("{}: corrupted rotation sign passed", p.name()))?;
    }

    // the three structure-file mutations, through the command layer
    let complex = temp_path("circle.json");
    std::fs::write(&complex, r#"{"vertices": 3, "simplices": [[0,1],[1,2],[0,2]]}"#).map_err(|e| e.to_string())?;
    for (m, label) in [(Mutation::CorruptSign, "corrupted sign"), (Mutation::SkipCorrection(3), "skipped correction"), (Mutation::PerturbCoefficient, "perturbed coefficient")] {
        let out = temp_path("mutant.json");
        let built = cmd_pd_build(vec![], &complex, 4, &out, Some(m)).map_err(|e| e.to_string())?;
        let checked = cmd_pd_verify(vec![], &out).map_err(|e| e.to_string())?;
        ensure(!built.pass && built.exit_code() != 0, || format!("{label}: build report passed"))?;
        ensure(!checked.pass && checked.exit_code() != 0, || format!("{label}: verify report passed"))?;
        if m == Mutation::SkipCorrection(3) {
            let first = checked.records.iter().find(|r| r.name == "g_square" && !r.pass).map(|r| r.key.clone());
            ensure(first.as_deref() == Some("order 3"), || format!("skipped correction first fails at {first:?}"))?;
        }
        let _ = std::fs::remove_file(&out);
    }
    let clean = temp_path("clean.json");
    let ok = cmd_pd_build(vec![], &complex, 4, &clean, None).map_err(|e| e.to_string())?;
    ensure(ok.pass && ok.exit_code() == 0, || "unmutated build failed".into())?;
    let _ = std::fs::remove_file(&clean);
    let _ = std::fs::remove_file(&complex);
    Ok(format!("{complexes} complexes with δ² = 0, 5 mutations detected"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("preset dimensions vs word oracle", preset_dims),
        ("quadratic duals", dual_dims),
        ("uncolored Koszulness", || koszul(false, &Preset::ALL)),
        ("hat Koszulness", hat_koszul),
        ("hat presentation vs direct dims", hat_consistency),
        ("cyclic axioms and hat associativity", cyclic_and_associativity),
        ("star/hash decomposition", star_hash),
        ("induced dual squares to zero", induced_dual),
        ("PD pipeline", pipeline),
        ("square-zero and mutation detection", squares_and_mutations),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} ({ms} ms)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} ({ms} ms)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
