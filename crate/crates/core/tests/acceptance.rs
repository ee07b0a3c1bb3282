//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the counts it verified. Every tolerance here is exact equality or
//! an explicit count; nothing is sampled without a fixed seed.

mod common;

use common::{
    full_functor_corpus, identity_functor_corpus, list_functor_corpus, ord_functor_corpus,
    random_map, Rng,
};
use tcat_core::cat::{
    enumerate_functors, mulcat_perfect_check, ord_perfect_check, validate_category,
    validate_functor, TFunctor,
};
use tcat_core::factor::{
    check_orthogonal, compare_over_base, factorize, is_perfect, street_walters_oracle,
};
use tcat_core::finset::{pullback, quotient_by_pair, reflexive_coequalizer, FinMap, FinSet};
use tcat_core::limits::{mediate_pullback, pullback_tcat};
use tcat_core::monad::{Monad, TTerm};
use tcat_core::standard::{example_f, walking_arrow};

#[test]
fn criterion_01_oracle_equivalence() {
    let corpus = identity_functor_corpus();
    assert!(corpus.len() >= 20);
    let mut verified = 0;
    for f in &corpus {
        assert!(f.source().objects().len() <= 5);
        assert!(f.source().morphisms().len() <= 15);
        let fr = factorize(f, false).unwrap();
        let oracle = street_walters_oracle(f).unwrap();
        let iso = compare_over_base(&fr.perfect, &oracle.proj, 1_000_000).unwrap();
        assert!(iso.is_some(), "no iso over the base for corpus functor");
        let (h, h_inv) = iso.unwrap();
        assert_eq!(h.then(&h_inv).unwrap(), TFunctor::identity(fr.mid.clone()));
        verified += 1;
    }
    println!("criterion 01 oracle equivalence: PASS ({verified}/{} isos found)", corpus.len());
}

#[test]
fn criterion_02_example_f_golden_output() {
    let fr = factorize(&example_f(), true).unwrap();
    assert_eq!(fr.mid.objects().len(), 3);
    assert_eq!(fr.mid.morphisms().len(), 4);
    assert_eq!(fr.perfect.f0().preimage("0").len(), 1);
    assert_eq!(fr.perfect.f0().preimage("1").len(), 2);
    println!("criterion 02 example F golden output: PASS (3 objects, 4 morphisms, fibers 1/2)");
}

#[test]
fn criterion_03_factorization_contract() {
    let corpus = full_functor_corpus();
    let mut verified = 0;
    for f in &corpus {
        let fr = factorize(f, false).unwrap();
        assert_eq!(fr.unit.then(&fr.perfect).unwrap(), *f, "p∘r must equal f exactly");
        assert!(is_perfect(&fr.perfect).unwrap());
        assert!(validate_category(&fr.mid, true).unwrap().passed());
        assert!(validate_functor(&fr.unit, true).unwrap().passed());
        assert!(validate_functor(&fr.perfect, true).unwrap().passed());
        verified += 1;
    }
    println!("criterion 03 factorization contract: PASS ({verified}/{verified} functors)");
}

#[test]
fn criterion_04_orthogonality_suite() {
    let corpus = identity_functor_corpus();
    let perfect_targets = vec![
        TFunctor::identity(walking_arrow()),
        factorize(&example_f(), false).unwrap().perfect,
    ];
    let mut pairs = 0;
    for f in &corpus {
        let unit = factorize(f, false).unwrap().unit;
        for q in &perfect_targets {
            assert!(is_perfect(q).unwrap());
            assert!(
                check_orthogonal(&unit, q, 5_000_000).unwrap(),
                "a factorization unit failed orthogonality"
            );
            pairs += 1;
        }
    }
    assert!(pairs >= 50, "only {pairs} pairs checked");
    println!("criterion 04 orthogonality suite: PASS ({pairs} pairs, zero failures)");
}

#[test]
fn criterion_05_idempotence_on_perfect_functors() {
    let mut perfect_pool: Vec<TFunctor> = Vec::new();
    for f in full_functor_corpus() {
        perfect_pool.push(factorize(&f, false).unwrap().perfect);
    }
    for f in identity_functor_corpus().iter().take(5) {
        perfect_pool.push(street_walters_oracle(f).unwrap().proj);
    }
    let mut verified = 0;
    for p in &perfect_pool {
        assert!(is_perfect(p).unwrap());
        let again = factorize(p, false).unwrap();
        assert!(again.unit.f0().is_bijective(), "unit object part must be bijective");
        assert!(again.unit.f1().is_bijective(), "unit morphism part must be bijective");
        verified += 1;
    }
    println!("criterion 05 idempotence: PASS ({verified} perfect functors re-factored)");
}

#[test]
fn criterion_06_characterization_agreement() {
    let mut checked = 0;
    // multicategory characterization on the list-monad corpus
    for f in list_functor_corpus() {
        assert_eq!(
            mulcat_perfect_check(&f).unwrap(),
            is_perfect(&f).unwrap(),
            "multicategory check disagrees with the pullback test"
        );
        checked += 1;
    }
    // downset characterization on monotone maps, including the 2-chain
    // onto the point
    let mut saw_negative_chain = false;
    for (p, q, map, functor) in ord_functor_corpus() {
        let downsets = ord_perfect_check(&p, &q, &map).unwrap();
        let pullback_test = is_perfect(&functor).unwrap();
        assert_eq!(downsets, pullback_test, "downset check disagrees with the pullback test");
        if p.set().name() == "chain2" && q.set().name() == "pt" {
            assert!(!downsets, "the 2-chain onto the point must fail");
            saw_negative_chain = true;
        }
        checked += 1;
    }
    assert!(saw_negative_chain);
    assert!(checked >= 30, "only {checked} functors checked");
    println!("criterion 06 characterization agreement: PASS ({checked} functors, 100% agreement)");
}

#[test]
fn criterion_07_pullback_stability() {
    let corpus = full_functor_corpus();
    let mut cospans = 0;
    for f in &corpus {
        if cospans >= 20 {
            break;
        }
        let fr = factorize(f, false).unwrap();
        // the cospan (f, p) over B, with p perfect
        let pb = pullback_tcat(f, &fr.perfect).unwrap();
        assert!(
            is_perfect(&pb.leg_left).unwrap(),
            "the leg opposite to a perfect functor must be perfect"
        );
        assert!(validate_category(&pb.apex, true).unwrap().passed());
        // mediating morphism from the cone (identity, unit)
        let cone_s = TFunctor::identity(f.source().clone());
        let u = mediate_pullback(&pb, &cone_s, &fr.unit).unwrap();
        assert!(validate_functor(&u, false).unwrap().passed());
        assert_eq!(u.then(&pb.leg_left).unwrap(), cone_s);
        assert_eq!(u.then(&pb.leg_right).unwrap(), fr.unit);
        // uniqueness by enumeration
        let all = enumerate_functors(f.source(), &pb.apex, 5_000_000).unwrap();
        let mediators = all
            .iter()
            .filter(|w| {
                w.then(&pb.leg_left).map(|x| x == cone_s).unwrap_or(false)
                    && w.then(&pb.leg_right).map(|x| x == fr.unit).unwrap_or(false)
            })
            .count();
        assert_eq!(mediators, 1, "mediating morphism must be unique");
        cospans += 1;
    }
    assert!(cospans >= 20, "only {cospans} cospans checked");
    println!("criterion 07 pullback stability: PASS ({cospans}/{cospans} cospans)");
}

#[test]
fn criterion_08_kernel_law_suites() {
    let mut rng = Rng::new(0x7ca7_0001);
    let elems = ["a", "b", "c", "d"];
    let base = FinSet::new("X", elems).unwrap();
    let monad = Monad::List;

    // monad laws and fiber soundness/completeness
    for _ in 0..1000 {
        let f = FinMap::from_indices(base.clone(), base.clone(), {
            (0..4).map(|_| rng.below(4)).collect()
        });
        let len = rng.below(7);
        let t = TTerm::flat_list((0..len).map(|_| elems[rng.below(4)].to_string()));
        // unit laws
        assert_eq!(monad.flatten(&TTerm::list([t.clone()])).unwrap(), t);
        let teta = monad.t_apply_assign(&t, |x| Ok(monad.unit(x))).unwrap();
        assert_eq!(monad.flatten(&teta).unwrap(), t);
        // naturality of the unit on each element
        let x = elems[rng.below(4)];
        assert_eq!(
            monad.t_apply(&f, &monad.unit(x)).unwrap(),
            monad.unit(f.apply(x).unwrap())
        );
        // fiber soundness and completeness against same-length brute force
        let image = monad.t_apply(&f, &t).unwrap();
        let fib = monad.fiber(&f, &image).unwrap();
        assert!(fib.contains(&t));
        let mut brute = 0usize;
        let mut odo = vec![0usize; len];
        loop {
            let candidate = TTerm::flat_list(odo.iter().map(|&i| elems[i].to_string()));
            if monad.t_apply(&f, &candidate).unwrap() == image {
                brute += 1;
                assert!(fib.contains(&candidate));
            }
            let mut pos = len;
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                odo[pos] += 1;
                if odo[pos] < 4 {
                    done = false;
                    break;
                }
                odo[pos] = 0;
            }
            if done {
                break;
            }
        }
        assert_eq!(fib.len(), brute);
    }

    // pullback universal property on random cospans
    for round in 0..1000 {
        let (fs, ft) = (1 + rng.below(3), 1 + rng.below(2));
        let f = random_map(&mut rng, fs, ft, &format!("p{round}f"));
        let z = f.target().clone();
        let g_src = FinSet::new(
            format!("p{round}g"),
            (0..1 + rng.below(3)).map(|i| format!("g{i}")),
        )
        .unwrap();
        let g_len = g_src.len();
        let g = FinMap::from_indices(g_src, z.clone(), {
            (0..g_len).map(|_| rng.below(z.len())).collect()
        });
        let (apex, p1, p2) = pullback(&f, &g).unwrap();
        // every cone from a 2-element test set factors uniquely
        let w = FinSet::new(format!("p{round}w"), ["w0", "w1"]).unwrap();
        for q1 in FinMap::all_maps(&w, f.source()) {
            for q2 in FinMap::all_maps(&w, g.source()) {
                if q1.then(&f).unwrap() != q2.then(&g).unwrap() {
                    continue;
                }
                let mediators = FinMap::all_maps(&w, &apex)
                    .filter(|h| {
                        h.then(&p1).map(|x| x == q1).unwrap_or(false)
                            && h.then(&p2).map(|x| x == q2).unwrap_or(false)
                    })
                    .count();
                assert_eq!(mediators, 1, "pullback mediator must be unique");
            }
        }
    }

    // coequalizer universal property on random reflexive pairs
    for round in 0..1000 {
        let y = FinSet::new(
            format!("c{round}y"),
            (0..2 + rng.below(4)).map(|i| format!("y{i}")),
        )
        .unwrap();
        // reflexive pair: X = Y plus extra relating elements
        let extra = rng.below(3);
        let x = FinSet::new(
            format!("c{round}x"),
            y.iter()
                .map(str::to_string)
                .chain((0..extra).map(|i| format!("e{i}")))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let mut k_table: Vec<usize> = (0..y.len()).collect();
        let mut l_table: Vec<usize> = (0..y.len()).collect();
        for _ in 0..extra {
            k_table.push(rng.below(y.len()));
            l_table.push(rng.below(y.len()));
        }
        let k = FinMap::from_indices(x.clone(), y.clone(), k_table);
        let l = FinMap::from_indices(x.clone(), y.clone(), l_table);
        let section = FinMap::from_indices(
            y.clone(),
            x.clone(),
            (0..y.len()).collect(),
        );
        let (q, z) = reflexive_coequalizer(&k, &l, &section).unwrap();
        assert!(z.is_surjective());
        assert_eq!(k.then(&z).unwrap(), l.then(&z).unwrap());
        // universal property against a 2-element target
        let v = FinSet::new(format!("c{round}v"), ["v0", "v1"]).unwrap();
        for w in FinMap::all_maps(&y, &v) {
            if k.then(&w).unwrap() != l.then(&w).unwrap() {
                continue;
            }
            let mediators = FinMap::all_maps(&q, &v)
                .filter(|h| z.then(h).map(|x| x == w).unwrap_or(false))
                .count();
            assert_eq!(mediators, 1, "coequalizer mediator must be unique");
        }
        // pullback stability: pulling the quotient back along a random map
        // yields the quotient of the pulled-back pair
        let along_src = FinSet::new(
            format!("c{round}a"),
            (0..1 + rng.below(3)).map(|i| format!("a{i}")),
        )
        .unwrap();
        let along = FinMap::from_indices(along_src.clone(), q.clone(), {
            (0..along_src.len()).map(|_| rng.below(q.len())).collect()
        });
        let (wset, w1, w2) = pullback(&z, &along).unwrap();
        // the pulled-back pair relates (k(x), v) to (l(x), v); its quotient
        // must recover exactly the fibers of the pulled-back quotient map
        let mut gen_k = Vec::new();
        let mut gen_l = Vec::new();
        for (i, _) in x.iter().enumerate() {
            for (j1, _) in wset.iter().enumerate() {
                if w1.apply_idx(j1) != k.apply_idx(i) {
                    continue;
                }
                for (j2, _) in wset.iter().enumerate() {
                    if w1.apply_idx(j2) != l.apply_idx(i)
                        || w2.apply_idx(j1) != w2.apply_idx(j2)
                    {
                        continue;
                    }
                    gen_k.push(j1);
                    gen_l.push(j2);
                }
            }
        }
        let gen_src = FinSet::new(
            format!("c{round}r"),
            (0..gen_k.len()).map(|i| format!("r{i}")),
        )
        .unwrap();
        let gk = FinMap::from_indices(gen_src.clone(), wset.clone(), gen_k);
        let gl = FinMap::from_indices(gen_src, wset.clone(), gen_l);
        let (_wq, wz) = quotient_by_pair(&gk, &gl).unwrap();
        for (j1, _) in wset.iter().enumerate() {
            for (j2, _) in wset.iter().enumerate() {
                let same_class = wz.apply_idx(j1) == wz.apply_idx(j2);
                let same_fiber = w2.apply_idx(j1) == w2.apply_idx(j2);
                assert_eq!(same_class, same_fiber, "coequalizers must be pullback-stable");
            }
        }
    }
    println!("criterion 08 kernel law suites: PASS (1000 randomized instances per suite)");
}

#[test]
fn criterion_09_well_definedness_audit() {
    let corpus = full_functor_corpus();
    let mut audited = 0;
    for f in &corpus {
        factorize(f, true).expect("audit must confirm well-definedness");
        audited += 1;
    }
    println!("criterion 09 well-definedness audit: PASS ({audited} factorizations audited)");
}

#[test]
fn criterion_10_ord_closure() {
    let corpus = ord_functor_corpus();
    let mut verified = 0;
    for (_, _, _, f) in &corpus {
        if verified >= 25 {
            break;
        }
        if f.source().morphisms().len() > 9 || f.target().morphisms().len() > 9 {
            continue;
        }
        let fr = factorize(f, true).unwrap();
        assert!(fr.mid.is_ordered(), "the perfect stage over an ordered base must be ordered");
        let oracle = street_walters_oracle(f).unwrap();
        let iso = compare_over_base(&fr.perfect, &oracle.proj, 1_000_000).unwrap();
        assert!(iso.is_some(), "factorization must agree with the oracle up to iso");
        verified += 1;
    }
    assert!(verified >= 10, "only {verified} ordered factorizations checked");
    println!("criterion 10 ord closure: PASS ({verified} monotone maps)");
}

#[test]
fn corpus_sizes_meet_the_stated_minimums() {
    let ids = identity_functor_corpus();
    let lists = list_functor_corpus();
    let ords = ord_functor_corpus();
    assert!(ids.len() >= 20);
    assert!(!lists.is_empty());
    assert!(ords.len() >= 10);
    println!(
        "corpus sizes: {} identity-monad functors, {} list-monad functors, {} monotone maps",
        ids.len(),
        lists.len(),
        ords.len()
    );
}
