//! Cross-module invariants on the corpus: hypotheses of the factorization
//! machinery and consequences the construction is entitled to rely on.

mod common;

use common::{
    full_functor_corpus, identity_functor_corpus, list_categories, list_functor_corpus,
    ord_functor_corpus,
};
use tcat_core::cat::{validate_category, validate_functor, TFunctor};
use tcat_core::factor::{compare_over_base, factorize, is_perfect, reflect, street_walters_oracle};
use tcat_core::finset::{FinMap, UnionFind};
use tcat_core::limits::{cartesian_lifting, is_fully_faithful, pullback_tcat};
use tcat_core::monad::Monad;

#[test]
fn list_categories_all_validate() {
    for cat in list_categories() {
        assert!(validate_category(&cat, true).unwrap().passed());
    }
}

/// T must carry the coequalizers the factorization quotients by to
/// coequalizers again. Exhaustively on bounded list terms: two terms with
/// the same image under Tz are connected by a zig-zag of Tk/Tl pairs.
#[test]
fn list_monad_preserves_the_factorization_coequalizers() {
    let bound = 3usize;
    for f in list_functor_corpus() {
        let scratch = factorize(&f, false).unwrap().scratch;
        let (k, l, z) = (&scratch.k, &scratch.l, &scratch.z);
        let x = k.source();
        let y = k.target();
        for len in 0..=bound {
            // all length-`len` terms over Y, indexed by odometer rank
            let tuples: Vec<Vec<usize>> = odometer(y.len(), len);
            let index_of = |t: &[usize]| -> usize {
                t.iter().fold(0usize, |acc, &i| acc * y.len() + i)
            };
            let mut uf = UnionFind::new(tuples.len().max(1));
            for s in odometer(x.len(), len) {
                let ks: Vec<usize> = s.iter().map(|&i| k.apply_idx(i)).collect();
                let ls: Vec<usize> = s.iter().map(|&i| l.apply_idx(i)).collect();
                uf.union(index_of(&ks), index_of(&ls));
            }
            for (a, ta) in tuples.iter().enumerate() {
                for (b, tb) in tuples.iter().enumerate() {
                    let same_image = ta.iter().map(|&i| z.apply_idx(i)).collect::<Vec<_>>()
                        == tb.iter().map(|&i| z.apply_idx(i)).collect::<Vec<_>>();
                    if same_image {
                        assert!(
                            uf.same(a, b),
                            "terms with equal Tz-image are not zig-zag connected"
                        );
                    }
                }
            }
        }
    }
}

fn odometer(base: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    if base == 0 {
        return vec![];
    }
    let mut out = Vec::new();
    let mut digits = vec![0usize; len];
    loop {
        out.push(digits.clone());
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < base {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// The derived functor identities hold for every corpus functor that
/// satisfies the two primary conditions.
#[test]
fn derived_functor_identities_follow_from_the_primary_ones() {
    for f in full_functor_corpus() {
        let report = validate_functor(&f, true).unwrap();
        assert!(report.passed(), "{report}");
    }
}

/// Perfect functors compose.
#[test]
fn perfect_functors_are_closed_under_composition() {
    let mut pairs = 0;
    for f in full_functor_corpus() {
        let fr = factorize(&f, false).unwrap();
        let inner = factorize(&fr.unit, false).unwrap();
        // inner.perfect lands in fr.mid, so it composes with fr.perfect
        let composite = inner.perfect.then(&fr.perfect).unwrap();
        assert!(is_perfect(&inner.perfect).unwrap());
        assert!(is_perfect(&fr.perfect).unwrap());
        assert!(is_perfect(&composite).unwrap());
        pairs += 1;
    }
    assert!(pairs >= 20);
}

/// Unit triangle of the reflection, and compatibility with morphisms of
/// perfect objects: reflecting h∘r recovers h.
#[test]
fn reflection_unit_triangles() {
    for f in identity_functor_corpus() {
        let fr = factorize(&f, false).unwrap();
        let id_like = reflect(&fr, &fr.perfect, &fr.unit).unwrap();
        assert_eq!(id_like, TFunctor::identity(fr.mid.clone()));

        let oracle = street_walters_oracle(&f).unwrap();
        let (h, _) = compare_over_base(&fr.perfect, &oracle.proj, 1_000_000)
            .unwrap()
            .expect("iso over the base exists");
        let g = fr.unit.then(&h).unwrap();
        let reflected = reflect(&fr, &oracle.proj, &g).unwrap();
        assert_eq!(reflected, h);
    }
}

/// Legs of cartesian liftings satisfy the elementwise limit
/// characterization of full faithfulness.
#[test]
fn cartesian_lift_legs_are_fully_faithful() {
    use tcat_core::finset::FinSet;
    for base in [
        tcat_core::standard::walking_arrow(),
        tcat_core::standard::chain3(),
        tcat_core::standard::monoid_z2(),
        tcat_core::standard::mulcat_m(),
    ] {
        // identity re-indexing and a two-fold cover of the first object
        let id_lift = cartesian_lifting(&base, &FinMap::identity(base.objects())).unwrap();
        assert!(is_fully_faithful(&id_lift.leg).unwrap());

        let first = base.objects().elem(0).to_string();
        let cover = FinSet::new("cover", ["c0", "c1"]).unwrap();
        let alpha0 = FinMap::constant(cover, base.objects().clone(), &first).unwrap();
        let lift = cartesian_lifting(&base, &alpha0).unwrap();
        assert!(is_fully_faithful(&lift.leg).unwrap());
        assert!(validate_category(&lift.lifted, true).unwrap().passed());
        assert!(validate_functor(&lift.leg, true).unwrap().passed());
    }
}

/// Pullbacks of ordered categories are ordered, and the construction's
/// step equalities hold on every corpus cospan tried.
#[test]
fn ordered_pullbacks_stay_ordered() {
    let ords = ord_functor_corpus();
    let mut cospans = 0;
    for (_, _, _, f) in &ords {
        if cospans >= 10 {
            break;
        }
        if f.source().morphisms().len() > 6 || f.target().morphisms().len() > 6 {
            continue;
        }
        // pair f with itself over its target
        assert!(f.source().is_ordered() && f.target().is_ordered());
        let pb = pullback_tcat(f, f).unwrap();
        assert!(pb.apex.is_ordered());
        assert!(pb.verify_steps().unwrap().is_empty());
        cospans += 1;
    }
    assert!(cospans >= 10);
}

/// The step equalities also hold over the list monad.
#[test]
fn pullback_step_equalities_on_list_monad_cospans() {
    let corpus = list_functor_corpus();
    for f in corpus.iter().take(4) {
        let fr = factorize(f, false).unwrap();
        let pb = pullback_tcat(f, &fr.perfect).unwrap();
        let failures = pb.verify_steps().unwrap();
        assert!(failures.is_empty(), "{failures:?}");
    }
}

/// The two elementwise perfectness characterizations agree with the
/// bijection test on everything the corpus can throw at them, including
/// non-examples.
#[test]
fn perfectness_cross_checks() {
    let wa = tcat_core::standard::walking_arrow();
    let pt = tcat_core::standard::point();
    let collapse = tcat_core::standard::functor(
        &wa,
        &pt,
        &[("0", "*"), ("1", "*")],
        &[("u", "*")],
    )
    .unwrap();
    assert!(!is_perfect(&collapse).unwrap());

    for f in full_functor_corpus() {
        if f.source().monad() == Monad::List {
            assert_eq!(
                tcat_core::cat::mulcat_perfect_check(&f).unwrap(),
                is_perfect(&f).unwrap()
            );
        }
    }
}

/// Degenerate inputs are first-class: empty categories factor and pull
/// back without special cases.
#[test]
fn degenerate_inputs_are_legal() {
    let empty = tcat_core::standard::discrete_cat(&[]);
    let wa = tcat_core::standard::walking_arrow();
    let from_empty = tcat_core::cat::enumerate_functors(&empty, &wa, 1000)
        .unwrap()
        .pop()
        .unwrap();
    let fr = factorize(&from_empty, true).unwrap();
    assert_eq!(fr.mid.objects().len(), 0);
    assert!(is_perfect(&fr.perfect).unwrap());
    let pb = pullback_tcat(&from_empty, &fr.perfect).unwrap();
    assert_eq!(pb.apex.objects().len(), 0);
    assert!(validate_category(&pb.apex, true).unwrap().passed());
    let oracle = street_walters_oracle(&from_empty).unwrap();
    assert_eq!(oracle.total.objects().len(), 0);
}
