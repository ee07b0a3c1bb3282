//! Shared corpus for the integration suites: hand-built instances from the
//! standard library plus enumerated and randomized families.
//!
//! Each integration target uses a different slice of this module.
#![allow(dead_code)]

use std::sync::Arc;

use tcat_core::cat::{
    enumerate_functors, monotone_to_functor, validate_functor, Preorder, TCategory, TFunctor,
};
use tcat_core::finset::{FinMap, FinSet};
use tcat_core::standard::{
    chain3, discrete_cat, example_f, example_m, functor, monoid_z2, mulcat_binary, mulcat_m,
    mulcat_two_constants, mulcat_unit, parallel_pair, point, walking_arrow,
};

/// Small identity-monad categories, all within 5 objects / 15 morphisms.
pub fn identity_categories() -> Vec<Arc<TCategory>> {
    vec![
        point(),
        discrete_cat(&["u", "v"]),
        walking_arrow(),
        parallel_pair(),
        chain3(),
        monoid_z2(),
    ]
}

/// List-monad categories.
pub fn list_categories() -> Vec<Arc<TCategory>> {
    vec![mulcat_unit(), mulcat_m(), mulcat_two_constants(), mulcat_binary()]
}

/// At least twenty identity-monad functors between small categories,
/// assembled from hand-built examples and capped enumeration. All of them
/// validate.
pub fn identity_functor_corpus() -> Vec<TFunctor> {
    let mut out = vec![example_f()];
    let cats = identity_categories();
    let pairs: &[(usize, usize)] = &[
        (2, 2), // walking arrow endofunctors
        (2, 4), // walking arrow -> chain
        (3, 2), // parallel pair -> walking arrow
        (4, 2), // chain -> walking arrow
        (1, 2), // two points -> walking arrow
        (5, 5), // Z2 endomorphisms
        (0, 4), // point -> chain
    ];
    for &(i, j) in pairs {
        out.extend(enumerate_functors(&cats[i], &cats[j], 1_000_000).unwrap());
    }
    for f in &out {
        assert!(validate_functor(f, false).unwrap().passed());
    }
    assert!(out.len() >= 20, "corpus has only {} functors", out.len());
    out
}

/// List-monad functors, hand-built plus enumerated.
pub fn list_functor_corpus() -> Vec<TFunctor> {
    let mut out = vec![example_m()];
    let m = mulcat_m();
    let two = mulcat_two_constants();
    let unit = mulcat_unit();
    let binary = mulcat_binary();
    out.push(functor(&two, &m, &[("x", "x")], &[("c", "c"), ("d", "c")]).unwrap());
    out.push(TFunctor::identity(m.clone()));
    out.push(TFunctor::identity(binary.clone()));
    out.extend(enumerate_functors(&unit, &two, 100_000).unwrap());
    out.extend(enumerate_functors(&unit, &binary, 100_000).unwrap());
    out.extend(enumerate_functors(&m, &two, 100_000).unwrap());
    for f in &out {
        assert!(validate_functor(f, false).unwrap().passed());
    }
    out
}

/// Everything, both monads.
pub fn full_functor_corpus() -> Vec<TFunctor> {
    let mut out = identity_functor_corpus();
    out.extend(list_functor_corpus());
    out
}

/// Named preorders for the order-theoretic suites.
pub fn preorders() -> Vec<Preorder> {
    let mk = |name: &str, elems: &[&str], pairs: &[(&str, &str)]| {
        Preorder::generated(
            FinSet::new(name, elems.iter().copied()).unwrap(),
            pairs.iter().copied(),
        )
        .unwrap()
    };
    vec![
        mk("pt", &["*"], &[]),
        mk("two", &["a", "b"], &[]),
        mk("chain2", &["a", "b"], &[("a", "b")]),
        mk("chain3", &["a", "b", "c"], &[("a", "b"), ("b", "c")]),
        mk("vee", &["a", "b", "c"], &[("a", "b"), ("a", "c")]),
        mk("wedge", &["a", "b", "c"], &[("a", "c"), ("b", "c")]),
        mk("square", &["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]),
    ]
}

/// All monotone maps between every ordered pair of the named preorders,
/// as (source, target, map) triples.
pub fn monotone_maps() -> Vec<(Preorder, Preorder, FinMap)> {
    let ps = preorders();
    let mut out = Vec::new();
    for p in &ps {
        for q in &ps {
            for f in FinMap::all_maps(p.set(), q.set()) {
                let monotone = (0..p.set().len()).all(|i| {
                    (0..p.set().len()).all(|j| {
                        !p.le_idx(i, j) || q.le_idx(f.apply_idx(i), f.apply_idx(j))
                    })
                });
                if monotone {
                    out.push((p.clone(), q.clone(), f));
                }
            }
        }
    }
    out
}

/// Ord(Id) encodings of monotone maps.
pub fn ord_functor_corpus() -> Vec<(Preorder, Preorder, FinMap, TFunctor)> {
    monotone_maps()
        .into_iter()
        .map(|(p, q, f)| {
            let functor = monotone_to_functor(&p, &q, &f).unwrap();
            (p, q, f, functor)
        })
        .collect()
}

/// A deterministic xorshift generator, enough for sampling random maps and
/// terms without pulling scheduling nondeterminism into the suites.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A random total map between sets of the given sizes, with elements
/// named deterministically.
pub fn random_map(rng: &mut Rng, src: usize, tgt: usize, tag: &str) -> FinMap {
    let source = FinSet::new(
        format!("{tag}S"),
        (0..src).map(|i| format!("{tag}s{i}")),
    )
    .unwrap();
    let target = FinSet::new(
        format!("{tag}T"),
        (0..tgt).map(|i| format!("{tag}t{i}")),
    )
    .unwrap();
    let table = (0..src).map(|_| rng.below(tgt)).collect();
    FinMap::from_indices(source, target, table)
}
