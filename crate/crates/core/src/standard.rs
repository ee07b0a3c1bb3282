//! A small standard library of T-categories and T-functors: the usual
//! finite shapes over the identity monad, a few finite multicategories
//! over the list monad, and builders for assembling further ones.

use std::sync::Arc;

use crate::cat::{CatError, PointedTGraph, TCategory, TFunctor, TGraph};
use crate::finset::{FinMap, FinSet};
use crate::monad::{Monad, TTerm};

/// Identity-monad category from generators: identities are added
/// automatically as `id_<object>`, and `composites` lists (first, then,
/// result) for the non-identity composable pairs.
pub fn fincat(
    objects: &[&str],
    arrows: &[(&str, &str, &str)],
    composites: &[(&str, &str, &str)],
) -> Result<TCategory, CatError> {
    let obj_set = FinSet::new("objects", objects.iter().copied())?;
    let mut names: Vec<String> = Vec::new();
    let mut doms = Vec::new();
    let mut cods = Vec::new();
    let mut ins_table = Vec::new();
    for o in objects {
        ins_table.push(names.len());
        names.push(format!("id_{o}"));
        doms.push(TTerm::el(*o));
        cods.push(obj_set.position(o).unwrap());
    }
    for (id, d, c) in arrows {
        names.push(id.to_string());
        doms.push(TTerm::el(*d));
        cods.push(obj_set.position(c).ok_or_else(|| {
            CatError::Structure(format!("unknown codomain object `{c}`"))
        })?);
    }
    let mor_set = FinSet::new("morphisms", names)?;
    let cod = FinMap::from_indices(mor_set.clone(), obj_set.clone(), cods);
    let graph = TGraph::new(Monad::Identity, obj_set.clone(), mor_set.clone(), doms, cod)?;
    let ins = FinMap::from_indices(obj_set, mor_set.clone(), ins_table);
    let pointed = PointedTGraph::new(graph, ins)?;
    let composites: Vec<(String, String, String)> = composites
        .iter()
        .map(|(f, g, r)| (f.to_string(), g.to_string(), r.to_string()))
        .collect();
    TCategory::from_comp_fn(pointed, move |args, op| {
        let first = args.name();
        if first.starts_with("id_") {
            return Ok(op.to_string());
        }
        if op.starts_with("id_") {
            return Ok(first);
        }
        composites
            .iter()
            .find(|(f, g, _)| *f == first && g == op)
            .map(|(_, _, r)| r.clone())
            .ok_or_else(|| {
                CatError::Structure(format!("no composite declared for ({first};{op})"))
            })
    })
}

/// List-monad category (a small multicategory) from explicit operations.
/// `ops` lists (id, source tuple, target); identities must be included and
/// named in `identities` as (object, op). `composites` lists
/// (argument ops, op, result).
pub fn mulcat(
    objects: &[&str],
    ops: &[(&str, &[&str], &str)],
    identities: &[(&str, &str)],
    composites: &[(&[&str], &str, &str)],
) -> Result<TCategory, CatError> {
    let obj_set = FinSet::new("objects", objects.iter().copied())?;
    let mor_set = FinSet::new("ops", ops.iter().map(|(id, _, _)| id.to_string()))?;
    let doms = ops
        .iter()
        .map(|(_, src, _)| TTerm::flat_list(src.iter().copied()))
        .collect();
    let cod = FinMap::from_pairs(
        mor_set.clone(),
        obj_set.clone(),
        ops.iter().map(|(id, _, tgt)| (*id, *tgt)),
    )?;
    let graph = TGraph::new(Monad::List, obj_set.clone(), mor_set.clone(), doms, cod)?;
    let ins = FinMap::from_pairs(obj_set, mor_set.clone(), identities.iter().copied())?;
    let pointed = PointedTGraph::new(graph, ins)?;
    let composites: Vec<(TTerm, String, String)> = composites
        .iter()
        .map(|(args, op, r)| {
            (TTerm::flat_list(args.iter().copied()), op.to_string(), r.to_string())
        })
        .collect();
    TCategory::from_comp_fn(pointed, move |args, op| {
        composites
            .iter()
            .find(|(a, o, _)| a == args && o == op)
            .map(|(_, _, r)| r.clone())
            .ok_or_else(|| {
                CatError::Structure(format!(
                    "no composite declared for ({};{op})",
                    args.name()
                ))
            })
    })
}

/// A T-functor from name tables. Identity morphisms of the source are
/// mapped automatically when omitted.
pub fn functor(
    source: &Arc<TCategory>,
    target: &Arc<TCategory>,
    object_map: &[(&str, &str)],
    morphism_map: &[(&str, &str)],
) -> Result<TFunctor, CatError> {
    let f0 = FinMap::from_pairs(
        source.objects().clone(),
        target.objects().clone(),
        object_map.iter().copied(),
    )?;
    let mut pairs: Vec<(String, String)> = morphism_map
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    for (x_idx, _) in source.objects().iter().enumerate() {
        let id_name = source.morphisms().elem(source.ins().apply_idx(x_idx));
        if pairs.iter().all(|(a, _)| a != id_name) {
            let target_id = target
                .morphisms()
                .elem(target.ins().apply_idx(f0.apply_idx(x_idx)));
            pairs.push((id_name.to_string(), target_id.to_string()));
        }
    }
    let f1 = FinMap::from_pairs(
        source.morphisms().clone(),
        target.morphisms().clone(),
        pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())),
    )?;
    TFunctor::new(source.clone(), target.clone(), f0, f1)
}

/// The walking arrow: two objects and one arrow between them.
pub fn walking_arrow() -> Arc<TCategory> {
    Arc::new(fincat(&["0", "1"], &[("u", "0", "1")], &[]).expect("walking arrow"))
}

/// The 3-chain 0 -> 1 -> 2 with its composite.
pub fn chain3() -> Arc<TCategory> {
    Arc::new(
        fincat(
            &["0", "1", "2"],
            &[("u01", "0", "1"), ("u12", "1", "2"), ("u02", "0", "2")],
            &[("u01", "u12", "u02")],
        )
        .expect("3-chain"),
    )
}

/// Two parallel arrows between two objects.
pub fn parallel_pair() -> Arc<TCategory> {
    Arc::new(
        fincat(&["0", "1"], &[("u", "0", "1"), ("v", "0", "1")], &[]).expect("parallel pair"),
    )
}

/// The cyclic group of order two as a one-object category.
pub fn monoid_z2() -> Arc<TCategory> {
    Arc::new(
        fincat(&["*"], &[("s", "*", "*")], &[("s", "s", "id_*")]).expect("Z/2 monoid"),
    )
}

/// The one-object one-morphism category.
pub fn point() -> Arc<TCategory> {
    Arc::new(TCategory::discrete(Monad::Identity, &FinSet::singleton("pt", "*")))
}

/// A discrete identity-monad category on the given elements.
pub fn discrete_cat(elems: &[&str]) -> Arc<TCategory> {
    let set = FinSet::new("D", elems.iter().copied()).expect("distinct elements");
    Arc::new(TCategory::discrete(Monad::Identity, &set))
}

/// The two-point discrete category mapping onto the walking arrow's
/// endpoints.
pub fn endpoints_functor() -> TFunctor {
    let a = discrete_cat(&["u", "v"]);
    let b = walking_arrow();
    functor(&a, &b, &[("u", "0"), ("v", "1")], &[]).expect("endpoint inclusion")
}

/// The multicategory on one object with its identity and one nullary
/// operation.
pub fn mulcat_m() -> Arc<TCategory> {
    Arc::new(
        mulcat(
            &["x"],
            &[("id_x", &["x"], "x"), ("c", &[], "x")],
            &[("x", "id_x")],
            &[
                (&["id_x"], "id_x", "id_x"),
                (&["c"], "id_x", "c"),
                (&[], "c", "c"),
            ],
        )
        .expect("nullary-op multicategory"),
    )
}

/// Two nullary operations on one object.
pub fn mulcat_two_constants() -> Arc<TCategory> {
    Arc::new(
        mulcat(
            &["x"],
            &[("id_x", &["x"], "x"), ("c", &[], "x"), ("d", &[], "x")],
            &[("x", "id_x")],
            &[
                (&["id_x"], "id_x", "id_x"),
                (&["c"], "id_x", "c"),
                (&["d"], "id_x", "d"),
                (&[], "c", "c"),
                (&[], "d", "d"),
            ],
        )
        .expect("two-constant multicategory"),
    )
}

/// A genuine arity-two operation whose inputs admit only identities, so
/// the multicategory stays finite.
pub fn mulcat_binary() -> Arc<TCategory> {
    Arc::new(
        mulcat(
            &["y1", "y2", "x"],
            &[
                ("id_y1", &["y1"], "y1"),
                ("id_y2", &["y2"], "y2"),
                ("id_x", &["x"], "x"),
                ("b", &["y1", "y2"], "x"),
            ],
            &[("y1", "id_y1"), ("y2", "id_y2"), ("x", "id_x")],
            &[
                (&["id_y1"], "id_y1", "id_y1"),
                (&["id_y2"], "id_y2", "id_y2"),
                (&["id_x"], "id_x", "id_x"),
                (&["b"], "id_x", "b"),
                (&["id_y1", "id_y2"], "b", "b"),
            ],
        )
        .expect("binary-op multicategory"),
    )
}

/// The one-object one-morphism multicategory (discrete on a point).
pub fn mulcat_unit() -> Arc<TCategory> {
    Arc::new(TCategory::discrete(Monad::List, &FinSet::singleton("pt", "u")))
}

/// The discrete two-point functor into the walking arrow.
pub fn example_f() -> TFunctor {
    endpoints_functor()
}

/// The unit multicategory mapping into the nullary-op multicategory.
pub fn example_m() -> TFunctor {
    let a = mulcat_unit();
    let b = mulcat_m();
    functor(&a, &b, &[("u", "x")], &[("u", "id_x")]).expect("unit into M")
}
