//! Limit-side constructions in the category of T-categories: cartesian
//! liftings of the object functor, liftings of finite diagrams, terminal
//! objects where representable, and pullbacks.
//!
//! The pullback construction never materializes T of the apex object set;
//! every comparison against a T-image is evaluated termwise through fiber
//! enumeration, which keeps the list monad tractable.

use std::sync::Arc;

use crate::cat::{
    derived_maps, CatError, ComposablePairs, ComposableTriples, PointedTGraph, TCategory,
    TFunctor, TGraph,
};
use crate::finset::{pullback, FinMap, FinSet};
use crate::monad::{Monad, TTerm};

/// A cartesian lifting of the object functor along alpha0, together with
/// its fully faithful leg into the base category.
#[derive(Clone, Debug)]
pub struct CartesianLift {
    pub lifted: Arc<TCategory>,
    pub leg: TFunctor,
}

/// Re-index a T-category along an object map: the lifted category has one
/// morphism (t; c; a) for every base morphism c, every T-term t over the
/// new objects covering dom(c), and every new object a over cod(c).
pub fn cartesian_lifting(
    base: &Arc<TCategory>,
    alpha0: &FinMap,
) -> Result<CartesianLift, CatError> {
    let monad = base.monad();
    if alpha0.target() != base.objects() {
        return Err(CatError::Structure(
            "object map must land in the base category's objects".into(),
        ));
    }
    let objects = alpha0.source().clone();

    let mut names = Vec::new();
    let mut dom_terms = Vec::new();
    let mut cods = Vec::new();
    let mut legs = Vec::new();
    for (c_idx, c_name) in base.morphisms().iter().enumerate() {
        let cod_obj = base.cod().apply_idx(c_idx);
        for t in monad.fiber(alpha0, base.dom().get_idx(c_idx))? {
            for (a_idx, a_name) in objects.iter().enumerate() {
                if alpha0.apply_idx(a_idx) != cod_obj {
                    continue;
                }
                names.push(format!("({};{};{})", t.name(), c_name, a_name));
                dom_terms.push(t.clone());
                cods.push(a_idx);
                legs.push(c_idx);
            }
        }
    }
    let morphisms = FinSet::new(format!("{}^*", base.morphisms().name()), names)?;
    let cod = FinMap::from_indices(morphisms.clone(), objects.clone(), cods);
    let leg1 = FinMap::from_indices(morphisms.clone(), base.morphisms().clone(), legs);
    let graph = TGraph::new(monad, objects.clone(), morphisms.clone(), dom_terms, cod)?;

    let locate = |t: &TTerm, c: &str, a: &str| -> Result<usize, CatError> {
        morphisms
            .position(&format!("({};{c};{a})", t.name()))
            .ok_or_else(|| {
                CatError::MembershipViolation(format!(
                    "lifted morphism ({};{c};{a}) is missing",
                    t.name()
                ))
            })
    };

    let mut ins_table = Vec::with_capacity(objects.len());
    for (a_idx, a_name) in objects.iter().enumerate() {
        let under = base
            .morphisms()
            .elem(base.ins().apply_idx(alpha0.apply_idx(a_idx)));
        ins_table.push(locate(&monad.unit(a_name), under, a_name)?);
    }
    let ins = FinMap::from_indices(objects.clone(), morphisms.clone(), ins_table);
    let pointed = PointedTGraph::new(graph.clone(), ins)?;

    let dom_map = graph.dom().clone();
    let cod_map = graph.cod().clone();
    let lifted = TCategory::from_comp_fn(pointed, |beta, op_name| {
        let op_idx = morphisms.position(op_name).expect("op is a lifted morphism");
        let new_dom = dom_map.flat_apply(monad, beta)?;
        let under_args = monad.t_apply(&leg1, beta)?;
        let under =
            base.comp_of(&under_args, base.morphisms().elem(leg1.apply_idx(op_idx)))?;
        let target = objects.elem(cod_map.apply_idx(op_idx));
        let idx = locate(&new_dom, under, target)?;
        Ok(morphisms.elem(idx).to_string())
    })?;

    let lifted = Arc::new(lifted);
    let leg = TFunctor::new(lifted.clone(), base.clone(), alpha0.clone(), leg1)?;
    Ok(CartesianLift { lifted, leg })
}

/// The leg of a cartesian lifting is fully faithful: its morphism object is
/// the elementwise limit over (domain term, codomain object, base morphism).
/// This checks that characterization for an arbitrary functor.
pub fn is_fully_faithful(f: &TFunctor) -> Result<bool, CatError> {
    let monad = f.source().monad();
    let a = f.source();
    let b = f.target();
    let mut expected = 0usize;
    for (j, _) in b.morphisms().iter().enumerate() {
        let fiber = monad.fiber(f.f0(), b.dom().get_idx(j))?;
        let cod_fiber = f.f0().preimage(b.objects().elem(b.cod().apply_idx(j)));
        expected += fiber.len() * cod_fiber.len();
    }
    if a.morphisms().len() != expected {
        return Ok(false);
    }
    let mut seen = std::collections::HashSet::new();
    for i in 0..a.morphisms().len() {
        let key = (
            a.dom().get_idx(i).name(),
            a.cod().apply_idx(i),
            f.f1().apply_idx(i),
        );
        // the triple must satisfy the limit equations and be unique
        let j = f.f1().apply_idx(i);
        if &monad.t_apply(f.f0(), a.dom().get_idx(i))? != b.dom().get_idx(j) {
            return Ok(false);
        }
        if f.f0().apply_idx(a.cod().apply_idx(i)) != b.cod().apply_idx(j) {
            return Ok(false);
        }
        if !seen.insert(key) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A finite diagram of T-categories with functors between them.
#[derive(Clone, Debug)]
pub struct TCatDiagram {
    pub nodes: Vec<Arc<TCategory>>,
    pub arrows: Vec<DiagramArrow>,
}

#[derive(Clone, Debug)]
pub struct DiagramArrow {
    pub from: usize,
    pub to: usize,
    pub functor: TFunctor,
}

/// A lifted cone: the joint cartesian lifting over a whole diagram.
#[derive(Clone, Debug)]
pub struct ConeLift {
    pub lifted: Arc<TCategory>,
    pub legs: Vec<TFunctor>,
}

/// Lift an object-level cone over a finite diagram to a cone of
/// T-functors, by intersecting the single-leg liftings morphism by
/// morphism. For the empty diagram the morphism object is all of
/// TA0 x A0, which requires an enumerable monad.
pub fn finite_diagram_lifting(
    monad: Monad,
    diagram: &TCatDiagram,
    apex: &FinSet,
    legs0: &[FinMap],
) -> Result<ConeLift, CatError> {
    if diagram.nodes.iter().any(|n| n.monad() != monad) {
        return Err(CatError::Structure(
            "diagram nodes must live over the stated monad".into(),
        ));
    }
    if legs0.len() != diagram.nodes.len() {
        return Err(CatError::Structure(
            "one object-level leg per diagram node is required".into(),
        ));
    }
    for (j, leg) in legs0.iter().enumerate() {
        if leg.source() != apex || leg.target() != diagram.nodes[j].objects() {
            return Err(CatError::Structure(format!(
                "leg {j} must map the apex into node {j}'s objects"
            )));
        }
    }
    for (k, arrow) in diagram.arrows.iter().enumerate() {
        if arrow.from >= diagram.nodes.len() || arrow.to >= diagram.nodes.len() {
            return Err(CatError::Structure(format!("arrow {k} has dangling endpoints")));
        }
        if legs0[arrow.from].then(arrow.functor.f0())? != legs0[arrow.to] {
            return Err(CatError::ConeMismatch(format!(
                "object cone does not commute with arrow {k}"
            )));
        }
    }
    if diagram.nodes.is_empty() {
        return empty_diagram_lifting(monad, apex);
    }

    // candidate domain terms, from the first node's morphisms
    let mut terms: Vec<TTerm> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let first = &diagram.nodes[0];
    for c_idx in 0..first.morphisms().len() {
        for t in monad.fiber(&legs0[0], first.dom().get_idx(c_idx))? {
            if seen.insert(t.name()) {
                terms.push(t);
            }
        }
    }

    let n = diagram.nodes.len();
    let mut names = Vec::new();
    let mut dom_terms = Vec::new();
    let mut cods = Vec::new();
    let mut components: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in &terms {
        let images: Vec<TTerm> = legs0
            .iter()
            .map(|leg| monad.t_apply(leg, t))
            .collect::<Result<_, _>>()?;
        for (a_idx, a_name) in apex.iter().enumerate() {
            // per node: morphisms with matching span
            let choices: Vec<Vec<usize>> = (0..n)
                .map(|j| {
                    let node = &diagram.nodes[j];
                    let want_cod = legs0[j].apply_idx(a_idx);
                    (0..node.morphisms().len())
                        .filter(|&m| {
                            node.cod().apply_idx(m) == want_cod
                                && node.dom().get_idx(m) == &images[j]
                        })
                        .collect()
                })
                .collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut odo = vec![0usize; n];
            'tuples: loop {
                let tuple: Vec<usize> = (0..n).map(|j| choices[j][odo[j]]).collect();
                let natural = diagram.arrows.iter().all(|arrow| {
                    arrow.functor.f1().apply_idx(tuple[arrow.from]) == tuple[arrow.to]
                });
                if natural {
                    let comps: Vec<&str> = (0..n)
                        .map(|j| diagram.nodes[j].morphisms().elem(tuple[j]))
                        .collect();
                    names.push(format!("({};{};{})", t.name(), comps.join(","), a_name));
                    dom_terms.push(t.clone());
                    cods.push(a_idx);
                    for j in 0..n {
                        components[j].push(tuple[j]);
                    }
                }
                let mut pos = n;
                loop {
                    if pos == 0 {
                        break 'tuples;
                    }
                    pos -= 1;
                    odo[pos] += 1;
                    if odo[pos] < choices[pos].len() {
                        break;
                    }
                    odo[pos] = 0;
                }
            }
        }
    }

    let morphisms = FinSet::new("joint_lift", names)?;
    let cod = FinMap::from_indices(morphisms.clone(), apex.clone(), cods);
    let graph = TGraph::new(monad, apex.clone(), morphisms.clone(), dom_terms.clone(), cod)?;
    let leg_maps: Vec<FinMap> = (0..n)
        .map(|j| {
            FinMap::from_indices(
                morphisms.clone(),
                diagram.nodes[j].morphisms().clone(),
                components[j].clone(),
            )
        })
        .collect();

    fn locate(
        morphisms: &FinSet,
        t: &TTerm,
        comps: &[&str],
        a: &str,
    ) -> Result<usize, CatError> {
        let name = format!("({};{};{})", t.name(), comps.join(","), a);
        morphisms.position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("joint lift misses {name}"))
        })
    }

    let mut ins_table = Vec::with_capacity(apex.len());
    for (a_idx, a_name) in apex.iter().enumerate() {
        let comps: Vec<&str> = (0..n)
            .map(|j| {
                let node = &diagram.nodes[j];
                node.morphisms().elem(node.ins().apply_idx(legs0[j].apply_idx(a_idx)))
            })
            .collect();
        ins_table.push(locate(&morphisms, &monad.unit(a_name), &comps, a_name)?);
    }
    let ins = FinMap::from_indices(apex.clone(), morphisms.clone(), ins_table);
    let pointed = PointedTGraph::new(graph.clone(), ins)?;

    let dom_map = graph.dom().clone();
    let cod_map = graph.cod().clone();
    let nodes = diagram.nodes.clone();
    let leg_maps_for_comp = leg_maps.clone();
    let apex_for_comp = apex.clone();
    let lifted = TCategory::from_comp_fn(pointed, move |beta, op_name| {
        let op_idx = morphisms.position(op_name).expect("op is a lifted morphism");
        let new_dom = dom_map.flat_apply(monad, beta)?;
        let mut comps = Vec::with_capacity(n);
        for j in 0..n {
            let under_args = monad.t_apply(&leg_maps_for_comp[j], beta)?;
            let under_op = nodes[j]
                .morphisms()
                .elem(leg_maps_for_comp[j].apply_idx(op_idx));
            comps.push(nodes[j].comp_of(&under_args, under_op)?.to_string());
        }
        let comps_ref: Vec<&str> = comps.iter().map(String::as_str).collect();
        let target = apex_for_comp.elem(cod_map.apply_idx(op_idx));
        let idx = locate(&morphisms, &new_dom, &comps_ref, target)?;
        Ok(morphisms.elem(idx).to_string())
    })?;

    let lifted = Arc::new(lifted);
    let legs = (0..n)
        .map(|j| {
            TFunctor::new(
                lifted.clone(),
                diagram.nodes[j].clone(),
                legs0[j].clone(),
                leg_maps[j].clone(),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ConeLift { lifted, legs })
}

fn empty_diagram_lifting(monad: Monad, apex: &FinSet) -> Result<ConeLift, CatError> {
    // with no constraints the lift is the chaotic span TA0 x A0; only
    // enumerable monads can represent it
    let terms = monad.enumerate_t(apex)?;
    let mut names = Vec::new();
    let mut dom_terms = Vec::new();
    let mut cods = Vec::new();
    for t in &terms {
        for (a_idx, a_name) in apex.iter().enumerate() {
            names.push(format!("({};{})", t.name(), a_name));
            dom_terms.push(t.clone());
            cods.push(a_idx);
        }
    }
    let morphisms = FinSet::new("chaotic", names)?;
    let cod = FinMap::from_indices(morphisms.clone(), apex.clone(), cods);
    let graph = TGraph::new(monad, apex.clone(), morphisms.clone(), dom_terms, cod)?;
    let mut ins_table = Vec::with_capacity(apex.len());
    for a_name in apex.iter() {
        let name = format!("({};{})", monad.unit(a_name).name(), a_name);
        ins_table.push(morphisms.position(&name).unwrap());
    }
    let ins = FinMap::from_indices(apex.clone(), morphisms.clone(), ins_table);
    let pointed = PointedTGraph::new(graph.clone(), ins)?;
    let dom_map = graph.dom().clone();
    let cod_map = graph.cod().clone();
    let apex_names = apex.clone();
    let lifted = TCategory::from_comp_fn(pointed, move |beta, op_name| {
        let op_idx = morphisms.position(op_name).expect("op exists");
        let new_dom = dom_map.flat_apply(monad, beta)?;
        let target = apex_names.elem(cod_map.apply_idx(op_idx));
        Ok(format!("({};{})", new_dom.name(), target))
    })?;
    Ok(ConeLift { lifted: Arc::new(lifted), legs: Vec::new() })
}

/// The terminal T-category, where T1 is enumerable: the algebra (1, !)
/// viewed as an ordered T-category.
pub fn terminal_tcat(monad: Monad) -> Result<TCategory, CatError> {
    let one = FinSet::singleton("1", "*");
    let terms = monad.enumerate_t(&one)?;
    let t1 = FinSet::new("T(1)", terms.iter().map(TTerm::name))?;
    let bang = FinMap::constant(t1, one.clone(), "*")?;
    TCategory::algebra_embed(monad, &one, &bang)
}

/// A pullback in the category of T-categories, with the comparison data
/// retained for auditing the construction.
#[derive(Clone, Debug)]
pub struct TCatPullback {
    pub apex: Arc<TCategory>,
    /// leg toward the source of the left functor f: A -> C
    pub leg_left: TFunctor,
    /// leg toward the source of the right functor g: B -> C
    pub leg_right: TFunctor,
    pub left: TFunctor,
    pub right: TFunctor,
    pub scratch: PullbackScratch,
}

/// The componentwise intermediates of the pullback construction. Maps whose
/// domains are T-images are not materialized; the audit evaluates them
/// termwise.
#[derive(Clone, Debug)]
pub struct PullbackScratch {
    /// A1 x_{C1} B1 with its projections
    pub ptilde1: FinSet,
    pub pt1_to_a: FinMap,
    pub pt1_to_b: FinMap,
    /// comparison P1 -> Ptilde1
    pub ell0_prime: FinMap,
    /// pointing precursor P0 -> Ptilde1
    pub itilde: FinMap,
    /// A2 x_{C2} B2 with its projections
    pub ptilde2: FinSet,
    pub pt2_to_a: FinMap,
    pub pt2_to_b: FinMap,
    /// comparison P2 -> Ptilde2
    pub ell1_prime: FinMap,
    /// composition precursor Ptilde2 -> Ptilde1
    pub mtilde: FinMap,
    /// A3 x_{C3} B3 with its projections
    pub ptilde3: FinSet,
    pub pt3_to_a: FinMap,
    pub pt3_to_b: FinMap,
    /// comparison P3 -> Ptilde3
    pub ell2_prime: FinMap,
}

/// Pullback of T-functors f: A -> C and g: B -> C. Objects are pairs; the
/// morphism object pairs a T-term over the object pairs with a compatible
/// morphism pair, fiber-enumerated per pair.
pub fn pullback_tcat(f: &TFunctor, g: &TFunctor) -> Result<TCatPullback, CatError> {
    if f.target() != g.target() {
        return Err(CatError::Structure(
            "pullback needs a common codomain category".into(),
        ));
    }
    let monad = f.source().monad();
    let a = f.source().clone();
    let b = g.source().clone();

    let (p0, p0_to_a, p0_to_b) = pullback(f.f0(), g.f0())?;
    let (pt1, pt1_to_a, pt1_to_b) = pullback(f.f1(), g.f1())?;

    // P1: per morphism pair, the terms over P0 matching both domain terms
    let mut names = Vec::new();
    let mut dom_terms = Vec::new();
    let mut cods = Vec::new();
    let mut to_a1 = Vec::new();
    let mut to_b1 = Vec::new();
    let mut to_pt1 = Vec::new();
    for (w_idx, w_name) in pt1.iter().enumerate() {
        let a_mor = pt1_to_a.apply_idx(w_idx);
        let b_mor = pt1_to_b.apply_idx(w_idx);
        let want_b = b.dom().get_idx(b_mor);
        let cod_pair = crate::finset::pair_name(
            a.objects().elem(a.cod().apply_idx(a_mor)),
            b.objects().elem(b.cod().apply_idx(b_mor)),
        );
        let cod_idx = p0.position(&cod_pair).ok_or_else(|| {
            CatError::MembershipViolation(format!("codomain pair {cod_pair} missing in apex"))
        })?;
        for u in monad.fiber(&p0_to_a, a.dom().get_idx(a_mor))? {
            if &monad.t_apply(&p0_to_b, &u)? != want_b {
                continue;
            }
            names.push(format!("({};{})", u.name(), w_name));
            dom_terms.push(u);
            cods.push(cod_idx);
            to_a1.push(a_mor);
            to_b1.push(b_mor);
            to_pt1.push(w_idx);
        }
    }
    let p1 = FinSet::new(format!("({}x{})", a.morphisms().name(), b.morphisms().name()), names)?;
    let cod = FinMap::from_indices(p1.clone(), p0.clone(), cods);
    let leg_a1 = FinMap::from_indices(p1.clone(), a.morphisms().clone(), to_a1);
    let leg_b1 = FinMap::from_indices(p1.clone(), b.morphisms().clone(), to_b1);
    let ell0_prime = FinMap::from_indices(p1.clone(), pt1.clone(), to_pt1);
    let graph = TGraph::new(monad, p0.clone(), p1.clone(), dom_terms, cod)?;

    // itilde = i^A x i^B, and the pointing of the apex
    let mut itilde_table = Vec::with_capacity(p0.len());
    let mut ins_table = Vec::with_capacity(p0.len());
    for (x_idx, _) in p0.iter().enumerate() {
        let ia = a.ins().apply_idx(p0_to_a.apply_idx(x_idx));
        let ib = b.ins().apply_idx(p0_to_b.apply_idx(x_idx));
        let w_name = crate::finset::pair_name(a.morphisms().elem(ia), b.morphisms().elem(ib));
        let w_idx = pt1.position(&w_name).ok_or_else(|| {
            CatError::MembershipViolation(format!("identity pair {w_name} missing"))
        })?;
        itilde_table.push(w_idx);
        let unit = monad.unit(p0.elem(x_idx));
        let name = format!("({};{})", unit.name(), w_name);
        let p1_idx = p1.position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("identity {name} missing in apex"))
        })?;
        ins_table.push(p1_idx);
    }
    let itilde = FinMap::from_indices(p0.clone(), pt1.clone(), itilde_table);
    let ins = FinMap::from_indices(p0.clone(), p1.clone(), ins_table);
    let pointed = PointedTGraph::new(graph.clone(), ins)?;

    let dom_map = graph.dom().clone();
    let a_for_comp = a.clone();
    let b_for_comp = b.clone();
    let leg_a1_c = leg_a1.clone();
    let leg_b1_c = leg_b1.clone();
    let p1_names = p1.clone();
    let apex_cat = TCategory::from_comp_fn(pointed, move |beta, op_name| {
        let op_idx = p1_names.position(op_name).expect("op is an apex morphism");
        let new_dom = dom_map.flat_apply(monad, beta)?;
        let a_args = monad.t_apply(&leg_a1_c, beta)?;
        let b_args = monad.t_apply(&leg_b1_c, beta)?;
        let a_res = a_for_comp.comp_of(
            &a_args,
            a_for_comp.morphisms().elem(leg_a1_c.apply_idx(op_idx)),
        )?;
        let b_res = b_for_comp.comp_of(
            &b_args,
            b_for_comp.morphisms().elem(leg_b1_c.apply_idx(op_idx)),
        )?;
        Ok(format!(
            "({};{})",
            new_dom.name(),
            crate::finset::pair_name(a_res, b_res)
        ))
    })?;
    let apex = Arc::new(apex_cat);

    let leg_left = TFunctor::new(apex.clone(), a.clone(), p0_to_a.clone(), leg_a1)?;
    let leg_right = TFunctor::new(apex.clone(), b.clone(), p0_to_b.clone(), leg_b1)?;

    // the pair objects and triple objects of A, B combine into the
    // "approximate" composable data of the construction
    let (pt2, pt2_to_a, pt2_to_b) = paired_set(
        a.pairs().set(),
        b.pairs().set(),
        |a2| induced_pair_image(&a, f, a2),
        |b2| induced_pair_image(&b, g, b2),
    )?;
    let a3 = ComposableTriples::build(a.graph(), a.pairs())?;
    let b3 = ComposableTriples::build(b.graph(), b.pairs())?;
    let (pt3, pt3_to_a, pt3_to_b) = paired_set(
        a3.set(),
        b3.set(),
        |t| induced_triple_image(&a, f, &a3, t),
        |t| induced_triple_image(&b, g, &b3, t),
    )?;

    // mtilde = m^A x m^B
    let mut mtilde_table = Vec::with_capacity(pt2.len());
    for i in 0..pt2.len() {
        let a_res = a.comp_idx(pt2_to_a.apply_idx(i));
        let b_res = b.comp_idx(pt2_to_b.apply_idx(i));
        let name = crate::finset::pair_name(
            a.morphisms().elem(a_res),
            b.morphisms().elem(b_res),
        );
        let w = pt1.position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("mtilde image {name} missing"))
        })?;
        mtilde_table.push(w);
    }
    let mtilde = FinMap::from_indices(pt2.clone(), pt1.clone(), mtilde_table);

    // ell1': P2 -> Ptilde2 and ell2': P3 -> Ptilde3, componentwise
    let ell1_prime = comparison_on_pairs(
        monad,
        apex.pairs(),
        a.pairs(),
        b.pairs(),
        &leg_left,
        &leg_right,
        &pt2,
    )?;
    let apex3 = ComposableTriples::build(apex.graph(), apex.pairs())?;
    let ell2_prime = comparison_on_triples(
        monad,
        &apex3,
        &ell1_prime,
        &a3,
        &b3,
        &pt2_to_a,
        &pt2_to_b,
        &pt3,
        &pt2,
    )?;

    let scratch = PullbackScratch {
        ptilde1: pt1,
        pt1_to_a,
        pt1_to_b,
        ell0_prime,
        itilde,
        ptilde2: pt2,
        pt2_to_a,
        pt2_to_b,
        ell1_prime,
        mtilde,
        ptilde3: pt3,
        pt3_to_a,
        pt3_to_b,
        ell2_prime,
    };

    Ok(TCatPullback {
        apex,
        leg_left,
        leg_right,
        left: f.clone(),
        right: g.clone(),
        scratch,
    })
}

fn induced_pair_image(cat: &Arc<TCategory>, f: &TFunctor, pair_idx: usize) -> String {
    let monad = cat.monad();
    let args = monad
        .t_apply(f.f1(), cat.pairs().args(pair_idx))
        .expect("pair args are over A1");
    let op = f
        .f1()
        .target()
        .elem(f.f1().apply_idx(cat.pairs().op_idx(pair_idx)));
    format!("({};{})", args.name(), op)
}

fn induced_triple_image(
    cat: &Arc<TCategory>,
    f: &TFunctor,
    triples: &ComposableTriples,
    t: usize,
) -> String {
    let monad = cat.monad();
    let f2_of = |p: usize| induced_pair_image(cat, f, p);
    let args2 = monad
        .map_entries(triples.args2(t), |entry| match entry {
            TTerm::El(name) => {
                let p = cat.pairs().set().position(name).expect("entry is a pair");
                Ok(TTerm::el(f2_of(p)))
            }
            TTerm::List(_) => unreachable!("triple args are level-1"),
        })
        .expect("triple args are over A2");
    let op2 = f2_of(triples.op2_idx(t));
    format!("({};{})", args2.name(), op2)
}

/// Pair up elements of two derived sets whose images in the common base
/// agree; the image is communicated through a canonical-name function.
fn paired_set(
    left: &FinSet,
    right: &FinSet,
    left_image: impl Fn(usize) -> String,
    right_image: impl Fn(usize) -> String,
) -> Result<(FinSet, FinMap, FinMap), CatError> {
    let mut names = Vec::new();
    let mut to_left = Vec::new();
    let mut to_right = Vec::new();
    for (i, ln) in left.iter().enumerate() {
        let li = left_image(i);
        for (j, rn) in right.iter().enumerate() {
            if li == right_image(j) {
                names.push(crate::finset::pair_name(ln, rn));
                to_left.push(i);
                to_right.push(j);
            }
        }
    }
    let set = FinSet::new(format!("({}x{})", left.name(), right.name()), names)?;
    let pl = FinMap::from_indices(set.clone(), left.clone(), to_left);
    let pr = FinMap::from_indices(set.clone(), right.clone(), to_right);
    Ok((set, pl, pr))
}

fn comparison_on_pairs(
    monad: Monad,
    apex_pairs: &ComposablePairs,
    a_pairs: &ComposablePairs,
    b_pairs: &ComposablePairs,
    leg_left: &TFunctor,
    leg_right: &TFunctor,
    pt2: &FinSet,
) -> Result<FinMap, CatError> {
    let mut table = Vec::with_capacity(apex_pairs.len());
    for p in 0..apex_pairs.len() {
        let a_args = monad.t_apply(leg_left.f1(), apex_pairs.args(p))?;
        let b_args = monad.t_apply(leg_right.f1(), apex_pairs.args(p))?;
        let op_p1 = apex_pairs.op_idx(p);
        let a_op = leg_left.f1().target().elem(leg_left.f1().apply_idx(op_p1));
        let b_op = leg_right.f1().target().elem(leg_right.f1().apply_idx(op_p1));
        let a_idx = a_pairs.find(&a_args, a_op).ok_or_else(|| {
            CatError::MembershipViolation("apex pair does not project to an A-pair".into())
        })?;
        let b_idx = b_pairs.find(&b_args, b_op).ok_or_else(|| {
            CatError::MembershipViolation("apex pair does not project to a B-pair".into())
        })?;
        let name = crate::finset::pair_name(
            a_pairs.set().elem(a_idx),
            b_pairs.set().elem(b_idx),
        );
        let idx = pt2.position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("comparison image {name} missing in Ptilde2"))
        })?;
        table.push(idx);
    }
    Ok(FinMap::from_indices(apex_pairs.set().clone(), pt2.clone(), table))
}

#[allow(clippy::too_many_arguments)]
fn comparison_on_triples(
    monad: Monad,
    apex_triples: &ComposableTriples,
    ell1_prime: &FinMap,
    a3: &ComposableTriples,
    b3: &ComposableTriples,
    pt2_to_a: &FinMap,
    pt2_to_b: &FinMap,
    pt3: &FinSet,
    pt2: &FinSet,
) -> Result<FinMap, CatError> {
    let mut table = Vec::with_capacity(apex_triples.len());
    for t in 0..apex_triples.len() {
        // map each entry (an apex pair) through ell1', then split
        let a_args2 = monad.map_entries(apex_triples.args2(t), |entry| match entry {
            TTerm::El(name) => {
                let p = ell1_prime.apply(name).map_err(|_| {
                    crate::monad::MonadError::AlienElement {
                        element: name.clone(),
                        set: "P2".into(),
                    }
                })?;
                let i = pt2.position(p).unwrap();
                Ok(TTerm::el(pt2_to_a.target().elem(pt2_to_a.apply_idx(i))))
            }
            TTerm::List(_) => unreachable!(),
        })?;
        let b_args2 = monad.map_entries(apex_triples.args2(t), |entry| match entry {
            TTerm::El(name) => {
                let p = ell1_prime.apply(name).map_err(|_| {
                    crate::monad::MonadError::AlienElement {
                        element: name.clone(),
                        set: "P2".into(),
                    }
                })?;
                let i = pt2.position(p).unwrap();
                Ok(TTerm::el(pt2_to_b.target().elem(pt2_to_b.apply_idx(i))))
            }
            TTerm::List(_) => unreachable!(),
        })?;
        let op_pt2 = ell1_prime.apply_idx(apex_triples.op2_idx(t));
        let a_op = pt2_to_a.target().elem(pt2_to_a.apply_idx(op_pt2));
        let b_op = pt2_to_b.target().elem(pt2_to_b.apply_idx(op_pt2));
        let a_idx = a3.find(&a_args2, a_op).ok_or_else(|| {
            CatError::MembershipViolation("apex triple does not project to an A-triple".into())
        })?;
        let b_idx = b3.find(&b_args2, b_op).ok_or_else(|| {
            CatError::MembershipViolation("apex triple does not project to a B-triple".into())
        })?;
        let name =
            crate::finset::pair_name(a3.set().elem(a_idx), b3.set().elem(b_idx));
        let idx = pt3.position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("comparison image {name} missing in Ptilde3"))
        })?;
        table.push(idx);
    }
    Ok(FinMap::from_indices(apex_triples.set().clone(), pt3.clone(), table))
}

impl TCatPullback {
    /// Re-verify the componentwise equalities of the construction: the
    /// pointing and composition precursors, the comparison maps, and the
    /// category laws of the apex, each on its finite domain.
    pub fn verify_steps(&self) -> Result<Vec<String>, CatError> {
        let mut failures = Vec::new();
        let monad = self.apex.monad();
        let s = &self.scratch;
        let a = self.left.source();
        let b = self.right.source();

        // pointing: ell0' ∘ i^P = itilde, and ctilde0(itilde(x)) = x
        for x in 0..self.apex.objects().len() {
            let via_ins = s.ell0_prime.apply_idx(self.apex.ins().apply_idx(x));
            if via_ins != s.itilde.apply_idx(x) {
                failures.push(format!(
                    "ell0'(i({})) != itilde(...)",
                    self.apex.objects().elem(x)
                ));
            }
        }

        // mtilde agrees with the apex composition through ell1'
        for p in 0..self.apex.pairs().len() {
            let lhs = s.ell0_prime.apply_idx(self.apex.comp_idx(p));
            let rhs = s.mtilde.apply_idx(s.ell1_prime.apply_idx(p));
            if lhs != rhs {
                failures.push(format!(
                    "ell0'(m({})) != mtilde(ell1'(...))",
                    self.apex.pairs().set().elem(p)
                ));
            }
        }

        // approximate neutrality: mtilde ∘ (i1^A x i1^B) = 1 = mtilde ∘ (i2 x i2)
        let da = derived_maps(a)?;
        let db = derived_maps(b)?;
        for w in 0..s.ptilde1.len() {
            let a1 = s.pt1_to_a.apply_idx(w);
            let b1 = s.pt1_to_b.apply_idx(w);
            for (which, (pa, pb)) in [
                ("i1", (da.i1.apply_idx(a1), db.i1.apply_idx(b1))),
                ("i2", (da.i2.apply_idx(a1), db.i2.apply_idx(b1))),
            ] {
                let name = crate::finset::pair_name(
                    a.pairs().set().elem(pa),
                    b.pairs().set().elem(pb),
                );
                match s.ptilde2.position(&name) {
                    Some(idx) => {
                        if s.mtilde.apply_idx(idx) != w {
                            failures.push(format!(
                                "mtilde({which} x {which}) != id at {}",
                                s.ptilde1.elem(w)
                            ));
                        }
                    }
                    None => failures.push(format!(
                        "({which} x {which}) image missing in Ptilde2 at {}",
                        s.ptilde1.elem(w)
                    )),
                }
            }
        }

        // approximate associativity: mtilde ∘ (m1 x m1) = mtilde ∘ (m2 x m2)
        for t in 0..s.ptilde3.len() {
            let a3 = s.pt3_to_a.apply_idx(t);
            let b3 = s.pt3_to_b.apply_idx(t);
            let one = crate::finset::pair_name(
                a.pairs().set().elem(da.m1.apply_idx(a3)),
                b.pairs().set().elem(db.m1.apply_idx(b3)),
            );
            let two = crate::finset::pair_name(
                a.pairs().set().elem(da.m2.apply_idx(a3)),
                b.pairs().set().elem(db.m2.apply_idx(b3)),
            );
            match (s.ptilde2.position(&one), s.ptilde2.position(&two)) {
                (Some(i), Some(j)) => {
                    if s.mtilde.apply_idx(i) != s.mtilde.apply_idx(j) {
                        failures.push(format!(
                            "mtilde(m1 x m1) != mtilde(m2 x m2) at {}",
                            s.ptilde3.elem(t)
                        ));
                    }
                }
                _ => failures.push(format!(
                    "(m1 x m1)/(m2 x m2) images missing at {}",
                    s.ptilde3.elem(t)
                )),
            }
        }

        // Ptilde2 is also the pullback of the span over P0^T: for every
        // morphism pair, the compatible term pairs biject with the pairs
        // of composables sitting over it.
        for w in 0..s.ptilde1.len() {
            let a1 = s.pt1_to_a.apply_idx(w);
            let b1 = s.pt1_to_b.apply_idx(w);
            let mut expected = 0usize;
            for sa in monad.fiber(a.cod(), a.dom().get_idx(a1))? {
                for sb in monad.fiber(b.cod(), b.dom().get_idx(b1))? {
                    let fa = monad.t_apply(self.left.f1(), &sa)?;
                    let gb = monad.t_apply(self.right.f1(), &sb)?;
                    if fa == gb {
                        expected += 1;
                    }
                }
            }
            let mut actual = 0usize;
            for i in 0..s.ptilde2.len() {
                let pa = s.pt2_to_a.apply_idx(i);
                let pb = s.pt2_to_b.apply_idx(i);
                if a.pairs().op_idx(pa) == a1 && b.pairs().op_idx(pb) == b1 {
                    actual += 1;
                }
            }
            if expected != actual {
                failures.push(format!(
                    "Ptilde2 over {} has {actual} elements, expected {expected}",
                    s.ptilde1.elem(w)
                ));
            }
        }

        // the apex is a category and the legs are functors
        if !crate::cat::validate_category(&self.apex, true)?.passed() {
            failures.push("apex fails the category axioms".into());
        }
        for (name, leg) in [("left leg", &self.leg_left), ("right leg", &self.leg_right)] {
            if !crate::cat::validate_functor(leg, true)?.passed() {
                failures.push(format!("{name} fails the functor conditions"));
            }
        }
        Ok(failures)
    }
}

/// The unique mediating functor into a pullback, from a commuting cone.
pub fn mediate_pullback(
    pb: &TCatPullback,
    s: &TFunctor,
    t: &TFunctor,
) -> Result<TFunctor, CatError> {
    if s.source() != t.source() {
        return Err(CatError::ConeMismatch("cone legs have different sources".into()));
    }
    if s.target() != pb.left.source() || t.target() != pb.right.source() {
        return Err(CatError::ConeMismatch(
            "cone legs must land in the pullback's feet".into(),
        ));
    }
    if s.then(&pb.left)? != t.then(&pb.right)? {
        return Err(CatError::ConeMismatch("cone does not commute over the base".into()));
    }
    let monad = s.source().monad();
    let x = s.source().clone();
    let apex = &pb.apex;
    let u0 = FinMap::from_fn(x.objects().clone(), apex.objects().clone(), |obj| {
        crate::finset::pair_name(s.f0().apply(obj).unwrap(), t.f0().apply(obj).unwrap())
    })?;
    let mut u1_table = Vec::with_capacity(x.morphisms().len());
    for i in 0..x.morphisms().len() {
        let u = monad.t_apply(&u0, x.dom().get_idx(i))?;
        let w = crate::finset::pair_name(
            s.f1().target().elem(s.f1().apply_idx(i)),
            t.f1().target().elem(t.f1().apply_idx(i)),
        );
        let name = format!("({};{})", u.name(), w);
        let idx = apex.morphisms().position(&name).ok_or_else(|| {
            CatError::MembershipViolation(format!("mediating image {name} missing"))
        })?;
        u1_table.push(idx);
    }
    let u1 = FinMap::from_indices(x.morphisms().clone(), apex.morphisms().clone(), u1_table);
    TFunctor::new(x, apex.clone(), u0, u1)
}
