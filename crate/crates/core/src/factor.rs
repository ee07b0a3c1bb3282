//! The comprehensive factorization: perfectness testing, the universal
//! factorization of a T-functor through a perfect one via a reflexive
//! coequalizer, the reflection morphism it induces, orthogonality checking,
//! and the classical comma-category construction as an independent oracle
//! for the identity monad.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cat::{
    enumerate_functors, CatError, PointedTGraph, TCategory, TFunctor, TGraph,
};
use crate::finset::{pair_name, reflexive_coequalizer, FinMap, FinSet, UnionFind};
use crate::monad::{Monad, TTerm, TermMap};

#[derive(Debug, Error)]
pub enum FactorError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    FinSet(#[from] crate::finset::FinSetError),
    #[error(transparent)]
    Monad(#[from] crate::monad::MonadError),
    #[error("the monad violated a construction hypothesis: {0}")]
    HypothesisViolation(String),
    #[error("functor is not perfect: {0}")]
    NotPerfect(String),
    #[error("triangle over the base does not commute: {0}")]
    NotOverB(String),
    #[error("operation requires the identity monad")]
    WrongMonad,
}

/// Witness data for a failed perfectness test.
#[derive(Clone, Debug, Default)]
pub struct PerfectReport {
    /// (term; morphism) pairs downstairs with no lift
    pub missing: Vec<String>,
    /// pairs with several lifts, listing the overlapping fiber
    pub duplicated: Vec<String>,
    /// upstairs morphisms whose span does not even sit over a pair
    pub stray: Vec<String>,
}

impl PerfectReport {
    pub fn ok(&self) -> bool {
        self.missing.is_empty() && self.duplicated.is_empty() && self.stray.is_empty()
    }
}

impl fmt::Display for PerfectReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return writeln!(f, "perfect: unique lifts exist everywhere");
        }
        for m in &self.missing {
            writeln!(f, "no lift over {m}")?;
        }
        for d in &self.duplicated {
            writeln!(f, "overlapping fiber over {d}")?;
        }
        for s in &self.stray {
            writeln!(f, "morphism {s} violates the graph condition")?;
        }
        Ok(())
    }
}

/// Elementwise perfectness: a -> (dom(a), f1(a)) must biject the upstairs
/// morphisms with the pairs (t over A0, b downstairs) satisfying
/// Tf0(t) = dom(b).
pub fn perfect_report(f: &TFunctor) -> Result<PerfectReport, CatError> {
    let monad = f.source().monad();
    let a = f.source();
    let b = f.target();
    let mut report = PerfectReport::default();
    let mut hits: HashMap<(String, usize), Vec<&str>> = HashMap::new();
    for (i, name) in a.morphisms().iter().enumerate() {
        let image_dom = monad.t_apply(f.f0(), a.dom().get_idx(i))?;
        let j = f.f1().apply_idx(i);
        if &image_dom != b.dom().get_idx(j) {
            report.stray.push(name.to_string());
            continue;
        }
        hits.entry((a.dom().get_idx(i).name(), j)).or_default().push(name);
    }
    for (j, b_name) in b.morphisms().iter().enumerate() {
        for t in monad.fiber(f.f0(), b.dom().get_idx(j))? {
            let key = (t.name(), j);
            match hits.get(&key) {
                None => report.missing.push(format!("({};{})", t.name(), b_name)),
                Some(lifts) if lifts.len() == 1 => {}
                Some(lifts) => report.duplicated.push(format!(
                    "({};{}) lifted by {{{}}}",
                    t.name(),
                    b_name,
                    lifts.join(", ")
                )),
            }
        }
    }
    Ok(report)
}

pub fn is_perfect(f: &TFunctor) -> Result<bool, CatError> {
    Ok(perfect_report(f)?.ok())
}

/// The coequalizer presentation produced by the factorization, kept for
/// auditing: the sets C, C' with their projections, the reflexive pair and
/// its section, and the quotient map.
#[derive(Clone, Debug)]
pub struct FactorScratch {
    pub c_set: FinSet,
    pub c_terms: TermMap,
    pub c_under: FinMap,
    pub cprime_set: FinSet,
    pub cprime_terms: TermMap,
    pub cprime_under: FinMap,
    pub k: FinMap,
    pub l: FinMap,
    pub section: FinMap,
    pub z: FinMap,
}

#[derive(Clone, Debug)]
pub struct FactorizationResult {
    /// the universal perfect stage
    pub mid: Arc<TCategory>,
    /// unit of the reflection, A -> P
    pub unit: TFunctor,
    /// the perfect part, P -> B
    pub perfect: TFunctor,
    /// the factored functor itself
    pub original: TFunctor,
    pub scratch: FactorScratch,
}

/// Names for the two stages of the factorization.
fn c_elem_name(t: &TTerm, b: &str) -> String {
    format!("({};{})", t.name(), b)
}

/// Factor `f: A -> B` as a unit followed by a perfect T-functor.
///
/// The middle object set is the quotient of C = {(t over A0, b) with
/// Tf0(t) = dom(b)} by the reflexive pair that composes along A versus
/// projecting out codomains; the middle morphism set re-indexes B's
/// morphisms along the quotient. With `audit` set, the codomain map of the
/// middle category is recomputed along every quotient lift and any
/// disagreement aborts the construction.
pub fn factorize(f: &TFunctor, audit: bool) -> Result<FactorizationResult, FactorError> {
    let monad = f.source().monad();
    let a = f.source().clone();
    let b = f.target().clone();

    // C = TA0 x_{TB0} B1, fiber-enumerated per downstairs morphism
    let mut c_names = Vec::new();
    let mut c_terms_vec = Vec::new();
    let mut c_under_vec = Vec::new();
    for (j, b_name) in b.morphisms().iter().enumerate() {
        for t in monad.fiber(f.f0(), b.dom().get_idx(j))? {
            c_names.push(c_elem_name(&t, b_name));
            c_terms_vec.push(t);
            c_under_vec.push(j);
        }
    }
    let c_set = FinSet::new("C", c_names)?;
    let c_terms = TermMap::new(monad, c_set.clone(), a.objects().clone(), c_terms_vec)?;
    let c_under = FinMap::from_indices(c_set.clone(), b.morphisms().clone(), c_under_vec);

    // C' = TA1 x_{TB0} B1, over T(f0 . cod)
    let upstairs_target = a.cod().then(f.f0())?;
    let mut cp_names = Vec::new();
    let mut cp_terms_vec = Vec::new();
    let mut cp_under_vec = Vec::new();
    for (j, b_name) in b.morphisms().iter().enumerate() {
        for s in monad.fiber(&upstairs_target, b.dom().get_idx(j))? {
            cp_names.push(c_elem_name(&s, b_name));
            cp_terms_vec.push(s);
            cp_under_vec.push(j);
        }
    }
    let cprime_set = FinSet::new("C'", cp_names)?;
    let cprime_terms =
        TermMap::new(monad, cprime_set.clone(), a.morphisms().clone(), cp_terms_vec)?;
    let cprime_under =
        FinMap::from_indices(cprime_set.clone(), b.morphisms().clone(), cp_under_vec);

    let locate_c = |t: &TTerm, b_name: &str| -> Result<usize, FactorError> {
        c_set.position(&c_elem_name(t, b_name)).ok_or_else(|| {
            FactorError::Cat(CatError::MembershipViolation(format!(
                "({};{b_name}) fell outside C",
                t.name()
            )))
        })
    };

    // k composes: flatten the domains upstairs and compose downstairs
    let mut k_table = Vec::with_capacity(cprime_set.len());
    // l projects out the codomains upstairs
    let mut l_table = Vec::with_capacity(cprime_set.len());
    for i in 0..cprime_set.len() {
        let s = cprime_terms.get_idx(i);
        let j = cprime_under.apply_idx(i);
        let b_name = b.morphisms().elem(j);

        let flat_dom = a.dom().flat_apply(monad, s)?;
        let image_args = monad.t_apply(f.f1(), s)?;
        let composed = b.comp_of(&image_args, b_name)?;
        k_table.push(locate_c(&flat_dom, composed)?);

        let cods = monad.t_apply(a.cod(), s)?;
        l_table.push(locate_c(&cods, b_name)?);
    }
    let k = FinMap::from_indices(cprime_set.clone(), c_set.clone(), k_table);
    let l = FinMap::from_indices(cprime_set.clone(), c_set.clone(), l_table);

    // the common section inserts identities upstairs
    let mut j_table = Vec::with_capacity(c_set.len());
    for i in 0..c_set.len() {
        let t = c_terms.get_idx(i);
        let lifted = monad.t_apply(a.ins(), t)?;
        let b_name = b.morphisms().elem(c_under.apply_idx(i));
        let idx = cprime_set
            .position(&c_elem_name(&lifted, b_name))
            .ok_or_else(|| {
                FactorError::Cat(CatError::MembershipViolation(format!(
                    "section image ({};{b_name}) fell outside C'",
                    lifted.name()
                )))
            })?;
        j_table.push(idx);
    }
    let section = FinMap::from_indices(c_set.clone(), cprime_set.clone(), j_table);

    let (p0, z) = reflexive_coequalizer(&k, &l, &section)?;

    // p0: each class lands over the codomain of its representatives
    let mut p0_table: Vec<Option<usize>> = vec![None; p0.len()];
    for i in 0..c_set.len() {
        let class = z.apply_idx(i);
        let target = b.cod().apply_idx(c_under.apply_idx(i));
        match p0_table[class] {
            None => p0_table[class] = Some(target),
            Some(prev) if prev == target => {}
            Some(_) => {
                return Err(FactorError::HypothesisViolation(format!(
                    "quotient class {} sits over two different objects",
                    p0.elem(class)
                )))
            }
        }
    }
    let p0_map = FinMap::from_indices(
        p0.clone(),
        b.objects().clone(),
        p0_table.into_iter().map(|o| o.expect("z is surjective")).collect(),
    );

    // P1 = TP0 x_{TB0} B1
    let mut p1_names = Vec::new();
    let mut p1_doms = Vec::new();
    let mut p1_under = Vec::new();
    for (j, b_name) in b.morphisms().iter().enumerate() {
        for u in monad.fiber(&p0_map, b.dom().get_idx(j))? {
            p1_names.push(c_elem_name(&u, b_name));
            p1_doms.push(u);
            p1_under.push(j);
        }
    }
    let p1 = FinSet::new("P1", p1_names)?;
    let p1_map = FinMap::from_indices(p1.clone(), b.morphisms().clone(), p1_under.clone());

    // codomains: lift u through the quotient, transport along the
    // downstairs morphism, and project back to a class
    let transport = |u_lift: &TTerm, j: usize| -> Result<usize, FactorError> {
        let flat = c_terms.flat_apply(monad, u_lift)?;
        let image_args = monad.t_apply(&c_under, u_lift)?;
        let composed = b.comp_of(&image_args, b.morphisms().elem(j))?;
        Ok(z.apply_idx(locate_c(&flat, composed)?))
    };
    let mut p1_cods = Vec::with_capacity(p1.len());
    for i in 0..p1.len() {
        let u = &p1_doms[i];
        let j = p1_under[i];
        let lifts = monad.fiber(&z, u)?;
        let first = lifts.first().ok_or_else(|| {
            FactorError::HypothesisViolation(format!(
                "no quotient lift for {}; T failed to preserve the surjection",
                u.name()
            ))
        })?;
        let class = transport(first, j)?;
        if audit {
            for other in &lifts[1..] {
                let alt = transport(other, j)?;
                if alt != class {
                    return Err(FactorError::HypothesisViolation(format!(
                        "codomain of {} depends on the lift: {} vs {}",
                        p1.elem(i),
                        p0.elem(class),
                        p0.elem(alt)
                    )));
                }
            }
        }
        p1_cods.push(class);
    }
    let cod = FinMap::from_indices(p1.clone(), p0.clone(), p1_cods);
    let graph = TGraph::new(monad, p0.clone(), p1.clone(), p1_doms, cod)?;

    // identities and composition are forced by perfectness of the stage
    let mut ins_table = Vec::with_capacity(p0.len());
    for (q_idx, q_name) in p0.iter().enumerate() {
        let under = b.morphisms().elem(b.ins().apply_idx(p0_map.apply_idx(q_idx)));
        let name = c_elem_name(&monad.unit(q_name), under);
        ins_table.push(p1.position(&name).ok_or_else(|| {
            FactorError::Cat(CatError::MembershipViolation(format!(
                "identity {name} missing in P1"
            )))
        })?);
    }
    let ins = FinMap::from_indices(p0.clone(), p1.clone(), ins_table);
    let pointed = PointedTGraph::new(graph.clone(), ins)?;

    let dom_map = graph.dom().clone();
    let p1_for_comp = p1.clone();
    let b_for_comp = b.clone();
    let p1_map_c = p1_map.clone();
    let mid = TCategory::from_comp_fn(pointed, move |beta, op_name| {
        let op_idx = p1_for_comp.position(op_name).expect("op is a middle morphism");
        let new_dom = dom_map.flat_apply(monad, beta)?;
        let image_args = monad.t_apply(&p1_map_c, beta)?;
        let composed =
            b_for_comp.comp_of(&image_args, b_for_comp.morphisms().elem(p1_map_c.apply_idx(op_idx)))?;
        Ok(c_elem_name(&new_dom, composed))
    })?;
    let mid = Arc::new(mid);

    let perfect = TFunctor::new(mid.clone(), b.clone(), p0_map, p1_map)?;

    // the unit: objects go through eta x identity-insertion, morphisms
    // re-index along the unit's T-image
    let r0 = FinMap::from_fn(a.objects().clone(), p0.clone(), |obj| {
        let obj_idx = a.objects().position(obj).expect("obj is an A-object");
        let under = b.morphisms().elem(b.ins().apply_idx(f.f0().apply_idx(obj_idx)));
        let idx = c_set
            .position(&c_elem_name(&monad.unit(obj), under))
            .expect("unit image lies in C");
        z.target().elem(z.apply_idx(idx)).to_string()
    })?;
    let mut r1_table = Vec::with_capacity(a.morphisms().len());
    for i in 0..a.morphisms().len() {
        let u = monad.t_apply(&r0, a.dom().get_idx(i))?;
        let under = b.morphisms().elem(f.f1().apply_idx(i));
        let name = c_elem_name(&u, under);
        r1_table.push(p1.position(&name).ok_or_else(|| {
            FactorError::Cat(CatError::MembershipViolation(format!(
                "unit image {name} missing in P1"
            )))
        })?);
    }
    let r1 = FinMap::from_indices(a.morphisms().clone(), p1.clone(), r1_table);
    let unit = TFunctor::new(a.clone(), mid.clone(), r0, r1)?;

    Ok(FactorizationResult {
        mid,
        unit,
        perfect,
        original: f.clone(),
        scratch: FactorScratch {
            c_set,
            c_terms,
            c_under,
            cprime_set,
            cprime_terms,
            cprime_under,
            k,
            l,
            section,
            z,
        },
    })
}

impl FactorizationResult {
    /// A deterministic, human-readable account of the construction.
    pub fn report(&self) -> String {
        let mut out = String::new();
        let s = &self.scratch;
        out.push_str("factorization report\n");
        out.push_str(&format!(
            "  |C| = {}, |C'| = {}, |P0| = {}, |P1| = {}\n",
            s.c_set.len(),
            s.cprime_set.len(),
            self.mid.objects().len(),
            self.mid.morphisms().len()
        ));
        out.push_str("  coequalizer classes:\n");
        for (q_idx, q) in self.mid.objects().iter().enumerate() {
            let members: Vec<&str> = s
                .c_set
                .iter()
                .enumerate()
                .filter(|(i, _)| s.z.apply_idx(*i) == q_idx)
                .map(|(_, n)| n)
                .collect();
            out.push_str(&format!("    {q} = {{{}}}\n", members.join(", ")));
        }
        out
    }
}

/// Reflect a morphism into the perfect stage: given the factorization of
/// f and any g: A -> Q with q perfect over B and q∘g = f, produce the
/// unique h: P -> Q with h∘r = g and q∘h = p.
pub fn reflect(
    fr: &FactorizationResult,
    q: &TFunctor,
    g: &TFunctor,
) -> Result<TFunctor, FactorError> {
    if !is_perfect(q)? {
        return Err(FactorError::NotPerfect("reflection target must be perfect".into()));
    }
    if q.target() != fr.original.target() {
        return Err(FactorError::NotOverB("q must land in the same base".into()));
    }
    if g.source() != fr.original.source() || g.target() != q.source() {
        return Err(FactorError::NotOverB("g must map A into q's source".into()));
    }
    if g.then(q)? != fr.original {
        return Err(FactorError::NotOverB("q∘g differs from the factored functor".into()));
    }
    let monad = fr.original.source().monad();
    let b = fr.original.target();
    let qc = q.source();
    let s = &fr.scratch;

    // unique q-lift by (domain term, downstairs morphism)
    let mut lift: HashMap<(String, usize), usize> = HashMap::new();
    for i in 0..qc.morphisms().len() {
        lift.insert(
            (qc.dom().get_idx(i).name(), q.f1().apply_idx(i)),
            i,
        );
    }
    let q_lift = |term: &TTerm, j: usize| -> Result<usize, FactorError> {
        lift.get(&(term.name(), j)).copied().ok_or_else(|| {
            FactorError::NotPerfect(format!(
                "no lift of ({};{})",
                term.name(),
                b.morphisms().elem(j)
            ))
        })
    };

    // h0 on classes: evaluate cod ∘ ǧ on any member; all members agree
    let mut h0_table: Vec<Option<usize>> = vec![None; fr.mid.objects().len()];
    for i in 0..s.c_set.len() {
        let term = monad.t_apply(g.f0(), s.c_terms.get_idx(i))?;
        let j = s.c_under.apply_idx(i);
        let target = qc.cod().apply_idx(q_lift(&term, j)?);
        let class = s.z.apply_idx(i);
        match h0_table[class] {
            None => h0_table[class] = Some(target),
            Some(prev) if prev == target => {}
            Some(prev) => {
                return Err(FactorError::HypothesisViolation(format!(
                    "reflection is ill-defined on class {}: {} vs {}",
                    fr.mid.objects().elem(class),
                    qc.objects().elem(prev),
                    qc.objects().elem(target)
                )))
            }
        }
    }
    let h0 = FinMap::from_indices(
        fr.mid.objects().clone(),
        qc.objects().clone(),
        h0_table.into_iter().map(|o| o.expect("z is surjective")).collect(),
    );

    let mut h1_table = Vec::with_capacity(fr.mid.morphisms().len());
    for i in 0..fr.mid.morphisms().len() {
        let term = monad.t_apply(&h0, fr.mid.dom().get_idx(i))?;
        let j = fr.perfect.f1().apply_idx(i);
        h1_table.push(q_lift(&term, j)?);
    }
    let h1 = FinMap::from_indices(
        fr.mid.morphisms().clone(),
        qc.morphisms().clone(),
        h1_table,
    );
    Ok(TFunctor::new(fr.mid.clone(), qc.clone(), h0, h1)?)
}

/// Whether every commutative square from `e` to `m` admits a unique
/// diagonal filler. Squares and fillers are found by capped enumeration.
pub fn check_orthogonal(e: &TFunctor, m: &TFunctor, cap: u64) -> Result<bool, FactorError> {
    Ok(orthogonality_witness(e, m, cap)?.is_none())
}

/// A failed square: the morphisms forming it and how many fillers it has.
#[derive(Clone, Debug)]
pub struct SquareFailure {
    pub top: TFunctor,
    pub bottom: TFunctor,
    pub fillers: usize,
}

/// Like `check_orthogonal` but reporting the first failing square.
pub fn orthogonality_witness(
    e: &TFunctor,
    m: &TFunctor,
    cap: u64,
) -> Result<Option<SquareFailure>, FactorError> {
    let tops = enumerate_functors(e.source(), m.source(), cap)?;
    let bottoms = enumerate_functors(e.target(), m.target(), cap)?;
    let diagonals = enumerate_functors(e.target(), m.source(), cap)?;
    for top in &tops {
        let around = top.then(m)?;
        for bottom in &bottoms {
            if e.then(bottom)? != around {
                continue;
            }
            let fillers = diagonals
                .iter()
                .filter(|w| {
                    e.then(w).map(|ew| &ew == top).unwrap_or(false)
                        && w.then(m).map(|wm| &wm == bottom).unwrap_or(false)
                })
                .count();
            if fillers != 1 {
                return Ok(Some(SquareFailure {
                    top: top.clone(),
                    bottom: bottom.clone(),
                    fillers,
                }));
            }
        }
    }
    Ok(None)
}

/// The comma-category fibration over the base: fibers are the connected
/// components of F/b, with the evident transport action.
#[derive(Clone, Debug)]
pub struct OracleFibration {
    pub total: Arc<TCategory>,
    pub proj: TFunctor,
    /// the canonical comparison A -> total, sending a to the component of
    /// (a, identity at Fa)
    pub unit: TFunctor,
}

/// The classical comprehensive-factorization construction for ordinary
/// functors, used as an independent oracle: compute, for every object b
/// downstairs, the connected components of the comma category F/b, and
/// assemble them into a discrete opfibration.
pub fn street_walters_oracle(f: &TFunctor) -> Result<OracleFibration, FactorError> {
    if f.source().monad() != Monad::Identity {
        return Err(FactorError::WrongMonad);
    }
    let a = f.source();
    let b = f.target();

    // comma objects: (a, beta) with dom(beta) = F(a); they are partitioned
    // by cod(beta), so one union-find covers all bases at once
    let mut comma_names = Vec::new();
    let mut comma_a = Vec::new();
    let mut comma_beta = Vec::new();
    for (a_idx, a_name) in a.objects().iter().enumerate() {
        for (j, b_name) in b.morphisms().iter().enumerate() {
            let el_dom = match b.dom().get_idx(j) {
                TTerm::El(x) => x.as_str(),
                TTerm::List(_) => unreachable!("identity-monad terms are elements"),
            };
            if el_dom == b.objects().elem(f.f0().apply_idx(a_idx)) {
                comma_names.push(pair_name(a_name, b_name));
                comma_a.push(a_idx);
                comma_beta.push(j);
            }
        }
    }
    let comma = FinSet::new("comma", comma_names)?;

    // comma morphisms: u: a -> a' upstairs with beta = beta' ∘ F(u)
    let mut uf = UnionFind::new(comma.len());
    for u in 0..a.morphisms().len() {
        let src_obj = match a.dom().get_idx(u) {
            TTerm::El(x) => x.clone(),
            TTerm::List(_) => unreachable!(),
        };
        let tgt_obj = a.objects().elem(a.cod().apply_idx(u));
        let image = b.morphisms().elem(f.f1().apply_idx(u));
        for (i, _) in comma.iter().enumerate() {
            if a.objects().elem(comma_a[i]) != tgt_obj {
                continue;
            }
            let beta_prime = b.morphisms().elem(comma_beta[i]);
            let composed = b.comp_of(&TTerm::el(image), beta_prime)?;
            let source_name = pair_name(&src_obj, composed);
            if let Some(src_idx) = comma.position(&source_name) {
                uf.union(src_idx, i);
            }
        }
    }

    // components, named by least member, listed in first-appearance order
    let mut least: HashMap<usize, usize> = HashMap::new();
    for i in 0..comma.len() {
        let root = uf.find(i);
        let entry = least.entry(root).or_insert(i);
        if comma.elem(i) < comma.elem(*entry) {
            *entry = i;
        }
    }
    let mut total0_names = Vec::new();
    let mut class_of: Vec<usize> = Vec::with_capacity(comma.len());
    let mut class_repr: Vec<usize> = Vec::new();
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    for i in 0..comma.len() {
        let root = uf.find(i);
        let cls = *class_index.entry(root).or_insert_with(|| {
            total0_names.push(comma.elem(least[&root]).to_string());
            class_repr.push(least[&root]);
            total0_names.len() - 1
        });
        class_of.push(cls);
    }
    let total0 = FinSet::new("components", total0_names)?;

    // each component sits over the codomain of its witnesses
    let proj0_table: Vec<usize> = class_repr
        .iter()
        .map(|&i| b.cod().apply_idx(comma_beta[i]))
        .collect();
    let proj0 = FinMap::from_indices(total0.clone(), b.objects().clone(), proj0_table.clone());

    // transport a component along a downstairs morphism by post-composing
    // its representative
    let transport = |cls: usize, j: usize| -> Result<usize, FactorError> {
        let repr = class_repr[cls];
        let a_name = a.objects().elem(comma_a[repr]);
        let gamma = b.morphisms().elem(comma_beta[repr]);
        let composed = b.comp_of(&TTerm::el(gamma), b.morphisms().elem(j))?;
        let idx = comma.position(&pair_name(a_name, composed)).ok_or_else(|| {
            FactorError::Cat(CatError::MembershipViolation(format!(
                "transported comma object ({a_name},{composed}) missing"
            )))
        })?;
        Ok(class_of[idx])
    };

    // total morphisms: (component x, beta) with x over dom(beta)
    let mut t1_names = Vec::new();
    let mut t1_dom = Vec::new();
    let mut t1_src = Vec::new();
    let mut t1_cod = Vec::new();
    let mut t1_under = Vec::new();
    for (x_idx, x_name) in total0.iter().enumerate() {
        for (j, b_name) in b.morphisms().iter().enumerate() {
            let el_dom = match b.dom().get_idx(j) {
                TTerm::El(x) => x.as_str(),
                TTerm::List(_) => unreachable!(),
            };
            if b.objects().position(el_dom).unwrap() != proj0_table[x_idx] {
                continue;
            }
            t1_names.push(format!("({};{})", x_name, b_name));
            t1_dom.push(TTerm::el(x_name));
            t1_src.push(x_idx);
            t1_cod.push(transport(x_idx, j)?);
            t1_under.push(j);
        }
    }
    let total1 = FinSet::new("transports", t1_names)?;
    let cod = FinMap::from_indices(total1.clone(), total0.clone(), t1_cod);
    let proj1 = FinMap::from_indices(total1.clone(), b.morphisms().clone(), t1_under);
    let graph = TGraph::new(Monad::Identity, total0.clone(), total1.clone(), t1_dom, cod)?;

    let mut ins_table = Vec::with_capacity(total0.len());
    for (x_idx, x_name) in total0.iter().enumerate() {
        let under = b.morphisms().elem(b.ins().apply_idx(proj0_table[x_idx]));
        let name = format!("({x_name};{under})");
        ins_table.push(total1.position(&name).expect("identity transport exists"));
    }
    let ins = FinMap::from_indices(total0.clone(), total1.clone(), ins_table);
    let pointed = PointedTGraph::new(graph, ins)?;

    let total1_c = total1.clone();
    let total0_c = total0.clone();
    let proj1_c = proj1.clone();
    let b_c = b.clone();
    let t1_src_c = t1_src.clone();
    let total = TCategory::from_comp_fn(pointed, move |args, op_name| {
        // args is a single transport (x;beta); op starts where it ends
        let first = match args {
            TTerm::El(name) => total1_c.position(name).expect("arg is a transport"),
            TTerm::List(_) => unreachable!(),
        };
        let op_idx = total1_c.position(op_name).expect("op is a transport");
        let composed = b_c.comp_of(
            &TTerm::el(b_c.morphisms().elem(proj1_c.apply_idx(first))),
            b_c.morphisms().elem(proj1_c.apply_idx(op_idx)),
        )?;
        let x_name = total0_c.elem(t1_src_c[first]);
        Ok(format!("({x_name};{composed})"))
    })?;
    let total = Arc::new(total);
    let proj = TFunctor::new(total.clone(), b.clone(), proj0, proj1)?;

    // canonical unit: a -> component of (a, id_{Fa})
    let unit0 = FinMap::from_fn(a.objects().clone(), total0.clone(), |a_name| {
        let a_idx = a.objects().position(a_name).expect("a is an A-object");
        let under = b.morphisms().elem(b.ins().apply_idx(f.f0().apply_idx(a_idx)));
        let idx = comma.position(&pair_name(a_name, under)).expect("unit comma object");
        total0.elem(class_of[idx]).to_string()
    })?;
    let mut unit1_table = Vec::with_capacity(a.morphisms().len());
    for u in 0..a.morphisms().len() {
        let src_obj = match a.dom().get_idx(u) {
            TTerm::El(x) => x.as_str(),
            TTerm::List(_) => unreachable!(),
        };
        let x_name = unit0.apply(src_obj)?;
        let under = b.morphisms().elem(f.f1().apply_idx(u));
        let name = format!("({x_name};{under})");
        unit1_table.push(total1.position(&name).ok_or_else(|| {
            FactorError::Cat(CatError::MembershipViolation(format!(
                "unit transport {name} missing"
            )))
        })?);
    }
    let unit1 = FinMap::from_indices(a.morphisms().clone(), total1.clone(), unit1_table);
    let unit = TFunctor::new(a.clone(), total.clone(), unit0, unit1)?;

    Ok(OracleFibration { total, proj, unit })
}

/// Search for an isomorphism over the base between two perfect functors
/// with the same codomain: first the cheap fiber-size obstruction, then a
/// capped fiberwise search for the object part (the morphism part is
/// forced by perfectness).
pub fn compare_over_base(
    p: &TFunctor,
    p2: &TFunctor,
    cap: u64,
) -> Result<Option<(TFunctor, TFunctor)>, FactorError> {
    if p.target() != p2.target() {
        return Err(FactorError::NotOverB("the functors have different bases".into()));
    }
    if !is_perfect(p)? {
        return Err(FactorError::NotPerfect("left argument".into()));
    }
    if !is_perfect(p2)? {
        return Err(FactorError::NotPerfect("right argument".into()));
    }
    let b = p.target();
    let src = p.source();
    let dst = p2.source();

    // fiberwise candidates for the object part
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(src.objects().len());
    for x in 0..src.objects().len() {
        let over = p.f0().apply_idx(x);
        let opts: Vec<usize> = (0..dst.objects().len())
            .filter(|&y| p2.f0().apply_idx(y) == over)
            .collect();
        if opts.is_empty() {
            return Ok(None);
        }
        candidates.push(opts);
    }
    for b_obj in b.objects().iter() {
        if p.f0().preimage(b_obj).len() != p2.f0().preimage(b_obj).len() {
            return Ok(None);
        }
    }

    let monad = src.monad();
    let mut lift2: HashMap<(String, usize), usize> = HashMap::new();
    for i in 0..dst.morphisms().len() {
        lift2.insert((dst.dom().get_idx(i).name(), p2.f1().apply_idx(i)), i);
    }

    let n = src.objects().len();
    let mut pick = vec![0usize; n];
    let mut examined: u64 = 0;
    loop {
        examined += 1;
        if examined > cap {
            return Err(FactorError::Cat(CatError::CapExceeded { cap }));
        }
        let table: Vec<usize> = (0..n).map(|i| candidates[i][pick[i]]).collect();
        let h0 = FinMap::from_indices(src.objects().clone(), dst.objects().clone(), table);
        if h0.is_bijective() {
            // morphism part forced by perfectness of p2
            let mut h1_table = Vec::with_capacity(src.morphisms().len());
            let mut total = true;
            for i in 0..src.morphisms().len() {
                let term = monad.t_apply(&h0, src.dom().get_idx(i))?;
                match lift2.get(&(term.name(), p.f1().apply_idx(i))) {
                    Some(&j) => h1_table.push(j),
                    None => {
                        total = false;
                        break;
                    }
                }
            }
            if total {
                let h1 = FinMap::from_indices(
                    src.morphisms().clone(),
                    dst.morphisms().clone(),
                    h1_table,
                );
                if h1.is_bijective() {
                    let h = TFunctor::new(src.clone(), dst.clone(), h0.clone(), h1.clone())?;
                    let h_inv = TFunctor::new(
                        dst.clone(),
                        src.clone(),
                        h0.inverse().expect("checked bijective"),
                        h1.inverse().expect("checked bijective"),
                    )?;
                    let ok = crate::cat::validate_functor(&h, false)?.passed()
                        && crate::cat::validate_functor(&h_inv, false)?.passed()
                        && h.then(p2)? == *p
                        && h_inv.then(p)? == *p2;
                    if ok {
                        return Ok(Some((h, h_inv)));
                    }
                }
            }
        }
        // advance
        let mut pos = n;
        let mut done = true;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            pick[pos] += 1;
            if pick[pos] < candidates[pos].len() {
                done = false;
                break;
            }
            pick[pos] = 0;
        }
        if done {
            return Ok(None);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::{validate_category, validate_functor};
    use crate::limits::terminal_tcat;
    use crate::standard::{
        chain3, example_f, example_m, functor, mulcat_m, point, walking_arrow,
    };

    #[test]
    fn identity_functors_are_perfect() {
        for cat in [walking_arrow(), chain3(), mulcat_m()] {
            assert!(is_perfect(&TFunctor::identity(cat)).unwrap());
        }
    }

    #[test]
    fn collapse_to_the_point_is_not_perfect() {
        let wa = walking_arrow();
        let pt = point();
        let bang = functor(&wa, &pt, &[("0", "*"), ("1", "*")], &[("u", "*")]).unwrap();
        let report = perfect_report(&bang).unwrap();
        assert!(!report.ok());
        assert!(!report.duplicated.is_empty());
    }

    #[test]
    fn example_f_factorization_golden_values() {
        let f = example_f();
        let fr = factorize(&f, true).unwrap();

        assert_eq!(fr.scratch.c_set.len(), 3);
        assert_eq!(fr.mid.objects().len(), 3);
        assert_eq!(fr.mid.morphisms().len(), 4);

        // fibers over the base objects: one over 0, two over 1
        let over_0 = fr.perfect.f0().preimage("0").len();
        let over_1 = fr.perfect.f0().preimage("1").len();
        assert_eq!((over_0, over_1), (1, 2));

        // contract: p . r = f, p perfect, everything validates
        assert_eq!(fr.unit.then(&fr.perfect).unwrap(), f);
        assert!(is_perfect(&fr.perfect).unwrap());
        assert!(validate_category(&fr.mid, true).unwrap().passed());
        assert!(validate_functor(&fr.unit, true).unwrap().passed());
        assert!(validate_functor(&fr.perfect, true).unwrap().passed());

        // r sends the two discrete objects to distinct classes
        let r_u = fr.unit.f0().apply("u").unwrap();
        let r_v = fr.unit.f0().apply("v").unwrap();
        assert_ne!(r_u, r_v);
        // u lands over 0, v over 1 and isolated
        assert_eq!(fr.perfect.f0().apply(r_u).unwrap(), "0");
        assert_eq!(fr.perfect.f0().apply(r_v).unwrap(), "1");
        // exactly one non-identity morphism in the middle stage
        let non_identity = (0..fr.mid.morphisms().len())
            .filter(|&i| {
                (0..fr.mid.objects().len()).all(|x| fr.mid.ins().apply_idx(x) != i)
            })
            .count();
        assert_eq!(non_identity, 1);
    }

    #[test]
    fn example_m_factorization_golden_values() {
        let f = example_m();
        let fr = factorize(&f, true).unwrap();
        let names: Vec<&str> = fr.scratch.c_set.iter().collect();
        assert_eq!(names, vec!["([u];id_x)", "([];c)"]);
        // k = l here, so the quotient is C itself
        assert_eq!(fr.scratch.k, fr.scratch.l);
        assert_eq!(fr.mid.objects().len(), 2);
        assert_eq!(fr.mid.morphisms().len(), 3);
        assert_eq!(fr.unit.then(&fr.perfect).unwrap(), f);
        assert!(is_perfect(&fr.perfect).unwrap());
        assert!(crate::cat::mulcat_perfect_check(&fr.perfect).unwrap());
        assert!(validate_category(&fr.mid, true).unwrap().passed());
        assert!(validate_functor(&fr.unit, true).unwrap().passed());
    }

    #[test]
    fn factoring_a_perfect_functor_gives_a_bijective_unit() {
        let f = example_f();
        let p = factorize(&f, false).unwrap().perfect;
        let again = factorize(&p, true).unwrap();
        assert!(again.unit.f0().is_bijective());
        assert!(again.unit.f1().is_bijective());
    }

    #[test]
    fn reflecting_the_factorization_into_itself_is_the_identity() {
        let f = example_f();
        let fr = factorize(&f, false).unwrap();
        let h = reflect(&fr, &fr.perfect, &fr.unit).unwrap();
        assert!(h.f0().is_bijective());
        assert!(h.f1().is_bijective());
        for i in 0..fr.mid.objects().len() {
            assert_eq!(h.f0().apply_idx(i), i);
        }
        for i in 0..fr.mid.morphisms().len() {
            assert_eq!(h.f1().apply_idx(i), i);
        }
    }

    #[test]
    fn reflection_against_the_oracle_is_an_isomorphism_over_the_base() {
        let f = example_f();
        let fr = factorize(&f, false).unwrap();
        let oracle = street_walters_oracle(&f).unwrap();
        let h = reflect(&fr, &oracle.proj, &oracle.unit).unwrap();
        assert!(h.f0().is_bijective());
        assert!(h.f1().is_bijective());
        assert_eq!(fr.unit.then(&h).unwrap(), oracle.unit);
        assert_eq!(h.then(&oracle.proj).unwrap(), fr.perfect);
        // uniqueness on this instance: every functor with both triangle
        // properties equals h
        let all = crate::cat::enumerate_functors(&fr.mid, &oracle.total, 1_000_000).unwrap();
        let count = all
            .iter()
            .filter(|w| {
                fr.unit.then(w).map(|x| x == oracle.unit).unwrap_or(false)
                    && w.then(&oracle.proj).map(|x| x == fr.perfect).unwrap_or(false)
            })
            .count();
        assert_eq!(count, 1);
    }

    #[test]
    fn reflect_rejects_bad_inputs() {
        let f = example_f();
        let fr = factorize(&f, false).unwrap();
        let pt = point();
        let bang = functor(
            &f.target().clone(),
            &pt,
            &[("0", "*"), ("1", "*")],
            &[("u", "*")],
        )
        .unwrap();
        // not perfect
        assert!(matches!(
            reflect(&fr, &bang, &f.then(&bang).unwrap()),
            Err(FactorError::NotPerfect(_))
        ));
        // wrong triangle
        let q = TFunctor::identity(f.target().clone());
        let g_bad = functor(
            &f.source().clone(),
            &f.target().clone(),
            &[("u", "1"), ("v", "1")],
            &[],
        )
        .unwrap();
        assert!(matches!(
            reflect(&fr, &q, &g_bad),
            Err(FactorError::NotOverB(_))
        ));
    }

    #[test]
    fn isomorphisms_are_orthogonal_to_everything() {
        let wa = walking_arrow();
        let e = TFunctor::identity(wa.clone());
        let f = example_f();
        let p = factorize(&f, false).unwrap().perfect;
        assert!(check_orthogonal(&e, &p, 1_000_000).unwrap());
    }

    #[test]
    fn units_are_orthogonal_to_perfect_functors() {
        let f = example_f();
        let fr = factorize(&f, false).unwrap();
        for q in [
            factorize(&example_f(), false).unwrap().perfect,
            TFunctor::identity(walking_arrow()),
            TFunctor::identity(chain3()),
        ] {
            assert!(check_orthogonal(&fr.unit, &q, 1_000_000).unwrap());
        }
    }

    #[test]
    fn a_non_initial_functor_fails_orthogonality() {
        // the inclusion of an endpoint into the walking arrow is not
        // initial: its comma categories over the other object are empty
        let pt = point();
        let wa = walking_arrow();
        let e = functor(&pt, &wa, &[("*", "1")], &[]).unwrap();
        // a perfect functor with branching fibers, from the oracle of the
        // endpoint inclusion
        let oracle = street_walters_oracle(&example_f()).unwrap();
        let witness = orthogonality_witness(&e, &oracle.proj, 1_000_000).unwrap();
        assert!(witness.is_some());
        assert_ne!(witness.unwrap().fillers, 1);
    }

    #[test]
    fn oracle_of_identity_collapses_to_the_base() {
        let wa = walking_arrow();
        let id = TFunctor::identity(wa.clone());
        let oracle = street_walters_oracle(&id).unwrap();
        // each slice has a terminal object, so one component per object
        assert_eq!(oracle.total.objects().len(), wa.objects().len());
        assert_eq!(oracle.total.morphisms().len(), wa.morphisms().len());
        assert!(is_perfect(&oracle.proj).unwrap());
        assert!(validate_category(&oracle.total, true).unwrap().passed());
    }

    #[test]
    fn oracle_of_example_f_has_fibers_one_and_two() {
        let oracle = street_walters_oracle(&example_f()).unwrap();
        assert_eq!(oracle.total.objects().len(), 3);
        assert_eq!(oracle.proj.f0().preimage("0").len(), 1);
        assert_eq!(oracle.proj.f0().preimage("1").len(), 2);
        assert!(is_perfect(&oracle.proj).unwrap());
        assert!(validate_functor(&oracle.unit, true).unwrap().passed());
    }

    #[test]
    fn oracle_into_the_terminal_category_counts_components() {
        // two disconnected objects over the point: two components
        let a = crate::standard::discrete_cat(&["u", "v"]);
        let one = Arc::new(terminal_tcat(Monad::Identity).unwrap());
        let bang = functor(&a, &one, &[("u", "*"), ("v", "*")], &[]).unwrap();
        let oracle = street_walters_oracle(&bang).unwrap();
        assert_eq!(oracle.total.objects().len(), 2);
        // a connected pair over the point: one component
        let wa = walking_arrow();
        let bang2 = functor(&wa, &one, &[("0", "*"), ("1", "*")], &[("u", "*")]).unwrap();
        let oracle2 = street_walters_oracle(&bang2).unwrap();
        assert_eq!(oracle2.total.objects().len(), 1);
    }

    #[test]
    fn oracle_requires_the_identity_monad() {
        assert!(matches!(
            street_walters_oracle(&example_m()),
            Err(FactorError::WrongMonad)
        ));
    }

    #[test]
    fn compare_over_base_finds_the_oracle_isomorphism() {
        let f = example_f();
        let fr = factorize(&f, false).unwrap();
        let oracle = street_walters_oracle(&f).unwrap();
        let pair = compare_over_base(&fr.perfect, &oracle.proj, 1_000_000).unwrap();
        let (h, h_inv) = pair.expect("factorization and oracle agree up to iso");
        assert_eq!(h.then(&h_inv).unwrap(), TFunctor::identity(fr.mid.clone()));
        assert_eq!(h_inv.then(&h).unwrap(), TFunctor::identity(oracle.total.clone()));
    }

    #[test]
    fn compare_over_base_self_is_identity_like() {
        let f = example_f();
        let p = factorize(&f, false).unwrap().perfect;
        let pair = compare_over_base(&p, &p, 1_000_000).unwrap().unwrap();
        assert_eq!(pair.0.then(&pair.1).unwrap(), TFunctor::identity(p.source().clone()));
    }

    #[test]
    fn fiber_size_obstruction_blocks_comparison() {
        // two perfect fibrations over the walking arrow with fiber sizes
        // (1,1) vs (1,2) cannot be isomorphic over it
        let wa = walking_arrow();
        let id = TFunctor::identity(wa.clone());
        let p2 = factorize(&example_f(), false).unwrap().perfect;
        assert!(compare_over_base(&id, &p2, 1_000_000).unwrap().is_none());
    }
}
