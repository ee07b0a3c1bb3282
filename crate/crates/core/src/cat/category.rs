//! T-categories: pointed T-graphs with a total composition table on the
//! object of composable pairs, plus the axiom validator.

use std::collections::HashMap;
use std::fmt;

use crate::finset::{FinMap, FinSet};
use crate::monad::{Monad, TTerm, TermMap};

use super::graph::{ComposablePairs, ComposableTriples, PointedTGraph, TGraph};
use super::CatError;

/// One row of a composition table: m(args; op) = result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompEntry {
    pub args: TTerm,
    pub op: String,
    pub result: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TCategory {
    pointed: PointedTGraph,
    pairs: ComposablePairs,
    comp: Vec<usize>,
}

impl TCategory {
    /// Assemble a category from a pointed graph and a composite chooser.
    /// The chooser sees each composable pair and must name the composite
    /// morphism.
    pub fn from_comp_fn(
        pointed: PointedTGraph,
        mut compose: impl FnMut(&TTerm, &str) -> Result<String, CatError>,
    ) -> Result<Self, CatError> {
        let pairs = ComposablePairs::build(pointed.graph())?;
        let morphisms = pointed.graph().morphisms().clone();
        let mut comp = Vec::with_capacity(pairs.len());
        for i in 0..pairs.len() {
            let op_name = morphisms.elem(pairs.op_idx(i));
            let result = compose(pairs.args(i), op_name)?;
            let r = morphisms.position(&result).ok_or_else(|| {
                CatError::Structure(format!(
                    "composite `{result}` of pair `{}` is not a morphism",
                    pairs.set().elem(i)
                ))
            })?;
            comp.push(r);
        }
        Ok(TCategory { pointed, pairs, comp })
    }

    /// Assemble a category from an explicit composition table. The table
    /// must cover every composable pair exactly once and nothing else.
    pub fn from_entries(
        pointed: PointedTGraph,
        entries: &[CompEntry],
    ) -> Result<Self, CatError> {
        let pairs = ComposablePairs::build(pointed.graph())?;
        let morphisms = pointed.graph().morphisms().clone();
        let mut table: Vec<Option<usize>> = vec![None; pairs.len()];
        for e in entries {
            let idx = pairs.find(&e.args, &e.op).ok_or_else(|| {
                CatError::Structure(format!(
                    "composition entry ({};{}) does not name a composable pair",
                    e.args.name(),
                    e.op
                ))
            })?;
            let r = morphisms.position(&e.result).ok_or_else(|| {
                CatError::Structure(format!("composite `{}` is not a morphism", e.result))
            })?;
            if table[idx].replace(r).is_some() {
                return Err(CatError::Structure(format!(
                    "duplicate composition entry for pair `{}`",
                    pairs.set().elem(idx)
                )));
            }
        }
        let comp = table
            .into_iter()
            .enumerate()
            .map(|(i, entry)| {
                entry.ok_or_else(|| {
                    CatError::Structure(format!(
                        "composition table misses pair `{}`",
                        pairs.set().elem(i)
                    ))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TCategory { pointed, pairs, comp })
    }

    pub fn monad(&self) -> Monad {
        self.pointed.graph().monad()
    }

    pub fn graph(&self) -> &TGraph {
        self.pointed.graph()
    }

    pub fn pointed(&self) -> &PointedTGraph {
        &self.pointed
    }

    pub fn objects(&self) -> &FinSet {
        self.pointed.graph().objects()
    }

    pub fn morphisms(&self) -> &FinSet {
        self.pointed.graph().morphisms()
    }

    pub fn dom(&self) -> &TermMap {
        self.pointed.graph().dom()
    }

    pub fn cod(&self) -> &FinMap {
        self.pointed.graph().cod()
    }

    pub fn ins(&self) -> &FinMap {
        self.pointed.ins()
    }

    pub fn pairs(&self) -> &ComposablePairs {
        &self.pairs
    }

    pub fn comp_idx(&self, pair_idx: usize) -> usize {
        self.comp[pair_idx]
    }

    pub fn comp_name(&self, pair_idx: usize) -> &str {
        self.morphisms().elem(self.comp[pair_idx])
    }

    /// Composite m(args; op), looked up in the table.
    pub fn comp_of(&self, args: &TTerm, op: &str) -> Result<&str, CatError> {
        let idx = self.pairs.find(args, op).ok_or_else(|| {
            CatError::MembershipViolation(format!(
                "({};{}) is not a composable pair",
                args.name(),
                op
            ))
        })?;
        Ok(self.comp_name(idx))
    }

    /// The composition as a plain map A2 -> A1.
    pub fn comp_map(&self) -> FinMap {
        FinMap::from_indices(
            self.pairs.set().clone(),
            self.morphisms().clone(),
            self.comp.clone(),
        )
    }

    /// A span (d0, c0) is monic iff no two morphisms share both projections.
    pub fn is_ordered(&self) -> bool {
        let mut seen: HashMap<(String, usize), usize> = HashMap::new();
        for i in 0..self.morphisms().len() {
            let key = (self.dom().get_idx(i).name(), self.cod().apply_idx(i));
            if seen.insert(key, i).is_some() {
                return false;
            }
        }
        true
    }

    /// The discrete T-category on a set: objects = morphisms = X,
    /// dom = unit, cod = identity, with the forced composition.
    pub fn discrete(monad: Monad, x: &FinSet) -> TCategory {
        let dom_terms = x.iter().map(|e| monad.unit(e)).collect();
        let graph = TGraph::new(monad, x.clone(), x.clone(), dom_terms, FinMap::identity(x))
            .expect("discrete graph is structurally valid");
        let pointed =
            PointedTGraph::new(graph, FinMap::identity(x)).expect("identity pointing");
        // every composable pair is (unit(e); e), and its composite is e
        TCategory::from_comp_fn(pointed, |_, op| Ok(op.to_string()))
            .expect("discrete composition is total")
    }

    /// Embed a T-algebra (X, a) as an ordered T-category with morphisms TX.
    /// Only available when TX is finitely enumerable; validates the algebra
    /// laws on the nose.
    pub fn algebra_embed(monad: Monad, x: &FinSet, a: &FinMap) -> Result<TCategory, CatError> {
        let terms = monad.enumerate_t(x)?;
        let tx = FinSet::new(
            format!("T({})", x.name()),
            terms.iter().map(TTerm::name),
        )?;
        if a.source() != &tx || a.target() != x {
            return Err(CatError::Structure(
                "structure map endpoints must be TX -> X".into(),
            ));
        }
        let term_of = |name: &str| -> Result<TTerm, CatError> {
            let i = tx.position(name).ok_or_else(|| {
                CatError::Structure(format!("`{name}` is not a term name"))
            })?;
            Ok(terms[i].clone())
        };
        // unit law: a(eta(x)) = x
        for e in x.iter() {
            let unit_name = monad.unit(e).name();
            if a.apply(&unit_name)? != e {
                return Err(CatError::NotAnAlgebra(format!(
                    "a(unit({e})) = {} instead of {e}",
                    a.apply(&unit_name)?
                )));
            }
        }
        // associativity law: a ∘ Ta = a ∘ mu on all of TTX
        for tt in monad.enumerate_t(&tx)? {
            let via_ta = monad.t_apply(a, &tt)?;
            let lhs = a.apply(&via_ta.name())?;
            let expanded = monad.t_apply_assign(&tt, |name| {
                term_of(name).map_err(|_| crate::monad::MonadError::AlienElement {
                    element: name.to_string(),
                    set: tx.name().to_string(),
                })
            })?;
            let via_mu = monad.flatten(&expanded)?;
            let rhs = a.apply(&via_mu.name())?;
            if lhs != rhs {
                return Err(CatError::NotAnAlgebra(format!(
                    "a∘Ta and a∘mu disagree at {}",
                    tt.name()
                )));
            }
        }
        let dom_terms = terms.clone();
        let graph = TGraph::new(monad, x.clone(), tx.clone(), dom_terms, a.clone())?;
        let ins = FinMap::from_fn(x.clone(), tx.clone(), |e| monad.unit(e).name())?;
        let pointed = PointedTGraph::new(graph, ins)?;
        TCategory::from_comp_fn(pointed, |beta, _| {
            let expanded = monad.t_apply_assign(beta, |name| {
                term_of(name).map_err(|_| crate::monad::MonadError::AlienElement {
                    element: name.to_string(),
                    set: tx.name().to_string(),
                })
            })?;
            Ok(monad.flatten(&expanded)?.name())
        })
    }
}

/// The derived structure maps of a category: identity insertions into A2,
/// the two ways of composing a triple, and the pointing of A3.
#[derive(Clone, Debug)]
pub struct DerivedMaps {
    pub triples: ComposableTriples,
    /// i1 = Ti x 1: A1 -> A2
    pub i1: FinMap,
    /// i2 = eta x i: A1 -> A2
    pub i2: FinMap,
    /// m1 = Tm x c1: A3 -> A2
    pub m1: FinMap,
    /// m2 = (mu . Td1) x m: A3 -> A2
    pub m2: FinMap,
    /// ibar: A0 -> A3, pointing of the triple graph
    pub ibar: FinMap,
}

pub fn derived_maps(cat: &TCategory) -> Result<DerivedMaps, CatError> {
    let monad = cat.monad();
    let graph = cat.graph();
    let pairs = cat.pairs();
    let triples = ComposableTriples::build(graph, pairs)?;
    let a1 = graph.morphisms();
    let a2 = pairs.set();
    let a3 = triples.set();

    let locate_pair = |args: &TTerm, op: &str, what: &str| -> Result<usize, CatError> {
        pairs.find(args, op).ok_or_else(|| {
            CatError::MembershipViolation(format!(
                "{what} produced ({};{}) outside A2",
                args.name(),
                op
            ))
        })
    };

    // i1(a) = (Ti(dom a); a)
    let mut i1_table = Vec::with_capacity(a1.len());
    for (i, a) in a1.iter().enumerate() {
        let args = monad.t_apply(cat.ins(), graph.dom().get_idx(i))?;
        i1_table.push(locate_pair(&args, a, "i1")?);
    }
    let i1 = FinMap::from_indices(a1.clone(), a2.clone(), i1_table);

    // i2(a) = (unit(a); i(cod a))
    let mut i2_table = Vec::with_capacity(a1.len());
    for (i, a) in a1.iter().enumerate() {
        let target_obj = graph.cod().apply_idx(i);
        let op = a1.elem(cat.ins().apply_idx(target_obj));
        i2_table.push(locate_pair(&monad.unit(a), op, "i2")?);
    }
    let i2 = FinMap::from_indices(a1.clone(), a2.clone(), i2_table);

    let comp_map = cat.comp_map();

    // m1(beta; q) = (Tm(beta); q-as-pair), with c1(m1) = c1(c2)
    let mut m1_table = Vec::with_capacity(a3.len());
    for t in 0..triples.len() {
        let args = monad.t_apply(&comp_map, triples.args2(t))?;
        let q = triples.op2_idx(t);
        let op = a1.elem(pairs.op_idx(q));
        m1_table.push(locate_pair(&args, op, "m1")?);
    }
    let m1 = FinMap::from_indices(a3.clone(), a2.clone(), m1_table);

    // m2(beta; q) = (mu(Td1(beta)); m(q))
    let d1 = pairs.d1_map(monad, a1);
    let mut m2_table = Vec::with_capacity(a3.len());
    for t in 0..triples.len() {
        let args = d1.flat_apply(monad, triples.args2(t))?;
        let op = cat.comp_name(triples.op2_idx(t));
        m2_table.push(locate_pair(&args, op, "m2")?);
    }
    let m2 = FinMap::from_indices(a3.clone(), a2.clone(), m2_table);

    // ibar(x) = (unit(i1(i(x))); i1(i(x)))
    let mut ibar_table = Vec::with_capacity(graph.objects().len());
    for x in 0..graph.objects().len() {
        let pair_idx = i1.apply_idx(cat.ins().apply_idx(x));
        let pair_name = a2.elem(pair_idx);
        let args2 = monad.unit(pair_name);
        let t = triples.find(&args2, pair_name).ok_or_else(|| {
            CatError::MembershipViolation(format!(
                "ibar produced ({};{pair_name}) outside A3",
                args2.name()
            ))
        })?;
        ibar_table.push(t);
    }
    let ibar = FinMap::from_indices(graph.objects().clone(), a3.clone(), ibar_table);

    Ok(DerivedMaps { triples, i1, i2, m1, m2, ibar })
}

/// One failed axiom instance, with the element that witnesses it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated at {}", self.law, self.witness)
    }
}

#[derive(Clone, Debug, Default)]
pub struct CategoryReport {
    pub violations: Vec<Violation>,
}

impl CategoryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for CategoryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "all category axioms (1)-(7) pass")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Check the category axioms elementwise and report every violation with
/// its witnessing element. `audit` additionally rebuilds the pointing of
/// the triple object and re-checks its defining equations, plus the
/// derived equality i1∘i = i2∘i.
pub fn validate_category(cat: &TCategory, audit: bool) -> Result<CategoryReport, CatError> {
    let monad = cat.monad();
    let graph = cat.graph();
    let mut report = CategoryReport::default();
    let mut fail = |law: &str, witness: &str| {
        report.violations.push(Violation {
            law: law.to_string(),
            witness: witness.to_string(),
        });
    };

    // (1) d0·i = unit, c0·i = 1
    for (x_idx, x) in cat.objects().iter().enumerate() {
        let i_of_x = cat.ins().apply_idx(x_idx);
        if graph.dom().get_idx(i_of_x) != &monad.unit(x) {
            fail("(1) dom(i(x)) = unit(x)", x);
        }
        if cat.cod().apply_idx(i_of_x) != x_idx {
            fail("(1) cod(i(x)) = x", x);
        }
    }

    // (3) d0·m = mu·Td0·d1 and c0·m = c0·c1
    for p in 0..cat.pairs().len() {
        let pname = cat.pairs().set().elem(p);
        let m_of = cat.comp_idx(p);
        let expected_dom = graph.dom().flat_apply(monad, cat.pairs().args(p))?;
        if graph.dom().get_idx(m_of) != &expected_dom {
            fail("(3) dom(m) = mu(Tdom(args))", pname);
        }
        if cat.cod().apply_idx(m_of) != cat.cod().apply_idx(cat.pairs().op_idx(p)) {
            fail("(3) cod(m) = cod(op)", pname);
        }
    }

    // derived maps may fail on an inconsistent table; report instead of erroring
    let derived = match derived_maps(cat) {
        Ok(d) => d,
        Err(CatError::MembershipViolation(msg)) => {
            fail("(2/5) derived maps land in A2/A3", &msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };

    // (4) m·i1 = 1 = m·i2
    for (i, a) in cat.morphisms().iter().enumerate() {
        if cat.comp_idx(derived.i1.apply_idx(i)) != i {
            fail("(4) m(i1(a)) = a", a);
        }
        if cat.comp_idx(derived.i2.apply_idx(i)) != i {
            fail("(4) m(i2(a)) = a", a);
        }
    }

    // (7) m·m1 = m·m2
    for t in 0..derived.triples.len() {
        let tname = derived.triples.set().elem(t);
        if cat.comp_idx(derived.m1.apply_idx(t)) != cat.comp_idx(derived.m2.apply_idx(t)) {
            fail("(7) m(m1(t)) = m(m2(t))", tname);
        }
    }

    if audit {
        // derived equality i1·i = i2·i
        for (x_idx, x) in cat.objects().iter().enumerate() {
            let i_of_x = cat.ins().apply_idx(x_idx);
            if derived.i1.apply_idx(i_of_x) != derived.i2.apply_idx(i_of_x) {
                fail("i1(i(x)) = i2(i(x))", x);
            }
        }
        // (6) d2·ibar = eta·i1·i and c2·ibar = i1·i
        for (x_idx, x) in cat.objects().iter().enumerate() {
            let t = derived.ibar.apply_idx(x_idx);
            let pair_idx = derived.i1.apply_idx(cat.ins().apply_idx(x_idx));
            let pair_name = cat.pairs().set().elem(pair_idx);
            if derived.triples.args2(t) != &monad.unit(pair_name) {
                fail("(6) d2(ibar(x)) = unit(i1(i(x)))", x);
            }
            if derived.triples.op2_idx(t) != pair_idx {
                fail("(6) c2(ibar(x)) = i1(i(x))", x);
            }
        }
    }

    Ok(report)
}
