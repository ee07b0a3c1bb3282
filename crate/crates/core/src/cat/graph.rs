//! T-graphs, pointed T-graphs, and the derived objects of composable
//! pairs and triples.

use crate::finset::{FinMap, FinSet};
use crate::monad::{Monad, TTerm, TermMap};

use super::CatError;

/// A span d0: A1 -> TA0, c0: A1 -> A0. The domain side is term-valued
/// because TA0 is not materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TGraph {
    monad: Monad,
    objects: FinSet,
    morphisms: FinSet,
    dom: TermMap,
    cod: FinMap,
}

impl TGraph {
    pub fn new(
        monad: Monad,
        objects: FinSet,
        morphisms: FinSet,
        dom_terms: Vec<TTerm>,
        cod: FinMap,
    ) -> Result<Self, CatError> {
        if dom_terms.len() != morphisms.len() {
            return Err(CatError::Structure(format!(
                "expected {} domain terms, got {}",
                morphisms.len(),
                dom_terms.len()
            )));
        }
        if cod.source() != &morphisms || cod.target() != &objects {
            return Err(CatError::Structure(
                "codomain map endpoints must be morphisms -> objects".into(),
            ));
        }
        let dom = TermMap::new(monad, morphisms.clone(), objects.clone(), dom_terms)?;
        Ok(TGraph { monad, objects, morphisms, dom, cod })
    }

    pub fn monad(&self) -> Monad {
        self.monad
    }

    pub fn objects(&self) -> &FinSet {
        &self.objects
    }

    pub fn morphisms(&self) -> &FinSet {
        &self.morphisms
    }

    pub fn dom(&self) -> &TermMap {
        &self.dom
    }

    pub fn cod(&self) -> &FinMap {
        &self.cod
    }

    pub fn dom_of(&self, a: &str) -> Result<&TTerm, CatError> {
        Ok(self.dom.get(a)?)
    }

    pub fn cod_of(&self, a: &str) -> Result<&str, CatError> {
        Ok(self.cod.apply(a)?)
    }
}

/// A T-graph with an insertion of identities i: A0 -> A1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedTGraph {
    graph: TGraph,
    ins: FinMap,
}

impl PointedTGraph {
    pub fn new(graph: TGraph, ins: FinMap) -> Result<Self, CatError> {
        if ins.source() != graph.objects() || ins.target() != graph.morphisms() {
            return Err(CatError::Structure(
                "identity insertion endpoints must be objects -> morphisms".into(),
            ));
        }
        Ok(PointedTGraph { graph, ins })
    }

    pub fn graph(&self) -> &TGraph {
        &self.graph
    }

    pub fn ins(&self) -> &FinMap {
        &self.ins
    }
}

pub(crate) fn pair_elem_name(args: &TTerm, op: &str) -> String {
    format!("({};{})", args.name(), op)
}

/// The object A2 of composable pairs: records (args: term over A1, op in A1)
/// with T(cod)(args) = dom(op). Built per op by fiber enumeration, so it is
/// finite even when TA1 is not.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposablePairs {
    set: FinSet,
    args: Vec<TTerm>,
    op: Vec<usize>,
}

impl ComposablePairs {
    pub fn build(graph: &TGraph) -> Result<Self, CatError> {
        let monad = graph.monad();
        let mut names = Vec::new();
        let mut args = Vec::new();
        let mut op = Vec::new();
        for (i, a) in graph.morphisms().iter().enumerate() {
            let want = graph.dom().get_idx(i);
            for alpha in monad.fiber(graph.cod(), want)? {
                names.push(pair_elem_name(&alpha, a));
                args.push(alpha);
                op.push(i);
            }
        }
        let set = FinSet::new(format!("{}_pairs", graph.morphisms().name()), names)?;
        Ok(ComposablePairs { set, args, op })
    }

    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn args(&self, i: usize) -> &TTerm {
        &self.args[i]
    }

    pub fn op_idx(&self, i: usize) -> usize {
        self.op[i]
    }

    pub fn find(&self, args: &TTerm, op: &str) -> Option<usize> {
        self.set.position(&pair_elem_name(args, op))
    }

    /// The projection c1: A2 -> A1.
    pub fn c1_map(&self, morphisms: &FinSet) -> FinMap {
        FinMap::from_indices(self.set.clone(), morphisms.clone(), self.op.clone())
    }

    /// The projection d1: A2 -> TA1 as a term-valued assignment.
    pub fn d1_map(&self, monad: Monad, morphisms: &FinSet) -> TermMap {
        TermMap::new(monad, self.set.clone(), morphisms.clone(), self.args.clone())
            .expect("pair args are terms over A1 by construction")
    }
}

/// The object A3 of composable triples: records (args2: term over A2,
/// op2 in A2) with T(c1)(args2) = d1(op2).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposableTriples {
    set: FinSet,
    args2: Vec<TTerm>,
    op2: Vec<usize>,
}

impl ComposableTriples {
    pub fn build(graph: &TGraph, pairs: &ComposablePairs) -> Result<Self, CatError> {
        let monad = graph.monad();
        let c1 = pairs.c1_map(graph.morphisms());
        let mut names = Vec::new();
        let mut args2 = Vec::new();
        let mut op2 = Vec::new();
        for (q, qname) in pairs.set().iter().enumerate() {
            let want = pairs.args(q);
            for beta in monad.fiber(&c1, want)? {
                names.push(pair_elem_name(&beta, qname));
                args2.push(beta);
                op2.push(q);
            }
        }
        let set = FinSet::new(format!("{}_triples", graph.morphisms().name()), names)?;
        Ok(ComposableTriples { set, args2, op2 })
    }

    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn args2(&self, i: usize) -> &TTerm {
        &self.args2[i]
    }

    pub fn op2_idx(&self, i: usize) -> usize {
        self.op2[i]
    }

    pub fn find(&self, args2: &TTerm, pair_name: &str) -> Option<usize> {
        self.set.position(&pair_elem_name(args2, pair_name))
    }

    /// The projection c2: A3 -> A2.
    pub fn c2_map(&self, pairs: &FinSet) -> FinMap {
        FinMap::from_indices(self.set.clone(), pairs.clone(), self.op2.clone())
    }
}
