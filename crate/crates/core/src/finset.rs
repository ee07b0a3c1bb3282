//! Finite sets and total maps: the ambient category.
//!
//! Everything downstream needs exactly three constructions from here:
//! pullbacks, finite limits of arbitrary finite diagrams, and coequalizers
//! of reflexive pairs. All element identifiers are opaque strings and all
//! derived elements get canonical, deterministic names.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FinSetError {
    #[error("duplicate element `{element}` in set `{set}`")]
    DuplicateElement { set: String, element: String },
    #[error("element `{element}` is not in set `{set}`")]
    NoSuchElement { set: String, element: String },
    #[error("map table for `{set}` is missing an image for `{element}`")]
    MissingImage { set: String, element: String },
    #[error("pullback legs have different targets: `{left}` vs `{right}`")]
    TargetMismatch { left: String, right: String },
    #[error("maps `{first}` -> `{second}` are not composable")]
    NotComposable { first: String, second: String },
    #[error("diagram shape error: {0}")]
    ShapeError(String),
    #[error("the given section is not a common section of the pair: {0}")]
    NotReflexive(String),
}

/// A named finite set with a stable element order (insertion order).
///
/// Equality and hashing ignore the name: two sets are equal when they list
/// the same elements in the same order. Names exist for display and for
/// deterministic naming of derived sets.
#[derive(Clone, Debug)]
pub struct FinSet {
    name: String,
    elems: Vec<String>,
    index: HashMap<String, usize>,
}

impl PartialEq for FinSet {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}
impl Eq for FinSet {}

impl std::hash::Hash for FinSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.elems.hash(state);
    }
}

impl FinSet {
    pub fn new(
        name: impl Into<String>,
        elems: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, FinSetError> {
        let name = name.into();
        let elems: Vec<String> = elems.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(elems.len());
        for (i, e) in elems.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(FinSetError::DuplicateElement {
                    set: name,
                    element: e.clone(),
                });
            }
        }
        Ok(FinSet { name, elems, index })
    }

    pub fn empty(name: impl Into<String>) -> Self {
        FinSet::new(name, Vec::<String>::new()).unwrap()
    }

    pub fn singleton(name: impl Into<String>, elem: impl Into<String>) -> Self {
        FinSet::new(name, [elem.into()]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, elem: &str) -> bool {
        self.index.contains_key(elem)
    }

    pub fn position(&self, elem: &str) -> Option<usize> {
        self.index.get(elem).copied()
    }

    pub fn elem(&self, i: usize) -> &str {
        &self.elems[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.elems.iter().map(String::as_str)
    }

    pub fn elements(&self) -> &[String] {
        &self.elems
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{{}}}", self.name, self.elems.join(", "))
    }
}

/// A total map between finite sets, stored as an index table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinMap {
    source: FinSet,
    target: FinSet,
    table: Vec<usize>,
}

impl FinMap {
    /// Build a map from explicit (source element, target element) pairs.
    /// Every source element must get exactly one image inside the target.
    pub fn from_pairs<'a>(
        source: FinSet,
        target: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, FinSetError> {
        let mut table: Vec<Option<usize>> = vec![None; source.len()];
        for (x, y) in pairs {
            let i = source.position(x).ok_or_else(|| FinSetError::NoSuchElement {
                set: source.name.clone(),
                element: x.to_string(),
            })?;
            let j = target.position(y).ok_or_else(|| FinSetError::NoSuchElement {
                set: target.name.clone(),
                element: y.to_string(),
            })?;
            table[i] = Some(j);
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(i, entry)| {
                entry.ok_or_else(|| FinSetError::MissingImage {
                    set: source.name.clone(),
                    element: source.elem(i).to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FinMap { source, target, table })
    }

    /// Build a map by evaluating `f` on every source element.
    pub fn from_fn(
        source: FinSet,
        target: FinSet,
        mut f: impl FnMut(&str) -> String,
    ) -> Result<Self, FinSetError> {
        let mut table = Vec::with_capacity(source.len());
        for x in source.iter() {
            let y = f(x);
            let j = target.position(&y).ok_or_else(|| FinSetError::NoSuchElement {
                set: target.name.clone(),
                element: y,
            })?;
            table.push(j);
        }
        Ok(FinMap { source, target, table })
    }

    pub fn from_indices(source: FinSet, target: FinSet, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), source.len());
        assert!(table.iter().all(|&j| j < target.len().max(1)));
        FinMap { source, target, table }
    }

    pub fn identity(set: &FinSet) -> Self {
        FinMap {
            source: set.clone(),
            target: set.clone(),
            table: (0..set.len()).collect(),
        }
    }

    pub fn constant(source: FinSet, target: FinSet, value: &str) -> Result<Self, FinSetError> {
        let j = target.position(value).ok_or_else(|| FinSetError::NoSuchElement {
            set: target.name.clone(),
            element: value.to_string(),
        })?;
        let table = vec![j; source.len()];
        Ok(FinMap { source, target, table })
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn apply(&self, x: &str) -> Result<&str, FinSetError> {
        let i = self.source.position(x).ok_or_else(|| FinSetError::NoSuchElement {
            set: self.source.name.clone(),
            element: x.to_string(),
        })?;
        Ok(self.target.elem(self.table[i]))
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `self.then(g)` is the composite: first `self`, then `g`.
    pub fn then(&self, g: &FinMap) -> Result<FinMap, FinSetError> {
        if self.target != g.source {
            return Err(FinSetError::NotComposable {
                first: self.source.name.clone(),
                second: g.target.name.clone(),
            });
        }
        let table = self.table.iter().map(|&j| g.table[j]).collect();
        Ok(FinMap {
            source: self.source.clone(),
            target: g.target.clone(),
            table,
        })
    }

    pub fn preimage(&self, y: &str) -> Vec<&str> {
        match self.target.position(y) {
            Some(j) => self
                .table
                .iter()
                .enumerate()
                .filter(|(_, &t)| t == j)
                .map(|(i, _)| self.source.elem(i))
                .collect(),
            None => Vec::new(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &j in &self.table {
            hit[j] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &j in &self.table {
            if hit[j] {
                return false;
            }
            hit[j] = true;
        }
        true
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinMap> {
        if !self.is_bijective() {
            return None;
        }
        let mut table = vec![0usize; self.target.len()];
        for (i, &j) in self.table.iter().enumerate() {
            table[j] = i;
        }
        Some(FinMap {
            source: self.target.clone(),
            target: self.source.clone(),
            table,
        })
    }

    /// All total maps source -> target, in odometer order over the target
    /// indices. Exponentially many; callers bound the sizes.
    pub fn all_maps(source: &FinSet, target: &FinSet) -> AllMaps {
        AllMaps {
            source: source.clone(),
            target: target.clone(),
            next: Some(vec![0; source.len()]),
        }
    }
}

pub struct AllMaps {
    source: FinSet,
    target: FinSet,
    next: Option<Vec<usize>>,
}

impl Iterator for AllMaps {
    type Item = FinMap;

    fn next(&mut self) -> Option<FinMap> {
        if self.target.is_empty() && !self.source.is_empty() {
            return None;
        }
        let current = self.next.take()?;
        let item = FinMap {
            source: self.source.clone(),
            target: self.target.clone(),
            table: current.clone(),
        };
        // advance the odometer
        let mut digits = current;
        let base = self.target.len();
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                self.next = None;
                break;
            }
            digits[pos] += 1;
            if digits[pos] < base {
                self.next = Some(digits);
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        Some(item)
    }
}

/// Canonical name for a pair element of a pullback.
pub fn pair_name(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// Pullback of `f: X -> Z` and `g: Y -> Z`: the set of pairs (x, y) with
/// f(x) = g(y), with its two projections. Pairs are enumerated in
/// lexicographic (source-order) fashion and named `"(x,y)"`.
pub fn pullback(f: &FinMap, g: &FinMap) -> Result<(FinSet, FinMap, FinMap), FinSetError> {
    if f.target != g.target {
        return Err(FinSetError::TargetMismatch {
            left: f.target.name.clone(),
            right: g.target.name.clone(),
        });
    }
    let mut names = Vec::new();
    let mut proj1 = Vec::new();
    let mut proj2 = Vec::new();
    for (i, x) in f.source.iter().enumerate() {
        for (j, y) in g.source.iter().enumerate() {
            if f.table[i] == g.table[j] {
                names.push(pair_name(x, y));
                proj1.push(i);
                proj2.push(j);
            }
        }
    }
    let apex = FinSet::new(
        format!("({}x{})", f.source.name, g.source.name),
        names,
    )?;
    let p1 = FinMap::from_indices(apex.clone(), f.source.clone(), proj1);
    let p2 = FinMap::from_indices(apex.clone(), g.source.clone(), proj2);
    Ok((apex, p1, p2))
}

/// A finite diagram of sets: nodes plus maps between them, endpoints given
/// by node index.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub nodes: Vec<FinSet>,
    pub edges: Vec<DiagramEdge>,
}

#[derive(Clone, Debug)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub map: FinMap,
}

/// Limit of a finite diagram: the subset of the product of all nodes on
/// which every edge commutes, with one projection per node. Elements are
/// named as tuples `"(x0,...,xn)"` in node order.
pub fn finite_limit(diagram: &Diagram) -> Result<(FinSet, Vec<FinMap>), FinSetError> {
    for (k, e) in diagram.edges.iter().enumerate() {
        if e.from >= diagram.nodes.len() || e.to >= diagram.nodes.len() {
            return Err(FinSetError::ShapeError(format!(
                "edge {k} references a node outside the diagram"
            )));
        }
        if e.map.source() != &diagram.nodes[e.from] || e.map.target() != &diagram.nodes[e.to] {
            return Err(FinSetError::ShapeError(format!(
                "edge {k} endpoints do not match its declared nodes"
            )));
        }
    }
    let n = diagram.nodes.len();
    let mut names = Vec::new();
    let mut projections: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tuple = vec![0usize; n];
    'outer: loop {
        // check commutation for the current tuple
        let consistent = diagram
            .edges
            .iter()
            .all(|e| e.map.apply_idx(tuple[e.from]) == tuple[e.to]);
        if consistent {
            let parts: Vec<&str> = (0..n).map(|i| diagram.nodes[i].elem(tuple[i])).collect();
            names.push(format!("({})", parts.join(",")));
            for i in 0..n {
                projections[i].push(tuple[i]);
            }
        }
        // advance, last position fastest so names come out lexicographic
        let mut pos = n;
        loop {
            if pos == 0 {
                break 'outer;
            }
            pos -= 1;
            if diagram.nodes[pos].is_empty() {
                break 'outer;
            }
            tuple[pos] += 1;
            if tuple[pos] < diagram.nodes[pos].len() {
                break;
            }
            tuple[pos] = 0;
        }
    }
    if diagram.nodes.iter().any(|s| s.is_empty()) {
        names.clear();
        projections = vec![Vec::new(); n];
    }
    let apex = FinSet::new("lim", names)?;
    let projections = projections
        .into_iter()
        .enumerate()
        .map(|(i, table)| FinMap::from_indices(apex.clone(), diagram.nodes[i].clone(), table))
        .collect();
    Ok((apex, projections))
}

/// Union-find with path compression; backs the reflexive coequalizer.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let mut a = self.find(a);
        let mut b = self.find(b);
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Coequalizer of the reflexive pair `k, l: X -> Y` with common section `j`.
///
/// The quotient identifies k(x) ~ l(x) for every x and closes under
/// symmetry and transitivity. Each class is named by its lexicographically
/// least member; classes are listed in order of first appearance in Y.
pub fn reflexive_coequalizer(
    k: &FinMap,
    l: &FinMap,
    j: &FinMap,
) -> Result<(FinSet, FinMap), FinSetError> {
    if k.source != l.source || k.target != l.target {
        return Err(FinSetError::ShapeError(
            "parallel pair must share source and target".into(),
        ));
    }
    if j.source != k.target || j.target != k.source {
        return Err(FinSetError::NotReflexive(
            "section endpoints do not match the pair".into(),
        ));
    }
    for (i, y) in k.target.iter().enumerate() {
        let ji = j.table[i];
        if k.table[ji] != i || l.table[ji] != i {
            return Err(FinSetError::NotReflexive(format!(
                "section fails k∘j = id = l∘j at `{y}`"
            )));
        }
    }
    quotient_by_pair(k, l)
}

/// The quotient of `k, l`'s common target by the generated equivalence.
/// Shared with the coequalizer; also used to re-check pullback stability.
pub fn quotient_by_pair(k: &FinMap, l: &FinMap) -> Result<(FinSet, FinMap), FinSetError> {
    let y = &k.target;
    let mut uf = UnionFind::new(y.len());
    for i in 0..k.source.len() {
        uf.union(k.table[i], l.table[i]);
    }
    quotient_from_uf(y, &mut uf)
}

pub(crate) fn quotient_from_uf(
    y: &FinSet,
    uf: &mut UnionFind,
) -> Result<(FinSet, FinMap), FinSetError> {
    // least name per root
    let mut least: HashMap<usize, usize> = HashMap::new();
    for i in 0..y.len() {
        let r = uf.find(i);
        let entry = least.entry(r).or_insert(i);
        if y.elem(i) < y.elem(*entry) {
            *entry = i;
        }
    }
    let mut class_names = Vec::new();
    let mut class_index: HashMap<usize, usize> = HashMap::new();
    let mut table = Vec::with_capacity(y.len());
    for i in 0..y.len() {
        let r = uf.find(i);
        let q = *class_index.entry(r).or_insert_with(|| {
            class_names.push(y.elem(least[&r]).to_string());
            class_names.len() - 1
        });
        table.push(q);
    }
    let quotient = FinSet::new(format!("{}/~", y.name), class_names)?;
    let z = FinMap::from_indices(y.clone(), quotient.clone(), table);
    Ok((quotient, z))
}
