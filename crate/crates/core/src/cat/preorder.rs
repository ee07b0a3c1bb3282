//! Finite preorders, their encoding as ordered T-categories over the
//! identity monad, and the downset characterization of perfect monotone
//! maps.

use std::sync::Arc;

use crate::finset::{FinMap, FinSet};
use crate::monad::Monad;

use super::category::TCategory;
use super::functor::TFunctor;
use super::graph::{PointedTGraph, TGraph};
use super::CatError;

/// A reflexive, transitive relation on a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preorder {
    set: FinSet,
    le: Vec<Vec<bool>>,
}

impl Preorder {
    /// Validate that the given pairs form a preorder as they stand:
    /// reflexive pairs must be listed and the relation must already be
    /// transitively closed.
    pub fn new<'a>(
        set: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, CatError> {
        let n = set.len();
        let mut le = vec![vec![false; n]; n];
        for (x, y) in pairs {
            let i = set
                .position(x)
                .ok_or_else(|| CatError::NotAPreorder(format!("unknown element `{x}`")))?;
            let j = set
                .position(y)
                .ok_or_else(|| CatError::NotAPreorder(format!("unknown element `{y}`")))?;
            le[i][j] = true;
        }
        for (i, row) in le.iter().enumerate() {
            if !row[i] {
                return Err(CatError::NotAPreorder(format!(
                    "missing reflexive pair at `{}`",
                    set.elem(i)
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        return Err(CatError::NotAPreorder(format!(
                            "relation is not transitive at `{}` <= `{}` <= `{}`",
                            set.elem(i),
                            set.elem(j),
                            set.elem(k)
                        )));
                    }
                }
            }
        }
        Ok(Preorder { set, le })
    }

    /// Close the given pairs reflexively and transitively.
    pub fn generated<'a>(
        set: FinSet,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, CatError> {
        let n = set.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in pairs {
            let i = set
                .position(x)
                .ok_or_else(|| CatError::NotAPreorder(format!("unknown element `{x}`")))?;
            let j = set
                .position(y)
                .ok_or_else(|| CatError::NotAPreorder(format!("unknown element `{y}`")))?;
            le[i][j] = true;
        }
        // Floyd-Warshall style transitive closure
        for k in 0..n {
            let row_k = le[k].clone();
            for row in le.iter_mut() {
                if row[k] {
                    for (slot, &via) in row.iter_mut().zip(&row_k) {
                        *slot |= via;
                    }
                }
            }
        }
        Ok(Preorder { set, le })
    }

    pub fn set(&self) -> &FinSet {
        &self.set
    }

    pub fn le_idx(&self, i: usize, j: usize) -> bool {
        self.le[i][j]
    }

    pub fn le(&self, x: &str, y: &str) -> bool {
        match (self.set.position(x), self.set.position(y)) {
            (Some(i), Some(j)) => self.le[i][j],
            _ => false,
        }
    }

    fn down_set(&self, j: usize) -> Vec<usize> {
        (0..self.set.len()).filter(|&i| self.le[i][j]).collect()
    }

    /// Encode as an ordered T-category over the identity monad: one
    /// morphism `"(x<y)"` per related pair, with the forced composition.
    pub fn to_tcategory(&self) -> Result<TCategory, CatError> {
        let n = self.set.len();
        let mut names = Vec::new();
        let mut dom_terms = Vec::new();
        let mut cods = Vec::new();
        let mut ins_table = vec![0usize; n];
        for (i, ins_slot) in ins_table.iter_mut().enumerate() {
            for j in 0..n {
                if self.le[i][j] {
                    if i == j {
                        *ins_slot = names.len();
                    }
                    names.push(format!("({}<{})", self.set.elem(i), self.set.elem(j)));
                    dom_terms.push(Monad::Identity.unit(self.set.elem(i)));
                    cods.push(j);
                }
            }
        }
        let morphisms = FinSet::new(format!("{}_le", self.set.name()), names)?;
        let cod = FinMap::from_indices(morphisms.clone(), self.set.clone(), cods);
        let graph = TGraph::new(
            Monad::Identity,
            self.set.clone(),
            morphisms.clone(),
            dom_terms,
            cod,
        )?;
        let ins = FinMap::from_indices(self.set.clone(), morphisms.clone(), ins_table);
        let pointed = PointedTGraph::new(graph, ins)?;
        TCategory::from_comp_fn(pointed, |args, op| {
            // args is a single morphism (x<y); op is (y<z); composite (x<z)
            let arg_name = args.name();
            let x = source_of(&arg_name)
                .ok_or_else(|| CatError::Structure(format!("bad morphism name {arg_name}")))?;
            let z = target_of(op)
                .ok_or_else(|| CatError::Structure(format!("bad morphism name {op}")))?;
            Ok(format!("({x}<{z})"))
        })
    }
}

fn source_of(name: &str) -> Option<&str> {
    name.strip_prefix('(')?.split('<').next()
}

fn target_of(name: &str) -> Option<&str> {
    name.strip_suffix(')')?.split('<').nth(1)
}

/// A monotone map between preorders, as a T-functor between their
/// category encodings.
pub fn monotone_to_functor(
    p: &Preorder,
    q: &Preorder,
    f: &FinMap,
) -> Result<TFunctor, CatError> {
    if f.source() != p.set() || f.target() != q.set() {
        return Err(CatError::Structure("map endpoints must match the preorders".into()));
    }
    for i in 0..p.set().len() {
        for j in 0..p.set().len() {
            if p.le_idx(i, j) && !q.le_idx(f.apply_idx(i), f.apply_idx(j)) {
                return Err(CatError::Structure(format!(
                    "map is not monotone at {} <= {}",
                    p.set().elem(i),
                    p.set().elem(j)
                )));
            }
        }
    }
    let source = Arc::new(p.to_tcategory()?);
    let target = Arc::new(q.to_tcategory()?);
    let f1 = FinMap::from_fn(
        source.morphisms().clone(),
        target.morphisms().clone(),
        |name| {
            let x = source_of(name).unwrap();
            let y = target_of(name).unwrap();
            format!("({}<{})", f.apply(x).unwrap(), f.apply(y).unwrap())
        },
    )?;
    TFunctor::new(source, target, f.clone(), f1)
}

/// The downset characterization of perfect monotone maps:
/// 1. the preimage of a downset is covered from the fiber, and
/// 2. distinct fiber points have disjoint downsets.
pub fn ord_perfect_check(p: &Preorder, q: &Preorder, f: &FinMap) -> Result<bool, CatError> {
    if f.source() != p.set() || f.target() != q.set() {
        return Err(CatError::Structure("map endpoints must match the preorders".into()));
    }
    for yp in 0..q.set().len() {
        let fiber: Vec<usize> = (0..p.set().len())
            .filter(|&x| f.apply_idx(x) == yp)
            .collect();
        // condition 1: f^{-1}(down(y')) ⊆ down(f^{-1}(y'))
        for x in 0..p.set().len() {
            if q.le_idx(f.apply_idx(x), yp) {
                let covered = fiber.iter().any(|&xp| p.le_idx(x, xp));
                if !covered {
                    return Ok(false);
                }
            }
        }
        // condition 2: down(x') ∩ down(x'') nonempty forces x' = x''
        for (a, &xp) in fiber.iter().enumerate() {
            for &xpp in fiber.iter().skip(a + 1) {
                let down_xp = p.down_set(xp);
                if down_xp.iter().any(|&z| p.le_idx(z, xpp)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
