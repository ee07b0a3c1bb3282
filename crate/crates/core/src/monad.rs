//! Computable monads on finite sets.
//!
//! A `TTerm` is a closed syntactic representative of an element of TX (or
//! TTX, one level up). The two shipped monads keep every construction
//! finite in different ways: the identity monad has TX = X, while the list
//! monad has infinite TX but finite fibers over any fixed term, which is
//! all the downstream pullback machinery ever asks for.
//!
//! New monads plug in by adding a variant here and its arms in the match
//! blocks below; nothing downstream inspects terms directly.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::finset::{FinMap, FinSet};

#[derive(Debug, Error)]
pub enum MonadError {
    #[error("term mentions `{element}` which is not in set `{set}`")]
    AlienElement { element: String, set: String },
    #[error("term has the wrong shape for this monad/level: {0}")]
    WrongLevel(String),
    #[error("TX is not finitely enumerable: {0}")]
    Unrepresentable(String),
}

/// The monad instance a structure lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monad {
    Identity,
    List,
}

impl fmt::Display for Monad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monad::Identity => write!(f, "identity"),
            Monad::List => write!(f, "list"),
        }
    }
}

/// A term of TX (level 1) or TTX (level 2), over some base set of element
/// identifiers. Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TTerm {
    El(String),
    List(Vec<TTerm>),
}

impl TTerm {
    pub fn el(x: impl Into<String>) -> Self {
        TTerm::El(x.into())
    }

    pub fn list(items: impl IntoIterator<Item = TTerm>) -> Self {
        TTerm::List(items.into_iter().collect())
    }

    /// A list term over bare elements.
    pub fn flat_list(items: impl IntoIterator<Item = impl Into<String>>) -> Self {
        TTerm::List(items.into_iter().map(|x| TTerm::El(x.into())).collect())
    }

    /// All element identifiers occurring in the term, in order.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            TTerm::El(x) => out.push(x),
            TTerm::List(items) => {
                for t in items {
                    t.collect_atoms(out);
                }
            }
        }
    }

    /// Canonical printed form, used for element naming of derived sets.
    pub fn name(&self) -> String {
        match self {
            TTerm::El(x) => x.clone(),
            TTerm::List(items) => {
                let parts: Vec<String> = items.iter().map(TTerm::name).collect();
                format!("[{}]", parts.join(","))
            }
        }
    }
}

impl fmt::Display for TTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl Monad {
    /// Whether TX is finite for every finite X.
    pub fn can_enumerate(&self) -> bool {
        matches!(self, Monad::Identity)
    }

    /// The unit η_X at an element.
    pub fn unit(&self, x: &str) -> TTerm {
        match self {
            Monad::Identity => TTerm::el(x),
            Monad::List => TTerm::List(vec![TTerm::el(x)]),
        }
    }

    /// Validate that `t` is a well-formed level-1 term over `x`.
    pub fn check_term(&self, x: &FinSet, t: &TTerm) -> Result<(), MonadError> {
        match (self, t) {
            (Monad::Identity, TTerm::El(e)) => {
                if x.contains(e) {
                    Ok(())
                } else {
                    Err(MonadError::AlienElement {
                        element: e.clone(),
                        set: x.name().to_string(),
                    })
                }
            }
            (Monad::Identity, TTerm::List(_)) => Err(MonadError::WrongLevel(
                "identity-monad terms are bare elements".into(),
            )),
            (Monad::List, TTerm::List(items)) => {
                for item in items {
                    match item {
                        TTerm::El(e) => {
                            if !x.contains(e) {
                                return Err(MonadError::AlienElement {
                                    element: e.clone(),
                                    set: x.name().to_string(),
                                });
                            }
                        }
                        TTerm::List(_) => {
                            return Err(MonadError::WrongLevel(
                                "level-1 list entries must be bare elements".into(),
                            ))
                        }
                    }
                }
                Ok(())
            }
            (Monad::List, TTerm::El(_)) => Err(MonadError::WrongLevel(
                "list-monad terms are lists".into(),
            )),
        }
    }

    /// Apply T to an arbitrary term transform: entries of `t` are rewritten
    /// by `f`. For the identity monad this is just `f` itself.
    pub fn map_entries(
        &self,
        t: &TTerm,
        mut f: impl FnMut(&TTerm) -> Result<TTerm, MonadError>,
    ) -> Result<TTerm, MonadError> {
        match self {
            Monad::Identity => f(t),
            Monad::List => match t {
                TTerm::List(items) => {
                    let mapped = items.iter().map(f).collect::<Result<Vec<_>, _>>()?;
                    Ok(TTerm::List(mapped))
                }
                TTerm::El(_) => Err(MonadError::WrongLevel(
                    "list-monad terms are lists".into(),
                )),
            },
        }
    }

    /// Functorial action Tf on a level-1 term.
    pub fn t_apply(&self, f: &FinMap, t: &TTerm) -> Result<TTerm, MonadError> {
        self.map_entries(t, |entry| match entry {
            TTerm::El(x) => {
                let y = f.apply(x).map_err(|_| MonadError::AlienElement {
                    element: x.clone(),
                    set: f.source().name().to_string(),
                })?;
                Ok(TTerm::el(y))
            }
            TTerm::List(_) => Err(MonadError::WrongLevel(
                "level-1 entries must be bare elements".into(),
            )),
        })
    }

    /// Apply T to a term-valued assignment, producing a level-2 term:
    /// every element entry is replaced by its assigned level-1 term.
    pub fn t_apply_assign(
        &self,
        t: &TTerm,
        mut assign: impl FnMut(&str) -> Result<TTerm, MonadError>,
    ) -> Result<TTerm, MonadError> {
        self.map_entries(t, |entry| match entry {
            TTerm::El(x) => assign(x),
            TTerm::List(_) => Err(MonadError::WrongLevel(
                "level-1 entries must be bare elements".into(),
            )),
        })
    }

    /// The multiplication μ on a level-2 term.
    pub fn flatten(&self, tt: &TTerm) -> Result<TTerm, MonadError> {
        match self {
            Monad::Identity => Ok(tt.clone()),
            Monad::List => match tt {
                TTerm::List(items) => {
                    let mut out = Vec::new();
                    for item in items {
                        match item {
                            TTerm::List(inner) => out.extend(inner.iter().cloned()),
                            TTerm::El(_) => {
                                return Err(MonadError::WrongLevel(
                                    "flatten expects a list of lists".into(),
                                ))
                            }
                        }
                    }
                    Ok(TTerm::List(out))
                }
                TTerm::El(_) => Err(MonadError::WrongLevel(
                    "flatten expects a list of lists".into(),
                )),
            },
        }
    }

    /// All level-1 terms t' over `f`'s source with Tf(t') = t, in canonical
    /// order. The empty set is a legitimate answer.
    pub fn fiber(&self, f: &FinMap, t: &TTerm) -> Result<Vec<TTerm>, MonadError> {
        self.check_term(f.target(), t)?;
        match self {
            Monad::Identity => {
                let TTerm::El(y) = t else { unreachable!() };
                Ok(f.preimage(y).into_iter().map(TTerm::el).collect())
            }
            Monad::List => {
                let TTerm::List(items) = t else { unreachable!() };
                // Tf preserves length, so the fiber is the product of the
                // entrywise preimages.
                let choices: Vec<Vec<&str>> = items
                    .iter()
                    .map(|item| match item {
                        TTerm::El(y) => f.preimage(y),
                        TTerm::List(_) => unreachable!(),
                    })
                    .collect();
                if choices.iter().any(Vec::is_empty) {
                    return Ok(Vec::new());
                }
                let mut out = Vec::new();
                let n = choices.len();
                let mut odo = vec![0usize; n];
                loop {
                    out.push(TTerm::List(
                        (0..n).map(|i| TTerm::el(choices[i][odo[i]])).collect(),
                    ));
                    // advance, last position fastest
                    let mut pos = n;
                    loop {
                        if pos == 0 {
                            return Ok(out);
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
    }

    /// The whole of TX, when finite.
    pub fn enumerate_t(&self, x: &FinSet) -> Result<Vec<TTerm>, MonadError> {
        match self {
            Monad::Identity => Ok(x.iter().map(TTerm::el).collect()),
            Monad::List => {
                if x.is_empty() {
                    Ok(vec![TTerm::List(Vec::new())])
                } else {
                    Err(MonadError::Unrepresentable(format!(
                        "list terms over nonempty `{}` are unbounded",
                        x.name()
                    )))
                }
            }
        }
    }
}

/// A term-valued assignment on a finite set: one level-1 term per element,
/// all over a common base set. This is how morphisms like d0: A1 -> TA0
/// are stored, since TA0 itself need not be finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMap {
    source: FinSet,
    base: FinSet,
    values: Vec<TTerm>,
}

impl TermMap {
    pub fn new(
        monad: Monad,
        source: FinSet,
        base: FinSet,
        values: Vec<TTerm>,
    ) -> Result<Self, MonadError> {
        assert_eq!(values.len(), source.len());
        for v in &values {
            monad.check_term(&base, v)?;
        }
        Ok(TermMap { source, base, values })
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn base(&self) -> &FinSet {
        &self.base
    }

    pub fn get_idx(&self, i: usize) -> &TTerm {
        &self.values[i]
    }

    pub fn get(&self, elem: &str) -> Result<&TTerm, MonadError> {
        let i = self.source.position(elem).ok_or_else(|| MonadError::AlienElement {
            element: elem.to_string(),
            set: self.source.name().to_string(),
        })?;
        Ok(&self.values[i])
    }

    /// Apply T to this assignment at a term over the source, then flatten:
    /// the composite μ ∘ T(self), landing in terms over the base.
    pub fn flat_apply(&self, monad: Monad, t: &TTerm) -> Result<TTerm, MonadError> {
        let lifted = monad.t_apply_assign(t, |x| self.get(x).cloned())?;
        monad.flatten(&lifted)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().copied()).unwrap()
    }

    #[test]
    fn identity_unit_and_apply() {
        let x = set("X", &["a", "b"]);
        let f = FinMap::from_pairs(x.clone(), x.clone(), [("a", "b"), ("b", "b")]).unwrap();
        let m = Monad::Identity;
        assert_eq!(m.unit("a"), TTerm::el("a"));
        assert_eq!(m.t_apply(&f, &TTerm::el("a")).unwrap(), TTerm::el("b"));
    }

    #[test]
    fn list_apply_is_componentwise() {
        let x = set("X", &["a"]);
        let y = set("Y", &["b"]);
        let f = FinMap::from_pairs(x, y, [("a", "b")]).unwrap();
        let m = Monad::List;
        assert_eq!(
            m.t_apply(&f, &TTerm::flat_list(["a", "a"])).unwrap(),
            TTerm::flat_list(["b", "b"])
        );
    }

    #[test]
    fn list_flatten_concatenates() {
        let m = Monad::List;
        let tt = TTerm::list([TTerm::flat_list(["a"]), TTerm::flat_list(["b", "c"])]);
        assert_eq!(m.flatten(&tt).unwrap(), TTerm::flat_list(["a", "b", "c"]));
    }

    #[test]
    fn list_unit_law_on_a_term() {
        // μ·η_T = 1: wrapping a term in a singleton list and flattening
        // returns the term.
        let m = Monad::List;
        let t = TTerm::flat_list(["a", "b"]);
        let wrapped = TTerm::list([t.clone()]);
        assert_eq!(m.flatten(&wrapped).unwrap(), t);
    }

    #[test]
    fn fiber_of_constant_map_is_full_product() {
        let a = set("A", &["a1", "a2"]);
        let b = set("B", &["b"]);
        let f = FinMap::constant(a, b, "b").unwrap();
        let m = Monad::List;
        let fib = m.fiber(&f, &TTerm::flat_list(["b", "b"])).unwrap();
        assert_eq!(
            fib,
            vec![
                TTerm::flat_list(["a1", "a1"]),
                TTerm::flat_list(["a1", "a2"]),
                TTerm::flat_list(["a2", "a1"]),
                TTerm::flat_list(["a2", "a2"]),
            ]
        );
    }

    #[test]
    fn fiber_of_empty_list_is_empty_list() {
        let a = set("A", &["a"]);
        let b = set("B", &["b"]);
        let f = FinMap::constant(a, b, "b").unwrap();
        let fib = Monad::List.fiber(&f, &TTerm::List(vec![])).unwrap();
        assert_eq!(fib, vec![TTerm::List(vec![])]);
    }

    #[test]
    fn enumerate_t_cases() {
        let x = set("X", &["a", "b"]);
        assert_eq!(
            Monad::Identity.enumerate_t(&x).unwrap(),
            vec![TTerm::el("a"), TTerm::el("b")]
        );
        assert!(matches!(
            Monad::List.enumerate_t(&x),
            Err(MonadError::Unrepresentable(_))
        ));
        let empty = FinSet::empty("E");
        assert_eq!(
            Monad::List.enumerate_t(&empty).unwrap(),
            vec![TTerm::List(vec![])]
        );
    }

    #[test]
    fn alien_element_is_reported() {
        let x = set("X", &["a"]);
        let f = FinMap::identity(&x);
        assert!(matches!(
            Monad::List.t_apply(&f, &TTerm::flat_list(["z"])),
            Err(MonadError::AlienElement { .. })
        ));
    }

    // --- randomized law checks ---------------------------------------

    const ELEMS: [&str; 4] = ["a", "b", "c", "d"];

    fn base_set() -> FinSet {
        set("X", &ELEMS)
    }

    fn arb_elem() -> impl Strategy<Value = String> {
        prop::sample::select(ELEMS.to_vec()).prop_map(str::to_string)
    }

    fn arb_list_term() -> impl Strategy<Value = TTerm> {
        prop::collection::vec(arb_elem(), 0..=6)
            .prop_map(TTerm::flat_list)
    }

    fn arb_map() -> impl Strategy<Value = FinMap> {
        prop::collection::vec(0usize..ELEMS.len(), ELEMS.len()).prop_map(|table| {
            FinMap::from_indices(base_set(), base_set(), table)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn functor_composition(t in arb_list_term(), f in arb_map(), g in arb_map()) {
            let m = Monad::List;
            let composite = f.then(&g).unwrap();
            let one_shot = m.t_apply(&composite, &t).unwrap();
            let two_step = m.t_apply(&g, &m.t_apply(&f, &t).unwrap()).unwrap();
            prop_assert_eq!(one_shot, two_step);
        }

        #[test]
        fn functor_identity(t in arb_list_term()) {
            let m = Monad::List;
            let id = FinMap::identity(&base_set());
            prop_assert_eq!(m.t_apply(&id, &t).unwrap(), t);
        }

        #[test]
        fn unit_naturality(x in arb_elem(), f in arb_map()) {
            for m in [Monad::Identity, Monad::List] {
                let lhs = m.t_apply(&f, &m.unit(&x)).unwrap();
                let rhs = m.unit(f.apply(&x).unwrap());
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn flatten_unit_laws(t in arb_list_term()) {
            let m = Monad::List;
            // μ·ηT = 1
            prop_assert_eq!(m.flatten(&TTerm::list([t.clone()])).unwrap(), t.clone());
            // μ·Tη = 1
            let teta = m
                .t_apply_assign(&t, |x| Ok(m.unit(x)))
                .unwrap();
            prop_assert_eq!(m.flatten(&teta).unwrap(), t);
        }

        #[test]
        fn flatten_associativity(
            ttt in prop::collection::vec(prop::collection::vec(arb_list_term(), 0..=3), 0..=3)
        ) {
            // a level-3 term: list of lists of level-1 lists
            let m = Monad::List;
            let t3 = TTerm::list(ttt.into_iter().map(TTerm::list));
            // μ·Tμ
            let t_mu = m.map_entries(&t3, |lvl2| m.flatten(lvl2)).unwrap();
            let lhs = m.flatten(&t_mu).unwrap();
            // μ·μT
            let mu_t = m.flatten(&t3).unwrap();
            let rhs = m.flatten(&mu_t).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fiber_soundness_and_completeness(t in arb_list_term(), f in arb_map()) {
            let m = Monad::List;
            let image = m.t_apply(&f, &t).unwrap();
            let fib = m.fiber(&f, &image).unwrap();
            // soundness: every member maps onto the image, and t is among them
            prop_assert!(fib.contains(&t));
            for u in &fib {
                prop_assert_eq!(m.t_apply(&f, u).unwrap(), image.clone());
            }
            // completeness: brute force over all lists of the same length
            let TTerm::List(items) = &image else { unreachable!() };
            let n = items.len();
            let mut brute = Vec::new();
            let mut odo = vec![0usize; n];
            loop {
                let candidate = TTerm::List(
                    odo.iter().map(|&i| TTerm::el(ELEMS[i])).collect(),
                );
                if m.t_apply(&f, &candidate).unwrap() == image {
                    brute.push(candidate);
                }
                let mut pos = n;
                let mut done = true;
                loop {
                    if pos == 0 { break; }
                    pos -= 1;
                    odo[pos] += 1;
                    if odo[pos] < ELEMS.len() { done = false; break; }
                    odo[pos] = 0;
                }
                if done { break; }
            }
            let mut fib_sorted = fib;
            fib_sorted.sort();
            brute.sort();
            prop_assert_eq!(fib_sorted, brute);
        }

        #[test]
        fn t_apply_preserves_surjectivity(table in prop::collection::vec(0usize..2, 4)) {
            // a surjective map onto a two-element set, applied to terms
            let target = set("Y", &["u", "v"]);
            let mut table = table;
            table[0] = 0;
            table[1] = 1;
            let f = FinMap::from_indices(base_set(), target, table);
            prop_assert!(f.is_surjective());
            // surjectivity of Tf on terms of bounded size: every term over the
            // target has a nonempty fiber
            let m = Monad::List;
            for t in [TTerm::flat_list(["u"]), TTerm::flat_list(["v", "u"]), TTerm::List(vec![])] {
                prop_assert!(!m.fiber(&f, &t).unwrap().is_empty());
            }
        }
    }
}
