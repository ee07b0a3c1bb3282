//! T-functors, their induced maps on composable pairs and triples,
//! validation, and exhaustive enumeration.

use std::fmt;
use std::sync::Arc;

use crate::finset::FinMap;

use super::category::{derived_maps, TCategory, Violation};
use super::graph::ComposableTriples;
use super::CatError;

#[derive(Clone, Debug)]
pub struct TFunctor {
    source: Arc<TCategory>,
    target: Arc<TCategory>,
    f0: FinMap,
    f1: FinMap,
}

impl PartialEq for TFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.f0 == other.f0
            && self.f1 == other.f1
            && self.source == other.source
            && self.target == other.target
    }
}
impl Eq for TFunctor {}

impl TFunctor {
    pub fn new(
        source: Arc<TCategory>,
        target: Arc<TCategory>,
        f0: FinMap,
        f1: FinMap,
    ) -> Result<Self, CatError> {
        if source.monad() != target.monad() {
            return Err(CatError::Structure(
                "functor endpoints live over different monads".into(),
            ));
        }
        if f0.source() != source.objects() || f0.target() != target.objects() {
            return Err(CatError::Structure(
                "object part endpoints must be A0 -> B0".into(),
            ));
        }
        if f1.source() != source.morphisms() || f1.target() != target.morphisms() {
            return Err(CatError::Structure(
                "morphism part endpoints must be A1 -> B1".into(),
            ));
        }
        Ok(TFunctor { source, target, f0, f1 })
    }

    pub fn identity(cat: Arc<TCategory>) -> Self {
        let f0 = FinMap::identity(cat.objects());
        let f1 = FinMap::identity(cat.morphisms());
        TFunctor { source: cat.clone(), target: cat, f0, f1 }
    }

    pub fn source(&self) -> &Arc<TCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TCategory> {
        &self.target
    }

    pub fn f0(&self) -> &FinMap {
        &self.f0
    }

    pub fn f1(&self) -> &FinMap {
        &self.f1
    }

    /// Composite functor: first `self`, then `g`.
    pub fn then(&self, g: &TFunctor) -> Result<TFunctor, CatError> {
        if self.target != g.source {
            return Err(CatError::Structure(
                "functors are not composable: middle categories differ".into(),
            ));
        }
        Ok(TFunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            f0: self.f0.then(&g.f0)?,
            f1: self.f1.then(&g.f1)?,
        })
    }

    /// The induced map f2 = Tf1 x f1 : A2 -> B2. Fails with a membership
    /// violation when f is not a graph morphism.
    pub fn induced_f2(&self) -> Result<FinMap, CatError> {
        let monad = self.source.monad();
        let a2 = self.source.pairs();
        let b2 = self.target.pairs();
        let mut table = Vec::with_capacity(a2.len());
        for p in 0..a2.len() {
            let args = monad.t_apply(&self.f1, a2.args(p))?;
            let op = self.f1.target().elem(self.f1.apply_idx(a2.op_idx(p)));
            let idx = b2.find(&args, op).ok_or_else(|| {
                CatError::MembershipViolation(format!(
                    "f2 of pair `{}` is ({};{}), not composable in the target",
                    a2.set().elem(p),
                    args.name(),
                    op
                ))
            })?;
            table.push(idx);
        }
        Ok(FinMap::from_indices(a2.set().clone(), b2.set().clone(), table))
    }

    /// The induced map f3 = Tf2 x f2 : A3 -> B3 over the given triple objects.
    pub fn induced_f3(
        &self,
        f2: &FinMap,
        a3: &ComposableTriples,
        b3: &ComposableTriples,
    ) -> Result<FinMap, CatError> {
        let monad = self.source.monad();
        let mut table = Vec::with_capacity(a3.len());
        for t in 0..a3.len() {
            let args2 = monad.t_apply(f2, a3.args2(t))?;
            let op2 = f2.target().elem(f2.apply_idx(a3.op2_idx(t)));
            let idx = b3.find(&args2, op2).ok_or_else(|| {
                CatError::MembershipViolation(format!(
                    "f3 of triple `{}` is not composable in the target",
                    a3.set().elem(t)
                ))
            })?;
            table.push(idx);
        }
        Ok(FinMap::from_indices(a3.set().clone(), b3.set().clone(), table))
    }

    /// Convenience for (f2, f3), building both triple objects on the fly.
    pub fn induced_f2_f3(&self) -> Result<(FinMap, FinMap), CatError> {
        let f2 = self.induced_f2()?;
        let a3 = ComposableTriples::build(self.source.graph(), self.source.pairs())?;
        let b3 = ComposableTriples::build(self.target.graph(), self.target.pairs())?;
        let f3 = self.induced_f3(&f2, &a3, &b3)?;
        Ok((f2, f3))
    }
}

#[derive(Clone, Debug, Default)]
pub struct FunctorReport {
    pub violations: Vec<Violation>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "all functor conditions (8)-(9) pass")
        } else {
            for v in &self.violations {
                writeln!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

/// Check the functor conditions elementwise. `audit` additionally verifies
/// the derived identities relating f2, f3 to the i- and m-maps on both
/// sides, which must hold automatically whenever (8)-(9) do.
pub fn validate_functor(f: &TFunctor, audit: bool) -> Result<FunctorReport, CatError> {
    let monad = f.source().monad();
    let a = f.source();
    let b = f.target();
    let mut report = FunctorReport::default();
    fn fail_in(report: &mut FunctorReport, law: &str, witness: &str) {
        report.violations.push(Violation {
            law: law.to_string(),
            witness: witness.to_string(),
        });
    }
    macro_rules! fail {
        ($law:expr, $witness:expr) => {
            fail_in(&mut report, $law, $witness)
        };
    }

    // (8), nu = 0: graph morphism
    for (i, name) in a.morphisms().iter().enumerate() {
        let fa = f.f1().apply_idx(i);
        let expected_dom = monad.t_apply(f.f0(), a.dom().get_idx(i))?;
        if b.dom().get_idx(fa) != &expected_dom {
            fail!("(8) dom(f1(a)) = Tf0(dom(a))", name);
        }
        if b.cod().apply_idx(fa) != f.f0().apply_idx(a.cod().apply_idx(i)) {
            fail!("(8) cod(f1(a)) = f0(cod(a))", name);
        }
    }

    // (9) identities
    for (x_idx, x) in a.objects().iter().enumerate() {
        let lhs = f.f1().apply_idx(a.ins().apply_idx(x_idx));
        let rhs = b.ins().apply_idx(f.f0().apply_idx(x_idx));
        if lhs != rhs {
            fail!("(9) f1(i(x)) = i(f0(x))", x);
        }
    }

    // (9) composition, via f2
    let f2 = match f.induced_f2() {
        Ok(f2) => f2,
        Err(CatError::MembershipViolation(msg)) => {
            fail!("(8) f2 lands in B2", &msg);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    for p in 0..a.pairs().len() {
        let lhs = f.f1().apply_idx(a.comp_idx(p));
        let rhs = b.comp_idx(f2.apply_idx(p));
        if lhs != rhs {
            fail!("(9) f1(m(p)) = m(f2(p))", a.pairs().set().elem(p));
        }
    }

    if audit && report.passed() {
        // (10)/(11): consequences of (8)-(9)
        let da = derived_maps(a)?;
        let db = derived_maps(b)?;
        let f3 = f.induced_f3(&f2, &da.triples, &db.triples)?;
        for (i, name) in a.morphisms().iter().enumerate() {
            if f2.apply_idx(da.i1.apply_idx(i)) != db.i1.apply_idx(f.f1().apply_idx(i)) {
                fail!("(10) f2(i1(a)) = i1(f1(a))", name);
            }
            if f2.apply_idx(da.i2.apply_idx(i)) != db.i2.apply_idx(f.f1().apply_idx(i)) {
                fail!("(10) f2(i2(a)) = i2(f1(a))", name);
            }
        }
        for t in 0..da.triples.len() {
            let tname = da.triples.set().elem(t);
            if f2.apply_idx(da.m1.apply_idx(t)) != db.m1.apply_idx(f3.apply_idx(t)) {
                fail!("(11) f2(m1(t)) = m1(f3(t))", tname);
            }
            if f2.apply_idx(da.m2.apply_idx(t)) != db.m2.apply_idx(f3.apply_idx(t)) {
                fail!("(11) f2(m2(t)) = m2(f3(t))", tname);
            }
        }
    }

    Ok(report)
}

/// All T-functors A -> B, by backtracking: object parts first, then
/// per-morphism candidates constrained by the graph condition, then a full
/// functoriality check. `cap` bounds the number of candidate (f0, f1)
/// assignments examined.
pub fn enumerate_functors(
    a: &Arc<TCategory>,
    b: &Arc<TCategory>,
    cap: u64,
) -> Result<Vec<TFunctor>, CatError> {
    let monad = a.monad();
    if monad != b.monad() {
        return Err(CatError::Structure(
            "cannot enumerate functors across monads".into(),
        ));
    }
    let mut out = Vec::new();
    let mut examined: u64 = 0;
    for f0 in FinMap::all_maps(a.objects(), b.objects()) {
        // candidate target morphisms per source morphism
        let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(a.morphisms().len());
        let mut feasible = true;
        for i in 0..a.morphisms().len() {
            let want_dom = monad.t_apply(&f0, a.dom().get_idx(i))?;
            let want_cod = f0.apply_idx(a.cod().apply_idx(i));
            let mut opts = Vec::new();
            for j in 0..b.morphisms().len() {
                if b.cod().apply_idx(j) == want_cod && b.dom().get_idx(j) == &want_dom {
                    opts.push(j);
                }
            }
            if opts.is_empty() {
                feasible = false;
                break;
            }
            candidates.push(opts);
        }
        if !feasible {
            examined = examined.saturating_add(1);
            if examined > cap {
                return Err(CatError::CapExceeded { cap });
            }
            continue;
        }
        // odometer over the candidate lists
        let n = candidates.len();
        let mut pick = vec![0usize; n];
        loop {
            examined += 1;
            if examined > cap {
                return Err(CatError::CapExceeded { cap });
            }
            let table: Vec<usize> = (0..n).map(|i| candidates[i][pick[i]]).collect();
            let f1 = FinMap::from_indices(
                a.morphisms().clone(),
                b.morphisms().clone(),
                table,
            );
            let f = TFunctor::new(a.clone(), b.clone(), f0.clone(), f1)?;
            if validate_functor(&f, false)?.passed() {
                out.push(f);
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
                break;
            }
        }
    }
    Ok(out)
}

/// Elementwise discrete-opfibration test in the multicategory style: every
/// morphism downstairs, together with a lift of its source tuple, must have
/// exactly one morphism upstairs over it with that source.
pub fn mulcat_perfect_check(f: &TFunctor) -> Result<bool, CatError> {
    let monad = f.source().monad();
    let a = f.source();
    let b = f.target();
    for (j, _bname) in b.morphisms().iter().enumerate() {
        for lift in monad.fiber(f.f0(), b.dom().get_idx(j))? {
            let mut hits = 0usize;
            for i in 0..a.morphisms().len() {
                if f.f1().apply_idx(i) == j && a.dom().get_idx(i) == &lift {
                    hits += 1;
                }
            }
            if hits != 1 {
                return Ok(false);
            }
        }
    }
    // every upstairs morphism is accounted for by construction: its image
    // and domain term always form such a (lift, morphism) pair when f is a
    // graph morphism; reject otherwise so the scan above is exhaustive
    Ok(validate_functor(f, false)?.passed())
}
