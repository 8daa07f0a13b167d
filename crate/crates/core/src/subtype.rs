//! Algebraic decision of emptiness, subtyping and equivalence.
//!
//! `t1 ≤ t2` reduces to the emptiness of `t1 ∧ ¬t2`. Emptiness normalizes to
//! DNF and decides each summand per kind:
//!
//! * basic: the folded constant set is empty;
//! * product: `⋀(sᵢ×tᵢ) ∧ ⋀¬(s'ⱼ×t'ⱼ)` is empty iff for every subset `N'` of
//!   the negatives, either `⋀sᵢ ≤ ⋁_{N'} s'ⱼ` or `⋀tᵢ ≤ ⋁_{N∖N'} t'ⱼ`;
//! * arrow: `⋀(sᵢ→tᵢ) ∧ ⋀¬(s'ⱼ→t'ⱼ)` is empty iff some negative arrow
//!   `s'→t'` satisfies `s' ≤ ⋁ sᵢ` and, for every proper subset `P'` of the
//!   positives, `s' ≤ ⋁_{P'} sᵢ` or `⋀_{P∖P'} tᵢ ≤ t'`.
//!
//! Recursive back-edges are handled coinductively: a type is assumed empty
//! while its own emptiness is being established. Verdicts are cached, with
//! the usual care that a tentative "empty" which leaned on an enclosing
//! assumption is not committed until that assumption is itself discharged
//! (non-emptiness is witness-based and always safe to commit).

use crate::dnf::{atom_children, AtomKind, Summand};
use crate::types::{TypeEngine, TypeId};

/// Dependency marker: the smallest assumption-stack index a verdict relied
/// on, or `NONE` when it is self-contained.
const NONE: usize = usize::MAX;

impl TypeEngine {
    /// Is `⟦t⟧` the empty set?
    pub fn is_empty(&self, t: TypeId) -> bool {
        debug_assert!(!self.contains_dyn(t), "is_empty needs a static type");
        if let Some(&b) = self.empty_settled.borrow().get(&t) {
            return b;
        }
        let mut stack = Vec::new();
        self.empty_rec(t, &mut stack).0
    }

    pub fn subtype(&self, t1: TypeId, t2: TypeId) -> bool {
        self.is_empty(self.mk_and(t1, self.mk_not(t2)))
    }

    pub fn equiv(&self, t1: TypeId, t2: TypeId) -> bool {
        self.subtype(t1, t2) && self.subtype(t2, t1)
    }

    pub fn is_non_empty(&self, t: TypeId) -> bool {
        !self.is_empty(t)
    }

    fn empty_rec(&self, t: TypeId, stack: &mut Vec<TypeId>) -> (bool, usize) {
        if let Some(&b) = self.empty_settled.borrow().get(&t) {
            return (b, NONE);
        }
        if let Some(pos) = stack.iter().position(|&s| s == t) {
            // Coinductive hypothesis: assume empty, look for a contradiction.
            return (true, pos);
        }
        stack.push(t);
        let my_index = stack.len() - 1;
        let dnf = self.dnf(t);
        let mut low = NONE;
        let mut empty = true;
        for summand in &dnf.summands {
            let (e, l) = self.summand_empty(summand, stack);
            low = low.min(l);
            if !e {
                empty = false;
                break;
            }
        }
        stack.pop();
        if !empty {
            // A non-emptiness verdict corresponds to an explicit witness and
            // cannot be invalidated by dropping assumptions.
            self.empty_settled.borrow_mut().insert(t, false);
            (false, NONE)
        } else if low >= my_index {
            // Only this type's own assumption was used: sound coinduction.
            self.empty_settled.borrow_mut().insert(t, true);
            (true, NONE)
        } else {
            // Conditional on an enclosing assumption; do not commit.
            (true, low)
        }
    }

    fn summand_empty(&self, s: &Summand, stack: &mut Vec<TypeId>) -> (bool, usize) {
        let kinds = s.pos_kinds(self);
        if kinds.len() >= 2 {
            // Positive atoms of distinct kinds are disjoint.
            return (true, NONE);
        }
        let check = |kind: AtomKind, stack: &mut Vec<TypeId>| -> (bool, usize) {
            match kind {
                AtomKind::Basic => (s.basic_part(self).is_empty(), NONE),
                AtomKind::Prod => self.prod_empty(
                    &s.pos_of(self, AtomKind::Prod),
                    &s.neg_of(self, AtomKind::Prod),
                    stack,
                ),
                AtomKind::Arrow => self.arrow_empty(
                    &s.pos_of(self, AtomKind::Arrow),
                    &s.neg_of(self, AtomKind::Arrow),
                    stack,
                ),
            }
        };
        match kinds.first() {
            Some(&k) => check(k, stack),
            None => {
                // No positive atoms: the summand spans all kinds and is
                // empty only if every kind-part is.
                let mut low = NONE;
                for k in [AtomKind::Basic, AtomKind::Prod, AtomKind::Arrow] {
                    let (e, l) = check(k, stack);
                    low = low.min(l);
                    if !e {
                        return (false, low);
                    }
                }
                (true, low)
            }
        }
    }

    /// Emptiness of `(s × t) ∖ ⋃ N` via the subset decomposition, with the
    /// accumulated sides checked for emptiness to exit early.
    fn prod_empty(
        &self,
        pos: &[TypeId],
        neg: &[TypeId],
        stack: &mut Vec<TypeId>,
    ) -> (bool, usize) {
        let (ss, ts): (Vec<_>, Vec<_>) = pos.iter().map(|&a| atom_children(self, a)).unzip();
        let s = self.mk_and_all(&ss);
        let t = self.mk_and_all(&ts);
        self.prod_rec(s, t, neg, stack)
    }

    fn prod_rec(
        &self,
        s: TypeId,
        t: TypeId,
        neg: &[TypeId],
        stack: &mut Vec<TypeId>,
    ) -> (bool, usize) {
        let (se, l1) = self.empty_rec(s, stack);
        if se {
            return (true, l1);
        }
        let (te, l2) = self.empty_rec(t, stack);
        if te {
            return (true, l1.min(l2));
        }
        let mut low = l1.min(l2);
        match neg.split_first() {
            None => (false, low),
            Some((&n, rest)) => {
                let (ns, nt) = atom_children(self, n);
                // Pairs avoiding (ns × nt) have either their first component
                // outside ns or their second outside nt.
                let (e1, la) = self.prod_rec(self.mk_diff(s, ns), t, rest, stack);
                low = low.min(la);
                if !e1 {
                    return (false, low);
                }
                let (e2, lb) = self.prod_rec(s, self.mk_diff(t, nt), rest, stack);
                low = low.min(lb);
                (e2, low)
            }
        }
    }

    fn arrow_empty(
        &self,
        pos: &[TypeId],
        neg: &[TypeId],
        stack: &mut Vec<TypeId>,
    ) -> (bool, usize) {
        let mut low = NONE;
        for &n in neg {
            let (ns, nt) = atom_children(self, n);
            let (dominates, l) = self.arrow_rec(ns, self.mk_any(), false, nt, pos, stack);
            low = low.min(l);
            if dominates {
                return (true, low);
            }
        }
        (false, low)
    }

    /// Does the negative arrow `ns → nt` subsume `⋀ pos`?
    ///
    /// Walks the positive arrows, choosing for each whether its domain chips
    /// away at `ns` (residue `s_res`) or its codomain joins the meet
    /// `t_meet`; every complete choice must end with `s_res` empty or, when
    /// at least one codomain was kept, `t_meet ≤ nt`.
    #[allow(clippy::too_many_arguments)]
    fn arrow_rec(
        &self,
        s_res: TypeId,
        t_meet: TypeId,
        kept: bool,
        nt: TypeId,
        pos: &[TypeId],
        stack: &mut Vec<TypeId>,
    ) -> (bool, usize) {
        let (se, l1) = self.empty_rec(s_res, stack);
        if se {
            return (true, l1);
        }
        let mut low = l1;
        if kept {
            let (sub, l2) = self.empty_rec(self.mk_diff(t_meet, nt), stack);
            low = low.min(l2);
            if sub {
                return (true, low);
            }
        }
        match pos.split_first() {
            None => (false, low),
            Some((&p, rest)) => {
                let (ps, pt) = atom_children(self, p);
                let (ok1, la) = self.arrow_rec(self.mk_diff(s_res, ps), t_meet, kept, nt, rest, stack);
                low = low.min(la);
                if !ok1 {
                    return (false, low);
                }
                let (ok2, lb) =
                    self.arrow_rec(s_res, self.mk_and(t_meet, pt), true, nt, rest, stack);
                low = low.min(lb);
                (ok2, low)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basic::{BasicSet, Constant};
    use crate::types::TypeSpec;

    fn engine() -> TypeEngine {
        TypeEngine::new()
    }

    #[test]
    fn disjoint_basic_kinds() {
        let e = engine();
        assert!(e.is_empty(e.mk_and(e.int(), e.bool_ty())));
        assert!(!e.is_empty(e.mk_or(e.int(), e.bool_ty())));
    }

    #[test]
    fn product_decomposition() {
        let e = engine();
        // (Int×Any) ∧ (Any×Int) ∧ ¬(Int×Int) is empty.
        let t = e.mk_and(
            e.mk_and(
                e.mk_prod(e.int(), e.mk_any()),
                e.mk_prod(e.mk_any(), e.int()),
            ),
            e.mk_not(e.mk_prod(e.int(), e.int())),
        );
        assert!(e.is_empty(t));
    }

    #[test]
    fn negated_arrow_is_inhabited() {
        let e = engine();
        // (Int→Int) ∧ ¬(Bool→Bool) is not empty.
        let t = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_not(e.mk_arrow(e.bool_ty(), e.bool_ty())),
        );
        assert!(!e.is_empty(t));
    }

    #[test]
    fn overloaded_function_application_judgment() {
        let e = engine();
        let lhs = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        let ib = e.mk_or(e.int(), e.bool_ty());
        assert!(e.subtype(lhs, e.mk_arrow(ib, ib)));
    }

    #[test]
    fn occurrence_typing_equivalences() {
        let e = engine();
        let ib = e.mk_or(e.int(), e.bool_ty());
        assert!(e.equiv(e.mk_and(ib, e.int()), e.int()));
        assert!(e.equiv(e.mk_and(ib, e.mk_not(e.int())), e.bool_ty()));
    }

    #[test]
    fn union_intersection_of_arrows_is_strict() {
        let e = engine();
        let union_arrow = e.mk_arrow(e.mk_or(e.int(), e.bool_ty()), e.mk_and(e.int(), e.bool_ty()));
        let inter = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        assert!(e.subtype(union_arrow, inter));
        assert!(!e.subtype(inter, union_arrow));
    }

    #[test]
    fn top_function_type() {
        let e = engine();
        let ii = e.mk_arrow(e.int(), e.int());
        assert!(e.subtype(ii, e.any_arrow()));
        // Any→Any is not a supertype of all function types.
        let aa = e.mk_arrow(e.mk_any(), e.mk_any());
        assert!(!e.subtype(ii, aa));
    }

    #[test]
    fn product_union_distribution() {
        let e = engine();
        let t1 = e.int();
        let t2 = e.string_ty();
        let t = e.bool_ty();
        let lhs = e.mk_or(e.mk_prod(t1, t), e.mk_prod(t2, t));
        let rhs = e.mk_prod(e.mk_or(t1, t2), t);
        assert!(e.equiv(lhs, rhs));
    }

    #[test]
    fn recursive_list_subtyping() {
        let e = engine();
        let nil = TypeSpec::Basic(BasicSet::singleton(&Constant::Atom("Nil".into())));
        let list_of = |elem: TypeId, name: &str| -> TypeId {
            e.mk_rec(&[(
                name.to_string(),
                TypeSpec::Or(
                    Box::new(TypeSpec::Prod(
                        Box::new(TypeSpec::Id(elem)),
                        Box::new(TypeSpec::Ref(name.to_string())),
                    )),
                    Box::new(nil.clone()),
                ),
            )])
            .unwrap()[name]
        };
        let int_list = list_of(e.int(), "L");
        let any_list = list_of(e.mk_any(), "T");
        assert!(e.subtype(int_list, any_list));
        assert!(!e.subtype(any_list, int_list));
        assert!(!e.is_empty(int_list));
    }

    #[test]
    fn conditional_verdicts_are_not_committed() {
        let e = engine();
        // A = (A × Int) ∨ Bool is not empty, even though the product summand
        // probes A's own emptiness on the way.
        let a = e
            .mk_rec(&[(
                "A".into(),
                TypeSpec::Or(
                    Box::new(TypeSpec::Prod(
                        Box::new(TypeSpec::Ref("A".into())),
                        Box::new(TypeSpec::Id(e.int())),
                    )),
                    Box::new(TypeSpec::Id(e.bool_ty())),
                ),
            )])
            .unwrap()["A"];
        assert!(!e.is_empty(a));
        // And the Bool part really is reachable: A ∧ Bool ≃ Bool.
        assert!(e.equiv(e.mk_and(a, e.bool_ty()), e.bool_ty()));
        // The product part is inhabited too (by (bool, int) pairs).
        assert!(!e.is_empty(e.mk_and(a, e.any_prod())));
    }

    #[test]
    fn constants_and_singletons() {
        let e = engine();
        assert!(e.subtype(e.lit_true(), e.bool_ty()));
        assert!(e.subtype(e.lit_int(42), e.mk_not(e.bool_ty())));
        let zero_or_one = e.mk_or(e.lit_int(0), e.lit_int(1));
        assert!(e.subtype(e.lit_int(0), zero_or_one));
        assert!(!e.subtype(e.int(), zero_or_one));
    }
}
