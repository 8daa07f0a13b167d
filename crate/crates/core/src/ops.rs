//! Analytic type operators for the elimination rules: `dom`, `∘` (apply) and
//! the projections.
//!
//! Each operator is characterized purely through subtyping —
//! `dom t = max { u | t ≤ u → Any }`, `t ∘ s = min { u | t ≤ s → u }`,
//! `πᵢ t = min { u | t ≤ u × Any }` (resp. `Any × u`) — and computed from the
//! DNF decomposition of the operand.

use thiserror::Error;

use crate::dnf::{atom_children, AtomKind, Summand};
use crate::types::{TypeEngine, TypeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OpError {
    #[error("not a function type")]
    NotAFunctionType,
    #[error("argument type outside the function domain")]
    ArgumentOutsideDomain,
    #[error("not a product type")]
    NotAProductType,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjSide {
    Fst,
    Snd,
}

impl ProjSide {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(ProjSide::Fst),
            2 => Some(ProjSide::Snd),
            _ => None,
        }
    }
}

impl TypeEngine {
    /// `t ≤ Empty → Any`: t denotes a set of functions.
    pub fn is_function_type(&self, t: TypeId) -> bool {
        self.subtype(t, self.any_arrow())
    }

    /// The non-empty summands of `dnf(t)`.
    fn live_summands(&self, t: TypeId) -> Vec<Summand> {
        self.dnf(t)
            .summands
            .iter()
            .filter(|s| !self.is_empty(s.to_type(self)))
            .cloned()
            .collect()
    }

    /// `dom t = max { u | t ≤ u → Any }`: the meet over the summands of the
    /// union of their positive arrow domains.
    pub fn dom(&self, t: TypeId) -> Result<TypeId, OpError> {
        if !self.is_function_type(t) {
            return Err(OpError::NotAFunctionType);
        }
        let mut acc = self.mk_any();
        for s in self.live_summands(t) {
            let doms: Vec<TypeId> = s
                .pos_of(self, AtomKind::Arrow)
                .iter()
                .map(|&a| atom_children(self, a).0)
                .collect();
            acc = self.mk_and(acc, self.mk_or_all(&doms));
        }
        Ok(acc)
    }

    /// `t ∘ s = min { u | t ≤ s → u }`.
    ///
    /// Per summand with positive arrows `P`, the result is the union over the
    /// subsets `Q ⊆ P` whose complement fails to cover the argument
    /// (`s ≰ ⋁_{i∈P∖Q} sᵢ`) of the codomain meets `⋀_{i∈Q} tᵢ`.
    pub fn apply(&self, t: TypeId, s: TypeId) -> Result<TypeId, OpError> {
        let dom = self.dom(t)?;
        if !self.subtype(s, dom) {
            return Err(OpError::ArgumentOutsideDomain);
        }
        let mut acc = self.mk_empty();
        for summand in self.live_summands(t) {
            let arrows: Vec<(TypeId, TypeId)> = summand
                .pos_of(self, AtomKind::Arrow)
                .iter()
                .map(|&a| atom_children(self, a))
                .collect();
            acc = self.mk_or(
                acc,
                self.apply_summand(s, &arrows, self.mk_any(), self.mk_empty()),
            );
        }
        Ok(acc)
    }

    /// `q_meet` accumulates `⋀_{i∈Q} tᵢ`, `rest_join` accumulates
    /// `⋁_{i∈P∖Q} sᵢ`. Branches are cut as soon as they can no longer
    /// contribute: a covered argument stays covered and an empty meet stays
    /// empty under any extension.
    fn apply_summand(
        &self,
        s: TypeId,
        arrows: &[(TypeId, TypeId)],
        q_meet: TypeId,
        rest_join: TypeId,
    ) -> TypeId {
        if self.subtype(s, rest_join) || self.is_empty(q_meet) {
            return self.mk_empty();
        }
        match arrows.split_first() {
            None => q_meet,
            Some((&(si, ti), rest)) => {
                let in_q = self.apply_summand(s, rest, self.mk_and(q_meet, ti), rest_join);
                let out_q = self.apply_summand(s, rest, q_meet, self.mk_or(rest_join, si));
                self.mk_or(in_q, out_q)
            }
        }
    }

    /// `πᵢ t = min { u | t ≤ u × Any }` (resp. `Any × u`).
    pub fn proj(&self, side: ProjSide, t: TypeId) -> Result<TypeId, OpError> {
        if !self.subtype(t, self.any_prod()) {
            return Err(OpError::NotAProductType);
        }
        let mut acc = self.mk_empty();
        for summand in self.live_summands(t) {
            let (ss, ts): (Vec<_>, Vec<_>) = summand
                .pos_of(self, AtomKind::Prod)
                .iter()
                .map(|&a| atom_children(self, a))
                .unzip();
            let negs: Vec<(TypeId, TypeId)> = summand
                .neg_of(self, AtomKind::Prod)
                .iter()
                .map(|&a| atom_children(self, a))
                .collect();
            acc = self.mk_or(
                acc,
                self.proj_summand(side, &negs, self.mk_and_all(&ss), self.mk_and_all(&ts)),
            );
        }
        Ok(acc)
    }

    /// A summand `(first × second) ∖ ⋃ N` splits into boxes: each negative
    /// product removes either from the first or from the second component.
    /// A box contributes its `side` component when the other side is
    /// inhabited.
    fn proj_summand(
        &self,
        side: ProjSide,
        negs: &[(TypeId, TypeId)],
        first: TypeId,
        second: TypeId,
    ) -> TypeId {
        if self.is_empty(first) || self.is_empty(second) {
            return self.mk_empty();
        }
        match negs.split_first() {
            None => match side {
                ProjSide::Fst => first,
                ProjSide::Snd => second,
            },
            Some((&(ns, nt), rest)) => {
                let a = self.proj_summand(side, rest, self.mk_diff(first, ns), second);
                let b = self.proj_summand(side, rest, first, self.mk_diff(second, nt));
                self.mk_or(a, b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_type_recognition() {
        let e = TypeEngine::new();
        let t = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        assert!(e.is_function_type(t));
        assert!(!e.is_function_type(e.mk_prod(e.int(), e.bool_ty())));
        assert!(e.is_function_type(e.mk_empty()));
    }

    #[test]
    fn dom_of_intersection_is_union_of_domains() {
        let e = TypeEngine::new();
        let t = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        let d = e.dom(t).unwrap();
        assert!(e.equiv(d, e.mk_or(e.int(), e.bool_ty())));
    }

    #[test]
    fn dom_of_union_is_intersection_of_domains() {
        let e = TypeEngine::new();
        let t = e.mk_or(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        let d = e.dom(t).unwrap();
        assert!(e.is_empty(d));
    }

    #[test]
    fn dom_of_top_function_type() {
        let e = TypeEngine::new();
        let d = e.dom(e.any_arrow()).unwrap();
        assert!(e.is_empty(d));
    }

    #[test]
    fn apply_selects_matching_arrows() {
        let e = TypeEngine::new();
        let t = e.mk_and(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.bool_ty(), e.bool_ty()),
        );
        let r = e.apply(t, e.int()).unwrap();
        assert!(e.equiv(r, e.int()));
        let r = e.apply(t, e.mk_or(e.int(), e.bool_ty())).unwrap();
        assert!(e.equiv(r, e.mk_or(e.int(), e.bool_ty())));
        assert_eq!(
            e.apply(t, e.string_ty()).unwrap_err(),
            OpError::ArgumentOutsideDomain
        );
    }

    #[test]
    fn apply_to_empty_argument() {
        let e = TypeEngine::new();
        let r = e.apply(e.mk_arrow(e.int(), e.int()), e.mk_empty()).unwrap();
        assert!(e.is_empty(r));
        // Minimality via the characterization: t ≤ Empty → Empty.
        assert!(e.subtype(
            e.mk_arrow(e.int(), e.int()),
            e.mk_arrow(e.mk_empty(), e.mk_empty())
        ));
    }

    #[test]
    fn proj_examples() {
        let e = TypeEngine::new();
        let p = e.mk_prod(e.int(), e.bool_ty());
        assert!(e.equiv(e.proj(ProjSide::Fst, p).unwrap(), e.int()));
        let u = e.mk_or(p, e.mk_prod(e.string_ty(), e.bool_ty()));
        assert!(e.equiv(
            e.proj(ProjSide::Fst, u).unwrap(),
            e.mk_or(e.int(), e.string_ty())
        ));
        // π₂((Int×Bool) ∧ ¬(Int×true)) ≃ false
        let t = e.mk_and(p, e.mk_not(e.mk_prod(e.int(), e.lit_true())));
        assert!(e.equiv(e.proj(ProjSide::Snd, t).unwrap(), e.lit_false()));
        assert_eq!(
            e.proj(ProjSide::Fst, e.int()).unwrap_err(),
            OpError::NotAProductType
        );
    }

    #[test]
    fn operator_characterizations() {
        let e = TypeEngine::new();
        let t = e.mk_and(
            e.mk_arrow(e.mk_or(e.int(), e.string_ty()), e.int()),
            e.mk_arrow(e.bool_ty(), e.mk_or(e.bool_ty(), e.string_ty())),
        );
        let d = e.dom(t).unwrap();
        assert!(e.subtype(t, e.mk_arrow(d, e.mk_any())));
        let s = e.mk_or(e.int(), e.bool_ty());
        let r = e.apply(t, s).unwrap();
        assert!(e.subtype(t, e.mk_arrow(s, r)));
    }
}
