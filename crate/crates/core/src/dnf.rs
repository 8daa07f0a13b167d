//! Disjunctive normal form over type atoms.
//!
//! A [`Dnf`] is a union of summands, each an intersection of positive and
//! negated atoms, where an atom is a basic, product or arrow node. Top-level
//! unions and negations are pushed down to the atoms; recursion is *not*
//! unfolded below constructors, so the computation terminates on every
//! contractive type.

use std::collections::HashMap;
use std::rc::Rc;

use crate::basic::BasicSet;
use crate::types::{TypeEngine, TypeId, TypeNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomKind {
    Basic,
    Prod,
    Arrow,
}

/// One intersection of atoms: `⋀ pos ∧ ⋀ ¬neg`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Summand {
    pub pos: Vec<TypeId>,
    pub neg: Vec<TypeId>,
}

/// Union of summands, equivalent to the type it was computed from.
#[derive(Debug, Clone, Default)]
pub struct Dnf {
    pub summands: Vec<Summand>,
}

impl Summand {
    fn canonicalize(mut self) -> Option<Self> {
        self.pos.sort_unstable();
        self.pos.dedup();
        self.neg.sort_unstable();
        self.neg.dedup();
        // An atom on both sides makes the summand trivially empty.
        if self.pos.iter().any(|p| self.neg.binary_search(p).is_ok()) {
            return None;
        }
        Some(self)
    }

    fn merge(&self, other: &Summand) -> Option<Summand> {
        let mut s = self.clone();
        s.pos.extend(other.pos.iter().copied());
        s.neg.extend(other.neg.iter().copied());
        s.canonicalize()
    }

    /// Kinds that occur among the positive atoms.
    pub fn pos_kinds(&self, engine: &TypeEngine) -> Vec<AtomKind> {
        let mut kinds = Vec::new();
        for &a in &self.pos {
            let k = atom_kind(engine, a);
            if !kinds.contains(&k) {
                kinds.push(k);
            }
        }
        kinds
    }

    /// Positive atoms of two distinct kinds denote disjoint sets.
    pub fn is_mixed(&self, engine: &TypeEngine) -> bool {
        self.pos_kinds(engine).len() >= 2
    }

    pub fn pos_of(&self, engine: &TypeEngine, kind: AtomKind) -> Vec<TypeId> {
        self.pos
            .iter()
            .copied()
            .filter(|&a| atom_kind(engine, a) == kind)
            .collect()
    }

    pub fn neg_of(&self, engine: &TypeEngine, kind: AtomKind) -> Vec<TypeId> {
        self.neg
            .iter()
            .copied()
            .filter(|&a| atom_kind(engine, a) == kind)
            .collect()
    }

    /// The basic-kind constant set of this summand:
    /// `⋂ P_basic ∖ ⋃ N_basic`, with the full set for an empty intersection.
    pub fn basic_part(&self, engine: &TypeEngine) -> BasicSet {
        let mut acc = BasicSet::full();
        for &a in &self.pos {
            if let TypeNode::Basic(b) = engine.node(a) {
                acc = acc.intersect(&b);
            }
        }
        for &a in &self.neg {
            if let TypeNode::Basic(b) = engine.node(a) {
                acc = acc.difference(&b);
            }
        }
        acc
    }

    /// Rebuilds the summand as a type.
    pub fn to_type(&self, engine: &TypeEngine) -> TypeId {
        let mut t = engine.mk_and_all(&self.pos);
        for &n in &self.neg {
            t = engine.mk_and(t, engine.mk_not(n));
        }
        t
    }
}

impl Dnf {
    pub fn to_type(&self, engine: &TypeEngine) -> TypeId {
        let parts: Vec<TypeId> = self.summands.iter().map(|s| s.to_type(engine)).collect();
        engine.mk_or_all(&parts)
    }
}

pub fn atom_kind(engine: &TypeEngine, atom: TypeId) -> AtomKind {
    match engine.node(atom) {
        TypeNode::Basic(_) => AtomKind::Basic,
        TypeNode::Prod(..) => AtomKind::Prod,
        TypeNode::Arrow(..) => AtomKind::Arrow,
        other => panic!("not a DNF atom: {other:?}"),
    }
}

/// Children of a product or arrow atom.
pub fn atom_children(engine: &TypeEngine, atom: TypeId) -> (TypeId, TypeId) {
    match engine.node(atom) {
        TypeNode::Prod(a, b) | TypeNode::Arrow(a, b) => (a, b),
        other => panic!("not a constructor atom: {other:?}"),
    }
}

impl TypeEngine {
    /// DNF of a type, cached per id.
    pub fn dnf(&self, t: TypeId) -> Rc<Dnf> {
        if let Some(d) = self.dnf_cache.borrow().get(&t) {
            return Rc::clone(d);
        }
        let mut memo_pos = HashMap::new();
        let mut memo_neg = HashMap::new();
        let summands = dnf_pos(self, t, &mut memo_pos, &mut memo_neg);
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for s in summands {
            if !seen.contains(&s) {
                seen.push(s.clone());
                out.push(s);
            }
        }
        let d = Rc::new(Dnf { summands: out });
        self.dnf_cache.borrow_mut().insert(t, Rc::clone(&d));
        d
    }
}

type Memo = HashMap<TypeId, Vec<Summand>>;

fn dnf_pos(engine: &TypeEngine, t: TypeId, mp: &mut Memo, mn: &mut Memo) -> Vec<Summand> {
    if let Some(v) = mp.get(&t) {
        return v.clone();
    }
    let res = match engine.node(t) {
        TypeNode::Empty => Vec::new(),
        TypeNode::Basic(_) | TypeNode::Prod(..) | TypeNode::Arrow(..) => {
            vec![Summand {
                pos: vec![t],
                neg: Vec::new(),
            }]
        }
        TypeNode::Or(a, b) => {
            let mut v = dnf_pos(engine, a, mp, mn);
            v.extend(dnf_pos(engine, b, mp, mn));
            v
        }
        TypeNode::Not(a) => dnf_neg(engine, a, mp, mn),
        TypeNode::Dyn => panic!("gradual type reached the static DNF; take extrema first"),
    };
    mp.insert(t, res.clone());
    res
}

fn dnf_neg(engine: &TypeEngine, t: TypeId, mp: &mut Memo, mn: &mut Memo) -> Vec<Summand> {
    if let Some(v) = mn.get(&t) {
        return v.clone();
    }
    let res = match engine.node(t) {
        TypeNode::Empty => vec![Summand::default()],
        TypeNode::Basic(_) | TypeNode::Prod(..) | TypeNode::Arrow(..) => {
            vec![Summand {
                pos: Vec::new(),
                neg: vec![t],
            }]
        }
        TypeNode::Or(a, b) => {
            // ¬(a ∨ b) = ¬a ∧ ¬b: cross product of summands.
            let va = dnf_neg(engine, a, mp, mn);
            let vb = dnf_neg(engine, b, mp, mn);
            let mut out = Vec::new();
            for sa in &va {
                for sb in &vb {
                    if let Some(s) = sa.merge(sb) {
                        out.push(s);
                    }
                }
            }
            out
        }
        TypeNode::Not(a) => dnf_pos(engine, a, mp, mn),
        TypeNode::Dyn => panic!("gradual type reached the static DNF; take extrema first"),
    };
    mn.insert(t, res.clone());
    res
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dnf_of_empty_has_no_summands() {
        let e = TypeEngine::new();
        assert!(e.dnf(e.mk_empty()).summands.is_empty());
    }

    #[test]
    fn dnf_distributes_union_and_negation() {
        let e = TypeEngine::new();
        // Int ∨ (Bool ∧ ¬true)
        let t = e.mk_or(e.int(), e.mk_and(e.bool_ty(), e.mk_not(e.lit_true())));
        let d = e.dnf(t);
        assert_eq!(d.summands.len(), 2);
        let s0 = &d.summands[0];
        assert_eq!(s0.pos, vec![e.int()]);
        assert!(s0.neg.is_empty());
        let s1 = &d.summands[1];
        assert_eq!(s1.pos, vec![e.bool_ty()]);
        assert_eq!(s1.neg, vec![e.lit_true()]);
    }

    #[test]
    fn dnf_of_negated_product() {
        let e = TypeEngine::new();
        let p = e.mk_prod(e.int(), e.mk_any());
        let d = e.dnf(e.mk_not(p));
        assert_eq!(d.summands.len(), 1);
        assert!(d.summands[0].pos.is_empty());
        assert_eq!(d.summands[0].neg, vec![p]);
    }
}
