//! Constants and the algebra of basic-type constant sets.
//!
//! A [`BasicSet`] describes a set of language constants, kept in a canonical
//! form so that two values are structurally equal exactly when they denote the
//! same set. The four constant kinds are pairwise disjoint:
//!
//! * integers — a finite union of disjoint, sorted, non-adjacent intervals
//!   (with unbounded ends),
//! * booleans — a subset of `{true, false}`,
//! * strings and atoms — finite or cofinite sets of literals.
//!
//! Complement, union and intersection are closed on this representation and
//! emptiness is immediate, which is what the emptiness check on whole types
//! needs from the basic kind.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

/// A language constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Int(BigInt),
    Bool(bool),
    Str(String),
    /// User-defined tag, written `` `A `` in the surface syntax.
    Atom(String),
}

impl Constant {
    pub fn int(n: i64) -> Self {
        Constant::Int(BigInt::from(n))
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(n) => write!(f, "{n}"),
            Constant::Bool(b) => write!(f, "{b}"),
            Constant::Str(s) => write!(f, "{s:?}"),
            Constant::Atom(a) => write!(f, "`{a}"),
        }
    }
}

/// An interval endpoint. `None` means unbounded on that side.
type Bound = Option<BigInt>;

/// A closed integer interval `lo..=hi`, either end possibly infinite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    fn contains(&self, n: &BigInt) -> bool {
        let lo_ok = self.lo.as_ref().map_or(true, |lo| lo <= n);
        let hi_ok = self.hi.as_ref().map_or(true, |hi| n <= hi);
        lo_ok && hi_ok
    }
}

/// Canonical finite union of integer intervals: sorted, disjoint and
/// non-adjacent (adjacent runs of integers are merged into one interval).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntSet(Vec<Interval>);

/// `lo <= hi` with `None` standing for -inf (lo) or +inf (hi).
fn lo_le_hi(lo: &Bound, hi: &Bound) -> bool {
    match (lo, hi) {
        (None, _) | (_, None) => true,
        (Some(a), Some(b)) => a <= b,
    }
}

impl IntSet {
    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    pub fn full() -> Self {
        IntSet(vec![Interval { lo: None, hi: None }])
    }

    pub fn singleton(n: BigInt) -> Self {
        IntSet(vec![Interval {
            lo: Some(n.clone()),
            hi: Some(n),
        }])
    }

    /// Builds the interval `lo..=hi`; an empty set when `lo > hi`.
    pub fn interval(lo: Bound, hi: Bound) -> Self {
        if lo_le_hi(&lo, &hi) {
            IntSet(vec![Interval { lo, hi }])
        } else {
            IntSet::empty()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        self.0.iter().any(|iv| iv.contains(n))
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    /// Normalizes a list of intervals: sort, then merge overlapping or
    /// adjacent runs (`[1,2]` and `[3,5]` become `[1,5]`).
    fn normalize(mut ivs: Vec<Interval>) -> Self {
        ivs.retain(|iv| lo_le_hi(&iv.lo, &iv.hi));
        ivs.sort_by(|a, b| match (&a.lo, &b.lo) {
            (None, None) => std::cmp::Ordering::Equal,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (Some(_), None) => std::cmp::Ordering::Greater,
            (Some(x), Some(y)) => x.cmp(y),
        });
        let mut out: Vec<Interval> = Vec::new();
        for iv in ivs {
            if let Some(last) = out.last_mut() {
                // Merge if `iv.lo <= last.hi + 1`.
                let touches = match (&last.hi, &iv.lo) {
                    (None, _) => true,
                    (_, None) => true, // sorted, so last.lo is also None: overlap
                    (Some(h), Some(l)) => *l <= h + BigInt::one(),
                };
                if touches {
                    let extend = match (&last.hi, &iv.hi) {
                        (None, _) => false,
                        (_, None) => true,
                        (Some(a), Some(b)) => b > a,
                    };
                    if extend {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntSet(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut ivs = self.0.clone();
        ivs.extend(other.0.iter().cloned());
        Self::normalize(ivs)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::new();
        let mut lo: Bound = None;
        let mut open_left = true; // current gap starts at -inf
        for iv in &self.0 {
            match &iv.lo {
                None => {}
                Some(l) => {
                    let hi = Some(l - BigInt::one());
                    if open_left || lo_le_hi(&lo, &hi) {
                        out.push(Interval {
                            lo: lo.clone(),
                            hi,
                        });
                    }
                }
            }
            match &iv.hi {
                None => return IntSet(out), // set extends to +inf: no trailing gap
                Some(h) => {
                    lo = Some(h + BigInt::one());
                    open_left = false;
                }
            }
        }
        out.push(Interval { lo, hi: None });
        IntSet(out)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        // De Morgan keeps the normalization logic in one place.
        self.complement().union(&other.complement()).complement()
    }

    /// Some element of the set, if any.
    pub fn sample(&self) -> Option<BigInt> {
        self.0.first().map(|iv| match (&iv.lo, &iv.hi) {
            (Some(l), _) => l.clone(),
            (None, Some(h)) => h.clone(),
            (None, None) => BigInt::from(0),
        })
    }
}

/// Subset of `{true, false}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BoolSet {
    pub has_true: bool,
    pub has_false: bool,
}

impl BoolSet {
    pub fn empty() -> Self {
        BoolSet {
            has_true: false,
            has_false: false,
        }
    }

    pub fn full() -> Self {
        BoolSet {
            has_true: true,
            has_false: true,
        }
    }

    pub fn singleton(b: bool) -> Self {
        BoolSet {
            has_true: b,
            has_false: !b,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.has_true && !self.has_false
    }

    pub fn contains(&self, b: bool) -> bool {
        if b {
            self.has_true
        } else {
            self.has_false
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        BoolSet {
            has_true: self.has_true || o.has_true,
            has_false: self.has_false || o.has_false,
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        BoolSet {
            has_true: self.has_true && o.has_true,
            has_false: self.has_false && o.has_false,
        }
    }

    pub fn complement(&self) -> Self {
        BoolSet {
            has_true: !self.has_true,
            has_false: !self.has_false,
        }
    }
}

/// Finite or cofinite set of literals over a countably infinite universe.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FinCof {
    Fin(BTreeSet<String>),
    /// All literals except the listed ones.
    Cof(BTreeSet<String>),
}

impl Default for FinCof {
    fn default() -> Self {
        FinCof::Fin(BTreeSet::new())
    }
}

impl FinCof {
    pub fn empty() -> Self {
        FinCof::Fin(BTreeSet::new())
    }

    pub fn full() -> Self {
        FinCof::Cof(BTreeSet::new())
    }

    pub fn singleton(s: String) -> Self {
        FinCof::Fin(std::iter::once(s).collect())
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FinCof::Fin(s) if s.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, FinCof::Cof(s) if s.is_empty())
    }

    pub fn contains(&self, x: &str) -> bool {
        match self {
            FinCof::Fin(s) => s.contains(x),
            FinCof::Cof(s) => !s.contains(x),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            FinCof::Fin(s) => FinCof::Cof(s.clone()),
            FinCof::Cof(s) => FinCof::Fin(s.clone()),
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        match (self, o) {
            (FinCof::Fin(a), FinCof::Fin(b)) => FinCof::Fin(a.union(b).cloned().collect()),
            (FinCof::Cof(a), FinCof::Cof(b)) => {
                FinCof::Cof(a.intersection(b).cloned().collect())
            }
            (FinCof::Fin(f), FinCof::Cof(c)) | (FinCof::Cof(c), FinCof::Fin(f)) => {
                FinCof::Cof(c.difference(f).cloned().collect())
            }
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        self.complement().union(&o.complement()).complement()
    }

    /// Some element of the set, if any. For cofinite sets, picks a fresh
    /// literal outside the exclusion list.
    pub fn sample(&self) -> Option<String> {
        match self {
            FinCof::Fin(s) => s.iter().next().cloned(),
            FinCof::Cof(s) => {
                let mut i = 0usize;
                loop {
                    let cand = format!("fresh{i}");
                    if !s.contains(&cand) {
                        return Some(cand);
                    }
                    i += 1;
                }
            }
        }
    }
}

/// A set of constants, one component per kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BasicSet {
    pub ints: IntSet,
    pub bools: BoolSet,
    pub strings: FinCof,
    pub atoms: FinCof,
}

impl BasicSet {
    pub fn empty() -> Self {
        BasicSet::default()
    }

    pub fn full() -> Self {
        BasicSet {
            ints: IntSet::full(),
            bools: BoolSet::full(),
            strings: FinCof::full(),
            atoms: FinCof::full(),
        }
    }

    pub fn all_ints() -> Self {
        BasicSet {
            ints: IntSet::full(),
            ..Default::default()
        }
    }

    pub fn all_bools() -> Self {
        BasicSet {
            bools: BoolSet::full(),
            ..Default::default()
        }
    }

    pub fn all_strings() -> Self {
        BasicSet {
            strings: FinCof::full(),
            ..Default::default()
        }
    }

    pub fn all_atoms() -> Self {
        BasicSet {
            atoms: FinCof::full(),
            ..Default::default()
        }
    }

    pub fn int_interval(lo: Bound, hi: Bound) -> Self {
        BasicSet {
            ints: IntSet::interval(lo, hi),
            ..Default::default()
        }
    }

    /// The singleton set `{c}`, i.e. the constant set of the basic type `b_c`.
    pub fn singleton(c: &Constant) -> Self {
        match c {
            Constant::Int(n) => BasicSet {
                ints: IntSet::singleton(n.clone()),
                ..Default::default()
            },
            Constant::Bool(b) => BasicSet {
                bools: BoolSet::singleton(*b),
                ..Default::default()
            },
            Constant::Str(s) => BasicSet {
                strings: FinCof::singleton(s.clone()),
                ..Default::default()
            },
            Constant::Atom(a) => BasicSet {
                atoms: FinCof::singleton(a.clone()),
                ..Default::default()
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.ints.is_empty()
            && self.bools.is_empty()
            && self.strings.is_empty()
            && self.atoms.is_empty()
    }

    pub fn is_full(&self) -> bool {
        *self == BasicSet::full()
    }

    pub fn contains(&self, c: &Constant) -> bool {
        match c {
            Constant::Int(n) => self.ints.contains(n),
            Constant::Bool(b) => self.bools.contains(*b),
            Constant::Str(s) => self.strings.contains(s),
            Constant::Atom(a) => self.atoms.contains(a),
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        BasicSet {
            ints: self.ints.union(&o.ints),
            bools: self.bools.union(&o.bools),
            strings: self.strings.union(&o.strings),
            atoms: self.atoms.union(&o.atoms),
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        BasicSet {
            ints: self.ints.intersect(&o.ints),
            bools: self.bools.intersect(&o.bools),
            strings: self.strings.intersect(&o.strings),
            atoms: self.atoms.intersect(&o.atoms),
        }
    }

    pub fn complement(&self) -> Self {
        BasicSet {
            ints: self.ints.complement(),
            bools: self.bools.complement(),
            strings: self.strings.complement(),
            atoms: self.atoms.complement(),
        }
    }

    pub fn difference(&self, o: &Self) -> Self {
        self.intersect(&o.complement())
    }

    /// Some constant of the set, if any.
    pub fn sample(&self) -> Option<Constant> {
        if let Some(n) = self.ints.sample() {
            return Some(Constant::Int(n));
        }
        if self.bools.has_true {
            return Some(Constant::Bool(true));
        }
        if self.bools.has_false {
            return Some(Constant::Bool(false));
        }
        if let Some(s) = self.strings.sample() {
            return Some(Constant::Str(s));
        }
        self.atoms.sample().map(Constant::Atom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: i64, hi: i64) -> IntSet {
        IntSet::interval(Some(BigInt::from(lo)), Some(BigInt::from(hi)))
    }

    #[test]
    fn interval_merge_adjacent() {
        let a = iv(1, 2).union(&iv(3, 5));
        assert_eq!(a, iv(1, 5));
    }

    #[test]
    fn interval_complement_roundtrip() {
        let a = iv(1, 2).union(&iv(10, 20));
        assert_eq!(a.complement().complement(), a);
        assert!(a.intersect(&a.complement()).is_empty());
    }

    #[test]
    fn complement_of_unbounded() {
        let a = IntSet::interval(None, Some(BigInt::from(5)));
        let c = a.complement();
        assert!(c.contains(&BigInt::from(6)));
        assert!(!c.contains(&BigInt::from(5)));
        assert_eq!(c.complement(), a);
    }

    #[test]
    fn fincof_laws() {
        let a = FinCof::singleton("x".into());
        let b = FinCof::singleton("y".into()).union(&a);
        assert!(b.contains("x") && b.contains("y"));
        let c = b.complement();
        assert!(!c.contains("x"));
        assert!(c.contains("z"));
        assert_eq!(c.complement(), b);
        assert!(b.intersect(&c).is_empty());
    }

    #[test]
    fn singleton_basic_types() {
        let t = BasicSet::singleton(&Constant::Bool(true));
        assert!(t.contains(&Constant::Bool(true)));
        assert!(!t.contains(&Constant::Bool(false)));
        // true is a subtype of Bool: t ∩ ¬Bool = ∅
        assert!(t.intersect(&BasicSet::all_bools().complement()).is_empty());
        // kinds are disjoint
        assert!(BasicSet::all_ints()
            .intersect(&BasicSet::all_bools())
            .is_empty());
    }

    #[test]
    fn canonical_equality() {
        let a = iv(1, 3).union(&iv(2, 7));
        let b = iv(1, 7);
        assert_eq!(a, b);
    }
}
