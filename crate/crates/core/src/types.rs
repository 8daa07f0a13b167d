//! Interned, regular, contractive set-theoretic types.
//!
//! Types are nodes in an engine-owned table; recursion is represented by
//! back-edges, so every type is a regular tree. Structurally identical
//! constructor applications share one [`TypeId`] (hash-consing). Recursive
//! definitions go through [`TypeEngine::mk_rec`], which checks contractivity
//! (every cycle must cross a product or arrow constructor), minimizes the
//! equation graph up to bisimulation and installs the cyclic core through a
//! canonical registry, so building the same regular tree twice yields the
//! same id.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use crate::basic::{BasicSet, Constant};

/// Opaque handle into a [`TypeEngine`]'s node table. Only meaningful together
/// with the engine that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub(crate) u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One node of a type. Children are ids in the same engine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeNode {
    Empty,
    /// The dynamic type `?`. Never produced by the static constructors; it
    /// only enters through gradual-type parsing or [`TypeEngine::mk_dyn`].
    Dyn,
    Basic(BasicSet),
    Prod(TypeId, TypeId),
    Arrow(TypeId, TypeId),
    Or(TypeId, TypeId),
    Not(TypeId),
}

/// Specification tree for [`TypeEngine::mk_rec`]: a type expression that may
/// reference equation names and embed already-built types.
#[derive(Debug, Clone)]
pub enum TypeSpec {
    Ref(String),
    Id(TypeId),
    Empty,
    Any,
    Dyn,
    Basic(BasicSet),
    Prod(Box<TypeSpec>, Box<TypeSpec>),
    Arrow(Box<TypeSpec>, Box<TypeSpec>),
    Or(Box<TypeSpec>, Box<TypeSpec>),
    And(Box<TypeSpec>, Box<TypeSpec>),
    Diff(Box<TypeSpec>, Box<TypeSpec>),
    Not(Box<TypeSpec>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecError {
    /// A cycle in the equations passes only through type connectives.
    #[error("contractivity violation: a recursive cycle passes through no product or arrow constructor")]
    ContractivityViolation,
    #[error("unknown type name `{0}`")]
    UnknownName(String),
}

/// Internal graph node used while building recursive types and extrema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Scratch {
    Empty,
    Dyn,
    Basic(BasicSet),
    Ext(TypeId),
    Prod(usize, usize),
    Arrow(usize, usize),
    Or(usize, usize),
    Not(usize),
    /// Placeholder for an equation slot before its right-hand side is built,
    /// or a name alias (`X = Y`).
    Alias(usize),
    Pending,
}

struct EngineInner {
    nodes: Vec<TypeNode>,
    intern: HashMap<TypeNode, TypeId>,
    /// Canonical registry for cyclic cores, keyed by a serialized
    /// bisimulation-minimal unfolding.
    rec_registry: HashMap<String, TypeId>,
    contains_dyn: HashMap<TypeId, bool>,
}

/// Construction, interning and normalization of types. Immutable after
/// interning; internal mutability is only used to grow the tables, so an
/// engine is meant to be used by one unit of execution at a time.
pub struct TypeEngine {
    inner: RefCell<EngineInner>,
    pub(crate) dnf_cache: RefCell<HashMap<TypeId, std::rc::Rc<crate::dnf::Dnf>>>,
    pub(crate) empty_settled: RefCell<HashMap<TypeId, bool>>,
    pub(crate) extrema_cache: RefCell<HashMap<(TypeId, bool), TypeId>>,
}

impl Default for TypeEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl TypeEngine {
    pub fn new() -> Self {
        TypeEngine {
            inner: RefCell::new(EngineInner {
                nodes: Vec::new(),
                intern: HashMap::new(),
                rec_registry: HashMap::new(),
                contains_dyn: HashMap::new(),
            }),
            dnf_cache: RefCell::new(HashMap::new()),
            empty_settled: RefCell::new(HashMap::new()),
            extrema_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn node(&self, id: TypeId) -> TypeNode {
        self.inner.borrow().nodes[id.index()].clone()
    }

    pub fn node_count(&self) -> usize {
        self.inner.borrow().nodes.len()
    }

    fn intern(&self, node: TypeNode) -> TypeId {
        let mut inner = self.inner.borrow_mut();
        if let Some(&id) = inner.intern.get(&node) {
            return id;
        }
        let id = TypeId(inner.nodes.len() as u32);
        inner.nodes.push(node.clone());
        inner.intern.insert(node, id);
        id
    }

    pub fn mk_empty(&self) -> TypeId {
        self.intern(TypeNode::Empty)
    }

    /// `Any` is the abbreviation `¬Empty`.
    pub fn mk_any(&self) -> TypeId {
        self.mk_not(self.mk_empty())
    }

    pub fn mk_dyn(&self) -> TypeId {
        self.intern(TypeNode::Dyn)
    }

    pub fn mk_basic(&self, set: BasicSet) -> TypeId {
        if set.is_empty() {
            return self.mk_empty();
        }
        self.intern(TypeNode::Basic(set))
    }

    pub fn mk_prod(&self, a: TypeId, b: TypeId) -> TypeId {
        self.intern(TypeNode::Prod(a, b))
    }

    pub fn mk_arrow(&self, a: TypeId, b: TypeId) -> TypeId {
        self.intern(TypeNode::Arrow(a, b))
    }

    pub fn mk_or(&self, a: TypeId, b: TypeId) -> TypeId {
        self.intern(TypeNode::Or(a, b))
    }

    /// Negation; double negations collapse.
    pub fn mk_not(&self, a: TypeId) -> TypeId {
        if let TypeNode::Not(inner) = self.inner.borrow().nodes[a.index()] {
            return inner;
        }
        self.intern(TypeNode::Not(a))
    }

    /// `t1 ∧ t2` is the abbreviation `¬(¬t1 ∨ ¬t2)`.
    pub fn mk_and(&self, a: TypeId, b: TypeId) -> TypeId {
        self.mk_not(self.mk_or(self.mk_not(a), self.mk_not(b)))
    }

    /// `t1 \ t2` is the abbreviation `t1 ∧ ¬t2`.
    pub fn mk_diff(&self, a: TypeId, b: TypeId) -> TypeId {
        self.mk_and(a, self.mk_not(b))
    }

    pub fn mk_or_all(&self, ts: &[TypeId]) -> TypeId {
        match ts.split_first() {
            None => self.mk_empty(),
            Some((&h, rest)) => rest.iter().fold(h, |acc, &t| self.mk_or(acc, t)),
        }
    }

    pub fn mk_and_all(&self, ts: &[TypeId]) -> TypeId {
        match ts.split_first() {
            None => self.mk_any(),
            Some((&h, rest)) => rest.iter().fold(h, |acc, &t| self.mk_and(acc, t)),
        }
    }

    /// The singleton basic type `b_c` of a constant.
    pub fn const_basic(&self, c: &Constant) -> TypeId {
        self.mk_basic(BasicSet::singleton(c))
    }

    pub fn int(&self) -> TypeId {
        self.mk_basic(BasicSet::all_ints())
    }

    pub fn bool_ty(&self) -> TypeId {
        self.mk_basic(BasicSet::all_bools())
    }

    pub fn string_ty(&self) -> TypeId {
        self.mk_basic(BasicSet::all_strings())
    }

    pub fn atom_ty(&self) -> TypeId {
        self.mk_basic(BasicSet::all_atoms())
    }

    pub fn lit_true(&self) -> TypeId {
        self.const_basic(&Constant::Bool(true))
    }

    pub fn lit_false(&self) -> TypeId {
        self.const_basic(&Constant::Bool(false))
    }

    pub fn lit_int(&self, n: i64) -> TypeId {
        self.const_basic(&Constant::int(n))
    }

    /// The type of all functions, `Empty -> Any`.
    pub fn any_arrow(&self) -> TypeId {
        self.mk_arrow(self.mk_empty(), self.mk_any())
    }

    /// The type of all pairs, `(Any, Any)`.
    pub fn any_prod(&self) -> TypeId {
        self.mk_prod(self.mk_any(), self.mk_any())
    }

    /// Does `?` occur anywhere in the type?
    pub fn contains_dyn(&self, t: TypeId) -> bool {
        if let Some(&b) = self.inner.borrow().contains_dyn.get(&t) {
            return b;
        }
        let mut seen = HashSet::new();
        let mut stack = vec![t];
        let mut found = false;
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            match self.node(id) {
                TypeNode::Dyn => {
                    found = true;
                    break;
                }
                TypeNode::Empty | TypeNode::Basic(_) => {}
                TypeNode::Prod(a, b) | TypeNode::Arrow(a, b) | TypeNode::Or(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                TypeNode::Not(a) => stack.push(a),
            }
        }
        self.inner.borrow_mut().contains_dyn.insert(t, found);
        found
    }

    /// Solves a system of possibly mutually recursive equations and returns
    /// the id of each name. Every cycle must pass through a product or arrow
    /// constructor.
    pub fn mk_rec(
        &self,
        equations: &[(String, TypeSpec)],
    ) -> Result<BTreeMap<String, TypeId>, RecError> {
        let mut nodes: Vec<Scratch> = Vec::new();
        let mut slots: HashMap<&str, usize> = HashMap::new();
        for (name, _) in equations {
            let idx = nodes.len();
            nodes.push(Scratch::Pending);
            slots.insert(name.as_str(), idx);
        }
        for (name, spec) in equations {
            let target = slots[name.as_str()];
            let built = build_spec(self, spec, &slots, &mut nodes)?;
            if built == target {
                // `X = X` without any constructor in between.
                return Err(RecError::ContractivityViolation);
            }
            nodes[target] = Scratch::Alias(built);
        }
        resolve_aliases(&mut nodes)?;
        check_contractive(&nodes)?;
        let roots: Vec<usize> = equations
            .iter()
            .map(|(n, _)| resolve(&nodes, slots[n.as_str()]))
            .collect();
        let ids = self.install_graph(&nodes, &roots);
        Ok(equations
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.clone(), ids[i]))
            .collect())
    }

    /// Installs a scratch graph into the engine, returning the id of each
    /// requested root. Acyclic parts go through the ordinary constructors;
    /// cyclic cores are minimized up to bisimulation and looked up in the
    /// canonical registry so identical regular trees share ids.
    pub(crate) fn install_graph(&self, nodes: &[Scratch], roots: &[usize]) -> Vec<TypeId> {
        let (nodes, roots) = compact(nodes, roots);
        let (nodes, roots) = (&nodes[..], &roots[..]);
        let quotient = minimize(nodes);
        let sccs = condensation(&quotient.nodes);
        let mut mat: HashMap<usize, TypeId> = HashMap::new();
        for scc in &sccs {
            self.install_scc(&quotient.nodes, scc, &mut mat);
        }
        roots
            .iter()
            .map(|&r| mat[&quotient.class_of[r]])
            .collect()
    }

    fn install_scc(&self, nodes: &[Scratch], scc: &[usize], mat: &mut HashMap<usize, TypeId>) {
        let cyclic = scc.len() > 1 || has_self_edge(nodes, scc[0]);
        if !cyclic {
            let n = scc[0];
            let id = match &nodes[n] {
                Scratch::Empty => self.mk_empty(),
                Scratch::Dyn => self.mk_dyn(),
                Scratch::Basic(b) => self.mk_basic(b.clone()),
                Scratch::Ext(t) => *t,
                Scratch::Prod(a, b) => self.mk_prod(mat[a], mat[b]),
                Scratch::Arrow(a, b) => self.mk_arrow(mat[a], mat[b]),
                Scratch::Or(a, b) => self.mk_or(mat[a], mat[b]),
                Scratch::Not(a) => self.mk_not(mat[a]),
                Scratch::Alias(_) | Scratch::Pending => unreachable!("resolved earlier"),
            };
            mat.insert(n, id);
            return;
        }
        let scc_set: HashSet<usize> = scc.iter().copied().collect();
        let keys: Vec<String> = scc
            .iter()
            .map(|&n| cycle_key(nodes, n, &scc_set, mat))
            .collect();
        {
            let inner = self.inner.borrow();
            if keys.iter().all(|k| inner.rec_registry.contains_key(k)) {
                let found: Vec<TypeId> = keys.iter().map(|k| inner.rec_registry[k]).collect();
                drop(inner);
                for (&n, id) in scc.iter().zip(found) {
                    mat.insert(n, id);
                }
                return;
            }
        }
        // Reserve a slot per node, then patch.
        {
            let mut inner = self.inner.borrow_mut();
            for &n in scc {
                let id = TypeId(inner.nodes.len() as u32);
                inner.nodes.push(TypeNode::Empty); // placeholder
                mat.insert(n, id);
            }
        }
        for &n in scc {
            let node = match &nodes[n] {
                Scratch::Prod(a, b) => TypeNode::Prod(mat[a], mat[b]),
                Scratch::Arrow(a, b) => TypeNode::Arrow(mat[a], mat[b]),
                Scratch::Or(a, b) => TypeNode::Or(mat[a], mat[b]),
                Scratch::Not(a) => TypeNode::Not(mat[a]),
                other => unreachable!("leaf {other:?} cannot be cyclic"),
            };
            let mut inner = self.inner.borrow_mut();
            let id = mat[&n];
            inner.nodes[id.index()] = node.clone();
            inner.intern.entry(node).or_insert(id);
        }
        let mut inner = self.inner.borrow_mut();
        for (&n, key) in scc.iter().zip(keys) {
            inner.rec_registry.insert(key, mat[&n]);
        }
    }
}

fn build_spec(
    engine: &TypeEngine,
    spec: &TypeSpec,
    slots: &HashMap<&str, usize>,
    nodes: &mut Vec<Scratch>,
) -> Result<usize, RecError> {
    let push = |nodes: &mut Vec<Scratch>, s: Scratch| {
        nodes.push(s);
        nodes.len() - 1
    };
    Ok(match spec {
        TypeSpec::Ref(name) => *slots
            .get(name.as_str())
            .ok_or_else(|| RecError::UnknownName(name.clone()))?,
        TypeSpec::Id(t) => push(nodes, Scratch::Ext(*t)),
        TypeSpec::Empty => push(nodes, Scratch::Empty),
        TypeSpec::Any => {
            let e = push(nodes, Scratch::Empty);
            push(nodes, Scratch::Not(e))
        }
        TypeSpec::Dyn => push(nodes, Scratch::Dyn),
        TypeSpec::Basic(b) => push(nodes, Scratch::Basic(b.clone())),
        TypeSpec::Prod(a, b) => {
            let a = build_spec(engine, a, slots, nodes)?;
            let b = build_spec(engine, b, slots, nodes)?;
            push(nodes, Scratch::Prod(a, b))
        }
        TypeSpec::Arrow(a, b) => {
            let a = build_spec(engine, a, slots, nodes)?;
            let b = build_spec(engine, b, slots, nodes)?;
            push(nodes, Scratch::Arrow(a, b))
        }
        TypeSpec::Or(a, b) => {
            let a = build_spec(engine, a, slots, nodes)?;
            let b = build_spec(engine, b, slots, nodes)?;
            push(nodes, Scratch::Or(a, b))
        }
        TypeSpec::And(a, b) => {
            // ¬(¬a ∨ ¬b)
            let a = build_spec(engine, a, slots, nodes)?;
            let b = build_spec(engine, b, slots, nodes)?;
            let na = push(nodes, Scratch::Not(a));
            let nb = push(nodes, Scratch::Not(b));
            let or = push(nodes, Scratch::Or(na, nb));
            push(nodes, Scratch::Not(or))
        }
        TypeSpec::Diff(a, b) => {
            // a ∧ ¬b = ¬(¬a ∨ b)
            let a = build_spec(engine, a, slots, nodes)?;
            let b = build_spec(engine, b, slots, nodes)?;
            let na = push(nodes, Scratch::Not(a));
            let or = push(nodes, Scratch::Or(na, b));
            push(nodes, Scratch::Not(or))
        }
        TypeSpec::Not(a) => {
            let a = build_spec(engine, a, slots, nodes)?;
            push(nodes, Scratch::Not(a))
        }
    })
}

fn resolve(nodes: &[Scratch], mut i: usize) -> usize {
    while let Scratch::Alias(j) = nodes[i] {
        i = j;
    }
    i
}

fn resolve_aliases(nodes: &mut Vec<Scratch>) -> Result<(), RecError> {
    // Detect alias cycles (`X = Y`, `Y = X`).
    for start in 0..nodes.len() {
        let mut slow = start;
        let mut steps = 0usize;
        while let Scratch::Alias(j) = nodes[slow] {
            slow = j;
            steps += 1;
            if steps > nodes.len() {
                return Err(RecError::ContractivityViolation);
            }
        }
    }
    for i in 0..nodes.len() {
        let resolved = match nodes[i].clone() {
            Scratch::Prod(a, b) => Scratch::Prod(resolve(nodes, a), resolve(nodes, b)),
            Scratch::Arrow(a, b) => Scratch::Arrow(resolve(nodes, a), resolve(nodes, b)),
            Scratch::Or(a, b) => Scratch::Or(resolve(nodes, a), resolve(nodes, b)),
            Scratch::Not(a) => Scratch::Not(resolve(nodes, a)),
            other => other,
        };
        nodes[i] = resolved;
    }
    Ok(())
}

/// Every cycle must pass through a `Prod` or `Arrow` node, i.e. the subgraph
/// of connective edges (children of `Or` and `Not`) is acyclic.
fn check_contractive(nodes: &[Scratch]) -> Result<(), RecError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Grey,
        Black,
    }
    fn connective_children(n: &Scratch) -> Vec<usize> {
        match n {
            Scratch::Or(a, b) => vec![*a, *b],
            Scratch::Not(a) => vec![*a],
            _ => Vec::new(),
        }
    }
    let mut marks = vec![Mark::White; nodes.len()];
    fn visit(i: usize, nodes: &[Scratch], marks: &mut [Mark]) -> Result<(), RecError> {
        match marks[i] {
            Mark::Black => return Ok(()),
            Mark::Grey => return Err(RecError::ContractivityViolation),
            Mark::White => {}
        }
        marks[i] = Mark::Grey;
        for c in connective_children(&nodes[i]) {
            visit(c, nodes, marks)?;
        }
        marks[i] = Mark::Black;
        Ok(())
    }
    for i in 0..nodes.len() {
        if marks[i] == Mark::White {
            visit(i, nodes, &mut marks)?;
        }
    }
    Ok(())
}

/// Restricts the graph to the nodes reachable from `roots`, dropping spent
/// alias slots and placeholders.
fn compact(nodes: &[Scratch], roots: &[usize]) -> (Vec<Scratch>, Vec<usize>) {
    let mut map: HashMap<usize, usize> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    let mut stack: Vec<usize> = roots.to_vec();
    while let Some(i) = stack.pop() {
        if map.contains_key(&i) {
            continue;
        }
        map.insert(i, 0);
        order.push(i);
        stack.extend(children(&nodes[i]));
    }
    order.sort_unstable();
    for (new, &old) in order.iter().enumerate() {
        map.insert(old, new);
    }
    let remap = |n: &Scratch| match n {
        Scratch::Prod(a, b) => Scratch::Prod(map[a], map[b]),
        Scratch::Arrow(a, b) => Scratch::Arrow(map[a], map[b]),
        Scratch::Or(a, b) => Scratch::Or(map[a], map[b]),
        Scratch::Not(a) => Scratch::Not(map[a]),
        other => other.clone(),
    };
    (
        order.iter().map(|&old| remap(&nodes[old])).collect(),
        roots.iter().map(|&r| map[&r]).collect(),
    )
}

fn children(n: &Scratch) -> Vec<usize> {
    match n {
        Scratch::Prod(a, b) | Scratch::Arrow(a, b) | Scratch::Or(a, b) => vec![*a, *b],
        Scratch::Not(a) => vec![*a],
        _ => Vec::new(),
    }
}

struct Quotient {
    nodes: Vec<Scratch>,
    class_of: Vec<usize>,
}

/// Partition refinement: merge bisimilar nodes (same label, children in the
/// same classes) and rebuild the quotient graph.
fn minimize(nodes: &[Scratch]) -> Quotient {
    let label = |n: &Scratch| -> String {
        match n {
            Scratch::Empty => "E".into(),
            Scratch::Dyn => "D".into(),
            Scratch::Basic(b) => format!("B{b:?}"),
            Scratch::Ext(t) => format!("X{}", t.0),
            Scratch::Prod(..) => "P".into(),
            Scratch::Arrow(..) => "A".into(),
            Scratch::Or(..) => "O".into(),
            Scratch::Not(..) => "N".into(),
            Scratch::Alias(_) | Scratch::Pending => unreachable!(),
        }
    };
    let mut class: Vec<usize> = {
        let mut by_label: HashMap<String, usize> = HashMap::new();
        nodes
            .iter()
            .map(|n| {
                let next = by_label.len();
                *by_label.entry(label(n)).or_insert(next)
            })
            .collect()
    };
    loop {
        let mut sig_to_class: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            let sig = (class[i], children(n).iter().map(|&c| class[c]).collect());
            let fresh = sig_to_class.len();
            next.push(*sig_to_class.entry(sig).or_insert(fresh));
        }
        if next == class {
            break;
        }
        class = next;
    }
    // One representative node per class, child pointers mapped to classes.
    let n_classes = class.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep: Vec<Option<Scratch>> = vec![None; n_classes];
    for (i, n) in nodes.iter().enumerate() {
        if rep[class[i]].is_none() {
            let mapped = match n {
                Scratch::Prod(a, b) => Scratch::Prod(class[*a], class[*b]),
                Scratch::Arrow(a, b) => Scratch::Arrow(class[*a], class[*b]),
                Scratch::Or(a, b) => Scratch::Or(class[*a], class[*b]),
                Scratch::Not(a) => Scratch::Not(class[*a]),
                other => other.clone(),
            };
            rep[class[i]] = Some(mapped);
        }
    }
    Quotient {
        nodes: rep.into_iter().map(Option::unwrap).collect(),
        class_of: class,
    }
}

fn has_self_edge(nodes: &[Scratch], n: usize) -> bool {
    children(&nodes[n]).contains(&n)
}

/// Tarjan's SCC, returning components in dependency order (children first).
fn condensation(nodes: &[Scratch]) -> Vec<Vec<usize>> {
    struct State {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        counter: usize,
        out: Vec<Vec<usize>>,
    }
    fn strong(v: usize, nodes: &[Scratch], st: &mut State) {
        st.index[v] = Some(st.counter);
        st.low[v] = st.counter;
        st.counter += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for w in children(&nodes[v]) {
            if st.index[w].is_none() {
                strong(w, nodes, st);
                st.low[v] = st.low[v].min(st.low[w]);
            } else if st.on_stack[w] {
                st.low[v] = st.low[v].min(st.index[w].unwrap());
            }
        }
        if st.low[v] == st.index[v].unwrap() {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().unwrap();
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }
    let mut st = State {
        index: vec![None; nodes.len()],
        low: vec![0; nodes.len()],
        on_stack: vec![false; nodes.len()],
        stack: Vec::new(),
        counter: 0,
        out: Vec::new(),
    };
    for v in 0..nodes.len() {
        if st.index[v].is_none() {
            strong(v, nodes, &mut st);
        }
    }
    st.out
}

/// Canonical serialization of the regular tree rooted at `start`, with
/// intra-cycle back-edges written as de Bruijn-style distances.
fn cycle_key(
    nodes: &[Scratch],
    start: usize,
    scc: &HashSet<usize>,
    mat: &HashMap<usize, TypeId>,
) -> String {
    fn go(
        n: usize,
        nodes: &[Scratch],
        scc: &HashSet<usize>,
        mat: &HashMap<usize, TypeId>,
        stack: &mut Vec<usize>,
        out: &mut String,
    ) {
        if !scc.contains(&n) {
            out.push_str(&format!("x{};", mat[&n].0));
            return;
        }
        if let Some(pos) = stack.iter().position(|&m| m == n) {
            out.push_str(&format!("^{};", stack.len() - 1 - pos));
            return;
        }
        stack.push(n);
        match &nodes[n] {
            Scratch::Prod(a, b) => {
                out.push('P');
                go(*a, nodes, scc, mat, stack, out);
                go(*b, nodes, scc, mat, stack, out);
            }
            Scratch::Arrow(a, b) => {
                out.push('A');
                go(*a, nodes, scc, mat, stack, out);
                go(*b, nodes, scc, mat, stack, out);
            }
            Scratch::Or(a, b) => {
                out.push('O');
                go(*a, nodes, scc, mat, stack, out);
                go(*b, nodes, scc, mat, stack, out);
            }
            Scratch::Not(a) => {
                out.push('N');
                go(*a, nodes, scc, mat, stack, out);
            }
            other => unreachable!("leaf {other:?} inside a cycle"),
        }
        stack.pop();
    }
    let mut out = String::new();
    go(start, nodes, scc, mat, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_idempotent() {
        let e = TypeEngine::new();
        let a = e.mk_or(e.int(), e.bool_ty());
        let b = e.mk_or(e.int(), e.bool_ty());
        assert_eq!(a, b);
        assert_ne!(a, e.mk_or(e.bool_ty(), e.int()));
    }

    #[test]
    fn not_empty_is_any() {
        let e = TypeEngine::new();
        assert_eq!(e.mk_not(e.mk_empty()), e.mk_any());
        assert_eq!(e.mk_not(e.mk_not(e.int())), e.int());
    }

    #[test]
    fn and_is_the_definitional_abbreviation() {
        let e = TypeEngine::new();
        let lhs = e.mk_and(e.int(), e.bool_ty());
        let rhs = e.mk_not(e.mk_or(e.mk_not(e.int()), e.mk_not(e.bool_ty())));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rec_list_type() {
        let e = TypeEngine::new();
        let nil = TypeSpec::Basic(BasicSet::singleton(&Constant::Atom("Nil".into())));
        let eqs = vec![(
            "L".to_string(),
            TypeSpec::Or(
                Box::new(TypeSpec::Prod(
                    Box::new(TypeSpec::Id(e.int())),
                    Box::new(TypeSpec::Ref("L".into())),
                )),
                Box::new(nil),
            ),
        )];
        let ids = e.mk_rec(&eqs).unwrap();
        let l = ids["L"];
        // Building the same equations again yields the same id.
        let ids2 = e.mk_rec(&eqs).unwrap();
        assert_eq!(l, ids2["L"]);
        // Regularity: the reachable node count is small and finite.
        let mut seen = HashSet::new();
        let mut stack = vec![l];
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            match e.node(t) {
                TypeNode::Prod(a, b) | TypeNode::Arrow(a, b) | TypeNode::Or(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                TypeNode::Not(a) => stack.push(a),
                _ => {}
            }
        }
        assert!(seen.len() <= 8, "expected a small regular tree, got {}", seen.len());
    }

    #[test]
    fn rec_rejects_noncontractive() {
        let e = TypeEngine::new();
        let x_or_x = TypeSpec::Or(
            Box::new(TypeSpec::Ref("X".into())),
            Box::new(TypeSpec::Ref("X".into())),
        );
        assert_eq!(
            e.mk_rec(&[("X".into(), x_or_x)]).unwrap_err(),
            RecError::ContractivityViolation
        );
        let not_x = TypeSpec::Not(Box::new(TypeSpec::Ref("X".into())));
        assert_eq!(
            e.mk_rec(&[("X".into(), not_x)]).unwrap_err(),
            RecError::ContractivityViolation
        );
    }

    #[test]
    fn rec_bisimilar_unfoldings_share_ids() {
        let e = TypeEngine::new();
        // X = (Int, X) versus Y = (Int, (Int, Y))
        let x = e
            .mk_rec(&[(
                "X".into(),
                TypeSpec::Prod(
                    Box::new(TypeSpec::Id(e.int())),
                    Box::new(TypeSpec::Ref("X".into())),
                ),
            )])
            .unwrap()["X"];
        let y = e
            .mk_rec(&[(
                "Y".into(),
                TypeSpec::Prod(
                    Box::new(TypeSpec::Id(e.int())),
                    Box::new(TypeSpec::Prod(
                        Box::new(TypeSpec::Id(e.int())),
                        Box::new(TypeSpec::Ref("Y".into())),
                    )),
                ),
            )])
            .unwrap()["Y"];
        assert_eq!(x, y);
    }

    #[test]
    fn hash_consing_reaches_into_cycles() {
        let e = TypeEngine::new();
        // X = X -> (Int -> Int): an arrow node whose domain is itself.
        let ii = e.mk_arrow(e.int(), e.int());
        let x = e
            .mk_rec(&[(
                "X".into(),
                TypeSpec::Arrow(Box::new(TypeSpec::Ref("X".into())), Box::new(TypeSpec::Id(ii))),
            )])
            .unwrap()["X"];
        // Constructing the unfolding by hand lands on the same node.
        assert_eq!(e.mk_arrow(x, ii), x);
    }

    #[test]
    fn mutual_recursion() {
        let e = TypeEngine::new();
        // Even/odd-length integer streams ending in Nil.
        let nil = TypeSpec::Basic(BasicSet::singleton(&Constant::Atom("Nil".into())));
        let ids = e
            .mk_rec(&[
                (
                    "E".into(),
                    TypeSpec::Or(
                        Box::new(TypeSpec::Prod(
                            Box::new(TypeSpec::Id(e.int())),
                            Box::new(TypeSpec::Ref("O".into())),
                        )),
                        Box::new(nil),
                    ),
                ),
                (
                    "O".into(),
                    TypeSpec::Prod(
                        Box::new(TypeSpec::Id(e.int())),
                        Box::new(TypeSpec::Ref("E".into())),
                    ),
                ),
            ])
            .unwrap();
        assert_ne!(ids["E"], ids["O"]);
    }
}
