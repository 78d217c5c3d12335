use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::{Closure, Proof, ProofResult, ProverLimits, TableauNode};
use crate::syntax::{Symbol, Term};
use crate::transform::{Clause, Color, Literal};

#[derive(Clone, Debug, PartialEq, Eq)]
enum ITerm {
    Var(usize),
    App(u32, Rc<[ITerm]>),
}

#[derive(Clone, Debug)]
struct ILit {
    positive: bool,
    pred: u32,
    args: Vec<ITerm>,
}

struct IClause {
    lits: Vec<ILit>,
    nvars: usize,
    color: Option<Color>,
}

#[derive(Default)]
struct Interner {
    ids: HashMap<Symbol, u32>,
    names: Vec<Symbol>,
}

impl Interner {
    fn id(&mut self, s: &Symbol) -> u32 {
        if let Some(&i) = self.ids.get(s) {
            return i;
        }
        let i = self.names.len() as u32;
        self.names.push(s.clone());
        self.ids.insert(s.clone(), i);
        i
    }
}

fn intern_term(t: &Term, syms: &mut Interner, vars: &mut BTreeMap<Symbol, usize>) -> ITerm {
    match t {
        Term::Var(v) => {
            let n = vars.len();
            ITerm::Var(*vars.entry(v.clone()).or_insert(n))
        }
        Term::App(f, args) => {
            let id = syms.id(f);
            ITerm::App(id, args.iter().map(|a| intern_term(a, syms, vars)).collect())
        }
    }
}

fn offset(t: &ITerm, base: usize) -> ITerm {
    match t {
        ITerm::Var(v) => ITerm::Var(v + base),
        ITerm::App(f, args) if args.is_empty() => ITerm::App(*f, args.clone()),
        ITerm::App(f, args) => ITerm::App(*f, args.iter().map(|a| offset(a, base)).collect()),
    }
}

struct PathCell {
    node: usize,
    depth: usize,
    next: Path,
}
type Path = Option<Rc<PathCell>>;

struct Goal {
    node: usize,
    path: Path,
    depth_left: usize,
    next: Goals,
}
type Goals = Option<Rc<Goal>>;

struct Node {
    lit: ILit,
    origin: usize,
    color: Option<Color>,
}

#[derive(Clone)]
enum IClosure {
    Extension(Vec<usize>),
    Reduction(usize),
}

struct Search<'a> {
    clauses: &'a [IClause],
    index: &'a HashMap<(bool, u32), Vec<(usize, usize)>>,
    bind: Vec<Option<ITerm>>,
    trail: Vec<usize>,
    nodes: Vec<Node>,
    closed: Vec<Option<IClosure>>,
    inferences: u64,
    cap: u64,
    out_of_resources: bool,
    hit_depth_limit: bool,
    start_children: Vec<usize>,
}

impl Search<'_> {
    fn deref(&self, t: &ITerm) -> ITerm {
        let mut t = t.clone();
        while let ITerm::Var(v) = t {
            match &self.bind[v] {
                Some(b) => t = b.clone(),
                None => break,
            }
        }
        t
    }

    fn occurs(&self, v: usize, t: &ITerm) -> bool {
        match self.deref(t) {
            ITerm::Var(w) => v == w,
            ITerm::App(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    fn unify(&mut self, a: &ITerm, b: &ITerm) -> bool {
        let (a, b) = (self.deref(a), self.deref(b));
        match (&a, &b) {
            (ITerm::Var(x), ITerm::Var(y)) if x == y => true,
            (ITerm::Var(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bind[*x] = Some(b.clone());
                self.trail.push(*x);
                true
            }
            (_, ITerm::Var(_)) => self.unify(&b, &a),
            (ITerm::App(f, xs), ITerm::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
        }
    }

    fn unify_args(&mut self, a: &[ITerm], b: &[ITerm]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| self.unify(x, y))
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            self.bind[v] = None;
        }
    }

    fn identical(&self, a: &ITerm, b: &ITerm) -> bool {
        match (self.deref(a), self.deref(b)) {
            (ITerm::Var(x), ITerm::Var(y)) => x == y,
            (ITerm::App(f, xs), ITerm::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| self.identical(x, y))
            }
            _ => false,
        }
    }

    fn same_lit(&self, a: &ILit, b: &ILit) -> bool {
        a.positive == b.positive
            && a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| self.identical(x, y))
    }

    fn add_node(&mut self, lit: ILit, origin: usize, color: Option<Color>) -> usize {
        self.nodes.push(Node { lit, origin, color });
        self.closed.push(None);
        self.nodes.len() - 1
    }

    fn copy_clause(&mut self, ci: usize) -> Vec<ILit> {
        let base = self.bind.len();
        let c = &self.clauses[ci];
        self.bind.extend(std::iter::repeat(None).take(c.nvars));
        c.lits
            .iter()
            .map(|l| ILit { positive: l.positive, pred: l.pred, args: l.args.iter().map(|a| offset(a, base)).collect() })
            .collect()
    }

    fn start(&mut self, ci: usize, depth: usize) -> bool {
        let lits = self.copy_clause(ci);
        let color = self.clauses[ci].color;
        let ids: Vec<usize> = lits.into_iter().map(|l| self.add_node(l, ci, color)).collect();
        self.start_children = ids.clone();
        let mut goals: Goals = None;
        for &id in ids.iter().rev() {
            goals = Some(Rc::new(Goal { node: id, path: None, depth_left: depth, next: goals }));
        }
        self.solve(&goals)
    }

    fn solve(&mut self, goals: &Goals) -> bool {
        let Some(g) = goals else {
            return self.regular();
        };
        self.inferences += 1;
        if self.inferences > self.cap {
            self.out_of_resources = true;
        }
        if self.out_of_resources {
            return false;
        }
        let lit = self.nodes[g.node].lit.clone();
        let mut p = &g.path;
        while let Some(cell) = p {
            if self.same_lit(&lit, &self.nodes[cell.node].lit) {
                return false;
            }
            p = &cell.next;
        }

        let mut p = g.path.clone();
        while let Some(cell) = p {
            let anc = self.nodes[cell.node].lit.clone();
            if anc.positive != lit.positive && anc.pred == lit.pred {
                let mark = self.trail.len();
                if self.unify_args(&lit.args, &anc.args) {
                    self.closed[g.node] = Some(IClosure::Reduction(cell.depth));
                    if self.solve(&g.next) {
                        return true;
                    }
                    self.closed[g.node] = None;
                }
                self.undo(mark);
            }
            p = cell.next.clone();
        }

        let Some(cands) = self.index.get(&(!lit.positive, lit.pred)) else {
            return false;
        };
        if g.depth_left == 0 {
            self.hit_depth_limit = true;
            return false;
        }
        let depth = g.path.as_ref().map_or(1, |c| c.depth + 1);
        let path = Some(Rc::new(PathCell { node: g.node, depth, next: g.path.clone() }));
        for &(ci, li) in cands {
            let mark = self.trail.len();
            let (nbind, nnodes) = (self.bind.len(), self.nodes.len());
            let copy = self.copy_clause(ci);
            if self.unify_args(&lit.args, &copy[li].args) {
                let color = self.clauses[ci].color;
                let ids: Vec<usize> = copy.into_iter().map(|l| self.add_node(l, ci, color)).collect();
                self.closed[ids[li]] = Some(IClosure::Extension(vec![]));
                let mut next = g.next.clone();
                for (k, &id) in ids.iter().enumerate().rev() {
                    if k != li {
                        next = Some(Rc::new(Goal { node: id, path: path.clone(), depth_left: g.depth_left - 1, next }));
                    }
                }
                self.closed[g.node] = Some(IClosure::Extension(ids));
                if self.solve(&next) {
                    return true;
                }
                self.closed[g.node] = None;
            }
            self.undo(mark);
            self.bind.truncate(nbind);
            self.nodes.truncate(nnodes);
            self.closed.truncate(nnodes);
            if self.out_of_resources {
                return false;
            }
        }
        false
    }

    /// Regularity under the final substitution, checked once the
    /// tableau is closed.
    fn regular(&self) -> bool {
        let mut branch = Vec::new();
        self.start_children.iter().all(|&c| self.regular_from(c, &mut branch))
    }

    fn regular_from(&self, n: usize, branch: &mut Vec<usize>) -> bool {
        let lit = &self.nodes[n].lit;
        if branch.iter().any(|&b| self.same_lit(lit, &self.nodes[b].lit)) {
            return false;
        }
        match &self.closed[n] {
            Some(IClosure::Extension(children)) if !children.is_empty() => {
                branch.push(n);
                let ok = children.iter().all(|&c| self.regular_from(c, branch));
                branch.pop();
                ok
            }
            _ => true,
        }
    }

    fn resolve(&self, t: &ITerm, names: &[Symbol]) -> Term {
        match self.deref(t) {
            ITerm::Var(v) => Term::Var(Symbol::new(format!("_{v}"))),
            ITerm::App(f, args) => Term::App(names[f as usize].clone(), args.iter().map(|a| self.resolve(a, names)).collect()),
        }
    }

    fn build(&self, n: usize, names: &[Symbol]) -> TableauNode {
        let node = &self.nodes[n];
        let literal = Literal::new(
            node.lit.positive,
            names[node.lit.pred as usize].clone(),
            node.lit.args.iter().map(|a| self.resolve(a, names)).collect(),
        );
        let (children, closure) = match &self.closed[n] {
            Some(IClosure::Extension(ch)) if ch.is_empty() => (vec![], Some(Closure::ByExtension)),
            Some(IClosure::Extension(ch)) => (ch.iter().map(|&c| self.build(c, names)).collect(), None),
            Some(IClosure::Reduction(d)) => (vec![], Some(Closure::ByReduction { ancestor_depth: *d })),
            None => (vec![], None),
        };
        TableauNode { literal: Some(literal), clause_origin: Some(node.origin), color: node.color, children, closure }
    }
}

/// Iterative-deepening connection tableau search over `clauses`, which
/// already include any equality axioms.
pub(crate) fn search(clauses: &[Clause], limits: &ProverLimits) -> ProofResult {
    let mut syms = Interner::default();
    let iclauses: Vec<IClause> = clauses
        .iter()
        .map(|c| {
            let mut vars = BTreeMap::new();
            let lits = c
                .literals
                .iter()
                .map(|l| ILit {
                    positive: l.positive,
                    pred: syms.id(&l.pred),
                    args: l.args.iter().map(|a| intern_term(a, &mut syms, &mut vars)).collect(),
                })
                .collect();
            IClause { lits, nvars: vars.len(), color: c.color }
        })
        .collect();
    let mut index: HashMap<(bool, u32), Vec<(usize, usize)>> = HashMap::new();
    for (ci, c) in iclauses.iter().enumerate() {
        for (li, l) in c.lits.iter().enumerate() {
            index.entry((l.positive, l.pred)).or_default().push((ci, li));
        }
    }
    let starts = start_clauses(clauses);
    if iclauses.iter().any(|c| c.lits.is_empty()) {
        let ci = iclauses.iter().position(|c| c.lits.is_empty()).unwrap();
        let root = TableauNode { literal: None, clause_origin: Some(ci), color: clauses[ci].color, children: vec![], closure: None };
        return ProofResult::Proved(Proof { root, substitution: BTreeMap::new(), depth: 0, clauses: clauses.to_vec() });
    }
    for depth in 1..=limits.max_depth {
        let mut s = Search {
            clauses: &iclauses,
            index: &index,
            bind: Vec::new(),
            trail: Vec::new(),
            nodes: Vec::new(),
            closed: Vec::new(),
            inferences: 0,
            cap: limits.inference_cap,
            out_of_resources: false,
            hit_depth_limit: false,
            start_children: Vec::new(),
        };
        for &ci in &starts {
            s.bind.clear();
            s.nodes.clear();
            s.closed.clear();
            if s.start(ci, depth) {
                let names = &syms.names;
                let children = s.start_children.iter().map(|&c| s.build(c, names)).collect();
                let root = TableauNode { literal: None, clause_origin: Some(ci), color: clauses[ci].color, children, closure: None };
                let substitution = (0..s.bind.len())
                    .filter(|&v| s.bind[v].is_some())
                    .map(|v| (Symbol::new(format!("_{v}")), s.resolve(&ITerm::Var(v), names)))
                    .collect();
                return ProofResult::Proved(Proof { root, substitution, depth, clauses: clauses.to_vec() });
            }
            if s.out_of_resources {
                return ProofResult::ResourceOut;
            }
        }
        if !s.hit_depth_limit {
            return ProofResult::DepthExhausted(depth);
        }
    }
    ProofResult::DepthExhausted(limits.max_depth)
}

/// B-colored clauses first (then the rest, for completeness) when colors
/// are present; otherwise the negative clauses.
fn start_clauses(clauses: &[Clause]) -> Vec<usize> {
    if clauses.iter().any(|c| c.color.is_some()) {
        let b = (0..clauses.len()).filter(|&i| clauses[i].color == Some(Color::B));
        let rest = (0..clauses.len()).filter(|&i| clauses[i].color != Some(Color::B));
        return b.chain(rest).collect();
    }
    (0..clauses.len()).filter(|&i| clauses[i].is_negative()).collect()
}
