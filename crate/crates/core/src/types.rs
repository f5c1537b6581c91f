//! Simple types over the single ground atom ι, typing environments, and
//! typability checking by first-order unification.
//!
//! Terms are unannotated, so a term generally has many simple types. The
//! checker computes the principal typing and asks whether the requested type
//! is an instance of it; [`type_infer`] reports the principal type with every
//! remaining type variable grounded to ι.

use std::fmt;

/// `ι` or `A → B`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Atom,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn iota() -> SimpleType {
        SimpleType::Atom
    }

    pub fn arrow(domain: SimpleType, codomain: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// `d₁ → … → dₖ → codomain`.
    pub fn arrows<I>(domains: I, codomain: SimpleType) -> SimpleType
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        domains
            .into_iter()
            .rev()
            .fold(codomain, |acc, d| SimpleType::arrow(d, acc))
    }

    /// `ι → … → ι → ι` with `arity` arguments.
    pub fn first_order(arity: usize) -> SimpleType {
        SimpleType::arrows(
            std::iter::repeat_n(SimpleType::Atom, arity),
            SimpleType::Atom,
        )
    }

    /// Domains and final codomain of the arrow spine.
    pub fn uncurry(&self) -> (Vec<&SimpleType>, &SimpleType) {
        let mut doms = Vec::new();
        let mut t = self;
        while let SimpleType::Arrow(d, c) = t {
            doms.push(d.as_ref());
            t = c;
        }
        (doms, t)
    }

    pub fn order(&self) -> usize {
        type_order(self)
    }
}

impl fmt::Debug for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_type(self))
    }
}

/// `order(ι) = 1`, `order(A → B) = max(order(A) + 1, order(B))`.
pub fn type_order(t: &SimpleType) -> usize {
    match t {
        SimpleType::Atom => 1,
        SimpleType::Arrow(a, b) => (type_order(a) + 1).max(type_order(b)),
    }
}

/// Ordered typing context; position `k` types the variable at binder distance `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    // outermost first, so pushing a binder is a Vec push
    scope: Vec<SimpleType>,
}

impl TypeEnv {
    pub fn empty() -> TypeEnv {
        TypeEnv::default()
    }

    /// Builds an environment from binder order (outermost binder first).
    pub fn from_binders<I: IntoIterator<Item = SimpleType>>(binders: I) -> TypeEnv {
        TypeEnv {
            scope: binders.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.scope.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scope.is_empty()
    }

    /// Type of the variable at binder distance `index`.
    pub fn lookup(&self, index: usize) -> Option<&SimpleType> {
        self.scope
            .len()
            .checked_sub(index + 1)
            .map(|i| &self.scope[i])
    }

    /// Environment extended by one innermost binder.
    pub fn extended(&self, ty: SimpleType) -> TypeEnv {
        let mut scope = self.scope.clone();
        scope.push(ty);
        TypeEnv { scope }
    }

    pub fn push(&mut self, ty: SimpleType) {
        self.scope.push(ty);
    }

    pub fn pop(&mut self) -> Option<SimpleType> {
        self.scope.pop()
    }

    /// Binder types, outermost first.
    pub fn binders(&self) -> &[SimpleType] {
        &self.scope
    }
}

/// Principal type of `term` under `env`, with leftover variables set to ι.
pub fn type_infer(env: &TypeEnv, term: &crate::term::Term) -> Option<SimpleType> {
    let mut u = Unifier::default();
    let root = u.infer_in(env, term)?;
    Some(u.ground(root))
}

/// Whether `env ⊢ term : ty` is derivable.
pub fn type_check(env: &TypeEnv, term: &crate::term::Term, ty: &SimpleType) -> bool {
    let mut u = Unifier::default();
    let Some(root) = u.infer_in(env, term) else {
        return false;
    };
    let want = u.embed(ty);
    u.unify(root, want)
}

type Node = usize;

#[derive(Clone, Copy)]
enum Shape {
    Unbound,
    Atom,
    Arrow(Node, Node),
}

#[derive(Default)]
struct Unifier {
    shape: Vec<Shape>,
    parent: Vec<Node>,
}

impl Unifier {
    fn fresh(&mut self, shape: Shape) -> Node {
        let id = self.shape.len();
        self.shape.push(shape);
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut n: Node) -> Node {
        while self.parent[n] != n {
            self.parent[n] = self.parent[self.parent[n]];
            n = self.parent[n];
        }
        n
    }

    fn embed(&mut self, ty: &SimpleType) -> Node {
        match ty {
            SimpleType::Atom => self.fresh(Shape::Atom),
            SimpleType::Arrow(a, b) => {
                let a = self.embed(a);
                let b = self.embed(b);
                self.fresh(Shape::Arrow(a, b))
            }
        }
    }

    fn occurs(&mut self, var: Node, n: Node) -> bool {
        let n = self.find(n);
        if n == var {
            return true;
        }
        match self.shape[n] {
            Shape::Arrow(a, b) => self.occurs(var, a) || self.occurs(var, b),
            _ => false,
        }
    }

    fn unify(&mut self, a: Node, b: Node) -> bool {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return true;
        }
        match (self.shape[a], self.shape[b]) {
            (Shape::Unbound, _) => {
                if self.occurs(a, b) {
                    return false;
                }
                self.parent[a] = b;
                true
            }
            (_, Shape::Unbound) => {
                if self.occurs(b, a) {
                    return false;
                }
                self.parent[b] = a;
                true
            }
            (Shape::Atom, Shape::Atom) => {
                self.parent[a] = b;
                true
            }
            (Shape::Arrow(a1, a2), Shape::Arrow(b1, b2)) => {
                self.parent[a] = b;
                self.unify(a1, b1) && self.unify(a2, b2)
            }
            _ => false,
        }
    }

    fn infer_in(&mut self, env: &TypeEnv, term: &crate::term::Term) -> Option<Node> {
        let mut scope: Vec<Node> = env.binders().iter().map(|t| self.embed(t)).collect();
        self.infer(&mut scope, term)
    }

    fn infer(&mut self, scope: &mut Vec<Node>, term: &crate::term::Term) -> Option<Node> {
        use crate::term::Term;
        match term {
            Term::Var(k) => scope.len().checked_sub(k + 1).map(|i| scope[i]),
            Term::Lam(body) => {
                let dom = self.fresh(Shape::Unbound);
                scope.push(dom);
                let cod = self.infer(scope, body);
                scope.pop();
                Some(self.fresh(Shape::Arrow(dom, cod?)))
            }
            Term::App(f, a) => {
                let tf = self.infer(scope, f)?;
                let ta = self.infer(scope, a)?;
                let res = self.fresh(Shape::Unbound);
                let want = self.fresh(Shape::Arrow(ta, res));
                self.unify(tf, want).then_some(res)
            }
        }
    }

    fn ground(&mut self, n: Node) -> SimpleType {
        let n = self.find(n);
        match self.shape[n] {
            Shape::Unbound | Shape::Atom => SimpleType::Atom,
            Shape::Arrow(a, b) => SimpleType::arrow(self.ground(a), self.ground(b)),
        }
    }
}
