//! Lazy comparison of a term against a known β-normal form.
//!
//! The term is evaluated by a call-by-need environment machine to head normal
//! form only as far as the comparison needs, so a mismatch near the root is
//! found without normalizing (or even copying) the rest. Used by the solver
//! to reject candidates cheaply; accepted candidates are re-checked with
//! [`normalize`](crate::term::normalize).

use std::cell::RefCell;
use std::rc::Rc;

use crate::term::Term;

/// Result of [`nbe_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbeOutcome {
    Equal,
    Different,
    OutOfFuel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head {
    /// Fresh variable introduced under a binder of the target, by depth.
    Level(usize),
    /// Free variable of the compared term.
    Free(usize),
}

enum Val<'a> {
    Lam(&'a Term, Env<'a>),
    Neutral(Head, Vec<Thunk<'a>>),
}

enum ThunkState<'a> {
    Delayed(&'a Term, Env<'a>),
    Done(Rc<Val<'a>>),
}

type Thunk<'a> = Rc<RefCell<ThunkState<'a>>>;

struct EnvNode<'a> {
    value: Thunk<'a>,
    next: Env<'a>,
}

type Env<'a> = Option<Rc<EnvNode<'a>>>;

struct OutOfFuel;

struct Machine {
    fuel: u64,
}

fn cons<'a>(value: Thunk<'a>, next: &Env<'a>) -> Env<'a> {
    Some(Rc::new(EnvNode {
        value,
        next: next.clone(),
    }))
}

fn done(v: Rc<Val<'_>>) -> Thunk<'_> {
    Rc::new(RefCell::new(ThunkState::Done(v)))
}

impl Machine {
    fn tick(&mut self) -> Result<(), OutOfFuel> {
        if self.fuel == 0 {
            return Err(OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn force<'a>(&mut self, th: &Thunk<'a>) -> Result<Rc<Val<'a>>, OutOfFuel> {
        let pending = match &*th.borrow() {
            ThunkState::Done(v) => return Ok(v.clone()),
            ThunkState::Delayed(t, e) => (*t, e.clone()),
        };
        let v = self.eval(pending.0, pending.1)?;
        *th.borrow_mut() = ThunkState::Done(v.clone());
        Ok(v)
    }

    fn lookup<'a>(&mut self, k: usize, env: &Env<'a>) -> Result<Rc<Val<'a>>, OutOfFuel> {
        let mut node = env;
        let mut depth = 0;
        while let Some(n) = node {
            if depth == k {
                let th = n.value.clone();
                return self.force(&th);
            }
            depth += 1;
            node = &n.next;
        }
        Ok(Rc::new(Val::Neutral(Head::Free(k - depth), Vec::new())))
    }

    fn eval<'a>(&mut self, term: &'a Term, env: Env<'a>) -> Result<Rc<Val<'a>>, OutOfFuel> {
        let mut t = term;
        let mut env = env;
        // pending arguments, last element is applied first
        let mut stack: Vec<Thunk<'a>> = Vec::new();
        loop {
            match t {
                Term::App(f, a) => {
                    stack.push(Rc::new(RefCell::new(ThunkState::Delayed(a, env.clone()))));
                    t = f;
                }
                Term::Lam(body) => match stack.pop() {
                    Some(arg) => {
                        self.tick()?;
                        env = cons(arg, &env);
                        t = body;
                    }
                    None => return Ok(Rc::new(Val::Lam(body, env))),
                },
                Term::Var(k) => {
                    let v = self.lookup(*k, &env)?;
                    match &*v {
                        Val::Lam(body, closure) if !stack.is_empty() => {
                            self.tick()?;
                            let arg = stack.pop().expect("non-empty");
                            env = cons(arg, closure);
                            t = body;
                        }
                        Val::Lam(..) => return Ok(v),
                        Val::Neutral(h, args) => {
                            if stack.is_empty() {
                                return Ok(v);
                            }
                            let mut all = args.clone();
                            all.extend(stack.into_iter().rev());
                            return Ok(Rc::new(Val::Neutral(*h, all)));
                        }
                    }
                }
            }
        }
    }

    fn apply<'a>(&mut self, f: Rc<Val<'a>>, arg: Thunk<'a>) -> Result<Rc<Val<'a>>, OutOfFuel> {
        match &*f {
            Val::Lam(body, closure) => {
                self.tick()?;
                self.eval(body, cons(arg, closure))
            }
            Val::Neutral(h, args) => {
                let mut all = args.clone();
                all.push(arg);
                Ok(Rc::new(Val::Neutral(*h, all)))
            }
        }
    }

    fn compare(&mut self, v: Rc<Val<'_>>, target: &Term, depth: usize) -> Result<bool, OutOfFuel> {
        match target {
            Term::Lam(tb) => match &*v {
                Val::Lam(body, closure) => {
                    let fresh = done(Rc::new(Val::Neutral(Head::Level(depth), Vec::new())));
                    let inner = self.eval(body, cons(fresh, closure))?;
                    self.compare(inner, tb, depth + 1)
                }
                Val::Neutral(..) => Ok(false),
            },
            _ => {
                let (head, targs) = target.spine();
                let expected = match head {
                    Term::Var(k) if *k < depth => Head::Level(depth - 1 - k),
                    Term::Var(k) => Head::Free(k - depth),
                    _ => return Ok(false),
                };
                let Val::Neutral(h, args) = &*v else {
                    return Ok(false);
                };
                if *h != expected || args.len() != targs.len() {
                    return Ok(false);
                }
                for (a, ta) in args.iter().zip(targs) {
                    let av = self.force(a)?;
                    if !self.compare(av, ta, depth)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Whether `term` β-reduces to `target`, which must be β-normal. At most
/// `fuel` β-contractions are performed.
pub fn nbe_check(term: &Term, target: &Term, fuel: u64) -> NbeOutcome {
    nbe_check_apply(term, &[], target, fuel)
}

/// [`nbe_check`] for `head args₁ … argsₙ`, without building the application.
pub fn nbe_check_apply(head: &Term, args: &[Term], target: &Term, fuel: u64) -> NbeOutcome {
    let mut m = Machine { fuel };
    let result = m
        .eval(head, None)
        .and_then(|v| {
            args.iter().try_fold(v, |f, a| {
                m.apply(f, Rc::new(RefCell::new(ThunkState::Delayed(a, None))))
            })
        })
        .and_then(|v| m.compare(v, target, 0));
    match result {
        Ok(true) => NbeOutcome::Equal,
        Ok(false) => NbeOutcome::Different,
        Err(OutOfFuel) => NbeOutcome::OutOfFuel,
    }
}
