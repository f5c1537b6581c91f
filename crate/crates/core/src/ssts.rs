//! Simple semi-Thue systems (every rule has shape `ab ⇒ cd`) and exact
//! per-length reachability for the `0ⁿ ⇒* 1ⁿ` problem.
//!
//! Rules preserve word length, so the words reachable from `0ⁿ` form a finite
//! set; a breadth-first closure therefore decides each fixed `n` exactly.
//! Rule indices and positions are 1-based.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::par::Exec;

pub type Symbol = u32;

/// Default cap on the number of distinct words visited per search.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SstsError {
    #[error("alphabet must contain at least the symbols 0 and 1 (got size {0})")]
    AlphabetTooSmall(u32),
    #[error("symbol {symbol} is outside the alphabet of size {alphabet_size}")]
    SymbolOutOfRange { symbol: Symbol, alphabet_size: u32 },
    #[error("a system needs at least one rule")]
    EmptyRuleSet,
    #[error("words are non-empty")]
    EmptyWord,
    #[error("position {position} out of range for a word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("rule {rule} does not match at position {position}")]
    RuleMismatch { rule: Rule, position: usize },
    #[error("rule index {0} out of range")]
    RuleIndexOutOfRange(usize),
    #[error("search visited more than {cap} words")]
    ResourceLimit { cap: usize },
    #[error("word length must be at least 1")]
    InvalidLength,
}

/// A rule `ab ⇒ cd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    pub a: Symbol,
    pub b: Symbol,
    pub c: Symbol,
    pub d: Symbol,
}

impl Rule {
    pub fn new(a: Symbol, b: Symbol, c: Symbol, d: Symbol) -> Rule {
        Rule { a, b, c, d }
    }

    fn max_symbol(&self) -> Symbol {
        self.a.max(self.b).max(self.c).max(self.d)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} => {} {}", self.a, self.b, self.c, self.d)
    }
}

/// A non-empty rule list over the alphabet `0 … alphabet_size-1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ssts {
    alphabet_size: u32,
    rules: Vec<Rule>,
}

impl Ssts {
    pub fn new(alphabet_size: u32, rules: Vec<Rule>) -> Result<Ssts, SstsError> {
        if alphabet_size < 2 {
            return Err(SstsError::AlphabetTooSmall(alphabet_size));
        }
        if rules.is_empty() {
            return Err(SstsError::EmptyRuleSet);
        }
        if let Some(symbol) = rules
            .iter()
            .map(Rule::max_symbol)
            .find(|&s| s >= alphabet_size)
        {
            return Err(SstsError::SymbolOutOfRange {
                symbol,
                alphabet_size,
            });
        }
        Ok(Ssts {
            alphabet_size,
            rules,
        })
    }

    /// Builds a system whose alphabet is just large enough for its rules.
    pub fn from_rules(rules: Vec<Rule>) -> Result<Ssts, SstsError> {
        let size = rules
            .iter()
            .map(Rule::max_symbol)
            .max()
            .map_or(2, |m| (m + 1).max(2));
        Ssts::new(size, rules)
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Number of rules.
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Rule by 1-based index.
    pub fn rule(&self, index: usize) -> Option<&Rule> {
        index.checked_sub(1).and_then(|i| self.rules.get(i))
    }
}

/// A non-empty word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Word, SstsError> {
        if symbols.is_empty() {
            return Err(SstsError::EmptyWord);
        }
        Ok(Word(symbols))
    }

    pub fn repeat(symbol: Symbol, len: usize) -> Result<Word, SstsError> {
        Word::new(vec![symbol; len])
    }

    pub fn zeros(len: usize) -> Result<Word, SstsError> {
        Word::repeat(0, len)
    }

    pub fn ones(len: usize) -> Result<Word, SstsError> {
        Word::repeat(1, len)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Symbol {
        *self.0.last().expect("words are non-empty")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            f.write_str(&parts.join(" "))
        }
    }
}

/// One rewriting step: apply rule `rule` at position `position` (both 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub rule: usize,
    pub position: usize,
}

impl Step {
    pub fn new(rule: usize, position: usize) -> Step {
        Step { rule, position }
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rule, self.position)
    }
}

/// A sequence of steps, first applied step first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation(pub Vec<Step>);

impl Derivation {
    pub fn new(steps: Vec<Step>) -> Derivation {
        Derivation(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Step::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Rewrites `ab` at `position` (1-based) to `cd`.
pub fn apply_step(word: &Word, rule: &Rule, position: usize) -> Result<Word, SstsError> {
    let len = word.len();
    if position == 0 || position + 1 > len {
        return Err(SstsError::PositionOutOfRange { position, len });
    }
    let i = position - 1;
    let w = word.symbols();
    if w[i] != rule.a || w[i + 1] != rule.b {
        return Err(SstsError::RuleMismatch {
            rule: *rule,
            position,
        });
    }
    let mut out = w.to_vec();
    out[i] = rule.c;
    out[i + 1] = rule.d;
    Ok(Word(out))
}

/// Applies every step in order, returning all intermediate words (start included).
pub fn trace(system: &Ssts, start: &Word, steps: &Derivation) -> Result<Vec<Word>, SstsError> {
    let mut words = vec![start.clone()];
    let mut cur = start.clone();
    for step in steps.steps() {
        let rule = system
            .rule(step.rule)
            .ok_or(SstsError::RuleIndexOutOfRange(step.rule))?;
        cur = apply_step(&cur, rule, step.position)?;
        words.push(cur.clone());
    }
    Ok(words)
}

/// Whether `steps` rewrites `start` into `end`.
pub fn check_derivation(system: &Ssts, start: &Word, steps: &Derivation, end: &Word) -> bool {
    match trace(system, start, steps) {
        Ok(words) => words.last() == Some(end),
        Err(_) => false,
    }
}

/// Search limits and execution mode.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub state_cap: usize,
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            state_cap: DEFAULT_STATE_CAP,
            exec: Exec::default(),
        }
    }
}

/// Successors of `word`, by rule index then position.
fn successors(system: &Ssts, word: &[Symbol]) -> Vec<(Vec<Symbol>, Step)> {
    let mut out = Vec::new();
    for (ri, rule) in system.rules().iter().enumerate() {
        for i in 0..word.len().saturating_sub(1) {
            if word[i] == rule.a && word[i + 1] == rule.b {
                let mut next = word.to_vec();
                next[i] = rule.c;
                next[i + 1] = rule.d;
                out.push((next, Step::new(ri + 1, i + 1)));
            }
        }
    }
    out
}

struct Closure {
    words: Vec<Vec<Symbol>>,
    parent: Vec<Option<(usize, Step)>>,
    found: Option<usize>,
}

/// Level-synchronous breadth-first closure from `start`, stopping early when
/// `target` is discovered. Frontier expansion may run in parallel; discovery
/// order is the sequential FIFO order.
fn closure(
    system: &Ssts,
    start: &[Symbol],
    target: Option<&[Symbol]>,
    config: SearchConfig,
) -> Result<Closure, SstsError> {
    let mut words = vec![start.to_vec()];
    let mut parent = vec![None];
    let mut index: HashMap<Vec<Symbol>, usize> = HashMap::new();
    index.insert(start.to_vec(), 0);
    if target == Some(start) {
        return Ok(Closure {
            words,
            parent,
            found: Some(0),
        });
    }
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let expanded = config
            .exec
            .map(&frontier, |&i| successors(system, &words[i]));
        let mut next = Vec::new();
        for (&from, succ) in frontier.iter().zip(expanded) {
            for (w, step) in succ {
                if index.contains_key(&w) {
                    continue;
                }
                if words.len() >= config.state_cap {
                    return Err(SstsError::ResourceLimit {
                        cap: config.state_cap,
                    });
                }
                let id = words.len();
                let hit = target == Some(w.as_slice());
                index.insert(w.clone(), id);
                words.push(w);
                parent.push(Some((from, step)));
                if hit {
                    return Ok(Closure {
                        words,
                        parent,
                        found: Some(id),
                    });
                }
                next.push(id);
            }
        }
        frontier = next;
    }
    Ok(Closure {
        words,
        parent,
        found: None,
    })
}

/// Exact decision of `0ⁿ ⇒* 1ⁿ`, returning a shortest derivation.
pub fn decide_for_n(system: &Ssts, n: usize) -> Result<Option<Derivation>, SstsError> {
    decide_for_n_with(system, n, SearchConfig::default())
}

pub fn decide_for_n_with(
    system: &Ssts,
    n: usize,
    config: SearchConfig,
) -> Result<Option<Derivation>, SstsError> {
    if n == 0 {
        return Err(SstsError::InvalidLength);
    }
    find_derivation(system, &Word(vec![0; n]), &Word(vec![1; n]), config)
}

/// A shortest derivation from `start` to `end`, if one exists.
pub fn find_derivation(
    system: &Ssts,
    start: &Word,
    end: &Word,
    config: SearchConfig,
) -> Result<Option<Derivation>, SstsError> {
    if start.len() != end.len() {
        return Ok(None);
    }
    let c = closure(system, start.symbols(), Some(end.symbols()), config)?;
    Ok(c.found.map(|mut id| {
        let mut steps = Vec::new();
        while let Some((from, step)) = c.parent[id] {
            steps.push(step);
            id = from;
        }
        steps.reverse();
        Derivation(steps)
    }))
}

/// Smallest `n ≤ max_n` with `0ⁿ ⇒* 1ⁿ`, with a shortest derivation.
pub fn search_zero_one(
    system: &Ssts,
    max_n: usize,
) -> Result<Option<(usize, Derivation)>, SstsError> {
    search_zero_one_with(system, max_n, SearchConfig::default())
}

pub fn search_zero_one_with(
    system: &Ssts,
    max_n: usize,
    config: SearchConfig,
) -> Result<Option<(usize, Derivation)>, SstsError> {
    if max_n == 0 {
        return Err(SstsError::InvalidLength);
    }
    for n in 1..=max_n {
        if let Some(d) = decide_for_n_with(system, n, config)? {
            return Ok(Some((n, d)));
        }
    }
    Ok(None)
}

/// Every word reachable from `start`, in discovery order.
pub fn reachable_set(
    system: &Ssts,
    start: &Word,
    config: SearchConfig,
) -> Result<Vec<Word>, SstsError> {
    let c = closure(system, start.symbols(), None, config)?;
    Ok(c.words.into_iter().map(Word).collect())
}
