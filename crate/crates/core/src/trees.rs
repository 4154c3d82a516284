//! The Hopf algebra of rooted forests, graded by node count.
//!
//! Trees are written in bracket notation: `[]` is a single node, `[[]]` the
//! two-node ladder, `[[][]]` the cherry. A tree's canonical encoding sorts
//! its children's encodings, so isomorphic trees compare equal. The
//! coproduct sums over admissible cuts with the pruned forest on the left:
//! `Δ(t) = t ⊗ 1 + Σ_c P^c(t) ⊗ R^c(t)`, the sum including the empty cut.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::algebra::LaurentRing;
use crate::bialg::{Bialgebra, Character};
use crate::coalg::{Coalgebra, LinMap};
use crate::error::{Error, ParseError, Result};
use crate::exact::{parse_laurent, LaurentSeries, Rational};
use crate::lincomb::{LinComb, Tensor};

/// A rooted tree in canonical form.
#[derive(Clone, Debug)]
pub struct Tree {
    code: String,
    children: Vec<Tree>,
    nodes: usize,
}

impl Tree {
    /// A root grafted onto `children`.
    pub fn node(mut children: Vec<Tree>) -> Self {
        children.sort();
        let mut code = String::from("[");
        for c in &children {
            code.push_str(&c.code);
        }
        code.push(']');
        let nodes = 1 + children.iter().map(|c| c.nodes).sum::<usize>();
        Self {
            code,
            children,
            nodes,
        }
    }

    /// The single node `•`.
    pub fn leaf() -> Self {
        Self::node(Vec::new())
    }

    /// The `n`-node ladder (a path hanging from the root). `n >= 1`.
    pub fn ladder(n: usize) -> Self {
        assert!(n >= 1);
        (1..n).fold(Self::leaf(), |t, _| Self::node(vec![t]))
    }

    pub fn encoding(&self) -> &str {
        &self.code
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for Tree {}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.code.cmp(&other.code)
    }
}

impl Hash for Tree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

/// A multiset of trees, sorted canonically. Ordered by degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Forest {
    trees: Vec<Tree>,
}

impl Forest {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(mut trees: Vec<Tree>) -> Self {
        trees.sort();
        Self { trees }
    }

    pub fn single(tree: Tree) -> Self {
        Self { trees: vec![tree] }
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total node count.
    pub fn degree(&self) -> usize {
        self.trees.iter().map(Tree::nodes).sum()
    }

    /// Disjoint union.
    pub fn union(&self, other: &Forest) -> Forest {
        let mut trees = self.trees.clone();
        trees.extend(other.trees.iter().cloned());
        Forest::new(trees)
    }

    /// The bracket encoding; empty for the empty forest.
    pub fn encoding(&self) -> String {
        self.trees.iter().map(Tree::encoding).collect()
    }
}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Forest {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), &self.trees).cmp(&(other.degree(), &other.trees))
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.trees.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&self.encoding())
        }
    }
}

impl From<Tree> for Forest {
    fn from(t: Tree) -> Self {
        Forest::single(t)
    }
}

/// Parses `forest := tree*`, `tree := '[' forest ']'`, ignoring whitespace.
/// The text `1` also denotes the empty forest.
pub fn parse_forest(text: &str) -> Result<Forest, ParseError> {
    if text.trim() == "1" {
        return Ok(Forest::empty());
    }
    // Stack of child lists for the currently open brackets.
    let mut stack: Vec<(usize, Vec<Tree>)> = vec![(0, Vec::new())];
    for (pos, ch) in text.char_indices() {
        match ch {
            '[' => stack.push((pos, Vec::new())),
            ']' => {
                if stack.len() == 1 {
                    return Err(ParseError::new(pos, "unmatched ']'"));
                }
                let (_, children) = stack.pop().expect("checked above");
                let tree = Tree::node(children);
                stack.last_mut().expect("outer level").1.push(tree);
            }
            c if c.is_whitespace() => {}
            c => return Err(ParseError::new(pos, format!("unexpected '{c}'"))),
        }
    }
    if stack.len() > 1 {
        let (pos, _) = stack.pop().expect("len > 1");
        return Err(ParseError::new(pos, "unclosed '['"));
    }
    Ok(Forest::new(stack.pop().expect("outer level").1))
}

/// Parses a forest that must consist of exactly one tree.
pub fn parse_tree(text: &str) -> Result<Tree, ParseError> {
    let f = parse_forest(text)?;
    match <[Tree; 1]>::try_from(f.trees) {
        Ok([t]) => Ok(t),
        Err(_) => Err(ParseError::new(0, "expected exactly one tree")),
    }
}

/// Grafts the trees of `f` onto a new root.
pub fn b_plus(f: &Forest) -> Tree {
    Tree::node(f.trees.clone())
}

/// All admissible cuts of `t` except the total cut, as
/// `(pruned forest, remaining trunk)`. The empty cut gives `(1, t)`.
pub fn admissible_cuts(t: &Tree) -> Vec<(Forest, Tree)> {
    // Per child: either cut the edge above it, or recurse into it.
    let mut partial: Vec<(Vec<Tree>, Vec<Tree>)> = vec![(Vec::new(), Vec::new())];
    for child in &t.children {
        let mut options: Vec<(Vec<Tree>, Option<Tree>)> = vec![(vec![child.clone()], None)];
        for (pruned, trunk) in admissible_cuts(child) {
            options.push((pruned.trees, Some(trunk)));
        }
        let mut next = Vec::with_capacity(partial.len() * options.len());
        for (pruned, kept) in &partial {
            for (p, k) in &options {
                let mut pruned = pruned.clone();
                pruned.extend(p.iter().cloned());
                let mut kept = kept.clone();
                kept.extend(k.iter().cloned());
                next.push((pruned, kept));
            }
        }
        partial = next;
    }
    partial
        .into_iter()
        .map(|(pruned, kept)| (Forest::new(pruned), Tree::node(kept)))
        .collect()
}

fn tree_coproduct(t: &Tree) -> LinComb<Tensor<Forest, Forest>> {
    let mut out = LinComb::basis(Tensor(Forest::single(t.clone()), Forest::empty()));
    for (pruned, trunk) in admissible_cuts(t) {
        out.add_term(Tensor(pruned, Forest::single(trunk)), Rational::one());
    }
    out
}

/// Forests of exactly `n` nodes, for `n = 0..=max`.
fn enumerate_forests(max: usize) -> Vec<Vec<Forest>> {
    let mut forests: Vec<Vec<Forest>> = vec![vec![Forest::empty()]];
    let mut trees: Vec<Vec<Tree>> = vec![Vec::new()];
    for n in 1..=max {
        trees.push(forests[n - 1].iter().map(b_plus).collect());
        let mut set = BTreeSet::new();
        for k in 1..=n {
            for t in &trees[k] {
                for f in &forests[n - k] {
                    set.insert(f.union(&Forest::single(t.clone())));
                }
            }
        }
        forests.push(set.into_iter().collect());
    }
    forests
}

/// The rooted-forest bialgebra with basis enumerated up to `max_degree`.
pub struct ForestBialgebra {
    max_degree: usize,
    by_degree: Vec<Vec<Forest>>,
    cache: Mutex<HashMap<Forest, LinComb<Tensor<Forest, Forest>>>>,
}

impl ForestBialgebra {
    pub fn new(max_degree: usize) -> Self {
        Self {
            max_degree,
            by_degree: enumerate_forests(max_degree),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Connected basis elements (single trees) of exactly `n` nodes.
    pub fn trees_of_degree(&self, n: usize) -> Vec<Tree> {
        self.by_degree
            .get(n)
            .into_iter()
            .flatten()
            .filter(|f| f.trees.len() == 1)
            .map(|f| f.trees[0].clone())
            .collect()
    }

    pub fn trees_up_to(&self, max_degree: usize) -> Vec<Tree> {
        (1..=max_degree.min(self.max_degree))
            .flat_map(|n| self.trees_of_degree(n))
            .collect()
    }
}

pub fn forest_bialgebra(max_degree: usize) -> Arc<ForestBialgebra> {
    Arc::new(ForestBialgebra::new(max_degree))
}

impl Coalgebra for ForestBialgebra {
    type Key = Forest;

    fn coproduct(&self, f: &Forest) -> LinComb<Tensor<Forest, Forest>> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(f) {
            return v.clone();
        }
        let mut acc = LinComb::basis(Tensor(Forest::empty(), Forest::empty()));
        for t in &f.trees {
            let dt = tree_coproduct(t);
            let mut next = LinComb::zero();
            for (Tensor(a, b), c) in acc.iter() {
                for (Tensor(p, q), d) in dt.iter() {
                    next.add_term(Tensor(a.union(p), b.union(q)), c * d);
                }
            }
            acc = next;
        }
        self.cache
            .lock()
            .expect("cache lock")
            .insert(f.clone(), acc.clone());
        acc
    }

    fn counit(&self, f: &Forest) -> Rational {
        if f.is_empty() {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    fn degree(&self, f: &Forest) -> usize {
        f.degree()
    }

    fn is_grouplike(&self, f: &Forest) -> bool {
        f.is_empty()
    }

    fn basis_up_to(&self, max_degree: usize) -> Option<Vec<Forest>> {
        Some(
            self.by_degree[..=max_degree.min(self.max_degree)]
                .iter()
                .flatten()
                .cloned()
                .collect(),
        )
    }
}

impl Bialgebra for ForestBialgebra {
    fn mult(&self, a: &Forest, b: &Forest) -> LinComb<Forest> {
        LinComb::basis(a.union(b))
    }

    fn unit_key(&self) -> Forest {
        Forest::empty()
    }
}

/// Values of a toy Feynman rule on connected trees.
#[derive(Clone, Debug, Default)]
pub struct CharacterAssignment {
    values: BTreeMap<Tree, LaurentSeries>,
}

impl CharacterAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns `f(t)` to every tree of `bialg` up to `max_degree`.
    pub fn from_fn(
        bialg: &ForestBialgebra,
        max_degree: usize,
        mut f: impl FnMut(&Tree) -> LaurentSeries,
    ) -> Self {
        let values = bialg
            .trees_up_to(max_degree)
            .into_iter()
            .map(|t| {
                let v = f(&t);
                (t, v)
            })
            .collect();
        Self { values }
    }

    pub fn insert(&mut self, tree: Tree, value: LaurentSeries) {
        self.values.insert(tree, value);
    }

    pub fn get(&self, tree: &Tree) -> Option<&LaurentSeries> {
        self.values.get(tree)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Tree, &LaurentSeries)> {
        self.values.iter()
    }

    /// Reads lines `tree-text : laurent-text`; blank lines and `#` comments
    /// are skipped. Positions in errors are byte offsets into `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::new();
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let start = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| ParseError::new(start, "expected 'tree : series'"))?;
            let shift = |e: ParseError, by: usize| ParseError::new(e.position + by, e.message);
            let tree = parse_tree(lhs).map_err(|e| shift(e, start))?;
            let value = parse_laurent(rhs).map_err(|e| shift(e, start + lhs.len() + 1))?;
            out.insert(tree, value);
        }
        Ok(out)
    }
}

/// Multiplicative extension of `assign` to forests, with `1 ↦ 1`. Every tree
/// up to `max_degree` must be assigned.
pub fn toy_character(
    bialg: &Arc<ForestBialgebra>,
    assign: CharacterAssignment,
    max_degree: usize,
) -> Result<Character<ForestBialgebra, LaurentRing>> {
    for t in bialg.trees_up_to(max_degree) {
        if assign.get(&t).is_none() {
            return Err(Error::MissingAssignment(t.to_string()));
        }
    }
    let ring = Arc::new(LaurentRing::default());
    let r = ring.clone();
    let map = LinMap::from_fn(bialg.clone(), ring, move |f: &Forest| {
        let mut acc = LaurentSeries::one(r.trunc_order);
        for t in f.trees() {
            let v = assign
                .get(t)
                .ok_or_else(|| Error::MissingAssignment(t.to_string()))?;
            acc = acc.mul(v)?;
        }
        Ok(acc)
    });
    Ok(Character::new_unchecked(map))
}
