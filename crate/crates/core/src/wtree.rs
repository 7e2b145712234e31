//! Weighted trees (dual graphs of exceptional divisors) and the calculus of
//! graph discriminants.
//!
//! Vertices are numbered `0..n` and never renumbered; subgraphs are
//! [`VertexSet`]s of the parent tree, so deleting a vertex or a path is a set
//! operation. Arrowheads (intersections with the strict transform of the
//! curve) are stored as a count per vertex.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact::{ceil_and_ufrac, q, LinAlgError, QVector, SymmetricForm, Q};

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("vertex {0} not found")]
    VertexNotFound(VertexId),
    #[error("[{0}, {1}] is not an edge")]
    NotAnEdge(VertexId, VertexId),
    #[error("edge [{0}, {1}] closes a cycle or repeats an edge")]
    NotAForest(VertexId, VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("twig has zero discriminant")]
    ZeroDiscriminant,
    #[error("tree is not unimodular: d = {0}")]
    NonUnimodular(String),
    #[error("vertex list does not form a twig: {0}")]
    NotATwig(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Bitset over the vertices of a parent tree.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    bits: Vec<u64>,
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl VertexSet {
    pub fn empty() -> Self {
        VertexSet::default()
    }

    pub fn full(n: usize) -> Self {
        (0..n).collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.bits.get(v / 64).is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn insert(&mut self, v: VertexId) {
        if self.bits.len() <= v / 64 {
            self.bits.resize(v / 64 + 1, 0);
        }
        self.bits[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: VertexId) {
        if let Some(w) = self.bits.get_mut(v / 64) {
            *w &= !(1 << (v % 64));
        }
        while self.bits.last() == Some(&0) {
            self.bits.pop();
        }
    }

    pub fn without(&self, v: VertexId) -> Self {
        let mut s = self.clone();
        s.remove(v);
        s
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }

    pub fn minus(&self, other: &VertexSet) -> Self {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }
}

impl FromIterator<VertexId> for VertexSet {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        let mut s = VertexSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// A weighted forest with arrowhead counts. Full dual graphs are trees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTree {
    weights: Vec<i64>,
    arrows: Vec<u32>,
    adj: Vec<Vec<VertexId>>,
}

impl WeightedTree {
    pub fn new(weights: Vec<i64>, edges: &[(VertexId, VertexId)], arrows: Vec<u32>) -> Result<Self, TreeError> {
        let n = weights.len();
        if arrows.len() != n {
            return Err(TreeError::VertexNotFound(arrows.len().min(n)));
        }
        let mut adj = vec![Vec::new(); n];
        let mut root: Vec<usize> = (0..n).collect();
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(TreeError::VertexNotFound(v));
                }
            }
            if a == b {
                return Err(TreeError::SelfLoop(a));
            }
            let (ra, rb) = (find(&mut root, a), find(&mut root, b));
            if ra == rb {
                return Err(TreeError::NotAForest(a, b));
            }
            root[ra] = rb;
            adj[a].push(b);
            adj[b].push(a);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(WeightedTree { weights, arrows, adj })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: VertexId) -> i64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn arrows(&self, v: VertexId) -> u32 {
        self.arrows[v]
    }

    pub fn arrow_counts(&self) -> &[u32] {
        &self.arrows
    }

    pub fn total_arrows(&self) -> u32 {
        self.arrows.iter().sum()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    /// Valency in the graph without arrowheads.
    pub fn valency(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Valency counting arrowheads.
    pub fn full_valency(&self, v: VertexId) -> usize {
        self.adj[v].len() + self.arrows[v] as usize
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a < self.len() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.len())
    }

    fn check(&self, v: VertexId) -> Result<(), TreeError> {
        if v < self.len() {
            Ok(())
        } else {
            Err(TreeError::VertexNotFound(v))
        }
    }

    pub fn is_connected(&self) -> bool {
        self.components(&self.all()).len() <= 1
    }

    /// Connected components of the induced subgraph on `set`, each ordered
    /// so that every vertex appears before its parent in a BFS from the
    /// component's smallest vertex.
    fn ordered_components(&self, set: &VertexSet) -> Vec<Vec<VertexId>> {
        let mut seen = VertexSet::empty();
        let mut out = Vec::new();
        for s in set.iter() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut order = vec![s];
            let mut i = 0;
            while i < order.len() {
                let x = order[i];
                for &y in &self.adj[x] {
                    if set.contains(y) && !seen.contains(y) {
                        seen.insert(y);
                        order.push(y);
                    }
                }
                i += 1;
            }
            order.reverse();
            out.push(order);
        }
        out
    }

    /// BFS parent of each vertex of `order` inside the induced subgraph,
    /// for an `order` produced by `ordered_components`.
    fn parents_in(&self, order: &[VertexId]) -> Vec<Option<usize>> {
        let pos: HashMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        order
            .iter()
            .enumerate()
            .map(|(i, &v)| self.adj[v].iter().filter_map(|u| pos.get(u).copied()).find(|&k| k > i))
            .collect()
    }

    /// Pivots of Gaussian elimination on a component listed leaf-first.
    /// Each leaf only updates its parent, so this is linear in the size.
    /// `None` when a pivot vanishes.
    fn tree_pivots(&self, order: &[VertexId], parents: &[Option<usize>]) -> Option<Vec<Q>> {
        let mut diag: Vec<Q> = order.iter().map(|&v| q(self.weights[v])).collect();
        for i in 0..order.len() {
            if diag[i].is_zero() {
                return None;
            }
            if let Some(p) = parents[i] {
                let delta = diag[i].recip();
                diag[p] -= delta;
            }
        }
        Some(diag)
    }

    /// Solves `A x = t` for the intersection matrix `A`.
    pub fn solve(&self, t: &[Q]) -> Result<QVector, LinAlgError> {
        if t.len() != self.len() {
            return Err(LinAlgError::DimensionMismatch {
                form: self.len(),
                vector: t.len(),
            });
        }
        let mut x = vec![Q::zero(); self.len()];
        for order in self.ordered_components(&self.all()) {
            let parents = self.parents_in(&order);
            let Some(diag) = self.tree_pivots(&order, &parents) else {
                let local: Vec<Q> = order.iter().map(|&v| t[v].clone()).collect();
                let sol = self.form_on(&order).solve(&local)?;
                for (k, &v) in order.iter().enumerate() {
                    x[v] = sol[k].clone();
                }
                continue;
            };
            let mut b: Vec<Q> = order.iter().map(|&v| t[v].clone()).collect();
            for i in 0..order.len() {
                if let Some(p) = parents[i] {
                    let carry = &b[i] / &diag[i];
                    b[p] -= carry;
                }
            }
            let mut local = vec![Q::zero(); order.len()];
            for i in (0..order.len()).rev() {
                let up = parents[i].map_or_else(Q::zero, |p| local[p].clone());
                local[i] = (&b[i] - up) / &diag[i];
            }
            for (k, &v) in order.iter().enumerate() {
                x[v] = local[k].clone();
            }
        }
        Ok(x)
    }

    /// `x^T A y`, using only the nonzero entries of `A`.
    pub fn pair(&self, x: &[Q], y: &[Q]) -> Result<Q, LinAlgError> {
        for v in [x, y] {
            if v.len() != self.len() {
                return Err(LinAlgError::DimensionMismatch {
                    form: self.len(),
                    vector: v.len(),
                });
            }
        }
        let mut acc = Q::zero();
        for i in 0..self.len() {
            if !x[i].is_zero() && !y[i].is_zero() {
                acc += q(self.weights[i]) * &x[i] * &y[i];
            }
            for &j in &self.adj[i] {
                if !x[i].is_zero() && !y[j].is_zero() {
                    acc += &x[i] * &y[j];
                }
            }
        }
        Ok(acc)
    }

    /// All vertices, leaves before their parents within each component.
    /// Gaussian elimination in this order produces no fill-in.
    pub fn leaf_first_order(&self) -> Vec<VertexId> {
        self.ordered_components(&self.all()).concat()
    }

    /// Sylvester's criterion on the intersection form, evaluated in leaf-first order.
    pub fn is_negative_definite(&self) -> bool {
        self.form_on(&self.leaf_first_order()).is_negative_definite()
    }

    pub fn components(&self, set: &VertexSet) -> Vec<VertexSet> {
        self.ordered_components(set)
            .into_iter()
            .map(|c| c.into_iter().collect())
            .collect()
    }

    /// Intersection matrix of the induced subgraph on `order`, in that order.
    pub fn form_on(&self, order: &[VertexId]) -> SymmetricForm {
        let mut form = SymmetricForm::zero(order.len());
        for (a, &i) in order.iter().enumerate() {
            form.set(a, a, q(self.weights[i]));
            for (b, &j) in order.iter().enumerate().skip(a + 1) {
                if self.has_edge(i, j) {
                    form.set(a, b, q(1));
                }
            }
        }
        form
    }

    /// Intersection matrix: weights on the diagonal, 1 for each edge.
    pub fn incidence_form(&self) -> SymmetricForm {
        self.form_on(&(0..self.len()).collect::<Vec<_>>())
    }

    /// `d(Γ) = det(-A)`.
    pub fn discriminant(&self) -> Q {
        self.discriminant_of(&self.all())
    }

    /// Discriminant of the induced subforest on `set`: the product of the
    /// component discriminants, with `d(∅) = 1`.
    pub fn discriminant_of(&self, set: &VertexSet) -> Q {
        self.ordered_components(set).iter().fold(Q::one(), |acc, c| {
            let d = match self.tree_pivots(c, &self.parents_in(c)) {
                Some(pivots) => {
                    let prod = pivots.into_iter().fold(Q::one(), |p, x| p * x);
                    if c.len() % 2 == 0 {
                        prod
                    } else {
                        -prod
                    }
                }
                None => self.form_on(c).det_neg(),
            };
            acc * d
        })
    }

    fn distances_from(&self, v: VertexId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.len()];
        dist[v] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Vertices of the unique path from `a` to `b`, endpoints included.
    pub fn path(&self, a: VertexId, b: VertexId) -> Result<Vec<VertexId>, TreeError> {
        self.check(a)?;
        self.check(b)?;
        let dist = self.distances_from(a);
        if dist[b] == usize::MAX {
            return Err(TreeError::VertexNotFound(b));
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = *self.adj[cur]
                .iter()
                .find(|&&y| dist[y] + 1 == dist[cur])
                .expect("bfs predecessor");
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// `∂_v` applied to a forest polynomial.
    pub fn partial(&self, v: VertexId, poly: &ForestPoly) -> Result<ForestPoly, TreeError> {
        self.check(v)?;
        let dist = self.distances_from(v);
        let mut out = ForestPoly::zero();
        for (coef, forest) in &poly.terms {
            for comp in self.components(forest) {
                let closest = comp.iter().min_by_key(|&u| dist[u]).expect("component is non-empty");
                out.add(coef.clone(), forest.without(closest));
            }
        }
        Ok(out)
    }

    /// `d(p)` extended linearly to forest polynomials.
    pub fn evaluate(&self, poly: &ForestPoly) -> Q {
        poly.terms.iter().fold(Q::zero(), |acc, (c, f)| {
            acc + Q::from_integer(c.clone()) * self.discriminant_of(f)
        })
    }

    /// `d_v(Γ) = d(∂_v Γ)`.
    pub fn d_v(&self, v: VertexId) -> Result<Q, TreeError> {
        let p = self.partial(v, &ForestPoly::monomial(self.all()))?;
        Ok(self.evaluate(&p))
    }

    /// `d_vv(Γ) = d(∂_v ∂_v Γ)`.
    pub fn d_vv(&self, v: VertexId) -> Result<Q, TreeError> {
        let p = self.partial(v, &ForestPoly::monomial(self.all()))?;
        let pp = self.partial(v, &p)?;
        Ok(self.evaluate(&pp))
    }

    /// `d_vw(Γ) = d(∂_v ∂_w Γ)`.
    pub fn d_vw(&self, v: VertexId, w: VertexId) -> Result<Q, TreeError> {
        let p = self.partial(w, &ForestPoly::monomial(self.all()))?;
        let pp = self.partial(v, &p)?;
        Ok(self.evaluate(&pp))
    }

    /// The two sides of `Γ` with the link `[v, w]` removed: the part
    /// containing `v` and the part containing `w`.
    pub fn split_at_edge(&self, v: VertexId, w: VertexId) -> Result<(VertexSet, VertexSet), TreeError> {
        self.check(v)?;
        self.check(w)?;
        if !self.has_edge(v, w) {
            return Err(TreeError::NotAnEdge(v, w));
        }
        let side = |start: VertexId, blocked: VertexId| {
            let mut set: VertexSet = [start].into_iter().collect();
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if y != blocked && !set.contains(y) {
                        set.insert(y);
                        stack.push(y);
                    }
                }
            }
            set
        };
        Ok((side(v, w), side(w, v)))
    }

    /// `d(Γ)` through the link formula `d(Γ_1)d(Γ_2) - d_v(Γ_1)d_w(Γ_2)`.
    /// Components of a forest not touching the link contribute a factor.
    pub fn edge_split_discriminant(&self, v: VertexId, w: VertexId) -> Result<Q, TreeError> {
        let (g1, g2) = self.split_at_edge(v, w)?;
        let rest = self.all().minus(&g1).minus(&g2);
        let linked = self.discriminant_of(&g1) * self.discriminant_of(&g2)
            - self.discriminant_of(&g1.without(v)) * self.discriminant_of(&g2.without(w));
        Ok(linked * self.discriminant_of(&rest))
    }

    /// Maximal extremal linear branches that carry no arrowheads. Each twig
    /// runs from the vertex next to the rest of the graph down to its tip.
    pub fn twigs_without_arrows(&self) -> Vec<Twig> {
        let mut out: Vec<Twig> = Vec::new();
        let mut covered = VertexSet::empty();
        for tip in 0..self.len() {
            if self.arrows[tip] > 0 || self.valency(tip) > 1 || covered.contains(tip) {
                continue;
            }
            let mut chain = vec![tip];
            let mut prev = None;
            let mut cur = tip;
            loop {
                let next = self.adj[cur].iter().copied().find(|&u| Some(u) != prev);
                let Some(u) = next else { break };
                if self.arrows[u] > 0 || self.full_valency(u) >= 3 {
                    break;
                }
                chain.push(u);
                prev = Some(cur);
                cur = u;
            }
            for &u in &chain {
                covered.insert(u);
            }
            chain.reverse();
            out.push(Twig { vertices: chain });
        }
        out
    }

    fn check_twig(&self, twig: &Twig) -> Result<(), TreeError> {
        if twig.vertices.is_empty() {
            return Err(TreeError::NotATwig("empty".into()));
        }
        for &v in &twig.vertices {
            self.check(v)?;
        }
        for pair in twig.vertices.windows(2) {
            if !self.has_edge(pair[0], pair[1]) {
                return Err(TreeError::NotATwig(format!("{:?}", twig.vertices)));
            }
        }
        let tip = twig.tip();
        if self.valency(tip) > 1 {
            return Err(TreeError::NotATwig(format!("tip {tip} is not a leaf")));
        }
        if twig
            .vertices
            .iter()
            .any(|&v| v != twig.first() && v != tip && self.valency(v) != 2)
        {
            return Err(TreeError::NotATwig(format!("{:?} is not a chain", twig.vertices)));
        }
        Ok(())
    }

    /// `ind(T) = d(T - tip(T)) / d(T)`.
    pub fn inductance(&self, twig: &Twig) -> Result<Q, TreeError> {
        self.check_twig(twig)?;
        let set = twig.set();
        let d = self.discriminant_of(&set);
        if d.is_zero() {
            return Err(TreeError::ZeroDiscriminant);
        }
        Ok(self.discriminant_of(&set.without(twig.tip())) / d)
    }

    /// `Γ_ij`: the tree with the path from `i` to `j` (endpoints included) removed.
    pub fn path_complement(&self, i: VertexId, j: VertexId) -> Result<VertexSet, TreeError> {
        let path: VertexSet = self.path(i, j)?.into_iter().collect();
        Ok(self.all().minus(&path))
    }

    /// Entries of `A^{-1}` through `b_ij = -d(Γ_ij)`. Only valid when `d(Γ) = 1`.
    pub fn inverse_entries(&self) -> Result<SymmetricForm, TreeError> {
        let d = self.discriminant();
        if !d.is_one() {
            return Err(TreeError::NonUnimodular(crate::exact::fmt_q(&d)));
        }
        let mut memo = Discriminants::new(self);
        let n = self.len();
        let mut b = SymmetricForm::zero(n);
        for i in 0..n {
            for j in i..n {
                let rest = self.path_complement(i, j)?;
                b.set(i, j, -memo.get(&rest));
            }
        }
        Ok(b)
    }

    /// Tip values from the link formulas: with `a = d_T(Γ)/d(T)`, the
    /// ceiling of `a` is `d_v(Γ)` for the tip `v` and `]a[` is `ind(T)`.
    pub fn tip_values(&self, twig: &Twig) -> Result<TipValues, TreeError> {
        self.check_twig(twig)?;
        let d = self.discriminant();
        if !d.is_one() {
            return Err(TreeError::NonUnimodular(crate::exact::fmt_q(&d)));
        }
        let set = twig.set();
        let first = twig.first();
        let branch = self.adj[first]
            .iter()
            .copied()
            .find(|u| !set.contains(*u))
            .ok_or_else(|| TreeError::NotATwig("twig is the whole tree".into()))?;
        let d_twig = self.discriminant_of(&set);
        if d_twig.is_zero() {
            return Err(TreeError::ZeroDiscriminant);
        }
        let tip = twig.tip();
        let d_t_gamma = self.discriminant_of(&self.all().minus(&set).without(branch));
        let d_tip_gamma = self.d_v(tip)?;
        let d_tip_twig = self.discriminant_of(&set.without(tip));
        let link_rhs = &d_tip_gamma * &d_twig - &d * &d_tip_twig;
        let a = &d_t_gamma / &d_twig;
        let (ceil, ufrac) = ceil_and_ufrac(&a);
        Ok(TipValues {
            a,
            ceil,
            ufrac,
            d_tip_gamma,
            d_t_gamma,
            link_rhs,
        })
    }

    /// Line-oriented text dump; see the README for the format.
    pub fn to_text(&self) -> String {
        let mut s = format!("tree {}\n", self.len());
        for v in 0..self.len() {
            s.push_str(&format!("v {} {} {}\n", v + 1, self.weights[v], self.arrows[v]));
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("e {} {}\n", a + 1, b + 1));
        }
        s
    }
}

impl fmt::Display for WeightedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for WeightedTree {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, msg: &str| TreeError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut n = None;
        let mut weights = Vec::new();
        let mut arrows = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
            let num = |k: usize| -> Result<i64, TreeError> {
                toks.get(k)
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| err(line, "expected integer"))
            };
            match toks.first() {
                None => continue,
                Some(&"tree") => {
                    let count = num(1)?;
                    if count < 0 {
                        return Err(err(line, "negative vertex count"));
                    }
                    n = Some(count as usize);
                }
                Some(&"v") => {
                    if num(1)? != weights.len() as i64 + 1 {
                        return Err(err(line, "vertices must be listed in order"));
                    }
                    weights.push(num(2)?);
                    let a = num(3)?;
                    if a < 0 {
                        return Err(err(line, "negative arrow count"));
                    }
                    arrows.push(a as u32);
                }
                Some(&"e") => {
                    let (a, b) = (num(1)?, num(2)?);
                    if a < 1 || b < 1 {
                        return Err(err(line, "vertex ids start at 1"));
                    }
                    edges.push((a as usize - 1, b as usize - 1));
                }
                Some(_) => return Err(err(line, "unknown record")),
            }
        }
        match n {
            Some(n) if n == weights.len() => WeightedTree::new(weights, &edges, arrows),
            Some(_) => Err(err(0, "vertex count does not match header")),
            None => Err(err(0, "missing `tree` header")),
        }
    }
}

/// Extremal linear branch, stored from the vertex adjacent to the rest of
/// the graph to the tip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Twig {
    pub vertices: Vec<VertexId>,
}

impl Twig {
    pub fn first(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn tip(&self) -> VertexId {
        *self.vertices.last().expect("twig is non-empty")
    }

    pub fn set(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TipValues {
    /// `a = d_T(Γ) / d(T)`.
    pub a: Q,
    pub ceil: BigInt,
    pub ufrac: Q,
    /// `d_v(Γ)` for the tip `v`, computed directly.
    pub d_tip_gamma: Q,
    /// `d_T(Γ) = d(Γ - T - v_0)`, computed directly.
    pub d_t_gamma: Q,
    /// `d_v(Γ)d(T) - d(Γ)d_v(T)`.
    pub link_rhs: Q,
}

/// Integer combination of forests; a forest is the product of its components.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForestPoly {
    terms: Vec<(BigInt, VertexSet)>,
}

impl ForestPoly {
    pub fn zero() -> Self {
        ForestPoly::default()
    }

    pub fn monomial(forest: VertexSet) -> Self {
        ForestPoly {
            terms: vec![(BigInt::one(), forest)],
        }
    }

    pub fn add(&mut self, coef: BigInt, forest: VertexSet) {
        if let Some(t) = self.terms.iter_mut().find(|(_, f)| *f == forest) {
            t.0 += coef;
        } else {
            self.terms.push((coef, forest));
        }
        self.terms.retain(|(c, _)| !c.is_zero());
    }

    pub fn terms(&self) -> &[(BigInt, VertexSet)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Memo table of subforest discriminants for one tree.
pub struct Discriminants<'a> {
    tree: &'a WeightedTree,
    memo: HashMap<VertexSet, Q>,
}

impl<'a> Discriminants<'a> {
    pub fn new(tree: &'a WeightedTree) -> Self {
        Discriminants {
            tree,
            memo: HashMap::new(),
        }
    }

    pub fn get(&mut self, set: &VertexSet) -> Q {
        if let Some(d) = self.memo.get(set) {
            return d.clone();
        }
        // Multiplicativity lets components share cache entries.
        let comps = self.tree.components(set);
        let d = if comps.len() == 1 {
            self.tree.discriminant_of(set)
        } else {
            comps.iter().fold(Q::one(), |acc, c| acc * self.get(c))
        };
        self.memo.insert(set.clone(), d.clone());
        d
    }
}

/// True when every arrowless twig has all weights `<= -2`.
pub fn twigs_admissible(tree: &WeightedTree) -> bool {
    tree.twigs_without_arrows()
        .iter()
        .all(|t| t.vertices.iter().all(|&v| tree.weight(v) <= -2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;

    fn cusp() -> WeightedTree {
        WeightedTree::new(vec![-3, -2, -1], &[(0, 2), (1, 2)], vec![0, 0, 1]).unwrap()
    }

    fn chain(weights: &[i64]) -> WeightedTree {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        WeightedTree::new(weights.to_vec(), &edges, vec![0; weights.len()]).unwrap()
    }

    #[test]
    fn incidence_form_examples() {
        assert_eq!(
            chain(&[-2]).incidence_form(),
            SymmetricForm::from_rows(&[vec![-2]]).unwrap()
        );
        assert_eq!(
            chain(&[-3, -1]).incidence_form(),
            SymmetricForm::from_rows(&[vec![-3, 1], vec![1, -1]]).unwrap()
        );
        assert_eq!(
            cusp().incidence_form(),
            SymmetricForm::from_rows(&[vec![-3, 0, 1], vec![0, -2, 1], vec![1, 1, -1]]).unwrap()
        );
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(chain(&[-2]).discriminant(), q(2));
        assert_eq!(cusp().discriminant(), q(1));
        let union = WeightedTree::new(vec![-3, -2], &[], vec![0, 0]).unwrap();
        assert_eq!(union.discriminant(), q(6));
        assert_eq!(union.incidence_form().det_neg(), q(6));
    }

    #[test]
    fn derivative_examples() {
        let single = chain(&[-2]);
        assert_eq!(single.d_v(0).unwrap(), q(1));
        assert_eq!(single.d_vv(0).unwrap(), q(0));
        let vw = chain(&[-2, -3]);
        assert_eq!(vw.d_v(0).unwrap(), q(3));
        assert_eq!(vw.d_v(9), Err(TreeError::VertexNotFound(9)));
    }

    #[test]
    fn edge_split_examples() {
        assert_eq!(chain(&[-2, -2]).edge_split_discriminant(0, 1).unwrap(), q(3));
        assert_eq!(cusp().edge_split_discriminant(0, 2).unwrap(), q(1));
        assert_eq!(chain(&[-2, -3]).edge_split_discriminant(0, 1).unwrap(), q(5));
        assert_eq!(cusp().edge_split_discriminant(0, 1), Err(TreeError::NotAnEdge(0, 1)));
    }

    #[test]
    fn twig_examples() {
        let twigs = cusp().twigs_without_arrows();
        assert_eq!(twigs.len(), 2);
        assert_eq!(twigs[0].vertices, vec![0]);
        assert_eq!(twigs[1].vertices, vec![1]);

        let arrowed = WeightedTree::new(vec![-2, -2, -1], &[(0, 1), (1, 2)], vec![0, 0, 1]).unwrap();
        let twigs = arrowed.twigs_without_arrows();
        assert_eq!(twigs, vec![Twig { vertices: vec![1, 0] }]);

        let star = WeightedTree::new(vec![-1, -2, -2, -2], &[(0, 1), (0, 2), (0, 3)], vec![0, 1, 1, 1]).unwrap();
        assert!(star.twigs_without_arrows().is_empty());
    }

    #[test]
    fn inductance_examples() {
        let t = chain(&[-2]);
        assert_eq!(t.inductance(&Twig { vertices: vec![0] }).unwrap(), qr(1, 2));
        let t = chain(&[-3]);
        assert_eq!(t.inductance(&Twig { vertices: vec![0] }).unwrap(), qr(1, 3));
        let t = chain(&[-2, -3]);
        assert_eq!(t.inductance(&Twig { vertices: vec![0, 1] }).unwrap(), qr(2, 5));
        let t = chain(&[-1, -1]);
        assert_eq!(
            t.inductance(&Twig { vertices: vec![0, 1] }),
            Err(TreeError::ZeroDiscriminant)
        );
    }

    #[test]
    fn inverse_entries_examples() {
        let g = cusp();
        let b = g.inverse_entries().unwrap();
        assert_eq!(b.get(2, 2), &q(-6));
        assert_eq!(b.get(0, 2), &q(-2));
        assert_eq!(&b, &g.incidence_form().inverse().unwrap());
        assert!(matches!(
            chain(&[-2]).inverse_entries(),
            Err(TreeError::NonUnimodular(_))
        ));
    }

    #[test]
    fn tip_value_examples() {
        let g = cusp();
        for (v, ind) in [(1, qr(1, 2)), (0, qr(1, 3))] {
            let twig = Twig { vertices: vec![v] };
            let tv = g.tip_values(&twig).unwrap();
            assert_eq!(tv.ufrac, ind);
            assert_eq!(Q::from_integer(tv.ceil.clone()), tv.d_tip_gamma);
            assert_eq!(Q::from_integer(tv.ceil.clone()) - &tv.ufrac, tv.a);
            assert_eq!(tv.d_t_gamma, tv.link_rhs);
        }
    }

    #[test]
    fn rejects_cycles_and_bad_vertices() {
        assert_eq!(
            WeightedTree::new(vec![-2; 3], &[(0, 1), (1, 2), (2, 0)], vec![0; 3]),
            Err(TreeError::NotAForest(2, 0))
        );
        assert_eq!(
            WeightedTree::new(vec![-2], &[(0, 1)], vec![0]),
            Err(TreeError::VertexNotFound(1))
        );
    }

    #[test]
    fn text_round_trip() {
        let g = cusp();
        let text = g.to_text();
        assert_eq!(text, "tree 3\nv 1 -3 0\nv 2 -2 0\nv 3 -1 1\ne 1 3\ne 2 3\n");
        assert_eq!(text.parse::<WeightedTree>().unwrap(), g);
        assert!("v 1 -2 0\n".parse::<WeightedTree>().is_err());
        let commented = "tree 2  # header\nv 1 -2 0\nv 2 -1 1 # arrow\ne 1 2\n";
        assert_eq!(commented.parse::<WeightedTree>().unwrap().weights(), &[-2, -1]);
    }
}
