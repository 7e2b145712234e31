//! Minimal embedded resolution of a plane curve germ: infinitely near
//! points, their proximities and multiplicities, and the dual graph of the
//! exceptional divisor with arrowheads for the branches of the curve.
//!
//! Points are numbered `0..n` in blow-up order; exceptional curve `E_j`
//! (vertex `j` of the dual graph) is the one created by blowing up point `j`.

use num_traits::Zero;
use thiserror::Error;

use crate::check::{first_violation, IdentityCheck};
use crate::exact::{q, QVector, Q};
use crate::puiseux::{self, CharSequence, PuiseuxError};
use crate::wtree::{TreeError, VertexId, VertexSet, WeightedTree};
use crate::zariski::LocalDecomposition;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error(transparent)]
    Sequence(#[from] PuiseuxError),
    #[error("invalid proximity structure: {0}")]
    InvalidProximity(String),
    #[error("total transform is not SNC: E{}·E{} = {value}", .i + 1, .j + 1)]
    NotSnc { i: usize, j: usize, value: i64 },
    #[error("inconsistent proximity data: {0}")]
    Inconsistent(String),
    #[error("resolution is not minimal: E{} can be contracted", .0 + 1)]
    NotMinimal(VertexId),
    #[error("{equation} violated: {lhs} != {rhs}")]
    IdentityViolation {
        equation: &'static str,
        lhs: String,
        rhs: String,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl ResolutionError {
    fn violation(c: &IdentityCheck) -> Self {
        ResolutionError::IdentityViolation {
            equation: c.name,
            lhs: crate::exact::fmt_q(&c.lhs),
            rhs: crate::exact::fmt_q(&c.rhs),
        }
    }
}

/// Proximity structure of a cluster of infinitely near points.
///
/// `proximate[j]` lists the earlier points that point `j` is proximate to
/// (lies on the strict transform of their exceptional curve). The largest
/// entry is the point `j` was blown up from. `exits[j]` counts the branches
/// whose strict transforms leave through a free point of `E_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProximityMatrix {
    proximate: Vec<Vec<usize>>,
    exits: Vec<u32>,
}

impl ProximityMatrix {
    pub fn new(mut proximate: Vec<Vec<usize>>, exits: Vec<u32>) -> Result<Self, ResolutionError> {
        let bad = |msg: String| Err(ResolutionError::InvalidProximity(msg));
        let n = proximate.len();
        if n == 0 {
            return bad("no blow-ups".into());
        }
        if exits.len() != n {
            return bad(format!("{} exit counts for {n} points", exits.len()));
        }
        for (j, row) in proximate.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if j == 0 && !row.is_empty() {
                return bad("the first point cannot be proximate to anything".into());
            }
            if j > 0 && row.is_empty() {
                return bad(format!("point {} must be proximate to an earlier point", j + 1));
            }
            if row.len() > 2 {
                return bad(format!("point {} is proximate to more than two points", j + 1));
            }
            if row.iter().any(|&i| i >= j) {
                return bad(format!("point {} is proximate to a later point", j + 1));
            }
        }
        for j in 1..n {
            let parent = *proximate[j].last().unwrap();
            if let [other, _] = proximate[j][..] {
                if !proximate[parent].contains(&other) {
                    return bad(format!(
                        "point {} lies on E{} but E{} does not pass through point {}",
                        j + 1,
                        other + 1,
                        other + 1,
                        parent + 1
                    ));
                }
                let clash = (1..j).find(|&k| proximate[k].last() == Some(&parent) && proximate[k].contains(&other));
                if let Some(k) = clash {
                    return bad(format!(
                        "points {} and {} both sit at E{} ∩ E{}",
                        k + 1,
                        j + 1,
                        other + 1,
                        parent + 1
                    ));
                }
            }
        }
        Ok(ProximityMatrix { proximate, exits })
    }

    /// Proximity structure of an irreducible branch with the given
    /// multiplicity sequence: point `i` is proximate to the shortest run of
    /// following points whose multiplicities add up to `m_i`.
    pub fn from_branch_multiplicities(ms: &[u64]) -> Result<Self, ResolutionError> {
        let n = ms.len();
        let mut proximate = vec![Vec::new(); n];
        for i in 0..n.saturating_sub(1) {
            let mut sum = 0;
            let mut j = i + 1;
            while sum < ms[i] {
                if j >= n {
                    return Err(ResolutionError::Inconsistent(format!(
                        "multiplicity {} at point {} exceeds what follows",
                        ms[i],
                        i + 1
                    )));
                }
                sum += ms[j];
                proximate[j].push(i);
                j += 1;
            }
            if sum != ms[i] {
                return Err(ResolutionError::Inconsistent(format!(
                    "proximity equality fails at point {}",
                    i + 1
                )));
            }
        }
        let mut exits = vec![0; n];
        exits[n - 1] = 1;
        ProximityMatrix::new(proximate, exits)
    }

    pub fn n(&self) -> usize {
        self.proximate.len()
    }

    pub fn branches(&self) -> u32 {
        self.exits.iter().sum()
    }

    pub fn proximate(&self, j: usize) -> &[usize] {
        &self.proximate[j]
    }

    pub fn exits(&self) -> &[u32] {
        &self.exits
    }

    /// `1` iff point `j` is proximate to point `i`.
    pub fn entry(&self, j: usize, i: usize) -> u8 {
        u8::from(self.proximate[j].contains(&i))
    }

    /// Blow-up `j` is subdivisional when its center lies on two exceptional
    /// curves; the first blow-up is counted as subdivisional.
    pub fn is_subdivisional(&self, j: usize) -> bool {
        j == 0 || self.proximate[j].len() == 2
    }
}

/// Numerical bookkeeping of a germ's resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermNumbers {
    pub multiplicities: Vec<u64>,
    pub branches: u64,
    pub omega: u64,
    pub eta: u64,
    pub delta: u64,
    pub mu: u64,
}

impl GermNumbers {
    /// Derives `η`, `δ`, `μ` from the multiplicity sequence, the number of
    /// subdivisional blow-ups and the number of branches.
    pub fn from_parts(multiplicities: Vec<u64>, omega: u64, branches: u64) -> Result<Self, ResolutionError> {
        if multiplicities.contains(&0) {
            return Err(ResolutionError::Inconsistent("zero multiplicity".into()));
        }
        let two_delta: u64 = multiplicities.iter().map(|m| m * (m - 1)).sum();
        if !two_delta.is_multiple_of(2) {
            return Err(ResolutionError::Inconsistent("Σ m(m-1) is odd".into()));
        }
        if two_delta + 1 < branches {
            return Err(ResolutionError::Inconsistent(format!(
                "Σ m(m-1) = {two_delta} is too small for {branches} branches"
            )));
        }
        let eta = multiplicities.iter().map(|m| m - 1).sum();
        Ok(GermNumbers {
            mu: two_delta + 1 - branches,
            delta: two_delta / 2,
            eta,
            omega,
            branches,
            multiplicities,
        })
    }

    pub fn m(&self) -> u64 {
        self.multiplicities.first().copied().unwrap_or(1)
    }

    pub fn n(&self) -> usize {
        self.multiplicities.len()
    }

    pub fn sum_m(&self) -> u64 {
        self.multiplicities.iter().sum()
    }

    pub fn sum_m2(&self) -> u64 {
        self.multiplicities.iter().map(|m| m * m).sum()
    }
}

/// Multiplicity sequence with an explicit subdivisional/sprouting tag per
/// blow-up. Enough for every number in [`GermNumbers`], not for a dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaggedMultiplicities {
    pub multiplicities: Vec<u64>,
    pub subdivisional: Vec<bool>,
    pub branches: u64,
}

impl TaggedMultiplicities {
    pub fn numbers(&self) -> Result<GermNumbers, ResolutionError> {
        if self.multiplicities.len() != self.subdivisional.len() {
            return Err(ResolutionError::Inconsistent(format!(
                "{} multiplicities but {} tags",
                self.multiplicities.len(),
                self.subdivisional.len()
            )));
        }
        if self.multiplicities.is_empty() || self.branches == 0 {
            return Err(ResolutionError::Inconsistent("empty germ".into()));
        }
        if !self.subdivisional[0] {
            return Err(ResolutionError::Inconsistent(
                "the first blow-up is counted as subdivisional".into(),
            ));
        }
        let omega = self.subdivisional.iter().filter(|&&s| s).count() as u64;
        GermNumbers::from_parts(self.multiplicities.clone(), omega, self.branches)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermResolution {
    pub numbers: GermNumbers,
    pub subdivisional: Vec<bool>,
    pub dual_graph: WeightedTree,
}

impl GermResolution {
    pub fn m(&self) -> u64 {
        self.numbers.m()
    }

    pub fn n(&self) -> usize {
        self.numbers.n()
    }

    pub fn mu(&self) -> u64 {
        self.numbers.mu
    }

    pub fn branches(&self) -> u64 {
        self.numbers.branches
    }

    /// Structural invariants: `μ + r - 1 = Σ m(m-1)`, `d(Γ_E) = 1`,
    /// negative definiteness, and one arrowhead per branch.
    pub fn verify(&self) -> Result<(), ResolutionError> {
        let g = &self.dual_graph;
        let two_delta: u64 = self.numbers.multiplicities.iter().map(|m| m * (m - 1)).sum();
        let checks = [
            IdentityCheck::new(
                "μ + r - 1 = Σ m_j(m_j - 1)",
                q((self.numbers.mu + self.numbers.branches) as i64 - 1),
                q(two_delta as i64),
            ),
            IdentityCheck::new("d(Γ_E) = 1", g.discriminant(), q(1)),
            IdentityCheck::new(
                "arrowheads = r",
                q(g.total_arrows() as i64),
                q(self.numbers.branches as i64),
            ),
        ];
        if let Some(c) = first_violation(&checks) {
            return Err(ResolutionError::violation(c));
        }
        if !g.is_negative_definite() {
            return Err(ResolutionError::IdentityViolation {
                equation: "negative definiteness",
                lhs: "indefinite".into(),
                rhs: "negative definite".into(),
            });
        }
        Ok(())
    }
}

/// Vertex sets of the comb `Γ_{E,C}` of an irreducible germ, one entry per
/// characteristic pair. `q[0]` is `None`: the chain `Q_i` is only defined
/// between two consecutive nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombLayout {
    pub nodes: Vec<VertexId>,
    pub left: Vec<VertexSet>,
    pub down: Vec<VertexSet>,
    pub right: Vec<VertexSet>,
    pub between: Vec<Option<VertexSet>>,
}

impl CombLayout {
    fn from_graph(g: &WeightedTree, h: usize) -> Result<Self, ResolutionError> {
        let arrow = (0..g.len())
            .find(|&v| g.arrows(v) > 0)
            .ok_or_else(|| ResolutionError::Inconsistent("no arrowhead".into()))?;
        let path = g.path(0, arrow)?;
        let nodes: Vec<VertexId> = path.iter().copied().filter(|&v| g.full_valency(v) >= 3).collect();
        let all_nodes = (0..g.len()).filter(|&v| g.full_valency(v) >= 3).count();
        if nodes.len() != h || all_nodes != h || nodes.last() != Some(&arrow) {
            return Err(ResolutionError::Inconsistent(format!(
                "dual graph is not a comb with {h} teeth"
            )));
        }
        let mut layout = CombLayout {
            nodes: nodes.clone(),
            left: Vec::new(),
            down: Vec::new(),
            right: Vec::new(),
            between: Vec::new(),
        };
        for (i, &node) in nodes.iter().enumerate() {
            let comps = g.components(&g.all().without(node));
            let next = nodes.get(i + 1);
            let (mut left, mut right, mut down) = (None, VertexSet::empty(), Vec::new());
            for c in comps {
                if c.contains(0) {
                    left = Some(c);
                } else if next.is_some_and(|&v| c.contains(v)) {
                    right = c;
                } else {
                    down.push(c);
                }
            }
            let Some(left) = left else {
                return Err(ResolutionError::Inconsistent(format!(
                    "node E{} has no left side",
                    node + 1
                )));
            };
            if down.len() != 1 {
                return Err(ResolutionError::Inconsistent(format!(
                    "node E{} has {} teeth",
                    node + 1,
                    down.len()
                )));
            }
            layout.left.push(left);
            layout.down.push(down.pop().unwrap());
            layout.right.push(right);
            layout.between.push(if i == 0 {
                None
            } else {
                let p = g.path(nodes[i - 1], node)?;
                Some(p[1..p.len() - 1].iter().copied().collect())
            });
        }
        Ok(layout)
    }
}

fn numbers_and_tags(
    p: &ProximityMatrix,
    multiplicities: Vec<u64>,
) -> Result<(GermNumbers, Vec<bool>), ResolutionError> {
    let subdivisional: Vec<bool> = (0..p.n()).map(|j| p.is_subdivisional(j)).collect();
    let omega = subdivisional.iter().filter(|&&s| s).count() as u64;
    let numbers = GermNumbers::from_parts(multiplicities, omega, p.branches() as u64)?;
    Ok((numbers, subdivisional))
}

fn check_minimal(g: &WeightedTree) -> Result<(), ResolutionError> {
    // A (-1)-curve meeting at most two other components of the total
    // transform can be blown down, unless it carries two branches: then
    // blowing down would make the strict transform singular again.
    match (0..g.len()).find(|&v| g.weight(v) == -1 && g.full_valency(v) <= 2 && g.arrows(v) <= 1) {
        Some(v) => Err(ResolutionError::NotMinimal(v)),
        None => Ok(()),
    }
}

/// Resolution of a germ given by its proximity structure. The intersection
/// matrix of the strict transforms of the exceptional curves is `-P P^T`
/// where `P` has ones on the diagonal and `-1` at `(i, j)` when point `j` is
/// proximate to point `i`.
pub fn resolve_proximity(p: &ProximityMatrix) -> Result<GermResolution, ResolutionError> {
    let n = p.n();
    let mut encoding = vec![vec![0i64; n]; n];
    for (i, row) in encoding.iter_mut().enumerate() {
        row[i] = 1;
    }
    #[allow(clippy::needless_range_loop)]
    for j in 0..n {
        for &i in p.proximate(j) {
            encoding[i][j] = -1;
        }
    }

    // Strict transform C' = C* - Σ m_j E_j*, so C'·E_i = m_i - Σ_{j prox i} m_j.
    let mut multiplicities = vec![0i64; n];
    for i in (0..n).rev() {
        multiplicities[i] = p.exits()[i] as i64
            + (i + 1..n)
                .filter(|&j| p.entry(j, i) == 1)
                .map(|j| multiplicities[j])
                .sum::<i64>();
        if multiplicities[i] <= 0 {
            return Err(ResolutionError::Inconsistent(format!(
                "point {} is not on the curve",
                i + 1
            )));
        }
    }

    let mut weights = vec![0; n];
    let mut edges = Vec::new();
    for i in 0..n {
        for k in i..n {
            let value: i64 = -(0..n).map(|j| encoding[i][j] * encoding[k][j]).sum::<i64>();
            if i == k {
                weights[i] = value;
            } else if value == 1 {
                edges.push((i, k));
            } else if value != 0 {
                return Err(ResolutionError::NotSnc { i, j: k, value });
            }
        }
    }
    let graph = WeightedTree::new(weights, &edges, p.exits().to_vec())?;
    if !graph.is_connected() {
        return Err(ResolutionError::Inconsistent(
            "exceptional divisor is disconnected".into(),
        ));
    }
    check_minimal(&graph)?;
    let (numbers, subdivisional) = numbers_and_tags(p, multiplicities.into_iter().map(|m| m as u64).collect())?;
    Ok(GermResolution {
        numbers,
        subdivisional,
        dual_graph: graph,
    })
}

/// Proximity structure of the minimal embedded resolution of an irreducible germ.
pub fn irreducible_proximity(c: &CharSequence) -> Result<ProximityMatrix, ResolutionError> {
    let ms = puiseux::multiplicity_sequence(c)?;
    ProximityMatrix::from_branch_multiplicities(&ms)
}

/// Resolution of an irreducible germ, built by replaying the blow-ups on
/// the dual graph: a free point on `E_i` adds a `(-1)`-vertex linked to `E_i`;
/// a satellite point `E_i ∩ E_k` replaces that link by a `(-1)`-vertex
/// linked to both. Each blow-up lowers the weights of the curves through
/// its center by one.
pub fn resolve_irreducible(c: &CharSequence) -> Result<(GermResolution, CombLayout), ResolutionError> {
    let ms = puiseux::multiplicity_sequence(c)?;
    let prox = ProximityMatrix::from_branch_multiplicities(&ms)?;
    let n = ms.len();
    let mut weights = Vec::with_capacity(n);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for j in 0..n {
        weights.push(-1);
        let through = prox.proximate(j);
        for &i in through {
            weights[i] -= 1;
        }
        match *through {
            [] => {}
            [i] => edges.push((i, j)),
            [a, b] => {
                edges.retain(|&e| e != (a, b));
                edges.push((a, j));
                edges.push((b, j));
            }
            _ => unreachable!("at most two proximities"),
        }
    }
    let mut arrows = vec![0; n];
    arrows[n - 1] = 1;
    let graph = WeightedTree::new(weights, &edges, arrows)?;
    check_minimal(&graph)?;
    let (numbers, subdivisional) = numbers_and_tags(&prox, ms)?;
    let resolution = GermResolution {
        numbers,
        subdivisional,
        dual_graph: graph,
    };

    let data = puiseux::derive_data(c)?;
    let layout = CombLayout::from_graph(&resolution.dual_graph, data.h)?;
    let minus_one: Vec<_> = (0..n).filter(|&v| resolution.dual_graph.weight(v) == -1).collect();
    if minus_one != [n - 1] {
        return Err(ResolutionError::Inconsistent(format!(
            "expected a single (-1)-vertex carrying the arrow, found {minus_one:?}"
        )));
    }
    if let Some(c) = first_violation(&comb_checks(&resolution.dual_graph, &layout, &data)) {
        return Err(ResolutionError::violation(c));
    }
    Ok((resolution, layout))
}

/// Discriminants of the comb's pieces against `r_i/d_{i+1}`, `d_i/d_{i+1}`,
/// `1` and `q_i/d_{i+1}`.
pub fn comb_checks(g: &WeightedTree, layout: &CombLayout, data: &puiseux::PuiseuxData) -> Vec<IdentityCheck> {
    let ratio = |a: u64, b: u64| Q::new((a as i64).into(), (b as i64).into());
    let mut out = Vec::new();
    for i in 0..data.h {
        let next = data.d[i + 1];
        out.push(IdentityCheck::new(
            "d(R_i) = r_i/d_{i+1}",
            g.discriminant_of(&layout.left[i]),
            ratio(data.r[i], next),
        ));
        out.push(IdentityCheck::new(
            "d(D_i) = d_i/d_{i+1}",
            g.discriminant_of(&layout.down[i]),
            ratio(data.d[i], next),
        ));
        out.push(IdentityCheck::new(
            "d(S_i) = 1",
            g.discriminant_of(&layout.right[i]),
            q(1),
        ));
        if let Some(between) = &layout.between[i] {
            out.push(IdentityCheck::new(
                "d(Q_i) = q_i/d_{i+1}",
                g.discriminant_of(between),
                ratio(data.q[i], next),
            ));
        }
    }
    out
}

/// The bookkeeping identities relating the reduced exceptional divisor `E`,
/// the projections `K_E`, `D'_E` and the resolution numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupIdentities {
    pub omega: u64,
    pub eta: u64,
    pub n: usize,
    pub r: u64,
    pub delta: u64,
    pub checks: Vec<IdentityCheck>,
}

pub fn blowup_identities(
    numbers: &GermNumbers,
    graph: &WeightedTree,
    dec: &LocalDecomposition,
) -> Result<BlowupIdentities, ResolutionError> {
    let pair = |x: &[Q], y: &[Q]| graph.pair(x, y).expect("vectors match the dual graph");
    let e: QVector = vec![q(1); graph.len()];
    let k_dp: QVector = dec.k.iter().zip(&dec.dp).map(|(a, b)| a + b).collect();
    let num = |v: u64| q(v as i64);
    let sum_m2 = numbers.sum_m2();
    let checks = vec![
        IdentityCheck::new("-E^2 = ω", -pair(&e, &e), num(numbers.omega)),
        IdentityCheck::new("E·K_E = ω - 2", pair(&e, &dec.k), num(numbers.omega) - q(2)),
        IdentityCheck::new("E^2 + E·K_E = -2", pair(&e, &e) + pair(&e, &dec.k), q(-2)),
        IdentityCheck::new("-K_E^2 = n", -pair(&dec.k, &dec.k), num(numbers.n() as u64)),
        IdentityCheck::new("E·D'_E = r", pair(&e, &dec.dp), num(numbers.branches)),
        IdentityCheck::new("K_E·D'_E = Σ m_j", pair(&dec.k, &dec.dp), num(numbers.sum_m())),
        IdentityCheck::new("K_E(K_E + D'_E) = η", pair(&dec.k, &k_dp), num(numbers.eta)),
        IdentityCheck::new("-D'_E^2 = Σ m_j^2", -pair(&dec.dp, &dec.dp), num(sum_m2)),
        IdentityCheck::new("-D'_E(K_E + D'_E) = 2δ", -pair(&dec.dp, &k_dp), num(2 * numbers.delta)),
        IdentityCheck::new(
            "μ + (K_E + D~_E)^2 = (η - 1) + (ω - 1) + (r - 1)",
            num(numbers.mu) + &dec.kdt2,
            q(numbers.eta as i64 + numbers.omega as i64 + numbers.branches as i64 - 3),
        ),
    ];
    if let Some(c) = first_violation(&checks) {
        return Err(ResolutionError::violation(c));
    }
    debug_assert!(checks.iter().all(|c| !c.lhs.is_zero() || c.rhs.is_zero()));
    Ok(BlowupIdentities {
        omega: numbers.omega,
        eta: numbers.eta,
        n: numbers.n(),
        r: numbers.branches,
        delta: numbers.delta,
        checks,
    })
}
