//! Seeded randomized property suites run by `verify`.
//!
//! Each suite draws `count` cases from a ChaCha generator seeded with
//! `seed`, so a run is reproducible from its arguments alone. Failures keep
//! a textual reproducer; the smallest one is reported.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::cli::parse::proximity_text;
use crate::cli::report::VERIFY_SCHEMA;
use crate::exact::{ceil_and_ufrac, fmt_q, q, qr, Q};
use crate::generate;
use crate::inequalities::{self, analyze_germ, GermAnalysis, GermInput};
use crate::puiseux::CharSequence;
use crate::resolution::{self, ProximityMatrix};
use crate::wtree::WeightedTree;

pub const SUITES: [&str; 7] = ["prop1", "lemma2", "prop3", "lemma4", "lemma5", "claim", "sharpness"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub case: usize,
    /// Ordering key for picking the smallest reproducer.
    pub size: usize,
    pub reproducer: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub count: usize,
    pub checks: usize,
    pub failures: Vec<Failure>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    fn new(suite: &str, seed: u64, count: usize) -> Self {
        SuiteOutcome {
            suite: suite.to_string(),
            seed,
            count,
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn smallest_failure(&self) -> Option<&Failure> {
        self.failures.iter().min_by_key(|f| (f.size, f.case))
    }

    fn check(
        &mut self,
        ok: bool,
        case: usize,
        size: usize,
        repro: impl FnOnce() -> String,
        msg: impl FnOnce() -> String,
    ) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure {
                case,
                size,
                reproducer: repro(),
                message: msg(),
            });
        }
    }

    pub fn to_json(&self) -> Value {
        let smallest = self.smallest_failure().map_or(
            Value::Null,
            |f| json!({"case": f.case, "reproducer": f.reproducer, "message": f.message}),
        );
        json!({
            "schema": VERIFY_SCHEMA,
            "suite": self.suite,
            "seed": self.seed,
            "count": self.count,
            "checks": self.checks,
            "failures": self.failures.len(),
            "passed": self.passed(),
            "smallest_failure": smallest,
            "notes": self.notes,
        })
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {} (seed {}, count {}): {} checks, {} failures",
            self.suite,
            self.seed,
            self.count,
            self.checks,
            self.failures.len()
        )?;
        for n in &self.notes {
            writeln!(f, "  {n}")?;
        }
        match self.smallest_failure() {
            None => writeln!(f, "  pass"),
            Some(fail) => {
                writeln!(f, "  FAIL at case {}: {}", fail.case, fail.message)?;
                writeln!(f, "  smallest reproducer:")?;
                for line in fail.reproducer.lines() {
                    writeln!(f, "    {line}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownSuite(pub String);

impl fmt::Display for UnknownSuite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown suite {:?}; available: {}", self.0, SUITES.join(", "))
    }
}

pub fn run_suite(name: &str, seed: u64, count: usize) -> Result<SuiteOutcome, UnknownSuite> {
    Ok(match name {
        "prop1" => tree_identities(seed, count),
        "lemma2" => inverse_entries(seed, count),
        "prop3" => closed_forms(seed, count),
        "lemma4" => blowup_identities(seed, count),
        "lemma5" => cusp_negative_part(seed, count),
        "claim" => fractional_parts(seed, count),
        "sharpness" => sharpness(seed, count),
        other => return Err(UnknownSuite(other.to_string())),
    })
}

fn chain(weights: Vec<i64>) -> WeightedTree {
    let n = weights.len();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    WeightedTree::new(weights, &edges, vec![0; n]).expect("a chain is a tree")
}

/// Sequences drawn for the irreducible suites: at most three pairs,
/// multiplicity at most 20.
pub fn suite_sequences(seed: u64, count: usize) -> Vec<CharSequence> {
    let mut rng = generate::rng(seed);
    (0..count)
        .map(|_| generate::random_char_sequence(&mut rng, 3, 20))
        .collect()
}

/// Proximity structures with at most 12 blow-ups.
pub fn suite_proximities(seed: u64, count: usize) -> Vec<ProximityMatrix> {
    let mut rng = generate::rng(seed);
    (0..count).map(|_| generate::random_proximity(&mut rng, 12)).collect()
}

/// Vertex reconstruction and link formulas on random trees, the chain
/// identity on random chains, and the tip values of twigs on resolution
/// graphs.
pub fn tree_identities(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("prop1", seed, count);
    let mut rng = generate::rng(seed);
    for case in 0..count {
        let g = generate::random_tree(&mut rng, 9);
        let d = g.discriminant();
        let repro = || g.to_text();
        for v in 0..g.len() {
            let rhs = -q(g.weight(v)) * g.d_v(v).unwrap() - g.d_vv(v).unwrap();
            out.check(rhs == d, case, g.len(), repro, || {
                format!(
                    "d = -a(v)d_v - d_vv fails at vertex {}: {} vs {}",
                    v + 1,
                    fmt_q(&d),
                    fmt_q(&rhs)
                )
            });
        }
        for (a, b) in g.edges() {
            let split = g.edge_split_discriminant(a, b).unwrap();
            out.check(split == d, case, g.len(), repro, || {
                format!(
                    "link formula fails at [{}, {}]: {} vs {}",
                    a + 1,
                    b + 1,
                    fmt_q(&split),
                    fmt_q(&d)
                )
            });
        }

        let len = rng.gen_range(1..=9);
        let c = chain((0..len).map(|_| rng.gen_range(-10..=-1)).collect());
        let (v, w) = (0, len - 1);
        let lhs = c.d_v(v).unwrap() * c.d_v(w).unwrap() - c.discriminant() * c.d_vw(v, w).unwrap();
        out.check(
            lhs == q(1),
            case,
            len,
            || c.to_text(),
            || format!("d_v d_w - d d_vw = {} on a chain", fmt_q(&lhs)),
        );

        let p = generate::random_proximity(&mut rng, 12);
        let res = match resolution::resolve_proximity(&p) {
            Ok(r) => r,
            Err(e) => {
                out.check(false, case, p.n(), || proximity_text(&p), || e.to_string());
                continue;
            }
        };
        let g = &res.dual_graph;
        for twig in g.twigs_without_arrows() {
            let ok = match (g.tip_values(&twig), g.inductance(&twig)) {
                (Ok(tv), Ok(ind)) => {
                    let (c, u) = ceil_and_ufrac(&tv.a);
                    tv.ufrac == ind
                        && u == ind
                        && Q::from_integer(c) == tv.d_tip_gamma
                        && tv.d_t_gamma == tv.link_rhs
                        && ind > Q::from_integer(0.into())
                        && ind < q(1)
                }
                _ => false,
            };
            out.check(
                ok,
                case,
                p.n(),
                || proximity_text(&p),
                || format!("tip values disagree on the twig at E{}", twig.first() + 1),
            );
        }
    }
    out
}

/// Closed-form inverse entries against exact inversion.
pub fn inverse_entries(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("lemma2", seed, count);
    let mut max_n = 0;
    for (case, p) in suite_proximities(seed, count).into_iter().enumerate() {
        let repro = || proximity_text(&p);
        let res = match resolution::resolve_proximity(&p) {
            Ok(r) => r,
            Err(e) => {
                out.check(false, case, p.n(), repro, || e.to_string());
                continue;
            }
        };
        let g = &res.dual_graph;
        max_n = max_n.max(g.len());
        let ok = match (g.inverse_entries(), g.incidence_form().inverse()) {
            (Ok(b), Ok(inv)) => b == inv,
            _ => false,
        };
        out.check(ok, case, p.n(), repro, || {
            "b_ij = -d(Γ_ij) differs from the inverse".into()
        });
    }
    out.notes.push(format!("largest dual graph: {max_n} vertices"));
    out
}

fn germ_or_fail(
    out: &mut SuiteOutcome,
    case: usize,
    size: usize,
    input: GermInput,
    repro: String,
) -> Option<GermAnalysis> {
    match analyze_germ(&input) {
        Ok(a) => Some(a),
        Err(e) => {
            out.check(false, case, size, || repro, || e.to_string());
            None
        }
    }
}

fn seq_size(c: &CharSequence) -> usize {
    c.exponents().last().copied().unwrap_or(0) as usize
}

/// Closed forms against the graph computation, comb discriminants, and the
/// two resolution pipelines, on random irreducible germs.
pub fn closed_forms(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("prop3", seed, count);
    let mut max_n = 0;
    for (case, c) in suite_sequences(seed, count).into_iter().enumerate() {
        let size = seq_size(&c);
        let Some(a) = germ_or_fail(&mut out, case, size, GermInput::Puiseux(c.clone()), c.to_string()) else {
            continue;
        };
        let (cf, dec) = (a.closed.as_ref().unwrap(), a.decomposition.as_ref().unwrap());
        let same = cf.mu == q(a.mu() as i64) && cf.h2 == dec.h2 && cf.n2 == dec.n2 && cf.kdt2 == dec.kdt2;
        out.check(
            same,
            case,
            size,
            || c.to_string(),
            || "closed forms differ from the graph values".into(),
        );
        let res = a.resolution.as_ref().unwrap();
        max_n = max_n.max(res.dual_graph.len());
        let comb = resolution::comb_checks(&res.dual_graph, a.layout.as_ref().unwrap(), a.puiseux.as_ref().unwrap());
        out.check(
            comb.iter().all(|x| x.holds()),
            case,
            size,
            || c.to_string(),
            || "comb subgraph discriminants are wrong".into(),
        );
    }
    out.notes.push(format!("largest dual graph: {max_n} vertices"));
    out
}

/// Resolution bookkeeping identities on the node, the tacnode, and random
/// proximity germs.
pub fn blowup_identities(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("lemma4", seed, count);
    let node = ProximityMatrix::new(vec![vec![]], vec![2]).expect("node");
    let tacnode = ProximityMatrix::new(vec![vec![], vec![0]], vec![0, 2]).expect("tacnode");
    let fixed = [node, tacnode];
    let mut multi = 0;
    for (case, p) in fixed.into_iter().chain(suite_proximities(seed, count)).enumerate() {
        let size = p.n();
        let repro = proximity_text(&p);
        multi += usize::from(p.branches() > 1);
        let Some(a) = germ_or_fail(&mut out, case, size, GermInput::Proximity(p), repro.clone()) else {
            continue;
        };
        let l4 = a.blowup.as_ref().unwrap();
        out.check(
            l4.checks.iter().all(|c| c.holds()),
            case,
            size,
            || repro,
            || "identity fails".into(),
        );
    }
    out.notes
        .push(format!("{multi} of {} germs have several branches", count + 2));
    out
}

/// `-N^2 > 1/2` at cusps, with the first-pair bound.
pub fn cusp_negative_part(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("lemma5", seed, count);
    let mut least: Option<Q> = None;
    for (case, c) in suite_sequences(seed, count).into_iter().enumerate() {
        let size = seq_size(&c);
        let Some(a) = germ_or_fail(&mut out, case, size, GermInput::Puiseux(c.clone()), c.to_string()) else {
            continue;
        };
        for id in ["cusp-negative-part", "cusp-negative-part-first-pair"] {
            let v = a.verdicts.iter().find(|v| v.id == id);
            out.check(
                v.is_some_and(|v| v.holds()),
                case,
                size,
                || c.to_string(),
                || format!("{id} fails"),
            );
        }
        let m = a.decomposition.as_ref().unwrap().minus_n2();
        if least.as_ref().is_none_or(|l| &m < l) {
            least = Some(m);
        }
    }
    if let Some(l) = least {
        out.notes.push(format!("smallest -N^2: {}", fmt_q(&l)));
    }
    out
}

/// `]x[ + ]1/x[ >= 1/2` on random rationals in `(0, 1)` and at `1/2`.
pub fn fractional_parts(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("claim", seed, count);
    let mut rng = generate::rng(seed);
    let mut witnesses = Vec::new();
    let xs = std::iter::once(qr(1, 2)).chain((0..count).map(|_| generate::random_unit_rational(&mut rng, 1000)));
    for (case, x) in xs.enumerate() {
        let size = x.denom().bits() as usize;
        match inequalities::claim_check(&x) {
            Ok((_, equal)) => {
                if equal {
                    witnesses.push(fmt_q(&x));
                }
                out.check(
                    equal == (x == qr(1, 2)),
                    case,
                    size,
                    || fmt_q(&x),
                    || "equality off 1/2".into(),
                );
            }
            Err(e) => out.check(false, case, size, || fmt_q(&x), || e.to_string()),
        }
    }
    witnesses.sort();
    witnesses.dedup();
    out.notes.push(format!("equality witnesses: {}", witnesses.join(", ")));
    out
}

/// `μ + H^2 < 1.01 μ/m` for `x^5 = y^5001`, and the ratio
/// `(μ + H^2)/(μ/m)` decreasing in `n` for random one-pair germs.
pub fn sharpness(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("sharpness", seed, count);
    let eps = qr(1, 100);
    match inequalities::sharpness(5, 5001, &eps) {
        Ok(s) => {
            out.notes.push(format!(
                "m = 5, n = 5001: μ + H^2 = {} < {} = 1.01 μ/m",
                fmt_q(&s.mu_plus_h2),
                fmt_q(&s.bound)
            ));
            out.check(s.holds, 0, 5001, || "(5; 5001)".into(), || "bound fails".into());
        }
        Err(e) => out.check(false, 0, 5001, || "(5; 5001)".into(), || e.to_string()),
    }
    let mut rng = generate::rng(seed);
    let ratio = |m: u64, n: u64| -> Option<Q> {
        let s = inequalities::sharpness(m, n, &Q::from_integer(0.into())).ok()?;
        Some(&s.mu_plus_h2 / (&s.mu / q(m as i64)))
    };
    let coprime_above = |m: u64, from: u64| (from..).find(|n| num_integer::gcd(*n, m) == 1).unwrap();
    for case in 1..=count {
        let m = rng.gen_range(2..=12u64);
        let n1 = coprime_above(m, rng.gen_range(m + 1..=200));
        let n2 = coprime_above(m, n1 + rng.gen_range(1..=200));
        let repro = || format!("({m}; {n1}) vs ({m}; {n2})");
        let ok = match (ratio(m, n1), ratio(m, n2)) {
            (Some(a), Some(b)) => a > b && b > q(1),
            _ => false,
        };
        out.check(ok, case, n2 as usize, repro, || {
            "ratio does not decrease towards 1".into()
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for s in SUITES {
            let o = run_suite(s, 3, 10).unwrap();
            assert!(o.passed(), "{o}");
            assert!(o.checks > 0);
        }
        assert!(run_suite("bogus", 1, 1).is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        assert_eq!(run_suite("lemma4", 9, 15), run_suite("lemma4", 9, 15));
    }

    #[test]
    fn smallest_failure_is_chosen() {
        let mut o = SuiteOutcome::new("x", 0, 3);
        o.check(false, 0, 9, || "big".into(), || "m".into());
        o.check(false, 1, 2, || "small".into(), || "m".into());
        assert_eq!(o.smallest_failure().unwrap().reproducer, "small");
        assert!(!o.passed());
    }
}
