//! Text and structured (JSON) rendering of germ and curve reports.
//! Rationals are written exactly as `"p/q"` strings.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::exact::{fmt_q, parse_q, Q};
use crate::inequalities::{CurveReport, GermAnalysis, Relation, Status, Verdict};
use crate::wtree::WeightedTree;

pub const GERM_SCHEMA: &str = "curvesing.germ/1";
pub const CURVE_SCHEMA: &str = "curvesing.curve/1";
pub const VERIFY_SCHEMA: &str = "curvesing.verify/1";

fn qv(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

fn opt_q(x: Option<&Q>) -> Value {
    x.map_or(Value::Null, qv)
}

fn graph_json(g: &WeightedTree) -> Value {
    let edges: Vec<Value> = g.edges().iter().map(|&(a, b)| json!([a + 1, b + 1])).collect();
    json!({
        "weights": g.weights(),
        "arrows": g.arrow_counts(),
        "edges": edges,
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "id": v.id,
        "statement": v.statement,
        "status": v.status.as_str(),
        "relation": v.relation.symbol(),
        "lhs": opt_q(v.lhs()),
        "rhs": opt_q(v.rhs()),
        "satisfied": v.satisfied,
        "assumptions": v.assumptions,
    })
}

pub fn verdict_from_json(v: &Value) -> Option<Verdict> {
    let s = |k: &str| v.get(k)?.as_str().map(str::to_string);
    let q_of = |k: &str| -> Option<Option<Q>> {
        match v.get(k)? {
            Value::Null => Some(None),
            Value::String(t) => parse_q(t).ok().map(Some),
            _ => None,
        }
    };
    let sides = match (q_of("lhs")?, q_of("rhs")?) {
        (Some(l), Some(r)) => Some((l, r)),
        (None, None) => None,
        _ => return None,
    };
    Some(Verdict {
        id: s("id")?,
        statement: s("statement")?,
        relation: Relation::from_symbol(v.get("relation")?.as_str()?)?,
        sides,
        satisfied: match v.get("satisfied")? {
            Value::Null => None,
            b => Some(b.as_bool()?),
        },
        status: Status::parse(v.get("status")?.as_str()?)?,
        assumptions: v
            .get("assumptions")?
            .as_array()?
            .iter()
            .map(|a| a.as_str().map(str::to_string))
            .collect::<Option<_>>()?,
    })
}

pub fn germ_json(a: &GermAnalysis, dump_graph: bool) -> Value {
    let mut o = Map::new();
    o.insert("schema".into(), json!(GERM_SCHEMA));
    o.insert("input".into(), json!(a.input.to_string()));
    o.insert(
        "puiseux".into(),
        a.puiseux.as_ref().map_or(
            Value::Null,
            |p| json!({"h": p.h, "exponents": p.m, "d": p.d, "q": p.q, "r": p.r}),
        ),
    );
    o.insert("multiplicities".into(), json!(a.numbers.multiplicities));
    o.insert(
        "numbers".into(),
        json!({
            "mu": a.mu(),
            "m": a.m(),
            "r": a.r(),
            "n": a.numbers.n(),
            "omega": a.numbers.omega,
            "eta": a.numbers.eta,
            "delta": a.delta(),
        }),
    );
    let dec = a.decomposition.as_ref();
    o.insert(
        "local".into(),
        json!({
            "H2": opt_q(dec.map(|d| &d.h2)),
            "N2": opt_q(dec.map(|d| &d.n2)),
            "KDT2": qv(&a.kdt2),
            "KE2": opt_q(dec.map(|d| &d.ke2)),
        }),
    );
    let graph = a.resolution.as_ref().map(|r| &r.dual_graph);
    o.insert("graph".into(), graph.map_or(Value::Null, graph_json));
    o.insert(
        "comb_nodes".into(),
        a.layout.as_ref().map_or(Value::Null, |l| {
            json!(l.nodes.iter().map(|v| v + 1).collect::<Vec<_>>())
        }),
    );
    let mut identities: Vec<Value> = Vec::new();
    if let Some(l4) = &a.blowup {
        identities.extend(
            l4.checks
                .iter()
                .map(|c| json!({"name": c.name, "lhs": qv(&c.lhs), "rhs": qv(&c.rhs), "holds": c.holds()})),
        );
    }
    o.insert("identities".into(), Value::Array(identities));
    o.insert(
        "verdicts".into(),
        Value::Array(a.verdicts.iter().map(verdict_json).collect()),
    );
    if dump_graph {
        o.insert("graph_text".into(), graph.map_or(Value::Null, |g| json!(g.to_text())));
    }
    Value::Object(o)
}

pub fn curve_json(r: &CurveReport, dump_graph: bool) -> Value {
    let germs: Vec<Value> = r
        .germs
        .iter()
        .map(|(g, count)| json!({"count": count, "germ": germ_json(g, dump_graph)}))
        .collect();
    json!({
        "schema": CURVE_SCHEMA,
        "name": r.name,
        "degree": r.degree,
        "flags": {
            "irreducible": r.irreducible,
            "rational": r.rational,
            "cuspidal": r.cuspidal,
        },
        "singular_points": r.singular_points,
        "kappa": r.kappa,
        "max_multiplicity": r.max_multiplicity,
        "sum_mu": r.sum_mu,
        "sum_delta": r.sum_delta,
        "genus": r.genus,
        "euler": r.euler,
        "complement_euler": r.complement_euler,
        "KDT2": qv(&r.kdt2),
        "K_KDT": opt_q(r.k_kdt.as_ref()),
        "H2": opt_q(r.h2.as_ref()),
        "N2": opt_q(r.n2.as_ref()),
        "kodaira": {"value": r.kodaira.value.as_str(), "reason": r.kodaira.reason},
        "assumptions": r.assumptions,
        "germs": germs,
        "verdicts": r.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
        "unrealizable": r.any_failure(),
    })
}

/// The exact values of a curve report, as recovered from structured output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveValues {
    pub degree: u64,
    pub kappa: u64,
    pub genus: Option<i64>,
    pub euler: i64,
    pub kdt2: Q,
    pub k_kdt: Option<Q>,
    pub h2: Option<Q>,
    pub n2: Option<Q>,
    pub germ_kdt2: Vec<Q>,
    pub verdicts: Vec<Verdict>,
}

impl CurveValues {
    pub fn of(r: &CurveReport) -> Self {
        CurveValues {
            degree: r.degree,
            kappa: r.kappa,
            genus: r.genus,
            euler: r.euler,
            kdt2: r.kdt2.clone(),
            k_kdt: r.k_kdt.clone(),
            h2: r.h2.clone(),
            n2: r.n2.clone(),
            germ_kdt2: r.germs.iter().map(|(g, _)| g.kdt2.clone()).collect(),
            verdicts: r.all_verdicts().cloned().collect(),
        }
    }

    pub fn from_json(v: &Value) -> Option<Self> {
        let opt = |k: &str| -> Option<Option<Q>> {
            match v.get(k)? {
                Value::Null => Some(None),
                Value::String(s) => parse_q(s).ok().map(Some),
                _ => None,
            }
        };
        let germs = v.get("germs")?.as_array()?;
        let mut verdicts = Vec::new();
        let mut germ_kdt2 = Vec::new();
        for g in germs {
            let germ = g.get("germ")?;
            germ_kdt2.push(parse_q(germ.get("local")?.get("KDT2")?.as_str()?).ok()?);
            for x in germ.get("verdicts")?.as_array()? {
                verdicts.push(verdict_from_json(x)?);
            }
        }
        for x in v.get("verdicts")?.as_array()? {
            verdicts.push(verdict_from_json(x)?);
        }
        Some(CurveValues {
            degree: v.get("degree")?.as_u64()?,
            kappa: v.get("kappa")?.as_u64()?,
            genus: match v.get("genus")? {
                Value::Null => None,
                g => Some(g.as_i64()?),
            },
            euler: v.get("euler")?.as_i64()?,
            kdt2: opt("KDT2")??,
            k_kdt: opt("K_KDT")?,
            h2: opt("H2")?,
            n2: opt("N2")?,
            germ_kdt2,
            verdicts,
        })
    }
}

fn yes_no(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "unknown",
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

pub fn germ_text(a: &GermAnalysis, dump_graph: bool) -> String {
    let mut s = String::new();
    let n = &a.numbers;
    let _ = writeln!(s, "germ {}", a.input);
    if let Some(p) = &a.puiseux {
        let _ = writeln!(
            s,
            "  Puiseux data: h = {}, d = ({}), q = ({}), r = ({})",
            p.h,
            list(&p.d),
            list(&p.q),
            list(&p.r)
        );
    }
    let _ = writeln!(s, "  multiplicity sequence: ({})", list(&n.multiplicities));
    let _ = writeln!(
        s,
        "  μ = {}, m = {}, r = {}, n = {}, ω = {}, η = {}, δ = {}",
        n.mu,
        n.m(),
        n.branches,
        n.n(),
        n.omega,
        n.eta,
        n.delta
    );
    if let Some(d) = &a.decomposition {
        let _ = writeln!(
            s,
            "  H² = {}, N² = {}, (K+D̃)² = {}, (K+E)² = {}",
            fmt_q(&d.h2),
            fmt_q(&d.n2),
            fmt_q(&d.kdt2),
            fmt_q(&d.ke2)
        );
    } else {
        let _ = writeln!(
            s,
            "  (K+D̃)² = {} (from the blow-up counts; no dual graph)",
            fmt_q(&a.kdt2)
        );
    }
    if let Some(res) = &a.resolution {
        let g = &res.dual_graph;
        let _ = write!(s, "  dual graph: {} vertices, weights ({})", g.len(), list(g.weights()));
        if let Some(l) = &a.layout {
            let nodes: Vec<usize> = l.nodes.iter().map(|v| v + 1).collect();
            let _ = write!(
                s,
                ", comb nodes E{}",
                nodes.iter().map(usize::to_string).collect::<Vec<_>>().join(", E")
            );
        }
        let _ = writeln!(s);
        if dump_graph {
            for line in g.to_text().lines() {
                let _ = writeln!(s, "    {line}");
            }
        }
    }
    if let Some(l4) = &a.blowup {
        let held = l4.checks.iter().filter(|c| c.holds()).count();
        let _ = writeln!(s, "  blow-up identities: {held}/{} hold", l4.checks.len());
    }
    for v in &a.verdicts {
        let _ = writeln!(s, "  {v}");
    }
    s
}

pub fn curve_text(r: &CurveReport, dump_graph: bool) -> String {
    let mut s = String::new();
    match &r.name {
        Some(n) => {
            let _ = writeln!(s, "curve {n}: degree {}", r.degree);
        }
        None => {
            let _ = writeln!(s, "curve of degree {}", r.degree);
        }
    }
    let _ = writeln!(
        s,
        "  irreducible: {}, rational: {}, cuspidal: {}",
        yes_no(r.irreducible),
        yes_no(r.rational),
        if r.cuspidal { "yes" } else { "no" }
    );
    let _ = writeln!(
        s,
        "  singular points: {}, cusps κ = {}, max multiplicity m = {}, Σμ = {}, Σδ = {}",
        r.singular_points, r.kappa, r.max_multiplicity, r.sum_mu, r.sum_delta
    );
    if let Some(g) = r.genus {
        let _ = writeln!(s, "  genus g = {g}");
    }
    let _ = writeln!(s, "  e(D) = {}, e(P² \\ D) = {}", r.euler, r.complement_euler);
    let _ = write!(s, "  (K+D̃)² = {}", fmt_q(&r.kdt2));
    if let Some(k) = &r.k_kdt {
        let _ = write!(s, ", K(K+D̃) = {}", fmt_q(k));
    }
    if let (Some(h), Some(n)) = (&r.h2, &r.n2) {
        let _ = write!(s, ", H² = {}, N² = {}", fmt_q(h), fmt_q(n));
    }
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "  Kodaira dimension of the complement: {} ({})",
        r.kodaira.value.as_str(),
        r.kodaira.reason
    );
    for (g, count) in &r.germs {
        let _ = writeln!(s, "  {count} x");
        for line in germ_text(g, dump_graph).lines() {
            let _ = writeln!(s, "    {line}");
        }
    }
    let _ = writeln!(s, "  verdicts:");
    for v in &r.verdicts {
        for line in v.to_string().lines() {
            let _ = writeln!(s, "    {line}");
        }
    }
    for a in &r.assumptions {
        let _ = writeln!(s, "  note: {a}");
    }
    if r.any_failure() {
        let _ = writeln!(
            s,
            "  result: configuration is not realizable by a plane curve under the stated hypotheses"
        );
    } else {
        let _ = writeln!(s, "  result: no certified inequality fails");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::catalog;
    use crate::inequalities::certify;

    #[test]
    fn structured_round_trip() {
        for name in ["cubic1", "quartic3", "sextic9", "hk:2"] {
            let r = certify(&catalog::lookup(name).unwrap()).unwrap();
            let text = serde_json::to_string_pretty(&curve_json(&r, true)).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(CurveValues::from_json(&back).unwrap(), CurveValues::of(&r), "{name}");
        }
    }

    #[test]
    fn rationals_are_exact_strings() {
        let r = certify(&catalog::lookup("quartic3").unwrap()).unwrap();
        let v = curve_json(&r, false);
        assert_eq!(v["H2"], json!("1/2"));
        assert_eq!(v["KDT2"], json!("-2"));
        assert_eq!(v["germs"][0]["germ"]["local"]["N2"], json!("-5/6"));
    }
}
