//! Germ analysis and the numerical inequalities a plane curve with given
//! singularities must satisfy.
//!
//! Every verdict carries exact left and right sides. A verdict whose
//! hypotheses are certified by the input is `Holds` or `Fails`; a failure
//! then means no plane curve has this configuration. Verdicts that rely on
//! an uncertified hypothesis are `Conditional`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{fmt_q, q, qr, ufrac, Q};
use crate::puiseux::{self, CharSequence, PuiseuxData, PuiseuxError};
use crate::resolution::{
    self, BlowupIdentities, CombLayout, GermNumbers, GermResolution, ProximityMatrix, ResolutionError,
    TaggedMultiplicities,
};
use crate::zariski::{self, ClosedForms, InverseFormulaValues, LocalDecomposition, ZariskiError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Puiseux(#[from] PuiseuxError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Zariski(#[from] ZariskiError),
    #[error("{equation} violated: {lhs} != {rhs}")]
    IdentityViolation {
        equation: &'static str,
        lhs: String,
        rhs: String,
    },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
}

fn identity(equation: &'static str, lhs: &Q, rhs: &Q) -> Result<(), AnalysisError> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(AnalysisError::IdentityViolation {
            equation,
            lhs: fmt_q(lhs),
            rhs: fmt_q(rhs),
        })
    }
}

fn int(v: u64) -> Q {
    q(v as i64)
}

fn frac(a: i64, b: i64) -> Q {
    qr(a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn eval(self, lhs: &Q, rhs: &Q) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        [Relation::Le, Relation::Lt, Relation::Eq, Relation::Ge, Relation::Gt]
            .into_iter()
            .find(|r| r.symbol() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    /// Evaluated, but a hypothesis is not certified by the input.
    Conditional,
    /// Reported for information; never makes a configuration unrealizable.
    Info,
    NotApplicable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Conditional => "conditional",
            Status::Info => "info",
            Status::NotApplicable => "not-applicable",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            Status::Holds,
            Status::Fails,
            Status::Conditional,
            Status::Info,
            Status::NotApplicable,
        ]
        .into_iter()
        .find(|x| x.as_str() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub id: String,
    pub statement: String,
    pub relation: Relation,
    /// `None` only for `NotApplicable`.
    pub sides: Option<(Q, Q)>,
    pub satisfied: Option<bool>,
    pub status: Status,
    pub assumptions: Vec<String>,
}

impl Verdict {
    pub fn evaluate(id: &str, statement: &str, lhs: Q, relation: Relation, rhs: Q) -> Self {
        let ok = relation.eval(&lhs, &rhs);
        Verdict {
            id: id.to_string(),
            statement: statement.to_string(),
            relation,
            sides: Some((lhs, rhs)),
            satisfied: Some(ok),
            status: if ok { Status::Holds } else { Status::Fails },
            assumptions: Vec::new(),
        }
    }

    /// Certified verdict if `certified`, otherwise conditional on `assumptions`.
    fn under(mut self, certified: bool, assumptions: Vec<String>) -> Self {
        if !certified {
            self.status = Status::Conditional;
        }
        self.assumptions = assumptions;
        self
    }

    fn info(mut self) -> Self {
        self.status = Status::Info;
        self
    }

    pub fn not_applicable(id: &str, statement: &str, relation: Relation, reason: String) -> Self {
        Verdict {
            id: id.to_string(),
            statement: statement.to_string(),
            relation,
            sides: None,
            satisfied: None,
            status: Status::NotApplicable,
            assumptions: vec![reason],
        }
    }

    pub fn holds(&self) -> bool {
        self.satisfied == Some(true)
    }

    pub fn lhs(&self) -> Option<&Q> {
        self.sides.as_ref().map(|s| &s.0)
    }

    pub fn rhs(&self) -> Option<&Q> {
        self.sides.as_ref().map(|s| &s.1)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.status.as_str(), self.id, self.statement)?;
        if let Some((l, r)) = &self.sides {
            let rel = if self.holds() {
                self.relation.symbol().to_string()
            } else {
                format!("not {}", self.relation.symbol())
            };
            write!(f, "  ({} {} {})", fmt_q(l), rel, fmt_q(r))?;
        }
        for a in &self.assumptions {
            write!(f, "\n      assuming: {a}")?;
        }
        Ok(())
    }
}

/// How a singular point is described.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GermInput {
    Puiseux(CharSequence),
    Proximity(ProximityMatrix),
    Tagged(TaggedMultiplicities),
}

impl fmt::Display for GermInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermInput::Puiseux(c) => write!(f, "{c}"),
            GermInput::Proximity(p) => write!(f, "proximity structure on {} points", p.n()),
            GermInput::Tagged(t) => {
                let ms: Vec<String> = t.multiplicities.iter().map(u64::to_string).collect();
                let plural = if t.branches == 1 { "" } else { "es" };
                write!(f, "multiplicities ({}), {} branch{plural}", ms.join(", "), t.branches)
            }
        }
    }
}

/// Everything computed about one germ, with all cross-checks passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermAnalysis {
    pub input: GermInput,
    pub numbers: GermNumbers,
    pub puiseux: Option<PuiseuxData>,
    pub resolution: Option<GermResolution>,
    pub layout: Option<CombLayout>,
    pub decomposition: Option<LocalDecomposition>,
    pub inverse: Option<InverseFormulaValues>,
    pub blowup: Option<BlowupIdentities>,
    pub closed: Option<ClosedForms>,
    /// `(K_E + D~_E)^2`; from the bookkeeping identity when there is no graph.
    pub kdt2: Q,
    pub verdicts: Vec<Verdict>,
}

impl GermAnalysis {
    pub fn mu(&self) -> u64 {
        self.numbers.mu
    }

    pub fn m(&self) -> u64 {
        self.numbers.m()
    }

    pub fn r(&self) -> u64 {
        self.numbers.branches
    }

    pub fn delta(&self) -> u64 {
        self.numbers.delta
    }

    pub fn is_cusp(&self) -> bool {
        self.r() == 1
    }

    pub fn is_ordinary_cusp(&self) -> bool {
        self.r() == 1 && self.m() == 2 && self.mu() == 2
    }

    pub fn h2(&self) -> Option<&Q> {
        self.decomposition.as_ref().map(|d| &d.h2)
    }

    pub fn n2(&self) -> Option<&Q> {
        self.decomposition.as_ref().map(|d| &d.n2)
    }
}

/// `(η - 1) + (ω - 1) + (r - 1) - μ`.
fn kdt2_from_numbers(n: &GermNumbers) -> Q {
    q(n.eta as i64 + n.omega as i64 + n.branches as i64 - 3 - n.mu as i64)
}

fn analyze_graph(
    numbers: &GermNumbers,
    res: &GermResolution,
) -> Result<(LocalDecomposition, InverseFormulaValues, BlowupIdentities), AnalysisError> {
    res.verify()?;
    let dec = zariski::decompose(&res.dual_graph)?;
    let inv = zariski::inverse_formula_values(&res.dual_graph, &dec)?;
    identity("μ = 1 - D'_E(K_E + D~_E)", &dec.mu, &int(numbers.mu))?;
    let l4 = resolution::blowup_identities(numbers, &res.dual_graph, &dec)?;
    Ok((dec, inv, l4))
}

pub fn analyze_germ(input: &GermInput) -> Result<GermAnalysis, AnalysisError> {
    let mut a = match input {
        GermInput::Puiseux(c) => {
            let data = puiseux::derive_data(c)?;
            let (res, layout) = resolution::resolve_irreducible(c)?;
            let via_prox = resolution::resolve_proximity(&resolution::irreducible_proximity(c)?)?;
            if via_prox != res {
                return Err(AnalysisError::IdentityViolation {
                    equation: "blow-up replay = proximity matrix resolution",
                    lhs: res.dual_graph.to_text(),
                    rhs: via_prox.dual_graph.to_text(),
                });
            }
            let numbers = res.numbers.clone();
            identity(
                "μ(Puiseux) = μ(resolution)",
                &int(puiseux::milnor(&data)?),
                &int(numbers.mu),
            )?;
            let (dec, inv, l4) = analyze_graph(&numbers, &res)?;
            let cf = zariski::closed_forms(&data);
            identity("closed-form μ", &cf.mu, &dec.mu)?;
            identity("closed-form H^2", &cf.h2, &dec.h2)?;
            identity("closed-form N^2", &cf.n2, &dec.n2)?;
            identity("closed-form (K_E + D~_E)^2", &cf.kdt2, &dec.kdt2)?;
            identity(
                "2μ + H^2, two closed forms",
                &zariski::two_mu_plus_h2_via_q(&data),
                &(&cf.h2 + int(2 * numbers.mu)),
            )?;
            GermAnalysis {
                input: input.clone(),
                kdt2: dec.kdt2.clone(),
                numbers,
                puiseux: Some(data),
                resolution: Some(res),
                layout: Some(layout),
                decomposition: Some(dec),
                inverse: Some(inv),
                blowup: Some(l4),
                closed: Some(cf),
                verdicts: Vec::new(),
            }
        }
        GermInput::Proximity(p) => {
            let res = resolution::resolve_proximity(p)?;
            let numbers = res.numbers.clone();
            let (dec, inv, l4) = analyze_graph(&numbers, &res)?;
            GermAnalysis {
                input: input.clone(),
                kdt2: dec.kdt2.clone(),
                numbers,
                puiseux: None,
                resolution: Some(res),
                layout: None,
                decomposition: Some(dec),
                inverse: Some(inv),
                blowup: Some(l4),
                closed: None,
                verdicts: Vec::new(),
            }
        }
        GermInput::Tagged(t) => {
            let numbers = t.numbers()?;
            GermAnalysis {
                input: input.clone(),
                kdt2: kdt2_from_numbers(&numbers),
                numbers,
                puiseux: None,
                resolution: None,
                layout: None,
                decomposition: None,
                inverse: None,
                blowup: None,
                closed: None,
                verdicts: Vec::new(),
            }
        }
    };
    a.verdicts = local_inequality(&a.numbers, &a.kdt2)?;
    if let Some(p) = &a.puiseux {
        let value = branch_excess(p)?;
        a.verdicts.push(Verdict::evaluate(
            "excess-vanishing",
            "μ + (K_E + D~_E)^2 - μ/m = 0 exactly when m = 2",
            q(i64::from(value.is_zero())),
            Relation::Eq,
            q(i64::from(a.m() == 2)),
        ));
    }
    if a.is_cusp() {
        if let Some(dec) = &a.decomposition {
            a.verdicts.push(Verdict::evaluate(
                "cusp-negative-part",
                "-N_E^2 > 1/2 at a cusp",
                dec.minus_n2(),
                Relation::Gt,
                frac(1, 2),
            ));
        }
        if let Some(p) = &a.puiseux {
            a.verdicts.push(Verdict::evaluate(
                "cusp-negative-part-first-pair",
                "-N_E^2 >= ]m/n[ + ]n/m[",
                -a.closed
                    .as_ref()
                    .expect("closed forms exist with Puiseux data")
                    .n2
                    .clone(),
                Relation::Ge,
                claim_value(&Q::new((p.d[0] as i64).into(), (p.m[0] as i64).into())),
            ));
        }
    }
    Ok(a)
}

/// The local bound `-(K_E + D~_E)^2 <= (1 - 1/m) μ` with its equality
/// criterion and the chain of integer inequalities that proves it.
pub fn local_inequality(n: &GermNumbers, kdt2: &Q) -> Result<Vec<Verdict>, AnalysisError> {
    if n.mu == 0 {
        return Err(AnalysisError::InvalidCurve("smooth germ: μ = 0".into()));
    }
    let (m, mu, r, eta, omega) = (
        n.m() as i64,
        n.mu as i64,
        n.branches as i64,
        n.eta as i64,
        n.omega as i64,
    );
    let bound = (Q::one() - frac(1, m)) * q(mu);
    let main = Verdict::evaluate(
        "local-bound",
        "-(K_E + D~_E)^2 <= (1 - 1/m) μ",
        -kdt2.clone(),
        Relation::Le,
        bound.clone(),
    );
    let equality = -kdt2.clone() == bound;
    let chain = Verdict::evaluate(
        "local-bound-integral",
        "η + ω + r - 3 >= μ/m",
        q(eta + omega + r - 3),
        Relation::Ge,
        frac(mu, m),
    );
    if main.holds() != chain.holds() {
        return Err(AnalysisError::IdentityViolation {
            equation: "local bound ⇔ η + ω + r - 3 >= μ/m",
            lhs: main.holds().to_string(),
            rhs: chain.holds().to_string(),
        });
    }
    Ok(vec![
        main,
        Verdict::evaluate(
            "local-equality",
            "equality in the local bound exactly when r = 1 and m = 2",
            q(i64::from(equality)),
            Relation::Eq,
            q(i64::from(r == 1 && m == 2)),
        ),
        chain,
        Verdict::evaluate(
            "multiplicity-excess",
            "η - μ/m >= (r - 1)/m",
            q(eta) - frac(mu, m),
            Relation::Ge,
            frac(r - 1, m),
        ),
        Verdict::evaluate(
            "blowup-excess",
            "ω + r - 3 + (r - 1)/m >= 0",
            q(omega + r - 3) + frac(r - 1, m),
            Relation::Ge,
            Q::zero(),
        ),
        Verdict::evaluate("blowup-count", "ω + r >= 3", q(omega + r), Relation::Ge, q(3)),
    ])
}

/// `μ + (K_E + D~_E)^2 - μ/m` for a branch, from
/// `d_1(1 - 1/q_1) - 1/d_1 + N_E^2 + Σ q_j (1 - d_j/d_1)(1 - 1/d_j)`,
/// checked against the closed forms.
pub fn branch_excess(p: &PuiseuxData) -> Result<Q, AnalysisError> {
    let cf = zariski::closed_forms(p);
    let d1 = p.d[0] as i64;
    let mut rhs = q(d1) * (Q::one() - frac(1, p.q[0] as i64)) - frac(1, d1) + &cf.n2;
    for j in 0..p.h {
        let (qj, dj) = (p.q[j] as i64, p.d[j] as i64);
        rhs += q(qj) * (Q::one() - frac(dj, d1)) * (Q::one() - frac(1, dj));
    }
    let direct = &cf.mu + &cf.kdt2 - &cf.mu / q(d1);
    identity("μ + (K_E + D~_E)^2 - μ/m, two forms", &rhs, &direct)?;
    Ok(rhs)
}

/// `]x[ + ]1/x[`.
pub fn claim_value(x: &Q) -> Q {
    ufrac(x) + ufrac(&x.recip())
}

/// `]x[ + ]1/x[ >= 1/2` for `0 < x < 1`, equality only at `x = 1/2`.
pub fn claim_check(x: &Q) -> Result<(Q, bool), AnalysisError> {
    if !x.is_positive() || x >= &Q::one() {
        return Err(AnalysisError::InvalidCurve(format!("{} is not in (0, 1)", fmt_q(x))));
    }
    let v = claim_value(x);
    let half = frac(1, 2);
    let equality = v == half;
    if v < half || equality != (*x == half) {
        return Err(AnalysisError::IdentityViolation {
            equation: "]x[ + ]1/x[ >= 1/2 with equality only at 1/2",
            lhs: fmt_q(&v),
            rhs: format!("x = {}", fmt_q(x)),
        });
    }
    Ok((v, equality))
}

/// For `x^m = y^n`: `μ + H_E^2` against `(1 + ε) μ/m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sharpness {
    pub mu: Q,
    pub mu_plus_h2: Q,
    pub bound: Q,
    pub holds: bool,
}

pub fn sharpness(m: u64, n: u64, eps: &Q) -> Result<Sharpness, AnalysisError> {
    let c = CharSequence::new(m, vec![n])?;
    let cf = zariski::closed_forms(&puiseux::derive_data(&c)?);
    let (h2, _) = zariski::one_pair_values(m, n);
    identity("one-pair H^2", &h2, &cf.h2)?;
    let mu_plus_h2 = &cf.mu + &cf.h2;
    let bound = (Q::one() + eps) * &cf.mu / int(m);
    Ok(Sharpness {
        holds: mu_plus_h2 < bound,
        mu: cf.mu,
        mu_plus_h2,
        bound,
    })
}

/// `(d*, f)`: class and flex count of a Plücker curve with `κ` ordinary cusps.
pub fn plucker_bounds(d: u64, kappa: u64) -> (i64, i64, Vec<Verdict>) {
    let (d, k) = (d as i64, kappa as i64);
    let class = d * (d - 1) - 3 * k;
    let flexes = 3 * d * (d - 2) - 8 * k;
    let verdicts = vec![
        Verdict::evaluate("plucker-class", "0 < d* = d(d - 1) - 3κ", q(0), Relation::Lt, q(class)),
        Verdict::evaluate(
            "plucker-flexes",
            "0 <= f = 3d(d - 2) - 8κ",
            q(0),
            Relation::Le,
            q(flexes),
        ),
    ];
    (class, flexes, verdicts)
}

/// `(d_k, κ_k, κ_k/d_k^2)` for the curves `F(x^k : y^k : z^k) = 0` obtained
/// from the nine-cuspidal sextic `F`, with the flex bound checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMember {
    pub k: u64,
    pub degree: u64,
    pub cusps: u64,
    pub ratio: Q,
    pub flex_bound: Verdict,
}

pub fn sextic_family(k: u64) -> Result<FamilyMember, AnalysisError> {
    if k == 0 {
        return Err(AnalysisError::InvalidCurve("k must be positive".into()));
    }
    let (degree, cusps) = (6 * k, 9 * k * k);
    let ratio = int(cusps) / int(degree * degree);
    identity("κ_k = d_k^2/4", &ratio, &frac(1, 4))?;
    let d = degree as i64;
    let flex_bound = Verdict::evaluate(
        "cusp-flex-bound",
        "κ <= 3d(d - 2)/8",
        int(cusps),
        Relation::Le,
        frac(3 * d * (d - 2), 8),
    );
    Ok(FamilyMember {
        k,
        degree,
        cusps,
        ratio,
        flex_bound,
    })
}

/// What is known about the logarithmic Kodaira dimension of `P^2 \ D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kodaira {
    GeneralType,
    NonNegative,
    Unknown,
}

impl Kodaira {
    pub fn as_str(self) -> &'static str {
        match self {
            Kodaira::GeneralType => "2",
            Kodaira::NonNegative => ">=0",
            Kodaira::Unknown => "unknown",
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self != Kodaira::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KodairaFlag {
    pub value: Kodaira,
    pub reason: String,
}

/// A plane curve of degree `d` with the given singular points, each with a
/// repetition count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    pub name: Option<String>,
    pub degree: u64,
    pub singularities: Vec<(GermInput, u64)>,
    pub irreducible: Option<bool>,
    pub rational: Option<bool>,
    pub plucker: bool,
    /// Kodaira dimension asserted by the user, if any.
    pub kodaira: Option<Kodaira>,
}

impl CurveSpec {
    pub fn new(degree: u64) -> Self {
        CurveSpec {
            name: None,
            degree,
            singularities: Vec::new(),
            irreducible: None,
            rational: None,
            plucker: false,
            kodaira: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveReport {
    pub name: Option<String>,
    pub degree: u64,
    pub germs: Vec<(GermAnalysis, u64)>,
    pub irreducible: Option<bool>,
    pub rational: Option<bool>,
    pub cuspidal: bool,
    pub singular_points: u64,
    /// Number of cusps (locally irreducible singular points), `κ`.
    pub kappa: u64,
    /// Largest multiplicity, `1` for a smooth curve.
    pub max_multiplicity: u64,
    pub sum_mu: u64,
    pub sum_delta: u64,
    pub genus: Option<i64>,
    /// `e(D) = Σ μ_i - d(d - 3)`.
    pub euler: i64,
    /// `e(P^2 \ D) = 3 - e(D)`.
    pub complement_euler: i64,
    /// `(K + D~)^2 = (d - 3)^2 + Σ (K_E + D~_E)^2`.
    pub kdt2: Q,
    /// `K(K + D~) = (K + D~)^2 + 2`, when `D~` is a rational tree.
    pub k_kdt: Option<Q>,
    /// Global `H^2`, `N^2` when the global decomposition is the sum of the local ones.
    pub h2: Option<Q>,
    pub n2: Option<Q>,
    pub kodaira: KodairaFlag,
    pub verdicts: Vec<Verdict>,
    pub assumptions: Vec<String>,
}

impl CurveReport {
    pub fn rational_cuspidal(&self) -> bool {
        self.irreducible == Some(true) && self.rational == Some(true) && self.cuspidal
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    /// All verdicts, curve-level and per germ.
    pub fn all_verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.germs
            .iter()
            .flat_map(|(g, _)| g.verdicts.iter())
            .chain(self.verdicts.iter())
    }

    pub fn any_failure(&self) -> bool {
        self.all_verdicts().any(|v| v.status == Status::Fails)
    }
}

const HYP_KODAIRA: &str = "logarithmic Kodaira dimension of P^2 \\ D is non-negative";
const HYP_GENERAL: &str = "P^2 \\ D is of log general type";
const HYP_LOCAL_GLOBAL: &str =
    "global Zariski decomposition of K + D~ is the sum of the local ones (rational cuspidal, at least three cusps)";
const HYP_PLUCKER: &str = "D is a Plücker curve with only ordinary cusps";

pub fn kodaira_flag(c: &CurveSpec, kappa: u64, rational_cuspidal: bool) -> KodairaFlag {
    let irreducible = c.irreducible == Some(true);
    if irreducible && kappa >= 3 {
        return KodairaFlag {
            value: Kodaira::GeneralType,
            reason: "irreducible with at least three cusps".into(),
        };
    }
    if irreducible && c.degree >= 4 && !(rational_cuspidal && kappa == 1) {
        return KodairaFlag {
            value: Kodaira::NonNegative,
            reason: "irreducible of degree >= 4, not a rational cuspidal curve with one cusp".into(),
        };
    }
    if let Some(k) = c.kodaira {
        if k != Kodaira::Unknown {
            return KodairaFlag {
                value: k,
                reason: "asserted by the input".into(),
            };
        }
    }
    let reason = if c.irreducible != Some(true) {
        "no criterion for curves not known to be irreducible"
    } else if rational_cuspidal && kappa == 1 {
        "rational cuspidal with one cusp"
    } else {
        "degree below 4"
    };
    KodairaFlag {
        value: Kodaira::Unknown,
        reason: reason.into(),
    }
}

/// Analyzes every singular point and evaluates all applicable inequalities.
pub fn certify(c: &CurveSpec) -> Result<CurveReport, AnalysisError> {
    if c.degree == 0 {
        return Err(AnalysisError::InvalidCurve("degree must be positive".into()));
    }
    let mut germs = Vec::with_capacity(c.singularities.len());
    for (input, count) in &c.singularities {
        if *count == 0 {
            return Err(AnalysisError::InvalidCurve("repetition count must be positive".into()));
        }
        germs.push((analyze_germ(input)?, *count));
    }
    let d = c.degree as i64;
    let sum = |f: &dyn Fn(&GermAnalysis) -> u64| -> u64 { germs.iter().map(|(g, k)| f(g) * k).sum() };
    let singular_points = sum(&|_| 1);
    let kappa = sum(&|g| u64::from(g.is_cusp()));
    let sum_mu = sum(&|g| g.mu());
    let sum_delta = sum(&|g| g.delta());
    let cuspidal = kappa == singular_points;
    let max_multiplicity = germs.iter().map(|(g, _)| g.m()).max().unwrap_or(1);

    let mut verdicts = Vec::new();
    let mut assumptions = Vec::new();

    let genus = (c.irreducible == Some(true)).then(|| (d - 1) * (d - 2) / 2 - sum_delta as i64);
    if let Some(g) = genus {
        verdicts.push(Verdict::evaluate(
            "genus",
            "g = (d - 1)(d - 2)/2 - Σ δ_i >= 0",
            q(g),
            Relation::Ge,
            q(0),
        ));
    }
    let rational = match (c.rational, genus) {
        (Some(true), Some(g)) => {
            verdicts.push(Verdict::evaluate(
                "rational-genus",
                "g = 0 for a rational curve",
                q(g),
                Relation::Eq,
                q(0),
            ));
            Some(true)
        }
        (r, Some(g)) => Some(r.unwrap_or(g == 0) && g == 0),
        (r, None) => r,
    };
    let rational_cuspidal = c.irreducible == Some(true) && rational == Some(true) && cuspidal;

    let euler = sum_mu as i64 - d * (d - 3);
    let complement_euler = 3 - euler;
    let kdt2 = q((d - 3) * (d - 3)) + germs.iter().fold(Q::zero(), |acc, (g, k)| acc + &g.kdt2 * int(*k));
    let k_kdt = rational_cuspidal.then(|| &kdt2 + q(2));

    let local_global = rational_cuspidal && kappa >= 3 && germs.iter().all(|(g, _)| g.decomposition.is_some());
    let (h2, n2) = if local_global {
        let h = germs
            .iter()
            .fold(q((d - 3) * (d - 3)), |acc, (g, k)| acc + g.h2().unwrap() * int(*k));
        let n = germs
            .iter()
            .fold(Q::zero(), |acc, (g, k)| acc + g.n2().unwrap() * int(*k));
        identity("(K + D~)^2 = H^2 + N^2", &kdt2, &(&h + &n))?;
        assumptions.push(HYP_LOCAL_GLOBAL.to_string());
        (Some(h), Some(n))
    } else {
        (None, None)
    };

    let kodaira = kodaira_flag(c, kappa, rational_cuspidal);
    let nonneg = kodaira.value.is_nonnegative();
    let general = kodaira.value == Kodaira::GeneralType;
    let hyp = |s: &str| vec![s.to_string()];
    let m = max_multiplicity as i64;

    // Weighted Milnor bound and its consequences.
    let weighted: Q = germs.iter().fold(Q::zero(), |acc, (g, k)| {
        acc + (Q::one() + frac(1, 2 * g.m() as i64)) * int(g.mu()) * int(*k)
    });
    let area = q(d * d) - frac(3 * d, 2);
    verdicts.push(
        Verdict::evaluate(
            "weighted-milnor",
            "Σ (1 + 1/(2m_i)) μ_i <= d^2 - 3d/2",
            weighted,
            Relation::Le,
            area.clone(),
        )
        .under(nonneg, hyp(HYP_KODAIRA)),
    );
    verdicts.push(
        Verdict::evaluate(
            "milnor-sum",
            "Σ μ_i <= 2m/(2m + 1) (d^2 - 3d/2)",
            int(sum_mu),
            Relation::Le,
            frac(2 * m, 2 * m + 1) * area,
        )
        .under(nonneg, hyp(HYP_KODAIRA)),
    );
    let irreducible_cuspidal = c.irreducible == Some(true) && cuspidal;
    verdicts.push(match genus {
        Some(g) if irreducible_cuspidal => Verdict::evaluate(
            "genus-bound",
            "g >= (d^2 - 3(m + 1)d)/(2(2m + 1)) + 1",
            q(g),
            Relation::Ge,
            frac(d * d - 3 * (m + 1) * d, 2 * (2 * m + 1)) + q(1),
        )
        .under(nonneg, hyp(HYP_KODAIRA)),
        _ => Verdict::not_applicable(
            "genus-bound",
            "g >= (d^2 - 3(m + 1)d)/(2(2m + 1)) + 1",
            Relation::Ge,
            "needs an irreducible cuspidal curve".into(),
        ),
    });
    verdicts.push(
        Verdict::evaluate(
            "euler-bound",
            "d(d - 3(m + 1)) <= (2m + 1)(-e(D))",
            q(d * (d - 3 * (m + 1))),
            Relation::Le,
            q((2 * m + 1) * -euler),
        )
        .under(nonneg, hyp(HYP_KODAIRA)),
    );
    verdicts.push(if euler >= 0 {
        Verdict::evaluate(
            "degree-bound-euler",
            "d <= 3m + 3 when e(D) >= 0",
            q(d),
            Relation::Le,
            q(3 * m + 3),
        )
        .under(nonneg, hyp(HYP_KODAIRA))
    } else {
        Verdict::not_applicable(
            "degree-bound-euler",
            "d <= 3m + 3 when e(D) >= 0",
            Relation::Le,
            "e(D) < 0".into(),
        )
    });
    verdicts.push(if euler > 0 {
        Verdict::evaluate(
            "degree-bound-positive-euler",
            "d <= 3m + 2 when e(D) > 0",
            q(d),
            Relation::Le,
            q(3 * m + 2),
        )
        .under(nonneg, hyp(HYP_KODAIRA))
    } else {
        Verdict::not_applicable(
            "degree-bound-positive-euler",
            "d <= 3m + 2 when e(D) > 0",
            Relation::Le,
            "e(D) <= 0".into(),
        )
    });
    if rational_cuspidal && kappa >= 1 {
        verdicts.push(Verdict::evaluate(
            "rational-cuspidal-degree",
            "d < 3m for a rational cuspidal curve",
            q(d),
            Relation::Lt,
            q(3 * m),
        ));
        let ratio = germs
            .iter()
            .fold(Q::zero(), |acc, (g, k)| acc + int(g.mu()) / int(g.m()) * int(*k));
        verdicts.push(Verdict::evaluate(
            "rational-cuspidal-milnor",
            "Σ μ_i/m_i <= 3d - 4 for a rational cuspidal curve",
            ratio,
            Relation::Le,
            q(3 * d - 4),
        ));
    } else {
        for (id, st) in [
            ("rational-cuspidal-degree", "d < 3m for a rational cuspidal curve"),
            (
                "rational-cuspidal-milnor",
                "Σ μ_i/m_i <= 3d - 4 for a rational cuspidal curve",
            ),
        ] {
            verdicts.push(Verdict::not_applicable(
                id,
                st,
                Relation::Le,
                "needs a singular rational cuspidal curve".into(),
            ));
        }
    }

    // Plücker formulas, only for curves whose singular points are ordinary cusps.
    if germs.iter().all(|(g, _)| g.is_ordinary_cusp()) {
        let (_, _, pv) = plucker_bounds(c.degree, kappa);
        verdicts.extend(pv.into_iter().map(|v| v.under(c.plucker, hyp(HYP_PLUCKER))));
    } else {
        verdicts.push(Verdict::not_applicable(
            "plucker-class",
            "0 < d* = d(d - 1) - 3κ",
            Relation::Lt,
            "singular points other than ordinary cusps".into(),
        ));
    }

    // Logarithmic BMY.
    verdicts.push(
        Verdict::evaluate(
            "log-bmy",
            "(K + D~)^2 <= 3 e(P^2 \\ D)",
            kdt2.clone(),
            Relation::Le,
            q(3 * complement_euler),
        )
        .under(nonneg, hyp(HYP_KODAIRA)),
    );
    verdicts.push(match &h2 {
        Some(h) => Verdict::evaluate(
            "nef-bmy",
            "H^2 <= 3 e(P^2 \\ D)",
            h.clone(),
            Relation::Le,
            q(3 * complement_euler),
        )
        .under(general, hyp(HYP_GENERAL)),
        None => Verdict::not_applicable(
            "nef-bmy",
            "H^2 <= 3 e(P^2 \\ D)",
            Relation::Le,
            "global H^2 is only known for rational cuspidal curves with at least three cusps".into(),
        ),
    });

    // Cusp count for rational cuspidal curves.
    if rational_cuspidal {
        let bound = q(6) - q(2) * &kdt2;
        let enough_cusps = kappa >= 3;
        let mut assumed = hyp(HYP_LOCAL_GLOBAL);
        if !enough_cusps {
            assumed = vec![format!("{HYP_LOCAL_GLOBAL}; only {kappa} cusps")];
        }
        if let (Some(h), Some(n)) = (&h2, &n2) {
            verdicts.push(Verdict::evaluate(
                "cusp-count-chain",
                "(K + D~)^2 < H^2 - κ/2",
                h + n,
                Relation::Lt,
                h - frac(kappa as i64, 2),
            ));
        }
        verdicts.push(
            Verdict::evaluate(
                "cusp-count",
                "κ < 6 - 2(K + D~)^2",
                int(kappa),
                Relation::Lt,
                bound.clone(),
            )
            .under(enough_cusps && local_global, assumed),
        );
        let k_kdt = k_kdt.clone().expect("rational cuspidal");
        verdicts.push(Verdict::evaluate(
            "cusp-count-genus-zero",
            "6 - 2(K + D~)^2 = 10 - 2K(K + D~)",
            bound,
            Relation::Eq,
            q(10) - q(2) * &k_kdt,
        ));
        verdicts.push(
            Verdict::evaluate(
                "rigidity-euler",
                "K(K + D~) >= 0 (needed for κ < 10 by this route)",
                k_kdt.clone(),
                Relation::Ge,
                q(0),
            )
            .info(),
        );
        verdicts.push(
            Verdict::evaluate(
                "rigidity-equality",
                "(K + D~)^2 = -2",
                kdt2.clone(),
                Relation::Eq,
                q(-2),
            )
            .info(),
        );
        if k_kdt >= Q::zero() {
            verdicts.push(Verdict::evaluate("cusp-count-rigid", "κ < 10", int(kappa), Relation::Lt, q(10)).info());
        }
    } else {
        verdicts.push(Verdict::not_applicable(
            "cusp-count",
            "κ < 6 - 2(K + D~)^2",
            Relation::Lt,
            "needs an irreducible rational cuspidal curve".into(),
        ));
    }

    if !nonneg {
        assumptions.push(format!("Kodaira dimension unknown: {}", kodaira.reason));
    }
    Ok(CurveReport {
        name: c.name.clone(),
        degree: c.degree,
        germs,
        irreducible: c.irreducible,
        rational,
        cuspidal,
        singular_points,
        kappa,
        max_multiplicity,
        sum_mu,
        sum_delta,
        genus,
        euler,
        complement_euler,
        kdt2,
        k_kdt,
        h2,
        n2,
        kodaira,
        verdicts,
        assumptions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp_input(s: &str) -> GermInput {
        GermInput::Puiseux(s.parse().unwrap())
    }

    fn curve(d: u64, cusps: u64, rational: bool) -> CurveSpec {
        CurveSpec {
            singularities: vec![(cusp_input("(2; 3)"), cusps)],
            irreducible: Some(true),
            rational: rational.then_some(true),
            plucker: true,
            ..CurveSpec::new(d)
        }
    }

    #[test]
    fn local_bound_examples() {
        let a = analyze_germ(&cusp_input("(2; 3)")).unwrap();
        let v = &a.verdicts[0];
        assert_eq!(v.sides, Some((q(1), q(1))));
        assert!(a.verdicts.iter().all(|v| v.status == Status::Holds), "{:?}", a.verdicts);

        let a = analyze_germ(&cusp_input("(3; 4)")).unwrap();
        assert_eq!(a.verdicts[0].sides, Some((q(3), q(4))));
        assert_eq!(a.verdicts[1].sides, Some((q(0), q(0))));

        let node = GermInput::Proximity(ProximityMatrix::new(vec![vec![]], vec![2]).unwrap());
        let a = analyze_germ(&node).unwrap();
        assert_eq!(a.verdicts[0].sides, Some((q(0), frac(1, 2))));
    }

    #[test]
    fn branch_excess_values() {
        let v = |s: &str| branch_excess(&puiseux::derive_data(&s.parse().unwrap()).unwrap()).unwrap();
        assert_eq!(v("(2; 3)"), q(0));
        assert_eq!(v("(2; 5)"), q(0));
        assert_eq!(v("(3; 4)"), q(1));
    }

    #[test]
    fn claim_examples() {
        assert_eq!(claim_check(&frac(1, 2)).unwrap(), (frac(1, 2), true));
        let (v, eq) = claim_check(&frac(1, 3)).unwrap();
        assert!(!eq && v > frac(1, 2));
        assert!(claim_check(&q(1)).is_err());
    }

    #[test]
    fn plucker_examples() {
        let (c, f, v) = plucker_bounds(6, 9);
        assert_eq!((c, f), (3, 0));
        assert!(v.iter().all(Verdict::holds));
        let (c, f, _) = plucker_bounds(4, 3);
        assert_eq!((c, f), (3, 0));
        let (_, _, v) = plucker_bounds(5, 8);
        assert!(!v[1].holds());
    }

    #[test]
    fn family_examples() {
        let f = sextic_family(1).unwrap();
        assert_eq!((f.degree, f.cusps, f.ratio.clone()), (6, 9, frac(1, 4)));
        let f = sextic_family(2).unwrap();
        assert_eq!((f.degree, f.cusps), (12, 36));
        assert!(f.flex_bound.holds());
    }

    #[test]
    fn sextic_quartic_cubic() {
        let r = certify(&curve(6, 9, false)).unwrap();
        assert_eq!(r.verdict("weighted-milnor").unwrap().sides, Some((frac(45, 2), q(27))));
        assert_eq!((r.euler, r.kdt2.clone()), (0, q(0)));
        assert_eq!(r.verdict("log-bmy").unwrap().sides, Some((q(0), q(9))));
        assert_eq!(r.verdict("euler-bound").unwrap().sides, Some((q(-18), q(0))));
        assert!(!r.any_failure());

        let r = certify(&curve(4, 3, true)).unwrap();
        assert_eq!(r.kdt2, q(-2));
        assert_eq!(r.h2, Some(frac(1, 2)));
        assert_eq!(r.kodaira.value, Kodaira::GeneralType);
        assert_eq!(r.verdict("cusp-count").unwrap().sides, Some((q(3), q(10))));
        assert_eq!(r.verdict("cusp-count").unwrap().status, Status::Holds);
        assert_eq!(r.verdict("rational-cuspidal-milnor").unwrap().sides, Some((q(3), q(8))));
        assert!(!r.any_failure());

        let r = certify(&curve(3, 1, true)).unwrap();
        assert_eq!(r.kodaira.value, Kodaira::Unknown);
        assert_eq!(r.verdict("weighted-milnor").unwrap().status, Status::Conditional);
    }

    #[test]
    fn quintic_with_six_cusps_is_rational() {
        let r = certify(&curve(5, 6, true)).unwrap();
        assert_eq!(r.genus, Some(0));
        assert_eq!(r.rational, Some(true));
    }

    #[test]
    fn unrealizable_configuration_fails() {
        // Ten ordinary cusps on a sextic: negative genus.
        let r = certify(&curve(6, 11, false)).unwrap();
        assert!(r.any_failure());
        assert_eq!(r.verdict("genus").unwrap().status, Status::Fails);
    }
}
