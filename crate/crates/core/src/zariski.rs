//! Orthogonal projections of `K`, `D~ = D' + E` and `D'` onto the span of
//! the exceptional curves, and the local decomposition
//! `K_E + D~_E = H_E + N_E` with `N_E` supported on the arrowless twigs.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::check::{first_violation, IdentityCheck};
use crate::exact::{ceil, fmt_q, q, ufrac, LinAlgError, QVector, Q};
use crate::puiseux::{self, PuiseuxData};
use crate::wtree::{TreeError, Twig, VertexId, WeightedTree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZariskiError {
    #[error("intersection form is singular")]
    SingularForm,
    #[error("twig through E{} has weight {weight} >= -1", .vertex + 1)]
    InadmissibleTwig { vertex: VertexId, weight: i64 },
    #[error("{equation} violated: {lhs} != {rhs}")]
    IdentityViolation {
        equation: &'static str,
        lhs: String,
        rhs: String,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

impl From<LinAlgError> for ZariskiError {
    fn from(_: LinAlgError) -> Self {
        ZariskiError::SingularForm
    }
}

impl From<&IdentityCheck> for ZariskiError {
    fn from(c: &IdentityCheck) -> Self {
        ZariskiError::IdentityViolation {
            equation: c.name,
            lhs: fmt_q(&c.lhs),
            rhs: fmt_q(&c.rhs),
        }
    }
}

fn ensure(checks: &[IdentityCheck]) -> Result<(), ZariskiError> {
    match first_violation(checks) {
        Some(c) => Err(c.into()),
        None => Ok(()),
    }
}

/// `K·E_i = -2 - E_i^2` (all components rational).
pub fn canonical_pairings(g: &WeightedTree) -> QVector {
    (0..g.len()).map(|v| q(-2 - g.weight(v))).collect()
}

/// `D'·E_i`: number of branches through `E_i`.
pub fn strict_pairings(g: &WeightedTree) -> QVector {
    (0..g.len()).map(|v| q(g.arrows(v) as i64)).collect()
}

/// `D~·E_i = D'·E_i + E·E_i`.
pub fn boundary_pairings(g: &WeightedTree) -> QVector {
    (0..g.len())
        .map(|v| q(g.arrows(v) as i64 + g.weight(v) + g.valency(v) as i64))
        .collect()
}

/// The divisor `Z_E` supported on `E` with `Z_E·E_i = pairings[i]`.
pub fn project(g: &WeightedTree, pairings: &[Q]) -> Result<QVector, ZariskiError> {
    Ok(g.solve(pairings)?)
}

/// `N_E`: on each arrowless twig, the unique divisor making
/// `H_E = KDT - N_E` orthogonal to every curve of the twig.
pub fn negative_part(g: &WeightedTree, kdt: &[Q]) -> Result<QVector, ZariskiError> {
    let twigs = admissible_twigs(g)?;
    if kdt.len() != g.len() {
        return Err(ZariskiError::SingularForm);
    }
    // (K_E + D~_E)·E_v for the vertices on twigs.
    let target = |v: VertexId| -> Q {
        g.neighbors(v)
            .iter()
            .fold(q(g.weight(v)) * &kdt[v], |acc, &u| acc + &kdt[u])
    };
    let mut n = vec![Q::zero(); g.len()];
    for twig in &twigs {
        let form = g.form_on(&twig.vertices);
        let rhs: Vec<Q> = twig.vertices.iter().map(|&v| target(v)).collect();
        let sol = form.solve(&rhs)?;
        for (k, &v) in twig.vertices.iter().enumerate() {
            n[v] = sol[k].clone();
        }
    }
    let mut checks = Vec::new();
    let mut ind_sum = Q::zero();
    for twig in &twigs {
        let d = g.discriminant_of(&twig.set());
        checks.push(IdentityCheck::new(
            "N_E coefficient at the first vertex of T = 1/d(T)",
            n[twig.first()].clone(),
            d.recip(),
        ));
        ind_sum += g.inductance(twig)?;
    }
    checks.push(IdentityCheck::new("-N_E^2 = Σ ind(T)", -g.pair(&n, &n)?, ind_sum));
    ensure(&checks)?;
    Ok(n)
}

fn admissible_twigs(g: &WeightedTree) -> Result<Vec<Twig>, ZariskiError> {
    let twigs = g.twigs_without_arrows();
    for t in &twigs {
        if let Some(&v) = t.vertices.iter().find(|&&v| g.weight(v) > -2) {
            return Err(ZariskiError::InadmissibleTwig {
                vertex: v,
                weight: g.weight(v),
            });
        }
    }
    Ok(twigs)
}

/// Projections and the local decomposition of one germ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalDecomposition {
    pub k: QVector,
    pub dt: QVector,
    pub dp: QVector,
    pub h: QVector,
    pub n: QVector,
    pub twigs: Vec<Twig>,
    /// `1 - D'_E(K_E + D~_E)`.
    pub mu: Q,
    pub h2: Q,
    pub n2: Q,
    /// `(K_E + D~_E)^2`.
    pub kdt2: Q,
    /// `(K_E + E)^2`.
    pub ke2: Q,
}

impl LocalDecomposition {
    pub fn kdt(&self) -> QVector {
        self.k.iter().zip(&self.dt).map(|(a, b)| a + b).collect()
    }

    /// Sum of the inductances of the twigs, i.e. `-N_E^2`.
    pub fn minus_n2(&self) -> Q {
        -self.n2.clone()
    }
}

pub fn decompose(g: &WeightedTree) -> Result<LocalDecomposition, ZariskiError> {
    let k = project(g, &canonical_pairings(g))?;
    let dt = project(g, &boundary_pairings(g))?;
    let dp = project(g, &strict_pairings(g))?;
    let kdt: QVector = k.iter().zip(&dt).map(|(a, b)| a + b).collect();
    let n = negative_part(g, &kdt)?;
    let h: QVector = kdt.iter().zip(&n).map(|(a, b)| a - b).collect();
    let twigs = g.twigs_without_arrows();

    let h2 = g.pair(&h, &h)?;
    let n2 = g.pair(&n, &n)?;
    let kdt2 = g.pair(&kdt, &kdt)?;
    let ke: QVector = k.iter().map(|c| c + Q::one()).collect();
    let ke2 = g.pair(&ke, &ke)?;
    let mu = Q::one() - g.pair(&dp, &kdt)?;

    let mut checks = vec![
        IdentityCheck::new("(K_E + D~_E)^2 = H_E^2 + N_E^2", kdt2.clone(), &h2 + &n2),
        IdentityCheck::new("H_E·N_E = 0", g.pair(&h, &n)?, Q::zero()),
    ];
    for t in &twigs {
        for &v in &t.vertices {
            let mut e = vec![Q::zero(); g.len()];
            e[v] = Q::one();
            checks.push(IdentityCheck::new(
                "H_E·E_i = 0 on supp N_E",
                g.pair(&h, &e)?,
                Q::zero(),
            ));
        }
    }
    ensure(&checks)?;
    if n.iter().any(Signed::is_negative) || n2.is_positive() {
        return Err(ZariskiError::IdentityViolation {
            equation: "N_E effective with N_E^2 <= 0",
            lhs: fmt_q(&n2),
            rhs: "0".into(),
        });
    }
    Ok(LocalDecomposition {
        k,
        dt,
        dp,
        h,
        n,
        twigs,
        mu,
        h2,
        n2,
        kdt2,
        ke2,
    })
}

/// `H^2`, `(K_E + E)^2` and `μ` through entries of `B = A^{-1}`, each
/// compared with the direct quadratic-form value in `dec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseFormulaValues {
    pub h2: Q,
    pub ke2: Q,
    pub mu: Q,
}

pub fn inverse_formula_values(
    g: &WeightedTree,
    dec: &LocalDecomposition,
) -> Result<InverseFormulaValues, ZariskiError> {
    let n = g.len();
    let mut columns: Vec<Option<QVector>> = vec![None; n];
    let mut b = |i: VertexId, j: VertexId| -> Result<Q, ZariskiError> {
        if columns[j].is_none() {
            let mut e = vec![Q::zero(); n];
            e[j] = Q::one();
            columns[j] = Some(g.solve(&e)?);
        }
        Ok(columns[j].as_ref().unwrap()[i].clone())
    };

    // c_i = H·E_i off the twigs: (ν~_i - 2) minus 1/d(T) for each adjacent twig.
    let mut in_twig = vec![false; n];
    let mut c: Vec<Q> = (0..n).map(|v| q(g.full_valency(v) as i64 - 2)).collect();
    for t in &dec.twigs {
        for &v in &t.vertices {
            in_twig[v] = true;
        }
        let d = g.discriminant_of(&t.set());
        for &u in g.neighbors(t.first()) {
            if !t.vertices.contains(&u) {
                c[u] -= d.recip();
            }
        }
    }
    let support: Vec<VertexId> = (0..n).filter(|&v| !in_twig[v] && !c[v].is_zero()).collect();
    let mut h2 = Q::zero();
    for &i in &support {
        for &j in &support {
            h2 += b(i, j)? * &c[i] * &c[j];
        }
    }

    let mut ke2 = q(-2);
    for v in (0..n).filter(|&v| g.valency(v) != 2) {
        ke2 -= b(v, v)? * q(g.valency(v) as i64 - 2);
    }

    let mut mu = Q::one();
    let branching: Vec<VertexId> = (0..n).filter(|&v| g.full_valency(v) != 2).collect();
    for j in (0..n).filter(|&v| g.arrows(v) > 0) {
        for &i in &branching {
            mu -= b(i, j)? * q(g.full_valency(i) as i64 - 2) * q(g.arrows(j) as i64);
        }
    }

    ensure(&[
        IdentityCheck::new("H^2 = Σ b_ij c_i c_j", h2.clone(), dec.h2.clone()),
        IdentityCheck::new("(K_E + E)^2 = -2 - Σ b_ii(ν_i - 2)", ke2.clone(), dec.ke2.clone()),
        IdentityCheck::new("μ = 1 - Σ b_ij(ν~_i - 2)(ν~_j - ν_j)", mu.clone(), dec.mu.clone()),
    ])?;
    Ok(InverseFormulaValues { h2, ke2, mu })
}

/// `μ`, `H_E^2`, `N_E^2`, `(K_E + D~_E)^2` of a branch straight from its
/// Puiseux data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForms {
    pub mu: Q,
    pub h2: Q,
    pub n2: Q,
    pub kdt2: Q,
}

pub fn closed_forms(p: &PuiseuxData) -> ClosedForms {
    let f = |a: u64, b: u64| Q::new((a as i64).into(), (b as i64).into());
    let (d, r, h) = (&p.d, &p.r, p.h);
    let mu = q(puiseux::milnor_forms(p).0);

    // 2μ + H^2, in its r-form; the q-form is checked in tests.
    let mut two_mu_h2 = -f(d[0], r[0]);
    for i in 0..h {
        two_mu_h2 += f(r[i], d[i + 1]) * (f(d[i], d[i + 1]) - f(d[i + 1], d[i]));
    }
    let mut minus_n2 = ufrac(&f(d[0], r[0]));
    for i in 0..h {
        minus_n2 += ufrac(&f(r[i], d[i]));
    }
    let mut two_mu_kdt2 = -Q::from(ceil(&f(d[0], r[0])));
    for i in 0..h {
        two_mu_kdt2 += f(r[i] * d[i], d[i + 1] * d[i + 1]) - Q::from(ceil(&f(r[i], d[i])));
    }
    let two_mu = &mu * q(2);
    ClosedForms {
        h2: two_mu_h2 - &two_mu,
        n2: -minus_n2,
        kdt2: two_mu_kdt2 - two_mu,
        mu,
    }
}

/// The `q`-form of `2μ + H^2`: `-d_1/q_1 + Σ q_i (d_i - 1/d_i)`.
pub fn two_mu_plus_h2_via_q(p: &PuiseuxData) -> Q {
    let f = |a: u64, b: u64| Q::new((a as i64).into(), (b as i64).into());
    let mut acc = -f(p.d[0], p.q[0]);
    for i in 0..p.h {
        acc += q(p.q[i] as i64) * (q(p.d[i] as i64) - f(1, p.d[i]));
    }
    acc
}

/// One-pair values for `x^m = y^n`: `-H^2 = (m-2)(n-2) + (m-n)^2/(mn)` and
/// `-N^2 = ]m/n[ + ]n/m[`.
pub fn one_pair_values(m: u64, n: u64) -> (Q, Q) {
    let (mi, ni) = (m as i64, n as i64);
    let h2 = -(q((mi - 2) * (ni - 2)) + Q::new(((mi - ni) * (mi - ni)).into(), (mi * ni).into()));
    let n2 = -(ufrac(&Q::new(mi.into(), ni.into())) + ufrac(&Q::new(ni.into(), mi.into())));
    (h2, n2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qr;
    use crate::puiseux::CharSequence;
    use crate::resolution::resolve_irreducible;

    fn cusp() -> WeightedTree {
        WeightedTree::new(vec![-3, -2, -1], &[(0, 2), (1, 2)], vec![0, 0, 1]).unwrap()
    }

    fn node() -> WeightedTree {
        WeightedTree::new(vec![-1], &[], vec![2]).unwrap()
    }

    fn graph_of(s: &str) -> WeightedTree {
        resolve_irreducible(&s.parse::<CharSequence>().unwrap())
            .unwrap()
            .0
            .dual_graph
    }

    #[test]
    fn projections_of_small_graphs() {
        let g = node();
        assert_eq!(project(&g, &canonical_pairings(&g)).unwrap(), vec![q(1)]);
        assert_eq!(project(&g, &boundary_pairings(&g)).unwrap(), vec![q(-1)]);
        let dec = decompose(&g).unwrap();
        assert_eq!(dec.kdt(), vec![q(0)]);
        assert_eq!(dec.n, vec![q(0)]);

        let g = cusp();
        assert_eq!(project(&g, &canonical_pairings(&g)).unwrap(), vec![q(1), q(2), q(4)]);
        let dec = decompose(&g).unwrap();
        assert_eq!(dec.kdt(), vec![q(0), q(0), q(-1)]);
        assert_eq!(dec.kdt2, q(-1));
    }

    #[test]
    fn negative_part_examples() {
        let dec = decompose(&cusp()).unwrap();
        assert_eq!(dec.n, vec![qr(1, 3), qr(1, 2), q(0)]);
        assert_eq!(dec.n2, qr(-5, 6));
        assert_eq!(decompose(&graph_of("(3; 4)")).unwrap().n2, qr(-11, 12));
    }

    #[test]
    fn inadmissible_twig_is_rejected() {
        let g = WeightedTree::new(vec![-1, -2, -2], &[(0, 2), (1, 2)], vec![0, 0, 1]).unwrap();
        assert!(matches!(
            decompose(&g),
            Err(ZariskiError::InadmissibleTwig { vertex: 0, weight: -1 })
        ));
    }

    #[test]
    fn inverse_formulas() {
        let g = cusp();
        let dec = decompose(&g).unwrap();
        let v = inverse_formula_values(&g, &dec).unwrap();
        assert_eq!((v.h2, v.mu), (qr(-1, 6), q(2)));
        assert_eq!(v.ke2, q(-5));

        let g = graph_of("(3; 4)");
        let dec = decompose(&g).unwrap();
        let v = inverse_formula_values(&g, &dec).unwrap();
        assert_eq!((v.h2, v.mu), (qr(-25, 12), q(6)));

        let g = node();
        let dec = decompose(&g).unwrap();
        assert_eq!(dec.mu, q(1));
        assert_eq!(inverse_formula_values(&g, &dec).unwrap().mu, q(1));
    }

    #[test]
    fn closed_form_examples() {
        let data = |s: &str| puiseux::derive_data(&s.parse().unwrap()).unwrap();
        let cf = closed_forms(&data("(2; 3)"));
        assert_eq!((cf.mu, cf.h2, cf.n2, cf.kdt2), (q(2), qr(-1, 6), qr(-5, 6), q(-1)));
        let cf = closed_forms(&data("(2; 5)"));
        assert_eq!((cf.mu, cf.h2, cf.n2, cf.kdt2), (q(4), qr(-9, 10), qr(-11, 10), q(-2)));

        let p = data("(4; 6, 7)");
        let cf = closed_forms(&p);
        assert_eq!(cf.mu, q(16));
        assert_eq!(two_mu_plus_h2_via_q(&p), &cf.h2 + q(32));
        let g = graph_of("(4; 6, 7)");
        let dec = decompose(&g).unwrap();
        assert_eq!((dec.mu, dec.h2, dec.n2, dec.kdt2), (cf.mu, cf.h2, cf.n2, cf.kdt2));
    }

    #[test]
    fn one_pair_agrees_with_closed_forms() {
        for (m, n) in [(2, 3), (3, 4), (2, 5), (3, 5), (5, 7), (4, 9)] {
            let cf = closed_forms(&puiseux::derive_data(&CharSequence::new(m, vec![n]).unwrap()).unwrap());
            assert_eq!(one_pair_values(m, n), (cf.h2, cf.n2), "({m}; {n})");
        }
    }
}
