//! Puiseux characteristic sequences of irreducible plane curve germs and the
//! data `(d_i), (q_i), (r_i)` derived from them.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PuiseuxError {
    #[error("invalid characteristic sequence: {0}")]
    InvalidSequence(String),
    #[error("cannot parse characteristic sequence {0:?}: expected \"(m; m1, m2, ...)\"")]
    Parse(String),
    #[error("internal identity violated: {0}")]
    Identity(String),
}

/// `(m; m_1, ..., m_h)`: multiplicity and characteristic exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharSequence {
    m: u64,
    exponents: Vec<u64>,
}

impl CharSequence {
    /// Validates the sequence; nothing is reordered or reduced.
    pub fn new(m: u64, exponents: Vec<u64>) -> Result<Self, PuiseuxError> {
        let bad = |msg: String| Err(PuiseuxError::InvalidSequence(msg));
        if m < 2 {
            return bad(format!("multiplicity {m} must be at least 2"));
        }
        let Some(&first) = exponents.first() else {
            return bad("no characteristic exponents".into());
        };
        if first <= m {
            return bad(format!("m = {m} must be smaller than m1 = {first}"));
        }
        let mut d = m;
        let mut prev = 0;
        for (i, &e) in exponents.iter().enumerate() {
            if e <= prev {
                return bad(format!("exponents must strictly increase (m{} = {e})", i + 1));
            }
            if d == 1 {
                return bad(format!("gcd already 1 before m{} = {e}", i + 1));
            }
            let next = d.gcd(&e);
            if next == d {
                return bad(if i == 0 {
                    format!("m = {m} divides m1 = {e}")
                } else {
                    format!("d{} = {d} divides m{} = {e}", i + 1, i + 1)
                });
            }
            d = next;
            prev = e;
        }
        if d != 1 {
            return bad(format!("gcd chain ends at {d}, not 1"));
        }
        Ok(CharSequence { m, exponents })
    }

    pub fn multiplicity(&self) -> u64 {
        self.m
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn pairs(&self) -> usize {
        self.exponents.len()
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ex: Vec<String> = self.exponents.iter().map(u64::to_string).collect();
        write!(f, "({}; {})", self.m, ex.join(", "))
    }
}

impl FromStr for CharSequence {
    type Err = PuiseuxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PuiseuxError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (m, rest) = inner.split_once(';').ok_or_else(bad)?;
        let m: u64 = m.trim().parse().map_err(|_| bad())?;
        let exponents = rest
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        CharSequence::new(m, exponents)
    }
}

/// The Puiseux data of a characteristic sequence, indexed from zero:
/// `d[0] = m`, `d[h] = 1`, and pair `i` is `(m[i], q[i], r[i])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxData {
    pub h: usize,
    pub m: Vec<u64>,
    pub d: Vec<u64>,
    pub q: Vec<u64>,
    pub r: Vec<u64>,
}

impl PuiseuxData {
    pub fn multiplicity(&self) -> u64 {
        self.d[0]
    }

    /// `n = m_1`.
    pub fn first_exponent(&self) -> u64 {
        self.m[0]
    }

    pub fn is_one_pair(&self) -> bool {
        self.h == 1
    }
}

pub fn derive_data(c: &CharSequence) -> Result<PuiseuxData, PuiseuxError> {
    let h = c.exponents.len();
    let mut d = vec![c.m];
    for &e in &c.exponents {
        d.push(d.last().unwrap().gcd(&e));
    }
    if d[h] != 1 || d.windows(2).any(|w| w[0] <= w[1]) {
        return Err(PuiseuxError::InvalidSequence(format!("gcd chain {d:?}")));
    }
    let q: Vec<u64> = c
        .exponents
        .iter()
        .enumerate()
        .map(|(i, &e)| if i == 0 { e } else { e - c.exponents[i - 1] })
        .collect();
    let mut r = Vec::with_capacity(h);
    let mut acc = 0u64;
    for i in 0..h {
        acc += q[i] * d[i];
        if !acc.is_multiple_of(d[i]) {
            return Err(PuiseuxError::Identity(format!("d{} does not divide r{}", i + 1, i + 1)));
        }
        r.push(acc / d[i]);
    }
    // Each gcd step at least halves d, so 2^h <= m.
    if (1u64 << h.min(63)) > c.m {
        return Err(PuiseuxError::Identity(format!("h = {h} exceeds log2 m")));
    }
    Ok(PuiseuxData {
        h,
        m: c.exponents.clone(),
        d,
        q,
        r,
    })
}

/// Both closed forms of the Milnor number:
/// `1 - d_1 + Σ r_i (d_i/d_{i+1} - 1)` and `1 - d_1 + Σ q_i (d_i - 1)`.
pub fn milnor_forms(p: &PuiseuxData) -> (i64, i64) {
    let d = |i: usize| p.d[i] as i64;
    let via_r = 1 - d(0) + (0..p.h).map(|i| p.r[i] as i64 * (d(i) / d(i + 1) - 1)).sum::<i64>();
    let via_q = 1 - d(0) + (0..p.h).map(|i| p.q[i] as i64 * (d(i) - 1)).sum::<i64>();
    (via_r, via_q)
}

pub fn milnor(p: &PuiseuxData) -> Result<u64, PuiseuxError> {
    let (a, b) = milnor_forms(p);
    if a != b {
        return Err(PuiseuxError::Identity(format!(
            "Milnor closed forms disagree: {a} vs {b}"
        )));
    }
    if a <= 0 || a % 2 != 0 {
        return Err(PuiseuxError::Identity(format!(
            "Milnor number {a} is not positive and even"
        )));
    }
    Ok(a as u64)
}

/// Multiplicities at all infinitely near points of the minimal embedded
/// resolution, from Euclid's algorithm on each characteristic pair.
pub fn multiplicity_sequence(c: &CharSequence) -> Result<Vec<u64>, PuiseuxError> {
    let mut seq = Vec::new();
    let mut e = c.m;
    let mut prev = 0;
    for &b in &c.exponents {
        let (mut a, mut bb) = (b - prev, e);
        while bb != 0 {
            let (quot, rem) = a.div_rem(&bb);
            seq.extend(std::iter::repeat_n(bb, quot as usize));
            a = bb;
            bb = rem;
        }
        e = e.gcd(&b);
        prev = b;
    }
    let p = derive_data(c)?;
    let mu = milnor(&p)?;
    let sum: u64 = seq.iter().map(|m| m * (m - 1)).sum();
    if sum != mu {
        return Err(PuiseuxError::Identity(format!(
            "Σ m_j(m_j - 1) = {sum} differs from μ = {mu}"
        )));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(s: &str) -> CharSequence {
        s.parse().unwrap()
    }

    #[test]
    fn derive_data_examples() {
        let p = derive_data(&cs("(2; 3)")).unwrap();
        assert_eq!(
            (p.d.clone(), p.q.clone(), p.r.clone(), p.h),
            (vec![2, 1], vec![3], vec![3], 1)
        );
        let p = derive_data(&cs("(3; 4)")).unwrap();
        assert_eq!(
            (p.d.clone(), p.q.clone(), p.r.clone(), p.h),
            (vec![3, 1], vec![4], vec![4], 1)
        );
        let p = derive_data(&cs("(4; 6, 7)")).unwrap();
        assert_eq!((p.d, p.q, p.r, p.h), (vec![4, 2, 1], vec![6, 1], vec![6, 13], 2));
    }

    #[test]
    fn milnor_examples() {
        for (s, mu) in [("(2; 3)", 2), ("(3; 4)", 6), ("(4; 6, 7)", 16)] {
            let p = derive_data(&cs(s)).unwrap();
            assert_eq!(milnor(&p).unwrap(), mu, "{s}");
            let (a, b) = milnor_forms(&p);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn multiplicity_sequence_examples() {
        assert_eq!(multiplicity_sequence(&cs("(2; 3)")).unwrap(), vec![2, 1, 1]);
        assert_eq!(multiplicity_sequence(&cs("(3; 4)")).unwrap(), vec![3, 1, 1, 1]);
        assert_eq!(multiplicity_sequence(&cs("(4; 6, 7)")).unwrap(), vec![4, 2, 2, 1, 1]);
        assert_eq!(multiplicity_sequence(&cs("(2; 5)")).unwrap(), vec![2, 2, 1, 1]);
    }

    #[test]
    fn rejects_invalid_sequences() {
        for s in [
            "(2; 4)",
            "(3; 2)",
            "(4; 6)",
            "(4; 6, 8)",
            "(6; 9, 8)",
            "(1; 2)",
            "(2; 3, 5)",
        ] {
            assert!(
                matches!(s.parse::<CharSequence>(), Err(PuiseuxError::InvalidSequence(_))),
                "{s}"
            );
        }
        assert!(matches!("2; 3".parse::<CharSequence>(), Err(PuiseuxError::Parse(_))));
        assert!(matches!("(2; x)".parse::<CharSequence>(), Err(PuiseuxError::Parse(_))));
    }

    #[test]
    fn display_round_trip() {
        let c = cs("(4;6,7)");
        assert_eq!(c.to_string(), "(4; 6, 7)");
        assert_eq!(c.to_string().parse::<CharSequence>().unwrap(), c);
    }
}
