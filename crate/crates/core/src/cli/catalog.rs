//! Built-in curves with ordinary cusps.

use crate::inequalities::{CurveSpec, GermInput};
use crate::puiseux::CharSequence;

pub struct Entry {
    pub name: &'static str,
    pub description: &'static str,
}

pub const ENTRIES: [Entry; 4] = [
    Entry {
        name: "cubic1",
        description: "cuspidal cubic: degree 3, one ordinary cusp, rational",
    },
    Entry {
        name: "quartic3",
        description: "Steiner quartic: degree 4, three ordinary cusps, rational",
    },
    Entry {
        name: "sextic9",
        description: "dual of a smooth cubic: degree 6, nine ordinary cusps, genus 1",
    },
    Entry {
        name: "hk:<k>",
        description: "F(x^k : y^k : z^k) = 0 for the nine-cuspidal sextic F: degree 6k, 9k^2 ordinary cusps",
    },
];

fn cusps(name: &str, degree: u64, count: u64, rational: bool, plucker: bool) -> CurveSpec {
    let cusp = CharSequence::new(2, vec![3]).expect("(2; 3) is valid");
    CurveSpec {
        name: Some(name.to_string()),
        singularities: vec![(GermInput::Puiseux(cusp), count)],
        irreducible: Some(true),
        rational: rational.then_some(true),
        plucker,
        ..CurveSpec::new(degree)
    }
}

pub fn lookup(name: &str) -> Option<CurveSpec> {
    match name {
        "cubic1" => Some(cusps(name, 3, 1, true, true)),
        "quartic3" => Some(cusps(name, 4, 3, true, true)),
        "sextic9" => Some(cusps(name, 6, 9, false, true)),
        _ => {
            let k: u64 = name.strip_prefix("hk:")?.parse().ok().filter(|&k| k >= 1)?;
            let degree = k.checked_mul(6)?;
            let count = k.checked_mul(k)?.checked_mul(9)?;
            Some(cusps(name, degree, count, false, k == 1))
        }
    }
}
