//! Seeded random inputs for the property suites.

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::{qr, Q};
use crate::puiseux::CharSequence;
use crate::resolution::ProximityMatrix;
use crate::wtree::WeightedTree;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random tree on `1..=max_n` vertices with weights in `-10..=-1`, no arrows.
pub fn random_tree<R: Rng>(rng: &mut R, max_n: usize) -> WeightedTree {
    let n = rng.gen_range(1..=max_n.max(1));
    let weights = (0..n).map(|_| rng.gen_range(-10..=-1)).collect();
    let edges: Vec<_> = (1..n).map(|j| (rng.gen_range(0..j), j)).collect();
    WeightedTree::new(weights, &edges, vec![0; n]).expect("attaching to earlier vertices gives a tree")
}

/// Random characteristic sequence with at most `max_h` pairs and
/// multiplicity at most `max_m`. Consecutive exponents differ by less than 30.
pub fn random_char_sequence<R: Rng>(rng: &mut R, max_h: usize, max_m: u64) -> CharSequence {
    loop {
        let h = rng.gen_range(1..=max_h.max(1));
        let m = rng.gen_range(2..=max_m.max(2));
        let (mut d, mut prev) = (m, m);
        let mut exponents = Vec::new();
        for _ in 0..h {
            if d == 1 {
                break;
            }
            let candidates: Vec<u64> = (prev + 1..prev + 30).filter(|e| e % d != 0).collect();
            let e = *candidates.choose(rng).expect("non-multiples of d exist");
            exponents.push(e);
            prev = e;
            d = d.gcd(&e);
        }
        if d == 1 {
            return CharSequence::new(m, exponents).expect("construction keeps the gcd chain valid");
        }
    }
}

/// Random proximity structure on `1..=max_n` points: each point is blown up
/// from a random earlier one, and sits at a free point or at the
/// intersection with an unused earlier curve. Leaves get enough branches
/// for the resolution to be minimal.
pub fn random_proximity<R: Rng>(rng: &mut R, max_n: usize) -> ProximityMatrix {
    let n = rng.gen_range(1..=max_n.max(1));
    let mut proximate: Vec<Vec<usize>> = vec![Vec::new()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    for j in 1..n {
        let p = rng.gen_range(0..j);
        let mut options: Vec<Option<usize>> = vec![None];
        options.extend(
            proximate[p]
                .iter()
                .copied()
                .filter(|i| !children[p].iter().any(|&c| proximate[c].contains(i)))
                .map(Some),
        );
        let row = match *options.choose(rng).unwrap() {
            None => vec![p],
            Some(o) => vec![o, p],
        };
        proximate.push(row);
        children.push(Vec::new());
        children[p].push(j);
    }
    let exits = (0..n)
        .map(|j| {
            if children[j].is_empty() {
                let base = if proximate[j].len() == 2 { 1 } else { 2 };
                base + u32::from(rng.gen_bool(0.3))
            } else {
                u32::from(rng.gen_bool(0.15))
            }
        })
        .collect();
    ProximityMatrix::new(proximate, exits).expect("generator respects the proximity rules")
}

/// Random rational in the open interval `(0, 1)` with denominator at most `max_den`.
pub fn random_unit_rational<R: Rng>(rng: &mut R, max_den: i64) -> Q {
    let b = rng.gen_range(2..=max_den.max(2));
    let a = rng.gen_range(1..b);
    qr(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_deterministic() {
        let (mut a, mut b) = (rng(7), rng(7));
        for _ in 0..20 {
            assert_eq!(random_char_sequence(&mut a, 3, 20), random_char_sequence(&mut b, 3, 20));
            assert_eq!(random_proximity(&mut a, 12), random_proximity(&mut b, 12));
            assert_eq!(random_tree(&mut a, 15), random_tree(&mut b, 15));
        }
    }

    #[test]
    fn rationals_stay_in_unit_interval() {
        let mut r = rng(1);
        for _ in 0..200 {
            let x = random_unit_rational(&mut r, 50);
            assert!(x > qr(0, 1) && x < qr(1, 1));
        }
    }
}
