//! Arithmetic progressions q*n + a and their perfect-square positions.
//!
//! Progressions are kept in normalized form: scaling (q, a) by a square
//! produces the same square positions, so gcd(q, a) is reduced to its
//! squarefree part on construction.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{bi, int_sqrt, is_square_i128, is_square_int, squarefree_decompose, Int};
use crate::subsets::Subset;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArithProgression {
    q: Int,
    a: Int,
}

impl ArithProgression {
    pub fn new(q: Int, a: Int) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidProgression("q must be nonzero".into()));
        }
        let g = q.gcd(&a);
        let (_, f) = squarefree_decompose(&g)?;
        let f2 = &f * &f;
        Ok(ArithProgression { q: q / &f2, a: a / &f2 })
    }

    pub fn q(&self) -> &Int {
        &self.q
    }

    pub fn a(&self) -> &Int {
        &self.a
    }

    pub fn value(&self, n: u64) -> Int {
        &self.q * Int::from(n) + &self.a
    }

    pub fn is_square_at(&self, n: u64) -> bool {
        is_square_int(&self.value(n))
    }

    /// True when the progression is square at every position of I.
    pub fn covers(&self, i: &Subset) -> bool {
        i.elements().iter().all(|&n| self.is_square_at(n))
    }
}

impl fmt::Display for ArithProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.q, self.a)
    }
}

impl fmt::Debug for ArithProgression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ArithProgression {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = t.split(',');
        let err = || Error::Parse(format!("progression {s:?}"));
        let q: Int = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
        let a: Int = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
        if parts.next().is_some() {
            return Err(err());
        }
        ArithProgression::new(q, a)
    }
}

#[derive(Serialize, Deserialize)]
struct ApWire {
    q: String,
    a: String,
}

impl Serialize for ArithProgression {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ApWire {
            q: self.q.to_string(),
            a: self.a.to_string(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ArithProgression {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = ApWire::deserialize(d)?;
        let q: Int = w.q.parse().map_err(D::Error::custom)?;
        let a: Int = w.a.parse().map_err(D::Error::custom)?;
        ArithProgression::new(q, a).map_err(D::Error::custom)
    }
}

/// The square positions of a progression within a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarePositions {
    pub progression: ArithProgression,
    pub window: u64,
    pub positions: Vec<u64>,
}

impl SquarePositions {
    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn as_subset(&self) -> Option<Subset> {
        Subset::new(self.positions.clone()).ok()
    }
}

/// Positions n in 0..window with q*n + a a perfect square.
pub fn squares_in_ap(q: &Int, a: &Int, window: u64) -> Result<SquarePositions> {
    if q.is_zero() {
        return Err(Error::InvalidProgression("q must be nonzero".into()));
    }
    let mut positions = Vec::new();
    let fast = match (q.to_i128(), a.to_i128()) {
        (Some(qs), Some(as_)) => {
            let end = qs
                .checked_mul(window as i128)
                .and_then(|v| v.checked_add(as_));
            end.map(|_| (qs, as_))
        }
        _ => None,
    };
    if let Some((qs, as_)) = fast {
        let mut v = as_;
        for n in 0..window {
            if v >= 0 && is_square_i128(v) {
                positions.push(n);
            }
            v += qs;
        }
    } else {
        for n in 0..window {
            let v = q * Int::from(n) + a;
            if !v.is_negative() && is_square_int(&v) {
                positions.push(n);
            }
        }
    }
    Ok(SquarePositions {
        progression: ArithProgression::new(q.clone(), a.clone())?,
        window,
        positions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialKind {
    Pentagonal,
    Triangular,
}

/// Generalized pentagonal numbers k(3k-1)/2 for k in Z, or triangular
/// numbers k(k+1)/2, listed ascending below the bound.
pub fn special_positions(kind: SpecialKind, bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    match kind {
        SpecialKind::Pentagonal => {
            if bound > 0 {
                out.push(0);
            }
            let mut k = 1u64;
            loop {
                let plus = k * (3 * k - 1) / 2;
                let minus = k * (3 * k + 1) / 2;
                let mut pushed = false;
                if plus < bound {
                    out.push(plus);
                    pushed = true;
                }
                if minus < bound {
                    out.push(minus);
                    pushed = true;
                }
                if !pushed {
                    break;
                }
                k += 1;
            }
            out.sort_unstable();
        }
        SpecialKind::Triangular => {
            let mut k = 0u64;
            loop {
                let t = k * (k + 1) / 2;
                if t >= bound {
                    break;
                }
                out.push(t);
                k += 1;
            }
        }
    }
    out
}

/// All normalized progressions with max(|q|, |a|) <= bound that are
/// square at every position of I. Complete within the box.
pub fn search_aps(i: &Subset, bound: u64) -> Result<Vec<ArithProgression>> {
    if i.len() < 2 {
        return Err(Error::InvalidSubset("need at least two positions".into()));
    }
    let ns: Vec<i128> = i.elements().iter().map(|&n| n as i128).collect();
    let n0 = ns[0];
    let b = bound as i128;
    // x0^2 = a + q*n0 <= bound * (1 + n0)
    let x0_max = crate::arith::isqrt_u128((bound as u128) * (1 + n0 as u128)) as i128;
    let mut out = Vec::new();
    for q in -b..=b {
        if q == 0 {
            continue;
        }
        for x0 in 0..=x0_max {
            let a = x0 * x0 - q * n0;
            if a.abs() > b {
                continue;
            }
            let ok = ns.iter().skip(1).all(|&n| {
                let v = q * n + a;
                v >= 0 && is_square_i128(v)
            });
            if !ok {
                continue;
            }
            // keep only normalized pairs; the reduced form of a rejected
            // pair has smaller coordinates and is found on its own
            let g = bi(q as i64).gcd(&bi(a as i64));
            let (_, f) = squarefree_decompose(&g)?;
            if !f.is_one() {
                continue;
            }
            out.push(ArithProgression::new(Int::from(q), Int::from(a))?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Square roots of the progression values at the positions of I, as
/// projective coordinates of a point on the curve attached to I.
pub fn ap_to_point(i: &Subset, ap: &ArithProgression) -> Result<Vec<Int>> {
    let mut coords = Vec::with_capacity(i.len());
    for &n in i.elements() {
        let v = ap.value(n);
        let r = int_sqrt(&v).ok_or_else(|| {
            Error::InvalidProgression(format!("{ap} is not square at position {n}"))
        })?;
        coords.push(r);
    }
    Ok(coords)
}

/// Recover the progression from a non-trivial point: the coordinate
/// squares form the progression values along I.
pub fn point_to_ap(i: &Subset, coords: &[Int]) -> Result<ArithProgression> {
    if coords.len() != i.len() {
        return Err(Error::InvalidSubset(format!(
            "expected {} coordinates, got {}",
            i.len(),
            coords.len()
        )));
    }
    let ns = i.elements();
    let x0sq = &coords[0] * &coords[0];
    let x1sq = &coords[1] * &coords[1];
    let dn = Int::from(ns[1] - ns[0]);
    let diff = &x1sq - &x0sq;
    if !(&diff % &dn).is_zero() {
        return Err(Error::OffCurve);
    }
    let q = diff / dn;
    if q.is_zero() {
        return Err(Error::Degenerate(
            "trivial point: all coordinate squares are equal".into(),
        ));
    }
    let a = x0sq - &q * Int::from(ns[0]);
    for (&n, x) in ns.iter().zip(coords) {
        if &q * Int::from(n) + &a != x * x {
            return Err(Error::OffCurve);
        }
    }
    ArithProgression::new(q, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bi;
    use proptest::prelude::*;

    fn sub(v: &[u64]) -> Subset {
        Subset::new(v.to_vec()).unwrap()
    }

    fn ap(q: i64, a: i64) -> ArithProgression {
        ArithProgression::new(bi(q), bi(a)).unwrap()
    }

    #[test]
    fn normalization_divides_square_part_of_gcd() {
        assert_eq!(ap(384, 16), ap(24, 1));
        assert_eq!(ap(600, 25), ap(24, 1));
        assert_eq!(ap(216, 225), ap(24, 25));
        // gcd already squarefree: unchanged
        assert_eq!(ap(120, 49).q(), &bi(120));
        // negative q survives normalization
        assert_eq!(ap(-4, 196), ap(-1, 49));
    }

    #[test]
    fn squares_in_window_examples() {
        let s = squares_in_ap(&bi(24), &bi(1), 8).unwrap();
        assert_eq!(s.positions, vec![0, 1, 2, 5, 7]);
        let s = squares_in_ap(&bi(120), &bi(49), 5).unwrap();
        assert_eq!(s.positions, vec![0, 1, 2, 4]);
        let s = squares_in_ap(&bi(1), &bi(1), 3).unwrap();
        assert_eq!(s.positions, vec![0]);
        let s = squares_in_ap(&bi(5), &bi(3), 4).unwrap();
        assert_eq!(s.positions, Vec::<u64>::new());
        // negative q: only finitely many nonnegative values
        let s = squares_in_ap(&bi(-1), &bi(49), 50).unwrap();
        assert_eq!(s.positions, vec![0, 13, 24, 33, 40, 45, 48, 49]);
    }

    #[test]
    fn special_position_examples() {
        assert_eq!(
            special_positions(SpecialKind::Pentagonal, 13),
            vec![0, 1, 2, 5, 7, 12]
        );
        assert_eq!(
            special_positions(SpecialKind::Triangular, 11),
            vec![0, 1, 3, 6, 10]
        );
        assert_eq!(special_positions(SpecialKind::Pentagonal, 52).len(), 12);
    }

    #[test]
    fn pentagonal_positions_match_sieve() {
        let pent = special_positions(SpecialKind::Pentagonal, 2000);
        let sieve = squares_in_ap(&bi(24), &bi(1), 2000).unwrap();
        assert_eq!(pent, sieve.positions);
        let tri = special_positions(SpecialKind::Triangular, 2000);
        let sieve8 = squares_in_ap(&bi(8), &bi(1), 2000).unwrap();
        assert_eq!(tri, sieve8.positions);
    }

    #[test]
    fn search_examples() {
        let found = search_aps(&sub(&[0, 1, 2, 4]), 200).unwrap();
        assert!(found.contains(&ap(120, 49)));
        for f in &found {
            assert!(f.covers(&sub(&[0, 1, 2, 4])));
        }
        let found = search_aps(&sub(&[0, 13, 24, 33, 49]), 100).unwrap();
        assert!(found.contains(&ap(24, 49)));
        assert!(found.contains(&ap(-1, 49)));
        let found = search_aps(&sub(&[0, 1, 2, 3]), 1000).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn point_conversions() {
        let i = sub(&[0, 1, 2, 5, 7]);
        let coords = vec![bi(1), bi(5), bi(7), bi(11), bi(13)];
        assert_eq!(point_to_ap(&i, &coords).unwrap(), ap(24, 1));
        let back = ap_to_point(&i, &ap(24, 1)).unwrap();
        assert_eq!(back, coords);

        let i = sub(&[0, 13, 24, 33, 49]);
        let coords = vec![bi(7), bi(6), bi(5), bi(4), bi(0)];
        assert_eq!(point_to_ap(&i, &coords).unwrap(), ap(-1, 49));

        let i = sub(&[0, 1, 3, 7, 8]);
        let coords = vec![bi(1), bi(11), bi(19), bi(29), bi(31)];
        assert_eq!(point_to_ap(&i, &coords).unwrap(), ap(120, 1));

        // trivial points are rejected
        let i = sub(&[0, 1, 2, 3]);
        assert!(point_to_ap(&i, &[bi(1), bi(1), bi(1), bi(1)]).is_err());
        assert!(point_to_ap(&i, &[bi(1), bi(-1), bi(1), bi(1)]).is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let p = ap(24, 1);
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"q":"24","a":"1"}"#);
        let back: ArithProgression = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn count_invariant_under_reflection(q in 1i64..300, a in -300i64..300, n in 2u64..60) {
            let s = match squares_in_ap(&bi(q), &bi(a), n) {
                Ok(s) => s,
                Err(_) => return Ok(()),
            };
            // reflected progression scans the same values right-to-left
            let refl = squares_in_ap(&bi(-q), &(bi(q) * bi(n as i64 - 1) + bi(a)), n).unwrap();
            let mirrored: Vec<u64> = refl.positions.iter().rev().map(|&p| n - 1 - p).collect();
            prop_assert_eq!(s.positions.clone(), mirrored);
            // and the witness position sets are equivalent as subsets
            if s.positions.len() >= 2 {
                let a1 = Subset::new(s.positions.clone()).unwrap().canonical_primitive();
                let a2 = Subset::new(refl.positions.clone()).unwrap().canonical_primitive();
                prop_assert_eq!(a1.rep(), a2.rep());
            }
        }

        #[test]
        fn square_scaling_preserves_positions(q in 1i64..200, a in -200i64..200, m in 2i64..6, n in 2u64..40) {
            prop_assume!(q != 0);
            let s1 = match squares_in_ap(&bi(q), &bi(a), n) {
                Ok(s) => s, Err(_) => return Ok(()),
            };
            let s2 = squares_in_ap(&bi(q * m * m), &bi(a * m * m), n).unwrap();
            prop_assert_eq!(s1.positions, s2.positions);
        }

        #[test]
        fn roundtrip_point_ap(qi in 1i64..60, sq in 1i64..40) {
            // build a progression guaranteed square at {0,1}: a = sq^2, q = x1^2 - a
            let a = sq * sq;
            let x1 = sq + qi;
            let q = x1 * x1 - a;
            let i = sub(&[0, 1]);
            let p = ap(q, a);
            let pt = ap_to_point(&i, &p).unwrap();
            prop_assert_eq!(point_to_ap(&i, &pt).unwrap(), p);
        }
    }
}
