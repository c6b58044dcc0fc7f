//! Projective models for the square-position problem.
//!
//! For a subset I = {n_0 < ... < n_k}, the values of a progression at the
//! positions of I satisfy one linear relation per consecutive triple.
//! Writing X_i^2 for the value at n_i turns those relations into an
//! intersection of k-1 quadrics in P^k. Progressions square on all of I
//! correspond to rational points, and flipping signs of coordinates or
//! scaling does not change the progression.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::ap::{ap_to_point, point_to_ap, ArithProgression};
use crate::arith::Int;
use crate::subsets::Subset;
use crate::{Error, Result};

/// One quadric c0*Xi^2 + c1*X(i+1)^2 + c2*X(i+2)^2 = 0, anchored at
/// coordinate index `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadric {
    pub start: usize,
    pub coeffs: [Int; 3],
}

impl Quadric {
    pub fn eval(&self, coords: &[Int]) -> Int {
        let mut acc = Int::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let x = &coords[self.start + j];
            acc += c * (x * x);
        }
        acc
    }
}

impl fmt::Display for Quadric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag == Int::from(1) {
                write!(f, "X{}^2", self.start + j)?;
            } else {
                write!(f, "{}*X{}^2", mag, self.start + j)?;
            }
        }
        write!(f, " = 0")
    }
}

/// The intersection of quadrics attached to a subset.
#[derive(Clone, Debug)]
pub struct CurveSystem {
    subset: Subset,
    quadrics: Vec<Quadric>,
}

impl CurveSystem {
    pub fn new(i: &Subset) -> Result<Self> {
        if i.len() < 3 {
            return Err(Error::InvalidSubset(
                "a curve needs at least three positions".into(),
            ));
        }
        let ns = i.elements();
        let mut quadrics = Vec::with_capacity(ns.len() - 2);
        for w in 0..ns.len() - 2 {
            let (a, b, c) = (ns[w] as i128, ns[w + 1] as i128, ns[w + 2] as i128);
            quadrics.push(Quadric {
                start: w,
                coeffs: [Int::from(c - b), Int::from(-(c - a)), Int::from(b - a)],
            });
        }
        Ok(CurveSystem {
            subset: i.clone(),
            quadrics,
        })
    }

    pub fn subset(&self) -> &Subset {
        &self.subset
    }

    pub fn quadrics(&self) -> &[Quadric] {
        &self.quadrics
    }

    /// Dimension of the ambient projective space.
    pub fn ambient_dim(&self) -> usize {
        self.subset.len() - 1
    }

    /// Genus of the (smooth) intersection: (k-3)*2^(k-2) + 1 in P^k.
    pub fn genus(&self) -> Int {
        let k = self.ambient_dim() as i64;
        if k <= 2 {
            return Int::zero();
        }
        Int::from(k - 3) * (Int::from(1) << (k - 2) as usize) + 1
    }

    pub fn contains(&self, coords: &[Int]) -> bool {
        coords.len() == self.subset.len()
            && coords.iter().any(|x| !x.is_zero())
            && self.quadrics.iter().all(|q| q.eval(coords).is_zero())
    }

    /// The 2^k points with all coordinates +-1. They come from constant
    /// progressions and carry no square-position information.
    pub fn trivial_points(&self) -> Vec<Vec<Int>> {
        let k = self.ambient_dim();
        let mut out = Vec::with_capacity(1usize << k);
        for mask in 0u64..(1u64 << k) {
            let mut coords = vec![Int::from(1)];
            for bit in 0..k {
                coords.push(if mask >> bit & 1 == 1 {
                    Int::from(-1)
                } else {
                    Int::from(1)
                });
            }
            out.push(coords);
        }
        out
    }

    pub fn is_trivial_point(&self, coords: &[Int]) -> bool {
        if coords.len() != self.subset.len() || coords[0].is_zero() {
            return false;
        }
        let sq = &coords[0] * &coords[0];
        coords.iter().all(|x| x * x == sq)
    }

    /// Lift a progression square on all of I to a point of the curve.
    pub fn point_from_ap(&self, ap: &ArithProgression) -> Result<Vec<Int>> {
        let coords = ap_to_point(&self.subset, ap)?;
        debug_assert!(self.contains(&coords));
        Ok(coords)
    }

    /// Recover the progression from a non-trivial point.
    pub fn ap_from_point(&self, coords: &[Int]) -> Result<ArithProgression> {
        if !self.contains(coords) {
            return Err(Error::OffCurve);
        }
        point_to_ap(&self.subset, coords)
    }
}

impl fmt::Display for CurveSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, q) in self.quadrics.iter().enumerate() {
            if idx > 0 {
                writeln!(f)?;
            }
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::bi;
    use proptest::prelude::*;

    fn sub(v: &[u64]) -> Subset {
        Subset::new(v.to_vec()).unwrap()
    }

    fn pt(v: &[i64]) -> Vec<Int> {
        v.iter().map(|&x| bi(x)).collect()
    }

    #[test]
    fn equations_for_pentagonal_witness() {
        let c = CurveSystem::new(&sub(&[0, 1, 2, 5, 7])).unwrap();
        assert_eq!(c.quadrics().len(), 3);
        assert_eq!(
            c.quadrics()[0].coeffs,
            [bi(1), bi(-2), bi(1)]
        );
        assert_eq!(
            c.quadrics()[1].coeffs,
            [bi(3), bi(-4), bi(1)]
        );
        assert_eq!(
            c.quadrics()[2].coeffs,
            [bi(2), bi(-5), bi(3)]
        );
        assert!(c.contains(&pt(&[1, 5, 7, 11, 13])));
        assert!(!c.contains(&pt(&[1, 2, 3, 4, 5])));
        assert_eq!(c.to_string(), "X0^2 - 2*X1^2 + X2^2 = 0\n3*X1^2 - 4*X2^2 + X3^2 = 0\n2*X2^2 - 5*X3^2 + 3*X4^2 = 0");
    }

    #[test]
    fn genus_values() {
        let g = |v: &[u64]| CurveSystem::new(&sub(v)).unwrap().genus();
        assert_eq!(g(&[0, 1, 2, 3]), bi(1));
        assert_eq!(g(&[0, 1, 2, 5, 7]), bi(5));
        assert_eq!(g(&[0, 1, 2, 3, 4, 5]), bi(17));
        assert_eq!(g(&[0, 1, 2]), bi(0));
    }

    #[test]
    fn trivial_points_lie_on_curve() {
        let c = CurveSystem::new(&sub(&[0, 1, 3, 7, 8])).unwrap();
        let pts = c.trivial_points();
        assert_eq!(pts.len(), 16);
        for p in &pts {
            assert!(c.contains(p));
            assert!(c.is_trivial_point(p));
            assert!(c.ap_from_point(p).is_err());
        }
    }

    #[test]
    fn zero_coordinate_point() {
        let c = CurveSystem::new(&sub(&[0, 13, 24, 33, 49])).unwrap();
        let p = pt(&[7, 6, 5, 4, 0]);
        assert!(c.contains(&p));
        assert!(!c.is_trivial_point(&p));
        let ap = c.ap_from_point(&p).unwrap();
        assert_eq!(ap, "(-1,49)".parse().unwrap());
    }

    #[test]
    fn point_ap_roundtrip() {
        let c = CurveSystem::new(&sub(&[0, 1, 2, 5, 7])).unwrap();
        let ap = "(24,1)".parse().unwrap();
        let p = c.point_from_ap(&ap).unwrap();
        assert_eq!(p, pt(&[1, 5, 7, 11, 13]));
        assert_eq!(c.ap_from_point(&p).unwrap(), ap);
    }

    proptest! {
        #[test]
        fn search_hits_lie_on_curve(seed in 0u64..200) {
            // a modest family of subsets and a small search box
            let base = [0u64, 1, 2, 4, 5, 7, 9];
            let i1 = 1 + (seed as usize % 5);
            let i2 = i1 + 1 + (seed as usize / 5 % (6 - i1).max(1)).min(5 - i1);
            let i = sub(&[base[0], base[i1.min(5)], base[i2.min(6)]]);
            let c = CurveSystem::new(&i).unwrap();
            for ap in crate::ap::search_aps(&i, 40).unwrap() {
                let p = c.point_from_ap(&ap).unwrap();
                prop_assert!(c.contains(&p));
                prop_assert_eq!(c.ap_from_point(&p).unwrap(), ap);
            }
        }

        #[test]
        fn sign_flips_stay_on_curve(mask in 0u32..32) {
            let c = CurveSystem::new(&sub(&[0, 1, 2, 5, 7])).unwrap();
            let mut p = pt(&[1, 5, 7, 11, 13]);
            for (bit, x) in p.iter_mut().enumerate() {
                if mask >> bit & 1 == 1 {
                    *x = -x.clone();
                }
            }
            prop_assert!(c.contains(&p));
        }
    }
}
