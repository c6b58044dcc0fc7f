//! Rank bounds by descent, and the classification of 4-element subsets
//! by whether a nonconstant progression can be square on all of them.
//!
//! Two descents are implemented for curves with rational 2-torsion:
//! the faster one works through a 2-isogeny and bounds the rank by the
//! dimensions of the two Selmer groups it produces; the finer one is a
//! full 2-descent whose homogeneous spaces are pairs of binary
//! quadratics tested for simultaneous local solvability. Both only ever
//! over-approximate the Selmer group when a local test gives up, so the
//! rank bounds stay true bounds and the `conservative` flag records
//! that it happened.

pub mod local;

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::ap::{search_aps, ArithProgression};
use crate::arith::{
    prime_support, rational_square_class, signed_squarefree_divisors, squarefree_part, Int, Rat,
};
use crate::elliptic::{
    symmetric_square_witnesses, witness_ap, EcPoint, FourSubsetCurve,
};
use crate::subsets::Subset;
use crate::{Error, Result};
use local::{conic_pair_solvable_qp, conic_pair_solvable_real, quartic_space_solvable_qp,
    quartic_space_solvable_real};

fn sf_mul(a: &Int, b: &Int) -> Result<Int> {
    squarefree_part(&(a * b))
}

/// F_2 span of squarefree classes, kept as the full (small) subgroup.
fn span_closure(generators: &[Int]) -> Result<Vec<Int>> {
    let mut set: BTreeSet<Int> = BTreeSet::new();
    set.insert(Int::one());
    loop {
        let mut added = false;
        let current: Vec<Int> = set.iter().cloned().collect();
        for g in generators {
            for s in &current {
                let prod = sf_mul(g, s)?;
                if set.insert(prod) {
                    added = true;
                }
            }
        }
        if !added {
            return Ok(set.into_iter().collect());
        }
    }
}

fn dim_of_subgroup(order: usize) -> u32 {
    debug_assert!(order.is_power_of_two());
    order.trailing_zeros()
}

/// Selmer group of the 2-isogeny descent on y^2 = x(x^2 + a x + b).
#[derive(Clone, Debug)]
pub struct TwoIsogenySelmer {
    pub classes: Vec<Int>,
    pub dim: u32,
    pub conservative: bool,
}

/// The places where a homogeneous space of this descent can fail.
fn bad_primes(a: &Int, b: &Int) -> Result<Vec<Int>> {
    let disc_part = a * a - Int::from(4) * b;
    let mut primes = prime_support(&(Int::from(2) * b * &disc_part))?;
    let two = Int::from(2);
    if !primes.contains(&two) {
        primes.push(two);
    }
    primes.sort();
    primes.dedup();
    Ok(primes)
}

/// Whether w^2 = d u^4 + a u^2 v^2 + (b/d) v^4 has points over R and
/// every relevant Q_p. Errors from a local test are reported as None.
fn isogeny_space_everywhere_solvable(
    d: &Int,
    a: &Int,
    b: &Int,
    primes: &[Int],
) -> Option<bool> {
    let bd = b / d;
    let g: [Int; 5] = [bd, Int::zero(), a.clone(), Int::zero(), d.clone()];
    if !quartic_space_solvable_real(&g) {
        return Some(false);
    }
    for p in primes {
        use num_traits::ToPrimitive;
        let pu = p.to_u64()?;
        match quartic_space_solvable_qp(&g, pu) {
            Ok(true) => {}
            Ok(false) => return Some(false),
            Err(_) => return None,
        }
    }
    Some(true)
}

pub fn two_isogeny_selmer(a: &Int, b: &Int) -> Result<TwoIsogenySelmer> {
    if b.is_zero() {
        return Err(Error::Degenerate("descent needs b != 0".into()));
    }
    let disc_part = a * a - Int::from(4) * b;
    if disc_part.is_zero() {
        return Err(Error::Degenerate("descent needs a^2 != 4b".into()));
    }
    let primes = bad_primes(a, b)?;
    let mut candidates = signed_squarefree_divisors(b)?;
    candidates.sort_by_key(|d| (d.magnitude().clone(), d.is_negative()));
    // global points on the curve give these classes for free
    let seed = vec![Int::one(), squarefree_part(b)?];
    let mut ins: Vec<Int> = seed;
    let mut outs: Vec<Int> = Vec::new();
    let mut conservative = false;
    for d in &candidates {
        let span = span_closure(&ins)?;
        if span.contains(d) {
            continue;
        }
        let mut known_out = false;
        for o in &outs {
            if span.contains(&sf_mul(d, o)?) {
                known_out = true;
                break;
            }
        }
        if known_out {
            continue;
        }
        match isogeny_space_everywhere_solvable(d, a, b, &primes) {
            Some(true) => ins.push(d.clone()),
            Some(false) => outs.push(d.clone()),
            None => {
                // keep the candidate: the Selmer group may only grow
                conservative = true;
                ins.push(d.clone());
            }
        }
    }
    let classes = span_closure(&ins)?;
    let dim = dim_of_subgroup(classes.len());
    Ok(TwoIsogenySelmer {
        classes,
        dim,
        conservative,
    })
}

/// Rank bound from the isogeny descent on y^2 = x(x^2 + a x + b) and
/// its dual y^2 = x(x^2 - 2a x + (a^2 - 4b)).
#[derive(Clone, Debug)]
pub struct IsogenyDescent {
    pub selmer: TwoIsogenySelmer,
    pub dual_selmer: TwoIsogenySelmer,
    pub rank_upper: u32,
    pub conservative: bool,
}

pub fn isogeny_rank_bound(a: &Int, b: &Int) -> Result<IsogenyDescent> {
    let selmer = two_isogeny_selmer(a, b)?;
    let dual_a = Int::from(-2) * a;
    let dual_b = a * a - Int::from(4) * b;
    let dual_selmer = two_isogeny_selmer(&dual_a, &dual_b)?;
    let rank_upper = (selmer.dim + dual_selmer.dim).saturating_sub(2);
    let conservative = selmer.conservative || dual_selmer.conservative;
    Ok(IsogenyDescent {
        selmer,
        dual_selmer,
        rank_upper,
        conservative,
    })
}

/// Best isogeny bound over the three ways of translating a root of
/// y^2 = (x - e1)(x - e2)(x - e3) to the origin.
pub fn isogeny_rank_bound_curve(roots: &[Int; 3]) -> Result<IsogenyDescent> {
    let mut best: Option<IsogenyDescent> = None;
    for i in 0..3 {
        let e = &roots[i];
        let f = &roots[(i + 1) % 3];
        let g = &roots[(i + 2) % 3];
        let a = -((f - e) + (g - e));
        let b = (f - e) * (g - e);
        let desc = isogeny_rank_bound(&a, &b)?;
        let better = match &best {
            None => true,
            Some(cur) => {
                desc.rank_upper < cur.rank_upper
                    || (desc.rank_upper == cur.rank_upper
                        && !desc.conservative
                        && cur.conservative)
            }
        };
        if better {
            best = Some(desc);
        }
    }
    Ok(best.unwrap())
}

// --- full 2-descent ---

/// Result of a full 2-descent on y^2 = (x - e1)(x - e2)(x - e3).
#[derive(Clone, Debug)]
pub struct FullDescent {
    pub roots: [Int; 3],
    pub selmer_pairs: Vec<(Int, Int)>,
    pub dim: u32,
    pub rank_upper: u32,
    pub conservative: bool,
}

fn pair_mul(a: &(Int, Int), b: &(Int, Int)) -> Result<(Int, Int)> {
    Ok((sf_mul(&a.0, &b.0)?, sf_mul(&a.1, &b.1)?))
}

fn pair_span_closure(generators: &[(Int, Int)]) -> Result<Vec<(Int, Int)>> {
    let mut set: BTreeSet<(Int, Int)> = BTreeSet::new();
    set.insert((Int::one(), Int::one()));
    loop {
        let mut added = false;
        let current: Vec<(Int, Int)> = set.iter().cloned().collect();
        for g in generators {
            for s in &current {
                if set.insert(pair_mul(g, s)?) {
                    added = true;
                }
            }
        }
        if !added {
            return Ok(set.into_iter().collect());
        }
    }
}

/// Classes of the four 2-torsion points, which lie in the Selmer group
/// unconditionally.
fn torsion_pair_images(roots: &[Int; 3]) -> Result<Vec<(Int, Int)>> {
    let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
    Ok(vec![
        (Int::one(), Int::one()),
        (squarefree_part(&((e1 - e2) * (e1 - e3)))?, squarefree_part(&(e1 - e2))?),
        (squarefree_part(&(e2 - e1))?, squarefree_part(&((e2 - e1) * (e2 - e3)))?),
        (squarefree_part(&(e3 - e1))?, squarefree_part(&(e3 - e2))?),
    ])
}

/// Whether the homogeneous space of the pair (d1, d2) has points over R
/// and all relevant Q_p. The space asks for a point of P^1 where
/// d2 (d1 t^2 - (e2 - e1)) and d1 d2 (d1 t^2 - (e3 - e1)) are both
/// squares.
fn pair_space_everywhere_solvable(
    d1: &Int,
    d2: &Int,
    roots: &[Int; 3],
    primes: &[Int],
) -> Option<bool> {
    let e21 = &roots[1] - &roots[0];
    let e31 = &roots[2] - &roots[0];
    let g1: [Int; 3] = [-(d2 * &e21), Int::zero(), d1 * d2];
    let g2: [Int; 3] = [-(d1 * d2 * &e31), Int::zero(), d1 * d1 * d2];
    match conic_pair_solvable_real(&g1, &g2) {
        Ok(true) => {}
        Ok(false) => return Some(false),
        Err(_) => return None,
    }
    for p in primes {
        use num_traits::ToPrimitive;
        let pu = p.to_u64()?;
        match conic_pair_solvable_qp(&g1, &g2, pu) {
            Ok(true) => {}
            Ok(false) => return Some(false),
            Err(_) => return None,
        }
    }
    Some(true)
}

pub fn full_two_descent(roots: &[Int; 3]) -> Result<FullDescent> {
    let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
    if e1 == e2 || e1 == e3 || e2 == e3 {
        return Err(Error::Degenerate("repeated root in 2-descent".into()));
    }
    let d12 = e1 - e2;
    let d13 = e1 - e3;
    let d23 = e2 - e3;
    let primes = {
        let mut ps = prime_support(&(Int::from(2) * &d12 * &d13 * &d23))?;
        let two = Int::from(2);
        if !ps.contains(&two) {
            ps.push(two);
        }
        ps.sort();
        ps.dedup();
        ps
    };
    let c1 = signed_squarefree_divisors(&(&d12 * &d13))?;
    let c2 = signed_squarefree_divisors(&(-&d12 * &d23))?;
    let mut ins = torsion_pair_images(roots)?;
    let mut outs: Vec<(Int, Int)> = Vec::new();
    let mut conservative = false;
    for d1 in &c1 {
        for d2 in &c2 {
            let cand = (d1.clone(), d2.clone());
            let span = pair_span_closure(&ins)?;
            if span.contains(&cand) {
                continue;
            }
            let mut known_out = false;
            for o in &outs {
                if span.contains(&pair_mul(&cand, o)?) {
                    known_out = true;
                    break;
                }
            }
            if known_out {
                continue;
            }
            match pair_space_everywhere_solvable(d1, d2, roots, &primes) {
                Some(true) => ins.push(cand),
                Some(false) => outs.push(cand),
                None => {
                    conservative = true;
                    ins.push(cand);
                }
            }
        }
    }
    let selmer_pairs = pair_span_closure(&ins)?;
    let dim = dim_of_subgroup(selmer_pairs.len());
    Ok(FullDescent {
        roots: roots.clone(),
        selmer_pairs,
        dim,
        rank_upper: dim.saturating_sub(2),
        conservative,
    })
}

/// Square classes of (x - e1, x - e2) at a rational point, with the
/// usual replacement by the other coordinates when one vanishes.
pub fn descent_image(roots: &[Int; 3], point: &EcPoint) -> Result<(Int, Int)> {
    let (e1, e2, e3) = (&roots[0], &roots[1], &roots[2]);
    let (x, _y) = match point {
        EcPoint::Infinity => return Ok((Int::one(), Int::one())),
        EcPoint::Affine(x, y) => (x, y),
    };
    let r1 = Rat::from_integer(e1.clone());
    let r2 = Rat::from_integer(e2.clone());
    let r3 = Rat::from_integer(e3.clone());
    if *x == r1 {
        return Ok((
            squarefree_part(&((e1 - e2) * (e1 - e3)))?,
            squarefree_part(&(e1 - e2))?,
        ));
    }
    if *x == r2 {
        return Ok((
            squarefree_part(&(e2 - e1))?,
            squarefree_part(&((e2 - e1) * (e2 - e3)))?,
        ));
    }
    if *x == r3 {
        return Ok((
            squarefree_part(&(e3 - e1))?,
            squarefree_part(&(e3 - e2))?,
        ));
    }
    let a = rational_square_class(&(x - r1))?;
    let b = rational_square_class(&(x - r2))?;
    Ok((a, b))
}

/// Rank contribution visible from explicit points: the dimension their
/// classes add on top of the 2-torsion classes.
pub fn rank_lower_from_points(roots: &[Int; 3], points: &[EcPoint]) -> Result<u32> {
    let tors = torsion_pair_images(roots)?;
    let tors_dim = dim_of_subgroup(pair_span_closure(&tors)?.len());
    let mut gens = tors;
    for p in points {
        gens.push(descent_image(roots, p)?);
    }
    let full_dim = dim_of_subgroup(pair_span_closure(&gens)?.len());
    Ok(full_dim - tors_dim)
}

// --- classification of 4-subsets ---

/// How a classification was settled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResolutionMethod {
    /// a progression square on the subset was written down directly
    ExplicitProgression,
    /// the symmetric square-entries construction applied
    SymmetricSquares,
    /// the curve has rank 0 and only the eight forced points
    RankZero,
    /// a bounded search found a progression
    SearchWitness,
    /// neither a witness nor a proof of emptiness
    Open,
}

/// Outcome of classifying one 4-element subset. The window is the pair
/// (low, high) of bounds on the indicator "some nonconstant progression
/// is square on the whole subset": (1, 1) means witnessed, (0, 0) means
/// proved impossible, (0, 1) means open.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourSubsetCertificate {
    pub subset: String,
    pub symmetric: bool,
    pub window: (u8, u8),
    pub method: ResolutionMethod,
    pub witnesses: Vec<ArithProgression>,
    pub torsion: Option<String>,
    pub rank_upper: Option<u32>,
    pub conservative: bool,
}

/// Decide whether some nonconstant progression is square on all four
/// entries of the subset, producing either witnesses or a rank-0 proof
/// of impossibility, or an honest open verdict.
pub fn classify_four_subset(subset: &Subset, search_bound: u64) -> Result<FourSubsetCertificate> {
    if subset.len() != 4 {
        return Err(Error::InvalidSubset("classification needs 4 entries".into()));
    }
    let name = subset.to_string();
    if !subset.is_symmetric() {
        let w = witness_ap(subset)?;
        return Ok(FourSubsetCertificate {
            subset: name,
            symmetric: false,
            window: (1, 1),
            method: ResolutionMethod::ExplicitProgression,
            witnesses: vec![w],
            torsion: None,
            rank_upper: None,
            conservative: false,
        });
    }
    if let Some((w1, w2)) = symmetric_square_witnesses(subset)? {
        return Ok(FourSubsetCertificate {
            subset: name,
            symmetric: true,
            window: (1, 1),
            method: ResolutionMethod::SymmetricSquares,
            witnesses: vec![w1, w2],
            torsion: None,
            rank_upper: None,
            conservative: false,
        });
    }
    let model = FourSubsetCurve::new(subset)?;
    let torsion = model.torsion()?;
    let torsion_name = torsion.to_string();
    let torsion_clean = torsion.certified && torsion.invariants == vec![2, 4];
    let roots = model.integral_roots();
    let iso = isogeny_rank_bound_curve(&roots)?;
    let mut rank_upper = iso.rank_upper;
    let mut conservative = iso.conservative;
    if rank_upper > 0 {
        let full = full_two_descent(&roots)?;
        if full.rank_upper < rank_upper {
            rank_upper = full.rank_upper;
            conservative = full.conservative;
        } else {
            conservative = conservative && full.conservative;
        }
    }
    if rank_upper == 0 && !conservative && torsion_clean {
        // all rational points are the eight forced ones, and none of
        // those yields a nonconstant square progression
        return Ok(FourSubsetCertificate {
            subset: name,
            symmetric: true,
            window: (0, 0),
            method: ResolutionMethod::RankZero,
            witnesses: Vec::new(),
            torsion: Some(torsion_name),
            rank_upper: Some(0),
            conservative: false,
        });
    }
    let found = search_aps(subset, search_bound)?;
    if let Some(w) = found.into_iter().next() {
        return Ok(FourSubsetCertificate {
            subset: name,
            symmetric: true,
            window: (1, 1),
            method: ResolutionMethod::SearchWitness,
            witnesses: vec![w],
            torsion: Some(torsion_name),
            rank_upper: Some(rank_upper),
            conservative,
        });
    }
    Ok(FourSubsetCertificate {
        subset: name,
        symmetric: true,
        window: (0, 1),
        method: ResolutionMethod::Open,
        witnesses: Vec::new(),
        torsion: Some(torsion_name),
        rank_upper: Some(rank_upper),
        conservative,
    })
}
