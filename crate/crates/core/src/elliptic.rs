//! Elliptic curves y^2 = x^3 + a2 x^2 + a4 x + a6 over Q, with exact
//! group law and torsion computation, plus the curve attached to a
//! four-element subset.
//!
//! Torsion is computed without floating point: 2-torsion from integer
//! roots of the cubic, 3-torsion from the division polynomial, 4- and
//! 8-torsion by solving the doubling equation backwards, then closing
//! under addition. The result is checked against point counts modulo
//! several good primes; `certified` records whether the two agree.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ap::ArithProgression;
use crate::arith::{
    bi, integer_roots, is_square_int, poly_eval_int, rational_roots, rational_sqrt, Int, Rat,
};
use crate::subsets::Subset;
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EcPoint {
    Infinity,
    Affine(Rat, Rat),
}

impl EcPoint {
    pub fn affine(x: Rat, y: Rat) -> Self {
        EcPoint::Affine(x, y)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, EcPoint::Infinity)
    }

    pub fn x(&self) -> Option<&Rat> {
        match self {
            EcPoint::Infinity => None,
            EcPoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rat> {
        match self {
            EcPoint::Infinity => None,
            EcPoint::Affine(_, y) => Some(y),
        }
    }
}

impl fmt::Display for EcPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EcPoint::Infinity => write!(f, "O"),
            EcPoint::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

impl fmt::Debug for EcPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct EllipticCurve {
    a2: Rat,
    a4: Rat,
    a6: Rat,
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3")?;
        for (c, pow) in [(&self.a2, "x^2"), (&self.a4, "x"), (&self.a6, "")] {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if mag.is_one() && !pow.is_empty() {
                write!(f, " {sign} {pow}")?;
            } else if pow.is_empty() {
                write!(f, " {sign} {mag}")?;
            } else {
                write!(f, " {sign} {mag}*{pow}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionGroup {
    /// Torsion points, on the same model the curve was given in.
    pub points: Vec<EcPoint>,
    /// Invariant factors, e.g. [2, 8] for Z/2 x Z/8; empty when trivial.
    pub invariants: Vec<u64>,
    pub order: u64,
    /// gcd of point counts modulo several good primes; always a multiple
    /// of the true torsion order.
    pub bound: u64,
    /// Whether `order` provably equals the torsion order (order == bound).
    pub certified: bool,
}

impl fmt::Display for TorsionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.invariants.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl EllipticCurve {
    pub fn new(a2: Rat, a4: Rat, a6: Rat) -> Result<Self> {
        let e = EllipticCurve { a2, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::Degenerate("singular cubic".into()));
        }
        Ok(e)
    }

    pub fn from_i64(a2: i64, a4: i64, a6: i64) -> Result<Self> {
        EllipticCurve::new(
            Rat::from_integer(bi(a2)),
            Rat::from_integer(bi(a4)),
            Rat::from_integer(bi(a6)),
        )
    }

    pub fn from_roots(e1: &Rat, e2: &Rat, e3: &Rat) -> Result<Self> {
        let a2 = -(e1 + e2 + e3);
        let a4 = e1 * e2 + e1 * e3 + e2 * e3;
        let a6 = -(e1 * e2 * e3);
        EllipticCurve::new(a2, a4, a6)
    }

    pub fn coefficients(&self) -> (&Rat, &Rat, &Rat) {
        (&self.a2, &self.a4, &self.a6)
    }

    pub fn rhs(&self, x: &Rat) -> Rat {
        ((x + &self.a2) * x + &self.a4) * x + &self.a6
    }

    /// Discriminant of the cubic x^3 + a2 x^2 + a4 x + a6.
    pub fn discriminant(&self) -> Rat {
        let (a, b, c) = (&self.a2, &self.a4, &self.a6);
        let r18 = Rat::from_integer(bi(18));
        let r4 = Rat::from_integer(bi(4));
        let r27 = Rat::from_integer(bi(27));
        r18 * a * b * c - r4.clone() * a * a * a * c + a * a * b * b - r4 * b * b * b
            - r27 * c * c
    }

    pub fn contains(&self, p: &EcPoint) -> bool {
        match p {
            EcPoint::Infinity => true,
            EcPoint::Affine(x, y) => y * y == self.rhs(x),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.a2.is_integer() && self.a4.is_integer() && self.a6.is_integer()
    }

    /// An isomorphic integral model via (x, y) -> (u^2 x, u^3 y).
    pub fn integral_model(&self) -> (EllipticCurve, Int) {
        let u = self
            .a2
            .denom()
            .lcm(self.a4.denom())
            .lcm(self.a6.denom());
        let u2 = Rat::from_integer(&u * &u);
        let u4 = &u2 * &u2;
        let u6 = &u4 * &u2;
        (
            EllipticCurve {
                a2: &self.a2 * u2,
                a4: &self.a4 * u4,
                a6: &self.a6 * u6,
            },
            u,
        )
    }

    /// Point transport along the x -> u^2 x scaling.
    pub fn scale_point(p: &EcPoint, u: &Int) -> EcPoint {
        match p {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine(x, y) => {
                let u2 = Rat::from_integer(u * u);
                let u3 = Rat::from_integer(u * u * u);
                EcPoint::Affine(x * u2, y * u3)
            }
        }
    }

    /// The model in coordinates x' = x - r; points move by (x,y) -> (x-r, y).
    pub fn shift_x(&self, r: &Rat) -> Result<EllipticCurve> {
        let three = Rat::from_integer(bi(3));
        let two = Rat::from_integer(bi(2));
        EllipticCurve::new(
            &self.a2 + &three * r,
            &three * r * r + &two * &self.a2 * r + &self.a4,
            self.rhs(r),
        )
    }

    pub fn neg(&self, p: &EcPoint) -> EcPoint {
        match p {
            EcPoint::Infinity => EcPoint::Infinity,
            EcPoint::Affine(x, y) => EcPoint::Affine(x.clone(), -y.clone()),
        }
    }

    pub fn add(&self, p: &EcPoint, q: &EcPoint) -> EcPoint {
        debug_assert!(self.contains(p) && self.contains(q));
        let (x1, y1) = match p {
            EcPoint::Infinity => return q.clone(),
            EcPoint::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match q {
            EcPoint::Infinity => return p.clone(),
            EcPoint::Affine(x, y) => (x, y),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return EcPoint::Infinity;
            }
            let three = Rat::from_integer(bi(3));
            let two = Rat::from_integer(bi(2));
            (three * x1 * x1 + &two * &self.a2 * x1 + &self.a4) / (two * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - &self.a2 - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        EcPoint::Affine(x3, y3)
    }

    pub fn double(&self, p: &EcPoint) -> EcPoint {
        self.add(p, p)
    }

    pub fn mul(&self, k: i64, p: &EcPoint) -> EcPoint {
        if k < 0 {
            return self.neg(&self.mul(-k, p));
        }
        let mut acc = EcPoint::Infinity;
        let mut base = p.clone();
        let mut n = k as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// Exact order of a rational point, or None when infinite. Rational
    /// torsion has exponent at most 12, so 12 additions decide.
    pub fn order_of(&self, p: &EcPoint) -> Option<u64> {
        if p.is_infinity() {
            return Some(1);
        }
        let mut acc = p.clone();
        for k in 1..=12u64 {
            if acc.is_infinity() {
                return Some(k);
            }
            acc = self.add(&acc, p);
        }
        None
    }

    /// Rational roots of the right-hand cubic, i.e. x-coordinates of
    /// rational 2-torsion.
    pub fn two_torsion_x(&self) -> Vec<Rat> {
        let (int, u) = self.integral_model();
        let (a, b, c) = (
            int.a2.to_integer(),
            int.a4.to_integer(),
            int.a6.to_integer(),
        );
        let u2 = Rat::from_integer(&u * &u);
        integer_roots(&[c, b, a, Int::one()])
            .into_iter()
            .map(|z| Rat::from_integer(z) / &u2)
            .collect()
    }

    /// Both rational points with the given x-coordinate, if any.
    pub fn lift_x(&self, x: &Rat) -> Option<(EcPoint, EcPoint)> {
        let v = self.rhs(x);
        let y = rational_sqrt(&v)?;
        Some((
            EcPoint::Affine(x.clone(), y.clone()),
            EcPoint::Affine(x.clone(), -y),
        ))
    }

    /// Number of points mod p including infinity, for odd p of good
    /// reduction on an integral model. None when the reduction is bad or
    /// the model is not integral.
    pub fn count_points_mod(&self, p: u64) -> Option<u64> {
        if !self.is_integral() || p < 3 {
            return None;
        }
        let pm = Int::from(p);
        let disc = self.discriminant().to_integer();
        if (&disc % &pm).is_zero() {
            return None;
        }
        let rm = |r: &Rat| -> u64 {
            let m = r.to_integer().mod_floor(&pm);
            m.to_u64().unwrap()
        };
        let (a, b, c) = (rm(&self.a2), rm(&self.a4), rm(&self.a6));
        let mut count = p + 1;
        for x in 0..p {
            let fx = (((x as u128 * x as u128 % p as u128 * x as u128
                + a as u128 * x as u128 % p as u128 * x as u128)
                + b as u128 * x as u128
                + c as u128)
                % p as u128) as u64;
            match legendre(fx, p) {
                1 => count += 1,
                -1 => count -= 1,
                _ => {}
            }
        }
        Some(count)
    }

    /// The rational torsion subgroup.
    pub fn torsion(&self) -> Result<TorsionGroup> {
        let (int, u) = self.integral_model();
        let (a, b, c) = (
            int.a2.to_integer(),
            int.a4.to_integer(),
            int.a6.to_integer(),
        );
        let mut pts: Vec<EcPoint> = vec![EcPoint::Infinity];
        let push = |set: &mut Vec<EcPoint>, p: EcPoint| {
            if !set.contains(&p) {
                set.push(p);
            }
        };

        // 2-torsion: rational roots of the cubic
        let roots2 = integer_roots(&[c.clone(), b.clone(), a.clone(), Int::one()]);
        for r in &roots2 {
            push(&mut pts, EcPoint::Affine(Rat::from_integer(r.clone()), Rat::zero()));
        }

        // 3-torsion: rational roots of 3x^4 + 4Ax^3 + 6Bx^2 + 12Cx + 4AC - B^2
        let psi3 = [
            &(Int::from(4) * &a * &c) - &(&b * &b),
            Int::from(12) * &c,
            Int::from(6) * &b,
            Int::from(4) * &a,
            Int::from(3),
        ];
        for x0 in rational_roots(&psi3)? {
            if let Some((p1, p2)) = int.lift_x(&x0) {
                push(&mut pts, p1);
                push(&mut pts, p2);
            }
        }

        // 4-torsion: points P with 2P = (r, 0); then 8-torsion above those
        let mut quarter_xs: Vec<Int> = Vec::new();
        for r in &roots2 {
            for x0 in doubling_preimage_x(&a, &b, &c, r) {
                let xr = Rat::from_integer(x0.clone());
                if let Some((p1, p2)) = int.lift_x(&xr) {
                    quarter_xs.push(x0);
                    push(&mut pts, p1);
                    push(&mut pts, p2);
                }
            }
        }
        for r in &quarter_xs {
            for x0 in doubling_preimage_x(&a, &b, &c, r) {
                let xr = Rat::from_integer(x0);
                if let Some((p1, p2)) = int.lift_x(&xr) {
                    push(&mut pts, p1);
                    push(&mut pts, p2);
                }
            }
        }

        // close under the group law
        loop {
            let snapshot = pts.clone();
            let mut grew = false;
            for i in 0..snapshot.len() {
                for j in i..snapshot.len() {
                    let s = int.add(&snapshot[i], &snapshot[j]);
                    if !pts.contains(&s) {
                        pts.push(s);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }

        let order = pts.len() as u64;
        let bound = self.torsion_bound_via_counts(&int, order);
        let exponent = pts
            .iter()
            .map(|p| int.order_of(p).expect("torsion point with infinite order"))
            .max()
            .unwrap_or(1);
        let invariants = if order == 1 {
            Vec::new()
        } else if order == exponent {
            vec![exponent]
        } else {
            debug_assert_eq!(order % exponent, 0);
            vec![order / exponent, exponent]
        };
        // map points back to the original model
        let back: Vec<EcPoint> = pts
            .iter()
            .map(|p| match p {
                EcPoint::Infinity => EcPoint::Infinity,
                EcPoint::Affine(x, y) => {
                    let u2 = Rat::from_integer(&u * &u);
                    let u3 = Rat::from_integer(&u * &u * &u);
                    EcPoint::Affine(x / u2, y / u3)
                }
            })
            .collect();
        Ok(TorsionGroup {
            points: back,
            invariants,
            order,
            bound,
            certified: order == bound,
        })
    }

    fn torsion_bound_via_counts(&self, int: &EllipticCurve, found: u64) -> u64 {
        const PRIMES: [u64; 24] = [
            17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101,
            103, 107, 109, 113,
        ];
        let mut bound: u64 = 0;
        let mut used = 0;
        for &p in PRIMES.iter() {
            if let Some(n) = int.count_points_mod(p) {
                bound = if bound == 0 { n } else { bound.gcd(&n) };
                used += 1;
                if bound == found || used >= 12 {
                    break;
                }
            }
        }
        if bound == 0 {
            // no good prime in range; extremely large discriminant support
            u64::MAX
        } else {
            bound
        }
    }
}

use crate::arith::legendre_u64 as legendre;

/// Integer x with x(2P) = r on y^2 = x^3 + ax^2 + bx + c: roots of
/// x^4 - 4rx^3 - (2b + 4ar)x^2 - (8c + 4br)x + (b^2 - 4ac - 4cr).
fn doubling_preimage_x(a: &Int, b: &Int, c: &Int, r: &Int) -> Vec<Int> {
    let four = Int::from(4);
    let coeffs = [
        b * b - &four * a * c - &four * c * r,
        -(Int::from(8) * c) - &four * b * r,
        -(Int::from(2) * b) - &four * a * r,
        -(&four * r),
        Int::one(),
    ];
    integer_roots(&coeffs)
        .into_iter()
        .filter(|x0| {
            // exclude 2-torsion itself (y = 0 there)
            !poly_eval_int(&[c.clone(), b.clone(), a.clone(), Int::one()], x0).is_zero()
        })
        .collect()
}

/// The elliptic curve attached to a four-element subset, in both the
/// normalized rational model and an integral model.
#[derive(Clone, Debug)]
pub struct FourSubsetCurve {
    subset: Subset,
    m0: Rat,
    m1: Rat,
    curve: EllipticCurve,
    integral: EllipticCurve,
}

impl FourSubsetCurve {
    pub fn new(i: &Subset) -> Result<Self> {
        if i.len() != 4 {
            return Err(Error::InvalidSubset(format!(
                "need exactly four positions, got {}",
                i.len()
            )));
        }
        let n = i.elements();
        let d01 = bi((n[1] - n[0]) as i64);
        let d12 = bi((n[2] - n[1]) as i64);
        let d23 = bi((n[3] - n[2]) as i64);
        let d03 = bi((n[3] - n[0]) as i64);
        let m0 = Rat::new(d01.clone(), d12.clone());
        let m1 = Rat::new(d23.clone(), d12.clone());
        let zero = Rat::zero();
        let r1 = &m0 * &m1;
        let r2 = -(&m0 + &m1 + Rat::one());
        let curve = EllipticCurve::from_roots(&zero, &r1, &r2)?;
        let ir1 = Rat::from_integer(&d01 * &d23);
        let ir2 = Rat::from_integer(-(&d12 * &d03));
        let integral = EllipticCurve::from_roots(&zero, &ir1, &ir2)?;
        Ok(FourSubsetCurve {
            subset: i.clone(),
            m0,
            m1,
            curve,
            integral,
        })
    }

    pub fn subset(&self) -> &Subset {
        &self.subset
    }

    pub fn m0(&self) -> &Rat {
        &self.m0
    }

    pub fn m1(&self) -> &Rat {
        &self.m1
    }

    /// y^2 = x (x - m0 m1) (x + m0 + m1 + 1)
    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    /// The same curve scaled by (n2 - n1)^2 to clear denominators.
    pub fn integral_curve(&self) -> &EllipticCurve {
        &self.integral
    }

    pub fn integral_roots(&self) -> [Int; 3] {
        let n = self.subset.elements();
        let d01 = bi((n[1] - n[0]) as i64);
        let d12 = bi((n[2] - n[1]) as i64);
        let d23 = bi((n[3] - n[2]) as i64);
        let d03 = bi((n[3] - n[0]) as i64);
        [Int::zero(), &d01 * &d23, -(&d12 * &d03)]
    }

    pub fn is_symmetric(&self) -> bool {
        self.m0 == self.m1
    }

    /// Transport a point from the rational model to the integral one.
    pub fn to_integral_point(&self, p: &EcPoint) -> EcPoint {
        let n = self.subset.elements();
        let lambda = bi((n[2] - n[1]) as i64);
        EllipticCurve::scale_point(p, &lambda)
    }

    /// The images of the eight trivial curve points, on the rational model.
    pub fn trivial_images(&self) -> Vec<EcPoint> {
        trivial_images_for(&self.m0, &self.m1)
    }

    /// Whether the trivial images are closed under the group law.
    pub fn trivial_images_form_subgroup(&self) -> bool {
        let pts = self.trivial_images();
        for p in &pts {
            for q in &pts {
                if !pts.contains(&self.curve.add(p, q)) {
                    return false;
                }
            }
        }
        true
    }

    /// Torsion of the integral model (isomorphic to the rational one).
    pub fn torsion(&self) -> Result<TorsionGroup> {
        self.integral.torsion()
    }

    /// An explicit non-constant progression square at all four positions,
    /// available whenever the subset is not symmetric.
    pub fn witness_ap(&self) -> Result<ArithProgression> {
        witness_ap(&self.subset)
    }
}

/// Images of the eight sign-choice points on the curve
/// y^2 = x (x - m0 m1) (x + m0 + m1 + 1), for any rational parameters.
pub fn trivial_images_for(m0: &Rat, m1: &Rat) -> Vec<EcPoint> {
    let one = Rat::one();
    let s = m0 + m1 + &one;
    let pts = vec![
        EcPoint::Infinity,
        EcPoint::Affine(Rat::zero(), Rat::zero()),
        EcPoint::Affine(m0 * m1, Rat::zero()),
        EcPoint::Affine(-s.clone(), Rat::zero()),
        EcPoint::Affine(-m1.clone(), -(m1 * (m0 + &one))),
        EcPoint::Affine(-m0.clone(), m0 * (m1 + &one)),
        EcPoint::Affine(m0 * &s, -(m0 * (m0 + &one) * &s)),
        EcPoint::Affine(m1 * &s, m1 * (m1 + &one) * &s),
    ];
    let mut seen = Vec::new();
    for p in pts {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    seen
}

/// For a non-symmetric four-element subset {n0 < n1 < n2 < n3}, an
/// explicit non-constant progression whose values at all four positions
/// are perfect squares.
pub fn witness_ap(i: &Subset) -> Result<ArithProgression> {
    if i.len() != 4 {
        return Err(Error::InvalidSubset(format!(
            "need exactly four positions, got {}",
            i.len()
        )));
    }
    let n = i.elements();
    let (n1, n2, n3) = (
        bi((n[1] - n[0]) as i64),
        bi((n[2] - n[0]) as i64),
        bi((n[3] - n[0]) as i64),
    );
    let t = &n1 + &n2 - &n3;
    if t.is_zero() {
        return Err(Error::Degenerate(
            "symmetric subset: the explicit progression is constant".into(),
        ));
    }
    let u = &n1 - &n2 - &n3;
    let v = &n1 - &n2 + &n3;
    let q = Int::from(8) * &t * &u * &v;
    let a0 = &(&t * &t) - &(Int::from(4) * &n1 * &n2);
    let a = &a0 * &a0;
    debug_assert!(!q.is_zero());
    // shift back to the original offset
    let a_shifted = a - &q * Int::from(n[0]);
    let ap = ArithProgression::new(q, a_shifted)?;
    debug_assert!(ap.covers(i));
    Ok(ap)
}

/// For a symmetric subset translated to {0, n1, n2, n1+n2} with n1, n2
/// and n1+n2 all perfect squares, the pair of non-constant witnesses
/// (1, -n0) and (-1, max). None otherwise.
pub fn symmetric_square_witnesses(i: &Subset) -> Result<Option<(ArithProgression, ArithProgression)>> {
    if i.len() != 4 || !i.is_symmetric() {
        return Ok(None);
    }
    let n = i.elements();
    let t1 = Int::from(n[1] - n[0]);
    let t2 = Int::from(n[2] - n[0]);
    let t3 = Int::from(n[3] - n[0]);
    if is_square_int(&t1) && is_square_int(&t2) && is_square_int(&t3) {
        let up = ArithProgression::new(Int::one(), -Int::from(n[0]))?;
        let down = ArithProgression::new(-Int::one(), Int::from(n[3]))?;
        debug_assert!(up.covers(i) && down.covers(i));
        Ok(Some((up, down)))
    } else {
        Ok(None)
    }
}

/// Membership in the two-parameter families where one of the non-obvious
/// trivial images has finite order (so the curve picks up 3-torsion).
pub fn small_order_image_family(m0: &Rat, m1: &Rat) -> bool {
    let one = Rat::one();
    let two = Rat::from_integer(bi(2));
    let three = Rat::from_integer(bi(3));
    // m1^2 + m1 + 1 = r^2 and m0 = -(m1 + 2 -+ 2r)/3
    let s1 = m1 * m1 + m1 + &one;
    if let Some(r) = rational_sqrt(&s1) {
        for rr in [r.clone(), -r] {
            let cand = -((m1 + &two - &two * &rr) / &three);
            if &cand == m0 {
                return true;
            }
        }
    }
    // m1^2 + m1 = r^2 and m0 = m1 +- 2r
    let s2 = m1 * m1 + m1;
    if let Some(r) = rational_sqrt(&s2) {
        for rr in [r.clone(), -r] {
            let cand = m1 + &two * &rr;
            if &cand == m0 {
                return true;
            }
        }
    }
    false
}

/// True when the square roots of n1, n2 and n1+n2 are all integers for
/// the symmetric subset {n0, n0+n1, n0+n2, n0+n1+n2}; decides between
/// torsion Z/2 x Z/8 and Z/2 x Z/4 on the attached curve.
pub fn symmetric_has_large_torsion(i: &Subset) -> Result<bool> {
    if i.len() != 4 || !i.is_symmetric() {
        return Err(Error::InvalidSubset("need a symmetric four-element subset".into()));
    }
    let n = i.elements();
    Ok(is_square_int(&Int::from(n[1] - n[0]))
        && is_square_int(&Int::from(n[2] - n[0]))
        && is_square_int(&Int::from(n[3] - n[0])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rq;
    use proptest::prelude::*;

    fn sub(v: &[u64]) -> Subset {
        Subset::new(v.to_vec()).unwrap()
    }

    fn pt(x: i64, y: i64) -> EcPoint {
        EcPoint::Affine(Rat::from_integer(bi(x)), Rat::from_integer(bi(y)))
    }

    fn ec(a2: i64, a4: i64, a6: i64) -> EllipticCurve {
        EllipticCurve::from_i64(a2, a4, a6).unwrap()
    }

    #[test]
    fn group_law_examples() {
        // y^2 = x(x-3)(x+5)
        let e = ec(2, -15, 0);
        assert_eq!(e.add(&pt(-1, 4), &pt(-3, -6)), pt(27, -144));
        // y^2 = x(x-1)(x+3)
        let e = ec(2, -3, 0);
        assert_eq!(e.double(&pt(-1, 2)), pt(1, 0));
        assert_eq!(e.mul(4, &pt(-1, 2)), EcPoint::Infinity);
        assert_eq!(e.order_of(&pt(-1, 2)), Some(4));
        assert_eq!(e.order_of(&pt(1, 0)), Some(2));
        assert_eq!(e.order_of(&EcPoint::Infinity), Some(1));
    }

    #[test]
    fn non_torsion_has_no_order() {
        // y^2 = x^3 - 2, rank 1, generator (3, 5)
        let e = ec(0, 0, -2);
        assert!(e.contains(&pt(3, 5)));
        assert_eq!(e.order_of(&pt(3, 5)), None);
    }

    #[test]
    fn integral_model_roundtrip() {
        let e = EllipticCurve::new(rq(22, 9), rq(-5, 3), Rat::zero()).unwrap();
        let (int, u) = e.integral_model();
        assert!(int.is_integral());
        let p = EcPoint::Affine(rq(-5, 3), rq(-20, 9));
        assert!(e.contains(&p));
        let q = EllipticCurve::scale_point(&p, &u);
        assert!(int.contains(&q));
    }

    #[test]
    fn torsion_z2_z4() {
        let e = ec(2, -3, 0); // x(x-1)(x+3)
        let t = e.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 4]);
        assert_eq!(t.order, 8);
        assert!(t.certified, "bound was {}", t.bound);
    }

    #[test]
    fn torsion_z2_z2() {
        let e = ec(2, -8, 0); // x(x-2)(x+4)
        let t = e.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 2]);
        assert!(t.certified, "bound was {}", t.bound);
    }

    #[test]
    fn torsion_z2_z8() {
        let e = ec(94, -14175, 0); // x(x-81)(x+175)
        let t = e.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 8]);
        assert_eq!(t.order, 16);
        assert!(t.certified, "bound was {}", t.bound);
    }

    #[test]
    fn torsion_cyclic_examples() {
        // y^2 = x^3 + 1: Z/6
        let t = ec(0, 0, 1).torsion().unwrap();
        assert_eq!(t.invariants, vec![6]);
        assert!(t.certified);
        // y^2 = x^3 + 4: Z/3
        let t = ec(0, 0, 4).torsion().unwrap();
        assert_eq!(t.invariants, vec![3]);
        assert!(t.certified);
        // y^2 = x^3 + 4x: Z/4
        let t = ec(0, 4, 0).torsion().unwrap();
        assert_eq!(t.invariants, vec![4]);
        assert!(t.certified);
        // y^2 = x^3 - x: full 2-torsion only
        let t = ec(0, -1, 0).torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 2]);
        assert!(t.certified);
    }

    #[test]
    fn torsion_beyond_machinery_is_uncertified() {
        // y^2 = x^3 - 43x + 166 has a rational point of order 7; orders
        // coprime to 2 and 3 are only bounded, never enumerated
        let e = ec(0, -43, 166);
        assert!(e.contains(&pt(3, 8)));
        let t = e.torsion().unwrap();
        assert_eq!(t.order, 1);
        assert_eq!(t.bound % 7, 0);
        assert!(!t.certified);
    }

    #[test]
    fn four_subset_models() {
        let f = FourSubsetCurve::new(&sub(&[0, 1, 2, 4])).unwrap();
        assert_eq!(f.m0(), &Rat::one());
        assert_eq!(f.m1(), &Rat::from_integer(bi(2)));
        assert!(!f.is_symmetric());
        let [r0, r1, r2] = f.integral_roots();
        assert_eq!((r0, r1, r2), (bi(0), bi(2), bi(-4)));
        let t = f.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 2]);

        let f = FourSubsetCurve::new(&sub(&[0, 1, 2, 3])).unwrap();
        assert!(f.is_symmetric());
        let t = f.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 4]);
        assert!(f.trivial_images_form_subgroup());
        assert_eq!(f.trivial_images().len(), 8);

        let f = FourSubsetCurve::new(&sub(&[0, 9, 16, 25])).unwrap();
        assert!(f.is_symmetric());
        assert!(symmetric_has_large_torsion(f.subset()).unwrap());
        let t = f.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 8]);

        let f = FourSubsetCurve::new(&sub(&[0, 1, 2, 4])).unwrap();
        assert!(!f.trivial_images_form_subgroup());
    }

    #[test]
    fn trivial_images_lie_on_curve() {
        for v in [
            vec![0u64, 1, 2, 4],
            vec![0, 1, 2, 3],
            vec![0, 2, 3, 8],
            vec![1, 3, 6, 10],
            vec![0, 9, 16, 25],
        ] {
            let f = FourSubsetCurve::new(&sub(&v)).unwrap();
            let imgs = f.trivial_images();
            for p in &imgs {
                assert!(f.curve().contains(p), "{p} not on curve for {v:?}");
            }
            // integral transport stays on the integral model
            for p in &imgs {
                assert!(f.integral_curve().contains(&f.to_integral_point(p)));
            }
        }
    }

    #[test]
    fn witness_ap_table() {
        let rows: [(&[u64], i64, i64); 7] = [
            (&[0, 1, 2, 4], 120, 49),
            (&[0, 1, 2, 5], 24, 1),
            (&[0, 1, 3, 5], 168, 121),
            (&[0, 1, 2, 6], 840, 1),
            (&[0, 1, 3, 6], 8, 1),
            (&[0, 2, 3, 6], 280, 529),
            (&[0, 1, 4, 6], 24, 25),
        ];
        for (v, q, a) in rows {
            let got = witness_ap(&sub(v)).unwrap();
            let want = ArithProgression::new(bi(q), bi(a)).unwrap();
            assert_eq!(got, want, "subset {v:?}");
        }
        // symmetric subsets have no such witness
        assert!(witness_ap(&sub(&[0, 1, 3, 4])).is_err());
        // translation invariance up to the shift in a
        let shifted = witness_ap(&sub(&[5, 6, 7, 9])).unwrap();
        assert!(shifted.covers(&sub(&[5, 6, 7, 9])));
    }

    #[test]
    fn symmetric_witnesses() {
        let (up, down) = symmetric_square_witnesses(&sub(&[0, 9, 16, 25]))
            .unwrap()
            .unwrap();
        assert_eq!(up, ArithProgression::new(bi(1), bi(0)).unwrap());
        assert_eq!(down, ArithProgression::new(bi(-1), bi(25)).unwrap());
        assert!(symmetric_square_witnesses(&sub(&[0, 1, 2, 3]))
            .unwrap()
            .is_none());
        assert!(symmetric_square_witnesses(&sub(&[0, 1, 2, 4]))
            .unwrap()
            .is_none());
        let shifted = symmetric_square_witnesses(&sub(&[3, 12, 19, 28])).unwrap();
        let (up, down) = shifted.unwrap();
        assert!(up.covers(&sub(&[3, 12, 19, 28])));
        assert!(down.covers(&sub(&[3, 12, 19, 28])));
    }

    #[test]
    fn small_order_family_examples() {
        assert!(small_order_image_family(&rq(1, 3), &rq(5, 3)));
        assert!(!small_order_image_family(&Rat::one(), &Rat::from_integer(bi(2))));
        assert!(!small_order_image_family(&rq(1, 2), &Rat::one()));

        // at (1/3, 5/3) one of the non-obvious images really has order 6
        let zero = Rat::zero();
        let m0 = rq(1, 3);
        let m1 = rq(5, 3);
        let r1 = &m0 * &m1;
        let r2 = -(&m0 + &m1 + Rat::one());
        let e = EllipticCurve::from_roots(&zero, &r1, &r2).unwrap();
        let q4 = EcPoint::Affine(-m1.clone(), -(&m1 * (&m0 + Rat::one())));
        assert!(e.contains(&q4));
        assert_eq!(e.order_of(&q4), Some(6));
        // and the curve picks up 3-torsion
        let t = e.torsion().unwrap();
        assert_eq!(t.invariants, vec![2, 6]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn group_law_is_associative(x1 in -6i64..7, x2 in -6i64..7, x3 in -6i64..7) {
            // y^2 = x(x-1)(x+3) has full 2-torsion and known points
            let e = ec(2, -3, 0);
            let pool: Vec<EcPoint> = vec![
                EcPoint::Infinity, pt(0,0), pt(1,0), pt(-3,0), pt(-1,2), pt(-1,-2), pt(3,6), pt(3,-6),
            ];
            let p = &pool[(x1.rem_euclid(8)) as usize];
            let q = &pool[(x2.rem_euclid(8)) as usize];
            let r = &pool[(x3.rem_euclid(8)) as usize];
            let lhs = e.add(&e.add(p, q), r);
            let rhs = e.add(p, &e.add(q, r));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn symmetry_matches_m_equality(n1 in 1u64..9, n2 in 1u64..9, n3 in 1u64..9) {
            let a = n1;
            let b = n1 + n2;
            let c = n1 + n2 + n3;
            let i = sub(&[0, a, b, c]);
            let f = FourSubsetCurve::new(&i).unwrap();
            prop_assert_eq!(f.is_symmetric(), i.is_symmetric());
        }

        #[test]
        fn witness_ap_covers_non_symmetric(n1 in 1u64..8, n2 in 1u64..8, n3 in 1u64..8, off in 0u64..5) {
            let i = sub(&[off, off + n1, off + n1 + n2, off + n1 + n2 + n3]);
            if i.is_symmetric() {
                prop_assert!(witness_ap(&i).is_err());
            } else {
                let w = witness_ap(&i).unwrap();
                prop_assert!(w.covers(&i));
                prop_assert!(!w.q().is_zero());
            }
        }

        #[test]
        fn torsion_of_four_subset_curves_is_certified(n1 in 1u64..6, n2 in 1u64..6, n3 in 1u64..6) {
            let i = sub(&[0, n1, n1 + n2, n1 + n2 + n3]);
            let f = FourSubsetCurve::new(&i).unwrap();
            let t = f.torsion().unwrap();
            prop_assert!(t.certified, "bound {} for {:?}", t.bound, i);
            prop_assert_eq!(t.invariants[0], 2);
            // trivial 2-torsion of the model is always rational
            prop_assert!(t.order >= 4);
            if f.is_symmetric() {
                let big = symmetric_has_large_torsion(&i).unwrap();
                let expect = if big { vec![2u64, 8] } else { vec![2u64, 4] };
                prop_assert_eq!(t.invariants, expect);
            }
        }
    }
}
