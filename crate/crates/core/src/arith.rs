//! Exact integer and rational arithmetic.
//!
//! Everything downstream works over these types. Factoring is trial
//! division with a provable cofactor analysis: when the leftover part
//! cannot be certified prime or squarefree we return an error instead of
//! guessing. Inputs produced by the rest of the crate have small prime
//! support by construction, so the error path never fires in practice.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = num_rational::BigRational;

/// Shorthand constructors used pervasively in code and tests.
pub fn bi(n: i64) -> Int {
    Int::from(n)
}

pub fn ri(n: i64) -> Rat {
    Rat::from_integer(bi(n))
}

pub fn rq(n: i64, d: i64) -> Rat {
    Rat::new(bi(n), bi(d))
}

const TRIAL_BOUND: u64 = 1_000_000;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut p = 2usize;
        while p * p <= n {
            if sieve[p] {
                let mut q = p * p;
                while q <= n {
                    sieve[q] = false;
                    q += p;
                }
            }
            p += 1;
        }
        (2..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    // f64 seed can be off by a couple of ulps at this width.
    while x > 0 && x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).map_or(false, |s| s <= n) {
        x += 1;
    }
    x
}

pub fn is_square_i128(v: i128) -> bool {
    if v < 0 {
        return false;
    }
    let v = v as u128;
    // quadratic residues mod 64 rule out most non-squares cheaply
    const QR64: u64 = {
        let mut mask = 0u64;
        let mut i = 0u64;
        while i < 64 {
            mask |= 1 << ((i * i) % 64);
            i += 1;
        }
        mask
    };
    if QR64 & (1u64 << (v % 64)) == 0 {
        return false;
    }
    let r = isqrt_u128(v);
    r * r == v
}

/// Exact integer square root of a nonnegative integer.
pub fn int_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = num_integer::Roots::sqrt(n);
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub fn is_square_int(n: &Int) -> bool {
    if let Some(v) = n.to_i128() {
        return is_square_i128(v);
    }
    int_sqrt(n).is_some()
}

/// Square root of a rational if it exists in the rationals.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = int_sqrt(r.numer())?;
    let d = int_sqrt(r.denom())?;
    Some(Rat::new(n, d))
}

pub fn is_square_rat(r: &Rat) -> bool {
    rational_sqrt(r).is_some()
}

/// Miller-Rabin with a base set that is deterministic below 3.3e24.
/// Larger inputs only occur through user-supplied data; for those the
/// same bases make an error probability that is beyond astronomical,
/// and every caller that needs a certificate re-checks divisibility.
pub fn is_prime(n: &Int) -> bool {
    if n <= &Int::one() {
        return false;
    }
    let small: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &p in &small {
        let p = Int::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = Int::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &small {
        let mut x = Int::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&Int::from(2u32), n);
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn factor_u128(mut m: u128) -> Result<Vec<(Int, u32)>> {
    let mut out: Vec<(Int, u32)> = Vec::new();
    for &p in small_primes() {
        let p = p as u128;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((Int::from(p), e));
        }
    }
    if m == 1 {
        return Ok(out);
    }
    if m < (TRIAL_BOUND as u128) * (TRIAL_BOUND as u128) || is_prime(&Int::from(m)) {
        // any composite cofactor would have a factor below the trial bound
        out.push((Int::from(m), 1));
        return Ok(out);
    }
    let r = isqrt_u128(m);
    if r * r == m {
        for (p, e) in factor_u128(r)? {
            out.push((p, 2 * e));
        }
        return Ok(out);
    }
    split_hard_cofactor(&Int::from(m), &mut out)?;
    Ok(out)
}

/// One nontrivial factor of an odd composite with no small divisors.
fn pollard_rho(n: &Int) -> Option<Int> {
    let one = Int::one();
    for c in 1u64..40 {
        let cb = Int::from(c);
        let step = |x: &Int| (x * x + &cb) % n;
        let mut x = Int::from(2u32);
        let mut y = x.clone();
        loop {
            x = step(&x);
            y = step(&step(&y));
            if x == y {
                break; // cycle without a factor: try the next c
            }
            let d = (&x - &y).abs().gcd(n);
            if !d.is_one() {
                if d == *n {
                    break;
                }
                return Some(d);
            }
        }
    }
    None
}

fn split_hard_cofactor(m: &Int, out: &mut Vec<(Int, u32)>) -> Result<()> {
    if is_prime(m) {
        out.push((m.clone(), 1));
        return Ok(());
    }
    let d = pollard_rho(m).ok_or_else(|| {
        Error::Factorization(format!("cofactor {m} resisted factoring"))
    })?;
    let q = m / &d;
    for part in [d, q] {
        let sub = factorize(&part)?;
        for (p, e) in sub {
            match out.iter_mut().find(|(q, _)| *q == p) {
                Some((_, cnt)) => *cnt += e,
                None => out.push((p, e)),
            }
        }
    }
    Ok(())
}

/// Factor |n| completely or fail with an explanation.
pub fn factorize(n: &Int) -> Result<Vec<(Int, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let m = n.abs();
    if let Some(v) = m.to_u128() {
        return factor_u128(v);
    }
    let mut m = m;
    let mut out: Vec<(Int, u32)> = Vec::new();
    for &p in small_primes() {
        let pb = Int::from(p);
        if (&pb * &pb) > m {
            break;
        }
        if (&m % &pb).is_zero() {
            let mut e = 0u32;
            while (&m % &pb).is_zero() {
                m /= &pb;
                e += 1;
            }
            out.push((pb, e));
        }
    }
    if m.is_one() {
        return Ok(out);
    }
    if is_prime(&m) {
        out.push((m, 1));
        return Ok(out);
    }
    for k in 2u32..=8 {
        let r = num_integer::Roots::nth_root(&m, k);
        if num_traits::pow::pow(r.clone(), k as usize) == m {
            for (p, e) in factorize(&r)? {
                out.push((p, k * e));
            }
            return Ok(out);
        }
    }
    split_hard_cofactor(&m, &mut out)?;
    Ok(out)
}

/// Write n = s * f^2 with s squarefree and f > 0; sign(s) = sign(n).
pub fn squarefree_decompose(n: &Int) -> Result<(Int, Int)> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    let mut s = Int::one();
    let mut f = Int::one();
    let m = n.abs();
    // mirror factorize, but tolerate one uncertified squarefree cofactor
    let mut rest = m;
    for &p in small_primes() {
        let pb = Int::from(p);
        if (&pb * &pb) > rest {
            break;
        }
        if (&rest % &pb).is_zero() {
            let mut e = 0u32;
            while (&rest % &pb).is_zero() {
                rest /= &pb;
                e += 1;
            }
            if e % 2 == 1 {
                s *= &pb;
            }
            f *= num_traits::pow::pow(pb, (e / 2) as usize);
        }
    }
    if !rest.is_one() {
        if is_prime(&rest) {
            s *= &rest;
        } else if let Some(r) = int_sqrt(&rest) {
            // rest = r^2, so it contributes r to the square part outright
            f *= &r;
        } else if rest <= Int::from(10u64).pow(18) {
            // composite, not a square, no factor below the trial bound:
            // a product of two distinct primes, hence squarefree
            s *= &rest;
        } else {
            return Err(Error::Factorization(format!(
                "cannot certify squarefree part of cofactor {rest}"
            )));
        }
    }
    if n.is_negative() {
        s = -s;
    }
    Ok((s, f))
}

pub fn squarefree_part(n: &Int) -> Result<Int> {
    Ok(squarefree_decompose(n)?.0)
}

/// Squarefree integer representing the square class of a nonzero rational.
pub fn rational_square_class(r: &Rat) -> Result<Int> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    squarefree_part(&(r.numer() * r.denom()))
}

/// p-adic valuation of a nonzero rational.
pub fn padic_valuation(p: &Int, r: &Rat) -> Result<i64> {
    if r.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p < &bi(2) {
        return Err(Error::Degenerate(format!("{p} is not a prime")));
    }
    let vp = |mut n: Int| -> i64 {
        let mut v = 0;
        while (&n % p).is_zero() {
            n /= p;
            v += 1;
        }
        v
    };
    Ok(vp(r.numer().abs()) - vp(r.denom().clone()))
}

/// All squarefree divisors of n, with both signs. Needs a full factorization.
pub fn signed_squarefree_divisors(n: &Int) -> Result<Vec<Int>> {
    let primes = prime_support(n)?;
    let mut out = vec![Int::one()];
    for p in &primes {
        let mut more: Vec<Int> = out.iter().map(|d| d * p).collect();
        out.append(&mut more);
    }
    let negs: Vec<Int> = out.iter().map(|d| -d).collect();
    out.extend(negs);
    Ok(out)
}

/// Distinct primes dividing n.
pub fn prime_support(n: &Int) -> Result<Vec<Int>> {
    Ok(factorize(n)?.into_iter().map(|(p, _)| p).collect())
}

// ---------------------------------------------------------------------------
// Quadratic field elements
// ---------------------------------------------------------------------------

/// An element a + b*sqrt(d) of a quadratic extension of the rationals.
///
/// Invariants: d is squarefree; d == 1 exactly when the element is
/// rational, in which case b == 0.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadExt {
    a: Rat,
    b: Rat,
    d: Int,
}

impl QuadExt {
    pub fn rational(a: Rat) -> Self {
        QuadExt {
            a,
            b: Rat::zero(),
            d: Int::one(),
        }
    }

    pub fn new(a: Rat, b: Rat, d: Int) -> Result<Self> {
        let (s, f) = squarefree_decompose(&d)?;
        if s.is_one() {
            // the surd collapses into the rational part
            return Ok(QuadExt::rational(a + b * Rat::from_integer(f)));
        }
        if b.is_zero() {
            return Ok(QuadExt::rational(a));
        }
        Ok(QuadExt {
            a,
            b: b * Rat::from_integer(f),
            d: s,
        })
    }

    /// sqrt(r) as an element of Q(sqrt(radicand)).
    pub fn sqrt_of(r: &Rat) -> Result<Self> {
        if r.is_zero() {
            return Ok(QuadExt::rational(Rat::zero()));
        }
        let s = rational_square_class(r)?;
        // r = s * (f/den)^2 with f^2 = r*den^2/s
        let scaled = r / Rat::from_integer(s.clone());
        let f = rational_sqrt(&scaled).expect("square class leaves an exact square");
        if s.is_one() {
            return Ok(QuadExt::rational(f));
        }
        Ok(QuadExt {
            a: Rat::zero(),
            b: f,
            d: s,
        })
    }

    pub fn radicand(&self) -> &Int {
        &self.d
    }

    pub fn rational_part(&self) -> &Rat {
        &self.a
    }

    pub fn surd_part(&self) -> &Rat {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rat> {
        if self.is_rational() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn norm(&self) -> Rat {
        &self.a * &self.a - &self.b * &self.b * Rat::from_integer(self.d.clone())
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(QuadExt {
            a: &self.a / &n,
            b: -&self.b / n,
            d: self.d.clone(),
        })
    }

    fn joint_radicand(&self, other: &Self) -> Int {
        if self.is_rational() {
            other.d.clone()
        } else if other.is_rational() {
            self.d.clone()
        } else {
            assert_eq!(
                self.d, other.d,
                "mixing distinct quadratic fields is not supported"
            );
            self.d.clone()
        }
    }
}

impl std::ops::Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        let d = self.joint_radicand(rhs);
        let b = &self.b + &rhs.b;
        QuadExt {
            a: &self.a + &rhs.a,
            d: if b.is_zero() { Int::one() } else { d },
            b,
        }
    }
}

impl std::ops::Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self + &(-rhs.clone())
    }
}

impl std::ops::Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl std::ops::Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        let d = self.joint_radicand(rhs);
        let dr = Rat::from_integer(d.clone());
        let a = &self.a * &rhs.a + &self.b * &rhs.b * dr;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadExt {
            a,
            d: if b.is_zero() { Int::one() } else { d },
            b,
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            if self.b.is_one() {
                return write!(f, "sqrt({})", self.d);
            }
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Dense polynomials, coefficients in ascending order. Just enough exact
// machinery to find rational roots of the small polynomials that show up
// in torsion computations: Sturm chains for isolation, then exact checks.

pub fn poly_eval_int(coeffs: &[Int], x: &Int) -> Int {
    let mut acc = Int::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn poly_eval_rat(coeffs: &[Rat], x: &Rat) -> Rat {
    let mut acc = Rat::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_trim(mut c: Vec<Rat>) -> Vec<Rat> {
    while c.last().map_or(false, |t| t.is_zero()) {
        c.pop();
    }
    c
}

fn poly_derivative(c: &[Rat]) -> Vec<Rat> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| v * Rat::from_integer(Int::from(i)))
        .collect()
}

/// Remainder of a by b, both nonempty trimmed, deg(b) >= 0.
fn poly_rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r: Vec<Rat> = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let factor = &r[dr] / lead;
        for j in 0..=db {
            let t = &b[j] * &factor;
            r[dr - db + j] -= t;
        }
        r = poly_trim(r);
        if r.len() <= db {
            break;
        }
    }
    r
}

fn poly_gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut x = poly_trim(a.to_vec());
    let mut y = poly_trim(b.to_vec());
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    x
}

fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = poly_trim(a.to_vec());
    let db = b.len() - 1;
    let mut q = vec![Rat::zero(); r.len().saturating_sub(db)];
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = &r[dr] / &b[db];
        q[dr - db] = factor.clone();
        for j in 0..=db {
            let t = &b[j] * &factor;
            r[dr - db + j] -= t;
        }
        r = poly_trim(r);
    }
    q
}

fn sturm_chain(p: &[Rat]) -> Vec<Vec<Rat>> {
    let mut chain = vec![p.to_vec(), poly_trim(poly_derivative(p))];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        if chain[n - 1].len() == 1 {
            break;
        }
        let r = poly_rem(&chain[n - 2], &chain[n - 1]);
        let neg: Vec<Rat> = r.iter().map(|c| -c.clone()).collect();
        if neg.is_empty() {
            break;
        }
        chain.push(neg);
    }
    chain
}

fn sign_variations(chain: &[Vec<Rat>], x: &Rat) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = poly_eval_rat(p, x);
        let s = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Distinct real roots of p in the half-open interval (lo, hi].
fn sturm_count(chain: &[Vec<Rat>], lo: &Rat, hi: &Rat) -> usize {
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

/// All integer roots of an integer polynomial, ascending. Exact: Sturm
/// isolation down to unit intervals, then direct evaluation.
pub fn integer_roots(coeffs: &[Int]) -> Vec<Int> {
    let mut c: Vec<Int> = coeffs.to_vec();
    while c.last().map_or(false, |t| t.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    // factor out x^v so the constant term is nonzero
    let mut shift = 0;
    while c[0].is_zero() {
        c.remove(0);
        shift += 1;
    }
    if shift > 0 {
        out.push(Int::zero());
    }
    if c.len() <= 1 {
        out.sort();
        return out;
    }
    let p: Vec<Rat> = c.iter().map(|v| Rat::from_integer(v.clone())).collect();
    // squarefree part keeps Sturm counting clean
    let g = poly_gcd(&p, &poly_derivative(&p));
    let sf = if g.len() > 1 { poly_div_exact(&p, &g) } else { p };
    let chain = sturm_chain(&sf);
    // Cauchy bound on root magnitude
    let lead = sf.last().unwrap().abs();
    let mut m = Rat::one();
    for v in &sf[..sf.len() - 1] {
        let t = v.abs() / &lead;
        if t > m {
            m = t;
        }
    }
    let bound: Int = m.ceil().to_integer() + 2;
    let lo = Rat::from_integer(-bound.clone());
    let hi = Rat::from_integer(bound);
    let mut stack = vec![(lo, hi)];
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm_count(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        let width = &hi - &lo;
        if width <= Rat::one() {
            // the only integer candidate in (lo, hi] is floor(hi)
            let cand = hi.floor().to_integer();
            let cr = Rat::from_integer(cand.clone());
            if cr > lo && poly_eval_int(&c, &cand).is_zero() {
                out.push(cand);
            }
            continue;
        }
        let mid = Rat::from_integer(((&lo + &hi) / Rat::from_integer(Int::from(2))).floor().to_integer());
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort();
    out.dedup();
    out
}

fn squarefree_rat_poly(coeffs: &[Int]) -> Vec<Rat> {
    let p: Vec<Rat> = coeffs
        .iter()
        .map(|v| Rat::from_integer(v.clone()))
        .collect();
    let p = poly_trim(p);
    if p.len() <= 1 {
        return p;
    }
    let g = poly_gcd(&p, &poly_derivative(&p));
    if g.len() > 1 {
        poly_div_exact(&p, &g)
    } else {
        p
    }
}

fn cauchy_bound(p: &[Rat]) -> Int {
    let lead = p.last().unwrap().abs();
    let mut m = Rat::one();
    for v in &p[..p.len() - 1] {
        let t = v.abs() / &lead;
        if t > m {
            m = t;
        }
    }
    let b: Int = m.ceil().to_integer() + 2;
    b
}

/// Number of distinct real roots of an integer polynomial.
pub fn count_real_roots(coeffs: &[Int]) -> usize {
    let sf = squarefree_rat_poly(coeffs);
    if sf.len() <= 1 {
        return 0;
    }
    let chain = sturm_chain(&sf);
    let bound = cauchy_bound(&sf);
    let lo = Rat::from_integer(-bound.clone());
    let hi = Rat::from_integer(bound);
    sturm_count(&chain, &lo, &hi)
}

/// Disjoint intervals (a, b] with rational endpoints, each containing
/// exactly one distinct real root, ascending.
pub fn isolate_real_roots(coeffs: &[Int]) -> Vec<(Rat, Rat)> {
    let sf = squarefree_rat_poly(coeffs);
    if sf.len() <= 1 {
        return Vec::new();
    }
    let chain = sturm_chain(&sf);
    let bound = cauchy_bound(&sf);
    let lo = Rat::from_integer(-bound.clone());
    let hi = Rat::from_integer(bound);
    let mut out = Vec::new();
    let mut stack = vec![(lo, hi)];
    let half = Rat::new(Int::one(), Int::from(2));
    while let Some((lo, hi)) = stack.pop() {
        let n = sturm_count(&chain, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) * &half;
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Shrink an isolation interval (a, b] of the polynomial by one
/// bisection step, keeping the root inside.
pub fn refine_isolation(coeffs: &[Int], interval: &(Rat, Rat)) -> (Rat, Rat) {
    let sf = squarefree_rat_poly(coeffs);
    let chain = sturm_chain(&sf);
    let half = Rat::new(Int::one(), Int::from(2));
    let mid = (&interval.0 + &interval.1) * half;
    if sturm_count(&chain, &interval.0, &mid) == 1 {
        (interval.0.clone(), mid)
    } else {
        (mid, interval.1.clone())
    }
}

/// Resultant of two integer polynomials, via the Euclidean recurrence
/// over the rationals. Zero exactly when they share a root.
pub fn poly_resultant(a: &[Int], b: &[Int]) -> Int {
    fn res(f: &[Rat], g: &[Rat]) -> Rat {
        // res(f, g) with deg f >= deg g handled by the recurrence
        // res(f, g) = (-1)^(df*dg) res(g, f)
        // res(f, g) = lead(g)^(df - dr) * res(g, r),  r = f mod g
        if g.is_empty() {
            return Rat::zero();
        }
        if g.len() == 1 {
            // constant: res = g0^(deg f)
            let mut acc = Rat::one();
            for _ in 0..f.len().saturating_sub(1) {
                acc *= &g[0];
            }
            return acc;
        }
        if f.len() < g.len() {
            let s = res(g, f);
            let df = (f.len() - 1) * (g.len() - 1);
            return if df % 2 == 1 { -s } else { s };
        }
        let r = poly_rem(f, g);
        let dr = r.len().saturating_sub(1);
        let df = f.len() - 1;
        let lead = g.last().unwrap();
        let mut scale = Rat::one();
        for _ in 0..(df - dr) {
            scale *= lead;
        }
        let swap_sign = ((f.len() - 1) * (g.len() - 1)) % 2 == 1;
        let inner = res(g, &r);
        let out = scale * inner;
        if swap_sign {
            -out
        } else {
            out
        }
    }
    let fa: Vec<Rat> = a.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let fb: Vec<Rat> = b.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let fa = poly_trim(fa);
    let fb = poly_trim(fb);
    if fa.is_empty() || fb.is_empty() {
        return Int::zero();
    }
    let r = res(&fa, &fb);
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// Quadratic character of a mod p for odd prime p.
pub(crate) fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut result: u64 = 1;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// All rational roots of an integer polynomial, ascending. Denominators
/// divide the leading coefficient, so each divisor is handled by an
/// integer substitution.
pub fn rational_roots(coeffs: &[Int]) -> Result<Vec<Rat>> {
    let mut c: Vec<Int> = coeffs.to_vec();
    while c.last().map_or(false, |t| t.is_zero()) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let lead = c.last().unwrap().abs();
    let facs = factorize(&lead)?;
    let mut divisors = vec![Int::one()];
    for (p, e) in facs {
        let mut next = Vec::new();
        for d in &divisors {
            let mut pk = Int::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    divisors.dedup();
    let mut out: Vec<Rat> = Vec::new();
    for q in divisors {
        // x = z / q: scaled coefficients c_i * q^(deg - i)
        let mut scaled = Vec::with_capacity(c.len());
        let mut pw = Int::one();
        let mut pows = vec![Int::one(); c.len()];
        for i in (0..c.len()).rev() {
            pows[i] = pw.clone();
            pw *= &q;
        }
        for (i, v) in c.iter().enumerate() {
            scaled.push(v * &pows[i]);
        }
        for z in integer_roots(&scaled) {
            out.push(Rat::new(z, q.clone()));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn squarefree_decompose_basics() {
        assert_eq!(squarefree_decompose(&bi(360)).unwrap(), (bi(10), bi(6)));
        assert_eq!(squarefree_decompose(&bi(-45)).unwrap(), (bi(-5), bi(3)));
        assert_eq!(squarefree_decompose(&bi(1)).unwrap(), (bi(1), bi(1)));
        assert_eq!(squarefree_decompose(&bi(16)).unwrap(), (bi(1), bi(4)));
        assert!(squarefree_decompose(&bi(0)).is_err());
    }

    #[test]
    fn rational_sqrt_examples() {
        assert_eq!(rational_sqrt(&rq(49, 4)), Some(rq(7, 2)));
        assert_eq!(rational_sqrt(&rq(2, 1)), None);
        assert_eq!(rational_sqrt(&rq(-1, 1)), None);
        assert_eq!(rational_sqrt(&Rat::zero()), Some(Rat::zero()));
    }

    #[test]
    fn padic_valuation_examples() {
        assert_eq!(padic_valuation(&bi(2), &rq(24, 1)).unwrap(), 3);
        assert_eq!(padic_valuation(&bi(3), &rq(5, 9)).unwrap(), -2);
        assert_eq!(padic_valuation(&bi(5), &rq(7, 3)).unwrap(), 0);
        assert!(padic_valuation(&bi(2), &Rat::zero()).is_err());
    }

    #[test]
    fn quad_ext_mul_and_norm() {
        // (1 + sqrt(10))(2 - 3 sqrt(10)) = 2 - 30 + (2 - 3) sqrt(10)
        let x = QuadExt::new(ri(1), ri(1), bi(10)).unwrap();
        let y = QuadExt::new(ri(2), ri(-3), bi(10)).unwrap();
        let z = &x * &y;
        assert_eq!(z.rational_part(), &ri(-28));
        assert_eq!(z.surd_part(), &ri(-1));
        assert_eq!(x.norm(), ri(-9));
        let inv = x.inv().unwrap();
        let prod = &x * &inv;
        assert_eq!(prod.to_rational(), Some(ri(1)));
    }

    #[test]
    fn quad_ext_radicand_normalizes() {
        // sqrt(4/9) is rational, sqrt(8) = 2 sqrt(2)
        let r = QuadExt::sqrt_of(&rq(4, 9)).unwrap();
        assert_eq!(r.to_rational(), Some(rq(2, 3)));
        let s = QuadExt::sqrt_of(&ri(8)).unwrap();
        assert_eq!(s.radicand(), &bi(2));
        assert_eq!(s.surd_part(), &ri(2));
        let sq = &s * &s;
        assert_eq!(sq.to_rational(), Some(ri(8)));
        let neg = QuadExt::sqrt_of(&ri(-6)).unwrap();
        assert_eq!(neg.radicand(), &bi(-6));
    }

    #[test]
    fn primality_small_and_structured() {
        assert!(is_prime(&bi(2)));
        assert!(is_prime(&bi(1_000_003)));
        assert!(!is_prime(&bi(1)));
        assert!(!is_prime(&(bi(1_000_003) * bi(1_000_033))));
        // Carmichael number
        assert!(!is_prime(&bi(561)));
    }

    #[test]
    fn factorize_certifies_or_fails() {
        let f = factorize(&bi(2 * 2 * 3 * 49)).unwrap();
        assert_eq!(f, vec![(bi(2), 2), (bi(3), 1), (bi(7), 2)]);
        // semiprime above the trial bound squared is still fine via MR+sqrt shape
        let p = bi(1_000_003);
        let q = bi(1_000_033);
        let f2 = factorize(&(&p * &p)).unwrap();
        assert_eq!(f2, vec![(p.clone(), 2)]);
        // squarefree part of an unsplittable semiprime is still certified
        let (s, f) = squarefree_decompose(&(&p * &q)).unwrap();
        assert_eq!(s, &p * &q);
        assert_eq!(f, bi(1));
    }

    proptest! {
        #[test]
        fn squarefree_roundtrip(n in -1_000_000_000i64..1_000_000_000) {
            prop_assume!(n != 0);
            let (s, f) = squarefree_decompose(&bi(n)).unwrap();
            prop_assert_eq!(&s * &f * &f, bi(n));
            prop_assert!(f.is_positive());
            // s is squarefree: no prime square divides it
            let sf = squarefree_part(&s).unwrap();
            prop_assert_eq!(sf, s);
        }

        #[test]
        fn sqrt_exactness(n in 0i64..2_000_000, d in 1i64..2_000) {
            let r = rq(n, d);
            if let Some(s) = rational_sqrt(&r) {
                prop_assert_eq!(&s * &s, r);
            } else {
                // no rational square root exists: squarefree class is not 1
                if n != 0 {
                    let c = rational_square_class(&r).unwrap();
                    prop_assert!(!c.is_one());
                }
            }
        }

        #[test]
        fn quad_ext_ring_laws(
            a1 in -50i64..50, b1 in -50i64..50,
            a2 in -50i64..50, b2 in -50i64..50,
            a3 in -50i64..50, b3 in -50i64..50,
        ) {
            let d = bi(7);
            let x = QuadExt::new(ri(a1), ri(b1), d.clone()).unwrap();
            let y = QuadExt::new(ri(a2), ri(b2), d.clone()).unwrap();
            let z = QuadExt::new(ri(a3), ri(b3), d.clone()).unwrap();
            let left = &(&x * &y) * &z;
            let right = &x * &(&y * &z);
            prop_assert_eq!(left, right);
            let dist_l = &x * &(&y + &z);
            let dist_r = &(&x * &y) + &(&x * &z);
            prop_assert_eq!(dist_l, dist_r);
            // conjugation is multiplicative
            let c1 = (&x * &y).conjugate();
            let c2 = &x.conjugate() * &y.conjugate();
            prop_assert_eq!(c1, c2);
        }

        #[test]
        fn integer_roots_from_factored_form(r1 in -40i64..40, r2 in -40i64..40, r3 in -40i64..40, lead in 1i64..4) {
            // lead * (x - r1)(x - r2)(x - r3)
            let (a, b, c) = (bi(r1), bi(r2), bi(r3));
            let e1 = -(&a + &b + &c);
            let e2 = &a * &b + &a * &c + &b * &c;
            let e3 = -(&a * &b * &c);
            let l = bi(lead);
            let coeffs = vec![&e3 * &l, &e2 * &l, &e1 * &l, l];
            let mut expect = vec![bi(r1), bi(r2), bi(r3)];
            expect.sort();
            expect.dedup();
            prop_assert_eq!(integer_roots(&coeffs), expect);
        }

        #[test]
        fn rational_roots_detect_planted(n in -30i64..30, d in 1i64..7, extra in -20i64..20) {
            // (d*x - n)(x - extra)(x^2 + 1), root n/d and extra
            let p1 = vec![bi(-n), bi(d)];
            let p2 = vec![bi(-extra), bi(1)];
            let p3 = vec![bi(1), bi(0), bi(1)];
            let mul = |a: &[Int], b: &[Int]| {
                let mut out = vec![Int::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
                out
            };
            let poly = mul(&mul(&p1, &p2), &p3);
            let roots = rational_roots(&poly).unwrap();
            let mut expect = vec![rq(n, d), ri(extra)];
            expect.sort();
            expect.dedup();
            prop_assert_eq!(roots, expect);
        }
    }

    #[test]
    fn integer_roots_edge_cases() {
        // x^2 (double root at 0)
        assert_eq!(integer_roots(&[bi(0), bi(0), bi(1)]), vec![bi(0)]);
        // (x-2)^2 (x+1)
        assert_eq!(
            integer_roots(&[bi(4), bi(0), bi(-3), bi(1)]),
            vec![bi(-1), bi(2)]
        );
        // no integer roots
        assert_eq!(integer_roots(&[bi(1), bi(0), bi(1)]), Vec::<Int>::new());
        // 3x - 1 has no integer root but a rational one
        assert_eq!(integer_roots(&[bi(-1), bi(3)]), Vec::<Int>::new());
        assert_eq!(rational_roots(&[bi(-1), bi(3)]).unwrap(), vec![rq(1, 3)]);
        // large roots are found exactly
        let big = bi(1_000_003);
        let coeffs = vec![-(&big * &big), bi(0), bi(1)];
        let r = integer_roots(&coeffs);
        assert_eq!(r, vec![-big.clone(), big]);
    }
}
