//! Exact local solvability over R and Q_p for the two kinds of
//! homogeneous space the descents produce: w^2 = quartic(t), and a pair
//! of binary quadratics that must be squares at a common point of P^1.
//!
//! The p-adic decision works digit by digit. On a residue branch
//! t = c + p^m Z_p the value f(t) is pinned mod p^m, so once the
//! valuation of f(c) drops below m with enough spare digits the square
//! class of the whole branch is decided. Branches that stay undecided
//! are shrinking towards a root; a certified simple root either gives a
//! point outright (w = 0) or, for pairs, combines with a branch where
//! the other form is a decided square. Depth is capped by discriminant
//! and resultant valuations, and a work budget turns pathological input
//! into an error instead of a wrong answer.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    count_real_roots, isolate_real_roots, legendre_u64, poly_eval_int, poly_resultant,
    refine_isolation, Int, Rat,
};
use crate::{Error, Result};

const EVAL_BUDGET: u64 = 5_000_000;
const PRIME_RECURSION_LIMIT: u64 = 1 << 22;

fn need_digits(p: u64) -> u32 {
    if p == 2 {
        3
    } else {
        1
    }
}

fn vp_int(p: u64, n: &Int) -> u32 {
    debug_assert!(!n.is_zero());
    let pb = Int::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        m = q;
    }
}

fn unit_residue(p: u64, v: u32, n: &Int, modulus: u64) -> u64 {
    let unit = n / Int::from(p).pow(v);
    let mb = Int::from(modulus);
    let r = unit.mod_floor(&mb);
    use num_traits::ToPrimitive;
    r.to_u64().unwrap()
}

fn unit_is_square(p: u64, u: u64) -> bool {
    if p == 2 {
        u % 8 == 1
    } else {
        legendre_u64(u, p) == 1
    }
}

/// Whether a nonzero integer is a square in Q_p.
pub fn int_is_padic_square(n: &Int, p: u64) -> bool {
    if n.is_zero() {
        return true;
    }
    let v = vp_int(p, n);
    if v % 2 == 1 {
        return false;
    }
    let modulus = if p == 2 { 8 } else { p };
    let u = unit_residue(p, v, n, modulus);
    unit_is_square(p, u)
}

/// Whether a rational number is a square in Q_p (zero counts).
pub fn rat_is_padic_square(r: &Rat, p: u64) -> bool {
    if r.is_zero() {
        return true;
    }
    // numer * denom is in the same square class
    let n = r.numer() * r.denom();
    int_is_padic_square(&n, p)
}

fn poly_derivative_int(c: &[Int]) -> Vec<Int> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, v)| v * Int::from(i))
        .collect()
}

fn poly_mul_int(a: &[Int], b: &[Int]) -> Vec<Int> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Int::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim_int(mut c: Vec<Int>) -> Vec<Int> {
    while c.last().map_or(false, |t| t.is_zero()) {
        c.pop();
    }
    c
}

/// Divide out the largest square dividing the content; square factors
/// of the value never change its square class.
fn strip_square_content(c: &[Int]) -> Result<Vec<Int>> {
    let mut g = Int::zero();
    for v in c {
        g = g.gcd(v);
    }
    if g.is_zero() || g.is_one() {
        return Ok(c.to_vec());
    }
    let (_, f) = crate::arith::squarefree_decompose(&g)?;
    if f.is_one() {
        return Ok(c.to_vec());
    }
    let f2 = &f * &f;
    Ok(c.iter().map(|v| v / &f2).collect())
}

// --- polynomials over F_p, for the good-reduction shortcuts ---

fn fp_reduce(c: &[Int], p: u64) -> Vec<u64> {
    let pb = Int::from(p);
    let mut out: Vec<u64> = c
        .iter()
        .map(|v| {
            use num_traits::ToPrimitive;
            v.mod_floor(&pb).to_u64().unwrap()
        })
        .collect();
    while out.last().map_or(false, |&t| t == 0) {
        out.pop();
    }
    out
}

fn fp_inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut result: u64 = 1;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = (result as u128 * base as u128 % p as u128) as u64;
        }
        base = (base as u128 * base as u128 % p as u128) as u64;
        e >>= 1;
    }
    result
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = (r[dr] as u128 * inv as u128 % p as u128) as u64;
        for j in 0..=db {
            let t = (b[j] as u128 * factor as u128 % p as u128) as u64;
            let idx = dr - db + j;
            r[idx] = (r[idx] + p - t) % p;
        }
        while r.last().map_or(false, |&t| t == 0) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

fn fp_gcd_deg(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let r = fp_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x.len().saturating_sub(1)
}

fn fp_derivative(c: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = c
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &v)| (v as u128 * (i as u64 % p) as u128 % p as u128) as u64)
        .collect();
    while out.last().map_or(false, |&t| t == 0) {
        out.pop();
    }
    out
}

fn fp_squarefree_full_degree(c: &[Int], p: u64, want_deg: usize) -> bool {
    let r = fp_reduce(c, p);
    if r.len() != want_deg + 1 {
        return false;
    }
    let d = fp_derivative(&r, p);
    if d.is_empty() {
        return false;
    }
    fp_gcd_deg(&r, &d, p) == 0
}

fn fp_coprime(a: &[Int], b: &[Int], p: u64) -> bool {
    let ra = fp_reduce(a, p);
    let rb = fp_reduce(b, p);
    if ra.is_empty() || rb.is_empty() {
        return false;
    }
    fp_gcd_deg(&ra, &rb, p) == 0
}

// --- single polynomial: exists t with f(t) a square in Q_p ---

struct SingleCtx<'a> {
    f: &'a [Int],
    fd: Vec<Int>,
    p: u64,
    cap: u32,
    budget: u64,
}

fn branch_single(ctx: &mut SingleCtx, c: &Int, m: u32) -> Result<bool> {
    if ctx.budget == 0 {
        return Err(Error::Unsupported(format!(
            "local solvability budget exhausted at p={}",
            ctx.p
        )));
    }
    ctx.budget -= 1;
    let val = poly_eval_int(ctx.f, c);
    if val.is_zero() {
        return Ok(true);
    }
    let v = vp_int(ctx.p, &val);
    let nd = need_digits(ctx.p);
    if m >= v + nd {
        if v % 2 == 1 {
            return Ok(false);
        }
        let modulus = if ctx.p == 2 { 8 } else { ctx.p };
        let u = unit_residue(ctx.p, v, &val, modulus);
        return Ok(unit_is_square(ctx.p, u));
    }
    let dval = poly_eval_int(&ctx.fd, c);
    if !dval.is_zero() {
        let w = vp_int(ctx.p, &dval);
        if v > 2 * w && v >= m + w {
            // a simple root of f lies in this branch: w = 0 point
            return Ok(true);
        }
    }
    if m >= ctx.cap {
        return Err(Error::Unsupported(format!(
            "local solvability depth cap {} reached at p={}",
            ctx.cap, ctx.p
        )));
    }
    let step = Int::from(ctx.p).pow(m);
    for j in 0..ctx.p {
        let child = c + &step * Int::from(j);
        if branch_single(ctx, &child, m + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn exists_square_value(f: &[Int], p: u64, start_m: u32) -> Result<bool> {
    let f = strip_square_content(f)?;
    let ft = trim_int(f.clone());
    if ft.is_empty() {
        return Ok(true); // identically zero
    }
    if ft.len() == 1 {
        return Ok(int_is_padic_square(&ft[0], p));
    }
    let fd = poly_derivative_int(&ft);
    let res = poly_resultant(&ft, &fd);
    if res.is_zero() {
        return Err(Error::Unsupported(
            "repeated factor in local solvability input".into(),
        ));
    }
    // good reduction shortcut: a smooth full-degree quartic over F_p has
    // affine points for p >= 17, and every affine point lifts
    if start_m == 0 && p >= 17 && ft.len() == 5 && fp_squarefree_full_degree(&ft, p, 4) {
        return Ok(true);
    }
    if p > PRIME_RECURSION_LIMIT {
        return Err(Error::Unsupported(format!(
            "residue recursion infeasible at p={p}"
        )));
    }
    let cap = 2 * vp_int(p, &res) + 2 * need_digits(p) + 8 + start_m;
    let mut ctx = SingleCtx {
        f: &ft,
        fd,
        p,
        cap,
        budget: EVAL_BUDGET,
    };
    branch_single(&mut ctx, &Int::zero(), start_m)
}

/// Whether w^2 = g(t) has a point over Q_p, counting the points at
/// infinity of the weighted projective model. g is given by ascending
/// coefficients of degree exactly 4.
pub fn quartic_space_solvable_qp(g: &[Int; 5], p: u64) -> Result<bool> {
    if g[4].is_zero() {
        return Err(Error::Unsupported("quartic space needs degree 4".into()));
    }
    if exists_square_value(&g[..], p, 0)? {
        return Ok(true);
    }
    let rev: Vec<Int> = g.iter().rev().cloned().collect();
    exists_square_value(&rev, p, 1)
}

/// Whether w^2 = g(t) has a real point (again with infinity).
pub fn quartic_space_solvable_real(g: &[Int; 5]) -> bool {
    if g[4].is_positive() {
        return true;
    }
    count_real_roots(&g[..]) > 0
}

// --- pairs: exists (z0 : z1) in P^1(Q_p) with both forms squares ---

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum St {
    ExactZero,
    Decided(bool),
    Undecided,
}

fn classify(p: u64, m: u32, val: &Int) -> St {
    if val.is_zero() {
        return St::ExactZero;
    }
    let v = vp_int(p, val);
    if m >= v + need_digits(p) {
        if v % 2 == 1 {
            return St::Decided(false);
        }
        let modulus = if p == 2 { 8 } else { p };
        let u = unit_residue(p, v, val, modulus);
        St::Decided(unit_is_square(p, u))
    } else {
        St::Undecided
    }
}

fn hensel_root_here(p: u64, m: u32, val: &Int, dval: &Int) -> bool {
    if val.is_zero() {
        return false;
    }
    if dval.is_zero() {
        return false;
    }
    let v = vp_int(p, val);
    let w = vp_int(p, dval);
    v > 2 * w && v >= m + w
}

struct PairCtx<'a> {
    f1: &'a [Int],
    f1d: Vec<Int>,
    f2: &'a [Int],
    f2d: Vec<Int>,
    p: u64,
    cap: u32,
    budget: u64,
}

fn branch_pair(ctx: &mut PairCtx, c: &Int, m: u32) -> Result<bool> {
    if ctx.budget == 0 {
        return Err(Error::Unsupported(format!(
            "local solvability budget exhausted at p={}",
            ctx.p
        )));
    }
    ctx.budget -= 1;
    let v1 = poly_eval_int(ctx.f1, c);
    let v2 = poly_eval_int(ctx.f2, c);
    let s1 = classify(ctx.p, m, &v1);
    let s2 = classify(ctx.p, m, &v2);
    if s1 == St::Decided(false) || s2 == St::Decided(false) {
        return Ok(false);
    }
    if s1 == St::Decided(true) && s2 == St::Decided(true) {
        return Ok(true);
    }
    if s1 == St::ExactZero && int_is_padic_square(&v2, ctx.p) {
        return Ok(true);
    }
    if s2 == St::ExactZero && int_is_padic_square(&v1, ctx.p) {
        return Ok(true);
    }
    if s2 == St::Decided(true) {
        let d1 = poly_eval_int(&ctx.f1d, c);
        if hensel_root_here(ctx.p, m, &v1, &d1) {
            // f1 vanishes (hence is square) somewhere in this branch, and
            // nearby values of f1 sweep every small square class; f2 stays
            // a decided square throughout
            return Ok(true);
        }
    }
    if s1 == St::Decided(true) {
        let d2 = poly_eval_int(&ctx.f2d, c);
        if hensel_root_here(ctx.p, m, &v2, &d2) {
            return Ok(true);
        }
    }
    if m >= ctx.cap {
        return Err(Error::Unsupported(format!(
            "local solvability depth cap {} reached at p={}",
            ctx.cap, ctx.p
        )));
    }
    let step = Int::from(ctx.p).pow(m);
    for j in 0..ctx.p {
        let child = c + &step * Int::from(j);
        if branch_pair(ctx, &child, m + 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn disc_quadratic(f: &[Int]) -> Int {
    // f = c0 + c1 t + c2 t^2
    &f[1] * &f[1] - Int::from(4) * &f[2] * &f[0]
}

/// Degenerate single-variable preprocessing: if f is a nonzero constant
/// times an exact square polynomial, membership reduces to a constant
/// square class. Returns Some(class) when f = k * h(t)^2 with the class
/// of k, or None when f is not of that shape.
fn constant_square_class(f: &[Int]) -> Option<Int> {
    let ft = trim_int(f.to_vec());
    match ft.len() {
        0 => None,
        1 => Some(ft[0].clone()),
        3 => {
            if disc_quadratic(&ft).is_zero() {
                // a (t + b/2a)^2 scaled: class of the leading coefficient
                Some(ft[2].clone())
            } else {
                None
            }
        }
        _ => None,
    }
}

fn pair_joint_zp(f1: &[Int], f2: &[Int], p: u64, start_m: u32) -> Result<bool> {
    let f1 = strip_square_content(f1)?;
    let f2 = strip_square_content(f2)?;
    let t1 = trim_int(f1.clone());
    let t2 = trim_int(f2.clone());
    if t1.is_empty() {
        return exists_square_value(&t2, p, start_m);
    }
    if t2.is_empty() {
        return exists_square_value(&t1, p, start_m);
    }
    // a form that is a constant square class everywhere either blocks the
    // pair or drops out
    if let Some(k1) = constant_square_class(&t1) {
        if t1.len() == 3 {
            // exact double root: f1 vanishes (a square) there
            let rho = Rat::new(-t1[1].clone(), Int::from(2) * &t1[2]);
            if in_chart(&rho, p, start_m) {
                let val2 = poly_eval_rat_int(&t2, &rho);
                if rat_is_padic_square(&val2, p) {
                    return Ok(true);
                }
            }
        }
        if int_is_padic_square(&k1, p) {
            return exists_square_value(&t2, p, start_m);
        }
        // f1 is square only at its exact root (handled above) or never
        return Ok(false);
    }
    if let Some(k2) = constant_square_class(&t2) {
        if t2.len() == 3 {
            let rho = Rat::new(-t2[1].clone(), Int::from(2) * &t2[2]);
            if in_chart(&rho, p, start_m) {
                let val1 = poly_eval_rat_int(&t1, &rho);
                if rat_is_padic_square(&val1, p) {
                    return Ok(true);
                }
            }
        }
        if int_is_padic_square(&k2, p) {
            return exists_square_value(&t1, p, start_m);
        }
        return Ok(false);
    }
    let res12 = poly_resultant(&t1, &t2);
    if res12.is_zero() {
        return Err(Error::Unsupported(
            "pair of forms with a common root in local solvability".into(),
        ));
    }
    let d1 = if t1.len() >= 3 {
        disc_quadratic(&t1)
    } else {
        t1.last().unwrap().clone()
    };
    let d2 = if t2.len() >= 3 {
        disc_quadratic(&t2)
    } else {
        t2.last().unwrap().clone()
    };
    if d1.is_zero() || d2.is_zero() {
        return Err(Error::Unsupported(
            "degenerate quadratic escaped preprocessing".into(),
        ));
    }
    // good reduction shortcut for the pair
    if start_m == 0
        && p >= 17
        && t1.len() == 3
        && t2.len() == 3
        && fp_squarefree_full_degree(&t1, p, 2)
        && fp_squarefree_full_degree(&t2, p, 2)
        && fp_coprime(&t1, &t2, p)
    {
        return Ok(true);
    }
    if p > PRIME_RECURSION_LIMIT {
        return Err(Error::Unsupported(format!(
            "residue recursion infeasible at p={p}"
        )));
    }
    let cap = 2 * (vp_int(p, &res12) + vp_int(p, &d1) + vp_int(p, &d2))
        + 2 * need_digits(p)
        + 8
        + start_m;
    let mut ctx = PairCtx {
        f1: &t1,
        f1d: poly_derivative_int(&t1),
        f2: &t2,
        f2d: poly_derivative_int(&t2),
        p,
        cap,
        budget: EVAL_BUDGET,
    };
    branch_pair(&mut ctx, &Int::zero(), start_m)
}

fn in_chart(rho: &Rat, p: u64, start_m: u32) -> bool {
    // start_m = 0 is all of Z_p; start_m = 1 restricts to p Z_p
    if rho.is_zero() {
        return true;
    }
    let v = vp_int(p, rho.numer()) as i64 - vp_int(p, rho.denom()) as i64;
    v >= start_m as i64
}

/// Both binary quadratic forms simultaneously squares at some point of
/// P^1(Q_p). Forms are ascending coefficient triples of f(t); the second
/// chart uses the reversed coefficients over p Z_p.
pub fn conic_pair_solvable_qp(f1: &[Int; 3], f2: &[Int; 3], p: u64) -> Result<bool> {
    if pair_joint_zp(&f1[..], &f2[..], p, 0)? {
        return Ok(true);
    }
    let r1: Vec<Int> = f1.iter().rev().cloned().collect();
    let r2: Vec<Int> = f2.iter().rev().cloned().collect();
    pair_joint_zp(&r1, &r2, p, 1)
}

fn exists_nonneg(f: &[Int]) -> bool {
    let ft = trim_int(f.to_vec());
    if ft.is_empty() {
        return true;
    }
    if ft.len() % 2 == 0 {
        // odd degree
        return true;
    }
    if ft.last().unwrap().is_positive() {
        return true;
    }
    count_real_roots(&ft) > 0
}

/// Both forms simultaneously nonnegative somewhere on P^1(R).
pub fn conic_pair_solvable_real(f1: &[Int; 3], f2: &[Int; 3]) -> Result<bool> {
    // point at infinity
    if !f1[2].is_negative() && !f2[2].is_negative() {
        return Ok(true);
    }
    let t1 = trim_int(f1.to_vec());
    let t2 = trim_int(f2.to_vec());
    if t1.is_empty() {
        return Ok(exists_nonneg(&t2));
    }
    if t2.is_empty() {
        return Ok(exists_nonneg(&t1));
    }
    // constant-square-class degenerate forms
    if let Some(k1) = constant_square_class(&t1) {
        if k1.is_positive() || (t1.len() == 1 && k1.is_zero()) {
            return Ok(exists_nonneg(&t2));
        }
        // negative class: f1 >= 0 only at its double root
        if t1.len() == 3 {
            let rho = Rat::new(-t1[1].clone(), Int::from(2) * &t1[2]);
            let v2 = crate::arith::poly_eval_rat(
                &t2.iter().map(|v| Rat::from_integer(v.clone())).collect::<Vec<_>>(),
                &rho,
            );
            return Ok(!v2.is_negative());
        }
        return Ok(false);
    }
    if let Some(k2) = constant_square_class(&t2) {
        if k2.is_positive() || (t2.len() == 1 && k2.is_zero()) {
            return Ok(exists_nonneg(&t1));
        }
        if t2.len() == 3 {
            let rho = Rat::new(-t2[1].clone(), Int::from(2) * &t2[2]);
            let v1 = crate::arith::poly_eval_rat(
                &t1.iter().map(|v| Rat::from_integer(v.clone())).collect::<Vec<_>>(),
                &rho,
            );
            return Ok(!v1.is_negative());
        }
        return Ok(false);
    }
    if poly_resultant(&t1, &t2).is_zero() {
        return Err(Error::Unsupported(
            "pair of forms with a common root in real solvability".into(),
        ));
    }
    let prod = poly_mul_int(&t1, &t2);
    let intervals = isolate_real_roots(&prod);
    let eval = |s: &Rat| -> (Rat, Rat) {
        let p1: Vec<Rat> = t1.iter().map(|v| Rat::from_integer(v.clone())).collect();
        let p2: Vec<Rat> = t2.iter().map(|v| Rat::from_integer(v.clone())).collect();
        (
            crate::arith::poly_eval_rat(&p1, s),
            crate::arith::poly_eval_rat(&p2, s),
        )
    };
    let mut samples: Vec<Rat> = Vec::new();
    if intervals.is_empty() {
        samples.push(Rat::zero());
    } else {
        samples.push(&intervals[0].0 - Rat::one());
        let prod_poly = prod.clone();
        for idx in 1..intervals.len() {
            let mut iv = intervals[idx].clone();
            let mut guard = 0;
            while poly_eval_rat_int(&prod_poly, &iv.0).is_zero() {
                iv = refine_isolation(&prod_poly, &iv);
                guard += 1;
                if guard > 64 {
                    return Err(Error::Unsupported(
                        "real sample refinement failed to separate roots".into(),
                    ));
                }
            }
            samples.push(iv.0.clone());
        }
        samples.push(&intervals.last().unwrap().1 + Rat::one());
    }
    for s in &samples {
        let (a, b) = eval(s);
        if !a.is_negative() && !b.is_negative() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn poly_eval_rat_int(c: &[Int], x: &Rat) -> Rat {
    let p: Vec<Rat> = c.iter().map(|v| Rat::from_integer(v.clone())).collect();
    crate::arith::poly_eval_rat(&p, x)
}
