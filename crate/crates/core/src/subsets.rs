//! Finite subsets of the nonnegative integers up to equivalence.
//!
//! Two subsets are equivalent when one is carried to the other by a
//! translation, a positive rational scaling, or the reflection
//! i -> min + max - i. Every class of size >= 2 contains exactly one
//! primitive representative: it starts at 0, has element gcd 1, and its
//! binary encoding sum(2^i) is no larger than that of its mirror image.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::arith::Int;
use crate::{Error, Result};

/// Strictly increasing, non-empty list of nonnegative positions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset(Vec<u64>);

impl Subset {
    pub fn new(mut elements: Vec<u64>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidSubset("empty".into()));
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(Subset(elements))
    }

    pub fn elements(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn min(&self) -> u64 {
        self.0[0]
    }

    pub fn max(&self) -> u64 {
        *self.0.last().unwrap()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// The mirror image {min + max - i : i in self}.
    pub fn symmetrize(&self) -> Subset {
        let s = self.min() + self.max();
        let mut v: Vec<u64> = self.0.iter().rev().map(|&i| s - i).collect();
        v.dedup();
        Subset(v)
    }

    pub fn is_symmetric(&self) -> bool {
        let s = self.min() + self.max();
        self.0.iter().zip(self.0.iter().rev()).all(|(&a, &b)| a + b == s)
    }

    /// sum of 2^i over the elements.
    pub fn encode(&self) -> Int {
        let mut n = Int::zero();
        for &i in &self.0 {
            n.set_bit(i, true);
        }
        n
    }

    pub fn decode(n: &Int) -> Result<Subset> {
        if n <= &Int::zero() {
            return Err(Error::InvalidSubset(format!(
                "encoding must be positive, got {n}"
            )));
        }
        let mut v = Vec::new();
        for i in 0..=n.bits() {
            if n.bit(i) {
                v.push(i);
            }
        }
        Subset::new(v)
    }

    fn translated_to_zero(&self) -> Subset {
        let m = self.min();
        Subset(self.0.iter().map(|&i| i - m).collect())
    }

    fn divided_by_gcd(&self) -> Subset {
        let mut g = 0u64;
        for &i in &self.0 {
            g = gcd_u64(g, i);
        }
        if g <= 1 {
            return self.clone();
        }
        Subset(self.0.iter().map(|&i| i / g).collect())
    }

    /// The unique primitive representative of the equivalence class.
    pub fn canonical_primitive(&self) -> CanonicalClass {
        let base = self.translated_to_zero().divided_by_gcd();
        let mirror = base.symmetrize();
        if encoding_le(&base, &mirror) {
            CanonicalClass(base)
        } else {
            CanonicalClass(mirror)
        }
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Compare sum(2^i) without building big integers: descending lexicographic.
fn encoding_le(a: &Subset, b: &Subset) -> bool {
    let mut ia = a.0.iter().rev();
    let mut ib = b.0.iter().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, _) => return true,
            (Some(_), None) => return false,
            (Some(x), Some(y)) if x == y => continue,
            (Some(x), Some(y)) => return x < y,
        }
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Subset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: std::result::Result<Vec<u64>, _> =
            s.split(',').map(|t| t.trim().parse::<u64>()).collect();
        match v {
            Ok(v) => Subset::new(v),
            Err(e) => Err(Error::Parse(format!("subset {s:?}: {e}"))),
        }
    }
}

/// A primitive representative produced by `canonical_primitive`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalClass(Subset);

impl CanonicalClass {
    pub fn rep(&self) -> &Subset {
        &self.0
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.is_symmetric()
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Iterate k-combinations of 0..n in lexicographic order.
pub struct Combinations {
    n: u64,
    state: Vec<u64>,
    done: bool,
}

pub fn combinations(n: u64, k: usize) -> Combinations {
    let done = (k as u64) > n || k == 0;
    Combinations {
        n,
        state: (0..k as u64).collect(),
        done,
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.state.clone();
        let k = self.state.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.state[i] < self.n - (k - i) as u64 {
                self.state[i] += 1;
                for j in i + 1..k {
                    self.state[j] = self.state[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Distinct equivalence classes among the k-subsets of {0, ..., n-1}.
///
/// Canonical representatives of subsets of {0..n-1} stay within {0..n-1},
/// so for n <= 64 the dedup key is a single machine word.
pub fn enumerate_classes(n: u64, k: usize, symmetric_only: bool) -> Result<Vec<CanonicalClass>> {
    if k < 2 || (k as u64) > n {
        return Err(Error::InvalidSubset(format!(
            "need 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    let mut out = Vec::new();
    if n <= 64 {
        let mut seen = std::collections::HashSet::with_capacity(1 << 17);
        for combo in combinations(n, k) {
            let class = Subset(combo).canonical_primitive();
            if symmetric_only && !class.is_symmetric() {
                continue;
            }
            let mut key = 0u64;
            for &i in class.rep().elements() {
                key |= 1 << i;
            }
            if seen.insert(key) {
                out.push(class);
            }
        }
    } else {
        let mut seen = std::collections::HashSet::new();
        for combo in combinations(n, k) {
            let class = Subset(combo).canonical_primitive();
            if symmetric_only && !class.is_symmetric() {
                continue;
            }
            if seen.insert(class.rep().clone()) {
                out.push(class);
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn count_subsets(n: u64, k: usize) -> Int {
    let mut num = Int::one();
    let mut den = Int::one();
    for i in 0..k as u64 {
        num *= Int::from(n - i);
        den *= Int::from(i + 1);
    }
    num / den
}

/// Four-element subsets {n0 < n1 < n2 < n3} of {0, ..., nmax} with
/// n0 + n3 = n1 + n2, counted by direct enumeration.
pub fn count_symmetric_4subsets(nmax: u64) -> u64 {
    let mut count = 0u64;
    for n0 in 0..=nmax {
        for n1 in n0 + 1..=nmax {
            for n2 in n1 + 1..=nmax {
                let n3 = n1 + n2 - n0;
                if n3 > n2 && n3 <= nmax {
                    count += 1;
                }
            }
        }
    }
    count
}
