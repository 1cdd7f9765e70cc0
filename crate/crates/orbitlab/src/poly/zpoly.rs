//! Dense univariate polynomials over the integers.
//!
//! The gcd is computed by the modular algorithm (images modulo word-size
//! primes, CRT reconstruction, trial division), which keeps the iterated
//! fiber computations flat where a primitive remainder sequence would blow
//! up coefficient sizes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients ascending, no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZPoly {
    coeffs: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> ZPoly {
        ZPoly { coeffs: vec![] }
    }

    pub fn constant(c: BigInt) -> ZPoly {
        ZPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> ZPoly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> ZPoly {
        ZPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// x^k
    pub fn monomial(k: usize) -> ZPoly {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = BigInt::one();
        ZPoly { coeffs: v }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("lc of zero polynomial")
    }

    pub fn add(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + other.coeff(i));
        }
        ZPoly::from_coeffs(v)
    }

    pub fn sub(&self, other: &ZPoly) -> ZPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - other.coeff(i));
        }
        ZPoly::from_coeffs(v)
    }

    pub fn neg(&self) -> ZPoly {
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &ZPoly) -> ZPoly {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += a * b;
            }
        }
        ZPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &BigInt) -> ZPoly {
        if c.is_zero() {
            return ZPoly::zero();
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> ZPoly {
        let mut base = self.clone();
        let mut acc = ZPoly::constant(BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self) -> ZPoly {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        ZPoly::from_coeffs(v)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content removed and leading coefficient made positive.
    pub fn primitive_part(&self) -> ZPoly {
        if self.is_zero() {
            return ZPoly::zero();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        ZPoly {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Exact division; `None` when `d` does not divide `self` over Z.
    pub fn div_exact(&self, d: &ZPoly) -> Option<ZPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(ZPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dd = d.deg();
        let qd = self.deg() - dd;
        let mut q = vec![BigInt::zero(); qd + 1];
        for k in (0..=qd).rev() {
            let top = std::mem::take(&mut rem[k + dd]);
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(d.lc());
            if !r.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate().take(dd) {
                rem[k + i] -= &c * dc;
            }
            q[k] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(ZPoly::from_coeffs(q))
    }

    fn mod_image(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&pb);
                r.to_u64().expect("reduced residue fits u64")
            })
            .collect();
        while v.last().map(|&c| c == 0).unwrap_or(false) {
            v.pop();
        }
        v
    }
}

/// gcd over Z, primitive with positive leading coefficient (times the
/// integer content gcd). Modular images with CRT; candidate accepted once
/// it stabilizes and divides both inputs.
pub fn gcd(f: &ZPoly, g: &ZPoly) -> ZPoly {
    if f.is_zero() && g.is_zero() {
        return ZPoly::zero();
    }
    if f.is_zero() {
        return g.primitive_part().scale(&g.content());
    }
    if g.is_zero() {
        return f.primitive_part().scale(&f.content());
    }
    let cf = f.content();
    let cg = g.content();
    let c = cf.gcd(&cg);
    let fp = f.primitive_part();
    let gp = g.primitive_part();
    if fp.is_constant() || gp.is_constant() {
        return ZPoly::constant(c);
    }
    let lc_gcd = fp.lc().gcd(gp.lc());
    let mut best_deg = fp.deg().min(gp.deg()) + 1;
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut last: Option<ZPoly> = None;
    for p in PrimeIter::new() {
        if (fp.lc() % BigInt::from(p)).is_zero() || (gp.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = fp.mod_image(p);
        let gm = gp.mod_image(p);
        let mut h = pgcd(&fm, &gm, p);
        if h.len() == 1 {
            return ZPoly::constant(c);
        }
        let hdeg = h.len() - 1;
        if hdeg > best_deg {
            continue; // unlucky prime
        }
        if hdeg < best_deg {
            best_deg = hdeg;
            modulus = BigInt::one();
            acc.clear();
            last = None;
        }
        // scale the monic image so the CRT target has lc = gcd of lcs
        let scale = (&lc_gcd % BigInt::from(p)).to_u64().unwrap();
        for coef in h.iter_mut() {
            *coef = mulmod(*coef, scale, p);
        }
        crt_accumulate(&mut acc, &mut modulus, &h, p);
        let cand = ZPoly::from_coeffs(acc.clone()).primitive_part();
        if last.as_ref() == Some(&cand)
            && fp.div_exact(&cand).is_some() && gp.div_exact(&cand).is_some() {
                return cand.scale(&c);
            }
        last = Some(cand);
    }
    unreachable!("prime supply exhausted")
}

/// Squarefree decomposition over Z in Yun's arrangement:
/// `f = unit * prod_i part_i^i` with each part primitive, squarefree,
/// pairwise coprime, positive leading coefficient.
/// Parts of degree zero are dropped. Input must be nonzero.
pub fn squarefree_decomposition(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    assert!(!f.is_zero());
    let f = f.primitive_part();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let g = gcd(&f, &df).primitive_part();
    if g.is_constant() {
        out.push((f, 1));
        return out;
    }
    let mut a = f.div_exact(&g).expect("gcd divides");
    let mut b = df.div_exact(&g).expect("gcd divides derivative");
    let mut i = 1u32;
    loop {
        let c = b.sub(&a.derivative());
        if c.is_zero() {
            if !a.is_constant() {
                out.push((a.primitive_part(), i));
            }
            break;
        }
        let d = gcd(&a, &c).primitive_part();
        if !d.is_constant() {
            out.push((d.clone(), i));
        }
        a = a.div_exact(&d).expect("factor divides");
        b = c.div_exact(&d).expect("factor divides");
        i += 1;
        if a.is_constant() {
            break;
        }
    }
    out
}

// ---- arithmetic modulo a word-size prime ----------------------------------

pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn ptrim(v: &mut Vec<u64>) {
    while v.last().map(|&c| c == 0).unwrap_or(false) {
        v.pop();
    }
}

/// Monic gcd over F_p; returns `[1]` for coprime inputs.
pub(crate) fn pgcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    ptrim(&mut a);
    ptrim(&mut b);
    while !b.is_empty() {
        let r = pdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        return a;
    }
    let inv = invmod(*a.last().unwrap(), p);
    for c in a.iter_mut() {
        *c = mulmod(*c, inv, p);
    }
    a
}

/// Division with remainder over F_p; divisor need not be monic.
pub(crate) fn pdivrem(f: &[u64], d: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut rem = f.to_vec();
    ptrim(&mut rem);
    let mut dv = d.to_vec();
    ptrim(&mut dv);
    assert!(!dv.is_empty(), "division by zero");
    if rem.len() < dv.len() {
        return (vec![], rem);
    }
    let dd = dv.len() - 1;
    let inv = invmod(dv[dd], p);
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0u64; qd + 1];
    for k in (0..=qd).rev() {
        let top = rem[k + dd];
        if top == 0 {
            continue;
        }
        let c = mulmod(top, inv, p);
        q[k] = c;
        for i in 0..=dd {
            let sub = mulmod(c, dv[i], p);
            let idx = k + i;
            rem[idx] = (rem[idx] + p - sub) % p;
        }
    }
    ptrim(&mut rem);
    ptrim(&mut q);
    (q, rem)
}

pub(crate) fn pmul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut v = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            v[i + j] = (v[i + j] + mulmod(a, b, p)) % p;
        }
    }
    ptrim(&mut v);
    v
}

pub(crate) fn psub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut v = vec![0u64; n];
    for i in 0..n {
        let a = f.get(i).copied().unwrap_or(0);
        let b = g.get(i).copied().unwrap_or(0);
        v[i] = (a + p - b) % p;
    }
    ptrim(&mut v);
    v
}

/// Extended Euclid over F_p: returns (s, t) with s*f + t*g = 1.
/// Inputs must be coprime.
pub(crate) fn pxgcd(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let mut r0 = f.to_vec();
    let mut r1 = g.to_vec();
    ptrim(&mut r0);
    ptrim(&mut r1);
    let mut s0: Vec<u64> = vec![1];
    let mut s1: Vec<u64> = vec![];
    let mut t0: Vec<u64> = vec![];
    let mut t1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let s2 = psub(&s0, &pmul(&q, &s1, p), p);
        let t2 = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = std::mem::take(&mut r1);
        r1 = r;
        s0 = std::mem::take(&mut s1);
        s1 = s2;
        t0 = std::mem::take(&mut t1);
        t1 = t2;
    }
    assert_eq!(r0.len(), 1, "inputs not coprime mod p");
    let inv = invmod(r0[0], p);
    let s: Vec<u64> = s0.iter().map(|&c| mulmod(c, inv, p)).collect();
    let t: Vec<u64> = t0.iter().map(|&c| mulmod(c, inv, p)).collect();
    (s, t)
}

fn crt_accumulate(acc: &mut Vec<BigInt>, modulus: &mut BigInt, img: &[u64], p: u64) {
    let pb = BigInt::from(p);
    if modulus.is_one() {
        *acc = img
            .iter()
            .map(|&c| symmetric(BigInt::from(c), &pb))
            .collect();
        *modulus = pb;
        return;
    }
    // pad both to the same length
    let n = acc.len().max(img.len());
    acc.resize(n, BigInt::zero());
    let m_inv = {
        let m_mod_p = modulus.mod_floor(&pb).to_u64().unwrap();
        invmod(m_mod_p, p)
    };
    let new_mod = &*modulus * &pb;
    for (i, a) in acc.iter_mut().enumerate() {
        let target = img.get(i).copied().unwrap_or(0);
        let a_mod_p = a.mod_floor(&pb).to_u64().unwrap();
        let delta = mulmod((target + p - a_mod_p) % p, m_inv, p);
        let lifted = &*a + &*modulus * BigInt::from(delta);
        *a = symmetric(lifted, &new_mod);
    }
    *modulus = new_mod;
}

fn symmetric(x: BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

pub(crate) fn symmetric_big(x: &BigInt, m: &BigInt) -> BigInt {
    symmetric(x.clone(), m)
}

/// Deterministic supply of word-size primes, descending from 2^62.
pub(crate) struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    pub fn new() -> PrimeIter {
        PrimeIter { next: (1u64 << 62) - 1 }
    }
}

impl Iterator for PrimeIter {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        loop {
            let c = self.next;
            self.next -= 2;
            if is_prime_u64(c) {
                return Some(c);
            }
        }
    }
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}
