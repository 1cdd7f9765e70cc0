//! Exact rational and projective-point arithmetic, and the normalized
//! family of absolute values on the rationals.
//!
//! Everything that drives control flow here is exact integer arithmetic
//! (arbitrary precision); real logarithms appear only in reported values.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

use crate::error::ArithError;

/// A place of the rationals: the archimedean absolute value or a p-adic one.
///
/// For a number field `K` one would instead take `|a|_v = |N_{K_v/Q_p}(a)|_p^{1/[K:Q]}`
/// for each place `v` over `p`; only `K = Q` is implemented, where the
/// normalization is the usual `|a|_oo` and `|a|_p = p^{-v_p(a)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Infinite,
    Finite(BigUint),
}

impl Place {
    /// Finite place at `p`. Fails unless `p` passes the deterministic
    /// primality test.
    pub fn finite(p: BigUint) -> Result<Place, ArithError> {
        if is_prime(&p) {
            Ok(Place::Finite(p))
        } else {
            Err(ArithError::NotPrime(p.to_string()))
        }
    }

    pub fn finite_u64(p: u64) -> Result<Place, ArithError> {
        Place::finite(BigUint::from(p))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinite)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinite => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{}", p),
        }
    }
}

/// Deterministic Miller-Rabin over the fixed witness set
/// {2,3,5,7,11,13,17,19,23,29,31,37}; proven correct below 3.3 * 10^24,
/// which covers every place used at desk scale.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in SMALL.iter() {
        let q = BigUint::from(q);
        if *n == q {
            return true;
        }
        if (n % &q).is_zero() {
            return false;
        }
    }
    // n - 1 = d * 2^s with d odd
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in SMALL.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// p-adic valuation of a nonzero integer, by repeated division.
pub fn val_p_int(p: &BigUint, a: &BigInt) -> u64 {
    assert!(!a.is_zero(), "valuation of zero is undefined");
    let p = BigInt::from(p.clone());
    let mut v = 0u64;
    let mut cur = a.clone();
    loop {
        let (q, r) = cur.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// p-adic valuation of a nonzero rational (numerator minus denominator).
pub fn val_p(p: &BigUint, a: &BigRational) -> i64 {
    assert!(!a.is_zero());
    val_p_int(p, a.numer()) as i64 - val_p_int(p, a.denom()) as i64
}

/// Natural log of a nonzero big integer's absolute value.
///
/// Values beyond the f64 range are handled by splitting off the binary
/// exponent, so this stays accurate (relative error a few ulp) for
/// integers with thousands of bits.
pub fn ln_abs_big(a: &BigInt) -> f64 {
    assert!(!a.is_zero(), "log of zero");
    let mag = a.magnitude();
    let bits = mag.bits();
    if bits <= 53 {
        return mag.to_f64().expect("fits f64").ln();
    }
    let shift = bits - 53;
    let top = (mag >> shift).to_f64().expect("53-bit mantissa fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `|a|_v` for a nonzero rational, as a double.
pub fn abs_value(v: &Place, a: &BigRational) -> Result<f64, ArithError> {
    if a.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    match v {
        Place::Infinite => {
            let num = ln_abs_big(a.numer());
            let den = ln_abs_big(a.denom());
            Ok((num - den).exp())
        }
        Place::Finite(p) => {
            let val = val_p(p, a);
            let lp = ln_abs_big(&BigInt::from(p.clone()));
            Ok((-(val as f64) * lp).exp())
        }
    }
}

/// One entry of a log-absolute-value ledger, with its exact payload.
#[derive(Clone, Debug, PartialEq)]
pub enum LedgerEntry {
    /// `log|a|_oo`, carried as the exact rational `|a|`.
    Infinite { abs: BigRational },
    /// `log|a|_p = -val * log p`, carried as the exact valuation.
    Finite { p: BigUint, val: i64 },
}

impl LedgerEntry {
    pub fn log_value(&self) -> f64 {
        match self {
            LedgerEntry::Infinite { abs } => ln_abs_big(abs.numer()) - ln_abs_big(abs.denom()),
            LedgerEntry::Finite { p, val } => {
                -(*val as f64) * ln_abs_big(&BigInt::from(p.clone()))
            }
        }
    }
}

/// `log|a|_v` for the infinite place and every prime dividing the numerator
/// or denominator; all omitted places have log-value 0.
///
/// For `a = 1` the ledger is empty. The finite entries carry exact
/// valuations so the product formula can be checked without floats.
pub fn log_abs_ledger(a: &BigRational) -> Result<Vec<LedgerEntry>, ArithError> {
    if a.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut out = Vec::new();
    let abs = a.abs();
    if !abs.is_one() {
        out.push(LedgerEntry::Infinite { abs: abs.clone() });
    }
    let mut primes: Vec<BigUint> = Vec::new();
    for part in [a.numer(), a.denom()] {
        for (p, _) in factorize(&part.magnitude().clone()) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort();
    for p in primes {
        let val = val_p(&p, a);
        debug_assert!(val != 0);
        out.push(LedgerEntry::Finite { p, val });
    }
    Ok(out)
}

/// Exact product-formula check: `|a|_oo * prod_p p^{-val_p(a)} == 1` in Q.
pub fn ledger_sums_to_zero(a: &BigRational, ledger: &[LedgerEntry]) -> bool {
    // reconstruct |a| from the finite valuations and compare exactly
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for e in ledger {
        if let LedgerEntry::Finite { p, val } = e {
            if *val >= 0 {
                num *= p.pow(*val as u32);
            } else {
                den *= p.pow((-*val) as u32);
            }
        }
    }
    let recon = BigRational::new(BigInt::from(num), BigInt::from(den));
    recon == a.abs()
}

/// Factor a nonnegative integer into (prime, exponent) pairs, ascending.
///
/// Word-size inputs run entirely on u64 trial division; larger ones use
/// trial division then Brent's rho with deterministic parameters.
/// Factors of 1 and 0: empty list.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() || n.is_one() {
        return out;
    }
    if let Some(small) = n.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    let mut rest = n.clone();
    let push = |p: BigUint, e: u32, out: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += e;
        } else {
            out.push((p, e));
        }
    };
    for q in 2u64..100_000 {
        let qb = BigUint::from(q);
        if &qb * &qb > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &qb).is_zero() {
            rest /= &qb;
            e += 1;
        }
        if e > 0 {
            push(qb, e, &mut out);
        }
        if rest.is_one() {
            break;
        }
    }
    if !rest.is_one() {
        // cofactor is either prime or a product of primes > 10^5
        let mut stack = vec![rest];
        while let Some(m) = stack.pop() {
            if is_prime(&m) {
                push(m, 1, &mut out);
            } else {
                let d = pollard_rho(&m);
                stack.push(&m / &d);
                stack.push(d);
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut e2 = 0u32;
    while n.is_multiple_of(2) {
        n /= 2;
        e2 += 1;
    }
    if e2 > 0 {
        out.push((2, e2));
    }
    let mut q = 3u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            let mut e = 0u32;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Brent-cycle rho with a fixed, deterministic parameter schedule.
fn pollard_rho(n: &BigUint) -> BigUint {
    debug_assert!(!is_prime(n) && !n.is_even());
    let one = BigUint::one();
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && d != *n {
            return d;
        }
    }
    unreachable!("rho schedule exhausted")
}

/// A point of projective N-space over Q, stored as N+1 coprime integers
/// with the first nonzero coordinate positive. The canonical form is
/// unique, which makes exact cycle detection a hash lookup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    /// Canonical representative of the projective point with the given
    /// rational coordinates.
    pub fn normalize_rational(raw: &[BigRational]) -> Result<ProjPoint, ArithError> {
        if raw.iter().all(|c| c.is_zero()) {
            return Err(ArithError::AllZero);
        }
        // clear denominators by the lcm
        let mut l = BigInt::one();
        for c in raw {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = raw.iter().map(|c| c.numer() * (&l / c.denom())).collect();
        Self::normalize(&ints)
    }

    /// Canonical representative from integer coordinates.
    pub fn normalize(raw: &[BigInt]) -> Result<ProjPoint, ArithError> {
        if raw.iter().all(|c| c.is_zero()) {
            return Err(ArithError::AllZero);
        }
        let mut g = BigInt::zero();
        for c in raw {
            g = g.gcd(c);
        }
        let mut coords: Vec<BigInt> = raw.iter().map(|c| c / &g).collect();
        let flip = coords
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.is_negative())
            .unwrap_or(false);
        if flip {
            for c in coords.iter_mut() {
                *c = -&*c;
            }
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(raw: &[i64]) -> ProjPoint {
        let ints: Vec<BigInt> = raw.iter().map(|&c| BigInt::from(c)).collect();
        ProjPoint::normalize(&ints).expect("nonzero coordinates")
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Projective dimension N (one less than the coordinate count).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest absolute coordinate, always >= 1 for a normalized point.
    pub fn max_abs(&self) -> BigInt {
        self.coords
            .iter()
            .map(|c| c.abs())
            .max()
            .expect("nonempty coordinates")
    }

    /// Max coordinate bit length.
    pub fn bit_size(&self) -> u64 {
        self.coords.iter().map(|c| c.magnitude().bits()).max().unwrap_or(0)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

/// All points of P^1(Q) of height at most `log bound`, i.e. canonical
/// (p:q) with coprime coordinates and max(|p|,|q|) <= bound.
///
/// Enumeration walks the Farey sequence of order `bound` (mediant
/// recurrence) and fills in the other three quadrant images plus the
/// point at infinity, each point exactly once, in a fixed order.
pub fn p1_points_of_height_at_most(bound: u64) -> Vec<ProjPoint> {
    assert!(bound >= 1);
    let mut out = Vec::new();
    out.push(ProjPoint::from_i64(&[1, 0]));
    // Farey fractions a/b in [0,1] of order `bound`, ascending
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, bound);
    loop {
        // current fraction a/b
        let (ai, bi) = (a as i64, b as i64);
        if a == 0 {
            out.push(ProjPoint::from_i64(&[0, 1]));
        } else {
            out.push(ProjPoint::from_i64(&[ai, bi]));
            out.push(ProjPoint::from_i64(&[ai, -bi]));
            if a != b {
                out.push(ProjPoint::from_i64(&[bi, ai]));
                out.push(ProjPoint::from_i64(&[bi, -ai]));
            }
        }
        if a == 1 && b == 1 {
            break;
        }
        let k = (bound + b) / d;
        let (a2, b2) = (c, d);
        let (c2, d2) = (k * c - a, k * d - b);
        a = a2;
        b = b2;
        c = c2;
        d = d2;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalize_clears_denominators() {
        // (2/3, 4/3) -> (1 : 2)
        let p = ProjPoint::normalize_rational(&[rat(2, 3), rat(4, 3)]).unwrap();
        assert_eq!(p, ProjPoint::from_i64(&[1, 2]));
    }

    #[test]
    fn normalize_sign_convention() {
        // (0, -5) -> (0 : 1)
        let p = ProjPoint::normalize_rational(&[rat(0, 1), rat(-5, 1)]).unwrap();
        assert_eq!(p, ProjPoint::from_i64(&[0, 1]));
        // (6, -4, 10) -> (3 : -2 : 5)
        let q = ProjPoint::from_i64(&[6, -4, 10]);
        assert_eq!(q.coords(), ProjPoint::from_i64(&[3, -2, 5]).coords());
    }

    #[test]
    fn normalize_rejects_zero() {
        assert!(matches!(
            ProjPoint::normalize_rational(&[rat(0, 1), rat(0, 1)]),
            Err(ArithError::AllZero)
        ));
    }

    #[test]
    fn abs_value_examples() {
        // |12|_2 = 1/4 since 12 = 2^2 * 3
        let v2 = Place::finite_u64(2).unwrap();
        let x = abs_value(&v2, &rat(12, 1)).unwrap();
        assert!((x - 0.25).abs() < 1e-15);
        // |-3|_oo = 3
        let x = abs_value(&Place::Infinite, &rat(-3, 1)).unwrap();
        assert!((x - 3.0).abs() < 1e-12);
        // |7/25|_5 = 25, cross-checked by a brute-force valuation loop
        let mut val = 0i64;
        let mut num = 7i64;
        while num % 5 == 0 {
            num /= 5;
            val += 1;
        }
        let mut den = 25i64;
        while den % 5 == 0 {
            den /= 5;
            val -= 1;
        }
        assert_eq!(val, -2);
        let v5 = Place::finite_u64(5).unwrap();
        let x = abs_value(&v5, &rat(7, 25)).unwrap();
        assert!((x - 25.0).abs() < 1e-12);
    }

    #[test]
    fn abs_value_zero_is_error() {
        assert!(matches!(
            abs_value(&Place::Infinite, &rat(0, 1)),
            Err(ArithError::ZeroInput)
        ));
    }

    #[test]
    fn place_requires_prime() {
        assert!(Place::finite_u64(12).is_err());
        assert!(Place::finite_u64(2).is_ok());
        assert!(Place::finite_u64(1_000_000_007).is_ok());
    }

    #[test]
    fn ledger_examples() {
        assert!(log_abs_ledger(&rat(1, 1)).unwrap().is_empty());

        // 12 -> {oo: log 12, 2: -2 log 2, 3: -log 3}
        let l = log_abs_ledger(&rat(12, 1)).unwrap();
        assert_eq!(l.len(), 3);
        assert!(matches!(&l[0], LedgerEntry::Infinite { abs } if *abs == rat(12, 1)));
        assert!(
            matches!(&l[1], LedgerEntry::Finite { p, val } if *p == BigUint::from(2u32) && *val == 2)
        );
        assert!(
            matches!(&l[2], LedgerEntry::Finite { p, val } if *p == BigUint::from(3u32) && *val == 1)
        );

        // 7/25 -> {oo: log(7/25), 5: 2 log 5, 7: -log 7}
        let l = log_abs_ledger(&rat(7, 25)).unwrap();
        let sum: f64 = l.iter().map(|e| e.log_value()).sum();
        assert!(sum.abs() < 1e-12);
        assert!(ledger_sums_to_zero(&rat(7, 25), &l));
    }

    #[test]
    fn valuation_matches_power() {
        // |a|_p = p^{-val_p(a)} exactly
        let p = BigUint::from(3u32);
        for (n, d, expect) in [(9, 1, 2i64), (1, 27, -3), (6, 5, 1), (10, 3, -1)] {
            assert_eq!(val_p(&p, &rat(n, d)), expect);
        }
    }

    #[test]
    fn ln_abs_big_large() {
        let x = BigInt::from(2u32).pow(4096);
        let expect = 4096.0 * std::f64::consts::LN_2;
        assert!((ln_abs_big(&x) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn factorize_small() {
        let f = factorize(&BigUint::from(600u32));
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 3),
                (BigUint::from(3u32), 1),
                (BigUint::from(5u32), 2)
            ]
        );
        assert!(factorize(&BigUint::one()).is_empty());
    }

    #[test]
    fn factorize_large_semiprime() {
        // beyond the small-prime wheel, still within the u64 fast path
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        let f = factorize(&n);
        assert_eq!(f.len(), 2);
        assert_eq!(&f[0].0 * &f[1].0, n);
    }

    #[test]
    fn factorize_past_word_size_uses_rho() {
        // a semiprime above 2^64 exercises the big-integer rho path
        let mut p = BigUint::from((1u64 << 32) + 15);
        while !is_prime(&p) {
            p += 2u32;
        }
        let mut q = &p + 2u32;
        while !is_prime(&q) {
            q += 2u32;
        }
        let n = &p * &q;
        assert!(n.bits() > 64);
        let f = factorize(&n);
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn p1_enumeration_counts_and_uniqueness() {
        let pts = p1_points_of_height_at_most(10);
        let set: std::collections::HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(set.len(), pts.len(), "each point exactly once");
        // brute-force completeness over the box
        for p in -10i64..=10 {
            for q in -10i64..=10 {
                if (p, q) == (0, 0) {
                    continue;
                }
                let pt = ProjPoint::from_i64(&[p, q]);
                assert!(set.contains(&pt), "missing point {pt}");
            }
        }
        // every listed point satisfies the bound
        for pt in &pts {
            assert!(pt.max_abs() <= BigInt::from(10));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn product_formula(n in -100_000i64..100_000, d in 1i64..100_000) {
                prop_assume!(n != 0);
                let a = rat(n, d);
                let ledger = log_abs_ledger(&a).unwrap();
                prop_assert!(ledger_sums_to_zero(&a, &ledger));
                let sum: f64 = ledger.iter().map(|e| e.log_value()).sum();
                prop_assert!(sum.abs() < 1e-12);
            }

            #[test]
            fn normalize_idempotent_and_invariant(
                a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000,
                num in 1i64..50, den in 1i64..50,
            ) {
                prop_assume!(a != 0 || b != 0 || c != 0);
                let raw = [rat(a, 1), rat(b, 1), rat(c, 1)];
                let p = ProjPoint::normalize_rational(&raw).unwrap();
                // idempotent
                let again: Vec<BigRational> =
                    p.coords().iter().map(|x| BigRational::from(x.clone())).collect();
                prop_assert_eq!(ProjPoint::normalize_rational(&again).unwrap(), p.clone());
                // scaling invariance for a nonzero rational lambda
                let lam = rat(num, den);
                let scaled: Vec<BigRational> = raw.iter().map(|x| x * &lam).collect();
                prop_assert_eq!(ProjPoint::normalize_rational(&scaled).unwrap(), p);
            }
        }
    }
}
