//! Irreducible factorization over the rationals.
//!
//! Classical Zassenhaus route: Berlekamp factorization modulo a small
//! prime chosen to minimize the modular factor count, quadratic Hensel
//! lifting past the coefficient bound, then subset recombination with
//! exact trial division. Everything is deterministic: fixed prime order,
//! fixed elimination pivoting, fixed subset order, canonical sorting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::zpoly::{
    self, invmod, mulmod, pdivrem, pgcd, pmul, pxgcd, symmetric_big, ZPoly,
};

/// Irreducible factors (primitive, positive leading coefficient, sorted)
/// of a primitive squarefree polynomial of degree >= 1.
pub fn factor_squarefree(f: &ZPoly) -> Vec<ZPoly> {
    let f = f.primitive_part();
    assert!(f.degree().map(|d| d >= 1).unwrap_or(false));
    if f.deg() == 1 {
        return vec![f];
    }
    let (p, modular) = best_modular_factorization(&f);
    if modular.len() == 1 {
        return vec![f];
    }
    // lift past twice the factor coefficient bound
    let bound = factor_coeff_bound(&f);
    let mut pk = BigInt::from(p);
    let target = &bound * 2 + 1;
    while pk < target {
        pk *= BigInt::from(p);
    }
    let fvec = canonical_mod(f.coeffs(), &pk);
    let lifted = lift_group(&fvec, &modular, p, &pk);
    recombine(f, lifted, &pk)
}

/// Try the first few usable primes and keep the factorization with the
/// fewest modular factors (fewest subsets to recombine). A squarefree
/// integer polynomial has nonzero discriminant, so only finitely many
/// primes are unusable and the ascending scan always finds one.
fn best_modular_factorization(f: &ZPoly) -> (u64, Vec<Vec<u64>>) {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut candidate = 2u64;
    loop {
        let p = candidate;
        candidate = next_prime_after(candidate);
        if (f.lc() % BigInt::from(p)).is_zero() {
            continue;
        }
        let fm = mod_image(f, p);
        if fm.len() != f.deg() + 1 {
            continue;
        }
        let dfm = pderiv(&fm, p);
        if pgcd(&fm, &dfm, p).len() != 1 {
            continue; // not squarefree mod p
        }
        let monic = make_monic(&fm, p);
        let facs = berlekamp(&monic, p);
        let better = match &best {
            None => true,
            Some((_, b)) => facs.len() < b.len(),
        };
        if better {
            let count = facs.len();
            best = Some((p, facs));
            if count == 1 {
                break;
            }
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    best.expect("ascending prime scan found a usable prime")
}

fn next_prime_after(p: u64) -> u64 {
    let mut c = if p <= 2 { 3 } else { p + 2 };
    while !zpoly::is_prime_u64(c) {
        c += 2;
    }
    c
}

fn mod_image(f: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut v: Vec<u64> = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    while v.last().map(|&c| c == 0).unwrap_or(false) {
        v.pop();
    }
    v
}

fn pderiv(f: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| mulmod(c, (i as u64) % p, p))
        .collect();
    while v.last().map(|&c| c == 0).unwrap_or(false) {
        v.pop();
    }
    v
}

fn make_monic(f: &[u64], p: u64) -> Vec<u64> {
    let inv = invmod(*f.last().unwrap(), p);
    f.iter().map(|&c| mulmod(c, inv, p)).collect()
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == 1 {
        return vec![f.to_vec()];
    }
    // rows of Q: x^{ip} mod f
    let xp = ppowmod_x(p, f, p);
    let mut row = vec![1u64]; // x^0
    let mut q_rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            row = pdivrem(&pmul(&row, &xp, p), f, p).1;
        }
        let mut padded = row.clone();
        padded.resize(n, 0);
        q_rows.push(padded);
    }
    // kernel of (Q - I)^T
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut v = q_rows[j][i]; // transpose
            if i == j {
                v = (v + p - 1) % p;
            }
            m[i][j] = v;
        }
    }
    let kernel = nullspace(&mut m, p);
    let r = kernel.len();
    if r == 1 {
        return vec![f.to_vec()];
    }
    let mut factors: Vec<Vec<u64>> = vec![f.to_vec()];
    for v in kernel.iter() {
        if factors.len() == r {
            break;
        }
        let mut vpoly = v.clone();
        while vpoly.last().map(|&c| c == 0).unwrap_or(false) {
            vpoly.pop();
        }
        if vpoly.len() <= 1 {
            continue; // the constants split nothing
        }
        let mut next: Vec<Vec<u64>> = Vec::new();
        for u in factors.into_iter() {
            if u.len() <= 2 {
                next.push(u);
                continue;
            }
            let mut pieces = vec![u];
            for c in 0..p {
                if pieces.iter().all(|w| w.len() <= 2) {
                    break;
                }
                let mut shifted = vpoly.clone();
                shifted[0] = (shifted[0] + p - c) % p;
                let mut refined = Vec::new();
                for w in pieces.into_iter() {
                    if w.len() <= 2 {
                        refined.push(w);
                        continue;
                    }
                    let g = pgcd(&w, &shifted, p);
                    if g.len() > 1 && g.len() < w.len() {
                        let (quot, rem) = pdivrem(&w, &g, p);
                        debug_assert!(rem.is_empty());
                        refined.push(g);
                        refined.push(make_monic(&quot, p));
                    } else {
                        refined.push(w);
                    }
                }
                pieces = refined;
            }
            next.extend(pieces);
        }
        factors = next;
    }
    factors.sort();
    factors
}

/// x^e mod f over F_p by repeated squaring.
fn ppowmod_x(e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut base = pdivrem(&[0, 1], f, p).1;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = pdivrem(&pmul(&acc, &base, p), f, p).1;
        }
        e >>= 1;
        if e > 0 {
            base = pdivrem(&pmul(&base, &base, p), f, p).1;
        }
    }
    acc
}

/// Kernel basis of a square matrix over F_p (destroys the input).
fn nullspace(m: &mut [Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0;
    for col in 0..n {
        let mut piv = None;
        for row in rank..n {
            if m[row][col] != 0 {
                piv = Some(row);
                break;
            }
        }
        let Some(piv) = piv else { continue };
        m.swap(rank, piv);
        let inv = invmod(m[rank][col], p);
        for j in 0..n {
            m[rank][j] = mulmod(m[rank][j], inv, p);
        }
        for row in 0..n {
            if row != rank && m[row][col] != 0 {
                let factor = m[row][col];
                for j in 0..n {
                    let sub = mulmod(factor, m[rank][j], p);
                    m[row][j] = (m[row][j] + p - sub) % p;
                }
            }
        }
        pivot_col_of_row[rank] = Some(col);
        rank += 1;
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row.iter().flatten().copied().collect();
    let mut basis = Vec::new();
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            let coef = m[row][free];
            if coef != 0 {
                v[pc] = (p - coef) % p;
            }
        }
        basis.push(v);
    }
    basis
}

/// Bound on the absolute coefficients of `lc(f) * g` for any monic-scaled
/// integer factor g of f: `2^deg(f) * ||f||_2 * |lc(f)|` is safe.
fn factor_coeff_bound(f: &ZPoly) -> BigInt {
    let mut norm2 = BigInt::zero();
    for c in f.coeffs() {
        norm2 += c * c;
    }
    let sq = norm2.sqrt() + 1;
    (BigInt::one() << f.deg()) * sq * f.lc().abs()
}

fn canonical_mod(coeffs: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    coeffs.iter().map(|c| c.mod_floor(m)).collect()
}

// ---- polynomial arithmetic modulo a big integer ---------------------------

fn mm_trim(v: &mut Vec<BigInt>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn mm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    for c in v.iter_mut() {
        *c = c.mod_floor(m);
    }
    mm_trim(&mut v);
    v
}

fn mm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        v[i] = (x - y).mod_floor(m);
    }
    mm_trim(&mut v);
    v
}

fn mm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let mut v = vec![BigInt::zero(); n];
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigInt::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigInt::zero);
        v[i] = (x + y).mod_floor(m);
    }
    mm_trim(&mut v);
    v
}

/// Division with remainder by a monic divisor, coefficients mod m.
fn mm_divrem_monic(f: &[BigInt], d: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    debug_assert!(d.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = f.to_vec();
    mm_trim(&mut rem);
    if rem.len() < d.len() {
        return (vec![], rem);
    }
    let dd = d.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![BigInt::zero(); qd + 1];
    for k in (0..=qd).rev() {
        let top = rem[k + dd].clone();
        if top.is_zero() {
            continue;
        }
        for i in 0..dd {
            rem[k + i] = (&rem[k + i] - &top * &d[i]).mod_floor(m);
        }
        rem[k + dd] = BigInt::zero();
        q[k] = top;
    }
    mm_trim(&mut rem);
    mm_trim(&mut q);
    (q, rem)
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "value not invertible modulo lift modulus");
    e.x.mod_floor(m)
}

/// One quadratic Hensel step: from f = g*h and s*g + t*h = 1 (mod m)
/// to the same relations mod m^2 (capped at `cap`). h stays monic.
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    m: &BigInt,
    cap: &BigInt,
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
) -> (BigInt, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let mut m2 = m * m;
    if m2 > *cap {
        m2 = cap.clone();
    }
    let e = mm_sub(f, &mm_mul(g, h, &m2), &m2);
    let (q, r) = mm_divrem_monic(&mm_mul(s, &e, &m2), h, &m2);
    let g1 = mm_add(&mm_add(g, &mm_mul(t, &e, &m2), &m2), &mm_mul(&q, g, &m2), &m2);
    let h1 = mm_add(h, &r, &m2);
    let one = vec![BigInt::one()];
    let b = mm_sub(&mm_add(&mm_mul(s, &g1, &m2), &mm_mul(t, &h1, &m2), &m2), &one, &m2);
    let (c, d) = mm_divrem_monic(&mm_mul(s, &b, &m2), &h1, &m2);
    let s1 = mm_sub(s, &d, &m2);
    let t1 = mm_sub(&mm_sub(t, &mm_mul(t, &b, &m2), &m2), &mm_mul(&c, &g1, &m2), &m2);
    (m2, g1, h1, s1, t1)
}

/// Lift the modular factorization of a group to mod `pk`.
/// `fvec` is congruent to lc * prod(facs) mod pk; returns monic lifts.
fn lift_group(fvec: &[BigInt], facs: &[Vec<u64>], p: u64, pk: &BigInt) -> Vec<Vec<BigInt>> {
    if facs.len() == 1 {
        let lc = fvec.last().expect("nonzero group polynomial");
        let inv = modinv_big(lc, pk);
        let mut monic: Vec<BigInt> = fvec.iter().map(|c| (c * &inv).mod_floor(pk)).collect();
        mm_trim(&mut monic);
        return vec![monic];
    }
    let (left, right) = facs.split_at(facs.len() / 2);
    let pb = BigInt::from(p);
    // images mod p
    let f_mod_p: Vec<u64> = {
        let mut v: Vec<u64> = fvec
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        while v.last().map(|&c| c == 0).unwrap_or(false) {
            v.pop();
        }
        v
    };
    let mut h0 = vec![1u64];
    for fac in right {
        h0 = pmul(&h0, fac, p);
    }
    let mut prod_left = vec![1u64];
    for fac in left {
        prod_left = pmul(&prod_left, fac, p);
    }
    let lc_p = *f_mod_p.last().unwrap();
    let g0: Vec<u64> = prod_left.iter().map(|&c| mulmod(c, lc_p, p)).collect();
    let (mut s0, mut t0) = pxgcd(&g0, &h0, p);
    // normalize deg s < deg h (keeps the Hensel invariants)
    if s0.len() >= h0.len() {
        let (q, s_red) = pdivrem(&s0, &h0, p);
        s0 = s_red;
        t0 = {
            let qg = pmul(&q, &g0, p);
            let mut v = t0.clone();
            let n = v.len().max(qg.len());
            v.resize(n, 0);
            for i in 0..n {
                v[i] = (v[i] + qg.get(i).copied().unwrap_or(0)) % p;
            }
            while v.last().map(|&c| c == 0).unwrap_or(false) {
                v.pop();
            }
            v
        };
    }
    let to_big = |v: &[u64]| -> Vec<BigInt> { v.iter().map(|&c| BigInt::from(c)).collect() };
    let mut m = pb.clone();
    let mut g = to_big(&g0);
    let mut h = to_big(&h0);
    let mut s = to_big(&s0);
    let mut t = to_big(&t0);
    while m < *pk {
        let (m2, g1, h1, s1, t1) = hensel_step(&m, pk, fvec, &g, &h, &s, &t);
        m = m2;
        g = g1;
        h = h1;
        s = s1;
        t = t1;
    }
    debug_assert_eq!(mm_sub(fvec, &mm_mul(&g, &h, pk), pk), Vec::<BigInt>::new());
    let mut out = lift_group(&g, left, p, pk);
    out.extend(lift_group(&h, right, p, pk));
    out
}

/// Subset recombination with trial division over Z.
fn recombine(f: ZPoly, lifted: Vec<Vec<BigInt>>, pk: &BigInt) -> Vec<ZPoly> {
    let mut out: Vec<ZPoly> = Vec::new();
    let mut active = lifted;
    let mut f_rem = f;
    let mut size = 1usize;
    'outer: while 2 * size <= active.len() {
        let idxs: Vec<usize> = (0..active.len()).collect();
        for combo in combinations(&idxs, size) {
            let mut prod: Vec<BigInt> = vec![f_rem.lc().mod_floor(pk)];
            for &i in &combo {
                prod = mm_mul(&prod, &active[i], pk);
            }
            let cand = ZPoly::from_coeffs(prod.iter().map(|c| symmetric_big(c, pk)).collect())
                .primitive_part();
            if cand.degree().map(|d| d >= 1).unwrap_or(false) {
                if let Some(q) = f_rem.div_exact(&cand) {
                    out.push(cand);
                    f_rem = q.primitive_part();
                    let removed: std::collections::HashSet<usize> = combo.into_iter().collect();
                    active = active
                        .into_iter()
                        .enumerate()
                        .filter(|(i, _)| !removed.contains(i))
                        .map(|(_, v)| v)
                        .collect();
                    continue 'outer;
                }
            }
        }
        size += 1;
    }
    if f_rem.degree().map(|d| d >= 1).unwrap_or(false) {
        out.push(f_rem);
    }
    out.sort();
    out
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Full factorization of a nonzero polynomial: squarefree decomposition,
/// then irreducible splitting of each part. Returns (factor, multiplicity)
/// pairs, factors primitive with positive leading coefficient, sorted.
pub fn factor(f: &ZPoly) -> Vec<(ZPoly, u32)> {
    assert!(!f.is_zero());
    let mut out: Vec<(ZPoly, u32)> = Vec::new();
    for (part, mult) in zpoly::squarefree_decomposition(f) {
        for irr in factor_squarefree(&part) {
            if let Some(e) = out.iter_mut().find(|(g, _)| *g == irr) {
                e.1 += mult;
            } else {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    out
}
