//! Sparse multivariate polynomials with integer coefficients, used for the
//! defining forms of self-maps of projective N-space and for subscheme
//! forms. The gcd is a recursive primitive remainder sequence, fine for
//! the small validation-time inputs it serves.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Terms keyed by exponent vector (graded lexicographic order via BTreeMap
/// on the reversed grading key); zero coefficients never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, BigInt)>, // sorted by exponent vector, ascending lex
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> MultiPoly {
        MultiPoly { nvars, terms: vec![] }
    }

    pub fn constant(nvars: usize, c: BigInt) -> MultiPoly {
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.push((vec![0; nvars], c));
        }
        p
    }

    pub fn variable(nvars: usize, idx: usize) -> MultiPoly {
        assert!(idx < nvars);
        let mut e = vec![0u32; nvars];
        e[idx] = 1;
        MultiPoly {
            nvars,
            terms: vec![(e, BigInt::one())],
        }
    }

    pub fn from_terms(nvars: usize, raw: Vec<(Vec<u32>, BigInt)>) -> MultiPoly {
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e, c) in raw {
            assert_eq!(e.len(), nvars);
            let entry = map.entry(e).or_insert_with(BigInt::zero);
            *entry += c;
        }
        MultiPoly {
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.iter().sum()).max()
    }

    /// Degree of the given homogeneous polynomial, or `None` if the terms
    /// do not all share one total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for (e, _) in &self.terms {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut raw = self.terms.clone();
        raw.extend(other.terms.clone());
        MultiPoly::from_terms(self.nvars, raw)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                raw.push((e, c1 * c2));
            }
        }
        MultiPoly::from_terms(self.nvars, raw)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(self.nvars, BigInt::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        // power tables per variable
        let mut max_e = vec![0u32; self.nvars];
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate() {
                max_e[i] = max_e[i].max(x);
            }
        }
        let pows: Vec<Vec<BigInt>> = point
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let mut v = Vec::with_capacity(max_e[i] as usize + 1);
                v.push(BigInt::one());
                for k in 1..=max_e[i] as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    term *= &pows[i][x as usize];
                }
            }
            acc += term;
        }
        acc
    }

    /// gcd of all coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content removed; leading term (last in the term order) positive.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.terms.last().unwrap().1.is_negative() {
            g = -g;
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / &g)).collect(),
        }
    }

    /// Highest variable index that actually appears.
    fn main_var(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (e, _) in &self.terms {
            for (i, &x) in e.iter().enumerate().rev() {
                if x > 0 {
                    best = Some(best.map_or(i, |b: usize| b.max(i)));
                    break;
                }
            }
        }
        best
    }

    fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0)
    }

    /// View as a univariate polynomial in `var` with multivariate coefficients.
    fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MultiPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut e2 = e.clone();
            e2[var] = 0;
            out[k].terms.push((e2, c.clone()));
        }
        for p in out.iter_mut() {
            p.terms.sort_by(|a, b| a.0.cmp(&b.0));
        }
        out
    }

    fn from_coeffs_in(nvars: usize, var: usize, coeffs: Vec<MultiPoly>) -> MultiPoly {
        let mut raw = Vec::new();
        for (k, c) in coeffs.into_iter().enumerate() {
            for (e, a) in c.terms {
                let mut e2 = e;
                e2[var] += k as u32;
                raw.push((e2, a));
            }
        }
        MultiPoly::from_terms(nvars, raw)
    }

    /// Exact division by long division on the term order; `None` when the
    /// divisor does not divide over Z.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q_terms: Vec<(Vec<u32>, BigInt)> = Vec::new();
        let (de, dc) = d.terms.last().unwrap();
        while !rem.is_zero() {
            let (re, rc) = rem.terms.last().unwrap();
            let e: Vec<i64> = re
                .iter()
                .zip(de)
                .map(|(a, b)| *a as i64 - *b as i64)
                .collect();
            if e.iter().any(|&x| x < 0) {
                return None;
            }
            let (c, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let e: Vec<u32> = e.into_iter().map(|x| x as u32).collect();
            let mono = MultiPoly {
                nvars: self.nvars,
                terms: vec![(e.clone(), c.clone())],
            };
            rem = rem.sub(&mono.mul(d));
            q_terms.push((e, c));
        }
        Some(MultiPoly::from_terms(self.nvars, q_terms))
    }
}

/// gcd over Z by recursion on the main variable with primitive
/// pseudo-remainder sequences. Intended for the small forms that define
/// maps and subschemes, not for iterated-fiber workloads.
pub fn gcd(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    assert_eq!(f.nvars(), g.nvars());
    let n = f.nvars();
    if f.is_zero() {
        return g.primitive_part().scale(&g.content());
    }
    if g.is_zero() {
        return f.primitive_part().scale(&f.content());
    }
    if f.is_constant() || g.is_constant() {
        return MultiPoly::constant(n, f.content().gcd(&g.content()));
    }
    let var = f.main_var().unwrap().max(g.main_var().unwrap());
    let (mut a, mut b) = (f.clone(), g.clone());
    if a.degree_in(var) < b.degree_in(var) {
        std::mem::swap(&mut a, &mut b);
    }
    // recursive contents with respect to the main variable
    let cont = |p: &MultiPoly| -> MultiPoly {
        let cs = p.coeffs_in(var);
        let mut acc = MultiPoly::zero(n);
        for c in cs {
            if !c.is_zero() {
                acc = gcd(&acc, &c);
            }
        }
        acc
    };
    let ca = cont(&a);
    let cb = cont(&b);
    let c = gcd(&ca, &cb);
    let mut ap = a.div_exact(&ca).expect("content divides");
    let mut bp = b.div_exact(&cb).expect("content divides");
    loop {
        if bp.is_zero() {
            let res = c.mul(&ap);
            // net effect: sign normalization of the leading term
            return res.primitive_part().scale(&res.content());
        }
        if bp.degree_in(var) == 0 {
            // a nonzero coefficient-level remainder means coprime cores
            return c;
        }
        let r = pseudo_rem(&ap, &bp, var);
        ap = bp;
        bp = if r.is_zero() {
            r
        } else {
            r.div_exact(&cont(&r)).expect("content divides")
        };
    }
}

fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, var: usize) -> MultiPoly {
    let n = f.nvars();
    let df = f.degree_in(var);
    let dg = g.degree_in(var);
    assert!(dg >= 1 && df >= dg);
    let gc = g.coeffs_in(var);
    let lg = gc.last().unwrap().clone();
    let mut rem = f.clone();
    loop {
        if rem.is_zero() {
            return rem;
        }
        let dr = rem.degree_in(var);
        if dr < dg {
            return rem;
        }
        let rc = rem.coeffs_in(var);
        let lr = rc.last().unwrap().clone();
        // rem <- lg * rem - lr * x^(dr-dg) * g
        let shift = MultiPoly::from_coeffs_in(n, var, {
            let mut v = vec![MultiPoly::zero(n); (dr - dg) as usize + 1];
            let last = v.len() - 1;
            v[last] = lr;
            v
        });
        rem = rem.mul(&lg).sub(&shift.mul(g));
        debug_assert!(rem.is_zero() || rem.degree_in(var) < dr);
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names: Vec<String> = if self.nvars == 2 {
            vec!["s".into(), "t".into()]
        } else {
            (0..self.nvars).map(|i| format!("x{}", i)).collect()
        };
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
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
            let mag = c.abs();
            let mut vars = String::new();
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if !vars.is_empty() {
                    vars.push('*');
                }
                if x == 1 {
                    vars.push_str(&names[i]);
                } else {
                    vars.push_str(&format!("{}^{}", names[i], x));
                }
            }
            if vars.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", vars)?;
            } else {
                write!(f, "{}*{}", mag, vars)?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.cmp(&other.terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xvar(n: usize, i: usize) -> MultiPoly {
        MultiPoly::variable(n, i)
    }

    #[test]
    fn eval_homogeneous() {
        // x*y on P^2 coordinates (x0,x1,x2)
        let f = xvar(3, 0).mul(&xvar(3, 1));
        let v = f.eval(&[BigInt::from(2), BigInt::from(3), BigInt::from(5)]);
        assert_eq!(v, BigInt::from(6));
        assert_eq!(f.homogeneous_degree(), Some(2));
        let g = f.add(&xvar(3, 2)); // degree mix
        assert_eq!(g.homogeneous_degree(), None);
    }

    #[test]
    fn gcd_detects_common_factor() {
        let n = 3;
        let x = xvar(n, 0);
        let y = xvar(n, 1);
        let z = xvar(n, 2);
        // gcd(x*y, x*z) = x
        assert_eq!(gcd(&x.mul(&y), &x.mul(&z)), x);
        // gcd over three forms of the example map x*y, x*z, z^2 is 1
        let g1 = gcd(&x.mul(&y), &x.mul(&z));
        let g2 = gcd(&g1, &z.mul(&z));
        assert!(g2.is_constant());
        assert_eq!(g2.content(), BigInt::one());
    }

    #[test]
    fn gcd_with_integer_content() {
        let n = 2;
        let s = xvar(n, 0);
        let f = s.scale(&BigInt::from(6));
        let g = s.scale(&BigInt::from(4));
        let got = gcd(&f, &g);
        assert_eq!(got, s.scale(&BigInt::from(2)));
    }

    #[test]
    fn gcd_of_dense_products() {
        let n = 2;
        let s = xvar(n, 0);
        let t = xvar(n, 1);
        let common = s.mul(&s).add(&t.mul(&t)); // s^2 + t^2
        let f = common.mul(&s.add(&t));
        let g = common.mul(&s.sub(&t));
        assert_eq!(gcd(&f, &g), common);
    }

    #[test]
    fn div_exact_multivariate() {
        let n = 3;
        let x = xvar(n, 0);
        let y = xvar(n, 1);
        let f = x.mul(&y).add(&x.mul(&x)); // x(y + x)
        let q = f.div_exact(&x).unwrap();
        assert_eq!(q, y.add(&x));
        assert!(f.div_exact(&y).is_none());
    }
}
