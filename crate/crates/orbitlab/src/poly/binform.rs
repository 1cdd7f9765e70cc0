//! Homogeneous binary forms with integer coefficients.
//!
//! A form of degree d is stored densely: `coeffs[i]` is the coefficient of
//! s^i t^(d-i). Factor structure is read through the "core": the powers of
//! s and t split off, the rest dehomogenized to a univariate polynomial
//! with nonzero constant term and leading coefficient.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use super::factor;
use super::zpoly::{self, ZPoly};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinForm {
    coeffs: Vec<BigInt>, // length degree+1, coeffs[i] on s^i t^(d-i)
}

impl BinForm {
    pub fn new(coeffs: Vec<BigInt>) -> BinForm {
        assert!(!coeffs.is_empty(), "a form needs a degree");
        BinForm { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> BinForm {
        BinForm::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// s^a * t^b * (homogenization of `core`), total degree a + b + deg core.
    pub fn from_parts(s_mult: usize, t_mult: usize, core: &ZPoly) -> BinForm {
        assert!(!core.is_zero());
        let e = core.deg();
        let d = s_mult + t_mult + e;
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (j, c) in core.coeffs().iter().enumerate() {
            coeffs[s_mult + j] = c.clone();
        }
        BinForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &BigInt, t: &BigInt) -> BigInt {
        let d = self.degree();
        // Horner in s with running powers of t
        let mut acc = BigInt::zero();
        for i in (0..=d).rev() {
            acc = acc * s + &self.coeffs[i] * t.pow((d - i) as u32);
        }
        acc
    }

    /// (s-multiplicity, t-multiplicity, dehomogenized core).
    pub fn core(&self) -> (usize, usize, ZPoly) {
        assert!(!self.is_zero());
        let d = self.degree();
        let bot = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let top = d - self.coeffs.iter().rev().position(|c| !c.is_zero()).unwrap();
        let core = ZPoly::from_coeffs(self.coeffs[bot..=top].to_vec());
        (bot, d - top, core)
    }

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

    /// Content removed, first nonzero coefficient (lowest s-power) positive.
    pub fn primitive_part(&self) -> BinForm {
        assert!(!self.is_zero());
        let mut g = self.content();
        let lead = self.coeffs.iter().find(|c| !c.is_zero()).unwrap();
        if lead.is_negative() {
            g = -g;
        }
        BinForm {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> BinForm {
        BinForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divide every coefficient by `c`; no-op for c in {0, 1}.
    pub fn div_content(&self, c: &BigInt) -> BinForm {
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        BinForm {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    pub fn sub(&self, other: &BinForm) -> BinForm {
        assert_eq!(self.degree(), other.degree(), "degrees must match");
        BinForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &BinForm) -> BinForm {
        let mut v = vec![BigInt::zero(); self.degree() + other.degree() + 1];
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
        BinForm { coeffs: v }
    }

    pub fn pow(&self, e: u32) -> BinForm {
        let mut acc = BinForm::from_i64(&[1]);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute the pair (A, B) for (s, t). A and B must share a degree.
    pub fn compose(&self, a: &BinForm, b: &BinForm) -> BinForm {
        assert_eq!(a.degree(), b.degree());
        let d = self.degree();
        let mut a_pows = Vec::with_capacity(d + 1);
        let mut b_pows = Vec::with_capacity(d + 1);
        let one = BinForm::from_i64(&[1]);
        a_pows.push(one.clone());
        b_pows.push(one);
        for i in 1..=d {
            a_pows.push(a_pows[i - 1].mul(a));
            b_pows.push(b_pows[i - 1].mul(b));
        }
        let target = d * a.degree();
        let mut v = vec![BigInt::zero(); target + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = a_pows[i].mul(&b_pows[d - i]);
            for (k, tc) in term.coeffs.iter().enumerate() {
                v[k] += c * tc;
            }
        }
        BinForm { coeffs: v }
    }

    /// Exact division; `None` when the divisor does not divide over Z.
    pub fn div_exact(&self, d: &BinForm) -> Option<BinForm> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return None; // zero form has no degree; callers never need it
        }
        if d.degree() > self.degree() {
            return None;
        }
        let (sa, ta, qa) = self.core();
        let (sb, tb, qb) = d.core();
        if sb > sa || tb > ta {
            return None;
        }
        let core = qa.div_exact(&qb)?;
        let quotient = BinForm::from_parts(sa - sb, ta - tb, &core);
        if quotient.degree() + d.degree() != self.degree() {
            return None;
        }
        Some(quotient)
    }

    /// Multiplicity of the given form as a factor, by repeated division.
    pub fn multiplicity_of(&self, factor: &BinForm) -> u32 {
        let mut m = 0u32;
        let mut cur = self.clone();
        while let Some(next) = cur.div_exact(factor) {
            m += 1;
            if next.degree() == 0 {
                break;
            }
            cur = next;
        }
        m
    }

    /// Squarefree decomposition: pairwise coprime squarefree factors with
    /// multiplicities, covering the s and t powers as well. Factors are
    /// primitive; the product over factor^mult recovers the primitive part.
    pub fn squarefree_decomposition(&self) -> Vec<(BinForm, u32)> {
        assert!(!self.is_zero());
        let (s_mult, t_mult, core) = self.core();
        let mut out: Vec<(BinForm, u32)> = Vec::new();
        if s_mult > 0 {
            out.push((BinForm::from_i64(&[0, 1]), s_mult as u32));
        }
        if t_mult > 0 {
            out.push((BinForm::from_i64(&[1, 0]), t_mult as u32));
        }
        for (part, mult) in zpoly::squarefree_decomposition(&core) {
            let e = part.deg();
            out.push((BinForm::from_parts(0, 0, &part).with_degree_check(e), mult));
        }
        out
    }

    fn with_degree_check(self, e: usize) -> BinForm {
        debug_assert_eq!(self.degree(), e);
        self
    }

    /// Full factorization into irreducible primitive forms with
    /// multiplicities, sorted canonically.
    pub fn factor(&self) -> Vec<(BinForm, u32)> {
        assert!(!self.is_zero());
        let (s_mult, t_mult, core) = self.core();
        let mut out: Vec<(BinForm, u32)> = Vec::new();
        if s_mult > 0 {
            out.push((BinForm::from_i64(&[0, 1]), s_mult as u32));
        }
        if t_mult > 0 {
            out.push((BinForm::from_i64(&[1, 0]), t_mult as u32));
        }
        if !core.is_constant() {
            for (part, mult) in factor::factor(&core) {
                out.push((BinForm::from_parts(0, 0, &part), mult));
            }
        }
        out.sort();
        out
    }

    /// Largest multiplicity over all irreducible factors; reads the
    /// squarefree tower only, no irreducibility needed.
    pub fn max_multiplicity(&self) -> u32 {
        self.squarefree_decomposition()
            .iter()
            .map(|(_, m)| *m)
            .max()
            .unwrap_or(0)
    }

    /// The same form as a two-variable sparse polynomial.
    pub fn to_multipoly(&self) -> super::MultiPoly {
        let d = self.degree();
        let terms: Vec<(Vec<u32>, BigInt)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (vec![i as u32, (d - i) as u32], c.clone()))
            .collect();
        super::MultiPoly::from_terms(2, terms)
    }
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for i in (0..=d).rev() {
            let c = &self.coeffs[i];
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
            let mut vars = String::new();
            if i == 1 {
                vars.push('s');
            } else if i > 1 {
                vars.push_str(&format!("s^{}", i));
            }
            let tdeg = d - i;
            if tdeg >= 1 {
                if !vars.is_empty() {
                    vars.push('*');
                }
                if tdeg == 1 {
                    vars.push('t');
                } else {
                    vars.push_str(&format!("t^{}", tdeg));
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
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Resultant of two forms of the same degree d, as the determinant of the
/// 2d x 2d Sylvester matrix of the padded coefficient vectors, computed
/// exactly by Bareiss fraction-free elimination.
pub fn sylvester_resultant(f: &BinForm, g: &BinForm) -> BigInt {
    assert_eq!(f.degree(), g.degree(), "forms must share a degree");
    let d = f.degree();
    assert!(d >= 1);
    let n = 2 * d;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..d {
        for (k, c) in f.coeffs.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
        for (k, c) in g.coeffs.iter().rev().enumerate() {
            m[d + r][r + k] = c.clone();
        }
    }
    bareiss_det(m)
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division is exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}
