//! Exact ramification multiplicities on P^1, the backward multiplicity
//! cocycle, its n-th-root limit, and its maximum over a finite set.
//!
//! The fiber of x = (a:b) under f^n is cut out by the binary form
//! Q_n = b*F_n - a*G_n, where (F_n, G_n) define f^n. Multiplicities are
//! read off Q_n by squarefree decomposition (gcd towers); irreducible
//! factorization is only performed when a full fiber report is asked for.
//! Conjugate roots share a multiplicity, so the maximum over rational
//! irreducible factors equals the maximum over algebraic preimages.

use crate::arith::ProjPoint;
use crate::error::{MapError, MultError};
use crate::maps::{compose_morphisms, compose_pullback, P1Morphism};
use crate::poly::BinForm;

/// Multiplicity structure of a fiber f^{-n}(x): pairwise non-proportional
/// irreducible primitive forms with multiplicities, summing (with degree
/// weights) to the fiber degree d^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberFactorization {
    pub factors: Vec<(BinForm, u32)>,
    pub total_degree: u64,
}

impl FiberFactorization {
    pub fn max_multiplicity(&self) -> u64 {
        self.factors.iter().map(|(_, m)| *m as u64).max().unwrap_or(1)
    }
}

/// Table n -> kappa_{-n}(x), the maximal multiplicity over the depth-n
/// fiber, with the n-th-root sequence whose limit the theory provides.
#[derive(Clone, Debug)]
pub struct CocycleTable {
    /// `entries[n]` = kappa_{-n}; `entries[0]` = 1.
    pub entries: Vec<u64>,
    /// `roots[n]` = kappa_{-n}^{1/n} for n >= 1; `roots[0]` = 1.
    pub roots: Vec<f64>,
}

impl CocycleTable {
    fn from_entries(entries: Vec<u64>) -> CocycleTable {
        let roots = entries
            .iter()
            .enumerate()
            .map(|(n, &k)| {
                if n == 0 {
                    1.0
                } else {
                    ((k as f64).ln() / n as f64).exp()
                }
            })
            .collect();
        CocycleTable { entries, roots }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Ramification index e_f(z) for a rational point z: the multiplicity of
/// the linear form vanishing at z in the fiber form over f(z). Always in
/// [1, deg f].
pub fn ramification_index(f: &P1Morphism, z: &ProjPoint) -> u32 {
    assert_eq!(z.dim(), 1);
    let image = f.evaluate(z);
    let q = f.pullback_point_form(&image);
    let a = &z.coords()[0];
    let b = &z.coords()[1];
    // the linear form b*s - a*t vanishes exactly at (a:b)
    let linear = BinForm::new(vec![-a.clone(), b.clone()]).primitive_part();
    let m = q.multiplicity_of(&linear);
    debug_assert!(m >= 1 && m <= f.degree());
    m
}

/// Full multiplicity structure of f^{-n}(x): squarefree decomposition of
/// the fiber form followed by irreducible factorization over the
/// rationals.
pub fn fiber_factorization(
    f: &P1Morphism,
    x: &ProjPoint,
    n: u32,
    degree_cap: u64,
) -> Result<FiberFactorization, MultError> {
    let q = fiber_form(f, x, n, degree_cap)?;
    let factors = q.factor();
    let total: u64 = factors.iter().map(|(g, m)| g.degree() as u64 * *m as u64).sum();
    debug_assert_eq!(total, (f.degree() as u64).pow(n));
    Ok(FiberFactorization {
        factors,
        total_degree: total,
    })
}

fn fiber_form(f: &P1Morphism, x: &ProjPoint, n: u32, degree_cap: u64) -> Result<BinForm, MultError> {
    assert!(n >= 1);
    assert_eq!(x.dim(), 1);
    let (fn_, gn) = compose_pullback(f, n, degree_cap).map_err(lift_cap_error)?;
    let a = &x.coords()[0];
    let b = &x.coords()[1];
    Ok(fn_.scale(b).sub(&gn.scale(a)).primitive_part())
}

fn lift_cap_error(e: MapError) -> MultError {
    match e {
        MapError::DegreeCapExceeded(d, cap) => MultError::DegreeCapExceeded(d, cap),
        other => panic!("unexpected composition failure: {other}"),
    }
}

/// kappa_{-n}(x) for n = 0..=n_max, via the squarefree tower only.
pub fn backward_cocycle(
    f: &P1Morphism,
    x: &ProjPoint,
    n_max: u32,
    degree_cap: u64,
) -> Result<CocycleTable, MultError> {
    assert!(n_max >= 1);
    let mut entries = vec![1u64];
    for n in 1..=n_max {
        let q = fiber_form(f, x, n, degree_cap)?;
        entries.push(q.max_multiplicity() as u64);
    }
    Ok(CocycleTable::from_entries(entries))
}

/// Finite-horizon bracket for e_{f,-}(x) = lim kappa_{-n}(x)^{1/n}:
/// min and max of the root sequence over the final `tail_window` entries.
pub fn e_minus_estimate(table: &CocycleTable, tail_window: usize) -> Result<(f64, f64), MultError> {
    assert!(tail_window >= 1);
    if table.len() < tail_window + 1 {
        return Err(MultError::TableTooShort(tail_window + 1, table.len()));
    }
    let tail = &table.roots[table.roots.len() - tail_window..];
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Bracket for e(f; Y) = max over y in Y of e_{f,-}(y): componentwise max
/// of the per-point brackets.
pub fn e_f_set(
    f: &P1Morphism,
    points: &[ProjPoint],
    n_max: u32,
    tail_window: usize,
    degree_cap: u64,
) -> Result<(f64, f64), MultError> {
    assert!(!points.is_empty());
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for y in points {
        let table = backward_cocycle(f, y, n_max, degree_cap)?;
        let (l, h) = e_minus_estimate(&table, tail_window)?;
        lo = lo.max(l);
        hi = hi.max(h);
    }
    Ok((lo, hi))
}

/// One sample of the multiplicity chain rule.
#[derive(Clone, Debug)]
pub struct ChainRuleSample {
    pub point: ProjPoint,
    pub composite: u32,
    pub inner: u32,
    pub outer: u32,
    pub equal: bool,
}

/// e_{g o f}(x) = e_f(x) * e_g(f(x)) at each sample point; equality holds
/// on P^1 because finite morphisms of smooth curves are flat.
pub fn chain_rule_check(
    f: &P1Morphism,
    g: &P1Morphism,
    samples: &[ProjPoint],
    degree_cap: u64,
) -> Result<Vec<ChainRuleSample>, MultError> {
    let gf = compose_morphisms(g, f, degree_cap).map_err(lift_cap_error)?;
    Ok(samples
        .iter()
        .map(|x| {
            let composite = ramification_index(&gf, x);
            let inner = ramification_index(f, x);
            let outer = ramification_index(g, &f.evaluate(x));
            ChainRuleSample {
                point: x.clone(),
                composite,
                inner,
                outer,
                equal: composite == inner * outer,
            }
        })
        .collect())
}
