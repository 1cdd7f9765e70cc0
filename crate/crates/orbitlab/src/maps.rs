//! Rational self-maps of projective space, certified morphisms of the
//! projective line, product maps on (P^1)^d, and orbit iteration.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;

use crate::arith::ProjPoint;
use crate::error::{IndeterminacyHit, MapError};
use crate::heights::weil_height;
use crate::poly::{multipoly, sylvester_resultant, BinForm, MultiPoly};

/// A dominant rational self-map of P^N: N+1 homogeneous integer forms of a
/// common degree with no common polynomial factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSelfMap {
    forms: Vec<MultiPoly>,
    dim: usize,
    degree: u32,
}

impl RationalSelfMap {
    pub fn new(forms: Vec<MultiPoly>) -> Result<RationalSelfMap, MapError> {
        if forms.is_empty() {
            return Err(MapError::FormsInvalid("no forms".into()));
        }
        let nvars = forms[0].nvars();
        if forms.len() != nvars {
            return Err(MapError::FormsInvalid(format!(
                "{} forms over {} variables; a self-map needs one per coordinate",
                forms.len(),
                nvars
            )));
        }
        if forms.iter().all(|f| f.is_zero()) {
            return Err(MapError::FormsInvalid("all forms zero".into()));
        }
        let mut degree = None;
        for f in &forms {
            if f.is_zero() {
                continue;
            }
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| MapError::FormsInvalid(format!("{} is not homogeneous", f)))?;
            match degree {
                None => degree = Some(d),
                Some(existing) if existing != d => {
                    return Err(MapError::FormsInvalid("forms of mixed degrees".into()))
                }
                _ => {}
            }
        }
        let degree = degree.unwrap();
        if degree == 0 {
            return Err(MapError::FormsInvalid("constant forms".into()));
        }
        // no common polynomial factor
        let mut g = MultiPoly::zero(nvars);
        for f in &forms {
            g = multipoly::gcd(&g, f);
        }
        if !(g.is_constant() && g.content().is_one()) {
            return Err(MapError::FormsInvalid(format!("common factor {}", g)));
        }
        Ok(RationalSelfMap {
            forms,
            dim: nvars - 1,
            degree,
        })
    }

    pub fn forms(&self) -> &[MultiPoly] {
        &self.forms
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Evaluate with indeterminacy detection: the hit is a signal, raised
    /// exactly when every defining form vanishes at the point.
    pub fn evaluate(&self, x: &ProjPoint) -> Result<ProjPoint, IndeterminacyHit> {
        assert_eq!(x.dim(), self.dim, "dimension mismatch");
        let values: Vec<BigInt> = self.forms.iter().map(|f| f.eval(x.coords())).collect();
        if values.iter().all(|v| v.is_zero()) {
            return Err(IndeterminacyHit);
        }
        Ok(ProjPoint::normalize(&values).expect("some coordinate nonzero"))
    }

    /// log of the coefficient bound: evaluating on coprime coordinates
    /// multiplies the max coordinate by at most (sum |coeffs|) * #terms,
    /// so heights obey h(f(x)) <= deg * h(x) + log C_f.
    pub fn height_growth_constant(&self) -> f64 {
        let mut best: f64 = 1.0;
        for f in &self.forms {
            let mut sum = BigInt::zero();
            for (_, c) in f.terms() {
                sum += c.abs();
            }
            let c_f = crate::arith::ln_abs_big(&sum).exp() * f.terms().len() as f64;
            best = best.max(c_f);
        }
        best.ln()
    }
}

impl fmt::Display for RationalSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// A morphism of P^1 given by a pair of degree-d binary forms with nonzero
/// resultant. The resultant certificate rules out indeterminacy, so
/// evaluation is total and every fiber is finite of degree d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P1Morphism {
    f: BinForm,
    g: BinForm,
    degree: u32,
    resultant: BigInt,
}

/// Certify a pair of equal-degree binary forms as a morphism of P^1 via
/// the exact Sylvester determinant.
pub fn certify_p1_morphism(f: BinForm, g: BinForm) -> Result<P1Morphism, MapError> {
    if f.degree() != g.degree() {
        return Err(MapError::FormsInvalid("forms of different degrees".into()));
    }
    if f.degree() == 0 {
        return Err(MapError::FormsInvalid("constant forms".into()));
    }
    // joint content clearing; projectively the same map
    let content = joint_content(&f, &g);
    let f = f.div_content(&content);
    let g = g.div_content(&content);
    let resultant = sylvester_resultant(&f, &g);
    if resultant.is_zero() {
        return Err(MapError::CommonRoot);
    }
    let degree = f.degree() as u32;
    Ok(P1Morphism {
        f,
        g,
        degree,
        resultant,
    })
}

fn joint_content(f: &BinForm, g: &BinForm) -> BigInt {
    let mut content = f.content();
    for c in g.coeffs() {
        content = num_integer::Integer::gcd(&content, c);
    }
    content
}

impl P1Morphism {
    pub fn numerator(&self) -> &BinForm {
        &self.f
    }

    pub fn denominator(&self) -> &BinForm {
        &self.g
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn resultant(&self) -> &BigInt {
        &self.resultant
    }

    /// Total evaluation: the certificate guarantees some form is nonzero.
    pub fn evaluate(&self, x: &ProjPoint) -> ProjPoint {
        assert_eq!(x.dim(), 1);
        let s = &x.coords()[0];
        let t = &x.coords()[1];
        let a = self.f.eval(s, t);
        let b = self.g.eval(s, t);
        ProjPoint::normalize(&[a, b]).expect("resultant certificate")
    }

    /// The form b*F - a*G of degree d cutting out the fiber over (a:b);
    /// content-cleared. This is the pullback of the point (a:b).
    pub fn pullback_point_form(&self, y: &ProjPoint) -> BinForm {
        assert_eq!(y.dim(), 1);
        let a = &y.coords()[0];
        let b = &y.coords()[1];
        let q = self.f.scale(b).sub(&self.g.scale(a));
        q.primitive_part()
    }

    /// As a rational self-map of P^1 (always valid: nonzero resultant
    /// implies no common factor).
    pub fn as_rational_map(&self) -> RationalSelfMap {
        RationalSelfMap::new(vec![self.f.to_multipoly(), self.g.to_multipoly()])
            .expect("certified morphism is a valid self-map")
    }
}

impl fmt::Display for P1Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.f, self.g)
    }
}

/// The n-fold self-composition of a certified morphism, as the pair of
/// defining forms of f^n. Integer content is divided out after every
/// substitution step; without that the coefficients blow up
/// super-exponentially.
pub fn compose_pullback(
    f: &P1Morphism,
    n: u32,
    degree_cap: u64,
) -> Result<(BinForm, BinForm), MapError> {
    assert!(n >= 1);
    let mut total: u64 = 1;
    for _ in 0..n {
        total = total.saturating_mul(f.degree as u64);
        if total > degree_cap {
            return Err(MapError::DegreeCapExceeded(total, degree_cap));
        }
    }
    let mut cur_f = f.f.clone();
    let mut cur_g = f.g.clone();
    for _ in 1..n {
        let next_f = f.f.compose(&cur_f, &cur_g);
        let next_g = f.g.compose(&cur_f, &cur_g);
        let content = joint_content(&next_f, &next_g);
        cur_f = next_f.div_content(&content);
        cur_g = next_g.div_content(&content);
    }
    Ok((cur_f, cur_g))
}

/// f^n as a certified morphism.
pub fn iterate_morphism(f: &P1Morphism, n: u32, degree_cap: u64) -> Result<P1Morphism, MapError> {
    let (ff, gg) = compose_pullback(f, n, degree_cap)?;
    certify_p1_morphism(ff, gg)
}

/// The composite `outer . inner` as a certified morphism.
pub fn compose_morphisms(
    outer: &P1Morphism,
    inner: &P1Morphism,
    degree_cap: u64,
) -> Result<P1Morphism, MapError> {
    let total = outer.degree as u64 * inner.degree as u64;
    if total > degree_cap {
        return Err(MapError::DegreeCapExceeded(total, degree_cap));
    }
    let f = outer.f.compose(&inner.f, &inner.g);
    let g = outer.g.compose(&inner.f, &inner.g);
    certify_p1_morphism(f, g)
}

/// A product of morphisms of P^1 acting on (P^1)^d coordinatewise.
/// Factor degrees must be sorted nonincreasing.
#[derive(Clone, Debug)]
pub struct ProductMap {
    factors: Vec<P1Morphism>,
}

impl ProductMap {
    pub fn new(factors: Vec<P1Morphism>) -> Result<ProductMap, MapError> {
        if factors.is_empty() {
            return Err(MapError::FormsInvalid("empty product".into()));
        }
        let degs: Vec<u32> = factors.iter().map(|f| f.degree()).collect();
        if degs.windows(2).any(|w| w[0] < w[1]) {
            return Err(MapError::UnsortedInput);
        }
        Ok(ProductMap { factors })
    }

    pub fn factors(&self) -> &[P1Morphism] {
        &self.factors
    }

    pub fn evaluate(&self, x: &[ProjPoint]) -> Vec<ProjPoint> {
        assert_eq!(x.len(), self.factors.len());
        self.factors
            .iter()
            .zip(x)
            .map(|(f, xi)| f.evaluate(xi))
            .collect()
    }
}

/// A point of the phase space: P^N or a product of projective lines.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrbitPoint {
    Single(ProjPoint),
    Tuple(Vec<ProjPoint>),
}

impl OrbitPoint {
    pub fn height(&self) -> f64 {
        match self {
            OrbitPoint::Single(p) => weil_height(p),
            OrbitPoint::Tuple(ps) => ps.iter().map(weil_height).sum(),
        }
    }

    pub fn bit_size(&self) -> u64 {
        match self {
            OrbitPoint::Single(p) => p.bit_size(),
            OrbitPoint::Tuple(ps) => ps.iter().map(|p| p.bit_size()).max().unwrap_or(0),
        }
    }

    pub fn as_single(&self) -> Option<&ProjPoint> {
        match self {
            OrbitPoint::Single(p) => Some(p),
            OrbitPoint::Tuple(_) => None,
        }
    }
}

impl fmt::Display for OrbitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitPoint::Single(p) => write!(f, "{}", p),
            OrbitPoint::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join(";"))
            }
        }
    }
}

/// The map driving an orbit.
#[derive(Clone, Debug)]
pub enum DynamicalSystem {
    Projective(RationalSelfMap),
    Product(ProductMap),
}

impl DynamicalSystem {
    pub fn step(&self, x: &OrbitPoint) -> Result<OrbitPoint, IndeterminacyHit> {
        match (self, x) {
            (DynamicalSystem::Projective(f), OrbitPoint::Single(p)) => {
                f.evaluate(p).map(OrbitPoint::Single)
            }
            (DynamicalSystem::Product(f), OrbitPoint::Tuple(ps)) => {
                Ok(OrbitPoint::Tuple(f.evaluate(ps)))
            }
            _ => panic!("point shape does not match the system"),
        }
    }
}

/// One orbit step: index, point, its height and max coordinate bit size.
#[derive(Clone, Debug)]
pub struct OrbitRecord {
    pub n: usize,
    pub point: OrbitPoint,
    pub height: f64,
    pub bits: u64,
}

impl OrbitRecord {
    fn of(n: usize, point: OrbitPoint) -> OrbitRecord {
        let height = point.height();
        let bits = point.bit_size();
        OrbitRecord { n, point, height, bits }
    }
}

/// Why iteration stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StopReason {
    ReachedNMax,
    IndeterminacyHit,
    /// The next point's max coordinate bit length would exceed the budget;
    /// the offending point is not recorded.
    BitBudgetExceeded {
        bits: u64,
    },
    /// The next point equals the record at `first_seen`, so the orbit is
    /// eventually periodic; iteration stops rather than looping.
    CycleDetected {
        first_seen: usize,
    },
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::ReachedNMax => write!(f, "reached_n_max"),
            StopReason::IndeterminacyHit => write!(f, "indeterminacy_hit"),
            StopReason::BitBudgetExceeded { bits } => write!(f, "bit_budget_exceeded({bits})"),
            StopReason::CycleDetected { first_seen } => write!(f, "cycle_detected({first_seen})"),
        }
    }
}

/// Records for n = 0..=m, where m is reached at the first of: n_max,
/// an indeterminacy hit, the bit budget, or an exact repeat (the
/// canonical form makes cycle detection a hash lookup).
pub fn iterate_orbit(
    system: &DynamicalSystem,
    x0: OrbitPoint,
    n_max: usize,
    bit_budget: u64,
) -> (Vec<OrbitRecord>, StopReason) {
    assert!(bit_budget >= 64, "bit budget below 64 is never useful");
    let mut records = Vec::with_capacity(n_max + 1);
    let mut seen: HashMap<OrbitPoint, usize> = HashMap::new();
    seen.insert(x0.clone(), 0);
    records.push(OrbitRecord::of(0, x0));
    for n in 1..=n_max {
        let prev = &records[n - 1].point;
        let next = match system.step(prev) {
            Ok(p) => p,
            Err(IndeterminacyHit) => return (records, StopReason::IndeterminacyHit),
        };
        if let Some(&first_seen) = seen.get(&next) {
            return (records, StopReason::CycleDetected { first_seen });
        }
        let bits = next.bit_size();
        if bits > bit_budget {
            return (records, StopReason::BitBudgetExceeded { bits });
        }
        seen.insert(next.clone(), n);
        records.push(OrbitRecord::of(n, next));
    }
    (records, StopReason::ReachedNMax)
}

/// Extend a cycle-stopped orbit to n_max by replaying the detected cycle.
/// Exact: the appended records are the true orbit points. Orbits stopped
/// for any other reason are returned unchanged.
pub fn extend_periodic(
    records: Vec<OrbitRecord>,
    stop: &StopReason,
    n_max: usize,
) -> Vec<OrbitRecord> {
    let StopReason::CycleDetected { first_seen } = stop else {
        return records;
    };
    let mut records = records;
    let cycle_len = records.len() - first_seen;
    while records.last().map(|r| r.n).unwrap_or(0) < n_max {
        let n = records.len();
        let idx = first_seen + (n - first_seen) % cycle_len;
        let point = records[idx].point.clone();
        records.push(OrbitRecord::of(n, point));
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::p1_points_of_height_at_most;

    fn pt(v: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(v)
    }

    fn bf(v: &[i64]) -> BinForm {
        BinForm::from_i64(v)
    }

    fn squaring() -> P1Morphism {
        certify_p1_morphism(bf(&[0, 0, 1]), bf(&[1, 0, 0])).unwrap()
    }

    fn chebyshev() -> P1Morphism {
        // (2s^2 - t^2 : t^2), the degree-2 Chebyshev map x -> 2x^2 - 1
        certify_p1_morphism(bf(&[-1, 0, 2]), bf(&[1, 0, 0])).unwrap()
    }

    #[test]
    fn certify_examples() {
        assert_eq!(squaring().resultant(), &BigInt::one());
        assert_eq!(chebyshev().resultant(), &BigInt::from(4));
        assert!(matches!(
            certify_p1_morphism(bf(&[0, 1, 0]), bf(&[1, 0, 0])),
            Err(MapError::CommonRoot)
        ));
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(squaring().evaluate(&pt(&[2, 1])), pt(&[4, 1]));
        // Chebyshev fixed point (1:1)
        assert_eq!(chebyshev().evaluate(&pt(&[1, 1])), pt(&[1, 1]));
    }

    #[test]
    fn indeterminacy_on_p2() {
        // (x*y : x*z : z^2) is indeterminate exactly at (0:1:0)
        let x = MultiPoly::variable(3, 0);
        let y = MultiPoly::variable(3, 1);
        let z = MultiPoly::variable(3, 2);
        let f = RationalSelfMap::new(vec![x.mul(&y), x.mul(&z), z.mul(&z)]).unwrap();
        assert_eq!(f.evaluate(&pt(&[0, 1, 0])), Err(IndeterminacyHit));
        assert_eq!(f.evaluate(&pt(&[1, 1, 1])).unwrap(), pt(&[1, 1, 1]));
    }

    #[test]
    fn common_factor_rejected() {
        let x = MultiPoly::variable(2, 0);
        let f = RationalSelfMap::new(vec![
            x.mul(&x),
            x.mul(&MultiPoly::variable(2, 1)),
        ]);
        assert!(matches!(f, Err(MapError::FormsInvalid(_))));
    }

    #[test]
    fn orbit_of_squaring() {
        let sys = DynamicalSystem::Projective(squaring().as_rational_map());
        let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[2, 1])), 5, 1 << 20);
        assert_eq!(stop, StopReason::ReachedNMax);
        assert_eq!(recs.len(), 6);
        for (n, r) in recs.iter().enumerate() {
            // closed form: coordinates (2^(2^n) : 1), h_n = 2^n log 2
            let expect_coord = BigInt::from(2u32).pow(1 << n);
            assert_eq!(r.point.as_single().unwrap().coords()[0], expect_coord);
            let expect_h = (1u64 << n) as f64 * std::f64::consts::LN_2;
            assert!((r.height - expect_h).abs() < 1e-9 * expect_h.max(1.0));
        }
    }

    #[test]
    fn orbit_fixed_point_cycles() {
        let sys = DynamicalSystem::Projective(chebyshev().as_rational_map());
        let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[1, 1])), 10, 1 << 20);
        assert_eq!(stop, StopReason::CycleDetected { first_seen: 0 });
        assert_eq!(recs.len(), 1);
        let extended = extend_periodic(recs, &stop, 10);
        assert_eq!(extended.len(), 11);
        assert!(extended.iter().all(|r| r.height == 0.0));
    }

    #[test]
    fn orbit_two_cycle() {
        // x -> x^2 - 1 from 0: cycle 0 -> -1 -> 0
        let f = certify_p1_morphism(bf(&[-1, 0, 1]), bf(&[1, 0, 0])).unwrap();
        let sys = DynamicalSystem::Projective(f.as_rational_map());
        let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[0, 1])), 10, 1 << 20);
        assert_eq!(stop, StopReason::CycleDetected { first_seen: 0 });
        assert_eq!(recs.len(), 2);
        let extended = extend_periodic(recs, &stop, 6);
        let pts: Vec<&ProjPoint> = extended.iter().map(|r| r.point.as_single().unwrap()).collect();
        assert_eq!(*pts[4], pt(&[0, 1]));
        assert_eq!(*pts[5], pt(&[-1, 1]));
    }

    #[test]
    fn orbit_bit_budget() {
        // doubling bit size: from (2:1) the budget 4096 stops before n = 12
        let sys = DynamicalSystem::Projective(squaring().as_rational_map());
        let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[2, 1])), 100, 4096);
        assert_eq!(stop, StopReason::BitBudgetExceeded { bits: 4097 });
        assert_eq!(recs.last().unwrap().n, 11);
    }

    #[test]
    fn orbit_indeterminacy_stop() {
        let x = MultiPoly::variable(3, 0);
        let y = MultiPoly::variable(3, 1);
        let z = MultiPoly::variable(3, 2);
        let f = RationalSelfMap::new(vec![x.mul(&y), x.mul(&z), z.mul(&z)]).unwrap();
        let sys = DynamicalSystem::Projective(f);
        let (recs, stop) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[0, 1, 0])), 5, 1 << 20);
        assert_eq!(stop, StopReason::IndeterminacyHit);
        assert_eq!(recs.len(), 1);
    }

    #[test]
    fn compose_pullback_examples() {
        // monomial composition
        let (f3, g3) = compose_pullback(&squaring(), 3, 1024).unwrap();
        assert_eq!(f3, bf(&[0, 0, 0, 0, 0, 0, 0, 0, 1]));
        assert_eq!(g3, bf(&[1, 0, 0, 0, 0, 0, 0, 0, 0]));
        // n = 1 returns the defining forms unchanged
        let (f1, g1) = compose_pullback(&chebyshev(), 1, 1024).unwrap();
        assert_eq!(f1, bf(&[-1, 0, 2]));
        assert_eq!(g1, bf(&[1, 0, 0]));
        // Chebyshev squared: symbolic substitution oracle
        // F_2 = 2(2s^2-t^2)^2 - t^4, G_2 = t^4
        let (f2, g2) = compose_pullback(&chebyshev(), 2, 1024).unwrap();
        let ff = bf(&[-1, 0, 2]);
        let expect_f = {
            let sq = ff.mul(&ff).scale(&BigInt::from(2));
            sq.sub(&bf(&[1, 0, 0]).mul(&bf(&[1, 0, 0])))
        };
        assert_eq!(f2, expect_f);
        assert_eq!(g2, bf(&[1, 0, 0, 0, 0]));
        // degree cap
        assert!(matches!(
            compose_pullback(&squaring(), 11, 1024),
            Err(MapError::DegreeCapExceeded(2048, 1024))
        ));
    }

    #[test]
    fn composed_degree_and_resultant() {
        for n in 1..=4u32 {
            let fv = iterate_morphism(&chebyshev(), n, 1024).unwrap();
            assert_eq!(fv.degree(), 2u32.pow(n));
            assert!(!fv.resultant().is_zero());
        }
    }

    #[test]
    fn morphism_never_indeterminate_scan() {
        let f = chebyshev().as_rational_map();
        for x in p1_points_of_height_at_most(100) {
            assert!(f.evaluate(&x).is_ok(), "indeterminacy at {x}");
        }
    }

    #[test]
    fn height_growth_bound_along_orbit() {
        let map = certify_p1_morphism(bf(&[-1, 0, 1]), bf(&[1, 0, 0])).unwrap(); // x^2 - 1
        let rmap = map.as_rational_map();
        let log_c = rmap.height_growth_constant();
        let sys = DynamicalSystem::Projective(rmap);
        let (recs, _) = iterate_orbit(&sys, OrbitPoint::Single(pt(&[3, 1])), 10, 1 << 16);
        for w in recs.windows(2) {
            assert!(
                w[1].height <= 2.0 * w[0].height + log_c + 1e-9,
                "growth bound violated at n={}",
                w[1].n
            );
        }
    }

    #[test]
    fn product_map_orbit() {
        let cube = certify_p1_morphism(bf(&[0, 0, 0, 1]), bf(&[1, 0, 0, 0])).unwrap();
        let sq = squaring();
        let prod = ProductMap::new(vec![cube, sq]).unwrap();
        let sys = DynamicalSystem::Product(prod);
        let x0 = OrbitPoint::Tuple(vec![pt(&[2, 1]), pt(&[2, 1])]);
        let (recs, stop) = iterate_orbit(&sys, x0, 4, 1 << 20);
        assert_eq!(stop, StopReason::ReachedNMax);
        // h_n = 3^n log 2 + 2^n log 2
        for r in &recs {
            let expect = (3f64.powi(r.n as i32) + 2f64.powi(r.n as i32)) * std::f64::consts::LN_2;
            assert!((r.height - expect).abs() < 1e-9 * expect.max(1.0));
        }
        // unsorted factors rejected
        let sq2 = squaring();
        let cube2 = certify_p1_morphism(bf(&[0, 0, 0, 1]), bf(&[1, 0, 0, 0])).unwrap();
        assert!(matches!(
            ProductMap::new(vec![sq2, cube2]),
            Err(MapError::UnsortedInput)
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn evaluate_commutes_with_normalization(
                a in -50i64..50, b in -50i64..50,
                num in 1i64..20, den in 1i64..20,
            ) {
                prop_assume!(a != 0 || b != 0);
                let f = chebyshev().as_rational_map();
                let lam_num = BigInt::from(num);
                let lam_den = BigInt::from(den);
                let x = ProjPoint::normalize(&[BigInt::from(a) * &lam_num * &lam_den, BigInt::from(b) * lam_num * lam_den]).unwrap();
                let y = ProjPoint::normalize(&[BigInt::from(a), BigInt::from(b)]).unwrap();
                prop_assert_eq!(f.evaluate(&x).unwrap(), f.evaluate(&y).unwrap());
            }
        }
    }
}
