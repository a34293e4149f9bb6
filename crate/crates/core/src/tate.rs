//! Tate's algorithm over a `LocalField`, local Euler factors at s = 1,
//! unramified base change and the potential supersingularity test.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::fq::{FqElement, FqField};
use crate::arith::rational::{vp_unchecked, Rational, Valuation};
use crate::curves::{count_points, extension_count, CurveError, FqModel, WeierstrassModel, ENUMERATION_CAP};
use crate::local::{default_precision, LocalElement, LocalError, LocalField, Ramification};

/// Precision doublings allowed after the first attempt.
pub const MAX_RETRIES: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TateError {
    #[error("precision exhausted after {attempts} attempts (last N = {precision})")]
    PrecisionExhausted { attempts: u32, precision: i64 },
    #[error("reduction is not multiplicative")]
    NotMultiplicative,
    #[error("curve is potentially multiplicative at {0}")]
    PotentiallyMultiplicative(u64),
    #[error("Tate output violates an invariant: {0}")]
    InvariantViolated(String),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KodairaType {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn is_good(&self) -> bool {
        matches!(self, KodairaType::I(0))
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, KodairaType::I(n) if *n > 0)
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

impl Serialize for KodairaType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionClass {
    GoodOrdinary,
    GoodSupersingular,
    MultSplit,
    MultNonsplit,
    Additive,
}

impl ReductionClass {
    pub fn is_good(&self) -> bool {
        matches!(self, ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular)
    }
}

impl fmt::Display for ReductionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A completion of the base field, described by its invariants over Q_l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PlaceDescriptor {
    pub ell: u64,
    pub e: usize,
    pub f: usize,
    pub ramification: Ramification,
}

impl PlaceDescriptor {
    pub fn of(field: &LocalField) -> Self {
        PlaceDescriptor {
            ell: field.residue_characteristic(),
            e: field.ramification_index(),
            f: field.residue_degree(),
            ramification: field.ramification(),
        }
    }

    pub fn local_degree(&self) -> usize {
        self.e * self.f
    }

    pub fn residue_size(&self) -> BigInt {
        BigInt::from(self.ell).pow(self.f as u32)
    }

    /// Builds the field at the given precision.
    pub fn field(&self, precision: i64) -> Result<LocalField, LocalError> {
        let cyclotomic = matches!(self.ramification, Ramification::Cyclotomic { .. });
        LocalField::new(self.ell, self.f, self.e, precision, cyclotomic)
    }
}

/// Output of Tate's algorithm at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalReductionData {
    pub place: PlaceDescriptor,
    pub kodaira: KodairaType,
    pub c_v: u32,
    pub v_min_delta: i64,
    pub conductor_exponent: i64,
    #[serde(serialize_with = "bigint_str")]
    pub q_v: BigInt,
    pub reduction_class: ReductionClass,
    pub potentially_good: bool,
    #[serde(serialize_with = "opt_bigint_str")]
    pub n_v: Option<BigInt>,
    #[serde(serialize_with = "rational_str")]
    pub l_at_1: Rational,
    pub source_model: [String; 5],
    pub precision_used: i64,
}

fn bigint_str<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn opt_bigint_str<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match n {
        Some(n) => s.collect_str(n),
        None => s.serialize_none(),
    }
}

fn rational_str<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

/// The five coefficients of a model over a local field.
#[derive(Clone, Debug)]
struct LocalModel {
    a1: LocalElement,
    a2: LocalElement,
    a3: LocalElement,
    a4: LocalElement,
    a6: LocalElement,
}

struct Invariants {
    b2: LocalElement,
    b6: LocalElement,
    b8: LocalElement,
    c4: LocalElement,
    c6: LocalElement,
    b4: LocalElement,
    delta: LocalElement,
}

impl LocalModel {
    fn embed(model: &WeierstrassModel, k: &LocalField) -> LocalModel {
        let c = model.coefficients();
        LocalModel {
            a1: k.from_rational(&c[0]),
            a2: k.from_rational(&c[1]),
            a3: k.from_rational(&c[2]),
            a4: k.from_rational(&c[3]),
            a6: k.from_rational(&c[4]),
        }
    }

    fn invariants(&self) -> Invariants {
        let LocalModel { a1, a2, a3, a4, a6 } = self;
        let b2 = a1 * a1 + a2.scale_int(4);
        let b4 = a4.scale_int(2) + a1 * a3;
        let b6 = a3 * a3 + a6.scale_int(4);
        let b8 = a1 * a1 * a6 + a2 * a6 * a2.field().from_int(4) - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        let c4 = &b2 * &b2 - b4.scale_int(24);
        let c6 = -(&b2 * &b2 * &b2) + (&b2 * &b4).scale_int(36) - b6.scale_int(216);
        let delta = -(&b2 * &b2 * &b8) - (&b4 * &b4 * &b4).scale_int(8) - (&b6 * &b6).scale_int(27)
            + (&b2 * &b4 * &b6).scale_int(9);
        Invariants { b2, b4, b6, b8, c4, c6, delta }
    }

    fn rst(&self, r: &LocalElement, s: &LocalElement, t: &LocalElement) -> LocalModel {
        let LocalModel { a1, a2, a3, a4, a6 } = self;
        let rs = r * s;
        LocalModel {
            a1: a1 + &s.scale_int(2),
            a2: a2 - &(s * a1) + r.scale_int(3) - s * s,
            a3: a3 + &(r * a1) + t.scale_int(2),
            a4: a4 - &(s * a3) + (r * a2).scale_int(2) - (t + &rs) * a1.clone() + (r * r).scale_int(3)
                - (s * t).scale_int(2),
            a6: a6 + &(r * a4) + r * r * a2.clone() + r * r * r.clone() - t * a3 - t * t - r * t * a1.clone(),
        }
    }

    fn divide_by_pi_powers(&self) -> LocalModel {
        LocalModel {
            a1: self.a1.div_pi_pow(1),
            a2: self.a2.div_pi_pow(2),
            a3: self.a3.div_pi_pow(3),
            a4: self.a4.div_pi_pow(4),
            a6: self.a6.div_pi_pow(6),
        }
    }
}

/// Residue-field helpers bound to one local field.
struct Residue<'a> {
    k: &'a LocalField,
    fq: &'a FqField,
    p: u64,
}

impl<'a> Residue<'a> {
    fn red(&self, x: &LocalElement) -> Result<FqElement, LocalError> {
        x.reduce()
    }

    fn preduce(&self, x: &LocalElement) -> Result<LocalElement, LocalError> {
        Ok(self.k.lift(&x.reduce()?))
    }

    fn pinv(&self, x: &LocalElement) -> Result<LocalElement, LocalError> {
        let inv = x.reduce()?.inverse().ok_or(LocalError::BadParameters("inverting a non-unit".into()))?;
        Ok(self.k.lift(&inv))
    }

    /// Lift of the unique p-th root in the residue field.
    fn proot(&self, x: &LocalElement) -> Result<LocalElement, LocalError> {
        Ok(self.k.lift(&x.reduce()?.nth_char_root()))
    }

    fn pdiv(&self, x: &LocalElement) -> Result<bool, LocalError> {
        x.val_at_least(1)
    }

    /// Whether a T^2 + b T + c has a root in the residue field.
    fn quad_roots(&self, a: &LocalElement, b: &LocalElement, c: &LocalElement) -> Result<bool, LocalError> {
        let (a, b, c) = (self.red(a)?, self.red(b)?, self.red(c)?);
        if a.is_zero() {
            return Ok(!b.is_zero() || c.is_zero());
        }
        if self.p == 2 {
            return Ok(self.fq.elements().any(|t| (&(&a * &t + &b) * &t + &c).is_zero()));
        }
        Ok((&b * &b - &(&self.fq.from_int(4) * &a * &c)).is_square())
    }

    /// Number of distinct roots of T^3 + b T^2 + c T + d in the residue field.
    fn cubic_roots(&self, b: &FqElement, c: &FqElement, d: &FqElement) -> usize {
        self.fq
            .elements()
            .filter(|t| (&(&(t + b) * t + c) * t + d).is_zero())
            .count()
    }
}

struct TateCore {
    kodaira: KodairaType,
    c_v: u32,
    v_min_delta: i64,
    conductor_exponent: i64,
    split: Option<bool>,
    minimal: LocalModel,
}

fn tate_core(model: &LocalModel, k: &LocalField) -> Result<TateCore, LocalError> {
    let rf = Residue { k, fq: k.residue_field(), p: k.residue_characteristic() };
    let p = rf.p;
    let zero = k.zero();
    let one = k.one();
    let pi = k.uniformizer();
    let half = if p == 2 { zero.clone() } else { rf.pinv(&k.from_int(2))? };
    let mut m = model.clone();
    loop {
        let inv = m.invariants();
        let vd = inv.delta.valuation()?;
        if vd == 0 {
            return Ok(TateCore {
                kodaira: KodairaType::I(0),
                c_v: 1,
                v_min_delta: 0,
                conductor_exponent: 0,
                split: None,
                minimal: m,
            });
        }
        // move the singular point of the reduction to (0, 0)
        let (r, t) = if p == 2 {
            if rf.pdiv(&inv.b2)? {
                let r = rf.proot(&m.a4)?;
                let t = rf.proot(&(&(&(&(&r + &m.a2) * &r) + &m.a4) * &r + m.a6.clone()))?;
                (r, t)
            } else {
                let temp = rf.pinv(&m.a1)?;
                let r = &temp * &m.a3;
                let t = &temp * &(&m.a4 + &(&r * &r));
                (r, t)
            }
        } else if p == 3 {
            let r = if rf.pdiv(&inv.b2)? {
                rf.proot(&-&inv.b6)?
            } else {
                -(&rf.pinv(&inv.b2)? * &inv.b4)
            };
            let t = &(&m.a1 * &r) + &m.a3;
            (r, t)
        } else {
            let r = if rf.pdiv(&inv.c4)? {
                -(&rf.pinv(&k.from_int(12))? * &inv.b2)
            } else {
                -(&rf.pinv(&inv.c4.scale_int(12))? * &(&inv.c6 + &(&inv.b2 * &inv.c4)))
            };
            let t = -(&half * &(&(&m.a1 * &r) + &m.a3));
            (r, t)
        };
        let (r, t) = (rf.preduce(&r)?, rf.preduce(&t)?);
        m = m.rst(&r, &zero, &t);
        let inv = m.invariants();

        if !rf.pdiv(&inv.c4)? {
            let split = rf.quad_roots(&one, &m.a1, &-&m.a2)?;
            let n = vd as u32;
            let c_v = if split { n } else if n % 2 == 0 { 2 } else { 1 };
            return Ok(TateCore {
                kodaira: KodairaType::I(n),
                c_v,
                v_min_delta: vd,
                conductor_exponent: 1,
                split: Some(split),
                minimal: m,
            });
        }
        let done = |kodaira, c_v, fp, m: LocalModel| {
            Ok(TateCore { kodaira, c_v, v_min_delta: vd, conductor_exponent: fp, split: None, minimal: m })
        };
        if !m.a6.val_at_least(2)? {
            return done(KodairaType::II, 1, vd, m);
        }
        if !inv.b8.val_at_least(3)? {
            return done(KodairaType::III, 2, vd - 1, m);
        }
        if !inv.b6.val_at_least(3)? {
            let c = if rf.quad_roots(&one, &m.a3.div_pi_pow(1), &-&m.a6.div_pi_pow(2))? { 3 } else { 1 };
            return done(KodairaType::IV, c, vd - 2, m);
        }

        // arrange p | a1, a2; p^2 | a3, a4; p^3 | a6
        let (s, t) = if p == 2 {
            (rf.proot(&m.a2)?, &pi * &rf.proot(&m.a6.div_pi_pow(2))?)
        } else if p == 3 {
            (m.a1.clone(), m.a3.clone())
        } else {
            (-(&m.a1 * &half), -(&m.a3 * &half))
        };
        m = m.rst(&zero, &s, &t);

        let b = rf.red(&m.a2.div_pi_pow(1))?;
        let c = rf.red(&m.a4.div_pi_pow(2))?;
        let d = rf.red(&m.a6.div_pi_pow(3))?;
        let fq = rf.fq;
        let (bb, cc, bc) = (&b * &b, &c * &c, &b * &c);
        let w = &fq.from_int(27) * &d * &d - &bb * &cc + &fq.from_int(4) * &b * &bb * &d
            - &fq.from_int(18) * &bc * &d
            + &fq.from_int(4) * &c * &cc;
        let x = &fq.from_int(3) * &c - &bb;
        let sw = if w.is_zero() {
            if x.is_zero() { 3 } else { 2 }
        } else {
            1
        };

        if sw == 1 {
            let c_v = 1 + rf.cubic_roots(&b, &c, &d) as u32;
            return done(KodairaType::IStar(0), c_v, vd - 4, m);
        }
        if sw == 2 {
            // move the double root to T = 0
            let r = if p == 2 {
                c.nth_char_root()
            } else if p == 3 {
                &c * &b.inverse().expect("b is a unit when the root is double")
            } else {
                &(&bc - &(&fq.from_int(9) * &d)) * &(&fq.from_int(2) * &x).inverse().expect("x is a unit")
            };
            let r = &pi * &k.lift(&r);
            m = m.rst(&r, &zero, &zero);
            let (mut ix, mut iy) = (3i64, 3i64);
            let c_v = loop {
                let a3t = m.a3.div_pi_pow(iy - 1);
                let a6t = m.a6.div_pi_pow(ix + iy - 2);
                if rf.pdiv(&(&a3t * &a3t + a6t.scale_int(4)))? {
                    let t = if p == 2 {
                        rf.proot(&a6t)?.mul_pi_pow(iy - 1)
                    } else {
                        rf.preduce(&-(&a3t * &half))?.mul_pi_pow(iy - 1)
                    };
                    m = m.rst(&zero, &zero, &t);
                    iy += 1;
                    let a2t = m.a2.div_pi_pow(1);
                    let a4t = m.a4.div_pi_pow(ix);
                    let a6t = m.a6.div_pi_pow(ix + iy - 2);
                    if rf.pdiv(&(&a4t * &a4t - (&a6t * &a2t).scale_int(4)))? {
                        let r = if p == 2 {
                            rf.proot(&(&a6t * &rf.pinv(&a2t)?))?.mul_pi_pow(ix - 1)
                        } else {
                            rf.preduce(&-(&a4t * &rf.pinv(&a2t.scale_int(2))?))?.mul_pi_pow(ix - 1)
                        };
                        m = m.rst(&r, &zero, &zero);
                        ix += 1;
                    } else {
                        break if rf.quad_roots(&a2t, &a4t, &a6t)? { 4 } else { 2 };
                    }
                } else {
                    break if rf.quad_roots(&one, &a3t, &-&a6t)? { 4 } else { 2 };
                }
            };
            let n = (ix + iy - 5) as u32;
            return done(KodairaType::IStar(n), c_v, vd - ix - iy + 1, m);
        }

        // triple root: move it to T = 0
        let r = if p == 2 {
            b.clone()
        } else if p == 3 {
            (-&d).nth_char_root()
        } else {
            -(&b * &fq.from_int(3).inverse().unwrap())
        };
        let r = &pi * &k.lift(&r);
        m = m.rst(&r, &zero, &zero);
        let a3t = m.a3.div_pi_pow(2);
        let a6t = m.a6.div_pi_pow(4);
        if !rf.pdiv(&(&a3t * &a3t + a6t.scale_int(4)))? {
            let c = if rf.quad_roots(&one, &a3t, &-&a6t)? { 3 } else { 1 };
            return done(KodairaType::IVStar, c, vd - 6, m);
        }
        let t = if p == 2 {
            -rf.proot(&a6t)?.mul_pi_pow(2)
        } else {
            rf.preduce(&-(&a3t * &half))?.mul_pi_pow(2)
        };
        m = m.rst(&zero, &zero, &t);
        if !m.a4.val_at_least(4)? {
            return done(KodairaType::IIIStar, 2, vd - 8, m);
        }
        if !m.a6.val_at_least(6)? {
            return done(KodairaType::IIStar, 1, vd - 9, m);
        }
        m = m.divide_by_pi_powers();
    }
}

fn reduced_model(m: &LocalModel) -> Result<FqModel, LocalError> {
    Ok(FqModel::new([m.a1.reduce()?, m.a2.reduce()?, m.a3.reduce()?, m.a4.reduce()?, m.a6.reduce()?]))
}

/// #E(F_q) of a good reduction, descending to the prime field when possible.
pub fn count_reduction(model: &FqModel) -> Result<BigInt, CurveError> {
    let field = model.field();
    if let Some(base) = model.descend_to_prime_field() {
        if field.degree() > 1 {
            let ell = field.characteristic();
            let n1 = count_points(&base)?;
            return extension_count(&BigInt::from(n1), &BigInt::from(ell), field.degree() as u32);
        }
    }
    Ok(BigInt::from(count_points(model)?))
}

/// L_v(E, 1) from the reduction class: q/N, q/(q-1), q/(q+1) or 1.
pub fn euler_factor_at_one(data: &LocalReductionData) -> Rational {
    let q = data.q_v.clone();
    match data.reduction_class {
        ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular => {
            Rational::new(q, data.n_v.clone().expect("good reduction carries N_v"))
        }
        ReductionClass::MultSplit => Rational::new(q.clone(), q - 1),
        ReductionClass::MultNonsplit => Rational::new(q.clone(), q + 1),
        ReductionClass::Additive => Rational::one(),
    }
}

fn ordinary_or_supersingular(n: &BigInt, q: &BigInt, ell: u64) -> ReductionClass {
    let a: BigInt = q + 1 - n;
    if a.is_multiple_of(&BigInt::from(ell)) {
        ReductionClass::GoodSupersingular
    } else {
        ReductionClass::GoodOrdinary
    }
}

fn potentially_good(model: &WeierstrassModel, ell: u64) -> bool {
    match vp_unchecked(&model.j_invariant(), ell) {
        Valuation::PlusInfinity => true,
        Valuation::Finite(v) => v >= 0,
    }
}

fn check_invariants(data: &LocalReductionData, model: &WeierstrassModel) -> Result<(), TateError> {
    let ell = data.place.ell;
    let vj = match vp_unchecked(&model.j_invariant(), ell) {
        Valuation::PlusInfinity => None,
        Valuation::Finite(v) => Some(v * data.place.e as i64),
    };
    let fail = |msg: String| Err(TateError::InvariantViolated(msg));
    if data.c_v < 1 {
        return fail("c_v < 1".into());
    }
    if data.potentially_good && data.c_v > 4 {
        return fail(format!("c_v = {} > 4 at a potentially good place", data.c_v));
    }
    if let KodairaType::I(n) = data.kodaira {
        if n > 0 && vj != Some(-(n as i64)) {
            return fail(format!("I{n} with v(j) = {vj:?}"));
        }
    }
    if vj.map_or(false, |v| v < 0) && !data.kodaira.is_multiplicative() && !matches!(data.kodaira, KodairaType::IStar(n) if n > 0) {
        return fail(format!("v(j) < 0 but type {}", data.kodaira));
    }
    Ok(())
}

/// Runs Tate's algorithm at the precision of `k`, doubling it on
/// indistinguishable-from-zero signals up to `MAX_RETRIES` times.
pub fn tate_algorithm(model: &WeierstrassModel, k: &LocalField) -> Result<LocalReductionData, TateError> {
    let integral = model.integral_model();
    let mut field = k.clone();
    for attempt in 0..=MAX_RETRIES {
        match tate_once(&integral, &field) {
            Err(TateError::Local(LocalError::IndistinguishableFromZero)) => {
                if attempt == MAX_RETRIES {
                    return Err(TateError::PrecisionExhausted { attempts: attempt + 1, precision: field.precision() });
                }
                field = field.with_precision(field.precision() * 2)?;
            }
            other => return other,
        }
    }
    unreachable!()
}

/// Reduction of the minimal model produced by Tate's algorithm.
pub fn reduced_minimal_model(model: &WeierstrassModel, k: &LocalField) -> Result<FqModel, TateError> {
    let integral = model.integral_model();
    let core = tate_core(&LocalModel::embed(&integral, k), k)?;
    Ok(reduced_model(&core.minimal)?)
}

fn tate_once(model: &WeierstrassModel, k: &LocalField) -> Result<LocalReductionData, TateError> {
    let place = PlaceDescriptor::of(k);
    let core = tate_core(&LocalModel::embed(model, k), k)?;
    let q_v = place.residue_size();
    let (reduction_class, n_v) = match (core.kodaira, core.split) {
        (KodairaType::I(0), _) => {
            let n = count_reduction(&reduced_model(&core.minimal)?)?;
            (ordinary_or_supersingular(&n, &q_v, place.ell), Some(n))
        }
        (KodairaType::I(_), Some(true)) => (ReductionClass::MultSplit, None),
        (KodairaType::I(_), _) => (ReductionClass::MultNonsplit, None),
        _ => (ReductionClass::Additive, None),
    };
    let mut data = LocalReductionData {
        place,
        kodaira: core.kodaira,
        c_v: core.c_v,
        v_min_delta: core.v_min_delta,
        conductor_exponent: core.conductor_exponent,
        q_v,
        reduction_class,
        potentially_good: potentially_good(model, place.ell),
        n_v,
        l_at_1: Rational::one(),
        source_model: model.to_strings(),
        precision_used: k.precision(),
    };
    data.l_at_1 = euler_factor_at_one(&data);
    check_invariants(&data, model)?;
    Ok(data)
}

/// Tate's algorithm at a place with the default working precision.
pub fn tate_at(model: &WeierstrassModel, place: PlaceDescriptor, precision: Option<i64>) -> Result<LocalReductionData, TateError> {
    let n = precision.unwrap_or_else(|| default_precision(place.e, model.integral_model().disc_valuation(place.ell)));
    tate_algorithm(model, &place.field(n)?)
}

/// Tate's algorithm over Q_l.
pub fn tate_over_q(model: &WeierstrassModel, ell: u64) -> Result<LocalReductionData, TateError> {
    let place = PlaceDescriptor { ell, e: 1, f: 1, ramification: Ramification::Unramified };
    tate_at(model, place, None)
}

/// Split or nonsplit multiplicative reduction over `k`.
pub fn classify_split(model: &WeierstrassModel, k: &LocalField) -> Result<ReductionClass, TateError> {
    let data = tate_algorithm(model, k)?;
    match data.reduction_class {
        c @ (ReductionClass::MultSplit | ReductionClass::MultNonsplit) => Ok(c),
        _ => Err(TateError::NotMultiplicative),
    }
}

/// Base change to the unramified extension of degree `f` of the source
/// completion, computed by rerunning Tate's algorithm there.
pub fn base_change_unramified(model: &WeierstrassModel, data: &LocalReductionData, f: usize) -> Result<LocalReductionData, TateError> {
    let place = PlaceDescriptor { f: data.place.f * f, ..data.place };
    tate_at(model, place, Some(data.precision_used))
}

/// Rule-based unramified base change. `c_v` of additive types whose component
/// group may gain rational points is left unchanged and flagged undetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleBaseChange {
    pub data: LocalReductionData,
    pub c_v_determined: bool,
}

pub fn base_change_rule(data: &LocalReductionData, f: usize) -> Result<RuleBaseChange, TateError> {
    let mut out = data.clone();
    out.place.f = data.place.f * f;
    out.q_v = out.place.residue_size();
    let mut determined = true;
    match data.reduction_class {
        ReductionClass::GoodOrdinary | ReductionClass::GoodSupersingular => {
            let n = extension_count(data.n_v.as_ref().expect("good reduction carries N_v"), &data.q_v, f as u32)?;
            out.reduction_class = ordinary_or_supersingular(&n, &out.q_v, data.place.ell);
            out.n_v = Some(n);
        }
        ReductionClass::MultSplit => {}
        ReductionClass::MultNonsplit => {
            if f % 2 == 0 {
                out.reduction_class = ReductionClass::MultSplit;
                if let KodairaType::I(n) = data.kodaira {
                    out.c_v = n;
                }
            }
        }
        ReductionClass::Additive => {
            let max = match data.kodaira {
                KodairaType::IV | KodairaType::IVStar => 3,
                KodairaType::IStar(_) => 4,
                _ => data.c_v,
            };
            determined = data.c_v == max;
        }
    }
    out.l_at_1 = euler_factor_at_one(&out);
    Ok(RuleBaseChange { data: out, c_v_determined: determined })
}

/// A model over F_p with j-invariant `j`.
pub fn model_with_j(j: &FqElement) -> FqModel {
    let fq = j.field();
    let p = fq.characteristic();
    let z = fq.zero();
    let o = fq.one();
    if j.is_zero() {
        return match p {
            2 => FqModel::new([z.clone(), z.clone(), o, z.clone(), z]),
            3 => FqModel::new([z.clone(), z.clone(), z.clone(), -&o, z]),
            _ => FqModel::new([z.clone(), z.clone(), z.clone(), z, o]),
        };
    }
    let d = j - &fq.from_int(1728);
    if d.is_zero() {
        return FqModel::new([z.clone(), z.clone(), z.clone(), o, z]);
    }
    let dinv = d.inverse().unwrap();
    FqModel::new([o, z.clone(), z, -(&fq.from_int(36) * &dinv), -dinv])
}

/// Whether the reduction of j at p is a supersingular j-invariant.
pub fn pot_supersingular(model: &WeierstrassModel, p: u64) -> Result<bool, TateError> {
    if !potentially_good(model, p) {
        return Err(TateError::PotentiallyMultiplicative(p));
    }
    let fp = FqField::new(p, 1).map_err(CurveError::from)?;
    let j = model.j_invariant();
    let pb = BigInt::from(p);
    let num = j.numer().mod_floor(&pb);
    let den = j.denom().mod_floor(&pb);
    let den_inv = fp.from_int(den.to_i64().unwrap()).inverse().expect("j is p-integral");
    let jbar = &fp.from_int(num.to_i64().unwrap()) * &den_inv;
    let base = model_with_j(&jbar);
    let q2 = p.checked_mul(p);
    let n2 = match q2 {
        Some(q2) if q2 <= ENUMERATION_CAP => {
            let f2 = FqField::new(p, 2).map_err(CurveError::from)?;
            let lifted: Vec<FqElement> = base.a.iter().map(|c| f2.from_int(c.coords()[0] as i64)).collect();
            BigInt::from(count_points(&FqModel::new(lifted.try_into().unwrap()))?)
        }
        _ => extension_count(&BigInt::from(count_points(&base)?), &pb, 2)?,
    };
    Ok((n2 - 1i32).mod_floor(&pb).is_zero())
}

/// vp of a rational as an integer; zero maps to 0.
pub(crate) fn vp_exponent(r: &Rational, p: u64) -> i64 {
    match vp_unchecked(r, p) {
        Valuation::Finite(v) => v,
        Valuation::PlusInfinity => 0,
    }
}

impl LocalReductionData {
    /// Exponent k with |L_v(E,1)|_p = p^k.
    pub fn l_abs_exponent(&self, p: u64) -> i64 {
        -vp_exponent(&self.l_at_1, p)
    }

    pub fn is_good(&self) -> bool {
        self.reduction_class.is_good()
    }
}
