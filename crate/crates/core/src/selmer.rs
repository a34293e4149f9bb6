//! Global assembly: the set of potentially multiplicative places, the
//! hypothesis audit, rho_p, the two Euler characteristics, tau_p, corank
//! windows and kernel orders of the local restriction maps.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::primes::is_prime;
use crate::arith::rational::{int_val, Rational, Valuation, vp_unchecked};
use crate::curves::{torsion_bound_over_f, CurveError, TorsionEstimate, WeierstrassModel};
use crate::cyclotomic::{field_degree, splitting, CyclotomicSplitting};
use crate::local::Ramification;
use crate::tate::{pot_supersingular, tate_at, LocalReductionData, PlaceDescriptor, ReductionClass, TateError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SelmerError {
    #[error("reduction table does not cover bad prime {0}")]
    TableIncomplete(u64),
    #[error("abelian variety needs factors or a reduction table")]
    EmptyAbelianVariety,
    #[error("dimension {dimension} does not match {factors} factors")]
    DimensionMismatch { dimension: usize, factors: usize },
    #[error("{field} = {value} is not a power of {p}")]
    NotPPower { field: &'static str, value: BigInt, p: u64 },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("conductor m must be at least 1")]
    BadConductor,
    #[error("place above {0} lies over p")]
    PlaceAboveP(u64),
    #[error(transparent)]
    Tate(#[from] TateError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTableEntry {
    pub prime: u64,
    pub potentially_good: bool,
    pub good: bool,
}

/// A = product of elliptic curves, or an explicit per-prime reduction table.
/// The table takes precedence for the reduction behaviour when both are given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianVarietyInput {
    pub factors: Vec<WeierstrassModel>,
    pub reduction_table: Option<Vec<ReductionTableEntry>>,
    pub dimension: usize,
}

impl AbelianVarietyInput {
    pub fn from_factors(factors: Vec<WeierstrassModel>) -> Self {
        let dimension = factors.len();
        AbelianVarietyInput { factors, reduction_table: None, dimension }
    }

    pub fn from_table(table: Vec<ReductionTableEntry>, dimension: usize) -> Self {
        AbelianVarietyInput { factors: Vec::new(), reduction_table: Some(table), dimension }
    }

    pub fn validate(&self) -> Result<(), SelmerError> {
        if self.factors.is_empty() && self.reduction_table.is_none() {
            return Err(SelmerError::EmptyAbelianVariety);
        }
        if !self.factors.is_empty() && self.dimension != self.factors.len() {
            return Err(SelmerError::DimensionMismatch { dimension: self.dimension, factors: self.factors.len() });
        }
        if let Some(table) = &self.reduction_table {
            for e in table {
                if !is_prime(e.prime) {
                    return Err(SelmerError::NotPrime(e.prime));
                }
            }
            let covered: BTreeSet<u64> = table.iter().map(|e| e.prime).collect();
            for f in &self.factors {
                for l in f.integral_model().bad_primes() {
                    if !covered.contains(&l) {
                        return Err(SelmerError::TableIncomplete(l));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether A is potentially good at l.
    pub fn potentially_good_at(&self, ell: u64) -> bool {
        if let Some(table) = &self.reduction_table {
            return table.iter().find(|e| e.prime == ell).map_or(true, |e| e.potentially_good);
        }
        self.factors.iter().all(|f| match vp_unchecked(&f.j_invariant(), ell) {
            Valuation::Finite(v) => v >= 0,
            Valuation::PlusInfinity => true,
        })
    }

    /// Rational primes where A has bad reduction.
    pub fn bad_primes(&self) -> BTreeSet<u64> {
        if let Some(table) = &self.reduction_table {
            return table.iter().filter(|e| !e.good).map(|e| e.prime).collect();
        }
        self.factors.iter().flat_map(|f| f.integral_model().bad_primes()).collect()
    }

    fn candidate_primes(&self) -> BTreeSet<u64> {
        let mut s = self.bad_primes();
        if let Some(table) = &self.reduction_table {
            s.extend(table.iter().map(|e| e.prime));
        }
        s
    }
}

/// Quantities imported as certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExternalArithmetic {
    #[serde(with = "bigint_decimal")]
    pub sha_p_order: BigInt,
    pub selmer_finite: bool,
    pub lambda_torsion_certificate: bool,
    #[serde(with = "opt_bigint_decimal")]
    pub torsion_p_override: Option<BigInt>,
    pub sigma_index_r: Option<u64>,
    /// Certifies that Sigma has no element of order p.
    pub sigma_p_torsion_free: bool,
}

impl Default for ExternalArithmetic {
    fn default() -> Self {
        ExternalArithmetic {
            sha_p_order: BigInt::one(),
            selmer_finite: false,
            lambda_torsion_certificate: false,
            torsion_p_override: None,
            sigma_index_r: None,
            sigma_p_torsion_free: false,
        }
    }
}

fn is_p_power(n: &BigInt, p: u64) -> bool {
    n > &BigInt::zero() && *n == BigInt::from(p).pow(int_val(n, p) as u32)
}

impl ExternalArithmetic {
    pub fn validate(&self, p: u64) -> Result<(), SelmerError> {
        if !is_p_power(&self.sha_p_order, p) {
            return Err(SelmerError::NotPPower { field: "sha_p_order", value: self.sha_p_order.clone(), p });
        }
        if let Some(t) = &self.torsion_p_override {
            if !is_p_power(t, p) {
                return Err(SelmerError::NotPPower { field: "torsion_p_override", value: t.clone(), p });
            }
        }
        Ok(())
    }
}

/// A place of F = Q(mu_m): the index runs over the g conjugate places above l.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PlaceLabel {
    pub ell: u64,
    pub index: u64,
    pub e: u64,
    pub f: u64,
}

impl std::fmt::Display for PlaceLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "v{}.{}", self.ell, self.index)
    }
}

fn expand_places(split: &CyclotomicSplitting) -> Vec<PlaceLabel> {
    (1..=split.g).map(|index| PlaceLabel { ell: split.ell, index, e: split.e, f: split.f }).collect()
}

/// The completion of Q(mu_m) at a place above l.
pub fn place_descriptor(split: &CyclotomicSplitting) -> PlaceDescriptor {
    let ramification = if split.e > 1 {
        Ramification::Cyclotomic { level: split.level }
    } else {
        Ramification::Unramified
    };
    PlaceDescriptor { ell: split.ell, e: split.e as usize, f: split.f as usize, ramification }
}

/// Primes of F not above p where A is potentially multiplicative.
pub fn compute_m(a: &AbelianVarietyInput, p: u64, m: u64) -> Result<(BTreeSet<u64>, Vec<PlaceLabel>), SelmerError> {
    a.validate()?;
    let rational: BTreeSet<u64> = a
        .candidate_primes()
        .into_iter()
        .filter(|&l| l != p && !a.potentially_good_at(l))
        .collect();
    let mut places = Vec::new();
    for &l in &rational {
        places.extend(expand_places(&splitting(l, m).map_err(CurveError::from)?));
    }
    Ok((rational, places))
}

/// Places of F ramified in F(A_{p^infinity}): those in M and those above p.
pub fn ramified_places(a: &AbelianVarietyInput, p: u64, m: u64) -> Result<Vec<PlaceLabel>, SelmerError> {
    let (_, mut places) = compute_m(a, p, m)?;
    places.extend(expand_places(&splitting(p, m).map_err(CurveError::from)?));
    places.sort();
    Ok(places)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HypothesisStatus {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "ASSUMED")]
    Assumed,
}

impl std::fmt::Display for HypothesisStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            HypothesisStatus::Pass => "PASS",
            HypothesisStatus::Fail => "FAIL",
            HypothesisStatus::Assumed => "ASSUMED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisRow {
    pub id: &'static str,
    pub statement: &'static str,
    pub status: HypothesisStatus,
    pub detail: String,
}

fn certified(flag: bool) -> HypothesisStatus {
    if flag {
        HypothesisStatus::Assumed
    } else {
        HypothesisStatus::Fail
    }
}

/// Reduction data of one curve at the class of places above l.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceClassData {
    pub splitting: CyclotomicSplitting,
    pub data: LocalReductionData,
}

fn place_class(model: &WeierstrassModel, ell: u64, m: u64, precision: Option<i64>) -> Result<PlaceClassData, SelmerError> {
    let split = splitting(ell, m).map_err(CurveError::from)?;
    let data = tate_at(model, place_descriptor(&split), precision)?;
    Ok(PlaceClassData { splitting: split, data })
}

/// Reduction data for `model` above every prime in `primes`, in parallel.
pub fn local_data(
    model: &WeierstrassModel,
    primes: &BTreeSet<u64>,
    m: u64,
    precision: Option<i64>,
) -> Result<BTreeMap<u64, PlaceClassData>, SelmerError> {
    let list: Vec<u64> = primes.iter().copied().collect();
    let results: Vec<Result<(u64, PlaceClassData), SelmerError>> = list
        .par_iter()
        .map(|&l| place_class(model, l, m, precision).map(|d| (l, d)))
        .collect();
    results.into_iter().collect()
}

/// Hypothesis audit: Theorem conditions (i)-(iv) plus the standing clauses.
pub fn check_hypotheses(
    e_above_p: &PlaceClassData,
    factors_above_p: &[PlaceClassData],
    a: &AbelianVarietyInput,
    p: u64,
    ext: &ExternalArithmetic,
) -> Vec<HypothesisRow> {
    let mut rows = Vec::new();
    rows.push(HypothesisRow {
        id: "p_at_least_5",
        statement: "p is a prime >= 5",
        status: if p >= 5 { HypothesisStatus::Pass } else { HypothesisStatus::Fail },
        detail: format!("p = {p}"),
    });
    rows.push(HypothesisRow {
        id: "hyp_I_finite_ramification",
        statement: "only finitely many primes of F ramify in F_infinity",
        status: HypothesisStatus::Pass,
        detail: "ramified places are those in M and those above p".into(),
    });
    rows.push(HypothesisRow {
        id: "hyp_I_cyclotomic_inside",
        statement: "F_infinity contains the cyclotomic Z_p-extension of F",
        status: HypothesisStatus::Pass,
        detail: "automatic by the Weil pairing".into(),
    });
    let threshold = 2 * a.dimension as u64 + 1;
    let (status, detail) = if p > threshold {
        (HypothesisStatus::Pass, format!("p = {p} > 2 dim(A) + 1 = {threshold}"))
    } else if ext.sigma_p_torsion_free {
        (HypothesisStatus::Assumed, format!("p = {p} <= {threshold}; certified by input"))
    } else {
        (HypothesisStatus::Fail, format!("p = {p} <= {threshold} and no certificate supplied"))
    };
    rows.push(HypothesisRow { id: "i_sigma_no_p_torsion", statement: "Sigma has no element of order p", status, detail });

    let describe = |who: &str, d: &PlaceClassData| {
        format!(
            "{who}: {} ({}) at {} place(s) above {p} with e = {}, f = {}",
            d.data.reduction_class, d.data.kodaira, d.splitting.g, d.splitting.e, d.splitting.f
        )
    };
    let mut details = vec![describe("E", e_above_p)];
    let mut ok = e_above_p.data.reduction_class == ReductionClass::GoodOrdinary;
    for (i, d) in factors_above_p.iter().enumerate() {
        details.push(describe(&format!("A factor {}", i + 1), d));
        ok &= d.data.reduction_class == ReductionClass::GoodOrdinary;
    }
    let table_bad_at_p = a
        .reduction_table
        .as_ref()
        .and_then(|t| t.iter().find(|e| e.prime == p))
        .map_or(false, |e| !e.good);
    let status = if !ok || table_bad_at_p {
        if table_bad_at_p {
            details.push(format!("A: reduction table marks {p} as bad"));
        }
        HypothesisStatus::Fail
    } else if factors_above_p.is_empty() {
        details.push("A: ordinarity above p taken from the reduction table".into());
        HypothesisStatus::Assumed
    } else {
        HypothesisStatus::Pass
    };
    rows.push(HypothesisRow {
        id: "ii_good_ordinary_above_p",
        statement: "A and E have good ordinary reduction at every prime of F above p",
        status,
        detail: details.join("; "),
    });
    rows.push(HypothesisRow {
        id: "iii_selmer_finite",
        statement: "Sel(E/F) is finite",
        status: certified(ext.selmer_finite),
        detail: if ext.selmer_finite { "certified by input".into() } else { "no certificate supplied".into() },
    });
    rows.push(HypothesisRow {
        id: "iv_lambda_torsion",
        statement: "the dual Selmer group over F_infinity is Lambda(Sigma)-torsion",
        status: certified(ext.lambda_torsion_certificate),
        detail: if ext.lambda_torsion_certificate { "certified by input".into() } else { "no certificate supplied".into() },
    });
    rows
}

/// Exponent pieces of rho_p = p^k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoDecomposition {
    pub sha: i64,
    /// -2 vp(#E(F)(p)); an interval when torsion is not exact.
    pub torsion: (i64, i64),
    pub tamagawa: i64,
    pub reduction_above_p: i64,
    pub tamagawa_by_prime: BTreeMap<u64, i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoReport {
    pub exact: bool,
    pub exponent: Option<i64>,
    pub interval: (i64, i64),
    pub decomposition: RhoDecomposition,
}

/// k with rho_p = p^k from the local data of E at every bad place and every
/// place above p. Places inside one class are counted g times.
pub fn rho_p(
    p: u64,
    places: &BTreeMap<u64, PlaceClassData>,
    torsion: &TorsionEstimate,
    ext: &ExternalArithmetic,
) -> Result<RhoReport, SelmerError> {
    let sha = int_val(&ext.sha_p_order, p);
    let mut tamagawa_by_prime = BTreeMap::new();
    let mut reduction_above_p = 0;
    for (&l, d) in places {
        let g = d.splitting.g as i64;
        let c = g * int_val(&BigInt::from(d.data.c_v), p);
        if c != 0 || d.data.c_v > 1 {
            tamagawa_by_prime.insert(l, c);
        }
        if l == p {
            let n = d.data.n_v.as_ref().ok_or_else(|| {
                SelmerError::Tate(TateError::InvariantViolated(format!("no good reduction above {p}")))
            })?;
            reduction_above_p += 2 * g * int_val(n, p);
        }
    }
    let tamagawa: i64 = tamagawa_by_prime.values().sum();
    let (t_lo, t_hi, exact) = match &ext.torsion_p_override {
        Some(t) => {
            let k = int_val(t, p);
            (k, k, true)
        }
        None => (torsion.lower_exponent(), torsion.upper_exponent(), torsion.exact),
    };
    let base = sha + tamagawa + reduction_above_p;
    let interval = (base - 2 * t_hi, base - 2 * t_lo);
    Ok(RhoReport {
        exact,
        exponent: exact.then_some(interval.0),
        interval,
        decomposition: RhoDecomposition {
            sha,
            torsion: (-2 * t_hi, -2 * t_lo),
            tamagawa,
            reduction_above_p,
            tamagawa_by_prime,
        },
    })
}

/// One place of M in the Euler-factor audit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditRow {
    pub place: PlaceLabel,
    pub reduction_class: ReductionClass,
    pub kodaira: String,
    #[serde(serialize_with = "opt_bigint_str")]
    pub n_v: Option<BigInt>,
    #[serde(serialize_with = "rational_str")]
    pub l_at_1: Rational,
    /// Exponent k with |L_v(E,1)|_p = p^k.
    pub abs_p_exponent: i64,
}

/// chi_cyc = rho and chi_Sigma = rho + sum over M of the |L_v(E,1)|_p exponents.
pub fn chi_euler(rho_exponent: i64, audit: &[AuditRow]) -> (i64, i64) {
    let extra: i64 = audit.iter().map(|r| r.abs_p_exponent).sum();
    (rho_exponent, rho_exponent + extra)
}

pub fn audit_rows(p: u64, m_places: &[PlaceLabel], data: &BTreeMap<u64, PlaceClassData>) -> Vec<AuditRow> {
    m_places
        .iter()
        .map(|label| {
            let d = &data[&label.ell].data;
            AuditRow {
                place: *label,
                reduction_class: d.reduction_class,
                kodaira: d.kodaira.to_string(),
                n_v: d.n_v.clone(),
                l_at_1: d.l_at_1.clone(),
                abs_p_exponent: d.l_abs_exponent(p),
            }
        })
        .collect()
}

/// Sum of [F_v : Q_p] over places above p when E is potentially
/// supersingular at p, else 0.
pub fn tau_p(model: &WeierstrassModel, p: u64, m: u64) -> Result<u64, SelmerError> {
    match pot_supersingular(model, p) {
        Ok(true) => {
            let s = splitting(p, m).map_err(CurveError::from)?;
            Ok(s.g * s.local_degree())
        }
        Ok(false) | Err(TateError::PotentiallyMultiplicative(_)) => Ok(0),
        Err(e) => Err(e.into()),
    }
}

/// Exponent k with #ker(gamma_v) = p^k at a place v not above p.
pub fn gamma_kernel_order(e_data: &LocalReductionData, a_potentially_good: bool, p: u64) -> Result<i64, SelmerError> {
    if e_data.place.ell == p {
        return Err(SelmerError::PlaceAboveP(p));
    }
    let c = int_val(&BigInt::from(e_data.c_v), p);
    Ok(match (a_potentially_good, e_data.potentially_good) {
        (true, true) => 0,
        (true, false) => c,
        (false, _) => c + e_data.l_abs_exponent(p),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorankPredictions {
    pub global_h1: u64,
    pub local_sum: u64,
    pub conjectural_rank: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorankReport {
    pub window: (u64, u64),
    pub pinned: bool,
    pub predictions: Option<CorankPredictions>,
}

pub fn corank_report(field_degree: u64, tau: u64, sigma_index_r: Option<u64>) -> CorankReport {
    CorankReport {
        window: (tau, field_degree),
        pinned: tau == field_degree,
        predictions: sigma_index_r.map(|s| CorankPredictions {
            global_h1: s * field_degree,
            local_sum: s * (field_degree - tau),
            conjectural_rank: s * tau,
        }),
    }
}

/// Per-place emission of one class of places.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceEntry {
    pub place: PlaceLabel,
    pub data: LocalReductionData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaRow {
    pub place: PlaceLabel,
    pub a_potentially_good: bool,
    pub kernel_exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiReport {
    pub base: u64,
    pub chi_cyc_exponent: Option<i64>,
    pub chi_sigma_exponent: Option<i64>,
    pub m_contribution: i64,
    pub suppressed_reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpectedComparison {
    pub chi_sigma_exponent: i64,
    pub computed: Option<i64>,
    pub matches: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReportStatus {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "HYPOTHESIS-FAIL")]
    HypothesisFail,
    #[serde(rename = "NOT-EXACT")]
    NotExact,
}

impl ReportStatus {
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportStatus::Ok => 0,
            ReportStatus::HypothesisFail => 2,
            ReportStatus::NotExact => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EulerCharReport {
    pub schema_version: u32,
    pub curve: [String; 5],
    pub prime: u64,
    pub conductor: u64,
    pub field_degree: u64,
    pub status: ReportStatus,
    pub hypotheses: Vec<HypothesisRow>,
    pub m_rational: BTreeSet<u64>,
    pub m_places: Vec<PlaceLabel>,
    pub ramified_places: Vec<PlaceLabel>,
    pub places: Vec<PlaceEntry>,
    pub torsion: Option<TorsionEstimate>,
    pub rho: Option<RhoReport>,
    pub chi: ChiReport,
    pub audit: Vec<AuditRow>,
    pub tau_p: u64,
    pub corank: CorankReport,
    pub gamma_kernels: Vec<GammaRow>,
    pub expected: Option<ExpectedComparison>,
}

impl EulerCharReport {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalysisInput {
    pub curve: WeierstrassModel,
    pub p: u64,
    pub m: u64,
    pub abelian_variety: AbelianVarietyInput,
    pub external: ExternalArithmetic,
    pub samples: usize,
    pub precision_digits: Option<i64>,
    pub expected_chi_sigma_exponent: Option<i64>,
}

pub const DEFAULT_SAMPLES: usize = 20;

/// The full pipeline for one (E, A, p, F = Q(mu_m)).
pub fn analyze(input: &AnalysisInput) -> Result<EulerCharReport, SelmerError> {
    let AnalysisInput { curve, p, m, abelian_variety: a, external: ext, .. } = input;
    let (p, m) = (*p, *m);
    if !is_prime(p) {
        return Err(SelmerError::NotPrime(p));
    }
    if m == 0 {
        return Err(SelmerError::BadConductor);
    }
    ext.validate(p)?;
    let (m_rational, m_places) = compute_m(a, p, m)?;
    let ramified = ramified_places(a, p, m)?;

    let model = curve.integral_model();
    let mut primes: BTreeSet<u64> = model.bad_primes().into_iter().collect();
    primes.extend(m_rational.iter().copied());
    primes.insert(p);
    let data = local_data(&model, &primes, m, input.precision_digits)?;
    let factors_above_p: Vec<PlaceClassData> = a
        .factors
        .par_iter()
        .map(|f| place_class(f, p, m, input.precision_digits))
        .collect::<Result<_, _>>()?;

    let hypotheses = check_hypotheses(&data[&p], &factors_above_p, a, p, ext);
    let failed = hypotheses.iter().any(|h| h.status == HypothesisStatus::Fail);

    let places: Vec<PlaceEntry> = data
        .values()
        .flat_map(|d| expand_places(&d.splitting).into_iter().map(move |place| PlaceEntry { place, data: d.data.clone() }))
        .collect();

    let mut suppressed: Option<String> = None;
    let torsion = if p >= 3 {
        match torsion_bound_over_f(&model, p, m, input.samples, ext.torsion_p_override.as_ref()) {
            Ok(t) => Some(t),
            Err(e) => {
                suppressed = Some(format!("torsion bound unavailable: {e}"));
                None
            }
        }
    } else {
        suppressed = Some("torsion bounds need an odd prime".into());
        None
    };
    let rho = match &torsion {
        Some(t) => match rho_p(p, &data, t, ext) {
            Ok(r) => Some(r),
            Err(e) => {
                suppressed = Some(format!("rho_p undefined: {e}"));
                None
            }
        },
        None => None,
    };
    let audit = audit_rows(p, &m_places, &data);
    let m_contribution: i64 = audit.iter().map(|r| r.abs_p_exponent).sum();
    let (chi_cyc, chi_sigma) = match &rho {
        Some(RhoReport { exponent: Some(k), .. }) => {
            let (c, s) = chi_euler(*k, &audit);
            (Some(c), Some(s))
        }
        Some(r) => {
            suppressed = Some(format!(
                "torsion over F not exact: rho exponent lies in [{}, {}]",
                r.interval.0, r.interval.1
            ));
            (None, None)
        }
        None => (None, None),
    };
    let not_exact = chi_sigma.is_none();

    let tau = tau_p(&model, p, m)?;
    let degree = field_degree(m);
    let corank = corank_report(degree, tau, ext.sigma_index_r);

    let mut gamma_kernels = Vec::new();
    for (&l, d) in &data {
        if l == p {
            continue;
        }
        let a_pot_good = a.potentially_good_at(l);
        let k = gamma_kernel_order(&d.data, a_pot_good, p)?;
        for place in expand_places(&d.splitting) {
            gamma_kernels.push(GammaRow { place, a_potentially_good: a_pot_good, kernel_exponent: k });
        }
    }

    let status = if failed {
        ReportStatus::HypothesisFail
    } else if not_exact {
        ReportStatus::NotExact
    } else {
        ReportStatus::Ok
    };
    Ok(EulerCharReport {
        schema_version: 1,
        curve: curve.to_strings(),
        prime: p,
        conductor: m,
        field_degree: degree,
        status,
        hypotheses,
        m_rational,
        m_places,
        ramified_places: ramified,
        places,
        torsion,
        rho,
        chi: ChiReport {
            base: p,
            chi_cyc_exponent: chi_cyc,
            chi_sigma_exponent: chi_sigma,
            m_contribution,
            suppressed_reason: if not_exact { suppressed } else { None },
        },
        audit,
        tau_p: tau,
        corank,
        gamma_kernels,
        expected: input.expected_chi_sigma_exponent.map(|x| ExpectedComparison {
            chi_sigma_exponent: x,
            computed: chi_sigma,
            matches: chi_sigma == Some(x),
        }),
    })
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

/// Big integers as decimal strings; bare JSON integers are accepted on input.
pub(crate) mod bigint_decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    pub(crate) enum IntOrString {
        Int(i64),
        Str(String),
    }

    impl IntOrString {
        pub(crate) fn into_bigint<E: Error>(self) -> Result<BigInt, E> {
            match self {
                IntOrString::Int(i) => Ok(BigInt::from(i)),
                IntOrString::Str(s) => s.trim().parse().map_err(|_| E::custom(format!("invalid integer {s:?}"))),
            }
        }
    }

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        IntOrString::deserialize(d)?.into_bigint()
    }
}

pub(crate) mod opt_bigint_decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    use super::bigint_decimal::IntOrString;

    pub fn serialize<S: Serializer>(n: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
        match n {
            Some(n) => s.collect_str(n),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigInt>, D::Error> {
        Option::<IntOrString>::deserialize(d)?.map(IntOrString::into_bigint).transpose()
    }
}
