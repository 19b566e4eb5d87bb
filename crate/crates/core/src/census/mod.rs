//! Brute-force census of the three families: the singular locus of every
//! curve away from `P`, summarized by exact-degree Frobenius orbits and
//! histogrammed by partition.
//!
//! Two strategies compute the same profile. [`scan::Scanner`] tests one
//! point per orbit; [`eliminate::Eliminator`] projects from `P`. The checked
//! strategy runs both and fails on the first disagreement.

pub mod eliminate;
pub mod poly;
pub mod scan;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::combinat::{self, Partition};
use crate::ff::FieldError;
use crate::par::Exec;
use crate::plane::{Family, FamilyKind, PlaneError, QuinticForm};
use crate::symbolic;

use eliminate::Eliminator;
use scan::Scanner;

/// Profiles record exact-degree orbits up to this degree.
pub const MAX_PROFILE_DEGREE: u32 = 9;
/// A reduced quintic has at most nine singular points besides `P`.
pub const WEIGHT_BUDGET: u64 = 9;
pub const CHECKPOINT_VERSION: u32 = 1;
pub const DEFAULT_BLOCK: u64 = 4096;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("i/o error on {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("checkpoint {path} does not match this run: {detail}")]
    CheckpointMismatch { path: PathBuf, detail: String },
    #[error("curve {index}: strategies disagree (scan {scan}, eliminate {eliminate})")]
    StrategyMismatch { index: u64, scan: SingularProfile, eliminate: SingularProfile },
    #[error("census results are inconsistent: {0}")]
    Inconsistent(String),
    #[error("trigonal count {0} is not an integer")]
    NonIntegral(BigRational),
}

fn io_err(path: &Path, e: std::io::Error) -> CensusError {
    CensusError::Io { path: path.to_path_buf(), message: e.to_string() }
}

/// Exact-degree orbit counts of a singular locus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OrbitCounts {
    /// `m[d]` for `d = 1..=9`; index 0 is unused.
    pub m: [u64; MAX_PROFILE_DEGREE as usize + 1],
    /// Weight carried by points of degree above 9.
    pub beyond: u64,
    /// Every orbit of degree at most this has been counted.
    pub complete_through: u32,
}

impl OrbitCounts {
    pub fn add(&mut self, degree: u32, n: u64) {
        if degree <= MAX_PROFILE_DEGREE {
            self.m[degree as usize] += n;
        } else {
            self.beyond += degree as u64 * n;
        }
    }

    pub fn add_beyond(&mut self, weight: u64) {
        self.beyond += weight;
    }

    pub fn weight(&self) -> u64 {
        self.m.iter().enumerate().map(|(d, &n)| d as u64 * n).sum::<u64>() + self.beyond
    }

    /// `m_1, ..., m_5`.
    pub fn low(&self) -> [u64; 5] {
        [self.m[1], self.m[2], self.m[3], self.m[4], self.m[5]]
    }
}

/// Early-exit policy for profiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Budget {
    /// Count every orbit up to degree 9.
    Full,
    /// Stop once the weight exceeds 9, but never before degree 5 is complete.
    Overflow,
}

impl Budget {
    pub fn stop_within(self, counts: &OrbitCounts, degree: u32) -> bool {
        self == Budget::Overflow && degree > 5 && counts.weight() > WEIGHT_BUDGET
    }

    pub fn stop_after(self, counts: &OrbitCounts, degree: u32) -> bool {
        self == Budget::Overflow && degree >= 5 && counts.weight() > WEIGHT_BUDGET
    }
}

/// The singular points of a curve other than `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularProfile {
    /// Exactly a `λ`-tuple, `|λ| <= 9`.
    Finite(Partition),
    /// More than nine points; `m_1..m_5` are exact.
    Overflow([u64; 5]),
}

impl SingularProfile {
    pub fn from_counts(counts: &OrbitCounts, infinite: bool) -> SingularProfile {
        if infinite || counts.weight() > WEIGHT_BUDGET {
            SingularProfile::Overflow(counts.low())
        } else {
            SingularProfile::Finite(Partition::from_multiplicities(&counts.m[1..]))
        }
    }

    /// Orbit counts of degrees 1 to 5.
    pub fn low_orbits(&self) -> [u64; 5] {
        match self {
            SingularProfile::Finite(l) => std::array::from_fn(|i| l.multiplicity(i as u32 + 1) as u64),
            SingularProfile::Overflow(m) => *m,
        }
    }
}

impl fmt::Display for SingularProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingularProfile::Finite(l) => write!(f, "{l}"),
            SingularProfile::Overflow(m) => write!(f, "overflow{m:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Scan,
    Eliminate,
    /// Both strategies on every curve, compared.
    Checked,
}

impl Strategy {
    /// Checked at `q = 2`, where scanning is cheap; elimination otherwise.
    pub fn default_for(q: u64) -> Strategy {
        if q == 2 {
            Strategy::Checked
        } else {
            Strategy::Eliminate
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Scan => "scan",
            Strategy::Eliminate => "eliminate",
            Strategy::Checked => "checked",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "scan" => Ok(Strategy::Scan),
            "eliminate" => Ok(Strategy::Eliminate),
            "checked" => Ok(Strategy::Checked),
            other => Err(format!("unknown strategy `{other}` (expected scan, eliminate or checked)")),
        }
    }
}

/// Largest degree whose orbit representatives are precomputed for scanning.
fn scan_precompute_degree(q: u64) -> u32 {
    (1..=MAX_PROFILE_DEGREE).take_while(|&d| (q as f64).powi(2 * d as i32) <= (1u64 << 20) as f64).last().unwrap_or(1)
}

/// Per-curve profiler for a fixed `q` and strategy.
#[derive(Debug, Clone)]
pub struct ProfileEngine {
    strategy: Strategy,
    scanner: Option<Scanner>,
    eliminator: Option<Eliminator>,
}

/// A profile and whether the elimination had to examine every direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileOutcome {
    pub profile: SingularProfile,
    pub fallback: bool,
}

impl ProfileEngine {
    pub fn new(q: u64, strategy: Strategy) -> Result<ProfileEngine, CensusError> {
        let scanner = match strategy {
            Strategy::Scan | Strategy::Checked => Some(Scanner::new(q, scan_precompute_degree(q))?),
            Strategy::Eliminate => None,
        };
        let eliminator = match strategy {
            Strategy::Eliminate | Strategy::Checked => Some(Eliminator::new(q)?),
            Strategy::Scan => None,
        };
        Ok(ProfileEngine { strategy, scanner, eliminator })
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn scanner(&self) -> Option<&Scanner> {
        self.scanner.as_ref()
    }

    pub fn eliminator(&self) -> Option<&Eliminator> {
        self.eliminator.as_ref()
    }

    /// Profile one curve; `index` is only used in error reports.
    pub fn profile(&self, form: &QuinticForm, index: u64) -> Result<ProfileOutcome, CensusError> {
        let scanned = self.scanner.as_ref().map(|s| {
            let counts = s.orbit_counts(form, MAX_PROFILE_DEGREE, Budget::Overflow);
            SingularProfile::from_counts(&counts, false)
        });
        let eliminated = self.eliminator.as_ref().map(|e| {
            let out = e.eliminate(form, Budget::Overflow);
            (SingularProfile::from_counts(&out.counts, out.infinite), out.swept)
        });
        match (scanned, eliminated) {
            (Some(scan), Some((elim, swept))) => {
                if scan != elim {
                    return Err(CensusError::StrategyMismatch { index, scan, eliminate: elim });
                }
                Ok(ProfileOutcome { profile: elim, fallback: swept })
            }
            (Some(scan), None) => Ok(ProfileOutcome { profile: scan, fallback: false }),
            (None, Some((elim, swept))) => Ok(ProfileOutcome { profile: elim, fallback: swept }),
            (None, None) => unreachable!("an engine always has a strategy"),
        }
    }
}

/// Profile a single curve over the prime field `F_q` by elimination.
pub fn singular_profile(form: &QuinticForm, q: u64) -> Result<SingularProfile, CensusError> {
    Ok(ProfileEngine::new(q, Strategy::Eliminate)?.profile(form, 0)?.profile)
}

/// Additive histogram of profiles.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Histogram {
    pub profiles: BTreeMap<Partition, u64>,
    pub overflow: BTreeMap<[u64; 5], u64>,
    pub fallbacks: u64,
}

impl Histogram {
    pub fn record(&mut self, outcome: &ProfileOutcome) {
        match &outcome.profile {
            SingularProfile::Finite(l) => *self.profiles.entry(l.clone()).or_default() += 1,
            SingularProfile::Overflow(m) => *self.overflow.entry(*m).or_default() += 1,
        }
        self.fallbacks += outcome.fallback as u64;
    }

    pub fn merge(&mut self, other: &Histogram) {
        for (l, c) in &other.profiles {
            *self.profiles.entry(l.clone()).or_default() += c;
        }
        for (m, c) in &other.overflow {
            *self.overflow.entry(*m).or_default() += c;
        }
        self.fallbacks += other.fallbacks;
    }

    pub fn total(&self) -> u64 {
        self.profiles.values().sum::<u64>() + self.overflow.values().sum::<u64>()
    }

    fn profile_list(&self) -> Vec<ProfileCount> {
        self.profiles.iter().map(|(l, &c)| ProfileCount { lambda: l.clone(), count: c }).collect()
    }

    fn overflow_list(&self) -> Vec<OverflowCount> {
        self.overflow.iter().map(|(m, &c)| OverflowCount { m_low: *m, count: c }).collect()
    }

    fn from_lists(profiles: &[ProfileCount], overflow: &[OverflowCount], fallbacks: u64) -> Histogram {
        Histogram {
            profiles: profiles.iter().map(|p| (p.lambda.clone(), p.count)).collect(),
            overflow: overflow.iter().map(|o| (o.m_low, o.count)).collect(),
            fallbacks,
        }
    }
}

/// Profile the curves with indices in `range`.
pub fn profile_range(
    family: &Family,
    engine: &ProfileEngine,
    range: std::ops::Range<u64>,
) -> Result<Histogram, CensusError> {
    let mut hist = Histogram::default();
    let mut coeffs = [0u32; 21];
    for idx in range {
        family.decode_into(idx, &mut coeffs);
        let form = QuinticForm { coeffs, family: Some(family.kind()) };
        hist.record(&engine.profile(&form, idx)?);
    }
    Ok(hist)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCount {
    pub lambda: Partition,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverflowCount {
    pub m_low: [u64; 5],
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusMeta {
    pub threads: usize,
    pub block: u64,
    /// SHA-256 of the canonical JSON of `(family, q, total, profiles, overflow)`.
    pub checksum: String,
    pub strategy: Strategy,
    /// Curves for which every direction through `P` had to be examined.
    pub fallbacks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent: Option<(u32, u32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusResult {
    pub family: FamilyKind,
    pub q: u64,
    pub total: u64,
    pub profiles: Vec<ProfileCount>,
    pub overflow: Vec<OverflowCount>,
    pub meta: CensusMeta,
}

fn checksum(family: FamilyKind, q: u64, total: u64, profiles: &[ProfileCount], overflow: &[OverflowCount]) -> String {
    let body = serde_json::to_string(&(family, q, total, profiles, overflow)).expect("histogram serializes");
    hex::encode(Sha256::digest(body.as_bytes()))
}

impl CensusResult {
    fn build(family: &Family, hist: &Histogram, threads: usize, block: u64, strategy: Strategy) -> CensusResult {
        let profiles = hist.profile_list();
        let overflow = hist.overflow_list();
        let total = hist.total();
        let q = family.q() as u64;
        let checksum = checksum(family.kind(), q, total, &profiles, &overflow);
        let tangent = (family.kind() == FamilyKind::NonSplit).then(|| family.tangent_pair());
        CensusResult {
            family: family.kind(),
            q,
            total,
            profiles,
            overflow,
            meta: CensusMeta { threads, block, checksum, strategy, fallbacks: hist.fallbacks, tangent },
        }
    }

    /// `|C(P, λ)|`, zero for partitions that never occurred.
    pub fn count(&self, lambda: &Partition) -> u64 {
        self.profiles.iter().find(|p| &p.lambda == lambda).map_or(0, |p| p.count)
    }

    /// `|C(P, [])|`: curves smooth away from `P`.
    pub fn smooth_count(&self) -> u64 {
        self.count(&Partition::empty())
    }

    pub fn overflow_total(&self) -> u64 {
        self.overflow.iter().map(|o| o.count).sum()
    }

    /// Check totals and the stored checksum.
    pub fn validate(&self) -> Result<(), CensusError> {
        let sum: u64 = self.profiles.iter().map(|p| p.count).sum::<u64>() + self.overflow_total();
        if sum != self.total {
            return Err(CensusError::Inconsistent(format!("histogram sums to {sum}, total is {}", self.total)));
        }
        let expected = checksum(self.family, self.q, self.total, &self.profiles, &self.overflow);
        if expected != self.meta.checksum {
            return Err(CensusError::Inconsistent("checksum does not match the histogram".into()));
        }
        if self.profiles.iter().any(|p| p.lambda.weight() > WEIGHT_BUDGET) {
            return Err(CensusError::Inconsistent("a finite profile exceeds weight 9".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("census result serializes")
    }

    pub fn from_json(text: &str) -> Result<CensusResult, CensusError> {
        let r: CensusResult = serde_json::from_str(text)?;
        r.validate()?;
        Ok(r)
    }

    pub fn load(path: &Path) -> Result<CensusResult, CensusError> {
        let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        CensusResult::from_json(&text)
    }
}

/// Progress callback: `(blocks done, blocks total)`.
pub type ProgressFn = Arc<dyn Fn(u64, u64) + Send + Sync>;

#[derive(Clone)]
pub struct CensusOptions {
    pub exec: Exec,
    pub block: u64,
    pub checkpoint: Option<PathBuf>,
    pub strategy: Option<Strategy>,
    pub progress: Option<ProgressFn>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { exec: Exec::default(), block: DEFAULT_BLOCK, checkpoint: None, strategy: None, progress: None }
    }
}

impl fmt::Debug for CensusOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CensusOptions")
            .field("exec", &self.exec)
            .field("block", &self.block)
            .field("checkpoint", &self.checkpoint)
            .field("strategy", &self.strategy)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    family: FamilyKind,
    q: u64,
    tangent: (u32, u32),
    block: u64,
    strategy: Strategy,
    next_block: u64,
    profiles: Vec<ProfileCount>,
    overflow: Vec<OverflowCount>,
    fallbacks: u64,
}

impl Checkpoint {
    fn matches(&self, family: &Family, block: u64, strategy: Strategy) -> Result<(), String> {
        if self.version != CHECKPOINT_VERSION {
            return Err(format!("version {} (expected {CHECKPOINT_VERSION})", self.version));
        }
        if self.family != family.kind() || self.q != family.q() as u64 || self.tangent != family.tangent_pair() {
            return Err(format!(
                "family {} over F_{} (expected {} over F_{})",
                self.family,
                self.q,
                family.kind(),
                family.q()
            ));
        }
        if self.block != block {
            return Err(format!("block size {} (expected {block})", self.block));
        }
        if self.strategy != strategy {
            return Err(format!("strategy {} (expected {strategy})", self.strategy));
        }
        Ok(())
    }

    fn write(&self, path: &Path) -> Result<(), CensusError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?).map_err(|e| io_err(&tmp, e))?;
        fs::rename(&tmp, path).map_err(|e| io_err(path, e))
    }
}

/// Profile every curve of `family`.
///
/// Blocks of `options.block` consecutive indices are processed in batches and
/// merged in block order. With a checkpoint path, the merged histogram and the
/// next block are saved after every batch and picked up again on restart.
pub fn run_census(family: &Family, options: &CensusOptions) -> Result<CensusResult, CensusError> {
    let q = family.q() as u64;
    let strategy = options.strategy.unwrap_or_else(|| Strategy::default_for(q));
    let block = options.block.max(1);
    let engine = ProfileEngine::new(q, strategy)?;
    let size = family.size();
    let blocks = size.div_ceil(block);
    let (mut hist, mut next) = match &options.checkpoint {
        Some(path) if path.exists() => {
            let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            let cp: Checkpoint = serde_json::from_str(&text)?;
            cp.matches(family, block, strategy)
                .map_err(|detail| CensusError::CheckpointMismatch { path: path.clone(), detail })?;
            (Histogram::from_lists(&cp.profiles, &cp.overflow, cp.fallbacks), cp.next_block.min(blocks))
        }
        _ => (Histogram::default(), 0),
    };
    let threads = options.exec.effective_threads();
    let batch = (threads as u64 * 4).max(1);
    while next < blocks {
        let end = (next + batch).min(blocks);
        let parts = options.exec.map((end - next) as usize, |i| {
            let b = next + i as u64;
            profile_range(family, &engine, b * block..((b + 1) * block).min(size))
        });
        for part in parts {
            hist.merge(&part?);
        }
        next = end;
        if let Some(path) = &options.checkpoint {
            let cp = Checkpoint {
                version: CHECKPOINT_VERSION,
                family: family.kind(),
                q,
                tangent: family.tangent_pair(),
                block,
                strategy,
                next_block: next,
                profiles: hist.profile_list(),
                overflow: hist.overflow_list(),
                fallbacks: hist.fallbacks,
            };
            cp.write(path)?;
        }
        if let Some(progress) = &options.progress {
            progress(next, blocks);
        }
    }
    let result = CensusResult::build(family, &hist, threads, block, strategy);
    if result.total != size {
        return Err(CensusError::Inconsistent(format!("profiled {} curves, family has {size}", result.total)));
    }
    Ok(result)
}

/// `Σ_family |C(P, [])| / |Stab(family)|` over the three families.
pub fn trigonal_count_rational(results: &[CensusResult]) -> Result<BigRational, CensusError> {
    let q = results.first().map(|r| r.q).ok_or_else(|| CensusError::Inconsistent("no census results".into()))?;
    let mut kinds: Vec<FamilyKind> = results.iter().map(|r| r.family).collect();
    kinds.sort_by_key(|k| k.name());
    kinds.dedup();
    if kinds.len() != 3 || results.len() != 3 {
        return Err(CensusError::Inconsistent("need exactly one census per family".into()));
    }
    if results.iter().any(|r| r.q != q) {
        return Err(CensusError::Inconsistent("census results are over different fields".into()));
    }
    let mut total = BigRational::zero();
    for r in results {
        let stab = symbolic::stabilizer_order(r.family).eval_int(q as i64);
        total += BigRational::from_integer(BigInt::from(r.smooth_count())) / stab;
    }
    Ok(total)
}

/// The number of trigonal curves, which must be an integer.
pub fn trigonal_count(results: &[CensusResult]) -> Result<BigInt, CensusError> {
    let value = trigonal_count_rational(results)?;
    if !value.is_integer() {
        return Err(CensusError::NonIntegral(value));
    }
    Ok(value.to_integer())
}

/// `Σ_{|λ| = w} count(λ) σ_5(λ)` over finite profiles, for `6 <= w <= 9`.
pub fn correction_sums(census: &CensusResult, w: u64) -> Option<BigInt> {
    if !(6..=9).contains(&w) {
        return None;
    }
    Some(
        census
            .profiles
            .iter()
            .filter(|p| p.lambda.weight() == w)
            .map(|p| BigInt::from(p.count) * combinat::sigma(&p.lambda, 5))
            .sum(),
    )
}

/// `Σ count(m_low) σ_5(m_low)` over overflow buckets.
pub fn overflow_correction(census: &CensusResult) -> BigInt {
    census.overflow.iter().map(|o| BigInt::from(o.count) * combinat::sigma_truncated(&o.m_low, 5)).sum()
}

/// Census side of the two-way incidence count: the signed number of pairs
/// (curve, weight-`w` tuple of singular points) summed over all curves.
pub fn incidence_total(census: &CensusResult, w: u32) -> BigInt {
    let finite = census.profiles.iter().map(|p| {
        let m: [u64; 5] = std::array::from_fn(|i| p.lambda.multiplicity(i as u32 + 1) as u64);
        BigInt::from(p.count) * combinat::pi_w_from_orbits(&m, w).expect("five orbit counts")
    });
    let overflow = census
        .overflow
        .iter()
        .map(|o| BigInt::from(o.count) * combinat::pi_w_from_orbits(&o.m_low, w).expect("five orbit counts"));
    finite.chain(overflow).sum()
}

/// [`incidence_total`] for `w = 0..=5`.
pub fn incidence_per_weight(census: &CensusResult) -> Vec<i64> {
    (0..=5).map(|w| incidence_total(census, w).to_i64().expect("incidence total fits in i64")).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MasterIdentityReport {
    pub family: FamilyKind,
    pub q: u64,
    pub smooth_count: u64,
    pub sieve_total: i64,
    /// `correction_sums` for `w = 6, 7, 8, 9`.
    pub corrections: Vec<i64>,
    pub overflow_term: i64,
    pub rhs: i64,
    pub pass: bool,
}

/// Check `|C(P, [])| = S + Σ_{6<=w<=9} corrections + overflow σ-terms`.
pub fn master_identity_check(census: &CensusResult, sieve_total: i64) -> MasterIdentityReport {
    let corrections: Vec<i64> =
        (6..=9).map(|w| correction_sums(census, w).and_then(|v| v.to_i64()).expect("correction fits in i64")).collect();
    let overflow_term = overflow_correction(census).to_i64().expect("overflow term fits in i64");
    let rhs = sieve_total + corrections.iter().sum::<i64>() + overflow_term;
    let smooth_count = census.smooth_count();
    MasterIdentityReport {
        family: census.family,
        q: census.q,
        smooth_count,
        sieve_total,
        corrections,
        overflow_term,
        rhs,
        pass: rhs == smooth_count as i64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::monomial_index;

    fn split_form(q: u32, terms: &[(u8, u8, u8, i64)]) -> QuinticForm {
        let mut all = vec![(1, 1, 3, 1)];
        all.extend_from_slice(terms);
        QuinticForm::from_terms(q, &all)
    }

    #[test]
    fn non_reduced_curve_overflows() {
        // x y z^3 alone contains z = 0 three times.
        let f = QuinticForm::from_terms(2, &[(1, 1, 3, 1)]);
        for strategy in [Strategy::Scan, Strategy::Eliminate] {
            let engine = ProfileEngine::new(2, strategy).unwrap();
            assert!(matches!(engine.profile(&f, 0).unwrap().profile, SingularProfile::Overflow(_)));
        }
    }

    #[test]
    fn strategies_agree_on_examples() {
        let engine = ProfileEngine::new(2, Strategy::Checked).unwrap();
        let f = split_form(2, &[(5, 0, 0, 1), (0, 5, 0, 1)]);
        engine.profile(&f, 0).unwrap();
        let scanner = Scanner::new(3, 4).unwrap();
        let eliminator = Eliminator::new(3).unwrap();
        let g = split_form(3, &[(3, 0, 2, 1), (0, 3, 2, 1), (2, 2, 1, 1)]);
        let scanned = scanner.orbit_counts(&g, 6, Budget::Full);
        let eliminated = eliminator.eliminate(&g, Budget::Full).counts;
        assert_eq!(scanned.m[..7], eliminated.m[..7]);
    }

    #[test]
    fn budget_keeps_low_degrees() {
        let mut c = OrbitCounts::default();
        c.add(1, 10);
        assert!(!Budget::Overflow.stop_within(&c, 3));
        assert!(Budget::Overflow.stop_after(&c, 5));
        assert!(!Budget::Full.stop_after(&c, 9));
        c.add(12, 1);
        assert_eq!(c.weight(), 22);
        assert_eq!(monomial_index(1, 1, 3), 13);
    }
}
