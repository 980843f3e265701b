//! Exhaustive and randomized checks of the hashing and Gallager-function
//! inequalities, reported as pass/fail with the worst margin seen.
//!
//! Margins are signed slack: positive means the inequality holds with room
//! to spare, negative is a violation.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hashing::{
    collision_report, enumerate_bijections, group_order, pa_bound_sides_over, BinaryMatrix,
    LinearBijection, MessageLayout, Projection, MAX_ENUMERATION_DIM,
};
use crate::prob::{mutual_information, phi, psi, FiniteConditional, FiniteDistribution, Rho};

/// Float slack allowed on exact inequalities.
pub const EXACT_SLACK: f64 = 1e-12;
/// Slack on midpoint concavity of `exp φ`.
pub const CONCAVITY_SLACK: f64 = 1e-10;
/// Probe `ρ` and tolerance for `φ(ρ)/ρ ≈ I(L;Z)`.
pub const SLOPE_PROBE: f64 = 1e-4;
pub const SLOPE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    TwoUniversality,
    PaBound,
    PsiPhi,
    PhiSlope,
    Concavity,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::TwoUniversality,
        Suite::PaBound,
        Suite::PsiPhi,
        Suite::PhiSlope,
        Suite::Concavity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TwoUniversality => "two_universality",
            Suite::PaBound => "pa_bound",
            Suite::PsiPhi => "psi_phi",
            Suite::PhiSlope => "phi_slope",
            Suite::Concavity => "concavity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Hash dimensions for the privacy-amplification trials.
    pub pa_dims: Vec<usize>,
    /// Projected bits `log2 |M|` for the privacy-amplification trials.
    pub pa_message_bits: Vec<usize>,
    pub pa_channels: usize,
    pub pa_rhos: Vec<f64>,
    pub gallager_trials: usize,
    /// Test hook: replace one member of every enumerated hash family with
    /// the zero matrix.
    pub inject_singular_hash: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            pa_dims: vec![2, 3],
            pa_message_bits: vec![1, 2],
            pa_channels: 100,
            pa_rhos: vec![0.1, 0.5, 1.0],
            gallager_trials: 1000,
            inject_singular_hash: false,
        }
    }
}

/// One exhaustively checked projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollisionCase {
    pub dim: usize,
    /// Selected bit positions, 0 = most significant.
    pub bits: Vec<usize>,
    pub colliding: u64,
    pub family_size: u64,
    pub max_probability: f64,
    pub bound: f64,
    pub attains_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    pub worst_margin: f64,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub collisions: Vec<CollisionCase>,
}

impl SuiteReport {
    fn from_margins(suite: Suite, margins: &[f64], notes: Vec<String>) -> Self {
        // a NaN margin counts as a failure
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        let failures = margins.iter().filter(|m| !(**m >= 0.0)).count();
        Self {
            suite,
            passed: failures == 0 && !margins.is_empty(),
            cases: margins.len(),
            failures,
            worst_margin: margins.iter().copied().fold(f64::INFINITY, f64::min),
            notes,
            collisions: Vec::new(),
        }
    }
}

fn family(l: usize, inject_singular: bool) -> Result<Vec<BinaryMatrix>> {
    let mut fam: Vec<BinaryMatrix> = enumerate_bijections(l)?.into_iter().map(BinaryMatrix::from).collect();
    if inject_singular {
        fam[0] = BinaryMatrix::zero(l)?;
    }
    Ok(fam)
}

/// Every nonempty set of bit positions for `l <= 4`, against the full group
/// of invertible matrices. Also checks the family itself (size equals the
/// group order, every member invertible) and records which projections
/// attain the bound.
pub fn two_universality(cfg: &VerifyConfig) -> Result<SuiteReport> {
    let mut margins = Vec::new();
    let mut notes = Vec::new();
    let mut collisions = Vec::new();
    for l in 1..=MAX_ENUMERATION_DIM {
        let fam = family(l, cfg.inject_singular_hash)?;
        let singular = fam.iter().filter(|m| !m.is_invertible()).count();
        if singular > 0 {
            notes.push(format!("l={l}: {singular} non-invertible family member(s)"));
            margins.push(-(singular as f64));
        }
        if fam.len() as u128 != group_order(l) {
            notes.push(format!("l={l}: family size {} != |GL| = {}", fam.len(), group_order(l)));
            margins.push(-1.0);
        }
        // one-bit segments make every bit subset a projection
        let layout = MessageLayout::new(vec![1; l], 0)?;
        for subset in 1u32..1 << l {
            let bits: Vec<usize> = (0..l).filter(|i| subset >> i & 1 == 1).collect();
            let proj = Projection::new(layout.clone(), bits.clone())?;
            let r = collision_report(&fam, &proj)?;
            margins.push(if r.within_bound() {
                r.bound() - r.max_probability()
            } else {
                (r.bound() - r.max_probability()).min(-f64::MIN_POSITIVE)
            });
            collisions.push(CollisionCase {
                dim: l,
                bits,
                colliding: r.colliding,
                family_size: r.family_size,
                max_probability: r.max_probability(),
                bound: r.bound(),
                attains_bound: r.attains_bound(),
            });
        }
    }
    let attained = collisions.iter().filter(|c| c.attains_bound).count();
    notes.push(format!("bound attained by {attained} of {} projections", collisions.len()));
    let mut report = SuiteReport::from_margins(Suite::TwoUniversality, &margins, notes);
    report.collisions = collisions;
    Ok(report)
}

/// Privacy amplification over the full group: for each dimension, message
/// size, random eavesdropper channel and `ρ`, the exact left side must not
/// exceed the right side beyond [`EXACT_SLACK`].
pub fn pa_bound(cfg: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    let rhos = cfg.pa_rhos.iter().map(|&r| Rho::new(r)).collect::<Result<Vec<_>>>()?;
    let mut margins = Vec::new();
    for &l in &cfg.pa_dims {
        let fam: Vec<LinearBijection> = family(l, cfg.inject_singular_hash)?
            .into_iter()
            .map(LinearBijection::new)
            .collect::<Result<_>>()?;
        let input = FiniteDistribution::uniform(1 << l)?;
        for &m in &cfg.pa_message_bits {
            if m > l {
                continue;
            }
            let layout = MessageLayout::new(vec![m], l - m)?;
            let proj = Projection::all_secret(layout);
            let trial = |i: usize| -> Result<Vec<f64>> {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(((l as u64) << 40) | ((m as u64) << 32) | i as u64);
                let outputs = rng.gen_range(2..=4);
                let ch = FiniteConditional::random(&mut rng, 1 << l, outputs)?;
                rhos.iter()
                    .map(|&rho| {
                        let s = pa_bound_sides_over(&fam, rho, &proj, &input, &ch)?;
                        Ok(s.rhs + EXACT_SLACK - s.lhs)
                    })
                    .collect()
            };
            for r in exec.map_indices(cfg.pa_channels, trial) {
                margins.extend(r?);
            }
        }
    }
    Ok(SuiteReport::from_margins(Suite::PaBound, &margins, Vec::new()))
}

/// A random `(channel, input)` pair with alphabets of 2 to 5 symbols.
fn random_instance(rng: &mut ChaCha8Rng) -> Result<(FiniteConditional, FiniteDistribution)> {
    let inputs = rng.gen_range(2..=5);
    let outputs = rng.gen_range(2..=5);
    Ok((
        FiniteConditional::random(rng, inputs, outputs)?,
        FiniteDistribution::random(rng, inputs)?,
    ))
}

fn gallager_trials<F>(cfg: &VerifyConfig, stream: u64, exec: Execution, check: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng, &FiniteConditional, &FiniteDistribution) -> Result<f64> + Sync + Send,
{
    exec.map_indices(cfg.gallager_trials, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream((stream << 32) | i as u64);
        let (ch, input) = random_instance(&mut rng)?;
        check(&mut rng, &ch, &input)
    })
    .into_iter()
    .collect()
}

fn open_rho(rng: &mut ChaCha8Rng, hi: f64) -> Result<Rho> {
    // (0, hi): gen::<f64>() lies in [0, 1)
    Rho::new(hi * (1.0 - rng.gen::<f64>()).min(1.0 - 1e-9))
}

/// `ψ(ρ) <= φ(ρ)` at random `ρ ∈ (0, 1)`.
pub fn psi_phi(cfg: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    let margins = gallager_trials(cfg, 1, exec, |rng, ch, input| {
        let rho = open_rho(rng, 1.0)?;
        Ok(phi(rho, ch, input)? - psi(rho, ch, input)? + EXACT_SLACK)
    })?;
    Ok(SuiteReport::from_margins(Suite::PsiPhi, &margins, Vec::new()))
}

/// `|φ(ρ)/ρ - I(L;Z)| <= 1e-3` at `ρ = 1e-4`.
pub fn phi_slope(cfg: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    let margins = gallager_trials(cfg, 2, exec, |_, ch, input| {
        let slope = phi(Rho::new(SLOPE_PROBE)?, ch, input)? / SLOPE_PROBE;
        let mi = mutual_information(&ch.joint(input)?, &[0], &[1])?;
        Ok(SLOPE_TOLERANCE - (slope - mi).abs())
    })?;
    Ok(SuiteReport::from_margins(Suite::PhiSlope, &margins, Vec::new()))
}

/// Midpoint concavity of `P_L ↦ exp φ(ρ, P_{Z|L}, P_L)`: a random second
/// input `q` and random `ρ ∈ (0, 1)` per trial.
pub fn concavity(cfg: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    let margins = gallager_trials(cfg, 3, exec, |rng, ch, p| {
        let q = FiniteDistribution::random(rng, p.alphabet_size())?;
        let rho = open_rho(rng, 1.0)?;
        let e = |x: &FiniteDistribution| -> Result<f64> { Ok(phi(rho, ch, x)?.exp()) };
        Ok(e(&p.mix(&q, 0.5)?)? - 0.5 * (e(p)? + e(&q)?) + CONCAVITY_SLACK)
    })?;
    Ok(SuiteReport::from_margins(Suite::Concavity, &margins, Vec::new()))
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig, exec: Execution) -> Result<SuiteReport> {
    match suite {
        Suite::TwoUniversality => two_universality(cfg),
        Suite::PaBound => pa_bound(cfg, exec),
        Suite::PsiPhi => psi_phi(cfg, exec),
        Suite::PhiSlope => phi_slope(cfg, exec),
        Suite::Concavity => concavity(cfg, exec),
    }
}

pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig, exec: Execution) -> Result<Vec<SuiteReport>> {
    suites.iter().map(|&s| run_suite(s, cfg, exec)).collect()
}
