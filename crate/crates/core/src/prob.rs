//! Dense probability tables over finite alphabets and the information
//! measures built on them: entropy, (conditional) mutual information and the
//! Gallager-type functionals ψ and φ.
//!
//! All quantities are in nats. Tables are validated on construction
//! (entries nonnegative, total mass 1 within [`SUM_TOLERANCE`]) and are never
//! renormalized behind the caller's back.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed deviation of a probability table's total mass from 1.
pub const SUM_TOLERANCE: f64 = 1e-12;

fn validate(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidProbability { index, value });
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::NotNormalized {
            sum,
            tol: SUM_TOLERANCE,
        });
    }
    Ok(())
}

/// `-Σ p ln p` over a raw table, with `0 ln 0 = 0`.
pub(crate) fn table_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum()
}

/// A probability mass function over `{0, .., alphabet_size - 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FiniteDistribution {
    probs: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        validate(&probs)?;
        Ok(Self { probs })
    }

    /// Tables produced by exact marginalization of validated tables.
    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        debug_assert!(validate(&probs).is_ok());
        Self { probs }
    }

    pub fn uniform(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self {
            probs: vec![1.0 / size as f64; size],
        })
    }

    pub fn point_mass(size: usize, symbol: usize) -> Result<Self> {
        if symbol >= size {
            return Err(Error::IndexOutOfRange {
                index: symbol as u64,
                range: size as u64,
            });
        }
        let mut probs = vec![0.0; size];
        probs[symbol] = 1.0;
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn is_uniform(&self) -> bool {
        let target = 1.0 / self.probs.len() as f64;
        self.probs.iter().all(|p| (p - target).abs() <= SUM_TOLERANCE)
    }

    /// `t * self + (1 - t) * other`.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.probs.len() != other.probs.len() {
            return Err(Error::DimensionMismatch {
                expected: self.probs.len(),
                got: other.probs.len(),
            });
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("mixing weight {t}")));
        }
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| t * p + (1.0 - t) * q)
            .collect();
        Self::new(probs)
    }

    /// Draws a distribution uniformly from the probability simplex.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let weights: Vec<f64> = (0..size)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln())
            .collect();
        let total: f64 = weights.iter().sum();
        Self::new(weights.into_iter().map(|w| w / total).collect())
    }

    /// Inverse-CDF sampling of one symbol.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let target: f64 = rng.gen();
        let mut acc = 0.0;
        for (symbol, &p) in self.probs.iter().enumerate() {
            acc += p;
            if target < acc {
                return symbol;
            }
        }
        // rounding left a sliver of mass above the last cumulative value
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

impl TryFrom<Vec<f64>> for FiniteDistribution {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs)
    }
}

impl From<FiniteDistribution> for Vec<f64> {
    fn from(d: FiniteDistribution) -> Self {
        d.probs
    }
}

/// A stochastic matrix: one output distribution per input symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct FiniteConditional {
    rows: Vec<FiniteDistribution>,
    output_size: usize,
}

impl FiniteConditional {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(FiniteDistribution::new)
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<FiniteDistribution>) -> Result<Self> {
        let output_size = rows.first().ok_or(Error::EmptyAlphabet)?.alphabet_size();
        if let Some(bad) = rows.iter().find(|r| r.alphabet_size() != output_size) {
            return Err(Error::DimensionMismatch {
                expected: output_size,
                got: bad.alphabet_size(),
            });
        }
        Ok(Self { rows, output_size })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let rows = (0..size)
            .map(|i| FiniteDistribution::point_mass(size, i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Binary symmetric channel with crossover probability `flip`.
    pub fn binary_symmetric(flip: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - flip, flip], vec![flip, 1.0 - flip]])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, inputs: usize, outputs: usize) -> Result<Self> {
        let rows = (0..inputs)
            .map(|_| FiniteDistribution::random(rng, outputs))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    pub fn row(&self, input: usize) -> &FiniteDistribution {
        &self.rows[input]
    }

    pub fn rows(&self) -> &[FiniteDistribution] {
        &self.rows
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> f64 {
        self.rows[input].probs[output]
    }

    fn check_input(&self, input: &FiniteDistribution) -> Result<()> {
        if input.alphabet_size() != self.input_size() {
            return Err(Error::DimensionMismatch {
                expected: self.input_size(),
                got: input.alphabet_size(),
            });
        }
        Ok(())
    }

    /// The output law `P_Z(z) = Σ_ℓ P_L(ℓ) P_{Z|L}(z|ℓ)`.
    pub fn output_law(&self, input: &FiniteDistribution) -> Result<FiniteDistribution> {
        self.check_input(input)?;
        let mut out = vec![0.0; self.output_size];
        for (row, &p) in self.rows.iter().zip(input.probs()) {
            for (o, q) in out.iter_mut().zip(row.probs()) {
                *o += p * q;
            }
        }
        Ok(FiniteDistribution::from_raw(out))
    }

    /// Joint law of `(input, output)` as a two-factor table.
    pub fn joint(&self, input: &FiniteDistribution) -> Result<JointDistribution> {
        self.check_input(input)?;
        let mut probs = Vec::with_capacity(self.input_size() * self.output_size);
        for (row, &p) in self.rows.iter().zip(input.probs()) {
            probs.extend(row.probs().iter().map(|q| p * q));
        }
        Ok(JointDistribution::from_raw(
            probs,
            vec![self.input_size(), self.output_size],
        ))
    }

    /// Post-composition `L -> Z -> Z'` with `then: Z -> Z'`.
    pub fn compose(&self, then: &FiniteConditional) -> Result<FiniteConditional> {
        if then.input_size() != self.output_size {
            return Err(Error::DimensionMismatch {
                expected: self.output_size,
                got: then.input_size(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = vec![0.0; then.output_size];
                for (z, &p) in row.probs().iter().enumerate() {
                    for (o, q) in out.iter_mut().zip(then.rows[z].probs()) {
                        *o += p * q;
                    }
                }
                FiniteDistribution::from_raw(out)
            })
            .collect();
        Self::from_rows(rows)
    }
}

impl TryFrom<Vec<Vec<f64>>> for FiniteConditional {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<FiniteConditional> for Vec<Vec<f64>> {
    fn from(c: FiniteConditional) -> Self {
        c.rows.into_iter().map(Vec::from).collect()
    }
}

/// A joint law over a product alphabet, stored row-major (last factor varies
/// fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    probs: Vec<f64>,
    factor_sizes: Vec<usize>,
}

impl JointDistribution {
    pub fn new(probs: Vec<f64>, factor_sizes: Vec<usize>) -> Result<Self> {
        let expected: usize = factor_sizes.iter().product();
        if factor_sizes.is_empty() || factor_sizes.contains(&0) {
            return Err(Error::EmptyAlphabet);
        }
        if probs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: probs.len(),
            });
        }
        validate(&probs)?;
        Ok(Self {
            probs,
            factor_sizes,
        })
    }

    pub(crate) fn from_raw(probs: Vec<f64>, factor_sizes: Vec<usize>) -> Self {
        debug_assert_eq!(probs.len(), factor_sizes.iter().product::<usize>());
        Self {
            probs,
            factor_sizes,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn factor_sizes(&self) -> &[usize] {
        &self.factor_sizes
    }

    fn check_group(&self, group: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.factor_sizes.len()];
        for &f in group {
            if f >= seen.len() || seen[f] {
                return Err(Error::InvalidGroups);
            }
            seen[f] = true;
        }
        Ok(())
    }

    /// Marginal table over `group`, indexed row-major in the order given.
    pub fn marginal(&self, group: &[usize]) -> Result<Vec<f64>> {
        self.check_group(group)?;
        let k = self.factor_sizes.len();
        // weight of each source factor in the output index
        let mut weight = vec![0usize; k];
        let mut w = 1;
        for &f in group.iter().rev() {
            weight[f] = w;
            w *= self.factor_sizes[f];
        }
        let mut out = vec![0.0; w];
        let mut coords = vec![0usize; k];
        let mut target = 0usize;
        for &p in &self.probs {
            out[target] += p;
            for f in (0..k).rev() {
                coords[f] += 1;
                target += weight[f];
                if coords[f] < self.factor_sizes[f] {
                    break;
                }
                target -= weight[f] * coords[f];
                coords[f] = 0;
            }
        }
        Ok(out)
    }

    pub fn marginal_distribution(&self, group: &[usize]) -> Result<FiniteDistribution> {
        Ok(FiniteDistribution::from_raw(self.marginal(group)?))
    }

    pub fn entropy_of(&self, group: &[usize]) -> Result<f64> {
        if group.is_empty() {
            return Ok(0.0);
        }
        Ok(table_entropy(&self.marginal(group)?))
    }
}

fn disjoint(groups: &[&[usize]]) -> bool {
    let mut all: Vec<usize> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let n = all.len();
    all.sort_unstable();
    all.dedup();
    all.len() == n
}

fn union(groups: &[&[usize]]) -> Vec<usize> {
    groups.iter().flat_map(|g| g.iter().copied()).collect()
}

pub fn entropy(p: &FiniteDistribution) -> f64 {
    table_entropy(p.probs())
}

/// `I(A;B) = H(A) + H(B) - H(A,B)`.
pub fn mutual_information(
    joint: &JointDistribution,
    group_a: &[usize],
    group_b: &[usize],
) -> Result<f64> {
    conditional_mutual_information(joint, group_a, group_b, &[])
}

/// `I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)`, clamped at 0 against
/// rounding.
pub fn conditional_mutual_information(
    joint: &JointDistribution,
    group_a: &[usize],
    group_b: &[usize],
    group_c: &[usize],
) -> Result<f64> {
    if group_a.is_empty() || group_b.is_empty() || !disjoint(&[group_a, group_b, group_c]) {
        return Err(Error::InvalidGroups);
    }
    let h_ac = joint.entropy_of(&union(&[group_a, group_c]))?;
    let h_bc = joint.entropy_of(&union(&[group_b, group_c]))?;
    let h_abc = joint.entropy_of(&union(&[group_a, group_b, group_c]))?;
    let h_c = joint.entropy_of(group_c)?;
    Ok((h_ac + h_bc - h_abc - h_c).max(0.0))
}

/// Exponent parameter of the ψ / φ functionals.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Rho(f64);

impl Rho {
    /// Accepts `0 < rho <= 1`; φ additionally requires `rho < 1`.
    pub fn new(rho: f64) -> Result<Self> {
        if rho > 0.0 && rho <= 1.0 {
            Ok(Self(rho))
        } else {
            Err(Error::RhoOutOfRange(rho))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Rho {
    type Error = Error;

    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Rho> for f64 {
    fn from(r: Rho) -> f64 {
        r.0
    }
}

/// `ψ(ρ) = ln Σ_{z,ℓ} P_L(ℓ) P_{Z|L}(z|ℓ)^{1+ρ} P_Z(z)^{-ρ}`.
///
/// Outputs with `P_Z(z) = 0` carry no mass under any `ℓ` in the support of
/// `P_L` and are skipped.
pub fn psi(rho: Rho, channel: &FiniteConditional, input: &FiniteDistribution) -> Result<f64> {
    let r = rho.value();
    let pz = channel.output_law(input)?;
    let mut total = 0.0;
    for (z, &pz_z) in pz.probs().iter().enumerate() {
        if pz_z <= 0.0 {
            continue;
        }
        let scale = pz_z.powf(-r);
        for (l, &pl) in input.probs().iter().enumerate() {
            let w = channel.prob(l, z);
            if pl > 0.0 && w > 0.0 {
                total += pl * w.powf(1.0 + r) * scale;
            }
        }
    }
    Ok(total.ln())
}

/// `φ(ρ) = ln Σ_z (Σ_ℓ P_L(ℓ) P_{Z|L}(z|ℓ)^{1/(1-ρ)})^{1-ρ}`, the Gallager
/// function with the input law as its second argument. Requires `ρ < 1`.
pub fn phi(rho: Rho, channel: &FiniteConditional, input: &FiniteDistribution) -> Result<f64> {
    let r = rho.value();
    if r >= 1.0 {
        return Err(Error::RhoOutOfRange(r));
    }
    channel.check_input(input)?;
    Ok(phi_unchecked(r, channel, input.probs()))
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// φ without validation; `input` is a raw table over the channel inputs.
/// Evaluated in the log domain: `P^{1/(1-ρ)}` underflows as `ρ → 1`.
pub(crate) fn phi_unchecked(r: f64, channel: &FiniteConditional, input: &[f64]) -> f64 {
    let inv = 1.0 / (1.0 - r);
    let mut inner = Vec::with_capacity(input.len());
    let outer: Vec<f64> = (0..channel.output_size())
        .map(|z| {
            inner.clear();
            inner.extend(
                input
                    .iter()
                    .enumerate()
                    .filter(|&(l, &pl)| pl > 0.0 && channel.prob(l, z) > 0.0)
                    .map(|(l, &pl)| pl.ln() + inv * channel.prob(l, z).ln()),
            );
            (1.0 - r) * log_sum_exp(&inner)
        })
        .collect();
    log_sum_exp(&outer)
}

pub(crate) fn exp_phi_unchecked(r: f64, channel: &FiniteConditional, input: &[f64]) -> f64 {
    phi_unchecked(r, channel, input).exp()
}

/// `φ(ρ)/ρ` at a small probe, approximating the slope of φ at 0, which is
/// the mutual information of the induced joint law.
pub fn phi_slope_at_zero(
    channel: &FiniteConditional,
    input: &FiniteDistribution,
    rho_probe: f64,
) -> Result<f64> {
    if !(rho_probe > 0.0 && rho_probe <= 1e-3) {
        return Err(Error::RhoOutOfRange(rho_probe));
    }
    Ok(phi(Rho::new(rho_probe)?, channel, input)? / rho_probe)
}
