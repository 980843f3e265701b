use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::{DiscreteIC, SingleLetterLaw};
use super::code::{
    check_state_space, for_each_word, generate_codebook_with, IndexBits, Likelihood,
    MultiplexCode,
};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::hashing::{sample_bijection_with, MessageLayout, Projection};
use crate::prob::{exp_phi_unchecked, mutual_information, FiniteConditional, JointDistribution, Rho};

/// Exact leakage of transmitter 1's selected segments to receiver 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeakageReport {
    /// `I(C_{1,I}; Y_2^n)` in nats.
    pub exact_leakage: f64,
    /// `H(C_{1,I} | Y_2^n)` in nats.
    pub equivocation: f64,
    /// `H(C_{1,I})` in nats.
    pub secret_entropy: f64,
    pub bound: Option<f64>,
    pub rho_used: Option<Rho>,
    /// Rate of the selected segments, nats per symbol.
    pub r_i: f64,
    /// `log |C_1| / n`, nats per symbol.
    pub r_p: f64,
}

impl LeakageReport {
    pub fn chain_rule_gap(&self) -> f64 {
        (self.exact_leakage + self.equivocation - self.secret_entropy).abs()
    }
}

/// `(R_I, R_p)` for a projection of transmitter 1's layout at blocklength `n`.
pub fn rates(proj: &Projection, n: usize) -> (f64, f64) {
    let ln2 = std::f64::consts::LN_2;
    (
        proj.projected_bits() as f64 * ln2 / n as f64,
        proj.layout().total_bits() as f64 * ln2 / n as f64,
    )
}

/// Exact `I(C_{1,I}; Y_2^n)` and `H(C_{1,I} | Y_2^n)` for a fixed code, by
/// summing over every codeword pair and every received word. Messages and
/// dummies are uniform, so both codeword indices are uniform.
pub fn exact_leakage(code: &MultiplexCode, ch: &DiscreteIC, proj: &Projection) -> Result<LeakageReport> {
    if proj.layout() != code.layout(0) {
        return Err(Error::InvalidProjection(
            "projection layout differs from transmitter 1's layout".into(),
        ));
    }
    let n = code.n();
    let ny = ch.y_sizes()[1];
    let book = code.codebook();
    let (c1, c2) = (book.codeword_count(0), book.codeword_count(1));
    let words = (ny as u128)
        .checked_pow(n as u32)
        .ok_or(Error::StateSpaceTooLarge {
            size: u128::MAX,
            limit: super::ENUMERATION_LIMIT,
        })?;
    check_state_space(c1 as u128 * c2 as u128 * words)?;
    let lik = Likelihood::new(code, ch, 1)?;
    let secrets: Vec<usize> = (0..c1 as u64)
        .map(|c| proj.project(code.hash(0).apply_packed(c)) as usize)
        .collect();
    let range = proj.range_size();
    let words = words as usize;
    let mut joint = vec![0.0; range * words];
    let norm = 1.0 / (c1 * c2) as f64;
    let mut word = 0usize;
    for_each_word(ny, n, |y| {
        for (c, &s) in secrets.iter().enumerate() {
            let v1 = book.v_seq(0, c as u64);
            let p: f64 = (0..c2 as u64).map(|b| lik.block(v1, book.v_seq(1, b), y)).sum();
            joint[s * words + word] += p * norm;
        }
        word += 1;
    });
    let joint = JointDistribution::from_raw(joint, vec![range, words]);
    let leakage = mutual_information(&joint, &[0], &[1])?;
    let secret_entropy = joint.entropy_of(&[0])?;
    let equivocation = joint.entropy_of(&[0, 1])? - joint.entropy_of(&[1])?;
    let (r_i, r_p) = rates(proj, n);
    Ok(LeakageReport {
        exact_leakage: leakage,
        equivocation,
        secret_entropy,
        bound: None,
        rho_used: None,
        r_i,
        r_p,
    })
}

fn check_rho_open(rho: Rho) -> Result<f64> {
    let r = rho.value();
    if r >= 1.0 {
        return Err(Error::RhoOutOfRange(r));
    }
    Ok(r)
}

/// `Σ_{u, v2} P(u) P(v2|u) exp(φ(ρ, P_{Y2|V1, v2}, P_{V1|u}))`.
fn phi_mixture(law: &SingleLetterLaw, ch: &DiscreteIC, r: f64) -> Result<f64> {
    law.check_channel(ch)?;
    let v1_u = law.v_given_u(0);
    let v2_u = law.v_given_u(1);
    let channels: Vec<FiniteConditional> =
        (0..law.v_sizes()[1]).map(|v2| law.eavesdropper_channel(ch, v2)).collect();
    let mut total = 0.0;
    for (u, &pu) in law.p_u().probs().iter().enumerate() {
        for (v2, chan) in channels.iter().enumerate() {
            let w = pu * v2_u.prob(u, v2);
            if w > 0.0 {
                total += w * exp_phi_unchecked(r, chan, v1_u.row(u).probs());
            }
        }
    }
    Ok(total)
}

/// `A(ρ) = (1/ρ) ln Σ_{u, v2} P(u, v2) exp φ(ρ, P_{Y2|V1, v2}, P_{V1|u})`,
/// which tends to `I(V1; Y2 | U, V2)` as `ρ -> 0`.
pub fn a_rho(law: &SingleLetterLaw, ch: &DiscreteIC, rho: Rho) -> Result<f64> {
    let r = check_rho_open(rho)?;
    Ok(phi_mixture(law, ch, r)?.ln() / r)
}

/// Per-symbol factor of the single-letter bound,
/// `exp(ρ (R_I - R_p + A(ρ)))`.
pub fn bound_base(law: &SingleLetterLaw, ch: &DiscreteIC, rho: Rho, r_i: f64, r_p: f64) -> Result<f64> {
    let r = check_rho_open(rho)?;
    Ok((r * (r_i - r_p)).exp() * phi_mixture(law, ch, r)?)
}

/// `(1/ρ) [Σ_{u, v2} P(u, v2) exp(ρ (R_I - R_p) + φ(ρ, ·, ·))]^n`.
pub fn single_letter_leakage_bound(
    law: &SingleLetterLaw,
    ch: &DiscreteIC,
    rho: Rho,
    r_i: f64,
    r_p: f64,
    n: usize,
) -> Result<f64> {
    if r_i > r_p + 1e-12 {
        return Err(Error::InvalidParameter(format!("R_I = {r_i} exceeds R_p = {r_p}")));
    }
    let base = bound_base(law, ch, rho, r_i, r_p)?;
    Ok(base.powi(n as i32) / rho.value())
}

/// Label attached to the slack term that the finite-length bound leaves
/// symbolic.
pub const EPSILON_LABEL: &str = "epsilon(rho): unquantified";

/// Worst-case finite-length leakage rate,
/// `(1 + ln(2·2·2^T)) / (nρ) + R_I - R_p + leak_mi`, plus the symbolic
/// `ε(ρ)` slack that is never folded into the number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteLengthBound {
    pub value: f64,
    /// `R_I - R_p + leak_mi >= 0`: the regime in which the bound applies
    /// as stated (with `ε(ρ) >= 0` this is the sufficient side of the
    /// validity condition).
    pub regime_valid: bool,
    pub epsilon: String,
}

pub fn finite_length_leakage_rate_bound(
    messages: usize,
    n: usize,
    rho: f64,
    r_i: f64,
    r_p: f64,
    leak_mi: f64,
) -> FiniteLengthBound {
    let constant = 1.0 + (4.0f64).ln() + messages as f64 * std::f64::consts::LN_2;
    FiniteLengthBound {
        value: constant / (n as f64 * rho) + r_i - r_p + leak_mi,
        regime_valid: r_i - r_p + leak_mi >= 0.0,
        epsilon: EPSILON_LABEL.to_string(),
    }
}

/// A complete discrete experiment: channel, law, blocklength, index bits,
/// message layouts and the secret segments of transmitter 1 under
/// observation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteInstance {
    pub channel: DiscreteIC,
    pub law: SingleLetterLaw,
    pub n: usize,
    pub bits: IndexBits,
    pub layouts: [MessageLayout; 2],
    /// 0-based secret segment indices of transmitter 1.
    pub observed: Vec<usize>,
}

impl DiscreteInstance {
    /// Binary product channel (direct flips 0.05, cross flips 0.1), no time
    /// sharing or common part, uniform binary `V_t`, transmitter 1 adding
    /// artificial noise through a BSC(0.25). Each transmitter sends one
    /// secret bit and one dummy bit over `n = 2` symbols, so
    /// `R_p - R_I = ln 2 / 2` exceeds `I(V1; Y2 | U, V2) = ln 2 - h(0.3)`.
    pub fn reference() -> Self {
        let channel = DiscreteIC::binary_product([0.05, 0.05], [0.1, 0.1]).expect("valid flips");
        let law = SingleLetterLaw::private_only([
            FiniteConditional::binary_symmetric(0.25).expect("valid flip"),
            FiniteConditional::identity(2).expect("nonempty"),
        ])
        .expect("consistent sizes");
        let layout = MessageLayout::new(vec![1], 1).expect("valid layout");
        Self {
            channel,
            law,
            n: 2,
            bits: IndexBits {
                common: [0, 0],
                private: [2, 2],
            },
            layouts: [layout.clone(), layout],
            observed: vec![0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.law.check_channel(&self.channel)?;
        if self.n == 0 {
            return Err(Error::InvalidParameter("blocklength 0".into()));
        }
        for t in 0..2 {
            if self.layouts[t].total_bits() != self.bits.total(t) {
                return Err(Error::InvalidLayout(format!(
                    "transmitter {} layout does not match its index bits",
                    t + 1
                )));
            }
        }
        self.projection().map(|_| ())
    }

    pub fn projection(&self) -> Result<Projection> {
        Projection::new(self.layouts[0].clone(), self.observed.clone())
    }

    pub fn rates(&self) -> Result<(f64, f64)> {
        Ok(rates(&self.projection()?, self.n))
    }

    /// Draws bijections for both transmitters and a codebook.
    pub fn sample_code<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<MultiplexCode> {
        let f1 = sample_bijection_with(self.bits.total(0), rng)?;
        let f2 = sample_bijection_with(self.bits.total(1), rng)?;
        let book = generate_codebook_with(&self.law, self.n, self.bits, rng)?;
        MultiplexCode::new(book, self.law.clone(), [f1, f2], self.layouts.clone())
    }

    pub fn single_letter_bound(&self, rho: Rho) -> Result<f64> {
        let (r_i, r_p) = self.rates()?;
        single_letter_leakage_bound(&self.law, &self.channel, rho, r_i, r_p, self.n)
    }

    /// The grid `ρ` minimizing the single-letter bound, with that bound.
    pub fn best_rho(&self, grid: &[Rho]) -> Result<(Rho, f64)> {
        let mut best: Option<(Rho, f64)> = None;
        for &rho in grid {
            let b = self.single_letter_bound(rho)?;
            if best.is_none_or(|(_, v)| b < v) {
                best = Some((rho, b));
            }
        }
        best.ok_or_else(|| Error::InvalidParameter("empty rho grid".into()))
    }
}

/// Summary of exact leakage over independently drawn
/// `(hash, codebook, u)` tuples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeakageSample {
    pub samples: usize,
    pub mean: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
    pub values: Vec<f64>,
}

/// The code drawn for sample `index` of [`sample_leakage`].
pub fn sampled_code(inst: &DiscreteInstance, seed: u64, index: usize) -> Result<MultiplexCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    inst.sample_code(&mut rng)
}

/// Sample `i` uses ChaCha8 stream `i` under `seed`, so results do not
/// depend on the execution mode.
pub fn sample_leakage(
    inst: &DiscreteInstance,
    samples: usize,
    seed: u64,
    exec: Execution,
) -> Result<LeakageSample> {
    inst.validate()?;
    if samples == 0 {
        return Err(Error::InvalidParameter("zero samples".into()));
    }
    let proj = inst.projection()?;
    let values = exec
        .map_indices(samples, |i| {
            let code = sampled_code(inst, seed, i)?;
            Ok(exact_leakage(&code, &inst.channel, &proj)?.exact_leakage)
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0)
    } else {
        0.0
    };
    Ok(LeakageSample {
        samples,
        mean,
        std_error: (var / k).sqrt(),
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmic::code::Codebook;
    use crate::hashing::{enumerate_bijections, LinearBijection};
    use crate::prob::FiniteDistribution;
    use approx::assert_abs_diff_eq;

    fn noiseless_law() -> SingleLetterLaw {
        SingleLetterLaw::private_only([
            FiniteConditional::identity(2).unwrap(),
            FiniteConditional::identity(2).unwrap(),
        ])
        .unwrap()
    }

    /// Codeword `c` sends the binary expansion of `c` (MSB first) when
    /// `expand`, otherwise the repetition of `c` over `n` symbols.
    fn table(count: usize, n: usize, expand: bool) -> Vec<Vec<usize>> {
        (0..count)
            .map(|c| {
                (0..n)
                    .map(|i| if expand { (c >> (n - 1 - i)) & 1 } else { c })
                    .collect()
            })
            .collect()
    }

    fn book(n: usize, private: [usize; 2], tables: [Vec<Vec<usize>>; 2]) -> Codebook {
        Codebook {
            n,
            bits: IndexBits {
                common: [0, 0],
                private,
            },
            u_seq: vec![0; n],
            w_tables: [vec![vec![0; n]], vec![vec![0; n]]],
            v_tables: tables,
        }
    }

    fn code(book: Codebook, f1: LinearBijection, layout1: MessageLayout) -> MultiplexCode {
        let l2 = book.bits.total(1);
        MultiplexCode::new(
            book,
            noiseless_law(),
            [f1, LinearBijection::identity(l2).unwrap()],
            [layout1, MessageLayout::new(vec![l2], 0).unwrap()],
        )
        .unwrap()
    }

    fn no_dummy_code() -> MultiplexCode {
        code(
            book(2, [1, 1], [table(2, 2, false), table(2, 2, false)]),
            LinearBijection::identity(1).unwrap(),
            MessageLayout::new(vec![1], 0).unwrap(),
        )
    }

    #[test]
    fn independent_eavesdropper_learns_nothing() {
        let ch = DiscreteIC::binary_product([0.1, 0.1], [0.1, 0.5]).unwrap();
        let c = no_dummy_code();
        let proj = Projection::all_secret(c.layout(0).clone());
        let rep = exact_leakage(&c, &ch, &proj).unwrap();
        assert!(rep.exact_leakage.abs() < 1e-12);
        assert_abs_diff_eq!(rep.equivocation, std::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_cross_link_exposes_everything() {
        let ch = DiscreteIC::binary_product([0.1, 0.1], [0.1, 0.0]).unwrap();
        let c = code(
            book(2, [2, 1], [table(4, 2, true), table(2, 2, false)]),
            LinearBijection::identity(2).unwrap(),
            MessageLayout::new(vec![1, 1], 0).unwrap(),
        );
        let proj = Projection::all_secret(c.layout(0).clone());
        let rep = exact_leakage(&c, &ch, &proj).unwrap();
        assert_abs_diff_eq!(rep.exact_leakage, 2.0 * std::f64::consts::LN_2, epsilon = 1e-12);
        assert!(rep.equivocation.abs() < 1e-12);
        assert_abs_diff_eq!(rep.r_i, std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn dummy_bit_reduces_average_leakage() {
        let ch = DiscreteIC::binary_product([0.1, 0.1], [0.1, 0.1]).unwrap();
        let c = no_dummy_code();
        let proj = Projection::all_secret(c.layout(0).clone());
        let plain = exact_leakage(&c, &ch, &proj).unwrap().exact_leakage;
        // oracle: repetition code over BSC(0.1)^2, evaluated independently
        assert_abs_diff_eq!(plain, 0.514_374_720_587_143_1, epsilon = 1e-12);

        let layout = MessageLayout::new(vec![1], 1).unwrap();
        let proj = Projection::all_secret(layout.clone());
        let hashes = enumerate_bijections(2).unwrap();
        assert_eq!(hashes.len(), 6);
        let mean = hashes
            .into_iter()
            .map(|f| {
                let c = code(book(2, [2, 1], [table(4, 2, true), table(2, 2, false)]), f, layout.clone());
                exact_leakage(&c, &ch, &proj).unwrap().exact_leakage
            })
            .sum::<f64>()
            / 6.0;
        // oracle: two hashes expose one raw bit through BSC(0.1) each and
        // one exposes their parity through BSC(0.18)
        assert_abs_diff_eq!(mean, 0.319_294_036_028_948_4, epsilon = 1e-12);
        assert!(mean < plain);
    }

    #[test]
    fn chain_rule_and_degradation() {
        let inst = DiscreteInstance::reference();
        let proj = inst.projection().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let worse = DiscreteIC::binary_product([0.05, 0.05], [0.1, 0.2]).unwrap();
        for _ in 0..20 {
            let c = inst.sample_code(&mut rng).unwrap();
            let rep = exact_leakage(&c, &inst.channel, &proj).unwrap();
            assert!(rep.chain_rule_gap() <= 1e-9);
            assert_abs_diff_eq!(rep.secret_entropy, std::f64::consts::LN_2, epsilon = 1e-12);
            // BSC(0.2) = BSC(0.1) followed by BSC(0.125)
            let degraded = exact_leakage(&c, &worse, &proj).unwrap();
            assert!(degraded.exact_leakage <= rep.exact_leakage + 1e-12);
        }
    }

    #[test]
    fn guardrail_refuses_large_enumeration() {
        let mut inst = DiscreteInstance::reference();
        inst.n = 12;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let c = inst.sample_code(&mut rng).unwrap();
        let err = exact_leakage(&c, &inst.channel, &inst.projection().unwrap()).unwrap_err();
        assert!(matches!(err, Error::StateSpaceTooLarge { .. }));
    }

    #[test]
    fn bound_examples() {
        let rho = Rho::new(0.3).unwrap();
        // Y2 independent of V1: phi = 0, bracket = 1
        let ch = DiscreteIC::binary_product([0.1, 0.1], [0.1, 0.5]).unwrap();
        let law = noiseless_law();
        let b = single_letter_leakage_bound(&law, &ch, rho, 0.2, 0.2, 7).unwrap();
        assert_abs_diff_eq!(b, 1.0 / 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(a_rho(&law, &ch, rho).unwrap(), 0.0, epsilon = 1e-12);
        assert!(single_letter_leakage_bound(&law, &ch, Rho::new(1.0).unwrap(), 0.2, 0.2, 1).is_err());
        assert!(single_letter_leakage_bound(&law, &ch, rho, 0.3, 0.2, 1).is_err());
    }

    #[test]
    fn reference_instance_decays() {
        let inst = DiscreteInstance::reference();
        let (r_i, r_p) = inst.rates().unwrap();
        let leak = inst.law.cross_leakage(&inst.channel).unwrap();
        assert!(r_p - r_i > leak);
        for k in 1..20 {
            let rho = Rho::new(k as f64 * 0.05).unwrap();
            let base = bound_base(&inst.law, &inst.channel, rho, r_i, r_p).unwrap();
            let a = a_rho(&inst.law, &inst.channel, rho).unwrap();
            assert_abs_diff_eq!(base, (rho.value() * (r_i - r_p + a)).exp(), epsilon = 1e-14);
            assert!(base < 1.0);
            let b1 = single_letter_leakage_bound(&inst.law, &inst.channel, rho, r_i, r_p, 5).unwrap();
            let b2 = single_letter_leakage_bound(&inst.law, &inst.channel, rho, r_i, r_p, 6).unwrap();
            assert_abs_diff_eq!(b2, b1 * base, epsilon = 1e-14);
        }
    }

    fn random_law(rng: &mut ChaCha8Rng) -> (SingleLetterLaw, DiscreteIC) {
        let nu = rng.gen_range(1..=2);
        let wv = |rng: &mut ChaCha8Rng| FiniteConditional::random(rng, nu, 4).unwrap();
        let law = SingleLetterLaw::new(
            FiniteDistribution::random(rng, nu).unwrap(),
            [wv(rng), wv(rng)],
            [FiniteConditional::random(rng, 2, 2).unwrap(), FiniteConditional::random(rng, 2, 2).unwrap()],
            [2, 2],
            [2, 2],
        )
        .unwrap();
        let ch = DiscreteIC::new(FiniteConditional::random(rng, 4, 9).unwrap(), [2, 2], [3, 3]).unwrap();
        (law, ch)
    }

    #[test]
    fn a_rho_small_rho_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let (law, ch) = random_law(&mut rng);
            let a = a_rho(&law, &ch, Rho::new(1e-4).unwrap()).unwrap();
            let mi = law.cross_leakage(&ch).unwrap();
            assert!((a - mi).abs() <= 1e-3, "{a} vs {mi}");
        }
    }

    #[test]
    fn a_rho_nondecreasing_on_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let (law, ch) = random_law(&mut rng);
            let vals: Vec<f64> = (1..=50)
                .map(|k| a_rho(&law, &ch, Rho::new(k as f64 * 0.01).unwrap()).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{vals:?}");
        }
    }

    #[test]
    fn finite_length_examples() {
        let b = finite_length_leakage_rate_bound(1, 100, 0.1, 0.3, 0.3, 0.1);
        // (1 + ln 8) / 10 + 0.1
        assert_abs_diff_eq!(b.value, 0.407_944_154_167_983_6, epsilon = 1e-14);
        assert!(b.regime_valid);
        assert_eq!(b.epsilon, EPSILON_LABEL);
        let far = finite_length_leakage_rate_bound(1, 1_000_000_000, 0.1, 0.3, 0.3, 0.1);
        assert_abs_diff_eq!(far.value, 0.1, epsilon = 1e-7);
        let secret = finite_length_leakage_rate_bound(1, 100_000, 0.5, 0.1, 0.5, 0.1);
        assert!(secret.value < 0.0 && !secret.regime_valid);
    }

    #[test]
    fn sampling_is_reproducible_across_execution_modes() {
        let inst = DiscreteInstance::reference();
        let a = sample_leakage(&inst, 16, 9, Execution::Sequential).unwrap();
        let b = sample_leakage(&inst, 16, 9, Execution::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.min >= 0.0 && a.max <= std::f64::consts::LN_2 + 1e-12);
    }

    #[test]
    fn report_serializes() {
        let inst = DiscreteInstance::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = inst.sample_code(&mut rng).unwrap();
        let mut rep = exact_leakage(&c, &inst.channel, &inst.projection().unwrap()).unwrap();
        rep.rho_used = Some(Rho::new(0.5).unwrap());
        rep.bound = Some(inst.single_letter_bound(Rho::new(0.5).unwrap()).unwrap());
        let json = serde_json::to_value(rep).unwrap();
        for key in ["exact_leakage", "equivocation", "bound", "rho_used", "r_i", "r_p"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let inst_json = serde_json::to_string(&inst).unwrap();
        assert_eq!(serde_json::from_str::<DiscreteInstance>(&inst_json).unwrap(), inst);
    }
}
