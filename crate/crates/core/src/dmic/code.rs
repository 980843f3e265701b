use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::channel::{DiscreteIC, SingleLetterLaw};
use crate::error::{Error, Result};
use crate::hashing::{LinearBijection, MessageLayout};

/// Bits of the common index `e_t` and the private index `b_t` per
/// transmitter, so `|E_t| = 2^common[t]`, `|B_t| = 2^private[t]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndexBits {
    pub common: [usize; 2],
    pub private: [usize; 2],
}

impl IndexBits {
    /// Converts per-symbol rates (nats) into index bits; each `n * rate`
    /// must be a whole number of bits.
    pub fn from_rates(n: usize, common: [f64; 2], private: [f64; 2]) -> Result<Self> {
        let bits = |rate: f64| -> Result<usize> {
            let b = rate * n as f64 / std::f64::consts::LN_2;
            let rounded = b.round();
            if rate < 0.0 || (b - rounded).abs() > 1e-9 {
                return Err(Error::NonIntegralIndexRange { rate, n });
            }
            Ok(rounded as usize)
        };
        Ok(Self {
            common: [bits(common[0])?, bits(common[1])?],
            private: [bits(private[0])?, bits(private[1])?],
        })
    }

    pub fn total(&self, t: usize) -> usize {
        self.common[t] + self.private[t]
    }
}

/// Shared time-sharing sequence plus, per transmitter, the `W` table
/// indexed by `e` and the `V` table indexed by `e * |B| + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Codebook {
    pub n: usize,
    pub bits: IndexBits,
    pub u_seq: Vec<usize>,
    pub w_tables: [Vec<Vec<usize>>; 2],
    pub v_tables: [Vec<Vec<usize>>; 2],
}

impl Codebook {
    pub fn codeword_count(&self, t: usize) -> usize {
        self.v_tables[t].len()
    }

    pub fn v_seq(&self, t: usize, c: u64) -> &[usize] {
        &self.v_tables[t][c as usize]
    }

    pub fn w_seq(&self, t: usize, c: u64) -> &[usize] {
        &self.w_tables[t][(c >> self.bits.private[t]) as usize]
    }
}

const MAX_INDEX_BITS: usize = 20;

pub fn generate_codebook_with<R: Rng + ?Sized>(
    law: &SingleLetterLaw,
    n: usize,
    bits: IndexBits,
    rng: &mut R,
) -> Result<Codebook> {
    for t in 0..2 {
        if bits.total(t) > MAX_INDEX_BITS {
            return Err(Error::InvalidParameter(format!(
                "{} index bits at transmitter {}",
                bits.total(t),
                t + 1
            )));
        }
    }
    let u_seq: Vec<usize> = (0..n).map(|_| law.p_u().sample(rng)).collect();
    let mut w_tables: [Vec<Vec<usize>>; 2] = Default::default();
    let mut v_tables: [Vec<Vec<usize>>; 2] = Default::default();
    for t in 0..2 {
        let w_u = law.w_given_u(t);
        let v_uw = law.v_given_uw(t);
        let nw = law.w_sizes()[t];
        for _ in 0..1usize << bits.common[t] {
            let w: Vec<usize> = u_seq.iter().map(|&u| w_u.row(u).sample(rng)).collect();
            for _ in 0..1usize << bits.private[t] {
                let v = u_seq
                    .iter()
                    .zip(&w)
                    .map(|(&u, &wi)| v_uw.row(u * nw + wi).sample(rng))
                    .collect();
                v_tables[t].push(v);
            }
            w_tables[t].push(w);
        }
    }
    Ok(Codebook {
        n,
        bits,
        u_seq,
        w_tables,
        v_tables,
    })
}

/// Seeded codebook generation (ChaCha8, bit-reproducible).
pub fn generate_codebook(law: &SingleLetterLaw, n: usize, bits: IndexBits, seed: u64) -> Result<Codebook> {
    generate_codebook_with(law, n, bits, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A codebook together with each transmitter's bijection `f_t` and message
/// layout. Codeword index `c_t = f_t^{-1}(messages ‖ dummy)`, with `e_t` the
/// leading `common` bits of `c_t` and `b_t` the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplexCode {
    codebook: Codebook,
    law: SingleLetterLaw,
    hashes: [LinearBijection; 2],
    layouts: [MessageLayout; 2],
}

/// One transmitted block.
#[derive(Debug, Clone, PartialEq)]
pub struct Encoded {
    pub codeword: u64,
    pub common: u64,
    pub private: u64,
    pub w_seq: Vec<usize>,
    pub v_seq: Vec<usize>,
    pub x_sample: Vec<usize>,
    /// `P(x_i | v_i)` for each position; the block law is their product.
    pub x_law: Vec<Vec<f64>>,
}

/// Decoder output at one receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub codeword: u64,
    pub common: u64,
    pub private: u64,
    pub other_common: u64,
    /// Secret segments followed by the dummy segment.
    pub segments: Vec<u64>,
}

impl MultiplexCode {
    pub fn new(
        codebook: Codebook,
        law: SingleLetterLaw,
        hashes: [LinearBijection; 2],
        layouts: [MessageLayout; 2],
    ) -> Result<Self> {
        for t in 0..2 {
            let l = codebook.bits.total(t);
            if layouts[t].total_bits() != l {
                return Err(Error::InvalidLayout(format!(
                    "transmitter {} layout has {} bits, codebook indexes {l}",
                    t + 1,
                    layouts[t].total_bits()
                )));
            }
            if hashes[t].dim() != l {
                return Err(Error::DimensionMismatch {
                    expected: l,
                    got: hashes[t].dim(),
                });
            }
        }
        Ok(Self {
            codebook,
            law,
            hashes,
            layouts,
        })
    }

    pub fn codebook(&self) -> &Codebook {
        &self.codebook
    }

    pub fn law(&self) -> &SingleLetterLaw {
        &self.law
    }

    pub fn hash(&self, t: usize) -> &LinearBijection {
        &self.hashes[t]
    }

    pub fn layout(&self, t: usize) -> &MessageLayout {
        &self.layouts[t]
    }

    pub fn n(&self) -> usize {
        self.codebook.n
    }

    pub fn split_index(&self, t: usize, c: u64) -> (u64, u64) {
        let p = self.codebook.bits.private[t];
        (c >> p, c & ((1u64 << p) - 1))
    }

    /// `f_t^{-1}(messages ‖ dummy)`.
    pub fn codeword_index(&self, t: usize, messages: &[u64], dummy: u64) -> Result<u64> {
        let mut segments = messages.to_vec();
        segments.push(dummy);
        let joined = self.layouts[t].join(&segments)?;
        Ok(self.hashes[t].inverse_apply_packed(joined))
    }

    /// Secret and dummy segments carried by codeword `c`.
    pub fn segments_of(&self, t: usize, c: u64) -> Vec<u64> {
        self.layouts[t].split(self.hashes[t].apply_packed(c))
    }

    /// Encodes with an explicit dummy value and samples the channel input.
    pub fn encode_with_dummy<R: Rng + ?Sized>(
        &self,
        t: usize,
        messages: &[u64],
        dummy: u64,
        rng: &mut R,
    ) -> Result<Encoded> {
        let codeword = self.codeword_index(t, messages, dummy)?;
        let (common, private) = self.split_index(t, codeword);
        let v_seq = self.codebook.v_seq(t, codeword).to_vec();
        let enc = self.law.x_given_v(t);
        let x_law: Vec<Vec<f64>> = v_seq.iter().map(|&v| enc.row(v).probs().to_vec()).collect();
        let x_sample = v_seq.iter().map(|&v| enc.row(v).sample(rng)).collect();
        Ok(Encoded {
            codeword,
            common,
            private,
            w_seq: self.codebook.w_seq(t, codeword).to_vec(),
            v_seq,
            x_sample,
            x_law,
        })
    }

    /// Encodes with a uniformly drawn dummy segment.
    pub fn encode<R: Rng + ?Sized>(&self, t: usize, messages: &[u64], rng: &mut R) -> Result<Encoded> {
        let k = self.layouts[t].dummy_bits();
        let dummy = if k == 0 { 0 } else { rng.gen_range(0..1u64 << k) };
        self.encode_with_dummy(t, messages, dummy, rng)
    }
}

/// Per-position likelihood tables used by the decoders.
pub(crate) struct Likelihood {
    /// `P(y_t | v1, v2)` flat, see [`SingleLetterLaw::effective_channel`].
    table: Vec<f64>,
    nv2: usize,
    ny: usize,
}

impl Likelihood {
    pub(crate) fn new(code: &MultiplexCode, ch: &DiscreteIC, t: usize) -> Result<Self> {
        code.law.check_channel(ch)?;
        Ok(Self {
            table: code.law.effective_channel(ch, t),
            nv2: code.law.v_sizes()[1],
            ny: ch.y_sizes()[t],
        })
    }

    /// `Π_i P(y_i | v1_i, v2_i)`.
    #[inline]
    pub(crate) fn block(&self, v1: &[usize], v2: &[usize], y: &[usize]) -> f64 {
        v1.iter()
            .zip(v2)
            .zip(y)
            .map(|((&a, &b), &yi)| self.table[(a * self.nv2 + b) * self.ny + yi])
            .product()
    }
}

fn check_word(ch: &DiscreteIC, t: usize, n: usize, y: &[usize]) -> Result<()> {
    if y.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: y.len(),
        });
    }
    let ny = ch.y_sizes()[t];
    if let Some(&bad) = y.iter().find(|&&s| s >= ny) {
        return Err(Error::IndexOutOfRange {
            index: bad as u64,
            range: ny as u64,
        });
    }
    Ok(())
}

fn decode_with(code: &MultiplexCode, lik: &Likelihood, t: usize, y: &[usize]) -> Decoded {
    let o = 1 - t;
    let cb = &code.codebook;
    let own_count = cb.codeword_count(t) as u64;
    let other_private = cb.bits.private[o];
    let other_commons = 1u64 << cb.bits.common[o];
    let mut best = (f64::NEG_INFINITY, 0u64, 0u64);
    for c in 0..own_count {
        let own = cb.v_seq(t, c);
        for e_o in 0..other_commons {
            // uniform average over the other transmitter's private index
            let score: f64 = (0..1u64 << other_private)
                .map(|b_o| {
                    let other = cb.v_seq(o, (e_o << other_private) | b_o);
                    if t == 0 {
                        lik.block(own, other, y)
                    } else {
                        lik.block(other, own, y)
                    }
                })
                .sum();
            if score > best.0 {
                best = (score, c, e_o);
            }
        }
    }
    let (_, codeword, other_common) = best;
    let (common, private) = code.split_index(t, codeword);
    Decoded {
        codeword,
        common,
        private,
        other_common,
        segments: code.segments_of(t, codeword),
    }
}

/// Maximum-likelihood decoding of `(e_t, b_t, e_o)` at receiver `t`,
/// averaging over the other transmitter's private index. Candidates are
/// scanned in increasing `(c_t, e_o)` order and only a strictly larger
/// likelihood replaces the incumbent, so ties go to the lowest index.
pub fn decode_ml(code: &MultiplexCode, ch: &DiscreteIC, t: usize, y: &[usize]) -> Result<Decoded> {
    check_word(ch, t, code.n(), y)?;
    let lik = Likelihood::new(code, ch, t)?;
    Ok(decode_with(code, &lik, t, y))
}

/// Visits every word of `Y^n` in lexicographic order.
pub(crate) fn for_each_word(ny: usize, n: usize, mut f: impl FnMut(&[usize])) {
    let mut y = vec![0usize; n];
    loop {
        f(&y);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            y[i] += 1;
            if y[i] < ny {
                break;
            }
            y[i] = 0;
        }
    }
}

pub const ENUMERATION_LIMIT: u128 = 10_000_000;

pub(crate) fn check_state_space(size: u128) -> Result<()> {
    if size > ENUMERATION_LIMIT {
        return Err(Error::StateSpaceTooLarge {
            size,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Exact probability that receiver `t` decodes its codeword `(e_t, b_t)`
/// wrongly, with both codewords uniform.
pub fn exact_block_error(code: &MultiplexCode, ch: &DiscreteIC, t: usize) -> Result<f64> {
    let lik = Likelihood::new(code, ch, t)?;
    let n = code.n();
    let ny = ch.y_sizes()[t];
    let (c1, c2) = (code.codebook.codeword_count(0), code.codebook.codeword_count(1));
    check_state_space((ny as u128).pow(n as u32) * (c1 as u128 * c2 as u128 + c1.max(c2) as u128))?;
    let mut err = 0.0;
    for_each_word(ny, n, |y| {
        let decoded = decode_with(code, &lik, t, y).codeword;
        for a in 0..c1 as u64 {
            for b in 0..c2 as u64 {
                let truth = if t == 0 { a } else { b };
                if truth != decoded {
                    err += lik.block(code.codebook.v_seq(0, a), code.codebook.v_seq(1, b), y);
                }
            }
        }
    });
    Ok(err / (c1 * c2) as f64)
}

/// Monte Carlo estimate of the same error probability: uniform messages
/// and dummies, sampled encoders and channel.
pub fn sampled_block_error<R: Rng + ?Sized>(
    code: &MultiplexCode,
    ch: &DiscreteIC,
    t: usize,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let lik = Likelihood::new(code, ch, t)?;
    let [_, nx2] = ch.x_sizes();
    let ny2 = ch.y_sizes()[1];
    let mut errors = 0usize;
    let mut y = vec![0usize; code.n()];
    for _ in 0..trials {
        let mut sent = [0u64; 2];
        let mut xs: [Vec<usize>; 2] = Default::default();
        for s in 0..2 {
            let layout = &code.layouts[s];
            let msgs: Vec<u64> = layout.segments()[..layout.secret_count()]
                .iter()
                .map(|&k| rng.gen_range(0..1u64 << k))
                .collect();
            let enc = code.encode(s, &msgs, rng)?;
            sent[s] = enc.codeword;
            xs[s] = enc.x_sample;
        }
        for (i, yi) in y.iter_mut().enumerate() {
            let joint = ch.transition().row(xs[0][i] * nx2 + xs[1][i]).sample(rng);
            *yi = if t == 0 { joint / ny2 } else { joint % ny2 };
        }
        if decode_with(code, &lik, t, &y).codeword != sent[t] {
            errors += 1;
        }
    }
    Ok(errors as f64 / trials as f64)
}
