//! Linear bijections over GF(2)^l used as the multiplex-coding hash, the
//! message layout they act on, and exhaustive checks of two-universality and
//! of the privacy-amplification inequality.
//!
//! A bit vector of length `l` is stored in the low `l` bits of a `u64`;
//! component 0 is the most significant of those bits. Message segment 1 sits
//! in the most significant bits and the dummy segment in the least
//! significant ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{psi, table_entropy, FiniteConditional, FiniteDistribution, JointDistribution, Rho};

/// Largest dimension for which the full group of invertible matrices is
/// enumerated (|GL(4,2)| = 20160).
pub const MAX_ENUMERATION_DIM: usize = 4;

const MAX_DIM: usize = 63;

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BitVector {
    value: u64,
    len: usize,
}

impl BitVector {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_DIM {
            return Err(Error::InvalidParameter(format!("bit length {len}")));
        }
        if value > low_mask(len) {
            return Err(Error::IndexOutOfRange {
                index: value,
                range: 1 << len,
            });
        }
        Ok(Self { value, len })
    }

    /// Builds a vector from its components, first component most significant.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let value = bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b & 1));
        Self::new(value, bits.len())
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn len(self) -> usize {
        self.len
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn bit(self, component: usize) -> u8 {
        ((self.value >> (self.len - 1 - component)) & 1) as u8
    }

    pub fn bits(self) -> Vec<u8> {
        (0..self.len).map(|i| self.bit(i)).collect()
    }
}

/// Square matrix over GF(2); row `i` is a bit mask over the columns using the
/// same most-significant-first convention as [`BitVector`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: Vec<u64>,
}

impl BinaryMatrix {
    pub fn new(rows: Vec<u64>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidParameter(format!("matrix dimension {dim}")));
        }
        if let Some(&r) = rows.iter().find(|&&r| r > low_mask(dim)) {
            return Err(Error::IndexOutOfRange {
                index: r,
                range: 1 << dim,
            });
        }
        Ok(Self { rows })
    }

    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self> {
        let dim = rows.len();
        let packed = rows
            .iter()
            .map(|r| {
                if r.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: r.len(),
                    });
                }
                Ok(BitVector::from_bits(r)?.value())
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(packed)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new((0..dim).map(|i| 1u64 << (dim - 1 - i)).collect())
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Matrix-vector product on a packed vector.
    #[inline]
    pub fn mul_packed(&self, x: u64) -> u64 {
        let dim = self.rows.len();
        self.rows.iter().enumerate().fold(0u64, |acc, (i, &row)| {
            acc | (u64::from((row & x).count_ones() & 1) << (dim - 1 - i))
        })
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in (0..self.dim()).rev() {
            let bit = 1u64 << col;
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && *row & bit != 0 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    /// Gauss-Jordan inverse, `None` when singular.
    pub fn inverse(&self) -> Option<BinaryMatrix> {
        let dim = self.dim();
        let mut left = self.rows.clone();
        let mut right = BinaryMatrix::identity(dim).ok()?.rows;
        for i in 0..dim {
            let bit = 1u64 << (dim - 1 - i);
            let p = (i..dim).find(|&r| left[r] & bit != 0)?;
            left.swap(i, p);
            right.swap(i, p);
            for r in 0..dim {
                if r != i && left[r] & bit != 0 {
                    left[r] ^= left[i];
                    right[r] ^= right[i];
                }
            }
        }
        Some(BinaryMatrix { rows: right })
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim()
    }
}

/// An invertible linear map on GF(2)^l, carrying its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BinaryMatrix", into = "BinaryMatrix")]
pub struct LinearBijection {
    matrix: BinaryMatrix,
    inverse: BinaryMatrix,
}

impl LinearBijection {
    pub fn new(matrix: BinaryMatrix) -> Result<Self> {
        let inverse = matrix.inverse().ok_or(Error::Singular)?;
        Ok(Self { matrix, inverse })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::new(BinaryMatrix::identity(dim)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    fn check(&self, x: BitVector) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn apply(&self, x: BitVector) -> Result<BitVector> {
        self.check(x)?;
        BitVector::new(self.matrix.mul_packed(x.value()), x.len())
    }

    pub fn inverse_apply(&self, y: BitVector) -> Result<BitVector> {
        self.check(y)?;
        BitVector::new(self.inverse.mul_packed(y.value()), y.len())
    }

    /// [`apply`](Self::apply) on a packed index known to be in range.
    #[inline]
    pub fn apply_packed(&self, x: u64) -> u64 {
        self.matrix.mul_packed(x)
    }

    #[inline]
    pub fn inverse_apply_packed(&self, y: u64) -> u64 {
        self.inverse.mul_packed(y)
    }
}

impl TryFrom<BinaryMatrix> for LinearBijection {
    type Error = Error;

    fn try_from(m: BinaryMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<LinearBijection> for BinaryMatrix {
    fn from(f: LinearBijection) -> Self {
        f.matrix
    }
}

/// `|GL(l, 2)| = Π_{i<l} (2^l - 2^i)`.
pub fn group_order(l: usize) -> u128 {
    (0..l).map(|i| (1u128 << l) - (1u128 << i)).product()
}

/// Uniform draw from the invertible `l × l` matrices by rejection from
/// uniform random matrices.
pub fn sample_bijection_with<R: Rng + ?Sized>(l: usize, rng: &mut R) -> Result<LinearBijection> {
    if l == 0 || l > MAX_DIM {
        return Err(Error::InvalidParameter(format!("dimension {l}")));
    }
    loop {
        let rows = (0..l).map(|_| rng.gen::<u64>() & low_mask(l)).collect();
        if let Ok(f) = LinearBijection::new(BinaryMatrix { rows }) {
            return Ok(f);
        }
    }
}

pub fn sample_bijection(l: usize, seed: u64) -> Result<LinearBijection> {
    sample_bijection_with(l, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Every invertible `l × l` matrix exactly once, in increasing order of the
/// packed row tuple.
pub fn enumerate_bijections(l: usize) -> Result<Vec<LinearBijection>> {
    if l == 0 {
        return Err(Error::InvalidParameter("dimension 0".into()));
    }
    if l > MAX_ENUMERATION_DIM {
        return Err(Error::EnumerationTooLarge(l));
    }
    let total = 1u64 << (l * l);
    let out: Vec<LinearBijection> = (0..total)
        .filter_map(|code| {
            let rows = (0..l)
                .map(|i| (code >> ((l - 1 - i) * l)) & low_mask(l))
                .collect();
            LinearBijection::new(BinaryMatrix { rows }).ok()
        })
        .collect();
    debug_assert_eq!(out.len() as u128, group_order(l));
    Ok(out)
}

/// Bit lengths of the `T` secret segments followed by the dummy segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "LayoutSpec", into = "LayoutSpec")]
pub struct MessageLayout {
    segments: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LayoutSpec {
    pub secret: Vec<usize>,
    #[serde(default)]
    pub dummy: usize,
}

impl MessageLayout {
    /// Secret segments must be nonempty; the dummy segment may have length 0.
    pub fn new(secret: Vec<usize>, dummy: usize) -> Result<Self> {
        if secret.is_empty() {
            return Err(Error::InvalidLayout("no secret segment".into()));
        }
        if secret.contains(&0) {
            return Err(Error::InvalidLayout("empty secret segment".into()));
        }
        let total: usize = secret.iter().sum::<usize>() + dummy;
        if total > MAX_DIM {
            return Err(Error::InvalidLayout(format!("{total} bits")));
        }
        let mut segments = secret;
        segments.push(dummy);
        Ok(Self { segments })
    }

    pub fn secret_count(&self) -> usize {
        self.segments.len() - 1
    }

    /// Lengths of all `T + 1` segments, dummy last.
    pub fn segments(&self) -> &[usize] {
        &self.segments
    }

    pub fn dummy_bits(&self) -> usize {
        *self.segments.last().expect("layout always has a dummy slot")
    }

    pub fn secret_bits(&self) -> usize {
        self.total_bits() - self.dummy_bits()
    }

    pub fn total_bits(&self) -> usize {
        self.segments.iter().sum()
    }

    /// Bit offset of segment `i` measured from the least significant end.
    pub fn shift(&self, i: usize) -> usize {
        self.segments[i + 1..].iter().sum()
    }

    pub fn segment_mask(&self, i: usize) -> u64 {
        low_mask(self.segments[i]) << self.shift(i)
    }

    /// Splits a packed vector into its `T + 1` segment values.
    pub fn split(&self, value: u64) -> Vec<u64> {
        (0..self.segments.len())
            .map(|i| (value >> self.shift(i)) & low_mask(self.segments[i]))
            .collect()
    }

    /// Concatenates `T + 1` segment values.
    pub fn join(&self, values: &[u64]) -> Result<u64> {
        if values.len() != self.segments.len() {
            return Err(Error::DimensionMismatch {
                expected: self.segments.len(),
                got: values.len(),
            });
        }
        values
            .iter()
            .zip(&self.segments)
            .try_fold(0u64, |acc, (&v, &k)| {
                if v > low_mask(k) {
                    return Err(Error::IndexOutOfRange {
                        index: v,
                        range: 1 << k,
                    });
                }
                Ok(if k == 0 { acc } else { (acc << k) | v })
            })
    }
}

impl TryFrom<LayoutSpec> for MessageLayout {
    type Error = Error;

    fn try_from(s: LayoutSpec) -> Result<Self> {
        Self::new(s.secret, s.dummy)
    }
}

impl From<MessageLayout> for LayoutSpec {
    fn from(l: MessageLayout) -> Self {
        let dummy = l.dummy_bits();
        let mut secret = l.segments;
        secret.pop();
        LayoutSpec { secret, dummy }
    }
}

/// Projection onto a nonempty set of secret segments (0-based indices, never
/// the dummy).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    indices: Vec<usize>,
    layout: MessageLayout,
    mask: u64,
}

impl Projection {
    pub fn new(layout: MessageLayout, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::InvalidProjection("empty index set".into()));
        }
        if let Some(&i) = indices.iter().find(|&&i| i >= layout.secret_count()) {
            return Err(Error::InvalidProjection(format!(
                "segment {i} is not a secret segment"
            )));
        }
        let mask = indices.iter().fold(0, |m, &i| m | layout.segment_mask(i));
        Ok(Self {
            indices,
            layout,
            mask,
        })
    }

    /// All secret segments.
    pub fn all_secret(layout: MessageLayout) -> Self {
        let indices = (0..layout.secret_count()).collect();
        Self::new(layout, indices).expect("secret segments are never empty")
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn layout(&self) -> &MessageLayout {
        &self.layout
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn projected_bits(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn range_size(&self) -> usize {
        1 << self.projected_bits()
    }

    /// Selected segments concatenated in index order.
    #[inline]
    pub fn project(&self, value: u64) -> u64 {
        self.indices.iter().fold(0u64, |acc, &i| {
            let k = self.layout.segments[i];
            (acc << k) | ((value >> self.layout.shift(i)) & low_mask(k))
        })
    }
}

/// Exact worst-case collision probability of `proj ∘ F` as an integer count
/// over the family size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollisionReport {
    /// Largest number of family members colliding on a fixed pair.
    pub colliding: u64,
    pub family_size: u64,
    pub projected_bits: usize,
}

impl CollisionReport {
    pub fn max_probability(&self) -> f64 {
        self.colliding as f64 / self.family_size as f64
    }

    pub fn bound(&self) -> f64 {
        (-(self.projected_bits as f64) * std::f64::consts::LN_2).exp()
    }

    /// `colliding / family_size <= 2^{-bits}`, compared in integers.
    pub fn within_bound(&self) -> bool {
        (u128::from(self.colliding) << self.projected_bits) <= u128::from(self.family_size)
    }

    pub fn attains_bound(&self) -> bool {
        (u128::from(self.colliding) << self.projected_bits) == u128::from(self.family_size)
    }
}

/// Max over pairs `x1 != x2` of `#{f : proj(f x1) = proj(f x2)}`.
///
/// Uses linearity: a pair collides under `f` iff `proj(f(x1 ^ x2)) = 0`, so
/// only the nonzero differences need to be scanned.
pub fn collision_report(family: &[BinaryMatrix], proj: &Projection) -> Result<CollisionReport> {
    let l = proj.layout().total_bits();
    if let Some(m) = family.iter().find(|m| m.dim() != l) {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: m.dim(),
        });
    }
    let mask = proj.mask();
    let colliding = (1..1u64 << l)
        .map(|d| {
            family
                .iter()
                .filter(|m| m.mul_packed(d) & mask == 0)
                .count() as u64
        })
        .max()
        .unwrap_or(0);
    Ok(CollisionReport {
        colliding,
        family_size: family.len() as u64,
        projected_bits: proj.projected_bits(),
    })
}

/// Exhaustive collision check over the full group of invertible matrices.
pub fn two_universal_exhaustive(l: usize, proj: &Projection) -> Result<CollisionReport> {
    if proj.layout().total_bits() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: proj.layout().total_bits(),
        });
    }
    let family: Vec<BinaryMatrix> = enumerate_bijections(l)?
        .into_iter()
        .map(BinaryMatrix::from)
        .collect();
    collision_report(&family, proj)
}

/// Both sides of the privacy-amplification inequality
/// `E_f exp(ρ I(proj(f(L)); Z)) <= 1 + (|M|/|L|)^ρ exp(ψ(ρ, P_{Z|L}, P_L))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaBoundSides {
    pub lhs: f64,
    pub rhs: f64,
}

impl PaBoundSides {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

/// `I(proj(f(L)); Z)` for uniform `L` over `2^l` messages.
pub fn hashed_mutual_information(
    f: &LinearBijection,
    proj: &Projection,
    channel: &FiniteConditional,
) -> f64 {
    let l = f.dim();
    let size = 1usize << l;
    let z_size = channel.output_size();
    let m_size = proj.range_size();
    let pl = 1.0 / size as f64;
    let mut joint = vec![0.0; m_size * z_size];
    let mut pz = vec![0.0; z_size];
    let mut pm = vec![0.0; m_size];
    for x in 0..size {
        let m = proj.project(f.apply_packed(x as u64)) as usize;
        pm[m] += pl;
        for (z, &w) in channel.row(x).probs().iter().enumerate() {
            joint[m * z_size + z] += pl * w;
            pz[z] += pl * w;
        }
    }
    (table_entropy(&pm) + table_entropy(&pz) - table_entropy(&joint)).max(0.0)
}

/// Computes both sides exactly over a given family (normally the full
/// group, see [`pa_bound_sides`]).
pub fn pa_bound_sides_over(
    family: &[LinearBijection],
    rho: Rho,
    proj: &Projection,
    input: &FiniteDistribution,
    channel: &FiniteConditional,
) -> Result<PaBoundSides> {
    let l = proj.layout().total_bits();
    let size = 1usize << l;
    if input.alphabet_size() != size || channel.input_size() != size {
        return Err(Error::DimensionMismatch {
            expected: size,
            got: channel.input_size().min(input.alphabet_size()),
        });
    }
    if !input.is_uniform() {
        return Err(Error::NotUniform);
    }
    if family.is_empty() {
        return Err(Error::InvalidParameter("empty hash family".into()));
    }
    let r = rho.value();
    let lhs = family
        .iter()
        .map(|f| (r * hashed_mutual_information(f, proj, channel)).exp())
        .sum::<f64>()
        / family.len() as f64;
    let ratio = proj.range_size() as f64 / size as f64;
    let rhs = 1.0 + ratio.powf(r) * psi(rho, channel, input)?.exp();
    Ok(PaBoundSides { lhs, rhs })
}

pub fn pa_bound_sides(
    rho: Rho,
    l: usize,
    proj: &Projection,
    input: &FiniteDistribution,
    channel: &FiniteConditional,
) -> Result<PaBoundSides> {
    if proj.layout().total_bits() != l {
        return Err(Error::DimensionMismatch {
            expected: l,
            got: proj.layout().total_bits(),
        });
    }
    pa_bound_sides_over(&enumerate_bijections(l)?, rho, proj, input, channel)
}

/// Exact joint law of the `T + 1` segments of `f(L)` for uniform `L`.
pub fn hashed_segment_law(f: &LinearBijection, layout: &MessageLayout) -> Result<JointDistribution> {
    if f.dim() != layout.total_bits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_bits(),
            got: f.dim(),
        });
    }
    let size = 1usize << f.dim();
    let mut probs = vec![0.0; size];
    for x in 0..size as u64 {
        // segments are contiguous, so the packed value is already the
        // row-major index over the segment factors
        probs[f.apply_packed(x) as usize] += 1.0 / size as f64;
    }
    let factors = layout.segments().iter().map(|&k| 1usize << k).collect();
    JointDistribution::new(probs, factors)
}
