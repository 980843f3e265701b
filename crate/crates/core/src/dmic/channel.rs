use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{
    conditional_mutual_information, FiniteConditional, FiniteDistribution, JointDistribution,
};

/// A discrete memoryless interference channel `P(y1, y2 | x1, x2)`.
///
/// Inputs are indexed `x1 * |X2| + x2`, outputs `y1 * |Y2| + y2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteIcSpec", into = "DiscreteIcSpec")]
pub struct DiscreteIC {
    transition: FiniteConditional,
    x_sizes: [usize; 2],
    y_sizes: [usize; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteIcSpec {
    pub x_sizes: [usize; 2],
    pub y_sizes: [usize; 2],
    pub transition: FiniteConditional,
}

impl DiscreteIC {
    pub fn new(transition: FiniteConditional, x_sizes: [usize; 2], y_sizes: [usize; 2]) -> Result<Self> {
        let inputs = x_sizes[0] * x_sizes[1];
        let outputs = y_sizes[0] * y_sizes[1];
        if transition.input_size() != inputs {
            return Err(Error::DimensionMismatch {
                expected: inputs,
                got: transition.input_size(),
            });
        }
        if transition.output_size() != outputs {
            return Err(Error::DimensionMismatch {
                expected: outputs,
                got: transition.output_size(),
            });
        }
        Ok(Self {
            transition,
            x_sizes,
            y_sizes,
        })
    }

    /// Binary inputs, each receiver sees both inputs through separate binary
    /// symmetric links: `Y_t = (X_t ⊕ N_t, X_o ⊕ N'_t)`, encoded as
    /// `2 * own_bit + cross_bit`. `direct[t]` and `cross[t]` are the flip
    /// probabilities at receiver `t`; all four noises are independent.
    pub fn binary_product(direct: [f64; 2], cross: [f64; 2]) -> Result<Self> {
        for &p in direct.iter().chain(&cross) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!("flip probability {p}")));
            }
        }
        let flip = |bit: usize, out: usize, p: f64| if bit == out { 1.0 - p } else { p };
        let receiver = |t: usize, x: [usize; 2], y: usize| {
            let (own, other) = (x[t], x[1 - t]);
            flip(own, y >> 1, direct[t]) * flip(other, y & 1, cross[t])
        };
        let rows = (0..4)
            .map(|xi| {
                let x = [xi >> 1, xi & 1];
                (0..16)
                    .map(|yi| receiver(0, x, yi >> 2) * receiver(1, x, yi & 3))
                    .collect()
            })
            .collect();
        Self::new(FiniteConditional::new(rows)?, [2, 2], [4, 4])
    }

    pub fn transition(&self) -> &FiniteConditional {
        &self.transition
    }

    pub fn x_sizes(&self) -> [usize; 2] {
        self.x_sizes
    }

    pub fn y_sizes(&self) -> [usize; 2] {
        self.y_sizes
    }

    /// `P(y_t | x1, x2)` with inputs indexed `x1 * |X2| + x2`.
    pub fn receiver_channel(&self, t: usize) -> FiniteConditional {
        let [_, y2] = self.y_sizes;
        let rows = self
            .transition
            .rows()
            .iter()
            .map(|row| {
                let mut out = vec![0.0; self.y_sizes[t]];
                for (y, &p) in row.probs().iter().enumerate() {
                    let yt = if t == 0 { y / y2 } else { y % y2 };
                    out[yt] += p;
                }
                FiniteDistribution::from_raw(out)
            })
            .collect();
        FiniteConditional::from_rows(rows).expect("rows share the output alphabet")
    }
}

impl TryFrom<DiscreteIcSpec> for DiscreteIC {
    type Error = Error;

    fn try_from(s: DiscreteIcSpec) -> Result<Self> {
        Self::new(s.transition, s.x_sizes, s.y_sizes)
    }
}

impl From<DiscreteIC> for DiscreteIcSpec {
    fn from(c: DiscreteIC) -> Self {
        Self {
            x_sizes: c.x_sizes,
            y_sizes: c.y_sizes,
            transition: c.transition,
        }
    }
}

/// `P(u) · P(w1, v1 | u) · P(x1 | v1) · P(w2, v2 | u) · P(x2 | v2)`.
///
/// `wv[t]` maps `u` to the pair `(w, v)` indexed `w * |V_t| + v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LawSpec", into = "LawSpec")]
pub struct SingleLetterLaw {
    p_u: FiniteDistribution,
    wv: [FiniteConditional; 2],
    x_given_v: [FiniteConditional; 2],
    w_sizes: [usize; 2],
    v_sizes: [usize; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawSpec {
    pub p_u: FiniteDistribution,
    pub w_sizes: [usize; 2],
    pub v_sizes: [usize; 2],
    pub wv_given_u: [FiniteConditional; 2],
    pub x_given_v: [FiniteConditional; 2],
}

impl SingleLetterLaw {
    pub fn new(
        p_u: FiniteDistribution,
        wv: [FiniteConditional; 2],
        x_given_v: [FiniteConditional; 2],
        w_sizes: [usize; 2],
        v_sizes: [usize; 2],
    ) -> Result<Self> {
        for t in 0..2 {
            let checks = [
                (p_u.alphabet_size(), wv[t].input_size()),
                (w_sizes[t] * v_sizes[t], wv[t].output_size()),
                (v_sizes[t], x_given_v[t].input_size()),
            ];
            for (expected, got) in checks {
                if expected != got {
                    return Err(Error::DimensionMismatch { expected, got });
                }
            }
        }
        Ok(Self {
            p_u,
            wv,
            x_given_v,
            w_sizes,
            v_sizes,
        })
    }

    /// No time sharing, no common part, `V_t` uniform on `v_sizes[t]`
    /// symbols and the given stochastic encoders.
    pub fn private_only(x_given_v: [FiniteConditional; 2]) -> Result<Self> {
        let v_sizes = [x_given_v[0].input_size(), x_given_v[1].input_size()];
        let wv = [0, 1].map(|t| {
            let uniform = FiniteDistribution::uniform(v_sizes[t])?;
            FiniteConditional::from_rows(vec![uniform])
        });
        let [wv1, wv2] = wv;
        Self::new(
            FiniteDistribution::point_mass(1, 0)?,
            [wv1?, wv2?],
            x_given_v,
            [1, 1],
            v_sizes,
        )
    }

    pub fn p_u(&self) -> &FiniteDistribution {
        &self.p_u
    }

    pub fn u_size(&self) -> usize {
        self.p_u.alphabet_size()
    }

    pub fn w_sizes(&self) -> [usize; 2] {
        self.w_sizes
    }

    pub fn v_sizes(&self) -> [usize; 2] {
        self.v_sizes
    }

    pub fn wv_given_u(&self, t: usize) -> &FiniteConditional {
        &self.wv[t]
    }

    pub fn x_given_v(&self, t: usize) -> &FiniteConditional {
        &self.x_given_v[t]
    }

    pub fn check_channel(&self, ch: &DiscreteIC) -> Result<()> {
        for t in 0..2 {
            let (expected, got) = (ch.x_sizes()[t], self.x_given_v[t].output_size());
            if expected != got {
                return Err(Error::DimensionMismatch { expected, got });
            }
        }
        Ok(())
    }

    /// `P(w_t | u)`.
    pub fn w_given_u(&self, t: usize) -> FiniteConditional {
        let (nw, nv) = (self.w_sizes[t], self.v_sizes[t]);
        let rows = self.wv[t]
            .rows()
            .iter()
            .map(|r| {
                FiniteDistribution::from_raw(
                    (0..nw).map(|w| r.probs()[w * nv..(w + 1) * nv].iter().sum()).collect(),
                )
            })
            .collect();
        FiniteConditional::from_rows(rows).expect("uniform row width")
    }

    /// `P(v_t | u)`.
    pub fn v_given_u(&self, t: usize) -> FiniteConditional {
        let (nw, nv) = (self.w_sizes[t], self.v_sizes[t]);
        let rows = self.wv[t]
            .rows()
            .iter()
            .map(|r| {
                FiniteDistribution::from_raw(
                    (0..nv).map(|v| (0..nw).map(|w| r.probs()[w * nv + v]).sum()).collect(),
                )
            })
            .collect();
        FiniteConditional::from_rows(rows).expect("uniform row width")
    }

    /// `P(v_t | u, w_t)` with inputs indexed `u * |W_t| + w`. Pairs of zero
    /// probability fall back to `P(v_t | u)`; they are never sampled.
    pub fn v_given_uw(&self, t: usize) -> FiniteConditional {
        let (nw, nv) = (self.w_sizes[t], self.v_sizes[t]);
        let v_u = self.v_given_u(t);
        let mut rows = Vec::with_capacity(self.u_size() * nw);
        for (u, r) in self.wv[t].rows().iter().enumerate() {
            for w in 0..nw {
                let slice = &r.probs()[w * nv..(w + 1) * nv];
                let mass: f64 = slice.iter().sum();
                rows.push(if mass > 0.0 {
                    FiniteDistribution::from_raw(slice.iter().map(|p| p / mass).collect())
                } else {
                    v_u.row(u).clone()
                });
            }
        }
        FiniteConditional::from_rows(rows).expect("uniform row width")
    }

    /// Flat table `P(y_t | v1, v2)` indexed `(v1 * |V2| + v2) * |Y_t| + y`,
    /// marginalizing the stochastic encoders.
    pub fn effective_channel(&self, ch: &DiscreteIC, t: usize) -> Vec<f64> {
        let rx = ch.receiver_channel(t);
        let [nx1, nx2] = ch.x_sizes();
        let [nv1, nv2] = self.v_sizes;
        let ny = ch.y_sizes()[t];
        let mut out = vec![0.0; nv1 * nv2 * ny];
        for v1 in 0..nv1 {
            for v2 in 0..nv2 {
                let cell = &mut out[(v1 * nv2 + v2) * ny..][..ny];
                for x1 in 0..nx1 {
                    let p1 = self.x_given_v[0].prob(v1, x1);
                    if p1 == 0.0 {
                        continue;
                    }
                    for x2 in 0..nx2 {
                        let p = p1 * self.x_given_v[1].prob(v2, x2);
                        if p == 0.0 {
                            continue;
                        }
                        for (c, q) in cell.iter_mut().zip(rx.row(x1 * nx2 + x2).probs()) {
                            *c += p * q;
                        }
                    }
                }
            }
        }
        out
    }

    /// `P(y2 | v1)` with `v2` fixed, as a channel from `V1`.
    pub fn eavesdropper_channel(&self, ch: &DiscreteIC, v2: usize) -> FiniteConditional {
        let table = self.effective_channel(ch, 1);
        let [nv1, nv2] = self.v_sizes;
        let ny = ch.y_sizes()[1];
        let rows = (0..nv1)
            .map(|v1| FiniteDistribution::from_raw(table[(v1 * nv2 + v2) * ny..][..ny].to_vec()))
            .collect();
        FiniteConditional::from_rows(rows).expect("uniform row width")
    }

    /// Joint law of `(U, V1, V2, Y2)`.
    pub fn eavesdropper_joint(&self, ch: &DiscreteIC) -> JointDistribution {
        let table = self.effective_channel(ch, 1);
        let [nv1, nv2] = self.v_sizes;
        let ny = ch.y_sizes()[1];
        let (v1_u, v2_u) = (self.v_given_u(0), self.v_given_u(1));
        let mut probs = Vec::with_capacity(self.u_size() * nv1 * nv2 * ny);
        for (u, &pu) in self.p_u.probs().iter().enumerate() {
            for v1 in 0..nv1 {
                for v2 in 0..nv2 {
                    let p = pu * v1_u.prob(u, v1) * v2_u.prob(u, v2);
                    probs.extend(table[(v1 * nv2 + v2) * ny..][..ny].iter().map(|q| p * q));
                }
            }
        }
        JointDistribution::from_raw(probs, vec![self.u_size(), nv1, nv2, ny])
    }

    /// `I(V1; Y2 | U, V2)`.
    pub fn cross_leakage(&self, ch: &DiscreteIC) -> Result<f64> {
        self.check_channel(ch)?;
        conditional_mutual_information(&self.eavesdropper_joint(ch), &[1], &[3], &[0, 2])
    }
}

impl TryFrom<LawSpec> for SingleLetterLaw {
    type Error = Error;

    fn try_from(s: LawSpec) -> Result<Self> {
        Self::new(s.p_u, s.wv_given_u, s.x_given_v, s.w_sizes, s.v_sizes)
    }
}

impl From<SingleLetterLaw> for LawSpec {
    fn from(l: SingleLetterLaw) -> Self {
        Self {
            p_u: l.p_u,
            w_sizes: l.w_sizes,
            v_sizes: l.v_sizes,
            wv_given_u: l.wv,
            x_given_v: l.x_given_v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::table_entropy;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_product_marginals() {
        let ch = DiscreteIC::binary_product([0.05, 0.2], [0.1, 0.3]).unwrap();
        let y2 = ch.receiver_channel(1);
        // x1 = 1, x2 = 0: own bit 0 kept w.p. 0.8, cross bit 1 kept w.p. 0.7
        assert_abs_diff_eq!(y2.prob(2, 0b01), 0.8 * 0.7, epsilon = 1e-15);
        let y1 = ch.receiver_channel(0);
        assert_abs_diff_eq!(y1.prob(2, 0b10), 0.95 * 0.9, epsilon = 1e-15);
        assert!(DiscreteIC::binary_product([1.5, 0.0], [0.0, 0.0]).is_err());
    }

    #[test]
    fn cross_leakage_of_reference_shape() {
        let ch = DiscreteIC::binary_product([0.05, 0.05], [0.1, 0.1]).unwrap();
        let law = SingleLetterLaw::private_only([
            FiniteConditional::binary_symmetric(0.25).unwrap(),
            FiniteConditional::identity(2).unwrap(),
        ])
        .unwrap();
        // V1 reaches Y2 through BSC(0.25) then BSC(0.1): flip 0.3
        let expected = std::f64::consts::LN_2 - table_entropy(&[0.3, 0.7]);
        assert_abs_diff_eq!(law.cross_leakage(&ch).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn conditionals_of_structured_law() {
        let wv = FiniteConditional::new(vec![vec![0.1, 0.2, 0.3, 0.4], vec![0.5, 0.0, 0.0, 0.5]]).unwrap();
        let law = SingleLetterLaw::new(
            FiniteDistribution::new(vec![0.5, 0.5]).unwrap(),
            [wv.clone(), wv],
            [FiniteConditional::identity(2).unwrap(), FiniteConditional::identity(2).unwrap()],
            [2, 2],
            [2, 2],
        )
        .unwrap();
        assert_abs_diff_eq!(law.w_given_u(0).prob(0, 1), 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(law.v_given_u(0).prob(1, 1), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(law.v_given_uw(0).prob(1, 1), 0.4 / 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(law.v_given_uw(0).prob(2, 0), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let ch = DiscreteIC::binary_product([0.05, 0.05], [0.1, 0.1]).unwrap();
        let json = serde_json::to_string(&ch).unwrap();
        assert_eq!(serde_json::from_str::<DiscreteIC>(&json).unwrap(), ch);
        let law = SingleLetterLaw::private_only([
            FiniteConditional::binary_symmetric(0.25).unwrap(),
            FiniteConditional::identity(2).unwrap(),
        ])
        .unwrap();
        let json = serde_json::to_string(&law).unwrap();
        assert_eq!(serde_json::from_str::<SingleLetterLaw>(&json).unwrap(), law);
    }
}
