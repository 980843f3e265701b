//! Two-user Gaussian interference channel
//! `Y1 = X1 + τ1 X2 + N1`, `Y2 = τ2 X1 + X2 + N2` (unit-variance noise) under
//! power-split signaling `X_t = W_t + Q_t + A_t`, and the per-point rate
//! regions built from the resulting mutual informations.
//!
//! Transmitter `t` spends a fraction `β_t` of its budget, devotes `θ_t` of
//! that to the message (the rest is artificial noise `A_t`) and puts a
//! fraction `μ_t` of the message power on the common part `W_t`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::region::{HalfPlane, RatePoint, RatePolygon};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianIC {
    /// Gain of transmitter 2 at receiver 1.
    pub tau1: f64,
    /// Gain of transmitter 1 at receiver 2.
    pub tau2: f64,
    pub p1: f64,
    pub p2: f64,
}

impl GaussianIC {
    pub fn new(tau1: f64, tau2: f64, p1: f64, p2: f64) -> Result<Self> {
        let ch = Self { tau1, tau2, p1, p2 };
        ch.validate()?;
        Ok(ch)
    }

    pub fn validate(&self) -> Result<()> {
        if ![self.tau1, self.tau2, self.p1, self.p2]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(Error::InvalidParameter("non-finite channel parameter".into()));
        }
        if self.p1 < 0.0 || self.p2 < 0.0 {
            return Err(Error::InvalidParameter("negative power budget".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmitterSplit {
    pub beta: f64,
    pub theta: f64,
    pub mu: f64,
}

impl TransmitterSplit {
    pub fn new(beta: f64, theta: f64, mu: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("theta", theta), ("mu", mu)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} not in [0, 1]")));
            }
        }
        Ok(Self { beta, theta, mu })
    }

    /// Full power, no artificial noise, everything private.
    pub fn private_full_power() -> Self {
        Self {
            beta: 1.0,
            theta: 1.0,
            mu: 0.0,
        }
    }

    pub fn silent() -> Self {
        Self {
            beta: 0.0,
            theta: 1.0,
            mu: 0.0,
        }
    }

    /// Variances of `(W, Q, A)` for a power budget.
    pub fn variances(&self, power: f64) -> [f64; 3] {
        [
            self.beta * self.mu * self.theta * power,
            self.beta * (1.0 - self.mu) * self.theta * power,
            self.beta * (1.0 - self.theta) * power,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub tx1: TransmitterSplit,
    pub tx2: TransmitterSplit,
}

impl PowerSplit {
    pub fn new(tx1: TransmitterSplit, tx2: TransmitterSplit) -> Self {
        Self { tx1, tx2 }
    }
}

/// Single-user slice of the profile, named from user `t`'s point of view
/// (`o` = the other user).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UserMi {
    /// `I(V_t; Y_t | W_1 W_2)`
    pub a: f64,
    /// `I(W_o V_t; Y_t | W_t)`
    pub b: f64,
    /// `I(V_t; Y_t | W_o)`
    pub c: f64,
    /// `I(W_o V_t; Y_t)`
    pub d: f64,
    /// `I(V_t; Y_o | V_o)`
    pub s: f64,
    /// `I(V_t; Y_t)`
    pub e: f64,
    /// `I(V_t; Y_o)`
    pub g: f64,
    /// `I(V_t; Y_t | V_o)`
    pub h: f64,
}

impl UserMi {
    fn values(&self) -> [f64; 8] {
        [
            self.a, self.b, self.c, self.d, self.s, self.e, self.g, self.h,
        ]
    }
}

/// The sixteen mutual informations (nats) of one signaling point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MiProfile {
    pub user1: UserMi,
    pub user2: UserMi,
}

impl MiProfile {
    /// Nonnegative, finite, `a <= c <= d` and `e <= h` for both users, up to
    /// `tol`.
    pub fn is_consistent(&self, tol: f64) -> bool {
        [self.user1, self.user2].iter().all(|u| {
            u.values().iter().all(|v| v.is_finite() && *v >= 0.0)
                && u.a <= u.c + tol
                && u.c <= u.d + tol
                && u.e <= u.h + tol
        })
    }
}

#[inline]
fn half_ln1p(x: f64) -> f64 {
    0.5 * x.ln_1p()
}

/// Closed forms for user `t`. `tau_in` scales the other transmitter at
/// receiver `t`, `tau_out` scales transmitter `t` at the other receiver.
fn user_mi(
    own: &TransmitterSplit,
    own_power: f64,
    other: &TransmitterSplit,
    other_power: f64,
    tau_in: f64,
    tau_out: f64,
) -> UserMi {
    let (bo, to, mo, po) = (own.beta, own.theta, own.mu, own_power);
    let (bx, tx, mx, px) = (other.beta, other.theta, other.mu, other_power);
    let tin2 = tau_in * tau_in;
    let tout2 = tau_out * tau_out;

    let msg = bo * to * po;
    let private = bo * to * (1.0 - mo) * po;
    let own_noise = bo * (1.0 - to) * po;
    let other_common = tin2 * bx * tx * mx * px;

    let denom = 1.0 + own_noise + tin2 * bx * (1.0 - tx * mx) * px;
    let leak_signal = tout2 * msg;
    let leak_noise = tout2 * own_noise;

    UserMi {
        a: half_ln1p(private / denom),
        b: half_ln1p((private + other_common) / denom),
        c: half_ln1p(msg / denom),
        d: half_ln1p((msg + other_common) / denom),
        s: half_ln1p(leak_signal / (1.0 + leak_noise + bx * (1.0 - tx) * px)),
        e: half_ln1p(msg / (1.0 + own_noise + tin2 * bx * px)),
        g: half_ln1p(leak_signal / (1.0 + leak_noise + bx * px)),
        h: half_ln1p(msg / (1.0 + own_noise + tin2 * bx * (1.0 - tx) * px)),
    }
}

pub fn mi_profile(ch: &GaussianIC, split: &PowerSplit) -> MiProfile {
    MiProfile {
        user1: user_mi(&split.tx1, ch.p1, &split.tx2, ch.p2, ch.tau1, ch.tau2),
        user2: user_mi(&split.tx2, ch.p2, &split.tx1, ch.p1, ch.tau2, ch.tau1),
    }
}

/// The nine rate constraints of the Han–Kobayashi region, as
/// `(coef_R1, coef_R2, rhs)`.
pub fn hk_constraints(p: &MiProfile) -> [(f64, f64, f64); 9] {
    let (u1, u2) = (&p.user1, &p.user2);
    [
        (1.0, 0.0, u1.c),
        (1.0, 0.0, u1.a + u2.b),
        (0.0, 1.0, u2.c),
        (0.0, 1.0, u2.a + u1.b),
        (1.0, 1.0, u1.d + u2.a),
        (1.0, 1.0, u1.a + u2.d),
        (1.0, 1.0, u1.b + u2.b),
        (2.0, 1.0, u1.d + u1.a + u2.b),
        (1.0, 2.0, u2.d + u2.a + u1.b),
    ]
}

/// Parallel constraints merged to the tightest one: caps on
/// `R1, R2, R1+R2, 2R1+R2, R1+2R2`.
fn hk_tightest(p: &MiProfile) -> [f64; 5] {
    let c = hk_constraints(p);
    [
        c[0].2.min(c[1].2),
        c[2].2.min(c[3].2),
        c[4].2.min(c[5].2).min(c[6].2),
        c[7].2,
        c[8].2,
    ]
}

const DIRECTIONS: [(f64, f64); 5] = [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 2.0)];

fn polygon_from_caps(caps: [f64; 5], shift: [f64; 2]) -> RatePolygon {
    RatePolygon::from_halfplanes(
        DIRECTIONS
            .iter()
            .zip(caps)
            .map(|(&(a, b), rhs)| HalfPlane::new(a, b, rhs - a * shift[0] - b * shift[1])),
    )
}

/// Clips the box `[0, caps[0]] x [0, caps[1]]` against the three oblique
/// caps. Pushes the (possibly repeated) vertices and reports whether the
/// region is nonempty.
fn push_down_closed(caps: [f64; 5], shift: [f64; 2], out: &mut Vec<RatePoint>) -> bool {
    let shifted: [f64; 5] =
        std::array::from_fn(|i| caps[i] - DIRECTIONS[i].0 * shift[0] - DIRECTIONS[i].1 * shift[1]);
    if shifted.iter().any(|&c| c < 0.0) {
        return false;
    }
    let mut poly: Vec<RatePoint> = Vec::with_capacity(8);
    let mut next: Vec<RatePoint> = Vec::with_capacity(8);
    poly.extend([
        [0.0, 0.0],
        [shifted[0], 0.0],
        [shifted[0], shifted[1]],
        [0.0, shifted[1]],
    ]);
    for i in 2..5 {
        let (a, b) = DIRECTIONS[i];
        let c = shifted[i];
        next.clear();
        for k in 0..poly.len() {
            let p = poly[k];
            let q = poly[(k + 1) % poly.len()];
            let fp = a * p[0] + b * p[1] - c;
            let fq = a * q[0] + b * q[1] - c;
            if fp <= 0.0 {
                next.push(p);
            }
            if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                let t = fp / (fp - fq);
                next.push([p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])]);
            }
        }
        std::mem::swap(&mut poly, &mut next);
    }
    out.extend_from_slice(&poly);
    true
}

/// Pushes a vertex superset of `kind.region(p)`: the convex hull of what is
/// pushed equals that region. This is the allocation-light path used by the
/// grid sweeps.
pub fn push_region_vertices(kind: RegionKind, p: &MiProfile, out: &mut Vec<RatePoint>) {
    let rect = |w: f64, h: f64, out: &mut Vec<RatePoint>| {
        let (w, h) = (w.max(0.0), h.max(0.0));
        out.extend([[0.0, 0.0], [w, 0.0], [w, h], [0.0, h]]);
    };
    match kind {
        RegionKind::Hk => {
            push_down_closed(hk_tightest(p), [0.0, 0.0], out);
        }
        RegionKind::SecureSecret => {
            if !push_down_closed(hk_tightest(p), [p.user1.s, p.user2.s], out) {
                out.push([0.0, 0.0]);
            }
        }
        RegionKind::BaselineInner => rect(p.user1.e - p.user1.s, p.user2.e - p.user2.s, out),
        RegionKind::BaselineBest => rect(p.user1.e, p.user2.e, out),
        RegionKind::Outer => {
            let o = outer_region(p);
            rect(o.r1e_cap, o.r2e_cap, out)
        }
    }
}

pub fn hk_polygon(p: &MiProfile) -> RatePolygon {
    polygon_from_caps(hk_tightest(p), [0.0, 0.0])
}

/// Equivocation pairs `(R1e, R2e) >= 0` with `(R1e + s1, R2e + s2)` in the
/// Han–Kobayashi region. When the leakage penalties alone fall outside the
/// region, only the trivial pair `(0, 0)` remains.
pub fn secure_secret_polygon(p: &MiProfile) -> RatePolygon {
    let poly = polygon_from_caps(hk_tightest(p), [p.user1.s, p.user2.s]);
    if poly.is_empty() {
        RatePolygon::origin()
    } else {
        poly
    }
}

/// Membership of a full rate tuple `(R1, R2, R1e, R2e)` in the secure inner
/// region at this signaling point.
pub fn inner_point_feasible(p: &MiProfile, r1: f64, r2: f64, r1e: f64, r2e: f64) -> bool {
    if r1e > r1 || r2e > r2 {
        return false;
    }
    hk_polygon(p).contains([r1, r2]) && secure_secret_polygon(p).contains([r1e, r2e])
}

/// Caps of the outer bound at one signaling point (nats).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterBound {
    pub r1e_cap: f64,
    pub r2e_cap: f64,
    pub r1_cap: f64,
    pub r2_cap: f64,
}

impl OuterBound {
    pub fn equivocation_region(&self) -> RatePolygon {
        RatePolygon::rectangle(self.r1e_cap, self.r2e_cap)
    }

    pub fn rate_region(&self) -> RatePolygon {
        RatePolygon::rectangle(self.r1_cap, self.r2_cap)
    }
}

pub fn outer_region(p: &MiProfile) -> OuterBound {
    let cap = |u: &UserMi| (u.e - u.g).min(u.h - u.s).max(0.0);
    OuterBound {
        r1e_cap: cap(&p.user1),
        r2e_cap: cap(&p.user2),
        r1_cap: p.user1.e,
        r2_cap: p.user2.e,
    }
}

/// Secret-rate rectangle of the dummy-message scheme: `R_t <= e_t - s_t`.
pub fn baseline_inner(p: &MiProfile) -> RatePolygon {
    RatePolygon::rectangle(p.user1.e - p.user1.s, p.user2.e - p.user2.s)
}

/// Total-rate rectangle `R_t <= e_t` of the dummy-message scheme.
pub fn baseline_best(p: &MiProfile) -> RatePolygon {
    RatePolygon::rectangle(p.user1.e, p.user2.e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Hk,
    SecureSecret,
    BaselineInner,
    BaselineBest,
    /// Equivocation caps of the outer bound.
    Outer,
}

impl RegionKind {
    pub const ALL: [RegionKind; 5] = [
        RegionKind::Hk,
        RegionKind::SecureSecret,
        RegionKind::BaselineInner,
        RegionKind::BaselineBest,
        RegionKind::Outer,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RegionKind::Hk => "hk",
            RegionKind::SecureSecret => "secure_secret",
            RegionKind::BaselineInner => "baseline_inner",
            RegionKind::BaselineBest => "baseline_best",
            RegionKind::Outer => "outer",
        }
    }

    pub fn region(self, p: &MiProfile) -> RatePolygon {
        match self {
            RegionKind::Hk => hk_polygon(p),
            RegionKind::SecureSecret => secure_secret_polygon(p),
            RegionKind::BaselineInner => baseline_inner(p),
            RegionKind::BaselineBest => baseline_best(p),
            RegionKind::Outer => outer_region(p).equivocation_region(),
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RegionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown region kind '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fig3() -> GaussianIC {
        GaussianIC::new(0.2, 0.2, 10.0, 10.0).unwrap()
    }

    fn full_private() -> PowerSplit {
        PowerSplit::new(
            TransmitterSplit::private_full_power(),
            TransmitterSplit::private_full_power(),
        )
    }

    fn random_split(rng: &mut impl Rng) -> TransmitterSplit {
        TransmitterSplit::new(rng.gen(), rng.gen(), rng.gen()).unwrap()
    }

    fn profile_from(vals: [f64; 8]) -> UserMi {
        let [a, b, c, d, s, e, g, h] = vals;
        UserMi {
            a,
            b,
            c,
            d,
            s,
            e,
            g,
            h,
        }
    }

    #[test]
    fn fig3_closed_forms() {
        let p = mi_profile(&fig3(), &full_private());
        // high-precision references: ½ln(1 + 10/1.4), ½ln(1.4)
        assert_abs_diff_eq!(p.user1.e, 1.048_570_559_389_618_4, epsilon = 1e-13);
        assert_abs_diff_eq!(p.user1.s, 0.168_236_118_310_606_47, epsilon = 1e-13);
        assert_abs_diff_eq!(p.user1.g, 0.017_859_041_301_039_616, epsilon = 1e-13);
        assert_abs_diff_eq!(p.user1.h, 1.198_947_636_399_185_3, epsilon = 1e-13);
        assert_eq!(p.user1, p.user2);
        let outer = outer_region(&p);
        assert_abs_diff_eq!(outer.r1e_cap, 1.030_711_518_088_578_8, epsilon = 1e-13);
        let corner = baseline_inner(&p).vertices()[2];
        assert_abs_diff_eq!(corner[0], 0.880_334_441_079_011_96, epsilon = 1e-13);
        assert_abs_diff_eq!(corner[1], 0.880_334_441_079_011_96, epsilon = 1e-13);
    }

    #[test]
    fn silent_transmitter() {
        let split = PowerSplit::new(TransmitterSplit::silent(), TransmitterSplit::private_full_power());
        let p = mi_profile(&fig3(), &split);
        let u = p.user1;
        assert_eq!([u.a, u.c, u.e, u.g, u.h, u.s], [0.0; 6]);
    }

    #[test]
    fn swap_rule() {
        let ch = GaussianIC::new(0.3, 0.7, 5.0, 20.0).unwrap();
        let s1 = TransmitterSplit::new(0.9, 0.6, 0.3).unwrap();
        let s2 = TransmitterSplit::new(0.4, 0.8, 0.5).unwrap();
        let p = mi_profile(&ch, &PowerSplit::new(s1, s2));
        let swapped = mi_profile(
            &GaussianIC::new(0.7, 0.3, 20.0, 5.0).unwrap(),
            &PowerSplit::new(s2, s1),
        );
        assert_eq!(p.user1, swapped.user2);
        assert_eq!(p.user2, swapped.user1);
    }

    #[test]
    fn profile_structure_on_random_splits() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let ch = GaussianIC::new(rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 2.0, rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0).unwrap();
            let split = PowerSplit::new(random_split(&mut rng), random_split(&mut rng));
            let p = mi_profile(&ch, &split);
            assert!(p.is_consistent(1e-15), "{p:?}");
            let hk = hk_polygon(&p);
            let sec = secure_secret_polygon(&p);
            assert!(hk.check_invariants() && sec.check_invariants());
            assert!(sec.is_subset_of(&hk, 1e-9));
            assert!(baseline_inner(&p).is_subset_of(&baseline_best(&p), 0.0));
        }
    }

    #[test]
    fn hk_zero_profile_is_origin() {
        let p = MiProfile::default();
        assert_eq!(hk_polygon(&p).vertices(), &[[0.0, 0.0]]);
        assert_eq!(secure_secret_polygon(&p).vertices(), &[[0.0, 0.0]]);
    }

    /// Brute-force grid membership against the nine raw constraints.
    #[test]
    fn hk_unit_profile_matches_grid_oracle() {
        let u = profile_from([1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        let p = MiProfile { user1: u, user2: u };
        let poly = hk_polygon(&p);
        // derived by the grid oracle below: R1, R2 <= 1 and R1 + R2 <= 2,
        // 2R1 + R2 <= 3, R1 + 2R2 <= 3 leave the unit square
        assert_eq!(
            poly.vertices(),
            &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
        );
        let cons = hk_constraints(&p);
        let step = 1e-3;
        let mut inside_oracle = 0usize;
        let mut agree = 0usize;
        let n = (1.6 / step) as usize;
        for i in 0..=n {
            for j in (0..=n).step_by(7) {
                let pt = [i as f64 * step, j as f64 * step];
                let oracle = cons.iter().all(|&(a, b, r)| a * pt[0] + b * pt[1] <= r + 1e-12);
                inside_oracle += oracle as usize;
                agree += (oracle == poly.contains(pt)) as usize;
            }
        }
        assert!(inside_oracle > 0);
        assert_eq!(agree, (n + 1) * (n / 7 + 1));
    }

    #[test]
    fn hk_membership_matches_grid_on_random_profiles() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let ch = GaussianIC::new(rng.gen(), rng.gen(), 1.0 + rng.gen::<f64>() * 30.0, 1.0 + rng.gen::<f64>() * 30.0).unwrap();
            let p = mi_profile(&ch, &PowerSplit::new(random_split(&mut rng), random_split(&mut rng)));
            let poly = hk_polygon(&p);
            let cons = hk_constraints(&p);
            let step = 1e-3;
            let (mx, my) = (poly.max_r1() + 0.05, poly.max_r2() + 0.05);
            let mut i = 0.0;
            while i <= mx {
                let mut j = 0.0;
                while j <= my {
                    let margin = cons
                        .iter()
                        .map(|&(a, b, r)| (a * i + b * j - r) / (a * a + b * b).sqrt())
                        .fold(f64::NEG_INFINITY, f64::max);
                    // skip points within rounding distance of the boundary
                    if margin.abs() > 1e-9 {
                        assert_eq!(margin < 0.0, poly.contains([i, j]), "{i} {j}");
                    }
                    j += step * 13.0;
                }
                i += step;
            }
            // each vertex saturates two constraints (counting the axes)
            for &v in poly.vertices() {
                let tight = cons
                    .iter()
                    .map(|&(a, b, r)| (a, b, r))
                    .chain([(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)])
                    .filter(|&(a, b, r)| ((a * v[0] + b * v[1] - r) / (a * a + b * b).sqrt()).abs() <= 1e-9)
                    .count();
                assert!(tight >= 2 || poly.vertices().len() == 1, "{v:?}");
            }
        }
    }

    #[test]
    fn redundant_r1_cap() {
        let mut u = profile_from([0.3, 0.5, 1e6, 1e6, 0.0, 0.0, 0.0, 0.0]);
        u.a = 0.3;
        let p = MiProfile { user1: u, user2: u };
        assert_abs_diff_eq!(hk_polygon(&p).max_r1(), 0.8, epsilon = 1e-12);
    }

    #[test]
    fn secure_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = GaussianIC::new(0.4, 0.6, 10.0, 10.0).unwrap();
        let mut p = mi_profile(&ch, &PowerSplit::new(random_split(&mut rng), random_split(&mut rng)));
        p.user1.s = 0.0;
        p.user2.s = 0.0;
        assert_eq!(secure_secret_polygon(&p), hk_polygon(&p));
        let hk = hk_polygon(&p);
        p.user1.s = hk.max_r1() + 0.1;
        p.user2.s = hk.max_r2() + 0.1;
        assert_eq!(secure_secret_polygon(&p).vertices(), &[[0.0, 0.0]]);
    }

    #[test]
    fn inner_point_examples() {
        let ch = GaussianIC::new(0.1, 0.3, 80.0, 10.0).unwrap();
        let split = PowerSplit::new(
            TransmitterSplit::new(1.0, 0.8, 0.2).unwrap(),
            TransmitterSplit::new(0.7, 0.9, 0.1).unwrap(),
        );
        let p = mi_profile(&ch, &split);
        assert!(inner_point_feasible(&p, 0.0, 0.0, 0.0, 0.0));
        assert!(!inner_point_feasible(&p, 0.1, 0.1, 0.2, 0.0));
        let sec = secure_secret_polygon(&p);
        assert!(sec.vertices().len() > 2);
        for &[x, y] in sec.vertices() {
            let (r1, r2) = (x + p.user1.s, y + p.user2.s);
            assert!(inner_point_feasible(&p, r1, r2, x, y));
            if x > 0.0 && y > 0.0 {
                assert!(!inner_point_feasible(&p, r1, r2, x + 1e-3, y + 1e-3));
                assert!(!inner_point_feasible(&p, r1 + 1e-3, r2 + 1e-3, x + 1e-3, y + 1e-3));
            }
        }
    }

    #[test]
    fn outer_examples() {
        let ch = GaussianIC::new(0.5, 0.4, 30.0, 10.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let tx1 = random_split(&mut rng);
            let p = mi_profile(&ch, &PowerSplit::new(tx1, TransmitterSplit::silent()));
            let u = p.user1;
            assert_abs_diff_eq!(u.e - u.g, u.h - u.s, epsilon = 1e-14);
            let p0 = mi_profile(
                &GaussianIC::new(0.5, 0.0, 30.0, 10.0).unwrap(),
                &PowerSplit::new(tx1, random_split(&mut rng)),
            );
            assert_eq!(p0.user1.g, 0.0);
            assert_eq!(p0.user1.s, 0.0);
            assert_abs_diff_eq!(outer_region(&p0).r1e_cap, p0.user1.e.min(p0.user1.h), epsilon = 0.0);
        }
    }

    #[test]
    fn wiretap_degeneration_at_private_split() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let ch = GaussianIC::new(rng.gen(), rng.gen(), rng.gen::<f64>() * 50.0, rng.gen::<f64>() * 50.0).unwrap();
            let tx1 = TransmitterSplit::new(rng.gen(), rng.gen(), 0.0).unwrap();
            let tx2 = TransmitterSplit::new(0.0, rng.gen(), rng.gen()).unwrap();
            let p = mi_profile(&ch, &PowerSplit::new(tx1, tx2));
            assert_abs_diff_eq!(
                secure_secret_polygon(&p).max_r1(),
                outer_region(&p).r1e_cap,
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn baseline_examples() {
        let mut p = MiProfile::default();
        p.user1.e = 0.3;
        p.user1.s = 0.5;
        p.user2.e = 0.2;
        p.user2.s = 0.2;
        assert_eq!(baseline_inner(&p).vertices(), &[[0.0, 0.0]]);
    }

    #[test]
    fn fast_vertices_match_polygons() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let mut buf = Vec::new();
        for _ in 0..3000 {
            let ch = GaussianIC::new(rng.gen::<f64>(), rng.gen::<f64>() * 1.5, rng.gen::<f64>() * 100.0, rng.gen::<f64>() * 100.0).unwrap();
            let p = mi_profile(&ch, &PowerSplit::new(random_split(&mut rng), random_split(&mut rng)));
            for kind in RegionKind::ALL {
                buf.clear();
                push_region_vertices(kind, &p, &mut buf);
                let fast = RatePolygon::from_points(buf.clone());
                let reference = kind.region(&p);
                let d = crate::region::hausdorff_distance(&fast, &reference).unwrap();
                assert!(d <= crate::region::GEOMETRY_TOLERANCE, "{kind}: {d} {:?} {:?}", fast.vertices(), reference.vertices());
            }
        }
    }

    #[test]
    fn region_kind_names_round_trip() {
        for k in RegionKind::ALL {
            assert_eq!(k.name().parse::<RegionKind>().unwrap(), k);
            assert_eq!(serde_json::to_string(&k).unwrap(), format!("\"{}\"", k.name()));
        }
        assert!("nope".parse::<RegionKind>().is_err());
    }
}
