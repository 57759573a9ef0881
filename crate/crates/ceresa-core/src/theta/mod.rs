//! Numerical genus-3 theta constants with characteristics and the weight-18
//! form chi18, the product of the 36 even theta nulls.
//!
//! theta[a;b](tau) = sum over n in Z^3 of
//!     exp(pi i (n+a)^T tau (n+a) + 2 pi i (n+a)^T b),
//! with a = mu/2 and b = nu/2 for bit vectors mu, nu. The sum is truncated to
//! a box certified by a Gaussian tail bound driven by a lower bound on the
//! smallest eigenvalue of Im tau (Gershgorin when positive, bisection on
//! positive-definiteness otherwise).

mod dd;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use dd::Dd;

const BOX_RADIUS_CAP: usize = 64;
const ABS_FLOOR: f64 = 1e-280;

/// A theta characteristic: bit vectors mu, nu with a = mu/2, b = nu/2.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ThetaChar {
    pub mu: [u8; 3],
    pub nu: [u8; 3],
}

impl ThetaChar {
    pub fn new(mu: [u8; 3], nu: [u8; 3]) -> Self {
        debug_assert!(mu.iter().chain(&nu).all(|&b| b <= 1));
        ThetaChar { mu, nu }
    }

    /// Parity bit mu . nu mod 2; the characteristic is even iff it vanishes.
    pub fn parity(&self) -> u8 {
        ((0..3).map(|i| self.mu[i] * self.nu[i]).sum::<u8>()) % 2
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 0
    }

    pub fn a(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.mu[i] as f64 / 2.0)
    }

    pub fn b(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.nu[i] as f64 / 2.0)
    }

    pub fn label(&self) -> String {
        format!(
            "{},{},{};{},{},{}",
            self.mu[0], self.mu[1], self.mu[2], self.nu[0], self.nu[1], self.nu[2]
        )
    }

    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::BadCharacteristic(s.to_string());
        let (m, n) = s.split_once(';').ok_or_else(bad)?;
        let parse3 = |t: &str| -> Result<[u8; 3]> {
            let parts: Vec<&str> = t.split(',').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let mut out = [0u8; 3];
            for (i, p) in parts.iter().enumerate() {
                out[i] = match *p {
                    "0" => 0,
                    "1" => 1,
                    _ => return Err(bad()),
                };
            }
            Ok(out)
        };
        Ok(ThetaChar::new(parse3(m)?, parse3(n)?))
    }
}

/// All 64 characteristics, mu-major.
pub fn enumerate_all() -> Vec<ThetaChar> {
    let mut out = Vec::with_capacity(64);
    for m in 0..8u8 {
        for n in 0..8u8 {
            out.push(ThetaChar::new(
                [(m >> 2) & 1, (m >> 1) & 1, m & 1],
                [(n >> 2) & 1, (n >> 1) & 1, n & 1],
            ));
        }
    }
    out
}

/// The 36 even characteristics.
pub fn enumerate_even() -> Vec<ThetaChar> {
    enumerate_all().into_iter().filter(ThetaChar::is_even).collect()
}

/// JSON shape of a period matrix: {"re": 3x3, "im": 3x3}.
#[derive(Serialize, Deserialize)]
pub struct TauJson {
    pub re: [[f64; 3]; 3],
    pub im: [[f64; 3]; 3],
}

/// A point of the genus-3 Siegel upper half space: symmetric (to 1e-12
/// relative) with positive-definite imaginary part.
#[derive(Clone, Debug)]
pub struct PeriodMatrix {
    re: [[f64; 3]; 3],
    im: [[f64; 3]; 3],
}

fn sym3_minors_positive(y: &[[f64; 3]; 3]) -> bool {
    let d1 = y[0][0];
    let d2 = y[0][0] * y[1][1] - y[0][1] * y[0][1];
    let d3 = y[0][0] * (y[1][1] * y[2][2] - y[1][2] * y[1][2])
        - y[0][1] * (y[0][1] * y[2][2] - y[1][2] * y[0][2])
        + y[0][2] * (y[0][1] * y[1][2] - y[1][1] * y[0][2]);
    d1 > 0.0 && d2 > 0.0 && d3 > 0.0
}

impl PeriodMatrix {
    pub fn new(re: [[f64; 3]; 3], im: [[f64; 3]; 3]) -> Result<Self> {
        let scale = re
            .iter()
            .chain(im.iter())
            .flatten()
            .fold(1.0f64, |m, &x| m.max(x.abs()));
        for i in 0..3 {
            for j in 0..i {
                if (re[i][j] - re[j][i]).abs() > 1e-12 * scale
                    || (im[i][j] - im[j][i]).abs() > 1e-12 * scale
                {
                    return Err(Error::InvalidPeriodMatrix(format!(
                        "entry ({i},{j}) differs from ({j},{i}) beyond tolerance"
                    )));
                }
            }
        }
        // symmetrize so downstream quadratic forms see an exactly symmetric tau
        let sym = |m: &[[f64; 3]; 3]| -> [[f64; 3]; 3] {
            std::array::from_fn(|i| std::array::from_fn(|j| 0.5 * (m[i][j] + m[j][i])))
        };
        let re = sym(&re);
        let im = sym(&im);
        if !sym3_minors_positive(&im) {
            return Err(Error::InvalidPeriodMatrix(
                "imaginary part is not positive definite".into(),
            ));
        }
        Ok(PeriodMatrix { re, im })
    }

    pub fn from_json(j: &TauJson) -> Result<Self> {
        PeriodMatrix::new(j.re, j.im)
    }

    pub fn to_json(&self) -> TauJson {
        TauJson {
            re: self.re,
            im: self.im,
        }
    }

    /// i times the identity.
    pub fn i_identity() -> Self {
        let re = [[0.0; 3]; 3];
        let mut im = [[0.0; 3]; 3];
        for (i, row) in im.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        PeriodMatrix::new(re, im).expect("i I3 is valid")
    }

    pub fn re(&self) -> &[[f64; 3]; 3] {
        &self.re
    }

    pub fn im(&self) -> &[[f64; 3]; 3] {
        &self.im
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[i][j], self.im[i][j])
    }

    /// tau + B for an integer symmetric B.
    pub fn translate(&self, b: &[[i64; 3]; 3]) -> Result<PeriodMatrix> {
        for i in 0..3 {
            for j in 0..3 {
                if b[i][j] != b[j][i] {
                    return Err(Error::InvalidPeriodMatrix(
                        "translation matrix must be symmetric".into(),
                    ));
                }
            }
        }
        let re = std::array::from_fn(|i| std::array::from_fn(|j| self.re[i][j] + b[i][j] as f64));
        PeriodMatrix::new(re, self.im)
    }

    /// tau + i t E_jj for t >= 0 (which preserves positivity).
    pub fn push_imag_diag(&self, j: usize, t: f64) -> PeriodMatrix {
        assert!(t >= 0.0, "push_imag_diag requires t >= 0");
        let mut im = self.im;
        im[j][j] += t;
        PeriodMatrix::new(self.re, im).expect("adding to the diagonal keeps positivity")
    }

    pub fn det(&self) -> Complex64 {
        let m = |i: usize, j: usize| self.entry(i, j);
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    }

    /// -tau^{-1}, the image under the symplectic inversion.
    pub fn neg_inverse(&self) -> Result<PeriodMatrix> {
        let d = self.det();
        if d.norm() == 0.0 {
            return Err(Error::InvalidPeriodMatrix("tau is singular".into()));
        }
        let m = |i: usize, j: usize| self.entry(i, j);
        let cof = |i: usize, j: usize| -> Complex64 {
            let (r, c): ([usize; 2], [usize; 2]) = (
                std::array::from_fn(|k| (0..3).filter(|&x| x != i).nth(k).unwrap()),
                std::array::from_fn(|k| (0..3).filter(|&x| x != j).nth(k).unwrap()),
            );
            let minor = m(r[0], c[0]) * m(r[1], c[1]) - m(r[0], c[1]) * m(r[1], c[0]);
            if (i + j).is_multiple_of(2) {
                minor
            } else {
                -minor
            }
        };
        let mut re = [[0.0; 3]; 3];
        let mut im = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                // inverse = adj^T / det; tau symmetric makes adj symmetric
                let v = -cof(j, i) / d;
                re[i][j] = v.re;
                im[i][j] = v.im;
            }
        }
        PeriodMatrix::new(re, im)
    }

    /// Certified lower bound on the smallest eigenvalue of Im tau: the
    /// Gershgorin bound when positive, otherwise bisection on shifted
    /// positive-definiteness.
    pub fn lambda_min_lower_bound(&self) -> f64 {
        let y = &self.im;
        let gershgorin = (0..3)
            .map(|i| {
                y[i][i]
                    - (0..3)
                        .filter(|&j| j != i)
                        .map(|j| y[i][j].abs())
                        .sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        if gershgorin > 0.0 {
            return gershgorin;
        }
        let shifted = |s: f64| -> bool {
            let m: [[f64; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { y[i][j] - s } else { y[i][j] })
            });
            sym3_minors_positive(&m)
        };
        let mut lo = 0.0f64;
        let mut hi = (0..3).map(|i| y[i][i]).fold(f64::INFINITY, f64::min);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if shifted(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo * (1.0 - 1e-12)
    }
}

/// A truncated theta value with its certified absolute error and the box
/// radius that produced it.
#[derive(Clone, Debug)]
pub struct ThetaValue {
    pub value: Complex64,
    pub eps: f64,
    pub radius: usize,
}

/// One-dimensional comparison bounds for the tail estimate.
fn line_bound(lambda: f64) -> f64 {
    // sum over t in Z + a of exp(-pi lambda t^2) <= 2 sum_{m>=0} exp(-pi lambda m^2)
    let q = (-std::f64::consts::PI * lambda).exp();
    2.0 * (1.0 + q / (1.0 - q))
}

fn tail_bound(lambda: f64, r: usize) -> f64 {
    // outside the box some coordinate exceeds r: union bound over the three
    // axes, each with at most one lattice point per unit interval per side
    let pl = std::f64::consts::PI * lambda;
    let rf = r as f64;
    let t1 = 2.0 * (-pl * rf * rf).exp() / (1.0 - (-2.0 * pl * rf).exp());
    let s1 = line_bound(lambda);
    3.0 * t1 * s1 * s1
}

fn choose_radius(lambda: f64, eps: f64) -> Result<usize> {
    for r in 1..=BOX_RADIUS_CAP {
        if tail_bound(lambda, r) < eps {
            return Ok(r);
        }
    }
    Err(Error::PrecisionUnreachable {
        digits: (-eps.log10()).ceil().max(0.0) as u32,
        reason: format!("truncation box would exceed radius {BOX_RADIUS_CAP}"),
    })
}

/// Evaluate one theta constant to absolute error below `eps`. Odd
/// characteristics return exactly zero without summation: the summand is
/// antisymmetric under n -> -n - 2a.
pub fn theta_constant(alpha: &ThetaChar, tau: &PeriodMatrix, eps: f64) -> Result<ThetaValue> {
    if !alpha.is_even() {
        return Ok(ThetaValue {
            value: Complex64::new(0.0, 0.0),
            eps: 0.0,
            radius: 0,
        });
    }
    theta_series(alpha.a(), alpha.b(), tau, eps)
}

/// The raw truncated series for arbitrary real characteristics (a, b), with
/// no parity shortcut. `theta_constant` delegates here; the general entry
/// point exists for the integer-shift law theta[a+m; b+n] =
/// exp(2 pi i a.n) theta[a; b].
pub fn theta_series(a: [f64; 3], b: [f64; 3], tau: &PeriodMatrix, eps: f64) -> Result<ThetaValue> {
    if eps <= 0.0 {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let lambda = tau.lambda_min_lower_bound();
    if lambda <= 0.0 {
        return Err(Error::InvalidPeriodMatrix(
            "imaginary part is not positive definite".into(),
        ));
    }
    let r = choose_radius(lambda, 0.5 * eps)?;
    let range = |aj: f64| -> (i64, i64) {
        (
            (-(r as f64) - aj).ceil() as i64,
            ((r as f64) - aj).floor() as i64,
        )
    };
    let (lo0, hi0) = range(a[0]);
    let (lo1, hi1) = range(a[1]);
    let (lo2, hi2) = range(a[2]);

    let mut sum_re = 0.0f64;
    let mut c_re = 0.0f64; // Kahan compensation
    let mut sum_im = 0.0f64;
    let mut c_im = 0.0f64;
    let mut sum_abs = 0.0f64;
    for n0 in lo0..=hi0 {
        let v0 = n0 as f64 + a[0];
        for n1 in lo1..=hi1 {
            let v1 = n1 as f64 + a[1];
            for n2 in lo2..=hi2 {
                let v2 = n2 as f64 + a[2];
                let v = [v0, v1, v2];
                // quadratic forms v^T (Re tau) v and v^T (Im tau) v in
                // double-double; for half-integer characteristics the pair
                // products are exact in f64
                let mut qre = Dd::ZERO;
                let mut qim = Dd::ZERO;
                for i in 0..3 {
                    for j in 0..3 {
                        let w = v[i] * v[j];
                        if tau.re[i][j] != 0.0 {
                            qre = qre.add_prod(tau.re[i][j], w);
                        }
                        if tau.im[i][j] != 0.0 {
                            qim = qim.add_prod(tau.im[i][j], w);
                        }
                    }
                }
                let vb = v0 * b[0] + v1 * b[1] + v2 * b[2];
                let phase = Dd::PI.mul(qre).add(Dd::TWO_PI.mul_f64(vb)).rem_two_pi();
                let magnitude = (-Dd::PI.mul(qim).to_f64()).exp();
                let term_re = magnitude * phase.cos();
                let term_im = magnitude * phase.sin();
                // Kahan-compensated accumulation
                let y = term_re - c_re;
                let t = sum_re + y;
                c_re = (t - sum_re) - y;
                sum_re = t;
                let y = term_im - c_im;
                let t = sum_im + y;
                c_im = (t - sum_im) - y;
                sum_im = t;
                sum_abs += magnitude;
            }
        }
    }
    let rounding = sum_abs * 4e-16;
    Ok(ThetaValue {
        value: Complex64::new(sum_re, sum_im),
        eps: 0.5 * eps + rounding,
        radius: r,
    })
}

/// chi18 with a certified absolute error bound. `eps` is a relative target;
/// when the product sits below the absolute floor (a vanishing point) the
/// bound is reported as is.
#[derive(Clone, Debug)]
pub struct Chi18Value {
    pub value: Complex64,
    pub error_bound: f64,
}

fn product_with_bound(factors: &[ThetaValue]) -> (Complex64, f64) {
    let mut p = Complex64::new(1.0, 0.0);
    for f in factors {
        p *= f.value;
    }
    // |d(prod)| <= sum_i eps_i prod_{j != i} (|v_j| + eps_j), with the
    // multiplication rounding folded into a relative tail
    let mut err = 0.0f64;
    for i in 0..factors.len() {
        let mut term = factors[i].eps;
        for (j, f) in factors.iter().enumerate() {
            if j != i {
                term *= f.value.norm() + f.eps;
            }
        }
        err += term;
    }
    err += p.norm() * 1e-14;
    (p, err)
}

pub fn chi18(tau: &PeriodMatrix, eps: f64) -> Result<Chi18Value> {
    if eps <= 0.0 {
        return Err(Error::Invalid("eps must be positive".into()));
    }
    let evens = enumerate_even();
    let mut factor_eps = 1e-13f64;
    for _round in 0..2 {
        let factors: Result<Vec<ThetaValue>> = evens
            .iter()
            .map(|alpha| theta_constant(alpha, tau, factor_eps))
            .collect();
        let factors = factors?;
        let (p, err) = product_with_bound(&factors);
        if err <= eps * p.norm() || p.norm() <= ABS_FLOOR.max(err) {
            return Ok(Chi18Value {
                value: p,
                error_bound: err,
            });
        }
        // factors far below 1 still carry full relative accuracy, so the
        // truncation target may shrink well under 1e-15 absolute; only the
        // per-term rounding is an irreducible floor
        factor_eps = (factor_eps * (eps * p.norm() / err) * 0.1).max(1e-300);
    }
    let factors: Result<Vec<ThetaValue>> = evens
        .iter()
        .map(|alpha| theta_constant(alpha, tau, factor_eps))
        .collect();
    let (p, err) = product_with_bound(&factors?);
    if err <= eps * p.norm() || p.norm() <= ABS_FLOOR.max(err) {
        Ok(Chi18Value {
            value: p,
            error_bound: err,
        })
    } else {
        Err(Error::PrecisionUnreachable {
            digits: (-eps.log10()).ceil().max(0.0) as u32,
            reason: "product error bound exceeds the relative target".into(),
        })
    }
}

/// The even characteristic minimizing |theta| and that modulus.
#[derive(Clone, Debug)]
pub struct MinNull {
    pub characteristic: ThetaChar,
    pub modulus: f64,
    pub hyperelliptic_candidate: bool,
}

pub fn min_theta_null(tau: &PeriodMatrix, eps: f64, threshold: f64) -> Result<MinNull> {
    let mut best: Option<(ThetaChar, f64)> = None;
    for alpha in enumerate_even() {
        let v = theta_constant(&alpha, tau, eps)?;
        let m = v.value.norm();
        if best.as_ref().is_none_or(|(_, bm)| m < *bm) {
            best = Some((alpha, m));
        }
    }
    let (characteristic, modulus) = best.expect("36 candidates");
    Ok(MinNull {
        characteristic,
        modulus,
        hyperelliptic_candidate: modulus < threshold,
    })
}

#[derive(Clone, Debug)]
pub enum TransformKind {
    /// tau -> tau + B for an integer symmetric B.
    Translation([[i64; 3]; 3]),
    /// tau -> -tau^{-1}.
    Inversion,
}

/// Both sides of the modulus law for one symplectic transformation, with the
/// relative deviation. Only moduli are compared; the multiplier phases are
/// not asserted.
#[derive(Clone, Debug, Serialize)]
pub struct TransformReport {
    pub kind: String,
    pub lhs: f64,
    pub rhs: f64,
    pub relative_deviation: f64,
}

pub fn transform_check(tau: &PeriodMatrix, kind: &TransformKind, eps: f64) -> Result<TransformReport> {
    let base = chi18(tau, eps)?;
    let (name, lhs, rhs) = match kind {
        TransformKind::Translation(b) => {
            let shifted = tau.translate(b)?;
            let v = chi18(&shifted, eps)?;
            ("translation", v.value.norm(), base.value.norm())
        }
        TransformKind::Inversion => {
            let inv = tau.neg_inverse()?;
            let v = chi18(&inv, eps)?;
            let scale = tau.det().norm().powi(18);
            ("inversion", v.value.norm(), scale * base.value.norm())
        }
    };
    let denom = rhs.abs().max(ABS_FLOOR);
    Ok(TransformReport {
        kind: name.into(),
        lhs,
        rhs,
        relative_deviation: (lhs - rhs).abs() / denom,
    })
}

/// Least-squares fit of ys against xs; returns (slope, intercept, rss).
pub fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let slope = num / den;
    let intercept = ym - slope * xm;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    (slope, intercept, rss)
}

/// Vanishing-order estimate of chi18 in the q_{j+1} direction: the
/// least-squares slope of -log|chi18(tau0 + i t E_jj)| against 2 pi t over
/// the upper half of the samples.
#[derive(Clone, Debug, Serialize)]
pub struct CuspFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    /// (t, -log|chi18|) for every sample.
    pub samples: Vec<(f64, f64)>,
}

pub fn cusp_order(tau0: &PeriodMatrix, t_samples: &[f64], eps: f64) -> Result<CuspFit> {
    cusp_order_along(tau0, 0, t_samples, eps)
}

pub fn cusp_order_along(
    tau0: &PeriodMatrix,
    direction: usize,
    t_samples: &[f64],
    eps: f64,
) -> Result<CuspFit> {
    if direction > 2 {
        return Err(Error::Invalid("direction must be 0, 1 or 2".into()));
    }
    if t_samples.len() < 4 {
        return Err(Error::Invalid("need at least 4 samples for a slope fit".into()));
    }
    if t_samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Invalid("t samples must be strictly increasing".into()));
    }
    if t_samples[0] < 0.0 {
        return Err(Error::Invalid("t samples must be nonnegative".into()));
    }
    let mut samples = Vec::with_capacity(t_samples.len());
    for &t in t_samples {
        let tau_t = tau0.push_imag_diag(direction, t);
        let v = chi18(&tau_t, eps)?;
        let m = v.value.norm();
        if m < ABS_FLOOR || v.error_bound >= m {
            return Err(Error::PrecisionFloor(t));
        }
        samples.push((t, -m.ln()));
    }
    let half = samples.len() / 2;
    let xs: Vec<f64> = samples[half..]
        .iter()
        .map(|(t, _)| 2.0 * std::f64::consts::PI * t)
        .collect();
    let ys: Vec<f64> = samples[half..].iter().map(|(_, l)| *l).collect();
    let (slope, intercept, residual) = fit_line(&xs, &ys);
    Ok(CuspFit {
        slope,
        intercept,
        residual,
        samples,
    })
}
