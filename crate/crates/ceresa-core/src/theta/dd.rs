//! Minimal double-double arithmetic (~31 significant digits) for the
//! exponent accumulation in the theta series. Plain doubles lose accuracy in
//! the quadratic form once the imaginary displacement gets large; carrying
//! the exponent in a hi/lo pair and reducing phases mod 2*pi before exp/cos
//! keeps every term accurate to well below the series tail bound.

#[derive(Clone, Copy, Debug, Default)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: e }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    Dd { hi: s, lo: e }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let e = a.mul_add(b, -p);
    Dd { hi: p, lo: e }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    /// pi with a double-double tail.
    pub const PI: Dd = Dd {
        hi: std::f64::consts::PI,
        lo: 1.224_646_799_147_353_2e-16,
    };

    /// 2*pi with a double-double tail.
    pub const TWO_PI: Dd = Dd {
        hi: 2.0 * std::f64::consts::PI,
        lo: 2.449_293_598_294_706_4e-16,
    };

    #[inline]
    pub fn add(self, rhs: Dd) -> Dd {
        let s = two_sum(self.hi, rhs.hi);
        let e = s.lo + self.lo + rhs.lo;
        quick_two_sum(s.hi, e)
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Dd {
        let p = two_prod(self.hi, rhs.hi);
        let e = p.lo + self.hi * rhs.lo + self.lo * rhs.hi;
        quick_two_sum(p.hi, e)
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Dd {
        let p = two_prod(self.hi, rhs);
        let e = p.lo + self.lo * rhs;
        quick_two_sum(p.hi, e)
    }

    /// Accumulate the exact product of two doubles.
    #[inline]
    pub fn add_prod(self, a: f64, b: f64) -> Dd {
        self.add(two_prod(a, b))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    /// Reduce to (-2pi, 2pi) by subtracting the nearest multiple of 2*pi.
    #[inline]
    pub fn rem_two_pi(self) -> f64 {
        let k = (self.hi / Dd::TWO_PI.hi).round();
        if k == 0.0 {
            return self.to_f64();
        }
        self.add(Dd::TWO_PI.mul_f64(-k)).to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_product_accumulation() {
        // (1 + 2^-40)^2 accumulated exactly
        let x = 1.0 + (0.5f64).powi(40);
        let d = Dd::ZERO.add_prod(x, x);
        let expect_lo = 2.0 * (0.5f64).powi(40) + (0.5f64).powi(80);
        assert!((d.to_f64() - (1.0 + expect_lo)).abs() < 1e-30);
    }

    #[test]
    fn phase_reduction_tracks_large_arguments() {
        // 10^8 * pi reduced mod 2 pi should be very near 0 (even multiple)
        let big = Dd::PI.mul_f64(1.0e8);
        let r = big.rem_two_pi();
        assert!(r.abs() < 1e-7, "residual {r}");
        // and a half-integer multiple lands near pi
        let odd = Dd::PI.mul_f64(1.0e8 + 1.0);
        let r = odd.rem_two_pi().abs();
        assert!((r - std::f64::consts::PI).abs() < 1e-7, "residual {r}");
    }

    #[test]
    fn two_pi_constant_consistency() {
        let two_pi = Dd::PI.mul_f64(2.0);
        assert_eq!(two_pi.hi, Dd::TWO_PI.hi);
        assert!((two_pi.lo - Dd::TWO_PI.lo).abs() < 1e-31);
    }
}
