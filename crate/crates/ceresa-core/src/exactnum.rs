//! Exact scalar arithmetic: arbitrary-precision rationals and the degree-6
//! cyclotomic field Q(zeta_7) on the power basis 1, z, ..., z^5.
//!
//! Rationals are `num_rational::BigRational`, which keeps values in lowest
//! terms with a positive denominator. `Cyclo7` reduces every result modulo
//! 1 + z + ... + z^6 = 0, so equality of canonical coefficient vectors is
//! equality in the field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `n/d` as an exact rational. Panics on `d = 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parse `"p/q"` or `"p"`. The denominator must be nonzero; the stored
/// representative always has a positive denominator.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `"p/q"` for non-integers, `"p"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An element of Q(zeta_7), zeta = exp(2 pi i / 7), stored as the canonical
/// degree-at-most-5 representative c0 + c1 z + ... + c5 z^5.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo7 {
    coeffs: [Rational; 6],
}

impl Cyclo7 {
    pub fn new(coeffs: [Rational; 6]) -> Self {
        Cyclo7 { coeffs }
    }

    pub fn zero() -> Self {
        Cyclo7::new(std::array::from_fn(|_| Rational::zero()))
    }

    pub fn one() -> Self {
        Cyclo7::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        let mut c: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        c[0] = r;
        Cyclo7::new(c)
    }

    /// zeta^k reduced to the canonical representative (zeta^6 = -1 - z - ... - z^5).
    pub fn zeta(k: u32) -> Self {
        let k = (k % 7) as usize;
        let mut c: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        if k < 6 {
            c[k] = Rational::one();
        } else {
            for ci in c.iter_mut() {
                *ci = -Rational::one();
            }
        }
        Cyclo7::new(c)
    }

    pub fn coeffs(&self) -> &[Rational; 6] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `Some(r)` when the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Reduce coefficients on z^0..z^6 to the canonical basis.
    fn reduce(c7: [Rational; 7]) -> Self {
        let t = c7[6].clone();
        let mut c: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = &c7[i] - &t;
        }
        Cyclo7::new(c)
    }

    /// Complex conjugation, the field automorphism z -> z^6.
    pub fn conj(&self) -> Self {
        let mut c7: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        for (i, ci) in self.coeffs.iter().enumerate() {
            c7[(7 - i) % 7] = &c7[(7 - i) % 7] + ci;
        }
        Cyclo7::reduce(c7)
    }

    /// Multiplicative inverse, or `None` for zero. Solved as a 6x6 rational
    /// linear system against the multiplication-by-self matrix.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // columns of M are self * z^j in canonical coordinates
        let mut m: [[Rational; 6]; 6] =
            std::array::from_fn(|_| std::array::from_fn(|_| Rational::zero()));
        for j in 0..6 {
            let col = self.clone() * Cyclo7::zeta(j as u32);
            for i in 0..6 {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        // solve M v = e0 by Gauss-Jordan
        let mut aug: Vec<Vec<Rational>> = (0..6)
            .map(|i| {
                let mut row: Vec<Rational> = m[i].to_vec();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..6 {
            let p = (c..6).find(|&i| !aug[i][c].is_zero())?;
            aug.swap(c, p);
            let pv = aug[c][c].clone();
            for x in aug[c].iter_mut() {
                *x = &*x / &pv;
            }
            for i in 0..6 {
                if i != c && !aug[i][c].is_zero() {
                    let f = aug[i][c].clone();
                    for j in 0..7 {
                        let sub = &f * &aug[c][j];
                        aug[i][j] = &aug[i][j] - &sub;
                    }
                }
            }
        }
        let mut c: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = aug[i][6].clone();
        }
        Some(Cyclo7::new(c))
    }

    /// Numerical value under zeta -> exp(2 pi i / 7), with a certified error
    /// below `10^-precision`. Fails when the coefficients are too large for
    /// double arithmetic to reach the requested precision.
    pub fn embed(&self, precision: u32) -> Result<Complex64> {
        let unreachable = |reason: &str| Error::PrecisionUnreachable {
            digits: precision,
            reason: reason.to_string(),
        };
        let mut value = Complex64::new(0.0, 0.0);
        let mut magnitude = 0.0f64;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c
                .to_f64()
                .ok_or_else(|| unreachable("coefficient exceeds double range"))?;
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / 7.0;
            value += cf * Complex64::new(angle.cos(), angle.sin());
            magnitude += cf.abs();
        }
        // conversion + root + accumulation rounding, each a few ulps
        let bound = magnitude * 1e-15 + 1e-16;
        if bound >= 10f64.powi(-(precision as i32)) {
            return Err(unreachable("double rounding exceeds the requested bound"));
        }
        Ok(value)
    }

    pub fn to_strings(&self) -> [String; 6] {
        std::array::from_fn(|i| format_rational(&self.coeffs[i]))
    }

    pub fn from_strings(parts: &[String]) -> Result<Self> {
        if parts.len() != 6 {
            return Err(Error::BadCyclotomic(format!(
                "expected 6 coefficients, got {}",
                parts.len()
            )));
        }
        let mut c: [Rational; 6] = std::array::from_fn(|_| Rational::zero());
        for (i, p) in parts.iter().enumerate() {
            c[i] = parse_rational(p)?;
        }
        Ok(Cyclo7::new(c))
    }
}

impl Add for Cyclo7 {
    type Output = Cyclo7;
    fn add(self, rhs: Cyclo7) -> Cyclo7 {
        &self + &rhs
    }
}

impl Add for &Cyclo7 {
    type Output = Cyclo7;
    fn add(self, rhs: &Cyclo7) -> Cyclo7 {
        Cyclo7::new(std::array::from_fn(|i| &self.coeffs[i] + &rhs.coeffs[i]))
    }
}

impl Sub for Cyclo7 {
    type Output = Cyclo7;
    fn sub(self, rhs: Cyclo7) -> Cyclo7 {
        &self - &rhs
    }
}

impl Sub for &Cyclo7 {
    type Output = Cyclo7;
    fn sub(self, rhs: &Cyclo7) -> Cyclo7 {
        Cyclo7::new(std::array::from_fn(|i| &self.coeffs[i] - &rhs.coeffs[i]))
    }
}

impl Neg for Cyclo7 {
    type Output = Cyclo7;
    fn neg(self) -> Cyclo7 {
        Cyclo7::new(self.coeffs.map(|c| -c))
    }
}

impl Mul for Cyclo7 {
    type Output = Cyclo7;
    fn mul(self, rhs: Cyclo7) -> Cyclo7 {
        &self * &rhs
    }
}

impl Mul for &Cyclo7 {
    type Output = Cyclo7;
    fn mul(self, rhs: &Cyclo7) -> Cyclo7 {
        let mut c7: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % 7;
                c7[k] = &c7[k] + &(a * b);
            }
        }
        Cyclo7::reduce(c7)
    }
}

impl fmt::Debug for Cyclo7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo7({})", self)
    }
}

impl fmt::Display for Cyclo7 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let s = format_rational(c);
            if first {
                first = false;
            } else if !s.starts_with('-') {
                write!(f, "+")?;
            }
            if k == 0 {
                write!(f, "{}", s)?;
            } else if s == "1" {
                write!(f, "z^{}", k)?;
            } else if s == "-1" {
                write!(f, "-z^{}", k)?;
            } else {
                write!(f, "{}*z^{}", s, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// sqrt(-7) = z + z^2 + z^4 - z^3 - z^5 - z^6 (the quadratic Gauss sum for 7).
pub fn sqrt_minus_7() -> Cyclo7 {
    let p = &(&Cyclo7::zeta(1) + &Cyclo7::zeta(2)) + &Cyclo7::zeta(4);
    let n = &(&Cyclo7::zeta(3) + &Cyclo7::zeta(5)) + &Cyclo7::zeta(6);
    &p - &n
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn rand_rat(rng: &mut ChaCha20Rng) -> Rational {
        rat(rng.gen_range(-9..=9), rng.gen_range(1..=9))
    }

    fn rand_cy(rng: &mut ChaCha20Rng) -> Cyclo7 {
        Cyclo7::new(std::array::from_fn(|_| rand_rat(rng)))
    }

    #[test]
    fn zeta_times_zeta6_is_one() {
        let p = Cyclo7::zeta(1) * Cyclo7::zeta(6);
        assert_eq!(p, Cyclo7::one());
    }

    #[test]
    fn sum_of_low_powers_reduces_to_minus_zeta6() {
        // 1 + z + ... + z^5 = -z^6; multiplying by 1 must leave it canonical
        let s = Cyclo7::new(std::array::from_fn(|_| Rational::one()));
        let prod = &s * &Cyclo7::one();
        assert_eq!(prod, s);
        let minus_z6 = -Cyclo7::zeta(6);
        assert_eq!(s, minus_z6);
    }

    #[test]
    fn gauss_sum_squares_to_minus_seven() {
        // oracle: brute-force expansion over exponents mod 7, reduced once at the end
        let signs: [i64; 7] = [0, 1, 1, -1, 1, -1, -1]; // coefficient of z^k in sqrt(-7)
        let mut c7: [Rational; 7] = std::array::from_fn(|_| Rational::zero());
        for a in 0..7usize {
            for b in 0..7usize {
                let co = rat_int(signs[a] * signs[b]);
                c7[(a + b) % 7] = &c7[(a + b) % 7] + &co;
            }
        }
        let t = c7[6].clone();
        let brute: [Rational; 6] = std::array::from_fn(|i| &c7[i] - &t);
        let expected = Cyclo7::from_rational(rat_int(-7));
        assert_eq!(Cyclo7::new(brute), expected);

        let s = sqrt_minus_7();
        assert_eq!(&s * &s, expected);
    }

    #[test]
    fn embed_basics() {
        let one = Cyclo7::one().embed(12).unwrap();
        assert!((one.re - 1.0).abs() < 1e-12 && one.im.abs() < 1e-12);

        let z = Cyclo7::zeta(1).embed(12).unwrap();
        let ang = 2.0 * std::f64::consts::PI / 7.0;
        assert!((z.re - ang.cos()).abs() < 1e-12);
        assert!((z.im - ang.sin()).abs() < 1e-12);

        // z + z^6 = 2 cos(2 pi / 7); reference value from 25-digit evaluation
        let c = (&Cyclo7::zeta(1) + &Cyclo7::zeta(6)).embed(12).unwrap();
        assert!((c.re - 1.246_979_603_717_467_1).abs() < 1e-12);
        assert!(c.im.abs() < 1e-12);
    }

    #[test]
    fn field_axioms_random_trials() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let x = rand_cy(&mut rng);
            let y = rand_cy(&mut rng);
            let z = rand_cy(&mut rng);
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            if !x.is_zero() {
                assert_eq!(&x * &x.inv().unwrap(), Cyclo7::one());
            }
        }
    }

    #[test]
    fn rational_canonical_form_after_ops() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let a = rand_rat(&mut rng);
            let b = rand_rat(&mut rng);
            let s = &a + &b;
            let p = &a * &b;
            for v in [&s, &p] {
                assert!(v.denom() > &BigInt::zero());
                assert!(num_integer::Integer::gcd(v.numer(), v.denom()).is_one() || v.numer().is_zero());
            }
        }
    }

    #[test]
    fn embedding_is_ring_homomorphism() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..200 {
            let x = rand_cy(&mut rng);
            let y = rand_cy(&mut rng);
            let lhs = (&x * &y).embed(10).unwrap();
            let rhs = x.embed(10).unwrap() * y.embed(10).unwrap();
            assert!((lhs - rhs).norm() < 1e-8, "multiplicativity within 10^-(p-2)");
            let lhs = (&x + &y).embed(10).unwrap();
            let rhs = x.embed(10).unwrap() + y.embed(10).unwrap();
            assert!((lhs - rhs).norm() < 1e-8);
        }
    }

    #[test]
    fn conjugation_is_an_involution_and_fixes_rationals() {
        let mut rng = ChaCha20Rng::seed_from_u64(10);
        for _ in 0..100 {
            let x = rand_cy(&mut rng);
            assert_eq!(x.conj().conj(), x);
            let n = &x * &x.conj();
            // norm is fixed by conjugation
            assert_eq!(n.conj(), n);
        }
        let r = Cyclo7::from_rational(rat(-3, 5));
        assert_eq!(r.conj(), r);
    }

    #[test]
    fn parse_and_format_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("5").unwrap(), rat_int(5));
        assert_eq!(format_rational(&rat(-3, 4)), "-3/4");
        assert_eq!(format_rational(&rat_int(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
    }
}
