//! Exact arithmetic in cyclotomic fields Q(zeta_N), N divisible by 8.
//!
//! A [`Scalar`] is stored as its reduced coordinate vector with respect to the
//! power basis 1, z, z^2, ... of Q(zeta_N), reduced modulo the N-th cyclotomic
//! polynomial. The conductor is carried per value; mixed-conductor operations
//! coerce both operands into the lcm field. Requiring 8 | N keeps i = z^{N/4},
//! omega = z^{N/8} and sqrt(2) = omega + omega^{-1} available in every field
//! we ever touch.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("real_sign called on a non-real element")]
    NotReal,
}

/// Precomputed data for one cyclotomic field Q(zeta_n).
struct CycField {
    #[allow(dead_code)]
    n: u64,
    phi: usize,
    /// x^k reduced mod Phi_n, for k in phi..=max_pow (inclusive), as
    /// coefficient vectors of length phi.
    reductions: Vec<Vec<BigRational>>,
    max_pow: usize,
}

impl CycField {
    fn new(n: u64) -> CycField {
        assert!(n > 0 && n % 8 == 0, "conductor must be a positive multiple of 8");
        let phi_poly = cyclotomic_polynomial(n);
        let phi = phi_poly.len() - 1;
        // Precompute x^k mod Phi_n for k up to max(2*phi - 2, n - 1); products of
        // reduced elements need 2*phi - 2, conductor promotion and conjugation
        // need n - 1.
        let max_pow = std::cmp::max(2 * phi.saturating_sub(1), n as usize - 1);
        let mut reductions: Vec<Vec<BigRational>> = Vec::new();
        // x^phi = x^phi - Phi_n (Phi is monic).
        let mut cur: Vec<BigRational> = (0..phi)
            .map(|k| BigRational::from(-phi_poly[k].clone()))
            .collect();
        reductions.push(cur.clone());
        for _ in (phi + 1)..=max_pow {
            // multiply by x, fold the overflowing top coefficient back in
            let top = cur[phi - 1].clone();
            for k in (1..phi).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = BigRational::zero();
            if !top.is_zero() {
                let fold = &reductions[0];
                for k in 0..phi {
                    cur[k] += &top * &fold[k];
                }
            }
            reductions.push(cur.clone());
        }
        CycField { n, phi, reductions, max_pow }
    }

    /// Reduce a raw coefficient vector (arbitrary length) mod Phi_n.
    fn reduce(&self, raw: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.phi];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < self.phi {
                out[k] += c;
            } else {
                assert!(k <= self.max_pow, "power {} out of reduction table", k);
                let red = &self.reductions[k - self.phi];
                for j in 0..self.phi {
                    if !red[j].is_zero() {
                        out[j] += c * &red[j];
                    }
                }
            }
        }
        out
    }
}

static FIELDS: Lazy<Mutex<HashMap<u64, Arc<CycField>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn field(n: u64) -> Arc<CycField> {
    let mut map = FIELDS.lock().unwrap();
    map.entry(n).or_insert_with(|| Arc::new(CycField::new(n))).clone()
}

/// Phi_n as an integer polynomial (coefficient k at index k, monic), via the
/// recursive factorization of x^n - 1.
fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    let mut cache: HashMap<u64, Vec<BigInt>> = HashMap::new();
    cyclotomic_rec(n, &mut cache)
}

fn cyclotomic_rec(n: u64, cache: &mut HashMap<u64, Vec<BigInt>>) -> Vec<BigInt> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^n - 1
        let mut num = vec![BigInt::zero(); n as usize + 1];
        num[0] = BigInt::from(-1);
        num[n as usize] = BigInt::one();
        for d in 1..n {
            if n % d == 0 {
                let q = cyclotomic_rec(d, cache);
                num = int_poly_div_exact(&num, &q);
            }
        }
        num
    };
    cache.insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials (remainder known to be zero).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=(nd - dd)).rev() {
        let c = rem[k + dd].clone(); // den is monic for all our inputs
        if !c.is_zero() {
            quot[k] = c.clone();
            for j in 0..=dd {
                let t = &den[j] * &c;
                rem[k + j] -= t;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

pub type Sign = i32;

/// An element of Q(zeta_N) in reduced power-basis coordinates.
#[derive(Clone)]
pub struct Scalar {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({}; {})", self.conductor, self)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = if first || !c.is_negative() { c.clone() } else { -c.clone() };
            match k {
                0 => write!(f, "{}", a)?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{}*", a)?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{}", k)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Scalar {
    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(n: u64) -> usize {
        field(n).phi
    }

    pub fn zero(n: u64) -> Scalar {
        let f = field(n);
        Scalar { conductor: n, coeffs: vec![BigRational::zero(); f.phi] }
    }

    pub fn one(n: u64) -> Scalar {
        Scalar::from_rational(n, BigRational::one())
    }

    pub fn from_rational(n: u64, q: BigRational) -> Scalar {
        let f = field(n);
        let mut coeffs = vec![BigRational::zero(); f.phi];
        coeffs[0] = q;
        Scalar { conductor: n, coeffs }
    }

    pub fn from_integer(n: u64, v: i64) -> Scalar {
        Scalar::from_rational(n, BigRational::from(BigInt::from(v)))
    }

    /// Build from raw power-basis coordinates (any length < reduction bound).
    pub fn from_coeffs(n: u64, raw: Vec<BigRational>) -> Scalar {
        let f = field(n);
        Scalar { conductor: n, coeffs: f.reduce(&raw) }
    }

    /// zeta_n^pow (pow taken mod n).
    pub fn root_of_unity(n: u64, pow: i64) -> Scalar {
        let f = field(n);
        let p = pow.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigRational::zero(); p + 1];
        raw[p] = BigRational::one();
        Scalar { conductor: n, coeffs: f.reduce(&raw) }
    }

    /// i = zeta_n^{n/4}.
    pub fn i_unit(n: u64) -> Scalar {
        Scalar::root_of_unity(n, (n / 4) as i64)
    }

    /// omega = zeta_n^{n/8}, the 8th root of unity with omega^2 = i.
    pub fn omega(n: u64) -> Scalar {
        Scalar::root_of_unity(n, (n / 8) as i64)
    }

    /// sqrt(2) = omega + omega^{-1}.
    pub fn sqrt2(n: u64) -> Scalar {
        Scalar::omega(n).add(&Scalar::root_of_unity(n, -((n / 8) as i64)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Rational part if the element is rational, None otherwise.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embed into Q(zeta_m), n | m.
    pub fn promote(&self, m: u64) -> Scalar {
        if m == self.conductor {
            return self.clone();
        }
        assert!(m % self.conductor == 0, "promotion target must be a multiple of the conductor");
        let step = (m / self.conductor) as usize;
        let f = field(m);
        let mut raw = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                raw[k * step] = c.clone();
            }
        }
        Scalar { conductor: m, coeffs: f.reduce(&raw) }
    }

    fn lcm_pair(&self, rhs: &Scalar) -> (Scalar, Scalar) {
        if self.conductor == rhs.conductor {
            (self.clone(), rhs.clone())
        } else {
            let m = self.conductor.lcm(&rhs.conductor);
            (self.promote(m), rhs.promote(m))
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        let (a, b) = self.lcm_pair(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Scalar { conductor: a.conductor, coeffs }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        let (a, b) = self.lcm_pair(rhs);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Scalar { conductor: a.conductor, coeffs }
    }

    pub fn neg(&self) -> Scalar {
        Scalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        let (a, b) = self.lcm_pair(rhs);
        let f = field(a.conductor);
        let mut raw = vec![BigRational::zero(); 2 * f.phi - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    raw[i + j] += x * y;
                }
            }
        }
        Scalar { conductor: a.conductor, coeffs: f.reduce(&raw) }
    }

    pub fn scale(&self, q: &BigRational) -> Scalar {
        Scalar { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Field inverse via the extended Euclidean algorithm against Phi_n.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero(self.conductor));
        }
        let f = field(self.conductor);
        // Bezout: u * self + v * Phi = gcd = const. Phi_n is irreducible so the
        // gcd with any nonzero reduced element is a nonzero constant.
        let phi_poly: Vec<BigRational> = {
            let ints = cyclotomic_polynomial(self.conductor);
            ints.into_iter().map(BigRational::from).collect()
        };
        let (g, u) = poly_half_egcd(&trim(&self.coeffs), &phi_poly);
        debug_assert_eq!(g.len(), 1);
        let ginv = BigRational::one() / g[0].clone();
        let coeffs = f.reduce(&u.iter().map(|c| c * &ginv).collect::<Vec<_>>());
        Ok(Scalar { conductor: self.conductor, coeffs })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> Scalar {
        let f = field(self.conductor);
        let n = self.conductor as usize;
        let mut raw = vec![BigRational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let t = (n - k) % n;
                raw[t] += c;
            }
        }
        Scalar { conductor: self.conductor, coeffs: f.reduce(&raw) }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one(self.conductor);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact sign of a totally real element under the standard embedding
    /// zeta_N -> exp(2 pi i / N). Zero is decided algebraically; a nonzero
    /// value is separated from 0 by adaptive-precision interval evaluation.
    pub fn real_sign(&self) -> Result<Sign, ScalarError> {
        if self.is_zero() {
            return Ok(0);
        }
        if !self.is_real() {
            return Err(ScalarError::NotReal);
        }
        let n = self.conductor;
        let mut prec: u32 = 32;
        loop {
            let pi = pi_interval(prec);
            let mut acc = Iv::zero();
            for (k, c) in self.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if k == 0 {
                    acc = acc.add(&Iv::point(c.clone()));
                    continue;
                }
                let ratio = BigRational::new(BigInt::from(2 * k as u64), BigInt::from(n));
                let theta = pi.scale(&ratio);
                let cos = cos_interval(&theta, prec);
                acc = acc.add(&cos.scale(c));
            }
            if acc.lo.is_positive() {
                return Ok(1);
            }
            if acc.hi.is_negative() {
                return Ok(-1);
            }
            prec *= 2;
        }
    }

    /// Real and imaginary parts under the standard embedding, as field
    /// elements: re = (a + conj a)/2 and im = (a - conj a)/(2i).
    pub fn re_im(&self) -> (Scalar, Scalar) {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let c = self.conj();
        let re = self.add(&c).scale(&half);
        let two_i = Scalar::i_unit(self.conductor).scale(&BigRational::from(BigInt::from(2)));
        let im = self.sub(&c).mul(&two_i.inv().expect("2i is invertible"));
        (re, im)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = self.lcm_pair(other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for Scalar {}

fn trim(v: &[BigRational]) -> Vec<BigRational> {
    let mut out = v.to_vec();
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

/// Half-extended gcd over Q[x]: returns (gcd, u) with u*a = gcd (mod b).
fn poly_half_egcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(a);
    let mut r1 = trim(b);
    let mut u0 = vec![BigRational::one()];
    let mut u1 = vec![BigRational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let u = poly_sub(&u0, &poly_mul(&q, &u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u;
    }
    (r0, u0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = std::cmp::max(a.len(), b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (vec![BigRational::zero()], trim(&rem));
    }
    let lead = b[db].clone();
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if !c.is_zero() {
            quot[k] = c.clone();
            for j in 0..=db {
                let t = &b[j] * &c;
                rem[k + j] -= t;
            }
        }
    }
    (trim(&quot), trim(&rem))
}

// ---------------------------------------------------------------------------
// Rational interval arithmetic for the adaptive sign test.

#[derive(Clone, Debug)]
struct Iv {
    lo: BigRational,
    hi: BigRational,
}

impl Iv {
    fn zero() -> Iv {
        Iv { lo: BigRational::zero(), hi: BigRational::zero() }
    }

    fn point(v: BigRational) -> Iv {
        Iv { lo: v.clone(), hi: v }
    }

    fn add(&self, rhs: &Iv) -> Iv {
        Iv { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }

    fn scale(&self, q: &BigRational) -> Iv {
        if q.is_negative() {
            Iv { lo: &self.hi * q, hi: &self.lo * q }
        } else {
            Iv { lo: &self.lo * q, hi: &self.hi * q }
        }
    }
}

fn pow2(bits: u32) -> BigRational {
    BigRational::from(BigInt::from(BigUint::from(2u32).pow(bits)))
}

fn eps2(bits: u32) -> BigRational {
    BigRational::one() / pow2(bits)
}

/// Round to the dyadic grid 2^-bits, rounding toward minus infinity.
fn dyadic_floor(x: &BigRational, bits: u32) -> BigRational {
    let scaled = x * pow2(bits);
    let fl = scaled.floor();
    fl / pow2(bits)
}

/// arctan(1/x) as an interval of width <= 2^-(prec): alternating series with
/// decreasing terms, truncation error bounded by the first omitted term.
fn atan_recip_interval(x: u64, prec: u32) -> Iv {
    let eps = eps2(prec + 2);
    let xq = BigInt::from(x);
    let x2 = BigRational::from(&xq * &xq);
    let mut term = BigRational::one() / BigRational::from(xq);
    let mut sum = BigRational::zero();
    let mut j: u64 = 0;
    loop {
        let contrib = &term / BigRational::from(BigInt::from(2 * j + 1));
        if contrib < eps {
            // remainder magnitude bounded by contrib
            return Iv { lo: &sum - &contrib, hi: &sum + &contrib };
        }
        if j % 2 == 0 {
            sum += &contrib;
        } else {
            sum -= &contrib;
        }
        term = &term / &x2;
        j += 1;
    }
}

/// pi via Machin's formula, interval of width about 2^-prec.
fn pi_interval(prec: u32) -> Iv {
    let a = atan_recip_interval(5, prec + 6);
    let b = atan_recip_interval(239, prec + 6);
    let sixteen = BigRational::from(BigInt::from(16));
    let four = BigRational::from(BigInt::from(-4));
    a.scale(&sixteen).add(&b.scale(&four))
}

/// cos of a rational point, interval of width <= 2*eps.
fn cos_taylor(m: &BigRational, prec: u32) -> Iv {
    let eps = eps2(prec);
    let m2 = m * m;
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    let mut j: u64 = 0;
    loop {
        // term = m^{2j} / (2j)!; once the next ratio m^2/((2j+1)(2j+2)) < 1 the
        // series alternates with decreasing magnitudes.
        let next_den = BigRational::from(BigInt::from((2 * j + 1) * (2 * j + 2)));
        let decreasing = &m2 < &next_den;
        if decreasing && term < eps {
            return Iv { lo: &sum - &term, hi: &sum + &term };
        }
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = &term * &m2 / next_den;
        j += 1;
    }
}

/// cos over an interval: evaluate at a dyadically-rounded midpoint and widen
/// by the radius (|cos'| <= 1).
fn cos_interval(theta: &Iv, prec: u32) -> Iv {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mid = (&theta.lo + &theta.hi) * &half;
    let m = dyadic_floor(&mid, prec + 6);
    let rad_hi = &theta.hi - &m;
    let rad_lo = &m - &theta.lo;
    let rad = if rad_hi > rad_lo { rad_hi } else { rad_lo };
    let c = cos_taylor(&m, prec + 6);
    Iv { lo: &c.lo - &rad, hi: &c.hi + &rad }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn cyclotomic_polys() {
        // Phi_8 = x^4 + 1
        let p8 = cyclotomic_polynomial(8);
        assert_eq!(p8, vec![1, 0, 0, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>());
        // Phi_24 = x^8 - x^4 + 1
        let p24 = cyclotomic_polynomial(24);
        assert_eq!(
            p24,
            vec![1, 0, 0, 0, -1, 0, 0, 0, 1].into_iter().map(BigInt::from).collect::<Vec<_>>()
        );
        assert_eq!(Scalar::degree(8), 4);
        assert_eq!(Scalar::degree(40), 16);
    }

    #[test]
    fn omega_squares_to_i() {
        for n in [8u64, 24, 40] {
            let w = Scalar::omega(n);
            assert_eq!(w.mul(&w), Scalar::i_unit(n));
            let i = Scalar::i_unit(n);
            assert_eq!(i.mul(&i), Scalar::from_integer(n, -1));
            let s = Scalar::sqrt2(n);
            assert_eq!(s.mul(&s), Scalar::from_integer(n, 2));
        }
    }

    #[test]
    fn inverse_of_one_and_zeta8() {
        assert_eq!(Scalar::one(8).inv().unwrap(), Scalar::one(8));
        // zeta8 * zeta8^3 = zeta8^4 = -1, hence inv(zeta8) = -zeta8^3
        let z = Scalar::root_of_unity(8, 1);
        let expect = Scalar::root_of_unity(8, 3).neg();
        assert_eq!(z.inv().unwrap(), expect);
        assert_eq!(z.mul(&expect), Scalar::one(8));
        assert_eq!(Scalar::zero(8).inv(), Err(ScalarError::DivisionByZero(8)));
    }

    #[test]
    fn conjugation_is_involutive_automorphism() {
        let a = Scalar::from_coeffs(8, vec![rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 5)]);
        let b = Scalar::root_of_unity(8, 3).add(&Scalar::from_integer(8, 2));
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        assert_eq!(a.add(&b).conj(), a.conj().add(&b.conj()));
        assert!(Scalar::sqrt2(8).is_real());
        assert!(!Scalar::i_unit(8).is_real());
    }

    #[test]
    fn real_sign_basics() {
        assert_eq!(Scalar::zero(8).real_sign().unwrap(), 0);
        let s2 = Scalar::sqrt2(8);
        let one = Scalar::one(8);
        assert_eq!(s2.sub(&one).real_sign().unwrap(), 1);
        assert_eq!(one.sub(&s2).real_sign().unwrap(), -1);
        assert_eq!(Scalar::i_unit(8).real_sign(), Err(ScalarError::NotReal));
        // sqrt2 - 141/100 > 0 and sqrt2 - 142/100 < 0
        assert_eq!(s2.sub(&Scalar::from_rational(8, rat(141, 100))).real_sign().unwrap(), 1);
        assert_eq!(s2.sub(&Scalar::from_rational(8, rat(142, 100))).real_sign().unwrap(), -1);
    }

    #[test]
    fn real_square_is_positive() {
        let vals = [
            Scalar::sqrt2(8),
            Scalar::from_rational(8, rat(-7, 3)),
            Scalar::sqrt2(24).add(&Scalar::from_integer(24, -5)),
        ];
        for v in vals {
            assert_eq!(v.mul(&v).real_sign().unwrap(), 1);
        }
    }

    #[test]
    fn conductor_coercion_commutes() {
        let a = Scalar::root_of_unity(8, 1);
        let b = Scalar::root_of_unity(24, 3); // zeta24^3 = zeta8
        assert_eq!(a, b);
        let c = Scalar::root_of_unity(24, 8); // zeta3
        let prod = a.mul(&c);
        assert_eq!(prod.conductor(), 24);
        assert_eq!(prod, Scalar::root_of_unity(24, 11));
        // embedding respects arithmetic
        let x = Scalar::sqrt2(8);
        let y = Scalar::from_rational(8, rat(3, 7));
        assert_eq!(x.add(&y).promote(24), x.promote(24).add(&y.promote(24)));
        assert_eq!(x.mul(&y).promote(24), x.promote(24).mul(&y.promote(24)));
    }

    #[test]
    fn re_im_split() {
        let z = Scalar::omega(8); // (1 + i)/sqrt2
        let (re, im) = z.re_im();
        assert!(re.is_real() && im.is_real());
        let back = re.add(&im.mul(&Scalar::i_unit(8)));
        assert_eq!(back, z);
        // re(omega) = sqrt2/2 > 0
        assert_eq!(re.real_sign().unwrap(), 1);
        assert_eq!(re.scale(&rat(2, 1)), Scalar::sqrt2(8));
    }
}
