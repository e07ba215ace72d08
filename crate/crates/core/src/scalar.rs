//! Complex scalar backends.
//!
//! Every kernel in this crate is generic over [`Scalar`]. Two backends exist:
//! [`Complex64`] for speed and signal processing, and [`GaussianRational`]
//! (complex numbers with exact rational parts) for turning algebraic identities
//! into exact checks on sampled points.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_complex::Complex;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::tensor::Constants;

pub use num_complex::Complex64;

/// Exact rational number used by the rational backend.
pub type Rational = Ratio<i128>;

/// Complex number with exact rational real and imaginary parts.
pub type GaussianRational = Complex<Rational>;

/// Largest denominator produced by [`Scalar::sample`] in the rational backend.
pub const MAX_SAMPLE_DENOMINATOR: i128 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Float,
    Rational,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Float => "float",
            Backend::Rational => "rational",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "float" | "f64" => Ok(Backend::Float),
            "rational" | "exact" => Ok(Backend::Rational),
            other => Err(format!("unknown backend `{other}` (expected `float` or `rational`)")),
        }
    }
}

/// Complex field element used by all tensor kernels.
pub trait Scalar:
    Copy
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    /// `num / den` as a real scalar. Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }
    fn conj(&self) -> Self;
    /// Real part, returned as a scalar with zero imaginary part.
    fn re(&self) -> Self;
    /// Imaginary part, returned as a real scalar.
    fn im(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// `|z|²` as a real scalar.
    fn norm_sqr(&self) -> Self {
        (*self * self.conj()).re()
    }
    fn to_c64(&self) -> Complex64;
    /// Magnitude as `f64`, used for residual reporting.
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    /// Equality test: exact for the rational backend, relative tolerance for
    /// floats (`|a-b| <= tol * max(1, |a|, |b|)`).
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;
    fn is_real(&self, tol: f64) -> bool {
        self.im().approx_eq(&Self::zero(), tol)
    }
    /// Exact rational parts, if this backend is exact.
    fn rational_parts(&self) -> Option<(Rational, Rational)>;
    /// Deterministic random sample: uniform in `[-1,1]²` for floats, small
    /// rationals with denominators at most [`MAX_SAMPLE_DENOMINATOR`] otherwise.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
    /// Real-valued random sample (zero imaginary part).
    fn sample_real<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::sample(rng).re()
    }
    /// Shared precomputed metric and Levi-Civita tensors for this backend.
    fn constants() -> &'static Constants<Self>;
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> Self {
        Complex64::new(self.re, 0.0)
    }

    fn im(&self) -> Self {
        Complex64::new(self.im, 0.0)
    }

    fn recip(&self) -> Option<Self> {
        if Scalar::is_zero(self) {
            None
        } else {
            Some(self.inv())
        }
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn norm_sqr(&self) -> Self {
        Complex64::new(Complex::norm_sqr(self), 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (*self - *other).norm() <= tol * scale
    }

    fn rational_parts(&self) -> Option<(Rational, Rational)> {
        None
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
    }

    fn constants() -> &'static Constants<Self> {
        static CONSTANTS: OnceLock<Constants<Complex64>> = OnceLock::new();
        CONSTANTS.get_or_init(Constants::build)
    }
}

fn sample_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let den = rng.random_range(1..=MAX_SAMPLE_DENOMINATOR);
    let num = rng.random_range(-MAX_SAMPLE_DENOMINATOR..=MAX_SAMPLE_DENOMINATOR);
    Ratio::new(num, den)
}

impl Scalar for GaussianRational {
    const BACKEND: Backend = Backend::Rational;

    fn zero() -> Self {
        Complex::new(Rational::zero(), Rational::zero())
    }

    fn one() -> Self {
        Complex::new(Rational::one(), Rational::zero())
    }

    fn i() -> Self {
        Complex::new(Rational::zero(), Rational::one())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Complex::new(Ratio::new(num as i128, den as i128), Rational::zero())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn re(&self) -> Self {
        Complex::new(self.re, Rational::zero())
    }

    fn im(&self) -> Self {
        Complex::new(self.im, Rational::zero())
    }

    fn recip(&self) -> Option<Self> {
        let n = self.re * self.re + self.im * self.im;
        if n.is_zero() {
            None
        } else {
            Some(Complex::new(self.re / n, -self.im / n))
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn norm_sqr(&self) -> Self {
        Complex::new(self.re * self.re + self.im * self.im, Rational::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn rational_parts(&self) -> Option<(Rational, Rational)> {
        Some((self.re, self.im))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Complex::new(sample_rational(rng), sample_rational(rng))
    }

    fn constants() -> &'static Constants<Self> {
        static CONSTANTS: OnceLock<Constants<GaussianRational>> = OnceLock::new();
        CONSTANTS.get_or_init(Constants::build)
    }
}

pub fn ratio_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p"`, `"p/q"`, or a terminating decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().ok()?;
        let q: i128 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Ratio::new(p, q));
    }
    if let Ok(n) = s.parse::<i128>() {
        return Some(Ratio::from_integer(n));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if frac_part.is_empty() && int_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) || frac_part.len() > 30 {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    let denom = 10i128.checked_pow(frac_part.len() as u32)?;
    let r = Ratio::new(numer, denom);
    Some(if neg { -r } else { r })
}

/// Builds a Gaussian rational from real and imaginary parts.
pub fn gaussian(re: Rational, im: Rational) -> GaussianRational {
    Complex::new(re, im)
}

/// `true` when `z` has exact unit modulus.
pub fn is_unit_gaussian(z: &GaussianRational) -> bool {
    (z.re * z.re + z.im * z.im).is_one()
}
