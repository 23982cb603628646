//! Exact arithmetic in a real algebraic number field `Q(alpha)`.
//!
//! A [`RealAlgebraicField`] fixes a monic integer minimal polynomial together
//! with a rational interval isolating exactly one of its real roots `alpha`.
//! A [`FieldElement`] is a rational coefficient vector of length `D` (the
//! degree), representing `c0 + c1*alpha + ... + c_{D-1}*alpha^{D-1}`; the
//! representation is canonical, so equality is coefficient equality.
//!
//! Signs are decided exactly: zero symbolically, nonzero by bisection
//! refinement of the isolating interval. No floating point is involved
//! anywhere; [`FieldElement::approx`] produces rational approximations for
//! reporting layers.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::qpoly::{self, QPoly};

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not invertible: its representative shares a factor with the minimal polynomial (the polynomial is not irreducible)")]
    NotInvertible,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("expected {expected} coefficients, got {got}")]
    WrongCoefficientCount { expected: usize, got: usize },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// A real algebraic number field `Q(alpha)`, presented by a monic integer
/// minimal polynomial and an isolating interval for the chosen real root.
///
/// Degree 1 degenerates to the rational field; the interval is then unused.
/// For degree >= 4 irreducibility is only partially verified (squarefreeness
/// and absence of integer roots); a reducible polynomial surfaces later as
/// [`ScalarError::NotInvertible`].
pub struct RealAlgebraicField {
    min_poly: Vec<BigInt>,
    monic: QPoly,
    degree: usize,
    interval: (BigRational, BigRational),
    refined: RwLock<(BigRational, BigRational)>,
}

impl fmt::Debug for RealAlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealAlgebraicField")
            .field("min_poly", &self.min_poly)
            .field("interval", &self.interval)
            .finish()
    }
}

impl PartialEq for RealAlgebraicField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly && self.interval == other.interval
    }
}
impl Eq for RealAlgebraicField {}

impl fmt::Display for RealAlgebraicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 1 {
            return write!(f, "Q");
        }
        write!(f, "Q(a), a root of ")?;
        let mut first = true;
        for (i, c) in self.min_poly.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if a.is_one() => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
            first = false;
        }
        write!(
            f,
            " in ({}, {})",
            format_rational(&self.interval.0),
            format_rational(&self.interval.1)
        )
    }
}

impl RealAlgebraicField {
    /// Builds a field from integer coefficients (little-endian) and an
    /// isolating interval. The polynomial must be monic after clearing
    /// content and sign, squarefree, of degree >= 1, and the interval must
    /// contain exactly one real root with nonzero values at both endpoints.
    pub fn new(
        min_poly: Vec<BigInt>,
        root_interval: Option<(BigRational, BigRational)>,
    ) -> Result<Arc<Self>, ScalarError> {
        let mut coeffs = min_poly;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(ScalarError::InvalidField(
                "minimal polynomial must have degree >= 1".into(),
            ));
        }
        // clear content and normalize the leading sign
        let mut content = BigInt::zero();
        for c in &coeffs {
            content = content.gcd(c);
        }
        if coeffs.last().unwrap().is_negative() {
            content = -content;
        }
        for c in &mut coeffs {
            *c /= &content;
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(ScalarError::InvalidField(format!(
                "polynomial is not monic after clearing content (leading coefficient {})",
                coeffs.last().unwrap()
            )));
        }
        let degree = coeffs.len() - 1;
        let monic = qpoly::from_bigint(&coeffs);

        if degree == 1 {
            let interval = (BigRational::zero(), BigRational::one());
            return Ok(Arc::new(Self {
                min_poly: coeffs,
                monic,
                degree,
                refined: RwLock::new(interval.clone()),
                interval,
            }));
        }

        let g = qpoly::gcd(&monic, &qpoly::derivative(&monic));
        if qpoly::degree(&g) >= 1 {
            return Err(ScalarError::InvalidField(
                "minimal polynomial is not squarefree".into(),
            ));
        }
        if let Some(root) = integer_root(&coeffs) {
            return Err(ScalarError::InvalidField(format!(
                "minimal polynomial has the rational root {root}, so it is reducible"
            )));
        }

        let (lo, hi) = root_interval.ok_or_else(|| {
            ScalarError::InvalidField("degree >= 2 requires a root interval".into())
        })?;
        if lo >= hi {
            return Err(ScalarError::InvalidField(
                "root interval must satisfy lo < hi".into(),
            ));
        }
        if qpoly::eval(&monic, &lo).is_zero() || qpoly::eval(&monic, &hi).is_zero() {
            return Err(ScalarError::InvalidField(
                "minimal polynomial vanishes at an interval endpoint".into(),
            ));
        }
        let roots = qpoly::count_roots_in(&monic, &lo, &hi);
        if roots != 1 {
            return Err(ScalarError::InvalidField(format!(
                "interval must isolate exactly one real root, found {roots}"
            )));
        }
        Ok(Arc::new(Self {
            min_poly: coeffs,
            monic,
            degree,
            refined: RwLock::new((lo.clone(), hi.clone())),
            interval: (lo, hi),
        }))
    }

    /// The rational field, as the degenerate degree-1 case.
    pub fn rationals() -> Arc<Self> {
        Self::new(vec![BigInt::zero(), BigInt::one()], None).unwrap()
    }

    /// `Q(sqrt(n))` for a squarefree integer `n >= 2`, with the positive root.
    pub fn quadratic(n: i64) -> Result<Arc<Self>, ScalarError> {
        Self::new(
            vec![BigInt::from(-n), BigInt::zero(), BigInt::one()],
            Some((
                BigRational::zero(),
                BigRational::from_integer(BigInt::from(n)),
            )),
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn root_interval(&self) -> (BigRational, BigRational) {
        self.interval.clone()
    }

    pub fn is_rational_field(&self) -> bool {
        self.degree == 1
    }

    /// Builds an element from its coefficient vector (length at most `D`;
    /// shorter vectors are zero-padded).
    pub fn element(
        self: &Arc<Self>,
        coeffs: Vec<BigRational>,
    ) -> Result<FieldElement, ScalarError> {
        if coeffs.len() > self.degree {
            return Err(ScalarError::WrongCoefficientCount {
                expected: self.degree,
                got: coeffs.len(),
            });
        }
        let mut c = coeffs;
        c.resize(self.degree, BigRational::zero());
        Ok(FieldElement {
            field: Arc::clone(self),
            coeffs: c,
        })
    }

    pub fn from_rational(self: &Arc<Self>, r: BigRational) -> FieldElement {
        self.element(vec![r]).unwrap()
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> FieldElement {
        self.from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        self.from_int(0)
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_int(1)
    }

    /// The generator `alpha`. For a degree-1 field this is the (rational)
    /// root itself.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        if self.degree == 1 {
            return self.from_rational(-self.monic[0].clone());
        }
        let mut c = vec![BigRational::zero(); self.degree];
        c[1] = BigRational::one();
        self.element(c).unwrap()
    }

    pub fn same_field(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }

    /// Current isolating interval, after any cached refinement.
    fn current_interval(&self) -> (BigRational, BigRational) {
        self.refined.read().unwrap().clone()
    }

    fn store_interval(&self, lo: BigRational, hi: BigRational) {
        let mut guard = self.refined.write().unwrap();
        if &hi - &lo < &guard.1 - &guard.0 {
            *guard = (lo, hi);
        }
    }

    /// One bisection step on an interval that brackets the root.
    fn bisect(&self, lo: &BigRational, hi: &BigRational) -> (BigRational, BigRational) {
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        let at_mid = qpoly::eval(&self.monic, &mid);
        assert!(
            !at_mid.is_zero(),
            "minimal polynomial has a rational root inside the isolating interval"
        );
        let at_lo = qpoly::eval(&self.monic, lo);
        if at_lo.is_positive() != at_mid.is_positive() {
            (lo.clone(), mid)
        } else {
            (mid, hi.clone())
        }
    }
}

/// An element of a fixed [`RealAlgebraicField`], stored as its canonical
/// coefficient vector. Immutable and safe to share across threads.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<RealAlgebraicField>,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({self})")
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_field(&other.field) && self.coeffs == other.coeffs
    }
}
impl Eq for FieldElement {}

impl fmt::Display for FieldElement {
    /// The `[p/q, ...]` coefficient-tuple encoding.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, "]")
    }
}

impl FieldElement {
    pub fn field(&self) -> &Arc<RealAlgebraicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// True when the element lies in the prime field (no generator part).
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeffs[0].clone())
    }

    /// True when the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.as_rational() {
            Some(r) if r.is_integer() => Some(r.to_integer()),
            _ => None,
        }
    }

    fn rep(&self) -> QPoly {
        qpoly::normalize(self.coeffs.clone())
    }

    fn from_rep(field: &Arc<RealAlgebraicField>, rep: QPoly) -> Self {
        let mut coeffs = rep;
        assert!(coeffs.len() <= field.degree);
        coeffs.resize(field.degree, BigRational::zero());
        FieldElement {
            field: Arc::clone(field),
            coeffs,
        }
    }

    fn check_same_field(&self, other: &Self) {
        assert!(
            self.field.same_field(&other.field),
            "field elements from different fields"
        );
    }

    pub fn scale_rat(&self, s: &BigRational) -> Self {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.field.from_rational(BigRational::one() / r));
        }
        let (g, s, _) = qpoly::extended_gcd(&self.rep(), &self.field.monic);
        if qpoly::degree(&g) >= 1 {
            return Err(ScalarError::NotInvertible);
        }
        // g is the constant 1 after normalization, so s * rep = 1 mod min_poly
        let (_, r) = qpoly::div_rem(&s, &self.field.monic);
        Ok(Self::from_rep(&self.field, r))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_same_field(other);
        Ok(self * &other.inv()?)
    }

    /// Exact sign of the real value: `-1`, `0`, or `+1`. Zero is decided
    /// symbolically; a nonzero sign by interval refinement, which terminates
    /// because a nonzero element cannot vanish at the isolated root.
    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(r) = self.as_rational() {
            return if r.is_positive() { 1 } else { -1 };
        }
        let rep = self.rep();
        let g = qpoly::gcd(&rep, &self.field.monic);
        let (mut lo, mut hi) = self.field.current_interval();
        if qpoly::degree(&g) >= 1 {
            // The representative shares roots with the minimal polynomial;
            // it vanishes at alpha exactly when the shared factor does.
            let glo = qpoly::eval(&g, &lo);
            let ghi = qpoly::eval(&g, &hi);
            if glo.is_positive() != ghi.is_positive() {
                return 0;
            }
        }
        loop {
            let (elo, ehi) = qpoly::eval_interval(&rep, &lo, &hi);
            if elo.is_positive() {
                self.field.store_interval(lo, hi);
                return 1;
            }
            if ehi.is_negative() {
                self.field.store_interval(lo, hi);
                return -1;
            }
            (lo, hi) = self.field.bisect(&lo, &hi);
        }
    }

    /// A rational `r` with `|r - self| < eps`, by root-interval refinement.
    pub fn approx(&self, eps: &BigRational) -> BigRational {
        assert!(eps.is_positive(), "eps must be positive");
        if let Some(r) = self.as_rational() {
            return r;
        }
        let rep = self.rep();
        let (mut lo, mut hi) = self.field.current_interval();
        loop {
            let (elo, ehi) = qpoly::eval_interval(&rep, &lo, &hi);
            if &ehi - &elo < *eps {
                self.field.store_interval(lo, hi);
                return (elo + ehi) / BigRational::from_integer(BigInt::from(2));
            }
            (lo, hi) = self.field.bisect(&lo, &hi);
        }
    }

    /// Floating-point approximation for plotting and report layers only.
    pub fn to_f64(&self) -> f64 {
        let eps = BigRational::new(BigInt::one(), BigInt::from(1u64 << 60));
        let r = self.approx(&eps);
        rational_to_f64(&r)
    }

    /// Largest integer `<= self`, decided exactly.
    pub fn floor(&self) -> BigInt {
        if let Some(r) = self.as_rational() {
            return r.floor().to_integer();
        }
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let r = self.approx(&half);
        // |r - x| < 1/2, so floor(x) is in {floor(r) - 1, floor(r), floor(r) + 1}
        let mut k: BigInt = r.floor().to_integer() - 1;
        loop {
            // floor(x) = k  iff  k <= x < k + 1
            let next = &k + 1;
            let ge_k = (self
                - &self
                    .field
                    .from_rational(BigRational::from_integer(k.clone())))
                .sign()
                >= 0;
            let lt_next =
                (self - &self.field.from_rational(BigRational::from_integer(next))).sign() < 0;
            if ge_k && lt_next {
                return k;
            }
            k += 1;
        }
    }

    pub fn cmp_val(&self, other: &Self) -> std::cmp::Ordering {
        self.check_same_field(other);
        match (self - other).sign() {
            1 => std::cmp::Ordering::Greater,
            -1 => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Equal,
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_val(other))
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check_same_field(rhs);
        let prod = qpoly::mul(&self.rep(), &rhs.rep());
        let (_, r) = if prod.len() >= self.field.monic.len() {
            qpoly::div_rem(&prod, &self.field.monic)
        } else {
            (Vec::new(), prod)
        };
        FieldElement::from_rep(&self.field, r)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Canonical `p/q` form with the denominator always present and positive.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<BigRational, ScalarError> {
    let bad = || ScalarError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    // good enough for plotting: scale through a 2^53 window
    let scale: BigInt = BigInt::one() << 53;
    let scaled = (r * BigRational::from_integer(scale.clone()))
        .round()
        .to_integer();
    let mut approx = 0.0f64;
    let mut rem = scaled;
    let chunk = BigInt::from(1u64 << 32);
    let mut factor = 1.0f64;
    while !rem.is_zero() {
        let (q, r) = rem.div_rem(&chunk);
        let part: f64 = i64::try_from(r).map(|v| v as f64).unwrap_or(0.0);
        approx += part * factor;
        factor *= 4294967296.0;
        rem = q;
    }
    approx / 9007199254740992.0
}

/// Looks for an integer root of a monic integer polynomial (best effort:
/// skipped when the constant term is too large to enumerate divisors).
fn integer_root(coeffs: &[BigInt]) -> Option<BigInt> {
    let a0 = &coeffs[0];
    if a0.is_zero() {
        return Some(BigInt::zero());
    }
    let limit = BigInt::from(1_000_000_000u64);
    if a0.abs() > limit {
        return None;
    }
    let n = i64::try_from(a0.abs()).ok()?;
    let eval = |x: &BigInt| -> BigInt {
        let mut acc = BigInt::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    let mut d = 1i64;
    while d * d <= n {
        if n % d == 0 {
            for cand in [d, -d, n / d, -(n / d)] {
                let c = BigInt::from(cand);
                if eval(&c).is_zero() {
                    return Some(c);
                }
            }
        }
        d += 1;
    }
    None
}
