//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are little-endian (`c[i]` multiplies `x^i`) and kept
//! normalized with no trailing zeros; the zero polynomial is the empty vector.
//! This is internal plumbing for the scalar field (reduction, inversion,
//! Sturm-based root counting) and for the deformation certificates.

use num::{BigInt, BigRational, One, Signed, Zero};

pub(crate) type QPoly = Vec<BigRational>;

pub(crate) fn normalize(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub(crate) fn is_zero(p: &QPoly) -> bool {
    p.is_empty()
}

/// Degree of a nonzero polynomial.
pub(crate) fn degree(p: &QPoly) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

pub(crate) fn from_bigint(coeffs: &[BigInt]) -> QPoly {
    normalize(
        coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

pub(crate) fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    normalize(out)
}

pub(crate) fn neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub(crate) fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    add(a, &neg(b))
}

pub(crate) fn scale(a: &QPoly, s: &BigRational) -> QPoly {
    if s.is_zero() {
        return Vec::new();
    }
    a.iter().map(|c| c * s).collect()
}

pub(crate) fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    normalize(out)
}

/// Euclidean division: `a = q * b + r` with `deg r < deg b`. Panics if `b = 0`.
pub(crate) fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    let lead = b.last().unwrap().clone();
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        q[shift] = coef.clone();
        for (i, cb) in b.iter().enumerate() {
            let t = cb * &coef;
            r[shift + i] -= t;
        }
        r = normalize(r);
    }
    (normalize(q), r)
}

/// Monic gcd; returns a constant `1` polynomial for coprime inputs.
pub(crate) fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = r;
    }
    make_monic(x)
}

pub(crate) fn make_monic(p: QPoly) -> QPoly {
    match p.last() {
        None => p,
        Some(lead) => {
            let inv = BigRational::one() / lead.clone();
            scale(&p, &inv)
        }
    }
}

/// Extended gcd: returns `(g, s, t)` with `s*a + t*b = g` and `g` monic.
pub(crate) fn extended_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: QPoly = vec![BigRational::one()];
    let mut s1: QPoly = Vec::new();
    let mut t0: QPoly = Vec::new();
    let mut t1: QPoly = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        let t = sub(&t0, &mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if let Some(lead) = r0.last().cloned() {
        let inv = BigRational::one() / lead;
        return (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv));
    }
    (r0, s0, t0)
}

pub(crate) fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return Vec::new();
    }
    normalize(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

pub(crate) fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

/// Interval evaluation by Horner: returns `(lo, hi)` enclosing `p([xlo, xhi])`.
pub(crate) fn eval_interval(
    p: &QPoly,
    xlo: &BigRational,
    xhi: &BigRational,
) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for c in p.iter().rev() {
        let cands = [&lo * xlo, &lo * xhi, &hi * xlo, &hi * xhi];
        let mut nlo = cands[0].clone();
        let mut nhi = cands[0].clone();
        for v in &cands[1..] {
            if *v < nlo {
                nlo = v.clone();
            }
            if *v > nhi {
                nhi = v.clone();
            }
        }
        lo = nlo + c;
        hi = nhi + c;
    }
    (lo, hi)
}

/// Sturm chain of `p` (works for non-squarefree `p`; the chain then ends at
/// a nonconstant gcd and still counts distinct roots).
pub(crate) fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone()];
    let d = derivative(p);
    if !d.is_empty() {
        chain.push(d);
    }
    while chain.last().map(|q| !q.is_empty()).unwrap_or(false) && chain.len() >= 2 {
        let a = &chain[chain.len() - 2];
        let b = &chain[chain.len() - 1];
        let (_, r) = div_rem(a, b);
        if r.is_empty() {
            break;
        }
        chain.push(neg(&r));
    }
    chain
}

fn sign_variations(chain: &[QPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = eval(p, x);
        if v.is_zero() {
            continue;
        }
        let positive = v.is_positive();
        if let Some(prev) = last {
            if prev != positive {
                count += 1;
            }
        }
        last = Some(positive);
    }
    count
}

/// Number of distinct real roots of `p` in the open interval `(lo, hi)`.
/// Requires `p(lo) != 0` and `p(hi) != 0`.
pub(crate) fn count_roots_in(p: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    assert!(lo < hi, "empty interval");
    assert!(!eval(p, lo).is_zero() && !eval(p, hi).is_zero());
    let chain = sturm_chain(p);
    sign_variations(&chain, lo) - sign_variations(&chain, hi)
}
