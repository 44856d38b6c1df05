//! Fixed-precision elements of `Q_p`.
//!
//! An element is `p^v * u + O(p^(v + r))` with `u` a unit modulo `p^r`.
//! Zero at absolute precision `A` is stored as `v = A`, `r = 0`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::rc::Rc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

thread_local! {
    static POWERS: RefCell<HashMap<(u32, u32), Rc<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^k` from a per-thread cache.
pub fn p_pow(p: u32, k: u32) -> Rc<BigUint> {
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        if let Some(v) = map.get(&(p, k)) {
            return v.clone();
        }
        let v = Rc::new(BigUint::from(p).pow(k));
        map.insert((p, k), v.clone());
        v
    })
}

pub fn is_odd_prime(p: u32) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `v_p(n)` for `n != 0`.
pub fn val_u64(p: u32, mut n: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p as u64) {
        n /= p as u64;
        v += 1;
    }
    v
}

/// `floor(log_p(m))`, with `ilog(0) = 0`.
pub fn ilog(p: u32, m: u64) -> u32 {
    if m == 0 {
        0
    } else {
        m.ilog(p as u64)
    }
}

#[derive(Clone, Debug)]
pub struct PadicScalar {
    p: u32,
    val: i64,
    rel: u32,
    unit: BigUint,
}

fn big_val(p: u32, x: &BigUint) -> (u32, BigUint) {
    let mut v = 0;
    let mut x = x.clone();
    let pb = BigUint::from(p);
    loop {
        let (q, r) = x.div_rem(&pb);
        if !r.is_zero() {
            return (v, x);
        }
        x = q;
        v += 1;
    }
}

impl PadicScalar {
    pub fn zero(p: u32, prec: i64) -> Self {
        PadicScalar { p, val: prec, rel: 0, unit: BigUint::zero() }
    }

    pub fn one(p: u32, prec: i64) -> Self {
        Self::from_i64(p, 1, prec)
    }

    /// `p^v * m` known modulo `p^prec`; `m` need not be a unit.
    pub fn from_parts(p: u32, v: i64, m: BigUint, prec: i64) -> Self {
        if m.is_zero() || v >= prec {
            return Self::zero(p, prec);
        }
        let (e, u) = big_val(p, &m);
        let v = v + e as i64;
        if v >= prec {
            return Self::zero(p, prec);
        }
        assert!(prec - v < 1 << 24, "relative precision {} is out of range", prec - v);
        let rel = (prec - v) as u32;
        let unit = u % &*p_pow(p, rel);
        PadicScalar { p, val: v, rel, unit }
    }

    pub fn from_bigint(p: u32, n: &BigInt, prec: i64) -> Self {
        Self::from_bigint_shifted(p, n, 0, prec)
    }

    /// `p^v * n` modulo `p^prec` for a signed integer `n`.
    pub fn from_bigint_shifted(p: u32, n: &BigInt, v: i64, prec: i64) -> Self {
        if n.is_zero() || v >= prec {
            return Self::zero(p, prec);
        }
        let x = Self::from_parts(p, v, n.magnitude().clone(), prec);
        if n.sign() == Sign::Minus {
            -x
        } else {
            x
        }
    }

    pub fn from_i64(p: u32, n: i64, prec: i64) -> Self {
        Self::from_bigint(p, &BigInt::from(n), prec)
    }

    /// `num / den` to absolute precision `prec`.
    pub fn from_ratio(p: u32, num: i64, den: i64, prec: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Domain("zero denominator".into()));
        }
        let dv = val_u64(p, den.unsigned_abs()) as i64;
        let n = Self::from_i64(p, num, prec + dv);
        let d = Self::from_i64(p, den, prec + 2 * dv);
        Ok(n.checked_div(&d)?.with_cap(prec))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    /// Valuation; for a zero element this is its absolute precision.
    pub fn valuation(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.val + self.rel as i64
    }

    pub fn rel_precision(&self) -> u32 {
        self.rel
    }

    pub fn unit(&self) -> &BigUint {
        &self.unit
    }

    pub fn is_zero(&self) -> bool {
        self.rel == 0
    }

    /// Lower the absolute precision to at most `cap`.
    pub fn with_cap(&self, cap: i64) -> Self {
        if cap >= self.precision() {
            return self.clone();
        }
        if self.is_zero() || cap <= self.val {
            return Self::zero(self.p, cap.min(self.precision()));
        }
        let rel = (cap - self.val) as u32;
        PadicScalar { p: self.p, val: self.val, rel, unit: &self.unit % &*p_pow(self.p, rel) }
    }

    /// Multiply by `p^k` exactly.
    pub fn shift(&self, k: i64) -> Self {
        PadicScalar { p: self.p, val: self.val + k, rel: self.rel, unit: self.unit.clone() }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed primes in p-adic arithmetic");
    }

    /// Integer representative `p^(v - base) * u` (requires `v >= base`).
    fn mantissa_at(&self, base: i64) -> BigUint {
        debug_assert!(self.val >= base);
        &self.unit * &*p_pow(self.p, (self.val - base) as u32)
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        self.check_prime(other);
        let prec = self.precision().min(other.precision());
        if self.is_zero() && other.is_zero() {
            return Self::zero(self.p, prec);
        }
        if other.is_zero() || other.val >= prec {
            return self.with_cap(prec);
        }
        if self.is_zero() || self.val >= prec {
            let o = other.with_cap(prec);
            return if negate { -o } else { o };
        }
        let base = self.val.min(other.val);
        let k = (prec - base) as u32;
        let modulus = p_pow(self.p, k);
        let a = self.mantissa_at(base) % &*modulus;
        let b = other.mantissa_at(base) % &*modulus;
        let s = if negate {
            if a >= b {
                a - b
            } else {
                &*modulus - b + a
            }
        } else {
            (a + b) % &*modulus
        };
        Self::from_parts(self.p, base, s, prec)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other);
        let inv = other.inv()?;
        Ok(self * &inv)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "division by zero known to O({}^{})",
                self.p, self.val
            )));
        }
        let m = p_pow(self.p, self.rel);
        let u = BigInt::from(self.unit.clone());
        let mm = BigInt::from((*m).clone());
        let g = u.extended_gcd(&mm);
        let mut x = g.x % &mm;
        if x.is_negative() {
            x += &mm;
        }
        Ok(PadicScalar { p: self.p, val: -self.val, rel: self.rel, unit: x.to_biguint().unwrap() })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = e as u64;
        if e == 0 {
            // an inexact zero still has a known absolute precision
            let cap = if self.is_zero() { self.precision().clamp(self.rel as i64, 1 << 12) } else { self.rel as i64 };
            return Ok(Self::one(self.p, cap));
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc.unwrap())
    }

    /// True when `self - other` is zero at the working precision.
    pub fn eq_at(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Valuation of `self - other`; equals the common precision when they agree.
    pub fn discrepancy(&self, other: &Self) -> i64 {
        (self - other).valuation()
    }

    /// Representative in `[0, p^prec)` for an integral element.
    pub fn residue(&self) -> Result<BigUint> {
        if self.is_zero() {
            return Ok(BigUint::zero());
        }
        if self.val < 0 {
            return Err(Error::Domain("residue of non-integral element".into()));
        }
        Ok(self.mantissa_at(0))
    }

    /// Signed integer representative in `(-p^A/2, p^A/2]`.
    pub fn to_bigint_centered(&self) -> Result<BigInt> {
        let r = BigInt::from(self.residue()?);
        if self.precision() <= 0 {
            return Ok(BigInt::zero());
        }
        let m = BigInt::from((*p_pow(self.p, self.precision() as u32)).clone());
        if &r * 2 > m {
            Ok(r - m)
        } else {
            Ok(r)
        }
    }

    /// Residue modulo `p^k` of an integral element, as `u128` (needs `p^k < 2^127`).
    pub fn residue_u128(&self, k: u32) -> Result<u128> {
        let r = self.residue()? % &*p_pow(self.p, k);
        r.to_u128().ok_or_else(|| Error::Domain("residue too large".into()))
    }

    /// Base-`p` digits of the unit, least significant first.
    pub fn digits(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.rel as usize);
        let mut x = self.unit.clone();
        let pb = BigUint::from(self.p);
        for _ in 0..self.rel {
            let (q, r) = x.div_rem(&pb);
            out.push(r.to_u32().unwrap());
            x = q;
        }
        out
    }

    /// `p`-adic logarithm of an element congruent to 1 mod p.
    pub fn log(&self) -> Result<Self> {
        let one = Self::one(self.p, self.precision());
        let z = self - &one;
        if self.val != 0 || z.valuation() < 1 {
            return Err(Error::Domain("log needs an argument congruent to 1 mod p".into()));
        }
        let target = self.precision();
        let vz = z.valuation();
        if z.is_zero() {
            return Ok(Self::zero(self.p, target));
        }
        let mut acc = Self::zero(self.p, target);
        let mut zk = z.clone();
        let mut k: i64 = 1;
        loop {
            // v(z^k / k) >= k*vz - log_p k; stop once every later term is below target
            if k * vz - ilog(self.p, k as u64) as i64 >= target && k > 1 {
                break;
            }
            let term = zk.checked_div(&Self::from_i64(self.p, k, target + 64))?;
            acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
            zk = &zk * &z;
            k += 1;
        }
        Ok(acc.with_cap(target))
    }

    /// Iwasawa logarithm: `log(x / (teichmuller unit part))` for any unit `x`; `log(p) = 0`.
    pub fn log0(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log of zero".into()));
        }
        let u = PadicScalar { p: self.p, val: 0, rel: self.rel, unit: self.unit.clone() };
        // u^(p-1) is 1 mod p and log(u^(p-1)) = (p-1) log(u)
        let w = u.pow(self.p as i64 - 1)?;
        let l = w.log()?;
        l.checked_div(&Self::from_i64(self.p, self.p as i64 - 1, self.precision() + 8))
    }

    /// `p`-adic exponential on `p Z_p`.
    pub fn exp(&self) -> Result<Self> {
        let vz = self.valuation();
        if vz < 1 && !self.is_zero() {
            return Err(Error::Domain("exp needs valuation >= 1".into()));
        }
        let target = self.precision();
        let mut acc = Self::one(self.p, target);
        if self.is_zero() {
            return Ok(acc);
        }
        let mut term = Self::one(self.p, target + 64);
        let mut k: i64 = 1;
        let pm1 = self.p as i64 - 1;
        loop {
            // v(z^k / k!) >= k*vz - (k-1)/(p-1)
            if k * vz - (k - 1) / pm1 > target + 1 {
                break;
            }
            term = (&term * self).checked_div(&Self::from_i64(self.p, k, target + 64))?;
            acc = &acc + &term;
            k += 1;
        }
        Ok(acc.with_cap(target))
    }

    /// Render as `p^v * (d0 + d1*p + ...) + O(p^M)`.
    pub fn to_text(&self) -> String {
        let p = self.p;
        let prec = self.precision();
        if self.is_zero() {
            return format!("0 + O({})", pow_text(p, prec));
        }
        let mut terms = Vec::new();
        for (i, d) in self.digits().iter().enumerate() {
            if *d == 0 {
                continue;
            }
            terms.push(match i {
                0 => format!("{d}"),
                1 => format!("{d}*{p}"),
                _ => format!("{d}*{p}^{i}"),
            });
        }
        let body = format!("({})", terms.join(" + "));
        if self.val == 0 {
            format!("{body} + O({})", pow_text(p, prec))
        } else {
            format!("{} * {body} + O({})", pow_text(p, self.val), pow_text(p, prec))
        }
    }

    /// Parse the text format produced by [`PadicScalar::to_text`].
    pub fn parse(p: u32, s: &str) -> Result<Self> {
        parse_scalar(p, s, None)
    }

    /// Like [`PadicScalar::parse`], but also accepts plain integers and
    /// fractions `a/b`, read at precision `default_prec`.
    pub fn parse_with_default(p: u32, s: &str, default_prec: i64) -> Result<Self> {
        parse_scalar(p, s, Some(default_prec))
    }
}

fn pow_text(p: u32, e: i64) -> String {
    match e {
        1 => format!("{p}"),
        _ => format!("{p}^{e}"),
    }
}

fn parse_err(s: &str, why: &str) -> Error {
    Error::Parse(format!("bad scalar '{s}': {why}"))
}

/// Parse `P` or `P^E` with `P == p`.
fn parse_pow(p: u32, t: &str, full: &str) -> Result<i64> {
    let t = t.trim();
    let (base, exp) = match t.split_once('^') {
        Some((b, e)) => (b.trim(), e.trim().trim_start_matches('(').trim_end_matches(')')),
        None => (t, "1"),
    };
    let b: u32 = base.parse().map_err(|_| parse_err(full, "bad power base"))?;
    if b != p {
        return Err(parse_err(full, &format!("power of {b}, expected {p}")));
    }
    exp.parse().map_err(|_| parse_err(full, "bad exponent"))
}

fn parse_scalar(p: u32, s: &str, default_prec: Option<i64>) -> Result<PadicScalar> {
    let full = s;
    let s = s.trim();
    let (body, prec) = match s.rfind("O(") {
        Some(idx) => {
            let tail = &s[idx + 2..];
            let close = tail.rfind(')').ok_or_else(|| parse_err(full, "unclosed O("))?;
            let prec = parse_pow(p, &tail[..close], full)?;
            let mut body = s[..idx].trim_end();
            if let Some(b) = body.strip_suffix('+') {
                body = b.trim_end();
            }
            (body, prec)
        }
        None => {
            let prec = default_prec.ok_or_else(|| parse_err(full, "missing O(p^M)"))?;
            return parse_plain(p, s, prec, full);
        }
    };
    if body.is_empty() || body == "0" {
        return Ok(PadicScalar::zero(p, prec));
    }
    let (shift, digits) = match body.find('(') {
        Some(open) => {
            let head = body[..open].trim();
            let close = body.rfind(')').ok_or_else(|| parse_err(full, "unclosed ("))?;
            let inner = &body[open + 1..close];
            let shift = if head.is_empty() {
                0
            } else {
                let h = head.strip_suffix('*').ok_or_else(|| parse_err(full, "expected '*'"))?;
                parse_pow(p, h, full)?
            };
            (shift, inner)
        }
        None => (0, body),
    };
    let mut m = BigUint::zero();
    let mut neg = false;
    for (n, term) in digits.split('+').enumerate() {
        let term = term.trim();
        if term.is_empty() {
            return Err(parse_err(full, "empty term"));
        }
        let (d, e) = match term.split_once('*') {
            Some((d, pw)) => (d.trim(), parse_pow(p, pw, full)?),
            None => (term, 0),
        };
        let d = if n == 0 && d.starts_with('-') {
            neg = true;
            &d[1..]
        } else {
            d
        };
        let d: u64 = d.parse().map_err(|_| parse_err(full, "bad digit"))?;
        if e < 0 {
            return Err(parse_err(full, "negative digit position"));
        }
        m += BigUint::from(d) * &*p_pow(p, e as u32);
    }
    let x = PadicScalar::from_parts(p, shift, m, prec);
    Ok(if neg { -x } else { x })
}

fn parse_plain(p: u32, s: &str, prec: i64, full: &str) -> Result<PadicScalar> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| parse_err(full, "bad integer"))?;
    let d: BigInt = d.parse().map_err(|_| parse_err(full, "bad denominator"))?;
    if d.is_zero() {
        return Err(parse_err(full, "zero denominator"));
    }
    let dv = big_val(p, d.magnitude()).0 as i64;
    let num = PadicScalar::from_bigint(p, &n, prec + dv);
    let den = PadicScalar::from_bigint(p, &d, prec + 2 * dv + 1);
    Ok(num.checked_div(&den)?.with_cap(prec))
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(rhs, false)
    }
}

impl<'a> Sub<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: &PadicScalar) -> PadicScalar {
        self.add_impl(rhs, true)
    }
}

impl Add for PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: PadicScalar) -> PadicScalar {
        self.add_impl(&rhs, false)
    }
}

impl Sub for PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: PadicScalar) -> PadicScalar {
        self.add_impl(&rhs, true)
    }
}

impl<'a> Mul<&'a PadicScalar> for &'a PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: &PadicScalar) -> PadicScalar {
        self.check_prime(rhs);
        let prec = (self.val.saturating_add(rhs.precision())).min(rhs.val.saturating_add(self.precision()));
        if self.is_zero() || rhs.is_zero() {
            return PadicScalar::zero(self.p, prec);
        }
        let rel = self.rel.min(rhs.rel);
        let m = (&self.unit * &rhs.unit) % &*p_pow(self.p, rel);
        PadicScalar { p: self.p, val: self.val + rhs.val, rel, unit: m }
    }
}

impl Mul for PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: PadicScalar) -> PadicScalar {
        &self * &rhs
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        if self.is_zero() {
            return self.clone();
        }
        let m = p_pow(self.p, self.rel);
        PadicScalar { p: self.p, val: self.val, rel: self.rel, unit: &*m - &self.unit }
    }
}

impl Neg for PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        -&self
    }
}

impl PartialEq for PadicScalar {
    /// Structural equality (same value and same precision).
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.val == other.val && self.rel == other.rel && self.unit == other.unit
    }
}
