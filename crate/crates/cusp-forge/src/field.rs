//! Exact arithmetic in a real quadratic field `Q(sqrt D)`.
//!
//! Elements are stored as `x + y*w` with rational `x, y`, where `w` is the
//! integral generator: `(1 + sqrt D)/2` when `D = 1 mod 4`, else `sqrt D`.

use crate::arith::{bi, is_squarefree};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(bi(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    pub x: Rat,
    pub y: Rat,
}

/// Sign of a real embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn mul(self, o: Sign) -> Sign {
        match (self, o) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Pos,
            _ => Sign::Neg,
        }
    }
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealQuadraticField {
    pub d: i64,
    pub disc: i64,
    /// `w^2 = t*w + s`
    pub t: i64,
    pub s: i64,
    pub fund_unit: FieldElement,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("D must be a squarefree integer > 1, got {0}")]
    BadDiscriminant(i64),
    #[error("zero element has no sign")]
    ZeroElement,
}

impl FieldElement {
    pub fn new(x: Rat, y: Rat) -> Self {
        FieldElement { x, y }
    }
    pub fn from_ints(x: i64, y: i64) -> Self {
        FieldElement { x: rat(x), y: rat(y) }
    }
    pub fn from_rat(x: Rat) -> Self {
        FieldElement { x, y: Rat::zero() }
    }
    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }
    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }
    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }
    pub fn add(&self, o: &Self) -> Self {
        FieldElement { x: &self.x + &o.x, y: &self.y + &o.y }
    }
    pub fn sub(&self, o: &Self) -> Self {
        FieldElement { x: &self.x - &o.x, y: &self.y - &o.y }
    }
    pub fn neg(&self) -> Self {
        FieldElement { x: -&self.x, y: -&self.y }
    }
    pub fn scale(&self, r: &Rat) -> Self {
        FieldElement { x: &self.x * r, y: &self.y * r }
    }
    /// Least positive integer `m` with `m * self` integral.
    pub fn denominator(&self) -> BigInt {
        self.x.denom().lcm(self.y.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if self.x.is_zero() {
            return write!(f, "{}*w", self.y);
        }
        if self.y.is_negative() {
            write!(f, "{}-{}*w", self.x, -&self.y)
        } else {
            write!(f, "{}+{}*w", self.x, self.y)
        }
    }
}

fn cmp_with_sqrt(r: &Rat, q: &Rat, d: i64) -> Sign {
    // sign of r + q*sqrt(d), exactly
    let sr = r.signum();
    let sq = q.signum();
    let to_sign = |v: &Rat| {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Pos
        } else {
            Sign::Neg
        }
    };
    if q.is_zero() {
        return to_sign(r);
    }
    if r.is_zero() {
        return to_sign(q);
    }
    if sr == sq {
        return to_sign(r);
    }
    // opposite signs: compare r^2 with q^2 d
    let lhs = r * r;
    let rhs = q * q * rat(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => to_sign(r),
        Ordering::Less => to_sign(q),
        Ordering::Equal => Sign::Zero,
    }
}

impl RealQuadraticField {
    pub fn new(d: i64) -> Result<Self, FieldError> {
        if d <= 1 || !is_squarefree(d as u64) {
            return Err(FieldError::BadDiscriminant(d));
        }
        let (disc, t, s) = if d.rem_euclid(4) == 1 { (d, 1, (d - 1) / 4) } else { (4 * d, 0, d) };
        let mut f = RealQuadraticField { d, disc, t, s, fund_unit: FieldElement::one() };
        f.fund_unit = f.compute_fundamental_unit();
        Ok(f)
    }

    pub fn omega(&self) -> FieldElement {
        FieldElement::from_ints(0, 1)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let bd = &a.y * &b.y;
        FieldElement {
            x: &a.x * &b.x + &bd * rat(self.s),
            y: &a.x * &b.y + &a.y * &b.x + &bd * rat(self.t),
        }
    }

    pub fn conj(&self, a: &FieldElement) -> FieldElement {
        FieldElement { x: &a.x + &a.y * rat(self.t), y: -&a.y }
    }

    pub fn norm(&self, a: &FieldElement) -> Rat {
        &a.x * &a.x + &a.x * &a.y * rat(self.t) - &a.y * &a.y * rat(self.s)
    }

    pub fn trace(&self, a: &FieldElement) -> Rat {
        &a.x * rat(2) + &a.y * rat(self.t)
    }

    pub fn inv(&self, a: &FieldElement) -> FieldElement {
        let n = self.norm(a);
        assert!(!n.is_zero(), "inverse of zero");
        self.conj(a).scale(&(Rat::one() / n))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> FieldElement {
        let base = if e < 0 { self.inv(a) } else { a.clone() };
        let mut out = FieldElement::one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// `(r, q)` with `a = r + q*sqrt(D)`.
    fn sqrt_coords(&self, a: &FieldElement) -> (Rat, Rat) {
        if self.t == 1 {
            let half = Rat::new(bi(1), bi(2));
            (&a.x + &a.y * &half, &a.y * &half)
        } else {
            (a.x.clone(), a.y.clone())
        }
    }

    /// Signs at the embeddings `sqrt D -> +sqrt D` and `sqrt D -> -sqrt D`.
    pub fn sign_vector(&self, a: &FieldElement) -> (Sign, Sign) {
        let (r, q) = self.sqrt_coords(a);
        (cmp_with_sqrt(&r, &q, self.d), cmp_with_sqrt(&r, &(-q.clone()), self.d))
    }

    pub fn is_totally_positive(&self, a: &FieldElement) -> Result<bool, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        Ok(self.sign_vector(a) == (Sign::Pos, Sign::Pos))
    }

    pub fn totally_positive(&self, a: &FieldElement) -> bool {
        self.sign_vector(a) == (Sign::Pos, Sign::Pos)
    }

    /// Approximate embeddings, used only to size enumeration boxes.
    pub fn embeddings_f64(&self, a: &FieldElement) -> (f64, f64) {
        let (r, q) = self.sqrt_coords(a);
        let rf = rat_to_f64(&r);
        let qf = rat_to_f64(&q);
        let sd = (self.d as f64).sqrt();
        (rf + qf * sd, rf - qf * sd)
    }

    /// Smallest unit `> 1` (first embedding), read off from the first
    /// convergent `p/q` of the continued fraction of `w` with `N(p - q*w) = +-1`.
    fn compute_fundamental_unit(&self) -> FieldElement {
        let d = bi(self.d);
        let a0 = d.sqrt();
        // w = (P + sqrt D)/Q
        let (mut pp, mut qq) = if self.t == 1 { (bi(1), bi(2)) } else { (bi(0), bi(1)) };
        let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
        let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
        for _ in 0..100_000 {
            assert!(qq.is_positive());
            let a = (&pp + &a0).div_floor(&qq);
            let nh = &a * &h + &h_prev;
            let nk = &a * &k + &k_prev;
            h_prev = std::mem::replace(&mut h, nh);
            k_prev = std::mem::replace(&mut k, nk);
            let cand = FieldElement::new(Rat::from_integer(h.clone()), Rat::from_integer(-k.clone()));
            if self.norm(&cand).abs() == Rat::one() {
                let inv = self.inv(&cand);
                return if self.sign_vector(&inv).0 == Sign::Pos { inv } else { inv.neg() };
            }
            pp = &a * &qq - &pp;
            qq = (&d - &pp * &pp) / &qq;
        }
        panic!("continued fraction did not produce a unit")
    }

    /// Exact comparison of first embeddings: `a > b`.
    pub fn gt(&self, a: &FieldElement, b: &FieldElement) -> bool {
        self.sign_vector(&a.sub(b)).0 == Sign::Pos
    }

    pub fn unit_norm(&self) -> i64 {
        if self.norm(&self.fund_unit) == rat(1) {
            1
        } else {
            -1
        }
    }

    /// Generator of the totally positive units.
    pub fn positive_unit(&self) -> FieldElement {
        if self.unit_norm() == 1 {
            self.fund_unit.clone()
        } else {
            self.mul(&self.fund_unit, &self.fund_unit)
        }
    }

    /// Writes a unit as `sign * fund_unit^e`; `None` if not a unit.
    pub fn unit_log(&self, u: &FieldElement) -> Option<(i64, i64)> {
        if !u.is_integral() || self.norm(u).abs() != rat(1) {
            return None;
        }
        let sgn = if self.sign_vector(u).0 == Sign::Pos { 1 } else { -1 };
        let mut v = u.scale(&rat(sgn));
        let mut e = 0i64;
        let eps = &self.fund_unit;
        let eps_inv = self.inv(eps);
        let one = FieldElement::one();
        for _ in 0..100_000 {
            if v == one {
                return Some((sgn, e));
            }
            if self.gt(&v, &one) {
                v = self.mul(&v, &eps_inv);
                e += 1;
            } else {
                v = self.mul(&v, eps);
                e -= 1;
            }
        }
        None
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(x: i64, y: i64) -> FieldElement {
        FieldElement::from_ints(x, y)
    }

    #[test]
    fn golden_ratio_norm() {
        let f = RealQuadraticField::new(5).unwrap();
        assert_eq!(f.norm(&fe(0, 1)), rat(-1));
        assert_eq!(f.norm(&fe(1, 0)), rat(1));
    }

    #[test]
    fn two_plus_sqrt3() {
        let f = RealQuadraticField::new(3).unwrap();
        let u = fe(2, 1);
        assert_eq!(f.norm(&u), rat(1));
        assert_eq!(f.is_totally_positive(&u), Ok(true));
    }

    #[test]
    fn positivity_examples() {
        let f5 = RealQuadraticField::new(5).unwrap();
        assert_eq!(f5.is_totally_positive(&fe(0, 1)), Ok(false));
        assert_eq!(f5.is_totally_positive(&fe(-1, 0)), Ok(false));
        assert_eq!(f5.is_totally_positive(&fe(0, 0)), Err(FieldError::ZeroElement));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(RealQuadraticField::new(12).is_err());
        assert!(RealQuadraticField::new(1).is_err());
    }

    #[test]
    fn unit_log_roundtrip() {
        let f = RealQuadraticField::new(13).unwrap();
        let u = f.pow(&f.fund_unit, -3).neg();
        assert_eq!(f.unit_log(&u), Some((-1, -3)));
    }
}
