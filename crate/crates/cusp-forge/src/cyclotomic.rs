//! Exact arithmetic in `Q(zeta_m)` on the power basis modulo the
//! cyclotomic polynomial.

use crate::abelian::RootOfUnity;
use crate::field::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// The cyclotomic polynomial `Phi_m` as integer coefficients, low degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<BigInt> {
    // X^m - 1 = prod_{d | m} Phi_d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|v| v.is_zero()));
    q
}

/// An element of `Q(zeta_m)` reduced modulo `Phi_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    pub m: u64,
    pub coeffs: Vec<Rat>,
}

impl Cyclo {
    pub fn zero(m: u64) -> Self {
        let deg = cyclotomic_poly(m).len() - 1;
        Cyclo { m, coeffs: vec![Rat::zero(); deg] }
    }

    pub fn from_rat(m: u64, r: Rat) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rat(m, Rat::from_integer(BigInt::from(n)))
    }

    /// `zeta_m^e`.
    pub fn zeta_pow(m: u64, e: i64) -> Self {
        let e = e.rem_euclid(m as i64) as usize;
        let mut v = vec![Rat::zero(); e + 1];
        v[e] = Rat::one();
        Self::reduce(m, v)
    }

    pub fn from_root(m: u64, z: &RootOfUnity) -> Self {
        Self::zeta_pow(m, z.exponent_in(m) as i64)
    }

    fn reduce(m: u64, mut v: Vec<Rat>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        while v.len() > deg {
            let top = v.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = v.len() - deg;
            for (j, pj) in phi.iter().enumerate().take(deg) {
                v[shift + j] -= &top * Rat::from_integer(pj.clone());
            }
        }
        v.resize(deg, Rat::zero());
        Cyclo { m, coeffs: v }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        Cyclo { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|a| a * r).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.m, o.m);
        let mut v = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::reduce(self.m, v)
    }

    pub fn mul_root(&self, z: &RootOfUnity) -> Self {
        self.mul(&Self::from_root(self.m, z))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Membership in `Z[zeta_m]` (the power basis is an integral basis).
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Membership in `Z_(p)[zeta_m]`.
    pub fn is_p_integral(&self, p: u64) -> bool {
        let p = BigInt::from(p);
        self.coeffs.iter().all(|c| c.denom().gcd(&p).is_one())
    }

    /// Whether every coefficient lies in `n Z_(p)`.
    pub fn divisible_by(&self, n: &BigInt, p: u64) -> bool {
        self.scale(&Rat::new(BigInt::one(), n.clone())).is_p_integral(p)
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn serialize(&self) -> CycloJson {
        CycloJson {
            order: self.m,
            coeffs: self.coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_string() } else { c.to_string() }).collect(),
        }
    }

    pub fn display(&self) -> String {
        if let Some(r) = self.as_rational() {
            return r.to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                1 => format!("{}*z", c),
                _ => format!("{}*z^{}", c, i),
            };
            parts.push(term);
        }
        parts.join("+").replace("+-", "-")
    }

    pub fn abs_max(&self) -> Rat {
        self.coeffs.iter().map(|c| c.abs()).fold(Rat::zero(), |a, b| if b > a { b } else { a })
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CycloJson {
    pub order: u64,
    pub coeffs: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polys() {
        let p = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(cyclotomic_poly(1), p(&[-1, 1]));
        assert_eq!(cyclotomic_poly(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_sum_to_zero() {
        let mut s = Cyclo::zero(5);
        for e in 0..5 {
            s = s.add(&Cyclo::zeta_pow(5, e));
        }
        assert!(s.is_zero());
    }

    #[test]
    fn zeta_order() {
        let z = Cyclo::zeta_pow(6, 1);
        let mut p = Cyclo::from_int(6, 1);
        for _ in 0..6 {
            p = p.mul(&z);
        }
        assert_eq!(p, Cyclo::from_int(6, 1));
        assert_eq!(Cyclo::zeta_pow(6, 3), Cyclo::from_int(6, -1));
    }
}
