//! Fractional ideals of `O_F` as integer Hermite normal forms with a
//! denominator, prime ideals, principal-generator search, and the finite
//! rings `O_F/n`.

use crate::arith::{bi, hnf, hnf_with_transform, is_prime_u64, Mat};
use crate::field::{rat, FieldElement, Rat, RealQuadraticField, Sign};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// `(1/den) * span_Z{ a + b*w, c*w }` with `a, c > 0` and `0 <= b < c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FractionalIdeal {
    pub den: BigInt,
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("zero ideal")]
    Zero,
    #[error("ideals are not coprime")]
    NotCoprime,
    #[error("element is not integral at the modulus")]
    NotIntegralAtModulus,
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "hnf:[[{},{}],[0,{}]]", self.a, self.b, self.c)
        } else {
            write!(f, "hnf:[[{},{}],[0,{}]]/{}", self.a, self.b, self.c, self.den)
        }
    }
}

fn lcm_den(elems: &[FieldElement]) -> BigInt {
    elems.iter().fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator()))
}

impl FractionalIdeal {
    pub fn unit() -> Self {
        FractionalIdeal { den: bi(1), a: bi(1), b: bi(0), c: bi(1) }
    }

    /// Z-span of the given elements; the span must be a rank-2 lattice.
    pub fn from_z_span(elems: &[FieldElement]) -> Result<Self, IdealError> {
        let den = lcm_den(elems);
        let dr = Rat::from_integer(den.clone());
        let rows: Mat = elems
            .iter()
            .map(|e| {
                let x = (&e.x * &dr).to_integer();
                let y = (&e.y * &dr).to_integer();
                vec![x, y]
            })
            .collect();
        let h = hnf(&rows, 2);
        if h.len() != 2 || h[0][0].is_zero() {
            return Err(IdealError::Zero);
        }
        Ok(Self::normalized(den, h[0][0].clone(), h[0][1].clone(), h[1][1].clone()))
    }

    fn normalized(den: BigInt, a: BigInt, b: BigInt, c: BigInt) -> Self {
        let g = den.gcd(&a).gcd(&b).gcd(&c);
        FractionalIdeal { den: den / &g, a: a / &g, b: b / &g, c: c / &g }
    }

    /// The O_F-ideal generated by `gens`.
    pub fn from_generators(f: &RealQuadraticField, gens: &[FieldElement]) -> Result<Self, IdealError> {
        let w = f.omega();
        let mut z: Vec<FieldElement> = Vec::with_capacity(gens.len() * 2);
        for g in gens {
            z.push(g.clone());
            z.push(f.mul(g, &w));
        }
        Self::from_z_span(&z)
    }

    pub fn principal(f: &RealQuadraticField, g: &FieldElement) -> Result<Self, IdealError> {
        if g.is_zero() {
            return Err(IdealError::Zero);
        }
        Self::from_generators(f, &[g.clone()])
    }

    pub fn from_int(n: i64) -> Self {
        assert!(n != 0);
        Self::normalized(bi(1), bi(n.abs()), bi(0), bi(n.abs()))
    }

    pub fn basis(&self) -> [FieldElement; 2] {
        let d = Rat::from_integer(self.den.clone());
        [
            FieldElement::new(Rat::from_integer(self.a.clone()) / &d, Rat::from_integer(self.b.clone()) / &d),
            FieldElement::new(Rat::zero(), Rat::from_integer(self.c.clone()) / &d),
        ]
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_unit_ideal(&self) -> bool {
        *self == Self::unit()
    }

    /// Absolute norm `[O : I]` (multiplicative, rational for fractional ideals).
    pub fn norm(&self) -> Rat {
        Rat::new(&self.a * &self.c, &self.den * &self.den)
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        // e*den = u*(a, b) + v*(0, c)
        let d = Rat::from_integer(self.den.clone());
        let x = &e.x * &d;
        let y = &e.y * &d;
        if !x.is_integer() || !y.is_integer() {
            return false;
        }
        let x = x.to_integer();
        let y = y.to_integer();
        if !(&x % &self.a).is_zero() {
            return false;
        }
        let u = &x / &self.a;
        (y - u * &self.b).is_multiple_of(&self.c)
    }

    pub fn contains_ideal(&self, o: &Self) -> bool {
        o.basis().iter().all(|e| self.contains(e))
    }

    pub fn mul(&self, f: &RealQuadraticField, o: &Self) -> Self {
        let (p, q) = (self.basis(), o.basis());
        let prods: Vec<FieldElement> = p.iter().flat_map(|x| q.iter().map(move |y| (x, y))).map(|(x, y)| f.mul(x, y)).collect();
        Self::from_z_span(&prods).expect("product of nonzero ideals")
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut v = self.basis().to_vec();
        v.extend(o.basis());
        Self::from_z_span(&v).expect("sum of nonzero ideals")
    }

    pub fn scale(&self, f: &RealQuadraticField, g: &FieldElement) -> Self {
        let v: Vec<FieldElement> = self.basis().iter().map(|x| f.mul(x, g)).collect();
        Self::from_z_span(&v).expect("nonzero scalar")
    }

    pub fn conj(&self, f: &RealQuadraticField) -> Self {
        let v: Vec<FieldElement> = self.basis().iter().map(|x| f.conj(x)).collect();
        Self::from_z_span(&v).expect("nonzero ideal")
    }

    /// `I^{-1} = conj(I) / N(I)`.
    pub fn inv(&self, f: &RealQuadraticField) -> Self {
        let n = self.norm();
        self.conj(f).scale(f, &FieldElement::from_rat(Rat::one() / n))
    }

    pub fn div(&self, f: &RealQuadraticField, o: &Self) -> Self {
        self.mul(f, &o.inv(f))
    }

    /// `A cap B = (A^{-1} + B^{-1})^{-1}`.
    pub fn intersect(&self, f: &RealQuadraticField, o: &Self) -> Self {
        self.inv(f).add(&o.inv(f)).inv(f)
    }

    pub fn pow(&self, f: &RealQuadraticField, e: i64) -> Self {
        let base = if e < 0 { self.inv(f) } else { self.clone() };
        let mut out = Self::unit();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(f, &base);
        }
        out
    }

    pub fn is_coprime(&self, f: &RealQuadraticField, o: &Self) -> bool {
        // coprime in the sense of disjoint supports
        let g = self.integral_part_support(f);
        let h = o.integral_part_support(f);
        g.iter().all(|p| !h.contains(p))
    }

    fn integral_part_support(&self, f: &RealQuadraticField) -> Vec<FractionalIdeal> {
        support(f, self)
    }

    /// Smallest positive integer in an integral ideal.
    pub fn min_integer(&self) -> BigInt {
        assert!(self.is_integral());
        &self.a * (&self.c / self.b.gcd(&self.c))
    }

    /// Valuation at a prime ideal.
    pub fn valuation(&self, f: &RealQuadraticField, p: &PrimeIdeal) -> i64 {
        let mut v = 0i64;
        // clear the denominator: den = N-power bookkeeping via p-adic valuation of den
        let mut cur = self.scale(f, &FieldElement::from_rat(Rat::from_integer(self.den.clone())));
        let dv = crate::arith::valuation(&self.den, p.p) as i64 * p.e as i64;
        let pinv = p.ideal.inv(f);
        loop {
            let next = cur.mul(f, &pinv);
            if next.is_integral() {
                cur = next;
                v += 1;
            } else {
                break;
            }
        }
        v - dv
    }

    pub fn parse_hnf(s: &str) -> Option<Self> {
        // hnf:[[a,b],[0,c]]/d
        let body = s.trim().strip_prefix("hnf:")?;
        let (mat, den) = match body.rsplit_once('/') {
            Some((m, d)) if !m.ends_with(']') || d.chars().all(|c| c.is_ascii_digit()) => (m, d.trim().parse::<i64>().ok()?),
            _ => (body, 1),
        };
        let cleaned: String = mat.chars().filter(|c| !c.is_whitespace() && *c != '[' && *c != ']').collect();
        let nums: Vec<i64> = cleaned.split(',').map(|t| t.parse::<i64>().ok()).collect::<Option<Vec<_>>>()?;
        if nums.len() != 4 || nums[2] != 0 || den <= 0 {
            return None;
        }
        let elems = [
            FieldElement::new(Rat::new(bi(nums[0]), bi(den)), Rat::new(bi(nums[1]), bi(den))),
            FieldElement::new(Rat::zero(), Rat::new(bi(nums[3]), bi(den))),
        ];
        Self::from_z_span(&elems).ok()
    }

    /// Checks O-stability of the stored lattice.
    pub fn is_o_stable(&self, f: &RealQuadraticField) -> bool {
        self.basis().iter().all(|e| self.contains(&f.mul(e, &f.omega())))
    }

    /// Two-generator form `(m, g)` for integral ideals: `m` the least
    /// positive integer and `g` an element with `(m, g) = I`.
    pub fn two_generators(&self, f: &RealQuadraticField) -> (BigInt, FieldElement) {
        assert!(self.is_integral());
        let m = self.min_integer();
        let [b0, b1] = self.basis();
        let mr = FieldElement::from_rat(Rat::from_integer(m.clone()));
        for r in 0i64.. {
            for i in -r..=r {
                for j in [r - i.abs(), -(r - i.abs())] {
                    let g = b0.scale(&rat(i)).add(&b1.scale(&rat(j)));
                    if g.is_zero() {
                        continue;
                    }
                    if Self::from_generators(f, &[mr.clone(), g.clone()]).as_ref() == Ok(self) {
                        return (m, g);
                    }
                }
            }
        }
        unreachable!("Dedekind domains are two-generated")
    }
}

/// A prime ideal over the rational prime `p` with residue degree `f_deg`
/// and ramification index `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f_deg: u32,
    pub ideal: FractionalIdeal,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f_deg)
    }
}

/// Primes of `O_F` above `p` via Dedekind-Kummer on `Z[w] = O_F`.
pub fn primes_above(f: &RealQuadraticField, p: u64) -> Vec<PrimeIdeal> {
    let pi = p as i64;
    let roots: Vec<i64> = (0..pi).filter(|r| (r * r - f.t * r - f.s).rem_euclid(pi) == 0).collect();
    let pe = FieldElement::from_ints(pi, 0);
    match roots.len() {
        0 => vec![PrimeIdeal { p, e: 1, f_deg: 2, ideal: FractionalIdeal::from_int(pi) }],
        1 => {
            let id = FractionalIdeal::from_generators(f, &[pe, FieldElement::from_ints(-roots[0], 1)]).unwrap();
            vec![PrimeIdeal { p, e: 2, f_deg: 1, ideal: id }]
        }
        _ => {
            let mut v: Vec<PrimeIdeal> = roots
                .iter()
                .map(|r| PrimeIdeal {
                    p,
                    e: 1,
                    f_deg: 1,
                    ideal: FractionalIdeal::from_generators(f, &[pe.clone(), FieldElement::from_ints(-r, 1)]).unwrap(),
                })
                .collect();
            v.sort();
            v
        }
    }
}

/// All prime ideals of norm at most `bound`, sorted by `(norm, hnf)`.
pub fn primes_up_to_norm(f: &RealQuadraticField, bound: u64) -> Vec<PrimeIdeal> {
    let mut out: Vec<PrimeIdeal> = Vec::new();
    for p in 2..=bound {
        if is_prime_u64(p) {
            out.extend(primes_above(f, p).into_iter().filter(|q| q.norm() <= bound));
        }
    }
    out.sort_by(|x, y| (x.norm(), &x.ideal).cmp(&(y.norm(), &y.ideal)));
    out
}

/// Prime ideals dividing the numerator or denominator of `I`.
pub fn support(f: &RealQuadraticField, i: &FractionalIdeal) -> Vec<FractionalIdeal> {
    let n = i.norm();
    let mut ps: Vec<u64> = Vec::new();
    for v in [n.numer(), n.denom()] {
        for (p, _) in crate::arith::factor_u64(v.to_u64().expect("norm too large")) {
            ps.push(p);
        }
    }
    ps.sort();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        for q in primes_above(f, p) {
            if i.valuation(f, &q) != 0 {
                out.push(q.ideal.clone());
            }
        }
    }
    out
}

/// Factorization of a nonzero fractional ideal into prime powers.
pub fn factor(f: &RealQuadraticField, i: &FractionalIdeal) -> Vec<(PrimeIdeal, i64)> {
    let n = i.norm();
    let mut ps: Vec<u64> = Vec::new();
    for v in [n.numer(), n.denom()] {
        for (p, _) in crate::arith::factor_u64(v.to_u64().expect("norm too large")) {
            ps.push(p);
        }
    }
    ps.sort();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        for q in primes_above(f, p) {
            let v = i.valuation(f, &q);
            if v != 0 {
                out.push((q, v));
            }
        }
    }
    out
}

/// All integral ideals of norm at most `bound`, by direct HNF enumeration,
/// sorted by `(norm, hnf)`.
pub fn integral_ideals_up_to(f: &RealQuadraticField, bound: u64) -> Vec<FractionalIdeal> {
    let mut out = Vec::new();
    for a in 1..=bound {
        for c in 1..=bound / a {
            for b in 0..c {
                let id = FractionalIdeal { den: bi(1), a: bi(a as i64), b: bi(b as i64), c: bi(c as i64) };
                if id.is_o_stable(f) {
                    out.push(id);
                }
            }
        }
    }
    out.sort_by(|x, y| (x.norm(), x).cmp(&(y.norm(), y)));
    out
}

/// Norms above this are first reduced to a small ideal in the same class.
const DIRECT_SEARCH_NORM: i64 = 10_000;

/// A generator of `I` if it is principal.
pub fn find_generator(f: &RealQuadraticField, i: &FractionalIdeal) -> Option<FieldElement> {
    let j = i.scale(f, &FieldElement::from_rat(Rat::from_integer(i.den.clone())));
    let den = Rat::from_integer(i.den.clone());
    if j.norm() <= rat(DIRECT_SEARCH_NORM) {
        return search_generator(f, &j).map(|g| g.scale(&(Rat::one() / den)));
    }
    // (alpha) = J K with K integral of norm at most sqrt(disc / 3)
    let alpha = short_element(f, &j);
    let k = FractionalIdeal::principal(f, &alpha).ok()?.div(f, &j);
    let beta = search_generator(f, &k)?;
    let g = balance_by_units(f, &f.div(&alpha, &beta));
    Some(g.scale(&(Rat::one() / den)))
}

/// A shortest nonzero element of `J` for the form `Tr(x^2)`, by Lagrange
/// reduction of its basis.
fn short_element(f: &RealQuadraticField, j: &FractionalIdeal) -> FieldElement {
    let q = |x: &FieldElement| f.trace(&f.mul(x, x));
    let bil = |x: &FieldElement, y: &FieldElement| f.trace(&f.mul(x, y));
    let [mut b0, mut b1] = j.basis();
    loop {
        if q(&b1) < q(&b0) {
            std::mem::swap(&mut b0, &mut b1);
        }
        let (b, q0) = (bil(&b0, &b1), q(&b0));
        if (&b + &b).abs() <= q0 {
            return b0;
        }
        let m = (b / q0).round();
        b1 = b1.sub(&b0.scale(&m));
    }
}

/// `g eps^k` with the two embeddings as close in size as possible.
fn balance_by_units(f: &RealQuadraticField, g: &FieldElement) -> FieldElement {
    let (g1, g2) = f.embeddings_f64(g);
    // the larger embedding is accurate; the other is read off from the norm
    let nrm = crate::field::rat_to_f64(&f.norm(g)).abs().ln();
    let big = g1.abs().max(g2.abs()).ln();
    let gap = if g1.abs() >= g2.abs() { 2.0 * big - nrm } else { nrm - 2.0 * big };
    let (e1, _) = f.embeddings_f64(&f.fund_unit);
    let k = (gap / (2.0 * e1.abs().ln())).round() as i64;
    f.mul(g, &f.pow(&f.fund_unit, -k))
}

fn search_generator(f: &RealQuadraticField, j: &FractionalIdeal) -> Option<FieldElement> {
    let n = j.norm().to_integer();
    let nf = n.to_f64()?;
    let (eps1, _) = f.embeddings_f64(&f.fund_unit);
    let bound = (nf * eps1).sqrt() + 1.0;
    let (w1, w2) = f.embeddings_f64(&f.omega());
    let ymax = (2.0 * bound / (w1 - w2).abs()).ceil() as i64 + 1;
    let a = j.a.to_i64()?;
    let b = j.b.to_i64()?;
    let c = j.c.to_i64()?;
    let xmax = (bound + ymax as f64 * w1.abs().max(w2.abs())).ceil() as i64 + 1;
    let target = n.to_i128()?;
    let (t, s) = (f.t as i128, f.s as i128);
    // key (|trace|, y, x) of the best generator so far
    let mut best: Option<(i128, i64, i64)> = None;
    for u in (-xmax / a - 1)..=(xmax / a + 1) {
        let x = u * a;
        // y = u*b + v*c within [-ymax, ymax]
        let base = u * b;
        let vlo = Integer::div_floor(&(-ymax - base), &c);
        let vhi = Integer::div_floor(&(ymax - base), &c) + 1;
        for v in vlo..=vhi {
            let y = base + v * c;
            if x == 0 && y == 0 {
                continue;
            }
            let (xi, yi) = (x as i128, y as i128);
            let nm = xi * xi + t * xi * yi - s * yi * yi;
            if nm.abs() == target {
                let key = ((2 * xi + t * yi).abs(), y, x);
                if best.is_none_or(|bk| key < bk) {
                    best = Some(key);
                }
            }
        }
    }
    best.map(|(_, y, x)| FieldElement::from_ints(x, y))
}

/// A totally positive generator of `I`, if one exists.
pub fn find_positive_generator(f: &RealQuadraticField, i: &FractionalIdeal) -> Option<FieldElement> {
    let g = find_generator(f, i)?;
    let eps = &f.fund_unit;
    for u in [FieldElement::one(), FieldElement::one().neg(), eps.clone(), eps.neg()] {
        let cand = f.mul(&g, &u);
        if f.totally_positive(&cand) {
            return Some(cand);
        }
    }
    None
}

/// `(x, y)` with `x in A`, `y in B`, `x + y = 1`, for coprime integral ideals.
pub fn decompose_one(a: &FractionalIdeal, b: &FractionalIdeal) -> Result<(FieldElement, FieldElement), IdealError> {
    assert!(a.is_integral() && b.is_integral());
    let ab = a.basis();
    let bb = b.basis();
    let elems: Vec<&FieldElement> = ab.iter().chain(bb.iter()).collect();
    let rows: Mat = elems.iter().map(|e| vec![e.x.to_integer(), e.y.to_integer()]).collect();
    let (h, u) = hnf_with_transform(&rows, 2);
    if !(h[0][0].is_one() && h[0][1].is_zero()) {
        return Err(IdealError::NotCoprime);
    }
    let coeffs = &u[0];
    let mut x = FieldElement::zero();
    for (k, e) in ab.iter().enumerate() {
        x = x.add(&e.scale(&Rat::from_integer(coeffs[k].clone())));
    }
    let y = FieldElement::one().sub(&x);
    Ok((x, y))
}

/// The different ideal `(f'(w))`.
pub fn different(f: &RealQuadraticField) -> FractionalIdeal {
    // f(X) = X^2 - tX - s, f'(w) = 2w - t
    let g = FieldElement::from_ints(-f.t, 2);
    FractionalIdeal::principal(f, &g).unwrap()
}

/// The ring `O_F/n` for an integral ideal `n`, with residues stored as
/// reduced coordinates `(x, y)` of `x + y*w`.
#[derive(Clone, Debug)]
pub struct ModRing {
    pub t: i64,
    pub s: i64,
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub modulus: FractionalIdeal,
}

pub type Residue = (i64, i64);

impl ModRing {
    pub fn new(f: &RealQuadraticField, n: &FractionalIdeal) -> Self {
        assert!(n.is_integral(), "modulus must be integral");
        ModRing {
            t: f.t,
            s: f.s,
            a: n.a.to_i64().unwrap(),
            b: n.b.to_i64().unwrap(),
            c: n.c.to_i64().unwrap(),
            modulus: n.clone(),
        }
    }

    pub fn size(&self) -> i64 {
        self.a * self.c
    }

    pub fn reduce_ints(&self, x: i128, y: i128) -> Residue {
        let a = self.a as i128;
        let q = x.div_euclid(a);
        let x = x - q * a;
        let y = (y - q * self.b as i128).rem_euclid(self.c as i128);
        (x as i64, y as i64)
    }

    /// Reduction of an element integral at every prime dividing the modulus.
    pub fn reduce(&self, f: &RealQuadraticField, e: &FieldElement) -> Result<Residue, IdealError> {
        if e.is_integral() {
            let x = e.x.to_integer().mod_floor(&bi(self.a * self.c));
            let y = e.y.to_integer().mod_floor(&bi(self.a * self.c));
            return Ok(self.reduce_ints(x.to_i128().unwrap(), y.to_i128().unwrap()));
        }
        if self.size() == 1 {
            return Ok((0, 0));
        }
        // q in the denominator ideal of e, q = 1 mod n
        let den_ideal = FractionalIdeal::unit().intersect(f, &FractionalIdeal::principal(f, e)?.inv(f));
        let (q, _) = decompose_one(&den_ideal, &self.modulus).map_err(|_| IdealError::NotIntegralAtModulus)?;
        let qe = f.mul(&q, e);
        debug_assert!(qe.is_integral());
        self.reduce(f, &qe)
    }

    pub fn elements(&self) -> Vec<Residue> {
        let mut v = Vec::with_capacity(self.size() as usize);
        for x in 0..self.a {
            for y in 0..self.c {
                v.push((x, y));
            }
        }
        v
    }

    pub fn mul(&self, p: Residue, q: Residue) -> Residue {
        let (x1, y1, x2, y2) = (p.0 as i128, p.1 as i128, q.0 as i128, q.1 as i128);
        let yy = y1 * y2;
        self.reduce_ints(x1 * x2 + yy * self.s as i128, x1 * y2 + x2 * y1 + yy * self.t as i128)
    }

    pub fn add(&self, p: Residue, q: Residue) -> Residue {
        self.reduce_ints(p.0 as i128 + q.0 as i128, p.1 as i128 + q.1 as i128)
    }

    pub fn neg(&self, p: Residue) -> Residue {
        self.reduce_ints(-(p.0 as i128), -(p.1 as i128))
    }

    pub fn one(&self) -> Residue {
        self.reduce_ints(1, 0)
    }

    pub fn zero(&self) -> Residue {
        (0, 0)
    }

    pub fn to_element(&self, r: Residue) -> FieldElement {
        FieldElement::from_ints(r.0, r.1)
    }

    /// Units of the ring, found as residues with a multiplicative inverse.
    pub fn units(&self) -> Vec<Residue> {
        let all = self.elements();
        let one = self.one();
        all.iter().copied().filter(|&r| all.iter().any(|&s| self.mul(r, s) == one)).collect()
    }

    pub fn is_unit(&self, f: &RealQuadraticField, r: Residue) -> bool {
        if self.size() == 1 {
            return true;
        }
        if r == (0, 0) {
            return false;
        }
        let id = FractionalIdeal::principal(f, &self.to_element(r)).unwrap();
        id.add(&self.modulus).is_unit_ideal()
    }

    pub fn pow(&self, r: Residue, mut e: u64) -> Residue {
        let mut base = r;
        let mut out = self.one();
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(out, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        out
    }
}

/// Sign vector as a pair of `+-1`.
pub fn sign_pair(f: &RealQuadraticField, e: &FieldElement) -> (i8, i8) {
    let (s1, s2) = f.sign_vector(e);
    assert!(s1 != Sign::Zero && s2 != Sign::Zero, "zero element has no sign");
    (s1.as_i8(), s2.as_i8())
}

pub fn rat_int(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub fn int_elem(n: i64) -> FieldElement {
    FieldElement::from_rat(rat(n))
}
