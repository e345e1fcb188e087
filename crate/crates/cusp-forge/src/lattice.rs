//! Rank-2 `O_F`-lattices in `F^2`, lines in `P^1(F)`, and the ideal
//! bookkeeping of normalizing factors under `GL_2^+(F)`.

use crate::arith::{hnf, left_kernel, Mat};
use crate::field::{FieldElement, Rat, RealQuadraticField};
use crate::ideal::{FractionalIdeal, IdealError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Vec2 = [FieldElement; 2];

/// A 2x2 matrix over `F`, rows `[[a, b], [c, d]]`.
pub type Mat2 = [[FieldElement; 2]; 2];

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("degenerate line")]
    DegenerateLine,
    #[error("elements do not span a rank-4 lattice")]
    NotFullRank,
    #[error("determinant is not totally positive")]
    NotPositive,
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// `(1/den) * rowspan_Z(rows)` with rows in Hermite form over the
/// coordinates `(x1, y1, x2, y2)` of `(x1 + y1 w, x2 + y2 w)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice2 {
    pub den: BigInt,
    pub rows: Mat,
}

fn elem_coords(e: &FieldElement, d: &Rat) -> [BigInt; 2] {
    [(&e.x * d).to_integer(), (&e.y * d).to_integer()]
}

impl Lattice2 {
    pub fn from_z_span(vs: &[Vec2]) -> Result<Self, LatticeError> {
        let den = vs
            .iter()
            .flat_map(|v| v.iter())
            .fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator()));
        let d = Rat::from_integer(den.clone());
        let rows: Mat = vs
            .iter()
            .map(|v| {
                let [a, b] = elem_coords(&v[0], &d);
                let [c, e] = elem_coords(&v[1], &d);
                vec![a, b, c, e]
            })
            .collect();
        let h = hnf(&rows, 4);
        if h.len() != 4 {
            return Err(LatticeError::NotFullRank);
        }
        let g = h.iter().flatten().fold(den.clone(), |acc, v| acc.gcd(v));
        Ok(Lattice2 { den: &den / &g, rows: h.into_iter().map(|r| r.into_iter().map(|v| v / &g).collect()).collect() })
    }

    pub fn from_o_span(f: &RealQuadraticField, vs: &[Vec2]) -> Result<Self, LatticeError> {
        let w = f.omega();
        let mut all = Vec::with_capacity(vs.len() * 2);
        for v in vs {
            all.push(v.clone());
            all.push([f.mul(&v[0], &w), f.mul(&v[1], &w)]);
        }
        Self::from_z_span(&all)
    }

    /// `first (+) second`.
    pub fn direct_sum(first: &FractionalIdeal, second: &FractionalIdeal) -> Self {
        let mut vs = Vec::new();
        for e in first.basis() {
            vs.push([e, FieldElement::zero()]);
        }
        for e in second.basis() {
            vs.push([FieldElement::zero(), e]);
        }
        Self::from_z_span(&vs).expect("direct sum of nonzero ideals")
    }

    pub fn z_basis(&self) -> Vec<Vec2> {
        let d = Rat::from_integer(self.den.clone());
        self.rows
            .iter()
            .map(|r| {
                [
                    FieldElement::new(Rat::from_integer(r[0].clone()) / &d, Rat::from_integer(r[1].clone()) / &d),
                    FieldElement::new(Rat::from_integer(r[2].clone()) / &d, Rat::from_integer(r[3].clone()) / &d),
                ]
            })
            .collect()
    }

    pub fn contains(&self, v: &Vec2) -> bool {
        let d = Rat::from_integer(self.den.clone());
        let mut val: Vec<Rat> = vec![&v[0].x * &d, &v[0].y * &d, &v[1].x * &d, &v[1].y * &d];
        if !val.iter().all(|x| x.is_integer()) {
            return false;
        }
        let mut val: Vec<BigInt> = val.drain(..).map(|x| x.to_integer()).collect();
        for r in &self.rows {
            let p = r.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if !val[p].is_multiple_of(&r[p]) {
                return false;
            }
            let q = &val[p] / &r[p];
            for (a, b) in val.iter_mut().zip(r) {
                *a -= &q * b;
            }
        }
        val.iter().all(|x| x.is_zero())
    }

    pub fn is_o_stable(&self, f: &RealQuadraticField) -> bool {
        let w = f.omega();
        self.z_basis().iter().all(|v| self.contains(&[f.mul(&v[0], &w), f.mul(&v[1], &w)]))
    }

    /// Image under `(h1, h2) -> (a h1 + c h2, b h1 + d h2)`, i.e. `g^t(H)`.
    pub fn transpose_apply(&self, f: &RealQuadraticField, g: &Mat2) -> Self {
        let vs: Vec<Vec2> = self.z_basis().iter().map(|h| apply_transpose(f, g, h)).collect();
        Self::from_z_span(&vs).expect("invertible matrix")
    }

    pub fn scale(&self, f: &RealQuadraticField, t: &FieldElement) -> Self {
        let vs: Vec<Vec2> = self.z_basis().iter().map(|h| [f.mul(t, &h[0]), f.mul(t, &h[1])]).collect();
        Self::from_z_span(&vs).expect("nonzero scalar")
    }

    /// `N * H` for a fractional ideal `N`.
    pub fn ideal_mul(&self, f: &RealQuadraticField, n: &FractionalIdeal) -> Self {
        let mut vs = Vec::new();
        for t in n.basis() {
            for h in self.z_basis() {
                vs.push([f.mul(&t, &h[0]), f.mul(&t, &h[1])]);
            }
        }
        Self::from_z_span(&vs).expect("nonzero ideal")
    }

    /// The determinant ideal, spanned by all `det(h, h')`.
    pub fn det_ideal(&self, f: &RealQuadraticField) -> FractionalIdeal {
        let b = self.z_basis();
        let mut dets = Vec::new();
        for i in 0..b.len() {
            for j in (i + 1)..b.len() {
                let d = det2(f, &b[i], &b[j]);
                if !d.is_zero() {
                    dets.push(d);
                }
            }
        }
        FractionalIdeal::from_generators(f, &dets).expect("rank-4 lattice")
    }

    /// `(a, b)` with `a = {t : t v in H}` and `b = {det(h, v) : h in H}`,
    /// so that `det(H) = a b`.
    pub fn intersect_line(&self, f: &RealQuadraticField, v: &Vec2) -> Result<(FractionalIdeal, FractionalIdeal), LatticeError> {
        if v[0].is_zero() && v[1].is_zero() {
            return Err(LatticeError::DegenerateLine);
        }
        let basis = self.z_basis();
        let phis: Vec<FieldElement> = basis.iter().map(|h| det2(f, h, v)).collect();
        let b = FractionalIdeal::from_z_span(&phis)?;
        let den = phis.iter().fold(BigInt::one(), |acc, e| acc.lcm(&e.denominator()));
        let d = Rat::from_integer(den);
        let m: Mat = phis.iter().map(|e| elem_coords(e, &d).to_vec()).collect();
        let ker = left_kernel(&m, 2);
        let mut ts = Vec::new();
        for row in ker {
            let mut h0 = FieldElement::zero();
            let mut h1 = FieldElement::zero();
            for (c, h) in row.iter().zip(basis.iter()) {
                let c = Rat::from_integer(c.clone());
                h0 = h0.add(&h[0].scale(&c));
                h1 = h1.add(&h[1].scale(&c));
            }
            let t = if !v[1].is_zero() { f.div(&h1, &v[1]) } else { f.div(&h0, &v[0]) };
            ts.push(t);
        }
        let a = FractionalIdeal::from_z_span(&ts)?;
        Ok((a, b))
    }
}

pub fn det2(f: &RealQuadraticField, h: &Vec2, v: &Vec2) -> FieldElement {
    f.mul(&h[0], &v[1]).sub(&f.mul(&h[1], &v[0]))
}

pub fn apply_transpose(f: &RealQuadraticField, g: &Mat2, h: &Vec2) -> Vec2 {
    [
        f.mul(&g[0][0], &h[0]).add(&f.mul(&g[1][0], &h[1])),
        f.mul(&g[0][1], &h[0]).add(&f.mul(&g[1][1], &h[1])),
    ]
}

pub fn mat_det(f: &RealQuadraticField, g: &Mat2) -> FieldElement {
    f.mul(&g[0][0], &g[1][1]).sub(&f.mul(&g[0][1], &g[1][0]))
}

pub fn mat_mul(f: &RealQuadraticField, g: &Mat2, h: &Mat2) -> Mat2 {
    let e = |i: usize, j: usize| f.mul(&g[i][0], &h[0][j]).add(&f.mul(&g[i][1], &h[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat_identity() -> Mat2 {
    [[FieldElement::one(), FieldElement::zero()], [FieldElement::zero(), FieldElement::one()]]
}

/// `L_infinity = 0 (+) F`.
pub fn line_infinity() -> Vec2 {
    [FieldElement::zero(), FieldElement::one()]
}

/// Canonical representative of the line through `v`: `(r, 1)` or `(1, 0)`,
/// then scaled by the least positive integer making all coordinates integral.
pub fn canonical_line(f: &RealQuadraticField, v: &Vec2) -> Result<Vec2, LatticeError> {
    let (r0, r1) = if !v[1].is_zero() {
        (f.div(&v[0], &v[1]), FieldElement::one())
    } else if !v[0].is_zero() {
        (FieldElement::one(), FieldElement::zero())
    } else {
        return Err(LatticeError::DegenerateLine);
    };
    let den = Rat::from_integer(r0.denominator());
    Ok([r0.scale(&den), r1.scale(&den)])
}

fn nonzero_scale(f: &RealQuadraticField, i: &FractionalIdeal, x: &FieldElement) -> Option<FractionalIdeal> {
    if x.is_zero() {
        None
    } else {
        Some(i.scale(f, x))
    }
}

fn sum_opt(p: Option<FractionalIdeal>, q: Option<FractionalIdeal>) -> FractionalIdeal {
    match (p, q) {
        (Some(p), Some(q)) => p.add(&q),
        (Some(p), None) => p,
        (None, Some(q)) => q,
        (None, None) => panic!("singular matrix"),
    }
}

fn check_positive(f: &RealQuadraticField, g: &Mat2) -> Result<FieldElement, LatticeError> {
    let d = mat_det(f, g);
    if d.is_zero() || !f.totally_positive(&d) {
        return Err(LatticeError::NotPositive);
    }
    Ok(d)
}

/// `I_{alpha,g} = det(g) b a (a b + c a)^{-1}` for `H = b (+) a`.
pub fn normalizing_ideal_i(
    f: &RealQuadraticField,
    a_ideal: &FractionalIdeal,
    b_ideal: &FractionalIdeal,
    g: &Mat2,
) -> Result<FractionalIdeal, LatticeError> {
    let d = check_positive(f, g)?;
    let s = sum_opt(nonzero_scale(f, b_ideal, &g[0][0]), nonzero_scale(f, a_ideal, &g[1][0]));
    Ok(b_ideal.mul(f, a_ideal).scale(f, &d).div(f, &s))
}

/// `J_{alpha,g} = det(g)^{-1} (a + c b^{-1} a)`.
pub fn normalizing_ideal_j(
    f: &RealQuadraticField,
    a_ideal: &FractionalIdeal,
    b_ideal: &FractionalIdeal,
    g: &Mat2,
) -> Result<FractionalIdeal, LatticeError> {
    let d = check_positive(f, g)?;
    let ba = a_ideal.div(f, b_ideal);
    let s = sum_opt(nonzero_scale(f, &FractionalIdeal::unit(), &g[0][0]), nonzero_scale(f, &ba, &g[1][0]));
    Ok(s.scale(f, &f.inv(&d)))
}

/// `det(g) (a + c t^{-1} d^{-1})^{-1}` for the standard label `t d (+) O`.
/// This agrees with `I_{alpha_lambda, g}`.
pub fn standard_label_ideal(
    f: &RealQuadraticField,
    t: &FractionalIdeal,
    g: &Mat2,
) -> Result<FractionalIdeal, LatticeError> {
    let d = check_positive(f, g)?;
    let td_inv = t.mul(f, &crate::ideal::different(f)).inv(f);
    let s = sum_opt(nonzero_scale(f, &FractionalIdeal::unit(), &g[0][0]), nonzero_scale(f, &td_inv, &g[1][0]));
    Ok(s.inv(f).scale(f, &d))
}

/// An invertible ideal together with a choice of positive component of
/// `N (x) R = R^2`, recorded as a sign pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PositiveIdeal {
    pub ideal: FractionalIdeal,
    pub pos: (i8, i8),
}

impl PositiveIdeal {
    pub fn standard(ideal: FractionalIdeal) -> Self {
        PositiveIdeal { ideal, pos: (1, 1) }
    }

    pub fn mul(&self, f: &RealQuadraticField, o: &Self) -> Self {
        PositiveIdeal { ideal: self.ideal.mul(f, &o.ideal), pos: (self.pos.0 * o.pos.0, self.pos.1 * o.pos.1) }
    }

    /// Transport along multiplication by `x`.
    pub fn scale(&self, f: &RealQuadraticField, x: &FieldElement) -> Self {
        let (s1, s2) = crate::ideal::sign_pair(f, x);
        PositiveIdeal { ideal: self.ideal.scale(f, x), pos: (self.pos.0 * s1, self.pos.1 * s2) }
    }

    /// Whether multiplication by `x` is an isomorphism of ideals with positivity onto `o`.
    pub fn iso_by(&self, f: &RealQuadraticField, x: &FieldElement, o: &Self) -> bool {
        !x.is_zero() && &self.scale(f, x) == o
    }
}

pub fn int_vec(v: &[i64; 4]) -> Vec2 {
    [FieldElement::from_ints(v[0], v[1]), FieldElement::from_ints(v[2], v[3])]
}

pub fn zero_vec() -> Vec2 {
    [FieldElement::zero(), FieldElement::zero()]
}

pub fn standard_lattice(f: &RealQuadraticField, t: &FractionalIdeal) -> Lattice2 {
    Lattice2::direct_sum(&t.mul(f, &crate::ideal::different(f)), &FractionalIdeal::unit())
}

pub fn unit_lattice() -> Lattice2 {
    Lattice2::direct_sum(&FractionalIdeal::unit(), &FractionalIdeal::unit())
}
