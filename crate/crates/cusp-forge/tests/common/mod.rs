//! Test-only oracles shared by the integration suites. They recompute
//! quantities by brute force or by a route independent of the library.
#![allow(dead_code)]

use cusp_forge::cusps::{CuspKey, CuspSpace};
use cusp_forge::field::{rat, FieldElement, RealQuadraticField};
use cusp_forge::ideal::{primes_up_to_norm, FractionalIdeal, ModRing, Residue};
use cusp_forge::lattice::{mat_det, Mat2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub fn field(d: i64) -> RealQuadraticField {
    RealQuadraticField::new(d).unwrap()
}

pub fn fe(x: i64, y: i64) -> FieldElement {
    FieldElement::from_ints(x, y)
}

pub fn space(d: i64, n: i64) -> CuspSpace {
    CuspSpace::new(&field(d), &FractionalIdeal::from_int(n)).unwrap()
}

/// Sign of the norm of the fundamental unit from the least nontrivial
/// solution of `x^2 - D y^2 = +-1` (or `+-4` when `D = 1 mod 4`).
pub fn pell_norm_sign(d: i64) -> i64 {
    let target = if d % 4 == 1 { 4 } else { 1 };
    for y in 1i64.. {
        let dy2 = d * y * y;
        for s in [-1i64, 1] {
            let x2 = dy2 + s * target;
            if x2 <= 0 {
                continue;
            }
            let x = (x2 as f64).sqrt().round() as i64;
            for xx in [x - 1, x, x + 1] {
                if xx > 0 && xx * xx == x2 {
                    return s;
                }
            }
        }
    }
    unreachable!()
}

/// Keys reached by lines `(x : y)` with coordinates in `[-h, h]`.
pub fn bounded_height_keys(s: &CuspSpace, h: i64) -> BTreeSet<CuspKey> {
    let mut out = BTreeSet::new();
    let mut elems = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            elems.push(fe(a, b));
        }
    }
    for lambda in 0..s.t_lambda.len() {
        for x in &elems {
            for y in &elems {
                if x.is_zero() && y.is_zero() {
                    continue;
                }
                let c = s.standard_label(lambda, &[x.clone(), y.clone()]).unwrap();
                out.insert(s.canonicalize(&c).unwrap().0);
            }
        }
    }
    out
}

/// Residues of `+-eps^i` modulo the ring's modulus.
pub fn unit_residues(f: &RealQuadraticField, ring: &ModRing) -> BTreeSet<Residue> {
    let units = ring.units().len();
    let mut img = BTreeSet::new();
    let eps = ring.reduce(f, &f.fund_unit).unwrap();
    let mut p = ring.one();
    for _ in 0..=units {
        img.insert(p);
        img.insert(ring.neg(p));
        p = ring.mul(p, eps);
    }
    img
}

/// `#((O/n)^* / image of O^*)` by listing residues.
pub fn unit_quotient(s: &CuspSpace) -> usize {
    let ring = ModRing::new(&s.field, &s.modulus);
    ring.units().len() / unit_residues(&s.field, &ring).len()
}

/// `#GL_2(O/n)` by counting matrices with unit determinant.
pub fn gl2_brute(f: &RealQuadraticField, n: &FractionalIdeal) -> u128 {
    let ring = ModRing::new(f, n);
    let elems = ring.elements();
    let units: BTreeSet<Residue> = ring.units().into_iter().collect();
    let mut count = 0u128;
    for &a in &elems {
        for &d in &elems {
            let ad = ring.mul(a, d);
            for &b in &elems {
                for &c in &elems {
                    let det = ring.add(ad, ring.neg(ring.mul(b, c)));
                    if units.contains(&det) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

/// Odd primes `l` dividing `#(O/n)^*` for which the totally positive
/// fundamental unit is not an `l`-th power, by listing `l`-th powers.
pub fn injective_primes_brute(f: &RealQuadraticField, n: &FractionalIdeal) -> Vec<u64> {
    let ring = ModRing::new(f, n);
    if ring.size() == 1 {
        return vec![];
    }
    let units = ring.units();
    let u = ring.reduce(f, &f.positive_unit()).unwrap();
    let order = units.len() as u64;
    let mut out = Vec::new();
    for l in (3..=order).step_by(2) {
        if order % l != 0 || !(2..l).all(|q| l % q != 0) {
            continue;
        }
        let powers: BTreeSet<Residue> = units.iter().map(|&x| ring.pow(x, l)).collect();
        if !powers.contains(&u) {
            out.push(l);
        }
    }
    out
}

/// `[U+_{1,n} : (U_{1,n})^2]` from the signs of `s * eps^e`: with `e1` the
/// least `e > 0` having `eps^e = +-1 mod n`, the squares are generated by
/// `eps^{2 e1}`, and `U+_{1,n}` by the least totally positive `eps^e = 1`.
pub fn square_index_brute(f: &RealQuadraticField, n: &FractionalIdeal) -> u128 {
    let ring = ModRing::new(f, n);
    let eps = ring.reduce(f, &f.fund_unit).unwrap();
    let nrm = pell_norm_sign(f.d);
    let one = ring.one();
    let mut p = one;
    let mut e1 = None;
    let mut e_plus = None;
    for e in 1i64.. {
        p = ring.mul(p, eps);
        if e1.is_none() && (p == one || ring.neg(p) == one) {
            e1 = Some(e);
        }
        if e_plus.is_none() && p == one && (nrm == 1 || e % 2 == 0) {
            e_plus = Some(e);
        }
        if let (Some(a), Some(b)) = (e1, e_plus) {
            return (2 * a / b) as u128;
        }
    }
    unreachable!()
}

/// Integral ideals of small norm, with inverses, for random choices.
pub fn small_ideals(f: &RealQuadraticField, bound: u64) -> Vec<FractionalIdeal> {
    let mut out = vec![FractionalIdeal::unit()];
    for p in primes_up_to_norm(f, bound) {
        out.push(p.ideal.inv(f));
        out.push(p.ideal);
    }
    out
}

pub fn random_elem(rng: &mut ChaCha8Rng, h: i64) -> FieldElement {
    fe(rng.gen_range(-h..=h), rng.gen_range(-h..=h))
}

/// A random `Z`-combination of the basis of an ideal.
pub fn random_in(rng: &mut ChaCha8Rng, i: &FractionalIdeal, h: i64) -> FieldElement {
    let [b0, b1] = i.basis();
    b0.scale(&rat(rng.gen_range(-h..=h))).add(&b1.scale(&rat(rng.gen_range(-h..=h))))
}

pub fn random_positive_matrix(f: &RealQuadraticField, rng: &mut ChaCha8Rng, h: i64) -> Mat2 {
    loop {
        let g = [[random_elem(rng, h), random_elem(rng, h)], [random_elem(rng, h), random_elem(rng, h)]];
        let d = mat_det(f, &g);
        if !d.is_zero() && f.totally_positive(&d) {
            return g;
        }
    }
}

/// `det(g) (b/c ∩ a/a_entry)`, the ideal of `t` with `(0, t)` in `g^t(b (+) a)`,
/// computed by ideal intersection. Zero entries drop their constraint.
pub fn line_ideal_by_intersection(f: &RealQuadraticField, a_id: &FractionalIdeal, b_id: &FractionalIdeal, g: &Mat2) -> FractionalIdeal {
    let det = mat_det(f, g);
    let (a, c) = (&g[0][0], &g[1][0]);
    let first = (!c.is_zero()).then(|| b_id.scale(f, &f.inv(c)));
    let second = (!a.is_zero()).then(|| a_id.scale(f, &f.inv(a)));
    let meet = match (first, second) {
        (Some(x), Some(y)) => x.intersect(f, &y),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (None, None) => unreachable!("invertible matrix"),
    };
    meet.scale(f, &det)
}
