//! Fundamental units against a Pell-equation search, and ray class group
//! orders against the class number formula with tabulated class numbers.

mod common;

use common::{field, pell_norm_sign, unit_residues};
use cusp_forge::classgroup::RayClassGroup;
use cusp_forge::field::{rat, FieldElement};
use cusp_forge::ideal::{FractionalIdeal, ModRing};

fn squarefree(d: i64) -> bool {
    (2..=d).take_while(|p| p * p <= d).all(|p| d % (p * p) != 0)
}

/// Least `x, y > 0` with `x^2 - D y^2 = +-1` (`+-4` when `D = 1 mod 4`), as
/// an element in the `1, w` basis.
fn pell_unit(d: i64) -> FieldElement {
    let target = if d % 4 == 1 { 4 } else { 1 };
    for y in 1i64.. {
        for s in [-1i64, 1] {
            let x2 = d * y * y + s * target;
            let x = (x2 as f64).sqrt().round() as i64;
            for x in [x - 1, x, x + 1] {
                if x > 0 && x * x == x2 {
                    // with w = (1 + sqrt D)/2 the unit (x + y sqrt D)/2 is ((x - y)/2) + y w
                    return if target == 4 { FieldElement::from_ints((x - y) / 2, y) } else { FieldElement::from_ints(x, y) };
                }
            }
        }
    }
    unreachable!()
}

#[test]
fn fundamental_units_match_pell_search() {
    for d in (2..60).filter(|&d| squarefree(d)) {
        let f = field(d);
        assert_eq!(f.fund_unit, pell_unit(d), "D = {d}");
        assert_eq!(f.unit_norm(), pell_norm_sign(d), "D = {d}");
        assert_eq!(f.norm(&f.fund_unit), rat(pell_norm_sign(d)));
    }
}

/// Wide class numbers of `Q(sqrt D)`.
const CLASS_NUMBERS: &[(i64, u64)] =
    &[(2, 1), (3, 1), (5, 1), (6, 1), (7, 1), (10, 2), (13, 1), (14, 1), (15, 2), (21, 1), (26, 2), (30, 2), (34, 2), (35, 2), (79, 3), (82, 4)];

#[test]
fn class_numbers_match_table() {
    for &(d, h) in CLASS_NUMBERS {
        let f = field(d);
        let wide = RayClassGroup::new(&f, &FractionalIdeal::unit(), false).unwrap();
        let narrow = RayClassGroup::new(&f, &FractionalIdeal::unit(), true).unwrap();
        assert_eq!(wide.group.order(), h, "D = {d}");
        let want = if pell_norm_sign(d) == -1 { h } else { 2 * h };
        assert_eq!(narrow.group.order(), want, "D = {d}");
    }
}

/// `#Cl_n = h phi(n) / [O^* : U_{1,n}]` and
/// `#Cl+_n = h phi(n) 4 / [O^* : U+_{1,n}]`.
#[test]
fn ray_class_orders_match_formula() {
    for &(d, h) in &CLASS_NUMBERS[..10] {
        let f = field(d);
        for m in [2, 3, 4, 5, 7, 6] {
            let n = FractionalIdeal::from_int(m);
            let ring = ModRing::new(&f, &n);
            let phi = ring.units().len() as u64;
            let image = unit_residues(&f, &ring).len() as u64;
            let wide = RayClassGroup::new(&f, &n, false).unwrap();
            assert_eq!(wide.group.order(), h * phi / image, "D = {d}, n = {m}");
            // totally positive units = 1 mod n are eps^e with eps^e = 1 and N(eps^e) = 1
            let eps = ring.reduce(&f, &f.fund_unit).unwrap();
            let mut p = eps;
            let mut e = 1u64;
            while p != ring.one() || (pell_norm_sign(d) == -1 && e % 2 == 1) {
                p = ring.mul(p, eps);
                e += 1;
            }
            let narrow = RayClassGroup::new(&f, &n, true).unwrap();
            assert_eq!(narrow.group.order(), h * phi * 4 / (2 * e), "D = {d}, n = {m}");
        }
    }
}

/// Kronecker symbol `(disc / q)` at a prime `q`.
fn kronecker_prime(disc: i64, q: i64) -> i64 {
    if q == 2 {
        return match disc.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    let mut r = 1i64;
    for _ in 0..(q - 1) / 2 {
        r = r * disc.rem_euclid(q) % q;
    }
    match r {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn kronecker(disc: i64, mut m: i64) -> i64 {
    let mut out = 1;
    let mut q = 2;
    while m > 1 {
        while m % q == 0 {
            out *= kronecker_prime(disc, q);
            m /= q;
        }
        q += 1;
    }
    out
}

#[test]
fn ideal_enumeration_matches_dirichlet_series() {
    for d in [2, 3, 5, 10, 13, 34, 79] {
        let f = field(d);
        let disc = if d % 4 == 1 { d } else { 4 * d };
        let bound = 60;
        let want: i64 = (1..=bound).map(|m| (1..=m).filter(|x| m % x == 0).map(|x| kronecker(disc, x)).sum::<i64>()).sum();
        let got = cusp_forge::ideal::integral_ideals_up_to(&f, bound as u64);
        assert_eq!(got.len() as i64, want, "D = {d}");
        assert!(got.iter().all(|i| i.norm() <= rat(bound)));
    }
}
