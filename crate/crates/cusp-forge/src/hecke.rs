//! Admissible weights and the finite parts `chi_f` of algebraic Hecke
//! characters compatible with a weight.

use crate::abelian::{Character, Elem};
use crate::classgroup::RayClassGroup;
use crate::field::{FieldElement, Rat, RealQuadraticField};
use crate::ideal::{sign_pair, FractionalIdeal};
use num_traits::Signed;
use serde::Serialize;

/// `N(U_{1,n})^k = 1`.
pub fn is_admissible_weight(g: &RayClassGroup, k: i64) -> bool {
    let f = &g.field;
    g.units.u_1n.iter().all(|u| k % 2 == 0 || u.norm(f) == 1)
}

/// An element `alpha = 1 (mod n)` with prescribed signs at the two places.
pub fn sign_witness(f: &RealQuadraticField, n: &FractionalIdeal, signs: (i8, i8)) -> FieldElement {
    let [b0, b1] = n.basis();
    for r in 0i64.. {
        for i in -r..=r {
            for j in [r - i.abs(), -(r - i.abs())] {
                let nu = b0.scale(&Rat::from_integer(i.into())).add(&b1.scale(&Rat::from_integer(j.into())));
                let alpha = FieldElement::one().add(&nu);
                if !alpha.is_zero() && sign_pair(f, &alpha) == signs {
                    return alpha;
                }
            }
        }
    }
    unreachable!()
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub alpha: String,
    pub signs: (i8, i8),
    pub norm_sign: i8,
    pub class: Elem,
}

/// Sign witnesses generating `ker(G+_n -> G_n)`.
pub fn kernel_witnesses(g: &RayClassGroup) -> Vec<Witness> {
    let f = &g.field;
    [(-1i8, 1i8), (1, -1)]
        .iter()
        .map(|&s| {
            let a = sign_witness(f, &g.modulus, s);
            let ns = if f.norm(&a).is_negative() { -1 } else { 1 };
            Witness { alpha: a.to_string(), signs: s, norm_sign: ns, class: g.dlog_principal(&a).unwrap() }
        })
        .collect()
}

/// The subgroup `K = ker(G+_n -> G_n)`.
pub fn kernel_subgroup(g: &RayClassGroup) -> Vec<Elem> {
    let w = kernel_witnesses(g);
    let mut out = vec![g.group.zero()];
    loop {
        let mut grew = false;
        for x in out.clone() {
            for wi in &w {
                let y = g.group.add(&x, &wi.class);
                if !out.contains(&y) {
                    out.push(y);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    out.sort();
    out
}

/// Characters `chi_f` of `G+_n` with `chi_f((alpha)) = sgn N(alpha)^k` for
/// `alpha = 1 mod n`; empty when `k` is not admissible.
pub fn compatible_characters(g: &RayClassGroup, k: i64) -> Vec<Character> {
    assert!(g.narrow, "compatibility is defined on the narrow group");
    if !is_admissible_weight(g, k) {
        return vec![];
    }
    let w = kernel_witnesses(g);
    g.characters()
        .into_iter()
        .filter(|c| {
            w.iter().all(|wi| {
                let want = if k % 2 == 0 { 1 } else { wi.norm_sign };
                c.eval(&wi.class).as_sign() == Some(want)
            })
        })
        .collect()
}

/// `(-1)^k`-parity of a character: its value on the class of a mixed-sign
/// witness, if real.
pub fn character_sign(g: &RayClassGroup, chi: &Character) -> Option<i8> {
    let w = kernel_witnesses(g);
    let s = chi.eval(&w[0].class).as_sign()?;
    let t = chi.eval(&w[1].class).as_sign()?;
    (s == t).then_some(s)
}

/// Re-checks condition 2 for an arbitrary `alpha = 1 mod n`.
pub fn satisfies_condition(g: &RayClassGroup, chi: &Character, k: i64, alpha: &FieldElement) -> bool {
    let f = &g.field;
    let cls = g.dlog_principal(alpha).unwrap();
    let ns = if f.norm(alpha).is_negative() && k % 2 != 0 { -1 } else { 1 };
    chi.eval(&cls).as_sign() == Some(ns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(d: i64, n: i64) -> RayClassGroup {
        let f = RealQuadraticField::new(d).unwrap();
        RayClassGroup::new(&f, &FractionalIdeal::from_int(n), true).unwrap()
    }

    #[test]
    fn admissibility_level_one() {
        let g5 = group(5, 1);
        assert!(is_admissible_weight(&g5, 2));
        assert!(!is_admissible_weight(&g5, 1));
        let g3 = group(3, 1);
        assert!((0..6).all(|k| is_admissible_weight(&g3, k)));
    }

    #[test]
    fn sqrt3_characters() {
        let g = group(3, 1);
        let odd = compatible_characters(&g, 1);
        assert_eq!(odd.len(), 1);
        assert!(!odd[0].is_trivial());
        let even = compatible_characters(&g, 2);
        assert_eq!(even.len(), 1);
        assert!(even[0].is_trivial());
        assert!(compatible_characters(&group(5, 1), 3).is_empty());
    }

    #[test]
    fn witnesses_are_one_mod_n() {
        let g = group(2, 5);
        let f = &g.field;
        for s in [(-1, 1), (1, -1)] {
            let a = sign_witness(f, &g.modulus, s);
            assert!(g.modulus.contains(&a.sub(&FieldElement::one())));
            assert_eq!(sign_pair(f, &a), s);
        }
    }
}
