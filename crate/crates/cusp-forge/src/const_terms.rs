//! Constant terms and truncated q-expansions at cusps, the diamond action on
//! them, the group-ring image `R`, and the vector `B` built from a character
//! into `R`.
//!
//! Entries are stored relative to the generator `|N(a)|^{-k}` of the constant
//! term module at the stored representative of each cusp. At any other label
//! of the same class the normalized entry differs by `sgn(N(x))^k`, where `x`
//! is the scaling on `a` of an isomorphism to the representative.

use crate::abelian::{Character, Elem, FiniteAbelian};
use crate::cusps::{orbit_rep, positive_elements, CuspError, CuspSet, CuspSpace};
use crate::cyclotomic::Cyclo;
use crate::field::{FieldElement, Rat, RealQuadraticField};
use crate::hecke::{compatible_characters, kernel_subgroup};
use crate::ideal::{FractionalIdeal, IdealError};
use crate::lattice::{line_infinity, standard_label_ideal, Mat2};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstTermError {
    #[error(transparent)]
    Cusp(#[from] CuspError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error("character parity does not match (-1)^k")]
    ParityMismatch,
    #[error("weight {0} is not admissible at this level")]
    Inadmissible(i64),
    #[error("odd weight needs characteristic 2")]
    OddWeight,
    #[error("entry not divisible by p^m")]
    NotDivisible,
    #[error("m is smaller than ord_p(#G)")]
    ExponentTooSmall,
    #[error("cusp is not in the p-unramified set")]
    UnknownCusp,
}

fn sign_pow(s: i8, k: i64) -> i8 {
    if s < 0 && k.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

fn norm_sign(f: &RealQuadraticField, x: &FieldElement) -> i8 {
    if f.norm(x).is_positive() {
        1
    } else {
        -1
    }
}

/// The image `R` of `O[G]` in the product of `O = Z[zeta_m]` over the
/// characters of a fixed parity.
#[derive(Clone, Debug)]
pub struct GroupRingImage {
    pub group: FiniteAbelian,
    pub chars: Vec<Character>,
    /// Representatives of `G / K` for `K = ker(G+_n -> G_n)`.
    pub coset_reps: Vec<Elem>,
    pub kernel: Vec<Elem>,
    pub m: u64,
}

impl GroupRingImage {
    pub fn new(space: &CuspSpace, k: i64) -> Self {
        let g = &space.narrow;
        let chars = compatible_characters(g, k);
        let kernel = kernel_subgroup(g);
        let mut covered = std::collections::HashSet::new();
        let mut coset_reps = Vec::new();
        for e in g.group.elements() {
            if covered.contains(&e) {
                continue;
            }
            for h in &kernel {
                covered.insert(g.group.add(&e, h));
            }
            coset_reps.push(e);
        }
        GroupRingImage { group: g.group.clone(), chars, coset_reps, kernel, m: g.group.exponent().max(1) }
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn value(&self, chi: &Character, g: &[u64]) -> Cyclo {
        Cyclo::from_root(self.m, &chi.eval(g))
    }

    /// `psi(g)` for the canonical character `psi: G -> R*`.
    pub fn psi(&self, g: &[u64]) -> Vec<Cyclo> {
        self.chars.iter().map(|c| self.value(c, g)).collect()
    }

    pub fn from_int(&self, n: i64) -> Vec<Cyclo> {
        vec![Cyclo::from_int(self.m, n); self.chars.len()]
    }

    /// Image of `sum_g c_g [g]`.
    pub fn image(&self, terms: &[(Elem, Cyclo)]) -> Vec<Cyclo> {
        self.chars
            .iter()
            .map(|chi| terms.iter().fold(Cyclo::zero(self.m), |acc, (g, c)| acc.add(&c.mul(&self.value(chi, g)))))
            .collect()
    }

    /// `(#G) e_psi`, as the image of `sum_g psi(g)^{-1} [g]`.
    pub fn scaled_idempotent(&self, i: usize) -> Vec<Cyclo> {
        let chi = &self.chars[i];
        let terms: Vec<(Elem, Cyclo)> =
            self.group.elements().into_iter().map(|g| (g.clone(), Cyclo::from_root(self.m, &chi.eval(&g).inv()))).collect();
        self.image(&terms)
    }

    /// Coordinates `c_i` with `sum_i c_i psi(g_i) = r_psi` over the coset
    /// representatives `g_i`; unique because the characters of this parity
    /// separate the cosets of `K`.
    pub fn solve(&self, r: &[Cyclo]) -> Vec<Cyclo> {
        let idx = Rat::new(BigInt::one(), BigInt::from(self.chars.len().max(1) as u64));
        self.coset_reps
            .iter()
            .map(|g| {
                self.chars
                    .iter()
                    .zip(r)
                    .fold(Cyclo::zero(self.m), |acc, (chi, rv)| acc.add(&rv.mul(&Cyclo::from_root(self.m, &chi.eval(g).inv()))))
                    .scale(&idx)
            })
            .collect()
    }

    /// Membership in `R` with `O = Z[zeta_m]`.
    pub fn contains(&self, r: &[Cyclo]) -> bool {
        self.represents(r) && self.solve(r).iter().all(|c| c.is_integral())
    }

    /// Membership in `R` with `O = Z_(p)[zeta_m]`.
    pub fn contains_p(&self, r: &[Cyclo], p: u64) -> bool {
        self.represents(r) && self.solve(r).iter().all(|c| c.is_p_integral(p))
    }

    /// Whether the solved coordinates reproduce `r`.
    fn represents(&self, r: &[Cyclo]) -> bool {
        let c = self.solve(r);
        let terms: Vec<(Elem, Cyclo)> = self.coset_reps.iter().cloned().zip(c).collect();
        self.image(&terms) == r
    }
}

/// A constant-term vector over a list of cusps. `None` marks cusps where the
/// constant-term module vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantTermVector {
    pub k: i64,
    pub entries: Vec<Option<Cyclo>>,
    /// Coefficients taken in characteristic 2.
    pub mod2: bool,
}

impl ConstantTermVector {
    pub fn add(&self, o: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.add(b)),
                _ => None,
            })
            .collect();
        ConstantTermVector { k: self.k, entries, mod2: self.mod2 }
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let entries = self.entries.iter().map(|e| e.as_ref().map(|v| v.mul(c))).collect();
        ConstantTermVector { k: self.k, entries, mod2: self.mod2 }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_zero())
    }

    /// Entrywise reduction of integral entries modulo 2.
    pub fn reduce_mod2(&self) -> Self {
        let two = BigInt::from(2);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                e.as_ref().map(|v| Cyclo { m: v.m, coeffs: v.coeffs.iter().map(|c| Rat::from_integer(num_integer::Integer::mod_floor(&c.to_integer(), &two))).collect() })
            })
            .collect();
        ConstantTermVector { k: self.k, entries, mod2: true }
    }

    /// Entrywise product (constant term of a product of q-expansions).
    pub fn mul(&self, o: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .zip(&o.entries)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.mul(b)),
                _ => None,
            })
            .collect();
        ConstantTermVector { k: self.k + o.k, entries, mod2: self.mod2 || o.mod2 }
    }
}

/// A truncated q-expansion at one cusp: coefficients at `U_C`-orbit
/// representatives of totally positive `b in M_C` of trace at most `T`,
/// together with the constant term at index `0`.
#[derive(Clone, Debug)]
pub struct TruncatedQExpansion {
    pub cusp: usize,
    pub indices: Vec<FieldElement>,
    pub coeffs: Vec<Cyclo>,
    unit: FieldElement,
}

impl TruncatedQExpansion {
    pub fn coeff(&self, f: &RealQuadraticField, b: &FieldElement) -> Option<&Cyclo> {
        let r = orbit_rep(f, &self.unit, b);
        self.indices.iter().position(|x| x == &r).map(|i| &self.coeffs[i])
    }
}

/// Constant terms of weight `k` on the `p`-unramified cusps of level `n`.
#[derive(Clone, Debug)]
pub struct ConstTermSpace {
    pub space: CuspSpace,
    pub p: u64,
    pub k: i64,
    pub set: CuspSet,
    pub ring: GroupRingImage,
}

impl ConstTermSpace {
    pub fn new(f: &RealQuadraticField, n: &FractionalIdeal, p: u64, k: i64) -> Result<Self, ConstTermError> {
        let space = CuspSpace::new(f, n)?;
        let cusps = space.p_unramified_cusps(p);
        let set = CuspSet::new(&space, cusps)?;
        let ring = GroupRingImage::new(&space, k);
        Ok(ConstTermSpace { space, p, k, set, ring })
    }

    pub fn field(&self) -> &RealQuadraticField {
        &self.space.field
    }

    pub fn group(&self) -> &FiniteAbelian {
        &self.space.narrow.group
    }

    pub fn admissible(&self, i: usize) -> bool {
        self.set.cusps[i].is_admissible(self.k)
    }

    /// A vector with the given entry at every admissible cusp.
    pub fn constant(&self, c: &Cyclo) -> ConstantTermVector {
        let entries = (0..self.set.len()).map(|i| self.admissible(i).then(|| c.clone())).collect();
        ConstantTermVector { k: self.k, entries, mod2: false }
    }

    /// The basis vector at cusp `i`.
    pub fn basis_vector(&self, i: usize, m: u64) -> ConstantTermVector {
        let entries = (0..self.set.len())
            .map(|j| self.admissible(j).then(|| Cyclo::from_int(m, (i == j) as i64)))
            .collect();
        ConstantTermVector { k: self.k, entries, mod2: false }
    }

    /// `f_k`: all entries `1`; for odd `k` only in characteristic 2, where
    /// every cusp carries an entry.
    pub fn ones_vector(&self, mod2: bool) -> Result<ConstantTermVector, ConstTermError> {
        if mod2 {
            let entries = (0..self.set.len()).map(|_| Some(Cyclo::from_int(self.ring.m, 1))).collect();
            return Ok(ConstantTermVector { k: self.k, entries, mod2: true });
        }
        if self.k % 2 != 0 {
            return Err(ConstTermError::OddWeight);
        }
        Ok(self.constant(&Cyclo::from_int(self.ring.m, 1)))
    }

    /// `[g] v`: the entry at `[C]` is the normalized entry of `v` at
    /// `C (x) N^{-1}` for `N` in the class `g`.
    pub fn act(&self, g: &[u64], v: &ConstantTermVector) -> ConstantTermVector {
        let f = self.field();
        let gi = self.group().index(&self.group().neg(g));
        let row = &self.set.action[gi];
        let entries = (0..self.set.len())
            .map(|i| {
                let (j, t) = &row[i];
                let e = v.entries[*j].as_ref()?;
                if v.mod2 || sign_pow(norm_sign(f, &t.x), v.k) == 1 {
                    Some(e.clone())
                } else {
                    Some(e.neg())
                }
            })
            .collect();
        ConstantTermVector { k: v.k, entries, mod2: v.mod2 }
    }

    /// `[N] v` for an ideal `N` coprime to `pn`.
    pub fn act_ideal(&self, n: &FractionalIdeal, v: &ConstantTermVector) -> Result<ConstantTermVector, ConstTermError> {
        let f = self.field();
        let pn = self.space.modulus.mul(f, &FractionalIdeal::from_int(self.p as i64));
        if !n.is_coprime(f, &pn) {
            return Err(IdealError::NotCoprime.into());
        }
        let g = self.space.narrow.dlog(n)?;
        Ok(self.act(&g, v))
    }

    fn check_parity(&self, chi: &Character) -> Result<(), ConstTermError> {
        if self.ring.chars.contains(chi) {
            Ok(())
        } else {
            Err(ConstTermError::ParityMismatch)
        }
    }

    /// `sum_g psi(g)^{-1} [g] v`, the `#G`-scaled isotypic projection.
    pub fn isotypic_project_scaled(&self, v: &ConstantTermVector, chi: &Character) -> Result<ConstantTermVector, ConstTermError> {
        self.check_parity(chi)?;
        let m = self.ring.m;
        let mut acc: Option<ConstantTermVector> = None;
        for g in self.group().elements() {
            let w = self.act(&g, v).scale(&Cyclo::from_root(m, &chi.eval(&g).inv()));
            acc = Some(match acc {
                None => w,
                Some(a) => a.add(&w),
            });
        }
        Ok(acc.unwrap())
    }

    /// `(1/#G) sum_g psi(g)^{-1} [g] v`.
    pub fn isotypic_project(&self, v: &ConstantTermVector, chi: &Character) -> Result<ConstantTermVector, ConstTermError> {
        let w = self.isotypic_project_scaled(v, chi)?;
        let inv = Cyclo::from_rat(self.ring.m, Rat::new(BigInt::one(), BigInt::from(self.ring.order())));
        Ok(w.scale(&inv))
    }

    /// Rank of the `psi`-isotypic part, as the number of orbits on which the
    /// projection of a basis vector is nonzero.
    pub fn isotypic_rank(&self, chi: &Character) -> Result<usize, ConstTermError> {
        let mut rank = 0;
        for orb in self.set.orbits() {
            let i = orb[0];
            if !self.admissible(i) {
                continue;
            }
            if !self.isotypic_project_scaled(&self.basis_vector(i, self.ring.m), chi)?.is_zero() {
                rank += 1;
            }
        }
        Ok(rank)
    }

    /// The vector `B`, one specialization per character into `R`, built from
    /// integral representatives `reps[g]` of the classes of `G+_n`.
    ///
    /// The entry at `[C_lambda (x) N^{-1}]` is `psi(N)` at that label. Every
    /// assignment to an already filled entry is checked for agreement.
    pub fn build_b_with(&self, reps: &[FractionalIdeal]) -> Result<Vec<ConstantTermVector>, ConstTermError> {
        if self.ring.chars.is_empty() {
            return Err(ConstTermError::Inadmissible(self.k));
        }
        let f = self.field();
        let space = &self.space;
        let group = self.group();
        let m = self.ring.m;
        let mut vals: Vec<Option<Vec<Cyclo>>> = vec![None; self.set.len()];
        for lambda in 0..space.t_lambda.len() {
            let c = space.standard_label(lambda, &line_infinity())?;
            for g in group.elements() {
                // a representative of the inverse class
                let ninv = &reps[group.index(&group.neg(&g))];
                let label = space.diamond_act(ninv, &c)?;
                let (key, t) = space.canonicalize(&label)?;
                let i = *self.set.index.get(&key).ok_or(ConstTermError::UnknownCusp)?;
                let s = sign_pow(norm_sign(f, &t.x), self.k);
                let val: Vec<Cyclo> = self.ring.psi(&g).into_iter().map(|z| if s < 0 { z.neg() } else { z }).collect();
                match &vals[i] {
                    Some(old) => assert_eq!(old, &val, "B is not well defined"),
                    None => vals[i] = Some(val),
                }
            }
        }
        let out = (0..self.ring.chars.len())
            .map(|ci| {
                let entries = (0..self.set.len())
                    .map(|i| {
                        if !self.admissible(i) {
                            return None;
                        }
                        Some(vals[i].as_ref().map(|v| v[ci].clone()).unwrap_or_else(|| Cyclo::zero(m)))
                    })
                    .collect();
                ConstantTermVector { k: self.k, entries, mod2: false }
            })
            .collect();
        Ok(out)
    }

    pub fn build_b(&self) -> Result<Vec<ConstantTermVector>, ConstTermError> {
        self.build_b_with(&self.space.class_reps)
    }

    /// Checks `[g] B = psi(g) B` for every `g` in the list.
    pub fn is_psi_isotypic(&self, b: &[ConstantTermVector], gens: &[Elem]) -> bool {
        gens.iter().all(|g| {
            self.ring.chars.iter().enumerate().all(|(ci, chi)| self.act(g, &b[ci]) == b[ci].scale(&self.ring.value(chi, g)))
        })
    }

    /// Normalized entry of `v` at `C_{(A, lambda)}`, with the ideal
    /// `a = det(A) (a + c t^{-1} d^{-1})^{-1}` of that label.
    pub fn normalized_entry(&self, v: &ConstantTermVector, a: &Mat2, lambda: usize) -> Result<(Option<Cyclo>, FractionalIdeal), ConstTermError> {
        let f = self.field();
        let label = self.space.matrix_label(a, lambda)?;
        let ideal = standard_label_ideal(f, &self.space.t_lambda[lambda], a).map_err(CuspError::from)?;
        let (key, t) = self.space.canonicalize(&label)?;
        let i = *self.set.index.get(&key).ok_or(ConstTermError::UnknownCusp)?;
        let s = sign_pow(norm_sign(f, &t.x), v.k);
        let e = v.entries[i].as_ref().map(|e| if s < 0 && !v.mod2 { e.neg() } else { e.clone() });
        Ok((e, ideal))
    }

    /// `psi(I)` for a fractional ideal coprime to `n`.
    pub fn psi_of_ideal(&self, i: &FractionalIdeal) -> Result<Vec<Cyclo>, ConstTermError> {
        let g = self.space.narrow.dlog(i)?;
        Ok(self.ring.psi(&g))
    }

    /// The R-valued target `sum_psi (#G/p^m) e_psi const(f_psi)`: its
    /// specializations and the quotient `#G/p^m`.
    pub fn lift_target(&self, consts: &[ConstantTermVector], m: u32) -> Result<LiftTarget, ConstTermError> {
        let p = self.p;
        let order = self.ring.order();
        let ord_p = crate::arith::valuation(&BigInt::from(order), p);
        if m < ord_p {
            return Err(ConstTermError::ExponentTooSmall);
        }
        let pm = BigInt::from(p).pow(m);
        for v in consts {
            if !v.entries.iter().flatten().all(|e| e.divisible_by(&pm, p)) {
                return Err(ConstTermError::NotDivisible);
            }
        }
        let q = Rat::new(BigInt::from(order), pm.clone());
        let qc = Cyclo::from_rat(self.ring.m, q.clone());
        let specs: Vec<ConstantTermVector> = consts.iter().map(|v| v.scale(&qc)).collect();
        // re-project each entry through group-ring coordinates
        for i in 0..self.set.len() {
            if !self.admissible(i) {
                continue;
            }
            let r: Vec<Cyclo> = specs.iter().map(|v| v.entries[i].clone().unwrap()).collect();
            let coords = self.ring.solve(&r);
            if !self.ring.contains_p(&r, p) {
                return Err(ConstTermError::NotDivisible);
            }
            for (ci, chi) in self.ring.chars.iter().enumerate() {
                let back = self
                    .ring
                    .coset_reps
                    .iter()
                    .zip(&coords)
                    .fold(Cyclo::zero(self.ring.m), |acc, (g, c)| acc.add(&c.mul(&self.ring.value(chi, g))));
                assert_eq!(back, r[ci], "re-projection disagrees");
            }
        }
        Ok(LiftTarget { specializations: specs, quotient: q, p_valuation: m as i64 - ord_p as i64 })
    }

    /// Transport of a q-index `b` at cusp `i` under `[g]`: the cusp `j` and
    /// index at its representative supplying the coefficient, with the sign.
    pub fn transport_index(&self, g: &[u64], i: usize, b: &FieldElement) -> (usize, FieldElement, i8) {
        let f = self.field();
        let gi = self.group().index(&self.group().neg(g));
        let (j, t) = &self.set.action[gi][i];
        let w = f.div(&t.y, &t.x);
        let bj = f.mul(&w, b);
        (*j, orbit_rep(f, &self.uc_unit(*j), &bj), sign_pow(norm_sign(f, &t.x), self.k))
    }

    /// Generator of `U_C` at cusp `i`.
    pub fn uc_unit(&self, i: usize) -> FieldElement {
        let f = self.field();
        f.pow(&f.positive_unit(), self.set.cusps[i].uc_exp)
    }

    /// Truncated q-expansion at cusp `i` with coefficients from `coeff`.
    pub fn truncated(&self, i: usize, t: i64, coeff: impl Fn(&FieldElement) -> Cyclo) -> TruncatedQExpansion {
        let f = self.field();
        let u = self.uc_unit(i);
        let mut indices: Vec<FieldElement> = Vec::new();
        for b in positive_elements(f, &self.set.cusps[i].data.m, t) {
            let r = orbit_rep(f, &u, &b);
            if !indices.contains(&r) {
                indices.push(r);
            }
        }
        let coeffs = indices.iter().map(&coeff).collect();
        TruncatedQExpansion { cusp: i, indices, coeffs, unit: u }
    }

    /// Nonzero truncated indices at cusp `i` fixed by a nontrivial stabilizer
    /// element, as `(class, index)` pairs.
    pub fn fixed_indices(&self, i: usize, t: i64) -> Vec<(Elem, FieldElement)> {
        let q = self.truncated(i, t, |_| Cyclo::zero(1));
        let mut out = Vec::new();
        for st in self.set.stabilizer(&self.space, i) {
            if self.group().is_zero(&st.class) {
                continue;
            }
            for b in q.indices.iter().skip(1) {
                let (j, bj, _) = self.transport_index(&st.class, i, b);
                if j == i && &bj == b {
                    out.push((st.class.clone(), b.clone()));
                }
            }
        }
        out
    }
}

/// Output of `lift_target`.
#[derive(Clone, Debug)]
pub struct LiftTarget {
    pub specializations: Vec<ConstantTermVector>,
    /// `#G / p^m`.
    pub quotient: Rat,
    /// `ord_p(p^m / #G)`.
    pub p_valuation: i64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::mat_identity;

    fn cts(d: i64, n: i64, p: u64, k: i64) -> ConstTermSpace {
        let f = RealQuadraticField::new(d).unwrap();
        ConstTermSpace::new(&f, &FractionalIdeal::from_int(n), p, k).unwrap()
    }

    #[test]
    fn trivial_psi_gives_ones() {
        let c = cts(3, 1, 5, 2);
        let b = c.build_b().unwrap();
        let triv = c.ring.chars.iter().position(|x| x.is_trivial()).unwrap();
        assert!(b[triv].entries.iter().all(|e| e.as_ref().unwrap() == &Cyclo::from_int(c.ring.m, 1)));
    }

    #[test]
    fn b_is_isotypic_and_well_defined() {
        for (d, n, p, k) in [(3, 1, 5, 1), (3, 1, 5, 2), (5, 3, 7, 2), (2, 3, 5, 2), (5, 4, 3, 2)] {
            let c = cts(d, n, p, k);
            let b = c.build_b().unwrap();
            let gens: Vec<Elem> = c.group().elements();
            assert!(c.is_psi_isotypic(&b, &gens), "D={d} n={n}");
        }
    }

    #[test]
    fn identity_matrix_entry() {
        let c = cts(5, 1, 3, 2);
        let b = c.build_b().unwrap();
        let (e, ideal) = c.normalized_entry(&b[0], &mat_identity(), 0).unwrap();
        assert!(ideal.is_unit_ideal());
        assert_eq!(e.unwrap(), Cyclo::from_int(c.ring.m, 1));
    }

    #[test]
    fn scaled_idempotents_lie_in_r() {
        let c = cts(2, 7, 3, 2);
        for i in 0..c.ring.chars.len() {
            let e = c.ring.scaled_idempotent(i);
            assert!(c.ring.contains(&e));
            let half: Vec<Cyclo> = e.iter().map(|x| x.scale(&Rat::new(1.into(), (c.ring.order() as i64).into()))).collect();
            if c.ring.order() > c.ring.kernel.len() as u64 {
                assert!(!c.ring.contains(&half));
            }
        }
    }

    #[test]
    fn ones_vector_mod2() {
        let c1 = cts(5, 1, 3, 1);
        let f1 = c1.ones_vector(true).unwrap();
        assert!(c1.ones_vector(false).is_err());
        let c2 = cts(5, 1, 3, 2);
        let f2 = c2.ones_vector(false).unwrap();
        assert_eq!(f1.mul(&f1).reduce_mod2().entries, f2.reduce_mod2().entries);
    }
}
