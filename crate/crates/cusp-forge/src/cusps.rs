//! Component labels, cusp labels and their canonical keys, enumeration of
//! cusps, and the action of the narrow ray class group on cusps.
//!
//! A cusp label is stored as a lattice `H` in `F^2`, a line `L`, and the image
//! `gamma` of `1` under the level structure. Positivity on `det(H)` is always
//! the one induced from `F`, so isomorphisms are the `g` with totally positive
//! determinant.
//!
//! Writing `a = {t : t v in H}` and `b = {det(h, v)}` for a vector `v`
//! spanning `L`, an isomorphism scales `a` by some `x` and `b` by some `y`
//! with `xy` totally positive. The canonical key of a label records the class
//! of `a` in `Cl`, the class of `ab` in `Cl+`, and the residues of the two
//! components of `gamma` after rescaling to fixed representatives, minimized
//! over the remaining unit pairs `(x, y)`.

use crate::abelian::Elem;
use crate::classgroup::RayClassGroup;
use crate::field::{FieldElement, Rat, RealQuadraticField};
use crate::ideal::{
    decompose_one, different, factor, find_generator, find_positive_generator, primes_up_to_norm, FractionalIdeal, IdealError,
    ModRing, Residue,
};
use crate::lattice::{apply_transpose, canonical_line, det2, line_infinity, standard_lattice, Lattice2, LatticeError, Mat2, Vec2};
use num_integer::Integer;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CuspError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("lattice is not an O_F-module of rank 2")]
    NotModule,
    #[error("gamma does not lie in the lattice")]
    GammaOutside,
    #[error("gamma is not injective on O_F/n")]
    NotInjective,
}

/// A cusp label `(H, gamma, L)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspLabel {
    pub lattice: Lattice2,
    pub gamma: Vec2,
    pub line: Vec2,
}

/// Canonical invariants of a cusp.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CuspKey {
    /// Index of the class of `a` in `Cl`.
    pub a_class: usize,
    /// Index of the class of `ab = det(H)` in `Cl+`.
    pub c_class: usize,
    /// The `b`-component of `gamma` modulo `n`.
    pub beta: Residue,
    /// The `a`-component of `gamma` modulo `e = beta O + n`.
    pub alpha: Residue,
}

/// Scalings `x` on `a` and `y` on `b` of an isomorphism from a label to the
/// representative of its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transport {
    pub x: FieldElement,
    pub y: FieldElement,
}

/// The unit pair `(sign * eps^i, sign * eps^j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct UnitPair {
    sign: i64,
    i: i64,
    j: i64,
}

impl UnitPair {
    fn compose(self, o: Self) -> Self {
        UnitPair { sign: self.sign * o.sign, i: self.i + o.i, j: self.j + o.j }
    }

    fn over(self, o: Self) -> Self {
        UnitPair { sign: self.sign * o.sign, i: self.i - o.i, j: self.j - o.j }
    }
}

/// Data attached to a label: the two ideals, the unipotent lattice `M_C*`
/// and its trace dual `M_C`.
#[derive(Clone, Debug)]
pub struct LabelData {
    pub a: FractionalIdeal,
    pub b: FractionalIdeal,
    /// `e = phi(gamma) b^{-1} + n`.
    pub e: FractionalIdeal,
    pub m_star: FractionalIdeal,
    pub m: FractionalIdeal,
}

/// A cusp: its key, a representative label, and derived data.
#[derive(Clone, Debug)]
pub struct Cusp {
    pub key: CuspKey,
    pub rep: CuspLabel,
    pub data: LabelData,
    /// Index in `Cl+` of the component `[det(H) d^{-1}]`.
    pub component: usize,
    /// `U_C = (u+)^uc_exp` for `u+` the generator of totally positive units.
    pub uc_exp: i64,
    /// Order of `eps_C` (1 or 2).
    pub eps_order: u8,
    pub unramified: bool,
}

impl Cusp {
    pub fn is_admissible(&self, k: i64) -> bool {
        self.eps_order == 1 || k.rem_euclid(2) == 0
    }
}

/// Cusps of a fixed level together with the class-group data needed to
/// canonicalize labels.
#[derive(Clone, Debug)]
pub struct CuspSpace {
    pub field: RealQuadraticField,
    pub modulus: FractionalIdeal,
    pub ring: ModRing,
    /// `G+_n`.
    pub narrow: RayClassGroup,
    /// `G_n`.
    pub wide: RayClassGroup,
    pub cl: RayClassGroup,
    pub cl_plus: RayClassGroup,
    /// Integral representatives of `Cl`, coprime to `n`, indexed like `cl`.
    pub a_reps: Vec<FractionalIdeal>,
    /// Integral representatives of `Cl+`, coprime to `n`, indexed like `cl_plus`.
    pub c_reps: Vec<FractionalIdeal>,
    /// `t_lambda` for each `lambda` in `Cl+`.
    pub t_lambda: Vec<FractionalIdeal>,
    /// Least-norm prime in each class of `G+_n`.
    pub class_reps: Vec<FractionalIdeal>,
    q_a: Vec<FieldElement>,
    q_c: Vec<FieldElement>,
    gens: Vec<(UnitPair, Residue, Residue)>,
    eps_plus_exp: i64,
}

/// Representatives of each class: `O` for the trivial class, otherwise the
/// least-norm prime coprime to `n`.
fn class_ideals(g: &RayClassGroup, n: &FractionalIdeal, allow_unit: bool) -> Vec<FractionalIdeal> {
    let f = &g.field;
    let size = g.order() as usize;
    let mut reps: Vec<Option<FractionalIdeal>> = vec![None; size];
    let mut found = 0;
    if allow_unit {
        reps[0] = Some(FractionalIdeal::unit());
        found = 1;
    }
    let mut bound = 50;
    let mut seen = 0;
    while found < size {
        let ps = primes_up_to_norm(f, bound);
        for p in ps.iter().skip(seen) {
            if !p.ideal.is_coprime(f, n) {
                continue;
            }
            let k = g.group.index(&g.dlog(&p.ideal).unwrap());
            if reps[k].is_none() {
                reps[k] = Some(p.ideal.clone());
                found += 1;
            }
        }
        seen = ps.len();
        bound *= 2;
    }
    reps.into_iter().map(|r| r.unwrap()).collect()
}

/// `q in I` with `q = 1 mod n`, for integral `I` coprime to `n`.
fn one_mod(i: &FractionalIdeal, n: &FractionalIdeal) -> FieldElement {
    if n.is_unit_ideal() {
        // any nonzero element works at level one
        return i.basis()[0].clone();
    }
    decompose_one(i, n).expect("coprime ideals").0
}

impl CuspSpace {
    pub fn new(f: &RealQuadraticField, n: &FractionalIdeal) -> Result<Self, IdealError> {
        if !n.is_integral() {
            return Err(IdealError::NotIntegralAtModulus);
        }
        let unit = FractionalIdeal::unit();
        let narrow = RayClassGroup::new(f, n, true)?;
        let wide = RayClassGroup::new(f, n, false)?;
        let cl = RayClassGroup::new(f, &unit, false)?;
        let cl_plus = RayClassGroup::new(f, &unit, true)?;
        let a_reps = class_ideals(&cl, n, true);
        let c_reps = class_ideals(&cl_plus, n, true);
        let t_lambda = class_ideals(&cl_plus, n, false);
        let class_reps = narrow.class_representatives();
        let ring = ModRing::new(f, n);
        let q_a = a_reps.iter().map(|i| one_mod(i, n)).collect();
        let q_c = c_reps.iter().map(|i| one_mod(i, n)).collect();
        let eps_plus_exp = if f.unit_norm() == 1 { 1 } else { 2 };
        let res = |e: i64| ring.reduce(f, &f.pow(&f.fund_unit, e)).unwrap();
        let minus = ring.neg(ring.one());
        let one = ring.one();
        let gens = vec![
            (UnitPair { sign: -1, i: 0, j: 0 }, minus, minus),
            (UnitPair { sign: 1, i: 1, j: -1 }, res(1), res(-1)),
            (UnitPair { sign: 1, i: eps_plus_exp, j: 0 }, res(eps_plus_exp), one),
        ];
        Ok(CuspSpace {
            field: f.clone(),
            modulus: n.clone(),
            ring,
            narrow,
            wide,
            cl,
            cl_plus,
            a_reps,
            c_reps,
            t_lambda,
            class_reps,
            q_a,
            q_c,
            gens,
            eps_plus_exp,
        })
    }

    fn cl_index(&self, i: &FractionalIdeal) -> usize {
        self.cl.group.index(&self.cl.dlog(i).unwrap())
    }

    fn cl_plus_index(&self, i: &FractionalIdeal) -> usize {
        self.cl_plus.group.index(&self.cl_plus.dlog(i).unwrap())
    }

    /// The standard component label `t d (+) O` with `gamma = (0, 1)`.
    pub fn standard_lattice(&self, lambda: usize) -> Lattice2 {
        standard_lattice(&self.field, &self.t_lambda[lambda])
    }

    /// The label `(alpha_lambda, L)`.
    pub fn standard_label(&self, lambda: usize, line: &Vec2) -> Result<CuspLabel, CuspError> {
        let line = canonical_line(&self.field, line)?;
        Ok(CuspLabel { lattice: self.standard_lattice(lambda), gamma: line_infinity(), line })
    }

    /// `C_{(A, lambda)}`: the label `A^{-1} alpha_lambda` at `L_infinity`,
    /// whose lattice is `A^t(H_lambda)` and whose `gamma` is `(c, d)`.
    pub fn matrix_label(&self, a: &Mat2, lambda: usize) -> Result<CuspLabel, CuspError> {
        let f = &self.field;
        let det = crate::lattice::mat_det(f, a);
        if det.is_zero() || !f.totally_positive(&det) {
            return Err(LatticeError::NotPositive.into());
        }
        let lattice = self.standard_lattice(lambda).transpose_apply(f, a);
        let gamma = apply_transpose(f, a, &line_infinity());
        Ok(CuspLabel { lattice, gamma, line: line_infinity() })
    }

    /// Checks that a label is well formed at this level.
    pub fn validate(&self, c: &CuspLabel) -> Result<(), CuspError> {
        let f = &self.field;
        if !c.lattice.is_o_stable(f) || c.lattice.rows.len() != 4 {
            return Err(CuspError::NotModule);
        }
        if !c.lattice.contains(&c.gamma) {
            return Err(CuspError::GammaOutside);
        }
        let v = canonical_line(f, &c.line)?;
        let (a, b) = c.lattice.intersect_line(f, &v)?;
        let beta = det2(f, &c.gamma, &v);
        let e = self.e_ideal(&b, &beta);
        // injective iff the a-component is a unit modulo e
        let t0 = self.line_component(c, &v, &a, &e);
        let injective = e.is_unit_ideal() || (!t0.is_zero() && FractionalIdeal::principal(f, &t0)?.div(f, &a).add(&e).is_unit_ideal());
        if !injective {
            return Err(CuspError::NotInjective);
        }
        Ok(())
    }

    /// `e = beta b^{-1} + n` (integral).
    fn e_ideal(&self, b: &FractionalIdeal, beta: &FieldElement) -> FractionalIdeal {
        let f = &self.field;
        if beta.is_zero() {
            return self.modulus.clone();
        }
        FractionalIdeal::principal(f, beta).unwrap().div(f, b).add(&self.modulus)
    }

    /// `t in a` with `gamma - t v in e H`.
    fn line_component(&self, c: &CuspLabel, v: &Vec2, a: &FractionalIdeal, e: &FractionalIdeal) -> FieldElement {
        let f = &self.field;
        if e.is_unit_ideal() {
            return FieldElement::zero();
        }
        let eh = c.lattice.ideal_mul(f, e);
        let m = e.min_integer();
        let m = num_traits::ToPrimitive::to_i64(&m).expect("small modulus");
        let [a0, a1] = a.basis();
        for i in 0..m {
            for j in 0..m {
                let t = a0.scale(&Rat::from_integer(i.into())).add(&a1.scale(&Rat::from_integer(j.into())));
                let w = [c.gamma[0].sub(&f.mul(&t, &v[0])), c.gamma[1].sub(&f.mul(&t, &v[1]))];
                if eh.contains(&w) {
                    return t;
                }
            }
        }
        panic!("gamma has no line component; label is not valid")
    }

    /// Ideals and unipotent lattices of a label.
    pub fn label_data(&self, c: &CuspLabel) -> Result<LabelData, CuspError> {
        let f = &self.field;
        let v = canonical_line(f, &c.line)?;
        let (a, b) = c.lattice.intersect_line(f, &v)?;
        let beta = det2(f, &c.gamma, &v);
        let e = self.e_ideal(&b, &beta);
        let m_star = a.div(f, &b).mul(f, &self.modulus).div(f, &e);
        let m = m_star.mul(f, &different(f)).inv(f);
        Ok(LabelData { a, b, e, m_star, m })
    }

    /// Whether `gamma(O/m)` is `(H cap L)/m(H cap L)`, i.e. `phi(gamma) in m b`.
    pub fn is_unramified_at(&self, c: &CuspLabel, m: &FractionalIdeal) -> Result<bool, CuspError> {
        let f = &self.field;
        let v = canonical_line(f, &c.line)?;
        let (_, b) = c.lattice.intersect_line(f, &v)?;
        let beta = det2(f, &c.gamma, &v);
        Ok(beta.is_zero() || b.mul(f, m).contains(&beta))
    }

    pub fn is_unramified(&self, c: &CuspLabel) -> Result<bool, CuspError> {
        self.is_unramified_at(c, &self.modulus)
    }

    /// The part of `n` supported above the rational prime `p`.
    pub fn p_part(&self, p: u64) -> FractionalIdeal {
        let f = &self.field;
        let mut out = FractionalIdeal::unit();
        for (q, e) in factor(f, &self.modulus) {
            if q.p == p {
                out = out.mul(f, &q.ideal.pow(f, e));
            }
        }
        out
    }

    /// The same label viewed at level `P | n`.
    pub fn reduce_level(&self, c: &CuspLabel) -> CuspLabel {
        c.clone()
    }

    pub fn is_p_unramified(&self, c: &CuspLabel, p: u64) -> Result<bool, CuspError> {
        let lower = self.reduce_level(c);
        self.is_unramified_at(&lower, &self.p_part(p))
    }

    /// Unit-pair orbit of `(alpha mod e, beta mod n)`: every state with the
    /// unit pair reaching it, and Schreier generators of the stabilizer.
    fn orbit(&self, alpha: Residue, beta: Residue, ring_e: &ModRing) -> (Vec<((Residue, Residue), UnitPair)>, Vec<UnitPair>) {
        let id = UnitPair { sign: 1, i: 0, j: 0 };
        let mut seen: HashMap<(Residue, Residue), UnitPair> = HashMap::new();
        let mut order = vec![((alpha, beta), id)];
        let mut stab = Vec::new();
        seen.insert((alpha, beta), id);
        let mut queue = VecDeque::from([(alpha, beta)]);
        let gens: Vec<(UnitPair, Residue, Residue)> =
            self.gens.iter().map(|&(u, x, y)| (u, ring_e.reduce_ints(x.0 as i128, x.1 as i128), y)).collect();
        while let Some(s) = queue.pop_front() {
            let u0 = seen[&s];
            for &(g, x, y) in &gens {
                let t = (ring_e.mul(x, s.0), self.ring.mul(y, s.1));
                let u1 = g.compose(u0);
                match seen.get(&t) {
                    Some(&u) => {
                        let st = u1.over(u);
                        if st != id {
                            stab.push(st);
                        }
                    }
                    None => {
                        seen.insert(t, u1);
                        order.push((t, u1));
                        queue.push_back(t);
                    }
                }
            }
        }
        (order, stab)
    }

    fn unit_value(&self, u: UnitPair) -> (FieldElement, FieldElement) {
        let f = &self.field;
        let s = Rat::from_integer(u.sign.into());
        (f.pow(&f.fund_unit, u.i).scale(&s), f.pow(&f.fund_unit, u.j).scale(&s))
    }

    /// Canonical key of a label and the scalings taking it to the stored
    /// representative of its class.
    pub fn canonicalize(&self, c: &CuspLabel) -> Result<(CuspKey, Transport), CuspError> {
        let f = &self.field;
        let v = canonical_line(f, &c.line)?;
        let (a, b) = c.lattice.intersect_line(f, &v)?;
        let a_class = self.cl_index(&a);
        let ab = a.mul(f, &b);
        let c_class = self.cl_plus_index(&ab);
        let a_rep = &self.a_reps[a_class];
        let c_rep = &self.c_reps[c_class];
        let x = if &a == a_rep {
            FieldElement::one()
        } else {
            find_generator(f, &a_rep.div(f, &a)).expect("same class")
        };
        let z = if &ab == c_rep {
            FieldElement::one()
        } else {
            find_positive_generator(f, &c_rep.div(f, &ab)).expect("same narrow class")
        };
        let y = f.div(&z, &x);
        let phi = det2(f, &c.gamma, &v);
        let beta = self.ring.reduce(f, &f.mul(&y, &phi))?;
        let e = self.e_ideal(&FractionalIdeal::unit(), &self.ring.to_element(beta));
        let ring_e = ModRing::new(f, &e);
        debug_assert_eq!(self.e_ideal(&b, &phi), e);
        let t0 = self.line_component(c, &v, &a, &e);
        let alpha = ring_e.reduce(f, &f.mul(&x, &t0))?;
        let (states, _) = self.orbit(alpha, beta, &ring_e);
        let ((min_a, min_b), u) = states.iter().min_by_key(|((a, b), _)| (*b, *a)).cloned().unwrap();
        let (ux, uy) = self.unit_value(u);
        let key = CuspKey { a_class, c_class, beta: min_b, alpha: min_a };
        Ok((key, Transport { x: f.mul(&x, &ux), y: f.mul(&y, &uy) }))
    }

    /// Whether two labels are isomorphic; when they are, the scalings
    /// `(u, v)` on `a` and `b` of an isomorphism `C1 -> C2`. The unipotent
    /// part `m` is not returned; it exists whenever the keys agree.
    pub fn cusp_equiv(&self, c1: &CuspLabel, c2: &CuspLabel) -> Result<Option<Transport>, CuspError> {
        let f = &self.field;
        let (k1, t1) = self.canonicalize(c1)?;
        let (k2, t2) = self.canonicalize(c2)?;
        if k1 != k2 {
            return Ok(None);
        }
        Ok(Some(Transport { x: f.div(&t1.x, &t2.x), y: f.div(&t1.y, &t2.y) }))
    }

    /// The representative label with the given key.
    pub fn rep_label(&self, key: &CuspKey) -> CuspLabel {
        let f = &self.field;
        let a = &self.a_reps[key.a_class];
        let b = self.c_reps[key.c_class].div(f, a);
        let beta = f.mul(&self.ring.to_element(key.beta), &self.q_c[key.c_class]);
        let alpha = f.mul(&self.ring.to_element(key.alpha), &self.q_a[key.a_class]);
        CuspLabel { lattice: Lattice2::direct_sum(&b, a), gamma: [beta, alpha], line: line_infinity() }
    }

    /// Builds the cusp with a given key (which must be canonical).
    pub fn cusp(&self, key: &CuspKey) -> Cusp {
        let f = &self.field;
        let rep = self.rep_label(key);
        let data = self.label_data(&rep).expect("valid representative");
        let ring_e = ModRing::new(f, &data.e);
        let (_, stab) = self.orbit(key.alpha, key.beta, &ring_e);
        let g = stab.iter().fold(0i64, |g, u| g.gcd(&(u.i - u.j)));
        assert!(g > 0 && g % self.eps_plus_exp == 0);
        let neg_norm = f.unit_norm() == -1 && stab.iter().any(|u| u.j.rem_euclid(2) == 1);
        let det = data.a.mul(f, &data.b);
        let component = self.cl_plus_index(&det.div(f, &different(f)));
        Cusp {
            key: key.clone(),
            rep,
            data,
            component,
            uc_exp: g / self.eps_plus_exp,
            eps_order: if neg_norm { 2 } else { 1 },
            unramified: key.beta == (0, 0),
        }
    }

    /// Canonical unit-pair orbit representatives `(alpha, beta)` with
    /// `alpha` a unit modulo `e`.
    pub fn gamma_orbits(&self) -> Vec<(Residue, Residue)> {
        let f = &self.field;
        let mut out = Vec::new();
        let mut seen: HashSet<(Residue, Residue)> = HashSet::new();
        for beta in self.ring.elements() {
            let e = self.e_ideal(&FractionalIdeal::unit(), &self.ring.to_element(beta));
            let ring_e = ModRing::new(f, &e);
            for alpha in ring_e.elements() {
                if seen.contains(&(alpha, beta)) || !ring_e.is_unit(f, alpha) {
                    continue;
                }
                let (states, _) = self.orbit(alpha, beta, &ring_e);
                let mut min = (alpha, beta);
                for ((a, b), _) in &states {
                    seen.insert((*a, *b));
                    if (*b, *a) < (min.1, min.0) {
                        min = (*a, *b);
                    }
                }
                out.push(min);
            }
        }
        out.sort_by_key(|&(a, b)| (b, a));
        out
    }

    /// All cusps of level `n`, enumerated by invariant tuples.
    pub fn all_cusps(&self) -> Vec<Cusp> {
        let orbits = self.gamma_orbits();
        let mut out = Vec::new();
        for a_class in 0..self.a_reps.len() {
            for c_class in 0..self.c_reps.len() {
                for &(alpha, beta) in &orbits {
                    out.push(self.cusp(&CuspKey { a_class, c_class, beta, alpha }));
                }
            }
        }
        out.sort_by(|x, y| x.key.cmp(&y.key));
        out
    }

    /// `Cusp_infinity(n)`.
    pub fn unramified_cusps(&self) -> Vec<Cusp> {
        self.all_cusps().into_iter().filter(|c| c.unramified).collect()
    }

    /// `Cusp_p(n)`: cusps whose image at the `p`-part of `n` is unramified.
    pub fn p_unramified_cusps(&self, p: u64) -> Vec<Cusp> {
        let pp = self.p_part(p);
        let ring_p = ModRing::new(&self.field, &pp);
        self.all_cusps()
            .into_iter()
            .filter(|c| ring_p.reduce_ints(c.key.beta.0 as i128, c.key.beta.1 as i128) == (0, 0))
            .collect()
    }

    /// `Cusp_infinity(n)` as the `G+_n`-orbit of the standard cusps
    /// `(alpha_lambda, L_infinity)`.
    pub fn unramified_by_orbit(&self) -> Result<Vec<CuspKey>, CuspError> {
        let mut keys = HashSet::new();
        for lambda in 0..self.t_lambda.len() {
            let c = self.standard_label(lambda, &line_infinity())?;
            for n in &self.class_reps {
                keys.insert(self.canonicalize(&self.diamond_act(n, &c)?)?.0);
            }
        }
        let mut keys: Vec<CuspKey> = keys.into_iter().collect();
        keys.sort();
        Ok(keys)
    }

    /// `C (x) N` for an integral ideal `N` coprime to `n`.
    pub fn diamond_act(&self, n: &FractionalIdeal, c: &CuspLabel) -> Result<CuspLabel, CuspError> {
        let f = &self.field;
        if !n.is_integral() || !n.is_coprime(f, &self.modulus) {
            return Err(IdealError::NotCoprime.into());
        }
        let nu = one_mod(n, &self.modulus);
        Ok(CuspLabel {
            lattice: c.lattice.ideal_mul(f, n),
            gamma: [f.mul(&nu, &c.gamma[0]), f.mul(&nu, &c.gamma[1])],
            line: c.line.clone(),
        })
    }

    /// `C (x) M` for `M` the stored representative of a class of `G+_n`.
    pub fn diamond_act_class(&self, g: &[u64], c: &CuspLabel) -> Result<CuspLabel, CuspError> {
        let idx = self.narrow.group.index(g);
        self.diamond_act(&self.class_reps[idx], c)
    }

    /// `sgn(N(mu))` for a generator `mu` of `N` when `ker(Cl+ -> Cl)` is
    /// nontrivial, else `1`.
    pub fn sign_class(&self, n: &FractionalIdeal) -> i8 {
        let f = &self.field;
        if f.unit_norm() == -1 {
            return 1;
        }
        let mu = find_generator(f, n).expect("ideal in the kernel of Cl+ -> Cl is principal");
        if f.norm(&mu) > Rat::from_integer(0.into()) {
            1
        } else {
            -1
        }
    }

    /// Exponent of a totally positive unit as a power of `u+`.
    pub fn u_plus_exponent(&self, w: &FieldElement) -> i64 {
        let (s, e) = self.field.unit_log(w).expect("unit");
        assert_eq!(s, 1);
        assert_eq!(e % self.eps_plus_exp, 0);
        e / self.eps_plus_exp
    }
}

/// A set of cusps with the `G+_n` action tabulated.
#[derive(Clone, Debug)]
pub struct CuspSet {
    pub cusps: Vec<Cusp>,
    pub index: BTreeMap<CuspKey, usize>,
    /// `action[g][i]`: the class of `C_i (x) M_g` and the transport to its
    /// representative, for `g` indexed like `G+_n`.
    pub action: Vec<Vec<(usize, Transport)>>,
}

/// A stabilizer element with its characters.
#[derive(Clone, Debug, Serialize)]
pub struct StabElement {
    pub class: Elem,
    pub sgn: i8,
    /// `psi_C` as an exponent of `u+` modulo `uc_exp`.
    pub psi: i64,
    /// Sign of `N(x)` for the scaling `x` on `a` of `C (x) M -> C`.
    pub norm_sign: i8,
}

impl CuspSet {
    /// Tabulates the action on a `G+_n`-stable list of cusps.
    pub fn new(space: &CuspSpace, cusps: Vec<Cusp>) -> Result<Self, CuspError> {
        let index: BTreeMap<CuspKey, usize> = cusps.iter().enumerate().map(|(i, c)| (c.key.clone(), i)).collect();
        let mut action = Vec::new();
        for m in &space.class_reps {
            let mut row = Vec::new();
            for c in &cusps {
                let (k, t) = space.canonicalize(&space.diamond_act(m, &c.rep)?)?;
                let j = *index.get(&k).expect("cusp set is stable under G+_n");
                row.push((j, t));
            }
            action.push(row);
        }
        Ok(CuspSet { cusps, index, action })
    }

    pub fn len(&self) -> usize {
        self.cusps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cusps.is_empty()
    }

    /// `Stab_[C]` with `sgn_C` and `psi_C`.
    pub fn stabilizer(&self, space: &CuspSpace, i: usize) -> Vec<StabElement> {
        let f = &space.field;
        let c = &self.cusps[i];
        let mut out = Vec::new();
        for (g, row) in self.action.iter().enumerate() {
            let (j, t) = &row[i];
            if *j != i {
                continue;
            }
            let w = f.div(&t.y, &t.x);
            let psi = space.u_plus_exponent(&w).rem_euclid(c.uc_exp);
            let ns = if f.norm(&t.x) > Rat::from_integer(0.into()) { 1 } else { -1 };
            out.push(StabElement {
                class: space.narrow.group.from_index(g),
                sgn: space.sign_class(&space.class_reps[g]),
                psi,
                norm_sign: ns,
            });
        }
        out
    }

    /// Orbits of `G+_n` as sorted index lists.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for i in 0..self.len() {
            if seen[i] {
                continue;
            }
            let mut orb: Vec<usize> = self.action.iter().map(|row| row[i].0).collect();
            orb.sort();
            orb.dedup();
            for &j in &orb {
                seen[j] = true;
            }
            out.push(orb);
        }
        out
    }

    /// Whether every class in `ker(G+_n -> G_n)` fixes every cusp, so that
    /// the wide group acts and its orbits are the `G+_n`-orbits.
    pub fn kernel_acts_trivially(&self, space: &CuspSpace) -> bool {
        let (images, _) = crate::classgroup::narrow_to_wide_kernel(&space.narrow, &space.wide);
        let wide = &space.wide.group;
        space.narrow.group.elements().iter().enumerate().all(|(g, e)| {
            let mut acc = wide.zero();
            for (c, im) in e.iter().zip(&images) {
                acc = wide.add(&acc, &wide.mul_scalar(im, *c as i64));
            }
            !wide.is_zero(&acc) || self.action[g].iter().enumerate().all(|(i, (j, _))| i == *j)
        })
    }
}

/// Totally positive elements of a fractional ideal with trace at most `t`,
/// listed with zero first.
pub fn positive_elements(f: &RealQuadraticField, m: &FractionalIdeal, t: i64) -> Vec<FieldElement> {
    let [b0, b1] = m.basis();
    let (x0, y0) = f.embeddings_f64(&b0);
    let (x1, y1) = f.embeddings_f64(&b1);
    let det = x0 * y1 - x1 * y0;
    let bound = t as f64 + 1.0;
    // coefficients of points (u, v) in the box [0, bound]^2 of embeddings
    let corners = [(0.0, 0.0), (bound, 0.0), (0.0, bound), (bound, bound)];
    let mut lo = [f64::MAX; 2];
    let mut hi = [f64::MIN; 2];
    for (u, v) in corners {
        let c0 = (u * y1 - v * x1) / det;
        let c1 = (v * x0 - u * y0) / det;
        lo[0] = lo[0].min(c0);
        hi[0] = hi[0].max(c0);
        lo[1] = lo[1].min(c1);
        hi[1] = hi[1].max(c1);
    }
    let mut out = vec![FieldElement::zero()];
    let tr = Rat::from_integer(t.into());
    for i in (lo[0].floor() as i64 - 1)..=(hi[0].ceil() as i64 + 1) {
        for j in (lo[1].floor() as i64 - 1)..=(hi[1].ceil() as i64 + 1) {
            let e = b0.scale(&Rat::from_integer(i.into())).add(&b1.scale(&Rat::from_integer(j.into())));
            if e.is_zero() || !f.totally_positive(&e) || f.trace(&e) > tr {
                continue;
            }
            out.push(e);
        }
    }
    out[1..].sort_by(|a, b| (f.trace(a), a.y.clone(), a.x.clone()).cmp(&(f.trace(b), b.y.clone(), b.x.clone())));
    out
}

/// The representative of `u^Z b` of least trace (ties broken by the second
/// coordinate), for `u` a totally positive unit other than 1.
pub fn orbit_rep(f: &RealQuadraticField, u: &FieldElement, b: &FieldElement) -> FieldElement {
    if b.is_zero() {
        return b.clone();
    }
    let key = |e: &FieldElement| (f.trace(e), e.y.clone(), e.x.clone());
    let ui = f.inv(u);
    let mut cur = b.clone();
    loop {
        let up = f.mul(&cur, u);
        let down = f.mul(&cur, &ui);
        let best = [&up, &down].into_iter().min_by_key(|e| key(e)).unwrap().clone();
        if key(&best) < key(&cur) {
            cur = best;
        } else {
            return cur;
        }
    }
}
