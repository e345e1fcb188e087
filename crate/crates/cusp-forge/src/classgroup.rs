//! Unit data modulo an ideal, the class group, and narrow and wide ray
//! class groups with discrete logarithms.

use crate::abelian::{Character, Elem, FiniteAbelian, Presentation, TableGroup};
use crate::arith::{bi, Mat};
use crate::field::{FieldElement, Rat, RealQuadraticField};
use crate::ideal::{
    factor, find_generator, integral_ideals_up_to, PrimeIdeal, primes_up_to_norm, sign_pair, FractionalIdeal, IdealError, ModRing, Residue,
};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

/// A unit `sign * eps^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct UnitPower {
    pub sign: i64,
    pub exp: i64,
}

impl UnitPower {
    pub fn value(&self, f: &RealQuadraticField) -> FieldElement {
        f.pow(&f.fund_unit, self.exp).scale(&Rat::from_integer(bi(self.sign)))
    }

    pub fn norm(&self, f: &RealQuadraticField) -> i64 {
        if self.exp % 2 == 0 {
            1
        } else {
            f.unit_norm()
        }
    }
}

/// Units of `O_F` relative to a modulus `n`.
#[derive(Clone, Debug, Serialize)]
pub struct UnitData {
    pub fund_unit: String,
    pub fund_unit_norm: i64,
    pub signs_minus_one: (i8, i8),
    pub signs_fund_unit: (i8, i8),
    /// Generator of the totally positive units `U+` as a power of `eps`.
    pub u_plus: UnitPower,
    /// Generators of `U_{1,n}`.
    pub u_1n: Vec<UnitPower>,
    /// Generator of `U+_{1,n}`.
    pub u_1n_plus: UnitPower,
    /// Order of `eps` in `(O/n)^*`.
    pub eps_order_mod_n: i64,
}

impl UnitData {
    pub fn new(f: &RealQuadraticField, ring: &ModRing) -> Self {
        let eps = ring.reduce(f, &f.fund_unit).unwrap();
        let one = ring.one();
        let minus_one = ring.neg(one);
        let mut o = 1i64;
        let mut p = eps;
        while p != one {
            p = ring.mul(p, eps);
            o += 1;
        }
        // smallest i > 0 with eps^i = +-1 mod n
        let mut i0 = 1i64;
        let mut p = eps;
        let s0 = loop {
            if p == one {
                break 1;
            }
            if p == minus_one {
                break -1;
            }
            p = ring.mul(p, eps);
            i0 += 1;
        };
        let mut u_1n = vec![UnitPower { sign: s0, exp: i0 }];
        if minus_one == one {
            u_1n.push(UnitPower { sign: -1, exp: 0 });
        }
        let positive = |u: &UnitPower| u.norm(f) == 1 && f.totally_positive(&u.value(f));
        let mut u_1n_plus = None;
        'search: for k in 1..=4i64 {
            for sign in [1i64, -1] {
                let cand = UnitPower { sign: sign * s0.pow(k as u32), exp: i0 * k };
                let allowed = cand.sign == s0.pow(k as u32) || minus_one == one;
                if allowed && positive(&cand) {
                    u_1n_plus = Some(cand);
                    break 'search;
                }
            }
        }
        let u_plus = if f.unit_norm() == 1 { UnitPower { sign: 1, exp: 1 } } else { UnitPower { sign: 1, exp: 2 } };
        UnitData {
            fund_unit: f.fund_unit.to_string(),
            fund_unit_norm: f.unit_norm(),
            signs_minus_one: (-1, -1),
            signs_fund_unit: sign_pair(f, &f.fund_unit),
            u_plus,
            u_1n,
            u_1n_plus: u_1n_plus.expect("a totally positive unit congruent to 1 exists"),
            eps_order_mod_n: o,
        }
    }

    /// `[U+_{1,n} : (U_{1,n})^2]`.
    pub fn square_index(&self) -> i64 {
        // both are infinite cyclic modulo torsion; compare eps-exponents
        let sq = 2 * self.u_1n[0].exp;
        sq / self.u_1n_plus.exp
    }
}

/// The wide class group from ideals below the Minkowski bound.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub reps: Vec<FractionalIdeal>,
    pub table: TableGroup<usize>,
}

impl ClassGroup {
    pub fn new(f: &RealQuadraticField) -> Self {
        let bound = ((f.disc as f64).sqrt() / 2.0).floor() as u64;
        let mut reps: Vec<FractionalIdeal> = Vec::new();
        for i in integral_ideals_up_to(f, bound.max(1)) {
            if !reps.iter().any(|r| find_generator(f, &i.div(f, r)).is_some()) {
                reps.push(i);
            }
        }
        let n = reps.len();
        let classify = |i: &FractionalIdeal| reps.iter().position(|r| find_generator(f, &i.div(f, r)).is_some()).unwrap();
        let mut mul = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                mul[a][b] = classify(&reps[a].mul(f, &reps[b]));
            }
        }
        let elems: Vec<usize> = (0..n).collect();
        let table = TableGroup::new(&elems, &0, |a, b| mul[*a][*b]);
        ClassGroup { reps, table }
    }

    pub fn classify(&self, f: &RealQuadraticField, i: &FractionalIdeal) -> usize {
        self.reps.iter().position(|r| find_generator(f, &i.div(f, r)).is_some()).expect("class group is complete")
    }

    pub fn order(&self) -> u64 {
        self.reps.len() as u64
    }
}

type AKey = (Residue, i8, i8);

/// `Cl(F, n)` or `Cl+(F, n)`.
#[derive(Clone, Debug)]
pub struct RayClassGroup {
    pub field: RealQuadraticField,
    pub modulus: FractionalIdeal,
    pub narrow: bool,
    pub group: FiniteAbelian,
    pub ring: ModRing,
    pub units: UnitData,
    pub class_group: ClassGroup,
    /// Smith generators as prime ideals coprime to the modulus.
    pub gens: Vec<FractionalIdeal>,
    pub relations: Mat,
    a_group: TableGroup<AKey>,
    cl_primes: Vec<FractionalIdeal>,
    pres: Presentation,
    modulus_primes: Vec<PrimeIdeal>,
}

impl RayClassGroup {
    pub fn new(f: &RealQuadraticField, n: &FractionalIdeal, narrow: bool) -> Result<Self, IdealError> {
        if !n.is_integral() {
            return Err(IdealError::NotIntegralAtModulus);
        }
        let ring = ModRing::new(f, n);
        let units = UnitData::new(f, &ring);
        let res_units = ring.units();
        let signs: Vec<(i8, i8)> = if narrow { vec![(1, 1), (1, -1), (-1, 1), (-1, -1)] } else { vec![(1, 1)] };
        let a_elems: Vec<AKey> = res_units.iter().flat_map(|&r| signs.iter().map(move |&(s, t)| (r, s, t))).collect();
        let a_group = TableGroup::new(&a_elems, &(ring.one(), 1, 1), |x, y| (ring.mul(x.0, y.0), x.1 * y.1, x.2 * y.2));
        let class_group = ClassGroup::new(f);
        let modulus_primes: Vec<PrimeIdeal> = factor(f, n).into_iter().map(|(p, _)| p).collect();
        let coprime = |p: &FractionalIdeal| modulus_primes.iter().all(|q| p.valuation(f, q) == 0);
        // a prime of least norm, coprime to n, in each class-group generator
        let mut cl_primes = Vec::new();
        let mut bound = 50u64;
        for g in &class_group.table.gens {
            loop {
                let found = primes_up_to_norm(f, bound)
                    .into_iter()
                    .map(|p| p.ideal)
                    .find(|p| coprime(p) && class_group.classify(f, p) == *g);
                if let Some(p) = found {
                    cl_primes.push(p);
                    break;
                }
                bound *= 2;
            }
        }
        let ra = a_group.group.invariants.len();
        let rc = class_group.table.group.invariants.len();
        let ngens = ra + rc;
        let mut rels: Mat = Vec::new();
        let row = |a: &Elem, tail: &[i64]| -> Vec<BigInt> {
            let mut r: Vec<BigInt> = a.iter().map(|&v| bi(v as i64)).collect();
            r.extend(tail.iter().map(|&v| bi(v)));
            r
        };
        for (i, &d) in a_group.group.invariants.iter().enumerate() {
            let mut e = vec![0u64; ra];
            e[i] = d;
            rels.push(row(&e, &vec![0; rc]));
        }
        let akey = |x: &FieldElement| -> AKey {
            let r = ring.reduce(f, x).expect("n-unit");
            let (s, t) = if narrow { sign_pair(f, x) } else { (1, 1) };
            (r, s, t)
        };
        for u in [FieldElement::one().neg(), f.fund_unit.clone()] {
            rels.push(row(a_group.dlog(&akey(&u)).unwrap(), &vec![0; rc]));
        }
        for (j, (q, &h)) in cl_primes.iter().zip(&class_group.table.group.invariants).enumerate() {
            let pi = find_generator(f, &q.pow(f, h as i64)).expect("order kills the class");
            let a = a_group.group.neg(a_group.dlog(&akey(&pi)).unwrap());
            let mut tail = vec![0i64; rc];
            tail[j] = h as i64;
            rels.push(row(&a, &tail));
        }
        let pres = Presentation::from_relations(ngens, &rels).expect("finite ray class group");
        let mut g = RayClassGroup {
            field: f.clone(),
            modulus: n.clone(),
            narrow,
            group: pres.group.clone(),
            ring,
            units,
            class_group,
            gens: vec![],
            relations: rels,
            a_group,
            cl_primes,
            pres,
            modulus_primes,
        };
        g.gens = (0..g.group.invariants.len())
            .map(|i| {
                let mut e = g.group.zero();
                e[i] = 1;
                g.prime_in_class(&e)
            })
            .collect();
        Ok(g)
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn is_coprime(&self, i: &FractionalIdeal) -> bool {
        self.modulus_primes.iter().all(|p| i.valuation(&self.field, p) == 0)
    }

    /// Class of the principal ideal `(x)` for `x` a unit at every prime of `n`.
    pub fn dlog_principal(&self, x: &FieldElement) -> Result<Elem, IdealError> {
        let f = &self.field;
        let r = self.ring.reduce(f, x)?;
        let (s, t) = if self.narrow { sign_pair(f, x) } else { (1, 1) };
        let a = self.a_group.dlog(&(r, s, t)).ok_or(IdealError::NotCoprime)?;
        let mut v: Vec<BigInt> = a.iter().map(|&c| bi(c as i64)).collect();
        v.resize(self.pres.images.len(), BigInt::zero());
        Ok(self.pres.image(&v))
    }

    pub fn dlog(&self, i: &FractionalIdeal) -> Result<Elem, IdealError> {
        if !self.is_coprime(i) {
            return Err(IdealError::NotCoprime);
        }
        let f = &self.field;
        let cls = self.class_group.classify(f, i);
        let e = self.class_group.table.dlog(&cls).unwrap().clone();
        let mut j = i.clone();
        for (q, &ej) in self.cl_primes.iter().zip(&e) {
            if ej > 0 {
                j = j.mul(f, &q.pow(f, -(ej as i64)));
            }
        }
        let alpha = find_generator(f, &j).expect("trivial class is principal");
        let r = self.ring.reduce(f, &alpha)?;
        let (s, t) = if self.narrow { sign_pair(f, &alpha) } else { (1, 1) };
        let a = self.a_group.dlog(&(r, s, t)).ok_or(IdealError::NotCoprime)?;
        let mut v: Vec<BigInt> = a.iter().map(|&c| bi(c as i64)).collect();
        v.extend(e.iter().map(|&c| bi(c as i64)));
        Ok(self.pres.image(&v))
    }

    /// The least-norm prime coprime to `n` in the given class.
    pub fn prime_in_class(&self, e: &[u64]) -> FractionalIdeal {
        let mut bound = 50u64;
        loop {
            for p in primes_up_to_norm(&self.field, bound) {
                if self.is_coprime(&p.ideal) && self.dlog(&p.ideal).unwrap() == e {
                    return p.ideal;
                }
            }
            bound *= 2;
        }
    }

    /// Least-norm prime representatives for every element, indexed like
    /// `group.elements()`.
    pub fn class_representatives(&self) -> Vec<FractionalIdeal> {
        let n = self.order() as usize;
        let mut reps: Vec<Option<FractionalIdeal>> = vec![None; n];
        let mut found = 0usize;
        let mut bound = 50u64;
        let mut seen = 0usize;
        while found < n {
            let ps = primes_up_to_norm(&self.field, bound);
            for p in ps.iter().skip(seen) {
                if !self.is_coprime(&p.ideal) {
                    continue;
                }
                let k = self.group.index(&self.dlog(&p.ideal).unwrap());
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

    pub fn characters(&self) -> Vec<Character> {
        self.group.characters()
    }

    /// `#A / #image(units)` times `h`: the order predicted by the exact sequence.
    pub fn predicted_order(&self) -> u64 {
        let f = &self.field;
        let mut img = std::collections::HashSet::new();
        let mut u = FieldElement::one();
        let period = 2 * self.units.eps_order_mod_n.max(1);
        for _ in 0..period {
            for s in [1i64, -1] {
                let v = u.scale(&Rat::from_integer(bi(s)));
                let r = self.ring.reduce(f, &v).unwrap();
                let sg = if self.narrow { sign_pair(f, &v) } else { (1, 1) };
                img.insert((r, sg));
            }
            u = f.mul(&u, &f.fund_unit);
        }
        let a = self.a_group.group.order();
        self.class_group.order() * a / img.len() as u64
    }

    pub fn a_group_order(&self) -> u64 {
        self.a_group.group.order()
    }
}

/// Images of the generators of `G+_n` in `G_n`, and the kernel order.
pub fn narrow_to_wide_kernel(narrow: &RayClassGroup, wide: &RayClassGroup) -> (Vec<Elem>, u64) {
    let images: Vec<Elem> = narrow.gens.iter().map(|g| wide.dlog(g).unwrap()).collect();
    let mut hit = std::collections::HashSet::new();
    for e in narrow.group.elements() {
        let mut acc = wide.group.zero();
        for (c, im) in e.iter().zip(&images) {
            acc = wide.group.add(&acc, &wide.group.mul_scalar(im, *c as i64));
        }
        hit.insert(acc);
    }
    (images, narrow.order() / hit.len() as u64)
}
