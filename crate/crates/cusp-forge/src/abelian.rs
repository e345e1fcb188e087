//! Finite abelian groups in Smith normal form: presentations, groups given
//! by an explicit multiplication, discrete logarithms and characters.

use crate::arith::{bi, smith, Mat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::collections::HashMap;
use std::hash::Hash;

/// `Z/d_1 x ... x Z/d_r` with `1 < d_1 | d_2 | ... | d_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelian {
    pub invariants: Vec<u64>,
}

pub type Elem = Vec<u64>;

impl FiniteAbelian {
    pub fn trivial() -> Self {
        FiniteAbelian { invariants: vec![] }
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.invariants.len()]
    }

    pub fn reduce(&self, x: &[i64]) -> Elem {
        x.iter().zip(&self.invariants).map(|(&v, &d)| v.rem_euclid(d as i64) as u64).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        x.iter().zip(y).zip(&self.invariants).map(|((a, b), d)| (a + b) % d).collect()
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        x.iter().zip(&self.invariants).map(|(a, d)| (d - a % d) % d).collect()
    }

    pub fn mul_scalar(&self, x: &[u64], k: i64) -> Elem {
        x.iter()
            .zip(&self.invariants)
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
            .collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&v| v == 0)
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.invariants).fold(1u64, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// Mixed-radix index of an element; the first coordinate varies fastest.
    pub fn index(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (a, d) in x.iter().zip(&self.invariants).rev() {
            idx = idx * (*d as usize) + *a as usize;
        }
        idx
    }

    pub fn from_index(&self, mut idx: usize) -> Elem {
        self.invariants
            .iter()
            .map(|&d| {
                let v = (idx % d as usize) as u64;
                idx /= d as usize;
                v
            })
            .collect()
    }

    pub fn elements(&self) -> Vec<Elem> {
        (0..self.order() as usize).map(|i| self.from_index(i)).collect()
    }

    /// Characters in mixed-radix order.
    pub fn characters(&self) -> Vec<Character> {
        self.elements().into_iter().map(|c| Character { group: self.clone(), coeffs: c }).collect()
    }
}

/// A root of unity `exp(2 pi i e / m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootOfUnity {
    pub order: u64,
    pub exp: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { order: 1, exp: 0 }
    }

    pub fn new(order: u64, exp: i64) -> Self {
        let e = exp.rem_euclid(order as i64) as u64;
        let g = e.gcd(&order);
        if e == 0 {
            return Self::one();
        }
        RootOfUnity { order: order / g, exp: e / g }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.order.lcm(&o.order);
        Self::new(m, (self.exp * (m / self.order) + o.exp * (m / o.order)) as i64)
    }

    pub fn inv(&self) -> Self {
        Self::new(self.order, -(self.exp as i64))
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::new(self.order, (self.exp as i128 * k as i128).rem_euclid(self.order as i128) as i64)
    }

    pub fn is_one(&self) -> bool {
        self.exp == 0
    }

    /// `+1`, `-1` or `None` for non-real values.
    pub fn as_sign(&self) -> Option<i8> {
        match (self.order, self.exp) {
            (1, 0) => Some(1),
            (2, 1) => Some(-1),
            _ => None,
        }
    }

    pub fn exponent_in(&self, m: u64) -> u64 {
        assert!(m % self.order == 0);
        self.exp * (m / self.order)
    }
}

/// `g -> exp(2 pi i sum_j c_j g_j / d_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub group: FiniteAbelian,
    pub coeffs: Elem,
}

impl Character {
    pub fn eval(&self, g: &[u64]) -> RootOfUnity {
        let m = self.group.exponent();
        let mut e = 0u64;
        for ((c, x), d) in self.coeffs.iter().zip(g).zip(&self.group.invariants) {
            e = (e + c * x % d * (m / d)) % m;
        }
        RootOfUnity::new(m, e as i64)
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Character { group: self.group.clone(), coeffs: self.group.add(&self.coeffs, &o.coeffs) }
    }

    pub fn conj(&self) -> Self {
        Character { group: self.group.clone(), coeffs: self.group.neg(&self.coeffs) }
    }

    pub fn order(&self) -> u64 {
        self.group.element_order(&self.coeffs)
    }

    pub fn index(&self) -> usize {
        self.group.index(&self.coeffs)
    }
}

/// A group presented by `ngens` generators and integer relations, with the
/// Smith-form change of basis.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FiniteAbelian,
    /// `ngens x r`: image of each presentation generator.
    pub images: Vec<Vec<BigInt>>,
    /// `r x ngens`: each Smith generator as a word in presentation generators.
    pub words: Vec<Vec<i64>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("presentation defines an infinite group")]
pub struct InfiniteGroup;

impl Presentation {
    pub fn from_relations(ngens: usize, rels: &Mat) -> Result<Self, InfiniteGroup> {
        if ngens == 0 {
            return Ok(Presentation { group: FiniteAbelian::trivial(), images: vec![], words: vec![] });
        }
        let (diag, v, vinv) = smith(rels, ngens);
        if diag.iter().any(|d| d.is_zero()) {
            return Err(InfiniteGroup);
        }
        let keep: Vec<usize> = (0..ngens).filter(|&i| diag[i] > bi(1)).collect();
        let group = FiniteAbelian { invariants: keep.iter().map(|&i| diag[i].to_u64().unwrap()).collect() };
        let images = v.iter().map(|row| keep.iter().map(|&i| row[i].clone()).collect()).collect();
        let words = keep.iter().map(|&i| vinv[i].iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        Ok(Presentation { group, images, words })
    }

    /// Image of the vector `x` of exponents on presentation generators.
    pub fn image(&self, x: &[BigInt]) -> Elem {
        let r = self.group.invariants.len();
        let mut out = vec![BigInt::zero(); r];
        for (xi, row) in x.iter().zip(&self.images) {
            for (o, v) in out.iter_mut().zip(row) {
                *o += xi * v;
            }
        }
        out.iter()
            .zip(&self.group.invariants)
            .map(|(v, &d)| v.mod_floor(&BigInt::from(d)).to_u64().unwrap())
            .collect()
    }

    pub fn image_i64(&self, x: &[i64]) -> Elem {
        let v: Vec<BigInt> = x.iter().map(|&a| bi(a)).collect();
        self.image(&v)
    }
}

/// A finite abelian group given by an explicit list of elements and a
/// multiplication, with a stored discrete logarithm.
#[derive(Clone, Debug)]
pub struct TableGroup<K: Clone + Eq + Hash> {
    pub group: FiniteAbelian,
    pub gens: Vec<K>,
    dlog: HashMap<K, Elem>,
}

impl<K: Clone + Eq + Hash + Ord> TableGroup<K> {
    /// Builds the group structure from all elements; `mul` must be an abelian
    /// group law on `elements` with identity `one`.
    pub fn new(elements: &[K], one: &K, mul: impl Fn(&K, &K) -> K) -> Self {
        let mut sorted: Vec<K> = elements.to_vec();
        sorted.sort();
        // subgroup generated so far, with coordinates on greedy generators
        let mut sub: HashMap<K, Vec<i64>> = HashMap::new();
        sub.insert(one.clone(), vec![]);
        let mut greedy: Vec<K> = Vec::new();
        let mut rels: Mat = Vec::new();
        for g in &sorted {
            if sub.contains_key(g) {
                continue;
            }
            let k = greedy.len();
            let mut m = 1i64;
            let mut p = g.clone();
            while !sub.contains_key(&p) {
                p = mul(&p, g);
                m += 1;
            }
            let mut rel: Vec<BigInt> = sub[&p].iter().map(|&c| bi(-c)).collect();
            rel.resize(k, BigInt::zero());
            rel.push(bi(m));
            for r in rels.iter_mut() {
                r.push(BigInt::zero());
            }
            rels.push(rel);
            let old: Vec<(K, Vec<i64>)> = sub.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            let mut pw = one.clone();
            for i in 1..m {
                pw = mul(&pw, g);
                for (h, c) in &old {
                    let mut c2 = c.clone();
                    c2.resize(k, 0);
                    c2.push(i);
                    sub.insert(mul(h, &pw), c2);
                }
            }
            for c in sub.values_mut() {
                c.resize(k + 1, 0);
            }
            greedy.push(g.clone());
        }
        assert_eq!(sub.len(), sorted.len(), "multiplication is not closed on the element list");
        let pres = Presentation::from_relations(greedy.len(), &rels).expect("finite group");
        let dlog: HashMap<K, Elem> = sub.iter().map(|(k, c)| (k.clone(), pres.image_i64(c))).collect();
        let mut by_elem: HashMap<Elem, K> = HashMap::new();
        for (k, e) in &dlog {
            by_elem.insert(e.clone(), k.clone());
        }
        let gens = (0..pres.group.invariants.len())
            .map(|i| {
                let mut e = pres.group.zero();
                e[i] = 1;
                by_elem[&e].clone()
            })
            .collect();
        TableGroup { group: pres.group, gens, dlog }
    }

    pub fn dlog(&self, k: &K) -> Option<&Elem> {
        self.dlog.get(k)
    }

    pub fn element_of(&self, e: &[u64]) -> K {
        self.dlog.iter().find(|(_, v)| v.as_slice() == e).map(|(k, _)| k.clone()).expect("element in group")
    }
}
