//! Checkable rigidity criteria for levels, bounds on inertia orders of the
//! level one stack, and the good-prime test built from them.

use crate::abelian::TableGroup;
use crate::arith::{factor_u64, is_prime_u64, to_u64};
use crate::classgroup::UnitData;
use crate::field::RealQuadraticField;
use crate::ideal::{factor, primes_up_to_norm, FractionalIdeal, ModRing, Residue};
use num_integer::Integer;
use serde::Serialize;

/// Auxiliary primes used by [`is_good_prime`] have norm at most this.
pub const SWEEP_NORM_BOUND: u64 = 100;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RigidityError {
    #[error("level must be an integral ideal")]
    NotIntegral,
    #[error("level divides (2)")]
    DividesTwo,
    #[error("level is not coprime to p")]
    NotCoprime,
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// The two conditions of the full-level rigidity criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullLevelCheck {
    /// A rational prime `> 2[F:Q] = 4` divides `n ∩ Z`.
    pub large_prime: Option<u64>,
    /// An odd `l` with `U+ ⊗ Z/l -> (O/n)^* ⊗ Z/l` injective.
    pub injective_at: Option<u64>,
}

impl FullLevelCheck {
    pub fn holds(&self) -> bool {
        self.large_prime.is_some() && self.injective_at.is_some()
    }
}

/// Order of a residue in the unit group of `ring`.
fn residue_order(ring: &ModRing, r: Residue) -> u64 {
    let one = ring.one();
    let mut p = r;
    let mut o = 1u64;
    while p != one {
        p = ring.mul(p, r);
        o += 1;
    }
    o
}

/// Odd primes `l` for which the totally positive fundamental unit is not an
/// `l`-th power in `(O/n)^*`. Only primes dividing its order can qualify.
pub fn injective_primes(f: &RealQuadraticField, n: &FractionalIdeal) -> Vec<u64> {
    let ring = ModRing::new(f, n);
    if ring.size() == 1 {
        return vec![];
    }
    let u = ring.reduce(f, &f.positive_unit()).expect("units are integral");
    let order = residue_order(&ring, u);
    let odd: Vec<u64> = factor_u64(order).into_iter().map(|(l, _)| l).filter(|&l| l != 2).collect();
    if odd.is_empty() {
        return vec![];
    }
    let units = ring.units();
    let group = TableGroup::new(&units, &ring.one(), |a, b| ring.mul(*a, *b));
    let coords = group.dlog(&u).expect("unit residue").clone();
    odd.into_iter()
        .filter(|&l| {
            group.group.invariants.iter().zip(&coords).any(|(&d, &x)| x % l.gcd(&d) != 0)
        })
        .collect()
}

/// The two conditions of the full-level criterion, each decided exactly.
pub fn full_level_check(f: &RealQuadraticField, n: &FractionalIdeal) -> Result<FullLevelCheck, RigidityError> {
    if !n.is_integral() {
        return Err(RigidityError::NotIntegral);
    }
    let m = to_u64(&n.min_integer());
    let large_prime = factor_u64(m).into_iter().map(|(p, _)| p).find(|&p| p > 4);
    let injective_at = injective_primes(f, n).first().copied();
    Ok(FullLevelCheck { large_prime, injective_at })
}

pub fn is_rigid_full_level(f: &RealQuadraticField, n: &FractionalIdeal) -> Result<bool, RigidityError> {
    Ok(full_level_check(f, n)?.holds())
}

/// Orders `m > 2` of roots of unity that can generate a CM quadratic
/// extension of `F`, up to those implied by others.
fn cm_root_orders(f: &RealQuadraticField) -> Vec<u64> {
    if f.d == 5 {
        vec![3, 4, 5]
    } else {
        vec![3, 4]
    }
}

/// The sufficient condition for the `Gamma_1(n)` stack to be rigid: some
/// prime of `n` is inert in every CM extension generated by a root of unity,
/// together with the same odd-`l` injectivity condition.
pub fn is_rigid_gamma1(f: &RealQuadraticField, n: &FractionalIdeal) -> Result<bool, RigidityError> {
    if !n.is_integral() {
        return Err(RigidityError::NotIntegral);
    }
    if n.is_unit_ideal() {
        return Ok(false);
    }
    let orders = cm_root_orders(f);
    let inert_prime = factor(f, n).iter().any(|(p, _)| {
        let q = p.norm();
        orders.iter().all(|&m| m % p.p != 0 && (q - 1) % m != 0)
    });
    Ok(inert_prime && !injective_primes(f, n).is_empty())
}

/// `#GL_2(O/n)` from the local factors `q^{4(e-1)} (q^2-1)(q^2-q)`.
pub fn gl2_order(f: &RealQuadraticField, n: &FractionalIdeal) -> u128 {
    factor(f, n)
        .iter()
        .map(|(p, e)| {
            let q = p.norm() as u128;
            q.pow(4 * (*e as u32 - 1)) * (q * q - 1) * (q * q - q)
        })
        .product()
}

/// Size of the image of `O_F^*` in `(O/n)^*`.
pub fn unit_image_order(f: &RealQuadraticField, n: &FractionalIdeal) -> u128 {
    let ring = ModRing::new(f, n);
    if ring.size() == 1 {
        return 1;
    }
    let eps = ring.reduce(f, &f.fund_unit).expect("units are integral");
    let minus_one = ring.neg(ring.one());
    let mut seen = vec![ring.one()];
    let mut p = eps;
    while p != ring.one() {
        seen.push(p);
        p = ring.mul(p, eps);
    }
    let o = seen.len() as u128;
    if minus_one == ring.one() || seen.contains(&minus_one) {
        o
    } else {
        2 * o
    }
}

/// The inertia-order bound `[U+_{1,n} : U_{1,n}^2] * #(GL_2(O/n)/O^*)`.
pub fn inertia_bound(f: &RealQuadraticField, n: &FractionalIdeal, p: u64) -> Result<u128, RigidityError> {
    if !n.is_integral() {
        return Err(RigidityError::NotIntegral);
    }
    if n.contains(&crate::ideal::int_elem(2)) {
        return Err(RigidityError::DividesTwo);
    }
    if !n.is_coprime(f, &FractionalIdeal::from_int(p as i64)) {
        return Err(RigidityError::NotCoprime);
    }
    let ring = ModRing::new(f, n);
    let units = UnitData::new(f, &ring);
    let square_index = units.square_index() as u128;
    let gl2 = gl2_order(f, n);
    let image = unit_image_order(f, n);
    debug_assert_eq!(gl2 % image, 0);
    Ok(square_index * (gl2 / image))
}

/// Verdict of [`is_good_prime`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodPrime {
    pub p: u64,
    pub good: bool,
    /// The auxiliary level whose bound certified the verdict, if any.
    pub auxiliary: Option<String>,
    pub bound: Option<u128>,
    /// True when the verdict is negative only because the finite sweep
    /// found no certifying auxiliary level.
    pub conservative: bool,
}

/// Candidate auxiliary levels: `n` itself, then primes of norm at most
/// [`SWEEP_NORM_BOUND`], each kept only when coprime to `p` and not dividing 2.
fn auxiliary_levels(f: &RealQuadraticField, n: &FractionalIdeal, p: u64) -> Vec<(FractionalIdeal, u128)> {
    let mut cands = vec![n.clone()];
    cands.extend(primes_up_to_norm(f, SWEEP_NORM_BOUND).into_iter().map(|q| q.ideal));
    cands.into_iter().filter_map(|m| inertia_bound(f, &m, p).ok().map(|b| (m, b))).collect()
}

/// Whether `Z_(p)` (with `O_F`-structure) is a good ring for level `n`:
/// `p` is prime to `2N(n)` and to some certified inertia bound.
pub fn is_good_prime(f: &RealQuadraticField, n: &FractionalIdeal, p: u64) -> Result<GoodPrime, RigidityError> {
    if !n.is_integral() {
        return Err(RigidityError::NotIntegral);
    }
    if !is_prime_u64(p) {
        return Err(RigidityError::NotPrime(p));
    }
    let norm = to_u64(&n.norm().to_integer());
    if p == 2 || norm % p == 0 {
        return Ok(GoodPrime { p, good: false, auxiliary: None, bound: None, conservative: false });
    }
    let levels = auxiliary_levels(f, n, p);
    let best = levels.iter().filter(|(_, b)| b % p as u128 != 0).min_by_key(|(_, b)| *b);
    Ok(match best {
        Some((m, b)) => GoodPrime { p, good: true, auxiliary: Some(m.to_string()), bound: Some(*b), conservative: false },
        None => {
            let least = levels.iter().min_by_key(|(_, b)| *b);
            GoodPrime {
                p,
                good: false,
                auxiliary: least.map(|(m, _)| m.to_string()),
                bound: least.map(|(_, b)| *b),
                conservative: true,
            }
        }
    })
}

/// Summary of the rigidity data of a level.
#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub n: String,
    pub rigid_full_level: bool,
    pub full_level: FullLevelCheck,
    pub rigid_gamma1: bool,
    /// The bound for `n` itself when `n` does not divide 2, otherwise for
    /// the least auxiliary prime above an odd rational prime.
    pub inertia_bound: u128,
    pub bound_level: String,
    pub gl2_order: u128,
    pub unit_image_order: u128,
    pub square_index: i64,
    /// Primes below [`SWEEP_NORM_BOUND`] that are not good for `n`.
    pub good_primes_excluded: Vec<u64>,
    pub conservative_exclusions: Vec<u64>,
    pub sweep_norm_bound: u64,
}

pub fn level_report(f: &RealQuadraticField, n: &FractionalIdeal) -> Result<LevelReport, RigidityError> {
    let full_level = full_level_check(f, n)?;
    let rigid_gamma1 = is_rigid_gamma1(f, n)?;
    let bound_level = if n.contains(&crate::ideal::int_elem(2)) {
        primes_up_to_norm(f, SWEEP_NORM_BOUND)
            .into_iter()
            .find(|q| q.p != 2)
            .map(|q| q.ideal)
            .expect("an odd prime of small norm")
    } else {
        n.clone()
    };
    // any prime not dividing the level is admissible as the coprimality witness
    let witness = (3..).find(|&q| is_prime_u64(q) && bound_level.is_coprime(f, &FractionalIdeal::from_int(q as i64))).unwrap();
    let bound = inertia_bound(f, &bound_level, witness)?;
    let ring = ModRing::new(f, &bound_level);
    let mut excluded = Vec::new();
    let mut conservative = Vec::new();
    for p in (2..SWEEP_NORM_BOUND).filter(|&p| is_prime_u64(p)) {
        let v = is_good_prime(f, n, p)?;
        if !v.good {
            excluded.push(p);
            if v.conservative {
                conservative.push(p);
            }
        }
    }
    Ok(LevelReport {
        n: n.to_string(),
        rigid_full_level: full_level.holds(),
        full_level,
        rigid_gamma1,
        inertia_bound: bound,
        bound_level: bound_level.to_string(),
        gl2_order: gl2_order(f, &bound_level),
        unit_image_order: unit_image_order(f, &bound_level),
        square_index: UnitData::new(f, &ring).square_index(),
        good_primes_excluded: excluded,
        conservative_exclusions: conservative,
        sweep_norm_bound: SWEEP_NORM_BOUND,
    })
}
