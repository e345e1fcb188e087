//! Independent checks of cusp enumeration: a bounded-height search over
//! lines of the standard components, and the fiber count of unramified
//! cusps over level one.

mod common;

use common::{bounded_height_keys, space, unit_quotient};
use cusp_forge::cusps::CuspKey;
use std::collections::BTreeSet;

#[test]
fn level_one_counts_agree_with_bounded_height_search() {
    for d in [2, 3, 5, 13, 10, 15] {
        let s = space(d, 1);
        let keys: BTreeSet<CuspKey> = s.all_cusps().into_iter().map(|c| c.key).collect();
        assert_eq!(keys, bounded_height_keys(&s, 2), "D = {d}");
    }
}

#[test]
fn higher_level_counts_agree_with_bounded_height_search() {
    for (d, n, h) in [(5, 2, 2), (3, 2, 2), (2, 3, 2), (5, 4, 2)] {
        let s = space(d, n);
        let keys: BTreeSet<CuspKey> = s.all_cusps().into_iter().map(|c| c.key).collect();
        assert_eq!(keys, bounded_height_keys(&s, h), "D = {d}, n = {n}");
    }
}

#[test]
fn unramified_counts_satisfy_fiber_formula() {
    for (d, n) in [(5, 2), (5, 3), (5, 6), (2, 3), (2, 5), (3, 2), (3, 5), (13, 3), (13, 4), (10, 3)] {
        let s = space(d, n);
        let level_one = space(d, 1).all_cusps().len();
        assert_eq!(s.unramified_cusps().len(), level_one * unit_quotient(&s), "D = {d}, n = {n}");
    }
}
