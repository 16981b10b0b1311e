//! Class groups, relation lattices and containment of relation lattices
//! over a range of small discriminants.

use endoring::curve::FrobeniusData;
use endoring::quadorder::{class_group_structure, enumerate_classes, generates, subgroup_order};
use endoring::relations::{
    default_norm_bound, lattice_contains, relation_lattice_basis, relation_lattice_index,
    subset_holding_probability_index,
};
use endoring::{arith, FactorBase, QForm, QuadOrder};
use proptest::prelude::*;

fn discriminants(lo: i64) -> impl Iterator<Item = i64> {
    (lo..=-3).rev().filter(|d| d.rem_euclid(4) <= 1)
}

fn base_for(d: i64) -> (FactorBase, QuadOrder) {
    let fd = FrobeniusData::synthetic(d).unwrap();
    let o = QuadOrder::from_frobenius(&fd).unwrap();
    (FactorBase::build(&o, &fd, default_norm_bound(&fd, 0.0)).unwrap(), o)
}

#[test]
fn enumeration_matches_generated_group() {
    for d in discriminants(-800) {
        let forms = enumerate_classes(d).unwrap();
        let structure = class_group_structure(d).unwrap();
        let gens: Vec<QForm> = structure.iter().map(|(g, _)| *g).collect();
        assert_eq!(subgroup_order(d, &gens).max(1), forms.len(), "D = {d}");
        let product: u64 = structure.iter().map(|(_, n)| n).product();
        assert_eq!(product as usize, forms.len(), "D = {d}");
    }
}

#[test]
fn relation_lattice_index_is_class_number() {
    for d in discriminants(-800) {
        let (base, _) = base_for(d);
        let h = enumerate_classes(d).unwrap().len() as u128;
        let basis = relation_lattice_basis(&base).unwrap();
        assert_eq!(relation_lattice_index(&base, &basis).unwrap(), Some(h), "D = {d}");
    }
}

#[test]
fn bach_bound_base_generates() {
    for d in discriminants(-800) {
        let (base, _) = base_for(d);
        let gens: Vec<QForm> = base.primes.iter().map(|p| p.reduced()).collect();
        assert!(generates(d, &gens).unwrap(), "D = {d}");
    }
}

#[test]
fn containment_rule_matches_brute_force() {
    let mut exceptional = [0usize; 3];
    for d in discriminants(-1200) {
        let (d_k, f_max) = arith::fundamental_split(d).unwrap();
        if f_max == 1 {
            continue;
        }
        let (base, top) = base_for(d);
        for o in top.lattice() {
            for o2 in top.lattice() {
                let index = subset_holding_probability_index(&o, &o2, &base).unwrap();
                assert_eq!(
                    lattice_contains(&o, &o2),
                    index == 1,
                    "D = {d}, f = {}, f' = {}",
                    o.f,
                    o2.f
                );
                if index == 1 && o.f % o2.f != 0 {
                    let k = if d_k == -3 {
                        0
                    } else if d_k == -4 {
                        1
                    } else {
                        2
                    };
                    exceptional[k] += 1;
                }
            }
        }
    }
    assert!(exceptional.iter().all(|&c| c > 0), "{exceptional:?}");
}

proptest! {
    #[test]
    fn composition_is_a_group_law(i in 0usize..1000, x in 0usize..64, y in 0usize..64, z in 0usize..64) {
        let d = discriminants(-4000).nth(i).unwrap();
        let forms = enumerate_classes(d).unwrap();
        let (a, b, c) = (forms[x % forms.len()], forms[y % forms.len()], forms[z % forms.len()]);
        prop_assert_eq!(a.compose(&b), b.compose(&a));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.pow(a.order() as i64), QForm::identity(d));
    }
}
