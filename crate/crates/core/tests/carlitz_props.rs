mod common;

use common::props;
use num_bigint::BigUint;
use towerforge_core::carlitz::{euler_phi, place_counts};
use towerforge_core::poly::PolyRing;
use towerforge_core::residue::ResidueUnitGroup;

#[test]
fn homomorphism_and_additivity() {
    props::carlitz_homomorphism().unwrap();
}

#[test]
fn torsion_count_by_exhaustive_search() {
    props::torsion_counts().unwrap();
}

#[test]
fn euler_phi_counts_units() {
    for (field, prime, m) in props::small_groups() {
        let ring = PolyRing::new(field.clone());
        let phi = euler_phi(&ring, &prime, m).unwrap();
        let d = prime.degree().unwrap() as u32;
        let q = field.q() as u64;
        let coprime = (0..q.pow(d * m))
            .filter(|&i| ring.gcd(&ring.from_index(i), &prime).is_one())
            .count();
        assert_eq!(phi, BigUint::from(coprime));
        let g = ResidueUnitGroup::new(&field, &prime, m).unwrap();
        assert_eq!(phi, BigUint::from(g.order()));
        if m > 1 {
            let lower = euler_phi(&ring, &prime, m - 1).unwrap();
            assert_eq!(phi, lower * BigUint::from(q.pow(d)));
        }
        let s = place_counts(&ring, &prime, m, None).unwrap().s_cyclotomic;
        assert_eq!(s * (q - 1), euler_phi(&ring, &prime, m).unwrap());
    }
}
