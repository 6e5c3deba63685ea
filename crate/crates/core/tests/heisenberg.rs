use heisweil::group::{all_subgroups, closure, commutator_subgroup, FiniteGroup};
use heisweil::heisenberg::*;
use heisweil::symplectic::{Polarization, SymplecticSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn std(p: u64) -> HeisenbergGroup {
    HeisenbergGroup::standard(p, 1).unwrap()
}

#[test]
fn product_and_commutator_examples() {
    let hg = std(3);
    let e = |w: [u64; 2], z| HeisenbergElement { w: w.to_vec(), z };
    assert_eq!(hg.multiply(&e([1, 0], 0), &e([0, 1], 0)), e([1, 1], 2));
    for h in 0..hg.order() {
        let x = hg.element(h);
        assert_eq!(hg.multiply(&x, &e([0, 0], 0)), x);
        let inv = e([(3 - x.w[0]) % 3, (3 - x.w[1]) % 3], (3 - x.z) % 3);
        assert_eq!(hg.multiply(&x, &inv), e([0, 0], 0));
    }
    assert_eq!(hg.commutator(hg.make(&[1, 0], 0), hg.make(&[0, 1], 0)), 1);
    assert_eq!(hg.commutator(hg.make(&[1, 0], 5), hg.make(&[1, 0], 2)), 0);
    for h in 0..hg.order() {
        assert_eq!(hg.commutator(hg.central(1), h), 0);
    }
}

#[test]
fn group_axioms_exhaustive_at_three() {
    let hg = std(3);
    let n = hg.order();
    for a in 0..n {
        assert_eq!(hg.mul(a, hg.inv(a)), 0);
        for b in 0..n {
            for c in 0..n {
                assert_eq!(hg.mul(hg.mul(a, b), c), hg.mul(a, hg.mul(b, c)));
            }
        }
    }
}

#[test]
fn group_axioms_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, ell) in [(5u64, 1usize), (7, 1), (3, 2), (5, 2)] {
        let hg = HeisenbergGroup::standard(p, ell).unwrap();
        let n = hg.order();
        for _ in 0..2000 {
            let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            assert_eq!(hg.mul(hg.mul(a, b), c), hg.mul(a, hg.mul(b, c)));
            assert_eq!(hg.mul(a, hg.inv(a)), 0);
        }
    }
}

#[test]
fn commutator_is_the_symplectic_form_and_the_center_is_derived() {
    for (p, ell) in [(3u64, 1usize), (5, 1), (3, 2)] {
        let hg = HeisenbergGroup::standard(p, ell).unwrap();
        let n = hg.order();
        for a in (0..n).step_by(7) {
            for b in 0..n {
                let c = hg.mul(hg.mul(a, b), hg.mul(hg.inv(a), hg.inv(b)));
                assert_eq!(c, hg.central(hg.commutator(a, b) as i64));
                let (ea, eb) = (hg.element(a), hg.element(b));
                assert_eq!(hg.commutator(a, b), hg.space().pairing(&ea.w, &eb.w));
            }
        }
        let all: Vec<usize> = (0..n).collect();
        assert_eq!(commutator_subgroup(&hg, &all), hg.center());
        assert_eq!(heisweil::group::center(&hg), hg.center());
    }
}

#[test]
fn special_isomorphisms_form_a_torsor() {
    for p in [3u64, 5] {
        let hg = std(p);
        let all = SpecialIso::all(hg.space());
        assert_eq!(all.len(), (p * p) as usize);
        if p == 3 {
            assert_eq!(count_special_isos_brute_force(&hg).unwrap(), 9);
        }
        let tables: std::collections::HashSet<Vec<usize>> = all.iter().map(|nu| (0..hg.order()).map(|h| nu.apply(&hg, h)).collect()).collect();
        assert_eq!(tables.len(), all.len());
        for nu in &all {
            assert!(nu.satisfies_definition(&hg));
            for h in 0..hg.order() {
                assert_eq!(nu.apply_inverse(&hg, nu.apply(&hg, h)), h);
            }
        }
    }
}

#[test]
fn split_polarizations_and_special_isomorphisms() {
    let hg = std(3);
    let space = hg.space().clone();
    let pol = space.standard_polarization();
    let plus = hg.lift_subspace(&pol.plus);
    let minus = hg.lift_subspace(&pol.minus);
    assert_eq!(special_iso_from_split_polarization(&hg, &plus, &minus).unwrap(), SpecialIso::base(&space));
    let all = SpecialIso::all(&space);
    for w0 in space.all_vectors() {
        let x = hg.make(&w0, 0);
        let conj = |set: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = set.iter().map(|&h| hg.mul(hg.mul(hg.inv(x), h), x)).collect();
            v.sort_unstable();
            v
        };
        let (cp, cm) = (conj(&plus), conj(&minus));
        let nu = special_iso_from_split_polarization(&hg, &cp, &cm).unwrap();
        assert_eq!(nu.offset, space.neg_vec(&w0));
        let into_w = |n: &SpecialIso| cp.iter().chain(&cm).all(|&h| n.mu(&hg, h) == 0);
        assert_eq!(all.iter().filter(|n| into_w(n)).count(), 1);
        assert!(into_w(&nu));
    }
    assert!(special_iso_from_split_polarization(&hg, &plus, &plus).is_err());
    assert!(special_iso_from_split_polarization(&hg, &hg.lift_subspace_with_center(&pol.plus), &minus).is_err());
}

#[test]
fn splitting_a_polarization_through_a_special_isomorphism() {
    for p in [3u64, 5] {
        let hg = std(p);
        let space = hg.space().clone();
        let pol = space.standard_polarization();
        let plus = hg.lift_subspace(&pol.plus);
        let hat_minus = hg.lift_subspace_with_center(&pol.minus);
        assert_eq!(split_polarization_from_iso(&hg, &SpecialIso::base(&space), &plus, &hat_minus).unwrap(), hg.lift_subspace(&pol.minus));
        for nu in SpecialIso::all(&space) {
            let minus = split_polarization_from_iso(&hg, &nu, &plus, &hat_minus).unwrap();
            assert_eq!(minus.len(), p as usize);
            assert!(minus.iter().all(|&h| h == 0 || h >= p as usize));
            let mut prod: Vec<usize> = minus.iter().flat_map(|&m| hg.center().into_iter().map(move |z| (m, z))).map(|(m, z)| hg.mul(m, z)).collect();
            prod.sort_unstable();
            assert_eq!(prod, hat_minus);
            if plus.iter().all(|&h| nu.mu(&hg, h) == 0) {
                assert_eq!(special_iso_from_split_polarization(&hg, &plus, &minus).unwrap(), nu);
            }
        }
        assert!(split_polarization_from_iso(&hg, &SpecialIso::base(&space), &plus, &plus).is_err());
    }
}

#[test]
fn equality_conditions_agree_on_all_pairs() {
    let hg = std(3);
    let space = hg.space().clone();
    let sp = space.enumerate_sp().unwrap();
    let all = SpecialIso::all(&space);
    let mut pairs = 0;
    for a in &all {
        for b in &all {
            let (x, y, z) = special_iso_equal_tests(&hg, &sp, a, b);
            assert!(x == y && y == z);
            assert_eq!(x, a == b);
            pairs += 1;
        }
    }
    assert_eq!(pairs, 81);
}

#[test]
fn restriction_to_a_heisenberg_subgroup() {
    let hg = HeisenbergGroup::standard(3, 2).unwrap();
    let space = hg.space().clone();
    let u = vec![space.basis_vector(0), space.basis_vector(2)];
    let sub = hg.lift_subspace_with_center(&u);
    assert_eq!(sub.len(), 27);
    assert_eq!(closure(&hg, &sub), sub);
    for nu in SpecialIso::all(&space).into_iter().step_by(5) {
        assert!(satisfies_special_iso_definition(&hg, &|h| nu.mu(&hg, h), &sub));
    }
}

#[test]
fn involution_attached_to_the_standard_polarization() {
    let hg = std(3);
    let space = hg.space().clone();
    let alpha = involution_from_polarization(&space, &space.standard_polarization()).unwrap();
    assert_eq!(alpha.apply(&hg, hg.make(&[1, 0], 1)), hg.make(&[1, 0], -1));
    let t = alpha.table(&hg);
    assert!((0..hg.order()).all(|h| t[t[h]] == h));
    assert!(alpha.is_automorphism(&hg));
    let (plus, hat_minus) = polarization_from_involution(&hg, &alpha).unwrap();
    assert_eq!(plus, hg.lift_subspace(&space.standard_polarization().plus));
    assert_eq!(hat_minus, hg.lift_subspace_with_center(&space.standard_polarization().minus));
}

#[test]
fn every_involution_nontrivial_on_the_center_gives_a_polarization() {
    for p in [3u64, 5] {
        let hg = std(p);
        let space = hg.space().clone();
        let list = order_two_automorphisms_nontrivial_on_center(&space).unwrap();
        assert!(!list.is_empty());
        for alpha in &list {
            assert!(alpha.is_automorphism(&hg) && alpha.is_involution(&hg));
            let (plus, hat_minus) = polarization_from_involution(&hg, alpha).unwrap();
            assert_eq!(plus.len(), p as usize);
            assert_eq!(hat_minus.len(), (p * p) as usize);
            validate_polarization_of_h(&hg, &plus, &hat_minus).unwrap();
            let by_product: Vec<usize> = (0..hg.order()).filter(|&h| hg.mul(h, alpha.apply(&hg, h)) < p as usize).collect();
            assert_eq!(by_product, hat_minus);
            let (fixed, negated) = space.eigen_polarization(&alpha.s).unwrap();
            let img = |set: &[usize]| -> Vec<Vec<u64>> { hg.image_in_w(set).iter().map(|&w| space.vector_from_index(w)).collect() };
            assert!(space.same_subspace(&img(&plus), &fixed));
            assert!(space.same_subspace(&img(&hat_minus), &negated));
        }
    }
}

#[test]
fn involutions_trivial_on_the_center() {
    for p in [3u64, 5] {
        let hg = std(p);
        let list = order_two_automorphisms_trivial_on_center(hg.space()).unwrap();
        for a in &list {
            assert!(a.is_automorphism(&hg) && a.is_involution(&hg));
            assert!((0..p as usize).all(|z| a.apply(&hg, z) == z));
            assert!(!(a.s.is_identity()));
        }
        assert_eq!(list.len(), count_order_two_trivial_on_center_brute_force(&hg).unwrap());
        assert_eq!(list.len(), (p * p) as usize);
        let alpha = involution_from_polarization(hg.space(), &hg.space().standard_polarization()).unwrap();
        assert!(polarization_from_involution(&hg, &list[0]).is_err());
        assert!(polarization_from_involution(&hg, &alpha).is_ok());
    }
    assert!(order_two_automorphisms_trivial_on_center(&SymplecticSpace::new(11, 1).unwrap()).is_err());
}

#[test]
fn lagrangian_subgroups_are_conjugate_to_their_images() {
    for p in [3u64, 5] {
        let hg = std(p);
        let subs: Vec<Vec<usize>> = if p == 3 {
            all_subgroups(&hg).into_iter().filter(|s| s.len() == 3 && s.iter().all(|&h| h == 0 || h >= 3)).collect()
        } else {
            let space = hg.space();
            space
                .all_vectors()
                .into_iter()
                .filter(|v| v.iter().any(|&x| x != 0))
                .flat_map(|v| (0..p).map(move |m| (v.clone(), m)))
                .map(|(v, m)| closure(&hg, &[hg.make(&v, m as i64)]))
                .collect()
        };
        assert_eq!(subs.len(), ((p + 1) * p) as usize + if p == 3 { 0 } else { ((p + 1) * p * (p - 2)) as usize });
        for hplus in subs {
            let w0 = hplus_conjugator(&hg, &hplus).unwrap();
            let x = hg.make(&w0, 0);
            for &h in &hplus {
                let (w, _) = hg.split(h);
                assert_eq!(hg.mul(hg.mul(hg.inv(x), w * p as usize), x), h);
            }
        }
        assert!(hplus_conjugator(&hg, &hg.center()).is_err());
    }
}

#[test]
fn polarization_validation_rejects_bad_pairs() {
    let hg = std(3);
    let space = hg.space().clone();
    let pol = space.standard_polarization();
    let bad = Polarization { plus: pol.plus.clone(), minus: pol.plus.clone() };
    assert!(space.validate_polarization(&bad).is_err());
    assert!(validate_polarization_of_h(&hg, &hg.lift_subspace(&pol.plus), &hg.lift_subspace(&pol.minus)).is_err());
    assert!(validate_polarization_of_h(&hg, &hg.lift_subspace(&pol.plus), &hg.lift_subspace_with_center(&pol.minus)).is_ok());
}
