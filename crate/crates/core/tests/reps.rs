use heisweil::group::{all_subgroups, closure, FiniteGroup};
use heisweil::heisenberg::*;
use heisweil::linalg::{same_span, CycMatrix};
use heisweil::reps::*;
use heisweil::scalar::{CycField, CycNumber};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn std(p: u64) -> HeisenbergGroup {
    HeisenbergGroup::standard(p, 1).unwrap()
}

fn one(f: &'static CycField) -> impl Fn(usize) -> CycNumber + Sync {
    move |_| CycNumber::one(f)
}

fn apply(m: &CycMatrix, v: &[CycNumber]) -> Vec<CycNumber> {
    m.transpose().left_apply(v)
}

fn delta(f: &'static CycField, n: usize, i: usize) -> Vec<CycNumber> {
    (0..n).map(|j| if i == j { CycNumber::one(f) } else { CycNumber::zero(f) }).collect()
}

#[test]
fn minus_model_matches_the_explicit_formulas() {
    let hg = std(3);
    let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
    let f = tau.field();
    // the generator acting by translation; it is `e₂` in the coordinates with `e₁ ∈ W⁻`
    let shift = CycMatrix::from_fn(f, 3, 3, |t, u| if u == (t + 1) % 3 { CycNumber::one(f) } else { CycNumber::zero(f) });
    assert_eq!(*tau.image(hg.make(&[1, 0], 0)), shift);
    for x in 0..3i64 {
        let phase = CycMatrix::from_fn(f, 3, 3, |t, u| if t == u { zeta_value(f, 3, 1, -x * t as i64) } else { CycNumber::zero(f) });
        assert_eq!(*tau.image(hg.make(&[0, (3 - x as u64) % 3], 0)), phase);
    }
    let zeta = CycNumber::root_of_order(f, 3, 1);
    assert_eq!(*tau.image(hg.central(1)), CycMatrix::scalar(f, 3, &zeta));
    assert!(tau.homomorphism_failure(&hg).is_none());
    let plus = heisenberg_rep(&hg, 2, Model::Plus).unwrap();
    assert!(plus.homomorphism_failure(&hg).is_none());
    assert!(heisenberg_rep(&hg, 3, Model::Minus).is_err());
}

#[test]
fn heisenberg_character_is_supported_on_the_center() {
    let hg = std(5);
    let f = CycField::for_prime(5);
    for model in [Model::Plus, Model::Minus] {
        let tau = heisenberg_rep(&hg, 1, model).unwrap();
        for h in 0..hg.order() {
            let (w, z) = hg.split(h);
            let expected = if w == 0 { CycNumber::root_of_order(f, 5, z as i64).scale_int(5) } else { CycNumber::zero(f) };
            assert_eq!(tau.trace(h), expected);
        }
    }
    let tau = heisenberg_rep(&HeisenbergGroup::standard(3, 2).unwrap(), 1, Model::Minus).unwrap();
    assert_eq!(tau.dim(), 9);
}

#[test]
fn contragredients() {
    let hg = std(3);
    let f = CycField::for_prime(3);
    let triv = MatrixRep::trivial(&hg, f, (0..27).collect()).unwrap();
    assert_eq!(contragredient(&hg, &triv).unwrap().images(), triv.images());
    for k in 1..3u64 {
        let tau = heisenberg_rep(&hg, k, Model::Minus).unwrap();
        let dual = contragredient(&hg, &tau).unwrap();
        assert!(dual.homomorphism_failure(&hg).is_none());
        let zinv = CycNumber::root_of_order(f, 3, -(k as i64));
        assert_eq!(*dual.image(hg.central(1)), CycMatrix::scalar(f, 3, &zinv));
        assert_eq!(dual.images(), heisenberg_rep(&hg, 3 - k, Model::Minus).unwrap().images());
        let back = contragredient(&hg, &dual).unwrap();
        assert_eq!(back.character_values(), tau.character_values());
    }
}

#[test]
fn pairing_of_a_model_with_its_dual_is_invariant() {
    let hg = std(3);
    let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
    let co = heisenberg_rep(&hg, 2, Model::Minus).unwrap();
    let f = tau.field();
    assert!(invariant_pairing(&delta(f, 3, 1), &delta(f, 3, 1)).unwrap().is_one());
    assert!(invariant_pairing(&delta(f, 3, 0), &delta(f, 3, 2)).unwrap().is_zero());
    assert!(invariant_pairing(&delta(f, 3, 0), &delta(f, 2, 0)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let f1: Vec<CycNumber> = (0..3).map(|_| CycNumber::root_of_order(f, 3, rng.gen_range(0..3)).scale_int(rng.gen_range(-3..4))).collect();
        let f2: Vec<CycNumber> = (0..3).map(|_| CycNumber::from_int(f, rng.gen_range(-3..4))).collect();
        let base = invariant_pairing(&f1, &f2).unwrap();
        for h in 0..hg.order() {
            assert_eq!(invariant_pairing(&apply(tau.image(h), &f1), &apply(co.image(h), &f2)).unwrap(), base);
        }
    }
}

fn check_fixed_forms(hg: &HeisenbergGroup, k: &[usize]) -> usize {
    let mut dim = None;
    for model in [Model::Plus, Model::Minus] {
        let tau = heisenberg_rep(hg, 1, model).unwrap();
        let ff = fixed_forms(hg, &tau, 1, model, k).unwrap();
        assert!(ff.agree(tau.field(), tau.dim()), "K={k:?}");
        let nonzero = ff.double_coset_forms.iter().filter(|v| v.iter().any(|x| !x.is_zero())).count();
        assert_eq!(nonzero, ff.dimension());
        assert_eq!(ff.dimension(), hom_dim(&tau, k, one(tau.field())).unwrap());
        assert_eq!(*dim.get_or_insert(ff.dimension()), ff.dimension());
    }
    dim.unwrap()
}

#[test]
fn fixed_forms_agree_on_every_subgroup_at_three() {
    let hg = std(3);
    let subs = all_subgroups(&hg);
    assert!(subs.len() > 10);
    for k in &subs {
        let d = check_fixed_forms(&hg, k);
        if k.contains(&1) {
            assert_eq!(d, 0);
        }
    }
}

#[test]
fn fixed_forms_agree_on_random_subgroups_at_five() {
    let hg = std(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let gens: Vec<usize> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..hg.order())).collect();
        check_fixed_forms(&hg, &closure(&hg, &gens));
    }
}

#[test]
fn fixed_form_examples() {
    for p in [3u64, 5] {
        let hg = std(p);
        let space = hg.space().clone();
        let pol = space.standard_polarization();
        assert_eq!(check_fixed_forms(&hg, &hg.center()), 0);
        assert_eq!(check_fixed_forms(&hg, &hg.lift_subspace_with_center(&pol.plus)), 0);
        let wplus = hg.lift_subspace(&pol.plus);
        assert_eq!(check_fixed_forms(&hg, &wplus), 1);
        let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
        let ff = fixed_forms(&hg, &tau, 1, Model::Minus, &wplus).unwrap();
        let ones = vec![CycNumber::one(tau.field()); p as usize];
        assert!(same_span(tau.field(), &ff.nullspace_basis, &[ones], tau.dim()));
        for v in space.all_vectors().into_iter().filter(|v| v.iter().any(|&x| x != 0)) {
            assert_eq!(check_fixed_forms(&hg, &hg.lift_subspace(&[v])), 1);
        }
    }
}

#[test]
fn hom_dimensions_for_involution_fixed_points() {
    for p in [3u64, 5] {
        let hg = std(p);
        let f = CycField::for_prime(p);
        let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
        assert_eq!(hom_dim(&tau, &[0], one(f)).unwrap(), p as usize);
        for alpha in order_two_automorphisms_nontrivial_on_center(hg.space()).unwrap() {
            let (plus, _) = polarization_from_involution(&hg, &alpha).unwrap();
            assert_eq!(hom_dim(&tau, &plus, one(f)).unwrap(), 1);
            let twisted = tau.precompose(|h| alpha.apply(&hg, h)).unwrap();
            assert!(rep_equivalent(&twisted, &contragredient(&hg, &tau).unwrap()).unwrap());
        }
        for alpha in order_two_automorphisms_trivial_on_center(hg.space()).unwrap() {
            let fixed: Vec<usize> = (0..hg.order()).filter(|&h| alpha.apply(&hg, h) == h).collect();
            assert_eq!(hom_dim(&tau, &fixed, one(f)).unwrap(), 0);
        }
        let tau2 = heisenberg_rep(&hg, 2, Model::Minus).unwrap();
        assert!(rep_equivalent(&tau, &tau).unwrap());
        assert!(!rep_equivalent(&tau, &tau2).unwrap());
        let chi = |h: usize| zeta_value(f, p, 1, hg.split(h).1 as i64);
        assert_eq!(hom_dim(&tau, &hg.center(), chi).unwrap(), p as usize);
    }
}

#[test]
fn irreducible_representations_of_h() {
    for p in [3u64, 5] {
        let hg = std(p);
        let irr = irreducibles_of_h(&hg).unwrap();
        let n = (p * p + p - 1) as usize;
        assert_eq!(irr.len(), n);
        assert_eq!(irr.iter().map(|r| r.dim() * r.dim()).sum::<usize>(), hg.order());
        for (i, a) in irr.iter().enumerate() {
            for (j, b) in irr.iter().enumerate() {
                let ip = character_inner_product(a, b).unwrap();
                assert_eq!(ip, CycNumber::from_int(a.field(), (i == j) as i64), "({i},{j})");
            }
        }
    }
    assert!(irreducibles_of_h(&HeisenbergGroup::standard(7, 2).unwrap()).is_err());
}

#[test]
fn heisenberg_group_and_involution_fixed_points_form_a_gelfand_pair() {
    for p in [3u64, 5] {
        let hg = std(p);
        let space = hg.space().clone();
        let f = CycField::for_prime(p);
        let irr = irreducibles_of_h(&hg).unwrap();
        for alpha in order_two_automorphisms_nontrivial_on_center(&space).unwrap() {
            let (plus, _) = polarization_from_involution(&hg, &alpha).unwrap();
            for rho in &irr {
                assert!(hom_dim(rho, &plus, one(f)).unwrap() <= 1);
            }
            let (wp, wm) = space.eigen_polarization(&alpha.s).unwrap();
            for &a in &hg.span(&wp) {
                for &b in &hg.span(&wm) {
                    let (a, b) = (space.vector_from_index(a), space.vector_from_index(b));
                    let na = space.neg_vec(&a);
                    for z in 0..p as i64 {
                        let lhs = hg.mul(hg.mul(hg.make(&na, 0), hg.make(&space.add_vec(&a, &space.neg_vec(&b)), -z)), hg.make(&na, 0));
                        assert_eq!(lhs, hg.make(&space.neg_vec(&space.add_vec(&a, &b)), -z));
                    }
                }
            }
        }
    }
}

#[test]
fn representation_utilities() {
    let hg = std(3);
    let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
    let sum = tau.direct_sum(&tau).unwrap();
    assert_eq!(sum.dim(), 6);
    assert_eq!(sum.trace(1), tau.trace(1).scale_int(2));
    let res = tau.restrict(&hg.center()).unwrap();
    assert_eq!(res.domain(), hg.center().as_slice());
    assert!(res.restrict(&[3]).is_err());
    let json = tau.to_json(|h| hg.element(h).to_json());
    assert_eq!(json.as_array().unwrap().len(), 27);
    assert_eq!(json[1]["element"]["z"], 1);
    let p = projector(&tau, &hg.lift_subspace(&hg.space().standard_polarization().plus), one(tau.field())).unwrap();
    assert_eq!(p.mul(&p), p);
}
