use heisweil::heisenberg::{HeisenbergGroup, SpecialIso};
use heisweil::reps::{contragredient, heisenberg_rep, invariant_forms_nullspace, zeta_value, Model};
use heisweil::scalar::{gauss_sum, legendre, CycNumber};
use heisweil::symplectic::SymplecticSpace;
use heisweil::weil::*;
use heisweil::linalg::{same_span, CycMatrix};
use heisweil::Error;

#[test]
fn weyl_scalar_is_selected_uniquely() {
    for (p, sign) in [(3u64, 1i64), (5, -1), (7, 1), (11, 1), (13, -1)] {
        let hg = HeisenbergGroup::standard(p, 1).unwrap();
        let c = select_weyl_scalar(&hg, 1).unwrap();
        let g = gauss_sum(p).unwrap();
        let field = g.field();
        let k = CycNumber::from_int(field, p as i64);
        assert_eq!(c.mul(&c.conj()).mul(&k), CycNumber::one(field), "p={p}");
        if p <= 5 {
            assert_eq!(c, g.inv().unwrap().scale_int(sign), "p={p}");
        }
    }
}

#[test]
fn lifts_are_homomorphisms_exhaustively_for_small_primes() {
    for p in [3u64, 5] {
        let hg = HeisenbergGroup::standard(p, 1).unwrap();
        for model in [Model::Plus, Model::Minus] {
            for k in 1..p {
                let lift = standard_lift(&hg, k, model).unwrap();
                let rep = verify_homomorphism(&hg, &lift, VerifyMode::Exhaustive, 0, 0).unwrap();
                let n = lift.group.elements.len();
                assert_eq!(rep.pairs_checked, n * n);
                assert!(rep.passed(), "p={p} k={k} {model:?}: {rep:?}");
            }
        }
    }
}

#[test]
fn relation_and_sampled_modes_pass() {
    let hg = HeisenbergGroup::standard(7, 1).unwrap();
    let lift = standard_lift(&hg, 3, Model::Minus).unwrap();
    assert!(verify_homomorphism(&hg, &lift, VerifyMode::Relations, 0, 0).unwrap().passed());
    let r = verify_homomorphism(&hg, &lift, VerifyMode::Sampled, 500, 11).unwrap();
    assert_eq!(r.pairs_checked, 500);
    assert!(r.passed());
}

#[test]
fn exhaustive_mode_is_guarded() {
    let hg = HeisenbergGroup::standard(11, 1).unwrap();
    assert!(matches!(standard_lift(&hg, 1, Model::Plus), Err(Error::Guard(_))));
}

#[test]
fn appendix_unipotent_acts_by_quadratic_phase() {
    let r = sl23_reference().unwrap();
    let field = r.tauhat.field();
    for b in 0..3i64 {
        let s = r.appendix_element(&[vec![1, b], vec![0, 1]]).unwrap();
        let expected = CycMatrix::from_fn(field, 3, 3, |t, u| {
            if t == u {
                zeta_value(field, 3, 1, -b * (t * t) as i64)
            } else {
                CycNumber::zero(field)
            }
        });
        assert_eq!(*r.tauhat.image(s), expected, "b={b}");
    }
}

#[test]
fn appendix_scalars_act_by_dilation() {
    let r = sl23_reference().unwrap();
    let field = r.tauhat.field();
    for a in 1..3u64 {
        let s = r.appendix_element(&[vec![a as i64, 0], vec![0, a as i64]]).unwrap();
        let chi = legendre(a as i64, 3);
        let expected = CycMatrix::from_fn(field, 3, 3, |t, u| {
            if u as u64 == (a * t as u64) % 3 {
                CycNumber::from_int(field, chi)
            } else {
                CycNumber::zero(field)
            }
        });
        assert_eq!(*r.tauhat.image(s), expected, "a={a}");
    }
}

#[test]
fn appendix_fourier_transform_realizes_inverse_weyl_element() {
    let r = sl23_reference().unwrap();
    let field = r.tauhat.field();
    let i = CycNumber::imaginary_unit(field);
    let ifhat = r.fourier_transform().unwrap().scale(&i);
    let jinv = r.appendix_element(&[vec![0, -1], vec![1, 0]]).unwrap();
    let j = r.appendix_element(&[vec![0, 1], vec![-1, 0]]).unwrap();
    assert_eq!(*r.tauhat.image(jinv), ifhat);
    assert_ne!(*r.tauhat.image(j), ifhat);
}

#[test]
fn sl23_character_is_alpha_plus_beta() {
    let r = sl23_reference().unwrap();
    assert!(r.character_mismatches().is_empty());
    assert!(!r.literal_table_consistent);
    let field = r.tauhat.field();
    for s in 0..24 {
        assert_eq!(r.even_block(s), *r.beta.image(s), "s={s}");
        assert!(r.odd_line_ok(s));
        let b = r.beta.image(s);
        let det = b.get(0, 0).mul(b.get(1, 1)).sub(&b.get(0, 1).mul(b.get(1, 0)));
        assert_eq!(det, *r.alpha.image(s).get(0, 0));
    }
    let n1 = r.appendix_element(&[vec![1, 1], vec![0, 1]]).unwrap();
    assert_eq!(*r.alpha.image(n1).get(0, 0), zeta_value(field, 3, 1, -1));
    let j = r.appendix_element(&[vec![0, 1], vec![-1, 0]]).unwrap();
    assert!(r.alpha.image(j).is_identity());
}

#[test]
fn sl23_has_three_extensions_and_one_matches() {
    let hg = HeisenbergGroup::standard(3, 1).unwrap();
    let r = sl23_reference().unwrap();
    assert_eq!(abelianization_order(&r.tauhat.group), 3);
    let exts = sl23_extensions(&r);
    let target: Vec<CycNumber> = (0..24).map(|s| r.alpha.trace(s).add(&r.beta.trace(s))).collect();
    let matches: Vec<bool> = exts
        .iter()
        .map(|l| {
            assert!(verify_homomorphism(&hg, l, VerifyMode::Exhaustive, 0, 0).unwrap().passed());
            l.sp_character() == target
        })
        .collect();
    assert_eq!(matches, vec![true, false, false]);
}

#[test]
fn larger_symplectic_groups_are_perfect() {
    for p in [5u64, 7] {
        let hg = HeisenbergGroup::standard(p, 1).unwrap();
        let lift = standard_lift(&hg, 1, Model::Plus).unwrap();
        assert_eq!(abelianization_order(&lift.group), 1, "p={p}");
    }
}

#[test]
fn traces_on_levi_are_real_with_quadratic_sign() {
    for p in [3u64, 5, 7] {
        let hg = HeisenbergGroup::standard(p, 1).unwrap();
        for model in [Model::Plus, Model::Minus] {
            let lift = standard_lift(&hg, 1, model).unwrap();
            let entries = trace_sign_on_m(&lift).unwrap();
            assert_eq!(entries.len(), p as usize - 1);
            assert!(entries.iter().all(TraceSignEntry::ok), "p={p}");
        }
    }
    let hg = HeisenbergGroup::standard(5, 1).unwrap();
    let lift = standard_lift(&hg, 1, Model::Plus).unwrap();
    let m2 = lift.index_of(&hg.space().m_element_scalar(2).unwrap()).unwrap();
    let e = trace_sign_on_m(&lift).unwrap().into_iter().find(|e| e.element == m2).unwrap();
    assert_eq!((e.chi_m, e.sign), (-1, Some(-1)));
}

#[test]
fn parabolic_scales_plus_form_by_its_character() {
    let hg = HeisenbergGroup::standard(5, 1).unwrap();
    for model in [Model::Plus, Model::Minus] {
        for nu in [SpecialIso::base(hg.space()), SpecialIso { offset: vec![2, 3] }] {
            let lift = weil_lift(&hg, &heisenberg_rep(&hg, 1, model).unwrap(), &nu).unwrap();
            let lambda = lambda_plus(&lift).unwrap();
            let fixed = invariant_forms_nullspace(&lift.base, &plus_lagrangian_preimage(&hg, &nu));
            assert_eq!(fixed.len(), 1);
            assert!(same_span(lift.field(), &fixed, std::slice::from_ref(&lambda), lift.dim()));
            let rep = p_action_check(&lift, &lambda).unwrap();
            assert_eq!(rep.checked, 20);
            assert!(rep.failures.is_empty());
            let m2 = lift.index_of(&hg.space().m_element_scalar(2).unwrap()).unwrap();
            let moved = lift.image(m2).left_apply(&lambda);
            assert!(moved.iter().zip(&lambda).all(|(a, b)| *a == b.neg()));
        }
    }
}

#[test]
fn contragredient_of_lift_is_lift_of_contragredient() {
    for p in [3u64, 5] {
        let hg = HeisenbergGroup::standard(p, 1).unwrap();
        let lift = standard_lift(&hg, 1, Model::Minus).unwrap();
        let dual = lift.contragredient(&hg).unwrap();
        assert!(verify_homomorphism(&hg, &dual, VerifyMode::Exhaustive, 0, 0).unwrap().passed());
        let direct = weil_lift(&hg, &contragredient(&hg, &lift.base).unwrap(), &lift.nu).unwrap();
        assert_eq!(dual.sp_character(), direct.sp_character());
        assert_eq!(dual.zeta_exponent, p - 1);
    }
}

#[test]
fn transported_character_is_independent_of_special_isomorphism() {
    let hg = HeisenbergGroup::standard(3, 1).unwrap();
    let space = hg.space();
    let tau = heisenberg_rep(&hg, 1, Model::Minus).unwrap();
    let base = SpecialIso::base(space);
    let reference = transported_character(&hg, &abstract_lift(&hg, &tau, &base, 1).unwrap());
    let all = SpecialIso::all(space);
    assert_eq!(all.len(), 9);
    for nu in &all {
        let lift = abstract_lift(&hg, &tau, nu, 1).unwrap();
        assert!(verify_homomorphism(&hg, &lift, VerifyMode::Exhaustive, 0, 0).unwrap().passed());
        assert_eq!(transported_character(&hg, &lift), reference);
    }
    let mut pairs = 0;
    for a in &all {
        for b in &all {
            assert!(special_iso_twist_holds(&hg, &tau, 1, a, b));
            pairs += 1;
        }
    }
    assert_eq!(pairs, 81);
    assert!(abstract_lift(&hg, &tau, &base, 2).is_err());
}

#[test]
fn plus_model_lift_needs_no_transport() {
    let hg = HeisenbergGroup::standard(3, 1).unwrap();
    let lift = standard_lift(&hg, 1, Model::Plus).unwrap();
    assert!(lift.transport.is_identity());
    let space = SymplecticSpace::new(3, 1).unwrap();
    assert_eq!(lift.index_of(&space.identity()).unwrap(), 0);
}
