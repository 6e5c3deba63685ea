//! Acceptance run: one line per criterion with its tolerance and timing.
//! Criteria listed in `KNOWN_UNATTAINABLE` must fail; every other one must pass.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use heisweil::group::{all_subgroups, closure, is_normal, FiniteGroup};
use heisweil::heisenberg::*;
use heisweil::linalg::{same_span, CycMatrix};
use heisweil::mackey::*;
use heisweil::prounipotent::*;
use heisweil::reps::*;
use heisweil::scalar::{gauss_sum, CycField, CycNumber};
use heisweil::verify::{run_suite, RunConfig};
use heisweil::weil::*;
use heisweil::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The orbit-multiplicity factorization and the constancy of `|S(θ,Θ′)|`
/// fail for non-normal `K`; see the witness printed for criterion 8.
const KNOWN_UNATTAINABLE: [usize; 1] = [8];

struct Outcome {
    passed: bool,
    detail: String,
    flags: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into(), flags: vec![] }
    }
}

fn one(f: &'static CycField) -> impl Fn(usize) -> CycNumber + Sync {
    move |_| CycNumber::one(f)
}

fn all_pass(parts: &[(&str, bool)]) -> Outcome {
    let failed: Vec<&str> = parts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    let detail = if failed.is_empty() { parts.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ") } else { format!("failed: {}", failed.join(", ")) };
    Outcome::new(failed.is_empty(), detail)
}

fn criterion_1() -> Result<Outcome> {
    let r = sl23_reference()?;
    let field = r.tauhat.field();
    let mismatches = r.character_mismatches();
    let i = CycNumber::imaginary_unit(field);
    let inv_sqrt3 = i.mul(&gauss_sum(3)?.inv()?);
    let i3 = i.mul(&inv_sqrt3);
    let displayed = CycMatrix::from_fn(field, 2, 2, |a, b| match (a, b) {
        (0, 1) => i3.scale_int(2),
        (1, 1) => i3.neg(),
        _ => i3.clone(),
    });
    let j = r.appendix_element(&[vec![0, 1], vec![-1, 0]])?;
    let jinv = r.appendix_element(&[vec![0, -1], vec![1, 0]])?;
    let at_jinv = r.even_block(jinv) == displayed && *r.beta.image(jinv) == displayed;
    let at_j = r.even_block(j) == displayed.scale(&CycNumber::from_int(field, -1));
    let fourier = *r.tauhat.image(jinv) == r.fourier_transform()?.scale(&i);
    let odd = (0..24).all(|s| r.odd_line_ok(s));
    let mut out = all_pass(&[
        ("character equals alpha+beta on 24/24 elements", mismatches.is_empty()),
        ("odd line carries alpha", odd),
        ("displayed beta matrix reproduced at j^-1", at_jinv),
        ("tau^(j^-1) = i * Fourier transform", fourier),
    ]);
    if !r.literal_table_consistent && at_j {
        out.flags.push("displayed beta matrix matches j^-1 = -j; at j the even block is its negative, and the generator table with the matrix at j is not a homomorphism".into());
    } else {
        out.passed = false;
        out.flags.push(format!("unexpected: literal table consistent = {}, even block at j = -displayed: {at_j}", r.literal_table_consistent));
    }
    Ok(out)
}

fn criterion_2() -> Result<Outcome> {
    let mut parts = vec![];
    for p in [3u64, 5, 7] {
        let hg = HeisenbergGroup::standard(p, 1)?;
        let lift = standard_lift(&hg, 1, Model::Minus)?;
        let r = verify_homomorphism(&hg, &lift, VerifyMode::Exhaustive, 0, 0)?;
        let n = lift.group.order();
        parts.push((format!("p={p}: {}/{} pairs", r.pairs_checked, n * n), r.passed() && r.pairs_checked == n * n));
    }
    Ok(all_pass(&parts.iter().map(|(n, ok)| (n.as_str(), *ok)).collect::<Vec<_>>()))
}

fn criterion_3() -> Result<Outcome> {
    let mut parts = vec![];
    for p in [3u64, 5, 7] {
        let hg = HeisenbergGroup::standard(p, 1)?;
        for model in [Model::Plus, Model::Minus] {
            let lift = standard_lift(&hg, 1, model)?;
            let entries = trace_sign_on_m(&lift)?;
            let lambda = lambda_plus(&lift)?;
            let fixed = invariant_forms_nullspace(&lift.base, &plus_lagrangian_preimage(&hg, &lift.nu));
            let spans = fixed.len() == 1 && same_span(lift.field(), &fixed, std::slice::from_ref(&lambda), lift.dim());
            let pa = p_action_check(&lift, &lambda)?;
            let ok = entries.len() == p as usize - 1 && entries.iter().all(TraceSignEntry::ok) && spans && pa.failures.is_empty() && pa.checked == (p * (p - 1)) as usize;
            parts.push((format!("p={p} {model:?}: {} Levi traces, {} parabolic elements", entries.len(), pa.checked), ok));
        }
    }
    Ok(all_pass(&parts.iter().map(|(n, ok)| (n.as_str(), *ok)).collect::<Vec<_>>()))
}

fn criterion_4() -> Result<Outcome> {
    let mut parts = vec![];
    for p in [3u64, 5] {
        let hg = HeisenbergGroup::standard(p, 1)?;
        let space = hg.space().clone();
        let tau = heisenberg_rep(&hg, 1, Model::Minus)?;
        let f = tau.field();
        let dual_char = contragredient(&hg, &tau)?.character_values();
        let list = order_two_automorphisms_nontrivial_on_center(&space)?;
        let mut ok = !list.is_empty();
        for alpha in &list {
            ok &= alpha.is_automorphism(&hg) && alpha.is_involution(&hg) && alpha.apply(&hg, hg.central(1)) == hg.central(-1);
            let (plus, hat_minus) = polarization_from_involution(&hg, alpha)?;
            ok &= validate_polarization_of_h(&hg, &plus, &hat_minus).is_ok();
            ok &= hom_dim(&tau, &plus, one(f))? == 1;
            let t = alpha.table(&hg);
            ok &= tau.precompose(|h| t[h])?.character_values() == dual_char;
            if !ok {
                break;
            }
        }
        parts.push((format!("p={p}: {} involutions", list.len()), ok));
    }
    Ok(all_pass(&parts.iter().map(|(n, ok)| (n.as_str(), *ok)).collect::<Vec<_>>()))
}

fn criterion_5() -> Result<Outcome> {
    let mut parts = vec![];
    for p in [3u64, 5] {
        let hg = HeisenbergGroup::standard(p, 1)?;
        let space = hg.space().clone();
        let f = CycField::for_prime(p);
        let irr = irreducibles_of_h(&hg)?;
        let list = order_two_automorphisms_nontrivial_on_center(&space)?;
        let mut gelfand = irr.len() == (p * p + p - 1) as usize;
        let mut identity = true;
        for alpha in &list {
            let (plus, _) = polarization_from_involution(&hg, alpha)?;
            for rho in &irr {
                gelfand &= hom_dim(rho, &plus, one(f))? <= 1;
            }
            let (wp, wm) = space.eigen_polarization(&alpha.s)?;
            for &a in &hg.span(&wp) {
                for &b in &hg.span(&wm) {
                    let (a, b) = (space.vector_from_index(a), space.vector_from_index(b));
                    let na = hg.make(&space.neg_vec(&a), 0);
                    for z in 0..p as i64 {
                        let lhs = hg.mul(hg.mul(na, hg.make(&space.add_vec(&a, &space.neg_vec(&b)), -z)), na);
                        identity &= lhs == hg.make(&space.neg_vec(&space.add_vec(&a, &b)), -z);
                    }
                }
            }
        }
        parts.push((format!("p={p}: {} irreducibles x {} involutions", irr.len(), list.len()), gelfand && identity));
    }
    Ok(all_pass(&parts.iter().map(|(n, ok)| (n.as_str(), *ok)).collect::<Vec<_>>()))
}

fn fixed_forms_agree(hg: &HeisenbergGroup, k: &[usize]) -> Result<bool> {
    let tau = heisenberg_rep(hg, 1, Model::Minus)?;
    let ff = fixed_forms(hg, &tau, 1, Model::Minus, k)?;
    let brute = invariant_forms_nullspace(&tau, k);
    Ok(ff.agree(tau.field(), tau.dim()) && brute.len() == ff.dimension() && same_span(tau.field(), &brute, &ff.nullspace_basis, tau.dim()))
}

fn criterion_6() -> Result<Outcome> {
    let hg3 = HeisenbergGroup::standard(3, 1)?;
    let subs = all_subgroups(&hg3);
    let mut all3 = true;
    for k in &subs {
        all3 &= fixed_forms_agree(&hg3, k)?;
    }
    let hg5 = HeisenbergGroup::standard(5, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut rand5 = true;
    for _ in 0..50 {
        let gens: Vec<usize> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..hg5.order())).collect();
        rand5 &= fixed_forms_agree(&hg5, &closure(&hg5, &gens))?;
    }
    let tau = heisenberg_rep(&hg3, 1, Model::Minus)?;
    let pol = hg3.space().standard_polarization();
    let z_dim = fixed_forms(&hg3, &tau, 1, Model::Minus, &hg3.center())?.dimension();
    let wplus_dim = fixed_forms(&hg3, &tau, 1, Model::Minus, &hg3.lift_subspace(&pol.plus))?.dimension();
    Ok(all_pass(&[
        (&format!("all {} subgroups at p=3", subs.len()), all3),
        ("50 random subgroups at p=5", rand5),
        (&format!("center gives {z_dim}, W+ gives {wplus_dim}"), z_dim == 0 && wplus_dim == 1),
    ]))
}

fn criterion_7() -> Result<Outcome> {
    let hg = HeisenbergGroup::standard(3, 1)?;
    let space = hg.space().clone();
    let isos = SpecialIso::all(&space);
    let count_ok = isos.len() == 9 && count_special_isos_brute_force(&hg)? == 9;
    let sp = space.enumerate_sp()?;
    let mut pairs = 0;
    let mut eq_ok = true;
    for a in &isos {
        for b in &isos {
            let (x, y, z) = special_iso_equal_tests(&hg, &sp, a, b);
            eq_ok &= x == y && y == z && x == (a == b);
            pairs += 1;
        }
    }
    let pol = space.standard_polarization();
    let plus = hg.lift_subspace(&pol.plus);
    let minus = hg.lift_subspace(&pol.minus);
    let hat_minus = hg.lift_subspace_with_center(&pol.minus);
    let mut round_trip = special_iso_from_split_polarization(&hg, &plus, &minus)? == SpecialIso::base(&space);
    for w0 in space.all_vectors() {
        let x = hg.make(&w0, 0);
        let conj = |set: &[usize]| -> Vec<usize> {
            let mut v: Vec<usize> = set.iter().map(|&h| hg.mul(hg.mul(hg.inv(x), h), x)).collect();
            v.sort_unstable();
            v
        };
        let (cp, cm) = (conj(&plus), conj(&minus));
        let nu = special_iso_from_split_polarization(&hg, &cp, &cm)?;
        round_trip &= nu.offset == space.neg_vec(&w0);
        round_trip &= split_polarization_from_iso(&hg, &nu, &cp, &conj(&hat_minus))? == cm;
    }
    for nu in &isos {
        let m = split_polarization_from_iso(&hg, nu, &plus, &hat_minus)?;
        if plus.iter().all(|&h| nu.mu(&hg, h) == 0) {
            round_trip &= special_iso_from_split_polarization(&hg, &plus, &m)? == *nu;
        }
    }
    let tau = heisenberg_rep(&hg, 1, Model::Minus)?;
    let reference = transported_character(&hg, &abstract_lift(&hg, &tau, &SpecialIso::base(&space), 1)?);
    let mut independent = true;
    for nu in &isos {
        let lift = abstract_lift(&hg, &tau, nu, 1)?;
        independent &= verify_homomorphism(&hg, &lift, VerifyMode::Exhaustive, 0, 0)?.passed() && transported_character(&hg, &lift) == reference;
    }
    for a in &isos {
        for b in &isos {
            independent &= special_iso_twist_holds(&hg, &tau, 1, a, b);
        }
    }
    Ok(all_pass(&[
        (&format!("{} special isomorphisms (p^2l), brute force agrees", isos.len()), count_ok),
        (&format!("equality conditions agree on {pairs} pairs"), eq_ok && pairs == 81),
        ("split polarization round trips", round_trip),
        ("abstract lift character independent of nu over 9 isos and 81 pairs", independent),
    ]))
}

struct OrbitTally {
    configs: usize,
    corrected_failures: usize,
    literal_failures: usize,
    witness: Option<String>,
}

fn tally<G: FiniteGroup + ?Sized>(t: &mut OrbitTally, name: &str, g: &G, k: &[usize], kappa: &MatrixRep, theta: &InvolutionRecord, limit: Option<usize>) -> Result<()> {
    let r = s_theta_clauses(g, k, theta, limit)?;
    let o = orbmult_check(g, k, kappa, theta)?;
    let normal = is_normal(g, k);
    let bound_ok = !o.h1.center_in_k || o.m_k <= o.h1.bound;
    let literal = r.passed() && o.lhs == o.rhs && bound_ok;
    let corrected = r.clause1 && r.clause2 && r.triangle && o.fiber_identity() && (!r.clause4 || o.lhs == o.rhs) && (!normal || literal);
    t.configs += 1;
    t.corrected_failures += usize::from(!corrected);
    if !literal {
        t.literal_failures += 1;
        if t.witness.is_none() {
            t.witness = Some(format!(
                "{name}, |K|={}, K normal={normal}, theta fixes {:?}: clause3={} clause4={} fibers={:?} lhs={} m_K*sum={} m_K={} bound={}",
                k.len(),
                theta.fixed_points(),
                r.clause3,
                r.clause4,
                o.fibers,
                o.lhs,
                o.rhs,
                o.m_k,
                o.h1.bound
            ));
        }
    }
    Ok(())
}

fn criterion_8() -> Result<Outcome> {
    let field = CycField::get(24);
    let groups: Vec<TableGroup> = zoo()?.into_iter().filter(|g| g.order() <= 48).collect();
    let hg3 = HeisenbergGroup::standard(3, 1)?;
    let h3 = TableGroup::heisenberg(&hg3)?;
    let f3 = CycField::for_prime(3);

    let mut configs = 0usize;
    let mut mackey_ok = true;
    for g in groups.iter().chain(std::iter::once(&h3)) {
        let f = if g.name == h3.name { f3 } else { field };
        let subs = all_subgroups(g);
        let stride = (subs.len() / 4).max(1);
        let picks: Vec<&Vec<usize>> = subs.iter().step_by(stride).collect();
        for k in &picks {
            if g.order() / k.len() > ORACLE_GUARD {
                continue;
            }
            for kappa in linear_characters(g, k, f)?.iter().take(3) {
                for h in &picks {
                    let m = mackey_hom_dim(g, k, kappa, h)?;
                    mackey_ok &= m == induced_hom_dim_oracle(g, k, kappa, h)? && m == induced_hom_dim_oracle_contragredient(g, k, kappa, h)?;
                    configs += 1;
                }
            }
        }
    }

    let sh = TableGroup::sp_semidirect_heisenberg(&hg3)?;
    let lift = standard_lift(&hg3, 1, Model::Minus)?;
    let weil = semidirect_weil_rep(&sh, &lift, &hg3)?;
    let hsub: Vec<usize> = (0..hg3.order()).map(|x| semidirect_index(&hg3, 0, x)).collect();
    let tau = heisenberg_rep(&hg3, 1, Model::Minus)?;
    let kappa = MatrixRep::new(tau.field(), 3, sh.order(), hsub.clone(), hsub.iter().map(|&x| tau.image(x % hg3.order()).clone()).collect(), vec![])?;
    let minus_one = lift.index_of(&hg3.space().m_element_scalar(-1)?)?;
    let theta_sh = InvolutionRecord::inner(&sh, semidirect_index(&hg3, minus_one, 0))?;
    let sh_fixed = theta_sh.fixed_points();
    let sh_mackey = mackey_hom_dim(&sh, &hsub, &kappa, &sh_fixed)?;
    let sh_ok = weil.homomorphism_failure(&sh).is_none() && sh_mackey == induced_hom_dim_oracle(&sh, &hsub, &kappa, &sh_fixed)?;
    configs += 1;

    let mut t = OrbitTally { configs: 0, corrected_failures: 0, literal_failures: 0, witness: None };
    for g in groups.iter().filter(|g| g.order() <= AUTOMORPHISM_GUARD) {
        let subs = all_subgroups(g);
        for theta in involutions(g)? {
            for k in &subs {
                tally(&mut t, &g.name, g, k, &MatrixRep::trivial(g, field, k.clone())?, &theta, None)?;
            }
        }
    }
    let h3subs = all_subgroups(&h3);
    for alpha in order_two_automorphisms_nontrivial_on_center(hg3.space())?.iter().step_by(4) {
        let theta = InvolutionRecord::new(&h3, alpha.table(&hg3))?;
        for k in h3subs.iter().step_by(5) {
            for kappa in linear_characters(&h3, k, f3)?.iter().take(2) {
                tally(&mut t, "H(3)", &h3, k, kappa, &theta, None)?;
            }
        }
    }
    tally(&mut t, "Sp(W)xH(3)", &sh, &hsub, &kappa, &theta_sh, None)?;

    let corrected = mackey_ok && configs >= 20 && sh_ok && t.corrected_failures == 0;
    let literal = t.literal_failures == 0;
    let detail = format!(
        "mackey = oracle on {configs} configurations: {}; Sp(W)xH(3) Weil rep and Mackey: {}; triangle, clauses 1-2 and fiber-weighted identity on {} orbit configurations: {}; clauses 3-4, single-m_K factorization and m_K bound hold on {}/{}; first counterexample: {}",
        verdict(mackey_ok && configs >= 20),
        verdict(sh_ok),
        t.configs,
        verdict(t.corrected_failures == 0),
        t.configs - t.literal_failures,
        t.configs,
        t.witness.as_deref().unwrap_or("none")
    );
    let mut out = Outcome::new(corrected && literal, detail);
    if !corrected {
        out.flags.push("a corrected statement failed as well".into());
    }
    Ok(out)
}

fn criterion_9() -> Result<Outcome> {
    let g = CongruenceGroup::new(1, 3, 4, 1)?;
    let four = g.element_from_rows(&[vec![4]])?;
    let r = sqrt(&four)?;
    let example = r.root.matrix().to_rows() == vec![vec![79]] && square_roots_brute_force(&four)? == vec![r.root.clone()];
    let mut unique = true;
    let mut sizes = vec![];
    for grp in [g, CongruenceGroup::new(2, 3, 3, 1)?, CongruenceGroup::new(1, 5, 4, 1)?] {
        let elems = grp.enumerate()?;
        sizes.push(elems.len());
        unique &= elems.len() <= 10_000;
        let squares: std::collections::HashSet<CongruenceElement> = elems.iter().map(CongruenceElement::square).collect();
        unique &= squares.len() == elems.len();
        for a in &elems {
            unique &= sqrt(a)?.root.square() == *a;
        }
    }
    let g2 = CongruenceGroup::new(2, 3, 3, 1)?;
    let h1 = h1_alpha_trivial_exhaustive(&g2, &CongruenceAutomorphism::transpose_inverse(&g2))?;
    let h1_ok = h1.trivial && h1.group_order == 6561;
    let alpha = CongruenceAutomorphism::antidiagonal_transpose_inverse(&g2);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (upper, lower, full) = (BlockPattern::upper(2), BlockPattern::lower(2), BlockPattern::full(2));
    let mut factor_ok = true;
    for i in 0..100 {
        let c = random_fixed(&g2, &full, &alpha, &mut rng)?;
        let (a, b) = if i % 2 == 0 { (&upper, &lower) } else { (&lower, &upper) };
        let f = alpha_factor(&c, a, b, &alpha)?;
        factor_ok &= a.contains(&f.a) && b.contains(&f.b) && alpha.apply(&f.a) == f.a && alpha.apply(&f.b) == f.b && f.a.mul(&f.b) == c;
    }
    Ok(all_pass(&[
        ("sqrt(4) = 79 mod 81, unique", example),
        (&format!("squaring bijective on groups of order {sizes:?}"), unique),
        ("H1 trivial on 1+3M2(Z/27) (6561 elements) for transpose-inverse", h1_ok),
        ("100 alpha-fixed factorizations verified by multiplication", factor_ok),
    ]))
}

fn criterion_10() -> Result<Outcome> {
    let start = Instant::now();
    let mut parts = vec![];
    for p in [3u64, 5, 7] {
        let t = Instant::now();
        let report = run_suite("all", &RunConfig { p, ..RunConfig::default() })?;
        parts.push((format!("p={p}: {} checks, {} failures, {:.1}s", report.checks, report.failures.len(), t.elapsed().as_secs_f64()), report.passed()));
    }
    let total = start.elapsed();
    parts.push((format!("total {:.1}s < 600s", total.as_secs_f64()), total < Duration::from_secs(600)));
    Ok(all_pass(&parts.iter().map(|(n, ok)| (n.as_str(), *ok)).collect::<Vec<_>>()))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let criteria: [(usize, &str, fn() -> Result<Outcome>); 10] = [
        (1, "SL(2,3) Weil lift equals alpha+beta", criterion_1),
        (2, "Weil lift homomorphism, exhaustive, p=3,5,7", criterion_2),
        (3, "Levi traces real with quadratic sign; parabolic character", criterion_3),
        (4, "involutions nontrivial on the center: fixed forms, contragredient, polarization", criterion_4),
        (5, "Gelfand pair bound and double-coset identity", criterion_5),
        (6, "fixed forms agree with brute-force nullspace", criterion_6),
        (7, "special isomorphisms: count, equality, round trips, independence", criterion_7),
        (8, "Mackey oracle and orbit-multiplicity statements", criterion_8),
        (9, "square roots, H1 triviality, fixed factorizations", criterion_9),
        (10, "full verification at p=3,5,7 within 10 minutes", criterion_10),
    ];
    let mut unexpected = vec![];
    for (id, title, f) in criteria {
        let start = Instant::now();
        let out = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = if known && !out.passed { " [KNOWN_UNATTAINABLE]" } else { "" };
        println!("criterion {id:>2} {}{tag} | {title} | tolerance: exact | {secs:.2}s | {}", verdict(out.passed), out.detail);
        for flag in &out.flags {
            println!("criterion {id:>2} FLAG | {flag}");
        }
        if out.passed == known {
            unexpected.push(id);
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all criteria as expected (known unattainable: {KNOWN_UNATTAINABLE:?})");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
