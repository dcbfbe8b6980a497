//! Cross-cutting properties checked over the sample catalogue:
//! determinants against a naive cofactor oracle, discrepancy signs,
//! determinant-only dependence of the different, isomorphism invariance
//! and monotonicity of the regularity verdict, contraction-plan
//! guarantees, oracle monotonicity in the search depth, and the
//! symmetry of the one-parameter supersingularity test.

use num_bigint::BigInt;

use fsing_core::classify::{self, SfrOutcome};
use fsing_core::corpus;
use fsing_core::exact;
use fsing_core::gf::GfCtx;
use fsing_core::p1::{self, P1Pair, SplitAnswer};

/// Laplace expansion along the first row; exponential, but the sample
/// graphs stay small.
fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut acc = BigInt::from(0);
    for (j, &top) in m[0].iter().enumerate() {
        if top == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter_map(|(k, &x)| (k != j).then_some(x))
                    .collect()
            })
            .collect();
        let term = BigInt::from(top) * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn abs(x: BigInt) -> BigInt {
    if x < BigInt::from(0) {
        -x
    } else {
        x
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn lattice_determinants_match_cofactor_expansion() {
    for entry in corpus::catalogue() {
        if !entry.graph.is_negative_definite() {
            continue;
        }
        let naive = abs(cofactor_det(&entry.graph.intersection_matrix()));
        assert_eq!(
            entry.graph.lattice_determinant().unwrap(),
            naive,
            "{}",
            entry.name
        );
    }
}

#[test]
fn discrepancies_are_nonpositive_on_the_catalogue() {
    let zero = exact::rat_int(0);
    let minus_one = exact::rat_int(-1);
    for entry in corpus::catalogue() {
        if !entry.graph.is_negative_definite() {
            continue;
        }
        for (g, label) in [
            (entry.graph.clone(), entry.name.clone()),
            (corpus::permuted(&entry.graph, 17), format!("{}#17", entry.name)),
        ] {
            for a in g.discrepancies().unwrap() {
                assert!(a <= zero, "{}: discrepancy {} > 0", label, a);
                assert!(a > minus_one, "{}: discrepancy {} <= -1, not klt", label, a);
            }
        }
    }
}

#[test]
fn different_depends_only_on_branch_determinants() {
    let half = exact::rat(1, 2);
    let one = exact::rat_int(1);
    // Same determinant triple through different branch shapes: chains
    // of (-2)-curves versus single curves of matching determinant.
    let a = corpus::minus_two_star([2, 3, 5]);
    let b = corpus::star_with_arms(-2, &[&[-2], &[-3], &[-5]]);
    let da = a.different_on_center(0).unwrap();
    assert_eq!(da, b.different_on_center(0).unwrap());
    assert_eq!(da, vec![exact::rat(1, 2), exact::rat(2, 3), exact::rat(4, 5)]);
    for dets in [[2u64, 2, 2], [2, 2, 5], [2, 3, 4], [3, 4, 5]] {
        let g = corpus::minus_two_star(dets);
        for c in g.different_on_center(0).unwrap() {
            assert!(c >= half && c < one, "coefficient {} outside [1/2, 1)", c);
        }
    }
}

#[test]
fn verdicts_are_isomorphism_invariant() {
    for entry in corpus::catalogue() {
        for seed in [11u64, 202] {
            let relabeled = corpus::permuted(&entry.graph, seed);
            for p in [2u64, 3, 5, 7] {
                let original = classify::sfr_verdict(&entry.graph, p).unwrap();
                let moved = classify::sfr_verdict(&relabeled, p).unwrap();
                assert_eq!(original.outcome, moved.outcome, "{} at p={}", entry.name, p);
                assert_eq!(original.reasons, moved.reasons, "{} at p={}", entry.name, p);
                assert_eq!(original.shape_rule, moved.shape_rule, "{} at p={}", entry.name, p);
            }
        }
    }
}

#[test]
fn regularity_is_monotone_in_the_characteristic() {
    let primes = [2u64, 3, 5, 7, 11, 13];
    for entry in corpus::catalogue() {
        let mut seen_regular = false;
        for &p in &primes {
            let outcome = classify::sfr_verdict(&entry.graph, p).unwrap().outcome;
            if seen_regular {
                assert_eq!(
                    outcome,
                    SfrOutcome::StronglyFRegular,
                    "{}: regular at a smaller prime but {:?} at p={}",
                    entry.name,
                    outcome,
                    p
                );
            }
            seen_regular |= outcome == SfrOutcome::StronglyFRegular;
        }
    }
}

#[test]
fn contraction_plans_are_nef_and_tame() {
    let mut planned = 0usize;
    for entry in corpus::catalogue() {
        for p in [3u64, 5, 7, 11] {
            let verdict = classify::sfr_verdict(&entry.graph, p).unwrap();
            if verdict.outcome != SfrOutcome::StronglyFRegular {
                continue;
            }
            let plan = classify::tame_decomposition_plan(&entry.graph, p)
                .unwrap_or_else(|e| panic!("{} at p={}: {}", entry.name, p, e));
            assert!(plan.all_nef(), "{} at p={}", entry.name, p);
            assert_eq!(gcd(plan.index_bound(), p), 1, "{} at p={}", entry.name, p);
            assert!(!plan.steps.is_empty());
            planned += 1;
        }
    }
    assert!(planned >= 80, "too few plans exercised: {}", planned);
}

#[test]
fn splitting_oracle_is_monotone_in_search_depth() {
    for (weights, p) in [
        (&[2u64, 3, 4][..], 5u64),
        (&[2, 2, 5][..], 3),
        (&[3, 3, 3][..], 7),
        (&[2, 4, 4][..], 5),
        (&[2, 3, 5][..], 7),
    ] {
        let ctx = GfCtx::prime(p).unwrap();
        let pair = P1Pair::from_weights(&ctx, weights, None).unwrap();
        let mut first_yes = None;
        for e_max in 1..=3u32 {
            let ans = p1::oracle_sharply_f_split(&ctx, &pair, e_max).unwrap();
            match (first_yes, ans) {
                (None, SplitAnswer::Yes(w)) => first_yes = Some(w),
                (Some(w0), SplitAnswer::Yes(w)) => {
                    assert_eq!(w0, w, "{:?} at p={}, e_max={}", weights, p, e_max)
                }
                (Some(_), other) => {
                    panic!("answer regressed to {:?} at e_max={}", other, e_max)
                }
                (None, _) => {}
            }
        }
        assert!(first_yes.is_some(), "{:?} at p={} never split", weights, p);
    }
}

#[test]
fn lambda_test_zero_locus_has_cross_ratio_symmetry() {
    // Moebius maps fixing the marked set {infinity, 0, -1} act on the
    // fourth point; supersingularity only sees the four-point set, so
    // the vanishing locus must be stable under lambda -> 1/lambda and
    // lambda -> -1-lambda.
    for p in [3u64, 5, 7, 11, 13] {
        let ctx = GfCtx::prime(p).unwrap();
        for code in 1..p {
            let lam = ctx.el_from_code(code).unwrap();
            if ctx.add(lam, ctx.one()).is_zero() {
                continue;
            }
            let here = p1::lambda_hasse_test(&ctx, lam).unwrap().is_zero();
            let inv = ctx.inv(lam);
            let refl = ctx.neg(ctx.add(ctx.one(), lam));
            for image in [inv, refl] {
                if image.is_zero() || ctx.add(image, ctx.one()).is_zero() {
                    continue;
                }
                let there = p1::lambda_hasse_test(&ctx, image).unwrap().is_zero();
                assert_eq!(
                    here, there,
                    "p={}, lambda code {} vs image code {}",
                    p,
                    code,
                    ctx.code(image)
                );
            }
        }
    }
}
