//! Property tests: products, oracle, parser and structure invariants on
//! seeded random inputs.

use confalg::algebra::rational::{factorial, int};
use confalg::algebra::{kernel_decompose, kernel_reconstruct, SubalgebraSpan};
use confalg::growth::{in_rational_span, span_rank};
use confalg::oracle::{coefficient_ring, oracle_check, to_distribution, DEFAULT_WINDOW};
use confalg::sample::Sampler;
use confalg::structure::{extract_current_components, is_conformal_identity, unital_split, untwist};
use confalg::*;
use proptest::prelude::*;

const CAP: u32 = 64;
const DEGREE: u32 = 3;

fn e(shape: &std::sync::Arc<Shape>, deg: u32, i: u16, j: u16) -> AlgebraElement {
    AlgebraElement::basis(shape, Basis { block: 0, deg, row: i - 1, col: j - 1 })
}

fn algebras() -> Vec<(&'static str, ConformalAlgebra)> {
    let m2 = BaseAlgebra::matrix(2).unwrap();
    let mp2 = BaseAlgebra::matrix_poly(2).unwrap();
    let ad = |b: &BaseAlgebra| Derivation::inner(e(b.shape(), 0, 1, 2));
    vec![
        ("cend1", make_cend(1).unwrap()),
        ("cend2", make_cend(2).unwrap()),
        ("cur_mat2", make_current(&m2)),
        ("cur_mat3", make_current(&BaseAlgebra::matrix(3).unwrap())),
        ("dif_mat2_ad", make_differential(&m2, &ad(&m2), 6).unwrap()),
        ("dif_matpoly2_ad", make_differential(&mp2, &ad(&mp2), 6).unwrap()),
    ]
}

fn pick(idx: usize) -> ConformalAlgebra {
    let all = algebras();
    all[idx % all.len()].1.clone()
}

fn sample_pair(c: &ConformalAlgebra, seed: u64) -> (ConformalElement, ConformalElement) {
    let span = c.base().spanning_up_to(DEGREE);
    let mut s = Sampler::new(seed);
    (s.conformal_element(&span), s.conformal_element(&span))
}

/// `n`-product computed by the reduction rules `(∂a)ⓝb = −n aⓝ₋₁b` and
/// `aⓝ(∂b) = ∂(aⓝb) + n aⓝ₋₁b`, down to products of base elements.
fn reference_nprod(c: &ConformalAlgebra, a: &ConformalElement, n: u32, b: &ConformalElement) -> ConformalElement {
    let mut out = ConformalElement::zero(c.shape());
    for (i, x) in a.components().iter().enumerate() {
        for (j, y) in b.components().iter().enumerate() {
            out = &out + &reduce(c, i, x, n, j, y);
        }
    }
    out
}

fn reduce(c: &ConformalAlgebra, i: usize, x: &AlgebraElement, n: u32, j: usize, y: &AlgebraElement) -> ConformalElement {
    if x.is_zero() || y.is_zero() {
        return ConformalElement::zero(c.shape());
    }
    if i > 0 {
        if n == 0 {
            return ConformalElement::zero(c.shape());
        }
        return reduce(c, i - 1, x, n - 1, j, y).scale(&int(-(n as i64)));
    }
    if j > 0 {
        let mut out = reduce(c, 0, x, n, j - 1, y).partial(1);
        if n > 0 {
            out = &out + &reduce(c, 0, x, n - 1, j - 1, y).scale(&int(n as i64));
        }
        return out;
    }
    let base = if c.is_current() {
        if n == 0 {
            x.mul(y).unwrap()
        } else {
            AlgebraElement::zero(c.shape())
        }
    } else {
        let dy = c.derivation().power(y, n).unwrap();
        x.mul(&dy).unwrap().scale(&int(if n.is_multiple_of(2) { 1 } else { -1 }))
    };
    ConformalElement::tilde(&base)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_matches_reduction_rules(which in 0usize..6, seed in any::<u64>(), n in 0u32..6) {
        let c = pick(which);
        let (a, b) = sample_pair(&c, seed);
        prop_assert_eq!(c.nprod(&a, n, &b).unwrap(), reference_nprod(&c, &a, n, &b));
    }

    #[test]
    fn sesquilinearity(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let (a, b) = sample_pair(&c, seed);
        let bound = c.structural_bound(&a.partial(1), &b).unwrap();
        for n in 0..=bound + 1 {
            let lhs = c.nprod(&a.partial(1), n, &b).unwrap();
            let rhs = match n {
                0 => ConformalElement::zero(c.shape()),
                _ => c.nprod(&a, n - 1, &b).unwrap().scale(&int(-(n as i64))),
            };
            prop_assert_eq!(lhs, rhs, "n = {}", n);
            let whole = c.nprod(&a, n, &b).unwrap().partial(1);
            let split = &c.nprod(&a.partial(1), n, &b).unwrap() + &c.nprod(&a, n, &b.partial(1)).unwrap();
            prop_assert_eq!(whole, split, "n = {}", n);
        }
    }

    #[test]
    fn bilinearity(which in 0usize..6, seed in any::<u64>(), n in 0u32..5, p in -5i64..=5, q in 1i64..=5) {
        let c = pick(which);
        let (a, b) = sample_pair(&c, seed);
        let (a2, b2) = sample_pair(&c, seed ^ 0x5eed);
        let s = Rational::new(p.into(), q.into());
        let left = c.nprod(&(&a.scale(&s) + &a2), n, &b).unwrap();
        let expect = &c.nprod(&a, n, &b).unwrap().scale(&s) + &c.nprod(&a2, n, &b).unwrap();
        prop_assert_eq!(left, expect);
        let right = c.nprod(&a, n, &(&b + &b2.scale(&s))).unwrap();
        let expect = &c.nprod(&a, n, &b).unwrap() + &c.nprod(&a, n, &b2).unwrap().scale(&s);
        prop_assert_eq!(right, expect);
    }

    #[test]
    fn products_vanish_beyond_locality(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let (a, b) = sample_pair(&c, seed);
        let loc = locality_degree(&c, &a, &b, CAP).unwrap();
        let start = loc.degree.map_or(0, |d| d + 1);
        if let Some(d) = loc.degree {
            prop_assert!(!c.nprod(&a, d, &b).unwrap().is_zero());
        }
        for n in start..start + 4 {
            prop_assert!(c.nprod(&a, n, &b).unwrap().is_zero(), "n = {}", n);
        }
    }

    #[test]
    fn oracle_agrees_on_random_pairs(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let span = c.base().spanning_up_to(DEGREE);
        let mut s = Sampler::new(seed).with_partial_degree(1);
        let (a, b) = (s.conformal_element(&span), s.conformal_element(&span));
        let ring = coefficient_ring(&c);
        let bound = c.structural_bound(&a, &b).unwrap().min(DEFAULT_WINDOW as u32 - 1);
        for m in 0..=bound + 1 {
            let r = oracle_check(&c, &ring, &a, m, &b, DEFAULT_WINDOW).unwrap();
            prop_assert!(r.mismatches.is_empty(), "m = {}: {:?}", m, r.mismatches.first());
        }
    }

    #[test]
    fn distribution_of_partial_is_derivative(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let (a, _) = sample_pair(&c, seed);
        let w = DEFAULT_WINDOW;
        let lhs = to_distribution(&a.partial(1), w).unwrap();
        let rhs = to_distribution(&a, w).unwrap().derivative();
        let (lo, hi) = rhs.range();
        prop_assert_eq!(lhs.restrict(lo, hi), rhs);
    }

    #[test]
    fn text_roundtrip(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let (a, _) = sample_pair(&c, seed);
        let scope = Scope::for_algebra(&c);
        prop_assert_eq!(parse_conformal_element(&c, &a.to_string(), &scope).unwrap(), a.clone());
        let x = a.component(0);
        prop_assert_eq!(parse_algebra_element(c.shape(), &x.to_string(), &scope).unwrap(), x);
    }

    #[test]
    fn kernel_roundtrip(seed in any::<u64>()) {
        let b = BaseAlgebra::matrix_poly(2).unwrap();
        let d = Derivation::ddx(b.shape());
        let mut s = Sampler::new(seed);
        let a = s.algebra_element(&b.spanning_up_to(5));
        let parts = kernel_decompose(&a, &d).unwrap();
        for (_, k) in &parts {
            prop_assert!(d.apply(k).unwrap().is_zero());
        }
        prop_assert_eq!(kernel_reconstruct(b.shape(), &parts), a);
    }

    #[test]
    fn identity_idempotent_and_components_roundtrip(which in 0usize..6, seed in any::<u64>()) {
        let c = pick(which);
        let e = match c.construction() {
            Construction::Differential => untwist(&c, DEGREE).unwrap().e_prime,
            _ => ConformalElement::tilde(&AlgebraElement::one(c.shape())),
        };
        let span: Vec<_> = c.base().spanning_up_to(DEGREE).iter().map(ConformalElement::tilde).collect();
        prop_assert!(is_conformal_identity(&c, &e, &span).unwrap().certified);
        let cand = is_conformal_identity(&c, &e, &span).unwrap();
        let (a, _) = sample_pair(&c, seed);
        let parts = extract_current_components(&c, &a, &cand).unwrap();
        let mut rebuilt = ConformalElement::zero(c.shape());
        for (k, x) in &parts {
            rebuilt = &rebuilt + &x.partial(*k as usize);
            // Each component is current relative to e.
            prop_assert_eq!(&c.nprod(x, 0, &e).unwrap(), x);
            for n in 1..4 {
                prop_assert!(c.nprod(x, n, &e).unwrap().is_zero());
            }
        }
        prop_assert_eq!(rebuilt, a.clone());
        let stable: Vec<_> = span.iter().map(|x| c.nprod(&e, 0, x).unwrap()).chain([a]).collect();
        if let Ok(split) = unital_split(&c, &stable, &e) {
            prop_assert!(split.idempotent);
            prop_assert_eq!(split.rank_m0 + split.rank_m1, split.rank);
        }
    }
}

#[test]
fn current_specialization_on_basis_pairs() {
    for (name, c) in algebras() {
        if !c.is_current() {
            continue;
        }
        let basis = c.base().spanning_up_to(DEGREE);
        for a in &basis {
            for b in &basis {
                let (ta, tb) = (ConformalElement::tilde(a), ConformalElement::tilde(b));
                assert_eq!(c.nprod(&ta, 0, &tb).unwrap(), ConformalElement::tilde(&a.mul(b).unwrap()));
                for n in 1..=6 {
                    assert!(c.nprod(&ta, n, &tb).unwrap().is_zero(), "{name}: {a} ({n}) {b}");
                }
            }
        }
    }
}

#[test]
fn zero_derivation_is_current() {
    let b = BaseAlgebra::matrix_poly(2).unwrap();
    let dif = make_differential(&b, &Derivation::zero(b.shape()), 6).unwrap();
    let cur = make_current(&b);
    let mut s = Sampler::new(11);
    let span = b.spanning_up_to(DEGREE);
    for _ in 0..40 {
        let (x, y) = (s.conformal_element(&span), s.conformal_element(&span));
        for n in 0..4 {
            assert_eq!(dif.nprod(&x, n, &y).unwrap(), cur.nprod(&x, n, &y).unwrap());
        }
    }
}

#[test]
fn subalgebra_closure_by_linear_solve() {
    // Upper-triangular matrices over ℚ[x], and End₂(xℚ[x]) + ℚ·1.
    let m = BaseAlgebra::matrix_poly(2).unwrap();
    let sh = m.shape().clone();
    let ut = SubalgebraSpan {
        elements: vec![e(&sh, 0, 1, 1), e(&sh, 0, 1, 2), e(&sh, 0, 2, 2)],
        monomials_from_degree: None,
    };
    let noncur = SubalgebraSpan {
        elements: vec![AlgebraElement::one(&sh)],
        monomials_from_degree: Some(1),
    };
    for span in [ut, noncur] {
        let sub = BaseAlgebra::subalgebra(m.clone(), span, true, 4).unwrap();
        let gens = sub.spanning_up_to(4);
        let lifted: Vec<_> = gens.iter().map(ConformalElement::tilde).collect();
        for u in &gens {
            for v in &gens {
                let uv = u.mul(v).unwrap();
                if uv.degree() <= 4 {
                    assert!(in_rational_span(&lifted, &ConformalElement::tilde(&uv)), "{u} * {v}");
                }
            }
        }
    }
}

#[test]
fn span_rank_ignores_order_and_scaling() {
    let c = make_cend(2).unwrap();
    let span = c.base().spanning_up_to(2);
    let mut s = Sampler::new(5);
    let elems: Vec<_> = (0..6).map(|_| s.conformal_element(&span)).collect();
    let r = span_rank(&elems);
    let mut rev: Vec<_> = elems.iter().rev().map(|x| x.scale(&factorial(3))).collect();
    rev.push(&elems[0] + &elems[1].partial(2));
    assert_eq!(span_rank(&rev), r);
}
