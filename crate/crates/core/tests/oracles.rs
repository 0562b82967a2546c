//! Worked examples checked against independent computations.

use std::sync::Arc;

use crossnorm_core::fiber::{gauge_lp, min_norm_over_affine, polarity_check, Polarity};
use crossnorm_core::hom::{
    bilinear_norm, hahn_banach_witness, operator_norm, pairing, quotient_dual_check,
};
use crossnorm_core::rational::{int, Rational};
use crossnorm_core::sequences::{
    diagonal_check, inj_tens_uc_check, sphere_quotient, uc_quotient_tensor_check, FiniteSpaceK,
};
use crossnorm_core::summability::{hom_commute_check, Generator};
use crossnorm_core::tensor::iota_evaluate;
use crossnorm_core::{
    AtomMap, Coefficients, CountableFamily, Crossnorm, Element, FiberVector, Homomorphism,
    L0Function, Matrix, MeasureSpace, ModuleSpec, NormDescriptor, NormValue, Submodule, TailBound,
    Tensor, Verdict,
};
use num_traits::{One, Signed};

mod common;

use common::{brute_force_gauge, grid_min, q, sign_form_max, singular_sum_and_max};

fn fv(x: &[i64]) -> FiberVector {
    FiberVector::new(x.iter().map(|&a| int(a)).collect())
}

fn m(rows: &[&[i64]]) -> Matrix {
    let cols = rows[0].len();
    Matrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&a| int(a)).collect())
            .collect(),
        cols,
    )
}

fn one_atom(fiber: NormDescriptor) -> Arc<ModuleSpec> {
    Arc::new(ModuleSpec::constant(
        Arc::new(MeasureSpace::uniform(1)),
        fiber,
    ))
}

fn exact(v: &NormValue) -> Rational {
    v.exact()
        .cloned()
        .unwrap_or_else(|| panic!("expected an exact value, got {v}"))
}

#[test]
fn l0_distance_by_direct_sum() {
    let x = Arc::new(MeasureSpace::new([("a", int(1)), ("b", int(3))]).unwrap());
    let f = L0Function::new(x.clone(), vec![int(2), q(1, 2)]).unwrap();
    let zero = L0Function::zero(x);
    let oracle = q(1, 4) * int(2).min(int(1)) + q(3, 4) * q(1, 2);
    assert_eq!(f.distance(&zero).unwrap(), oracle);
    assert_eq!(oracle, q(5, 8));
}

#[test]
fn fiber_norms_by_hand() {
    assert_eq!(
        NormDescriptor::l2(2)
            .norm(&[int(3), int(4)])
            .unwrap()
            .squared(),
        Some(int(25))
    );
    assert_eq!(
        NormDescriptor::l2(2).norm(&[int(3), int(4)]).unwrap(),
        NormValue::Exact(int(5))
    );
    // the polar of conv{±e1, ±e2} is the ℓ∞ ball
    let d = NormDescriptor::polyhedral(
        vec![fv(&[1, 1]), fv(&[1, -1])],
        vec![fv(&[1, 0]), fv(&[0, 1])],
    )
    .unwrap();
    assert_eq!(
        d.norm(&[int(1), int(-2)]).unwrap(),
        NormValue::Exact(int(2))
    );
    let dual = NormDescriptor::lp(crossnorm_core::Exponent::Two, vec![int(4), int(1)])
        .unwrap()
        .dual();
    assert_eq!(dual.euclidean_weights().unwrap(), &[q(1, 4), int(1)]);
}

#[test]
fn polarity_by_facets() {
    let e = [fv(&[1, 0]), fv(&[0, 1])];
    let diag = [fv(&[1, 1]), fv(&[1, -1])];
    assert_eq!(polarity_check(&e, &diag).unwrap(), Polarity::Certified);
    assert_eq!(polarity_check(&e, &e).unwrap(), Polarity::Refuted);
    assert_eq!(
        polarity_check(&[fv(&[1])], &[fv(&[1])]).unwrap(),
        Polarity::Certified
    );
}

#[test]
fn gauge_examples_match_brute_force() {
    type Case<'a> = (&'a [[i64; 2]], [Rational; 2], Rational);
    let cases: [Case; 3] = [
        (&[[1, 0], [0, 1]], [int(1), int(1)], int(2)),
        (&[[1, 1], [1, -1]], [int(1), int(0)], int(1)),
        (&[[1, 1], [1, -1]], [int(1), int(1)], int(1)),
    ];
    for (dict, target, want) in cases {
        let rows: Vec<Vec<Rational>> = dict.iter().map(|c| vec![int(c[0]), int(c[1])]).collect();
        let sol = gauge_lp(&rows, &target).unwrap();
        assert_eq!(brute_force_gauge(dict, &target).unwrap(), want);
        assert_eq!(sol.value, want);
        assert_eq!(sol.combination(&rows, 2), target.to_vec());
    }
    let rows = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
    let sol = gauge_lp(&rows, &[int(1), int(0)]).unwrap();
    let mut weights: Vec<Rational> = sol.terms.iter().map(|t| t.weight.clone()).collect();
    weights.sort();
    assert_eq!(weights, vec![q(1, 2), q(1, 2)]);
}

#[test]
fn affine_minimum_by_grid_search() {
    let span = [fv(&[1, 1])];
    let linf = min_norm_over_affine(&NormDescriptor::linf(2), &[int(1), int(0)], &span).unwrap();
    let oracle = grid_min(3, 12, |t| (int(1) + t).abs().max(t.abs()));
    assert_eq!(exact(&linf.value), oracle);
    assert_eq!(oracle, q(1, 2));
    assert_eq!(linf.shift, FiberVector::new(vec![q(-1, 2), q(-1, 2)]));

    let l1 = min_norm_over_affine(&NormDescriptor::l1(2), &[int(1), int(0)], &span).unwrap();
    assert_eq!(
        exact(&l1.value),
        grid_min(3, 12, |t| (int(1) + t).abs() + t.abs())
    );
    let member = min_norm_over_affine(&NormDescriptor::l1(2), &[int(2), int(2)], &span).unwrap();
    assert!(member.value.is_zero());
}

#[test]
fn sign_of_a_euclidean_vector() {
    let m = one_atom(NormDescriptor::l2(2));
    let v = Element::constant(m, &fv(&[3, -4])).unwrap();
    assert_eq!(v.sgn().fiber(0).as_slice(), &[q(3, 5), q(-4, 5)]);
}

#[test]
fn submodule_quotient_by_grid() {
    let m = one_atom(NormDescriptor::linf(2));
    let v = Submodule::generated_by(
        m.clone(),
        &[Element::constant(m.clone(), &fv(&[1, 1])).unwrap()],
    )
    .unwrap();
    let w = Element::constant(m, &fv(&[1, 0])).unwrap();
    let (norm, _) = v.quotient_norm(&w).unwrap();
    assert_eq!(
        norm.value(0),
        &NormValue::Exact(grid_min(2, 8, |t| (int(1) - t).abs().max(t.abs())))
    );
}

#[test]
fn operator_norms_by_vertex_enumeration() {
    let diag = m(&[&[1, 0], &[0, 2]]);
    let col_max = (0..2)
        .map(|j| diag.column(j).iter().map(Rational::abs).sum::<Rational>())
        .max()
        .unwrap();
    let n = operator_norm(&diag, &NormDescriptor::l1(2), &NormDescriptor::l1(2)).unwrap();
    assert_eq!(exact(&n), col_max);

    let a = m(&[&[1, 1], &[0, 0]]);
    let row_max = (0..2)
        .map(|i| a.row(i).iter().map(Rational::abs).sum::<Rational>())
        .max()
        .unwrap();
    let n = operator_norm(&a, &NormDescriptor::linf(2), &NormDescriptor::linf(2)).unwrap();
    assert_eq!(exact(&n), row_max);
    assert_eq!(row_max, int(2));

    let b = bilinear_norm(
        &Matrix::identity(2),
        &NormDescriptor::l1(2),
        &NormDescriptor::l1(2),
    )
    .unwrap();
    assert_eq!(b, NormValue::Exact(int(1)));
}

#[test]
fn hahn_banach_witnesses_attain_the_norm() {
    let m = one_atom(NormDescriptor::l1(2));
    let v = Element::constant(m, &fv(&[1, -2])).unwrap();
    let omega = hahn_banach_witness(&v).unwrap();
    assert_eq!(pairing(&omega, &v).unwrap().values(), &[int(3)]);
    assert!(omega.fiber(0).iter().all(|x| x.abs() <= Rational::one()));
    assert_eq!(omega.fiber(0)[1], int(-1));

    let e = one_atom(NormDescriptor::l2(2));
    let v = Element::constant(e, &fv(&[3, -4])).unwrap();
    let omega = hahn_banach_witness(&v).unwrap();
    assert_eq!(omega.fiber(0).as_slice(), &[q(3, 5), q(-4, 5)]);
    assert_eq!(pairing(&omega, &v).unwrap().values(), &[int(5)]);
}

#[test]
fn quotient_operators() {
    let src = one_atom(NormDescriptor::l1(2));
    let dst = one_atom(NormDescriptor::l1(1));
    let proj = Homomorphism::new(src.clone(), dst, vec![m(&[&[1, 0]])]).unwrap();
    let report = proj.quotient_report().unwrap();
    assert!(report.is_quotient());
    let pre = &report.atoms[0].min_preimages[0];
    assert_eq!(pre.norm, NormValue::Exact(int(1)));
    // every preimage of 1 is (1, t); the cheapest has t = 0
    assert_eq!(grid_min(2, 4, |t| int(1) + t.abs()), int(1));

    let twice = Homomorphism::identity(src).scale(&int(2));
    assert!(!twice.is_quotient_operator().unwrap());
}

#[test]
fn annihilator_duality_by_direct_minimization() {
    let m = one_atom(NormDescriptor::l1(2));
    let v =
        Submodule::generated_by(m.clone(), &[Element::constant(m, &fv(&[1, 0])).unwrap()]).unwrap();
    let (holds, comparisons) = quotient_dual_check(&v).unwrap();
    assert!(holds);
    for c in &comparisons[0] {
        let (a, b) = (&c.functional[0], &c.functional[1]);
        assert_eq!(c.restriction, a.abs());
        assert_eq!(c.quotient, grid_min(3, 4, |t| a.abs().max((b - t).abs())));
    }
}

#[test]
fn tensor_norms_of_small_matrices() {
    let l1 = one_atom(NormDescriptor::l1(2));
    let l2 = one_atom(NormDescriptor::l2(2));

    let v = Element::constant(l1.clone(), &fv(&[1, 1])).unwrap();
    let w = Element::constant(l1.clone(), &fv(&[1, 0])).unwrap();
    let elem = Tensor::elementary(&v, &w).unwrap();
    assert_eq!(
        elem.norm(Crossnorm::Pi).unwrap().value(0),
        &NormValue::Exact(int(2))
    );

    let id = Tensor::new(l1.clone(), l1.clone(), vec![Matrix::identity(2)]).unwrap();
    let entry_sum: Rational = Matrix::identity(2)
        .entries()
        .iter()
        .map(Rational::abs)
        .sum();
    assert_eq!(
        id.norm(Crossnorm::Pi).unwrap().value(0),
        &NormValue::Exact(entry_sum)
    );
    let rows = Matrix::identity(2).to_rows();
    assert_eq!(
        id.norm(Crossnorm::Eps).unwrap().value(0),
        &NormValue::Exact(sign_form_max(&rows))
    );

    let id2 = Tensor::new(l2.clone(), l2.clone(), vec![Matrix::identity(2)]).unwrap();
    let (nuclear, spectral) = singular_sum_and_max([[1.0, 0.0], [0.0, 1.0]]);
    assert!(id2
        .norm(Crossnorm::Pi)
        .unwrap()
        .value(0)
        .approx_eq(&NormValue::approx(nuclear, 0.0), 1e-7));
    assert!(id2
        .norm(Crossnorm::Eps)
        .unwrap()
        .value(0)
        .approx_eq(&NormValue::approx(spectral, 0.0), 1e-7));
    assert_eq!(id2.hs_norm_squared().unwrap().values(), &[int(2)]);

    let d = Tensor::new(l2.clone(), l2.clone(), vec![m(&[&[1, 0], &[0, -2]])]).unwrap();
    let (nuclear, _) = singular_sum_and_max([[1.0, 0.0], [0.0, -2.0]]);
    assert!((d.norm(Crossnorm::Pi).unwrap().value(0).to_f64() - nuclear).abs() < 1e-7);

    // rows (3,4) and (0,0) over ℓ1 ⊗ ℓ2: the row norms add to 5
    let r = Tensor::new(l1.clone(), l2.clone(), vec![m(&[&[3, 4], &[0, 0]])]).unwrap();
    assert!(r
        .norm(Crossnorm::Pi)
        .unwrap()
        .value(0)
        .approx_eq(&NormValue::Exact(int(5)), 1e-7));

    let ones = Element::constant(Arc::new(l1.dual()), &fv(&[1, 1])).unwrap();
    assert_eq!(
        iota_evaluate(&id, &ones, &ones).unwrap().values(),
        &[int(2)]
    );

    let (left, _) = id2.realize_left_right();
    assert!(left
        .pointwise_norm()
        .unwrap()
        .value(0)
        .approx_eq(&NormValue::Exact(int(1)), 1e-7));
}

#[test]
fn sequence_identities() {
    let x = Arc::new(MeasureSpace::uniform(1));
    let f = |v: i64| L0Function::new(x.clone(), vec![int(v)]).unwrap();
    let r = diagonal_check(&[f(1), f(-2)], 1e-7).unwrap();
    assert!(r.holds);
    assert!(r.pi.value(0).approx_eq(&NormValue::Exact(int(3)), 1e-7));
    assert!(r.eps.value(0).approx_eq(&NormValue::Exact(int(2)), 1e-7));

    // a polyhedral module, generated by its own vertices
    let linf = Arc::new(ModuleSpec::constant(x.clone(), NormDescriptor::linf(2)));
    let gens: Vec<Element> = NormDescriptor::linf(2)
        .primal_vertices()
        .unwrap()
        .iter()
        .map(|v| Element::constant(linf.clone(), v).unwrap())
        .collect();
    assert!(sphere_quotient(linf.clone(), &gens)
        .unwrap()
        .1
        .is_quotient());
    assert!(!sphere_quotient(linf, &gens[..1]).unwrap().1.is_quotient());

    // the projection ℓ1² -> ℓ1¹ stays a quotient after tensoring with UC(K)
    let src = Arc::new(ModuleSpec::constant(x.clone(), NormDescriptor::l1(2)));
    let dst = Arc::new(ModuleSpec::constant(x.clone(), NormDescriptor::l1(1)));
    let proj = Homomorphism::new(src, dst, vec![m(&[&[1, 0]])]).unwrap();
    let r = uc_quotient_tensor_check(&proj, &FiniteSpaceK::uniform(2)).unwrap();
    assert!(r.holds);
    assert!(r.min_preimage_norms.iter().flatten().all(|v| v.is_one()));
}

#[test]
fn injective_norm_of_a_partition_of_unity() {
    let x = Arc::new(MeasureSpace::uniform(1));
    let k = FiniteSpaceK::uniform(2);
    let uc = Arc::new(crossnorm_core::sequences::uc_module(
        &k,
        &ModuleSpec::scalars(x.clone()),
    ));
    let target = Arc::new(ModuleSpec::constant(x, NormDescriptor::l1(2)));
    // disjoint unit bumps at p0 and p1 carrying v0 = (1,-2) and v1 = (2,2)
    let alpha = Tensor::new(uc, target, vec![m(&[&[1, -2], &[2, 2]])]).unwrap();
    let r = inj_tens_uc_check(&alpha).unwrap();
    assert!(r.equal);
    assert_eq!(r.eps.value(0), &NormValue::Exact(int(4)));
}

fn scalar_family(space: &Arc<MeasureSpace>, bases: Vec<i64>) -> CountableFamily {
    let module = Arc::new(ModuleSpec::scalars(space.clone()));
    let m2 = module.clone();
    let b = bases.clone();
    let generator: Generator = Arc::new(move |i| {
        let fibers = b
            .iter()
            .map(|&base| FiberVector::new(vec![num_traits::pow(q(1, base), i as usize)]))
            .collect();
        Element::new(m2.clone(), fibers).unwrap()
    });
    let bounds = bases
        .iter()
        .map(|&base| TailBound::Geometric {
            c: q(1, base - 1),
            r: q(1, base),
        })
        .collect();
    CountableFamily::new(module, generator, bounds).unwrap()
}

#[test]
fn geometric_sums_match_closed_forms() {
    let x = Arc::new(MeasureSpace::uniform(2));
    let family = scalar_family(&x, vec![2, 3]);
    assert_eq!(family.cauchy_check(20).unwrap(), vec![Verdict::Summable; 2]);
    let tol = q(1, 1_000_000);
    let s = family.sum(&tol).unwrap();
    // Σ_{i>=1} b^-i = 1/(b-1)
    for (k, want) in [int(1), q(1, 2)].iter().enumerate() {
        assert!((&s.sum.fiber(k)[0] - want).abs() <= tol);
        assert!(s.error[k] <= tol);
    }

    let diag = Homomorphism::new(
        family.module().clone(),
        family.module().clone(),
        vec![m(&[&[1]]), m(&[&[2]])],
    )
    .unwrap();
    assert!(hom_commute_check(&family, &diag, &tol).unwrap().holds);
}

#[test]
fn reordering_a_geometric_family_keeps_its_sum() {
    let x = Arc::new(MeasureSpace::uniform(1));
    let family = scalar_family(&x, vec![2]);
    let module = family.module().clone();
    let inner = family.clone();
    // swap each pair (2j-1, 2j)
    let swapped: Generator =
        Arc::new(move |i| inner.term(if i % 2 == 1 { i + 1 } else { i - 1 }).unwrap());
    // the swapped tail after n terms is bounded by the original tail after n-1
    let bounds = vec![TailBound::Geometric {
        c: int(2),
        r: q(1, 2),
    }];
    let reordered = CountableFamily::new(module, swapped, bounds).unwrap();
    let tol = q(1, 100_000);
    let a = family.sum(&tol).unwrap().sum;
    let b = reordered.sum(&tol).unwrap().sum;
    assert!((&a.fiber(0)[0] - &b.fiber(0)[0]).abs() <= &tol * int(2));
}

#[test]
fn harmonic_families_are_flagged() {
    let x = Arc::new(MeasureSpace::new([("a", int(1)), ("b", int(1))]).unwrap());
    let module = Arc::new(ModuleSpec::scalars(x.clone()));
    let e = Element::constant(module, &fv(&[1])).unwrap();
    let family =
        CountableFamily::from_template(e, Coefficients::PSeries { a: int(1), p: 1 }).unwrap();
    assert_eq!(
        family.cauchy_check(32).unwrap(),
        vec![Verdict::NotSummable; 2]
    );
    assert!(family.sum(&q(1, 10)).is_err());
    assert!(family.partial_sum(32).unwrap().fiber(1)[0] > int(4));
}

#[test]
fn pullback_along_a_collapse() {
    let x = Arc::new(MeasureSpace::uniform(2));
    let y = Arc::new(MeasureSpace::new([("y", int(1))]).unwrap());
    let phi = AtomMap::from_pairs(x, y.clone(), &[("x0", "y"), ("x1", "y")]).unwrap();
    let m = Arc::new(ModuleSpec::constant(y, NormDescriptor::l1(2)));
    let v = Element::constant(m, &fv(&[1, -2])).unwrap();
    let pulled = phi.pullback_element(&v).unwrap().norm();
    assert_eq!(pulled.exact().unwrap().values(), &[int(3), int(3)]);
}
