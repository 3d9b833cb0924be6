use std::collections::BTreeMap;

use normtrace_core::agcode::*;
use normtrace_core::census::{family_tuples, surface_table, Family};
use normtrace_core::Workbench;
use proptest::prelude::*;

/// Full weight distribution of the q = 2, k = 12 code, frozen after the first
/// exhaustive run.
const Q2_SPECTRUM: [(u64, u64); 14] = [
    (0, 1),
    (20, 392),
    (21, 224),
    (22, 1568),
    (23, 4704),
    (24, 8428),
    (25, 11200),
    (26, 15680),
    (27, 47040),
    (28, 56840),
    (29, 67424),
    (30, 32928),
    (31, 12768),
    (32, 2947),
];
const Q2_MIN_WEIGHT: u64 = 20;

#[test]
fn basis_pole_orders() {
    let b = basis_for(3, 27);
    assert_eq!(b.pole_orders, vec![0, 9, 13, 18, 22, 26, 27]);
    assert_eq!(
        b.monomials,
        vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (3, 0)]
    );
    let b = basis_for(2, 12);
    assert_eq!(b.len(), 6);
    assert!(b.position((0, 2)).is_none());
    assert_eq!(basis_for(3, 0).monomials, vec![(0, 0)]);
}

#[test]
fn basis_orders_are_distinct_and_bounded() {
    for q in [2, 3] {
        for k in 0..40 {
            let b = basis_for(q, k);
            assert!(b.pole_orders.windows(2).all(|w| w[0] < w[1]));
            assert!(b.pole_orders.iter().all(|&o| o <= k));
            // y has degree at most q² - 1
            assert!(b.monomials.iter().all(|&(_, j)| j < q * q));
        }
    }
}

#[test]
fn generator_matrix_has_full_rank() {
    let wb = Workbench::build(3, 1).unwrap();
    let code = build_code(wb.tower(), 27);
    assert_eq!(code.n(), 243);
    assert_eq!(rank(wb.tower(), &code), 7);
    assert_eq!(designed_distance(&code), 216);
    let one = code.basis.position((0, 0)).unwrap();
    assert!(code.rows[one].iter().all(|&v| v == 1));

    let wb = Workbench::build(2, 1).unwrap();
    for k in 0..=20 {
        let code = build_code(wb.tower(), k);
        assert_eq!(rank(wb.tower(), &code), code.dimension(), "k={k}");
    }
    assert_eq!(designed_distance(&build_code(wb.tower(), 12)), 20);
}

#[test]
fn weights_of_simple_functions() {
    let wb = Workbench::build(3, 1).unwrap();
    let t = wb.tower();
    let code = build_code(t, 27);
    // 1 never vanishes; y vanishes only at (0, 0); x vanishes on q² points
    assert_eq!(weight_of(t, &code, &[0, 0, 0, 0, 0, 0, 1]).unwrap(), 243);
    assert_eq!(weight_of(t, &code, &[0, 0, 1, 0, 0, 0, 0]).unwrap(), 242);
    assert_eq!(weight_of(t, &code, &[0, 0, 0, 0, 0, 1, 0]).unwrap(), 234);
    assert_eq!(weight_of(t, &code, &[0; 7]).unwrap(), 0);
}

#[test]
fn monomials_outside_the_basis_are_rejected() {
    let wb = Workbench::build(2, 1).unwrap();
    let t = wb.tower();
    let code = build_code(t, 12);
    assert_eq!(
        weight_of(t, &code, &[1, 0, 0, 0, 0, 0, 0]),
        Err(CodeError::DimensionMismatch { i: 0, j: 2, k: 12 })
    );
    assert!(matches!(
        weight_of_vector(t, &code, &[1, 2]),
        Err(CodeError::WrongLength {
            expected: 6,
            got: 2
        })
    ));
    let wb3 = Workbench::build(3, 1).unwrap();
    assert!(weight_table(&wb3, 12, WeightFamily::A0B0D0, None).is_err());
}

#[test]
fn weight_families_parse() {
    for f in [
        WeightFamily::A0B0D0,
        WeightFamily::A0B0DNonzero,
        WeightFamily::Full,
    ] {
        assert_eq!(f.name().parse::<WeightFamily>().unwrap(), f);
    }
    assert!("abc".parse::<WeightFamily>().is_err());
    assert_eq!(ClaimedWeight::Exact(3).to_string(), "=3");
    assert_eq!(ClaimedWeight::AtLeast(3).to_string(), ">=3");
}

#[test]
fn q2_spectrum_matches_brute_force() {
    let wb = Workbench::build(2, 1).unwrap();
    let t = wb.tower();
    let code = build_code(t, 12);
    let spectrum = weight_spectrum(&wb, &code).unwrap();
    assert_eq!(
        spectrum,
        Q2_SPECTRUM.into_iter().collect::<BTreeMap<_, _>>()
    );
    assert_eq!(spectrum.values().sum::<u64>(), 8u64.pow(6));
    let min = spectrum.keys().copied().filter(|&w| w > 0).min().unwrap();
    assert_eq!(min, Q2_MIN_WEIGHT);
    assert!(min >= designed_distance(&code));

    // every codeword, one at a time, with tower arithmetic
    let mut brute: BTreeMap<u64, u64> = BTreeMap::new();
    let mut v = [0u32; 6];
    for idx in 0..8u32.pow(6) {
        let mut r = idx;
        for c in v.iter_mut() {
            *c = r % 8;
            r /= 8;
        }
        *brute
            .entry(weight_of_vector(t, &code, &v).unwrap())
            .or_default() += 1;
    }
    assert_eq!(brute, spectrum);
}

#[test]
fn q2_full_family_agrees_with_spectrum() {
    let wb = Workbench::build(2, 1).unwrap();
    let table = weight_table(&wb, 12, WeightFamily::Full, None).unwrap();
    assert_eq!(table.functions, 8u64.pow(6));
    let mut by_weight: BTreeMap<u64, u64> = BTreeMap::new();
    for r in &table.rows {
        *by_weight.entry(r.weight).or_default() += r.functions;
    }
    assert_eq!(by_weight, Q2_SPECTRUM.into_iter().collect());
    assert_eq!(table.fiber_mismatches, 0);
}

#[test]
fn q3_a0b0d0_clauses() {
    let wb = Workbench::build(3, 1).unwrap();
    let table = weight_table(&wb, 27, WeightFamily::A0B0D0, None).unwrap();
    assert_eq!(table.functions, 27u64.pow(4));
    assert_eq!(table.fiber_mismatches, 0);
    assert_eq!(table.designed_distance, 216);
    for case in [
        "d0.1a", "d0.1b", "d0.1c", "d0.1d", "d0.2a", "d0.2c", "d0.2d",
    ] {
        assert!(table.case_ok(case), "{case}");
    }
    // Quadratics e x² + f x + g outside the double-root clause, and c y + g,
    // take several weights rather than a single one.
    let weights = |case: &str| -> Vec<u64> {
        table
            .rows
            .iter()
            .filter(|r| r.case == case)
            .map(|r| r.weight)
            .collect()
    };
    assert_eq!(weights("d0.1e"), vec![225, 234, 243]);
    // c y + g vanishes on the fiber N(x) = T(-g/c), of size 1 or q² + q + 1
    assert_eq!(weights("d0.2b"), vec![230, 242]);
    // rows report the smallest function attaining each weight
    let code = build_code(wb.tower(), 27);
    for r in &table.rows {
        assert_eq!(weight_of(wb.tower(), &code, &r.coeffs).unwrap(), r.weight);
    }
}

#[test]
fn precomputed_classes_give_the_same_table() {
    let wb = Workbench::build(2, 1).unwrap();
    let t = wb.tower();
    let tuples = family_tuples(t, Family::ANonzero, None).unwrap();
    let classes = surface_table(&wb, &tuples).unwrap();
    let a = weight_table(&wb, 12, WeightFamily::A0B0DNonzero, Some(&classes)).unwrap();
    let b = weight_table(&wb, 12, WeightFamily::A0B0DNonzero, None).unwrap();
    assert_eq!(a.rows.len(), b.rows.len());
    for (x, y) in a.rows.iter().zip(&b.rows) {
        assert_eq!(
            (x.case, x.weight, x.functions),
            (y.case, y.weight, y.functions)
        );
    }
    assert_eq!(a.fiber_mismatches, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn combo_weight_is_codeword_weight(combo in prop::array::uniform7(0u32..27)) {
        let wb = Workbench::build(3, 1).unwrap();
        let t = wb.tower();
        let code = build_code(t, 27);
        let mut v = vec![0u32; code.dimension()];
        for (&c, m) in combo.iter().zip(COMBO_MONOMIALS) {
            v[code.basis.position(m).unwrap()] = c;
        }
        prop_assert_eq!(weight_of(t, &code, &combo).unwrap(), weight_of_vector(t, &code, &v).unwrap());
    }
}
