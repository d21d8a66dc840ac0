use plusrank_core::analytic::{lhs_dirichlet, rhs_dirichlet, BracketMode};
use plusrank_core::halfint::{
    iota1, jacobi_cusp_index1, jacobi_eisenstein_1, kohnen_tp2, plus_eigenvalue, CohenEisenstein,
    JacobiIndex1Form, PlusSpaceForm,
};
use plusrank_core::modforms::eigenform;
use plusrank_core::Rational;

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn weight_twelve_plus_form_is_hecke_eigen() {
    let g = iota1(&jacobi_cusp_index1(12, 1200).unwrap());
    let f = eigenform(22, 20).unwrap();
    assert_eq!(g.half_weight_num, 23);
    assert_eq!(g.coeff(3), &int(1));
    assert_eq!(g.coeff(4), &int(10));
    for p in [3, 5] {
        let image = kohnen_tp2(&g, g.kappa(), p).unwrap();
        assert_eq!(plus_eigenvalue(&g, &image), Some(Rational::from_integer(f.a(p as usize))));
    }
}

#[test]
fn eisenstein_plus_form_has_divisor_sum_eigenvalues() {
    // T(p^2) on the Cohen–Eisenstein series of weight k - 1/2 has eigenvalue 1 + p^(2k-3).
    let k = 8;
    let g = iota1(&jacobi_eisenstein_1(k, 500).unwrap());
    let mut ce = CohenEisenstein::new(k).unwrap();
    assert_eq!(g.coeff(7), &ce.h(7).unwrap());
    let image = kohnen_tp2(&g, k as i64 - 1, 3).unwrap();
    let expected = int(1) + int(3).pow(2 * k as i32 - 3);
    assert_eq!(plus_eigenvalue(&g, &image), Some(expected));
}

#[test]
fn cached_forms_survive_json() {
    let phi = jacobi_cusp_index1(14, 200).unwrap();
    let text = serde_json::to_string(&phi).unwrap();
    let back: JacobiIndex1Form = serde_json::from_str(&text).unwrap();
    assert_eq!(back, phi);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    let g = iota1(&phi);
    let back: PlusSpaceForm = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
    assert_eq!(back, g);
}

#[test]
fn truncation_changes_stay_within_reported_tails() {
    let k = 10;
    let g = iota1(&jacobi_cusp_index1(k, 2400).unwrap());
    let f = eigenform(18, 2000).unwrap();
    for s in [2.5, 3.0] {
        let small = lhs_dirichlet(&g, k, s, 1200).unwrap();
        let large = lhs_dirichlet(&g, k, s, 2400).unwrap();
        assert!((large.value - small.value).abs() <= small.tail, "lhs at s={s}");

        let small = rhs_dirichlet(&g, &f, k, s, 1200, 500, BracketMode::Full).unwrap();
        let more_d = rhs_dirichlet(&g, &f, k, s, 2400, 500, BracketMode::Full).unwrap();
        let more_p = rhs_dirichlet(&g, &f, k, s, 1200, 2000, BracketMode::Full).unwrap();
        assert!((more_d.value - small.value).abs() <= small.tail, "rhs dmax at s={s}");
        assert!((more_p.value - small.value).abs() <= small.tail, "rhs pmax at s={s}");
    }
}
