use knent::qalgebra::{pseudo_add, pseudo_sum, q_exp, q_log, QParam};
use proptest::prelude::*;

fn q_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![0.05f64..5.0, Just(1.0), (-1e-6f64..1e-6).prop_map(|d| 1.0 + d)]
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    // Far from q = 1, ln_q of a large (q > 1) argument sits next to the pole
    // 1/(q-1) and carries only the absolute rounding of that constant, so
    // both identities are tested where f64 can represent them.
    #[test]
    fn q_log_turns_products_into_pseudo_sums(x in log_uniform(1e-2, 1e2), y in log_uniform(1e-2, 1e2), qv in prop_oneof![0.05f64..3.0, q_strategy()].prop_filter("q <= 3", |q| *q <= 3.0)) {
        let q = QParam::new(qv).unwrap();
        let lhs = q_log(x * y, q).unwrap();
        let rhs = pseudo_add(q_log(x, q).unwrap(), q_log(y, q).unwrap(), q);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn q_exp_inverts_q_log(x in log_uniform(1e-6, 1e6), qv in 0.5f64..1.5) {
        let q = QParam::new(qv).unwrap();
        let back = q_exp(q_log(x, q).unwrap(), q).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x, "x={x} q={qv} back={back}");
    }

    #[test]
    fn q_exp_inverts_q_log_far_from_one(x in log_uniform(1e-6, 1e6), qv in 0.05f64..5.0) {
        // x^{1-q} is the distance of ln_q x from the pole; keep it away from 0
        prop_assume!(x.powf(1.0 - qv) >= 1e-4);
        let q = QParam::new(qv).unwrap();
        let back = q_exp(q_log(x, q).unwrap(), q).unwrap();
        prop_assert!((back - x).abs() <= 1e-10 * x, "x={x} q={qv} back={back}");
    }

    #[test]
    fn pseudo_sums_on_a_narrow_range(x in 0.2f64..5.0, y in 0.2f64..5.0, qv in 0.05f64..5.0) {
        let q = QParam::new(qv).unwrap();
        let lhs = q_log(x * y, q).unwrap();
        let rhs = pseudo_add(q_log(x, q).unwrap(), q_log(y, q).unwrap(), q);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()), "{lhs} vs {rhs}");
    }

    #[test]
    fn continuous_at_one(x in 0.1f64..10.0, sign in prop::bool::ANY) {
        let q = QParam::new(if sign { 1.0 + 1e-6 } else { 1.0 - 1e-6 }).unwrap();
        prop_assert!((q_log(x, q).unwrap() - x.ln()).abs() <= 1e-5);
    }

    #[test]
    fn pseudo_add_commutes_and_associates(x in -10.0f64..10.0, y in -10.0f64..10.0, z in -10.0f64..10.0, qv in 0.05f64..5.0) {
        let q = QParam::new(qv).unwrap();
        prop_assert_eq!(pseudo_add(x, y, q), pseudo_add(y, x, q));
        let left = pseudo_add(pseudo_add(x, y, q), z, q);
        let right = pseudo_add(x, pseudo_add(y, z, q), q);
        prop_assert!((left - right).abs() <= 1e-12 * (1.0 + left.abs()), "{left} vs {right}");
    }

    #[test]
    fn pseudo_sum_of_q_logs_is_q_log_of_product(xs in prop::collection::vec(log_uniform(0.1, 10.0), 1..6), qv in 0.2f64..3.0) {
        let q = QParam::new(qv).unwrap();
        let logs: Vec<f64> = xs.iter().map(|&x| q_log(x, q).unwrap()).collect();
        let lhs = pseudo_sum(&logs, q).unwrap();
        let rhs = q_log(xs.iter().product(), q).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }
}

/// Independent reference: `(x^{1-q} - 1)/(1 - q)` straight from `powf`,
/// away from q = 1 where it is well conditioned.
#[test]
fn matches_powf_reference() {
    for &qv in &[0.25, 0.5, 2.0, 3.0] {
        let q = QParam::new(qv).unwrap();
        for &x in &[0.01, 0.5, 1.0, 2.0, 37.0] {
            let reference = (f64::powf(x, 1.0 - qv) - 1.0) / (1.0 - qv);
            assert!((q_log(x, q).unwrap() - reference).abs() <= 1e-13 * (1.0 + reference.abs()));
            let y = 0.3;
            let reference = f64::powf(1.0 + (1.0 - qv) * y, 1.0 / (1.0 - qv));
            assert!((q_exp(y, q).unwrap() - reference).abs() <= 1e-13 * reference);
        }
    }
}
