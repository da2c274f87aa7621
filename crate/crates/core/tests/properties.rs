mod common;

use attnet::imitation::{apply_imitation, evaluate_pair, ImitationSpec};
use attnet::matrix::Matrix;
use attnet::network::{build_network, generate, CompetitionNetwork, FeatureProfile, GeneratorSpec, NetworkKind};
use attnet::spectral::{compute_mu, dominant_eigenpair, SpectralSummary};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = NetworkKind> {
    prop_oneof![
        Just(NetworkKind::Sparse),
        Just(NetworkKind::Dense),
        Just(NetworkKind::Heterogeneous)
    ]
}

fn network() -> impl Strategy<Value = CompetitionNetwork> {
    (kind(), 3usize..16, any::<u64>())
        .prop_map(|(k, n, seed)| generate(&GeneratorSpec::new(k, n, seed)).unwrap())
}

fn check_invariants(net: &CompetitionNetwork) {
    let w = net.weights();
    for i in 0..net.n_nodes() {
        assert_eq!(w.get(i, i), 0.0);
        for j in 0..net.n_nodes() {
            assert_eq!(w.get(i, j), w.get(j, i));
            assert!((0.0..=1.0).contains(&w.get(i, j)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_networks_satisfy_invariants(net in network()) {
        check_invariants(&net);
        for p in net.profiles().unwrap() {
            let norm: f64 = p.components().iter().map(|x| x * x).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn build_network_is_permutation_equivariant(
        vecs in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 5), 3..9),
        shuffle_seed in any::<u64>(),
    ) {
        prop_assume!(vecs.iter().all(|v| v.iter().any(|x| x.abs() > 1e-3)));
        let n = vecs.len();
        let profiles: Vec<_> = vecs.iter().enumerate()
            .map(|(i, v)| FeatureProfile::new(i, v.clone()).unwrap())
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = shuffle_seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let net = build_network(profiles.clone()).unwrap();
        check_invariants(&net);
        let relabeled = build_network(perm.iter().map(|&p| profiles[p].clone()).collect()).unwrap();
        prop_assert_eq!(relabeled.weights(), &net.weights().permuted(&perm));
    }

    #[test]
    fn centrality_is_permutation_equivariant(net in network(), rot in 1usize..16) {
        let n = net.n_nodes();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let v = dominant_eigenpair(&net).unwrap().vector;
        let pv = dominant_eigenpair(&net.permuted(&perm).unwrap()).unwrap().vector;
        for i in 0..n {
            prop_assert!((pv[i] - v[perm[i]]).abs() < 1e-8);
        }
    }

    #[test]
    fn spectral_summary_invariants(net in network()) {
        let s = SpectralSummary::of(&net).unwrap();
        prop_assert!(s.v_unit.iter().all(|x| *x >= 0.0));
        let norm: f64 = s.v_unit.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-10);
        prop_assert!((s.v_sum1.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let dmin = s.degrees.iter().cloned().fold(f64::MAX, f64::min);
        let dmax = s.degrees.iter().cloned().fold(f64::MIN, f64::max);
        prop_assert!(dmin - 1e-8 <= s.lambda && s.lambda <= dmax + 1e-8);
        let wv = net.weights().mul_vec(&s.v_unit);
        let res: f64 = wv.iter().zip(&s.v_unit).map(|(a, b)| (a - s.lambda * b).powi(2)).sum::<f64>().sqrt();
        prop_assert!(res <= 1e-8);
        for (i, row) in net.weights().rows().enumerate() {
            prop_assert!((s.degrees[i] - row.iter().sum::<f64>()).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_leaves_vector_and_mu_unchanged(net in network(), scale in 0.05f64..1.0) {
        let scaled = CompetitionNetwork::from_weights(net.weights().scaled(scale)).unwrap();
        let a = dominant_eigenpair(&net).unwrap();
        let b = dominant_eigenpair(&scaled).unwrap();
        prop_assume!(a.lambda > 0.0);
        prop_assert!((b.lambda - scale * a.lambda).abs() < 1e-8);
        for (x, y) in a.vector.iter().zip(&b.vector) {
            prop_assert!((x - y).abs() < 1e-8);
        }
        let mu_a = compute_mu(&net, a.lambda, &a.vector).unwrap();
        let mu_b = compute_mu(&scaled, b.lambda, &b.vector).unwrap();
        prop_assert!((mu_a - mu_b).abs() < 1e-8);
    }

    #[test]
    fn imitation_touches_only_imitator(net in network(), i in 0usize..16, t in 1usize..16, sigma in 0.0f64..1.0, seed in any::<u64>()) {
        let n = net.n_nodes();
        let iota = i % n;
        let tau = (iota + 1 + t % (n - 1)) % n;
        let spec = ImitationSpec { noise_sigma: sigma, ..ImitationSpec::exact(iota, tau) };
        let after = apply_imitation(&net, &spec, seed).unwrap();
        check_invariants(&after);
        for a in (0..n).filter(|&a| a != iota) {
            for b in (0..n).filter(|&b| b != iota) {
                prop_assert_eq!(after.weight(a, b), net.weight(a, b));
            }
        }
    }

    #[test]
    fn outcome_delta_is_difference(net in network(), i in 0usize..16) {
        let n = net.n_nodes();
        let spec = ImitationSpec::exact(i % n, (i + 1) % n);
        let o = evaluate_pair(&net, &spec, 0).unwrap();
        prop_assert_eq!(o.delta_exact, o.lambda_after - o.lambda_before);
    }
}

#[test]
fn oracle_equivalence_small_networks() {
    for seed in 0..20u64 {
        for kind in NetworkKind::ALL {
            let n = 2 + (seed as usize % 7);
            let net = generate(&GeneratorSpec::new(kind, n, seed)).unwrap();
            let s = SpectralSummary::of(&net).unwrap();
            let (lambda, _) = common::jacobi::dominant(&net.weights().to_rows());
            assert!((s.lambda - lambda).abs() <= 1e-8, "{kind} n={n} seed={seed}");
        }
    }
}

#[test]
fn raw_matrix_network_has_no_profiles_for_imitation() {
    let w = Matrix::from_rows(&[vec![0.0, 0.4, 0.1], vec![0.4, 0.0, 0.2], vec![0.1, 0.2, 0.0]]).unwrap();
    let net = CompetitionNetwork::from_weights(w).unwrap();
    assert!(SpectralSummary::of(&net).is_ok());
    assert!(matches!(
        evaluate_pair(&net, &ImitationSpec::exact(0, 1), 0),
        Err(attnet::Error::Structural(_))
    ));
}
