mod common;

use common::*;
use cptdp::bellman::{apply_h, apply_policy, bellman_min, SolveConfig};
use cptdp::estimator::{estimate_cpt, SampleBatch};
use cptdp::generators::{GeneratedMode, InstanceGenerator};
use cptdp::mdp::{pliska_check, RandomizedPolicy};
use cptdp::seed::rng_for;
use cptdp::{cpt_value_exact, cpt_value_quadrature, CptSpec, DiscreteDistribution, MarkovModel, ValueFunction};
use proptest::prelude::*;
use rand::Rng;

fn spec_for(seed: u64) -> CptSpec {
    random_spec(&mut rng_for(seed, &[7]))
}

fn atoms_strategy() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0f64..10.0, 0.01f64..1.0), 1..8).prop_map(|raw| {
        let total: f64 = raw.iter().map(|r| r.1).sum();
        let mut atoms: Vec<(f64, f64)> = raw.iter().map(|&(v, m)| (v, m / total)).collect();
        let k = atoms.len();
        let head: f64 = atoms[..k - 1].iter().map(|a| a.1).sum();
        atoms[k - 1].1 = 1.0 - head;
        atoms
    })
}

fn small_model(seed: u64, transient: bool) -> MarkovModel {
    let mode = if transient {
        GeneratedMode::Transient { exit_mass: 0.3 }
    } else {
        GeneratedMode::Discounted { alpha: 0.8 }
    };
    InstanceGenerator::RandomMdp {
        n_states: 4,
        n_actions: 3,
        n_disturbances: 3,
        cost_range: (-1.0, 1.0),
        mode,
    }
    .generate(seed)
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_matches_quadrature(atoms in atoms_strategy(), s in any::<u64>()) {
        let d = DiscreteDistribution::new(atoms).unwrap();
        let spec = spec_for(s);
        let exact = cpt_value_exact(&d, &spec).unwrap();
        let quad = cpt_value_quadrature(&d, &spec, 1e-10).unwrap();
        prop_assert!((exact - quad).abs() <= 1e-9, "{} vs {}", exact, quad);
    }

    #[test]
    fn splitting_an_atom_changes_nothing(atoms in atoms_strategy(), s in any::<u64>(), frac in 0.0f64..1.0) {
        let spec = spec_for(s);
        let whole = cpt_value_exact(&DiscreteDistribution::new(atoms.clone()).unwrap(), &spec).unwrap();
        let (v, m) = atoms[0];
        let mut split = atoms[1..].to_vec();
        split.push((v, m * frac));
        split.push((v, m - m * frac));
        let parts = cpt_value_exact(&DiscreteDistribution::new(split).unwrap(), &spec).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs().max(1.0));
    }

    #[test]
    fn raising_an_outcome_raises_the_value(atoms in atoms_strategy(), s in any::<u64>(), bump in 0.0f64..5.0, pick in any::<prop::sample::Index>()) {
        let spec = spec_for(s);
        let before = cpt_value_exact(&DiscreteDistribution::new(atoms.clone()).unwrap(), &spec).unwrap();
        let mut raised = atoms;
        let i = pick.index(raised.len());
        raised[i].0 += bump;
        let after = cpt_value_exact(&DiscreteDistribution::new(raised).unwrap(), &spec).unwrap();
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn estimator_ignores_sample_order(samples in prop::collection::vec(-5.0f64..5.0, 1..60), s in any::<u64>()) {
        let spec = spec_for(s);
        let a = estimate_cpt(&SampleBatch::new(samples.clone(), 0, "a").unwrap(), &spec);
        let mut rev = samples;
        rev.reverse();
        let b = estimate_cpt(&SampleBatch::new(rev, 0, "b").unwrap(), &spec);
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(a.value, a.positive_part - a.negative_part);
    }

    #[test]
    fn estimator_is_monotone_in_samples(samples in prop::collection::vec(-5.0f64..5.0, 1..60), s in any::<u64>(), bump in 0.0f64..3.0, pick in any::<prop::sample::Index>()) {
        let spec = spec_for(s);
        let before = estimate_cpt(&SampleBatch::new(samples.clone(), 0, "x").unwrap(), &spec).value;
        let mut raised = samples;
        let i = pick.index(raised.len());
        raised[i] += bump;
        let after = estimate_cpt(&SampleBatch::new(raised, 0, "x").unwrap(), &spec).value;
        prop_assert!(after >= before - 1e-12);
    }

    #[test]
    fn risk_neutral_estimate_is_the_sample_mean(samples in prop::collection::vec(-100.0f64..100.0, 1..200), b in -3.0f64..3.0) {
        let mut spec = CptSpec::risk_neutral();
        spec.reference_point = b;
        let batch = SampleBatch::new(samples, 0, "x").unwrap();
        let est = estimate_cpt(&batch, &spec).value;
        prop_assert!((est - (batch.mean() - b)).abs() <= 1e-12 * batch.mean().abs().max(1.0));
    }

    #[test]
    fn identity_weightings_make_h_affine_in_the_mix(seed in 0u64..1000, lambda in 0.0f64..1.0) {
        let model = small_model(seed, seed % 2 == 0);
        let mut rng = rng_for(seed, &[1]);
        let j = ValueFunction::new((0..model.num_states()).map(|x| if model.is_absorbing(x) { 0.0 } else { rng.gen_range(-3.0..3.0) }).collect()).unwrap();
        let mut spec = CptSpec::risk_neutral();
        spec.u_minus = cptdp::UtilityFunction::scaled(cptdp::UtilityFunction::Identity, 2.0).unwrap();
        let a = [1.0, 0.0, 0.0];
        let b = [0.0, 0.3, 0.7];
        let mixed: Vec<f64> = a.iter().zip(&b).map(|(p, q)| lambda * p + (1.0 - lambda) * q).collect();
        let ha = apply_h(&model, 0, &a, &j, &spec).unwrap();
        let hb = apply_h(&model, 0, &b, &j, &spec).unwrap();
        let hm = apply_h(&model, 0, &mixed, &j, &spec).unwrap();
        prop_assert!((hm - (lambda * ha + (1.0 - lambda) * hb)).abs() <= 1e-12);
    }

    #[test]
    fn search_never_loses_to_a_vertex(seed in 0u64..1000) {
        let model = small_model(seed, false);
        let spec = loss_averse_spec();
        let j = ValueFunction::zeros(model.num_states());
        let choice = bellman_min(&model, 1, &j, &spec, &SolveConfig::default()).unwrap();
        for a in 0..3 {
            let mut mix = vec![0.0; 3];
            mix[a] = 1.0;
            prop_assert!(choice.value <= apply_h(&model, 1, &mix, &j, &spec).unwrap());
        }
        let total: f64 = choice.mix.iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12 && choice.mix.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn policy_operator_is_monotone(seed in 0u64..1000) {
        let model = small_model(seed, seed % 2 == 1);
        let spec = tk_spec(0.61, 0.69);
        let mut rng = rng_for(seed, &[2]);
        let lo: Vec<f64> = (0..model.num_states()).map(|x| if model.is_absorbing(x) { 0.0 } else { rng.gen_range(-3.0..3.0) }).collect();
        let hi: Vec<f64> = lo.iter().enumerate().map(|(x, v)| if model.is_absorbing(x) { 0.0 } else { v + rng.gen_range(0.0..2.0) }).collect();
        let policy = RandomizedPolicy::uniform(&model);
        let tlo = apply_policy(&model, &policy, &ValueFunction::new(lo).unwrap(), &spec).unwrap();
        let thi = apply_policy(&model, &policy, &ValueFunction::new(hi).unwrap(), &spec).unwrap();
        for (a, b) in tlo.values().iter().zip(thi.values()) {
            prop_assert!(*a <= b + 1e-10);
        }
    }

    #[test]
    fn pliska_sums_grow_with_horizon(seed in 0u64..1000, h in 1usize..40) {
        let model = small_model(seed, true);
        let policy = RandomizedPolicy::uniform(&model);
        let short = pliska_check(&model, &policy, h, 1e-12).unwrap();
        let long = pliska_check(&model, &policy, h + 1, 1e-12).unwrap();
        prop_assert!(long.bound >= short.bound);
        for (a, b) in short.per_state.iter().zip(&long.per_state) {
            prop_assert!(b >= a);
        }
    }
}
