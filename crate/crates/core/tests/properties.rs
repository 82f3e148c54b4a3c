use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use robreg::boosting::{max_deviation, medboost, medboost_reweight, weighted_median, BoostConfig};
use robreg::compression::{generalization_bound, verify_approximation, BoundKind};
use robreg::dimensions::{
    dual_fat_shattering, dual_fat_upper_bound, exact_min_cover_size, fat_shattering, greedy_cover, sup_distance,
    ShatterCaps,
};
use robreg::harness::{gen_instance, ClassSpec, ExperimentConfig, PerturbationSpec, PipelineSpec, TargetSpec};
use robreg::hypothesis::Aggregation;
use robreg::mw::mw_update;
use robreg::oracles::{rerm_constant, rerm_finite, violating_mass, weak_learner_check};
use robreg::pipelines::{agnostic_regression, proper_learn, realizable_regression, LearnerConfig};
use robreg::sample::{expand_pairs, inflate, robust_deviation, robust_loss};
use robreg::sparsify::sparsify;
use robreg::{
    ConstantClass, FiniteClass, Hypothesis, Instance, LabeledExample, LossMode, PerturbationMap, PointDistribution,
    WeightedEnsemble,
};

fn domain() -> impl Strategy<Value = usize> {
    2usize..8
}

/// Perturbation sets from bitmasks; each set always contains its own point.
fn perturbations(n: usize) -> impl Strategy<Value = PerturbationMap> {
    prop::collection::vec(any::<u8>(), n).prop_map(move |masks| {
        PerturbationMap::from_table((0..n).map(|x| {
            let mut set: Vec<Instance> = (0..n)
                .filter(|&z| z == x || masks[x] >> (z % 8) & 1 == 1)
                .map(Instance)
                .collect();
            set.truncate(5);
            if !set.contains(&Instance(x)) {
                set.push(Instance(x));
            }
            (Instance(x), set)
        }))
        .unwrap()
    })
}

fn sample(n: usize, max: usize) -> impl Strategy<Value = Vec<LabeledExample>> {
    prop::collection::vec((0..n, 0.0f64..=1.0), 1..=max)
        .prop_map(|v| v.into_iter().map(|(x, y)| LabeledExample::new(x, y).unwrap()).collect())
}

fn class(n: usize) -> impl Strategy<Value = FiniteClass> {
    prop::collection::vec(prop::collection::vec(0.0f64..=1.0, n), 1..10)
        .prop_map(|rows| FiniteClass::new(rows).unwrap())
}

fn problem() -> impl Strategy<Value = (usize, PerturbationMap, Vec<LabeledExample>, FiniteClass)> {
    domain().prop_flat_map(|n| (Just(n), perturbations(n), sample(n, 8), class(n)))
}

proptest! {
    #[test]
    fn inflate_identity_is_bijective(n in 1usize..10) {
        let u = PerturbationMap::identity(n);
        let s: Vec<LabeledExample> = (0..n).rev().map(|x| LabeledExample::new(x, x as f64 / 10.0).unwrap()).collect();
        let inflated = inflate(&s, &u).unwrap();
        prop_assert_eq!(inflated.len(), s.len());
        for p in &inflated {
            prop_assert_eq!(s[p.origin].x, p.z);
            prop_assert_eq!(s[p.origin].y, p.y);
        }
    }

    #[test]
    fn inflate_origin_is_first_cover((_n, u, s, _c) in problem()) {
        for p in inflate(&s, &u).unwrap() {
            prop_assert!(u.get(s[p.origin].x).unwrap().contains(&p.z));
            for earlier in &s[..p.origin] {
                prop_assert!(!u.get(earlier.x).unwrap().contains(&p.z));
            }
        }
    }

    #[test]
    fn losses_relate((_n, u, s, c) in problem(), e1 in 0.01f64..1.0, e2 in 0.01f64..1.0, p in 1.0f64..4.0) {
        let h = c.hypothesis(0);
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        for ex in &s {
            prop_assert!(robust_loss(&h, ex, &u, LossMode::EtaBall(hi)).unwrap() <= robust_loss(&h, ex, &u, LossMode::EtaBall(lo)).unwrap());
            let l1 = robust_loss(&h, ex, &u, LossMode::Lp(1.0)).unwrap();
            let lp = robust_loss(&h, ex, &u, LossMode::Lp(p)).unwrap();
            prop_assert!((l1.powf(p) - lp).abs() <= 1e-12);
        }
    }

    #[test]
    fn singleton_sets_give_plain_loss((n, _u, s, c) in problem(), eta in 0.01f64..1.0) {
        let u = PerturbationMap::identity(n);
        let h = c.hypothesis(0);
        for ex in &s {
            let plain = (h.eval(ex.x) - ex.y).abs();
            prop_assert_eq!(robust_loss(&h, ex, &u, LossMode::Lp(1.0)).unwrap(), plain);
            prop_assert_eq!(robust_loss(&h, ex, &u, LossMode::EtaBall(eta)).unwrap(), f64::from(u8::from(plain >= eta)));
        }
    }

    #[test]
    fn rerm_finite_contract_and_monotone((_n, u, s, c) in problem(), eta in 0.01f64..0.9, bump in 0.0f64..0.1) {
        if let Ok(h) = rerm_finite(&c, &s, &u, eta) {
            for ex in &s {
                prop_assert!(robust_deviation(&h, ex, &u).unwrap() <= eta);
            }
            prop_assert!(rerm_finite(&c, &s, &u, eta + bump).is_ok());
        }
    }

    #[test]
    fn rerm_constant_matches_grid((n, u, s, _c) in problem(), eta in 0.01f64..0.5) {
        let grid = FiniteClass::new((0..=1000).map(|j| vec![j as f64 / 1000.0; n]).collect()).unwrap();
        let exact = rerm_constant(&s, &u, eta);
        if exact.is_ok() {
            prop_assert!(rerm_finite(&grid, &s, &u, eta + 1e-3).is_ok());
        }
        if rerm_finite(&grid, &s, &u, eta).is_ok() {
            prop_assert!(exact.is_ok());
        }
    }

    #[test]
    fn weak_check_follows_from_small_error((_n, u, s, c) in problem(), eta in 0.01f64..0.9, w in prop::collection::vec(0.01f64..1.0, 64)) {
        let pts = inflate(&s, &u).unwrap();
        let p = PointDistribution::normalized(w[..pts.len()].to_vec()).unwrap();
        let h = c.hypothesis(0);
        let err = p.mass_where(|i| (h.eval(pts[i].z) - pts[i].y).abs() >= eta);
        prop_assert!(violating_mass(&h, &p, &pts, eta) <= err);
        if err < 0.5 - 1e-9 {
            prop_assert!(weak_learner_check(&h, &p, &pts, eta, 0.0));
        }
    }

    #[test]
    fn fat_monotone_and_log_bounded(c in domain().prop_flat_map(class), g1 in 0.01f64..0.5, g2 in 0.01f64..0.5) {
        let caps = ShatterCaps::default();
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let f_lo = fat_shattering(&c, lo, caps).unwrap();
        let f_hi = fat_shattering(&c, hi, caps).unwrap();
        prop_assert!(f_hi <= f_lo);
        prop_assert!((1usize << f_lo) <= c.len());
        let dual = dual_fat_shattering(&c, hi, caps).unwrap();
        let half = fat_shattering(&c, hi / 2.0, caps).unwrap();
        prop_assert!(dual as f64 <= dual_fat_upper_bound(half, hi, 4.0));
    }

    #[test]
    fn greedy_cover_certified_and_near_optimal(
        pts in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 1..10),
        t in 0.01f64..0.6,
    ) {
        let cover = greedy_cover(&pts, t);
        for (i, p) in pts.iter().enumerate() {
            prop_assert!(sup_distance(p, &pts[cover.assignment[i]]) <= t);
        }
        let opt = exact_min_cover_size(&pts, t, 12).unwrap();
        prop_assert!(cover.len() as f64 <= (1.0 + (pts.len() as f64).ln()) * opt as f64);
    }

    #[test]
    fn median_translation_invariant(
        vw in prop::collection::vec((0.0f64..1.0, 0.01f64..1.0), 1..12),
        y in 0.0f64..1.0,
    ) {
        let (v, w): (Vec<f64>, Vec<f64>) = vw.into_iter().unzip();
        let shifted: Vec<f64> = v.iter().map(|a| a - y).collect();
        let a = weighted_median(&shifted, &w).unwrap();
        let b = weighted_median(&v, &w).unwrap() - y;
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn reweighting_stays_normalized(
        w in prop::collection::vec(0.01f64..1.0, 1..20),
        signs in prop::collection::vec(any::<bool>(), 20),
        alpha in 0.0f64..5.0,
    ) {
        let p = PointDistribution::normalized(w.clone()).unwrap();
        let s: Vec<i8> = signs[..w.len()].iter().map(|&b| if b { 1 } else { -1 }).collect();
        let q = medboost_reweight(&p, &s, alpha).unwrap();
        prop_assert!((q.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn mw_update_keeps_support((_n, u, s, c) in problem(), eta in 0.05f64..0.9, xi in 0.01f64..5.0) {
        let pts = inflate(&s, &u).unwrap();
        let p = PointDistribution::uniform(pts.len());
        let q = mw_update(&p, &c.hypothesis(0), &pts, eta, xi).unwrap();
        prop_assert!(q.weights().iter().all(|&w| w > 0.0));
        prop_assert!((q.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn bounds_monotone(m in 6usize..5000, kf in 0.0f64..1.0, delta in 0.01f64..0.9, emp in 0.0f64..=1.0, c in 0.1f64..4.0) {
        let k = 1 + ((m / 2 - 2) as f64 * kf) as usize;
        for kind in [BoundKind::Realizable, BoundKind::Agnostic, BoundKind::Bernstein] {
            let b = |k, m, d| generalization_bound(kind, k, m, d, emp, c).unwrap();
            prop_assert!(b(k, m + 1, delta) <= b(k, m, delta));
            prop_assert!(b(k + 1, m, delta) >= b(k, m, delta));
            prop_assert!(b(k, m, delta / 2.0) >= b(k, m, delta));
        }
        let r = generalization_bound(BoundKind::Realizable, k, m, delta, emp, c).unwrap();
        let a = generalization_bound(BoundKind::Agnostic, k, m, delta, emp, c).unwrap();
        let bern = generalization_bound(BoundKind::Bernstein, k, m, delta, emp, c).unwrap();
        prop_assert!(bern <= a + r + 1e-12);
    }

    #[test]
    fn approximation_flags_agree((_n, u, s, c) in problem(), eta in 0.01f64..1.0) {
        let h = c.hypothesis(0);
        let a = verify_approximation(&h, &s, &u, eta).unwrap();
        if a.rate == 0.0 {
            prop_assert!(a.uniform);
        }
        if a.uniform {
            for ex in &s {
                let d = robust_deviation(&h, ex, &u).unwrap();
                if d >= eta {
                    prop_assert_eq!(d, eta);
                }
            }
        }
    }

    #[test]
    fn sparsified_median_inside_tube(
        values in prop::collection::vec(0.3f64..0.7, 3..15),
        alphas in prop::collection::vec(0.1f64..2.0, 15),
        k in (0usize..4).prop_map(|j| 2 * j + 1),
        seed in any::<u64>(),
    ) {
        let t = values.len();
        let members: Vec<Hypothesis> = values.iter().map(|&v| Hypothesis::constant(v)).collect();
        let e = WeightedEnsemble::new(members, alphas[..t].to_vec(), vec![vec![0]; t], Aggregation::WeightedMedian).unwrap();
        let u = PerturbationMap::grid_ball(4, 1);
        let s: Vec<LabeledExample> = (0..4).map(|x| LabeledExample::new(x, 0.5).unwrap()).collect();
        let pairs = expand_pairs(&s, &u).unwrap();
        let eta = 0.15;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Ok(sp) = sparsify(&e, &pairs, eta, k, 50, &mut rng) {
            let h = sp.ensemble.to_hypothesis();
            for p in &pairs {
                prop_assert!((h.eval(p.z) - p.y).abs() <= eta);
            }
            prop_assert_eq!(sp.ensemble.len(), k);
        }
    }
}

fn walk_config(pipeline: PipelineSpec, member: usize, noise: f64) -> ExperimentConfig {
    ExperimentConfig {
        class: ClassSpec::RandomWalk {
            domain_size: 24,
            rows: 20,
            step: 0.01,
        },
        perturbation: PerturbationSpec::GridBall { radius: 1 },
        target: TargetSpec {
            member,
            value: 0.5,
            noise,
        },
        pipeline,
        learner: LearnerConfig::default(),
        m_grid: vec![20],
        trials: 1,
        holdout: 60,
        fit_tol: None,
        seed: 0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_samples_are_feasible(seed in any::<u64>(), member in 0usize..20, eta in 0.1f64..0.5) {
        let cfg = walk_config(PipelineSpec::Improper { eta }, member, 0.0);
        let inst = gen_instance(&cfg, 20, seed).unwrap();
        prop_assert!(rerm_finite(inst.class.finite().unwrap(), &inst.sample, &inst.u, eta / 8.0).is_ok());
    }

    #[test]
    fn medboost_median_within_quarter_tube(seed in any::<u64>(), member in 0usize..20) {
        let eta = 0.2;
        let cfg = walk_config(PipelineSpec::Improper { eta }, member, 0.0);
        let inst = gen_instance(&cfg, 15, seed).unwrap();
        let cover = inflate(&inst.sample, &inst.u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let class = inst.class.as_class();
        if let Ok(run) = medboost(&cover, &inst.sample, &inst.u, eta, 64, class, &BoostConfig::default(), &mut rng) {
            if run.converged {
                prop_assert!(max_deviation(&run.ensemble, &cover) <= eta / 4.0);
            }
        }
    }

    #[test]
    fn proper_learner_on_constants_is_proper(labels in prop::collection::vec(0.4f64..0.45, 4..12), seed in any::<u64>()) {
        let n = labels.len();
        let u = PerturbationMap::grid_ball(n, 1);
        let s: Vec<LabeledExample> = labels.iter().enumerate().map(|(x, &y)| LabeledExample::new(x, y).unwrap()).collect();
        let r = proper_learn(&ConstantClass, &s, &u, 0.2, 0.1, &LearnerConfig::default(), seed).unwrap();
        let member = r.proper_member.expect("constants are closed under averaging");
        for x in 0..n {
            prop_assert!((member.eval(Instance(x)) - r.hypothesis.eval(Instance(x))).abs() <= 1e-12);
        }
        let chain = r.chain.unwrap();
        prop_assert!(chain.cover <= 0.1 && chain.inflated <= 0.1 && chain.robust <= 0.1);
    }

    #[test]
    fn regression_lp_within_markov(seed in any::<u64>(), member in 0usize..20, p in 1.0f64..3.0) {
        let epsilon = 0.1;
        let cfg = walk_config(PipelineSpec::Regress { epsilon, p }, member, 0.0);
        let inst = gen_instance(&cfg, 20, seed).unwrap();
        let r = realizable_regression(inst.class.as_class(), &inst.sample, &inst.u, epsilon, p, &LearnerConfig::default(), seed).unwrap();
        prop_assert!(r.emp_lp_err <= r.emp_eta_err + r.eta.powf(p) + 1e-12);
    }

    #[test]
    fn agnostic_regression_selects_argmin(seed in any::<u64>(), member in 0usize..20) {
        let cfg = walk_config(PipelineSpec::AgnosticRegress { epsilon: 0.3, delta: 0.1, p: 1.0 }, member, 0.1);
        let inst = gen_instance(&cfg, 30, seed).unwrap();
        let r = agnostic_regression(inst.class.as_class(), &inst.sample, &inst.holdout, &inst.u, 0.3, 0.1, 1.0, &LearnerConfig::default(), seed).unwrap();
        let chosen = r.holdout_eta_err.unwrap();
        for g in r.grid.unwrap() {
            if let Some(e) = g.holdout_err {
                prop_assert!(chosen <= e);
            }
        }
    }
}

#[test]
fn categorical_sampler_frequencies() {
    let alphas = [0.5, 1.5, 3.0, 0.25, 2.0];
    let total: f64 = alphas.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws = 100_000;
    let picks = robreg::sparsify::draw_members(&alphas, draws, &mut rng).unwrap();
    let mut counts = [0usize; 5];
    for t in picks {
        counts[t] += 1;
    }
    for (i, &a) in alphas.iter().enumerate() {
        let q = a / total;
        let sd = (draws as f64 * q * (1.0 - q)).sqrt();
        assert!(
            (counts[i] as f64 - draws as f64 * q).abs() <= 3.0 * sd,
            "coordinate {i}: {} vs {}",
            counts[i],
            draws as f64 * q
        );
    }
}
