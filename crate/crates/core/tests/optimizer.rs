use exitplan::accuracy::{accuracy_model, FeatureProfile, QuantizerSpec};
use exitplan::optimizer::{brute_force, solve_cr, solve_discrete, ExitSet, Plan};
use exitplan::system::{comm_latency, epr, ComputeProfile, LinkState};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Instance {
    link: LinkState,
    comp: ComputeProfile,
    profile: FeatureProfile,
    spec: QuantizerSpec,
    nested: Vec<ExitSet>,
    p0: f64,
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let layers = 39;
    let profile = FeatureProfile::new(
        rng.random_range(2..=20),
        rng.random_range(0.1..1.0),
        rng.random_range(0.0..2.0),
        rng.random_range(10.0..600.0),
        rng.random_range(0.01..0.3),
        layers,
    )
    .unwrap();
    let link = LinkState::with_snr_db(
        1e8,
        rng.random_range(-5.0..30.0),
        rng.random_range(0.002..0.02),
        rng.random_range(20_000..200_000),
    )
    .unwrap();
    let comp =
        ComputeProfile::new(rng.random_range(0.0..5e-4), rng.random_range(0.0..5e-3)).unwrap();
    let spec = if rng.random_bool(0.5) {
        QuantizerSpec::full(0.0, rng.random_range(0.5..4.0), 32).unwrap()
    } else {
        QuantizerSpec::new(-1.0, 1.0, 32, vec![0, 2, 4, 6, 8, 12, 16, 24, 32]).unwrap()
    };
    let mut pool: Vec<usize> = (1..=layers).collect();
    pool.shuffle(rng);
    let mut nested = Vec::new();
    for size in [1, 2, 4, 7] {
        let mut layers_: Vec<usize> = pool[..size].to_vec();
        layers_.sort_unstable();
        nested.push(ExitSet::new(layers_, layers).unwrap());
    }
    let floor = 1.0 / profile.classes as f64;
    let p0 = rng.random_range(floor + 0.01..0.97);
    Instance {
        link,
        comp,
        profile,
        spec,
        nested,
        p0,
    }
}

fn assert_constraints(plan: &Plan, inst: &Instance, p0: f64) {
    assert!(comm_latency(plan.q, &inst.link).unwrap() <= inst.link.t_max_s * (1.0 + 1e-12));
    if plan.feasible {
        let acc = accuracy_model(plan.q, plan.ell, &inst.profile, &inst.spec).unwrap();
        assert!(acc >= p0, "{acc} < {p0}");
        assert_eq!(plan.predicted_accuracy, acc);
        let e = epr(plan.q, plan.ell, &inst.link, &inst.comp).unwrap();
        assert!((e - plan.epr).abs() <= 1e-12 * e.max(1.0));
    } else {
        assert_eq!(plan.epr, 0.0);
    }
}

#[test]
fn decomposition_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut feasible = 0;
    for _ in 0..250 {
        let inst = random_instance(&mut rng);
        for exits in &inst.nested {
            let fast = solve_discrete(
                &inst.link,
                &inst.comp,
                &inst.profile,
                &inst.spec,
                exits,
                inst.p0,
            )
            .unwrap();
            let slow = brute_force(
                &inst.link,
                &inst.comp,
                &inst.profile,
                &inst.spec,
                exits,
                inst.p0,
            )
            .unwrap();
            assert_eq!(
                (fast.q, fast.ell, fast.feasible),
                (slow.q, slow.ell, slow.feasible)
            );
            feasible += usize::from(fast.feasible);
            assert_constraints(&fast, &inst, inst.p0);
        }
    }
    // the sample must exercise both outcomes
    assert!(feasible > 100 && feasible < 900, "{feasible}");
}

#[test]
fn relaxation_dominates_and_nesting_orders() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let inst = random_instance(&mut rng);
        let cr = solve_cr(&inst.link, &inst.comp, &inst.profile, &inst.spec, inst.p0).unwrap();
        let mut prev = 0.0;
        for exits in &inst.nested {
            let plan = solve_discrete(
                &inst.link,
                &inst.comp,
                &inst.profile,
                &inst.spec,
                exits,
                inst.p0,
            )
            .unwrap();
            assert!(cr.epr >= plan.epr * (1.0 - 1e-12));
            assert!(plan.epr >= prev);
            prev = plan.epr;
        }
    }
}

#[test]
fn lowering_the_target_never_hurts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let inst = random_instance(&mut rng);
        let exits = inst.nested.last().unwrap();
        let floor = 1.0 / inst.profile.classes as f64;
        let lower = floor + 0.5 * (inst.p0 - floor);
        let hi = solve_discrete(
            &inst.link,
            &inst.comp,
            &inst.profile,
            &inst.spec,
            exits,
            inst.p0,
        )
        .unwrap();
        let lo = solve_discrete(
            &inst.link,
            &inst.comp,
            &inst.profile,
            &inst.spec,
            exits,
            lower,
        )
        .unwrap();
        assert!(lo.epr >= hi.epr);
        let cr_hi = solve_cr(&inst.link, &inst.comp, &inst.profile, &inst.spec, inst.p0).unwrap();
        let cr_lo = solve_cr(&inst.link, &inst.comp, &inst.profile, &inst.spec, lower).unwrap();
        assert!(cr_lo.epr >= cr_hi.epr);
    }
}

#[test]
fn epr_grows_with_snr() {
    let profile = FeatureProfile::new(10, 0.35, 0.5, 400.0, 0.08, 39).unwrap();
    let spec = QuantizerSpec::full(0.0, 1.0, 32).unwrap();
    let comp = ComputeProfile::from_flops(2e8, 1e8, 1e11, 5e11).unwrap();
    let exits = ExitSet::new(vec![9, 14, 19, 29, 34, 37], 39).unwrap();
    for p0 in [0.4, 0.6, 0.7] {
        let mut prev_cr = 0.0;
        let mut prev = 0.0;
        for i in 0..=70 {
            let link = LinkState::with_snr_db(1e8, -5.0 + 0.5 * i as f64, 0.012, 120_000).unwrap();
            let cr = solve_cr(&link, &comp, &profile, &spec, p0).unwrap();
            let d = solve_discrete(&link, &comp, &profile, &spec, &exits, p0).unwrap();
            assert!(cr.epr >= prev_cr && d.epr >= prev);
            prev_cr = cr.epr;
            prev = d.epr;
        }
        assert!(prev > 0.0);
    }
}

#[test]
fn ceiling_example() {
    // find a target whose continuous depth falls strictly between exits 9 and 19
    let profile = FeatureProfile::new(10, 0.35, 0.5, 400.0, 0.08, 39).unwrap();
    let spec = QuantizerSpec::full(0.0, 1.0, 32).unwrap();
    let comp = ComputeProfile::new(2e-4, 0.002).unwrap();
    let link = LinkState::with_snr_db(1e8, 20.0, 0.012, 120_000).unwrap();
    let q = 32.0;
    let p0 = accuracy_model(q, 9.2, &profile, &spec).unwrap();
    let exits = ExitSet::new(vec![9, 19, 29, 37], 39).unwrap();
    let plan = solve_discrete(&link, &comp, &profile, &spec, &exits, p0).unwrap();
    assert_eq!((plan.q, plan.ell), (32.0, 19.0));
    let cr = solve_cr(&link, &comp, &profile, &spec, p0).unwrap();
    assert!((cr.ell - 9.2).abs() < 1e-6);
}

#[test]
fn rate_identity_and_bound() {
    use exitplan::system::{comp_latency, max_bitwidth_discrete};
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..300 {
        let inst = random_instance(&mut rng);
        let rate = inst.link.rate();
        let q = rng.random_range(0.5..40.0);
        let mut prev = f64::INFINITY;
        for ell in 1..=39 {
            let ell = ell as f64;
            let e = epr(q, ell, &inst.link, &inst.comp).unwrap();
            let tc = comm_latency(q, &inst.link).unwrap();
            let tp = comp_latency(ell, &inst.comp).unwrap();
            let alt = rate / (1.0 + tp / tc);
            assert!((e - alt).abs() <= 1e-12 * alt);
            if tp > 0.0 {
                assert!(e < rate && e < prev);
            }
            prev = e;
        }
        if let Some(qd) = max_bitwidth_discrete(&inst.link, &inst.spec).unwrap() {
            assert!(comm_latency(qd as f64, &inst.link).unwrap() <= inst.link.t_max_s);
        }
    }
}
