use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xform_lab::learner::{Feed, LearnError, LearningMachine, RunStatus};
use xform_lab::pattern::enumerate_patterns;
use xform_lab::sufficiency::HypothesisClass;
use xform_lab::{LabeledSample, TruthTable};

fn labeled(t: &TruthTable) -> Vec<LabeledSample> {
    enumerate_patterns(t.width())
        .unwrap()
        .into_iter()
        .zip(t.outputs())
        .map(|(p, &o)| LabeledSample::new(p, o))
        .collect()
}

fn machine(width: usize) -> LearningMachine {
    LearningMachine::new(width, HypothesisClass::all_functions(width).unwrap()).unwrap()
}

fn shuffled(t: &TruthTable, seed: u64) -> Vec<LabeledSample> {
    let mut s = labeled(t);
    s.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    s
}

#[test]
fn universality_at_width_three() {
    for bits in 0..256 {
        let t = TruthTable::from_packed(3, bits);
        let mut m = machine(3);
        assert_eq!(m.run_to_convergence(labeled(&t)).unwrap(), RunStatus::Converged);
        assert_eq!(m.lower_table(), t);
        assert_eq!(m.upper_table(), t);
        assert_eq!(m.lower(), m.upper());
        assert_eq!(m.gap(), 0);
    }
}

#[test]
fn conflicting_sample_is_rejected_and_duplicate_ignored() {
    let t = TruthTable::from_packed(2, 0b0001);
    let mut m = machine(2);
    let s = labeled(&t)[3];
    assert_eq!(m.feed(s).unwrap(), Feed::Novel);
    assert_eq!(m.feed(s).unwrap(), Feed::Duplicate);
    assert_eq!(m.trace().len(), 1);
    let flipped = LabeledSample::new(s.pattern, !s.label);
    assert_eq!(m.feed(flipped), Err(LearnError::ConflictingSample(s.pattern)));
    assert_eq!(m.trace().len(), 1);
}

#[test]
fn restricted_class_converges_before_the_table_is_full() {
    // b1 & b2 is the only single-cube member true on 11 and false on 10 and 01
    let t = TruthTable::from_packed(2, 0b0001);
    let mut m = LearningMachine::new(2, HypothesisClass::bounded_dnf(2, 1).unwrap()).unwrap();
    let order = [3, 2, 1, 0].map(|i| labeled(&t)[i]);
    assert_eq!(m.run_to_convergence(order).unwrap(), RunStatus::Converged);
    assert_eq!(m.trace().len(), 3);
    assert_eq!(m.consistent_remaining(), Some(1));
    assert!(m.gap() > 0);
}

fn arb_target() -> impl Strategy<Value = TruthTable> {
    (1usize..=4).prop_flat_map(|w| (0u64..1 << (1 << w)).prop_map(move |b| TruthTable::from_packed(w, b)))
}

proptest! {
    #[test]
    fn every_step_squeezes_and_stays_sound(t in arb_target(), seed in any::<u64>()) {
        let width = t.width();
        let mut m = machine(width);
        let mut prev = (m.lower_table(), m.upper_table(), m.gap());
        for s in shuffled(&t, seed) {
            m.feed(s).unwrap();
            let (lo, hi) = (m.lower_table(), m.upper_table());
            // lower grows, upper shrinks, target stays in between
            prop_assert!(prev.0.implies(&lo));
            prop_assert!(hi.implies(&prev.1));
            prop_assert!(lo.implies(&t) && t.implies(&hi));
            // the gap is exactly the set of patterns where the bounds disagree
            prop_assert_eq!(m.gap(), lo.disagreements(&hi));
            prop_assert_eq!(m.gap() + 1, prev.2);
            prev = (lo, hi, m.gap());
        }
        prop_assert_eq!(m.lower_table(), t);
    }

    #[test]
    fn final_state_is_order_independent(bits in 0u64..256, a in any::<u64>(), b in any::<u64>()) {
        let t = TruthTable::from_packed(3, bits);
        let mut ma = machine(3);
        let mut mb = machine(3);
        ma.run_to_convergence(shuffled(&t, a)).unwrap();
        mb.run_to_convergence(shuffled(&t, b)).unwrap();
        prop_assert_eq!(ma.lower(), mb.lower());
        prop_assert_eq!(ma.upper(), mb.upper());
        prop_assert!(ma.lower().structurally_identical(mb.lower()));
    }

    #[test]
    fn partial_stream_bounds_contain_exactly_the_consistent_functions(bits in 0u64..256, seed in any::<u64>(), take in 0usize..=8) {
        let t = TruthTable::from_packed(3, bits);
        let mut m = machine(3);
        for s in shuffled(&t, seed).into_iter().take(take) {
            m.feed(s).unwrap();
        }
        let (lo, hi) = (m.lower_table(), m.upper_table());
        let mut between = 0;
        for g in 0..256 {
            let g = TruthTable::from_packed(3, g);
            let fits = m.observed().iter().all(|s| g.output(&s.pattern) == s.label);
            prop_assert_eq!(fits, lo.implies(&g) && g.implies(&hi));
            between += usize::from(fits);
        }
        prop_assert_eq!(between, 1 << m.gap());
        prop_assert_eq!(m.consistent_remaining(), Some(between));
    }
}
