use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thinlab::xorset::{parity_class, AnchoredClass};
use thinlab::{ExtendedNat, FiniteCode, Stream, Word};

fn word_of(len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(any::<bool>(), len).prop_map(Word::new)
}

fn stream() -> impl Strategy<Value = Stream> {
    let prefix = prop::collection::vec(any::<bool>(), 0..6).prop_map(Word::new);
    let period = prop::collection::vec(any::<bool>(), 1..5).prop_map(Word::new);
    prop_oneof![
        (prefix.clone(), any::<bool>()).prop_map(|(p, t)| Stream::constant(p, t)),
        (prefix, period).prop_map(|(p, q)| Stream::periodic(p, q).unwrap()),
    ]
}

fn flips() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..24, 0..5)
}

proptest! {
    #[test]
    fn word_metric_axioms((x, y, z) in (0usize..12).prop_flat_map(|n| (word_of(n), word_of(n), word_of(n)))) {
        let d = |a: &Word, b: &Word| a.distance(b).unwrap();
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert_eq!(d(&x, &y) == 0, x == y);
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
    }

    #[test]
    fn stream_metric_axioms(x in stream(), y in stream(), z in stream()) {
        let (xy, yz, xz) = (x.hd(&y).unwrap(), y.hd(&z).unwrap(), x.hd(&z).unwrap());
        prop_assert_eq!(xy, y.hd(&x).unwrap());
        prop_assert!(xz <= xy + yz);
        prop_assert_eq!(xy == ExtendedNat::ZERO, x.same_point(&y).unwrap());
    }

    #[test]
    fn prefix_distance_is_monotone_and_converges(x in stream(), y in stream()) {
        let mut last = 0;
        for len in 0..64 {
            let d = x.hd_prefix(&y, len).unwrap();
            prop_assert!(d >= last);
            last = d;
        }
        match x.hd(&y).unwrap() {
            ExtendedNat::Finite(d) => prop_assert_eq!(x.hd_prefix(&y, 200).unwrap() as u64, d),
            ExtendedNat::Omega => prop_assert!(x.hd_prefix(&y, 200).unwrap() > last.min(199)),
        }
    }

    #[test]
    fn flips_stay_in_the_class(x in stream(), f in flips()) {
        let y = x.flip_all(&f).unwrap();
        prop_assert!(x.sim_related(&y).unwrap());
        let mut odd = std::collections::BTreeSet::new();
        for p in &f {
            if !odd.insert(*p) {
                odd.remove(p);
            }
        }
        prop_assert_eq!(x.hd(&y).unwrap(), ExtendedNat::from(odd.len()));
        prop_assert_eq!(x.approx_related(&y).unwrap(), odd.len() % 2 == 0);
    }

    #[test]
    fn parity_is_additive(x in stream(), f in flips(), g in flips()) {
        let (y, z) = (x.flip_all(&f).unwrap(), x.flip_all(&g).unwrap());
        let xy = parity_class(&y, &x).unwrap();
        let yz = parity_class(&z, &y).unwrap();
        prop_assert_eq!(parity_class(&z, &x).unwrap(), xy ^ yz);
    }

    #[test]
    fn anchored_class_is_a_xor_set(x in stream(), f in flips(), n in 0usize..40, label in any::<bool>()) {
        let s = AnchoredClass::new(x.clone(), label).unwrap();
        let y = x.flip_all(&f).unwrap();
        prop_assert_ne!(s.contains(&y).unwrap(), s.contains(&y.flip(n).unwrap()).unwrap());
    }

    #[test]
    fn stream_theta(x in stream(), m in 0u64..256) {
        let t = x.theta(m).unwrap();
        prop_assert_eq!(t.theta(m).unwrap().hd(&x).unwrap(), ExtendedNat::ZERO);
        prop_assert_eq!(t.hd(&x).unwrap(), ExtendedNat::from(m.count_ones() as u64));
        for k in 0..10 {
            prop_assert_eq!(t.bit(k).unwrap(), x.bit(k).unwrap() ^ thinlab::bit_k(k as u32, m));
        }
    }
}

fn random_code(rng: &mut ChaCha8Rng, n: usize) -> (Vec<u32>, FiniteCode) {
    let size = rng.gen_range(2..=10);
    let mut ws: Vec<u32> = (0..size).map(|_| rng.gen_range(0..1u32 << n)).collect();
    ws.sort_unstable();
    ws.dedup();
    let code = FiniteCode::new(n, ws.iter().map(|&x| Word::from_rank(x as u64, n))).unwrap();
    (ws, code)
}

#[test]
fn sampled_detect_correct_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut checked = 0;
    while checked < 10_000 {
        let n = rng.gen_range(2..=6);
        let (ws, code) = random_code(&mut rng, n);
        if ws.len() < 2 {
            continue;
        }
        for k in 0..=3u32 {
            // Every codeword corrupted by up to k flips stays outside the
            // code / decodes uniquely back.
            let patterns: Vec<u32> = (0..1u32 << n).filter(|e| e.count_ones() <= k).collect();
            let detects = ws
                .iter()
                .all(|c| patterns.iter().all(|e| *e == 0 || !ws.contains(&(c ^ e))));
            let corrects = ws.iter().all(|c| {
                patterns.iter().all(|e| {
                    let r = c ^ e;
                    let mine = (c ^ r).count_ones();
                    ws.iter().all(|x| x == c || (x ^ r).count_ones() > mine)
                })
            });
            assert_eq!(code.detects(k as u64).unwrap(), detects, "{ws:?}, k = {k}");
            assert_eq!(
                code.corrects(k as u64).unwrap(),
                corrects,
                "{ws:?}, k = {k}"
            );
        }
        checked += 1;
    }
}

#[test]
fn thinness_is_closed_under_subsets_and_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..500 {
        let n = rng.gen_range(2..=6);
        // A chain of thin codes grown one word at a time.
        let mut chain: Vec<Word> = Vec::new();
        for x in Word::all(n) {
            if rng.gen_bool(0.5) && chain.iter().all(|m| m.distance(&x).unwrap() >= 2) {
                chain.push(x);
                let code = FiniteCode::new(n, chain.clone()).unwrap();
                assert!(code.is_thin().unwrap());
            }
        }
        let union = FiniteCode::new(n, chain.clone()).unwrap();
        assert!(union.is_thin().unwrap());
        let subset: Vec<Word> = chain.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        assert!(FiniteCode::new(n, subset).unwrap().is_thin().unwrap());
    }
}
