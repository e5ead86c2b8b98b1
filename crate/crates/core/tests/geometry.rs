mod common;

use std::cmp::Ordering;

use common::s_power;
use num_rational::BigRational;
use systole::enumerate::{enumerate_words, EnumerationConfig};
use systole::gaussian::GaussianInt;
use systole::lengths::TauKey;
use systole::real::PreciseReal;
use systole::spectrum::assemble_spectrum;

#[test]
fn trace_families() {
    for k in 1..=30i64 {
        let ku = k as usize;
        assert!(s_power(ku - 1, "S1").trace().eq_up_to_sign(&GaussianInt::new(1, k)), "S^{k}θ");
        assert!(s_power(ku - 1, "S2").trace().eq_up_to_sign(&GaussianInt::new(-1, k)), "S^{k}θ²");
        assert!(s_power(ku + 1, "R1").trace().eq_up_to_sign(&GaussianInt::new(k + 3, 0)), "S^{}Rθ", k + 1);
        if k >= 3 {
            assert!(s_power(ku - 3, "R1").trace().eq_up_to_sign(&GaussianInt::new(k - 1, 0)), "S^{}Rθ", k - 3);
        }
    }
}

#[test]
fn twisted_powers_strictly_lengthen() {
    let keys: Vec<TauKey> = (3..=40).map(|k| TauKey::from_trace(&s_power(k - 1, "S1").trace())).collect();
    for (i, pair) in keys.windows(2).enumerate() {
        assert_eq!(pair[0].cmp(&pair[1]), Ordering::Less, "k = {}", i + 3);
        let (a, b) = (pair[0].length(256), pair[1].length(256));
        assert_eq!(a.certified_cmp(&b), Some(Ordering::Less));
    }
}

#[test]
fn spectrum_grows_at_most_logarithmically() {
    let e = enumerate_words(&EnumerationConfig::parse("4.6", 256).unwrap()).unwrap();
    let spectrum = assemble_spectrum(&e.classes, 256).unwrap();
    assert_eq!(spectrum.len(), 31);
    for entry in &spectrum {
        let bound = PreciseReal::from_int(entry.index as i64 + 3, 256).ln().mul_int(2);
        assert_eq!(entry.length.certified_cmp(&bound), Some(Ordering::Less), "l_{}", entry.index);
    }
}

#[test]
fn rates_are_halves_or_integers_for_the_families() {
    use systole::classes::ClassRecord;
    let half = BigRational::new(1.into(), 2.into());
    for k in 3..=20 {
        assert_eq!(ClassRecord::from_word(&s_power(k - 1, "S1")).rate(), half);
        assert_eq!(ClassRecord::from_word(&s_power(k - 1, "S2")).rate(), half);
    }
}
