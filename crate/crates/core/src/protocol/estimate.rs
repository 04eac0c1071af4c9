//! Stage 2, Phase 2: estimating the error rate from a disclosed sample.

use crate::bits::Bitstring;
use crate::error::ProtocolError;
use crate::rng::Rng;
use crate::transcript::{encode_bits, encode_indices, Party, PublicTranscript, Tag};

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    /// Disagreements over disclosed positions.
    pub rate: f64,
    pub disclosed: usize,
    /// The keys with the disclosed positions removed.
    pub alice: Bitstring,
    pub bob: Bitstring,
}

/// Number of positions disclosed for a key of `len` bits: `⌈f·len⌉`, at
/// least one and at most `len`.
pub fn sample_size(len: usize, f: f64) -> usize {
    ((f * len as f64 - 1e-9).ceil() as usize).clamp(1, len.max(1)).min(len)
}

/// Bob picks `⌈f·len⌉` positions uniformly at random and publishes them with
/// his bits there; Alice publishes hers. Both delete the disclosed positions.
///
/// Returns [`ProtocolError::RestartRequired`] when the measured rate exceeds
/// `r_max`.
pub fn estimate_error(
    raw_alice: &Bitstring,
    raw_bob: &Bitstring,
    f: f64,
    r_max: f64,
    rng: &mut Rng,
    t: &mut PublicTranscript,
) -> Result<Estimate, ProtocolError> {
    if raw_alice.len() != raw_bob.len() {
        return Err(ProtocolError::LengthMismatch {
            left: raw_alice.len(),
            right: raw_bob.len(),
        });
    }
    if raw_alice.is_empty() {
        return Err(ProtocolError::EmptySiftedKey);
    }
    let len = raw_alice.len();
    let positions = rng.subset_of_size(len, sample_size(len, f));
    let sample_a = raw_alice.select(&positions);
    let sample_b = raw_bob.select(&positions);
    t.post(Party::Bob, Tag::SamplePositions, encode_indices(&positions));
    t.post(Party::Bob, Tag::SampleBits, encode_bits(&sample_b));
    t.post(Party::Alice, Tag::SampleBits, encode_bits(&sample_a));
    let rate = sample_a.hamming(&sample_b) as f64 / positions.len() as f64;
    if rate > r_max {
        return Err(ProtocolError::RestartRequired { rate, r_max });
    }
    let mut alice = raw_alice.clone();
    let mut bob = raw_bob.clone();
    alice.remove_positions(&positions);
    bob.remove_positions(&positions);
    Ok(Estimate {
        rate,
        disclosed: positions.len(),
        alice,
        bob,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(sample_size(10, 0.1), 1);
        assert_eq!(sample_size(11, 0.1), 2);
        assert_eq!(sample_size(6, 1.0), 6);
        assert_eq!(sample_size(3, 0.01), 1);
    }

    #[test]
    fn identical_keys() {
        let mut rng = Rng::new(1);
        let a: Bitstring = (0..1000).map(|_| rng.coin()).collect();
        let mut t = PublicTranscript::new();
        let e = estimate_error(&a, &a, 0.1, 0.12, &mut rng, &mut t).unwrap();
        assert_eq!(e.rate, 0.0);
        assert_eq!(e.disclosed, 100);
        assert_eq!(e.alice.len(), 900);
        assert_eq!(e.alice, e.bob);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn threshold_aborts() {
        let a: Bitstring = "0000".parse().unwrap();
        let b: Bitstring = "1111".parse().unwrap();
        let r = estimate_error(&a, &b, 0.5, 0.12, &mut Rng::new(0), &mut PublicTranscript::new());
        assert_eq!(r, Err(ProtocolError::RestartRequired { rate: 1.0, r_max: 0.12 }));
    }
}
