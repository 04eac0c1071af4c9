//! Stage 2, Phase 1: extracting the raw key over the public channel.

use crate::bits::Bitstring;
use crate::error::ProtocolError;
use crate::protocol::stage1::{Reading, Stage1Record};
use crate::transcript::{encode_bits, encode_indices, Party, PublicTranscript, Tag};

/// The raw keys and the slots they came from, in slot order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawKeys {
    pub alice: Bitstring,
    pub bob: Bitstring,
    pub slots: Vec<usize>,
}

impl RawKeys {
    pub fn len(&self) -> usize {
        self.alice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alice.is_empty()
    }

    /// Disagreements over the whole raw key, as a fraction.
    pub fn error_rate(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.alice.hamming(&self.bob) as f64 / self.len() as f64
    }
}

fn finish(alice: Bitstring, bob: Bitstring, slots: Vec<usize>) -> Result<RawKeys, ProtocolError> {
    if slots.is_empty() {
        return Err(ProtocolError::EmptySiftedKey);
    }
    Ok(RawKeys { alice, bob, slots })
}

/// Bob announces his alphabet for every received slot and lists the slots
/// where nothing arrived; Alice answers with one verdict bit per announced
/// slot. The raw key keeps received slots with matching alphabets.
pub fn sift_bb84(rec: &Stage1Record, t: &mut PublicTranscript) -> Result<RawKeys, ProtocolError> {
    let mut announced = Bitstring::new();
    let mut lost = Vec::new();
    let mut verdicts = Bitstring::new();
    let (mut alice, mut bob, mut slots) = (Bitstring::new(), Bitstring::new(), Vec::new());
    for (slot, s) in rec.slots.iter().enumerate() {
        match s.bob {
            None => lost.push(slot),
            Some(Reading::Bb84 { basis, bit }) => {
                announced.push(basis.bit());
                let ok = s.alice_basis == Some(basis);
                verdicts.push(ok as u8);
                if ok {
                    alice.push(s.alice_bit);
                    bob.push(bit);
                    slots.push(slot);
                }
            }
            Some(Reading::B92(_)) => {
                return Err(ProtocolError::InvalidConfig("B92 reading in a BB84 record".into()));
            }
        }
    }
    t.post(Party::Bob, Tag::BasisAnnouncement, encode_bits(&announced));
    t.post(Party::Bob, Tag::NonReceptions, encode_indices(&lost));
    t.post(Party::Alice, Tag::BasisVerdicts, encode_bits(&verdicts));
    finish(alice, bob, slots)
}

/// Bob lists the slots where his receiver gave a conclusive outcome.
pub fn sift_b92(rec: &Stage1Record, t: &mut PublicTranscript) -> Result<RawKeys, ProtocolError> {
    let (mut alice, mut bob, mut slots) = (Bitstring::new(), Bitstring::new(), Vec::new());
    for (slot, s) in rec.slots.iter().enumerate() {
        if let Some(b) = s.bob.and_then(|r| r.bit()) {
            alice.push(s.alice_bit);
            bob.push(b);
            slots.push(slot);
        }
    }
    t.post(Party::Bob, Tag::ConclusiveSlots, encode_indices(&slots));
    finish(alice, bob, slots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Bb84Basis;
    use crate::protocol::stage1::SlotRecord;
    use crate::quantum::PovmOutcome;

    #[test]
    fn all_mismatched_is_empty() {
        let slot = SlotRecord {
            alice_bit: 1,
            alice_basis: Some(Bb84Basis::VH),
            bob: Some(Reading::Bb84 {
                basis: Bb84Basis::Oblique,
                bit: 0,
            }),
        };
        let rec = Stage1Record { slots: vec![slot; 5] };
        let mut t = PublicTranscript::new();
        assert_eq!(sift_bb84(&rec, &mut t), Err(ProtocolError::EmptySiftedKey));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn all_inconclusive_is_empty() {
        let slot = SlotRecord {
            alice_bit: 0,
            alice_basis: None,
            bob: Some(Reading::B92(PovmOutcome::Inconclusive)),
        };
        let rec = Stage1Record { slots: vec![slot; 5] };
        assert_eq!(
            sift_b92(&rec, &mut PublicTranscript::new()),
            Err(ProtocolError::EmptySiftedKey)
        );
    }

    #[test]
    fn lost_slots_are_skipped() {
        let rec = Stage1Record {
            slots: vec![
                SlotRecord {
                    alice_bit: 1,
                    alice_basis: Some(Bb84Basis::VH),
                    bob: None,
                },
                SlotRecord {
                    alice_bit: 1,
                    alice_basis: Some(Bb84Basis::VH),
                    bob: Some(Reading::Bb84 {
                        basis: Bb84Basis::VH,
                        bit: 1,
                    }),
                },
            ],
        };
        let raw = sift_bb84(&rec, &mut PublicTranscript::new()).unwrap();
        assert_eq!(raw.slots, vec![1]);
        assert_eq!(raw.alice.to_string(), "1");
    }
}
