//! The public two-way classical channel.
//!
//! Every message is appended to a [`PublicTranscript`], which is all the
//! eavesdropper gets to read. The serialized form is one line per message:
//!
//! ```text
//! sender TAB tag TAB payload-hex LF
//! ```
//!
//! Payload encodings:
//!
//! * index lists: each index as a 4-byte big-endian integer;
//! * bitstrings: a 4-byte big-endian bit count followed by the bits packed
//!   most-significant-bit first;
//! * single parities: one byte, `0x00` or `0x01`.
//!
//! The transcript digest is SHA-256 over the serialized text, lowercase hex.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bits::Bitstring;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Party {
    Alice,
    Bob,
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tag {
    /// Bob: one bit per received slot, `1` for the oblique alphabet.
    BasisAnnouncement,
    /// Bob: slots where nothing was detected.
    NonReceptions,
    /// Alice: one bit per announced slot, `1` if the alphabets matched.
    BasisVerdicts,
    /// Bob (B92): slots with a conclusive reception.
    ConclusiveSlots,
    /// Bob: raw-key positions chosen for error estimation.
    SamplePositions,
    /// Either party: their bits at the sampled positions.
    SampleBits,
    /// Alice: the permutation agreed for a reconciliation pass.
    Permutation,
    /// Either party: parity of one block or subblock.
    BlockParity,
    /// Alice: a random subset for a reconciliation check.
    CheckSubset,
    /// Either party: parity of a reconciliation check subset.
    SubsetParity,
    /// Alice: the seed and size of the privacy-amplification subsets.
    AmplificationSubsets,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::BasisAnnouncement => "basis-announcement",
            Tag::NonReceptions => "non-receptions",
            Tag::BasisVerdicts => "basis-verdicts",
            Tag::ConclusiveSlots => "conclusive-slots",
            Tag::SamplePositions => "sample-positions",
            Tag::SampleBits => "sample-bits",
            Tag::Permutation => "permutation",
            Tag::BlockParity => "block-parity",
            Tag::CheckSubset => "check-subset",
            Tag::SubsetParity => "subset-parity",
            Tag::AmplificationSubsets => "amplification-subsets",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub sender: Party,
    pub tag: Tag,
    pub payload: Vec<u8>,
}

impl Message {
    /// The serialized line, without the trailing newline.
    pub fn line(&self) -> String {
        format!("{}\t{}\t{}", self.sender, self.tag.as_str(), hex::encode(&self.payload))
    }
}

/// Append-only log of public messages.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PublicTranscript {
    messages: Vec<Message>,
}

impl PublicTranscript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn post(&mut self, sender: Party, tag: Tag, payload: Vec<u8>) {
        self.messages.push(Message { sender, tag, payload });
    }

    /// Everything posted so far, in order.
    pub fn read_all(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    pub fn count(&self, sender: Party, tag: Tag) -> usize {
        self.messages
            .iter()
            .filter(|m| m.sender == sender && m.tag == tag)
            .count()
    }

    pub fn last_with(&self, sender: Party, tag: Tag) -> Option<&Message> {
        self.messages.iter().rev().find(|m| m.sender == sender && m.tag == tag)
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for m in &self.messages {
            writeln!(w, "{}", m.line())?;
        }
        Ok(())
    }

    pub fn serialize(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn digest_hex(&self) -> String {
        let mut h = Sha256::new();
        for m in &self.messages {
            h.update(m.line().as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// A functional-style append for callers that thread the transcript by value.
pub fn post_message(mut t: PublicTranscript, sender: Party, tag: Tag, payload: Vec<u8>) -> PublicTranscript {
    t.post(sender, tag, payload);
    t
}

pub fn read_all(t: &PublicTranscript) -> &[Message] {
    t.read_all()
}

pub fn encode_indices(indices: &[usize]) -> Vec<u8> {
    indices.iter().flat_map(|&i| (i as u32).to_be_bytes()).collect()
}

pub fn decode_indices(payload: &[u8]) -> Vec<usize> {
    payload
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect()
}

pub fn encode_bits(bits: &Bitstring) -> Vec<u8> {
    let mut out = (bits.len() as u32).to_be_bytes().to_vec();
    out.extend(bits.to_bytes());
    out
}

pub fn decode_bits(payload: &[u8]) -> Bitstring {
    if payload.len() < 4 {
        return Bitstring::new();
    }
    let n = u32::from_be_bytes([payload[0], payload[1], payload[2], payload[3]]) as usize;
    Bitstring::from_bytes(&payload[4..]).as_bools()[..n]
        .iter()
        .copied()
        .collect()
}

pub fn encode_parity(p: u8) -> Vec<u8> {
    vec![p & 1]
}

/// SHA-256 fingerprint of a bit string: 8-byte big-endian bit count, then the
/// packed bits.
pub fn bits_fingerprint(bits: &Bitstring) -> String {
    let mut h = Sha256::new();
    h.update((bits.len() as u64).to_be_bytes());
    h.update(bits.to_bytes());
    hex::encode(h.finalize())
}
