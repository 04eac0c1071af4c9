//! Worked examples replayed from recorded choices instead of random draws.
//!
//! Slots are numbered from 1 in the tables and in [`FixtureOutcome`];
//! internally they are 0-based.

use crate::alphabet::Bb84Basis;
use crate::bits::Bitstring;
use crate::otp::otp_xor;
use crate::protocol::sift::{sift_bb84, RawKeys};
use crate::protocol::stage1::{Reading, SlotRecord, Stage1Record};
use crate::transcript::PublicTranscript;

/// A ten-slot BB84 exchange written as `+`/`x` (or `⊞`/`⊠`) bases and `0`/`1` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bb84Table {
    pub alice_bases: &'static str,
    pub alice_bits: &'static str,
    pub bob_bases: &'static str,
    pub bob_bits: &'static str,
    pub eve_bases: Option<&'static str>,
    pub eve_bits: Option<&'static str>,
}

/// The exchange without an eavesdropper.
pub const FIG6A: Bb84Table = Bb84Table {
    alice_bases: "⊞⊠⊠⊠⊞⊠⊞⊠⊞⊠",
    alice_bits: "1001100101",
    bob_bases: "⊠⊠⊞⊠⊞⊠⊞⊞⊞⊞",
    bob_bits: "1011100000",
    eve_bases: None,
    eve_bits: None,
};

/// The same exchange with Eve intercepting every pulse.
pub const FIG6B: Bb84Table = Bb84Table {
    alice_bases: "⊞⊠⊠⊠⊞⊠⊞⊠⊞⊠",
    alice_bits: "1001100101",
    bob_bases: "⊠⊠⊞⊠⊞⊠⊞⊞⊞⊞",
    bob_bits: "1011111000",
    eve_bases: Some("⊠⊞⊞⊠⊞⊞⊠⊠⊞⊞"),
    eve_bits: Some("1011110100"),
};

pub const VERNAM_PLAIN: &str = "0110 0101 1101";
pub const VERNAM_KEY: &str = "1010 1110 0100";
pub const VERNAM_CIPHER: &str = "1100 1011 1001";

pub fn parse_bases(s: &str) -> Vec<Bb84Basis> {
    s.chars()
        .filter_map(|c| match c {
            '⊞' | '+' => Some(Bb84Basis::VH),
            '⊠' | 'x' | 'X' => Some(Bb84Basis::Oblique),
            _ => None,
        })
        .collect()
}

fn bits(s: &str) -> Bitstring {
    s.parse().expect("fixture bit strings are well formed")
}

impl Bb84Table {
    /// The Stage 1 record these choices would have produced.
    pub fn record(&self) -> Stage1Record {
        let ab = parse_bases(self.alice_bases);
        let bb = parse_bases(self.bob_bases);
        let abits = bits(self.alice_bits);
        let bbits = bits(self.bob_bits);
        let slots = (0..ab.len())
            .map(|i| SlotRecord {
                alice_bit: abits.get(i),
                alice_basis: Some(ab[i]),
                bob: Some(Reading::Bb84 {
                    basis: bb[i],
                    bit: bbits.get(i),
                }),
            })
            .collect();
        Stage1Record { slots }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Human-readable result lines.
    pub lines: Vec<String>,
}

/// Sifts a table; returns the raw keys and 1-based slots where they differ.
pub fn sift_table(table: &Bb84Table) -> (RawKeys, Vec<usize>) {
    let raw = sift_bb84(&table.record(), &mut PublicTranscript::new()).expect("fixture keeps some slots");
    let errors = raw
        .alice
        .diff_positions(&raw.bob)
        .into_iter()
        .map(|i| raw.slots[i] + 1)
        .collect();
    (raw, errors)
}

fn one_based(slots: &[usize]) -> Vec<usize> {
    slots.iter().map(|s| s + 1).collect()
}

pub fn fig6a() -> FixtureOutcome {
    let (raw, errors) = sift_table(&FIG6A);
    let passed = raw.alice.to_string() == "011000"
        && raw.bob == raw.alice
        && one_based(&raw.slots) == [2, 4, 5, 6, 7, 9]
        && errors.is_empty();
    FixtureOutcome {
        name: "fig6a",
        passed,
        lines: vec![
            format!("kept slots: {:?}", one_based(&raw.slots)),
            format!("raw key alice: {}", raw.alice),
            format!("raw key bob:   {}", raw.bob),
        ],
    }
}

pub fn fig6b() -> FixtureOutcome {
    let (raw, errors) = sift_table(&FIG6B);
    let sifted_positions: Vec<usize> = raw.alice.diff_positions(&raw.bob).iter().map(|i| i + 1).collect();
    let passed = raw.alice.to_string() == "011000" && raw.bob.to_string() == "011110" && errors == [6, 7];
    FixtureOutcome {
        name: "fig6b",
        passed,
        lines: vec![
            format!("kept slots: {:?}", one_based(&raw.slots)),
            format!("raw key alice: {}", raw.alice),
            format!("raw key bob:   {}", raw.bob),
            format!("errors at raw-key positions {sifted_positions:?} (slots {errors:?})"),
        ],
    }
}

pub fn vernam() -> FixtureOutcome {
    let c = otp_xor(&bits(VERNAM_PLAIN), &bits(VERNAM_KEY)).expect("equal lengths");
    FixtureOutcome {
        name: "vernam",
        passed: c == bits(VERNAM_CIPHER),
        lines: vec![
            format!("P = {VERNAM_PLAIN}"),
            format!("K = {VERNAM_KEY}"),
            format!("C = {}", c),
        ],
    }
}

pub const NAMES: [&str; 3] = ["fig6a", "fig6b", "vernam"];

pub fn by_name(name: &str) -> Option<FixtureOutcome> {
    match name {
        "fig6a" => Some(fig6a()),
        "fig6b" => Some(fig6b()),
        "vernam" => Some(vernam()),
        _ => None,
    }
}
