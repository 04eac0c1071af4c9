use serde::Serialize;

use crate::bits::Bitstring;
use crate::error::ProtocolError;
use crate::rng::Rng;
use crate::transcript::{Party, PublicTranscript, Tag};

/// Default `c` in the leak bound `k = ⌈c·R·n⌉`. An intercept-resend attack
/// on a fraction `η` of pulses causes `R = η/4` and teaches Eve about `η/2`
/// of the sifted bits, i.e. `2R`.
pub const DEFAULT_LEAK_FACTOR: f64 = 2.0;

/// Upper bound `k` on the number of reconciled-key bits known to Eve:
/// `min(n, ⌈factor·R·n⌉)`.
///
/// Compared parities leak nothing beyond this because the last bit of every
/// compared set is discarded.
///
/// ```
/// use qkdsim::distill::leaked_bits_bound;
/// assert_eq!(leaked_bits_bound(0.0, 500, 2.0), 0);
/// assert_eq!(leaked_bits_bound(0.25, 100, 2.0), 50);
/// assert_eq!(leaked_bits_bound(0.01, 1000, 2.0), 20);
/// assert_eq!(leaked_bits_bound(0.9, 10, 2.0), 10);
/// ```
pub fn leaked_bits_bound(rate: f64, n: usize, factor: f64) -> usize {
    let k = (factor * rate * n as f64 - 1e-9).ceil().max(0.0) as usize;
    k.min(n)
}

/// The public description of the amplification subsets.
///
/// Subset `i` of `0..n` is drawn from `Rng::new(seed)` as `⌈n/64⌉` words,
/// index `j` being bit `j % 64` (least significant first) of word `j / 64`;
/// bits past `n` are cleared and an empty draw is redrawn. Each index is thus
/// included independently with probability 1/2, conditioned on a nonempty
/// subset. Publishing the seed reveals exactly the subsets and nothing else.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AmplificationPlan {
    pub seed: u64,
    /// Length of the key the subsets index.
    pub n: usize,
    /// Number of subsets, i.e. the final key length.
    pub m: usize,
}

fn pack_words(key: &Bitstring) -> Vec<u64> {
    let mut words = vec![0u64; key.len().div_ceil(64)];
    for (j, &b) in key.as_bools().iter().enumerate() {
        words[j / 64] |= (b as u64) << (j % 64);
    }
    words
}

impl AmplificationPlan {
    /// Transcript payload: seed (8 bytes), `n` and `m` (4 bytes each), big-endian.
    pub fn encode(&self) -> Vec<u8> {
        let mut p = self.seed.to_be_bytes().to_vec();
        p.extend((self.n as u32).to_be_bytes());
        p.extend((self.m as u32).to_be_bytes());
        p
    }

    pub fn decode(payload: &[u8]) -> Option<Self> {
        if payload.len() != 16 {
            return None;
        }
        Some(Self {
            seed: u64::from_be_bytes(payload[..8].try_into().ok()?),
            n: u32::from_be_bytes(payload[8..12].try_into().ok()?) as usize,
            m: u32::from_be_bytes(payload[12..].try_into().ok()?) as usize,
        })
    }

    /// Calls `f` with the word mask of every subset, in order.
    fn for_each_mask(&self, mut f: impl FnMut(&[u64])) {
        let words = self.n.div_ceil(64);
        let tail = match self.n % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        let mut rng = Rng::new(self.seed);
        let mut mask = vec![0u64; words];
        for _ in 0..self.m {
            loop {
                for w in mask.iter_mut() {
                    *w = rng.next_u64();
                }
                if let Some(last) = mask.last_mut() {
                    *last &= tail;
                }
                if mask.iter().any(|&w| w != 0) {
                    break;
                }
            }
            f(&mask);
        }
    }

    /// The subsets as ascending index lists. Memory grows as `n·m`.
    pub fn subsets(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(self.m);
        self.for_each_mask(|mask| {
            out.push((0..self.n).filter(|&j| mask[j / 64] >> (j % 64) & 1 == 1).collect());
        });
        out
    }

    /// The final key: parity of `key` over each subset.
    pub fn apply(&self, key: &Bitstring) -> Result<Bitstring, ProtocolError> {
        if key.len() != self.n {
            return Err(ProtocolError::LengthMismatch {
                left: key.len(),
                right: self.n,
            });
        }
        let words = pack_words(key);
        let mut out = Bitstring::new();
        self.for_each_mask(|mask| {
            let ones: u32 = mask.iter().zip(&words).map(|(m, k)| (m & k).count_ones()).sum();
            out.push((ones & 1) as u8);
        });
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Amplified {
    pub key: Bitstring,
    pub plan: AmplificationPlan,
}

/// Parities of `key` over explicit index sets.
pub fn apply_subsets(key: &Bitstring, subsets: &[Vec<usize>]) -> Bitstring {
    Bitstring::from_bits(subsets.iter().map(|s| key.parity_of(s)))
}

/// Compresses `key` to `n - k - s` bits, each the parity of a random nonempty
/// subset of positions. Alice draws the plan seed and posts the plan; the
/// parities themselves are never sent.
///
/// The cost is `O(n·(n-k-s)/64)` word operations.
pub fn privacy_amplify(
    key: &Bitstring,
    k: usize,
    s: usize,
    rng: &mut Rng,
    t: &mut PublicTranscript,
) -> Result<Amplified, ProtocolError> {
    let n = key.len();
    let m = match n.checked_sub(k).and_then(|x| x.checked_sub(s)) {
        Some(m) if m >= 1 => m,
        _ => return Err(ProtocolError::KeyExhausted { n, k, s }),
    };
    let plan = AmplificationPlan {
        seed: rng.next_u64(),
        n,
        m,
    };
    t.post(Party::Alice, Tag::AmplificationSubsets, plan.encode());
    Ok(Amplified {
        key: plan.apply(key)?,
        plan,
    })
}
