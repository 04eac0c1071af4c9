use serde::Serialize;

use crate::bits::Bitstring;
use crate::distill::AmplificationPlan;
use crate::error::ProtocolError;
use crate::rng::Rng;
use crate::transcript::{encode_indices, encode_parity, Party, PublicTranscript, Tag};

/// How the block length of a permutation pass is chosen from the estimated
/// error rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum BlockPolicy {
    /// `ℓ = clamp(⌈constant / max(R, floor_rate)⌉, min_len, key length)`.
    Cascade {
        constant: f64,
        floor_rate: f64,
        min_len: usize,
    },
    /// The same `ℓ` regardless of the error rate (still capped at the key length).
    Fixed(usize),
}

impl Default for BlockPolicy {
    fn default() -> Self {
        BlockPolicy::Cascade {
            constant: 0.73,
            floor_rate: 0.01,
            min_len: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconcileParams {
    pub block_policy: BlockPolicy,
    /// Consecutive clean random-subset checks needed to stop.
    pub n_clean: usize,
    /// Permutation passes before switching to random-subset checks.
    pub max_passes: usize,
    /// Upper bound on random-subset checks.
    pub subset_budget: usize,
}

impl Default for ReconcileParams {
    fn default() -> Self {
        Self {
            block_policy: BlockPolicy::default(),
            n_clean: 10,
            max_passes: 4,
            subset_budget: 1000,
        }
    }
}

impl ReconcileParams {
    pub fn validate(&self) -> Result<(), ProtocolError> {
        let bad = |m: &str| Err(ProtocolError::InvalidConfig(m.to_string()));
        if self.n_clean < 1 {
            return bad("n_clean must be at least 1");
        }
        match self.block_policy {
            BlockPolicy::Fixed(l) if l < 2 => bad("block length must be at least 2"),
            BlockPolicy::Cascade { min_len, .. } if min_len < 2 => bad("block length must be at least 2"),
            BlockPolicy::Cascade {
                constant, floor_rate, ..
            } if !(constant > 0.0 && floor_rate > 0.0) => bad("block policy constants must be positive"),
            _ => Ok(()),
        }
    }
}

const CEIL_EPS: f64 = 1e-9;

/// Block length for error rate `rate` on a key of `key_len` bits.
///
/// ```
/// use qkdsim::distill::{block_length, BlockPolicy};
/// let p = BlockPolicy::default();
/// assert_eq!(block_length(0.01, &p, 10_000), 73);
/// assert_eq!(block_length(0.0, &p, 10_000), 73);
/// assert_eq!(block_length(0.25, &p, 10_000), 4);
/// assert_eq!(block_length(0.0, &p, 50), 50);
/// ```
pub fn block_length(rate: f64, policy: &BlockPolicy, key_len: usize) -> usize {
    let l = match *policy {
        BlockPolicy::Cascade {
            constant,
            floor_rate,
            min_len,
        } => ((constant / rate.max(floor_rate) - CEIL_EPS).ceil() as usize).max(min_len),
        BlockPolicy::Fixed(l) => l,
    };
    l.min(key_len).max(1)
}

/// Bookkeeping of the distillation phases.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DistillAccounting {
    /// Parity values posted (each comparison posts one per party).
    pub parity_bits_disclosed: usize,
    /// Bits thrown away after a parity comparison, one per comparison.
    pub bits_discarded: usize,
    /// Single bits deleted because bisection isolated them as wrong.
    pub errors_deleted: usize,
    /// Splitting steps performed while bisecting.
    pub bisections: usize,
    pub passes: usize,
    pub subset_checks: usize,
    /// Bound on what the eavesdropper knows of the reconciled key.
    pub k: usize,
    /// The subsets whose parities form the final key.
    pub amplification: Option<AmplificationPlan>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconciled {
    pub alice: Bitstring,
    pub bob: Bitstring,
    pub accounting: DistillAccounting,
}

/// Working state: both keys, a deletion mask over the current coordinates,
/// and the public channel.
struct Work<'a> {
    a: Bitstring,
    b: Bitstring,
    dead: Vec<bool>,
    t: &'a mut PublicTranscript,
    acc: DistillAccounting,
}

impl Work<'_> {
    /// Posts both parities over `idx` and reports whether they differ.
    fn compare(&mut self, idx: &[usize], tag: Tag) -> bool {
        let pa = self.a.parity_of(idx);
        let pb = self.b.parity_of(idx);
        self.t.post(Party::Alice, tag, encode_parity(pa));
        self.t.post(Party::Bob, tag, encode_parity(pb));
        self.acc.parity_bits_disclosed += 2;
        pa != pb
    }

    fn discard(&mut self, i: usize) {
        self.dead[i] = true;
        self.acc.bits_discarded += 1;
    }

    /// Compares, then discards the last compared bit. Returns the remaining
    /// indices and whether the parities differed.
    fn compare_and_discard<'s>(&mut self, idx: &'s [usize], tag: Tag) -> (&'s [usize], bool) {
        let differ = self.compare(idx, tag);
        let (&last, rest) = idx.split_last().expect("compared set is nonempty");
        self.discard(last);
        (rest, differ)
    }

    /// Binary search for an error in `idx`, whose parity is believed to differ.
    fn bisect(&mut self, idx: &[usize]) {
        match idx.len() {
            0 => {}
            1 => {
                self.dead[idx[0]] = true;
                self.acc.errors_deleted += 1;
            }
            n => {
                self.acc.bisections += 1;
                let (left, right) = idx.split_at(n.div_ceil(2));
                let (left_rest, left_bad) = self.compare_and_discard(left, Tag::BlockParity);
                let (right_rest, right_bad) = self.compare_and_discard(right, Tag::BlockParity);
                if left_bad {
                    self.bisect(left_rest);
                }
                if right_bad {
                    self.bisect(right_rest);
                }
            }
        }
    }

    fn compact(&mut self) {
        let dead: Vec<usize> = (0..self.dead.len()).filter(|&i| self.dead[i]).collect();
        self.a.remove_positions(&dead);
        self.b.remove_positions(&dead);
        self.dead = vec![false; self.a.len()];
    }

    fn permute(&mut self, rng: &mut Rng) {
        let perm = rng.permutation(self.a.len());
        self.t.post(Party::Alice, Tag::Permutation, encode_indices(&perm));
        self.a = self.a.permuted(&perm);
        self.b = self.b.permuted(&perm);
    }
}

/// Removes the disagreements between two equal-length keys.
///
/// Each of `max_passes` passes publicly agrees a random permutation, splits
/// the permuted key into blocks of [`block_length`] bits and compares block
/// parities; a block whose parity differs is bisected until the wrong bit is
/// isolated and deleted. Then random-subset parity checks, with the same
/// repair, run until `n_clean` consecutive checks agree. The last bit of
/// every compared block, subblock or subset is discarded.
///
/// The parties cannot see whether they succeeded. The simulator can, and
/// returns [`ProtocolError::ReconciliationFailed`] if the keys still differ.
pub fn reconcile(
    key_a: &Bitstring,
    key_b: &Bitstring,
    rate: f64,
    params: &ReconcileParams,
    rng: &mut Rng,
    t: &mut PublicTranscript,
) -> Result<Reconciled, ProtocolError> {
    if key_a.len() != key_b.len() {
        return Err(ProtocolError::LengthMismatch {
            left: key_a.len(),
            right: key_b.len(),
        });
    }
    let mut w = Work {
        a: key_a.clone(),
        b: key_b.clone(),
        dead: vec![false; key_a.len()],
        t,
        acc: DistillAccounting::default(),
    };

    for _ in 0..params.max_passes {
        if w.a.len() < 2 {
            break;
        }
        w.acc.passes += 1;
        w.permute(rng);
        let l = block_length(rate, &params.block_policy, w.a.len());
        let blocks: Vec<Vec<usize>> = (0..w.a.len())
            .collect::<Vec<_>>()
            .chunks(l)
            .filter(|c| c.len() >= 2)
            .map(<[usize]>::to_vec)
            .collect();
        for block in &blocks {
            let (rest, differ) = w.compare_and_discard(block, Tag::BlockParity);
            if differ {
                w.bisect(rest);
            }
        }
        w.compact();
    }

    let mut clean = 0;
    while clean < params.n_clean && w.acc.subset_checks < params.subset_budget && w.a.len() >= 2 {
        w.acc.subset_checks += 1;
        let subset = rng.nonempty_subset(w.a.len());
        w.t.post(Party::Alice, Tag::CheckSubset, encode_indices(&subset));
        let (rest, differ) = w.compare_and_discard(&subset, Tag::SubsetParity);
        if differ {
            clean = 0;
            w.bisect(rest);
        } else {
            clean += 1;
        }
        w.compact();
    }

    let differing = w.a.hamming(&w.b);
    if differing > 0 {
        return Err(ProtocolError::ReconciliationFailed { differing });
    }
    Ok(Reconciled {
        alice: w.a,
        bob: w.b,
        accounting: w.acc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noisy_pair(n: usize, p: f64, seed: u64) -> (Bitstring, Bitstring) {
        let mut rng = Rng::new(seed);
        let a: Bitstring = (0..n).map(|_| rng.coin()).collect();
        let mut b = a.clone();
        for i in 0..n {
            if rng.bernoulli(p) {
                b.flip(i);
            }
        }
        (a, b)
    }

    #[test]
    fn identical_keys_lose_only_discards() {
        let (a, _) = noisy_pair(500, 0.0, 1);
        let mut t = PublicTranscript::new();
        let out = reconcile(&a, &a, 0.0, &ReconcileParams::default(), &mut Rng::new(2), &mut t).unwrap();
        let acc = &out.accounting;
        assert_eq!(acc.bisections, 0);
        assert_eq!(acc.errors_deleted, 0);
        assert_eq!(out.alice.len(), 500 - acc.bits_discarded);
        assert_eq!(out.alice, out.bob);
        assert_eq!(acc.subset_checks, 10);
    }

    #[test]
    fn single_error_found_in_log_steps() {
        let a: Bitstring = "1011001110001011".parse().unwrap();
        for pos in 0..16 {
            let mut b = a.clone();
            b.flip(pos);
            let params = ReconcileParams {
                block_policy: BlockPolicy::Fixed(8),
                max_passes: 1,
                ..ReconcileParams::default()
            };
            let mut t = PublicTranscript::new();
            let out = reconcile(&a, &b, 0.1, &params, &mut Rng::new(pos as u64), &mut t).unwrap();
            assert_eq!(out.alice, out.bob);
            assert!(
                out.accounting.bisections <= 3,
                "pos {pos}: {}",
                out.accounting.bisections
            );
        }
    }

    #[test]
    fn discards_match_posted_comparisons() {
        let (a, b) = noisy_pair(2000, 0.03, 3);
        let mut t = PublicTranscript::new();
        let out = reconcile(&a, &b, 0.03, &ReconcileParams::default(), &mut Rng::new(4), &mut t).unwrap();
        let acc = &out.accounting;
        let comparisons = t.count(Party::Alice, Tag::BlockParity) + t.count(Party::Alice, Tag::SubsetParity);
        assert_eq!(acc.bits_discarded, comparisons);
        assert_eq!(
            t.count(Party::Bob, Tag::BlockParity) + t.count(Party::Bob, Tag::SubsetParity),
            comparisons
        );
        assert_eq!(out.alice.len(), 2000 - acc.bits_discarded - acc.errors_deleted);
        assert_eq!(t.count(Party::Alice, Tag::Permutation), acc.passes);
    }

    #[test]
    fn length_mismatch() {
        let a: Bitstring = "101".parse().unwrap();
        let b: Bitstring = "10".parse().unwrap();
        let err = reconcile(
            &a,
            &b,
            0.0,
            &ReconcileParams::default(),
            &mut Rng::new(0),
            &mut PublicTranscript::new(),
        );
        assert_eq!(err.unwrap_err(), ProtocolError::LengthMismatch { left: 3, right: 2 });
    }

    #[test]
    fn tiny_keys() {
        let mut t = PublicTranscript::new();
        let e = Bitstring::new();
        let out = reconcile(&e, &e, 0.0, &ReconcileParams::default(), &mut Rng::new(0), &mut t).unwrap();
        assert!(out.alice.is_empty() && t.is_empty());
        let one: Bitstring = "1".parse().unwrap();
        let out = reconcile(&one, &one, 0.0, &ReconcileParams::default(), &mut Rng::new(0), &mut t).unwrap();
        assert_eq!(out.alice, one);
    }

    #[test]
    fn params_validation() {
        assert!(ReconcileParams::default().validate().is_ok());
        let p = ReconcileParams {
            n_clean: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        let p = ReconcileParams {
            block_policy: BlockPolicy::Fixed(1),
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }
}
