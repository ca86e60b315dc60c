//! Finite-level automorphisms of the binary rooted tree.
//!
//! A depth-`n` tree automorphism is stored as its *portrait*: one swap bit
//! per internal vertex, `2^n - 1` bits total. Vertices are ordered
//! breadth-first; within a depth they are ordered lexicographically by word,
//! with letter `0` before letter `1`.
//!
//! Conventions (fixed across the whole crate):
//! * Words are read with the **first** letter selecting the child of the
//!   root, so an element `(u, v)` acts by `u` on subtree `0` and by `v` on
//!   subtree `1`, and `sigma` flips the first letter.
//! * The product `p * q` applies `q` first, so `sigma * (u,v) = (v,u) * sigma`
//!   holds literally.
//! * A leaf word maps to an integer with its first letter as the least
//!   significant bit. Under this reading the standard adding machine sends
//!   the leaf `j` to `j + 1 mod 2^n`.
//!
//! The text encoding is `"n:HEX"` where the bits are packed LSB-first into
//! bytes in vertex order and each byte prints as two lowercase hex digits.

use std::fmt;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::twoadic::TwoAdic;

/// Hard cap on tree depth. A portrait at the cap already holds `2^30 - 1`
/// bits; practical group computation stays far below this.
pub const MAX_LEVEL: u32 = 30;

/// A validated tree depth, `0..=MAX_LEVEL`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Level(u8);

impl Level {
    pub fn new(n: u32) -> Result<Self> {
        if n > MAX_LEVEL {
            return Err(Error::LevelTooLarge(n as u64));
        }
        Ok(Level(n as u8))
    }

    pub const fn get(self) -> u32 {
        self.0 as u32
    }

    /// Number of internal vertices (= portrait bits) of `T_n`.
    pub const fn bit_count(self) -> u64 {
        (1u64 << self.0) - 1
    }

    /// Number of leaves of `T_n`.
    pub const fn leaf_count(self) -> u64 {
        1u64 << self.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[inline]
fn word_count(bits: u64) -> usize {
    ((bits + 63) / 64) as usize
}

/// Reusable buffers for the vertex-image walk used by products, inverses
/// and leaf actions. One scratch can be shared across many calls; the BFS
/// closure keeps one per worker.
#[derive(Default)]
pub struct Scratch {
    cur: Vec<u32>,
    next: Vec<u32>,
}

/// A finite-level tree automorphism, one swap bit per internal vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Portrait {
    level: u8,
    bits: SmallVec<[u64; 2]>,
}

impl Portrait {
    fn zero(level: Level) -> Self {
        Portrait {
            level: level.get() as u8,
            bits: smallvec![0u64; word_count(level.bit_count())],
        }
    }

    /// The identity automorphism of `T_n`.
    pub fn identity(level: Level) -> Self {
        Self::zero(level)
    }

    /// The order-2 element exchanging the two maximal subtrees: a single
    /// swap bit at the root.
    pub fn sigma(level: Level) -> Result<Self> {
        if level.get() == 0 {
            return Err(Error::LevelZero);
        }
        let mut p = Self::zero(level);
        p.set_bit(0);
        Ok(p)
    }

    /// A single swap at the vertex with position `index` on `depth`
    /// (depth < level, index < 2^depth). These generate the whole level
    /// group.
    pub fn single_swap(level: Level, depth: u32, index: u64) -> Result<Self> {
        if depth >= level.get() || index >= (1u64 << depth) {
            return Err(Error::Parameter(format!(
                "no internal vertex at depth {depth}, index {index} in T_{level}"
            )));
        }
        let mut p = Self::zero(level);
        p.set_bit(((1u64 << depth) - 1) + index);
        Ok(p)
    }

    pub fn level(&self) -> Level {
        Level(self.level)
    }

    pub fn is_identity(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Swap bit at the root; `false` for the (unique) level-0 element.
    pub fn root_swap(&self) -> bool {
        self.level > 0 && self.get_bit(0)
    }

    #[inline]
    fn get_bit(&self, pos: u64) -> bool {
        (self.bits[(pos >> 6) as usize] >> (pos & 63)) & 1 == 1
    }

    #[inline]
    fn set_bit(&mut self, pos: u64) {
        self.bits[(pos >> 6) as usize] |= 1u64 << (pos & 63);
    }

    #[inline]
    fn assign_bit(&mut self, pos: u64, value: bool) {
        if value {
            self.set_bit(pos);
        }
    }

    fn check_same_level(&self, other: &Portrait) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level as u32, other.level as u32));
        }
        Ok(())
    }

    /// Assemble the level-`n` element `(p0, p1) * sigma^swap` from two
    /// level-`n-1` sections.
    pub fn pair(p0: &Portrait, p1: &Portrait, swap: bool) -> Result<Portrait> {
        p0.check_same_level(p1)?;
        let level = Level::new(p0.level as u32 + 1)?;
        let mut out = Portrait::zero(level);
        out.assign_bit(0, swap);
        for d in 0..p0.level as u32 {
            let src = (1u64 << d) - 1;
            let dst = (1u64 << (d + 1)) - 1;
            let width = 1u64 << d;
            for i in 0..width {
                out.assign_bit(dst + i, p0.get_bit(src + i));
                out.assign_bit(dst + width + i, p1.get_bit(src + i));
            }
        }
        Ok(out)
    }

    /// Split off the root: the unique `(p0, p1, swap)` with
    /// `self = (p0, p1) * sigma^swap`.
    pub fn decompose(&self) -> Result<(Portrait, Portrait, bool)> {
        if self.level == 0 {
            return Err(Error::LevelZero);
        }
        let sub = Level(self.level - 1);
        let mut p0 = Portrait::zero(sub);
        let mut p1 = Portrait::zero(sub);
        for d in 0..sub.get() {
            let src = (1u64 << (d + 1)) - 1;
            let dst = (1u64 << d) - 1;
            let width = 1u64 << d;
            for i in 0..width {
                p0.assign_bit(dst + i, self.get_bit(src + i));
                p1.assign_bit(dst + i, self.get_bit(src + width + i));
            }
        }
        Ok((p0, p1, self.get_bit(0)))
    }

    /// Group product; `q` acts first.
    pub fn compose(&self, q: &Portrait) -> Result<Portrait> {
        self.compose_with(q, &mut Scratch::default())
    }

    /// Product with caller-provided scratch buffers (hot loops).
    ///
    /// Walks every vertex `u` with its image `w = self(u)`; the product's
    /// swap bit at `w` is `q[u] xor self[w]`.
    pub fn compose_with(&self, q: &Portrait, scratch: &mut Scratch) -> Result<Portrait> {
        self.check_same_level(q)?;
        let n = self.level as u32;
        let mut out = Portrait::zero(self.level());
        let cur = &mut scratch.cur;
        let next = &mut scratch.next;
        cur.clear();
        cur.push(0);
        for d in 0..n {
            let base = (1u64 << d) - 1;
            if d + 1 < n {
                next.clear();
                next.resize(1usize << (d + 1), 0);
            }
            for (i, &wi) in cur.iter().enumerate() {
                let w = wi as u64;
                let pb = self.get_bit(base + w);
                let qb = q.get_bit(base + i as u64);
                if pb != qb {
                    out.set_bit(base + w);
                }
                if d + 1 < n {
                    let flip = pb as u32;
                    next[2 * i] = 2 * wi + flip;
                    next[2 * i + 1] = 2 * wi + (1 ^ flip);
                }
            }
            if d + 1 < n {
                std::mem::swap(cur, next);
            }
        }
        Ok(out)
    }

    /// Group inverse: the inverse's swap bit at `u` is this element's bit
    /// at the image vertex `self(u)`.
    pub fn inverse(&self) -> Portrait {
        let n = self.level as u32;
        let mut out = Portrait::zero(self.level());
        let mut cur: Vec<u32> = vec![0];
        for d in 0..n {
            let base = (1u64 << d) - 1;
            let mut next = if d + 1 < n {
                vec![0u32; 1usize << (d + 1)]
            } else {
                Vec::new()
            };
            for (i, &wi) in cur.iter().enumerate() {
                let w = wi as u64;
                let pb = self.get_bit(base + w);
                if pb {
                    out.set_bit(base + i as u64);
                }
                if d + 1 < n {
                    let flip = pb as u32;
                    next[2 * i] = 2 * wi + flip;
                    next[2 * i + 1] = 2 * wi + (1 ^ flip);
                }
            }
            cur = next;
        }
        out
    }

    /// Image of a leaf, both given as integers with the first letter in the
    /// least significant bit.
    pub fn apply_index(&self, leaf: u64) -> Result<u64> {
        if self.level < 64 && leaf >= (1u64 << self.level) {
            return Err(Error::LeafLength {
                got: 64 - leaf.leading_zeros() as usize,
                want: self.level as usize,
            });
        }
        let mut prefix = 0u64; // image prefix, read as vertex index
        let mut out = 0u64;
        for d in 0..self.level as u32 {
            let b = self.get_bit(((1u64 << d) - 1) + prefix);
            let y = ((leaf >> d) & 1) ^ (b as u64);
            out |= y << d;
            prefix = 2 * prefix + y;
        }
        Ok(out)
    }

    /// Image of a leaf given as a letter sequence (first letter first).
    pub fn apply(&self, leaf: &[bool]) -> Result<Vec<bool>> {
        if leaf.len() != self.level as usize {
            return Err(Error::LeafLength {
                got: leaf.len(),
                want: self.level as usize,
            });
        }
        let mut index = 0u64;
        for (d, &x) in leaf.iter().enumerate() {
            index |= (x as u64) << d;
        }
        let image = self.apply_index(index)?;
        Ok((0..self.level as usize).map(|d| (image >> d) & 1 == 1).collect())
    }

    /// Restriction to `T_m`, `m <= level`. A group homomorphism.
    pub fn truncate(&self, m: Level) -> Result<Portrait> {
        if m.get() > self.level as u32 {
            return Err(Error::TruncateBeyond {
                target: m.get(),
                have: self.level as u32,
            });
        }
        let mut out = Portrait::zero(m);
        let nbits = m.bit_count();
        for (i, w) in out.bits.iter_mut().enumerate() {
            *w = self.bits[i];
        }
        let tail = nbits & 63;
        if tail != 0 {
            let last = out.bits.len() - 1;
            out.bits[last] &= (1u64 << tail) - 1;
        }
        Ok(out)
    }

    /// Parity of the permutation induced on level `m`, `1 <= m <= level`:
    /// `-1` iff the number of swap bits on depth `m-1` is odd.
    pub fn sign(&self, m: u32) -> Result<i32> {
        if m == 0 || m > self.level as u32 {
            return Err(Error::SignLevel {
                m,
                level: self.level as u32,
            });
        }
        let start = (1u64 << (m - 1)) - 1;
        let end = (1u64 << m) - 1;
        Ok(if self.parity_in_range(start, end) { -1 } else { 1 })
    }

    fn parity_in_range(&self, start: u64, end: u64) -> bool {
        let mut ones = 0u32;
        let mut pos = start;
        while pos < end {
            let word = (pos >> 6) as usize;
            let offset = pos & 63;
            let take = (64 - offset).min(end - pos);
            let mask = if take == 64 {
                !0u64
            } else {
                ((1u64 << take) - 1) << offset
            };
            ones ^= (self.bits[word] & mask).count_ones() & 1;
            pos += take;
        }
        ones & 1 == 1
    }

    /// All level signs `sgn_1 .. sgn_n` at once.
    pub fn sign_vector(&self) -> SignVector {
        let signs = (1..=self.level as u32)
            .map(|m| self.sign(m).expect("m in range"))
            .collect();
        SignVector {
            level: self.level(),
            signs,
        }
    }

    /// Signs packed into a mask: bit `m-1` set iff `sgn_m = -1`.
    pub fn sign_bits(&self) -> u32 {
        let mut mask = 0u32;
        for m in 1..=self.level as u32 {
            if self.sign(m).expect("m in range") < 0 {
                mask |= 1 << (m - 1);
            }
        }
        mask
    }

    /// True iff the element permutes its full leaf level in a single cycle;
    /// equivalently all signs are `-1`.
    pub fn is_full_cycle(&self) -> bool {
        self.level > 0 && (1..=self.level as u32).all(|m| self.sign(m).unwrap() < 0)
    }

    /// Integer power. Exponents act modulo `2^level`, the exponent of the
    /// whole level group.
    pub fn pow(&self, k: i64) -> Portrait {
        let modulus = 1u128 << self.level;
        let e = (k as i128).rem_euclid(modulus as i128) as u64;
        self.pow_reduced(e)
    }

    /// Power with a 2-adic exponent. The exponent's precision must cover
    /// the element's order; the residue is reduced modulo that order.
    pub fn pow_twoadic(&self, k: &TwoAdic) -> Result<Portrait> {
        let need = self.order_log2();
        if k.precision() < need {
            return Err(Error::Precision {
                have: k.precision(),
                need,
            });
        }
        let e = if need == 0 { 0 } else { k.residue() & ((1u64 << need) - 1) };
        Ok(self.pow_reduced(e))
    }

    fn pow_reduced(&self, mut e: u64) -> Portrait {
        let mut acc = Portrait::identity(self.level());
        let mut base = self.clone();
        let mut scratch = Scratch::default();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose_with(&base, &mut scratch).expect("same level");
            }
            e >>= 1;
            if e > 0 {
                base = base.compose_with(&base, &mut scratch).expect("same level");
            }
        }
        acc
    }

    /// Smallest `e` with `self^(2^e) = 1`. Every element of a level group
    /// has 2-power order.
    pub fn order_log2(&self) -> u32 {
        let mut e = 0;
        let mut cur = self.clone();
        let mut scratch = Scratch::default();
        while !cur.is_identity() {
            cur = {
                let sq = cur.compose_with(&cur, &mut scratch).expect("same level");
                sq
            };
            e += 1;
        }
        e
    }

    /// Text encoding `"n:HEX"`, bits packed LSB-first into bytes.
    pub fn encode(&self) -> String {
        let nbits = self.level().bit_count();
        let nbytes = ((nbits + 7) / 8) as usize;
        let mut s = format!("{}:", self.level);
        for j in 0..nbytes {
            let mut byte = 0u8;
            for t in 0..8 {
                let pos = (8 * j + t) as u64;
                if pos < nbits && self.get_bit(pos) {
                    byte |= 1 << t;
                }
            }
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }

    /// Parse the `"n:HEX"` encoding.
    pub fn decode(text: &str) -> Result<Portrait> {
        let (level_part, hex_part) = text
            .split_once(':')
            .ok_or_else(|| Error::Encoding(format!("missing ':' in {text:?}")))?;
        let n: u32 = level_part
            .trim()
            .parse()
            .map_err(|_| Error::Encoding(format!("bad level in {text:?}")))?;
        let level = Level::new(n)?;
        let nbits = level.bit_count();
        let nbytes = ((nbits + 7) / 8) as usize;
        let hex = hex_part.trim();
        if hex.len() != 2 * nbytes {
            return Err(Error::Encoding(format!(
                "expected {} hex digits for level {}, got {}",
                2 * nbytes,
                n,
                hex.len()
            )));
        }
        let mut out = Portrait::zero(level);
        for j in 0..nbytes {
            let byte = u8::from_str_radix(&hex[2 * j..2 * j + 2], 16)
                .map_err(|_| Error::Encoding(format!("bad hex in {text:?}")))?;
            for t in 0..8u64 {
                let pos = 8 * j as u64 + t;
                if (byte >> t) & 1 == 1 {
                    if pos >= nbits {
                        return Err(Error::Encoding(
                            "nonzero padding bits".to_string(),
                        ));
                    }
                    out.set_bit(pos);
                }
            }
        }
        Ok(out)
    }

    /// Uniformly random element, deterministic per seed.
    pub fn random(level: Level, seed: u64) -> Portrait {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(level, &mut rng)
    }

    pub fn random_with<R: rand::Rng>(level: Level, rng: &mut R) -> Portrait {
        let mut p = Portrait::zero(level);
        let nbits = level.bit_count();
        for w in p.bits.iter_mut() {
            *w = rng.gen();
        }
        let tail = nbits & 63;
        if tail != 0 && !p.bits.is_empty() {
            let last = p.bits.len() - 1;
            p.bits[last] &= (1u64 << tail) - 1;
        }
        p
    }

    /// All elements of the level group, in numeric bit-pattern order.
    /// Intended for exhaustive desk-scale scans (level <= 4 has 32768
    /// elements); callers guard larger levels.
    pub fn enumerate_all(level: Level) -> impl Iterator<Item = Portrait> {
        let nbits = level.bit_count();
        assert!(nbits <= 26, "exhaustive enumeration limited to small levels");
        (0u64..(1u64 << nbits)).map(move |pattern| {
            let mut p = Portrait::zero(level);
            if !p.bits.is_empty() {
                p.bits[0] = pattern;
            }
            p
        })
    }
}

impl fmt::Display for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

impl fmt::Debug for Portrait {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Portrait({})", self.encode())
    }
}

/// The signs of the permutations induced on levels `1..=n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignVector {
    pub level: Level,
    pub signs: Vec<i32>,
}

impl SignVector {
    pub fn all_negative(&self) -> bool {
        !self.signs.is_empty() && self.signs.iter().all(|&s| s < 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn level(n: u32) -> Level {
        Level::new(n).unwrap()
    }

    /// Standard adding machine at finite level, built directly:
    /// `odo(n) = (odo(n-1), 1) * sigma`.
    fn odometer(n: u32) -> Portrait {
        let mut p = Portrait::identity(level(0));
        for m in 0..n {
            let id = Portrait::identity(level(m));
            p = Portrait::pair(&p, &id, true).unwrap();
        }
        p
    }

    #[test]
    fn identity_and_sigma_encodings() {
        assert_eq!(Portrait::identity(level(0)).encode(), "0:");
        assert_eq!(Portrait::identity(level(3)).encode(), "3:00");
        assert_eq!(Portrait::identity(level(4)).encode(), "4:0000");
        assert_eq!(Portrait::sigma(level(3)).unwrap().encode(), "3:01");
        assert!(Portrait::sigma(level(0)).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let id = Portrait::identity(level(4));
        for seed in 0..20 {
            let p = Portrait::random(level(4), seed);
            assert_eq!(id.compose(&p).unwrap(), p);
            assert_eq!(p.compose(&id).unwrap(), p);
        }
    }

    #[test]
    fn sigma_squares_to_identity() {
        for n in 1..=8 {
            let s = Portrait::sigma(level(n)).unwrap();
            assert!(s.compose(&s).unwrap().is_identity());
            assert_eq!(s.sign(1).unwrap(), -1);
            for m in 2..=n {
                assert_eq!(s.sign(m).unwrap(), 1);
            }
        }
    }

    #[test]
    fn pair_frozen_encoding() {
        // (sigma, 1) at level 2: single swap at vertex "0".
        let p = Portrait::pair(
            &Portrait::sigma(level(1)).unwrap(),
            &Portrait::identity(level(1)),
            false,
        )
        .unwrap();
        assert_eq!(p.encode(), "2:02");
        // pair(1, 1, swap) at level 1 is sigma.
        let s = Portrait::pair(
            &Portrait::identity(level(0)),
            &Portrait::identity(level(0)),
            true,
        )
        .unwrap();
        assert_eq!(s, Portrait::sigma(level(1)).unwrap());
    }

    #[test]
    fn pair_decompose_roundtrip() {
        for seed in 0..50 {
            let p0 = Portrait::random(level(5), 2 * seed);
            let p1 = Portrait::random(level(5), 2 * seed + 1);
            let swap = seed % 2 == 0;
            let p = Portrait::pair(&p0, &p1, swap).unwrap();
            assert_eq!(p.decompose().unwrap(), (p0, p1, swap));
        }
    }

    #[test]
    fn compose_matches_pair_algebra() {
        // ((u,v)s)^2 = (u v, v u) for the swap case.
        for seed in 0..20 {
            let u = Portrait::random(level(4), 3 * seed);
            let v = Portrait::random(level(4), 3 * seed + 1);
            let p = Portrait::pair(&u, &v, true).unwrap();
            let square = p.compose(&p).unwrap();
            let expect = Portrait::pair(
                &u.compose(&v).unwrap(),
                &v.compose(&u).unwrap(),
                false,
            )
            .unwrap();
            assert_eq!(square, expect);
        }
    }

    #[test]
    fn associativity_random_triples() {
        let mut scratch = Scratch::default();
        for seed in 0..1000u64 {
            let a = Portrait::random(level(6), 3 * seed);
            let b = Portrait::random(level(6), 3 * seed + 1);
            let c = Portrait::random(level(6), 3 * seed + 2);
            let left = a
                .compose_with(&b, &mut scratch)
                .unwrap()
                .compose_with(&c, &mut scratch)
                .unwrap();
            let right = a
                .compose_with(&b.compose_with(&c, &mut scratch).unwrap(), &mut scratch)
                .unwrap();
            assert_eq!(left, right);
        }
    }

    #[test]
    fn inverse_laws() {
        for n in [0u32, 1, 3, 6] {
            for seed in 0..20 {
                let p = Portrait::random(level(n), seed);
                assert!(p.compose(&p.inverse()).unwrap().is_identity());
                assert!(p.inverse().compose(&p).unwrap().is_identity());
                assert_eq!(p.inverse().inverse(), p);
            }
        }
        let s = Portrait::sigma(level(5)).unwrap();
        assert_eq!(s.inverse(), s);
    }

    #[test]
    fn apply_flips_first_letter_only_for_sigma() {
        let s = Portrait::sigma(level(2)).unwrap();
        // "01" means first letter 0, second letter 1.
        let image = s.apply(&[false, true]).unwrap();
        assert_eq!(image, vec![true, true]);
    }

    #[test]
    fn apply_is_a_bijection() {
        let p = Portrait::random(level(8), 99);
        let mut seen = vec![false; 256];
        for leaf in 0..256 {
            let img = p.apply_index(leaf).unwrap();
            assert!(!seen[img as usize]);
            seen[img as usize] = true;
        }
    }

    #[test]
    fn apply_composes_contravariantly() {
        for seed in 0..50 {
            let p = Portrait::random(level(6), 2 * seed);
            let q = Portrait::random(level(6), 2 * seed + 1);
            let pq = p.compose(&q).unwrap();
            for leaf in [0u64, 1, 17, 63] {
                assert_eq!(
                    pq.apply_index(leaf).unwrap(),
                    p.apply_index(q.apply_index(leaf).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn odometer_adds_one() {
        for n in [1u32, 2, 5, 8] {
            let a = odometer(n);
            for j in 0..(1u64 << n) {
                assert_eq!(a.apply_index(j).unwrap(), (j + 1) % (1 << n));
            }
        }
        assert_eq!(odometer(2).encode(), "2:03");
    }

    #[test]
    fn truncate_is_a_homomorphism() {
        for seed in 0..50 {
            let p = Portrait::random(level(6), 2 * seed);
            let q = Portrait::random(level(6), 2 * seed + 1);
            let m = level(3);
            let lhs = p.compose(&q).unwrap().truncate(m).unwrap();
            let rhs = p
                .truncate(m)
                .unwrap()
                .compose(&q.truncate(m).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
        let p = Portrait::random(level(5), 7);
        assert!(p.truncate(level(0)).unwrap().is_identity());
        assert!(p.truncate(level(6)).is_err());
    }

    #[test]
    fn signs_multiply() {
        for seed in 0..50 {
            let p = Portrait::random(level(6), 2 * seed);
            let q = Portrait::random(level(6), 2 * seed + 1);
            let pq = p.compose(&q).unwrap();
            for m in 1..=6 {
                assert_eq!(
                    pq.sign(m).unwrap(),
                    p.sign(m).unwrap() * q.sign(m).unwrap()
                );
            }
        }
    }

    #[test]
    fn sign_errors() {
        let p = Portrait::random(level(3), 0);
        assert!(p.sign(0).is_err());
        assert!(p.sign(4).is_err());
    }

    #[test]
    fn power_basics() {
        let a = odometer(5);
        assert!(a.pow(0).is_identity());
        assert!(a.pow(32).is_identity());
        assert_eq!(a.pow(3), a.compose(&a).unwrap().compose(&a).unwrap());
        assert_eq!(a.pow(-1), a.inverse());
        let s = Portrait::sigma(level(4)).unwrap();
        let k = TwoAdic::new(3, 4).unwrap();
        assert_eq!(s.pow_twoadic(&k).unwrap(), s);
    }

    #[test]
    fn power_twoadic_precision_guard() {
        let a = odometer(8); // order 2^8
        let k = TwoAdic::new(3, 4).unwrap();
        assert!(matches!(a.pow_twoadic(&k), Err(Error::Precision { .. })));
        let k = TwoAdic::new(3, 10).unwrap();
        let cube = a.pow_twoadic(&k).unwrap();
        assert_eq!(cube, a.pow(3));
    }

    #[test]
    fn order_log2_by_squaring() {
        assert_eq!(Portrait::identity(level(4)).order_log2(), 0);
        assert_eq!(Portrait::sigma(level(4)).unwrap().order_log2(), 1);
        for n in 1..=8 {
            assert_eq!(odometer(n).order_log2(), n);
        }
    }

    #[test]
    fn encode_decode_roundtrip() {
        for n in [0u32, 1, 2, 5, 9] {
            for seed in 0..40 {
                let p = Portrait::random(level(n), seed);
                assert_eq!(Portrait::decode(&p.encode()).unwrap(), p);
            }
        }
    }

    #[test]
    fn decode_rejects_malformed_text() {
        assert!(Portrait::decode("3").is_err());
        assert!(Portrait::decode("x:00").is_err());
        assert!(Portrait::decode("3:0").is_err());
        assert!(Portrait::decode("3:0100").is_err());
        assert!(Portrait::decode("3:zz").is_err());
        assert!(Portrait::decode("3:80").is_err()); // padding bit set
        assert!(Portrait::decode("31:00").is_err()); // beyond max level
    }

    #[test]
    fn random_is_seed_deterministic() {
        assert_eq!(Portrait::random(level(7), 42), Portrait::random(level(7), 42));
        assert_ne!(Portrait::random(level(7), 42), Portrait::random(level(7), 43));
    }

    #[test]
    fn random_sign_balance() {
        let trials = 10_000;
        let negatives = (0..trials)
            .filter(|&seed| Portrait::random(level(4), seed).sign(1).unwrap() < 0)
            .count() as f64;
        // Binomial(10^4, 1/2): five sigma is 250.
        assert!((negatives - 5000.0).abs() < 250.0, "negatives = {negatives}");
    }

    #[test]
    fn full_cycle_proportion() {
        // Exhaustive at level 3: exactly 2^-3 of all 128 elements.
        let count = Portrait::enumerate_all(level(3))
            .filter(|p| p.is_full_cycle())
            .count();
        assert_eq!(count, 16);
        // Empirical at level 6: proportion 2^-6 within five sigma.
        let trials = 10_000u64;
        let p = 1.0 / 64.0;
        let hits = (0..trials)
            .filter(|&seed| Portrait::random(level(6), 1000 + seed).is_full_cycle())
            .count() as f64;
        let mean = trials as f64 * p;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((hits - mean).abs() < 5.0 * sigma, "hits = {hits}");
    }

    #[test]
    fn full_cycle_matches_leaf_orbit() {
        for pattern in Portrait::enumerate_all(level(3)) {
            let mut leaf = 0u64;
            let mut steps = 0;
            loop {
                leaf = pattern.apply_index(leaf).unwrap();
                steps += 1;
                if leaf == 0 {
                    break;
                }
            }
            assert_eq!(steps == 8, pattern.is_full_cycle());
        }
    }

    #[test]
    fn level_bounds() {
        assert!(Level::new(30).is_ok());
        assert!(Level::new(31).is_err());
    }

    #[test]
    fn level_mismatch_errors() {
        let p = Portrait::random(level(3), 0);
        let q = Portrait::random(level(4), 0);
        assert!(p.compose(&q).is_err());
        assert!(Portrait::pair(&p, &q, false).is_err());
        assert!(p.apply(&[false; 2]).is_err());
    }
}
