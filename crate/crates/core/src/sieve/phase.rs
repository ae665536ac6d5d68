use std::collections::{BTreeMap, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::rational::Rat;
use crate::lattice::TorusVec;

/// Multiset key: the offset from the spot center, followed (when noisy) by the
/// drift from the label to the true multiplier. Units are 1/den.
pub type Key = Box<[i128]>;

/// One summand of a phase vector: a multiset of multipliers around a center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spot {
    center: Vec<i128>,
    entries: Vec<(Key, u64)>,
    len: u64,
}

impl Spot {
    fn from_map(center: Vec<i128>, map: HashMap<Key, u64>) -> Spot {
        let mut entries: Vec<(Key, u64)> = map.into_iter().filter(|(_, c)| *c > 0).collect();
        entries.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        let len = entries.iter().map(|(_, c)| c).sum();
        Spot { center, entries, len }
    }

    fn from_list(center: Vec<i128>, keys: impl IntoIterator<Item = Key>) -> Spot {
        let mut map = HashMap::new();
        for key in keys {
            *map.entry(key).or_insert(0) += 1;
        }
        Spot::from_map(center, map)
    }

    pub fn center(&self) -> &[i128] {
        &self.center
    }

    /// Distinct (key, multiplicity) pairs in key order.
    pub fn entries(&self) -> &[(Key, u64)] {
        &self.entries
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The entry at position `idx` of the expanded, key-ordered list.
    fn nth(&self, mut idx: u64) -> &Key {
        for (key, c) in &self.entries {
            if idx < *c {
                return key;
            }
            idx -= c;
        }
        panic!("index beyond spot length");
    }

    /// Sub-multiset covering positions [start, end) of the expanded list.
    fn slice(&self, start: u64, end: u64) -> Spot {
        let mut entries = Vec::new();
        let mut pos = 0u64;
        for (key, c) in &self.entries {
            let (lo, hi) = (pos.max(start), (pos + c).min(end));
            if lo < hi {
                entries.push((key.clone(), hi - lo));
            }
            pos += c;
            if pos >= end {
                break;
            }
        }
        Spot { center: self.center.clone(), entries, len: end - start }
    }
}

/// A single- or double-spot phase vector. Phases are never stored; they are
/// implied by the hidden shift and consulted only by the final measurement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseVector {
    k: usize,
    noisy: bool,
    den: i128,
    radius: i128,
    stage: u64,
    spots: Vec<Spot>,
}

/// Reduces `x` into (−den/2, den/2].
pub fn lift_mod(x: i128, den: i128) -> i128 {
    let r = x.rem_euclid(den);
    if 2 * r > den {
        r - den
    } else {
        r
    }
}

fn add_keys(a: &[i128], b: &[i128]) -> Key {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl PhaseVector {
    /// The length-2 vector (0, y) with the trivial window; `drift` is the true
    /// multiplier minus the label `y`.
    pub fn qubit(den: i128, y: &[i128], drift: Option<&[i128]>) -> PhaseVector {
        let k = y.len();
        let noisy = drift.is_some();
        let w = if noisy { 2 } else { 1 };
        let mut zero = vec![0i128; k * w];
        let mut one: Vec<i128> = y.iter().map(|&v| lift_mod(v, den)).collect();
        if let Some(d) = drift {
            one.extend_from_slice(d);
        } else {
            zero.truncate(k);
        }
        PhaseVector {
            k,
            noisy,
            den,
            radius: den / 2,
            stage: 0,
            spots: vec![Spot::from_list(vec![0; k], [zero.into_boxed_slice(), one.into_boxed_slice()])],
        }
    }

    /// Splits the expanded multiplier list of a single-spot vector into a
    /// double-spot vector by a uniformly random balanced bipartition. The
    /// second spot is re-centered on `target`.
    pub fn split_random<R: Rng + ?Sized>(&self, target: &[i128], rng: &mut R) -> Result<PhaseVector> {
        use rand::seq::SliceRandom;
        if self.spots.len() != 1 || self.len() % 2 != 0 {
            return Err(Error::InvalidArgument("split needs a single spot of even length".into()));
        }
        let spot = &self.spots[0];
        let mut all: Vec<Key> = Vec::with_capacity(spot.len as usize);
        for (key, c) in &spot.entries {
            for _ in 0..*c {
                all.push(key.clone());
            }
        }
        all.shuffle(rng);
        let half = all.len() / 2;
        let k = self.k;
        let den = self.den;
        let center_z: Vec<i128> = spot.center.iter().zip(target).map(|(c, t)| (c + t).rem_euclid(den)).collect();
        let second: Vec<Key> = all[half..]
            .iter()
            .map(|key| {
                let mut v = key.to_vec();
                for i in 0..k {
                    v[i] = lift_mod(spot.center[i] + v[i] - center_z[i], den);
                }
                v.into_boxed_slice()
            })
            .collect();
        let first = all[..half].to_vec();
        Ok(PhaseVector {
            spots: vec![Spot::from_list(spot.center.clone(), first), Spot::from_list(center_z, second)],
            ..self.clone()
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_noisy(&self) -> bool {
        self.noisy
    }

    /// Window half-width in units of 1/den.
    pub fn radius(&self) -> i128 {
        self.radius
    }

    pub fn window_radius(&self) -> Rat {
        Rat::new(self.radius.into(), self.den.into())
    }

    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn set_stage(&mut self, j: u64) {
        self.stage = j;
    }

    pub fn spot_count(&self) -> usize {
        self.spots.len()
    }

    pub fn spots(&self) -> &[Spot] {
        &self.spots
    }

    /// Total number of basis states over all spots.
    pub fn len(&self) -> u64 {
        self.spots.iter().map(|s| s.len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spot_lens(&self) -> Vec<u64> {
        self.spots.iter().map(|s| s.len).collect()
    }

    /// Labels of one spot as torus points, with multiplicities.
    pub fn multipliers(&self, spot: usize) -> Vec<(TorusVec, u64)> {
        let s = &self.spots[spot];
        s.entries
            .iter()
            .map(|(key, c)| {
                let coords = (0..self.k).map(|i| Rat::new((s.center[i] + key[i]).into(), self.den.into()));
                (TorusVec::new(coords), *c)
            })
            .collect()
    }

    /// True multipliers (label plus drift) of one spot, in units of 1/den mod den.
    pub fn true_multipliers(&self, spot: usize) -> Vec<(Vec<i128>, u64)> {
        let s = &self.spots[spot];
        s.entries
            .iter()
            .map(|(key, c)| {
                let v = (0..self.k)
                    .map(|i| {
                        let drift = if self.noisy { key[self.k + i] } else { 0 };
                        (s.center[i] + key[i] + drift).rem_euclid(self.den)
                    })
                    .collect();
                (v, *c)
            })
            .collect()
    }

    /// Reduces offsets into (−den/2, den/2] and resets to the trivial window.
    pub fn wrap_trivial(&mut self) {
        let (k, den) = (self.k, self.den);
        for spot in &mut self.spots {
            let mut map = HashMap::new();
            for (key, c) in spot.entries.drain(..) {
                let mut v = key.into_vec();
                for x in v.iter_mut().take(k) {
                    *x = lift_mod(*x, den);
                }
                *map.entry(v.into_boxed_slice()).or_insert(0) += c;
            }
            *spot = Spot::from_map(spot.center.clone(), map);
        }
        self.radius = den / 2;
    }

    /// Per-coordinate tile index of an offset within the window [−R, R] cut
    /// into 2^{m+1} slabs.
    fn tile_of(&self, key: &[i128], m: u64) -> u64 {
        let tiles = 1i128 << (m + 1);
        let width = 2 * self.radius / tiles;
        let mut idx = 0u64;
        for i in (0..self.k).rev() {
            let t = ((key[i] + self.radius).div_euclid(width)).clamp(0, tiles - 1);
            idx = idx * tiles as u64 + t as u64;
        }
        idx
    }

    fn tile_shift(&self, tile: u64, m: u64) -> Vec<i128> {
        let tiles = 1u64 << (m + 1);
        let half = self.radius / (1i128 << (m + 1));
        let mut t = tile;
        (0..self.k)
            .map(|_| {
                let i = (t % tiles) as i128;
                t /= tiles;
                -self.radius + (2 * i + 1) * half
            })
            .collect()
    }

    /// Counts per (tandem) tile: the exact Born weights of the collimation
    /// measurement, since all amplitudes have equal magnitude.
    pub fn tile_counts(&self, m: u64) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        for spot in &self.spots {
            for (key, c) in &spot.entries {
                *counts.entry(self.tile_of(key, m)).or_insert(0) += c;
            }
        }
        counts
    }

    /// Collimation measurement: samples a tile with Born probability and
    /// returns the posterior at radius R/2^{m+1}, re-centered on that tile.
    pub fn collimate<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> Result<(PhaseVector, u64)> {
        if self.radius % (1i128 << (m + 1)) != 0 {
            return Err(Error::ParameterCeiling("window radius below the grid resolution".into()));
        }
        let counts = self.tile_counts(m);
        let tile = sample_weighted(counts.iter().map(|(t, c)| (*t, *c)), rng);
        Ok((self.restrict_to_tile(tile, m), tile))
    }

    /// Posterior for a given tile outcome.
    pub fn restrict_to_tile(&self, tile: u64, m: u64) -> PhaseVector {
        let shift = self.tile_shift(tile, m);
        let den = self.den;
        let spots = self
            .spots
            .iter()
            .map(|spot| {
                let mut entries = Vec::new();
                for (key, c) in &spot.entries {
                    if self.tile_of(key, m) == tile {
                        let mut v = key.to_vec();
                        for i in 0..self.k {
                            v[i] -= shift[i];
                        }
                        entries.push((v.into_boxed_slice(), *c));
                    }
                }
                // A uniform translation keeps key order.
                let len = entries.iter().map(|(_, c)| c).sum();
                let center = spot.center.iter().zip(&shift).map(|(c, s)| (c + s).rem_euclid(den)).collect();
                Spot { center, entries, len }
            })
            .collect();
        PhaseVector { radius: self.radius >> (m + 1), spots, ..self.clone() }
    }

    /// Part sizes of the near-equal partition of a spot of length `len` into
    /// lengths within [min_len, 4·min_len).
    pub fn partition_sizes(len: u64, min_len: u64) -> Vec<u64> {
        let max_len = 4 * min_len;
        if len < max_len {
            return vec![len];
        }
        let parts = len.div_ceil(max_len - 1);
        let (base, extra) = (len / parts, len % parts);
        (0..parts).map(|i| base + u64::from(i < extra)).collect()
    }

    /// Shortening measurement on every oversized spot separately.
    pub fn shorten<R: Rng + ?Sized>(&self, min_len: u64, rng: &mut R) -> PhaseVector {
        let spots = self
            .spots
            .iter()
            .map(|spot| {
                let sizes = Self::partition_sizes(spot.len, min_len);
                if sizes.len() == 1 {
                    return spot.clone();
                }
                let part = sample_weighted(sizes.iter().copied().enumerate().map(|(i, s)| (i, s)), rng);
                let start: u64 = sizes[..part].iter().sum();
                spot.slice(start, start + sizes[part])
            })
            .collect();
        PhaseVector { spots, ..self.clone() }
    }

    /// Pairing measurement on a double-spot vector: pairs the i-th states of
    /// both spots. Returns the paired qubit, or `None` on an unpaired outcome.
    pub fn pair<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<PhaseQubit>> {
        if self.spots.len() != 2 {
            return Err(Error::InvalidArgument("pairing needs a double-spot vector".into()));
        }
        self.pair_at(rng.gen_range(0..self.len()))
    }

    /// The pairing outcome for basis state `u` of the expanded list Y ++ Z;
    /// every such state carries probability 1/(|Y| + |Z|).
    pub fn pair_at(&self, u: u64) -> Result<Option<PhaseQubit>> {
        if self.spots.len() != 2 || u >= self.len() {
            return Err(Error::InvalidArgument("pairing needs a double-spot vector and an index below its length".into()));
        }
        let (y, z) = (&self.spots[0], &self.spots[1]);
        let pairs = y.len.min(z.len);
        let i = if u < y.len { u } else { u - y.len };
        if i >= pairs {
            return Ok(None);
        }
        let absolute = |spot: &Spot, key: &Key| -> (Vec<i128>, Vec<i128>) {
            let label: Vec<i128> = (0..self.k).map(|c| (spot.center[c] + key[c]).rem_euclid(self.den)).collect();
            let drift = if self.noisy { key[self.k..].to_vec() } else { vec![0; self.k] };
            (label, drift)
        };
        let (v, dv) = absolute(y, y.nth(i));
        let (w, dw) = absolute(z, z.nth(i));
        Ok(Some(PhaseQubit { den: self.den, v, w, drift_v: dv, drift_w: dw }))
    }

    /// Tensor product; a double-spot factor must come first.
    pub fn tensor(&self, other: &PhaseVector) -> Result<PhaseVector> {
        if other.spots.len() != 1 {
            return Err(Error::InvalidArgument("the second tensor factor must be single-spot".into()));
        }
        if self.k != other.k || self.den != other.den || self.noisy != other.noisy {
            return Err(Error::Dimension("incompatible phase vectors".into()));
        }
        let b = &other.spots[0];
        let den = self.den;
        let spots = self
            .spots
            .iter()
            .map(|a| {
                let mut map: HashMap<Key, u64> = HashMap::with_capacity(a.entries.len() * b.entries.len());
                for (ka, ca) in &a.entries {
                    for (kb, cb) in &b.entries {
                        *map.entry(add_keys(ka, kb)).or_insert(0) += ca * cb;
                    }
                }
                let center = a.center.iter().zip(&b.center).map(|(x, y)| (x + y).rem_euclid(den)).collect();
                Spot::from_map(center, map)
            })
            .collect();
        Ok(PhaseVector { radius: self.radius + other.radius, spots, ..self.clone() })
    }

    /// Tensor product followed by a collimation measurement, without
    /// materializing the full product: tile weights are accumulated pair by
    /// pair and only the sampled tile's pairs are kept. Same law and posterior
    /// as `tensor` then `collimate`.
    pub fn tensor_collimate<R: Rng + ?Sized>(&self, other: &PhaseVector, m: u64, rng: &mut R) -> Result<(PhaseVector, u64)> {
        if other.spots.len() != 1 {
            return Err(Error::InvalidArgument("the second tensor factor must be single-spot".into()));
        }
        if self.k != other.k || self.den != other.den || self.noisy != other.noisy {
            return Err(Error::Dimension("incompatible phase vectors".into()));
        }
        let radius = self.radius + other.radius;
        if radius % (1i128 << (m + 1)) != 0 {
            return Err(Error::ParameterCeiling("window radius below the grid resolution".into()));
        }
        let k = self.k;
        let tiles = 1i128 << (m + 1);
        let width = 2 * radius / tiles;
        let b = &other.spots[0];
        let tile_of = |ka: &[i128], kb: &[i128]| -> u64 {
            let mut idx = 0u64;
            for i in (0..k).rev() {
                let t = ((ka[i] + kb[i] + radius).div_euclid(width)).clamp(0, tiles - 1);
                idx = idx * tiles as u64 + t as u64;
            }
            idx
        };
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for a in &self.spots {
            for (ka, ca) in &a.entries {
                for (kb, cb) in &b.entries {
                    *counts.entry(tile_of(ka, kb)).or_insert(0) += ca * cb;
                }
            }
        }
        let tile = sample_weighted(counts.iter().map(|(t, c)| (*t, *c)), rng);
        let probe = PhaseVector { radius, ..self.clone() };
        let shift = probe.tile_shift(tile, m);
        let den = self.den;
        let spots = self
            .spots
            .iter()
            .map(|a| {
                let mut map: HashMap<Key, u64> = HashMap::new();
                for (ka, ca) in &a.entries {
                    for (kb, cb) in &b.entries {
                        if tile_of(ka, kb) == tile {
                            let mut v = add_keys(ka, kb);
                            for i in 0..k {
                                v[i] -= shift[i];
                            }
                            *map.entry(v).or_insert(0) += ca * cb;
                        }
                    }
                }
                let center = (0..k).map(|i| (a.center[i] + b.center[i] + shift[i]).rem_euclid(den)).collect();
                Spot::from_map(center, map)
            })
            .collect();
        Ok((PhaseVector { radius: radius >> (m + 1), spots, ..self.clone() }, tile))
    }

    /// Window soundness: every offset within the radius, centers reduced,
    /// lengths consistent. Returns one message per violation.
    pub fn window_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (n, spot) in self.spots.iter().enumerate() {
            if spot.center.iter().any(|c| *c < 0 || *c >= self.den) {
                out.push(format!("spot {n}: center not reduced"));
            }
            if spot.entries.iter().map(|(_, c)| c).sum::<u64>() != spot.len {
                out.push(format!("spot {n}: length mismatch"));
            }
            for (key, _) in &spot.entries {
                if key[..self.k].iter().any(|o| o.abs() > self.radius) {
                    out.push(format!("spot {n}: multiplier outside window"));
                    break;
                }
            }
        }
        out
    }
}

/// Posterior of the pairing measurement: (|v⟩ + |w⟩)/√2 with labels v, w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseQubit {
    pub den: i128,
    pub v: Vec<i128>,
    pub w: Vec<i128>,
    pub drift_v: Vec<i128>,
    pub drift_w: Vec<i128>,
}

impl PhaseQubit {
    /// True multiplier difference (w − v), mod den.
    pub fn true_difference(&self) -> Vec<i128> {
        (0..self.v.len())
            .map(|i| (self.w[i] + self.drift_w[i] - self.v[i] - self.drift_v[i]).rem_euclid(self.den))
            .collect()
    }

    /// lift(w − v − target) of the labels, coordinate-wise.
    pub fn label_error(&self, target: &[i128]) -> Vec<i128> {
        (0..self.v.len()).map(|i| lift_mod(self.w[i] - self.v[i] - target[i], self.den)).collect()
    }
}

/// Samples an item with probability proportional to its weight.
pub fn sample_weighted<T: Copy, R: Rng + ?Sized>(items: impl Iterator<Item = (T, u64)> + Clone, rng: &mut R) -> T {
    let total: u64 = items.clone().map(|(_, w)| w).sum();
    assert!(total > 0, "cannot sample from empty weights");
    let mut u = rng.gen_range(0..total);
    for (item, w) in items {
        if u < w {
            return item;
        }
        u -= w;
    }
    unreachable!("weights sum to total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn labels(pv: &PhaseVector, spot: usize) -> Vec<(i128, u64)> {
        let s = &pv.spots()[spot];
        s.entries().iter().map(|(k, c)| ((s.center()[0] + k[0]).rem_euclid(pv.den()), *c)).collect()
    }

    #[test]
    fn tensor_sums_multipliers() {
        let a = PhaseVector::qubit(8, &[2], None);
        let b = PhaseVector::qubit(8, &[1], None);
        let mut t = a.tensor(&b).unwrap();
        t.wrap_trivial();
        assert_eq!(labels(&t, 0), vec![(0, 1), (1, 1), (2, 1), (3, 1)]);
        let zero = PhaseVector::qubit(8, &[0], None);
        assert_eq!(labels(&zero.tensor(&b).unwrap(), 0), vec![(0, 2), (1, 2)]);
        assert_eq!(t.radius(), 4);
    }

    #[test]
    fn partition_sizes_stay_in_range() {
        let l = 16;
        assert_eq!(PhaseVector::partition_sizes(l, l), vec![l]);
        assert_eq!(PhaseVector::partition_sizes(4 * l - 1, l), vec![4 * l - 1]);
        // 2·4l cannot be halved into admissible parts; three parts are needed.
        assert_eq!(PhaseVector::partition_sizes(8 * l, l), vec![43, 43, 42]);
        for len in 4 * l..2000 {
            let sizes = PhaseVector::partition_sizes(len, l);
            assert_eq!(sizes.iter().sum::<u64>(), len);
            assert!(sizes.iter().all(|&s| (l..4 * l).contains(&s)), "{len}: {sizes:?}");
        }
    }

    #[test]
    fn collimation_keeps_window_and_telescopes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let den = 1 << 12;
        let mut pv = PhaseVector::qubit(den, &[777], None);
        for y in [1234, 99, 2048, 3001, 5] {
            pv = pv.tensor(&PhaseVector::qubit(den, &[y], None)).unwrap();
        }
        pv.wrap_trivial();
        let doubled = pv.tensor(&pv).unwrap();
        let (post, _) = doubled.collimate(2, &mut rng).unwrap();
        assert_eq!(post.radius(), den / 2 >> 2);
        assert!(post.window_violations().is_empty());
        assert!(!post.is_empty());
    }

    #[test]
    fn fused_collimation_matches_two_step() {
        let den = 1 << 10;
        let mut a = PhaseVector::qubit(den, &[100, 7], None);
        for y in [[300, 900], [512, 5], [77, 1000]] {
            a = a.tensor(&PhaseVector::qubit(den, &y, None)).unwrap();
        }
        a.wrap_trivial();
        let two = a.split_random(&[256, 0], &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        for (x, m) in [(&a, 2u64), (&two, 1)] {
            let prod = x.tensor(&a).unwrap();
            let counts = prod.tile_counts(m);
            for seed in 0..20 {
                let (fused, tile) = x.tensor_collimate(&a, m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                let (slow, tile2) = prod.collimate(m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
                assert_eq!(tile, tile2);
                assert_eq!(fused, slow);
                assert!(counts[&tile] > 0);
            }
        }
    }

    #[test]
    fn tandem_tiles_preserve_center_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let den = 64;
        let mut base = PhaseVector::qubit(den, &[8], None);
        for y in [16, 40, 24] {
            base = base.tensor(&PhaseVector::qubit(den, &[y], None)).unwrap();
        }
        base.wrap_trivial();
        let two = base.split_random(&[16], &mut rng).unwrap();
        let (post, _) = two.tensor(&base).unwrap().collimate(1, &mut rng).unwrap();
        let c = post.spots();
        assert_eq!((c[1].center()[0] - c[0].center()[0]).rem_euclid(den), 16);
        assert!(post.window_violations().is_empty());
    }

    #[test]
    fn shorten_only_touches_oversized_spots() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let l = 4;
        let big = Spot::from_list(vec![0], (0..16).map(|i| vec![i as i128].into_boxed_slice()));
        let small = Spot::from_list(vec![0], (0..4).map(|i| vec![i as i128].into_boxed_slice()));
        let pv = PhaseVector { k: 1, noisy: false, den: 64, radius: 32, stage: 0, spots: vec![big, small.clone()] };
        let s = pv.shorten(l, &mut rng);
        assert_eq!(s.spot_lens(), vec![8, 4]);
        assert_eq!(s.spots()[1], small);
    }

    #[test]
    fn pairing_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let y = Spot::from_list(vec![0], (0..3).map(|_| vec![0i128].into_boxed_slice()));
        let z = Spot::from_list(vec![16], (0..1).map(|_| vec![0i128].into_boxed_slice()));
        let pv = PhaseVector { k: 1, noisy: false, den: 64, radius: 1, stage: 0, spots: vec![y, z] };
        let n = 4000;
        let paired = (0..n).filter(|_| pv.pair(&mut rng).unwrap().is_some()).count();
        // 2·min/(a+b) = 1/2.
        assert!((paired as f64 / n as f64 - 0.5).abs() < 0.04);
        let q = loop {
            if let Some(q) = pv.pair(&mut rng).unwrap() {
                break q;
            }
        };
        assert_eq!(q.true_difference(), vec![16]);
        assert_eq!(q.label_error(&[16]), vec![0]);
    }
}
