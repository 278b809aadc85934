//! Base and strong generating sets for matrix groups over `GF(2)`.
//!
//! The group acts on nonzero vectors. Construction is a randomized
//! Schreier–Sims pass followed by a deterministic check that every Schreier
//! generator sifts to the identity, so the resulting chain is exact.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf2::{BitMat, Gf2Error};

/// Largest dimension the chain engine accepts.
pub const MAX_CHAIN_DIM: usize = 24;
/// Dimensions up to this use a flat orbit index of `2^dim` slots.
const FLAT_INDEX_DIM: usize = 16;
/// Consecutive successful random sifts that end the randomized phase.
const RANDOM_STREAK: usize = 40;
/// Length of the product-replacement state.
const PR_SLOTS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error("generator {0} is singular")]
    Singular(usize),
    #[error("generators have mixed dimensions")]
    MixedDimensions,
    #[error("dimension {0} exceeds the chain engine limit {MAX_CHAIN_DIM}")]
    TooLarge(usize),
    #[error("closure enumeration exceeded {0} elements")]
    ClosureLimit(usize),
}

#[derive(Debug, Clone)]
enum OrbitIndex {
    Flat(Vec<u32>),
    Map(HashMap<u64, u32>),
}

impl OrbitIndex {
    const EMPTY: u32 = u32::MAX;

    fn new(dim: usize) -> Self {
        if dim <= FLAT_INDEX_DIM {
            OrbitIndex::Flat(vec![Self::EMPTY; 1 << dim])
        } else {
            OrbitIndex::Map(HashMap::new())
        }
    }

    fn get(&self, point: u64) -> Option<usize> {
        match self {
            OrbitIndex::Flat(v) => match v[point as usize] {
                Self::EMPTY => None,
                i => Some(i as usize),
            },
            OrbitIndex::Map(m) => m.get(&point).map(|&i| i as usize),
        }
    }

    fn insert(&mut self, point: u64, idx: usize) {
        match self {
            OrbitIndex::Flat(v) => v[point as usize] = idx as u32,
            OrbitIndex::Map(m) => {
                m.insert(point, idx as u32);
            }
        }
    }
}

/// One level of the chain: a base point, the strong generators fixing all
/// earlier base points, and the orbit with its transversal.
#[derive(Debug, Clone)]
struct Level {
    base: u64,
    gens: Vec<BitMat>,
    orbit: Vec<u64>,
    index: OrbitIndex,
    /// `transversal[i]` maps `base` to `orbit[i]`.
    transversal: Vec<BitMat>,
    inverse: Vec<BitMat>,
}

impl Level {
    fn new(dim: usize, base: u64) -> Result<Self, ChainError> {
        let id = BitMat::identity(dim)?;
        let mut index = OrbitIndex::new(dim);
        index.insert(base, 0);
        Ok(Self {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            index,
            transversal: vec![id.clone()],
            inverse: vec![id],
        })
    }

    /// Adds a generator and closes the orbit under all generators.
    fn add_generator(&mut self, g: BitMat) -> Result<(), ChainError> {
        let g_inv = g.inverse()?;
        self.gens.push(g);
        let gens_inv: Vec<BitMat> = self.gens.iter().map(|h| h.inverse()).collect::<Result<_, _>>()?;
        // Existing points only need the new generator; new points need all.
        let new_gen = self.gens.len() - 1;
        let existing = self.orbit.len();
        for i in 0..existing {
            self.extend_from(i, new_gen, &g_inv);
        }
        let mut i = existing;
        while i < self.orbit.len() {
            for (k, inv) in gens_inv.iter().enumerate() {
                self.extend_from(i, k, inv);
            }
            i += 1;
        }
        Ok(())
    }

    fn extend_from(&mut self, i: usize, k: usize, g_inv: &BitMat) {
        let g = &self.gens[k];
        let image = g.apply_bits(self.orbit[i]).bits();
        if self.index.get(image).is_none() {
            let idx = self.orbit.len();
            self.index.insert(image, idx);
            self.orbit.push(image);
            let u = g.mul_unchecked(&self.transversal[i]);
            let u_inv = self.inverse[i].mul_unchecked(g_inv);
            self.transversal.push(u);
            self.inverse.push(u_inv);
        }
    }
}

/// A stabilizer chain for a matrix group.
#[derive(Debug, Clone)]
pub struct StabChain {
    dim: usize,
    levels: Vec<Level>,
    generators: Vec<BitMat>,
}

/// Outcome of sifting: the residue and the level where sifting stopped
/// (`levels.len()` if it passed every level).
struct Sift {
    residue: BitMat,
    level: usize,
}

impl StabChain {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Base points as raw vector bits.
    pub fn base(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn generators(&self) -> &[BitMat] {
        &self.generators
    }

    /// All strong generators, deduplicated, in level order.
    pub fn strong_generators(&self) -> Vec<BitMat> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }

    fn sift_from(&self, mut m: BitMat, start: usize) -> Sift {
        for (j, level) in self.levels.iter().enumerate().skip(start) {
            let image = m.apply_bits(level.base).bits();
            match level.index.get(image) {
                Some(i) => m = level.inverse[i].mul_unchecked(&m),
                None => return Sift { residue: m, level: j },
            }
        }
        Sift {
            residue: m,
            level: self.levels.len(),
        }
    }

    /// Inserts a residue that fixes the base points of levels `< level`.
    fn absorb(&mut self, residue: BitMat, level: usize) -> Result<(), ChainError> {
        if level == self.levels.len() {
            let moved = (0..self.dim)
                .find(|&i| residue.apply_bits(1 << i).bits() != 1 << i)
                .expect("non-identity residue moves some basis vector");
            self.levels.push(Level::new(self.dim, 1 << moved)?);
        }
        for l in &mut self.levels[..=level] {
            l.add_generator(residue.clone())?;
        }
        Ok(())
    }

    /// Sifts `m`; if it is not absorbed, extends the chain. Returns true if
    /// the chain changed.
    fn sift_and_absorb(&mut self, m: BitMat) -> Result<bool, ChainError> {
        let s = self.sift_from(m, 0);
        if s.level == self.levels.len() && s.residue.is_identity() {
            return Ok(false);
        }
        self.absorb(s.residue, s.level)?;
        Ok(true)
    }

    /// Checks every Schreier generator `u_{sγ}⁻¹·s·u_γ`. Returns false after
    /// absorbing the first failure.
    fn verify_pass(&mut self) -> Result<bool, ChainError> {
        for j in (0..self.levels.len()).rev() {
            let n_gens = self.levels[j].gens.len();
            let n_orbit = self.levels[j].orbit.len();
            for k in 0..n_gens {
                for i in 0..n_orbit {
                    let level = &self.levels[j];
                    let s = &level.gens[k];
                    let image = s.apply_bits(level.orbit[i]).bits();
                    let t = level.index.get(image).expect("orbit is closed");
                    let schreier = level.inverse[t]
                        .mul_unchecked(s)
                        .mul_unchecked(&level.transversal[i]);
                    let sift = self.sift_from(schreier, j + 1);
                    if sift.level < self.levels.len() || !sift.residue.is_identity() {
                        self.absorb(sift.residue, sift.level)?;
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Exact order: the product of the orbit sizes.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::one(), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// True iff `m` sifts to the identity.
    pub fn contains(&self, m: &BitMat) -> bool {
        if m.dim() != self.dim {
            return false;
        }
        let s = self.sift_from(m.clone(), 0);
        s.level == self.levels.len() && s.residue.is_identity()
    }
}

/// Builds a chain for the group generated by `gens` in dimension `dim`.
/// The seed drives the randomized phase only; the order is exact for every
/// seed.
pub fn bsgs(dim: usize, gens: &[BitMat], seed: u64) -> Result<StabChain, ChainError> {
    if dim > MAX_CHAIN_DIM {
        return Err(ChainError::TooLarge(dim));
    }
    for (i, g) in gens.iter().enumerate() {
        if g.dim() != dim {
            return Err(ChainError::MixedDimensions);
        }
        if !g.is_invertible() {
            return Err(ChainError::Singular(i));
        }
    }
    let mut chain = StabChain {
        dim,
        levels: Vec::new(),
        generators: gens.to_vec(),
    };
    let gens: Vec<BitMat> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
    if gens.is_empty() {
        return Ok(chain);
    }
    for g in &gens {
        chain.sift_and_absorb(g.clone())?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pr = ProductReplacement::new(&gens, &mut rng);
    let mut streak = 0;
    while streak < RANDOM_STREAK {
        let x = pr.next(&mut rng);
        if chain.sift_and_absorb(x)? {
            streak = 0;
        } else {
            streak += 1;
        }
    }

    while !chain.verify_pass()? {}
    Ok(chain)
}

/// Product-replacement random elements.
struct ProductReplacement {
    slots: Vec<BitMat>,
    acc: BitMat,
}

impl ProductReplacement {
    fn new(gens: &[BitMat], rng: &mut ChaCha8Rng) -> Self {
        let slots: Vec<BitMat> = (0..PR_SLOTS.max(gens.len()))
            .map(|i| gens[i % gens.len()].clone())
            .collect();
        let mut pr = Self {
            acc: slots[0].clone(),
            slots,
        };
        for _ in 0..50 {
            pr.next(rng);
        }
        pr
    }

    fn next(&mut self, rng: &mut ChaCha8Rng) -> BitMat {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        self.slots[i] = if rng.gen_bool(0.5) {
            self.slots[i].mul_unchecked(&self.slots[j])
        } else {
            self.slots[j].mul_unchecked(&self.slots[i])
        };
        self.acc = self.acc.mul_unchecked(&self.slots[i]);
        self.acc.clone()
    }
}

/// Order of the chain's group.
pub fn group_order(chain: &StabChain) -> BigUint {
    chain.order()
}

/// Membership test by sifting.
pub fn contains(chain: &StabChain, m: &BitMat) -> bool {
    chain.contains(m)
}

/// `|Sp(2h, 2)| = 2^{h²} · Π_{i=1..h} (4^i − 1)`.
pub fn sp_order(h: u32) -> BigUint {
    let mut n = BigUint::one() << (h * h) as usize;
    for i in 1..=h {
        n *= (BigUint::one() << (2 * i) as usize) - BigUint::one();
    }
    n
}

/// Order of the isometry group of the mod-2 pairing that fixes the
/// characteristic vector: `|Sp(2h,2)|` for `g = 2h+1`, times `2^{2h+1}` for
/// `g = 2h+2`.
pub fn target_isometry_order(g: usize) -> BigUint {
    let h = ((g - 1) / 2) as u32;
    if g % 2 == 1 {
        sp_order(h)
    } else {
        sp_order(h) << (2 * h + 1) as usize
    }
}

/// Breadth-first closure of the generators; fails beyond `limit` elements.
pub fn closure_order(dim: usize, gens: &[BitMat], limit: usize) -> Result<usize, ChainError> {
    let id = BitMat::identity(dim)?;
    let mut seen: HashSet<BitMat> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = g.mul(&x)?;
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return Err(ChainError::ClosureLimit(limit));
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}
