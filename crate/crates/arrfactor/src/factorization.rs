//! Deciders and searches for the factorization properties of a central
//! arrangement: supersolvability, nice partitions, inductive factorization,
//! inductive freeness, and the hereditary variants of each.
//!
//! The entry points that search (rather than check) are exhaustive at desk
//! scale: `find_nice` exhausts a constraint-propagating backtracker, so its
//! "none" answer is a certificate, and the inductive searches carry explicit
//! node budgets with a three-valued answer so that running out of budget is
//! never conflated with a certified "no".

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{
    build_lattice, char_poly_from_flats, integer_root_multiset, rank_of_subset, triple,
    Arrangement, Bitset, IntersectionLattice, Triple,
};
use crate::exactfield::Echelon;

/// A partition of the hyperplanes of an arrangement into nonempty blocks.
/// Block order is significant only where an operation distinguishes the
/// first block; `canonical` gives the order-normalized form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    universe: usize,
    blocks: Vec<Bitset>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Validates that the blocks are nonempty, disjoint, and cover
    /// 0..universe.
    pub fn new(universe: usize, blocks: Vec<Vec<usize>>) -> Result<Self, String> {
        let mut block_of = vec![usize::MAX; universe];
        let mut sets = Vec::with_capacity(blocks.len());
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(format!("block {b} is empty"));
            }
            let mut set = Bitset::new(universe);
            for &h in block {
                if h >= universe {
                    return Err(format!("hyperplane index {h} is out of range"));
                }
                if block_of[h] != usize::MAX {
                    return Err(format!("hyperplane {h} appears in two blocks"));
                }
                block_of[h] = b;
                set.insert(h);
            }
            sets.push(set);
        }
        if let Some(h) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(format!("hyperplane {h} is not covered by any block"));
        }
        Ok(Partition {
            universe,
            blocks: sets,
            block_of,
        })
    }

    pub fn from_bitsets(universe: usize, blocks: Vec<Bitset>) -> Result<Self, String> {
        Self::new(
            universe,
            blocks.iter().map(Bitset::to_indices).collect(),
        )
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn blocks(&self) -> &[Bitset] {
        &self.blocks
    }

    pub fn n_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, h: usize) -> usize {
        self.block_of[h]
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Bitset::len).collect()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(Bitset::to_indices).collect()
    }

    /// Same partition with block `b` moved to the front; the relative order
    /// of the other blocks is kept.
    pub fn with_block_first(&self, b: usize) -> Partition {
        assert!(b < self.blocks.len(), "block index out of range");
        let mut order: Vec<usize> = (0..self.blocks.len()).collect();
        order.remove(b);
        order.insert(0, b);
        let blocks = order.iter().map(|&i| self.blocks[i].clone()).collect();
        Partition::from_bitsets(self.universe, blocks).expect("reordering keeps validity")
    }

    /// Blocks sorted by their smallest member.
    pub fn canonical(&self) -> Partition {
        let mut lists = self.to_lists();
        lists.sort_by_key(|block| block[0]);
        Partition::new(self.universe, lists).expect("reordering keeps validity")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " |")?;
            }
            for h in block.iter() {
                write!(f, " {h}")?;
            }
        }
        write!(f, " }}")
    }
}

/// True iff every transversal (one hyperplane per block) spans rank equal to
/// the number of blocks. A prefix whose rank falls below its length already
/// witnesses a dependent transversal, so the search aborts there.
pub fn is_independent(a: &Arrangement, pi: &Partition) -> bool {
    dependent_transversal(a, pi).is_none()
}

/// The witness behind a failed independence check: a minimal prefix of a
/// transversal whose rank is below its length.
fn dependent_transversal(a: &Arrangement, pi: &Partition) -> Option<Vec<usize>> {
    fn rec(
        a: &Arrangement,
        blocks: &[Bitset],
        k: usize,
        prefix: &mut Vec<usize>,
        ech: &Echelon,
    ) -> bool {
        if k == blocks.len() {
            return false;
        }
        for h in blocks[k].iter() {
            let mut extended = ech.clone();
            prefix.push(h);
            if !extended.insert(a.hyperplane(h).normal()) {
                return true;
            }
            if rec(a, blocks, k + 1, prefix, &extended) {
                return true;
            }
            prefix.pop();
        }
        false
    }
    let mut prefix = Vec::new();
    let ech = Echelon::new(a.conductor(), a.dim());
    if rec(a, pi.blocks(), 0, &mut prefix, &ech) {
        Some(prefix)
    } else {
        None
    }
}

/// The nonempty traces of the blocks on a localization, reindexed to the
/// localized arrangement (support positions in ascending order). The second
/// component maps each induced block back to the original block id.
pub fn induced_partition(pi: &Partition, support: &Bitset) -> (Partition, Vec<usize>) {
    let members: Vec<usize> = support.to_indices();
    let position: HashMap<usize, usize> = members
        .iter()
        .enumerate()
        .map(|(pos, &h)| (h, pos))
        .collect();
    let mut lists: Vec<Vec<usize>> = Vec::new();
    let mut origins = Vec::new();
    for (b, block) in pi.blocks().iter().enumerate() {
        let trace: Vec<usize> = block
            .iter()
            .filter_map(|h| position.get(&h).copied())
            .collect();
        if !trace.is_empty() {
            lists.push(trace);
            origins.push(b);
        }
    }
    (
        Partition::new(members.len(), lists).expect("traces partition the support"),
        origins,
    )
}

/// Why a partition fails to be nice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NiceDefect {
    /// A prefix of a transversal with rank below its length.
    DependentTransversal(Vec<usize>),
    /// A flat none of whose block traces is a singleton.
    NoSingleton(Bitset),
}

/// Checks the two conditions for a nice partition: independence, and a
/// singleton block trace on every flat of rank at least two (rank-one flats
/// satisfy the condition automatically and are skipped).
pub fn nice_defect(
    a: &Arrangement,
    lattice: &IntersectionLattice,
    pi: &Partition,
) -> Option<NiceDefect> {
    let mut counts = vec![0usize; pi.n_blocks()];
    for rank in 2..=lattice.rank() {
        for flat in lattice.stratum(rank) {
            for h in flat.support().iter() {
                counts[pi.block_of(h)] += 1;
            }
            let singleton = counts.iter().any(|&c| c == 1);
            for h in flat.support().iter() {
                counts[pi.block_of(h)] = 0;
            }
            if !singleton {
                return Some(NiceDefect::NoSingleton(flat.support().clone()));
            }
        }
    }
    dependent_transversal(a, pi).map(NiceDefect::DependentTransversal)
}

pub fn is_nice(a: &Arrangement, lattice: &IntersectionLattice, pi: &Partition) -> bool {
    nice_defect(a, lattice, pi).is_none()
}

/// Backtracking search state for nice partitions. Block target sizes are
/// forced to the integer roots of the characteristic polynomial; the flat
/// constraints propagated during assignment are exactly the conditions that
/// make a complete assignment nice, so the search never needs to reject a
/// leaf:
///   - the trace of a flat meets at most (finally: exactly) rank-many
///     blocks, which also forces every transversal to full rank;
///   - a fully assigned flat keeps a singleton trace in some block;
///   - block sizes reach their targets exactly (pigeonhole-forced).
struct NiceSearch<'a> {
    a: &'a Arrangement,
    n: usize,
    s: usize,
    target: Vec<usize>,
    flat_members: Vec<Vec<usize>>,
    flat_rank: Vec<usize>,
    flats_of: Vec<Vec<usize>>,
    assign: Vec<Option<usize>>,
    allowed: Vec<u64>,
    count: Vec<usize>,
    avail: Vec<usize>,
    fcnt: Vec<Vec<u16>>,
    fmet: Vec<usize>,
    fones: Vec<usize>,
    funassigned: Vec<usize>,
    trail: Vec<Change>,
    queue: VecDeque<(usize, usize)>,
}

enum Change {
    Assigned(usize),
    Mask(usize, u64),
}

impl<'a> NiceSearch<'a> {
    fn new(a: &'a Arrangement, lattice: &IntersectionLattice, target: Vec<usize>) -> Self {
        let n = a.len();
        let s = target.len();
        assert!(s <= 64, "block count exceeds the mask width");
        let mut flat_members = Vec::new();
        let mut flat_rank = Vec::new();
        let mut flats_of = vec![Vec::new(); n];
        for rank in 2..=lattice.rank() {
            for flat in lattice.stratum(rank) {
                let id = flat_members.len();
                let members = flat.support().to_indices();
                for &h in &members {
                    flats_of[h].push(id);
                }
                flat_members.push(members);
                flat_rank.push(rank);
            }
        }
        let full: u64 = if s == 64 { !0 } else { (1u64 << s) - 1 };
        let n_flats = flat_members.len();
        NiceSearch {
            a,
            n,
            s,
            target,
            funassigned: flat_members.iter().map(Vec::len).collect(),
            flat_members,
            flat_rank,
            flats_of,
            assign: vec![None; n],
            allowed: vec![full; n],
            count: vec![0; s],
            avail: vec![n; s],
            fcnt: vec![vec![0; s]; n_flats],
            fmet: vec![0; n_flats],
            fones: vec![0; n_flats],
            trail: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail is nonempty") {
                Change::Mask(h, old) => {
                    let removed = old & !self.allowed[h];
                    let mut bits = removed;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        self.avail[b] += 1;
                    }
                    self.allowed[h] = old;
                }
                Change::Assigned(h) => {
                    let b = self.assign[h].take().expect("trail entry was assigned");
                    self.count[b] -= 1;
                    let mut bits = self.allowed[h];
                    while bits != 0 {
                        let blk = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        self.avail[blk] += 1;
                    }
                    for fi in 0..self.flats_of[h].len() {
                        let f = self.flats_of[h][fi];
                        self.fcnt[f][b] -= 1;
                        self.funassigned[f] += 1;
                        match self.fcnt[f][b] {
                            0 => {
                                self.fmet[f] -= 1;
                                self.fones[f] -= 1;
                            }
                            1 => self.fones[f] += 1,
                            _ => {}
                        }
                    }
                }
            }
        }
    }

    /// Shrinks the allowed mask of an unassigned hyperplane; reports a
    /// conflict when a mask empties or a block can no longer be filled.
    fn shrink_mask(&mut self, h: usize, keep: u64) -> bool {
        let old = self.allowed[h];
        let new = old & keep;
        if new == old {
            return true;
        }
        self.trail.push(Change::Mask(h, old));
        self.allowed[h] = new;
        let mut removed = old & !new;
        while removed != 0 {
            let b = removed.trailing_zeros() as usize;
            removed &= removed - 1;
            self.avail[b] -= 1;
            if !self.pigeonhole(b) {
                return false;
            }
        }
        if new == 0 {
            return false;
        }
        if new.count_ones() == 1 {
            self.queue.push_back((h, new.trailing_zeros() as usize));
        }
        true
    }

    /// A block needing more members than there are hyperplanes still
    /// allowing it is a conflict; exact equality forces every candidate.
    fn pigeonhole(&mut self, b: usize) -> bool {
        let need = self.target[b] - self.count[b];
        if need > self.avail[b] {
            return false;
        }
        if need == self.avail[b] && need > 0 {
            for h in 0..self.n {
                if self.assign[h].is_none() && self.allowed[h] & (1 << b) != 0 {
                    self.queue.push_back((h, b));
                }
            }
        }
        true
    }

    fn assign_and_propagate(&mut self, h0: usize, b0: usize) -> bool {
        self.queue.clear();
        self.queue.push_back((h0, b0));
        while let Some((h, b)) = self.queue.pop_front() {
            if let Some(cur) = self.assign[h] {
                if cur == b {
                    continue;
                }
                return false;
            }
            if self.allowed[h] & (1 << b) == 0 {
                return false;
            }
            if !self.apply(h, b) {
                return false;
            }
        }
        true
    }

    fn apply(&mut self, h: usize, b: usize) -> bool {
        self.assign[h] = Some(b);
        self.trail.push(Change::Assigned(h));
        self.count[b] += 1;
        let mask = self.allowed[h];
        let mut bits = mask;
        while bits != 0 {
            let blk = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.avail[blk] -= 1;
        }
        for fi in 0..self.flats_of[h].len() {
            let f = self.flats_of[h][fi];
            self.fcnt[f][b] += 1;
            self.funassigned[f] -= 1;
            match self.fcnt[f][b] {
                1 => {
                    self.fmet[f] += 1;
                    self.fones[f] += 1;
                }
                2 => self.fones[f] -= 1,
                _ => {}
            }
        }
        if self.count[b] > self.target[b] {
            return false;
        }
        if self.count[b] == self.target[b] {
            for h2 in 0..self.n {
                if self.assign[h2].is_none() && !self.shrink_mask(h2, !(1u64 << b)) {
                    return false;
                }
            }
        }
        let mut bits = mask;
        while bits != 0 {
            let blk = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if !self.pigeonhole(blk) {
                return false;
            }
        }
        for fi in 0..self.flats_of[h].len() {
            let f = self.flats_of[h][fi];
            if !self.propagate_flat(f) {
                return false;
            }
        }
        true
    }

    fn propagate_flat(&mut self, f: usize) -> bool {
        let r = self.flat_rank[f];
        let met = self.fmet[f];
        if met > r {
            return false;
        }
        if met == r {
            if self.fones[f] == 0 {
                return false;
            }
            let mut met_mask = 0u64;
            let mut one_block = None;
            for b in 0..self.s {
                match self.fcnt[f][b] {
                    0 => {}
                    1 => {
                        met_mask |= 1 << b;
                        one_block = Some(b);
                    }
                    _ => met_mask |= 1 << b,
                }
            }
            let keep = if self.fones[f] == 1 {
                // the unique singleton trace must stay a singleton
                met_mask & !(1u64 << one_block.expect("a block has count one"))
            } else {
                met_mask
            };
            for mi in 0..self.flat_members[f].len() {
                let h = self.flat_members[f][mi];
                if self.assign[h].is_none() && !self.shrink_mask(h, keep) {
                    return false;
                }
            }
        } else {
            let needed = r - met;
            if self.funassigned[f] < needed {
                return false;
            }
            if self.funassigned[f] == needed {
                let mut met_mask = 0u64;
                for b in 0..self.s {
                    if self.fcnt[f][b] > 0 {
                        met_mask |= 1 << b;
                    }
                }
                for mi in 0..self.flat_members[f].len() {
                    let h = self.flat_members[f][mi];
                    if self.assign[h].is_none() && !self.shrink_mask(h, !met_mask) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs(&mut self, visitor: &mut dyn FnMut(&Partition) -> bool) -> bool {
        let Some(h) = (0..self.n).find(|&h| self.assign[h].is_none()) else {
            let mut lists = vec![Vec::new(); self.s];
            for h in 0..self.n {
                lists[self.assign[h].expect("assignment is complete")].push(h);
            }
            let pi = Partition::new(self.n, lists)
                .expect("complete assignments have full nonempty blocks")
                .canonical();
            debug_assert!(is_nice(self.a, &build_lattice(self.a), &pi));
            return visitor(&pi);
        };
        for b in 0..self.s {
            if self.allowed[h] & (1 << b) == 0 {
                continue;
            }
            // interchangeable empty blocks of equal target size: only the
            // lowest-indexed one may be opened
            if self.count[b] == 0
                && (0..b).any(|b2| self.target[b2] == self.target[b] && self.count[b2] == 0)
            {
                continue;
            }
            let mark = self.trail.len();
            if self.assign_and_propagate(h, b) && self.dfs(visitor) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Visits nice partitions of the arrangement in a fixed deterministic order
/// until the visitor returns `true`. The visit order is the lexicographic
/// order of the block-assignment vector under canonical block labels, so an
/// exhausted search certifies that no nice partition exists.
pub fn enumerate_nice(
    a: &Arrangement,
    lattice: &IntersectionLattice,
    visitor: &mut dyn FnMut(&Partition) -> bool,
) {
    if a.is_empty() {
        visitor(&Partition::new(0, Vec::new()).expect("empty partition"));
        return;
    }
    let flats: Vec<(Bitset, usize)> = lattice
        .all_flats()
        .map(|f| (f.support().clone(), f.rank()))
        .collect();
    let Some(roots) = integer_root_multiset(&char_poly_from_flats(&flats)) else {
        return;
    };
    let target: Vec<usize> = roots.iter().map(|&b| b as usize).collect();
    debug_assert_eq!(target.iter().sum::<usize>(), a.len());
    let mut search = NiceSearch::new(a, lattice, target);
    search.dfs(visitor);
}

/// First nice partition in the deterministic search order, if any. A `None`
/// comes from an exhausted backtracking tree (or from a characteristic
/// polynomial without a complete positive integer root multiset, which rules
/// niceness out before any search).
pub fn find_nice(a: &Arrangement, lattice: &IntersectionLattice) -> Option<Partition> {
    let mut found = None;
    enumerate_nice(a, lattice, &mut |pi| {
        found = Some(pi.clone());
        true
    });
    found
}

/// True iff joining the flat with any other flat lands inside the lattice:
/// the support meet (always a closed support) must have rank exactly
/// r(X) + r(Y) − r(X ∨ Y), which says the subspace sum X + Y is itself an
/// intersection of hyperplanes.
pub fn is_modular(a: &Arrangement, lattice: &IntersectionLattice, support: &Bitset) -> bool {
    let rx = lattice
        .find(support)
        .expect("support must be a flat of the lattice")
        .rank();
    if rx == 0 || rx == lattice.rank() {
        return true;
    }
    for flat in lattice.all_flats() {
        let sy = flat.support();
        if support.is_subset_of(sy) || sy.is_subset_of(support) {
            continue;
        }
        let meet = support.intersection(sy);
        let meet_rank = lattice
            .find(&meet)
            .expect("support meets are closed")
            .rank();
        let join_rank = rank_of_subset(a, &support.union(sy));
        if meet_rank != rx + flat.rank() - join_rank {
            return false;
        }
    }
    true
}

/// Searches for a maximal chain of modular flats, one per rank; returns the
/// chain supports (rank 0 up to the full rank) when one exists.
pub fn is_supersolvable(a: &Arrangement, lattice: &IntersectionLattice) -> Option<Vec<Bitset>> {
    fn extend(
        a: &Arrangement,
        lattice: &IntersectionLattice,
        chain: &mut Vec<Bitset>,
        modular: &mut HashMap<Bitset, bool>,
        dead: &mut HashSet<Bitset>,
    ) -> bool {
        let k = chain.len() - 1;
        if k == lattice.rank() {
            return true;
        }
        let below = chain.last().expect("chain is seeded").clone();
        for flat in lattice.stratum(k + 1) {
            let s = flat.support();
            if !below.is_subset_of(s) || dead.contains(s) {
                continue;
            }
            let is_mod = *modular
                .entry(s.clone())
                .or_insert_with(|| is_modular(a, lattice, s));
            if !is_mod {
                continue;
            }
            chain.push(s.clone());
            if extend(a, lattice, chain, modular, dead) {
                return true;
            }
            chain.pop();
            dead.insert(s.clone());
        }
        false
    }
    let mut chain = vec![Bitset::new(a.len())];
    let mut modular = HashMap::new();
    let mut dead = HashSet::new();
    if extend(a, lattice, &mut chain, &mut modular, &mut dead) {
        Some(chain)
    } else {
        None
    }
}

/// The partition carried by a modular chain: block i holds the hyperplanes
/// of the i-th flat that are not in the previous one. The chain is fully
/// re-validated; the result always passes `is_nice`.
pub fn supersolvable_to_nice(
    a: &Arrangement,
    lattice: &IntersectionLattice,
    chain: &[Bitset],
) -> Result<Partition, String> {
    let r = lattice.rank();
    if chain.len() != r + 1 {
        return Err(format!(
            "chain has {} entries, expected {}",
            chain.len(),
            r + 1
        ));
    }
    for (i, s) in chain.iter().enumerate() {
        let flat = lattice
            .find(s)
            .ok_or_else(|| format!("chain entry {i} is not a flat"))?;
        if flat.rank() != i {
            return Err(format!("chain entry {i} has rank {}", flat.rank()));
        }
        if i > 0 && !chain[i - 1].is_subset_of(s) {
            return Err(format!("chain entry {i} does not contain entry {}", i - 1));
        }
        if !is_modular(a, lattice, s) {
            return Err(format!("chain entry {i} is not modular"));
        }
    }
    let mut lists = Vec::with_capacity(r);
    for i in 1..=r {
        let block: Vec<usize> = chain[i]
            .iter()
            .filter(|&h| !chain[i - 1].contains(h))
            .collect();
        lists.push(block);
    }
    let pi = Partition::new(a.len(), lists)?;
    debug_assert!(is_nice(a, lattice, &pi));
    Ok(pi)
}

/// Failure modes of the pivot-block machinery.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("pivot hyperplane {0} is not in the first block")]
    PivotNotInFirstBlock(usize),
    #[error("restriction map is not injective: hyperplanes {0} and {1} of one block share a trace")]
    NotInjective(usize, usize),
    #[error("block images collide: hyperplanes {0} and {1} of different blocks share a trace")]
    BlocksCollide(usize, usize),
    #[error("block images miss hyperplane {0} of the restricted arrangement")]
    NotOnto(usize),
}

/// The map sending each hyperplane outside the first block to its trace on
/// the pivot hyperplane, as an index into the restriction; first-block
/// members map to `None`. The flag reports whether the map is injective.
pub fn restriction_map(
    a: &Arrangement,
    pi: &Partition,
    h0: usize,
) -> Result<(Vec<Option<usize>>, bool), FactorError> {
    if pi.block_of(h0) != 0 {
        return Err(FactorError::PivotNotInFirstBlock(h0));
    }
    let t = triple(a, h0);
    let mut images = vec![None; a.len()];
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut injective = true;
    for h in 0..a.len() {
        if pi.block_of(h) == 0 {
            continue;
        }
        let image = t.trace_map[h].expect("hyperplanes off the pivot have a trace");
        if seen.insert(image, h).is_some() {
            injective = false;
        }
        images[h] = Some(image);
    }
    Ok((images, injective))
}

/// Computes the full triple data for a pivot in the first block: the deleted
/// and restricted arrangements with their induced partitions. Shared by the
/// public operations and the inductive search.
fn triple_partitions(
    a: &Arrangement,
    pi: &Partition,
    h0: usize,
) -> Result<(Triple, Partition, Partition), FactorError> {
    if pi.block_of(h0) != 0 {
        return Err(FactorError::PivotNotInFirstBlock(h0));
    }
    let t = triple(a, h0);

    // induced partition on the deletion: nonempty traces, reindexed past h0
    let mut deleted_lists: Vec<Vec<usize>> = Vec::new();
    for block in pi.blocks() {
        let trace: Vec<usize> = block
            .iter()
            .filter(|&h| h != h0)
            .map(|h| if h > h0 { h - 1 } else { h })
            .collect();
        if !trace.is_empty() {
            deleted_lists.push(trace);
        }
    }
    let deleted_partition = Partition::new(t.deleted.len(), deleted_lists)
        .expect("traces partition the deletion");

    // block images under the trace map; a collision inside one block breaks
    // injectivity, a collision across blocks breaks disjointness, and any
    // uncovered trace breaks surjectivity — reported in that order
    let mut image_owner: Vec<Option<(usize, usize)>> = vec![None; t.restricted.len()];
    let mut cross_collision: Option<(usize, usize)> = None;
    for h in 0..a.len() {
        let b = pi.block_of(h);
        if b == 0 {
            continue;
        }
        let image = t.trace_map[h].expect("hyperplanes off the pivot have a trace");
        match image_owner[image] {
            None => image_owner[image] = Some((h, b)),
            Some((h_prev, b_prev)) => {
                if b_prev == b {
                    return Err(FactorError::NotInjective(h_prev, h));
                }
                cross_collision.get_or_insert((h_prev, h));
            }
        }
    }
    if let Some((h_prev, h)) = cross_collision {
        return Err(FactorError::BlocksCollide(h_prev, h));
    }
    if let Some(missed) = image_owner.iter().position(Option::is_none) {
        return Err(FactorError::NotOnto(missed));
    }
    let mut restricted_lists: Vec<Vec<usize>> = Vec::new();
    for (b, block) in pi.blocks().iter().enumerate() {
        if b == 0 {
            continue;
        }
        let image: Vec<usize> = block
            .iter()
            .map(|h| t.trace_map[h].expect("hyperplanes off the pivot have a trace"))
            .collect();
        restricted_lists.push(image);
    }
    let restricted_partition = Partition::new(t.restricted.len(), restricted_lists)
        .expect("injective disjoint onto images partition the restriction");
    Ok((t, deleted_partition, restricted_partition))
}

/// The two partitions induced by a pivot in the first block: the nonempty
/// traces on the deletion, and the block images on the restriction. The
/// image family is only a partition when the trace map is injective with
/// disjoint onto images; each failure is reported distinctly.
pub fn induced_partitions_of_triple(
    a: &Arrangement,
    pi: &Partition,
    h0: usize,
) -> Result<(Partition, Partition), FactorError> {
    triple_partitions(a, pi, h0).map(|(_, d, r)| (d, r))
}

/// Niceness of the three members of a triple under their induced partitions.
/// Whenever the restriction map is injective, any two true verdicts force
/// the third; callers check that pattern, this op only reports the verdicts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddDelVerdicts {
    pub whole_nice: bool,
    pub deleted_nice: bool,
    pub restricted_nice: bool,
}

pub fn check_add_del_nice(
    a: &Arrangement,
    pi: &Partition,
    h0: usize,
) -> Result<AddDelVerdicts, FactorError> {
    let (t, deleted_partition, restricted_partition) = triple_partitions(a, pi, h0)?;
    Ok(AddDelVerdicts {
        whole_nice: is_nice(a, &build_lattice(a), pi),
        deleted_nice: is_nice(&t.deleted, &build_lattice(&t.deleted), &deleted_partition),
        restricted_nice: is_nice(
            &t.restricted,
            &build_lattice(&t.restricted),
            &restricted_partition,
        ),
    })
}

/// Answer of a budgeted search: a certified yes with evidence, a certified
/// no (the search space was exhausted), or an explicit out-of-budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<T> {
    Yes(T),
    No,
    Undecided,
}

impl<T> Decision<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Decision<U> {
        match self {
            Decision::Yes(t) => Decision::Yes(f(t)),
            Decision::No => Decision::No,
            Decision::Undecided => Decision::Undecided,
        }
    }
}

/// Derivation tree certifying an inductive factorization: each node fixes a
/// partition and a pivot whose restriction map is injective, and the
/// children certify the induced pairs on the deletion and the restriction.
/// Leaves are empty arrangements with the empty partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveCertificate {
    pub blocks: Vec<Vec<usize>>,
    pub pivot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted: Option<Box<InductiveCertificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<Box<InductiveCertificate>>,
}

impl InductiveCertificate {
    fn leaf() -> Self {
        InductiveCertificate {
            blocks: Vec::new(),
            pivot: None,
            deleted: None,
            restricted: None,
        }
    }
}

/// Recomputes every step of a certificate against the arrangement: the
/// node's partition must be valid, the pivot's restriction map injective
/// with partitioning images, and the children must carry exactly the induced
/// partitions, down to empty leaves.
pub fn verify_inductive_certificate(
    a: &Arrangement,
    cert: &InductiveCertificate,
) -> Result<(), String> {
    if a.is_empty() {
        if !cert.blocks.is_empty() || cert.pivot.is_some() {
            return Err("empty arrangement takes the empty certificate".to_string());
        }
        return Ok(());
    }
    let pi = Partition::new(a.len(), cert.blocks.clone())?;
    let pivot = cert.pivot.ok_or("missing pivot")?;
    if pivot >= a.len() {
        return Err(format!("pivot {pivot} is out of range"));
    }
    let rotated = pi.with_block_first(pi.block_of(pivot));
    let (t, deleted_partition, restricted_partition) =
        triple_partitions(a, &rotated, pivot).map_err(|e| e.to_string())?;
    let deleted_cert = cert.deleted.as_ref().ok_or("missing deleted child")?;
    let restricted_cert = cert.restricted.as_ref().ok_or("missing restricted child")?;
    let claimed_deleted = Partition::new(t.deleted.len(), deleted_cert.blocks.clone())?;
    if claimed_deleted.canonical() != deleted_partition.canonical() {
        return Err("deleted child partition does not match the induced one".to_string());
    }
    let claimed_restricted = Partition::new(t.restricted.len(), restricted_cert.blocks.clone())?;
    if claimed_restricted.canonical() != restricted_partition.canonical() {
        return Err("restricted child partition does not match the induced one".to_string());
    }
    verify_inductive_certificate(&t.deleted, deleted_cert)?;
    verify_inductive_certificate(&t.restricted, restricted_cert)
}

/// Arrangement memo key. Hyperplane order is part of the key: cached
/// freeness derivations address pivots by index, so a hit must guarantee
/// the identical presentation. Sub-arrangements reached through commuting
/// deletions keep relative order and still hit.
fn arrangement_key(a: &Arrangement) -> String {
    let normals: Vec<String> = a
        .hyperplanes()
        .iter()
        .map(|h| format!("{h:?}"))
        .collect();
    format!("{}|{}|{}", a.dim(), a.conductor(), normals.join(";"))
}

/// Pair memo key. Hyperplane order is part of the key on purpose: cached
/// certificates address hyperplanes by index, so a hit must guarantee the
/// identical presentation, not just an isomorphic one. The sharing that
/// matters — the same sub-pair reached through commuting deletions — keeps
/// relative order and still hits.
fn pair_key(a: &Arrangement, pi: &Partition) -> String {
    let normals: Vec<String> = a
        .hyperplanes()
        .iter()
        .map(|h| format!("{h:?}"))
        .collect();
    format!(
        "{}|{}|{}|{:?}",
        a.dim(),
        a.conductor(),
        normals.join(";"),
        pi.canonical().to_lists()
    )
}

struct InductiveSearch {
    memo: HashMap<String, Decision<InductiveCertificate>>,
    nodes: u64,
    budget: u64,
}

impl InductiveSearch {
    /// Decides membership of the fixed pair: some pivot must have an
    /// injective restriction map and both induced pairs must recurse to
    /// leaves. Only settled answers are memoized.
    fn pair(&mut self, a: &Arrangement, pi: &Partition) -> Decision<InductiveCertificate> {
        if a.is_empty() {
            return Decision::Yes(InductiveCertificate::leaf());
        }
        let key = pair_key(a, pi);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Decision::Undecided;
        }
        // members of the class are nice, so a non-nice pair is settled
        if !is_nice(a, &build_lattice(a), pi) {
            self.memo.insert(key, Decision::No);
            return Decision::No;
        }
        let mut out_of_budget = false;
        // later blocks first: for chains coming from modular towers the top
        // block is the one that peels off
        for b in (0..pi.n_blocks()).rev() {
            let rotated = pi.with_block_first(b);
            for h0 in rotated.blocks()[0].clone().iter() {
                let Ok((t, deleted_partition, restricted_partition)) =
                    triple_partitions(a, &rotated, h0)
                else {
                    continue;
                };
                let deleted = match self.pair(&t.deleted, &deleted_partition) {
                    Decision::Yes(c) => c,
                    Decision::No => continue,
                    Decision::Undecided => {
                        out_of_budget = true;
                        continue;
                    }
                };
                let restricted = match self.pair(&t.restricted, &restricted_partition) {
                    Decision::Yes(c) => c,
                    Decision::No => continue,
                    Decision::Undecided => {
                        out_of_budget = true;
                        continue;
                    }
                };
                let cert = InductiveCertificate {
                    blocks: pi.canonical().to_lists(),
                    pivot: Some(h0),
                    deleted: Some(Box::new(deleted)),
                    restricted: Some(Box::new(restricted)),
                };
                self.memo.insert(key, Decision::Yes(cert.clone()));
                return Decision::Yes(cert);
            }
        }
        if out_of_budget {
            Decision::Undecided
        } else {
            self.memo.insert(key, Decision::No);
            Decision::No
        }
    }
}

/// Decides whether the fixed pair (arrangement, partition) admits a pivot
/// derivation, without searching over other partitions of the arrangement.
pub fn is_pair_inductively_factored(
    a: &Arrangement,
    pi: &Partition,
    budget: u64,
) -> Decision<InductiveCertificate> {
    let mut search = InductiveSearch {
        memo: HashMap::new(),
        nodes: 0,
        budget,
    };
    search.pair(a, pi)
}

/// Searches for an inductive factorization: some nice partition must admit a
/// pivot chain per the derivation rules. `budget` bounds the number of
/// search nodes; exceeding it yields `Undecided` rather than a false "no".
pub fn is_inductively_factored(a: &Arrangement, budget: u64) -> Decision<InductiveCertificate> {
    if a.is_empty() {
        return Decision::Yes(InductiveCertificate::leaf());
    }
    let lattice = build_lattice(a);
    let mut search = InductiveSearch {
        memo: HashMap::new(),
        nodes: 0,
        budget,
    };
    let mut found: Option<InductiveCertificate> = None;
    let mut out_of_budget = false;
    // a modular tower's partition is the most likely witness; its pair is
    // re-visited for free through the memo if enumeration reaches it again
    if let Some(chain) = is_supersolvable(a, &lattice) {
        let pi = supersolvable_to_nice(a, &lattice, &chain)
            .expect("the searched chain is modular and maximal");
        match search.pair(a, &pi) {
            Decision::Yes(c) => return Decision::Yes(c),
            Decision::Undecided => out_of_budget = true,
            Decision::No => {}
        }
    }
    enumerate_nice(a, &lattice, &mut |pi| {
        match search.pair(a, pi) {
            Decision::Yes(c) => {
                found = Some(c);
                true
            }
            Decision::Undecided => {
                out_of_budget = true;
                false
            }
            Decision::No => false,
        }
    });
    match found {
        Some(c) => Decision::Yes(c),
        None if out_of_budget => Decision::Undecided,
        None => Decision::No,
    }
}

/// Exponent multiset of a certified inductively free arrangement; the entry
/// count equals the ambient dimension (rank deficiencies appear as zeros)
/// and the sum equals the number of hyperplanes.
pub type ExpSet = Vec<u64>;

/// The single element of `sup` left over after removing `sub` once each, if
/// `sub` embeds into `sup` with exactly one element to spare.
fn multiset_leftover(sup: &[u64], sub: &[u64]) -> Option<u64> {
    if sup.len() != sub.len() + 1 {
        return None;
    }
    let mut remaining: Vec<u64> = sup.to_vec();
    for x in sub {
        let pos = remaining.iter().position(|y| y == x)?;
        remaining.swap_remove(pos);
    }
    remaining.pop()
}

/// Derivation tree certifying inductive freeness: each node fixes a pivot
/// whose deletion and restriction are certified by the children, with the
/// restriction exponents nested in the deletion exponents. Leaves are empty
/// arrangements with all-zero exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCertificate {
    pub exponents: ExpSet,
    pub pivot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deleted: Option<Box<FreeCertificate>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restricted: Option<Box<FreeCertificate>>,
}

/// Recomputes every step of a freeness derivation: children must match the
/// pivot's deletion and restriction, the exponent nesting must hold, and
/// each node's exponents must be the child exponents with the leftover
/// bumped by one. The certificate's exponent multisets are index-free.
pub fn verify_free_certificate(a: &Arrangement, cert: &FreeCertificate) -> Result<(), String> {
    if a.is_empty() {
        if cert.pivot.is_some() || cert.exponents != vec![0; a.dim()] {
            return Err("empty arrangement takes the all-zero leaf".to_string());
        }
        return Ok(());
    }
    let pivot = cert.pivot.ok_or("missing pivot")?;
    if pivot >= a.len() {
        return Err(format!("pivot {pivot} is out of range"));
    }
    let deleted_cert = cert.deleted.as_ref().ok_or("missing deleted child")?;
    let restricted_cert = cert.restricted.as_ref().ok_or("missing restricted child")?;
    let t = triple(a, pivot);
    verify_free_certificate(&t.deleted, deleted_cert)?;
    verify_free_certificate(&t.restricted, restricted_cert)?;
    let leftover = multiset_leftover(&deleted_cert.exponents, &restricted_cert.exponents)
        .ok_or("restriction exponents do not nest in the deletion exponents")?;
    let mut expected = restricted_cert.exponents.clone();
    expected.push(leftover + 1);
    expected.sort_unstable();
    if cert.exponents != expected {
        return Err(format!(
            "node exponents {:?} differ from the derived {:?}",
            cert.exponents, expected
        ));
    }
    Ok(())
}

struct FreeSearch {
    memo: HashMap<String, Decision<FreeCertificate>>,
    nodes: u64,
    budget: u64,
}

impl FreeSearch {
    fn run(&mut self, a: &Arrangement) -> Decision<FreeCertificate> {
        if a.is_empty() {
            return Decision::Yes(FreeCertificate {
                exponents: vec![0; a.dim()],
                pivot: None,
                deleted: None,
                restricted: None,
            });
        }
        let key = arrangement_key(a);
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Decision::Undecided;
        }
        let mut out_of_budget = false;
        for h0 in 0..a.len() {
            let t = triple(a, h0);
            let deleted = match self.run(&t.deleted) {
                Decision::Yes(c) => c,
                Decision::No => continue,
                Decision::Undecided => {
                    out_of_budget = true;
                    continue;
                }
            };
            let restricted = match self.run(&t.restricted) {
                Decision::Yes(c) => c,
                Decision::No => continue,
                Decision::Undecided => {
                    out_of_budget = true;
                    continue;
                }
            };
            let Some(leftover) = multiset_leftover(&deleted.exponents, &restricted.exponents)
            else {
                continue;
            };
            let mut exponents = restricted.exponents.clone();
            exponents.push(leftover + 1);
            exponents.sort_unstable();
            let answer = Decision::Yes(FreeCertificate {
                exponents,
                pivot: Some(h0),
                deleted: Some(Box::new(deleted)),
                restricted: Some(Box::new(restricted)),
            });
            self.memo.insert(key, answer.clone());
            return answer;
        }
        if out_of_budget {
            Decision::Undecided
        } else {
            self.memo.insert(key, Decision::No);
            Decision::No
        }
    }
}

/// Searches for an inductive freeness derivation: some pivot must make the
/// deletion and the restriction both inductively free with the restriction
/// exponents nested in the deletion exponents; the node's exponents bump
/// the leftover deletion exponent by one. Returns the full pivot tree.
pub fn is_inductively_free_certified(a: &Arrangement, budget: u64) -> Decision<FreeCertificate> {
    let mut search = FreeSearch {
        memo: HashMap::new(),
        nodes: 0,
        budget,
    };
    search.run(a)
}

/// Exponent multiset of an inductive freeness derivation, when one exists.
pub fn is_inductively_free(a: &Arrangement, budget: u64) -> Decision<ExpSet> {
    is_inductively_free_certified(a, budget).map(|c| c.exponents)
}

/// Every restriction of the arrangement (itself included) must carry a nice
/// partition. For rank at most three only the top level is searched, since
/// all proper restrictions have rank at most two and those always carry the
/// partition of a modular tower.
pub fn is_hereditarily_factored(a: &Arrangement) -> bool {
    let lattice = build_lattice(a);
    if find_nice(a, &lattice).is_none() {
        return false;
    }
    if lattice.rank() <= 3 {
        return true;
    }
    for flat in lattice.all_flats() {
        if flat.rank() == 0 {
            continue;
        }
        let restricted = crate::arrangement::restriction(a, flat.support());
        let restricted_lattice = build_lattice(&restricted);
        if find_nice(&restricted, &restricted_lattice).is_none() {
            return false;
        }
    }
    true
}

/// Hereditary version of the inductive search, with the same rank-three
/// shortcut. Any certified "no" wins over "undecided"; "yes" needs every
/// restriction certified.
pub fn is_hereditarily_inductively_factored(a: &Arrangement, budget: u64) -> Decision<()> {
    let top = is_inductively_factored(a, budget);
    let lattice = build_lattice(a);
    if lattice.rank() <= 3 {
        return top.map(|_| ());
    }
    let mut undecided = !matches!(top, Decision::Yes(_));
    if matches!(top, Decision::No) {
        return Decision::No;
    }
    for flat in lattice.all_flats() {
        if flat.rank() == 0 {
            continue;
        }
        let restricted = crate::arrangement::restriction(a, flat.support());
        match is_inductively_factored(&restricted, budget) {
            Decision::No => return Decision::No,
            Decision::Undecided => undecided = true,
            Decision::Yes(_) => {}
        }
    }
    if undecided {
        Decision::Undecided
    } else {
        Decision::Yes(())
    }
}
