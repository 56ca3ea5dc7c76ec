//! Central hyperplane arrangements over cyclotomic fields: intersection
//! lattices, localization, restriction, deletion, products, and the
//! characteristic polynomial.
//!
//! A flat is identified by its support, the set of hyperplane indices whose
//! intersection contains the flat's subspace. Supports are closed: they
//! contain every hyperplane whose normal lies in the span of their members.

use crate::exactfield::{cyc_add, cyc_inv, cyc_mul, CycNum, Echelon, Int, IntPoly, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

/// Set of hyperplane indices packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitset {
    universe: usize,
    words: Box<[u64]>,
}

impl Bitset {
    pub fn new(universe: usize) -> Bitset {
        Bitset {
            universe,
            words: vec![0; universe.div_ceil(64)].into_boxed_slice(),
        }
    }

    pub fn full(universe: usize) -> Bitset {
        let mut s = Bitset::new(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Bitset {
        let mut s = Bitset::new(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} out of range");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} out of range");
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &Bitset) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a | b)
            .collect();
        Bitset {
            universe: self.universe,
            words,
        }
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        debug_assert_eq!(self.universe, other.universe);
        let words = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| a & b)
            .collect();
        Bitset {
            universe: self.universe,
            words,
        }
    }

    /// Indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let lowest = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + lowest)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Bitset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ArrangementError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("hyperplanes {first} and {second} coincide")]
    Duplicate { first: usize, second: usize },
    #[error("hyperplane {index} has a zero normal")]
    ZeroNormal { index: usize },
    #[error("hyperplane {index} does not match dimension {dim} and conductor {conductor}")]
    Shape {
        index: usize,
        dim: usize,
        conductor: u32,
    },
}

/// One hyperplane, the kernel of a nonzero covector.
///
/// The covector is scaled so its first nonzero coordinate is 1; equal kernels
/// therefore compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    normal: Box<[CycNum]>,
}

impl Hyperplane {
    /// Canonicalizes the covector. Panics if it is zero.
    pub fn new(normal: Vec<CycNum>) -> Hyperplane {
        let lead = normal
            .iter()
            .position(|c| !c.is_zero())
            .expect("hyperplane normal must be nonzero");
        let inv = cyc_inv(&normal[lead]);
        let scaled: Vec<CycNum> = normal.iter().map(|c| cyc_mul(c, &inv)).collect();
        Hyperplane {
            normal: scaled.into_boxed_slice(),
        }
    }

    pub fn normal(&self) -> &[CycNum] {
        &self.normal
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }
}

impl fmt::Debug for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ker(")?;
        for (i, c) in self.normal.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A central arrangement: distinct hyperplanes through the origin of C^dim,
/// all written over one conductor. The hyperplane order is part of the value
/// and is preserved by every construction.
#[derive(Clone)]
pub struct Arrangement {
    dim: usize,
    conductor: u32,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(
        dim: usize,
        conductor: u32,
        hyperplanes: Vec<Hyperplane>,
    ) -> Result<Arrangement, ArrangementError> {
        let mut seen: HashMap<&Hyperplane, usize> = HashMap::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim || h.normal.iter().any(|c| c.conductor() != conductor) {
                return Err(ArrangementError::Shape {
                    index: i,
                    dim,
                    conductor,
                });
            }
            if let Some(&first) = seen.get(h) {
                return Err(ArrangementError::Duplicate { first, second: i });
            }
            seen.insert(h, i);
        }
        drop(seen);
        Ok(Arrangement {
            dim,
            conductor,
            hyperplanes,
        })
    }

    /// The empty arrangement in C^dim.
    pub fn empty(dim: usize, conductor: u32) -> Arrangement {
        Arrangement {
            dim,
            conductor,
            hyperplanes: Vec::new(),
        }
    }

    /// Builds hyperplanes from raw covectors, canonicalizing each.
    pub fn from_covectors(
        dim: usize,
        conductor: u32,
        covectors: Vec<Vec<CycNum>>,
    ) -> Result<Arrangement, ArrangementError> {
        let mut hyperplanes = Vec::with_capacity(covectors.len());
        for (i, v) in covectors.into_iter().enumerate() {
            if v.iter().all(CycNum::is_zero) {
                return Err(ArrangementError::ZeroNormal { index: i });
            }
            hyperplanes.push(Hyperplane::new(v));
        }
        Arrangement::new(dim, conductor, hyperplanes)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    /// Echelon form of the normals selected by `indices`, in that order.
    pub fn echelon_of(&self, indices: impl IntoIterator<Item = usize>) -> Echelon {
        let mut ech = Echelon::new(self.conductor, self.dim);
        for i in indices {
            ech.insert(self.hyperplanes[i].normal());
        }
        ech
    }

    /// Rank of the whole arrangement, r(A).
    pub fn rank(&self) -> usize {
        self.echelon_of(0..self.len()).rank()
    }
}

impl fmt::Debug for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Arrangement(dim {}, conductor {}, {} hyperplanes)",
            self.dim,
            self.conductor,
            self.len()
        )
    }
}

/// Rank of the normals indexed by `subset`.
pub fn rank_of_subset(arrangement: &Arrangement, subset: &Bitset) -> usize {
    arrangement.echelon_of(subset.iter()).rank()
}

/// Closure of a subset: all hyperplanes whose normal lies in the span of the
/// subset's normals.
pub fn closure(arrangement: &Arrangement, subset: &Bitset) -> Bitset {
    let ech = arrangement.echelon_of(subset.iter());
    let mut closed = Bitset::new(arrangement.len());
    for (i, h) in arrangement.hyperplanes.iter().enumerate() {
        if subset.contains(i) || ech.contains(h.normal()) {
            closed.insert(i);
        }
    }
    closed
}

/// One lattice element.
#[derive(Clone, Debug)]
pub struct Flat {
    support: Bitset,
    rank: usize,
}

impl Flat {
    pub fn support(&self) -> &Bitset {
        &self.support
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// All flats of an arrangement, grouped by rank.
pub struct IntersectionLattice {
    strata: Vec<Vec<Flat>>,
    positions: HashMap<Bitset, (usize, usize)>,
}

impl IntersectionLattice {
    /// Strata by rank; stratum 0 is the single flat V with empty support.
    pub fn strata(&self) -> &[Vec<Flat>] {
        &self.strata
    }

    pub fn stratum(&self, rank: usize) -> &[Flat] {
        &self.strata[rank]
    }

    /// r(A), the rank of the top flat.
    pub fn rank(&self) -> usize {
        self.strata.len() - 1
    }

    pub fn n_flats(&self) -> usize {
        self.strata.iter().map(Vec::len).sum()
    }

    pub fn all_flats(&self) -> impl Iterator<Item = &Flat> {
        self.strata.iter().flatten()
    }

    /// The center flat, whose support is the whole arrangement.
    pub fn top(&self) -> &Flat {
        &self.strata[self.strata.len() - 1][0]
    }

    /// Looks a closed support up; `None` when the set is not a flat.
    pub fn find(&self, support: &Bitset) -> Option<&Flat> {
        self.positions
            .get(support)
            .map(|&(r, i)| &self.strata[r][i])
    }

    /// Characteristic polynomial from the Whitney sum over this lattice.
    pub fn char_poly(&self) -> IntPoly {
        let flats: Vec<(Bitset, usize)> = self
            .all_flats()
            .map(|f| (f.support.clone(), f.rank))
            .collect();
        char_poly_from_flats(&flats)
    }
}

/// Builds the intersection lattice rank by rank.
///
/// Stratum k+1 is generated by closing support(F) + h over flats F of rank k
/// and hyperplanes h outside F. A candidate whose union already sits inside a
/// found rank-(k+1) flat closes to that flat and is skipped, so each flat's
/// closure is computed exactly once.
pub fn build_lattice(arrangement: &Arrangement) -> IntersectionLattice {
    let n = arrangement.len();
    let mut strata = vec![vec![Flat {
        support: Bitset::new(n),
        rank: 0,
    }]];
    let mut positions = HashMap::new();
    positions.insert(Bitset::new(n), (0, 0));
    loop {
        let current = strata.last().unwrap();
        let rank = strata.len() - 1;
        let mut next: Vec<Flat> = Vec::new();
        // found_with[h] lists the flats of the next stratum containing h
        let mut found_with: Vec<Vec<usize>> = vec![Vec::new(); n];
        for flat in current {
            let base = arrangement.echelon_of(flat.support.iter());
            'candidates: for h in 0..n {
                if flat.support.contains(h) {
                    continue;
                }
                for &y in &found_with[h] {
                    if flat.support.is_subset_of(&next[y].support) {
                        continue 'candidates;
                    }
                }
                let mut ech = base.clone();
                let inserted = ech.insert(arrangement.hyperplane(h).normal());
                debug_assert!(inserted, "h outside a closed support is independent of it");
                let mut support = Bitset::new(n);
                for (j, hyperplane) in arrangement.hyperplanes.iter().enumerate() {
                    if ech.contains(hyperplane.normal()) {
                        support.insert(j);
                    }
                }
                let position = next.len();
                for j in support.iter() {
                    found_with[j].push(position);
                }
                next.push(Flat {
                    support,
                    rank: rank + 1,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        for (i, flat) in next.iter().enumerate() {
            let previous = positions.insert(flat.support.clone(), (rank + 1, i));
            debug_assert!(previous.is_none(), "duplicate flat escaped the subset skip");
        }
        strata.push(next);
    }
    IntersectionLattice { strata, positions }
}

/// Whitney sum over an arbitrary list of flats given as (support, rank):
/// Möbius values from mu(V) = 1 and mu(X) = -sum of mu over proper
/// subsupports, then p(t) = sum of mu(X) (-t)^rank(X).
pub fn char_poly_from_flats(flats: &[(Bitset, usize)]) -> IntPoly {
    let max_rank = flats.iter().map(|&(_, r)| r).max().unwrap_or(0);
    // index flats by rank so predecessors are scanned in rank order
    let mut by_rank: Vec<Vec<usize>> = vec![Vec::new(); max_rank + 1];
    for (i, &(_, r)) in flats.iter().enumerate() {
        by_rank[r].push(i);
    }
    let mut mu = vec![Int::zero(); flats.len()];
    let mut coeffs = vec![Int::zero(); max_rank + 1];
    for rank in 0..=max_rank {
        for &i in &by_rank[rank] {
            let mut value = if rank == 0 { Int::one() } else { Int::zero() };
            for lower in 0..rank {
                for &j in &by_rank[lower] {
                    if flats[j].0.is_subset_of(&flats[i].0) {
                        value -= &mu[j];
                    }
                }
            }
            if rank == 0 && !flats[i].0.is_empty() {
                // a rank-0 flat is V itself; anything else is malformed input
                panic!("rank-0 flat with nonempty support");
            }
            // (-t)^rank contributes sign (-1)^rank at degree rank
            if rank % 2 == 0 {
                coeffs[rank] += &value;
            } else {
                coeffs[rank] -= &value;
            }
            mu[i] = value;
        }
    }
    IntPoly::new(coeffs)
}

/// Characteristic polynomial of an arrangement, building its lattice.
pub fn char_poly(arrangement: &Arrangement) -> IntPoly {
    build_lattice(arrangement).char_poly()
}

/// Block sizes forced by a complete factorization p = prod (1 + b_i t) with
/// positive integer b_i; `None` when no such factorization exists. The
/// constant term must be 1.
pub fn integer_root_multiset(p: &IntPoly) -> Option<Vec<u64>> {
    if p.is_zero() || !p.coeff(0).is_one() {
        return None;
    }
    let mut current = p.clone();
    let mut roots = Vec::new();
    while let Some(degree) = current.degree() {
        if degree == 0 {
            break;
        }
        if current.coeffs().iter().any(|c| !c.is_positive()) {
            return None;
        }
        let lead = current
            .coeff(degree)
            .to_u64()
            .expect("characteristic polynomial coefficients stay small");
        let mut stripped = None;
        for b in 1..=lead {
            if lead % b != 0 {
                continue;
            }
            // synthetic division by (1 + b t): q_k = c_k - b q_(k-1)
            let bb = Int::from(b);
            let mut quotient = Vec::with_capacity(degree);
            let mut prev = Int::zero();
            for k in 0..degree {
                let q = current.coeff(k) - &bb * &prev;
                prev = q.clone();
                quotient.push(q);
            }
            if current.coeff(degree) == &bb * &prev {
                roots.push(b);
                stripped = Some(IntPoly::new(quotient));
                break;
            }
        }
        current = stripped?;
    }
    if !current.coeff(0).is_one() {
        return None;
    }
    roots.sort_unstable();
    Some(roots)
}

/// Subarrangement of the hyperplanes through a flat, order inherited.
/// Panics if `support` is not closed.
pub fn localization(arrangement: &Arrangement, support: &Bitset) -> Arrangement {
    assert_eq!(
        &closure(arrangement, support),
        support,
        "localization requires a flat"
    );
    let hyperplanes = support
        .iter()
        .map(|i| arrangement.hyperplane(i).clone())
        .collect();
    Arrangement {
        dim: arrangement.dim,
        conductor: arrangement.conductor,
        hyperplanes,
    }
}

/// Restriction to a flat: the traces of the hyperplanes outside the support,
/// written in a kernel basis of the flat's subspace and deduplicated keeping
/// first occurrences. Also returns the trace map: original index -> index in
/// the restriction (`None` on the support itself).
pub fn restriction_with_map(
    arrangement: &Arrangement,
    support: &Bitset,
) -> (Arrangement, Vec<Option<usize>>) {
    let conductor = arrangement.conductor;
    let basis = arrangement.echelon_of(support.iter()).kernel_basis();
    let new_dim = basis.len();
    let mut hyperplanes: Vec<Hyperplane> = Vec::new();
    let mut seen: HashMap<Hyperplane, usize> = HashMap::new();
    let mut trace_map = vec![None; arrangement.len()];
    for (i, h) in arrangement.hyperplanes.iter().enumerate() {
        if support.contains(i) {
            continue;
        }
        let covector: Vec<CycNum> = basis
            .iter()
            .map(|b| {
                h.normal()
                    .iter()
                    .zip(b)
                    .fold(CycNum::zero(conductor), |acc, (a, x)| {
                        cyc_add(&acc, &cyc_mul(a, x))
                    })
            })
            .collect();
        // the trace is a proper hyperplane of the flat: the normal cannot
        // vanish on the whole kernel basis unless H contains the flat
        let trace = Hyperplane::new(covector);
        let index = *seen.entry(trace.clone()).or_insert_with(|| {
            hyperplanes.push(trace);
            hyperplanes.len() - 1
        });
        trace_map[i] = Some(index);
    }
    (
        Arrangement {
            dim: new_dim,
            conductor,
            hyperplanes,
        },
        trace_map,
    )
}

pub fn restriction(arrangement: &Arrangement, support: &Bitset) -> Arrangement {
    restriction_with_map(arrangement, support).0
}

/// Deletion of one hyperplane, order preserved.
pub fn deletion(arrangement: &Arrangement, h: usize) -> Arrangement {
    assert!(h < arrangement.len(), "hyperplane index out of range");
    let hyperplanes = arrangement
        .hyperplanes
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != h)
        .map(|(_, hp)| hp.clone())
        .collect();
    Arrangement {
        dim: arrangement.dim,
        conductor: arrangement.conductor,
        hyperplanes,
    }
}

/// Deletion and restriction at one hyperplane.
pub struct Triple {
    pub deleted: Arrangement,
    pub restricted: Arrangement,
    /// original index -> index in `restricted`; `None` exactly at the pivot
    pub trace_map: Vec<Option<usize>>,
}

pub fn triple(arrangement: &Arrangement, h: usize) -> Triple {
    assert!(!arrangement.is_empty(), "triple needs a hyperplane");
    let support = Bitset::from_indices(arrangement.len(), [h]);
    let (restricted, trace_map) = restriction_with_map(arrangement, &support);
    Triple {
        deleted: deletion(arrangement, h),
        restricted,
        trace_map,
    }
}

/// Product arrangement in C^(dim1 + dim2): every hyperplane of the first
/// factor extended by the second factor's space and vice versa, first
/// factor's hyperplanes first. Conductors are lifted to their lcm.
pub fn product(a: &Arrangement, b: &Arrangement) -> Arrangement {
    let conductor = num_integer::lcm(a.conductor, b.conductor);
    let dim = a.dim + b.dim;
    let mut covectors = Vec::with_capacity(a.len() + b.len());
    for h in &a.hyperplanes {
        let mut v = Vec::with_capacity(dim);
        for c in h.normal() {
            v.push(crate::exactfield::embed(c, conductor));
        }
        v.resize(dim, CycNum::zero(conductor));
        covectors.push(v);
    }
    for h in &b.hyperplanes {
        let mut v = vec![CycNum::zero(conductor); a.dim];
        for c in h.normal() {
            v.push(crate::exactfield::embed(c, conductor));
        }
        covectors.push(v);
    }
    Arrangement::from_covectors(dim, conductor, covectors)
        .expect("product of valid arrangements is valid")
}

/// Flats of the deletion A minus h, derived from A's lattice: supports drop
/// the index h (and re-index the tail), ranks are the minimum over preimages.
/// No field arithmetic is involved.
pub fn deletion_flats(lattice: &IntersectionLattice, h: usize, n: usize) -> Vec<(Bitset, usize)> {
    let mut ranks: HashMap<Bitset, usize> = HashMap::new();
    for flat in lattice.all_flats() {
        let mut support = Bitset::new(n - 1);
        for i in flat.support.iter() {
            if i != h {
                support.insert(if i < h { i } else { i - 1 });
            }
        }
        ranks
            .entry(support)
            .and_modify(|r| *r = (*r).min(flat.rank))
            .or_insert(flat.rank);
    }
    ranks.into_iter().collect()
}

/// Flats of the restriction A^H, derived from A's lattice as the interval
/// above h: supports of flats containing h, pushed through the trace map,
/// with rank dropped by one.
pub fn restriction_flats(
    lattice: &IntersectionLattice,
    h: usize,
    trace_map: &[Option<usize>],
    restricted_len: usize,
) -> Vec<(Bitset, usize)> {
    let mut flats = Vec::new();
    for flat in lattice.all_flats() {
        if !flat.support.contains(h) {
            continue;
        }
        let mut support = Bitset::new(restricted_len);
        for i in flat.support.iter() {
            if i != h {
                support.insert(trace_map[i].expect("trace map covers the deletion"));
            }
        }
        flats.push((support, flat.rank - 1));
    }
    flats
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Serializes to the line-oriented text format: a `dim L conductor N` header,
/// then one hyperplane per line as phi(N)*L rationals, coordinate-major with
/// zeta powers ascending inside each coordinate.
pub fn write_arrangement(arrangement: &Arrangement) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "dim {} conductor {}",
        arrangement.dim, arrangement.conductor
    )
    .unwrap();
    for h in &arrangement.hyperplanes {
        let mut fields = Vec::with_capacity(arrangement.dim * h.normal()[0].coeffs().len());
        for c in h.normal() {
            for r in c.coeffs() {
                fields.push(format_rat(r));
            }
        }
        writeln!(out, "{}", fields.join(" ")).unwrap();
    }
    out
}

fn parse_rat(token: &str, line: usize) -> Result<Rat, ArrangementError> {
    let bad = |message: String| ArrangementError::Parse { line, message };
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, d),
        None => (token, "1"),
    };
    let numer: Int = num
        .parse()
        .map_err(|_| bad(format!("bad rational `{token}`")))?;
    let denom: Int = den
        .parse()
        .map_err(|_| bad(format!("bad rational `{token}`")))?;
    if denom.is_zero() {
        return Err(bad(format!("zero denominator in `{token}`")));
    }
    Ok(Rat::new(numer, denom))
}

/// Parses the text format accepted by `write_arrangement`. `#` starts a
/// comment; blank lines are skipped.
pub fn parse_arrangement(text: &str) -> Result<Arrangement, ArrangementError> {
    let mut dim: Option<usize> = None;
    let mut conductor: Option<u32> = None;
    let mut covectors: Vec<Vec<CycNum>> = Vec::new();
    let mut indices: Vec<usize> = Vec::new();
    for (line_index, raw) in text.lines().enumerate() {
        let line = line_index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| ArrangementError::Parse { line, message };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (Some(d), Some(n)) = (dim, conductor) else {
            if tokens.len() != 4 || tokens[0] != "dim" || tokens[2] != "conductor" {
                return Err(bad("expected header `dim L conductor N`".to_string()));
            }
            let d: usize = tokens[1]
                .parse()
                .map_err(|_| bad(format!("bad dimension `{}`", tokens[1])))?;
            let n: u32 = tokens[3]
                .parse()
                .map_err(|_| bad(format!("bad conductor `{}`", tokens[3])))?;
            if n == 0 {
                return Err(bad("conductor must be positive".to_string()));
            }
            dim = Some(d);
            conductor = Some(n);
            continue;
        };
        let width = crate::exactfield::phi(n);
        if tokens.len() != width * d {
            return Err(bad(format!(
                "expected {} rationals ({} coordinates x {} zeta powers), found {}",
                width * d,
                d,
                width,
                tokens.len()
            )));
        }
        let mut covector = Vec::with_capacity(d);
        for coordinate in tokens.chunks(width) {
            let coeffs = coordinate
                .iter()
                .map(|t| parse_rat(t, line))
                .collect::<Result<Vec<_>, _>>()?;
            covector.push(CycNum::from_coeffs(n, coeffs));
        }
        if covector.iter().all(CycNum::is_zero) {
            return Err(bad("hyperplane normal is zero".to_string()));
        }
        covectors.push(covector);
        indices.push(line);
    }
    let (Some(d), Some(n)) = (dim, conductor) else {
        return Err(ArrangementError::Parse {
            line: 0,
            message: "missing header".to_string(),
        });
    };
    Arrangement::from_covectors(d, n, covectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{rat, CycNum};
    use proptest::prelude::*;

    fn covector(conductor: u32, entries: &[i64]) -> Vec<CycNum> {
        entries
            .iter()
            .map(|&e| CycNum::from_int(conductor, e))
            .collect()
    }

    fn boolean(dim: usize) -> Arrangement {
        let covectors = (0..dim)
            .map(|i| {
                let mut v = vec![0i64; dim];
                v[i] = 1;
                covector(1, &v)
            })
            .collect();
        Arrangement::from_covectors(dim, 1, covectors).unwrap()
    }

    fn braid3() -> Arrangement {
        Arrangement::from_covectors(
            3,
            1,
            vec![
                covector(1, &[1, -1, 0]),
                covector(1, &[0, 1, -1]),
                covector(1, &[1, 0, -1]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bitset_basics() {
        let mut s = Bitset::new(130);
        s.insert(0);
        s.insert(64);
        s.insert(129);
        assert_eq!(s.len(), 3);
        assert_eq!(s.to_indices(), vec![0, 64, 129]);
        assert!(s.contains(64) && !s.contains(63));
        s.remove(64);
        assert_eq!(s.to_indices(), vec![0, 129]);
        assert!(s.is_subset_of(&Bitset::full(130)));
        assert!(!Bitset::full(130).is_subset_of(&s));
    }

    #[test]
    fn canonicalization_merges_scaled_normals() {
        let a = Hyperplane::new(covector(4, &[2, -2, 0]));
        let b = Hyperplane::new(covector(4, &[1, -1, 0]));
        assert_eq!(a, b);
        let scaled = vec![
            CycNum::zero(4),
            CycNum::zeta(4),
            cyc_mul(&CycNum::zeta(4), &CycNum::from_int(4, 3)),
        ];
        let c = Hyperplane::new(scaled);
        assert_eq!(c, Hyperplane::new(covector(4, &[0, 1, 3])));
    }

    #[test]
    fn duplicate_hyperplanes_are_rejected() {
        let result = Arrangement::from_covectors(
            2,
            1,
            vec![covector(1, &[1, 0]), covector(1, &[3, 0])],
        );
        assert!(matches!(
            result,
            Err(ArrangementError::Duplicate {
                first: 0,
                second: 1
            })
        ));
    }

    #[test]
    fn empty_arrangement_lattice() {
        let lattice = build_lattice(&Arrangement::empty(3, 1));
        assert_eq!(lattice.n_flats(), 1);
        assert_eq!(lattice.rank(), 0);
        assert_eq!(lattice.char_poly(), IntPoly::from_i64(&[1]));
    }

    #[test]
    fn boolean_cube_lattice() {
        let lattice = build_lattice(&boolean(3));
        let sizes: Vec<usize> = lattice.strata().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
        assert_eq!(lattice.char_poly(), IntPoly::from_i64(&[1, 3, 3, 1]));
        assert_eq!(
            integer_root_multiset(&lattice.char_poly()),
            Some(vec![1, 1, 1])
        );
    }

    #[test]
    fn braid_lattice_and_poincare() {
        let lattice = build_lattice(&braid3());
        let sizes: Vec<usize> = lattice.strata().iter().map(Vec::len).collect();
        // three normals through one common line: one triple point
        assert_eq!(sizes, vec![1, 3, 1]);
        assert_eq!(lattice.char_poly(), IntPoly::from_i64(&[1, 3, 2]));
        assert_eq!(integer_root_multiset(&lattice.char_poly()), Some(vec![1, 2]));
    }

    #[test]
    fn rank_of_subset_examples() {
        let a = braid3();
        assert_eq!(rank_of_subset(&a, &Bitset::new(3)), 0);
        assert_eq!(rank_of_subset(&a, &Bitset::full(3)), 2);
        assert_eq!(
            rank_of_subset(&a, &Bitset::from_indices(3, [0, 1])),
            2
        );
    }

    #[test]
    fn localization_at_center_is_identity() {
        let a = braid3();
        let lattice = build_lattice(&a);
        let local = localization(&a, lattice.top().support());
        assert_eq!(local.len(), 3);
        assert_eq!(local.hyperplanes(), a.hyperplanes());
        let at_v = localization(&a, &Bitset::new(3));
        assert!(at_v.is_empty());
    }

    #[test]
    fn restriction_of_boolean_is_boolean() {
        let a = boolean(3);
        let restricted = restriction(&a, &Bitset::from_indices(3, [0]));
        assert_eq!(restricted.dim(), 2);
        assert_eq!(restricted.len(), 2);
        let again = restriction(&restricted, &Bitset::from_indices(2, [0]));
        assert_eq!(again.dim(), 1);
        assert_eq!(again.len(), 1);
        // restricting along the chain matches restricting to the deeper flat
        let direct = restriction(&a, &Bitset::from_indices(3, [0, 1]));
        assert_eq!(direct.dim(), again.dim());
        assert_eq!(direct.hyperplanes(), again.hyperplanes());
    }

    #[test]
    fn triple_of_boolean_two() {
        let t = triple(&boolean(2), 0);
        assert_eq!(t.deleted.len(), 1);
        assert_eq!(t.restricted.len(), 1);
        assert_eq!(t.restricted.dim(), 1);
        assert_eq!(t.trace_map, vec![None, Some(0)]);
    }

    #[test]
    fn braid_restriction_merges_traces() {
        // on ker(x - y), the traces of y - z and x - z coincide
        let t = triple(&braid3(), 0);
        assert_eq!(t.restricted.len(), 1);
        assert_eq!(t.trace_map, vec![None, Some(0), Some(0)]);
    }

    #[test]
    fn product_of_booleans_is_boolean() {
        let p = product(&boolean(1), &boolean(2));
        assert_eq!(p.dim(), 3);
        assert_eq!(p.len(), 3);
        let sizes: Vec<usize> = build_lattice(&p).strata().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 3, 3, 1]);
    }

    #[test]
    fn product_with_empty_rank_zero_factor() {
        let a = braid3();
        let p = product(&a, &Arrangement::empty(0, 1));
        assert_eq!(p.dim(), a.dim());
        assert_eq!(p.hyperplanes(), a.hyperplanes());
    }

    #[test]
    fn product_mixes_conductors() {
        let over3 = Arrangement::from_covectors(
            1,
            3,
            vec![vec![CycNum::one(3)]],
        )
        .unwrap();
        let over4 = Arrangement::from_covectors(
            1,
            4,
            vec![vec![CycNum::one(4)]],
        )
        .unwrap();
        let p = product(&over3, &over4);
        assert_eq!(p.conductor(), 12);
        assert_eq!(p.len(), 2);
        assert_eq!(build_lattice(&p).char_poly(), IntPoly::from_i64(&[1, 2, 1]));
    }

    #[test]
    fn char_poly_is_multiplicative_on_products() {
        let a = braid3();
        let b = boolean(2);
        let product_poly = char_poly(&product(&a, &b));
        assert_eq!(product_poly, char_poly(&a).mul(&char_poly(&b)));
    }

    #[test]
    fn root_multiset_examples() {
        // (1+t)(1+4t)^2
        let p = IntPoly::from_i64(&[1, 9, 24, 16]);
        assert_eq!(integer_root_multiset(&p), Some(vec![1, 4, 4]));
        assert_eq!(integer_root_multiset(&IntPoly::from_i64(&[1, 1, 1])), None);
        assert_eq!(
            integer_root_multiset(&IntPoly::from_i64(&[1, 5, 6])),
            Some(vec![2, 3])
        );
        assert_eq!(integer_root_multiset(&IntPoly::from_i64(&[1])), Some(vec![]));
        assert_eq!(integer_root_multiset(&IntPoly::from_i64(&[2, 2])), None);
    }

    #[test]
    fn deletion_restriction_identity_small() {
        for a in [boolean(3), braid3()] {
            let p = char_poly(&a);
            for h in 0..a.len() {
                let t = triple(&a, h);
                let deleted = char_poly(&t.deleted);
                let restricted = char_poly(&t.restricted);
                // p(A) = p(A') + t * p(A'')
                let mut shifted = vec![Int::zero()];
                shifted.extend_from_slice(restricted.coeffs());
                let mut sum = deleted.coeffs().to_vec();
                sum.resize(sum.len().max(shifted.len()), Int::zero());
                for (k, c) in shifted.into_iter().enumerate() {
                    sum[k] += c;
                }
                assert_eq!(p, IntPoly::new(sum), "hyperplane {h}");
            }
        }
    }

    #[test]
    fn derived_posets_match_direct_builds() {
        let b2 = Arrangement::from_covectors(
            2,
            1,
            vec![
                covector(1, &[1, 0]),
                covector(1, &[0, 1]),
                covector(1, &[1, -1]),
                covector(1, &[1, 1]),
            ],
        )
        .unwrap();
        for a in [boolean(3), braid3(), b2] {
            let lattice = build_lattice(&a);
            for h in 0..a.len() {
                let t = triple(&a, h);
                let derived_deleted = char_poly_from_flats(&deletion_flats(&lattice, h, a.len()));
                assert_eq!(derived_deleted, char_poly(&t.deleted), "deletion at {h}");
                let derived_restricted = char_poly_from_flats(&restriction_flats(
                    &lattice,
                    h,
                    &t.trace_map,
                    t.restricted.len(),
                ));
                assert_eq!(
                    derived_restricted,
                    char_poly(&t.restricted),
                    "restriction at {h}"
                );
            }
        }
    }

    #[test]
    fn closed_supports_are_fixed_points() {
        for a in [boolean(3), braid3()] {
            let lattice = build_lattice(&a);
            for flat in lattice.all_flats() {
                assert_eq!(&closure(&a, flat.support()), flat.support());
                assert_eq!(rank_of_subset(&a, flat.support()), flat.rank());
            }
        }
    }

    #[test]
    fn file_format_round_trip_with_comments() {
        let text = "\
# a braid wearing a comment
dim 3 conductor 1

1 -1 0
0 1 -1   # trailing comment
1 0 -1
";
        let parsed = parse_arrangement(text).unwrap();
        assert_eq!(parsed.hyperplanes(), braid3().hyperplanes());
        let rewritten = write_arrangement(&parsed);
        let reparsed = parse_arrangement(&rewritten).unwrap();
        assert_eq!(reparsed.hyperplanes(), parsed.hyperplanes());
    }

    #[test]
    fn file_format_rejects_garbage() {
        assert!(matches!(
            parse_arrangement("dim 2 conductor 1\n1 2 3\n"),
            Err(ArrangementError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_arrangement("dim 2 conductor 0\n"),
            Err(ArrangementError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_arrangement("1 2\n"),
            Err(ArrangementError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_arrangement("dim 2 conductor 1\n0 0\n"),
            Err(ArrangementError::Parse { line: 2, .. })
        ));
    }

    fn arbitrary_arrangement() -> impl Strategy<Value = Arrangement> {
        let conductor = prop::sample::select(vec![1u32, 3, 4]);
        conductor.prop_flat_map(|n| {
            let width = crate::exactfield::phi(n);
            let entry = (-2i64..=2, 1i64..=2).prop_map(|(p, q)| rat(p, q));
            let coeffs = prop::collection::vec(entry, width);
            let cv = prop::collection::vec(coeffs, 3).prop_map(move |cs| {
                cs.into_iter()
                    .map(|c| CycNum::from_coeffs(n, c))
                    .collect::<Vec<_>>()
            });
            prop::collection::vec(cv, 1..5).prop_map(move |covectors| {
                // keep nonzero rows, then drop duplicates after canonicalization
                let mut hyperplanes: Vec<Hyperplane> = Vec::new();
                for v in covectors {
                    if v.iter().all(CycNum::is_zero) {
                        continue;
                    }
                    let h = Hyperplane::new(v);
                    if !hyperplanes.contains(&h) {
                        hyperplanes.push(h);
                    }
                }
                Arrangement::new(3, n, hyperplanes).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn serialization_round_trips(a in arbitrary_arrangement()) {
            let text = write_arrangement(&a);
            let parsed = parse_arrangement(&text).unwrap();
            prop_assert_eq!(parsed.dim(), a.dim());
            prop_assert_eq!(parsed.conductor(), a.conductor());
            prop_assert_eq!(parsed.hyperplanes(), a.hyperplanes());
        }

        #[test]
        fn lattice_rank_is_submodular(a in arbitrary_arrangement()) {
            let lattice = build_lattice(&a);
            let flats: Vec<&Flat> = lattice.all_flats().collect();
            for x in &flats {
                for y in &flats {
                    let meet = x.support().intersection(y.support());
                    let meet_rank = lattice.find(&meet).expect("meet support is closed").rank();
                    let join_rank = rank_of_subset(&a, &x.support().union(y.support()));
                    prop_assert!(meet_rank + join_rank <= x.rank() + y.rank());
                }
            }
        }

        #[test]
        fn deletion_restriction_identity(a in arbitrary_arrangement()) {
            prop_assume!(!a.is_empty());
            let p = char_poly(&a);
            let t = triple(&a, 0);
            let deleted = char_poly(&t.deleted);
            let restricted = char_poly(&t.restricted);
            let mut sum = deleted.coeffs().to_vec();
            sum.resize(sum.len().max(restricted.coeffs().len() + 1), Int::zero());
            for (k, c) in restricted.coeffs().iter().enumerate() {
                sum[k + 1] += c;
            }
            prop_assert_eq!(p, IntPoly::new(sum));
        }
    }
}
