//! Primitive periodic orbits on the directed-bond graph.
//!
//! Orbits are cyclic bond sequences identified up to rotation (a cycle and its
//! reversal are distinct). Each is stored in its lexicographically minimal
//! rotation. Storage is flat per length because catalogs reach millions of
//! orbits.

use std::collections::HashMap;
use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedBondSpace, Graph};
use crate::laplacian::LaplacianKind;
use crate::linalg::ComplexMatrix;
use crate::scattering::build_u;

pub const DEFAULT_CATALOG_CAP: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveOrbit {
    pub bonds: Vec<usize>,
    /// Number of cyclic back-scatter steps `d → d̂`.
    pub beta: usize,
}

impl PrimitiveOrbit {
    pub fn period(&self) -> usize {
        self.bonds.len()
    }

    pub fn no_backtrack(&self) -> bool {
        self.beta == 0
    }

    /// Checks following, primitivity, canonical rotation and the stored β.
    pub fn is_valid(&self, space: &DirectedBondSpace) -> bool {
        let n = self.bonds.len();
        n >= 1
            && self.bonds.iter().all(|&d| d < space.len())
            && (0..n).all(|k| space.follows(self.bonds[k], self.bonds[(k + 1) % n]))
            && minimal_period(&self.bonds) == n
            && is_min_rotation(&self.bonds)
            && backscatter_count(&self.bonds) == self.beta
    }

    /// The time-reversed orbit `(d̂_n, …, d̂_1)` in canonical rotation.
    pub fn reversed(&self) -> PrimitiveOrbit {
        let rev: Vec<usize> = self.bonds.iter().rev().map(|&d| d ^ 1).collect();
        PrimitiveOrbit {
            bonds: canonical_rotation(&rev),
            beta: self.beta,
        }
    }
}

/// Shortest period of a word (KMP failure function), or its length when the
/// word is not a power of a shorter one.
pub fn minimal_period<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let p = n - fail[n - 1];
    if n.is_multiple_of(p) {
        p
    } else {
        n
    }
}

fn is_min_rotation<T: Ord>(w: &[T]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for k in 0..n {
            match w[(r + k) % n].cmp(&w[k]) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => return true,
                std::cmp::Ordering::Equal => {}
            }
        }
        true
    })
}

pub fn canonical_rotation(w: &[usize]) -> Vec<usize> {
    let n = w.len();
    (0..n)
        .map(|r| (0..n).map(|k| w[(r + k) % n]).collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

fn backscatter_count<T: Copy + Into<usize>>(w: &[T]) -> usize {
    let n = w.len();
    (0..n).filter(|&k| w[(k + 1) % n].into() == w[k].into() ^ 1).count()
}

#[derive(Clone, Copy, Debug)]
pub struct OrbitOptions {
    pub cap: usize,
    /// Skip every walk containing a back-scatter step.
    pub non_backtracking_only: bool,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CATALOG_CAP,
            non_backtracking_only: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
struct LengthBlock {
    bonds: Vec<u16>,
    beta: Vec<u8>,
}

#[derive(Clone, Debug)]
pub struct OrbitCatalog {
    max_length: usize,
    non_backtracking_only: bool,
    blocks: Vec<LengthBlock>,
}

/// A borrowed orbit from the catalog.
#[derive(Clone, Copy, Debug)]
pub struct OrbitRef<'a> {
    pub bonds: &'a [u16],
    pub beta: u8,
}

impl OrbitRef<'_> {
    pub fn period(&self) -> usize {
        self.bonds.len()
    }

    pub fn to_owned(&self) -> PrimitiveOrbit {
        PrimitiveOrbit {
            bonds: self.bonds.iter().map(|&d| d as usize).collect(),
            beta: self.beta as usize,
        }
    }

    /// `a_p = Π_k U_{d_{k+1}, d_k}`, cyclically.
    pub fn amplitude(&self, u: &ComplexMatrix) -> Complex64 {
        let n = self.bonds.len();
        (0..n)
            .map(|k| u[(self.bonds[(k + 1) % n] as usize, self.bonds[k] as usize)])
            .product()
    }
}

impl OrbitCatalog {
    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn is_non_backtracking_only(&self) -> bool {
        self.non_backtracking_only
    }

    /// Orbits of period `n`, in lexicographic order.
    pub fn orbits(&self, n: usize) -> impl Iterator<Item = OrbitRef<'_>> + '_ {
        let block = self.blocks.get(n);
        let count = block.map_or(0, |b| b.beta.len());
        (0..count).map(move |k| {
            let b = block.unwrap();
            OrbitRef {
                bonds: &b.bonds[k * n..(k + 1) * n],
                beta: b.beta[k],
            }
        })
    }

    /// `|P(n)|`; for a non-backtracking catalog this equals `|C(n)|`.
    pub fn count(&self, n: usize) -> usize {
        self.blocks.get(n).map_or(0, |b| b.beta.len())
    }

    /// `|C(n)|`, the back-scatter-free primitive orbits of period `n`.
    pub fn count_no_backtrack(&self, n: usize) -> usize {
        self.blocks.get(n).map_or(0, |b| b.beta.iter().filter(|&&x| x == 0).count())
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().map(|b| b.beta.len()).sum()
    }

    pub fn require_depth(&self, n: usize) -> Result<()> {
        if n > self.max_length {
            return Err(Error::CatalogTooShallow {
                have: self.max_length,
                need: n,
            });
        }
        Ok(())
    }

    pub fn require_full(&self) -> Result<()> {
        if self.non_backtracking_only {
            return Err(Error::CatalogNonBacktrackingOnly);
        }
        Ok(())
    }

    /// One JSON object per line: `{"n": …, "beta": …, "bonds": […]}`.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<()> {
        for n in 1..=self.max_length {
            for p in self.orbits(n) {
                let bonds: Vec<String> = p.bonds.iter().map(|d| d.to_string()).collect();
                writeln!(w, "{{\"n\":{n},\"beta\":{},\"bonds\":[{}]}}", p.beta, bonds.join(","))?;
            }
        }
        Ok(())
    }

    /// Groups orbits up to period `max_n` by their multiset of transition
    /// classes, so amplitudes can be summed per group.
    pub fn signatures(&self, g: &Graph, kind: LaplacianKind, max_n: usize) -> Result<SignatureTable> {
        self.require_depth(max_n)?;
        SignatureTable::build(self, g, kind, max_n)
    }
}

pub fn enumerate_orbits(space: &DirectedBondSpace, max_length: usize) -> Result<OrbitCatalog> {
    enumerate_orbits_with(space, max_length, OrbitOptions::default())
}

/// Depth-first search from each start bond `s` over walks that never use a
/// bond below `s`; a walk closing back onto `s` is kept if it is its own
/// minimal rotation and primitive. One search covers every length up to
/// `max_length`.
pub fn enumerate_orbits_with(space: &DirectedBondSpace, max_length: usize, opts: OrbitOptions) -> Result<OrbitCatalog> {
    if max_length < 1 {
        return Err(Error::InvalidArgument("orbit length cutoff must be at least 1".into()));
    }
    if space.len() > u16::MAX as usize {
        return Err(Error::InvalidArgument(format!("{} directed bonds exceed the catalog index range", space.len())));
    }
    let mut blocks = vec![LengthBlock::default(); max_length + 1];
    let mut total = 0usize;
    let mut walk: Vec<u16> = Vec::with_capacity(max_length);
    // per depth: next successor position to try
    let mut cursor: Vec<usize> = Vec::with_capacity(max_length);
    let nb = opts.non_backtracking_only;
    for s in 0..space.len() {
        walk.clear();
        cursor.clear();
        walk.push(s as u16);
        cursor.push(0);
        while let Some(&last) = walk.last() {
            let depth = walk.len();
            let pos = cursor[depth - 1];
            if pos == 0 {
                // first visit of this prefix: check closure
                let closes = space.follows(last as usize, s) && !(nb && s == (last as usize) ^ 1);
                if closes && is_min_rotation(&walk) && minimal_period(&walk) == depth {
                    let beta = backscatter_count(&walk);
                    let block = &mut blocks[depth];
                    block.bonds.extend_from_slice(&walk);
                    block.beta.push(beta.min(u8::MAX as usize) as u8);
                    total += 1;
                    if total > opts.cap {
                        return Err(Error::CatalogCap {
                            cap: opts.cap,
                            length: depth,
                        });
                    }
                }
            }
            let succ = space.successors(last as usize);
            let mut p = pos;
            let mut next = None;
            if depth < max_length {
                while p < succ.len() {
                    let e = succ[p];
                    p += 1;
                    if e >= s && !(nb && e == (last as usize) ^ 1) {
                        next = Some(e);
                        break;
                    }
                }
            }
            cursor[depth - 1] = p.max(1);
            match next {
                Some(e) => {
                    walk.push(e as u16);
                    cursor.push(0);
                }
                None => {
                    walk.pop();
                    cursor.pop();
                }
            }
        }
    }
    Ok(OrbitCatalog {
        max_length,
        non_backtracking_only: nb,
        blocks,
    })
}

pub fn orbit_amplitude(p: &PrimitiveOrbit, g: &Graph, lambda: Complex64, kind: LaplacianKind) -> Result<Complex64> {
    let u = build_u(g, lambda, kind)?;
    let n = p.bonds.len();
    Ok((0..n).map(|k| u.matrix[(p.bonds[(k + 1) % n], p.bonds[k])]).product())
}

/// `tr Uⁿ = Σ_{m|n} m Σ_{p∈P(m)} a_p^{n/m}`.
pub fn trace_power_via_orbits(catalog: &OrbitCatalog, u: &ComplexMatrix, n: usize) -> Result<Complex64> {
    catalog.require_full()?;
    catalog.require_depth(n)?;
    let mut total = Complex64::new(0.0, 0.0);
    for m in (1..=n).filter(|m| n.is_multiple_of(*m)) {
        let reps = (n / m) as u32;
        let s: Complex64 = catalog.orbits(m).map(|p| p.amplitude(u).powu(reps)).sum();
        total += s * m as f64;
    }
    Ok(total)
}

/// Orbits sharing the same transition-class counts, hence the same amplitude.
#[derive(Clone, Debug)]
pub struct SignatureGroup {
    pub period: usize,
    pub count: u64,
    /// `(class, exponent)` pairs.
    pub factors: Vec<(u32, u32)>,
}

impl SignatureGroup {
    pub fn amplitude(&self, class_values: &[Complex64]) -> Complex64 {
        self.factors
            .iter()
            .map(|&(c, e)| class_values[c as usize].powu(e))
            .product()
    }
}

/// Transition classes: steps `d → d'` whose `U_{d',d}` entries coincide for
/// every `λ` (same vertex, same back-scatter flag, same weight product).
#[derive(Clone, Debug)]
pub struct SignatureTable {
    pub kind: LaplacianKind,
    /// A representative `(from, to)` step per class.
    pub representatives: Vec<(usize, usize)>,
    pub groups: Vec<SignatureGroup>,
}

impl SignatureTable {
    fn build(catalog: &OrbitCatalog, g: &Graph, kind: LaplacianKind, max_n: usize) -> Result<Self> {
        let space = g.directed_bonds();
        let mut class_ids: HashMap<(usize, bool, u64), u32> = HashMap::new();
        let mut representatives = Vec::new();
        let nb = space.len();
        let mut step_class = vec![u32::MAX; nb * nb];
        for d in 0..nb {
            for &e in space.successors(d) {
                let back = e == d ^ 1;
                let wkey = match kind {
                    LaplacianKind::Standard => 0,
                    LaplacianKind::Generalized => (space.weight(d) * space.weight(e)).to_bits(),
                };
                let key = (space.terminus(d), back, wkey);
                let id = *class_ids.entry(key).or_insert_with(|| {
                    representatives.push((d, e));
                    (representatives.len() - 1) as u32
                });
                step_class[d * nb + e] = id;
            }
        }
        let mut groups: Vec<SignatureGroup> = Vec::new();
        let mut counts = vec![0u32; representatives.len()];
        let mut key: Vec<(u32, u32)> = Vec::with_capacity(representatives.len());
        for n in 1..=max_n {
            let mut index: HashMap<Vec<(u32, u32)>, usize> = HashMap::new();
            for p in catalog.orbits(n) {
                for k in 0..n {
                    let (d, e) = (p.bonds[k] as usize, p.bonds[(k + 1) % n] as usize);
                    counts[step_class[d * nb + e] as usize] += 1;
                }
                key.clear();
                for (i, c) in counts.iter_mut().enumerate() {
                    if *c > 0 {
                        key.push((i as u32, *c));
                        *c = 0;
                    }
                }
                match index.get(key.as_slice()) {
                    Some(&gi) => groups[gi].count += 1,
                    None => {
                        index.insert(key.clone(), groups.len());
                        groups.push(SignatureGroup {
                            period: n,
                            count: 1,
                            factors: key.clone(),
                        });
                    }
                }
            }
        }
        Ok(Self {
            kind,
            representatives,
            groups,
        })
    }

    /// The entry of `U` for each class.
    pub fn class_values(&self, u: &ComplexMatrix) -> Vec<Complex64> {
        self.representatives.iter().map(|&(d, e)| u[(e, d)]).collect()
    }
}
