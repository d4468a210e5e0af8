//! Elementary abelian regular subgroups of `Sym(V)`, the operations `∘` they
//! induce on `V`, their weak-key subspaces, and the groups meeting the
//! translation group `T` in a subgroup of index four.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::affine::{Affinity, AffinityRecord};
use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitMatrix, BitVector, Subspace};
use crate::perm::{generate_closure, Perm, PermGroup};

/// Smallest dimension handled by the group-level constructions.
pub const MIN_DIM: usize = 3;
/// Largest dimension for which a full `v ↦ τ_v` table is stored.
pub const MAX_GROUP_DIM: usize = 8;

pub(crate) fn check_group_dim(n: usize) -> Result<()> {
    if (MIN_DIM..=MAX_GROUP_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n, MIN_DIM, MAX_GROUP_DIM))
    }
}

/// An elementary abelian regular subgroup `τ_V = T^g` of `Sym(V)`.
///
/// `tau[v]` is the unique element sending `0` to `v`; the table is therefore
/// a canonical description of the group and equality is table equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RegularGroup {
    n: usize,
    tau: Vec<Perm>,
    weak: Subspace,
}

impl std::fmt::Debug for RegularGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RegularGroup(n={}, W=[{}])", self.n, self.weak)
    }
}

impl RegularGroup {
    /// Validates that `elements` form an elementary abelian regular group.
    pub fn from_elements(n: usize, elements: Vec<Perm>) -> Result<RegularGroup> {
        check_group_dim(n)?;
        let degree = 1usize << n;
        if elements.len() != degree {
            return Err(Error::NotRegular(format!("{} elements, expected {degree}", elements.len())));
        }
        let mut slots: Vec<Option<Perm>> = vec![None; degree];
        for h in elements {
            check_dim(n, h.dim())?;
            let label = h.apply(0);
            if slots[label].replace(h).is_some() {
                return Err(Error::NotRegular(format!("two elements send 0 to {label}")));
            }
        }
        let tau: Vec<Perm> = slots.into_iter().map(|s| s.expect("every label filled")).collect();
        if !tau[0].is_identity() {
            return Err(Error::NotRegular("the element fixing 0 is not the identity".into()));
        }
        for (v, h) in tau.iter().enumerate().skip(1) {
            if !h.is_involution() || !h.is_fixed_point_free() {
                return Err(Error::NotRegular(format!("τ_{v} is not a fixed-point-free involution")));
            }
        }
        for u in 1..degree {
            for v in u + 1..degree {
                let uv = &tau[u] * &tau[v];
                if uv != tau[uv.apply(0)] {
                    return Err(Error::NotRegular("not closed under composition".into()));
                }
                if !tau[u].commutes_with(&tau[v]) {
                    return Err(Error::NotRegular("not abelian".into()));
                }
            }
        }
        Ok(RegularGroup::from_table(n, tau))
    }

    pub fn from_generators(n: usize, generators: &[Perm]) -> Result<RegularGroup> {
        check_group_dim(n)?;
        let closure = generate_closure(n, generators, (1 << n) + 1)
            .map_err(|e| match e {
                Error::BudgetExceeded(_) => Error::NotRegular("generated group is too large".into()),
                other => other,
            })?;
        RegularGroup::from_elements(n, closure.elements()?.to_vec())
    }

    /// Builds from a table known to be valid.
    pub(crate) fn from_table(n: usize, tau: Vec<Perm>) -> RegularGroup {
        let support: Vec<BitVector> = (0..tau.len())
            .filter(|&v| tau[v].images().iter().enumerate().all(|(x, &y)| y as usize == x ^ v))
            .map(|v| BitVector::from_index(n, v))
            .collect();
        let weak = Subspace::span_unchecked(n, support);
        RegularGroup { n, tau, weak }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// `τ_v`.
    pub fn tau(&self, v: BitVector) -> &Perm {
        &self.tau[v.index()]
    }

    /// The elements indexed by label.
    pub fn elements(&self) -> &[Perm] {
        &self.tau
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.dim() == self.n && self.tau[p.apply(0)] == *p
    }

    /// `u ∘ v = u τ_v`.
    pub fn circ(&self, u: BitVector, v: BitVector) -> Result<BitVector> {
        check_dim(self.n, u.dim())?;
        check_dim(self.n, v.dim())?;
        Ok(self.circ_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn circ_unchecked(&self, u: BitVector, v: BitVector) -> BitVector {
        BitVector::from_index(self.n, self.tau[v.index()].apply(u.index()))
    }

    pub fn circ_op(&self) -> CircOp<'_> {
        CircOp { group: self }
    }

    /// The subspace `W` with `σ_W = T ∩ τ_V`, from the construction-time scan.
    pub fn intersection_with_t(&self) -> &Subspace {
        &self.weak
    }

    pub fn is_translation_group(&self) -> bool {
        self.weak.dim() == self.n
    }

    /// A basis of `(V, ∘)` chosen greedily: `e_1, …, e_n` first, then
    /// remaining vectors in increasing order.
    pub fn circ_basis(&self) -> Vec<BitVector> {
        let n = self.n;
        let mut in_span = vec![false; 1 << n];
        in_span[0] = true;
        let mut span = vec![BitVector::zero(n)];
        let mut basis = Vec::with_capacity(n);
        let candidates = (1..=n).map(|i| BitVector::unit(n, i)).chain(BitVector::all(n).skip(1));
        for c in candidates {
            if basis.len() == n {
                break;
            }
            if in_span[c.index()] {
                continue;
            }
            let extra: Vec<BitVector> = span.iter().map(|&s| self.circ_unchecked(s, c)).collect();
            for x in &extra {
                in_span[x.index()] = true;
            }
            span.extend(extra);
            basis.push(c);
        }
        basis
    }

    /// `c_1 b_1 ∘ … ∘ c_n b_n` for coefficients `c` against `basis`.
    pub fn circ_combination(&self, basis: &[BitVector], coeffs: BitVector) -> BitVector {
        let mut acc = BitVector::zero(self.n);
        for (k, b) in basis.iter().enumerate() {
            if coeffs.coord(k + 1) {
                acc = self.circ_unchecked(acc, *b);
            }
        }
        acc
    }

    pub fn generators(&self) -> Vec<Perm> {
        self.circ_basis().into_iter().map(|b| self.tau(b).clone()).collect()
    }

    /// `τ_V^g`, relabelled: `h^g` sends `0` to `(0g⁻¹)hg`.
    pub fn conjugate(&self, g: &Perm) -> Result<RegularGroup> {
        check_dim(self.n, g.dim())?;
        let mut tau = vec![Perm::identity(self.n); 1 << self.n];
        for h in &self.tau {
            let c = h.conj(g);
            let label = c.apply(0);
            tau[label] = c;
        }
        Ok(RegularGroup::from_table(self.n, tau))
    }

    pub fn is_normalized_by(&self, p: &Perm) -> bool {
        p.dim() == self.n && self.generators().iter().all(|h| self.contains(&h.conj(p)))
    }

    pub fn is_affine(&self) -> bool {
        self.tau.iter().all(|h| Affinity::from_perm(h).is_some())
    }

    pub fn affinities(&self) -> Option<Vec<Affinity>> {
        self.tau.iter().map(Affinity::from_perm).collect()
    }

    /// The vector `b` with `x + xθ + 0θ ∈ {0, b}` for every element `θ` and
    /// point `x`, when a single such nonzero `b` exists.
    pub fn recovered_b(&self) -> Option<BitVector> {
        let mut found: Option<usize> = None;
        for h in &self.tau {
            let shift = h.apply(0);
            for x in 0..self.tau.len() {
                let d = x ^ h.apply(x) ^ shift;
                if d == 0 {
                    continue;
                }
                match found {
                    None => found = Some(d),
                    Some(b) if b == d => {}
                    Some(_) => return None,
                }
            }
        }
        found.map(|b| BitVector::from_index(self.n, b))
    }

    pub fn to_perm_group(&self) -> PermGroup {
        PermGroup::from_elements(self.n, self.tau.clone()).expect("dimensions agree")
    }

    /// Elements sorted by image table, for set comparisons against other enumerations.
    pub fn sorted_elements(&self) -> Vec<Perm> {
        let mut e = self.tau.clone();
        e.sort_unstable();
        e
    }

    pub fn to_record(&self) -> RegularGroupRecord {
        let tau = match self.affinities() {
            Some(affs) => affs.iter().map(|f| TauRecord::Affine(AffinityRecord::from(f))).collect(),
            None => self.tau.iter().map(|p| TauRecord::Table(p.images().to_vec())).collect(),
        };
        RegularGroupRecord {
            n: self.n,
            w: self.weak.to_string(),
            b: self.recovered_b().map(|b| b.to_string()),
            tau,
        }
    }

    pub fn from_record(record: &RegularGroupRecord) -> Result<RegularGroup> {
        let n = record.n;
        check_group_dim(n)?;
        let elements = record
            .tau
            .iter()
            .map(|t| match t {
                TauRecord::Table(images) => Perm::from_images(images.clone()),
                TauRecord::Affine(r) => Affinity::try_from(r).map(|f| f.to_perm()),
            })
            .collect::<Result<Vec<Perm>>>()?;
        RegularGroup::from_elements(n, elements)
    }
}

/// JSON form: `{"n", "W", "b", "tau"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularGroupRecord {
    pub n: usize,
    #[serde(rename = "W")]
    pub w: String,
    pub b: Option<String>,
    pub tau: Vec<TauRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TauRecord {
    Table(Vec<u16>),
    Affine(AffinityRecord),
}

/// The operation `u ∘ v = u τ_v` induced by a regular group.
#[derive(Clone, Copy, Debug)]
pub struct CircOp<'a> {
    group: &'a RegularGroup,
}

impl CircOp<'_> {
    pub fn eval(&self, u: BitVector, v: BitVector) -> BitVector {
        self.group.circ_unchecked(u, v)
    }

    pub fn group(&self) -> &RegularGroup {
        self.group
    }
}

/// `W_∘ = {k : k ∘ x = k + x for all x}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeakKeySpace {
    pub subspace: Subspace,
}

/// `σ_v`.
pub fn sigma(v: BitVector) -> Affinity {
    Affinity::translation(v)
}

pub fn translation_group(n: usize) -> Result<RegularGroup> {
    check_group_dim(n)?;
    let tau = BitVector::all(n).map(|v| sigma(v).to_perm()).collect();
    Ok(RegularGroup::from_table(n, tau))
}

/// The conjugator `g` with `(0h)g = 0(hζ)`, so that `H^g = K` and `h^g = hζ`.
///
/// `ζ` sends the element of `H` with coordinates `c` against
/// `H.circ_basis()` to the element of `K` with coordinates `c·iso` against
/// `K.circ_basis()`.
pub fn dixon_conjugator(h: &RegularGroup, k: &RegularGroup, iso: &BitMatrix) -> Result<Perm> {
    check_dim(h.dim(), k.dim())?;
    let n = h.dim();
    if iso.nrows() != n || !iso.is_invertible() {
        return Err(Error::NotAnIsomorphism);
    }
    let hb = h.circ_basis();
    let kb = k.circ_basis();
    let mut images = vec![u16::MAX; 1 << n];
    for c in BitVector::all(n) {
        let source = h.circ_combination(&hb, c);
        let target = k.circ_combination(&kb, iso.mul_vec(c));
        images[source.index()] = target.index() as u16;
    }
    Perm::from_images(images).map_err(|_| Error::NotAnIsomorphism)
}

pub fn circ(u: BitVector, v: BitVector, g: &RegularGroup) -> Result<BitVector> {
    g.circ(u, v)
}

/// Exhaustive scan for the weak keys of `g`.
pub fn weak_keys(g: &RegularGroup) -> WeakKeySpace {
    let n = g.dim();
    let keys: Vec<BitVector> = BitVector::all(n)
        .filter(|&k| BitVector::all(n).all(|x| g.circ_unchecked(k, x) == k + x))
        .collect();
    WeakKeySpace { subspace: Subspace::span_unchecked(n, keys) }
}

/// `W` with `σ_W = T ∩ G`, by comparing `τ_v` with `σ_v`.
pub fn intersection_with_t(g: &RegularGroup) -> Subspace {
    g.intersection_with_t().clone()
}

fn check_b(n: usize, b: BitVector) -> Result<()> {
    check_group_dim(n)?;
    check_dim(n, b.dim())?;
    if b.is_zero() || b.coord(1) || b.coord(2) {
        return Err(Error::InvalidB(format!("{b} is not a nonzero vector of ⟨e_3, …, e_n⟩")));
    }
    Ok(())
}

/// `π_b : x ↦ x + x^{(2)} b + e_1`.
pub fn pi_b(n: usize, b: BitVector) -> Result<Affinity> {
    check_b(n, b)?;
    let mut l = BitMatrix::identity(n);
    for j in 3..=n {
        l.set(2, j, b.coord(j));
    }
    Affinity::new(l, BitVector::unit(n, 1))
}

/// `ε_b : x ↦ x + x^{(1)} b + e_2`.
pub fn epsilon_b(n: usize, b: BitVector) -> Result<Affinity> {
    check_b(n, b)?;
    let mut l = BitMatrix::identity(n);
    for j in 3..=n {
        l.set(1, j, b.coord(j));
    }
    Affinity::new(l, BitVector::unit(n, 2))
}

/// `T_b = ⟨π_b, ε_b, σ_{e_i} | 3 ≤ i ≤ n⟩`.
pub fn build_tb(n: usize, b: BitVector) -> Result<RegularGroup> {
    check_b(n, b)?;
    let mut gens = vec![pi_b(n, b)?.to_perm(), epsilon_b(n, b)?.to_perm()];
    gens.extend((3..=n).map(|i| sigma(BitVector::unit(n, i)).to_perm()));
    RegularGroup::from_generators(n, &gens)
}

/// Nonzero vectors of `⟨e_3, …, e_n⟩`.
pub fn tb_parameters(n: usize) -> Vec<BitVector> {
    Subspace::coordinate(n, 3, n).elements().into_iter().skip(1).collect()
}

/// A basis change `L` with `⟨e_3..e_n⟩L = W` (rows: a canonical complement, then the RREF basis of `W`).
pub(crate) fn basis_change_onto(w: &Subspace) -> BitMatrix {
    let mut rows = w.complement_basis();
    rows.extend_from_slice(w.basis());
    BitMatrix::from_rows(&rows).expect("complement plus basis")
}

/// Every elementary abelian regular subgroup whose intersection with `T` has
/// index four, built as `T_b^L` over all `(n−2)`-dimensional `W`. Sorted by
/// `(W, b)`.
pub fn enumerate_second_maximal(n: usize) -> Result<Vec<RegularGroup>> {
    if !(3..=5).contains(&n) {
        return Err(Error::DimensionOutOfRange(n, 3, 5));
    }
    let base: Vec<RegularGroup> = tb_parameters(n).into_iter().map(|b| build_tb(n, b)).collect::<Result<_>>()?;
    let subspaces = Subspace::all_of_dim(n, n - 2);
    let per_w: Vec<Vec<((Subspace, BitVector), RegularGroup)>> = subspaces
        .par_iter()
        .map(|w| {
            let l = Affinity::linear(basis_change_onto(w)).expect("invertible").to_perm();
            base.iter()
                .map(|t| {
                    let g = t.conjugate(&l)?;
                    if g.intersection_with_t() != w {
                        return Err(Error::Construction(format!("conjugate misses W = [{w}]")));
                    }
                    let b = g.recovered_b().ok_or_else(|| Error::Construction("no b recovered".into()))?;
                    Ok(((w.clone(), b), g))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut by_key = BTreeMap::new();
    for (key, g) in per_w.into_iter().flatten() {
        if by_key.insert(key, g).is_some() {
            return Err(Error::Construction("duplicate (W, b) key".into()));
        }
    }
    Ok(by_key.into_values().collect())
}

/// `t_n = (2^{n−2}−1)(2^{n−1}−1)(2ⁿ−1)/3`.
pub fn count_t_n(n: usize) -> num_bigint::BigUint {
    use num_bigint::BigUint;
    use num_traits::One;
    let m = |k: usize| (BigUint::one() << k) - 1u32;
    m(n - 2) * m(n - 1) * m(n) / 3u32
}
