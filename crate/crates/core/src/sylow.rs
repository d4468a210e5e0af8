//! Sylow 2-subgroups of `AGL(V)` through their invariant maximal flags, the
//! distinguished regular subgroup `T_Σ`, the block-matrix description of
//! regular subgroups of `Σ` normalized by `T`, and the counting formulas.
//!
//! The canonical Sylow subgroup `S` consists of the affinities whose linear
//! part is upper unitriangular; it stabilizes the flag `V_i = ⟨e_{n−i+1}..e_n⟩`.
//! A general flag `F = F_can·L` gives `Σ_F = S^L = L⁻¹ S L`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::affine::{Affinity, AugmentedMatrix};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Flag, MAX_DIM};
use crate::perm::Perm;
use crate::regular::{
    build_tb, check_group_dim, dixon_conjugator, enumerate_second_maximal, translation_group, RegularGroup,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SylowAGL {
    n: usize,
    flag: Flag,
    basis_change: BitMatrix,
}

fn check_sylow_dim(n: usize) -> Result<()> {
    if (3..=MAX_DIM).contains(&n) {
        Ok(())
    } else {
        Err(Error::DimensionOutOfRange(n, 3, MAX_DIM))
    }
}

impl SylowAGL {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    /// `L` with `F = F_can·L`.
    pub fn basis_change(&self) -> &BitMatrix {
        &self.basis_change
    }

    pub fn basis_change_perm(&self) -> Perm {
        Affinity::linear(self.basis_change.clone()).expect("invertible").to_perm()
    }

    /// `|Σ| = 2^{n + n(n−1)/2}`.
    pub fn order(&self) -> BigUint {
        BigUint::one() << (self.n + self.n * (self.n - 1) / 2)
    }

    /// Whether the linear part of `f` stabilizes every member of the flag.
    pub fn contains_affinity(&self, f: &Affinity) -> bool {
        f.dim() == self.n
            && self.flag.members().iter().all(|m| {
                m.basis().iter().all(|x| m.contains_unchecked(f.linear_part().mul_vec(*x)))
            })
    }

    pub fn contains(&self, p: &Perm) -> bool {
        p.dim() == self.n && Affinity::from_perm(p).is_some_and(|f| self.contains_affinity(&f))
    }

    /// The translations `σ_{e_i}` and the conjugates `L⁻¹(1_n + E_{i,i+1})L`.
    pub fn generator_affinities(&self) -> Vec<Affinity> {
        let n = self.n;
        let l = Affinity::linear(self.basis_change.clone()).expect("invertible");
        let mut gens: Vec<Affinity> = (1..=n).map(|i| Affinity::translation(BitVector::unit(n, i))).collect();
        for i in 1..n {
            let u = Affinity::linear(BitMatrix::elementary(n, i, i + 1)).expect("unitriangular");
            gens.push(u.conjugate(&l).expect("same dimension"));
        }
        gens
    }

    pub fn generators(&self) -> Vec<Perm> {
        self.generator_affinities().iter().map(Affinity::to_perm).collect()
    }

    /// Every element, as `L⁻¹ U σ_v L` over unitriangular `U` and all `v`.
    pub fn elements(&self) -> Result<Vec<Perm>> {
        let n = self.n;
        if n > 5 {
            return Err(Error::ScaleGuard(format!("listing a Sylow subgroup of AGL(F_2^{n})")));
        }
        let l = Affinity::linear(self.basis_change.clone())?;
        let slots: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let mut out = Vec::new();
        for mask in 0u64..1 << slots.len() {
            let mut u = BitMatrix::identity(n);
            for (k, &(i, j)) in slots.iter().enumerate() {
                u.set(i, j, mask >> k & 1 == 1);
            }
            for v in BitVector::all(n) {
                out.push(Affinity::new(u.clone(), v)?.conjugate(&l)?.to_perm());
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    /// `Σ^p = Σ`, checked on generators.
    pub fn is_normalized_by(&self, p: &Perm) -> bool {
        p.dim() == self.n && self.generators().iter().all(|s| self.contains(&s.conj(p)))
    }

    /// `G ≤ Σ` and `G ⊴ Σ`.
    pub fn has_normal_subgroup(&self, g: &RegularGroup) -> bool {
        g.dim() == self.n
            && g.generators().iter().all(|h| self.contains(h))
            && self.generators().iter().all(|s| g.is_normalized_by(s))
    }

    /// `Σ^L` for an invertible `L`: the Sylow subgroup of the flag `F·L`.
    pub fn conjugate_by(&self, l: &BitMatrix) -> Result<SylowAGL> {
        sylow_from_flag(&self.flag.map(l)?)
    }
}

pub fn canonical_sylow(n: usize) -> Result<SylowAGL> {
    check_sylow_dim(n)?;
    Ok(SylowAGL { n, flag: Flag::canonical(n), basis_change: BitMatrix::identity(n) })
}

pub fn sylow_from_flag(flag: &Flag) -> Result<SylowAGL> {
    let n = flag.dim();
    check_sylow_dim(n)?;
    let flag = Flag::from_chain(flag.members().to_vec())?;
    let basis_change = flag.basis_change();
    Ok(SylowAGL { n, flag, basis_change })
}

/// One Sylow 2-subgroup per maximal flag.
pub fn all_sylows(n: usize) -> Result<Vec<SylowAGL>> {
    check_sylow_dim(n)?;
    if n > 6 {
        return Err(Error::ScaleGuard(format!("listing every maximal flag of F_2^{n}")));
    }
    Flag::all(n).iter().map(sylow_from_flag).collect()
}

/// The unique second-maximal-intersection regular subgroup normal in `Σ`:
/// `T_{e_n}` for the canonical flag, its `L`-conjugate otherwise.
pub fn t_sigma(sigma: &SylowAGL) -> Result<RegularGroup> {
    let n = sigma.n;
    check_group_dim(n)?;
    build_tb(n, BitVector::unit(n, n))?.conjugate(&sigma.basis_change_perm())
}

/// `[AGL(V) : Σ] = ∏_{j=0}^{n−1} (2^{n−j} − 1)`, the number of Sylow 2-subgroups.
pub fn count_sylows(n: usize) -> BigUint {
    (0..n).map(|j| (BigUint::one() << (n - j)) - 1u32).product()
}

/// `s_n = 3 ∏_{j=3}^{n−1} (2^{n−j} − 1)`.
pub fn count_s_n(n: usize) -> BigUint {
    (3..n).map(|j| (BigUint::one() << (n - j)) - 1u32).product::<BigUint>() * 3u32
}

/// `|AGL(F₂ⁿ)| = 2ⁿ ∏_{j=0}^{n−1} (2ⁿ − 2^j)`.
pub fn agl_order(n: usize) -> BigUint {
    let full = BigUint::one() << n;
    (0..n).map(|j| &full - (BigUint::one() << j)).product::<BigUint>() * &full
}

/// `2^{d·C(n−d, 2)}`.
pub fn count_flag_normalized(n: usize, d: usize) -> BigUint {
    let k = n - d;
    BigUint::one() << (d * k * k.saturating_sub(1) / 2)
}

/// The linear map `u ↦ B_u` from `U = ⟨e_1..e_{n−d}⟩` to `(n−d) × d` blocks,
/// given by `B_{e_1}, …, B_{e_{n−d}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BMapFamily {
    n: usize,
    d: usize,
    matrices: Vec<BitMatrix>,
}

impl BMapFamily {
    /// Requires row `i` of `B_{e_j}` to equal row `j` of `B_{e_i}`, and row `i`
    /// of `B_{e_i}` to vanish.
    pub fn new(n: usize, d: usize, matrices: Vec<BitMatrix>) -> Result<BMapFamily> {
        let k = n - d;
        if matrices.len() != k || matrices.iter().any(|m| m.nrows() != k || m.ncols() != d) {
            return Err(Error::Construction(format!("expected {k} blocks of shape {k}×{d}")));
        }
        for i in 1..=k {
            if !matrices[i - 1].row(i).is_zero() {
                return Err(Error::Construction(format!("row {i} of B_e{i} is nonzero")));
            }
            for j in i + 1..=k {
                if matrices[j - 1].row(i) != matrices[i - 1].row(j) {
                    return Err(Error::Construction(format!("B_e{i} and B_e{j} are not symmetric")));
                }
            }
        }
        Ok(BMapFamily { n, d, matrices })
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    /// `B_u = Σ u^{(i)} B_{e_i}`.
    pub fn b_of(&self, u: BitVector) -> BitMatrix {
        let k = self.n - self.d;
        (1..=k)
            .filter(|&i| u.coord(i))
            .fold(BitMatrix::zero(k, self.d), |acc, i| acc.add(&self.matrices[i - 1]))
    }

    /// The group `{X̄_{(u,w)}}` with `A_u = 1_{n−d}`, `C = 1_d`.
    pub fn to_group(&self) -> Result<RegularGroup> {
        let (n, d) = (self.n, self.d);
        let k = n - d;
        let a = BitMatrix::identity(k);
        let c = BitMatrix::identity(d);
        let mut elements = Vec::with_capacity(1 << n);
        for x in BitVector::all(n) {
            let (u, w) = (x.slice(1, k), x.slice(k + 1, n));
            let m = AugmentedMatrix::from_blocks(u, w, &a, &self.b_of(u), &c)?;
            elements.push(m.to_affinity().to_perm());
        }
        RegularGroup::from_elements(n, elements)
    }
}

fn check_depth(n: usize, d: usize) -> Result<()> {
    if d == 0 || d > n {
        return Err(Error::InvalidSplit { n, d });
    }
    if d == n - 1 {
        return Err(Error::MaximalIntersection(d));
    }
    Ok(())
}

/// Every `B`-family for depth `d`, in lexicographic order of the free rows
/// (row `j` of `B_{e_i}` for `i < j`).
pub fn enumerate_bmaps(n: usize, d: usize) -> Result<Vec<BMapFamily>> {
    check_depth(n, d)?;
    let k = n - d;
    let pairs: Vec<(usize, usize)> = (1..=k).flat_map(|i| (i + 1..=k).map(move |j| (i, j))).collect();
    let free_bits = pairs.len() * d;
    if free_bits > 20 {
        return Err(Error::ScaleGuard(format!("2^{free_bits} block families")));
    }
    let mut out = Vec::with_capacity(1 << free_bits);
    for mask in 0u64..1 << free_bits {
        let mut mats = vec![BitMatrix::zero(k, d); k];
        for (p, &(i, j)) in pairs.iter().enumerate() {
            let shared = ((mask >> (p * d)) & ((1 << d) - 1)) as usize;
            for col in 1..=d {
                let bit = shared >> (d - col) & 1 == 1;
                mats[i - 1].set(j, col, bit);
                mats[j - 1].set(i, col, bit);
            }
        }
        out.push(BMapFamily::new(n, d, mats)?);
    }
    Ok(out)
}

/// The regular subgroups `T^g ≤ S` (canonical `S`) with `σ_{V_d} ≤ T ∩ T^g`
/// and `T ≤ N(T^g)`.
pub fn enumerate_flag_normalized(n: usize, d: usize) -> Result<Vec<RegularGroup>> {
    check_group_dim(n)?;
    enumerate_bmaps(n, d)?.iter().map(BMapFamily::to_group).collect()
}

/// An element of `N_{Sym(V)}(Σ) ∖ AGL(V)` exchanging `T` and `T_Σ`.
///
/// For the canonical flag this is the Dixon conjugator from `T` to `T_{e_n}`
/// matching `σ_{e_i}` with `τ_{e_i}`, namely `x ↦ x + x^{(1)}x^{(2)} e_n`; for
/// other flags it is conjugated by `L`.
pub fn outer_normalizer_element(sigma: &SylowAGL) -> Result<Perm> {
    let n = sigma.n;
    let t = translation_group(n)?;
    let ts_canonical = build_tb(n, BitVector::unit(n, n))?;
    let g0 = dixon_conjugator(&t, &ts_canonical, &BitMatrix::identity(n))?;
    let g = g0.conj(&sigma.basis_change_perm());
    let ts = t_sigma(sigma)?;
    let swaps = t.conjugate(&g)? == ts && ts.conjugate(&g)? == t;
    if !swaps || !sigma.is_normalized_by(&g) || !sigma.contains(&(&g * &g)) || Affinity::from_perm(&g).is_some() {
        return Err(Error::Construction("outer normalizer element failed verification".into()));
    }
    Ok(g)
}

/// All elementary abelian regular subgroups normal in `Σ`, drawn from the
/// flag-normalized families of every depth and the second-maximal groups.
pub fn normal_regular_subgroups(sigma: &SylowAGL) -> Result<Vec<RegularGroup>> {
    let n = sigma.n;
    if !(3..=4).contains(&n) {
        return Err(Error::ScaleGuard(format!("normal regular subgroup scan at n = {n}")));
    }
    let l = sigma.basis_change_perm();
    let mut candidates = Vec::new();
    for d in (1..=n).filter(|&d| d != n - 1) {
        for g in enumerate_flag_normalized(n, d)? {
            candidates.push(g.conjugate(&l)?);
        }
    }
    candidates.extend(enumerate_second_maximal(n)?);
    let mut seen = HashSet::new();
    let mut out: Vec<RegularGroup> =
        candidates.into_iter().filter(|g| sigma.has_normal_subgroup(g) && seen.insert(g.clone())).collect();
    out.sort_by(|a, b| {
        b.intersection_with_t()
            .dim()
            .cmp(&a.intersection_with_t().dim())
            .then_with(|| a.sorted_elements().cmp(&b.sorted_elements()))
    });
    Ok(out)
}

/// Generators of `AGL(V)`: translations and all transvections `1_n + E_{i,j}`.
pub fn agl_generators(n: usize) -> Vec<Perm> {
    let mut gens: Vec<Perm> = (1..=n).map(|i| Affinity::translation(BitVector::unit(n, i)).to_perm()).collect();
    for i in 1..=n {
        for j in (1..=n).filter(|&j| j != i) {
            gens.push(Affinity::linear(BitMatrix::elementary(n, i, j)).expect("invertible").to_perm());
        }
    }
    gens
}

/// The orbit of `g` under conjugation by `AGL(V)`.
pub fn agl_orbit(g: &RegularGroup) -> Result<Vec<RegularGroup>> {
    let gens = agl_generators(g.dim());
    let mut seen: HashSet<RegularGroup> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.clone());
    queue.push_back(g.clone());
    while let Some(x) = queue.pop_front() {
        for s in &gens {
            let y = x.conjugate(s)?;
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by_cached_key(RegularGroup::sorted_elements);
    Ok(out)
}

/// Flags whose Sylow subgroup has `g` as a normal subgroup.
pub fn sylows_with_normal(g: &RegularGroup) -> Result<Vec<Flag>> {
    let flags: BTreeSet<Flag> = all_sylows(g.dim())?
        .into_iter()
        .filter(|s| s.has_normal_subgroup(g))
        .map(|s| s.flag)
        .collect();
    Ok(flags.into_iter().collect())
}

/// Whether some Sylow 2-subgroup of `AGL(V)` lies in `AGL(V) ∩ AGL(V)^g`,
/// i.e. whether the full 2-part of `|AGL(V)|` divides `|AGL(V) ∩ AGL(V)^g|`.
pub fn agl_intersection_has_full_sylow(g: &Perm) -> Result<bool> {
    let n = g.dim();
    let ginv = g.inverse();
    for s in all_sylows(n)? {
        // x ∈ AGL^g  ⇔  g x g⁻¹ ∈ AGL
        if s.generators().iter().all(|x| Affinity::from_perm(&x.conj(&ginv)).is_some()) {
            return Ok(true);
        }
    }
    Ok(false)
}
