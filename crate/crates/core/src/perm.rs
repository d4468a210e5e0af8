//! Permutations of the points of `V = F₂ⁿ` and small permutation groups.
//!
//! Points are identified with vectors through their integer value. Products
//! follow the right action: `x(ab) = (xa)b`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitVector, MAX_DIM};

/// Default element budget for closures.
pub const DEFAULT_BUDGET: usize = 1 << 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u16>", into = "Vec<u16>")]
pub struct Perm {
    images: Vec<u16>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        assert!(n <= MAX_DIM);
        Perm { images: (0..1usize << n).map(|i| i as u16).collect() }
    }

    pub fn from_images(images: Vec<u16>) -> Result<Perm> {
        let len = images.len();
        if !len.is_power_of_two() || len > 1 << MAX_DIM {
            return Err(Error::NotAPermutation(format!("{len} points is not a power of two")));
        }
        let mut seen = vec![false; len];
        for &x in &images {
            let x = x as usize;
            if x >= len || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("image {x} repeated or out of range")));
            }
        }
        Ok(Perm { images })
    }

    /// Builds `x ↦ f(x)`; `f` must be a bijection.
    pub fn from_fn(n: usize, f: impl Fn(BitVector) -> BitVector) -> Result<Perm> {
        Perm::from_images(BitVector::all(n).map(|x| f(x).index() as u16).collect())
    }

    /// Builds a permutation from disjoint cycles of point indices.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Perm> {
        let mut images: Vec<u16> = Perm::identity(n).images;
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                let y = c[(k + 1) % c.len()];
                if x >= images.len() || y >= images.len() {
                    return Err(Error::NotAPermutation(format!("point out of range in cycle {c:?}")));
                }
                images[x] = y as u16;
            }
        }
        Perm::from_images(images)
    }

    pub fn dim(&self) -> usize {
        self.images.len().trailing_zeros() as usize
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    #[inline]
    pub fn image(&self, x: BitVector) -> BitVector {
        BitVector::from_index(self.dim(), self.apply(x.index()))
    }

    /// `self · other`, i.e. first `self`, then `other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.then(other))
    }

    #[inline]
    fn then(&self, other: &Perm) -> Perm {
        Perm { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u16;
        }
        Perm { images: inv }
    }

    /// `g⁻¹ · self · g`.
    pub fn conjugate(&self, g: &Perm) -> Result<Perm> {
        check_dim(self.dim(), g.dim())?;
        Ok(self.conj(g))
    }

    /// `g⁻¹ self g` without the dimension check: maps `x g ↦ (x self) g`.
    #[inline]
    pub(crate) fn conj(&self, g: &Perm) -> Perm {
        let mut out = vec![0u16; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            out[g.images[x] as usize] = g.images[y as usize];
        }
        Perm { images: out }
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.images.len() == other.images.len()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(x, &y)| other.images[y as usize] == self.images[other.images[x] as usize])
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y as usize)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity() && self.images.iter().enumerate().all(|(x, &y)| self.images[y as usize] as usize == x)
    }

    pub fn fixed_points(&self) -> usize {
        self.images.iter().enumerate().filter(|(x, &y)| *x == y as usize).count()
    }

    pub fn is_fixed_point_free(&self) -> bool {
        self.fixed_points() == 0
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles().iter().fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }
}

impl TryFrom<Vec<u16>> for Perm {
    type Error = Error;

    fn try_from(images: Vec<u16>) -> Result<Perm> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<u16> {
    fn from(p: Perm) -> Vec<u16> {
        p.images
    }
}

impl Mul for &Perm {
    type Output = Perm;

    /// Right-action product; panics on a dimension mismatch.
    fn mul(self, rhs: &Perm) -> Perm {
        assert_eq!(self.degree(), rhs.degree(), "permutations of different degree");
        self.then(rhs)
    }
}

/// Cycle notation, e.g. `(0 1)(2 3)`; the identity prints as `()`.
impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

pub fn compose(a: &Perm, b: &Perm) -> Result<Perm> {
    a.compose(b)
}

pub fn conjugate(h: &Perm, g: &Perm) -> Result<Perm> {
    h.conjugate(g)
}

/// A permutation group on `2ⁿ` points, optionally with its full element list
/// (sorted lexicographically by image table).
#[derive(Clone, Debug)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Perm>,
    elements: Option<Vec<Perm>>,
}

impl PermGroup {
    pub fn from_generators(n: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        for g in &generators {
            check_dim(n, g.dim())?;
        }
        Ok(PermGroup { n, generators, elements: None })
    }

    /// Wraps a list already known to be a group. The list is sorted and deduplicated.
    pub fn from_elements(n: usize, mut elements: Vec<Perm>) -> Result<PermGroup> {
        for g in &elements {
            check_dim(n, g.dim())?;
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(PermGroup { n, generators: elements.clone(), elements: Some(elements) })
    }

    /// `Sym(V)` by exhaustive listing; only `n = 3` (40320 elements) is allowed.
    pub fn symmetric(n: usize) -> Result<PermGroup> {
        if n != 3 {
            return Err(Error::ScaleGuard(format!("Sym(F_2^{n}) is only enumerated for n = 3")));
        }
        let degree = 1usize << n;
        let mut elements = Vec::with_capacity(40320);
        let mut current: Vec<u16> = (0..degree as u16).collect();
        // Lexicographic successor enumeration.
        loop {
            elements.push(Perm { images: current.clone() });
            let Some(i) = (0..degree - 1).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..degree).rev().find(|&j| current[j] > current[i]).expect("successor");
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        let generators = vec![
            Perm::from_cycles(n, &[&[0, 1]])?,
            Perm::from_cycles(n, &[&(0..degree).collect::<Vec<_>>()])?,
        ];
        Ok(PermGroup { n, generators, elements: Some(elements) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> Result<&[Perm]> {
        self.elements.as_deref().ok_or(Error::NotEnumerated)
    }

    pub fn is_enumerated(&self) -> bool {
        self.elements.is_some()
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool> {
        Ok(self.elements()?.binary_search(p).is_ok())
    }

    /// Enumerates the group if needed.
    pub fn enumerate(self, budget: usize) -> Result<PermGroup> {
        if self.elements.is_some() {
            return Ok(self);
        }
        generate_closure(self.n, &self.generators, budget)
    }

    /// Whether `self ≤ other` elementwise.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool> {
        for g in self.elements()? {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        match (&self.elements, &other.elements) {
            (Some(a), Some(b)) => self.n == other.n && a == b,
            _ => false,
        }
    }
}

/// Breadth-first closure of `gens`; fails once more than `budget` elements appear.
pub fn generate_closure(n: usize, gens: &[Perm], budget: usize) -> Result<PermGroup> {
    for g in gens {
        check_dim(n, g.dim())?;
    }
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if !seen.contains(&y) {
                if seen.len() >= budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut elements: Vec<Perm> = seen.into_iter().collect();
    elements.sort_unstable();
    Ok(PermGroup { n, generators: gens.to_vec(), elements: Some(elements) })
}

/// Order `2ⁿ`, transitive, abelian, and every nonidentity element a
/// fixed-point-free involution.
pub fn is_regular_elementary_abelian(g: &PermGroup) -> Result<bool> {
    let elements = g.elements()?;
    let degree = 1usize << g.dim();
    if elements.len() != degree {
        return Ok(false);
    }
    let mut orbit = vec![false; degree];
    for h in elements {
        orbit[h.apply(0)] = true;
        if !h.is_identity() && !(h.is_involution() && h.is_fixed_point_free()) {
            return Ok(false);
        }
    }
    if !orbit.iter().all(|&b| b) {
        return Ok(false);
    }
    let gens = g.generators();
    Ok(gens.iter().all(|a| gens.iter().all(|b| a.commutes_with(b)))
        && elements.iter().all(|a| gens.iter().all(|b| a.commutes_with(b))))
}

/// `{g ∈ G : g commutes with every generator of H}`.
pub fn centralizer_in(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    check_dim(g.dim(), h.dim())?;
    let kept = g
        .elements()?
        .iter()
        .filter(|x| h.generators().iter().all(|y| x.commutes_with(y)))
        .cloned()
        .collect();
    PermGroup::from_elements(g.dim(), kept)
}

/// `{g ∈ G : H^g = H}`.
pub fn normalizer_in(g: &PermGroup, h: &PermGroup) -> Result<PermGroup> {
    check_dim(g.dim(), h.dim())?;
    h.elements()?;
    let mut kept = Vec::new();
    for x in g.elements()? {
        let mut normalizes = true;
        for y in h.generators() {
            if !h.contains(&y.conj(x))? {
                normalizes = false;
                break;
            }
        }
        if normalizes {
            kept.push(x.clone());
        }
    }
    PermGroup::from_elements(g.dim(), kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn translation(n: usize, v: usize) -> Perm {
        Perm::from_images((0..1usize << n).map(|x| (x ^ v) as u16).collect()).unwrap()
    }

    fn translation_group(n: usize) -> PermGroup {
        let gens: Vec<_> = (0..n).map(|k| translation(n, 1 << k)).collect();
        generate_closure(n, &gens, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn compose_examples() {
        let id = Perm::identity(3);
        let g = Perm::from_cycles(3, &[&[0, 5, 2]]).unwrap();
        assert_eq!(compose(&id, &g).unwrap(), g);
        let s = translation(3, 0b101);
        assert!(compose(&s, &s).unwrap().is_identity());
        assert_eq!(compose(&translation(3, 0b100), &translation(3, 0b010)).unwrap(), translation(3, 0b110));
        assert!(compose(&id, &Perm::identity(4)).is_err());
    }

    #[test]
    fn right_action_order() {
        let a = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!((&a * &b).apply(0), 2);
        assert_eq!((&b * &a).apply(0), 1);
    }

    #[test]
    fn conjugate_examples() {
        let h = translation(3, 0b011);
        assert_eq!(conjugate(&h, &Perm::identity(3)).unwrap(), h);
        assert_eq!(conjugate(&h, &translation(3, 0b110)).unwrap(), h);
        let g = Perm::from_cycles(3, &[&[0, 3, 6, 1], &[2, 7]]).unwrap();
        let c = conjugate(&h, &g).unwrap();
        assert_eq!(c, &(&g.inverse() * &h) * &g);
        for x in 0..8 {
            assert_eq!(c.apply(g.apply(x)), g.apply(h.apply(x)));
        }
    }

    #[test]
    fn closure_examples() {
        let t = translation_group(3);
        assert_eq!(t.order().unwrap(), 8);
        assert!(is_regular_elementary_abelian(&t).unwrap());
        let again = generate_closure(3, t.elements().unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(again, t);
        assert_eq!(centralizer_in(&t, &t).unwrap(), t);
        let gens = [Perm::from_cycles(3, &[&[0, 1]]).unwrap(), Perm::from_cycles(3, &[&[0, 1, 2, 3, 4, 5, 6, 7]]).unwrap()];
        assert_eq!(generate_closure(3, &gens, 1000), Err(Error::BudgetExceeded(1000)));
    }

    #[test]
    fn not_enumerated_errors() {
        let g = PermGroup::from_generators(3, vec![translation(3, 1)]).unwrap();
        assert_eq!(is_regular_elementary_abelian(&g), Err(Error::NotEnumerated));
        assert!(centralizer_in(&g, &g).is_err());
    }

    #[test]
    fn symmetric_group_three() {
        let sym = PermGroup::symmetric(3).unwrap();
        assert_eq!(sym.order().unwrap(), 40320);
        assert!(sym.elements().unwrap().windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(PermGroup::symmetric(4), Err(Error::ScaleGuard(_))));
        let t = translation_group(3);
        // N_Sym(T) = AGL(F_2^3)
        assert_eq!(normalizer_in(&sym, &t).unwrap().order().unwrap(), 1344);
        let c = centralizer_in(&sym, &PermGroup::from_generators(3, vec![translation(3, 1)]).unwrap()).unwrap();
        assert_eq!(c.order().unwrap(), 384);
        assert_eq!(40320 % 384, 0);
    }

    #[test]
    fn parity_and_cycles() {
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert!(!t.is_even());
        assert_eq!(t.to_string(), "(0 1)");
        assert_eq!(Perm::identity(3).to_string(), "()");
        for v in 1..8 {
            let s = translation(3, v);
            assert!(s.is_even() && s.is_involution() && s.is_fixed_point_free());
        }
        assert_eq!(Perm::from_cycles(3, &[&[0, 1, 2], &[3, 4]]).unwrap().order(), 6);
        assert!(Perm::from_images(vec![0, 0, 1, 2]).is_err());
    }
}
