//! Elements of `AGL(V)` acting on the right, `x ↦ xL + v`, and their
//! `(n+1) × (n+1)` augmented matrices `(1 | v ; 0 | L)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::gf2::{BitMatrix, BitVector};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affinity {
    linear: BitMatrix,
    translation: BitVector,
}

impl Affinity {
    pub fn new(linear: BitMatrix, translation: BitVector) -> Result<Affinity> {
        check_dim(linear.nrows(), translation.dim())?;
        if !linear.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(Affinity { linear, translation })
    }

    pub fn identity(n: usize) -> Affinity {
        Affinity { linear: BitMatrix::identity(n), translation: BitVector::zero(n) }
    }

    /// `σ_v : x ↦ x + v`.
    pub fn translation(v: BitVector) -> Affinity {
        Affinity { linear: BitMatrix::identity(v.dim()), translation: v }
    }

    pub fn linear(l: BitMatrix) -> Result<Affinity> {
        let n = l.nrows();
        Affinity::new(l, BitVector::zero(n))
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn linear_part(&self) -> &BitMatrix {
        &self.linear
    }

    pub fn translation_part(&self) -> BitVector {
        self.translation
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    pub fn apply(&self, x: BitVector) -> Result<BitVector> {
        check_dim(self.dim(), x.dim())?;
        Ok(self.eval(x))
    }

    #[inline]
    pub(crate) fn eval(&self, x: BitVector) -> BitVector {
        self.linear.mul_vec(x) + self.translation
    }

    pub fn to_perm(&self) -> Perm {
        Perm::from_fn(self.dim(), |x| self.eval(x)).expect("affinities are bijective")
    }

    /// Recovers the affinity realized by `p`, or `None` if `p` is not affine.
    /// Linearity of `x ↦ xp + 0p` is checked on every point.
    pub fn from_perm(p: &Perm) -> Option<Affinity> {
        let n = p.dim();
        let shift = p.image(BitVector::zero(n));
        let linear = BitMatrix::from_fn(n, |e| p.image(e) + shift);
        let candidate = Affinity { linear, translation: shift };
        let agrees = BitVector::all(n).all(|x| candidate.eval(x) == p.image(x));
        agrees.then_some(candidate)
    }

    /// `self` followed by `other`: `x ↦ (xL_f + v_f)L_g + v_g`.
    pub fn compose(&self, other: &Affinity) -> Result<Affinity> {
        check_dim(self.dim(), other.dim())?;
        Ok(Affinity {
            linear: self.linear.mul(&other.linear),
            translation: other.linear.mul_vec(self.translation) + other.translation,
        })
    }

    pub fn inverse(&self) -> Affinity {
        let inv = self.linear.inverse().expect("linear part is invertible");
        let translation = inv.mul_vec(self.translation);
        Affinity { linear: inv, translation }
    }

    /// `g⁻¹ self g`.
    pub fn conjugate(&self, g: &Affinity) -> Result<Affinity> {
        g.inverse().compose(self)?.compose(g)
    }

    pub fn augmented(&self) -> AugmentedMatrix {
        let n = self.dim();
        let mut m = BitMatrix::zero(n + 1, n + 1);
        m.set(1, 1, true);
        for j in 1..=n {
            m.set(1, j + 1, self.translation.coord(j));
        }
        m.set_block(2, 2, &self.linear);
        AugmentedMatrix { matrix: m }
    }
}

impl fmt::Debug for Affinity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Affinity(x ↦ x[{}] + {})", self.linear, self.translation)
    }
}

pub fn apply(f: &Affinity, x: BitVector) -> Result<BitVector> {
    f.apply(x)
}

pub fn to_perm(f: &Affinity) -> Perm {
    f.to_perm()
}

pub fn perm_to_affinity(p: &Perm) -> Option<Affinity> {
    Affinity::from_perm(p)
}

pub fn compose_affinity(f: &Affinity, g: &Affinity) -> Result<Affinity> {
    f.compose(g)
}

/// JSON record `{"linear": [rows], "translation": "bits"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinityRecord {
    pub linear: Vec<String>,
    pub translation: String,
}

impl From<&Affinity> for AffinityRecord {
    fn from(f: &Affinity) -> Self {
        AffinityRecord {
            linear: f.linear.rows().map(|r| r.to_string()).collect(),
            translation: f.translation.to_string(),
        }
    }
}

impl TryFrom<&AffinityRecord> for Affinity {
    type Error = Error;

    fn try_from(r: &AffinityRecord) -> Result<Affinity> {
        let rows = r.linear.iter().map(|s| s.parse()).collect::<Result<Vec<BitVector>>>()?;
        let linear = BitMatrix::from_rows(&rows)?;
        Affinity::new(linear, r.translation.parse()?)
    }
}

impl Serialize for Affinity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        AffinityRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Affinity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let r = AffinityRecord::deserialize(deserializer)?;
        Affinity::try_from(&r).map_err(serde::de::Error::custom)
    }
}

/// The matrix `(1 | v ; 0 | L)` with `(1, xφ) = (1, x)·M`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AugmentedMatrix {
    matrix: BitMatrix,
}

/// Blocks of an augmented matrix against `V = U ⊕ W`, `U = ⟨e_1..e_{n−d}⟩`,
/// `W = V_d = ⟨e_{n−d+1}..e_n⟩`:
///
/// ```text
/// ( 1 | u | w )
/// ( 0 | A | B )
/// ( 0 | D | C )
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    pub d: usize,
    pub u: BitVector,
    pub w: BitVector,
    pub a: BitMatrix,
    pub b: BitMatrix,
    pub d_block: BitMatrix,
    pub c: BitMatrix,
}

impl BlockSplit {
    /// `C = 1_d`, i.e. the element centralizes `σ_{V_d}`.
    pub fn centralizes_w(&self) -> bool {
        self.c.is_identity()
    }
}

impl AugmentedMatrix {
    pub fn from_matrix(matrix: BitMatrix) -> Result<AugmentedMatrix> {
        let size = matrix.nrows();
        let well_formed = matrix.is_square()
            && size >= 1
            && matrix.get(1, 1)
            && (2..=size).all(|i| !matrix.get(i, 1))
            && matrix.block(2, 2, size - 1, size - 1).is_invertible();
        if !well_formed {
            return Err(Error::Construction("not an augmented affine matrix".into()));
        }
        Ok(AugmentedMatrix { matrix })
    }

    /// Assembles `(1 | u | w ; 0 | A | B ; 0 | 0 | C)`.
    pub fn from_blocks(u: BitVector, w: BitVector, a: &BitMatrix, b: &BitMatrix, c: &BitMatrix) -> Result<AugmentedMatrix> {
        let (k, d) = (u.dim(), w.dim());
        let n = k + d;
        let mut m = BitMatrix::zero(n + 1, n + 1);
        m.set(1, 1, true);
        let top = u.concat(&w);
        for j in 1..=n {
            m.set(1, j + 1, top.coord(j));
        }
        m.set_block(2, 2, a);
        m.set_block(2, 2 + k, b);
        m.set_block(2 + k, 2 + k, c);
        AugmentedMatrix::from_matrix(m)
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn to_affinity(&self) -> Affinity {
        let n = self.dim();
        let translation = self.matrix.row(1).slice(2, n + 1);
        let linear = self.matrix.block(2, 2, n, n);
        Affinity { linear, translation }
    }

    pub fn split(&self, d: usize) -> Result<BlockSplit> {
        let n = self.dim();
        if d > n {
            return Err(Error::InvalidSplit { n, d });
        }
        let k = n - d;
        let top = self.matrix.row(1).slice(2, n + 1);
        Ok(BlockSplit {
            d,
            u: top.slice(1, k),
            w: top.slice(k + 1, n),
            a: self.matrix.block(2, 2, k, k),
            b: self.matrix.block(2, 2 + k, k, d),
            d_block: self.matrix.block(2 + k, 2, d, k),
            c: self.matrix.block(2 + k, 2 + k, d, d),
        })
    }
}

impl fmt::Debug for AugmentedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AugmentedMatrix({})", self.matrix)
    }
}

pub fn embed_augmented(f: &Affinity, d: usize) -> Result<(AugmentedMatrix, BlockSplit)> {
    let m = f.augmented();
    let split = m.split(d)?;
    Ok((m, split))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regular::{epsilon_b, pi_b};

    fn v(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn apply_examples() {
        let x = v("101");
        assert_eq!(Affinity::identity(3).apply(x).unwrap(), x);
        assert_eq!(Affinity::translation(v("011")).apply(x).unwrap(), v("110"));
        let pi = pi_b(3, v("001")).unwrap();
        assert_eq!(pi.apply(v("010")).unwrap(), v("111"));
        assert!(pi.apply(v("0101")).is_err());
    }

    #[test]
    fn to_perm_examples() {
        assert!(Affinity::identity(3).to_perm().is_identity());
        let s = Affinity::translation(v("100")).to_perm();
        for x in 0..8 {
            assert_eq!(s.apply(x), x ^ 0b100);
        }
        let pi = pi_b(3, v("001")).unwrap().to_perm();
        assert!(pi.is_involution() && pi.is_fixed_point_free());
    }

    #[test]
    fn perm_to_affinity_examples() {
        let pi = pi_b(3, v("001")).unwrap();
        assert_eq!(perm_to_affinity(&pi.to_perm()), Some(pi));
        let three_cycle = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(perm_to_affinity(&three_cycle), None);
        // agrees with an affinity on the basis but not everywhere
        let swap = Perm::from_cycles(3, &[&[3, 7]]).unwrap();
        assert_eq!(perm_to_affinity(&swap), None);
    }

    #[test]
    fn compose_examples() {
        let l: BitMatrix = "110/011/001".parse().unwrap();
        let f = Affinity::new(l, v("101")).unwrap();
        assert_eq!(f.compose(&f.inverse()).unwrap(), Affinity::identity(3));
        let (su, sv) = (Affinity::translation(v("110")), Affinity::translation(v("011")));
        assert_eq!(su.compose(&sv).unwrap(), Affinity::translation(v("101")));
        let b = v("001");
        let (p, e) = (pi_b(3, b).unwrap(), epsilon_b(3, b).unwrap());
        assert_eq!(p.compose(&e).unwrap(), e.compose(&p).unwrap());
        assert!(Affinity::new("110/110/001".parse().unwrap(), b).is_err());
    }

    #[test]
    fn functor_property() {
        let ls = ["110/011/001", "100/110/111", "011/101/111", "001/100/010"];
        let ts = ["000", "101", "111", "010"];
        let affs: Vec<Affinity> =
            ls.iter().zip(ts).map(|(l, t)| Affinity::new(l.parse().unwrap(), v(t)).unwrap()).collect();
        for f in &affs {
            assert_eq!(Affinity::from_perm(&f.to_perm()).as_ref(), Some(f));
            for g in &affs {
                assert_eq!(f.compose(g).unwrap().to_perm(), &f.to_perm() * &g.to_perm());
                let c = f.conjugate(g).unwrap().to_perm();
                assert_eq!(c, f.to_perm().conjugate(&g.to_perm()).unwrap());
            }
        }
    }

    #[test]
    fn augmented_blocks() {
        assert!(Affinity::identity(3).augmented().matrix().is_identity());
        let sz = Affinity::translation(v("001"));
        let (_, split) = embed_augmented(&sz, 1).unwrap();
        assert!(split.a.is_identity() && split.c.is_identity() && split.b.is_zero());
        assert_eq!(split.w, v("1"));
        assert!(split.u.is_zero());

        let pi = pi_b(3, v("001")).unwrap();
        let (m, split) = embed_augmented(&pi, 1).unwrap();
        assert_eq!(m.to_affinity(), pi);
        assert_eq!(split.b.to_string(), "0/1");
        assert!(split.centralizes_w());
        assert_eq!(split.u, v("10"));
        assert!(embed_augmented(&pi, 4).is_err());

        let rebuilt = AugmentedMatrix::from_blocks(split.u, split.w, &split.a, &split.b, &split.c).unwrap();
        assert_eq!(rebuilt, m);
        let aug = Affinity::new("110/011/001".parse().unwrap(), v("110")).unwrap().augmented();
        assert_eq!(aug.matrix().to_string(), "1110/0110/0011/0001");
        for x in BitVector::all(3) {
            let lifted = BitVector::from_index(1, 1).concat(&x);
            let image = aug.matrix().mul_vec(lifted);
            assert_eq!(image.slice(2, 4), aug.to_affinity().eval(x));
        }
    }

    #[test]
    fn json_record_round_trip() {
        let f = Affinity::new("110/011/001".parse().unwrap(), v("101")).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"linear":["110","011","001"],"translation":"101"}"#);
        assert_eq!(serde_json::from_str::<Affinity>(&s).unwrap(), f);
    }

    #[test]
    fn unitriangular_generators_are_even() {
        for n in 3..=6 {
            for i in 1..n {
                assert!(Affinity::linear(BitMatrix::elementary(n, i, i + 1)).unwrap().to_perm().is_even());
            }
            for i in 1..=n {
                assert!(Affinity::translation(BitVector::unit(n, i)).to_perm().is_even());
            }
        }
    }
}
