//! Difference-distribution tables of an S-box with respect to `+` or to the
//! operation `∘` of a regular group.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{check_dim, Error, Result};
use crate::gf2::BitVector;
use crate::perm::Perm;
use crate::regular::RegularGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SBox {
    table: Perm,
}

impl SBox {
    pub fn from_perm(table: Perm) -> SBox {
        SBox { table }
    }

    /// A bijection given by its values on `0..2ⁿ`.
    pub fn from_values(values: &[usize]) -> Result<SBox> {
        let images = values
            .iter()
            .map(|&v| u16::try_from(v).map_err(|_| Error::NotAPermutation(format!("value {v} out of range"))))
            .collect::<Result<Vec<u16>>>()?;
        Ok(SBox { table: Perm::from_images(images)? })
    }

    /// Newline-separated integers; blank lines are ignored.
    pub fn parse(text: &str) -> Result<SBox> {
        let values = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| l.parse::<usize>().map_err(|e| Error::Parse(format!("S-box entry {l:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        SBox::from_values(&values)
    }

    pub fn dim(&self) -> usize {
        self.table.dim()
    }

    pub fn table(&self) -> &Perm {
        &self.table
    }

    pub fn apply(&self, x: BitVector) -> BitVector {
        self.table.image(x)
    }
}

/// The difference operation: bitwise XOR or `u ∘ v = u τ_v`.
#[derive(Clone, Copy, Debug)]
pub enum DiffOp<'a> {
    Xor,
    Circ(&'a RegularGroup),
}

impl DiffOp<'_> {
    pub fn apply(&self, u: BitVector, v: BitVector) -> BitVector {
        match self {
            DiffOp::Xor => u + v,
            DiffOp::Circ(g) => g.circ_unchecked(u, v),
        }
    }
}

/// Entry `(a, b)` counts `x` with `S(x ⋄ a) ⋄ S(x) = b`.
pub fn ddt(s: &SBox, op: DiffOp<'_>) -> Result<Vec<Vec<u32>>> {
    let n = s.dim();
    if let DiffOp::Circ(g) = op {
        check_dim(n, g.dim())?;
    }
    Ok((0..1usize << n)
        .into_par_iter()
        .map(|a| {
            let a = BitVector::from_index(n, a);
            let mut row = vec![0u32; 1 << n];
            for x in BitVector::all(n) {
                row[op.apply(s.apply(op.apply(x, a)), s.apply(x)).index()] += 1;
            }
            row
        })
        .collect())
}

/// `max_{a ≠ 0, b} ddt[a][b]`.
pub fn differential_uniformity(s: &SBox, op: DiffOp<'_>) -> Result<u32> {
    Ok(ddt(s, op)?.iter().skip(1).flat_map(|row| row.iter().copied()).max().unwrap_or(0))
}

pub fn write_csv(table: &[Vec<u32>], mut out: impl Write) -> io::Result<()> {
    for row in table {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::Affinity;
    use crate::gf2::BitMatrix;
    use crate::regular::{build_tb, dixon_conjugator, translation_group};

    fn present_like() -> SBox {
        SBox::from_values(&[0xc, 5, 6, 0xb, 9, 0, 0xa, 0xd, 3, 0xe, 0xf, 8, 4, 7, 1, 2]).unwrap()
    }

    #[test]
    fn identity_sbox() {
        let s = SBox::from_perm(Perm::identity(3));
        let tb = build_tb(3, BitVector::unit(3, 3)).unwrap();
        for op in [DiffOp::Xor, DiffOp::Circ(&tb)] {
            let t = ddt(&s, op).unwrap();
            for (a, row) in t.iter().enumerate() {
                for (b, &c) in row.iter().enumerate() {
                    assert_eq!(c, if a == b { 8 } else { 0 });
                }
            }
            assert_eq!(differential_uniformity(&s, op).unwrap(), 8);
        }
    }

    #[test]
    fn rows_sum_to_size() {
        let s = present_like();
        let g = build_tb(4, BitVector::unit(4, 4)).unwrap();
        for op in [DiffOp::Xor, DiffOp::Circ(&g)] {
            let t = ddt(&s, op).unwrap();
            assert!(t.iter().all(|r| r.iter().sum::<u32>() == 16));
            assert_eq!(t[0][0], 16);
            let u = differential_uniformity(&s, op).unwrap();
            assert!(u % 2 == 0 && u >= 2);
        }
        assert_eq!(differential_uniformity(&s, DiffOp::Xor).unwrap(), 4);
    }

    #[test]
    fn affine_under_conjugated_operation() {
        let f = Affinity::new("110/011/001".parse().unwrap(), "101".parse().unwrap()).unwrap();
        assert_eq!(differential_uniformity(&SBox::from_perm(f.to_perm()), DiffOp::Xor).unwrap(), 8);
        let t = translation_group(3).unwrap();
        let k = build_tb(3, BitVector::unit(3, 3)).unwrap();
        let g = dixon_conjugator(&t, &k, &BitMatrix::identity(3)).unwrap();
        let conjugated = SBox::from_perm(f.to_perm().conjugate(&g).unwrap());
        assert_eq!(differential_uniformity(&conjugated, DiffOp::Circ(&k)).unwrap(), 8);
    }

    #[test]
    fn parsing() {
        assert_eq!(SBox::parse("1\n0\n\n3\n2\n").unwrap().dim(), 2);
        assert!(SBox::parse("0\n0\n").is_err());
        assert!(SBox::parse("0\nx\n").is_err());
        assert!(SBox::parse("0\n1\n2\n").is_err());
        let mut buf = Vec::new();
        write_csv(&[vec![1, 2], vec![3, 4]], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1,2\n3,4\n");
    }

    #[test]
    fn dimension_mismatch() {
        let g = translation_group(4).unwrap();
        assert!(ddt(&SBox::from_perm(Perm::identity(3)), DiffOp::Circ(&g)).is_err());
    }
}
