//! Boolean gene vectors and the element-wise operators used to move between
//! the triangle and basis-function encodings.
//!
//! All matrix-vector products run on exact integers before `B{·}` or `𝓗{·}`
//! is applied.

use std::fmt;
use std::str::FromStr;

use bitvec::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::IntMatrix;

/// Packed Boolean vector.
pub type Bits = BitVec<u64, Lsb0>;

/// Which design variable a gene encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    /// One bit per triangle (`t`).
    Triangle,
    /// One bit per interior edge / basis function (`g`).
    Basis,
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Encoding::Triangle => "triangle",
            Encoding::Basis => "basis",
        })
    }
}

impl FromStr for Encoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(Encoding::Triangle),
            "basis" => Ok(Encoding::Basis),
            other => Err(Error::Config(format!(
                "unknown encoding `{other}` (expected `triangle` or `basis`)"
            ))),
        }
    }
}

macro_rules! gene_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(Bits);

        impl $name {
            pub fn new(bits: Bits) -> Self {
                $name(bits)
            }

            pub fn zeros(len: usize) -> Self {
                $name(Bits::repeat(false, len))
            }

            pub fn ones(len: usize) -> Self {
                $name(Bits::repeat(true, len))
            }

            pub fn from_bools(bits: &[bool]) -> Self {
                $name(bits.iter().copied().collect())
            }

            pub fn bits(&self) -> &Bits {
                &self.0
            }

            pub fn into_bits(self) -> Bits {
                self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            pub fn count_ones(&self) -> usize {
                self.0.count_ones()
            }

            /// Bits as 0/1 integers for exact matrix products.
            pub fn to_ints(&self) -> Vec<i64> {
                to_ints(&self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&format_bits(&self.0))
            }
        }
    };
}

gene_type! {
    /// Material presence per triangle.
    TriangleGene
}

gene_type! {
    /// Basis-function presence per interior edge.
    BasisGene
}

/// A gene in either encoding.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gene {
    Triangle(TriangleGene),
    Basis(BasisGene),
}

impl Gene {
    pub fn from_bits(encoding: Encoding, bits: Bits) -> Self {
        match encoding {
            Encoding::Triangle => Gene::Triangle(TriangleGene(bits)),
            Encoding::Basis => Gene::Basis(BasisGene(bits)),
        }
    }

    pub fn encoding(&self) -> Encoding {
        match self {
            Gene::Triangle(_) => Encoding::Triangle,
            Gene::Basis(_) => Encoding::Basis,
        }
    }

    pub fn bits(&self) -> &Bits {
        match self {
            Gene::Triangle(t) => t.bits(),
            Gene::Basis(g) => g.bits(),
        }
    }
}

/// Element-wise Boolean rounding: 0 stays 0, everything else becomes 1.
pub fn boolean_round(v: &[i64]) -> Bits {
    v.iter().map(|&x| x != 0).collect()
}

/// Element-wise Heaviside step with `𝓗{0} = 1`.
pub fn heaviside(v: &[i64]) -> Bits {
    v.iter().map(|&x| x >= 0).collect()
}

/// Element-wise exclusive or.
pub fn xor(u: &Bits, v: &Bits) -> Result<Bits> {
    Error::check_len(u.len(), v.len())?;
    let mut out = u.clone();
    out ^= v.as_bitslice();
    Ok(out)
}

pub fn to_ints(bits: &Bits) -> Vec<i64> {
    bits.iter().map(|b| i64::from(*b)).collect()
}

/// `t = B{M g}`: a triangle is enabled iff an incident basis function is.
pub fn gene_to_triangles(g: &BasisGene, incidence: &IntMatrix) -> Result<TriangleGene> {
    Error::check_len(incidence.cols(), g.len())?;
    Ok(TriangleGene(boolean_round(&incidence.mul_vec(&g.to_ints()))))
}

/// `g = ¬B{Mᵀt − 2g₀}`: a basis function is enabled iff both of its triangles are.
pub fn triangles_to_gene(t: &TriangleGene, incidence: &IntMatrix) -> Result<BasisGene> {
    Error::check_len(incidence.rows(), t.len())?;
    let mut shifted = incidence.tr_mul_vec(&t.to_ints());
    shifted.iter_mut().for_each(|x| *x -= 2);
    Ok(BasisGene(!boolean_round(&shifted)))
}

/// Independent Bernoulli bits with probability `density`.
///
/// Uses ChaCha8 seeded with `seed_from_u64(seed)` and draws one uniform
/// `f64` in `[0, 1)` per bit; bit `i` is set iff the draw is below `density`.
pub fn random_bits(len: usize, density: f64, seed: u64) -> Result<Bits> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_bits_with(len, density, &mut rng)
}

pub(crate) fn random_bits_with(len: usize, density: f64, rng: &mut impl Rng) -> Result<Bits> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Density(density));
    }
    Ok((0..len).map(|_| rng.gen::<f64>() < density).collect())
}

pub fn format_bits(bits: &Bits) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

/// Parses the gene file format: one line of `0`/`1` characters. Surrounding
/// whitespace is ignored.
pub fn parse_bits(text: &str) -> Result<Bits> {
    let line = text.trim();
    if line.lines().count() > 1 {
        return Err(Error::Syntax {
            line: 2,
            message: "gene file must contain a single line".into(),
        });
    }
    line.chars()
        .enumerate()
        .map(|(i, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Syntax {
                line: 1,
                message: format!("invalid gene character `{other}` at column {}", i + 1),
            }),
        })
        .collect()
}
