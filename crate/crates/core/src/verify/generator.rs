//! Deterministic streams of test functions.
//!
//! Function `index` of a stream is drawn from its own ChaCha stream keyed by
//! `(kind, n, index)` under the user seed, so any element can be regenerated
//! in isolation and chunked runs see exactly the same inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::ball::ball_minimizer;
use crate::cube::{CubeFunction, MAX_DIM};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    UniformRandomNonneg,
    SignedGaussian,
    IndicatorOfRandomSubset,
    TwoValued,
    BallMinimizer,
    DictatorLike,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 6] = [
        GeneratorKind::UniformRandomNonneg,
        GeneratorKind::SignedGaussian,
        GeneratorKind::IndicatorOfRandomSubset,
        GeneratorKind::TwoValued,
        GeneratorKind::BallMinimizer,
        GeneratorKind::DictatorLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::UniformRandomNonneg => "uniform_random_nonneg",
            GeneratorKind::SignedGaussian => "signed_gaussian",
            GeneratorKind::IndicatorOfRandomSubset => "indicator_of_random_subset",
            GeneratorKind::TwoValued => "two_valued",
            GeneratorKind::BallMinimizer => "ball_minimizer",
            GeneratorKind::DictatorLike => "dictator_like",
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self != GeneratorKind::SignedGaussian
    }

    fn id(self) -> u64 {
        Self::ALL.iter().position(|&k| k == self).unwrap() as u64
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown generator kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionGenerator {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
    pub count: usize,
}

impl FunctionGenerator {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64, count: usize) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "generator dimension must be in 1..={MAX_DIM}, got {n}"
            )));
        }
        Ok(Self {
            kind,
            n,
            seed,
            count,
        })
    }

    fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.kind.id() << 56) ^ ((self.n as u64) << 48) ^ index as u64);
        rng
    }

    /// The `index`-th function of the stream; independent of `count`.
    pub fn generate(&self, index: usize) -> CubeFunction {
        let mut rng = self.rng(index);
        let n = self.n;
        let size = 1usize << n;
        let values: Vec<f64> = match self.kind {
            GeneratorKind::UniformRandomNonneg => {
                // a random share of exact zeros exercises the support edge
                let zero_share = rng.random::<f64>() * 0.5;
                (0..size)
                    .map(|_| {
                        if rng.random::<f64>() < zero_share {
                            0.0
                        } else {
                            rng.random::<f64>()
                        }
                    })
                    .collect()
            }
            GeneratorKind::SignedGaussian => (0..size)
                .map(|_| StandardNormal.sample(&mut rng))
                .collect(),
            GeneratorKind::IndicatorOfRandomSubset => {
                let density = rng.random::<f64>();
                let mut v: Vec<f64> = (0..size)
                    .map(|_| f64::from(u8::from(rng.random::<f64>() < density)))
                    .collect();
                let anchor = rng.random_range(0..size);
                v[anchor] = 1.0;
                v
            }
            GeneratorKind::TwoValued => {
                let density = rng.random::<f64>();
                let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
                (0..size)
                    .map(|_| if rng.random::<f64>() < density { a } else { b })
                    .collect()
            }
            GeneratorKind::BallMinimizer => {
                let r = rng.random_range(1..=n);
                let center = rng.random_range(0..size);
                let profile = ball_minimizer(n, r).expect("radius within range");
                (0..size)
                    .map(|x| {
                        let w = (x ^ center).count_ones() as usize;
                        if w <= r {
                            profile.g[w]
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            GeneratorKind::DictatorLike => {
                // 1 +/- s on one coordinate: the one-dimensional extremals lifted
                let coord = rng.random_range(0..n);
                let s = rng.random::<f64>();
                (0..size)
                    .map(|x| if x >> coord & 1 == 1 { 1.0 + s } else { 1.0 - s })
                    .collect()
            }
        };
        CubeFunction::new(n, values).expect("generated values are finite")
    }

    pub fn iter(&self) -> impl Iterator<Item = CubeFunction> + '_ {
        (0..self.count).map(|i| self.generate(i))
    }

    /// Replay record for function `index`.
    pub fn witness(&self, index: usize) -> Value {
        json!({
            "kind": self.kind.name(),
            "n": self.n,
            "seed": self.seed,
            "index": index,
        })
    }
}

/// Rebuilds the input described by a witness produced by [`FunctionGenerator::witness`].
pub fn replay_witness(witness: &Value) -> Result<CubeFunction> {
    let field = |key: &str| {
        witness
            .get(key)
            .ok_or_else(|| Error::InvalidParameter(format!("witness lacks {key:?}")))
    };
    let kind: GeneratorKind = field("kind")?
        .as_str()
        .ok_or_else(|| Error::InvalidParameter("witness kind is not a string".into()))?
        .parse()?;
    let as_u64 = |key: &str| -> Result<u64> {
        field(key)?
            .as_u64()
            .ok_or_else(|| Error::InvalidParameter(format!("witness {key:?} is not an integer")))
    };
    let generator = FunctionGenerator::new(kind, as_u64("n")? as usize, as_u64("seed")?, 0)?;
    Ok(generator.generate(as_u64("index")? as usize))
}

/// Splits `total` functions evenly over every generator kind and
/// `n in 1..=max_n`, in a fixed order.
pub fn mixed_generators(total: usize, max_n: usize, seed: u64) -> Result<Vec<FunctionGenerator>> {
    split_generators(&GeneratorKind::ALL, total, max_n, seed)
}

/// As [`mixed_generators`], restricted to `kinds`.
pub fn split_generators(
    kinds: &[GeneratorKind],
    total: usize,
    max_n: usize,
    seed: u64,
) -> Result<Vec<FunctionGenerator>> {
    let cells = kinds.len() * max_n;
    if cells == 0 {
        return Err(Error::InvalidParameter(
            "need at least one generator kind and max_n >= 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(cells);
    let mut cell = 0;
    for n in 1..=max_n {
        for &kind in kinds {
            let count = total / cells + usize::from(cell < total % cells);
            out.push(FunctionGenerator::new(kind, n, seed, count)?);
            cell += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_deterministic_and_distinct() {
        for kind in GeneratorKind::ALL {
            let g = FunctionGenerator::new(kind, 5, 11, 4).unwrap();
            let a: Vec<_> = g.iter().collect();
            let b: Vec<_> = g.iter().collect();
            assert_eq!(a, b);
            if kind != GeneratorKind::DictatorLike {
                assert_ne!(a[0], a[1], "{kind:?}");
            }
            let other = FunctionGenerator { seed: 12, ..g };
            assert_ne!(other.generate(0), a[0], "{kind:?}");
        }
    }

    #[test]
    fn kinds_respect_sign() {
        for kind in GeneratorKind::ALL {
            let g = FunctionGenerator::new(kind, 4, 0, 50).unwrap();
            for f in g.iter() {
                assert!(!f.is_zero());
                if kind.is_nonnegative() {
                    assert!(f.is_nonnegative(), "{kind:?}");
                }
            }
        }
    }

    #[test]
    fn witness_round_trip() {
        let g = FunctionGenerator::new(GeneratorKind::BallMinimizer, 6, 3, 10).unwrap();
        let w = g.witness(7);
        assert_eq!(replay_witness(&w).unwrap(), g.generate(7));
        assert_eq!("two_valued".parse::<GeneratorKind>().unwrap(), GeneratorKind::TwoValued);
        assert!("nope".parse::<GeneratorKind>().is_err());
    }

    #[test]
    fn mixed_split_covers_total() {
        let gens = mixed_generators(1000, 10, 0).unwrap();
        assert_eq!(gens.len(), 60);
        assert_eq!(gens.iter().map(|g| g.count).sum::<usize>(), 1000);
    }
}
