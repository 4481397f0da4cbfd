use crate::ring::Rational;
use crate::weyl::WeylElement;
use num_traits::One;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }

    pub fn apply(self, a: &WeylElement) -> WeylElement {
        match self {
            Sign::Plus => a.clone(),
            Sign::Minus => a.neg(),
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Where the torsion element enters the recursion for `r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionPlacement {
    /// Only in the first iterate, `r₀ = δ⁻¹T`.
    Seed,
    /// In every iterate.
    EveryStep,
}

/// The finitely many sign and placement choices the construction leaves open.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Convention {
    /// Sign of `δ` in `D`.
    pub delta: Sign,
    /// Sign of the curvature element in the recursion.
    pub curvature: Sign,
    /// Sign of `∇r` in the recursion.
    pub connection: Sign,
    /// Sign of `(1/lam) r∘r` in the recursion.
    pub square: Sign,
    /// Sign of the torsion element in the recursion.
    pub torsion: Sign,
    pub torsion_at: TorsionPlacement,
    /// Sign of `δ⁻¹P` in `Q`.
    pub lift: Sign,
}

impl Convention {
    pub fn reference() -> Self {
        Convention {
            delta: Sign::Plus,
            curvature: Sign::Minus,
            connection: Sign::Minus,
            square: Sign::Minus,
            torsion: Sign::Plus,
            torsion_at: TorsionPlacement::EveryStep,
            lift: Sign::Plus,
        }
    }

    /// All 128 combinations, in a fixed order.
    pub fn all() -> Vec<Convention> {
        let mut out = Vec::with_capacity(128);
        for delta in Sign::BOTH {
            for curvature in Sign::BOTH {
                for connection in Sign::BOTH {
                    for square in Sign::BOTH {
                        for torsion in Sign::BOTH {
                            for torsion_at in [TorsionPlacement::EveryStep, TorsionPlacement::Seed] {
                                for lift in Sign::BOTH {
                                    out.push(Convention {
                                        delta,
                                        curvature,
                                        connection,
                                        square,
                                        torsion,
                                        torsion_at,
                                        lift,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

impl Default for Convention {
    fn default() -> Self {
        Self::reference()
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta:{} curvature:{} connection:{} square:{} torsion:{} torsion_at:{} lift:{}",
            self.delta.symbol(),
            self.curvature.symbol(),
            self.connection.symbol(),
            self.square.symbol(),
            self.torsion.symbol(),
            match self.torsion_at {
                TorsionPlacement::Seed => "seed",
                TorsionPlacement::EveryStep => "every",
            },
            self.lift.symbol()
        )
    }
}

impl FromStr for Convention {
    type Err = String;

    /// Space-separated `key:value` pairs; omitted keys keep the reference value.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Convention::reference();
        for tok in s.split_whitespace() {
            let (key, value) = tok
                .split_once(':')
                .ok_or_else(|| format!("expected key:value, got `{tok}`"))?;
            if key == "torsion_at" {
                c.torsion_at = match value {
                    "seed" => TorsionPlacement::Seed,
                    "every" => TorsionPlacement::EveryStep,
                    _ => return Err(format!("torsion_at must be seed or every, got `{value}`")),
                };
                continue;
            }
            let sign = match value {
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(format!("sign for `{key}` must be + or -, got `{value}`")),
            };
            match key {
                "delta" => c.delta = sign,
                "curvature" => c.curvature = sign,
                "connection" => c.connection = sign,
                "square" => c.square = sign,
                "torsion" => c.torsion = sign,
                "lift" => c.lift = sign,
                _ => return Err(format!("unknown convention key `{key}`")),
            }
        }
        Ok(c)
    }
}
