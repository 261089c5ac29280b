//! Expression trees for the block representatives and their certified
//! evaluation at tagged points.

mod eval;
mod special;

use std::fmt;

use thiserror::Error;

use crate::taxonomy::{self, BlockSignature, TaxonomyError, REPRESENTATIVE_NAMES};
use crate::Q;

pub use eval::{eval, eval_with, EvalOptions};
pub use special::{bump_value, fc_gc_truncation, weierstrass_exact, weierstrass_truncation, BumpKind};

/// Default size of the `Π_{k=1}^{n}` families.
pub const DEFAULT_FAMILY_N: u32 = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("evaluation budget exhausted: {0}")]
    BudgetExhausted(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZooError {
    #[error("representative index {0} is outside 1..=28")]
    BadIndex(usize),
    #[error("family size must be positive")]
    BadFamilySize,
}

impl From<TaxonomyError> for ZooError {
    fn from(e: TaxonomyError) -> Self {
        match e {
            TaxonomyError::BadIndex(i) => ZooError::BadIndex(i),
        }
    }
}

/// Terms of `Σ π^k 1_{π^k}(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CombTerms {
    /// `k = 1..=n`
    Finite(u32),
    /// all `k >= 1`
    Infinite,
}

/// A real function built from the zoo primitives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FnExpr {
    /// `1_Q(x)`
    Dirichlet,
    /// `1/q` at reduced `p/q`, 0 at irrationals.
    Thomae,
    /// The Cantor function, clamped to 0 left of 0 and 1 right of 1.
    CantorFn,
    /// `Σ_{n>=0} cos(21^n π x) / 3^n`
    Weierstrass,
    Identity,
    ConstOne,
    SinPiX,
    AbsSinPiX,
    SinSqPiX,
    /// `sin²(π/x)`, defined as 0 at `x = 0`.
    SinSqPiOverX,
    /// Triangular bumps on the Cantor levels, times `D(x)`.
    FC,
    /// Raised-cosine bumps on the Cantor levels, times `D(x)`.
    GC,
    /// `Σ π^k 1_{π^k}(x)`
    PiComb(CombTerms),
    /// `Σ_{k=1}^{n} π^-k 1_{π^-k}(x)`
    ShiftCombAtInversePiPowers(u32),
    /// `Σ_n 1_{A+2n}(x)` with `A = {sin(m) : m >= 1}`.
    SinLattice,
    /// `Π_{k=1}^{n} (x-k)`, or its square.
    PolyFactor {
        n: u32,
        squared: bool,
    },
    /// `Π_{k=1}^{n} (x - 3^-k)²`
    PolyFactorAtThirds(u32),
    /// `|Π_{k=1}^{n} (x-k)|`
    AbsPolyFactor(u32),
    Product(Vec<FnExpr>),
    Sum(Vec<FnExpr>),
    Scale(Q, Box<FnExpr>),
    /// Multiplication by `1_[0,1](x)`.
    RestrictToUnit(Box<FnExpr>),
}

impl FnExpr {
    pub fn product(factors: impl IntoIterator<Item = FnExpr>) -> FnExpr {
        FnExpr::Product(factors.into_iter().collect())
    }

    pub fn sum(terms: impl IntoIterator<Item = FnExpr>) -> FnExpr {
        FnExpr::Sum(terms.into_iter().collect())
    }

    pub fn scale(factor: Q, inner: FnExpr) -> FnExpr {
        FnExpr::Scale(factor, Box::new(inner))
    }

    pub fn restrict_to_unit(inner: FnExpr) -> FnExpr {
        FnExpr::RestrictToUnit(Box::new(inner))
    }

    /// The zero function, `0 · 1`.
    pub fn zero() -> FnExpr {
        FnExpr::scale(Q::from_integer(0.into()), FnExpr::ConstOne)
    }

    fn any_leaf(&self, pred: &dyn Fn(&FnExpr) -> bool) -> bool {
        match self {
            FnExpr::Product(v) | FnExpr::Sum(v) => v.iter().any(|e| e.any_leaf(pred)),
            FnExpr::Scale(_, e) | FnExpr::RestrictToUnit(e) => e.any_leaf(pred),
            leaf => pred(leaf),
        }
    }

    /// Built from the Cantor set (Cantor function or the `f_C`, `g_C` bumps).
    pub fn uses_cantor_set(&self) -> bool {
        self.any_leaf(&|e| matches!(e, FnExpr::CantorFn | FnExpr::FC | FnExpr::GC))
    }

    /// Contains one of the Cantor, Dirichlet, Thomae or Weierstrass functions.
    pub fn uses_big_four(&self) -> bool {
        self.any_leaf(&|e| matches!(e, FnExpr::CantorFn | FnExpr::Dirichlet | FnExpr::Thomae | FnExpr::Weierstrass))
    }
}

impl fmt::Display for FnExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[FnExpr], sep: &str| v.iter().map(|e| format!("({e})")).collect::<Vec<_>>().join(sep);
        match self {
            FnExpr::Dirichlet => f.write_str("D(x)"),
            FnExpr::Thomae => f.write_str("T(x)"),
            FnExpr::CantorFn => f.write_str("C(x)"),
            FnExpr::Weierstrass => f.write_str("W(x)"),
            FnExpr::Identity => f.write_str("x"),
            FnExpr::ConstOne => f.write_str("1"),
            FnExpr::SinPiX => f.write_str("sin(pi x)"),
            FnExpr::AbsSinPiX => f.write_str("|sin(pi x)|"),
            FnExpr::SinSqPiX => f.write_str("sin^2(pi x)"),
            FnExpr::SinSqPiOverX => f.write_str("sin^2(pi/x)"),
            FnExpr::FC => f.write_str("f_C(x)"),
            FnExpr::GC => f.write_str("g_C(x)"),
            FnExpr::PiComb(CombTerms::Finite(n)) => write!(f, "sum_{{k=1}}^{{{n}}} pi^k 1_{{pi^k}}(x)"),
            FnExpr::PiComb(CombTerms::Infinite) => f.write_str("sum_{k>=1} pi^k 1_{pi^k}(x)"),
            FnExpr::ShiftCombAtInversePiPowers(n) => write!(f, "sum_{{k=1}}^{{{n}}} pi^-k 1_{{pi^-k}}(x)"),
            FnExpr::SinLattice => f.write_str("sum_n 1_{A+2n}(x), A = {sin(m)}"),
            FnExpr::PolyFactor { n, squared: false } => write!(f, "prod_{{k=1}}^{{{n}}}(x-k)"),
            FnExpr::PolyFactor { n, squared: true } => write!(f, "prod_{{k=1}}^{{{n}}}(x-k)^2"),
            FnExpr::PolyFactorAtThirds(n) => write!(f, "prod_{{k=1}}^{{{n}}}(x-1/3^k)^2"),
            FnExpr::AbsPolyFactor(n) => write!(f, "|prod_{{k=1}}^{{{n}}}(x-k)|"),
            FnExpr::Product(v) => f.write_str(&join(v, " * ")),
            FnExpr::Sum(v) => f.write_str(&join(v, " + ")),
            FnExpr::Scale(r, e) => write!(f, "{}/{} * ({e})", r.numer(), r.denom()),
            FnExpr::RestrictToUnit(e) => write!(f, "({e}) * 1_[0,1](x)"),
        }
    }
}

/// One of the 28 block representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZooEntry {
    pub id: usize,
    pub expr: FnExpr,
    pub declared_signature: BlockSignature,
    pub display_name: &'static str,
    /// Common name where the function has one.
    pub comment: Option<&'static str>,
}

/// The representative of block `i`, with family size `n` where it applies.
pub fn representative(i: usize, n: u32) -> Result<ZooEntry, ZooError> {
    use FnExpr::*;
    if n == 0 {
        return Err(ZooError::BadFamilySize);
    }
    let poly = PolyFactor { n, squared: false };
    let poly_sq = PolyFactor { n, squared: true };
    let comb = PiComb(CombTerms::Finite(n));
    let w_comb = FnExpr::sum([Weierstrass, comb.clone()]);
    let expr = match i {
        1 => Dirichlet,
        2 => FnExpr::product([poly.clone(), Dirichlet]),
        3 => FnExpr::product([poly_sq.clone(), Dirichlet]),
        4 => FnExpr::product([SinPiX, Dirichlet]),
        5 => FnExpr::product([SinPiX, poly.clone(), Dirichlet]),
        6 => FnExpr::product([SinSqPiX, Dirichlet]),
        7 => FC,
        8 => FnExpr::product([PolyFactorAtThirds(n), FC]),
        9 => FnExpr::product([SinSqPiOverX, FC]),
        10 => GC,
        11 => Thomae,
        12 => FnExpr::product([poly_sq.clone(), Thomae]),
        13 => FnExpr::product([SinSqPiX, Thomae]),
        14 => FnExpr::restrict_to_unit(Thomae),
        15 => PiComb(CombTerms::Infinite),
        16 => w_comb.clone(),
        17 => FnExpr::product([poly_sq.clone(), w_comb.clone()]),
        18 => FnExpr::product([SinSqPiX, w_comb]),
        19 => FnExpr::restrict_to_unit(FnExpr::sum([Weierstrass, ShiftCombAtInversePiPowers(n)])),
        20 => FnExpr::sum([AbsSinPiX, comb.clone()]),
        21 => comb,
        22 => Weierstrass,
        23 => FnExpr::product([poly_sq, Weierstrass]),
        24 => FnExpr::product([SinSqPiX, Weierstrass]),
        25 => CantorFn,
        26 => AbsSinPiX,
        27 => AbsPolyFactor(n),
        28 => Identity,
        _ => return Err(ZooError::BadIndex(i)),
    };
    let comment = match i {
        1 => Some("Dirichlet function"),
        7 => Some("C_f = C"),
        10 => Some("C_f = D_f = C"),
        11 => Some("Thomae function"),
        22 => Some("Weierstrass function"),
        25 => Some("Cantor function"),
        _ => None,
    };
    Ok(ZooEntry {
        id: i,
        expr,
        declared_signature: declared_signature(i)?,
        display_name: REPRESENTATIVE_NAMES[i - 1],
        comment,
    })
}

/// The block signature declared for representative `i`.
pub fn declared_signature(i: usize) -> Result<BlockSignature, ZooError> {
    Ok(taxonomy::signature(i)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::CardinalLabel::*;

    #[test]
    fn named_rows() {
        assert_eq!(representative(1, 3).unwrap().expr, FnExpr::Dirichlet);
        assert_eq!(representative(28, 3).unwrap().expr, FnExpr::Identity);
        assert_eq!(representative(10, 3).unwrap().expr, FnExpr::GC);
        assert_eq!(representative(11, 3).unwrap().comment, Some("Thomae function"));
        assert_eq!(representative(0, 3), Err(ZooError::BadIndex(0)));
        assert_eq!(representative(29, 3), Err(ZooError::BadIndex(29)));
        assert_eq!(representative(2, 0), Err(ZooError::BadFamilySize));
    }

    #[test]
    fn family_parameter_reaches_factors() {
        let e = representative(2, 5).unwrap().expr;
        assert_eq!(e, FnExpr::product([FnExpr::PolyFactor { n: 5, squared: false }, FnExpr::Dirichlet]));
        assert_eq!(representative(1, 5).unwrap().expr, FnExpr::Dirichlet);
    }

    #[test]
    fn declared_signatures() {
        use crate::taxonomy::BlockSignature as S;
        assert_eq!(declared_signature(1), Ok(S::new(Zero, Continuum, Zero, Continuum)));
        assert_eq!(declared_signature(25), Ok(S::new(Continuum, Zero, Continuum, Continuum)));
        assert_eq!(declared_signature(28), Ok(S::new(Continuum, Zero, Continuum, Zero)));
        assert_eq!(declared_signature(30), Err(ZooError::BadIndex(30)));
    }

    #[test]
    fn leaf_classification() {
        let cantor: Vec<usize> = (1..=28).filter(|&i| representative(i, 3).unwrap().expr.uses_cantor_set()).collect();
        assert_eq!(cantor, vec![7, 8, 9, 10, 25]);
        let big: usize = (1..=28).filter(|&i| representative(i, 3).unwrap().expr.uses_big_four()).count();
        assert_eq!(big, 18);
    }
}
