//! The 28-block partition of real functions by the cardinalities of their
//! continuity and differentiability sets.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::zoo;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("block index {0} is outside 1..=28")]
    BadIndex(usize),
}

/// Cardinality classes of subsets of ℝ, plus `2^c` for block sizes.
///
/// All finite nonzero cardinalities are merged into `FiniteN`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum CardinalLabel {
    Zero,
    FiniteN,
    Aleph0,
    Continuum,
    TwoToContinuum,
}

impl CardinalLabel {
    pub fn symbol(self) -> &'static str {
        match self {
            CardinalLabel::Zero => "0",
            CardinalLabel::FiniteN => "n",
            CardinalLabel::Aleph0 => "aleph0",
            CardinalLabel::Continuum => "c",
            CardinalLabel::TwoToContinuum => "2^c",
        }
    }
}

impl fmt::Display for CardinalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

use CardinalLabel::*;

/// `(|C_f|, |C_f^c|, |D_f|, |D_f^c|)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BlockSignature {
    pub continuity: CardinalLabel,
    pub discontinuity: CardinalLabel,
    pub differentiability: CardinalLabel,
    pub non_differentiability: CardinalLabel,
}

impl BlockSignature {
    pub const fn new(c: CardinalLabel, cc: CardinalLabel, d: CardinalLabel, dc: CardinalLabel) -> Self {
        BlockSignature { continuity: c, discontinuity: cc, differentiability: d, non_differentiability: dc }
    }

    fn labels(&self) -> [CardinalLabel; 4] {
        [self.continuity, self.discontinuity, self.differentiability, self.non_differentiability]
    }
}

impl fmt::Display for BlockSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.labels();
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// The seven admissible `(|A|, |A^c|)` pairs for a partition `ℝ = A ∪ A^c`,
/// in the order used to number the blocks.
pub const SCENARIOS: [(CardinalLabel, CardinalLabel); 7] = [
    (Zero, Continuum),
    (FiniteN, Continuum),
    (Aleph0, Continuum),
    (Continuum, Continuum),
    (Continuum, Aleph0),
    (Continuum, FiniteN),
    (Continuum, Zero),
];

/// Whether a signature can belong to some real function.
///
/// One side of each partition must be uncountable, differentiability
/// points are continuity points (`|D_f| <= |C_f|`), discontinuities are
/// non-differentiability points (`|C_f^c| <= |D_f^c|`), and subsets of ℝ
/// never exceed `c`.
pub fn admissible(sig: &BlockSignature) -> bool {
    if sig.labels().contains(&TwoToContinuum) {
        return false;
    }
    let split_ok = |a: CardinalLabel, b: CardinalLabel| a == Continuum || b == Continuum;
    split_ok(sig.continuity, sig.discontinuity)
        && split_ok(sig.differentiability, sig.non_differentiability)
        && sig.differentiability <= sig.continuity
        && sig.discontinuity <= sig.non_differentiability
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub id: usize,
    /// `"i-j"`: continuity scenario `i`, differentiability scenario `j`.
    pub case_label: String,
    pub signature: BlockSignature,
    pub block_cardinality: CardinalLabel,
    pub representative: &'static str,
}

/// Representative formulas, by block id.
pub const REPRESENTATIVE_NAMES: [&str; 28] = [
    "D(x)",
    "prod_{k=1}^{n}(x-k) D(x)",
    "prod_{k=1}^{n}(x-k)^2 D(x)",
    "sin(pi x) D(x)",
    "sin(pi x) prod_{k=1}^{n}(x-k) D(x)",
    "sin^2(pi x) D(x)",
    "f_C(x)",
    "prod_{k=1}^{n}(x-1/3^k)^2 f_C(x)",
    "sin^2(pi/x) f_C(x)",
    "g_C(x)",
    "T(x)",
    "prod_{k=1}^{n}(x-k)^2 T(x)",
    "sin^2(pi x) T(x)",
    "T(x) 1_[0,1](x)",
    "sum_{n>=1} pi^n 1_{pi^n}(x)",
    "W(x) + sum_{k=1}^{n} pi^k 1_{pi^k}(x)",
    "prod_{k=1}^{n}(x-k)^2 (W(x) + sum_{k=1}^{n} pi^k 1_{pi^k}(x))",
    "sin^2(pi x) (W(x) + sum_{k=1}^{n} pi^k 1_{pi^k}(x))",
    "(W(x) + sum_{k=1}^{n} pi^-k 1_{pi^-k}(x)) 1_[0,1](x)",
    "|sin(pi x)| + sum_{k=1}^{n} pi^k 1_{pi^k}(x)",
    "sum_{k=1}^{n} pi^k 1_{pi^k}(x)",
    "W(x)",
    "prod_{k=1}^{n}(x-k)^2 W(x)",
    "sin^2(pi x) W(x)",
    "C(x)",
    "|sin(pi x)|",
    "|prod_{k=1}^{n}(x-k)|",
    "x",
];

/// Block sizes: `2^c` for the first ten blocks, `c` for the rest.
pub fn block_cardinality(i: usize) -> Result<CardinalLabel, TaxonomyError> {
    match i {
        1..=10 => Ok(TwoToContinuum),
        11..=28 => Ok(Continuum),
        _ => Err(TaxonomyError::BadIndex(i)),
    }
}

/// Result of the 7 × 7 candidate sweep.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub blocks: Vec<Block>,
    pub candidates: usize,
    pub rejected: usize,
}

/// Generates all 49 scenario pairs, keeps the admissible ones and numbers them.
pub fn enumerate() -> Enumeration {
    let mut blocks = Vec::with_capacity(28);
    let mut candidates = 0;
    let mut rejected = 0;
    for (i, &(c, cc)) in SCENARIOS.iter().enumerate() {
        for (j, &(d, dc)) in SCENARIOS.iter().enumerate() {
            candidates += 1;
            let signature = BlockSignature::new(c, cc, d, dc);
            if !admissible(&signature) {
                rejected += 1;
                continue;
            }
            let id = blocks.len() + 1;
            blocks.push(Block {
                id,
                case_label: format!("{}-{}", i + 1, j + 1),
                signature,
                block_cardinality: block_cardinality(id).expect("at most 28 admissible blocks"),
                representative: REPRESENTATIVE_NAMES[id - 1],
            });
        }
    }
    Enumeration { blocks, candidates, rejected }
}

pub fn enumerate_blocks() -> Vec<Block> {
    enumerate().blocks
}

pub fn block(i: usize) -> Result<Block, TaxonomyError> {
    if !(1..=28).contains(&i) {
        return Err(TaxonomyError::BadIndex(i));
    }
    Ok(enumerate_blocks().swap_remove(i - 1))
}

pub fn signature(i: usize) -> Result<BlockSignature, TaxonomyError> {
    block(i).map(|b| b.signature)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const CSV_HEADER: &str = "id,case,cC,cCc,cD,cDc,cardinality,representative";

/// Serializes blocks as CSV, one row per block, with a header line.
pub fn blocks_csv(blocks: &[Block]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for b in blocks {
        let s = &b.signature;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            b.id,
            b.case_label,
            s.continuity,
            s.discontinuity,
            s.differentiability,
            s.non_differentiability,
            b.block_cardinality,
            csv_field(b.representative)
        ));
    }
    out
}

/// A count out of the 28 blocks, kept unreduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockShare {
    pub count: usize,
    pub total: usize,
    pub percent: String,
}

impl BlockShare {
    fn new(count: usize, decimals: u32) -> Self {
        BlockShare { count, total: 28, percent: render_percent(count as u64, 28, decimals) }
    }

    pub fn fraction(&self) -> (usize, usize) {
        (self.count, self.total)
    }
}

/// `100·num/den` rounded half away from zero to `decimals` places, with a
/// trailing `.0…` dropped.
pub fn render_percent(num: u64, den: u64, decimals: u32) -> String {
    let scale = 10u64.pow(decimals);
    // round(100·num·scale/den), half away from zero (all inputs are non-negative)
    let twice = 2 * 100 * num * scale;
    let rounded = (twice + den) / (2 * den);
    let int = rounded / scale;
    let frac = rounded % scale;
    if decimals == 0 || frac == 0 {
        format!("{int}%")
    } else {
        format!("{int}.{frac:0width$}%", width = decimals as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub extreme_blocks: BlockShare,
    pub between_extremes: BlockShare,
    pub everywhere_continuous: BlockShare,
    pub cantor_built: BlockShare,
    pub big_four_built: BlockShare,
    pub card_2c: BlockShare,
    pub card_c: BlockShare,
}

/// Summary shares of the partition.
///
/// The Cantor-set and big-four counts are read off the representative
/// expression trees rather than stored.
pub fn stats() -> Stats {
    let blocks = enumerate_blocks();
    let continuous = blocks.iter().filter(|b| b.signature.discontinuity == Zero).count();
    let card_2c = blocks.iter().filter(|b| b.block_cardinality == TwoToContinuum).count();
    let card_c = blocks.iter().filter(|b| b.block_cardinality == Continuum).count();
    let exprs: Vec<_> =
        (1..=28).map(|i| zoo::representative(i, zoo::DEFAULT_FAMILY_N).expect("valid id").expr).collect();
    let cantor = exprs.iter().filter(|e| e.uses_cantor_set()).count();
    let big_four = exprs.iter().filter(|e| e.uses_big_four()).count();
    Stats {
        extreme_blocks: BlockShare::new(1, 1),
        between_extremes: BlockShare::new(28 - 2, 0),
        everywhere_continuous: BlockShare::new(continuous, 1),
        cantor_built: BlockShare::new(cantor, 1),
        big_four_built: BlockShare::new(big_four, 1),
        card_2c: BlockShare::new(card_2c, 1),
        card_c: BlockShare::new(card_c, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility_examples() {
        assert!(admissible(&BlockSignature::new(Zero, Continuum, Zero, Continuum)));
        assert!(admissible(&BlockSignature::new(Continuum, Zero, Zero, Continuum)));
        assert!(!admissible(&BlockSignature::new(Zero, Continuum, Continuum, Zero)));
        assert!(!admissible(&BlockSignature::new(Continuum, TwoToContinuum, Zero, Continuum)));
        assert!(!admissible(&BlockSignature::new(Aleph0, Aleph0, Zero, Continuum)));
    }

    #[test]
    fn twenty_eight_of_forty_nine() {
        let e = enumerate();
        assert_eq!(e.candidates, 49);
        assert_eq!(e.rejected, 21);
        assert_eq!(e.blocks.len(), 28);
        assert!(e.blocks.iter().all(|b| admissible(&b.signature)));
        let b11 = &e.blocks[10];
        assert_eq!(b11.case_label, "5-1");
        assert_eq!(b11.signature, BlockSignature::new(Continuum, Aleph0, Zero, Continuum));
        let b10 = &e.blocks[9];
        assert_eq!(b10.case_label, "4-4");
        assert_eq!(b10.signature, BlockSignature::new(Continuum, Continuum, Continuum, Continuum));
        assert_eq!(e.blocks[24].signature, BlockSignature::new(Continuum, Zero, Continuum, Continuum));
        assert_eq!(e.blocks[27].signature, BlockSignature::new(Continuum, Zero, Continuum, Zero));
    }

    #[test]
    fn everywhere_continuous_blocks_are_last_seven() {
        let ids: Vec<usize> =
            enumerate_blocks().into_iter().filter(|b| b.signature.discontinuity == Zero).map(|b| b.id).collect();
        assert_eq!(ids, (22..=28).collect::<Vec<_>>());
    }

    #[test]
    fn cardinalities() {
        assert_eq!(block_cardinality(1), Ok(TwoToContinuum));
        assert_eq!(block_cardinality(10), Ok(TwoToContinuum));
        assert_eq!(block_cardinality(11), Ok(Continuum));
        assert_eq!(block_cardinality(28), Ok(Continuum));
        assert_eq!(block_cardinality(0), Err(TaxonomyError::BadIndex(0)));
        assert_eq!(block_cardinality(29), Err(TaxonomyError::BadIndex(29)));
    }

    #[test]
    fn percent_rendering() {
        assert_eq!(render_percent(7, 28, 1), "25%");
        assert_eq!(render_percent(5, 28, 1), "17.9%");
        assert_eq!(render_percent(18, 28, 1), "64.3%");
        assert_eq!(render_percent(10, 28, 1), "35.7%");
        assert_eq!(render_percent(26, 28, 0), "93%");
        assert_eq!(render_percent(1, 28, 1), "3.6%");
        assert_eq!(render_percent(1, 8, 1), "12.5%");
        assert_eq!(render_percent(1, 16, 1), "6.3%");
    }

    #[test]
    fn stats_counts() {
        let s = stats();
        assert_eq!(s.everywhere_continuous.fraction(), (7, 28));
        assert_eq!(s.cantor_built.fraction(), (5, 28));
        assert_eq!(s.big_four_built.fraction(), (18, 28));
        assert_eq!(s.card_2c.fraction(), (10, 28));
        assert_eq!(s.card_c.fraction(), (18, 28));
        assert_eq!(s.between_extremes.fraction(), (26, 28));
        assert_eq!(s.between_extremes.percent, "93%");
    }
}
