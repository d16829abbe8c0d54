//! The steering functional `S`, its index-pattern decomposition and bounds.
//!
//! For an assemblage measured in the bases of an MUB family and Bob's coherence
//! taken in the same family,
//!
//! ```text
//! S_pattern = Σ_{(i,j,k) ∈ pattern} Σ_{a,b} p(a|i) p(b|j) C_k(ρ'_{a|i}) C_k(ρ'_{b|j})
//! ```
//!
//! The inner sum factorizes as `X[i][k] · X[j][k]` with
//! `X[i][k] = Σ_a p(a|i) C_k(ρ'_{a|i})`, which is how it is evaluated here.
//! Outcomes with `p(a|i) < 1e-12` contribute nothing.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::assemblage::Assemblage;
use crate::coherence::{coherence, CoherenceMeasure, MeasureKind, OmegaBound};
use crate::error::{Error, Result};
use crate::mub::MubFamily;
use crate::qmatrix::DensityMatrix;

/// Constraint on the basis triple `(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexPattern {
    /// `i ≠ j ≠ k`, pairwise distinct: the NAQC functional itself.
    Distinct,
    /// `i = j`, `k` free (including `k = i`).
    SameSetting,
    /// `i ≠ j = k`.
    JEqualsK,
    /// `i = k ≠ j`.
    IEqualsK,
    /// All triples.
    Full,
}

impl IndexPattern {
    /// The four disjoint patterns whose sum is [`IndexPattern::Full`].
    pub const PARTITION: [IndexPattern; 4] = [
        IndexPattern::SameSetting,
        IndexPattern::IEqualsK,
        IndexPattern::JEqualsK,
        IndexPattern::Distinct,
    ];

    pub fn contains(self, i: usize, j: usize, k: usize) -> bool {
        match self {
            IndexPattern::Distinct => i != j && j != k && i != k,
            IndexPattern::SameSetting => i == j,
            IndexPattern::JEqualsK => i != j && j == k,
            IndexPattern::IEqualsK => i == k && i != j,
            IndexPattern::Full => true,
        }
    }

    /// Key used in JSON reports.
    pub fn key(self) -> &'static str {
        match self {
            IndexPattern::Distinct => "i!=j!=k",
            IndexPattern::SameSetting => "i=j,k",
            IndexPattern::JEqualsK => "i!=j=k",
            IndexPattern::IEqualsK => "i=k!=j",
            IndexPattern::Full => "full",
        }
    }

    /// Command-line spelling.
    pub fn cli_name(self) -> &'static str {
        match self {
            IndexPattern::Distinct => "distinct",
            IndexPattern::SameSetting => "same-setting",
            IndexPattern::JEqualsK => "j-eq-k",
            IndexPattern::IEqualsK => "i-eq-k",
            IndexPattern::Full => "full",
        }
    }
}

impl fmt::Display for IndexPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for IndexPattern {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            IndexPattern::Distinct,
            IndexPattern::SameSetting,
            IndexPattern::JEqualsK,
            IndexPattern::IEqualsK,
            IndexPattern::Full,
        ]
        .into_iter()
        .find(|p| p.cli_name() == s || p.key() == s)
        .ok_or_else(|| {
            Error::InvalidArgument(format!(
                "unknown pattern {s:?}; expected distinct, same-setting, j-eq-k, i-eq-k or full"
            ))
        })
    }
}

fn check_shapes(asm: &Assemblage, fam: &MubFamily) -> Result<()> {
    let d = fam.dim();
    if asm.dim() != d {
        return Err(Error::Dimension(format!(
            "assemblage dimension {} vs family dimension {d}",
            asm.dim()
        )));
    }
    if fam.len() != d + 1 {
        return Err(Error::InvalidArgument(format!(
            "S needs a complete family of {} bases, got {}",
            d + 1,
            fam.len()
        )));
    }
    if asm.settings() != fam.len() {
        return Err(Error::InvalidArgument(format!(
            "assemblage has {} settings for {} bases",
            asm.settings(),
            fam.len()
        )));
    }
    Ok(())
}

/// `X[i][k] = Σ_a p(a|i) C_k(ρ'_{a|i})`.
pub fn average_coherence_table(
    asm: &Assemblage,
    fam: &MubFamily,
    measure: CoherenceMeasure,
) -> Result<Vec<Vec<f64>>> {
    check_shapes(asm, fam)?;
    let n = fam.len();
    let mut table = vec![vec![0.0; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        for a in 0..asm.outcomes() {
            let Some(state) = asm.conditional_state(i, a) else {
                continue;
            };
            let p = asm.prob(i, a);
            for (k, cell) in row.iter_mut().enumerate() {
                *cell += p * coherence(&state, fam.basis(k), measure)?;
            }
        }
    }
    Ok(table)
}

fn pattern_sum(table: &[Vec<f64>], pattern: IndexPattern, only_k: Option<usize>) -> f64 {
    let n = table.len();
    let mut s = 0.0;
    for k in 0..n {
        if only_k.is_some_and(|t| t != k) {
            continue;
        }
        for i in 0..n {
            for j in 0..n {
                if pattern.contains(i, j, k) {
                    s += table[i][k] * table[j][k];
                }
            }
        }
    }
    s
}

/// `S` restricted to `pattern`.
pub fn s_quantity(
    asm: &Assemblage,
    bob_fam: &MubFamily,
    measure: CoherenceMeasure,
    pattern: IndexPattern,
) -> Result<f64> {
    let table = average_coherence_table(asm, bob_fam, measure)?;
    Ok(pattern_sum(&table, pattern, None))
}

/// The contribution of coherence basis `k` alone to `S_pattern`.
pub fn s_term(
    asm: &Assemblage,
    bob_fam: &MubFamily,
    measure: CoherenceMeasure,
    pattern: IndexPattern,
    k: usize,
) -> Result<f64> {
    if k >= bob_fam.len() {
        return Err(Error::InvalidArgument(format!("no basis {k} in the family")));
    }
    let table = average_coherence_table(asm, bob_fam, measure)?;
    Ok(pattern_sum(&table, pattern, Some(k)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lhs,
    Sqi1,
    Quantum,
    FullPattern,
    Pattern(IndexPattern),
}

/// Bound on `S` (or on one pattern) for the model class `kind`.
///
/// With `Ω` from [`OmegaBound`]: LHS `d(d−1)Ω`, 1SQI `(d²−1)Ω`, pattern
/// bounds `(d+1)Ω` for `i=j,k`, `dΩ` for `i≠j=k` and `i=k≠j`, `d(d−1)Ω`
/// for `i≠j≠k`, `(d+1)²Ω` for the full sum. For qubits these are 4, 6, 6,
/// 4, 4, 4 and 18. The quantum ceiling counts triples (`C ≤ 1`):
/// `(d+1)d(d−1)`, i.e. 6 for qubits.
pub fn bound(kind: BoundKind, d: usize, measure: CoherenceMeasure) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} too small")));
    }
    if d > 2 && measure.kind == MeasureKind::RelativeEntropy {
        return Err(Error::NotEstablished(format!(
            "no bound for the relative entropy of coherence in dimension {d}"
        )));
    }
    let omega = OmegaBound::new(measure, d)?.value;
    let df = d as f64;
    Ok(match kind {
        BoundKind::Lhs | BoundKind::Pattern(IndexPattern::Distinct) => df * (df - 1.0) * omega,
        BoundKind::Sqi1 => (df * df - 1.0) * omega,
        BoundKind::Quantum => (df + 1.0) * df * (df - 1.0),
        BoundKind::FullPattern | BoundKind::Pattern(IndexPattern::Full) => {
            (df + 1.0) * (df + 1.0) * omega
        }
        BoundKind::Pattern(IndexPattern::SameSetting) => (df + 1.0) * omega,
        BoundKind::Pattern(IndexPattern::JEqualsK | IndexPattern::IEqualsK) => df * omega,
    })
}

/// Values of the five index patterns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternValues {
    pub distinct: f64,
    pub same_setting: f64,
    pub j_equals_k: f64,
    pub i_equals_k: f64,
    pub full: f64,
}

impl PatternValues {
    pub fn get(&self, pattern: IndexPattern) -> f64 {
        match pattern {
            IndexPattern::Distinct => self.distinct,
            IndexPattern::SameSetting => self.same_setting,
            IndexPattern::JEqualsK => self.j_equals_k,
            IndexPattern::IEqualsK => self.i_equals_k,
            IndexPattern::Full => self.full,
        }
    }

    /// Sum of the four disjoint patterns.
    pub fn partition_sum(&self) -> f64 {
        IndexPattern::PARTITION.iter().map(|&p| self.get(p)).sum()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            distinct: f(self.distinct),
            same_setting: f(self.same_setting),
            j_equals_k: f(self.j_equals_k),
            i_equals_k: f(self.i_equals_k),
            full: f(self.full),
        }
    }
}

impl Serialize for PatternValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(5))?;
        for p in [
            IndexPattern::Distinct,
            IndexPattern::SameSetting,
            IndexPattern::JEqualsK,
            IndexPattern::IEqualsK,
            IndexPattern::Full,
        ] {
            m.serialize_entry(p.key(), &self.get(p))?;
        }
        m.end()
    }
}

/// Applicable bounds; `None` where no bound is established.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lhs: Option<f64>,
    pub sqi: Option<f64>,
    pub quantum: Option<f64>,
    pub full_pattern: Option<f64>,
}

impl Bounds {
    pub fn for_measure(d: usize, measure: CoherenceMeasure) -> Self {
        Self {
            lhs: bound(BoundKind::Lhs, d, measure).ok(),
            sqi: bound(BoundKind::Sqi1, d, measure).ok(),
            quantum: bound(BoundKind::Quantum, d, measure).ok(),
            full_pattern: bound(BoundKind::FullPattern, d, measure).ok(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NaqcReport {
    pub s_value: f64,
    pub patterns: PatternValues,
    pub bounds: Bounds,
    pub measure: CoherenceMeasure,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angles: Option<Angles>,
}

pub fn s_report(
    asm: &Assemblage,
    bob_fam: &MubFamily,
    measure: CoherenceMeasure,
) -> Result<NaqcReport> {
    let table = average_coherence_table(asm, bob_fam, measure)?;
    let at = |p| pattern_sum(&table, p, None);
    let patterns = PatternValues {
        distinct: at(IndexPattern::Distinct),
        same_setting: at(IndexPattern::SameSetting),
        j_equals_k: at(IndexPattern::JEqualsK),
        i_equals_k: at(IndexPattern::IEqualsK),
        full: at(IndexPattern::Full),
    };
    Ok(NaqcReport {
        s_value: patterns.distinct,
        patterns,
        bounds: Bounds::for_measure(bob_fam.dim(), measure),
        measure,
        dim: bob_fam.dim(),
        angles: None,
    })
}

/// Born probabilities `p(a|i) = ⟨e_{i,a}|ρ|e_{i,a}⟩` for every basis of `fam`.
pub fn born_probabilities(rho: &DensityMatrix, fam: &MubFamily) -> Result<Vec<Vec<f64>>> {
    if rho.dim() != fam.dim() {
        return Err(Error::Dimension(format!(
            "state dimension {} vs family dimension {}",
            rho.dim(),
            fam.dim()
        )));
    }
    Ok(fam
        .bases()
        .iter()
        .map(|b| {
            b.vectors()
                .iter()
                .map(|v| rho.matrix().sandwich(v, v).re)
                .collect()
        })
        .collect())
}

/// `Σ_a Σ_{i≠k} p(a|i)²` for one hidden value's response table `responses[i][a]`.
pub fn f_sum(responses: &[Vec<f64>], k: usize) -> f64 {
    responses
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != k)
        .flat_map(|(_, dist)| dist.iter().map(|p| p * p))
        .sum()
}

/// `(d + 1)/2`; `3/2` for qubits.
pub fn f_sum_bound(d: usize) -> f64 {
    (d as f64 + 1.0) / 2.0
}
