//! Segmentations of a positive integer: ways to write `m = Σ cᵢ·mᵢ` with
//! positive counts `cᵢ` and strictly increasing positive values `mᵢ`.

/// A segmentation `(c̄, m̄)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Segmentation {
    /// Positive counts `c̄`.
    pub counts: Vec<u64>,
    /// Strictly increasing positive values `m̄`.
    pub values: Vec<u64>,
}

impl Segmentation {
    /// The degree `d`.
    pub fn degree(&self) -> usize {
        self.values.len()
    }

    /// The size `Σ cᵢ`.
    pub fn size(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The segmented number `Σ cᵢ·mᵢ`.
    pub fn total(&self) -> u64 {
        self.counts.iter().zip(&self.values).map(|(c, m)| c * m).sum()
    }
}

/// All segmentations of `m ≥ 1`, ordered by their value lists and counts.
/// Returns an empty list for `m = 0`.
pub fn enumerate_segmentations(m: u64) -> Vec<Segmentation> {
    let mut out = Vec::new();
    let mut counts = Vec::new();
    let mut values = Vec::new();
    extend(m, 1, &mut counts, &mut values, &mut out);
    out
}

fn extend(rest: u64, min_value: u64, counts: &mut Vec<u64>, values: &mut Vec<u64>, out: &mut Vec<Segmentation>) {
    if rest == 0 {
        if !values.is_empty() {
            out.push(Segmentation { counts: counts.clone(), values: values.clone() });
        }
        return;
    }
    for v in min_value..=rest {
        for c in 1..=rest / v {
            counts.push(c);
            values.push(v);
            extend(rest - c * v, v + 1, counts, values, out);
            counts.pop();
            values.pop();
        }
    }
}
