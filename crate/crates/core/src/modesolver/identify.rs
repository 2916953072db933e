use super::foxli::ModeResult;
use crate::grid::Field;

/// Overlap below which a mode is reported as unidentified. A reporting convention only.
pub const IDENTIFY_THRESHOLD: f64 = 0.80;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeId {
    /// Best-matching family member, `None` when its overlap is below [`IDENTIFY_THRESHOLD`].
    pub index: Option<usize>,
    /// Index of the largest overlap regardless of the threshold.
    pub best: usize,
    /// `|⟨field, φ_best⟩|² / (‖field‖² ‖φ_best‖²)`
    pub overlap: f64,
}

/// Matches a Fourier-plane field against a family of reference modes on the same grid.
///
/// `family[k]` is taken to be mode number `k`.
pub fn identify_mode(field_q: &Field, family: &[Field]) -> ModeId {
    let norm = field_q.norm_l2().powi(2);
    let mut best = 0;
    let mut overlap = 0.0;
    for (k, mode) in family.iter().enumerate() {
        let ov = field_q.inner(mode).norm_sqr() / (norm * mode.norm_l2().powi(2));
        if ov > overlap {
            overlap = ov;
            best = k;
        }
    }
    ModeId {
        index: (overlap >= IDENTIFY_THRESHOLD).then_some(best),
        best,
        overlap,
    }
}
/// Fills `mode_index` and `overlap_with_oracle` of a solver result.
pub fn label_mode(result: &mut ModeResult, family: &[Field]) -> ModeId {
    let id = identify_mode(&result.field_q, family);
    result.mode_index = id.index;
    result.overlap_with_oracle = id.overlap;
    id
}

