/// `minmod(a, b)`: the smaller-magnitude argument when both share a sign,
/// zero otherwise.
#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Number of ghost cells on each side.
pub(crate) const GHOSTS: usize = 2;

/// Copy `interior` into `ext` with two ghost cells per side: mirror images
/// times `parity` at the origin and `outer` beyond the last cell.
pub(crate) fn extend(interior: &[f64], parity: f64, outer: f64, ext: &mut [f64]) {
    let n = interior.len();
    ext[GHOSTS..GHOSTS + n].copy_from_slice(interior);
    ext[1] = parity * interior[0];
    ext[0] = parity * interior[1];
    ext[GHOSTS + n] = outer;
    ext[GHOSTS + n + 1] = outer;
}

/// Left and right states at face `k` (between cells `k−1` and `k`) of an
/// extended array, `k = 0..=n`.
#[inline]
pub(crate) fn face_states(ext: &[f64], k: usize) -> (f64, f64) {
    // Cell k−1 sits at ext[k+1], cell k at ext[k+2].
    let i = k + 1;
    let sl = minmod(ext[i] - ext[i - 1], ext[i + 1] - ext[i]);
    let sr = minmod(ext[i + 1] - ext[i], ext[i + 2] - ext[i + 1]);
    (ext[i] + 0.5 * sl, ext[i + 1] - 0.5 * sr)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minmod_cases() {
        assert_eq!(minmod(1.0, 2.0), 1.0);
        assert_eq!(minmod(-3.0, -2.0), -2.0);
        assert_eq!(minmod(1.0, -1.0), 0.0);
        assert_eq!(minmod(0.0, 5.0), 0.0);
    }

    #[test]
    fn linear_data_reconstructed_exactly() {
        let interior: [f64; 6] = [0.5, 1.5, 2.5, 3.5, 4.5, 5.5];
        let mut ext = [0.0; 10];
        extend(&interior, -1.0, 6.5, &mut ext);
        // Odd parity continues r ↦ r through the origin.
        assert_eq!(ext[..2], [-1.5, -0.5]);
        for k in 0..=5 {
            let (l, r) = face_states(&ext, k);
            assert!((l - k as f64).abs() < 1e-15 && (r - k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn face_values_stay_between_neighbours() {
        let interior = [1.0, 1.0, 4.0, 2.0, 2.5, 0.0, 0.0];
        let mut ext = [0.0; 11];
        extend(&interior, 1.0, 0.0, &mut ext);
        for k in 0..=7 {
            let (l, r) = face_states(&ext, k);
            let (a, b) = (ext[k + 1], ext[k + 2]);
            let (lo, hi) = (a.min(b), a.max(b));
            assert!(l >= lo && l <= hi && r >= lo && r <= hi, "face {k}");
        }
    }
}
