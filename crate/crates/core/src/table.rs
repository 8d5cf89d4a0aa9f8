//! Reference `(v, k)`-MGRs for `3 ≤ k ≤ 11`, one row per listed ruler with
//! every modulus it is quoted for.

use crate::ruler::{Ruler, RulerError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub k: usize,
    pub moduli: &'static [u32],
    pub residues: &'static [u32],
}

impl TableRow {
    /// The ruler at each listed modulus.
    pub fn rulers(&self) -> Result<Vec<Ruler>, RulerError> {
        self.moduli.iter().map(|&v| Ruler::new(v, self.residues.to_vec())).collect()
    }
}

macro_rules! row {
    ($k:expr; $($v:expr),+; $($x:expr),+) => {
        TableRow { k: $k, moduli: &[$($v),+], residues: &[$($x),+] }
    };
}

pub const REFERENCE_RULERS: &[TableRow] = &[
    row!(3; 7; 0, 1, 3),
    row!(4; 13; 0, 1, 4, 6),
    row!(5; 21; 0, 2, 7, 8, 11),
    row!(6; 31; 0, 1, 4, 10, 12, 17),
    row!(7; 48; 0, 5, 7, 18, 19, 22, 28),
    row!(7; 49; 0, 2, 3, 10, 16, 21, 25),
    row!(7; 50; 0, 1, 5, 7, 15, 18, 27),
    row!(8; 57, 64, 68; 0, 4, 5, 17, 19, 25, 28, 35),
    row!(8; 63, 67; 0, 1, 8, 20, 22, 25, 31, 35),
    row!(8; 65; 0, 2, 10, 11, 16, 28, 31, 35),
    row!(8; 66; 0, 2, 10, 21, 24, 25, 30, 37),
    row!(8; 69; 0, 1, 4, 9, 15, 22, 32, 34),
    row!(9; 73; 0, 2, 10, 24, 25, 29, 36, 42, 45),
    row!(9; 80; 0, 1, 12, 16, 18, 25, 39, 44, 47),
    row!(9; 85; 0, 1, 7, 12, 21, 29, 31, 44, 47),
    row!(9; 86, 88; 0, 2, 5, 13, 17, 31, 37, 38, 47),
    row!(9; 87; 0, 1, 4, 13, 24, 30, 38, 40, 45),
    row!(9; 89; 0, 1, 5, 12, 25, 27, 35, 41, 44),
    row!(10; 91; 0, 1, 6, 10, 23, 26, 34, 41, 53, 55),
    row!(10; 107; 0, 2, 15, 21, 22, 32, 46, 50, 55, 58),
    row!(10; 108; 0, 2, 8, 27, 32, 36, 39, 49, 50, 65),
    row!(10; 109; 0, 4, 11, 16, 25, 35, 38, 53, 55, 61),
    row!(10; 110; 0, 3, 14, 16, 36, 37, 42, 46, 54, 61),
    row!(11; 120; 0, 1, 4, 9, 23, 30, 41, 43, 58, 68, 74),
    row!(11; 133; 0, 1, 9, 19, 24, 31, 52, 56, 58, 69, 72),
    row!(11; 135; 0, 5, 7, 11, 31, 41, 49, 50, 63, 66, 78),
    row!(11; 136; 0, 2, 11, 27, 37, 42, 45, 59, 65, 66, 78),
    row!(11; 137; 0, 1, 16, 21, 24, 33, 43, 61, 68, 72, 74),
    row!(11; 138; 0, 4, 5, 23, 25, 37, 52, 59, 65, 68, 76),
    row!(11; 139; 0, 1, 3, 11, 25, 41, 45, 54, 60, 72, 77),
    row!(11; 140; 0, 4, 10, 24, 25, 27, 36, 43, 65, 73, 78),
    row!(11; 141; 0, 2, 3, 7, 20, 29, 41, 52, 60, 66, 76),
    row!(11; 142; 0, 1, 13, 16, 22, 33, 47, 51, 70, 75, 77),
    row!(11; 143, 144; 0, 3, 7, 22, 27, 43, 56, 57, 66, 68, 74),
];

/// Spectra as `(k, sporadic moduli, tail start)`.
pub const SPECTRA: &[(usize, &[u32], u32)] = &[
    (3, &[], 7),
    (4, &[], 13),
    (5, &[21], 23),
    (6, &[31], 35),
    (7, &[], 48),
    (8, &[57], 63),
    (9, &[73, 80], 85),
    (10, &[91], 107),
    (11, &[120, 133], 135),
];

/// Minimal Golomb ruler lengths for `k = 3..=11`.
pub const GOLOMB_LENGTHS: &[u32] = &[3, 6, 11, 17, 25, 34, 44, 55, 72];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ruler::verify_mgr;

    #[test]
    fn reference_rulers_verify() {
        let mut n = 0;
        for row in REFERENCE_RULERS {
            assert_eq!(row.residues.len(), row.k);
            for r in row.rulers().unwrap() {
                assert!(verify_mgr(&r).valid, "{row:?}");
                n += 1;
            }
        }
        assert_eq!((REFERENCE_RULERS.len(), n), (34, 39));
    }
}
