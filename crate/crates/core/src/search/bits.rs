//! Fixed-width bitsets used by the backtracking engine.

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) struct Bits<const W: usize>(pub [u64; W]);

impl<const W: usize> Bits<W> {
    pub const EMPTY: Self = Bits([0; W]);

    #[inline]
    pub fn set(&mut self, i: u32) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[cfg(test)]
    pub fn get(&self, i: u32) -> bool {
        self.0[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    /// `self |= src << s`, truncated to the capacity.
    #[inline]
    pub fn or_shl(&mut self, src: &Self, s: u32) {
        let (ws, bs) = ((s >> 6) as usize, s & 63);
        if ws >= W {
            return;
        }
        if bs == 0 {
            for i in ws..W {
                self.0[i] |= src.0[i - ws];
            }
        } else {
            self.0[ws] |= src.0[0] << bs;
            for i in ws + 1..W {
                self.0[i] |= src.0[i - ws] << bs | src.0[i - ws - 1] >> (64 - bs);
            }
        }
    }

    /// Sum of the `m` smallest indices in `[from, limit)` not in `self`,
    /// or `None` if fewer than `m` exist.
    pub fn sum_smallest_clear(&self, from: u32, limit: u32, m: usize) -> Option<u32> {
        if m == 0 {
            return Some(0);
        }
        let mut left = m;
        let mut sum = 0u32;
        let mut w = (from >> 6) as usize;
        let mut word = !self.0.get(w).copied().unwrap_or(0) & (!0u64 << (from & 63));
        loop {
            while word != 0 {
                let i = (w as u32) << 6 | word.trailing_zeros();
                if i >= limit {
                    return None;
                }
                sum += i;
                left -= 1;
                if left == 0 {
                    return Some(sum);
                }
                word &= word - 1;
            }
            w += 1;
            if w >= W || (w as u32) << 6 >= limit {
                return None;
            }
            word = !self.0[w];
        }
    }

    /// Calls `f` on every index in `[lo, hi]` not in `self`, in increasing
    /// order, until `f` returns `false`.
    #[inline]
    pub fn for_each_clear(&self, lo: u32, hi: u32, mut f: impl FnMut(u32) -> bool) {
        if lo > hi {
            return;
        }
        let (wl, wh) = ((lo >> 6) as usize, (hi >> 6) as usize);
        for w in wl..=wh {
            let mut word = !self.0[w];
            if w == wl {
                word &= !0u64 << (lo & 63);
            }
            if w == wh {
                word &= !0u64 >> (63 - (hi & 63));
            }
            while word != 0 {
                let i = (w as u32) << 6 | word.trailing_zeros();
                if !f(i) {
                    return;
                }
                word &= word - 1;
            }
        }
    }
}
