//! Packed boolean rows used by the reachability closure and component code.

/// Square bit matrix, row-major, `words_per_row = ceil(n / 64)`.
///
/// Rows are plain `&[u64]` slices so callers can combine them with word ops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix {
            n,
            words_per_row,
            bits: vec![0u64; n * words_per_row],
        }
    }

    /// Identity matrix: bit (i, i) set for all i.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1u64 << (j % 64);
    }

    #[inline]
    pub fn clear(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] &= !(1u64 << (j % 64));
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// OR row `src` into row `dst` (`dst != src`).
    pub fn or_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let w = self.words_per_row;
        let (s, d) = (src * w, dst * w);
        for k in 0..w {
            self.bits[d + k] |= self.bits[s + k];
        }
    }

    /// Mutable access to two distinct rows at once.
    pub fn two_rows_mut(&mut self, i: usize, j: usize) -> (&mut [u64], &mut [u64]) {
        assert_ne!(i, j);
        let w = self.words_per_row;
        if i < j {
            let (lo, hi) = self.bits.split_at_mut(j * w);
            (&mut lo[i * w..(i + 1) * w], &mut hi[..w])
        } else {
            let (lo, hi) = self.bits.split_at_mut(i * w);
            let (a, b) = (&mut hi[..w], &mut lo[j * w..(j + 1) * w]);
            (a, b)
        }
    }

    /// Number of set bits in column `j` (how many rows contain `j`).
    pub fn column_count(&self, j: usize) -> usize {
        let (word, bit) = (j / 64, j % 64);
        (0..self.n)
            .filter(|&i| self.bits[i * self.words_per_row + word] >> bit & 1 == 1)
            .count()
    }

    /// All column counts at once; `out[j]` = number of rows whose bit `j` is set.
    pub fn column_counts(&self) -> Vec<usize> {
        let mut out = vec![0usize; self.n];
        for i in 0..self.n {
            let row = self.row(i);
            for (w, &word) in row.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    out[w * 64 + b] += 1;
                    word &= word - 1;
                }
            }
        }
        out
    }

    /// Transposed copy. O(n^2) bit walk, fine for the sizes used here.
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            let row = self.row(i);
            for (w, &word) in row.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    t.set(w * 64 + b, i);
                    word &= word - 1;
                }
            }
        }
        t
    }

    /// True iff every bit in rows `0..n` restricted to columns `0..n` is set.
    pub fn is_all_set(&self) -> bool {
        (0..self.n).all(|i| self.row_count(i) == self.n)
    }
}

/// Iterate set bit positions of a packed row.
pub fn iter_bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        std::iter::successors(
            if word == 0 { None } else { Some(word) },
            |&m| {
                let m = m & (m - 1);
                if m == 0 {
                    None
                } else {
                    Some(m)
                }
            },
        )
        .map(move |m| w * 64 + m.trailing_zeros() as usize)
    })
}

/// Count of set bits in `row`.
pub fn count_bits(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub fn test_bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

#[inline]
pub fn set_bit(row: &mut [u64], j: usize) {
    row[j / 64] |= 1u64 << (j % 64);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_roundtrip() {
        let mut m = BitMatrix::new(130);
        m.set(0, 0);
        m.set(129, 129);
        m.set(5, 64);
        assert!(m.get(0, 0));
        assert!(m.get(129, 129));
        assert!(m.get(5, 64));
        assert!(!m.get(5, 65));
        m.clear(5, 64);
        assert!(!m.get(5, 64));
    }

    #[test]
    fn column_counts_match_naive() {
        let mut m = BitMatrix::new(70);
        for i in 0..70 {
            for j in 0..70 {
                if (i * 31 + j * 17) % 5 == 0 {
                    m.set(i, j);
                }
            }
        }
        let counts = m.column_counts();
        for j in 0..70 {
            assert_eq!(counts[j], m.column_count(j), "column {j}");
        }
        let t = m.transpose();
        for i in 0..70 {
            for j in 0..70 {
                assert_eq!(m.get(i, j), t.get(j, i));
            }
        }
    }

    #[test]
    fn iter_bits_enumerates_in_order() {
        let mut m = BitMatrix::new(200);
        let want = [0usize, 1, 63, 64, 65, 127, 128, 199];
        for &j in &want {
            m.set(3, j);
        }
        let got: Vec<usize> = iter_bits(m.row(3)).collect();
        assert_eq!(got, want);
        assert_eq!(count_bits(m.row(3)), want.len());
    }
}
