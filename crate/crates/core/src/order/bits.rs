/// Square bit matrix with one `u64`-packed row per element. Bits past `n`
/// in each row are kept zero so derived equality and hashing are exact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix { n, words, bits: vec![0; n * words] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.bits[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// `row[i] |= row[k]`
    pub fn or_row_into(&mut self, k: usize, i: usize) {
        if i == k {
            return;
        }
        let w = self.words;
        let (src, dst) = if k < i {
            let (a, b) = self.bits.split_at_mut(i * w);
            (&a[k * w..(k + 1) * w], &mut b[..w])
        } else {
            let (a, b) = self.bits.split_at_mut(k * w);
            (&b[..w], &mut a[i * w..(i + 1) * w])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= *s;
        }
    }

    /// Warshall's algorithm on bit rows.
    pub fn close_transitively(&mut self) {
        for k in 0..self.n {
            for i in 0..self.n {
                if self.get(i, k) {
                    self.or_row_into(k, i);
                }
            }
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in ones(self.row(i)) {
                t.set(j, i, true);
            }
        }
        t
    }
}

/// Indices of set bits in a packed row.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

pub(crate) fn and_any(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_and_ones() {
        let mut m = BitMatrix::new(130);
        m.set(3, 0, true);
        m.set(3, 64, true);
        m.set(3, 129, true);
        assert!(m.get(3, 129));
        assert_eq!(ones(m.row(3)).collect::<Vec<_>>(), vec![0, 64, 129]);
        m.set(3, 64, false);
        assert_eq!(ones(m.row(3)).count(), 2);
    }

    #[test]
    fn warshall_closes_a_path() {
        let mut m = BitMatrix::new(70);
        for i in 0..69 {
            m.set(i, i + 1, true);
        }
        m.close_transitively();
        assert!(m.get(0, 69));
        assert!(!m.get(69, 0));
        assert_eq!(ones(m.row(0)).count(), 69);
    }
}
