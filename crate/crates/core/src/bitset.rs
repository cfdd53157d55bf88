//! Fixed-length occupancy bitsets with word-parallel range and popcount kernels.

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Bits {
    words: Vec<u64>,
    len: usize,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    /// Sets bits `lo..hi`.
    pub fn set_range(&mut self, lo: usize, hi: usize) {
        debug_assert!(lo <= hi && hi <= self.len);
        if lo >= hi {
            return;
        }
        let (wl, bl) = (lo / WORD, lo % WORD);
        let (wh, bh) = (hi / WORD, hi % WORD);
        if wl == wh {
            self.words[wl] |= mask(bl, bh);
            return;
        }
        self.words[wl] |= !0u64 << bl;
        for w in &mut self.words[wl + 1..wh] {
            *w = !0;
        }
        if bh > 0 {
            self.words[wh] |= mask(0, bh);
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Popcount of `self & other`; both bitsets must share the same frame.
    pub fn and_count(&self, other: &Bits) -> u64 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    /// `self |= src << shift`, bits falling past the end are dropped.
    pub fn or_shifted(&mut self, src: &Bits, shift: usize) {
        let ws = shift / WORD;
        let bs = shift % WORD;
        let n = self.words.len();
        for (i, &w) in src.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let j = i + ws;
            if j >= n {
                break;
            }
            self.words[j] |= w << bs;
            if bs > 0 && j + 1 < n {
                self.words[j + 1] |= w >> (WORD - bs);
            }
        }
        self.clear_tail();
    }

    /// Bit `i` of the result is bit `len - 1 - i` of `self`.
    pub fn reversed(&self) -> Bits {
        let mut out = Bits::zeros(self.len);
        for i in self.ones() {
            out.set(self.len - 1 - i);
        }
        out
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    /// Maximal runs of set bits as half-open `(start, end)` pairs.
    pub fn runs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut start: Option<usize> = None;
        let mut prev = 0usize;
        for i in self.ones() {
            match start {
                Some(_) if i == prev + 1 => {}
                Some(s) => {
                    out.push((s, prev + 1));
                    start = Some(i);
                }
                None => start = Some(i),
            }
            prev = i;
        }
        if let Some(s) = start {
            out.push((s, prev + 1));
        }
        out
    }

    fn clear_tail(&mut self) {
        let tail = self.len % WORD;
        if tail > 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= mask(0, tail);
            }
        }
    }
}

#[inline]
fn mask(lo: usize, hi: usize) -> u64 {
    debug_assert!(lo < hi && hi <= WORD);
    let upper = if hi == WORD { !0u64 } else { (1u64 << hi) - 1 };
    upper & (!0u64 << lo)
}
