use std::cmp::Ordering;
use std::fmt;

/// A monomial in noncommuting letters `t_0, …, t_{n-1}` (0-based internally).
///
/// The empty word is the unit. Words are ordered graded-lexicographically:
/// shorter words first, then letter by letter.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn from_letters<I: IntoIterator<Item = usize>>(letters: I) -> Self {
        Word(letters.into_iter().map(|i| i as u8).collect())
    }

    /// `t_i^power`.
    pub fn power(i: usize, power: usize) -> Self {
        Word(vec![i as u8; power])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn letter_at(&self, pos: usize) -> usize {
        self.0[pos] as usize
    }

    /// Largest letter index plus one, or 0 for the unit.
    pub fn min_nvars(&self) -> usize {
        self.0.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Letters in positions `range`.
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Cyclic rotation moving the first `k` letters to the end.
    pub fn rotated(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Letters at the given (sorted) positions.
    pub fn select(&self, positions: &[usize]) -> Word {
        Word(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// 1-based letter indices, as used by the JSON interchange formats.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&l| l as usize + 1).collect()
    }

    /// All words of length exactly `len` over `nvars` letters, in lexicographic order.
    pub fn all_of_length(nvars: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * nvars);
            for w in &out {
                for i in 0..nvars {
                    let mut v = w.0.clone();
                    v.push(i as u8);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }

    /// All words of length `<= max_len`, graded-lex ordered.
    pub fn all_up_to(nvars: usize, max_len: usize) -> Vec<Word> {
        (0..=max_len)
            .flat_map(|len| Word::all_of_length(nvars, len))
            .collect()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            write!(f, "t{}", l + 1)?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let a = Word::from_letters([1]);
        let b = Word::from_letters([0, 0]);
        let c = Word::from_letters([0, 1]);
        assert!(Word::empty() < a);
        assert!(a < b);
        assert!(b < c);
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(Word::all_up_to(2, 3).len(), 1 + 2 + 4 + 8);
        assert_eq!(Word::all_of_length(3, 0), vec![Word::empty()]);
    }

    #[test]
    fn display_compresses_runs() {
        assert_eq!(Word::from_letters([0, 0, 1, 0]).to_string(), "t1^2t2t1");
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn rotation_and_reversal() {
        let w = Word::from_letters([0, 1, 2]);
        assert_eq!(w.rotated(1), Word::from_letters([1, 2, 0]));
        assert_eq!(w.reversed(), Word::from_letters([2, 1, 0]));
        assert_eq!(w.rotated(3), w);
    }
}
