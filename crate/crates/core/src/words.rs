//! Finite windows of pointed biinfinite words.
//!
//! All statistics are window-relative: a complexity profile computed here is
//! a lower bound for the complexity of the infinite word the window was cut
//! from, and [`metric_distance`] only sees the letters both windows define.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qfield::Rational;

/// A letter is its index in the alphabet: `A,B,C -> 0,1,2`, `0,1 -> 0,1`.
pub type Letter = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("factor length {n} exceeds window length {len}")]
    WindowTooShort { n: usize, len: usize },
    #[error("alphabet mismatch: expected {expected}, found {found}")]
    AlphabetMismatch { expected: Alphabet, found: Alphabet },
    #[error("empty word")]
    EmptyWord,
    #[error("language has no factor set of length {0}")]
    IncompleteLanguage(usize),
    #[error("cannot parse word: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Alphabet {
    /// `{0, 1}`
    Binary,
    /// `{A, B, C}`
    Ternary,
}

impl Alphabet {
    pub fn size(self) -> usize {
        match self {
            Alphabet::Binary => 2,
            Alphabet::Ternary => 3,
        }
    }

    pub fn symbol(self, l: Letter) -> char {
        match self {
            Alphabet::Binary => (b'0' + l) as char,
            Alphabet::Ternary => (b'A' + l) as char,
        }
    }

    pub fn letter(self, c: char) -> Option<Letter> {
        let l = match self {
            Alphabet::Binary => (c as u32).checked_sub('0' as u32)?,
            Alphabet::Ternary => (c as u32).checked_sub('A' as u32)?,
        };
        ((l as usize) < self.size()).then_some(l as Letter)
    }

    /// Alphabet a symbol belongs to.
    pub fn of_symbol(c: char) -> Option<Alphabet> {
        match c {
            '0' | '1' => Some(Alphabet::Binary),
            'A' | 'B' | 'C' => Some(Alphabet::Ternary),
            _ => None,
        }
    }

    pub fn render(self, w: &[Letter]) -> String {
        w.iter().map(|&l| self.symbol(l)).collect()
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        0..self.size() as Letter
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Binary => write!(f, "{{0,1}}"),
            Alphabet::Ternary => write!(f, "{{A,B,C}}"),
        }
    }
}

/// Window `u_lo ... u_-1 | u_0 ... u_hi` of a pointed biinfinite word.
///
/// Letters are stored left to right; `origin` is the storage index of `u_0`
/// (equal to the length when the right part is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointedWord {
    alphabet: Alphabet,
    letters: Vec<Letter>,
    origin: usize,
}

impl PointedWord {
    pub fn new(alphabet: Alphabet, letters: Vec<Letter>, origin: usize) -> Self {
        assert!(origin <= letters.len(), "origin outside window");
        debug_assert!(letters.iter().all(|&l| (l as usize) < alphabet.size()));
        Self { alphabet, letters, origin }
    }

    /// Builds from the left part stored nearest-to-center first
    /// (`u_-1, u_-2, ...`) and the right part `u_0, u_1, ...`.
    pub fn from_parts(alphabet: Alphabet, left_nearest_first: &[Letter], right: &[Letter]) -> Self {
        let mut letters: Vec<Letter> = left_nearest_first.iter().rev().copied().collect();
        let origin = letters.len();
        letters.extend_from_slice(right);
        Self::new(alphabet, letters, origin)
    }

    /// One-sided word starting at index 0.
    pub fn right_only(alphabet: Alphabet, letters: Vec<Letter>) -> Self {
        Self::new(alphabet, letters, 0)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `u_-1, u_-2, ...`
    pub fn left(&self) -> impl Iterator<Item = Letter> + '_ {
        self.letters[..self.origin].iter().rev().copied()
    }

    /// `u_0, u_1, ...`
    pub fn right(&self) -> &[Letter] {
        &self.letters[self.origin..]
    }

    /// Smallest defined index (`-len(left)`).
    pub fn lo(&self) -> i64 {
        -(self.origin as i64)
    }

    /// One past the largest defined index.
    pub fn hi(&self) -> i64 {
        (self.letters.len() - self.origin) as i64
    }

    pub fn get(&self, i: i64) -> Option<Letter> {
        let pos = i + self.origin as i64;
        (pos >= 0).then(|| self.letters.get(pos as usize).copied()).flatten()
    }

    /// Restriction to indices `lo..hi` (clamped to the window).
    pub fn slice(&self, lo: i64, hi: i64) -> PointedWord {
        let lo = lo.max(self.lo());
        let hi = hi.min(self.hi()).max(lo);
        let a = (lo + self.origin as i64) as usize;
        let b = (hi + self.origin as i64) as usize;
        let origin = (self.origin as i64 - a as i64).clamp(0, (b - a) as i64) as usize;
        PointedWord::new(self.alphabet, self.letters[a..b].to_vec(), origin)
    }

    pub fn count(&self, l: Letter) -> usize {
        self.letters.iter().filter(|&&x| x == l).count()
    }

    /// Letter counts indexed by letter.
    pub fn parikh(&self) -> Vec<usize> {
        let mut c = vec![0; self.alphabet.size()];
        for &l in &self.letters {
            c[l as usize] += 1;
        }
        c
    }
}

impl fmt::Display for PointedWord {
    /// `LEFT|RIGHT`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}|{}",
            self.alphabet.render(&self.letters[..self.origin]),
            self.alphabet.render(&self.letters[self.origin..])
        )
    }
}

impl FromStr for PointedWord {
    type Err = WordError;

    /// Parses `LEFT|RIGHT`; a word without `|` is pointed at its first letter.
    /// The alphabet is inferred from the first symbol (ternary when empty).
    fn from_str(s: &str) -> Result<Self, WordError> {
        let s = s.trim();
        let alphabet = s
            .chars()
            .find(|&c| c != '|')
            .map(|c| Alphabet::of_symbol(c).ok_or_else(|| WordError::Parse(format!("unknown symbol {c:?}"))))
            .transpose()?
            .unwrap_or(Alphabet::Ternary);
        let (left, right) = match s.split_once('|') {
            Some((l, r)) => (l, r),
            None => ("", s),
        };
        let decode = |part: &str| -> Result<Vec<Letter>, WordError> {
            part.chars()
                .map(|c| {
                    alphabet
                        .letter(c)
                        .ok_or_else(|| WordError::Parse(format!("symbol {c:?} not in {alphabet}")))
                })
                .collect()
        };
        let mut letters = decode(left)?;
        let origin = letters.len();
        letters.extend(decode(right)?);
        Ok(PointedWord::new(alphabet, letters, origin))
    }
}

/// All factors of one length seen in a window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorSet {
    pub alphabet: Alphabet,
    pub len: usize,
    pub factors: BTreeSet<Vec<Letter>>,
}

impl FactorSet {
    pub fn contains(&self, w: &[Letter]) -> bool {
        self.factors.contains(w)
    }

    pub fn size(&self) -> usize {
        self.factors.len()
    }

    /// Sorted, newline-delimited.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for w in &self.factors {
            out.push_str(&self.alphabet.render(w));
            out.push('\n');
        }
        out
    }
}

/// Length-`n` factors of the window, including those crossing the center.
pub fn factors(w: &PointedWord, n: usize) -> Result<FactorSet, WordError> {
    if n > w.len() {
        return Err(WordError::WindowTooShort { n, len: w.len() });
    }
    let factors = if n == 0 {
        std::iter::once(Vec::new()).collect()
    } else {
        w.letters.windows(n).map(<[Letter]>::to_vec).collect()
    };
    Ok(FactorSet { alphabet: w.alphabet, len: n, factors })
}

fn count_distinct(letters: &[Letter], n: usize) -> usize {
    letters.windows(n).collect::<HashSet<&[Letter]>>().len()
}

/// `[C(1), ..., C(n_max)]` of the window.
pub fn complexity_profile(w: &PointedWord, n_max: usize) -> Result<Vec<usize>, WordError> {
    if n_max > w.len() {
        return Err(WordError::WindowTooShort { n: n_max, len: w.len() });
    }
    Ok((1..=n_max).into_par_iter().map(|n| count_distinct(&w.letters, n)).collect())
}

/// CSV rendering of a complexity profile: `n,complexity`.
pub fn complexity_csv(profile: &[usize]) -> String {
    let mut out = String::from("n,complexity\n");
    for (i, c) in profile.iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, c));
    }
    out
}

/// Largest `| |v|_0 - |v'|_0 |` over equal-length factor pairs, `n <= n_max`.
pub fn balance_defect(w: &PointedWord, n_max: usize) -> Result<usize, WordError> {
    if w.alphabet != Alphabet::Binary {
        return Err(WordError::AlphabetMismatch { expected: Alphabet::Binary, found: w.alphabet });
    }
    let letters = &w.letters;
    let mut worst = 0;
    for n in 1..=n_max.min(letters.len()) {
        let mut zeros = letters[..n].iter().filter(|&&l| l == 0).count();
        let (mut lo, mut hi) = (zeros, zeros);
        for i in n..letters.len() {
            zeros += (letters[i] == 0) as usize;
            zeros -= (letters[i - n] == 0) as usize;
            lo = lo.min(zeros);
            hi = hi.max(zeros);
        }
        worst = worst.max(hi - lo);
    }
    Ok(worst)
}

/// Letter frequencies over the window; they sum to exactly 1.
pub fn empirical_densities(w: &PointedWord) -> Result<Vec<Rational>, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let total = BigInt::from(w.len());
    Ok(w.parikh()
        .into_iter()
        .map(|c| Rational::new(BigInt::from(c), total.clone()))
        .collect())
}

/// `1/(1+j)` for the least `j` with `u_j != v_j` or `u_-j != v_-j`, looking
/// only at indices both windows define; `0` when they agree there.
pub fn metric_distance(u: &PointedWord, v: &PointedWord) -> Rational {
    let reach = (-u.lo()).max(u.hi()).max(-v.lo()).max(v.hi());
    let differs = |i: i64| match (u.get(i), v.get(i)) {
        (Some(a), Some(b)) => u.alphabet.symbol(a) != v.alphabet.symbol(b),
        _ => false,
    };
    for j in 0..=reach {
        if differs(j) || differs(-j) {
            return Rational::new(BigInt::from(1), BigInt::from(j + 1));
        }
    }
    Rational::from_integer(BigInt::from(0))
}

/// Factor sets for lengths `1..=n_max`, typically from one long window.
#[derive(Debug, Clone)]
pub struct Language {
    pub alphabet: Alphabet,
    sets: Vec<HashSet<Vec<Letter>>>,
}

impl Language {
    pub fn from_word(w: &PointedWord, n_max: usize) -> Result<Self, WordError> {
        if n_max > w.len() {
            return Err(WordError::WindowTooShort { n: n_max, len: w.len() });
        }
        let sets = (1..=n_max)
            .into_par_iter()
            .map(|n| w.letters.windows(n).map(<[Letter]>::to_vec).collect())
            .collect();
        Ok(Self { alphabet: w.alphabet, sets })
    }

    pub fn from_factor_sets(alphabet: Alphabet, sets: &[FactorSet]) -> Self {
        let max = sets.iter().map(|s| s.len).max().unwrap_or(0);
        let mut out = vec![HashSet::new(); max];
        for s in sets.iter().filter(|s| s.len > 0) {
            out[s.len - 1].extend(s.factors.iter().cloned());
        }
        Self { alphabet, sets: out }
    }

    pub fn max_len(&self) -> usize {
        self.sets.len()
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        match w.len() {
            0 => true,
            n => self.sets.get(n - 1).is_some_and(|s| s.contains(w)),
        }
    }

    pub fn count(&self, n: usize) -> usize {
        self.sets.get(n.wrapping_sub(1)).map_or(0, HashSet::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetCheck {
    pub contained: bool,
    /// Shortest, then leftmost, factor of the word missing from the language.
    pub witness: Option<String>,
}

/// Whether every factor of `w` of length `<= n_max` lies in `lang`.
pub fn is_factor_subset(w: &PointedWord, lang: &Language, n_max: usize) -> Result<SubsetCheck, WordError> {
    if n_max > lang.max_len() {
        return Err(WordError::IncompleteLanguage(lang.max_len() + 1));
    }
    if w.alphabet != lang.alphabet {
        let witness = w.letters.first().map(|&l| w.alphabet.symbol(l).to_string());
        return Ok(SubsetCheck { contained: witness.is_none(), witness });
    }
    for n in 1..=n_max.min(w.len()) {
        if let Some(bad) = w.letters.windows(n).find(|f| !lang.contains(f)) {
            return Ok(SubsetCheck { contained: false, witness: Some(w.alphabet.render(bad)) });
        }
    }
    Ok(SubsetCheck { contained: true, witness: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pw(s: &str) -> PointedWord {
        s.parse().unwrap()
    }

    fn texts(f: &FactorSet) -> Vec<String> {
        f.factors.iter().map(|w| f.alphabet.render(w)).collect()
    }

    #[test]
    fn parse_and_display() {
        let w = pw("CAB|ACBAC");
        assert_eq!(w.to_string(), "CAB|ACBAC");
        assert_eq!(w.get(0), Some(0));
        assert_eq!(w.get(-1), Some(1));
        assert_eq!(w.get(-3), Some(2));
        assert_eq!(w.get(-4), None);
        assert_eq!(w.left().collect::<Vec<_>>(), vec![1, 0, 2]);
        assert!("AB|D".parse::<PointedWord>().is_err());
    }

    #[test]
    fn factor_examples() {
        assert_eq!(texts(&factors(&pw("01|010"), 2).unwrap()), vec!["01", "10"]);
        let f0 = factors(&pw("AB|C"), 0).unwrap();
        assert_eq!(f0.size(), 1);
        assert!(f0.contains(&[]));
        assert_eq!(
            factors(&pw("A|B"), 3),
            Err(WordError::WindowTooShort { n: 3, len: 2 })
        );
    }

    #[test]
    fn fibonacci_prefix_has_five_factors_of_length_four() {
        // 0 -> 01, 1 -> 0, iterated past 50 letters.
        let mut w = vec![0u8];
        while w.len() < 50 {
            w = w.iter().flat_map(|&l| if l == 0 { vec![0, 1] } else { vec![0] }).collect();
        }
        w.truncate(50);
        let word = PointedWord::right_only(Alphabet::Binary, w.clone());
        // brute force oracle
        let mut seen = BTreeSet::new();
        for i in 0..=w.len() - 4 {
            seen.insert(w[i..i + 4].to_vec());
        }
        assert_eq!(seen.len(), 5);
        assert_eq!(factors(&word, 4).unwrap().size(), 5);
    }

    #[test]
    fn constant_word_complexity() {
        let w = PointedWord::right_only(Alphabet::Ternary, vec![0; 40]);
        assert_eq!(complexity_profile(&w, 10).unwrap(), vec![1; 10]);
    }

    #[test]
    fn balance_examples() {
        let periodic = PointedWord::right_only(Alphabet::Binary, [0, 1].repeat(20));
        assert_eq!(balance_defect(&periodic, 10).unwrap(), 1);
        assert_eq!(balance_defect(&pw("0011"), 2).unwrap(), 2);
        assert!(matches!(balance_defect(&pw("AB"), 2), Err(WordError::AlphabetMismatch { .. })));
    }

    #[test]
    fn density_examples() {
        use crate::qfield::{int, rat};
        assert_eq!(empirical_densities(&pw("AAAA")).unwrap(), vec![int(1), int(0), int(0)]);
        let ab = PointedWord::right_only(Alphabet::Ternary, [0, 1].repeat(10));
        assert_eq!(empirical_densities(&ab).unwrap(), vec![rat(1, 2), rat(1, 2), int(0)]);
        assert_eq!(empirical_densities(&pw("|")), Err(WordError::EmptyWord));
    }

    #[test]
    fn metric_examples() {
        use crate::qfield::{int, rat};
        assert_eq!(metric_distance(&pw("ABC|ABC"), &pw("ABC|ABC")), int(0));
        // disagreement at index -2 only
        assert_eq!(metric_distance(&pw("AAB|CAB"), &pw("ACB|CAB")), rat(1, 3));
        assert_eq!(metric_distance(&pw("A|B"), &pw("A|C")), int(1));
        // indices outside the shorter window are ignored
        assert_eq!(metric_distance(&pw("A|BC"), &pw("|B")), int(0));
    }

    #[test]
    fn factor_subset() {
        let src = PointedWord::right_only(Alphabet::Ternary, [0, 1, 2].repeat(30));
        let lang = Language::from_word(&src, 5).unwrap();
        let same = src.slice(3, 40);
        assert!(is_factor_subset(&same, &lang, 5).unwrap().contained);

        let ab = PointedWord::right_only(Alphabet::Ternary, [0, 1].repeat(10));
        let ab_lang = Language::from_word(&ab, 3).unwrap();
        let check = is_factor_subset(&pw("AB|ABC"), &ab_lang, 3).unwrap();
        assert!(!check.contained);
        assert_eq!(check.witness.as_deref(), Some("C"));

        assert_eq!(is_factor_subset(&same, &lang, 6), Err(WordError::IncompleteLanguage(6)));
    }

    #[test]
    fn language_from_factor_sets() {
        let w = pw("AB|CAB");
        let sets: Vec<FactorSet> = (1..=3).map(|n| factors(&w, n).unwrap()).collect();
        let lang = Language::from_factor_sets(Alphabet::Ternary, &sets);
        assert!(lang.contains(&[2, 0, 1]));
        assert!(!lang.contains(&[1, 0]));
        assert_eq!(lang.count(2), 3);
    }
}
