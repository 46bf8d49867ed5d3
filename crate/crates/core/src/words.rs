//! Words over the alphabet `{1..k}` selecting which map to apply at each step.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::ratmap::MapSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WordMode {
    Finite,
    /// The letters repeat forever.
    Periodic,
}

/// A word `w = (w_1, w_2, ...)` with 1-based letters. The map sequence is
/// `Φ^(n) = φ_{w_n} ∘ ... ∘ φ_{w_1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Word {
    mode: WordMode,
    letters: Vec<usize>,
}

impl Word {
    pub fn finite(letters: Vec<usize>) -> Word {
        Word {
            mode: WordMode::Finite,
            letters,
        }
    }

    /// Periodic extension of a nonempty seed.
    pub fn periodic(letters: Vec<usize>) -> Result<Word> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word {
            mode: WordMode::Periodic,
            letters,
        })
    }

    /// The constant word `(i, i, i, ...)`.
    pub fn constant(letter: usize) -> Word {
        Word {
            mode: WordMode::Periodic,
            letters: vec![letter],
        }
    }

    pub fn mode(&self) -> WordMode {
        self.mode
    }

    pub fn is_periodic(&self) -> bool {
        self.mode == WordMode::Periodic
    }

    /// The stored letters: the whole word, or one period.
    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Length of a finite word, `None` for periodic words.
    pub fn len(&self) -> Option<usize> {
        match self.mode {
            WordMode::Finite => Some(self.letters.len()),
            WordMode::Periodic => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// The 1-based position `i` holds `letter(i - 1)`.
    pub fn letter(&self, index: usize) -> Option<usize> {
        match self.mode {
            WordMode::Finite => self.letters.get(index).copied(),
            WordMode::Periodic => Some(self.letters[index % self.letters.len()]),
        }
    }

    /// `w_1 ... w_n`, or `None` if a finite word is shorter than `n`.
    pub fn prefix(&self, n: usize) -> Option<Vec<usize>> {
        (0..n).map(|i| self.letter(i)).collect()
    }

    /// The shift `S(w) = (w_2, w_3, ...)`; periodic words rotate.
    pub fn shift(&self) -> Result<Word> {
        if self.letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut letters = self.letters.clone();
        match self.mode {
            WordMode::Finite => {
                letters.remove(0);
            }
            WordMode::Periodic => letters.rotate_left(1),
        }
        Ok(Word {
            mode: self.mode,
            letters,
        })
    }

    pub fn shift_by(&self, n: usize) -> Result<Word> {
        match self.mode {
            WordMode::Periodic => {
                let mut letters = self.letters.clone();
                let r = n % letters.len();
                letters.rotate_left(r);
                Ok(Word {
                    mode: self.mode,
                    letters,
                })
            }
            WordMode::Finite => {
                if n > self.letters.len() {
                    return Err(Error::EmptyWord);
                }
                Ok(Word::finite(self.letters[n..].to_vec()))
            }
        }
    }

    /// Check every letter against the system size.
    pub fn validate(&self, k: usize) -> Result<()> {
        match self.letters.iter().find(|&&l| l == 0 || l > k) {
            Some(&letter) => Err(Error::BadLetter { letter, k }),
            None => Ok(()),
        }
    }

    /// `D_n = prod_{i <= n} d_{w_i}`.
    pub fn degree_product(&self, system: &MapSystem, n: usize) -> Result<BigUint> {
        let letters = self.prefix(n).ok_or(Error::EmptyWord)?;
        degree_product(system, &letters)
    }
}

/// `prod d_{w_i}` over the given letters; `1` for the empty word.
pub fn degree_product(system: &MapSystem, letters: &[usize]) -> Result<BigUint> {
    letters.iter().try_fold(BigUint::one(), |acc, &l| {
        Ok(acc * BigUint::from(system.map(l)?.degree()))
    })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        match self.mode {
            WordMode::Finite => write!(f, "{}", body.join(".")),
            WordMode::Periodic => write!(f, "({})^inf", body.join(".")),
        }
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl<'de> Deserialize<'de> for Word {
    /// Accepts `{"mode": ..., "letters": [...]}` or a bare array (finite).
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        #[derive(Deserialize)]
        struct Tagged {
            mode: WordMode,
            letters: Vec<usize>,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Bare(Vec<usize>),
            Tagged(Tagged),
        }
        match Repr::deserialize(d)? {
            Repr::Bare(letters) => Ok(Word::finite(letters)),
            Repr::Tagged(t) => match t.mode {
                WordMode::Finite => Ok(Word::finite(t.letters)),
                WordMode::Periodic => Word::periodic(t.letters).map_err(serde::de::Error::custom),
            },
        }
    }
}

/// Position `n` along a word with its degree product `D_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordPosition {
    pub word: Word,
    pub n: usize,
    pub degree_product: BigUint,
}

impl WordPosition {
    pub fn new(word: Word, system: &MapSystem, n: usize) -> Result<WordPosition> {
        let degree_product = word.degree_product(system, n)?;
        Ok(WordPosition {
            word,
            n,
            degree_product,
        })
    }
}

/// All `k^n` words of length `n` in lexicographic order.
pub fn enumerate_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = Vec::with_capacity(k.saturating_pow(n as u32));
    let mut cur = vec![1; n];
    if k == 0 && n > 0 {
        return out;
    }
    loop {
        out.push(Word::finite(cur.clone()));
        // odometer increment from the last position
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                cur[i + 1..].iter_mut().for_each(|c| *c = 1);
                break;
            }
        }
    }
}

/// Seeded sampler for letters under `ν(j) = d_j / (d_1 + ... + d_k)`.
pub struct WordSampler {
    rng: ChaCha8Rng,
    dist: WeightedIndex<usize>,
}

impl WordSampler {
    pub fn new(system: &MapSystem, seed: u64) -> WordSampler {
        WordSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dist: WeightedIndex::new(system.degrees()).expect("positive degrees"),
        }
    }

    pub fn next_letter(&mut self) -> usize {
        self.dist.sample(&mut self.rng) + 1
    }

    pub fn word(&mut self, len: usize) -> Word {
        Word::finite((0..len).map(|_| self.next_letter()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(ws: &[Word]) -> Vec<Vec<usize>> {
        ws.iter().map(|w| w.letters().to_vec()).collect()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(Word::finite(vec![1, 2, 1]).shift().unwrap(), Word::finite(vec![2, 1]));
        assert_eq!(
            Word::periodic(vec![1, 2]).unwrap().shift().unwrap(),
            Word::periodic(vec![2, 1]).unwrap()
        );
        assert_eq!(Word::finite(vec![2]).shift().unwrap(), Word::finite(vec![]));
        assert!(matches!(Word::finite(vec![]).shift(), Err(Error::EmptyWord)));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(lists(&enumerate_words(2, 0)), vec![Vec::<usize>::new()]);
        assert_eq!(
            lists(&enumerate_words(2, 2)),
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(lists(&enumerate_words(3, 1)), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(enumerate_words(3, 4).len(), 81);
    }

    #[test]
    fn periodic_letters_and_prefix() {
        let w = Word::periodic(vec![1, 2, 2]).unwrap();
        assert_eq!(w.prefix(7).unwrap(), vec![1, 2, 2, 1, 2, 2, 1]);
        assert_eq!(Word::finite(vec![1]).prefix(2), None);
        assert_eq!(w.shift_by(4).unwrap(), w.shift().unwrap());
    }

    #[test]
    fn json_forms() {
        let w = Word::periodic(vec![1, 2]).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"mode":"periodic","letters":[1,2]}"#);
        assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w);
        assert_eq!(serde_json::from_str::<Word>("[2,1]").unwrap(), Word::finite(vec![2, 1]));
        assert!(serde_json::from_str::<Word>(r#"{"mode":"periodic","letters":[]}"#).is_err());
    }

    #[test]
    fn sampler_is_seeded_and_degree_weighted() {
        let sys: MapSystem = "z^2; z^6".parse().unwrap();
        let a = WordSampler::new(&sys, 7).word(50);
        let b = WordSampler::new(&sys, 7).word(50);
        assert_eq!(a, b);
        let mut s = WordSampler::new(&sys, 1);
        let twos = (0..4000).filter(|_| s.next_letter() == 2).count();
        // expected 3000 of 4000
        assert!((2800..3200).contains(&twos), "{twos}");
    }
}
