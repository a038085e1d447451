//! Permutations in window notation and the combinatorial statistics the
//! rest of the crate consumes: inversions, descents, Lehmer codes, rank
//! matrices, Bruhat comparison and reduced words.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("malformed permutation: {0}")]
    MalformedInput(String),
}

/// A permutation of `[n]` stored in window (one-line) notation.
///
/// `window[i]` is the 1-based image of position `i + 1`. The window is
/// validated to be a bijection on `{1, ..., n}` at construction, so every
/// downstream statistic can assume it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    window: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from window notation, rejecting non-bijections.
    pub fn from_window(window: Vec<usize>) -> Result<Self, PermError> {
        let n = window.len();
        if n == 0 {
            return Err(PermError::MalformedInput("empty window".into()));
        }
        let mut seen = vec![false; n];
        for &v in &window {
            if v == 0 || v > n {
                return Err(PermError::MalformedInput(format!(
                    "letter {v} out of range 1..={n}"
                )));
            }
            if seen[v - 1] {
                return Err(PermError::MalformedInput(format!("letter {v} repeated")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { window })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Permutation {
            window: (1..=n).collect(),
        }
    }

    /// The longest element `(n, n-1, ..., 1)`.
    pub fn long_element(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Permutation {
            window: (1..=n).rev().collect(),
        }
    }

    /// The adjacent transposition `s_i` swapping `i` and `i + 1` inside `S_n`.
    pub fn transposition(i: usize, n: usize) -> Self {
        assert!(i >= 1 && i < n, "transposition index out of range");
        let mut w = Self::identity(n);
        w.window.swap(i - 1, i);
        w
    }

    pub fn degree(&self) -> usize {
        self.window.len()
    }

    /// The image `w(i)` for 1-based `i`.
    pub fn value(&self, i: usize) -> usize {
        self.window[i - 1]
    }

    pub fn window(&self) -> &[usize] {
        &self.window
    }

    /// Position of the letter `v`, i.e. `w^{-1}(v)`, 1-based.
    pub fn position(&self, v: usize) -> usize {
        self.window.iter().position(|&x| x == v).expect("letter in range") + 1
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    /// Appends fixed points until the degree is `n`.
    pub fn padded(&self, n: usize) -> Self {
        assert!(n >= self.degree());
        let mut window = self.window.clone();
        window.extend(self.degree() + 1..=n);
        Permutation { window }
    }

    /// Drops trailing fixed points, keeping degree at least 1.
    pub fn trimmed(&self) -> Self {
        let mut n = self.degree();
        while n > 1 && self.window[n - 1] == n {
            n -= 1;
        }
        Permutation {
            window: self.window[..n].to_vec(),
        }
    }

    /// Number of inversions: pairs `i < j` with `w(i) > w(j)`.
    pub fn inversions(&self) -> usize {
        let n = self.degree();
        let mut count = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.window[i] > self.window[j] {
                    count += 1;
                }
            }
        }
        count
    }

    /// The descent set `{i : w(i) > w(i+1)}`, 1-based.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.degree())
            .filter(|&i| self.window[i - 1] > self.window[i])
            .collect()
    }

    pub fn descent_count(&self) -> usize {
        self.descents().len()
    }

    /// Lehmer code: `code[i] = #{j > i : w(j) < w(i)}`.
    pub fn lehmer_code(&self) -> Vec<usize> {
        let n = self.degree();
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.window[j] < self.window[i]).count())
            .collect()
    }

    /// Rebuilds the permutation whose Lehmer code extends `code` by zeros.
    ///
    /// The degree is the smallest one that accommodates every entry, so
    /// `from_lehmer_code(&w.lehmer_code())` recovers `w` up to trailing
    /// fixed points.
    pub fn from_lehmer_code(code: &[usize]) -> Self {
        let n = code
            .iter()
            .enumerate()
            .map(|(i, &c)| c + i + 1)
            .max()
            .unwrap_or(1)
            .max(code.len())
            .max(1);
        let mut pool: Vec<usize> = (1..=n).collect();
        let mut window = Vec::with_capacity(n);
        for i in 0..n {
            let c = code.get(i).copied().unwrap_or(0);
            window.push(pool.remove(c));
        }
        Permutation { window }
    }

    /// The rank matrix `a[i][j] = |{w(1..=j)} ∩ {1..=i}|` (1-based `i`, `j`).
    pub fn rank_matrix(&self) -> RankMatrix {
        let n = self.degree();
        let mut entries = vec![vec![0usize; n]; n];
        for i in 1..=n {
            for j in 1..=n {
                entries[i - 1][j - 1] =
                    (0..j).filter(|&col| self.window[col] <= i).count();
            }
        }
        RankMatrix { entries }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    ///
    /// Operands of unequal degree are padded with fixed points first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        let n = self.degree().max(other.degree());
        let a = self.padded(n);
        let b = other.padded(n);
        let window = (1..=n).map(|i| a.value(b.value(i))).collect();
        Permutation { window }
    }

    pub fn inverse(&self) -> Permutation {
        let n = self.degree();
        let mut window = vec![0; n];
        for i in 1..=n {
            window[self.value(i) - 1] = i;
        }
        Permutation { window }
    }

    /// Bruhat comparison `self <= other` via entrywise rank-matrix dominance.
    ///
    /// Operands are padded to a common degree; `u <= w` holds exactly when
    /// `a^u[i][j] >= a^w[i][j]` for all cells.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        let n = self.degree().max(other.degree());
        let a = self.padded(n).rank_matrix();
        let b = other.padded(n).rank_matrix();
        for i in 0..n {
            for j in 0..n {
                if a.entries[i][j] < b.entries[i][j] {
                    return false;
                }
            }
        }
        true
    }

    /// The lexicographically smallest reduced word `(a_1, ..., a_l)` with
    /// `s_{a_1} ... s_{a_l} = w` and `l = inv(w)`.
    ///
    /// Built greedily: the smallest admissible first letter of a reduced
    /// word is the smallest left descent, i.e. the smallest `i` whose letter
    /// `i` sits to the right of `i + 1` in the window.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.inversions());
        let mut cur = self.window.clone();
        loop {
            // positions of each letter, 1-based
            let n = cur.len();
            let mut pos = vec![0usize; n + 1];
            for (idx, &v) in cur.iter().enumerate() {
                pos[v] = idx + 1;
            }
            let Some(i) = (1..n).find(|&i| pos[i] > pos[i + 1]) else {
                break;
            };
            word.push(i);
            // left-multiply by s_i: swap the letters i and i+1 in place
            cur.swap(pos[i] - 1, pos[i + 1] - 1);
        }
        word
    }

    /// Evaluates a word of adjacent-transposition indices to a permutation
    /// of degree at least `n`.
    pub fn from_word(word: &[usize], n: usize) -> Permutation {
        let deg = word.iter().map(|&i| i + 1).max().unwrap_or(1).max(n).max(1);
        let mut acc = Permutation::identity(deg);
        for &i in word {
            acc = acc.compose(&Permutation::transposition(i, deg));
        }
        acc
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    /// Parses either a digit string (degree at most 9) or a comma/space
    /// separated window.
    fn from_str(text: &str) -> Result<Self, PermError> {
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(PermError::MalformedInput("empty input".into()));
        }
        let window: Vec<usize> = if trimmed.contains(',') || trimmed.contains(char::is_whitespace)
        {
            trimmed
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| PermError::MalformedInput(format!("bad letter '{s}'")))
                })
                .collect::<Result<_, _>>()?
        } else {
            if !trimmed.chars().all(|c| c.is_ascii_digit()) {
                return Err(PermError::MalformedInput(format!(
                    "unexpected characters in '{trimmed}'"
                )));
            }
            if trimmed.len() > 9 {
                return Err(PermError::MalformedInput(
                    "digit strings are limited to degree 9; separate letters with commas".into(),
                ));
            }
            trimmed
                .chars()
                .map(|c| c.to_digit(10).unwrap() as usize)
                .collect()
        };
        Permutation::from_window(window)
    }
}

impl fmt::Display for Permutation {
    /// Digit string for degree at most 9, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() <= 9 {
            for &v in &self.window {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.window.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Parses permutation text; see [`Permutation::from_str`].
pub fn parse_permutation(text: &str) -> Result<Permutation, PermError> {
    text.parse()
}

/// The matrix of flag-intersection ranks attached to a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    entries: Vec<Vec<usize>>,
}

impl RankMatrix {
    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    /// Entry `a[i][j]`, 1-based.
    pub fn entry(&self, i: usize, j: usize) -> usize {
        self.entries[i - 1][j - 1]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.entries
    }

    /// Recovers the permutation: `w(j)` is the row where column `j` first
    /// increments relative to column `j - 1`.
    pub fn to_permutation(&self) -> Permutation {
        let n = self.degree();
        let mut window = Vec::with_capacity(n);
        for j in 1..=n {
            let mut prev = 0;
            for i in 1..=n {
                let left = if j == 1 { 0 } else { self.entry(i, j - 1) };
                let here = self.entry(i, j) - left;
                if here > prev {
                    window.push(i);
                    break;
                }
                prev = here;
            }
        }
        Permutation { window }
    }
}
