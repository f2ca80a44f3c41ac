//! Free-group words, Cayley-ball enumeration, and conjugacy canonical forms.
//!
//! Letters are signed generator indices: 1, -1, 2, -2, ... A negative letter
//! is the inverse of the corresponding positive one. The string form maps
//! generator n to the n-th lowercase ASCII letter and its inverse to the
//! uppercase letter, so "aBab" is a * b^-1 * a * b.

use crate::error::Error;
use crate::projlin::ProjMat;

/// Default cap on enumerated ball sizes.
pub const DEFAULT_BALL_CAP: usize = 10_000_000;

/// A freely reduced word in a free group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<i32>,
}

/// Total order on letters: length-lexicographic enumeration uses
/// 1 < -1 < 2 < -2 < ...
fn letter_key(l: i32) -> (u32, u8) {
    (l.unsigned_abs(), if l > 0 { 0 } else { 1 })
}

fn reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for &l in letters {
        if l == 0 {
            continue;
        }
        if out.last().is_some_and(|&p| p == -l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl Word {
    /// Build a word, freely reducing the input.
    pub fn new<I: IntoIterator<Item = i32>>(letters: I) -> Word {
        Word {
            letters: reduce(&letters.into_iter().collect::<Vec<_>>()),
        }
    }

    pub fn empty() -> Word {
        Word { letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Word::new(l)
    }

    /// Largest generator index used (0 for the empty word).
    pub fn max_generator(&self) -> u32 {
        self.letters
            .iter()
            .map(|l| l.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Compare words in length-then-lexicographic enumeration order.
    pub fn enum_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| {
            for (a, b) in self.letters.iter().zip(&other.letters) {
                let c = letter_key(*a).cmp(&letter_key(*b));
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    }

    /// String form: a, b, c, ... with uppercase inverses.
    pub fn to_string_form(&self) -> String {
        self.letters
            .iter()
            .map(|&l| {
                let idx = (l.unsigned_abs() - 1) as u8;
                if l > 0 {
                    (b'a' + idx) as char
                } else {
                    (b'A' + idx) as char
                }
            })
            .collect()
    }

    /// Parse the string form; the empty string is the identity.
    pub fn parse(s: &str) -> Result<Word, Error> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let l = match ch {
                'a'..='z' => (ch as u8 - b'a') as i32 + 1,
                'A'..='Z' => -((ch as u8 - b'A') as i32 + 1),
                _ => return Err(Error::BadInput(format!("invalid word character {ch:?}"))),
            };
            letters.push(l);
        }
        Ok(Word::new(letters))
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_string_form())
    }
}

/// Conjugacy class, represented by the cyclically reduced word rotated to
/// its enumeration-order minimum (optionally also over inversion).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConjClass {
    canonical: Word,
}

impl ConjClass {
    pub fn canonical(&self) -> &Word {
        &self.canonical
    }

    /// Cyclic length, which realizes the minimal translation distance on the
    /// Cayley graph of a free group.
    pub fn stable_length(&self) -> usize {
        self.canonical.len()
    }
}

/// Strip conjugating prefix/suffix pairs and rotate to the canonical
/// representative. With `identify_inverse`, w and w^-1 share a class.
pub fn cyclic_reduce_with(w: &Word, identify_inverse: bool) -> ConjClass {
    let mut l = w.letters.clone();
    while l.len() >= 2 && l[0] == -l[l.len() - 1] {
        l.pop();
        l.remove(0);
    }
    let n = l.len();
    if n == 0 {
        return ConjClass {
            canonical: Word::empty(),
        };
    }
    let mut best: Option<Word> = None;
    let mut consider = |cand: Word| match &best {
        Some(b) if cand.enum_cmp(b) == std::cmp::Ordering::Less => best = Some(cand),
        None => best = Some(cand),
        _ => {}
    };
    for r in 0..n {
        let rot: Vec<i32> = l[r..].iter().chain(l[..r].iter()).copied().collect();
        if identify_inverse {
            let inv = Word {
                letters: rot.clone(),
            }
            .inverse();
            consider(inv);
        }
        consider(Word { letters: rot });
    }
    ConjClass {
        canonical: best.unwrap(),
    }
}

/// Canonical form without inversion-identification (two words are conjugate
/// in the free group iff their canonical forms agree).
pub fn cyclic_reduce(w: &Word) -> ConjClass {
    cyclic_reduce_with(w, false)
}

/// Every freely reduced word of length <= radius, exactly once, in
/// length-then-lexicographic order, starting with the empty word.
pub fn ball(rank: u32, radius: usize) -> Result<Vec<Word>, Error> {
    ball_capped(rank, radius, DEFAULT_BALL_CAP)
}

pub fn ball_capped(rank: u32, radius: usize, cap: usize) -> Result<Vec<Word>, Error> {
    if rank == 0 {
        return Err(Error::BadInput("rank must be at least 1".into()));
    }
    // letters in enumeration order
    let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
    let mut out: Vec<Word> = vec![Word::empty()];
    let mut frontier: Vec<Word> = vec![Word::empty()];
    for _ in 0..radius {
        let mut next: Vec<Word> = Vec::with_capacity(frontier.len() * (2 * rank as usize));
        for w in &frontier {
            for &l in &letters {
                if w.letters.last().is_some_and(|&p| p == -l) {
                    continue;
                }
                let mut nl = w.letters.clone();
                nl.push(l);
                next.push(Word { letters: nl });
                if out.len() + next.len() > cap {
                    return Err(Error::BudgetExceeded(cap));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    Ok(out)
}

/// Ball elements paired with their evaluated matrices: each element costs a
/// single matrix multiply on top of its parent's cached product.
pub struct BallEval {
    pub words: Vec<Word>,
    pub images: Vec<ProjMat>,
}

/// A labeled generator-to-matrix assignment.
#[derive(Clone, Debug)]
pub struct Representation {
    dim: usize,
    gens: Vec<ProjMat>,
    gen_invs: Vec<ProjMat>,
    label: String,
}

impl Representation {
    pub fn new(gens: Vec<ProjMat>, label: impl Into<String>) -> Result<Representation, Error> {
        if gens.is_empty() {
            return Err(Error::BadInput("representation needs generators".into()));
        }
        let dim = gens[0].dim();
        for g in &gens {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.dim(),
                });
            }
        }
        let gen_invs = gens
            .iter()
            .map(|g| g.inverse())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Representation {
            dim,
            gens,
            gen_invs,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> u32 {
        self.gens.len() as u32
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generators(&self) -> &[ProjMat] {
        &self.gens
    }

    pub fn letter_image(&self, l: i32) -> Result<&ProjMat, Error> {
        let idx = (l.unsigned_abs() as usize)
            .checked_sub(1)
            .ok_or_else(|| Error::BadInput("letter 0".into()))?;
        if idx >= self.gens.len() {
            return Err(Error::BadInput(format!(
                "letter {l} outside rank {}",
                self.gens.len()
            )));
        }
        Ok(if l > 0 {
            &self.gens[idx]
        } else {
            &self.gen_invs[idx]
        })
    }

    /// Product of generator images along the word, |det|-normalized.
    pub fn evaluate(&self, w: &Word) -> Result<ProjMat, Error> {
        let mut acc = ProjMat::identity(self.dim);
        for &l in w.letters() {
            acc = acc.compose(self.letter_image(l)?)?;
        }
        Ok(acc)
    }

    /// Conjugate the whole representation by a fixed element.
    pub fn conjugated(&self, h: &ProjMat) -> Result<Representation, Error> {
        let hinv = h.inverse()?;
        let gens = self
            .gens
            .iter()
            .map(|g| h.compose(g)?.compose(&hinv))
            .collect::<Result<Vec<_>, _>>()?;
        Representation::new(gens, format!("{}-conj", self.label))
    }

    /// Evaluate the whole ball with memoized prefix products: one multiply
    /// per word.
    pub fn ball_eval(&self, radius: usize, cap: usize) -> Result<BallEval, Error> {
        let rank = self.rank();
        let letters: Vec<i32> = (1..=rank as i32).flat_map(|g| [g, -g]).collect();
        let mut words: Vec<Word> = vec![Word::empty()];
        let mut images: Vec<ProjMat> = vec![ProjMat::identity(self.dim)];
        // frontier holds indices into words/images
        let mut frontier: Vec<usize> = vec![0];
        let mut total = 1usize;
        for _ in 0..radius {
            let mut next: Vec<usize> = Vec::new();
            for &pi in &frontier {
                for &l in &letters {
                    if words[pi].letters().last().is_some_and(|&p| p == -l) {
                        continue;
                    }
                    total += 1;
                    if total > cap {
                        return Err(Error::BudgetExceeded(cap));
                    }
                    let mut nl = words[pi].letters().to_vec();
                    nl.push(l);
                    let img = images[pi].compose(self.letter_image(l)?)?;
                    words.push(Word { letters: nl });
                    images.push(img);
                    next.push(words.len() - 1);
                }
            }
            frontier = next;
        }
        Ok(BallEval { words, images })
    }
}

/// Conjugacy classes with cyclic length in [min_len, radius], listed by the
/// enumeration order of their canonical words, paired with evaluated images
/// of the canonical word and its inverse.
pub struct ClassData {
    pub class: ConjClass,
    pub image: ProjMat,
    pub inverse_image: ProjMat,
}

pub fn class_scan(
    rep: &Representation,
    radius: usize,
    min_len: usize,
    cap: usize,
) -> Result<Vec<ClassData>, Error> {
    let ball = ball_capped(rep.rank(), radius, cap)?;
    let mut seen = std::collections::HashSet::new();
    let mut classes: Vec<ConjClass> = Vec::new();
    for w in &ball {
        let c = cyclic_reduce(w);
        let len = c.stable_length();
        if len < min_len || len > radius {
            continue;
        }
        if seen.insert(c.canonical().clone()) {
            classes.push(c);
        }
    }
    classes.sort_by(|a, b| a.canonical().enum_cmp(b.canonical()));
    classes
        .into_iter()
        .map(|c| {
            let image = rep.evaluate(c.canonical())?;
            let inverse_image = rep.evaluate(&c.canonical().inverse())?;
            Ok(ClassData {
                class: c,
                image,
                inverse_image,
            })
        })
        .collect()
}
