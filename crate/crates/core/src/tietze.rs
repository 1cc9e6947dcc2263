//! Budget-bounded simplification by Tietze moves.
//!
//! Each pass runs, in order: cyclic reduction of every relator; deletion of
//! empty relators and of relators equal to an earlier one up to rotation and
//! inversion; at most one generator elimination; greedy relator-in-relator
//! substitution. Every move keeps the total relator length and the triangle
//! cost from increasing.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::presentation::{relator_cost, Presentation};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplifyBudget {
    pub max_passes: usize,
    /// Abort guard on the total relator length.
    pub max_total_length: usize,
}

impl Default for SimplifyBudget {
    fn default() -> Self {
        SimplifyBudget {
            max_passes: 200,
            max_total_length: 1 << 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplifyOutcome {
    pub presentation: Presentation,
    pub passes: usize,
    /// Set when a limit stopped the run before a pass made no change. The
    /// presentation is still valid, just possibly not fully simplified.
    pub budget_exhausted: bool,
}

struct State {
    names: Vec<String>,
    alive: Vec<bool>,
    relators: Vec<Word>,
}

fn total_length(relators: &[Word]) -> usize {
    relators.iter().map(|r| r.len()).sum()
}

/// Replaces every occurrence of generator `g` by `image`.
fn substitute(word: &Word, g: usize, image: &Word) -> Word {
    let inv = image.inverse();
    let mut out = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if l.generator() == g {
            out.extend_from_slice(if l.is_inverse() { &inv } else { image });
        } else {
            out.push(l);
        }
    }
    Word::new(out).cyclic_reduce()
}

struct Elimination {
    delta_length: i64,
    delta_cost: i64,
    generator: usize,
    relator: usize,
    image: Word,
}

impl State {
    fn reduce(&mut self) -> bool {
        let mut changed = false;
        for r in &mut self.relators {
            let c = r.cyclic_reduce();
            if c.len() != r.len() {
                *r = c;
                changed = true;
            }
        }
        changed
    }

    fn dedupe(&mut self) -> bool {
        let before = self.relators.len();
        let mut seen = HashSet::new();
        self.relators.retain(|r| !r.is_empty() && seen.insert(r.cyclic_canonical()));
        self.relators.len() != before
    }

    fn best_elimination(&self) -> Option<Elimination> {
        let mut best: Option<Elimination> = None;
        for (ri, r) in self.relators.iter().enumerate() {
            let mut counts: Vec<(usize, usize)> = Vec::new();
            for (pos, l) in r.iter().enumerate() {
                match counts.iter_mut().find(|(g, _)| *g == l.generator()) {
                    Some(entry) => entry.1 = usize::MAX,
                    None => counts.push((l.generator(), pos)),
                }
            }
            for &(g, pos) in &counts {
                if pos == usize::MAX {
                    continue;
                }
                // r rotated to g^e w, so g = w^-e.
                let rotated = r.rotate(pos);
                let rest = Word::new(rotated[1..].to_vec());
                let image = if rotated[0].is_inverse() { rest } else { rest.inverse() };
                let mut delta_length = -(r.len() as i64);
                let mut delta_cost = -(relator_cost(r) as i64);
                for (si, s) in self.relators.iter().enumerate() {
                    if si == ri || s.occurrences(g) == 0 {
                        continue;
                    }
                    let t = substitute(s, g, &image);
                    delta_length += t.len() as i64 - s.len() as i64;
                    delta_cost += relator_cost(&t) as i64 - relator_cost(s) as i64;
                }
                if delta_length > 0 || delta_cost > 0 {
                    continue;
                }
                let key = (delta_length, delta_cost, g, ri);
                if best
                    .as_ref()
                    .is_none_or(|b| key < (b.delta_length, b.delta_cost, b.generator, b.relator))
                {
                    best = Some(Elimination {
                        delta_length,
                        delta_cost,
                        generator: g,
                        relator: ri,
                        image,
                    });
                }
            }
        }
        best
    }

    fn eliminate(&mut self, e: Elimination) {
        self.relators.remove(e.relator);
        for r in &mut self.relators {
            if r.occurrences(e.generator) > 0 {
                *r = substitute(r, e.generator, &e.image);
            }
        }
        self.alive[e.generator] = false;
    }

    /// Greedy substitution: while some other relator `s` has a cyclic
    /// permutation `u v` (of `s` or `s^-1`) with `u` a cyclic subword of `r`
    /// and `|u| > |v|`, replace `u` by `v^-1` in `r`.
    fn substitute_relators(&mut self) -> bool {
        let mut changed = false;
        for ri in 0..self.relators.len() {
            while let Some(shorter) = self.best_shortening(ri) {
                self.relators[ri] = shorter;
                changed = true;
            }
        }
        changed
    }

    fn best_shortening(&self, ri: usize) -> Option<Word> {
        let r = &self.relators[ri];
        let n = r.len();
        if n == 0 {
            return None;
        }
        let mut best: Option<(usize, Word)> = None;
        for (si, s) in self.relators.iter().enumerate() {
            let k = s.len();
            if si == ri || k == 0 || k / 2 + 1 > n {
                continue;
            }
            for base in [s.clone(), s.inverse()] {
                for rot in 0..k {
                    let sp = base.rotate(rot);
                    for start in 0..n {
                        let mut len = 0;
                        while len < k && len < n && r[(start + len) % n] == sp[len] {
                            len += 1;
                        }
                        if 2 * len <= k {
                            continue;
                        }
                        let gain = 2 * len - k;
                        if best.as_ref().is_some_and(|(g, _)| *g >= gain) {
                            continue;
                        }
                        let rotated = r.rotate(start);
                        let v = Word::new(sp[len..].to_vec()).inverse();
                        let candidate = v.concat(&Word::new(rotated[len..].to_vec())).cyclic_reduce();
                        if candidate.len() < n {
                            best = Some((n - candidate.len(), candidate));
                        }
                    }
                }
            }
        }
        best.map(|(_, w)| w)
    }

    fn into_presentation(self) -> Presentation {
        let mut map = vec![usize::MAX; self.names.len()];
        let mut names = Vec::new();
        for (g, name) in self.names.into_iter().enumerate() {
            if self.alive[g] {
                map[g] = names.len();
                names.push(name);
            }
        }
        let relators = self
            .relators
            .into_iter()
            .map(|r| r.iter().map(|l| Letter::new(map[l.generator()], l.is_inverse())).collect())
            .collect();
        Presentation::new(names, relators).expect("surviving names stay distinct")
    }
}

/// Simplifies `p` by Tietze moves. The result presents the same group, with
/// triangle cost and total length no larger than those of `p`.
pub fn simplify(p: &Presentation, budget: SimplifyBudget) -> SimplifyOutcome {
    let mut state = State {
        names: p.generator_names().to_vec(),
        alive: vec![true; p.generator_count()],
        relators: p.relators().to_vec(),
    };
    let mut passes = 0;
    let mut exhausted = true;
    while passes < budget.max_passes {
        passes += 1;
        let mut changed = state.reduce();
        changed |= state.dedupe();
        if let Some(e) = state.best_elimination() {
            state.eliminate(e);
            changed = true;
        }
        changed |= state.substitute_relators();
        if total_length(&state.relators) > budget.max_total_length {
            break;
        }
        if !changed {
            exhausted = false;
            break;
        }
    }
    SimplifyOutcome {
        presentation: state.into_presentation(),
        passes,
        budget_exhausted: exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(s: &str) -> Presentation {
        simplify(&Presentation::parse(s).unwrap(), SimplifyBudget::default()).presentation
    }

    #[test]
    fn undoes_fan_triangulation() {
        let p = Presentation::parse("< a, b, c, d | a b a^-1 b^-1 c d c^-1 d^-1 >").unwrap();
        let t = p.triangulate().presentation;
        assert_eq!(t.relator_count(), 6);
        let s = simplify(&t, SimplifyBudget::default());
        assert!(!s.budget_exhausted);
        assert_eq!(s.presentation.relator_count(), 1);
        assert_eq!(s.presentation.tcost().value(), 6);
        assert_eq!(s.presentation.generator_count(), 4);
    }

    #[test]
    fn drops_trivial_and_duplicate_relators() {
        let s = run("< a, b | a a^-1, a^3, a^-3, b a^3 b^-1 >");
        assert_eq!(s.to_string(), "< a, b | a^3 >");
    }

    #[test]
    fn eliminates_redundant_generator() {
        // Eliminating c would lengthen c^2 into (a b)^2; a = c b^-1 is free.
        let s = run("< a, b, c | c = a b, c^2 >");
        assert_eq!(s.to_string(), "< b, c | c^2 >");
    }

    #[test]
    fn substitution_shortens() {
        // a b a = 1 turns a b a b a into b a, and then everything collapses.
        let s = run("< a, b | a b a b a, a b a >");
        assert_eq!(s.to_string(), "< | >");
    }

    #[test]
    fn cost_never_increases_on_examples() {
        for text in [
            "< a, b | a^2, b^3, (a b)^5 >",
            "< x, y | x y x^-1 = y^2, y x y^-1 = x^2 >",
            "< a, b, c | a b c, c b a, a^2 b^2 c^2 >",
        ] {
            let p = Presentation::parse(text).unwrap();
            let s = simplify(&p, SimplifyBudget::default()).presentation;
            assert!(s.tcost() <= p.tcost(), "{text}");
        }
    }
}
