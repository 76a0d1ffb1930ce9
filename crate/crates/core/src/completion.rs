//! Bounded Knuth–Bendix completion for the ShortLex order, keeping for every
//! derived rule a derivation over the original relations.

use std::cmp::Ordering;
use std::collections::HashSet;

use crate::budget::Budget;
use crate::presentation::{shortlex, Letter, Presentation, Sign};
use crate::rewriting::{apply, check_completeness, occurrences, principal_left_step, splice, Step};

/// An application of an original relation: `(position, relation, sign)`.
pub type Move = (usize, usize, Sign);

/// A complete ShortLex system equivalent to some presentation.
#[derive(Clone, Debug)]
pub struct Completion {
    pub system: Presentation,
    /// `proofs[k]` rewrites the left side of rule `k` into its right side
    /// using the original relations.
    pub proofs: Vec<Vec<Move>>,
}

pub fn shift(moves: &[Move], by: usize) -> impl Iterator<Item = Move> + '_ {
    moves.iter().map(move |&(p, r, s)| (p + by, r, s))
}

pub fn reverse(moves: &[Move]) -> Vec<Move> {
    moves.iter().rev().map(|&(p, r, s)| (p, r, s.flip())).collect()
}

/// Replays `moves` from `start`, producing full steps. Panics if a move does
/// not apply, which would mean a corrupted proof.
pub fn replay_moves(start: &[Letter], p: &Presentation, moves: &[Move]) -> Vec<Step> {
    let mut cur = start.to_vec();
    moves
        .iter()
        .map(|&(position, relation, sign)| {
            cur = apply(&cur, p, position, relation, sign).expect("proof move does not apply");
            Step { position, relation, sign, result: cur.clone() }
        })
        .collect()
}

/// Principal-left normal form under `rules`, with the moves that realise it.
fn reduce_with_proof(w: &[Letter], rules: &Presentation, proofs: &[Vec<Move>], max_steps: usize) -> Option<(Vec<Letter>, Vec<Move>)> {
    let mut cur = w.to_vec();
    let mut moves = Vec::new();
    let mut n = 0;
    while let Some(s) = principal_left_step(&cur, rules) {
        n += 1;
        if n > max_steps {
            return None;
        }
        moves.extend(shift(&proofs[s.relation], s.position));
        cur = s.result;
    }
    Some((cur, moves))
}

/// `(word, i, j, position of rule j in word)` for overlaps and containments.
fn critical_pairs(rules: &[(Vec<Letter>, Vec<Letter>)]) -> Vec<(Vec<Letter>, usize, usize, usize)> {
    let mut out = Vec::new();
    for (i, (li, _)) in rules.iter().enumerate() {
        for (j, (lj, _)) in rules.iter().enumerate() {
            for k in 1..li.len().min(lj.len()) {
                if li[li.len() - k..] == lj[..k] {
                    let mut word = li.clone();
                    word.extend_from_slice(&lj[k..]);
                    out.push((word, i, j, li.len() - k));
                }
            }
            if i != j {
                for pos in occurrences(li, lj) {
                    out.push((li.clone(), i, j, pos));
                }
            }
        }
    }
    out
}

/// Runs completion until no critical pair is left unresolved, or gives up
/// once `max_rules` rules exist or a normalization exceeds the step budget.
pub fn complete_shortlex(p: &Presentation, budget: &Budget, max_rules: usize) -> Option<Completion> {
    let mut rules: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
    let mut proofs: Vec<Vec<Move>> = Vec::new();
    let mut seen = HashSet::new();
    for (k, r) in p.relations().iter().enumerate() {
        let (l, rr, sign) = if shortlex(&r.left, &r.right) == Ordering::Greater {
            (r.left.to_vec(), r.right.to_vec(), Sign::Pos)
        } else {
            (r.right.to_vec(), r.left.to_vec(), Sign::Neg)
        };
        if seen.insert((l.clone(), rr.clone())) {
            rules.push((l, rr));
            proofs.push(vec![(0, k, sign)]);
        }
    }
    let symbols = p.symbols().to_vec();
    loop {
        let system = Presentation::new(symbols.clone(), rules.clone()).ok()?;
        let mut added = false;
        for (word, i, j, pos) in critical_pairs(&rules) {
            let a = splice(&word, 0, rules[i].0.len(), &rules[i].1);
            let b = splice(&word, pos, rules[j].0.len(), &rules[j].1);
            let (na, pa) = reduce_with_proof(&a, &system, &proofs, budget.max_steps)?;
            let (nb, pb) = reduce_with_proof(&b, &system, &proofs, budget.max_steps)?;
            if na == nb {
                continue;
            }
            let mut chain = reverse(&pa);
            chain.extend(reverse(&proofs[i]));
            chain.extend(shift(&proofs[j], pos));
            chain.extend(pb);
            let (l, r, proof) = if shortlex(&na, &nb) == Ordering::Greater { (na, nb, chain) } else { (nb, na, reverse(&chain)) };
            if seen.insert((l.clone(), r.clone())) {
                rules.push((l, r));
                proofs.push(proof);
                added = true;
                if rules.len() > max_rules {
                    return None;
                }
            }
        }
        if !added {
            return check_completeness(&system, budget).is_complete().then_some(Completion { system, proofs });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::thompson_commutator;

    #[test]
    fn completes_truncated_commutator_presentation() {
        let b = thompson_commutator(2).unwrap();
        let p = &b.presentation;
        let c = complete_shortlex(p, &Budget::default(), 200).expect("finite completion");
        for (k, r) in c.system.relations().iter().enumerate() {
            let steps = replay_moves(&r.left, p, &c.proofs[k]);
            assert_eq!(steps.last().map(|s| &s.result[..]).unwrap_or(&r.left[..]), &r.right[..]);
        }
        assert!(c.system.relations().len() > p.relations().len());
    }
}
