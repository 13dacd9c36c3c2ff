use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::transducer::FiniteTransducer;
use crate::words::MultiWord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Injectivity {
    Injective,
    /// Two inputs that differ and can be extended by repeating a common tail
    /// of grid letters forever while their outputs stay equal.
    NotInjective { first: MultiWord, second: MultiWord, tail_from: usize },
}

impl Injectivity {
    pub fn is_injective(&self) -> bool {
        matches!(self, Injectivity::Injective)
    }
}

/// A pair of runs: the two current states and what each side has written
/// beyond the other (per coordinate at most one side is ahead).
type Config = (usize, usize, MultiWord, MultiWord);

/// Searches pairs of runs from `q` that separate at some grid letter and keep
/// comparable outputs. A reachable cycle among such pairs yields two distinct
/// infinite inputs with equal images; a finite acyclic search space proves
/// injectivity.
pub fn is_state_injective(t: &FiniteTransducer, q: usize, budget: usize) -> Result<Injectivity> {
    if q >= t.state_count() {
        return Err(Error::UnknownState(format!("#{q}")));
    }
    let table = t.grid_table();
    let p = t.domain();
    let d_out = t.range().d;

    // States reachable from q by grid words, with a word reaching each.
    let mut reach: Vec<(usize, Vec<usize>)> = vec![(q, Vec::new())];
    let mut seen = vec![false; t.state_count()];
    seen[q] = true;
    let mut i = 0;
    while i < reach.len() {
        let (r, path) = reach[i].clone();
        i += 1;
        for (c, (target, _)) in table[r].iter().enumerate() {
            if !seen[*target] {
                seen[*target] = true;
                let mut p2 = path.clone();
                p2.push(c);
                reach.push((*target, p2));
            }
        }
    }

    let advance = |s1: &MultiWord, s2: &MultiWord, o1: &MultiWord, o2: &MultiWord| -> Option<(MultiWord, MultiWord)> {
        let mut a = s1.clone();
        a.append(o1);
        let mut b = s2.clone();
        b.append(o2);
        if !a.comparable(&b) {
            return None;
        }
        let l = a.lcp_pair(&b);
        Some((a.subtract(&l).expect("lcp is a prefix"), b.subtract(&l).expect("lcp is a prefix")))
    };

    // Iterative depth-first search with colours: 1 on the stack, 2 finished.
    let mut colour: HashMap<Config, u8> = HashMap::new();
    let grid = p.grid_count();
    let empty = MultiWord::empty(d_out);
    for (r, prefix) in &reach {
        for g in 0..grid {
            for h in 0..grid {
                if g == h {
                    continue;
                }
                let (t1, o1) = &table[*r][g];
                let (t2, o2) = &table[*r][h];
                let Some((s1, s2)) = advance(&empty, &empty, o1, o2) else { continue };
                let start: Config = (*t1, *t2, s1, s2);
                if colour.contains_key(&start) {
                    continue;
                }
                // Stack frames: config, next successor index, step taken into it.
                let mut stack: Vec<(Config, usize, (usize, usize))> = vec![(start.clone(), 0, (g, h))];
                colour.insert(start, 1);
                while let Some(top) = stack.last_mut() {
                    let succ = top.1;
                    if succ == grid * grid {
                        let (cfg, _, _) = stack.pop().expect("nonempty");
                        colour.insert(cfg, 2);
                        continue;
                    }
                    top.1 += 1;
                    let (a, b) = (succ / grid, succ % grid);
                    let (p1, p2, s1, s2) = top.0.clone();
                    let (n1, o1) = &table[p1][a];
                    let (n2, o2) = &table[p2][b];
                    let Some((u1, u2)) = advance(&s1, &s2, o1, o2) else { continue };
                    let next: Config = (*n1, *n2, u1, u2);
                    match colour.get(&next) {
                        Some(1) => {
                            let loop_start = stack.iter().position(|f| f.0 == next).expect("on stack");
                            let mut steps: Vec<(usize, usize)> = stack.iter().map(|f| f.2).collect();
                            steps.push((a, b));
                            let word = |pick: fn(&(usize, usize)) -> usize| {
                                let mut x = MultiWord::empty(p.d);
                                for &c in prefix {
                                    x.append(&p.grid_word(c));
                                }
                                for s in &steps {
                                    x.append(&p.grid_word(pick(s)));
                                }
                                x
                            };
                            return Ok(Injectivity::NotInjective {
                                first: word(|s| s.0),
                                second: word(|s| s.1),
                                tail_from: prefix.len() + loop_start + 1,
                            });
                        }
                        Some(_) => {}
                        None => {
                            if colour.len() >= budget {
                                return Err(Error::InjectivityUnknown { budget });
                            }
                            colour.insert(next.clone(), 1);
                            stack.push((next, 0, (a, b)));
                        }
                    }
                }
            }
        }
    }
    Ok(Injectivity::Injective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transducer::RawTransducer;
    use crate::words::Params;

    #[test]
    fn identity_and_swap_are_injective() {
        let id = FiniteTransducer::identity(Params::new(2, 2).unwrap());
        assert_eq!(is_state_injective(&id, 0, 10_000).unwrap(), Injectivity::Injective);
        let swap = fixtures::swap_zero_double_zero();
        for q in 0..4 {
            assert!(is_state_injective(&swap, q, 10_000).unwrap().is_injective(), "state {q}");
        }
        let prod = fixtures::product_figure();
        assert!(is_state_injective(&prod, 0, 100_000).unwrap().is_injective());
    }

    #[test]
    fn silent_state_is_not_injective() {
        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "-").unwrap();
        raw.set_named("q", 0, 1, "q", "-").unwrap();
        let t = raw.validate().unwrap();
        match is_state_injective(&t, 0, 1000).unwrap() {
            Injectivity::NotInjective { first, second, .. } => assert_ne!(first, second),
            Injectivity::Injective => panic!("constant map reported injective"),
        }
    }

    #[test]
    fn collapsing_letters_is_not_injective() {
        // Both letters write 0.
        let p = Params::new(2, 1).unwrap();
        let mut raw = RawTransducer::with_state_names(p, &["q"]);
        raw.set_named("q", 0, 0, "q", "0").unwrap();
        raw.set_named("q", 0, 1, "q", "0").unwrap();
        let t = raw.validate().unwrap();
        let r = is_state_injective(&t, 0, 1000).unwrap();
        let Injectivity::NotInjective { first, second, tail_from } = r else { panic!("expected witness") };
        assert_eq!(t.read(0, &first).unwrap().1, t.read(0, &second).unwrap().1);
        assert!(tail_from <= first.size());
    }
}
