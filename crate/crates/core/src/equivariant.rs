//! Backtracking search for families of maps commuting with given actions.
//!
//! A problem has sorts `k`, each with a domain and codomain size, and
//! actions `k → k'` given as a domain map and a codomain map. A solution
//! assigns `f_k: dom_k → cod_k` so that `f_k'(dom_act(x)) = cod_act(f_k(x))`
//! for every action and every `x`.

use crate::error::{Error, Result};

const UNSET: usize = usize::MAX;

pub(crate) struct Action {
    pub from: usize,
    pub to: usize,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
}

#[derive(Default)]
pub(crate) struct Problem {
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub actions: Vec<Action>,
}

pub(crate) struct Search<'a> {
    problem: &'a Problem,
    injective: bool,
    limit: Option<usize>,
    cap: u64,
    what: &'a str,
    out_of: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    sort_of: Vec<usize>,
    value: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    steps: u64,
    found: Vec<Vec<Vec<usize>>>,
}

impl<'a> Search<'a> {
    pub fn new(problem: &'a Problem, what: &'a str, cap: u64) -> Self {
        let mut out_of = vec![Vec::new(); problem.dom.len()];
        for (i, a) in problem.actions.iter().enumerate() {
            out_of[a.from].push(i);
        }
        let mut offsets = Vec::with_capacity(problem.dom.len());
        let mut sort_of = Vec::new();
        for (k, &n) in problem.dom.iter().enumerate() {
            offsets.push(sort_of.len());
            sort_of.extend(std::iter::repeat_n(k, n));
        }
        Search {
            problem,
            injective: false,
            limit: None,
            cap,
            what,
            out_of,
            offsets,
            sort_of,
            value: problem.dom.iter().map(|&n| vec![UNSET; n]).collect(),
            used: problem.cod.iter().map(|&n| vec![false; n]).collect(),
            trail: Vec::new(),
            steps: 0,
            found: Vec::new(),
        }
    }

    /// Only injective families.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    /// Stop after this many solutions.
    pub fn limit(mut self, n: usize) -> Self {
        self.limit = Some(n);
        self
    }

    /// Every solution in lexicographic order of the flattened family.
    pub fn run(mut self) -> Result<Vec<Vec<Vec<usize>>>> {
        if self.injective
            && self
                .problem
                .dom
                .iter()
                .zip(&self.problem.cod)
                .any(|(d, c)| d > c)
        {
            return Ok(Vec::new());
        }
        self.go(0)?;
        Ok(self.found)
    }

    fn done(&self) -> bool {
        self.limit.is_some_and(|n| self.found.len() >= n)
    }

    fn go(&mut self, mut var: usize) -> Result<()> {
        while var < self.sort_of.len() {
            let k = self.sort_of[var];
            if self.value[k][var - self.offsets[k]] == UNSET {
                break;
            }
            var += 1;
        }
        if var == self.sort_of.len() {
            self.found.push(self.value.clone());
            return Ok(());
        }
        let k = self.sort_of[var];
        let x = var - self.offsets[k];
        for v in 0..self.problem.cod[k] {
            self.steps += 1;
            if self.steps > self.cap {
                return Err(Error::budget(self.what, u128::from(self.steps), self.cap));
            }
            let mark = self.trail.len();
            if self.assign(k, x, v) {
                self.go(var + 1)?;
            }
            self.undo(mark);
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    /// Sets `f_k(x) = v` and everything it forces; false on conflict.
    fn assign(&mut self, k: usize, x: usize, v: usize) -> bool {
        let mut stack = vec![(k, x, v)];
        while let Some((k, x, v)) = stack.pop() {
            let cur = self.value[k][x];
            if cur != UNSET {
                if cur != v {
                    return false;
                }
                continue;
            }
            if self.injective {
                if self.used[k][v] {
                    return false;
                }
                self.used[k][v] = true;
            }
            self.value[k][x] = v;
            self.trail.push((k, x));
            for &i in &self.out_of[k] {
                let a = &self.problem.actions[i];
                stack.push((a.to, a.dom[x], a.cod[v]));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (k, x) = self.trail.pop().expect("trail above mark");
            if self.injective {
                let v = self.value[k][x];
                self.used[k][v] = false;
            }
            self.value[k][x] = UNSET;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(n: usize) -> Vec<usize> {
        (0..n).map(|i| (i + 1) % n).collect()
    }

    #[test]
    fn counts_equivariant_maps_of_cyclic_sets() {
        // maps Z3 → Z3 commuting with rotation: determined by the image of 0
        let p = Problem {
            dom: vec![3],
            cod: vec![3],
            actions: vec![Action {
                from: 0,
                to: 0,
                dom: rotation(3),
                cod: rotation(3),
            }],
        };
        assert_eq!(Search::new(&p, "t", 100).run().unwrap().len(), 3);
        // Z3 → Z1: one map; Z1 → Z3: none
        let q = Problem {
            dom: vec![1],
            cod: vec![3],
            actions: vec![Action {
                from: 0,
                to: 0,
                dom: vec![0],
                cod: rotation(3),
            }],
        };
        assert!(Search::new(&q, "t", 100).run().unwrap().is_empty());
    }

    #[test]
    fn brute_force_agrees() {
        // two sorts linked by a non-injective action; compare with filtering all maps
        let p = Problem {
            dom: vec![3, 2],
            cod: vec![2, 3],
            actions: vec![Action {
                from: 0,
                to: 1,
                dom: vec![0, 1, 1],
                cod: vec![2, 0],
            }],
        };
        let found = Search::new(&p, "t", 1000).run().unwrap();
        let mut brute = Vec::new();
        for m in 0..2usize.pow(3) * 3usize.pow(2) {
            let f0: Vec<usize> = (0..3).map(|i| (m >> i) & 1).collect();
            let r = m >> 3;
            let f1 = vec![r % 3, r / 3];
            if (0..3).all(|x| f1[p.actions[0].dom[x]] == p.actions[0].cod[f0[x]]) {
                brute.push(vec![f0, f1]);
            }
        }
        brute.sort();
        assert_eq!(found, brute);
    }

    #[test]
    fn injective_and_budget() {
        let p = Problem {
            dom: vec![3],
            cod: vec![3],
            actions: vec![],
        };
        assert_eq!(
            Search::new(&p, "t", 1000).injective().run().unwrap().len(),
            6
        );
        assert_eq!(Search::new(&p, "t", 1000).limit(2).run().unwrap().len(), 2);
        assert!(Search::new(&p, "t", 5).run().unwrap_err().is_budget());
    }
}
