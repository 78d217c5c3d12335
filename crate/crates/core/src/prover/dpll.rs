//! DPLL over integer literals (DIMACS convention: `v` or `-v`, `v >= 1`).

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    /// `assignment[v - 1]` is the value of variable `v`.
    Sat(Vec<bool>),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }
}

/// Decide satisfiability of `clauses` over variables `1..=num_vars`
/// (variables beyond `num_vars` are admitted too).
pub fn dpll(num_vars: usize, clauses: &[Vec<i32>]) -> SatResult {
    dpll_budget(num_vars, clauses, u64::MAX).expect("unbounded search")
}

/// As [`dpll`], giving up after `max_decisions` branching decisions.
pub fn dpll_budget(num_vars: usize, clauses: &[Vec<i32>], max_decisions: u64) -> Option<SatResult> {
    let n = clauses
        .iter()
        .flatten()
        .map(|l| l.unsigned_abs() as usize)
        .max()
        .unwrap_or(0)
        .max(num_vars);
    let mut s = Solver::new(n, clauses);
    s.run(max_decisions)
}

fn code(lit: i32) -> usize {
    2 * lit.unsigned_abs() as usize + usize::from(lit < 0)
}

struct Solver {
    clauses: Vec<Vec<i32>>,
    occ: Vec<Vec<usize>>,
    value: Vec<i8>,
    sat: Vec<u32>,
    falsified: Vec<u32>,
    active: Vec<u32>,
    trail: Vec<i32>,
    pending: Vec<usize>,
    conflict: bool,
    trivially_unsat: bool,
}

impl Solver {
    fn new(n: usize, input: &[Vec<i32>]) -> Self {
        let mut clauses = Vec::new();
        let mut trivially_unsat = false;
        for c in input {
            let mut c: Vec<i32> = c.clone();
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|l| c.contains(&-l)) {
                continue;
            }
            trivially_unsat |= c.is_empty();
            clauses.push(c);
        }
        let mut occ = vec![Vec::new(); 2 * n + 2];
        let mut active = vec![0; 2 * n + 2];
        for (i, c) in clauses.iter().enumerate() {
            for &l in c {
                occ[code(l)].push(i);
                active[code(l)] += 1;
            }
        }
        let m = clauses.len();
        Solver {
            clauses,
            occ,
            value: vec![0; n + 1],
            sat: vec![0; m],
            falsified: vec![0; m],
            active,
            trail: Vec::new(),
            pending: Vec::new(),
            conflict: false,
            trivially_unsat,
        }
    }

    fn lit_value(&self, l: i32) -> i8 {
        let v = self.value[l.unsigned_abs() as usize];
        if l < 0 {
            -v
        } else {
            v
        }
    }

    fn assign(&mut self, lit: i32) {
        self.value[lit.unsigned_abs() as usize] = if lit > 0 { 1 } else { -1 };
        self.trail.push(lit);
        for k in 0..self.occ[code(lit)].len() {
            let c = self.occ[code(lit)][k];
            self.sat[c] += 1;
            if self.sat[c] == 1 {
                for j in 0..self.clauses[c].len() {
                    self.active[code(self.clauses[c][j])] -= 1;
                }
            }
        }
        for k in 0..self.occ[code(-lit)].len() {
            let c = self.occ[code(-lit)][k];
            self.falsified[c] += 1;
            if self.sat[c] == 0 {
                let len = self.clauses[c].len() as u32;
                if self.falsified[c] == len {
                    self.conflict = true;
                } else if self.falsified[c] + 1 == len {
                    self.pending.push(c);
                }
            }
        }
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().unwrap();
            for k in 0..self.occ[code(-lit)].len() {
                let c = self.occ[code(-lit)][k];
                self.falsified[c] -= 1;
            }
            for k in 0..self.occ[code(lit)].len() {
                let c = self.occ[code(lit)][k];
                self.sat[c] -= 1;
                if self.sat[c] == 0 {
                    for j in 0..self.clauses[c].len() {
                        self.active[code(self.clauses[c][j])] += 1;
                    }
                }
            }
            self.value[lit.unsigned_abs() as usize] = 0;
        }
        self.pending.clear();
        self.conflict = false;
    }

    /// Unit propagation, then pure literals; false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            while let Some(c) = self.pending.pop() {
                if self.conflict {
                    return false;
                }
                if self.sat[c] > 0 {
                    continue;
                }
                match self.clauses[c].iter().copied().find(|&l| self.lit_value(l) == 0) {
                    Some(l) => self.assign(l),
                    None => {
                        self.conflict = true;
                    }
                }
            }
            if self.conflict {
                return false;
            }
            let mut any = false;
            for v in 1..self.value.len() {
                if self.value[v] != 0 {
                    continue;
                }
                let (p, n) = (self.active[code(v as i32)], self.active[code(-(v as i32))]);
                if p > 0 && n == 0 {
                    self.assign(v as i32);
                    any = true;
                } else if n > 0 && p == 0 {
                    self.assign(-(v as i32));
                    any = true;
                }
            }
            if !any && self.pending.is_empty() {
                return !self.conflict;
            }
        }
    }

    fn choose(&self) -> Option<i32> {
        (1..self.value.len())
            .filter(|&v| self.value[v] == 0)
            .map(|v| (v, self.active[code(v as i32)], self.active[code(-(v as i32))]))
            .filter(|&(_, p, n)| p + n > 0)
            .max_by_key(|&(v, p, n)| (p + n, std::cmp::Reverse(v)))
            .map(|(v, p, n)| if n > p { -(v as i32) } else { v as i32 })
    }

    fn run(&mut self, max_decisions: u64) -> Option<SatResult> {
        if self.trivially_unsat {
            return Some(SatResult::Unsat);
        }
        for c in 0..self.clauses.len() {
            if self.clauses[c].len() == 1 {
                self.pending.push(c);
            }
        }
        // (trail length before the decision, decided literal, already flipped)
        let mut levels: Vec<(usize, i32, bool)> = Vec::new();
        let mut decisions = 0u64;
        loop {
            if self.propagate() {
                let Some(lit) = self.choose() else {
                    let assignment = self.value[1..].iter().map(|&v| v > 0).collect();
                    return Some(SatResult::Sat(assignment));
                };
                decisions += 1;
                if decisions > max_decisions {
                    return None;
                }
                levels.push((self.trail.len(), lit, false));
                self.assign(lit);
                continue;
            }
            loop {
                let Some((len, lit, flipped)) = levels.pop() else {
                    return Some(SatResult::Unsat);
                };
                self.undo_to(len);
                if !flipped {
                    levels.push((len, -lit, true));
                    self.assign(-lit);
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn satisfies(a: &[bool], cs: &[Vec<i32>]) -> bool {
        cs.iter().all(|c| c.iter().any(|&l| a[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    #[test]
    fn trivial() {
        assert_eq!(dpll(0, &[]), SatResult::Sat(vec![]));
        assert_eq!(dpll(1, &[vec![1], vec![-1]]), SatResult::Unsat);
        assert_eq!(dpll(1, &[vec![]]), SatResult::Unsat);
    }

    #[test]
    fn random_3cnf_against_enumeration() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..300 {
            let m = rng.gen_range(1..45);
            let cs: Vec<Vec<i32>> = (0..m)
                .map(|_| (0..3).map(|_| rng.gen_range(1..=8) * if rng.gen() { 1 } else { -1 }).collect())
                .collect();
            let brute = (0..256u32).any(|mask| {
                let a: Vec<bool> = (0..8).map(|i| mask >> i & 1 == 1).collect();
                satisfies(&a, &cs)
            });
            match dpll(8, &cs) {
                SatResult::Sat(a) => assert!(brute && satisfies(&a, &cs), "{cs:?}"),
                SatResult::Unsat => assert!(!brute, "{cs:?}"),
            }
        }
    }

    #[test]
    fn pigeonhole_needs_decisions() {
        let var = |i: i32, j: i32| i * 2 + j + 1;
        let mut cs: Vec<Vec<i32>> = (0..3).map(|i| vec![var(i, 0), var(i, 1)]).collect();
        for j in 0..2 {
            for i in 0..3 {
                for k in i + 1..3 {
                    cs.push(vec![-var(i, j), -var(k, j)]);
                }
            }
        }
        assert_eq!(dpll_budget(6, &cs, 0), None);
        assert_eq!(dpll(6, &cs), SatResult::Unsat);
    }
}
