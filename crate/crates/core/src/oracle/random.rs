//! Random closed formulas for property tests.

use rand::Rng;

use crate::formula::{AgentSet, FixKind, Formula, ModalOp};
use crate::logic::Logic;

#[derive(Clone, Copy, Debug)]
pub struct FormulaGen {
    pub logic: Logic,
    pub agents: u32,
    pub atoms: usize,
    pub max_grade: u32,
    pub depth: u32,
}

impl FormulaGen {
    pub fn new(logic: Logic) -> Self {
        FormulaGen { logic, agents: 2, atoms: 2, max_grade: 1, depth: 4 }
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> Formula {
        let mut scope = Vec::new();
        let mut fresh = 0;
        self.gen(rng, self.depth, &mut scope, &mut fresh)
    }

    fn modal_op<R: Rng>(&self, rng: &mut R) -> ModalOp {
        let ex = rng.gen_bool(0.5);
        match self.logic {
            Logic::K | Logic::KD => {
                if ex {
                    ModalOp::Diamond
                } else {
                    ModalOp::Box
                }
            }
            Logic::Graded => {
                let g = rng.gen_range(0..=self.max_grade);
                if ex {
                    ModalOp::AtLeast(g)
                } else {
                    ModalOp::AllBut(g)
                }
            }
            Logic::Amc => {
                let d = AgentSet::from_agents((1..=self.agents).filter(|_| rng.gen_bool(0.5)));
                if ex {
                    ModalOp::Enforce(d)
                } else {
                    ModalOp::Allow(d)
                }
            }
        }
    }

    fn leaf<R: Rng>(&self, rng: &mut R, scope: &[String]) -> Formula {
        if !scope.is_empty() && rng.gen_bool(0.4) {
            return Formula::Var(scope[rng.gen_range(0..scope.len())].clone());
        }
        match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            k => {
                let a = format!("p{}", rng.gen_range(0..self.atoms));
                if k % 2 == 0 {
                    Formula::Atom(a)
                } else {
                    Formula::NegAtom(a)
                }
            }
        }
    }

    fn gen<R: Rng>(&self, rng: &mut R, depth: u32, scope: &mut Vec<String>, fresh: &mut u32) -> Formula {
        if depth == 0 {
            return self.leaf(rng, scope);
        }
        match rng.gen_range(0..10) {
            0 => self.leaf(rng, scope),
            1 | 2 => Formula::And(
                Box::new(self.gen(rng, depth - 1, scope, fresh)),
                Box::new(self.gen(rng, depth - 1, scope, fresh)),
            ),
            3 | 4 => Formula::Or(
                Box::new(self.gen(rng, depth - 1, scope, fresh)),
                Box::new(self.gen(rng, depth - 1, scope, fresh)),
            ),
            5..=7 => Formula::Modal(self.modal_op(rng), Box::new(self.gen(rng, depth - 1, scope, fresh))),
            _ => {
                let x = format!("X{fresh}");
                *fresh += 1;
                let kind = if rng.gen_bool(0.5) { FixKind::Mu } else { FixKind::Nu };
                scope.push(x.clone());
                let body = self.gen(rng, depth - 1, scope, fresh);
                scope.pop();
                Formula::Fix(kind, x, Box::new(body))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn generated_formulas_are_closed_and_clean() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for logic in [Logic::K, Logic::KD, Logic::Graded, Logic::Amc] {
            let g = FormulaGen::new(logic);
            for _ in 0..50 {
                let f = g.generate(&mut rng);
                assert!(f.is_closed());
                assert!(f.is_clean());
                assert!(f.modal_ops().into_iter().all(|op| logic.admits(op)));
            }
        }
    }
}
