//! Zielonka's recursive algorithm for explicit parity games.

use rand::Rng;

/// A parity game with priorities on edges. Player Eloise (`eloise[v]`)
/// wins a play iff the largest priority seen infinitely often is even; a
/// player who cannot move loses.
#[derive(Clone, Debug)]
pub struct EdgeGame {
    pub eloise: Vec<bool>,
    pub edges: Vec<Vec<(usize, u32)>>,
}

impl EdgeGame {
    pub fn random<R: Rng>(rng: &mut R, nodes: usize, max_priority: u32, max_out: usize) -> EdgeGame {
        let eloise = (0..nodes).map(|_| rng.gen_bool(0.5)).collect();
        let edges = (0..nodes)
            .map(|_| {
                let k = rng.gen_range(0..=max_out);
                (0..k).map(|_| (rng.gen_range(0..nodes), rng.gen_range(0..=max_priority))).collect()
            })
            .collect();
        EdgeGame { eloise, edges }
    }
}

/// Winning region of Eloise.
pub fn zielonka(g: &EdgeGame) -> Vec<bool> {
    // Vertex game: original nodes keep priority 0, every edge becomes a
    // node carrying its priority, dead ends move to a losing sink.
    let n = g.eloise.len();
    let mut owner: Vec<bool> = g.eloise.clone();
    let mut prio: Vec<u32> = vec![0; n];
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    let win_e = n;
    let win_a = n + 1;
    owner.extend([true, true]);
    prio.extend([0, 1]);
    succ.push(vec![win_e]);
    succ.push(vec![win_a]);
    for v in 0..n {
        if g.edges[v].is_empty() {
            succ[v].push(if g.eloise[v] { win_a } else { win_e });
        }
        for &(w, p) in &g.edges[v] {
            let m = owner.len();
            owner.push(true);
            prio.push(p);
            succ.push(vec![w]);
            succ[v].push(m);
        }
    }
    let total = owner.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (v, s) in succ.iter().enumerate() {
        for &w in s {
            pred[w].push(v);
        }
    }
    let game = VertexGame { owner, prio, succ, pred };
    let all = vec![true; total];
    let (w0, _) = game.solve(&all);
    w0[..n].to_vec()
}

struct VertexGame {
    owner: Vec<bool>,
    prio: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl VertexGame {
    /// Attractor for `eloise` (or Abelard) to `target` inside `alive`.
    fn attractor(&self, alive: &[bool], target: &[bool], eloise: bool) -> Vec<bool> {
        let mut attr = target.to_vec();
        let mut count: Vec<usize> = (0..alive.len())
            .map(|v| self.succ[v].iter().filter(|&&w| alive[w]).count())
            .collect();
        let mut queue: Vec<usize> = (0..alive.len()).filter(|&v| attr[v]).collect();
        while let Some(w) = queue.pop() {
            for &v in &self.pred[w] {
                if !alive[v] || attr[v] {
                    continue;
                }
                if self.owner[v] == eloise {
                    attr[v] = true;
                    queue.push(v);
                } else {
                    count[v] -= 1;
                    if count[v] == 0 {
                        attr[v] = true;
                        queue.push(v);
                    }
                }
            }
        }
        attr
    }

    fn solve(&self, alive: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let n = alive.len();
        let Some(d) = (0..n).filter(|&v| alive[v]).map(|v| self.prio[v]).max() else {
            return (vec![false; n], vec![false; n]);
        };
        let i_eloise = d % 2 == 0;
        let top: Vec<bool> = (0..n).map(|v| alive[v] && self.prio[v] == d).collect();
        let a = self.attractor(alive, &top, i_eloise);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
        let (w0, w1) = self.solve(&rest);
        let opp = if i_eloise { &w1 } else { &w0 };
        if !opp.iter().any(|&x| x) {
            let whole = alive.to_vec();
            return if i_eloise { (whole, vec![false; n]) } else { (vec![false; n], whole) };
        }
        let b = self.attractor(alive, opp, !i_eloise);
        let rest: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
        let (mut w0, mut w1) = self.solve(&rest);
        let opp = if i_eloise { &mut w1 } else { &mut w0 };
        for v in 0..n {
            if b[v] {
                opp[v] = true;
            }
        }
        (w0, w1)
    }
}
