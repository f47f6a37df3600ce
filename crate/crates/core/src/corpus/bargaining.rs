//! Two-round bargaining over one unit on a finite grid.
//!
//! Player 1 proposes a share `x1` to keep; player 2 accepts or rejects. After
//! a rejection player 2 proposes a share `x2` to keep and player 1 accepts or
//! rejects. After a second rejection a chance move draws player 1's share
//! uniformly from the grid and player 2 gets the rest.

use crate::game::{GameBuilder, GameTree};
use crate::rational::{format_rational, ratio, Payoffs, Rational};
use num_traits::One;

fn split(mine: &Rational) -> (Rational, Rational) {
    (mine.clone(), Rational::one() - mine)
}

/// Grid `{0, 1/n, ..., 1}`. Proposal labels are the share kept by the
/// proposer, written as rational literals.
///
/// Node ids: `p1` (first proposal), `r1_k` (response to share k/n), `a1_k`,
/// `p2_k`, `r2_k_m`, `a2_k_m`, `c_k_m` (chance), `z_k_m_j`.
pub fn bargaining(n: usize) -> GameTree {
    assert!(n >= 2, "grid needs at least two steps");
    let grid: Vec<Rational> = (0..=n).map(|k| ratio(k as i64, n as i64)).collect();
    let label = |k: usize| format_rational(&grid[k]);
    let mut g = GameBuilder::new(2);
    g.name(format!("bargaining on a grid of {n}"));
    let ok = "bargaining ids are unique";
    g.decision("p1", 1, (0..=n).map(|k| (label(k), format!("r1_{k}"))))
        .expect(ok);
    for k in 0..=n {
        g.decision(
            &format!("r1_{k}"),
            2,
            [("accept", format!("a1_{k}")), ("reject", format!("p2_{k}"))],
        )
        .expect(ok);
        let (p1, p2) = split(&grid[k]);
        g.terminal(&format!("a1_{k}"), Payoffs(vec![p1, p2]))
            .expect(ok);
        g.decision(
            &format!("p2_{k}"),
            2,
            (0..=n).map(|m| (label(m), format!("r2_{k}_{m}"))),
        )
        .expect(ok);
        for m in 0..=n {
            g.decision(
                &format!("r2_{k}_{m}"),
                1,
                [
                    ("accept", format!("a2_{k}_{m}")),
                    ("reject", format!("c_{k}_{m}")),
                ],
            )
            .expect(ok);
            let (p2, p1) = split(&grid[m]);
            g.terminal(&format!("a2_{k}_{m}"), Payoffs(vec![p1, p2]))
                .expect(ok);
            let p = ratio(1, n as i64 + 1);
            g.chance(
                &format!("c_{k}_{m}"),
                (0..=n).map(|j| (p.clone(), format!("z_{k}_{m}_{j}"))),
            )
            .expect(ok);
            for (j, share) in grid.iter().enumerate() {
                let (p1, p2) = split(share);
                g.terminal(&format!("z_{k}_{m}_{j}"), Payoffs(vec![p1, p2]))
                    .expect(ok);
            }
        }
    }
    g.root("p1");
    g.build().expect("bargaining tree is well formed")
}
