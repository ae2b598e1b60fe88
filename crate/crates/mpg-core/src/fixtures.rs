//! Catalog of small reference games used throughout the test suites and
//! experiments. Each fixture reproduces a known instance exactly; free
//! weights are supplied through `FixtureParams`.

use num::Zero;

use crate::error::CoreError;
use crate::game::{Edge, Game, Player};
use crate::rat::{rat, Rat};

/// Free parameters for fixtures that have them. Unset fields fall back to
/// per-fixture defaults.
#[derive(Debug, Clone, Default)]
pub struct FixtureParams {
    /// Parametrized edge weight (`non_convex`, `unstable`, `exponential`).
    pub x: Option<Rat>,
    /// Perturbation weight of `emerging_policies`.
    pub eps: Option<Rat>,
    /// Ladder size of `exponential` (the game has 2n vertices).
    pub n: Option<usize>,
    /// Full weight vector for the `one_player_*` fixtures, in edge order.
    pub weights: Option<Vec<Rat>>,
}

impl FixtureParams {
    pub fn with_x(mut self, x: Rat) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_eps(mut self, eps: Rat) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_weights(mut self, weights: Vec<Rat>) -> Self {
        self.weights = Some(weights);
        self
    }
}

fn game(owner: Vec<Player>, list: Vec<(usize, usize, Rat)>) -> Game {
    // Fixture tables are written 1-based to match their sources.
    let edges = list
        .into_iter()
        .map(|(from, to, weight)| Edge {
            from: from - 1,
            to: to - 1,
            weight,
        })
        .collect();
    Game::new(owner, edges)
}

fn zero() -> Rat {
    Rat::zero()
}

/// Returns a fixture game by name.
///
/// Catalog: `non_convex`, `exponential`, `emerging_policies`,
/// `unstable_good_approx`, `unstable`, `blackwell`, `one_player_3cycle`,
/// `one_player_4policies`.
pub fn paper_fixture(name: &str, params: &FixtureParams) -> Result<Game, CoreError> {
    use Player::{Max, Min};
    match name {
        "non_convex" => {
            let x = params.x.clone().unwrap_or_else(zero);
            Ok(game(
                vec![Min, Min, Min, Min, Max],
                vec![
                    (1, 2, x),
                    (2, 3, zero()),
                    (2, 5, zero()),
                    (3, 4, zero()),
                    (4, 1, zero()),
                    (5, 1, rat(-3, 1)),
                    (5, 2, rat(2, 1)),
                ],
            ))
        }
        "exponential" => {
            let n = params.n.unwrap_or(2);
            if n < 2 {
                return Err(CoreError::Domain(
                    "exponential fixture needs n >= 2".to_string(),
                ));
            }
            let x = params.x.clone().unwrap_or_else(|| rat(1, 1));
            // Vertices 1..=2n; odd vertices belong to Max, even to Min.
            let owner = (1..=2 * n)
                .map(|v| if v % 2 == 1 { Max } else { Min })
                .collect();
            let mut list = vec![
                (1, 2 * n, zero()),
                (2, 1, zero()),
                (3, 1, zero()),
            ];
            for k in 2..=n {
                if k == 2 {
                    list.push((4, 3, rat(2, 1)));
                    list.push((4, 2, x.clone()));
                } else {
                    list.push((2 * k, 2 * k - 1, rat(1, 1)));
                    list.push((2 * k, 2 * k - 2, rat(1, 1)));
                }
                if k < n {
                    let w = if k == 2 {
                        rat(1, 1)
                    } else {
                        let pow = Rat::new(1.into(), num::BigInt::from(1) << (k - 2));
                        rat(1, 1) - pow
                    };
                    list.push((2 * k + 1, 2 * k - 1, w.clone()));
                    list.push((2 * k + 1, 2 * k - 2, w));
                }
            }
            Ok(game(owner, list))
        }
        "emerging_policies" => {
            let eps = params.eps.clone().unwrap_or_else(zero);
            Ok(game(
                vec![Min, Max, Min],
                vec![
                    (1, 2, rat(-10, 1)),
                    (1, 3, zero()),
                    (2, 1, eps),
                    (2, 2, zero()),
                    (3, 2, zero()),
                ],
            ))
        }
        "unstable_good_approx" => Ok(game(
            vec![Min, Max, Min, Min],
            vec![
                (1, 2, zero()),
                (2, 3, zero()),
                (2, 4, zero()),
                (3, 1, zero()),
                (3, 2, rat(-10, 1)),
                (3, 4, zero()),
                (4, 4, zero()),
            ],
        )),
        "unstable" => {
            let x = params.x.clone().unwrap_or_else(zero);
            Ok(game(
                vec![Min, Max, Min],
                vec![
                    (1, 2, x),
                    (1, 3, zero()),
                    (2, 1, zero()),
                    (2, 3, zero()),
                    (3, 3, zero()),
                ],
            ))
        }
        "blackwell" => Ok(game(
            vec![Min, Min, Min],
            vec![
                (1, 2, rat(1, 1)),
                (1, 3, rat(-1, 1)),
                (2, 1, zero()),
                (2, 2, zero()),
                (3, 1, rat(5, 1)),
                (3, 2, rat(3, 1)),
                (3, 3, zero()),
            ],
        )),
        "one_player_3cycle" => {
            let w = match &params.weights {
                Some(w) if w.len() == 4 => w.clone(),
                Some(w) => {
                    return Err(CoreError::Domain(format!(
                        "one_player_3cycle takes 4 weights, got {}",
                        w.len()
                    )))
                }
                None => vec![rat(1, 1), zero(), zero(), rat(2, 1)],
            };
            let mut w = w.into_iter();
            Ok(game(
                vec![Min, Min],
                vec![
                    (1, 1, w.next().unwrap()),
                    (1, 2, w.next().unwrap()),
                    (2, 1, w.next().unwrap()),
                    (2, 2, w.next().unwrap()),
                ],
            ))
        }
        "one_player_4policies" => {
            let w = match &params.weights {
                Some(w) if w.len() == 5 => w.clone(),
                Some(w) => {
                    return Err(CoreError::Domain(format!(
                        "one_player_4policies takes 5 weights, got {}",
                        w.len()
                    )))
                }
                None => vec![zero(), rat(2, 1), zero(), rat(-1, 1), rat(2, 1)],
            };
            let mut w = w.into_iter();
            Ok(game(
                vec![Min, Min, Min],
                vec![
                    (1, 2, w.next().unwrap()),
                    (1, 3, w.next().unwrap()),
                    (2, 1, w.next().unwrap()),
                    (2, 2, w.next().unwrap()),
                    (3, 2, w.next().unwrap()),
                ],
            ))
        }
        other => Err(CoreError::UnknownFixture(other.to_string())),
    }
}

/// Names of all fixtures in the catalog.
pub fn fixture_names() -> &'static [&'static str] {
    &[
        "non_convex",
        "exponential",
        "emerging_policies",
        "unstable_good_approx",
        "unstable",
        "blackwell",
        "one_player_3cycle",
        "one_player_4policies",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::validate_game;

    #[test]
    fn every_fixture_validates() {
        for name in fixture_names() {
            let g = paper_fixture(name, &FixtureParams::default()).unwrap();
            let report = validate_game(&g);
            assert!(report.ok, "{name}: {report}");
        }
    }

    #[test]
    fn blackwell_matches_reference_weights() {
        let g = paper_fixture("blackwell", &FixtureParams::default()).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 7);
        assert!(g.owners().iter().all(|&p| p == Player::Min));
        let expect = [
            (0, 1, rat(1, 1)),
            (0, 2, rat(-1, 1)),
            (1, 0, rat(0, 1)),
            (1, 1, rat(0, 1)),
            (2, 0, rat(5, 1)),
            (2, 1, rat(3, 1)),
            (2, 2, rat(0, 1)),
        ];
        for (from, to, w) in expect {
            let e = g.edge_index(from, to).unwrap();
            assert_eq!(g.weight(e), &w);
        }
    }

    #[test]
    fn non_convex_takes_the_parameter() {
        let g = paper_fixture("non_convex", &FixtureParams::default().with_x(rat(8, 1)))
            .unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 7);
        assert_eq!(g.owner(4), Player::Max);
        let e = g.edge_index(0, 1).unwrap();
        assert_eq!(g.weight(e), &rat(8, 1));
        assert_eq!(g.weight(g.edge_index(4, 0).unwrap()), &rat(-3, 1));
        assert_eq!(g.weight(g.edge_index(4, 1).unwrap()), &rat(2, 1));
    }

    #[test]
    fn exponential_has_expected_shape() {
        for n in 2..=5 {
            let g = paper_fixture("exponential", &FixtureParams::default().with_n(n)).unwrap();
            assert_eq!(g.n(), 2 * n);
            assert_eq!(g.m(), 4 * n - 3, "n={n}");
            // Parameter slot is the edge (4,2), 1-based.
            let e = g.edge_index(3, 1).unwrap();
            assert_eq!(g.weight(e), &rat(1, 1));
        }
        let g = paper_fixture(
            "exponential",
            &FixtureParams::default().with_n(5).with_x(rat(1, 2)),
        )
        .unwrap();
        assert_eq!(g.weight(g.edge_index(3, 1).unwrap()), &rat(1, 2));
        assert_eq!(g.weight(g.edge_index(3, 2).unwrap()), &rat(2, 1));
        // 1-based vertex 2k+1 carries weight 1 - 1/2^(k-2) for k >= 3:
        // (7,5) and (7,4) get 1/2, (9,7) and (9,6) get 3/4.
        assert_eq!(g.weight(g.edge_index(6, 4).unwrap()), &rat(1, 2));
        assert_eq!(g.weight(g.edge_index(6, 3).unwrap()), &rat(1, 2));
        assert_eq!(g.weight(g.edge_index(8, 6).unwrap()), &rat(3, 4));
        assert_eq!(g.weight(g.edge_index(8, 5).unwrap()), &rat(3, 4));
        // Ladder edges above k = 2 keep weight 1.
        assert_eq!(g.weight(g.edge_index(5, 4).unwrap()), &rat(1, 1));
        assert_eq!(g.weight(g.edge_index(9, 8).unwrap()), &rat(1, 1));
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        assert!(matches!(
            paper_fixture("nope", &FixtureParams::default()),
            Err(CoreError::UnknownFixture(_))
        ));
    }
}
