//! Brute-force cooperative-game references.
//!
//! Exact Shapley values by full coalition enumeration and Harsanyi
//! dividends by Möbius transform. These are the independent oracles used
//! to certify the network's closed-form Shapley extraction; they never
//! call into the closed-form path.

use crate::error::{Error, Result};
use crate::valuator::{masked_prediction, ForwardTrace, ReceptiveFields, Valuator};

/// Exact enumeration is refused above this player count (2^n evaluations).
pub const MAX_PLAYERS: usize = 16;

fn check_players(n: usize) -> Result<()> {
    if n > MAX_PLAYERS {
        return Err(Error::Complexity {
            players: n,
            limit: MAX_PLAYERS,
        });
    }
    Ok(())
}

/// Evaluate `v` on every subset of `0..n`, indexed by bitmask.
fn value_table<F: FnMut(u32) -> f64>(mut v: F, n: usize) -> Vec<f64> {
    (0u32..1 << n).map(|mask| v(mask)).collect()
}

/// Exact Shapley values of the game `v` over players `0..n`.
///
/// phi_m = sum over S not containing m of |S|!(n-|S|-1)!/n! * [v(S+m) - v(S)].
/// Coalition weights are exact 128-bit factorial products; the division by
/// n! happens once at the end.
pub fn brute_force_shapley<F: FnMut(u32) -> f64>(v: F, n: usize) -> Result<Vec<f64>> {
    check_players(n)?;
    let table = value_table(v, n);
    Ok(shapley_from_table(&table, n))
}

fn factorials(n: usize) -> Vec<u128> {
    let mut f = vec![1u128; n + 1];
    for k in 1..=n {
        f[k] = f[k - 1] * k as u128;
    }
    f
}

fn shapley_from_table(table: &[f64], n: usize) -> Vec<f64> {
    let fact = factorials(n);
    let full_weight = fact[n] as f64;
    let mut phi = vec![0.0f64; n];
    for m in 0..n {
        let bit = 1u32 << m;
        let mut acc = 0.0f64;
        for mask in 0u32..(1 << n) {
            if mask & bit != 0 {
                continue;
            }
            let size = mask.count_ones() as usize;
            let weight = (fact[size] * fact[n - size - 1]) as f64;
            acc += weight * (table[(mask | bit) as usize] - table[mask as usize]);
        }
        phi[m] = acc / full_weight;
    }
    phi
}

/// Harsanyi dividends of the game `v`: the Möbius transform
/// I(S) = sum over T subset of S of (-1)^{|S|-|T|} v(T), computed in place
/// in O(n 2^n). Returned as a vector indexed by subset bitmask.
pub fn harsanyi_dividends<F: FnMut(u32) -> f64>(v: F, n: usize) -> Result<Vec<f64>> {
    check_players(n)?;
    let mut table = value_table(v, n);
    for i in 0..n {
        let bit = 1usize << i;
        for mask in 0..table.len() {
            if mask & bit != 0 {
                table[mask] -= table[mask ^ bit];
            }
        }
    }
    Ok(table)
}

/// Shapley values reconstructed from dividends: phi_m = sum over S
/// containing m of I(S)/|S|.
pub fn shapley_from_dividends(dividends: &[f64], n: usize) -> Vec<f64> {
    let mut phi = vec![0.0f64; n];
    for (mask, &dividend) in dividends.iter().enumerate() {
        if mask == 0 {
            continue;
        }
        let size = mask.count_ones() as f64;
        let share = dividend / size;
        let mut bits = mask;
        while bits != 0 {
            let m = bits.trailing_zeros() as usize;
            phi[m] += share;
            bits &= bits - 1;
        }
    }
    phi
}

/// One player's row in an [`AuditReport`].
#[derive(Debug, Clone, serde::Serialize)]
pub struct AuditRow {
    pub player: usize,
    pub phi_net: f64,
    pub phi_oracle: f64,
    pub deviation: f64,
}

/// Comparison of the network's closed-form Shapley values against the
/// brute-force enumeration of its own masked value function.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AuditReport {
    pub players: usize,
    pub max_deviation: f64,
    /// |sum phi - v(N) + v(empty)| for the brute-force values.
    pub efficiency_gap: f64,
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.max_deviation <= tolerance
    }
}

impl std::fmt::Display for AuditReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "player    phi_net         phi_oracle      |dev|")?;
        for row in &self.rows {
            writeln!(
                f,
                "{:<9} {:<15.8} {:<15.8} {:.3e}",
                row.player, row.phi_net, row.phi_oracle, row.deviation
            )?;
        }
        writeln!(f, "max deviation      {:.3e}", self.max_deviation)?;
        write!(f, "efficiency gap     {:.3e}", self.efficiency_gap)
    }
}

/// Audit a valuator on the encoded batch signal `z0`: runs the masked
/// network as the value function, enumerates brute-force Shapley values,
/// and compares them with the closed-form extraction from `trace`.
pub fn audit(
    valuator: &Valuator,
    trace: &ForwardTrace,
    fields: &ReceptiveFields,
) -> Result<AuditReport> {
    let n = valuator.batch_size();
    check_players(n)?;
    let z0 = &trace.z0;
    let mut keep = vec![false; n];
    let mut game = |mask: u32| {
        for (m, slot) in keep.iter_mut().enumerate() {
            *slot = mask & (1 << m) != 0;
        }
        masked_prediction(valuator, z0, &keep)
    };
    let table = value_table(&mut game, n);
    let phi_oracle = shapley_from_table(&table, n);
    let phi_net = crate::valuator::shapley_values(valuator, trace, fields);

    let total: f64 = phi_oracle.iter().sum();
    let grand = table[table.len() - 1];
    let empty = table[0];
    let efficiency_gap = (total - grand + empty).abs();

    let rows: Vec<AuditRow> = (0..n)
        .map(|m| AuditRow {
            player: m,
            phi_net: phi_net[m],
            phi_oracle: phi_oracle[m],
            deviation: (phi_net[m] - phi_oracle[m]).abs(),
        })
        .collect();
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(AuditReport {
        players: n,
        max_deviation,
        efficiency_gap,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_game(mask: u32) -> f64 {
        // v(empty)=0, v({0})=1, v({1})=2, v({0,1})=4
        match mask {
            0 => 0.0,
            0b01 => 1.0,
            0b10 => 2.0,
            0b11 => 4.0,
            _ => unreachable!(),
        }
    }

    #[test]
    fn hand_enumerated_two_player_game() {
        let phi = brute_force_shapley(hand_game, 2).unwrap();
        assert!((phi[0] - 1.5).abs() < 1e-12);
        assert!((phi[1] - 2.5).abs() < 1e-12);
    }

    #[test]
    fn hand_enumerated_dividends() {
        let dividends = harsanyi_dividends(hand_game, 2).unwrap();
        assert!((dividends[0b01] - 1.0).abs() < 1e-12);
        assert!((dividends[0b10] - 2.0).abs() < 1e-12);
        assert!((dividends[0b11] - 1.0).abs() < 1e-12);
        // Dividends sum back to v(N).
        let total: f64 = dividends.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn additive_game_returns_marginal_costs() {
        let costs = [0.5, -1.25, 2.0, 0.125, 3.5];
        let n = costs.len();
        let v = |mask: u32| -> f64 {
            (0..n)
                .filter(|m| mask & (1 << m) != 0)
                .map(|m| costs[m])
                .sum()
        };
        let phi = brute_force_shapley(v, n).unwrap();
        for m in 0..n {
            assert!((phi[m] - costs[m]).abs() < 1e-12, "player {m}");
        }
        let dividends = harsanyi_dividends(v, n).unwrap();
        for (mask, &d) in dividends.iter().enumerate() {
            if (mask as u32).count_ones() >= 2 {
                assert!(d.abs() < 1e-12, "dividend of {mask:b} should vanish");
            }
        }
    }

    #[test]
    fn constant_game_has_null_players() {
        let phi = brute_force_shapley(|_| 7.25, 6).unwrap();
        for &p in &phi {
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn symmetric_players_get_equal_shares() {
        // Value depends only on coalition size: all players symmetric.
        let v = |mask: u32| (mask.count_ones() as f64).powi(2);
        let phi = brute_force_shapley(v, 5).unwrap();
        for &p in &phi[1..] {
            assert!((p - phi[0]).abs() < 1e-12);
        }
        // Efficiency: shares sum to v(N) - v(empty) = 25.
        let total: f64 = phi.iter().sum();
        assert!((total - 25.0).abs() < 1e-9);
    }

    #[test]
    fn efficiency_and_dividend_round_trip_on_random_games() {
        use rand::Rng;
        let mut rng = crate::rng::stream(11, "oracle-test");
        for n in 2..=8usize {
            let table: Vec<f64> = (0..1u32 << n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let v = |mask: u32| table[mask as usize];
            let phi = brute_force_shapley(v, n).unwrap();
            let total: f64 = phi.iter().sum();
            let expected = table[(1usize << n) - 1] - table[0];
            assert!((total - expected).abs() < 1e-9, "efficiency at n={n}");

            let dividends = harsanyi_dividends(v, n).unwrap();
            let from_dividends = shapley_from_dividends(&dividends, n);
            for m in 0..n {
                assert!(
                    (phi[m] - from_dividends[m]).abs() < 1e-9,
                    "dividend reconstruction at n={n}, m={m}"
                );
            }
            let dividend_total: f64 = dividends.iter().sum();
            assert!((dividend_total - table[(1usize << n) - 1]).abs() < 1e-9);
        }
    }

    #[test]
    fn refuses_oversized_games() {
        let err = brute_force_shapley(|_| 0.0, 17).unwrap_err();
        assert!(matches!(err, Error::Complexity { players: 17, .. }));
        let err = harsanyi_dividends(|_| 0.0, 17).unwrap_err();
        assert!(matches!(err, Error::Complexity { .. }));
    }
}
