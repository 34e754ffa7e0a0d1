//! Published minimum success probabilities, transcribed for comparison.
//! The same values are checked in as CSV under `data/`.

/// Pr_min for the integral transform, `n = 20 ..= 34`.
pub const INTEGRAL_PR_MIN: [(u32, f64); 15] = [
    (20, 0.3630),
    (21, 0.3450),
    (22, 0.3270),
    (23, 0.3108),
    (24, 0.2951),
    (25, 0.2802),
    (26, 0.2661),
    (27, 0.2527),
    (28, 0.2399),
    (29, 0.2278),
    (30, 0.2163),
    (31, 0.2054),
    (32, 0.1950),
    (33, 0.1852),
    (34, 0.1759),
];

/// Pr_min for the modified AQFT at `m = 3`, `n = 20 ..= 31`.
pub const MAQFT3_PR_MIN: [(u32, f64); 12] = [
    (20, 0.7568),
    (21, 0.7472),
    (22, 0.7375),
    (23, 0.7282),
    (24, 0.7188),
    (25, 0.7096),
    (26, 0.7006),
    (27, 0.6916),
    (28, 0.6827),
    (29, 0.6740),
    (30, 0.6654),
    (31, 0.6569),
];

/// Looks up a published entry.
pub fn lookup(table: &[(u32, f64)], n: u32) -> Option<f64> {
    table.iter().find(|&&(m, _)| m == n).map(|&(_, v)| v)
}
