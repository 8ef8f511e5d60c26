use super::ScoringError;

/// Number of consecutive pairs whose roles differ.
pub fn count_shifts<T: PartialEq>(roles: &[T]) -> usize {
    roles.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Speaker role shift rate: `N_shifts / (N_turns - 1)`.
///
/// Generic over the role label so annotated free-text labels work as well
/// as [`PragmaticRole`](crate::dialogue::PragmaticRole).
pub fn role_shift_rate<T: PartialEq>(roles: &[T]) -> Result<f64, ScoringError> {
    if roles.len() < 2 {
        return Err(ScoringError::TooFewTurns(roles.len()));
    }
    Ok(count_shifts(roles) as f64 / (roles.len() - 1) as f64)
}

/// Whole percent, truncated: 1/3 renders as 33.
pub fn shift_percent(rate: f64) -> u32 {
    // the epsilon keeps exact fractions such as 0.29 * 100 from landing on 28
    (rate * 100.0 + 1e-9).floor() as u32
}
