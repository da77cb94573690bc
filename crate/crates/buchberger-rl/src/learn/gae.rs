/// Generalized advantage estimation over one trajectory.
///
/// `values` has one entry per step; `bootstrap` is `V(s_T)` — zero at a
/// true terminal, the estimated value of the final observation when the
/// episode was truncated. Returns `(advantages, value_targets)` with
/// `target_t = A_t + V(s_t)`.
pub fn gae(
    rewards: &[f64],
    values: &[f64],
    bootstrap: f64,
    gamma: f64,
    lambda: f64,
) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(rewards.len(), values.len());
    let t = rewards.len();
    let mut advantages = vec![0.0; t];
    let mut acc = 0.0;
    for i in (0..t).rev() {
        let next_v = if i + 1 < t { values[i + 1] } else { bootstrap };
        let delta = rewards[i] + gamma * next_v - values[i];
        acc = delta + gamma * lambda * acc;
        advantages[i] = acc;
    }
    let targets = advantages
        .iter()
        .zip(values)
        .map(|(a, v)| a + v)
        .collect();
    (advantages, targets)
}
