use std::fmt;

use crate::error::{Error, Result};

/// Index of a payload in the active dataset store.
pub type ItemId = usize;

/// 1-based arrival index. Exactly one item arrives per timestep.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestep(pub u64);

impl Timestep {
    pub fn get(self) -> u64 {
        self.0
    }

    /// True when an item that arrived at `self` has left a window of size
    /// `size` ending at `now`, i.e. `self <= now - size`.
    pub fn expired(self, now: Timestep, size: u64) -> bool {
        self.0.saturating_add(size) <= now.0
    }
}

impl fmt::Display for Timestep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A stream element: arrival time plus a reference to its payload.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub t: Timestep,
    pub id: ItemId,
}

impl Item {
    pub fn new(t: u64, id: ItemId) -> Self {
        Item { t: Timestep(t), id }
    }
}

/// The `size` most recent timesteps ending at `end`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub end: Timestep,
    pub size: u64,
}

impl Window {
    pub fn new(end: u64, size: u64) -> Result<Self> {
        if end == 0 {
            return Err(Error::Input("window end must be a positive timestep".into()));
        }
        if size == 0 {
            return Err(Error::Input("window size must be positive".into()));
        }
        Ok(Window { end: Timestep(end), size })
    }

    /// First covered timestep, `max(1, end - size + 1)`.
    pub fn start(&self) -> Timestep {
        Timestep(self.end.0.saturating_sub(self.size) + 1)
    }

    pub fn contains(&self, t: Timestep) -> bool {
        t >= self.start() && t <= self.end
    }
}

/// Ids of the history items covered by `window`, ascending by timestep.
///
/// `history` must be in arrival order.
pub fn window_members(window: &Window, history: &[Item]) -> Result<Vec<ItemId>> {
    let latest = history.last().map_or(0, |it| it.t.0);
    if window.end.0 > latest {
        return Err(Error::Input(format!(
            "window end {} is beyond the latest arrived timestep {}",
            window.end, latest
        )));
    }
    let start = window.start();
    let lo = history.partition_point(|it| it.t < start);
    let hi = history.partition_point(|it| it.t <= window.end);
    Ok(history[lo..hi].iter().map(|it| it.id).collect())
}

/// Upper bound `M` on the optimum together with the accuracy parameter.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Bounds {
    pub upper: f64,
    pub epsilon: f64,
}

impl Bounds {
    pub fn new(upper: f64, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(upper >= 1.0) || !upper.is_finite() {
            return Err(Error::Input(format!("upper bound M must be at least 1, got {upper}")));
        }
        Ok(Bounds { upper, epsilon })
    }

    /// Smallest `L` with `(1+epsilon)^L >= M`, i.e. `ceil(log_{1+epsilon} M)`
    /// without the rounding noise of a floating-point logarithm ratio.
    pub fn log_steps(&self) -> usize {
        let base = 1.0 + self.epsilon;
        let mut steps = 0usize;
        while base.powi(steps as i32) < self.upper {
            steps += 1;
        }
        steps
    }

    /// `(1+epsilon)^0 .. (1+epsilon)^L` with `L = log_steps()`.
    pub fn geometric_grid(&self) -> Vec<f64> {
        let base = 1.0 + self.epsilon;
        (0..=self.log_steps()).map(|l| base.powi(l as i32)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn history(n: u64) -> Vec<Item> {
        (1..=n).map(|t| Item::new(t, (t - 1) as usize)).collect()
    }

    #[test]
    fn members_of_full_window() {
        let h = history(5);
        let w = Window::new(5, 3).unwrap();
        assert_eq!(window_members(&w, &h).unwrap(), vec![2, 3, 4]);
    }

    #[test]
    fn partial_first_window() {
        let h = history(5);
        let w = Window::new(2, 10).unwrap();
        assert_eq!(window_members(&w, &h).unwrap(), vec![0, 1]);
    }

    #[test]
    fn boundary_window_has_exactly_w_members() {
        let h = history(7);
        let w = Window::new(7, 7).unwrap();
        assert_eq!(window_members(&w, &h).unwrap().len(), 7);
    }

    #[test]
    fn end_beyond_stream_is_an_error() {
        let h = history(3);
        let w = Window::new(4, 2).unwrap();
        assert!(matches!(window_members(&w, &h), Err(Error::Input(_))));
    }

    #[test]
    fn expiry_rule() {
        assert!(Timestep(1).expired(Timestep(4), 3));
        assert!(!Timestep(2).expired(Timestep(4), 3));
    }

    #[test]
    fn log_steps_are_exact_on_powers() {
        assert_eq!(Bounds::new(4.0, 1.0).unwrap().log_steps(), 2);
        assert_eq!(Bounds::new(1.0, 0.2).unwrap().log_steps(), 0);
        assert_eq!(Bounds::new(100.0, 0.2).unwrap().log_steps(), 26);
    }

    #[test]
    fn bounds_reject_bad_parameters() {
        assert!(Bounds::new(4.0, 0.0).is_err());
        assert!(Bounds::new(0.5, 0.2).is_err());
    }

    proptest::proptest! {
        #[test]
        fn member_count_is_min_of_w_and_end(n in 1u64..60, end_off in 0u64..60, w in 1u64..80) {
            let h = history(n);
            let end = 1 + end_off % n;
            let members = window_members(&Window::new(end, w).unwrap(), &h).unwrap();
            proptest::prop_assert_eq!(members.len() as u64, w.min(end));
        }
    }
}
