//! Sweep helpers: data-parallel with rayon by default, sequential when the
//! `parallel` feature is disabled. Output order always matches input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map over a slice, in parallel when enabled.
#[cfg(feature = "parallel")]
pub fn sweep_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    I: Sync,
    O: Send,
    F: Fn(&I) -> O + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn sweep_map<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

/// Always-sequential map, kept for benchmarking against the parallel path.
pub fn sweep_map_seq<I, O, F>(items: &[I], f: F) -> Vec<O>
where
    F: Fn(&I) -> O,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<usize> = (0..100).collect();
        let out = sweep_map(&items, |&i| i * i);
        let expect: Vec<usize> = items.iter().map(|&i| i * i).collect();
        assert_eq!(out, expect);
        assert_eq!(sweep_map_seq(&items, |&i| i * i), expect);
    }
}
