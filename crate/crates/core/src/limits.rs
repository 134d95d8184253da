//! Brute-force bounds. Exceeding one is reported as a capacity error.

use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order for full subgroup enumeration.
    pub max_subgroup_order: usize,
    /// Largest group order for the isomorphism search.
    pub max_isomorphism_order: usize,
    /// Highest cochain degree handled by the cohomology engine.
    pub max_degree: usize,
    /// Largest number of entries in a single cochain table.
    pub max_cochain_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_subgroup_order: 64,
            max_isomorphism_order: 24,
            max_degree: 5,
            max_cochain_cells: 1 << 24,
        }
    }
}

impl Limits {
    /// Defaults overridden by `FINSYLOW_MAX_SUBGROUP_ORDER`,
    /// `FINSYLOW_MAX_ISO_ORDER`, `FINSYLOW_MAX_DEGREE` and
    /// `FINSYLOW_MAX_COCHAIN_CELLS`.
    pub fn from_env() -> Self {
        fn read(name: &str, default: usize) -> usize {
            std::env::var(name)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(default)
        }
        let d = Limits::default();
        Limits {
            max_subgroup_order: read("FINSYLOW_MAX_SUBGROUP_ORDER", d.max_subgroup_order),
            max_isomorphism_order: read("FINSYLOW_MAX_ISO_ORDER", d.max_isomorphism_order),
            max_degree: read("FINSYLOW_MAX_DEGREE", d.max_degree),
            max_cochain_cells: read("FINSYLOW_MAX_COCHAIN_CELLS", d.max_cochain_cells),
        }
    }

    /// Process-wide limits, read from the environment once.
    pub fn global() -> &'static Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        LIMITS.get_or_init(Limits::from_env)
    }
}
