//! Size caps and run configuration.
//!
//! Configuration files are flat `key=value` text; blank lines and lines
//! starting with `#` are ignored. Unknown keys are rejected so that typos do
//! not silently fall back to defaults.

use crate::error::{Error, Result};

/// Upper bounds that keep the exponential algorithms at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of free (unlabeled) red nodes in one independent part of a pattern.
    pub pattern_red: usize,
    /// Maximum number of free blue twin classes in one independent part of a pattern.
    pub pattern_blue: usize,
    /// Maximum number of red nodes of a host graph (hard limit 128).
    pub host_red: usize,
    /// Maximum number of blue nodes of a host graph (hard limit 128).
    pub host_blue: usize,
    /// Maximum `|V(F)| + |E(F)|` for hypergraph homomorphism counting.
    pub hypergraph_pattern: usize,
    /// Maximum number of blue nodes accepted by the exact width search.
    pub search_blue: usize,
    /// Maximum number of red nodes accepted by the exact width search.
    pub search_red: usize,
    /// Width of the window scanned by the pump-count search.
    pub pump_window: usize,
    /// Largest red variable index accepted by the logic layer.
    pub red_index_max: usize,
    /// Maximum number of nodes per colour class for isomorphism tests.
    pub iso_nodes: usize,
    /// Maximum number of terms of a materialized quantum graph.
    pub quantum_terms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            pattern_red: 14,
            pattern_blue: 10,
            host_red: 14,
            host_blue: 14,
            hypergraph_pattern: 24,
            search_blue: 8,
            search_red: 16,
            pump_window: 64,
            red_index_max: 64,
            iso_nodes: 12,
            quantum_terms: 20_000,
        }
    }
}

impl Caps {
    /// Caps large enough for every internal use; only the hard bitset limits remain.
    pub fn relaxed() -> Self {
        Caps {
            pattern_red: 64,
            pattern_blue: 4096,
            host_red: 128,
            host_blue: 128,
            hypergraph_pattern: 256,
            search_blue: 12,
            search_red: 20,
            pump_window: 256,
            red_index_max: 1024,
            iso_nodes: 64,
            quantum_terms: 1_000_000,
        }
    }
}

/// Full run configuration: caps, default `k`, and the seed for randomized suites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Size caps.
    pub caps: Caps,
    /// Default number of blue variables / width bound.
    pub k: usize,
    /// Seed for every randomized procedure.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config { caps: Caps::default(), k: 2, seed: 0 }
    }
}

impl Config {
    /// Parses flat `key=value` text on top of the defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidStructure(format!("config line {}: expected key=value", lineno + 1))
            })?;
            cfg.set(key.trim(), value.trim())?;
        }
        cfg.check()?;
        Ok(cfg)
    }

    /// Sets a single key; used both by the file parser and by command-line overrides.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let parse = |v: &str| -> Result<u64> {
            v.parse::<u64>()
                .map_err(|_| Error::InvalidStructure(format!("config key {key}: not a number: {v}")))
        };
        let n = parse(value)?;
        let c = &mut self.caps;
        match key {
            "k" => self.k = n as usize,
            "seed" => self.seed = n,
            "cap-pattern-red" | "cap_pattern_red" => c.pattern_red = n as usize,
            "cap-pattern-blue" | "cap_pattern_blue" => c.pattern_blue = n as usize,
            "cap-host-red" | "cap_host_red" => c.host_red = n as usize,
            "cap-host-blue" | "cap_host_blue" => c.host_blue = n as usize,
            "cap-hypergraph" | "cap_hypergraph" => c.hypergraph_pattern = n as usize,
            "cap-search-blue" | "cap_search_blue" => c.search_blue = n as usize,
            "cap-search-red" | "cap_search_red" => c.search_red = n as usize,
            "cap-pump-window" | "cap_pump_window" => c.pump_window = n as usize,
            "cap-red-index" | "cap_red_index" => c.red_index_max = n as usize,
            "cap-iso" | "cap_iso" => c.iso_nodes = n as usize,
            "cap-quantum-terms" | "cap_quantum_terms" => c.quantum_terms = n as usize,
            _ => return Err(Error::InvalidStructure(format!("unknown config key: {key}"))),
        }
        Ok(())
    }

    /// Checks that every cap is positive and within the hard limits.
    pub fn check(&self) -> Result<()> {
        let c = &self.caps;
        let all = [
            c.pattern_red,
            c.pattern_blue,
            c.host_red,
            c.host_blue,
            c.hypergraph_pattern,
            c.search_blue,
            c.search_red,
            c.pump_window,
            c.red_index_max,
            c.iso_nodes,
            c.quantum_terms,
        ];
        if all.iter().any(|&v| v == 0) {
            return Err(Error::InvalidStructure("all caps must be positive".into()));
        }
        if c.host_red > 128 || c.host_blue > 128 {
            return Err(Error::InvalidStructure("host caps are limited to 128".into()));
        }
        Ok(())
    }

    /// Renders the configuration back to `key=value` text.
    pub fn render(&self) -> String {
        let c = &self.caps;
        format!(
            "k={}\nseed={}\ncap-pattern-red={}\ncap-pattern-blue={}\ncap-host-red={}\ncap-host-blue={}\ncap-hypergraph={}\ncap-search-blue={}\ncap-search-red={}\ncap-pump-window={}\ncap-red-index={}\ncap-iso={}\ncap-quantum-terms={}\n",
            self.k,
            self.seed,
            c.pattern_red,
            c.pattern_blue,
            c.host_red,
            c.host_blue,
            c.hypergraph_pattern,
            c.search_blue,
            c.search_red,
            c.pump_window,
            c.red_index_max,
            c.iso_nodes,
            c.quantum_terms
        )
    }
}
