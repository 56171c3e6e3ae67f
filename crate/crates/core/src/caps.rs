use std::time::Duration;

use crate::error::Error;

/// Resource limits shared by the enumerators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest carrier accepted by [`crate::poset::upset_lattice`].
    pub upset_elements: usize,
    /// Largest `n` for which `Crt^n` is built.
    pub crt_n: usize,
    /// Largest lattice scanned exhaustively for distributivity.
    pub distributive_scan: usize,
    /// Samples drawn when the lattice is too large to scan.
    pub distributive_samples: usize,
    /// Largest truncation dimension for nerves.
    pub nerve_dim: usize,
    /// Inner horn report limit, counted in (simplex, horn) pairs.
    pub horn_pairs: usize,
    /// Objects allowed in a Komp category.
    pub komp_objects: usize,
    /// Directions of a grid functor.
    pub grid_directions: usize,
    /// Length of a grid functor in each direction.
    pub grid_length: usize,
    /// Grid functors produced by one enumeration.
    pub grid_functors: usize,
    /// Largest `n` for the cube certificate.
    pub cert_box_n: usize,
    /// Largest `n` for the cover certificate.
    pub cert_cart_n: usize,
    /// Backtracking budget of the certificate search.
    pub search_attempts: u64,
    pub search_time: Duration,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            upset_elements: 25,
            crt_n: 6,
            distributive_scan: 512,
            distributive_samples: 200_000,
            nerve_dim: 8,
            horn_pairs: 1_000_000,
            komp_objects: 64,
            grid_directions: 4,
            grid_length: 3,
            grid_functors: 1_000_000,
            cert_box_n: 3,
            cert_cart_n: 2,
            search_attempts: 1_000_000,
            search_time: Duration::from_secs(60),
        }
    }
}

impl Caps {
    /// Parses `KEY=VALUE` pairs separated by commas on top of the defaults.
    pub fn parse(spec: &str) -> Result<Caps, Error> {
        let mut caps = Caps::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| Error::Caps(format!("expected KEY=VALUE, got {item:?}")))?;
            let num: u64 = value
                .trim()
                .parse()
                .map_err(|_| Error::Caps(format!("not a number: {value:?}")))?;
            let as_usize = num as usize;
            match key.trim().to_ascii_uppercase().as_str() {
                "UPSET_ELEMENTS" => caps.upset_elements = as_usize.min(64),
                "CRT_N" => caps.crt_n = as_usize,
                "DISTRIBUTIVE_SCAN" => caps.distributive_scan = as_usize,
                "DISTRIBUTIVE_SAMPLES" => caps.distributive_samples = as_usize,
                "NERVE_DIM" => caps.nerve_dim = as_usize,
                "HORN_PAIRS" => caps.horn_pairs = as_usize,
                "KOMP_OBJECTS" => caps.komp_objects = as_usize,
                "GRID_DIRECTIONS" => caps.grid_directions = as_usize,
                "GRID_LENGTH" => caps.grid_length = as_usize,
                "GRID_FUNCTORS" => caps.grid_functors = as_usize,
                "CERT_BOX_N" => caps.cert_box_n = as_usize,
                "CERT_CART_N" => caps.cert_cart_n = as_usize,
                "SEARCH_ATTEMPTS" => caps.search_attempts = num,
                "SEARCH_SECONDS" => caps.search_time = Duration::from_secs(num),
                other => return Err(Error::Caps(format!("unknown cap {other}"))),
            }
        }
        Ok(caps)
    }

    /// Defaults overridden by the `NERVELAB_CAPS` environment variable.
    pub fn from_env() -> Result<Caps, Error> {
        match std::env::var("NERVELAB_CAPS") {
            Ok(spec) => Caps::parse(&spec),
            Err(_) => Ok(Caps::default()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_overrides() {
        let caps = Caps::parse("crt_n=4, KOMP_OBJECTS=10").unwrap();
        assert_eq!(caps.crt_n, 4);
        assert_eq!(caps.komp_objects, 10);
        assert_eq!(caps.upset_elements, 25);
        assert!(Caps::parse("bogus=1").is_err());
        assert!(Caps::parse("crt_n").is_err());
    }
}
