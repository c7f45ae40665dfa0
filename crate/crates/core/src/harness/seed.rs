//! Stable seed derivation.
//!
//! Seeds for fold plans and per-fold training are hashed from the global
//! seed and the cell coordinates, so a cell's randomness never depends on
//! which other cells ran before it or on which thread ran it.

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// One component of a seed derivation.
#[derive(Debug, Clone, Copy)]
pub enum SeedPart<'a> {
    Int(u64),
    Str(&'a str),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// FNV-1a over the tagged, length-prefixed parts, finished with a
/// splitmix64 round. Stable across platforms and releases.
pub fn derive_seed(parts: &[SeedPart<'_>]) -> u64 {
    let mut h = FNV_OFFSET;
    let mut feed = |bytes: &[u8]| {
        for &b in bytes {
            h ^= u64::from(b);
            h = h.wrapping_mul(FNV_PRIME);
        }
    };
    for part in parts {
        match part {
            SeedPart::Int(v) => {
                feed(&[0]);
                feed(&v.to_le_bytes());
            }
            SeedPart::Str(s) => {
                feed(&[1]);
                feed(&(s.len() as u64).to_le_bytes());
                feed(s.as_bytes());
            }
        }
    }
    splitmix64(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use SeedPart::{Int, Str};

    #[test]
    fn stable_values() {
        // Frozen: changing these silently changes every previously written report.
        assert_eq!(derive_seed(&[]), splitmix64(FNV_OFFSET));
        assert_eq!(derive_seed(&[]), 14087677454934409008);
        assert_eq!(
            derive_seed(&[Int(42), Str("pyramid-xor"), Str("nb"), Int(4), Int(0)]),
            5727087669578993520
        );
    }

    #[test]
    fn parts_are_not_ambiguous() {
        assert_ne!(
            derive_seed(&[Str("ab"), Str("c")]),
            derive_seed(&[Str("a"), Str("bc")])
        );
        assert_ne!(
            derive_seed(&[Int(1), Int(2)]),
            derive_seed(&[Int(2), Int(1)])
        );
        assert_ne!(derive_seed(&[Int(0)]), derive_seed(&[Str("")]));
    }
}
