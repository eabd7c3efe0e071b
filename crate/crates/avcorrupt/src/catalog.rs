//! The closed set of corruption families and how each one maps onto its
//! audio and visual branches.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The fifteen co-occurring corruption families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorruptionFamily {
    Gaussian,
    Impulse,
    Shot,
    Speckle,
    Compression,
    Snow,
    Frost,
    Spatter,
    Wind,
    Rain,
    Underwater,
    Concert,
    Smoke,
    Crowd,
    Interference,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CorruptionGroup {
    Digital,
    Environmental,
    HumanRelated,
}

/// The four additive digital noise shapes shared by audio and frames.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NoiseKind {
    Gaussian,
    Impulse,
    Shot,
    Speckle,
}

/// How a family corrupts the audio stream.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AudioBranch {
    /// Synthesized noise mixed at the scheduled SNR.
    Additive(NoiseKind),
    /// Block-DCT bitrate quantization.
    Compression,
    /// A pool-selected recording overlaid at the scheduled SNR.
    Overlay,
    /// Random contiguous silencing.
    Silence,
}

#[derive(Debug, Error)]
#[error("unknown corruption family '{given}'; valid families: {valid}")]
pub struct UnknownFamily {
    pub given: String,
    pub valid: String,
}

impl CorruptionFamily {
    pub const ALL: [CorruptionFamily; 15] = [
        CorruptionFamily::Gaussian,
        CorruptionFamily::Impulse,
        CorruptionFamily::Shot,
        CorruptionFamily::Speckle,
        CorruptionFamily::Compression,
        CorruptionFamily::Snow,
        CorruptionFamily::Frost,
        CorruptionFamily::Spatter,
        CorruptionFamily::Wind,
        CorruptionFamily::Rain,
        CorruptionFamily::Underwater,
        CorruptionFamily::Concert,
        CorruptionFamily::Smoke,
        CorruptionFamily::Crowd,
        CorruptionFamily::Interference,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CorruptionFamily::Gaussian => "gaussian",
            CorruptionFamily::Impulse => "impulse",
            CorruptionFamily::Shot => "shot",
            CorruptionFamily::Speckle => "speckle",
            CorruptionFamily::Compression => "compression",
            CorruptionFamily::Snow => "snow",
            CorruptionFamily::Frost => "frost",
            CorruptionFamily::Spatter => "spatter",
            CorruptionFamily::Wind => "wind",
            CorruptionFamily::Rain => "rain",
            CorruptionFamily::Underwater => "underwater",
            CorruptionFamily::Concert => "concert",
            CorruptionFamily::Smoke => "smoke",
            CorruptionFamily::Crowd => "crowd",
            CorruptionFamily::Interference => "interference",
        }
    }

    pub fn group(self) -> CorruptionGroup {
        match self {
            CorruptionFamily::Gaussian
            | CorruptionFamily::Impulse
            | CorruptionFamily::Shot
            | CorruptionFamily::Speckle
            | CorruptionFamily::Compression => CorruptionGroup::Digital,
            CorruptionFamily::Snow
            | CorruptionFamily::Frost
            | CorruptionFamily::Spatter
            | CorruptionFamily::Wind
            | CorruptionFamily::Rain
            | CorruptionFamily::Underwater => CorruptionGroup::Environmental,
            CorruptionFamily::Concert
            | CorruptionFamily::Smoke
            | CorruptionFamily::Crowd
            | CorruptionFamily::Interference => CorruptionGroup::HumanRelated,
        }
    }

    pub fn audio_branch(self) -> AudioBranch {
        match self {
            CorruptionFamily::Gaussian => AudioBranch::Additive(NoiseKind::Gaussian),
            CorruptionFamily::Impulse => AudioBranch::Additive(NoiseKind::Impulse),
            CorruptionFamily::Shot => AudioBranch::Additive(NoiseKind::Shot),
            CorruptionFamily::Speckle => AudioBranch::Additive(NoiseKind::Speckle),
            CorruptionFamily::Compression => AudioBranch::Compression,
            CorruptionFamily::Snow
            | CorruptionFamily::Frost
            | CorruptionFamily::Spatter
            | CorruptionFamily::Wind
            | CorruptionFamily::Rain
            | CorruptionFamily::Underwater
            | CorruptionFamily::Concert
            | CorruptionFamily::Smoke
            | CorruptionFamily::Crowd => AudioBranch::Overlay,
            CorruptionFamily::Interference => AudioBranch::Silence,
        }
    }

    /// True when the audio branch mixes an overlay selected from a pool.
    pub fn uses_audio_pool(self) -> bool {
        matches!(self.audio_branch(), AudioBranch::Overlay)
    }

    /// Manifest key for the frost visual textures.
    pub const FROST_TEXTURE_KEY: &'static str = "frost_texture";

    pub fn valid_names() -> String {
        Self::ALL
            .iter()
            .map(|f| f.name())
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Display for CorruptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for CorruptionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorruptionGroup::Digital => "digital",
            CorruptionGroup::Environmental => "environmental",
            CorruptionGroup::HumanRelated => "human-related",
        })
    }
}

impl FromStr for CorruptionFamily {
    type Err = UnknownFamily;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| UnknownFamily {
                given: s.to_string(),
                valid: Self::valid_names(),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_families_round_trip() {
        assert_eq!(CorruptionFamily::ALL.len(), 15);
        for f in CorruptionFamily::ALL {
            assert_eq!(f.name().parse::<CorruptionFamily>().unwrap(), f);
        }
    }

    #[test]
    fn unknown_family_lists_the_valid_set() {
        let err = "fog".parse::<CorruptionFamily>().unwrap_err();
        assert_eq!(err.given, "fog");
        for f in CorruptionFamily::ALL {
            assert!(err.valid.contains(f.name()));
        }
    }

    #[test]
    fn group_sizes_match_taxonomy() {
        let digital = CorruptionFamily::ALL
            .iter()
            .filter(|f| f.group() == CorruptionGroup::Digital)
            .count();
        let env = CorruptionFamily::ALL
            .iter()
            .filter(|f| f.group() == CorruptionGroup::Environmental)
            .count();
        let human = CorruptionFamily::ALL
            .iter()
            .filter(|f| f.group() == CorruptionGroup::HumanRelated)
            .count();
        assert_eq!((digital, env, human), (5, 6, 4));
    }

    #[test]
    fn nine_families_use_the_audio_pool() {
        let overlays = CorruptionFamily::ALL
            .iter()
            .filter(|f| f.uses_audio_pool())
            .count();
        assert_eq!(overlays, 9);
    }
}
