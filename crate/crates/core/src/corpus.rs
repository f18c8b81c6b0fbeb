//! Named example words.

use crate::error::{QwError, Result};
use crate::stream::StreamSpec;

/// 41-letter word covered by `aba`; continues with `aba` forever.
pub const EXAMPLE_COVERED: &str = "ababaabaabaababababaabababaabaabaababaaba";

/// Source of the integration example: `01121010201` then zeros.
pub const EXAMPLE_SOURCE: &str = "01121010201";

pub const EXAMPLE_BASE: &str = "aabcaa";

const NAMES: &[&str] = &[
    "paper-example-1",
    "paper-example-2-source",
    "paper-example-2",
    "fibonacci",
    "fibonacci-ab",
    "sturmian-2-1",
    "tower",
    "periodic-ab",
    "periodic-aba",
    "random",
    "non-recurrent",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

fn periodic(word: &str) -> StreamSpec {
    StreamSpec::Periodic {
        word: word.into(),
        alphabet: None,
    }
}

pub fn spec(name: &str) -> Result<StreamSpec> {
    Ok(match name {
        "paper-example-1" => StreamSpec::Concat {
            head: EXAMPLE_COVERED.into(),
            tail: Some(Box::new(periodic("aba"))),
            alphabet: Some("ab".into()),
        },
        "paper-example-2-source" => StreamSpec::Concat {
            head: EXAMPLE_SOURCE.into(),
            tail: Some(Box::new(StreamSpec::Periodic {
                word: "0".into(),
                alphabet: Some("012".into()),
            })),
            alphabet: Some("012".into()),
        },
        "paper-example-2" => StreamSpec::Integrate {
            word: EXAMPLE_BASE.into(),
            of: Box::new(spec("paper-example-2-source")?),
        },
        "fibonacci" => StreamSpec::FixedPointOfIntegration { word: "010".into() },
        "fibonacci-ab" => StreamSpec::Morphism {
            images: vec!["ab".into(), "a".into()],
            start: 0,
            alphabet: Some("ab".into()),
        },
        "sturmian-2-1" => StreamSpec::Sturmian { cf: vec![2, 1] },
        "tower" => StreamSpec::Tower {
            phi: vec![(3, 2), (81, 3)],
        },
        "periodic-ab" => periodic("ab"),
        "periodic-aba" => periodic("aba"),
        "random" => StreamSpec::Random {
            size: 2,
            seed: 2024,
        },
        "non-recurrent" => StreamSpec::Integrate {
            word: "aba".into(),
            of: Box::new(StreamSpec::Concat {
                head: "1".into(),
                tail: Some(Box::new(StreamSpec::Periodic {
                    word: "0".into(),
                    alphabet: Some("01".into()),
                })),
                alphabet: Some("01".into()),
            }),
        },
        _ => return Err(QwError::Malformed(format!("unknown corpus word '{name}'"))),
    })
}
