//! Arrangement files and the bundled examples.

use std::path::Path;

use serde::{Deserialize, Serialize};
use toric_core::arrangement::{
    essentialize, expand_equation, find_chain, format_value, parse_value, verify_chain, Arrangement, Chain,
    ChainVerdict, IdealFailure,
};
use toric_core::fixtures::{self, Fixture};
use toric_core::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersurfaceEntry {
    pub character: Vec<i64>,
    /// `p/q` in `[0, 1)`: the hypersurface is `t^character = exp(2πi p/q)`.
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characters: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypersurfaces: Option<Vec<HypersurfaceEntry>>,
    /// Cocharacters from the top level down.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl ArrangementFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("arrangement file: {e}")))
    }

    pub fn arrangement(&self) -> Result<Arrangement> {
        if self.characters.is_none() && self.hypersurfaces.is_none() {
            return Err(Error::Parse("arrangement file needs characters or hypersurfaces".into()));
        }
        let mut a = Arrangement::from_characters(self.dimension, self.characters.as_deref().unwrap_or(&[]))?;
        for h in self.hypersurfaces.iter().flatten() {
            if h.character.len() != self.dimension {
                return Err(Error::Parse(format!(
                    "character {:?} does not have dimension {}",
                    h.character, self.dimension
                )));
            }
            let value = parse_value(&h.value)?;
            if format_value(&value) != h.value.trim() {
                return Err(Error::Parse(format!("value {} is not a reduced fraction in [0, 1)", h.value)));
            }
            for c in expand_equation(&h.character, value)? {
                a.push(c)?;
            }
        }
        Ok(a)
    }

    pub fn from_fixture(fx: &Fixture) -> Self {
        ArrangementFile {
            dimension: fx.arrangement.dim,
            characters: None,
            hypersurfaces: Some(
                fx.arrangement
                    .hypersurfaces
                    .iter()
                    .map(|h| HypersurfaceEntry { character: h.chi.clone(), value: format_value(&h.value) })
                    .collect(),
            ),
            chain: Some(fx.chain.clone()),
            name: Some(fx.name.clone()),
        }
    }
}

/// A resolved input: the arrangement and the chain the file asks for, if any.
pub struct Input {
    pub name: String,
    pub arrangement: Arrangement,
    pub chain: Option<Vec<Vec<i64>>>,
}

const EXAMPLES: [&str; 3] = ["exA", "circuit", "typeC"];

/// Reads `SOURCE`: a path to an arrangement file, or an example name
/// followed by its integer arguments.
pub fn load(source: &[String]) -> Result<Input> {
    let (first, rest) = source.split_first().ok_or_else(|| Error::Parse("missing input".into()))?;
    if EXAMPLES.contains(&first.as_str()) && !Path::new(first).exists() {
        let args = rest
            .iter()
            .map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("example argument {s} is not an integer"))))
            .collect::<Result<Vec<_>>>()?;
        let fx = fixtures::by_name(first, &args)?;
        return Ok(Input { name: fx.name.clone(), arrangement: fx.arrangement, chain: Some(fx.chain) });
    }
    if !rest.is_empty() {
        return Err(Error::Parse(format!("unexpected arguments after {first}: {rest:?}")));
    }
    let text = std::fs::read_to_string(first).map_err(|e| Error::Parse(format!("cannot read {first}: {e}")))?;
    let file = ArrangementFile::parse(&text)?;
    Ok(Input {
        name: file.name.clone().unwrap_or_else(|| first.clone()),
        arrangement: file.arrangement()?,
        chain: file.chain.clone(),
    })
}

pub fn fixture(source: &[String]) -> Result<Fixture> {
    let (first, rest) = source.split_first().ok_or_else(|| Error::Parse("missing example name".into()))?;
    let args = rest
        .iter()
        .map(|s| s.parse::<i64>().map_err(|_| Error::Parse(format!("example argument {s} is not an integer"))))
        .collect::<Result<Vec<_>>>()?;
    fixtures::by_name(first, &args)
}

pub enum Resolved {
    Chain(Chain),
    /// The given chain fails at `level`.
    Invalid { level: usize, failure: IdealFailure },
    /// Search found nothing; this does not rule out a chain.
    Unknown,
}

/// The chain for an input: the given one if present, else a search result.
/// Non-essential arrangements are essentialized first when searching.
pub fn resolve_chain(input: &Input) -> Result<Resolved> {
    match &input.chain {
        Some(cochars) => Ok(match verify_chain(&input.arrangement, cochars)? {
            ChainVerdict::Valid(c) => Resolved::Chain(c),
            ChainVerdict::Invalid { level, failure } => Resolved::Invalid { level, failure },
        }),
        None => {
            let a = if input.arrangement.is_essential() {
                input.arrangement.clone()
            } else {
                essentialize(&input.arrangement)?
            };
            Ok(find_chain(&a)?.map_or(Resolved::Unknown, Resolved::Chain))
        }
    }
}

pub fn require_chain(input: &Input) -> Result<Chain> {
    match resolve_chain(input)? {
        Resolved::Chain(c) => Ok(c),
        Resolved::Invalid { level, failure } => {
            Err(Error::Infeasible(format!("the given chain fails at level {level}: {failure:?}")))
        }
        Resolved::Unknown => Err(Error::Infeasible("no supersolvable chain found".into())),
    }
}
