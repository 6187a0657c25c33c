use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use scount::numberfield::FieldConfig;
use scount::rational::parse;
use scount::report::{geometric, parse_grid};
use scount::{Error, Rational, Result, SystemKind};

/// The JSON run file: the field configuration plus optional defaults for
/// every command-line flag.
#[derive(Clone, Debug, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub field: FieldConfig,
    pub command: Option<String>,
    pub n: Option<u32>,
    pub e: Option<u32>,
    pub system: Option<SystemKind>,
    pub grid: Option<GridSpec>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub ceiling: Option<u64>,
    pub materialize: Option<bool>,
    pub out: Option<PathBuf>,
    pub points: Option<PathBuf>,
    pub suite: Option<String>,
    pub timing: Option<bool>,
    pub samples: Option<u64>,
    pub pairs: Option<usize>,
    pub davenport_ceiling: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Text(String),
    List(Vec<Value>),
    Range { from: Value, to: Value, steps: u32 },
}

fn number(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse(s),
        Value::Number(n) => parse(&n.to_string()),
        other => Err(Error::Config(format!("grid entry {other} is not a number"))),
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<Rational>> {
        match self {
            GridSpec::Text(s) => parse_grid(s),
            GridSpec::List(items) => {
                let text: Vec<String> = items.iter().map(|v| number(v).map(|r| r.to_string())).collect::<Result<_>>()?;
                parse_grid(&text.join(","))
            }
            GridSpec::Range { from, to, steps } => {
                let values = geometric(&number(from)?, &number(to)?, *steps)?;
                let text: Vec<String> = values.iter().map(|r| r.to_string()).collect();
                parse_grid(&text.join(","))
            }
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }
}
