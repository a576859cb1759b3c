//! Versioned JSON reports and exit codes.

use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

use crate::input::InputError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// A mathematical check failed.
    CheckFailed,
    /// Budget exhausted or evidence insufficient.
    Inconclusive,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 2,
            Status::Inconclusive => 3,
        }
    }
}

pub enum Output {
    Report(Draft),
    Text(String, Status),
}

/// A report before the command echo and timing are attached.
pub struct Draft {
    command: &'static str,
    inputs: Value,
    payload: Value,
    status: Status,
    resources: serde_json::Map<String, Value>,
    started: Instant,
}

impl Draft {
    pub fn new(command: &'static str, started: Instant, inputs: Value) -> Draft {
        Draft { command, inputs, payload: Value::Null, status: Status::Ok, resources: Default::default(), started }
    }

    pub fn payload(mut self, payload: Value, status: Status) -> Draft {
        self.payload = payload;
        self.status = status;
        self
    }

    pub fn resource(mut self, key: &str, value: impl Serialize) -> Draft {
        self.resources.insert(key.into(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn finish(mut self, argv: Vec<String>) -> Report {
        let seconds = self.started.elapsed().as_secs_f64();
        self.resources.insert("seconds".into(), Value::from(seconds));
        Report {
            format_version: FORMAT_VERSION,
            command: self.command,
            argv,
            inputs: self.inputs,
            status: self.status,
            payload: self.payload,
            resources: Value::Object(self.resources),
            versions: Versions { isochron: env!("CARGO_PKG_VERSION"), format: FORMAT_VERSION },
        }
    }
}

#[derive(Serialize)]
struct Versions {
    isochron: &'static str,
    format: u32,
}

/// `payload` depends only on the inputs; `resources` holds everything that may vary.
#[derive(Serialize)]
pub struct Report {
    format_version: u32,
    command: &'static str,
    argv: Vec<String>,
    inputs: Value,
    status: Status,
    payload: Value,
    resources: Value,
    versions: Versions,
}

impl Report {
    pub fn write(&self, out: Option<&Path>) -> anyhow::Result<Status> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        write_text(&text, out)?;
        Ok(self.status)
    }
}

pub fn write_text(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn exit_code(e: &anyhow::Error) -> u8 {
    use isochron::Error as E;
    if let Some(e) = e.downcast_ref::<E>() {
        return match e {
            E::BudgetExceeded(_) => 3,
            E::Parse { .. }
            | E::UnknownFamily(_)
            | E::UnboundVariable(_)
            | E::UnknownVariable(_)
            | E::InvalidArgument(_)
            | E::MalformedSystem(_)
            | E::MissingWeight(_)
            | E::TooManyVariables(_)
            | E::VariableMismatch { .. } => 4,
            _ => 2,
        };
    }
    if e.downcast_ref::<InputError>().is_some()
        || e.downcast_ref::<std::io::Error>().is_some()
        || e.downcast_ref::<serde_json::Error>().is_some()
        || e.downcast_ref::<toml::de::Error>().is_some()
    {
        return 4;
    }
    2
}
