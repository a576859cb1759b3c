use isochron::systems::catalog;

use crate::report::{Output, Status};

#[derive(clap::Subcommand)]
pub enum Action {
    /// One line per family: id, kind, description.
    List,
    /// The family's spec as TOML.
    Show { id: String },
}

pub fn run(action: &Action) -> anyhow::Result<Output> {
    let text = match action {
        Action::List => {
            let mut s = String::new();
            for r in catalog().records() {
                let kind = serde_json::to_value(r.spec().kind)?;
                let kind = kind.as_str().unwrap_or_default().to_string();
                s.push_str(&format!("{:<22} {:<12} {}\n", r.id, kind, r.description.as_deref().unwrap_or("")));
            }
            s
        }
        Action::Show { id } => catalog().source(id)?,
    };
    Ok(Output::Text(text, Status::Ok))
}
