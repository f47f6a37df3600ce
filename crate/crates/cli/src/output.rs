//! Output documents: human-readable text or `key = value` reports.

use clap::ValueEnum;
use spelab_core::Payoffs;
use std::fmt::Display;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Report,
}

pub struct Out {
    format: Format,
    buf: String,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out {
            format,
            buf: String::new(),
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// A named scalar: `key = value`, or `key with spaces: value` as text.
    pub fn field(&mut self, key: &str, value: impl Display) {
        match self.format {
            Format::Report => self.buf.push_str(&format!("{key} = {value}\n")),
            Format::Text => self
                .buf
                .push_str(&format!("{}: {value}\n", key.replace('_', " "))),
        }
    }

    /// The `index`-th (1-based) entry of a list, optionally with payoffs.
    pub fn item(
        &mut self,
        key: &str,
        index: usize,
        value: impl Display,
        payoffs: Option<&Payoffs>,
    ) {
        match self.format {
            Format::Report => {
                self.buf.push_str(&format!("{key}.{index} = {value}\n"));
                if let Some(p) = payoffs {
                    self.buf.push_str(&format!("{key}.{index}.payoffs = {p}\n"));
                }
            }
            Format::Text => match payoffs {
                Some(p) => self.buf.push_str(&format!("  {value}  {p}\n")),
                None => self.buf.push_str(&format!("  {value}\n")),
            },
        }
    }

    /// A profile in the profile file format. Reports use one
    /// `profile.<node> = <distribution>` line per node.
    pub fn profile(&mut self, text: &str) {
        match self.format {
            Format::Report => {
                for line in text.lines() {
                    let entry = line.strip_prefix("at ").and_then(|l| l.split_once(": "));
                    if let Some((node, dist)) = entry {
                        self.buf.push_str(&format!("profile.{node} = {dist}\n"));
                    }
                }
            }
            Format::Text => {
                self.buf.push_str("profile:\n");
                self.buf.push_str(text);
            }
        }
    }

    /// Verbatim output that is a file format of its own (game text, DOT).
    pub fn raw(&mut self, text: &str) {
        self.buf.push_str(text);
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}
