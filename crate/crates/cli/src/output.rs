use crate::args::Format;
use serde::Serialize;
use serde_json::Value;

/// What a command produced, before a format is chosen.
pub struct Doc {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub text: String,
    /// Format used when `--format` is absent.
    pub default: Format,
}

/// Rendered output plus the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Emitted {
    pub code: i32,
    pub body: String,
}

impl Doc {
    pub fn new(value: &impl Serialize) -> Doc {
        Doc {
            json: serde_json::to_value(value).expect("output types serialize"),
            header: Vec::new(),
            rows: Vec::new(),
            text: String::new(),
            default: Format::Json,
        }
    }

    pub fn csv(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Doc {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn text(mut self, text: impl Into<String>) -> Doc {
        self.text = text.into();
        if !self.text.ends_with('\n') {
            self.text.push('\n');
        }
        self
    }

    pub fn default_format(mut self, f: Format) -> Doc {
        self.default = f;
        self
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match format.unwrap_or(self.default) {
            Format::Json => {
                let mut s = serde_json::to_string(&self.json).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).expect("in-memory csv");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory csv");
                }
                String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv of utf-8 fields")
            }
            Format::Text => self.text.clone(),
        }
    }
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or(String::new(), |x| x.to_string())
}
