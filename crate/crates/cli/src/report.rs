//! Machine-readable command reports and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: CommandEcho,
    pub etd: String,
    pub input_fingerprint: String,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<Value>,
    pub dims: BTreeMap<String, Value>,
    /// Excluded from comparisons between runs.
    pub timing: Timing,
}

impl Report {
    pub fn new(name: &str, args: BTreeMap<String, Value>, etd: &str, fingerprint: String) -> Self {
        Report {
            command: CommandEcho {
                name: name.to_string(),
                args,
            },
            etd: etd.to_string(),
            input_fingerprint: fingerprint,
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            dims: BTreeMap::new(),
            timing: Timing { elapsed_ms: 0 },
        }
    }

    pub fn verdict(&mut self, name: impl Into<String>, pass: bool, detail: impl Serialize) {
        self.verdicts.push(Verdict {
            name: name.into(),
            pass,
            detail: serde_json::to_value(detail).expect("serializable"),
        });
    }

    pub fn witness(&mut self, row: impl Serialize) {
        self.witnesses.push(serde_json::to_value(row).expect("serializable"));
    }

    pub fn dim(&mut self, key: &str, value: impl Serialize) {
        self.dims.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass() {
            0
        } else {
            1
        }
    }

    /// The JSON value with the timing field removed.
    pub fn stable_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing");
        v
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
            OutputFormat::Csv => self.csv(),
            OutputFormat::Text => self.text(),
        }
    }

    fn csv(&self) -> String {
        let mut header: Vec<String> = Vec::new();
        for w in &self.witnesses {
            if let Value::Object(m) = w {
                for k in m.keys() {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
        }
        let mut out = csv::Writer::from_writer(Vec::new());
        if header.is_empty() {
            out.write_record(["verdict", "pass"]).expect("in-memory write");
            for v in &self.verdicts {
                out.write_record([v.name.as_str(), if v.pass { "true" } else { "false" }]).expect("in-memory write");
            }
        } else {
            out.write_record(&header).expect("in-memory write");
            for w in &self.witnesses {
                let row: Vec<String> = header.iter().map(|k| cell(w.get(k))).collect();
                out.write_record(&row).expect("in-memory write");
            }
        }
        String::from_utf8(out.into_inner().expect("flush")).expect("utf-8")
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {} [{}]", self.command.name, self.etd, &self.input_fingerprint.get(..12).unwrap_or_default());
        for v in &self.verdicts {
            let _ = writeln!(s, "{} {}  {}", if v.pass { "PASS" } else { "FAIL" }, v.name, compact(&v.detail));
        }
        for (k, v) in &self.dims {
            let _ = writeln!(s, "  {k} = {}", compact(v));
        }
        let failing: Vec<&Value> = self.witnesses.iter().filter(|w| w.get("pass") == Some(&Value::Bool(false))).collect();
        let shown = if failing.is_empty() && self.witnesses.len() <= 40 { self.witnesses.iter().collect() } else { failing };
        for w in shown {
            let _ = writeln!(s, "  - {}", compact(w));
        }
        s
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
