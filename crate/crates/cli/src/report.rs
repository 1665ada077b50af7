use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Unknown => "UNKNOWN",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail | Status::Unknown => 1,
        }
    }
}

/// Outcome of a query or check, printed as text lines or as JSON.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub bounds: Option<Value>,
    pub result: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub items: Vec<Value>,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<String>) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            bounds: None,
            result: Status::Pass,
            witness: None,
            items: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn item(&mut self, value: impl Serialize) {
        self.items.push(to_value(value));
    }

    pub fn witness(&mut self, value: impl Serialize) {
        self.witness = Some(to_value(value));
    }

    pub fn bounds(&mut self, value: impl Serialize) {
        self.bounds = Some(to_value(value));
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str("RESULT: ");
        out.push_str(self.result.label());
        out.push('\n');
        out
    }
}

pub fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("value serializes")
}
