use serde::Serialize;

/// Both renderings of one command's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rendered {
    pub csv: String,
    pub json: String,
}

impl Rendered {
    pub fn new<R: Serialize>(record: &R, csv: String) -> Self {
        let mut json = serde_json::to_string_pretty(record).expect("records serialize");
        json.push('\n');
        Rendered { csv, json }
    }
}

/// CSV table builder over the `csv` crate's quoting rules.
pub struct Table {
    done: String,
    writer: csv::Writer<Vec<u8>>,
}

fn writer(header: &[&str]) -> csv::Writer<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    w
}

fn drain(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("utf-8 fields")
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            done: String::new(),
            writer: writer(header),
        }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    /// Starts a second table in the same output after a blank line.
    pub fn section(&mut self, header: &[&str]) {
        let previous = std::mem::replace(&mut self.writer, writer(header));
        self.done.push_str(&drain(previous));
        self.done.push('\n');
    }

    pub fn finish(mut self) -> String {
        self.done.push_str(&drain(self.writer));
        self.done
    }
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(ToString::to_string).unwrap_or_default()
}

pub fn join(items: impl IntoIterator<Item = usize>) -> String {
    items
        .into_iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
