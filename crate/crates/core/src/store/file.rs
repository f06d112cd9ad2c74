use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{Record, StoreSnapshot};
use crate::error::{Error, Result};

const FILE_NAME: &str = "swarm.db";
const MAGIC: &str = "SWARMDB 1";

/// Compaction kicks in once the log holds this many records more than twice
/// the number of live rows.
const COMPACT_SLACK: usize = 4096;

/// Append-only JSONL log, one [`Record`] per line below a magic header line.
pub(crate) struct LogFile {
    path: PathBuf,
    out: BufWriter<File>,
    records: usize,
}

impl LogFile {
    pub(crate) fn open(dir: &Path) -> Result<(LogFile, Vec<Record>)> {
        fs::create_dir_all(dir)?;
        let path = dir.join(FILE_NAME);
        let mut records = Vec::new();
        if path.exists() {
            records = read_log(&path)?;
        } else {
            let mut f = File::create(&path)?;
            writeln!(f, "{MAGIC}")?;
            f.sync_all()?;
        }
        let file = OpenOptions::new().append(true).open(&path)?;
        let count = records.len();
        Ok((LogFile { path, out: BufWriter::new(file), records: count }, records))
    }

    pub(crate) fn append(&mut self, records: &[Record]) -> Result<()> {
        for record in records {
            serde_json::to_writer(&mut self.out, record)?;
            self.out.write_all(b"\n")?;
        }
        self.out.flush()?;
        self.records += records.len();
        Ok(())
    }

    pub(crate) fn should_compact(&self, live_rows: usize) -> bool {
        self.records > 2 * live_rows + COMPACT_SLACK
    }

    pub(crate) fn compact(&mut self, data: &StoreSnapshot) -> Result<()> {
        self.out.flush()?;
        let tmp = self.path.with_extension("db.compact");
        let mut count = 0;
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            writeln!(w, "{MAGIC}")?;
            for key in data.insertion_order() {
                if let Some(record) = data.record_for(key) {
                    serde_json::to_writer(&mut w, &record)?;
                    w.write_all(b"\n")?;
                    count += 1;
                }
            }
            w.flush()?;
            w.get_ref().sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        self.out = BufWriter::new(OpenOptions::new().append(true).open(&self.path)?);
        self.records = count;
        Ok(())
    }
}

fn read_log(path: &Path) -> Result<Vec<Record>> {
    let corrupt = |reason: String| Error::CorruptStore { path: path.to_owned(), reason };
    let text = fs::read_to_string(path)?;
    let Some(body) = text.strip_prefix(MAGIC).and_then(|rest| rest.strip_prefix('\n')) else {
        let header = text.lines().next().unwrap_or_default();
        return Err(corrupt(format!("bad header {header:?}")));
    };
    let mut records = Vec::new();
    let mut offset = MAGIC.len() + 1;
    let mut good_end = offset;
    let mut torn = false;
    let mut lines = body.split_inclusive('\n').peekable();
    let mut lineno = 1;
    while let Some(line) = lines.next() {
        lineno += 1;
        let is_last = lines.peek().is_none();
        offset += line.len();
        if line.trim().is_empty() {
            good_end = offset;
            continue;
        }
        match (serde_json::from_str::<Record>(line), line.ends_with('\n')) {
            (Ok(r), true) => {
                records.push(r);
                good_end = offset;
            }
            (Err(e), _) if !is_last => return Err(corrupt(format!("line {lineno}: {e}"))),
            // a torn final write from a crash is dropped
            _ => torn = true,
        }
    }
    if torn {
        OpenOptions::new().write(true).open(path)?.set_len(good_end as u64)?;
    }
    Ok(records)
}
